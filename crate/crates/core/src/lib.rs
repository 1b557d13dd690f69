//! Genus fields and conductors of constants for finite abelian extensions
//! of the rational function field k = F_q(T).

pub mod chars;
pub mod cli;
pub mod error;
pub mod extdesc;
pub mod ffalg;
pub mod genus;
pub mod oracle;
pub mod ramify;
pub mod ratfrac;
pub mod witt;

pub use error::{Error, Result};
