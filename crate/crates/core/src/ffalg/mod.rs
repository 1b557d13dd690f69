//! Arithmetic of F_q = F_{p^l} and of R_T = F_q[T].

pub mod factor;
pub mod field;
pub mod poly;

pub use factor::{factor, factor_with_seed, is_irreducible, Factorization};
pub use field::{is_prime, Fq, FqElem, FqScalar, GroundField};
pub use poly::{Degree, Poly};
