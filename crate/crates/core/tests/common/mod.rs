//! Random instance generators shared by the integration tests.

#![allow(dead_code)]

use ffgenus::extdesc::{AswExt, Caps};
use ffgenus::ffalg::{is_irreducible, Fq, FqElem, Poly};
use ffgenus::ratfrac::RatFn;
use ffgenus::witt::WittVec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn poly(f: &Fq, c: &[u64]) -> Poly {
    Poly::from_ints(f, c)
}

pub fn rat(f: &Fq, n: &[u64], d: &[u64]) -> RatFn {
    RatFn::new(poly(f, n), poly(f, d)).unwrap()
}

/// Uniform polynomial of degree below `n`.
pub fn random_poly_below(f: &Fq, n: usize, rng: &mut ChaCha8Rng) -> Poly {
    let coeffs = (0..n).map(|_| FqElem(rng.gen_range(0..f.q()) as u32)).collect();
    Poly::new(f, coeffs)
}

pub fn random_monic(f: &Fq, d: usize, rng: &mut ChaCha8Rng) -> Poly {
    let mut coeffs: Vec<FqElem> = (0..d).map(|_| FqElem(rng.gen_range(0..f.q()) as u32)).collect();
    coeffs.push(f.one());
    Poly::new(f, coeffs)
}

pub fn random_prime(f: &Fq, d: usize, rng: &mut ChaCha8Rng) -> Poly {
    loop {
        let p = random_monic(f, d, rng);
        if is_irreducible(&p).unwrap() {
            return p;
        }
    }
}

/// `r` distinct monic primes of degree at most `max_deg`.
pub fn random_primes(f: &Fq, r: usize, max_deg: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::new();
    while out.len() < r {
        let p = random_prime(f, rng.gen_range(1..=max_deg), rng);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out.sort();
    out
}

/// `sum_i Q_i / P_i^(e_i) + f(T)` with at most `max_primes` primes of degree
/// at most 2, pole orders at most `max_pole` (also at infinity).
pub fn random_as_function(f: &Fq, max_primes: usize, max_pole: usize, rng: &mut ChaCha8Rng) -> RatFn {
    let r = rng.gen_range(0..=max_primes);
    let mut acc = RatFn::zero(f);
    for prime in random_primes(f, r, 2, rng) {
        let e = rng.gen_range(1..=max_pole);
        let pe = prime.pow(e as u64);
        let q = loop {
            let q = random_poly_below(f, pe.deg().unwrap(), rng);
            if !q.is_zero() && !prime.divides(&q) {
                break q;
            }
        };
        acc = &acc + &RatFn::new(q, pe).unwrap();
    }
    let poly_part = random_poly_below(f, rng.gen_range(0..=max_pole + 1), rng);
    &acc + &RatFn::from_poly(poly_part)
}

/// Monic squarefree polynomial of degree between 1 and `max_deg`.
pub fn random_squarefree(f: &Fq, max_deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    loop {
        let d = random_monic(f, rng.gen_range(1..=max_deg), rng);
        let g = d.gcd(&d.derivative());
        if g.is_one() {
            return d;
        }
    }
}

pub fn asw1(x: RatFn) -> AswExt {
    AswExt::new(1, WittVec::new(vec![x]).unwrap(), None, &Caps::default()).unwrap()
}
