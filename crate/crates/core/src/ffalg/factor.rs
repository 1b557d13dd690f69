//! Factorization in F_q[T]: squarefree decomposition, distinct-degree
//! splitting, then Cantor–Zassenhaus equal-degree splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::FqElem;
use super::poly::Poly;
use crate::error::{Error, Result};

/// `f = lead * prod(P^e)` with monic irreducible, pairwise distinct `P`,
/// sorted by the [`Poly`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub lead: FqElem,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, reference: &Poly) -> Poly {
        let f = reference.field();
        self.factors
            .iter()
            .fold(Poly::constant(f, self.lead), |acc, (p, e)| &acc * &p.pow(*e as u64))
    }

    pub fn primes(&self) -> impl Iterator<Item = &Poly> {
        self.factors.iter().map(|(p, _)| p)
    }
}

fn seed_from(f: &Poly) -> u64 {
    // FNV-1a over coefficient codes
    f.coeffs().iter().fold(0xcbf2_9ce4_8422_2325u64, |h, c| {
        (h ^ c.0 as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

pub fn factor(f: &Poly) -> Result<Factorization> {
    factor_with_seed(f, seed_from(f))
}

pub fn factor_with_seed(f: &Poly, seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lead = f.lead();
    let g = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (part, mult) in squarefree(&g) {
        for (dd, d) in distinct_degree(&part) {
            for irr in equal_degree(&dd, d, &mut rng) {
                out.push((irr, mult));
            }
        }
    }
    out.sort();
    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (p, e) in out {
        match merged.last_mut() {
            Some((lp, le)) if *lp == p => *le += e,
            _ => merged.push((p, e)),
        }
    }
    Ok(Factorization { lead, factors: merged })
}

/// Squarefree decomposition of a monic polynomial: pairs (g_i, i) with
/// f = prod g_i^i and each g_i squarefree.
pub fn squarefree(f: &Poly) -> Vec<(Poly, u32)> {
    let field = f.field().clone();
    let p = field.p() as u32;
    let mut result = Vec::new();
    if f.is_constant() {
        return result;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_rem(&c).0;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).0;
        if !z.is_one() {
            result.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_rem(&w).0;
    }
    if !c.is_one() {
        let root = c.pth_root().expect("derivative vanishes, so exponents are multiples of p");
        for (g, m) in squarefree(&root) {
            result.push((g, m * p));
        }
    }
    let _ = field;
    result
}

/// Splits a monic squarefree polynomial into products of irreducibles of equal degree.
pub fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let q = field.q() as u128;
    let x = Poly::t(field);
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut out = Vec::new();
    let mut d = 1usize;
    while rest.deg().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(q, &rest);
        let g = (&h - &x).gcd(&rest);
        if !g.is_one() {
            out.push((g.clone(), d));
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
        }
        d += 1;
    }
    if rest.deg().unwrap_or(0) > 0 {
        let dr = rest.deg().unwrap();
        out.push((rest, dr));
    }
    out
}

fn random_poly(f: &Poly, rng: &mut ChaCha8Rng) -> Poly {
    let field = f.field();
    let n = f.deg().unwrap();
    let v = (0..n).map(|_| FqElem(rng.gen_range(0..field.q() as u32))).collect();
    Poly::new(field, v)
}

/// Cantor–Zassenhaus splitting of a product of distinct irreducibles of degree `d`.
pub fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.deg().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field();
    let q = field.q() as u128;
    loop {
        let a = random_poly(f, rng);
        if a.is_constant() {
            continue;
        }
        let b = if field.p() == 2 {
            // absolute trace to F_2 of a in F_{q^d}
            let mut acc = a.clone();
            let mut cur = a.clone();
            for _ in 1..(field.l() as usize * d) {
                cur = cur.mul_mod(&cur, f);
                acc = &acc + &cur;
            }
            acc
        } else {
            // a^((q^d - 1)/2) = (a^(1 + q + ... + q^(d-1)))^((q - 1)/2)
            let mut norm = a.clone();
            let mut cur = a.clone();
            for _ in 1..d {
                cur = cur.pow_mod(q, f);
                norm = norm.mul_mod(&cur, f);
            }
            &norm.pow_mod((q - 1) / 2, f) - &Poly::one(field)
        };
        let g = b.gcd(f);
        if !g.is_one() && g.deg() != f.deg() && !g.is_zero() {
            let h = f.div_rem(&g).0;
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let g = f.monic();
    let n = g.deg().unwrap();
    let q = g.field().q() as u128;
    let x = Poly::t(g.field());
    let frob_pow = |k: usize| {
        let mut h = x.rem(&g);
        for _ in 0..k {
            h = h.pow_mod(q, &g);
        }
        h
    };
    if !(&frob_pow(n) - &x).rem(&g).is_zero() {
        return Ok(false);
    }
    for r in prime_divisors(n) {
        if !(&frob_pow(n / r) - &x).gcd(&g).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}
