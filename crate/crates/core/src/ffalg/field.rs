//! The finite field F_q = F_p[x]/(m(x)).
//!
//! Elements are stored as integers in `[0, q)` whose base-p digits are the
//! coefficients of the reduced representative, lowest degree first. Nonzero
//! multiplication goes through discrete log/exp tables built once per field.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order accepted by [`Fq::new`].
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// An element of F_q, identified by its base-p digit encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqElem(pub u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
pub struct GroundField {
    p: u64,
    l: u32,
    q: u64,
    /// Monic modulus over F_p, ascending coefficients, length l + 1.
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

/// Shared handle to a [`GroundField`]. Cloning is cheap.
#[derive(Clone)]
pub struct Fq(Arc<GroundField>);

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.l == other.0.l)
    }
}
impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.p, self.0.l)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Fq {
    /// Builds F_{p^l} using the least monic irreducible modulus of degree l,
    /// where candidates are ordered by the integer sum c_i p^i of their
    /// lower coefficients.
    pub fn new(p: u64, l: u32) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if l == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u128).checked_pow(l).unwrap_or(u128::MAX);
        if q > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge(q));
        }
        let q = q as u64;
        if l == 1 {
            return Ok(Fq(Arc::new(GroundField::build(p, 1, q, vec![0, 1]))));
        }
        let fp = Fq::new(p, 1)?;
        let pl = p.pow(l);
        for code in 0..pl {
            let mut coeffs: Vec<u64> = (0..l).map(|i| (code / p.pow(i)) % p).collect();
            coeffs.push(1);
            let poly = super::Poly::from_ints(&fp, &coeffs);
            if super::factor::is_irreducible(&poly)? {
                return Ok(Fq(Arc::new(GroundField::build(p, l, q, coeffs))));
            }
        }
        Err(Error::Internal(format!("no irreducible polynomial of degree {l} over F_{p}")))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn l(&self) -> u32 {
        self.0.l
    }
    pub fn q(&self) -> u64 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }
    pub fn one(&self) -> FqElem {
        FqElem::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element from its encoding; fails if out of range.
    pub fn elem(&self, code: u64) -> Result<FqElem> {
        if code >= self.0.q {
            return Err(Error::Schema(format!("field element {code} out of range [0, {})", self.0.q)));
        }
        Ok(FqElem(code as u32))
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.0.q as u32).map(FqElem)
    }

    /// Base-p digits (coefficients over F_p), length l.
    pub fn digits(&self, a: FqElem) -> Vec<u64> {
        let p = self.0.p;
        let mut x = a.0 as u64;
        (0..self.0.l)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u64]) -> Result<FqElem> {
        if digits.len() != self.0.l as usize || digits.iter().any(|&d| d >= self.0.p) {
            return Err(Error::Schema(format!("bad digit list {digits:?} for F_{}", self.0.q)));
        }
        let code = digits.iter().rev().fold(0u64, |acc, &d| acc * self.0.p + d);
        Ok(FqElem(code as u32))
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let f = &self.0;
        if f.l == 1 {
            return FqElem(((a.0 as u64 + b.0 as u64) % f.p) as u32);
        }
        if let Some(t) = &f.add_table {
            return FqElem(t[a.0 as usize * f.q as usize + b.0 as usize]);
        }
        FqElem(digit_add(f.p, a.0 as u64, b.0 as u64, false) as u32)
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        let f = &self.0;
        if f.l == 1 {
            return FqElem(((f.p - a.0 as u64) % f.p) as u32);
        }
        FqElem(digit_add(f.p, 0, a.0 as u64, true) as u32)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let f = &self.0;
        if a.is_zero() || b.is_zero() {
            return FqElem::ZERO;
        }
        if f.l == 1 {
            return FqElem(((a.0 as u64 * b.0 as u64) % f.p) as u32);
        }
        let n = f.q - 1;
        let e = (f.log[a.0 as usize] as u64 + f.log[b.0 as usize] as u64) % n;
        FqElem(f.exp[e as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        if a.is_zero() {
            return None;
        }
        let f = &self.0;
        let n = f.q - 1;
        let e = (n - f.log[a.0 as usize] as u64) % n;
        Some(FqElem(f.exp[e as usize]))
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Option<FqElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        if e == 0 {
            return FqElem::ONE;
        }
        if a.is_zero() {
            return FqElem::ZERO;
        }
        let n = self.0.q - 1;
        let k = (self.0.log[a.0 as usize] as u128 * (e % n) as u128) % n as u128;
        FqElem(self.0.exp[k as usize])
    }

    /// The unique b with b^p = a (F_q is perfect).
    pub fn pth_root(&self, a: FqElem) -> FqElem {
        self.pow(a, self.0.q / self.0.p)
    }

    /// Fixed generator of the cyclic group F_q^*.
    pub fn primitive(&self) -> FqElem {
        FqElem(self.0.exp[1 % self.0.exp.len()])
    }

    /// Discrete log to base [`Fq::primitive`]; `None` for zero.
    pub fn log(&self, a: FqElem) -> Option<u64> {
        (!a.is_zero()).then(|| self.0.log[a.0 as usize] as u64)
    }

    pub fn exp(&self, k: u64) -> FqElem {
        FqElem(self.0.exp[(k % (self.0.q - 1)) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: FqElem) -> u64 {
        let n = self.0.q - 1;
        let k = self.0.log[a.0 as usize] as u64;
        n / num_integer::gcd(n, k)
    }
}

fn digit_add(p: u64, a: u64, b: u64, negate_b: bool) -> u64 {
    let (mut a, mut b) = (a, b);
    let mut out = 0u64;
    let mut place = 1u64;
    while a > 0 || b > 0 {
        let da = a % p;
        let mut db = b % p;
        if negate_b {
            db = (p - db) % p;
        }
        out += ((da + db) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

impl GroundField {
    fn build(p: u64, l: u32, q: u64, modulus: Vec<u64>) -> GroundField {
        let add_table = (l > 1 && q <= 256).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(p, a, b, false) as u32;
                }
            }
            t
        });
        let naive_mul = |a: u64, b: u64| -> u64 {
            // schoolbook product of digit vectors reduced by the monic modulus
            let da: Vec<u64> = (0..l).map(|i| (a / p.pow(i)) % p).collect();
            let db: Vec<u64> = (0..l).map(|i| (b / p.pow(i)) % p).collect();
            let mut prod = vec![0u64; 2 * l as usize];
            for i in 0..l as usize {
                for j in 0..l as usize {
                    prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                }
            }
            for k in (l as usize..prod.len()).rev() {
                let c = prod[k];
                if c == 0 {
                    continue;
                }
                prod[k] = 0;
                for (i, &m) in modulus.iter().enumerate().take(l as usize) {
                    let idx = k - l as usize + i;
                    prod[idx] = (prod[idx] + (p - c) * m) % p;
                }
            }
            prod[..l as usize].iter().rev().fold(0, |acc, &d| acc * p + d)
        };
        let n = q - 1;
        let mut exp = vec![0u32; n.max(1) as usize];
        let mut log = vec![0u32; q as usize];
        if q == 2 {
            exp[0] = 1;
        } else {
            'search: for g in 2..q {
                let mut x = 1u64;
                for k in 0..n {
                    if k > 0 && x == 1 {
                        continue 'search;
                    }
                    exp[k as usize] = x as u32;
                    x = naive_mul(x, g);
                }
                if x == 1 {
                    break;
                }
            }
        }
        for (k, &e) in exp.iter().enumerate() {
            log[e as usize] = k as u32;
        }
        GroundField { p, l, q, modulus, exp, log, add_table }
    }
}

/// An F_q element bundled with its field, for generic ring code.
#[derive(Clone, PartialEq, Eq)]
pub struct FqScalar {
    pub field: Fq,
    pub value: FqElem,
}

impl FqScalar {
    pub fn new(field: &Fq, value: FqElem) -> FqScalar {
        FqScalar { field: field.clone(), value }
    }
}

impl fmt::Debug for FqScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_make_examples() {
        let f2 = Fq::new(2, 1).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        let f3 = Fq::new(3, 1).unwrap();
        assert_eq!(f3.modulus(), &[0, 1]);
        let f4 = Fq::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert_eq!(Fq::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn field_make_errors() {
        assert_eq!(Fq::new(4, 1), Err(Error::NotPrime(4)));
        assert_eq!(Fq::new(2, 0), Err(Error::ZeroDegree));
        assert!(matches!(Fq::new(2, 40), Err(Error::FieldTooLarge(_))));
    }

    #[test]
    fn inverses_and_roots() {
        for (p, l) in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2), (2, 3)] {
            let f = Fq::new(p, l).unwrap();
            for a in f.elements().skip(1) {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                let r = f.pth_root(a);
                assert_eq!(f.pow(r, p), a);
                assert_eq!(f.add(a, f.neg(a)), f.zero());
            }
            assert_eq!(f.mult_order(f.primitive()), f.q() - 1);
        }
    }

    #[test]
    fn digits_roundtrip() {
        let f = Fq::new(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.from_digits(&f.digits(a)).unwrap(), a);
        }
    }
}
