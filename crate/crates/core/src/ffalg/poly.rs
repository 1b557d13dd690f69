//! Dense univariate polynomials over F_q, i.e. the ring R_T = F_q[T].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{FqElem, Fq};

/// Degree of a polynomial; the zero polynomial has degree `NegInf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    NegInf,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

/// Polynomial with ascending coefficients and no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Fq,
    coeffs: Vec<FqElem>,
}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl Poly {
    pub fn new(field: &Fq, mut coeffs: Vec<FqElem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Fq) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Fq) -> Poly {
        Poly::constant(field, FqElem::ONE)
    }

    pub fn constant(field: &Fq, c: FqElem) -> Poly {
        Poly::new(field, vec![c])
    }

    /// The indeterminate T.
    pub fn t(field: &Fq) -> Poly {
        Poly::monomial(field, FqElem::ONE, 1)
    }

    pub fn monomial(field: &Fq, c: FqElem, k: usize) -> Poly {
        let mut v = vec![FqElem::ZERO; k + 1];
        v[k] = c;
        Poly::new(field, v)
    }

    /// From field-element encodings; codes are reduced modulo q.
    pub fn from_ints(field: &Fq, codes: &[u64]) -> Poly {
        Poly::new(field, codes.iter().map(|&c| FqElem((c % field.q()) as u32)).collect())
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn codes(&self) -> Vec<u64> {
        self.coeffs.iter().map(|c| c.0 as u64).collect()
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInf,
            n => Degree::Finite(n - 1),
        }
    }

    /// Degree, with the zero polynomial mapped to `None`.
    pub fn deg(&self) -> Option<usize> {
        self.degree().finite()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FqElem::ONE
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&FqElem::ONE)
    }

    pub fn lead(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn scale(&self, c: FqElem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplication by T^k.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![FqElem::ZERO; k];
        v.extend_from_slice(&self.coeffs);
        Poly { field: self.field.clone(), coeffs: v }
    }

    pub fn monic(&self) -> Poly {
        match self.field.inv(self.lead()) {
            Some(i) => self.scale(i),
            None => self.clone(),
        }
    }

    pub fn eval(&self, x: FqElem) -> FqElem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(FqElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int((i as u64 % f.p()) as i64), c))
            .collect();
        Poly::new(f, v)
    }

    /// T^n f(1/T) for n >= deg f.
    pub fn reverse(&self, n: usize) -> Poly {
        let mut v = vec![FqElem::ZERO; n + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[n - i] = c;
        }
        Poly::new(&self.field, v)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = &self.field;
        if self.coeffs.len() < d.coeffs.len() {
            return (Poly::zero(f), self.clone());
        }
        let inv_lead = f.inv(d.lead()).expect("nonzero lead");
        let mut r = self.coeffs.clone();
        let dn = d.coeffs.len() - 1;
        let mut q = vec![FqElem::ZERO; r.len() - dn];
        for k in (0..q.len()).rev() {
            let c = f.mul(r[k + dn], inv_lead);
            if c.is_zero() {
                continue;
            }
            q[k] = c;
            for (i, &di) in d.coeffs.iter().enumerate() {
                r[k + i] = f.sub(r[k + i], f.mul(c, di));
            }
        }
        r.truncate(dn);
        (Poly::new(f, q), Poly::new(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, t) with s*self + t*other = g, g the monic gcd.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match f.inv(r0.lead()) {
            Some(i) => (r0.scale(i), s0.scale(i), t0.scale(i)),
            None => (r0, s0, t0),
        }
    }

    /// Inverse modulo m, if it exists.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(m).xgcd(m);
        g.is_one().then(|| s.rem(m))
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        (self * other).rem(m)
    }

    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(&self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        acc
    }

    /// f^p, computed coefficientwise (Frobenius is additive).
    pub fn frobenius(&self) -> Poly {
        let f = &self.field;
        let p = f.p() as usize;
        let mut v = vec![FqElem::ZERO; self.coeffs.len().saturating_sub(1) * p + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * p] = f.pow(c, p as u64);
        }
        Poly::new(f, v)
    }

    /// g with g^p = self; requires every exponent to be a multiple of p.
    pub fn pth_root(&self) -> Option<Poly> {
        let f = &self.field;
        let p = f.p() as usize;
        if self.coeffs.iter().enumerate().any(|(i, c)| i % p != 0 && !c.is_zero()) {
            return None;
        }
        let v = self.coeffs.iter().step_by(p).map(|&c| f.pth_root(c)).collect();
        Some(Poly::new(f, v))
    }

    /// Integer key sum c_i q^i, used to index residues.
    pub fn key(&self) -> u128 {
        let q = self.field.q() as u128;
        self.coeffs.iter().rev().fold(0u128, |acc, c| acc * q + c.0 as u128)
    }

    pub fn from_key(field: &Fq, mut key: u128, len: usize) -> Poly {
        let q = field.q() as u128;
        let v = (0..len)
            .map(|_| {
                let c = FqElem((key % q) as u32);
                key /= q;
                c
            })
            .collect();
        Poly::new(field, v)
    }
}

impl Ord for Poly {
    /// Degree first, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut v = vec![FqElem::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let prime = self.field.l() == 1;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = if prime { c.0.to_string() } else { format!("[{}]", c.0) };
            match (i, c.0) {
                (0, _) => write!(f, "{cs}")?,
                (1, 1) => write!(f, "T")?,
                (1, _) => write!(f, "{cs}*T")?,
                (_, 1) => write!(f, "T^{i}")?,
                _ => write!(f, "{cs}*T^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
