//! Witt vectors of finite length over F_q, R_T or F_q(T).
//!
//! Addition and negation use the universal Witt polynomials. These are
//! derived once per (p, v) from the ghost components
//! `w_n = sum_{i <= n} p^i X_i^(p^(n-i))` over the integers, divided exactly
//! by `p^n`, reduced mod p and cached.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ffalg::{FqElem, FqScalar, Poly};
use crate::ratfrac::RatFn;

/// Commutative ring of characteristic p usable as a Witt coordinate domain.
pub trait WittCoeff: Clone + PartialEq + fmt::Debug {
    fn char_p(&self) -> u64;
    fn zero_like(&self) -> Self;
    fn int_like(&self, n: u64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// x^p
    fn frobenius(&self) -> Self;
}

impl WittCoeff for FqScalar {
    fn char_p(&self) -> u64 {
        self.field.p()
    }
    fn zero_like(&self) -> Self {
        FqScalar::new(&self.field, FqElem::ZERO)
    }
    fn int_like(&self, n: u64) -> Self {
        FqScalar::new(&self.field, self.field.from_int((n % self.field.p()) as i64))
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        FqScalar::new(&self.field, self.field.add(self.value, o.value))
    }
    fn mul(&self, o: &Self) -> Self {
        FqScalar::new(&self.field, self.field.mul(self.value, o.value))
    }
    fn neg(&self) -> Self {
        FqScalar::new(&self.field, self.field.neg(self.value))
    }
    fn frobenius(&self) -> Self {
        FqScalar::new(&self.field, self.field.pow(self.value, self.field.p()))
    }
}

impl WittCoeff for Poly {
    fn char_p(&self) -> u64 {
        self.field().p()
    }
    fn zero_like(&self) -> Self {
        Poly::zero(self.field())
    }
    fn int_like(&self, n: u64) -> Self {
        let f = self.field();
        Poly::constant(f, f.from_int((n % f.p()) as i64))
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn frobenius(&self) -> Self {
        Poly::frobenius(self)
    }
}

impl WittCoeff for RatFn {
    fn char_p(&self) -> u64 {
        self.field().p()
    }
    fn zero_like(&self) -> Self {
        RatFn::zero(self.field())
    }
    fn int_like(&self, n: u64) -> Self {
        let f = self.field();
        RatFn::constant(f, f.from_int((n % f.p()) as i64))
    }
    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn frobenius(&self) -> Self {
        RatFn::frobenius(self)
    }
}

/// Multivariate polynomial with integer coefficients, keyed by exponent vector.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntPoly {
    pub nvars: usize,
    pub terms: HashMap<Vec<u32>, BigInt>,
}

impl IntPoly {
    fn zero(nvars: usize) -> IntPoly {
        IntPoly { nvars, terms: HashMap::new() }
    }

    fn var(nvars: usize, i: usize) -> IntPoly {
        let mut e = vec![0u32; nvars];
        e[i] = 1;
        let mut t = HashMap::new();
        t.insert(e, BigInt::one());
        IntPoly { nvars, terms: t }
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    fn add(&self, o: &IntPoly) -> IntPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    fn mul(&self, o: &IntPoly) -> IntPoly {
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        IntPoly { nvars: self.nvars, terms: acc }
    }

    fn pow(&self, mut k: u64) -> IntPoly {
        let mut base = self.clone();
        let mut one = IntPoly::zero(self.nvars);
        one.terms.insert(vec![0; self.nvars], BigInt::one());
        let mut acc = one;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn div_exact(&self, d: &BigInt) -> Result<IntPoly> {
        let mut terms = HashMap::new();
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return Err(Error::Internal(format!("ghost recursion: coefficient {c} not divisible by {d}")));
            }
            terms.insert(e.clone(), q);
        }
        Ok(IntPoly { nvars: self.nvars, terms })
    }

    /// Evaluation at integer points (used by the ghost-lift oracle).
    pub fn eval_int(&self, xs: &[BigInt]) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(xs).fold(c.clone(), |acc, (&k, x)| acc * x.pow(k)))
            .sum()
    }
}

/// Coefficients reduced mod p, sorted for deterministic evaluation.
#[derive(Clone, Debug)]
pub struct ModPoly {
    pub terms: Vec<(Vec<u32>, u64)>,
}

impl ModPoly {
    fn from_int(poly: &IntPoly, p: u64) -> ModPoly {
        let pb = BigInt::from(p);
        let mut terms: Vec<(Vec<u32>, u64)> = poly
            .terms
            .iter()
            .filter_map(|(e, c)| {
                let r = c.mod_floor(&pb).to_u64().unwrap();
                (r != 0).then(|| (e.clone(), r))
            })
            .collect();
        terms.sort();
        ModPoly { terms }
    }

    fn eval<C: WittCoeff>(&self, vars: &[C], proto: &C) -> C {
        // cache powers per variable
        let mut powers: Vec<Vec<C>> = vars.iter().map(|v| vec![v.int_like(1), v.clone()]).collect();
        let mut acc = proto.zero_like();
        for (e, c) in &self.terms {
            let mut term = proto.int_like(*c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if vars[i].is_zero() {
                    term = proto.zero_like();
                    break;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&vars[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize]);
            }
            if !term.is_zero() {
                acc = acc.add(&term);
            }
        }
        acc
    }
}

/// Universal addition and negation polynomials for W_v in characteristic p.
#[derive(Debug)]
pub struct WittPolys {
    pub p: u64,
    pub v: usize,
    /// S_n over Z in variables X_0..X_{v-1}, Y_0..Y_{v-1}.
    pub add_int: Vec<IntPoly>,
    /// N_n over Z in variables X_0..X_{v-1}.
    pub neg_int: Vec<IntPoly>,
    add_mod: Vec<ModPoly>,
    neg_mod: Vec<ModPoly>,
}

fn ghost(vars: &[IntPoly], p: u64, n: usize) -> IntPoly {
    let nv = vars[0].nvars;
    (0..=n).fold(IntPoly::zero(nv), |acc, i| {
        let term = vars[i].pow(p.pow((n - i) as u32)).scale(&BigInt::from(p).pow(i as u32));
        acc.add(&term)
    })
}

type PolyCache = HashMap<(u64, usize), Arc<WittPolys>>;

impl WittPolys {
    fn compute(p: u64, v: usize) -> Result<WittPolys> {
        let nv = 2 * v;
        let xs: Vec<IntPoly> = (0..v).map(|i| IntPoly::var(nv, i)).collect();
        let ys: Vec<IntPoly> = (0..v).map(|i| IntPoly::var(nv, v + i)).collect();
        let xs_only: Vec<IntPoly> = (0..v).map(|i| IntPoly::var(v, i)).collect();
        let mut add_int: Vec<IntPoly> = Vec::with_capacity(v);
        let mut neg_int: Vec<IntPoly> = Vec::with_capacity(v);
        let minus = BigInt::from(-1);
        for n in 0..v {
            let pn = BigInt::from(p).pow(n as u32);
            let mut s = ghost(&xs, p, n).add(&ghost(&ys, p, n));
            let mut t = ghost(&xs_only, p, n).scale(&minus);
            for i in 0..n {
                let e = p.pow((n - i) as u32);
                let pi = BigInt::from(p).pow(i as u32);
                s = s.add(&add_int[i].pow(e).scale(&(-&pi)));
                t = t.add(&neg_int[i].pow(e).scale(&(-&pi)));
            }
            add_int.push(s.div_exact(&pn)?);
            neg_int.push(t.div_exact(&pn)?);
        }
        let add_mod = add_int.iter().map(|s| ModPoly::from_int(s, p)).collect();
        let neg_mod = neg_int.iter().map(|s| ModPoly::from_int(s, p)).collect();
        Ok(WittPolys { p, v, add_int, neg_int, add_mod, neg_mod })
    }

    /// Cached universal polynomials; computed on first use.
    pub fn get(p: u64, v: usize) -> Result<Arc<WittPolys>> {
        static CACHE: OnceLock<Mutex<PolyCache>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(w) = cache.lock().unwrap().get(&(p, v)) {
            return Ok(w.clone());
        }
        let w = Arc::new(WittPolys::compute(p, v)?);
        cache.lock().unwrap().entry((p, v)).or_insert(w.clone());
        Ok(w)
    }

    pub fn add_mod(&self) -> &[ModPoly] {
        &self.add_mod
    }
}

/// Configurable size limits for Witt computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WittCaps {
    pub max_len: usize,
    pub max_p_pow: u64,
}

impl Default for WittCaps {
    fn default() -> Self {
        WittCaps { max_len: 4, max_p_pow: 1 << 7 }
    }
}

impl WittCaps {
    pub fn check(&self, p: u64, v: usize) -> Result<()> {
        if v == 0 {
            return Err(Error::Schema("Witt length must be positive".into()));
        }
        if v > self.max_len {
            return Err(Error::CapExceeded { what: "Witt length", needed: v as u128, cap: self.max_len as u128 });
        }
        let pv = (p as u128).pow(v as u32);
        if pv > self.max_p_pow as u128 {
            return Err(Error::CapExceeded { what: "p^v for Witt polynomials", needed: pv, cap: self.max_p_pow as u128 });
        }
        Ok(())
    }
}

/// A Witt vector (x_0, ..., x_{v-1}).
#[derive(Clone, PartialEq)]
pub struct WittVec<C: WittCoeff> {
    coords: Vec<C>,
}

impl<C: WittCoeff> fmt::Debug for WittVec<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("W").field(&self.coords).finish()
    }
}

impl<C: WittCoeff> WittVec<C> {
    pub fn new(coords: Vec<C>) -> Result<WittVec<C>> {
        if coords.is_empty() {
            return Err(Error::Schema("Witt vector must have positive length".into()));
        }
        let p = coords[0].char_p();
        if coords.iter().any(|c| c.char_p() != p) {
            return Err(Error::Mismatch("Witt coordinates from different fields".into()));
        }
        Ok(WittVec { coords })
    }

    pub fn zero(proto: &C, v: usize) -> WittVec<C> {
        WittVec { coords: vec![proto.zero_like(); v] }
    }

    /// (0, ..., 0, c, 0, ..., 0) with c at `index`.
    pub fn single(c: C, index: usize, v: usize) -> WittVec<C> {
        let mut coords = vec![c.zero_like(); v];
        coords[index] = c;
        WittVec { coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[C] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<C> {
        self.coords
    }

    pub fn p(&self) -> u64 {
        self.coords[0].char_p()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn check_pair(&self, o: &Self) -> Result<()> {
        if self.len() != o.len() {
            return Err(Error::Mismatch(format!("Witt lengths {} and {}", self.len(), o.len())));
        }
        if self.p() != o.p() {
            return Err(Error::Mismatch("Witt characteristics differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_pair(o)?;
        let v = self.len();
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        let polys = WittPolys::get(self.p(), v)?;
        let vars: Vec<C> = self.coords.iter().chain(o.coords.iter()).cloned().collect();
        let proto = &self.coords[0];
        let coords = polys.add_mod[..v].iter().map(|s| s.eval(&vars, proto)).collect();
        Ok(WittVec { coords })
    }

    pub fn neg(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let p = self.p();
        if p != 2 {
            return Ok(WittVec { coords: self.coords.iter().map(|c| c.neg()).collect() });
        }
        let polys = WittPolys::get(p, self.len())?;
        let proto = &self.coords[0];
        let coords = polys.neg_mod.iter().map(|s| s.eval(&self.coords, proto)).collect();
        Ok(WittVec { coords })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg()?)
    }

    /// Coordinatewise p^u-th power.
    pub fn frob_power(&self, u: u32) -> Self {
        let coords = self
            .coords
            .iter()
            .map(|c| (0..u).fold(c.clone(), |acc, _| acc.frobenius()))
            .collect();
        WittVec { coords }
    }

    /// The Artin–Schreier–Witt operator y -> y^(p^u) - y.
    pub fn asw_operator(&self, u: u32) -> Result<Self> {
        self.frob_power(u).sub(self)
    }

    /// n-fold Witt sum of `self`.
    pub fn scalar_mul(&self, mut n: u64) -> Result<Self> {
        let mut acc = WittVec::zero(&self.coords[0], self.len());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.add(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.add(&base)?;
            }
        }
        Ok(acc)
    }

    /// Prefixes zeros to reach length `v` (iterated Verschiebung).
    pub fn pad_front(&self, v: usize) -> Self {
        let mut coords = vec![self.coords[0].zero_like(); v.saturating_sub(self.len())];
        coords.extend(self.coords.iter().cloned());
        WittVec { coords }
    }

    /// The first `j` coordinates (projection W_v -> W_j).
    pub fn truncate(&self, j: usize) -> Self {
        WittVec { coords: self.coords[..j].to_vec() }
    }

    pub fn map<D: WittCoeff>(&self, f: impl Fn(&C) -> D) -> WittVec<D> {
        WittVec { coords: self.coords.iter().map(f).collect() }
    }
}

/// Exposes the integer polynomials for independent checks.
pub fn universal_add_int(p: u64, v: usize) -> Result<Vec<IntPoly>> {
    Ok(WittPolys::get(p, v)?.add_int.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::Fq;

    fn sc(f: &Fq, v: &[u32]) -> WittVec<FqScalar> {
        WittVec::new(v.iter().map(|&x| FqScalar::new(f, FqElem(x))).collect()).unwrap()
    }

    #[test]
    fn p2_v2_addition_rule() {
        // (a0, a1) + (b0, b1) = (a0 + b0, a1 + b1 + a0 b0) over F_2
        let f = Fq::new(2, 1).unwrap();
        for a0 in 0..2 {
            for a1 in 0..2 {
                for b0 in 0..2 {
                    for b1 in 0..2 {
                        let s = sc(&f, &[a0, a1]).add(&sc(&f, &[b0, b1])).unwrap();
                        assert_eq!(s, sc(&f, &[(a0 + b0) % 2, (a1 + b1 + a0 * b0) % 2]));
                    }
                }
            }
        }
    }

    #[test]
    fn p2_v2_negation_rule() {
        let f = Fq::new(2, 1).unwrap();
        for a0 in 0..2 {
            for a1 in 0..2 {
                let n = sc(&f, &[a0, a1]).neg().unwrap();
                assert_eq!(n, sc(&f, &[a0, (a1 + a0 * a0) % 2]));
            }
        }
    }

    #[test]
    fn w2_f3_is_cyclic_of_order_9() {
        // (1,0) generates W_2(F_3) = Z/9, checked by enumerating multiples
        let f = Fq::new(3, 1).unwrap();
        let one = sc(&f, &[1, 0]);
        let three = one.add(&one).unwrap().add(&one).unwrap();
        assert_eq!(three.coords()[0].value, FqElem::ZERO);
        assert!(!three.is_zero());
        let mut seen = std::collections::HashSet::new();
        let mut x = sc(&f, &[0, 0]);
        for _ in 0..9 {
            seen.insert((x.coords()[0].value, x.coords()[1].value));
            x = x.add(&one).unwrap();
        }
        assert_eq!(seen.len(), 9);
        assert!(x.is_zero());
        // over F_3 the value is V(1) = (0, 1): p = Verschiebung o Frobenius
        assert_eq!(three, sc(&f, &[0, 1]));
    }

    #[test]
    fn odd_negation_is_coordinatewise() {
        let f = Fq::new(5, 1).unwrap();
        let x = sc(&f, &[2, 3, 1]);
        assert_eq!(x.neg().unwrap(), sc(&f, &[3, 2, 4]));
        assert!(x.add(&x.neg().unwrap()).unwrap().is_zero());
    }

    #[test]
    fn frob_and_asw_examples() {
        let f2 = Fq::new(2, 1).unwrap();
        let t = Poly::t(&f2);
        let x = WittVec::new(vec![t.clone(), Poly::one(&f2)]).unwrap();
        assert_eq!(x.frob_power(1), WittVec::new(vec![&t * &t, Poly::one(&f2)]).unwrap());
        let f4 = Fq::new(2, 2).unwrap();
        let y = sc(&f4, &[2, 3]);
        assert_eq!(y.frob_power(2), y);
        assert!(sc(&f2, &[1, 0]).asw_operator(1).unwrap().is_zero());
        let f3 = Fq::new(3, 1).unwrap();
        let z = WittVec::new(vec![RatFn::from_poly(Poly::t(&f3))]).unwrap();
        let expect = &RatFn::from_poly(Poly::t(&f3).pow(3)) - &RatFn::from_poly(Poly::t(&f3));
        assert_eq!(z.asw_operator(1).unwrap().coords()[0], expect);
    }

    #[test]
    fn mismatch_is_error() {
        let f = Fq::new(2, 1).unwrap();
        assert!(matches!(sc(&f, &[1]).add(&sc(&f, &[1, 0])), Err(Error::Mismatch(_))));
    }

    #[test]
    fn universal_polys_ghost_identity_over_z() {
        // w_n(S(X, Y)) = w_n(X) + w_n(Y) on integer points
        for (p, v) in [(2u64, 3usize), (3, 3), (5, 2)] {
            let polys = universal_add_int(p, v).unwrap();
            let xs: Vec<BigInt> = (0..v).map(|i| BigInt::from(i as i64 + 2)).collect();
            let ys: Vec<BigInt> = (0..v).map(|i| BigInt::from(3 * i as i64 - 1)).collect();
            let pts: Vec<BigInt> = xs.iter().chain(ys.iter()).cloned().collect();
            let s: Vec<BigInt> = polys.iter().map(|q| q.eval_int(&pts)).collect();
            for n in 0..v {
                let w = |z: &[BigInt]| -> BigInt {
                    (0..=n).map(|i| BigInt::from(p).pow(i as u32) * z[i].pow(p.pow((n - i) as u32) as u32)).sum()
                };
                assert_eq!(w(&s), w(&xs) + w(&ys));
            }
        }
    }

    #[test]
    fn caps() {
        let caps = WittCaps::default();
        assert!(caps.check(2, 4).is_ok());
        assert!(caps.check(2, 5).is_err());
        assert!(caps.check(3, 4).is_ok());
        assert!(caps.check(11, 3).is_err());
        assert!(caps.check(5, 3).is_ok());
    }
}
