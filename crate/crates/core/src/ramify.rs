//! Ramification indices, inertia degrees and decomposition numbers at finite
//! primes and at infinity.
//!
//! Abelian p-extensions are handled through their character group inside
//! `W_v(k) / (F - 1) W_v(k)`: every element is reduced locally at each place
//! (pole orders made prime to p) and Schmid's first-pole rule gives the local
//! ramification of that character. Counting characters that are unramified
//! (resp. split) at a place gives `e`, `f` and `h`.

use std::collections::{BTreeMap, HashSet};

use num_integer::Integer;

use crate::chars::DirichletChar;
use crate::error::{Error, Result};
use crate::extdesc::{
    asw_decompose, pole_primes, AswExt, Caps, CompositeExt, ConstantExt, CyclotomicSubfield, Descriptor,
    KummerExt,
};
use crate::ffalg::{factor, Fq, FqElem, FqScalar, Poly};
use crate::ratfrac::{as_rank, as_reduce_at, as_reduce_at_infinity, RatFn, Val};
use crate::witt::WittVec;

/// Local data at every place for a Galois extension of k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationReport {
    pub degree: u64,
    /// Ramification index at every finite prime with `e_P > 1`, sorted.
    pub finite: Vec<(Poly, u64)>,
    pub e_inf: u64,
    pub f_inf: u64,
    pub h_inf: u64,
    /// Degree of the infinite primes of K, equal to `f_inf`.
    pub t: u64,
    /// Degree over F_q of the field of constants of K.
    pub constant_field_degree: u64,
}

impl RamificationReport {
    pub fn e_at(&self, prime: &Poly) -> u64 {
        self.finite.iter().find(|(p, _)| p == prime).map_or(1, |(_, e)| *e)
    }

    /// Checks `e f h = [K:k]` at infinity.
    pub fn check_product(&self) -> Result<()> {
        if self.e_inf * self.f_inf * self.h_inf != self.degree {
            return Err(Error::Consistency(format!(
                "e f h = {} * {} * {} differs from the degree {}",
                self.e_inf, self.f_inf, self.h_inf, self.degree
            )));
        }
        Ok(())
    }
}

/// Reduction of a Witt vector at a finite prime: coordinate by coordinate,
/// subtract `(F - 1)(0, .., 0, w, 0, ..)` until the pole order of that
/// coordinate is prime to p.
pub fn witt_reduce_at(x: &WittVec<RatFn>, prime: &Poly) -> Result<WittVec<RatFn>> {
    witt_reduce_with(x, |a| as_reduce_at(a, prime))
}

/// The same reduction at the infinite prime.
pub fn witt_reduce_at_infinity(x: &WittVec<RatFn>) -> Result<WittVec<RatFn>> {
    witt_reduce_with(x, as_reduce_at_infinity)
}

fn witt_reduce_with(x: &WittVec<RatFn>, step: impl Fn(&RatFn) -> (RatFn, RatFn)) -> Result<WittVec<RatFn>> {
    let v = x.len();
    let mut cur = x.clone();
    for j in 0..v {
        let (_, w) = step(&cur.coords()[j]);
        if w.is_zero() {
            continue;
        }
        let shifted = WittVec::single(w, j, v);
        cur = cur.sub(&shifted.asw_operator(1)?)?;
    }
    Ok(cur)
}

/// First coordinate with a pole at the prime, after reduction.
pub fn schmid_index_at(x: &WittVec<RatFn>, prime: &Poly) -> Result<Option<usize>> {
    let r = witt_reduce_at(x, prime)?;
    Ok(r.coords().iter().position(|c| matches!(c.v_at(prime), Val::Finite(k) if k < 0)))
}

/// First coordinate with a pole at infinity, after reduction.
pub fn schmid_index_at_infinity(x: &WittVec<RatFn>) -> Result<Option<usize>> {
    let r = witt_reduce_at_infinity(x)?;
    Ok(r.coords().iter().position(|c| matches!(c.v_infinity(), Val::Finite(k) if k < 0)))
}

/// Ramification index `p^(v - j)` of the cyclic extension `y^p - y = x`
/// at a finite prime, where `j` is the Schmid index.
pub fn local_e_at(x: &WittVec<RatFn>, prime: &Poly) -> Result<u64> {
    let p = x.p();
    Ok(schmid_index_at(x, prime)?.map_or(1, |j| p.pow((x.len() - j) as u32)))
}

/// Residue at infinity of a reduced vector regular there.
pub fn residue_at_infinity(x: &WittVec<RatFn>) -> Option<WittVec<FqScalar>> {
    let f = x.coords()[0].field().clone();
    let coords: Option<Vec<FqScalar>> =
        x.coords().iter().map(|c| c.value_at_infinity().map(|e| FqScalar::new(&f, e))).collect();
    coords.map(|c| WittVec::new(c).expect("nonempty"))
}

/// Evaluation at T = 0 of a vector with polynomial coordinates.
pub fn value_at_zero(x: &WittVec<RatFn>) -> WittVec<FqScalar> {
    let f = x.coords()[0].field().clone();
    let coords = x.coords().iter().map(|c| FqScalar::new(&f, c.num().coeff(0))).collect();
    WittVec::new(coords).expect("nonempty")
}

/// Image in `W_v(F_p) = Z/p^v` of the Witt trace `x + F x + ... + F^(l-1) x`.
/// Its kernel is `(F - 1) W_v(F_q)`, so it identifies the quotient with Z/p^v.
pub fn witt_trace_int(x: &WittVec<FqScalar>) -> Result<u64> {
    let f = x.coords()[0].field.clone();
    let p = f.p();
    let v = x.len() as u32;
    let mut acc = WittVec::zero(&x.coords()[0], x.len());
    let mut y = x.clone();
    for _ in 0..f.l() {
        acc = acc.add(&y)?;
        y = y.frob_power(1);
    }
    let pv = p.pow(v);
    let mut n = 0u64;
    for (i, c) in acc.coords().iter().enumerate() {
        let a = c.value.0 as u64;
        if a >= p {
            return Err(Error::Internal("Witt trace left the prime field".into()));
        }
        // Teichmüller lift of a in Z/p^v
        let mut teich = a % pv;
        for _ in 1..v {
            teich = mod_pow(teich, p, pv);
        }
        n = (n + p.pow(i as u32) * teich) % pv;
    }
    Ok(n)
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Additive order of `n` in Z/p^v.
pub fn order_mod(n: u64, pv: u64) -> u64 {
    pv / n.gcd(&pv)
}

/// Local behaviour of one character of an ASW group.
#[derive(Clone, Debug)]
struct CharData {
    coeffs: Vec<u64>,
    unram: Vec<bool>,
    unram_inf: bool,
    /// Witt trace of the residue at infinity, when unramified there.
    residue: Option<u64>,
}

/// Character group of an abelian p-extension, generated by Witt vectors
/// `x_i` (extensions `y^p - y = x_i`), enumerated through the coefficient
/// lattice `(Z/p^v)^s`.
#[derive(Clone, Debug)]
pub struct AswGroup {
    pub p: u64,
    pub v: usize,
    pub gens: Vec<WittVec<RatFn>>,
    pub primes: Vec<Poly>,
    elems: Vec<CharData>,
}

impl AswGroup {
    pub fn new(field: &Fq, v: usize, gens: Vec<WittVec<RatFn>>, caps: &Caps) -> Result<AswGroup> {
        let p = field.p();
        let pv = p.pow(v as u32);
        for g in &gens {
            if g.len() != v {
                return Err(Error::Mismatch("generators of different Witt lengths".into()));
            }
        }
        let size = (pv as u128).checked_pow(gens.len() as u32).unwrap_or(u128::MAX);
        if size > caps.enumeration {
            return Err(Error::CapExceeded { what: "character lattice", needed: size, cap: caps.enumeration });
        }
        let mut primes = Vec::new();
        for g in &gens {
            primes.extend(pole_primes(g)?);
        }
        primes.sort();
        primes.dedup();
        let zero = WittVec::zero(&RatFn::zero(field), v);
        let multiples: Vec<Vec<WittVec<RatFn>>> = gens
            .iter()
            .map(|g| {
                let mut out = vec![zero.clone()];
                for c in 1..pv as usize {
                    let next = out[c - 1].add(g)?;
                    out.push(next);
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let s = gens.len();
        let mut elems = Vec::with_capacity(size as usize);
        let mut coeffs = vec![0u64; s];
        loop {
            let x = coeffs.iter().enumerate().try_fold(zero.clone(), |acc, (i, &c)| acc.add(&multiples[i][c as usize]))?;
            let unram = primes.iter().map(|pr| Ok(schmid_index_at(&x, pr)?.is_none())).collect::<Result<Vec<_>>>()?;
            let red = witt_reduce_at_infinity(&x)?;
            let residue = match residue_at_infinity(&red) {
                Some(r) => Some(witt_trace_int(&r)?),
                None => None,
            };
            elems.push(CharData { coeffs: coeffs.clone(), unram, unram_inf: residue.is_some(), residue });
            // next coefficient vector in mixed radix
            let mut i = 0;
            while i < s {
                coeffs[i] += 1;
                if coeffs[i] < pv {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == s {
                break;
            }
        }
        Ok(AswGroup { p, v, gens, primes, elems })
    }

    fn count(&self, pred: impl Fn(&CharData) -> bool) -> u64 {
        self.elems.iter().filter(|e| pred(e)).count() as u64
    }

    fn unram_everywhere(e: &CharData) -> bool {
        e.unram_inf && e.unram.iter().all(|&u| u)
    }

    fn trivial(e: &CharData) -> bool {
        Self::unram_everywhere(e) && e.residue == Some(0)
    }

    pub fn lattice_size(&self) -> u64 {
        self.elems.len() as u64
    }

    /// Order of the character group, the degree of the extension.
    pub fn degree(&self) -> u64 {
        self.lattice_size() / self.count(Self::trivial)
    }

    /// Coefficient vectors whose combination is trivial.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        self.elems.iter().filter(|e| Self::trivial(e)).map(|e| e.coeffs.clone()).collect()
    }

    pub fn e_at(&self, prime: &Poly) -> u64 {
        match self.primes.iter().position(|p| p == prime) {
            Some(i) => self.lattice_size() / self.count(|e| e.unram[i]),
            None => 1,
        }
    }

    pub fn e_inf(&self) -> u64 {
        self.lattice_size() / self.count(|e| e.unram_inf)
    }

    pub fn f_inf(&self) -> u64 {
        self.count(|e| e.unram_inf) / self.count(|e| e.residue == Some(0))
    }

    pub fn h_inf(&self) -> u64 {
        self.count(|e| e.residue == Some(0)) / self.count(Self::trivial)
    }

    pub fn constant_field_degree(&self) -> u64 {
        self.count(Self::unram_everywhere) / self.count(Self::trivial)
    }

    /// `e_inf` of the subextension whose characters are the combinations
    /// with coefficients satisfying `keep`.
    pub fn e_inf_of_subgroup(&self, keep: impl Fn(&[u64]) -> bool) -> u64 {
        let all = self.count(|e| keep(&e.coeffs));
        all / self.count(|e| keep(&e.coeffs) && e.unram_inf)
    }

    /// Coefficient vectors of characters unramified at infinity.
    pub fn unramified_at_infinity(&self) -> Vec<Vec<u64>> {
        self.elems.iter().filter(|e| e.unram_inf).map(|e| e.coeffs.clone()).collect()
    }

    pub fn report(&self) -> RamificationReport {
        let finite = self.primes.iter().map(|p| (p.clone(), self.e_at(p))).filter(|(_, e)| *e > 1).collect();
        let f_inf = self.f_inf();
        RamificationReport {
            degree: self.degree(),
            finite,
            e_inf: self.e_inf(),
            f_inf,
            h_inf: self.h_inf(),
            t: f_inf,
            constant_field_degree: self.constant_field_degree(),
        }
    }
}

/// True when the two generator lists define the same field.
pub fn same_asw_field(field: &Fq, v: usize, a: &[WittVec<RatFn>], b: &[WittVec<RatFn>], caps: &Caps) -> Result<bool> {
    if v == 1 {
        let first = |w: &[WittVec<RatFn>]| w.iter().map(|x| x.coords()[0].clone()).collect::<Vec<_>>();
        let (fa, fb) = (first(a), first(b));
        let both: Vec<RatFn> = fa.iter().chain(&fb).cloned().collect();
        let (ra, rb, rab) = (as_rank(&fa)?, as_rank(&fb)?, as_rank(&both)?);
        return Ok(ra == rab && rb == rab);
    }
    let da = AswGroup::new(field, v, a.to_vec(), caps)?.degree();
    let db = AswGroup::new(field, v, b.to_vec(), caps)?.degree();
    let both: Vec<WittVec<RatFn>> = a.iter().chain(b).cloned().collect();
    let dab = AswGroup::new(field, v, both, caps)?.degree();
    Ok(da == dab && db == dab)
}

pub fn asw_ramify(k: &AswExt, caps: &Caps) -> Result<RamificationReport> {
    let group = AswGroup::new(k.field(), k.v(), k.char_generators(), caps)?;
    let r = group.report();
    r.check_product()?;
    Ok(r)
}

/// Ramification of a v = 1 or general ASW descriptor read off the
/// decomposition: the Schmid index of each `delta_i` at its prime, and the
/// character counts at infinity. Agrees with [`asw_ramify`] at finite primes
/// for cyclic descriptors.
pub fn asw_finite_ramification_from_decomposition(xi: &WittVec<RatFn>) -> Result<Vec<(Poly, u64)>> {
    let dec = asw_decompose(xi)?;
    let mut out = Vec::new();
    for (prime, delta) in &dec.deltas {
        let e = local_e_at(delta, prime)?;
        if e > 1 {
            out.push((prime.clone(), e));
        }
    }
    Ok(out)
}

/// Multiplicative data of a Kummer radical group: an element
/// `c * prod P_i^(n_i)` modulo t-th powers, stored as
/// `(log c mod t, n_1 mod t, ..)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RadicalClass(pub Vec<u64>);

/// Kummer data relative to the primes of `D`.
#[derive(Clone, Debug)]
pub struct KummerFrame {
    pub field: Fq,
    pub t: u64,
    pub primes: Vec<Poly>,
}

impl KummerFrame {
    pub fn of(k: &KummerExt) -> KummerFrame {
        KummerFrame { field: k.field().clone(), t: k.t, primes: k.factors.iter().map(|(p, _)| p.clone()).collect() }
    }

    /// Class of `c * prod P_i^(n_i)`.
    pub fn class(&self, c: FqElem, exps: &[u64]) -> RadicalClass {
        let lg = self.field.log(c).expect("nonzero constant") % self.t;
        let mut v = vec![lg];
        v.extend(exps.iter().map(|e| e % self.t));
        RadicalClass(v)
    }

    pub fn radicand_class(&self, k: &KummerExt) -> RadicalClass {
        let exps: Vec<u64> = k.factors.iter().map(|(_, a)| *a as u64).collect();
        self.class(k.gamma, &exps)
    }

    pub fn mul(&self, a: &RadicalClass, b: &RadicalClass) -> RadicalClass {
        RadicalClass(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % self.t).collect())
    }

    pub fn one(&self) -> RadicalClass {
        RadicalClass(vec![0; self.primes.len() + 1])
    }

    /// Subgroup generated by the given classes.
    pub fn span(&self, gens: &[RadicalClass]) -> Vec<RadicalClass> {
        let mut set: HashSet<RadicalClass> = HashSet::from([self.one()]);
        for g in gens {
            let mut powers = vec![self.one()];
            let mut x = g.clone();
            while x != self.one() {
                powers.push(x.clone());
                x = self.mul(&x, g);
            }
            set = set.iter().flat_map(|s| powers.iter().map(move |pw| (s, pw))).map(|(s, pw)| self.mul(s, pw)).collect();
        }
        let mut out: Vec<RadicalClass> = set.into_iter().collect();
        out.sort();
        out
    }

    pub fn degree_of(&self, c: &RadicalClass) -> u64 {
        c.0.iter().fold(1u64, |acc, &x| acc.lcm(&(self.t / x.gcd(&self.t))))
    }

    /// `deg` of the polynomial part.
    pub fn poly_degree(&self, c: &RadicalClass) -> u64 {
        c.0[1..].iter().zip(&self.primes).map(|(n, p)| n * p.deg().unwrap() as u64).sum()
    }

    /// Image in the local group at infinity: leading coefficient class and
    /// valuation class, `(log lead mod t, deg mod t)`.
    pub fn local_at_infinity(&self, c: &RadicalClass) -> (u64, u64) {
        (c.0[0], self.poly_degree(c) % self.t)
    }

    /// `(e, f)` at infinity of `k(t-th root of c)` over k.
    pub fn local_ef_infinity(&self, c: &RadicalClass) -> (u64, u64) {
        let (lg, deg) = self.local_at_infinity(c);
        let e = self.t / deg.gcd(&self.t);
        let unit = (lg * e) % self.t;
        let f = self.t / unit.gcd(&self.t);
        (e, f)
    }

    /// Ramification index at `P_i` of `k(t-th root of c)`.
    pub fn local_e_at(&self, c: &RadicalClass, i: usize) -> u64 {
        self.t / c.0[i + 1].gcd(&self.t)
    }
}

pub fn kummer_ramify(k: &KummerExt) -> Result<RamificationReport> {
    let frame = KummerFrame::of(k);
    let a = frame.radicand_class(k);
    let degree = frame.degree_of(&a);
    let finite = k.factors.iter().enumerate().map(|(i, (p, _))| (p.clone(), frame.local_e_at(&a, i))).collect();
    let (e_inf, f_inf) = frame.local_ef_infinity(&a);
    let span = frame.span(std::slice::from_ref(&a));
    let constants = span.iter().filter(|c| c.0[1..].iter().all(|&x| x == 0)).count() as u64;
    let r = RamificationReport {
        degree,
        finite,
        e_inf,
        f_inf,
        h_inf: degree / (e_inf * f_inf),
        t: f_inf,
        constant_field_degree: constants,
    };
    r.check_product()?;
    Ok(r)
}

pub fn cyclotomic_ramify(k: &CyclotomicSubfield) -> Result<RamificationReport> {
    let g = &k.group;
    let x = g.span(&k.chars);
    let degree = x.len() as u64;
    let mut finite = Vec::new();
    for prime in factor(k.modulus())?.primes() {
        let locals: Vec<DirichletChar> = k.chars.iter().map(|c| g.local_component(c, prime)).collect();
        let e = g.span(&locals).len() as u64;
        if e > 1 {
            finite.push((prime.clone(), e));
        }
    }
    let consts = g.constants();
    let restrictions: HashSet<Vec<u64>> =
        x.iter().map(|chi| consts.iter().map(|c| g.eval(chi, c).unwrap()).collect()).collect();
    let e_inf = restrictions.len() as u64;
    let r = RamificationReport {
        degree,
        finite,
        e_inf,
        f_inf: 1,
        h_inf: degree / e_inf,
        t: 1,
        constant_field_degree: 1,
    };
    r.check_product()?;
    Ok(r)
}

pub fn constant_ramify(k: &ConstantExt) -> RamificationReport {
    RamificationReport {
        degree: k.m,
        finite: Vec::new(),
        e_inf: 1,
        f_inf: k.m,
        h_inf: 1,
        t: k.m,
        constant_field_degree: k.m,
    }
}

/// Local data of a composite of extensions with coprime degrees: all
/// indices multiply.
pub fn combine_coprime(parts: &[RamificationReport]) -> RamificationReport {
    let mut finite: BTreeMap<Poly, u64> = BTreeMap::new();
    let mut out = RamificationReport {
        degree: 1,
        finite: Vec::new(),
        e_inf: 1,
        f_inf: 1,
        h_inf: 1,
        t: 1,
        constant_field_degree: 1,
    };
    for r in parts {
        out.degree *= r.degree;
        out.e_inf *= r.e_inf;
        out.f_inf *= r.f_inf;
        out.h_inf *= r.h_inf;
        out.t *= r.t;
        out.constant_field_degree *= r.constant_field_degree;
        for (p, e) in &r.finite {
            *finite.entry(p.clone()).or_insert(1) *= e;
        }
    }
    out.finite = finite.into_iter().collect();
    out
}

pub fn composite_ramify(k: &CompositeExt, caps: &Caps) -> Result<RamificationReport> {
    let mut parts = Vec::new();
    if let Some(a) = &k.p_part {
        parts.push(asw_ramify(a, caps)?);
    }
    for c in &k.tame {
        parts.push(cyclotomic_ramify(c)?);
    }
    let r = combine_coprime(&parts);
    r.check_product()?;
    Ok(r)
}

pub fn ramify(d: &Descriptor, caps: &Caps) -> Result<RamificationReport> {
    match d {
        Descriptor::Kummer(k) => kummer_ramify(k),
        Descriptor::Asw(k) => asw_ramify(k, caps),
        Descriptor::Cyclotomic(k) => cyclotomic_ramify(k),
        Descriptor::Composite(k) => composite_ramify(k, caps),
        Descriptor::Constant(k) => Ok(constant_ramify(k)),
    }
}

/// Order of the class of `c` in `W_v(F_q) / (F^u - 1) W_v(F_q)`, by
/// enumerating the image of `F^u - 1`.
pub fn infinite_constant_class(c: &WittVec<FqScalar>, u: u32, caps: &Caps) -> Result<u64> {
    let f = c.coords()[0].field.clone();
    let v = c.len();
    let size = (f.q() as u128).checked_pow(v as u32).unwrap_or(u128::MAX);
    if size > caps.enumeration {
        return Err(Error::CapExceeded { what: "W_v(F_q) enumeration", needed: size, cap: caps.enumeration });
    }
    let key = |w: &WittVec<FqScalar>| -> Vec<u32> { w.coords().iter().map(|s| s.value.0).collect() };
    let mut image = HashSet::new();
    let mut digits = vec![0u32; v];
    loop {
        let y = WittVec::new(digits.iter().map(|&d| FqScalar::new(&f, FqElem(d))).collect())?;
        image.insert(key(&y.asw_operator(u)?));
        let mut i = 0;
        while i < v {
            digits[i] += 1;
            if (digits[i] as u64) < f.q() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == v {
            break;
        }
    }
    let mut multiple = c.clone();
    let mut d = 1u64;
    while !image.contains(&key(&multiple)) {
        multiple = multiple.add(c)?;
        d += 1;
        if d > size as u64 {
            return Err(Error::Internal("constant class order exceeds the group order".into()));
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extdesc::kummer_normalize;

    fn poly(f: &Fq, c: &[u64]) -> Poly {
        Poly::from_ints(f, c)
    }

    fn rat(f: &Fq, n: &[u64], d: &[u64]) -> RatFn {
        RatFn::new(poly(f, n), poly(f, d)).unwrap()
    }

    fn asw(coords: Vec<RatFn>) -> AswExt {
        AswExt::new(1, WittVec::new(coords).unwrap(), None, &Caps::default()).unwrap()
    }

    #[test]
    fn witt_schmid_examples() {
        let f = Fq::new(2, 1).unwrap();
        let t = poly(&f, &[0, 1]);
        let r = asw_ramify(&asw(vec![rat(&f, &[1], &[0, 1]), RatFn::zero(&f)]), &Caps::default()).unwrap();
        assert_eq!(r.e_at(&t), 4);
        assert_eq!(r.degree, 4);
        let r = asw_ramify(&asw(vec![RatFn::zero(&f), rat(&f, &[1], &[0, 1])]), &Caps::default()).unwrap();
        assert_eq!(r.e_at(&t), 2);
        assert_eq!(r.degree, 2);
    }

    #[test]
    fn example_one_minus_t() {
        for p in [2u64, 3, 5] {
            let f = Fq::new(p, 1).unwrap();
            let r = asw_ramify(&asw(vec![rat(&f, &[1, p - 1], &[1])]), &Caps::default()).unwrap();
            assert_eq!((r.e_inf, r.f_inf, r.h_inf), (p, 1, 1));
            assert!(r.finite.is_empty());
        }
    }

    #[test]
    fn constant_residue_gives_inertia() {
        // y^p - y = 1 over F_p is the constant extension of degree p
        let f = Fq::new(3, 1).unwrap();
        let r = asw_ramify(&asw(vec![RatFn::one(&f)]), &Caps::default()).unwrap();
        assert_eq!((r.degree, r.e_inf, r.f_inf, r.h_inf), (3, 1, 3, 1));
        assert_eq!(r.constant_field_degree, 3);
        // over F_4, x^2 - x = 1 is solvable: trivial extension
        let f4 = Fq::new(2, 2).unwrap();
        let r = asw_ramify(&asw(vec![RatFn::one(&f4)]), &Caps::default()).unwrap();
        assert_eq!(r.degree, 1);
    }

    #[test]
    fn reductions_remove_p_divisible_poles() {
        let f = Fq::new(2, 1).unwrap();
        let t = poly(&f, &[0, 1]);
        // 1/T^2 reduces to 1/T; T^2 reduces to T at infinity
        let x = WittVec::new(vec![rat(&f, &[1], &[0, 0, 1])]).unwrap();
        assert_eq!(witt_reduce_at(&x, &t).unwrap().coords()[0], rat(&f, &[1], &[0, 1]));
        let y = WittVec::new(vec![rat(&f, &[0, 0, 1], &[1])]).unwrap();
        assert_eq!(witt_reduce_at_infinity(&y).unwrap().coords()[0], rat(&f, &[0, 1], &[1]));
    }

    #[test]
    fn witt_trace_identifies_quotient() {
        let f = Fq::new(3, 1).unwrap();
        let s = |a: u32, b: u32| WittVec::new(vec![FqScalar::new(&f, FqElem(a)), FqScalar::new(&f, FqElem(b))]).unwrap();
        assert_eq!(witt_trace_int(&s(1, 0)).unwrap(), 1);
        assert_eq!(witt_trace_int(&s(0, 1)).unwrap(), 3);
        assert_eq!(witt_trace_int(&s(2, 0)).unwrap(), 8);
        let f4 = Fq::new(2, 2).unwrap();
        let one = WittVec::new(vec![FqScalar::new(&f4, f4.one())]).unwrap();
        assert_eq!(witt_trace_int(&one).unwrap(), 0);
    }

    #[test]
    fn infinite_constant_class_examples() {
        let caps = Caps::default();
        for p in [2u64, 3, 5] {
            let f = Fq::new(p, 1).unwrap();
            let one = WittVec::new(vec![FqScalar::new(&f, f.one())]).unwrap();
            assert_eq!(infinite_constant_class(&one, 1, &caps).unwrap(), p);
            let zero = WittVec::new(vec![FqScalar::new(&f, f.zero())]).unwrap();
            assert_eq!(infinite_constant_class(&zero, 1, &caps).unwrap(), 1);
        }
        let f4 = Fq::new(2, 2).unwrap();
        let one = WittVec::new(vec![FqScalar::new(&f4, f4.one())]).unwrap();
        assert_eq!(infinite_constant_class(&one, 1, &caps).unwrap(), 1);
    }

    #[test]
    fn kummer_examples() {
        let f5 = Fq::new(5, 1).unwrap();
        let d = &poly(&f5, &[0, 0, 1]) * &poly(&f5, &[1, 1]);
        let r = kummer_ramify(&kummer_normalize(4, &d).unwrap()).unwrap();
        assert_eq!(r.e_at(&poly(&f5, &[0, 1])), 2);
        assert_eq!(r.e_at(&poly(&f5, &[1, 1])), 4);
        let f3 = Fq::new(3, 1).unwrap();
        let r = kummer_ramify(&kummer_normalize(2, &poly(&f3, &[0, 1, 1])).unwrap()).unwrap();
        assert_eq!((r.e_inf, r.f_inf, r.h_inf), (1, 1, 2));
        let r = kummer_ramify(&kummer_normalize(2, &poly(&f3, &[0, 1])).unwrap()).unwrap();
        assert_eq!(r.e_inf, 2);
    }
}
