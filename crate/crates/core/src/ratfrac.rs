//! Rational functions in F_q(T), partial fractions over monic primes, and
//! Artin–Schreier pole-order reduction.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ffalg::{factor, Fq, FqElem, Poly};

/// A discrete valuation value; `Inf` is the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Val {
    Finite(i64),
    Inf,
}

impl Val {
    pub fn finite(self) -> Option<i64> {
        match self {
            Val::Finite(v) => Some(v),
            Val::Inf => None,
        }
    }

    /// Pole order: `-v` when negative, else 0.
    pub fn pole_order(self) -> u64 {
        match self {
            Val::Finite(v) if v < 0 => (-v) as u64,
            _ => 0,
        }
    }
}

impl Ord for Val {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Val::Inf, Val::Inf) => Ordering::Equal,
            (Val::Inf, _) => Ordering::Greater,
            (_, Val::Inf) => Ordering::Less,
            (Val::Finite(a), Val::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Val {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// num/den with den monic and gcd(num, den) = 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<RatFn> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> RatFn {
        let f = den.field().clone();
        if num.is_zero() {
            return RatFn { num, den: Poly::one(&f) };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.div_rem(&g).0, den.div_rem(&g).0);
        let li = f.inv(d.lead()).expect("nonzero denominator");
        n = n.scale(li);
        d = d.scale(li);
        RatFn { num: n, den: d }
    }

    pub fn from_poly(p: Poly) -> RatFn {
        let one = Poly::one(p.field());
        RatFn { num: p, den: one }
    }

    pub fn zero(f: &Fq) -> RatFn {
        RatFn::from_poly(Poly::zero(f))
    }

    pub fn one(f: &Fq) -> RatFn {
        RatFn::from_poly(Poly::one(f))
    }

    pub fn constant(f: &Fq, c: FqElem) -> RatFn {
        RatFn::from_poly(Poly::constant(f, c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn field(&self) -> &Fq {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Option<RatFn> {
        (!self.is_zero()).then(|| Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFn) -> Option<RatFn> {
        other.inv().map(|i| self * &i)
    }

    pub fn pow(&self, e: u64) -> RatFn {
        RatFn { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// p-th power (coprimality is preserved).
    pub fn frobenius(&self) -> RatFn {
        RatFn { num: self.num.frobenius(), den: self.den.frobenius() }
    }

    pub fn scale(&self, c: FqElem) -> RatFn {
        Self::normalize(self.num.scale(c), self.den.clone())
    }

    /// deg(den) - deg(num), or `Inf` for zero.
    pub fn v_infinity(&self) -> Val {
        match (self.num.deg(), self.den.deg()) {
            (None, _) => Val::Inf,
            (Some(n), Some(d)) => Val::Finite(d as i64 - n as i64),
            (Some(_), None) => unreachable!("denominator is nonzero"),
        }
    }

    /// Valuation at a monic irreducible P.
    pub fn v_at(&self, prime: &Poly) -> Val {
        if self.is_zero() {
            return Val::Inf;
        }
        Val::Finite(poly_val(&self.num, prime) as i64 - poly_val(&self.den, prime) as i64)
    }

    /// Residue at infinity, defined when v_infinity >= 0.
    pub fn value_at_infinity(&self) -> Option<FqElem> {
        match self.v_infinity() {
            Val::Inf => Some(FqElem::ZERO),
            Val::Finite(0) => Some(self.num.lead()),
            Val::Finite(v) if v > 0 => Some(FqElem::ZERO),
            _ => None,
        }
    }

    /// Value at T = c, defined when the denominator does not vanish there.
    pub fn eval(&self, c: FqElem) -> Option<FqElem> {
        let f = self.field();
        f.div(self.num.eval(c), self.den.eval(c))
    }

    /// The substitution T -> 1/T.
    pub fn invert_variable(&self) -> RatFn {
        if self.is_zero() {
            return self.clone();
        }
        let dn = self.num.deg().unwrap();
        let dd = self.den.deg().unwrap();
        let n = self.num.reverse(dn);
        let d = self.den.reverse(dd);
        let (n, d) = if dd >= dn {
            (n.shift(dd - dn), d)
        } else {
            (n, d.shift(dn - dd))
        };
        Self::normalize(n, d)
    }

    /// Principal part at P: returns (Q, e) with Q/P^e the P-pole part,
    /// deg Q < deg P^e and gcd(Q, P) = 1; (0, 0) when there is no pole.
    pub fn pole_part_at(&self, prime: &Poly) -> (Poly, u32) {
        let f = self.field().clone();
        let e = poly_val(&self.den, prime);
        if e == 0 {
            return (Poly::zero(&f), 0);
        }
        let pe = prime.pow(e as u64);
        let rest = self.den.div_rem(&pe).0;
        // s*P^e + t*rest = 1, so num/den = num*t/P^e + num*s/rest
        let (_, _, t) = pe.xgcd(&rest);
        let q = self.num.mul_mod(&t, &pe);
        reduce_part(q, prime, e)
    }

    pub fn pole_part_rat(&self, prime: &Poly) -> RatFn {
        let (q, e) = self.pole_part_at(prime);
        Self::normalize(q, prime.pow(e as u64))
    }

    /// Polynomial part: the quotient of num by den.
    pub fn poly_part(&self) -> Poly {
        self.num.div_rem(&self.den).0
    }
}

fn reduce_part(mut q: Poly, prime: &Poly, mut e: u32) -> (Poly, u32) {
    while e > 0 && !q.is_zero() {
        let (quo, r) = q.div_rem(prime);
        if !r.is_zero() {
            break;
        }
        q = quo;
        e -= 1;
    }
    if q.is_zero() {
        return (q, 0);
    }
    (q, e)
}

/// Multiplicity of a prime in a nonzero polynomial.
pub fn poly_val(f: &Poly, prime: &Poly) -> u32 {
    if f.is_zero() {
        return u32::MAX;
    }
    let mut g = f.clone();
    let mut k = 0;
    loop {
        let (quo, r) = g.div_rem(prime);
        if !r.is_zero() {
            return k;
        }
        g = quo;
        k += 1;
    }
}

impl<'a> Add<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.den == rhs.den {
            return RatFn::normalize(&self.num + &rhs.num, self.den.clone());
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFn::normalize(n, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero(self.field());
        }
        RatFn::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}

/// One summand Q/P^e of a partial-fraction decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfPart {
    pub prime: Poly,
    pub exp: u32,
    pub num: Poly,
}

impl PfPart {
    pub fn to_ratfn(&self) -> RatFn {
        RatFn::normalize(self.num.clone(), self.prime.pow(self.exp as u64))
    }
}

/// a = polypart + sum Q/P^e with one summand per prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFraction {
    pub parts: Vec<PfPart>,
    pub polypart: Poly,
}

impl PartialFraction {
    pub fn recombine(&self) -> RatFn {
        self.parts
            .iter()
            .fold(RatFn::from_poly(self.polypart.clone()), |acc, part| &acc + &part.to_ratfn())
    }
}

pub fn pf_decompose(a: &RatFn) -> PartialFraction {
    let (polypart, _) = a.num.div_rem(&a.den);
    let mut parts = Vec::new();
    if !a.den.is_one() {
        let fac = factor(&a.den).expect("denominator is nonzero");
        for (prime, _) in fac.factors {
            let (num, exp) = a.pole_part_at(&prime);
            if exp > 0 {
                parts.push(PfPart { prime, exp, num });
            }
        }
    }
    parts.sort_by(|x, y| x.prime.cmp(&y.prime));
    PartialFraction { parts, polypart }
}

/// p-th root in the residue field R_T/P of an element given mod P.
fn residue_pth_root(c: &Poly, prime: &Poly) -> Poly {
    let f = prime.field();
    let n = f.l() as usize * prime.deg().unwrap();
    let mut x = c.rem(prime);
    for _ in 1..n {
        x = x.pow_mod(f.p() as u128, prime);
    }
    // c^(p^(n-1)) is the p-th root in a field of order p^n
    x
}

/// Removes poles at P whose order is divisible by p by subtracting
/// w^p - w. Returns (a', witness) with a' = a - (witness^p - witness).
pub fn as_reduce_at(a: &RatFn, prime: &Poly) -> (RatFn, RatFn) {
    let f = a.field().clone();
    let p = f.p() as u32;
    let mut cur = a.clone();
    let mut witness = RatFn::zero(&f);
    loop {
        let (q, e) = cur.pole_part_at(prime);
        if e == 0 || e % p != 0 {
            break;
        }
        let root = residue_pth_root(&q, prime);
        let w = RatFn::normalize(root, prime.pow((e / p) as u64));
        cur = &(&cur - &w.frobenius()) + &w;
        witness = &witness + &w;
    }
    (cur, witness)
}

/// The same reduction at the infinite prime.
pub fn as_reduce_at_infinity(a: &RatFn) -> (RatFn, RatFn) {
    let f = a.field().clone();
    let p = f.p() as i64;
    let mut cur = a.clone();
    let mut witness = RatFn::zero(&f);
    loop {
        let v = match cur.v_infinity() {
            Val::Finite(v) if v < 0 && (-v) % p == 0 => v,
            _ => break,
        };
        let root = f.pth_root(cur.num.lead());
        let w = RatFn::from_poly(Poly::monomial(&f, root, ((-v) / p) as usize));
        cur = &(&cur - &w.frobenius()) + &w;
        witness = &witness + &w;
    }
    (cur, witness)
}

/// One F_p-coordinate of the Artin–Schreier normal form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AsSlot {
    /// Digit `index` of the numerator of the `P^-order` term of the
    /// P-adic pole expansion, `p` not dividing `order`.
    Pole { prime: Poly, order: u32, index: usize },
    /// Digit `index` of the coefficient of `T^degree`, `p` not dividing
    /// `degree`.
    Infinity { degree: usize, index: usize },
    /// Absolute trace of the constant term.
    ConstantTrace,
}

/// P-adic pole expansion `(c_1, .., c_e)` of `q / P^e`, with `deg c_j < deg P`.
fn pole_expansion(q: &Poly, prime: &Poly, e: u32) -> Vec<Poly> {
    let mut out = vec![Poly::zero(prime.field()); e as usize];
    let mut rest = q.clone();
    for i in 0..e as usize {
        let (quo, r) = rest.div_rem(prime);
        out[e as usize - 1 - i] = r;
        rest = quo;
    }
    out
}

fn push_digits(out: &mut BTreeMap<AsSlot, u64>, f: &Fq, c: &Poly, slot: impl Fn(usize) -> AsSlot) {
    let l = f.l() as usize;
    for (k, coeff) in c.coeffs().iter().enumerate() {
        for (d, digit) in f.digits(*coeff).into_iter().enumerate() {
            if digit != 0 {
                out.insert(slot(k * l + d), digit);
            }
        }
    }
}

/// Coordinates over F_p of the class of `a` in `k / (F - 1) k`: every pole
/// term of order divisible by p is removed by subtracting `w^p - w`, and
/// the constant term is replaced by its absolute trace. Two functions
/// define the same class iff their normal forms agree.
pub fn as_normal_form(a: &RatFn) -> Result<BTreeMap<AsSlot, u64>> {
    let f = a.field().clone();
    let p = f.p();
    let mut out = BTreeMap::new();
    if !a.den.is_one() {
        for prime in factor(&a.den)?.primes() {
            let mut h = a.pole_part_rat(prime);
            loop {
                let (q, e) = h.pole_part_at(prime);
                let terms = pole_expansion(&q, prime, e);
                let top = (1..=e).rev().find(|&j| (j as u64).is_multiple_of(p) && !terms[j as usize - 1].is_zero());
                match top {
                    Some(j) => {
                        let b = residue_pth_root(&terms[j as usize - 1], prime);
                        let w = RatFn::normalize(b, prime.pow(j as u64 / p));
                        h = (&(&h - &w.frobenius()) + &w).pole_part_rat(prime);
                    }
                    None => {
                        for (j, c) in terms.iter().enumerate() {
                            let order = j as u32 + 1;
                            push_digits(&mut out, &f, c, |index| AsSlot::Pole { prime: prime.clone(), order, index });
                        }
                        break;
                    }
                }
            }
        }
    }
    let mut g = a.poly_part();
    loop {
        let deg = g.deg().unwrap_or(0);
        let top = (1..=deg).rev().find(|&i| (i as u64).is_multiple_of(p) && !g.coeff(i).is_zero());
        let Some(i) = top else { break };
        let c = g.coeff(i);
        let root = f.pth_root(c);
        g = &(&g - &Poly::monomial(&f, c, i)) + &Poly::monomial(&f, root, i / p as usize);
    }
    for (i, c) in g.coeffs().iter().enumerate().skip(1) {
        push_digits(&mut out, &f, &Poly::constant(&f, *c), |index| AsSlot::Infinity { degree: i, index });
    }
    let mut tr = f.zero();
    let mut y = g.coeff(0);
    for _ in 0..f.l() {
        tr = f.add(tr, y);
        y = f.pow(y, p);
    }
    if !tr.is_zero() {
        out.insert(AsSlot::ConstantTrace, tr.0 as u64);
    }
    Ok(out)
}

/// Dimension over F_p of the span of the classes of `gens` in
/// `k / (F - 1) k`; the extension they generate has degree `p^rank`.
pub fn as_rank(gens: &[RatFn]) -> Result<usize> {
    let Some(first) = gens.first() else { return Ok(0) };
    let p = first.field().p();
    let inv = |x: u64| (1..p).find(|y| x * y % p == 1).expect("nonzero residue");
    let mut basis: Vec<(AsSlot, BTreeMap<AsSlot, u64>)> = Vec::new();
    for g in gens {
        let mut v = as_normal_form(g)?;
        for (pivot, b) in &basis {
            let Some(&c) = v.get(pivot) else { continue };
            for (slot, &x) in b {
                let entry = v.entry(slot.clone()).or_insert(0);
                *entry = (*entry + (p - c) * x) % p;
                if *entry == 0 {
                    v.remove(slot);
                }
            }
        }
        if let Some((pivot, &c)) = v.iter().next() {
            let pivot = pivot.clone();
            let s = inv(c);
            let normalized = v.into_iter().map(|(k, x)| (k, x * s % p)).collect();
            basis.push((pivot, normalized));
        }
    }
    Ok(basis.len())
}
