//! Descriptors of abelian extensions of k = F_q(T): Kummer, Artin–Schreier–Witt,
//! subfields of Carlitz cyclotomic fields, their composites, and constant
//! field extensions.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;

use crate::chars::{DirichletChar, UnitGroup, DEFAULT_UNIT_GROUP_CAP};
use crate::error::{Error, Result};
use crate::ffalg::{factor, Fq, FqElem, Poly};
use crate::ratfrac::RatFn;
use crate::witt::{WittCaps, WittVec};

/// Size limits applied while validating and computing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub witt: WittCaps,
    /// Maximum order of `(R_T/N)^*`.
    pub unit_group: u128,
    /// Maximum number of elements enumerated in a character group or in
    /// `W_v(F_q)`.
    pub enumeration: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { witt: WittCaps::default(), unit_group: DEFAULT_UNIT_GROUP_CAP, enumeration: 1 << 16 }
    }
}

/// `K = k(t-th root of gamma D)` with `t | q - 1`, `D` monic and t-power free.
#[derive(Clone, Debug, PartialEq)]
pub struct KummerExt {
    pub t: u64,
    pub d: Poly,
    /// Sorted pairs `(P_i, alpha_i)` with `1 <= alpha_i < t`.
    pub factors: Vec<(Poly, u32)>,
    /// `(-1)^deg D`.
    pub gamma: FqElem,
}

impl KummerExt {
    pub fn field(&self) -> &Fq {
        self.d.field()
    }

    /// The radicand `gamma D`.
    pub fn radicand(&self) -> Poly {
        self.d.scale(self.gamma)
    }
}

fn sign_power(f: &Fq, k: usize) -> FqElem {
    if k.is_multiple_of(2) { f.one() } else { f.neg(f.one()) }
}

/// Reduces exponents modulo t, drops primes whose exponent vanishes and
/// recomputes the sign from the reduced D.
pub fn kummer_normalize(t: u64, d_raw: &Poly) -> Result<KummerExt> {
    let f = d_raw.field().clone();
    let qm1 = f.q() - 1;
    if t == 0 || !qm1.is_multiple_of(t) {
        return Err(Error::BadKummerDegree { t, qm1 });
    }
    if d_raw.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if d_raw.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    if !d_raw.is_monic() {
        return Err(Error::Schema("Kummer radicand D must be monic".into()));
    }
    let mut factors: Vec<(Poly, u32)> = factor(d_raw)?
        .factors
        .into_iter()
        .map(|(p, a)| (p, (a as u64 % t) as u32))
        .filter(|(_, a)| *a != 0)
        .collect();
    if factors.is_empty() {
        return Err(Error::TrivialExtension);
    }
    factors.sort();
    let d = factors.iter().fold(Poly::one(&f), |acc, (p, a)| &acc * &p.pow(*a as u64));
    let gamma = sign_power(&f, d.deg().unwrap());
    Ok(KummerExt { t, d, factors, gamma })
}

/// `K = k(y)` with `y^(p^u) - y = xi` in `W_v(k)`; optionally the cyclic
/// factors `w_i^p - w_i = xi_i` of a decomposition of `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct AswExt {
    pub u: u32,
    pub xi: WittVec<RatFn>,
    pub factors: Option<Vec<WittVec<RatFn>>>,
}

impl AswExt {
    pub fn new(u: u32, xi: WittVec<RatFn>, factors: Option<Vec<WittVec<RatFn>>>, caps: &Caps) -> Result<AswExt> {
        let f = xi.coords()[0].field().clone();
        if u == 0 || !f.l().is_multiple_of(u) {
            return Err(Error::BadFrobeniusPower { u, l: f.l() });
        }
        caps.witt.check(f.p(), xi.len())?;
        if xi.coords().iter().any(|c| c.field() != &f) {
            return Err(Error::Mismatch("Witt coordinates over different fields".into()));
        }
        if let Some(fs) = &factors {
            if fs.is_empty() {
                return Err(Error::InconsistentFactors("empty factor list".into()));
            }
            for w in fs {
                if w.len() != xi.len() {
                    return Err(Error::InconsistentFactors(format!(
                        "factor of length {} for Witt length {}",
                        w.len(),
                        xi.len()
                    )));
                }
                if w.coords().iter().any(|c| c.field() != &f) {
                    return Err(Error::InconsistentFactors("factor over a different field".into()));
                }
            }
        }
        Ok(AswExt { u, xi, factors })
    }

    pub fn field(&self) -> &Fq {
        self.xi.coords()[0].field()
    }

    pub fn v(&self) -> usize {
        self.xi.len()
    }

    pub fn p(&self) -> u64 {
        self.field().p()
    }

    /// Generators `x` of the character group, each defining a cyclic
    /// extension by `z^p - z = x`. With factors present these are the
    /// factors; otherwise they are the Teichmüller multiples `[beta_j] xi`
    /// for an F_p-basis `beta_j` of `F_(p^u)`.
    pub fn char_generators(&self) -> Vec<WittVec<RatFn>> {
        if let Some(fs) = &self.factors {
            return fs.clone();
        }
        subfield_basis(self.field(), self.u).into_iter().map(|b| teichmuller_scale(b, &self.xi)).collect()
    }
}

/// F_p-basis `1, h, ..., h^(u-1)` of `F_(p^u)` inside F_q, with `h` a
/// generator of its multiplicative group.
pub fn subfield_basis(f: &Fq, u: u32) -> Vec<FqElem> {
    if u == 1 {
        return vec![f.one()];
    }
    let pu = f.p().pow(u);
    let h = f.exp((f.q() - 1) / (pu - 1));
    (0..u as u64).map(|j| f.pow(h, j)).collect()
}

/// Product `[beta] x` of a Teichmüller representative with a Witt vector:
/// coordinate i is scaled by `beta^(p^i)`.
pub fn teichmuller_scale(beta: FqElem, x: &WittVec<RatFn>) -> WittVec<RatFn> {
    let f = x.coords()[0].field().clone();
    let mut b = beta;
    let coords = x
        .coords()
        .iter()
        .map(|c| {
            let out = c.scale(b);
            b = f.pow(b, f.p());
            out
        })
        .collect();
    WittVec::new(coords).expect("nonempty")
}

/// Splits an ASW descriptor into cyclic factors `w^p - w = x`.
pub fn asw_cyclic_split(k: &AswExt) -> Result<Vec<AswExt>> {
    if k.factors.is_none() && k.u > 1 && k.v() > 1 {
        return Err(Error::MissingFactors);
    }
    Ok(k.char_generators().into_iter().map(|x| AswExt { u: 1, xi: x, factors: None }).collect())
}

/// Decomposition `xi = delta_1 + ... + delta_r + gamma` (Witt sums), each
/// `delta_i` with poles only at `P_i` and vanishing at infinity, `gamma`
/// with polynomial coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct AswDecomposition {
    pub deltas: Vec<(Poly, WittVec<RatFn>)>,
    pub gamma: WittVec<RatFn>,
}

impl AswDecomposition {
    /// Witt sum of all parts.
    pub fn recombine(&self) -> Result<WittVec<RatFn>> {
        self.deltas.iter().try_fold(self.gamma.clone(), |acc, (_, d)| acc.add(d))
    }

    /// Witt sum of the `delta_i`.
    pub fn finite_part(&self) -> Result<WittVec<RatFn>> {
        let zero = WittVec::zero(&self.gamma.coords()[0], self.gamma.len());
        self.deltas.iter().try_fold(zero, |acc, (_, d)| acc.add(d))
    }
}

/// Sorted monic primes dividing some coordinate denominator.
pub fn pole_primes(xi: &WittVec<RatFn>) -> Result<Vec<Poly>> {
    let mut primes = Vec::new();
    for c in xi.coords() {
        if !c.den().is_one() {
            primes.extend(factor(c.den())?.factors.into_iter().map(|(p, _)| p));
        }
    }
    primes.sort();
    primes.dedup();
    Ok(primes)
}

/// Processes coordinates left to right and primes in sorted order, moving
/// the pole part at each prime into that prime's summand.
pub fn asw_decompose(xi: &WittVec<RatFn>) -> Result<AswDecomposition> {
    let v = xi.len();
    let zero = RatFn::zero(xi.coords()[0].field());
    let primes = pole_primes(xi)?;
    let mut residual = xi.clone();
    let mut deltas: BTreeMap<Poly, WittVec<RatFn>> = BTreeMap::new();
    for j in 0..v {
        for prime in &primes {
            let part = residual.coords()[j].pole_part_rat(prime);
            if part.is_zero() {
                continue;
            }
            let piece = WittVec::single(part, j, v);
            let entry = deltas.entry(prime.clone()).or_insert_with(|| WittVec::zero(&zero, v));
            *entry = entry.add(&piece)?;
            residual = residual.sub(&piece)?;
        }
        if !residual.coords()[j].is_poly() {
            return Err(Error::Internal("pole at a prime outside the denominator support".into()));
        }
    }
    let deltas = deltas.into_iter().filter(|(_, d)| !d.is_zero()).collect();
    Ok(AswDecomposition { deltas, gamma: residual })
}

/// Subfield of `k(Lambda_N)` given by generators of its character group.
#[derive(Clone, Debug)]
pub struct CyclotomicSubfield {
    pub group: Arc<UnitGroup>,
    pub chars: Vec<DirichletChar>,
}

impl CyclotomicSubfield {
    pub fn new(group: Arc<UnitGroup>, chars: Vec<DirichletChar>) -> Result<CyclotomicSubfield> {
        for c in &chars {
            if c.exps.len() != group.generators().len() {
                return Err(Error::Schema("character does not match the unit group".into()));
            }
        }
        Ok(CyclotomicSubfield { group, chars })
    }

    pub fn modulus(&self) -> &Poly {
        self.group.modulus()
    }

    pub fn field(&self) -> &Fq {
        self.group.modulus().field()
    }

    /// `[K:k]`, the order of the character group.
    pub fn degree(&self) -> u64 {
        self.group.span(&self.chars).len() as u64
    }

    /// Exponent of the character group.
    pub fn exponent(&self) -> u64 {
        self.chars.iter().fold(1u64, |a, c| a.lcm(&self.group.char_order(c)))
    }
}

/// `E_0 E_1 ... E_s`: an abelian p-extension with cyclic tame parts of
/// degree prime to `p(q - 1)`.
#[derive(Clone, Debug)]
pub struct CompositeExt {
    pub p_part: Option<AswExt>,
    pub tame: Vec<CyclotomicSubfield>,
}

impl CompositeExt {
    pub fn new(field: &Fq, p_part: Option<AswExt>, tame: Vec<CyclotomicSubfield>) -> Result<CompositeExt> {
        if let Some(a) = &p_part {
            if a.field() != field {
                return Err(Error::Mismatch("p-part over a different field".into()));
            }
        }
        let pq = field.p() * (field.q() - 1);
        let mut total = 1u64;
        for part in &tame {
            if part.field() != field {
                return Err(Error::Mismatch("tame part over a different field".into()));
            }
            let deg = part.degree();
            if part.exponent() != deg {
                return Err(Error::TameDegree(format!("tame part of degree {deg} is not cyclic")));
            }
            if deg.gcd(&pq) != 1 {
                return Err(Error::TameDegree(format!("degree {deg} shares a factor with p(q-1) = {pq}")));
            }
            total = total.saturating_mul(deg);
        }
        if total.gcd(&pq) != 1 {
            return Err(Error::TameDegree(format!("total tame degree {total}")));
        }
        Ok(CompositeExt { p_part, tame })
    }
}

/// The constant field extension `k_m = F_(q^m)(T)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantExt {
    pub field: Fq,
    pub m: u64,
}

impl ConstantExt {
    pub fn new(field: &Fq, m: u64) -> Result<ConstantExt> {
        if m == 0 {
            return Err(Error::Schema("constant extension degree must be positive".into()));
        }
        Ok(ConstantExt { field: field.clone(), m })
    }
}

/// Tagged union of the supported descriptor families.
#[derive(Clone, Debug)]
pub enum Descriptor {
    Kummer(KummerExt),
    Asw(AswExt),
    Cyclotomic(CyclotomicSubfield),
    Composite(CompositeExt),
    Constant(ConstantExt),
}
