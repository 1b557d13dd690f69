//! Brute-force verifiers for the fast paths.
//!
//! Each oracle takes a different mathematical route from the code it checks:
//!
//! * Witt addition is checked against ghost components computed in
//!   `(Z/p^v)[x] / (lifted modulus)`, never through the universal polynomials.
//! * Artin–Schreier ramification is read off the fully reduced function at
//!   each place (pole order prime to p, residue trace at infinity).
//! * Unramifiedness of a genus field is checked generator by generator.
//! * The conductor of constants is found by searching for the least `m'` that
//!   kills every constant class, with classes computed by enumerating the
//!   image of `F - 1` on `W_v(F_q)`.
//! * Kummer genus fields are compared with the character path inside
//!   `k(Lambda_N)`.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;

use crate::chars::{genus_char_bruteforce, power_residue_char, DirichletChar, UnitGroup};
use crate::error::{Error, Result};
use crate::extdesc::{
    pole_primes, subfield_basis, teichmuller_scale, AswExt, Caps, CompositeExt, Descriptor, KummerExt,
};
use crate::ffalg::{factor, Fq, FqScalar, Poly};
use crate::genus::{kummer_genus_data, tame_genus, GenusFieldReport, GenusGenerator};
use crate::ramify::{
    asw_finite_ramification_from_decomposition, asw_ramify, infinite_constant_class, ramify,
    same_asw_field, value_at_zero, AswGroup,
};
use crate::ratfrac::{as_reduce_at, as_reduce_at_infinity, RatFn, Val};
use crate::witt::WittVec;

/// Outcome of one oracle run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub claim: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    /// Debug rendering of the instance.
    pub instance: String,
}

impl OracleVerdict {
    fn compare<T: std::fmt::Debug + PartialEq>(claim: &str, expected: T, observed: T, instance: String) -> Self {
        OracleVerdict {
            claim: claim.to_string(),
            pass: expected == observed,
            expected: format!("{expected:?}"),
            observed: format!("{observed:?}"),
            instance,
        }
    }
}

// ---------------------------------------------------------------- ghost

/// The ring `(Z/p^v)[x] / (M)` with `M` a monic lift of the modulus of F_q:
/// a model of `W_v(F_q)` in characteristic `p^v`.
struct GhostRing {
    pv: u64,
    modulus: Vec<u64>,
}

impl GhostRing {
    fn new(f: &Fq, v: usize) -> GhostRing {
        GhostRing { pv: f.p().pow(v as u32), modulus: f.modulus().to_vec() }
    }

    fn l(&self) -> usize {
        self.modulus.len() - 1
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.pv).collect()
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let l = self.l();
        let m = self.pv as u128;
        let mut prod = vec![0u128; 2 * l];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % m;
            }
        }
        for k in (l..2 * l).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &mi) in self.modulus[..l].iter().enumerate() {
                prod[k - l + i] = (prod[k - l + i] + (m - c) * mi as u128) % m;
            }
        }
        prod[..l].iter().map(|&x| x as u64).collect()
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut r = vec![0u64; self.l()];
        r[0] = 1 % self.pv;
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    fn scale(&self, a: &[u64], c: u64) -> Vec<u64> {
        a.iter().map(|x| (x * c) % self.pv).collect()
    }

    /// Ghost components `w_j = sum_(i <= j) p^i x_i^(p^(j-i))` of the
    /// digit lift of a Witt vector.
    fn ghost(&self, x: &WittVec<FqScalar>) -> Vec<Vec<u64>> {
        let f = &x.coords()[0].field;
        let p = f.p();
        let lifts: Vec<Vec<u64>> = x.coords().iter().map(|c| f.digits(c.value)).collect();
        (0..x.len())
            .map(|j| {
                (0..=j).fold(vec![0u64; self.l()], |acc, i| {
                    let term = self.scale(&self.pow(&lifts[i], p.pow((j - i) as u32)), p.pow(i as u32));
                    self.add(&acc, &term)
                })
            })
            .collect()
    }
}

/// Checks `ghost_j(x + y) = ghost_j(x) + ghost_j(y)` modulo `p^(j+1)` for
/// the given addition.
pub fn oracle_witt_ghost_with(
    x: &WittVec<FqScalar>,
    y: &WittVec<FqScalar>,
    add: impl Fn(&WittVec<FqScalar>, &WittVec<FqScalar>) -> Result<WittVec<FqScalar>>,
) -> Result<OracleVerdict> {
    if x.len() != y.len() {
        return Err(Error::Mismatch("Witt vectors of different lengths".into()));
    }
    let f = x.coords()[0].field.clone();
    let p = f.p();
    let ring = GhostRing::new(&f, x.len());
    let sum = add(x, y)?;
    let (gx, gy, gs) = (ring.ghost(x), ring.ghost(y), ring.ghost(&sum));
    let reduce = |w: &[u64], j: usize| -> Vec<u64> { w.iter().map(|c| c % p.pow(j as u32 + 1)).collect() };
    let expected: Vec<Vec<u64>> = (0..x.len()).map(|j| reduce(&ring.add(&gx[j], &gy[j]), j)).collect();
    let observed: Vec<Vec<u64>> = (0..x.len()).map(|j| reduce(&gs[j], j)).collect();
    Ok(OracleVerdict::compare("ghost components of a Witt sum", expected, observed, format!("x = {x:?}, y = {y:?}")))
}

pub fn oracle_witt_ghost(x: &WittVec<FqScalar>, y: &WittVec<FqScalar>) -> Result<OracleVerdict> {
    oracle_witt_ghost_with(x, y, |a, b| a.add(b))
}

// ---------------------------------------------------------------- Artin–Schreier

/// Local data `(e, f)` of `y^p - y = a` at one place.
fn as_local(reduced: &RatFn, v: Val, at_infinity: bool) -> (u64, u64) {
    let f = reduced.field();
    let p = f.p();
    if matches!(v, Val::Finite(k) if k < 0) {
        return (p, 1);
    }
    if !at_infinity {
        return (1, 1);
    }
    let c = reduced.value_at_infinity().expect("regular at infinity");
    // absolute trace of the residue
    let mut tr = f.zero();
    let mut y = c;
    for _ in 0..f.l() {
        tr = f.add(tr, y);
        y = f.pow(y, p);
    }
    (1, if tr.is_zero() { 1 } else { p })
}

/// Finite ramification and `(e, f)` at infinity claimed by a fast path.
pub type AsClaim = (Vec<(Poly, u64)>, (u64, u64));

/// The fast paths under test: character counting with Schmid's rule, and
/// the Schmid index of each summand of the decomposition.
pub fn as_fast_paths(alpha: &RatFn, caps: &Caps) -> Result<(AsClaim, Vec<(Poly, u64)>)> {
    let xi = WittVec::new(vec![alpha.clone()])?;
    let report = asw_ramify(&AswExt::new(1, xi.clone(), None, caps)?, caps)?;
    let from_decomposition = asw_finite_ramification_from_decomposition(&xi)?;
    Ok(((report.finite, (report.e_inf, report.f_inf)), from_decomposition))
}

/// Ramification of `y^p - y = alpha` at every pole prime and at infinity,
/// from full reduction, against the given claims.
pub fn oracle_as_different_with(alpha: &RatFn, claim: AsClaim, from_decomposition: Vec<(Poly, u64)>) -> Result<OracleVerdict> {
    let xi = WittVec::new(vec![alpha.clone()])?;
    let mut expected_finite = Vec::new();
    for prime in pole_primes(&xi)? {
        let (a, _) = as_reduce_at(alpha, &prime);
        let (e, _) = as_local(&a, a.v_at(&prime), false);
        if e > 1 {
            expected_finite.push((prime, e));
        }
    }
    let (a_inf, _) = as_reduce_at_infinity(alpha);
    let (e_inf, f_inf) = as_local(&a_inf, a_inf.v_infinity(), true);
    let expected = (expected_finite.clone(), expected_finite, (e_inf, f_inf));
    let observed = (claim.0, from_decomposition, claim.1);
    Ok(OracleVerdict::compare(
        "Artin-Schreier ramification at every place",
        expected,
        observed,
        format!("alpha = {alpha}"),
    ))
}

pub fn oracle_as_different(alpha: &RatFn, caps: &Caps) -> Result<OracleVerdict> {
    let (claim, dec) = as_fast_paths(alpha, caps)?;
    oracle_as_different_with(alpha, claim, dec)
}

// ---------------------------------------------------------------- unramifiedness

fn teichmuller_multiples(f: &Fq, u: u32, x: &WittVec<RatFn>) -> Vec<WittVec<RatFn>> {
    subfield_basis(f, u).into_iter().map(|b| teichmuller_scale(b, x)).collect()
}

/// Finite ramification of the field generated by the listed generators:
/// wild part by character counting, tame part as the lcm over generators.
fn generator_ramification(
    field: &Fq,
    gens: &[GenusGenerator],
    groups: &BTreeMap<Poly, UnitGroup>,
    caps: &Caps,
) -> Result<BTreeMap<Poly, u64>> {
    let mut witt_chars = Vec::new();
    let mut tame: BTreeMap<Poly, u64> = BTreeMap::new();
    let mut bump = |prime: &Poly, e: u64| {
        let entry = tame.entry(prime.clone()).or_insert(1);
        *entry = entry.lcm(&e);
    };
    for g in gens {
        match g {
            GenusGenerator::Witt { u, rhs, .. } => witt_chars.extend(teichmuller_multiples(field, *u, rhs)),
            GenusGenerator::Radical { root, factors, .. } => {
                for (prime, n) in factors {
                    bump(prime, root / root.gcd(n));
                }
            }
            GenusGenerator::Cyclotomic { modulus, degree, .. } => {
                for prime in factor(modulus)?.primes() {
                    bump(prime, *degree);
                }
            }
            GenusGenerator::Character { modulus, chi, .. } => {
                let group = groups.get(modulus).ok_or_else(|| Error::Internal("unknown character modulus".into()))?;
                for prime in factor(modulus)?.primes() {
                    bump(prime, group.char_order(&group.local_component(chi, prime)));
                }
            }
            GenusGenerator::Constant { .. } => {}
        }
    }
    let mut out = tame;
    if let Some(first) = witt_chars.first() {
        let group = AswGroup::new(field, first.len(), witt_chars.clone(), caps)?;
        for prime in group.primes.clone() {
            *out.entry(prime.clone()).or_insert(1) *= group.e_at(&prime);
        }
    }
    out.retain(|_, e| *e > 1);
    Ok(out)
}

fn descriptor_field(desc: &Descriptor) -> Fq {
    match desc {
        Descriptor::Kummer(k) => k.field().clone(),
        Descriptor::Asw(k) => k.field().clone(),
        Descriptor::Cyclotomic(k) => k.field().clone(),
        Descriptor::Composite(k) => match (&k.p_part, k.tame.first()) {
            (Some(a), _) => a.field().clone(),
            (None, Some(c)) => c.field().clone(),
            (None, None) => unreachable!("composite descriptors carry at least one part"),
        },
        Descriptor::Constant(k) => k.field.clone(),
    }
}

/// `e_P(K_ge/k) = e_P(K/k)` at every finite prime, so that `K_ge/K` is
/// unramified at all finite primes.
pub fn oracle_genus_unramified(desc: &Descriptor, report: &GenusFieldReport, caps: &Caps) -> Result<OracleVerdict> {
    let field = descriptor_field(desc);
    let mut groups = BTreeMap::new();
    if let Descriptor::Cyclotomic(c) = desc {
        groups.insert(c.modulus().clone(), (*c.group).clone());
    }
    let observed = generator_ramification(&field, &report.generators, &groups, caps)?;
    let expected: BTreeMap<Poly, u64> = ramify(desc, caps)?.finite.into_iter().filter(|(_, e)| *e > 1).collect();
    Ok(OracleVerdict::compare(
        "K_ge/K unramified at every finite prime",
        expected,
        observed,
        format!("{desc:?}"),
    ))
}

// ---------------------------------------------------------------- conductor

/// Orders of the constant classes of a descriptor, computed independently of
/// the conductor routes.
fn constant_class_orders(desc: &Descriptor, caps: &Caps) -> Result<Vec<u64>> {
    match desc {
        Descriptor::Asw(k) => asw_constant_orders(k, caps),
        Descriptor::Composite(CompositeExt { p_part: Some(a), .. }) => asw_constant_orders(a, caps),
        Descriptor::Composite(_) | Descriptor::Cyclotomic(_) => Ok(Vec::new()),
        Descriptor::Constant(k) => Ok(vec![k.m]),
        Descriptor::Kummer(k) => {
            let f = k.field();
            // constant left after writing the radicand with the signed primes
            let c = f.mul(k.gamma, if k.d.deg().unwrap() % 2 == 0 { f.one() } else { f.neg(f.one()) });
            let zeta = f.pow(c, (f.q() - 1) / k.t);
            Ok(vec![f.mult_order(zeta)])
        }
    }
}

fn asw_constant_orders(k: &AswExt, caps: &Caps) -> Result<Vec<u64>> {
    k.char_generators()
        .iter()
        .map(|g| {
            let dec = crate::extdesc::asw_decompose(g)?;
            infinite_constant_class(&value_at_zero(&dec.gamma), 1, caps)
        })
        .collect()
}

/// Least `m' <= bound` killing every constant class; passes iff it equals
/// the claimed conductor.
pub fn oracle_conductor_minimality(desc: &Descriptor, m_claimed: u64, bound: u64, caps: &Caps) -> Result<OracleVerdict> {
    if m_claimed > bound {
        return Err(Error::CapExceeded { what: "conductor search bound", needed: m_claimed as u128, cap: bound as u128 });
    }
    let orders = constant_class_orders(desc, caps)?;
    let found = (1..=bound).find(|m| orders.iter().all(|o| m % o == 0));
    Ok(OracleVerdict::compare(
        "least m embedding K in a cyclotomic field times F_(q^m)",
        Some(m_claimed),
        found,
        format!("{desc:?}, bound {bound}"),
    ))
}

/// Search bound `2 p^v` for p-extensions, `2 m` otherwise.
pub fn default_conductor_bound(desc: &Descriptor, m_claimed: u64) -> u64 {
    match desc {
        Descriptor::Asw(k) => 2 * k.p().pow(k.v() as u32),
        Descriptor::Composite(CompositeExt { p_part: Some(a), .. }) => 2 * a.p().pow(a.v() as u32),
        _ => 2 * m_claimed.max(1),
    }
}

// ---------------------------------------------------------------- descriptors

/// The cyclic factors of an ASW descriptor generate the same field as the
/// defining vector.
pub fn oracle_factor_consistency(k: &AswExt, caps: &Caps) -> Result<OracleVerdict> {
    let Some(factors) = &k.factors else {
        return Ok(OracleVerdict::compare("factors define K", true, true, "no factors".into()));
    };
    let from_xi = teichmuller_multiples(k.field(), k.u, &k.xi);
    let same = same_asw_field(k.field(), k.v(), &from_xi, factors, caps)?;
    Ok(OracleVerdict::compare("factors define K", true, same, format!("{k:?}")))
}

/// Kummer genus field against the character path in `k(Lambda_N)` with N the
/// product of the primes of D.
pub fn oracle_kummer_vs_characters(k: &KummerExt, caps: &Caps) -> Result<OracleVerdict> {
    let f = k.field().clone();
    let n = k.factors.iter().fold(Poly::one(&f), |acc, (p, _)| &acc * p);
    let group = UnitGroup::new(&n, caps.unit_group)?;
    let psis: Vec<DirichletChar> =
        k.factors.iter().map(|(p, _)| power_residue_char(&group, p, k.t)).collect::<Result<_>>()?;
    let combo = |exps: &[u64]| -> DirichletChar {
        psis.iter().zip(exps).fold(group.trivial(), |acc, (psi, &e)| {
            (0..e).fold(acc, |a, _| group.char_add(&a, psi))
        })
    };
    let alphas: Vec<u64> = k.factors.iter().map(|(_, a)| *a as u64).collect();
    let cg = genus_char_bruteforce(&group, &[combo(&alphas)])?;

    let data = kummer_genus_data(k, caps)?;
    let minus_one = f.log(f.neg(f.one())).unwrap() % k.t;
    let mut ge_chars = Vec::new();
    for c in &data.b_ge {
        let exps = &c.0[1..];
        let signs: u64 = exps.iter().zip(&k.factors).map(|(n, (p, _))| n * p.deg().unwrap() as u64).sum();
        if !(c.0[0] + k.t * k.t - signs * minus_one % k.t).is_multiple_of(k.t) {
            return Ok(OracleVerdict::compare(
                "Kummer genus field inside k(Lambda_N)",
                "no constant part".to_string(),
                format!("constant part in {c:?}"),
                format!("{k:?}"),
            ));
        }
        ge_chars.push(combo(exps));
    }
    let expected = (cg.genus_fixed.clone(), cg.decomposition_order, cg.degree_l_over_k());
    let observed = (
        group.span(&ge_chars),
        (data.b.len() / data.b_ge.len()) as u64,
        (data.b.len() as u64) / data.frame.degree_of(&data.a),
    );
    Ok(OracleVerdict::compare("Kummer genus field against the character path", expected, observed, format!("{k:?}")))
}

/// Tame genus group of a composite against the brute-force character path.
pub fn oracle_composite_tame(k: &CompositeExt, caps: &Caps) -> Result<OracleVerdict> {
    let Some(tg) = tame_genus(&k.tame, caps)? else {
        return Ok(OracleVerdict::compare("tame genus group", true, true, "no tame part".into()));
    };
    let cg = genus_char_bruteforce(&tg.group, &tg.chars)?;
    let observed: BTreeSet<DirichletChar> = tg.group.span(&tg.genus_chars());
    Ok(OracleVerdict::compare("tame genus group against the character path", cg.genus_fixed, observed, format!("{k:?}")))
}

/// Runs every oracle applicable to a descriptor.
pub fn verify_all(desc: &Descriptor, caps: &Caps) -> Result<Vec<OracleVerdict>> {
    let mut out = Vec::new();
    let report = crate::genus::genus(desc, caps)?;
    out.push(oracle_genus_unramified(desc, &report, caps)?);
    let cond = crate::genus::conductor_of_constants(desc, caps)?;
    out.push(oracle_conductor_minimality(desc, cond.m, default_conductor_bound(desc, cond.m), caps)?);
    match desc {
        Descriptor::Asw(k) => {
            out.push(oracle_factor_consistency(k, caps)?);
            if k.v() == 1 && k.u == 1 {
                out.push(oracle_as_different(&k.xi.coords()[0], caps)?);
            }
        }
        Descriptor::Kummer(k) => out.push(oracle_kummer_vs_characters(k, caps)?),
        Descriptor::Composite(k) => {
            if let Some(a) = &k.p_part {
                out.push(oracle_factor_consistency(a, caps)?);
            }
            out.push(oracle_composite_tame(k, caps)?);
        }
        Descriptor::Cyclotomic(_) | Descriptor::Constant(_) => {}
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extdesc::kummer_normalize;
    use crate::ffalg::FqElem;
    use crate::genus::{conductor_of_constants, genus, genus_asw};

    fn poly(f: &Fq, c: &[u64]) -> Poly {
        Poly::from_ints(f, c)
    }

    fn rat(f: &Fq, n: &[u64], d: &[u64]) -> RatFn {
        RatFn::new(poly(f, n), poly(f, d)).unwrap()
    }

    fn wv(f: &Fq, c: &[u32]) -> WittVec<FqScalar> {
        WittVec::new(c.iter().map(|&x| FqScalar::new(f, FqElem(x))).collect()).unwrap()
    }

    #[test]
    fn ghost_oracle_accepts_witt_addition() {
        let f = Fq::new(2, 2).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let v = oracle_witt_ghost(&wv(&f, &[a, b]), &wv(&f, &[b, 3 - a])).unwrap();
                assert!(v.pass, "{v:?}");
            }
        }
        assert!(oracle_witt_ghost(&wv(&f, &[0, 0]), &wv(&f, &[0, 0])).unwrap().pass);
    }

    #[test]
    fn ghost_oracle_rejects_carry_free_addition() {
        let f = Fq::new(2, 1).unwrap();
        let x = wv(&f, &[1, 0]);
        let carry_free = |a: &WittVec<FqScalar>, b: &WittVec<FqScalar>| {
            let f = a.coords()[0].field.clone();
            WittVec::new(a.coords().iter().zip(b.coords()).map(|(s, t)| FqScalar::new(&f, f.add(s.value, t.value))).collect())
        };
        assert!(!oracle_witt_ghost_with(&x, &x, carry_free).unwrap().pass);
    }

    #[test]
    fn as_different_examples() {
        let f = Fq::new(2, 1).unwrap();
        let caps = Caps::default();
        for alpha in [rat(&f, &[1], &[0, 1]), rat(&f, &[1], &[0, 0, 1]), rat(&f, &[0, 0, 1], &[1])] {
            let v = oracle_as_different(&alpha, &caps).unwrap();
            assert!(v.pass, "{v:?}");
        }
    }

    #[test]
    fn unramified_oracle_and_negative_control() {
        let f = Fq::new(3, 1).unwrap();
        let caps = Caps::default();
        let x = &rat(&f, &[1], &[0, 1]) + &rat(&f, &[0, 1], &[1]);
        let k = AswExt::new(1, WittVec::new(vec![x]).unwrap(), None, &caps).unwrap();
        let desc = Descriptor::Asw(k.clone());
        let mut report = genus_asw(&k, &caps).unwrap().report;
        assert!(oracle_genus_unramified(&desc, &report, &caps).unwrap().pass);
        report.generators.push(GenusGenerator::Witt {
            label: "bad".into(),
            prime: Some(poly(&f, &[1, 1])),
            u: 1,
            rhs: WittVec::new(vec![rat(&f, &[1], &[1, 1])]).unwrap(),
        });
        assert!(!oracle_genus_unramified(&desc, &report, &caps).unwrap().pass);
    }

    #[test]
    fn conductor_minimality_examples() {
        let caps = Caps::default();
        let f = Fq::new(2, 1).unwrap();
        let k = AswExt::new(1, WittVec::new(vec![rat(&f, &[1, 1], &[1])]).unwrap(), None, &caps).unwrap();
        let d = Descriptor::Asw(k);
        let m = conductor_of_constants(&d, &caps).unwrap().m;
        assert_eq!(m, 2);
        assert!(oracle_conductor_minimality(&d, m, 4, &caps).unwrap().pass);
        assert!(!oracle_conductor_minimality(&d, 1, 4, &caps).unwrap().pass);
        let c = Descriptor::Constant(crate::extdesc::ConstantExt::new(&f, 3).unwrap());
        assert!(oracle_conductor_minimality(&c, 3, 6, &caps).unwrap().pass);
        let f3 = Fq::new(3, 1).unwrap();
        let kum = Descriptor::Kummer(kummer_normalize(2, &poly(&f3, &[0, 1, 1])).unwrap());
        assert!(oracle_conductor_minimality(&kum, 1, 2, &caps).unwrap().pass);
    }

    #[test]
    fn kummer_matches_character_path() {
        let caps = Caps::default();
        for (p, d) in [(3u64, vec![0u64, 1, 1]), (3, vec![0, 2, 0, 1]), (5, vec![0, 1, 1]), (5, vec![1, 0, 1])] {
            let f = Fq::new(p, 1).unwrap();
            let k = kummer_normalize(2, &poly(&f, &d)).unwrap();
            let v = oracle_kummer_vs_characters(&k, &caps).unwrap();
            assert!(v.pass, "{v:?}");
            let desc = Descriptor::Kummer(k);
            let report = genus(&desc, &caps).unwrap();
            assert!(oracle_genus_unramified(&desc, &report, &caps).unwrap().pass);
        }
    }
}
