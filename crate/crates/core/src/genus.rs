//! Genus fields and conductors of constants.
//!
//! The genus field `K_ge` of K is the maximal extension of K inside an
//! abelian extension of k that is unramified at every finite prime and in
//! which the infinite primes of K split completely.
//!
//! * Kummer extensions: `K_ge = L^D` with `L = k(xi_1, .., xi_r)` built from
//!   the primes of the radicand and `D` the decomposition group of infinity
//!   in `L/K`. The fixed field is again a radical extension of k and is
//!   reported through radical generators.
//! * Abelian p-extensions: one Witt equation per ramified prime from the
//!   decomposition of the defining vector, plus one for its polynomial part.
//! * Composites with tame cyclotomic parts: the p-part genus field times the
//!   subfields `F_j` of `k(Lambda_(P_j))` of degree `b_j`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_integer::Integer;

use crate::chars::{genus_char_bruteforce, DirichletChar, UnitGroup};
use crate::error::{Error, Result};
use crate::extdesc::{
    asw_decompose, subfield_basis, teichmuller_scale, AswExt, Caps, CompositeExt, ConstantExt,
    CyclotomicSubfield, Descriptor, KummerExt,
};
use crate::ffalg::{factor, Fq, FqElem, Poly};
use crate::ramify::{
    kummer_ramify, value_at_zero, witt_trace_int, AswGroup, KummerFrame, RadicalClass,
};
use crate::ratfrac::RatFn;
use crate::witt::WittVec;

/// One defining equation of a genus field.
#[derive(Clone, Debug, PartialEq)]
pub enum GenusGenerator {
    /// `y^(p^u) - y = rhs` in `W_v(k)`, attached to a finite prime or to the
    /// polynomial part when `prime` is `None`.
    Witt { label: String, prime: Option<Poly>, u: u32, rhs: WittVec<RatFn> },
    /// `root`-th root of `constant * prod P^n`.
    Radical { label: String, root: u64, constant: FqElem, factors: Vec<(Poly, u64)> },
    /// Subfield of degree `degree` of `k(Lambda_modulus)`.
    Cyclotomic { label: String, modulus: Poly, degree: u64 },
    /// Fixed field of the kernel of a Dirichlet character modulo `modulus`.
    Character { label: String, modulus: Poly, chi: DirichletChar },
    /// The constant field extension of degree `m`.
    Constant { label: String, m: u64 },
}

impl GenusGenerator {
    pub fn label(&self) -> &str {
        match self {
            GenusGenerator::Witt { label, .. }
            | GenusGenerator::Radical { label, .. }
            | GenusGenerator::Cyclotomic { label, .. }
            | GenusGenerator::Character { label, .. }
            | GenusGenerator::Constant { label, .. } => label,
        }
    }
}

/// Decomposition group of infinity in `L/K`, written inside
/// `Gal(L/k) = prod_i Z/(t/d_i)` where coordinate i records the action on
/// `xi_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionSubgroup {
    pub order: u64,
    pub ambient_orders: Vec<u64>,
    pub generators: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenusFieldReport {
    /// Generators of `K_ge` over k.
    pub generators: Vec<GenusGenerator>,
    /// Generators of the auxiliary field `L` when `K_ge` is a fixed field.
    pub l_generators: Vec<GenusGenerator>,
    /// Modulus of the cyclotomic field containing the tame part.
    pub ambient: Option<Poly>,
    pub decomposition: Option<DecompositionSubgroup>,
    /// `[K:k]`.
    pub base_degree: u64,
    /// `[K_ge:k]`.
    pub degree_over_k: u64,
    /// `[K_ge:K]`.
    pub degree_over_base: u64,
    /// `[L:K]` when `L` is reported.
    pub l_degree_over_base: Option<u64>,
    /// Degree over F_q of the field of constants of `K_ge`.
    pub constant_field_degree: u64,
}

impl GenusFieldReport {
    pub fn equals_base(&self) -> bool {
        self.degree_over_base == 1
    }
}

fn consistency<T: std::fmt::Display>(what: &str, a: T, b: T) -> Error {
    Error::Consistency(format!("{what}: {a} versus {b}"))
}

// ---------------------------------------------------------------- Kummer

/// Kummer data of `L/k` relative to the primes of the radicand.
#[derive(Clone, Debug)]
pub struct KummerGenusData {
    pub frame: KummerFrame,
    /// Radicand class of K.
    pub a: RadicalClass,
    /// `d_i = gcd(alpha_i, t)`.
    pub d: Vec<u64>,
    /// Classes `b_i = gamma_i^(d_i) P_i^(alpha_i)`, so that `xi_i` is a
    /// t-th root of `b_i`.
    pub b_gens: Vec<RadicalClass>,
    /// Every element of `B = <b_i>` with one coefficient vector over the `b_i`.
    pub b: BTreeMap<RadicalClass, Vec<u64>>,
    /// Radical group of `K_ge`.
    pub b_ge: Vec<RadicalClass>,
}

fn minus_one_pow(f: &Fq, k: u64) -> FqElem {
    if k.is_multiple_of(2) {
        f.one()
    } else {
        f.neg(f.one())
    }
}

/// Image of a radical class in the local group `k_inf^* / k_inf^(*t)`
/// spanned by a set of classes: `(e, f)` of the corresponding local
/// extension.
pub fn kummer_local_ef(frame: &KummerFrame, classes: &[RadicalClass]) -> (u64, u64) {
    let t = frame.t;
    let mut image: BTreeSet<(u64, u64)> = BTreeSet::from([(0, 0)]);
    for c in classes {
        let (lg, dg) = frame.local_at_infinity(c);
        let mut powers = vec![(0, 0)];
        let mut x = (lg, dg);
        while x != (0, 0) {
            powers.push(x);
            x = ((x.0 + lg) % t, (x.1 + dg) % t);
        }
        image = image
            .iter()
            .flat_map(|a| powers.iter().map(move |b| ((a.0 + b.0) % t, (a.1 + b.1) % t)))
            .collect();
    }
    let f = image.iter().filter(|x| x.1 == 0).count() as u64;
    (image.len() as u64 / f, f)
}

pub fn kummer_genus_data(k: &KummerExt, caps: &Caps) -> Result<KummerGenusData> {
    let frame = KummerFrame::of(k);
    let f = k.field().clone();
    let t = k.t;
    let a = frame.radicand_class(k);
    let r = k.factors.len();
    let mut d = Vec::with_capacity(r);
    let mut b_gens = Vec::with_capacity(r);
    for (i, (prime, alpha)) in k.factors.iter().enumerate() {
        let alpha = *alpha as u64;
        let di = alpha.gcd(&t);
        let gamma_i = minus_one_pow(&f, prime.deg().unwrap() as u64 * (alpha / di));
        let mut exps = vec![0u64; r];
        exps[i] = alpha;
        d.push(di);
        b_gens.push(frame.class(f.pow(gamma_i, di), &exps));
    }
    let orders: Vec<u64> = d.iter().map(|di| t / di).collect();
    let size = orders.iter().fold(1u128, |acc, &o| acc.saturating_mul(o as u128));
    if size > caps.enumeration {
        return Err(Error::CapExceeded { what: "Kummer radical group", needed: size, cap: caps.enumeration });
    }
    let mut b: BTreeMap<RadicalClass, Vec<u64>> = BTreeMap::new();
    let mut coeffs = vec![0u64; r];
    loop {
        let mut c = frame.one();
        for (i, &n) in coeffs.iter().enumerate() {
            for _ in 0..n {
                c = frame.mul(&c, &b_gens[i]);
            }
        }
        b.entry(c).or_insert_with(|| coeffs.clone());
        let mut i = 0;
        while i < r {
            coeffs[i] += 1;
            if coeffs[i] < orders[i] {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        if i == r {
            break;
        }
    }
    if !b.contains_key(&a) {
        return Err(Error::Internal("radicand class outside the group of L".into()));
    }
    let local_a: BTreeSet<(u64, u64)> =
        frame.span(std::slice::from_ref(&a)).iter().map(|c| frame.local_at_infinity(c)).collect();
    let b_ge = b.keys().filter(|c| local_a.contains(&frame.local_at_infinity(c))).cloned().collect();
    Ok(KummerGenusData { frame, a, d, b_gens, b, b_ge })
}

/// Greedy generating set: walk the elements in order and keep those not yet
/// in the span of the kept ones, starting from `seed`.
fn greedy_generators<T: Clone + Ord>(
    seed: Vec<T>,
    elems: impl IntoIterator<Item = T>,
    span: impl Fn(&[T]) -> BTreeSet<T>,
) -> Vec<T> {
    let mut gens = seed;
    let mut current = span(&gens);
    for e in elems {
        if !current.contains(&e) {
            gens.push(e);
            current = span(&gens);
        }
    }
    gens
}

fn radical_generator(frame: &KummerFrame, c: &RadicalClass, label: String) -> GenusGenerator {
    let t = frame.t;
    let root = frame.degree_of(c);
    let scale = t / root;
    let constant = frame.field.exp(c.0[0] / scale);
    let factors = frame
        .primes
        .iter()
        .zip(&c.0[1..])
        .filter(|(_, &n)| n != 0)
        .map(|(p, &n)| (p.clone(), n / scale))
        .collect();
    GenusGenerator::Radical { label, root, constant, factors }
}

pub fn genus_kummer(k: &KummerExt, caps: &Caps) -> Result<GenusFieldReport> {
    let data = kummer_genus_data(k, caps)?;
    let frame = &data.frame;
    let t = frame.t;
    let f = &frame.field;

    let l_generators = k
        .factors
        .iter()
        .zip(&data.d)
        .enumerate()
        .map(|(i, ((prime, alpha), &di))| {
            let alpha = *alpha as u64;
            let gamma_i = minus_one_pow(f, prime.deg().unwrap() as u64 * (alpha / di));
            GenusGenerator::Radical {
                label: format!("xi_{}", i + 1),
                root: t / di,
                constant: gamma_i,
                factors: vec![(prime.clone(), alpha / di)],
            }
        })
        .collect();

    let span_set = |g: &[RadicalClass]| -> BTreeSet<RadicalClass> { frame.span(g).into_iter().collect() };
    let gens = greedy_generators(vec![data.a.clone()], data.b_ge.iter().cloned(), span_set);
    let generators = gens
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let label = if i == 0 { "K".to_string() } else { format!("eta_{i}") };
            radical_generator(frame, c, label)
        })
        .collect();

    let decomposition = kummer_decomposition(&data)?;
    let base_degree = frame.span(std::slice::from_ref(&data.a)).len() as u64;
    let degree_over_k = data.b_ge.len() as u64;
    let l_degree = data.b.len() as u64;
    if decomposition.order * degree_over_k != l_degree {
        return Err(consistency("|D| [K_ge:k] against [L:k]", decomposition.order * degree_over_k, l_degree));
    }
    let constant_field_degree = data.b_ge.iter().filter(|c| c.0[1..].iter().all(|&n| n == 0)).count() as u64;
    let t_k = kummer_ramify(k)?.t;
    if constant_field_degree != t_k {
        return Err(consistency("constant field degree of K_ge against t", constant_field_degree, t_k));
    }
    Ok(GenusFieldReport {
        generators,
        l_generators,
        ambient: Some(k.d.clone()),
        decomposition: Some(decomposition),
        base_degree,
        degree_over_k,
        degree_over_base: degree_over_k / base_degree,
        l_degree_over_base: Some(l_degree / base_degree),
        constant_field_degree,
    })
}

/// Annihilator of the radical group of `K_ge` inside `Gal(L/k)`: an element
/// `n` acts on `xi_i` by `zeta_t^(d_i n_i)`.
fn kummer_decomposition(data: &KummerGenusData) -> Result<DecompositionSubgroup> {
    let t = data.frame.t;
    let orders: Vec<u64> = data.d.iter().map(|di| t / di).collect();
    let ge_coeffs: Vec<&Vec<u64>> = data.b_ge.iter().map(|c| &data.b[c]).collect();
    let r = orders.len();
    let mut members = Vec::new();
    let mut n = vec![0u64; r];
    loop {
        let fixes = ge_coeffs.iter().all(|kv| {
            kv.iter().zip(&data.d).zip(&n).map(|((k, d), ni)| k * d * ni).sum::<u64>() % t == 0
        });
        if fixes {
            members.push(n.clone());
        }
        let mut i = 0;
        while i < r {
            n[i] += 1;
            if n[i] < orders[i] {
                break;
            }
            n[i] = 0;
            i += 1;
        }
        if i == r {
            break;
        }
    }
    let span = |gens: &[Vec<u64>]| -> BTreeSet<Vec<u64>> { vector_span(gens, &orders) };
    let generators = greedy_generators(Vec::new(), members.iter().filter(|m| m.iter().any(|&x| x != 0)).cloned(), span);
    Ok(DecompositionSubgroup { order: members.len() as u64, ambient_orders: orders, generators })
}

/// Subgroup of `prod Z/o_i` generated by the given vectors.
fn vector_span(gens: &[Vec<u64>], orders: &[u64]) -> BTreeSet<Vec<u64>> {
    let zero = vec![0u64; orders.len()];
    let mut set = BTreeSet::from([zero.clone()]);
    for g in gens {
        let mut multiples = vec![zero.clone()];
        let mut x = g.clone();
        while x != zero {
            multiples.push(x.clone());
            x = x.iter().zip(g).zip(orders).map(|((a, b), o)| (a + b) % o).collect();
        }
        set = set
            .iter()
            .flat_map(|s| {
                multiples.iter().map(move |m| s.iter().zip(m).zip(orders).map(|((a, b), o)| (a + b) % o).collect())
            })
            .collect();
    }
    set
}

// ---------------------------------------------------------------- ASW

/// Genus field of an abelian p-extension together with the character
/// generators (for `z^p - z = x`) of `K_ge`.
#[derive(Clone, Debug)]
pub struct AswGenus {
    pub report: GenusFieldReport,
    pub chars: Vec<WittVec<RatFn>>,
}

fn teichmuller_multiples(f: &Fq, u: u32, x: &WittVec<RatFn>) -> Vec<WittVec<RatFn>> {
    subfield_basis(f, u).into_iter().map(|b| teichmuller_scale(b, x)).collect()
}

pub fn genus_asw(k: &AswExt, caps: &Caps) -> Result<AswGenus> {
    let f = k.field().clone();
    let v = k.v();
    // each generating equation with the character generators it contributes
    let sources: Vec<(u32, WittVec<RatFn>, String)> = match &k.factors {
        Some(fs) => fs.iter().enumerate().map(|(i, w)| (1, w.clone(), format!("_{}", i + 1))).collect(),
        None => vec![(k.u, k.xi.clone(), String::new())],
    };
    let mut generators = Vec::new();
    let mut chars = Vec::new();
    let mut z_chars = Vec::new();
    for (u, x, suffix) in &sources {
        let dec = asw_decompose(x)?;
        let mut j = 0;
        for (prime, delta) in &dec.deltas {
            let cs = teichmuller_multiples(&f, *u, delta);
            if AswGroup::new(&f, v, cs.clone(), caps)?.e_at(prime) == 1 {
                continue;
            }
            j += 1;
            let label = if k.factors.is_some() { format!("w{suffix}_{j}") } else { format!("y_{j}") };
            generators.push(GenusGenerator::Witt { label, prime: Some(prime.clone()), u: *u, rhs: delta.clone() });
            chars.extend(cs);
        }
        let cs = teichmuller_multiples(&f, *u, &dec.gamma);
        if AswGroup::new(&f, v, cs.clone(), caps)?.degree() > 1 {
            generators.push(GenusGenerator::Witt { label: format!("z{suffix}"), prime: None, u: *u, rhs: dec.gamma.clone() });
            z_chars.extend(cs.clone());
            chars.extend(cs);
        }
    }

    let k_group = AswGroup::new(&f, v, k.char_generators(), caps)?;
    let ge_group = AswGroup::new(&f, v, chars.clone(), caps)?;
    let base_degree = k_group.degree();
    let degree_over_k = ge_group.degree();

    // [K_ge:k] = prod e_P(K/k) * [k(z):k]
    let e_product: u64 = k_group.primes.iter().map(|p| k_group.e_at(p)).product();
    let z_degree = AswGroup::new(&f, v, z_chars, caps)?.degree();
    if e_product * z_degree != degree_over_k {
        return Err(consistency("[K_ge:k] against prod e_P [k(z):k]", e_product * z_degree, degree_over_k));
    }
    let mut both = chars.clone();
    both.extend(k.char_generators());
    let joint = AswGroup::new(&f, v, both, caps)?.degree();
    if joint != degree_over_k {
        return Err(consistency("[K K_ge:k] against [K_ge:k]", joint, degree_over_k));
    }
    if degree_over_k % base_degree != 0 {
        return Err(consistency("[K:k] dividing [K_ge:k]", base_degree, degree_over_k));
    }
    let constant_field_degree = ge_group.constant_field_degree();
    let t = k_group.f_inf();
    if constant_field_degree != t {
        return Err(consistency("constant field degree of K_ge against t", constant_field_degree, t));
    }
    let report = GenusFieldReport {
        generators,
        l_generators: Vec::new(),
        ambient: None,
        decomposition: None,
        base_degree,
        degree_over_k,
        degree_over_base: degree_over_k / base_degree,
        l_degree_over_base: None,
        constant_field_degree,
    };
    Ok(AswGenus { report, chars })
}

// ---------------------------------------------------------------- characters

fn char_span_fn(group: &UnitGroup) -> impl Fn(&[DirichletChar]) -> BTreeSet<DirichletChar> + '_ {
    move |g: &[DirichletChar]| group.span(g)
}

/// Genus field of a subfield of `k(Lambda_N)` by the character path.
pub fn genus_cyclotomic(k: &CyclotomicSubfield) -> Result<GenusFieldReport> {
    let g = &k.group;
    let cg = genus_char_bruteforce(g, &k.chars)?;
    if cg.genus_fixed != cg.genus_real {
        return Err(Error::Consistency("L^D differs from K L^+".into()));
    }
    let base: Vec<DirichletChar> = greedy_generators(Vec::new(), cg.x.iter().cloned(), char_span_fn(g));
    let gens = greedy_generators(base, cg.genus_fixed.iter().cloned(), char_span_fn(g));
    let generators = gens
        .into_iter()
        .enumerate()
        .map(|(i, chi)| GenusGenerator::Character {
            label: format!("chi_{}", i + 1),
            modulus: k.modulus().clone(),
            chi,
        })
        .collect();
    let l_gens = greedy_generators(Vec::new(), cg.y.iter().cloned(), char_span_fn(g));
    let l_generators = l_gens
        .into_iter()
        .enumerate()
        .map(|(i, chi)| GenusGenerator::Character {
            label: format!("psi_{}", i + 1),
            modulus: k.modulus().clone(),
            chi,
        })
        .collect();
    let base_degree = cg.x.len() as u64;
    let degree_over_k = cg.genus_fixed.len() as u64;
    Ok(GenusFieldReport {
        generators,
        l_generators,
        ambient: Some(k.modulus().clone()),
        decomposition: Some(DecompositionSubgroup {
            order: cg.decomposition_order,
            ambient_orders: g.orders().to_vec(),
            generators: Vec::new(),
        }),
        base_degree,
        degree_over_k,
        degree_over_base: degree_over_k / base_degree,
        l_degree_over_base: Some(cg.degree_l_over_k()),
        constant_field_degree: 1,
    })
}

// ---------------------------------------------------------------- composite

/// Tame data of a composite lifted to the common modulus `N`.
#[derive(Clone, Debug)]
pub struct TameGenus {
    pub group: Arc<UnitGroup>,
    /// Lifted characters of the tame parts.
    pub chars: Vec<DirichletChar>,
    /// For each prime `P_j` of N: `b_j` and the lifted generators of `F_j`.
    pub pieces: Vec<(Poly, u64, Vec<DirichletChar>)>,
}

impl TameGenus {
    pub fn genus_chars(&self) -> Vec<DirichletChar> {
        let mut out = self.chars.clone();
        for (_, _, cs) in &self.pieces {
            out.extend(cs.iter().cloned());
        }
        out
    }
}

pub fn tame_genus(tame: &[CyclotomicSubfield], caps: &Caps) -> Result<Option<TameGenus>> {
    let Some(first) = tame.first() else { return Ok(None) };
    let f = first.field().clone();
    let mut n = Poly::one(&f);
    for part in tame {
        let m = part.modulus();
        let g = n.gcd(m);
        n = &n * &m.div_rem(&g).0;
    }
    let group = Arc::new(UnitGroup::new(&n, caps.unit_group)?);
    let mut chars = Vec::new();
    for part in tame {
        for chi in &part.chars {
            chars.push(group.lift_from(&part.group, chi)?);
        }
    }
    let mut pieces = Vec::new();
    for prime in factor(&n)?.primes() {
        let b = chars.iter().fold(1u64, |acc, chi| acc.lcm(&group.char_order(&group.local_component(chi, prime))));
        if b == 1 {
            continue;
        }
        let local = UnitGroup::new(prime, caps.unit_group)?;
        let mut gens = Vec::new();
        for (i, &o) in local.orders().iter().enumerate() {
            let mut exps = vec![0u64; local.orders().len()];
            exps[i] = o / o.gcd(&b);
            let chi = local.character(exps)?;
            if local.char_order(&chi) > 1 {
                gens.push(group.lift_from(&local, &chi)?);
            }
        }
        let degree = group.span(&gens).len() as u64;
        if degree != b {
            return Err(consistency("degree of F_j against b_j", degree, b));
        }
        pieces.push((prime.clone(), b, gens));
    }
    Ok(Some(TameGenus { group, chars, pieces }))
}

pub fn genus_composite(k: &CompositeExt, caps: &Caps) -> Result<GenusFieldReport> {
    let asw = match &k.p_part {
        Some(a) => Some(genus_asw(a, caps)?.report),
        None => None,
    };
    let tame = tame_genus(&k.tame, caps)?;
    let mut generators = Vec::new();
    let (mut base_degree, mut degree_over_k, mut constant_field_degree) = (1, 1, 1);
    if let Some(r) = &asw {
        generators.extend(r.generators.iter().cloned());
        base_degree *= r.base_degree;
        degree_over_k *= r.degree_over_k;
        constant_field_degree = r.constant_field_degree;
    }
    let mut ambient = None;
    if let Some(tg) = &tame {
        for (j, (prime, b, _)) in tg.pieces.iter().enumerate() {
            generators.push(GenusGenerator::Cyclotomic { label: format!("F_{}", j + 1), modulus: prime.clone(), degree: *b });
        }
        base_degree *= tg.group.span(&tg.chars).len() as u64;
        degree_over_k *= tg.group.span(&tg.genus_chars()).len() as u64;
        ambient = Some(tg.group.modulus().clone());
    }
    Ok(GenusFieldReport {
        generators,
        l_generators: Vec::new(),
        ambient,
        decomposition: None,
        base_degree,
        degree_over_k,
        degree_over_base: degree_over_k / base_degree,
        l_degree_over_base: None,
        constant_field_degree,
    })
}

pub fn genus_constant(k: &ConstantExt) -> GenusFieldReport {
    GenusFieldReport {
        generators: vec![GenusGenerator::Constant { label: "K".into(), m: k.m }],
        l_generators: Vec::new(),
        ambient: None,
        decomposition: None,
        base_degree: k.m,
        degree_over_k: k.m,
        degree_over_base: 1,
        l_degree_over_base: None,
        constant_field_degree: k.m,
    }
}

pub fn genus(d: &Descriptor, caps: &Caps) -> Result<GenusFieldReport> {
    match d {
        Descriptor::Kummer(k) => genus_kummer(k, caps),
        Descriptor::Asw(k) => Ok(genus_asw(k, caps)?.report),
        Descriptor::Cyclotomic(k) => genus_cyclotomic(k),
        Descriptor::Composite(k) => genus_composite(k, caps),
        Descriptor::Constant(k) => Ok(genus_constant(k)),
    }
}

// ---------------------------------------------------------------- conductor

/// Conductor of constants `m`, the least m with K inside `k(Lambda_N) F_(q^m)`
/// for suitable N and level at infinity, with both factorizations
/// `m = t d p^s = t d*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConductorReport {
    pub m: u64,
    pub t: u64,
    pub d: u64,
    pub d_star: u64,
    pub s: u32,
}

impl ConductorReport {
    fn trivial() -> ConductorReport {
        ConductorReport { m: 1, t: 1, d: 1, d_star: 1, s: 0 }
    }
}

fn finish_conductor(t: u64, d: u64, d_star: u64, p: u64, p_s: u64, qm1: u64) -> Result<ConductorReport> {
    let mut s = 0u32;
    while p.pow(s) < p_s {
        s += 1;
    }
    if p.pow(s) != p_s {
        return Err(Error::Internal(format!("{p_s} is not a power of {p}")));
    }
    if !qm1.is_multiple_of(d) {
        return Err(Error::Consistency(format!("d = {d} does not divide q - 1 = {qm1}")));
    }
    let m_a = t * d * p_s;
    let m_b = t * d_star;
    if m_a != m_b {
        return Err(Error::Consistency(format!(
            "conductor routes disagree: t d p^s = {t} * {d} * {p_s} = {m_a}, t d* = {t} * {d_star} = {m_b}"
        )));
    }
    Ok(ConductorReport { m: m_a, t, d, d_star, s })
}

/// Constant component of each character generator: the Witt trace of the
/// value at T = 0 of the polynomial part of its decomposition, in Z/p^v.
pub fn asw_constant_components(gens: &[WittVec<RatFn>]) -> Result<Vec<u64>> {
    gens.iter().map(|g| witt_trace_int(&value_at_zero(&asw_decompose(g)?.gamma))).collect()
}

fn phi_of(coeffs: &[u64], phis: &[u64], pv: u64) -> u64 {
    coeffs.iter().zip(phis).map(|(c, f)| c * f % pv).sum::<u64>() % pv
}

pub fn conductor_asw(k: &AswExt, caps: &Caps) -> Result<ConductorReport> {
    let f = k.field();
    let v = k.v();
    let p = f.p();
    let pv = p.pow(v as u32);
    let gens = k.char_generators();
    let group = AswGroup::new(f, v, gens.clone(), caps)?;
    let phis = asw_constant_components(&gens)?;
    let image_size = |cs: &[Vec<u64>]| cs.iter().map(|c| phi_of(c, &phis, pv)).collect::<BTreeSet<_>>().len() as u64;

    let t = group.f_inf();
    // route through E = finite parts of the decompositions
    let mut ek_gens = gens.clone();
    for g in &gens {
        ek_gens.push(asw_decompose(g)?.finite_part()?);
    }
    let ek = AswGroup::new(f, v, ek_gens, caps)?;
    let f_ek = ek.f_inf();
    if f_ek % t != 0 {
        return Err(consistency("f_inf(K) dividing f_inf(EK)", t, f_ek));
    }
    let d = f_ek / t;
    let all: Vec<Vec<u64>> = lattice(gens.len(), pv);
    let p_s = image_size(&all) / image_size(&group.unramified_at_infinity());
    // route through F = characters with trivial constant component
    let e_k = group.e_inf();
    let e_f = group.e_inf_of_subgroup(|c| phi_of(c, &phis, pv) == 0);
    if e_k % e_f != 0 {
        return Err(consistency("e_inf(F) dividing e_inf(K)", e_f, e_k));
    }
    finish_conductor(t, d, e_k / e_f, p, p_s, f.q() - 1)
}

fn lattice(s: usize, n: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..s {
        out = out.into_iter().flat_map(|c| (0..n).map(move |x| [c.clone(), vec![x]].concat())).collect();
    }
    out
}

pub fn conductor_kummer(k: &KummerExt) -> Result<ConductorReport> {
    let frame = KummerFrame::of(k);
    let f = &frame.field;
    let t_deg = frame.t;
    let a = frame.radicand_class(k);
    let minus_one = f.log(f.neg(f.one())).unwrap() % t_deg;
    // constant component: leading class after removing the sign (-1)^deg
    let phi = |c: &RadicalClass| (c.0[0] + t_deg * t_deg - frame.poly_degree(c) * minus_one % t_deg) % t_deg;
    let proj = |c: &RadicalClass| {
        let mut out = c.clone();
        out.0[0] = frame.poly_degree(c) * minus_one % t_deg;
        out
    };
    let x = frame.span(std::slice::from_ref(&a));
    let (e_k, t) = kummer_local_ef(&frame, std::slice::from_ref(&a));
    let (_, f_ek) = kummer_local_ef(&frame, &[a.clone(), proj(&a)]);
    let d = f_ek / t;
    let fsub: Vec<RadicalClass> = x.iter().filter(|c| phi(c) == 0).cloned().collect();
    let (e_f, _) = kummer_local_ef(&frame, &fsub);
    finish_conductor(t, d, e_k / e_f, f.p(), 1, f.q() - 1)
}

pub fn conductor_of_constants(desc: &Descriptor, caps: &Caps) -> Result<ConductorReport> {
    match desc {
        Descriptor::Asw(k) => conductor_asw(k, caps),
        Descriptor::Kummer(k) => conductor_kummer(k),
        Descriptor::Cyclotomic(_) => Ok(ConductorReport::trivial()),
        Descriptor::Composite(k) => match &k.p_part {
            Some(a) => conductor_asw(a, caps),
            None => Ok(ConductorReport::trivial()),
        },
        Descriptor::Constant(k) => {
            Ok(ConductorReport { m: k.m, t: k.m, d: 1, d_star: 1, s: 0 })
        }
    }
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

    fn asw1(x: RatFn) -> AswExt {
        AswExt::new(1, WittVec::new(vec![x]).unwrap(), None, &Caps::default()).unwrap()
    }

    #[test]
    fn one_minus_t_has_conductor_p_and_trivial_genus() {
        for p in [2u64, 3, 5] {
            let f = Fq::new(p, 1).unwrap();
            let k = asw1(rat(&f, &[1, p - 1], &[1]));
            let caps = Caps::default();
            let g = genus_asw(&k, &caps).unwrap().report;
            assert!(g.equals_base());
            let c = conductor_asw(&k, &caps).unwrap();
            assert_eq!(c, ConductorReport { m: p, t: 1, d: 1, d_star: p, s: 1 });
        }
    }

    #[test]
    fn generators_one_per_prime_plus_polynomial_part() {
        let f = Fq::new(3, 1).unwrap();
        // 1/T + 1/(T+1) + T
        let x = &(&rat(&f, &[1], &[0, 1]) + &rat(&f, &[1], &[1, 1])) + &rat(&f, &[0, 1], &[1]);
        let g = genus_asw(&asw1(x), &Caps::default()).unwrap().report;
        let rhs: Vec<RatFn> = g
            .generators
            .iter()
            .map(|gen| match gen {
                GenusGenerator::Witt { rhs, .. } => rhs.coords()[0].clone(),
                _ => panic!("expected Witt generators"),
            })
            .collect();
        assert_eq!(rhs, vec![rat(&f, &[1], &[0, 1]), rat(&f, &[1], &[1, 1]), rat(&f, &[0, 1], &[1])]);
        assert_eq!(g.degree_over_k, 27);
        assert_eq!(g.degree_over_base, 9);
    }

    #[test]
    fn polynomial_only_asw_is_its_own_genus_field() {
        let f = Fq::new(2, 1).unwrap();
        let g = genus_asw(&asw1(rat(&f, &[0, 1], &[1])), &Caps::default()).unwrap().report;
        assert_eq!(g.generators.len(), 1);
        assert!(g.equals_base());
    }

    #[test]
    fn kummer_two_primes_over_f3() {
        let f = Fq::new(3, 1).unwrap();
        let k = kummer_normalize(2, &poly(&f, &[0, 1, 1])).unwrap();
        let g = genus_kummer(&k, &Caps::default()).unwrap();
        let minus_one = f.neg(f.one());
        assert_eq!(
            g.l_generators,
            vec![
                GenusGenerator::Radical { label: "xi_1".into(), root: 2, constant: minus_one, factors: vec![(poly(&f, &[0, 1]), 1)] },
                GenusGenerator::Radical { label: "xi_2".into(), root: 2, constant: minus_one, factors: vec![(poly(&f, &[1, 1]), 1)] },
            ]
        );
        let dsub = g.decomposition.as_ref().unwrap();
        assert_eq!(g.degree_over_base * dsub.order, g.l_degree_over_base.unwrap());
    }

    #[test]
    fn kummer_single_prime_is_its_own_genus_field() {
        let f = Fq::new(5, 1).unwrap();
        let k = kummer_normalize(4, &poly(&f, &[0, 1])).unwrap();
        let g = genus_kummer(&k, &Caps::default()).unwrap();
        assert_eq!(g.l_degree_over_base, Some(1));
        assert!(g.equals_base());
        assert_eq!(conductor_kummer(&k).unwrap().m, 1);
    }

    #[test]
    fn constant_extension_conductor() {
        let f = Fq::new(2, 1).unwrap();
        let d = Descriptor::Constant(ConstantExt::new(&f, 3).unwrap());
        let c = conductor_of_constants(&d, &Caps::default()).unwrap();
        assert_eq!(c, ConductorReport { m: 3, t: 3, d: 1, d_star: 1, s: 0 });
    }
}
