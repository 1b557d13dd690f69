//! Command-line front end: a JSON job in, a JSON or text report out.
//!
//! Input schema:
//!
//! ```json
//! {
//!   "field": {"p": 3, "l": 1},
//!   "command": "genus",
//!   "descriptor": {"kind": "asw", "u": 1,
//!                  "xi": {"p": 3, "v": 1, "domain": "ratfn",
//!                         "coords": [{"num": [1, 2], "den": [1]}]}}
//! }
//! ```
//!
//! Polynomials are ascending lists of integer codes in `[0, q)`, rational
//! functions are `{num, den}`, F_q scalars are base-p digit lists. The
//! `unitgroup` command takes a `modulus` polynomial instead of a descriptor.
//!
//! Exit codes: 0 success, 1 schema or validation error, 2 cap exceeded,
//! 3 oracle failure under `--verify` (or the `verify` command), 4 internal
//! consistency failure.

use std::sync::Arc;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chars::{DirichletChar, UnitGroup};
use crate::error::{Error, Result};
use crate::extdesc::{
    kummer_normalize, AswExt, Caps, CompositeExt, ConstantExt, CyclotomicSubfield, Descriptor,
};
use crate::ffalg::{factor, factor_with_seed, Fq, FqElem, Poly};
use crate::genus::{conductor_of_constants, genus, ConductorReport, GenusFieldReport, GenusGenerator};
use crate::oracle::{verify_all, OracleVerdict};
use crate::ramify::{ramify, RamificationReport};
use crate::ratfrac::RatFn;
use crate::witt::WittVec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug, Clone)]
#[command(name = "ffgenus", about = "Genus fields, ramification and conductors of constants over F_q(T)")]
pub struct Args {
    /// Path to a JSON job file, or `-` for standard input.
    pub input: String,
    /// Run the brute-force oracles on the result.
    #[arg(long)]
    pub verify: bool,
    /// Largest unit group `(F_q[T]/N)^*` that may be enumerated.
    #[arg(long)]
    pub cap_unitgroup: Option<u128>,
    /// Largest Witt vector length.
    #[arg(long)]
    pub cap_wittlen: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Refactor every input polynomial with this seed and check the result
    /// against the default factorization.
    #[arg(long)]
    pub seed: Option<u64>,
}

// ---------------------------------------------------------------- schema

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u64,
    pub l: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Genus,
    Ramify,
    Conductor,
    Unitgroup,
    Verify,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap_unitgroup: Option<u128>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap_wittlen: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub field: FieldSpec,
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<DescriptorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flags: Option<FlagSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatFnSpec {
    pub num: Vec<u64>,
    #[serde(default = "one_poly")]
    pub den: Vec<u64>,
}

fn one_poly() -> Vec<u64> {
    vec![1]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WittSpec {
    pub p: u64,
    pub v: usize,
    pub domain: String,
    pub coords: Vec<RatFnSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AswSpec {
    pub u: u32,
    pub xi: WittSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<WittSpec>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharSpec {
    #[serde(rename = "N")]
    pub n: Vec<u64>,
    /// Values on the generators of the unit group, as fractions `"a/b"`.
    pub exponents: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CyclotomicSpec {
    #[serde(rename = "N")]
    pub n: Vec<u64>,
    pub chars: Vec<CharSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DescriptorSpec {
    Kummer { t: u64, d: Vec<u64> },
    Asw(AswSpec),
    Cyclotomic(CyclotomicSpec),
    Composite {
        #[serde(default)]
        p_part: Option<AswSpec>,
        #[serde(default)]
        tame: Vec<CyclotomicSpec>,
    },
    Constant { m: u64 },
}

// ---------------------------------------------------------------- parsing

pub fn parse_poly(f: &Fq, codes: &[u64]) -> Result<Poly> {
    if let Some(c) = codes.iter().find(|&&c| c >= f.q()) {
        return Err(Error::Schema(format!("polynomial coefficient {c} outside [0, {})", f.q())));
    }
    Ok(Poly::from_ints(f, codes))
}

fn parse_ratfn(f: &Fq, r: &RatFnSpec) -> Result<RatFn> {
    let den = parse_poly(f, &r.den)?;
    if den.is_zero() {
        return Err(Error::Schema("zero denominator".into()));
    }
    RatFn::new(parse_poly(f, &r.num)?, den)
}

fn parse_witt(f: &Fq, w: &WittSpec) -> Result<WittVec<RatFn>> {
    if w.p != f.p() {
        return Err(Error::Schema(format!("Witt vector over p = {} inside a field of characteristic {}", w.p, f.p())));
    }
    if w.domain != "ratfn" && w.domain != "poly" {
        return Err(Error::Schema(format!("unknown Witt coefficient domain {:?}", w.domain)));
    }
    if w.coords.len() != w.v {
        return Err(Error::Schema(format!("Witt length {} with {} coordinates", w.v, w.coords.len())));
    }
    let coords = w.coords.iter().map(|c| parse_ratfn(f, c)).collect::<Result<Vec<_>>>()?;
    if w.domain == "poly" && coords.iter().any(|c| !c.is_poly()) {
        return Err(Error::Schema("non-polynomial coordinate in a poly-domain Witt vector".into()));
    }
    WittVec::new(coords)
}

fn parse_asw(f: &Fq, a: &AswSpec, caps: &Caps) -> Result<AswExt> {
    let xi = parse_witt(f, &a.xi)?;
    let factors = match &a.factors {
        Some(fs) => Some(fs.iter().map(|w| parse_witt(f, w)).collect::<Result<Vec<_>>>()?),
        None => None,
    };
    AswExt::new(a.u, xi, factors, caps)
}

fn parse_fraction(s: &str) -> Result<(i64, u64)> {
    let bad = || Error::Schema(format!("bad fraction {s:?}"));
    let (a, b) = s.split_once('/').unwrap_or((s, "1"));
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if b == 0 {
        return Err(bad());
    }
    Ok((a, b))
}

fn parse_cyclotomic(f: &Fq, c: &CyclotomicSpec, caps: &Caps) -> Result<CyclotomicSubfield> {
    let n = parse_poly(f, &c.n)?;
    if !n.is_monic() || n.is_constant() {
        return Err(Error::Schema("cyclotomic modulus must be monic and nonconstant".into()));
    }
    let group = Arc::new(UnitGroup::new(&n, caps.unit_group)?);
    let mut chars = Vec::new();
    for ch in &c.chars {
        let m = parse_poly(f, &ch.n)?;
        let fracs = ch.exponents.iter().map(|s| parse_fraction(s)).collect::<Result<Vec<_>>>()?;
        if m == n {
            chars.push(group.character_from_fractions(&fracs)?);
        } else {
            let small = UnitGroup::new(&m, caps.unit_group)?;
            chars.push(group.lift_from(&small, &small.character_from_fractions(&fracs)?)?);
        }
    }
    CyclotomicSubfield::new(group, chars)
}

pub fn parse_field(spec: &FieldSpec) -> Result<Fq> {
    Fq::new(spec.p, spec.l)
}

pub fn parse_descriptor(f: &Fq, d: &DescriptorSpec, caps: &Caps) -> Result<Descriptor> {
    Ok(match d {
        DescriptorSpec::Kummer { t, d } => Descriptor::Kummer(kummer_normalize(*t, &parse_poly(f, d)?)?),
        DescriptorSpec::Asw(a) => Descriptor::Asw(parse_asw(f, a, caps)?),
        DescriptorSpec::Cyclotomic(c) => Descriptor::Cyclotomic(parse_cyclotomic(f, c, caps)?),
        DescriptorSpec::Composite { p_part, tame } => {
            if p_part.is_none() && tame.is_empty() {
                return Err(Error::Schema("composite descriptor without parts".into()));
            }
            let p = match p_part {
                Some(a) => Some(parse_asw(f, a, caps)?),
                None => None,
            };
            let tame = tame.iter().map(|c| parse_cyclotomic(f, c, caps)).collect::<Result<Vec<_>>>()?;
            Descriptor::Composite(CompositeExt::new(f, p, tame)?)
        }
        DescriptorSpec::Constant { m } => Descriptor::Constant(ConstantExt::new(f, *m)?),
    })
}

// ---------------------------------------------------------------- rendering

fn poly_codes(p: &Poly) -> Vec<u64> {
    p.codes()
}

fn ratfn_spec(r: &RatFn) -> RatFnSpec {
    RatFnSpec { num: poly_codes(r.num()), den: poly_codes(r.den()) }
}

pub fn witt_spec(w: &WittVec<RatFn>) -> WittSpec {
    WittSpec { p: w.p(), v: w.len(), domain: "ratfn".into(), coords: w.coords().iter().map(ratfn_spec).collect() }
}

fn asw_spec(a: &AswExt) -> AswSpec {
    AswSpec { u: a.u, xi: witt_spec(&a.xi), factors: a.factors.as_ref().map(|fs| fs.iter().map(witt_spec).collect()) }
}

fn fraction_strings(group: &UnitGroup, chi: &DirichletChar) -> Vec<String> {
    group.fractions(chi).into_iter().map(|(a, b)| format!("{a}/{b}")).collect()
}

fn cyclotomic_spec(c: &CyclotomicSubfield) -> CyclotomicSpec {
    let n = poly_codes(c.modulus());
    CyclotomicSpec {
        n: n.clone(),
        chars: c.chars.iter().map(|chi| CharSpec { n: n.clone(), exponents: fraction_strings(&c.group, chi) }).collect(),
    }
}

/// Canonical schema form of a parsed descriptor.
pub fn descriptor_spec(d: &Descriptor) -> DescriptorSpec {
    match d {
        Descriptor::Kummer(k) => DescriptorSpec::Kummer { t: k.t, d: poly_codes(&k.d) },
        Descriptor::Asw(a) => DescriptorSpec::Asw(asw_spec(a)),
        Descriptor::Cyclotomic(c) => DescriptorSpec::Cyclotomic(cyclotomic_spec(c)),
        Descriptor::Composite(c) => DescriptorSpec::Composite {
            p_part: c.p_part.as_ref().map(asw_spec),
            tame: c.tame.iter().map(cyclotomic_spec).collect(),
        },
        Descriptor::Constant(c) => DescriptorSpec::Constant { m: c.m },
    }
}

fn digits(f: &Fq, c: FqElem) -> Vec<u64> {
    f.digits(c)
}

fn generator_json(f: &Fq, g: &GenusGenerator, groups: &dyn Fn(&Poly) -> Option<Arc<UnitGroup>>) -> Value {
    match g {
        GenusGenerator::Witt { label, prime, u, rhs } => json!({
            "type": "witt", "label": label, "prime": prime.as_ref().map(poly_codes), "u": u, "rhs": witt_spec(rhs),
        }),
        GenusGenerator::Radical { label, root, constant, factors } => json!({
            "type": "radical", "label": label, "root": root, "constant": digits(f, *constant),
            "factors": factors.iter().map(|(p, n)| json!([poly_codes(p), n])).collect::<Vec<_>>(),
        }),
        GenusGenerator::Cyclotomic { label, modulus, degree } => json!({
            "type": "cyclotomic", "label": label, "modulus": poly_codes(modulus), "degree": degree,
        }),
        GenusGenerator::Character { label, modulus, chi } => {
            let exps = groups(modulus).map(|g| fraction_strings(&g, chi));
            json!({"type": "character", "label": label, "modulus": poly_codes(modulus), "exponents": exps})
        }
        GenusGenerator::Constant { label, m } => json!({"type": "constant", "label": label, "m": m}),
    }
}

pub fn genus_json(f: &Fq, r: &GenusFieldReport, groups: &dyn Fn(&Poly) -> Option<Arc<UnitGroup>>) -> Value {
    json!({
        "generators": r.generators.iter().map(|g| generator_json(f, g, groups)).collect::<Vec<_>>(),
        "l_generators": r.l_generators.iter().map(|g| generator_json(f, g, groups)).collect::<Vec<_>>(),
        "ambient": r.ambient.as_ref().map(poly_codes),
        "decomposition": r.decomposition.as_ref().map(|d| json!({
            "order": d.order, "ambient_orders": d.ambient_orders, "generators": d.generators,
        })),
        "degrees": {
            "K_over_k": r.base_degree,
            "K_ge_over_k": r.degree_over_k,
            "K_ge_over_K": r.degree_over_base,
            "L_over_K": r.l_degree_over_base,
        },
        "constant_field_degree": r.constant_field_degree,
        "K_ge_equals_K": r.equals_base(),
    })
}

pub fn ramification_json(r: &RamificationReport) -> Value {
    json!({
        "degree": r.degree,
        "finite": r.finite.iter().map(|(p, e)| json!({"prime": poly_codes(p), "e": e})).collect::<Vec<_>>(),
        "infinity": {"e": r.e_inf, "f": r.f_inf, "h": r.h_inf},
        "t": r.t,
        "constant_field_degree": r.constant_field_degree,
    })
}

pub fn conductor_json(c: &ConductorReport) -> Value {
    json!({"m": c.m, "t": c.t, "d": c.d, "d_star": c.d_star, "s": c.s})
}

pub fn verdict_json(v: &OracleVerdict) -> Value {
    json!({"claim": v.claim, "expected": v.expected, "observed": v.observed, "pass": v.pass, "instance": v.instance})
}

fn witt_text(w: &WittVec<RatFn>) -> String {
    if w.len() == 1 {
        return w.coords()[0].to_string();
    }
    let parts: Vec<String> = w.coords().iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn generator_text(f: &Fq, g: &GenusGenerator) -> String {
    match g {
        GenusGenerator::Witt { label, prime, u, rhs } => {
            let pow = if *u == 1 { "p".to_string() } else { format!("p^{u}") };
            let at = prime.as_ref().map_or(String::new(), |p| format!("  [prime {p}]"));
            format!("{label}^{pow} - {label} = {}{at}", witt_text(rhs))
        }
        GenusGenerator::Radical { label, root, constant, factors } => {
            let mut parts = Vec::new();
            if *constant != f.one() {
                parts.push(format!("{:?}", digits(f, *constant)));
            }
            for (p, n) in factors {
                parts.push(if *n == 1 { format!("({p})") } else { format!("({p})^{n}") });
            }
            let body = if parts.is_empty() { "1".to_string() } else { parts.join(" * ") };
            format!("{label} = ({body})^(1/{root})")
        }
        GenusGenerator::Cyclotomic { label, modulus, degree } => {
            format!("{label} = subfield of degree {degree} of k(Lambda_({modulus}))")
        }
        GenusGenerator::Character { label, modulus, chi } => format!("{label} = character {:?} mod {modulus}", chi.exps),
        GenusGenerator::Constant { label, m } => format!("{label} = F_(q^{m})(T)"),
    }
}

fn genus_text(f: &Fq, r: &GenusFieldReport) -> String {
    let mut out = String::from("genus field K_ge generated over k by:\n");
    for g in &r.generators {
        out.push_str(&format!("  {}\n", generator_text(f, g)));
    }
    if !r.l_generators.is_empty() {
        out.push_str("L generated over k by:\n");
        for g in &r.l_generators {
            out.push_str(&format!("  {}\n", generator_text(f, g)));
        }
    }
    if let Some(d) = &r.decomposition {
        out.push_str(&format!("decomposition group D of infinity in L/K: order {}\n", d.order));
    }
    out.push_str(&format!(
        "[K:k] = {}, [K_ge:k] = {}, [K_ge:K] = {}{}\nconstant field of K_ge: F_(q^{})\n",
        r.base_degree,
        r.degree_over_k,
        r.degree_over_base,
        r.l_degree_over_base.map_or(String::new(), |l| format!(", [L:K] = {l}")),
        r.constant_field_degree
    ));
    if r.equals_base() {
        out.push_str("K_ge = K\n");
    }
    out
}

fn ramification_text(r: &RamificationReport) -> String {
    let mut out = format!("[K:k] = {}\n", r.degree);
    for (p, e) in &r.finite {
        out.push_str(&format!("  e_P = {e} at P = {p}\n"));
    }
    out.push_str(&format!(
        "infinity: e = {}, f = {}, h = {}\nt = {}, constant field degree {}\n",
        r.e_inf, r.f_inf, r.h_inf, r.t, r.constant_field_degree
    ));
    out
}

fn conductor_text(c: &ConductorReport) -> String {
    format!("conductor of constants m = {} (t = {}, d = {}, d* = {}, s = {})\n", c.m, c.t, c.d, c.d_star, c.s)
}

// ---------------------------------------------------------------- running

/// Result of one job: exit status and the text for stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => 2,
        Error::Consistency(_) | Error::Internal(_) => 4,
        _ => 1,
    }
}

fn failure(e: &Error) -> Outcome {
    Outcome { code: exit_code(e), stdout: String::new(), stderr: format!("error: {e}\n") }
}

/// Settings resolved from the command line and the job's own flags.
#[derive(Clone, Debug)]
struct Settings {
    verify: bool,
    format: Format,
    caps: Caps,
    seed: Option<u64>,
}

fn settings(args: &Args, job: &JobSpec) -> Result<Settings> {
    let flags = job.flags.clone().unwrap_or_default();
    let mut caps = Caps::default();
    if let Some(c) = args.cap_unitgroup.or(flags.cap_unitgroup) {
        if c == 0 {
            return Err(Error::Schema("caps must be positive".into()));
        }
        caps.unit_group = c;
    }
    if let Some(v) = args.cap_wittlen.or(flags.cap_wittlen) {
        if v == 0 {
            return Err(Error::Schema("caps must be positive".into()));
        }
        caps.witt.max_len = v;
    }
    Ok(Settings {
        verify: args.verify || flags.verify.unwrap_or(false),
        format: args.format.or(flags.format).unwrap_or(Format::Json),
        caps,
        seed: args.seed,
    })
}

fn input_polys(f: &Fq, d: &Descriptor) -> Vec<Poly> {
    let witt = |w: &WittVec<RatFn>| w.coords().iter().map(|c| c.den().clone()).collect::<Vec<_>>();
    let asw = |a: &AswExt| {
        let mut out = witt(&a.xi);
        for w in a.factors.iter().flatten() {
            out.extend(witt(w));
        }
        out
    };
    let mut out = match d {
        Descriptor::Kummer(k) => vec![k.d.clone()],
        Descriptor::Asw(a) => asw(a),
        Descriptor::Cyclotomic(c) => vec![c.modulus().clone()],
        Descriptor::Composite(c) => {
            let mut out: Vec<Poly> = c.tame.iter().map(|t| t.modulus().clone()).collect();
            if let Some(a) = &c.p_part {
                out.extend(asw(a));
            }
            out
        }
        Descriptor::Constant(_) => Vec::new(),
    };
    out.retain(|p| p.field() == f && !p.is_constant());
    out
}

fn check_seed(f: &Fq, d: &Descriptor, seed: u64) -> Result<()> {
    for p in input_polys(f, d) {
        if factor(&p)?.factors != factor_with_seed(&p, seed)?.factors {
            return Err(Error::Consistency(format!("factorization of {p} depends on the seed")));
        }
    }
    Ok(())
}

fn render(format: Format, value: &Value, text: String) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(value).expect("serializable")),
        Format::Text => text,
    }
}

/// Runs a parsed job.
pub fn run_job(args: &Args, job: &JobSpec) -> Outcome {
    match run_job_inner(args, job) {
        Ok(o) => o,
        Err(e) => failure(&e),
    }
}

fn run_job_inner(args: &Args, job: &JobSpec) -> Result<Outcome> {
    let s = settings(args, job)?;
    let f = parse_field(&job.field)?;
    if job.command == Command::Unitgroup {
        let codes = job.modulus.as_ref().ok_or_else(|| Error::Schema("unitgroup needs a modulus".into()))?;
        let n = parse_poly(&f, codes)?;
        if !n.is_monic() || n.is_constant() {
            return Err(Error::Schema("modulus must be monic and nonconstant".into()));
        }
        let g = UnitGroup::new(&n, s.caps.unit_group)?;
        let value = json!({
            "command": "unitgroup",
            "modulus": poly_codes(&n),
            "order": g.order(),
            "generators": g.generators().iter().map(poly_codes).collect::<Vec<_>>(),
            "orders": g.orders(),
            "elementary_divisors": g.elementary_divisors(),
        });
        let text = format!(
            "(F_q[T]/({n}))^* has order {} with generators of orders {:?}\n",
            g.order(),
            g.orders()
        );
        return Ok(Outcome { code: 0, stdout: render(s.format, &value, text), stderr: String::new() });
    }
    let spec = job.descriptor.as_ref().ok_or_else(|| Error::Schema(format!("{:?} needs a descriptor", job.command)))?;
    let desc = parse_descriptor(&f, spec, &s.caps)?;
    if let Some(seed) = s.seed {
        check_seed(&f, &desc, seed)?;
    }
    let canonical = serde_json::to_value(descriptor_spec(&desc)).expect("serializable");
    let groups = |m: &Poly| -> Option<Arc<UnitGroup>> {
        match &desc {
            Descriptor::Cyclotomic(c) if c.modulus() == m => Some(c.group.clone()),
            _ => None,
        }
    };
    let (mut value, mut text) = match job.command {
        Command::Genus => {
            let g = genus(&desc, &s.caps)?;
            let c = conductor_of_constants(&desc, &s.caps)?;
            (
                json!({"command": "genus", "descriptor": canonical, "genus": genus_json(&f, &g, &groups), "conductor": conductor_json(&c)}),
                format!("{}{}", genus_text(&f, &g), conductor_text(&c)),
            )
        }
        Command::Ramify => {
            let r = ramify(&desc, &s.caps)?;
            (json!({"command": "ramify", "descriptor": canonical, "ramification": ramification_json(&r)}), ramification_text(&r))
        }
        Command::Conductor => {
            let c = conductor_of_constants(&desc, &s.caps)?;
            (json!({"command": "conductor", "descriptor": canonical, "conductor": conductor_json(&c)}), conductor_text(&c))
        }
        Command::Verify => (json!({"command": "verify", "descriptor": canonical}), String::new()),
        Command::Unitgroup => unreachable!("handled above"),
    };
    if s.verify || job.command == Command::Verify {
        let verdicts = verify_all(&desc, &s.caps)?;
        let all_pass = verdicts.iter().all(|v| v.pass);
        let vj: Vec<Value> = verdicts.iter().map(verdict_json).collect();
        for v in &verdicts {
            text.push_str(&format!("[{}] {}\n", if v.pass { "pass" } else { "FAIL" }, v.claim));
        }
        value["verdicts"] = Value::Array(vj.clone());
        if !all_pass {
            let bundle = json!({
                "job": serde_json::to_value(job).expect("serializable"),
                "report": value,
                "failed": vj.into_iter().filter(|v| v["pass"] == Value::Bool(false)).collect::<Vec<_>>(),
            });
            return Ok(Outcome {
                code: 3,
                stdout: format!("{}\n", serde_json::to_string_pretty(&bundle).expect("serializable")),
                stderr: "error: oracle verification failed\n".into(),
            });
        }
    }
    Ok(Outcome { code: 0, stdout: render(s.format, &value, text), stderr: String::new() })
}

/// Parses the job text and runs it.
pub fn run_str(args: &Args, input: &str) -> Outcome {
    match serde_json::from_str::<JobSpec>(input) {
        Ok(job) => run_job(args, &job),
        Err(e) => failure(&Error::Schema(e.to_string())),
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args(argv: impl IntoIterator<Item = String>) -> i32 {
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let input = if args.input == "-" {
        let mut s = String::new();
        match std::io::Read::read_to_string(&mut std::io::stdin(), &mut s) {
            Ok(_) => s,
            Err(e) => {
                eprintln!("error: cannot read standard input: {e}");
                return 1;
            }
        }
    } else {
        match std::fs::read_to_string(&args.input) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", args.input);
                return 1;
            }
        }
    };
    let out = run_str(&args, &input);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}
