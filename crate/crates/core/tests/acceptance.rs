//! Acceptance suite: one pass/fail line per criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use ffgenus::chars::{genus_char_bruteforce, UnitGroup};
use ffgenus::extdesc::{kummer_normalize, AswExt, Caps, ConstantExt, Descriptor, KummerExt};
use ffgenus::ffalg::{factor, Fq, FqElem, FqScalar, Poly};
use ffgenus::genus::{
    conductor_of_constants, genus_asw, genus_cyclotomic, genus_kummer, ConductorReport, GenusGenerator,
};
use ffgenus::oracle::{
    as_fast_paths, oracle_as_different, oracle_as_different_with, oracle_conductor_minimality,
    oracle_factor_consistency, oracle_genus_unramified, oracle_kummer_vs_characters, oracle_witt_ghost,
    oracle_witt_ghost_with,
};
use ffgenus::ramify::same_asw_field;
use ffgenus::ratfrac::RatFn;
use ffgenus::witt::WittVec;
use rand::Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(n: u32, name: &str, limit: Duration, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f));
    let elapsed = start.elapsed();
    let (mut ok, mut detail) = match outcome {
        Ok(Ok(d)) => (true, d),
        Ok(Err(e)) => (false, e),
        Err(_) => (false, "panicked".to_string()),
    };
    if elapsed > limit {
        ok = false;
        detail = format!("{detail}; over the {limit:?} budget");
    }
    println!("criterion {n}: {} {name}: {detail} [{elapsed:.2?}]", if ok { "PASS" } else { "FAIL" });
    ok
}

// ---------------------------------------------------------------- suites

fn suite_1() -> Vec<(Fq, AswExt)> {
    [2u64, 3, 5]
        .iter()
        .map(|&p| {
            let f = Fq::new(p, 1).unwrap();
            let k = asw1(rat(&f, &[1, p - 1], &[1]));
            (f, k)
        })
        .collect()
}

fn suite_3() -> Vec<(Fq, RatFn)> {
    let mut out = Vec::new();
    for (p, seed) in [(2u64, 31u64), (3, 32)] {
        let f = Fq::new(p, 1).unwrap();
        let mut r = rng(seed);
        for _ in 0..30 {
            out.push((f.clone(), random_as_function(&f, 3, 5, &mut r)));
        }
    }
    out
}

/// Pairs `(K_1, K_2)` and the composite descriptor given by its factors.
fn suite_5() -> Vec<(AswExt, AswExt, AswExt)> {
    let caps = Caps::default();
    let mut out = Vec::new();
    for (p, seed) in [(2u64, 51u64), (3, 52)] {
        let f = Fq::new(p, 1).unwrap();
        let mut r = rng(seed);
        for _ in 0..12 {
            let x1 = random_as_function(&f, 2, 3, &mut r);
            let x2 = random_as_function(&f, 2, 3, &mut r);
            let xi = WittVec::new(vec![&x1 + &x2]).unwrap();
            let factors = vec![WittVec::new(vec![x1.clone()]).unwrap(), WittVec::new(vec![x2.clone()]).unwrap()];
            out.push((asw1(x1), asw1(x2), AswExt::new(1, xi, Some(factors), &caps).unwrap()));
        }
    }
    out
}

fn suite_4() -> Vec<KummerExt> {
    let mut out = Vec::new();
    for (p, seed) in [(3u64, 41u64), (5, 42)] {
        let f = Fq::new(p, 1).unwrap();
        let mut r = rng(seed);
        for _ in 0..6 {
            out.push(kummer_normalize(2, &random_squarefree(&f, 4, &mut r)).unwrap());
        }
    }
    out
}

// ---------------------------------------------------------------- criteria

fn criterion_1() -> Check {
    let caps = Caps::default();
    for (f, k) in suite_1() {
        let start = Instant::now();
        let p = f.p();
        let c = conductor_of_constants(&Descriptor::Asw(k.clone()), &caps).map_err(|e| e.to_string())?;
        ensure(c.m == p && c.t == 1 && c.d == 1 && c.s == 1, || format!("p = {p}: {c:?}"))?;
        ensure(c.m == c.t * c.d_star, || format!("p = {p}: m differs from t d*: {c:?}"))?;
        let g = genus_asw(&k, &caps).map_err(|e| e.to_string())?.report;
        ensure(g.equals_base(), || format!("p = {p}: [K_ge:K] = {}", g.degree_over_base))?;
        ensure(start.elapsed() < Duration::from_secs(1), || format!("p = {p} took {:?}", start.elapsed()))?;
    }
    Ok("m = p, t = 1, d = 1, s = 1, K_ge = K for p = 2, 3, 5".into())
}

fn random_witt(f: &Fq, v: usize, r: &mut rand_chacha::ChaCha8Rng) -> WittVec<FqScalar> {
    WittVec::new((0..v).map(|_| FqScalar::new(f, FqElem(r.gen_range(0..f.q()) as u32))).collect()).unwrap()
}

fn criterion_2() -> Check {
    let mut r = rng(2);
    let mut total = 0;
    for p in [2u64, 3] {
        for l in [1u32, 2] {
            let f = Fq::new(p, l).unwrap();
            for v in 1..=3usize {
                for _ in 0..1000 {
                    let (x, y, z) = (random_witt(&f, v, &mut r), random_witt(&f, v, &mut r), random_witt(&f, v, &mut r));
                    let add = |a: &WittVec<FqScalar>, b: &WittVec<FqScalar>| a.add(b).unwrap();
                    let ctx = || format!("p = {p}, l = {l}, v = {v}, x = {x:?}, y = {y:?}, z = {z:?}");
                    ensure(add(&x, &y) == add(&y, &x), || format!("commutativity: {}", ctx()))?;
                    ensure(add(&add(&x, &y), &z) == add(&x, &add(&y, &z)), || format!("associativity: {}", ctx()))?;
                    ensure(add(&x, &x.neg().unwrap()).is_zero(), || format!("inverse: {}", ctx()))?;
                    let g = oracle_witt_ghost(&x, &y).unwrap();
                    ensure(g.pass, || format!("ghost: {g:?}"))?;
                    total += 1;
                }
            }
        }
    }
    Ok(format!("{total} random triples over F_2, F_4, F_3, F_9 with v = 1, 2, 3"))
}

fn criterion_3() -> Check {
    let caps = Caps::default();
    let instances = suite_3();
    for (_, alpha) in &instances {
        let v = oracle_as_different(alpha, &caps).map_err(|e| format!("{alpha}: {e}"))?;
        ensure(v.pass, || format!("{v:?}"))?;
    }
    Ok(format!("{} Artin-Schreier instances agree at every place", instances.len()))
}

fn criterion_4() -> Check {
    let caps = Caps::default();
    let instances = suite_4();
    for k in &instances {
        let f = k.field();
        let g = genus_kummer(k, &caps).map_err(|e| e.to_string())?;
        // xi_i = sqrt((-1)^(deg P_i) P_i) for squarefree D and t = 2
        let expected: Vec<GenusGenerator> = k
            .factors
            .iter()
            .enumerate()
            .map(|(i, (p, _))| GenusGenerator::Radical {
                label: format!("xi_{}", i + 1),
                root: 2,
                constant: if p.deg().unwrap() % 2 == 0 { f.one() } else { f.neg(f.one()) },
                factors: vec![(p.clone(), 1)],
            })
            .collect();
        ensure(g.l_generators == expected, || format!("D = {}: generators {:?}", k.d, g.l_generators))?;
        let desc = Descriptor::Kummer(k.clone());
        let v = oracle_genus_unramified(&desc, &g, &caps).map_err(|e| e.to_string())?;
        ensure(v.pass, || format!("{v:?}"))?;
        let d_order = g.decomposition.as_ref().map(|d| d.order).unwrap_or(0);
        ensure(g.degree_over_base * d_order == g.l_degree_over_base.unwrap_or(0), || {
            format!("D = {}: [K_ge:K] = {}, |D| = {d_order}, [L:K] = {:?}", k.d, g.degree_over_base, g.l_degree_over_base)
        })?;
        let c = oracle_kummer_vs_characters(k, &caps).map_err(|e| e.to_string())?;
        ensure(c.pass, || format!("{c:?}"))?;
    }
    Ok(format!("{} instances over F_3 and F_5", instances.len()))
}

/// Genus generators grouped by prime (`None` for the polynomial part).
fn by_prime(gens: &[GenusGenerator]) -> std::collections::BTreeMap<Option<Poly>, Vec<WittVec<RatFn>>> {
    let mut out: std::collections::BTreeMap<Option<Poly>, Vec<WittVec<RatFn>>> = Default::default();
    for g in gens {
        if let GenusGenerator::Witt { prime, rhs, .. } = g {
            out.entry(prime.clone()).or_default().push(rhs.clone());
        }
    }
    out
}

fn criterion_5() -> Check {
    let caps = Caps::default();
    let instances = suite_5();
    for (k1, k2, k12) in &instances {
        let f = k1.field();
        let g1 = genus_asw(k1, &caps).map_err(|e| e.to_string())?;
        let g2 = genus_asw(k2, &caps).map_err(|e| e.to_string())?;
        let g12 = genus_asw(k12, &caps).map_err(|e| e.to_string())?;
        let union: Vec<WittVec<RatFn>> = g1.chars.iter().chain(&g2.chars).cloned().collect();
        let same = same_asw_field(f, 1, &g12.chars, &union, &caps).map_err(|e| e.to_string())?;
        ensure(same, || format!("{:?} and {:?}: genus fields differ", k1.xi, k2.xi))?;
        // canonical form: the field generated at each prime
        let (a, mut b) = (by_prime(&g12.report.generators), by_prime(&g1.report.generators));
        for (key, xs) in by_prime(&g2.report.generators) {
            b.entry(key).or_default().extend(xs);
        }
        let keys: std::collections::BTreeSet<_> = a.keys().chain(b.keys()).cloned().collect();
        for key in keys {
            let (xa, xb) = (a.get(&key).cloned().unwrap_or_default(), b.get(&key).cloned().unwrap_or_default());
            let same = same_asw_field(f, 1, &xa, &xb, &caps).map_err(|e| e.to_string())?;
            ensure(same, || format!("{:?} and {:?}: generators at {key:?} differ", k1.xi, k2.xi))?;
        }
    }
    Ok(format!("{} pairs over F_2 and F_3", instances.len()))
}

fn check_conductor(desc: &Descriptor, p: u64, v: u32, caps: &Caps) -> Result<ConductorReport, String> {
    let c = conductor_of_constants(desc, caps).map_err(|e| format!("{desc:?}: {e}"))?;
    ensure(c.t * c.d * p.pow(c.s) == c.t * c.d_star, || format!("{desc:?}: {c:?}"))?;
    let v = oracle_conductor_minimality(desc, c.m, 2 * p.pow(v), caps).map_err(|e| e.to_string())?;
    ensure(v.pass, || format!("{v:?}"))?;
    Ok(c)
}

fn criterion_6() -> Check {
    let caps = Caps::default();
    let mut n = 0;
    for (f, k) in suite_1() {
        check_conductor(&Descriptor::Asw(k), f.p(), 1, &caps)?;
        n += 1;
    }
    for (f, alpha) in suite_3() {
        check_conductor(&Descriptor::Asw(asw1(alpha)), f.p(), 1, &caps)?;
        n += 1;
    }
    for (k1, k2, k12) in suite_5() {
        for k in [k1, k2, k12] {
            let p = k.p();
            check_conductor(&Descriptor::Asw(k), p, 1, &caps)?;
            n += 1;
        }
    }
    Ok(format!("{n} instances, both routes agree and m is minimal within 2 p^v"))
}

fn monic_polys(f: &Fq, d: usize) -> Vec<Poly> {
    let q = f.q();
    (0..q.pow(d as u32))
        .map(|code| {
            let mut c: Vec<u64> = (0..d).map(|i| (code / q.pow(i as u32)) % q).collect();
            c.push(1);
            poly(f, &c)
        })
        .collect()
}

fn criterion_7() -> Check {
    let caps = Caps::default();
    let (mut fields, mut kummer) = (0, 0);
    for (p, max_deg) in [(2u64, 3usize), (3, 2)] {
        let f = Fq::new(p, 1).unwrap();
        for d in 1..=max_deg {
            for n in monic_polys(&f, d) {
                let group = std::sync::Arc::new(UnitGroup::new(&n, caps.unit_group).map_err(|e| e.to_string())?);
                let all = group.span(&group.generators().iter().enumerate().map(|(i, _)| {
                    let mut e = vec![0; group.generators().len()];
                    e[i] = 1;
                    group.character(e).unwrap()
                }).collect::<Vec<_>>());
                for chi in all.iter().filter(|c| group.char_order(c) > 1) {
                    let cg = genus_char_bruteforce(&group, std::slice::from_ref(chi)).map_err(|e| e.to_string())?;
                    ensure(cg.genus_fixed == cg.genus_real, || format!("N = {n}, chi = {chi:?}: L^D differs from K L^+"))?;
                    ensure((f.q() - 1).is_multiple_of(cg.decomposition_order), || {
                        format!("N = {n}, chi = {chi:?}: |D| = {} does not divide q - 1", cg.decomposition_order)
                    })?;
                    let sub = ffgenus::extdesc::CyclotomicSubfield::new(group.clone(), vec![chi.clone()]).unwrap();
                    let report = genus_cyclotomic(&sub).map_err(|e| e.to_string())?;
                    let v = oracle_genus_unramified(&Descriptor::Cyclotomic(sub), &report, &caps).map_err(|e| e.to_string())?;
                    ensure(v.pass, || format!("{v:?}"))?;
                    fields += 1;
                }
                // Kummer-representable: t = 2 | q - 1 and N squarefree
                let fac = factor(&n).map_err(|e| e.to_string())?;
                if p == 3 && fac.factors.iter().all(|(_, e)| *e == 1) {
                    let k = kummer_normalize(2, &n).map_err(|e| e.to_string())?;
                    let v = oracle_kummer_vs_characters(&k, &caps).map_err(|e| e.to_string())?;
                    ensure(v.pass, || format!("{v:?}"))?;
                    kummer += 1;
                }
            }
        }
    }
    Ok(format!("{fields} cyclic subfields, {kummer} Kummer instances"))
}

fn criterion_8() -> Check {
    let caps = Caps::default();
    let mut controls = Vec::new();

    // Witt addition without carries
    for p in [2u64, 3] {
        let f = Fq::new(p, 1).unwrap();
        let x = WittVec::new(vec![FqScalar::new(&f, f.one()), FqScalar::new(&f, f.zero())]).unwrap();
        let y = x.clone();
        let carry_free = |a: &WittVec<FqScalar>, b: &WittVec<FqScalar>| {
            let f = a.coords()[0].field.clone();
            WittVec::new(a.coords().iter().zip(b.coords()).map(|(s, t)| FqScalar::new(&f, f.add(s.value, t.value))).collect())
        };
        controls.push(("carry-free Witt addition", oracle_witt_ghost_with(&x, &y, carry_free).unwrap()));
    }

    // Artin-Schreier fast path claiming no ramification
    let f2 = Fq::new(2, 1).unwrap();
    let alpha = rat(&f2, &[1], &[0, 0, 1]);
    let (_, dec) = as_fast_paths(&alpha, &caps).unwrap();
    controls.push(("unramified claim for 1/T^2", oracle_as_different_with(&alpha, (Vec::new(), (1, 1)), dec).unwrap()));

    // genus fields with an injected ramified generator
    let f3 = Fq::new(3, 1).unwrap();
    let k = asw1(&rat(&f3, &[1], &[0, 1]) + &rat(&f3, &[0, 1], &[1]));
    let mut g = genus_asw(&k, &caps).unwrap().report;
    g.generators.push(GenusGenerator::Witt {
        label: "injected".into(),
        prime: Some(poly(&f3, &[1, 1])),
        u: 1,
        rhs: WittVec::new(vec![rat(&f3, &[1], &[1, 1])]).unwrap(),
    });
    controls.push(("injected Witt generator", oracle_genus_unramified(&Descriptor::Asw(k), &g, &caps).unwrap()));
    let kum = kummer_normalize(2, &poly(&f3, &[0, 1, 1])).unwrap();
    let mut g = genus_kummer(&kum, &caps).unwrap();
    g.generators.push(GenusGenerator::Radical {
        label: "injected".into(),
        root: 2,
        constant: f3.one(),
        factors: vec![(poly(&f3, &[2, 1]), 1)],
    });
    controls.push(("injected radical generator", oracle_genus_unramified(&Descriptor::Kummer(kum), &g, &caps).unwrap()));

    // wrong conductors
    let (f, k) = suite_1().remove(1);
    let d = Descriptor::Asw(k);
    controls.push(("conductor 1 for z^3 - z = 1 - T", oracle_conductor_minimality(&d, 1, 2 * f.p(), &caps).unwrap()));
    let c3 = Descriptor::Constant(ConstantExt::new(&f2, 3).unwrap());
    controls.push(("conductor 6 for k_3", oracle_conductor_minimality(&c3, 6, 6, &caps).unwrap()));

    // factors that do not generate K
    let xi = WittVec::new(vec![rat(&f3, &[1], &[0, 1])]).unwrap();
    let wrong = AswExt::new(1, xi, Some(vec![WittVec::new(vec![rat(&f3, &[1], &[1, 1])]).unwrap()]), &caps).unwrap();
    controls.push(("inconsistent factors", oracle_factor_consistency(&wrong, &caps).unwrap()));

    let passed: Vec<&str> = controls.iter().filter(|(_, v)| v.pass).map(|(n, _)| *n).collect();
    ensure(passed.is_empty(), || format!("controls not rejected: {passed:?}"))?;
    Ok(format!("{} corrupted instances all rejected", controls.len()))
}

fn main() {
    let results = [
        run(1, "worked example z^p - z = 1 - T", Duration::from_secs(3), criterion_1),
        run(2, "Witt ring laws and ghost oracle", Duration::from_secs(30), criterion_2),
        run(3, "Schmid criterion against full reduction", Duration::from_secs(30), criterion_3),
        run(4, "Kummer genus fields", Duration::from_secs(30), criterion_4),
        run(5, "product law for genus fields", Duration::from_secs(30), criterion_5),
        run(6, "conductor routes and minimality", Duration::from_secs(60), criterion_6),
        run(7, "character path", Duration::from_secs(60), criterion_7),
        run(8, "negative controls", Duration::from_secs(30), criterion_8),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
