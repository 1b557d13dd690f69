//! Invariants of genus fields, ramification data and conductors of constants
//! on random Kummer and Artin–Schreier–Witt descriptors.

mod common;

use common::{asw1, random_as_function, random_primes, rng};
use ffgenus::chars::{unit_group_order, UnitGroup};
use ffgenus::extdesc::{kummer_normalize, AswExt, Caps, Descriptor};
use ffgenus::ffalg::{Fq, Poly};
use ffgenus::genus::{conductor_of_constants, genus};
use ffgenus::oracle::{oracle_genus_unramified, verify_all};
use ffgenus::ramify::ramify;
use ffgenus::witt::WittVec;
use proptest::prelude::*;
use rand::Rng;

fn random_kummer(seed: u64) -> Option<Descriptor> {
    let mut r = rng(seed);
    let (p, l) = [(3, 1), (2, 2), (5, 1), (7, 1)][r.gen_range(0..4)];
    let f = Fq::new(p, l).unwrap();
    let qm1 = f.q() - 1;
    let divisors: Vec<u64> = (2..=qm1).filter(|t| qm1.is_multiple_of(*t)).collect();
    let t = divisors[r.gen_range(0..divisors.len())];
    let primes = random_primes(&f, r.gen_range(1..=2), 2, &mut r);
    let d = primes.iter().fold(Poly::one(&f), |acc, prime| &acc * &prime.pow(r.gen_range(1..t.max(2))));
    kummer_normalize(t, &d).ok().map(Descriptor::Kummer)
}

fn random_asw(seed: u64) -> Descriptor {
    let mut r = rng(seed);
    match r.gen_range(0..3) {
        0 => Descriptor::Asw(asw1(random_as_function(&Fq::new(2, 1).unwrap(), 2, 3, &mut r))),
        1 => Descriptor::Asw(asw1(random_as_function(&Fq::new(3, 1).unwrap(), 2, 2, &mut r))),
        _ => {
            let f = Fq::new(2, 1).unwrap();
            let xi = WittVec::new(vec![random_as_function(&f, 1, 2, &mut r), random_as_function(&f, 1, 1, &mut r)]).unwrap();
            Descriptor::Asw(AswExt::new(1, xi, None, &Caps::default()).unwrap())
        }
    }
}

fn check_invariants(desc: &Descriptor) -> Result<(), TestCaseError> {
    let caps = Caps::default();
    let ram = match ramify(desc, &caps) {
        Ok(r) => r,
        Err(ffgenus::Error::TrivialExtension) => return Ok(()),
        Err(e) => return Err(TestCaseError::fail(format!("{desc:?}: {e}"))),
    };
    prop_assert!(ram.check_product().is_ok());
    prop_assert_eq!(ram.t, ram.f_inf);
    let report = genus(desc, &caps).map_err(|e| TestCaseError::fail(format!("{desc:?}: {e}")))?;
    prop_assert_eq!(report.constant_field_degree, ram.t);
    prop_assert!(report.degree_over_k >= ram.degree);
    prop_assert_eq!(report.degree_over_k % ram.degree, 0);
    let unram = oracle_genus_unramified(desc, &report, &caps).unwrap();
    prop_assert!(unram.pass, "{:?}", unram);
    let c = conductor_of_constants(desc, &caps).unwrap();
    let p = match desc {
        Descriptor::Asw(k) => k.p(),
        _ => 1,
    };
    prop_assert_eq!(c.m, c.t * c.d * p.pow(c.s));
    prop_assert_eq!(c.m, c.t * c.d_star);
    prop_assert_eq!(c.t, ram.t);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn kummer_invariants(seed in any::<u64>()) {
        let Some(desc) = random_kummer(seed) else { return Ok(()) };
        check_invariants(&desc)?;
        let Descriptor::Kummer(k) = &desc else { unreachable!() };
        prop_assert_eq!(&kummer_normalize(k.t, &k.d).unwrap(), k);
        let f = k.field();
        prop_assert_eq!((f.q() - 1) % conductor_of_constants(&desc, &Caps::default()).unwrap().d, 0);
        let ram = ramify(&desc, &Caps::default()).unwrap();
        for (prime, alpha) in &k.factors {
            let g = num_integer::gcd(k.t, *alpha as u64);
            prop_assert_eq!(ram.e_at(prime), k.t / g);
        }
        for verdict in verify_all(&desc, &Caps::default()).unwrap() {
            prop_assert!(verdict.pass, "{:?}", verdict);
        }
    }

    #[test]
    fn asw_invariants(seed in any::<u64>()) {
        let desc = random_asw(seed);
        check_invariants(&desc)?;
        for verdict in verify_all(&desc, &Caps::default()).unwrap() {
            prop_assert!(verdict.pass, "{:?}", verdict);
        }
    }

    #[test]
    fn unit_group_order_matches_count(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (p, l) = [(2, 1), (3, 1), (2, 2), (5, 1)][r.gen_range(0..4)];
        let f = Fq::new(p, l).unwrap();
        let primes = random_primes(&f, r.gen_range(1..=2), 2, &mut r);
        let n = primes.iter().fold(Poly::one(&f), |acc, prime| &acc * &prime.pow(r.gen_range(1..=2)));
        prop_assume!(f.q().pow(n.deg().unwrap() as u32) <= 1 << 14);
        let g = UnitGroup::new(&n, 1 << 16).unwrap();
        let units = (0..f.q().pow(n.deg().unwrap() as u32))
            .map(|key| Poly::from_key(&f, key as u128, n.deg().unwrap()))
            .filter(|a| a.gcd(&n).is_one())
            .count() as u64;
        prop_assert_eq!(g.order(), units);
        prop_assert_eq!(unit_group_order(&n).unwrap(), units as u128);
        prop_assert_eq!(g.orders().iter().product::<u64>(), units);
    }
}
