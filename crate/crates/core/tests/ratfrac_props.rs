//! Partial fractions, valuations and the Artin–Schreier normal form.

mod common;

use std::collections::BTreeMap;

use common::{random_as_function, random_monic, random_poly_below, rng};
use ffgenus::extdesc::Caps;
use ffgenus::ffalg::{factor, Fq};
use ffgenus::ramify::AswGroup;
use ffgenus::ratfrac::{as_normal_form, as_rank, as_reduce_at, as_reduce_at_infinity, pf_decompose, AsSlot, RatFn, Val};
use ffgenus::witt::WittVec;
use proptest::prelude::*;
use rand::Rng;

fn field(idx: usize) -> Fq {
    let (p, l) = [(2, 1), (3, 1), (2, 2), (5, 1)][idx];
    Fq::new(p, l).unwrap()
}

fn random_ratfn(f: &Fq, seed: u64) -> RatFn {
    let mut r = rng(seed);
    let den = random_monic(f, r.gen_range(0..=8), &mut r);
    let num = random_poly_below(f, r.gen_range(0..10), &mut r);
    RatFn::new(num, den).unwrap()
}

fn wp(w: &RatFn) -> RatFn {
    &w.frobenius() - w
}

fn add_forms(p: u64, a: &BTreeMap<AsSlot, u64>, b: &BTreeMap<AsSlot, u64>) -> BTreeMap<AsSlot, u64> {
    let mut out = a.clone();
    for (k, x) in b {
        let e = out.entry(k.clone()).or_insert(0);
        *e = (*e + x) % p;
        if *e == 0 {
            out.remove(k);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn partial_fractions_recombine(idx in 0usize..4, seed in any::<u64>()) {
        let f = field(idx);
        let a = random_ratfn(&f, seed);
        let pf = pf_decompose(&a);
        prop_assert_eq!(pf.recombine(), a);
        for w in pf.parts.windows(2) {
            prop_assert!(w[0].prime != w[1].prime);
        }
        for part in &pf.parts {
            prop_assert!(part.exp >= 1);
            prop_assert!(part.num.deg() < part.prime.pow(part.exp as u64).deg());
            prop_assert!(part.num.gcd(&part.prime).is_one());
        }
    }

    #[test]
    fn valuations_are_additive(idx in 0usize..4, s1 in any::<u64>(), s2 in any::<u64>()) {
        let f = field(idx);
        let (a, b) = (random_ratfn(&f, s1), random_ratfn(&f, s2));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let ab = &a * &b;
        let sum = |x: Val, y: Val| Val::Finite(x.finite().unwrap() + y.finite().unwrap());
        prop_assert_eq!(ab.v_infinity(), sum(a.v_infinity(), b.v_infinity()));
        for prime in factor(ab.den()).unwrap().primes() {
            prop_assert_eq!(ab.v_at(prime), sum(a.v_at(prime), b.v_at(prime)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn as_reduction_is_idempotent(idx in 0usize..4, seed in any::<u64>()) {
        let f = field(idx);
        let a = random_as_function(&f, 3, 6, &mut rng(seed));
        if !a.den().is_one() {
            for prime in factor(a.den()).unwrap().primes() {
                let (reduced, w) = as_reduce_at(&a, prime);
                prop_assert_eq!(&(&a - &reduced), &wp(&w));
                let e = reduced.v_at(prime).pole_order();
                prop_assert!(e == 0 || e % f.p() != 0);
                let (again, w2) = as_reduce_at(&reduced, prime);
                prop_assert_eq!(again, reduced);
                prop_assert!(w2.is_zero());
            }
        }
        let (reduced, w) = as_reduce_at_infinity(&a);
        prop_assert_eq!(&(&a - &reduced), &wp(&w));
        let (again, w2) = as_reduce_at_infinity(&reduced);
        prop_assert_eq!(again, reduced);
        prop_assert!(w2.is_zero());
    }

    #[test]
    fn normal_form_is_a_class_invariant(idx in 0usize..4, s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let f = field(idx);
        let a = random_as_function(&f, 2, 4, &mut rng(s1));
        let b = random_as_function(&f, 2, 4, &mut rng(s2));
        let w = random_as_function(&f, 2, 2, &mut rng(s3));
        let na = as_normal_form(&a).unwrap();
        prop_assert_eq!(as_normal_form(&(&a + &wp(&w))).unwrap(), na.clone());
        prop_assert!(as_normal_form(&wp(&w)).unwrap().is_empty());
        let nb = as_normal_form(&b).unwrap();
        prop_assert_eq!(as_normal_form(&(&a + &b)).unwrap(), add_forms(f.p(), &na, &nb));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn rank_matches_character_count(idx in 0usize..2, seed in any::<u64>()) {
        let f = field(idx);
        let mut r = rng(seed);
        let mut gens: Vec<RatFn> = (0..r.gen_range(1..=3)).map(|_| random_as_function(&f, 2, 3, &mut r)).collect();
        if r.gen_bool(0.5) {
            let sum = &gens[0] + &gens[gens.len() - 1];
            gens.push(sum);
        }
        let witt: Vec<WittVec<RatFn>> = gens.iter().map(|g| WittVec::new(vec![g.clone()]).unwrap()).collect();
        let group = AswGroup::new(&f, 1, witt, &Caps::default()).unwrap();
        let rank = as_rank(&gens).unwrap();
        prop_assert_eq!(group.degree(), f.p().pow(rank as u32));
    }
}
