//! Unit groups `(R_T/N)^*`, Dirichlet characters and their local components.
//!
//! Everything here is brute force over the residues modulo `N`, guarded by a
//! configurable cap on the group order.

use std::collections::{BTreeSet, HashMap};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::ffalg::{factor, Poly};

/// Default cap on `|(R_T/N)^*|`.
pub const DEFAULT_UNIT_GROUP_CAP: u128 = 100_000;

/// Order of `(R_T/N)^*`, saturating on overflow.
pub fn unit_group_order(n: &Poly) -> Result<u128> {
    let fact = factor(n)?;
    let q = n.field().q() as u128;
    let mut total: u128 = 1;
    for (prime, a) in &fact.factors {
        let d = prime.deg().unwrap() as u32;
        let norm = q.checked_pow(d).unwrap_or(u128::MAX);
        let high = norm.checked_pow(*a).unwrap_or(u128::MAX);
        let low = norm.checked_pow(*a - 1).unwrap_or(u128::MAX);
        total = total.saturating_mul(high.saturating_sub(low));
    }
    Ok(total)
}

/// `(R_T/N)^*` with a basis of prime-power order generators and a full
/// discrete-log table.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    modulus: Poly,
    order: u64,
    gens: Vec<Poly>,
    orders: Vec<u64>,
    exponent: u64,
    dlog: HashMap<u128, Vec<u64>>,
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl UnitGroup {
    pub fn new(n: &Poly, cap: u128) -> Result<UnitGroup> {
        if n.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if n.is_constant() {
            return Err(Error::ConstantPolynomial);
        }
        if !n.is_monic() {
            return Err(Error::Schema("modulus must be monic".into()));
        }
        let size = unit_group_order(n)?;
        if size > cap {
            return Err(Error::CapExceeded { what: "unit group order", needed: size, cap });
        }
        let field = n.field().clone();
        let deg = n.deg().unwrap();
        let total = (field.q() as u128).pow(deg as u32);
        let units: Vec<Poly> = (0..total)
            .map(|k| Poly::from_key(&field, k, deg))
            .filter(|r| !r.is_zero() && r.gcd(n).is_one())
            .collect();
        let order = units.len() as u64;
        if order as u128 != size {
            return Err(Error::Internal(format!("unit count {order} differs from formula {size}")));
        }
        let mul = |a: &Poly, b: &Poly| a.mul_mod(b, n);
        let one = Poly::one(&field);
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        for ell in prime_factors(order) {
            let mut ell_k = 1u64;
            while order.is_multiple_of(ell_k * ell) {
                ell_k *= ell;
            }
            let cof = (order / ell_k) as u128;
            let mut sylow: Vec<Poly> = units.iter().map(|x| x.pow_mod(cof, n)).collect();
            sylow.sort();
            sylow.dedup();
            // span of the basis found so far: element key -> exponents
            let mut basis: Vec<(Poly, u64)> = Vec::new();
            let mut span: HashMap<u128, Vec<u64>> = HashMap::from([(one.key(), vec![])]);
            while (span.len() as u64) < ell_k {
                // element whose image in the quotient has maximal order
                let mut best: Option<(u64, &Poly, Vec<u64>)> = None;
                for y in &sylow {
                    let mut m = 1u64;
                    let mut z = y.clone();
                    while !span.contains_key(&z.key()) {
                        z = z.pow_mod(ell as u128, n);
                        m *= ell;
                    }
                    if best.as_ref().is_none_or(|b| m > b.0) {
                        best = Some((m, y, span[&z.key()].clone()));
                    }
                }
                let (m, y, coeffs) = best.unwrap();
                let mut adjusted = y.clone();
                for ((x, ox), c) in basis.iter().zip(&coeffs) {
                    if c % m != 0 {
                        return Err(Error::Internal("unit group basis adjustment failed".into()));
                    }
                    let e = (ox - (c / m) % ox) % ox;
                    adjusted = mul(&adjusted, &x.pow_mod(e as u128, n));
                }
                let mut new_span = HashMap::with_capacity(span.len() * m as usize);
                for (key, ex) in &span {
                    let mut z = Poly::from_key(&field, *key, deg);
                    for c in 0..m {
                        let mut v = ex.clone();
                        v.push(c);
                        new_span.insert(z.key(), v);
                        z = mul(&z, &adjusted);
                    }
                }
                span = new_span;
                basis.push((adjusted, m));
            }
            for (g, o) in basis {
                gens.push(g);
                orders.push(o);
            }
        }
        let exponent = orders.iter().fold(1u64, |a, &b| a.lcm(&b));
        let mut dlog: HashMap<u128, Vec<u64>> = HashMap::from([(one.key(), vec![])]);
        for (g, &o) in gens.iter().zip(&orders) {
            let mut next = HashMap::with_capacity(dlog.len() * o as usize);
            for (key, ex) in &dlog {
                let mut z = Poly::from_key(&field, *key, deg);
                for c in 0..o {
                    let mut v = ex.clone();
                    v.push(c);
                    next.insert(z.key(), v);
                    z = mul(&z, g);
                }
            }
            dlog = next;
        }
        if dlog.len() as u64 != order {
            return Err(Error::Internal("discrete-log table is not total".into()));
        }
        Ok(UnitGroup { modulus: n.clone(), order, gens, orders, exponent, dlog })
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Exponent vector of a unit against the generators.
    pub fn dlog(&self, a: &Poly) -> Option<&[u64]> {
        self.dlog.get(&a.rem(&self.modulus).key()).map(|v| v.as_slice())
    }

    /// Elementary divisors sorted ascending.
    pub fn elementary_divisors(&self) -> Vec<u64> {
        let mut o = self.orders.clone();
        o.sort();
        o
    }

    /// Residues of the nonzero constants.
    pub fn constants(&self) -> Vec<Poly> {
        let f = self.modulus.field();
        f.elements().filter(|c| !c.is_zero()).map(|c| Poly::constant(f, c)).collect()
    }

    /// The character with exponent vector `exps`.
    pub fn character(&self, exps: Vec<u64>) -> Result<DirichletChar> {
        if exps.len() != self.gens.len() {
            return Err(Error::Schema(format!(
                "character has {} exponents, unit group has {} generators",
                exps.len(),
                self.gens.len()
            )));
        }
        let exps = exps.iter().zip(&self.orders).map(|(e, o)| e % o).collect();
        Ok(DirichletChar { exps })
    }

    /// Parses exponents given as fractions `a/b` in Q/Z.
    pub fn character_from_fractions(&self, fracs: &[(i64, u64)]) -> Result<DirichletChar> {
        if fracs.len() != self.gens.len() {
            return Err(Error::Schema(format!(
                "character has {} exponents, unit group has {} generators",
                fracs.len(),
                self.gens.len()
            )));
        }
        let mut exps = Vec::with_capacity(fracs.len());
        for (&(num, den), &o) in fracs.iter().zip(&self.orders) {
            if den == 0 || (num as i128 * o as i128) % den as i128 != 0 {
                return Err(Error::Schema(format!("value {num}/{den} is not a multiple of 1/{o}")));
            }
            let e = (num as i128 * o as i128 / den as i128).rem_euclid(o as i128);
            exps.push(e as u64);
        }
        Ok(DirichletChar { exps })
    }

    /// Exponent values as reduced fractions.
    pub fn fractions(&self, chi: &DirichletChar) -> Vec<(u64, u64)> {
        chi.exps
            .iter()
            .zip(&self.orders)
            .map(|(&e, &o)| {
                let g = e.gcd(&o);
                if e == 0 { (0, 1) } else { (e / g, o / g) }
            })
            .collect()
    }

    /// chi(a) as a numerator over [`UnitGroup::exponent`]; `None` for non-units.
    pub fn eval(&self, chi: &DirichletChar, a: &Poly) -> Option<u64> {
        let d = self.dlog(a)?;
        let l = self.exponent as u128;
        let s: u128 = d
            .iter()
            .zip(&chi.exps)
            .zip(&self.orders)
            .map(|((&x, &e), &o)| x as u128 * e as u128 * (l / o as u128))
            .sum();
        Some((s % l) as u64)
    }

    pub fn char_order(&self, chi: &DirichletChar) -> u64 {
        chi.exps.iter().zip(&self.orders).fold(1u64, |acc, (&e, &o)| acc.lcm(&(o / e.gcd(&o))))
    }

    pub fn trivial(&self) -> DirichletChar {
        DirichletChar { exps: vec![0; self.gens.len()] }
    }

    pub fn char_add(&self, a: &DirichletChar, b: &DirichletChar) -> DirichletChar {
        let exps = a.exps.iter().zip(&b.exps).zip(&self.orders).map(|((x, y), o)| (x + y) % o).collect();
        DirichletChar { exps }
    }

    /// Character defined by its value (numerator over the exponent) on each
    /// generator.
    fn char_from_generator_values(&self, vals: &[u64]) -> DirichletChar {
        let exps = vals
            .iter()
            .zip(&self.orders)
            .map(|(&v, &o)| (v as u128 * o as u128 / self.exponent as u128) as u64 % o)
            .collect();
        DirichletChar { exps }
    }

    /// Residue congruent to `a` modulo `P^a` and to 1 modulo `N / P^a`.
    fn crt_local(&self, a: &Poly, pa: &Poly) -> Poly {
        let rest = self.modulus.div_rem(pa).0;
        if rest.is_constant() {
            return a.rem(&self.modulus);
        }
        let inv = rest.inv_mod(pa).expect("coprime CRT factors");
        let one = Poly::one(self.modulus.field());
        let t = (a - &one).mul_mod(&inv, pa);
        (&one + &(&rest * &t)).rem(&self.modulus)
    }

    /// Local component chi_P: the restriction of chi through the projection
    /// onto the `(R_T/P^a)^*` factor. Trivial when `P` does not divide `N`.
    pub fn local_component(&self, chi: &DirichletChar, prime: &Poly) -> DirichletChar {
        let mut a = 0u32;
        let mut rest = self.modulus.clone();
        while prime.divides(&rest) {
            rest = rest.div_rem(prime).0;
            a += 1;
        }
        if a == 0 {
            return self.trivial();
        }
        let pa = prime.pow(a as u64);
        let vals: Vec<u64> = self.gens.iter().map(|g| self.eval(chi, &self.crt_local(g, &pa)).unwrap()).collect();
        self.char_from_generator_values(&vals)
    }

    /// Lifts a character of `(R_T/M)^*` to this group, for `M | N`.
    pub fn lift_from(&self, small: &UnitGroup, chi: &DirichletChar) -> Result<DirichletChar> {
        if !small.modulus.divides(&self.modulus) {
            return Err(Error::Mismatch("lifting requires a modulus dividing N".into()));
        }
        if !self.exponent.is_multiple_of(small.exponent) {
            return Err(Error::Internal("exponent of a quotient must divide the exponent".into()));
        }
        let vals: Vec<u64> = self
            .gens
            .iter()
            .map(|g| {
                let v = small.eval(chi, g).unwrap() as u128;
                (v * self.exponent as u128 / small.exponent as u128) as u64
            })
            .collect();
        Ok(self.char_from_generator_values(&vals))
    }

    /// All elements of the subgroup generated by `gens`.
    pub fn span(&self, gens: &[DirichletChar]) -> BTreeSet<DirichletChar> {
        let mut set = BTreeSet::from([self.trivial()]);
        for g in gens {
            if set.contains(g) {
                continue;
            }
            let mut mult = vec![self.trivial()];
            let mut x = g.clone();
            while x != self.trivial() {
                mult.push(x.clone());
                x = self.char_add(&x, g);
            }
            let mut next = BTreeSet::new();
            for s in &set {
                for m in &mult {
                    next.insert(self.char_add(s, m));
                }
            }
            set = next;
        }
        set
    }

    /// True when chi vanishes on every constant residue.
    pub fn is_even(&self, chi: &DirichletChar) -> bool {
        self.constants().iter().all(|c| self.eval(chi, c) == Some(0))
    }
}

/// Dirichlet character stored as exponents `k_i` against the generators of a
/// [`UnitGroup`]: its value on generator `i` is `k_i / ord_i` in Q/Z.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirichletChar {
    pub exps: Vec<u64>,
}

/// Output of the brute-force genus computation inside `k(Lambda_N)`.
#[derive(Clone, Debug)]
pub struct CharGenus {
    /// Group of K.
    pub x: BTreeSet<DirichletChar>,
    /// Group of L, generated by all local components.
    pub y: BTreeSet<DirichletChar>,
    /// Characters of `L^D`.
    pub genus_fixed: BTreeSet<DirichletChar>,
    /// Characters of `K L^+`.
    pub genus_real: BTreeSet<DirichletChar>,
    /// Order of the decomposition group of infinity in `L/K`.
    pub decomposition_order: u64,
}

impl CharGenus {
    pub fn degree_l_over_k(&self) -> u64 {
        (self.y.len() / self.x.len()) as u64
    }

    pub fn degree_genus_over_k(&self) -> u64 {
        (self.genus_fixed.len() / self.x.len()) as u64
    }
}

/// Genus field of the subfield of `k(Lambda_N)` with character group
/// generated by `gens`, computed twice: as the fixed field of the
/// decomposition group of infinity in `L/K`, and as `K L^+`.
pub fn genus_char_bruteforce(group: &UnitGroup, gens: &[DirichletChar]) -> Result<CharGenus> {
    let x = group.span(gens);
    let primes: Vec<Poly> = factor(group.modulus())?.primes().cloned().collect();
    let locals: Vec<DirichletChar> = gens
        .iter()
        .flat_map(|chi| primes.iter().map(move |p| group.local_component(chi, p)))
        .collect();
    let y = group.span(&locals);
    // constants lying in the subgroup fixing K
    let constants_fixing_k: Vec<Poly> = group
        .constants()
        .into_iter()
        .filter(|c| gens.iter().all(|chi| group.eval(chi, c) == Some(0)))
        .collect();
    let genus_fixed: BTreeSet<DirichletChar> = y
        .iter()
        .filter(|psi| constants_fixing_k.iter().all(|c| group.eval(psi, c) == Some(0)))
        .cloned()
        .collect();
    let mut real_gens: Vec<DirichletChar> = gens.to_vec();
    real_gens.extend(y.iter().filter(|psi| group.is_even(psi)).cloned());
    let genus_real = group.span(&real_gens);
    let decomposition_order = (y.len() / genus_fixed.len()) as u64;
    Ok(CharGenus { x, y, genus_fixed, genus_real, decomposition_order })
}

/// t-th power residue character modulo a prime `P` (with `t | q - 1`),
/// normalized through the fixed primitive root of F_q.
pub fn power_residue_char(group: &UnitGroup, prime: &Poly, t: u64) -> Result<DirichletChar> {
    let f = prime.field();
    let q = f.q();
    if !(q - 1).is_multiple_of(t) {
        return Err(Error::BadKummerDegree { t, qm1: q - 1 });
    }
    let norm = (q as u128).pow(prime.deg().unwrap() as u32);
    let mut vals = Vec::with_capacity(group.generators().len());
    for g in group.generators() {
        let r = g.pow_mod((norm - 1) / t as u128, prime);
        if r.deg() != Some(0) {
            return Err(Error::Internal("power residue symbol is not a nonzero constant".into()));
        }
        let lg = f.log(r.coeff(0)).unwrap();
        // value lg / (q - 1) in Q/Z, scaled to the group exponent
        vals.push((lg as u128 * group.exponent() as u128 / (q - 1) as u128) as u64);
    }
    Ok(group.char_from_generator_values(&vals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::Fq;

    fn poly(p: u64, c: &[u64]) -> Poly {
        Poly::from_ints(&Fq::new(p, 1).unwrap(), c)
    }

    #[test]
    fn unit_group_examples() {
        let g = UnitGroup::new(&poly(3, &[0, 1]), DEFAULT_UNIT_GROUP_CAP).unwrap();
        assert_eq!(g.elementary_divisors(), vec![2]);
        let g = UnitGroup::new(&poly(2, &[0, 0, 1]), DEFAULT_UNIT_GROUP_CAP).unwrap();
        assert_eq!(g.elementary_divisors(), vec![2]);
        assert_eq!(g.generators()[0], poly(2, &[1, 1]));
        let g = UnitGroup::new(&poly(2, &[1, 1, 1]), DEFAULT_UNIT_GROUP_CAP).unwrap();
        assert_eq!(g.elementary_divisors(), vec![3]);
    }

    #[test]
    fn structure_of_t_cubed_over_f2() {
        // (F_2[T]/T^3)^* has order 4 and contains 1+T of order 4
        let g = UnitGroup::new(&poly(2, &[0, 0, 0, 1]), DEFAULT_UNIT_GROUP_CAP).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.elementary_divisors(), vec![4]);
        // (F_3[T]/T^2)^* = F_3^* x (1 + T F_3) = C_2 x C_3
        let g = UnitGroup::new(&poly(3, &[0, 0, 1]), DEFAULT_UNIT_GROUP_CAP).unwrap();
        assert_eq!(g.elementary_divisors(), vec![2, 3]);
    }

    #[test]
    fn cap_exceeded() {
        let f = Fq::new(5, 1).unwrap();
        let n = Poly::monomial(&f, f.one(), 30);
        assert!(matches!(UnitGroup::new(&n, DEFAULT_UNIT_GROUP_CAP), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn dlog_is_homomorphic() {
        let n = poly(3, &[0, 1, 0, 1]);
        let g = UnitGroup::new(&n, DEFAULT_UNIT_GROUP_CAP).unwrap();
        let a = poly(3, &[1, 2]);
        let b = poly(3, &[2, 0, 1]);
        let da = g.dlog(&a).unwrap().to_vec();
        let db = g.dlog(&b).unwrap().to_vec();
        let dab = g.dlog(&a.mul_mod(&b, &n)).unwrap();
        for i in 0..da.len() {
            assert_eq!((da[i] + db[i]) % g.orders()[i], dab[i]);
        }
    }

    #[test]
    fn local_components_of_faithful_cubic() {
        // F_2 has a single irreducible quadratic, so pair it with T^4+T+1,
        // whose residue field also has a character of order 3
        let p1 = poly(2, &[1, 1, 1]);
        let p2 = poly(2, &[1, 1, 0, 0, 1]);
        let n = &p1 * &p2;
        let g = UnitGroup::new(&n, DEFAULT_UNIT_GROUP_CAP).unwrap();
        let c1 = power_residue_char(&g, &p1, 1).unwrap();
        assert_eq!(c1, g.trivial());
        // cubic characters modulo each prime, via lifting
        let g1 = UnitGroup::new(&p1, DEFAULT_UNIT_GROUP_CAP).unwrap();
        let g2 = UnitGroup::new(&p2, DEFAULT_UNIT_GROUP_CAP).unwrap();
        let chi1 = g.lift_from(&g1, &g1.character(vec![1]).unwrap()).unwrap();
        let chi2 = g.lift_from(&g2, &g2.character(vec![1, 0]).unwrap()).unwrap();
        let chi = g.char_add(&chi1, &chi2);
        assert_eq!(g.char_order(&chi), 3);
        assert_eq!(g.local_component(&chi, &p1), chi1);
        assert_eq!(g.local_component(&chi, &p2), chi2);
        assert_eq!(g.char_order(&g.local_component(&chi, &p1)), 3);
        assert_eq!(g.local_component(&chi, &poly(2, &[0, 1])), g.trivial());
    }

    #[test]
    fn fractions_roundtrip() {
        let g = UnitGroup::new(&poly(3, &[0, 0, 1]), DEFAULT_UNIT_GROUP_CAP).unwrap();
        let chi = g.character(vec![1, 2]).unwrap();
        let fr: Vec<(i64, u64)> = g.fractions(&chi).iter().map(|&(a, b)| (a as i64, b)).collect();
        assert_eq!(g.character_from_fractions(&fr).unwrap(), chi);
        assert!(g.character_from_fractions(&[(1, 4), (0, 1)]).is_err());
    }

    #[test]
    fn genus_of_full_cyclotomic_prime_field() {
        // K = k(Lambda_P): L = K and K_ge = K L^+ = K
        let p = poly(3, &[1, 0, 1]);
        let g = UnitGroup::new(&p, DEFAULT_UNIT_GROUP_CAP).unwrap();
        let gens: Vec<DirichletChar> =
            (0..g.generators().len()).map(|i| g.character((0..g.generators().len()).map(|j| (i == j) as u64).collect()).unwrap()).collect();
        let r = genus_char_bruteforce(&g, &gens).unwrap();
        assert_eq!(r.x.len() as u64, g.order());
        assert_eq!(r.genus_fixed, r.x);
        assert_eq!(r.genus_real, r.x);
        let trivial = genus_char_bruteforce(&g, &[]).unwrap();
        assert_eq!(trivial.genus_fixed.len(), 1);
    }
}
