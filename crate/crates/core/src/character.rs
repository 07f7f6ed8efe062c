//! Cubic residue symbols over `F_{q²}[T]` and the characters `χ_F`.
//!
//! For monic `F` with roots `β` (in some extension), `χ_F(a)` is the cubic class
//! of the resultant `Res(F, a) = Π a(β)`, because the symbol at a prime `π` of
//! degree `d` is the norm from `F_{q^{2d}}` followed by the `(q²-1)/3` power.
//! [`CubicCharacter::value`] uses that identity; the definitional
//! modular-exponentiation route is kept in [`cubic_residue_symbol`] and the two
//! are cross-checked in tests.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_complex::Complex64;

use crate::eisenstein::{EisensteinInt, EisensteinValue};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower, Level};
use crate::poly::{factorize, format_poly, is_irreducible, is_squarefree, Factorization, MonicPoly, Poly};

/// `χ_π(a)`: the cube root of unity congruent to `a^{(q^{2 deg π}-1)/3}` modulo `π`.
pub fn cubic_residue_symbol(t: &FieldTower, pi: &MonicPoly, a: &Poly) -> Result<EisensteinValue> {
    if pi.level() != Level::Ext {
        return Err(Error::LevelMismatch("residue symbol modulus must be an extension-level prime"));
    }
    if !is_irreducible(pi, t) {
        return Err(Error::NotPrime);
    }
    Ok(residue_symbol_unchecked(t, pi, a))
}

pub(crate) fn residue_symbol_unchecked(t: &FieldTower, pi: &Poly, a: &Poly) -> EisensteinValue {
    let r = a.to_ext().rem(pi, t);
    if r.is_zero() {
        return EisensteinValue::Zero;
    }
    let e = (BigUint::from(t.ext_size()).pow(pi.deg() as u32) - 1u32) / 3u32;
    let y = r.powmod(&e, pi, t);
    debug_assert_eq!(y.deg(), 0, "power residue is a constant");
    t.cube_root_inverse(y.coeff(0)).expect("power residue is a cube root of unity")
}

/// `κ(x)`: the class of a field element under `x ↦ x^{(q²-1)/3}`.
#[inline]
pub fn cubic_class(t: &FieldTower, x: Elem) -> EisensteinValue {
    if x.is_zero() {
        EisensteinValue::Zero
    } else {
        EisensteinValue::Root(t.cubic_class(x))
    }
}

/// The character `χ_F` of a primitive modulus, with conductor `F·F^σ`.
#[derive(Debug)]
pub struct CubicCharacter {
    f: MonicPoly,
    conductor: MonicPoly,
    genus: u32,
    factorization: OnceLock<Factorization>,
}

impl Clone for CubicCharacter {
    fn clone(&self) -> Self {
        let factorization = OnceLock::new();
        if let Some(f) = self.factorization.get() {
            let _ = factorization.set(f.clone());
        }
        CubicCharacter { f: self.f.clone(), conductor: self.conductor.clone(), genus: self.genus, factorization }
    }
}

/// Accepts `F` iff it is squarefree with `gcd(F, F^σ) = 1`.
pub fn primitivity_and_conductor(t: &FieldTower, f: &MonicPoly) -> Result<CubicCharacter> {
    let f = f.to_ext();
    if f.deg() == 0 {
        return Err(Error::NotPrimitive);
    }
    if !is_squarefree(&f, t) {
        return Err(Error::NotSquarefree);
    }
    let fs = f.conj(t);
    let g = f.gcd(&fs, t);
    if g.deg() > 0 {
        let g = g.to_base(t).expect("gcd with the conjugate is defined over F_q");
        return Err(Error::HasBaseDivisor(format_poly(g.poly(), t)));
    }
    let conductor = f.mul(&fs, t).to_base(t).expect("norm lies over F_q");
    Ok(CubicCharacter { genus: 2 * f.deg() as u32 - 2, f, conductor, factorization: OnceLock::new() })
}

/// Raw predicate: some prime factor of `F` is defined over `F_q`.
pub fn has_base_prime_factor(t: &FieldTower, f: &MonicPoly) -> bool {
    factorize(t, &f.to_ext()).primes().any(|p| p.to_base(t).is_some())
}

/// Raw predicate: some nonconstant polynomial over `F_q` divides `F`.
pub fn has_base_divisor(t: &FieldTower, f: &MonicPoly) -> bool {
    let f = f.to_ext();
    f.gcd(&f.conj(t), t).deg() > 0
}

impl CubicCharacter {
    pub fn modulus(&self) -> &MonicPoly {
        &self.f
    }

    pub fn conductor(&self) -> &MonicPoly {
        &self.conductor
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn factorization(&self, t: &FieldTower) -> &Factorization {
        self.factorization.get_or_init(|| factorize(t, &self.f))
    }

    /// The conjugate character `χ̄_F`, which is `χ_{F^σ}` on `F_q[T]`.
    pub fn conjugate(&self, t: &FieldTower) -> CubicCharacter {
        primitivity_and_conductor(t, &self.f.conj(t)).expect("conjugate of a primitive modulus is primitive")
    }

    /// `χ_F(a)` through the resultant identity.
    pub fn value(&self, t: &FieldTower, a: &Poly) -> EisensteinValue {
        if a.is_zero() {
            return EisensteinValue::Zero;
        }
        cubic_class(t, crate::poly::resultant(&self.f, &a.to_ext(), t))
    }

    /// `χ_F(a)` as the product of residue symbols over the prime factors of `F`.
    pub fn value_definitional(&self, t: &FieldTower, a: &Poly) -> EisensteinValue {
        self.factorization(t)
            .primes()
            .fold(EisensteinValue::ONE, |acc, pi| acc * residue_symbol_unchecked(t, pi, a))
    }

    pub fn evaluator<'a>(&self, t: &'a FieldTower, max_deg: usize) -> CharEvaluator<'a> {
        CharEvaluator::new(t, &self.f, max_deg)
    }
}

const SMALL: usize = 12;

/// Fast `χ_F` on polynomials of bounded degree, for the moment engine.
///
/// Reduction mod `F` uses a table of `T^i mod F`; the resultant of `F` with
/// the remainder runs on fixed-size buffers.
pub struct CharEvaluator<'a> {
    t: &'a FieldTower,
    m: usize,
    f: [Elem; SMALL],
    // powers[i] = T^i mod F, i ≤ max_deg
    powers: Vec<[Elem; SMALL]>,
}

impl<'a> CharEvaluator<'a> {
    pub fn new(t: &'a FieldTower, f: &Poly, max_deg: usize) -> CharEvaluator<'a> {
        let m = f.deg();
        assert!((1..SMALL).contains(&m), "evaluator supports 1 <= deg F < {SMALL}");
        let mut fa = [Elem::ZERO; SMALL];
        fa[..=m].copy_from_slice(f.coeffs());
        let mut powers = Vec::with_capacity(max_deg + 1);
        let mut cur = [Elem::ZERO; SMALL];
        cur[0] = Elem::ONE;
        for _ in 0..=max_deg {
            powers.push(cur);
            // multiply by T and reduce: T^m = -Σ f_i T^i
            let top = cur[m - 1];
            let mut next = [Elem::ZERO; SMALL];
            for i in (1..m).rev() {
                next[i] = cur[i - 1];
            }
            if !top.is_zero() {
                let nt = t.neg(top);
                for i in 0..m {
                    next[i] = t.add(next[i], t.mul(nt, fa[i]));
                }
            }
            cur = next;
        }
        CharEvaluator { t, m, f: fa, powers }
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// `χ_F(a)` for `a` given by coefficients, low to high.
    #[inline]
    pub fn value(&self, a: &[Elem]) -> EisensteinValue {
        let t = self.t;
        let m = self.m;
        let mut r = [Elem::ZERO; SMALL];
        for (i, &c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c == Elem::ONE {
                for j in 0..m {
                    r[j] = t.add(r[j], self.powers[i][j]);
                }
            } else {
                for j in 0..m {
                    r[j] = t.add(r[j], t.mul(c, self.powers[i][j]));
                }
            }
        }
        let mut dr = m;
        while dr > 0 && r[dr - 1].is_zero() {
            dr -= 1;
        }
        if dr == 0 {
            return EisensteinValue::Zero;
        }
        let f = self.f;
        cubic_class(t, small_resultant(t, f, m, r, dr - 1))
    }
}

/// `gcd(a, b) = 1` for `a` of degree at least 1, via a nonzero resultant.
/// `None` when a degree is beyond the stack-array size.
pub(crate) fn coprime_small(t: &FieldTower, a: &[Elem], b: &[Elem]) -> Option<bool> {
    let trim = |c: &[Elem]| c.iter().rposition(|x| !x.is_zero());
    let da = trim(a)?;
    let Some(db) = trim(b) else {
        return Some(false);
    };
    if da >= SMALL || db >= SMALL {
        return None;
    }
    let mut aa = [Elem::ZERO; SMALL];
    let mut bb = [Elem::ZERO; SMALL];
    aa[..=da].copy_from_slice(&a[..=da]);
    bb[..=db].copy_from_slice(&b[..=db]);
    Some(!small_resultant(t, aa, da, bb, db).is_zero())
}

/// `Res(a, b)` for `deg a = da ≥ 1` monic-or-not and `deg b = db`, both nonzero.
fn small_resultant(t: &FieldTower, mut a: [Elem; SMALL], mut da: usize, mut b: [Elem; SMALL], mut db: usize) -> Elem {
    let mut acc = Elem::ONE;
    loop {
        if db == 0 {
            return t.mul(acc, t.pow(b[0], da as u64));
        }
        if da == 0 {
            return t.mul(acc, t.pow(a[0], db as u64));
        }
        // a mod b in place
        let lb = b[db];
        let inv = t.inv(lb);
        let mut deg = da;
        while deg >= db {
            let c = a[deg];
            if !c.is_zero() {
                let c = t.neg(t.mul(c, inv));
                for j in 0..=db {
                    a[deg - db + j] = t.add(a[deg - db + j], t.mul(c, b[j]));
                }
            }
            if deg == 0 {
                break;
            }
            deg -= 1;
        }
        let mut dr = db;
        while dr > 0 && a[dr - 1].is_zero() {
            dr -= 1;
        }
        if dr == 0 {
            return Elem::ZERO;
        }
        let dr = dr - 1;
        if (da * db) % 2 == 1 {
            acc = t.neg(acc);
        }
        acc = t.mul(acc, t.pow(lb, (da - dr) as u64));
        for x in a.iter_mut().skip(dr + 1) {
            *x = Elem::ZERO;
        }
        std::mem::swap(&mut a, &mut b);
        da = db;
        db = dr;
    }
}

/// `Σ_{deg a < n} f(a)·ψ(coeff of T^{n-1} in a)`, grouping exact partial sums
/// by the top coefficient before the complex evaluation.
pub fn additive_residue_sum(t: &FieldTower, n: usize, f: impl Fn(&Poly) -> EisensteinValue) -> Complex64 {
    let q = t.q() as u64;
    let total = q.pow(n as u32);
    let mut by_top = vec![EisensteinInt::ZERO; q as usize];
    for idx in 0..total {
        let mut c = Vec::with_capacity(n);
        let mut r = idx;
        for _ in 0..n {
            c.push(Elem((r % q) as u32));
            r /= q;
        }
        let top = if n == 0 { 0 } else { c[n - 1].index() as usize };
        let a = Poly::from_coeffs(Level::Base, c);
        by_top[top] += f(&a).to_int();
    }
    by_top
        .iter()
        .enumerate()
        .map(|(c, s)| s.to_c64() * t.psi(Elem(c as u32)))
        .sum()
}

/// `(G(χ_F), ε(χ_F) = q^{-deg F} G(χ_F))`, summing over residues modulo the conductor.
pub fn gauss_sum_and_epsilon(t: &FieldTower, chi: &CubicCharacter) -> (Complex64, Complex64) {
    let n = chi.conductor().deg();
    let ev = chi.evaluator(t, n);
    let g = additive_residue_sum(t, n, |a| ev.value(a.coeffs()));
    let scale = (t.q() as f64).powi(chi.modulus().deg() as i32);
    (g, g / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{enumerate_monic, parse_poly, MonicFilter};
    use proptest::prelude::*;

    fn tower() -> FieldTower {
        FieldTower::new(5, 1).unwrap()
    }

    fn family(t: &FieldTower, m: usize) -> Vec<CubicCharacter> {
        enumerate_monic(t, Level::Ext, m, MonicFilter::All)
            .filter_map(|f| primitivity_and_conductor(t, &f).ok())
            .collect()
    }

    #[test]
    fn residue_symbol_basics() {
        let t = tower();
        let pi = MonicPoly::linear(&t, Level::Ext, Elem(7));
        assert_eq!(cubic_residue_symbol(&t, &pi, pi.poly()).unwrap(), EisensteinValue::Zero);
        assert_eq!(cubic_residue_symbol(&t, &pi, &Poly::one(Level::Ext)).unwrap(), EisensteinValue::ONE);
        // cubes of units mod a linear prime over F_25
        for b in t.elements(Level::Ext).skip(1) {
            let c = Poly::constant(Level::Ext, t.mul(b, t.mul(b, b)));
            let shifted = c.add(&pi.poly().scale(Elem(3), &t), &t);
            assert_eq!(cubic_residue_symbol(&t, &pi, &shifted).unwrap(), EisensteinValue::ONE);
        }
        let reducible = MonicPoly::linear(&t, Level::Ext, Elem(2)).mul(&pi, &t);
        assert_eq!(cubic_residue_symbol(&t, &reducible, &Poly::t(Level::Ext)), Err(Error::NotPrime));
    }

    #[test]
    fn residue_symbol_hits_every_class_exactly_evenly() {
        let t = tower();
        let pi = enumerate_monic(&t, Level::Ext, 2, MonicFilter::All).find(|f| is_irreducible(f, &t)).unwrap();
        let mut counts = [0usize; 3];
        for a in 1..625u64 {
            let a = Poly::from_coeffs(Level::Ext, vec![Elem((a % 25) as u32), Elem((a / 25) as u32)]);
            counts[cubic_residue_symbol(&t, &pi, &a).unwrap().exponent().unwrap() as usize] += 1;
        }
        assert_eq!(counts, [208, 208, 208]);
    }

    #[test]
    fn primitivity_examples() {
        let t = tower();
        let base_root = MonicPoly::linear(&t, Level::Ext, Elem(3));
        assert!(matches!(primitivity_and_conductor(&t, &base_root), Err(Error::HasBaseDivisor(_))));
        let p = MonicPoly::new(parse_poly("T^2-2", Level::Base, &t).unwrap()).unwrap();
        assert!(matches!(primitivity_and_conductor(&t, &p), Err(Error::HasBaseDivisor(_))));
        let sq = MonicPoly::linear(&t, Level::Ext, Elem(7)).pow(2, &t);
        assert_eq!(primitivity_and_conductor(&t, &sq).unwrap_err(), Error::NotSquarefree);
        for beta in (5..25).map(Elem) {
            let chi = primitivity_and_conductor(&t, &MonicPoly::linear(&t, Level::Ext, beta)).unwrap();
            assert_eq!(chi.conductor().deg(), 2);
            assert_eq!(chi.genus(), 0);
        }
    }

    #[test]
    fn raw_predicate_counts_q5_deg2() {
        let t = tower();
        let sf: Vec<MonicPoly> = enumerate_monic(&t, Level::Ext, 2, MonicFilter::Squarefree).collect();
        assert_eq!(sf.len(), 600);
        let no_base_prime = sf.iter().filter(|f| !has_base_prime_factor(&t, f)).count();
        let no_base_divisor = sf.iter().filter(|f| !has_base_divisor(&t, f)).count();
        assert_eq!(no_base_prime, 490);
        assert_eq!(no_base_divisor, 480);
    }

    #[test]
    fn fast_and_definitional_values_agree() {
        let t = tower();
        let fam = family(&t, 2);
        let tests: Vec<Poly> = (0..4)
            .flat_map(|d| enumerate_monic(&t, Level::Base, d, MonicFilter::All).map(|f| f.into_poly()))
            .collect();
        for chi in fam.iter().step_by(7) {
            let ev = chi.evaluator(&t, 3);
            for a in &tests {
                let v = chi.value_definitional(&t, a);
                assert_eq!(chi.value(&t, a), v);
                assert_eq!(ev.value(a.coeffs()), v);
            }
        }
        // ext-level arguments and a non-prime q
        let t3 = FieldTower::new(5, 3).unwrap();
        let f = MonicPoly::from_index(&t3, Level::Ext, 2, 987_654);
        if let Ok(chi) = primitivity_and_conductor(&t3, &f) {
            for idx in [1u64, 40, 999, 15_624, 200_000] {
                let a = MonicPoly::from_index(&t3, Level::Ext, 2, idx);
                assert_eq!(chi.value(&t3, &a), chi.value_definitional(&t3, &a));
            }
        }
    }

    #[test]
    fn constants_are_trivial_and_values_cubic() {
        let t = tower();
        for chi in family(&t, 2) {
            for c in 1..5 {
                assert_eq!(chi.value(&t, &Poly::constant(Level::Base, Elem(c))), EisensteinValue::ONE);
            }
            assert_eq!(chi.value(&t, &Poly::one(Level::Base)), EisensteinValue::ONE);
            assert_eq!(chi.value(&t, chi.conductor()), EisensteinValue::Zero);
        }
    }

    #[test]
    fn conjugate_character_has_conjugate_values() {
        let t = tower();
        for chi in family(&t, 2).iter().step_by(11) {
            let bar = chi.conjugate(&t);
            for a in enumerate_monic(&t, Level::Base, 3, MonicFilter::All) {
                assert_eq!(bar.value(&t, &a), chi.value(&t, &a).conj());
            }
        }
    }

    #[test]
    fn omega_choice_conjugates_values() {
        let t = tower();
        let tc = t.with_conjugate_omega();
        for chi in family(&t, 2).iter().step_by(13) {
            for a in enumerate_monic(&t, Level::Base, 2, MonicFilter::All) {
                assert_eq!(chi.value(&tc, &a), chi.value(&t, &a).conj());
            }
        }
    }

    #[test]
    fn trivial_function_residue_sum_vanishes() {
        let t = tower();
        for n in 1..=4 {
            assert!(additive_residue_sum(&t, n, |_| EisensteinValue::ONE).norm() < 1e-9);
        }
    }

    #[test]
    fn gauss_sum_modulus_g2_brute_force() {
        let t = tower();
        let fam = family(&t, 2);
        assert_eq!(fam.len(), 480);
        for chi in &fam {
            // plain 625-term sum as an oracle for the grouped kernel
            let n = chi.conductor().deg();
            let mut brute = Complex64::new(0.0, 0.0);
            for idx in 0..625u32 {
                let c: Vec<Elem> = (0..n).map(|i| Elem(idx / 5u32.pow(i as u32) % 5)).collect();
                let a = Poly::from_coeffs(Level::Base, c.clone());
                brute += chi.value_definitional(&t, &a).to_c64() * t.psi(c[n - 1]);
            }
            let (g, eps) = gauss_sum_and_epsilon(&t, chi);
            assert!((g - brute).norm() < 1e-9);
            assert!((g.norm() - 25.0).abs() / 25.0 < 1e-6);
            assert!(((eps * eps.conj()).re - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn chi_d_of_base_polynomials_is_trivial_small() {
        let t = tower();
        for d in enumerate_monic(&t, Level::Base, 2, MonicFilter::All) {
            for f in enumerate_monic(&t, Level::Base, 2, MonicFilter::All) {
                if !d.gcd(&f, &t).is_one() {
                    continue;
                }
                let r = crate::poly::resultant(&d.to_ext(), &f.to_ext(), &t);
                assert_eq!(cubic_class(&t, r), EisensteinValue::ONE);
            }
        }
    }

    proptest! {
        #[test]
        fn multiplicative_and_periodic(fi in 0u64..625, a in 0u64..3125, b in 0u64..625, s in 0u64..25) {
            let t = tower();
            let f = MonicPoly::from_index(&t, Level::Ext, 2, fi);
            let chi = match primitivity_and_conductor(&t, &f) { Ok(c) => c, Err(_) => return Ok(()) };
            let a = MonicPoly::from_index(&t, Level::Base, 5, a);
            let b = MonicPoly::from_index(&t, Level::Base, 4, b);
            let ab = a.mul(&b, &t);
            prop_assert_eq!(chi.value(&t, &ab), chi.value(&t, &a) * chi.value(&t, &b));
            let shift = MonicPoly::from_index(&t, Level::Base, 2, s);
            let a2 = a.add(&chi.conductor().mul(&shift, &t), &t);
            prop_assert_eq!(chi.value(&t, &a2), chi.value(&t, &a));
            if let Some(e) = chi.value(&t, &a).exponent() {
                prop_assert_eq!(EisensteinValue::Root(e).pow(3), EisensteinValue::ONE);
            }
        }
    }
}
