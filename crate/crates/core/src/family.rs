//! The genus-`g` family and the exact twisted second moment.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::character::{coprime_small, primitivity_and_conductor, CharEvaluator, CubicCharacter};
use crate::eisenstein::{EisensteinInt, EisensteinValue};
use crate::error::{Error, Result};
use crate::field::{FieldTower, Level};
use crate::lfunc::{euler_step, BasePrimes};
use crate::poly::{MonicPoly, Poly};

#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub g: u32,
    pub h1: MonicPoly,
    pub h2: MonicPoly,
}

impl FamilySpec {
    pub fn new(g: u32, h1: MonicPoly, h2: MonicPoly) -> Result<FamilySpec> {
        if g % 2 == 1 {
            return Err(Error::OddGenus(g));
        }
        if h1.level() != Level::Base || h2.level() != Level::Base {
            return Err(Error::LevelMismatch("twists must be polynomials over F_q"));
        }
        Ok(FamilySpec { g, h1, h2 })
    }

    pub fn untwisted(g: u32) -> Result<FamilySpec> {
        FamilySpec::new(g, MonicPoly::one(Level::Base), MonicPoly::one(Level::Base))
    }

    /// `deg F = g/2 + 1`.
    pub fn modulus_degree(&self) -> usize {
        self.g as usize / 2 + 1
    }
}

/// Accepted moduli of one degree, as indices into the canonical enumeration of
/// monic extension-level polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub degree: usize,
    pub members: Vec<u64>,
}

impl Family {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn modulus(&self, t: &FieldTower, i: usize) -> MonicPoly {
        MonicPoly::from_index(t, Level::Ext, self.degree, self.members[i])
    }

    pub fn characters<'a>(&'a self, t: &'a FieldTower) -> impl Iterator<Item = CubicCharacter> + 'a {
        self.members.iter().map(move |&i| {
            primitivity_and_conductor(t, &MonicPoly::from_index(t, Level::Ext, self.degree, i)).expect("member is primitive")
        })
    }
}

pub(crate) fn is_member(t: &FieldTower, f: &Poly) -> bool {
    if f.deg() >= 1 {
        let d: Vec<_> = f.derivative(t).coeffs().to_vec();
        if let (Some(sq), Some(cp)) = (coprime_small(t, f.coeffs(), &d), coprime_small(t, f.coeffs(), f.conj(t).coeffs())) {
            return sq && cp;
        }
    }
    let d = f.derivative(t);
    if d.is_zero() || f.gcd(&d, t).deg() > 0 {
        return false;
    }
    f.gcd(&f.conj(t), t).deg() == 0
}

/// Every primitive modulus of degree `g/2 + 1`, in canonical order.
pub fn enumerate_family(t: &FieldTower, g: u32) -> Result<Family> {
    if g % 2 == 1 {
        return Err(Error::OddGenus(g));
    }
    let degree = g as usize / 2 + 1;
    let total = (t.ext_size() as u64).pow(degree as u32);
    let chunk = 4096u64;
    let nchunks = total.div_ceil(chunk);
    let members: Vec<u64> = (0..nchunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let lo = c * chunk;
            let hi = (lo + chunk).min(total);
            (lo..hi).filter(move |&i| is_member(t, &MonicPoly::from_index(t, Level::Ext, degree, i)))
        })
        .collect();
    Ok(Family { degree, members })
}

/// Exact moment `Σ_k A_k x^k` in `x = q^{-1/2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentPolynomial {
    pub coeffs: Vec<EisensteinInt>,
    pub family_size: u64,
    pub zero_twist_count: u64,
}

impl MomentPolynomial {
    pub fn zero(g: u32) -> MomentPolynomial {
        MomentPolynomial { coeffs: vec![EisensteinInt::ZERO; 2 * g as usize + 3], family_size: 0, zero_twist_count: 0 }
    }

    pub fn merge(mut self, o: &MomentPolynomial) -> MomentPolynomial {
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a += *b;
        }
        self.family_size += o.family_size;
        self.zero_twist_count += o.zero_twist_count;
        self
    }

    pub fn conj(&self) -> MomentPolynomial {
        MomentPolynomial { coeffs: self.coeffs.iter().map(|c| c.conj()).collect(), ..self.clone() }
    }

    /// `(E, O, H)` with `value = (E + O/√q) / q^H`, all exact.
    pub fn exact_parts(&self, q: u32) -> (EisensteinInt, EisensteinInt, u32) {
        let h = (self.coeffs.len() / 2) as u32;
        let qi = q as i128;
        let mut e = EisensteinInt::ZERO;
        let mut o = EisensteinInt::ZERO;
        for (k, &c) in self.coeffs.iter().enumerate() {
            let k = k as u32;
            if k.is_multiple_of(2) {
                e += c * qi.pow(h - k / 2);
            } else {
                o += c * qi.pow(h - (k - 1) / 2);
            }
        }
        (e, o, h)
    }

    /// Value at `x = q^{-1/2}`.
    pub fn evaluate(&self, q: u32) -> Complex64 {
        let (e, o, h) = self.exact_parts(q);
        let qf = q as f64;
        (e.to_c64() + o.to_c64() / qf.sqrt()) / qf.powi(h as i32)
    }

    /// Plain Horner evaluation, for comparison with [`Self::evaluate`].
    pub fn evaluate_horner(&self, q: u32) -> Complex64 {
        let x = (q as f64).powf(-0.5);
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_c64())
    }
}

/// Per-family state shared by the workers.
pub struct MomentEngine<'a> {
    t: &'a FieldTower,
    spec: FamilySpec,
    primes: BasePrimes,
}

impl<'a> MomentEngine<'a> {
    pub fn new(t: &'a FieldTower, spec: FamilySpec) -> MomentEngine<'a> {
        let primes = BasePrimes::new(t, spec.g as usize + 1);
        MomentEngine { t, spec, primes }
    }

    pub fn with_primes(t: &'a FieldTower, spec: FamilySpec, primes: BasePrimes) -> MomentEngine<'a> {
        assert!(primes.max_degree() > spec.g as usize);
        MomentEngine { t, spec, primes }
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    fn evaluator(&self, f: &Poly) -> CharEvaluator<'a> {
        let max = (self.spec.g as usize + 1).max(self.spec.h1.deg()).max(self.spec.h2.deg());
        CharEvaluator::new(self.t, f, max)
    }

    /// `χ_F(h1)·conj χ_F(h2)`.
    pub fn twist(&self, ev: &CharEvaluator) -> EisensteinValue {
        ev.value(self.spec.h1.coeffs()) * ev.value(self.spec.h2.coeffs()).conj()
    }

    /// L-coefficients `c_0..c_{g+1}` of `χ_F` from the Euler product.
    pub fn l_coefficients(&self, ev: &CharEvaluator) -> Vec<EisensteinInt> {
        let g = self.spec.g as usize;
        let mut c = vec![EisensteinInt::ZERO; g + 2];
        c[0] = EisensteinInt::ONE;
        for d in 1..=g + 1 {
            for p in &self.primes.by_degree[d] {
                euler_step(&mut c, d, ev.value(p));
            }
        }
        c
    }

    /// Adds the summand of one modulus to `acc`.
    pub fn accumulate_one(&self, f: &Poly, acc: &mut MomentPolynomial) {
        let ev = self.evaluator(f);
        acc.family_size += 1;
        let e = match self.twist(&ev) {
            EisensteinValue::Zero => {
                acc.zero_twist_count += 1;
                return;
            }
            EisensteinValue::Root(e) => e,
        };
        let c = self.l_coefficients(&ev);
        for (n, cn) in c.iter().enumerate() {
            if cn.is_zero() {
                continue;
            }
            let cn = cn.mul_omega_pow(e);
            for (m, cm) in c.iter().enumerate() {
                acc.coeffs[n + m] += cn * cm.conj();
            }
        }
    }

    pub fn accumulate(&self, family: &Family, range: std::ops::Range<usize>) -> MomentPolynomial {
        let mut acc = MomentPolynomial::zero(self.spec.g);
        for &i in &family.members[range] {
            let f = MonicPoly::from_index(self.t, Level::Ext, family.degree, i);
            self.accumulate_one(&f, &mut acc);
        }
        acc
    }

    /// Splits the family into `shards` contiguous ranges, accumulates them in
    /// parallel and combines the exact partial sums in shard order.
    pub fn moment(&self, family: &Family, shards: usize) -> MomentPolynomial {
        let n = family.len();
        let shards = shards.max(1);
        let bounds: Vec<(usize, usize)> = (0..shards).map(|s| (s * n / shards, (s + 1) * n / shards)).collect();
        let parts: Vec<MomentPolynomial> = bounds.par_iter().map(|&(lo, hi)| self.accumulate(family, lo..hi)).collect();
        parts.iter().fold(MomentPolynomial::zero(self.spec.g), |acc, p| acc.merge(p))
    }
}

/// Shard count used when the caller does not choose one.
pub fn default_shards() -> usize {
    4 * rayon::current_num_threads()
}

/// Enumerates the family and computes the exact moment.
pub fn twisted_second_moment(t: &FieldTower, spec: &FamilySpec) -> Result<(Family, MomentPolynomial)> {
    let family = enumerate_family(t, spec.g)?;
    let engine = MomentEngine::new(t, spec.clone());
    let m = engine.moment(&family, default_shards());
    Ok((family, m))
}
