//! Property suites over a family, shared by the CLI and the acceptance run.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::character::{gauss_sum_and_epsilon, CubicCharacter};
use crate::constants::{
    cube_sum_alternative, cube_sum_series, harmonic_fit, local_factor_gp, local_prefactor, product_p, product_s, Convergence,
    GpMode,
};
use crate::dds::chi_d_triviality_scan;
use crate::error::Result;
use crate::family::Family;
use crate::field::FieldTower;
use crate::lfunc::{functional_equation_residual, l_polynomial_euler, verify_riemann_hypothesis, BasePrimes};
use crate::poly::format_poly;
use crate::report::Num;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub cases: u64,
    pub worst: Num,
    pub tolerance: Num,
    pub pass: bool,
    pub detail: String,
}

impl SuiteResult {
    fn new(suite: &str, cases: u64, worst: f64, tolerance: f64, detail: String) -> SuiteResult {
        SuiteResult { suite: suite.into(), cases, worst: Num(worst), tolerance: Num(tolerance), pass: worst < tolerance, detail }
    }
}

pub const GAUSS_TOLERANCE: f64 = 1e-6;
pub const FE_TOLERANCE: f64 = 1e-9;
pub const RH_TOLERANCE: f64 = 1e-8;

fn characters(t: &FieldTower, family: &Family) -> Vec<CubicCharacter> {
    family.characters(t).collect()
}

/// `(F, | |G(χ_F)| - q^{deg F} | / q^{deg F})` for every member.
pub fn gauss_deviations(t: &FieldTower, family: &Family) -> Result<Vec<(String, f64)>> {
    let chars = characters(t, family);
    Ok(chars
        .par_iter()
        .map(|chi| {
            let (gs, _) = gauss_sum_and_epsilon(t, chi);
            let expect = (t.q() as f64).powi(chi.modulus().deg() as i32);
            (format_poly(chi.modulus(), t), (gs.norm() - expect).abs() / expect)
        })
        .collect())
}

pub fn gauss_suite(t: &FieldTower, family: &Family) -> Result<SuiteResult> {
    let rows = gauss_deviations(t, family)?;
    let worst = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(SuiteResult::new("gauss", rows.len() as u64, worst, GAUSS_TOLERANCE, "max | |G|/q^deg F - 1 |".into()))
}

/// Functional-equation residual per member.
pub fn fe_residuals(t: &FieldTower, family: &Family) -> Result<Vec<(String, f64)>> {
    let chars = characters(t, family);
    let primes = BasePrimes::new(t, 2 * family.degree);
    Ok(chars
        .par_iter()
        .map(|chi| {
            let l = l_polynomial_euler(t, chi, &primes);
            let lbar = l_polynomial_euler(t, &chi.conjugate(t), &primes);
            let (_, eps) = gauss_sum_and_epsilon(t, chi);
            let r = functional_equation_residual(t.q(), chi.modulus().deg() as u32, &l, &lbar, eps);
            (format_poly(chi.modulus(), t), r)
        })
        .collect())
}

pub fn fe_suite(t: &FieldTower, family: &Family) -> Result<SuiteResult> {
    let rows = fe_residuals(t, family)?;
    let worst = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(SuiteResult::new("fe", rows.len() as u64, worst, FE_TOLERANCE, "max relative residual over the fixed sample points".into()))
}

pub fn rh_deviations(t: &FieldTower, family: &Family) -> Result<Vec<(String, f64)>> {
    let chars = characters(t, family);
    let primes = BasePrimes::new(t, 2 * family.degree);
    chars
        .par_iter()
        .map(|chi| {
            let l = l_polynomial_euler(t, chi, &primes).complete()?;
            Ok((format_poly(chi.modulus(), t), verify_riemann_hypothesis(t.q(), &l)?))
        })
        .collect()
}

pub fn rh_suite(t: &FieldTower, family: &Family) -> Result<SuiteResult> {
    let rows = rh_deviations(t, family)?;
    let worst = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(SuiteResult::new("rh", rows.len() as u64, worst, RH_TOLERANCE, "max | |root| q^(1/2) - 1 |".into()))
}

pub fn chi_d_suite(t: &FieldTower, max_deg: usize) -> SuiteResult {
    let rep = chi_d_triviality_scan(t, max_deg);
    let detail = match &rep.counterexample {
        None => format!("{} coprime of {} ordered pairs, deg <= {}", rep.coprime_pairs, rep.pairs, max_deg),
        Some((d, f)) => format!("counterexample D = {d}, F = {f}"),
    };
    SuiteResult::new("chi-d", rep.coprime_pairs, if rep.pass { 0.0 } else { 1.0 }, 0.5, detail)
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalFactorChecks {
    pub inert_prefactor_exact: bool,
    pub split_prefactor_exact: bool,
    pub gp_closed_vs_series: f64,
    /// Smallest gap between the alternative `(1-x²)²` display and the series.
    pub alternative_denominator_gap: f64,
    pub p_truncation_gap: f64,
    pub p_in_unit_interval: bool,
    pub s_harmonic_fit: f64,
    pub s_flag_at_half: Convergence,
    pub s_small_v_gap: f64,
    pub s_small_v_flag: Convergence,
}

pub const GP_TOLERANCE: f64 = 1e-12;
pub const P_TOLERANCE: f64 = 1e-8;
pub const S_STABILITY: f64 = 1e-10;

/// The local-factor oracles at `q` (and at 11 for the P truncation).
pub fn local_factor_checks(q: u64) -> Result<LocalFactorChecks> {
    let inert = [1u32, 3, 5, 7].iter().all(|&n| local_prefactor(q, n).is_one());
    let split = [2u32, 4].iter().all(|&n| {
        let two = BigRational::from_integer(BigInt::from(2));
        let qn = BigRational::from_integer(BigInt::from(q).pow(n));
        local_prefactor(q, n) == BigRational::one() / (BigRational::one() + two / qn)
    });
    let mut gp_gap: f64 = 0.0;
    let mut alt_gap = f64::INFINITY;
    for x in [0.05, 0.1, 0.2, 0.3] {
        for n in [1u32, 2] {
            let v = Complex64::new(x, 0.0).powf(1.0 / n as f64);
            let a = local_factor_gp(q, n, v, GpMode::Closed)?;
            let b = local_factor_gp(q, n, v, GpMode::Series)?;
            gp_gap = gp_gap.max((a - b).norm());
        }
        let s = cube_sum_series(Complex64::new(x, 0.0), 0, true)?;
        alt_gap = alt_gap.min((cube_sum_alternative(Complex64::new(x, 0.0)) - s).norm());
    }
    let mut p_gap: f64 = 0.0;
    let mut unit = true;
    for qq in [q, 11] {
        let u = Complex64::new((qq as f64).powi(-2), 0.0);
        let a = product_p(qq, u, 12)?.value;
        let b = product_p(qq, u, 16)?.value;
        p_gap = p_gap.max((a - b).norm());
        unit &= a.re > 0.0 && a.re < 1.0;
    }
    let half = product_s(q, Complex64::new((q as f64).powf(-0.5), 0.0), 12);
    let s10 = product_s(q, Complex64::new(0.05, 0.0), 10);
    let s14 = product_s(q, Complex64::new(0.05, 0.0), 14);
    Ok(LocalFactorChecks {
        inert_prefactor_exact: inert,
        split_prefactor_exact: split,
        gp_closed_vs_series: gp_gap,
        alternative_denominator_gap: alt_gap,
        p_truncation_gap: p_gap,
        p_in_unit_interval: unit,
        s_harmonic_fit: harmonic_fit(&half.log_increments, 4, 12),
        s_flag_at_half: half.convergence,
        s_small_v_gap: (s10.value - s14.value).norm(),
        s_small_v_flag: s14.convergence,
    })
}

impl LocalFactorChecks {
    pub fn pass(&self) -> bool {
        self.inert_prefactor_exact
            && self.split_prefactor_exact
            && self.gp_closed_vs_series < GP_TOLERANCE
            && self.alternative_denominator_gap > 1e-6
            && self.p_truncation_gap < P_TOLERANCE
            && self.p_in_unit_interval
            && (0.7..=1.3).contains(&self.s_harmonic_fit)
            && self.s_flag_at_half == Convergence::NonConvergent
            && self.s_small_v_gap < S_STABILITY
            && self.s_small_v_flag == Convergence::Convergent
    }
}

pub fn local_factor_suite(q: u64) -> Result<SuiteResult> {
    let c = local_factor_checks(q)?;
    let detail = format!(
        "prefactors exact: {}/{}; G_P gap {:.1e}; (1-x^2)^2 form off by >= {:.1e}; P gap {:.1e}; S fit c = {:.3}, flag {:?}; S(0.05) gap {:.1e}",
        c.inert_prefactor_exact,
        c.split_prefactor_exact,
        c.gp_closed_vs_series,
        c.alternative_denominator_gap,
        c.p_truncation_gap,
        c.s_harmonic_fit,
        c.s_flag_at_half,
        c.s_small_v_gap
    );
    Ok(SuiteResult::new("local-factors", 1, if c.pass() { 0.0 } else { 1.0 }, 0.5, detail))
}
