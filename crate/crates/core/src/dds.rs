//! Numeric exploration of the double Dirichlet series
//! `A₂(u, v) = Σ_F χ_F(h1) χ̄_F(h2) L(v, χ_F) L(v̄, χ̄_F) u^{deg F}`.
//!
//! Here `u = q^{-2s}` and `v = q^{-w}`. The F-side sums run over the accepted
//! moduli of every degree, including `F = 1`. The rearranged side sums over
//! `N1, N2` and takes Euler products over the primes of `F_{q²}[T]`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::character::{residue_symbol_unchecked, CharEvaluator};
use crate::eisenstein::{omega_c64, EisensteinInt, EisensteinValue};
use crate::error::{Error, Result};
use crate::family::is_member;
use crate::field::{FieldTower, Level};
use crate::lfunc::{euler_step, BasePrimes};
use crate::poly::{enumerate_monic, factorize, moebius, monic_count, split_equal_degree, MonicFilter, MonicPoly, Poly};

/// Degree cutoffs: `m_f` for F, `m_n` for `N1, N2`, `m_d` for the prime products.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DdsCutoffs {
    pub m_f: usize,
    pub m_n: usize,
    pub m_d: usize,
}

#[derive(Clone, Debug)]
pub struct DdsConfig {
    pub h1: MonicPoly,
    pub h2: MonicPoly,
    pub u: Complex64,
    pub v: Complex64,
    pub cutoffs: DdsCutoffs,
}

/// `u = q^{-2s}`.
pub fn u_from_s(q: u32, s: Complex64) -> Complex64 {
    (-2.0 * s * (q as f64).ln()).exp()
}

/// `v = q^{-w}`.
pub fn v_from_w(q: u32, w: Complex64) -> Complex64 {
    (-w * (q as f64).ln()).exp()
}

impl DdsConfig {
    pub fn new(h1: MonicPoly, h2: MonicPoly, u: Complex64, v: Complex64, cutoffs: DdsCutoffs) -> Result<DdsConfig> {
        if h1.level() != Level::Base || h2.level() != Level::Base {
            return Err(Error::LevelMismatch("twists must be polynomials over F_q"));
        }
        Ok(DdsConfig { h1, h2, u, v, cutoffs })
    }

    pub fn from_s_w(q: u32, h1: MonicPoly, h2: MonicPoly, s: Complex64, w: Complex64, cutoffs: DdsCutoffs) -> Result<DdsConfig> {
        DdsConfig::new(h1, h2, u_from_s(q, s), v_from_w(q, w), cutoffs)
    }

    pub fn untwisted(u: Complex64, v: Complex64, cutoffs: DdsCutoffs) -> DdsConfig {
        DdsConfig { h1: MonicPoly::one(Level::Base), h2: MonicPoly::one(Level::Base), u, v, cutoffs }
    }
}

/// `T[i][j] = Σ_{deg F = m} χ_F(h1) χ̄_F(h2) c_i(χ_F) conj c_j(χ_F)` for `i, j ≤ n_max`,
/// where `c_n = Σ_{deg N = n} χ_F(N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BilinearTable {
    pub degree: usize,
    pub n_max: usize,
    pub entries: Vec<Vec<EisensteinInt>>,
    pub members: u64,
}

impl BilinearTable {
    /// `Σ T[i][j] v^i v̄^j`.
    pub fn evaluate(&self, v: Complex64) -> Complex64 {
        let vb = v.conj();
        let mut total = Complex64::new(0.0, 0.0);
        let mut vi = Complex64::new(1.0, 0.0);
        for row in &self.entries {
            let mut inner = Complex64::new(0.0, 0.0);
            let mut vj = Complex64::new(1.0, 0.0);
            for e in row {
                inner += e.to_c64() * vj;
                vj *= vb;
            }
            total += inner * vi;
            vi *= v;
        }
        total
    }
}

/// Builds [`BilinearTable`] for moduli of degree `m`, coefficients through `n_max`.
pub fn bilinear_table(t: &FieldTower, h1: &MonicPoly, h2: &MonicPoly, m: usize, n_max: usize) -> BilinearTable {
    let size = n_max + 1;
    let zero_table = || vec![vec![EisensteinInt::ZERO; size]; size];
    if m == 0 {
        // F = 1: the trivial character, c_n = q^n
        let c: Vec<EisensteinInt> = (0..size).map(|n| EisensteinInt::new((t.q() as i128).pow(n as u32), 0)).collect();
        let mut entries = zero_table();
        for i in 0..size {
            for j in 0..size {
                entries[i][j] = c[i] * c[j];
            }
        }
        return BilinearTable { degree: 0, n_max, entries, members: 1 };
    }
    let primes = BasePrimes::new(t, n_max);
    let max_deg = n_max.max(h1.deg()).max(h2.deg());
    let total = monic_count(t, Level::Ext, m);
    let chunk = 4096u64;
    let parts: Vec<(Vec<Vec<EisensteinInt>>, u64)> = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|k| {
            let mut acc = zero_table();
            let mut members = 0u64;
            for idx in k * chunk..((k + 1) * chunk).min(total) {
                let f = MonicPoly::from_index(t, Level::Ext, m, idx);
                if !is_member(t, &f) {
                    continue;
                }
                members += 1;
                let ev = CharEvaluator::new(t, &f, max_deg);
                let e = match ev.value(h1.coeffs()) * ev.value(h2.coeffs()).conj() {
                    EisensteinValue::Zero => continue,
                    EisensteinValue::Root(e) => e,
                };
                let mut c = vec![EisensteinInt::ZERO; size];
                c[0] = EisensteinInt::ONE;
                for d in 1..=n_max {
                    for p in &primes.by_degree[d] {
                        euler_step(&mut c, d, ev.value(p));
                    }
                }
                for i in 0..size {
                    if c[i].is_zero() {
                        continue;
                    }
                    let ci = c[i].mul_omega_pow(e);
                    for j in 0..size {
                        acc[i][j] += ci * c[j].conj();
                    }
                }
            }
            (acc, members)
        })
        .collect();
    let mut entries = zero_table();
    let mut members = 0;
    for (p, n) in parts {
        members += n;
        for i in 0..size {
            for j in 0..size {
                entries[i][j] += p[i][j];
            }
        }
    }
    BilinearTable { degree: m, n_max, entries, members }
}

/// Coefficient of `u^m` in `A₂(u, v)`: the sum over accepted F of degree `m`
/// of `χ_F(h1) χ̄_F(h2) L(v, χ_F) L(v̄, χ̄_F)`. For `m = 0` this is
/// `ζ_q(v) ζ_q(v̄)`, which needs `|qv| < 1`.
pub fn a2_series_coefficient(t: &FieldTower, cfg: &DdsConfig, m: usize) -> Result<Complex64> {
    if m == 0 {
        let z = t.q() as f64 * cfg.v;
        if z.norm() >= 1.0 {
            return Err(Error::PoleAt);
        }
        return Ok(1.0 / (1.0 - z) / (1.0 - z.conj()));
    }
    Ok(bilinear_table(t, &cfg.h1, &cfg.h2, m, 2 * m - 1).evaluate(cfg.v))
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectSum {
    /// `u^m Σ_{deg F = m} …` with both N-sums cut at degree `m_n`.
    #[serde(skip)]
    pub by_degree: Vec<Complex64>,
    #[serde(skip)]
    pub value: Complex64,
}

/// `Σ_{deg F ≤ m_f} χ_F(h1) χ̄_F(h2) u^{deg F} Σ_{deg N1, deg N2 ≤ m_n} χ_F(N1) χ̄_F(N2) v^{deg N1} v̄^{deg N2}`.
pub fn a2_direct_truncation(t: &FieldTower, cfg: &DdsConfig) -> DirectSum {
    let DdsCutoffs { m_f, m_n, .. } = cfg.cutoffs;
    let by_degree: Vec<Complex64> = (0..=m_f)
        .map(|m| bilinear_table(t, &cfg.h1, &cfg.h2, m, m_n).evaluate(cfg.v) * cfg.u.powu(m as u32))
        .collect();
    let value = by_degree.iter().sum();
    DirectSum { by_degree, value }
}

/// How many positions give `a + b ≡ 0, 1, 2 (mod 3)`, and how many have a zero
/// marker (3) on either side.
fn count_exponents(a: &[u8], b: &[u8]) -> [u32; 4] {
    let (mut c0, mut c1, mut zero) = (0u32, 0u32, 0u32);
    for (x, y) in a.iter().zip(b) {
        let z = (*x == 3) | (*y == 3);
        let s = x + y;
        let s = if s >= 3 { s - 3 } else { s };
        zero += z as u32;
        c0 += (!z & (s == 0)) as u32;
        c1 += (!z & (s == 1)) as u32;
    }
    let n = a.len() as u32;
    [c0, c1, n - c0 - c1 - zero, zero]
}

/// A prime of `F_q[T]` together with one prime `P₂` of `F_{q²}[T]` above it.
#[derive(Clone, Debug)]
struct ExtPrime {
    base_degree: u32,
    split: bool,
    above: Poly,
}

/// Primes `P₂` of degree at most `m_d`, grouped by the base prime below.
fn ext_primes(t: &FieldTower, m_d: usize) -> Vec<ExtPrime> {
    let primes = BasePrimes::new(t, 2 * m_d);
    let mut out = Vec::new();
    for (d, coeffs) in primes.iter() {
        let p = Poly::from_coeffs(Level::Base, coeffs.to_vec());
        if d % 2 == 1 {
            if d <= m_d {
                out.push(ExtPrime { base_degree: d as u32, split: false, above: p.to_ext() });
            }
        } else {
            // a split prime is the product of two conjugate primes of half the degree
            let first = split_equal_degree(t, &p.to_ext(), d / 2).into_iter().min_by_key(|f| f.monic_index(t)).expect("two factors");
            out.push(ExtPrime { base_degree: d as u32, split: true, above: first });
        }
    }
    out
}

/// The local factor at one base prime `P₁` of
/// `L_{q²}(u, χ)/L_{q²}(u², χ̄) · P(u, χ) · (1 - u^{deg P₁})^{-[P₁ | M]}`
/// when `χ_{P₂}(M) = ϖ^k` (or `χ_{P₂}(M) = 0` for `k = None`).
fn local_mobius_factor(u: Complex64, base_degree: u32, split: bool, k: Option<u8>) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let ud = u.powu(base_degree);
    let Some(k) = k else {
        // P(u, χ) contributes 1 - u^d, cancelled by the (1 - u^d)^{-1} correction
        return one;
    };
    let c = omega_c64().powu(k as u32);
    let ratio = if split {
        // P₂ and P₂^σ, with χ_{P₂^σ}(M) = conj χ_{P₂}(M)
        let ue = u.powu(base_degree / 2);
        (one + c * ue) * (one + c.conj() * ue)
    } else {
        one + c * ud
    };
    ratio * (one - ud / ratio)
}

#[derive(Clone, Debug, Serialize)]
pub struct MobiusSum {
    #[serde(skip)]
    pub value: Complex64,
    pub tail_bound: f64,
    pub pair_count: usize,
    pub prime_count: usize,
}

/// The rearranged representation
/// `Σ_{N1,N2} v^{deg N1} v̄^{deg N2} · L_{q²}(u,χ^{(hN)})/L_{q²}(u²,χ̄^{(hN)}) · P(u,χ^{(hN)}) · Π_{P₁|hN} (1 - u^{deg P₁})^{-1}`
/// with `χ^{(hN)}(P₂) = χ_{P₂}(h1 h2² N1 N2²)`, `N1, N2` up to degree `m_n` and
/// Euler products over primes `P₂` of degree at most `m_d`.
pub fn a2_mobius_representation(t: &FieldTower, cfg: &DdsConfig, tolerance: Option<f64>) -> Result<MobiusSum> {
    let DdsCutoffs { m_n, m_d, .. } = cfg.cutoffs;
    let q = t.q() as f64;
    let r = q * q * cfg.u.norm();
    if r >= 1.0 {
        return Err(Error::OutOfRegion(format!("|u| = {} is not below q^-2", cfg.u.norm())));
    }
    let ns: Vec<MonicPoly> = (0..=m_n).flat_map(|d| enumerate_monic(t, Level::Base, d, MonicFilter::All)).collect();
    let primes = ext_primes(t, m_d);
    let max_deg = m_n.max(cfg.h1.deg()).max(cfg.h2.deg());

    // exponent of χ_{P₂}(·) on h = h1 h2² and on each N; 3 marks a zero value
    const ZERO: u8 = 3;
    let exp_of = |v: EisensteinValue| v.exponent().unwrap_or(ZERO);
    let add = |a: u8, b: u8| if a == ZERO || b == ZERO { ZERO } else { (a + b) % 3 };
    // χ_{P₂} is evaluated on the primes of degree ≤ m_n and extended to each N
    // through its factorization
    let small = BasePrimes::new(t, m_n);
    let small_pos: std::collections::HashMap<(usize, u64), usize> = small
        .iter()
        .enumerate()
        .map(|(i, (d, c))| ((d, Poly::from_coeffs(Level::Base, c.to_vec()).monic_index(t)), i))
        .collect();
    let n_factors: Vec<Vec<(usize, u32)>> = ns
        .iter()
        .map(|n| factorize(t, n).factors.iter().map(|(p, e)| (small_pos[&(p.deg(), p.monic_index(t))], *e)).collect())
        .collect();
    let per_prime: Vec<(u8, Vec<u8>)> = primes
        .par_iter()
        .map(|p| {
            let ev = CharEvaluator::new(t, &p.above, max_deg);
            let h = add(exp_of(ev.value(cfg.h1.coeffs())), exp_of(ev.value(cfg.h2.coeffs()).pow(2)));
            let on_small: Vec<u8> = small.iter().map(|(_, c)| exp_of(ev.value(c))).collect();
            let on_n = n_factors
                .iter()
                .map(|fac| fac.iter().fold(0u8, |acc, &(i, e)| (0..e).fold(acc, |a, _| add(a, on_small[i]))))
                .collect();
            (h, on_n)
        })
        .collect();
    // column-major: with_h[i][p] is the exponent on h·N_i, doubled[j][p] on N_j²
    let with_h: Vec<Vec<u8>> = (0..ns.len()).map(|i| per_prime.iter().map(|(h, n)| add(*h, n[i])).collect()).collect();
    let doubled: Vec<Vec<u8>> = (0..ns.len()).map(|j| per_prime.iter().map(|(_, n)| add(n[j], n[j])).collect()).collect();

    // local factors depend only on (degree, split, k); primes come sorted by
    // base degree, so each class is a contiguous range
    let mut ranges: Vec<(u32, bool, std::ops::Range<usize>)> = Vec::new();
    for (i, p) in primes.iter().enumerate() {
        match ranges.last_mut() {
            Some((d, s, r)) if *d == p.base_degree && *s == p.split => r.end = i + 1,
            _ => ranges.push((p.base_degree, p.split, i..i + 1)),
        }
    }
    let table: Vec<[Complex64; 4]> = ranges
        .iter()
        .map(|&(d, split, _)| {
            let mut row = [Complex64::new(1.0, 0.0); 4];
            for k in 0..3u8 {
                row[k as usize] = local_mobius_factor(cfg.u, d, split, Some(k));
            }
            row[ZERO as usize] = local_mobius_factor(cfg.u, d, split, None);
            row
        })
        .collect();

    let vb = cfg.v.conj();
    let rows: Vec<(Complex64, f64)> = (0..ns.len())
        .into_par_iter()
        .map(|i| {
            let mut sum = Complex64::new(0.0, 0.0);
            let mut abs_sum = 0.0;
            let a = &with_h[i];
            for j in 0..ns.len() {
                let b = &doubled[j];
                let mut x = Complex64::new(1.0, 0.0);
                for (cl, (_, _, range)) in ranges.iter().enumerate() {
                    let cnt = count_exponents(&a[range.clone()], &b[range.clone()]);
                    for k in 0..4 {
                        if cnt[k] > 0 {
                            x *= table[cl][k].powi(cnt[k] as i32);
                        }
                    }
                }
                let w = cfg.v.powu(ns[i].deg() as u32) * vb.powu(ns[j].deg() as u32);
                sum += w * x;
                abs_sum += (w * x).norm();
            }
            (sum, abs_sum)
        })
        .collect();
    let value: Complex64 = rows.iter().map(|r| r.0).sum();
    let weight: f64 = rows.iter().map(|r| r.1).sum();
    // primes of degree > m_d: Σ_{e > m_d} 2 q^{2e} |u|^e / e
    let tau = 2.0 * r.powi(m_d as i32 + 1) / ((m_d as f64 + 1.0) * (1.0 - r));
    let tail_bound = weight * tau.exp_m1();
    if let Some(tol) = tolerance {
        if tail_bound > tol {
            return Err(Error::TailTooLarge { tail: tail_bound, tolerance: tol });
        }
    }
    Ok(MobiusSum { value, tail_bound, pair_count: ns.len() * ns.len(), prime_count: primes.len() })
}

/// `Σ_{D | F, D ∈ F_q[T] monic} μ(D)` for an extension-level `F`.
pub fn base_divisor_moebius_sum(t: &FieldTower, f: &MonicPoly) -> i32 {
    (0..=f.deg())
        .flat_map(|d| enumerate_monic(t, Level::Base, d, MonicFilter::All))
        .filter(|d| d.to_ext().divides(f, t))
        .map(|d| moebius(&d, t))
        .sum()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Growth {
    #[serde(rename = "decaying")]
    Decaying,
    #[serde(rename = "flat")]
    Flat,
    #[serde(rename = "growing")]
    Growing,
}

impl std::fmt::Display for Growth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Growth::Decaying => "decaying",
            Growth::Flat => "flat",
            Growth::Growing => "growing",
        })
    }
}

pub const GROWTH_THRESHOLD: f64 = 0.05;

/// A NaN slope means fewer than two nonzero terms, i.e. the series terminates.
pub fn classify_slope(slope: f64) -> Growth {
    if slope.is_nan() {
        Growth::Decaying
    } else if slope > GROWTH_THRESHOLD {
        Growth::Growing
    } else if slope < -GROWTH_THRESHOLD {
        Growth::Decaying
    } else {
        Growth::Flat
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionRow {
    pub abs_u: f64,
    pub abs_v: f64,
    pub slope: f64,
    pub class: Growth,
}

/// Exact `v`-polynomials of `a2_series_coefficient(m)` for `m = 1..=m_f`.
pub struct A2Coefficients {
    tables: Vec<BilinearTable>,
}

impl A2Coefficients {
    pub fn new(t: &FieldTower, h1: &MonicPoly, h2: &MonicPoly, m_f: usize) -> A2Coefficients {
        A2Coefficients { tables: (1..=m_f).map(|m| bilinear_table(t, h1, h2, m, 2 * m - 1)).collect() }
    }

    pub fn max_degree(&self) -> usize {
        self.tables.len()
    }

    pub fn coefficient(&self, m: usize, v: Complex64) -> Complex64 {
        self.tables[m - 1].evaluate(v)
    }
}

/// Least-squares slope of `ln |a2(m)| + m ln|u|` over `m = 1..=m_f`, skipping zero terms.
pub fn region_slope(coeffs: &A2Coefficients, abs_u: f64, abs_v: f64) -> f64 {
    let pts: Vec<(f64, f64)> = (1..=coeffs.max_degree())
        .filter_map(|m| {
            let a = coeffs.coefficient(m, Complex64::new(abs_v, 0.0)).norm();
            (a > 0.0).then(|| (m as f64, a.ln() + m as f64 * abs_u.ln()))
        })
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Growth of the per-degree F-side terms at each grid point, in grid order.
pub fn region_scan(coeffs: &A2Coefficients, grid: &[(f64, f64)]) -> Vec<RegionRow> {
    grid.par_iter()
        .map(|&(abs_u, abs_v)| {
            let slope = region_slope(coeffs, abs_u, abs_v);
            RegionRow { abs_u, abs_v, slope, class: classify_slope(slope) }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ChiDReport {
    pub q: u32,
    pub max_deg: usize,
    pub pairs: u64,
    pub coprime_pairs: u64,
    pub pass: bool,
    pub counterexample: Option<(String, String)>,
}

/// Checks `χ_D(F) = 1` for all coprime monic `D, F ∈ F_q[T]` of degrees
/// `1..=max_deg`, with `D` read at extension level and each symbol computed
/// by modular exponentiation at the primes of `D`.
pub fn chi_d_triviality_scan(t: &FieldTower, max_deg: usize) -> ChiDReport {
    let polys: Vec<MonicPoly> = (1..=max_deg).flat_map(|d| enumerate_monic(t, Level::Base, d, MonicFilter::All)).collect();
    let factored: Vec<Vec<(Poly, u32)>> = polys
        .iter()
        .map(|d| factorize(t, &d.to_ext()).factors.iter().map(|(p, e)| (p.poly().clone(), *e)).collect())
        .collect();
    let results: Vec<(u64, Option<usize>)> = factored
        .par_iter()
        .map(|fac| {
            let mut coprime = 0;
            for (j, f) in polys.iter().enumerate() {
                let mut value = EisensteinValue::ONE;
                for (p, e) in fac {
                    value = value * residue_symbol_unchecked(t, p, f).pow(*e);
                }
                if value.is_zero() {
                    continue;
                }
                coprime += 1;
                if value != EisensteinValue::ONE {
                    return (coprime, Some(j));
                }
            }
            (coprime, None)
        })
        .collect();
    let coprime_pairs = results.iter().map(|r| r.0).sum();
    let counterexample = results.iter().enumerate().find_map(|(i, r)| {
        r.1.map(|j| (crate::poly::format_poly(&polys[i], t), crate::poly::format_poly(&polys[j], t)))
    });
    ChiDReport {
        q: t.q(),
        max_deg,
        pairs: (polys.len() * polys.len()) as u64,
        coprime_pairs,
        pass: counterexample.is_none(),
        counterexample,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{twisted_second_moment, FamilySpec};
    use crate::poly::parse_poly;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn base(t: &FieldTower, s: &str) -> MonicPoly {
        MonicPoly::new(parse_poly(s, Level::Base, t).unwrap()).unwrap()
    }

    #[test]
    fn series_coefficient_is_the_moment() {
        let t = FieldTower::new(5, 1).unwrap();
        let v = c(5f64.powf(-0.5));
        let cfg = DdsConfig::untwisted(c(0.0), v, DdsCutoffs { m_f: 2, m_n: 3, m_d: 2 });
        let a2 = a2_series_coefficient(&t, &cfg, 2).unwrap();
        let (_, m) = twisted_second_moment(&t, &FamilySpec::untwisted(2).unwrap()).unwrap();
        let expect = m.evaluate(5);
        assert!((a2 - expect).norm() < 1e-10 * expect.norm());

        let h1 = base(&t, "T");
        let h2 = base(&t, "T+1");
        let cfg = DdsConfig::new(h1.clone(), h2.clone(), c(0.0), Complex64::new(0.2, 0.1), cfg.cutoffs).unwrap();
        let swapped = DdsConfig::new(h2, h1, c(0.0), Complex64::new(0.2, 0.1), cfg.cutoffs).unwrap();
        let a = a2_series_coefficient(&t, &cfg, 2).unwrap();
        let b = a2_series_coefficient(&t, &swapped, 2).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn perron_partial_sums() {
        // for m ≥ 1 the L-sums are polynomials, so cutting N at degree 2m-1 is exact
        let t = FieldTower::new(5, 1).unwrap();
        for (u, v) in [(0.01, 0.1), (0.003, 0.4), (0.02, 0.05)] {
            let mut cfg = DdsConfig::untwisted(c(u), Complex64::new(v, 0.05), DdsCutoffs { m_f: 2, m_n: 3, m_d: 2 });
            cfg.h1 = base(&t, "T^2+1");
            let direct = a2_direct_truncation(&t, &cfg);
            let series: Complex64 = (1..=2).map(|m| a2_series_coefficient(&t, &cfg, m).unwrap() * c(u).powu(m as u32)).sum();
            let direct_pos: Complex64 = direct.by_degree[1..].iter().sum();
            assert!((series - direct_pos).norm() < 1e-12 * series.norm().max(1.0));
        }
    }

    #[test]
    fn zero_degree_coefficient() {
        let t = FieldTower::new(5, 1).unwrap();
        let cfg = DdsConfig::untwisted(c(0.0), c(0.1), DdsCutoffs { m_f: 0, m_n: 0, m_d: 0 });
        assert!((a2_series_coefficient(&t, &cfg, 0).unwrap() - c(4.0)).norm() < 1e-12);
        let cfg = DdsConfig::untwisted(c(0.0), c(0.2), DdsCutoffs { m_f: 0, m_n: 0, m_d: 0 });
        assert_eq!(a2_series_coefficient(&t, &cfg, 0), Err(Error::PoleAt));
    }

    #[test]
    fn local_factor_closed_forms() {
        let u = c(0.013);
        for d in 1..6u32 {
            let split = d % 2 == 0;
            assert!((local_mobius_factor(u, d, split, None) - 1.0).norm() < 1e-15);
            for k in 0..3u8 {
                let w = omega_c64().powu(k as u32);
                let expect = if split { 1.0 + 2.0 * w.re * u.powu(d / 2) } else { 1.0 + (w - 1.0) * u.powu(d) };
                assert!((local_mobius_factor(u, d, split, Some(k)) - expect).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn conjugate_prime_gives_conjugate_symbol() {
        let t = FieldTower::new(5, 1).unwrap();
        for p in ext_primes(&t, 2).into_iter().filter(|p| p.split) {
            let pc = p.above.conj(&t);
            let a = CharEvaluator::new(&t, &p.above, 3);
            let b = CharEvaluator::new(&t, &pc, 3);
            for n in (0..=3).flat_map(|d| enumerate_monic(&t, Level::Base, d, MonicFilter::All)) {
                assert_eq!(a.value(n.coeffs()).conj(), b.value(n.coeffs()));
            }
        }
    }

    #[test]
    fn ext_prime_counts() {
        let t = FieldTower::new(5, 1).unwrap();
        let ps = ext_primes(&t, 3);
        for e in 1..=3u32 {
            // primes of F_25[T] of degree e, counted with the conjugate of each split half
            let n: u128 = ps.iter().map(|p| if p.split { (p.base_degree / 2 == e) as u128 * 2 } else { (p.base_degree == e) as u128 }).sum();
            assert_eq!(n, crate::poly::prime_count(25, e));
        }
    }

    #[test]
    fn mobius_single_term() {
        let t = FieldTower::new(5, 1).unwrap();
        let u = c(5f64.powi(-4));
        let cfg = DdsConfig::untwisted(u, c(0.2), DdsCutoffs { m_f: 0, m_n: 0, m_d: 3 });
        let r = a2_mobius_representation(&t, &cfg, None).unwrap();
        let expect: Complex64 = (1..=3u32).map(|e| (1.0 + 2.0 * u.powu(e)).powi(crate::poly::prime_count(5, 2 * e) as i32)).product();
        assert!((r.value - expect).norm() < 1e-14);
        assert!(matches!(a2_mobius_representation(&t, &DdsConfig::untwisted(c(0.05), c(0.2), cfg.cutoffs), None), Err(Error::OutOfRegion(_))));
        assert!(matches!(a2_mobius_representation(&t, &cfg, Some(1e-20)), Err(Error::TailTooLarge { .. })));
    }

    #[test]
    fn rearrangement_small_cutoffs() {
        let t = FieldTower::new(5, 1).unwrap();
        let u = u_from_s(5, c(2.0));
        let v = v_from_w(5, c(1.0));
        let mut last = f64::INFINITY;
        for (m_f, m_n, m_d) in [(1, 1, 1), (2, 2, 2)] {
            let cfg = DdsConfig::untwisted(u, v, DdsCutoffs { m_f, m_n, m_d });
            let d = a2_direct_truncation(&t, &cfg).value;
            let r = a2_mobius_representation(&t, &cfg, None).unwrap().value;
            let res = (d - r).norm();
            assert!(res < last);
            last = res;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn indicator_matches_gcd_criterion() {
        let t = FieldTower::new(5, 1).unwrap();
        assert_eq!(base_divisor_moebius_sum(&t, &MonicPoly::one(Level::Ext)), 1);
        for d in 1..=2 {
            for f in enumerate_monic(&t, Level::Ext, d, MonicFilter::Squarefree) {
                let ind = base_divisor_moebius_sum(&t, &f);
                assert_eq!(ind, is_member(&t, &f) as i32, "{:?}", f);
            }
        }
        // π π^σ for a degree-1 extension prime
        let pi = MonicPoly::linear(&t, Level::Ext, t.generator());
        let norm = pi.mul(&pi.conj(&t), &t);
        assert_eq!(base_divisor_moebius_sum(&t, &norm), 0);
    }

    #[test]
    fn chi_d_small() {
        let t = FieldTower::new(5, 1).unwrap();
        let rep = chi_d_triviality_scan(&t, 2);
        assert!(rep.pass);
        assert_eq!(rep.pairs, 900);
        assert_eq!(rep.coprime_pairs, 720);
    }

    #[test]
    fn region_classes() {
        let t = FieldTower::new(5, 1).unwrap();
        let one = MonicPoly::one(Level::Base);
        let coeffs = A2Coefficients::new(&t, &one, &one, 2);
        let half = 5f64.powf(-0.5);
        let grid: Vec<(f64, f64)> = [-6.0, -3.0, -2.0, -1.0, 0.0].iter().map(|&e| (5f64.powf(e), half)).collect();
        let rows = region_scan(&coeffs, &grid);
        assert_eq!(rows[0].class, Growth::Decaying);
        let rank = |g: Growth| match g {
            Growth::Decaying => 0,
            Growth::Flat => 1,
            Growth::Growing => 2,
        };
        for w in rows.windows(2) {
            assert!(w[1].slope > w[0].slope);
            assert!(rank(w[1].class) >= rank(w[0].class));
        }
        assert_eq!(classify_slope(0.0), Growth::Flat);
        assert_eq!(classify_slope(0.06), Growth::Growing);
        assert_eq!(classify_slope(f64::NAN), Growth::Decaying);
    }
}
