//! L-polynomials `L(u, χ_F) = Σ_N χ_F(N) u^{deg N}` in `u = q^{-s}`.

use num_complex::Complex64;

use crate::character::{gauss_sum_and_epsilon, CubicCharacter};
use crate::eisenstein::{EisensteinInt, EisensteinValue};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower, Level};
use crate::poly::MonicPoly;
use crate::roots::{polynomial_roots, squarefree_part};

/// Fixed sample points `s` for the functional-equation check.
pub const FE_SAMPLE_POINTS: [(f64, f64); 4] = [(0.3, 0.0), (0.5, 0.7), (0.8, 0.0), (0.0, 1.2)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    pub coeffs: Vec<EisensteinInt>,
    pub genus: u32,
    pub completed: bool,
}

impl LPolynomial {
    pub fn conj(&self) -> LPolynomial {
        LPolynomial { coeffs: self.coeffs.iter().map(|c| c.conj()).collect(), ..self.clone() }
    }

    pub fn eval(&self, u: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * u + c.to_c64())
    }

    /// Exact sum of coefficients (the value at `u = 1`).
    pub fn value_at_one(&self) -> EisensteinInt {
        self.coeffs.iter().copied().sum()
    }

    /// Divides by `1 - u`; the quotient has degree `genus`.
    pub fn complete(&self) -> Result<LPolynomial> {
        if self.completed {
            return Ok(self.clone());
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut prev = EisensteinInt::ZERO;
        for &c in &self.coeffs {
            prev += c;
            out.push(prev);
        }
        if out.pop().is_some_and(|r| !r.is_zero()) {
            return Err(Error::NonzeroRemainder);
        }
        if out.is_empty() {
            out.push(EisensteinInt::ONE);
        }
        Ok(LPolynomial { coeffs: out, genus: self.genus, completed: true })
    }

    /// Value at `u = q^{-1/2}` from the stored coefficients in double precision.
    pub fn central_value(&self, q: u32) -> Complex64 {
        self.eval(Complex64::new((q as f64).powf(-0.5), 0.0))
    }

    /// `|L(q^{-1/2})|²` with the rational and `√q`-irrational parts formed
    /// exactly in integers before a single conversion.
    pub fn central_value_sq_exact(&self, q: u32) -> f64 {
        // L = (A + B/√q) / q^h with A, B Eisenstein and h = ⌊deg/2⌋
        let n = self.coeffs.len();
        let h = (n / 2) as u32;
        let qi = q as i128;
        let mut a = EisensteinInt::ZERO;
        let mut b = EisensteinInt::ZERO;
        for (k, &c) in self.coeffs.iter().enumerate() {
            let k = k as u32;
            if k.is_multiple_of(2) {
                a += c * qi.pow(h - k / 2);
            } else {
                b += c * qi.pow(h - (k - 1) / 2);
            }
        }
        // |A + B/√q|² = A Ā + B B̄ / q + (A B̄ + Ā B)/√q
        let rational = (a * a.conj()).a * qi + (b * b.conj()).a;
        let cross = (a * b.conj() + a.conj() * b).a;
        let denom = (q as f64).powi(2 * h as i32);
        (rational as f64 / q as f64 + cross as f64 / (q as f64).sqrt()) / denom
    }
}

/// `Σ_{deg N = n} χ_F(N)` over monic base polynomials.
pub fn coefficient_sum(t: &FieldTower, chi: &CubicCharacter, n: usize) -> EisensteinInt {
    let ev = chi.evaluator(t, n);
    let q = t.q() as u64;
    let mut acc = EisensteinInt::ZERO;
    let mut c = vec![Elem::ZERO; n + 1];
    c[n] = Elem::ONE;
    for idx in 0..q.pow(n as u32) {
        let mut r = idx;
        for x in c.iter_mut().take(n) {
            *x = Elem((r % q) as u32);
            r /= q;
        }
        acc += ev.value(&c).to_int();
    }
    acc
}

/// L-polynomial by enumerating monic `N` of each degree `0..=g+1`; degree
/// `g+2` is also summed and must vanish.
pub fn l_polynomial(t: &FieldTower, chi: &CubicCharacter) -> Result<LPolynomial> {
    let g = chi.genus() as usize;
    let coeffs: Vec<EisensteinInt> = (0..=g + 1).map(|n| coefficient_sum(t, chi, n)).collect();
    if !coefficient_sum(t, chi, g + 2).is_zero() {
        return Err(Error::Invariant("L-series coefficient beyond the degree bound".into()));
    }
    Ok(LPolynomial { coeffs, genus: g as u32, completed: false })
}

/// Monic primes of `F_q[T]` up to a degree bound, by sieving products.
#[derive(Clone, Debug)]
pub struct BasePrimes {
    /// `by_degree[d]` holds the coefficient vectors (low to high, monic) of degree-`d` primes.
    pub by_degree: Vec<Vec<Vec<Elem>>>,
}

impl BasePrimes {
    pub fn new(t: &FieldTower, max_deg: usize) -> BasePrimes {
        let q = t.q() as u64;
        let mut by_degree: Vec<Vec<Vec<Elem>>> = vec![Vec::new()];
        for n in 1..=max_deg {
            let total = q.pow(n as u32) as usize;
            let mut composite = vec![false; total];
            let mut prod = vec![Elem::ZERO; n + 1];
            let mut m = vec![Elem::ZERO; n + 1];
            for d in 1..=n / 2 {
                let e = n - d;
                for p in &by_degree[d] {
                    // m runs over the monics of degree e, digits incremented in place
                    m[..e].fill(Elem::ZERO);
                    m[e] = Elem::ONE;
                    for _ in 0..q.pow(e as u32) {
                        prod.fill(Elem::ZERO);
                        for (i, &a) in p.iter().enumerate() {
                            if a.is_zero() {
                                continue;
                            }
                            for j in 0..=e {
                                prod[i + j] = t.add(prod[i + j], t.mul(a, m[j]));
                            }
                        }
                        let idx = prod[..n].iter().rev().fold(0u64, |acc, c| acc * q + c.index() as u64);
                        composite[idx as usize] = true;
                        for digit in m[..e].iter_mut() {
                            let next = digit.index() + 1;
                            if (next as u64) < q {
                                *digit = Elem(next);
                                break;
                            }
                            *digit = Elem::ZERO;
                        }
                    }
                }
            }
            let primes = (0..total)
                .filter(|&i| !composite[i])
                .map(|i| MonicPoly::from_index(t, Level::Base, n, i as u64).into_poly().coeffs().to_vec())
                .collect();
            by_degree.push(primes);
        }
        BasePrimes { by_degree }
    }

    pub fn max_degree(&self) -> usize {
        self.by_degree.len() - 1
    }

    pub fn count(&self, d: usize) -> usize {
        self.by_degree[d].len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[Elem])> {
        self.by_degree.iter().enumerate().flat_map(|(d, ps)| ps.iter().map(move |p| (d, p.as_slice())))
    }
}

/// Multiplies the truncated series `c` by `(1 - v u^d)^{-1}` in place.
#[inline]
pub(crate) fn euler_step(c: &mut [EisensteinInt], d: usize, v: EisensteinValue) {
    if let EisensteinValue::Root(e) = v {
        for n in d..c.len() {
            let add = c[n - d].mul_omega_pow(e);
            c[n] += add;
        }
    }
}

/// L-polynomial from the Euler product over base primes of degree at most `g+1`.
pub fn l_polynomial_euler(t: &FieldTower, chi: &CubicCharacter, primes: &BasePrimes) -> LPolynomial {
    let g = chi.genus() as usize;
    assert!(primes.max_degree() > g, "prime table too short");
    let ev = chi.evaluator(t, g + 1);
    let mut c = vec![EisensteinInt::ZERO; g + 2];
    c[0] = EisensteinInt::ONE;
    for d in 1..=g + 1 {
        for p in &primes.by_degree[d] {
            euler_step(&mut c, d, ev.value(p));
        }
    }
    LPolynomial { coeffs: c, genus: g as u32, completed: false }
}

pub fn complete_and_evaluate(l: &LPolynomial, u: Complex64) -> Result<(LPolynomial, Complex64, f64)> {
    let completed = l.complete()?;
    let value = l.eval(u);
    Ok((completed, value, (value * value.conj()).re))
}

/// Max relative residual of the functional equation over [`FE_SAMPLE_POINTS`].
///
/// Both sides are evaluated from the uncompleted polynomials, the right side
/// using the L-polynomial of the conjugate character computed independently.
pub fn verify_functional_equation(t: &FieldTower, chi: &CubicCharacter, l: &LPolynomial) -> Result<f64> {
    let primes = BasePrimes::new(t, chi.genus() as usize + 1);
    let lbar = l_polynomial_euler(t, &chi.conjugate(t), &primes);
    let (_, eps) = gauss_sum_and_epsilon(t, chi);
    Ok(functional_equation_residual(t.q(), chi.modulus().deg() as u32, l, &lbar, eps))
}

pub(crate) fn functional_equation_residual(q: u32, deg_f: u32, l: &LPolynomial, lbar: &LPolynomial, eps: Complex64) -> f64 {
    let qf = q as f64;
    let qpow = |z: Complex64| (z * qf.ln()).exp();
    let mut worst: f64 = 0.0;
    for &(re, im) in FE_SAMPLE_POINTS.iter() {
        let s = Complex64::new(re, im);
        let one = Complex64::new(1.0, 0.0);
        let lhs = l.eval(qpow(-s));
        let s1 = one - s;
        let rhs = eps * qpow(2.0 * s - 1.0) * (one - qpow(-s)) / (one - qpow(s - 1.0)) * lbar.eval(qpow(-s1))
            / qpow(2.0 * deg_f as f64 * (s - 0.5));
        let scale = lhs.norm().max(rhs.norm()).max(1e-300);
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    worst
}

/// `max | |root|·√q - 1 |` over the distinct roots of a completed polynomial.
pub fn verify_riemann_hypothesis(q: u32, l: &LPolynomial) -> Result<f64> {
    if !l.completed {
        return Err(Error::Invariant("Riemann hypothesis check needs the completed polynomial".into()));
    }
    if l.coeffs.len() <= 1 {
        return Ok(0.0);
    }
    // repeated roots (squares of L-polynomials do occur) would cost half the digits
    let c = squarefree_part(&l.coeffs);
    let (roots, err) = polynomial_roots(&c);
    if err >= 1e-10 {
        return Err(Error::Invariant(format!("root backward error {err:e}")));
    }
    let sq = (q as f64).sqrt();
    Ok(roots.iter().map(|r| (r.norm() * sq - 1.0).abs()).fold(0.0, f64::max))
}
