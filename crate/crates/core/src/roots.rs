//! Simultaneous polynomial root finding (Aberth–Ehrlich) with Newton polish.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::eisenstein::EisensteinInt;

fn eval_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// `|p(z)| / Σ |a_k||z|^k`.
pub fn backward_error(c: &[Complex64], z: Complex64) -> f64 {
    let (p, _) = eval_with_derivative(c, z);
    let scale: f64 = c.iter().rev().fold(0.0, |acc, a| acc * z.norm() + a.norm());
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// All roots of `Σ c_k z^k` (low to high, nonzero leading coefficient) and
/// the largest backward error among them.
pub fn polynomial_roots(c: &[Complex64]) -> (Vec<Complex64>, f64) {
    let mut c = c.to_vec();
    while c.last().is_some_and(|a| a.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    let lead = c[n];
    let c: Vec<Complex64> = c.iter().map(|a| a / lead).collect();

    // initial points on a circle of radius given by the geometric mean of |roots|
    let r0 = c[0].norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();

    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if max_step < 1e-16 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(&c, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            let cand = *zi - step;
            if backward_error(&c, cand) <= backward_error(&c, *zi) {
                *zi = cand;
            } else {
                break;
            }
        }
    }
    let err = z.iter().map(|&zi| backward_error(&c, zi)).fold(0.0, f64::max);
    (z, err)
}

/// `a + bϖ` over the rationals, for exact gcds of integral L-polynomials.
#[derive(Clone, Debug, PartialEq)]
struct QOmega {
    a: BigRational,
    b: BigRational,
}

impl QOmega {
    fn zero() -> QOmega {
        QOmega { a: BigRational::zero(), b: BigRational::zero() }
    }

    fn from_int(z: EisensteinInt) -> QOmega {
        QOmega { a: BigRational::from_integer(BigInt::from(z.a)), b: BigRational::from_integer(BigInt::from(z.b)) }
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn add(&self, o: &QOmega) -> QOmega {
        QOmega { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    fn sub(&self, o: &QOmega) -> QOmega {
        QOmega { a: &self.a - &o.a, b: &self.b - &o.b }
    }

    fn mul(&self, o: &QOmega) -> QOmega {
        // ϖ² = -1 - ϖ
        let bd = &self.b * &o.b;
        QOmega { a: &self.a * &o.a - &bd, b: &self.a * &o.b + &self.b * &o.a - bd }
    }

    fn scale(&self, k: i64) -> QOmega {
        let k = BigRational::from_integer(BigInt::from(k));
        QOmega { a: &self.a * &k, b: &self.b * k }
    }

    fn inv(&self) -> QOmega {
        let n = &self.a * &self.a - &self.a * &self.b + &self.b * &self.b;
        QOmega { a: (&self.a - &self.b) / &n, b: -&self.b / n }
    }

    fn to_c64(&self) -> Complex64 {
        let (a, b) = (self.a.to_f64().unwrap_or(f64::NAN), self.b.to_f64().unwrap_or(f64::NAN));
        Complex64::new(a - 0.5 * b, b * 0.75f64.sqrt())
    }
}

fn trim(p: &mut Vec<QOmega>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Quotient and remainder of `n / d`, `d` nonzero.
fn divrem(n: &[QOmega], d: &[QOmega]) -> (Vec<QOmega>, Vec<QOmega>) {
    let mut r = n.to_vec();
    trim(&mut r);
    let dl = d.len() - 1;
    let lead_inv = d[dl].inv();
    let mut quo = vec![QOmega::zero(); r.len().saturating_sub(dl).max(1)];
    while r.len() > dl {
        let k = r.len() - 1 - dl;
        let c = r[r.len() - 1].mul(&lead_inv);
        for (i, di) in d.iter().enumerate() {
            r[k + i] = r[k + i].sub(&c.mul(di));
        }
        quo[k] = quo[k].add(&c);
        r.pop();
        trim(&mut r);
    }
    (quo, r)
}

/// `p / gcd(p, p')`, computed exactly: its roots are those of `p`, each once.
pub fn squarefree_part(c: &[EisensteinInt]) -> Vec<Complex64> {
    let mut p: Vec<QOmega> = c.iter().map(|&z| QOmega::from_int(z)).collect();
    trim(&mut p);
    if p.len() <= 2 {
        return p.iter().map(QOmega::to_c64).collect();
    }
    let dp: Vec<QOmega> = p.iter().enumerate().skip(1).map(|(k, a)| a.scale(k as i64)).collect();
    let (mut x, mut y) = (p.clone(), dp);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    let (q, _) = divrem(&p, &x);
    q.iter().map(QOmega::to_c64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            c = next;
        }
        c
    }

    #[test]
    fn quadratic_matches_formula() {
        // 1 + 2z + 5z² has roots (-1 ± 2i)/5
        let c = [Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(5.0, 0.0)];
        let (r, err) = polynomial_roots(&c);
        assert!(err < 1e-14);
        for expect in [Complex64::new(-0.2, 0.4), Complex64::new(-0.2, -0.4)] {
            assert!(r.iter().any(|z| (z - expect).norm() < 1e-12));
        }
    }

    #[test]
    fn squarefree_part_drops_repeated_factor() {
        let e = |a| EisensteinInt::new(a, 0);
        // (1 + 3u + 5u²)²
        let sq = squarefree_part(&[e(1), e(6), e(19), e(30), e(25)]);
        assert_eq!(sq.len(), 3);
        let lead = sq[2];
        for (got, want) in sq.iter().zip([1.0, 3.0, 5.0]) {
            assert!((got / lead * 5.0 - want).norm() < 1e-12);
        }
        // (1 - ϖu)² (1 + u) keeps degree 2 after reduction
        let w = EisensteinInt::OMEGA;
        let one = EisensteinInt::ONE;
        let mut c = vec![one];
        for f in [[one, -w], [one, -w], [one, one]] {
            let mut n = vec![EisensteinInt::ZERO; c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                n[i] += a * f[0];
                n[i + 1] += a * f[1];
            }
            c = n;
        }
        assert_eq!(squarefree_part(&c).len(), 3);
        let (roots, _) = polynomial_roots(&squarefree_part(&c));
        assert!(roots.iter().any(|z| (z - Complex64::new(-1.0, 0.0)).norm() < 1e-12));
    }

    proptest! {
        #[test]
        fn recovers_circle_roots(angles in prop::collection::vec(0.0f64..std::f64::consts::TAU, 1..10)) {
            let radius = 5f64.powf(-0.5);
            let roots: Vec<Complex64> = angles.iter().map(|&a| Complex64::from_polar(radius, a)).collect();
            let (found, err) = polynomial_roots(&from_roots(&roots));
            prop_assert!(err < 1e-10);
            for z in found {
                prop_assert!(((z.norm() / radius) - 1.0).abs() < 1e-5);
            }
        }
    }
}
