//! Dense univariate polynomials over either level of the tower.
//!
//! Coefficients are stored low to high with no trailing zeros, so the zero
//! polynomial has an empty coefficient vector. All operations take the tower
//! explicitly.

mod factor;
mod literal;

use std::ops::Deref;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower, Level};

pub use factor::{factorize, is_irreducible, Factorization};
pub(crate) use factor::split_equal_degree;
pub use literal::{format_poly, parse_poly};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    level: Level,
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn zero(level: Level) -> Poly {
        Poly { level, coeffs: Vec::new() }
    }

    pub fn one(level: Level) -> Poly {
        Poly { level, coeffs: vec![Elem::ONE] }
    }

    /// The variable `T`.
    pub fn t(level: Level) -> Poly {
        Poly { level, coeffs: vec![Elem::ZERO, Elem::ONE] }
    }

    pub fn constant(level: Level, c: Elem) -> Poly {
        Poly::from_coeffs(level, vec![c])
    }

    /// `T - c`.
    pub fn linear(t: &FieldTower, level: Level, c: Elem) -> Poly {
        Poly::from_coeffs(level, vec![t.neg(c), Elem::ONE])
    }

    pub fn from_coeffs(level: Level, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last() == Some(&Elem::ZERO) {
            coeffs.pop();
        }
        Poly { level, coeffs }
    }

    /// Builds a polynomial from coefficients that must lie at `level`.
    pub fn try_from_coeffs(t: &FieldTower, level: Level, coeffs: Vec<Elem>) -> Result<Poly> {
        if level == Level::Base && coeffs.iter().any(|&c| !t.is_base(c)) {
            return Err(Error::LevelMismatch("coefficient outside F_q in a base-level polynomial"));
        }
        Ok(Poly::from_coeffs(level, coeffs))
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Elem::ONE
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree of a nonzero polynomial (0 for zero).
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == Elem::ONE
    }

    /// The same polynomial regarded at the extension level.
    pub fn to_ext(&self) -> Poly {
        Poly { level: Level::Ext, coeffs: self.coeffs.clone() }
    }

    /// Regards the polynomial at base level when all coefficients lie in `F_q`.
    pub fn to_base(&self, t: &FieldTower) -> Option<Poly> {
        if self.coeffs.iter().all(|&c| t.is_base(c)) {
            Some(Poly { level: Level::Base, coeffs: self.coeffs.clone() })
        } else {
            None
        }
    }

    pub fn add(&self, o: &Poly, t: &FieldTower) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| t.add(self.coeff(i), o.coeff(i))).collect();
        Poly::from_coeffs(self.level.join(o.level), c)
    }

    pub fn neg(&self, t: &FieldTower) -> Poly {
        Poly { level: self.level, coeffs: self.coeffs.iter().map(|&c| t.neg(c)).collect() }
    }

    pub fn sub(&self, o: &Poly, t: &FieldTower) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| t.sub(self.coeff(i), o.coeff(i))).collect();
        Poly::from_coeffs(self.level.join(o.level), c)
    }

    pub fn scale(&self, c: Elem, t: &FieldTower) -> Poly {
        Poly::from_coeffs(self.level, self.coeffs.iter().map(|&x| t.mul(x, c)).collect())
    }

    pub fn mul(&self, o: &Poly, t: &FieldTower) -> Poly {
        let level = self.level.join(o.level);
        if self.is_zero() || o.is_zero() {
            return Poly::zero(level);
        }
        let mut c = vec![Elem::ZERO; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] = t.add(c[i + j], t.mul(a, b));
            }
        }
        Poly::from_coeffs(level, c)
    }

    pub fn pow(&self, mut e: u32, t: &FieldTower) -> Poly {
        let mut acc = Poly::one(self.level);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b, t);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b, t);
            }
        }
        acc
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn divrem(&self, d: &Poly, t: &FieldTower) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let level = self.level.join(d.level);
        if self.coeffs.len() < d.coeffs.len() {
            return (Poly::zero(level), Poly { level, coeffs: self.coeffs.clone() });
        }
        let dd = d.deg();
        let inv = t.inv(d.lc());
        let mut r = self.coeffs.clone();
        let mut q = vec![Elem::ZERO; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = t.mul(r[i + dd], inv);
            q[i] = c;
            if c.is_zero() {
                continue;
            }
            let nc = t.neg(c);
            for (j, &dj) in d.coeffs.iter().enumerate() {
                r[i + j] = t.add(r[i + j], t.mul(nc, dj));
            }
        }
        r.truncate(dd);
        (Poly::from_coeffs(level, q), Poly::from_coeffs(level, r))
    }

    pub fn rem(&self, d: &Poly, t: &FieldTower) -> Poly {
        self.divrem(d, t).1
    }

    /// Exact quotient; errors when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly, t: &FieldTower) -> Result<Poly> {
        let (q, r) = self.divrem(d, t);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Invariant("inexact polynomial division".into()))
        }
    }

    pub fn divides(&self, f: &Poly, t: &FieldTower) -> bool {
        f.rem(self, t).is_zero()
    }

    pub fn make_monic(&self, t: &FieldTower) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(t.inv(self.lc()), t)
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, o: &Poly, t: &FieldTower) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b, t);
            a = b;
            b = r;
        }
        a.make_monic(t)
    }

    pub fn derivative(&self, t: &FieldTower) -> Poly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| t.mul(a, t.from_int(i as i64)))
            .collect();
        Poly::from_coeffs(self.level, c)
    }

    pub fn eval(&self, x: Elem, t: &FieldTower) -> Elem {
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| t.add(t.mul(acc, x), c))
    }

    /// `self^e mod m`.
    pub fn powmod(&self, e: &BigUint, m: &Poly, t: &FieldTower) -> Poly {
        let mut acc = Poly::one(self.level.join(m.level)).rem(m, t);
        let base = self.rem(m, t);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc, t).rem(m, t);
            if e.bit(i) {
                acc = acc.mul(&base, t).rem(m, t);
            }
        }
        acc
    }

    pub fn mulmod(&self, o: &Poly, m: &Poly, t: &FieldTower) -> Poly {
        self.mul(o, t).rem(m, t)
    }

    /// Applies Frobenius coefficient-wise.
    pub fn conj(&self, t: &FieldTower) -> Poly {
        Poly { level: self.level, coeffs: self.coeffs.iter().map(|&c| t.frob(c)).collect() }
    }

    /// Replaces `T` by `T^p` in coefficient positions and each coefficient by its
    /// `p`-th root; used when the derivative vanishes.
    fn pth_root(&self, t: &FieldTower) -> Poly {
        let p = t.p() as usize;
        let root_exp = (t.size(self.level) / t.p()) as u64;
        let c = self.coeffs.iter().step_by(p).map(|&a| t.pow(a, root_exp)).collect();
        Poly::from_coeffs(self.level, c)
    }

    /// Index in the canonical enumeration of monic polynomials of this degree.
    pub fn monic_index(&self, t: &FieldTower) -> u64 {
        let k = t.size(self.level) as u64;
        self.coeffs[..self.deg()].iter().rev().fold(0u64, |acc, c| acc * k + c.index() as u64)
    }
}

/// A polynomial with leading coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonicPoly(Poly);

impl MonicPoly {
    pub fn new(p: Poly) -> Result<MonicPoly> {
        if p.is_monic() {
            Ok(MonicPoly(p))
        } else {
            Err(Error::NotMonic)
        }
    }

    pub fn one(level: Level) -> MonicPoly {
        MonicPoly(Poly::one(level))
    }

    pub fn t(level: Level) -> MonicPoly {
        MonicPoly(Poly::t(level))
    }

    pub fn linear(t: &FieldTower, level: Level, c: Elem) -> MonicPoly {
        MonicPoly(Poly::linear(t, level, c))
    }

    /// The `idx`-th monic polynomial of degree `d` in canonical order: the
    /// non-leading coefficients are the base-`K` digits of `idx`, least
    /// significant first, where `K` is the size of the coefficient field.
    pub fn from_index(t: &FieldTower, level: Level, d: usize, mut idx: u64) -> MonicPoly {
        let k = t.size(level) as u64;
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push(Elem((idx % k) as u32));
            idx /= k;
        }
        c.push(Elem::ONE);
        MonicPoly(Poly { level, coeffs: c })
    }

    pub fn poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_poly(self) -> Poly {
        self.0
    }

    pub fn mul(&self, o: &MonicPoly, t: &FieldTower) -> MonicPoly {
        MonicPoly(self.0.mul(&o.0, t))
    }

    pub fn pow(&self, e: u32, t: &FieldTower) -> MonicPoly {
        MonicPoly(self.0.pow(e, t))
    }

    pub fn conj(&self, t: &FieldTower) -> MonicPoly {
        MonicPoly(self.0.conj(t))
    }

    pub fn gcd(&self, o: &MonicPoly, t: &FieldTower) -> MonicPoly {
        MonicPoly(self.0.gcd(&o.0, t))
    }

    pub fn div_exact(&self, o: &MonicPoly, t: &FieldTower) -> Result<MonicPoly> {
        self.0.div_exact(&o.0, t).map(MonicPoly)
    }

    pub fn to_ext(&self) -> MonicPoly {
        MonicPoly(self.0.to_ext())
    }

    pub fn to_base(&self, t: &FieldTower) -> Option<MonicPoly> {
        self.0.to_base(t).map(MonicPoly)
    }
}

impl Deref for MonicPoly {
    type Target = Poly;
    fn deref(&self) -> &Poly {
        &self.0
    }
}

/// Filter for [`enumerate_monic`].
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum MonicFilter {
    All,
    Squarefree,
}

/// Number of monic polynomials of degree `d` at `level`.
pub fn monic_count(t: &FieldTower, level: Level, d: usize) -> u64 {
    (t.size(level) as u64).pow(d as u32)
}

/// All monic polynomials of degree `d` in canonical order.
pub fn enumerate_monic(
    t: &FieldTower,
    level: Level,
    d: usize,
    filter: MonicFilter,
) -> impl Iterator<Item = MonicPoly> + '_ {
    enumerate_monic_range(t, level, d, filter, 0..monic_count(t, level, d))
}

/// The slice `range` of the canonical enumeration, for partitioned work.
pub fn enumerate_monic_range(
    t: &FieldTower,
    level: Level,
    d: usize,
    filter: MonicFilter,
    range: std::ops::Range<u64>,
) -> impl Iterator<Item = MonicPoly> + '_ {
    range
        .map(move |i| MonicPoly::from_index(t, level, d, i))
        .filter(move |f| filter == MonicFilter::All || is_squarefree(f, t))
}

/// `gcd(f, f') = 1`, which for a nonzero polynomial over a perfect field is squarefreeness.
pub fn is_squarefree(f: &Poly, t: &FieldTower) -> bool {
    if f.deg() == 0 {
        return true;
    }
    let d = f.derivative(t);
    if d.is_zero() {
        return false;
    }
    f.gcd(&d, t).deg() == 0
}

/// Number of monic irreducibles of degree `n` over `F_q`.
pub fn prime_count(q: u64, n: u32) -> u128 {
    assert!(n >= 1, "prime_count needs n >= 1");
    let mut total: i128 = 0;
    for d in 1..=n {
        if n.is_multiple_of(d) {
            total += integer_moebius(d as u64) as i128 * (q as i128).pow(n / d);
        }
    }
    (total / n as i128) as u128
}

pub(crate) fn integer_moebius(mut n: u64) -> i32 {
    let mut mu = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Largest `e` with `P^e | f`.
pub fn valuation(f: &Poly, p: &Poly, t: &FieldTower) -> Result<u32> {
    if !is_irreducible(p, t) {
        return Err(Error::NotPrime);
    }
    if f.is_zero() {
        return Err(Error::Invariant("valuation of the zero polynomial".into()));
    }
    Ok(valuation_unchecked(f, p, t))
}

pub(crate) fn valuation_unchecked(f: &Poly, p: &Poly, t: &FieldTower) -> u32 {
    let mut e = 0;
    let mut cur = f.clone();
    loop {
        let (q, r) = cur.divrem(p, t);
        if !r.is_zero() {
            return e;
        }
        e += 1;
        cur = q;
    }
}

/// `μ(f)`: zero unless squarefree, else `(-1)^(number of prime factors)`.
pub fn moebius(f: &MonicPoly, t: &FieldTower) -> i32 {
    factorize(t, f).moebius()
}

/// `(f^σ, f·f^σ, gcd(f, f^σ))`; the norm is returned at base level.
pub fn conjugate_and_norm(t: &FieldTower, f: &MonicPoly) -> Result<(MonicPoly, MonicPoly, MonicPoly)> {
    if f.level() != Level::Ext {
        return Err(Error::LevelMismatch("conjugate_and_norm expects an extension-level polynomial"));
    }
    let fs = f.conj(t);
    let norm = f
        .mul(&fs, t)
        .to_base(t)
        .ok_or_else(|| Error::Invariant("norm has coefficients outside F_q".into()))?;
    let g = f.gcd(&fs, t);
    Ok((fs, norm, g))
}

/// Resultant `Res(a, b) = lc(a)^{deg b} Π_{a(α)=0} b(α)`, for nonzero inputs.
pub fn resultant(a: &Poly, b: &Poly, t: &FieldTower) -> Elem {
    if a.is_zero() || b.is_zero() {
        return Elem::ZERO;
    }
    let mut a = a.clone();
    let mut b = b.clone();
    let mut acc = Elem::ONE;
    loop {
        let da = a.deg();
        let db = b.deg();
        if da == 0 {
            return t.mul(acc, t.pow(a.lc(), db as u64));
        }
        if db == 0 {
            return t.mul(acc, t.pow(b.lc(), da as u64));
        }
        // Res(a, b) = (-1)^{da·db} lc(b)^{da - dr} Res(b, a mod b)
        let r = a.rem(&b, t);
        if r.is_zero() {
            return Elem::ZERO;
        }
        let dr = r.deg();
        if da * db % 2 == 1 {
            acc = t.neg(acc);
        }
        acc = t.mul(acc, t.pow(b.lc(), (da - dr) as u64));
        a = b;
        b = r;
    }
}
