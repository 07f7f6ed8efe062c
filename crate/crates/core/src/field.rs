//! The tower `F_q ⊂ F_{q²}` for odd `q ≡ 2 (mod 3)`.
//!
//! Elements are stored as packed coordinate indices. An element `a + b·t` of
//! `F_{q²}` (with `a, b ∈ F_q` and `t` a root of the quadratic extension
//! modulus) has index `a + q·b`, and an element of `F_q` with coordinates
//! `c_0, …, c_{k-1}` over `F_p` has index `Σ c_i p^i`. Hence the embedded copy
//! of `F_q` is exactly the set of indices below `q`, zero is index 0 and one is
//! index 1. The canonical ordering of elements is the numeric order of indices.
//!
//! The tower is built with plain coordinate arithmetic. After construction a
//! logarithm table for `F_{q²}*` (relative to the canonical generator) serves
//! multiplication; addition works coordinate-wise.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::eisenstein::EisensteinValue;
use crate::error::{Error, Result};

/// Largest supported `q²`.
pub const MAX_EXT_SIZE: u64 = 1 << 21;

/// Which field of the tower a value lives in.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Base,
    Ext,
}

impl Level {
    pub fn join(self, other: Level) -> Level {
        if self == Level::Ext || other == Level::Ext {
            Level::Ext
        } else {
            Level::Base
        }
    }
}

/// Packed element of `F_{q²}`; see the module docs for the layout.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// An element tagged with the tower level it is declared at.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub level: Level,
    pub elem: Elem,
}

pub struct FieldTower {
    p: u32,
    k: u32,
    q: u32,
    qq: u32,
    base_modulus: Option<Vec<u32>>,
    // t² + c1·t + c0 with c0, c1 ∈ F_q
    ext_c0: Elem,
    ext_c1: Elem,
    generator: Elem,
    omega: Elem,
    // omega = generator^((q²-1)/3 · omega_exp)
    omega_exp: u8,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("moduli", &self.moduli_description())
            .field("omega", &self.omega)
            .finish()
    }
}

impl Clone for FieldTower {
    fn clone(&self) -> Self {
        FieldTower {
            p: self.p,
            k: self.k,
            q: self.q,
            qq: self.qq,
            base_modulus: self.base_modulus.clone(),
            ext_c0: self.ext_c0,
            ext_c1: self.ext_c1,
            generator: self.generator,
            omega: self.omega,
            omega_exp: self.omega_exp,
            exp: self.exp.clone(),
            log: self.log.clone(),
        }
    }
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors_u64(mut n: u64) -> Vec<u64> {
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

/// Coordinate arithmetic used while building the tower.
struct Dense {
    p: u32,
    k: usize,
    // monic modulus over F_p, low to high, length k + 1
    base_mod: Vec<u32>,
}

impl Dense {
    fn digits(&self, mut idx: u32, n: usize) -> Vec<u32> {
        let mut out = vec![0; n];
        for d in out.iter_mut() {
            *d = idx % self.p;
            idx /= self.p;
        }
        out
    }

    fn pack(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn base_add(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        x.iter().zip(y).map(|(a, b)| (a + b) % self.p).collect()
    }

    fn base_neg(&self, x: &[u32]) -> Vec<u32> {
        x.iter().map(|a| (self.p - a) % self.p).collect()
    }

    fn base_mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let k = self.k;
        let mut prod = vec![0u64; 2 * k];
        for (i, &a) in x.iter().enumerate() {
            for (j, &b) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a as u64 * b as u64) % p;
            }
        }
        for deg in (k..2 * k).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &m) in self.base_mod[..k].iter().enumerate() {
                let idx = deg - k + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        prod[..k].iter().map(|&c| c as u32).collect()
    }

    fn base_pow(&self, x: &[u32], mut e: u64) -> Vec<u32> {
        let mut acc = vec![0; self.k];
        acc[0] = 1;
        let mut b = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.base_mul(&acc, &b);
            }
            b = self.base_mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    fn ext_mul(&self, x: &[u32], y: &[u32], c0: &[u32], c1: &[u32]) -> Vec<u32> {
        let k = self.k;
        let (a0, a1) = x.split_at(k);
        let (b0, b1) = y.split_at(k);
        let lo = self.base_mul(a0, b0);
        let mid = self.base_add(&self.base_mul(a0, b1), &self.base_mul(a1, b0));
        let hi = self.base_mul(a1, b1);
        // t² = -c1 t - c0
        let lo = self.base_add(&lo, &self.base_neg(&self.base_mul(&hi, c0)));
        let mid = self.base_add(&mid, &self.base_neg(&self.base_mul(&hi, c1)));
        let mut out = lo;
        out.extend(mid);
        out
    }

    fn ext_pow(&self, x: &[u32], mut e: u64, c0: &[u32], c1: &[u32]) -> Vec<u32> {
        let mut acc = vec![0; 2 * self.k];
        acc[0] = 1;
        let mut b = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.ext_mul(&acc, &b, c0, c1);
            }
            b = self.ext_mul(&b, &b, c0, c1);
            e >>= 1;
        }
        acc
    }
}

/// Arithmetic in `F_p[x]` used to find the base modulus when `k > 1`.
mod fp_poly {
    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv(a: u64, p: u64) -> u64 {
        let mut r = 1;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let li = inv(m[dm], p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = r[r.len() - 1] * li % p;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
            }
            r = trim(r);
        }
        r
    }

    fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Rabin's irreducibility test for a monic `m` of degree `n`.
    pub(super) fn is_irreducible(m: &[u64], p: u64) -> bool {
        let n = m.len() - 1;
        let x = rem(&[0, 1], m, p);
        // frob[i] = x^(p^i) mod m
        let mut frob = vec![x.clone()];
        for i in 1..=n {
            let prev = &frob[i - 1];
            let mut acc = vec![1u64];
            let mut base = prev.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mulmod(&acc, &base, m, p);
                }
                base = mulmod(&base, &base, m, p);
                e >>= 1;
            }
            frob.push(acc);
        }
        if frob[n] != x {
            return false;
        }
        for r in super::prime_factors_u64(n as u64) {
            let mut h = frob[n / r as usize].clone();
            h.resize(h.len().max(2), 0);
            h[1] = (h[1] + p - 1) % p;
            let g = gcd(m, &trim(h), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

impl FieldTower {
    /// The tower for a field of order `q = p^k`.
    pub fn from_order(q: u64) -> Result<FieldTower> {
        if q < 2 {
            return Err(Error::NotPrimeCharacteristic(q));
        }
        let p = prime_factors_u64(q)[0];
        let (mut r, mut k) = (q, 0u32);
        while r % p == 0 {
            r /= p;
            k += 1;
        }
        if r != 1 {
            return Err(Error::NotPrimeCharacteristic(q));
        }
        FieldTower::new(p, k)
    }

    /// Builds the tower over `F_{p^k}` with canonical moduli and cube root of unity.
    pub fn new(p: u64, k: u32) -> Result<FieldTower> {
        if p == 2 {
            return Err(Error::NotOdd);
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrimeCharacteristic(p));
        }
        if k == 0 {
            return Err(Error::TooLarge("extension exponent must be positive".into()));
        }
        let q = (p as u128).pow(k);
        if q % 3 != 2 {
            return Err(Error::NotNonKummer { q: q as u64, residue: (q % 3) as u64 });
        }
        if q * q > MAX_EXT_SIZE as u128 {
            return Err(Error::TooLarge(format!("q^2 = {} exceeds {}", q * q, MAX_EXT_SIZE)));
        }
        let p32 = p as u32;
        let q = q as u32;
        let qq = q * q;
        let ku = k as usize;

        let base_mod = if k == 1 {
            vec![0, 1]
        } else {
            find_base_modulus(p, ku)
        };
        let dense = Dense { p: p32, k: ku, base_mod: base_mod.iter().map(|&c| c as u32).collect() };

        // smallest t² + c1 t + c0 whose discriminant is a non-square in F_q
        let mut ext = None;
        'search: for c1 in 0..q {
            for c0 in 0..q {
                let c0d = dense.digits(c0, ku);
                let c1d = dense.digits(c1, ku);
                let four = dense.digits(4 % p32, ku);
                let disc = dense.base_add(&dense.base_mul(&c1d, &c1d), &dense.base_neg(&dense.base_mul(&four, &c0d)));
                if disc.iter().all(|&d| d == 0) {
                    continue;
                }
                let euler = dense.base_pow(&disc, ((q - 1) / 2) as u64);
                let is_one = euler[0] == 1 && euler[1..].iter().all(|&d| d == 0);
                if !is_one {
                    ext = Some((c0, c1));
                    break 'search;
                }
            }
        }
        let (c0, c1) = ext.ok_or_else(|| Error::Invariant("no irreducible quadratic found".into()))?;
        let c0d = dense.digits(c0, ku);
        let c1d = dense.digits(c1, ku);

        let order = (qq - 1) as u64;
        let factors = prime_factors_u64(order);
        let mut generator = None;
        for cand in 1..qq {
            let x = dense.digits(cand, 2 * ku);
            let is_gen = factors.iter().all(|&r| {
                let y = dense.ext_pow(&x, order / r, &c0d, &c1d);
                !(y[0] == 1 && y[1..].iter().all(|&d| d == 0))
            });
            if is_gen {
                generator = Some(cand);
                break;
            }
        }
        let generator = generator.ok_or_else(|| Error::Invariant("no generator found".into()))?;

        let n = (qq - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; qq as usize];
        let g = dense.digits(generator, 2 * ku);
        let mut cur = dense.digits(1, 2 * ku);
        for i in 0..n {
            let idx = dense.pack(&cur);
            exp[i] = idx;
            exp[i + n] = idx;
            log[idx as usize] = i as u32;
            cur = dense.ext_mul(&cur, &g, &c0d, &c1d);
        }
        if dense.pack(&cur) != 1 {
            return Err(Error::Invariant("generator order mismatch".into()));
        }
        let omega = Elem(exp[n / 3]);

        Ok(FieldTower {
            p: p32,
            k,
            q,
            qq,
            base_modulus: if k == 1 { None } else { Some(base_mod.iter().map(|&c| c as u32).collect()) },
            ext_c0: Elem(c0),
            ext_c1: Elem(c1),
            generator: Elem(generator),
            omega,
            omega_exp: 1,
            exp,
            log,
        })
    }

    /// The same tower with the other choice of `Ω`, i.e. `Ω(ϖ) ↦ Ω(ϖ)²`.
    pub fn with_conjugate_omega(&self) -> FieldTower {
        let mut t = self.clone();
        t.omega = self.mul(self.omega, self.omega);
        t.omega_exp = 3 - self.omega_exp;
        t
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// `q²`, the size of the extension field.
    pub fn ext_size(&self) -> u32 {
        self.qq
    }

    /// Size of the field at `level`.
    pub fn size(&self, level: Level) -> u32 {
        match level {
            Level::Base => self.q,
            Level::Ext => self.qq,
        }
    }

    /// Monic base modulus over `F_p` (low to high), absent for prime `q`.
    pub fn base_modulus(&self) -> Option<&[u32]> {
        self.base_modulus.as_deref()
    }

    /// `(c0, c1)` of the extension modulus `t² + c1·t + c0`.
    pub fn ext_modulus(&self) -> (Elem, Elem) {
        (self.ext_c0, self.ext_c1)
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    /// `Ω(ϖ)`, an element of multiplicative order 3.
    pub fn omega_image(&self) -> Elem {
        self.omega
    }

    /// Human readable description of the moduli, used in reports and cache keys.
    pub fn moduli_description(&self) -> String {
        let base = match &self.base_modulus {
            None => format!("F_{}", self.p),
            Some(m) => {
                let terms: Vec<String> = m.iter().map(|c| c.to_string()).collect();
                format!("F_{}[x]/({})", self.p, terms.join(","))
            }
        };
        format!(
            "{}; t^2+{}*t+{}; omega={}",
            base,
            self.format_elem(self.ext_c1),
            self.format_elem(self.ext_c0),
            self.format_elem(self.omega)
        )
    }

    pub fn is_base(&self, x: Elem) -> bool {
        x.0 < self.q
    }

    /// The prime-field element `n mod p`.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u32)
    }

    /// Iterates the elements of the field at `level` in canonical order.
    pub fn elements(&self, level: Level) -> impl Iterator<Item = Elem> {
        (0..self.size(level)).map(Elem)
    }

    /// Coordinates over `F_p` (`k` of them for base, `2k` for ext).
    pub fn coords(&self, x: FieldElement) -> Vec<u32> {
        let n = match x.level {
            Level::Base => self.k as usize,
            Level::Ext => 2 * self.k as usize,
        };
        let mut idx = x.elem.0;
        (0..n)
            .map(|_| {
                let d = idx % self.p;
                idx /= self.p;
                d
            })
            .collect()
    }

    pub fn from_coords(&self, level: Level, coords: &[u32]) -> Result<FieldElement> {
        let n = match level {
            Level::Base => self.k as usize,
            Level::Ext => 2 * self.k as usize,
        };
        if coords.len() != n || coords.iter().any(|&c| c >= self.p) {
            return Err(Error::Parse(format!("expected {} coordinates in [0, {})", n, self.p)));
        }
        let idx = coords.iter().rev().fold(0u32, |acc, &d| acc * self.p + d);
        Ok(FieldElement { level, elem: Elem(idx) })
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        if self.k == 1 {
            let p = self.p;
            let (a1, b1) = (x.0 % p, x.0 / p);
            let (a2, b2) = (y.0 % p, y.0 / p);
            let a = a1 + a2;
            let b = b1 + b2;
            Elem((if a >= p { a - p } else { a }) + p * (if b >= p { b - p } else { b }))
        } else {
            self.digitwise(x, y, |a, b| (a + b) % self.p)
        }
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        if self.k == 1 {
            let p = self.p;
            let (a, b) = (x.0 % p, x.0 / p);
            Elem((p - a) % p + p * ((p - b) % p))
        } else {
            self.digitwise(x, Elem::ZERO, |a, _| (self.p - a) % self.p)
        }
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    fn digitwise(&self, x: Elem, y: Elem, f: impl Fn(u32, u32) -> u32) -> Elem {
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..2 * self.k {
            out += f(a % self.p, b % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        if x.0 == 0 || y.0 == 0 {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[x.0 as usize] + self.log[y.0 as usize]) as usize])
    }

    /// Multiplicative inverse; `x` must be nonzero.
    #[inline]
    pub fn inv(&self, x: Elem) -> Elem {
        debug_assert!(x.0 != 0, "inverse of zero");
        let n = self.qq - 1;
        Elem(self.exp[((n - self.log[x.0 as usize]) % n) as usize])
    }

    pub fn pow(&self, x: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if x.0 == 0 {
            return Elem::ZERO;
        }
        let n = (self.qq - 1) as u64;
        let l = self.log[x.0 as usize] as u64 * (e % n) % n;
        Elem(self.exp[l as usize])
    }

    pub fn pow_big(&self, x: Elem, e: &BigUint) -> Elem {
        let n = BigUint::from(self.qq - 1);
        let zero = BigUint::from(0u32);
        if *e == zero {
            return Elem::ONE;
        }
        let r = (e % &n).to_u64().expect("reduced exponent fits");
        if r == 0 {
            return if x.0 == 0 { Elem::ZERO } else { Elem::ONE };
        }
        self.pow(x, r)
    }

    /// Discrete logarithm to the canonical generator; `x` must be nonzero.
    pub fn log(&self, x: Elem) -> u32 {
        self.log[x.0 as usize]
    }

    /// `x^(q) `: the nontrivial automorphism of `F_{q²}/F_q`.
    #[inline]
    pub fn frob(&self, x: Elem) -> Elem {
        if x.0 == 0 {
            return x;
        }
        let n = self.qq - 1;
        Elem(self.exp[((self.log[x.0 as usize] as u64 * self.q as u64) % n as u64) as usize])
    }

    /// Frobenius on a level-tagged element; base-level input is rejected.
    pub fn frobenius(&self, x: FieldElement) -> Result<FieldElement> {
        if x.level != Level::Ext {
            return Err(Error::LevelMismatch("frobenius expects an extension-level element"));
        }
        Ok(FieldElement { level: Level::Ext, elem: self.frob(x.elem) })
    }

    /// Index `j` with `x^((q²-1)/3) = Ω(ϖ)^j`, for nonzero `x`.
    #[inline]
    pub fn cubic_class(&self, x: Elem) -> u8 {
        ((self.log[x.0 as usize] % 3) as u8 * self.omega_exp) % 3
    }

    /// `Ω`: `ϖ^j ↦ Ω(ϖ)^j`.
    pub fn cube_root_forward(&self, v: EisensteinValue) -> Result<Elem> {
        match v {
            EisensteinValue::Zero => Err(Error::NotCubeRoot),
            EisensteinValue::Root(j) => Ok(self.pow(self.omega, j as u64)),
        }
    }

    /// `Ω⁻¹` on the cube roots of unity of `F_{q²}`.
    pub fn cube_root_inverse(&self, x: Elem) -> Result<EisensteinValue> {
        (0..3u8)
            .find(|&j| self.pow(self.omega, j as u64) == x)
            .map(EisensteinValue::Root)
            .ok_or(Error::NotCubeRoot)
    }

    /// Absolute trace `F_q → F_p` of a base element, as an integer in `[0, p)`.
    pub fn trace_to_prime(&self, x: Elem) -> u32 {
        let mut acc = Elem::ZERO;
        let mut y = x;
        for _ in 0..self.k {
            acc = self.add(acc, y);
            y = self.pow(y, self.p as u64);
        }
        debug_assert!(acc.0 < self.p);
        acc.0
    }

    /// `ψ(x) = exp(2πi·Tr(x)/p)` on `F_q`.
    pub fn additive_character(&self, x: FieldElement) -> Result<Complex64> {
        if x.level != Level::Base || !self.is_base(x.elem) {
            return Err(Error::LevelMismatch("additive character is defined on F_q"));
        }
        Ok(self.psi(x.elem))
    }

    pub(crate) fn psi(&self, x: Elem) -> Complex64 {
        let tr = self.trace_to_prime(x);
        Complex64::from_polar(1.0, 2.0 * PI * tr as f64 / self.p as f64)
    }

    /// Literal for an element: a decimal for prime-field elements, otherwise
    /// a bracketed coordinate list (`[c0,...]` for base, `[a,b]` for
    /// `a + b·t`).
    pub fn format_elem(&self, x: Elem) -> String {
        if x.0 < self.p {
            return x.0.to_string();
        }
        if self.is_base(x) {
            let c = self.coords(FieldElement { level: Level::Base, elem: x });
            let parts: Vec<String> = c.iter().map(|d| d.to_string()).collect();
            return format!("[{}]", parts.join(","));
        }
        let a = Elem(x.0 % self.q);
        let b = Elem(x.0 / self.q);
        format!("[{},{}]", self.format_elem(a), self.format_elem(b))
    }

    /// Parses an element literal declared at `level`.
    pub fn parse_elem(&self, s: &str, level: Level) -> Result<Elem> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let parts = split_top_level(inner, ',');
            if level == Level::Ext && parts.len() == 2 {
                let a = self.parse_elem(parts[0], Level::Base)?;
                let b = self.parse_elem(parts[1], Level::Base)?;
                return Ok(Elem(a.0 + self.q * b.0));
            }
            if parts.len() == self.k as usize && self.k > 1 {
                let coords = parts
                    .iter()
                    .map(|p| p.trim().parse::<u32>().map_err(|e| Error::Parse(format!("{p:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                return Ok(self.from_coords(Level::Base, &coords)?.elem);
            }
            return Err(Error::Parse(format!("bad element literal {s:?}")));
        }
        let n: u32 = s.parse().map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        if n >= self.p {
            return Err(Error::Parse(format!("{n} is not in [0, {})", self.p)));
        }
        Ok(Elem(n))
    }
}

fn find_base_modulus(p: u64, k: usize) -> Vec<u64> {
    let count = p.pow(k as u32);
    for idx in 0..count {
        let mut m = Vec::with_capacity(k + 1);
        let mut r = idx;
        for _ in 0..k {
            m.push(r % p);
            r /= p;
        }
        m.push(1);
        if m[0] != 0 && fp_poly::is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}
