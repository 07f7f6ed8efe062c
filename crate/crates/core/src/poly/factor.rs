//! Factorization over `F_q` or `F_{q²}`: squarefree decomposition, then
//! distinct-degree splitting, then Cantor–Zassenhaus with a fixed seed.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{MonicPoly, Poly};
use crate::field::{prime_factors_u64, Elem, FieldTower};

const SPLIT_SEED: u64 = 0x5eed_c0be;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Distinct monic primes with multiplicities, sorted by degree then canonical index.
    pub factors: Vec<(MonicPoly, u32)>,
}

impl Factorization {
    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, m)| *m == 1)
    }

    pub fn moebius(&self) -> i32 {
        if !self.is_squarefree() {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn product(&self, t: &FieldTower, level: crate::field::Level) -> MonicPoly {
        self.factors
            .iter()
            .fold(MonicPoly::one(level), |acc, (p, m)| acc.mul(&p.pow(*m, t), t))
    }

    pub fn primes(&self) -> impl Iterator<Item = &MonicPoly> {
        self.factors.iter().map(|(p, _)| p)
    }
}

/// Complete factorization of a monic polynomial at its own level.
pub fn factorize(t: &FieldTower, f: &MonicPoly) -> Factorization {
    let mut out: Vec<(MonicPoly, u32)> = Vec::new();
    if f.deg() > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
        for (part, mult) in squarefree_parts(f.poly(), t) {
            for (g, d) in distinct_degree(&part, t) {
                let mut pieces = Vec::new();
                equal_degree(&g, d, t, &mut rng, &mut pieces);
                out.extend(pieces.into_iter().map(|p| (MonicPoly(p), mult)));
            }
        }
    }
    out.sort_by_key(|(p, _)| (p.deg(), p.monic_index(t)));
    Factorization { factors: out }
}

/// The degree-`d` prime factors of a squarefree `f` whose prime factors all have degree `d`.
pub(crate) fn split_equal_degree(t: &FieldTower, f: &Poly, d: usize) -> Vec<Poly> {
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut out = Vec::new();
    equal_degree(&f.make_monic(t), d, t, &mut rng, &mut out);
    out
}

/// Squarefree decomposition `f = Π g_i^{i}` for monic `f`, with the `p`-th root
/// step needed in positive characteristic.
fn squarefree_parts(f: &Poly, t: &FieldTower) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let df = f.derivative(t);
    let mut c = f.gcd(&df, t);
    let mut w = f.div_exact(&c, t).expect("gcd divides");
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&c, t);
        let z = w.div_exact(&y, t).expect("gcd divides");
        if z.deg() > 0 {
            out.push((z, i));
        }
        w = y;
        c = c.div_exact(&w, t).expect("gcd divides");
        i += 1;
    }
    if c.deg() > 0 {
        let p = t.p();
        for (g, m) in squarefree_parts(&c.pth_root(t), t) {
            out.push((g, m * p));
        }
    }
    out
}

/// `T^{K^n} mod f` by repeated `K`-th powering.
fn frobenius_powers(f: &Poly, n: usize, t: &FieldTower) -> Vec<Poly> {
    let k = BigUint::from(t.size(f.level()));
    let x = Poly::t(f.level()).rem(f, t);
    let mut out = vec![x];
    for i in 1..=n {
        let next = out[i - 1].powmod(&k, f, t);
        out.push(next);
    }
    out
}

fn distinct_degree(f: &Poly, t: &FieldTower) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let k = BigUint::from(t.size(f.level()));
    let x = Poly::t(f.level());
    let mut h = x.rem(&f, t);
    let mut d = 0;
    while f.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(&k, &f, t);
        let g = f.gcd(&h.sub(&x, t), t);
        if g.deg() > 0 {
            f = f.div_exact(&g, t).expect("gcd divides");
            h = h.rem(&f, t);
            out.push((g, d));
        }
    }
    if f.deg() > 0 {
        let d = f.deg();
        out.push((f, d));
    }
    out
}

fn equal_degree(f: &Poly, d: usize, t: &FieldTower, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let n = f.deg();
    if n == d {
        out.push(f.clone());
        return;
    }
    let k = t.size(f.level());
    let e = (BigUint::from(k).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = Poly::from_coeffs(f.level(), (0..n).map(|_| Elem(rng.gen_range(0..k))).collect());
        if a.deg() == 0 {
            continue;
        }
        let g0 = f.gcd(&a, t);
        let g = if g0.deg() > 0 {
            g0
        } else {
            let b = a.powmod(&e, f, t).sub(&Poly::one(f.level()), t);
            f.gcd(&b, t)
        };
        if g.deg() > 0 && g.deg() < n {
            let h = f.div_exact(&g, t).expect("gcd divides");
            equal_degree(&g, d, t, rng, out);
            equal_degree(&h, d, t, rng, out);
            return;
        }
    }
}

/// Irreducibility: root exhaustion for degree at most 2, Rabin's test above.
pub fn is_irreducible(f: &Poly, t: &FieldTower) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    if n == 2 {
        return t.elements(f.level()).all(|x| !f.eval(x, t).is_zero());
    }
    let f = f.make_monic(t);
    let frob = frobenius_powers(&f, n, t);
    let x = Poly::t(f.level());
    if frob[n] != x.rem(&f, t) {
        return false;
    }
    prime_factors_u64(n as u64).into_iter().all(|r| {
        let h = frob[n / r as usize].sub(&x, t);
        f.gcd(&h, t).deg() == 0
    })
}
