//! Fixtures shared by the benchmarks.

use cubicl::poly::{enumerate_monic, MonicFilter};
use cubicl::{enumerate_family, Family, FieldTower, Level, MonicPoly};

pub fn tower() -> FieldTower {
    FieldTower::new(5, 1).expect("q = 5 is non-Kummer")
}

pub fn family(t: &FieldTower, g: u32) -> Family {
    enumerate_family(t, g).expect("even genus")
}

/// All monic base polynomials of degree `d`.
pub fn base_monics(t: &FieldTower, d: usize) -> Vec<MonicPoly> {
    enumerate_monic(t, Level::Base, d, MonicFilter::All).collect()
}
