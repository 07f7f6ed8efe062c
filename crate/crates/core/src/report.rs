//! Machine-readable reports. Floats are written with 17 significant digits;
//! non-finite values become `null`.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::constants::{Convergence, MainTerm};
use crate::eisenstein::EisensteinInt;
use crate::family::{FamilySpec, MomentPolynomial};
use crate::field::FieldTower;
use crate::poly::format_poly;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A float serialized with 17 significant digits.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Num(pub f64);

pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        "0.0000000000000000e0".to_string()
    } else if x.is_finite() {
        format!("{:.16e}", x)
    } else {
        "null".to_string()
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        RawValue::from_string(fmt_num(self.0)).map_err(serde::ser::Error::custom)?.serialize(s)
    }
}

impl From<f64> for Num {
    fn from(x: f64) -> Num {
        Num(x)
    }
}

pub fn nums(xs: &[f64]) -> Vec<Num> {
    xs.iter().map(|&x| Num(x)).collect()
}

/// Exact form `(E + O/√q) / q^H` of a moment value.
#[derive(Clone, Debug, Serialize)]
pub struct ExactValue {
    pub even: EisensteinInt,
    pub odd: EisensteinInt,
    pub q_power: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub q: u32,
    pub g: u32,
    pub h1: String,
    pub h2: String,
    pub family_size: u64,
    pub zero_twist_count: u64,
    pub moment_re: Num,
    pub moment_im: Num,
    pub q_pow_g_ratio: Num,
    pub main_term: Num,
    pub main_term_ratio: Num,
    /// `null` when timing is suppressed.
    pub runtime_ms: Option<u64>,
    pub tool_version: String,
    pub tower_moduli: String,
    pub abs_main_term: Num,
    /// Whether the signed main term and the real part of the moment have the same sign.
    pub sign_agrees: bool,
    pub s_flag: Convergence,
    /// `moment / (g(g+2) q^{g+2})`, `null` for `g = 0`.
    pub g_quadratic_ratio: Num,
    pub exact: ExactValue,
    pub coefficients: Vec<EisensteinInt>,
}

pub const MOMENT_CSV_COLUMNS: [&str; 14] = [
    "q",
    "g",
    "h1",
    "h2",
    "family_size",
    "zero_twist_count",
    "moment_re",
    "moment_im",
    "q_pow_g_ratio",
    "main_term",
    "main_term_ratio",
    "runtime_ms",
    "tool_version",
    "tower_moduli",
];

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl MomentReport {
    pub fn new(t: &FieldTower, spec: &FamilySpec, moment: &MomentPolynomial, main: &MainTerm, runtime_ms: Option<u64>) -> MomentReport {
        let q = t.q();
        let qf = q as f64;
        let g = spec.g;
        let value = moment.evaluate(q);
        let (even, odd, q_power) = moment.exact_parts(q);
        let gq = (g * (g + 2)) as f64 * qf.powi(g as i32 + 2);
        MomentReport {
            q,
            g,
            h1: format_poly(&spec.h1, t),
            h2: format_poly(&spec.h2, t),
            family_size: moment.family_size,
            zero_twist_count: moment.zero_twist_count,
            moment_re: Num(value.re),
            moment_im: Num(value.im),
            q_pow_g_ratio: Num(value.re / qf.powi(g as i32)),
            main_term: Num(main.main_term),
            main_term_ratio: Num(value.re / main.main_term),
            runtime_ms,
            tool_version: TOOL_VERSION.to_string(),
            tower_moduli: t.moduli_description(),
            abs_main_term: Num(main.abs_main_term),
            sign_agrees: (value.re > 0.0) == (main.main_term > 0.0),
            s_flag: main.s_flag,
            g_quadratic_ratio: Num(if g == 0 { f64::NAN } else { value.re / gq }),
            exact: ExactValue { even, odd, q_power },
            coefficients: moment.coeffs.clone(),
        }
    }

    pub fn csv_header() -> String {
        MOMENT_CSV_COLUMNS.join(",")
    }

    pub fn csv_row(&self) -> String {
        [
            self.q.to_string(),
            self.g.to_string(),
            csv_field(&self.h1),
            csv_field(&self.h2),
            self.family_size.to_string(),
            self.zero_twist_count.to_string(),
            fmt_num(self.moment_re.0),
            fmt_num(self.moment_im.0),
            fmt_num(self.q_pow_g_ratio.0),
            fmt_num(self.main_term.0),
            fmt_num(self.main_term_ratio.0),
            self.runtime_ms.map_or(String::new(), |r| r.to_string()),
            csv_field(&self.tool_version),
            csv_field(&self.tower_moduli),
        ]
        .join(",")
    }
}

#[derive(Clone, Debug, Serialize)]
#[allow(non_snake_case)]
pub struct ConstantsReport {
    pub q: u64,
    pub g: u32,
    pub h1: String,
    pub h2: String,
    pub v: Num,
    pub P_val: Num,
    pub P_tail: Num,
    pub S_val: Num,
    pub S_flag: Convergence,
    pub S_increments: Vec<Num>,
    pub S_harmonic_fit: Num,
    pub C_val: Num,
    pub main_term: Num,
    pub abs_main_term: Num,
    pub residue_form: Num,
    pub identity_residual: Num,
    pub cutoff_p: u32,
    pub cutoff_s: u32,
}

impl ConstantsReport {
    pub fn new(h1: &str, h2: &str, v: f64, m: &MainTerm) -> ConstantsReport {
        ConstantsReport {
            q: m.q,
            g: m.g,
            h1: h1.to_string(),
            h2: h2.to_string(),
            v: Num(v),
            P_val: Num(m.p_val),
            P_tail: Num(m.p_tail),
            S_val: Num(m.s_val),
            S_flag: m.s_flag,
            S_increments: nums(&m.s_increments),
            S_harmonic_fit: Num(m.s_harmonic_fit),
            C_val: Num(m.c_val),
            main_term: Num(m.main_term),
            abs_main_term: Num(m.abs_main_term),
            residue_form: Num(m.residue_form),
            identity_residual: Num(m.identity_residual),
            cutoff_p: m.cutoffs.p,
            cutoff_s: m.cutoffs.s,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        let s = serde_json::to_string(&Num(1.0 / 3.0)).unwrap();
        assert_eq!(s, "3.3333333333333331e-1");
        let back: f64 = s.parse().unwrap();
        assert_eq!(back, 1.0 / 3.0);
        assert_eq!(serde_json::to_string(&Num(f64::NAN)).unwrap(), "null");
        assert_eq!(fmt_num(-0.0), fmt_num(0.0));
        assert_eq!(serde_json::to_string(&vec![Num(-2.5), Num(0.0)]).unwrap(), "[-2.5000000000000000e0,0.0000000000000000e0]");
        for x in [1e-300, 123456.789, -7.0e22, f64::MIN_POSITIVE] {
            assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("T^2+[1,0]"), "\"T^2+[1,0]\"");
        assert_eq!(csv_field("T+1"), "T+1");
    }
}
