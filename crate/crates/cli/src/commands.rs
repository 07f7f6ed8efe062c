use std::time::Instant;

use anyhow::Result;
use cubicl::constants::{main_term, main_term_at, Cutoffs};
use cubicl::dds::{a2_direct_truncation, a2_mobius_representation, region_scan, A2Coefficients, DdsConfig, DdsCutoffs, Growth};
use cubicl::family::default_shards;
use cubicl::lfunc::l_polynomial;
use cubicl::poly::{format_poly, parse_poly};
use cubicl::report::{fmt_num, ConstantsReport, MomentReport, Num};
use cubicl::verify::{self, SuiteResult};
use cubicl::{primitivity_and_conductor, FamilySpec, FieldTower, Level, MomentEngine, MonicPoly};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::args::{Cli, Command, CompareArgs, ConstantsArgs, DdsCommand, FamilyArgs, Format, LpolyArgs, MomentArgs, ScanArgs, Suite, Twists, VerifyArgs};
use crate::cache::{self, CacheStatus};
use crate::output::Rendered;
use crate::Validation;

pub struct Outcome {
    pub tower: FieldTower,
    pub rendered: Rendered,
    pub cutoffs: serde_json::Value,
    pub cache: CacheStatus,
    /// Set when a verify suite ran to completion but did not pass.
    pub failure: Option<String>,
}

impl Outcome {
    fn new(tower: FieldTower, rendered: Rendered) -> Outcome {
        Outcome { tower, rendered, cutoffs: serde_json::Value::Null, cache: CacheStatus::Disabled, failure: None }
    }
}

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Moment(a) => moment(a, cli.format, cli.no_timing),
        Command::Lpoly(a) => lpoly(a, cli.format),
        Command::Family(a) => family(a, cli.format),
        Command::Constants(a) => constants(a),
        Command::Verify(a) => verify_cmd(a, cli.format),
        Command::Dds { command: DdsCommand::Scan(a) } => dds_scan(a, cli.format),
        Command::Dds { command: DdsCommand::Compare(a) } => dds_compare(a),
    }
}

fn json_line<T: Serialize>(x: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(x)? + "\n")
}

fn base_monic(t: &FieldTower, s: &str) -> Result<MonicPoly> {
    Ok(MonicPoly::new(parse_poly(s, Level::Base, t)?)?)
}

fn twists(t: &FieldTower, tw: &Twists) -> Result<(MonicPoly, MonicPoly)> {
    Ok((base_monic(t, &tw.h1)?, base_monic(t, &tw.h2)?))
}

fn moment(a: &MomentArgs, format: Option<Format>, no_timing: bool) -> Result<Outcome> {
    let t = FieldTower::from_order(a.q)?;
    let (h1, h2) = twists(&t, &a.twists)?;
    let spec = FamilySpec::new(a.g, h1.clone(), h2.clone())?;
    let start = Instant::now();
    let (fam, status) = cache::family(&t, a.g)?;
    let m = MomentEngine::new(&t, spec.clone()).moment(&fam, default_shards());
    let cutoffs = Cutoffs { p: a.cutoff_p, s: a.cutoff_s, c: a.cutoff_c };
    let main = main_term(&t, a.g, &h1, &h2, cutoffs)?;
    let ms = start.elapsed().as_millis() as u64;
    let mut report = MomentReport::new(&t, &spec, &m, &main, (!no_timing).then_some(ms));
    let render = |r: &MomentReport| -> Result<String> {
        Ok(match format.unwrap_or(Format::Json) {
            Format::Json => json_line(r)?,
            Format::Csv => format!("{}\n{}\n", MomentReport::csv_header(), r.csv_row()),
        })
    };
    let body = render(&report)?;
    report.runtime_ms = None;
    let stable = render(&report)?;
    let mut out = Outcome::new(t, Rendered { body, stable: Some(stable) });
    out.cutoffs = serde_json::to_value(cutoffs)?;
    out.cache = status;
    Ok(out)
}

fn pair(z: Complex64) -> [Num; 2] {
    [Num(z.re), Num(z.im)]
}

fn lpoly(a: &LpolyArgs, format: Option<Format>) -> Result<Outcome> {
    let t = FieldTower::from_order(a.q)?;
    let f = MonicPoly::new(parse_poly(&a.f, Level::Ext, &t)?)?;
    let chi = primitivity_and_conductor(&t, &f)?;
    let l = l_polynomial(&t, &chi)?;
    let cv = l.central_value(t.q());
    let body = match format {
        Some(Format::Json) => {
            #[derive(Serialize)]
            struct LpolyReport<'a> {
                #[serde(rename = "F")]
                f: String,
                genus: u32,
                coefficients: &'a [cubicl::EisensteinInt],
                central_value: [Num; 2],
            }
            json_line(&LpolyReport { f: format_poly(&f, &t), genus: chi.genus(), coefficients: &l.coeffs, central_value: pair(cv) })?
        }
        Some(Format::Csv) => return Err(Validation("lpoly has no CSV form".into()).into()),
        None => {
            let mut s: String = l.coeffs.iter().map(|c| format!("({},{})\n", c.a, c.b)).collect();
            s.push_str(&format!("central_value {} {}\n", fmt_num(cv.re), fmt_num(cv.im)));
            s
        }
    };
    Ok(Outcome::new(t, Rendered::plain(body)))
}

fn family(a: &FamilyArgs, format: Option<Format>) -> Result<Outcome> {
    let t = FieldTower::from_order(a.q)?;
    FamilySpec::untwisted(a.g)?;
    let (fam, status) = cache::family(&t, a.g)?;
    let members: Vec<String> = (0..fam.len()).map(|i| format_poly(&fam.modulus(&t, i), &t)).collect();
    let body = match format.unwrap_or(Format::Json) {
        Format::Json => {
            #[derive(Serialize)]
            struct FamilyReport<'a> {
                q: u32,
                g: u32,
                degree: usize,
                family_size: usize,
                members: &'a [String],
            }
            json_line(&FamilyReport { q: t.q(), g: a.g, degree: fam.degree, family_size: fam.len(), members: &members })?
        }
        Format::Csv => std::iter::once("F".to_string()).chain(members.iter().map(|m| csv_quote(m))).map(|l| l + "\n").collect(),
    };
    let mut out = Outcome::new(t, Rendered::plain(body));
    out.cache = status;
    Ok(out)
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn constants(a: &ConstantsArgs) -> Result<Outcome> {
    let t = FieldTower::from_order(a.q)?;
    let (h1, h2) = twists(&t, &a.twists)?;
    let cutoffs = Cutoffs { p: a.cutoff_p, s: a.cutoff, c: a.cutoff };
    let (v, m) = if a.v_mode == "half" {
        ((t.q() as f64).powf(-0.5), main_term(&t, a.g, &h1, &h2, cutoffs)?)
    } else {
        let v: f64 = a.v_mode.parse().map_err(|_| Validation(format!("--v-mode expects `half` or a number, got {:?}", a.v_mode)))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(Validation(format!("--v-mode must be positive, got {v}")).into());
        }
        (v, main_term_at(&t, a.g, &h1, &h2, Complex64::new(v, 0.0), cutoffs)?)
    };
    let report = ConstantsReport::new(&format_poly(&h1, &t), &format_poly(&h2, &t), v, &m);
    let mut out = Outcome::new(t, Rendered::plain(json_line(&report)?));
    out.cutoffs = serde_json::to_value(cutoffs)?;
    Ok(out)
}

fn rows_csv(col: &str, rows: &[(String, f64)]) -> String {
    let mut s = format!("F,{col}\n");
    for (f, d) in rows {
        s.push_str(&format!("{},{}\n", csv_quote(f), fmt_num(*d)));
    }
    s
}

fn summary_table(suites: &[SuiteResult]) -> String {
    let mut s = format!("{:<14} {:>7} {:>24} {:>10}  {:<6} {}\n", "suite", "cases", "worst", "tolerance", "status", "detail");
    for r in suites {
        s.push_str(&format!(
            "{:<14} {:>7} {:>24} {:>10.0e}  {:<6} {}\n",
            r.suite,
            r.cases,
            fmt_num(r.worst.0),
            r.tolerance.0,
            if r.pass { "PASS" } else { "FAIL" },
            r.detail
        ));
    }
    s
}

fn verify_cmd(a: &VerifyArgs, format: Option<Format>) -> Result<Outcome> {
    let t = FieldTower::from_order(a.q)?;
    let needs_family = matches!(a.suite, Suite::Gauss | Suite::Fe | Suite::Rh | Suite::All);
    let (fam, status) = if needs_family {
        FamilySpec::untwisted(a.g)?;
        let (f, s) = cache::family(&t, a.g)?;
        (Some(f), s)
    } else {
        (None, CacheStatus::Disabled)
    };
    let per_member = |suite: SuiteResult, col: &str, rows: Vec<(String, f64)>| -> Result<(String, Vec<SuiteResult>)> {
        let body = match format {
            Some(Format::Json) => {
                #[derive(Serialize)]
                struct Rows<'a> {
                    summary: &'a SuiteResult,
                    column: &'a str,
                    rows: Vec<(&'a str, Num)>,
                }
                json_line(&Rows { summary: &suite, column: col, rows: rows.iter().map(|(f, d)| (f.as_str(), Num(*d))).collect() })?
            }
            _ => rows_csv(col, &rows),
        };
        Ok((body, vec![suite]))
    };
    let (body, suites) = match a.suite {
        Suite::Gauss => {
            let fam = fam.as_ref().unwrap();
            per_member(verify::gauss_suite(&t, fam)?, "deviation", verify::gauss_deviations(&t, fam)?)?
        }
        Suite::Fe => {
            let fam = fam.as_ref().unwrap();
            per_member(verify::fe_suite(&t, fam)?, "residual", verify::fe_residuals(&t, fam)?)?
        }
        Suite::Rh => {
            let fam = fam.as_ref().unwrap();
            per_member(verify::rh_suite(&t, fam)?, "deviation", verify::rh_deviations(&t, fam)?)?
        }
        Suite::ChiD | Suite::LocalFactors | Suite::All => {
            let mut suites = Vec::new();
            if let Some(fam) = &fam {
                suites.push(verify::gauss_suite(&t, fam)?);
                suites.push(verify::fe_suite(&t, fam)?);
                suites.push(verify::rh_suite(&t, fam)?);
            }
            if matches!(a.suite, Suite::ChiD | Suite::All) {
                suites.push(verify::chi_d_suite(&t, a.max_deg));
            }
            if matches!(a.suite, Suite::LocalFactors | Suite::All) {
                suites.push(verify::local_factor_suite(t.q() as u64)?);
            }
            let body = match format {
                Some(Format::Json) => json_line(&suites)?,
                Some(Format::Csv) => {
                    let mut s = "suite,cases,worst,tolerance,pass\n".to_string();
                    for r in &suites {
                        s.push_str(&format!("{},{},{},{},{}\n", r.suite, r.cases, fmt_num(r.worst.0), fmt_num(r.tolerance.0), r.pass));
                    }
                    s
                }
                None => summary_table(&suites),
            };
            (body, suites)
        }
    };
    let failed: Vec<&str> = suites.iter().filter(|s| !s.pass).map(|s| s.suite.as_str()).collect();
    let mut out = Outcome::new(t, Rendered::plain(body));
    out.cache = status;
    out.cutoffs = json!({ "g": a.g, "max_deg": a.max_deg });
    if !failed.is_empty() {
        out.failure = Some(failed.join(", "));
    }
    Ok(out)
}

/// One grid axis: `a,b,c` or `lo:hi:n` with `n` log-spaced points.
pub fn parse_axis(s: &str) -> std::result::Result<Vec<f64>, Validation> {
    let bad = |what: &str| Validation(format!("bad grid axis {s:?}: {what}"));
    let xs: Vec<f64> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected lo:hi:n"));
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad("lo"))?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad("hi"))?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad("n"))?;
        if n == 0 || lo <= 0.0 || hi <= 0.0 {
            return Err(bad("need n >= 1 and positive bounds"));
        }
        if n == 1 {
            vec![lo]
        } else {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
        }
    } else {
        s.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| bad(x))).collect::<std::result::Result<_, _>>()?
    };
    if xs.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
        return Err(bad("grid points must be positive"));
    }
    Ok(xs)
}

/// `U/V` as (|u|, |v|) points, `|u|` varying fastest.
pub fn parse_grid(s: &str) -> std::result::Result<Vec<(f64, f64)>, Validation> {
    let (u, v) = s.split_once('/').ok_or_else(|| Validation(format!("grid {s:?} must be `U/V`")))?;
    let us = parse_axis(u)?;
    let vs = parse_axis(v)?;
    Ok(vs.iter().flat_map(|&v| us.iter().map(move |&u| (u, v))).collect())
}

fn dds_scan(a: &ScanArgs, format: Option<Format>) -> Result<Outcome> {
    let t = FieldTower::from_order(a.q)?;
    let (h1, h2) = twists(&t, &a.twists)?;
    let grid = parse_grid(&a.grid)?;
    if a.m_f < 2 {
        return Err(Validation("--m-f must be at least 2 to fit a slope".into()).into());
    }
    let coeffs = A2Coefficients::new(&t, &h1, &h2, a.m_f);
    let rows = region_scan(&coeffs, &grid);
    let body = match format {
        Some(Format::Json) => {
            #[derive(Serialize)]
            struct Row {
                abs_u: Num,
                abs_v: Num,
                slope: Num,
                class: Growth,
            }
            json_line(&rows.iter().map(|r| Row { abs_u: Num(r.abs_u), abs_v: Num(r.abs_v), slope: Num(r.slope), class: r.class }).collect::<Vec<_>>())?
        }
        _ => {
            let mut s = "abs_u,abs_v,slope,class\n".to_string();
            for r in &rows {
                s.push_str(&format!("{},{},{},{}\n", fmt_num(r.abs_u), fmt_num(r.abs_v), fmt_num(r.slope), r.class));
            }
            s
        }
    };
    let mut out = Outcome::new(t, Rendered::plain(body));
    out.cutoffs = json!({ "m_f": a.m_f });
    Ok(out)
}

pub fn parse_cutoffs(s: &str) -> std::result::Result<DdsCutoffs, Validation> {
    let xs: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Validation(format!("--cutoffs expects m_F,m_N,m_D, got {s:?}")))?;
    match xs[..] {
        [m_f, m_n, m_d] => Ok(DdsCutoffs { m_f, m_n, m_d }),
        _ => Err(Validation(format!("--cutoffs expects three values, got {s:?}"))),
    }
}

#[derive(Serialize)]
struct CompareReport {
    q: u32,
    h1: String,
    h2: String,
    s: Num,
    w: Num,
    u: [Num; 2],
    v: [Num; 2],
    cutoffs: DdsCutoffs,
    direct: [Num; 2],
    direct_by_degree: Vec<[Num; 2]>,
    mobius: [Num; 2],
    mobius_tail_bound: Num,
    mobius_pairs: usize,
    mobius_primes: usize,
    /// `|direct - mobius|`.
    residual: Num,
}

fn dds_compare(a: &CompareArgs) -> Result<Outcome> {
    let t = FieldTower::from_order(a.q)?;
    let (h1, h2) = twists(&t, &a.twists)?;
    let cutoffs = parse_cutoffs(&a.cutoffs)?;
    let cfg = DdsConfig::from_s_w(t.q(), h1.clone(), h2.clone(), Complex64::new(a.s, 0.0), Complex64::new(a.w, 0.0), cutoffs)?;
    let direct = a2_direct_truncation(&t, &cfg);
    let mobius = a2_mobius_representation(&t, &cfg, a.tolerance)?;
    let report = CompareReport {
        q: t.q(),
        h1: format_poly(&h1, &t),
        h2: format_poly(&h2, &t),
        s: Num(a.s),
        w: Num(a.w),
        u: pair(cfg.u),
        v: pair(cfg.v),
        cutoffs,
        direct: pair(direct.value),
        direct_by_degree: direct.by_degree.iter().map(|&z| pair(z)).collect(),
        mobius: pair(mobius.value),
        mobius_tail_bound: Num(mobius.tail_bound),
        mobius_pairs: mobius.pair_count,
        mobius_primes: mobius.prime_count,
        residual: Num((direct.value - mobius.value).norm()),
    };
    let body = json_line(&report)?;
    let mut out = Outcome::new(t, Rendered::plain(body));
    out.cutoffs = serde_json::to_value(cutoffs)?;
    Ok(out)
}
