use std::path::Path;
use std::process::{Command, Output};

fn cubicl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubicl")).args(args).env_remove("CUBICL_CACHE_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn read_json(p: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap()
}

#[test]
fn kummer_q_is_a_validation_error() {
    let o = cubicl(&["moment", "--q", "7", "--g", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NotNonKummer"));
}

#[test]
fn odd_genus_is_a_validation_error() {
    let o = cubicl(&["moment", "--q", "5", "--g", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("OddGenus"));
}

#[test]
fn composite_q_and_bad_literals() {
    assert_eq!(cubicl(&["family", "--q", "6", "--g", "0"]).status.code(), Some(2));
    assert_eq!(cubicl(&["moment", "--q", "5", "--g", "2", "--h1", "T^^2"]).status.code(), Some(2));
    assert_eq!(cubicl(&["moment", "--q", "5", "--g", "2", "--h1", "2*T"]).status.code(), Some(2));
    assert_eq!(cubicl(&["dds", "scan", "--q", "5", "--grid", "0.1"]).status.code(), Some(2));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(cubicl(&["moment", "--q", "5", "--g", "2", "--nope"]).status.code(), Some(64));
    assert_eq!(cubicl(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(cubicl(&[]).status.code(), Some(64));
    assert_eq!(cubicl(&["--help"]).status.code(), Some(0));
    assert_eq!(cubicl(&["--version"]).status.code(), Some(0));
}

#[test]
fn verify_all_passes() {
    let o = cubicl(&["verify", "all", "--q", "5", "--g", "2", "--max-deg", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    for suite in ["gauss", "fe", "rh", "chi-d", "local-factors"] {
        assert!(out.lines().any(|l| l.starts_with(suite) && l.contains("PASS")), "{out}");
    }
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_gauss_csv() {
    let o = cubicl(&["verify", "gauss", "--q", "5", "--g", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("F,deviation"));
    let rows: Vec<f64> = lines.map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(rows.len(), 480);
    assert!(rows.iter().all(|&d| d < 1e-6));
}

#[test]
fn moment_report_schema_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = cubicl(&["moment", "--q", "5", "--g", "2", "--h1", "T", "--h2", "T^2+1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = read_json(&out);
    for key in [
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
    ] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["family_size"], 480);
    assert_eq!(r["h2"], "T^2+1");
    let m = read_json(&dir.path().join("report.json.manifest.json"));
    assert_eq!(m["tower"]["p"], 5);
    assert_eq!(m["tower"]["k"], 1);
    assert!(m["tower"]["omega_image"].is_string());
    assert!(m["command_line"].as_array().unwrap().iter().any(|a| a == "moment"));
    assert_eq!(m["cutoffs"]["p"], 14);
    assert_eq!(m["output_sha256"].as_str().unwrap().len(), 64);
    assert!(m["runtime_ms"].is_u64());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    let mut sums = Vec::new();
    for (i, threads) in ["1", "3", "2"].iter().enumerate() {
        let out = dir.path().join(format!("m{i}.json"));
        let o = cubicl(&["--threads", threads, "--no-timing", "moment", "--q", "5", "--g", "2", "--h1", "T", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        bodies.push(std::fs::read(&out).unwrap());
        sums.push(read_json(&dir.path().join(format!("m{i}.json.manifest.json")))["output_sha256"].clone());
    }
    assert!(bodies.windows(2).all(|w| w[0] == w[1]));
    assert!(sums.windows(2).all(|w| w[0] == w[1]));
    // with timing on, the checksum still ignores runtime_ms
    let out = dir.path().join("timed.json");
    cubicl(&["moment", "--q", "5", "--g", "2", "--h1", "T", "--out", out.to_str().unwrap()]);
    assert_eq!(read_json(&dir.path().join("timed.json.manifest.json"))["output_sha256"], sums[0]);
    let a = cubicl(&["dds", "scan", "--q", "5", "--grid", "0.001:0.1:3/0.2", "--m-f", "2"]);
    let b = cubicl(&["--threads", "2", "dds", "scan", "--q", "5", "--grid", "0.001:0.1:3/0.2", "--m-f", "2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn family_cache_round_trip() {
    let cache = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_cubicl"))
            .args(["family", "--q", "5", "--g", "2"])
            .env("CUBICL_CACHE_DIR", cache.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert!(stderr(&first).contains("\"family_cache\": \"miss\""));
    let second = run();
    assert!(stderr(&second).contains("\"family_cache\": \"hit\""));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read_dir(cache.path()).unwrap().count(), 1);
    let plain = cubicl(&["family", "--q", "5", "--g", "2"]);
    assert_eq!(plain.stdout, first.stdout);
    let r: serde_json::Value = serde_json::from_slice(&plain.stdout).unwrap();
    assert_eq!(r["family_size"], 480);
}

#[test]
fn corrupt_cache_entry_is_rebuilt() {
    let cache = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_cubicl"))
            .args(["family", "--q", "5", "--g", "0"])
            .env("CUBICL_CACHE_DIR", cache.path())
            .output()
            .unwrap()
    };
    let good = run();
    let entry = std::fs::read_dir(cache.path()).unwrap().next().unwrap().unwrap().path();
    std::fs::write(&entry, b"{not json").unwrap();
    let again = run();
    assert!(stderr(&again).contains("\"family_cache\": \"miss\""));
    assert_eq!(good.stdout, again.stdout);
}

#[test]
fn lpoly_prints_pairs_then_central_value() {
    let o = cubicl(&["lpoly", "--q", "5", "--F", "T^2+[0,1]"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "(1,0)");
    assert!(lines[1..4].iter().all(|l| l.starts_with('(') && l.ends_with(')')));
    assert!(lines[4].starts_with("central_value "));
    // divisible by a base-field polynomial: not in the family
    assert_eq!(cubicl(&["lpoly", "--q", "5", "--F", "T^2+1"]).status.code(), Some(2));
}

#[test]
fn constants_report_fields() {
    let o = cubicl(&["constants", "--q", "5", "--h1", "T", "--h2", "1", "--v-mode", "half", "--cutoff", "12"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["P_val", "P_tail", "S_val", "S_flag", "S_increments", "C_val", "main_term", "residue_form"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["S_flag"], "NON_CONVERGENT");
    assert_eq!(r["S_increments"].as_array().unwrap().len(), 12);
    let p = r["P_val"].as_f64().unwrap();
    assert!(p > 0.0 && p < 1.0);
    let small = cubicl(&["constants", "--q", "5", "--v-mode", "0.05"]);
    let r: serde_json::Value = serde_json::from_slice(&small.stdout).unwrap();
    assert_eq!(r["S_flag"], "CONVERGENT");
    assert_eq!(cubicl(&["constants", "--q", "5", "--v-mode", "fast"]).status.code(), Some(2));
}

#[test]
fn dds_scan_csv_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = cubicl(&["dds", "scan", "--q", "5", "--grid", "0.0001:0.2:4/0.2,1", "--m-f", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("abs_u,abs_v,slope,class"));
    let classes: Vec<String> = lines.map(|l| l.rsplit(',').next().unwrap().to_string()).collect();
    assert_eq!(classes.len(), 8);
    assert!(classes.iter().all(|c| ["decaying", "flat", "growing"].contains(&c.as_str())));
    assert!(dir.path().join("scan.csv.manifest.json").exists());

    let o = cubicl(&["dds", "compare", "--q", "5", "--s", "2", "--w", "1", "--cutoffs", "2,2,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r["direct"].is_array() && r["mobius"].is_array());
    assert!(r["residual"].as_f64().unwrap() < 1e-4);
    let o = cubicl(&["dds", "compare", "--q", "5", "--s", "0.5", "--w", "1", "--cutoffs", "2,2,2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("OutOfRegion"));
}
