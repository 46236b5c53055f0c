use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fourier-moduli"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn version_and_help() {
    let o = run(&["--version"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains(env!("CARGO_PKG_VERSION")));
    for sub in ["gfn", "mc", "tail", "fit", "verify", "demo"] {
        let o = run(&[sub, "--help"]);
        assert_eq!(code(&o), 0, "{sub}");
        assert!(String::from_utf8_lossy(&o.stdout).contains("--"), "{sub}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["gfn", "--dim", "3", "--alpha", "1", "--bogus"])), 2);
    assert_eq!(code(&run(&["tail", "--spectrum", "corpus:bump", "--pprime", "2", "--mode", "sideways", "--t", "dyadic:1..8"])), 2);
    let o = run(&["tail", "--spectrum", "corpus:powerlaw?alpha=-1", "--pprime", "2", "--mode", "true", "--t", "dyadic:1..8"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha"));
}

#[test]
fn out_of_band_names_the_bound() {
    let o = run(&["tail", "--spectrum", "corpus:interval?N=256", "--pprime", "2", "--mode", "true", "--t", "dyadic:1..64"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Nyquist"));
}

#[test]
fn gfn_tabulates_kernel_with_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "g1.csv");
    let o = run(&[
        "gfn", "--dim", "3", "--alpha", "1", "--v-max", "20", "--v-samples", "2048",
        "--caption-normalization", "--out", &out,
    ]);
    assert_eq!(code(&o), 0);
    let mut r = csv::Reader::from_path(&out).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["v", "value", "lower_bound", "upper_bound"]);
    let rows: Vec<Vec<f64>> = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2048);
    for row in &rows {
        let (v, g, lo, hi) = (row[0], row[1], row[2], row[3]);
        let closed = if v == 0.0 { 0.0 } else { 4.0 * std::f64::consts::PI * (1.0 - v.sin() / v) };
        assert!((g - closed).abs() < 1e-9);
        assert!(lo <= g + 1e-15 && g <= hi);
    }
}

#[test]
fn tail_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "tail.csv");
    let o = run(&[
        "tail", "--spectrum", "corpus:powerlaw?d=2&pprime=2&alpha=0.5", "--pprime", "2",
        "--mode", "true", "--t", "dyadic:1..2^10:11", "--out", &out,
    ]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("t,value\n"));
    assert_eq!(text.lines().count(), 12);
    let o = run(&["fit", "--profile", &out, "--model", "auto"]);
    assert_eq!(code(&o), 0);
    let line = String::from_utf8_lossy(&o.stdout).to_string();
    let gamma: f64 = line
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix("gamma="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((gamma - 0.5).abs() < 1e-9, "{line}");
}

#[test]
fn fit_reports_zero_tail() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "bump.csv");
    let o = run(&["tail", "--spectrum", "corpus:bump?R=4", "--pprime", "2", "--mode", "true", "--t", "dyadic:1..64", "--out", &out]);
    assert_eq!(code(&o), 0);
    let o = run(&["fit", "--profile", &out]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("zero_tail t0=4 exact=true"));
}

#[test]
fn mc_profile_of_interval() {
    let o = run(&["mc", "--field", "corpus:interval", "--p", "2", "--m", "1", "--q", "2", "--h", "dyadic:2^-6..1"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout).to_string();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("h,value"));
    for line in lines {
        let (h, v) = line.split_once(',').unwrap();
        let (h, v): (f64, f64) = (h.parse().unwrap(), v.parse().unwrap());
        assert!((v * v - 4.0 * h).abs() < 1e-9, "{line}");
    }
}

#[test]
fn file_uri_matches_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let desc = path(dir.path(), "f.json");
    fs::write(
        &desc,
        r#"{"kind":"grid","dim":1,"half_extent":16.0,"samples":4096,"source":"corpus:interval"}"#,
    )
    .unwrap();
    let a = run(&["mc", "--field", &format!("file:{desc}"), "--p", "2", "--m", "1", "--q", "2", "--h", "dyadic:2^-3..1"]);
    let b = run(&["mc", "--field", "corpus:interval", "--p", "2", "--m", "1", "--q", "2", "--h", "dyadic:2^-3..1"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let raw = dir.path().join("f.bin");
    let field = fourier_moduli::corpus::make_from_uri("corpus:interval?N=512", None)
        .unwrap()
        .into_field()
        .unwrap();
    fourier_moduli::field::write_raw_values(&field, &raw).unwrap();
    fs::write(
        &desc,
        r#"{"kind":"grid","dim":1,"half_extent":16.0,"samples":512,"source":"file:f.bin"}"#,
    )
    .unwrap();
    let a = run(&["mc", "--field", &format!("file:{desc}"), "--p", "2", "--m", "1", "--q", "2", "--h", "dyadic:2^-3..1"]);
    let b = run(&["mc", "--field", "corpus:interval?N=512", "--p", "2", "--m", "1", "--q", "2", "--h", "dyadic:2^-3..1"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_cor15_disk_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "out.json");
    let o = run(&["verify", "--case", "cor15", "--field", "corpus:ball?d=2&r=1", "--gamma", "1", "--report", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["case"], "cor15");
    assert_eq!(v["passed"], true);
    assert_eq!(v["components"].as_array().unwrap().len(), 2);
}

#[test]
fn refusals_exit_one() {
    let o = run(&["verify", "--case", "thm11", "--field", "corpus:interval"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("d1-counterexample"));
    let o = run(&["verify", "--case", "cor15", "--field", "corpus:interval", "--gamma", "2"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("gamma2-failure"));
    let o = run(&["verify", "--case", "cor15", "--field", "corpus:gaussian", "--gamma", "1"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no power law"));
}

#[test]
fn demos_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = path(dir.path(), "a.json");
    let b = path(dir.path(), "b.json");
    let o = run(&["demo", "--case", "d1-counterexample", "--report", &a]);
    assert_eq!(code(&o), 0);
    let o = bin()
        .args(["demo", "--case", "d1-counterexample", "--report", &b])
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let o = run(&["demo", "--case", "gamma2-failure"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(code(&o), if v["passed"] == true { 0 } else { 1 });
}

#[test]
fn thread_count_does_not_change_profiles() {
    let args = ["mc", "--field", "corpus:ball?d=2&L=4&N=128", "--p", "2", "--m", "1", "--q", "inf", "--h", "dyadic:2^-3..1"];
    let a = bin().args(args).env("RAYON_NUM_THREADS", "1").output().unwrap();
    let b = bin().args(args).env("RAYON_NUM_THREADS", "4").output().unwrap();
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}
