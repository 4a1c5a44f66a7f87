#![allow(dead_code)]

use std::path::PathBuf;

/// Runs the CLI in-process and returns (exit code, stdout, stderr).
pub fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["cqed".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cqed_cli::main_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

pub fn run_ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "cqed {args:?} failed: {err}");
    out
}

pub fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&run_ok(args)).unwrap()
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

const FIG2: &[&str] = &[
    "--model",
    "both",
    "--geometry",
    "fp",
    "--alpha0",
    "pi",
    "--t1sq",
    "1e-4",
    "--t2sq",
    "1e-4",
    "--lossless",
    "--nu-fsr",
    "250",
    "--var",
    "deltap",
    "--from",
    "-50",
    "--to",
    "50",
    "--points",
    "201",
];
const FIG3: &[&str] = &[
    "--model",
    "both",
    "--geometry",
    "fp",
    "--beta",
    "1",
    "--alpha0",
    "pi/2",
    "--t1sq",
    "1e-4",
    "--t2sq",
    "1e-4",
    "--lossless",
    "--nu-fsr",
    "50",
    "--var",
    "deltap",
    "--from",
    "-20",
    "--to",
    "20",
    "--points",
    "201",
];

/// Figure sweeps kept as golden CSV files: (file stem, extra flags, base).
pub const FIGURES: &[(&str, &[&str], &[&str])] = &[
    ("fig2b", &["--beta", "0.3333333333333333"], FIG2),
    ("fig2c", &["--beta", "1"], FIG2),
    ("fig3b", &["--xa-frac", "0"], FIG3),
    ("fig3c", &["--xa-frac", "0.5"], FIG3),
    ("fig3d", &["--xa-frac", "1"], FIG3),
];

pub fn figure_csv(extra: &[&str], base: &[&str], engine: &str) -> String {
    let mut args = vec!["sweep", "--engine", engine];
    args.extend_from_slice(base);
    args.extend_from_slice(extra);
    run_ok(&args)
}

/// Parses a sweep CSV into (header, rows of cells).
pub fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

/// Largest relative deviation between the `abs_*` columns of two sweeps,
/// after allowing an absolute floor of 1e-12.
pub fn max_abs_column_deviation(a: &str, b: &str) -> f64 {
    let (ha, ra) = parse_csv(a);
    let (hb, rb) = parse_csv(b);
    assert_eq!(ha, hb);
    assert_eq!(ra.len(), rb.len());
    let mut worst = 0.0f64;
    for (x, y) in ra.iter().zip(&rb) {
        for (k, name) in ha.iter().enumerate() {
            if name.starts_with("abs_") {
                let (u, v): (f64, f64) = (x[k].parse().unwrap(), y[k].parse().unwrap());
                let dev = ((u - v).abs() - 1e-12).max(0.0) / u.abs().max(v.abs()).max(1e-300);
                worst = worst.max(dev);
            }
        }
    }
    worst
}
