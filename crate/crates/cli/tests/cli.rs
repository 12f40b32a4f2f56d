use std::process::Command;

use prime_curves_cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("primecurve").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn coeffs_small() {
    let (code, out, _) = call(&["coeffs", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "p,v\n2,1\n3,1\n");
}

#[test]
fn coeffs_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let (code, out, _) = call(&["coeffs", "--n", "10", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(path).unwrap(), "p,v\n2,8\n3,4\n5,2\n7,1\n");
}

#[test]
fn norms_json() {
    let (code, out, _) = call(&["norms", "--n", "10"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["n"], 10);
    assert_eq!(v["sq2"], "549");
    assert_eq!(v["lin1"], "45");
    assert_eq!(v["chord"], "14");
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["n", "sq0", "sq2", "sq4", "lin0", "lin1", "lin2", "chord"]);
}

#[test]
fn eval_trivial_curve() {
    for method in ["direct", "spectral"] {
        let (code, out, _) = call(&["eval", "--n", "1", "--samples", "4", "--order", "0", "--method", method]);
        assert_eq!(code, 0);
        assert_eq!(out, "re,im\n0,0\n0,0\n0,0\n0,0\n");
    }
}

#[test]
fn eval_methods_agree() {
    let parse = |s: &str| -> Vec<(f64, f64)> {
        s.lines()
            .skip(1)
            .map(|l| {
                let (a, b) = l.split_once(',').unwrap();
                (a.parse().unwrap(), b.parse().unwrap())
            })
            .collect()
    };
    let (_, d, _) = call(&["eval", "--n", "30", "--samples", "64", "--order", "1", "--method", "direct"]);
    let (_, s, _) = call(&["eval", "--n", "30", "--samples", "64", "--order", "1"]);
    let (d, s) = (parse(&d), parse(&s));
    assert_eq!(d.len(), 64);
    for (a, b) in d.iter().zip(&s) {
        assert!((a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9);
    }
}

#[test]
fn spectral_eval_needs_enough_samples() {
    let (code, _, err) = call(&["eval", "--n", "30", "--samples", "16", "--order", "0", "--method", "spectral"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(call(&[]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["coeffs"]).0, 2);
    assert_eq!(call(&["coeffs", "--n", "0"]).0, 2);
    assert_eq!(call(&["eval", "--n", "5", "--samples", "8", "--order", "3"]).0, 2);
    assert_eq!(call(&["length", "--n", "5", "--tol", "1e-20"]).0, 2);
    assert_eq!(call(&["cover", "--n", "5", "--eps", "0", "--samples", "64"]).0, 2);
    assert_eq!(call(&["verify", "--n", "10", "--check", "nope"]).0, 2);
    assert_eq!(call(&["verify", "--n", "5", "--check", "midrange"]).0, 2);
    assert_eq!(call(&["sweep", "--n-start", "2", "--n-end", "8", "--out", "/dev/null"]).0, 2);
}

#[test]
fn verify_all_small() {
    let (code, out, _) = call(&["verify", "--n", "10", "--all"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().count(), 11);
    assert!(out.lines().all(|l| l.starts_with("PASS ")));

    let (code, out, _) = call(&["verify", "--n", "4", "--all"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("SKIP midrange")));
}

#[test]
fn verify_single_check() {
    let (code, out, _) = call(&["verify", "--n", "20", "--check", "chord_identity"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS chord_identity n=20 lhs=36 rhs=36"), "{out}");
}

#[test]
fn length_and_diameter() {
    let (code, out, _) = call(&["length", "--n", "10", "--tol", "1e-9"]);
    assert_eq!(code, 0);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    let len: f64 = row[1].parse().unwrap();
    assert!((len - 137.29412434643027).abs() < 1e-6);

    let (code, out, _) = call(&["diameter", "--n", "10", "--samples", "1024"]);
    assert_eq!(code, 0);
    let row: Vec<f64> = out.lines().nth(1).unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert!(row[2] <= row[3] && row[2] >= 14.0);
}

#[test]
fn cover_warns_when_undersampled() {
    let (code, out, err) = call(&["cover", "--n", "10", "--eps", "0.5", "--samples", "64"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
    assert!(err.contains("warning:"));
    assert!(err.contains("# "));
}

#[test]
fn sweep_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let (code, _, err) = call(&["sweep", "--n-start", "3", "--n-end", "24", "--factor", "2", "--eps", "1", "--out", csv.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), prime_curves_cli::SWEEP_HEADER);
    let ns: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ns, ["3", "6", "12", "24"]);

    let json = dir.path().join("s.json");
    let (code, _, _) = call(&["sweep", "--n-start", "3", "--n-end", "6", "--out", json.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["sup1"], "5");
}

#[test]
fn plot_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.svg");
    let (code, _, _) = call(&["plot", "--n", "10", "--samples", "128", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("<path d=\"M1.000000 0.000000 L"));
    assert_eq!(svg.matches(" L").count(), 127);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_primecurve");
    let ok = Command::new(bin).args(["coeffs", "--n", "5"]).output().unwrap();
    assert!(ok.status.success());
    assert_eq!(String::from_utf8(ok.stdout).unwrap(), "p,v\n2,3\n3,1\n5,1\n");

    let bad = Command::new(bin).args(["verify", "--n", "10", "--check", "nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));

    let help = Command::new(bin).arg("--help").output().unwrap();
    assert!(help.status.success());
}
