//! End-to-end runs of the `padic` binary: exit codes, output formats and
//! determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use padic_vladimirov::green::radial_oracle;
use padic_vladimirov::Prime;
use serde_json::Value;
use tempfile::TempDir;

fn padic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn classify_text(dir: &TempDir, config: &str) -> (i32, String) {
    let path = write(dir, "config.json", config);
    let out = padic(&["classify", "--config", s(&path)]);
    (code(&out), stdout(&out))
}

fn classify(dir: &TempDir, config: &str) -> (i32, Option<Value>) {
    let (c, text) = classify_text(dir, config);
    (c, serde_json::from_str(&text).ok())
}

/// Top-level keys of a pretty-printed JSON object, in file order.
fn top_level_keys(text: &str) -> Vec<String> {
    text.lines()
        .filter_map(|l| l.strip_prefix("  \""))
        .map(|l| l.split('"').next().unwrap().to_string())
        .collect()
}

/// Rows of a CSV table, header excluded, with the header checked.
fn csv_rows(text: &str, header: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(header));
    lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn verify_all_passes_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for path in [&a, &b] {
        let out = padic(&[
            "verify",
            "all",
            "--p",
            "2",
            "--alpha",
            "1.5",
            "--tol",
            "1e-10",
            "--seed",
            "7",
            "--out",
            s(path),
        ]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
    }
    let (a, b) = (
        fs::read_to_string(&a).unwrap(),
        fs::read_to_string(&b).unwrap(),
    );
    assert_eq!(a, b);
    let report: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(report["passed"], Value::Bool(true));
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() > 20);
    assert!(checks.iter().all(|c| c["passed"] == Value::Bool(true)));
    assert_eq!(
        top_level_keys(&a),
        ["suite", "p", "alpha", "tol", "seed", "passed", "checks"]
    );
}

#[test]
fn different_seeds_draw_different_samples() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for (path, seed) in [(&a, "1"), (&b, "2")] {
        let out = padic(&[
            "verify",
            "schwartz",
            "--p",
            "3",
            "--seed",
            seed,
            "--out",
            s(path),
        ]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
    }
    assert_ne!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn verify_green_below_half_reports_expected_errors() {
    let out = padic(&["verify", "green", "--p", "3", "--alpha", "0.4"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS"));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn verify_realization_defaults_r_to_zero() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "cfg.json",
        r#"{"p":2,"alpha":0.8,"points":["0","1","1/2"],
            "B":[[[1.0,0.0],[0.5,0.5],[0.0,0.0]],[[0.5,-0.5],[2.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,0.0],[3.0,0.0]]]}"#,
    );
    let out = padic(&[
        "verify",
        "realization",
        "--p",
        "2",
        "--alpha",
        "0.8",
        "--config",
        s(&cfg),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    // flags that contradict the configuration are a configuration error
    let out = padic(&[
        "verify",
        "realization",
        "--alpha",
        "1.5",
        "--config",
        s(&cfg),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn invalid_arguments_exit_two() {
    for args in [
        &["verify", "core", "--p", "4"][..],
        &["verify", "core", "--alpha", "-1"],
        &["verify", "core", "--tol", "0"],
        &["verify", "nonsense"],
        &["counterexample", "--n-max", "0"],
        &[
            "green-table",
            "--alpha",
            "2",
            "--gamma-lo",
            "3",
            "--gamma-hi",
            "1",
        ],
        &["green-table", "--alpha", "2", "--point", "1/0"],
    ] {
        let out = padic(args);
        assert_eq!(code(&out), 2, "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn green_table_matches_radial_oracle() {
    let out = padic(&[
        "green-table",
        "--p",
        "2",
        "--alpha",
        "2",
        "--point",
        "0",
        "--gamma-lo",
        "-5",
        "--gamma-hi",
        "5",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = csv_rows(&stdout(&out), "gamma0,radius,h_value,tail_bound");
    assert_eq!(rows.len(), 11);
    let p = Prime::new(2).unwrap();
    for (row, gamma0) in rows.iter().zip(-5i64..) {
        assert_eq!(row[0], gamma0.to_string());
        let radius: f64 = row[1].parse().unwrap();
        assert_eq!(radius, 2f64.powi(gamma0 as i32));
        let (v, b) = radial_oracle(p, 2.0, gamma0, 1e-12).unwrap();
        let h: f64 = row[2].parse().unwrap();
        let bound: f64 = row[3].parse().unwrap();
        assert!(bound <= 1e-12);
        assert!((h - v).abs() <= b + bound);
        // 17 significant digits in scientific notation
        let mantissa = row[2].split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
    }
}

#[test]
fn green_table_rejects_alpha_below_half() {
    let out = padic(&["green-table", "--p", "2", "--alpha", "0.4"]);
    assert_eq!(code(&out), 1);
    assert!(
        stderr(&out).contains("no L2 solution for alpha <= 1/2"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn green_table_diagonal_request_depends_on_alpha() {
    let out = padic(&[
        "green-table",
        "--p",
        "3",
        "--alpha",
        "0.9",
        "--point",
        "1/3",
        "--x",
        "1/3",
    ]);
    assert_eq!(code(&out), 1);
    let out = padic(&[
        "green-table",
        "--p",
        "3",
        "--alpha",
        "2",
        "--point",
        "1/3",
        "--x",
        "1/3",
        "--x",
        "1",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = csv_rows(&stdout(&out), "gamma0,radius,h_value,tail_bound");
    assert_eq!(rows.len(), 13);
    assert_eq!(rows[11][0], "-inf");
    // |1 - 1/3|_3 = 3 matches the radial row with gamma0 = 1
    assert_eq!(rows[12][0], "1");
    let radial: f64 = rows[6][2].parse().unwrap();
    let direct: f64 = rows[12][2].parse().unwrap();
    assert!((radial - direct).abs() <= 1e-11);
    // the diagonal value exceeds every off-diagonal value
    let diag: f64 = rows[11][2].parse().unwrap();
    assert!(rows[..11]
        .iter()
        .all(|r| r[2].parse::<f64>().unwrap() < diag));
}

#[test]
fn green_table_writes_the_out_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("g.csv");
    let out = padic(&["green-table", "--alpha", "1.5", "--out", s(&path)]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("gamma0,radius,h_value,tail_bound\n"));
}

#[test]
fn classify_hermitian_without_y() {
    let dir = TempDir::new().unwrap();
    let (c, text) = classify_text(
        &dir,
        r#"{"p":2,"alpha":1.5,"points":["0","1"],"B":[[[1.0,0.0],[0.5,0.5]],[[0.5,-0.5],[2.0,0.0]]],"r":0.0}"#,
    );
    assert_eq!(c, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["self_adjoint"], Value::Bool(true));
    assert_eq!(v["eta_self_adjoint"], Value::Null);
    assert_eq!(v["RY_hermitian"], Value::Null);
    let r = v["R"].as_array().unwrap();
    assert_eq!(r.len(), 2);
    assert_eq!(r[0][1], r[1][0]);
    assert_eq!(
        top_level_keys(&text),
        [
            "self_adjoint",
            "eta_self_adjoint",
            "RY_hermitian",
            "YB_hermitian",
            "R",
            "R_provenance",
            "diagnostics"
        ]
    );
}

#[test]
fn classify_identity_y_with_non_hermitian_b() {
    let dir = TempDir::new().unwrap();
    let (c, v) = classify(
        &dir,
        r#"{"p":3,"alpha":1.5,"points":["0","1"],"B":[[[1.0,0.0],[1.0,0.0]],[[0.0,0.0],[2.0,0.0]]],
            "Y":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]}"#,
    );
    assert_eq!(c, 0);
    let v = v.unwrap();
    assert_eq!(v["self_adjoint"], Value::Bool(false));
    assert_eq!(v["eta_self_adjoint"], Value::Bool(false));
}

#[test]
fn classify_b_from_y_inverse_times_hermitian() {
    // Y = diag(1, 2), H = [[1, i], [-i, 3]], B = Y^{-1} H
    let dir = TempDir::new().unwrap();
    let (c, v) = classify(
        &dir,
        r#"{"p":2,"alpha":1.5,"points":["0","1/2"],"B":[[[1.0,0.0],[0.0,1.0]],[[0.0,-0.5],[1.5,0.0]]],
            "Y":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[2.0,0.0]]]}"#,
    );
    assert_eq!(c, 0);
    let v = v.unwrap();
    assert_eq!(v["self_adjoint"], Value::Bool(false));
    assert_eq!(v["eta_self_adjoint"], Value::Bool(true));
    assert_eq!(v["YB_hermitian"], Value::Bool(true));
}

#[test]
fn classify_low_alpha_uses_regularized_diagonal() {
    let dir = TempDir::new().unwrap();
    let (c, v) = classify(
        &dir,
        r#"{"p":2,"alpha":0.8,"points":["0","1"],"B":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]],"r":0.25}"#,
    );
    assert_eq!(c, 0);
    let v = v.unwrap();
    assert_eq!(v["R"][0][0][0].as_f64(), Some(0.25));
    assert_eq!(v["R_provenance"][0][0], "regularized");
    assert_eq!(v["diagnostics"]["regularized_diagonal"], Value::Bool(true));
}

#[test]
fn classify_error_codes() {
    let dir = TempDir::new().unwrap();
    for bad in [
        "not json",
        r#"{"p":2,"alpha":1.5,"points":["0","1"]}"#,
        r#"{"p":4,"alpha":1.5,"points":["0"],"B":[[[1.0,0.0]]]}"#,
        r#"{"p":2,"alpha":1.5,"points":["0","0"],"B":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]}"#,
        r#"{"p":2,"alpha":1.5,"points":["0","1"],"B":[[[1.0,0.0]]]}"#,
    ] {
        assert_eq!(classify(&dir, bad).0, 2, "{bad}");
    }
    let singular = r#"{"p":2,"alpha":1.5,"points":["0","1"],"B":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]],
        "Y":[[[1.0,0.0],[1.0,0.0]],[[1.0,0.0],[1.0,0.0]]]}"#;
    assert_eq!(classify(&dir, singular).0, 1);
    let missing = padic(&["classify", "--config", s(&dir.path().join("absent.json"))]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn counterexample_rows() {
    let out = padic(&["counterexample", "--p", "2", "--n-max", "2"]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&stdout(&out), "n,direct,closed,direct_im,closed_im");
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][0], "2");
    for col in [1, 2] {
        let v: f64 = rows[1][col].parse().unwrap();
        assert!((v - 0.3535533906).abs() < 1e-10);
    }

    let out = padic(&["counterexample", "--p", "2", "--n-max", "30"]);
    let rows = csv_rows(&stdout(&out), "n,direct,closed,direct_im,closed_im");
    assert_eq!(rows.len(), 30);
    let value = |r: &Vec<String>, c: usize| r[c].parse::<f64>().unwrap();
    assert!(value(&rows[29], 1) > value(&rows[0], 1));
    for r in &rows {
        assert!((value(r, 1) - value(r, 2)).abs() <= 1e-12 * (1.0 + value(r, 1).abs()));
    }
    for w in rows[1..].windows(2) {
        assert!(value(&w[1], 1) > value(&w[0], 1));
    }
}

#[test]
fn friedrichs_check_single_element() {
    let dir = TempDir::new().unwrap();
    let low = write(
        &dir,
        "low.json",
        r#"{"p":2,"alpha":0.8,"points":["0","1"],"B":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]}"#,
    );
    let high = write(
        &dir,
        "high.json",
        r#"{"p":2,"alpha":1.5,"points":["0","1"],"B":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]}"#,
    );
    // psi_{0,1,0} is nonzero at 0 and 1; psi_{0,1,1/2} vanishes on the unit ball
    let element = |eps: &str, c: &str| {
        format!(
            r#"{{"u":{{"p":2,"coeffs":[{{"N":0,"j":1,"eps":"{eps}","re":1.0,"im":0.0}}]}},"c":{c}}}"#
        )
    };
    let run = |cfg: &Path, text: String| {
        let path = write(&dir, "element.json", &text);
        let out = padic(&[
            "friedrichs-check",
            "--config",
            s(cfg),
            "--element",
            s(&path),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        serde_json::from_str::<Value>(&stdout(&out)).unwrap()
    };
    let zero = "[[0.0,0.0],[0.0,0.0]]";
    let v = run(&low, element("0", zero));
    assert_eq!(v["in_friedrichs_domain"], Value::Bool(true));
    let v = run(&low, element("0", "[[1.0,0.0],[0.0,0.0]]"));
    assert_eq!(v["in_friedrichs_domain"], Value::Bool(false));
    let v = run(&high, element("0", zero));
    assert_eq!(v["in_friedrichs_domain"], Value::Bool(false));
    assert_eq!(v["criterion"], "f(x_k) = 0 for every k");
    assert_eq!(v["gamma0"][0][0].as_f64(), Some(1.0));
    assert_eq!(v["gamma0"][1][0].as_f64(), Some(-1.0));
    let v = run(&high, element("1/2", zero));
    assert_eq!(v["in_friedrichs_domain"], Value::Bool(true));

    let wrong = write(&dir, "wrong.json", &element("0", "[[0.0,0.0]]"));
    let out = padic(&[
        "friedrichs-check",
        "--config",
        s(&low),
        "--element",
        s(&wrong),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn friedrichs_check_sample_passes_in_both_regimes() {
    let dir = TempDir::new().unwrap();
    for alpha in ["0.8", "1.5", "3"] {
        let cfg = write(
            &dir,
            "cfg.json",
            &format!(
                r#"{{"p":3,"alpha":{alpha},"points":["0","1","1/3"],"B":[[[1.0,0.0],[0.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,0.0],[1.0,0.0]]]}}"#
            ),
        );
        let out = padic(&["friedrichs-check", "--config", s(&cfg), "--seed", "4"]);
        assert_eq!(code(&out), 0, "alpha {alpha}: {}", stdout(&out));
    }
}
