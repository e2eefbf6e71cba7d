use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_analog-grover"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Header plus rows of optional numbers.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|f| {
                    if f.is_empty() {
                        None
                    } else {
                        Some(f.parse().unwrap())
                    }
                })
                .collect()
        })
        .collect();
    (header, rows)
}

fn col(header: &[String], rows: &[Vec<Option<f64>>], name: &str) -> Vec<Option<f64>> {
    let j = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[j]).collect()
}

fn argmax(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |b, (i, &x)| if x > b.1 { (i, x) } else { b },
        )
        .0
}

#[test]
fn sweep_n2_reaches_certainty_near_pi() {
    let text = stdout(&["sweep", "--n-qubits", "2", "--energy", "1"]);
    assert!(!text.contains('\r'));
    let (header, rows) = parse_csv(&text);
    assert_eq!(
        header,
        [
            "t",
            "P",
            "C_l1",
            "C_r",
            "S_ent",
            "C_1_rest",
            "dC_dt",
            "C_pair",
            "delta_C",
            "delta_EoF2"
        ]
    );
    assert_eq!(rows.len(), 1000);
    let t = col(&header, &rows, "t");
    let p = col(&header, &rows, "P");
    let near = (0..rows.len())
        .min_by(|&a, &b| {
            (t[a].unwrap() - std::f64::consts::PI)
                .abs()
                .total_cmp(&(t[b].unwrap() - std::f64::consts::PI).abs())
        })
        .unwrap();
    assert!(p[near].unwrap() >= 1.0 - 1e-4);
    for row in &rows {
        assert!(row.iter().all(|v| v.is_some_and(f64::is_finite)));
        assert!((0.0..=1.0).contains(&row[1].unwrap()));
        for v in [2, 3, 4, 5, 7, 8, 9] {
            assert!(row[v].unwrap() >= -1e-9);
        }
    }
}

#[test]
fn sweep_with_rounded_overlap_has_no_register_columns() {
    let (header, rows) = parse_csv(&stdout(&["sweep", "--overlap", "0.707", "--energy", "1"]));
    let l1 = col(&header, &rows, "C_l1");
    let cr = col(&header, &rows, "C_r");
    assert!((l1[0].unwrap() - 1.0).abs() < 1e-3 && (cr[0].unwrap() - 1.0).abs() < 1e-3);
    assert!(col(&header, &rows, "S_ent").iter().all(Option::is_none));
    assert!(col(&header, &rows, "delta_EoF2")
        .iter()
        .all(Option::is_none));
}

#[test]
fn sweep_n5_monogamy_column() {
    let (header, rows) = parse_csv(&stdout(&["sweep", "--n-qubits", "5", "--energy", "1"]));
    let t = col(&header, &rows, "t");
    let d = col(&header, &rows, "delta_C");
    let e = col(&header, &rows, "delta_EoF2");
    for i in 0..rows.len() {
        let expect = 0.34375 * (2.0 * t[i].unwrap() / 32f64.sqrt()).sin().powi(2);
        assert!((d[i].unwrap() - expect).abs() < 1e-9);
        assert!(e[i].unwrap() >= -1e-9);
    }
}

#[test]
fn dim_flag_and_log_base() {
    let a = stdout(&["sweep", "--dim", "8", "--steps", "5"]);
    let b = stdout(&["sweep", "--n-qubits", "3", "--steps", "5"]);
    assert_eq!(a, b);
    let (h2, r2) = parse_csv(&b);
    let (he, re) = parse_csv(&stdout(&[
        "sweep",
        "--n-qubits",
        "3",
        "--steps",
        "5",
        "--log-base",
        "e",
    ]));
    let bits = col(&h2, &r2, "C_r");
    let nats = col(&he, &re, "C_r");
    for (x, y) in bits.iter().zip(&nats) {
        assert!((x.unwrap() * std::f64::consts::LN_2 - y.unwrap()).abs() < 1e-11);
    }
    assert_eq!(col(&h2, &r2, "delta_EoF2"), col(&he, &re, "delta_EoF2"));
}

#[test]
fn json_mirrors_csv() {
    let csv = stdout(&["sweep", "--n-qubits", "3", "--steps", "7"]);
    let json: Value = serde_json::from_str(&stdout(&[
        "sweep",
        "--n-qubits",
        "3",
        "--steps",
        "7",
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(json["config"]["n_qubits"], 3);
    assert_eq!(json["config"]["steps"], 7);
    let (header, rows) = parse_csv(&csv);
    let recs = json["records"].as_array().unwrap();
    assert_eq!(recs.len(), rows.len());
    for (rec, row) in recs.iter().zip(&rows) {
        let keys: Vec<&String> = rec.as_object().unwrap().keys().collect();
        assert_eq!(keys, header.iter().collect::<Vec<_>>());
        for (h, v) in header.iter().zip(row) {
            assert_eq!(rec[h].as_f64(), *v);
        }
    }
    let skew: Value = serde_json::from_str(&stdout(&[
        "sweep",
        "--overlap",
        "0.3",
        "--steps",
        "3",
        "--format",
        "json",
    ]))
    .unwrap();
    assert!(skew["records"][0]["C_pair"].is_null());
}

#[test]
fn figure_columns() {
    let cases: [(&str, &[&str]); 6] = [
        ("1", &["t", "P", "C_l1", "C_r"]),
        ("2", &["t", "S_ent", "C_1_rest", "P"]),
        ("3a", &["t", "dC_dt"]),
        ("3b", &["k", "P", "C_1_rest", "dC"]),
        ("4", &["t", "C_pair", "dP_dt"]),
        ("5", &["t", "delta_C", "delta_EoF2", "P"]),
    ];
    for (id, cols) in cases {
        let (header, rows) = parse_csv(&stdout(&["figure", id]));
        assert_eq!(header, cols, "figure {id}");
        assert!(!rows.is_empty());
    }
}

#[test]
fn figure_1_minima_meet_peak() {
    let (header, rows) = parse_csv(&stdout(&["figure", "1"]));
    let get = |n: &str| {
        col(&header, &rows, n)
            .into_iter()
            .map(Option::unwrap)
            .collect::<Vec<_>>()
    };
    let peak = argmax(&get("P"));
    let l1: Vec<f64> = get("C_l1").iter().map(|v| -v).collect();
    let cr: Vec<f64> = get("C_r").iter().map(|v| -v).collect();
    assert!(argmax(&l1).abs_diff(peak) <= 1 && argmax(&cr).abs_diff(peak) <= 1);
}

#[test]
fn figure_4_peaks_together() {
    let (header, rows) = parse_csv(&stdout(&["figure", "4"]));
    let cp: Vec<f64> = col(&header, &rows, "C_pair")
        .into_iter()
        .map(Option::unwrap)
        .collect();
    let dp: Vec<f64> = col(&header, &rows, "dP_dt")
        .into_iter()
        .map(Option::unwrap)
        .collect();
    assert!(argmax(&cp).abs_diff(argmax(&dp)) <= 1);
}

#[test]
fn figure_3b_discrete_rows() {
    let (header, rows) = parse_csv(&stdout(&["figure", "3b"]));
    let k = col(&header, &rows, "k");
    assert_eq!(k, (0..=4).map(|i| Some(i as f64)).collect::<Vec<_>>());
    let p = col(&header, &rows, "P");
    assert_eq!(p[0], Some(0.25));
    assert_eq!(p[1], Some(1.0));
    assert!(col(&header, &rows, "C_1_rest")[1].unwrap() <= 1e-10);
    assert_eq!(col(&header, &rows, "dC")[4], None);
    let longer = parse_csv(&stdout(&[
        "figure",
        "3b",
        "--n-qubits",
        "6",
        "--k-max",
        "20",
    ]))
    .1;
    assert_eq!(longer.len(), 21);
}

#[test]
fn output_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig5.csv");
    let write = |p: &Path| {
        let s = bin()
            .args(["figure", "5", "--steps", "50", "--out"])
            .arg(p)
            .status()
            .unwrap();
        assert!(s.success());
        std::fs::read(p).unwrap()
    };
    let first = write(&path);
    let second = write(&path);
    assert_eq!(first, second);
    assert_eq!(
        first,
        stdout(&["figure", "5", "--steps", "50"]).into_bytes()
    );
}

#[test]
fn verify_default_suite_passes() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0 failed"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_single_qubit_skips_register_checks() {
    let out = run(&["verify", "--n-qubits", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("pair concurrence") && l.ends_with("SKIP")));
    assert!(text
        .lines()
        .any(|l| l.starts_with("coherence identities") && l.ends_with("PASS")));
}

#[test]
fn verify_catches_corrupted_integrator() {
    let out = run(&["verify", "--n-qubits", "3", "--corrupt-integrator"]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("numeric oracle vs closed form") && l.ends_with("FAIL")));
}

#[test]
fn verify_json_report() {
    let json: Value =
        serde_json::from_str(&stdout(&["verify", "--n-qubits", "2", "--format", "json"])).unwrap();
    assert_eq!(json["passed"], true);
    assert!(json["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] == "PASS"));
}

#[test]
fn config_errors_exit_1() {
    for args in [
        &["figure", "6"][..],
        &["sweep", "--dim", "6"],
        &["sweep", "--n-qubits", "0"],
        &["sweep", "--n-qubits", "13"],
        &["sweep", "--n-qubits", "2", "--dim", "4"],
        &["sweep", "--steps", "1"],
        &["sweep", "--energy", "-1"],
        &["sweep", "--overlap", "1.5"],
        &["sweep", "--marked", "4", "--n-qubits", "2"],
        &["sweep", "--t-max", "0"],
        &["sweep", "--format", "xml"],
        &["figure", "3b", "--overlap", "0.3"],
        &["bogus"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unwritable_output_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let out = bin()
        .args(["sweep", "--steps", "3", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    let help = String::from_utf8(run(&["verify", "--help"]).stdout).unwrap();
    assert!(!help.contains("corrupt"));
}
