use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canonical-strip"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn verlinde_lines() {
    for method in ["det", "trig"] {
        let out = run(&[
            "verlinde",
            "--genus",
            "2",
            "--max-level",
            "4",
            "--method",
            method,
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(String::from_utf8(out.stdout).unwrap(), "1\n6\n19\n44\n85\n");
    }
}

#[test]
fn hilbert_json_round_trips() {
    let v = json(&["hilbert", "--genus", "2", "--construction", "fano1"]);
    assert_eq!(v["dimension"], 2);
    assert_eq!(v["index"], 1);
    let poly: strip_core::ExactPolynomial = serde_json::from_value(v["hilbert"].clone()).unwrap();
    assert_eq!(poly, strip_core::ExactPolynomial::from_integers(&[1, 2, 2]));
    let inv: strip_core::PolarisedInvariant = serde_json::from_value(v).unwrap();
    assert!(inv.satisfies_serre_symmetry());
}

#[test]
fn roots_and_check() {
    let roots = json(&["roots", "--genus", "3"]);
    assert_eq!(roots["multiplicity_at_minus_one"], 2);
    assert_eq!(roots["roots"].as_array().unwrap().len(), 4);
    let max: f64 = roots["max_real_part"].as_str().unwrap().parse().unwrap();
    assert!((max + 0.7066405395).abs() < 1e-9);

    let check = json(&["check", "--genus", "9"]);
    assert_eq!(check["verdict"]["narrow_strip"]["passed"], false);
    assert_eq!(check["verdict"]["strip"]["passed"], true);
    assert_eq!(check["verdict"]["narrow_strip"]["bounds"][1], "-2/25");
}

#[test]
fn plot_data_counts_roots_with_multiplicity() {
    let out = run(&["plot-data", "--genus-min", "2", "--genus-max", "6"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("genus,re,im,deflated,multiplicity"));
    let mut counts = [0u32; 7];
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let g: usize = f[0].parse().unwrap();
        counts[g] += f[4].parse::<u32>().unwrap();
    }
    for (g, count) in counts.iter().enumerate().skip(2) {
        assert_eq!(*count, 3 * g as u32 - 3, "g={g}");
    }
}

#[test]
fn table_json_carries_error_bounds() {
    let v = json(&[
        "table",
        "--genus-min",
        "10",
        "--genus-max",
        "10",
        "--format",
        "json",
    ]);
    let cells = v["rows"][0]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 9);
    for c in cells {
        assert!(c["error_bound"].as_f64().unwrap() <= 1e-10);
    }
}

#[test]
fn ehrhart_single_polytope() {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../core/fixtures/polytopes/dim2/p2.txt"
    );
    let v = json(&["ehrhart", "--polytope", path]);
    assert_eq!(v["roots"]["max_real_part"], "-0.33333333333333333333");
    assert_eq!(v["verdict"]["strip"]["passed"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["hilbert", "--genus", "1"]).status.code(), Some(1));
    assert_eq!(
        run(&["hilbert", "--genus", "3", "--construction", "cy9"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["table", "--genus-min", "5", "--genus-max", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["ehrhart", "--polytope", "/nonexistent"])
            .status
            .code(),
        Some(1)
    );
    let out = run(&["thresholds"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stderr.is_empty());
}
