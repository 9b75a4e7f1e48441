//! Acceptance suite. Each test checks one criterion and reports a single
//! PASS/FAIL line on standard output, outside the test harness's capture.

use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rug::{Integer, Rational};

use strip_core::constructions::all_constructions;
use strip_core::ehrhart::{fixture_directory, load_directory, scan_maximum};
use strip_core::hypotheses::{analyse, classify};
use strip_core::report::{check_thresholds, generate_table, TableReport};
use strip_core::roots::deflate_rational_roots;
use strip_core::{
    hilbert_polynomial, interpolate, solve, verlinde_det, verlinde_trig, ConstructionKind,
    ExactPolynomial, ValueTable,
};

const TABLE_TOLERANCE: f64 = 1e-8;
const TARGET_ERROR: f64 = 1e-10;

fn report(criterion: u32, title: &str, ok: bool, detail: &str) {
    let line = format!(
        "criterion {criterion} {title}: {} ({detail})\n",
        if ok { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
}

fn table() -> &'static TableReport {
    static TABLE: OnceLock<TableReport> = OnceLock::new();
    TABLE.get_or_init(|| generate_table(2, 25, TARGET_ERROR).expect("valid range"))
}

fn published() -> Vec<(u32, Vec<f64>)> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/max_real_parts.csv");
    let text = std::fs::read_to_string(path).expect("published table");
    text.lines()
        .skip(1)
        .map(|line| {
            let mut fields = line.split(',');
            let g = fields.next().unwrap().parse().unwrap();
            (g, fields.map(|f| f.parse().unwrap()).collect())
        })
        .collect()
}

#[test]
fn criterion_1_table_reproduction() {
    let table = table();
    let mut worst = 0f64;
    let mut failures = Vec::new();
    let rows = published();
    assert_eq!(rows.len(), 24);
    for (g, values) in &rows {
        for (kind, want) in ConstructionKind::ALL.into_iter().zip(values) {
            match table.value(*g, kind) {
                Some(cell) => {
                    let diff = (cell.max_real_part.to_f64() - want).abs();
                    worst = worst.max(diff);
                    if diff > TABLE_TOLERANCE || cell.error_bound > TARGET_ERROR {
                        failures.push(format!(
                            "g={g} {kind}: diff {diff:e}, bound {:e}",
                            cell.error_bound
                        ));
                    }
                }
                None => failures.push(format!("g={g} {kind}: no value")),
            }
        }
    }
    let ok = failures.is_empty();
    report(
        1,
        "table reproduction g=2..25",
        ok,
        &format!(
            "216 cells, worst deviation {worst:.2e}, {} failures",
            failures.len()
        ),
    );
    assert!(ok, "{failures:#?}");
}

#[test]
fn criterion_2_thresholds() {
    let thresholds = check_thresholds(TARGET_ERROR);
    let ok = thresholds.all_confirmed();
    let summary: Vec<_> = thresholds
        .claims
        .iter()
        .map(|c| {
            format!(
                "{}: {}",
                c.statement,
                if c.confirmed { "ok" } else { "mismatch" }
            )
        })
        .collect();
    report(2, "genus thresholds", ok, &summary.join("; "));
    assert!(ok, "{}", thresholds.to_text());
}

#[test]
fn criterion_3_cross_formula_oracle() {
    let mut mismatches = Vec::new();
    for g in 2..=10 {
        for k in 0..=12 {
            let det = verlinde_det(g, k).unwrap();
            let trig = verlinde_trig(g, k, 512).unwrap();
            if det != trig {
                mismatches.push((g, k));
            }
        }
    }
    let ok = mismatches.is_empty();
    report(
        3,
        "determinant vs trigonometric Verlinde",
        ok,
        &format!("117 pairs, mismatches {mismatches:?}"),
    );
    assert!(ok);
}

#[test]
fn criterion_4_serre_symmetry() {
    let mut violations = Vec::new();
    let mut count = 0;
    for g in 2..=25 {
        for inv in all_constructions(g).unwrap() {
            count += 1;
            let sign = if inv.dimension % 2 == 0 { 1 } else { -1 };
            let mirrored = inv
                .hilbert
                .reflect()
                .shift(-inv.index)
                .scale(&Rational::from(sign));
            if mirrored != inv.hilbert {
                violations.push(g);
            }
        }
    }
    let ok = violations.is_empty() && count == 24 * 9;
    report(
        4,
        "Serre symmetry g<=25",
        ok,
        &format!("{count} invariants, violations at {violations:?}"),
    );
    assert!(ok);
}

#[test]
fn criterion_5_multiplicity_at_minus_one() {
    let mut wrong = Vec::new();
    for g in 2..=15 {
        let a = solve(&hilbert_polynomial(g).unwrap(), TARGET_ERROR).unwrap();
        if a.multiplicity_at_minus_one != g - 1 {
            wrong.push((g, a.multiplicity_at_minus_one));
        }
    }
    let ok = wrong.is_empty();
    report(
        5,
        "multiplicity of -1 is g-1 for g=2..15",
        ok,
        &format!("exceptions {wrong:?}"),
    );
    assert!(ok);
}

#[test]
fn criterion_6_toric_fixtures() {
    let mut details = Vec::new();
    let mut ok = true;
    for (d, expected) in [(2usize, -1.0 / 3.0), (3, -0.25)] {
        let fixtures = load_directory(&fixture_directory(d)).unwrap();
        let scan = scan_maximum(&fixtures, TARGET_ERROR).unwrap();
        let value = scan.max_real_part.to_f64();
        let strip_ok = scan.reports.iter().all(|r| r.verdict.strip.passed);
        ok &= (value - expected).abs() <= 1e-9 && strip_ok;
        details.push(format!(
            "dim {d}: {} fixtures, max {value:.10} at {}, CS {}",
            fixtures.len(),
            scan.argmax,
            if strip_ok { "all pass" } else { "violated" }
        ));
    }
    report(6, "toric maxima", ok, &details.join("; "));
    assert!(ok);
}

fn binomial(k: usize) -> ExactPolynomial {
    let mut p = ExactPolynomial::one();
    let mut fact = Integer::from(1);
    for i in 0..k {
        p = p.mul(&ExactPolynomial::linear(&Rational::from(i as i64)));
        fact *= (i + 1) as u32;
    }
    p.scale(&Rational::from((1, fact)))
}

fn run_property<S: Strategy>(
    name: &str,
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases: 96,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, check)
        .map_err(|e| format!("{name}: {e}"))
}

#[test]
fn criterion_7_property_suites() {
    let mut results = Vec::new();

    results.push(run_property(
        "interpolation round-trip",
        prop::collection::vec(-40i64..=40, 1..=13),
        |weights| {
            let p = weights
                .iter()
                .enumerate()
                .fold(ExactPolynomial::zero(), |acc, (k, &w)| {
                    acc.add(&binomial(k).scale(&Rational::from(w)))
                });
            let Some(degree) = p.degree() else {
                return Ok(());
            };
            let values = (0..=degree as i64 + 1)
                .map(|i| p.eval_int(i).numer().clone())
                .collect();
            let back = interpolate(&ValueTable::new(values, 0).unwrap(), degree).unwrap();
            prop_assert_eq!(back, p);
            Ok(())
        },
    ));

    results.push(run_property(
        "shift group action",
        (
            prop::collection::vec(-9i64..=9, 0..=8),
            -3i64..=3,
            -3i64..=3,
        ),
        |(cs, a, b)| {
            let p = ExactPolynomial::from_integers(&cs);
            prop_assert_eq!(p.shift(a).shift(b), p.shift(a + b));
            Ok(())
        },
    ));

    results.push(run_property(
        "deflation reconstruction",
        (prop::collection::vec(-9i64..=9, 1..=8), 0u32..=4),
        |(cs, m)| {
            let minus_one = Rational::from(-1);
            let mut p = ExactPolynomial::from_integers(&cs);
            if p.is_zero() {
                return Ok(());
            }
            for _ in 0..m {
                p = p.mul(&ExactPolynomial::linear(&minus_one));
            }
            let (mut back, mult) =
                deflate_rational_roots(&p, std::slice::from_ref(&minus_one)).unwrap();
            for _ in 0..mult.get(&minus_one).copied().unwrap_or(0) {
                back = back.mul(&ExactPolynomial::linear(&minus_one));
            }
            prop_assert_eq!(back, p);
            Ok(())
        },
    ));

    // distinct irreducible quadratics: squarefree with only complex roots
    results.push(run_property(
        "conjugate closure",
        prop::collection::btree_set((-4i64..=4, 5i64..=15), 1..=4),
        |quads| {
            let p = quads.iter().fold(ExactPolynomial::one(), |acc, &(b, c)| {
                acc.mul(&ExactPolynomial::from_integers(&[c, b, 1]))
            });
            let a = solve(&p, TARGET_ERROR).unwrap();
            let roots = a.all_roots();
            for (re, im, r) in &roots {
                let paired = roots.iter().any(|(re2, im2, r2)| {
                    let d_re = (re.to_f64() - re2.to_f64()).abs();
                    let d_im = (im.to_f64() + im2.to_f64()).abs();
                    d_re.hypot(d_im) <= r + r2 + 1e-15
                });
                prop_assert!(paired);
            }
            Ok(())
        },
    ));

    let mut chain_failures = Vec::new();
    for g in 2..=12 {
        for inv in all_constructions(g).unwrap() {
            let (analysis, verdict) = analyse(&inv, TARGET_ERROR).unwrap();
            let again = classify(&analysis, inv.dimension, inv.index).unwrap();
            if !verdict.implication_chain_holds() || !again.implication_chain_holds() {
                chain_failures.push(g);
            }
        }
    }
    results.push(if chain_failures.is_empty() {
        Ok(())
    } else {
        Err(format!("implication chain: genera {chain_failures:?}"))
    });

    let failures: Vec<_> = results.into_iter().filter_map(Result::err).collect();
    let ok = failures.is_empty();
    report(
        7,
        "property suites",
        ok,
        if ok {
            "interpolation, shift, deflation, conjugate closure, implication chain"
        } else {
            "see failures"
        },
    );
    assert!(ok, "{failures:#?}");
}

fn run_table(jobs: &str) -> Vec<u8> {
    let output = Command::new(env!("CARGO_BIN_EXE_canonical-strip"))
        .args([
            "--jobs",
            jobs,
            "table",
            "--genus-min",
            "2",
            "--genus-max",
            "12",
        ])
        .output()
        .expect("binary runs");
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    output.stdout
}

#[test]
fn criterion_8_determinism() {
    let single = run_table("1");
    let several = run_table("4");
    let ok = single == several && !single.is_empty();
    report(
        8,
        "table determinism across --jobs 1 and 4",
        ok,
        &format!("{} bytes each", single.len()),
    );
    assert!(ok);
}
