//! Whole-pipeline reports: the table of maximal real parts, root data for
//! plotting, the genus thresholds of the violations, and JSON views of the
//! individual results.

use std::fmt::Write as _;

use rayon::prelude::*;
use rug::Float;
use serde_json::{json, Value};

use crate::constructions::{apply, ConstructionKind, PolarisedInvariant};
use crate::error::{Error, Result};
use crate::exactpoly::{rational_to_string, ExactPolynomial};
use crate::hypotheses::{analyse, Hypothesis, HypothesisOutcome, HypothesisVerdict};
use crate::numfmt::format_sig;
use crate::roots::{solve, RootAnalysis};
use crate::verlinde::hilbert_polynomial;

pub const DEFAULT_TARGET_ERROR: f64 = 1e-10;
pub const MAX_TABLE_GENUS: u32 = 40;

fn check_range(g_min: u32, g_max: u32) -> Result<()> {
    if g_min < 2 || g_min > g_max || g_max > MAX_TABLE_GENUS {
        return Err(Error::InvalidArgument(format!(
            "need 2 ≤ genus-min ≤ genus-max ≤ {MAX_TABLE_GENUS}, got {g_min}..{g_max}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct CellValue {
    pub max_real_part: Float,
    pub error_bound: f64,
    pub precision: u32,
}

impl CellValue {
    /// The value at 20 significant digits, or `0` when it lies within its
    /// own error bound.
    pub fn display(&self) -> String {
        display_within(&self.max_real_part, self.error_bound)
    }
}

pub fn display_within(x: &Float, error_bound: f64) -> String {
    if x.clone().abs() <= error_bound {
        "0".to_string()
    } else {
        format_sig(x)
    }
}

#[derive(Clone, Debug)]
pub struct TableCell {
    pub kind: ConstructionKind,
    pub dimension: usize,
    /// A failed cell keeps its error in place of a value.
    pub value: std::result::Result<CellValue, Error>,
}

#[derive(Clone, Debug)]
pub struct TableRow {
    pub genus: u32,
    pub cells: Vec<TableCell>,
}

#[derive(Clone, Debug)]
pub struct TableReport {
    pub rows: Vec<TableRow>,
}

fn cell(
    kind: ConstructionKind,
    genus: u32,
    moduli: &Result<ExactPolynomial>,
    target_error: f64,
) -> TableCell {
    let value = moduli
        .clone()
        .and_then(|h| apply(kind, genus, &h))
        .and_then(|inv| solve(&inv.hilbert, target_error))
        .map(|a| CellValue {
            max_real_part: a.max_real_part,
            error_bound: a.max_real_error,
            precision: a.precision,
        });
    TableCell {
        kind,
        dimension: kind.dimension(genus),
        value,
    }
}

/// Maximal real part of the roots for every genus in `g_min..=g_max` and all
/// nine constructions. Rows come back in genus order whatever the thread
/// count.
pub fn generate_table(g_min: u32, g_max: u32, target_error: f64) -> Result<TableReport> {
    check_range(g_min, g_max)?;
    let moduli: Vec<Result<ExactPolynomial>> = (g_min..=g_max)
        .into_par_iter()
        .map(hilbert_polynomial)
        .collect();
    let work: Vec<(u32, ConstructionKind)> = (g_min..=g_max)
        .flat_map(|g| ConstructionKind::ALL.into_iter().map(move |k| (g, k)))
        .collect();
    let mut cells: Vec<TableCell> = work
        .par_iter()
        .map(|&(g, k)| cell(k, g, &moduli[(g - g_min) as usize], target_error))
        .collect();
    let mut rows = Vec::new();
    for genus in g_min..=g_max {
        let rest = cells.split_off(ConstructionKind::ALL.len());
        rows.push(TableRow {
            genus,
            cells: std::mem::replace(&mut cells, rest),
        });
    }
    Ok(TableReport { rows })
}

fn dimension_label(kind: ConstructionKind) -> String {
    format!("3g-{}", 3 + kind.codimension())
}

impl TableReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("genus");
        for kind in ConstructionKind::ALL {
            out.push(',');
            out.push_str(kind.name());
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.genus.to_string());
            for cell in &row.cells {
                out.push(',');
                match &cell.value {
                    Ok(v) => out.push_str(&v.display()),
                    Err(e) => {
                        // quoted, RFC 4180 style
                        let _ = write!(out, "\"error: {}\"", e.to_string().replace('"', "\"\""));
                    }
                }
            }
            out.push('\n');
        }
        out.push_str("dim");
        for kind in ConstructionKind::ALL {
            out.push(',');
            out.push_str(&dimension_label(kind));
        }
        out.push('\n');
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let cells: Vec<Value> = row
                    .cells
                    .iter()
                    .map(|c| match &c.value {
                        Ok(v) => json!({
                            "construction": c.kind.name(),
                            "dimension": c.dimension,
                            "max_real_part": v.display(),
                            "error_bound": v.error_bound,
                            "precision_bits": v.precision,
                        }),
                        Err(e) => json!({
                            "construction": c.kind.name(),
                            "dimension": c.dimension,
                            "error": e.to_string(),
                        }),
                    })
                    .collect();
                json!({ "genus": row.genus, "cells": cells })
            })
            .collect();
        json!({
            "columns": ConstructionKind::ALL.iter().map(|k| k.name()).collect::<Vec<_>>(),
            "dimensions": ConstructionKind::ALL.iter().map(|&k| dimension_label(k)).collect::<Vec<_>>(),
            "rows": rows,
        })
    }

    pub fn value(&self, genus: u32, kind: ConstructionKind) -> Option<&CellValue> {
        let row = self.rows.iter().find(|r| r.genus == genus)?;
        row.cells
            .iter()
            .find(|c| c.kind == kind)
            .and_then(|c| c.value.as_ref().ok())
    }
}

#[derive(Clone, Debug)]
pub struct FigureRecord {
    pub genus: u32,
    pub re: Float,
    pub im: Float,
    /// The exactly divided-out root at −1, emitted once with its multiplicity.
    pub deflated: bool,
    pub multiplicity: u32,
    pub radius: f64,
}

/// Every root of the moduli Hilbert polynomial for each genus.
pub fn emit_figure_data(g_min: u32, g_max: u32, target_error: f64) -> Result<Vec<FigureRecord>> {
    check_range(g_min, g_max)?;
    let per_genus = (g_min..=g_max)
        .into_par_iter()
        .map(|g| {
            let analysis = solve(&hilbert_polynomial(g)?, target_error)?;
            let mut records = Vec::new();
            if analysis.multiplicity_at_minus_one > 0 {
                records.push(FigureRecord {
                    genus: g,
                    re: Float::with_val(analysis.precision, -1),
                    im: Float::new(analysis.precision),
                    deflated: true,
                    multiplicity: analysis.multiplicity_at_minus_one,
                    radius: 0.0,
                });
            }
            let mut roots = analysis.roots.clone();
            roots.sort_by(|a, b| {
                (&a.re, &a.im)
                    .partial_cmp(&(&b.re, &b.im))
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
            for r in roots {
                records.push(FigureRecord {
                    genus: g,
                    re: r.re,
                    im: r.im,
                    deflated: false,
                    multiplicity: 1,
                    radius: r.radius,
                });
            }
            Ok(records)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_genus.into_iter().flatten().collect())
}

pub fn figure_csv(records: &[FigureRecord]) -> String {
    let mut out = String::from("genus,re,im,deflated,multiplicity\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.genus,
            display_within(&r.re, r.radius),
            display_within(&r.im, r.radius),
            r.deflated,
            r.multiplicity
        );
    }
    out
}

#[derive(Clone, Debug)]
pub struct ClaimResult {
    pub statement: String,
    pub confirmed: bool,
    /// `(genus, expected pass, observed)`, observed being the verdict or the
    /// error that prevented one.
    pub checks: Vec<(u32, bool, std::result::Result<bool, String>)>,
}

#[derive(Clone, Debug)]
pub struct ThresholdReport {
    pub claims: Vec<ClaimResult>,
}

impl ThresholdReport {
    pub fn all_confirmed(&self) -> bool {
        self.claims.iter().all(|c| c.confirmed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for claim in &self.claims {
            let _ = writeln!(
                out,
                "{} {}",
                if claim.confirmed { "PASS" } else { "FAIL" },
                claim.statement
            );
            for (g, expected, observed) in &claim.checks {
                let seen = match observed {
                    Ok(true) => "holds".to_string(),
                    Ok(false) => "fails".to_string(),
                    Err(e) => format!("error: {e}"),
                };
                let mark = if observed.as_ref().ok() == Some(expected) {
                    "ok"
                } else {
                    "MISMATCH"
                };
                let _ = writeln!(
                    out,
                    "  g={g:<2} expected {:<5} observed {seen} [{mark}]",
                    if *expected { "holds" } else { "fails" }
                );
            }
        }
        out
    }
}

/// Highest genus examined by [`check_thresholds`].
pub const THRESHOLD_GENUS_MAX: u32 = 15;

/// The three genus thresholds: NCS for the moduli space flips at 7→8, CS at
/// 9→10, and CL for its anticanonical Calabi–Yau section at 10→11.
pub fn check_thresholds(target_error: f64) -> ThresholdReport {
    let cases: Vec<(ConstructionKind, u32)> = (2..=THRESHOLD_GENUS_MAX)
        .map(|g| (ConstructionKind::Moduli, g))
        .chain((10..=THRESHOLD_GENUS_MAX).map(|g| (ConstructionKind::CY1, g)))
        .collect();
    let verdicts: Vec<std::result::Result<HypothesisVerdict, String>> = cases
        .par_iter()
        .map(|&(kind, g)| {
            let h = hilbert_polynomial(g).map_err(|e| e.to_string())?;
            let inv = apply(kind, g, &h).map_err(|e| e.to_string())?;
            analyse(&inv, target_error)
                .map(|(_, v)| v)
                .map_err(|e| e.to_string())
        })
        .collect();
    let lookup = |kind: ConstructionKind, g: u32, h: Hypothesis| {
        let i = cases
            .iter()
            .position(|&c| c == (kind, g))
            .expect("case computed");
        verdicts[i]
            .as_ref()
            .map(|v| v.outcome(h).passed)
            .map_err(Clone::clone)
    };
    let claim = |statement: &str, kind, h, genera: Vec<u32>, threshold: u32| {
        let checks: Vec<_> = genera
            .into_iter()
            .map(|g| (g, g < threshold, lookup(kind, g, h)))
            .collect();
        let confirmed = checks.iter().all(|(_, e, o)| o.as_ref().ok() == Some(e));
        ClaimResult {
            statement: statement.to_string(),
            confirmed,
            checks,
        }
    };
    ThresholdReport {
        claims: vec![
            claim(
                "NCS(moduli) holds for g <= 7 and fails for 8 <= g <= 15",
                ConstructionKind::Moduli,
                Hypothesis::NarrowStrip,
                (2..=THRESHOLD_GENUS_MAX).collect(),
                8,
            ),
            claim(
                "CS(moduli) holds for g <= 9 and fails for 10 <= g <= 15",
                ConstructionKind::Moduli,
                Hypothesis::Strip,
                (2..=THRESHOLD_GENUS_MAX).collect(),
                10,
            ),
            claim(
                "CL(cy1) holds for g = 10 and fails for 11 <= g <= 15",
                ConstructionKind::CY1,
                Hypothesis::CanonicalLine,
                (10..=THRESHOLD_GENUS_MAX).collect(),
                11,
            ),
        ],
    }
}

pub fn invariant_json(inv: &PolarisedInvariant) -> Value {
    json!({
        "dimension": inv.dimension,
        "index": inv.index,
        "hilbert": {
            "coefficients": inv.hilbert.coefficients().iter().map(rational_to_string).collect::<Vec<_>>(),
        },
    })
}

pub fn analysis_json(a: &RootAnalysis) -> Value {
    json!({
        "degree": a.degree,
        "multiplicity_at_minus_one": a.multiplicity_at_minus_one,
        "exact_roots": a.exact_roots.iter().map(|(r, m)| json!({
            "root": rational_to_string(r),
            "multiplicity": m,
        })).collect::<Vec<_>>(),
        "deflated_degree": a.deflated_degree,
        "roots": a.roots.iter().map(|r| json!({
            "re": format_sig(&r.re),
            "im": format_sig(&r.im),
            "radius": r.radius,
        })).collect::<Vec<_>>(),
        "max_real_part": format_sig(&a.max_real_part),
        "max_real_error": a.max_real_error,
        "precision_bits": a.precision,
    })
}

fn outcome_json(o: &HypothesisOutcome) -> Value {
    json!({
        "passed": o.passed,
        "margin": format_sig(&o.margin),
        "witness_real_part": format_sig(&o.witness),
        "bounds": [rational_to_string(&o.lower), rational_to_string(&o.upper)],
    })
}

pub fn verdict_json(v: &HypothesisVerdict) -> Value {
    json!({
        "canonical_line": outcome_json(&v.canonical_line),
        "narrow_strip": outcome_json(&v.narrow_strip),
        "strip": outcome_json(&v.strip),
    })
}
