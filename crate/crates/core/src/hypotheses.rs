//! Canonical line, narrow canonical strip and canonical strip tests for the
//! real parts of Hilbert-polynomial roots of a monotone pair of index `r`.
//!
//! * CS: every real part lies in `[−r, 0]` (`[0, −r]` when `r < 0`).
//! * NCS: every real part lies in `[−r + r/(n+1), −r/(n+1)]`
//!   (`[−r/(n+1), −r + r/(n+1)]` when `r < 0`), `n = dim X`.
//! * CL: every real part equals the Serre symmetry centre `−r/2`.
//!
//! Intervals are closed. A root whose certified disc straddles a boundary
//! makes the verdict [`Error::Indeterminate`] unless some other root already
//! decides it. For a degenerate interval (a point, which is always the case
//! for CL and for every hypothesis when `r = 0`) a root counts as lying on it
//! when its distance is within its error radius.

use rug::{Float, Rational};
use serde::Serialize;

use crate::constructions::PolarisedInvariant;
use crate::error::{Error, Result};
use crate::roots::{solve_with_candidates, RootAnalysis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    CanonicalLine,
    NarrowStrip,
    Strip,
}

impl Hypothesis {
    pub const ALL: [Hypothesis; 3] = [
        Hypothesis::CanonicalLine,
        Hypothesis::NarrowStrip,
        Hypothesis::Strip,
    ];

    pub fn abbreviation(self) -> &'static str {
        match self {
            Hypothesis::CanonicalLine => "CL",
            Hypothesis::NarrowStrip => "NCS",
            Hypothesis::Strip => "CS",
        }
    }

    /// Closed interval `[lower, upper]` the real parts must lie in.
    pub fn bounds(self, dimension: usize, index_r: i64) -> (Rational, Rational) {
        let r = Rational::from(index_r);
        let share = Rational::from((index_r, dimension as u64 + 1));
        match self {
            Hypothesis::CanonicalLine => {
                let centre = Rational::from(-&r) / 2u32;
                (centre.clone(), centre)
            }
            Hypothesis::NarrowStrip => {
                if index_r >= 0 {
                    (Rational::from(&share - &r), -share)
                } else {
                    (Rational::from(-&share), Rational::from(&share - &r))
                }
            }
            Hypothesis::Strip => {
                if index_r >= 0 {
                    (-r, Rational::new())
                } else {
                    (Rational::new(), -r)
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisOutcome {
    pub hypothesis: Hypothesis,
    pub passed: bool,
    /// Nonnegative slack to the nearest boundary when passed, minus the
    /// largest excursion outside the interval when failed.
    pub margin: Float,
    /// Real part of the root attaining the margin.
    pub witness: Float,
    pub lower: Rational,
    pub upper: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisVerdict {
    pub canonical_line: HypothesisOutcome,
    pub narrow_strip: HypothesisOutcome,
    pub strip: HypothesisOutcome,
}

impl HypothesisVerdict {
    pub fn outcome(&self, h: Hypothesis) -> &HypothesisOutcome {
        match h {
            Hypothesis::CanonicalLine => &self.canonical_line,
            Hypothesis::NarrowStrip => &self.narrow_strip,
            Hypothesis::Strip => &self.strip,
        }
    }

    /// CL ⇒ NCS ⇒ CS.
    pub fn implication_chain_holds(&self) -> bool {
        (!self.canonical_line.passed || self.narrow_strip.passed)
            && (!self.narrow_strip.passed || self.strip.passed)
    }
}

pub fn classify(
    analysis: &RootAnalysis,
    dimension: usize,
    index_r: i64,
) -> Result<HypothesisVerdict> {
    let parts = analysis.real_parts();
    let prec = analysis.precision;
    let evaluate = |h: Hypothesis| evaluate(h, &parts, dimension, index_r, prec);
    Ok(HypothesisVerdict {
        canonical_line: evaluate(Hypothesis::CanonicalLine)?,
        narrow_strip: evaluate(Hypothesis::NarrowStrip)?,
        strip: evaluate(Hypothesis::Strip)?,
    })
}

/// `−1` followed by every interval endpoint, without repeats. Deflating
/// these exactly keeps rational roots sitting on a boundary decidable.
pub fn boundary_candidates(dimension: usize, index_r: i64) -> Vec<Rational> {
    let mut out = vec![Rational::from(-1)];
    for h in Hypothesis::ALL {
        let (lo, hi) = h.bounds(dimension, index_r);
        for b in [lo, hi] {
            if !out.contains(&b) {
                out.push(b);
            }
        }
    }
    out
}

/// Solves and classifies one polarised variety.
pub fn analyse(
    invariant: &PolarisedInvariant,
    target_error: f64,
) -> Result<(RootAnalysis, HypothesisVerdict)> {
    let candidates = boundary_candidates(invariant.dimension, invariant.index);
    let analysis = solve_with_candidates(&invariant.hilbert, &candidates, target_error)?;
    let verdict = classify(&analysis, invariant.dimension, invariant.index)?;
    Ok((analysis, verdict))
}

fn evaluate(
    hypothesis: Hypothesis,
    parts: &[(Float, f64)],
    dimension: usize,
    index_r: i64,
    prec: u32,
) -> Result<HypothesisOutcome> {
    let (lower, upper) = hypothesis.bounds(dimension, index_r);
    let lo = Float::with_val(prec, &lower);
    let hi = Float::with_val(prec, &upper);

    if lower == upper {
        // point interval: pass iff every root is within its radius of it
        let mut worst: Option<(Float, Float)> = None;
        for (re, radius) in parts {
            let dist = Float::with_val(prec, re - &lo).abs();
            if dist > *radius && worst.as_ref().is_none_or(|(d, _)| dist > *d) {
                worst = Some((dist, re.clone()));
            }
        }
        return Ok(match worst {
            Some((dist, witness)) => HypothesisOutcome {
                hypothesis,
                passed: false,
                margin: -dist,
                witness,
                lower,
                upper,
            },
            None => HypothesisOutcome {
                hypothesis,
                passed: true,
                margin: Float::new(prec),
                witness: parts.first().map_or(lo.clone(), |(re, _)| re.clone()),
                lower,
                upper,
            },
        });
    }

    let mut slack: Option<(Float, Float)> = None;
    let mut excess: Option<(Float, Float)> = None;
    let mut ambiguous: Option<(Float, f64, Rational)> = None;
    for (re, radius) in parts {
        let below = Float::with_val(prec, re - &lo);
        let above = Float::with_val(prec, &hi - re);
        let (inside_by, bound) = if below < above {
            (below, &lower)
        } else {
            (above, &upper)
        };
        // inside_by ≥ 0 inside the closed interval, negative outside
        let clear = *radius == 0.0 || Float::with_val(prec, inside_by.abs_ref()) > *radius;
        if !clear {
            if ambiguous.is_none() {
                ambiguous = Some((re.clone(), *radius, bound.clone()));
            }
            continue;
        }
        if inside_by < 0 {
            let out = Float::with_val(prec, -&inside_by);
            if excess.as_ref().is_none_or(|(e, _)| out > *e) {
                excess = Some((out, re.clone()));
            }
        } else if slack.as_ref().is_none_or(|(s, _)| inside_by < *s) {
            slack = Some((inside_by, re.clone()));
        }
    }

    if let Some((out, witness)) = excess {
        return Ok(HypothesisOutcome {
            hypothesis,
            passed: false,
            margin: -out,
            witness,
            lower,
            upper,
        });
    }
    if let Some((re, radius, bound)) = ambiguous {
        return Err(Error::Indeterminate {
            hypothesis: hypothesis.abbreviation(),
            real_part: crate::numfmt::format_sig(&re),
            radius,
            bound: bound.to_string(),
        });
    }
    let (margin, witness) = slack.unwrap_or_else(|| (Float::new(prec), lo.clone()));
    Ok(HypothesisOutcome {
        hypothesis,
        passed: true,
        margin,
        witness,
        lower,
        upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{construct, ConstructionKind};
    use crate::roots::solve;

    fn verdict(kind: ConstructionKind, g: u32) -> HypothesisVerdict {
        let inv = construct(kind, g).unwrap();
        let analysis = solve(&inv.hilbert, 1e-10).unwrap();
        classify(&analysis, inv.dimension, inv.index).unwrap()
    }

    #[test]
    fn bounds() {
        let (lo, hi) = Hypothesis::NarrowStrip.bounds(21, 2);
        assert_eq!(
            (lo, hi),
            (Rational::from((-21, 11)), Rational::from((-1, 11)))
        );
        let (lo, hi) = Hypothesis::Strip.bounds(4, -1);
        assert_eq!((lo, hi), (Rational::from(0), Rational::from(1)));
        let (lo, hi) = Hypothesis::NarrowStrip.bounds(4, -1);
        assert_eq!((lo, hi), (Rational::from((1, 5)), Rational::from((4, 5))));
        let (lo, hi) = Hypothesis::CanonicalLine.bounds(3, 2);
        assert_eq!((lo, hi), (Rational::from(-1), Rational::from(-1)));
    }

    #[test]
    fn genus_eight_fails_narrow_strip_only() {
        let v = verdict(ConstructionKind::Moduli, 8);
        assert!(!v.narrow_strip.passed);
        assert!(v.strip.passed);
        assert!(!v.canonical_line.passed);
        assert!(v.narrow_strip.margin < 0);
        assert!(v.strip.margin >= 0);
    }

    #[test]
    fn genus_ten_fails_strip() {
        let v = verdict(ConstructionKind::Moduli, 10);
        assert!(!v.strip.passed);
        // the offending root sits outside the interval
        let w = &v.strip.witness;
        assert!(*w > 0 || *w < -2);
    }

    #[test]
    fn calabi_yau_canonical_line() {
        let v = verdict(ConstructionKind::CY1, 10);
        assert!(v.canonical_line.passed && v.narrow_strip.passed && v.strip.passed);
        let v = verdict(ConstructionKind::CY1, 11);
        assert!(!v.canonical_line.passed && !v.narrow_strip.passed && !v.strip.passed);
        assert!((v.canonical_line.margin.to_f64() + 0.0614369091).abs() < 1e-9);
    }

    #[test]
    fn straddling_root_is_indeterminate() {
        let analysis = solve(
            &crate::exactpoly::ExactPolynomial::from_integers(&[2, 2, 1]),
            1e-10,
        )
        .unwrap();
        let mut fuzzy = analysis.clone();
        for r in &mut fuzzy.roots {
            r.radius = 0.75;
        }
        // real parts −1 with r = 1: NCS is [−2/3, −1/3], CS is [−1, 0]
        assert!(matches!(
            classify(&fuzzy, 2, 1),
            Err(Error::Indeterminate {
                hypothesis: "NCS",
                ..
            })
        ));
        assert!(classify(&analysis, 2, 2).unwrap().strip.passed);
    }
}
