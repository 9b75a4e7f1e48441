//! Certified complex roots of exact rational polynomials.
//!
//! Known rational roots are divided out exactly first. The remaining
//! polynomial is solved by Aberth–Ehrlich iteration in MPFR arithmetic and
//! every approximation `z_i` is wrapped in an inclusion disc of radius
//! `n |W_i|`, where `W_i = p(z_i) / (a_n Π_{j≠i} (z_i − z_j))` is the
//! Weierstrass correction. When the discs are pairwise disjoint each one
//! contains exactly one root. Precision doubles until the discs are small
//! enough and two consecutive precisions agree on the maximum real part.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rug::float::{Constant, Round};
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::exactpoly::ExactPolynomial;

/// Hard ceiling on working precision.
pub const MAX_PRECISION_BITS: u32 = 1_000_000;

/// Every reported radius is kept below this regardless of the requested
/// target.
pub const RADIUS_CEILING: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedRoot {
    pub re: Float,
    pub im: Float,
    /// The disc of this radius around `(re, im)` contains exactly one root.
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootAnalysis {
    /// Rational roots removed exactly, with multiplicity.
    pub exact_roots: Vec<(Rational, u32)>,
    pub multiplicity_at_minus_one: u32,
    pub degree: usize,
    pub deflated_degree: usize,
    pub roots: Vec<CertifiedRoot>,
    pub max_real_part: Float,
    /// Bound on `|max_real_part − true maximum|`.
    pub max_real_error: f64,
    pub precision: u32,
}

impl RootAnalysis {
    /// All roots with multiplicity as `(re, im, radius)`, exact ones with
    /// radius zero.
    pub fn all_roots(&self) -> Vec<(Float, Float, f64)> {
        let mut out = Vec::with_capacity(self.degree);
        for (root, mult) in &self.exact_roots {
            for _ in 0..*mult {
                out.push((
                    Float::with_val(self.precision, root),
                    Float::new(self.precision),
                    0.0,
                ));
            }
        }
        for r in &self.roots {
            out.push((r.re.clone(), r.im.clone(), r.radius));
        }
        out
    }

    /// Real parts with their error radius, over every root counted with
    /// multiplicity.
    pub fn real_parts(&self) -> Vec<(Float, f64)> {
        self.all_roots()
            .into_iter()
            .map(|(re, _, radius)| (re, radius))
            .collect()
    }
}

/// Divides out each candidate for as long as it stays a root.
pub fn deflate_rational_roots(
    p: &ExactPolynomial,
    candidates: &[Rational],
) -> Result<(ExactPolynomial, BTreeMap<Rational, u32>)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut q = p.clone();
    let mut multiplicities = BTreeMap::new();
    for candidate in candidates {
        let mut count = 0;
        loop {
            let (next, hit) = q.exact_divide_by_root(candidate)?;
            if !hit {
                break;
            }
            q = next;
            count += 1;
        }
        if count > 0 {
            *multiplicities.entry(candidate.clone()).or_insert(0) += count;
        }
    }
    Ok((q, multiplicities))
}

/// Roots of `p` with the default candidate set `{−1}`.
pub fn solve(p: &ExactPolynomial, target_error: f64) -> Result<RootAnalysis> {
    solve_with_candidates(p, &[Rational::from(-1)], target_error)
}

/// Roots of `p` after exact deflation at every rational in `candidates`.
pub fn solve_with_candidates(
    p: &ExactPolynomial,
    candidates: &[Rational],
    target_error: f64,
) -> Result<RootAnalysis> {
    let degree = match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(d) => d,
    };
    let (deflated, multiplicities) = deflate_rational_roots(p, candidates)?;
    let exact_roots: Vec<(Rational, u32)> = multiplicities.into_iter().collect();
    let multiplicity_at_minus_one = exact_roots
        .iter()
        .find(|(r, _)| *r == -1)
        .map_or(0, |(_, m)| *m);
    let deflated_degree = deflated.degree().unwrap_or(0);
    let target = target_error.min(RADIUS_CEILING);

    let (roots, precision) = if deflated_degree == 0 {
        (Vec::new(), 128)
    } else {
        certified_roots(&deflated, target, target_error)?
    };

    let mut max_real_part: Option<Float> = None;
    for (r, _) in &exact_roots {
        let v = Float::with_val(precision, r);
        if max_real_part.as_ref().is_none_or(|m| v > *m) {
            max_real_part = Some(v);
        }
    }
    for r in &roots {
        if max_real_part.as_ref().is_none_or(|m| r.re > *m) {
            max_real_part = Some(r.re.clone());
        }
    }
    let max_real_error = roots.iter().map(|r| r.radius).fold(0.0, f64::max);

    Ok(RootAnalysis {
        exact_roots,
        multiplicity_at_minus_one,
        degree,
        deflated_degree,
        roots,
        max_real_part: max_real_part.expect("degree ≥ 1 has at least one root"),
        max_real_error,
        precision,
    })
}

/// Precision escalation: solve and certify at `p`, then at `2p`, and accept
/// once both are certified and their maximum real parts agree.
fn certified_roots(
    poly: &ExactPolynomial,
    radius_target: f64,
    agreement: f64,
) -> Result<(Vec<CertifiedRoot>, u32)> {
    let n = poly.degree().expect("nonzero");
    let ints = poly.primitive_integer_coefficients();
    let max_bits = ints.iter().map(|c| c.significant_bits()).max().unwrap_or(1);
    let mut prec = 128u32.max(2 * max_bits / n as u32);

    let mut guesses: Option<Vec<Cx>> = None;
    let mut previous: Option<(Float, Vec<CertifiedRoot>)> = None;
    let mut worst_radius = f64::INFINITY;
    loop {
        let coeffs: Vec<Float> = poly
            .coefficients()
            .iter()
            .map(|c| Float::with_val(prec, c))
            .collect();
        let start = match guesses.take() {
            Some(g) => g.into_iter().map(|z| z.with_prec(prec)).collect(),
            None => initial_guesses(&coeffs, prec),
        };
        let approx = aberth(&coeffs, start, prec);
        match certify(&coeffs, &approx, prec) {
            Some(roots) => {
                worst_radius = roots.iter().map(|r| r.radius).fold(0.0, f64::max);
                if worst_radius < radius_target {
                    let max_re = roots
                        .iter()
                        .map(|r| r.re.clone())
                        .max_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal))
                        .expect("n ≥ 1");
                    if let Some((prev_max, _)) = &previous {
                        let gap = Float::with_val(prec, &max_re - prev_max).abs();
                        if gap.to_f64() <= agreement {
                            return Ok((roots, prec));
                        }
                    }
                    previous = Some((max_re, roots));
                } else {
                    previous = None;
                }
            }
            None => previous = None,
        }
        guesses = Some(approx);
        prec = prec.saturating_mul(2);
        if prec > MAX_PRECISION_BITS {
            return Err(Error::NonConvergence {
                precision: prec / 2,
                worst_radius,
            });
        }
    }
}

#[derive(Clone, Debug)]
struct Cx {
    re: Float,
    im: Float,
}

impl Cx {
    fn zero(prec: u32) -> Self {
        Self {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    fn with_prec(mut self, prec: u32) -> Self {
        self.re.set_prec(prec);
        self.im.set_prec(prec);
        self
    }

    fn add(&self, o: &Cx) -> Cx {
        let prec = self.re.prec();
        Cx {
            re: Float::with_val(prec, &self.re + &o.re),
            im: Float::with_val(prec, &self.im + &o.im),
        }
    }

    fn sub(&self, o: &Cx) -> Cx {
        let prec = self.re.prec();
        Cx {
            re: Float::with_val(prec, &self.re - &o.re),
            im: Float::with_val(prec, &self.im - &o.im),
        }
    }

    fn mul(&self, o: &Cx) -> Cx {
        let prec = self.re.prec();
        let re = Float::with_val(prec, &self.re * &o.re) - Float::with_val(prec, &self.im * &o.im);
        let im = Float::with_val(prec, &self.re * &o.im) + Float::with_val(prec, &self.im * &o.re);
        Cx { re, im }
    }

    fn div(&self, o: &Cx) -> Cx {
        let prec = self.re.prec();
        let denom =
            Float::with_val(prec, o.re.square_ref()) + Float::with_val(prec, o.im.square_ref());
        let re = Float::with_val(prec, &self.re * &o.re) + Float::with_val(prec, &self.im * &o.im);
        let im = Float::with_val(prec, &self.im * &o.re) - Float::with_val(prec, &self.re * &o.im);
        Cx {
            re: re / &denom,
            im: im / &denom,
        }
    }

    fn recip(&self) -> Cx {
        let prec = self.re.prec();
        let denom = Float::with_val(prec, self.re.square_ref())
            + Float::with_val(prec, self.im.square_ref());
        Cx {
            re: Float::with_val(prec, &self.re / &denom),
            im: -Float::with_val(prec, &self.im / &denom),
        }
    }

    fn abs(&self) -> Float {
        Float::with_val(self.re.prec(), self.re.hypot_ref(&self.im))
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

/// `p(z)`, `p'(z)` by Horner, together with `Σ |c_i| |z|^i` for the rounding
/// error bound.
fn horner(coeffs: &[Float], z: &Cx) -> (Cx, Cx, Float) {
    let prec = z.re.prec();
    let modulus = z.abs();
    let mut p = Cx::zero(prec);
    let mut dp = Cx::zero(prec);
    let mut magnitude = Float::new(prec);
    for c in coeffs.iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z);
        p.re += c;
        magnitude *= &modulus;
        magnitude += Float::with_val(prec, c.abs_ref());
    }
    (p, dp, magnitude)
}

/// Points on the circle of radius `2 max |c_{n-i} / c_n|^{1/i}` (Fujiwara's
/// bound) with a fixed irrational angular offset.
fn initial_guesses(coeffs: &[Float], prec: u32) -> Vec<Cx> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].clone().abs();
    let mut bound = Float::new(prec);
    for i in 1..=n {
        let mut ratio = Float::with_val(prec, coeffs[n - i].abs_ref()) / &lead;
        if i == n {
            ratio /= 2u32;
        }
        let root = ratio.root(i as u32);
        if root > bound {
            bound = root;
        }
    }
    let radius = bound * 2u32;
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let offset = Float::with_val(prec, 2u32).sqrt() - 1u32;
    (0..n)
        .map(|k| {
            let angle = Float::with_val(prec, &two_pi * k as u32) / n as u32
                + Float::with_val(prec, &offset);
            let (sin, cos) = angle.sin_cos(Float::new(prec));
            Cx {
                re: Float::with_val(prec, &radius * &cos),
                im: Float::with_val(prec, &radius * &sin),
            }
        })
        .collect()
}

/// Gauss–Seidel Aberth–Ehrlich iteration until the relative step falls to
/// `2^{-3prec/4}` or the iteration budget runs out.
fn aberth(coeffs: &[Float], mut z: Vec<Cx>, prec: u32) -> Vec<Cx> {
    let n = z.len();
    if n == 1 {
        // linear: exact up to rounding
        let root = Float::with_val(prec, -&coeffs[0]) / &coeffs[1];
        return vec![Cx {
            re: root,
            im: Float::new(prec),
        }];
    }
    let tolerance = Float::with_val(prec, Float::i_exp(1, -(3 * prec as i32 / 4)));
    let max_iterations = 200 + 20 * n + prec as usize / 4;
    let one = Cx {
        re: Float::with_val(prec, 1),
        im: Float::new(prec),
    };
    // below this the steps are rounding-dominated once they stop shrinking
    let noise_floor = Float::with_val(prec, Float::i_exp(1, -(prec as i32 / 4)));
    let mut best = Float::with_val(prec, rug::float::Special::Infinity);
    let mut stalled_rounds = 0;
    let mut settled_rounds = 0;
    for _ in 0..max_iterations {
        let mut worst = Float::new(prec);
        for i in 0..n {
            let (p, dp, _) = horner(coeffs, &z[i]);
            if p.is_zero() {
                continue;
            }
            let newton = if dp.is_zero() {
                // nudge off a critical point
                Cx {
                    re: Float::with_val(prec, Float::i_exp(1, -(prec as i32 / 2))),
                    im: Float::new(prec),
                }
            } else {
                p.div(&dp)
            };
            let mut repulsion = Cx::zero(prec);
            for j in 0..n {
                if j != i {
                    let diff = z[i].sub(&z[j]);
                    if !diff.is_zero() {
                        repulsion = repulsion.add(&diff.recip());
                    }
                }
            }
            let denom = one.sub(&newton.mul(&repulsion));
            let step = if denom.is_zero() {
                newton
            } else {
                newton.div(&denom)
            };
            z[i] = z[i].sub(&step);
            let scale = z[i].abs() + 1u32;
            let relative = step.abs() / scale;
            if relative > worst {
                worst = relative;
            }
        }
        if worst <= tolerance {
            settled_rounds += 1;
            // one more sweep polishes the last bits
            if settled_rounds >= 2 {
                break;
            }
        } else if worst < noise_floor {
            if Float::with_val(prec, &worst * 2u32) >= best {
                stalled_rounds += 1;
                if stalled_rounds >= 4 {
                    break;
                }
            } else {
                stalled_rounds = 0;
            }
        }
        if worst < best {
            best = worst;
        }
    }
    z
}

/// Inclusion discs of radius `n |W_i|` with rounding errors bounded from
/// above. `None` when two discs overlap.
fn certify(coeffs: &[Float], z: &[Cx], prec: u32) -> Option<Vec<CertifiedRoot>> {
    let n = z.len();
    let unit = Float::with_val(prec, Float::i_exp(1, 1 - prec as i32));
    // Horner in complex arithmetic plus rounding of the coefficients
    let eval_slack = Float::with_val(prec, &unit * (4 * n as u32 + 8));
    let lead = Float::with_val(prec, coeffs[n].abs_ref());

    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let (p, _, magnitude) = horner(coeffs, &z[i]);
        let residual = p.abs() + Float::with_val(prec, &magnitude * &eval_slack);
        let mut product = lead.clone();
        for j in 0..n {
            if j != i {
                let d = z[i].sub(&z[j]).abs();
                if d.is_zero() {
                    return None;
                }
                product *= d;
            }
        }
        // lower bound on the denominator after 3n roundings
        let shrink = Float::with_val(prec, 1) - Float::with_val(prec, &unit * (3 * n as u32 + 3));
        product *= shrink;
        let mut radius = residual / product * n as u32;
        radius *= Float::with_val(prec, 1) + Float::with_val(prec, Float::i_exp(1, -20));
        radii.push(radius);
    }
    for i in 0..n {
        for j in i + 1..n {
            let gap = z[i].sub(&z[j]).abs();
            if gap <= Float::with_val(prec, &radii[i] + &radii[j]) {
                return None;
            }
        }
    }
    Some(
        z.iter()
            .zip(radii)
            .map(|(zi, r)| CertifiedRoot {
                re: zi.re.clone(),
                im: zi.im.clone(),
                radius: r.to_f64_round(Round::Up),
            })
            .collect(),
    )
}

/// Largest distance in a greedy matching of each root `α` with the nearest
/// unused root to its Serre reflection `−r − ᾱ`.
pub fn symmetry_residual(analysis: &RootAnalysis, index_r: i64) -> f64 {
    let points = analysis.all_roots();
    let prec = analysis.precision;
    let mut used = vec![false; points.len()];
    let mut worst = 0.0f64;
    for (re, im, _) in &points {
        let target_re = Float::with_val(prec, -index_r) - re;
        let target_im = im.clone();
        let mut best: Option<(usize, Float)> = None;
        for (j, (re2, im2, _)) in points.iter().enumerate() {
            if used[j] {
                continue;
            }
            let dr = Float::with_val(prec, re2 - &target_re);
            let di = Float::with_val(prec, im2 - &target_im);
            let dist = dr.hypot(&di);
            if best.as_ref().is_none_or(|(_, b)| dist < *b) {
                best = Some((j, dist));
            }
        }
        if let Some((j, dist)) = best {
            used[j] = true;
            worst = worst.max(dist.to_f64_round(Round::Up));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{construct, ConstructionKind};
    use crate::verlinde::hilbert_polynomial;

    fn max_re(p: &ExactPolynomial) -> f64 {
        solve(p, 1e-10).unwrap().max_real_part.to_f64()
    }

    #[test]
    fn quadratic() {
        let p = ExactPolynomial::from_integers(&[2, 2, 1]);
        let a = solve(&p, 1e-10).unwrap();
        assert_eq!(a.multiplicity_at_minus_one, 0);
        assert_eq!(a.roots.len(), 2);
        assert!((a.max_real_part.to_f64() + 1.0).abs() < 1e-15);
        let mut ims: Vec<f64> = a.roots.iter().map(|r| r.im.to_f64()).collect();
        ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ims[0] + 1.0).abs() < 1e-15 && (ims[1] - 1.0).abs() < 1e-15);
        for r in &a.roots {
            assert!(r.radius < 1e-12);
        }
    }

    #[test]
    fn deflation_multiplicity() {
        // (t+1)^3 (t^2+1)
        let cube = ExactPolynomial::from_integers(&[1, 3, 3, 1]);
        let p = cube.mul(&ExactPolynomial::from_integers(&[1, 0, 1]));
        let (q, mult) = deflate_rational_roots(&p, &[Rational::from(-1)]).unwrap();
        assert_eq!(q, ExactPolynomial::from_integers(&[1, 0, 1]));
        assert_eq!(mult[&Rational::from(-1)], 3);
        assert_eq!(
            deflate_rational_roots(&ExactPolynomial::zero(), &[]),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn moduli_deflation_matches_genus_minus_one() {
        for (g, m) in [(2, 1), (5, 4)] {
            let h = hilbert_polynomial(g).unwrap();
            let (_, mult) = deflate_rational_roots(&h, &[Rational::from(-1)]).unwrap();
            assert_eq!(mult[&Rational::from(-1)], m);
        }
    }

    #[test]
    fn genus_two_moduli_roots() {
        let a = solve(&hilbert_polynomial(2).unwrap(), 1e-10).unwrap();
        assert_eq!(a.multiplicity_at_minus_one, 1);
        assert_eq!(a.deflated_degree, 2);
        for r in &a.roots {
            assert!((r.re.to_f64() + 1.0).abs() < 1e-15);
            assert!((r.im.to_f64().abs() - 0.5f64.sqrt()).abs() < 1e-15);
        }
        assert!((a.max_real_part.to_f64() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn table_entries() {
        let fano1 = construct(ConstructionKind::Fano1, 2).unwrap();
        assert!((max_re(&fano1.hilbert) + 0.5).abs() < 1e-12);
        let cy1 = construct(ConstructionKind::CY1, 2).unwrap();
        assert!(max_re(&cy1.hilbert).abs() < 1e-12);
        let cy1 = construct(ConstructionKind::CY1, 11).unwrap();
        assert!((max_re(&cy1.hilbert) - 0.0614369091).abs() < 1e-9);
    }

    #[test]
    fn residual_examples() {
        let p = ExactPolynomial::from_integers(&[2, 2, 1]);
        let a = solve(&p, 1e-10).unwrap();
        assert!(symmetry_residual(&a, 2) < 1e-30);

        let cy3 = construct(ConstructionKind::CY3, 6).unwrap();
        let a = solve(&cy3.hilbert, 1e-10).unwrap();
        assert!(symmetry_residual(&a, 0) < 1e-10);

        // a single real root at the centre −r/2
        let lin = ExactPolynomial::from_integers(&[3, 2]);
        let a = solve(&lin, 1e-10).unwrap();
        assert_eq!(symmetry_residual(&a, 3), 0.0);
    }

    #[test]
    fn rational_candidates_are_exact() {
        // (3t+1)(3t+2)/2
        let p = ExactPolynomial::from_integers(&[2, 9, 9]);
        let cands = [Rational::from((-1, 3)), Rational::from((-2, 3))];
        let a = solve_with_candidates(&p, &cands, 1e-10).unwrap();
        assert!(a.roots.is_empty());
        let gap = a.max_real_part.clone() + Rational::from((1, 3));
        assert!(gap.abs() < 1e-30);
        assert_eq!(a.max_real_error, 0.0);
    }
}
