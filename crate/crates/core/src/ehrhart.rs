//! Ehrhart polynomials of lattice polytopes by direct lattice-point counting.
//!
//! For a smooth toric Fano variety the Ehrhart polynomial of the moment
//! polytope of `−K` is the anticanonical Hilbert polynomial, so it enters the
//! root pipeline as a monotone pair of index 1.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use rug::{Float, Integer};

use crate::constructions::PolarisedInvariant;
use crate::error::{Error, Result};
use crate::exactpoly::{interpolate, ExactPolynomial, ValueTable};
use crate::hypotheses::{analyse, HypothesisVerdict};
use crate::roots::RootAnalysis;

/// Half-space `normal · x ≤ offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    vertices: Vec<Vec<i64>>,
    dimension: usize,
    facets: Vec<Facet>,
}

impl LatticePolytope {
    /// Builds the polytope spanned by `vertices`, computing its facets
    /// (dimension at most 3).
    pub fn new(vertices: Vec<Vec<i64>>) -> Result<Self> {
        let dimension = check_shape(&vertices)?;
        if dimension > 3 {
            return Err(Error::FacetsRequired(dimension));
        }
        let facets = facets_of(&vertices, dimension);
        Self::finish(vertices, dimension, facets)
    }

    /// Uses caller-supplied facet inequalities instead of computing them.
    pub fn with_facets(vertices: Vec<Vec<i64>>, facets: Vec<Facet>) -> Result<Self> {
        let dimension = check_shape(&vertices)?;
        if facets.iter().any(|f| f.normal.len() != dimension) {
            return Err(Error::Parse("facet normal has the wrong length".into()));
        }
        Self::finish(vertices, dimension, facets)
    }

    fn finish(vertices: Vec<Vec<i64>>, dimension: usize, mut facets: Vec<Facet>) -> Result<Self> {
        facets.sort();
        facets.dedup();
        if facets.iter().any(|f| f.offset <= 0) {
            return Err(Error::OriginNotInterior);
        }
        Ok(Self {
            vertices,
            dimension,
            facets,
        })
    }

    /// Parses the text format: one point per line as whitespace-separated
    /// integers, `#` starts a comment, and lines `facet a_1 … a_d b` give the
    /// inequality `a · x ≤ b`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vertices = Vec::new();
        let mut facets = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (is_facet, body) = match line.strip_prefix("facet") {
                Some(rest) => (true, rest),
                None => (false, line),
            };
            let nums = body
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>().map_err(|_| {
                        Error::Parse(format!("line {}: bad integer {tok:?}", lineno + 1))
                    })
                })
                .collect::<Result<Vec<i64>>>()?;
            if is_facet {
                let (offset, normal) = nums
                    .split_last()
                    .ok_or_else(|| Error::Parse(format!("line {}: empty facet", lineno + 1)))?;
                facets.push(Facet {
                    normal: normal.to_vec(),
                    offset: *offset,
                });
            } else {
                vertices.push(nums);
            }
        }
        if facets.is_empty() {
            Self::new(vertices)
        } else {
            Self::with_facets(vertices, facets)
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    fn bounding_box(&self, dilate: i64) -> Vec<(i64, i64)> {
        (0..self.dimension)
            .map(|i| {
                let lo = self.vertices.iter().map(|v| v[i]).min().unwrap_or(0);
                let hi = self.vertices.iter().map(|v| v[i]).max().unwrap_or(0);
                (lo * dilate, hi * dilate)
            })
            .collect()
    }

    fn count(&self, dilate: i64, strict: bool) -> Integer {
        let bbox = self.bounding_box(dilate);
        let mut point: Vec<i64> = bbox.iter().map(|&(lo, _)| lo).collect();
        let mut count = Integer::new();
        loop {
            let inside = self.facets.iter().all(|f| {
                let value: i64 = f.normal.iter().zip(&point).map(|(a, x)| a * x).sum();
                if strict {
                    value < f.offset * dilate
                } else {
                    value <= f.offset * dilate
                }
            });
            if inside {
                count += 1;
            }
            // odometer step
            let mut axis = 0;
            loop {
                if axis == self.dimension {
                    return count;
                }
                if point[axis] < bbox[axis].1 {
                    point[axis] += 1;
                    break;
                }
                point[axis] = bbox[axis].0;
                axis += 1;
            }
        }
    }
}

fn check_shape(vertices: &[Vec<i64>]) -> Result<usize> {
    let dimension = vertices
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::Parse("no vertices".into()))?;
    if dimension == 0 || vertices.iter().any(|v| v.len() != dimension) {
        return Err(Error::Parse(
            "vertices must share a positive dimension".into(),
        ));
    }
    if vertices.len() < dimension + 1 || affine_rank(vertices) < dimension {
        return Err(Error::NotFullDimensional(dimension));
    }
    Ok(dimension)
}

/// Rank of the differences `v_i − v_0`, by fraction-free elimination.
fn affine_rank(vertices: &[Vec<i64>]) -> usize {
    let base = &vertices[0];
    let mut rows: Vec<Vec<i128>> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(base).map(|(a, b)| (a - b) as i128).collect())
        .collect();
    let cols = base.len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let (a, b) = (rows[rank][col], rows[r][col]);
                let pivot_row = rows[rank].clone();
                for (x, p) in rows[r].iter_mut().zip(&pivot_row) {
                    *x = *x * a - p * b;
                }
                let g = rows[r].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    rows[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Supporting hyperplanes through every `d`-subset of points that have all
/// points on one side. Exact for `d ≤ 3`.
fn facets_of(points: &[Vec<i64>], dimension: usize) -> Vec<Facet> {
    let mut facets = Vec::new();
    let mut consider = |normal: Vec<i64>, anchor: &[i64]| {
        let g = normal.iter().fold(0i128, |g, &x| gcd(g, (x as i128).abs())) as i64;
        if g == 0 {
            return;
        }
        let normal: Vec<i64> = normal.iter().map(|x| x / g).collect();
        let offset: i64 = normal.iter().zip(anchor).map(|(a, x)| a * x).sum();
        let values: Vec<i64> = points
            .iter()
            .map(|p| normal.iter().zip(p).map(|(a, x)| a * x).sum())
            .collect();
        if values.iter().all(|&v| v <= offset) {
            facets.push(Facet { normal, offset });
        } else if values.iter().all(|&v| v >= offset) {
            facets.push(Facet {
                normal: normal.iter().map(|x| -x).collect(),
                offset: -offset,
            });
        }
    };
    let n = points.len();
    match dimension {
        1 => {
            for p in points {
                consider(vec![1], p);
            }
        }
        2 => {
            for i in 0..n {
                for j in i + 1..n {
                    let (a, b) = (&points[i], &points[j]);
                    consider(vec![b[1] - a[1], a[0] - b[0]], a);
                }
            }
        }
        3 => {
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        let a = &points[i];
                        let u: Vec<i64> = (0..3).map(|c| points[j][c] - a[c]).collect();
                        let v: Vec<i64> = (0..3).map(|c| points[k][c] - a[c]).collect();
                        let cross = vec![
                            u[1] * v[2] - u[2] * v[1],
                            u[2] * v[0] - u[0] * v[2],
                            u[0] * v[1] - u[1] * v[0],
                        ];
                        consider(cross, a);
                    }
                }
            }
        }
        _ => unreachable!("facets are computed only up to dimension 3"),
    }
    facets
}

/// Number of lattice points in `dilate · P`.
pub fn count_lattice_points(p: &LatticePolytope, dilate: u32) -> Integer {
    p.count(dilate as i64, false)
}

/// Number of lattice points in the interior of `dilate · P`.
pub fn count_interior_points(p: &LatticePolytope, dilate: u32) -> Integer {
    p.count(dilate as i64, true)
}

/// Interpolates counts at dilates `0..=d` and checks dilate `d + 1`.
pub fn ehrhart_polynomial(p: &LatticePolytope) -> Result<ExactPolynomial> {
    let d = p.dimension();
    let counts = (0..=d as u32 + 1)
        .map(|k| count_lattice_points(p, k))
        .collect();
    interpolate(&ValueTable::new(counts, 0)?, d)
}

/// The anticanonical pair `(X_P, −K)`: dimension `d`, index 1.
pub fn anticanonical_invariant(p: &LatticePolytope) -> Result<PolarisedInvariant> {
    PolarisedInvariant::new("polytope", p.dimension(), 1, ehrhart_polynomial(p)?)
}

#[derive(Clone, Debug)]
pub struct PolytopeReport {
    pub name: String,
    pub invariant: PolarisedInvariant,
    pub analysis: RootAnalysis,
    pub verdict: HypothesisVerdict,
}

#[derive(Clone, Debug)]
pub struct ScanResult {
    pub max_real_part: Float,
    pub max_real_error: f64,
    pub argmax: String,
    pub reports: Vec<PolytopeReport>,
}

pub fn analyse_polytope(
    name: &str,
    p: &LatticePolytope,
    target_error: f64,
) -> Result<PolytopeReport> {
    let invariant = anticanonical_invariant(p)?;
    let (analysis, verdict) = analyse(&invariant, target_error)?;
    Ok(PolytopeReport {
        name: name.to_string(),
        invariant,
        analysis,
        verdict,
    })
}

/// Runs every polytope through the pipeline and reports the largest real
/// part of any root, with the first polytope attaining it.
pub fn scan_maximum(
    polytopes: &[(String, LatticePolytope)],
    target_error: f64,
) -> Result<ScanResult> {
    let first = polytopes
        .first()
        .ok_or_else(|| Error::Parse("no polytopes to scan".into()))?;
    let d = first.1.dimension();
    if let Some((name, _)) = polytopes.iter().find(|(_, p)| p.dimension() != d) {
        return Err(Error::Parse(format!("{name} does not have dimension {d}")));
    }
    let reports = polytopes
        .par_iter()
        .map(|(name, p)| analyse_polytope(name, p, target_error))
        .collect::<Result<Vec<_>>>()?;
    let best = reports
        .iter()
        .fold(None::<&PolytopeReport>, |best, r| match best {
            Some(b) if b.analysis.max_real_part >= r.analysis.max_real_part => Some(b),
            _ => Some(r),
        })
        .expect("nonempty");
    Ok(ScanResult {
        max_real_part: best.analysis.max_real_part.clone(),
        max_real_error: best.analysis.max_real_error,
        argmax: best.name.clone(),
        reports,
    })
}

/// Every `*.txt` file in `dir`, sorted by file name.
pub fn load_directory(dir: &Path) -> Result<Vec<(String, LatticePolytope)>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "txt"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|path| {
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok((name, LatticePolytope::from_file(path)?))
        })
        .collect()
}

/// Directory of the bundled smooth Fano fixtures of dimension 2 or 3.
pub fn fixture_directory(dimension: usize) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join("polytopes")
        .join(format!("dim{dimension}"))
}
