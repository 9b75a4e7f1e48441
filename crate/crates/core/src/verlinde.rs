//! Verlinde numbers for the moduli space of rank-2 bundles with fixed
//! odd-degree determinant on a genus `g` curve.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::exactpoly::{interpolate, ExactPolynomial, ValueTable};

/// The moduli space `M_C(2, L)` for a curve of the given genus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModuliDescriptor {
    genus: u32,
}

impl ModuliDescriptor {
    pub fn new(genus: u32) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidGenus(genus));
        }
        Ok(Self { genus })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn dimension(&self) -> usize {
        3 * self.genus as usize - 3
    }

    /// `-K = 2Θ`.
    pub fn index(&self) -> i64 {
        2
    }
}

/// Fraction-free Gaussian elimination. The determinant of an integer matrix
/// with every intermediate kept integral.
pub fn bareiss_determinant(mut m: Vec<Vec<Integer>>) -> Integer {
    let n = m.len();
    if n == 0 {
        return Integer::from(1);
    }
    let mut sign = 1;
    let mut prev = Integer::from(1);
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Integer::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let mut v = Integer::from(&m[i][j] * &m[k][k]);
                v -= Integer::from(&m[i][k] * &m[k][j]);
                v.div_exact_mut(&prev);
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// The `g × g` matrix whose row 0 is all ones and whose row `r ≥ 1` holds
/// `(k+1+r)^{2s+2} − (k+1−r)^{2s+2}`.
fn verlinde_matrix(genus: u32, level: u32) -> Vec<Vec<Integer>> {
    let g = genus as usize;
    let shifted = Integer::from(level) + 1;
    (0..g)
        .map(|r| {
            (0..g)
                .map(|s| {
                    if r == 0 {
                        Integer::from(1)
                    } else {
                        let exp = 2 * s as u32 + 2;
                        let plus = Integer::from(&shifted + r as u32).pow(exp);
                        let minus = Integer::from(&shifted - r as u32).pow(exp);
                        plus - minus
                    }
                })
                .collect()
        })
        .collect()
}

/// `dim H⁰(M_C(2, L), Θ^k)` from the determinant form of the Verlinde formula.
pub fn verlinde_det(genus: u32, level: u32) -> Result<Integer> {
    ModuliDescriptor::new(genus)?;
    let det = bareiss_determinant(verlinde_matrix(genus, level));
    let numerator = det << genus;
    let mut denominator = Integer::from(1);
    for j in 1..=genus {
        denominator *= Integer::from(Integer::factorial(2 * j));
    }
    let (quotient, remainder) = numerator.div_rem(denominator);
    if remainder != 0 {
        return Err(Error::NonIntegerResult { genus, level });
    }
    Ok(quotient)
}

/// Default working precision for [`verlinde_trig`]: `64 + 4 g log2(k + 2)`.
pub fn default_trig_precision(genus: u32, level: u32) -> u32 {
    let bits = 64.0 + 4.0 * genus as f64 * ((level + 2) as f64).log2();
    bits.ceil() as u32
}

/// The trigonometric Verlinde sum
/// `(k+1)^{g-1} Σ_{j=1}^{2k+1} (-1)^{j-1} / sin^{2g-2}(jπ / (2k+2))`,
/// evaluated in floating point and rounded to the nearest integer.
pub fn verlinde_trig(genus: u32, level: u32, precision_bits: u32) -> Result<Integer> {
    ModuliDescriptor::new(genus)?;
    let prec = precision_bits.max(64);
    // Guard bits so that the sum itself is accurate to the requested precision.
    let work = prec + 32 + 2 * genus * (32 - (level + 2).leading_zeros());
    let pi = Float::with_val(work, Constant::Pi);
    let denominator = 2 * level + 2;
    let power = 2 * genus - 2;
    let mut sum = Float::with_val(work, 0);
    for j in 1..=(2 * level + 1) {
        let angle = Float::with_val(work, &pi * j) / denominator;
        let term = angle.sin().pow(power).recip();
        if j % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum *= Float::with_val(work, level + 1).pow(genus - 1);

    let rounded = sum.clone().round();
    let distance = Float::with_val(work, &sum - &rounded).abs();
    let tolerance = Float::with_val(work, Float::i_exp(1, -(prec as i32 / 4)));
    if distance >= tolerance {
        return Err(Error::PrecisionExhausted {
            precision: prec,
            distance: distance.to_f64(),
        });
    }
    Ok(rounded.to_integer().expect("finite sum"))
}

/// Hilbert polynomial of `M_C(2, L)` with respect to `Θ`.
///
/// Interpolates through the Verlinde numbers at levels `0..=3g-3` and checks
/// the two further levels `3g-2`, `3g-1` against the interpolant.
pub fn hilbert_polynomial(genus: u32) -> Result<ExactPolynomial> {
    let moduli = ModuliDescriptor::new(genus)?;
    let degree = moduli.dimension();
    let values = (0..3 * genus)
        .map(|k| verlinde_det(genus, k))
        .collect::<Result<Vec<_>>>()?;
    interpolate(&ValueTable::new(values, 0)?, degree)
}
