//! Dense univariate polynomials over the rationals.
//!
//! Everything here is exact. Coefficients are stored in the monomial basis,
//! lowest degree first, with trailing zeros trimmed so that the zero
//! polynomial is the empty coefficient vector.

use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExactPolynomial {
    coeffs: Vec<Rational>,
}

impl ExactPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::from(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn identity() -> Self {
        Self::from_integers(&[0, 1])
    }

    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    /// `t - root`
    pub fn linear(root: &Rational) -> Self {
        Self::new(vec![Rational::from(-root), Rational::from(1)])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == 0) {
            self.coeffs.pop();
        }
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `t^i`, zero beyond the degree.
    pub fn coefficient(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` is the sentinel for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&Rational::from(x))
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|c| Rational::from(c * factor))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| self.coefficient(i) + other.coefficient(i))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| self.coefficient(i) - other.coefficient(i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Self::new(out)
    }

    /// Returns `q` with `q(t) = p(t - j)`.
    pub fn shift(&self, j: i64) -> Self {
        if j == 0 || self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        // Horner in the shifted variable: p(t - j) = (...(c_n (t - j) + c_{n-1})(t - j) + ...)
        let n = self.coeffs.len();
        let minus_j = Rational::from(-j);
        let mut acc: Vec<Rational> = Vec::with_capacity(n);
        for c in self.coeffs.iter().rev() {
            // acc <- acc * (t - j) + c
            acc.push(Rational::new());
            for i in (1..acc.len()).rev() {
                acc[i] *= &minus_j;
                let lower = acc[i - 1].clone();
                acc[i] += lower;
            }
            acc[0] *= &minus_j;
            acc[0] += c;
        }
        Self::new(acc)
    }

    /// Returns `q` with `q(t) = p(-t)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if i % 2 == 1 {
                        Rational::from(-c)
                    } else {
                        c.clone()
                    }
                })
                .collect(),
        )
    }

    /// Exact formal derivative.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * i as u64))
                .collect(),
        )
    }

    /// Synthetic division by `t - root`. Returns the quotient and remainder.
    fn synthetic_division(&self, root: &Rational) -> (Self, Rational) {
        let n = self.coeffs.len();
        let mut quotient = vec![Rational::new(); n.saturating_sub(1)];
        let mut carry = Rational::new();
        for i in (0..n).rev() {
            carry *= root;
            carry += &self.coeffs[i];
            if i > 0 {
                quotient[i - 1] = carry.clone();
            }
        }
        (Self::new(quotient), carry)
    }

    /// Divides out `t - root` if `root` is an exact zero, otherwise returns
    /// the polynomial unchanged together with `false`.
    pub fn exact_divide_by_root(&self, root: &Rational) -> Result<(Self, bool)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (quotient, remainder) = self.synthetic_division(root);
        if remainder == 0 {
            Ok((quotient, true))
        } else {
            Ok((self.clone(), false))
        }
    }

    /// Multiplies through by the lcm of the denominators and divides by the
    /// content, giving a primitive integer polynomial with positive leading
    /// coefficient and the same roots.
    pub fn primitive_integer_coefficients(&self) -> Vec<Integer> {
        let mut lcm = Integer::from(1);
        for c in &self.coeffs {
            lcm.lcm_mut(c.denom());
        }
        let mut ints: Vec<Integer> = self
            .coeffs
            .iter()
            .map(|c| {
                let (num, den) = c.clone().into_numer_denom();
                num * (Integer::from(&lcm / &den))
            })
            .collect();
        let mut content = Integer::new();
        for c in &ints {
            content.gcd_mut(c);
        }
        if content != 0 {
            if ints.last().is_some_and(|c| *c < 0) {
                content = -content;
            }
            for c in &mut ints {
                c.div_exact_mut(&content);
            }
        }
        ints
    }
}

/// `Σ c_i · p_i`, exact, with the degree recomputed after cancellation.
pub fn linear_combine(terms: &[(Rational, &ExactPolynomial)]) -> ExactPolynomial {
    terms
        .iter()
        .fold(ExactPolynomial::zero(), |acc, (c, p)| acc.add(&p.scale(c)))
}

/// Values of an integer-valued function at consecutive integer arguments
/// `offset, offset + 1, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueTable {
    values: Vec<Integer>,
    offset: i64,
}

impl ValueTable {
    pub fn new(values: Vec<Integer>, offset: i64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientPoints {
                degree: 0,
                needed: 1,
                got: 0,
            });
        }
        Ok(Self { values, offset })
    }

    pub fn from_i64(values: &[i64], offset: i64) -> Result<Self> {
        Self::new(values.iter().map(|&v| Integer::from(v)).collect(), offset)
    }

    pub fn values(&self) -> &[Integer] {
        &self.values
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Interpolates the polynomial of degree at most `degree` through the first
/// `degree + 1` table entries using Newton forward differences, then checks
/// every surplus entry against it.
pub fn interpolate(table: &ValueTable, degree: usize) -> Result<ExactPolynomial> {
    let needed = degree + 1;
    if table.len() < needed {
        return Err(Error::InsufficientPoints {
            degree,
            needed,
            got: table.len(),
        });
    }

    // Leading entries of the forward-difference table: Δ^j y_0.
    let mut row: Vec<Integer> = table.values[..needed].to_vec();
    let mut differences = Vec::with_capacity(needed);
    for j in 0..needed {
        differences.push(row[0].clone());
        for i in 0..needed - 1 - j {
            row[i] = Integer::from(&row[i + 1] - &row[i]);
        }
    }

    // P(t) = Σ Δ^j y_0 · C(t - offset, j). The binomial basis element is
    // built incrementally: C(s, j) = C(s, j-1) · (s - j + 1) / j.
    let offset = Rational::from(table.offset);
    let mut basis = ExactPolynomial::one();
    let mut result = ExactPolynomial::zero();
    for (j, diff) in differences.iter().enumerate() {
        if j > 0 {
            let root = Rational::from(j as i64 - 1) + &offset;
            basis = basis
                .mul(&ExactPolynomial::linear(&root))
                .scale(&Rational::from((1, j as u64)));
        }
        if *diff != 0 {
            result = result.add(&basis.scale(&Rational::from(diff)));
        }
    }

    for (k, value) in table.values.iter().enumerate().skip(needed) {
        let argument = table.offset + k as i64;
        if result.eval_int(argument) != *value {
            return Err(Error::DegreeOverflow { degree, argument });
        }
    }
    Ok(result)
}

impl fmt::Display for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let negative = *c < 0;
            let magnitude = Rational::from(c.abs_ref());
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let unit = magnitude == 1 && i > 0;
            if !unit {
                write!(f, "{magnitude}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}t", if unit { "" } else { "*" })?,
                _ => write!(f, "{}t^{i}", if unit { "" } else { "*" })?,
            }
        }
        Ok(())
    }
}

/// Formats a rational as `num/den`, always with an explicit denominator.
pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

#[derive(Serialize, Deserialize)]
struct PolynomialRepr {
    coefficients: Vec<String>,
}

impl Serialize for ExactPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialRepr {
            coefficients: self.coeffs.iter().map(rational_to_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PolynomialRepr::deserialize(deserializer)?;
        let coeffs = repr
            .coefficients
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(Self::new(coeffs))
    }
}
