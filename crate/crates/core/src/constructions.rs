//! Varieties built from `M_C(2, L)`: linear sections, double covers, a cone
//! and two joins. Each one changes the Hilbert series by a fixed rational
//! factor, which on the Hilbert polynomial becomes a short combination of
//! shifts `h(t - j)`.
//!
//! | kind  | construction                                   | series factor    | dim    | r |
//! |-------|------------------------------------------------|------------------|--------|---|
//! | M     | the moduli space, polarised by Θ               | 1                | 3g−3   | 2 |
//! | Fano1 | hyperplane section                             | 1 − t            | 3g−4   | 1 |
//! | Fano2 | double cover branched in 2Θ                    | 1 + t            | 3g−3   | 1 |
//! | CY1   | anticanonical section                          | 1 − t²           | 3g−4   | 0 |
//! | CY2   | codimension-2 linear section                   | (1 − t)²         | 3g−5   | 0 |
//! | CY3   | double cover branched in 4Θ                    | 1 + t²           | 3g−3   | 0 |
//! | CY4   | cone, cut by a cubic                           | 1 + t + t²       | 3g−3   | 0 |
//! | CY5   | join with a line, cut by two quadrics          | (1 + t)²         | 3g−3   | 0 |
//! | CY6   | join with a degree-1 elliptic curve, cut twice | 1 − t + t²       | 3g−3   | 0 |

use std::fmt;
use std::str::FromStr;

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{linear_combine, ExactPolynomial};
use crate::verlinde::hilbert_polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionKind {
    Fano1,
    Fano2,
    Moduli,
    CY1,
    CY2,
    CY3,
    CY4,
    CY5,
    CY6,
}

impl ConstructionKind {
    /// Column order of the published table.
    pub const ALL: [ConstructionKind; 9] = [
        ConstructionKind::Fano1,
        ConstructionKind::Fano2,
        ConstructionKind::Moduli,
        ConstructionKind::CY1,
        ConstructionKind::CY2,
        ConstructionKind::CY3,
        ConstructionKind::CY4,
        ConstructionKind::CY5,
        ConstructionKind::CY6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstructionKind::Fano1 => "fano1",
            ConstructionKind::Fano2 => "fano2",
            ConstructionKind::Moduli => "moduli",
            ConstructionKind::CY1 => "cy1",
            ConstructionKind::CY2 => "cy2",
            ConstructionKind::CY3 => "cy3",
            ConstructionKind::CY4 => "cy4",
            ConstructionKind::CY5 => "cy5",
            ConstructionKind::CY6 => "cy6",
        }
    }

    /// `(coefficient, j)` pairs: the Hilbert polynomial is `Σ c · h(t - j)`.
    pub fn shift_terms(self) -> &'static [(i64, i64)] {
        match self {
            ConstructionKind::Moduli => &[(1, 0)],
            ConstructionKind::Fano1 => &[(1, 0), (-1, 1)],
            ConstructionKind::Fano2 => &[(1, 0), (1, 1)],
            ConstructionKind::CY1 => &[(1, 0), (-1, 2)],
            ConstructionKind::CY2 => &[(1, 0), (-2, 1), (1, 2)],
            ConstructionKind::CY3 => &[(1, 0), (1, 2)],
            ConstructionKind::CY4 => &[(1, 0), (1, 1), (1, 2)],
            ConstructionKind::CY5 => &[(1, 0), (2, 1), (1, 2)],
            ConstructionKind::CY6 => &[(1, 0), (-1, 1), (1, 2)],
        }
    }

    /// How many dimensions the construction loses relative to the moduli space.
    pub fn codimension(self) -> usize {
        match self {
            ConstructionKind::Fano1 | ConstructionKind::CY1 => 1,
            ConstructionKind::CY2 => 2,
            _ => 0,
        }
    }

    pub fn dimension(self, genus: u32) -> usize {
        3 * genus as usize - 3 - self.codimension()
    }

    pub fn index(self) -> i64 {
        match self {
            ConstructionKind::Moduli => 2,
            ConstructionKind::Fano1 | ConstructionKind::Fano2 => 1,
            _ => 0,
        }
    }

    pub fn is_calabi_yau(self) -> bool {
        self.index() == 0
    }
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConstructionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let key = match lower.as_str() {
            "m" | "moduli" => "moduli",
            other => other,
        };
        ConstructionKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown construction {s:?}")))
    }
}

/// A monotone polarised variety `(X, H)` with `-K_X ≡ rH`, recorded by its
/// dimension, index and Hilbert polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarisedInvariant {
    pub dimension: usize,
    pub index: i64,
    pub hilbert: ExactPolynomial,
}

impl PolarisedInvariant {
    /// Validates degree and Serre duality, and for positive index also
    /// `h(0) = χ(O) = 1`. `label` only appears in error messages.
    pub fn new(
        label: &str,
        dimension: usize,
        index: i64,
        hilbert: ExactPolynomial,
    ) -> Result<Self> {
        if hilbert.degree() != Some(dimension) {
            return Err(Error::DimensionMismatch {
                kind: label.to_string(),
                degree: hilbert.degree(),
                dimension,
            });
        }
        let constant = hilbert.coefficient(0);
        if index > 0 && constant != 1 {
            return Err(Error::ConstantTerm {
                kind: label.to_string(),
                constant: constant.to_string(),
            });
        }
        let invariant = Self {
            dimension,
            index,
            hilbert,
        };
        if !invariant.satisfies_serre_symmetry() {
            return Err(Error::SymmetryViolation {
                kind: label.to_string(),
                index,
            });
        }
        Ok(invariant)
    }

    /// `h(t) = (-1)^dim h(-t - r)` as polynomials.
    pub fn satisfies_serre_symmetry(&self) -> bool {
        let mut dual = self.hilbert.reflect().shift(-self.index);
        if self.dimension % 2 == 1 {
            dual = dual.scale(&Rational::from(-1));
        }
        dual == self.hilbert
    }
}

/// Hilbert polynomial, dimension and index of `kind` built over the genus-`g`
/// moduli space whose Hilbert polynomial is `h`.
pub fn apply(
    kind: ConstructionKind,
    genus: u32,
    h: &ExactPolynomial,
) -> Result<PolarisedInvariant> {
    let shifted: Vec<(Rational, ExactPolynomial)> = kind
        .shift_terms()
        .iter()
        .map(|&(c, j)| (Rational::from(c), h.shift(j)))
        .collect();
    let terms: Vec<(Rational, &ExactPolynomial)> =
        shifted.iter().map(|(c, p)| (c.clone(), p)).collect();
    let hilbert = linear_combine(&terms);
    PolarisedInvariant::new(kind.name(), kind.dimension(genus), kind.index(), hilbert)
}

/// All nine invariants for one genus, in table order.
pub fn all_constructions(genus: u32) -> Result<Vec<PolarisedInvariant>> {
    let h = hilbert_polynomial(genus)?;
    ConstructionKind::ALL
        .iter()
        .map(|&kind| apply(kind, genus, &h))
        .collect()
}

pub fn construct(kind: ConstructionKind, genus: u32) -> Result<PolarisedInvariant> {
    apply(kind, genus, &hilbert_polynomial(genus)?)
}
