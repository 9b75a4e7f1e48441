//! Hilbert polynomials of the moduli space of rank-2 bundles with odd
//! determinant on a curve, of the Fano and Calabi–Yau varieties built from
//! it, and of smooth toric Fano varieties; certified location of their
//! complex roots; and the canonical line / strip tests on those roots.

pub mod constructions;
pub mod ehrhart;
pub mod error;
pub mod exactpoly;
pub mod hypotheses;
pub mod numfmt;
pub mod report;
pub mod roots;
pub mod verlinde;

pub use constructions::{apply, construct, ConstructionKind, PolarisedInvariant};
pub use error::{Error, Result};
pub use exactpoly::{interpolate, linear_combine, ExactPolynomial, ValueTable};
pub use hypotheses::{classify, HypothesisVerdict};
pub use roots::{solve, symmetry_residual, RootAnalysis};
pub use verlinde::{hilbert_polynomial, verlinde_det, verlinde_trig};
