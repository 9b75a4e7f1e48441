use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("interpolation of degree {degree} needs {needed} values, got {got}")]
    InsufficientPoints {
        degree: usize,
        needed: usize,
        got: usize,
    },

    /// A surplus table entry disagrees with the interpolant, so the data has
    /// higher degree than claimed.
    #[error("value at argument {argument} disagrees with the degree-{degree} interpolant")]
    DegreeOverflow { degree: usize, argument: i64 },

    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("genus must be at least 2, got {0}")]
    InvalidGenus(u32),

    #[error("Verlinde determinant not divisible by the normalising factorial product (g={genus}, k={level})")]
    NonIntegerResult { genus: u32, level: u32 },

    #[error("trigonometric sum is {distance:e} away from an integer at {precision} bits")]
    PrecisionExhausted { precision: u32, distance: f64 },

    #[error("{kind}: Hilbert polynomial has degree {degree:?}, expected dimension {dimension}")]
    DimensionMismatch {
        kind: String,
        degree: Option<usize>,
        dimension: usize,
    },

    #[error("{kind}: Serre duality identity fails for index {index}")]
    SymmetryViolation { kind: String, index: i64 },

    #[error("{kind}: Hilbert polynomial has constant term {constant}, expected 1")]
    ConstantTerm { kind: String, constant: String },

    #[error("root solver did not converge (last precision {precision} bits, worst radius {worst_radius:e})")]
    NonConvergence { precision: u32, worst_radius: f64 },

    #[error("{hypothesis}: root with real part {real_part} lies within its error radius {radius:e} of the bound {bound}")]
    Indeterminate {
        hypothesis: &'static str,
        real_part: String,
        radius: f64,
        bound: String,
    },

    #[error("polytope is not full-dimensional in R^{0}")]
    NotFullDimensional(usize),

    #[error("origin is not in the interior of the polytope")]
    OriginNotInterior,

    #[error("facets must be supplied for polytopes of dimension {0} > 3")]
    FacetsRequired(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
