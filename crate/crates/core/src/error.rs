use crate::exact::Scalar;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("duplicate node {value} at positions {first} and {second}")]
    DuplicateNode {
        first: usize,
        second: usize,
        value: Scalar,
    },

    #[error("polynomial takes the negative value {value} at atom {atom}")]
    NegativeValue {
        atom: Box<Scalar>,
        value: Box<Scalar>,
    },

    #[error("polynomial {which} takes negative values on [{lo}, {hi}]")]
    NegativeOnSupport {
        which: String,
        lo: Box<Scalar>,
        hi: Box<Scalar>,
    },

    #[error("base measure cannot produce exact monomial moments: {0}")]
    UnsupportedBase(String),

    #[error("row {row} carries zero mass")]
    ZeroMass { row: usize },

    #[error("moment {index} vanishes; weight ratios are undefined")]
    ZeroMoment { index: String },

    #[error("weight data exhausted at index {index}")]
    TailExhausted { index: usize },

    #[error("invalid squared weight {value} at index {index}")]
    InvalidWeight { index: String, value: Scalar },

    #[error("commutativity fails at grid point ({k1}, {k2})")]
    CommutativityViolation { k1: usize, k2: usize },

    #[error("window too small: need grid point ({k1}, {k2})")]
    WindowTooSmall { k1: usize, k2: usize },

    #[error("solved density {value} at atom {index} is not positive")]
    NonpositiveDensity { index: usize, value: Scalar },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("shift is not spherically quasinormal on the window")]
    NotSpherical,
}
