use thiserror::Error;

use crate::dynamics::SeriesKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid ring spec: {0}")]
    InvalidSpec(String),

    #[error("node index {index} out of range for a ring of {n} nodes")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("N = {n} exceeds the dense-matrix guard of {limit}; {hint}")]
    GuardExceeded {
        n: usize,
        limit: usize,
        hint: &'static str,
    },

    #[error("invalid bin count {0}: need at least 2")]
    InvalidBins(usize),

    #[error("spectrum has zero span; cannot build a histogram")]
    DegenerateSpectrum,

    #[error("energy {energy} lies outside the open band (0, {e_max})")]
    OutOfBand { energy: f64, e_max: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("{function}({arg}) is outside the supported domain")]
    OutOfDomain { function: &'static str, arg: f64 },

    #[error("E''(0) diverges in the infinite system for gamma = {gamma} <= 3")]
    DivergentCurvature { gamma: f64 },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("MSD/return relation does not hold for classical walks with gamma = {gamma} <= 3")]
    RelationNotApplicable { gamma: f64 },

    #[error("not enough usable points: need {needed}, found {found}")]
    InsufficientData { needed: usize, found: usize },

    #[error("missing fit for {0:?}")]
    MissingFit(SeriesKind),
}
