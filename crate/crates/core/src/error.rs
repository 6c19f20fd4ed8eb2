use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("degree {degree} out of range for {n_dims} dimensions (need 1 <= degree < n_dims)")]
    DegreeOutOfRange { n_dims: usize, degree: usize },

    #[error(
        "coefficient table needs {required} coefficients ({required_bytes} bytes), over the cap of {cap} coefficients"
    )]
    CoeffTableTooLarge {
        required: u128,
        required_bytes: u128,
        cap: u64,
    },

    #[error("index {index} out of range for {n_dims} dimensions")]
    IndexOutOfRange { index: usize, n_dims: usize },

    #[error("state entry at {index} is {value}, outside the allowed range")]
    EntryOutOfRange { index: usize, value: f64 },

    #[error("coefficients are all zero; cannot normalize")]
    ZeroCoefficients,

    #[error("descent exceeded the step cap of {cap} flips; this indicates a bug in the flip bookkeeping")]
    StepCapExceeded { cap: usize },

    #[error("exhaustive sweep over {n_dims} dimensions exceeds the cap of {cap}")]
    ExhaustiveCapExceeded { n_dims: usize, cap: usize },

    #[error("parameter {name} = {value} out of range: {requirement}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("need at least {needed} {what}, got {got}")]
    TooFew {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("no gamma crossing: the crossover norm at gamma = 0.5 is {norm_at_half}, still above 1/sqrt(2); parents are too similar")]
    NoGammaCrossing { norm_at_half: f64 },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("tour is not a permutation of 0..{n_cities}")]
    InvalidTour { n_cities: usize },

    #[error("degenerate instance: tour-length spread is zero, cannot normalize")]
    DegenerateInstance,

    #[error("malformed input: {detail}")]
    BadFormat { detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
