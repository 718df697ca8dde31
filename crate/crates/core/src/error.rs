use thiserror::Error;

/// Failures raised by the solvers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid exponent set: {0}")]
    InvalidExponents(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix A1 is singular for exponents {0:?}")]
    SingularMatrix(Vec<u32>),

    #[error(
        "no admissible real crest root for delta = {delta}: δ exceeds critical value ≈ 0.62633493"
    )]
    NoSolitaryRoot { delta: f64 },

    #[error("ambiguous crest root for delta = {delta}: candidates {candidates:?}")]
    AmbiguousRoot { delta: f64, candidates: Vec<f64> },

    #[error(
        "denominator d vanished at x = {x} (d = {d:e}): δ exceeds critical value ≈ 0.62633493"
    )]
    DenominatorVanished { x: f64, d: f64 },

    #[error("water depth H = 1 + eta vanished at x = {x}")]
    DepthVanished { x: f64 },

    #[error("step size underflow at x = {x} (h = {h:e})")]
    StepSizeUnderflow { x: f64, h: f64 },

    #[error(
        "Newton iteration diverged after {iterations} iterations at (delta, u0) = ({delta}, {u0}), residuals {residuals:?}"
    )]
    NewtonDiverged {
        iterations: usize,
        delta: f64,
        u0: f64,
        residuals: [f64; 2],
    },

    #[error("negative radicand {0:e} in crest slope formula")]
    NegativeRadicand(f64),

    #[error("q(xi^2) = {value:e} is not positive at xi = {xi}")]
    NonPositiveDetected { xi: f64, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
