use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{what} is not symmetric (relative asymmetry {asymmetry:.3e})")]
    NonSymmetric { what: &'static str, asymmetry: f64 },
    #[error("period must be positive and finite, got {0}")]
    NonPositivePeriod(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(&'static str),
    #[error("non-finite value encountered at integration step {step}")]
    NonFinite { step: usize },
    #[error("unstable configuration: Floquet multiplier off the unit circle by {margin:.3e}")]
    Unstable { margin: f64 },
    #[error("degenerate monodromy: {0}")]
    Degenerate(&'static str),
    #[error("canonical normalization is singular for mode {mode}")]
    NormalizationSingular { mode: usize },
    #[error("hypergeometric series did not converge within {terms} terms")]
    NonConverged { terms: usize },
    #[error("lower parameter {0} of 1F1 is a non-positive integer")]
    PoleInDenominator(f64),
    #[error("pochhammer symbol overflows f64")]
    Overflow,
    #[error("invalid state specification: {0}")]
    InvalidSpec(&'static str),
    #[error("imaginary residue {residue:.3e} exceeds tolerance {tolerance:.1e}")]
    ImaginaryResidue { residue: f64, tolerance: f64 },
    #[error("grid has {points} points, more than the limit of {limit}")]
    GridTooLarge { points: usize, limit: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("grid holds no samples")]
    EmptyGrid,
    #[error("the U block of the Floquet-Lyapunov transformation is singular")]
    SingularU,
    #[error("truncated Fock space of dimension {dim}^{n_modes} exceeds the limit of {limit}")]
    DimensionGuard { dim: usize, n_modes: usize, limit: usize },
    #[error("excitation number {0} exceeds the supported maximum of 64")]
    ExcitationTooLarge(u32),
}
