//! Error type shared by all modules.

use crate::noise::NoiseKind;
use core::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A constructor argument is out of its documented domain.
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// A disk coordinate with |gamma| >= 1 does not describe a physical squeeze.
    NonPhysicalGamma { magnitude: f64 },
    /// Sampled data and noise path live on different grids.
    GridMismatch { expected: usize, got: usize },
    /// A trajectory evaluator was fed the wrong kind of Wiener record.
    NoiseKindMismatch { expected: NoiseKind, got: NoiseKind },
    /// A closed-form denominator dropped below the safe threshold.
    Singularity { t: f64, magnitude: f64 },
    /// A runtime invariant failed during integration.
    InvariantViolation { what: &'static str, t: f64 },
    /// The number-basis truncation cannot represent the requested state.
    CutoffTooSmall { cutoff: usize, tail_mass: f64 },
    /// A state vector or matrix stopped being finite.
    NumericalGuard { what: &'static str, step: usize },
    /// Expectation value of a zero-norm vector.
    ZeroNorm,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter {
                name,
                value,
                reason,
            } => write!(f, "invalid parameter {name} = {value}: {reason}"),
            Error::NonPhysicalGamma { magnitude } => {
                write!(f, "|gamma| = {magnitude} >= 1 is not a physical squeeze")
            }
            Error::GridMismatch { expected, got } => {
                write!(f, "grid mismatch: expected {expected} samples, got {got}")
            }
            Error::NoiseKindMismatch { expected, got } => {
                write!(f, "noise kind mismatch: expected {expected:?}, got {got:?}")
            }
            Error::Singularity { t, magnitude } => {
                write!(f, "closed-form denominator magnitude {magnitude} at t = {t}")
            }
            Error::InvariantViolation { what, t } => {
                write!(f, "invariant violated at t = {t}: {what}")
            }
            Error::CutoffTooSmall { cutoff, tail_mass } => {
                write!(f, "cutoff {cutoff} too small: tail mass {tail_mass}")
            }
            Error::NumericalGuard { what, step } => {
                write!(f, "numerical guard tripped at step {step}: {what}")
            }
            Error::ZeroNorm => write!(f, "zero-norm state vector"),
        }
    }
}

#[cfg(any(test, feature = "std"))]
impl std::error::Error for Error {}
