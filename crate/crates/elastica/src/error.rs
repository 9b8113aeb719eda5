use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Elliptic modulus outside `[0, 1)`. The integrals diverge at `m = 1`
    /// and nothing in this crate evaluates beyond it.
    #[error("elliptic modulus m = {0} outside [0, 1)")]
    ModulusOutOfRange(f64),

    /// A scalar argument violated its documented constraint.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Root bracketing failed; with working elliptic integrals this cannot
    /// happen for the built-in brackets.
    #[error("root finding failed: {0}")]
    RootFinding(String),

    /// A curve failed the discrete-immersion requirements (at least three
    /// vertices, consecutive vertices more than 1e-12 apart).
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    /// The turning-angle sum is too far from an integer multiple of 2*pi to
    /// trust the rounded winding number.
    #[error("winding number ambiguous: residual {residual:.4} >= 0.1 turns")]
    WindingAmbiguous { residual: f64 },

    /// Length-preserving multiplier undefined: the discrete bending energy
    /// is numerically zero.
    #[error("bending energy below 1e-14; length-preserving multiplier undefined")]
    ZeroEnergy,

    /// A flow step could not decrease the monitored energy even after the
    /// maximum number of time-step halvings.
    #[error("flow step failed after {halvings} time-step halvings at step {step}")]
    StepFailed { step: u64, halvings: u32 },

    /// Length drifted past the configured budget in length-preserving mode.
    #[error("length drift {drift:.3e} exceeds budget {budget:.3e}")]
    LengthDrift { drift: f64, budget: f64 },

    /// A random sampling procedure exhausted its retry budget.
    #[error("sampling failed: {0}")]
    SamplingFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
