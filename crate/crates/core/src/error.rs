use thiserror::Error;

use crate::invariant::VerificationReport;

/// Errors produced by curve construction, analysis and homotopy synthesis.
#[derive(Debug, Clone, Error)]
pub enum CurveError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("regularity violation at sample {index} (t = {t:.6}): speed {speed:.3e} below threshold")]
    RegularityViolation { index: usize, t: f64, speed: f64 },

    #[error("undersampled: velocity turns by {angle:.4} rad between samples {index} and {}", index + 1)]
    Undersampled { index: usize, angle: f64 },

    #[error("inconsistent angle lift: rounding residue {residue:.3e}")]
    InconsistentLift { residue: f64 },

    #[error("curve is not closed: endpoint gap {gap:.3e}")]
    NotClosed { gap: f64 },

    #[error("no generic direction found after {trials} trials")]
    NoGenericDirection { trials: usize },

    #[error("degenerate tangency near t = {t:.6}")]
    DegenerateTangency { t: f64 },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("turning numbers differ: {a} != {b}")]
    ClassMismatch { a: i64, b: i64 },

    #[error("homotopy synthesis failed in stage `{stage}`")]
    SynthesisFailure {
        stage: String,
        report: Box<VerificationReport>,
    },

    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("unknown identifier `{name}` at {line}:{col}")]
    UnknownIdentifier { name: String, line: usize, col: usize },
}

pub type Result<T, E = CurveError> = std::result::Result<T, E>;
