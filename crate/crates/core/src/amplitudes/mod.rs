//! Mixed-boundary disk amplitudes `W_{1,j,...,N}` from the spectral curve.
//!
//! Everything here runs on numeric couplings: points of the curve are
//! h-series, amplitudes are h-series at chosen boundary values, and exact
//! coupling polynomials are recovered afterwards by interpolation.

mod base;
mod checks;
mod extract;
mod recursion;
mod table;

use thiserror::Error;

use crate::exact_algebra::AlgebraError;
use crate::spectral_curve::CurveError;

pub use base::{base_amplitude, base_amplitude_in_q, ChainContext, CurvePoint};
pub use checks::{
    master_equation, regularity, residue_sum_zero, two_path_agreement, verify_loop_equation,
    CheckReport,
};
pub use extract::{
    calibrate_conventions, extract_at_point, extract_moments, gaussian_cells, NodePlan,
    PointMoments,
};
pub use recursion::{full_amplitude, kernel_k, recursion_step, MidFiber, MixedAmplitude};
pub use table::{CalibrationRecord, CellKey, MomentTable, Pipeline};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AmplitudeError {
    #[error("coefficient {cell} changed from {before} to {after} when the truncation was raised")]
    UnstableCoefficient {
        cell: String,
        before: String,
        after: String,
    },
    #[error("calibration failed: {0}")]
    CalibrationFailed(String),
    #[error("truncation too short: {0}")]
    TruncationTooShort(String),
    #[error("degenerate fiber: {0}")]
    DegenerateFiber(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Curve(CurveError),
    #[error(transparent)]
    Algebra(AlgebraError),
}

impl From<AlgebraError> for AmplitudeError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::DegenerateFiber(s) => AmplitudeError::DegenerateFiber(s),
            AlgebraError::TruncationTooShort(s) => AmplitudeError::TruncationTooShort(s),
            e => AmplitudeError::Algebra(e),
        }
    }
}

impl From<CurveError> for AmplitudeError {
    fn from(e: CurveError) -> Self {
        match e {
            CurveError::Algebra(a) => a.into(),
            e => AmplitudeError::Curve(e),
        }
    }
}
