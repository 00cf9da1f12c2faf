//! Batch front door: configuration, pipeline runs, artifacts, comparison
//! with the published table and the verification suite.

pub mod artifacts;
pub mod config;
pub mod pipeline;
pub mod published;
pub mod verify;

use thiserror::Error;

use crate::amplitudes::AmplitudeError;
use crate::planar_oracle::OracleError;
use crate::spectral_curve::CurveError;

pub use artifacts::{
    curve_from_json, curve_to_json, read_csv, table_from_json, table_to_json, write_csv, CsvTable,
};
pub use config::{parse_couplings, ConfigFile, Overrides, RunConfig};
pub use pipeline::{run_moments, solve, SolveOutput};
pub use published::{
    anchor_statuses, audit_curve, compare_against_published, compare_tables, CellStatus,
    ComparisonReport,
};
pub use verify::{run_verify, CheckStatus, VerifyOptions, VerifyReport};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("malformed artifact: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Amplitude(#[from] AmplitudeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

impl ReportError {
    /// Process exit code: 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportError::Config(_) => 2,
            _ => 1,
        }
    }
}
