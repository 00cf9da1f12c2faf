//! Genus-0 spectral curve of the matrix chain, solved order by order in `h`.
//!
//! The curve is carried as Laurent polynomials `z_i(p)` whose coefficients
//! are truncated series in `h = sqrt(T)`.

mod chain;
mod curve;
mod epoly;
mod model;
mod resolvent;

use thiserror::Error;

use crate::exact_algebra::AlgebraError;

pub use chain::{f_polys, hat_x_chain, pol_extract, pol_via_residue, FPolys};
pub use curve::{solve_curve, CurveData};
pub use epoly::{reconstruct_e, EPoly};
pub use model::{ChainModel, PotentialSpec};
pub use resolvent::{end_function, resolvent, End};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("no branch with vanishing gamma: {0}")]
    BranchNotFound(String),
    #[error("gauge not fixed, {nullity} residual directions")]
    GaugeAmbiguity { nullity: usize },
    #[error("E is underdetermined: nullspace dimension {nullity}, valid only to h^{valid_to}")]
    UnderdeterminedE { nullity: usize, valid_to: i32 },
    #[error("E system is inconsistent at {0} equations")]
    InconsistentE(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
