//! Exact arithmetic: rationals, coupling polynomials, truncated series in
//! `h`, Laurent data in the global coordinate `p`, root finding and residues.

pub mod algnum;
pub mod coeff;
pub mod interp;
pub mod laurent;
pub mod linalg;
pub mod mpoly;
pub mod poly;
pub mod puiseux;
pub mod rat;
pub mod ratfunc;
pub mod reversion;
pub mod series;
pub mod upoly;

use thiserror::Error;

pub use algnum::AlgNum;
pub use coeff::{Coeff, CoeffDomain};
pub use laurent::{
    residue_at, residue_local, LocalSeries, PLaurent, PRational, PointValue, ResiduePoint,
};
pub use mpoly::MPoly;
pub use poly::{CouplingPoly, Mono};
pub use puiseux::{newton_polygon_roots, PuiseuxRoot, PuiseuxSeries};
pub use rat::{parse_rat, rat, rat_int, render_rat, Rat};
pub use ratfunc::RatFunc;
pub use reversion::series_reversion;
pub use series::{TruncSeries, EXACT};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("cannot parse {input:?} at position {position}: {reason}")]
    Parse {
        input: String,
        position: usize,
        reason: String,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by a series that is identically zero")]
    DivisionByZeroSeries,
    #[error("leading coefficient {0} is not invertible in the active domain")]
    NonInvertibleLeading(String),
    #[error("truncation too short: {0}")]
    TruncationTooShort(String),
    #[error("inverse of an exact non-monomial series needs an explicit cap")]
    UnboundedTruncation,
    #[error("ramified branch: exponents with denominator {denominator}")]
    RamifiedBranch { denominator: u32 },
    #[error("degenerate fiber: {0}")]
    DegenerateFiber(String),
    #[error("coupling polynomial {0} used where a number is required")]
    NonConstant(String),
    #[error("linear system: {0}")]
    Linear(String),
    #[error("incompatible number fields")]
    FieldMismatch,
}
