//! Exact engine for mixed-boundary disk amplitudes of the open matrix chain.
//!
//! The pipeline solves the genus-0 spectral curve as a truncated series in
//! `h = T^{1/2}`, evaluates the residue recursion for the mixed amplitude,
//! extracts map-counting coefficients and checks them against a planar
//! Wick-contraction enumeration.

pub mod amplitudes;
pub mod cli_reports;
pub mod exact_algebra;
pub mod fibers;
pub mod planar_oracle;
pub mod spectral_curve;
