//! Orchestration of the solve and moments commands.

use serde_json::{json, Value};

use crate::amplitudes::{
    calibrate_conventions, extract_moments, gaussian_cells, MomentTable, NodePlan, Pipeline,
};
use crate::exact_algebra::{CoeffDomain, CouplingPoly, Rat, RatFunc};
use crate::planar_oracle::oracle_table;
use crate::spectral_curve::solve_curve;

use super::artifacts::curve_to_json;
use super::config::RunConfig;
use super::ReportError;

pub struct SolveOutput {
    pub curve: Value,
    pub warnings: Vec<String>,
}

/// Truncation used by `solve` when none is configured.
pub const DEFAULT_SOLVE_ORDER: usize = 6;

pub fn solve(cfg: &RunConfig) -> Result<SolveOutput, ReportError> {
    let h = cfg.h_order.unwrap_or(DEFAULT_SOLVE_ORDER);
    let mut warnings = Vec::new();
    if h == 0 {
        warnings.push("h_order 0: every z_i vanishes identically".to_string());
    }
    let model = cfg.effective_model();
    let meta = json!({ "config": cfg.echo() });
    let curve = match cfg.mode {
        CoeffDomain::Poly => curve_to_json(&solve_curve::<CouplingPoly>(&model, h)?, meta),
        CoeffDomain::Frac => curve_to_json(&solve_curve::<RatFunc>(&model, h)?, meta),
        CoeffDomain::Num => curve_to_json(&solve_curve::<Rat>(&model, h)?, meta),
    };
    Ok(SolveOutput { curve, warnings })
}

/// Sampling plan wide enough for every cell up to `vmax`.
pub fn plan_for(vmax: usize) -> NodePlan {
    NodePlan::standard(2 * vmax + 2)
}

/// Moment table from either pipeline; the recursion table carries its
/// calibration record.
pub fn run_moments(cfg: &RunConfig, pipeline: Pipeline) -> Result<MomentTable, ReportError> {
    let model = cfg.effective_model();
    match pipeline {
        Pipeline::Oracle => Ok(oracle_table(&model, cfg.nmax, cfg.vmax, cfg.budget)?),
        Pipeline::Recursion => {
            let h = cfg.h_order_for(cfg.vmax);
            let plan = plan_for(cfg.vmax.max(3));
            let cal = calibrate_conventions(&model, h.max(10), &gaussian_cells(&model)?, &plan)?;
            Ok(extract_moments(&model, h, cfg.nmax, cfg.vmax, &cal, &plan)?)
        }
    }
}

/// `amplitude.json` body for a computed table.
pub fn amplitude_json(cfg: &RunConfig, t: &MomentTable) -> Value {
    super::artifacts::table_to_json(t, json!({ "config": cfg.echo() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli_reports::config::{ConfigFile, Overrides};

    fn cfg(ov: Overrides) -> RunConfig {
        RunConfig::from_file(&ConfigFile::cubic_default(), &ov).unwrap()
    }

    #[test]
    fn trivial_truncation_warns() {
        let out = solve(&cfg(Overrides {
            h_order: Some(0),
            ..Default::default()
        }))
        .unwrap();
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn vmax_zero_gives_only_normalization() {
        let c = cfg(Overrides {
            vmax: Some(0),
            ..Default::default()
        });
        let t = run_moments(&c, Pipeline::Oracle).unwrap();
        assert_eq!(t.cells.len(), 1);
        assert_eq!(t.value(&[0, 0, 0], 1), CouplingPoly::one());
    }

    #[test]
    fn recursion_and_oracle_agree_at_small_scale() {
        let c = cfg(Overrides {
            nmax: Some(3),
            vmax: Some(2),
            ..Default::default()
        });
        let r = run_moments(&c, Pipeline::Recursion).unwrap();
        let o = run_moments(&c, Pipeline::Oracle).unwrap();
        assert_eq!(r.cells, o.cells);
        assert!(r.calibration.is_some());
    }
}
