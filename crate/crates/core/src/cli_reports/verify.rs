//! The invariant suite behind `verify`.

use std::fmt;

use serde_json::{json, Value};

use crate::amplitudes::{
    full_amplitude, master_equation, regularity, residue_sum_zero, two_path_agreement,
    verify_loop_equation, AmplitudeError, ChainContext, CheckReport, MidFiber, MomentTable,
    Pipeline,
};
use crate::exact_algebra::{rat, rat_int, CouplingPoly, PLaurent, Rat, TruncSeries};
use crate::fibers::{fiber_points, verify_injectivity, FiberBase};
use crate::planar_oracle::planar_moment;
use crate::spectral_curve::{ChainModel, CurveData};

use super::artifacts::curve_from_json;
use super::config::RunConfig;
use super::pipeline::run_moments;
use super::ReportError;

/// Truncation of the numeric checks when the config sets none.
pub const CHECK_ORDER: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl CheckStatus {
    pub fn tag(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        }
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn status(&self, name: &str) -> Option<CheckStatus> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.status)
    }

    fn push(&mut self, name: &str, status: CheckStatus, detail: impl Into<String>) {
        self.checks.push(CheckOutcome {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    fn record(&mut self, name: &str, r: Result<CheckReport, AmplitudeError>) {
        match r {
            Ok(rep) => {
                let st = if rep.pass {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                };
                self.push(name, st, rep.detail);
            }
            Err(AmplitudeError::Unsupported(m)) => self.push(name, CheckStatus::Skipped, m),
            Err(e) => self.push(name, CheckStatus::Fail, e.to_string()),
        }
    }

    fn skip_na(&mut self, name: &str, why: &str) {
        self.push(name, CheckStatus::Skipped, format!("n/a: {why}"));
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "status": c.status.tag(), "detail": c.detail }))
            .collect();
        json!({ "pass": self.passed(), "checks": checks })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("{:<8} {}: {}\n", c.status.tag(), c.name, c.detail));
        }
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Curve to check instead of the freshly solved one.
    pub curve: Option<Value>,
    /// Skips the pipeline comparison, which dominates the runtime.
    pub skip_tables: bool,
}

/// Reads a curve file in any domain and moves it to the numeric check point.
pub fn numeric_curve(cfg: &RunConfig, v: &Value) -> Result<CurveData<Rat>, ReportError> {
    match v["domain"].as_str() {
        Some("num") => curve_from_json::<Rat>(v),
        Some("poly") => {
            let vals = cfg.numeric_point();
            Ok(curve_from_json::<CouplingPoly>(v)?.map(&|c: &CouplingPoly| c.eval(&vals)))
        }
        other => Err(ReportError::Format(format!(
            "cannot check a curve in domain {other:?}"
        ))),
    }
}

fn middle_fibers(ctx: &ChainContext) -> Result<Vec<MidFiber>, AmplitudeError> {
    (1..ctx.n_chain() - 1)
        .map(|j| MidFiber::rational(ctx, j, &rat(-1, j as i64 + 1)))
        .collect()
}

fn interior_identity(
    model: &ChainModel,
    curve: &CurveData<Rat>,
) -> Result<(bool, String), AmplitudeError> {
    let n = curve.n_chain();
    for k in 1..n - 1 {
        let r = model
            .potential(k)
            .derivative_at(&curve.z[k])?
            .sub(&curve.z[k - 1].mul_coeff(&model.c(k - 1)))
            .sub(&curve.z[k + 1].mul_coeff(&model.c(k)));
        if !r.is_zero_known() {
            return Ok((
                false,
                format!(
                    "V{}'(z{}) - z{} - z{} = {}",
                    k + 1,
                    k + 1,
                    k,
                    k + 2,
                    r.render()
                ),
            ));
        }
    }
    Ok((
        true,
        format!("{} interior identities vanish identically", n - 2),
    ))
}

fn e_vanishing(
    ctx: &ChainContext,
    curve: &CurveData<Rat>,
) -> Result<(bool, String), AmplitudeError> {
    let e = ctx.e.on_curve(&ctx.model, curve)?;
    // E is only fit through valid_to, but a true relation keeps vanishing
    // up to the precision of the curve itself.
    let upto = (curve.h_order as i32).min(e.prec());
    let r = e.truncate(upto);
    if r.is_zero_known() {
        Ok((upto >= 4, format!("E(z(p)) vanishes below h^{upto}")))
    } else {
        Ok((false, format!("E(z(p)) = {}", r.render())))
    }
}

fn fiber_completeness(curve: &CurveData<Rat>) -> Result<(bool, String), AmplitudeError> {
    let mut seen = Vec::new();
    for j in 0..curve.n_chain() {
        let x = TruncSeries::constant(rat(7 + j as i64, 3));
        let set = fiber_points(curve, j, &FiberBase::Value(x))?;
        let (p, m) = (set.plus_count(), set.minus_count());
        if p != curve.s[j] || m != curve.r[j] {
            return Ok((
                false,
                format!(
                    "z{}: {} plus, {} minus; expected {}, {}",
                    j + 1,
                    p,
                    m,
                    curve.s[j],
                    curve.r[j]
                ),
            ));
        }
        seen.push(format!("z{}: {}+{}", j + 1, p, m));
    }
    Ok((true, seen.join(", ")))
}

fn injectivity(curve: &CurveData<Rat>) -> (bool, String) {
    let samples: Vec<Rat> = (0..10).map(|i| rat(3 + 2 * i, 5)).collect();
    let mut notes = Vec::new();
    for k in 1..curve.n_chain() {
        let rep = verify_injectivity(curve, k, &samples);
        if !rep.pass() {
            return (false, format!("z{}: {}", k + 1, rep.witnesses.join("; ")));
        }
        notes.push(format!("z{}: {} checked", k + 1, rep.checked));
    }
    (true, notes.join(", "))
}

fn catalan(k: u64) -> u64 {
    (0..k).fold(1, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

/// `<Tr M_i^{2k}>` of the Gaussian chain is `Cat(k) G_ii^k`.
pub fn catalan_check(model: &ChainModel, budget: u128) -> Result<(bool, String), ReportError> {
    let g = model.gaussian();
    let prop = g.propagator()?;
    let n = g.n_chain();
    for i in 0..n {
        for k in 1..=4usize {
            let mut word = vec![0; n];
            word[i] = 2 * k;
            let got = planar_moment(&g, &word, 0, budget)?
                .get(&(k + 1))
                .cloned()
                .unwrap_or_else(CouplingPoly::zero);
            let mut want = rat_int(catalan(k as u64) as i64);
            for _ in 0..k {
                want *= prop[i][i].clone();
            }
            if got != CouplingPoly::constant(want.clone()) {
                return Ok((
                    false,
                    format!("Tr M{}^{}: oracle {} vs {}", i + 1, 2 * k, got, want),
                ));
            }
        }
    }
    Ok((true, format!("{n} colors, k <= 4")))
}

fn from_pair(rep: &mut VerifyReport, name: &str, r: Result<(bool, String), AmplitudeError>) {
    match r {
        Ok((true, d)) => rep.push(name, CheckStatus::Pass, d),
        Ok((false, d)) => rep.push(name, CheckStatus::Fail, d),
        Err(e) => rep.push(name, CheckStatus::Fail, e.to_string()),
    }
}

fn amplitude_checks(
    rep: &mut VerifyReport,
    ctx: &ChainContext,
    check: &ChainContext,
) -> Result<(), AmplitudeError> {
    let b = ctx.last_point(&rat_int(7))?;
    let mids = middle_fibers(ctx)?;
    let w = full_amplitude(ctx)?;
    let samples: Vec<(Rat, TruncSeries<Rat>)> = (0..4)
        .map(|i| {
            let x = rat_int(5 + i);
            let a = ctx.first_point(&x)?;
            Ok((x, w.eval(&a, &mids, &b)?))
        })
        .collect::<Result<_, AmplitudeError>>()?;
    rep.record(
        "loop equation",
        verify_loop_equation(check, &samples, &mids, &b),
    );
    rep.record("regularity", regularity(ctx, &mids, &b));
    let a = ctx.first_point(&rat_int(5))?;
    rep.record("two paths", two_path_agreement(&w, &a, &mids, &b));
    Ok(())
}

fn residue_check(model: &ChainModel) -> Result<CheckReport, AmplitudeError> {
    let ctx = ChainContext::new(&model.gaussian(), 8)?;
    let a = ctx.first_point(&rat_int(5))?;
    let b = ctx.last_point(&rat_int(7))?;
    let mids = middle_fibers(&ctx)?;
    residue_sum_zero(&ctx, &a, &mids, &b)
}

fn compare_pipelines(rep: &mut VerifyReport, cfg: &RunConfig, name: &str) {
    let rec = run_moments(cfg, Pipeline::Recursion);
    let ora = run_moments(cfg, Pipeline::Oracle);
    match &rec {
        Ok(t) => {
            let cal = t
                .calibration
                .as_ref()
                .map(|c| c.canonical())
                .unwrap_or_default();
            rep.push("calibration", CheckStatus::Pass, cal);
            rep.push(
                "truncation stability",
                CheckStatus::Pass,
                format!("{} cells equal at H and H+2", t.cells.len()),
            );
        }
        Err(ReportError::Amplitude(AmplitudeError::UnstableCoefficient {
            cell,
            before,
            after,
        })) => {
            rep.push(
                "calibration",
                CheckStatus::Skipped,
                "recursion table not built",
            );
            rep.push(
                "truncation stability",
                CheckStatus::Fail,
                format!("{cell}: {before} -> {after}"),
            );
        }
        Err(e) => {
            rep.push("calibration", CheckStatus::Fail, e.to_string());
            rep.push(
                "truncation stability",
                CheckStatus::Skipped,
                "recursion table not built",
            );
        }
    }
    match (rec, ora) {
        (Ok(r), Ok(o)) => {
            let (st, d) = table_agreement(&r, &o);
            rep.push(name, st, d);
        }
        (Err(e), _) | (_, Err(e)) => rep.push(name, CheckStatus::Fail, e.to_string()),
    }
}

fn table_agreement(r: &MomentTable, o: &MomentTable) -> (CheckStatus, String) {
    let bad: Vec<String> = o
        .cells
        .iter()
        .filter(|(k, v)| r.cells.get(*k) != Some(*v))
        .map(|((n, v), _)| format!("{n:?} v={v}"))
        .collect();
    if bad.is_empty() && r.cells.len() == o.cells.len() {
        (
            CheckStatus::Pass,
            format!("{} cells, nmax {} vmax {}", o.cells.len(), o.nmax, o.vmax),
        )
    } else {
        (
            CheckStatus::Fail,
            format!("differing cells: {}", bad.join(", ")),
        )
    }
}

/// Runs every check that applies to the configured model.
pub fn run_verify(cfg: &RunConfig, opts: &VerifyOptions) -> Result<VerifyReport, ReportError> {
    let model = cfg.numeric_model();
    let n = model.n_chain();
    let h = cfg.h_order.unwrap_or(CHECK_ORDER);
    let ctx = ChainContext::new(&model, h)?;
    let curve = match &opts.curve {
        Some(v) => numeric_curve(cfg, v)?,
        None => ctx.curve.clone(),
    };
    let check = ChainContext::from_parts(model.clone(), curve.clone(), ctx.e.clone());
    let mut rep = VerifyReport::default();

    if n >= 3 {
        from_pair(
            &mut rep,
            "interior identity",
            interior_identity(&model, &curve),
        );
    } else {
        rep.skip_na("interior identity", "no interior matrix");
    }
    from_pair(&mut rep, "E vanishing", e_vanishing(&ctx, &curve));
    from_pair(&mut rep, "fiber completeness", fiber_completeness(&curve));
    let (ok, d) = injectivity(&curve);
    rep.push(
        "injectivity",
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        d,
    );
    rep.record("master equation", master_equation(&check, &rat_int(5)));

    if n >= 3 {
        if let Err(e) = amplitude_checks(&mut rep, &ctx, &check) {
            rep.push("loop equation", CheckStatus::Fail, e.to_string());
        }
        rep.record("residue sum", residue_check(&model));
    } else {
        for name in ["loop equation", "regularity", "two paths", "residue sum"] {
            rep.skip_na(name, "the recursion needs a middle matrix");
        }
    }

    match catalan_check(&cfg.model, cfg.budget) {
        Ok((ok, d)) => rep.push(
            "gaussian catalan",
            if ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            d,
        ),
        Err(e) => rep.push("gaussian catalan", CheckStatus::Fail, e.to_string()),
    }
    let name = if n >= 3 {
        "oracle equivalence"
    } else {
        "base case vs oracle"
    };
    if opts.skip_tables {
        rep.push("calibration", CheckStatus::Skipped, "tables skipped");
        rep.push(
            "truncation stability",
            CheckStatus::Skipped,
            "tables skipped",
        );
        rep.push(name, CheckStatus::Skipped, "tables skipped");
    } else {
        compare_pipelines(&mut rep, cfg, name);
    }
    Ok(rep)
}

/// `curve` with `bump * h^order p^power` added to `z_i`; for negative controls.
pub fn perturb_curve(
    curve: &CurveData<Rat>,
    i: usize,
    order: i32,
    power: i32,
    bump: Rat,
) -> CurveData<Rat> {
    let mut c = curve.clone();
    let term = PLaurent::monomial(TruncSeries::monomial(bump, order), power);
    c.z[i] = c.z[i].add(&term);
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli_reports::artifacts::curve_to_json;
    use crate::cli_reports::config::{ConfigFile, Overrides};

    fn cfg(text: Option<&str>, ov: Overrides) -> RunConfig {
        let f = text
            .map(|t| ConfigFile::parse(t).unwrap())
            .unwrap_or_else(ConfigFile::cubic_default);
        RunConfig::from_file(&f, &ov).unwrap()
    }

    #[test]
    fn catalan_numbers() {
        let c: Vec<u64> = (0..6).map(catalan).collect();
        assert_eq!(c, vec![1, 1, 2, 5, 14, 42]);
    }

    #[test]
    fn cubic_chain_passes_curve_and_amplitude_checks() {
        let c = cfg(None, Overrides::default());
        let rep = run_verify(
            &c,
            &VerifyOptions {
                curve: None,
                skip_tables: true,
            },
        )
        .unwrap();
        assert!(rep.passed(), "{}", rep.render());
        assert_eq!(rep.status("loop equation"), Some(CheckStatus::Pass));
        assert_eq!(rep.status("residue sum"), Some(CheckStatus::Pass));
    }

    #[test]
    fn corrupted_curve_fails_loop_equation() {
        let c = cfg(None, Overrides::default());
        let ctx = ChainContext::new(&c.numeric_model(), CHECK_ORDER).unwrap();
        let bad = perturb_curve(&ctx.curve, 0, 3, -1, rat(1, 11));
        let opts = VerifyOptions {
            curve: Some(curve_to_json(&bad, Value::Null)),
            skip_tables: true,
        };
        let rep = run_verify(&c, &opts).unwrap();
        assert_eq!(
            rep.status("loop equation"),
            Some(CheckStatus::Fail),
            "{}",
            rep.render()
        );
        assert!(!rep.passed());
    }

    #[test]
    fn two_matrix_chain_skips_recursion_checks() {
        let text = r#"{"model": {"potentials": [["1", "g1"], ["2", "g2"]], "c": ["1"]},
                       "truncation": {"nmax": 4, "vmax": 2}}"#;
        let c = cfg(Some(text), Overrides::default());
        let rep = run_verify(&c, &VerifyOptions::default()).unwrap();
        assert!(rep.passed(), "{}", rep.render());
        assert_eq!(rep.status("loop equation"), Some(CheckStatus::Skipped));
        assert_eq!(rep.status("base case vs oracle"), Some(CheckStatus::Pass));
    }
}
