use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::exact_algebra::interp::{interpolate, simplex_lattice};
use crate::exact_algebra::{rat, rat_int, Coeff, CouplingPoly, Mono, Rat, TruncSeries};
use crate::planar_oracle::{oracle_table, DEFAULT_BUDGET};
use crate::spectral_curve::ChainModel;

use super::base::{ChainContext, CurvePoint};
use super::recursion::{lagrange_step, MidFiber};
use super::table::{CalibrationRecord, MomentTable, Pipeline};
use super::AmplitudeError;

/// Boundary values at which the amplitude is sampled. Inverse values are
/// the interpolation nodes; they are spread so that no two curve
/// functions collide at leading order.
#[derive(Clone, Debug, PartialEq)]
pub struct NodePlan {
    pub first: Vec<Rat>,
    pub last: Vec<Rat>,
    /// Leading `p h` of one plus point for each intermediate color.
    pub zeta: Vec<Rat>,
    /// Coupling nodes for the free couplings.
    pub couplings: Vec<Rat>,
}

impl NodePlan {
    pub fn standard(degree: usize) -> Self {
        let k = degree + 1;
        NodePlan {
            first: (0..k).map(|i| rat_int(2 + i as i64)).collect(),
            last: (0..k).map(|i| rat(61 + 2 * i as i64, 2)).collect(),
            zeta: (0..k).map(|i| rat(-1, 2 + i as i64)).collect(),
            couplings: (0..k.max(8)).map(|i| rat_int(1 + i as i64)).collect(),
        }
    }
}

/// `W * prod x_i` at one coupling point as a polynomial in `u_i = 1/x_i`,
/// coefficients in h.
#[derive(Clone, Debug, PartialEq)]
pub struct PointMoments {
    pub coeffs: BTreeMap<Vec<usize>, TruncSeries<Rat>>,
    /// Smallest h-precision among the samples.
    pub prec: i32,
}

impl PointMoments {
    /// Coefficient of `h^(2w)` for exponents `n`.
    pub fn get(&self, n: &[usize], w: usize) -> Result<Rat, AmplitudeError> {
        let e = 2 * w as i32;
        if e >= self.prec {
            return Err(AmplitudeError::TruncationTooShort(format!(
                "need h^{e}, samples are known below h^{}",
                self.prec
            )));
        }
        Ok(self
            .coeffs
            .get(n)
            .and_then(|s| s.coeff(e))
            .unwrap_or_else(<Rat as Coeff>::zero))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum PKey {
    First(usize),
    Plus {
        color: usize,
        node: usize,
        idx: usize,
    },
}

struct Sampler<'a> {
    ctx: &'a ChainContext,
    firsts: Vec<CurvePoint>,
    lasts: Vec<CurvePoint>,
    /// `mids[c][node]` for the intermediate colors in chain order.
    mids: Vec<Vec<MidFiber>>,
    memo: HashMap<(PKey, Vec<usize>, usize), TruncSeries<Rat>>,
}

impl Sampler<'_> {
    fn point(&self, k: PKey) -> &CurvePoint {
        match k {
            PKey::First(i) => &self.firsts[i],
            PKey::Plus { color, node, idx } => &self.mids[color][node].plus[idx],
        }
    }

    /// `W_{1, colors of mid_idx.., N}(a, ..., last[b])`.
    fn w(
        &mut self,
        a: PKey,
        mid_idx: &[usize],
        b: usize,
    ) -> Result<TruncSeries<Rat>, AmplitudeError> {
        let key = (a, mid_idx.to_vec(), b);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let n_mid = self.mids.len();
        let v = match mid_idx.split_first() {
            None => super::base::base_amplitude(self.ctx, self.point(a), &self.lasts[b])?,
            Some((&node, rest)) => {
                let color = n_mid - mid_idx.len();
                let w_a = self.w(a, rest, b)?;
                let count = self.mids[color][node].plus.len();
                let mut w_q = Vec::with_capacity(count);
                for idx in 0..count {
                    w_q.push(self.w(PKey::Plus { color, node, idx }, rest, b)?);
                }
                lagrange_step(self.point(a), &self.mids[color][node], &w_a, &w_q)?
            }
        };
        self.memo.insert(key, v.clone());
        Ok(v)
    }
}

/// Samples `W_{1,2,...,N}` on a simplex lattice of boundary values and
/// interpolates in the inverse values up to total degree `degree`.
pub fn extract_at_point(
    ctx: &ChainContext,
    degree: usize,
    plan: &NodePlan,
) -> Result<PointMoments, AmplitudeError> {
    let n = ctx.n_chain();
    let k = degree + 1;
    if plan.first.len() < k || plan.last.len() < k || plan.zeta.len() < k {
        return Err(AmplitudeError::Unsupported(format!(
            "node plan too small for degree {degree}"
        )));
    }
    let firsts = plan.first[..k]
        .iter()
        .map(|x| ctx.first_point(x))
        .collect::<Result<Vec<_>, _>>()?;
    let lasts = plan.last[..k]
        .iter()
        .map(|x| ctx.last_point(x))
        .collect::<Result<Vec<_>, _>>()?;
    let mids = (1..n - 1)
        .map(|j| {
            plan.zeta[..k]
                .iter()
                .map(|z| MidFiber::rational(ctx, j, z))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut nodes: Vec<Vec<Rat>> = Vec::with_capacity(n);
    let inv = |x: &Rat| <Rat as Coeff>::one() / x;
    nodes.push(plan.first[..k].iter().map(inv).collect());
    for m in &mids {
        nodes.push(m.iter().map(|f| inv(&f.x)).collect());
    }
    nodes.push(plan.last[..k].iter().map(inv).collect());
    for (d, col) in nodes.iter().enumerate() {
        for i in 0..col.len() {
            if col[i + 1..].contains(&col[i]) {
                return Err(AmplitudeError::DegenerateFiber(format!(
                    "repeated boundary value for color {}",
                    d + 1
                )));
            }
        }
    }
    let mut s = Sampler {
        ctx,
        firsts,
        lasts,
        mids,
        memo: HashMap::new(),
    };
    let lattice = simplex_lattice(n, degree);
    let mut values = HashMap::with_capacity(lattice.len());
    let mut prec = i32::MAX;
    for alpha in &lattice {
        let w = s.w(PKey::First(alpha[0]), &alpha[1..n - 1], alpha[n - 1])?;
        let scale = (0..n).fold(<Rat as Coeff>::one(), |acc, d| acc / &nodes[d][alpha[d]]);
        let v = w.scale(&scale);
        prec = prec.min(v.prec());
        values.insert(alpha.clone(), v);
    }
    let coeffs = interpolate(&nodes, &lattice, &values)
        .into_iter()
        .map(|(e, c)| {
            (
                e.into_iter().map(|x| x as usize).collect(),
                c.truncate(prec),
            )
        })
        .collect();
    Ok(PointMoments { coeffs, prec })
}

/// Cells of a table: `sum n <= nmax`, `1 <= v <= vmax`, with the empty
/// word only at `v = 1` and nothing below the grading.
fn table_cells(n_chain: usize, nmax: usize, vmax: usize) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    for n in MomentTable::exponent_vectors(n_chain, nmax) {
        let l: usize = n.iter().sum();
        for v in 1..=vmax.max(1) {
            if (l == 0 && v != 1) || 2 * v < 2 + l || (vmax == 0 && l > 0) {
                continue;
            }
            out.push((n.clone(), v));
        }
    }
    out
}

/// Free couplings: every symbol must enter linearly and homogeneously, as
/// a cubic vertex weight does, so cells are homogeneous in the symbols.
fn coupling_shape(model: &ChainModel) -> Result<usize, AmplitudeError> {
    let nv = model.nvars();
    for p in model.potentials() {
        for (i, c) in p.coeffs().iter().enumerate() {
            if c.as_constant().is_some() {
                continue;
            }
            if i != 1 || !c.is_homogeneous() || c.total_degree() != Some(1) {
                return Err(AmplitudeError::Unsupported(format!(
                    "symbolic coupling {} must be a linear cubic weight",
                    c.render()
                )));
            }
        }
    }
    Ok(nv)
}

fn table_at(
    model: &ChainModel,
    h_order: usize,
    nmax: usize,
    vmax: usize,
    cal: &CalibrationRecord,
    plan: &NodePlan,
) -> Result<BTreeMap<(Vec<usize>, usize), CouplingPoly>, AmplitudeError> {
    let n = model.n_chain();
    let signed = model.with_coupling_sign(cal.coupling_sign);
    let shift = cal.t_offset;
    let wmax = vmax as i32 + shift;
    let degree = (2 * wmax - 2).max(0) as usize;
    let cells = table_cells(n, nmax, vmax);
    let nv = coupling_shape(model)?;
    let read = |pm: &PointMoments, cell: &(Vec<usize>, usize)| -> Result<Rat, AmplitudeError> {
        let w = cell.1 as i32 + shift;
        if w < 0 {
            return Ok(<Rat as Coeff>::zero());
        }
        pm.get(&cell.0, w as usize)
    };
    let mut out = BTreeMap::new();
    if nv == 0 {
        let ctx = ChainContext::new(&signed, h_order)?;
        let pm = extract_at_point(&ctx, degree, plan)?;
        for cell in cells {
            let v = read(&pm, &cell)?;
            out.insert(cell, CouplingPoly::constant(v));
        }
        return Ok(out);
    }
    // homogeneous in the symbols: fix the last one to 1
    let free = nv - 1;
    let gdeg = (2 * vmax as i32 - 3).max(0) as usize;
    let glattice = simplex_lattice(free, gdeg);
    if plan.couplings.len() <= gdeg {
        return Err(AmplitudeError::Unsupported("too few coupling nodes".into()));
    }
    let gnodes: Vec<Vec<Rat>> = (0..free)
        .map(|_| plan.couplings[..=gdeg].to_vec())
        .collect();
    let samples: Vec<Result<Vec<Rat>, AmplitudeError>> = glattice
        .par_iter()
        .map(|beta| {
            let mut vals: Vec<Rat> = beta
                .iter()
                .enumerate()
                .map(|(d, &i)| gnodes[d][i].clone())
                .collect();
            vals.push(<Rat as Coeff>::one());
            let ctx = ChainContext::new(&signed.instantiate(&vals), h_order)?;
            let pm = extract_at_point(&ctx, degree, plan)?;
            cells.iter().map(|c| read(&pm, c)).collect()
        })
        .collect();
    let samples = samples.into_iter().collect::<Result<Vec<_>, _>>()?;
    for (ci, cell) in cells.into_iter().enumerate() {
        let l: usize = cell.0.iter().sum();
        let k = (2 * cell.1).saturating_sub(2 + l) as u32;
        let values: HashMap<Vec<usize>, Rat> = glattice
            .iter()
            .zip(&samples)
            .map(|(b, s)| (b.clone(), s[ci].clone()))
            .collect();
        let mono = interpolate(&gnodes, &glattice, &values);
        let mut terms = Vec::new();
        for (e, c) in mono {
            if c.is_zero() {
                continue;
            }
            let used: u32 = e.iter().sum();
            if used > k {
                return Err(AmplitudeError::CalibrationFailed(format!(
                    "cell {:?} v={} is not homogeneous of degree {k} in the couplings",
                    cell.0, cell.1
                )));
            }
            let mut exps = e.clone();
            exps.push(k - used);
            terms.push((Mono::new(exps), c));
        }
        out.insert(cell, CouplingPoly::from_terms(terms));
    }
    Ok(out)
}

/// Recursion-pipeline moment table. Cells are computed at `h_order` and
/// again at `h_order + 2`; any change aborts with `UnstableCoefficient`.
pub fn extract_moments(
    model: &ChainModel,
    h_order: usize,
    nmax: usize,
    vmax: usize,
    cal: &CalibrationRecord,
    plan: &NodePlan,
) -> Result<MomentTable, AmplitudeError> {
    let lo = table_at(model, h_order, nmax, vmax, cal, plan)?;
    let hi = table_at(model, h_order + 2, nmax, vmax, cal, plan)?;
    let mut t = MomentTable::new(model.n_chain(), Pipeline::Recursion, nmax, vmax);
    t.h_order = Some(h_order);
    t.calibration = Some(cal.clone());
    for (cell, c) in lo {
        let c2 = &hi[&cell];
        if &c != c2 {
            return Err(AmplitudeError::UnstableCoefficient {
                cell: format!("{:?} v={}", cell.0, cell.1),
                before: c.render(),
                after: c2.render(),
            });
        }
        t.insert(cell.0, cell.1, c);
    }
    Ok(t)
}

/// Gaussian oracle cells used for calibration: `sum n <= 4`, `v <= 3`.
pub fn gaussian_cells(model: &ChainModel) -> Result<MomentTable, AmplitudeError> {
    oracle_table(&model.gaussian(), 4, 3, DEFAULT_BUDGET)
        .map_err(|e| AmplitudeError::CalibrationFailed(e.to_string()))
}

/// Finds the coupling sign and the offset of the h-grading by exact
/// matching of Gaussian moments against the oracle.
pub fn calibrate_conventions(
    model: &ChainModel,
    h_order: usize,
    oracle: &MomentTable,
    plan: &NodePlan,
) -> Result<CalibrationRecord, AmplitudeError> {
    let g = model.gaussian();
    let n = model.n_chain();
    let cells: Vec<(Vec<usize>, usize)> = oracle
        .cells
        .keys()
        .filter(|(k, _)| k.iter().sum::<usize>() <= 4)
        .cloned()
        .collect();
    let vtop = cells.iter().map(|c| c.1).max().unwrap_or(1);
    let degree = 2 * (vtop + 1) - 2;
    let mut found = Vec::new();
    let mut notes = Vec::new();
    for sign in [1, -1] {
        let pm = match ChainContext::new(&g.with_coupling_sign(sign), h_order)
            .and_then(|ctx| extract_at_point(&ctx, degree, plan))
        {
            Ok(pm) => pm,
            Err(e) => {
                notes.push(format!("sign {sign}: {e}"));
                continue;
            }
        };
        for shift in [-1i32, 0, 1] {
            let ok = cells.iter().all(|(k, v)| {
                let w = *v as i32 + shift;
                let got = if w < 0 {
                    Ok(<Rat as Coeff>::zero())
                } else {
                    pm.get(k, w as usize)
                };
                match (got, oracle.value(k, *v).as_constant()) {
                    (Ok(a), Some(b)) => a == b,
                    _ => false,
                }
            });
            if ok {
                found.push((sign, shift));
            }
        }
    }
    match found.as_slice() {
        [(sign, shift)] => Ok(CalibrationRecord {
            coupling_sign: *sign,
            t_offset: *shift,
            local_degree: vec![1; n],
            matched_cells: cells.len(),
        }),
        [] => Err(AmplitudeError::CalibrationFailed(format!(
            "no convention reproduces the Gaussian moments ({})",
            notes.join("; ")
        ))),
        many => Err(AmplitudeError::CalibrationFailed(format!(
            "{} conventions match",
            many.len()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calibration_picks_positive_chain_coupling() {
        let m = ChainModel::cubic_chain();
        let oracle = gaussian_cells(&m).unwrap();
        let cal = calibrate_conventions(&m, 10, &oracle, &NodePlan::standard(6)).unwrap();
        assert_eq!(cal.coupling_sign, 1);
        assert_eq!(cal.t_offset, 0);
        assert!(cal.matched_cells > 20);
    }

    #[test]
    fn numeric_point_reproduces_gaussian_cells() {
        let m = ChainModel::two_matrix_cubic().gaussian();
        let ctx = ChainContext::new(&m, 8).unwrap();
        let pm = extract_at_point(&ctx, 4, &NodePlan::standard(4)).unwrap();
        assert_eq!(pm.get(&[0, 0], 1).unwrap(), rat_int(1));
        assert_eq!(pm.get(&[2, 0], 2).unwrap(), rat_int(2));
        assert_eq!(pm.get(&[1, 1], 2).unwrap(), rat_int(1));
        assert_eq!(pm.get(&[1, 0], 2).unwrap(), rat_int(0));
    }

    #[test]
    fn symbolic_table_second_order() {
        let m = ChainModel::cubic_chain();
        let cal = CalibrationRecord {
            coupling_sign: 1,
            t_offset: 0,
            local_degree: vec![1; 3],
            matched_cells: 0,
        };
        let t = extract_moments(&m, 10, 3, 2, &cal, &NodePlan::standard(6)).unwrap();
        assert_eq!(
            t.value(&[1, 0, 0], 2),
            CouplingPoly::parse("-4*g1 - g2 - 2*g3").unwrap()
        );
        assert_eq!(t.value(&[2, 0, 0], 2), CouplingPoly::constant(rat_int(2)));
        assert_eq!(t.value(&[1, 1, 0], 2), CouplingPoly::constant(rat_int(1)));
    }
}
