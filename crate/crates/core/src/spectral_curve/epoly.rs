use std::collections::BTreeMap;

use super::chain::f_polys;
use super::curve::CurveData;
use super::model::ChainModel;
use super::resolvent::{end_function, End};
use super::CurveError;
use crate::exact_algebra::linalg;
use crate::exact_algebra::{Coeff, MPoly, PLaurent, PointValue, Rat, TruncSeries};

/// `E(x_1..x_N) = (V_1'(x_1) - c x_2)(V_N'(x_N) - c x_{N-1}) - P(x_1..x_N)`.
///
/// Each coefficient of `P` carries its own h-precision: the higher its
/// monomial degree, the fewer orders the truncated curve can pin down.
#[derive(Clone, Debug, PartialEq)]
pub struct EPoly<C> {
    pub p: MPoly<TruncSeries<C>>,
    /// Per-variable degree bounds used for `P`.
    pub bounds: Vec<usize>,
    /// Number of free directions left by the truncated system.
    pub nullity: usize,
    /// `E(z(p))` is known to vanish below `h^valid_to`.
    pub valid_to: i32,
}

impl<C: Coeff> EPoly<C> {
    /// Evaluates in a ring `A` that the model couplings lift into.
    pub fn eval_with<A: Coeff>(
        &self,
        model: &ChainModel,
        xs: &[A],
        lift: &dyn Fn(&TruncSeries<C>) -> A,
    ) -> Result<A, CurveError> {
        let n = model.n_chain();
        let a = model
            .potential(0)
            .derivative_at(&xs[0])?
            .sub(&xs[1].scale(&model.c(0)));
        let b = model
            .potential(n - 1)
            .derivative_at(&xs[n - 1])?
            .sub(&xs[n - 2].scale(&model.c(n - 2)));
        let p = self.p.eval(xs, |c| lift(c))?;
        Ok(a.mul(&b).sub(&p))
    }

    /// `E(z_1(p), ..., z_N(p))` as a Laurent polynomial in `p`.
    pub fn on_curve(
        &self,
        model: &ChainModel,
        curve: &CurveData<C>,
    ) -> Result<PLaurent<C>, CurveError> {
        self.eval_with(model, &curve.z, &|s| PLaurent::constant(s.clone()))
    }
}

impl EPoly<Rat> {
    /// Evaluates at point values such as h-series or local expansions.
    pub fn eval<A: PointValue>(&self, model: &ChainModel, xs: &[A]) -> Result<A, CurveError> {
        self.eval_with(model, xs, &|s| A::from_h(s))
    }
}

/// Solves for `P` from `E(z(p)) = 0` in every `p^k h^e` with `e <= H`.
///
/// Needs a field-like domain: pivots of the system involve the cubic
/// couplings once the Gaussian layer is degenerate.
pub fn reconstruct_e<C: Coeff>(
    curve: &CurveData<C>,
    model: &ChainModel,
) -> Result<EPoly<C>, CurveError> {
    let n = model.n_chain();
    let h = curve.h_order as i32;
    let f = f_polys(model);
    let top_f = f.get(1, n);
    let bounds: Vec<usize> = (0..n)
        .map(|i| (top_f.degree_in(i).unwrap_or(0) - 1).max(0) as usize)
        .collect();
    let mut monos: Vec<Vec<i32>> = vec![vec![]];
    for b in &bounds {
        monos = monos
            .into_iter()
            .flat_map(|m| {
                (0..=*b as i32).map(move |e| {
                    let mut m2 = m.clone();
                    m2.push(e);
                    m2
                })
            })
            .collect();
    }
    let mvals: Vec<PLaurent<C>> = monos
        .iter()
        .map(|m| {
            let mut v = PLaurent::constant(TruncSeries::constant(C::one()));
            for (i, &e) in m.iter().enumerate() {
                v = v.mul(&curve.z[i].powi(e as u32));
            }
            v
        })
        .collect();
    let top = end_function(curve, model, End::First)?.mul(&end_function(curve, model, End::Last)?);
    let deg = |m: &Vec<i32>| m.iter().sum::<i32>();
    let unknowns: Vec<(usize, i32)> = monos
        .iter()
        .enumerate()
        .flat_map(|(mi, m)| (0..=h - deg(m)).map(move |o| (mi, o)))
        .collect();
    let mut ks: Vec<i32> = top.terms().keys().copied().collect();
    for v in &mvals {
        ks.extend(v.terms().keys().copied());
    }
    ks.sort_unstable();
    ks.dedup();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for &k in &ks {
        for e in 0..=h {
            let row: Vec<C> = unknowns
                .iter()
                .map(|&(mi, o)| mvals[mi].coeff_at(k, e - o).unwrap_or_else(C::zero))
                .collect();
            if row.iter().all(|c| c.is_zero()) {
                let t = top.coeff_at(k, e).unwrap_or_else(C::zero);
                if !t.is_zero() {
                    return Err(CurveError::InconsistentE(1));
                }
                continue;
            }
            rows.push(row);
            rhs.push(top.coeff_at(k, e).unwrap_or_else(C::zero));
        }
    }
    let sol = linalg::solve(&rows, &rhs)?;
    if !sol.is_consistent() {
        return Err(CurveError::InconsistentE(sol.inconsistent.len()));
    }
    let mut by_mono: BTreeMap<usize, Vec<(i32, Option<C>)>> = BTreeMap::new();
    for (&(mi, o), v) in unknowns.iter().zip(&sol.values) {
        by_mono.entry(mi).or_default().push((o, v.clone()));
    }
    let mut p = MPoly::zero(n);
    let mut valid_to = h + 1;
    for (mi, m) in monos.iter().enumerate() {
        let entries = by_mono.remove(&mi).unwrap_or_default();
        let prec = entries
            .iter()
            .find(|(_, v)| v.is_none())
            .map(|(o, _)| *o)
            .unwrap_or(h - deg(m) + 1);
        let terms: Vec<(i32, C)> = entries
            .into_iter()
            .filter(|(o, _)| *o < prec)
            .filter_map(|(o, v)| v.map(|c| (o, c)))
            .collect();
        valid_to = valid_to.min(prec + deg(m));
        p.add_term(m.clone(), TruncSeries::from_terms(&terms, prec));
    }
    // the top part already starts at h^2; nothing below it is informative
    if valid_to <= 2 {
        return Err(CurveError::UnderdeterminedE {
            nullity: sol.nullspace_dim(),
            valid_to,
        });
    }
    Ok(EPoly {
        p,
        bounds,
        nullity: sol.nullspace_dim(),
        valid_to,
    })
}
