use std::collections::BTreeMap;

use super::model::ChainModel;
use super::CurveError;
use crate::exact_algebra::linalg;
use crate::exact_algebra::rat::rat_sqrt;
use crate::exact_algebra::{Coeff, PLaurent, Rat, TruncSeries};

/// Rational parametrization `z_i(p)` of the curve, valid to `h^h_order`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveData<C> {
    pub z: Vec<PLaurent<C>>,
    pub gamma: TruncSeries<C>,
    pub h_order: usize,
    /// Pole order bounds `s_k` at `p = infinity` and `r_k` at `p = 0`.
    pub s: Vec<usize>,
    pub r: Vec<usize>,
    /// Leading coefficient of gamma; its sign is the gauge choice.
    pub gamma1: Rat,
}

impl<C: Coeff> CurveData<C> {
    pub fn n_chain(&self) -> usize {
        self.z.len()
    }

    /// Allowed exponent window `[-r_i, s_i]` of `z_i`.
    pub fn window(&self, i: usize) -> (i32, i32) {
        (-(self.r[i] as i32), self.s[i] as i32)
    }

    /// Coefficients of `h^n` in `z_i`, keyed by p-exponent.
    pub fn layer(&self, i: usize, n: i32) -> BTreeMap<i32, C> {
        self.z[i]
            .terms()
            .iter()
            .filter_map(|(k, s)| s.coeff(n).filter(|c| !c.is_zero()).map(|c| (*k, c)))
            .collect()
    }

    /// Observed pole orders `(at infinity, at zero)` of every `z_i`.
    pub fn pole_orders(&self) -> Vec<(i32, i32)> {
        self.z
            .iter()
            .map(|z| match z.pole_bounds() {
                Some((lo, hi)) => (hi.max(0), (-lo).max(0)),
                None => (0, 0),
            })
            .collect()
    }

    /// Drops every order at or above `prec`.
    pub fn truncate(&self, h_order: usize) -> Self {
        let prec = h_order as i32 + 1;
        CurveData {
            z: self.z.iter().map(|z| z.truncate(prec)).collect(),
            gamma: self.gamma.truncate(prec),
            h_order: h_order.min(self.h_order),
            s: self.s.clone(),
            r: self.r.clone(),
            gamma1: self.gamma1.clone(),
        }
    }

    pub fn map<D: Coeff>(&self, f: &dyn Fn(&C) -> D) -> CurveData<D> {
        CurveData {
            z: self.z.iter().map(|z| z.map(f)).collect(),
            gamma: self.gamma.map(f),
            h_order: self.h_order,
            s: self.s.clone(),
            r: self.r.clone(),
            gamma1: self.gamma1.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Row {
    Interior { k: usize, m: i32 },
    First { m: i32 },
    FirstT,
    Last { m: i32 },
    LastT,
    GaugeFirst,
    GaugeLast,
}

struct Layout {
    n: usize,
    windows: Vec<(i32, i32)>,
    offsets: Vec<usize>,
    unknowns: usize,
    rows: Vec<Row>,
}

impl Layout {
    fn new(model: &ChainModel) -> Self {
        let n = model.n_chain();
        let (s, r) = (model.s(), model.r());
        let windows: Vec<(i32, i32)> = (0..n).map(|i| (-(r[i] as i32), s[i] as i32)).collect();
        let mut offsets = Vec::with_capacity(n);
        let mut acc = 0;
        for w in &windows {
            offsets.push(acc);
            acc += (w.1 - w.0 + 1) as usize;
        }
        let mut rows = Vec::new();
        for k in 1..n - 1 {
            for m in -(r[k - 1] as i32)..=s[k + 1] as i32 {
                rows.push(Row::Interior { k, m });
            }
        }
        for m in 0..=s[1] as i32 {
            rows.push(Row::First { m });
        }
        rows.push(Row::FirstT);
        for m in -(r[n - 2] as i32)..=0 {
            rows.push(Row::Last { m });
        }
        rows.push(Row::LastT);
        rows.push(Row::GaugeFirst);
        rows.push(Row::GaugeLast);
        Layout {
            n,
            windows,
            offsets,
            unknowns: acc + 1,
            rows,
        }
    }

    fn col(&self, i: usize, m: i32) -> Option<usize> {
        let (lo, hi) = self.windows[i];
        (lo..=hi)
            .contains(&m)
            .then(|| self.offsets[i] + (m - lo) as usize)
    }

    fn gamma_col(&self) -> usize {
        self.unknowns - 1
    }

    /// The order-n equations are affine in the order-n unknowns with this
    /// constant matrix: only the quadratic couplings and gamma_1 enter.
    fn jacobian(&self, model: &ChainModel, gamma1: &Rat) -> Vec<Vec<Rat>> {
        let zero = <Rat as Coeff>::zero();
        let n = self.n;
        let g1inv2 = (gamma1 * gamma1).recip();
        let mut j = vec![vec![zero; self.unknowns]; self.rows.len()];
        for (ri, row) in self.rows.iter().enumerate() {
            let mut put = |i: usize, m: i32, v: Rat| {
                if let Some(c) = self.col(i, m) {
                    j[ri][c] += v;
                }
            };
            match *row {
                Row::Interior { k, m } => {
                    put(k, m, model.potential(k).quadratic());
                    put(k - 1, m, -model.c(k - 1));
                    put(k + 1, m, -model.c(k));
                }
                Row::First { m } => {
                    put(0, m, model.potential(0).quadratic());
                    put(1, m, -model.c(0));
                }
                Row::FirstT => {
                    put(0, -1, model.potential(0).quadratic());
                    put(1, -1, -model.c(0));
                }
                Row::Last { m } => {
                    put(n - 1, m, model.potential(n - 1).quadratic());
                    put(n - 2, m, -model.c(n - 2));
                }
                Row::LastT => {
                    put(n - 1, 1, model.potential(n - 1).quadratic());
                    put(n - 2, 1, -model.c(n - 2));
                }
                Row::GaugeFirst => put(0, 1, <Rat as Coeff>::one()),
                Row::GaugeLast => put(n - 1, -1, <Rat as Coeff>::one()),
            }
            let gc = self.gamma_col();
            match row {
                Row::FirstT | Row::LastT => j[ri][gc] += g1inv2.clone(),
                Row::GaugeFirst | Row::GaugeLast => j[ri][gc] -= <Rat as Coeff>::one(),
                _ => {}
            }
        }
        j
    }
}

/// Per-order coefficient store: `coef[col][order]`.
struct Store<C> {
    coef: Vec<Vec<C>>,
}

impl<C: Coeff> Store<C> {
    fn series(&self, col: usize, upto: usize, prec: i32) -> TruncSeries<C> {
        let terms: Vec<(i32, C)> = (1..=upto)
            .filter(|&o| !self.coef[col][o].is_zero())
            .map(|o| (o as i32, self.coef[col][o].clone()))
            .collect();
        TruncSeries::from_terms(&terms, prec)
    }

    fn curve(&self, lay: &Layout, upto: usize, prec: i32) -> (Vec<PLaurent<C>>, TruncSeries<C>) {
        let z = (0..lay.n)
            .map(|i| {
                let (lo, hi) = lay.windows[i];
                let mut m = BTreeMap::new();
                for k in lo..=hi {
                    m.insert(k, self.series(lay.col(i, k).unwrap(), upto, prec));
                }
                PLaurent::from_map(m)
            })
            .collect();
        (z, self.series(lay.gamma_col(), upto, prec))
    }
}

/// Residuals of all equations at order `order`, given the curve through
/// `upto` orders.
fn residuals<C: Coeff>(
    model: &ChainModel,
    lay: &Layout,
    z: &[PLaurent<C>],
    gamma: &TruncSeries<C>,
    order: i32,
) -> Result<Vec<C>, CurveError> {
    let n = lay.n;
    let cs = |k: usize| C::from_rat(&model.c(k));
    let prec = order + 1;
    let t_over_gamma = TruncSeries::<C>::monomial(C::one(), 2).div_to(gamma, prec)?;
    let ends = |k: usize, nb: usize| -> Result<PLaurent<C>, CurveError> {
        Ok(model
            .potential(k)
            .derivative_at(&z[k])?
            .sub(&z[nb].mul_coeff(&cs(k.min(nb)))))
    };
    let first = ends(0, 1)?;
    let last = ends(n - 1, n - 2)?;
    let mut interior = Vec::with_capacity(n);
    for k in 0..n {
        if k == 0 || k == n - 1 {
            interior.push(PLaurent::zero());
            continue;
        }
        let e = model.potential(k).derivative_at(&z[k])?;
        interior.push(
            e.sub(&z[k - 1].mul_coeff(&cs(k - 1)))
                .sub(&z[k + 1].mul_coeff(&cs(k))),
        );
    }
    let at = |f: &PLaurent<C>, m: i32| -> Result<C, CurveError> {
        f.coeff_at(m, order)
            .ok_or_else(|| CurveError::BranchNotFound(format!("order {} not resolved", order)))
    };
    let tg = t_over_gamma
        .coeff(order)
        .ok_or_else(|| CurveError::BranchNotFound("gamma precision lost".into()))?;
    let g = gamma.coeff(order).unwrap_or_else(C::zero);
    let zc = |i: usize, m: i32| z[i].coeff_at(m, order).unwrap_or_else(C::zero);
    lay.rows
        .iter()
        .map(|row| match *row {
            Row::Interior { k, m } => at(&interior[k], m),
            Row::First { m } => at(&first, m),
            Row::FirstT => Ok(at(&first, -1)?.sub(&tg)),
            Row::Last { m } => at(&last, m),
            Row::LastT => Ok(at(&last, 1)?.sub(&tg)),
            Row::GaugeFirst => Ok(zc(0, 1).sub(&g)),
            Row::GaugeLast => Ok(zc(n - 1, -1).sub(&g)),
        })
        .collect()
}

/// Solves the curve conditions through order `h^h_order`.
///
/// The Gaussian layer is closed form in the propagator `G`:
/// `z_i = h (G_iN p + G_i1 / p) / gamma_1`, `gamma_1 = -sqrt(G_1N)`.
pub fn solve_curve<C: Coeff>(
    model: &ChainModel,
    h_order: usize,
) -> Result<CurveData<C>, CurveError> {
    let n = model.n_chain();
    let lay = Layout::new(model);
    let g = model.propagator()?;
    let root = rat_sqrt(&g[0][n - 1])
        .filter(|r| !Coeff::is_zero(r))
        .ok_or_else(|| {
            CurveError::BranchNotFound(format!("G_1N = {} is not a positive square", g[0][n - 1]))
        })?;
    let gamma1 = -root;
    let mut store = Store {
        coef: vec![vec![C::zero(); h_order.max(1) + 1]; lay.unknowns],
    };
    if h_order == 0 {
        let (z, gamma) = store.curve(&lay, 0, 1);
        return Ok(CurveData {
            z,
            gamma,
            h_order,
            s: model.s(),
            r: model.r(),
            gamma1,
        });
    }
    for i in 0..n {
        store.coef[lay.col(i, 1).unwrap()][1] = C::from_rat(&(&g[i][n - 1] / &gamma1));
        store.coef[lay.col(i, -1).unwrap()][1] = C::from_rat(&(&g[i][0] / &gamma1));
    }
    store.coef[lay.gamma_col()][1] = C::from_rat(&gamma1);
    let (z, gamma) = store.curve(&lay, 1, 2);
    if residuals(model, &lay, &z, &gamma, 1)?
        .iter()
        .any(|r| !r.is_zero())
    {
        return Err(CurveError::BranchNotFound(
            "Gaussian layer does not close".into(),
        ));
    }
    let jac = lay.jacobian(model, &gamma1);
    let left = linalg::left_inverse(&jac).map_err(|_| {
        let sol = linalg::solve(&jac, &vec![<Rat as Coeff>::zero(); jac.len()]);
        CurveError::GaugeAmbiguity {
            nullity: sol.map(|s| s.nullspace_dim()).unwrap_or(0),
        }
    })?;
    for order in 2..=h_order {
        let (z, gamma) = store.curve(&lay, order - 1, order as i32 + 1);
        let r0 = residuals(model, &lay, &z, &gamma, order as i32)?;
        let rhs: Vec<C> = r0.iter().map(|x| x.neg()).collect();
        let x = linalg::apply(&left, &rhs, |a, v| v.scale(a));
        // the system is overdetermined; check the solution is exact
        let back = linalg::apply(&jac, &x, |a, v| v.scale(a));
        if back.iter().zip(&rhs).any(|(a, b)| a != b) {
            return Err(CurveError::BranchNotFound(format!(
                "order {} equations are inconsistent",
                order
            )));
        }
        for (col, v) in x.into_iter().enumerate() {
            store.coef[col][order] = v;
        }
    }
    let (z, gamma) = store.curve(&lay, h_order, h_order as i32 + 1);
    Ok(CurveData {
        z,
        gamma,
        h_order,
        s: model.s(),
        r: model.r(),
        gamma1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{rat, rat_int, CouplingPoly};

    fn gauss_layer(cd: &CurveData<CouplingPoly>, i: usize) -> BTreeMap<i32, Rat> {
        cd.layer(i, 1)
            .into_iter()
            .map(|(k, c)| (k, c.as_constant().unwrap()))
            .collect()
    }

    #[test]
    fn gaussian_layer_of_cubic_model() {
        let cd: CurveData<CouplingPoly> = solve_curve(&ChainModel::cubic_chain(), 1).unwrap();
        let want = |a: i64, b: i64| BTreeMap::from([(-1, rat_int(a)), (1, rat_int(b))]);
        assert_eq!(gauss_layer(&cd, 0), want(-2, -1));
        assert_eq!(gauss_layer(&cd, 1), want(-1, -1));
        assert_eq!(gauss_layer(&cd, 2), want(-1, -2));
        assert_eq!(
            cd.gamma.coeff(1).unwrap(),
            CouplingPoly::constant(rat_int(-1))
        );
    }

    #[test]
    fn vanishing_cubic_terminates_at_first_order() {
        let m = ChainModel::cubic_chain().instantiate(&[rat_int(0), rat_int(0), rat_int(0)]);
        let cd: CurveData<Rat> = solve_curve(&m, 5).unwrap();
        for i in 0..3 {
            for n in 2..=5 {
                assert!(cd.layer(i, n).is_empty(), "z{} has order {}", i + 1, n);
            }
        }
    }

    #[test]
    fn trivial_truncation() {
        let cd: CurveData<Rat> =
            solve_curve(&ChainModel::cubic_chain().instantiate(&[]), 0).unwrap();
        assert!(cd.z.iter().all(|z| z.is_zero_known()));
        assert!(cd.gamma.is_zero_known());
    }

    #[test]
    fn interior_identity_holds_exactly() {
        let m = ChainModel::cubic_chain().instantiate(&[rat(1, 3), rat(1, 5), rat(1, 7)]);
        let cd: CurveData<Rat> = solve_curve(&m, 7).unwrap();
        let e = m
            .potential(1)
            .derivative_at(&cd.z[1])
            .unwrap()
            .sub(&cd.z[0])
            .sub(&cd.z[2]);
        assert!(e.is_zero_known());
        assert_eq!(cd.pole_orders(), vec![(1, 4), (2, 2), (4, 1)]);
    }

    #[test]
    fn non_square_propagator_entry_is_rejected() {
        let r = |n: i64| rat_int(n);
        let m = ChainModel::cubic(&[r(1), r(2)], &[r(1)])
            .unwrap()
            .instantiate(&[]);
        // G_12 = 1 here; scale the coupling to make it 2/... non-square
        let m2 = ChainModel::new(m.potentials().to_vec(), vec![rat(1, 2)]).unwrap();
        let e = solve_curve::<Rat>(&m2, 2).unwrap_err();
        assert!(matches!(e, CurveError::BranchNotFound(_)));
    }
}
