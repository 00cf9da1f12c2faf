use std::collections::BTreeMap;

use super::model::ChainModel;
use super::CurveError;
use crate::exact_algebra::{Coeff, CouplingPoly, MPoly};

/// Extends `(x_1, x_2)` along the chain: `c_{i,i+1} x_{i+1} = V_i'(x_i) - c_{i-1,i} x_{i-1}`.
/// Returns all `N` entries, the two inputs first.
pub fn hat_x_chain<A: Coeff>(model: &ChainModel, x1: &A, x2: &A) -> Result<Vec<A>, CurveError> {
    let n = model.n_chain();
    let mut xs = vec![x1.clone(), x2.clone()];
    for i in 1..n - 1 {
        let v = model.potential(i).derivative_at(&xs[i])?;
        let next = v.sub(&xs[i - 1].scale(&model.c(i - 1)));
        xs.push(next.scale(&model.c(i).recip()));
    }
    xs.truncate(n);
    Ok(xs)
}

/// The polynomials `f_{i,j}(x_i, ..., x_j)` in the variables `x_1..x_N`.
#[derive(Clone, Debug)]
pub struct FPolys {
    table: BTreeMap<(usize, usize), MPoly<CouplingPoly>>,
}

impl FPolys {
    /// `f_{i,j}` with 1-based labels and `i - 1 <= j <= N`.
    pub fn get(&self, i: usize, j: usize) -> &MPoly<CouplingPoly> {
        &self.table[&(i, j)]
    }
}

fn vprime_poly(model: &ChainModel, k: usize) -> MPoly<CouplingPoly> {
    let n = model.n_chain();
    let mut out = MPoly::zero(n);
    for (t, c) in model.potential(k).coeffs().iter().enumerate() {
        let mut e = vec![0; n];
        e[k] = t as i32 + 1;
        out.add_term(e, c.clone());
    }
    out
}

pub fn f_polys(model: &ChainModel) -> FPolys {
    let n = model.n_chain();
    let mut table = BTreeMap::new();
    for i in 1..=n {
        table.insert((i, i - 1), MPoly::one(n));
        let ci = model.c(i - 1).recip();
        table.insert((i, i), vprime_poly(model, i - 1).scale(&ci));
        for j in i + 1..=n {
            let a = vprime_poly(model, j - 1).mul(&table[&(i, j - 1)]);
            let xx = MPoly::var(n, j - 2).mul(&MPoly::var(n, j - 1));
            let b = xx.mul(&table[&(i, j - 2)]).scale(&model.c(j - 2));
            let f = a.sub(&b).scale(&model.c(j - 1).recip());
            table.insert((i, j), f);
        }
    }
    FPolys { table }
}

/// Keeps the non-negative powers in each of `vars`.
pub fn pol_extract<C: Coeff>(expr: &MPoly<C>, vars: &[usize]) -> MPoly<C> {
    expr.pol_extract(vars)
}

/// `Pol` through the residue form: the coefficient of `x^-1` in
/// `f(x) / (x - x1)` expanded at large `x`, as a polynomial in `x1`.
pub fn pol_via_residue<C: Coeff>(f: &BTreeMap<i32, C>) -> BTreeMap<i32, C> {
    let Some(&top) = f.keys().next_back() else {
        return BTreeMap::new();
    };
    // variables (x, x1); kernel sum_j x1^j x^(-j-1)
    let mut fx = MPoly::zero(2);
    for (k, c) in f {
        fx.add_term(vec![*k, 0], c.clone());
    }
    let mut kernel = MPoly::zero(2);
    for j in 0..=top.max(0) {
        kernel.add_term(vec![-j - 1, j], C::one());
    }
    fx.mul(&kernel)
        .terms()
        .filter(|(e, _)| e[0] == -1)
        .map(|(e, c)| (e[1], c.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{rat, rat_int, Rat};
    use crate::spectral_curve::{solve_curve, PotentialSpec};

    #[test]
    fn quadratic_chain_is_linear() {
        let one = CouplingPoly::one();
        let pots = (0..3)
            .map(|_| PotentialSpec::new(vec![one.clone()]).unwrap())
            .collect();
        let m = ChainModel::new(pots, vec![rat_int(1), rat_int(1)]).unwrap();
        let xs = hat_x_chain(&m, &rat_int(5), &rat_int(2)).unwrap();
        assert_eq!(xs[2], rat_int(2 - 5));
    }

    #[test]
    fn zero_input_stays_zero() {
        let m = ChainModel::cubic_chain().instantiate(&[rat(1, 3), rat(1, 5), rat(1, 7)]);
        let xs = hat_x_chain(&m, &rat_int(0), &rat_int(0)).unwrap();
        assert!(xs.iter().all(|x| Coeff::is_zero(x)));
    }

    #[test]
    fn chain_reproduces_curve() {
        let m = ChainModel::cubic_chain().instantiate(&[rat(1, 3), rat(-1, 5), rat(2, 7)]);
        let cd = solve_curve::<Rat>(&m, 6).unwrap();
        let xs = hat_x_chain(&m, &cd.z[0], &cd.z[1]).unwrap();
        assert!(xs[2].sub(&cd.z[2]).is_zero_known());
    }

    #[test]
    fn f_polynomials_unroll() {
        let m = ChainModel::cubic_chain();
        let f = f_polys(&m);
        assert_eq!(f.get(1, 0), &MPoly::one(3));
        let v1 = vprime_poly(&m, 0);
        assert_eq!(f.get(1, 1), &v1);
        let v2 = vprime_poly(&m, 1);
        let x1x2 = MPoly::var(3, 0).mul(&MPoly::var(3, 1));
        assert_eq!(f.get(1, 2), &v2.mul(&v1).sub(&x1x2));
        let f13 = f.get(1, 3);
        assert_eq!(f13.degree_in(0), Some(2));
        assert_eq!(f13.degree_in(1), Some(2));
        assert_eq!(f13.degree_in(2), Some(2));
    }

    #[test]
    fn pol_forms_agree() {
        let f = BTreeMap::from([(2, rat_int(1)), (0, rat_int(3)), (-1, rat_int(1))]);
        let want = BTreeMap::from([(2, rat_int(1)), (0, rat_int(3))]);
        assert_eq!(pol_via_residue(&f), want);
        let mut mp = MPoly::zero(1);
        for (k, c) in &f {
            mp.add_term(vec![*k], c.clone());
        }
        let pol = pol_extract(&mp, &[0]);
        let got: BTreeMap<i32, Rat> = pol.terms().map(|(e, c)| (e[0], c.clone())).collect();
        assert_eq!(got, want);
        let resolvent_only = BTreeMap::from([(-1, rat_int(2)), (-3, rat_int(1))]);
        assert!(pol_via_residue(&resolvent_only).is_empty());
    }
}
