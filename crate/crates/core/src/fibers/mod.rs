//! Fibers of the curve functions: all `q` with `z_j(q) = z_j(base)`, split
//! by the pole their sheet merges into.

use crate::exact_algebra::puiseux::root_product;
use crate::exact_algebra::{
    newton_polygon_roots, AlgNum, AlgebraError, Coeff, PLaurent, PuiseuxRoot, Rat, TruncSeries,
    EXACT,
};
use crate::spectral_curve::CurveData;

const LIFT_ITER: usize = 64;

/// Where the fiber is taken.
#[derive(Clone, Debug, PartialEq)]
pub enum FiberBase {
    /// A point `p` of the curve given as an h-series.
    Point(TruncSeries<Rat>),
    /// A value of `z_j`.
    Value(TruncSeries<Rat>),
}

#[derive(Clone, Debug)]
pub struct FiberSet {
    pub j: usize,
    pub value: TruncSeries<Rat>,
    /// Roots that run to `p = infinity` as `h -> 0`.
    pub plus: Vec<PuiseuxRoot<AlgNum>>,
    /// Roots that run to `p = 0`.
    pub minus: Vec<PuiseuxRoot<AlgNum>>,
    /// Position of the base point in `plus` or `minus`, when it was a point.
    pub base_index: Option<(bool, usize)>,
}

impl FiberSet {
    pub fn plus_count(&self) -> usize {
        self.plus.iter().map(|r| r.family_degree).sum()
    }

    pub fn minus_count(&self) -> usize {
        self.minus.iter().map(|r| r.family_degree).sum()
    }

    /// The plus points as rational series; fails on an irrational family.
    pub fn rational_plus(&self) -> Result<Vec<TruncSeries<Rat>>, AlgebraError> {
        self.plus
            .iter()
            .map(|r| {
                r.rational().ok_or_else(|| {
                    AlgebraError::DegenerateFiber(format!(
                        "plus point is an irrational family of degree {}",
                        r.family_degree
                    ))
                })
            })
            .collect()
    }

    pub fn rational_minus(&self) -> Result<Vec<TruncSeries<Rat>>, AlgebraError> {
        self.minus
            .iter()
            .map(|r| {
                r.rational().ok_or_else(|| {
                    AlgebraError::DegenerateFiber(format!(
                        "minus point is an irrational family of degree {}",
                        r.family_degree
                    ))
                })
            })
            .collect()
    }

    /// `prod (q - root)` over the whole fiber, coefficients from degree 0.
    pub fn root_product(&self, prec: i32) -> Result<Vec<TruncSeries<Rat>>, AlgebraError> {
        let all: Vec<PuiseuxRoot<AlgNum>> = self.plus.iter().chain(&self.minus).cloned().collect();
        root_product(&all, prec)
    }
}

/// `q^r (z_j(q) - value)` as coefficients of `q^0, q^1, ...`.
pub fn fiber_polynomial(
    curve: &CurveData<Rat>,
    j: usize,
    value: &TruncSeries<Rat>,
) -> Vec<TruncSeries<Rat>> {
    let (lo, hi) = curve.window(j);
    (lo..=hi)
        .map(|k| {
            let c = curve.z[j]
                .coeff(k)
                .cloned()
                .unwrap_or_else(TruncSeries::exact_zero);
            if k == 0 {
                c.sub(value)
            } else {
                c
            }
        })
        .collect()
}

pub fn fiber_points(
    curve: &CurveData<Rat>,
    j: usize,
    base: &FiberBase,
) -> Result<FiberSet, AlgebraError> {
    let value = match base {
        FiberBase::Point(p) => curve.z[j].eval(p)?,
        FiberBase::Value(x) => x.clone(),
    };
    let f = fiber_polynomial(curve, j, &value);
    let roots = newton_polygon_roots(&f, LIFT_ITER)?;
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for r in roots {
        if r.valuation >= EXACT {
            return Err(AlgebraError::DegenerateFiber("root at p = 0".into()));
        }
        match r.valuation {
            v if v < 0 => plus.push(r),
            v if v > 0 => minus.push(r),
            _ => {
                return Err(AlgebraError::DegenerateFiber(
                    "root of valuation zero cannot be assigned to a pole; use a base value of valuation zero".into(),
                ))
            }
        }
    }
    let key = |r: &PuiseuxRoot<AlgNum>| (r.valuation, r.series.render("h"));
    plus.sort_by_key(key);
    minus.sort_by_key(key);
    let mut set = FiberSet {
        j,
        value,
        plus,
        minus,
        base_index: None,
    };
    let (s, r) = (curve.s[j], curve.r[j]);
    if set.plus_count() != s || set.minus_count() != r {
        return Err(AlgebraError::DegenerateFiber(format!(
            "z{} fiber has {} plus and {} minus points, expected {} and {}",
            j + 1,
            set.plus_count(),
            set.minus_count(),
            s,
            r
        )));
    }
    if let FiberBase::Point(p) = base {
        let matches = |roots: &[PuiseuxRoot<AlgNum>]| {
            roots.iter().position(|q| {
                q.rational()
                    .map(|q| {
                        let d = q.sub(p);
                        d.is_zero_known()
                    })
                    .unwrap_or(false)
            })
        };
        set.base_index = matches(&set.plus)
            .map(|i| (true, i))
            .or_else(|| matches(&set.minus).map(|i| (false, i)));
        if set.base_index.is_none() {
            return Err(AlgebraError::DegenerateFiber(
                "base point missing from its own fiber".into(),
            ));
        }
    }
    Ok(set)
}

/// Evaluates a curve function at an algebraic point.
pub fn eval_alg(
    z: &PLaurent<Rat>,
    q: &TruncSeries<AlgNum>,
) -> Result<TruncSeries<AlgNum>, AlgebraError> {
    let lift = |s: &TruncSeries<Rat>| s.map(|c| AlgNum::rational(c.clone()));
    let mut acc = TruncSeries::zero_to(z.prec());
    let qi = q.inv()?;
    for (k, s) in z.terms() {
        let pw = if *k >= 0 {
            q.powi(*k as u32)
        } else {
            qi.powi((-*k) as u32)
        };
        acc = acc.add(&lift(s).mul(&pw));
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq)]
pub struct InjectivityReport {
    pub k: usize,
    pub checked: usize,
    pub skipped: usize,
    pub witnesses: Vec<String>,
}

impl InjectivityReport {
    pub fn pass(&self) -> bool {
        self.witnesses.is_empty() && self.checked > 0
    }
}

/// On each sampled fiber of `z_k`, the plus points must have pairwise
/// distinct `z_1` values: `z_1` separates the sheets meeting at infinity.
pub fn verify_injectivity(curve: &CurveData<Rat>, k: usize, samples: &[Rat]) -> InjectivityReport {
    let mut rep = InjectivityReport {
        k,
        checked: 0,
        skipped: 0,
        witnesses: Vec::new(),
    };
    for x in samples {
        let set = match fiber_points(
            curve,
            k,
            &FiberBase::Value(TruncSeries::constant(x.clone())),
        ) {
            Ok(s) => s,
            Err(e) => {
                rep.witnesses.push(format!("x = {}: {}", x, e));
                continue;
            }
        };
        let mut vals = Vec::new();
        for r in &set.plus {
            match eval_alg(&curve.z[0], &r.series) {
                Ok(v) => vals.push((r.family_degree, v)),
                Err(e) => rep.witnesses.push(format!("x = {}: {}", x, e)),
            }
        }
        for (a, (da, va)) in vals.iter().enumerate() {
            // conjugates inside one family differ iff some coefficient is irrational
            if *da == 2 && va.terms().all(|(_, c)| c.as_rat().is_some()) {
                rep.witnesses
                    .push(format!("x = {}: conjugate plus points share z1", x));
            } else if *da > 2 {
                rep.skipped += 1;
            }
            for (_, vb) in vals.iter().skip(a + 1) {
                if va.sub(vb).is_zero_known() {
                    rep.witnesses
                        .push(format!("x = {}: two plus points share z1", x));
                }
            }
        }
        rep.checked += 1;
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{rat, rat_int};
    use crate::spectral_curve::{solve_curve, ChainModel};
    use std::collections::BTreeMap;

    fn cubic(h: usize) -> CurveData<Rat> {
        let m = ChainModel::cubic_chain().instantiate(&[rat(1, 3), rat(1, 5), rat(1, 7)]);
        solve_curve(&m, h).unwrap()
    }

    #[test]
    fn gaussian_fiber_is_p_and_inverse() {
        // exact Gaussian z_2 = -h (p + 1/p)
        let mut cd = cubic(1);
        let z2 = BTreeMap::from([
            (-1, TruncSeries::monomial(rat_int(-1), 1)),
            (1, TruncSeries::monomial(rat_int(-1), 1)),
        ]);
        cd.z[1] = PLaurent::from_map(z2);
        cd.s[1] = 1;
        cd.r[1] = 1;
        let x = TruncSeries::from_terms(&[(0, rat_int(3))], 8);
        let set = fiber_points(&cd, 1, &FiberBase::Value(x)).unwrap();
        let p = set.rational_plus().unwrap()[0].clone();
        let q = set.rational_minus().unwrap()[0].clone();
        assert_eq!(p.valuation(), Some(-1));
        assert_eq!(
            p.mul(&q).truncate(4),
            TruncSeries::from_terms(&[(0, rat_int(1))], 4)
        );
    }

    #[test]
    fn cardinalities_match_sheet_degrees() {
        let cd = cubic(8);
        for j in 0..3 {
            let set =
                fiber_points(&cd, j, &FiberBase::Value(TruncSeries::constant(rat(7, 2)))).unwrap();
            assert_eq!(set.plus_count(), cd.s[j]);
            assert_eq!(set.minus_count(), cd.r[j]);
        }
    }

    #[test]
    fn second_plus_point_scales_like_inverse_coupling() {
        // z_2 near infinity in the chart p = zeta / h: g1 zeta^2 - zeta + O(h)
        let cd = cubic(8);
        let za = rat_int(4);
        let x2 = rat(1, 3) * &za * &za - &za;
        let set = fiber_points(&cd, 1, &FiberBase::Value(TruncSeries::constant(x2))).unwrap();
        let leads: Vec<Rat> = set
            .rational_plus()
            .unwrap()
            .iter()
            .map(|s| s.coeff(-1).unwrap())
            .collect();
        assert!(leads.contains(&za));
        assert!(leads.contains(&(rat_int(3) - za)));
    }

    #[test]
    fn base_point_is_in_its_fiber() {
        let cd = cubic(8);
        let set =
            fiber_points(&cd, 0, &FiberBase::Value(TruncSeries::constant(rat_int(5)))).unwrap();
        let p1 = set.rational_plus().unwrap()[0].clone();
        let again = fiber_points(&cd, 0, &FiberBase::Point(p1)).unwrap();
        assert_eq!(again.base_index, Some((true, 0)));
    }

    #[test]
    fn completeness_reconstructs_fiber_polynomial() {
        let cd = cubic(8);
        let v = TruncSeries::constant(rat(-5, 3));
        let set = fiber_points(&cd, 1, &FiberBase::Value(v.clone())).unwrap();
        let f = fiber_polynomial(&cd, 1, &v);
        let lead = f.last().unwrap().clone();
        let prod = set.root_product(3).unwrap();
        for (k, c) in prod.iter().enumerate() {
            let want = f[k].div(&lead).unwrap();
            let p = c.prec().min(want.prec()).min(3);
            assert!(c.agrees_to(&want, p), "coefficient {}", k);
        }
    }

    #[test]
    fn injectivity_on_second_color() {
        let cd = cubic(8);
        let xs: Vec<Rat> = (1..=4).map(|k| rat(2 * k + 1, 3)).collect();
        let rep = verify_injectivity(&cd, 1, &xs);
        assert!(rep.pass(), "{:?}", rep.witnesses);
        assert!(verify_injectivity(&cd, 0, &xs).pass());
    }

    #[test]
    fn roots_are_stable_under_more_orders() {
        let a = cubic(6);
        let b = cubic(8);
        let v = FiberBase::Value(TruncSeries::constant(rat_int(5)));
        let ra = fiber_points(&a, 0, &v).unwrap().rational_plus().unwrap();
        let rb = fiber_points(&b, 0, &v).unwrap().rational_plus().unwrap();
        assert!(ra[0].agrees_to(&rb[0], ra[0].prec()));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::exact_algebra::{rat, Rat, TruncSeries, EXACT};
    use crate::spectral_curve::{hat_x_chain, solve_curve, ChainModel, CurveData};
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(6))]

        #[test]
        fn curve_identities_at_random_couplings(a in 1i64..6, b in -4i64..5, c in 1i64..6) {
            let m = ChainModel::cubic_chain().instantiate(&[rat(a, 7), rat(b, 5), rat(c, 9)]);
            let cd: CurveData<Rat> = solve_curve(&m, 6).unwrap();
            let interior = m.potential(1).derivative_at(&cd.z[1]).unwrap().sub(&cd.z[0]).sub(&cd.z[2]);
            prop_assert!(interior.is_zero_known());
            let xs = hat_x_chain(&m, &cd.z[0], &cd.z[1]).unwrap();
            prop_assert!(xs[2].sub(&cd.z[2]).is_zero_known());
            for j in 0..3 {
                let x = TruncSeries::from_terms(&[(0, rat(5 + j as i64, 2))], EXACT);
                let f = fiber_points(&cd, j, &FiberBase::Value(x)).unwrap();
                prop_assert_eq!(f.plus_count(), cd.s[j]);
                prop_assert_eq!(f.minus_count(), cd.r[j]);
            }
        }
    }
}
