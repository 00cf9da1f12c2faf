use crate::exact_algebra::{Coeff, PLaurent, PRational, Rat, TruncSeries};
use crate::fibers::{fiber_points, FiberBase};
use crate::spectral_curve::{reconstruct_e, solve_curve, ChainModel, CurveData, EPoly};

use super::AmplitudeError;

/// Numeric model with its solved curve and `E` polynomial.
#[derive(Clone, Debug)]
pub struct ChainContext {
    pub model: ChainModel,
    pub curve: CurveData<Rat>,
    pub e: EPoly<Rat>,
}

/// A point of the curve as an h-series together with all `z_i` there.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub p: TruncSeries<Rat>,
    pub z: Vec<TruncSeries<Rat>>,
}

impl CurvePoint {
    pub fn at(curve: &CurveData<Rat>, p: TruncSeries<Rat>) -> Result<Self, AmplitudeError> {
        let z = curve
            .z
            .iter()
            .map(|zi| zi.eval(&p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CurvePoint { p, z })
    }
}

impl ChainContext {
    pub fn new(model: &ChainModel, h_order: usize) -> Result<Self, AmplitudeError> {
        if model.nvars() > 0
            && model
                .potentials()
                .iter()
                .any(|p| p.coeffs().iter().any(|c| c.as_constant().is_none()))
        {
            return Err(AmplitudeError::Unsupported(
                "amplitudes need numeric couplings".into(),
            ));
        }
        if model.n_chain() < 2 {
            return Err(AmplitudeError::Unsupported(
                "a chain needs at least two matrices".into(),
            ));
        }
        let curve = solve_curve::<Rat>(model, h_order)?;
        let e = reconstruct_e(&curve, model)?;
        Ok(ChainContext {
            model: model.clone(),
            curve,
            e,
        })
    }

    /// Builds a context around an externally supplied curve, e.g. one read
    /// back from disk or deliberately corrupted.
    pub fn from_parts(model: ChainModel, curve: CurveData<Rat>, e: EPoly<Rat>) -> Self {
        ChainContext { model, curve, e }
    }

    pub fn n_chain(&self) -> usize {
        self.model.n_chain()
    }

    fn value(&self, x: &Rat) -> TruncSeries<Rat> {
        TruncSeries::from_terms(&[(0, x.clone())], self.curve.h_order as i32 + 4)
    }

    /// The physical point with `z_1 = x` on the sheet of `p = infinity`.
    pub fn first_point(&self, x: &Rat) -> Result<CurvePoint, AmplitudeError> {
        let set = fiber_points(&self.curve, 0, &FiberBase::Value(self.value(x)))?;
        let plus = set.rational_plus()?;
        match plus.as_slice() {
            [p] => CurvePoint::at(&self.curve, p.clone()),
            _ => Err(AmplitudeError::DegenerateFiber(format!(
                "z1 = {x} has {} plus points",
                plus.len()
            ))),
        }
    }

    /// The physical point with `z_N = x` on the sheet of `p = 0`.
    pub fn last_point(&self, x: &Rat) -> Result<CurvePoint, AmplitudeError> {
        let n = self.n_chain();
        let set = fiber_points(&self.curve, n - 1, &FiberBase::Value(self.value(x)))?;
        let minus = set.rational_minus()?;
        match minus.as_slice() {
            [p] => CurvePoint::at(&self.curve, p.clone()),
            _ => Err(AmplitudeError::DegenerateFiber(format!(
                "z{n} = {x} has {} minus points",
                minus.len()
            ))),
        }
    }

    /// Value of `z_j` whose plus points all start at rational `p h`, one of
    /// them at `zeta`. Only pole orders up to two are handled.
    pub fn rational_fiber_value(&self, j: usize, zeta: &Rat) -> Result<Rat, AmplitudeError> {
        let s = self.curve.s[j];
        let lead = |k: i32| {
            self.curve.z[j]
                .coeff(k)
                .and_then(|c| c.coeff(k))
                .unwrap_or_else(<Rat as Coeff>::zero)
        };
        match s {
            1 | 2 => Ok((1..=s as i32).fold(<Rat as Coeff>::zero(), |acc, k| {
                acc + lead(k) * crate::exact_algebra::rat::rat_pow(zeta, k as u32)
            })),
            _ => Err(AmplitudeError::DegenerateFiber(format!(
                "z{} has pole order {s} at infinity; rational plus points are not guaranteed",
                j + 1
            ))),
        }
    }

    /// All plus points of `z_j = x`, which must be rational.
    pub fn plus_points(&self, j: usize, x: &Rat) -> Result<Vec<CurvePoint>, AmplitudeError> {
        let set = fiber_points(&self.curve, j, &FiberBase::Value(self.value(x)))?;
        set.rational_plus()?
            .into_iter()
            .map(|p| CurvePoint::at(&self.curve, p))
            .collect()
    }
}

/// `W_{1,N}(a, b)` with `a` on the first and `b` on the last physical sheet:
/// `sum_k E(Z_1..Z_k, Z~_{k+1}..Z~_N) / ((Z_k - Z~_k)(Z_{k+1} - Z~_{k+1}))`
/// with `Z = z(a)`, `Z~ = z(b)`. For two matrices the constant 1 is added.
pub fn base_amplitude(
    ctx: &ChainContext,
    a: &CurvePoint,
    b: &CurvePoint,
) -> Result<TruncSeries<Rat>, AmplitudeError> {
    let n = ctx.n_chain();
    let mut acc = TruncSeries::exact_zero();
    for k in 1..n {
        let xs: Vec<TruncSeries<Rat>> = (0..n)
            .map(|i| {
                if i < k {
                    a.z[i].clone()
                } else {
                    b.z[i].clone()
                }
            })
            .collect();
        let e = ctx.e.eval(&ctx.model, &xs)?;
        let d = a.z[k - 1].sub(&b.z[k - 1]).mul(&a.z[k].sub(&b.z[k]));
        acc = acc.add(&e.div(&d)?);
    }
    if n == 2 {
        acc = acc.add(&TruncSeries::constant(<Rat as Coeff>::one()));
    }
    Ok(acc)
}

/// `W_{1,N}(q, b)` as a rational function of the first point `q`.
pub fn base_amplitude_in_q(
    ctx: &ChainContext,
    b: &CurvePoint,
) -> Result<PRational, AmplitudeError> {
    let n = ctx.n_chain();
    let konst = |s: &TruncSeries<Rat>| PLaurent::constant(s.clone());
    let mut acc: Option<PRational> = None;
    for k in 1..n {
        let xs: Vec<PLaurent<Rat>> = (0..n)
            .map(|i| {
                if i < k {
                    ctx.curve.z[i].clone()
                } else {
                    konst(&b.z[i])
                }
            })
            .collect();
        let e = ctx.e.eval_with(&ctx.model, &xs, &|s| konst(s))?;
        let d = ctx.curve.z[k - 1]
            .sub(&konst(&b.z[k - 1]))
            .mul(&ctx.curve.z[k].sub(&konst(&b.z[k])));
        let term = PRational::new(e, d)?;
        acc = Some(match acc {
            None => term,
            Some(t) => t.add(&term),
        });
    }
    let mut w = acc.expect("n >= 2");
    if n == 2 {
        w = w.add(&PRational::from_laurent(konst(&TruncSeries::constant(
            <Rat as Coeff>::one(),
        ))));
    }
    Ok(w)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exact_algebra::rat::rat_pow;
    use crate::exact_algebra::{rat, rat_int};
    use crate::planar_oracle::{oracle_table, DEFAULT_BUDGET};

    /// Oracle cells supported on `slots` summed into an h-series:
    /// `sum T^v_n h^(2v) / prod x^(n+1)`.
    pub(crate) fn oracle_series(
        model: &ChainModel,
        slots: &[(usize, Rat)],
        vmax: usize,
    ) -> TruncSeries<Rat> {
        let t = oracle_table(model, 2 * vmax - 2, vmax, DEFAULT_BUDGET).unwrap();
        let mut terms = Vec::new();
        for v in 1..=vmax {
            let mut s = <Rat as Coeff>::zero();
            for ((n, w), c) in &t.cells {
                let outside = n
                    .iter()
                    .enumerate()
                    .any(|(i, k)| *k > 0 && !slots.iter().any(|(j, _)| *j == i));
                if *w != v || outside {
                    continue;
                }
                let mut term = c.eval(&[]);
                for (i, x) in slots {
                    term /= rat_pow(x, n[*i] as u32 + 1);
                }
                s += term;
            }
            terms.push((2 * v as i32, s));
        }
        TruncSeries::from_terms(&terms, 2 * vmax as i32 + 1)
    }

    #[test]
    fn gaussian_three_matrix_base_case() {
        let m = ChainModel::cubic_chain().gaussian();
        let ctx = ChainContext::new(&m, 10).unwrap();
        let a = ctx.first_point(&rat_int(5)).unwrap();
        let b = ctx.last_point(&rat_int(7)).unwrap();
        let w = base_amplitude(&ctx, &a, &b).unwrap();
        let want = oracle_series(&m, &[(0, rat_int(5)), (2, rat_int(7))], 4);
        assert!(w.prec() >= 9, "prec {}", w.prec());
        assert!(
            w.agrees_to(&want, 9),
            "{} vs {}",
            w.render("h"),
            want.render("h")
        );
    }

    #[test]
    fn two_matrix_base_case_matches_oracle() {
        let m = ChainModel::two_matrix_cubic().instantiate(&[rat(1, 3), rat(1, 5)]);
        let ctx = ChainContext::new(&m, 16).unwrap();
        let a = ctx.first_point(&rat_int(5)).unwrap();
        let b = ctx.last_point(&rat_int(7)).unwrap();
        let w = base_amplitude(&ctx, &a, &b).unwrap();
        let want = oracle_series(&m, &[(0, rat_int(5)), (1, rat_int(7))], 4);
        assert!(
            w.agrees_to(&want, 9),
            "{} vs {}",
            w.render("h"),
            want.render("h")
        );
    }

    #[test]
    fn cubic_three_matrix_base_case_matches_oracle() {
        let m = ChainModel::cubic_chain().instantiate(&[rat(1, 3), rat(1, 5), rat(1, 7)]);
        let ctx = ChainContext::new(&m, 14).unwrap();
        let a = ctx.first_point(&rat_int(5)).unwrap();
        let b = ctx.last_point(&rat_int(7)).unwrap();
        let w = base_amplitude(&ctx, &a, &b).unwrap();
        let want = oracle_series(&m, &[(0, rat_int(5)), (2, rat_int(7))], 4);
        assert!(
            w.agrees_to(&want, 9),
            "{} vs {}",
            w.render("h"),
            want.render("h")
        );
    }

    #[test]
    fn base_in_q_agrees_with_pointwise() {
        let m = ChainModel::cubic_chain().instantiate(&[rat(1, 3), rat(1, 5), rat(1, 7)]);
        let ctx = ChainContext::new(&m, 10).unwrap();
        let a = ctx.first_point(&rat_int(5)).unwrap();
        let b = ctx.last_point(&rat_int(7)).unwrap();
        let direct = base_amplitude(&ctx, &a, &b).unwrap();
        let via_q = base_amplitude_in_q(&ctx, &b).unwrap().eval(&a.p).unwrap();
        let order = direct.prec().min(via_q.prec());
        assert!(order >= 6, "order {order}");
        assert!(direct.agrees_to(&via_q, order));
    }
}
