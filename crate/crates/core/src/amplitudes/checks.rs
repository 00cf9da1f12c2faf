use crate::exact_algebra::{residue_at, Coeff, PRational, Rat, ResiduePoint, TruncSeries};
use crate::fibers::{fiber_points, FiberBase};
use crate::spectral_curve::{hat_x_chain, resolvent, End};

use super::base::{ChainContext, CurvePoint};
use super::recursion::{kernel_k, MidFiber, MixedAmplitude};
use super::AmplitudeError;

/// Orders below this are too few to call a vanishing series a pass.
const MIN_ORDER: i32 = 4;

/// Outcome of one internal consistency check.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    /// The residual vanishes at every order the truncation determines,
    /// however few. `pass` also asks for `MIN_ORDER` of them.
    pub zero: bool,
    /// Residual vanishes below `h^order`.
    pub order: i32,
    pub detail: String,
}

impl CheckReport {
    fn from_residual(name: &str, residual: &TruncSeries<Rat>, order: i32) -> Self {
        let order = order.min(residual.prec());
        let zero = residual.truncate(order).is_zero_known();
        let pass = zero && order >= MIN_ORDER;
        let detail = if !zero {
            format!("residual {}", residual.truncate(order).render("h"))
        } else if !pass {
            format!("only {order} orders available")
        } else {
            format!("residual vanishes below h^{order}")
        };
        CheckReport {
            name: name.to_string(),
            pass,
            zero,
            order,
            detail,
        }
    }

    fn merge(name: &str, parts: Vec<CheckReport>) -> Self {
        let pass = !parts.is_empty() && parts.iter().all(|r| r.pass);
        let zero = !parts.is_empty() && parts.iter().all(|r| r.zero);
        let order = parts.iter().map(|r| r.order).min().unwrap_or(0);
        let detail = match parts.iter().find(|r| !r.pass) {
            Some(r) => r.detail.clone(),
            None => format!("{} samples, residuals vanish below h^{order}", parts.len()),
        };
        CheckReport {
            name: name.to_string(),
            pass,
            zero,
            order,
            detail,
        }
    }
}

/// The loop equation behind one recursion step: with `a` the first point
/// over `x_1`,
/// `(x_j - z_j(a)) W_{1,j,..}(x_1, ..) - W_{1,j+1,..}(a, ..)`
/// is a polynomial in `x_1` of degree below `s_j`. Given `W_{1,j,..}` at
/// several `x_1` (`samples`), the top divided difference over every window
/// of `s_j + 1` samples must vanish. `ctx` supplies the curve the check is
/// run against.
pub fn verify_loop_equation(
    ctx: &ChainContext,
    samples: &[(Rat, TruncSeries<Rat>)],
    mids: &[MidFiber],
    b: &CurvePoint,
) -> Result<CheckReport, AmplitudeError> {
    let name = "loop equation";
    let Some((f, rest)) = mids.split_first() else {
        return Err(AmplitudeError::Unsupported(
            "the base amplitude has no loop equation".into(),
        ));
    };
    let s = f.plus.len();
    if samples.len() < s + 1 {
        return Err(AmplitudeError::Unsupported(format!(
            "need {} samples of x1, got {}",
            s + 1,
            samples.len()
        )));
    }
    let next = MixedAmplitude {
        ctx,
        depth: mids.len() - 1,
    };
    let mut pol = Vec::with_capacity(samples.len());
    for (x1, w) in samples {
        let a = ctx.first_point(x1)?;
        let wn = next.eval(&a, rest, b)?;
        let lhs = TruncSeries::constant(f.x.clone()).sub(&a.z[f.j]).mul(w);
        pol.push(wn.sub(&lhs));
    }
    let mut parts = Vec::new();
    for start in 0..samples.len() - s {
        let xs: Vec<&Rat> = samples[start..=start + s].iter().map(|(x, _)| x).collect();
        let dd = divided_difference(&xs, &pol[start..=start + s]);
        parts.push(CheckReport::from_residual(name, &dd, dd.prec()));
    }
    Ok(CheckReport::merge(name, parts))
}

fn divided_difference(xs: &[&Rat], vals: &[TruncSeries<Rat>]) -> TruncSeries<Rat> {
    let mut d = vals.to_vec();
    for k in 1..xs.len() {
        for i in (k..xs.len()).rev() {
            let denom = <Rat as Coeff>::one() / (xs[i] - xs[i - k]);
            d[i] = d[i].sub(&d[i - 1]).scale(&denom);
        }
    }
    d.pop().unwrap_or_else(TruncSeries::exact_zero)
}

/// `E(x_1, y(x_1), ...) = 0` with `y` built from the first resolvent
/// moments, and `E(z(a)) = 0` at the first point over `x_1`.
pub fn master_equation(ctx: &ChainContext, x1: &Rat) -> Result<CheckReport, AmplitudeError> {
    let name = "master equation";
    let h = ctx.curve.h_order;
    let moments = resolvent(
        &ctx.curve,
        &ctx.model,
        End::First,
        h.saturating_sub(1).max(1),
    )?;
    let x = TruncSeries::constant(x1.clone());
    let mut w = TruncSeries::exact_zero();
    let mut xp = x.inv()?;
    let xinv = xp.clone();
    for m in &moments {
        w = w.add(&m.mul(&xp));
        xp = xp.mul(&xinv);
    }
    let c = ctx.model.c(0);
    let y = ctx
        .model
        .potential(0)
        .derivative_at(&x)?
        .sub(&w)
        .scale(&(<Rat as Coeff>::one() / c));
    let xs = hat_x_chain(&ctx.model, &x, &y)?;
    let e_y = ctx.e.eval(&ctx.model, &xs)?;
    let a = ctx.first_point(x1)?;
    let e_a = ctx.e.eval(&ctx.model, &a.z)?;
    let valid = ctx.e.valid_to;
    Ok(CheckReport::merge(
        name,
        vec![
            CheckReport::from_residual(name, &e_y, valid),
            CheckReport::from_residual(name, &e_a, valid),
            CheckReport::from_residual(name, &y.sub(&a.z[1]), valid),
        ],
    ))
}

/// The numerator of the outermost recursion step vanishes on the plus
/// fiber of `x_j`, so the division by `x_j - z_j` leaves no pole there.
/// The numerator is taken from the rational-function form in `q`.
pub fn regularity(
    ctx: &ChainContext,
    mids: &[MidFiber],
    b: &CurvePoint,
) -> Result<CheckReport, AmplitudeError> {
    let name = "regularity";
    let Some((f, rest)) = mids.split_first() else {
        return Err(AmplitudeError::Unsupported(
            "the base amplitude has no recursion step".into(),
        ));
    };
    let next = MixedAmplitude {
        ctx,
        depth: mids.len() - 1,
    };
    let w_in_q = next.in_q(rest, b)?;
    let w_q = f
        .plus
        .iter()
        .map(|q| next.eval(q, rest, b))
        .collect::<Result<Vec<_>, _>>()?;
    let mut parts = Vec::new();
    for q in &f.plus {
        let mut num = w_in_q.eval(&q.p)?;
        for (i, wi) in w_q.iter().enumerate() {
            let mut l = TruncSeries::constant(<Rat as Coeff>::one());
            for (k, r) in f.plus.iter().enumerate() {
                if k != i {
                    l = l
                        .mul(&q.z[0].sub(&r.z[0]))
                        .div(&f.plus[i].z[0].sub(&r.z[0]))?;
                }
            }
            num = num.sub(&wi.mul(&l));
        }
        let on_fiber = TruncSeries::constant(f.x.clone()).sub(&q.z[f.j]);
        parts.push(CheckReport::from_residual(name, &num, num.prec()));
        parts.push(CheckReport::from_residual(name, &on_fiber, on_fiber.prec()));
    }
    Ok(CheckReport::merge(name, parts))
}

/// Residues of `K W dz_1` over all its poles, including `0` and infinity,
/// sum to zero. Poles are collected from the fibers of the denominator
/// factors; curves whose fibers are not all rational are not handled.
pub fn residue_sum_zero(
    ctx: &ChainContext,
    a: &CurvePoint,
    mids: &[MidFiber],
    b: &CurvePoint,
) -> Result<CheckReport, AmplitudeError> {
    let name = "residue sum";
    let Some((f, rest)) = mids.split_first() else {
        return Err(AmplitudeError::Unsupported(
            "the base amplitude has no recursion kernel".into(),
        ));
    };
    let next = MixedAmplitude {
        ctx,
        depth: mids.len() - 1,
    };
    let w = next.in_q(rest, b)?;
    if rest.iter().any(|m| !m.plus.is_empty()) {
        return Err(AmplitudeError::Unsupported(
            "poles of deeper amplitudes are not enumerated".into(),
        ));
    }
    let k = kernel_k(ctx, a, f)?;
    let dz1 = PRational::from_laurent(ctx.curve.z[0].derivative());
    let integrand = k.mul(&w).mul(&dz1);
    let mut bases: Vec<(usize, &TruncSeries<Rat>)> = vec![(0, &a.p)];
    bases.extend(f.plus.iter().map(|r| (0, &r.p)));
    bases.extend((0..ctx.n_chain()).map(|i| (i, &b.p)));
    let mut poles: Vec<TruncSeries<Rat>> = Vec::new();
    for (j, p) in bases {
        let set = fiber_points(&ctx.curve, j, &FiberBase::Point(p.clone()))?;
        for r in set.plus.iter().chain(&set.minus) {
            let q = r.rational().ok_or_else(|| {
                AmplitudeError::Unsupported(format!(
                    "z{} has an irrational fiber; poles not enumerable",
                    j + 1
                ))
            })?;
            if !poles.iter().any(|o| o.sub(&q).is_zero_known()) {
                poles.push(q);
            }
        }
    }
    let mut total = residue_at(&integrand, &ResiduePoint::Zero)?
        .add(&residue_at(&integrand, &ResiduePoint::Infinity)?);
    for q in &poles {
        total = total.add(&residue_at(&integrand, &ResiduePoint::Finite(q.clone()))?);
    }
    let mut rep = CheckReport::from_residual(name, &total, total.prec());
    rep.detail = format!("{} finite poles; {}", poles.len(), rep.detail);
    Ok(rep)
}

/// The interpolation and residue forms of the outermost step agree.
pub fn two_path_agreement(
    w: &MixedAmplitude<'_>,
    a: &CurvePoint,
    mids: &[MidFiber],
    b: &CurvePoint,
) -> Result<CheckReport, AmplitudeError> {
    let lag = w.eval(a, mids, b)?;
    let res = w.eval_residue(a, mids, b)?;
    let d = lag.sub(&res);
    Ok(CheckReport::from_residual(
        "two paths",
        &d,
        lag.prec().min(res.prec()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitudes::recursion::full_amplitude;
    use crate::exact_algebra::{rat, rat_int, PLaurent};
    use crate::spectral_curve::ChainModel;

    fn cubic(h: usize) -> ChainContext {
        let m = ChainModel::cubic_chain().instantiate(&[rat(1, 3), rat(1, 5), rat(1, 7)]);
        ChainContext::new(&m, h).unwrap()
    }

    fn samples(ctx: &ChainContext, f: &MidFiber, b: &CurvePoint) -> Vec<(Rat, TruncSeries<Rat>)> {
        let w = full_amplitude(ctx).unwrap();
        (0..4)
            .map(|i| {
                let x = rat_int(5 + i);
                let a = ctx.first_point(&x).unwrap();
                (x, w.eval(&a, std::slice::from_ref(f), b).unwrap())
            })
            .collect()
    }

    #[test]
    fn loop_equation_holds_for_cubic_chain() {
        let ctx = cubic(8);
        let b = ctx.last_point(&rat_int(7)).unwrap();
        let f = MidFiber::rational(&ctx, 1, &rat(-1, 2)).unwrap();
        let s = samples(&ctx, &f, &b);
        let rep = verify_loop_equation(&ctx, &s, std::slice::from_ref(&f), &b).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn loop_equation_detects_corrupted_curve() {
        let ctx = cubic(8);
        let b = ctx.last_point(&rat_int(7)).unwrap();
        let f = MidFiber::rational(&ctx, 1, &rat(-1, 2)).unwrap();
        let s = samples(&ctx, &f, &b);
        let mut curve = ctx.curve.clone();
        let bump = PLaurent::monomial(TruncSeries::monomial(rat(1, 11), 3), -1);
        curve.z[0] = curve.z[0].add(&bump);
        let bad = ChainContext::from_parts(ctx.model.clone(), curve, ctx.e.clone());
        let rep = verify_loop_equation(&bad, &s, std::slice::from_ref(&f), &b).unwrap();
        assert!(!rep.pass, "{rep:?}");
    }

    #[test]
    fn master_equation_on_cubic_chain() {
        let ctx = cubic(10);
        let rep = master_equation(&ctx, &rat_int(5)).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn numerator_vanishes_on_plus_fiber() {
        let ctx = cubic(8);
        let b = ctx.last_point(&rat_int(7)).unwrap();
        let f = MidFiber::rational(&ctx, 1, &rat(-1, 3)).unwrap();
        let rep = regularity(&ctx, std::slice::from_ref(&f), &b).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn residues_sum_to_zero_for_gaussian_chain() {
        let m = ChainModel::cubic_chain().gaussian();
        let ctx = ChainContext::new(&m, 8).unwrap();
        let a = ctx.first_point(&rat_int(5)).unwrap();
        let b = ctx.last_point(&rat_int(7)).unwrap();
        let f = MidFiber::rational(&ctx, 1, &rat(-1, 2)).unwrap();
        let rep = residue_sum_zero(&ctx, &a, std::slice::from_ref(&f), &b).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn paths_agree_with_linear_middle_potential() {
        let m = ChainModel::cubic_chain().instantiate(&[rat(1, 2), rat(0, 1), rat(1, 4)]);
        let ctx = ChainContext::new(&m, 10).unwrap();
        let w = full_amplitude(&ctx).unwrap();
        let a = ctx.first_point(&rat_int(5)).unwrap();
        let b = ctx.last_point(&rat_int(7)).unwrap();
        let f = MidFiber::rational(&ctx, 1, &rat(-1, 2)).unwrap();
        let rep = two_path_agreement(&w, &a, std::slice::from_ref(&f), &b).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
}
