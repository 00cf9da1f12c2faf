use crate::exact_algebra::{
    residue_at, Coeff, PLaurent, PRational, Rat, ResiduePoint, TruncSeries,
};

use super::base::{base_amplitude, base_amplitude_in_q, ChainContext, CurvePoint};
use super::AmplitudeError;

/// Boundary data of an intermediate color: the value `x_j = z_j(p_j)` and
/// the plus points of its fiber, which serve as interpolation nodes.
#[derive(Clone, Debug)]
pub struct MidFiber {
    /// 0-based color.
    pub j: usize,
    pub x: Rat,
    pub plus: Vec<CurvePoint>,
}

impl MidFiber {
    /// Picks `x_j` so that every plus point is rational, one of them
    /// starting at `p h = zeta`.
    pub fn rational(ctx: &ChainContext, j: usize, zeta: &Rat) -> Result<Self, AmplitudeError> {
        let x = ctx.rational_fiber_value(j, zeta)?;
        Self::at_value(ctx, j, x)
    }

    pub fn at_value(ctx: &ChainContext, j: usize, x: Rat) -> Result<Self, AmplitudeError> {
        let plus = ctx.plus_points(j, &x)?;
        if plus.len() != ctx.curve.s[j] {
            return Err(AmplitudeError::DegenerateFiber(format!(
                "z{} = {} has {} rational plus points, expected {}",
                j + 1,
                x,
                plus.len(),
                ctx.curve.s[j]
            )));
        }
        Ok(MidFiber { j, x, plus })
    }

    fn x_series(&self) -> TruncSeries<Rat> {
        TruncSeries::constant(self.x.clone())
    }
}

/// `W_{1, colors..., N}` for an increasing color list starting at 1.
#[derive(Clone, Copy, Debug)]
pub struct MixedAmplitude<'a> {
    pub ctx: &'a ChainContext,
    /// Intermediate colors `j < j+1 < ... < N-1`, 0-based; empty for the base case.
    pub depth: usize,
}

impl<'a> MixedAmplitude<'a> {
    /// Colors carried, 1-based.
    pub fn colors(&self) -> Vec<usize> {
        let n = self.ctx.n_chain();
        let mut c = vec![1];
        c.extend(n - self.depth..n);
        c.push(n);
        c
    }

    fn check(&self, mids: &[MidFiber]) -> Result<(), AmplitudeError> {
        let n = self.ctx.n_chain();
        if mids.len() != self.depth
            || mids
                .iter()
                .enumerate()
                .any(|(i, m)| m.j != n - 1 - self.depth + i)
        {
            return Err(AmplitudeError::Unsupported(
                "fiber data does not match the colors".into(),
            ));
        }
        Ok(())
    }

    /// Value at `(a, x_j.., b)` by the interpolation closed form.
    pub fn eval(
        &self,
        a: &CurvePoint,
        mids: &[MidFiber],
        b: &CurvePoint,
    ) -> Result<TruncSeries<Rat>, AmplitudeError> {
        self.check(mids)?;
        match mids.split_first() {
            None => base_amplitude(self.ctx, a, b),
            Some((f, rest)) => {
                let next = MixedAmplitude {
                    ctx: self.ctx,
                    depth: self.depth - 1,
                };
                let w_a = next.eval(a, rest, b)?;
                let w_q = f
                    .plus
                    .iter()
                    .map(|q| next.eval(q, rest, b))
                    .collect::<Result<Vec<_>, _>>()?;
                lagrange_step(a, f, &w_a, &w_q)
            }
        }
    }

    /// As a rational function of the first point.
    pub fn in_q(&self, mids: &[MidFiber], b: &CurvePoint) -> Result<PRational, AmplitudeError> {
        self.check(mids)?;
        match mids.split_first() {
            None => base_amplitude_in_q(self.ctx, b),
            Some((f, rest)) => {
                let next = MixedAmplitude {
                    ctx: self.ctx,
                    depth: self.depth - 1,
                };
                let w = next.in_q(rest, b)?;
                let w_q = f
                    .plus
                    .iter()
                    .map(|q| next.eval(q, rest, b))
                    .collect::<Result<Vec<_>, _>>()?;
                let z1 = &self.ctx.curve.z[0];
                let mut num = w;
                for (i, wi) in w_q.iter().enumerate() {
                    let l = lagrange_basis_in_q(z1, f, i)?;
                    num = num.sub(&l.mul(&PRational::from_laurent(PLaurent::constant(wi.clone()))));
                }
                let den = PLaurent::constant(f.x_series()).sub(&self.ctx.curve.z[f.j]);
                Ok(num.div(&PRational::from_laurent(den))?)
            }
        }
    }

    /// Value at `(a, x_j.., b)` with the outermost step done by residues.
    pub fn eval_residue(
        &self,
        a: &CurvePoint,
        mids: &[MidFiber],
        b: &CurvePoint,
    ) -> Result<TruncSeries<Rat>, AmplitudeError> {
        self.check(mids)?;
        match mids.split_first() {
            None => base_amplitude(self.ctx, a, b),
            Some((f, rest)) => {
                let next = MixedAmplitude {
                    ctx: self.ctx,
                    depth: self.depth - 1,
                };
                let w = next.in_q(rest, b)?;
                residue_step(self.ctx, a, f, &w)
            }
        }
    }
}

/// `prod_{k != i} (z_1(q) - X_k) / (X_i - X_k)` as a function of `q`.
fn lagrange_basis_in_q(
    z1: &PLaurent<Rat>,
    f: &MidFiber,
    i: usize,
) -> Result<PRational, AmplitudeError> {
    let mut num = PLaurent::constant(TruncSeries::constant(<Rat as Coeff>::one()));
    let mut den = TruncSeries::constant(<Rat as Coeff>::one());
    for (k, q) in f.plus.iter().enumerate() {
        if k != i {
            num = num.mul(&z1.sub(&PLaurent::constant(q.z[0].clone())));
            den = den.mul(&f.plus[i].z[0].sub(&q.z[0]));
        }
    }
    Ok(PRational::new(num, PLaurent::constant(den))?)
}

pub(crate) fn lagrange_step(
    a: &CurvePoint,
    f: &MidFiber,
    w_a: &TruncSeries<Rat>,
    w_q: &[TruncSeries<Rat>],
) -> Result<TruncSeries<Rat>, AmplitudeError> {
    let x1 = &a.z[0];
    let mut interp = TruncSeries::exact_zero();
    for (i, wi) in w_q.iter().enumerate() {
        let mut l = TruncSeries::constant(<Rat as Coeff>::one());
        for (k, q) in f.plus.iter().enumerate() {
            if k != i {
                l = l.mul(&x1.sub(&q.z[0])).div(&f.plus[i].z[0].sub(&q.z[0]))?;
            }
        }
        interp = interp.add(&wi.mul(&l));
    }
    Ok(w_a.sub(&interp).div(&f.x_series().sub(&a.z[f.j]))?)
}

/// The recursion kernel `K_alpha(p, q, r)` as a function of `q`, for `r`
/// given through its plus fiber:
/// `prod_k [z1(p) - z1(r_k)] / ([z1(q) - z1(p)] [z_a(r) - z_a(p)] prod_k [z1(q) - z1(r_k)])`.
pub fn kernel_k(
    ctx: &ChainContext,
    p: &CurvePoint,
    f: &MidFiber,
) -> Result<PRational, AmplitudeError> {
    let z1 = &ctx.curve.z[0];
    let konst = |s: &TruncSeries<Rat>| PLaurent::constant(s.clone());
    let mut num = TruncSeries::constant(<Rat as Coeff>::one());
    let mut den = z1
        .sub(&konst(&p.z[0]))
        .mul_series(&f.x_series().sub(&p.z[f.j]));
    for r in &f.plus {
        num = num.mul(&p.z[0].sub(&r.z[0]));
        den = den.mul(&z1.sub(&konst(&r.z[0])));
    }
    Ok(PRational::new(konst(&num), den)?)
}

/// `sum over q in {p} and the plus fiber of Res K(p, q, r) W(q) dz_1(q)`.
fn residue_step(
    ctx: &ChainContext,
    a: &CurvePoint,
    f: &MidFiber,
    w: &PRational,
) -> Result<TruncSeries<Rat>, AmplitudeError> {
    let k = kernel_k(ctx, a, f)?;
    let dz1 = PRational::from_laurent(ctx.curve.z[0].derivative());
    let integrand = k.mul(w).mul(&dz1);
    let mut acc = residue_at(&integrand, &ResiduePoint::Finite(a.p.clone()))?;
    for q in &f.plus {
        acc = acc.add(&residue_at(&integrand, &ResiduePoint::Finite(q.p.clone()))?);
    }
    Ok(acc)
}

/// One step `W_{1,j+1,...,N} -> W_{1,j,...,N}`.
pub fn recursion_step<'a>(
    w_next: MixedAmplitude<'a>,
    j: usize,
) -> Result<MixedAmplitude<'a>, AmplitudeError> {
    let n = w_next.ctx.n_chain();
    if j + 2 + w_next.depth != n || j == 0 {
        return Err(AmplitudeError::Unsupported(format!(
            "step to color {} does not extend the chain",
            j + 1
        )));
    }
    Ok(MixedAmplitude {
        ctx: w_next.ctx,
        depth: w_next.depth + 1,
    })
}

/// `W_{1,2,...,N}` by folding the recursion from `j = N-1` down to 2.
pub fn full_amplitude(ctx: &ChainContext) -> Result<MixedAmplitude<'_>, AmplitudeError> {
    let n = ctx.n_chain();
    let mut w = MixedAmplitude { ctx, depth: 0 };
    for j in (1..n - 1).rev() {
        w = recursion_step(w, j)?;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitudes::base::tests::oracle_series;
    use crate::exact_algebra::{rat, rat_int};
    use crate::spectral_curve::ChainModel;

    fn setup(h: usize) -> (ChainModel, ChainContext) {
        let m = ChainModel::cubic_chain().instantiate(&[rat(1, 3), rat(1, 5), rat(1, 7)]);
        let ctx = ChainContext::new(&m, h).unwrap();
        (m, ctx)
    }

    #[test]
    fn full_amplitude_matches_oracle() {
        let (m, ctx) = setup(14);
        let w = full_amplitude(&ctx).unwrap();
        assert_eq!(w.colors(), vec![1, 2, 3]);
        let a = ctx.first_point(&rat_int(5)).unwrap();
        let b = ctx.last_point(&rat_int(7)).unwrap();
        let f = MidFiber::rational(&ctx, 1, &rat_int(4)).unwrap();
        assert_eq!(f.x, rat(4, 3));
        let got = w.eval(&a, std::slice::from_ref(&f), &b).unwrap();
        let want = oracle_series(&m, &[(0, rat_int(5)), (1, f.x.clone()), (2, rat_int(7))], 4);
        assert!(got.prec() >= 9, "prec {}", got.prec());
        assert!(
            got.agrees_to(&want, 9),
            "{}\n{}",
            got.render("h"),
            want.render("h")
        );
    }

    #[test]
    fn residue_and_interpolation_paths_agree() {
        let (_, ctx) = setup(12);
        let w = full_amplitude(&ctx).unwrap();
        let a = ctx.first_point(&rat_int(5)).unwrap();
        let b = ctx.last_point(&rat_int(7)).unwrap();
        let f = MidFiber::rational(&ctx, 1, &rat(-1, 2)).unwrap();
        let mids = [f];
        let lag = w.eval(&a, &mids, &b).unwrap();
        let res = w.eval_residue(&a, &mids, &b).unwrap();
        let order = lag.prec().min(res.prec());
        assert!(order >= 6, "order {order}");
        assert!(lag.agrees_to(&res, order));
    }

    #[test]
    fn single_node_kernel() {
        let m = ChainModel::two_matrix_cubic().instantiate(&[rat(1, 3), rat(1, 5)]);
        let ctx = ChainContext::new(&m, 6).unwrap();
        let p = ctx.first_point(&rat_int(5)).unwrap();
        let f = MidFiber::at_value(&ctx, 0, rat_int(3)).unwrap();
        assert_eq!(f.plus.len(), 1);
        let k = kernel_k(&ctx, &p, &f).unwrap();
        let q = ctx.first_point(&rat_int(11)).unwrap();
        let got = k.eval(&q.p).unwrap();
        let r = &f.plus[0];
        let want = p.z[0]
            .sub(&r.z[0])
            .div(
                &q.z[0]
                    .sub(&p.z[0])
                    .mul(&f.x_series().sub(&p.z[0]))
                    .mul(&q.z[0].sub(&r.z[0])),
            )
            .unwrap();
        let order = got.prec().min(want.prec());
        assert!(got.agrees_to(&want, order));
    }

    #[test]
    fn recursion_step_rejects_wrong_color() {
        let (_, ctx) = setup(8);
        let base = MixedAmplitude {
            ctx: &ctx,
            depth: 0,
        };
        assert!(recursion_step(base, 0).is_err());
        assert_eq!(recursion_step(base, 1).unwrap().colors(), vec![1, 2, 3]);
    }
}
