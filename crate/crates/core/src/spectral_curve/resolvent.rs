use super::curve::CurveData;
use super::model::ChainModel;
use super::CurveError;
use crate::exact_algebra::{Coeff, PLaurent, TruncSeries};

/// Which end of the chain the resolvent belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    /// Matrix 1, expanded at `p -> infinity`.
    First,
    /// Matrix N, expanded at `p -> 0`.
    Last,
}

/// Moments `m_k`, `k < count`, of `W(x) = V'(x) - y(x) = sum_k m_k x^(-k-1)`
/// along the physical branch of one end of the chain.
///
/// With `x = z(p)` of local degree one at the pole, `m_k` is a residue in
/// `p`, read off as a coefficient without reverting `z`.
pub fn resolvent<C: Coeff>(
    curve: &CurveData<C>,
    model: &ChainModel,
    end: End,
    count: usize,
) -> Result<Vec<TruncSeries<C>>, CurveError> {
    let n = curve.n_chain();
    let (k, nb, sign) = match end {
        End::First => (0, 1, 1),
        End::Last => (n - 1, n - 2, -1),
    };
    let z = &curve.z[k];
    let c = C::from_rat(&model.c(k.min(nb)));
    let w = model
        .potential(k)
        .derivative_at(z)?
        .sub(&curve.z[nb].mul_coeff(&c));
    let dz = z.derivative();
    let mut f = w.mul(&dz);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let m = f
            .coeff(-1)
            .cloned()
            .unwrap_or_else(|| TruncSeries::zero_to(f.prec()));
        out.push(if sign > 0 { m } else { m.neg() });
        f = f.mul(z);
    }
    Ok(out)
}

/// `W` as a function on the curve: `V_k'(z_k) - c z_nb`.
pub fn end_function<C: Coeff>(
    curve: &CurveData<C>,
    model: &ChainModel,
    end: End,
) -> Result<PLaurent<C>, CurveError> {
    let n = curve.n_chain();
    let (k, nb) = match end {
        End::First => (0, 1),
        End::Last => (n - 1, n - 2),
    };
    let c = C::from_rat(&model.c(k.min(nb)));
    Ok(model
        .potential(k)
        .derivative_at(&curve.z[k])?
        .sub(&curve.z[nb].mul_coeff(&c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{rat, rat_int, CouplingPoly, Rat};
    use crate::spectral_curve::solve_curve;

    #[test]
    fn gaussian_moments() {
        let m = ChainModel::cubic_chain().instantiate(&[]);
        let cd = solve_curve::<Rat>(&m, 4).unwrap();
        let w: Vec<_> = resolvent(&cd, &m, End::First, 5)
            .unwrap()
            .iter()
            .map(|s| s.truncate(5))
            .collect();
        let h = |k: i32, c: i64| TruncSeries::from_terms(&[(k, rat_int(c))], 5);
        assert_eq!(w[0], h(2, 1));
        assert_eq!(w[1], TruncSeries::zero_to(5));
        assert_eq!(w[2], h(4, 2));
        let wl: Vec<_> = resolvent(&cd, &m, End::Last, 3)
            .unwrap()
            .iter()
            .map(|s| s.truncate(5))
            .collect();
        assert_eq!(wl[0], h(2, 1));
        assert_eq!(wl[2], h(4, 2));
    }

    #[test]
    fn odd_moments_vanish_without_odd_couplings() {
        let m = ChainModel::cubic_chain().instantiate(&[rat(0, 1)]);
        let cd = solve_curve::<Rat>(&m, 7).unwrap();
        let w = resolvent(&cd, &m, End::First, 6).unwrap();
        for k in [1, 3, 5] {
            assert!(w[k].is_zero_known());
        }
    }

    #[test]
    fn first_cubic_correction() {
        let cd = solve_curve::<CouplingPoly>(&ChainModel::cubic_chain(), 4).unwrap();
        let w = resolvent(&cd, &ChainModel::cubic_chain(), End::First, 2).unwrap();
        // <Tr M_1> at one vertex
        let want = CouplingPoly::parse("-4*g1 - g2 - 2*g3").unwrap();
        assert_eq!(w[1].coeff(4).unwrap(), want);
    }
}
