//! Compositional inverse of a series `f = c1 t + O(t^2)`.

use super::coeff::Coeff;
use super::series::{TruncSeries, EXACT};
use super::AlgebraError;

/// `f(g)` for `g` of positive valuation.
pub fn compose<C: Coeff>(
    f: &TruncSeries<C>,
    g: &TruncSeries<C>,
) -> Result<TruncSeries<C>, AlgebraError> {
    let vg = g.valuation().unwrap_or(1);
    if vg < 1 {
        return Err(AlgebraError::TruncationTooShort(
            "inner series of a composition must vanish at the origin".into(),
        ));
    }
    let top = match f.max_exp() {
        Some(e) => e,
        None => return Ok(TruncSeries::zero_to(f.prec().saturating_mul(vg).min(EXACT))),
    };
    if f.valuation().unwrap_or(0) < 0 {
        return Err(AlgebraError::TruncationTooShort(
            "outer series has a pole".into(),
        ));
    }
    // validity of f(g) is limited by the first unknown term of f
    let cap = if f.is_exact() {
        EXACT
    } else {
        f.prec().saturating_mul(vg)
    };
    let mut acc = TruncSeries::zero_to(cap);
    let mut pw = TruncSeries::constant(C::one());
    for k in 0..=top {
        if k > 0 {
            pw = pw.mul(g).truncate(cap);
        }
        if let Some(c) = f.coeff_ref(k) {
            if !c.is_zero() {
                acc = acc.add(&pw.mul_coeff(c));
            }
        }
    }
    Ok(acc)
}

/// `g` with `f(g(x)) = x`, valid below `min(prec f, order)`.
pub fn series_reversion<C: Coeff>(
    f: &TruncSeries<C>,
    order: i32,
) -> Result<TruncSeries<C>, AlgebraError> {
    if f.valuation() != Some(1) {
        return Err(AlgebraError::NonInvertibleLeading(
            "series to invert must start at the linear term".into(),
        ));
    }
    let c1 = f.leading().unwrap().clone();
    let c1inv = c1
        .inv()
        .map_err(|_| AlgebraError::NonInvertibleLeading(c1.render()))?;
    let target = order.min(f.prec());
    let x = TruncSeries::<C>::var();
    let mut g = x.mul_coeff(&c1inv).truncate(target);
    for _ in 1..target {
        let r = compose(f, &g)?.sub(&x).truncate(target);
        if r.is_zero_known() {
            break;
        }
        g = g.sub(&r.mul_coeff(&c1inv)).truncate(target);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat::{rat, rat_int, Rat};
    use proptest::prelude::*;

    type S = TruncSeries<Rat>;

    #[test]
    fn identity_reverses_to_identity() {
        let g = series_reversion(&S::var(), 6).unwrap();
        assert_eq!(g, S::var().truncate(6));
    }

    #[test]
    fn two_t_plus_t_squared() {
        let f = S::from_terms(&[(1, rat_int(2)), (2, rat_int(1))], EXACT);
        let g = series_reversion(&f, 3).unwrap();
        assert_eq!(g.coeff(1), Some(rat(1, 2)));
        assert_eq!(g.coeff(2), Some(rat(-1, 8)));
    }

    #[test]
    fn series_valued_leading_coefficient() {
        // f(t) = -h t over h-series coefficients gives g(x) = -x/h
        type L = TruncSeries<S>;
        let mh = S::monomial(rat_int(-1), 1);
        let f = L::from_terms(&[(1, mh)], EXACT);
        let g = series_reversion(&f, 4).unwrap();
        assert_eq!(g.coeff(1), Some(S::monomial(rat_int(-1), -1)));
        assert!(g.coeff(2).unwrap().is_zero_known());
    }

    proptest! {
        #[test]
        fn roundtrip(c1 in 1i64..7, cs in proptest::collection::vec(-5i64..5, 4)) {
            let mut terms = vec![(1, rat_int(c1))];
            for (i, c) in cs.iter().enumerate() {
                terms.push((i as i32 + 2, rat(*c, 3)));
            }
            let f = S::from_terms(&terms, EXACT);
            let g = series_reversion(&f, 7).unwrap();
            let fg = compose(&f, &g).unwrap();
            prop_assert!(fg.agrees_to(&S::var(), 7));
            let gf = compose(&g, &f).unwrap();
            prop_assert!(gf.agrees_to(&S::var(), 7));
        }
    }
}
