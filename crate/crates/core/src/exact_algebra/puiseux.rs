//! Roots of polynomials with h-series coefficients via the Newton polygon.
//!
//! Each edge of the lower hull fixes a root valuation; the edge polynomial
//! gives leading coefficients, which are then lifted by Newton iteration.
//! Irrational edge factors become conjugate families over `Q[t]/(m)`.

use super::algnum::AlgNum;
use super::coeff::Coeff;
use super::poly::CouplingPoly;
use super::rat::Rat;
use super::ratfunc::RatFunc;
use super::series::{TruncSeries, EXACT};
use super::upoly;
use super::AlgebraError;

/// Series in h whose exponents are bounded below; the valuation is explicit.
pub type PuiseuxSeries<E = AlgNum> = TruncSeries<E>;

/// One root, possibly standing for a whole family of conjugates.
#[derive(Clone, Debug, PartialEq)]
pub struct PuiseuxRoot<E> {
    pub valuation: i32,
    pub series: PuiseuxSeries<E>,
    /// Number of conjugate roots represented (1 for a rational branch).
    pub family_degree: usize,
    /// Minimal polynomial of the leading coefficient when irrational.
    pub min_poly: Option<Vec<Rat>>,
}

impl PuiseuxRoot<AlgNum> {
    /// The root as a rational h-series, if its coefficients are rational.
    pub fn rational(&self) -> Option<TruncSeries<Rat>> {
        if self.family_degree != 1 {
            return None;
        }
        let mut terms = Vec::new();
        for (e, c) in self.series.terms() {
            terms.push((e, c.as_rat()?));
        }
        Some(TruncSeries::from_terms(&terms, self.series.prec()))
    }
}

/// Coefficient domains whose edge polynomials we can solve.
pub trait EdgeField: Coeff {
    type Ext: Coeff;
    fn lift(&self) -> Self::Ext;
    /// Roots of `e(t)` (coefficients from degree 0, nonzero constant term),
    /// each with its family size and minimal polynomial when irrational.
    fn edge_roots(e: &[Self]) -> Result<Vec<(Self::Ext, usize, Option<Vec<Rat>>)>, AlgebraError>;
}

impl EdgeField for Rat {
    type Ext = AlgNum;
    fn lift(&self) -> AlgNum {
        AlgNum::rational(self.clone())
    }
    fn edge_roots(e: &[Rat]) -> Result<Vec<(AlgNum, usize, Option<Vec<Rat>>)>, AlgebraError> {
        let e = upoly::trim(e.to_vec());
        if !upoly::is_squarefree(&e) {
            return Err(AlgebraError::DegenerateFiber(
                "edge polynomial has a repeated root".into(),
            ));
        }
        let mut rest = e.clone();
        let mut out = Vec::new();
        for r in upoly::rational_roots(&e) {
            rest = upoly::divrem(&rest, &[-r.clone(), Rat::one()]).0;
            out.push((AlgNum::rational(r), 1, None));
        }
        if let Some(d) = upoly::degree(&rest) {
            if d > 0 {
                let m = upoly::monic(&rest);
                out.push((AlgNum::generator(&m), d, Some(m)));
            }
        }
        Ok(out)
    }
}

fn linear_edge<C: Coeff>(e: &[C]) -> Result<Vec<(C, usize, Option<Vec<Rat>>)>, AlgebraError> {
    let nz: Vec<usize> = (0..e.len()).filter(|&k| !e[k].is_zero()).collect();
    if nz.last() != Some(&1) {
        return Err(AlgebraError::NonInvertibleLeading(format!(
            "edge of length {} needs NUM mode to split",
            nz.last().copied().unwrap_or(0)
        )));
    }
    Ok(vec![(e[0].mul(&e[1].inv()?).neg(), 1, None)])
}

impl EdgeField for RatFunc {
    type Ext = RatFunc;
    fn lift(&self) -> RatFunc {
        self.clone()
    }
    fn edge_roots(e: &[RatFunc]) -> Result<Vec<(RatFunc, usize, Option<Vec<Rat>>)>, AlgebraError> {
        linear_edge(e)
    }
}

impl EdgeField for CouplingPoly {
    type Ext = CouplingPoly;
    fn lift(&self) -> CouplingPoly {
        self.clone()
    }
    fn edge_roots(
        e: &[CouplingPoly],
    ) -> Result<Vec<(CouplingPoly, usize, Option<Vec<Rat>>)>, AlgebraError> {
        linear_edge(e)
    }
}

/// `sum_k f_k t^k` for a series-valued `t`.
pub fn eval_poly<E: Coeff>(f: &[TruncSeries<E>], t: &TruncSeries<E>) -> TruncSeries<E> {
    let mut acc = TruncSeries::exact_zero();
    for c in f.iter().rev() {
        acc = acc.mul(t).add(c);
    }
    acc
}

fn derivative<E: Coeff>(f: &[TruncSeries<E>]) -> Vec<TruncSeries<E>> {
    f.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(&Rat::from_integer((k as i64).into())))
        .collect()
}

fn exact_part<E: Coeff>(s: &TruncSeries<E>) -> TruncSeries<E> {
    let terms: Vec<(i32, E)> = s.terms().map(|(e, c)| (e, c.clone())).collect();
    TruncSeries::from_terms(&terms, EXACT)
}

/// Newton lift of a simple root `t0` (valuation 0) of `g`. Returns the root
/// with validity set by the residual: if `g(t) = O(h^a)` and `g'(t)` is a
/// unit, the true root agrees with `t` below `a`.
pub fn lift_root<E: Coeff>(
    g: &[TruncSeries<E>],
    t0: &E,
    max_iter: usize,
) -> Result<TruncSeries<E>, AlgebraError> {
    let dg = derivative(g);
    let mut t = TruncSeries::constant(t0.clone());
    for _ in 0..max_iter {
        let r = eval_poly(g, &t);
        if r.is_zero_known() {
            let d = eval_poly(&dg, &t);
            let vd = d.valuation().ok_or_else(|| {
                AlgebraError::DegenerateFiber("derivative vanishes at a lifted root".into())
            })?;
            return Ok(t.truncate(r.prec() - vd));
        }
        let d = eval_poly(&dg, &t);
        let step = r.div(&d)?;
        t = t.sub(&exact_part(&step));
    }
    Err(AlgebraError::TruncationTooShort(
        "Newton lifting did not settle".into(),
    ))
}

/// Lower convex hull of `(i, v_i)`, as index pairs of consecutive vertices.
fn lower_hull(pts: &[(i64, i64)]) -> Vec<(usize, usize)> {
    let mut hull: Vec<usize> = Vec::new();
    for k in 0..pts.len() {
        while hull.len() >= 2 {
            let a = pts[hull[hull.len() - 2]];
            let b = pts[hull[hull.len() - 1]];
            let c = pts[k];
            // drop b if it lies on or above segment a-c
            let cross = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    hull.windows(2).map(|w| (w[0], w[1])).collect()
}

/// All roots of `sum_k f_k q^k` as h-Puiseux series.
///
/// Roots at `q = 0` (from an exactly vanishing constant term) are reported
/// with valuation `EXACT`. Every root is listed with multiplicity of its
/// family; the family degrees sum to the degree of the polynomial.
pub fn newton_polygon_roots<C: EdgeField>(
    f: &[TruncSeries<C>],
    max_iter: usize,
) -> Result<Vec<PuiseuxRoot<C::Ext>>, AlgebraError> {
    let deg = f.iter().rposition(|c| !c.is_zero_known()).ok_or_else(|| {
        AlgebraError::TruncationTooShort("polynomial vanishes to truncation".into())
    })?;
    for c in &f[deg + 1..] {
        if !c.is_exact() {
            return Err(AlgebraError::TruncationTooShort(
                "top coefficient unresolved at this truncation".into(),
            ));
        }
    }
    let mut roots = Vec::new();
    let low = f.iter().position(|c| !c.is_zero_known()).unwrap();
    if low > 0 {
        if !f[..low].iter().all(|c| c.is_exact()) {
            return Err(AlgebraError::TruncationTooShort(
                "constant coefficient unresolved at this truncation".into(),
            ));
        }
        for _ in 0..low {
            roots.push(PuiseuxRoot {
                valuation: EXACT,
                series: TruncSeries::exact_zero(),
                family_degree: 1,
                min_poly: None,
            });
        }
    }
    let pts: Vec<(i64, i64)> = (low..=deg)
        .filter(|&k| !f[k].is_zero_known())
        .map(|k| (k as i64, f[k].valuation().unwrap() as i64))
        .collect();
    for (a, b) in lower_hull(&pts) {
        let (i0, v0) = pts[a];
        let (j0, v1) = pts[b];
        let len = j0 - i0;
        let rise = v0 - v1;
        let g = num_integer::gcd(rise, len);
        if len / g != 1 {
            return Err(AlgebraError::RamifiedBranch {
                denominator: (len / g) as u32,
            });
        }
        let mu = (rise / len) as i32;
        // unresolved coefficients strictly inside the edge's span may hide points below it
        for k in i0..=j0 {
            let line = v0 - (k - i0) * rise / len;
            let c = &f[k as usize];
            if c.is_zero_known() && (c.prec() as i64) <= line {
                return Err(AlgebraError::TruncationTooShort(format!(
                    "coefficient of q^{} unresolved at the Newton polygon",
                    k
                )));
            }
        }
        // G(t) = f(h^mu t) / h^(v0 + mu i0)
        let shift = v0 as i32 + mu * i0 as i32;
        let gser: Vec<TruncSeries<C::Ext>> = f
            .iter()
            .enumerate()
            .map(|(k, c)| c.map(|x| x.lift()).shift(mu * k as i32 - shift))
            .collect();
        let edge: Vec<C> = (i0..=j0)
            .map(|k| {
                f[k as usize]
                    .coeff(v0 as i32 - (k - i0) as i32 * mu)
                    .unwrap_or_else(C::zero)
            })
            .collect();
        for (c, fam, mp) in C::edge_roots(&edge)? {
            let t = lift_root(&gser, &c, max_iter)?;
            roots.push(PuiseuxRoot {
                valuation: mu,
                series: t.shift(mu),
                family_degree: fam,
                min_poly: mp,
            });
        }
    }
    Ok(roots)
}

/// Product of `(q - root)` over every root, conjugate families included
/// through the trace, as polynomial coefficients from degree 0. Only
/// rational branches and families of degree one are expanded explicitly;
/// families contribute through their norm.
pub fn root_product(
    roots: &[PuiseuxRoot<AlgNum>],
    prec: i32,
) -> Result<Vec<TruncSeries<Rat>>, AlgebraError> {
    let mut acc: Vec<TruncSeries<Rat>> = vec![TruncSeries::constant(Rat::one())];
    for r in roots {
        let factor = if r.family_degree == 1 {
            let s = r.rational().ok_or_else(|| {
                AlgebraError::DegenerateFiber("degree one family is not rational".into())
            })?;
            vec![s.neg(), TruncSeries::constant(Rat::one())]
        } else {
            family_polynomial(r, prec)?
        };
        let mut next = vec![TruncSeries::exact_zero(); acc.len() + factor.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in factor.iter().enumerate() {
                next[i + j] = next[i + j].add(&a.mul(b).truncate(prec));
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Monic polynomial whose roots are the conjugates of a family root,
/// via Newton's identities on traces of powers.
pub fn family_polynomial(
    r: &PuiseuxRoot<AlgNum>,
    prec: i32,
) -> Result<Vec<TruncSeries<Rat>>, AlgebraError> {
    let d = r.family_degree;
    let trace = |s: &TruncSeries<AlgNum>| -> TruncSeries<Rat> {
        let terms: Vec<(i32, Rat)> = s.terms().map(|(e, c)| (e, c.trace())).collect();
        TruncSeries::from_terms(&terms, s.prec())
    };
    // power sums p_k = Tr(root^k)
    let mut pw = TruncSeries::constant(AlgNum::one());
    let mut p = Vec::with_capacity(d + 1);
    p.push(TruncSeries::constant(Rat::from_integer((d as i64).into())));
    for _ in 0..d {
        pw = pw.mul(&r.series).truncate(prec);
        p.push(trace(&pw));
    }
    // elementary symmetric e_k from k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} p_i
    let mut e = vec![TruncSeries::constant(Rat::one())];
    for k in 1..=d {
        let mut s = TruncSeries::exact_zero();
        for i in 1..=k {
            let t = e[k - i].mul(&p[i]);
            s = if i % 2 == 1 { s.add(&t) } else { s.sub(&t) };
        }
        e.push(s.scale(&Rat::new(1.into(), (k as i64).into())));
    }
    // prod (q - r_i) = sum_k (-1)^k e_k q^(d-k)
    let mut out = vec![TruncSeries::exact_zero(); d + 1];
    for k in 0..=d {
        out[d - k] = if k % 2 == 0 { e[k].clone() } else { e[k].neg() };
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat::{rat, rat_int};

    type S = TruncSeries<Rat>;

    fn c(v: i64) -> S {
        S::constant(rat_int(v))
    }

    #[test]
    fn gaussian_fiber_splits() {
        // q^2 - (3 + 1/3) q + 1
        let f = vec![c(1), S::constant(rat(-10, 3)), c(1)];
        let roots = newton_polygon_roots(&f, 40).unwrap();
        let mut vals: Vec<Rat> = roots
            .iter()
            .map(|r| r.rational().unwrap().coeff(0).unwrap())
            .collect();
        vals.sort();
        assert_eq!(vals, vec![rat(1, 3), rat_int(3)]);
    }

    #[test]
    fn diverging_root() {
        // h q - 1
        let f = vec![c(-1), S::monomial(rat_int(1), 1)];
        let roots = newton_polygon_roots(&f, 40).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].valuation, -1);
        assert_eq!(roots[0].rational().unwrap(), S::monomial(rat_int(1), -1));
    }

    #[test]
    fn ramified_is_reported() {
        // h - q^2
        let f = vec![S::monomial(rat_int(1), 1), c(0), c(-1)];
        assert_eq!(
            newton_polygon_roots(&f, 40).unwrap_err(),
            AlgebraError::RamifiedBranch { denominator: 2 }
        );
    }

    #[test]
    fn irrational_family_reconstructs() {
        // (q^2 - 2)(q - h), truncated at h^8
        let f = vec![
            S::from_terms(&[(1, rat_int(2))], 8),
            S::from_terms(&[(0, rat_int(-2))], 8),
            S::from_terms(&[(1, rat_int(-1))], 8),
            S::from_terms(&[(0, rat_int(1))], 8),
        ];
        let roots = newton_polygon_roots(&f, 40).unwrap();
        assert_eq!(roots.iter().map(|r| r.family_degree).sum::<usize>(), 3);
        let prod = root_product(&roots, 8).unwrap();
        for (a, b) in prod.iter().zip(&f) {
            assert!(a.agrees_to(b, 8), "{} vs {}", a, b);
        }
    }
}
