//! Laurent polynomials in the global coordinate `p` with series coefficients,
//! their quotients, point evaluation and local expansions.

use std::collections::BTreeMap;

use super::coeff::{Coeff, CoeffDomain};
use super::poly::CouplingPoly;
use super::rat::Rat;
use super::series::{TruncSeries, EXACT};
use super::AlgebraError;

/// Value type a curve function can be evaluated into: h-series themselves,
/// or local expansions in a second variable whose coefficients are h-series.
pub trait PointValue: Coeff {
    fn from_h(s: &TruncSeries<Rat>) -> Self;
}

impl PointValue for TruncSeries<Rat> {
    fn from_h(s: &TruncSeries<Rat>) -> Self {
        s.clone()
    }
}

/// Expansion in a local variable `eps` with h-series coefficients.
pub type LocalSeries = TruncSeries<TruncSeries<Rat>>;

impl PointValue for LocalSeries {
    fn from_h(s: &TruncSeries<Rat>) -> Self {
        TruncSeries::constant(s.clone())
    }
}

/// `sum_k a_k p^k` with `a_k` series in h.
#[derive(Clone, Debug, PartialEq)]
pub struct PLaurent<C> {
    terms: BTreeMap<i32, TruncSeries<C>>,
}

impl<C: Coeff> PLaurent<C> {
    pub fn zero() -> Self {
        PLaurent {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_map(terms: BTreeMap<i32, TruncSeries<C>>) -> Self {
        PLaurent { terms }
    }

    pub fn constant(s: TruncSeries<C>) -> Self {
        let mut m = BTreeMap::new();
        m.insert(0, s);
        PLaurent { terms: m }
    }

    pub fn monomial(s: TruncSeries<C>, k: i32) -> Self {
        let mut m = BTreeMap::new();
        m.insert(k, s);
        PLaurent { terms: m }
    }

    pub fn terms(&self) -> &BTreeMap<i32, TruncSeries<C>> {
        &self.terms
    }

    pub fn coeff(&self, k: i32) -> Option<&TruncSeries<C>> {
        self.terms.get(&k)
    }

    /// Coefficient of `p^k h^e`, `None` when beyond the validity order.
    pub fn coeff_at(&self, k: i32, e: i32) -> Option<C> {
        match self.terms.get(&k) {
            Some(s) => s.coeff(e),
            None => Some(C::zero()),
        }
    }

    /// Lowest and highest p-exponents carrying a known nonzero series.
    pub fn pole_bounds(&self) -> Option<(i32, i32)> {
        let mut it = self
            .terms
            .iter()
            .filter(|(_, s)| !s.is_zero_known())
            .map(|(k, _)| *k);
        let first = it.next()?;
        let last = it.last().unwrap_or(first);
        Some((first, last))
    }

    /// Common validity order of all coefficients.
    pub fn prec(&self) -> i32 {
        self.terms.values().map(|s| s.prec()).min().unwrap_or(EXACT)
    }

    pub fn truncate(&self, prec: i32) -> Self {
        PLaurent {
            terms: self
                .terms
                .iter()
                .map(|(k, s)| (*k, s.truncate(prec)))
                .collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        for (k, s) in &o.terms {
            let v = match t.get(k) {
                Some(a) => a.add(s),
                None => s.clone(),
            };
            t.insert(*k, v);
        }
        PLaurent { terms: t }
    }

    pub fn neg(&self) -> Self {
        PLaurent {
            terms: self.terms.iter().map(|(k, s)| (*k, s.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rat) -> Self {
        PLaurent {
            terms: self.terms.iter().map(|(k, s)| (*k, s.scale(r))).collect(),
        }
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        PLaurent {
            terms: self
                .terms
                .iter()
                .map(|(k, s)| (*k, s.mul_coeff(c)))
                .collect(),
        }
    }

    pub fn mul_series(&self, c: &TruncSeries<C>) -> Self {
        PLaurent {
            terms: self.terms.iter().map(|(k, s)| (*k, s.mul(c))).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut t: BTreeMap<i32, TruncSeries<C>> = BTreeMap::new();
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                let prod = a.mul(b);
                let v = match t.get(&(i + j)) {
                    Some(x) => x.add(&prod),
                    None => prod,
                };
                t.insert(i + j, v);
            }
        }
        PLaurent { terms: t }
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = PLaurent::constant(TruncSeries::constant(C::one()));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by `p^k`.
    pub fn shift_p(&self, k: i32) -> Self {
        PLaurent {
            terms: self.terms.iter().map(|(e, s)| (e + k, s.clone())).collect(),
        }
    }

    /// Derivative with respect to `p`.
    pub fn derivative(&self) -> Self {
        PLaurent {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| **k != 0)
                .map(|(k, s)| (k - 1, s.scale(&Rat::from_integer((*k as i64).into()))))
                .collect(),
        }
    }

    pub fn map<D: Coeff>(&self, f: &dyn Fn(&C) -> D) -> PLaurent<D> {
        PLaurent {
            terms: self.terms.iter().map(|(k, s)| (*k, s.map(f))).collect(),
        }
    }

    /// Identically zero to the known precision.
    pub fn is_zero_known(&self) -> bool {
        self.terms.values().all(|s| s.is_zero_known())
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .filter(|(_, s)| !s.is_zero_known())
            .map(|(k, s)| format!("[{}]*p^{}", s.render("h"), k))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Laurent polynomials in `p` form a ring; only monomials are invertible.
impl<C: Coeff> Coeff for PLaurent<C> {
    fn zero() -> Self {
        PLaurent::zero()
    }
    fn one() -> Self {
        PLaurent::constant(TruncSeries::constant(C::one()))
    }
    fn from_rat(r: &Rat) -> Self {
        PLaurent::constant(TruncSeries::constant(C::from_rat(r)))
    }
    fn is_zero(&self) -> bool {
        self.is_zero_known()
    }
    fn add(&self, o: &Self) -> Self {
        PLaurent::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        PLaurent::sub(self, o)
    }
    fn neg(&self) -> Self {
        PLaurent::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        PLaurent::mul(self, o)
    }
    fn scale(&self, r: &Rat) -> Self {
        PLaurent::scale(self, r)
    }
    fn inv(&self) -> Result<Self, AlgebraError> {
        match self.pole_bounds() {
            Some((lo, hi)) if lo == hi => Ok(PLaurent::monomial(self.terms[&lo].inv()?, -lo)),
            Some(_) => Err(AlgebraError::NonInvertibleLeading(
                "Laurent polynomial with several terms".into(),
            )),
            None => Err(AlgebraError::DivisionByZeroSeries),
        }
    }
    fn as_rat(&self) -> Option<Rat> {
        match self.pole_bounds() {
            None => Some(Rat::zero()),
            Some((0, 0)) => self.terms[&0].as_rat(),
            _ => None,
        }
    }
    fn render(&self) -> String {
        PLaurent::render(self)
    }
    fn domain() -> CoeffDomain {
        C::domain()
    }
    fn from_poly(p: &CouplingPoly) -> Result<Self, AlgebraError> {
        Ok(PLaurent::constant(TruncSeries::constant(C::from_poly(p)?)))
    }
}

impl PLaurent<Rat> {
    /// Evaluates at a point value `q`, e.g. an h-series or a local expansion.
    pub fn eval<A: PointValue>(&self, q: &A) -> Result<A, AlgebraError> {
        let (lo, hi) = match self.pole_bounds() {
            Some(b) => b,
            None => return Ok(A::from_h(&TruncSeries::zero_to(self.prec()))),
        };
        let mut acc = A::from_h(&TruncSeries::zero_to(self.prec()));
        if hi >= 0 {
            let mut pw = A::one();
            for k in 0..=hi {
                if k > 0 {
                    pw = pw.mul(q);
                }
                if k >= lo {
                    if let Some(s) = self.terms.get(&k) {
                        if !s.is_zero_known() {
                            acc = acc.add(&A::from_h(s).mul(&pw));
                        }
                    }
                }
            }
        }
        if lo < 0 {
            let qi = q.inv()?;
            let mut pw = A::one();
            for k in 1..=(-lo) {
                pw = pw.mul(&qi);
                if -k <= hi {
                    if let Some(s) = self.terms.get(&-k) {
                        if !s.is_zero_known() {
                            acc = acc.add(&A::from_h(s).mul(&pw));
                        }
                    }
                }
            }
        }
        Ok(acc)
    }

    /// Taylor coefficients of `self(a + eps)` for `eps^j`, `j < order`.
    /// Generalised binomials handle negative powers exactly.
    pub fn taylor(
        &self,
        a: &TruncSeries<Rat>,
        order: usize,
    ) -> Result<Vec<TruncSeries<Rat>>, AlgebraError> {
        let (lo, hi) = match self.pole_bounds() {
            Some(b) => b,
            None => return Ok(vec![TruncSeries::zero_to(self.prec()); order]),
        };
        // powers a^m for m in lo - order .. hi
        let ainv = if lo < 0 { Some(a.inv()?) } else { None };
        let mut powers: BTreeMap<i32, TruncSeries<Rat>> = BTreeMap::new();
        let mlo = lo - order as i32;
        let mut cur = TruncSeries::constant(Rat::one());
        powers.insert(0, cur.clone());
        for m in 1..=hi.max(0) {
            cur = cur.mul(a);
            powers.insert(m, cur.clone());
        }
        if mlo < 0 {
            let ai = ainv.clone().unwrap_or(a.inv()?);
            let mut c = TruncSeries::constant(Rat::one());
            for m in 1..=(-mlo) {
                c = c.mul(&ai);
                powers.insert(-m, c.clone());
            }
        }
        let mut out = Vec::with_capacity(order);
        for j in 0..order {
            let mut acc = TruncSeries::zero_to(self.prec());
            for (k, s) in &self.terms {
                if s.is_zero_known() {
                    continue;
                }
                let b = gen_binom(*k, j);
                if b.is_zero() {
                    continue;
                }
                let pw = &powers[&(k - j as i32)];
                acc = acc.add(&s.mul(pw).scale(&b));
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Local expansion `self(a + eps)` to `eps` order `order`.
    pub fn local(&self, a: &TruncSeries<Rat>, order: usize) -> Result<LocalSeries, AlgebraError> {
        let t = self.taylor(a, order)?;
        Ok(TruncSeries::new(0, t, order as i32))
    }

    /// `self(a + eps) - self(a)`: the constant slot is dropped exactly, so a
    /// pole at `a` is resolved without a truncated cancellation.
    pub fn local_difference(
        &self,
        a: &TruncSeries<Rat>,
        order: usize,
    ) -> Result<LocalSeries, AlgebraError> {
        let mut t = self.taylor(a, order)?;
        t[0] = TruncSeries::exact_zero();
        Ok(TruncSeries::new(0, t, order as i32))
    }
}

/// `k (k-1) ... (k-j+1) / j!` for any integer `k`.
pub fn gen_binom(k: i32, j: usize) -> Rat {
    let mut r = Rat::one();
    for i in 0..j {
        r *= Rat::from_integer(((k as i64) - i as i64).into());
        r /= Rat::from_integer(((i + 1) as i64).into());
    }
    r
}

/// Quotient of two `PLaurent` values.
#[derive(Clone, Debug, PartialEq)]
pub struct PRational {
    pub num: PLaurent<Rat>,
    pub den: PLaurent<Rat>,
}

/// Where a residue is taken.
#[derive(Clone, Debug)]
pub enum ResiduePoint {
    Zero,
    Infinity,
    Finite(TruncSeries<Rat>),
}

impl PRational {
    pub fn new(num: PLaurent<Rat>, den: PLaurent<Rat>) -> Result<Self, AlgebraError> {
        if den.is_zero_known() {
            return Err(AlgebraError::DivisionByZeroSeries);
        }
        Ok(PRational { num, den })
    }

    pub fn from_laurent(num: PLaurent<Rat>) -> Self {
        PRational {
            num,
            den: PLaurent::constant(TruncSeries::constant(Rat::one())),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        PRational {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    pub fn neg(&self) -> Self {
        PRational {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        PRational {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
    }

    pub fn div(&self, o: &Self) -> Result<Self, AlgebraError> {
        PRational::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn eval<A: PointValue>(&self, q: &A) -> Result<A, AlgebraError> {
        let n = self.num.eval(q)?;
        let d = self.den.eval(q)?;
        Ok(n.mul(&d.inv()?))
    }
}

fn leading_index(cs: &[TruncSeries<Rat>]) -> Option<usize> {
    cs.iter().position(|s| !s.is_zero_known())
}

/// Coefficient of `eps^target` in `num / den`, both given by coefficient lists
/// starting at `eps^0`. Leading slots of `den` that vanish to their known
/// precision are treated as zero and cap the validity of the result.
fn quotient_coeff(
    num: &[TruncSeries<Rat>],
    den: &[TruncSeries<Rat>],
    shift: i32,
    target: i32,
) -> Result<TruncSeries<Rat>, AlgebraError> {
    let m = leading_index(den).ok_or_else(|| {
        AlgebraError::TruncationTooShort("denominator vanishes at every computed order".into())
    })?;
    let mut cap = EXACT;
    for s in &den[..m] {
        if !s.is_exact() {
            cap = cap.min(s.prec() - 2 * den[m].valuation().unwrap_or(0));
        }
    }
    // num/den = eps^{-m} * N(eps) / D'(eps); need N/D' coefficient of eps^{target + m - shift}
    let want = target + m as i32 - shift;
    if want < 0 {
        return Ok(TruncSeries::exact_zero());
    }
    let want = want as usize;
    if num.len() <= want || den.len() <= m + want {
        return Err(AlgebraError::TruncationTooShort(format!(
            "local expansion needs order {} in the local variable",
            m + want + 1
        )));
    }
    let n: LocalSeries = TruncSeries::new(0, num[..=want].to_vec(), want as i32 + 1);
    let d: LocalSeries = TruncSeries::new(0, den[m..=m + want].to_vec(), want as i32 + 1);
    let q = n.mul(&d.inv()?);
    let c = q
        .coeff(want as i32)
        .ok_or_else(|| AlgebraError::TruncationTooShort("quotient".into()))?;
    Ok(c.truncate(cap))
}

/// Residue of `f(q) dq` at `point`. At infinity the orientation is such that
/// the residues of a rational differential sum to zero.
pub fn residue_at(f: &PRational, point: &ResiduePoint) -> Result<TruncSeries<Rat>, AlgebraError> {
    match point {
        ResiduePoint::Finite(a) => {
            let (nlo, nhi) = f.num.pole_bounds().unwrap_or((0, 0));
            let (dlo, dhi) = f
                .den
                .pole_bounds()
                .ok_or(AlgebraError::DivisionByZeroSeries)?;
            let full = ((nhi - nlo).max(0) + (dhi - dlo).max(0) + 4) as usize;
            // low-order poles are the common case; grow the expansion on demand
            let mut order = 4.min(full);
            loop {
                let n = f.num.taylor(a, order)?;
                let d = f.den.taylor(a, order)?;
                match quotient_coeff(&n, &d, 0, -1) {
                    Err(AlgebraError::TruncationTooShort(_)) if order < full => {
                        order = (2 * order).min(full)
                    }
                    r => return r,
                }
            }
        }
        ResiduePoint::Zero => {
            let (nlo, nhi) = match f.num.pole_bounds() {
                Some(b) => b,
                None => return Ok(TruncSeries::zero_to(f.num.prec())),
            };
            let (dlo, dhi) = f
                .den
                .pole_bounds()
                .ok_or(AlgebraError::DivisionByZeroSeries)?;
            let n: Vec<_> = (nlo..=nhi).map(|k| coeff_or_zero(&f.num, k)).collect();
            let d: Vec<_> = (dlo..=dhi).map(|k| coeff_or_zero(&f.den, k)).collect();
            quotient_coeff(&pad(n, d.len()), &pad(d, 0), nlo - dlo, -1)
        }
        ResiduePoint::Infinity => {
            // t = 1/q, f dq = -f(1/t) dt / t^2
            let (nlo, nhi) = match f.num.pole_bounds() {
                Some(b) => b,
                None => return Ok(TruncSeries::zero_to(f.num.prec())),
            };
            let (dlo, dhi) = f
                .den
                .pole_bounds()
                .ok_or(AlgebraError::DivisionByZeroSeries)?;
            let n: Vec<_> = (nlo..=nhi)
                .rev()
                .map(|k| coeff_or_zero(&f.num, k))
                .collect();
            let d: Vec<_> = (dlo..=dhi)
                .rev()
                .map(|k| coeff_or_zero(&f.den, k))
                .collect();
            // f = t^{dhi - nhi} N(t)/D(t); residue of f dq at q=inf is -[q^-1] f = -[t^1] f
            let c = quotient_coeff(&pad(n, d.len()), &pad(d, 0), dhi - nhi, 1)?;
            Ok(c.neg())
        }
    }
}

fn coeff_or_zero(p: &PLaurent<Rat>, k: i32) -> TruncSeries<Rat> {
    p.coeff(k).cloned().unwrap_or_else(TruncSeries::exact_zero)
}

fn pad(mut v: Vec<TruncSeries<Rat>>, extra: usize) -> Vec<TruncSeries<Rat>> {
    for _ in 0..extra + 8 {
        v.push(TruncSeries::exact_zero());
    }
    v
}

/// Coefficient of `eps^-1` in a local expansion.
pub fn residue_local(f: &LocalSeries) -> Result<TruncSeries<Rat>, AlgebraError> {
    f.coeff(-1).ok_or_else(|| {
        AlgebraError::TruncationTooShort("local expansion too short for residue".into())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat::{rat, rat_int};

    fn c(r: Rat) -> TruncSeries<Rat> {
        TruncSeries::constant(r)
    }

    fn poly(cs: &[(i32, i64)]) -> PLaurent<Rat> {
        let mut m = BTreeMap::new();
        for &(k, v) in cs {
            m.insert(k, c(rat_int(v)));
        }
        PLaurent::from_map(m)
    }

    #[test]
    fn simple_pole_residue() {
        // 1/(q - a) at q = a
        let a = rat(3, 2);
        let f = PRational::new(
            poly(&[(0, 1)]),
            PLaurent::from_map(
                [(1, c(rat_int(1))), (0, c(-a.clone()))]
                    .into_iter()
                    .collect(),
            ),
        )
        .unwrap();
        let r = residue_at(&f, &ResiduePoint::Finite(c(a))).unwrap();
        assert_eq!(r, c(rat_int(1)));
    }

    #[test]
    fn double_pole_at_zero_has_no_residue() {
        let f = PRational::new(poly(&[(0, 1)]), poly(&[(2, 1)])).unwrap();
        let r = residue_at(&f, &ResiduePoint::Zero).unwrap();
        assert!(r.is_zero_known());
    }

    #[test]
    fn residues_sum_to_zero() {
        // q / ((q-1)(q-2))
        let f = PRational::new(poly(&[(1, 1)]), poly(&[(2, 1), (1, -3), (0, 2)])).unwrap();
        let r1 = residue_at(&f, &ResiduePoint::Finite(c(rat_int(1)))).unwrap();
        let r2 = residue_at(&f, &ResiduePoint::Finite(c(rat_int(2)))).unwrap();
        let ri = residue_at(&f, &ResiduePoint::Infinity).unwrap();
        assert_eq!(r1, c(rat_int(-1)));
        assert_eq!(r2, c(rat_int(2)));
        assert_eq!(ri, c(rat_int(-1)));
        assert!(r1.add(&r2).add(&ri).is_zero_known());
    }

    #[test]
    fn eval_matches_local_constant_term() {
        let z = poly(&[(1, -1), (-1, -2)]).mul_series(&TruncSeries::var());
        let a = TruncSeries::from_terms(&[(-1, rat_int(3)), (1, rat_int(1))], 7);
        let direct = z.eval(&a).unwrap();
        let loc = z.local(&a, 3).unwrap();
        assert_eq!(loc.coeff(0).unwrap(), direct);
        let d = z.local_difference(&a, 3).unwrap();
        assert_eq!(d.valuation(), Some(1));
        assert_eq!(d.coeff(1).unwrap(), z.derivative().eval(&a).unwrap());
    }

    #[test]
    fn binomials() {
        assert_eq!(gen_binom(3, 2), rat_int(3));
        assert_eq!(gen_binom(-1, 3), rat_int(-1));
        assert_eq!(gen_binom(-2, 2), rat_int(3));
    }
}
