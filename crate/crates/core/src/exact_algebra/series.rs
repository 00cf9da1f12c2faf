//! Truncated Laurent series in one variable with tracked validity order.
//!
//! The variable is `h = T^{1/2}` for curve data. Nesting the type gives the
//! local expansions used for residues (`TruncSeries<TruncSeries<Rat>>`).

use std::fmt;

use num_traits::Zero;

use super::coeff::{Coeff, CoeffDomain};
use super::rat::Rat;
use super::AlgebraError;

/// Validity order marking an exact (finite) series.
pub const EXACT: i32 = 1 << 28;

fn clamp(p: i64) -> i32 {
    if p >= (EXACT / 2) as i64 {
        EXACT
    } else {
        p as i32
    }
}

/// Series `sum c_k x^k` known up to, not including, `x^prec`.
///
/// Invariants: `coeffs[0]` is nonzero when present, no stored exponent
/// reaches `prec`, trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<C> {
    val: i32,
    coeffs: Vec<C>,
    prec: i32,
}

impl<C: Coeff> TruncSeries<C> {
    pub fn new(val: i32, coeffs: Vec<C>, prec: i32) -> Self {
        let mut s = TruncSeries { val, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let keep = (self.prec as i64 - self.val as i64).max(0) as usize;
        if self.coeffs.len() > keep {
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.val = if self.prec >= EXACT { 0 } else { self.prec };
            }
            Some(k) => {
                if k > 0 {
                    self.coeffs.drain(..k);
                    self.val += k as i32;
                }
                while self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
                    self.coeffs.pop();
                }
            }
        }
    }

    /// Build from `(exponent, coefficient)` pairs.
    pub fn from_terms(terms: &[(i32, C)], prec: i32) -> Self {
        if terms.is_empty() {
            return Self::zero_to(prec);
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![C::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = slot.add(c);
        }
        Self::new(lo, coeffs, prec)
    }

    pub fn zero_to(prec: i32) -> Self {
        TruncSeries {
            val: if prec >= EXACT { 0 } else { prec },
            coeffs: Vec::new(),
            prec,
        }
    }

    pub fn exact_zero() -> Self {
        Self::zero_to(EXACT)
    }

    pub fn constant(c: C) -> Self {
        Self::new(0, vec![c], EXACT)
    }

    pub fn monomial(c: C, e: i32) -> Self {
        Self::new(e, vec![c], EXACT)
    }

    /// The variable itself, `x`.
    pub fn var() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn prec(&self) -> i32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    /// Smallest exponent with a known nonzero coefficient.
    pub fn valuation(&self) -> Option<i32> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Valuation, or the validity order when nothing nonzero is known.
    pub fn val_lower_bound(&self) -> i32 {
        if self.coeffs.is_empty() {
            self.prec
        } else {
            self.val
        }
    }

    /// Zero to the known precision.
    pub fn is_zero_known(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_exp(&self) -> Option<i32> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.val + self.coeffs.len() as i32 - 1)
        }
    }

    /// Coefficient of `x^e`; `None` beyond the validity order.
    pub fn coeff(&self, e: i32) -> Option<C> {
        if e >= self.prec {
            return None;
        }
        if e < self.val || self.coeffs.is_empty() {
            return Some(C::zero());
        }
        Some(
            self.coeffs
                .get((e - self.val) as usize)
                .cloned()
                .unwrap_or_else(C::zero),
        )
    }

    pub fn coeff_ref(&self, e: i32) -> Option<&C> {
        if e < self.val || e >= self.prec {
            return None;
        }
        self.coeffs.get((e - self.val) as usize)
    }

    /// Known nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &C)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.val + k as i32, c))
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.first()
    }

    pub fn truncate(&self, prec: i32) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::new(self.val, self.coeffs.clone(), prec)
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: i32) -> Self {
        TruncSeries {
            val: if self.coeffs.is_empty() && self.prec >= EXACT {
                0
            } else {
                self.val + k
            },
            coeffs: self.coeffs.clone(),
            prec: clamp(self.prec as i64 + k as i64),
        }
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            prec: self.prec,
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if Zero::is_zero(r) {
            return Self::zero_to(self.prec);
        }
        TruncSeries {
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect(),
            prec: self.prec,
        }
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        Self::new(
            self.val,
            self.coeffs.iter().map(|x| x.mul(c)).collect(),
            self.prec,
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        if self.coeffs.is_empty() {
            return o.truncate(prec);
        }
        if o.coeffs.is_empty() {
            return self.truncate(prec);
        }
        let lo = self.val.min(o.val);
        let hi = self
            .max_exp()
            .unwrap()
            .max(o.max_exp().unwrap())
            .min(prec - 1);
        if hi < lo {
            return Self::zero_to(prec);
        }
        let mut coeffs = vec![C::zero(); (hi - lo + 1) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            let e = self.val + k as i32;
            if e <= hi {
                coeffs[(e - lo) as usize] = c.clone();
            }
        }
        for (k, c) in o.coeffs.iter().enumerate() {
            let e = o.val + k as i32;
            if e <= hi {
                let slot = &mut coeffs[(e - lo) as usize];
                *slot = slot.add(c);
            }
        }
        Self::new(lo, coeffs, prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Product with validity `min(H1 + v2, H2 + v1)`.
    pub fn mul(&self, o: &Self) -> Self {
        let va = self.val_lower_bound() as i64;
        let vb = o.val_lower_bound() as i64;
        let prec = clamp((self.prec as i64 + vb).min(o.prec as i64 + va));
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Self::zero_to(prec);
        }
        let val = self.val + o.val;
        let full = self.coeffs.len() + o.coeffs.len() - 1;
        let n = ((prec as i64 - val as i64).max(0) as usize).min(full);
        let mut coeffs = vec![C::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= n || a.is_zero() {
                continue;
            }
            let lim = (n - i).min(o.coeffs.len());
            for (j, b) in o.coeffs[..lim].iter().enumerate() {
                coeffs[i + j].add_assign_mul(a, b);
            }
        }
        Self::new(val, coeffs, prec)
    }

    /// Inverse, capped at validity `cap` (needed when `self` is exact
    /// but not a monomial, where the true inverse is infinite).
    pub fn inv_to(&self, cap: i32) -> Result<Self, AlgebraError> {
        let lead = match self.coeffs.first() {
            Some(c) => c,
            None => {
                return Err(if self.prec >= EXACT {
                    AlgebraError::DivisionByZeroSeries
                } else {
                    AlgebraError::TruncationTooShort(format!(
                        "inverse of a series that vanishes to order {}",
                        self.prec
                    ))
                })
            }
        };
        let a0inv = lead.inv()?;
        let v = self.val;
        let natural = if self.prec >= EXACT && self.coeffs.len() == 1 {
            EXACT
        } else {
            clamp(self.prec as i64 - 2 * v as i64)
        };
        let prec = natural.min(cap);
        if prec >= EXACT && self.coeffs.len() > 1 {
            return Err(AlgebraError::UnboundedTruncation);
        }
        let n = if prec >= EXACT {
            1
        } else {
            (prec as i64 + v as i64).max(0) as usize
        };
        let mut b: Vec<C> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                b.push(a0inv.clone());
                continue;
            }
            let mut acc = C::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc.add_assign_mul(&self.coeffs[j], &b[k - j]);
            }
            b.push(acc.mul(&a0inv).neg());
        }
        Ok(Self::new(-v, b, prec))
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        self.inv_to(EXACT)
    }

    pub fn div(&self, o: &Self) -> Result<Self, AlgebraError> {
        // the quotient is never valid beyond prec(a) - val(b)
        let cap =
            clamp(self.prec as i64 - o.val_lower_bound() as i64 - self.val_lower_bound() as i64);
        Ok(self.mul(&o.inv_to(cap)?))
    }

    pub fn div_to(&self, o: &Self, cap: i32) -> Result<Self, AlgebraError> {
        let inner = clamp(cap as i64 - self.val_lower_bound() as i64);
        Ok(self.mul(&o.inv_to(inner)?).truncate(cap))
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::constant(C::one());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Integer power, negative exponents through the inverse.
    pub fn pow(&self, n: i32) -> Result<Self, AlgebraError> {
        if n >= 0 {
            Ok(self.powi(n as u32))
        } else {
            Ok(self.inv()?.powi((-n) as u32))
        }
    }

    /// Equal on every exponent below `order`; both must be valid that far.
    pub fn agrees_to(&self, o: &Self, order: i32) -> bool {
        if self.prec < order || o.prec < order {
            return false;
        }
        self.sub(o).truncate(order).is_zero_known()
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TruncSeries<D> {
        TruncSeries::new(self.val, self.coeffs.iter().map(f).collect(), self.prec)
    }

    /// Formal derivative in the series variable.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.scale(&Rat::from_integer(((self.val + k as i32) as i64).into())))
            .collect();
        Self::new(self.val - 1, coeffs, clamp(self.prec as i64 - 1))
    }

    /// Canonical text, e.g. `-1*h^1 + 2/3*h^3 + O(h^7)`.
    pub fn render(&self, var: &str) -> String {
        let mut parts: Vec<String> = self
            .terms()
            .map(|(e, c)| format!("({})*{}^{}", c.render(), var, e))
            .collect();
        if !self.is_exact() {
            parts.push(format!("O({}^{})", var, self.prec));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl<C: Coeff> fmt::Display for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("h"))
    }
}

/// Lets series themselves serve as coefficients of a second series variable.
impl<C: Coeff> Coeff for TruncSeries<C> {
    fn zero() -> Self {
        Self::exact_zero()
    }
    fn one() -> Self {
        Self::constant(C::one())
    }
    fn from_rat(r: &Rat) -> Self {
        Self::constant(C::from_rat(r))
    }
    fn is_zero(&self) -> bool {
        self.is_zero_known()
    }
    fn add(&self, o: &Self) -> Self {
        TruncSeries::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        TruncSeries::sub(self, o)
    }
    fn neg(&self) -> Self {
        TruncSeries::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        TruncSeries::mul(self, o)
    }
    fn scale(&self, r: &Rat) -> Self {
        TruncSeries::scale(self, r)
    }
    fn inv(&self) -> Result<Self, AlgebraError> {
        TruncSeries::inv(self)
    }
    fn as_rat(&self) -> Option<Rat> {
        if !self.is_exact() {
            return None;
        }
        match self.coeffs.len() {
            0 => Some(<Rat as Zero>::zero()),
            1 if self.val == 0 => self.coeffs[0].as_rat(),
            _ => None,
        }
    }
    fn render(&self) -> String {
        TruncSeries::render(self, "h")
    }
    fn domain() -> CoeffDomain {
        C::domain()
    }
    fn from_poly(p: &super::poly::CouplingPoly) -> Result<Self, AlgebraError> {
        Ok(Self::constant(C::from_poly(p)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat::{rat, rat_int};

    type S = TruncSeries<Rat>;

    fn s(terms: &[(i32, i64)], prec: i32) -> S {
        S::from_terms(
            &terms
                .iter()
                .map(|&(e, c)| (e, rat_int(c)))
                .collect::<Vec<_>>(),
            prec,
        )
    }

    #[test]
    fn geometric_series() {
        let num = s(&[(0, 1), (1, 1)], EXACT);
        let den = s(&[(0, 1), (1, -1)], EXACT);
        let q = num.mul(&den.inv_to(8).unwrap());
        assert_eq!(q.prec(), 8);
        assert_eq!(q.coeff(0), Some(rat_int(1)));
        for e in 1..8 {
            assert_eq!(q.coeff(e), Some(rat_int(2)));
        }
        assert_eq!(q.coeff(8), None);
    }

    #[test]
    fn identity_and_precision_rule() {
        let a = s(&[(-1, 3), (2, 5)], 6);
        assert_eq!(a.mul(&S::constant(rat_int(1))), a);
        let b = s(&[(2, 1), (3, 4)], 9);
        // min(6 + 2, 9 - 1)
        assert_eq!(a.mul(&b).prec(), 8);
    }

    #[test]
    fn square_of_gaussian_layer() {
        // coefficient series of -h(p + 2/p) at the p^1 slot, squared at the p^2 slot
        let c = s(&[(1, -1)], EXACT);
        assert_eq!(c.mul(&c), s(&[(2, 1)], EXACT));
    }

    #[test]
    fn inverse_shifts_valuation() {
        let g = s(&[(1, -1), (3, 2)], 9);
        let gi = g.inv().unwrap();
        assert_eq!(gi.valuation(), Some(-1));
        assert_eq!(gi.prec(), 9 - 2);
        assert!(g.mul(&gi).agrees_to(&S::constant(rat_int(1)), 6));
    }

    #[test]
    fn zero_and_errors() {
        assert!(matches!(
            S::exact_zero().inv(),
            Err(AlgebraError::DivisionByZeroSeries)
        ));
        assert!(matches!(
            S::zero_to(4).inv(),
            Err(AlgebraError::TruncationTooShort(_))
        ));
        assert!(matches!(
            s(&[(0, 1), (1, 1)], EXACT).inv(),
            Err(AlgebraError::UnboundedTruncation)
        ));
        let p = S::zero_to(5);
        assert!(p.is_zero_known());
        assert_eq!(p.coeff(4), Some(rat_int(0)));
        assert_eq!(p.coeff(5), None);
    }

    #[test]
    fn derivative_and_shift() {
        let a = s(&[(-2, 1), (1, 3)], 5);
        let d = a.derivative();
        assert_eq!(d.coeff(-3), Some(rat_int(-2)));
        assert_eq!(d.coeff(0), Some(rat_int(3)));
        assert_eq!(d.prec(), 4);
        assert_eq!(a.shift(2).coeff(3), Some(rat_int(3)));
        assert_eq!(a.scale(&rat(1, 3)).coeff(1), Some(rat_int(1)));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::exact_algebra::{rat, rat_int, Rat};
    use proptest::prelude::*;

    type S = TruncSeries<Rat>;

    fn series(cs: &[i64], den: i64) -> S {
        let terms: Vec<(i32, Rat)> = cs
            .iter()
            .enumerate()
            .map(|(i, c)| (i as i32, rat(*c, den)))
            .collect();
        S::from_terms(&terms, 6)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn ring_axioms(a in prop::collection::vec(-6i64..6, 4),
                       b in prop::collection::vec(-6i64..6, 4),
                       c in prop::collection::vec(-6i64..6, 4)) {
            let (x, y, z) = (series(&a, 2), series(&b, 3), series(&c, 5));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            if a[0] != 0 {
                let one = x.mul(&x.inv().unwrap());
                prop_assert!(one.agrees_to(&S::constant(rat_int(1)), 6));
            }
        }
    }
}
