//! Rational functions in the couplings, kept in lowest terms.

use num_traits::{One, Signed, Zero};

use super::poly::{CouplingPoly, Mono};
use super::rat::Rat;
use super::AlgebraError;

fn max_var(p: &CouplingPoly) -> Option<usize> {
    p.terms()
        .filter_map(|(m, _)| m.exps().iter().rposition(|&e| e > 0))
        .max()
}

/// Content with respect to variable `v`: the gcd of its coefficients.
fn content_in(p: &CouplingPoly, v: usize) -> CouplingPoly {
    let mut g = CouplingPoly::zero();
    for c in p.coeffs_in(v) {
        if !c.is_zero() {
            g = poly_gcd(&g, &c);
            if g.as_constant().is_some() {
                return CouplingPoly::one();
            }
        }
    }
    g
}

/// Pseudo-remainder of `a` by `b` as polynomials in `v`.
fn prem(a: &CouplingPoly, b: &CouplingPoly, v: usize) -> CouplingPoly {
    let db = b.degree_in(v);
    let bc = b.coeffs_in(v);
    let lb = bc[db as usize].clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.coeffs_in(v)[dr as usize].clone();
        let mut ex = vec![0u32; v + 1];
        ex[v] = dr - db;
        let shift = Mono::new(ex);
        r = r.mul(&lb).sub(&b.mul(&lr).mul_mono(&shift, &Rat::one()));
    }
    r
}

/// Makes the grlex-leading coefficient one.
pub fn monic(p: &CouplingPoly) -> CouplingPoly {
    match p.leading() {
        None => CouplingPoly::zero(),
        Some((_, c)) => {
            let inv = Rat::one() / c;
            p.scale(&inv)
        }
    }
}

/// Greatest common divisor over Q, normalised to be monic.
pub fn poly_gcd(a: &CouplingPoly, b: &CouplingPoly) -> CouplingPoly {
    if a.is_zero() {
        return monic(b);
    }
    if b.is_zero() {
        return monic(a);
    }
    let v = match (max_var(a), max_var(b)) {
        (None, _) | (_, None) => return CouplingPoly::one(),
        (Some(x), Some(y)) => x.max(y),
    };
    if a.degree_in(v) == 0 {
        return poly_gcd(a, &content_in(b, v));
    }
    if b.degree_in(v) == 0 {
        return poly_gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = poly_gcd(&ca, &cb);
    let mut r0 = a.div_exact(&ca).expect("content divides");
    let mut r1 = b.div_exact(&cb).expect("content divides");
    if r0.degree_in(v) < r1.degree_in(v) {
        std::mem::swap(&mut r0, &mut r1);
    }
    loop {
        let r = prem(&r0, &r1, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            r1 = CouplingPoly::one();
            break;
        }
        let cr = content_in(&r, v);
        r0 = r1;
        r1 = r.div_exact(&cr).expect("content divides");
    }
    let pp = {
        let cr = content_in(&r1, v);
        r1.div_exact(&cr).expect("content divides")
    };
    monic(&pp.mul(&c))
}

/// Quotient of coupling polynomials with `gcd(num, den) = 1` and a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: CouplingPoly,
    den: CouplingPoly,
}

impl RatFunc {
    pub fn new(num: CouplingPoly, den: CouplingPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::from_poly(CouplingPoly::zero()));
        }
        let g = poly_gcd(&num, &den);
        let mut n = num.div_exact(&g).expect("gcd divides");
        let mut d = den.div_exact(&g).expect("gcd divides");
        let lc = d.leading().map(|(_, c)| c.clone()).unwrap();
        if !lc.is_one() {
            let inv = Rat::one() / lc;
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: CouplingPoly) -> Self {
        RatFunc {
            num: p,
            den: CouplingPoly::one(),
        }
    }

    pub fn num(&self) -> &CouplingPoly {
        &self.num
    }

    pub fn den(&self) -> &CouplingPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value when the denominator is trivial.
    pub fn as_poly(&self) -> Option<CouplingPoly> {
        if self.den.as_constant().map(|c| c.is_one()).unwrap_or(false) {
            Some(self.num.clone())
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .unwrap()
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn eval(&self, vals: &[Rat]) -> Result<Rat, AlgebraError> {
        let d = self.den.eval(vals);
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.num.eval(vals) / d)
    }

    pub fn render(&self) -> String {
        match self.as_poly() {
            Some(p) => p.render(),
            None => format!("({})/({})", self.num.render(), self.den.render()),
        }
    }

    /// Sign normalisation check used by the invariant tests.
    pub fn is_normalized(&self) -> bool {
        !self.den.is_zero()
            && self
                .den
                .leading()
                .map(|(_, c)| c.is_one() && !c.is_negative())
                .unwrap_or(false)
            && poly_gcd(&self.num, &self.den).as_constant().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat::rat;

    fn g(i: usize) -> CouplingPoly {
        CouplingPoly::var(i)
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let common = g(0).mul(&g(1)).add(&g(2)).add(&CouplingPoly::one());
        let a = common.mul(&g(0).sub(&g(1)));
        let b = common.mul(&g(2).scale(&rat(3, 1)).add(&g(1).mul(&g(1))));
        assert_eq!(poly_gcd(&a, &b), monic(&common));
        assert_eq!(poly_gcd(&g(0), &g(1)), CouplingPoly::one());
    }

    #[test]
    fn ratfunc_reduces() {
        let a = g(0).add(&g(1));
        let r = RatFunc::new(a.mul(&g(2)), a.mul(&g(0)).scale(&rat(-2, 1))).unwrap();
        assert_eq!(r.den(), &g(0));
        assert_eq!(r.num(), &g(2).scale(&rat(-1, 2)));
        assert!(r.is_normalized());
        let back = r.mul(&RatFunc::from_poly(g(0)));
        assert_eq!(back.as_poly(), Some(g(2).scale(&rat(-1, 2))));
    }
}
