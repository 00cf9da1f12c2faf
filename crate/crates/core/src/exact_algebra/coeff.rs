//! Coefficient domains shared by every series type.

use std::fmt::Debug;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::CouplingPoly;
use super::rat::{render_rat, Rat};
use super::ratfunc::RatFunc;
use super::AlgebraError;

/// Which coefficient ring a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffDomain {
    /// Exact polynomials in the couplings.
    Poly,
    /// Reduced quotients of coupling polynomials.
    Frac,
    /// Couplings instantiated at rationals.
    Num,
}

impl CoeffDomain {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "poly" => Some(CoeffDomain::Poly),
            "frac" => Some(CoeffDomain::Frac),
            "num" => Some(CoeffDomain::Num),
            _ => None,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            CoeffDomain::Poly => "poly",
            CoeffDomain::Frac => "frac",
            CoeffDomain::Num => "num",
        }
    }
}

/// Exact commutative ring with a partial inverse.
pub trait Coeff: Clone + Debug + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rat(r: &Rat) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, r: &Rat) -> Self;
    /// Multiplicative inverse; POLY values other than nonzero constants are not units.
    fn inv(&self) -> Result<Self, AlgebraError>;
    fn as_rat(&self) -> Option<Rat>;
    fn render(&self) -> String;
    fn domain() -> CoeffDomain;

    /// Lifts a coupling polynomial; numeric domains accept constants only.
    fn from_poly(p: &CouplingPoly) -> Result<Self, AlgebraError> {
        p.as_constant()
            .map(|c| Self::from_rat(&c))
            .ok_or_else(|| AlgebraError::NonConstant(p.render()))
    }

    fn add_assign_mul(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }

    fn is_one(&self) -> bool {
        self.as_rat().map(|r| One::is_one(&r)).unwrap_or(false)
    }
}

impl Coeff for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, r: &Rat) -> Self {
        self * r
    }
    fn inv(&self) -> Result<Self, AlgebraError> {
        if Zero::is_zero(self) {
            Err(AlgebraError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn as_rat(&self) -> Option<Rat> {
        Some(self.clone())
    }
    fn render(&self) -> String {
        render_rat(self)
    }
    fn domain() -> CoeffDomain {
        CoeffDomain::Num
    }
    fn add_assign_mul(&mut self, a: &Self, b: &Self) {
        if !Zero::is_zero(a) && !Zero::is_zero(b) {
            *self += a * b;
        }
    }
}

impl Coeff for CouplingPoly {
    fn zero() -> Self {
        CouplingPoly::zero()
    }
    fn one() -> Self {
        CouplingPoly::one()
    }
    fn from_rat(r: &Rat) -> Self {
        CouplingPoly::constant(r.clone())
    }
    fn is_zero(&self) -> bool {
        CouplingPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        CouplingPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        CouplingPoly::sub(self, o)
    }
    fn neg(&self) -> Self {
        CouplingPoly::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        CouplingPoly::mul(self, o)
    }
    fn scale(&self, r: &Rat) -> Self {
        CouplingPoly::scale(self, r)
    }
    fn inv(&self) -> Result<Self, AlgebraError> {
        match self.as_constant() {
            Some(c) if !Zero::is_zero(&c) => Ok(CouplingPoly::constant(c.recip())),
            Some(_) => Err(AlgebraError::DivisionByZero),
            None => Err(AlgebraError::NonInvertibleLeading(self.render())),
        }
    }
    fn as_rat(&self) -> Option<Rat> {
        self.as_constant()
    }
    fn render(&self) -> String {
        CouplingPoly::render(self)
    }
    fn domain() -> CoeffDomain {
        CoeffDomain::Poly
    }
    fn from_poly(p: &CouplingPoly) -> Result<Self, AlgebraError> {
        Ok(p.clone())
    }
}

impl Coeff for RatFunc {
    fn zero() -> Self {
        RatFunc::from_poly(CouplingPoly::zero())
    }
    fn one() -> Self {
        RatFunc::from_poly(CouplingPoly::one())
    }
    fn from_rat(r: &Rat) -> Self {
        RatFunc::from_poly(CouplingPoly::constant(r.clone()))
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }
    fn scale(&self, r: &Rat) -> Self {
        RatFunc::mul(self, &RatFunc::from_rat(r))
    }
    fn inv(&self) -> Result<Self, AlgebraError> {
        RatFunc::inv(self)
    }
    fn as_rat(&self) -> Option<Rat> {
        self.as_poly().and_then(|p| p.as_constant())
    }
    fn render(&self) -> String {
        RatFunc::render(self)
    }
    fn domain() -> CoeffDomain {
        CoeffDomain::Frac
    }
    fn from_poly(p: &CouplingPoly) -> Result<Self, AlgebraError> {
        Ok(RatFunc::from_poly(p.clone()))
    }
}
