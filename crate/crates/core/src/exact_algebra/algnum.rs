//! Elements of `Q[t]/(m(t))` for a monic squarefree modulus `m`.
//!
//! Rational constants carry no modulus and combine with any field, so the
//! type fits the `Coeff` interface without a global context.

use std::sync::Arc;

use super::coeff::{Coeff, CoeffDomain};
use super::rat::{render_rat, Rat};
use super::upoly;
use super::AlgebraError;

#[derive(Clone, Debug)]
pub struct AlgNum {
    modulus: Option<Arc<Vec<Rat>>>,
    c: Vec<Rat>,
}

impl AlgNum {
    pub fn rational(r: Rat) -> Self {
        AlgNum {
            modulus: None,
            c: upoly::trim(vec![r]),
        }
    }

    /// The class of `t` modulo `m`; `m` is made monic.
    pub fn generator(m: &[Rat]) -> Self {
        let m = Arc::new(upoly::monic(m));
        let mut a = AlgNum {
            modulus: Some(m),
            c: vec![Rat::zero(), Rat::one()],
        };
        a.reduce();
        a
    }

    pub fn modulus(&self) -> Option<&[Rat]> {
        self.modulus.as_deref().map(|v| v.as_slice())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    fn reduce(&mut self) {
        if let Some(m) = &self.modulus {
            if upoly::degree(&self.c)
                .map(|d| d >= m.len() - 1)
                .unwrap_or(false)
            {
                self.c = upoly::divrem(&self.c, m).1;
            }
        }
        self.c = upoly::trim(std::mem::take(&mut self.c));
    }

    fn join(&self, o: &Self) -> Option<Arc<Vec<Rat>>> {
        match (&self.modulus, &o.modulus) {
            (Some(a), Some(b)) => {
                debug_assert_eq!(a, b, "mixing elements of different number fields");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    fn make(modulus: Option<Arc<Vec<Rat>>>, c: Vec<Rat>) -> Self {
        let mut a = AlgNum { modulus, c };
        a.reduce();
        a
    }

    /// Trace of the element over Q.
    pub fn trace(&self) -> Rat {
        match &self.modulus {
            None => self.c.first().cloned().unwrap_or_else(Rat::zero),
            Some(m) => {
                let d = m.len() - 1;
                let mut tr = Rat::zero();
                // trace = sum_i [t^i coefficient of a * t^i]
                let mut basis = vec![Rat::one()];
                for i in 0..d {
                    let prod = upoly::divrem(&upoly::mul(&self.c, &basis), m).1;
                    if let Some(x) = prod.get(i) {
                        tr += x;
                    }
                    basis.insert(0, Rat::zero());
                }
                tr
            }
        }
    }
}

impl PartialEq for AlgNum {
    fn eq(&self, o: &Self) -> bool {
        if self.c != o.c {
            return false;
        }
        match (&self.modulus, &o.modulus) {
            (Some(a), Some(b)) => a == b || self.c.len() <= 1,
            _ => true,
        }
    }
}

impl Coeff for AlgNum {
    fn zero() -> Self {
        AlgNum {
            modulus: None,
            c: Vec::new(),
        }
    }
    fn one() -> Self {
        AlgNum::rational(Rat::one())
    }
    fn from_rat(r: &Rat) -> Self {
        AlgNum::rational(r.clone())
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut c = vec![Rat::zero(); n];
        for (i, x) in self.c.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in o.c.iter().enumerate() {
            c[i] += x;
        }
        AlgNum::make(self.join(o), c)
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn neg(&self) -> Self {
        AlgNum {
            modulus: self.modulus.clone(),
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        AlgNum::make(self.join(o), upoly::mul(&self.c, &o.c))
    }
    fn scale(&self, r: &Rat) -> Self {
        AlgNum::make(self.modulus.clone(), self.c.iter().map(|x| x * r).collect())
    }
    fn inv(&self) -> Result<Self, AlgebraError> {
        if self.c.is_empty() {
            return Err(AlgebraError::DivisionByZero);
        }
        let Some(m) = &self.modulus else {
            return Ok(AlgNum::rational(self.c[0].recip()));
        };
        // extended Euclid: s * a + t * m = g
        let (mut r0, mut r1) = (m.as_ref().clone(), self.c.clone());
        let (mut s0, mut s1) = (Vec::<Rat>::new(), vec![Rat::one()]);
        while upoly::degree(&r1).is_some() {
            let (q, r) = upoly::divrem(&r0, &r1);
            let s = upoly::sub(&s0, &upoly::mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if upoly::degree(&r0) != Some(0) {
            return Err(AlgebraError::NonInvertibleLeading(format!(
                "{} is a zero divisor modulo a reducible polynomial",
                self.render()
            )));
        }
        let k = r0[0].recip();
        Ok(AlgNum::make(
            Some(m.clone()),
            s0.iter().map(|x| x * &k).collect(),
        ))
    }
    fn as_rat(&self) -> Option<Rat> {
        match self.c.len() {
            0 => Some(Rat::zero()),
            1 => Some(self.c[0].clone()),
            _ => None,
        }
    }
    fn render(&self) -> String {
        if self.c.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k, x)| match k {
                0 => render_rat(x),
                1 => format!("{}*t", render_rat(x)),
                _ => format!("{}*t^{}", render_rat(x), k),
            })
            .collect();
        parts.join(" + ")
    }
    fn domain() -> CoeffDomain {
        CoeffDomain::Num
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat::rat_int;

    #[test]
    fn sqrt_two_arithmetic() {
        let t = AlgNum::generator(&[rat_int(-2), rat_int(0), rat_int(1)]);
        assert_eq!(t.mul(&t), AlgNum::rational(rat_int(2)));
        let a = t.add(&AlgNum::one());
        let ai = a.inv().unwrap();
        assert_eq!(a.mul(&ai), AlgNum::one());
        assert_eq!(a.trace(), rat_int(2));
    }
}
