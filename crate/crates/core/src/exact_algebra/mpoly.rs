//! Sparse Laurent polynomials in spectral variables `x_1..x_N` with
//! coefficients from any domain.

use std::collections::BTreeMap;

use super::coeff::Coeff;
use super::rat::Rat;
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<C> {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, C>,
}

impl<C: Coeff> MPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, C::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, e: Vec<i32>, c: C) {
        debug_assert_eq!(e.len(), self.nvars);
        let v = match self.terms.remove(&e) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(e, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rat) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.scale(r));
        }
        out
    }

    pub fn mul_coeff(&self, k: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.mul(k));
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e: Vec<i32> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(e, x.mul(y));
            }
        }
        out
    }

    /// Largest exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Keeps terms with non-negative exponent in every designated variable.
    pub fn pol_extract(&self, vars: &[usize]) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| vars.iter().all(|&v| e[v] >= 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Evaluates at values of any ring that coefficients lift into.
    pub fn eval<A: Coeff>(&self, vals: &[A], lift: impl Fn(&C) -> A) -> Result<A, AlgebraError> {
        let mut cache: BTreeMap<(usize, i32), A> = BTreeMap::new();
        let mut acc = A::zero();
        for (e, c) in &self.terms {
            let mut t = lift(c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !cache.contains_key(&(i, k)) {
                    let base = if k > 0 {
                        vals[i].clone()
                    } else {
                        vals[i].inv()?
                    };
                    let mut p = base.clone();
                    for _ in 1..k.unsigned_abs() {
                        p = p.mul(&base);
                    }
                    cache.insert((i, k), p);
                }
                t = t.mul(&cache[&(i, k)]);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    pub fn render(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k != 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            names[i].to_string()
                        } else {
                            format!("{}^{}", names[i], k)
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    format!("({})", c.render())
                } else {
                    format!("({})*{}", c.render(), mono.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat::rat_int;

    #[test]
    fn pol_drops_negative_powers() {
        let mut p = MPoly::<Rat>::zero(1);
        p.add_term(vec![2], rat_int(1));
        p.add_term(vec![-1], rat_int(1));
        let mut want = MPoly::zero(1);
        want.add_term(vec![2], rat_int(1));
        assert_eq!(p.pol_extract(&[0]), want);
        let mut r = MPoly::<Rat>::zero(1);
        r.add_term(vec![-1], rat_int(1));
        r.add_term(vec![-3], rat_int(4));
        assert!(r.pol_extract(&[0]).is_zero());
    }

    #[test]
    fn eval_and_product() {
        let x = MPoly::<Rat>::var(2, 0);
        let y = MPoly::<Rat>::var(2, 1);
        let p = x.add(&y).mul(&x.sub(&y));
        let v = p.eval(&[rat_int(3), rat_int(2)], |c| c.clone()).unwrap();
        assert_eq!(v, rat_int(5));
        assert_eq!(p.degree_in(1), Some(2));
    }
}
