use super::CurveError;
use crate::exact_algebra::linalg;
use crate::exact_algebra::{Coeff, CouplingPoly, Rat};

/// `V'(x) = sum_i coeffs[i] x^(i+1)`; the first entry is the quadratic
/// coupling and must be a nonzero number.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialSpec {
    coeffs: Vec<CouplingPoly>,
}

impl PotentialSpec {
    pub fn new(coeffs: Vec<CouplingPoly>) -> Result<Self, CurveError> {
        let Some(q) = coeffs.first() else {
            return Err(CurveError::InvalidModel("empty potential".into()));
        };
        match q.as_constant() {
            Some(c) if !num_traits::Zero::is_zero(&c) => {}
            _ => {
                return Err(CurveError::InvalidModel(format!(
                    "quadratic coupling {} must be a nonzero rational",
                    q.render()
                )))
            }
        }
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Ok(PotentialSpec { coeffs })
    }

    /// Degree of `V'`.
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn quadratic(&self) -> Rat {
        self.coeffs[0]
            .as_constant()
            .expect("checked at construction")
    }

    pub fn coeffs(&self) -> &[CouplingPoly] {
        &self.coeffs
    }

    /// `V'(x)` in any ring the couplings lift into.
    pub fn derivative_at<A: Coeff>(&self, x: &A) -> Result<A, CurveError> {
        let mut acc = A::from_poly(&self.coeffs[self.coeffs.len() - 1])?;
        for c in self.coeffs[..self.coeffs.len() - 1].iter().rev() {
            acc = acc.mul(x).add(&A::from_poly(c)?);
        }
        Ok(acc.mul(x))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainModel {
    potentials: Vec<PotentialSpec>,
    /// `c[k]` couples matrices `k` and `k+1` (0-based).
    c: Vec<Rat>,
}

impl ChainModel {
    pub fn new(potentials: Vec<PotentialSpec>, c: Vec<Rat>) -> Result<Self, CurveError> {
        if potentials.len() < 2 {
            return Err(CurveError::InvalidModel(
                "a chain needs at least two matrices".into(),
            ));
        }
        if c.len() + 1 != potentials.len() {
            return Err(CurveError::InvalidModel(format!(
                "{} matrices need {} couplings, got {}",
                potentials.len(),
                potentials.len() - 1,
                c.len()
            )));
        }
        if c.iter().any(num_traits::Zero::is_zero) {
            return Err(CurveError::InvalidModel(
                "chain couplings must be nonzero".into(),
            ));
        }
        let m = ChainModel { potentials, c };
        m.propagator()?;
        Ok(m)
    }

    /// Cubic chain with quadratic couplings `g2` and symbolic cubic couplings
    /// `g1..gN` (variable k is the cubic coupling of matrix k).
    pub fn cubic(g2: &[Rat], c: &[Rat]) -> Result<Self, CurveError> {
        let pots = g2
            .iter()
            .enumerate()
            .map(|(k, q)| {
                PotentialSpec::new(vec![
                    CouplingPoly::constant(q.clone()),
                    CouplingPoly::var(k),
                ])
            })
            .collect::<Result<Vec<_>, _>>()?;
        ChainModel::new(pots, c.to_vec())
    }

    /// The three-matrix cubic model with quadratic couplings (1, 3, 1).
    pub fn cubic_chain() -> Self {
        let r = |n: i64| Rat::from_integer(n.into());
        ChainModel::cubic(&[r(1), r(3), r(1)], &[r(1), r(1)]).expect("valid model")
    }

    /// The two-matrix cubic degeneration with quadratic couplings (1, 2).
    pub fn two_matrix_cubic() -> Self {
        let r = |n: i64| Rat::from_integer(n.into());
        ChainModel::cubic(&[r(1), r(2)], &[r(1)]).expect("valid model")
    }

    pub fn n_chain(&self) -> usize {
        self.potentials.len()
    }

    pub fn potentials(&self) -> &[PotentialSpec] {
        &self.potentials
    }

    pub fn potential(&self, k: usize) -> &PotentialSpec {
        &self.potentials[k]
    }

    pub fn couplings(&self) -> &[Rat] {
        &self.c
    }

    /// Coupling between `k` and `k+1`; the closing `c_{N,N+1}` is 1.
    pub fn c(&self, k: usize) -> Rat {
        self.c.get(k).cloned().unwrap_or_else(<Rat as Coeff>::one)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.potentials.iter().map(|p| p.degree()).collect()
    }

    /// `s_k = prod_{i<k} d_i`, the pole order of `z_k` at `p = infinity`.
    pub fn s(&self) -> Vec<usize> {
        let d = self.degrees();
        (0..d.len()).map(|k| d[..k].iter().product()).collect()
    }

    /// `r_k = prod_{i>k} d_i`, the pole order of `z_k` at `p = 0`.
    pub fn r(&self) -> Vec<usize> {
        let d = self.degrees();
        (0..d.len()).map(|k| d[k + 1..].iter().product()).collect()
    }

    /// Largest number of symbolic couplings referenced.
    pub fn nvars(&self) -> usize {
        self.potentials
            .iter()
            .flat_map(|p| p.coeffs.iter().map(|c| c.nvars()))
            .max()
            .unwrap_or(0)
    }

    /// Tridiagonal quadratic form: diagonal `g2`, off-diagonal `-c`.
    pub fn quadratic_form(&self) -> Vec<Vec<Rat>> {
        let n = self.n_chain();
        let mut m = vec![vec![<Rat as Coeff>::zero(); n]; n];
        for k in 0..n {
            m[k][k] = self.potentials[k].quadratic();
            if k + 1 < n {
                m[k][k + 1] = -self.c[k].clone();
                m[k + 1][k] = -self.c[k].clone();
            }
        }
        m
    }

    /// Inverse of the quadratic form.
    pub fn propagator(&self) -> Result<Vec<Vec<Rat>>, CurveError> {
        linalg::left_inverse(&self.quadratic_form())
            .map_err(|_| CurveError::InvalidModel("quadratic form is singular".into()))
    }

    /// Leading principal minors all positive.
    pub fn is_positive_definite(&self) -> bool {
        let m = self.quadratic_form();
        let n = m.len();
        // continuant recursion for tridiagonal minors
        let mut prev = <Rat as Coeff>::one();
        let mut cur = m[0][0].clone();
        if cur <= <Rat as Coeff>::zero() {
            return false;
        }
        for k in 1..n {
            let next = &m[k][k] * &cur - &m[k][k - 1] * &m[k][k - 1] * &prev;
            if next <= <Rat as Coeff>::zero() {
                return false;
            }
            prev = cur;
            cur = next;
        }
        true
    }

    /// Replaces every symbolic coupling by a number.
    pub fn instantiate(&self, vals: &[Rat]) -> ChainModel {
        let pots = self
            .potentials
            .iter()
            .map(|p| {
                let mut coeffs: Vec<CouplingPoly> = p
                    .coeffs
                    .iter()
                    .map(|c| CouplingPoly::constant(c.eval(vals)))
                    .collect();
                // a vanishing top coupling lowers the degree, and with it s and r
                while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
                    coeffs.pop();
                }
                PotentialSpec { coeffs }
            })
            .collect();
        ChainModel {
            potentials: pots,
            c: self.c.clone(),
        }
    }

    /// Multiplies every chain coupling by `sign`.
    pub fn with_coupling_sign(&self, sign: i32) -> ChainModel {
        let mut m = self.clone();
        if sign < 0 {
            for c in &mut m.c {
                *c = -c.clone();
            }
        }
        m
    }

    /// Keeps only the quadratic part of every potential.
    pub fn gaussian(&self) -> ChainModel {
        let pots = self
            .potentials
            .iter()
            .map(|p| PotentialSpec {
                coeffs: vec![p.coeffs[0].clone()],
            })
            .collect();
        ChainModel {
            potentials: pots,
            c: self.c.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat_int;

    #[test]
    fn cubic_propagator() {
        let m = ChainModel::cubic_chain();
        let g = m.propagator().unwrap();
        let want: Vec<Vec<Rat>> = [[2, 1, 1], [1, 1, 1], [1, 1, 2]]
            .iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect();
        assert_eq!(g, want);
        assert!(m.is_positive_definite());
        assert_eq!(m.s(), vec![1, 2, 4]);
        assert_eq!(m.r(), vec![4, 2, 1]);
    }

    #[test]
    fn flipped_sign_gives_printed_matrix() {
        let m = ChainModel::cubic_chain().with_coupling_sign(-1);
        let g = m.propagator().unwrap();
        assert_eq!(g[0][1], rat_int(-1));
        assert_eq!(g[0][2], rat_int(1));
    }

    #[test]
    fn rejects_symbolic_quadratic() {
        let e = PotentialSpec::new(vec![CouplingPoly::var(0)]).unwrap_err();
        assert!(matches!(e, CurveError::InvalidModel(_)));
    }
}
