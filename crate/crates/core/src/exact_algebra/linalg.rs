//! Exact dense linear algebra over a field-like coefficient domain.

use super::coeff::Coeff;
use super::AlgebraError;

/// Outcome of eliminating a possibly over- or under-determined system.
#[derive(Clone, Debug)]
pub struct Solution<C> {
    /// `Some` for unknowns fixed by the system, `None` where a free column leaks in.
    pub values: Vec<Option<C>>,
    /// Columns without a pivot.
    pub free: Vec<usize>,
    /// Rows left with a nonzero right-hand side after elimination.
    pub inconsistent: Vec<usize>,
}

impl<C> Solution<C> {
    pub fn nullspace_dim(&self) -> usize {
        self.free.len()
    }

    pub fn is_consistent(&self) -> bool {
        self.inconsistent.is_empty()
    }
}

/// Reduced row echelon solve of `A x = b`.
pub fn solve<C: Coeff>(a: &[Vec<C>], b: &[C]) -> Result<Solution<C>, AlgebraError> {
    let m = a.len();
    let n = a.first().map(|r| r.len()).unwrap_or(0);
    if b.len() != m {
        return Err(AlgebraError::Linear(format!(
            "{} rows but {} right-hand sides",
            m,
            b.len()
        )));
    }
    let mut rows: Vec<Vec<C>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut v = r.clone();
            v.push(x.clone());
            v
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].inv()?;
        let pivot_row: Vec<C> = rows[r].iter().map(|x| x.mul(&inv)).collect();
        rows[r] = pivot_row;
        for i in 0..m {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in c..=n {
                    if !rows[r][k].is_zero() {
                        let t = rows[i][k].sub(&f.mul(&rows[r][k]));
                        rows[i][k] = t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let inconsistent: Vec<usize> = (r..m).filter(|&i| !rows[i][n].is_zero()).collect();
    let mut values = vec![None; n];
    for (i, &c) in pivots.iter().enumerate() {
        if free.iter().all(|&f| rows[i][f].is_zero()) {
            values[c] = Some(rows[i][n].clone());
        }
    }
    Ok(Solution {
        values,
        free,
        inconsistent,
    })
}

/// A matrix `L` with `L A = I` for `A` of full column rank, built from a set
/// of independent rows of `A`.
pub fn left_inverse<C: Coeff>(a: &[Vec<C>]) -> Result<Vec<Vec<C>>, AlgebraError> {
    let m = a.len();
    let n = a.first().map(|r| r.len()).unwrap_or(0);
    // augment [A | I_m] and row reduce; pivot rows give L
    let mut rows: Vec<Vec<C>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..m).map(|j| if i == j { C::one() } else { C::zero() }));
            v
        })
        .collect();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            return Err(AlgebraError::Linear(format!("column {} is dependent", c)));
        };
        rows.swap(r, pr);
        let inv = rows[r][c].inv()?;
        let pivot_row: Vec<C> = rows[r].iter().map(|x| x.mul(&inv)).collect();
        rows[r] = pivot_row;
        for i in 0..m {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..n + m {
                    if !rows[r][k].is_zero() {
                        let t = rows[i][k].sub(&f.mul(&rows[r][k]));
                        rows[i][k] = t;
                    }
                }
            }
        }
        r += 1;
    }
    Ok(rows[..n].iter().map(|row| row[n..].to_vec()).collect())
}

/// Product of a matrix over `R` with a vector over a module `V`.
pub fn apply<R: Coeff, V: Coeff>(l: &[Vec<R>], x: &[V], lift: impl Fn(&R, &V) -> V) -> Vec<V> {
    l.iter()
        .map(|row| {
            let mut acc = V::zero();
            for (a, v) in row.iter().zip(x) {
                if !a.is_zero() && !v.is_zero() {
                    acc = acc.add(&lift(a, v));
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat::{rat, rat_int, Rat};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect()
    }

    #[test]
    fn square_system() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let s = solve(&a, &[rat_int(3), rat_int(5)]).unwrap();
        assert_eq!(s.values, vec![Some(rat(4, 5)), Some(rat(7, 5))]);
        assert!(s.is_consistent());
    }

    #[test]
    fn reports_nullspace_and_inconsistency() {
        let a = m(&[&[1, 1], &[2, 2]]);
        let s = solve(&a, &[rat_int(1), rat_int(3)]).unwrap();
        assert_eq!(s.nullspace_dim(), 1);
        assert_eq!(s.inconsistent, vec![1]);
        assert_eq!(s.values, vec![None, None]);
    }

    #[test]
    fn left_inverse_of_tall_matrix() {
        let a = m(&[&[1, 0], &[1, 1], &[0, 2]]);
        let l = left_inverse(&a).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut s = rat_int(0);
                for k in 0..3 {
                    s += &l[i][k] * &a[k][j];
                }
                assert_eq!(s, rat_int((i == j) as i64));
            }
        }
        assert!(left_inverse(&m(&[&[1, 2], &[2, 4]])).is_err());
    }
}
