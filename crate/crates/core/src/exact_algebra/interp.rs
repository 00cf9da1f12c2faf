//! Multivariate Newton interpolation on lower sets of tensor grids.
//!
//! Used to recover exact polynomials (in inverse spectral coordinates or in
//! the couplings) from exact values at rational nodes.

use std::collections::{BTreeMap, HashMap};

use super::coeff::Coeff;
use super::rat::Rat;
use super::upoly;

/// Multi-indices with entries summing to at most `degree`.
pub fn simplex_lattice(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; dim];
    fn rec(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[k] = e;
            rec(k + 1, left - e, cur, out);
        }
        cur[k] = 0;
    }
    rec(0, degree, &mut cur, &mut out);
    out
}

/// Interpolates `values` given on the lattice points `nodes[d][alpha_d]`.
/// The lattice must be a lower set. Returns monomial coefficients keyed by
/// exponent vectors.
pub fn interpolate<V: Coeff>(
    nodes: &[Vec<Rat>],
    lattice: &[Vec<usize>],
    values: &HashMap<Vec<usize>, V>,
) -> BTreeMap<Vec<u32>, V> {
    let dim = nodes.len();
    let mut dd: HashMap<Vec<usize>, V> = lattice
        .iter()
        .map(|a| (a.clone(), values[a].clone()))
        .collect();
    for d in 0..dim {
        let maxk = lattice.iter().map(|a| a[d]).max().unwrap_or(0);
        for k in 1..=maxk {
            // update from the top so lower orders stay available
            let mut keys: Vec<&Vec<usize>> = lattice.iter().filter(|a| a[d] >= k).collect();
            keys.sort_by(|a, b| b[d].cmp(&a[d]));
            let mut updates = Vec::with_capacity(keys.len());
            for a in keys {
                let mut prev = a.clone();
                prev[d] -= 1;
                let i = a[d];
                let denom = &nodes[d][i] - &nodes[d][i - k];
                let diff = dd[a].sub(&dd[&prev]).scale(&(Rat::one() / denom));
                updates.push((a.clone(), diff));
            }
            for (a, v) in updates {
                dd.insert(a, v);
            }
        }
    }
    // Newton basis to monomials
    let mut out: BTreeMap<Vec<u32>, V> = BTreeMap::new();
    let mut basis_cache: HashMap<(usize, usize), Vec<Rat>> = HashMap::new();
    for a in lattice {
        let c = &dd[a];
        if c.is_zero() {
            continue;
        }
        let mut poly: Vec<(Vec<u32>, Rat)> = vec![(vec![0; dim], Rat::one())];
        for d in 0..dim {
            let uni = basis_cache
                .entry((d, a[d]))
                .or_insert_with(|| {
                    let mut p = vec![Rat::one()];
                    for j in 0..a[d] {
                        p = upoly::mul(&p, &[-nodes[d][j].clone(), Rat::one()]);
                    }
                    p
                })
                .clone();
            let mut next = Vec::new();
            for (e, x) in &poly {
                for (k, y) in uni.iter().enumerate() {
                    if y.is_zero() {
                        continue;
                    }
                    let mut e2 = e.clone();
                    e2[d] = k as u32;
                    next.push((e2, x * y));
                }
            }
            poly = next;
        }
        for (e, x) in poly {
            let term = c.scale(&x);
            let slot = out.entry(e).or_insert_with(V::zero);
            *slot = slot.add(&term);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat::{rat, rat_int};

    #[test]
    fn recovers_bivariate_polynomial() {
        // f = 3 - x y + 2 y^2 + x^3 / 5
        let f = |x: &Rat, y: &Rat| rat_int(3) - x * y + rat_int(2) * y * y + x * x * x * rat(1, 5);
        let nodes = vec![
            (0..4).map(|k| rat(k + 1, 2)).collect::<Vec<_>>(),
            (0..4).map(|k| rat(-k, 3)).collect::<Vec<_>>(),
        ];
        let lat = simplex_lattice(2, 3);
        assert_eq!(lat.len(), 10);
        let vals = lat
            .iter()
            .map(|a| (a.clone(), f(&nodes[0][a[0]], &nodes[1][a[1]])))
            .collect();
        let out = interpolate(&nodes, &lat, &vals);
        let mut want = BTreeMap::new();
        want.insert(vec![0, 0], rat_int(3));
        want.insert(vec![1, 1], rat_int(-1));
        want.insert(vec![0, 2], rat_int(2));
        want.insert(vec![3, 0], rat(1, 5));
        assert_eq!(out, want);
    }
}
