use std::collections::BTreeMap;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::exact_algebra::CouplingPoly;

/// Which computation produced a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pipeline {
    Recursion,
    Oracle,
}

impl Pipeline {
    pub fn tag(self) -> &'static str {
        match self {
            Pipeline::Recursion => "recursion",
            Pipeline::Oracle => "oracle",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "recursion" => Some(Pipeline::Recursion),
            "oracle" => Some(Pipeline::Oracle),
            _ => None,
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Conventions fixed by matching Gaussian moments against the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalibrationRecord {
    /// Sign applied to the chain couplings.
    pub coupling_sign: i32,
    /// Offset between the extracted power of `T` and the table grading.
    pub t_offset: i32,
    /// Local degree of `z_i` at its expansion pole, per variable.
    pub local_degree: Vec<u32>,
    /// Number of Gaussian cells matched exactly.
    pub matched_cells: usize,
}

impl CalibrationRecord {
    pub fn canonical(&self) -> String {
        let ld: Vec<String> = self.local_degree.iter().map(|d| d.to_string()).collect();
        format!(
            "coupling_sign={};t_offset={};local_degree={};matched={}",
            self.coupling_sign,
            self.t_offset,
            ld.join(","),
            self.matched_cells
        )
    }

    /// sha256 of the canonical text, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

/// Cell key: boundary exponents `(n_1..n_N)` and the vertex grading `v`.
pub type CellKey = (Vec<usize>, usize);

#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable {
    pub n_chain: usize,
    pub pipeline: Pipeline,
    pub nmax: usize,
    pub vmax: usize,
    /// h-truncation the cells were certified at, for the recursion.
    pub h_order: Option<usize>,
    pub cells: BTreeMap<CellKey, CouplingPoly>,
    pub calibration: Option<CalibrationRecord>,
}

impl MomentTable {
    pub fn new(n_chain: usize, pipeline: Pipeline, nmax: usize, vmax: usize) -> Self {
        MomentTable {
            n_chain,
            pipeline,
            nmax,
            vmax,
            h_order: None,
            cells: BTreeMap::new(),
            calibration: None,
        }
    }

    pub fn get(&self, n: &[usize], v: usize) -> Option<&CouplingPoly> {
        self.cells.get(&(n.to_vec(), v))
    }

    /// Cell value; cells outside the grading are zero.
    pub fn value(&self, n: &[usize], v: usize) -> CouplingPoly {
        self.get(n, v).cloned().unwrap_or_else(CouplingPoly::zero)
    }

    pub fn insert(&mut self, n: Vec<usize>, v: usize, c: CouplingPoly) {
        self.cells.insert((n, v), c);
    }

    /// All exponent vectors with `sum n_i <= nmax`, in lexicographic order.
    pub fn exponent_vectors(n_chain: usize, nmax: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..n_chain {
            out = out
                .into_iter()
                .flat_map(|v: Vec<usize>| {
                    let used: usize = v.iter().sum();
                    (0..=nmax - used).map(move |k| {
                        let mut w = v.clone();
                        w.push(k);
                        w
                    })
                })
                .collect();
        }
        out.sort();
        out
    }

    /// Grading rule: a cell with boundary length `L` at `v` uses exactly
    /// `2v - 2 - L` cubic vertices; `None` when that is negative.
    pub fn cubic_vertex_count(n: &[usize], v: usize) -> Option<usize> {
        let l: usize = n.iter().sum();
        (2 * v).checked_sub(2 + l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_vectors_count() {
        let v = MomentTable::exponent_vectors(3, 4);
        assert_eq!(v.len(), 35);
        assert_eq!(v[0], vec![0, 0, 0]);
    }

    #[test]
    fn hash_is_stable() {
        let r = CalibrationRecord {
            coupling_sign: 1,
            t_offset: 0,
            local_degree: vec![1, 1, 1],
            matched_cells: 9,
        };
        assert_eq!(r.hash(), r.clone().hash());
        assert_eq!(r.hash().len(), 64);
        let mut s = r.clone();
        s.coupling_sign = -1;
        assert_ne!(r.hash(), s.hash());
    }
}
