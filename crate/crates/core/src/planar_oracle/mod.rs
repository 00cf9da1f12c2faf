//! Planar moments by brute-force Wick enumeration on ribbon graphs.
//!
//! Independent of the curve: only the propagator `C^-1` and the vertex
//! couplings enter. Vertices are labeled, so the `1/k!` of the exponential
//! and the `1/a` of `g/a Tr M^a` are applied as plain factors and no
//! automorphism counting is needed.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

use crate::amplitudes::{MomentTable, Pipeline};
use crate::exact_algebra::{CouplingPoly, Rat};
use crate::spectral_curve::ChainModel;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("diagram budget exceeded: {needed} pairings needed, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("integer overflow in propagator products")]
    Overflow,
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

/// A boundary word together with labeled vertices and a pairing of all legs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FatDiagram {
    /// Colors of the boundary legs in cyclic order.
    pub boundary: Vec<usize>,
    /// Valence of each internal vertex; its legs follow the boundary legs.
    pub valences: Vec<usize>,
    /// Involution on legs.
    pub pairing: Vec<usize>,
}

struct Rotation {
    next: Vec<usize>,
    vertex_of: Vec<usize>,
    vertices: usize,
}

fn rotation(boundary_len: usize, valences: &[usize]) -> Rotation {
    let total = boundary_len + valences.iter().sum::<usize>();
    let mut next = vec![0; total];
    let mut vertex_of = vec![0; total];
    let mut base = 0;
    let mut vid = 0;
    let mut sizes = Vec::new();
    if boundary_len > 0 {
        sizes.push(boundary_len);
    }
    sizes.extend_from_slice(valences);
    for sz in sizes {
        for i in 0..sz {
            next[base + i] = base + (i + 1) % sz;
            vertex_of[base + i] = vid;
        }
        base += sz;
        vid += 1;
    }
    Rotation {
        next,
        vertex_of,
        vertices: vid,
    }
}

fn count_faces(rot: &Rotation, pairing: &[usize]) -> usize {
    let n = pairing.len();
    let mut seen = vec![false; n];
    let mut faces = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        faces += 1;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = rot.next[pairing[x]];
        }
    }
    faces
}

fn connected(rot: &Rotation, pairing: &[usize]) -> bool {
    let mut parent: Vec<usize> = (0..rot.vertices).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    let mut comps = rot.vertices;
    for (a, &b) in pairing.iter().enumerate() {
        let (ra, rb) = (
            find(&mut parent, rot.vertex_of[a]),
            find(&mut parent, rot.vertex_of[b]),
        );
        if ra != rb {
            parent[ra] = rb;
            comps -= 1;
        }
    }
    comps == 1
}

/// Genus from the Euler characteristic; `None` for a disconnected diagram.
pub fn genus(d: &FatDiagram) -> Option<usize> {
    let rot = rotation(d.boundary.len(), &d.valences);
    if !connected(&rot, &d.pairing) {
        return None;
    }
    let v = rot.vertices as i64;
    let e = (d.pairing.len() / 2) as i64;
    let f = count_faces(&rot, &d.pairing) as i64;
    Some(((2 - v + e - f) / 2) as usize)
}

fn double_factorial_odd(m: usize) -> u128 {
    // number of perfect matchings on m points
    if m % 2 == 1 {
        return 0;
    }
    (1..m)
        .step_by(2)
        .map(|k| k as u128)
        .product::<u128>()
        .max(1)
}

#[derive(Clone, Debug)]
struct VertexType {
    color: usize,
    valence: usize,
    coupling: CouplingPoly,
}

/// Enumeration data shared by all cells of one model.
pub struct Oracle {
    colors: usize,
    /// Integer propagator `G * den`.
    gint: Vec<Vec<i128>>,
    den: BigInt,
    types: Vec<VertexType>,
    budget: u128,
}

impl Oracle {
    pub fn new(model: &ChainModel, budget: u128) -> Result<Self, OracleError> {
        if !model.is_positive_definite() {
            return Err(OracleError::InvalidModel(
                "quadratic form is not positive definite".into(),
            ));
        }
        let g = model
            .propagator()
            .map_err(|e| OracleError::InvalidModel(e.to_string()))?;
        let den = g
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let gint = g
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        (x * Rat::from_integer(den.clone()))
                            .to_integer()
                            .to_i128()
                            .ok_or(OracleError::Overflow)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut types = Vec::new();
        for (c, p) in model.potentials().iter().enumerate() {
            for (i, g) in p.coeffs().iter().enumerate().skip(1) {
                if !g.is_zero() {
                    types.push(VertexType {
                        color: c,
                        valence: i + 2,
                        coupling: g.clone(),
                    });
                }
            }
        }
        Ok(Oracle {
            colors: model.n_chain(),
            gint,
            den,
            types,
            budget,
        })
    }

    fn valences(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.types.iter().map(|t| t.valence).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Pairings needed to evaluate `word` with up to `max_vertices` vertices.
    fn cost(&self, len: usize, max_vertices: usize) -> u128 {
        let vals = self.valences();
        let mut total = 0u128;
        for seq in valence_sequences(&vals, max_vertices) {
            let legs = len + seq.iter().sum::<usize>();
            total = total.saturating_add(double_factorial_odd(legs));
        }
        total
    }

    /// Planar `<(1/N) Tr prod M_{word_i}>` times the resolvent's `T`,
    /// graded by `v` (the power of `T`), for up to `max_vertices` vertices.
    pub fn planar_moment(
        &self,
        word: &[usize],
        max_vertices: usize,
    ) -> Result<BTreeMap<usize, CouplingPoly>, OracleError> {
        if word.iter().any(|&c| c >= self.colors) {
            return Err(OracleError::InvalidModel(
                "word uses an unknown color".into(),
            ));
        }
        let needed = self.cost(word.len(), max_vertices);
        if needed > self.budget {
            return Err(OracleError::BudgetExceeded {
                needed,
                budget: self.budget,
            });
        }
        let mut out: BTreeMap<usize, CouplingPoly> = BTreeMap::new();
        if word.is_empty() {
            out.insert(1, CouplingPoly::one());
            return Ok(out);
        }
        let vals = self.valences();
        for seq in valence_sequences(&vals, max_vertices) {
            let legs = word.len() + seq.iter().sum::<usize>();
            if legs % 2 == 1 {
                continue;
            }
            let k = seq.len();
            let edges = legs / 2;
            let v = 1 + edges - k;
            let counts = self.enumerate(word, &seq)?;
            // 1/k! * prod(-1/a) / den^E
            let mut scale = Rat::one();
            for (i, a) in seq.iter().enumerate() {
                scale *= Rat::new(BigInt::from(-1), BigInt::from(*a * (i + 1)));
            }
            scale /= Rat::from_integer(num_traits::pow(self.den.clone(), edges));
            let mut poly = CouplingPoly::zero();
            for (key, cnt) in counts {
                let mut term =
                    CouplingPoly::constant(Rat::from_integer(BigInt::from(cnt)) * &scale);
                for (t, &m) in key.iter().enumerate() {
                    if m > 0 {
                        term = term.mul(&self.types[t].coupling.pow(m as u32));
                    }
                }
                poly = poly.add(&term);
            }
            let slot = out.entry(v).or_insert_with(CouplingPoly::zero);
            *slot = slot.add(&poly);
        }
        out.retain(|_, p| !p.is_zero());
        Ok(out)
    }

    /// Sums `prod G` over planar connected pairings and vertex colorings,
    /// keyed by how many vertices of each type were used.
    ///
    /// Untouched vertices of equal valence are interchangeable, and so are
    /// their legs: a pairing into one of them is enumerated once for the
    /// first such vertex and weighted by the number of choices.
    fn enumerate(
        &self,
        word: &[usize],
        seq: &[usize],
    ) -> Result<HashMap<Vec<u8>, i128>, OracleError> {
        let rot = rotation(word.len(), seq);
        let legs = rot.next.len();
        let choices: Vec<Vec<usize>> = seq
            .iter()
            .map(|&a| {
                (0..self.types.len())
                    .filter(|&t| self.types[t].valence == a)
                    .collect()
            })
            .collect();
        let mut leg_vertex = vec![usize::MAX; legs];
        let mut first_leg = Vec::with_capacity(seq.len());
        let mut base = word.len();
        for (vi, &a) in seq.iter().enumerate() {
            first_leg.push(base);
            for l in 0..a {
                leg_vertex[base + l] = vi;
            }
            base += a;
        }
        let radix = seq.len() + 1;
        let slots = radix.pow(self.types.len() as u32);
        let st = State {
            pairing: vec![usize::MAX; legs],
            used: vec![0; seq.len()],
        };
        let first = moves(&st, 0, seq, &leg_vertex, &first_leg);
        let parts: Vec<Result<Vec<i128>, OracleError>> = first
            .into_par_iter()
            .map(|(j, mult)| {
                let mut ctx = Ctx {
                    oracle: self,
                    rot: &rot,
                    word,
                    seq,
                    leg_vertex: &leg_vertex,
                    first_leg: &first_leg,
                    choices: &choices,
                    radix,
                    acc: vec![0; slots],
                    err: None,
                };
                let mut st = st.clone();
                st.link(0, j, &leg_vertex);
                ctx.recurse(&mut st, mult);
                match ctx.err {
                    Some(e) => Err(e),
                    None => Ok(ctx.acc),
                }
            })
            .collect();
        let mut dense = vec![0i128; slots];
        for p in parts {
            for (slot, v) in dense.iter_mut().zip(p?) {
                *slot = slot.checked_add(v).ok_or(OracleError::Overflow)?;
            }
        }
        let mut total = HashMap::new();
        for (code, v) in dense.into_iter().enumerate() {
            if v != 0 {
                let mut key = Vec::with_capacity(self.types.len());
                let mut c = code;
                for _ in 0..self.types.len() {
                    key.push((c % radix) as u8);
                    c /= radix;
                }
                total.insert(key, v);
            }
        }
        Ok(total)
    }
}

#[derive(Clone)]
struct State {
    pairing: Vec<usize>,
    used: Vec<usize>,
}

impl State {
    fn link(&mut self, i: usize, j: usize, leg_vertex: &[usize]) {
        self.pairing[i] = j;
        self.pairing[j] = i;
        for l in [i, j] {
            if leg_vertex[l] != usize::MAX {
                self.used[leg_vertex[l]] += 1;
            }
        }
    }

    fn unlink(&mut self, i: usize, j: usize, leg_vertex: &[usize]) {
        self.pairing[i] = usize::MAX;
        self.pairing[j] = usize::MAX;
        for l in [i, j] {
            if leg_vertex[l] != usize::MAX {
                self.used[leg_vertex[l]] -= 1;
            }
        }
    }
}

/// Partners for leg `i` with their multiplicities.
fn moves(
    st: &State,
    i: usize,
    seq: &[usize],
    leg_vertex: &[usize],
    first_leg: &[usize],
) -> Vec<(usize, i128)> {
    let mut out = Vec::new();
    let mut seen_fresh: Vec<usize> = Vec::new();
    for j in i + 1..st.pairing.len() {
        if st.pairing[j] != usize::MAX {
            continue;
        }
        let vj = leg_vertex[j];
        if vj == usize::MAX || st.used[vj] > 0 || vj == leg_vertex[i] {
            out.push((j, 1));
            continue;
        }
        let a = seq[vj];
        if seen_fresh.contains(&a) || j != first_leg[vj] {
            continue;
        }
        seen_fresh.push(a);
        let fresh = (0..seq.len())
            .filter(|&w| seq[w] == a && st.used[w] == 0 && w != leg_vertex[i])
            .count();
        out.push((j, (fresh * a) as i128));
    }
    out
}

struct Ctx<'a> {
    oracle: &'a Oracle,
    rot: &'a Rotation,
    word: &'a [usize],
    seq: &'a [usize],
    leg_vertex: &'a [usize],
    first_leg: &'a [usize],
    choices: &'a [Vec<usize>],
    radix: usize,
    acc: Vec<i128>,
    err: Option<OracleError>,
}

impl Ctx<'_> {
    fn recurse(&mut self, st: &mut State, mult: i128) {
        if self.err.is_some() {
            return;
        }
        let Some(i) = st.pairing.iter().position(|&x| x == usize::MAX) else {
            self.complete(&st.pairing, mult);
            return;
        };
        // every earlier vertex is closed, so a fresh one here can never
        // reach the boundary
        let vi = self.leg_vertex[i];
        if vi != usize::MAX && st.used[vi] == 0 && !self.word.is_empty() {
            return;
        }
        for (j, m) in moves(st, i, self.seq, self.leg_vertex, self.first_leg) {
            st.link(i, j, self.leg_vertex);
            self.recurse(st, mult * m);
            st.unlink(i, j, self.leg_vertex);
        }
    }

    fn complete(&mut self, pairing: &[usize], mult: i128) {
        if !connected(self.rot, pairing) {
            return;
        }
        let v = self.rot.vertices as i64;
        let e = (pairing.len() / 2) as i64;
        let f = count_faces(self.rot, pairing) as i64;
        if v - e + f != 2 {
            return;
        }
        let edges: Vec<(usize, usize)> = pairing
            .iter()
            .enumerate()
            .filter(|(a, b)| a < *b)
            .map(|(a, &b)| (a, b))
            .collect();
        // sum over vertex types
        let k = self.choices.len();
        let mut pick = vec![0usize; k];
        loop {
            let color = |leg: usize| -> usize {
                if leg < self.word.len() {
                    self.word[leg]
                } else {
                    let vx = self.leg_vertex[leg];
                    self.oracle.types[self.choices[vx][pick[vx]]].color
                }
            };
            let mut w: i128 = mult;
            for &(a, b) in &edges {
                match w.checked_mul(self.oracle.gint[color(a)][color(b)]) {
                    Some(x) => w = x,
                    None => {
                        self.err = Some(OracleError::Overflow);
                        return;
                    }
                }
                if w == 0 {
                    break;
                }
            }
            if w != 0 {
                let mut code = 0;
                for (vi, &p) in pick.iter().enumerate() {
                    code += self.radix.pow(self.choices[vi][p] as u32);
                }
                match self.acc[code].checked_add(w) {
                    Some(x) => self.acc[code] = x,
                    None => {
                        self.err = Some(OracleError::Overflow);
                        return;
                    }
                }
            }
            // next combination
            let mut d = 0;
            loop {
                if d == k {
                    return;
                }
                pick[d] += 1;
                if pick[d] < self.choices[d].len() {
                    break;
                }
                pick[d] = 0;
                d += 1;
            }
        }
    }
}

/// Ordered valence sequences of length up to `max_len`.
fn valence_sequences(vals: &[usize], max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &layer {
            for &a in vals {
                let mut t: Vec<usize> = s.clone();
                t.push(a);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    if vals.is_empty() {
        out.truncate(1);
    }
    out
}

/// Word `M_1^{n_1} M_2^{n_2} ...` as a color sequence.
pub fn word_of(n: &[usize]) -> Vec<usize> {
    n.iter()
        .enumerate()
        .flat_map(|(c, &k)| std::iter::repeat(c).take(k))
        .collect()
}

/// Convenience wrapper over `Oracle::planar_moment`.
pub fn planar_moment(
    model: &ChainModel,
    n: &[usize],
    max_vertices: usize,
    budget: u128,
) -> Result<BTreeMap<usize, CouplingPoly>, OracleError> {
    Oracle::new(model, budget)?.planar_moment(&word_of(n), max_vertices)
}

/// Every cell with `sum n <= nmax`, `v <= vmax`.
pub fn oracle_table(
    model: &ChainModel,
    nmax: usize,
    vmax: usize,
    budget: u128,
) -> Result<MomentTable, OracleError> {
    let oracle = Oracle::new(model, budget)?;
    let n_chain = model.n_chain();
    let mut table = MomentTable::new(n_chain, Pipeline::Oracle, nmax, vmax);
    let vecs = MomentTable::exponent_vectors(n_chain, nmax);
    let total: u128 = vecs
        .iter()
        .map(|n| {
            let l: usize = n.iter().sum();
            oracle.cost(l, (2 * vmax).saturating_sub(2 + l))
        })
        .fold(0u128, |a, b| a.saturating_add(b));
    if total > budget {
        return Err(OracleError::BudgetExceeded {
            needed: total,
            budget,
        });
    }
    for n in vecs {
        let l: usize = n.iter().sum();
        let kmax = (2 * vmax).saturating_sub(2 + l);
        let m = oracle.planar_moment(&word_of(&n), kmax)?;
        // vmax = 0 still carries the normalization cell
        for v in 1..=vmax.max(1) {
            if (l == 0 && v != 1) || (vmax == 0 && l > 0) {
                continue;
            }
            if 2 * v < 2 + l {
                continue;
            }
            let c = m.get(&v).cloned().unwrap_or_else(CouplingPoly::zero);
            table.insert(n.clone(), v, c);
        }
    }
    Ok(table)
}

pub const DEFAULT_BUDGET: u128 = 50_000_000;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat_int;
    use num_traits::Zero;

    fn p(s: &str) -> CouplingPoly {
        CouplingPoly::parse(s).unwrap()
    }

    #[test]
    fn single_pairing() {
        let m = ChainModel::cubic_chain();
        let r = planar_moment(&m, &[2, 0, 0], 0, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.get(&2), Some(&CouplingPoly::constant(rat_int(2))));
        assert!(planar_moment(&m, &[1, 0, 0], 0, DEFAULT_BUDGET)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn tadpole() {
        let m = ChainModel::cubic_chain();
        let r = planar_moment(&m, &[1, 0, 0], 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(r[&2], p("-4*g1 - g2 - 2*g3"));
    }

    #[test]
    fn genus_of_small_diagrams() {
        let disk = FatDiagram {
            boundary: vec![0, 0],
            valences: vec![],
            pairing: vec![1, 0],
        };
        assert_eq!(genus(&disk), Some(0));
        let crossing = FatDiagram {
            boundary: vec![0; 4],
            valences: vec![],
            pairing: vec![2, 3, 0, 1],
        };
        assert_eq!(genus(&crossing), Some(1));
        let nested = FatDiagram {
            boundary: vec![0; 4],
            valences: vec![],
            pairing: vec![3, 2, 1, 0],
        };
        assert_eq!(genus(&nested), Some(0));
    }

    fn catalan(k: u64) -> u64 {
        (0..k).fold(1u64, |c, i| c * 2 * (2 * i + 1) / (i + 2))
    }

    #[test]
    fn gaussian_catalan_closed_form() {
        let m = ChainModel::cubic_chain().gaussian();
        let g = m.propagator().unwrap();
        let oracle = Oracle::new(&m, DEFAULT_BUDGET).unwrap();
        for i in 0..3 {
            for k in 1..=4u64 {
                let mut n = vec![0; 3];
                n[i] = 2 * k as usize;
                let r = oracle.planar_moment(&word_of(&n), 0).unwrap();
                let want = Rat::from_integer(catalan(k).into())
                    * num_traits::pow(g[i][i].clone(), k as usize);
                assert_eq!(r[&(k as usize + 1)], CouplingPoly::constant(want));
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let m = ChainModel::cubic_chain();
        let e = planar_moment(&m, &[1, 0, 0], 7, 1000).unwrap_err();
        assert!(matches!(e, OracleError::BudgetExceeded { .. }));
    }

    #[test]
    fn table_cells_of_second_order() {
        let m = ChainModel::cubic_chain();
        let t = oracle_table(&m, 4, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            t.get(&[1, 1, 0], 2),
            Some(&CouplingPoly::constant(rat_int(1)))
        );
        assert_eq!(
            t.get(&[0, 4, 0], 3),
            Some(&CouplingPoly::constant(rat_int(2)))
        );
        assert_eq!(t.get(&[1, 2, 0], 3), Some(&p("-10*g1 - 4*g2 - 7*g3")));
        assert_eq!(t.get(&[1, 1, 1], 3), Some(&p("-10*g1 - 4*g2 - 10*g3")));
        assert_eq!(t.value(&[2, 0, 1], 2), CouplingPoly::zero());
        assert_eq!(t.get(&[0, 0, 0], 1), Some(&CouplingPoly::one()));
    }

    /// Planar loop equations for the cubic chain, used as an independent
    /// check: split the first letter against a later letter, or against
    /// a vertex derivative.
    struct LoopEq {
        g: Vec<Vec<Rat>>,
        cubic: Vec<CouplingPoly>,
        memo: HashMap<(Vec<usize>, usize), CouplingPoly>,
    }

    impl LoopEq {
        fn m(&mut self, w: &[usize], k: usize) -> CouplingPoly {
            if w.is_empty() {
                return if k == 0 {
                    CouplingPoly::one()
                } else {
                    CouplingPoly::zero()
                };
            }
            if let Some(r) = self.memo.get(&(w.to_vec(), k)) {
                return r.clone();
            }
            let (a, rest) = (w[0], &w[1..]);
            let mut s = CouplingPoly::zero();
            for j in 0..rest.len() {
                let gab = self.g[a][rest[j]].clone();
                if gab.is_zero() {
                    continue;
                }
                for k1 in 0..=k {
                    let left = self.m(&rest[..j], k1);
                    if left.is_zero() {
                        continue;
                    }
                    let right = self.m(&rest[j + 1..], k - k1);
                    s = s.add(&left.mul(&right).scale(&gab));
                }
            }
            if k > 0 {
                for b in 0..self.g.len() {
                    let mut w2 = vec![b, b];
                    w2.extend_from_slice(rest);
                    let t = self
                        .m(&w2, k - 1)
                        .mul(&self.cubic[b])
                        .scale(&-self.g[a][b].clone());
                    s = s.add(&t);
                }
            }
            self.memo.insert((w.to_vec(), k), s.clone());
            s
        }
    }

    #[test]
    fn agrees_with_loop_equations() {
        let m = ChainModel::cubic_chain();
        let t = oracle_table(&m, 4, 4, DEFAULT_BUDGET).unwrap();
        let mut le = LoopEq {
            g: m.propagator().unwrap(),
            cubic: (0..3).map(CouplingPoly::var).collect(),
            memo: HashMap::new(),
        };
        let mut checked = 0;
        for n in MomentTable::exponent_vectors(3, 4) {
            for v in 1..=4 {
                let Some(k) = MomentTable::cubic_vertex_count(&n, v) else {
                    continue;
                };
                let want = le.m(&word_of(&n), k);
                assert_eq!(t.value(&n, v), want, "cell {n:?} v={v}");
                checked += 1;
            }
        }
        assert!(checked > 60);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::exact_algebra::{rat_int, CouplingPoly};
    use crate::spectral_curve::ChainModel;
    use proptest::prelude::*;

    fn catalan(k: usize) -> i64 {
        (0..k as i64).fold(1, |c, i| c * 2 * (2 * i + 1) / (i + 2))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn gaussian_words_count_catalan(q in 1i64..6, k in 1usize..5) {
            // V1' = q x, V2' = (q + 2) x: positive definite for q >= 1
            let m = ChainModel::cubic(&[rat_int(q), rat_int(q + 2)], &[rat_int(1)]).unwrap().gaussian();
            let g = m.propagator().unwrap();
            let got = planar_moment(&m, &[2 * k, 0], 0, DEFAULT_BUDGET).unwrap();
            let mut want = rat_int(catalan(k));
            for _ in 0..k {
                want *= g[0][0].clone();
            }
            prop_assert_eq!(got.get(&(k + 1)).cloned().unwrap_or_else(CouplingPoly::zero), CouplingPoly::constant(want));
        }
    }

    #[test]
    fn table_has_the_mirror_symmetry() {
        let t = oracle_table(&ChainModel::cubic_chain(), 4, 3, DEFAULT_BUDGET).unwrap();
        let image = [
            CouplingPoly::var(2),
            CouplingPoly::var(1),
            CouplingPoly::var(0),
        ];
        for ((n, v), c) in &t.cells {
            let mirrored = vec![n[2], n[1], n[0]];
            assert_eq!(&t.value(&mirrored, *v).substitute(&image), c, "{n:?} v={v}");
        }
    }
}
