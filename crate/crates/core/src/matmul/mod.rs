//! Entries of `A^(K) ... A^(1)` for regular 0/1 adjacency matrices, read off
//! from a walk over `K + 1` registers.
//!
//! Register 0 holds the start vertex `j`, register `K` the walker. Stage `l`
//! (1-based) uses register `l - 1` as coin: the walker, which sits on the
//! coin value `k`, moves to `-i/sqrt(d) sum_{p ~ k} |p>`. A generalized CNOT
//! then copies the walker into register `l`. Projecting register 0 on `j`
//! and register `K` on `i` leaves probability `C_ij / (d_1 ... d_K)`.

mod sampling;

pub use sampling::{sample_probability, sample_projector};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::exec::try_par_map;
use crate::graphs::{GraphError, LabeledGraph};
use crate::linalg::C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatmulError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("empty graph sequence")]
    Empty,
    #[error("graph {index} has {found} vertices, expected {expected}")]
    SizeMismatch { index: usize, expected: usize, found: usize },
    #[error("graph {index}: {reason}")]
    NotSimple { index: usize, reason: String },
    #[error("graph {index} is not regular with degree >= 1 (degrees {degrees:?})")]
    NotRegular { index: usize, degrees: Vec<usize> },
    #[error("index {index} out of range for {n} vertices")]
    InvalidIndex { index: usize, n: usize },
    #[error("register {register} invalid for {registers} registers")]
    InvalidRegister { register: usize, registers: usize },
    #[error("shots must be at least 1")]
    NoShots,
}

/// Regular simple graphs on a common vertex set, applied in order
/// (`graphs[0]` is `A^(1)`).
#[derive(Clone, Debug, PartialEq)]
pub struct RegularGraphSequence {
    n: usize,
    /// Sorted neighbor lists per graph.
    neighbors: Vec<Vec<Vec<usize>>>,
    degrees: Vec<usize>,
}

impl RegularGraphSequence {
    /// From 0/1 adjacency matrices; each must be symmetric, hollow and regular.
    pub fn from_adjacency(mats: &[Vec<Vec<u8>>]) -> Result<Self, MatmulError> {
        let n = mats.first().ok_or(MatmulError::Empty)?.len();
        let mut neighbors = Vec::with_capacity(mats.len());
        for (index, a) in mats.iter().enumerate() {
            if a.len() != n || a.iter().any(|r| r.len() != n) {
                return Err(MatmulError::SizeMismatch { index, expected: n, found: a.len() });
            }
            for (u, row) in a.iter().enumerate() {
                if row[u] != 0 {
                    return Err(MatmulError::NotSimple { index, reason: format!("nonzero diagonal at {u}") });
                }
                for (v, &x) in row.iter().enumerate() {
                    if x > 1 {
                        return Err(MatmulError::NotSimple { index, reason: format!("entry ({u}, {v}) is not 0/1") });
                    }
                    if x != a[v][u] {
                        return Err(MatmulError::NotSimple { index, reason: format!("asymmetric at ({u}, {v})") });
                    }
                }
            }
            neighbors.push((0..n).map(|u| (0..n).filter(|&v| a[u][v] == 1).collect()).collect());
        }
        Self::from_neighbors(n, neighbors)
    }

    /// From labeled graphs, ignoring labels; edges must have weight 1 and no
    /// vertex pair may be joined twice.
    pub fn from_graphs(graphs: &[LabeledGraph]) -> Result<Self, MatmulError> {
        let n = graphs.first().ok_or(MatmulError::Empty)?.n();
        let mut mats = Vec::with_capacity(graphs.len());
        for (index, g) in graphs.iter().enumerate() {
            if g.n() != n {
                return Err(MatmulError::SizeMismatch { index, expected: n, found: g.n() });
            }
            let mut a = vec![vec![0u8; n]; n];
            for e in g.edges() {
                if e.is_loop() {
                    return Err(MatmulError::NotSimple { index, reason: format!("self-loop at {}", e.u) });
                }
                if e.weight != 1.0 {
                    return Err(MatmulError::NotSimple {
                        index,
                        reason: format!("edge ({}, {}) has weight {}", e.u, e.v, e.weight),
                    });
                }
                if a[e.u][e.v] != 0 {
                    return Err(MatmulError::NotSimple { index, reason: format!("repeated edge ({}, {})", e.u, e.v) });
                }
                a[e.u][e.v] = 1;
                a[e.v][e.u] = 1;
            }
            mats.push(a);
        }
        Self::from_adjacency(&mats)
    }

    /// `k` copies of the same graph.
    pub fn power(g: &LabeledGraph, k: usize) -> Result<Self, MatmulError> {
        Self::from_graphs(&vec![g.clone(); k])
    }

    fn from_neighbors(n: usize, neighbors: Vec<Vec<Vec<usize>>>) -> Result<Self, MatmulError> {
        let mut degrees = Vec::with_capacity(neighbors.len());
        for (index, nb) in neighbors.iter().enumerate() {
            let deg: Vec<usize> = nb.iter().map(Vec::len).collect();
            match deg.first() {
                Some(&d) if d >= 1 && deg.iter().all(|&x| x == d) => degrees.push(d),
                _ => return Err(MatmulError::NotRegular { index, degrees: deg }),
            }
        }
        Ok(Self { n, neighbors, degrees })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of factors `K`.
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// `d_1 ... d_K`.
    pub fn degree_product(&self) -> f64 {
        self.degrees.iter().map(|&d| d as f64).product()
    }

    /// Neighbors of `v` in `A^(l)`, 1-based `l`.
    pub fn neighbors(&self, l: usize, v: usize) -> &[usize] {
        &self.neighbors[l - 1][v]
    }

    fn check_index(&self, index: usize) -> Result<(), MatmulError> {
        if index >= self.n {
            return Err(MatmulError::InvalidIndex { index, n: self.n });
        }
        Ok(())
    }
}

/// Sparse amplitudes over tuples of register values in `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiRegisterState {
    n: usize,
    registers: usize,
    amps: BTreeMap<Vec<usize>, C64>,
}

impl MultiRegisterState {
    pub fn basis(n: usize, values: Vec<usize>) -> Result<Self, MatmulError> {
        if let Some(&bad) = values.iter().find(|&&x| x >= n) {
            return Err(MatmulError::InvalidIndex { index: bad, n });
        }
        let registers = values.len();
        Ok(Self { n, registers, amps: BTreeMap::from([(values, C64::new(1.0, 0.0))]) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn registers(&self) -> usize {
        self.registers
    }

    pub fn amplitudes(&self) -> &BTreeMap<Vec<usize>, C64> {
        &self.amps
    }

    pub fn amplitude(&self, values: &[usize]) -> C64 {
        self.amps.get(values).copied().unwrap_or_default()
    }

    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    fn check_register(&self, r: usize) -> Result<(), MatmulError> {
        if r >= self.registers {
            return Err(MatmulError::InvalidRegister { register: r, registers: self.registers });
        }
        Ok(())
    }

    fn add(map: &mut BTreeMap<Vec<usize>, C64>, key: Vec<usize>, amp: C64) {
        *map.entry(key).or_default() += amp;
    }
}

/// Stage `l` (1-based) walk `e^{-i S_k t}` at `t = pi / (2 sqrt(d_l))` on the
/// last register, with register `l - 1` holding `k`.
///
/// `S_k = |k><v| sqrt(d) + h.c.` with `v = sum_{p ~ k} |p> / sqrt(d)` has
/// eigenvalues `+-sqrt(d)` on `(|k> +- |v>) / sqrt 2`, so at this time
/// `e^{-iS_k t} = I - |k><k| - |v><v| - i (|k><v| + |v><k|)`.
pub fn stage_walk(
    state: &MultiRegisterState,
    l: usize,
    seq: &RegularGraphSequence,
) -> Result<MultiRegisterState, MatmulError> {
    if l == 0 || l > seq.len() {
        return Err(MatmulError::InvalidRegister { register: l, registers: seq.len() });
    }
    let (coin, pos) = (l - 1, state.registers - 1);
    state.check_register(coin)?;
    if coin == pos {
        return Err(MatmulError::InvalidRegister { register: coin, registers: state.registers });
    }
    let d = seq.degrees[l - 1] as f64;
    let s = d.sqrt();
    let mut out = BTreeMap::new();
    for (key, &amp) in &state.amps {
        let (k, q) = (key[coin], key[pos]);
        let nb = seq.neighbors(l, k);
        let mut put = |p: usize, w: C64| {
            let mut next = key.clone();
            next[pos] = p;
            MultiRegisterState::add(&mut out, next, amp * w);
        };
        if q == k {
            for &p in nb {
                put(p, C64::new(0.0, -1.0 / s));
            }
        } else if nb.binary_search(&q).is_ok() {
            put(q, C64::new(1.0, 0.0));
            for &p in nb {
                put(p, C64::new(-1.0 / d, 0.0));
            }
            put(k, C64::new(0.0, -1.0 / s));
        } else {
            put(q, C64::new(1.0, 0.0));
        }
    }
    out.retain(|_, a| *a != C64::new(0.0, 0.0));
    Ok(MultiRegisterState { n: state.n, registers: state.registers, amps: out })
}

/// `|c>|t> -> |c>|(t + c) mod n>` on the given registers.
pub fn generalized_cnot(
    state: &MultiRegisterState,
    control: usize,
    target: usize,
) -> Result<MultiRegisterState, MatmulError> {
    state.check_register(control)?;
    state.check_register(target)?;
    if control == target {
        return Err(MatmulError::InvalidRegister { register: target, registers: state.registers });
    }
    let amps = state
        .amps
        .iter()
        .map(|(key, &a)| {
            let mut next = key.clone();
            next[target] = (key[target] + key[control]) % state.n;
            (next, a)
        })
        .collect();
    Ok(MultiRegisterState { n: state.n, registers: state.registers, amps })
}

/// Runs all stages from `|j, 0, ..., 0, j>`.
pub fn final_state(seq: &RegularGraphSequence, j: usize) -> Result<MultiRegisterState, MatmulError> {
    seq.check_index(j)?;
    let k = seq.len();
    let mut start = vec![0; k + 1];
    start[0] = j;
    start[k] = j;
    let mut state = MultiRegisterState::basis(seq.n, start)?;
    for l in 1..=k {
        state = stage_walk(&state, l, seq)?;
        if l < k {
            state = generalized_cnot(&state, k, l)?;
        }
    }
    Ok(state)
}

/// `||Pi_ij psi||^2`: register 0 on `j`, the last register on `i`.
pub fn projection_probability(state: &MultiRegisterState, i: usize, j: usize) -> f64 {
    let last = state.registers - 1;
    state.amps.iter().filter(|(k, _)| k[0] == j && k[last] == i).map(|(_, a)| a.norm_sqr()).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    /// Binomial sampling of the projection event.
    Shots {
        shots: u64,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductEstimate {
    pub i: usize,
    pub j: usize,
    pub mode: Mode,
    /// Exact projection probability.
    pub probability: f64,
    /// `hits / shots` in shots mode, the exact probability otherwise.
    pub estimate: f64,
    pub hits: Option<u64>,
    /// `d_1 ... d_K * estimate`.
    pub value: f64,
    /// Whether a 3-sigma interval on `value` is narrower than 1/2.
    pub within_half: bool,
}

impl ProductEstimate {
    pub fn rounded(&self) -> i64 {
        self.value.round() as i64
    }
}

fn entry_seed(seed: u64, i: usize, j: usize, n: usize) -> u64 {
    seed.wrapping_add(((i * n + j) as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn estimate(
    seq: &RegularGraphSequence,
    state: &MultiRegisterState,
    i: usize,
    j: usize,
    mode: Mode,
) -> Result<ProductEstimate, MatmulError> {
    let p = projection_probability(state, i, j);
    let scale = seq.degree_product();
    let (est, hits, within_half) = match mode {
        Mode::Exact => (p, None, true),
        Mode::Shots { shots, seed } => {
            let (hits, est) = sample_probability(p, shots, entry_seed(seed, i, j, seq.n))?;
            let radius = 3.0 * scale * (est * (1.0 - est) / shots as f64).sqrt();
            (est, Some(hits), radius < 0.5)
        }
    };
    Ok(ProductEstimate { i, j, mode, probability: p, estimate: est, hits, value: scale * est, within_half })
}

/// `C_ij = (A^(K) ... A^(1))_ij`.
pub fn product_entry(
    seq: &RegularGraphSequence,
    i: usize,
    j: usize,
    mode: Mode,
) -> Result<ProductEstimate, MatmulError> {
    seq.check_index(i)?;
    let state = final_state(seq, j)?;
    estimate(seq, &state, i, j, mode)
}

/// All entries, one final state per column; columns run in parallel.
pub fn product_matrix(seq: &RegularGraphSequence, mode: Mode) -> Result<Vec<Vec<ProductEstimate>>, MatmulError> {
    let cols: Vec<usize> = (0..seq.n).collect();
    let columns = try_par_map(&cols, |&j| {
        let state = final_state(seq, j)?;
        (0..seq.n).map(|i| estimate(seq, &state, i, j, mode)).collect::<Result<Vec<_>, _>>()
    })?;
    Ok((0..seq.n).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect())
}

/// `product_matrix` reduced to values, row-major.
pub fn product_values(seq: &RegularGraphSequence, mode: Mode) -> Result<Vec<Vec<f64>>, MatmulError> {
    Ok(product_matrix(seq, mode)?.into_iter().map(|r| r.into_iter().map(|e| e.value).collect()).collect())
}

/// `tr(A^(K) ... A^(1))`.
pub fn product_trace(seq: &RegularGraphSequence, mode: Mode) -> Result<f64, MatmulError> {
    let idx: Vec<usize> = (0..seq.n).collect();
    let diag = try_par_map(&idx, |&k| product_entry(seq, k, k, mode).map(|e| e.value))?;
    Ok(diag.iter().sum())
}

/// Triangles through `k`: `(A^3)_kk / 2`.
pub fn triangles_at_vertex(g: &LabeledGraph, k: usize, mode: Mode) -> Result<u64, MatmulError> {
    let seq = RegularGraphSequence::power(g, 3)?;
    let c = product_entry(&seq, k, k, mode)?.value.round().max(0.0) as u64;
    Ok(c / 2)
}

/// `tr(A^3) / 6`.
pub fn triangle_count(g: &LabeledGraph, mode: Mode) -> Result<u64, MatmulError> {
    let seq = RegularGraphSequence::power(g, 3)?;
    let t = product_trace(&seq, mode)?.round().max(0.0) as u64;
    Ok(t / 6)
}
