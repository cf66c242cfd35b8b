//! Hybrid walks `W(t) = e^{-iHt} (C (x) I)` with `H = sum_c |c><c| (x) S_c`.
//!
//! `H` is block diagonal in the coin index, so `e^{-iHt}` is applied one
//! coin sector at a time using a cached eigendecomposition of each `S_c`.
//! Labels without edges give structurally zero blocks that are skipped.

mod coin;
mod init;
mod observables;
mod oracles;
mod reference;

pub use coin::CoinSpec;
pub use init::{CoinInit, InitialState};
pub use observables::{entanglement_entropy, position_distribution, std_dev};
pub use oracles::{cnot_realizability, oracle_continuous_two_cycle, oracle_p1_two_cycle, CnotGate};
pub use reference::{continuous_walk, discrete_coined_walk, line_reference_hamiltonian};

use thiserror::Error;

use crate::graphs::{GraphError, LabeledGraph};
use crate::linalg::{hermitian_eig, kron, ComplexMatrix, Eigen, LinalgError, StateVector, C64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("coin: {0}")]
    Coin(String),
    #[error("state has dimension {found}, walk needs {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("truncated line too small: need {needed} sites, have {have}")]
    TruncationTooSmall { needed: usize, have: usize },
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("invalid initial state: {0}")]
    InitialState(String),
}

/// One coin sector of the Hamiltonian.
#[derive(Clone, Debug)]
struct Block {
    adjacency: ComplexMatrix,
    eigen: Option<Eigen>,
}

/// A graph, its label order (the coin basis), and a coin.
#[derive(Clone, Debug)]
pub struct HybridWalk {
    graph: LabeledGraph,
    coin_spec: CoinSpec,
    coin: ComplexMatrix,
    blocks: Vec<Block>,
}

impl HybridWalk {
    pub fn new(graph: LabeledGraph, coin_spec: CoinSpec) -> Result<Self, WalkError> {
        let coin = coin_spec.realize(graph.labels().len())?;
        let blocks = graph
            .labels()
            .iter()
            .map(|l| {
                let adjacency = graph.subgraph_adjacency(l)?.matrix;
                let eigen = if adjacency.is_zero() { None } else { Some(hermitian_eig(&adjacency)?) };
                Ok(Block { adjacency, eigen })
            })
            .collect::<Result<Vec<_>, WalkError>>()?;
        Ok(Self { graph, coin_spec, coin, blocks })
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn coin_spec(&self) -> &CoinSpec {
        &self.coin_spec
    }

    pub fn coin(&self) -> &ComplexMatrix {
        &self.coin
    }

    pub fn coin_dim(&self) -> usize {
        self.blocks.len()
    }

    pub fn pos_dim(&self) -> usize {
        self.graph.n()
    }

    pub fn dim(&self) -> usize {
        self.coin_dim() * self.pos_dim()
    }

    /// `S_c` for the `c`-th label.
    pub fn block(&self, c: usize) -> &ComplexMatrix {
        &self.blocks[c].adjacency
    }

    /// Whether the `c`-th label has no edges (its block is skipped in evolution).
    pub fn is_zero_block(&self, c: usize) -> bool {
        self.blocks[c].eigen.is_none()
    }

    /// Dense `H = sum_c |c><c| (x) S_c`.
    pub fn hamiltonian(&self) -> ComplexMatrix {
        let k = self.coin_dim();
        let mut h = ComplexMatrix::zeros(self.dim(), self.dim());
        for (c, b) in self.blocks.iter().enumerate() {
            h = &h + &kron(&ComplexMatrix::unit(k, c, c), &b.adjacency);
        }
        h
    }

    /// `e^{-iHt}`, one sector at a time.
    pub fn propagator(&self, t: f64) -> Propagator {
        Propagator {
            pos_dim: self.pos_dim(),
            sectors: self.blocks.iter().map(|b| b.eigen.as_ref().map(|e| e.propagator(t))).collect(),
        }
    }

    /// Dense `W(t) = e^{-iHt} (C (x) I)`.
    pub fn operator_matrix(&self, t: f64) -> ComplexMatrix {
        self.operator_matrix_with_coin(t, &self.coin)
    }

    pub fn operator_matrix_with_coin(&self, t: f64, coin: &ComplexMatrix) -> ComplexMatrix {
        let (k, n) = (self.coin_dim(), self.pos_dim());
        let prop = self.propagator(t);
        let mut u = ComplexMatrix::zeros(k * n, k * n);
        for (c, sector) in prop.sectors.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    u[(c * n + i, c * n + j)] = match sector {
                        Some(m) => m[(i, j)],
                        None if i == j => C64::new(1.0, 0.0),
                        None => C64::new(0.0, 0.0),
                    };
                }
            }
        }
        &u * &kron(coin, &ComplexMatrix::identity(n))
    }

    fn check_state(&self, psi: &StateVector) -> Result<(), WalkError> {
        if psi.dim() != self.dim() {
            return Err(WalkError::DimensionMismatch { expected: self.dim(), found: psi.dim() });
        }
        let n2 = psi.norm_sqr();
        if (n2 - 1.0).abs() > 1e-9 {
            return Err(WalkError::NotNormalized(n2));
        }
        Ok(())
    }

    /// One step: the coin first, then `e^{-iHt}`.
    pub fn step(&self, t: f64, psi: &StateVector) -> Result<StateVector, WalkError> {
        self.check_state(psi)?;
        let prop = self.propagator(t);
        Ok(self.step_with(&prop, &self.coin, psi))
    }

    /// Step with a precomputed propagator and an explicit coin.
    pub fn step_with(&self, prop: &Propagator, coin: &ComplexMatrix, psi: &StateVector) -> StateVector {
        let mut amps = apply_coin(coin, psi.amplitudes(), self.pos_dim());
        prop.apply_in_place(&mut amps);
        StateVector::new(amps).with_factors(self.coin_dim(), self.pos_dim()).expect("walk dimensions")
    }

    /// `(C (x) I) psi` with no evolution.
    pub fn coin_step(&self, coin: &ComplexMatrix, psi: &StateVector) -> StateVector {
        let amps = apply_coin(coin, psi.amplitudes(), self.pos_dim());
        StateVector::new(amps).with_factors(self.coin_dim(), self.pos_dim()).expect("walk dimensions")
    }

    /// `steps` applications of `W(t)` starting from `psi0`, with observables
    /// on the graph's coordinates at every step (including step 0).
    pub fn run(&self, t: f64, steps: usize, psi0: &StateVector) -> Result<Trajectory, WalkError> {
        self.check_state(psi0)?;
        let prop = self.propagator(t);
        let coords = self.graph.coordinates();
        let mut traj = Trajectory::default();
        let mut psi = psi0.clone().with_factors(self.coin_dim(), self.pos_dim())?;
        for k in 0..=steps {
            traj.record(&psi, self.coin_dim(), self.pos_dim(), &coords)?;
            if k < steps {
                psi = self.step_with(&prop, &self.coin, &psi);
            }
        }
        Ok(traj)
    }
}

/// `(C (x) I) psi` for a coin-major state.
pub fn apply_coin(coin: &ComplexMatrix, psi: &[C64], pos_dim: usize) -> Vec<C64> {
    let k = coin.rows();
    let mut out = vec![C64::new(0.0, 0.0); psi.len()];
    for c in 0..k {
        for d in 0..k {
            let w = coin[(c, d)];
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            let src = &psi[d * pos_dim..(d + 1) * pos_dim];
            for (dst, &a) in out[c * pos_dim..(c + 1) * pos_dim].iter_mut().zip(src) {
                *dst += w * a;
            }
        }
    }
    out
}

/// `e^{-iHt}` stored per coin sector; `None` sectors are the identity.
#[derive(Clone, Debug)]
pub struct Propagator {
    pos_dim: usize,
    sectors: Vec<Option<ComplexMatrix>>,
}

impl Propagator {
    pub fn sector(&self, c: usize) -> Option<&ComplexMatrix> {
        self.sectors[c].as_ref()
    }

    pub fn apply_in_place(&self, amps: &mut [C64]) {
        let n = self.pos_dim;
        for (c, sector) in self.sectors.iter().enumerate() {
            if let Some(u) = sector {
                let slice = &mut amps[c * n..(c + 1) * n];
                if slice.iter().all(|a| *a == C64::new(0.0, 0.0)) {
                    continue;
                }
                let out = u.mul_vec(slice).expect("sector dimension");
                slice.copy_from_slice(&out);
            }
        }
    }
}

/// States and per-step observables of a run.
#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub states: Vec<StateVector>,
    pub distributions: Vec<Vec<f64>>,
    pub sigmas: Vec<f64>,
    pub entropies: Vec<f64>,
}

impl Trajectory {
    pub(crate) fn record(
        &mut self,
        psi: &StateVector,
        coin_dim: usize,
        pos_dim: usize,
        coords: &[f64],
    ) -> Result<(), WalkError> {
        let p = position_distribution(psi, coin_dim, pos_dim)?;
        self.sigmas.push(std_dev(&p, coords)?);
        self.entropies.push(entanglement_entropy(psi, coin_dim, pos_dim)?);
        self.distributions.push(p);
        self.states.push(psi.clone());
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last_state(&self) -> Option<&StateVector> {
        self.states.last()
    }

    pub fn last_distribution(&self) -> Option<&[f64]> {
        self.distributions.last().map(Vec::as_slice)
    }
}
