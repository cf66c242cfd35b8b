use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GraphError, LabeledGraph};

/// Every graph family the builders know about.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphFamily {
    /// Two vertices joined by label `0` (weight `a`) and label `1` (weight `b`).
    Circle2 {
        a: f64,
        b: f64,
    },
    /// Center 0 joined to leaf `j` by label `j`; label `0` is kept as an empty block.
    Star {
        n: usize,
    },
    /// Path on `2L+1` vertices, edge `(s, s+1)` labeled `s mod 2`; origin at `L`.
    Line2 {
        half_len: usize,
    },
    /// As `Line2` with labels cycling with period 3.
    Line3 {
        half_len: usize,
    },
    /// Path on `m` vertices alternately colored `b`, `r`, `b`, ... from vertex 0.
    SegmentLine {
        m: usize,
    },
    /// Fock-ladder self-loops `+-g n / 2` under labels `0`/`1`, `n = 0..=n_max`.
    FockG0 {
        n_max: usize,
        g: f64,
    },
    /// Two-mode ladder: vertex `(n, m)` carries loops `+-(n + m + 1) / 2`.
    FockG0p {
        n_max: usize,
    },
    Cycle {
        n: usize,
    },
    Complete {
        n: usize,
    },
    /// 8-vertex 3-regular graph in which vertex 0 lies on exactly one triangle.
    Bench8,
    /// 15-vertex binary tree with a proper 3-edge-coloring.
    PstTree,
    RandomRegular {
        n: usize,
        d: usize,
        seed: u64,
    },
}

fn invalid(family: &str, reason: impl Into<String>) -> GraphError {
    GraphError::InvalidParams { family: family.to_string(), reason: reason.into() }
}

pub fn build(family: &GraphFamily) -> Result<LabeledGraph, GraphError> {
    match *family {
        GraphFamily::Circle2 { a, b } => {
            let mut g = LabeledGraph::new(2, ["0", "1"])?;
            g.add_edge(0, 1, "0", a)?;
            g.add_edge(0, 1, "1", b)?;
            Ok(g)
        }
        GraphFamily::Star { n } => {
            if n < 2 {
                return Err(invalid("star", "needs at least 2 vertices"));
            }
            let mut g = LabeledGraph::new(n, (0..n).map(|j| j.to_string()))?;
            for j in 1..n {
                g.add_edge(0, j, &j.to_string(), 1.0)?;
            }
            Ok(g)
        }
        GraphFamily::Line2 { half_len } => periodic_line("line2", half_len, 2),
        GraphFamily::Line3 { half_len } => periodic_line("line3", half_len, 3),
        GraphFamily::SegmentLine { m } => {
            if m < 2 {
                return Err(invalid("segment_line", "needs at least 2 vertices"));
            }
            let mut g = LabeledGraph::new(m, ["r", "b"])?;
            for s in 0..m - 1 {
                g.add_edge(s, s + 1, if s % 2 == 0 { "b" } else { "r" }, 1.0)?;
            }
            Ok(g)
        }
        GraphFamily::FockG0 { n_max, g: coupling } => {
            if n_max < 1 {
                return Err(invalid("fock_g0", "truncation must be at least 1"));
            }
            let mut g = LabeledGraph::new(n_max + 1, ["0", "1"])?;
            for v in 0..=n_max {
                let w = coupling * v as f64 / 2.0;
                g.add_edge(v, v, "0", w)?;
                g.add_edge(v, v, "1", -w)?;
            }
            Ok(g)
        }
        GraphFamily::FockG0p { n_max } => {
            if n_max < 1 {
                return Err(invalid("fock_g0p", "truncation must be at least 1"));
            }
            let side = n_max + 1;
            let mut g = LabeledGraph::new(side * side, ["0", "1"])?;
            for na in 0..side {
                for mb in 0..side {
                    let v = na * side + mb;
                    let w = (na + mb + 1) as f64 / 2.0;
                    g.add_edge(v, v, "0", w)?;
                    g.add_edge(v, v, "1", -w)?;
                }
            }
            Ok(g)
        }
        GraphFamily::Cycle { n } => {
            if n < 3 {
                return Err(invalid("cycle", "needs at least 3 vertices"));
            }
            let mut g = LabeledGraph::new(n, ["0"])?;
            for v in 0..n {
                g.add_edge(v, (v + 1) % n, "0", 1.0)?;
            }
            Ok(g)
        }
        GraphFamily::Complete { n } => {
            if n < 2 {
                return Err(invalid("complete", "needs at least 2 vertices"));
            }
            let mut g = LabeledGraph::new(n, ["0"])?;
            for u in 0..n {
                for v in u + 1..n {
                    g.add_edge(u, v, "0", 1.0)?;
                }
            }
            Ok(g)
        }
        GraphFamily::Bench8 => Ok(bench8()),
        GraphFamily::PstTree => Ok(pst_tree()),
        GraphFamily::RandomRegular { n, d, seed } => random_regular(n, d, seed),
    }
}

fn periodic_line(name: &str, half_len: usize, period: usize) -> Result<LabeledGraph, GraphError> {
    if half_len < 1 {
        return Err(invalid(name, "half length must be at least 1"));
    }
    let n = 2 * half_len + 1;
    let mut g = LabeledGraph::new(n, (0..period).map(|p| p.to_string()))?;
    for s in 0..n - 1 {
        g.add_edge(s, s + 1, &(s % period).to_string(), 1.0)?;
    }
    g.with_origin(half_len)
}

/// Edges `01 02 12 03 14 25 46 47 56 57 36 37`: 3-regular, and vertex 0 lies
/// on exactly one triangle (0-1-2), so `(A^3)_{00} = 2`.
pub fn bench8() -> LabeledGraph {
    const EDGES: [(usize, usize); 12] =
        [(0, 1), (0, 2), (1, 2), (0, 3), (1, 4), (2, 5), (4, 6), (4, 7), (5, 6), (5, 7), (3, 6), (3, 7)];
    let mut g = LabeledGraph::new(8, ["0"]).unwrap();
    for (u, v) in EDGES {
        g.add_edge(u, v, "0", 1.0).unwrap();
    }
    g
}

/// Complete binary tree on 15 vertices (children of `v` are `2v+1`, `2v+2`).
/// The root's children get labels 0 and 1; below that each vertex gives its
/// children the two labels not used by its parent edge, smaller label left.
/// The transfer target `14` is `1110` in binary.
pub fn pst_tree() -> LabeledGraph {
    let mut g = LabeledGraph::new(15, ["0", "1", "2"]).unwrap();
    let mut parent_color = [usize::MAX; 15];
    for v in 0..7 {
        let free: Vec<usize> = (0..3).filter(|&c| c != parent_color[v]).take(2).collect();
        for (k, child) in [2 * v + 1, 2 * v + 2].into_iter().enumerate() {
            g.add_edge(v, child, &free[k].to_string(), 1.0).unwrap();
            parent_color[child] = free[k];
        }
    }
    g
}

/// Uniform-ish random simple `d`-regular graph on `n` vertices via the
/// pairing model with rejection, seeded for reproducibility.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<LabeledGraph, GraphError> {
    if d == 0 || d >= n || (n * d) % 2 != 0 {
        return Err(invalid("random_regular", format!("no simple {d}-regular graph on {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    'attempt: for _ in 0..100_000 {
        stubs.shuffle(&mut rng);
        let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(n * d / 2);
        for p in stubs.chunks(2) {
            let (u, v) = (p[0].min(p[1]), p[0].max(p[1]));
            if u == v || pairs.contains(&(u, v)) {
                continue 'attempt;
            }
            pairs.push((u, v));
        }
        pairs.sort_unstable();
        let mut g = LabeledGraph::new(n, ["0"])?;
        for (u, v) in pairs {
            g.add_edge(u, v, "0", 1.0)?;
        }
        return Ok(g);
    }
    Err(invalid("random_regular", "pairing model did not produce a simple graph"))
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Circle2 { a, b } => write!(f, "circle2:{a},{b}"),
            Self::Star { n } => write!(f, "star:{n}"),
            Self::Line2 { half_len } => write!(f, "line2:{half_len}"),
            Self::Line3 { half_len } => write!(f, "line3:{half_len}"),
            Self::SegmentLine { m } => write!(f, "segment_line:{m}"),
            Self::FockG0 { n_max, g } => write!(f, "fock_g0:{n_max},{g}"),
            Self::FockG0p { n_max } => write!(f, "fock_g0p:{n_max}"),
            Self::Cycle { n } => write!(f, "cycle:{n}"),
            Self::Complete { n } => write!(f, "complete:{n}"),
            Self::Bench8 => write!(f, "bench8"),
            Self::PstTree => write!(f, "pst_tree"),
            Self::RandomRegular { n, d, seed } => write!(f, "random_regular:{n},{d},{seed}"),
        }
    }
}

/// Parses `name[:p1,p2,...]`, e.g. `star:10`, `circle2:2,3`, `line3:108`.
impl FromStr for GraphFamily {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let params: Vec<&str> = if rest.is_empty() { vec![] } else { rest.split(',').map(str::trim).collect() };
        let arity = |k: usize| -> Result<(), GraphError> {
            if params.len() != k {
                return Err(invalid(name, format!("expected {k} parameter(s), got {}", params.len())));
            }
            Ok(())
        };
        let int = |i: usize| -> Result<usize, GraphError> {
            params[i].parse().map_err(|_| invalid(name, format!("bad integer {:?}", params[i])))
        };
        let real = |i: usize| -> Result<f64, GraphError> {
            params[i].parse().map_err(|_| invalid(name, format!("bad number {:?}", params[i])))
        };
        Ok(match name {
            "circle2" => {
                arity(2)?;
                Self::Circle2 { a: real(0)?, b: real(1)? }
            }
            "star" => {
                arity(1)?;
                Self::Star { n: int(0)? }
            }
            "line2" => {
                arity(1)?;
                Self::Line2 { half_len: int(0)? }
            }
            "line3" => {
                arity(1)?;
                Self::Line3 { half_len: int(0)? }
            }
            "segment_line" => {
                arity(1)?;
                Self::SegmentLine { m: int(0)? }
            }
            "fock_g0" => {
                arity(2)?;
                Self::FockG0 { n_max: int(0)?, g: real(1)? }
            }
            "fock_g0p" => {
                arity(1)?;
                Self::FockG0p { n_max: int(0)? }
            }
            "cycle" => {
                arity(1)?;
                Self::Cycle { n: int(0)? }
            }
            "complete" => {
                arity(1)?;
                Self::Complete { n: int(0)? }
            }
            "bench8" => {
                arity(0)?;
                Self::Bench8
            }
            "pst_tree" => {
                arity(0)?;
                Self::PstTree
            }
            "random_regular" => {
                arity(3)?;
                Self::RandomRegular { n: int(0)?, d: int(1)?, seed: int(2)? as u64 }
            }
            other => return Err(invalid(other, "unknown graph family")),
        })
    }
}
