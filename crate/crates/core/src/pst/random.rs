use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graphs::LabeledGraph;
use crate::linalg::C64;

/// A connected, properly edge-colored graph with endpoints, a path between
/// them and normalized coin amplitudes.
#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub graph: LabeledGraph,
    pub source: usize,
    pub target: usize,
    pub path: Vec<usize>,
    pub alpha: Vec<C64>,
}

const MAX_DEGREE: usize = 3;

/// Random instance with at most `max_n` vertices (at least 3) and a
/// shortest path of at most `max_path` edges.
///
/// Vertex degrees are capped at 3 so greedy coloring needs at most 5 colors.
pub fn random_instance(seed: u64, max_n: usize, max_path: usize) -> RandomInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=max_n.max(3));
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut degree = vec![0usize; n];
    for v in 1..n {
        let open: Vec<usize> = (0..v).filter(|&u| degree[u] < MAX_DEGREE).collect();
        let u = *open.choose(&mut rng).expect("a tree with degree cap 3 always has an open vertex");
        edges.push((u, v));
        degree[u] += 1;
        degree[v] += 1;
    }
    for _ in 0..rng.gen_range(0..=n) {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let (u, v) = (u.min(v), u.max(v));
        if u != v && degree[u] < MAX_DEGREE && degree[v] < MAX_DEGREE && !edges.contains(&(u, v)) {
            edges.push((u, v));
            degree[u] += 1;
            degree[v] += 1;
        }
    }
    edges.shuffle(&mut rng);

    let mut used: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut colored = Vec::with_capacity(edges.len());
    let mut num_colors = 0;
    for &(u, v) in &edges {
        let c = (0..).find(|c| !used[u].contains(c) && !used[v].contains(c)).unwrap();
        used[u].push(c);
        used[v].push(c);
        num_colors = num_colors.max(c + 1);
        colored.push((u, v, c));
    }
    let mut graph = LabeledGraph::new(n, (0..num_colors).map(|c| format!("c{c}"))).unwrap();
    for (u, v, c) in colored {
        graph.add_edge(u, v, &format!("c{c}"), 1.0).unwrap();
    }

    let (source, target, path) = loop {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let p = graph.shortest_path(a, b).expect("connected by construction");
        if p.len() - 1 <= max_path.max(1) {
            break (a, b, p);
        }
    };

    let raw: Vec<C64> = (0..num_colors).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = raw.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let alpha = raw.into_iter().map(|x| x / norm).collect();
    RandomInstance { graph, source, target, path, alpha }
}
