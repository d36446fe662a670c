//!
//! Maximum mean-weight cycle in a weighted digraph
//!
//! Karp's algorithm run from a virtual source joined to every node. The
//! witness cycle is read off the optimal `n`-edge walk; its mean is
//! recomputed from the edge weights so the reported value and the witness
//! always agree.
//!

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CycleError {
    #[error("graph has no directed cycle")]
    NoCycle,
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("edge {0} has a non-finite weight")]
    NonFiniteWeight(usize),
    #[error("edge {edge} references node {node} outside 0..{n}")]
    BadNode { edge: usize, node: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedEdge {
    pub from: usize,
    pub to: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Digraph {
    pub n: usize,
    pub edges: Vec<WeightedEdge>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, weight: f64) -> usize {
        self.edges.push(WeightedEdge { from, to, weight });
        self.edges.len() - 1
    }

    fn check(&self) -> Result<(), CycleError> {
        if self.n == 0 {
            return Err(CycleError::EmptyGraph);
        }
        for (i, e) in self.edges.iter().enumerate() {
            if !e.weight.is_finite() {
                return Err(CycleError::NonFiniteWeight(i));
            }
            for node in [e.from, e.to] {
                if node >= self.n {
                    return Err(CycleError::BadNode {
                        edge: i,
                        node,
                        n: self.n,
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanCycle {
    pub mean: f64,
    /// Edge indices into `Digraph::edges`, in traversal order.
    pub edges: Vec<usize>,
}

/// Mean weight of a cycle given by edge indices.
pub fn cycle_mean(graph: &Digraph, edges: &[usize]) -> f64 {
    edges.iter().map(|&e| graph.edges[e].weight).sum::<f64>() / edges.len() as f64
}

/// Maximum mean-weight directed cycle with a witness.
pub fn max_mean_cycle(graph: &Digraph) -> Result<MeanCycle, CycleError> {
    graph.check()?;
    let n = graph.n;

    // best[k][v]: max weight of a k-edge walk ending at v (from anywhere)
    let mut best = vec![vec![f64::NEG_INFINITY; n]; n + 1];
    let mut pred: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n + 1];
    best[0].iter_mut().for_each(|d| *d = 0.0);
    for k in 1..=n {
        for (ei, e) in graph.edges.iter().enumerate() {
            let prev = best[k - 1][e.from];
            if prev == f64::NEG_INFINITY {
                continue;
            }
            let cand = prev + e.weight;
            if cand > best[k][e.to] {
                best[k][e.to] = cand;
                pred[k][e.to] = Some(ei);
            }
        }
    }

    // max over v of min over k of (best[n][v] - best[k][v]) / (n - k)
    let mut optimum: Option<(f64, usize)> = None;
    #[allow(clippy::needless_range_loop)]
    for v in 0..n {
        if best[n][v] == f64::NEG_INFINITY {
            continue;
        }
        let worst = (0..n)
            .filter(|&k| best[k][v] > f64::NEG_INFINITY)
            .map(|k| (best[n][v] - best[k][v]) / (n - k) as f64)
            .fold(f64::INFINITY, f64::min);
        if optimum.is_none_or(|(m, _)| worst > m) {
            optimum = Some((worst, v));
        }
    }
    let (karp_mean, v_star) = optimum.ok_or(CycleError::NoCycle)?;

    // walk back n edges from v_star and keep the best cycle on the walk
    let mut walk_nodes = vec![v_star];
    let mut walk_edges = Vec::with_capacity(n);
    let mut v = v_star;
    for k in (1..=n).rev() {
        let ei = pred[k][v].expect("finite walk has predecessors");
        walk_edges.push(ei);
        v = graph.edges[ei].from;
        walk_nodes.push(v);
    }
    walk_nodes.reverse();
    walk_edges.reverse();

    let mut witness: Option<MeanCycle> = None;
    let mut last_seen = vec![usize::MAX; n];
    for (pos, &node) in walk_nodes.iter().enumerate() {
        if last_seen[node] != usize::MAX {
            let start = last_seen[node];
            let edges = walk_edges[start..pos].to_vec();
            let mean = cycle_mean(graph, &edges);
            if witness.as_ref().is_none_or(|w| mean > w.mean) {
                witness = Some(MeanCycle { mean, edges });
            }
        }
        last_seen[node] = pos;
    }
    let witness = witness.expect("an n-edge walk on n nodes repeats a node");
    debug_assert!(
        (witness.mean - karp_mean).abs() <= 1e-9 * (1.0 + karp_mean.abs()),
        "witness mean {} differs from Karp value {}",
        witness.mean,
        karp_mean
    );
    Ok(witness)
}
