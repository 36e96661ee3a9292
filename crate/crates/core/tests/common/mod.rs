//! Shared helpers for integration tests: a seeded random-graph ensemble.

use nonweyl::exact::{rat, Rat};
use nonweyl::graph::{CouplingSpec, InternalEdge, MetricGraph, VertexSpec};
use rand::rngs::StdRng;
use rand::Rng;

/// Options for [`random_graph`].
#[derive(Clone, Copy)]
pub struct EnsembleOptions {
    /// Reject loops and parallel edges.
    pub simple: bool,
    /// Allow Dirichlet coupling at eligible degree-1 vertices.
    pub allow_dirichlet: bool,
    pub max_edges: usize,
}

impl Default for EnsembleOptions {
    fn default() -> Self {
        Self {
            simple: false,
            allow_dirichlet: true,
            max_edges: 4,
        }
    }
}

/// A random valid equilateral graph with standard/Dirichlet coupling,
/// `1..=max_edges` internal edges and random leads.
pub fn random_graph(rng: &mut StdRng, opts: EnsembleOptions) -> MetricGraph {
    loop {
        if let Some(g) = try_random_graph(rng, opts) {
            debug_assert!(g.validate().is_valid());
            return g;
        }
    }
}

fn try_random_graph(rng: &mut StdRng, opts: EnsembleOptions) -> Option<MetricGraph> {
    let n_vertices = rng.random_range(2..=5usize);
    let n_edges = rng.random_range(1..=opts.max_edges);
    let lengths: [Rat; 4] = [rat(1, 1), rat(1, 2), rat(3, 2), rat(2, 1)];
    let ell = lengths[rng.random_range(0..lengths.len())].clone();

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for _ in 0..n_edges {
        for _attempt in 0..32 {
            let a = rng.random_range(0..n_vertices);
            let b = rng.random_range(0..n_vertices);
            if opts.simple {
                if a == b {
                    continue;
                }
                if pairs.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a)) {
                    continue;
                }
            }
            pairs.push((a, b));
            break;
        }
    }
    if pairs.is_empty() {
        return None;
    }

    // Keep only vertices that actually touch an edge.
    let mut used: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    used.sort_unstable();
    used.dedup();
    let reindex = |v: usize| used.iter().position(|&u| u == v).unwrap();

    let mut internal_degree = vec![0usize; used.len()];
    for &(a, b) in &pairs {
        internal_degree[reindex(a)] += 1;
        internal_degree[reindex(b)] += 1;
    }

    let mut vertices = Vec::with_capacity(used.len());
    for (i, deg) in internal_degree.iter().enumerate() {
        // Bias towards balanced vertices so the non-Weyl machinery is
        // exercised; otherwise random lead counts.
        let leads = if rng.random_bool(0.4) {
            *deg
        } else {
            rng.random_range(0..=3usize)
        };
        let coupling = if opts.allow_dirichlet && *deg == 1 && leads == 0 && rng.random_bool(0.5) {
            CouplingSpec::Dirichlet
        } else {
            CouplingSpec::Standard
        };
        vertices.push(VertexSpec {
            id: format!("v{i}"),
            leads,
            coupling,
        });
    }

    let edges = pairs
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| InternalEdge {
            id: format!("e{i}"),
            from: reindex(a),
            to: reindex(b),
            length: ell.clone(),
        })
        .collect();

    let g = MetricGraph::new(vertices, edges);
    g.validate().is_valid().then_some(g)
}
