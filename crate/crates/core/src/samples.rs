//! Ready-made graphs used throughout the documentation and test suite.

use crate::exact::rat;
use crate::graph::{CouplingSpec, InternalEdge, MetricGraph, VertexSpec};

fn standard(id: &str, leads: usize) -> VertexSpec {
    VertexSpec {
        id: id.into(),
        leads,
        coupling: CouplingSpec::Standard,
    }
}

fn dirichlet(id: &str) -> VertexSpec {
    VertexSpec {
        id: id.into(),
        leads: 0,
        coupling: CouplingSpec::Dirichlet,
    }
}

fn edge(id: &str, from: usize, to: usize) -> InternalEdge {
    InternalEdge {
        id: id.into(),
        from,
        to,
        length: rat(1, 1),
    }
}

/// Star of three unit edges into a central vertex carrying three leads;
/// the spare ends are Dirichlet. The central vertex is balanced, so the
/// graph is non-Weyl with effective size 2ℓ out of volume 3ℓ.
pub fn three_star() -> MetricGraph {
    MetricGraph::new(
        vec![dirichlet("v1"), dirichlet("v2"), dirichlet("v3"), standard("v4", 3)],
        vec![edge("e1", 0, 3), edge("e2", 1, 3), edge("e3", 2, 3)],
    )
}

/// Unit square `v1 v2 v3 v4` with the diagonal `v4–v2`, every vertex
/// balanced (two leads on the degree-2 corners, three on the diagonal's
/// endpoints). Effective size 5ℓ/2.
pub fn square_with_diagonal() -> MetricGraph {
    MetricGraph::new(
        vec![standard("v1", 2), standard("v2", 3), standard("v3", 2), standard("v4", 3)],
        vec![
            edge("e1", 0, 1),
            edge("e2", 1, 2),
            edge("e3", 2, 3),
            edge("e4", 3, 0),
            edge("e5", 3, 1),
        ],
    )
}

/// Complete graph on four vertices, unit edges, three leads per vertex:
/// every vertex balanced. Effective size 4ℓ.
pub fn complete_k4() -> MetricGraph {
    // Edge orientation: 1: a→b, 2: b→c, 3: c→d, 4: d→a, 5: d→b, 6: a→c.
    MetricGraph::new(
        vec![standard("a", 3), standard("b", 3), standard("c", 3), standard("d", 3)],
        vec![
            edge("e1", 0, 1),
            edge("e2", 1, 2),
            edge("e3", 2, 3),
            edge("e4", 3, 0),
            edge("e5", 3, 1),
            edge("e6", 0, 2),
        ],
    )
}

/// A single unit edge with Dirichlet conditions at both ends: the compact
/// interval, whose spectrum is k = nπ/ℓ.
pub fn dirichlet_interval() -> MetricGraph {
    MetricGraph::new(
        vec![dirichlet("v1"), dirichlet("v2")],
        vec![edge("e1", 0, 1)],
    )
}

/// Plain 4-cycle with two leads per vertex: a balanced square without
/// diagonals, the hypothesis of the square bound.
pub fn balanced_square() -> MetricGraph {
    MetricGraph::new(
        vec![standard("v1", 2), standard("v2", 2), standard("v3", 2), standard("v4", 2)],
        vec![
            edge("e1", 0, 1),
            edge("e2", 1, 2),
            edge("e3", 2, 3),
            edge("e4", 3, 0),
        ],
    )
}
