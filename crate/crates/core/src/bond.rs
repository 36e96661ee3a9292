//! The doubled directed graph and its bond scattering matrix.
//!
//! Each internal edge is replaced by two oppositely oriented bonds; leads
//! are cut off. Bonds are indexed `0..N` for the forward copies (oriented
//! along each edge's `from → to` parametrization, in edge-list order) and
//! `N..2N` for the reversals, so the reversal pairing is `b ↔ b + N (mod
//! 2N)` and the swap matrix `Q` is the block anti-diagonal
//! `[[0, I_N], [I_N, 0]]`.
//!
//! The bond scattering matrix is `S = Q·Σ̃` with `Σ̃` carrying the vertex
//! scattering blocks: `S[b, b′]` is the amplitude for a wave leaving bond
//! `b′` to continue into bond `b`, nonzero only when `b′` ends where `b`
//! starts, with value `σ̃_v[slot of b's departing end, slot of b′'s
//! arriving end]` at that vertex. Rows and columns printed for a graph
//! whose edges are listed in display order therefore match the vertex
//! block layout with no further relabeling.

use crate::coupling::VertexScattering;
use crate::error::{Error, Result};
use crate::exact::{C64, CMatrix, Rat, RatMatrix};
use crate::graph::{EdgeEnd, MetricGraph};

/// One directed bond of the doubled graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bond {
    /// Underlying internal edge index.
    pub edge: usize,
    pub source: usize,
    pub target: usize,
    /// False for the forward copy (along `from → to`).
    pub reversed: bool,
}

impl Bond {
    /// Edge end through which the bond leaves its source vertex.
    pub fn departing_end(&self) -> EdgeEnd {
        if self.reversed { EdgeEnd::To } else { EdgeEnd::From }
    }

    /// Edge end through which the bond arrives at its target vertex.
    pub fn arriving_end(&self) -> EdgeEnd {
        if self.reversed { EdgeEnd::From } else { EdgeEnd::To }
    }
}

/// The doubled directed graph: 2N bonds with reversal pairing.
#[derive(Debug, Clone)]
pub struct BondGraph {
    bonds: Vec<Bond>,
    n_edges: usize,
}

impl BondGraph {
    /// Construct the doubled graph; leads are discarded.
    pub fn build(g: &MetricGraph) -> Self {
        let n = g.edge_count();
        let mut bonds = Vec::with_capacity(2 * n);
        for (idx, e) in g.edges().iter().enumerate() {
            bonds.push(Bond {
                edge: idx,
                source: e.from,
                target: e.to,
                reversed: false,
            });
        }
        for (idx, e) in g.edges().iter().enumerate() {
            bonds.push(Bond {
                edge: idx,
                source: e.to,
                target: e.from,
                reversed: true,
            });
        }
        Self { bonds, n_edges: n }
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    /// Number of bonds, `2N`.
    pub fn len(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bonds.is_empty()
    }

    /// Index of the oppositely oriented copy of a bond.
    pub fn reversal(&self, b: usize) -> usize {
        (b + self.n_edges) % (2 * self.n_edges)
    }

    /// The swap permutation `Q` as an exact matrix.
    pub fn q_matrix(&self) -> RatMatrix {
        let len = self.len();
        RatMatrix::from_fn(len, len, |i, j| {
            if self.reversal(i) == j {
                num_traits::One::one()
            } else {
                num_traits::Zero::zero()
            }
        })
    }

    /// Per-bond lengths (`L` diagonal); both copies of an edge share its
    /// length.
    pub fn lengths(&self, g: &MetricGraph) -> Vec<Rat> {
        self.bonds
            .iter()
            .map(|b| g.edges()[b.edge].length.clone())
            .collect()
    }

    /// Display label: the edge id, with a trailing `^` for the reversal.
    pub fn label(&self, g: &MetricGraph, b: usize) -> String {
        let bond = &self.bonds[b];
        let id = &g.edges()[bond.edge].id;
        if bond.reversed {
            format!("{id}^")
        } else {
            id.clone()
        }
    }

    /// Parse a bond label produced by [`BondGraph::label`].
    pub fn bond_by_label(&self, g: &MetricGraph, label: &str) -> Option<usize> {
        let (id, reversed) = match label.strip_suffix('^') {
            Some(rest) => (rest, true),
            None => (label, false),
        };
        let edge = g.edges().iter().position(|e| e.id == id)?;
        Some(if reversed { edge + self.n_edges } else { edge })
    }
}

/// A bond matrix: exact when every vertex admits an exact scattering
/// matrix, otherwise evaluated per spectral point.
#[derive(Debug, Clone)]
pub enum BondMatrix {
    Exact(RatMatrix),
    Sampled(SampledBondMatrix),
}

impl BondMatrix {
    /// Evaluate at a spectral point (constant for the exact kind).
    pub fn eval(&self, k: C64) -> Result<CMatrix> {
        match self {
            Self::Exact(m) => Ok(m.to_cmatrix()),
            Self::Sampled(s) => s.eval(k),
        }
    }

    /// Exact matrix, or an error naming the first general-coupling vertex.
    pub fn as_exact(&self) -> Result<&RatMatrix> {
        match self {
            Self::Exact(m) => Ok(m),
            Self::Sampled(s) => Err(Error::NotExact {
                vertex: s.first_sampled_vertex.clone(),
            }),
        }
    }

    /// Structural nonzero pattern; the sampled kind probes one generic
    /// point.
    pub fn support(&self) -> Result<Vec<Vec<bool>>> {
        match self {
            Self::Exact(m) => Ok(m.support()),
            Self::Sampled(s) => {
                let probe = s.eval(crate::coupling::K_INDEPENDENCE_PROBES[0])?;
                let scale = probe.max_abs().max(1.0);
                Ok((0..probe.rows())
                    .map(|i| {
                        (0..probe.cols())
                            .map(|j| probe[(i, j)].norm() > 1e-12 * scale)
                            .collect()
                    })
                    .collect())
            }
        }
    }
}

/// Deferred bond matrix for graphs with general coupling.
#[derive(Debug, Clone)]
pub struct SampledBondMatrix {
    scatterings: Vec<VertexScattering>,
    bonds: Vec<Bond>,
    arrival_slots: Vec<usize>,
    apply_q: bool,
    first_sampled_vertex: String,
}

impl SampledBondMatrix {
    fn eval(&self, k: C64) -> Result<CMatrix> {
        let evaluated: Vec<CMatrix> = self
            .scatterings
            .iter()
            .map(|vs| vs.eval(k))
            .collect::<Result<_>>()?;
        let len = self.bonds.len();
        let n = len / 2;
        Ok(CMatrix::from_fn(len, len, |row, col| {
            let b = if self.apply_q { (row + n) % len } else { row };
            let bond = self.bonds[b];
            let other = self.bonds[col];
            if bond.target == other.target {
                evaluated[bond.target][(self.arrival_slots[b], self.arrival_slots[col])]
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }
}

/// Assemble `Σ̃`: the matrix carrying the vertex scattering blocks in the
/// bond basis, grouped by the vertex each bond ends at.
pub fn assemble_sigma(g: &MetricGraph, bg: &BondGraph) -> Result<BondMatrix> {
    let scatterings: Vec<VertexScattering> = (0..g.vertices().len())
        .map(|v| VertexScattering::for_vertex(g, v))
        .collect::<Result<_>>()?;
    build_matrix(g, bg, &scatterings, false)
}

/// The bond scattering matrix `S = Q·Σ̃` of a graph.
pub fn bond_scattering(g: &MetricGraph) -> Result<BondMatrix> {
    let bg = BondGraph::build(g);
    bond_scattering_with(g, &bg)
}

/// As [`bond_scattering`], reusing an already-built bond graph.
pub fn bond_scattering_with(g: &MetricGraph, bg: &BondGraph) -> Result<BondMatrix> {
    let scatterings: Vec<VertexScattering> = (0..g.vertices().len())
        .map(|v| VertexScattering::for_vertex(g, v))
        .collect::<Result<_>>()?;
    build_matrix(g, bg, &scatterings, true)
}

fn build_matrix(
    g: &MetricGraph,
    bg: &BondGraph,
    scatterings: &[VertexScattering],
    apply_q: bool,
) -> Result<BondMatrix> {
    let len = bg.len();
    // Slot of each bond's arriving edge end at its target vertex. The
    // reversal of a bond arrives through the end the bond departs from,
    // so these slots also index departures after the Q swap.
    let arrival_slots: Vec<usize> = bg
        .bonds()
        .iter()
        .map(|b| g.slot_of(b.target, b.edge, b.arriving_end()))
        .collect();

    if scatterings.iter().all(VertexScattering::is_exact) {
        let blocks: Vec<&RatMatrix> = scatterings
            .iter()
            .map(|vs| match vs {
                VertexScattering::Exact(m) => m,
                VertexScattering::Sampled(_) => unreachable!(),
            })
            .collect();
        let m = RatMatrix::from_fn(len, len, |row, col| {
            let b = if apply_q { bg.reversal(row) } else { row };
            let bond = bg.bonds()[b];
            let other = bg.bonds()[col];
            if bond.target == other.target {
                blocks[bond.target][(arrival_slots[b], arrival_slots[col])].clone()
            } else {
                num_traits::Zero::zero()
            }
        });
        Ok(BondMatrix::Exact(m))
    } else {
        let first_sampled_vertex = scatterings
            .iter()
            .position(|vs| !vs.is_exact())
            .map(|v| g.vertices()[v].id.clone())
            .unwrap_or_default();
        Ok(BondMatrix::Sampled(SampledBondMatrix {
            scatterings: scatterings.to_vec(),
            bonds: bg.bonds().to_vec(),
            arrival_slots,
            apply_q,
            first_sampled_vertex,
        }))
    }
}
