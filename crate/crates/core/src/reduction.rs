//! Ghost-edge reduction: deleting directed bonds into balanced vertices.
//!
//! For each balanced standard-coupling vertex one incoming bond can be
//! deleted by a similarity transform `S ↦ V⁻¹·S·V` that zeroes the bond's
//! column, at the price of sign-flipped "ghost" entries in the rows of the
//! sibling bonds. The polynomial `det(z·S − I)` is unchanged, so the
//! resonance condition survives while the longest pseudo orbits shorten —
//! this is what turns the balanced-vertex count into effective-size
//! bounds.
//!
//! Requires the hypotheses of the construction: equilateral, no loops, no
//! parallel edges, and a balanced standard vertex at the deleted bond's
//! target.

use num_traits::{One, Zero};
use serde::Deserialize;

use crate::bond::BondGraph;
use crate::error::{Error, Result};
use crate::exact::{zdet_poly, Rat, RatMatrix};
use crate::graph::{CouplingSpec, MetricGraph};

/// One reduction step: delete `bond` (which must end at `vertex`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub vertex: usize,
    pub bond: usize,
}

/// An ordered list of deletions, at most one per balanced vertex.
#[derive(Debug, Clone, Default)]
pub struct ReductionPlan {
    pub steps: Vec<ReductionStep>,
}

/// A ghost entry introduced by a deletion: the amplitude from `col` into
/// `row` with the opposite sign of the original transition into the
/// deleted bond.
#[derive(Debug, Clone, PartialEq)]
pub struct GhostEntry {
    pub row: usize,
    pub col: usize,
    pub amplitude: Rat,
}

/// Result of applying a reduction plan.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub s_reduced: RatMatrix,
    /// Bonds whose columns were zeroed, in deletion order.
    pub zero_columns: Vec<usize>,
    /// Ghost entries of every step, in discovery order.
    pub ghost_entries: Vec<GhostEntry>,
}

/// JSON schema of a plan file: a list of `{vertex, bond}` records with
/// bond labels as printed by the CLI (`e1` forward, `e1^` reversed).
#[derive(Deserialize)]
struct PlanFile(Vec<PlanStepFile>);

#[derive(Deserialize)]
struct PlanStepFile {
    vertex: String,
    bond: String,
}

impl ReductionPlan {
    /// Parse a plan file against a graph and its bond graph.
    pub fn from_json_str(input: &str, g: &MetricGraph, bg: &BondGraph) -> Result<Self> {
        let file: PlanFile =
            serde_json::from_str(input).map_err(|e| Error::Parse(e.to_string()))?;
        let mut steps = Vec::new();
        for s in file.0 {
            let vertex = g
                .vertex_index(&s.vertex)
                .ok_or_else(|| Error::Parse(format!("unknown vertex `{}`", s.vertex)))?;
            let bond = bg
                .bond_by_label(g, &s.bond)
                .ok_or_else(|| Error::Parse(format!("unknown bond `{}`", s.bond)))?;
            steps.push(ReductionStep { vertex, bond });
        }
        Ok(Self { steps })
    }

    /// Default full plan: for each balanced vertex in vertex order, delete
    /// the incoming bond with smallest index.
    pub fn full_default(g: &MetricGraph, bg: &BondGraph) -> Self {
        let mut steps = Vec::new();
        for v in g.balanced_vertices() {
            let bond = (0..bg.len()).find(|&b| bg.bonds()[b].target == v);
            if let Some(bond) = bond {
                steps.push(ReductionStep { vertex: v, bond });
            }
        }
        Self { steps }
    }
}

fn check_preconditions(g: &MetricGraph, bg: &BondGraph, step: &ReductionStep) -> Result<()> {
    let flags = g.structural_flags();
    if !flags.equilateral {
        return Err(Error::PreconditionViolated(
            "graph is not equilateral".into(),
        ));
    }
    if flags.has_loops {
        return Err(Error::PreconditionViolated(
            "graph has an edge that starts and ends in one vertex".into(),
        ));
    }
    if flags.has_parallel_edges {
        return Err(Error::PreconditionViolated(
            "two vertices are connected by two or more edges".into(),
        ));
    }
    let bond = bg.bonds()[step.bond];
    if bond.target != step.vertex {
        return Err(Error::PreconditionViolated(format!(
            "bond `{}` does not end at vertex `{}`",
            bg.label(g, step.bond),
            g.vertices()[step.vertex].id
        )));
    }
    let v = bond.target;
    if !matches!(g.vertices()[v].coupling, CouplingSpec::Standard) {
        return Err(Error::PreconditionViolated(format!(
            "vertex `{}` does not carry standard coupling",
            g.vertices()[v].id
        )));
    }
    if g.internal_degree(v) != g.vertices()[v].leads {
        return Err(Error::PreconditionViolated(format!(
            "vertex `{}` is not balanced",
            g.vertices()[v].id
        )));
    }
    Ok(())
}

/// The transform matrix `V` deleting `bond`: unit diagonal plus a 1 in the
/// deleted bond's column at the rows of its sibling bonds (the other bonds
/// ending at the same vertex). `V⁻¹` carries −1 there.
pub fn deletion_transform(
    g: &MetricGraph,
    bg: &BondGraph,
    bond: usize,
) -> Result<RatMatrix> {
    let step = ReductionStep {
        vertex: bg.bonds()[bond].target,
        bond,
    };
    check_preconditions(g, bg, &step)?;
    let mut v = RatMatrix::identity(bg.len());
    for sibling in siblings(bg, bond) {
        v[(sibling, bond)] = Rat::one();
    }
    Ok(v)
}

fn inverse_of_transform(v: &RatMatrix) -> RatMatrix {
    let n = v.rows();
    RatMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Rat::one()
        } else if v[(i, j)].is_zero() {
            Rat::zero()
        } else {
            -v[(i, j)].clone()
        }
    })
}

fn siblings(bg: &BondGraph, bond: usize) -> Vec<usize> {
    let target = bg.bonds()[bond].target;
    (0..bg.len())
        .filter(|&b| b != bond && bg.bonds()[b].target == target)
        .collect()
}

/// Apply a reduction plan to the bond scattering matrix of `g`.
pub fn apply_reduction(
    g: &MetricGraph,
    bg: &BondGraph,
    s: &RatMatrix,
    plan: &ReductionPlan,
) -> Result<ReducedSystem> {
    let mut current = s.clone();
    let mut zero_columns: Vec<usize> = Vec::new();
    let mut ghost_entries: Vec<GhostEntry> = Vec::new();
    let mut ghost_rows: std::collections::HashSet<usize> = std::collections::HashSet::new();
    let mut deleted_per_vertex: std::collections::HashSet<usize> = std::collections::HashSet::new();

    for step in &plan.steps {
        check_preconditions(g, bg, step)?;
        let label = bg.label(g, step.bond);
        if ghost_rows.contains(&step.bond) {
            return Err(Error::PlanConflict {
                bond: label,
                reason: "a ghost edge from an earlier step leads to this bond".into(),
            });
        }
        if zero_columns.contains(&step.bond) {
            return Err(Error::PlanConflict {
                bond: label,
                reason: "bond was already deleted".into(),
            });
        }
        if !deleted_per_vertex.insert(step.vertex) {
            return Err(Error::PlanConflict {
                bond: label,
                reason: format!(
                    "vertex `{}` already had a bond deleted",
                    g.vertices()[step.vertex].id
                ),
            });
        }

        let v = deletion_transform(g, bg, step.bond)?;
        let v_inv = inverse_of_transform(&v);
        let next = v_inv.mul(&current).mul(&v);

        if !next.column_is_zero(step.bond) {
            return Err(Error::PlanConflict {
                bond: label,
                reason: "deletion did not zero the bond's column".into(),
            });
        }
        for row in 0..next.rows() {
            for col in 0..next.cols() {
                if col == step.bond {
                    continue;
                }
                if next[(row, col)] != current[(row, col)] {
                    ghost_rows.insert(row);
                    ghost_entries.push(GhostEntry {
                        row,
                        col,
                        amplitude: next[(row, col)].clone(),
                    });
                }
            }
        }
        zero_columns.push(step.bond);
        current = next;
    }

    Ok(ReducedSystem {
        s_reduced: current,
        zero_columns,
        ghost_entries,
    })
}

/// True iff the reduction preserved the resonance condition exactly:
/// `det(z·S − I) == det(z·S_reduced − I)` as rational polynomials.
pub fn verify_reduction(s: &RatMatrix, reduced: &ReducedSystem) -> bool {
    zdet_poly(s) == zdet_poly(&reduced.s_reduced)
}
