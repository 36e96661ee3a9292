//! Structural bounds on the effective size and the rank criterion.
//!
//! For an equilateral graph with standard coupling (Dirichlet permitted at
//! degree-1 endpoints; such vertices are never balanced and their
//! scattering blocks are full rank, so the arguments go through
//! unchanged): deleting one incoming bond per balanced vertex bounds
//! `W ≤ Nℓ − (ℓ/2)·n_bal`, isolated balanced vertices sharpen it by
//! another `(ℓ/2)` each, and a square of balanced vertices without
//! diagonals forces `W ≤ (N−3)ℓ`. Independently, the Jordan structure of
//! `S` detects when the first bound is strict: exactly when
//! `rank(S²) < rank(S) = 2N − n_bal`.

use crate::bond::bond_scattering;
use crate::error::{Error, Result};
use crate::exact::{det_rank, rat, Rat};
use crate::graph::{CouplingSpec, MetricGraph};
use crate::secular::classify_weyl;

/// Everything the structural theorems say about one graph, next to the
/// actually computed effective size.
#[derive(Debug, Clone)]
pub struct BoundReport {
    /// `Nℓ`, the total internal length.
    pub volume: Rat,
    pub n_bal: usize,
    pub n_nonneig: usize,
    /// `Nℓ − (ℓ/2)·n_bal`.
    pub bound_bal: Rat,
    /// `Nℓ − (ℓ/2)·(n_bal + n_nonneig)`.
    pub bound_main: Rat,
    /// Balanced 4-cycles without diagonals, as sorted vertex quadruples.
    pub squares: Vec<[usize; 4]>,
    /// `(N−3)ℓ`, present when `squares` is nonempty.
    pub bound_square: Option<Rat>,
    /// Effective size from the secular polynomial.
    pub w_actual: Rat,
    pub rank_s: usize,
    pub rank_s2: usize,
    /// `rank(S²) < rank(S)`: the balanced-vertex bound is strict.
    pub strict: bool,
}

/// Output of [`check_rank_criterion`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankCriterion {
    pub rank_s: usize,
    pub rank_s2: usize,
    pub strict: bool,
}

fn require_exact_standard(g: &MetricGraph) -> Result<()> {
    if !g.structural_flags().equilateral {
        return Err(Error::PreconditionViolated(
            "graph is not equilateral".into(),
        ));
    }
    for v in g.vertices() {
        if matches!(v.coupling, CouplingSpec::General(_)) {
            return Err(Error::PreconditionViolated(format!(
                "vertex `{}` has general coupling; bounds hold for standard coupling",
                v.id
            )));
        }
    }
    Ok(())
}

fn require_simple(g: &MetricGraph) -> Result<()> {
    let flags = g.structural_flags();
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
    Ok(())
}

/// The balanced/non-neighboring counts and the main bound
/// `W ≤ Nℓ − (ℓ/2)·(n_bal + n_nonneig)`.
pub fn bound_main(g: &MetricGraph) -> Result<(usize, usize, Rat)> {
    require_exact_standard(g)?;
    require_simple(g)?;
    let ell = g.common_length()?;
    let n = g.edge_count() as i64;
    let flags = g.structural_flags();
    let n_bal = g.balanced_vertices().len();
    let n_nonneig = flags.balanced_nonneighbor_count;
    let bound =
        &ell * rat(n, 1) - &ell * rat((n_bal + n_nonneig) as i64, 2);
    Ok((n_bal, n_nonneig, bound))
}

/// All squares of balanced vertices without diagonals: quadruples
/// `(a, b, c, d)` cyclically adjacent with both diagonals absent.
pub fn detect_balanced_squares(g: &MetricGraph) -> Vec<[usize; 4]> {
    let balanced = g.balanced_vertices();
    let mut squares = Vec::new();
    let n = balanced.len();
    // n_bal is small at desk scale; plain 4-subset enumeration suffices.
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    let quad = [balanced[i], balanced[j], balanced[k], balanced[l]];
                    if let Some(square) = arrange_as_square(g, quad) {
                        squares.push(square);
                    }
                }
            }
        }
    }
    squares
}

/// Try the three pairings of a 4-set into opposite corners; return the
/// cycle order when exactly the four side edges exist.
fn arrange_as_square(g: &MetricGraph, q: [usize; 4]) -> Option<[usize; 4]> {
    let orders = [
        [q[0], q[1], q[2], q[3]],
        [q[0], q[1], q[3], q[2]],
        [q[0], q[2], q[1], q[3]],
    ];
    for o in orders {
        let sides = g.neighbors(o[0], o[1])
            && g.neighbors(o[1], o[2])
            && g.neighbors(o[2], o[3])
            && g.neighbors(o[3], o[0]);
        let diagonals = g.neighbors(o[0], o[2]) || g.neighbors(o[1], o[3]);
        if sides && !diagonals {
            return Some(o);
        }
    }
    None
}

/// Exact ranks of `S` and `S²`; `strict` signals a nilpotent Jordan block,
/// i.e. an effective size strictly below the balanced-vertex bound.
/// Also asserts the theorem `rank(S) = 2N − n_bal`.
pub fn check_rank_criterion(g: &MetricGraph) -> Result<RankCriterion> {
    require_exact_standard(g)?;
    let s = bond_scattering(g)?;
    let s = s.as_exact()?;
    let (_, rank_s) = det_rank(s);
    let (_, rank_s2) = det_rank(&s.mul(s));
    let expected = 2 * g.edge_count() - g.balanced_vertices().len();
    if rank_s != expected {
        return Err(Error::InvariantViolated(format!(
            "rank(S) = {rank_s}, expected 2N − n_bal = {expected}"
        )));
    }
    Ok(RankCriterion {
        rank_s,
        rank_s2,
        strict: rank_s2 < rank_s,
    })
}

/// Full bound report for an equilateral standard-coupling graph.
pub fn bound_report(g: &MetricGraph) -> Result<BoundReport> {
    let (n_bal, n_nonneig, bound_main_value) = bound_main(g)?;
    let ell = g.common_length()?;
    let n = g.edge_count() as i64;
    let volume = g.volume();
    let bound_bal = &ell * rat(n, 1) - &ell * rat(n_bal as i64, 2);
    let squares = detect_balanced_squares(g);
    let bound_square = if squares.is_empty() {
        None
    } else {
        Some(&ell * rat(n - 3, 1))
    };
    let rank = check_rank_criterion(g)?;
    let w_actual = classify_weyl(g)?.w;

    // The bounds are theorems; a violation is a bug, not a result.
    if w_actual > bound_main_value {
        return Err(Error::InvariantViolated(format!(
            "computed W = {w_actual} exceeds the structural bound {bound_main_value}"
        )));
    }
    if let Some(bs) = &bound_square {
        if &w_actual > bs {
            return Err(Error::InvariantViolated(format!(
                "computed W = {w_actual} exceeds the square bound {bs}"
            )));
        }
    }

    Ok(BoundReport {
        volume,
        n_bal,
        n_nonneig,
        bound_bal,
        bound_main: bound_main_value,
        squares,
        bound_square,
        w_actual,
        rank_s: rank.rank_s,
        rank_s2: rank.rank_s2,
        strict: rank.strict,
    })
}
