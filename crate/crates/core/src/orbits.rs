//! Irreducible pseudo orbits and the combinatorial resonance condition.
//!
//! Periodic orbits on the doubled graph are modeled as simple cycles in
//! *bond space* (nodes = directed bonds, arcs = allowed transitions, i.e.
//! nonzero entries of `S`). A pseudo orbit is a set of periodic orbits; it
//! is irreducible when no directed bond repeats, which in bond space means
//! the cycles are pairwise disjoint. Expanding `det(z·S − I)` into
//! permutations decomposes every term into exactly such a disjoint cycle
//! collection, with sign `(−1)^m` for `m` cycles — the coefficient of
//! `z^t` is the sum of `(−1)^m·A` over irreducible pseudo orbits on `t`
//! bonds, so the combinatorial sum rebuilds the secular polynomial and
//! serves as an independent oracle for the determinant route.
//!
//! Ghost-edge reduced matrices pass through transparently: a ghost
//! transition is just an entry of the transformed matrix, and a deleted
//! bond never appears because its column is zero.

use num_traits::{One, Zero};

use crate::bond::{bond_scattering_with, BondGraph};
use crate::error::{Error, Result};
use crate::exact::{Rat, RatMatrix, RatPoly};
use crate::graph::MetricGraph;
use crate::secular::{SecularCoeffs, SecularPolynomial};

/// Default cap on enumerated cycles and pseudo-orbit collections.
pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

/// A periodic orbit: a simple cycle in bond space with its exact amplitude
/// (product of `S` entries along the transitions). Stored in canonical
/// rotation (smallest bond index first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicOrbit {
    pub bonds: Vec<usize>,
    pub amplitude: Rat,
}

impl PeriodicOrbit {
    pub fn bond_count(&self) -> usize {
        self.bonds.len()
    }
}

/// An irreducible pseudo orbit: bond-disjoint periodic orbits.
#[derive(Debug, Clone)]
pub struct IrreduciblePseudoOrbit {
    pub orbits: Vec<PeriodicOrbit>,
    /// Number of periodic orbits, `m`.
    pub m: usize,
    pub total_bonds: usize,
    /// Product of the orbit amplitudes (1 for the empty pseudo orbit).
    pub amplitude: Rat,
}

/// All simple cycles of the bond transition digraph, by Johnson's
/// algorithm, with exact amplitudes from `s`.
///
/// The digraph has an arc `b → b′` when `s[b′, b] ≠ 0` (a wave can leave
/// bond `b` into bond `b′`). Self-loops become one-bond cycles. Output is
/// sorted by (length, bond sequence) and capped at `cap` cycles.
pub fn enumerate_cycles(s: &RatMatrix, cap: usize) -> Result<Vec<PeriodicOrbit>> {
    let n = s.rows();
    // successors[b] = bonds reachable from b, ascending.
    let successors: Vec<Vec<usize>> = (0..n)
        .map(|b| (0..n).filter(|&b2| !s[(b2, b)].is_zero()).collect())
        .collect();

    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        // Johnson's CIRCUIT procedure on the subgraph of nodes ≥ start;
        // every cycle found begins at its smallest node, which makes the
        // emitted rotation canonical for free.
        let mut blocked = vec![false; n];
        let mut blist: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut path: Vec<usize> = vec![start];
        blocked[start] = true;
        let succ = |node: usize| -> Vec<usize> {
            successors[node]
                .iter()
                .copied()
                .filter(|&b| b >= start)
                .collect()
        };
        let mut stack: Vec<(usize, Vec<usize>, bool)> = vec![(start, succ(start), false)];
        while let Some((node, pending, found)) = stack.last_mut() {
            if let Some(next) = pending.pop() {
                if next == *node && next == start {
                    // Self-loop.
                    cycles.push(vec![start]);
                    if cycles.len() > cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    *found = true;
                    continue;
                }
                if next == start {
                    cycles.push(path.clone());
                    if cycles.len() > cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    *found = true;
                } else if !blocked[next] {
                    path.push(next);
                    blocked[next] = true;
                    let next_pending = succ(next);
                    stack.push((next, next_pending, false));
                }
                continue;
            }
            // Exhausted this node.
            let node = *node;
            let found = *found;
            stack.pop();
            path.pop();
            if found {
                unblock(node, &mut blocked, &mut blist);
                if let Some(parent) = stack.last_mut() {
                    parent.2 = true;
                }
            } else {
                for &w in &succ(node) {
                    if !blist[w].contains(&node) {
                        blist[w].push(node);
                    }
                }
            }
        }
    }

    cycles.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(cycles
        .into_iter()
        .map(|bonds| {
            let mut amplitude = Rat::one();
            for i in 0..bonds.len() {
                let from = bonds[i];
                let to = bonds[(i + 1) % bonds.len()];
                amplitude *= s[(to, from)].clone();
            }
            PeriodicOrbit { bonds, amplitude }
        })
        .collect())
}

fn unblock(node: usize, blocked: &mut [bool], blist: &mut [Vec<usize>]) {
    let mut queue = vec![node];
    while let Some(v) = queue.pop() {
        if blocked[v] {
            blocked[v] = false;
            queue.append(&mut blist[v]);
        }
    }
}

/// Enumerate bond-disjoint collections of the given cycles, reporting each
/// to `visit` (including the empty collection). Deterministic order:
/// cycles are taken in their sorted order, collections in lexicographic
/// order of cycle indices.
fn for_each_disjoint_collection(
    cycles: &[PeriodicOrbit],
    cap: usize,
    visit: &mut impl FnMut(&[usize], usize, &Rat),
) -> Result<()> {
    assert!(
        cycles.iter().flat_map(|c| &c.bonds).all(|&b| b < 128),
        "bond indices beyond the 128-bit disjointness mask"
    );
    struct Search<'a> {
        cycles: &'a [PeriodicOrbit],
        masks: Vec<u128>,
        chosen: Vec<usize>,
        visited: usize,
        cap: usize,
    }
    impl Search<'_> {
        fn run(
            &mut self,
            start: usize,
            used: u128,
            total: usize,
            amp: Rat,
            visit: &mut impl FnMut(&[usize], usize, &Rat),
        ) -> Result<()> {
            self.visited += 1;
            if self.visited > self.cap {
                return Err(Error::CapExceeded { cap: self.cap });
            }
            visit(&self.chosen, total, &amp);
            for j in start..self.cycles.len() {
                if self.masks[j] & used == 0 {
                    self.chosen.push(j);
                    self.run(
                        j + 1,
                        used | self.masks[j],
                        total + self.cycles[j].bonds.len(),
                        &amp * &self.cycles[j].amplitude,
                        visit,
                    )?;
                    self.chosen.pop();
                }
            }
            Ok(())
        }
    }
    let masks = cycles
        .iter()
        .map(|c| c.bonds.iter().fold(0u128, |m, &b| m | (1 << b)))
        .collect();
    Search {
        cycles,
        masks,
        chosen: Vec::new(),
        visited: 0,
        cap,
    }
    .run(0, 0, 0, Rat::one(), visit)
}

/// Rebuild the secular polynomial combinatorially from irreducible pseudo
/// orbits: coefficient of `z^t` is `Σ (−1)^m · A` over pseudo orbits on
/// `t` bonds.
pub fn expansion_polynomial(g: &MetricGraph, cap: usize) -> Result<SecularPolynomial> {
    let ell = g.common_length()?;
    let bg = BondGraph::build(g);
    let s = bond_scattering_with(g, &bg)?;
    let s = s.as_exact()?;
    let p = expansion_poly_of_matrix(s, cap)?;
    let n_zero_eigs = bg.len() - p.degree();
    Ok(SecularPolynomial {
        poly: SecularCoeffs::Exact(p),
        ell,
        n_zero_eigs,
    })
}

/// Expansion polynomial of an explicit bond matrix (used to cross-check
/// ghost-edge reduced systems, whose matrix is no longer `Q·Σ̃` of any
/// graph).
pub fn expansion_poly_of_matrix(s: &RatMatrix, cap: usize) -> Result<RatPoly> {
    let cycles = enumerate_cycles(s, cap)?;
    let mut coeffs = vec![Rat::from_integer(0.into()); s.rows() + 1];
    for_each_disjoint_collection(&cycles, cap, &mut |chosen, total, amp| {
        if chosen.len() % 2 == 0 {
            coeffs[total] += amp;
        } else {
            coeffs[total] -= amp;
        }
    })?;
    Ok(RatPoly::new(coeffs))
}

/// Inventory of irreducible pseudo orbits with at most `max_bonds` bonds,
/// grouped by total bond count.
pub fn orbit_report(
    g: &MetricGraph,
    max_bonds: usize,
    cap: usize,
) -> Result<Vec<IrreduciblePseudoOrbit>> {
    let bg = BondGraph::build(g);
    let s = bond_scattering_with(g, &bg)?;
    let s = s.as_exact()?;
    let cycles: Vec<PeriodicOrbit> = enumerate_cycles(s, cap)?
        .into_iter()
        .filter(|c| c.bonds.len() <= max_bonds)
        .collect();
    let mut out = Vec::new();
    for_each_disjoint_collection(&cycles, cap, &mut |chosen, total, amp| {
        if total <= max_bonds {
            out.push(IrreduciblePseudoOrbit {
                orbits: chosen.iter().map(|&j| cycles[j].clone()).collect(),
                m: chosen.len(),
                total_bonds: total,
                amplitude: amp.clone(),
            });
        }
    })?;
    // Group by size, then by orbit content, deterministically.
    out.sort_by(|a, b| {
        a.total_bonds.cmp(&b.total_bonds).then_with(|| {
            let ka: Vec<&[usize]> = a.orbits.iter().map(|o| o.bonds.as_slice()).collect();
            let kb: Vec<&[usize]> = b.orbits.iter().map(|o| o.bonds.as_slice()).collect();
            ka.cmp(&kb)
        })
    });
    Ok(out)
}
