//! End-to-end walk-through on a bundled sample graph: classification,
//! secular polynomial, resonance families, pseudo-orbit cross-check and
//! a ghost-edge reduction.
//!
//! Run with `cargo run -p nonweyl --example analyze`.

use nonweyl::bond::{bond_scattering_with, BondGraph};
use nonweyl::exact::format_rat;
use nonweyl::orbits::DEFAULT_ORBIT_CAP;
use nonweyl::reduction::ReductionPlan;
use nonweyl::{samples, Verdict};

fn main() -> nonweyl::Result<()> {
    let graph = samples::square_with_diagonal();

    let class = nonweyl::classify_weyl(&graph)?;
    println!(
        "verdict: {}, W = {}, volume = {}",
        match class.verdict {
            Verdict::Weyl => "Weyl",
            Verdict::NonWeyl => "non-Weyl",
        },
        format_rat(&class.w),
        format_rat(&class.volume),
    );

    let sp = nonweyl::secular_polynomial(&graph)?;
    println!("P(z) = {}", sp.poly.as_exact()?.display_in("z"));

    for family in nonweyl::resonance_families(&graph)? {
        println!(
            "eigenvalue c = {:.4} with multiplicity {}; k_0 = {:.4}",
            family.c,
            family.multiplicity,
            family.k_at(0, 1.0),
        );
    }

    // The combinatorial expansion over irreducible pseudo orbits must
    // rebuild the same polynomial exactly.
    let expansion = nonweyl::expansion_polynomial(&graph, DEFAULT_ORBIT_CAP)?;
    assert_eq!(expansion.poly.as_exact()?, sp.poly.as_exact()?);
    println!("pseudo-orbit expansion agrees exactly");

    // Delete one bond per balanced vertex; the resonance condition is
    // invariant under the similarity transform.
    let bg = BondGraph::build(&graph);
    let s = bond_scattering_with(&graph, &bg)?.as_exact()?.clone();
    let plan = ReductionPlan::full_default(&graph, &bg);
    let reduced = nonweyl::apply_reduction(&graph, &bg, &s, &plan)?;
    assert!(nonweyl::verify_reduction(&s, &reduced));
    println!(
        "reduction deleted {} bonds and preserved the resonance condition",
        reduced.zero_columns.len()
    );

    Ok(())
}
