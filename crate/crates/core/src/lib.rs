//! Resolvent resonances of quantum graphs with attached leads.
//!
//! A metric graph with semi-infinite leads carries a Laplacian whose
//! resolvent resonances are cut out by the secular determinant
//! `det(e^{ikL}·Q·Σ̃(k) − I)`, built from per-vertex effective scattering
//! matrices on the doubled directed graph. This crate computes that
//! machinery with exact rational arithmetic wherever the coupling allows
//! it (standard and Dirichlet conditions), and numerically elsewhere:
//!
//! * [`graph`] — the metric-graph data model, validation and structural
//!   queries (balanced vertices, equilaterality, loops);
//! * [`coupling`] — effective coupling matrices `Ũ(k)` and effective
//!   vertex-scattering matrices `σ̃(k)`;
//! * [`bond`] — the doubled graph, the swap `Q`, lengths `L`, and the
//!   bond scattering matrix `S = Q·Σ̃`;
//! * [`exact`] — rational matrices (Bareiss determinant/rank,
//!   Faddeev–LeVerrier characteristic polynomials) and root extraction
//!   (Aberth–Ehrlich with exact square-free preprocessing);
//! * [`secular`] — the polynomial resonance condition of equilateral
//!   graphs, Weyl/non-Weyl classification, effective size, explicit
//!   resonance lattices and disc counting;
//! * [`orbits`] — irreducible pseudo orbits on the doubled graph and the
//!   combinatorial expansion of the resonance condition, an independent
//!   oracle for the determinant route;
//! * [`reduction`] — ghost-edge deletion of bonds into balanced vertices,
//!   with exact verification that the resonance condition is preserved;
//! * [`bounds`] — structural effective-size bounds and the rank
//!   criterion for strictness.
//!
//! All values are immutable after construction and all operations are
//! pure, so everything is safe to share across threads.

pub mod bond;
pub mod bounds;
pub mod coupling;
pub mod error;
pub mod exact;
pub mod graph;
pub mod orbits;
pub mod reduction;
pub mod samples;
pub mod secular;

pub use bond::{assemble_sigma, bond_scattering, Bond, BondGraph, BondMatrix};
pub use bounds::{bound_report, check_rank_criterion, detect_balanced_squares, BoundReport};
pub use coupling::{
    detect_k_independence, effective_coupling, effective_vertex_scattering, standard_sigma,
    standard_unitary, CouplingBlocks, VertexScattering,
};
pub use error::{Error, Result};
pub use exact::{Rat, RatMatrix, RatPoly};
pub use graph::{CouplingSpec, InternalEdge, MetricGraph, StructuralFlags, ValidationReport, VertexSpec};
pub use orbits::{
    enumerate_cycles, expansion_polynomial, orbit_report, IrreduciblePseudoOrbit, PeriodicOrbit,
    DEFAULT_ORBIT_CAP,
};
pub use reduction::{
    apply_reduction, deletion_transform, verify_reduction, ReducedSystem, ReductionPlan,
    ReductionStep,
};
pub use secular::{
    classify_weyl, cross_check_weyl_standard, resonance_families, resonances_in_disc,
    secular_polynomial, secular_value, ResonanceFamily, SecularPolynomial, Verdict, WeylClass,
};
