//! Resonance condition, Weyl classification, effective size and explicit
//! resonance lattices.
//!
//! For an equilateral graph with k-independent vertex scattering the
//! resonance condition `det(e^{ikL}·S − I) = 0` collapses to a polynomial
//! `P(z) = det(z·S − I)` in `z = e^{ikℓ}`. Everything spectral is then read
//! off `P`: the degree gives the effective size `W = (ℓ/2)·deg P`, a degree
//! drop below `2N` detects non-Weyl asymptotics, and each nonzero
//! eigenvalue `c = 1/z_root = r·e^{iφ}` of `S` generates the resonance
//! lattice `k_n = (−φ + 2nπ + i·ln r)/ℓ`.

use num_traits::Zero;

use crate::bond::{bond_scattering, BondGraph, BondMatrix};
use crate::coupling::{detect_k_independence, VertexScattering, K_INDEPENDENCE_PROBES};
use crate::error::{Error, Result};
use crate::exact::{
    det_rank, rat, rat_to_f64, rational_roots, zdet_poly, C64, CPoly, Rat, RatPoly,
    DEFAULT_CLUSTER_TOL,
};
use crate::graph::MetricGraph;

/// Coefficients of a secular polynomial: exact for standard/Dirichlet
/// graphs, complex for general couplings that pass the k-independence
/// probe.
#[derive(Debug, Clone)]
pub enum SecularCoeffs {
    Exact(RatPoly),
    Complex(CPoly),
}

impl SecularCoeffs {
    pub fn degree(&self) -> usize {
        match self {
            Self::Exact(p) => p.degree(),
            Self::Complex(p) => p.degree(),
        }
    }

    /// Exact coefficients or [`Error::NotExact`].
    pub fn as_exact(&self) -> Result<&RatPoly> {
        match self {
            Self::Exact(p) => Ok(p),
            Self::Complex(_) => Err(Error::NotExact {
                vertex: "<general coupling>".into(),
            }),
        }
    }
}

/// The polynomial resonance condition of an equilateral graph.
#[derive(Debug, Clone)]
pub struct SecularPolynomial {
    /// `P(z)` with `z = e^{ikℓ}`; constant term exactly 1.
    pub poly: SecularCoeffs,
    /// Common internal edge length ℓ.
    pub ell: Rat,
    /// Algebraic multiplicity of the eigenvalue 0 of `S`, read off as
    /// `2N − deg P` rather than computed numerically.
    pub n_zero_eigs: usize,
}

/// Weyl-versus-non-Weyl verdict with the effective size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylClass {
    pub verdict: Verdict,
    /// Effective size `W` in length units.
    pub w: Rat,
    /// Sum of internal edge lengths.
    pub volume: Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Weyl,
    NonWeyl,
}

/// One family of resonances: an eigenvalue `c = r·e^{iφ}` of `S` with its
/// multiplicity, generating `k_n = (−φ + 2nπ + i·ln r)/ℓ`.
#[derive(Debug, Clone)]
pub struct ResonanceFamily {
    pub c: C64,
    pub r: f64,
    /// Argument normalized to (−π, π].
    pub phi: f64,
    pub multiplicity: usize,
}

impl ResonanceFamily {
    /// The lattice point at index `n`, for edge length `ell`.
    pub fn k_at(&self, n: i64, ell: f64) -> C64 {
        C64::new(
            (-self.phi + 2.0 * std::f64::consts::PI * n as f64) / ell,
            self.r.ln() / ell,
        )
    }
}

/// Resonances inside the closed disc |k| ≤ R.
#[derive(Debug, Clone)]
pub struct DiscCount {
    pub count: usize,
    /// Points with their multiplicities, sorted by real part.
    pub points: Vec<(C64, usize)>,
}

fn require_valid(g: &MetricGraph) -> Result<()> {
    let report = g.validate();
    if !report.is_valid() {
        return Err(Error::Parse(format!(
            "graph fails validation: {}",
            report.violations[0].message
        )));
    }
    Ok(())
}

/// Exact (or probe-constant complex) secular polynomial of an equilateral
/// graph.
pub fn secular_polynomial(g: &MetricGraph) -> Result<SecularPolynomial> {
    require_valid(g)?;
    let ell = g.common_length()?;
    let s = bond_scattering(g)?;
    let two_n = 2 * g.edge_count();
    let poly = match &s {
        BondMatrix::Exact(m) => SecularCoeffs::Exact(zdet_poly(m)),
        BondMatrix::Sampled(_) => {
            for (v, spec) in g.vertices().iter().enumerate() {
                let vs = VertexScattering::for_vertex(g, v)?;
                if !detect_k_independence(&vs)? {
                    return Err(Error::KDependentCoupling {
                        vertex: spec.id.clone(),
                    });
                }
            }
            let probe = s.eval(K_INDEPENDENCE_PROBES[0])?;
            SecularCoeffs::Complex(probe.zdet_poly().trimmed(1e-10))
        }
    };
    let n_zero_eigs = two_n - poly.degree();
    Ok(SecularPolynomial {
        poly,
        ell,
        n_zero_eigs,
    })
}

/// Weyl classification and effective size `W = (ℓ/2)·deg P`.
pub fn classify_weyl(g: &MetricGraph) -> Result<WeylClass> {
    let sp = secular_polynomial(g)?;
    let two_n = 2 * g.edge_count();
    let deg = sp.poly.degree();
    // Cross-check on the exact path: deg P < 2N must coincide with
    // det S = 0 (the determinant route is independent of the charpoly).
    if let SecularCoeffs::Exact(_) = sp.poly {
        let s = bond_scattering(g)?;
        let (det, _) = det_rank(s.as_exact()?);
        if det.is_zero() != (deg < two_n) {
            return Err(Error::InvariantViolated(
                "determinant and polynomial-degree non-Weyl criteria disagree".into(),
            ));
        }
    }
    let verdict = if deg < two_n {
        Verdict::NonWeyl
    } else {
        Verdict::Weyl
    };
    let w = &sp.ell * rat(deg as i64, 2);
    Ok(WeylClass {
        verdict,
        w,
        volume: g.volume(),
    })
}

/// Cross-check of the balanced-vertex criterion for standard coupling:
/// the graph is non-Weyl exactly when a balanced vertex exists.
pub fn cross_check_weyl_standard(g: &MetricGraph) -> Result<bool> {
    let class = classify_weyl(g)?;
    let has_balanced = !g.balanced_vertices().is_empty();
    Ok((class.verdict == Verdict::NonWeyl) == has_balanced)
}

/// Resonance families from the nonzero eigenvalues of `S`.
///
/// Eigenvalues are recovered as reciprocals of the roots of `P(z)`; the
/// zero eigenvalue (multiplicity `2N − deg P`) generates no resonances.
pub fn resonance_families(g: &MetricGraph) -> Result<Vec<ResonanceFamily>> {
    let sp = secular_polynomial(g)?;
    families_of(&sp, g)
}

/// As [`resonance_families`], reusing a computed secular polynomial.
pub fn families_of(sp: &SecularPolynomial, g: &MetricGraph) -> Result<Vec<ResonanceFamily>> {
    let roots = match &sp.poly {
        SecularCoeffs::Exact(p) => {
            if p.degree() == 0 {
                return Ok(Vec::new());
            }
            rational_roots(p, DEFAULT_CLUSTER_TOL)?
        }
        SecularCoeffs::Complex(p) => {
            if p.degree() == 0 {
                return Ok(Vec::new());
            }
            crate::exact::complex_roots(p, DEFAULT_CLUSTER_TOL)?
        }
    };
    let mut families: Vec<ResonanceFamily> = roots
        .roots
        .iter()
        .map(|root| {
            let mut c = 1.0 / root.value;
            // Root-finder noise of order 1e−16 must not flip the argument
            // across the branch cut at the negative real axis.
            if c.im.abs() <= 1e-12 * (1.0 + c.norm()) {
                c.im = 0.0;
            }
            ResonanceFamily {
                c,
                r: c.norm(),
                phi: c.arg(),
                multiplicity: root.multiplicity,
            }
        })
        .collect();
    families.sort_by(|a, b| a.c.re.total_cmp(&b.c.re).then(a.c.im.total_cmp(&b.c.im)));

    // Theorem-backed sanity: |c| ≤ 1, and for loop-free graphs the
    // eigenvalues sum to trace(S) = 0.
    for f in &families {
        if f.r > 1.0 + 1e-9 {
            return Err(Error::InvariantViolated(format!(
                "eigenvalue modulus {} exceeds 1",
                f.r
            )));
        }
    }
    if !g.structural_flags().has_loops {
        let sum: C64 = families
            .iter()
            .map(|f| f.c * f.multiplicity as f64)
            .sum();
        if sum.norm() > 1e-9 {
            return Err(Error::InvariantViolated(format!(
                "eigenvalues of a loop-free graph sum to {sum} instead of 0"
            )));
        }
    }
    Ok(families)
}

/// Enumerate all resonances with |k| ≤ radius from the family lattices.
pub fn resonances_in_disc(
    families: &[ResonanceFamily],
    radius: f64,
    ell: &Rat,
) -> DiscCount {
    assert!(radius > 0.0, "disc radius must be positive");
    let ell = rat_to_f64(ell);
    let mut points = Vec::new();
    let mut count = 0usize;
    for f in families {
        let im = f.r.ln();
        // (2nπ − φ)² ≤ (Rℓ)² − (ln r)² determines the admissible n range.
        let rhs = (radius * ell).powi(2) - im * im;
        if rhs < 0.0 {
            continue;
        }
        let s = rhs.sqrt();
        let two_pi = 2.0 * std::f64::consts::PI;
        let lo = ((f.phi - s) / two_pi).ceil() as i64;
        let hi = ((f.phi + s) / two_pi).floor() as i64;
        for n in lo..=hi {
            let k = f.k_at(n, ell);
            if k.norm() <= radius {
                points.push((k, f.multiplicity));
                count += f.multiplicity;
            }
        }
    }
    points.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    DiscCount { count, points }
}

/// Numeric value of the secular determinant `det(e^{ikL}·S(k) − I)` at an
/// arbitrary spectral point; works for non-equilateral graphs and
/// k-dependent couplings.
pub fn secular_value(g: &MetricGraph, k: C64) -> Result<C64> {
    require_valid(g)?;
    let bg = BondGraph::build(g);
    let s = crate::bond::bond_scattering_with(g, &bg)?;
    let s_k = s.eval(k)?;
    let lengths = bg.lengths(g);
    let len = bg.len();
    let mut m = crate::exact::CMatrix::zeros(len, len);
    for row in 0..len {
        let phase = (C64::new(0.0, 1.0) * k * rat_to_f64(&lengths[row])).exp();
        for col in 0..len {
            m[(row, col)] = phase * s_k[(row, col)];
        }
        m[(row, row)] -= 1.0;
    }
    Ok(m.det())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use std::f64::consts::PI;

    fn exact_coeffs(sp: &SecularPolynomial) -> Vec<Rat> {
        sp.poly.as_exact().unwrap().coeffs().to_vec()
    }

    #[test]
    fn three_star_secular_polynomial() {
        let sp = secular_polynomial(&samples::three_star()).unwrap();
        assert_eq!(
            exact_coeffs(&sp),
            vec![rat(1, 1), rat(0, 1), rat(-2, 1), rat(0, 1), rat(1, 1)]
        );
        assert_eq!(sp.n_zero_eigs, 2);
    }

    #[test]
    fn dirichlet_interval_secular_polynomial() {
        let sp = secular_polynomial(&samples::dirichlet_interval()).unwrap();
        assert_eq!(exact_coeffs(&sp), vec![rat(1, 1), rat(0, 1), rat(-1, 1)]);
        assert_eq!(sp.n_zero_eigs, 0);
    }

    #[test]
    fn non_equilateral_graph_is_rejected() {
        use crate::graph::{CouplingSpec, InternalEdge, MetricGraph, VertexSpec};
        let std = |id: &str| VertexSpec {
            id: id.into(),
            leads: 1,
            coupling: CouplingSpec::Standard,
        };
        let edge = |id: &str, from: usize, to: usize, num: i64, den: i64| InternalEdge {
            id: id.into(),
            from,
            to,
            length: rat(num, den),
        };
        let g = MetricGraph::new(
            vec![std("v1"), std("v2"), std("v3")],
            vec![edge("e1", 0, 1, 1, 2), edge("e2", 1, 2, 1, 3)],
        );
        assert!(matches!(secular_polynomial(&g), Err(Error::NotEquilateral)));
    }

    #[test]
    fn k_dependent_coupling_is_rejected() {
        // A genuinely k-dependent 1×1 coupling (phase e^{iπ/4}) at a
        // leadless endpoint.
        use crate::exact::CMatrix;
        use crate::graph::{CouplingSpec, InternalEdge, MetricGraph, VertexSpec};
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut u = CMatrix::zeros(1, 1);
        u[(0, 0)] = C64::new(inv_sqrt2, inv_sqrt2);
        let g = MetricGraph::new(
            vec![
                VertexSpec { id: "v1".into(), leads: 0, coupling: CouplingSpec::General(u) },
                VertexSpec { id: "v2".into(), leads: 0, coupling: CouplingSpec::Dirichlet },
            ],
            vec![InternalEdge { id: "e1".into(), from: 0, to: 1, length: rat(1, 1) }],
        );
        assert!(matches!(
            secular_polynomial(&g),
            Err(Error::KDependentCoupling { .. })
        ));
    }

    #[test]
    fn complex_path_matches_exact_for_standard_graph_in_disguise() {
        // Same star graph, but the center handed over as an explicit
        // unitary: the complex-coefficient polynomial must match.
        use crate::coupling::standard_unitary;
        use crate::graph::{CouplingSpec, MetricGraph};
        let g = samples::three_star();
        let mut vertices = g.vertices().to_vec();
        vertices[3].coupling = CouplingSpec::General(standard_unitary(6).to_cmatrix());
        let g2 = MetricGraph::new(vertices, g.edges().to_vec());
        let sp = secular_polynomial(&g2).unwrap();
        let SecularCoeffs::Complex(p) = &sp.poly else {
            panic!("expected the sampled path");
        };
        let expected = [1.0, 0.0, -2.0, 0.0, 1.0];
        assert_eq!(p.degree(), 4);
        for (i, &e) in expected.iter().enumerate() {
            assert!((p.coeffs()[i] - C64::new(e, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn three_star_weyl_class() {
        let class = classify_weyl(&samples::three_star()).unwrap();
        assert_eq!(class.verdict, Verdict::NonWeyl);
        assert_eq!(class.w, rat(2, 1));
        assert_eq!(class.volume, rat(3, 1));
    }

    #[test]
    fn square_with_diagonal_weyl_class() {
        let class = classify_weyl(&samples::square_with_diagonal()).unwrap();
        assert_eq!(class.verdict, Verdict::NonWeyl);
        assert_eq!(class.w, rat(5, 2));
        assert_eq!(class.volume, rat(5, 1));
    }

    #[test]
    fn k4_weyl_class() {
        let class = classify_weyl(&samples::complete_k4()).unwrap();
        assert_eq!(class.verdict, Verdict::NonWeyl);
        assert_eq!(class.w, rat(4, 1));
        assert_eq!(class.volume, rat(6, 1));
    }

    #[test]
    fn dirichlet_interval_is_weyl_with_full_size() {
        let class = classify_weyl(&samples::dirichlet_interval()).unwrap();
        assert_eq!(class.verdict, Verdict::Weyl);
        assert_eq!(class.w, rat(1, 1));
        assert_eq!(class.volume, rat(1, 1));
        assert!(cross_check_weyl_standard(&samples::dirichlet_interval()).unwrap());
    }

    #[test]
    fn cross_check_holds_on_sample_graphs() {
        for g in [samples::three_star(), samples::square_with_diagonal(), samples::complete_k4()] {
            assert!(cross_check_weyl_standard(&g).unwrap());
        }
    }

    fn family_near(families: &[ResonanceFamily], re: f64, im: f64) -> &ResonanceFamily {
        families
            .iter()
            .find(|f| (f.c - C64::new(re, im)).norm() < 1e-6)
            .unwrap_or_else(|| panic!("no family near {re}+{im}i"))
    }

    #[test]
    fn three_star_resonance_families() {
        // Eigenvalues ±1, each twice: the lattice k = nπ/ℓ with
        // multiplicity 2 (the polynomial forces e^{2ikℓ} = 1).
        let families = resonance_families(&samples::three_star()).unwrap();
        assert_eq!(families.len(), 2);
        let plus = family_near(&families, 1.0, 0.0);
        let minus = family_near(&families, -1.0, 0.0);
        assert_eq!(plus.multiplicity, 2);
        assert_eq!(minus.multiplicity, 2);
        // c = 1 generates even multiples of π, c = −1 the odd ones.
        assert!((plus.k_at(0, 1.0) - C64::new(0.0, 0.0)).norm() < 1e-9);
        assert!((plus.k_at(1, 1.0) - C64::new(2.0 * PI, 0.0)).norm() < 1e-9);
        assert!((minus.k_at(1, 1.0) - C64::new(PI, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn square_with_diagonal_families_match_closing_list() {
        let families = resonance_families(&samples::square_with_diagonal()).unwrap();
        assert_eq!(families.len(), 4);
        assert_eq!(family_near(&families, 1.0, 0.0).multiplicity, 2);
        assert_eq!(family_near(&families, -1.0, 0.0).multiplicity, 1);
        assert_eq!(family_near(&families, -2.0 / 3.0, 0.0).multiplicity, 1);
        assert_eq!(family_near(&families, -1.0 / 3.0, 0.0).multiplicity, 1);
        // k = (2n+1)π − i·ln 3 for c = −1/3 (within 1e−9).
        let f = family_near(&families, -1.0 / 3.0, 0.0);
        let expected = C64::new(PI, -(3.0f64.ln()));
        assert!((f.k_at(1, 1.0) - expected).norm() < 1e-9);
        // k = (2n+1)π − i·ln(3/2) for c = −2/3.
        let f = family_near(&families, -2.0 / 3.0, 0.0);
        let expected = C64::new(PI, -(1.5f64.ln()));
        assert!((f.k_at(1, 1.0) - expected).norm() < 1e-9);
    }

    #[test]
    fn k4_families_match_closing_list() {
        let families = resonance_families(&samples::complete_k4()).unwrap();
        assert_eq!(families.len(), 3);
        assert_eq!(family_near(&families, -1.0, 0.0).multiplicity, 2);
        assert_eq!(family_near(&families, 1.0, 0.0).multiplicity, 3);
        assert_eq!(family_near(&families, -1.0 / 3.0, 0.0).multiplicity, 3);
        let f = family_near(&families, -1.0 / 3.0, 0.0);
        let expected = C64::new(PI, -(3.0f64.ln()));
        assert!((f.k_at(1, 1.0) - expected).norm() < 1e-9);
    }

    #[test]
    fn dirichlet_interval_lattice_is_n_pi() {
        let families = resonance_families(&samples::dirichlet_interval()).unwrap();
        assert_eq!(families.len(), 2);
        for f in &families {
            assert_eq!(f.multiplicity, 1);
        }
        let disc = resonances_in_disc(&families, 10.0, &rat(1, 1));
        let expected: Vec<f64> = (-3..=3).map(|n| n as f64 * PI).collect();
        assert_eq!(disc.count, expected.len());
        for ((k, _), e) in disc.points.iter().zip(&expected) {
            assert!((k.re - e).abs() < 1e-9 && k.im.abs() < 1e-12);
        }
    }

    #[test]
    fn small_disc_count_on_three_star() {
        let families = resonance_families(&samples::three_star()).unwrap();
        let disc = resonances_in_disc(&families, 0.1, &rat(1, 1));
        // Only k = 0 (from c = 1) lies in the disc, with multiplicity 2.
        assert_eq!(disc.count, 2);
        assert_eq!(disc.points.len(), 1);
    }

    #[test]
    fn empty_family_list_counts_zero() {
        let disc = resonances_in_disc(&[], 5.0, &rat(1, 1));
        assert_eq!(disc.count, 0);
        assert!(disc.points.is_empty());
    }

    #[test]
    fn secular_value_vanishes_at_a_resonance() {
        // k = π/ℓ is a resonance of the three-star graph.
        let g = samples::three_star();
        let v = secular_value(&g, C64::new(PI, 0.0)).unwrap();
        assert!(v.norm() < 1e-9, "value {v}");
        // ... and k = π/(2ℓ) is not: P(i) = (i²−1)² = 4.
        let v = secular_value(&g, C64::new(PI / 2.0, 0.0)).unwrap();
        assert!((v.norm() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn secular_value_at_zero_uses_identity_phase() {
        let g = samples::dirichlet_interval();
        // det(S − I) for S = [[0,−1],[−1,0]] is 0 (eigenvalue 1).
        let v = secular_value(&g, C64::new(0.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn exact_and_numeric_paths_agree_at_random_points() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(42);
        for g in [samples::three_star(), samples::square_with_diagonal()] {
            let sp = secular_polynomial(&g).unwrap();
            let p = sp.poly.as_exact().unwrap();
            for _ in 0..20 {
                let k = C64::new(rng.random_range(-3.0..3.0), rng.random_range(-1.0..1.0));
                let direct = secular_value(&g, k).unwrap();
                let z = (C64::new(0.0, 1.0) * k).exp();
                let via_poly = p.eval_complex(z);
                assert!(
                    (direct - via_poly).norm() < 1e-9,
                    "k = {k}: {direct} vs {via_poly}"
                );
            }
        }
    }
}
