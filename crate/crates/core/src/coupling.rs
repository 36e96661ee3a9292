//! Effective coupling and effective vertex-scattering matrices.
//!
//! A vertex with `n` internal edge ends, `m` leads and unitary coupling
//! matrix `U` acts on the compact part of the graph through the effective
//! coupling
//!
//! ```text
//! Ũ(k) = U₁ − (1−k)·U₂·[(1−k)·U₄ − (1+k)·I]⁻¹·U₃
//! ```
//!
//! (`U₁..U₄` the internal/lead blocks of `U`), and scatters incoming wave
//! amplitudes on internal edges into outgoing ones through
//!
//! ```text
//! σ̃(k) = −[(1−k)·Ũ(k) − (1+k)·Iₙ]⁻¹ · [(1+k)·Ũ(k) − (1−k)·Iₙ].
//! ```
//!
//! Standard and Dirichlet couplings admit exact, k-independent σ̃ and feed
//! the exact rational pipeline; general couplings go through the sampled
//! complex path, with a probe-based constancy test to recover
//! k-independence where it holds.

use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{rat, C64, CMatrix, Rat, RatMatrix};
use crate::graph::{CouplingSpec, MetricGraph};

/// Probe values used to decide whether a sampled σ̃ is k-independent.
/// Five generic points pin down constancy of the bounded-degree rational
/// functions produced by the coupling formulas; documented as a heuristic.
pub const K_INDEPENDENCE_PROBES: [C64; 5] = [
    C64::new(0.5, 0.0),
    C64::new(1.3, 0.0),
    C64::new(2.0, 1.0),
    C64::new(-0.7, 0.2),
    C64::new(3.1, -2.2),
];

/// Entrywise deviation below which probed matrices count as equal.
pub const K_INDEPENDENCE_TOL: f64 = 1e-10;

/// The four blocks of a vertex coupling matrix: `U₁` internal×internal,
/// `U₄` lead×lead, `U₂`/`U₃` mixed.
#[derive(Debug, Clone)]
pub struct CouplingBlocks {
    pub u1: CMatrix,
    pub u2: CMatrix,
    pub u3: CMatrix,
    pub u4: CMatrix,
}

impl CouplingBlocks {
    /// Split a `(n+m)×(n+m)` unitary into blocks; internal slots first.
    /// Fails when the assembled matrix is not unitary within 1e−12.
    pub fn from_unitary(u: &CMatrix, n: usize, m: usize) -> Result<Self> {
        if u.rows() != n + m || u.cols() != n + m {
            return Err(Error::Parse(format!(
                "coupling matrix is {}×{}, expected {}×{}",
                u.rows(),
                u.cols(),
                n + m,
                n + m
            )));
        }
        if u.unitarity_defect() > 1e-12 {
            return Err(Error::Parse("coupling matrix not unitary".into()));
        }
        Ok(Self {
            u1: CMatrix::from_fn(n, n, |i, j| u[(i, j)]),
            u2: CMatrix::from_fn(n, m, |i, j| u[(i, n + j)]),
            u3: CMatrix::from_fn(m, n, |i, j| u[(n + i, j)]),
            u4: CMatrix::from_fn(m, m, |i, j| u[(n + i, n + j)]),
        })
    }

    pub fn internal_dim(&self) -> usize {
        self.u1.rows()
    }

    pub fn lead_dim(&self) -> usize {
        self.u4.rows()
    }
}

/// The standard-coupling unitary `(2/d)·J_d − I_d`, exactly rational.
pub fn standard_unitary(d: usize) -> RatMatrix {
    assert!(d >= 1);
    let two_over_d = rat(2, d as i64);
    RatMatrix::from_fn(d, d, |i, j| {
        if i == j {
            &two_over_d - Rat::one()
        } else {
            two_over_d.clone()
        }
    })
}

/// Exact effective vertex-scattering matrix of a standard vertex with `n`
/// internal ends and `m` leads: `(2/(n+m))·Jₙ − Iₙ`, independent of k.
pub fn standard_sigma(n: usize, m: usize) -> RatMatrix {
    assert!(n >= 1);
    let factor = rat(2, (n + m) as i64);
    RatMatrix::from_fn(n, n, |i, j| {
        if i == j {
            &factor - Rat::one()
        } else {
            factor.clone()
        }
    })
}

/// Effective coupling matrix `Ũ(k)` on the internal part of a vertex.
pub fn effective_coupling(blocks: &CouplingBlocks, k: C64) -> Result<CMatrix> {
    let n = blocks.internal_dim();
    let m = blocks.lead_dim();
    if m == 0 {
        return Ok(blocks.u1.clone());
    }
    let one = C64::new(1.0, 0.0);
    // (1−k)·U₄ − (1+k)·I
    let inner = blocks
        .u4
        .scale(one - k)
        .sub(&CMatrix::identity(m).scale(one + k));
    let solved = inner.solve(&blocks.u3, "effective coupling")?;
    let correction = blocks.u2.mul(&solved).scale(one - k);
    debug_assert_eq!(correction.rows(), n);
    Ok(blocks.u1.sub(&correction))
}

/// Effective vertex-scattering matrix `σ̃(k)` from the coupling blocks.
pub fn effective_vertex_scattering(blocks: &CouplingBlocks, k: C64) -> Result<CMatrix> {
    let n = blocks.internal_dim();
    let u = effective_coupling(blocks, k)?;
    let one = C64::new(1.0, 0.0);
    let lhs = u.scale(one - k).sub(&CMatrix::identity(n).scale(one + k));
    let rhs = u.scale(one + k).sub(&CMatrix::identity(n).scale(one - k));
    Ok(lhs.solve(&rhs, "effective vertex scattering")?.scale(-one))
}

/// Inverse relation: recover `Ũ(k)` from `σ̃(k)`.
pub fn coupling_from_scattering(sigma: &CMatrix, k: C64) -> Result<CMatrix> {
    let n = sigma.rows();
    let one = C64::new(1.0, 0.0);
    let num = sigma.scale(one + k).add(&CMatrix::identity(n).scale(one - k));
    let den = sigma.scale(one - k).add(&CMatrix::identity(n).scale(one + k));
    // Ũ = num · den⁻¹, computed as (den⁻ᵀ · numᵀ)ᵀ via a solve on the left.
    let den_inv = den.inverse("scattering-to-coupling")?;
    Ok(num.mul(&den_inv))
}

/// How a vertex scatters waves between its internal edge ends.
#[derive(Debug, Clone)]
pub enum VertexScattering {
    /// Exact rational matrix, independent of k (standard and Dirichlet
    /// couplings).
    Exact(RatMatrix),
    /// Evaluated on demand from the coupling blocks.
    Sampled(CouplingBlocks),
}

impl VertexScattering {
    /// Build the scattering description of one vertex of a graph.
    pub fn for_vertex(g: &MetricGraph, v: usize) -> Result<Self> {
        let n = g.internal_degree(v);
        let m = g.vertices()[v].leads;
        match &g.vertices()[v].coupling {
            CouplingSpec::Standard => Ok(Self::Exact(if n == 0 {
                RatMatrix::zeros(0, 0)
            } else {
                standard_sigma(n, m)
            })),
            CouplingSpec::Dirichlet => {
                if n + m != 1 {
                    return Err(Error::PreconditionViolated(format!(
                        "Dirichlet coupling at vertex `{}` requires degree 1",
                        g.vertices()[v].id
                    )));
                }
                Ok(Self::Exact(if n == 1 {
                    RatMatrix::from_fn(1, 1, |_, _| -Rat::one())
                } else {
                    RatMatrix::zeros(0, 0)
                }))
            }
            CouplingSpec::General(u) => {
                let blocks = CouplingBlocks::from_unitary(u, n, m)?;
                Ok(Self::Sampled(blocks))
            }
        }
    }

    /// Internal dimension of the scattering matrix.
    pub fn dim(&self) -> usize {
        match self {
            Self::Exact(m) => m.rows(),
            Self::Sampled(b) => b.internal_dim(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    /// Evaluate σ̃ at a spectral point.
    pub fn eval(&self, k: C64) -> Result<CMatrix> {
        match self {
            Self::Exact(m) => Ok(m.to_cmatrix()),
            Self::Sampled(blocks) => effective_vertex_scattering(blocks, k),
        }
    }
}

/// Probe-based test for k-independence of a vertex scattering matrix.
/// Exact kinds are structurally constant; sampled ones are compared across
/// the five probe points.
pub fn detect_k_independence(vs: &VertexScattering) -> Result<bool> {
    match vs {
        VertexScattering::Exact(_) => Ok(true),
        VertexScattering::Sampled(blocks) => {
            let first = effective_vertex_scattering(blocks, K_INDEPENDENCE_PROBES[0])?;
            for &k in &K_INDEPENDENCE_PROBES[1..] {
                let other = effective_vertex_scattering(blocks, k)?;
                if first.max_abs_diff(&other) >= K_INDEPENDENCE_TOL {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Random unitary via Gram–Schmidt on a seeded complex Gaussian-ish
    /// matrix; deterministic per seed.
    pub(crate) fn random_unitary(n: usize, seed: u64) -> CMatrix {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut cols: Vec<Vec<C64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect()
            })
            .collect();
        for i in 0..n {
            let (done, rest) = cols.split_at_mut(i);
            let current = &mut rest[0];
            for prev in done.iter() {
                let proj: C64 = prev
                    .iter()
                    .zip(current.iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for (c, p) in current.iter_mut().zip(prev.iter()) {
                    *c -= proj * p;
                }
            }
            let norm: f64 = current.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for c in current.iter_mut() {
                *c /= norm;
            }
        }
        CMatrix::from_fn(n, n, |r, col| cols[col][r])
    }

    #[test]
    fn standard_unitary_degree_two_is_the_swap() {
        let u = standard_unitary(2);
        assert_eq!(u[(0, 0)], rat(0, 1));
        assert_eq!(u[(0, 1)], rat(1, 1));
        assert_eq!(u[(1, 0)], rat(1, 1));
        assert_eq!(u[(1, 1)], rat(0, 1));
    }

    #[test]
    fn standard_unitary_is_unitary_and_symmetric_up_to_twelve() {
        for d in 1..=12 {
            let u = standard_unitary(d);
            // Real symmetric, so unitarity is U·U = I, checked exactly.
            let square = u.mul(&u);
            assert_eq!(square, RatMatrix::identity(d), "d = {d}");
            for i in 0..d {
                for j in 0..d {
                    assert_eq!(u[(i, j)], u[(j, i)]);
                }
            }
        }
    }

    #[test]
    fn standard_sigma_matches_spec_values() {
        let s = standard_sigma(3, 3);
        assert_eq!(s[(0, 0)], rat(-2, 3));
        assert_eq!(s[(0, 1)], rat(1, 3));
        let s = standard_sigma(2, 2);
        assert_eq!(s[(0, 0)], rat(-1, 2));
        assert_eq!(s[(0, 1)], rat(1, 2));
        let s = standard_sigma(1, 0);
        assert_eq!(s[(0, 0)], rat(1, 1));
    }

    #[test]
    fn balanced_standard_sigma_is_singular() {
        // (1/n)J − I has the all-ones vector in its kernel.
        for n in 1..=5 {
            let s = standard_sigma(n, n);
            let (det, rank) = crate::exact::det_rank(&s);
            assert!(num_traits::Zero::is_zero(&det));
            assert_eq!(rank, n - 1);
        }
    }

    #[test]
    fn effective_coupling_of_standard_vertex_matches_closed_form() {
        // Ũ(k) = (2/(km+n))·Jₙ − Iₙ for a standard vertex.
        let u = standard_unitary(6).to_cmatrix();
        let blocks = CouplingBlocks::from_unitary(&u, 3, 3).unwrap();
        for &k in &[c(0.0, 0.0), c(0.3, 0.1), c(2.0, -1.0)] {
            let got = effective_coupling(&blocks, k).unwrap();
            let factor = c(2.0, 0.0) / (k * 3.0 + 3.0);
            let expected = CMatrix::from_fn(3, 3, |i, j| {
                if i == j {
                    factor - 1.0
                } else {
                    factor
                }
            });
            assert!(got.max_abs_diff(&expected) < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn effective_coupling_without_leads_is_u1() {
        let u = random_unitary(3, 11);
        let blocks = CouplingBlocks::from_unitary(&u, 3, 0).unwrap();
        let got = effective_coupling(&blocks, c(1.7, -0.4)).unwrap();
        assert!(got.max_abs_diff(&blocks.u1) < 1e-15);
    }

    #[test]
    fn effective_coupling_matches_cofactor_oracle_on_2x2_split() {
        // Independent evaluation of Ũ(k) with an explicit 2×2 cofactor
        // inverse of (1−k)U₄ − (1+k)I.
        let u = random_unitary(4, 7);
        let blocks = CouplingBlocks::from_unitary(&u, 2, 2).unwrap();
        let k = c(0.3, 0.1);
        let one = c(1.0, 0.0);

        let a = blocks.u4.scale(one - k).sub(&CMatrix::identity(2).scale(one + k));
        let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
        let mut inv = CMatrix::zeros(2, 2);
        inv[(0, 0)] = a[(1, 1)] / det;
        inv[(0, 1)] = -a[(0, 1)] / det;
        inv[(1, 0)] = -a[(1, 0)] / det;
        inv[(1, 1)] = a[(0, 0)] / det;
        let expected = blocks
            .u1
            .sub(&blocks.u2.mul(&inv).mul(&blocks.u3).scale(one - k));

        let got = effective_coupling(&blocks, k).unwrap();
        assert!(got.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn standard_balanced_scattering_is_k_free() {
        let u = standard_unitary(6).to_cmatrix();
        let blocks = CouplingBlocks::from_unitary(&u, 3, 3).unwrap();
        let expected = standard_sigma(3, 3).to_cmatrix();
        let got = effective_vertex_scattering(&blocks, c(2.0, 1.0)).unwrap();
        assert!(got.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn dirichlet_scattering_is_minus_one() {
        let mut u = CMatrix::zeros(1, 1);
        u[(0, 0)] = c(-1.0, 0.0);
        let blocks = CouplingBlocks::from_unitary(&u, 1, 0).unwrap();
        for &k in &K_INDEPENDENCE_PROBES {
            let s = effective_vertex_scattering(&blocks, k).unwrap();
            assert!((s[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn scattering_and_coupling_are_mutually_inverse() {
        let k = c(1.7, -0.4);
        for seed in [1u64, 2, 3] {
            let u = random_unitary(5, seed);
            let blocks = CouplingBlocks::from_unitary(&u, 3, 2).unwrap();
            let utilde = effective_coupling(&blocks, k).unwrap();
            let sigma = effective_vertex_scattering(&blocks, k).unwrap();
            let back = coupling_from_scattering(&sigma, k).unwrap();
            assert!(back.max_abs_diff(&utilde) < 1e-10, "seed {seed}");
            // And the fixed point: σ̃ of the recovered Ũ agrees again.
            let one = c(1.0, 0.0);
            let lhs = back.scale(one - k).sub(&CMatrix::identity(3).scale(one + k));
            let rhs = back.scale(one + k).sub(&CMatrix::identity(3).scale(one - k));
            let sigma2 = lhs.solve(&rhs, "test").unwrap().scale(-one);
            assert!(sigma2.max_abs_diff(&sigma) < 1e-10);
        }
    }

    #[test]
    fn standard_sigma_agrees_with_sampled_evaluation_at_probes() {
        for (n, m) in [(2usize, 1usize), (3, 3), (4, 2)] {
            let u = standard_unitary(n + m).to_cmatrix();
            let blocks = CouplingBlocks::from_unitary(&u, n, m).unwrap();
            let exact = standard_sigma(n, m).to_cmatrix();
            for &k in &K_INDEPENDENCE_PROBES {
                let got = effective_vertex_scattering(&blocks, k).unwrap();
                assert!(got.max_abs_diff(&exact) < 1e-12);
            }
        }
    }

    #[test]
    fn detects_k_independence_of_permutation_coupling() {
        // Full transmission into the lead: σ̃ ≡ 0, constant in k.
        let mut u = CMatrix::zeros(2, 2);
        u[(0, 1)] = c(1.0, 0.0);
        u[(1, 0)] = c(1.0, 0.0);
        let blocks = CouplingBlocks::from_unitary(&u, 1, 1).unwrap();
        // Brute-force constancy across the probes first.
        let values: Vec<CMatrix> = K_INDEPENDENCE_PROBES
            .iter()
            .map(|&k| effective_vertex_scattering(&blocks, k).unwrap())
            .collect();
        for v in &values[1..] {
            assert!(values[0].max_abs_diff(v) < 1e-12);
        }
        assert!(detect_k_independence(&VertexScattering::Sampled(blocks)).unwrap());
    }

    #[test]
    fn detects_k_dependence_of_a_generic_leadless_vertex() {
        // U = e^{iπ/4} with no leads: σ̃(k) genuinely varies with k
        // (only eigenvalues ±1 of U produce constant scattering).
        let mut u = CMatrix::zeros(1, 1);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        u[(0, 0)] = c(inv_sqrt2, inv_sqrt2);
        // Sanity: σ̃ differs between two probes.
        let blocks = CouplingBlocks::from_unitary(&u, 1, 0).unwrap();
        let a = effective_vertex_scattering(&blocks, K_INDEPENDENCE_PROBES[0]).unwrap();
        let b = effective_vertex_scattering(&blocks, K_INDEPENDENCE_PROBES[1]).unwrap();
        assert!(a.max_abs_diff(&b) > 1e-3);
        assert!(!detect_k_independence(&VertexScattering::Sampled(blocks)).unwrap());
    }

    #[test]
    fn coupling_formula_pole_raises_singular_pivot() {
        // At k = −1 the inverted block of a balanced standard vertex is
        // 2·U₄ with U₄ singular; no limit is taken.
        let u = standard_unitary(6).to_cmatrix();
        let blocks = CouplingBlocks::from_unitary(&u, 3, 3).unwrap();
        let err = effective_coupling(&blocks, c(-1.0, 0.0)).unwrap_err();
        assert!(matches!(err, crate::error::Error::SingularPivot { .. }));
    }

    #[test]
    fn standard_vertex_scattering_via_graph() {
        let g = crate::samples::three_star();
        let center = g.vertex_index("v4").unwrap();
        let vs = VertexScattering::for_vertex(&g, center).unwrap();
        assert!(vs.is_exact());
        assert_eq!(vs.dim(), 3);
        assert!(detect_k_independence(&vs).unwrap());
    }
}
