//! Simultaneous root extraction (Aberth–Ehrlich) with multiplicity recovery.
//!
//! Two entry points:
//!
//! * [`rational_roots`] — for exact polynomials. An exact square-free
//!   decomposition is computed first, so every Aberth run sees only simple
//!   roots and multiplicities are exact integers. This is what lets the
//!   eigenvalue lists of the spectral pipeline hit 1e−9 tolerances even for
//!   triple eigenvalues, where naive clustering would lose several digits.
//! * [`complex_roots`] — for numerically obtained polynomials; approximate
//!   roots are clustered into multiplicities by pairwise distance.

use super::poly::{CPoly, RatPoly};
use super::C64;
use crate::error::{Error, Result};

/// Default pairwise distance below which roots merge into one cluster.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;

const MAX_ITERATIONS: usize = 500;

/// One root with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: C64,
    pub multiplicity: usize,
}

/// Roots of a polynomial; multiplicities sum to the degree.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: Vec<Root>,
}

impl RootSet {
    /// Sum of multiplicities.
    pub fn total(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }
}

/// Roots of an exact rational polynomial with exact multiplicities.
pub fn rational_roots(p: &RatPoly, cluster_tol: f64) -> Result<RootSet> {
    assert!(!p.is_zero(), "root extraction of the zero polynomial");
    let mut roots = Vec::new();
    for (factor, mult) in p.square_free_decomposition() {
        let set = complex_roots(&factor.to_cpoly(), cluster_tol)?;
        for r in set.roots {
            roots.push(Root {
                value: r.value,
                multiplicity: r.multiplicity * mult,
            });
        }
    }
    sort_roots(&mut roots);
    let set = RootSet { roots };
    debug_assert_eq!(set.total(), p.degree());
    check_residuals(&p.to_cpoly(), &set)?;
    Ok(set)
}

/// Roots of a complex polynomial; multiplicities recovered by clustering
/// approximations closer than `cluster_tol`.
pub fn complex_roots(p: &CPoly, cluster_tol: f64) -> Result<RootSet> {
    let mut coeffs = p.coeffs().to_vec();
    // Roots at the origin come off exactly.
    let mut origin_mult = 0usize;
    while coeffs.len() > 1 && coeffs[0] == C64::new(0.0, 0.0) {
        coeffs.remove(0);
        origin_mult += 1;
    }
    let approx = if coeffs.len() > 1 {
        aberth(&coeffs)?
    } else {
        Vec::new()
    };
    let mut roots = cluster(&approx, cluster_tol);
    if origin_mult > 0 {
        roots.push(Root {
            value: C64::new(0.0, 0.0),
            multiplicity: origin_mult,
        });
    }
    sort_roots(&mut roots);
    let set = RootSet { roots };
    check_residuals(p, &set)?;
    Ok(set)
}

/// Aberth–Ehrlich iteration on a polynomial with nonzero constant term.
fn aberth(coeffs: &[C64]) -> Result<Vec<C64>> {
    let deg = coeffs.len() - 1;
    let poly = CPoly::new(coeffs.to_vec());
    let deriv = poly.derivative();
    let lead = coeffs[deg];
    let tail = coeffs[0];

    // Initial guesses on a circle of radius |a0/an|^(1/deg), angles offset
    // from the axes so symmetric polynomials do not start on a root ray.
    let radius = (tail.norm() / lead.norm()).powf(1.0 / deg as f64).max(1e-3);
    let mut z: Vec<C64> = (0..deg)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / deg as f64 + 0.7;
            C64::from_polar(radius, theta)
        })
        .collect();

    for _ in 0..MAX_ITERATIONS {
        let mut all_done = true;
        let snapshot = z.clone();
        for i in 0..deg {
            let zi = snapshot[i];
            let p = poly.eval(zi);
            if backward_stable(&poly, zi, p) {
                continue;
            }
            all_done = false;
            let pd = deriv.eval(zi);
            let newton = if pd == C64::new(0.0, 0.0) {
                // Derivative vanished away from a root: nudge off the
                // stationary point instead of dividing by zero.
                z[i] = zi + C64::new(1e-4, 1e-4);
                continue;
            } else {
                p / pd
            };
            let mut repulsion = C64::new(0.0, 0.0);
            for (j, &zj) in snapshot.iter().enumerate() {
                if j != i {
                    repulsion += 1.0 / (zi - zj);
                }
            }
            let denom = C64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom == C64::new(0.0, 0.0) {
                newton
            } else {
                newton / denom
            };
            z[i] = zi - step;
        }
        if all_done {
            return Ok(z);
        }
    }
    // Simple roots converge in a handful of iterations; exhausting the
    // budget means the polynomial is ill-conditioned for this method.
    if z.iter().all(|&zi| backward_stable(&poly, zi, poly.eval(zi))) {
        Ok(z)
    } else {
        Err(Error::NoConvergence {
            iterations: MAX_ITERATIONS,
        })
    }
}

/// Bini-style stopping test: |p(z)| at the level of the evaluation's own
/// floating-point noise.
fn backward_stable(poly: &CPoly, z: C64, p: C64) -> bool {
    let mut scale = 0.0f64;
    let mut zpow = 1.0f64;
    let zn = z.norm();
    for c in poly.coeffs() {
        scale += c.norm() * zpow;
        zpow *= zn;
    }
    p.norm() <= 8.0 * f64::EPSILON * scale
}

fn cluster(approx: &[C64], tol: f64) -> Vec<Root> {
    let mut points: Vec<C64> = approx.to_vec();
    points.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut clusters: Vec<Vec<C64>> = Vec::new();
    for &p in &points {
        match clusters
            .iter_mut()
            .find(|c| c.iter().any(|&q| (p - q).norm() < tol))
        {
            Some(c) => c.push(p),
            None => clusters.push(vec![p]),
        }
    }
    clusters
        .into_iter()
        .map(|c| {
            let sum: C64 = c.iter().sum();
            Root {
                value: sum / c.len() as f64,
                multiplicity: c.len(),
            }
        })
        .collect()
}

fn sort_roots(roots: &mut [Root]) {
    roots.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
}

/// Enforce the residual bound `|P(root)| < 1e−9 · max|coeff|`.
fn check_residuals(p: &CPoly, set: &RootSet) -> Result<()> {
    let bound = 1e-9 * p.max_coeff_abs();
    for r in &set.roots {
        let residual = p.eval(r.value).norm();
        if residual >= bound {
            return Err(Error::NoConvergence {
                iterations: MAX_ITERATIONS,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn rpoly(coeffs: &[(i64, i64)]) -> RatPoly {
        RatPoly::new(coeffs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    fn find(set: &RootSet, re: f64, im: f64) -> &Root {
        set.roots
            .iter()
            .find(|r| (r.value - C64::new(re, im)).norm() < 1e-6)
            .unwrap_or_else(|| panic!("no root near {re}+{im}i in {set:?}"))
    }

    #[test]
    fn simple_pair() {
        // z² − 1
        let set = rational_roots(&rpoly(&[(-1, 1), (0, 1), (1, 1)]), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(set.roots.len(), 2);
        assert_eq!(find(&set, 1.0, 0.0).multiplicity, 1);
        assert_eq!(find(&set, -1.0, 0.0).multiplicity, 1);
    }

    #[test]
    fn double_pair_keeps_nine_digits() {
        // 1 − 2z² + z⁴ = (z²−1)²: double roots at ±1.
        let set = rational_roots(&rpoly(&[(1, 1), (0, 1), (-2, 1), (0, 1), (1, 1)]), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(set.total(), 4);
        let plus = find(&set, 1.0, 0.0);
        assert_eq!(plus.multiplicity, 2);
        assert!((plus.value - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn triple_root_multiplicity_is_exact() {
        // (z−1)³(z+3)³(z+1)²: stress the square-free route.
        let f1 = rpoly(&[(-1, 1), (1, 1)]);
        let f2 = rpoly(&[(3, 1), (1, 1)]);
        let f3 = rpoly(&[(1, 1), (1, 1)]);
        let p = f1.mul(&f1).mul(&f1).mul(&f2).mul(&f2).mul(&f2).mul(&f3).mul(&f3);
        let set = rational_roots(&p, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(find(&set, 1.0, 0.0).multiplicity, 3);
        assert_eq!(find(&set, -3.0, 0.0).multiplicity, 3);
        assert_eq!(find(&set, -1.0, 0.0).multiplicity, 2);
        assert!((find(&set, 1.0, 0.0).value - C64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn clustering_path_merges_close_approximations() {
        // Same double-pair polynomial through the complex (clustered) path.
        let p = rpoly(&[(1, 1), (0, 1), (-2, 1), (0, 1), (1, 1)]).to_cpoly();
        let set = complex_roots(&p, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(set.total(), 4);
        assert_eq!(find(&set, 1.0, 0.0).multiplicity, 2);
    }

    #[test]
    fn origin_roots_come_off_exactly() {
        // z³(z − 2)
        let p = rpoly(&[(0, 1), (0, 1), (0, 1), (-2, 1), (1, 1)]).to_cpoly();
        let set = complex_roots(&p, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(find(&set, 0.0, 0.0).multiplicity, 3);
        assert_eq!(find(&set, 2.0, 0.0).multiplicity, 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        // Polynomials built as products of known linear factors are
        // recovered with the right multiplicities and 1e−9 accuracy.
        #[test]
        fn recovers_constructed_factorizations(raw in prop::collection::vec((-4i64..=4, 1usize..=2), 1..4)) {
            // Deduplicate root locations, accumulate multiplicities.
            let mut spec: std::collections::BTreeMap<i64, usize> = std::collections::BTreeMap::new();
            for (a, m) in raw {
                *spec.entry(a).or_insert(0) += m;
            }
            let mut p = RatPoly::one();
            for (&a, &m) in &spec {
                let lin = rpoly(&[(-a, 1), (1, 1)]);
                for _ in 0..m {
                    p = p.mul(&lin);
                }
            }
            let set = rational_roots(&p, DEFAULT_CLUSTER_TOL).unwrap();
            prop_assert_eq!(set.total(), p.degree());
            for (&a, &m) in &spec {
                let r = set.roots.iter()
                    .find(|r| (r.value - C64::new(a as f64, 0.0)).norm() < 1e-6)
                    .expect("missing root");
                prop_assert_eq!(r.multiplicity, m);
                prop_assert!((r.value - C64::new(a as f64, 0.0)).norm() < 1e-9);
            }
        }
    }
}
