//! Dense matrices over exact rationals and complex doubles.

use num_traits::{One, Zero};

use super::poly::{CPoly, RatPoly};
use super::{C64, Rat};
use crate::error::{Error, Result};

/// Dense row-major matrix with arbitrary-precision rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Build from a row-major closure.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from integer pairs `(numerator, denominator)`, row-major.
    pub fn from_i64_pairs(rows: &[Vec<(i64, i64)>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| {
            let (n, d) = rows[i][j];
            Rat::new(n.into(), d.into())
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Matrix product.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(i, j)] += prod;
                    }
                }
            }
        }
        out
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    /// Scale every entry.
    pub fn scale(&self, factor: &Rat) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * factor)
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Rat {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)].clone()).sum()
    }

    /// True when every entry of column `j` is zero.
    pub fn column_is_zero(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self[(i, j)].is_zero())
    }

    /// Boolean nonzero pattern, row-major.
    pub fn support(&self) -> Vec<Vec<bool>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| !self[(i, j)].is_zero()).collect())
            .collect()
    }

    /// Convert to a complex matrix.
    pub fn to_cmatrix(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| {
            C64::new(super::rat_to_f64(&self[(i, j)]), 0.0)
        })
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Exact determinant and rank by fraction-free (Bareiss) elimination with
/// row pivoting; rank-deficient columns are skipped so the rank is read off
/// as the number of pivots.
pub fn det_rank(m: &RatMatrix) -> (Rat, usize) {
    assert!(m.is_square(), "det_rank requires a square matrix");
    let n = m.rows;
    if n == 0 {
        return (Rat::one(), 0);
    }
    let mut a = m.clone();
    let mut sign_negative = false;
    let mut prev = Rat::one();
    let mut pivot_row = 0usize;
    let mut skipped_column = false;
    for col in 0..n {
        if pivot_row == n {
            break;
        }
        let Some(p) = (pivot_row..n).find(|&r| !a[(r, col)].is_zero()) else {
            skipped_column = true;
            continue;
        };
        if p != pivot_row {
            for j in 0..n {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(pivot_row, j)].clone();
                a[(pivot_row, j)] = tmp;
            }
            sign_negative = !sign_negative;
        }
        for r in pivot_row + 1..n {
            for c in col + 1..n {
                let num = &a[(pivot_row, col)] * &a[(r, c)] - &a[(r, col)] * &a[(pivot_row, c)];
                a[(r, c)] = num / &prev;
            }
            a[(r, col)] = Rat::zero();
        }
        prev = a[(pivot_row, col)].clone();
        pivot_row += 1;
    }
    let rank = pivot_row;
    let det = if skipped_column || rank < n {
        Rat::zero()
    } else {
        // The last Bareiss pivot is the determinant up to row-swap sign.
        let d = a[(n - 1, n - 1)].clone();
        if sign_negative { -d } else { d }
    };
    (det, rank)
}

/// Monic characteristic polynomial `det(λI − A)` by the Faddeev–LeVerrier
/// recurrence; coefficients ascending in λ, exact.
fn char_poly(a: &RatMatrix) -> Vec<Rat> {
    assert!(a.is_square());
    let n = a.rows;
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut m = RatMatrix::identity(n);
    for k in 1..=n {
        let am = a.mul(&m);
        let c = -(am.trace() / Rat::from_integer((k as i64).into()));
        coeffs[n - k] = c.clone();
        if k < n {
            m = am.add(&RatMatrix::identity(n).scale(&c));
        }
    }
    coeffs
}

/// Exact coefficients of `P(z) = det(z·A − I)`.
///
/// Obtained from the characteristic polynomial by coefficient reversal:
/// `det(zA − I) = (−z)ⁿ·χ_A(1/z)`, so the coefficient of `z^t` is
/// `(−1)ⁿ·a_{n−t}` where `χ_A(λ) = Σ a_j λ^j`. The constant term equals
/// `det(−I)`, i.e. `+1` in even dimension.
pub fn zdet_poly(a: &RatMatrix) -> RatPoly {
    let n = a.rows;
    let chi = char_poly(a);
    let mut coeffs: Vec<Rat> = (0..=n).map(|t| chi[n - t].clone()).collect();
    if n % 2 == 1 {
        for c in &mut coeffs {
            *c = -c.clone();
        }
    }
    RatPoly::new(coeffs)
}

/// Dense row-major complex matrix for the sampled (numeric) pipeline.
#[derive(Debug, Clone)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = a * other[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + other[(i, j)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * factor)
    }

    pub fn trace(&self) -> C64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Deviation from the identity, as the largest entry of `self − I`.
    pub fn max_abs_from_identity(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let expected = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((self[(i, j)] - expected).norm());
            }
        }
        dev
    }

    /// Largest entrywise difference to another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                dev = dev.max((self[(i, j)] - other[(i, j)]).norm());
            }
        }
        dev
    }

    /// Largest row sum of entry magnitudes (infinity norm).
    pub fn max_row_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Solve `A·X = B` by LU with partial pivoting. A pivot below
    /// `1e−12·(max row norm)` raises [`Error::SingularPivot`].
    pub fn solve(&self, b: &Self, context: &'static str) -> Result<Self> {
        assert!(self.rows == self.cols, "solve requires a square matrix");
        assert_eq!(self.rows, b.rows);
        let n = self.rows;
        let mut a = self.clone();
        let mut x = b.clone();
        let scale = self.max_row_norm().max(1e-300);
        let tol = 1e-12 * scale;
        for col in 0..n {
            let (p, mag) = (col..n)
                .map(|r| (r, a[(r, col)].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if mag <= tol {
                return Err(Error::SingularPivot { context, pivot: mag });
            }
            if p != col {
                for j in 0..n {
                    let tmp = a[(p, j)];
                    a[(p, j)] = a[(col, j)];
                    a[(col, j)] = tmp;
                }
                for j in 0..x.cols {
                    let tmp = x[(p, j)];
                    x[(p, j)] = x[(col, j)];
                    x[(col, j)] = tmp;
                }
            }
            let piv = a[(col, col)];
            for r in col + 1..n {
                let factor = a[(r, col)] / piv;
                if factor == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in col..n {
                    let v = factor * a[(col, j)];
                    a[(r, j)] -= v;
                }
                for j in 0..x.cols {
                    let v = factor * x[(col, j)];
                    x[(r, j)] -= v;
                }
            }
        }
        for col in (0..n).rev() {
            for j in 0..x.cols {
                let mut acc = x[(col, j)];
                for k in col + 1..n {
                    acc -= a[(col, k)] * x[(k, j)];
                }
                x[(col, j)] = acc / a[(col, col)];
            }
        }
        Ok(x)
    }

    /// Matrix inverse via [`CMatrix::solve`].
    pub fn inverse(&self, context: &'static str) -> Result<Self> {
        self.solve(&Self::identity(self.rows), context)
    }

    /// Determinant by LU with partial pivoting (no tolerance: a singular
    /// matrix yields 0).
    pub fn det(&self) -> C64 {
        assert!(self.rows == self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = C64::new(1.0, 0.0);
        for col in 0..n {
            let (p, mag) = (col..n)
                .map(|r| (r, a[(r, col)].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if mag == 0.0 {
                return C64::new(0.0, 0.0);
            }
            if p != col {
                for j in 0..n {
                    let tmp = a[(p, j)];
                    a[(p, j)] = a[(col, j)];
                    a[(col, j)] = tmp;
                }
                det = -det;
            }
            let piv = a[(col, col)];
            det *= piv;
            for r in col + 1..n {
                let factor = a[(r, col)] / piv;
                for j in col..n {
                    let v = factor * a[(col, j)];
                    a[(r, j)] -= v;
                }
            }
        }
        det
    }

    /// Complex analogue of [`zdet_poly`]: coefficients of `det(z·A − I)`
    /// via Faddeev–LeVerrier.
    pub fn zdet_poly(&self) -> CPoly {
        assert!(self.rows == self.cols);
        let n = self.rows;
        let mut chi = vec![C64::new(0.0, 0.0); n + 1];
        chi[n] = C64::new(1.0, 0.0);
        let mut m = Self::identity(n);
        for k in 1..=n {
            let am = self.mul(&m);
            let c = -am.trace() / (k as f64);
            chi[n - k] = c;
            if k < n {
                m = am.add(&Self::identity(n).scale(c));
            }
        }
        let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
        CPoly::new((0..=n).map(|t| chi[n - t] * sign).collect())
    }

    /// Unitarity defect `‖A·A* − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        self.mul(&self.adjoint()).max_abs_from_identity()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}
