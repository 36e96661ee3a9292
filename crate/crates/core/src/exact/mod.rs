//! Exact rational linear algebra and complex polynomial root extraction.
//!
//! Everything spectral in this crate is reduced to the polynomial
//! `P(z) = det(z·S − I)` of a rational matrix `S`: its degree gives the
//! effective size, its roots give the eigenvalue families, and a vanishing
//! leading coefficient detects non-Weyl asymptotics. The kernel therefore
//! stays exact (arbitrary-precision rationals) until the final root-finding
//! step, which runs in `f64` on square-free factors.

mod matrix;
mod poly;
mod roots;

pub use matrix::{det_rank, zdet_poly, CMatrix, RatMatrix};
pub use poly::{CPoly, RatPoly};
pub use roots::{complex_roots, rational_roots, Root, RootSet, DEFAULT_CLUSTER_TOL};

/// Arbitrary-precision rational number used throughout the exact pipeline.
pub type Rat = num_rational::BigRational;

/// Complex double used by the sampled (numeric) pipeline.
pub type C64 = num_complex::Complex64;

/// Construct a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Format a rational as `p/q`, omitting the denominator when it is 1.
pub fn format_rat(x: &Rat) -> String {
    if x.denom() == &num_bigint::BigInt::from(1) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse an exact rational from a decimal string (`"1"`, `"0.25"`, `"-3.5"`)
/// or a fraction (`"2/3"`).
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: num_bigint::BigInt = num.trim().parse().ok()?;
        let d: num_bigint::BigInt = den.trim().parse().ok()?;
        if d == 0.into() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1i32, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut numer: num_bigint::BigInt = if int_part.is_empty() {
        0.into()
    } else {
        int_part.parse().ok()?
    };
    let mut denom: num_bigint::BigInt = 1.into();
    for c in frac_part.chars() {
        numer = numer * 10 + (c.to_digit(10).unwrap() as i64);
        denom *= 10;
    }
    Some(Rat::new(numer * sign, denom))
}

/// Convert a rational to `f64` (used only at the numeric boundary).
pub fn rat_to_f64(x: &Rat) -> f64 {
    num_traits::ToPrimitive::to_f64(x).expect("rational out of f64 range")
}
