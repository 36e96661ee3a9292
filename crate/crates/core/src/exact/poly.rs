//! Univariate polynomials with exact rational or complex coefficients.

use num_traits::{One, Signed, Zero};

use super::{C64, Rat};

/// Polynomial with exact rational coefficients, ascending powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    /// Build from ascending coefficients; trailing zeros are trimmed.
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rat::zero());
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    pub fn one() -> Self {
        Self::new(vec![Rat::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// Degree after trailing-zero trim; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of `z^t` (zero beyond the stored degree).
    pub fn coeff(&self, t: usize) -> &Rat {
        static ZERO: std::sync::OnceLock<Rat> = std::sync::OnceLock::new();
        self.coeffs
            .get(t)
            .unwrap_or_else(|| ZERO.get_or_init(Rat::zero))
    }

    /// Exact evaluation by Horner's scheme.
    pub fn eval_rat(&self, z: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Numeric evaluation at a complex point.
    pub fn eval_complex(&self, z: C64) -> C64 {
        self.to_cpoly().eval(z)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| self.coeff(i) - other.coeff(i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Exact division; panics unless the remainder is zero.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "polynomial division was not exact");
        q
    }

    /// Euclidean division, returning `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.degree() < divisor.degree() || self.is_zero() {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lead = divisor.coeffs[dd].clone();
        let mut quot = vec![Rat::zero(); self.degree() - dd + 1];
        for t in (dd..rem.len()).rev() {
            if rem[t].is_zero() {
                continue;
            }
            let q = &rem[t] / &lead;
            quot[t - dd] = q.clone();
            for j in 0..=dd {
                let v = &divisor.coeffs[j] * &q;
                rem[t - dd + j] -= v;
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Monic associate (leading coefficient 1); the zero polynomial is
    /// returned unchanged.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.coeffs[self.degree()].clone();
        Self::new(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// Square-free decomposition (Yun's algorithm): returns pairs
    /// `(factor, multiplicity)` with each factor monic and square-free,
    /// such that the product of `factor^multiplicity` equals the monic
    /// associate of `self`.
    pub fn square_free_decomposition(&self) -> Vec<(Self, usize)> {
        assert!(!self.is_zero());
        let f = self.monic();
        if f.degree() == 0 {
            return vec![];
        }
        let fd = f.derivative();
        let a0 = f.gcd(&fd);
        let mut b = f.div_exact(&a0);
        let mut d = fd.div_exact(&a0).sub(&b.derivative());
        let mut out = Vec::new();
        let mut mult = 1usize;
        while b.degree() > 0 {
            let p = b.gcd(&d);
            if p.degree() > 0 {
                out.push((p.clone(), mult));
            }
            b = b.div_exact(&p);
            d = d.div_exact(&p).sub(&b.derivative());
            mult += 1;
        }
        out
    }

    /// Downgrade to complex coefficients.
    pub fn to_cpoly(&self) -> CPoly {
        CPoly::new(
            self.coeffs
                .iter()
                .map(|c| C64::new(super::rat_to_f64(c), 0.0))
                .collect(),
        )
    }

    /// Largest coefficient magnitude, as `f64`.
    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| super::rat_to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }

    /// Render like `1 - 2z^2 + z^4`.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = super::format_rat(&c.abs());
            let sign = c.is_negative();
            if out.is_empty() {
                if sign {
                    out.push('-');
                }
            } else {
                out.push_str(if sign { " - " } else { " + " });
            }
            let power = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if power.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&power);
            } else {
                out.push_str(&format!("{mag}·{power}"));
            }
        }
        out
    }
}

/// Polynomial with complex coefficients, ascending powers.
#[derive(Debug, Clone)]
pub struct CPoly {
    coeffs: Vec<C64>,
}

impl CPoly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(C64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    /// Trim trailing coefficients whose magnitude is below
    /// `tol · max |coeff|`; used by the sampled pipeline where the top
    /// coefficients of `det(zS − I)` vanish only numerically.
    pub fn trimmed(&self, tol: f64) -> Self {
        let scale = self.max_coeff_abs();
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= tol * scale) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::new(vec![]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * (i as f64))
                .collect(),
        )
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}
