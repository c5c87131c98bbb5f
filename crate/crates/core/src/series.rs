//! Truncated complex power-series arithmetic.
//!
//! A [`TruncatedSeries`] stores the coefficients of powers `z^0 ..= z^order`
//! and every operation truncates at that order. Binary operations require
//! both operands to share the same order; nothing here ever reads or writes
//! a power above it.

use num_complex::Complex64;
use thiserror::Error;

/// Default truncation order: enough for the coefficients `a_2 ..= a_5`
/// with one guard term.
pub const DEFAULT_ORDER: usize = 6;

/// Modulus floor under which a denominator's constant term counts as singular.
pub const DIVISION_FLOOR: f64 = 1e-12;

/// Residual tolerance for the post-division verification `q * den == num`.
pub const DIVISION_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("singular division: |den[0]| = {modulus:e} is below the floor {floor:e}")]
    SingularDivision { modulus: f64, floor: f64 },
    #[error("division residual {residual:e} exceeds tolerance {tol:e}")]
    DivisionResidual { residual: f64, tol: f64 },
}

/// Complex power series truncated at a fixed order.
///
/// `coeffs[k]` is the coefficient of `z^k`; the vector always holds exactly
/// `order + 1` entries. Values are immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Wraps a coefficient vector; its length fixes the order as `len - 1`.
    ///
    /// Panics on an empty vector (a series has at least the constant term).
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Complex64::new(1.0, 0.0);
        s
    }

    /// Convenience constructor from real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^k`; zero above the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn check_order(&self, rhs: &Self) -> Result<(), SeriesError> {
        if self.order() != rhs.order() {
            return Err(SeriesError::OrderMismatch { left: self.order(), right: rhs.order() });
        }
        Ok(())
    }

    /// Coefficient-wise sum of two series of the same order.
    pub fn add(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_order(rhs)?;
        Ok(Self::new(
            self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Coefficient-wise difference `self - rhs`.
    pub fn sub(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_order(rhs)?;
        Ok(Self::new(
            self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Scalar multiple.
    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Cauchy product truncated at the shared order.
    pub fn mul(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_order(rhs)?;
        let order = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().take(order + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Self::new(out))
    }

    /// Quotient `self / den` by forward substitution on the Cauchy product.
    ///
    /// Requires `|den[0]|` above [`DIVISION_FLOOR`]. The quotient is verified:
    /// if the residual `max_k |(q * den - self)[k]|` exceeds
    /// [`DIVISION_RESIDUAL_TOL`] the division is rejected with the residual
    /// reported in the error.
    pub fn divide(&self, den: &Self) -> Result<Self, SeriesError> {
        self.check_order(den)?;
        let d0 = den.coeffs[0];
        let modulus = d0.norm();
        if modulus < DIVISION_FLOOR {
            return Err(SeriesError::SingularDivision { modulus, floor: DIVISION_FLOOR });
        }
        let order = self.order();
        let mut q = vec![Complex64::new(0.0, 0.0); order + 1];
        for n in 0..=order {
            let mut acc = self.coeffs[n];
            for k in 1..=n {
                acc -= den.coeffs[k] * q[n - k];
            }
            q[n] = acc / d0;
        }
        let quotient = Self::new(q);
        let residual = quotient.mul(den)?.sub(self)?.max_coeff_modulus();
        if residual > DIVISION_RESIDUAL_TOL {
            return Err(SeriesError::DivisionResidual { residual, tol: DIVISION_RESIDUAL_TOL });
        }
        Ok(quotient)
    }

    /// The operator `f(z) -> z f'(z)`: coefficient `k` becomes `k * coeffs[k]`.
    pub fn z_times_derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * Complex64::new(k as f64, 0.0))
                .collect(),
        )
    }

    /// Horner evaluation of the truncated polynomial at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn add_cancels() {
        let a = TruncatedSeries::from_real(&[1.0, 1.0]);
        let b = TruncatedSeries::from_real(&[1.0, -1.0]);
        assert_eq!(a.add(&b).unwrap(), TruncatedSeries::from_real(&[2.0, 0.0]));
    }

    #[test]
    fn add_identity_and_componentwise() {
        let s = TruncatedSeries::from_real(&[1.0, 2.0, 3.0]);
        assert_eq!(s.add(&TruncatedSeries::zero(2)).unwrap(), s);
        let t = TruncatedSeries::from_real(&[0.0, 1.0, 1.0]);
        assert_eq!(s.add(&t).unwrap(), TruncatedSeries::from_real(&[1.0, 3.0, 4.0]));
    }

    #[test]
    fn add_rejects_order_mismatch() {
        let a = TruncatedSeries::zero(2);
        let b = TruncatedSeries::zero(3);
        assert!(matches!(a.add(&b), Err(SeriesError::OrderMismatch { .. })));
    }

    #[test]
    fn mul_binomial() {
        let s = TruncatedSeries::from_real(&[1.0, 1.0, 0.0]);
        assert_eq!(s.mul(&s).unwrap(), TruncatedSeries::from_real(&[1.0, 2.0, 1.0]));
    }

    #[test]
    fn mul_identity() {
        let s = TruncatedSeries::from_real(&[3.0, -1.0, 2.0, 0.5]);
        assert_eq!(s.mul(&TruncatedSeries::one(3)).unwrap(), s);
    }

    #[test]
    fn mul_truncated_cauchy_product() {
        // (1 + 2z + 2z^2) * (z + 2z^2 + 3z^3) truncated at order 3.
        let p = TruncatedSeries::from_real(&[1.0, 2.0, 2.0, 0.0]);
        let f = TruncatedSeries::from_real(&[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(p.mul(&f).unwrap(), TruncatedSeries::from_real(&[0.0, 1.0, 4.0, 9.0]));
    }

    #[test]
    fn divide_geometric() {
        let num = TruncatedSeries::from_real(&[1.0, 1.0, 0.0, 0.0, 0.0]);
        let den = TruncatedSeries::from_real(&[1.0, -1.0, 0.0, 0.0, 0.0]);
        let q = num.divide(&den).unwrap();
        let expect = TruncatedSeries::from_real(&[1.0, 2.0, 2.0, 2.0, 2.0]);
        for k in 0..=4 {
            assert!((q.coeff(k) - expect.coeff(k)).norm() < 1e-14);
        }
    }

    #[test]
    fn divide_self_is_one() {
        let s = TruncatedSeries::from_real(&[2.0, -3.0, 1.0, 7.0]);
        let q = s.divide(&s).unwrap();
        for k in 0..=3 {
            let want = if k == 0 { 1.0 } else { 0.0 };
            assert!((q.coeff(k) - c(want, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn divide_koebe_adjacent() {
        // 1/(1-z)^2 = 1 + 2z + 3z^2 + 4z^3 + ...
        let num = TruncatedSeries::from_real(&[1.0, 0.0, 0.0, 0.0]);
        let den = TruncatedSeries::from_real(&[1.0, -2.0, 1.0, 0.0]);
        let q = num.divide(&den).unwrap();
        for (k, want) in [1.0, 2.0, 3.0, 4.0].into_iter().enumerate() {
            assert!((q.coeff(k) - c(want, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn divide_rejects_singular() {
        let num = TruncatedSeries::one(3);
        let den = TruncatedSeries::from_real(&[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(num.divide(&den), Err(SeriesError::SingularDivision { .. })));
    }

    #[test]
    fn z_times_derivative_examples() {
        // z k'(z) for k(z) = z/(1-z)^2 has coefficients m^2.
        let koebe = TruncatedSeries::from_real(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(
            koebe.z_times_derivative(),
            TruncatedSeries::from_real(&[0.0, 1.0, 4.0, 9.0, 16.0])
        );
        let constant = TruncatedSeries::from_real(&[5.0, 0.0]);
        assert_eq!(constant.z_times_derivative(), TruncatedSeries::zero(1));
        let s = TruncatedSeries::from_real(&[0.0, 1.0, 1.0, 1.0]);
        assert_eq!(s.z_times_derivative(), TruncatedSeries::from_real(&[0.0, 1.0, 2.0, 3.0]));
    }

    #[test]
    fn eval_constant_and_linear() {
        let s = TruncatedSeries::from_real(&[1.0, 2.0, 2.0, 2.0]);
        assert_eq!(s.eval(c(0.0, 0.0)), c(1.0, 0.0));
        let lin = TruncatedSeries::from_real(&[0.0, 1.0]);
        assert_eq!(lin.eval(c(0.0, 0.3)), c(0.0, 0.3));
    }

    #[test]
    fn eval_against_closed_form() {
        // (1+z)/(1-z) at z = 0.5 equals 3; order-30 truncation error < 2e-9.
        let mut coeffs = vec![2.0; 31];
        coeffs[0] = 1.0;
        let s = TruncatedSeries::from_real(&coeffs);
        let v = s.eval(c(0.5, 0.0));
        assert!((v - c(3.0, 0.0)).norm() < 4e-9, "got {v}");
    }
}
