//! Taylor coefficients of starlike functions built from their generators.
//!
//! A normalized starlike function satisfies `z f'(z) = p(z) f(z)` for some
//! generator `p` with positive real part. Comparing coefficients gives the
//! recursion
//!
//! ```text
//! (m - 1) a_m = sum_{k=1}^{m-1} c_{m-k} a_k,    a_1 = 1,
//! ```
//!
//! which this module uses to produce `a_2 ..= a_N` from `c_1 ..= c_{N-1}`.
//! The low-order closed forms
//!
//! ```text
//! a_2 = c_1
//! 2 a_3 = c_2 + c_1^2
//! 6 a_4 = 2 c_3 + 3 c_2 c_1 + c_1^3
//! 24 a_5 = 6 c_4 + 8 c_3 c_1 + 6 c_2 c_1^2 + 3 c_2^2 + c_1^4
//! ```
//!
//! are kept as an independent cross-check. (The `c_1^3` term in `6 a_4` is
//! forced by the recursion: with all `c_k = 2` it gives `6 a_4 = 4 + 12 + 8 =
//! 24`, i.e. the Koebe value `a_4 = 4`.)

use num_complex::Complex64;
use thiserror::Error;

use crate::caratheodory::CaratheodoryCoefficients;
use crate::series::TruncatedSeries;

#[derive(Debug, Error)]
pub enum StarlikeError {
    #[error("need generator coefficients up to c_{need}, have only c_{have}")]
    InsufficientGenerator { need: usize, have: usize },
    #[error("order {order} too small; need at least {min}")]
    OrderTooSmall { order: usize, min: usize },
}

/// Coefficients `a_2 ..= a_N` of a normalized starlike function
/// (`a_1 = 1` implicit).
///
/// Values are only ever produced from generator coefficients via the
/// recursion, or as the Koebe function and its rotations.
#[derive(Debug, Clone, PartialEq)]
pub struct SchlichtCoefficients {
    a: Vec<Complex64>,
}

impl SchlichtCoefficients {
    /// Highest coefficient index, i.e. `N` for `a_2 ..= a_N`.
    pub fn order(&self) -> usize {
        self.a.len() + 1
    }

    /// `a_m` for `2 <= m <= N`.
    pub fn a(&self, m: usize) -> Complex64 {
        assert!(m >= 2 && m <= self.order(), "a_{m} not available");
        self.a[m - 2]
    }

    /// The function as a series `z + a_2 z^2 + ... + a_N z^N`.
    pub fn series(&self) -> TruncatedSeries {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.order() + 1];
        coeffs[1] = Complex64::new(1.0, 0.0);
        for (i, am) in self.a.iter().enumerate() {
            coeffs[i + 2] = *am;
        }
        TruncatedSeries::new(coeffs)
    }
}

/// Runs the recursion `(m-1) a_m = sum c_{m-k} a_k` up to `a_n`.
#[allow(clippy::needless_range_loop)] // indexed form mirrors the convolution
pub fn coefficients_from_caratheodory(
    c: &CaratheodoryCoefficients,
    n: usize,
) -> Result<SchlichtCoefficients, StarlikeError> {
    if n < 2 {
        return Err(StarlikeError::OrderTooSmall { order: n, min: 2 });
    }
    if c.order() < n - 1 {
        return Err(StarlikeError::InsufficientGenerator { need: n - 1, have: c.order() });
    }
    // a[m] for m = 1 ..= n, with a[0] unused.
    let mut a = vec![Complex64::new(0.0, 0.0); n + 1];
    a[1] = Complex64::new(1.0, 0.0);
    for m in 2..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..m {
            acc += c.c(m - k) * a[k];
        }
        a[m] = acc / (m - 1) as f64;
    }
    Ok(SchlichtCoefficients { a: a[2..].to_vec() })
}

/// The low-order closed forms `(a_2, a_3, a_4, a_5)` written directly in the
/// generator coefficients; must agree with the recursion.
pub fn closed_forms_a2_a5(
    c: &CaratheodoryCoefficients,
) -> Result<[Complex64; 4], StarlikeError> {
    if c.order() < 4 {
        return Err(StarlikeError::InsufficientGenerator { need: 4, have: c.order() });
    }
    let (c1, c2, c3, c4) = (c.c(1), c.c(2), c.c(3), c.c(4));
    let a2 = c1;
    let a3 = (c2 + c1 * c1) / 2.0;
    let a4 = (2.0 * c3 + 3.0 * c2 * c1 + c1 * c1 * c1) / 6.0;
    let a5 = (6.0 * c4 + 8.0 * c3 * c1 + 6.0 * c2 * c1 * c1 + 3.0 * c2 * c2
        + c1 * c1 * c1 * c1)
        / 24.0;
    Ok([a2, a3, a4, a5])
}

/// Coefficients of the rotated Koebe function `e^{-i theta} k(e^{i theta} z)`
/// with `k(z) = z/(1-z)^2`: `a_m = m e^{i (m-1) theta}`.
pub fn koebe_coefficients(theta: f64, n: usize) -> SchlichtCoefficients {
    assert!(n >= 2, "need at least a_2");
    let a = (2..=n)
        .map(|m| m as f64 * Complex64::from_polar(1.0, (m - 1) as f64 * theta))
        .collect();
    SchlichtCoefficients { a }
}

/// Max coefficient modulus of `z f'(z) - p(z) f(z)` through the truncation
/// order; zero (to rounding) whenever `a` was generated from `c`.
pub fn generating_residual(c: &CaratheodoryCoefficients, a: &SchlichtCoefficients) -> f64 {
    let f = a.series();
    let p = c.series(f.order());
    let lhs = f.z_times_derivative();
    let rhs = p.mul(&f).expect("orders match by construction");
    lhs.sub(&rhs).expect("orders match by construction").max_coeff_modulus()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caratheodory::{moebius_coefficients, HerglotzMeasure};

    #[test]
    fn koebe_generator_gives_integer_coefficients() {
        let a = coefficients_from_caratheodory(&moebius_coefficients(4), 5).unwrap();
        for m in 2..=5 {
            assert_eq!(a.a(m), Complex64::new(m as f64, 0.0));
        }
    }

    #[test]
    fn zero_generator_gives_identity_map() {
        let c = CaratheodoryCoefficients::new(vec![Complex64::new(0.0, 0.0); 4]).unwrap();
        let a = coefficients_from_caratheodory(&c, 5).unwrap();
        for m in 2..=5 {
            assert_eq!(a.a(m), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn a2_equals_c1() {
        let c1 = Complex64::new(0.3, -1.1);
        let c = CaratheodoryCoefficients::new(vec![c1]).unwrap();
        let a = coefficients_from_caratheodory(&c, 2).unwrap();
        assert_eq!(a.a(2), c1);
    }

    #[test]
    fn rejects_insufficient_generator() {
        let c = moebius_coefficients(2);
        assert!(matches!(
            coefficients_from_caratheodory(&c, 5),
            Err(StarlikeError::InsufficientGenerator { .. })
        ));
    }

    #[test]
    fn closed_forms_on_koebe() {
        let [a2, a3, a4, a5] = closed_forms_a2_a5(&moebius_coefficients(4)).unwrap();
        assert_eq!(a2, Complex64::new(2.0, 0.0));
        assert_eq!(a3, Complex64::new(3.0, 0.0));
        assert_eq!(a4, Complex64::new(4.0, 0.0));
        assert_eq!(a5, Complex64::new(5.0, 0.0));
    }

    #[test]
    fn closed_forms_substitution_case() {
        // c_1 = 0, c_2 = 2, rest 0: a_3 = 1 and a_4 = 0.
        let zero = Complex64::new(0.0, 0.0);
        let c = CaratheodoryCoefficients::new(vec![zero, Complex64::new(2.0, 0.0), zero, zero])
            .unwrap();
        let [a2, a3, a4, _] = closed_forms_a2_a5(&c).unwrap();
        assert_eq!(a2, zero);
        assert_eq!(a3, Complex64::new(1.0, 0.0));
        assert_eq!(a4, zero);
    }

    #[test]
    fn closed_forms_match_recursion_on_random_measures() {
        for seed in 0..50 {
            let m = HerglotzMeasure::sample(seed, 1 + (seed % 5) as usize);
            let c = m.coefficients(4);
            let closed = closed_forms_a2_a5(&c).unwrap();
            let rec = coefficients_from_caratheodory(&c, 5).unwrap();
            for (i, m_idx) in (2..=5).enumerate() {
                assert!(
                    (closed[i] - rec.a(m_idx)).norm() <= 1e-12,
                    "seed {seed}, a_{m_idx}: {} vs {}",
                    closed[i],
                    rec.a(m_idx)
                );
            }
        }
    }

    #[test]
    fn koebe_rotations() {
        let plain = koebe_coefficients(0.0, 6);
        for m in 2..=6 {
            assert_eq!(plain.a(m), Complex64::new(m as f64, 0.0));
        }
        let rotated = koebe_coefficients(std::f64::consts::PI, 4);
        assert!((rotated.a(2) - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
        let theta = 1.234;
        let r = koebe_coefficients(theta, 5);
        for m in 2..=5 {
            assert!((r.a(m).norm() - m as f64).abs() < 1e-13);
        }
    }

    #[test]
    fn koebe_matches_recursion_from_moebius() {
        let via_recursion = coefficients_from_caratheodory(&moebius_coefficients(5), 6).unwrap();
        let direct = koebe_coefficients(0.0, 6);
        for m in 2..=6 {
            assert_eq!(via_recursion.a(m), direct.a(m));
        }
    }

    #[test]
    fn generating_residual_vanishes() {
        for seed in 0..20 {
            let m = HerglotzMeasure::sample(100 + seed, 3);
            let c = m.coefficients(5);
            let a = coefficients_from_caratheodory(&c, 6).unwrap();
            let r = generating_residual(&c, &a);
            assert!(r <= 1e-12, "seed {seed}: residual {r}");
        }
    }
}
