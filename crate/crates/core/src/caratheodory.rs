//! Functions with positive real part on the unit disk, represented by
//! finite atomic probability measures on the circle.
//!
//! Each atom `(w, t)` contributes `w * (1 + z e^{-it}) / (1 - z e^{-it})`;
//! a convex combination of these kernels is analytic on `|z| < 1`, maps 0 to
//! 1, and has positive real part, so every measure built here is a valid
//! generator. Single-atom measures are the extreme points of the class: the
//! atom at angle 0 is the Moebius function `(1+z)/(1-z)`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{SeriesError, TruncatedSeries};

/// Slack allowed on the weight normalization `sum w_j = 1`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Slack allowed on the classical coefficient bound `|c_k| <= 2`.
pub const COEFF_BOUND_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CaratheodoryError {
    #[error("a measure needs at least one atom")]
    EmptyMeasure,
    #[error("atom {index} has invalid weight {weight}")]
    InvalidWeight { index: usize, weight: f64 },
    #[error("weights sum to {sum}, not 1")]
    UnnormalizedWeights { sum: f64 },
    #[error("coefficient c_{index} has modulus {modulus} above the bound 2")]
    CoefficientOutOfBounds { index: usize, modulus: f64 },
    #[error("|c1| = {modulus} exceeds 2")]
    FirstCoefficientTooLarge { modulus: f64 },
    #[error("|eps| = {modulus} is not 1")]
    EpsNotUnimodular { modulus: f64 },
    #[error("order {order} too small; need at least {min}")]
    OrderTooSmall { order: usize, min: usize },
    #[error("constant term {value} is not 1")]
    BadConstantTerm { value: Complex64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// One point mass on the circle: weight `w`, angle `t` in `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(rename = "w")]
    pub weight: f64,
    #[serde(rename = "t")]
    pub angle: f64,
}

/// Finite atomic probability measure on the circle.
///
/// Serializes as `{"atoms": [{"w": ..., "t": ...}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure")]
pub struct HerglotzMeasure {
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct RawMeasure {
    atoms: Vec<Atom>,
}

impl TryFrom<RawMeasure> for HerglotzMeasure {
    type Error = CaratheodoryError;

    fn try_from(raw: RawMeasure) -> Result<Self, Self::Error> {
        HerglotzMeasure::new(raw.atoms)
    }
}

impl HerglotzMeasure {
    /// Validates weights (nonnegative, summing to 1 within [`WEIGHT_SUM_TOL`])
    /// and reduces angles into `[0, 2pi)`.
    pub fn new(atoms: Vec<Atom>) -> Result<Self, CaratheodoryError> {
        if atoms.is_empty() {
            return Err(CaratheodoryError::EmptyMeasure);
        }
        for (index, atom) in atoms.iter().enumerate() {
            if !atom.weight.is_finite() || atom.weight < 0.0 || atom.weight > 1.0 {
                return Err(CaratheodoryError::InvalidWeight { index, weight: atom.weight });
            }
        }
        let sum: f64 = atoms.iter().map(|a| a.weight).sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(CaratheodoryError::UnnormalizedWeights { sum });
        }
        let atoms = atoms
            .into_iter()
            .map(|a| Atom { weight: a.weight, angle: a.angle.rem_euclid(TAU) })
            .collect();
        Ok(Self { atoms })
    }

    /// The point mass at `angle`; angle 0 gives the Moebius function.
    pub fn single_atom(angle: f64) -> Self {
        Self { atoms: vec![Atom { weight: 1.0, angle: angle.rem_euclid(TAU) }] }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Shifts every atom angle by `s` (a rotation of the generator).
    pub fn rotate(&self, s: f64) -> Self {
        Self {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom { weight: a.weight, angle: (a.angle + s).rem_euclid(TAU) })
                .collect(),
        }
    }

    /// Exact kernel evaluation `p(z) = sum_j w_j (1 + z e^{-i t_j}) / (1 - z e^{-i t_j})`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        self.atoms.iter().fold(Complex64::new(0.0, 0.0), |acc, a| {
            let zeta = z * Complex64::from_polar(1.0, -a.angle);
            acc + a.weight * (one + zeta) / (one - zeta)
        })
    }

    /// Taylor coefficients `c_1 ..= c_n` of the induced generator:
    /// `c_k = 2 sum_j w_j e^{-i k t_j}`, so `|c_k| <= 2` always.
    pub fn coefficients(&self, n: usize) -> CaratheodoryCoefficients {
        assert!(n >= 1, "need at least c_1");
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        for atom in &self.atoms {
            let step = Complex64::from_polar(1.0, -atom.angle);
            let mut power = Complex64::new(1.0, 0.0);
            for ck in c.iter_mut() {
                power *= step;
                *ck += 2.0 * atom.weight * power;
            }
        }
        CaratheodoryCoefficients { c }
    }

    /// Generator as a truncated series `1 + c_1 z + ... + c_order z^order`.
    pub fn series(&self, order: usize) -> TruncatedSeries {
        self.coefficients(order.max(1)).series(order)
    }

    /// Deterministic random measure: weights from the flat simplex
    /// distribution, angles uniform on `[0, 2pi)`.
    pub fn sample(seed: u64, n_atoms: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::sample_with_rng(&mut rng, n_atoms)
    }

    /// Same as [`HerglotzMeasure::sample`] but drawing from a caller-provided
    /// generator, so shards of a fuzzing run can use independent streams.
    pub fn sample_with_rng<R: Rng + ?Sized>(rng: &mut R, n_atoms: usize) -> Self {
        assert!(n_atoms >= 1, "need at least one atom");
        // Exponential spacings normalized to the simplex.
        let raw: Vec<f64> = (0..n_atoms).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let sum: f64 = raw.iter().sum();
        let weights: Vec<f64> = if sum > 0.0 {
            raw.iter().map(|e| e / sum).collect()
        } else {
            vec![1.0 / n_atoms as f64; n_atoms]
        };
        let atoms = weights
            .into_iter()
            .map(|weight| Atom { weight, angle: rng.gen::<f64>() * TAU })
            .collect();
        Self { atoms }
    }

    /// Samples the generator on `grid` equally spaced points of `|z| = radius`
    /// and reports the minimum real part found (positive for every measure).
    pub fn check_positive_real_part(&self, radius: f64, grid: usize) -> PositivityReport {
        assert!((0.0..1.0).contains(&radius), "radius must lie in [0, 1)");
        assert!(grid >= 1);
        let mut min_re = f64::INFINITY;
        for m in 0..grid {
            let theta = TAU * m as f64 / grid as f64;
            let z = Complex64::from_polar(radius, theta);
            min_re = min_re.min(self.eval(z).re);
        }
        PositivityReport { min_real_part: min_re, all_positive: min_re > 0.0 }
    }
}

/// Outcome of a positive-real-part grid check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositivityReport {
    pub min_real_part: f64,
    pub all_positive: bool,
}

/// Coefficients `c_1 ..= c_N` of a positive-real-part generator
/// (`c_0 = 1` implicit). Construction enforces `|c_k| <= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CaratheodoryCoefficients {
    c: Vec<Complex64>,
}

impl CaratheodoryCoefficients {
    /// Wraps raw coefficients, rejecting any with modulus above
    /// `2 + `[`COEFF_BOUND_TOL`].
    pub fn new(c: Vec<Complex64>) -> Result<Self, CaratheodoryError> {
        if c.is_empty() {
            return Err(CaratheodoryError::OrderTooSmall { order: 0, min: 1 });
        }
        for (i, ck) in c.iter().enumerate() {
            let modulus = ck.norm();
            // NaN must fail too, so the comparison is kept in rejecting form.
            if modulus.is_nan() || modulus > 2.0 + COEFF_BOUND_TOL {
                return Err(CaratheodoryError::CoefficientOutOfBounds { index: i + 1, modulus });
            }
        }
        Ok(Self { c })
    }

    /// Reads `c_1 ..= c_order` off a generator series with constant term 1.
    pub fn from_series(p: &TruncatedSeries) -> Result<Self, CaratheodoryError> {
        let c0 = p.coeff(0);
        if (c0 - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
            return Err(CaratheodoryError::BadConstantTerm { value: c0 });
        }
        Self::new((1..=p.order()).map(|k| p.coeff(k)).collect())
    }

    /// Highest index available, i.e. `N` for `c_1 ..= c_N`.
    pub fn order(&self) -> usize {
        self.c.len()
    }

    /// `c_k`, 1-indexed as in the expansion `1 + c_1 z + c_2 z^2 + ...`.
    pub fn c(&self, k: usize) -> Complex64 {
        assert!(k >= 1 && k <= self.c.len(), "c_{k} not available");
        self.c[k - 1]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.c
    }

    /// The generator as a series `1 + sum c_k z^k` truncated at `order`
    /// (missing high coefficients are left zero).
    pub fn series(&self, order: usize) -> TruncatedSeries {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = Complex64::new(1.0, 0.0);
        for (k, ck) in self.c.iter().enumerate().take(order) {
            coeffs[k + 1] = *ck;
        }
        TruncatedSeries::new(coeffs)
    }
}

/// Coefficients of the Moebius function `(1+z)/(1-z)`: all equal to 2.
pub fn moebius_coefficients(n: usize) -> CaratheodoryCoefficients {
    assert!(n >= 1);
    CaratheodoryCoefficients { c: vec![Complex64::new(2.0, 0.0); n] }
}

/// Expands the generator attaining the maximal second-coefficient deviation
/// `|c_2 - c_1^2/2| = 2 - |c_1|^2/2`:
///
/// ```text
/// p(z) = (1 + (c1 + eps conj(c1)) z / 2 + eps z^2)
///      / (1 - (c1 - eps conj(c1)) z / 2 - eps z^2)
/// ```
///
/// with `|eps| = 1`. The coefficient of `z` in the result equals `c1`, and
/// `c_2 = c_1^2/2 + eps (2 - |c_1|^2/2)`.
pub fn c2_extremal(
    c1: Complex64,
    eps: Complex64,
    n: usize,
) -> Result<TruncatedSeries, CaratheodoryError> {
    let c1_mod = c1.norm();
    if c1_mod.is_nan() || c1_mod > 2.0 + COEFF_BOUND_TOL {
        return Err(CaratheodoryError::FirstCoefficientTooLarge { modulus: c1_mod });
    }
    let eps_mod = eps.norm();
    if (eps_mod - 1.0).abs() > 1e-12 {
        return Err(CaratheodoryError::EpsNotUnimodular { modulus: eps_mod });
    }
    if n < 2 {
        return Err(CaratheodoryError::OrderTooSmall { order: n, min: 2 });
    }
    let half_plus = (c1 + eps * c1.conj()) / 2.0;
    let half_minus = (c1 - eps * c1.conj()) / 2.0;
    let mut num = vec![Complex64::new(0.0, 0.0); n + 1];
    num[0] = Complex64::new(1.0, 0.0);
    num[1] = half_plus;
    num[2] = eps;
    let mut den = vec![Complex64::new(0.0, 0.0); n + 1];
    den[0] = Complex64::new(1.0, 0.0);
    den[1] = -half_minus;
    den[2] = -eps;
    Ok(TruncatedSeries::new(num).divide(&TruncatedSeries::new(den))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn single_atom_angle_zero_is_moebius() {
        let m = HerglotzMeasure::single_atom(0.0);
        let c = m.coefficients(4);
        for k in 1..=4 {
            assert_eq!(c.c(k), Complex64::new(2.0, 0.0));
        }
    }

    #[test]
    fn single_atom_angle_pi_alternates() {
        let m = HerglotzMeasure::single_atom(std::f64::consts::PI);
        let c = m.coefficients(3);
        for (k, want) in [(1, -2.0), (2, 2.0), (3, -2.0)] {
            assert!(approx(c.c(k), Complex64::new(want, 0.0), 1e-14), "c_{k} = {}", c.c(k));
        }
    }

    #[test]
    fn two_opposite_atoms() {
        let m = HerglotzMeasure::new(vec![
            Atom { weight: 0.5, angle: 0.0 },
            Atom { weight: 0.5, angle: std::f64::consts::PI },
        ])
        .unwrap();
        let c = m.coefficients(2);
        assert!(approx(c.c(1), Complex64::new(0.0, 0.0), 1e-14));
        assert!(approx(c.c(2), Complex64::new(2.0, 0.0), 1e-14));
    }

    #[test]
    fn moebius_matches_single_atom() {
        let direct = moebius_coefficients(5);
        let via_measure = HerglotzMeasure::single_atom(0.0).coefficients(5);
        assert_eq!(direct.as_slice(), via_measure.as_slice());
        assert_eq!(moebius_coefficients(1).as_slice(), &[Complex64::new(2.0, 0.0)]);
    }

    #[test]
    fn measure_validation() {
        assert!(matches!(HerglotzMeasure::new(vec![]), Err(CaratheodoryError::EmptyMeasure)));
        let bad_sum = HerglotzMeasure::new(vec![Atom { weight: 0.4, angle: 0.0 }]);
        assert!(matches!(bad_sum, Err(CaratheodoryError::UnnormalizedWeights { .. })));
        let neg = HerglotzMeasure::new(vec![
            Atom { weight: -0.1, angle: 0.0 },
            Atom { weight: 1.1, angle: 1.0 },
        ]);
        assert!(matches!(neg, Err(CaratheodoryError::InvalidWeight { .. })));
    }

    #[test]
    fn sample_is_deterministic_and_normalized() {
        let a = HerglotzMeasure::sample(7, 4);
        let b = HerglotzMeasure::sample(7, 4);
        assert_eq!(a, b);
        let sum: f64 = a.atoms().iter().map(|at| at.weight).sum();
        assert!((sum - 1.0).abs() <= WEIGHT_SUM_TOL);
    }

    #[test]
    fn sampled_single_atom_has_unimodular_coefficients() {
        let m = HerglotzMeasure::sample(3, 1);
        let c = m.coefficients(5);
        for k in 1..=5 {
            assert!((c.c(k).norm() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn c2_extremal_degenerates_to_moebius() {
        let p = c2_extremal(Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0), 4).unwrap();
        for k in 1..=4 {
            assert!(approx(p.coeff(k), Complex64::new(2.0, 0.0), 1e-10), "c_{k} = {}", p.coeff(k));
        }
    }

    #[test]
    fn c2_extremal_at_zero_c1() {
        // (1+z^2)/(1-z^2): even coefficients 2, odd 0.
        let p = c2_extremal(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), 4).unwrap();
        assert!(approx(p.coeff(1), Complex64::new(0.0, 0.0), 1e-12));
        assert!(approx(p.coeff(2), Complex64::new(2.0, 0.0), 1e-12));
        assert!(approx(p.coeff(3), Complex64::new(0.0, 0.0), 1e-12));
        let c1 = p.coeff(1);
        let c2 = p.coeff(2);
        let deviation = (c2 - c1 * c1 / 2.0).norm();
        assert!((deviation - 2.0).abs() < 1e-10);
    }

    #[test]
    fn c2_extremal_attains_equality_at_c1_one() {
        let p = c2_extremal(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), 3).unwrap();
        assert!(approx(p.coeff(1), Complex64::new(1.0, 0.0), 1e-10));
        let dev = (p.coeff(2) - Complex64::new(0.5, 0.0)).norm();
        assert!((dev - 1.5).abs() < 1e-10, "deviation {dev}");
    }

    #[test]
    fn c2_extremal_rejects_bad_inputs() {
        let one = Complex64::new(1.0, 0.0);
        assert!(matches!(
            c2_extremal(Complex64::new(2.5, 0.0), one, 4),
            Err(CaratheodoryError::FirstCoefficientTooLarge { .. })
        ));
        assert!(matches!(
            c2_extremal(one, Complex64::new(0.5, 0.0), 4),
            Err(CaratheodoryError::EpsNotUnimodular { .. })
        ));
        assert!(matches!(
            c2_extremal(one, one, 1),
            Err(CaratheodoryError::OrderTooSmall { .. })
        ));
    }

    #[test]
    fn positivity_of_moebius_on_grid() {
        let m = HerglotzMeasure::single_atom(0.0);
        let report = m.check_positive_real_part(0.9, 360);
        assert!(report.all_positive);
        // Closed form: min Re (1+z)/(1-z) on |z| = r is (1-r)/(1+r).
        let want = (1.0 - 0.9) / (1.0 + 0.9);
        assert!((report.min_real_part - want).abs() < 1e-12, "{}", report.min_real_part);
    }

    #[test]
    fn positivity_at_origin() {
        let m = HerglotzMeasure::sample(11, 3);
        let report = m.check_positive_real_part(0.0, 8);
        assert!((report.min_real_part - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rotation_covariance_of_coefficients() {
        let m = HerglotzMeasure::sample(5, 4);
        let shift = 0.731;
        let c = m.coefficients(6);
        let cr = m.rotate(shift).coefficients(6);
        for k in 1..=6 {
            let want = c.c(k) * Complex64::from_polar(1.0, -(k as f64) * shift);
            assert!(approx(cr.c(k), want, 1e-12), "k = {k}");
        }
    }

    #[test]
    fn measure_json_round_trip() {
        let m = HerglotzMeasure::sample(9, 3);
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.starts_with(r#"{"atoms":[{"w":"#), "{json}");
        let back: HerglotzMeasure = serde_json::from_str(&json).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn measure_json_rejects_invalid() {
        let bad = r#"{"atoms":[{"w":0.4,"t":0.0}]}"#;
        assert!(serde_json::from_str::<HerglotzMeasure>(bad).is_err());
    }
}
