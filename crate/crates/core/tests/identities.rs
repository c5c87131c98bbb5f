//! Cross-module identities and randomized properties.

use num_complex::Complex64;
use proptest::prelude::*;

use starcoeff::caratheodory::{c2_extremal, moebius_coefficients, HerglotzMeasure};
use starcoeff::functionals::{
    decomposition, evaluate, evaluate_complex, sharp_bound, FunctionalSpec,
};
use starcoeff::starlike::{
    closed_forms_a2_a5, coefficients_from_caratheodory, generating_residual, koebe_coefficients,
};
use starcoeff::series::TruncatedSeries;

fn complex_vec(order: usize, max_mag: f64) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-max_mag..max_mag, -max_mag..max_mag), order + 1)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

proptest! {
    #[test]
    fn add_commutes_and_associates(a in complex_vec(6, 10.0),
                                   b in complex_vec(6, 10.0),
                                   c in complex_vec(6, 10.0)) {
        let (a, b, c) = (TruncatedSeries::new(a), TruncatedSeries::new(b), TruncatedSeries::new(c));
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        let left = a.add(&b).unwrap().add(&c).unwrap();
        let right = a.add(&b.add(&c).unwrap()).unwrap();
        for k in 0..=6 {
            prop_assert!((left.coeff(k) - right.coeff(k)).norm() <= 1e-12);
        }
    }

    #[test]
    fn mul_commutes_and_associates(a in complex_vec(6, 4.0),
                                   b in complex_vec(6, 4.0),
                                   c in complex_vec(6, 4.0)) {
        let (a, b, c) = (TruncatedSeries::new(a), TruncatedSeries::new(b), TruncatedSeries::new(c));
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        let scale = ab.max_coeff_modulus().max(1.0);
        for k in 0..=6 {
            prop_assert!((ab.coeff(k) - ba.coeff(k)).norm() <= 1e-12 * scale);
        }
        let left = ab.mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        let scale = left.max_coeff_modulus().max(1.0);
        for k in 0..=6 {
            prop_assert!((left.coeff(k) - right.coeff(k)).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn divide_round_trips(a in complex_vec(5, 2.0), mut b in complex_vec(5, 2.0)) {
        // Keep the denominator comfortably nonsingular; magnitudes stay at
        // the generator scale |c| <= 2 so forward-substitution growth cannot
        // swamp the 1e-10 residual verification.
        if b[0].norm() < 0.5 {
            b[0] += Complex64::new(1.0, 0.0);
        }
        let a = TruncatedSeries::new(a);
        let b = TruncatedSeries::new(b);
        let q = a.divide(&b).unwrap();
        let back = q.mul(&b).unwrap();
        for k in 0..=5 {
            prop_assert!((back.coeff(k) - a.coeff(k)).norm() <= 1e-10);
        }
    }

    #[test]
    fn z_times_derivative_is_linear(a in complex_vec(6, 8.0),
                                    b in complex_vec(6, 8.0),
                                    alpha_re in -3.0..3.0f64,
                                    beta_im in -3.0..3.0f64) {
        let (a, b) = (TruncatedSeries::new(a), TruncatedSeries::new(b));
        let alpha = Complex64::new(alpha_re, 0.5);
        let beta = Complex64::new(-0.25, beta_im);
        let combined = a.scale(alpha).add(&b.scale(beta)).unwrap().z_times_derivative();
        let separate = a.z_times_derivative().scale(alpha)
            .add(&b.z_times_derivative().scale(beta)).unwrap();
        let scale = combined.max_coeff_modulus().max(1.0);
        for k in 0..=6 {
            prop_assert!((combined.coeff(k) - separate.coeff(k)).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn sampled_measures_obey_classical_bounds(seed in 0u64..5_000, n_atoms in 1usize..=6) {
        let m = HerglotzMeasure::sample(seed, n_atoms);
        let c = m.coefficients(6);
        for k in 1..=6 {
            prop_assert!(c.c(k).norm() <= 2.0 + 1e-12);
        }
        let dev = (c.c(2) - c.c(1) * c.c(1) / 2.0).norm();
        prop_assert!(dev <= 2.0 - c.c(1).norm_sqr() / 2.0 + 1e-10);
    }

    #[test]
    fn rotation_covariance_of_schlicht_coefficients(seed in 0u64..2_000,
                                                    n_atoms in 1usize..=5,
                                                    shift in 0.0..std::f64::consts::TAU) {
        let m = HerglotzMeasure::sample(seed, n_atoms);
        let a = coefficients_from_caratheodory(&m.coefficients(5), 6).unwrap();
        let ar = coefficients_from_caratheodory(&m.rotate(shift).coefficients(5), 6).unwrap();
        for idx in 2..=6 {
            let phase = Complex64::from_polar(1.0, -((idx - 1) as f64) * shift);
            prop_assert!((ar.a(idx) - a.a(idx) * phase).norm() <= 1e-12);
        }
    }

    #[test]
    fn generator_identity_residual_vanishes(seed in 0u64..2_000, n_atoms in 1usize..=6) {
        let m = HerglotzMeasure::sample(seed, n_atoms);
        let c = m.coefficients(5);
        let a = coefficients_from_caratheodory(&c, 6).unwrap();
        prop_assert!(generating_residual(&c, &a) <= 1e-12);
    }

    #[test]
    fn decomposition_agrees_with_recursion(seed in 0u64..2_000,
                                           n_atoms in 1usize..=5,
                                           p1 in -2.0..2.0f64,
                                           p2 in -2.0..2.0f64) {
        let m = HerglotzMeasure::sample(seed, n_atoms);
        let c = m.coefficients(4);
        let a = coefficients_from_caratheodory(&c, 5).unwrap();
        for spec in [
            FunctionalSpec::A4Gamma { gamma: p1 },
            FunctionalSpec::A4GammaEta { gamma: p1, eta: p2 },
            FunctionalSpec::A5Mu { mu: p1 },
            FunctionalSpec::A5XiZeta { xi: p1, zeta: p2 },
        ] {
            let direct = evaluate_complex(&a, &spec).unwrap();
            let dec = decomposition(&c, &spec).unwrap();
            let tol = 1e-11 * direct.norm().max(1.0);
            prop_assert!((direct - dec).norm() <= tol, "{}: {} vs {}", spec, direct, dec);
        }
    }

    #[test]
    fn c2_extremal_attains_equality(re in -1.4..1.4f64,
                                    im in -1.4..1.4f64,
                                    phase in 0.0..std::f64::consts::TAU) {
        let c1 = Complex64::new(re, im);
        let eps = Complex64::from_polar(1.0, phase);
        let p = c2_extremal(c1, eps, 3).unwrap();
        prop_assert!((p.coeff(1) - c1).norm() <= 1e-10);
        let dev = (p.coeff(2) - c1 * c1 / 2.0).norm();
        prop_assert!((dev - (2.0 - c1.norm_sqr() / 2.0)).abs() <= 1e-10);
    }
}

#[test]
fn positive_real_part_on_sampled_measures() {
    for seed in 0..200 {
        let m = HerglotzMeasure::sample(seed, 1 + (seed % 6) as usize);
        let report = m.check_positive_real_part(0.95, 180);
        assert!(report.all_positive, "seed {seed}: min Re = {}", report.min_real_part);
    }
}

#[test]
fn koebe_attains_bounds_across_parameters() {
    let koebe = koebe_coefficients(0.0, 5);
    for i in 0..=20 {
        let gamma = -1.0 + i as f64 * 0.07; // through the admissible range
        let spec = FunctionalSpec::A4Gamma { gamma };
        let report = sharp_bound(&spec).unwrap();
        if let Some(bound) = report.bound {
            assert_eq!(evaluate(&koebe, &spec).unwrap(), bound, "gamma = {gamma}");
        }
    }
}

#[test]
fn closed_forms_and_recursion_agree_on_extremal_generators() {
    // Generators from the c2-extremal family, fed through both routes.
    for i in 0..50 {
        let r = 2.0 * (i as f64 / 49.0);
        let c1 = Complex64::from_polar(r, 0.13 * i as f64);
        let eps = Complex64::from_polar(1.0, 0.41 * i as f64);
        let p = c2_extremal(c1, eps, 4).unwrap();
        let c = starcoeff::caratheodory::CaratheodoryCoefficients::from_series(&p).unwrap();
        let closed = closed_forms_a2_a5(&c).unwrap();
        let rec = coefficients_from_caratheodory(&c, 5).unwrap();
        for (j, m) in (2..=5).enumerate() {
            assert!((closed[j] - rec.a(m)).norm() <= 1e-12, "i = {i}, a_{m}");
        }
    }
}

#[test]
fn moebius_generator_reproduces_koebe_exactly() {
    let a = coefficients_from_caratheodory(&moebius_coefficients(5), 6).unwrap();
    for m in 2..=6 {
        assert_eq!(a.a(m), Complex64::new(m as f64, 0.0));
    }
}
