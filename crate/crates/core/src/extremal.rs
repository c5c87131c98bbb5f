//! Numerical maximization of coefficient functionals over the starlike
//! class, by optimizing over atomic measures.
//!
//! The search space for `n` atoms has `2n - 1` free parameters: `n` angles
//! (unconstrained, interpreted mod 2pi) and `n - 1` weight parameters `v_j`
//! mapped onto the simplex by `w_j = v_j^2 / (1 + sum v^2)` with the last
//! atom's parameter pinned to 1. The objective is smooth but multimodal, so
//! a derivative-free simplex-reflection local search is restarted from
//! uniformly random points; restarts use independent, seed-derived RNG
//! streams and merge deterministically, so results are reproducible and may
//! be computed in parallel.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::caratheodory::{Atom, HerglotzMeasure};
use crate::functionals::{evaluate, sharp_bound, FunctionalSpec};
use crate::starlike::coefficients_from_caratheodory;

/// Atoms closer than this (radians) are merged during canonicalization.
pub const MERGE_ANGLE_TOL: f64 = 1e-4;

/// Atoms lighter than this are dropped during canonicalization.
pub const NEGLIGIBLE_WEIGHT: f64 = 1e-9;

/// Multistart search configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchConfig {
    pub n_atoms: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { n_atoms: 4, restarts: 50, max_iters: 2000, tol: 1e-10, seed: 0 }
    }
}

impl SearchConfig {
    fn validate(&self) {
        assert!(self.n_atoms >= 1, "need at least one atom");
        assert!(self.restarts >= 1, "need at least one restart");
        assert!(self.tol > 0.0, "tolerance must be positive");
    }
}

/// Best value found by a search, with the witnessing measure.
///
/// `best_value` is recomputed from the canonicalized `best_measure` on
/// construction, so the two always agree. `gap = bound - best_value` is
/// present exactly when the bound formula applies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub best_value: f64,
    pub best_measure: HerglotzMeasure,
    pub bound: Option<f64>,
    pub gap: Option<f64>,
    pub iterations_used: usize,
    pub converged: bool,
}

/// One row of a parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub spec: FunctionalSpec,
    pub conditions_met: Option<bool>,
    pub bound: Option<f64>,
    pub search_max: f64,
    pub gap: Option<f64>,
    pub converged: bool,
}

/// Best value seen over a stream of random measures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub best_value: f64,
    pub best_measure: HerglotzMeasure,
    pub samples: usize,
}

/// Evaluates `spec` on the starlike function generated by `measure`.
pub fn objective(measure: &HerglotzMeasure, spec: &FunctionalSpec) -> f64 {
    let order = spec.min_order();
    let c = measure.coefficients(order - 1);
    let a = coefficients_from_caratheodory(&c, order).expect("order matches generator");
    evaluate(&a, spec).expect("order is sufficient by construction")
}

fn measure_from_params(params: &[f64], n_atoms: usize) -> HerglotzMeasure {
    debug_assert_eq!(params.len(), 2 * n_atoms - 1);
    let angles = &params[..n_atoms];
    let vs = &params[n_atoms..];
    let mut norm = 1.0; // pinned last parameter
    for v in vs {
        norm += v * v;
    }
    let atoms: Vec<Atom> = (0..n_atoms)
        .map(|j| {
            let v2 = if j + 1 < n_atoms { vs[j] * vs[j] } else { 1.0 };
            Atom { weight: v2 / norm, angle: angles[j].rem_euclid(std::f64::consts::TAU) }
        })
        .collect();
    HerglotzMeasure::new(atoms).expect("simplex map yields a valid measure")
}

/// Canonical form of a measure for reporting: near-coincident atoms merged,
/// negligible atoms dropped, the heaviest atom rotated to angle 0, and atoms
/// sorted by descending weight.
pub fn canonicalize(measure: &HerglotzMeasure) -> HerglotzMeasure {
    let tau = std::f64::consts::TAU;
    let mut atoms: Vec<Atom> =
        measure.atoms().iter().copied().filter(|a| a.weight > NEGLIGIBLE_WEIGHT).collect();
    if atoms.is_empty() {
        // Degenerate input: keep the heaviest original atom.
        let heaviest = measure
            .atoms()
            .iter()
            .copied()
            .max_by(|a, b| a.weight.total_cmp(&b.weight))
            .expect("measures are non-empty");
        atoms.push(heaviest);
    }
    atoms.sort_by(|a, b| b.weight.total_cmp(&a.weight).then(a.angle.total_cmp(&b.angle)));

    // Greedy clustering: heavy atoms absorb anything within the angle
    // tolerance (circular distance), using a weighted circular mean.
    let mut merged: Vec<(f64, Complex64)> = Vec::new(); // (weight, w * e^{i t} sum)
    'outer: for atom in atoms {
        for (weight, dir) in merged.iter_mut() {
            let center = dir.arg().rem_euclid(tau);
            let mut d = (atom.angle - center).abs() % tau;
            if d > tau / 2.0 {
                d = tau - d;
            }
            if d <= MERGE_ANGLE_TOL {
                *weight += atom.weight;
                *dir += atom.weight * Complex64::from_polar(1.0, atom.angle);
                continue 'outer;
            }
        }
        merged.push((atom.weight, atom.weight * Complex64::from_polar(1.0, atom.angle)));
    }

    let total: f64 = merged.iter().map(|(w, _)| *w).sum();
    let mut atoms: Vec<Atom> = merged
        .into_iter()
        .map(|(w, dir)| Atom { weight: w / total, angle: dir.arg().rem_euclid(tau) })
        .collect();
    atoms.sort_by(|a, b| b.weight.total_cmp(&a.weight).then(a.angle.total_cmp(&b.angle)));
    let pivot = atoms[0].angle;
    for a in &mut atoms {
        a.angle = (a.angle - pivot).rem_euclid(tau);
    }
    atoms.sort_by(|a, b| b.weight.total_cmp(&a.weight).then(a.angle.total_cmp(&b.angle)));
    HerglotzMeasure::new(atoms).expect("merge preserves normalization")
}

struct NelderMead<'a, F: Fn(&[f64]) -> f64> {
    f: &'a F,
    tol: f64,
}

struct NmRun {
    x: Vec<f64>,
    fx: f64,
    iterations: usize,
    converged: bool,
}

impl<'a, F: Fn(&[f64]) -> f64> NelderMead<'a, F> {
    /// Standard reflect/expand/contract/shrink iteration, minimizing `f`.
    fn run(&self, x0: &[f64], steps: &[f64], max_iters: usize) -> NmRun {
        let dim = x0.len();
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        simplex.push((x0.to_vec(), (self.f)(x0)));
        for i in 0..dim {
            let mut x = x0.to_vec();
            x[i] += steps[i];
            let fx = (self.f)(&x);
            simplex.push((x, fx));
        }

        let mut iterations = 0;
        let mut converged = false;
        while iterations < max_iters {
            iterations += 1;
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[dim].1 - simplex[0].1 <= self.tol {
                converged = true;
                break;
            }
            let centroid: Vec<f64> = (0..dim)
                .map(|i| simplex[..dim].iter().map(|(x, _)| x[i]).sum::<f64>() / dim as f64)
                .collect();
            let worst = simplex[dim].clone();
            let reflected: Vec<f64> =
                (0..dim).map(|i| centroid[i] + (centroid[i] - worst.0[i])).collect();
            let f_reflected = (self.f)(&reflected);

            if f_reflected < simplex[0].1 {
                let expanded: Vec<f64> =
                    (0..dim).map(|i| centroid[i] + 2.0 * (centroid[i] - worst.0[i])).collect();
                let f_expanded = (self.f)(&expanded);
                simplex[dim] = if f_expanded < f_reflected {
                    (expanded, f_expanded)
                } else {
                    (reflected, f_reflected)
                };
            } else if f_reflected < simplex[dim - 1].1 {
                simplex[dim] = (reflected, f_reflected);
            } else {
                let contracted: Vec<f64> = if f_reflected < worst.1 {
                    (0..dim).map(|i| centroid[i] + 0.5 * (reflected[i] - centroid[i])).collect()
                } else {
                    (0..dim).map(|i| centroid[i] + 0.5 * (worst.0[i] - centroid[i])).collect()
                };
                let f_contracted = (self.f)(&contracted);
                if f_contracted < worst.1.min(f_reflected) {
                    simplex[dim] = (contracted, f_contracted);
                } else {
                    // Shrink toward the best vertex.
                    let best = simplex[0].0.clone();
                    for vertex in simplex.iter_mut().skip(1) {
                        for (v, b) in vertex.0.iter_mut().zip(&best) {
                            *v = b + 0.5 * (*v - b);
                        }
                        vertex.1 = (self.f)(&vertex.0);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        NmRun { x: simplex[0].0.clone(), fx: simplex[0].1, iterations, converged }
    }
}

struct Candidate {
    value: f64,
    measure: HerglotzMeasure,
    iterations: usize,
    converged: bool,
}

fn run_restart(spec: &FunctionalSpec, cfg: &SearchConfig, restart: usize) -> Candidate {
    let n = cfg.n_atoms;
    let dim = 2 * n - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64 + 1);

    let mut x0 = Vec::with_capacity(dim);
    for _ in 0..n {
        x0.push(rng.gen::<f64>() * std::f64::consts::TAU);
    }
    for _ in 0..n - 1 {
        x0.push(0.2 + 1.8 * rng.gen::<f64>());
    }

    let negated = |x: &[f64]| -objective(&measure_from_params(x, n), spec);
    let nm = NelderMead { f: &negated, tol: cfg.tol };
    let mut steps = vec![0.5; dim];
    for s in steps.iter_mut().skip(n) {
        *s = 0.25;
    }

    // A second pass from the first optimum with a fresh simplex recovers
    // precision lost to simplex degeneration near simplex-map boundaries.
    let first_budget = cfg.max_iters / 2;
    let first = nm.run(&x0, &steps, first_budget);
    let second_steps: Vec<f64> = steps.iter().map(|s| s * 0.2).collect();
    let second = nm.run(&first.x, &second_steps, cfg.max_iters - first.iterations);

    let (x, iterations, converged) = if second.fx <= first.fx {
        (second.x, first.iterations + second.iterations, second.converged)
    } else {
        (first.x, first.iterations + second.iterations, first.converged)
    };
    let measure = canonicalize(&measure_from_params(&x, n));
    let value = objective(&measure, spec);
    Candidate { value, measure, iterations, converged }
}

/// Multistart maximization of `spec` over atomic measures.
///
/// Deterministic for a fixed seed: every restart draws from its own derived
/// RNG stream and the merge favors higher values, breaking ties by restart
/// index, so more restarts can only improve the result.
pub fn search(spec: &FunctionalSpec, cfg: &SearchConfig) -> SearchResult {
    cfg.validate();
    spec.validate().expect("finite parameters required");

    let candidates: Vec<Candidate> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(spec, cfg, r))
        .collect();

    let iterations_used: usize = candidates.iter().map(|c| c.iterations).sum();
    let best = candidates
        .into_iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(j.cmp(i)))
        .map(|(_, c)| c)
        .expect("at least one restart");

    let bound = sharp_bound(spec).ok().and_then(|r| r.bound);
    SearchResult {
        best_value: best.value,
        gap: bound.map(|b| b - best.value),
        bound,
        best_measure: best.measure,
        iterations_used,
        converged: best.converged,
    }
}

/// Best functional value over `samples` random measures (the fuzzing
/// primitive behind bound checking). Sample `i` draws from stream `i` of the
/// seeded generator, so the scan is deterministic and parallel-safe.
pub fn random_scan(
    spec: &FunctionalSpec,
    samples: usize,
    n_atoms: usize,
    seed: u64,
) -> ScanResult {
    assert!(samples >= 1);
    assert!(n_atoms >= 1);
    let best = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let m = HerglotzMeasure::sample_with_rng(&mut rng, n_atoms);
            let value = objective(&m, spec);
            (i, value, m)
        })
        .reduce_with(|a, b| {
            // Max by value; first-found (lowest index) wins ties.
            if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                b
            } else {
                a
            }
        })
        .expect("at least one sample");
    ScanResult { best_value: best.1, best_measure: best.2, samples }
}

/// Runs [`search`] on every spec of a parameter grid.
pub fn parameter_table(specs: &[FunctionalSpec], cfg: &SearchConfig) -> Vec<TableRow> {
    specs
        .iter()
        .map(|spec| {
            let result = search(spec, cfg);
            let conditions_met = sharp_bound(spec).ok().map(|r| r.all_met());
            TableRow {
                spec: *spec,
                conditions_met,
                bound: result.bound,
                search_max: result.best_value,
                gap: result.gap,
                converged: result.converged,
            }
        })
        .collect()
}
