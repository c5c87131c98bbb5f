//! Coefficient functionals on starlike functions, their sharp-bound
//! formulas with parameter conditions, and the generator-side
//! decompositions used to analyze them.
//!
//! Five functionals are supported:
//!
//! | kind            | expression                            | bound (when conditions hold) |
//! |-----------------|---------------------------------------|------------------------------|
//! | `a4-gamma`      | `\|a4 - g a2 a3\|`                    | `4 - 6g` if `g <= 5/9`       |
//! | `a4-gamma-eta`  | `\|a4 - g a2 a3 - e a2^3\|`           | `4 - 6g - 8e` if `3g + 4e <= 5/3` |
//! | `a5-mu`         | `\|a5 - m a2^2 a3\|`                  | `5 - 12m` if `m <= 2/9`      |
//! | `a5-xi-zeta`    | `\|a5 - x a2 a4 - z a3^2\|`           | `5 - 8x - 9z` if `5x + 6z <= 2` |
//! | `fekete-szego`  | `\|a3 - l a2^2\|`                     | none (evaluated only)        |
//!
//! The `a5-xi-zeta` admissibility condition `5x + 6z <= 2` is derived from
//! the elimination step below: it is exactly the requirement that the
//! curly-bracket coefficient `1 + A` stay nonnegative, matching how the
//! other three conditions arise. Each of the four bounds is attained by the
//! Koebe function, whose coefficients are `a_m = m`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::caratheodory::CaratheodoryCoefficients;
use crate::starlike::SchlichtCoefficients;

/// Leading factors with modulus at or below this are treated as degenerate:
/// the bracket decomposition is replaced by its expanded polynomial form.
pub const DEGENERATE_FACTOR_FLOOR: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum FunctionalError {
    #[error("coefficients up to a_{need} required, have a_{have}")]
    InsufficientOrder { need: usize, have: usize },
    #[error("no bound formula for kind {kind}")]
    NoBoundFormula { kind: &'static str },
    #[error("no generator-side decomposition for kind {kind}")]
    NoDecomposition { kind: &'static str },
    #[error("condition {name} fails")]
    ConditionNotMet { name: &'static str },
    #[error("degenerate leading factor {name} = {value:e}")]
    DegenerateLeadingFactor { name: &'static str, value: f64 },
    #[error("|c1| = {value} outside [0, 2]")]
    InvalidC1Modulus { value: f64 },
    #[error("parameter {name} is not finite")]
    NonFiniteParameter { name: &'static str },
}

/// Which functional to evaluate, together with its real parameters.
///
/// Serializes as `{"kind": "a4-gamma", "params": {"gamma": 0.2}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum FunctionalSpec {
    A4Gamma { gamma: f64 },
    A4GammaEta { gamma: f64, eta: f64 },
    A5Mu { mu: f64 },
    A5XiZeta { xi: f64, zeta: f64 },
    FeketeSzego { lambda: f64 },
}

impl FunctionalSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::A4Gamma { .. } => "a4-gamma",
            Self::A4GammaEta { .. } => "a4-gamma-eta",
            Self::A5Mu { .. } => "a5-mu",
            Self::A5XiZeta { .. } => "a5-xi-zeta",
            Self::FeketeSzego { .. } => "fekete-szego",
        }
    }

    /// Parameters as `(name, value)` pairs, in display order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Self::A4Gamma { gamma } => vec![("gamma", gamma)],
            Self::A4GammaEta { gamma, eta } => vec![("gamma", gamma), ("eta", eta)],
            Self::A5Mu { mu } => vec![("mu", mu)],
            Self::A5XiZeta { xi, zeta } => vec![("xi", xi), ("zeta", zeta)],
            Self::FeketeSzego { lambda } => vec![("lambda", lambda)],
        }
    }

    /// Minimum coefficient order needed to evaluate this functional.
    pub fn min_order(&self) -> usize {
        match self {
            Self::FeketeSzego { .. } => 3,
            _ => 5,
        }
    }

    pub fn validate(&self) -> Result<(), FunctionalError> {
        for (name, value) in self.params() {
            if !value.is_finite() {
                return Err(FunctionalError::NonFiniteParameter { name });
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for FunctionalSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.kind_name())?;
        for (name, value) in self.params() {
            write!(f, " {name}={value}")?;
        }
        Ok(())
    }
}

/// One named admissibility predicate and whether it holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub met: bool,
}

/// Result of a bound query: the formula value is present exactly when every
/// condition holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub spec: FunctionalSpec,
    pub bound: Option<f64>,
    pub conditions_met: Vec<Condition>,
    pub notes: String,
}

impl BoundReport {
    pub fn all_met(&self) -> bool {
        self.conditions_met.iter().all(|c| c.met)
    }

    /// Name of the first failing condition, if any.
    pub fn first_failure(&self) -> Option<&str> {
        self.conditions_met.iter().find(|c| !c.met).map(|c| c.name.as_str())
    }
}

/// The functional as a complex number, before taking the modulus.
pub fn evaluate_complex(
    a: &SchlichtCoefficients,
    spec: &FunctionalSpec,
) -> Result<Complex64, FunctionalError> {
    spec.validate()?;
    let need = spec.min_order();
    if a.order() < need {
        return Err(FunctionalError::InsufficientOrder { need, have: a.order() });
    }
    let value = match *spec {
        FunctionalSpec::A4Gamma { gamma } => a.a(4) - gamma * (a.a(2) * a.a(3)),
        FunctionalSpec::A4GammaEta { gamma, eta } => {
            a.a(4) - gamma * (a.a(2) * a.a(3)) - eta * (a.a(2) * a.a(2) * a.a(2))
        }
        FunctionalSpec::A5Mu { mu } => a.a(5) - mu * (a.a(2) * a.a(2) * a.a(3)),
        FunctionalSpec::A5XiZeta { xi, zeta } => {
            a.a(5) - xi * (a.a(2) * a.a(4)) - zeta * (a.a(3) * a.a(3))
        }
        FunctionalSpec::FeketeSzego { lambda } => a.a(3) - lambda * (a.a(2) * a.a(2)),
    };
    Ok(value)
}

/// Modulus of the coefficient combination named by `spec`.
pub fn evaluate(a: &SchlichtCoefficients, spec: &FunctionalSpec) -> Result<f64, FunctionalError> {
    evaluate_complex(a, spec).map(|v| v.norm())
}

/// The sharp-bound formula for `spec` together with its named conditions.
///
/// The bound value is reported only when every condition holds; predicates
/// are evaluated with `<=` / `>=` and no epsilon slack, so exact boundary
/// parameters qualify. `fekete-szego` carries no bound formula and is
/// rejected.
pub fn sharp_bound(spec: &FunctionalSpec) -> Result<BoundReport, FunctionalError> {
    spec.validate()?;
    let (conditions, bound_value, notes): (Vec<Condition>, f64, String) = match *spec {
        FunctionalSpec::A4Gamma { gamma } => (
            vec![
                cond("1-gamma>=0", 1.0 - gamma >= 0.0),
                cond("gamma<=5/9", gamma <= 5.0 / 9.0),
            ],
            4.0 - 6.0 * gamma,
            String::new(),
        ),
        FunctionalSpec::A4GammaEta { gamma, eta } => (
            vec![
                cond("1-gamma>=0", 1.0 - gamma >= 0.0),
                cond("3gamma+4eta<=5/3", 3.0 * gamma + 4.0 * eta <= 5.0 / 3.0),
            ],
            4.0 - 6.0 * gamma - 8.0 * eta,
            String::new(),
        ),
        FunctionalSpec::A5Mu { mu } => (
            vec![cond("1-2mu>=0", 1.0 - 2.0 * mu >= 0.0), cond("mu<=2/9", mu <= 2.0 / 9.0)],
            5.0 - 12.0 * mu,
            String::new(),
        ),
        FunctionalSpec::A5XiZeta { xi, zeta } => (
            vec![
                cond("1-xi>=0", 1.0 - xi >= 0.0),
                cond("1-2zeta>=0", 1.0 - 2.0 * zeta >= 0.0),
                cond("1-2xi-2zeta>=0", 1.0 - 2.0 * xi - 2.0 * zeta >= 0.0),
                cond("derived-xi-zeta", 5.0 * xi + 6.0 * zeta <= 2.0),
            ],
            5.0 - 8.0 * xi - 9.0 * zeta,
            "derived-xi-zeta is 5*xi+6*zeta<=2, the nonnegativity requirement \
             on the elimination step's bracket coefficient"
                .to_string(),
        ),
        FunctionalSpec::FeketeSzego { .. } => {
            return Err(FunctionalError::NoBoundFormula { kind: spec.kind_name() })
        }
    };
    let all_met = conditions.iter().all(|c| c.met);
    Ok(BoundReport {
        spec: *spec,
        bound: all_met.then_some(bound_value),
        conditions_met: conditions,
        notes,
    })
}

fn cond(name: &str, met: bool) -> Condition {
    Condition { name: name.to_string(), met }
}

/// Kind-specific pieces of the generator-side decomposition: the constant in
/// front of the bracket and the fraction `A` inside it.
///
/// Returns `(leading, leading_name, a_fraction_numerator)`, where the bracket
/// fraction is `A = numerator / (3 * leading)`.
fn bracket_parts(spec: &FunctionalSpec) -> Option<(f64, &'static str, f64)> {
    match *spec {
        FunctionalSpec::A4Gamma { gamma } => {
            Some((1.0 - gamma, "1-gamma", 2.0 * (1.0 - 3.0 * gamma)))
        }
        FunctionalSpec::A4GammaEta { gamma, eta } => {
            Some((1.0 - gamma, "1-gamma", 2.0 * (1.0 - 3.0 * gamma - 6.0 * eta)))
        }
        FunctionalSpec::A5Mu { mu } => Some((1.0 - 2.0 * mu, "1-2mu", 1.0 - 12.0 * mu)),
        FunctionalSpec::A5XiZeta { xi, zeta } => {
            Some((1.0 - 2.0 * xi - 2.0 * zeta, "1-2xi-2zeta", 1.0 - 4.0 * xi - 6.0 * zeta))
        }
        FunctionalSpec::FeketeSzego { .. } => None,
    }
}

/// The functional written directly in generator coefficients.
///
/// For the four bound-carrying kinds this evaluates the bracket form, e.g.
///
/// ```text
/// a4 - g a2 a3 = c3/3 + (1-g) (c1/2) { c2 + [2(1-3g) / (3(1-g))] c1^2/2 }
/// ```
///
/// and agrees with [`evaluate_complex`] applied to the recursion output. A
/// degenerate leading factor (for example `g = 1`) switches to the expanded
/// polynomial form of the same identity, so no division by zero can occur.
pub fn decomposition(
    c: &CaratheodoryCoefficients,
    spec: &FunctionalSpec,
) -> Result<Complex64, FunctionalError> {
    spec.validate()?;
    if c.order() < 4 {
        return Err(FunctionalError::InsufficientOrder { need: 4, have: c.order() + 1 });
    }
    let (c1, c2, c3, c4) = (c.c(1), c.c(2), c.c(3), c.c(4));
    let c1sq_half = c1 * c1 / 2.0;
    let (leading, _, a_num) =
        bracket_parts(spec).ok_or(FunctionalError::NoDecomposition { kind: spec.kind_name() })?;
    let bracket = |a_fraction: f64| c2 + a_fraction * c1sq_half;

    let value = match *spec {
        FunctionalSpec::A4Gamma { gamma } => {
            if leading.abs() > DEGENERATE_FACTOR_FLOOR {
                c3 / 3.0 + leading * (c1 / 2.0) * bracket(a_num / (3.0 * leading))
            } else {
                c3 / 3.0
                    + leading * (c1 * c2) / 2.0
                    + (1.0 - 3.0 * gamma) * (c1 * c1 * c1) / 6.0
            }
        }
        FunctionalSpec::A4GammaEta { gamma, eta } => {
            if leading.abs() > DEGENERATE_FACTOR_FLOOR {
                c3 / 3.0 + leading * (c1 / 2.0) * bracket(a_num / (3.0 * leading))
            } else {
                c3 / 3.0
                    + leading * (c1 * c2) / 2.0
                    + (1.0 - 3.0 * gamma - 6.0 * eta) * (c1 * c1 * c1) / 6.0
            }
        }
        FunctionalSpec::A5Mu { mu } => {
            let head = c4 / 4.0 + (c3 * c1) / 3.0 + (c2 * c2) / 8.0;
            if leading.abs() > DEGENERATE_FACTOR_FLOOR {
                head + leading * (c1 * c1 / 4.0) * bracket(a_num / (3.0 * leading))
            } else {
                head + leading * (c2 * c1 * c1) / 4.0
                    + (1.0 - 12.0 * mu) * (c1 * c1 * c1 * c1) / 24.0
            }
        }
        FunctionalSpec::A5XiZeta { xi, zeta } => {
            let head =
                c4 / 4.0 + (1.0 - xi) * (c3 * c1) / 3.0 + (1.0 - 2.0 * zeta) * (c2 * c2) / 8.0;
            if leading.abs() > DEGENERATE_FACTOR_FLOOR {
                head + leading * (c1 * c1 / 4.0) * bracket(a_num / (3.0 * leading))
            } else {
                head + leading * (c2 * c1 * c1) / 4.0
                    + (1.0 - 4.0 * xi - 6.0 * zeta) * (c1 * c1 * c1 * c1) / 24.0
            }
        }
        FunctionalSpec::FeketeSzego { .. } => unreachable!("rejected above"),
    };
    Ok(value)
}

/// Worst-case bound on the curly bracket alone at a given `|c1|`:
/// `|1 + A| |c1|^2/2 + (2 - |c1|^2/2)`.
pub fn bracket_bound(c1_modulus: f64, spec: &FunctionalSpec) -> Result<f64, FunctionalError> {
    let (_, a_fraction) = elimination_parts(c1_modulus, spec)?;
    Ok(bracket_majorant(c1_modulus, a_fraction))
}

fn bracket_majorant(x: f64, a_fraction: f64) -> f64 {
    (1.0 + a_fraction).abs() * x * x / 2.0 + (2.0 - x * x / 2.0)
}

fn elimination_parts(
    c1_modulus: f64,
    spec: &FunctionalSpec,
) -> Result<(f64, f64), FunctionalError> {
    spec.validate()?;
    if !(0.0..=2.0).contains(&c1_modulus) {
        return Err(FunctionalError::InvalidC1Modulus { value: c1_modulus });
    }
    // The nonnegativity conditions are preconditions of the elimination step.
    match *spec {
        FunctionalSpec::A4Gamma { gamma } | FunctionalSpec::A4GammaEta { gamma, .. } => {
            if 1.0 - gamma < 0.0 {
                return Err(FunctionalError::ConditionNotMet { name: "1-gamma>=0" });
            }
        }
        FunctionalSpec::A5Mu { mu } => {
            if 1.0 - 2.0 * mu < 0.0 {
                return Err(FunctionalError::ConditionNotMet { name: "1-2mu>=0" });
            }
        }
        FunctionalSpec::A5XiZeta { xi, zeta } => {
            if 1.0 - xi < 0.0 {
                return Err(FunctionalError::ConditionNotMet { name: "1-xi>=0" });
            }
            if 1.0 - 2.0 * zeta < 0.0 {
                return Err(FunctionalError::ConditionNotMet { name: "1-2zeta>=0" });
            }
            if 1.0 - 2.0 * xi - 2.0 * zeta < 0.0 {
                return Err(FunctionalError::ConditionNotMet { name: "1-2xi-2zeta>=0" });
            }
        }
        FunctionalSpec::FeketeSzego { .. } => {
            return Err(FunctionalError::NoBoundFormula { kind: spec.kind_name() })
        }
    }
    let (leading, leading_name, a_num) =
        bracket_parts(spec).expect("bound-carrying kinds only");
    if leading.abs() <= DEGENERATE_FACTOR_FLOOR {
        return Err(FunctionalError::DegenerateLeadingFactor {
            name: leading_name,
            value: leading,
        });
    }
    Ok((leading, a_num / (3.0 * leading)))
}

/// The scalar majorant obtained by eliminating `c_2` inside the bracket and
/// bounding every remaining generator coefficient by 2.
///
/// At `|c1| = 2` (with the admissibility conditions satisfied) this chains
/// into exactly the sharp-bound formula, e.g. for `a4-gamma`:
/// `2/3 + (1-g) * (2/2) * [2 (5-9g) / (3(1-g))] = 4 - 6g`.
pub fn elimination_bound_step(
    c1_modulus: f64,
    spec: &FunctionalSpec,
) -> Result<f64, FunctionalError> {
    let (leading, a_fraction) = elimination_parts(c1_modulus, spec)?;
    let x = c1_modulus;
    let bracket = bracket_majorant(x, a_fraction);
    let total = match *spec {
        FunctionalSpec::A4Gamma { .. } | FunctionalSpec::A4GammaEta { .. } => {
            2.0 / 3.0 + leading * (x / 2.0) * bracket
        }
        FunctionalSpec::A5Mu { .. } => 1.0 + 2.0 * x / 3.0 + leading * (x * x / 4.0) * bracket,
        FunctionalSpec::A5XiZeta { xi, zeta } => {
            0.5 + (1.0 - xi) * 2.0 * x / 3.0
                + (1.0 - 2.0 * zeta) / 2.0
                + leading * (x * x / 4.0) * bracket
        }
        FunctionalSpec::FeketeSzego { .. } => unreachable!("rejected above"),
    };
    Ok(total)
}
