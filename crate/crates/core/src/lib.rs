//! Coefficient machinery for starlike univalent functions.
//!
//! A normalized analytic function `f(z) = z + a_2 z^2 + ...` on the unit
//! disk is starlike exactly when `z f'(z) / f(z)` has positive real part.
//! This crate builds such functions from their generators and studies the
//! classical coefficient functionals on them:
//!
//! * [`series`] - truncated complex power-series arithmetic, the numeric
//!   substrate for everything else;
//! * [`caratheodory`] - positive-real-part generators as finite atomic
//!   measures on the circle, with sampling and the classical extremal
//!   functions;
//! * [`starlike`] - the coefficient recursion `(m-1) a_m = sum c_{m-k} a_k`
//!   and the Koebe function `z/(1-z)^2` with its rotations;
//! * [`functionals`] - the functionals `|a4 - g a2 a3|`,
//!   `|a4 - g a2 a3 - e a2^3|`, `|a5 - m a2^2 a3|`, `|a5 - x a2 a4 - z a3^2|`
//!   and `|a3 - l a2^2|`, their sharp-bound formulas with parameter
//!   conditions, and the generator-side decompositions;
//! * [`extremal`] - seeded multistart maximization over atomic measures,
//!   used to confirm sharpness and to probe parameter regions empirically.

pub mod caratheodory;
pub mod extremal;
pub mod functionals;
pub mod series;
pub mod starlike;

pub use caratheodory::{Atom, CaratheodoryCoefficients, HerglotzMeasure};
pub use extremal::{SearchConfig, SearchResult};
pub use functionals::{BoundReport, FunctionalSpec};
pub use series::TruncatedSeries;
pub use starlike::SchlichtCoefficients;
