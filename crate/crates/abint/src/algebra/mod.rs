//! Exact arithmetic over ℚ(i): scalars, polynomials and rational functions.

mod bipoly;
mod gauss;
mod ratc;
mod ratfunc;
mod unipoly;

pub use bipoly::{BiPoly, Var};
pub use gauss::GaussRat;
pub use ratc::RatC;
pub use ratfunc::{Denom, LinAtom, RatFunc};
pub use unipoly::UniPoly;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("cannot parse number {0:?}")]
    Parse(String),
    #[error("declared pole order {declared} but the denominator has order {actual}")]
    PoleOrderMismatch { declared: u32, actual: u32 },
    #[error("a linear factor must involve t or c")]
    ConstantAtom,
    #[error("pole location must have degree at most one in c")]
    PoleNotLinear,
    #[error("two poles coincide identically in c")]
    CoincidentPoles,
}
