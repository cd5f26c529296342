//! Countable linear orders inside `ℚ(√2)`, their cuts and completions.

mod coded;
mod cut;
mod iso;
mod quad;

pub use coded::{simplest_between, Bound, CodedOrder, Interval, Predicate, Sup};
pub use cut::{cut_at, cut_compare, cut_difference, cut_has_max, cut_max, cut_sup, in_completion, normalize, Cut, Side};
pub use iso::{back_and_forth, preserves, IsoMode, IsoVerdict, Verdict, DEFAULT_DEPTH};
pub use quad::{rat, QuadRat};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("no member strictly between {0} and {1}")]
    EmptyGap(QuadRat, QuadRat),
    #[error("invalid order: {0}")]
    Invalid(String),
}
