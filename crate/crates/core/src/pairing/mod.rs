//! Two class orders linked by a bounded or unbounded correspondence.

mod completion;
mod deps;
mod direction;
mod model;
mod scenario;
mod weight;

pub use completion::{completion_maps, image_of_cut, sample_completion_cut, CompletionReport, CompletionShape};
pub use deps::{dep_sets, dual_dep_set, verify_dep_laws, DSet, DepLawReport, DepSets};
pub use direction::{classify, compare_images, direction, DirectionReport};
pub use model::{bounded_iso, partnered_model, restrict_to_model};
pub use scenario::{AffineMap, BoundedLink, ClassOrder, Link, LinkImage, MemberView, Model, Scenario};
pub use weight::{weight_one, InclusionWitness, WeightOneOutcome};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order::{CodedOrder, QuadRat};

pub const DEFAULT_POINT_SAMPLES: usize = 500;
pub const DEFAULT_CUT_PAIRS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkKind {
    Bounded,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    /// Decreasing links are exactly the commuting ones.
    pub fn commutes(self) -> bool {
        self == Direction::Decreasing
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideName {
    P,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

/// Outcome of one checked law, with a human-readable witness on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Law {
    pub law: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Law {
    pub fn pass(law: &str) -> Self {
        Self { law: law.into(), status: Status::Pass, witness: None }
    }

    pub fn fail(law: &str, witness: String) -> Self {
        Self { law: law.into(), status: Status::Fail, witness: Some(witness) }
    }

    pub fn not_applicable(law: &str, why: &str) -> Self {
        Self { law: law.into(), status: Status::NotApplicable, witness: Some(why.into()) }
    }

    pub fn from_first(law: &str, violation: Option<String>) -> Self {
        match violation {
            None => Self::pass(law),
            Some(w) => Self::fail(law, w),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PairingError {
    #[error("{0} is not a class of the order")]
    PointNotInOrder(QuadRat),
    #[error("link maps {class_at} to a class but {cut_at} to a cut")]
    MixedLink { class_at: QuadRat, cut_at: QuadRat },
    #[error("bounded link is not a bijection: {0}")]
    NotBijective(String),
    #[error("link image of {0} is not a proper initial segment")]
    ImproperImage(QuadRat),
    #[error("link is not strictly monotone at {0} < {1}")]
    NonMonotoneLink(QuadRat, QuadRat),
    #[error("link is {direction:?} but the scenario declares commute = {declared}")]
    CommuteMismatch { direction: Direction, declared: bool },
    #[error("model is not partner-closed: {side:?}-class {class} has no partner in the model")]
    ModelNotClosed { side: SideName, class: QuadRat },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("density failure: {0}")]
    DensityFailure(String),
    #[error("completion map is not strictly monotone: {0}")]
    NonMonotone(String),
    #[error("scenarios do not share the same p side")]
    SharedSideMismatch,
    #[error("operation needs a {expected:?} link, found {found:?}")]
    WrongKind { expected: LinkKind, found: LinkKind },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

/// Independent random stream for one purpose of one run.
pub(crate) fn stream(seed: u64, purpose: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(purpose);
    rng
}

/// Up to `count` distinct classes of `order`, sorted, drawn from `seed`.
pub fn sample_classes(order: &CodedOrder, count: usize, seed: u64) -> Vec<QuadRat> {
    sample_points(order, count, &mut stream(seed, 70))
}

/// Up to `count` members, sorted and distinct: every member of a small
/// finite order, random members otherwise.
pub(crate) fn sample_points(order: &CodedOrder, count: usize, rng: &mut ChaCha8Rng) -> Vec<QuadRat> {
    use rand::seq::SliceRandom;
    let mut out: Vec<QuadRat> = match order.points() {
        Some(p) if p.len() <= count => p.to_vec(),
        Some(p) => p.choose_multiple(rng, count).cloned().collect(),
        None => {
            let mut seen = std::collections::BTreeSet::new();
            for _ in 0..20 * count {
                if seen.len() == count {
                    break;
                }
                match order.sample_member(rng) {
                    Some(x) => seen.insert(x),
                    None => break,
                };
            }
            seen.into_iter().collect()
        }
    };
    out.sort();
    out.dedup();
    out
}
