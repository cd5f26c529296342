use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::deps::{dual_dep_set, DSet};
use super::scenario::Scenario;
use super::{sample_points, stream, PairingError};
use crate::order::{cut_compare, cut_difference, CodedOrder, Cut, QuadRat};

/// `D_p(smaller) ⊊ D_p(larger)`, with `a` in the difference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionWitness {
    pub smaller: QuadRat,
    pub larger: QuadRat,
    pub a: QuadRat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WeightOneOutcome {
    /// `forward`: `b ∈ lin_q`, `c ∈ lin_r` with `D_p(b) ⊊ D_p(c)`;
    /// `backward`: `c′ ∈ lin_r`, `b′ ∈ lin_q` with `D_p(c′) ⊊ D_p(b′)`.
    Found { forward: InclusionWitness, backward: InclusionWitness },
    NotFound { reason: String },
}

impl WeightOneOutcome {
    pub fn found(&self) -> bool {
        matches!(self, WeightOneOutcome::Found { .. })
    }
}

/// Proper inclusion `d1 ⊊ d2` over `p`, with a member of the difference.
fn strictly_inside(p: &CodedOrder, d1: &DSet, d2: &DSet) -> Option<QuadRat> {
    match (d1, d2) {
        (DSet::Segment { cut: c1 }, DSet::Segment { cut: c2 }) => {
            (cut_compare(p, c1, c2) == Ordering::Less).then(|| cut_difference(p, c1, c2)).flatten()
        }
        _ => {
            let (s1, s2) = (materialize(p, d1)?, materialize(p, d2)?);
            if s1.iter().all(|x| s2.contains(x)) {
                s2.into_iter().find(|x| !s1.contains(x))
            } else {
                None
            }
        }
    }
}

fn materialize(p: &CodedOrder, d: &DSet) -> Option<Vec<QuadRat>> {
    match d {
        DSet::Points { points } => Some(points.iter().filter(|x| p.member(x)).cloned().collect()),
        DSet::Segment { cut } => match p.points() {
            Some(pts) => Some(pts.iter().filter(|x| cut.contains(p, x)).cloned().collect()),
            None if cut_difference(p, &Cut::Empty, cut).is_none() => Some(Vec::new()),
            None => None,
        },
    }
}

const POOL: usize = 64;

/// Looks for classes `b` of `q` and `c` of `r` whose dependency sets on the
/// shared side are properly included in each other in both directions.
pub fn weight_one(pq: &Scenario, pr: &Scenario, seed: u64) -> Result<WeightOneOutcome, PairingError> {
    if pq.lin_p != pr.lin_p {
        return Err(PairingError::SharedSideMismatch);
    }
    let p = &pq.lin_p.points;
    let bs = sample_points(&pq.lin_q.points, POOL, &mut stream(seed, 50));
    let cs = sample_points(&pr.lin_q.points, POOL, &mut stream(seed, 51));
    if bs.is_empty() || cs.is_empty() {
        return Ok(WeightOneOutcome::NotFound { reason: "one of the linked orders has no classes".into() });
    }
    let db: Vec<_> = bs.iter().map(|b| dual_dep_set(pq, b)).collect::<Result<_, _>>()?;
    let dc: Vec<_> = cs.iter().map(|c| dual_dep_set(pr, c)).collect::<Result<_, _>>()?;

    let mut forward = None;
    let mut backward = None;
    for (b, d1) in bs.iter().zip(&db) {
        for (c, d2) in cs.iter().zip(&dc) {
            if forward.is_none() {
                if let Some(a) = strictly_inside(p, d1, d2) {
                    forward = Some(InclusionWitness { smaller: b.clone(), larger: c.clone(), a });
                }
            }
            if backward.is_none() {
                if let Some(a) = strictly_inside(p, d2, d1) {
                    backward = Some(InclusionWitness { smaller: c.clone(), larger: b.clone(), a });
                }
            }
        }
        if forward.is_some() && backward.is_some() {
            break;
        }
    }
    let pool = format!("{}×{} sampled classes", bs.len(), cs.len());
    Ok(match (forward, backward) {
        (Some(forward), Some(backward)) => WeightOneOutcome::Found { forward, backward },
        (None, _) => WeightOneOutcome::NotFound { reason: format!("no D_p(b) ⊊ D_p(c) among {pool}") },
        (_, None) => WeightOneOutcome::NotFound { reason: format!("no D_p(c) ⊊ D_p(b) among {pool}") },
    })
}
