//! Back-and-forth construction of (anti-)isomorphisms between countable orders.

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::coded::{Bound, CodedOrder};
use super::quad::QuadRat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsoMode {
    Iso,
    Anti,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Iso,
    AntiIso,
    NotIso,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoVerdict {
    pub verdict: Verdict,
    pub partial_map: Vec<(QuadRat, QuadRat)>,
    pub depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<String>,
}

impl IsoVerdict {
    fn no(reason: String) -> Self {
        Self { verdict: Verdict::NotIso, partial_map: Vec::new(), depth: 0, obstruction: Some(reason) }
    }

    fn unknown(reason: String, partial_map: Vec<(QuadRat, QuadRat)>) -> Self {
        let depth = partial_map.len();
        Self { verdict: Verdict::Unknown, partial_map, depth, obstruction: Some(reason) }
    }
}

pub const DEFAULT_DEPTH: usize = 64;

/// Builds a partial (anti-)isomorphism of `depth` pairs.
///
/// Finite orders are decided by size. Two infinite orders must both be
/// dense; endpoints are matched first and the remaining pairs come from
/// alternating forth and back steps on seeded random members.
pub fn back_and_forth(a: &CodedOrder, b: &CodedOrder, mode: IsoMode, depth: usize, seed: u64) -> IsoVerdict {
    let success = match mode {
        IsoMode::Iso => Verdict::Iso,
        IsoMode::Anti => Verdict::AntiIso,
    };
    match (a.len(), b.len()) {
        (Some(n), Some(m)) if n == m => {
            let (pa, pb) = (a.points().unwrap_or(&[]), b.points().unwrap_or(&[]));
            let map: Vec<_> = match mode {
                IsoMode::Iso => pa.iter().cloned().zip(pb.iter().cloned()).collect(),
                IsoMode::Anti => pa.iter().cloned().zip(pb.iter().rev().cloned()).collect(),
            };
            return IsoVerdict { verdict: success, depth: map.len(), partial_map: map, obstruction: None };
        }
        (Some(n), Some(m)) => return IsoVerdict::no(format!("cardinality {n} vs {m}")),
        (Some(n), None) => return IsoVerdict::no(format!("finite ({n}) vs infinite")),
        (None, Some(m)) => return IsoVerdict::no(format!("infinite vs finite ({m})")),
        (None, None) => {}
    }
    for (name, o) in [("first", a), ("second", b)] {
        if let Some((x, y)) = o.density_gap() {
            return IsoVerdict::unknown(format!("{name} order is not dense: nothing between {x} and {y}"), Vec::new());
        }
    }

    let (b_low, b_high) = match mode {
        IsoMode::Iso => (b.min(), b.max()),
        IsoMode::Anti => (b.max(), b.min()),
    };
    let mut map: Vec<(QuadRat, QuadRat)> = Vec::new();
    for (end, x, y) in [("minimum", a.min(), b_low), ("maximum", a.max(), b_high)] {
        match (x, y) {
            (Some(x), Some(y)) => map.push((x, y)),
            (None, None) => {}
            (x, _) => {
                let side = if x.is_some() { "has" } else { "lacks" };
                return IsoVerdict::no(format!("first order {side} a {end}, the second does not match"));
            }
        }
    }
    map.sort_by(|p, q| p.0.cmp(&q.0));
    map.dedup();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    let mut forth = true;
    while map.len() < depth {
        attempts += 1;
        if attempts > depth * 50 + 100 {
            return IsoVerdict::unknown("ran out of attempts to extend the map".into(), map);
        }
        let step = if forth { extend(&map, a, b, mode, &mut rng, false) } else { extend(&map, b, a, mode, &mut rng, true) };
        forth = !forth;
        match step {
            Extend::Pair(p) => {
                let at = map.partition_point(|q| q.0 < p.0);
                map.insert(at, p);
            }
            Extend::Skip => {}
            Extend::Stuck(reason) => return IsoVerdict::unknown(reason, map),
        }
    }

    for i in 0..map.len() {
        for j in i + 1..map.len() {
            let expected = match mode {
                IsoMode::Iso => map[i].0.cmp(&map[j].0),
                IsoMode::Anti => map[j].0.cmp(&map[i].0),
            };
            if map[i].1.cmp(&map[j].1) != expected {
                return IsoVerdict::unknown(format!("pairs {i} and {j} disagree on order"), map);
            }
        }
    }
    IsoVerdict { verdict: success, depth: map.len(), partial_map: map, obstruction: None }
}

enum Extend {
    Pair((QuadRat, QuadRat)),
    Skip,
    Stuck(String),
}

/// Picks a fresh point of `src` and finds a partner in `dst` in the right gap
/// of the current map. `back` means `src` is the codomain.
fn extend(map: &[(QuadRat, QuadRat)], src: &CodedOrder, dst: &CodedOrder, mode: IsoMode, rng: &mut ChaCha8Rng, back: bool) -> Extend {
    let Some(x) = src.sample_member(rng) else {
        return Extend::Stuck("order has no members".into());
    };
    let pairs: Vec<(&QuadRat, &QuadRat)> =
        map.iter().map(|(p, q)| if back { (q, p) } else { (p, q) }).collect();
    if pairs.iter().any(|(s, _)| **s == x) {
        return Extend::Skip;
    }
    let below = pairs.iter().filter(|(s, _)| **s < x).max_by(|u, v| u.0.cmp(v.0)).map(|p| p.1.clone());
    let above = pairs.iter().filter(|(s, _)| **s > x).min_by(|u, v| u.0.cmp(v.0)).map(|p| p.1.clone());
    let (lo, hi) = match mode {
        IsoMode::Iso => (below, above),
        IsoMode::Anti => (above, below),
    };
    let lo = lo.map_or(Bound::NegInf, Bound::Open);
    let hi = hi.map_or(Bound::PosInf, Bound::Open);
    match dst.any_member_in(&lo, &hi) {
        Some(y) if back => Extend::Pair((y, x)),
        Some(y) => Extend::Pair((x, y)),
        None => Extend::Stuck(format!("no partner for {x} between {lo:?} and {hi:?}")),
    }
}

/// Compares two maps' agreement on order, used by tests and callers that
/// combine verdicts.
pub fn preserves(map: &[(QuadRat, QuadRat)], mode: IsoMode) -> bool {
    map.iter().enumerate().all(|(i, p)| {
        map[i + 1..].iter().all(|q| {
            let want = match mode {
                IsoMode::Iso => p.0.cmp(&q.0),
                IsoMode::Anti => q.0.cmp(&p.0),
            };
            want != Ordering::Equal && p.1.cmp(&q.1) == want
        })
    })
}
