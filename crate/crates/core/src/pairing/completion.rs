use std::cmp::Ordering;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::direction::{direction, proper};
use super::scenario::{AffineMap, Link, Scenario};
use super::{sample_points, stream, Direction, Law, LinkKind, PairingError, DEFAULT_POINT_SAMPLES};
use crate::order::{
    cut_compare, cut_difference, cut_sup, in_completion, normalize, Bound, CodedOrder, Cut, QuadRat, Sup, Verdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompletionShape {
    /// Only the empty segment: the completion of an empty or finite order.
    OneElement,
    Dense,
}

impl CompletionShape {
    pub fn of(order: &CodedOrder) -> Self {
        if order.len().is_some() {
            CompletionShape::OneElement
        } else {
            CompletionShape::Dense
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionReport {
    /// `union` for `𝒟(F)`, `intersection` for `𝒟*(F)`, `trivial` for one-element completions.
    pub construction: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    pub verdict: Verdict,
    pub p_completion: CompletionShape,
    pub q_completion: CompletionShape,
    pub cut_pairs: usize,
    pub seed: u64,
    pub laws: Vec<Law>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CompletionReport {
    pub fn passes(&self) -> bool {
        self.laws.iter().all(|l| !l.failed()) && matches!(self.verdict, Verdict::Iso | Verdict::AntiIso)
    }
}

/// A random element of the completion: `∅`, the whole order, or the segment
/// below a random position, with any maximum removed.
pub fn sample_completion_cut<R: Rng + ?Sized>(order: &CodedOrder, rng: &mut R) -> Cut {
    let raw = match rng.gen_range(0..20) {
        0 => Cut::Empty,
        1 => Cut::PlusInfinity,
        _ => match order.sample_position(rng) {
            Some(x) => Cut::below(x),
            None => Cut::Empty,
        },
    };
    normalize(order, &raw)
}

/// `𝒟(F)(I) = ⋃_{x∈I} F(x)` for increasing rules and `𝒟*(F)(I) = ⋂_{x∈I} F(x)`
/// for decreasing ones, both read off the supremum of `I`. Returns the raw
/// segment and the completion element obtained by dropping a maximum.
pub fn image_of_cut(m: &AffineMap, p: &CodedOrder, q: &CodedOrder, i: &Cut) -> (Cut, Cut) {
    let raw = match (cut_sup(p, i), m.increasing()) {
        (Sup::Empty, true) | (Sup::PosInf, false) => Cut::Empty,
        (Sup::Empty, false) | (Sup::PosInf, true) => Cut::PlusInfinity,
        (Sup::Value(v), true) => Cut::below(m.apply(&v)),
        (Sup::Value(v), false) => Cut::above(m.apply(&v)),
    };
    let norm = normalize(q, &raw);
    (raw, norm)
}

fn draw_pair<R: Rng + ?Sized>(order: &CodedOrder, rng: &mut R) -> Option<(Cut, Cut)> {
    for _ in 0..32 {
        let (a, b) = (sample_completion_cut(order, rng), sample_completion_cut(order, rng));
        match cut_compare(order, &a, &b) {
            Ordering::Less => return Some((a, b)),
            Ordering::Greater => return Some((b, a)),
            Ordering::Equal => {}
        }
    }
    None
}

/// Checks the closed form against the definition: every `F(x)` with `x ∈ I`
/// sits inside the union (resp. contains the intersection), and the points
/// near the boundary are accounted for by some `x ∈ I`.
fn lub_check(m: &AffineMap, p: &CodedOrder, q: &CodedOrder, i: &Cut, raw: &Cut, rng: &mut ChaCha8Rng) -> Option<String> {
    let inc = m.increasing();
    if cut_difference(p, &Cut::Empty, i).is_none() {
        let expect = if inc { Cut::Empty } else { Cut::PlusInfinity };
        return (cut_compare(q, raw, &expect) != Ordering::Equal)
            .then(|| format!("empty segment maps to {raw}, expected {expect}"));
    }
    let mut xs: Vec<QuadRat> = p.any_member_in_rev(&Bound::NegInf, &i.upper()).into_iter().collect();
    xs.extend(sample_points(p, 4, rng).into_iter().filter(|x| i.contains(p, x)));
    for x in &xs {
        let fx = Cut::below(m.apply(x));
        let bad = if inc { cut_compare(q, &fx, raw) == Ordering::Greater } else { cut_compare(q, raw, &fx) == Ordering::Greater };
        if bad {
            return Some(format!("F({x}) = {fx} is not {} {raw}", if inc { "inside" } else { "around" }));
        }
    }
    if inc {
        if let Some(y) = q.any_member_in_rev(&Bound::NegInf, &raw.upper()) {
            if p.any_member_in(&Bound::Open(m.invert(&y)), &i.upper()).is_none() {
                return Some(format!("{y} lies in the union but in no F(x) for x in {i}"));
            }
        }
    } else if let Some(y) = q.any_member_in(&raw.complement_lower(), &Bound::PosInf) {
        if p.any_member_in(&Bound::Closed(m.invert(&y)), &i.upper()).is_none() {
            return Some(format!("{y} is outside the intersection but inside every F(x) for x in {i}"));
        }
    }
    None
}

/// Verifies that `𝒟(F)` (increasing links) or `𝒟*(F)` (decreasing links)
/// is a strictly monotone (antitone) injection with dense image, on
/// `cut_pairs` sampled pairs of completion elements.
pub fn completion_maps(scn: &Scenario, cut_pairs: usize, seed: u64) -> Result<CompletionReport, PairingError> {
    let (p, q) = (&scn.lin_p.points, &scn.lin_q.points);
    let (ps, qs) = (CompletionShape::of(p), CompletionShape::of(q));
    if ps == CompletionShape::OneElement || qs == CompletionShape::OneElement {
        let (verdict, note) = if ps == qs {
            (Verdict::Iso, "both completions are one-element orders")
        } else {
            (Verdict::NotIso, "a one-element completion faces an infinite one")
        };
        return Ok(CompletionReport {
            construction: "trivial".into(),
            direction: None,
            verdict,
            p_completion: ps,
            q_completion: qs,
            cut_pairs: 0,
            seed,
            laws: Vec::new(),
            note: Some(note.into()),
        });
    }
    let m = match &scn.link {
        Link::Unbounded(m) => m,
        Link::Bounded(_) => return Err(PairingError::WrongKind { expected: LinkKind::Unbounded, found: LinkKind::Bounded }),
        Link::Explicit(_) => return Err(PairingError::Unsupported("completion maps need an affine cut rule".into())),
    };
    for (name, o) in [("p", p), ("q", q)] {
        if let Some((x, y)) = o.density_gap() {
            return Err(PairingError::DensityFailure(format!("{name} has no class between {x} and {y}")));
        }
    }
    let dir = direction(scn, DEFAULT_POINT_SAMPLES.min(cut_pairs.max(2)), seed)?.direction;
    let want = if dir == Direction::Increasing { Ordering::Less } else { Ordering::Greater };

    let mut improper = None;
    for a in sample_points(p, DEFAULT_POINT_SAMPLES.min(cut_pairs.max(1)), &mut stream(seed, 40)) {
        if !proper(q, &Cut::below(m.apply(&a))) {
            improper = Some(format!("F({a}) is not a proper segment without maximum"));
            break;
        }
    }

    let mut rng = stream(seed, 41);
    let mut checked = 0;
    let mut lub_violation = None;
    let mut outside = None;
    for _ in 0..cut_pairs {
        let Some((i1, i2)) = draw_pair(p, &mut rng) else { break };
        let (raw1, j1) = image_of_cut(m, p, q, &i1);
        let (_, j2) = image_of_cut(m, p, q, &i2);
        match cut_compare(q, &j1, &j2) {
            Ordering::Equal => {
                return Err(PairingError::NonMonotone(format!("{i1} < {i2} but both map to {j1}")));
            }
            o if o != want => {
                return Err(PairingError::NonMonotone(format!("{i1} < {i2} but images {j1}, {j2} are in the wrong order")));
            }
            _ => {}
        }
        if outside.is_none() && !(in_completion(q, &j1) && in_completion(q, &j2)) {
            outside = Some(format!("image of {i1} or {i2} has a maximum"));
        }
        if lub_violation.is_none() {
            lub_violation = lub_check(m, p, q, &i1, &raw1, &mut rng);
        }
        checked += 1;
    }

    let mut rng = stream(seed, 42);
    for _ in 0..cut_pairs {
        let Some((c1, c2)) = draw_pair(q, &mut rng) else { break };
        let y1 = cut_difference(q, &c1, &c2).expect("c1 < c2");
        let Some(y2) = q.any_member_in(&Bound::Open(y1.clone()), &c2.upper()) else {
            return Err(PairingError::DensityFailure(format!("{c2} has maximum {y1}")));
        };
        let (g1, g2) = (m.invert(&y1), m.invert(&y2));
        let (lo, hi) = if dir == Direction::Increasing {
            (Bound::Open(g1), Bound::Closed(g2))
        } else {
            (Bound::Closed(g2), Bound::Open(g1))
        };
        let hit = [p.any_member_in(&lo, &hi), p.any_member_in_rev(&lo, &hi)].into_iter().flatten().find(|a| {
            let fa = normalize(q, &Cut::below(m.apply(a)));
            cut_compare(q, &c1, &fa) == Ordering::Less && cut_compare(q, &fa, &c2) == Ordering::Less
        });
        if hit.is_none() {
            return Err(PairingError::DensityFailure(format!("no class of p maps strictly between {c1} and {c2}")));
        }
    }

    let laws = vec![
        Law::pass(if dir == Direction::Increasing { "strictly_monotone" } else { "strictly_antitone" }),
        Law::pass("injective"),
        Law::pass("dense_image"),
        Law::from_first("proper_images", improper),
        Law::from_first("images_in_completion", outside),
        Law::from_first("sup_cross_check", lub_violation),
    ];
    Ok(CompletionReport {
        construction: if dir == Direction::Increasing { "union" } else { "intersection" }.into(),
        direction: Some(dir),
        verdict: if dir == Direction::Increasing { Verdict::Iso } else { Verdict::AntiIso },
        p_completion: ps,
        q_completion: qs,
        cut_pairs: checked,
        seed,
        laws,
        note: None,
    })
}
