use rand::Rng;
use serde::{Deserialize, Serialize};

use super::scenario::{Link, LinkImage, Scenario};
use super::{sample_points, stream, Law, PairingError};
use crate::order::{Bound, CodedOrder, Cut, QuadRat};

/// A dependency set: either an initial segment or a finite set of classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DSet {
    Segment { cut: Cut },
    Points { points: Vec<QuadRat> },
}

impl DSet {
    pub fn contains(&self, order: &CodedOrder, y: &QuadRat) -> bool {
        order.member(y)
            && match self {
                DSet::Segment { cut } => cut.upper().admits_below(y),
                DSet::Points { points } => points.contains(y),
            }
    }

    /// Members of the opposite order worth probing around this set.
    fn boundary(&self, order: &CodedOrder) -> Vec<QuadRat> {
        match self {
            DSet::Segment { cut } => order
                .any_member_in_rev(&Bound::NegInf, &cut.upper())
                .into_iter()
                .chain(order.any_member_in(&cut.complement_lower(), &Bound::PosInf))
                .collect(),
            DSet::Points { points } => points.iter().filter(|p| order.member(p)).cloned().collect(),
        }
    }
}

/// `D(a)` and its complement `I(a)` in the opposite class order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepSets {
    pub a: QuadRat,
    pub d: DSet,
    /// Members of `D` and `I` when the opposite order is finite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_members: Option<Vec<QuadRat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i_members: Option<Vec<QuadRat>>,
}

impl DepSets {
    fn new(a: QuadRat, d: DSet, order: &CodedOrder) -> Self {
        let (d_members, i_members) = match order.points() {
            Some(p) => {
                let (din, dout): (Vec<_>, Vec<_>) = p.iter().cloned().partition(|y| d.contains(order, y));
                (Some(din), Some(dout))
            }
            None => (None, None),
        };
        Self { a, d, d_members, i_members }
    }

    pub fn d_contains(&self, order: &CodedOrder, y: &QuadRat) -> bool {
        self.d.contains(order, y)
    }

    pub fn i_contains(&self, order: &CodedOrder, y: &QuadRat) -> bool {
        order.member(y) && !self.d.contains(order, y)
    }
}

/// `D_q(a)`: the classes at or below `F(a)` for bounded links, the content
/// of the cut `F(a)` for unbounded ones.
pub fn dep_sets(scn: &Scenario, a: &QuadRat) -> Result<DepSets, PairingError> {
    let d = image_to_dset(&scn.image(a)?);
    Ok(DepSets::new(a.clone(), d, &scn.lin_q.points))
}

fn image_to_dset(img: &LinkImage) -> DSet {
    match img {
        LinkImage::Class { point } => DSet::Segment { cut: Cut::above(point.clone()) },
        LinkImage::Cut { cut } => DSet::Segment { cut: cut.clone() },
        LinkImage::Set { points } => DSet::Points { points: points.clone() },
    }
}

/// `D_p(b)` on the shared p side, for `b` a class of `lin_q`.
///
/// Bounded: the classes at or below `G(b)`. Unbounded: `a ∈ D_p(b)` iff
/// `b ∉ D_q(a)` for increasing links and iff `b ∈ D_q(a)` for decreasing ones.
pub fn dual_dep_set(scn: &Scenario, b: &QuadRat) -> Result<DSet, PairingError> {
    if !scn.lin_q.member(b) {
        return Err(PairingError::PointNotInOrder(b.clone()));
    }
    match &scn.link {
        Link::Bounded(_) => Ok(DSet::Segment { cut: Cut::above(scn.inverse(b)?) }),
        Link::Unbounded(m) => {
            let g = m.invert(b);
            let cut = if m.increasing() { Cut::above(g) } else { Cut::below(g) };
            Ok(DSet::Segment { cut })
        }
        Link::Explicit(entries) => {
            if entries.iter().all(|(_, img)| matches!(img, LinkImage::Class { .. })) {
                return Ok(DSet::Segment { cut: Cut::above(scn.inverse(b)?) });
            }
            let mut points = Vec::new();
            for (a, img) in entries {
                let in_dq = image_to_dset(img).contains(&scn.lin_q.points, b);
                if in_dq == scn.declared_commute && scn.lin_p.member(a) {
                    points.push(a.clone());
                }
            }
            points.sort();
            Ok(DSet::Points { points })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepLawReport {
    pub samples: usize,
    pub seed: u64,
    pub laws: Vec<Law>,
}

impl DepLawReport {
    pub fn passes(&self) -> bool {
        self.laws.iter().all(|l| !l.failed())
    }
}

const GLOBAL_PROBES: usize = 48;

/// Samples class points of `lin_p` and checks, against probes of `lin_q`,
/// that each `D` is downward closed and convex with `D < I`, that any two
/// `D`-sets are comparable under inclusion and, with a member view, that
/// each `D` is a union of whole windows.
pub fn verify_dep_laws(scn: &Scenario, samples: usize, seed: u64) -> Result<DepLawReport, PairingError> {
    let q = &scn.lin_q.points;
    let points = sample_points(&scn.lin_p.points, samples, &mut stream(seed, 1));
    let global = sample_points(q, GLOBAL_PROBES, &mut stream(seed, 2));
    let mut sets = Vec::with_capacity(points.len());
    for a in &points {
        sets.push((a.clone(), image_to_dset(&scn.image(a)?)));
    }

    let probes_for = |d: &DSet| {
        let mut v = global.clone();
        v.extend(d.boundary(q));
        v.sort();
        v.dedup();
        v
    };

    let mut downward = None;
    let mut convex = None;
    let mut below = None;
    for (a, d) in &sets {
        let probes = probes_for(d);
        let mem: Vec<bool> = probes.iter().map(|y| d.contains(q, y)).collect();
        if downward.is_none() {
            if let Some(j) = (0..mem.len()).find(|&j| mem[j] && mem[..j].iter().any(|m| !m)) {
                let i = mem[..j].iter().position(|m| !m).expect("found above");
                downward = Some(format!("a = {a}: {} ∈ D but smaller {} ∉ D", probes[j], probes[i]));
            }
        }
        if convex.is_none() {
            let first_in = mem.iter().position(|&m| m);
            let last_in = mem.iter().rposition(|&m| m);
            if let (Some(f), Some(l)) = (first_in, last_in) {
                if let Some(g) = (f..l).find(|&k| !mem[k]) {
                    convex = Some(format!("a = {a}: {} < {} < {} with the middle outside D", probes[f], probes[g], probes[l]));
                }
            }
        }
        if below.is_none() {
            let max_d = probes.iter().zip(&mem).filter(|(_, &m)| m).map(|(y, _)| y).max();
            let min_i = probes.iter().zip(&mem).filter(|(_, &m)| !m).map(|(y, _)| y).min();
            if let (Some(x), Some(y)) = (max_d, min_i) {
                if x > y {
                    below = Some(format!("a = {a}: {x} ∈ D is above {y} ∈ I"));
                }
            }
        }
    }

    let mut comparable = None;
    let mut rng = stream(seed, 3);
    let mut pairs: Vec<(usize, usize)> = (1..sets.len()).map(|i| (i - 1, i)).collect();
    if sets.len() > 2 {
        pairs.extend((0..samples).map(|_| (rng.gen_range(0..sets.len()), rng.gen_range(0..sets.len()))));
    }
    for (i, j) in pairs {
        let ((a, d1), (b, d2)) = (&sets[i], &sets[j]);
        let mut probes = probes_for(d1);
        probes.extend(d2.boundary(q));
        let only1 = probes.iter().find(|y| d1.contains(q, y) && !d2.contains(q, y));
        let only2 = probes.iter().find(|y| d2.contains(q, y) && !d1.contains(q, y));
        if let (Some(y1), Some(y2)) = (only1, only2) {
            comparable = Some(format!("D({a}) ∋ {y1} ∉ D({b}) and D({b}) ∋ {y2} ∉ D({a})"));
            break;
        }
    }

    let e_closed = match (scn.lin_p.member_view, scn.lin_q.member_view) {
        (None, None) => Law::not_applicable("e_closed", "no member view"),
        (pv, qv) => {
            let pw = pv.map_or(1, |v| v.window);
            let qw = qv.map_or(1, |v| v.window);
            let mut violation = None;
            'outer: for (a, d) in &sets {
                for y in probes_for(d) {
                    // Element-level membership of (y, j) for the elements (a, i).
                    let row: Vec<bool> = (0..pw)
                        .flat_map(|_| (0..qw).map(|_| d.contains(q, &y)))
                        .collect();
                    if row.iter().any(|&m| m != row[0]) {
                        violation = Some(format!("window of class {y} is split by D({a})"));
                        break 'outer;
                    }
                }
            }
            Law::from_first("e_closed", violation)
        }
    };

    Ok(DepLawReport {
        samples: points.len(),
        seed,
        laws: vec![
            Law::from_first("downward_closed", downward),
            Law::from_first("convex", convex),
            Law::from_first("d_below_i", below),
            Law::from_first("inclusion_comparable", comparable),
            e_closed,
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{rat, Predicate};
    use crate::pairing::scenario::{AffineMap, ClassOrder};

    fn ex78_1() -> Scenario {
        Scenario::new(
            ClassOrder::new(CodedOrder::irrationals()),
            ClassOrder::new(CodedOrder::on_line(Predicate::Rational)),
            Link::Unbounded(AffineMap::identity()),
            false,
        )
    }

    #[test]
    fn unbounded_dep_set_is_the_cut() {
        let scn = ex78_1();
        let a = QuadRat::new(rat(1, 1), rat(1, 1));
        let ds = dep_sets(&scn, &a).unwrap();
        let q = &scn.lin_q.points;
        assert!(ds.d_contains(q, &QuadRat::frac(12, 5)));
        assert!(ds.i_contains(q, &QuadRat::frac(5, 2)));
        assert!(dep_sets(&scn, &QuadRat::int(1)).is_err());
    }

    #[test]
    fn empty_opposite_side_gives_empty_sets() {
        let mut scn = ex78_1();
        scn.lin_q = ClassOrder::new(CodedOrder::empty());
        let ds = dep_sets(&scn, &QuadRat::sqrt2()).unwrap();
        assert_eq!(ds.d_members, Some(vec![]));
        assert_eq!(ds.i_members, Some(vec![]));
    }

    #[test]
    fn laws_hold_on_the_rational_cut_link() {
        let r = verify_dep_laws(&ex78_1(), 100, 0).unwrap();
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn non_downward_sets_are_caught() {
        let pts = |v: &[i64]| v.iter().map(|&x| QuadRat::int(x)).collect::<Vec<_>>();
        let scn = Scenario::new(
            ClassOrder::new(CodedOrder::finite(pts(&[0, 1]))),
            ClassOrder::new(CodedOrder::finite(pts(&[0, 1, 2]))),
            Link::Explicit(vec![
                (QuadRat::int(0), LinkImage::Set { points: pts(&[0, 1]) }),
                (QuadRat::int(1), LinkImage::Set { points: pts(&[0, 2]) }),
            ]),
            false,
        );
        let r = verify_dep_laws(&scn, 10, 0).unwrap();
        let failed: Vec<_> = r.laws.iter().filter(|l| l.failed()).map(|l| l.law.as_str()).collect();
        assert!(failed.contains(&"inclusion_comparable"));
        assert!(failed.contains(&"downward_closed"));
    }
}
