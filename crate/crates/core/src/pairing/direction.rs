use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::scenario::{BoundedLink, Link, LinkImage, Scenario};
use super::{sample_points, stream, Direction, LinkKind, PairingError};
use crate::order::{cut_compare, cut_difference, cut_max, Bound, CodedOrder, Cut};

/// Bounded when every image is a single class, unbounded when every image
/// is a proper cut of the opposite order.
pub fn classify(scn: &Scenario, samples: usize, seed: u64) -> Result<LinkKind, PairingError> {
    scn.validate()?;
    let (p, q) = (&scn.lin_p.points, &scn.lin_q.points);
    match &scn.link {
        Link::Explicit(entries) => {
            let class_at = entries.iter().find(|(_, i)| matches!(i, LinkImage::Class { .. }));
            let cut_at = entries.iter().find(|(_, i)| !matches!(i, LinkImage::Class { .. }));
            match (class_at, cut_at) {
                (Some((c, _)), Some((u, _))) => {
                    Err(PairingError::MixedLink { class_at: c.clone(), cut_at: u.clone() })
                }
                (Some(_), None) => {
                    let pairs: Vec<_> = entries
                        .iter()
                        .map(|(a, i)| match i {
                            LinkImage::Class { point } => (a.clone(), point.clone()),
                            _ => unreachable!("all images are classes"),
                        })
                        .collect();
                    check_table(p, q, &pairs)?;
                    Ok(LinkKind::Bounded)
                }
                (None, _) => Ok(LinkKind::Unbounded),
            }
        }
        Link::Bounded(BoundedLink::Pairs(pairs)) => {
            check_table(p, q, pairs)?;
            Ok(LinkKind::Bounded)
        }
        Link::Bounded(BoundedLink::Rule(m)) => {
            for a in sample_points(p, samples, &mut stream(seed, 10)) {
                let b = m.apply(&a);
                if !q.member(&b) {
                    return Err(PairingError::NotBijective(format!("F({a}) = {b} is not a class of q")));
                }
            }
            for b in sample_points(q, samples, &mut stream(seed, 11)) {
                let a = m.invert(&b);
                if !p.member(&a) || m.apply(&a) != b {
                    return Err(PairingError::NotBijective(format!("G({b}) = {a} is not a class of p")));
                }
            }
            Ok(LinkKind::Bounded)
        }
        Link::Unbounded(m) => {
            for a in sample_points(p, samples, &mut stream(seed, 10)) {
                let cut = Cut::below(m.apply(&a));
                if !proper(q, &cut) {
                    return Err(PairingError::ImproperImage(a));
                }
            }
            Ok(LinkKind::Unbounded)
        }
    }
}

/// Nonempty, not everything, no maximum.
pub(crate) fn proper(q: &CodedOrder, cut: &Cut) -> bool {
    cut_difference(q, &Cut::Empty, cut).is_some()
        && q.any_member_in(&cut.complement_lower(), &Bound::PosInf).is_some()
        && cut_max(q, cut).is_none()
}

fn check_table(p: &CodedOrder, q: &CodedOrder, pairs: &[(crate::order::QuadRat, crate::order::QuadRat)]) -> Result<(), PairingError> {
    let mut images: Vec<_> = pairs.iter().map(|(_, b)| b).collect();
    images.sort();
    if let Some(w) = images.windows(2).find(|w| w[0] == w[1]) {
        return Err(PairingError::NotBijective(format!("{} is hit twice", w[0])));
    }
    for (a, b) in pairs {
        if !p.member(a) {
            return Err(PairingError::PointNotInOrder(a.clone()));
        }
        if !q.member(b) {
            return Err(PairingError::NotBijective(format!("F({a}) = {b} is not a class of q")));
        }
    }
    for (side, order, listed) in [("p", p, pairs.iter().map(|x| &x.0).collect::<Vec<_>>()), ("q", q, images)] {
        if let Some(pts) = order.points() {
            if let Some(x) = pts.iter().find(|x| !listed.contains(x)) {
                return Err(PairingError::NotBijective(format!("{side}-class {x} has no partner")));
            }
        }
    }
    Ok(())
}

/// Order of two images in the opposite order, `None` when incomparable.
pub fn compare_images(q: &CodedOrder, x: &LinkImage, y: &LinkImage) -> Option<Ordering> {
    match (x, y) {
        (LinkImage::Class { point: a }, LinkImage::Class { point: b }) => Some(a.cmp(b)),
        (LinkImage::Cut { cut: a }, LinkImage::Cut { cut: b }) => Some(cut_compare(q, a, b)),
        (LinkImage::Set { points: a }, LinkImage::Set { points: b }) => {
            let a: Vec<_> = a.iter().filter(|x| q.member(x)).collect();
            let b: Vec<_> = b.iter().filter(|x| q.member(x)).collect();
            let sub = a.iter().all(|x| b.contains(x));
            let sup = b.iter().all(|x| a.contains(x));
            match (sub, sup) {
                (true, true) => Some(Ordering::Equal),
                (true, false) => Some(Ordering::Less),
                (false, true) => Some(Ordering::Greater),
                (false, false) => None,
            }
        }
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionReport {
    pub direction: Direction,
    pub commuting: bool,
    pub pairs_checked: usize,
}

/// Whether `F` is strictly increasing or decreasing on sampled pairs, and
/// that this agrees with the declared commutation.
pub fn direction(scn: &Scenario, samples: usize, seed: u64) -> Result<DirectionReport, PairingError> {
    let points = sample_points(&scn.lin_p.points, samples, &mut stream(seed, 20));
    let q = &scn.lin_q.points;
    let mut found: Option<Direction> = None;
    let mut checked = 0;
    let mut prev: Option<(crate::order::QuadRat, LinkImage)> = None;
    for a in points {
        let img = scn.image(&a)?;
        if let Some((pa, pimg)) = &prev {
            checked += 1;
            let d = match compare_images(q, pimg, &img) {
                Some(Ordering::Less) => Direction::Increasing,
                Some(Ordering::Greater) => Direction::Decreasing,
                _ => return Err(PairingError::NonMonotoneLink(pa.clone(), a.clone())),
            };
            if found.is_some_and(|f| f != d) {
                return Err(PairingError::NonMonotoneLink(pa.clone(), a.clone()));
            }
            found = Some(d);
        }
        prev = Some((a, img));
    }
    let direction = found.unwrap_or(match &scn.link {
        Link::Bounded(BoundedLink::Rule(m)) | Link::Unbounded(m) if !m.increasing() => Direction::Decreasing,
        Link::Bounded(BoundedLink::Rule(_)) | Link::Unbounded(_) => Direction::Increasing,
        // Fewer than two classes: nothing to compare, take the declaration.
        _ if scn.declared_commute => Direction::Decreasing,
        _ => Direction::Increasing,
    });
    if direction.commutes() != scn.declared_commute {
        return Err(PairingError::CommuteMismatch { direction, declared: scn.declared_commute });
    }
    Ok(DirectionReport { direction, commuting: direction.commutes(), pairs_checked: checked })
}
