//! Initial segments of a [`CodedOrder`] and the Dedekind completion.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::coded::{Bound, CodedOrder, Sup};
use super::quad::QuadRat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `{ x | x < point }`
    Below,
    /// `{ x | x ≤ point }`
    Above,
}

/// An initial segment, described by where it stops. `Empty` and
/// `MinusInfinity` both denote the empty segment; `PlusInfinity` is the whole order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "cut", rename_all = "snake_case")]
pub enum Cut {
    Empty,
    MinusInfinity,
    At { point: QuadRat, side: Side },
    PlusInfinity,
}

impl Cut {
    pub fn below(point: QuadRat) -> Self {
        Cut::At { point, side: Side::Below }
    }

    pub fn above(point: QuadRat) -> Self {
        Cut::At { point, side: Side::Above }
    }

    /// Upper bound of the segment.
    pub fn upper(&self) -> Bound {
        match self {
            Cut::Empty | Cut::MinusInfinity => Bound::NegInf,
            Cut::At { point, side: Side::Below } => Bound::Open(point.clone()),
            Cut::At { point, side: Side::Above } => Bound::Closed(point.clone()),
            Cut::PlusInfinity => Bound::PosInf,
        }
    }

    /// Lower bound of the complement.
    pub fn complement_lower(&self) -> Bound {
        match self {
            Cut::Empty | Cut::MinusInfinity => Bound::NegInf,
            Cut::At { point, side: Side::Below } => Bound::Closed(point.clone()),
            Cut::At { point, side: Side::Above } => Bound::Open(point.clone()),
            Cut::PlusInfinity => Bound::PosInf,
        }
    }

    pub fn contains(&self, order: &CodedOrder, x: &QuadRat) -> bool {
        order.member(x) && self.upper().admits_below(x)
    }

    fn mark(&self) -> (u8, Option<(&QuadRat, Side)>) {
        match self {
            Cut::Empty | Cut::MinusInfinity => (0, None),
            Cut::At { point, side } => (1, Some((point, *side))),
            Cut::PlusInfinity => (2, None),
        }
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cut::Empty => f.write_str("∅"),
            Cut::MinusInfinity => f.write_str("-∞"),
            Cut::At { point, side: Side::Below } => write!(f, "(< {point})"),
            Cut::At { point, side: Side::Above } => write!(f, "(≤ {point})"),
            Cut::PlusInfinity => f.write_str("+∞"),
        }
    }
}

/// The segment `{ x | x < r }`, which is how a point embeds in the completion.
pub fn cut_at(_order: &CodedOrder, r: &QuadRat) -> Cut {
    Cut::below(r.clone())
}

/// Compares two segments as sets of members of `order`.
pub fn cut_compare(order: &CodedOrder, c1: &Cut, c2: &Cut) -> Ordering {
    let by_mark = c1.mark().cmp(&c2.mark());
    let (lo, hi) = match by_mark {
        Ordering::Equal => return Ordering::Equal,
        Ordering::Less => (c1, c2),
        Ordering::Greater => (c2, c1),
    };
    match order.any_member_in(&lo.complement_lower(), &hi.upper()) {
        Some(_) => by_mark,
        None => Ordering::Equal,
    }
}

/// A member in the larger segment and outside the smaller, if they differ.
pub fn cut_difference(order: &CodedOrder, small: &Cut, large: &Cut) -> Option<QuadRat> {
    order.any_member_in(&small.complement_lower(), &large.upper())
}

/// Largest member of the segment.
pub fn cut_max(order: &CodedOrder, c: &Cut) -> Option<QuadRat> {
    order.max_below(&c.upper())
}

pub fn cut_has_max(order: &CodedOrder, c: &Cut) -> bool {
    cut_max(order, c).is_some()
}

pub fn cut_sup(order: &CodedOrder, c: &Cut) -> Sup {
    order.sup_below(&c.upper())
}

/// The largest segment without a maximum inside `c`: drops a maximum if
/// there is one. Dense orders need one step; finite ones collapse to `∅`.
pub fn normalize(order: &CodedOrder, c: &Cut) -> Cut {
    match cut_max(order, c) {
        None => c.clone(),
        Some(_) if order.is_finite() => Cut::Empty,
        Some(m) => {
            let next = Cut::below(m);
            match cut_max(order, &next) {
                None => next,
                Some(_) => Cut::Empty,
            }
        }
    }
}

/// Elements of the Dedekind completion are the segments without a maximum.
pub fn in_completion(order: &CodedOrder, c: &Cut) -> bool {
    !cut_has_max(order, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::coded::{Interval, Predicate};

    #[test]
    fn segments_in_a_gap_are_equal() {
        let o = CodedOrder::coded(
            Predicate::Rational,
            vec![Interval::open(QuadRat::int(0), QuadRat::int(1)), Interval::open(QuadRat::int(2), QuadRat::int(3))],
        )
        .unwrap();
        let a = Cut::below(QuadRat::int(1));
        let b = Cut::above(QuadRat::frac(3, 2));
        assert_eq!(cut_compare(&o, &a, &b), Ordering::Equal);
        assert_eq!(cut_compare(&o, &a, &Cut::below(QuadRat::frac(5, 2))), Ordering::Less);
        assert_eq!(cut_compare(&o, &Cut::Empty, &Cut::below(QuadRat::int(0))), Ordering::Equal);
    }

    #[test]
    fn maximum_depends_on_membership() {
        let q = CodedOrder::rationals();
        let irr = CodedOrder::irrationals();
        let c = Cut::above(QuadRat::frac(1, 2));
        assert!(cut_has_max(&q, &c));
        assert!(!cut_has_max(&irr, &c));
        assert_eq!(normalize(&q, &c), Cut::below(QuadRat::frac(1, 2)));
        assert!(in_completion(&irr, &Cut::above(QuadRat::frac(1, 2))));
    }

    #[test]
    fn finite_segments_normalize_to_empty() {
        let o = CodedOrder::finite(vec![QuadRat::int(0), QuadRat::int(1)]);
        assert_eq!(normalize(&o, &Cut::PlusInfinity), Cut::Empty);
        assert!(in_completion(&o, &Cut::Empty));
    }
}
