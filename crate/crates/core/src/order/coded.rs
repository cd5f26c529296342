//! Countable orders given either as a finite list of points or as a
//! membership predicate restricted to finitely many intervals.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::quad::{rat, QuadRat};
use super::OrderError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Predicate {
    Rational,
    Irrational,
    /// Rationals whose reduced denominator is `r` modulo `k`.
    Color { k: u32, r: u32 },
}

impl Predicate {
    pub fn holds(&self, x: &QuadRat) -> bool {
        match self {
            Predicate::Rational => x.is_rational(),
            Predicate::Irrational => !x.is_rational(),
            Predicate::Color { k, r } => {
                x.as_rational().is_some_and(|q| (q.denom() % BigInt::from(*k)) == BigInt::from(*r))
            }
        }
    }

    /// A member strictly between `lo < hi`. Every predicate here is dense
    /// in the reals, so one always exists.
    pub fn pick_between(&self, lo: &QuadRat, hi: &QuadRat) -> QuadRat {
        debug_assert!(lo < hi);
        match self {
            Predicate::Rational => QuadRat::rational(simplest_between(lo, Some(hi))),
            Predicate::Irrational => {
                let m = QuadRat::rational(simplest_between(lo, Some(hi)));
                let room = (&m - lo).min(hi - &m);
                let mut eps = BigRational::one();
                while QuadRat::new(BigRational::zero(), eps.clone()) >= room {
                    eps /= BigInt::from(2);
                }
                m + QuadRat::new(BigRational::zero(), eps)
            }
            Predicate::Color { k, r } => color_between(*k, *r, lo, hi),
        }
    }
}

/// The rational with the smallest denominator (then numerator) in the open
/// interval `(lo, hi)`, `hi = None` meaning `+∞`. Computed by the usual
/// continued-fraction descent.
pub fn simplest_between(lo: &QuadRat, hi: Option<&QuadRat>) -> BigRational {
    let zero = QuadRat::zero();
    if *lo < zero {
        match hi {
            Some(h) if *h <= zero => {
                let (nl, nh) = (-h, -lo);
                return -simplest_between(&nl, Some(&nh));
            }
            _ => return BigRational::zero(),
        }
    }
    let fl = lo.floor();
    let cand = QuadRat::from_bigint(&fl + 1);
    if hi.is_none_or(|h| cand < *h) {
        return cand.rational_part().clone();
    }
    let h = hi.expect("bounded when no integer fits");
    let base = QuadRat::from_bigint(fl.clone());
    let lower = (h - &base).recip().expect("h > floor(lo)");
    let upper = (lo - &base).recip();
    let y = simplest_between(&lower, upper.as_ref());
    BigRational::from_integer(fl) + y.recip()
}

fn color_between(k: u32, r: u32, lo: &QuadRat, hi: &QuadRat) -> QuadRat {
    let k_big = BigInt::from(k);
    let width = hi - lo;
    let four = QuadRat::int(4);
    let d0: BigInt = (&four * width.recip().expect("nonempty interval")).floor() + 1;
    let shift = (BigInt::from(r) - &d0).mod_floor(&k_big);
    let mut d = &d0 + shift;
    if d.is_zero() {
        d = k_big.clone();
    }
    loop {
        let mut m: BigInt = (lo * &QuadRat::from_bigint(d.clone())).floor() + 1;
        loop {
            let q = BigRational::new(m.clone(), d.clone());
            let x = QuadRat::rational(q);
            if x >= *hi {
                break;
            }
            if m.gcd(&d).is_one() {
                return x;
            }
            m += 1;
        }
        d += &k_big;
    }
}

/// One end of an interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    NegInf,
    PosInf,
    Open(QuadRat),
    Closed(QuadRat),
}

impl Bound {
    pub fn value(&self) -> Option<&QuadRat> {
        match self {
            Bound::Open(q) | Bound::Closed(q) => Some(q),
            _ => None,
        }
    }

    /// `x` satisfies this bound read as a lower bound.
    pub fn admits_above(&self, x: &QuadRat) -> bool {
        match self {
            Bound::NegInf => true,
            Bound::PosInf => false,
            Bound::Open(q) => x > q,
            Bound::Closed(q) => x >= q,
        }
    }

    /// `x` satisfies this bound read as an upper bound.
    pub fn admits_below(&self, x: &QuadRat) -> bool {
        match self {
            Bound::NegInf => false,
            Bound::PosInf => true,
            Bound::Open(q) => x < q,
            Bound::Closed(q) => x <= q,
        }
    }

    /// The more restrictive of two lower bounds.
    pub fn tighter_lower(&self, other: &Bound) -> Bound {
        match (self, other) {
            (Bound::PosInf, _) | (_, Bound::PosInf) => Bound::PosInf,
            (Bound::NegInf, b) | (b, Bound::NegInf) => b.clone(),
            (a, b) => match a.value().cmp(&b.value()) {
                Ordering::Greater => a.clone(),
                Ordering::Less => b.clone(),
                Ordering::Equal if matches!(a, Bound::Open(_)) => a.clone(),
                Ordering::Equal => b.clone(),
            },
        }
    }

    /// The more restrictive of two upper bounds.
    pub fn tighter_upper(&self, other: &Bound) -> Bound {
        match (self, other) {
            (Bound::NegInf, _) | (_, Bound::NegInf) => Bound::NegInf,
            (Bound::PosInf, b) | (b, Bound::PosInf) => b.clone(),
            (a, b) => match a.value().cmp(&b.value()) {
                Ordering::Less => a.clone(),
                Ordering::Greater => b.clone(),
                Ordering::Equal if matches!(a, Bound::Open(_)) => a.clone(),
                Ordering::Equal => b.clone(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    pub fn new(lo: Bound, hi: Bound) -> Self {
        Self { lo, hi }
    }

    pub fn open(lo: QuadRat, hi: QuadRat) -> Self {
        Self::new(Bound::Open(lo), Bound::Open(hi))
    }

    pub fn closed(lo: QuadRat, hi: QuadRat) -> Self {
        Self::new(Bound::Closed(lo), Bound::Closed(hi))
    }

    pub fn line() -> Self {
        Self::new(Bound::NegInf, Bound::PosInf)
    }

    pub fn contains(&self, x: &QuadRat) -> bool {
        self.lo.admits_above(x) && self.hi.admits_below(x)
    }
}

/// A countable linear order of points of `ℚ(√2)` with the order of the reals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CodedRepr", into = "CodedRepr")]
pub enum CodedOrder {
    Finite(Vec<QuadRat>),
    Coded { predicate: Predicate, intervals: Vec<Interval> },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum CodedRepr {
    Finite { points: Vec<QuadRat> },
    Coded { predicate: Predicate, intervals: Vec<Interval> },
}

impl TryFrom<CodedRepr> for CodedOrder {
    type Error = OrderError;

    fn try_from(r: CodedRepr) -> Result<Self, Self::Error> {
        match r {
            CodedRepr::Finite { points } => Ok(CodedOrder::finite(points)),
            CodedRepr::Coded { predicate, intervals } => CodedOrder::coded(predicate, intervals),
        }
    }
}

impl From<CodedOrder> for CodedRepr {
    fn from(o: CodedOrder) -> Self {
        match o {
            CodedOrder::Finite(points) => CodedRepr::Finite { points },
            CodedOrder::Coded { predicate, intervals } => CodedRepr::Coded { predicate, intervals },
        }
    }
}

/// Supremum of a subset of the order, as a point of the extended line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sup {
    Empty,
    Value(QuadRat),
    PosInf,
}

/// Half-width of the window used when sampling unbounded blocks.
const WINDOW: i64 = 16;

impl CodedOrder {
    pub fn finite(mut points: Vec<QuadRat>) -> Self {
        points.sort();
        points.dedup();
        CodedOrder::Finite(points)
    }

    pub fn empty() -> Self {
        CodedOrder::Finite(Vec::new())
    }

    pub fn coded(predicate: Predicate, intervals: Vec<Interval>) -> Result<Self, OrderError> {
        if let Predicate::Color { k, r } = predicate {
            if k == 0 || r >= k {
                return Err(OrderError::Invalid(format!("color class {r} mod {k}")));
            }
        }
        for iv in &intervals {
            if matches!(iv.lo, Bound::PosInf) || matches!(iv.hi, Bound::NegInf) {
                return Err(OrderError::Invalid("interval bound at the wrong infinity".into()));
            }
            if let (Some(l), Some(h)) = (iv.lo.value(), iv.hi.value()) {
                if l >= h {
                    return Err(OrderError::Invalid(format!("interval with lo {l} ≥ hi {h}")));
                }
            }
        }
        for w in intervals.windows(2) {
            let ok = match (&w[0].hi, &w[1].lo) {
                (Bound::Closed(a), Bound::Closed(b)) => a < b,
                (a, b) => match (a.value(), b.value()) {
                    (Some(a), Some(b)) => a <= b,
                    _ => false,
                },
            };
            if !ok {
                return Err(OrderError::Invalid("intervals must be sorted and disjoint".into()));
            }
        }
        Ok(CodedOrder::Coded { predicate, intervals })
    }

    /// The predicate on the whole line.
    pub fn on_line(predicate: Predicate) -> Self {
        CodedOrder::Coded { predicate, intervals: vec![Interval::line()] }
    }

    pub fn rationals() -> Self {
        Self::on_line(Predicate::Rational)
    }

    pub fn irrationals() -> Self {
        Self::on_line(Predicate::Irrational)
    }

    pub fn member(&self, x: &QuadRat) -> bool {
        match self {
            CodedOrder::Finite(p) => p.binary_search(x).is_ok(),
            CodedOrder::Coded { predicate, intervals } => {
                predicate.holds(x) && intervals.iter().any(|iv| iv.contains(x))
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CodedOrder::Finite(_)) || self.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        match self {
            CodedOrder::Finite(p) => p.is_empty(),
            CodedOrder::Coded { intervals, .. } => intervals.is_empty(),
        }
    }

    /// Number of points, `None` when infinite.
    pub fn len(&self) -> Option<usize> {
        match self {
            CodedOrder::Finite(p) => Some(p.len()),
            CodedOrder::Coded { intervals, .. } if intervals.is_empty() => Some(0),
            CodedOrder::Coded { .. } => None,
        }
    }

    pub fn points(&self) -> Option<&[QuadRat]> {
        match self {
            CodedOrder::Finite(p) => Some(p),
            CodedOrder::Coded { .. } => None,
        }
    }

    pub fn min(&self) -> Option<QuadRat> {
        match self {
            CodedOrder::Finite(p) => p.first().cloned(),
            CodedOrder::Coded { predicate, intervals } => match intervals.first().map(|iv| &iv.lo) {
                Some(Bound::Closed(q)) if predicate.holds(q) => Some(q.clone()),
                _ => None,
            },
        }
    }

    pub fn max(&self) -> Option<QuadRat> {
        match self {
            CodedOrder::Finite(p) => p.last().cloned(),
            CodedOrder::Coded { predicate, intervals } => match intervals.last().map(|iv| &iv.hi) {
                Some(Bound::Closed(q)) if predicate.holds(q) => Some(q.clone()),
                _ => None,
            },
        }
    }

    /// Two members with nothing in between, if the order has any.
    pub fn density_gap(&self) -> Option<(QuadRat, QuadRat)> {
        match self {
            CodedOrder::Finite(p) => p.windows(2).next().map(|w| (w[0].clone(), w[1].clone())),
            CodedOrder::Coded { predicate, intervals } => intervals.windows(2).find_map(|w| match (&w[0].hi, &w[1].lo) {
                (Bound::Closed(a), Bound::Closed(b)) if predicate.holds(a) && predicate.holds(b) => {
                    Some((a.clone(), b.clone()))
                }
                _ => None,
            }),
        }
    }

    pub fn is_dense(&self) -> bool {
        self.density_gap().is_none()
    }

    /// Some member `x` with `lo ≺ x ≺ hi`, the bounds read as lower and
    /// upper bounds respectively. Looks in the lowest block first.
    pub fn any_member_in(&self, lo: &Bound, hi: &Bound) -> Option<QuadRat> {
        match self {
            CodedOrder::Finite(p) => p.iter().find(|x| lo.admits_above(x) && hi.admits_below(x)).cloned(),
            CodedOrder::Coded { predicate, intervals } => intervals
                .iter()
                .find_map(|iv| pick_in_range(predicate, &iv.lo.tighter_lower(lo), &iv.hi.tighter_upper(hi))),
        }
    }

    /// Like [`any_member_in`](Self::any_member_in) but looks in the highest block first.
    pub fn any_member_in_rev(&self, lo: &Bound, hi: &Bound) -> Option<QuadRat> {
        match self {
            CodedOrder::Finite(p) => p.iter().rev().find(|x| lo.admits_above(x) && hi.admits_below(x)).cloned(),
            CodedOrder::Coded { predicate, intervals } => intervals
                .iter()
                .rev()
                .find_map(|iv| pick_in_range(predicate, &iv.lo.tighter_lower(lo), &iv.hi.tighter_upper(hi))),
        }
    }

    /// A member strictly between `lo` and `hi`.
    pub fn between(&self, lo: &QuadRat, hi: &QuadRat) -> Result<QuadRat, OrderError> {
        self.any_member_in(&Bound::Open(lo.clone()), &Bound::Open(hi.clone()))
            .ok_or_else(|| OrderError::EmptyGap(lo.clone(), hi.clone()))
    }

    /// Largest member admitted by the upper bound, if there is one.
    pub fn max_below(&self, upper: &Bound) -> Option<QuadRat> {
        match self {
            CodedOrder::Finite(p) => p.iter().rev().find(|x| upper.admits_below(x)).cloned(),
            CodedOrder::Coded { predicate, intervals } => {
                for iv in intervals.iter().rev() {
                    let h = iv.hi.tighter_upper(upper);
                    if pick_in_range(predicate, &iv.lo, &h).is_none() {
                        continue;
                    }
                    return match h {
                        Bound::Closed(v) if predicate.holds(&v) => Some(v),
                        _ => None,
                    };
                }
                None
            }
        }
    }

    /// Supremum of the members admitted by the upper bound.
    pub fn sup_below(&self, upper: &Bound) -> Sup {
        match self {
            CodedOrder::Finite(p) => match p.iter().rev().find(|x| upper.admits_below(x)) {
                Some(x) => Sup::Value(x.clone()),
                None => Sup::Empty,
            },
            CodedOrder::Coded { predicate, intervals } => {
                for iv in intervals.iter().rev() {
                    let h = iv.hi.tighter_upper(upper);
                    if pick_in_range(predicate, &iv.lo, &h).is_none() {
                        continue;
                    }
                    return match h {
                        Bound::PosInf => Sup::PosInf,
                        Bound::Open(v) | Bound::Closed(v) => Sup::Value(v),
                        Bound::NegInf => unreachable!("nonempty range"),
                    };
                }
                Sup::Empty
            }
        }
    }

    /// Infimum of the members admitted by the lower bound: `None` when there
    /// are none, `Some(None)` when it is `-∞`.
    pub fn inf_above(&self, lower: &Bound) -> Option<Option<QuadRat>> {
        match self {
            CodedOrder::Finite(p) => p.iter().find(|x| lower.admits_above(x)).map(|x| Some(x.clone())),
            CodedOrder::Coded { predicate, intervals } => {
                for iv in intervals {
                    let l = iv.lo.tighter_lower(lower);
                    if pick_in_range(predicate, &l, &iv.hi).is_none() {
                        continue;
                    }
                    return Some(l.value().cloned());
                }
                None
            }
        }
    }

    /// Finite bounds covering every block, for sampling.
    pub fn window(&self) -> Option<(QuadRat, QuadRat)> {
        match self {
            CodedOrder::Finite(p) => Some((p.first()?.clone(), p.last()?.clone())),
            CodedOrder::Coded { intervals, .. } => {
                let first = intervals.first()?;
                let last = intervals.last()?;
                let lo = first.lo.value().cloned();
                let hi = last.hi.value().cloned();
                let w = QuadRat::int(WINDOW);
                Some(match (lo, hi) {
                    (Some(l), Some(h)) => (l, h),
                    (Some(l), None) => (l.clone(), l + w),
                    (None, Some(h)) => (&h - &w, h),
                    (None, None) => (-w.clone(), w),
                })
            }
        }
    }

    /// A random member, `None` when empty.
    pub fn sample_member<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<QuadRat> {
        match self {
            CodedOrder::Finite(p) if p.is_empty() => None,
            CodedOrder::Finite(p) => Some(p[rng.gen_range(0..p.len())].clone()),
            CodedOrder::Coded { intervals, .. } if intervals.is_empty() => None,
            CodedOrder::Coded { predicate, intervals } => {
                let iv = &intervals[rng.gen_range(0..intervals.len())];
                let (lo, hi) = block_window(iv);
                // A random point and a gap of random scale above it; the
                // simplest member of that gap varies in complexity with it.
                let a = random_point(&lo, &hi, rng);
                let gap = (&hi - &lo).scale(&rat(1, 1 << rng.gen_range(4..28)));
                let b = &a + &gap;
                let lo_b = iv.lo.tighter_lower(&Bound::Open(a));
                let hi_b = iv.hi.tighter_upper(&Bound::Open(b));
                pick_in_range(predicate, &lo_b, &hi_b)
                    .or_else(|| pick_in_range(predicate, &iv.lo, &iv.hi))
            }
        }
    }

    /// A random point of the window, rational or not, not necessarily a member.
    pub fn sample_position<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<QuadRat> {
        let (lo, hi) = self.window()?;
        let x = random_point(&lo, &hi, rng);
        Some(if rng.gen_bool(0.5) {
            x
        } else {
            let eps = QuadRat::new(BigRational::zero(), rat(1, rng.gen_range(1000..100_000)));
            let y = &x + &eps;
            if y < hi {
                y
            } else {
                x
            }
        })
    }
}

fn block_window(iv: &Interval) -> (QuadRat, QuadRat) {
    let w = QuadRat::int(WINDOW);
    match (iv.lo.value(), iv.hi.value()) {
        (Some(l), Some(h)) => (l.clone(), h.clone()),
        (Some(l), None) => (l.clone(), l + &w),
        (None, Some(h)) => (h - &w, h.clone()),
        (None, None) => (-w.clone(), w),
    }
}

fn random_point<R: Rng + ?Sized>(lo: &QuadRat, hi: &QuadRat, rng: &mut R) -> QuadRat {
    let u = rat(rng.gen_range(0..=1 << 20), 1 << 20);
    lo + &(hi - lo).scale(&u)
}

/// A member in the range described by a lower and an upper bound.
fn pick_in_range(pred: &Predicate, lo: &Bound, hi: &Bound) -> Option<QuadRat> {
    let l = match lo {
        Bound::PosInf => return None,
        b => b.value().cloned(),
    };
    let h = match hi {
        Bound::NegInf => return None,
        b => b.value().cloned(),
    };
    if let (Some(l), Some(h)) = (&l, &h) {
        match l.cmp(h) {
            Ordering::Greater => return None,
            Ordering::Equal => {
                return (matches!(lo, Bound::Closed(_)) && matches!(hi, Bound::Closed(_)) && pred.holds(l))
                    .then(|| l.clone())
            }
            Ordering::Less => {}
        }
    }
    let (l, h) = match (l, h) {
        (Some(l), Some(h)) => (l, h),
        (Some(l), None) => {
            let h = QuadRat::from_bigint(l.floor() + 2);
            (l, h)
        }
        (None, Some(h)) => (QuadRat::from_bigint(h.ceil() - 2), h),
        (None, None) => (QuadRat::int(-1), QuadRat::int(1)),
    };
    Some(pred.pick_between(&l, &h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplest_rational_between_thirds_and_halves() {
        let s = simplest_between(&QuadRat::frac(1, 3), Some(&QuadRat::frac(1, 2)));
        assert_eq!(s, rat(2, 5));
        let s = simplest_between(&QuadRat::frac(-7, 3), Some(&QuadRat::frac(-2, 1)));
        assert_eq!(s, rat(-9, 4));
    }

    #[test]
    fn between_respects_each_predicate() {
        let lo = QuadRat::frac(1, 3);
        let hi = QuadRat::frac(1, 2);
        for pred in [
            Predicate::Rational,
            Predicate::Irrational,
            Predicate::Color { k: 3, r: 1 },
            Predicate::Color { k: 2, r: 0 },
        ] {
            let o = CodedOrder::on_line(pred.clone());
            let x = o.between(&lo, &hi).unwrap();
            assert!(lo < x && x < hi, "{pred:?} gave {x}");
            assert!(o.member(&x), "{pred:?} gave non-member {x}");
        }
    }

    #[test]
    fn empty_gap_is_reported() {
        let o = CodedOrder::finite(vec![QuadRat::int(0), QuadRat::int(1)]);
        assert!(matches!(o.between(&QuadRat::int(0), &QuadRat::int(1)), Err(OrderError::EmptyGap(..))));
        assert_eq!(o.density_gap(), Some((QuadRat::int(0), QuadRat::int(1))));
    }

    #[test]
    fn endpoints_are_exact() {
        let o = CodedOrder::coded(
            Predicate::Rational,
            vec![Interval::new(Bound::Closed(QuadRat::int(0)), Bound::Closed(QuadRat::sqrt2()))],
        )
        .unwrap();
        assert_eq!(o.min(), Some(QuadRat::int(0)));
        assert_eq!(o.max(), None);
    }

    #[test]
    fn overlapping_intervals_are_rejected() {
        let r = CodedOrder::coded(
            Predicate::Rational,
            vec![Interval::open(QuadRat::int(0), QuadRat::int(2)), Interval::open(QuadRat::int(1), QuadRat::int(3))],
        );
        assert!(r.is_err());
    }

    #[test]
    fn samples_are_members() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let o = CodedOrder::coded(
            Predicate::Color { k: 4, r: 3 },
            vec![Interval::open(QuadRat::int(0), QuadRat::int(1)), Interval::new(Bound::Closed(QuadRat::int(2)), Bound::PosInf)],
        )
        .unwrap();
        for _ in 0..200 {
            let x = o.sample_member(&mut rng).unwrap();
            assert!(o.member(&x), "{x}");
        }
    }

    #[test]
    fn json_round_trip() {
        let o = CodedOrder::coded(Predicate::Color { k: 3, r: 2 }, vec![Interval::line()]).unwrap();
        let text = serde_json::to_string(&o).unwrap();
        assert_eq!(serde_json::from_str::<CodedOrder>(&text).unwrap(), o);
    }
}
