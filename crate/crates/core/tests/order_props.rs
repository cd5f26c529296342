use std::cmp::Ordering;

use num_rational::BigRational;
use ordlab::order::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(a: (i64, i64), b: (i64, i64)) -> QuadRat {
    QuadRat::new(rat(a.0, a.1), rat(b.0, b.1))
}

fn p(s: &str) -> QuadRat {
    s.parse().unwrap()
}

fn frac() -> impl Strategy<Value = (i64, i64)> {
    (-60i64..60, 1i64..12)
}

fn quad() -> impl Strategy<Value = QuadRat> {
    (frac(), prop_oneof![Just((0, 1)), frac()]).prop_map(|(a, b)| q(a, b))
}

fn predicate() -> impl Strategy<Value = Predicate> {
    prop_oneof![
        Just(Predicate::Rational),
        Just(Predicate::Irrational),
        (1u32..=7).prop_flat_map(|k| (Just(k), 0..k)).prop_map(|(k, r)| Predicate::Color { k, r }),
    ]
}

#[test]
fn sign_examples() {
    assert_eq!(QuadRat::zero().cmp(&QuadRat::zero()), Ordering::Equal);
    assert_eq!(p("3-2*r2").cmp(&QuadRat::zero()), Ordering::Greater);
    assert_eq!(p("1-1*r2").cmp(&QuadRat::zero()), Ordering::Less);
}

#[test]
fn membership_examples() {
    assert!(Predicate::Irrational.holds(&QuadRat::sqrt2()));
    assert!(Predicate::Color { k: 2, r: 1 }.holds(&QuadRat::frac(1, 3)));
    assert!(!Predicate::Color { k: 2, r: 1 }.holds(&QuadRat::frac(1, 2)));
    assert!(!Predicate::Rational.holds(&QuadRat::sqrt2()));
}

#[test]
fn between_example() {
    let o = CodedOrder::coded(Predicate::Rational, vec![Interval::open(QuadRat::zero(), QuadRat::one())]).unwrap();
    let m = o.between(&QuadRat::frac(1, 3), &QuadRat::frac(1, 2)).unwrap();
    assert!(QuadRat::frac(1, 3) < m && m < QuadRat::frac(1, 2));
    assert!(o.member(&m));
}

#[test]
fn finite_orders_have_gaps() {
    let o = CodedOrder::finite(vec![QuadRat::int(0), QuadRat::int(1)]);
    assert!(o.between(&QuadRat::int(0), &QuadRat::int(1)).is_err());
    assert!(!o.is_dense());
}

#[test]
fn finite_iso_by_size() {
    let chain = |n: i64| CodedOrder::finite((0..n).map(QuadRat::int).collect());
    assert_eq!(back_and_forth(&chain(3), &chain(3), IsoMode::Iso, DEFAULT_DEPTH, 0).verdict, Verdict::Iso);
    assert_eq!(back_and_forth(&chain(3), &chain(3), IsoMode::Anti, DEFAULT_DEPTH, 0).verdict, Verdict::AntiIso);
    assert_eq!(back_and_forth(&chain(3), &chain(4), IsoMode::Iso, DEFAULT_DEPTH, 0).verdict, Verdict::NotIso);
}

#[test]
fn unit_and_double_interval_rationals() {
    let unit = CodedOrder::coded(Predicate::Rational, vec![Interval::open(QuadRat::zero(), QuadRat::one())]).unwrap();
    let double = CodedOrder::coded(Predicate::Rational, vec![Interval::open(QuadRat::zero(), QuadRat::int(2))]).unwrap();
    let v = back_and_forth(&unit, &double, IsoMode::Iso, 64, 0);
    assert_eq!(v.verdict, Verdict::Iso);
    assert_eq!(v.partial_map.len(), 64);
    assert!(preserves(&v.partial_map, IsoMode::Iso));
    for (x, y) in &v.partial_map {
        assert!(unit.member(x) && double.member(y));
    }
    let pairs = &v.partial_map;
    for i in 0..pairs.len() {
        for j in 0..pairs.len() {
            assert_eq!(pairs[i].0.cmp(&pairs[j].0), pairs[i].1.cmp(&pairs[j].1));
        }
    }
}

#[test]
fn endpoint_mismatch_is_not_iso() {
    let open = CodedOrder::coded(Predicate::Rational, vec![Interval::open(QuadRat::zero(), QuadRat::one())]).unwrap();
    let closed = CodedOrder::coded(Predicate::Rational, vec![Interval::closed(QuadRat::zero(), QuadRat::one())]).unwrap();
    assert_eq!(back_and_forth(&open, &closed, IsoMode::Iso, 16, 0).verdict, Verdict::NotIso);
}

#[test]
fn cut_at_irrational() {
    let o = CodedOrder::rationals();
    let c = cut_at(&o, &QuadRat::sqrt2());
    assert_eq!(c, Cut::below(QuadRat::sqrt2()));
    assert!(!cut_has_max(&o, &c));
    let below = QuadRat::frac(7, 5);
    let higher = o.between(&below, &QuadRat::sqrt2()).unwrap();
    assert!(c.contains(&o, &higher) && higher > below);
    assert!(in_completion(&o, &c));
}

#[test]
fn empty_cut_is_least() {
    let o = CodedOrder::rationals();
    for c in [Cut::below(QuadRat::zero()), Cut::above(QuadRat::sqrt2()), Cut::PlusInfinity] {
        assert_eq!(cut_compare(&o, &Cut::Empty, &c), Ordering::Less);
    }
}

#[test]
fn cut_below_a_rational() {
    let o = CodedOrder::rationals();
    let c = cut_at(&o, &QuadRat::frac(1, 2));
    assert!(!c.contains(&o, &QuadRat::frac(1, 2)));
    assert!(c.contains(&o, &QuadRat::frac(1, 3)));
    assert!(!cut_has_max(&o, &c));
    assert!(in_completion(&o, &c));
    let above = Cut::above(QuadRat::frac(1, 2));
    assert_eq!(cut_max(&o, &above), Some(QuadRat::frac(1, 2)));
    assert_eq!(normalize(&o, &above), c);
}

proptest! {
    #[test]
    fn compare_is_a_total_order(x in quad(), y in quad(), z in quad()) {
        prop_assert_eq!(x.cmp(&y), y.cmp(&x).reverse());
        prop_assert_eq!(x.cmp(&y) == Ordering::Equal, x == y);
        if x <= y && y <= z {
            prop_assert!(x <= z);
        }
        prop_assert_eq!((x.clone() - y.clone()).signum(), x.cmp(&y));
    }

    #[test]
    fn compare_agrees_with_floats(x in quad(), y in quad()) {
        let (fx, fy) = (x.to_f64(), y.to_f64());
        if (fx - fy).abs() > 1e-9 {
            prop_assert_eq!(x.cmp(&y), fx.partial_cmp(&fy).unwrap());
        }
    }

    #[test]
    fn parse_display_round_trip(x in quad()) {
        let json = serde_json::to_string(&x).unwrap();
        let back: QuadRat = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn between_stays_in_gap(pred in predicate(), x in quad(), y in quad()) {
        prop_assume!(x != y);
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let o = CodedOrder::on_line(pred.clone());
        let m = o.between(&lo, &hi).unwrap();
        prop_assert!(lo < m && m < hi);
        prop_assert!(pred.holds(&m));
    }

    #[test]
    fn colors_are_dense(k in 1u32..=7, r in 0u32..7, x in quad(), w in 1i64..1000) {
        let r = r % k;
        let pred = Predicate::Color { k, r };
        let lo = x;
        let hi = lo.clone() + QuadRat::rational(BigRational::new(1.into(), (w * w).into()));
        let m = pred.pick_between(&lo, &hi);
        prop_assert!(lo < m && m < hi);
        prop_assert!(pred.holds(&m));
    }

    #[test]
    fn sampled_members_belong(pred in predicate(), lo in quad(), seed in any::<u64>()) {
        let hi = lo.clone() + QuadRat::one();
        let o = CodedOrder::coded(pred, vec![Interval::open(lo, hi)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..8 {
            let m = o.sample_member(&mut rng).unwrap();
            prop_assert!(o.member(&m));
        }
    }

    #[test]
    fn cut_compare_matches_membership(pred in predicate(), a in quad(), b in quad(), sa in any::<bool>(), sb in any::<bool>(), seed in any::<u64>()) {
        let o = CodedOrder::on_line(pred);
        let mk = |p: QuadRat, above: bool| if above { Cut::above(p) } else { Cut::below(p) };
        let (c1, c2) = (mk(a, sa), mk(b, sb));
        let ord = cut_compare(&o, &c1, &c2);
        prop_assert_eq!(ord, cut_compare(&o, &c2, &c1).reverse());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..16 {
            let x = o.sample_member(&mut rng).unwrap();
            match ord {
                Ordering::Less => prop_assert!(!c1.contains(&o, &x) || c2.contains(&o, &x)),
                Ordering::Greater => prop_assert!(!c2.contains(&o, &x) || c1.contains(&o, &x)),
                Ordering::Equal => prop_assert_eq!(c1.contains(&o, &x), c2.contains(&o, &x)),
            }
        }
        match ord {
            Ordering::Less => {
                let d = cut_difference(&o, &c1, &c2).unwrap();
                prop_assert!(c2.contains(&o, &d) && !c1.contains(&o, &d));
            }
            Ordering::Greater => {
                let d = cut_difference(&o, &c2, &c1).unwrap();
                prop_assert!(c1.contains(&o, &d) && !c2.contains(&o, &d));
            }
            Ordering::Equal => prop_assert!(cut_difference(&o, &c1, &c2).is_none()),
        }
    }

    #[test]
    fn normalized_cuts_have_no_max(pred in predicate(), a in quad(), above in any::<bool>()) {
        let o = CodedOrder::on_line(pred);
        let c = if above { Cut::above(a) } else { Cut::below(a) };
        let n = normalize(&o, &c);
        prop_assert!(!cut_has_max(&o, &n));
        prop_assert!(in_completion(&o, &n));
        prop_assert_ne!(cut_compare(&o, &n, &c), Ordering::Greater);
    }

    #[test]
    fn back_and_forth_maps_preserve_order(lo in quad(), w1 in 1i64..5, w2 in 1i64..5, seed in any::<u64>(), anti in any::<bool>()) {
        let a = CodedOrder::coded(Predicate::Rational, vec![Interval::open(lo.clone(), lo.clone() + QuadRat::int(w1))]).unwrap();
        let b = CodedOrder::coded(Predicate::Irrational, vec![Interval::open(lo.clone(), lo + QuadRat::int(w2))]).unwrap();
        let mode = if anti { IsoMode::Anti } else { IsoMode::Iso };
        let v = back_and_forth(&a, &b, mode, 24, seed);
        prop_assert_eq!(v.verdict, if anti { Verdict::AntiIso } else { Verdict::Iso });
        prop_assert!(preserves(&v.partial_map, mode));
        prop_assert!(v.partial_map.iter().all(|(x, y)| a.member(x) && b.member(y)));
    }
}
