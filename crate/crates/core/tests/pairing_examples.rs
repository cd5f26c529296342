use ordlab::generators::{gen, random_scenario, GenSpec};
use ordlab::order::*;
use ordlab::pairing::*;
use proptest::prelude::*;

fn scenario(name: &str) -> Scenario {
    gen(&GenSpec::new(name)).unwrap().scenario().unwrap()
}

fn with(name: &str, key: &str, v: i64) -> Scenario {
    gen(&GenSpec::new(name).with(key, v)).unwrap().scenario().unwrap()
}

fn law<'a>(laws: &'a [Law], name: &str) -> &'a Law {
    laws.iter().find(|l| l.law == name).unwrap_or_else(|| panic!("no law {name}"))
}

fn ints(xs: &[i64]) -> CodedOrder {
    CodedOrder::finite(xs.iter().map(|&x| QuadRat::int(x)).collect())
}

#[test]
fn named_scenarios_classify() {
    assert_eq!(classify(&scenario("ex73-1"), 200, 0).unwrap(), LinkKind::Bounded);
    assert_eq!(classify(&scenario("ex78-1"), 200, 0).unwrap(), LinkKind::Unbounded);
    let s = scenario("ex73-1");
    assert!(!s.declared_commute);
    assert_eq!(s.image(&QuadRat::frac(3, 7)).unwrap(), LinkImage::Class { point: QuadRat::frac(3, 7) });
    let s = scenario("ex78-1");
    assert!(!s.declared_commute);
    assert_eq!(s.image(&QuadRat::sqrt2()).unwrap(), LinkImage::Cut { cut: Cut::below(QuadRat::sqrt2()) });
}

#[test]
fn mixed_link_is_rejected() {
    let scn = Scenario::new(
        ClassOrder::new(ints(&[0, 1])),
        ClassOrder::new(ints(&[0, 1])),
        Link::Explicit(vec![
            (QuadRat::int(0), LinkImage::Class { point: QuadRat::int(0) }),
            (QuadRat::int(1), LinkImage::Cut { cut: Cut::below(QuadRat::int(1)) }),
        ]),
        false,
    );
    assert!(matches!(classify(&scn, 10, 0), Err(PairingError::MixedLink { .. })));
}

#[test]
fn unbounded_dep_sets_at_a_point() {
    let scn = scenario("ex78-1");
    let a: QuadRat = "1+1*r2".parse().unwrap();
    let d = dep_sets(&scn, &a).unwrap();
    let q = &scn.lin_q.points;
    for (y, inside) in [("12/5", true), ("2", true), ("5/2", false), ("3", false), ("-7", true)] {
        let y: QuadRat = y.parse().unwrap();
        assert_eq!(y < a, inside);
        assert_eq!(d.d_contains(q, &y), inside, "{y}");
        assert_eq!(d.i_contains(q, &y), !inside, "{y}");
    }
}

#[test]
fn bounded_dep_sets_are_inclusive() {
    let scn = scenario("ex73-1");
    let d = dep_sets(&scn, &QuadRat::zero()).unwrap();
    let q = &scn.lin_q.points;
    assert!(d.d_contains(q, &QuadRat::zero()));
    assert!(d.d_contains(q, &QuadRat::frac(-1, 9)));
    assert!(d.i_contains(q, &QuadRat::frac(1, 9)));
}

#[test]
fn empty_opposite_side() {
    let scn = Scenario::new(
        ClassOrder::new(CodedOrder::irrationals()),
        ClassOrder::new(CodedOrder::empty()),
        Link::Unbounded(AffineMap::identity()),
        false,
    );
    let d = dep_sets(&scn, &QuadRat::sqrt2()).unwrap();
    assert_eq!(d.d_members, Some(vec![]));
    assert_eq!(d.i_members, Some(vec![]));
}

#[test]
fn dependency_laws_on_unbounded_example() {
    let r = verify_dep_laws(&scenario("ex78-1"), 500, 0).unwrap();
    assert_eq!(r.samples, 500);
    assert!(r.passes(), "{:?}", r.laws);
}

#[test]
fn windowed_sets_are_unions_of_windows() {
    let scn = with("zigzag", "window", 5);
    assert_eq!(scn.lin_p.member_view.unwrap().window, 5);
    let r = verify_dep_laws(&scn, 200, 0).unwrap();
    assert_eq!(law(&r.laws, "e_closed").status, Status::Pass);
}

#[test]
fn adversarial_link_breaks_comparability() {
    let scn = Scenario::new(
        ClassOrder::new(ints(&[0, 1])),
        ClassOrder::new(ints(&[0, 1, 2])),
        Link::Explicit(vec![
            (QuadRat::int(0), LinkImage::Set { points: vec![QuadRat::int(0), QuadRat::int(2)] }),
            (QuadRat::int(1), LinkImage::Set { points: vec![QuadRat::int(1)] }),
        ]),
        false,
    );
    let r = verify_dep_laws(&scn, 10, 0).unwrap();
    let l = law(&r.laws, "inclusion_comparable");
    assert_eq!(l.status, Status::Fail);
    assert!(l.witness.is_some());
}

#[test]
fn directions_of_named_examples() {
    for (name, dir) in [
        ("ex78-1", Direction::Increasing),
        ("ex78-2", Direction::Decreasing),
        ("ex73-1", Direction::Increasing),
        ("ex73-2", Direction::Decreasing),
    ] {
        let r = direction(&scenario(name), 200, 0).unwrap();
        assert_eq!(r.direction, dir, "{name}");
        assert_eq!(r.commuting, dir.commutes());
    }
    assert!(matches!(
        direction(&with("ex73-2", "commute", 0), 200, 0),
        Err(PairingError::CommuteMismatch { direction: Direction::Decreasing, declared: false })
    ));
}

fn small_denominators() -> CodedOrder {
    let mut pts = Vec::new();
    for d in 1..=10 {
        for n in 0..=d {
            pts.push(QuadRat::frac(n, d));
        }
    }
    CodedOrder::finite(pts)
}

#[test]
fn partner_closed_model() {
    let scn = scenario("ex73-1");
    let m = small_denominators();
    let model = Model { p: Some(m.clone()), q: Some(m.clone()) };
    let r = restrict_to_model(&scn, &model, 500, 0).unwrap();
    let v = bounded_iso(&r, 500, 0).unwrap();
    assert_eq!(v.verdict, Verdict::Iso);
    assert_eq!(v.partial_map.len(), m.len().unwrap());

    let mut short = m.points().unwrap().to_vec();
    short.retain(|x| *x != QuadRat::frac(1, 7));
    let model = Model { p: Some(m), q: Some(CodedOrder::finite(short)) };
    assert!(matches!(
        restrict_to_model(&scn, &model, 500, 0),
        Err(PairingError::ModelNotClosed { side: SideName::P, .. })
    ));
}

#[test]
fn partnered_models_are_isomorphic() {
    let scn = scenario("ex73-1");
    let model = partnered_model(&scn, 20, 0).unwrap();
    let r = restrict_to_model(&scn, &model, 500, 0).unwrap();
    let v = bounded_iso(&r, 500, 0).unwrap();
    assert_eq!(v.verdict, Verdict::Iso);
    assert_eq!(v.partial_map.len(), 20);
    for (x, y) in &v.partial_map {
        for (u, w) in &v.partial_map {
            assert_eq!(x.cmp(u), y.cmp(w));
        }
    }
}

#[test]
fn reflected_blocks_are_anti_isomorphic() {
    let scn = scenario("ex73-2");
    let v = bounded_iso(&scn, 300, 0).unwrap();
    assert_eq!(v.verdict, Verdict::AntiIso);
    assert!(preserves(&v.partial_map, IsoMode::Anti));
}

#[test]
fn singleton_model() {
    let scn = scenario("ex73-1");
    let one = CodedOrder::finite(vec![QuadRat::frac(1, 3)]);
    let r = restrict_to_model(&scn, &Model { p: Some(one.clone()), q: Some(one) }, 10, 0).unwrap();
    let v = bounded_iso(&r, 10, 0).unwrap();
    assert_eq!(v.verdict, Verdict::Iso);
    assert_eq!(v.partial_map.len(), 1);
}

#[test]
fn empty_model_on_p() {
    let scn = scenario("empty-inv");
    let model = scn.model.clone().unwrap();
    let r = restrict_to_model(&scn, &model, 100, 0).unwrap();
    assert!(r.lin_p.points.is_empty());
    let c = completion_maps(&r, 100, 0).unwrap();
    assert_eq!(c.p_completion, CompletionShape::OneElement);
    assert_eq!(c.q_completion, CompletionShape::OneElement);
    assert_eq!(c.verdict, Verdict::Iso);
}

#[test]
fn completions_of_unbounded_examples() {
    let c = completion_maps(&scenario("ex78-1"), 1000, 0).unwrap();
    assert!(c.passes(), "{:?}", c.laws);
    assert_eq!((c.direction, c.verdict), (Some(Direction::Increasing), Verdict::Iso));
    assert_eq!(c.cut_pairs, 1000);
    let c = completion_maps(&scenario("ex78-2"), 1000, 0).unwrap();
    assert!(c.passes(), "{:?}", c.laws);
    assert_eq!((c.direction, c.verdict), (Some(Direction::Decreasing), Verdict::AntiIso));
}

#[test]
fn weight_one_examples() {
    let pq = scenario("ex78-1");
    let pr = gen(&GenSpec::new("colored-dlo").with("k", 2).with("r", 0)).unwrap().scenario().unwrap();
    let out = weight_one(&pq, &pr, 0).unwrap();
    let WeightOneOutcome::Found { forward, backward } = out else { panic!("{out:?}") };
    let inside = |scn: &Scenario, b: &QuadRat, a: &QuadRat| dual_dep_set(scn, b).unwrap().contains(&pq.lin_p.points, a);
    assert!(!inside(&pq, &forward.smaller, &forward.a) && inside(&pr, &forward.larger, &forward.a));
    assert!(!inside(&pr, &backward.smaller, &backward.a) && inside(&pq, &backward.larger, &backward.a));

    let other = scenario("ex73-1");
    assert!(matches!(weight_one(&pq, &other, 0), Err(PairingError::SharedSideMismatch)));

    let single = ClassOrder::new(CodedOrder::finite(vec![QuadRat::zero()]));
    let (mut q1, mut r1) = (pq.clone(), pr.clone());
    q1.lin_q = single.clone();
    r1.lin_q = single;
    let out = weight_one(&q1, &r1, 0).unwrap();
    assert!(matches!(out, WeightOneOutcome::NotFound { .. }));
}

#[test]
fn generators_are_deterministic() {
    for name in ordlab::generators::NAMES {
        assert_eq!(gen(&GenSpec::new(name)).unwrap(), gen(&GenSpec::new(name)).unwrap(), "{name}");
    }
    assert_eq!(random_scenario(LinkKind::Unbounded, 9).unwrap(), random_scenario(LinkKind::Unbounded, 9).unwrap());
}

fn kind() -> impl Strategy<Value = LinkKind> {
    prop_oneof![Just(LinkKind::Bounded), Just(LinkKind::Unbounded)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_links_fall_on_one_side(k in kind(), seed in any::<u64>()) {
        let scn = random_scenario(k, seed).unwrap();
        prop_assert_eq!(classify(&scn, 100, seed).unwrap(), k);
    }

    #[test]
    fn direction_matches_commutation(k in kind(), seed in any::<u64>()) {
        let scn = random_scenario(k, seed).unwrap();
        let r = direction(&scn, 100, seed).unwrap();
        prop_assert_eq!(r.commuting, scn.declared_commute);
    }

    #[test]
    fn dependency_laws_hold(k in kind(), seed in any::<u64>()) {
        let scn = random_scenario(k, seed).unwrap();
        let r = verify_dep_laws(&scn, 100, seed).unwrap();
        prop_assert!(r.passes(), "{:?}", r.laws);
    }

    #[test]
    fn bounded_inverse_round_trips(seed in any::<u64>()) {
        let scn = random_scenario(LinkKind::Bounded, seed).unwrap();
        for a in sample_classes(&scn.lin_p.points, 40, seed) {
            let LinkImage::Class { point } = scn.image(&a).unwrap() else { panic!("bounded") };
            prop_assert!(scn.lin_q.member(&point));
            prop_assert_eq!(scn.inverse(&point).unwrap(), a);
        }
        for b in sample_classes(&scn.lin_q.points, 40, seed) {
            let a = scn.inverse(&b).unwrap();
            prop_assert_eq!(scn.image(&a).unwrap(), LinkImage::Class { point: b });
        }
    }

    #[test]
    fn unbounded_completions_relate(seed in any::<u64>()) {
        let scn = random_scenario(LinkKind::Unbounded, seed).unwrap();
        let c = completion_maps(&scn, 150, seed).unwrap();
        prop_assert!(c.passes(), "{:?}", c.laws);
        let want = if scn.declared_commute { Verdict::AntiIso } else { Verdict::Iso };
        prop_assert_eq!(c.verdict, want);
    }

    #[test]
    fn scenario_files_round_trip(k in kind(), seed in any::<u64>()) {
        let scn = random_scenario(k, seed).unwrap();
        let file = ordlab::io::ScenarioFile::pairing(scn.clone());
        let back = ordlab::io::ScenarioFile::from_json(&file.to_json()).unwrap();
        prop_assert_eq!(back.into_scenario().unwrap(), scn);
    }
}
