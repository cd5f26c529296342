//! The acceptance criteria as runnable checks.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::closure::{
    build_witness_order, check_axioms, exhaustive_maximal_free, invariant_of, quotient, random_order,
    random_witness_extension, verify_witness, AxiomWitness, Budget, Closure, ClosureSystem, ClosureTable, Invariant,
    WitnessOrder,
};
use crate::generators::{gen, random_system, realize_invariant, GenSpec, RealizeStyle};
use crate::order::{back_and_forth, cut_compare, preserves, IsoMode, Verdict};
use crate::pairing::{
    bounded_iso, completion_maps, partnered_model, restrict_to_model, sample_points, stream, verify_dep_laws,
    weight_one, CompletionShape, Direction, DSet, Scenario, Status, WeightOneOutcome, DEFAULT_CUT_PAIRS,
    DEFAULT_POINT_SAMPLES,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

pub const CRITERIA: [(u32, &str); 10] = [
    (1, "quotient soundness"),
    (2, "invariance of maximal free sequences"),
    (3, "witness orders"),
    (4, "exchange failure and degeneracy"),
    (5, "dependency laws"),
    (6, "bounded correspondence"),
    (7, "unbounded correspondence"),
    (8, "density of invariants"),
    (9, "invariant realization"),
    (10, "weight-one witnesses"),
];

/// Runs one criterion. `seed` shifts every seeded draw.
pub fn run_criterion(id: u32, seed: u64) -> Option<CriterionOutcome> {
    let name = CRITERIA.iter().find(|c| c.0 == id)?.1;
    let start = Instant::now();
    let result = match id {
        1 => quotient_soundness(seed),
        2 => invariance(seed),
        3 => witness_orders(seed),
        4 => exchange_and_degeneracy(),
        5 => dependency_laws(seed),
        6 => bounded_correspondence(seed),
        7 => unbounded_correspondence(seed),
        8 => density(seed),
        9 => realization(seed),
        _ => weight_one_witnesses(seed),
    };
    let elapsed = start.elapsed();
    let result = result.and_then(|detail| match time_limit(id) {
        Some(limit) if elapsed > limit => Err(format!("{detail}; took {elapsed:?}, limit {limit:?}")),
        _ => Ok(detail),
    });
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(CriterionOutcome { id, name: name.into(), passed, detail, elapsed_ms: elapsed.as_millis() })
}

pub fn run_suite(seed: u64) -> Vec<CriterionOutcome> {
    CRITERIA.iter().filter_map(|(id, _)| run_criterion(*id, seed)).collect()
}

fn time_limit(id: u32) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(60)),
        7 => Some(Duration::from_secs(30)),
        _ => None,
    }
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn system_size(seed: u64, max: usize) -> usize {
    ChaCha8Rng::seed_from_u64(seed ^ 0x5eed).gen_range(1..=max)
}

/// Singleton closures, as bitmasks, straight from the table.
fn singles(t: &ClosureTable) -> Vec<u64> {
    (0..t.len()).map(|x| t.cl(1 << x)).collect()
}

fn quotient_soundness(seed: u64) -> Check {
    let mut subsets = 0usize;
    for i in 0..200 {
        let s = seed.wrapping_add(i);
        let sys = random_system(system_size(s, 12), s).map_err(|e| e.to_string())?;
        let q = quotient(&sys).map_err(|e| format!("seed {s}: {e}"))?;
        let t = ClosureTable::new(&sys).map_err(|e| e.to_string())?;
        let n = sys.len();
        let base = t.cl(0);
        let cl1 = singles(&t);

        let mut cover = 0u64;
        for class in q.classes() {
            let m = class.iter().fold(0u64, |acc, &x| acc | 1 << x);
            ensure(cover & m == 0, || format!("seed {s}: classes overlap"))?;
            ensure(class.iter().all(|&x| cl1[x] == cl1[class[0]]), || format!("seed {s}: class mixes closures"))?;
            cover |= m;
        }
        ensure(cover == t.full() & !base, || format!("seed {s}: classes do not cover P \\ cl(∅)"))?;

        for x in 0..n {
            for y in 0..n {
                let (Some(a), Some(b)) = (q.class_of(x), q.class_of(y)) else { continue };
                let strict = cl1[x] & !cl1[y] == 0 && cl1[x] != cl1[y];
                ensure((a < b) == strict, || format!("seed {s}: order of {x},{y} disagrees with cl inclusion"))?;
                ensure(a == b || (a < b) != (b < a), || format!("seed {s}: {x},{y} incomparable"))?;
            }
        }
        for mask in 0..=t.full() {
            let xs: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let v = q.structure_check(&sys, &xs).map_err(|e| e.to_string())?;
            ensure(v.holds, || format!("seed {s}: structure identity fails at {xs:?}: {v:?}"))?;
            subsets += 1;
        }
    }
    Ok(format!("200 systems, {subsets} subsets, zero violations"))
}

/// Length of the class-projection oracle: distinct singleton closures among `X \ cl(∅)`.
fn classes_meeting(cl1: &[u64], base: u64, mask: u64) -> usize {
    let mut seen: Vec<u64> = (0..cl1.len())
        .filter(|&x| mask >> x & 1 == 1 && base >> x & 1 == 0)
        .map(|x| cl1[x])
        .collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

fn invariance(seed: u64) -> Check {
    let mut sequences = 0usize;
    for i in 0..50 {
        let s = seed.wrapping_add(1000 + i);
        let sys = random_system(system_size(s, 9), s).map_err(|e| e.to_string())?;
        let t = ClosureTable::new(&sys).map_err(|e| e.to_string())?;
        let (base, cl1) = (t.cl(0), singles(&t));
        let n = sys.len();
        // Free pairs are exactly the pairs of strictly increasing classes.
        for x in 0..n {
            for y in 0..n {
                if base >> x & 1 == 1 || base >> y & 1 == 1 {
                    continue;
                }
                let free = t.cl(1 << x) >> y & 1 == 0;
                let increasing = cl1[x] & !cl1[y] == 0 && cl1[x] != cl1[y];
                ensure(free == increasing, || format!("seed {s}: pair ({x},{y}) free = {free}"))?;
            }
        }
        for mask in 0..=t.full() {
            let xs: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let expect = classes_meeting(&cl1, base, mask);
            let inv = invariant_of(&sys, &xs).map_err(|e| e.to_string())?;
            ensure(inv == Invariant::from_len(expect), || format!("seed {s}: Inv({xs:?}) = {inv}, expected {expect}"))?;
            for seq in exhaustive_maximal_free(&t, &xs) {
                ensure(seq.len() == expect, || format!("seed {s}: maximal free {seq:?} in {xs:?}, expected length {expect}"))?;
                sequences += 1;
            }
        }
    }
    Ok(format!("50 systems, {sequences} maximal free sequences, zero violations"))
}

fn closure_examples() -> Vec<(String, ClosureSystem)> {
    ["ex11-1", "ex11-3", "ex11-4", "ex26"]
        .iter()
        .map(|n| (n.to_string(), gen(&GenSpec::new(n)).expect("named generator").closure().expect("closure")))
        .collect()
}

fn witness_orders(seed: u64) -> Check {
    let mut systems = closure_examples();
    for i in 0..50 {
        let s = seed.wrapping_add(2000 + i);
        systems.push((format!("random seed {s}"), random_system(system_size(s, 12), s).map_err(|e| e.to_string())?));
    }
    for (name, sys) in &systems {
        let w = build_witness_order(sys).map_err(|e| format!("{name}: {e}"))?;
        let r = verify_witness(sys, &w).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.passes(), || format!("{name}: canonical witness fails: {r:?}"))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x3);
    let (mut accepted, mut tries) = (0, 0);
    while accepted < 100 {
        tries += 1;
        ensure(tries < 100_000, || format!("only {accepted} alternative witness orders found"))?;
        let (name, sys) = &systems[rng.gen_range(0..systems.len())];
        let q = quotient(sys).map_err(|e| e.to_string())?;
        let candidate = if tries % 2 == 0 {
            random_witness_extension(&q, &mut rng)
        } else {
            let canonical = build_witness_order(sys).map_err(|e| e.to_string())?;
            let noise = random_order(sys.len(), rng.gen_range(0.05..0.5), &mut rng);
            let mut pairs = canonical.pairs();
            pairs.extend(noise.pairs());
            let w = WitnessOrder::from_pairs(sys.len(), &pairs).map_err(|e| e.to_string())?.transitive_closure();
            if w.check_strict().is_err() {
                continue;
            }
            w
        };
        let r = verify_witness(sys, &candidate).map_err(|e| e.to_string())?;
        if !r.free_pairs_increasing() {
            continue;
        }
        ensure(r.classes_convex() && r.incomparability_closed(), || format!("{name}: {r:?}"))?;
        accepted += 1;
    }
    Ok(format!("{} systems; 100 alternative witness orders in {tries} draws, zero violations", systems.len()))
}

fn exchange_and_degeneracy() -> Check {
    let report = |name: &str, params: &[(&str, i64)]| {
        let mut spec = GenSpec::new(name);
        for (k, v) in params {
            spec = spec.with(k, *v);
        }
        let sys = gen(&spec).expect("named generator").closure().expect("closure");
        let r = check_axioms(&sys, Budget::default());
        (sys, r)
    };
    let (chain, r1) = report("ex11-1", &[]);
    ensure(r1.is_closure(), || "ex11-1 is not a closure".into())?;
    let w = r1.exchange.witness.clone().ok_or("ex11-1: exchange holds")?;
    ensure(w.confirms(&chain), || format!("ex11-1: witness {w:?} does not re-check"))?;
    ensure(w == AxiomWitness::Exchange { x: vec![], a: 2, b: 1 }, || format!("ex11-1: witness {w:?}"))?;

    for l in 1..=5 {
        let (sys, r) = report("ex11-5", &[("n", l)]);
        ensure(r.coverage.exhaustive, || "striped check not exhaustive".into())?;
        ensure(r.is_proper() == (l > 1), || format!("ex11-5 L={l}: proper = {}", r.is_proper()))?;
        ensure(r.degenerated.holds, || format!("ex11-5 L={l}: not degenerated"))?;
        let w = r.totally_degenerated.witness.clone().ok_or(format!("ex11-5 L={l}: totally degenerated"))?;
        ensure(w.confirms(&sys), || format!("ex11-5: witness {w:?} does not re-check"))?;
    }

    // All five examples are proper and degenerated; (3) and (4) totally so, (2) and (5) not.
    for (name, td) in [("ex11-1", true), ("ex11-2", false), ("ex11-3", true), ("ex11-4", true), ("ex11-5", false)] {
        let (_, r) = report(name, &[]);
        ensure(r.is_proper() && r.degenerated.holds, || format!("{name}: {r:?}"))?;
        ensure(r.totally_degenerated.holds == td, || format!("{name}: totally degenerated = {}", !td))?;
    }
    Ok("ex11-1 exchange witness (∅, 2, 1); ex11-5 degenerated, not totally degenerated for L = 1..5".into())
}

fn scenario(name: &str, params: &[(&str, i64)]) -> Result<Scenario, String> {
    let mut spec = GenSpec::new(name);
    for (k, v) in params {
        spec = spec.with(k, *v);
    }
    gen(&spec).map_err(|e| e.to_string())?.scenario().ok_or_else(|| format!("{name} is not a scenario"))
}

fn dependency_laws(seed: u64) -> Check {
    let cases: [(&str, &[(&str, i64)]); 7] = [
        ("ex73-1", &[]),
        ("ex73-2", &[]),
        ("ex73-3", &[]),
        ("ex73-3", &[("base", 2)]),
        ("zigzag", &[]),
        ("ex78-1", &[]),
        ("ex78-2", &[]),
    ];
    let mut out = Vec::new();
    for (name, params) in cases {
        let scn = scenario(name, params)?;
        let r = verify_dep_laws(&scn, DEFAULT_POINT_SAMPLES, seed).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.passes(), || format!("{name}{params:?}: {:?}", r.laws.iter().filter(|l| l.failed()).collect::<Vec<_>>()))?;
        ensure(r.samples == DEFAULT_POINT_SAMPLES, || format!("{name}: only {} points sampled", r.samples))?;
        let windowed = scn.lin_p.member_view.is_some() || scn.lin_q.member_view.is_some();
        let e = r.laws.iter().find(|l| l.law == "e_closed").expect("e_closed law");
        ensure(!windowed || e.status == Status::Pass, || format!("{name}: e_closed not checked"))?;
        out.push(name);
    }
    Ok(format!("{} scenarios × {DEFAULT_POINT_SAMPLES} points, zero violations", out.len()))
}

fn bounded_correspondence(seed: u64) -> Check {
    let scn = scenario("ex73-1", &[])?;
    for k in [20, 50, 100, 200] {
        let m = partnered_model(&scn, k, seed).map_err(|e| e.to_string())?;
        let r = restrict_to_model(&scn, &m, DEFAULT_POINT_SAMPLES, seed).map_err(|e| format!("k={k}: {e}"))?;
        let v = bounded_iso(&r, k, seed).map_err(|e| format!("k={k}: {e}"))?;
        ensure(v.verdict == Verdict::Iso, || format!("ex73-1, k={k}: {:?}", v.verdict))?;
        ensure(v.partial_map.len() == k, || format!("ex73-1, k={k}: {} pairs", v.partial_map.len()))?;
        // Every pair of the finite model, compared directly.
        for (a, fa) in &v.partial_map {
            for (b, fb) in &v.partial_map {
                ensure((a < b) == (fa < fb), || format!("ex73-1: F does not preserve {a} < {b}"))?;
            }
        }
    }
    let scn = scenario("ex73-2", &[("n", 3)])?;
    let m = partnered_model(&scn, 60, seed).map_err(|e| e.to_string())?;
    let r = restrict_to_model(&scn, &m, DEFAULT_POINT_SAMPLES, seed).map_err(|e| e.to_string())?;
    let v = bounded_iso(&r, DEFAULT_POINT_SAMPLES, seed).map_err(|e| e.to_string())?;
    ensure(v.verdict == Verdict::AntiIso, || format!("ex73-2: {:?}", v.verdict))?;
    ensure(preserves(&v.partial_map, IsoMode::Anti), || "ex73-2: map is not order-reversing".into())?;
    let by_size = back_and_forth(&r.lin_p.points, &r.lin_q.points, IsoMode::Anti, 64, seed);
    ensure(by_size.verdict == Verdict::AntiIso, || format!("ex73-2: sizes give {:?}", by_size.verdict))?;
    Ok(format!("ex73-1 Iso on models of 20, 50, 100, 200 classes; ex73-2 AntiIso on {} pairs", v.partial_map.len()))
}

fn unbounded_correspondence(seed: u64) -> Check {
    let mut notes = Vec::new();
    for (name, dir, verdict) in [
        ("ex78-1", Direction::Increasing, Verdict::Iso),
        ("ex78-2", Direction::Decreasing, Verdict::AntiIso),
    ] {
        let scn = scenario(name, &[])?;
        let r = completion_maps(&scn, DEFAULT_CUT_PAIRS, seed).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.passes(), || format!("{name}: {:?}", r.laws.iter().filter(|l| l.failed()).collect::<Vec<_>>()))?;
        ensure(r.direction == Some(dir), || format!("{name}: direction {:?}", r.direction))?;
        ensure(r.verdict == verdict, || format!("{name}: verdict {:?}", r.verdict))?;
        ensure(r.cut_pairs == DEFAULT_CUT_PAIRS, || format!("{name}: {} cut pairs", r.cut_pairs))?;
        let monotone = if dir == Direction::Increasing { "strictly_monotone" } else { "strictly_antitone" };
        for law in [monotone, "injective", "dense_image", "proper_images"] {
            let l = r.laws.iter().find(|l| l.law == law).ok_or(format!("{name}: law {law} missing"))?;
            ensure(l.status == Status::Pass, || format!("{name}: {law} {:?}", l.status))?;
        }
        notes.push(format!("{name} {verdict:?}"));
    }
    Ok(format!("{} over {DEFAULT_CUT_PAIRS} cut pairs each", notes.join(", ")))
}

fn density(seed: u64) -> Check {
    let scn = scenario("ex78-1", &[])?;
    let q = &scn.lin_q.points;
    let pts = sample_points(q, DEFAULT_POINT_SAMPLES + 1, &mut stream(seed, 60));
    let mut rng = stream(seed, 61);
    let mut pairs: Vec<(usize, usize)> = (1..pts.len()).map(|i| (i - 1, i)).collect();
    while pairs.len() < DEFAULT_POINT_SAMPLES {
        let (i, j) = (rng.gen_range(0..pts.len()), rng.gen_range(0..pts.len()));
        if i < j {
            pairs.push((i, j));
        }
    }
    for &(i, j) in &pairs {
        let (a, b) = (&pts[i], &pts[j]);
        let c = q.between(a, b).map_err(|e| format!("no class between {a} and {b}: {e}"))?;
        ensure(a < &c && &c < b && q.member(&c), || format!("{c} is not a class strictly between {a} and {b}"))?;
    }
    Ok(format!("{} class pairs of the rational side, a class strictly between each", pairs.len()))
}

fn realization(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9);
    for i in 0..100 {
        let size = if i == 0 { 0 } else { rng.gen_range(0..=50) };
        let labels: Vec<String> = (0..size).map(|j| format!("i{j}")).collect();
        let style = if rng.gen_bool(0.5) {
            RealizeStyle::SimpleDense
        } else {
            RealizeStyle::Zwindow { window: rng.gen_range(1..=3) }
        };
        let sys = realize_invariant(&labels, style).map_err(|e| e.to_string())?;
        let q = quotient(&sys).map_err(|e| format!("|I| = {size}: {e}"))?;
        ensure(q.len() == size, || format!("|I| = {size}: {} classes", q.len()))?;
        let all: Vec<usize> = (0..sys.len()).collect();
        let inv = invariant_of(&sys, &all).map_err(|e| e.to_string())?;
        ensure(inv == Invariant::from_len(size), || format!("|I| = {size}: Inv = {inv}"))?;
        // The classes follow the label order.
        for (k, class) in q.classes().iter().enumerate() {
            let id = sys.carrier().id(class[0]);
            ensure(id == labels[k] || id.starts_with(&format!("{}.", labels[k])), || format!("class {k} is {id}"))?;
        }
    }
    let empty = realize_invariant(&[], RealizeStyle::SimpleDense).map_err(|e| e.to_string())?;
    ensure(invariant_of(&empty, &[0]).map_err(|e| e.to_string())? == Invariant::Empty, || "empty I: Inv ≠ ∅".into())?;
    ensure(empty.close_empty().count_ones(..) == empty.len(), || "empty I: carrier not inside cl(∅)".into())?;

    let scn = scenario("empty-inv", &[])?;
    let model = scn.model.clone().expect("empty-inv has a model");
    let restricted = restrict_to_model(&scn, &model, DEFAULT_POINT_SAMPLES, seed).map_err(|e| e.to_string())?;
    let r = completion_maps(&restricted, DEFAULT_CUT_PAIRS, seed).map_err(|e| e.to_string())?;
    ensure(
        r.p_completion == CompletionShape::OneElement && r.q_completion == CompletionShape::OneElement,
        || format!("empty-inv completions {:?} / {:?}", r.p_completion, r.q_completion),
    )?;
    ensure(r.verdict == Verdict::Iso, || format!("empty-inv verdict {:?}", r.verdict))?;
    Ok("100 random finite orders round-trip; empty order gives Inv = ∅ and one-element completions, Iso".into())
}

fn weight_one_witnesses(seed: u64) -> Check {
    let pq = scenario("ex78-1", &[])?;
    let pr = scenario("colored-dlo", &[("k", 2), ("r", 0)])?;
    let out = weight_one(&pq, &pr, seed).map_err(|e| e.to_string())?;
    let WeightOneOutcome::Found { forward, backward } = out else {
        return Err(format!("{out:?}"));
    };
    let p = &pq.lin_p.points;
    let d = |s: &Scenario, b| crate::pairing::dual_dep_set(s, b).map_err(|e| e.to_string());
    for (name, small, large) in [
        ("forward", d(&pq, &forward.smaller)?, d(&pr, &forward.larger)?),
        ("backward", d(&pr, &backward.smaller)?, d(&pq, &backward.larger)?),
    ] {
        let a = if name == "forward" { &forward.a } else { &backward.a };
        ensure(p.member(a) && large.contains(p, a) && !small.contains(p, a), || format!("{name}: {a} does not separate"))?;
        if let (DSet::Segment { cut: c1 }, DSet::Segment { cut: c2 }) = (&small, &large) {
            ensure(cut_compare(p, c1, c2).is_lt(), || format!("{name}: {c1} ⊄ {c2}"))?;
        }
    }
    Ok(format!(
        "D_p({}) ⊊ D_p({}) and D_p({}) ⊊ D_p({})",
        forward.smaller, forward.larger, backward.smaller, backward.larger
    ))
}
