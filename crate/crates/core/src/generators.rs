//! Named example systems and scenarios, invariant realization, and random
//! inputs for the property suites.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closure::{Ambient, BaseOrder, ClosureError, ClosureSpec, ClosureSystem, Construction, FiberSpec};
use crate::io::ScenarioFile;
use crate::order::{CodedOrder, Interval, Predicate, QuadRat};
use crate::pairing::{AffineMap, BoundedLink, ClassOrder, Link, LinkKind, Model, Scenario};

pub const NAMES: [&str; 14] = [
    "ex11-1", "ex11-2", "ex11-3", "ex11-4", "ex11-5", "ex26", "ex73-1", "ex73-2", "ex73-3", "ex78-1", "ex78-2",
    "empty-inv", "zigzag", "colored-dlo",
];

pub const DEFAULT_WINDOW: usize = 5;
pub const MAX_RANDOM_SYSTEM: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Closure(#[from] ClosureError),
}

/// A generator id with integer parameters (flags are 0/1).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, i64>,
}

impl GenSpec {
    pub fn new(name: &str) -> Self {
        Self { name: name.into(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: i64) -> Self {
        self.params.insert(key.into(), value);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Generated {
    Closure(ClosureSystem),
    Pairing(Scenario),
}

impl Generated {
    pub fn closure(self) -> Option<ClosureSystem> {
        match self {
            Generated::Closure(s) => Some(s),
            Generated::Pairing(_) => None,
        }
    }

    pub fn scenario(self) -> Option<Scenario> {
        match self {
            Generated::Pairing(s) => Some(s),
            Generated::Closure(_) => None,
        }
    }

    pub fn to_file(&self) -> ScenarioFile {
        match self {
            Generated::Closure(s) => ScenarioFile::closure(s.spec().clone()),
            Generated::Pairing(s) => ScenarioFile::pairing(s.clone()),
        }
    }
}

/// Reads the parameters of one generator, rejecting names it does not know.
struct Params<'a> {
    name: &'a str,
    given: &'a BTreeMap<String, i64>,
}

impl<'a> Params<'a> {
    fn new(spec: &'a GenSpec, allowed: &[&str]) -> Result<Self, GenError> {
        if let Some(k) = spec.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            let known = if allowed.is_empty() { "none".to_string() } else { allowed.join(", ") };
            return Err(GenError::BadParams(format!("{}: unknown parameter {k:?} (accepted: {known})", spec.name)));
        }
        Ok(Self { name: &spec.name, given: &spec.params })
    }

    fn int(&self, key: &str, default: i64, lo: i64, hi: i64) -> Result<i64, GenError> {
        let v = self.given.get(key).copied().unwrap_or(default);
        if v < lo || v > hi {
            return Err(GenError::BadParams(format!("{}: {key} = {v} outside {lo}..={hi}", self.name)));
        }
        Ok(v)
    }

    fn size(&self, key: &str, default: usize, lo: usize, hi: usize) -> Result<usize, GenError> {
        Ok(self.int(key, default as i64, lo as i64, hi as i64)? as usize)
    }

    fn flag(&self, key: &str, default: bool) -> Result<bool, GenError> {
        Ok(self.int(key, default as i64, 0, 1)? == 1)
    }
}

/// Builds the named example. Output depends only on the spec.
pub fn gen(spec: &GenSpec) -> Result<Generated, GenError> {
    let closure = |s: ClosureSpec| Ok(Generated::Closure(ClosureSystem::from_spec(s)?));
    match spec.name.as_str() {
        "ex11-1" => {
            let p = Params::new(spec, &["n"])?;
            closure(ClosureSpec::new(Construction::Down).with_base(BaseOrder::chain(p.size("n", 3, 1, 64)?)))
        }
        "ex11-2" => {
            // A "V": 0 < 2 and 1 < 2, with an antichain and a chain as fibers.
            let p = Params::new(spec, &["fiber"])?;
            let f = p.size("fiber", 2, 1, 8)?;
            let base = BaseOrder::poset(3, vec![(0, 2), (1, 2)]);
            let chain = FiberSpec::Poset { size: f, less: (1..f).map(|j| (j - 1, j)).collect() };
            closure(ClosureSpec::new(Construction::Fibered).with_base(base).with_fibers(vec![
                FiberSpec::Size(f),
                chain,
                FiberSpec::Size(1),
            ]))
        }
        "ex11-3" => {
            let p = Params::new(spec, &["n"])?;
            let n = p.size("n", 2, 1, 32)?;
            let fibers = (0..n).map(|j| FiberSpec::Size(2 + j % 2)).collect();
            closure(ClosureSpec::new(Construction::LinearFibered).with_base(BaseOrder::chain(n)).with_fibers(fibers))
        }
        "ex11-4" => {
            let p = Params::new(spec, &["n", "fiber"])?;
            let n = p.size("n", 3, 1, 32)?;
            let f = p.size("fiber", 2, 1, 8)?;
            let fiber = FiberSpec::Poset { size: f, less: (1..f).map(|j| (j - 1, j)).collect() };
            closure(ClosureSpec::new(Construction::Product).with_base(BaseOrder::chain(n)).with_fibers(vec![fiber]))
        }
        "ex11-5" => {
            let p = Params::new(spec, &["n"])?;
            closure(ClosureSpec::new(Construction::Striped).with_base(BaseOrder::chain(p.size("n", 2, 1, 32)?)))
        }
        "ex26" => {
            let p = Params::new(spec, &["k", "m", "color"])?;
            let k = p.size("k", 3, 1, 7)?;
            let m = p.size("m", 4, 1, 16)?;
            let color = p.size("color", 0, 0, k - 1)?;
            closure(colored_chain(k, m, color))
        }
        "ex73-1" => {
            let p = Params::new(spec, &["width", "commute"])?;
            let side = ClassOrder::new(line_or_window(Predicate::Rational, p.int("width", 0, 0, 1 << 20)?));
            let link = Link::Bounded(BoundedLink::Rule(AffineMap::identity()));
            Ok(Generated::Pairing(Scenario::new(side.clone(), side, link, p.flag("commute", false)?)))
        }
        "ex73-2" => {
            let p = Params::new(spec, &["n", "commute"])?;
            let n = p.size("n", 3, 1, 64)?;
            Ok(Generated::Pairing(blocks_bounded(n, None, p.flag("commute", true)?)))
        }
        "ex73-3" => {
            let p = Params::new(spec, &["base", "n", "window", "commute"])?;
            let window = p.size("window", DEFAULT_WINDOW, 1, 64)?;
            match p.int("base", 1, 1, 2)? {
                1 => {
                    let side = ClassOrder::with_window(CodedOrder::rationals(), window);
                    let link = Link::Bounded(BoundedLink::Rule(AffineMap::identity()));
                    Ok(Generated::Pairing(Scenario::new(side.clone(), side, link, p.flag("commute", false)?)))
                }
                _ => {
                    let n = p.size("n", 3, 1, 64)?;
                    Ok(Generated::Pairing(blocks_bounded(n, Some(window), p.flag("commute", true)?)))
                }
            }
        }
        "zigzag" => {
            let p = Params::new(spec, &["n", "window", "commute"])?;
            let n = p.size("n", 3, 1, 64)?;
            let window = p.size("window", DEFAULT_WINDOW, 1, 64)?;
            Ok(Generated::Pairing(blocks_bounded(n, Some(window), p.flag("commute", true)?)))
        }
        "ex78-1" => {
            let p = Params::new(spec, &["width", "commute"])?;
            let w = p.int("width", 0, 0, 1 << 20)?;
            Ok(Generated::Pairing(Scenario::new(
                ClassOrder::new(line_or_window(Predicate::Irrational, w)),
                ClassOrder::new(line_or_window(Predicate::Rational, w)),
                Link::Unbounded(AffineMap::identity()),
                p.flag("commute", false)?,
            )))
        }
        "ex78-2" => {
            let p = Params::new(spec, &["n", "commute"])?;
            let n = p.size("n", 3, 1, 64)?;
            Ok(Generated::Pairing(Scenario::new(
                ClassOrder::new(blocks(Predicate::Rational, n)),
                ClassOrder::new(blocks(Predicate::Irrational, n)),
                Link::Unbounded(AffineMap::reflection(QuadRat::int(n as i64))),
                p.flag("commute", true)?,
            )))
        }
        "empty-inv" => {
            let p = Params::new(spec, &["k", "full_q"])?;
            let k = p.int("k", 2, 1, 7)? as u32;
            let scn = Scenario::new(
                ClassOrder::new(CodedOrder::irrationals()),
                ClassOrder::new(CodedOrder::on_line(Predicate::Color { k, r: 0 })),
                Link::Unbounded(AffineMap::identity()),
                false,
            );
            let q = if p.flag("full_q", false)? { None } else { Some(CodedOrder::empty()) };
            Ok(Generated::Pairing(scn.with_model(Model { p: Some(CodedOrder::empty()), q })))
        }
        "colored-dlo" => {
            let p = Params::new(spec, &["k", "r", "commute"])?;
            let k = p.int("k", 2, 1, 7)?;
            let r = p.int("r", 0, 0, k - 1)?;
            Ok(Generated::Pairing(Scenario::new(
                ClassOrder::new(CodedOrder::irrationals()),
                ClassOrder::new(CodedOrder::on_line(Predicate::Color { k: k as u32, r: r as u32 })),
                Link::Unbounded(AffineMap::identity()),
                p.flag("commute", false)?,
            )))
        }
        other => Err(GenError::UnknownGenerator(other.into())),
    }
}

fn line_or_window(pred: Predicate, width: i64) -> CodedOrder {
    if width == 0 {
        CodedOrder::on_line(pred)
    } else {
        CodedOrder::coded(pred, vec![Interval::open(QuadRat::int(-width), QuadRat::int(width))])
            .expect("nonempty interval")
    }
}

/// `n × L`, lexicographic: the predicate on the open blocks `(α, α+1)`.
fn blocks(pred: Predicate, n: usize) -> CodedOrder {
    let iv = (0..n as i64).map(|a| Interval::open(QuadRat::int(a), QuadRat::int(a + 1))).collect();
    CodedOrder::coded(pred, iv).expect("sorted disjoint blocks")
}

/// `n × ℚ` against `n* × ℚ`: block `α` is sent onto block `α*` by `x ↦ n − x`.
fn blocks_bounded(n: usize, window: Option<usize>, commute: bool) -> Scenario {
    let side = match window {
        Some(w) => ClassOrder::with_window(blocks(Predicate::Rational, n), w),
        None => ClassOrder::new(blocks(Predicate::Rational, n)),
    };
    let link = Link::Bounded(BoundedLink::Rule(AffineMap::reflection(QuadRat::int(n as i64))));
    Scenario::new(side.clone(), side, link, commute)
}

/// The points of one color of a `k`-colored chain of length `k·m`, closed
/// downwards inside their own color, and placed back in the full chain.
fn colored_chain(k: usize, m: usize, color: usize) -> ClosureSpec {
    let size = k * m;
    let mut spec = ClosureSpec::new(Construction::Down).with_base(BaseOrder::chain(m));
    spec.elements = Some((0..m).map(|i| format!("c{color}.{i}")).collect());
    spec.ambient = Some(Ambient {
        size,
        positions: (0..m).map(|i| i * k + color).collect(),
        labels: (0..size).map(|p| format!("c{}.{}", p % k, p / k)).collect(),
    });
    spec
}

/// How each point of a realized invariant is expanded into elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "style", rename_all = "snake_case")]
pub enum RealizeStyle {
    /// One element per point.
    #[default]
    SimpleDense,
    /// A window of elements per point, standing for a copy of ℤ.
    Zwindow { window: usize },
}

/// A linearly fibered system whose class order is the given chain of labels.
/// The empty chain gives a single element of `cl(∅)`.
pub fn realize_invariant(order: &[String], style: RealizeStyle) -> Result<ClosureSystem, GenError> {
    let window = match style {
        RealizeStyle::SimpleDense => 1,
        RealizeStyle::Zwindow { window: 0 } => return Err(GenError::BadParams("window must be positive".into())),
        RealizeStyle::Zwindow { window } => window,
    };
    let mut spec = ClosureSpec::new(Construction::LinearFibered)
        .with_base(BaseOrder::chain(order.len()))
        .with_fibers(vec![FiberSpec::Size(window); order.len()]);
    if order.is_empty() {
        spec.background = 1;
    } else if window == 1 {
        spec.elements = Some(order.to_vec());
    } else {
        spec.elements = Some(order.iter().flat_map(|l| (0..window).map(move |j| format!("{l}.{j}"))).collect());
    }
    Ok(ClosureSystem::from_spec(spec)?)
}

/// A random linearly fibered system on `n` elements: a random chain of
/// fibers, sometimes a few elements of `cl(∅)`, and shuffled element indices.
pub fn random_system(n: usize, seed: u64) -> Result<ClosureSystem, GenError> {
    if n == 0 || n > MAX_RANDOM_SYSTEM {
        return Err(GenError::BadParams(format!("random system size {n} outside 1..={MAX_RANDOM_SYSTEM}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let background = if n > 1 && rng.gen_bool(0.3) { rng.gen_range(1..=n.div_ceil(4)) } else { 0 };
    let rest = n - background;
    let chain = if rest == 0 { 0 } else { rng.gen_range(1..=rest) };
    // Random composition of `rest` into `chain` positive parts.
    let mut cuts: Vec<usize> = (1..rest).collect();
    cuts.shuffle(&mut rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(chain.saturating_sub(1)).collect();
    cuts.sort_unstable();
    let mut sizes = Vec::with_capacity(chain);
    let mut prev = 0;
    for c in cuts.into_iter().chain((chain > 0).then_some(rest)) {
        sizes.push(c - prev);
        prev = c;
    }
    let mut assignment: Vec<Option<usize>> =
        sizes.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(Some(b), s)).collect();
    assignment.extend(std::iter::repeat_n(None, background));
    assignment.shuffle(&mut rng);

    let mut spec = ClosureSpec::new(Construction::LinearFibered)
        .with_base(BaseOrder::chain(chain))
        .with_fibers(sizes.into_iter().map(FiberSpec::Size).collect());
    spec.background = background;
    spec.assignment = Some(assignment);
    Ok(ClosureSystem::from_spec(spec)?)
}

/// A named scenario of the given link kind with randomly perturbed parameters.
pub fn random_scenario(kind: LinkKind, seed: u64) -> Result<Scenario, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = rng.gen_range(0..3);
    let spec = match (kind, pick) {
        (LinkKind::Bounded, 0) => GenSpec::new("ex73-1").with("width", rng.gen_range(0..=50)),
        (LinkKind::Bounded, 1) => GenSpec::new("ex73-2").with("n", rng.gen_range(1..=6)),
        (LinkKind::Bounded, _) => GenSpec::new("ex73-3")
            .with("base", rng.gen_range(1..=2))
            .with("n", rng.gen_range(1..=6))
            .with("window", rng.gen_range(1..=8)),
        (LinkKind::Unbounded, 0) => GenSpec::new("ex78-1").with("width", rng.gen_range(0..=50)),
        (LinkKind::Unbounded, 1) => GenSpec::new("ex78-2").with("n", rng.gen_range(1..=6)),
        (LinkKind::Unbounded, _) => {
            let k = rng.gen_range(1..=7);
            GenSpec::new("colored-dlo").with("k", k).with("r", rng.gen_range(0..k))
        }
    };
    Ok(gen(&spec)?.scenario().expect("scenario generator"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::{check_axioms, invariant_of, quotient, Budget, Closure, Invariant};

    #[test]
    fn every_name_generates() {
        for name in NAMES {
            gen(&GenSpec::new(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(matches!(gen(&GenSpec::new("ex99")), Err(GenError::UnknownGenerator(_))));
    }

    #[test]
    fn unknown_and_out_of_range_params_are_rejected() {
        assert!(matches!(gen(&GenSpec::new("ex11-1").with("window", 3)), Err(GenError::BadParams(_))));
        assert!(matches!(gen(&GenSpec::new("ex26").with("color", 3)), Err(GenError::BadParams(_))));
        assert!(matches!(gen(&GenSpec::new("ex73-1").with("commute", 2)), Err(GenError::BadParams(_))));
    }

    #[test]
    fn zwindow_realization() {
        let labels: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let sys = realize_invariant(&labels, RealizeStyle::Zwindow { window: 3 }).unwrap();
        assert_eq!(sys.len(), 9);
        let all: Vec<usize> = (0..9).collect();
        assert_eq!(invariant_of(&sys, &all).unwrap(), Invariant::Finite(3));
    }

    #[test]
    fn empty_realization_has_empty_invariant() {
        let sys = realize_invariant(&[], RealizeStyle::SimpleDense).unwrap();
        assert_eq!(sys.len(), 1);
        assert_eq!(invariant_of(&sys, &[0]).unwrap(), Invariant::Empty);
    }

    #[test]
    fn random_systems_are_deterministic_and_degenerated() {
        assert_eq!(random_system(7, 1).unwrap(), random_system(7, 1).unwrap());
        for seed in 0..40 {
            let sys = random_system(1 + seed as usize % 12, seed).unwrap();
            assert!(check_axioms(&sys, Budget::default()).is_closure());
            quotient(&sys).unwrap();
        }
        assert!(random_system(0, 0).is_err());
        assert!(random_system(65, 0).is_err());
    }
}
