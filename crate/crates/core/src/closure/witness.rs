use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::quotient::{quotient, QuotientOrder};
use super::system::{Closure, ClosureSystem, ElemSet};
use super::ClosureError;

/// A strict order on the carrier, stored as `above[x] = { y | x < y }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessOrder {
    above: Vec<ElemSet>,
}

impl WitnessOrder {
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, ClosureError> {
        let mut above = vec![ElemSet::with_capacity(n); n];
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(ClosureError::OutOfRange(x.max(y)));
            }
            above[x].insert(y);
        }
        Ok(Self { above })
    }

    pub fn from_above(above: Vec<ElemSet>) -> Self {
        let n = above.len();
        Self { above: above.into_iter().map(|mut s| { s.grow(n); s }).collect() }
    }

    pub fn len(&self) -> usize {
        self.above.len()
    }

    pub fn is_empty(&self) -> bool {
        self.above.is_empty()
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.above[x].contains(y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        x == y || self.lt(x, y) || self.lt(y, x)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.above.iter().enumerate().flat_map(|(x, s)| s.ones().map(move |y| (x, y))).collect()
    }

    /// Adds every pair forced by transitivity.
    pub fn transitive_closure(mut self) -> Self {
        loop {
            let mut changed = false;
            for x in 0..self.len() {
                let mut acc = self.above[x].clone();
                for y in self.above[x].ones() {
                    acc.union_with(&self.above[y]);
                }
                if acc != self.above[x] {
                    self.above[x] = acc;
                    changed = true;
                }
            }
            if !changed {
                return self;
            }
        }
    }

    /// Irreflexive and transitive (hence asymmetric).
    pub fn check_strict(&self) -> Result<(), ClosureError> {
        for x in 0..self.len() {
            if self.lt(x, x) {
                return Err(ClosureError::NotStrictOrder(format!("{x} < {x}")));
            }
            for y in self.above[x].ones() {
                if let Some(z) = self.above[y].ones().find(|&z| !self.lt(x, z)) {
                    return Err(ClosureError::NotStrictOrder(format!("{x} < {y} < {z} but not {x} < {z}")));
                }
            }
        }
        Ok(())
    }
}

/// Whether the non-closed part of the carrier is convex in its ambient chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientConvexity {
    pub convex: bool,
    /// `(x, foreign point, y)` with the foreign point strictly between.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<(String, String, String)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    /// Free pairs `(x, y)` with `x ≮ y`.
    pub free_pair_violations: Vec<(usize, usize)>,
    /// `(x, z, y)` with `x < z < y`, `x, y` in one class and `z` outside it.
    pub convexity_violations: Vec<(usize, usize, usize)>,
    /// `(x, z)` incomparable with `z` outside the class of `x`.
    pub incomparability_violations: Vec<(usize, usize)>,
    /// Convexity of the locus under the witness order restricted to it.
    pub locus_convex: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<AmbientConvexity>,
}

impl WitnessReport {
    pub fn free_pairs_increasing(&self) -> bool {
        self.free_pair_violations.is_empty()
    }

    pub fn classes_convex(&self) -> bool {
        self.convexity_violations.is_empty()
    }

    pub fn incomparability_closed(&self) -> bool {
        self.incomparability_violations.is_empty()
    }

    pub fn passes(&self) -> bool {
        self.free_pairs_increasing() && self.classes_convex() && self.incomparability_closed()
    }
}

/// The class order lifted to elements: `x < y ⟺ ℰ(x) < ℰ(y)`.
pub fn build_witness_order<C: Closure + ?Sized>(sys: &C) -> Result<WitnessOrder, ClosureError> {
    Ok(canonical(&quotient(sys)?))
}

fn canonical(q: &QuotientOrder) -> WitnessOrder {
    let n = q.carrier_len();
    let mut above = vec![ElemSet::with_capacity(n); n];
    for x in 0..n {
        for y in 0..n {
            if let (Some(a), Some(b)) = (q.class_of(x), q.class_of(y)) {
                if a < b {
                    above[x].insert(y);
                }
            }
        }
    }
    WitnessOrder { above }
}

/// Checks that free pairs increase and that every class is convex and closed
/// under incomparability, all on the locus `P \ cl(∅)`.
pub fn verify_witness(sys: &ClosureSystem, w: &WitnessOrder) -> Result<WitnessReport, ClosureError> {
    let mut report = verify_on(sys, &quotient(sys)?, w)?;
    report.ambient = ambient_convexity(sys);
    Ok(report)
}

pub(crate) fn verify_on<C: Closure + ?Sized>(
    sys: &C,
    q: &QuotientOrder,
    w: &WitnessOrder,
) -> Result<WitnessReport, ClosureError> {
    let n = sys.len();
    if w.len() != n {
        return Err(ClosureError::Arity(format!("order on {} elements for a carrier of {n}", w.len())));
    }
    w.check_strict()?;
    let locus: Vec<usize> = (0..n).filter(|&x| q.class_of(x).is_some()).collect();
    let singles: Vec<ElemSet> = (0..n).map(|x| sys.close_one(x)).collect();
    let mut report = WitnessReport { locus_convex: true, ..WitnessReport::default() };

    for &x in &locus {
        for &y in &locus {
            if x != y && !singles[x].contains(y) && !w.lt(x, y) {
                report.free_pair_violations.push((x, y));
            }
        }
    }
    for &x in &locus {
        for &y in &locus {
            if !w.lt(x, y) || q.class_of(x) != q.class_of(y) {
                continue;
            }
            for &z in &locus {
                if w.lt(x, z) && w.lt(z, y) && q.class_of(z) != q.class_of(x) {
                    report.convexity_violations.push((x, z, y));
                }
            }
        }
    }
    for &x in &locus {
        for &z in &locus {
            if !w.comparable(x, z) && q.class_of(z) != q.class_of(x) {
                report.incomparability_violations.push((x, z));
            }
        }
    }
    // The locus is the whole domain of the restricted order, so it is convex
    // there unless an element of cl(∅) sits between two locus elements.
    for &x in &locus {
        for z in (0..n).filter(|z| q.class_of(*z).is_none()) {
            if w.lt(x, z) && locus.iter().any(|&y| w.lt(z, y)) {
                report.locus_convex = false;
            }
        }
    }
    Ok(report)
}

fn ambient_convexity(sys: &ClosureSystem) -> Option<AmbientConvexity> {
    let amb = sys.ambient()?;
    let base = sys.close_empty();
    let mut owner = vec![None; amb.size];
    for (e, &p) in amb.positions.iter().enumerate() {
        owner[p] = Some(e);
    }
    let label = |p: usize| match owner[p] {
        Some(e) => sys.carrier().id(e).to_string(),
        None => amb.labels.get(p).cloned().unwrap_or_else(|| format!("#{p}")),
    };
    let in_locus = |p: usize| owner[p].is_some_and(|e| !base.contains(e));
    let locus_pos: Vec<usize> = (0..amb.size).filter(|&p| in_locus(p)).collect();
    let (Some(&lo), Some(&hi)) = (locus_pos.first(), locus_pos.last()) else {
        return Some(AmbientConvexity { convex: true, witness: None });
    };
    for p in lo..=hi {
        if !in_locus(p) {
            let before = *locus_pos.iter().rev().find(|&&q| q < p).expect("lo < p");
            let after = *locus_pos.iter().find(|&&q| q > p).expect("p < hi");
            return Some(AmbientConvexity { convex: false, witness: Some((label(before), label(p), label(after))) });
        }
    }
    Some(AmbientConvexity { convex: true, witness: None })
}

/// The canonical witness order plus a random strict order inside each class.
pub fn random_witness_extension<R: Rng + ?Sized>(q: &QuotientOrder, rng: &mut R) -> WitnessOrder {
    let mut w = canonical(q);
    for class in q.classes() {
        let mut perm = class.clone();
        perm.shuffle(rng);
        for i in 0..perm.len() {
            for j in i + 1..perm.len() {
                if rng.gen_bool(0.5) {
                    w.above[perm[i]].insert(perm[j]);
                }
            }
        }
    }
    w.transitive_closure()
}

/// A random strict order on `0..n`: a shuffled chain with each forward pair
/// kept with probability `density`, then transitively closed.
pub fn random_order<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> WitnessOrder {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut above = vec![ElemSet::with_capacity(n); n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                above[perm[i]].insert(perm[j]);
            }
        }
    }
    WitnessOrder { above }.transitive_closure()
}
