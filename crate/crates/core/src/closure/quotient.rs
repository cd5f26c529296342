use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::axioms::{check_axioms, AxiomWitness, Budget};
use super::free::Invariant;
use super::system::{members, set_of, Carrier, Closure, ElemSet};
use super::ClosureError;

/// The classes `ℰ(x)` of a totally degenerated closure system together with
/// their linear order `ℰ(x) < ℰ(y) ⟺ cl(x) ⊊ cl(y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientOrder {
    n: usize,
    base: ElemSet,
    classes: Vec<Vec<usize>>,
    class_of: Vec<Option<usize>>,
    /// Union of `cl(∅)` and every class up to and including this one.
    prefix: Vec<ElemSet>,
}

/// Serializable view of a quotient with element ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientDescription {
    pub base: Vec<String>,
    pub classes: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureVerdict {
    pub holds: bool,
    /// In `cl(X)` but not predicted by the class structure.
    pub missing: Vec<usize>,
    /// Predicted by the class structure but not in `cl(X)`.
    pub unexpected: Vec<usize>,
}

/// Computes the class quotient, rejecting systems that are not closures or
/// not totally degenerated.
pub fn quotient<C: Closure + ?Sized>(sys: &C) -> Result<QuotientOrder, ClosureError> {
    let report = check_axioms(sys, Budget::default());
    if let Some(w) = report.first_closure_failure() {
        return Err(ClosureError::NotClosure(w.clone()));
    }
    if let Some(AxiomWitness::TotallyDegenerated { x }) = report.totally_degenerated.witness {
        return Err(ClosureError::NotTotallyDegenerated(x));
    }
    QuotientOrder::from_singletons(sys)
}

/// Checks `cl(X) = cl(∅) ∪ ⋃ { ℰ(y) | ∃x ∈ X. π(y) ≤ π(x) }`.
pub fn structure_check<C: Closure + ?Sized>(sys: &C, x: &[usize]) -> Result<StructureVerdict, ClosureError> {
    let q = quotient(sys)?;
    q.structure_check(sys, x)
}

impl QuotientOrder {
    /// Groups elements by the closure of their singleton and orders the
    /// groups by inclusion. Assumes the closure axioms hold.
    pub fn from_singletons<C: Closure + ?Sized>(sys: &C) -> Result<Self, ClosureError> {
        let n = sys.len();
        let base = sys.close_empty();
        let mut groups: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        let mut closures: HashMap<Vec<usize>, ElemSet> = HashMap::new();
        for x in (0..n).filter(|&x| !base.contains(x)) {
            let c = sys.close_one(x);
            let key = members(&c);
            groups.entry(key.clone()).or_default().push(x);
            closures.entry(key).or_insert(c);
        }
        let mut keyed: Vec<(Vec<usize>, Vec<usize>)> = groups.into_iter().collect();
        keyed.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.1[0].cmp(&b.1[0])));
        for w in keyed.windows(2) {
            let (lo, hi) = (&closures[&w[0].0], &closures[&w[1].0]);
            if !lo.is_subset(hi) {
                return Err(ClosureError::NotTotallyDegenerated(vec![w[0].1[0], w[1].1[0]]));
            }
        }
        let mut class_of = vec![None; n];
        let mut classes = Vec::with_capacity(keyed.len());
        let mut prefix = Vec::with_capacity(keyed.len());
        let mut acc = base.clone();
        for (i, (_, elems)) in keyed.into_iter().enumerate() {
            for &e in &elems {
                class_of[e] = Some(i);
                acc.insert(e);
            }
            prefix.push(acc.clone());
            classes.push(elems);
        }
        Ok(Self { n, base, classes, class_of, prefix })
    }

    pub fn carrier_len(&self) -> usize {
        self.n
    }

    /// Number of classes.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn base(&self) -> &ElemSet {
        &self.base
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Position of `x`'s class in the order, or `None` for elements of `cl(∅)`.
    pub fn class_of(&self, x: usize) -> Option<usize> {
        self.class_of[x]
    }

    /// The closure predicted by the class structure.
    pub fn predicted_closure(&self, x: &[usize]) -> ElemSet {
        match x.iter().filter_map(|&e| self.class_of[e]).max() {
            Some(top) => self.prefix[top].clone(),
            None => self.base.clone(),
        }
    }

    pub fn structure_check<C: Closure + ?Sized>(&self, sys: &C, x: &[usize]) -> Result<StructureVerdict, ClosureError> {
        if let Some(&e) = x.iter().find(|&&e| e >= self.n) {
            return Err(ClosureError::OutOfRange(e));
        }
        let actual = sys.close(&set_of(self.n, x.iter().copied()));
        let predicted = self.predicted_closure(x);
        let missing = members(&actual.difference(&predicted).collect::<ElemSet>());
        let unexpected = members(&predicted.difference(&actual).collect::<ElemSet>());
        Ok(StructureVerdict { holds: missing.is_empty() && unexpected.is_empty(), missing, unexpected })
    }

    /// Number of classes meeting `X \ cl(∅)`.
    pub fn invariant_of(&self, x: &[usize]) -> Invariant {
        let mut seen = vec![false; self.classes.len()];
        for &e in x {
            if let Some(c) = self.class_of.get(e).copied().flatten() {
                seen[c] = true;
            }
        }
        match seen.iter().filter(|&&s| s).count() {
            0 => Invariant::Empty,
            k => Invariant::Finite(k),
        }
    }

    /// One maximal free sequence inside `X`: the lowest element of each
    /// class met by `X`, in class order.
    pub fn greedy_free(&self, x: &[usize]) -> Vec<usize> {
        let mut best: Vec<Option<usize>> = vec![None; self.classes.len()];
        for &e in x {
            if let Some(c) = self.class_of.get(e).copied().flatten() {
                best[c] = Some(best[c].map_or(e, |b: usize| b.min(e)));
            }
        }
        best.into_iter().flatten().collect()
    }

    pub fn describe(&self, carrier: &Carrier) -> QuotientDescription {
        let ids = |v: &mut dyn Iterator<Item = usize>| v.map(|i| carrier.id(i).to_string()).collect::<Vec<_>>();
        QuotientDescription {
            base: ids(&mut self.base.ones()),
            classes: self.classes.iter().map(|c| ids(&mut c.iter().copied())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::{cl_from_poset, BaseOrder, Construction, FiberSpec};

    #[test]
    fn linear_fibered_classes_are_fibers() {
        let sys = cl_from_poset(
            Construction::LinearFibered,
            BaseOrder::chain(2),
            vec![FiberSpec::Size(2), FiberSpec::Size(3)],
        )
        .unwrap();
        let q = quotient(&sys).unwrap();
        assert_eq!(q.classes(), &[vec![0, 1], vec![2, 3, 4]]);
        assert!(q.structure_check(&sys, &[1, 2]).unwrap().holds);
    }

    #[test]
    fn striped_is_rejected_with_confirmed_witness() {
        let sys = cl_from_poset(Construction::Striped, BaseOrder::chain(2), vec![]).unwrap();
        match quotient(&sys) {
            Err(ClosureError::NotTotallyDegenerated(x)) => {
                assert!(AxiomWitness::TotallyDegenerated { x }.confirms(&sys));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
