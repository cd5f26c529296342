use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::system::{members, set_of, Closure, ElemSet};
use super::table::{ones, ClosureTable};

/// How hard [`check_axioms`] tries: exhaustive up to `exhaustive_limit`
/// elements, seeded sampling above it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub exhaustive_limit: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self { exhaustive_limit: 14, samples: 4096, seed: 0 }
    }
}

/// A concrete failure of one axiom, in element indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum AxiomWitness {
    /// `X ⊆ Y` but `X ⊄ cl(X)` (when `x == y`) or `cl(X) ⊄ cl(Y)`.
    Monotone { x: Vec<usize>, y: Vec<usize> },
    /// `cl(X) ≠ ⋃ { cl(X0) | X0 ⊆ X finite }` because `cl(sub) ⊄ cl(X)`.
    FiniteCharacter { x: Vec<usize>, sub: Vec<usize> },
    Transitive { x: Vec<usize> },
    /// `b ∈ cl(X ∪ {a}) \ cl(X)` but `a ∉ cl(X ∪ {b})`.
    Exchange { x: Vec<usize>, a: usize, b: usize },
    Degenerated { x: Vec<usize> },
    TotallyDegenerated { x: Vec<usize> },
}

impl AxiomWitness {
    /// Re-checks the failure against the closure oracle.
    pub fn confirms<C: Closure + ?Sized>(&self, sys: &C) -> bool {
        let n = sys.len();
        let s = |v: &[usize]| set_of(n, v.iter().copied());
        let in_range = |v: &[usize]| v.iter().all(|&e| e < n);
        match self {
            AxiomWitness::Monotone { x, y } => {
                if !in_range(x) || !in_range(y) || !s(x).is_subset(&s(y)) {
                    return false;
                }
                let cx = sys.close(&s(x));
                !s(x).is_subset(&cx) || !cx.is_subset(&sys.close(&s(y)))
            }
            AxiomWitness::FiniteCharacter { x, sub } => {
                in_range(x) && in_range(sub) && s(sub).is_subset(&s(x)) && !sys.close(&s(sub)).is_subset(&sys.close(&s(x)))
            }
            AxiomWitness::Transitive { x } => in_range(x) && {
                let c = sys.close(&s(x));
                sys.close(&c) != c
            },
            AxiomWitness::Exchange { x, a, b } => {
                if !in_range(x) || *a >= n || *b >= n {
                    return false;
                }
                let base = s(x);
                let mut xa = base.clone();
                xa.insert(*a);
                let mut xb = base.clone();
                xb.insert(*b);
                sys.close(&xa).contains(*b) && !sys.close(&base).contains(*b) && !sys.close(&xb).contains(*a)
            }
            AxiomWitness::Degenerated { x } => in_range(x) && sys.close(&s(x)) != union_of_points(sys, &s(x)),
            AxiomWitness::TotallyDegenerated { x } => {
                in_range(x) && !x.is_empty() && {
                    let c = sys.close(&s(x));
                    x.iter().all(|&e| sys.close_one(e) != c)
                }
            }
        }
    }
}

fn union_of_points<C: Closure + ?Sized>(sys: &C, x: &ElemSet) -> ElemSet {
    let mut u = sys.close_empty();
    for e in x.ones() {
        u.union_with(&sys.close_one(e));
    }
    u
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<AxiomWitness>,
}

impl AxiomCheck {
    fn from(witness: Option<AxiomWitness>) -> Self {
        Self { holds: witness.is_none(), witness }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub exhaustive: bool,
    pub subsets_checked: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub monotone: AxiomCheck,
    pub finite_character: AxiomCheck,
    pub transitive: AxiomCheck,
    pub exchange: AxiomCheck,
    pub degenerated: AxiomCheck,
    pub totally_degenerated: AxiomCheck,
    pub coverage: Coverage,
}

impl AxiomReport {
    /// Monotone, finite character and transitivity all hold.
    pub fn is_closure(&self) -> bool {
        self.monotone.holds && self.finite_character.holds && self.transitive.holds
    }

    /// A closure system where exchange fails.
    pub fn is_proper(&self) -> bool {
        self.is_closure() && !self.exchange.holds
    }

    pub fn first_closure_failure(&self) -> Option<&AxiomWitness> {
        [&self.monotone, &self.finite_character, &self.transitive]
            .into_iter()
            .find_map(|c| c.witness.as_ref())
    }
}

/// Checks the closure axioms, exchange and (total) degeneracy.
pub fn check_axioms<C: Closure + ?Sized>(sys: &C, budget: Budget) -> AxiomReport {
    let n = sys.len();
    if n <= budget.exhaustive_limit.min(ClosureTable::MAX) {
        exhaustive(&ClosureTable::new(sys).expect("size checked"))
    } else {
        sampled(sys, budget)
    }
}

fn v(m: u64) -> Vec<usize> {
    ones(m).collect()
}

fn exhaustive(t: &ClosureTable) -> AxiomReport {
    let n = t.len();
    let total = 1u64 << n;
    let mut monotone = None;
    let mut transitive = None;
    let mut exchange = None;
    let mut degenerated = None;
    let mut totally = None;
    let mut finite = None;
    let empty_cl = t.cl(0);
    let mut union = vec![0u64; total as usize];

    for m in 0..total {
        let c = t.cl(m);
        if monotone.is_none() {
            if c & m != m {
                monotone = Some(AxiomWitness::Monotone { x: v(m), y: v(m) });
            } else if let Some(x) = (0..n).find(|&x| m & 1 << x == 0 && c & !t.cl(m | 1 << x) != 0) {
                monotone = Some(AxiomWitness::Monotone { x: v(m), y: v(m | 1 << x) });
            }
        }
        if transitive.is_none() && t.cl(c) != c {
            transitive = Some(AxiomWitness::Transitive { x: v(m) });
        }
        if exchange.is_none() {
            'outer: for a in (0..n).rev() {
                let ca = t.cl(m | 1 << a);
                for b in (0..n).rev() {
                    if ca & 1 << b != 0 && c & 1 << b == 0 && t.cl(m | 1 << b) & 1 << a == 0 {
                        exchange = Some(AxiomWitness::Exchange { x: v(m), a, b });
                        break 'outer;
                    }
                }
            }
        }
        let points = ones(m).fold(empty_cl, |acc, x| acc | t.cl(1 << x));
        if degenerated.is_none() && c != points {
            degenerated = Some(AxiomWitness::Degenerated { x: v(m) });
        }
        if totally.is_none() && m != 0 && ones(m).all(|x| t.cl(1 << x) != c) {
            totally = Some(AxiomWitness::TotallyDegenerated { x: v(m) });
        }
        // Closure of all proper finite subsets, built bottom-up.
        let u = ones(m).fold(c, |acc, x| acc | union[(m & !(1 << x)) as usize]);
        union[m as usize] = u;
        if finite.is_none() && u != c {
            let mut sub = m;
            loop {
                if t.cl(sub) & !c != 0 {
                    finite = Some(AxiomWitness::FiniteCharacter { x: v(m), sub: v(sub) });
                    break;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & m;
            }
        }
    }

    AxiomReport {
        monotone: AxiomCheck::from(monotone),
        finite_character: AxiomCheck::from(finite),
        transitive: AxiomCheck::from(transitive),
        exchange: AxiomCheck::from(exchange),
        degenerated: AxiomCheck::from(degenerated),
        totally_degenerated: AxiomCheck::from(totally),
        coverage: Coverage { exhaustive: true, subsets_checked: total as usize, seed: None },
    }
}

fn sampled<C: Closure + ?Sized>(sys: &C, budget: Budget) -> AxiomReport {
    let n = sys.len();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let singles: Vec<ElemSet> = (0..n).map(|x| sys.close_one(x)).collect();
    let empty_cl = sys.close_empty();
    let mut monotone = None;
    let mut transitive = None;
    let mut exchange = None;
    let mut degenerated = None;
    let mut totally = None;
    let mut finite = None;

    for i in 0..budget.samples {
        // Alternate small and dense subsets so both regimes get coverage.
        let density = if i % 2 == 0 { 2.0 / n as f64 } else { 0.5 };
        let mut x = ElemSet::with_capacity(n);
        for e in 0..n {
            if rng.gen_bool(density.min(1.0)) {
                x.insert(e);
            }
        }
        let cx = sys.close(&x);
        let xs = members(&x);

        if monotone.is_none() {
            let mut y = x.clone();
            for _ in 0..rng.gen_range(1..=3) {
                y.insert(rng.gen_range(0..n));
            }
            if !x.is_subset(&cx) {
                monotone = Some(AxiomWitness::Monotone { x: xs.clone(), y: xs.clone() });
            } else if !cx.is_subset(&sys.close(&y)) {
                monotone = Some(AxiomWitness::Monotone { x: xs.clone(), y: members(&y) });
            }
        }
        if finite.is_none() {
            if let Some(&e) = xs.get(rng.gen_range(0..xs.len().max(1))) {
                if !singles[e].is_subset(&cx) {
                    finite = Some(AxiomWitness::FiniteCharacter { x: xs.clone(), sub: vec![e] });
                }
            }
        }
        if transitive.is_none() && sys.close(&cx) != cx {
            transitive = Some(AxiomWitness::Transitive { x: xs.clone() });
        }
        if exchange.is_none() {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let w = AxiomWitness::Exchange { x: xs.clone(), a, b };
            if w.confirms(sys) {
                exchange = Some(w);
            }
        }
        let mut points = empty_cl.clone();
        for &e in &xs {
            points.union_with(&singles[e]);
        }
        if degenerated.is_none() && cx != points {
            degenerated = Some(AxiomWitness::Degenerated { x: xs.clone() });
        }
        if totally.is_none() && !xs.is_empty() && xs.iter().all(|&e| singles[e] != cx) {
            totally = Some(AxiomWitness::TotallyDegenerated { x: xs });
        }
    }

    AxiomReport {
        monotone: AxiomCheck::from(monotone),
        finite_character: AxiomCheck::from(finite),
        transitive: AxiomCheck::from(transitive),
        exchange: AxiomCheck::from(exchange),
        degenerated: AxiomCheck::from(degenerated),
        totally_degenerated: AxiomCheck::from(totally),
        coverage: Coverage { exhaustive: false, subsets_checked: budget.samples, seed: Some(budget.seed) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::{cl_from_poset, BaseOrder, Construction};

    #[test]
    fn chain_down_closure_fails_exchange_at_empty_set() {
        let sys = cl_from_poset(Construction::Down, BaseOrder::chain(3), vec![]).unwrap();
        let r = check_axioms(&sys, Budget::default());
        assert!(r.is_closure());
        assert_eq!(r.exchange.witness, Some(AxiomWitness::Exchange { x: vec![], a: 2, b: 1 }));
        assert!(r.totally_degenerated.holds);
    }

    #[test]
    fn identity_is_not_totally_degenerated() {
        let sys = cl_from_poset(Construction::Identity, BaseOrder::antichain(3), vec![]).unwrap();
        let r = check_axioms(&sys, Budget::default());
        assert!(r.exchange.holds);
        assert!(r.degenerated.holds);
        assert_eq!(r.totally_degenerated.witness, Some(AxiomWitness::TotallyDegenerated { x: vec![0, 1] }));
    }

    #[test]
    fn witnesses_are_confirmed_by_the_oracle() {
        let sys = cl_from_poset(Construction::Striped, BaseOrder::chain(2), vec![]).unwrap();
        let r = check_axioms(&sys, Budget::default());
        let w = r.totally_degenerated.witness.clone().unwrap();
        assert!(w.confirms(&sys));
        assert!(r.exchange.witness.unwrap().confirms(&sys));
    }

    #[test]
    fn sampled_mode_reports_seed() {
        let sys = cl_from_poset(Construction::Down, BaseOrder::chain(30), vec![]).unwrap();
        let r = check_axioms(&sys, Budget { samples: 200, ..Budget::default() });
        assert!(!r.coverage.exhaustive);
        assert_eq!(r.coverage.seed, Some(0));
        assert!(r.is_closure());
        assert!(r.totally_degenerated.holds);
    }
}
