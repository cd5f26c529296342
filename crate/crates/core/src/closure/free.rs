use serde::{Deserialize, Serialize};

use super::quotient::quotient;
use super::system::{set_of, Closure};
use super::table::{mask_of, ClosureTable};
use super::ClosureError;

pub type FreeSequence = Vec<usize>;

/// Common length of all maximal free sequences in a subset, `Empty` when
/// there are none.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariant {
    Empty,
    Finite(usize),
}

impl Invariant {
    pub fn from_len(k: usize) -> Self {
        if k == 0 {
            Invariant::Empty
        } else {
            Invariant::Finite(k)
        }
    }

    pub fn len(self) -> usize {
        match self {
            Invariant::Empty => 0,
            Invariant::Finite(k) => k,
        }
    }

    pub fn is_empty(self) -> bool {
        self == Invariant::Empty
    }
}

impl std::fmt::Display for Invariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Invariant::Empty => f.write_str("∅"),
            Invariant::Finite(k) => write!(f, "{k}"),
        }
    }
}

/// Each term lies outside `cl(∅)` and outside the closure of its prefix.
pub fn is_free<C: Closure + ?Sized>(sys: &C, seq: &[usize]) -> Result<bool, ClosureError> {
    let n = sys.len();
    if let Some(&e) = seq.iter().find(|&&e| e >= n) {
        return Err(ClosureError::OutOfRange(e));
    }
    let mut prefix = set_of(n, []);
    for &e in seq {
        if sys.close(&prefix).contains(e) {
            return Ok(false);
        }
        prefix.insert(e);
    }
    Ok(true)
}

/// Largest carrier for which [`enumerate_maximal_free`] enumerates every
/// maximal free sequence rather than returning one representative.
pub const EXHAUSTIVE_FREE_LIMIT: usize = 9;

/// Maximal free sequences inside `X`. Exhaustive for carriers of at most
/// nine elements; above that a single representative is returned.
pub fn enumerate_maximal_free<C: Closure + ?Sized>(sys: &C, x: &[usize]) -> Result<Vec<FreeSequence>, ClosureError> {
    let n = sys.len();
    if let Some(&e) = x.iter().find(|&&e| e >= n) {
        return Err(ClosureError::OutOfRange(e));
    }
    let q = quotient(sys)?;
    if n <= EXHAUSTIVE_FREE_LIMIT {
        Ok(exhaustive_maximal_free(&ClosureTable::new(sys)?, x))
    } else {
        Ok(vec![q.greedy_free(x)])
    }
}

pub fn invariant_of<C: Closure + ?Sized>(sys: &C, x: &[usize]) -> Result<Invariant, ClosureError> {
    if let Some(&e) = x.iter().find(|&&e| e >= sys.len()) {
        return Err(ClosureError::OutOfRange(e));
    }
    Ok(quotient(sys)?.invariant_of(x))
}

/// Every maximal free sequence inside `X`, found by depth-first search over
/// free prefixes. Maximality means no element of `X` can be inserted at any
/// position while keeping the sequence free.
pub fn exhaustive_maximal_free(t: &ClosureTable, x: &[usize]) -> Vec<FreeSequence> {
    let cand = mask_of(x) & !t.cl(0);
    let mut out = Vec::new();
    let mut seq = Vec::new();
    dfs(t, cand, &mut seq, 0, &mut out);
    out
}

fn dfs(t: &ClosureTable, cand: u64, seq: &mut Vec<usize>, seq_mask: u64, out: &mut Vec<FreeSequence>) {
    let next = cand & !t.cl(seq_mask);
    if next == 0 {
        if is_maximal(t, cand, seq) {
            out.push(seq.clone());
        }
        return;
    }
    for e in super::table::ones(next) {
        seq.push(e);
        dfs(t, cand, seq, seq_mask | 1 << e, out);
        seq.pop();
    }
}

fn is_maximal(t: &ClosureTable, cand: u64, seq: &[usize]) -> bool {
    let seq_mask = mask_of(seq);
    for e in super::table::ones(cand & !seq_mask) {
        'pos: for i in 0..=seq.len() {
            let mut prefix = mask_of(&seq[..i]);
            if t.cl(prefix) & 1 << e != 0 {
                continue;
            }
            prefix |= 1 << e;
            for &s in &seq[i..] {
                if t.cl(prefix) & 1 << s != 0 {
                    continue 'pos;
                }
                prefix |= 1 << s;
            }
            return false;
        }
    }
    true
}
