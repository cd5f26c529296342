use super::system::{set_of, Closure};
use super::ClosureError;

/// Closure of every subset of a small carrier, keyed by bitmask.
#[derive(Clone, Debug)]
pub struct ClosureTable {
    n: usize,
    cl: Vec<u64>,
}

impl ClosureTable {
    pub const MAX: usize = 20;

    pub fn new<C: Closure + ?Sized>(sys: &C) -> Result<Self, ClosureError> {
        let n = sys.len();
        if n > Self::MAX {
            return Err(ClosureError::TooLarge(n));
        }
        let cl = (0..1u64 << n)
            .map(|m| {
                let s = sys.close(&set_of(n, ones(m)));
                s.ones().filter(|&i| i < 64).fold(0u64, |acc, i| acc | 1 << i)
            })
            .collect();
        Ok(Self { n, cl })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn cl(&self, mask: u64) -> u64 {
        self.cl[mask as usize]
    }

    pub fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }
}

pub(crate) fn ones(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub(crate) fn mask_of(elems: &[usize]) -> u64 {
    elems.iter().fold(0, |acc, &e| acc | 1 << e)
}
