//! Exact MaxCut by exhaustive enumeration, for small instances.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rounding::{cut_value, CutPartition};
use crate::weights::WeightMatrix;

/// Largest instance the enumeration accepts (about 2M partitions).
pub const MAX_BRUTE_FORCE_N: usize = 22;

const LOW_BITS: usize = 14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactCutResult {
    pub partition: CutPartition,
    pub value: f64,
    pub enumerated: u64,
}

/// Signs for `mask`: index 0 is always `+1`, bit `i - 1` set means `y_i = -1`.
fn signs_of(mask: u64, n: usize) -> Vec<i8> {
    let mut signs = vec![1i8; n];
    for (i, s) in signs.iter_mut().enumerate().skip(1) {
        if mask >> (i - 1) & 1 == 1 {
            *s = -1;
        }
    }
    signs
}

#[derive(Clone, Copy)]
struct Best {
    value: f64,
    mask: u64,
}

impl Best {
    fn better(self, other: Best) -> Best {
        if other.value > self.value || (other.value == self.value && other.mask < self.mask) {
            other
        } else {
            self
        }
    }
}

/// Walks the Gray code over the low bits of `high << low`, tracking the cut
/// incrementally and confirming every near-best candidate with an exact
/// recomputation in canonical summation order.
fn search_block(w: &WeightMatrix, n: usize, high: u64, low: usize, tol: f64) -> Best {
    let start = high << low;
    let mut signs = signs_of(start, n);
    let mut current = cut_value(w, &signs);
    let mut best = Best {
        value: current,
        mask: start,
    };
    let mut mask = start;
    for step in 1u64..(1u64 << low) {
        let bit = step.trailing_zeros() as usize;
        let k = bit + 1;
        let mut delta = 0.0;
        for j in 0..n {
            if j != k {
                let wkj = w.get(k, j);
                delta += if signs[j] == signs[k] { wkj } else { -wkj };
            }
        }
        signs[k] = -signs[k];
        mask ^= 1 << bit;
        current += delta;
        if current >= best.value - tol {
            let exact = cut_value(w, &signs);
            best = best.better(Best { value: exact, mask });
        }
    }
    best
}

/// Enumerates all `2^(n-1)` partitions with `y_0 = +1` and returns a maximum
/// cut. Ties go to the smallest mask, independent of how the search is split.
pub fn brute_force_maxcut(w: &WeightMatrix) -> Result<ExactCutResult> {
    let n = w.size();
    if n > MAX_BRUTE_FORCE_N {
        return Err(Error::Capacity {
            n,
            max: MAX_BRUTE_FORCE_N,
        });
    }
    let free = n.saturating_sub(1);
    let low = free.min(LOW_BITS);
    let high = free - low;
    let tol = 1e-9 * (1.0 + w.total_weight());
    let best = (0..(1u64 << high))
        .into_par_iter()
        .map(|h| search_block(w, n, h, low, tol))
        .reduce_with(Best::better)
        .expect("at least one block");
    let partition = CutPartition::from_signs(w, signs_of(best.mask, n))?;
    Ok(ExactCutResult {
        value: partition.cut_value,
        partition,
        enumerated: 1u64 << free,
    })
}
