//! Exhaustive oracles. These share no counting code with the engines they
//! check.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use super::HarnessError;
use crate::oracle::Oracle;
use crate::randomness::{ConstraintSet, DyadicRational, GenericityVerdict};
use crate::Nat;

/// Largest coordinate count [`brute_measure`] accepts.
pub const MAX_BRUTE_COORDINATES: usize = 24;

/// Counts satisfying assignments over all `2^V` assignments.
pub fn brute_measure(cs: &ConstraintSet) -> Result<DyadicRational, HarnessError> {
    let mut coords: Vec<&Nat> = Vec::new();
    for (a, b) in cs.pairs() {
        for x in [a, b] {
            if !coords.contains(&x) {
                coords.push(x);
            }
        }
    }
    let v = coords.len();
    if v > MAX_BRUTE_COORDINATES {
        return Err(HarnessError::TooManyCoordinates(v));
    }
    let edges: Vec<(usize, usize)> = cs
        .pairs()
        .iter()
        .map(|(a, b)| {
            let i = coords.iter().position(|c| *c == a).expect("collected");
            let j = coords.iter().position(|c| *c == b).expect("collected");
            (i, j)
        })
        .collect();
    let satisfying = (0u64..1 << v)
        .filter(|assignment| {
            edges
                .iter()
                .all(|&(i, j)| (assignment >> i) & 1 == (assignment >> j) & 1)
        })
        .count();
    Ok(DyadicRational::new(BigUint::from(satisfying), v as u64))
}

/// Exhaustive counterpart of [`crate::randomness::meets_or_avoids`]:
/// avoidance at `n` is decided by enumerating every string that extends
/// `A↾n` up to the longest member of `w`.
pub fn brute_meets_or_avoids(a: &Oracle, w: &BTreeSet<String>, bound: u64) -> GenericityVerdict {
    let bits: Vec<char> = (0..bound)
        .map(|i| if a.query_u64(i) { '1' } else { '0' })
        .collect();
    let prefix = |n: u64| bits[..n as usize].iter().collect::<String>();
    for n in 0..=bound {
        let sigma = prefix(n);
        if w.iter().any(|s| *s == sigma) {
            return GenericityVerdict::Meets(n);
        }
    }
    let longest = w.iter().map(|s| s.len()).max().unwrap_or(0);
    for n in 0..=bound {
        let sigma = prefix(n);
        let mut extended = false;
        for len in sigma.len()..=longest.max(sigma.len()) {
            let extra = len - sigma.len();
            for tail in 0u64..1 << extra {
                let mut tau = sigma.clone();
                for k in (0..extra).rev() {
                    tau.push(if (tail >> k) & 1 == 1 { '1' } else { '0' });
                }
                if w.contains(&tau) {
                    extended = true;
                }
            }
        }
        if !extended {
            return GenericityVerdict::AvoidsLocally(n);
        }
    }
    GenericityVerdict::Undetermined(bound)
}
