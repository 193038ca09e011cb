//! Finite-scale meet-or-avoid check against a finite set of strings.

use std::collections::BTreeSet;
use std::ops::Bound;

use serde::{Deserialize, Serialize};

use crate::oracle::Oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "n", rename_all = "snake_case")]
pub enum GenericityVerdict {
    /// `A↾n ∈ W`, least such `n ≤ bound`.
    Meets(u64),
    /// No member of `W` extends `A↾n`, least such `n ≤ bound`.
    AvoidsLocally(u64),
    Undetermined(u64),
}

/// `w` holds strings over `{0, 1}`. Meeting takes precedence over avoiding.
pub fn meets_or_avoids(a: &Oracle, w: &BTreeSet<String>, bound: u64) -> GenericityVerdict {
    let prefix = a.prefix(bound);
    if let Some(n) = (0..=bound).find(|&n| w.contains(&prefix[..n as usize])) {
        return GenericityVerdict::Meets(n);
    }
    // BTreeSet order puts every extension of σ in the range starting at σ
    match (0..=bound).find(|&n| {
        let sigma = &prefix[..n as usize];
        w.range::<str, _>((Bound::Included(sigma), Bound::Unbounded))
            .next()
            .is_none_or(|tau| !tau.starts_with(sigma))
    }) {
        Some(n) => GenericityVerdict::AvoidsLocally(n),
        None => GenericityVerdict::Undetermined(bound),
    }
}
