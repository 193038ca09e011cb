//! Backtracking search for injective window-consistent maps.

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::oracle::Oracle;

/// Largest domain [`brute_search_reduction`] accepts.
pub const MAX_SEARCH_DOMAIN: u64 = 24;

/// Fixed wording for an empty search; it never claims more than the bounds.
pub const NONE_WITHIN_NOTE: &str = "no injective window-consistent map within bounds";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum SearchResult {
    /// `map[z]` is the image of `z`.
    Found { map: Vec<u64> },
    NoneWithin {
        domain_bound: u64,
        range_bound: u64,
        note: String,
    },
}

/// Looks for an injective `h: [0, domain_bound) → [0, range_bound)` with
/// `src(z) = tgt(h(z))` for every `z`. Candidates are tried in increasing
/// order, so when `src = tgt` the identity is found first.
pub fn brute_search_reduction(
    src: &Oracle,
    tgt: &Oracle,
    domain_bound: u64,
    range_bound: u64,
) -> Result<SearchResult, HarnessError> {
    if domain_bound > MAX_SEARCH_DOMAIN {
        return Err(HarnessError::DomainTooLarge(domain_bound));
    }
    let src_bits = src.prefix_bits(domain_bound);
    let tgt_bits = tgt.prefix_bits(range_bound);
    let mut used = vec![false; range_bound as usize];
    let mut map = Vec::with_capacity(domain_bound as usize);
    if extend(&src_bits, &tgt_bits, &mut used, &mut map) {
        Ok(SearchResult::Found { map })
    } else {
        Ok(SearchResult::NoneWithin {
            domain_bound,
            range_bound,
            note: NONE_WITHIN_NOTE.to_string(),
        })
    }
}

fn extend(src: &[bool], tgt: &[bool], used: &mut [bool], map: &mut Vec<u64>) -> bool {
    let z = map.len();
    if z == src.len() {
        return true;
    }
    // prune: every remaining source bit needs an unused target of equal value
    for bit in [false, true] {
        let need = src[z..].iter().filter(|&&b| b == bit).count();
        let free = tgt
            .iter()
            .zip(used.iter())
            .filter(|&(&b, &u)| b == bit && !u)
            .count();
        if need > free {
            return false;
        }
    }
    for y in 0..tgt.len() {
        if used[y] || tgt[y] != src[z] {
            continue;
        }
        used[y] = true;
        map.push(y as u64);
        if extend(src, tgt, used, map) {
            return true;
        }
        map.pop();
        used[y] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paramsets::PeriodicSet;

    #[test]
    fn identity_when_equal() {
        let a = Oracle::seeded_random(3);
        let r = brute_search_reduction(&a, &a, 20, 20).unwrap();
        assert_eq!(
            r,
            SearchResult::Found {
                map: (0..20).collect()
            }
        );
    }

    #[test]
    fn none_within_bounds() {
        let ones = Oracle::from_set(PeriodicSet::full());
        let zeros = Oracle::from_set(PeriodicSet::empty());
        let r = brute_search_reduction(&ones, &zeros, 1, 8).unwrap();
        assert!(matches!(r, SearchResult::NoneWithin { ref note, .. } if note == NONE_WITHIN_NOTE));
        assert_eq!(
            brute_search_reduction(&ones, &zeros, 25, 30),
            Err(HarnessError::DomainTooLarge(25))
        );
    }

    #[test]
    fn found_maps_are_valid() {
        let src = Oracle::seeded_random(1);
        let tgt = Oracle::seeded_random(2);
        if let SearchResult::Found { map } = brute_search_reduction(&src, &tgt, 16, 48).unwrap() {
            let mut seen = std::collections::HashSet::new();
            for (z, &y) in map.iter().enumerate() {
                assert!(seen.insert(y));
                assert_eq!(src.query_u64(z as u64), tgt.query_u64(y));
            }
        }
    }
}
