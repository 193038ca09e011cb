//! Martin-Löf test levels for `Fix(k)` with exactly computed measures.
//!
//! For a total `k` with infinitely many non-fixed points, pick a fresh
//! sequence `x₀ < x₁ < …` of non-fixed points, each above every coordinate
//! used before it. Level `U_n` asks `A(x_i) = A(k(x_i))` for `i < n`; each new
//! constraint touches a fresh coordinate, so it halves the measure exactly
//! and `μ(U_n) = 2^-n`. Every `A ∈ Fix(k)` lies in every level.

mod constraints;
mod dyadic;
mod genericity;

pub use constraints::ConstraintSet;
pub use dyadic::DyadicRational;
pub use genericity::{meets_or_avoids, GenericityVerdict};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::funcdsl::FuncTerm;
use crate::oracle::{derive_seed, Oracle};
use crate::Nat;

/// Default bound for the fresh-sequence search.
pub const DEFAULT_SEARCH_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RandomnessError {
    #[error("only {found} of {needed} fresh non-fixed points below the search cap")]
    NotEnoughNonFixedPoints { found: usize, needed: usize },
    #[error("experiment needs at least one trial")]
    EmptyExperiment,
    #[error("constraint A({0}) = A({0}) is not a pair of distinct coordinates")]
    EqualEndpoints(Nat),
}

/// Greedy-minimal fresh sequence of length `n` below `search_cap`.
pub fn fresh_sequence(
    k: &FuncTerm,
    n: usize,
    search_cap: u64,
) -> Result<Vec<Nat>, RandomnessError> {
    let mut out = Vec::with_capacity(n);
    let mut lower = 0u64;
    while out.len() < n {
        let found = (lower..search_cap).find_map(|x| {
            let x = Nat::from(x);
            let image = k.eval(&x);
            (image != x).then_some((x, image))
        });
        let Some((x, image)) = found else {
            return Err(RandomnessError::NotEnoughNonFixedPoints {
                found: out.len(),
                needed: n,
            });
        };
        let next = x.clone().max(image) + 1u32;
        out.push(x);
        match u64::try_from(&next) {
            Ok(v) => lower = v,
            Err(_) if out.len() < n => {
                return Err(RandomnessError::NotEnoughNonFixedPoints {
                    found: out.len(),
                    needed: n,
                })
            }
            Err(_) => {}
        }
    }
    Ok(out)
}

/// Level `U_n`: pairs `(x_i, k(x_i))` for `i < n`.
pub fn test_level(
    k: &FuncTerm,
    n: usize,
    search_cap: u64,
) -> Result<ConstraintSet, RandomnessError> {
    let xs = fresh_sequence(k, n, search_cap)?;
    ConstraintSet::from_pairs(xs.into_iter().map(|x| {
        let image = k.eval(&x);
        (x, image)
    }))
}

pub fn exact_measure(cs: &ConstraintSet) -> DyadicRational {
    cs.exact_measure()
}

pub fn level_contains(cs: &ConstraintSet, a: &Oracle) -> bool {
    cs.pairs().iter().all(|(p, q)| a.query(p) == a.query(q))
}

/// Least `x < bound` with `A(x) ≠ A(k(x))`; certifies `A ∉ Fix(k)`.
pub fn fix_violation_witness(a: &Oracle, k: &FuncTerm, bound: u64) -> Option<u64> {
    (0..bound).find(|&x| {
        let x = Nat::from(x);
        a.query(&x) != a.query(&k.eval(&x))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub k: FuncTerm,
    pub n: usize,
    pub trials: u64,
    pub base_seed: u64,
    pub inside: u64,
    pub fraction: f64,
    pub target: DyadicRational,
    /// `sqrt(p (1 - p) / trials)` with `p` the exact target.
    pub std_error: f64,
}

impl CoverageReport {
    /// Distance from the target in standard errors (0 when both coincide).
    pub fn z_score(&self) -> f64 {
        let diff = (self.fraction - self.target.to_f64()).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error
        }
    }
}

/// Fraction of seeded random oracles inside `U_n`. Trial `i` uses seed
/// `derive_seed(base_seed, i)`, so the count does not depend on scheduling.
pub fn coverage_experiment(
    k: &FuncTerm,
    n: usize,
    trials: u64,
    base_seed: u64,
    search_cap: u64,
) -> Result<CoverageReport, RandomnessError> {
    if trials == 0 {
        return Err(RandomnessError::EmptyExperiment);
    }
    let level = test_level(k, n, search_cap)?;
    let inside = (0..trials)
        .into_par_iter()
        .filter(|&i| level_contains(&level, &Oracle::seeded_random(derive_seed(base_seed, i))))
        .count() as u64;
    let target = level.exact_measure();
    let p = target.to_f64();
    Ok(CoverageReport {
        k: k.clone(),
        n,
        trials,
        base_seed,
        inside,
        fraction: inside as f64 / trials as f64,
        target,
        std_error: (p * (1.0 - p) / trials as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;
    use crate::paramsets::{antichain_family, PeriodicSet};

    fn nats(v: &[u64]) -> Vec<Nat> {
        v.iter().map(|&x| nat(x)).collect()
    }

    #[test]
    fn fresh_sequence_examples() {
        assert_eq!(
            fresh_sequence(&FuncTerm::add(1u32), 3, 100).unwrap(),
            nats(&[0, 2, 4])
        );
        assert_eq!(
            fresh_sequence(&FuncTerm::identity(), 1, 100),
            Err(RandomnessError::NotEnoughNonFixedPoints {
                found: 0,
                needed: 1
            })
        );
        let double = FuncTerm::mul(2u32).unwrap();
        assert_eq!(fresh_sequence(&double, 3, 100).unwrap(), nats(&[1, 3, 7]));
        assert_eq!(
            fresh_sequence(&double, 8, 100),
            Err(RandomnessError::NotEnoughNonFixedPoints {
                found: 6,
                needed: 8
            })
        );
    }

    #[test]
    fn level_examples() {
        let succ = FuncTerm::add(1u32);
        assert!(test_level(&succ, 0, 10).unwrap().is_empty());
        let two = test_level(&succ, 2, 10).unwrap();
        assert_eq!(two.pairs(), &[(nat(0), nat(1)), (nat(2), nat(3))]);
        let double = FuncTerm::mul(2u32).unwrap();
        let two = test_level(&double, 2, 10).unwrap();
        assert_eq!(two.pairs(), &[(nat(1), nat(2)), (nat(3), nat(6))]);
    }

    #[test]
    fn containment_examples() {
        let any = Oracle::seeded_random(1);
        assert!(level_contains(&ConstraintSet::new(), &any));
        let cs = ConstraintSet::from_pairs([(nat(0), nat(1))]).unwrap();
        assert!(!level_contains(&cs, &Oracle::from_set(PeriodicSet::odds())));
        let periodic = Oracle::from_set("residues(2;{1})+{}".parse().unwrap());
        for n in 0..15 {
            let cs = test_level(&FuncTerm::add(2u32), n, 1000).unwrap();
            assert!(level_contains(&cs, &periodic));
        }
    }

    #[test]
    fn fix_violation_examples() {
        let evens = Oracle::from_set(PeriodicSet::evens());
        assert_eq!(
            fix_violation_witness(&evens, &FuncTerm::add(2u32), 10_000),
            None
        );
        assert_eq!(
            fix_violation_witness(&evens, &FuncTerm::add(1u32), 10),
            Some(0)
        );
        let s1 = Oracle::from_set(antichain_family(1));
        assert_eq!(fix_violation_witness(&s1, &FuncTerm::add(4u32), 1000), None);
    }

    #[test]
    fn coverage_examples() {
        let succ = FuncTerm::add(1u32);
        let r = coverage_experiment(&succ, 0, 500, 42, 100).unwrap();
        assert_eq!(r.fraction, 1.0);
        assert_eq!(r.z_score(), 0.0);
        assert_eq!(
            coverage_experiment(&succ, 3, 0, 42, 100),
            Err(RandomnessError::EmptyExperiment)
        );
        let a = coverage_experiment(&succ, 4, 4000, 9, 100).unwrap();
        let b = coverage_experiment(&succ, 4, 4000, 9, 100).unwrap();
        assert_eq!(a, b);
    }
}
