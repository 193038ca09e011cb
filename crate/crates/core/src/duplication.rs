//! The duplication construction `B_S = f_S⁻¹(A)` and the reduction checks
//! built on it.
//!
//! `f_S` sends `2x ↦ x` always and `2x+1 ↦ x` exactly when `x ∈ S` (else to a
//! fixed non-member `c`). Any 1-reduction `h: B_S ≤₁ B_T` induces two
//! m-autoreductions of `A`,
//!
//! ```text
//! k₀(x) = f_T(h(2x))        k₁(x) = f_T(h(2x+1)) if x ∈ S, else x
//! ```
//!
//! and if both are the identity on a window then the fiber sizes of `f_T`
//! force `S ∩ window ⊆ T` away from `c`. Everything here is checked on
//! explicit finite windows; no infinite claim is made.

use std::collections::HashMap;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::funcdsl::{dup_eval, odd_embedding, FuncTerm};
use crate::oracle::{Oracle, OracleError};
use crate::paramsets::{PeriodicSet, SetError};
use crate::Nat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DuplicationError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error("S is not a subset of T: {0} ∈ S \\ T")]
    NotSubset(Nat),
    #[error("S ∪ T is co-finite, so no room is left for the non-members of S")]
    UnionCofinite,
    #[error("h is not a window-verified 1-reduction B_S → B_T: {0:?}")]
    ReductionFailed(ReductionVerdict),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ReductionStatus {
    Ok,
    /// `x ≠ y` with `h(x) = h(y)`.
    InjectivityViolation {
        x: u64,
        y: u64,
    },
    /// Index where the membership of source and target disagree across the map.
    EquivalenceViolation {
        z: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionVerdict {
    pub status: ReductionStatus,
    pub checked_bound: u64,
}

impl ReductionVerdict {
    pub fn is_ok(&self) -> bool {
        self.status == ReductionStatus::Ok
    }

    fn new(status: ReductionStatus, checked_bound: u64) -> Self {
        ReductionVerdict {
            status,
            checked_bound,
        }
    }
}

/// `B_S` over base `a`; requires `a(c) = 0`.
pub fn dup_set(s: &PeriodicSet, c: &Nat, a: &Oracle) -> Result<Oracle, OracleError> {
    Oracle::duplicated(s.clone(), c.clone(), a.clone())
}

/// Checks `A ≤_m B_S` via `x ↦ 2x` and `B_S ≤_m A` via `f_S` on `[0, bound)`.
pub fn verify_m_equivalence(
    a: &Oracle,
    s: &PeriodicSet,
    c: &Nat,
    bound: u64,
) -> Result<ReductionVerdict, OracleError> {
    let b = dup_set(s, c, a)?;
    Ok(verify_m_equivalence_against(a, &b, s, c, bound))
}

/// Same as [`verify_m_equivalence`] against an explicitly supplied `b`,
/// which lets corrupted candidates be checked. Violations report the index
/// into `b`.
pub fn verify_m_equivalence_against(
    a: &Oracle,
    b: &Oracle,
    s: &PeriodicSet,
    c: &Nat,
    bound: u64,
) -> ReductionVerdict {
    let even = (0..bound)
        .into_par_iter()
        .find_first(|&x| a.query_u64(x) != b.query(&(Nat::from(x) << 1u32)));
    if let Some(x) = even {
        return ReductionVerdict::new(ReductionStatus::EquivalenceViolation { z: 2 * x }, bound);
    }
    let any = (0..bound).into_par_iter().find_first(|&z| {
        let z_nat = Nat::from(z);
        b.query(&z_nat) != a.query(&dup_eval(s, c, &z_nat))
    });
    match any {
        Some(z) => ReductionVerdict::new(ReductionStatus::EquivalenceViolation { z }, bound),
        None => ReductionVerdict::new(ReductionStatus::Ok, bound),
    }
}

/// Preimage `f_S⁻¹(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fiber {
    /// `{2x}` or `{2x, 2x+1}`.
    Finite(Vec<Nat>),
    /// The fiber over `c`: `{2c} ∪ {2y+1 : y ∉ S}` (plus `2c+1` when `c ∈ S`).
    Collapsing(CollapsedFiber),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapsedFiber {
    set: PeriodicSet,
    c: Nat,
}

impl CollapsedFiber {
    /// Infinite unless `S` is co-finite.
    pub fn is_finite(&self) -> bool {
        self.set.is_cofinite()
    }

    pub fn contains(&self, z: &Nat) -> bool {
        dup_eval(&self.set, &self.c, z) == self.c
    }

    /// Members in increasing order; ends only when the fiber is finite.
    pub fn iter(&self) -> impl Iterator<Item = Nat> + '_ {
        let end = self
            .is_finite()
            .then(|| (self.c.clone().max(self.set.threshold()) + 1u32) << 1u32);
        let mut z = Nat::zero();
        std::iter::from_fn(move || loop {
            if end.as_ref().is_some_and(|e| z >= *e) {
                return None;
            }
            let current = z.clone();
            z += 1u32;
            if self.contains(&current) {
                return Some(current);
            }
        })
    }
}

impl Fiber {
    /// `None` for an infinite fiber.
    pub fn len(&self) -> Option<usize> {
        match self {
            Fiber::Finite(v) => Some(v.len()),
            Fiber::Collapsing(f) => f.is_finite().then(|| f.iter().count()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn contains(&self, z: &Nat) -> bool {
        match self {
            Fiber::Finite(v) => v.contains(z),
            Fiber::Collapsing(f) => f.contains(z),
        }
    }
}

pub fn fiber(s: &PeriodicSet, c: &Nat, x: &Nat) -> Fiber {
    if x == c {
        return Fiber::Collapsing(CollapsedFiber {
            set: s.clone(),
            c: c.clone(),
        });
    }
    let even: Nat = x << 1u32;
    if s.contains(x) {
        let odd = &even + 1u32;
        Fiber::Finite(vec![even, odd])
    } else {
        Fiber::Finite(vec![even])
    }
}

/// `(k₀, k₁)` induced by a candidate reduction `h: B_S → B_T`.
pub fn induced_autoreductions(
    h: &FuncTerm,
    s: &PeriodicSet,
    t: &PeriodicSet,
    c_t: &Nat,
) -> (FuncTerm, FuncTerm) {
    let f_t = FuncTerm::dup(t.clone(), c_t.clone());
    let double = FuncTerm::mul(2u32).expect("nonzero");
    let k0 = FuncTerm::compose(f_t.clone(), FuncTerm::compose(h.clone(), double));
    let k1 = FuncTerm::piecewise(
        s.clone(),
        FuncTerm::compose(f_t, FuncTerm::compose(h.clone(), odd_embedding())),
        FuncTerm::identity(),
    );
    (k0, k1)
}

/// Checks that `h` is injective on `[0, bound)` and that
/// `src(z) = tgt(h(z))` there. Injectivity is checked over the whole window
/// before any membership query.
pub fn verify_one_reduction(
    h: &FuncTerm,
    src: &Oracle,
    tgt: &Oracle,
    bound: u64,
) -> ReductionVerdict {
    let images: Vec<Nat> = (0..bound).into_par_iter().map(|z| h.eval_u64(z)).collect();
    let mut seen: HashMap<&Nat, u64> = HashMap::with_capacity(images.len());
    for (z, image) in images.iter().enumerate() {
        if let Some(&x) = seen.get(image) {
            return ReductionVerdict::new(
                ReductionStatus::InjectivityViolation { x, y: z as u64 },
                bound,
            );
        }
        seen.insert(image, z as u64);
    }
    let bad = images
        .par_iter()
        .enumerate()
        .find_first(|(z, image)| src.query_u64(*z as u64) != tgt.query(image));
    match bad {
        Some((z, _)) => {
            ReductionVerdict::new(ReductionStatus::EquivalenceViolation { z: z as u64 }, bound)
        }
        None => ReductionVerdict::new(ReductionStatus::Ok, bound),
    }
}

/// Explicit 1-reduction `B_S ≤₁ B_T` for `S ⊆ T` with `S ∪ T` co-infinite.
///
/// `h` fixes every even index and every `2x+1` with `x ∈ S`. The `n`-th
/// non-member of `S` is sent (on the odd side) to the `n`-th non-member of
/// `S ∪ T`, so both sides read `A(c)`. The rank transfer is eventually affine
/// on residue classes, which is what makes it expressible as a term.
pub fn construct_subset_reduction(
    s: &PeriodicSet,
    t: &PeriodicSet,
) -> Result<FuncTerm, DuplicationError> {
    if !s.is_subset(t) {
        let offender = s
            .difference(t)?
            .nth_element(&Nat::zero())
            .expect("nonempty difference");
        return Err(DuplicationError::NotSubset(offender));
    }
    let union = s.union(t)?;
    if union.is_cofinite() {
        return Err(DuplicationError::UnionCofinite);
    }
    if union == *s {
        return Ok(FuncTerm::identity());
    }
    let free_s = s.complement()?;
    let free_u = union.complement()?;
    let transfer = RankTransfer::new(&free_s, &free_u)?;

    let fixed = evens().union(&odd_image(s)?)?;
    let mut term = transfer.class_term()?;
    // points below the affine regime whose formula value is off
    let overrides: Vec<(Nat, FuncTerm)> = transfer
        .low_overrides(&term)
        .into_iter()
        .map(|(z, value)| (z, FuncTerm::constant(value)))
        .collect();
    if !overrides.is_empty() {
        let points = |keys: &[Nat]| Ok(PeriodicSet::finite(keys.iter().cloned()));
        term = FuncTerm::piecewise(
            points(&overrides.iter().map(|(z, _)| z.clone()).collect::<Vec<_>>())?,
            dispatch_tree(&overrides, &points)?,
            term,
        );
    }
    Ok(FuncTerm::piecewise(fixed, FuncTerm::identity(), term))
}

/// Selects `pieces[i].1` on `guard([pieces[i].0])`, assuming the input lies
/// in the guard of some piece; the last piece takes everything else. Guards
/// split the pieces in halves, so the term depth stays logarithmic.
fn dispatch_tree(
    pieces: &[(Nat, FuncTerm)],
    guard: &dyn Fn(&[Nat]) -> Result<PeriodicSet, SetError>,
) -> Result<FuncTerm, SetError> {
    match pieces {
        [] => Ok(FuncTerm::identity()),
        [(_, only)] => Ok(only.clone()),
        _ => {
            let (left, right) = pieces.split_at(pieces.len() / 2);
            let keys: Vec<Nat> = left.iter().map(|(k, _)| k.clone()).collect();
            Ok(FuncTerm::piecewise(
                guard(&keys)?,
                dispatch_tree(left, guard)?,
                dispatch_tree(right, guard)?,
            ))
        }
    }
}

fn evens() -> PeriodicSet {
    PeriodicSet::evens()
}

/// `{2x+1 : x ∈ s}`.
fn odd_image(s: &PeriodicSet) -> Result<PeriodicSet, SetError> {
    let odd = |x: &Nat| (x << 1u32) + 1u32;
    PeriodicSet::new(
        s.period() << 1u32,
        s.residue_classes().iter().map(odd),
        s.added().iter().map(odd),
        s.removed().iter().map(odd),
    )
}

/// `x ↦ nth(to, rank_from(x))` for `x ∈ from`, with `to ⊆ from`, both infinite.
struct RankTransfer<'a> {
    from: &'a PeriodicSet,
    to: &'a PeriodicSet,
    /// Modulus on `x` after which the map is affine per class.
    block: Nat,
    /// Increase of the image per block.
    slope: Nat,
    /// Multiple of `block` beyond all exceptions.
    start: Nat,
    /// Residues of `from` modulo `block`.
    classes: Vec<Nat>,
}

impl<'a> RankTransfer<'a> {
    fn new(from: &'a PeriodicSet, to: &'a PeriodicSet) -> Result<Self, SetError> {
        let l = from.period().lcm(to.period());
        let per_l = |p: &PeriodicSet| (&l / p.period()) * p.residue_classes().len();
        let (a, b) = (per_l(from), per_l(to));
        let g = a.gcd(&b);
        let block = &l * (&b / &g);
        let slope = &l * (&a / &g);
        let threshold = from.threshold().max(to.threshold());
        let start = threshold.div_ceil(&block) * &block;
        let copies = &block / from.period();
        if &copies * from.residue_classes().len() > Nat::from(crate::paramsets::MAX_RESIDUES) {
            return Err(SetError::TooManyResidues {
                count: (&copies * from.residue_classes().len()).to_string(),
            });
        }
        let copies = copies.to_usize().expect("bounded");
        let mut classes = Vec::with_capacity(copies * from.residue_classes().len());
        for j in 0..copies {
            let base = from.period() * j;
            classes.extend(from.residue_classes().iter().map(|r| &base + r));
        }
        classes.sort();
        Ok(RankTransfer {
            from,
            to,
            block,
            slope,
            start,
            classes,
        })
    }

    fn apply(&self, x: &Nat) -> Nat {
        let rank = self.from.count_below(x);
        self.to.nth_element(&rank).expect("target is infinite")
    }

    /// On odd `z = 2x+1` with `x ≡ ρ (mod block)`, `x ≥ start`:
    /// `h(z) = 2·slope·(z div 2·block) + K_ρ`.
    fn class_term(&self) -> Result<FuncTerm, DuplicationError> {
        let two_block: Nat = &self.block << 1u32;
        let q0 = BigInt::from_biguint(Sign::Plus, &self.start / &self.block);
        let slope = BigInt::from_biguint(Sign::Plus, self.slope.clone());
        let mut pieces = Vec::with_capacity(self.classes.len());
        for rho in &self.classes {
            let y = BigInt::from_biguint(Sign::Plus, self.apply(&(&self.start + rho)));
            let offset: BigInt = (y - &slope * &q0) * 2 + 1;
            let mut stages = vec![
                FuncTerm::div_floor(two_block.clone()).expect("nonzero"),
                FuncTerm::mul(&self.slope << 1u32).expect("nonzero"),
            ];
            let magnitude = offset.abs().to_biguint().expect("absolute value");
            stages.push(if offset.is_negative() {
                FuncTerm::sub(magnitude)
            } else {
                FuncTerm::add(magnitude)
            });
            pieces.push(((rho << 1u32) + 1u32, FuncTerm::chain(stages)));
        }
        let classes =
            |keys: &[Nat]| PeriodicSet::new(two_block.clone(), keys.iter().cloned(), [], []);
        Ok(dispatch_tree(&pieces, &classes)?)
    }

    /// `(z, h(z))` for odd `z = 2x+1`, `x ∈ from`, `x < start`, where `term`
    /// disagrees with the exact transfer.
    fn low_overrides(&self, term: &FuncTerm) -> Vec<(Nat, Nat)> {
        let mut out = Vec::new();
        for x in self.from.iter_from(Nat::zero()) {
            if x >= self.start {
                break;
            }
            let z = (&x << 1u32) + 1u32;
            let want = (self.apply(&x) << 1u32) + 1u32;
            if term.eval(&z) != want {
                out.push((z, want));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InclusionConclusion {
    #[serde(rename = "S_subset_star_T_on_window")]
    SSubsetStarTOnWindow,
    #[serde(rename = "violation_found")]
    ViolationFound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub n0: u64,
    pub verified_range: (u64, u64),
    pub s_members_checked: u64,
    pub violations: Vec<u64>,
    pub conclusion: InclusionConclusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Autoreduction {
    K0,
    K1,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum InclusionOutcome {
    Report(InclusionReport),
    /// An induced autoreduction moves `x ∈ [n0, bound)`: either `h` is bad or
    /// the base oracle is not rigid at this scale.
    AutoreductionNotIdentity {
        x: u64,
        which: Autoreduction,
    },
}

/// Runs the key-claim pipeline on `[n0, bound)`.
///
/// Requires `h` to pass [`verify_one_reduction`] from `B_S` to `B_T` on
/// `[0, 2·bound + 2)`, which covers every `h(2x)` and `h(2x+1)` used.
#[allow(clippy::too_many_arguments)]
pub fn almost_inclusion_from_reduction(
    h: &FuncTerm,
    s: &PeriodicSet,
    t: &PeriodicSet,
    a: &Oracle,
    c_s: &Nat,
    c_t: &Nat,
    n0: u64,
    bound: u64,
) -> Result<InclusionOutcome, DuplicationError> {
    let b_s = dup_set(s, c_s, a)?;
    let b_t = dup_set(t, c_t, a)?;
    let verdict = verify_one_reduction(h, &b_s, &b_t, 2 * bound + 2);
    if !verdict.is_ok() {
        return Err(DuplicationError::ReductionFailed(verdict));
    }
    let (k0, k1) = induced_autoreductions(h, s, t, c_t);
    for x in n0..bound {
        let x_nat = Nat::from(x);
        for (k, which) in [(&k0, Autoreduction::K0), (&k1, Autoreduction::K1)] {
            if k.eval(&x_nat) != x_nat {
                return Ok(InclusionOutcome::AutoreductionNotIdentity { x, which });
            }
        }
    }
    let mut checked = 0;
    let mut violations = Vec::new();
    for x in n0..bound {
        let x_nat = Nat::from(x);
        if !s.contains(&x_nat) || x_nat == *c_t {
            continue;
        }
        checked += 1;
        // f_T(h(2x)) = x = f_T(h(2x+1)) and h is injective, so the fiber over
        // x holds two distinct points, which happens only for x ∈ T.
        let z0 = h.eval(&(&x_nat << 1u32));
        let z1 = h.eval(&((&x_nat << 1u32) + 1u32));
        let fib = fiber(t, c_t, &x_nat);
        let two_points = z0 != z1 && fib.contains(&z0) && fib.contains(&z1);
        if !two_points || fib.len() != Some(2) || !t.contains(&x_nat) {
            violations.push(x);
        }
    }
    let conclusion = if violations.is_empty() {
        InclusionConclusion::SSubsetStarTOnWindow
    } else {
        InclusionConclusion::ViolationFound
    };
    Ok(InclusionOutcome::Report(InclusionReport {
        n0,
        verified_range: (n0, bound),
        s_members_checked: checked,
        violations,
        conclusion,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;

    fn set(s: &str) -> PeriodicSet {
        s.parse().unwrap()
    }

    #[test]
    fn dup_set_examples() {
        let a = Oracle::from_set(PeriodicSet::odds());
        let b = dup_set(&PeriodicSet::odds(), &nat(0), &a).unwrap();
        assert_eq!(b.prefix(4), "0011");
        assert!(dup_set(&PeriodicSet::odds(), &nat(1), &a).is_err());
        let r = Oracle::seeded_random(5);
        let c = r.find_zero(100).unwrap();
        let b = dup_set(&PeriodicSet::empty(), &c, &r).unwrap();
        assert!((0..500).all(|x| !b.query_u64(2 * x + 1)));
    }

    #[test]
    fn m_equivalence_examples() {
        let a = Oracle::seeded_random(3);
        let c = a.find_zero(100).unwrap();
        let s = PeriodicSet::odds();
        assert!(verify_m_equivalence(&a, &s, &c, 2000).unwrap().is_ok());
        assert!(verify_m_equivalence(&a, &s, &c, 0).unwrap().is_ok());

        let b = dup_set(&s, &c, &a).unwrap();
        let mut bits = b.prefix_bits(18);
        bits[17] = !bits[17];
        let corrupted = Oracle::prefix_patch(bits, b);
        let v = verify_m_equivalence_against(&a, &corrupted, &s, &c, 100);
        assert_eq!(v.status, ReductionStatus::EquivalenceViolation { z: 17 });
    }

    #[test]
    fn fiber_examples() {
        let odds = PeriodicSet::odds();
        assert_eq!(
            fiber(&odds, &nat(0), &nat(3)),
            Fiber::Finite(vec![nat(6), nat(7)])
        );
        assert_eq!(fiber(&odds, &nat(0), &nat(4)), Fiber::Finite(vec![nat(8)]));
        let Fiber::Collapsing(f) = fiber(&odds, &nat(0), &nat(0)) else {
            panic!("fiber over c is the collapsing one");
        };
        assert!(!f.is_finite());
        let first: Vec<_> = f.iter().take(4).collect();
        assert_eq!(first, vec![nat(0), nat(1), nat(5), nat(9)]);
    }

    #[test]
    fn collapsing_fiber_of_cofinite_set_is_finite() {
        let s = set("residues(1;{0})-{2,5}");
        let Fiber::Collapsing(f) = fiber(&s, &nat(2), &nat(2)) else {
            panic!()
        };
        assert!(f.is_finite());
        // 2c = 4, 2c+1 = 5 (c ∉ S), 2*5+1 = 11
        assert_eq!(f.iter().collect::<Vec<_>>(), vec![nat(4), nat(5), nat(11)]);
    }

    #[test]
    fn induced_autoreduction_examples() {
        let odds = PeriodicSet::odds();
        let (k0, k1) = induced_autoreductions(&FuncTerm::identity(), &odds, &odds, &nat(0));
        assert_eq!(k0.eval_u64(3), nat(3));
        assert_eq!(k1.eval_u64(4), nat(4));
        let (k0, _) = induced_autoreductions(&FuncTerm::add(2u32), &odds, &odds, &nat(0));
        assert_eq!(k0.eval_u64(3), nat(4));
    }

    #[test]
    fn one_reduction_examples() {
        let a = Oracle::seeded_random(11);
        let c = a.find_zero(100).unwrap();
        let b = dup_set(&antichain(1), &c, &a).unwrap();
        let double = FuncTerm::mul(2u32).unwrap();
        assert!(verify_one_reduction(&double, &a, &b, 3000).is_ok());
        let v = verify_one_reduction(&FuncTerm::constant(nat(5)), &a, &b, 10);
        assert_eq!(
            v.status,
            ReductionStatus::InjectivityViolation { x: 0, y: 1 }
        );
        let src = Oracle::from_set(PeriodicSet::evens());
        let tgt = Oracle::from_set(PeriodicSet::evens().with_exceptions([nat(9)], []));
        let v = verify_one_reduction(&FuncTerm::identity(), &src, &tgt, 100);
        assert_eq!(v.status, ReductionStatus::EquivalenceViolation { z: 9 });
    }

    fn antichain(i: u32) -> PeriodicSet {
        crate::paramsets::antichain_family(i)
    }

    #[test]
    fn subset_reduction_examples() {
        let s = set("residues(4;{0})");
        let h = construct_subset_reduction(&s, &PeriodicSet::evens()).unwrap();
        assert_eq!(h.eval_u64(3), nat(3));
        // x = 2 is the 1st non-member of s; the 1st odd number is 3
        assert_eq!(h.eval_u64(5), nat(7));
        assert_eq!(
            construct_subset_reduction(&PeriodicSet::odds(), &PeriodicSet::odds()).unwrap(),
            FuncTerm::identity()
        );
        assert_eq!(
            construct_subset_reduction(&PeriodicSet::evens(), &PeriodicSet::full()),
            Err(DuplicationError::UnionCofinite)
        );
        assert_eq!(
            construct_subset_reduction(&PeriodicSet::odds(), &PeriodicSet::evens()),
            Err(DuplicationError::NotSubset(nat(1)))
        );
    }

    fn brute_rank_map(s: &PeriodicSet, t: &PeriodicSet, z: u64) -> u64 {
        // independent: enumerate non-members directly
        if z.is_multiple_of(2) || s.contains_u64(z / 2) {
            return z;
        }
        let x = z / 2;
        let n = (0..x).filter(|&y| !s.contains_u64(y)).count();
        let y = (0..)
            .filter(|&y| !s.contains_u64(y) && !t.contains_u64(y))
            .nth(n)
            .unwrap();
        2 * y + 1
    }

    #[test]
    fn subset_reduction_matches_enumeration_with_exceptions() {
        let cases = [
            ("residues(1;{})", "residues(2;{1})-{1}"),
            ("residues(4;{0})+{1}", "residues(2;{0})+{1,3}-{6}"),
            ("residues(6;{0,3})-{0}", "residues(3;{0})+{7}"),
            ("residues(1;{})+{4}", "residues(5;{1,4})+{0}"),
        ];
        for (s, t) in cases {
            let (s, t) = (set(s), set(t));
            let h = construct_subset_reduction(&s, &t).unwrap();
            for z in 0..600 {
                assert_eq!(
                    h.eval_u64(z),
                    nat(brute_rank_map(&s, &t, z)),
                    "{s} {t} z={z}"
                );
            }
        }
    }

    #[test]
    fn pipeline_on_subset_pair() {
        let a = Oracle::seeded_random(42);
        let c = a.find_zero(100).unwrap();
        let s = set("residues(4;{0})");
        let t = PeriodicSet::evens();
        let h = construct_subset_reduction(&s, &t).unwrap();
        let out = almost_inclusion_from_reduction(&h, &s, &t, &a, &c, &c, 0, 500).unwrap();
        let InclusionOutcome::Report(r) = out else {
            panic!("{out:?}")
        };
        assert_eq!(r.conclusion, InclusionConclusion::SSubsetStarTOnWindow);
        assert!(r.violations.is_empty());
        assert!(r.s_members_checked > 100);

        let out =
            almost_inclusion_from_reduction(&FuncTerm::identity(), &t, &t, &a, &c, &c, 0, 500)
                .unwrap();
        assert!(matches!(
            out,
            InclusionOutcome::Report(InclusionReport {
                conclusion: InclusionConclusion::SSubsetStarTOnWindow,
                ..
            })
        ));
    }

    #[test]
    fn pipeline_rejects_unverified_h() {
        let a = Oracle::seeded_random(42);
        let c = a.find_zero(100).unwrap();
        let err = almost_inclusion_from_reduction(
            &FuncTerm::identity(),
            &PeriodicSet::odds(),
            &PeriodicSet::evens(),
            &a,
            &c,
            &c,
            0,
            50,
        )
        .unwrap_err();
        assert!(matches!(err, DuplicationError::ReductionFailed(_)));
    }

    #[test]
    fn pipeline_flags_moving_autoreduction() {
        // Over A = evens with c = 1, B_S for S = ∅ is the evens of A at even
        // indices; h = add(4) maps 2x ↦ 2x+4 which reads A(x+2) = A(x).
        let a = Oracle::from_set(PeriodicSet::evens());
        let empty = PeriodicSet::empty();
        let h = FuncTerm::add(4u32);
        let out = almost_inclusion_from_reduction(&h, &empty, &empty, &a, &nat(1), &nat(1), 0, 40)
            .unwrap();
        assert_eq!(
            out,
            InclusionOutcome::AutoreductionNotIdentity {
                x: 0,
                which: Autoreduction::K0
            }
        );
    }
}
