//! Eventually periodic subsets of the naturals.
//!
//! A [`PeriodicSet`] is a union of residue classes modulo a period, corrected
//! by finitely many added and removed points. Sets are always kept in a
//! canonical form (minimal period, exceptions stated relative to that
//! period) so that equality of represented sets is structural equality.
//!
//! Almost inclusion `S ⊆* T` is decidable on this class and is answered
//! with a residue-class certificate when it fails.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::syntax::{write_list, Cursor, ParseError};
use crate::Nat;

/// Upper bound on the number of residues a single set may carry.
///
/// Complements and lifts to a common period materialise every residue, so a
/// set like the complement of `residues(2^65;{0})` is refused rather than
/// allocated.
pub const MAX_RESIDUES: usize = 1 << 20;

/// Number of concrete witnesses attached to a failed almost-inclusion.
pub const WITNESS_COUNT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SetError {
    #[error("period must be at least 1")]
    ZeroPeriod,
    #[error("residue {residue} is not below the period {period}")]
    ResidueOutOfRange { residue: Nat, period: Nat },
    #[error("set would need {count} residues (limit {MAX_RESIDUES})")]
    TooManyResidues { count: String },
    #[error("set is finite")]
    FiniteSet,
    #[error(transparent)]
    Syntax(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodicSet {
    period: Nat,
    // sorted, each < period
    residues: Vec<Nat>,
    // sorted; none of them lies in a selected class
    added: Vec<Nat>,
    // sorted; all of them lie in a selected class
    removed: Vec<Nat>,
}

impl PeriodicSet {
    /// Builds `(residue classes ∪ plus) \ minus` and canonicalises it.
    pub fn new(
        period: Nat,
        residues: impl IntoIterator<Item = Nat>,
        plus: impl IntoIterator<Item = Nat>,
        minus: impl IntoIterator<Item = Nat>,
    ) -> Result<Self, SetError> {
        if period.is_zero() {
            return Err(SetError::ZeroPeriod);
        }
        let residues: BTreeSet<Nat> = residues.into_iter().collect();
        if let Some(r) = residues.iter().find(|r| **r >= period) {
            return Err(SetError::ResidueOutOfRange {
                residue: r.clone(),
                period,
            });
        }
        check_count(residues.len())?;
        let plus: BTreeSet<Nat> = plus.into_iter().collect();
        let minus: BTreeSet<Nat> = minus.into_iter().collect();
        let points = plus.iter().chain(minus.iter()).cloned().collect::<Vec<_>>();
        let member =
            |x: &Nat| !minus.contains(x) && (plus.contains(x) || residues.contains(&(x % &period)));
        Ok(Self::assemble(
            period.clone(),
            residues.iter().cloned().collect(),
            points,
            member,
        ))
    }

    /// Purely periodic set.
    pub fn residues(period: u64, residues: &[u64]) -> Result<Self, SetError> {
        Self::new(
            Nat::from(period),
            residues.iter().map(|&r| Nat::from(r)),
            std::iter::empty(),
            std::iter::empty(),
        )
    }

    /// Finite set.
    pub fn finite(points: impl IntoIterator<Item = Nat>) -> Self {
        Self::new(Nat::one(), std::iter::empty(), points, std::iter::empty())
            .expect("period 1 with no residues is valid")
    }

    pub fn empty() -> Self {
        Self::finite(std::iter::empty())
    }

    pub fn full() -> Self {
        Self::residues(1, &[0]).expect("valid")
    }

    pub fn evens() -> Self {
        Self::residues(2, &[0]).expect("valid")
    }

    pub fn odds() -> Self {
        Self::residues(2, &[1]).expect("valid")
    }

    /// Returns a copy with extra points added and removed (`(self ∪ plus) \ minus`).
    pub fn with_exceptions(
        &self,
        plus: impl IntoIterator<Item = Nat>,
        minus: impl IntoIterator<Item = Nat>,
    ) -> Self {
        let plus: BTreeSet<Nat> = plus.into_iter().collect();
        let minus: BTreeSet<Nat> = minus.into_iter().collect();
        let points = self
            .exception_points()
            .chain(plus.iter().cloned())
            .chain(minus.iter().cloned())
            .collect::<Vec<_>>();
        let member = |x: &Nat| !minus.contains(x) && (plus.contains(x) || self.contains(x));
        Self::assemble(self.period.clone(), self.residues.clone(), points, member)
    }

    /// Canonical assembly: minimise the period of the residue part, then
    /// recompute exceptions at `points` against the desired membership.
    /// Outside `points` the represented set must agree with the residue part.
    fn assemble(
        period: Nat,
        residues: Vec<Nat>,
        points: Vec<Nat>,
        member: impl Fn(&Nat) -> bool,
    ) -> Self {
        let (period, residues) = minimise_period(period, residues);
        let points: BTreeSet<Nat> = points.into_iter().collect();
        let mut added = Vec::new();
        let mut removed = Vec::new();
        for x in points {
            let periodic = residues.binary_search(&(&x % &period)).is_ok();
            match (member(&x), periodic) {
                (true, false) => added.push(x),
                (false, true) => removed.push(x),
                _ => {}
            }
        }
        PeriodicSet {
            period,
            residues,
            added,
            removed,
        }
    }

    pub fn period(&self) -> &Nat {
        &self.period
    }

    pub fn residue_classes(&self) -> &[Nat] {
        &self.residues
    }

    pub fn added(&self) -> &[Nat] {
        &self.added
    }

    pub fn removed(&self) -> &[Nat] {
        &self.removed
    }

    fn exception_points(&self) -> impl Iterator<Item = Nat> + '_ {
        self.added.iter().chain(self.removed.iter()).cloned()
    }

    /// One more than the largest exception point (0 if there are none).
    /// From here on the set agrees with its residue classes.
    pub fn threshold(&self) -> Nat {
        self.exception_points()
            .max()
            .map(|m| m + 1u32)
            .unwrap_or_default()
    }

    pub fn contains(&self, x: &Nat) -> bool {
        if self.added.binary_search(x).is_ok() {
            return true;
        }
        self.in_classes(x) && self.removed.binary_search(x).is_err()
    }

    pub fn contains_u64(&self, x: u64) -> bool {
        self.contains(&Nat::from(x))
    }

    fn in_classes(&self, x: &Nat) -> bool {
        self.residues.binary_search(&(x % &self.period)).is_ok()
    }

    pub fn is_infinite(&self) -> bool {
        !self.residues.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty() && self.added.is_empty()
    }

    /// True when the complement is finite.
    pub fn is_cofinite(&self) -> bool {
        Nat::from(self.residues.len()) == self.period
    }

    /// Number of elements strictly below `x`.
    pub fn count_below(&self, x: &Nat) -> Nat {
        let (q, r) = x.div_rem(&self.period);
        let partial = self.residues.partition_point(|res| *res < r);
        let periodic = q * self.residues.len() + partial;
        let added = self.added.partition_point(|a| a < x);
        let removed = self.removed.partition_point(|m| m < x);
        periodic + added - removed
    }

    /// The `n`-th element in increasing order, 0-indexed.
    pub fn nth_element(&self, n: &Nat) -> Result<Nat, SetError> {
        if !self.is_infinite() {
            return n
                .to_usize()
                .and_then(|i| self.added.get(i).cloned())
                .ok_or(SetError::FiniteSet);
        }
        // The residue part alone has (n + |removed| + 1) elements up to `hi`.
        let m = n + self.removed.len();
        let (q, idx) = m.div_rem(&Nat::from(self.residues.len()));
        let idx = idx.to_usize().expect("below residue count");
        let mut hi = q * &self.period + &self.residues[idx];
        let mut lo = Nat::zero();
        // least x with count_below(x + 1) > n
        while lo < hi {
            let mid: Nat = (&lo + &hi) >> 1u32;
            if self.count_below(&(&mid + 1u32)) > *n {
                hi = mid;
            } else {
                lo = mid + 1u32;
            }
        }
        Ok(lo)
    }

    /// Least element strictly greater than `x`.
    pub fn next_after(&self, x: &Nat) -> Option<Nat> {
        let rank = self.count_below(&(x + 1u32));
        self.nth_element(&rank).ok()
    }

    /// Elements `>= start` in increasing order.
    pub fn iter_from(&self, start: Nat) -> impl Iterator<Item = Nat> + '_ {
        let first = if self.contains(&start) {
            Some(start)
        } else {
            self.next_after(&start)
        };
        std::iter::successors(first, move |x| self.next_after(x))
    }

    pub fn complement(&self) -> Result<Self, SetError> {
        let period = self
            .period
            .to_usize()
            .filter(|p| p - self.residues.len() <= MAX_RESIDUES)
            .ok_or_else(|| SetError::TooManyResidues {
                count: (&self.period - self.residues.len()).to_string(),
            })?;
        let mut residues = Vec::with_capacity(period - self.residues.len());
        let mut it = self.residues.iter().peekable();
        for r in 0..period {
            let r = Nat::from(r);
            if it.peek() == Some(&&r) {
                it.next();
            } else {
                residues.push(r);
            }
        }
        let points = self.exception_points().collect();
        Ok(Self::assemble(self.period.clone(), residues, points, |x| {
            !self.contains(x)
        }))
    }

    pub fn union(&self, other: &Self) -> Result<Self, SetError> {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self, SetError> {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self, SetError> {
        self.combine(other, |a, b| a && !b)
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Result<Self, SetError> {
        let period = self.period.lcm(&other.period);
        let mine = lift(&self.residues, &self.period, &period)?;
        let theirs = lift(&other.residues, &other.period, &period)?;
        let (mut i, mut j) = (0, 0);
        let mut residues = Vec::new();
        // classes outside both lists stay out: op(false, false) is false
        debug_assert!(!op(false, false));
        while i < mine.len() || j < theirs.len() {
            let (x, a, b) = match (mine.get(i), theirs.get(j)) {
                (Some(x), Some(y)) if x == y => {
                    i += 1;
                    j += 1;
                    (x, true, true)
                }
                (Some(x), Some(y)) if x < y => {
                    i += 1;
                    (x, true, false)
                }
                (Some(x), None) => {
                    i += 1;
                    (x, true, false)
                }
                (_, Some(y)) => {
                    j += 1;
                    (y, false, true)
                }
                (None, None) => unreachable!(),
            };
            if op(a, b) {
                residues.push(x.clone());
            }
        }
        check_count(residues.len())?;
        let points = self
            .exception_points()
            .chain(other.exception_points())
            .collect();
        Ok(Self::assemble(period, residues, points, |x| {
            op(self.contains(x), other.contains(x))
        }))
    }

    /// Exact inclusion `self ⊆ other`.
    pub fn is_subset(&self, other: &Self) -> bool {
        matches!(self.almost_subset(other), AlmostInclusion::Holds)
            && self
                .exception_points()
                .chain(other.exception_points())
                .all(|x| !self.contains(&x) || other.contains(&x))
    }

    /// Decides `self ⊆* other` exactly.
    ///
    /// With `g = gcd(p_s, p_t)`, a class `r mod p_s` of `self` is covered by
    /// `other` iff every `u < p_t` with `u ≡ r (mod g)` is a class of `other`.
    /// A missing `u` yields the witness class `CRT(r, u) mod lcm(p_s, p_t)`.
    pub fn almost_subset(&self, other: &Self) -> AlmostInclusion {
        let g = self.period.gcd(&other.period);
        let lifts_per_class = &other.period / &g;
        let mut hits: HashMap<Nat, Nat> = HashMap::new();
        for u in &other.residues {
            *hits.entry(u % &g).or_default() += 1u32;
        }
        for r in &self.residues {
            let key = r % &g;
            if hits.get(&key).is_some_and(|c| *c == lifts_per_class) {
                continue;
            }
            let mut u = key;
            while other.residues.binary_search(&u).is_ok() {
                u += &g;
            }
            let modulus = self.period.lcm(&other.period);
            let residue = crt(r, &self.period, &u, &other.period, &g, &modulus);
            let threshold = self.threshold().max(other.threshold());
            let start = if threshold <= residue {
                residue.clone()
            } else {
                let steps = (&threshold - &residue).div_ceil(&modulus);
                &residue + steps * &modulus
            };
            let witnesses = (0..WITNESS_COUNT)
                .map(|i| &start + &modulus * i)
                .collect::<Vec<_>>();
            debug_assert!(witnesses
                .iter()
                .all(|x| self.contains(x) && !other.contains(x)));
            return AlmostInclusion::Fails(AlmostWitness {
                modulus,
                residue,
                threshold,
                witnesses,
            });
        }
        AlmostInclusion::Holds
    }
}

fn check_count(count: usize) -> Result<(), SetError> {
    if count > MAX_RESIDUES {
        Err(SetError::TooManyResidues {
            count: count.to_string(),
        })
    } else {
        Ok(())
    }
}

/// Residues `r mod from` re-expressed modulo `to` (a multiple of `from`).
fn lift(residues: &[Nat], from: &Nat, to: &Nat) -> Result<Vec<Nat>, SetError> {
    let copies = to / from;
    let total = &copies * residues.len();
    if total > Nat::from(MAX_RESIDUES) {
        return Err(SetError::TooManyResidues {
            count: total.to_string(),
        });
    }
    let copies = copies.to_usize().expect("bounded by MAX_RESIDUES");
    let mut out = Vec::with_capacity(copies * residues.len());
    for j in 0..copies {
        let base = from * j;
        out.extend(residues.iter().map(|r| &base + r));
    }
    out.sort();
    Ok(out)
}

/// Solves `w ≡ r (mod p)`, `w ≡ u (mod q)` with `r ≡ u (mod g)`, `g = gcd(p, q)`.
fn crt(r: &Nat, p: &Nat, u: &Nat, q: &Nat, g: &Nat, modulus: &Nat) -> Nat {
    let to_int = |x: &Nat| BigInt::from_biguint(Sign::Plus, x.clone());
    let (p_i, q_i, g_i) = (to_int(p), to_int(q), to_int(g));
    let q_red = &q_i / &g_i;
    let diff = (to_int(u) - to_int(r)) / &g_i;
    let k = if q_red.is_one() {
        BigInt::zero()
    } else {
        let inv = (&p_i / &g_i).extended_gcd(&q_red).x;
        (diff * inv).mod_floor(&q_red)
    };
    let w = (to_int(r) + p_i * k).mod_floor(&to_int(modulus));
    w.to_biguint().expect("non-negative after mod_floor")
}

/// Reduces `period` while the residue set is invariant under a shift by
/// `period / p`. The stabiliser's order divides the residue count, so only
/// its prime factors need trying.
fn minimise_period(period: Nat, residues: Vec<Nat>) -> (Nat, Vec<Nat>) {
    if residues.is_empty() {
        return (Nat::one(), residues);
    }
    if Nat::from(residues.len()) == period {
        return (Nat::one(), vec![Nat::zero()]);
    }
    let (mut period, mut residues) = (period, residues);
    for p in prime_factors(residues.len()) {
        let p_nat = Nat::from(p);
        loop {
            if !period.is_multiple_of(&p_nat) || residues.len() % p != 0 {
                break;
            }
            let shift = &period / &p_nat;
            let invariant = residues
                .iter()
                .all(|r| residues.binary_search(&((r + &shift) % &period)).is_ok());
            if !invariant {
                break;
            }
            residues.retain(|r| *r < shift);
            period = shift;
        }
    }
    (period, residues)
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `{2^i (2n + 1) : n ∈ ω}`, i.e. `{x : x ≡ 2^i (mod 2^(i+1))}`.
///
/// Distinct members of this family are pairwise `⊆*`-incomparable.
pub fn antichain_family(i: u32) -> PeriodicSet {
    let residue = Nat::one() << i;
    let period = Nat::one() << (i + 1);
    PeriodicSet::new(period, [residue], [], []).expect("2^i < 2^(i+1)")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlmostWitness {
    /// `lcm` of both periods.
    pub modulus: Nat,
    /// Class `residue mod modulus` contains infinitely many points of `S \ T`.
    pub residue: Nat,
    /// All exceptions of both sets lie below this bound.
    pub threshold: Nat,
    pub witnesses: Vec<Nat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum AlmostInclusion {
    Holds,
    Fails(AlmostWitness),
}

impl AlmostInclusion {
    pub fn holds(&self) -> bool {
        matches!(self, AlmostInclusion::Holds)
    }
}

impl fmt::Display for PeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "residues({};", self.period)?;
        write_list(f, &self.residues)?;
        f.write_str(")")?;
        if !self.added.is_empty() {
            f.write_str("+")?;
            write_list(f, &self.added)?;
        }
        if !self.removed.is_empty() {
            f.write_str("-")?;
            write_list(f, &self.removed)?;
        }
        Ok(())
    }
}

pub(crate) fn parse_set(cur: &mut Cursor<'_>) -> Result<PeriodicSet, SetError> {
    let start = cur.position();
    cur.expect("residues")?;
    cur.expect("(")?;
    let period = cur.nat()?;
    cur.expect(";")?;
    let residues = cur.nat_list()?;
    cur.expect(")")?;
    let plus = if cur.eat("+") {
        cur.nat_list()?
    } else {
        Vec::new()
    };
    let minus = if cur.eat("-") {
        cur.nat_list()?
    } else {
        Vec::new()
    };
    PeriodicSet::new(period, residues, plus, minus).map_err(|e| match e {
        SetError::Syntax(_) => e,
        other => SetError::Syntax(ParseError {
            position: start,
            message: other.to_string(),
        }),
    })
}

impl FromStr for PeriodicSet {
    type Err = SetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        let set = parse_set(&mut cur)?;
        cur.finish()?;
        Ok(set)
    }
}

impl Serialize for PeriodicSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PeriodicSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;

    fn set(s: &str) -> PeriodicSet {
        s.parse().unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(PeriodicSet::odds().contains_u64(7));
        assert!(antichain_family(2).contains_u64(4));
        assert!(!antichain_family(2).contains_u64(8));
    }

    #[test]
    fn family_shapes() {
        assert_eq!(antichain_family(0), PeriodicSet::odds());
        assert_eq!(antichain_family(1).to_string(), "residues(4;{2})");
        assert_eq!(antichain_family(3).to_string(), "residues(16;{8})");
        let first: Vec<_> = antichain_family(1).iter_from(nat(0)).take(3).collect();
        assert_eq!(first, vec![nat(2), nat(6), nat(10)]);
        let first: Vec<_> = antichain_family(3).iter_from(nat(0)).take(3).collect();
        assert_eq!(first, vec![nat(8), nat(24), nat(40)]);
        // 2^64 needs more than a machine word for its period
        let big = antichain_family(64);
        assert!(big.contains(&(Nat::one() << 64u32)));
        assert!(!big.contains(&(Nat::one() << 65u32)));
    }

    #[test]
    fn canonical_period_is_minimal() {
        assert_eq!(set("residues(8;{1,3,5,7})"), PeriodicSet::odds());
        assert_eq!(set("residues(6;{0,2,4})"), PeriodicSet::evens());
        assert_eq!(set("residues(12;{0,3,6,9})"), set("residues(3;{0})"));
        assert_eq!(set("residues(4;{})"), PeriodicSet::empty());
        assert_eq!(set("residues(5;{0,1,2,3,4})"), PeriodicSet::full());
        assert_eq!(set("residues(4;{1})").period(), &nat(4));
    }

    #[test]
    fn exceptions_are_normalised() {
        let s = set("residues(2;{1})+{3,4}-{5,6}");
        assert_eq!(s.to_string(), "residues(2;{1})+{4}-{5}");
        assert!(s.contains_u64(4) && !s.contains_u64(5) && s.contains_u64(3));
        // plus then minus on the same point removes it
        assert!(!set("residues(1;{})+{2}-{2}").contains_u64(2));
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = "residues(2;{1)".parse::<PeriodicSet>().unwrap_err();
        assert!(matches!(
            err,
            SetError::Syntax(ParseError { position: 13, .. })
        ));
        assert!(matches!(
            "residues(0;{})".parse::<PeriodicSet>(),
            Err(SetError::Syntax(_))
        ));
        assert!(matches!(
            "residues(2;{2})".parse::<PeriodicSet>(),
            Err(SetError::Syntax(_))
        ));
        assert!(" residues ( 2 ; { 1 } ) + { 4 } "
            .parse::<PeriodicSet>()
            .is_ok());
    }

    #[test]
    fn almost_subset_examples() {
        let odds = PeriodicSet::odds();
        assert!(odds.almost_subset(&odds).holds());
        assert!(set("residues(2;{1})+{4}").almost_subset(&odds).holds());
        match antichain_family(1).almost_subset(&antichain_family(2)) {
            AlmostInclusion::Fails(w) => {
                assert_eq!(w.modulus, nat(8));
                assert_eq!(w.residue, nat(2));
                assert_eq!(&w.witnesses[..3], &[nat(2), nat(10), nat(18)]);
            }
            AlmostInclusion::Holds => panic!("S_1 is not almost contained in S_2"),
        }
    }

    #[test]
    fn witnesses_clear_the_exceptions() {
        let s = set("residues(3;{0})+{1}-{30,33}");
        let t = set("residues(6;{3})+{0,6,36}");
        let AlmostInclusion::Fails(w) = s.almost_subset(&t) else {
            panic!("multiples of 6 are missing from t");
        };
        assert!(w.witnesses[0] > nat(36));
        for x in &w.witnesses {
            assert!(s.contains(x) && !t.contains(x));
        }
    }

    #[test]
    fn set_algebra_examples() {
        assert_eq!(
            PeriodicSet::odds().complement().unwrap(),
            PeriodicSet::evens()
        );
        assert_eq!(
            set("residues(4;{0})").union(&PeriodicSet::evens()).unwrap(),
            PeriodicSet::evens()
        );
        assert!(antichain_family(0)
            .intersection(&antichain_family(1))
            .unwrap()
            .is_empty());
        let c = set("residues(3;{0})+{1}-{3}").complement().unwrap();
        assert_eq!(c.to_string(), "residues(3;{1,2})+{3}-{1}");
    }

    #[test]
    fn complement_of_huge_sparse_set_is_refused() {
        assert!(matches!(
            antichain_family(64).complement(),
            Err(SetError::TooManyResidues { .. })
        ));
    }

    #[test]
    fn nth_element_examples() {
        assert_eq!(PeriodicSet::evens().nth_element(&nat(3)).unwrap(), nat(6));
        assert_eq!(antichain_family(1).nth_element(&nat(0)).unwrap(), nat(2));
        assert_eq!(
            set("residues(2;{1})+{0}").nth_element(&nat(0)).unwrap(),
            nat(0)
        );
        assert_eq!(
            set("residues(1;{})+{5}").nth_element(&nat(1)),
            Err(SetError::FiniteSet)
        );
        assert_eq!(
            set("residues(1;{})+{5}").nth_element(&nat(0)).unwrap(),
            nat(5)
        );
    }

    #[test]
    fn subset_checks_exception_points() {
        let s = set("residues(4;{0})+{1}");
        assert!(!s.is_subset(&PeriodicSet::evens()));
        assert!(s.almost_subset(&PeriodicSet::evens()).holds());
        assert!(set("residues(4;{0})").is_subset(&PeriodicSet::evens()));
    }
}
