//! Points of Cantor space behind a membership query.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::funcdsl::dup_eval;
use crate::paramsets::{parse_set, PeriodicSet, SetError};
use crate::syntax::{Cursor, ParseError};
use crate::Nat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("duplication requires c ∉ A, but the base oracle has bit 1 at c = {0}")]
    BaseContainsC(Nat),
    #[error("no zero bit below {0}")]
    NoZeroBelowBound(u64),
    #[error(transparent)]
    Syntax(#[from] ParseError),
}

impl From<SetError> for OracleError {
    fn from(e: SetError) -> Self {
        match e {
            SetError::Syntax(p) => OracleError::Syntax(p),
            other => OracleError::Syntax(ParseError {
                position: 0,
                message: other.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OracleNode {
    SeededRandom(u64),
    FromSet(PeriodicSet),
    PrefixPatch {
        bits: Vec<bool>,
        rest: Oracle,
    },
    /// `B_S = f_S⁻¹(base)`.
    Duplicated {
        set: PeriodicSet,
        c: Nat,
        base: Oracle,
    },
}

/// An infinite bit sequence. Queries are deterministic and side-effect free.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Oracle(Arc<OracleNode>);

impl Oracle {
    fn wrap(node: OracleNode) -> Self {
        Oracle(Arc::new(node))
    }

    pub fn node(&self) -> &OracleNode {
        &self.0
    }

    pub fn seeded_random(seed: u64) -> Self {
        Self::wrap(OracleNode::SeededRandom(seed))
    }

    pub fn from_set(set: PeriodicSet) -> Self {
        Self::wrap(OracleNode::FromSet(set))
    }

    pub fn prefix_patch(bits: Vec<bool>, rest: Oracle) -> Self {
        Self::wrap(OracleNode::PrefixPatch { bits, rest })
    }

    /// Builds `B_S`; fails unless `base(c) = 0`.
    pub fn duplicated(set: PeriodicSet, c: Nat, base: Oracle) -> Result<Self, OracleError> {
        if base.query(&c) {
            return Err(OracleError::BaseContainsC(c));
        }
        Ok(Self::wrap(OracleNode::Duplicated { set, c, base }))
    }

    pub fn query(&self, x: &Nat) -> bool {
        match self.node() {
            OracleNode::SeededRandom(seed) => random_bit(*seed, x),
            OracleNode::FromSet(s) => s.contains(x),
            OracleNode::PrefixPatch { bits, rest } => {
                match usize::try_from(x).ok().and_then(|i| bits.get(i)) {
                    Some(b) => *b,
                    None => rest.query(x),
                }
            }
            OracleNode::Duplicated { set, c, base } => base.query(&dup_eval(set, c, x)),
        }
    }

    pub fn query_u64(&self, x: u64) -> bool {
        self.query(&Nat::from(x))
    }

    pub fn prefix_bits(&self, n: u64) -> Vec<bool> {
        (0..n).map(|i| self.query_u64(i)).collect()
    }

    /// Length-`n` initial segment as a `0`/`1` string.
    pub fn prefix(&self, n: u64) -> String {
        bits_to_string(&self.prefix_bits(n))
    }

    /// Least `c < bound` with bit 0.
    pub fn find_zero(&self, bound: u64) -> Result<Nat, OracleError> {
        (0..bound)
            .find(|&c| !self.query_u64(c))
            .map(Nat::from)
            .ok_or(OracleError::NoZeroBelowBound(bound))
    }
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finaliser.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Counter-based bit: a pure function of `(seed, index)`.
fn random_bit(seed: u64, index: &Nat) -> bool {
    let limbs = index.to_u64_digits();
    let mut h = mix64(seed.wrapping_add(GOLDEN));
    h = mix64(h ^ (limbs.len() as u64).wrapping_mul(GOLDEN));
    for limb in limbs {
        h = mix64(h.wrapping_add(GOLDEN) ^ limb);
    }
    h >> 63 == 1
}

/// Seed of the `index`-th trial derived from `base`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    mix64(base ^ mix64(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            OracleNode::SeededRandom(seed) => write!(f, "random:{seed}"),
            OracleNode::FromSet(s) => write!(f, "set:{s}"),
            OracleNode::PrefixPatch { bits, rest } => {
                write!(f, "prefix:{}:{rest}", bits_to_string(bits))
            }
            OracleNode::Duplicated { set, c, base } => write!(f, "dup:{set}:{c}:{base}"),
        }
    }
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Oracle({self})")
    }
}

fn parse_oracle(cur: &mut Cursor<'_>) -> Result<Oracle, OracleError> {
    let at = cur.position();
    let kind = cur.ident()?;
    cur.expect(":")?;
    match kind {
        "random" => {
            let seed_at = cur.position();
            let seed = cur.nat()?;
            let seed = u64::try_from(&seed).map_err(|_| ParseError {
                position: seed_at,
                message: "seed must fit in 64 bits".into(),
            })?;
            Ok(Oracle::seeded_random(seed))
        }
        "set" => Ok(Oracle::from_set(parse_set(cur)?)),
        "prefix" => {
            cur.skip_ws();
            let rest = cur.rest();
            let len = rest.find(|c| c != '0' && c != '1').unwrap_or(rest.len());
            let bits = rest[..len].chars().map(|c| c == '1').collect();
            cur.expect(&rest[..len])?;
            cur.expect(":")?;
            Ok(Oracle::prefix_patch(bits, parse_oracle(cur)?))
        }
        "dup" => {
            let set = parse_set(cur)?;
            cur.expect(":")?;
            let c = cur.nat()?;
            cur.expect(":")?;
            let base = parse_oracle(cur)?;
            Oracle::duplicated(set, c, base)
        }
        other => Err(ParseError {
            position: at,
            message: format!("unknown oracle kind `{other}`"),
        }
        .into()),
    }
}

impl FromStr for Oracle {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        let o = parse_oracle(&mut cur)?;
        cur.finish()?;
        Ok(o)
    }
}

impl Serialize for Oracle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Oracle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Default for Oracle {
    fn default() -> Self {
        Self::from_set(PeriodicSet::empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;

    #[test]
    fn query_examples() {
        assert!(Oracle::from_set(PeriodicSet::odds()).query_u64(3));
        let a = Oracle::seeded_random(7);
        let c = a.find_zero(64).unwrap();
        let b = Oracle::duplicated(PeriodicSet::odds(), c, a.clone()).unwrap();
        assert_eq!(b.query_u64(6), a.query_u64(3));
        let p: Oracle = "prefix:101:set:residues(2;{0})".parse().unwrap();
        assert!(!p.query_u64(1));
        assert!(p.query_u64(2));
        assert!(!p.query_u64(3));
    }

    #[test]
    fn find_zero_examples() {
        assert_eq!(
            Oracle::from_set(PeriodicSet::odds()).find_zero(10).unwrap(),
            nat(0)
        );
        assert_eq!(
            Oracle::from_set(PeriodicSet::evens())
                .find_zero(10)
                .unwrap(),
            nat(1)
        );
        let ones: Oracle = "prefix:1111:set:residues(1;{0})".parse().unwrap();
        assert_eq!(ones.find_zero(4), Err(OracleError::NoZeroBelowBound(4)));
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(Oracle::from_set(PeriodicSet::odds()).prefix(4), "0101");
        let r = Oracle::seeded_random(42);
        assert_eq!(r.prefix(8), r.prefix(8));
        assert_eq!(r.prefix(8).len(), 8);
        let d: Oracle = "dup:residues(2;{1}):0:set:residues(2;{1})".parse().unwrap();
        assert_eq!(d.prefix(2), "00");
        assert_eq!(d.prefix(4), "0011");
    }

    #[test]
    fn duplicated_checks_c() {
        let odds = Oracle::from_set(PeriodicSet::odds());
        assert_eq!(
            Oracle::duplicated(PeriodicSet::odds(), nat(1), odds),
            Err(OracleError::BaseContainsC(nat(1)))
        );
        assert!("dup:residues(2;{1}):1:set:residues(2;{1})"
            .parse::<Oracle>()
            .is_err());
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in [
            "random:42",
            "set:residues(4;{2})+{1}",
            "prefix:0110:random:3",
            "dup:residues(2;{1}):0:prefix:0:random:9",
        ] {
            let o: Oracle = s.parse().unwrap();
            assert_eq!(o.to_string(), s);
        }
    }

    #[test]
    fn random_bits_are_roughly_balanced() {
        let r = Oracle::seeded_random(1);
        let ones = (0..20_000).filter(|&i| r.query_u64(i)).count();
        assert!((9_500..10_500).contains(&ones), "{ones}");
        // huge indices are fine too
        let big = Nat::from(1u32) << 200u32;
        assert_eq!(r.query(&big), r.query(&big));
    }
}
