use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::dyadic::DyadicRational;
use super::RandomnessError;
use crate::Nat;

/// Conjunction of coordinate equalities `A(a) = A(b)`: a clopen subset of
/// Cantor space.
///
/// Pairs are stored unordered (`a < b`), deduplicated, in insertion order so
/// that a level built by extending another keeps it as a prefix.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstraintSet {
    pairs: Vec<(Nat, Nat)>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (Nat, Nat)>,
    ) -> Result<Self, RandomnessError> {
        let mut cs = Self::new();
        for (a, b) in pairs {
            cs.push(a, b)?;
        }
        Ok(cs)
    }

    pub fn push(&mut self, a: Nat, b: Nat) -> Result<(), RandomnessError> {
        if a == b {
            return Err(RandomnessError::EqualEndpoints(a));
        }
        let pair = if a < b { (a, b) } else { (b, a) };
        if !self.pairs.contains(&pair) {
            self.pairs.push(pair);
        }
        Ok(())
    }

    pub fn pairs(&self) -> &[(Nat, Nat)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Distinct coordinates, ascending.
    pub fn coordinates(&self) -> Vec<Nat> {
        let mut v: Vec<Nat> = self
            .pairs
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        v.sort();
        v
    }

    /// `(V, C)`: number of coordinates and of connected components of the
    /// pair graph.
    pub fn vertices_and_components(&self) -> (usize, usize) {
        let mut index: BTreeMap<&Nat, usize> = BTreeMap::new();
        for (a, b) in &self.pairs {
            let next = index.len();
            index.entry(a).or_insert(next);
            let next = index.len();
            index.entry(b).or_insert(next);
        }
        let mut dsu = Dsu::new(index.len());
        let mut components = index.len();
        for (a, b) in &self.pairs {
            if dsu.union(index[a], index[b]) {
                components -= 1;
            }
        }
        (index.len(), components)
    }

    /// `μ = 2^-(V - C)`: each component of `m` coordinates keeps 2 of its
    /// `2^m` assignments.
    pub fn exact_measure(&self) -> DyadicRational {
        let (v, c) = self.vertices_and_components();
        DyadicRational::half_pow((v - c) as u64)
    }
}

/// Disjoint-set forest with path halving and union by size.
struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    /// Returns whether two distinct sets were merged.
    fn union(&mut self, i: usize, j: usize) -> bool {
        let (mut a, mut b) = (self.find(i), self.find(j));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

impl Serialize for ConstraintSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.pairs
            .iter()
            .map(|(a, b)| [nat_json(a), nat_json(b)])
            .collect::<Vec<_>>()
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ConstraintSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<[serde_json::Value; 2]>::deserialize(deserializer)?;
        let parse = |v: &serde_json::Value| -> Result<Nat, D::Error> {
            match v {
                serde_json::Value::Number(n) => n
                    .as_u64()
                    .map(Nat::from)
                    .ok_or_else(|| serde::de::Error::custom("coordinate must be natural")),
                serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
                _ => Err(serde::de::Error::custom("coordinate must be natural")),
            }
        };
        let mut pairs = Vec::with_capacity(raw.len());
        for [a, b] in &raw {
            pairs.push((parse(a)?, parse(b)?));
        }
        ConstraintSet::from_pairs(pairs).map_err(serde::de::Error::custom)
    }
}

fn nat_json(x: &Nat) -> serde_json::Value {
    match u64::try_from(x) {
        Ok(v) => v.into(),
        Err(_) => x.to_string().into(),
    }
}
