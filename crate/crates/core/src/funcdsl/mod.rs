//! A closed DSL of total functions `ℕ → ℕ`.
//!
//! Every constructor is total, so any [`FuncTerm`] that exists evaluates on
//! every input. Terms are immutable and cheap to clone (shared via `Arc`).

mod parse;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::paramsets::{PeriodicSet, SetError};
use crate::syntax::ParseError;
use crate::Nat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("{0}(n) requires n >= 1")]
    ZeroArgument(&'static str),
    #[error("next() over a finite set is not total: {0}")]
    FiniteNextIn(PeriodicSet),
}

impl From<SetError> for TermError {
    fn from(e: SetError) -> Self {
        match e {
            SetError::Syntax(p) => TermError::Syntax(p),
            other => TermError::Syntax(ParseError {
                position: 0,
                message: other.to_string(),
            }),
        }
    }
}

/// The node of a term. Read-only view; build terms through [`FuncTerm`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Identity,
    Const(Nat),
    Add(Nat),
    /// Truncated subtraction `max(x - n, 0)`.
    Sub(Nat),
    Mul(Nat),
    DivFloor(Nat),
    Mod(Nat),
    Piecewise {
        guard: PeriodicSet,
        then: FuncTerm,
        otherwise: FuncTerm,
    },
    Compose {
        outer: FuncTerm,
        inner: FuncTerm,
    },
    NextIn(PeriodicSet),
    /// `2x ↦ x`, `2x+1 ↦ x` if `x ∈ set`, otherwise `2x+1 ↦ c`.
    Dup {
        set: PeriodicSet,
        c: Nat,
    },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FuncTerm(Arc<Node>);

impl FuncTerm {
    fn wrap(node: Node) -> Self {
        FuncTerm(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn identity() -> Self {
        Self::wrap(Node::Identity)
    }

    pub fn constant(n: impl Into<Nat>) -> Self {
        Self::wrap(Node::Const(n.into()))
    }

    pub fn add(n: impl Into<Nat>) -> Self {
        Self::wrap(Node::Add(n.into()))
    }

    pub fn sub(n: impl Into<Nat>) -> Self {
        Self::wrap(Node::Sub(n.into()))
    }

    pub fn mul(n: impl Into<Nat>) -> Result<Self, TermError> {
        let n = n.into();
        if n.is_zero() {
            return Err(TermError::ZeroArgument("mul"));
        }
        Ok(Self::wrap(Node::Mul(n)))
    }

    pub fn div_floor(d: impl Into<Nat>) -> Result<Self, TermError> {
        let d = d.into();
        if d.is_zero() {
            return Err(TermError::ZeroArgument("div"));
        }
        Ok(Self::wrap(Node::DivFloor(d)))
    }

    pub fn modulo(m: impl Into<Nat>) -> Result<Self, TermError> {
        let m = m.into();
        if m.is_zero() {
            return Err(TermError::ZeroArgument("mod"));
        }
        Ok(Self::wrap(Node::Mod(m)))
    }

    pub fn piecewise(guard: PeriodicSet, then: FuncTerm, otherwise: FuncTerm) -> Self {
        Self::wrap(Node::Piecewise {
            guard,
            then,
            otherwise,
        })
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: FuncTerm, inner: FuncTerm) -> Self {
        Self::wrap(Node::Compose { outer, inner })
    }

    /// Composes a pipeline applied left to right: `chain([f, g, h]) = h ∘ g ∘ f`.
    pub fn chain(stages: impl IntoIterator<Item = FuncTerm>) -> Self {
        stages
            .into_iter()
            .reduce(|inner, outer| Self::compose(outer, inner))
            .unwrap_or_else(Self::identity)
    }

    pub fn next_in(set: PeriodicSet) -> Result<Self, TermError> {
        if !set.is_infinite() {
            return Err(TermError::FiniteNextIn(set));
        }
        Ok(Self::wrap(Node::NextIn(set)))
    }

    pub fn dup(set: PeriodicSet, c: impl Into<Nat>) -> Self {
        Self::wrap(Node::Dup { set, c: c.into() })
    }

    pub fn eval(&self, x: &Nat) -> Nat {
        match self.node() {
            Node::Identity => x.clone(),
            Node::Const(n) => n.clone(),
            Node::Add(n) => x + n,
            Node::Sub(n) => {
                if x > n {
                    x - n
                } else {
                    Nat::zero()
                }
            }
            Node::Mul(n) => x * n,
            Node::DivFloor(d) => x / d,
            Node::Mod(m) => x % m,
            Node::Piecewise {
                guard,
                then,
                otherwise,
            } => {
                if guard.contains(x) {
                    then.eval(x)
                } else {
                    otherwise.eval(x)
                }
            }
            Node::Compose { outer, inner } => outer.eval(&inner.eval(x)),
            Node::NextIn(set) => set
                .next_after(x)
                .expect("next() is only built over infinite sets"),
            Node::Dup { set, c } => dup_eval(set, c, x),
        }
    }

    pub fn eval_u64(&self, x: u64) -> Nat {
        self.eval(&Nat::from(x))
    }

    /// All `x < bound` with `f(x) ≠ x`, ascending.
    pub fn nonfixed_points(&self, bound: u64) -> Vec<u64> {
        (0..bound)
            .filter(|&x| {
                let x = Nat::from(x);
                self.eval(&x) != x
            })
            .collect()
    }

    /// Window-relative check of "eventually the identity".
    ///
    /// `slack` defaults to `bound / 10`.
    pub fn eventually_identity_verdict(&self, bound: u64, slack: Option<u64>) -> IdentityVerdict {
        let slack = slack.unwrap_or(bound / 10);
        let last = (0..bound).rev().find(|&x| {
            let x = Nat::from(x);
            self.eval(&x) != x
        });
        match last {
            None => IdentityVerdict::IdentityBeyond(0),
            Some(v) if v >= bound.saturating_sub(slack) => IdentityVerdict::ViolationsPersist(v),
            Some(v) => IdentityVerdict::IdentityBeyond(v + 1),
        }
    }
}

/// Evaluates the duplication map `f_S` with fallback value `c`.
pub fn dup_eval(set: &PeriodicSet, c: &Nat, z: &Nat) -> Nat {
    let x: Nat = z >> 1u32;
    if !z.bit(0) || set.contains(&x) {
        x
    } else {
        c.clone()
    }
}

/// `k(x)` = next element of `s` above `x` when `x ∈ s`, else `x`.
///
/// If `s ⊆ A` then `k` is an m-autoreduction of `A` that moves every point
/// of `s`, so no set containing an infinite computable subset is m-rigid.
pub fn bi_immune_refuter(s: &PeriodicSet) -> Result<FuncTerm, TermError> {
    Ok(FuncTerm::piecewise(
        s.clone(),
        FuncTerm::next_in(s.clone())?,
        FuncTerm::identity(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "at", rename_all = "snake_case")]
pub enum IdentityVerdict {
    /// Every `x` in `[n0, bound)` is fixed.
    IdentityBeyond(u64),
    /// The last non-fixed point sits within the slack of the window end;
    /// the window says nothing about eventual identity.
    ViolationsPersist(u64),
}

impl fmt::Display for FuncTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Identity => f.write_str("id"),
            Node::Const(n) => write!(f, "const({n})"),
            Node::Add(n) => write!(f, "add({n})"),
            Node::Sub(n) => write!(f, "sub({n})"),
            Node::Mul(n) => write!(f, "mul({n})"),
            Node::DivFloor(n) => write!(f, "div({n})"),
            Node::Mod(n) => write!(f, "mod({n})"),
            Node::Piecewise {
                guard,
                then,
                otherwise,
            } => write!(f, "piecewise({guard},{then},{otherwise})"),
            Node::Compose { outer, inner } => write!(f, "compose({outer},{inner})"),
            Node::NextIn(s) => write!(f, "next({s})"),
            Node::Dup { set, c } => write!(f, "dup({set},{c})"),
        }
    }
}

impl fmt::Debug for FuncTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FuncTerm({self})")
    }
}

impl FromStr for FuncTerm {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_term(s)
    }
}

impl Serialize for FuncTerm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FuncTerm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Default for FuncTerm {
    fn default() -> Self {
        Self::identity()
    }
}

/// `x ↦ 2x + 1`.
pub fn odd_embedding() -> FuncTerm {
    FuncTerm::chain([
        FuncTerm::mul(2u32).expect("nonzero"),
        FuncTerm::add(Nat::one()),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;

    fn term(s: &str) -> FuncTerm {
        s.parse().unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(FuncTerm::identity().eval_u64(7), nat(7));
        let f = term("dup(residues(2;{1}), 0)");
        assert_eq!(f.eval_u64(6), nat(3));
        assert_eq!(f.eval_u64(7), nat(3));
        assert_eq!(f.eval_u64(9), nat(0));
        assert_eq!(term("next(residues(2;{0}))").eval_u64(5), nat(6));
        assert_eq!(term("compose(add(1), mul(2))").eval_u64(10), nat(21));
        assert_eq!(term("sub(3)").eval_u64(2), nat(0));
        assert_eq!(term("sub(3)").eval_u64(10), nat(7));
    }

    #[test]
    fn construction_rejects_partial_terms() {
        assert!(matches!(
            "next(residues(2;{}))".parse::<FuncTerm>(),
            Err(TermError::FiniteNextIn(_))
        ));
        assert!(matches!(
            "mul(0)".parse::<FuncTerm>(),
            Err(TermError::ZeroArgument("mul"))
        ));
        assert!(matches!(
            "div(0)".parse::<FuncTerm>(),
            Err(TermError::ZeroArgument("div"))
        ));
        assert!(matches!(
            "mod(0)".parse::<FuncTerm>(),
            Err(TermError::ZeroArgument("mod"))
        ));
    }

    #[test]
    fn nonfixed_point_examples() {
        assert!(FuncTerm::identity().nonfixed_points(100).is_empty());
        assert_eq!(FuncTerm::add(1u32).nonfixed_points(4), vec![0, 1, 2, 3]);
        let k = term("piecewise(residues(2;{0}), next(residues(2;{0})), id)");
        assert_eq!(k.nonfixed_points(5), vec![0, 2, 4]);
    }

    #[test]
    fn identity_verdicts() {
        assert_eq!(
            FuncTerm::identity().eventually_identity_verdict(1000, None),
            IdentityVerdict::IdentityBeyond(0)
        );
        assert_eq!(
            FuncTerm::add(5u32).eventually_identity_verdict(1000, None),
            IdentityVerdict::ViolationsPersist(999)
        );
        let f = FuncTerm::piecewise(
            PeriodicSet::finite([nat(0), nat(1), nat(2)]),
            FuncTerm::constant(nat(7)),
            FuncTerm::identity(),
        );
        assert_eq!(
            f.eventually_identity_verdict(1000, None),
            IdentityVerdict::IdentityBeyond(3)
        );
        // with zero slack even a late violation is reported as a threshold
        assert_eq!(
            FuncTerm::add(5u32).eventually_identity_verdict(1000, Some(0)),
            IdentityVerdict::IdentityBeyond(1000)
        );
    }

    #[test]
    fn refuter_examples() {
        let k = bi_immune_refuter(&PeriodicSet::evens()).unwrap();
        assert_eq!(k.eval_u64(4), nat(6));
        assert_eq!(k.eval_u64(5), nat(5));
        let k = bi_immune_refuter(&PeriodicSet::odds()).unwrap();
        assert_eq!(k.nonfixed_points(10), vec![1, 3, 5, 7, 9]);
        let k = bi_immune_refuter(&"residues(3;{0})".parse().unwrap()).unwrap();
        assert_eq!(k.eval_u64(3), nat(6));
        assert!(bi_immune_refuter(&PeriodicSet::finite([nat(3)])).is_err());
    }

    #[test]
    fn big_values_do_not_overflow() {
        let f = term("mul(18446744073709551616)");
        assert_eq!(f.eval_u64(4).to_string(), "73786976294838206464");
    }
}
