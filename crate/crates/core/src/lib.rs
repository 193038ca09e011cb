//! Executable workbench for many-one and one-one reducibility on Cantor space.
//!
//! The crate is organised around five pieces:
//!
//! * [`funcdsl`]: a closed DSL of total functions on the naturals,
//! * [`paramsets`]: eventually periodic sets with exact almost-inclusion,
//! * [`oracle`]: infinite bit sequences behind a membership query,
//! * [`duplication`]: the `B_S = f_S⁻¹(A)` construction and its reduction checks,
//! * [`randomness`]: Martin-Löf test levels with exact dyadic measures.
//!
//! [`harness`] holds brute-force cross-checks and the named experiment suites,
//! and [`cli`] wires everything to the `rigiditylab` binary.

pub mod cli;
pub mod duplication;
pub mod funcdsl;
pub mod harness;
pub mod oracle;
pub mod paramsets;
pub mod randomness;
mod syntax;

pub use num_bigint::BigUint;

/// Arbitrary-precision natural number.
pub type Nat = BigUint;

pub use duplication::{InclusionOutcome, InclusionReport, ReductionStatus, ReductionVerdict};
pub use funcdsl::{FuncTerm, IdentityVerdict, TermError};
pub use oracle::{Oracle, OracleError};
pub use paramsets::{AlmostInclusion, PeriodicSet, SetError};
pub use randomness::{ConstraintSet, DyadicRational};
pub use syntax::ParseError;

/// Shorthand for building a [`Nat`] from a machine integer.
pub fn nat(x: u64) -> Nat {
    Nat::from(x)
}
