//! Integer group determinants.
//!
//! The group determinant of a finite group `G` is the determinant of the
//! matrix `(x_{g h^-1})` indexed by `G x G`; `S(G)` is the set of its values
//! at integer points. This crate evaluates it exactly for abelian groups and
//! for Q8 / D4, factors it through characters and irreducible
//! representations, decides which primes lie in `S(G)` for abelian p-groups
//! with a `C_p` direct factor, and checks those verdicts against exhaustive
//! search.

pub mod cli;
pub mod cyclo;
pub mod error;
pub mod exactdet;
pub mod group;
pub mod primes;
pub mod search;
pub mod suites;
pub mod theorems;

pub use error::{Error, Result};
pub use group::{Assignment, Builtin, CollapsePart, FiniteGroup};
