//! Symbolic workbench for the λμ-calculus, its resource calculus and the
//! Taylor expansion linking them.
//!
//! Values are immutable and nameless; every operation is a pure function.

pub mod combinatorics;
mod error;
pub mod gen;
pub mod lamu;
pub mod measures;
pub mod oracle;
pub mod resource;
pub mod suites;
pub mod sum;
pub mod syntax;
pub mod taylor;
pub mod textio;

pub use error::{Error, Result};
pub use sum::{Bool, Nat, Semiring, SemiringTag, Sum};
pub use syntax::{alpha_eq, Bag, Context, Path, Ref, ResContext, ResTerm, Syntax, Term};
