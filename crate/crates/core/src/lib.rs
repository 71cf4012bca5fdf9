//! A Horn-clause resolution kernel and, built on it, staged kinding and
//! typing for a small ML with row-polymorphic extensible records.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches the
//! file system or a terminal lives in the `rowhorn` companion crate.
//!
//! Layout:
//!
//! * [`term`]: first-order terms, substitutions, finite and rational-tree
//!   unification, variant checks, and cyclic term graphs.
//! * [`clause`]: the clause language, its parser, and [`clause::Program`].
//! * [`engine`]: SLD resolution, inductive or coinductive.
//! * [`types`]: kinds, type expressions with rows, kind checking, and
//!   row-aware type unification.
//! * [`infer`]: the surface language and its type inference.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod clause;
pub mod engine;
pub mod infer;
pub mod syntax;
pub mod term;
pub mod types;

pub use clause::{parse_goal, parse_program, rename_apart, Atom, HornClause, Program};
pub use engine::{solve, solve_coinductive, EngineConfig, Mode, SearchStatus, Solution, Solutions};
pub use syntax::{Location, SyntaxError};
pub use term::{
    is_variant, unify_finite, unify_rational, RationalTerm, Substitution, Symbol, Term, Var,
    VarSupply,
};
