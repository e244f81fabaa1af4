//! Traceless SU(2) representations of knot groups through braid actions:
//! exact fixed points of the Hurwitz action, their intersection indices and
//! signed count, Markov-move audits, the exact two-strand pillowcase, and
//! classical invariants used as an independent check.

#![allow(clippy::needless_range_loop)]

pub mod braid;
pub mod cli;
pub mod error;
pub mod fixpoint;
pub mod lattice;
pub mod laurent;
pub mod markov;
pub mod oracle;
pub mod pillowcase;
pub mod rep;
pub mod report;
pub mod su2;

pub use braid::{parse_braid, BraidWord};
pub use error::{Error, Result};
pub use fixpoint::{casson_lin, solve_fixed_points, SolverConfig};
