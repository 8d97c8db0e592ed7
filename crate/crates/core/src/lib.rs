//! Verification toolkit for set-valued social choice functions under weak
//! preferences.
//!
//! The crate is organised bottom-up:
//!
//! * [`prefcore`]: alternatives, weak orders, profiles and everything derived
//!   from them (rank and support data, Pareto and Condorcet relations, the
//!   Kelly comparison of choice sets).
//! * [`enumeration`]: exhaustive generators for orders, profiles and
//!   single-voter deviations, plus permutation utilities.
//! * [`rules`]: a registry of named social choice functions.
//! * [`axioms`]: exhaustive checkers returning a verdict and, on failure, a
//!   witness that re-validates on its own.
//! * [`proofreplay`]: a propagation engine over candidate choice sets that
//!   replays impossibility arguments and audits every deduction.
//! * [`cli`]: the command-line front end.

pub mod axioms;
pub mod cli;
pub mod enumeration;
pub mod error;
pub mod prefcore;
pub mod proofreplay;
pub mod rules;

pub use error::{Error, Result};
