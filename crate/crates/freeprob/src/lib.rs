//! Desk-scale verification toolkit for operator-valued free probability.
//!
//! The crate builds up from combinatorics to operator models:
//!
//! - [`ncpart`]: set partitions, non-crossing partitions, pair partitions,
//!   and the nesting forest used for nested cumulant evaluation.
//! - [`mcx`]: moment-cumulant transforms over interleaved matrix-coefficient
//!   words, with the cumulant functional families built on top.
//! - [`wick`]: closed-form free and classical Wick moment sums, plus
//!   star-moments of circular elements.
//! - [`fock`]: truncated full Fock and bosonic occupation-number operator
//!   models with exactness-guarded vacuum expectations.
//! - [`amplify`]: matrix amplification with block conditional expectations
//!   and the theorem-checking procedures built from it.
//! - [`standard_poly`]: standard polynomial identities on small matrix
//!   algebras.
//! - [`symfock`]: the cyclic coefficient-matrix construction showing the
//!   symmetric Fock bimodule absorbs arbitrary matrix coefficients.
//! - [`scenario`] / [`report`] / [`suites`]: the JSON scenario format, the
//!   report format, and the named verification suites behind the CLI.

pub mod amplify;
pub mod error;
pub mod fock;
pub mod matrix;
pub mod mcx;
pub mod ncpart;
pub mod report;
pub mod scenario;
pub mod sparse;
pub mod standard_poly;
pub mod suites;
pub mod symfock;
pub mod wick;

pub use error::{Error, Result};
