//! Permutation selectors and their use in ad-hoc radio network gossiping.
//!
//! A selector is an ordered sequence of subsets of the label universe
//! `[0, N)`. A set `S` *isolates* `x` from `X` when `S ∩ X = {x}`. This crate
//! provides:
//!
//! * [`selector`] and [`verify`]: selector types, isolation predicates and
//!   exhaustive verifiers for strong, permutation, `(k, q)` and
//!   `(k, q)`-permutation selectors.
//! * [`params`] and [`build`]: the size constants of the random construction,
//!   seeded random generation and Las Vegas generate-and-verify.
//! * [`coupon`] and [`tail`]: exact rational probabilities for the
//!   coupon-subsequence events behind the construction, brute-force oracles,
//!   closed-form bounds, the Chernoff tail and the union bound.
//! * [`radio`]: a discrete-round collision-channel simulator running
//!   `QuasiGossip` and full gossiping on directed networks.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod bits;
pub mod build;
pub mod combinatorics;
pub mod coupon;
mod error;
pub mod lis;
pub mod params;
pub mod radio;
pub mod rng;
pub mod selector;
pub mod tail;
pub mod verify;

pub use error::{Error, Result};
pub use selector::{Instance, IsolationTrace, Label, LabelSet, Selector};
pub use verify::{Budget, Counterexample, SizeMode, Target, Verdict};
