//! Latency-constrained tacit coordination: when does a shared entangled
//! resource give a certifiable edge over the best classical strategy?
//!
//! The crate is layered bottom-up:
//!
//! - [`game`]: two-party XOR games, classical and quantum values, noise.
//! - [`certify`]: exact binomial tails, required rounds and rates.
//! - [`hardware`]: time-multiplexed node and link model, operational criteria.
//! - [`simulate`]: Monte Carlo rounds and a discrete-event HEG pipeline.
//! - [`multiparty`]: the three-party majority game on GHZ states.
//! - [`cqed`]: cavity readout errors and cavity-assisted GHZ generation.
//! - [`config`], [`units`], [`report`]: configuration files, presets and
//!   the report builders used by the `lctc` binary.

// `!(x > 0.0)` is the NaN-rejecting guard; index loops mirror matrix notation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::excessive_precision)]

pub mod certify;
pub mod config;
pub mod cqed;
pub mod error;
pub mod game;
pub mod hardware;
pub mod multiparty;
pub mod numeric;
pub mod report;
pub mod simulate;
pub mod units;

pub use error::{Error, Result};
