//! Multi-criteria decision analysis toolkit.
//!
//! Implements a catalog of MCDM methods behind a uniform set of domain types:
//!
//! - pairwise judgment methods: AHP priority derivation with consistency
//!   checking and the ANP supermatrix extension ([`pairwise`])
//! - criteria weighting: Entropy, CRITIC and the Best-Worst Method
//!   ([`weighting`])
//! - classical decision-matrix rankers: TOPSIS, VIKOR, PROMETHEE II, COPRAS,
//!   SAW/WSM, WPM, MOORA, behind a method registry ([`ranking`])
//! - stratified decision making under uncertainty: SMCDM with given or
//!   independently derived state probabilities, and the stratified BWM
//!   ([`stratified`])
//! - block-structured CSV input and CSV/JSON result serialization ([`io`])
//! - a runtime-scaling measurement harness ([`bench`])
//!
//! Everything is pure and single-threaded; all types are immutable after
//! construction and safe to share across threads. The `mcdm` binary exposes
//! the same functionality as a CSV-driven command line tool ([`cli`]).

// Index loops over parallel rows/columns are the house style here; iterator
// chains would bury the matrix arithmetic.
#![allow(clippy::needless_range_loop)]

pub mod bench;
pub mod cli;
pub mod core;
pub mod io;
pub mod matrix;
pub mod pairwise;
pub mod ranking;
pub mod stratified;
pub mod weighting;

mod dot;

pub use crate::core::{
    normalize_minmax, normalize_vector, rank_from_scores, CoreError, DecisionMatrix, Direction,
    RankResult, ScoreDirection, WeightVector,
};
pub use crate::matrix::Mat;
