//! Block-structured CSV input and CSV/JSON result output.
//!
//! Input files are plain CSV where one or more fully empty rows separate
//! consecutive tables ("blocks"). A block's first row and column are taken
//! as labels when they contain non-numeric cells; all-numeric blocks get
//! generated labels. Numbers use a decimal point, scientific notation is
//! accepted, and both LF and CRLF files parse.

mod blocks;
mod formats;
mod results;

use thiserror::Error;

use crate::core::CoreError;
use crate::pairwise::PairwiseError;
use crate::stratified::StratifiedError;
use crate::weighting::WeightingError;

pub use blocks::{
    block_as_string_vector, parse_labeled_numeric, Block, CsvBlockFile, LabeledBlock,
};
pub use formats::{
    read_ahp_csv, read_bwm_csv, read_decision_matrix_csv, read_sbwm_csv, read_smcdm_csv,
};
pub use results::{
    fmt_f64, read_rank_csv, read_rank_json, read_weights_csv, read_weights_json, write_rank_csv,
    write_rank_json, write_result, write_weights_csv, write_weights_json, OutputFormat, RankCsv,
    RankDoc, ResultPayload, WeightsDoc,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {detail}")]
    Read { path: String, detail: String },
    #[error("{path}: expected {expected} blocks, found {got}")]
    BlockCountMismatch {
        expected: usize,
        got: usize,
        path: String,
    },
    #[error("block {block} is empty")]
    EmptyBlock { block: usize },
    #[error("block {block} must be square, got {rows}x{cols}")]
    NonSquareBlock {
        block: usize,
        rows: usize,
        cols: usize,
    },
    #[error("block {block}: {detail}")]
    DimensionMismatch { block: usize, detail: String },
    #[error("block {block}, row {row}, column {col}: cell {content:?} is not a finite number")]
    NonNumericCell {
        block: usize,
        row: usize,
        col: usize,
        content: String,
    },
    #[error("block {block}, row {row}, column {col}: negative entry {value}")]
    NegativeEntry {
        block: usize,
        row: usize,
        col: usize,
        value: f64,
    },
    #[error("block {block} must be a single row or column vector, got {rows}x{cols}")]
    NotAVector {
        block: usize,
        rows: usize,
        cols: usize,
    },
    #[error("block {block}: unknown criterion label {label:?}")]
    UnknownCriterionLabel { block: usize, label: String },
    #[error("block {block}: {source}")]
    InvalidPairwiseBlock {
        block: usize,
        source: PairwiseError,
    },
    #[error("malformed result document: {detail}")]
    MalformedResult { detail: String },
    #[error(transparent)]
    Stratified(#[from] StratifiedError),
    #[error(transparent)]
    Weighting(#[from] WeightingError),
    #[error(transparent)]
    Core(#[from] CoreError),
}
