//! Shared domain types, normalization primitives and ranking utilities.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::Mat;

/// Absolute score difference below which two alternatives are reported tied.
///
/// Chosen below the accumulation error of the ranking methods at double
/// precision.
pub const TIE_EPS: f64 = 1e-12;

/// Tolerance on `sum(weights) == 1`.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

/// Optimization direction of a criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Higher raw values are preferred.
    Benefit,
    /// Lower raw values are preferred.
    Cost,
}

/// Whether larger or smaller scores win when ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreDirection {
    HigherIsBetter,
    LowerIsBetter,
}

#[derive(Debug, Error, PartialEq)]
pub enum CoreError {
    #[error("column {column} is entirely zero")]
    AllZeroColumn { column: usize },
    #[error("column {column} is constant (max == min); it carries no discriminating information")]
    ConstantColumn { column: usize },
    #[error("matrix must have at least 2 alternatives and 1 criterion, got {rows}x{cols}")]
    TooSmall { rows: usize, cols: usize },
    #[error("{what} count {got} does not match matrix dimension {expected}")]
    NameCountMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("duplicate {what} name: {name}")]
    DuplicateName { what: &'static str, name: String },
    #[error("non-finite entry at row {row}, column {column}")]
    NonFiniteEntry { row: usize, column: usize },
    #[error("weight {index} is negative: {value}")]
    NegativeWeight { index: usize, value: f64 },
    #[error("weights sum to {sum}, expected 1 within {tol}")]
    WeightsNotNormalized { sum: f64, tol: f64 },
    #[error("non-finite score at index {index}")]
    NonFiniteScore { index: usize },
}

/// Alternatives x criteria performance table with per-criterion directions.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionMatrix {
    values: Mat,
    alternative_names: Vec<String>,
    criterion_names: Vec<String>,
    directions: Vec<Direction>,
}

fn check_unique(names: &[String], what: &'static str) -> Result<(), CoreError> {
    for (i, a) in names.iter().enumerate() {
        if names[..i].contains(a) {
            return Err(CoreError::DuplicateName {
                what,
                name: a.clone(),
            });
        }
    }
    Ok(())
}

impl DecisionMatrix {
    pub fn new(
        values: Mat,
        alternative_names: Vec<String>,
        criterion_names: Vec<String>,
        directions: Vec<Direction>,
    ) -> Result<Self, CoreError> {
        let (m, n) = (values.rows(), values.cols());
        if m < 2 || n < 1 {
            return Err(CoreError::TooSmall { rows: m, cols: n });
        }
        if alternative_names.len() != m {
            return Err(CoreError::NameCountMismatch {
                what: "alternative",
                got: alternative_names.len(),
                expected: m,
            });
        }
        if criterion_names.len() != n {
            return Err(CoreError::NameCountMismatch {
                what: "criterion",
                got: criterion_names.len(),
                expected: n,
            });
        }
        if directions.len() != n {
            return Err(CoreError::NameCountMismatch {
                what: "direction",
                got: directions.len(),
                expected: n,
            });
        }
        check_unique(&alternative_names, "alternative")?;
        check_unique(&criterion_names, "criterion")?;
        for r in 0..m {
            for c in 0..n {
                if !values[(r, c)].is_finite() {
                    return Err(CoreError::NonFiniteEntry { row: r, column: c });
                }
            }
        }
        Ok(DecisionMatrix {
            values,
            alternative_names,
            criterion_names,
            directions,
        })
    }

    pub fn values(&self) -> &Mat {
        &self.values
    }

    pub fn alternatives(&self) -> usize {
        self.values.rows()
    }

    pub fn criteria(&self) -> usize {
        self.values.cols()
    }

    pub fn alternative_names(&self) -> &[String] {
        &self.alternative_names
    }

    pub fn criterion_names(&self) -> &[String] {
        &self.criterion_names
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn direction(&self, criterion: usize) -> Direction {
        self.directions[criterion]
    }
}

/// Nonnegative criteria weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    weights: Vec<f64>,
    criterion_names: Vec<String>,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>, criterion_names: Vec<String>) -> Result<Self, CoreError> {
        if criterion_names.len() != weights.len() {
            return Err(CoreError::NameCountMismatch {
                what: "criterion",
                got: criterion_names.len(),
                expected: weights.len(),
            });
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(CoreError::NonFiniteEntry { row: 0, column: i });
            }
            if w < 0.0 {
                return Err(CoreError::NegativeWeight { index: i, value: w });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(CoreError::WeightsNotNormalized {
                sum,
                tol: WEIGHT_SUM_TOL,
            });
        }
        Ok(WeightVector {
            weights,
            criterion_names,
        })
    }

    /// Normalize arbitrary nonnegative values to sum one.
    pub fn from_unnormalized(
        values: Vec<f64>,
        criterion_names: Vec<String>,
    ) -> Result<Self, CoreError> {
        let sum: f64 = values.iter().sum();
        if sum <= 0.0 || !sum.is_finite() {
            return Err(CoreError::WeightsNotNormalized {
                sum,
                tol: WEIGHT_SUM_TOL,
            });
        }
        let weights = values.iter().map(|w| w / sum).collect();
        WeightVector::new(weights, criterion_names)
    }

    pub fn uniform(n: usize, criterion_names: Vec<String>) -> Result<Self, CoreError> {
        WeightVector::new(vec![1.0 / n as f64; n], criterion_names)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn criterion_names(&self) -> &[String] {
        &self.criterion_names
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Scores plus a deterministic best-first ordering with an explicit tie report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankResult {
    pub scores: Vec<f64>,
    /// Alternative indices, best first. Exact score ties break by ascending index.
    pub ordering: Vec<usize>,
    pub score_direction: ScoreDirection,
    /// Groups (size >= 2) of alternative indices whose scores differ by less
    /// than [`TIE_EPS`], in ordering order.
    pub ties: Vec<Vec<usize>>,
}

impl RankResult {
    /// 1-based rank of each alternative (position in `ordering`).
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.ordering.len()];
        for (pos, &alt) in self.ordering.iter().enumerate() {
            ranks[alt] = pos + 1;
        }
        ranks
    }

    /// Index of the best alternative.
    pub fn best(&self) -> usize {
        self.ordering[0]
    }
}

/// Normalize a column to unit Euclidean norm, preserving signs.
pub fn normalize_vector(column: &[f64]) -> Result<Vec<f64>, CoreError> {
    let norm = column.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(CoreError::AllZeroColumn { column: 0 });
    }
    Ok(column.iter().map(|x| x / norm).collect())
}

/// Min-max normalize a column into [0, 1], mirrored for cost criteria.
pub fn normalize_minmax(column: &[f64], direction: Direction) -> Result<Vec<f64>, CoreError> {
    let min = column.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = column.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == min {
        return Err(CoreError::ConstantColumn { column: 0 });
    }
    let span = max - min;
    Ok(column
        .iter()
        .map(|&x| match direction {
            Direction::Benefit => (x - min) / span,
            Direction::Cost => (max - x) / span,
        })
        .collect())
}

/// Deterministic ranking of a score vector.
///
/// The ordering sorts by score in the winning direction; exact score ties
/// break by ascending alternative index. The tie report groups consecutive
/// sorted scores closer than [`TIE_EPS`].
pub fn rank_from_scores(
    scores: &[f64],
    direction: ScoreDirection,
) -> Result<RankResult, CoreError> {
    for (i, s) in scores.iter().enumerate() {
        if !s.is_finite() {
            return Err(CoreError::NonFiniteScore { index: i });
        }
    }
    if scores.is_empty() {
        return Ok(RankResult {
            scores: Vec::new(),
            ordering: Vec::new(),
            score_direction: direction,
            ties: Vec::new(),
        });
    }
    let mut ordering: Vec<usize> = (0..scores.len()).collect();
    ordering.sort_by(|&a, &b| {
        let cmp = match direction {
            ScoreDirection::HigherIsBetter => scores[b].total_cmp(&scores[a]),
            ScoreDirection::LowerIsBetter => scores[a].total_cmp(&scores[b]),
        };
        cmp.then(a.cmp(&b))
    });

    let mut ties = Vec::new();
    let mut group = vec![ordering[0]];
    for win in ordering.windows(2) {
        let (prev, next) = (win[0], win[1]);
        if (scores[prev] - scores[next]).abs() < TIE_EPS {
            group.push(next);
        } else {
            if group.len() >= 2 {
                ties.push(std::mem::take(&mut group));
            }
            group = vec![next];
        }
    }
    if group.len() >= 2 {
        ties.push(group);
    }
    for g in &mut ties {
        g.sort_unstable();
    }

    Ok(RankResult {
        scores: scores.to_vec(),
        ordering,
        score_direction: direction,
        ties,
    })
}
