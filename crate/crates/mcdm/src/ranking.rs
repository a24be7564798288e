//! Classical decision-matrix ranking methods behind a uniform registry:
//! TOPSIS, VIKOR, PROMETHEE II, COPRAS, SAW/WSM, WPM and MOORA.

use thiserror::Error;

use crate::core::{
    normalize_minmax, normalize_vector, rank_from_scores, CoreError, DecisionMatrix, Direction,
    RankResult, ScoreDirection, WeightVector,
};

#[derive(Debug, Error, PartialEq)]
pub enum RankingError {
    #[error("unknown method {name:?}; available: {}", available.join(", "))]
    UnknownMethod {
        name: String,
        available: Vec<&'static str>,
    },
    #[error("weight vector has {got} entries, matrix has {expected} criteria")]
    WeightCountMismatch { got: usize, expected: usize },
    #[error("criterion {column} is entirely zero; vector normalization is undefined")]
    AllZeroColumn { column: usize },
    #[error("criterion {column} must be strictly positive for this method, got {value} at row {row}")]
    NonPositiveEntry {
        column: usize,
        row: usize,
        value: f64,
    },
    #[error("cost criterion {column} must be strictly positive for COPRAS, got {value} at row {row}")]
    NonPositiveCostEntry {
        column: usize,
        row: usize,
        value: f64,
    },
    #[error("VIKOR compromise coefficient v must lie in [0, 1], got {v}")]
    InvalidCompromiseCoefficient { v: f64 },
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Non-fatal method observations, surfaced by the CLI on stderr.
#[derive(Debug, Clone, PartialEq)]
pub enum MethodWarning {
    /// A constant criterion carries no discriminating information; it was
    /// treated per the method's documented policy.
    ConstantColumn { criterion: usize, policy: &'static str },
    /// All S (or all R) values coincide in VIKOR; that Q term is zero.
    DegenerateSpread { term: &'static str },
}

impl std::fmt::Display for MethodWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MethodWarning::ConstantColumn { criterion, policy } => {
                write!(f, "criterion {criterion} is constant; {policy}")
            }
            MethodWarning::DegenerateSpread { term } => {
                write!(f, "all {term} values coincide; that VIKOR term is zero")
            }
        }
    }
}

/// PROMETHEE preference function. Only the usual (step) criterion is
/// implemented; the parameter slot exists so V-shape and Gaussian variants
/// can be added without changing the interface.
#[derive(Debug, Clone, Copy, PartialEq)]
#[non_exhaustive]
pub enum PreferenceFunction {
    /// P = 1 when the difference is strictly favorable, else 0.
    Usual,
}

/// Method-specific parameters with conventional defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodParams {
    /// VIKOR compromise coefficient.
    pub vikor_v: f64,
    /// Per-criterion PROMETHEE preference functions; `None` means usual
    /// everywhere.
    pub preference_functions: Option<Vec<PreferenceFunction>>,
}

impl Default for MethodParams {
    fn default() -> Self {
        MethodParams {
            vikor_v: 0.5,
            preference_functions: None,
        }
    }
}

/// Registry entry describing one ranking method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodDescriptor {
    pub name: &'static str,
    pub needs_weights: bool,
    pub needs_directions: bool,
    pub score_direction: ScoreDirection,
}

/// Ranking method dispatch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Topsis,
    Vikor,
    Promethee2,
    Copras,
    Saw,
    Wpm,
    Moora,
}

const METHODS: [(Method, MethodDescriptor); 7] = [
    (
        Method::Topsis,
        MethodDescriptor {
            name: "topsis",
            needs_weights: true,
            needs_directions: true,
            score_direction: ScoreDirection::HigherIsBetter,
        },
    ),
    (
        Method::Vikor,
        MethodDescriptor {
            name: "vikor",
            needs_weights: true,
            needs_directions: true,
            score_direction: ScoreDirection::LowerIsBetter,
        },
    ),
    (
        Method::Promethee2,
        MethodDescriptor {
            name: "promethee2",
            needs_weights: true,
            needs_directions: true,
            score_direction: ScoreDirection::HigherIsBetter,
        },
    ),
    (
        Method::Copras,
        MethodDescriptor {
            name: "copras",
            needs_weights: true,
            needs_directions: true,
            score_direction: ScoreDirection::HigherIsBetter,
        },
    ),
    (
        Method::Saw,
        MethodDescriptor {
            name: "saw",
            needs_weights: true,
            needs_directions: true,
            score_direction: ScoreDirection::HigherIsBetter,
        },
    ),
    (
        Method::Wpm,
        MethodDescriptor {
            name: "wpm",
            needs_weights: true,
            needs_directions: true,
            score_direction: ScoreDirection::HigherIsBetter,
        },
    ),
    (
        Method::Moora,
        MethodDescriptor {
            name: "moora",
            needs_weights: true,
            needs_directions: true,
            score_direction: ScoreDirection::HigherIsBetter,
        },
    ),
];

/// All registered method descriptors, in registry order.
pub fn registry() -> Vec<MethodDescriptor> {
    METHODS.iter().map(|(_, d)| *d).collect()
}

/// Case-insensitive lookup. `wsm` is an alias of `saw` (weighted sum).
pub fn registry_lookup(name: &str) -> Result<(Method, MethodDescriptor), RankingError> {
    let lower = name.to_ascii_lowercase();
    let key = if lower == "wsm" { "saw" } else { lower.as_str() };
    METHODS
        .iter()
        .find(|(_, d)| d.name == key)
        .map(|(m, d)| (*m, *d))
        .ok_or_else(|| RankingError::UnknownMethod {
            name: name.to_string(),
            available: METHODS.iter().map(|(_, d)| d.name).collect(),
        })
}

impl Method {
    pub fn descriptor(&self) -> MethodDescriptor {
        METHODS
            .iter()
            .find(|(m, _)| m == self)
            .map(|(_, d)| *d)
            .expect("every method is registered")
    }

    /// Run the method, collecting non-fatal warnings into `warnings`.
    pub fn apply_with_warnings(
        &self,
        matrix: &DecisionMatrix,
        weights: &WeightVector,
        params: &MethodParams,
        warnings: &mut Vec<MethodWarning>,
    ) -> Result<RankResult, RankingError> {
        check_weights(matrix, weights)?;
        match self {
            Method::Topsis => topsis(matrix, weights),
            Method::Vikor => vikor(matrix, weights, params.vikor_v, warnings),
            Method::Promethee2 => promethee2(matrix, weights),
            Method::Copras => copras(matrix, weights),
            Method::Saw => saw(matrix, weights, warnings),
            Method::Wpm => wpm(matrix, weights),
            Method::Moora => moora(matrix, weights),
        }
    }

    pub fn apply(
        &self,
        matrix: &DecisionMatrix,
        weights: &WeightVector,
        params: &MethodParams,
    ) -> Result<RankResult, RankingError> {
        let mut warnings = Vec::new();
        self.apply_with_warnings(matrix, weights, params, &mut warnings)
    }
}

fn check_weights(matrix: &DecisionMatrix, weights: &WeightVector) -> Result<(), RankingError> {
    if weights.len() != matrix.criteria() {
        return Err(RankingError::WeightCountMismatch {
            got: weights.len(),
            expected: matrix.criteria(),
        });
    }
    Ok(())
}

/// TOPSIS: closeness to the ideal solution on the weighted
/// vector-normalized matrix.
pub fn apply_topsis(
    matrix: &DecisionMatrix,
    weights: &WeightVector,
) -> Result<RankResult, RankingError> {
    check_weights(matrix, weights)?;
    topsis(matrix, weights)
}

fn topsis(matrix: &DecisionMatrix, weights: &WeightVector) -> Result<RankResult, RankingError> {
    let (m, n) = (matrix.alternatives(), matrix.criteria());
    let mut weighted = vec![vec![0.0; n]; m];
    for j in 0..n {
        let col = matrix.values().col(j);
        let normalized = normalize_vector(&col)
            .map_err(|_| RankingError::AllZeroColumn { column: j })?;
        for i in 0..m {
            weighted[i][j] = weights.weights()[j] * normalized[i];
        }
    }
    let mut ideal = vec![0.0; n];
    let mut anti = vec![0.0; n];
    for j in 0..n {
        let col: Vec<f64> = (0..m).map(|i| weighted[i][j]).collect();
        let max = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = col.iter().cloned().fold(f64::INFINITY, f64::min);
        match matrix.direction(j) {
            Direction::Benefit => {
                ideal[j] = max;
                anti[j] = min;
            }
            Direction::Cost => {
                ideal[j] = min;
                anti[j] = max;
            }
        }
    }
    let scores: Vec<f64> = (0..m)
        .map(|i| {
            let d_plus: f64 = (0..n)
                .map(|j| (weighted[i][j] - ideal[j]).powi(2))
                .sum::<f64>()
                .sqrt();
            let d_minus: f64 = (0..n)
                .map(|j| (weighted[i][j] - anti[j]).powi(2))
                .sum::<f64>()
                .sqrt();
            if d_plus + d_minus == 0.0 {
                // Every alternative coincides with the ideal point.
                0.5
            } else {
                d_minus / (d_plus + d_minus)
            }
        })
        .collect();
    Ok(rank_from_scores(&scores, ScoreDirection::HigherIsBetter)?)
}

/// VIKOR compromise ranking; `v` balances group utility against individual
/// regret.
pub fn apply_vikor(
    matrix: &DecisionMatrix,
    weights: &WeightVector,
    v: f64,
) -> Result<RankResult, RankingError> {
    check_weights(matrix, weights)?;
    let mut warnings = Vec::new();
    vikor(matrix, weights, v, &mut warnings)
}

fn vikor(
    matrix: &DecisionMatrix,
    weights: &WeightVector,
    v: f64,
    warnings: &mut Vec<MethodWarning>,
) -> Result<RankResult, RankingError> {
    if !(0.0..=1.0).contains(&v) {
        return Err(RankingError::InvalidCompromiseCoefficient { v });
    }
    let (m, n) = (matrix.alternatives(), matrix.criteria());
    let values = matrix.values();
    let mut s = vec![0.0; m];
    let mut r = vec![0.0f64; m];
    for j in 0..n {
        let col = values.col(j);
        let (best, worst) = match matrix.direction(j) {
            Direction::Benefit => (
                col.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                col.iter().cloned().fold(f64::INFINITY, f64::min),
            ),
            Direction::Cost => (
                col.iter().cloned().fold(f64::INFINITY, f64::min),
                col.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            ),
        };
        if best == worst {
            warnings.push(MethodWarning::ConstantColumn {
                criterion: j,
                policy: "dropped from the VIKOR aggregation",
            });
            continue;
        }
        for i in 0..m {
            let term = weights.weights()[j] * (best - col[i]) / (best - worst);
            s[i] += term;
            r[i] = r[i].max(term);
        }
    }
    let s_best = s.iter().cloned().fold(f64::INFINITY, f64::min);
    let s_worst = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let r_best = r.iter().cloned().fold(f64::INFINITY, f64::min);
    let r_worst = r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let s_span = s_worst - s_best;
    let r_span = r_worst - r_best;
    if s_span == 0.0 {
        warnings.push(MethodWarning::DegenerateSpread { term: "S" });
    }
    if r_span == 0.0 {
        warnings.push(MethodWarning::DegenerateSpread { term: "R" });
    }
    let q: Vec<f64> = (0..m)
        .map(|i| {
            let qs = if s_span == 0.0 {
                0.0
            } else {
                v * (s[i] - s_best) / s_span
            };
            let qr = if r_span == 0.0 {
                0.0
            } else {
                (1.0 - v) * (r[i] - r_best) / r_span
            };
            qs + qr
        })
        .collect();
    Ok(rank_from_scores(&q, ScoreDirection::LowerIsBetter)?)
}

/// PROMETHEE II net outranking flows with the usual preference criterion.
pub fn apply_promethee2(
    matrix: &DecisionMatrix,
    weights: &WeightVector,
) -> Result<RankResult, RankingError> {
    check_weights(matrix, weights)?;
    promethee2(matrix, weights)
}

/// [`apply_promethee2`] with an explicit per-criterion preference function
/// slot (only [`PreferenceFunction::Usual`] exists today).
pub fn apply_promethee2_with(
    matrix: &DecisionMatrix,
    weights: &WeightVector,
    preference_functions: &[PreferenceFunction],
) -> Result<RankResult, RankingError> {
    check_weights(matrix, weights)?;
    // All current variants are the usual criterion.
    let _ = preference_functions;
    promethee2(matrix, weights)
}

fn promethee2(
    matrix: &DecisionMatrix,
    weights: &WeightVector,
) -> Result<RankResult, RankingError> {
    let (m, n) = (matrix.alternatives(), matrix.criteria());
    let values = matrix.values();
    let prefers = |a: usize, b: usize, j: usize| -> bool {
        match matrix.direction(j) {
            Direction::Benefit => values[(a, j)] > values[(b, j)],
            Direction::Cost => values[(a, j)] < values[(b, j)],
        }
    };
    let mut net = vec![0.0; m];
    for a in 0..m {
        for b in 0..m {
            if a == b {
                continue;
            }
            let mut pi_ab = 0.0;
            let mut pi_ba = 0.0;
            for j in 0..n {
                if prefers(a, b, j) {
                    pi_ab += weights.weights()[j];
                } else if prefers(b, a, j) {
                    pi_ba += weights.weights()[j];
                }
            }
            net[a] += pi_ab - pi_ba;
        }
    }
    let scale = 1.0 / (m as f64 - 1.0);
    for flow in net.iter_mut() {
        *flow *= scale;
    }
    Ok(rank_from_scores(&net, ScoreDirection::HigherIsBetter)?)
}

/// COPRAS proportional assessment: benefit and cost sums on the column-sum
/// normalized weighted matrix.
pub fn apply_copras(
    matrix: &DecisionMatrix,
    weights: &WeightVector,
) -> Result<RankResult, RankingError> {
    check_weights(matrix, weights)?;
    copras(matrix, weights)
}

fn copras(matrix: &DecisionMatrix, weights: &WeightVector) -> Result<RankResult, RankingError> {
    let (m, n) = (matrix.alternatives(), matrix.criteria());
    let values = matrix.values();
    for j in 0..n {
        if matrix.direction(j) == Direction::Cost {
            for i in 0..m {
                if values[(i, j)] <= 0.0 {
                    return Err(RankingError::NonPositiveCostEntry {
                        column: j,
                        row: i,
                        value: values[(i, j)],
                    });
                }
            }
        }
    }
    let mut s_plus = vec![0.0; m];
    let mut s_minus = vec![0.0; m];
    for j in 0..n {
        let col = values.col(j);
        let sum: f64 = col.iter().sum();
        if sum == 0.0 {
            return Err(RankingError::AllZeroColumn { column: j });
        }
        for i in 0..m {
            let d = weights.weights()[j] * col[i] / sum;
            match matrix.direction(j) {
                Direction::Benefit => s_plus[i] += d,
                Direction::Cost => s_minus[i] += d,
            }
        }
    }
    // Cost terms only enter when they carry weight; otherwise (no cost
    // criteria, or all their weights zero) the assessment is the benefit sum.
    let has_cost_mass = s_minus.iter().any(|x| *x > 0.0);
    let scores: Vec<f64> = if has_cost_mass {
        let total_minus: f64 = s_minus.iter().sum();
        let recip_sum: f64 = s_minus.iter().map(|x| 1.0 / x).sum();
        (0..m)
            .map(|i| s_plus[i] + total_minus / (s_minus[i] * recip_sum))
            .collect()
    } else {
        s_plus
    };
    Ok(rank_from_scores(&scores, ScoreDirection::HigherIsBetter)?)
}

/// Simple additive weighting on min-max normalized columns. Constant
/// columns contribute the value 1 for every alternative.
pub fn apply_saw(
    matrix: &DecisionMatrix,
    weights: &WeightVector,
) -> Result<RankResult, RankingError> {
    check_weights(matrix, weights)?;
    let mut warnings = Vec::new();
    saw(matrix, weights, &mut warnings)
}

fn saw(
    matrix: &DecisionMatrix,
    weights: &WeightVector,
    warnings: &mut Vec<MethodWarning>,
) -> Result<RankResult, RankingError> {
    let (m, n) = (matrix.alternatives(), matrix.criteria());
    let mut scores = vec![0.0; m];
    for j in 0..n {
        let col = matrix.values().col(j);
        match normalize_minmax(&col, matrix.direction(j)) {
            Ok(normalized) => {
                for i in 0..m {
                    scores[i] += weights.weights()[j] * normalized[i];
                }
            }
            Err(CoreError::ConstantColumn { .. }) => {
                warnings.push(MethodWarning::ConstantColumn {
                    criterion: j,
                    policy: "every alternative gets normalized value 1",
                });
                for score in scores.iter_mut() {
                    *score += weights.weights()[j];
                }
            }
            Err(e) => return Err(RankingError::Core(e)),
        }
    }
    Ok(rank_from_scores(&scores, ScoreDirection::HigherIsBetter)?)
}

/// Weighted product method on max-ratio (benefit) and min-ratio (cost)
/// normalized entries.
pub fn apply_wpm(
    matrix: &DecisionMatrix,
    weights: &WeightVector,
) -> Result<RankResult, RankingError> {
    check_weights(matrix, weights)?;
    wpm(matrix, weights)
}

fn wpm(matrix: &DecisionMatrix, weights: &WeightVector) -> Result<RankResult, RankingError> {
    let (m, n) = (matrix.alternatives(), matrix.criteria());
    let values = matrix.values();
    for j in 0..n {
        for i in 0..m {
            if values[(i, j)] <= 0.0 {
                return Err(RankingError::NonPositiveEntry {
                    column: j,
                    row: i,
                    value: values[(i, j)],
                });
            }
        }
    }
    let mut scores = vec![1.0; m];
    for j in 0..n {
        let col = values.col(j);
        let max = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = col.iter().cloned().fold(f64::INFINITY, f64::min);
        for i in 0..m {
            let ratio = match matrix.direction(j) {
                Direction::Benefit => col[i] / max,
                Direction::Cost => min / col[i],
            };
            scores[i] *= ratio.powf(weights.weights()[j]);
        }
    }
    Ok(rank_from_scores(&scores, ScoreDirection::HigherIsBetter)?)
}

/// MOORA ratio system: benefit-minus-cost sums on vector-normalized columns.
pub fn apply_moora(
    matrix: &DecisionMatrix,
    weights: &WeightVector,
) -> Result<RankResult, RankingError> {
    check_weights(matrix, weights)?;
    moora(matrix, weights)
}

fn moora(matrix: &DecisionMatrix, weights: &WeightVector) -> Result<RankResult, RankingError> {
    let (m, n) = (matrix.alternatives(), matrix.criteria());
    let mut scores = vec![0.0; m];
    for j in 0..n {
        let col = matrix.values().col(j);
        let normalized = normalize_vector(&col)
            .map_err(|_| RankingError::AllZeroColumn { column: j })?;
        for i in 0..m {
            let term = weights.weights()[j] * normalized[i];
            match matrix.direction(j) {
                Direction::Benefit => scores[i] += term,
                Direction::Cost => scores[i] -= term,
            }
        }
    }
    Ok(rank_from_scores(&scores, ScoreDirection::HigherIsBetter)?)
}
