//! Criteria-weight derivation: objective weighting from the decision matrix
//! (Entropy, CRITIC) and preference-based elicitation (Best-Worst Method).

mod bwm_solver;
pub(crate) mod simplex;

use thiserror::Error;

use crate::core::{normalize_minmax, CoreError, DecisionMatrix, WeightVector};

/// Inconsistency at or below this is treated as exactly consistent: the
/// closed-form weights `w_j ~ 1/a_Bj` are optimal and returned directly.
pub const ZERO_XI_TOL: f64 = 1e-9;

/// Judgments must be at least 1 (within rounding).
const JUDGMENT_MIN_TOL: f64 = 1e-12;

/// Tolerance on the unity self-comparisons `a_B,best = 1` and `a_worst,W = 1`.
const UNITY_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum WeightingError {
    #[error("column {column} has zero sum; entropy weights are undefined")]
    ZeroColumnSum { column: usize },
    #[error("entry at row {row}, column {column} is negative: {value}")]
    NegativeEntry {
        row: usize,
        column: usize,
        value: f64,
    },
    #[error("every column is uniform; entropy weights are undefined")]
    AllColumnsUniform,
    #[error("column {column} is constant; CRITIC weights are undefined")]
    ConstantColumn { column: usize },
    #[error("judgment {index} must be finite and >= 1, got {value}")]
    InvalidJudgment { index: usize, value: f64 },
    #[error("best and worst criterion must differ (n = {n})")]
    BestWorstEqual { n: usize },
    #[error("criterion index {index} out of range for {n} criteria")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("self-comparison of the {role} criterion must be 1, got {value}")]
    UnityAnchorViolation { role: &'static str, value: f64 },
    #[error("judgment count {got} does not match criterion count {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("LP solver failed: {0}")]
    SolverFailure(&'static str),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Shannon-entropy objective weights.
///
/// Per column: `p_ij = x_ij / sum_i x_ij`, `e_j = -(1/ln m) sum p ln p` with
/// `0 ln 0 = 0`, and `w_j = (1 - e_j) / sum_k (1 - e_k)`.
pub fn apply_entropy(matrix: &DecisionMatrix) -> Result<WeightVector, WeightingError> {
    let (m, n) = (matrix.alternatives(), matrix.criteria());
    let v = matrix.values();
    for r in 0..m {
        for c in 0..n {
            if v[(r, c)] < 0.0 {
                return Err(WeightingError::NegativeEntry {
                    row: r,
                    column: c,
                    value: v[(r, c)],
                });
            }
        }
    }
    let ln_m = (m as f64).ln();
    let mut divergence = Vec::with_capacity(n);
    for c in 0..n {
        let col = v.col(c);
        let sum: f64 = col.iter().sum();
        if sum <= 0.0 {
            return Err(WeightingError::ZeroColumnSum { column: c });
        }
        let entropy: f64 = col
            .iter()
            .map(|&x| {
                let p = x / sum;
                if p > 0.0 {
                    p * p.ln()
                } else {
                    0.0
                }
            })
            .sum::<f64>()
            / -ln_m;
        divergence.push(1.0 - entropy);
    }
    let total: f64 = divergence.iter().sum();
    if total <= 1e-12 {
        return Err(WeightingError::AllColumnsUniform);
    }
    Ok(WeightVector::from_unnormalized(
        divergence,
        matrix.criterion_names().to_vec(),
    )?)
}

/// CRITIC objective weights (contrast intensity times conflict).
///
/// Columns are min-max normalized per direction, then
/// `C_j = sigma_j * sum_k (1 - r_jk)` with sample standard deviation and
/// Pearson correlation; weights are `C / sum C`. When every `C_j` is zero
/// (no criterion carries discriminating conflict) the weights fall back to
/// uniform.
pub fn apply_critic(matrix: &DecisionMatrix) -> Result<WeightVector, WeightingError> {
    let (m, n) = (matrix.alternatives(), matrix.criteria());
    let v = matrix.values();
    let mut norm_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for c in 0..n {
        let col = v.col(c);
        let normalized = normalize_minmax(&col, matrix.direction(c)).map_err(|e| match e {
            CoreError::ConstantColumn { .. } => WeightingError::ConstantColumn { column: c },
            other => WeightingError::Core(other),
        })?;
        norm_cols.push(normalized);
    }

    let mean = |col: &[f64]| col.iter().sum::<f64>() / m as f64;
    let means: Vec<f64> = norm_cols.iter().map(|c| mean(c)).collect();
    let stds: Vec<f64> = norm_cols
        .iter()
        .zip(&means)
        .map(|(col, mu)| {
            (col.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (m as f64 - 1.0)).sqrt()
        })
        .collect();

    let corr = |a: usize, b: usize| -> f64 {
        let num: f64 = (0..m)
            .map(|i| (norm_cols[a][i] - means[a]) * (norm_cols[b][i] - means[b]))
            .sum();
        let da: f64 = (0..m).map(|i| (norm_cols[a][i] - means[a]).powi(2)).sum();
        let db: f64 = (0..m).map(|i| (norm_cols[b][i] - means[b]).powi(2)).sum();
        num / (da * db).sqrt()
    };

    let mut c_index = Vec::with_capacity(n);
    for j in 0..n {
        let conflict: f64 = (0..n).map(|k| 1.0 - corr(j, k)).sum();
        c_index.push(stds[j] * conflict);
    }
    let total: f64 = c_index.iter().sum();
    if total <= 1e-12 {
        // Symmetric degenerate case (e.g. perfectly correlated columns).
        return Ok(WeightVector::uniform(
            n,
            matrix.criterion_names().to_vec(),
        )?);
    }
    Ok(WeightVector::from_unnormalized(
        c_index,
        matrix.criterion_names().to_vec(),
    )?)
}

/// Best-Worst Method input: judgments of the best criterion over the others
/// and of the others over the worst.
#[derive(Debug, Clone, PartialEq)]
pub struct BwmProblem {
    best_to_others: Vec<f64>,
    others_to_worst: Vec<f64>,
    best_index: usize,
    worst_index: usize,
    criterion_names: Vec<String>,
}

impl BwmProblem {
    pub fn new(
        best_to_others: Vec<f64>,
        others_to_worst: Vec<f64>,
        best_index: usize,
        worst_index: usize,
        criterion_names: Vec<String>,
    ) -> Result<Self, WeightingError> {
        let n = best_to_others.len();
        if others_to_worst.len() != n {
            return Err(WeightingError::LengthMismatch {
                got: others_to_worst.len(),
                expected: n,
            });
        }
        if criterion_names.len() != n {
            return Err(WeightingError::LengthMismatch {
                got: criterion_names.len(),
                expected: n,
            });
        }
        if best_index >= n {
            return Err(WeightingError::IndexOutOfRange {
                index: best_index,
                n,
            });
        }
        if worst_index >= n {
            return Err(WeightingError::IndexOutOfRange {
                index: worst_index,
                n,
            });
        }
        if n > 1 && best_index == worst_index {
            return Err(WeightingError::BestWorstEqual { n });
        }
        for (idx, &v) in best_to_others.iter().chain(others_to_worst.iter()).enumerate() {
            if !v.is_finite() || v < 1.0 - JUDGMENT_MIN_TOL {
                return Err(WeightingError::InvalidJudgment {
                    index: idx % n,
                    value: v,
                });
            }
        }
        if (best_to_others[best_index] - 1.0).abs() > UNITY_TOL {
            return Err(WeightingError::UnityAnchorViolation {
                role: "best",
                value: best_to_others[best_index],
            });
        }
        if (others_to_worst[worst_index] - 1.0).abs() > UNITY_TOL {
            return Err(WeightingError::UnityAnchorViolation {
                role: "worst",
                value: others_to_worst[worst_index],
            });
        }
        Ok(BwmProblem {
            best_to_others,
            others_to_worst,
            best_index,
            worst_index,
            criterion_names,
        })
    }

    /// Problem with auto-generated criterion names `C1..Cn`.
    pub fn unnamed(
        best_to_others: Vec<f64>,
        others_to_worst: Vec<f64>,
        best_index: usize,
        worst_index: usize,
    ) -> Result<Self, WeightingError> {
        let names = (0..best_to_others.len())
            .map(|i| format!("C{}", i + 1))
            .collect();
        BwmProblem::new(
            best_to_others,
            others_to_worst,
            best_index,
            worst_index,
            names,
        )
    }

    pub fn n(&self) -> usize {
        self.best_to_others.len()
    }

    pub fn best_to_others(&self) -> &[f64] {
        &self.best_to_others
    }

    pub fn others_to_worst(&self) -> &[f64] {
        &self.others_to_worst
    }

    pub fn best_index(&self) -> usize {
        self.best_index
    }

    pub fn worst_index(&self) -> usize {
        self.worst_index
    }

    pub fn criterion_names(&self) -> &[String] {
        &self.criterion_names
    }

    /// Largest violation of the BWM constraint system at a given weight vector.
    pub fn max_violation(&self, weights: &[f64]) -> f64 {
        let wb = weights[self.best_index];
        let ww = weights[self.worst_index];
        let mut worst: f64 = 0.0;
        for j in 0..self.n() {
            worst = worst.max((wb - self.best_to_others[j] * weights[j]).abs());
            worst = worst.max((weights[j] - self.others_to_worst[j] * ww).abs());
        }
        worst
    }

    /// Closed-form weights `w_j ~ 1/a_Bj`, exact when the judgments are
    /// fully consistent.
    pub fn consistent_weights(&self) -> Vec<f64> {
        let inv: Vec<f64> = self.best_to_others.iter().map(|a| 1.0 / a).collect();
        let sum: f64 = inv.iter().sum();
        inv.into_iter().map(|v| v / sum).collect()
    }
}

/// Optimal BWM weights and the inconsistency objective.
#[derive(Debug, Clone, PartialEq)]
pub struct BwmSolution {
    pub weights: WeightVector,
    pub xi: f64,
}

/// Solve the linear BWM program: minimize the largest absolute violation
/// `xi` subject to the weight simplex.
///
/// Fully consistent judgments short-circuit to the closed form; otherwise an
/// exact LP walk finds an optimal vertex deterministically.
pub fn apply_bwm(problem: &BwmProblem) -> Result<BwmSolution, WeightingError> {
    let n = problem.n();
    if n == 1 {
        return Ok(BwmSolution {
            weights: WeightVector::new(vec![1.0], problem.criterion_names.clone())?,
            xi: 0.0,
        });
    }

    let candidate = problem.consistent_weights();
    let violation = problem.max_violation(&candidate);
    if violation <= ZERO_XI_TOL {
        // xi is bounded below by zero, so a feasible point with xi ~ 0 is optimal.
        return Ok(BwmSolution {
            weights: WeightVector::new(candidate, problem.criterion_names.clone())?,
            xi: violation,
        });
    }

    let (weights, xi) = bwm_solver::solve(
        &problem.best_to_others,
        &problem.others_to_worst,
        problem.best_index,
        problem.worst_index,
    )
    .map_err(|_| WeightingError::SolverFailure("BWM active-set walk did not converge"))?;
    Ok(BwmSolution {
        weights: WeightVector::new(weights, problem.criterion_names.clone())?,
        xi,
    })
}

/// Per-criterion weight ranges over the optimal face, for flagging multiple
/// LP optima (a known BWM issue).
#[derive(Debug, Clone, PartialEq)]
pub struct BwmWeightIntervals {
    /// `(min, max)` of each criterion weight subject to `xi <= xi* + 1e-9`.
    pub intervals: Vec<(f64, f64)>,
    /// True when any interval is wider than 1e-8.
    pub multiple_optima: bool,
}

/// Re-solve the BWM program with the objective pinned and each weight
/// alternately minimized and maximized.
pub fn bwm_weight_intervals(problem: &BwmProblem) -> Result<BwmWeightIntervals, WeightingError> {
    let n = problem.n();
    if n == 1 {
        return Ok(BwmWeightIntervals {
            intervals: vec![(1.0, 1.0)],
            multiple_optima: false,
        });
    }
    let base = apply_bwm(problem)?;
    let xi_cap = base.xi + 1e-9;

    // Variables: w_0..w_{n-1}, xi.
    let nv = n + 1;
    let mut constraints: Vec<(Vec<f64>, simplex::Relation, f64)> = Vec::new();
    let b = problem.best_index;
    let w = problem.worst_index;
    for j in 0..n {
        let abj = problem.best_to_others[j];
        let ajw = problem.others_to_worst[j];
        let mut row = vec![0.0; nv];
        row[b] += 1.0;
        row[j] -= abj;
        row[n] = -1.0;
        constraints.push((row.clone(), simplex::Relation::Le, 0.0));
        let neg: Vec<f64> = row.iter().map(|v| -v).collect();
        let mut neg = neg;
        neg[n] = -1.0;
        constraints.push((neg, simplex::Relation::Le, 0.0));

        let mut row = vec![0.0; nv];
        row[j] += 1.0;
        row[w] -= ajw;
        row[n] = -1.0;
        constraints.push((row.clone(), simplex::Relation::Le, 0.0));
        let mut neg: Vec<f64> = row.iter().map(|v| -v).collect();
        neg[n] = -1.0;
        constraints.push((neg, simplex::Relation::Le, 0.0));
    }
    let mut sum_row = vec![1.0; nv];
    sum_row[n] = 0.0;
    constraints.push((sum_row, simplex::Relation::Eq, 1.0));
    let mut cap_row = vec![0.0; nv];
    cap_row[n] = 1.0;
    constraints.push((cap_row, simplex::Relation::Le, xi_cap));

    let mut intervals = Vec::with_capacity(n);
    let mut multiple = false;
    for j in 0..n {
        let mut lo_obj = vec![0.0; nv];
        lo_obj[j] = 1.0;
        let lo = simplex::solve(&simplex::LinearProgram {
            objective: lo_obj.clone(),
            constraints: constraints.clone(),
        })
        .map_err(|_| WeightingError::SolverFailure("weight interval LP"))?;
        let mut hi_obj = vec![0.0; nv];
        hi_obj[j] = -1.0;
        let hi = simplex::solve(&simplex::LinearProgram {
            objective: hi_obj,
            constraints: constraints.clone(),
        })
        .map_err(|_| WeightingError::SolverFailure("weight interval LP"))?;
        for solution in [&lo, &hi] {
            let sum: f64 = solution.x[..n].iter().sum();
            if (sum - 1.0).abs() > 1e-6 {
                return Err(WeightingError::SolverFailure("interval LP left the simplex"));
            }
        }
        let (lo_v, hi_v) = (lo.objective_value, -hi.objective_value);
        if hi_v - lo_v > 1e-8 {
            multiple = true;
        }
        intervals.push((lo_v, hi_v));
    }
    Ok(BwmWeightIntervals {
        intervals,
        multiple_optima: multiple,
    })
}
