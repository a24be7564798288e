//! Stratified decision making: SMCDM with given or independently derived
//! state probabilities, and the stratified Best-Worst Method.
//!
//! States describe combinations of uncertain future events. Stratum r holds
//! every state in which exactly r events have occurred; state 0 (no events)
//! is the baseline. When events are independent and only the baseline and
//! single-event weights are known, the baseline probability is the real root
//! of a polynomial built from the event weight ratios, and every other state
//! probability follows from subset products.

use itertools::Itertools;
use thiserror::Error;

use crate::core::{rank_from_scores, CoreError, RankResult, ScoreDirection, WeightVector};
use crate::dot;
use crate::matrix::Mat;
use crate::weighting::{apply_bwm, BwmProblem, WeightingError};

/// Largest supported event count (2^k states).
pub const MAX_EVENTS: usize = 20;

/// Tolerance on `sum(likelihood) == 1` in given-probabilities mode.
pub const LIKELIHOOD_SUM_TOL: f64 = 1e-6;

/// A state-criteria column whose sum deviates from 1 by more than this is
/// reported as a warning (not rejected).
pub const STATE_COLUMN_SUM_WARN_TOL: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum StratifiedError {
    #[error("event count must be at least 1, got {k}")]
    InvalidEventCount { k: usize },
    #[error("event count {k} exceeds the cap of {cap} (2^k states)")]
    TooManyEvents { k: usize, cap: usize },
    #[error("event weight {index} must be positive and finite, got {value}")]
    InvalidEventWeight { index: usize, value: f64 },
    #[error("no root of the baseline-probability polynomial in (0, 1]")]
    NoRootInUnitInterval,
    #[error("dimension mismatch: {detail}")]
    DimensionMismatch { detail: String },
    #[error("independent-events mode requires 2^k states and k+1 likelihood entries; {detail}")]
    ModeDimensionMismatch { detail: String },
    #[error("state likelihoods sum to {sum}, expected 1 within {tol}")]
    LikelihoodNotNormalized { sum: f64, tol: f64 },
    #[error("likelihood entry {index} is negative: {value}")]
    NegativeLikelihood { index: usize, value: f64 },
    #[error("state-criteria entry at row {row}, column {col} is negative: {value}")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("non-finite entry at row {row}, column {col}")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("state {state}: self-comparison of the {role} criterion must be 1, got {value}")]
    UnityAnchorViolation {
        state: usize,
        role: &'static str,
        value: f64,
    },
    #[error("state {state}: criterion index {index} out of range for {n} criteria")]
    CriterionOutOfRange {
        state: usize,
        index: usize,
        n: usize,
    },
    #[error("aggregate criterion weights sum to zero; cannot renormalize")]
    DegenerateAggregateWeights,
    #[error(transparent)]
    Weighting(#[from] WeightingError),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Non-fatal model observations surfaced by the CLI.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelWarning {
    /// A state-criteria column deviates from unit sum.
    StateColumnSumOff { state: usize, sum: f64 },
}

impl std::fmt::Display for ModelWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelWarning::StateColumnSumOff { state, sum } => write!(
                f,
                "state {state}: criterion weights sum to {sum}, expected 1"
            ),
        }
    }
}

/// How state probabilities are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StratifiedMode {
    /// The likelihood vector directly holds one probability per state.
    GivenProbabilities,
    /// The likelihood vector holds the baseline weight plus one weight per
    /// independent event; state probabilities are derived.
    IndependentEvents,
}

/// Enumerated state space for `k` independent events.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    k: usize,
    /// Event-index subsets, ordered by (size, lexicographic indices):
    /// state 0 is the baseline (empty subset).
    states: Vec<Vec<usize>>,
    /// Stratum r (= number of occurred events) to state indices.
    strata: Vec<Vec<usize>>,
}

impl StateSpace {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    pub fn strata(&self) -> &[Vec<usize>] {
        &self.strata
    }

    /// Human-readable label like `{}`, `{A}` or `{A,C}`.
    pub fn state_label(&self, index: usize) -> String {
        let subset = &self.states[index];
        let names: Vec<String> = subset.iter().map(|&e| event_label(e)).collect();
        format!("{{{}}}", names.join(","))
    }
}

fn event_label(e: usize) -> String {
    char::from(b'A' + e as u8).to_string()
}

/// Enumerate all 2^k states of `k` independent events.
pub fn enumerate_states(k: usize) -> Result<StateSpace, StratifiedError> {
    if k == 0 {
        return Err(StratifiedError::InvalidEventCount { k });
    }
    if k > MAX_EVENTS {
        return Err(StratifiedError::TooManyEvents { k, cap: MAX_EVENTS });
    }
    let mut states = Vec::with_capacity(1 << k);
    let mut strata = vec![Vec::new(); k + 1];
    for r in 0..=k {
        for combo in (0..k).combinations(r) {
            strata[r].push(states.len());
            states.push(combo);
        }
    }
    Ok(StateSpace { k, states, strata })
}

/// Coefficients `e_1..e_k` of the elementary symmetric polynomials of `r`.
fn elementary_symmetric(r: &[f64]) -> Vec<f64> {
    let k = r.len();
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for (i, &x) in r.iter().enumerate() {
        for t in (1..=i + 1).rev() {
            e[t] += e[t - 1] * x;
        }
    }
    e
}

/// Unique real root in (0, 1] of the baseline-probability polynomial
/// `(1 + e_1) p + sum_{t>=2} e_t p^t - 1 = 0`, where `e_t` is the t-th
/// elementary symmetric polynomial of the event weight ratios
/// `r_j = w_j / w_0`.
///
/// All coefficients are positive, so the polynomial is strictly increasing
/// with f(0) = -1 and f(1) > 0: bracketed bisection is unconditionally safe.
/// Two Newton steps polish the bisection result.
pub fn solve_baseline_probability(ratios: &[f64]) -> Result<f64, StratifiedError> {
    for (i, &r) in ratios.iter().enumerate() {
        if !r.is_finite() || r <= 0.0 {
            return Err(StratifiedError::InvalidEventWeight { index: i, value: r });
        }
    }
    let k = ratios.len();
    if k == 0 {
        return Err(StratifiedError::InvalidEventCount { k: 0 });
    }
    let e = elementary_symmetric(ratios);

    let f = |p: f64| -> f64 {
        let mut acc = 0.0;
        for t in (2..=k).rev() {
            acc = (acc + e[t]) * p;
        }
        (acc + 1.0 + e[1]) * p - 1.0
    };
    let fprime = |p: f64| -> f64 {
        let mut acc = 0.0;
        for t in (2..=k).rev() {
            acc = (acc + t as f64 * e[t]) * p;
        }
        acc + 1.0 + e[1]
    };

    if f(1.0) < 0.0 {
        // Impossible for positive ratios: f(1) = sum of e_t > 0.
        return Err(StratifiedError::NoRootInUnitInterval);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut p0 = 0.5 * (lo + hi);
    for _ in 0..2 {
        let d = fprime(p0);
        if d > 0.0 {
            p0 -= f(p0) / d;
        }
    }
    if !(p0 > 0.0 && p0 <= 1.0) {
        return Err(StratifiedError::NoRootInUnitInterval);
    }
    Ok(p0)
}

/// Probability of every state from the baseline and per-event weights
/// `w = (w_0, w_1, .., w_k)`.
///
/// The state with event subset S gets `p0^max(1, |S|) * prod_{j in S} r_j`
/// with `r_j = w_j / w_0`; the output sums to 1 by the defining equation.
pub fn state_probabilities(
    space: &StateSpace,
    baseline_and_event_weights: &[f64],
) -> Result<Vec<f64>, StratifiedError> {
    let k = space.k();
    if baseline_and_event_weights.len() != k + 1 {
        return Err(StratifiedError::DimensionMismatch {
            detail: format!(
                "expected {} baseline+event weights for k = {k}, got {}",
                k + 1,
                baseline_and_event_weights.len()
            ),
        });
    }
    derived_state_probabilities(k, baseline_and_event_weights)
}

/// [`state_probabilities`] without materializing a [`StateSpace`]: walks
/// the subsets in the same (stratum, lexicographic) order, carrying the
/// ratio products down the recursion.
fn derived_state_probabilities(
    k: usize,
    baseline_and_event_weights: &[f64],
) -> Result<Vec<f64>, StratifiedError> {
    if k == 0 || k > MAX_EVENTS {
        return Err(StratifiedError::InvalidEventCount { k });
    }
    for (i, &w) in baseline_and_event_weights.iter().enumerate() {
        if !w.is_finite() || w <= 0.0 {
            return Err(StratifiedError::InvalidEventWeight { index: i, value: w });
        }
    }
    let w0 = baseline_and_event_weights[0];
    let ratios: Vec<f64> = baseline_and_event_weights[1..]
        .iter()
        .map(|w| w / w0)
        .collect();
    let p0 = solve_baseline_probability(&ratios)?;

    let mut probs = Vec::with_capacity(1 << k);
    probs.push(p0);
    // Subsets of size r in lexicographic order, product carried along.
    fn walk(ratios: &[f64], first: usize, left: usize, acc: f64, out: &mut Vec<f64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for j in first..=ratios.len() - left {
            walk(ratios, j + 1, left - 1, acc * ratios[j], out);
        }
    }
    for r in 1..=k {
        walk(&ratios, 0, r, p0.powi(r as i32), &mut probs);
    }
    Ok(probs)
}

/// Stratified MCDM model: alternative scores per criterion, criterion
/// importance per state, and the state likelihood vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StratifiedModel {
    comparison: Mat,
    state_criteria: Mat,
    likelihood: Vec<f64>,
    mode: StratifiedMode,
    alternative_names: Vec<String>,
    criterion_names: Vec<String>,
    state_names: Vec<String>,
}

impl StratifiedModel {
    pub fn new(
        comparison: Mat,
        state_criteria: Mat,
        likelihood: Vec<f64>,
        mode: StratifiedMode,
        alternative_names: Vec<String>,
        criterion_names: Vec<String>,
        state_names: Vec<String>,
    ) -> Result<Self, StratifiedError> {
        let (m, n) = (comparison.rows(), comparison.cols());
        let s = state_criteria.cols();
        if state_criteria.rows() != n {
            return Err(StratifiedError::DimensionMismatch {
                detail: format!(
                    "comparison has {n} criteria but state-criteria matrix has {} rows",
                    state_criteria.rows()
                ),
            });
        }
        if alternative_names.len() != m || criterion_names.len() != n || state_names.len() != s {
            return Err(StratifiedError::DimensionMismatch {
                detail: format!(
                    "name lists ({}, {}, {}) do not match dimensions ({m}, {n}, {s})",
                    alternative_names.len(),
                    criterion_names.len(),
                    state_names.len()
                ),
            });
        }
        if !comparison.all_finite() {
            return Err(StratifiedError::NonFiniteEntry { row: 0, col: 0 });
        }
        for r in 0..n {
            for c in 0..s {
                let v = state_criteria[(r, c)];
                if !v.is_finite() {
                    return Err(StratifiedError::NonFiniteEntry { row: r, col: c });
                }
                if v < 0.0 {
                    return Err(StratifiedError::NegativeEntry {
                        row: r,
                        col: c,
                        value: v,
                    });
                }
            }
        }
        let model = StratifiedModel {
            comparison,
            state_criteria,
            likelihood,
            mode,
            alternative_names,
            criterion_names,
            state_names,
        };
        model.validate_likelihood()?;
        Ok(model)
    }

    fn validate_likelihood(&self) -> Result<(), StratifiedError> {
        let s = self.states();
        match self.mode {
            StratifiedMode::GivenProbabilities => {
                if self.likelihood.len() != s {
                    return Err(StratifiedError::DimensionMismatch {
                        detail: format!(
                            "likelihood has {} entries but there are {s} states",
                            self.likelihood.len()
                        ),
                    });
                }
                let mut sum = 0.0;
                for (i, &p) in self.likelihood.iter().enumerate() {
                    if p < 0.0 {
                        return Err(StratifiedError::NegativeLikelihood { index: i, value: p });
                    }
                    sum += p;
                }
                if (sum - 1.0).abs() > LIKELIHOOD_SUM_TOL {
                    return Err(StratifiedError::LikelihoodNotNormalized {
                        sum,
                        tol: LIKELIHOOD_SUM_TOL,
                    });
                }
            }
            StratifiedMode::IndependentEvents => {
                let k = self.likelihood.len().saturating_sub(1);
                if k == 0 || s != (1usize << k) {
                    return Err(StratifiedError::ModeDimensionMismatch {
                        detail: format!(
                            "{s} states with {} likelihood entries",
                            self.likelihood.len()
                        ),
                    });
                }
                for (i, &w) in self.likelihood.iter().enumerate() {
                    if !w.is_finite() || w <= 0.0 {
                        return Err(StratifiedError::InvalidEventWeight { index: i, value: w });
                    }
                }
            }
        }
        Ok(())
    }

    /// Same model reinterpreted under a different likelihood mode.
    pub fn with_mode(mut self, mode: StratifiedMode) -> Result<Self, StratifiedError> {
        self.mode = mode;
        self.validate_likelihood()?;
        Ok(self)
    }

    pub fn alternatives(&self) -> usize {
        self.comparison.rows()
    }

    pub fn criteria(&self) -> usize {
        self.comparison.cols()
    }

    pub fn states(&self) -> usize {
        self.state_criteria.cols()
    }

    pub fn mode(&self) -> StratifiedMode {
        self.mode
    }

    pub fn comparison(&self) -> &Mat {
        &self.comparison
    }

    pub fn state_criteria(&self) -> &Mat {
        &self.state_criteria
    }

    pub fn likelihood(&self) -> &[f64] {
        &self.likelihood
    }

    pub fn alternative_names(&self) -> &[String] {
        &self.alternative_names
    }

    pub fn criterion_names(&self) -> &[String] {
        &self.criterion_names
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    /// Non-fatal observations (state-criteria columns off unit sum).
    pub fn warnings(&self) -> Vec<ModelWarning> {
        let mut out = Vec::new();
        for t in 0..self.states() {
            let sum: f64 = (0..self.criteria()).map(|j| self.state_criteria[(j, t)]).sum();
            if (sum - 1.0).abs() > STATE_COLUMN_SUM_WARN_TOL {
                out.push(ModelWarning::StateColumnSumOff { state: t, sum });
            }
        }
        out
    }

    /// State probabilities under the model's mode.
    pub fn probabilities(&self) -> Result<Vec<f64>, StratifiedError> {
        match self.mode {
            StratifiedMode::GivenProbabilities => Ok(self.likelihood.clone()),
            StratifiedMode::IndependentEvents => {
                derived_state_probabilities(self.likelihood.len() - 1, &self.likelihood)
            }
        }
    }
}

/// Result of an SMCDM run.
#[derive(Debug, Clone, PartialEq)]
pub struct SmcdmOutcome {
    pub ranking: RankResult,
    /// State-probability-aggregated criterion weights, renormalized to sum 1.
    pub aggregate_weights: WeightVector,
    /// Probability of each state (given directly or derived).
    pub probabilities: Vec<f64>,
}

/// Score alternatives under stratified uncertainty: aggregate the per-state
/// criterion weights by state probability, renormalize, and rank the
/// probability-weighted alternative scores.
pub fn apply_smcdm(model: &StratifiedModel) -> Result<SmcdmOutcome, StratifiedError> {
    let probabilities = model.probabilities()?;
    let raw = model.state_criteria.matvec(&probabilities);
    let sum: f64 = raw.iter().sum();
    if sum <= 0.0 || !sum.is_finite() {
        return Err(StratifiedError::DegenerateAggregateWeights);
    }
    let aggregate_weights =
        WeightVector::from_unnormalized(raw, model.criterion_names.clone())?;
    let scores = model.comparison.matvec(aggregate_weights.weights());
    let ranking = rank_from_scores(&scores, ScoreDirection::HigherIsBetter)?;
    Ok(SmcdmOutcome {
        ranking,
        aggregate_weights,
        probabilities,
    })
}

/// Stratified BWM model: per-state judgment columns plus state likelihoods.
#[derive(Debug, Clone, PartialEq)]
pub struct SbwmModel {
    comparison: Mat,
    others_to_worst: Mat,
    others_to_best: Mat,
    worst_per_state: Vec<usize>,
    best_per_state: Vec<usize>,
    likelihood: Vec<f64>,
    alternative_names: Vec<String>,
    criterion_names: Vec<String>,
    state_names: Vec<String>,
}

impl SbwmModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        comparison: Mat,
        others_to_worst: Mat,
        others_to_best: Mat,
        worst_per_state: Vec<usize>,
        best_per_state: Vec<usize>,
        likelihood: Vec<f64>,
        alternative_names: Vec<String>,
        criterion_names: Vec<String>,
        state_names: Vec<String>,
    ) -> Result<Self, StratifiedError> {
        let (m, n) = (comparison.rows(), comparison.cols());
        let s = others_to_worst.cols();
        if others_to_worst.rows() != n || others_to_best.rows() != n {
            return Err(StratifiedError::DimensionMismatch {
                detail: format!(
                    "judgment matrices must have {n} rows (criteria), got {} and {}",
                    others_to_worst.rows(),
                    others_to_best.rows()
                ),
            });
        }
        if others_to_best.cols() != s {
            return Err(StratifiedError::DimensionMismatch {
                detail: format!(
                    "others-to-worst has {s} states but others-to-best has {}",
                    others_to_best.cols()
                ),
            });
        }
        if worst_per_state.len() != s || best_per_state.len() != s {
            return Err(StratifiedError::DimensionMismatch {
                detail: format!(
                    "worst/best criterion lists ({}, {}) must have one entry per state ({s})",
                    worst_per_state.len(),
                    best_per_state.len()
                ),
            });
        }
        if likelihood.len() != s {
            return Err(StratifiedError::DimensionMismatch {
                detail: format!(
                    "likelihood has {} entries but there are {s} states",
                    likelihood.len()
                ),
            });
        }
        if alternative_names.len() != m || criterion_names.len() != n || state_names.len() != s {
            return Err(StratifiedError::DimensionMismatch {
                detail: "name lists do not match model dimensions".to_string(),
            });
        }
        if !comparison.all_finite() || !others_to_worst.all_finite() || !others_to_best.all_finite()
        {
            return Err(StratifiedError::NonFiniteEntry { row: 0, col: 0 });
        }
        for t in 0..s {
            let (bi, wi) = (best_per_state[t], worst_per_state[t]);
            if bi >= n {
                return Err(StratifiedError::CriterionOutOfRange {
                    state: t,
                    index: bi,
                    n,
                });
            }
            if wi >= n {
                return Err(StratifiedError::CriterionOutOfRange {
                    state: t,
                    index: wi,
                    n,
                });
            }
            let anchor_w = others_to_worst[(wi, t)];
            if (anchor_w - 1.0).abs() > 1e-9 {
                return Err(StratifiedError::UnityAnchorViolation {
                    state: t,
                    role: "worst",
                    value: anchor_w,
                });
            }
            let anchor_b = others_to_best[(bi, t)];
            if (anchor_b - 1.0).abs() > 1e-9 {
                return Err(StratifiedError::UnityAnchorViolation {
                    state: t,
                    role: "best",
                    value: anchor_b,
                });
            }
        }
        let mut sum = 0.0;
        for (i, &p) in likelihood.iter().enumerate() {
            if p < 0.0 {
                return Err(StratifiedError::NegativeLikelihood { index: i, value: p });
            }
            sum += p;
        }
        if (sum - 1.0).abs() > LIKELIHOOD_SUM_TOL {
            return Err(StratifiedError::LikelihoodNotNormalized {
                sum,
                tol: LIKELIHOOD_SUM_TOL,
            });
        }
        Ok(SbwmModel {
            comparison,
            others_to_worst,
            others_to_best,
            worst_per_state,
            best_per_state,
            likelihood,
            alternative_names,
            criterion_names,
            state_names,
        })
    }

    pub fn alternatives(&self) -> usize {
        self.comparison.rows()
    }

    pub fn criteria(&self) -> usize {
        self.comparison.cols()
    }

    pub fn states(&self) -> usize {
        self.others_to_worst.cols()
    }

    pub fn comparison(&self) -> &Mat {
        &self.comparison
    }

    pub fn others_to_worst(&self) -> &Mat {
        &self.others_to_worst
    }

    pub fn others_to_best(&self) -> &Mat {
        &self.others_to_best
    }

    pub fn worst_per_state(&self) -> &[usize] {
        &self.worst_per_state
    }

    pub fn best_per_state(&self) -> &[usize] {
        &self.best_per_state
    }

    pub fn likelihood(&self) -> &[f64] {
        &self.likelihood
    }

    pub fn alternative_names(&self) -> &[String] {
        &self.alternative_names
    }

    pub fn criterion_names(&self) -> &[String] {
        &self.criterion_names
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    /// The BWM problem of one state: the others-to-best column provides the
    /// best-to-others judgments, the others-to-worst column the a_jW side.
    pub fn state_problem(&self, state: usize) -> Result<BwmProblem, WeightingError> {
        let n = self.criteria();
        let bo: Vec<f64> = (0..n).map(|j| self.others_to_best[(j, state)]).collect();
        let ow: Vec<f64> = (0..n).map(|j| self.others_to_worst[(j, state)]).collect();
        BwmProblem::new(
            bo,
            ow,
            self.best_per_state[state],
            self.worst_per_state[state],
            self.criterion_names.clone(),
        )
    }
}

/// Result of an SBWM run.
#[derive(Debug, Clone, PartialEq)]
pub struct SbwmOutcome {
    pub ranking: RankResult,
    /// Criteria x states matrix of per-state BWM weights.
    pub per_state_weights: Mat,
    /// Per-state inconsistency objectives.
    pub per_state_xi: Vec<f64>,
    pub aggregate_weights: WeightVector,
    pub probabilities: Vec<f64>,
}

/// Solve one BWM program per state, then aggregate the per-state weight
/// columns with the likelihood vector exactly as SMCDM does.
pub fn apply_sbwm(model: &SbwmModel) -> Result<SbwmOutcome, StratifiedError> {
    let (n, s) = (model.criteria(), model.states());
    let mut per_state_weights = Mat::zeros(n, s);
    let mut per_state_xi = Vec::with_capacity(s);
    for t in 0..s {
        let problem = model.state_problem(t)?;
        let solution = apply_bwm(&problem)?;
        for j in 0..n {
            per_state_weights[(j, t)] = solution.weights.weights()[j];
        }
        per_state_xi.push(solution.xi);
    }
    let aggregated = StratifiedModel::new(
        model.comparison.clone(),
        per_state_weights.clone(),
        model.likelihood.clone(),
        StratifiedMode::GivenProbabilities,
        model.alternative_names.clone(),
        model.criterion_names.clone(),
        model.state_names.clone(),
    )?;
    let outcome = apply_smcdm(&aggregated)?;
    Ok(SbwmOutcome {
        ranking: outcome.ranking,
        per_state_weights,
        per_state_xi,
        aggregate_weights: outcome.aggregate_weights,
        probabilities: outcome.probabilities,
    })
}

/// Baseline-to-states transition tree in DOT format.
///
/// Edges from the baseline carry each state's probability; nodes carry the
/// state's dominant criterion. States are grouped by stratum when the state
/// count is a power of two.
pub fn emit_state_tree(model: &StratifiedModel) -> Result<String, StratifiedError> {
    let probabilities = model.probabilities()?;
    let s = model.states();
    let n = model.criteria();

    let dominant = |t: usize| -> (usize, f64) {
        let mut best = (0usize, f64::NEG_INFINITY);
        for j in 0..n {
            let v = model.state_criteria[(j, t)];
            if v > best.1 {
                best = (j, v);
            }
        }
        best
    };

    // Stratum structure when s = 2^k.
    let space = (1..=MAX_EVENTS)
        .find(|k| (1usize << k) == s)
        .map(enumerate_states)
        .transpose()?;

    let mut out = String::new();
    out.push_str("digraph state_tree {\n");
    out.push_str("  rankdir=LR;\n");
    for t in 0..s {
        let (j, wv) = dominant(t);
        let subset = space.as_ref().map(|sp| sp.state_label(t));
        let label = match &subset {
            Some(sub) => format!("{} {}", model.state_names[t], sub),
            None => model.state_names[t].clone(),
        };
        out.push_str(&format!(
            "  s{t} [label={}, dominant={}, dominant_weight={}, prob={}];\n",
            dot::quote(&label),
            dot::quote(&model.criterion_names[j]),
            dot::quote(&dot::num(wv)),
            dot::quote(&dot::num(probabilities[t])),
        ));
    }
    for t in 1..s {
        out.push_str(&format!(
            "  s0 -> s{t} [prob={}, penwidth={}];\n",
            dot::quote(&dot::num(probabilities[t])),
            dot::quote(&format!("{:.3}", 0.5 + 6.0 * probabilities[t])),
        ));
    }
    if let Some(sp) = &space {
        for (r, members) in sp.strata().iter().enumerate().skip(1) {
            let ids: Vec<String> = members.iter().map(|t| format!("s{t}")).collect();
            out.push_str(&format!("  {{ rank=same; {} }}\n", ids.join("; ")));
            let _ = r;
        }
    }
    out.push_str("}\n");
    Ok(out)
}
