//! AHP priority derivation with consistency checking, and the ANP
//! supermatrix extension.

use thiserror::Error;

use crate::core::{CoreError, WeightVector};
use crate::dot;
use crate::matrix::Mat;

/// Relative tolerance on `a_ji == 1 / a_ij`. Anything worse is a hard error:
/// silent repair would hide data-entry mistakes.
pub const RECIPROCITY_TOL: f64 = 1e-9;

/// Convergence threshold for power iteration (max-norm between successive
/// weight vectors).
pub const POWER_ITERATION_TOL: f64 = 1e-12;

/// Iteration cap for power iteration.
pub const POWER_ITERATION_CAP: usize = 10_000;

#[derive(Debug, Error, PartialEq)]
pub enum PairwiseError {
    #[error("pairwise matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("pairwise matrix entry ({row}, {col}) must be positive and finite, got {value}")]
    NonPositiveEntry { row: usize, col: usize, value: f64 },
    #[error("pairwise matrix diagonal entry {index} must be 1, got {value}")]
    NonUnitDiagonal { index: usize, value: f64 },
    #[error(
        "reciprocity violated at ({row}, {col}): a_ij * a_ji = {product}, expected 1 within {tol}"
    )]
    ReciprocityViolation {
        row: usize,
        col: usize,
        product: f64,
        tol: f64,
    },
    #[error("label count {got} does not match matrix dimension {expected}")]
    LabelCountMismatch { got: usize, expected: usize },
    #[error("power iteration did not converge within {cap} iterations")]
    NonConvergence { cap: usize },
    #[error("consistency ratio undefined for n = {n}: random index table has {table_len} entries")]
    UnsupportedDimension { n: usize, table_len: usize },
    #[error("random index for n = {n} must be positive, got {value}")]
    InvalidRandomIndex { n: usize, value: f64 },
    #[error("expected {expected} per-criterion matrices, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("per-criterion matrix {index} is {got}x{got}, expected {expected}x{expected}")]
    AlternativeDimensionMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("ANP power must be at least 1")]
    ZeroPower,
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Square positive reciprocal judgment matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseMatrix {
    values: Mat,
    labels: Vec<String>,
}

impl PairwiseMatrix {
    pub fn new(values: Mat, labels: Vec<String>) -> Result<Self, PairwiseError> {
        if !values.is_square() {
            return Err(PairwiseError::NotSquare {
                rows: values.rows(),
                cols: values.cols(),
            });
        }
        let n = values.rows();
        if labels.len() != n {
            return Err(PairwiseError::LabelCountMismatch {
                got: labels.len(),
                expected: n,
            });
        }
        for i in 0..n {
            for j in 0..n {
                let v = values[(i, j)];
                if !v.is_finite() || v <= 0.0 {
                    return Err(PairwiseError::NonPositiveEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
        }
        for i in 0..n {
            let d = values[(i, i)];
            if (d - 1.0).abs() > RECIPROCITY_TOL {
                return Err(PairwiseError::NonUnitDiagonal { index: i, value: d });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let product = values[(i, j)] * values[(j, i)];
                if (product - 1.0).abs() > RECIPROCITY_TOL {
                    return Err(PairwiseError::ReciprocityViolation {
                        row: i,
                        col: j,
                        product,
                        tol: RECIPROCITY_TOL,
                    });
                }
            }
        }
        Ok(PairwiseMatrix { values, labels })
    }

    /// Build a reciprocal matrix from its strict upper triangle, row by row.
    pub fn from_upper_triangle(
        labels: Vec<String>,
        upper: &[f64],
    ) -> Result<Self, PairwiseError> {
        let n = labels.len();
        assert_eq!(upper.len(), n * (n - 1) / 2, "upper triangle length");
        let mut m = Mat::identity(n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = *it.next().expect("length checked");
                m[(i, j)] = v;
                m[(j, i)] = 1.0 / v;
            }
        }
        PairwiseMatrix::new(m, labels)
    }

    /// Consistent matrix `a_ij = w_i / w_j` from a positive weight vector.
    pub fn from_weights(labels: Vec<String>, weights: &[f64]) -> Result<Self, PairwiseError> {
        let n = weights.len();
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = weights[i] / weights[j];
            }
        }
        PairwiseMatrix::new(m, labels)
    }

    pub fn n(&self) -> usize {
        self.values.rows()
    }

    pub fn values(&self) -> &Mat {
        &self.values
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Saaty random index table, RI[n] for n = 1..=10.
#[derive(Debug, Clone, PartialEq)]
pub struct RiTable(Vec<f64>);

impl Default for RiTable {
    fn default() -> Self {
        RiTable(vec![
            0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49,
        ])
    }
}

impl RiTable {
    /// Table from explicit values, `values[n-1]` being RI for dimension `n`.
    pub fn new(values: Vec<f64>) -> Self {
        RiTable(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn get(&self, n: usize) -> Result<f64, PairwiseError> {
        self.0
            .get(n - 1)
            .copied()
            .ok_or(PairwiseError::UnsupportedDimension {
                n,
                table_len: self.0.len(),
            })
    }
}

/// Principal right eigenvector (normalized to sum 1) and principal eigenvalue.
///
/// Power iteration with per-step L1 normalization; converges for any positive
/// matrix by Perron-Frobenius.
pub fn priority_vector(matrix: &PairwiseMatrix) -> Result<(WeightVector, f64), PairwiseError> {
    let n = matrix.n();
    let a = matrix.values();
    let mut w = vec![1.0 / n as f64; n];
    let mut lambda = n as f64;
    for _ in 0..POWER_ITERATION_CAP {
        let y = a.matvec(&w);
        let sum: f64 = y.iter().sum();
        let next: Vec<f64> = y.iter().map(|v| v / sum).collect();
        let delta = next
            .iter()
            .zip(&w)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        // With w normalized to sum 1, sum(A w) estimates the Perron root.
        lambda = sum;
        w = next;
        if delta < POWER_ITERATION_TOL {
            let weights = WeightVector::from_unnormalized(w, matrix.labels().to_vec())?;
            return Ok((weights, lambda));
        }
    }
    let _ = lambda;
    Err(PairwiseError::NonConvergence {
        cap: POWER_ITERATION_CAP,
    })
}

/// CR = CI / RI with CI = (lambda_max - n)/(n - 1); zero by definition for n <= 2.
pub fn consistency_ratio(matrix: &PairwiseMatrix) -> Result<f64, PairwiseError> {
    consistency_ratio_with(matrix, &RiTable::default())
}

/// [`consistency_ratio`] against a caller-supplied random index table.
pub fn consistency_ratio_with(
    matrix: &PairwiseMatrix,
    table: &RiTable,
) -> Result<f64, PairwiseError> {
    let n = matrix.n();
    if n <= 2 {
        // A 1x1 or reciprocal 2x2 matrix is consistent by definition.
        return Ok(0.0);
    }
    let ri = table.get(n)?;
    if ri <= 0.0 || !ri.is_finite() {
        return Err(PairwiseError::InvalidRandomIndex { n, value: ri });
    }
    let (_, lambda) = priority_vector(matrix)?;
    let ci = (lambda - n as f64) / (n as f64 - 1.0);
    Ok(ci / ri)
}

/// Outputs of a full AHP run.
#[derive(Debug, Clone, PartialEq)]
pub struct AhpResult {
    /// Consistency ratio of the criteria matrix.
    pub consistency_ratio: f64,
    /// Per-criterion alternative priorities; each column sums to 1.
    pub unweighted_scores: Mat,
    /// Columns of `unweighted_scores` scaled by the criteria weights.
    pub weighted_scores: Mat,
    /// Row sums of `weighted_scores`; sums to 1.
    pub final_scores: Vec<f64>,
    pub criteria_weights: WeightVector,
    pub alternative_labels: Vec<String>,
}

/// Per-matrix consistency diagnostics for an AHP problem.
#[derive(Debug, Clone, PartialEq)]
pub struct AhpConsistencyReport {
    pub criteria_cr: f64,
    /// CR of each per-criterion alternative matrix, in criteria order.
    pub per_criterion_crs: Vec<f64>,
}

fn check_ahp_inputs(
    criteria: &PairwiseMatrix,
    per_criterion: &[PairwiseMatrix],
) -> Result<usize, PairwiseError> {
    let n = criteria.n();
    if per_criterion.len() != n {
        return Err(PairwiseError::LengthMismatch {
            expected: n,
            got: per_criterion.len(),
        });
    }
    let m = per_criterion[0].n();
    for (idx, pm) in per_criterion.iter().enumerate() {
        if pm.n() != m {
            return Err(PairwiseError::AlternativeDimensionMismatch {
                index: idx,
                got: pm.n(),
                expected: m,
            });
        }
    }
    Ok(m)
}

/// Run AHP: criteria weights from the criteria matrix, per-criterion
/// alternative priorities, and their weighted aggregation.
pub fn apply_ahp(
    criteria: &PairwiseMatrix,
    per_criterion: &[PairwiseMatrix],
) -> Result<AhpResult, PairwiseError> {
    apply_ahp_with(criteria, per_criterion, &RiTable::default())
}

/// [`apply_ahp`] against a caller-supplied random index table.
pub fn apply_ahp_with(
    criteria: &PairwiseMatrix,
    per_criterion: &[PairwiseMatrix],
    table: &RiTable,
) -> Result<AhpResult, PairwiseError> {
    let n = criteria.n();
    let m = check_ahp_inputs(criteria, per_criterion)?;
    let (criteria_weights, _) = priority_vector(criteria)?;
    let cr = consistency_ratio_with(criteria, table)?;

    let mut unweighted = Mat::zeros(m, n);
    let mut weighted = Mat::zeros(m, n);
    for (j, pm) in per_criterion.iter().enumerate() {
        let (prio, _) = priority_vector(pm)?;
        let wj = criteria_weights.weights()[j];
        for i in 0..m {
            unweighted[(i, j)] = prio.weights()[i];
            weighted[(i, j)] = wj * prio.weights()[i];
        }
    }
    let final_scores: Vec<f64> = (0..m).map(|i| weighted.row(i).iter().sum()).collect();

    Ok(AhpResult {
        consistency_ratio: cr,
        unweighted_scores: unweighted,
        weighted_scores: weighted,
        final_scores,
        criteria_weights,
        alternative_labels: per_criterion[0].labels().to_vec(),
    })
}

/// CRs of the criteria matrix and of every alternative matrix.
pub fn consistency_report(
    criteria: &PairwiseMatrix,
    per_criterion: &[PairwiseMatrix],
) -> Result<AhpConsistencyReport, PairwiseError> {
    consistency_report_with(criteria, per_criterion, &RiTable::default())
}

/// [`consistency_report`] against a caller-supplied random index table.
pub fn consistency_report_with(
    criteria: &PairwiseMatrix,
    per_criterion: &[PairwiseMatrix],
    table: &RiTable,
) -> Result<AhpConsistencyReport, PairwiseError> {
    check_ahp_inputs(criteria, per_criterion)?;
    let criteria_cr = consistency_ratio_with(criteria, table)?;
    let per_criterion_crs = per_criterion
        .iter()
        .map(|pm| consistency_ratio_with(pm, table))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AhpConsistencyReport {
        criteria_cr,
        per_criterion_crs,
    })
}

/// Build the `(1 + n + m)` square supermatrix and raise it to `power`.
///
/// Block layout, column-stochastic on the goal column: column 0 rows
/// `1..=n` hold the criteria weights; column `1 + j` rows `n+1..` hold the
/// alternative priorities under criterion `j`; the bottom-right `m x m`
/// block is the identity, accounting for dependencies between alternatives.
pub fn apply_anp(
    criteria: &PairwiseMatrix,
    per_criterion: &[PairwiseMatrix],
    power: u32,
) -> Result<Mat, PairwiseError> {
    if power == 0 {
        return Err(PairwiseError::ZeroPower);
    }
    let n = criteria.n();
    let m = check_ahp_inputs(criteria, per_criterion)?;
    let (criteria_weights, _) = priority_vector(criteria)?;

    let size = 1 + n + m;
    let mut s = Mat::zeros(size, size);
    for j in 0..n {
        s[(1 + j, 0)] = criteria_weights.weights()[j];
    }
    for (j, pm) in per_criterion.iter().enumerate() {
        let (prio, _) = priority_vector(pm)?;
        for i in 0..m {
            s[(1 + n + i, 1 + j)] = prio.weights()[i];
        }
    }
    for i in 0..m {
        s[(1 + n + i, 1 + n + i)] = 1.0;
    }
    Ok(s.pow(power))
}

/// Goal -> criteria -> alternative-instance tree in DOT format.
///
/// Edge labels carry criteria weights on the first level and per-criterion
/// alternative priorities on the second, so labels sum to 1 per parent.
pub fn emit_decision_tree(
    criteria: &PairwiseMatrix,
    per_criterion: &[PairwiseMatrix],
) -> Result<String, PairwiseError> {
    let n = criteria.n();
    let m = check_ahp_inputs(criteria, per_criterion)?;
    let (criteria_weights, _) = priority_vector(criteria)?;

    let mut out = String::new();
    out.push_str("digraph ahp_decision_tree {\n");
    out.push_str("  rankdir=TB;\n");
    out.push_str(&format!("  goal [label={}];\n", dot::quote("Goal")));
    for j in 0..n {
        let cid = format!("c{j}");
        out.push_str(&format!(
            "  {cid} [label={}];\n",
            dot::quote(&criteria.labels()[j])
        ));
        out.push_str(&format!(
            "  goal -> {cid} [label={}, weight_value={}];\n",
            dot::quote(&dot::num(criteria_weights.weights()[j])),
            dot::quote(&dot::num(criteria_weights.weights()[j])),
        ));
    }
    for (j, pm) in per_criterion.iter().enumerate() {
        let (prio, _) = priority_vector(pm)?;
        for i in 0..m {
            let aid = format!("c{j}a{i}");
            out.push_str(&format!(
                "  {aid} [label={}];\n",
                dot::quote(&pm.labels()[i])
            ));
            out.push_str(&format!(
                "  c{j} -> {aid} [label={}, weight_value={}];\n",
                dot::quote(&dot::num(prio.weights()[i])),
                dot::quote(&dot::num(prio.weights()[i])),
            ));
        }
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("C{}", i + 1)).collect()
    }

    #[test]
    fn consistent_matrix_recovers_weights_and_lambda_n() {
        let w = [0.6, 0.3, 0.1];
        let pm = PairwiseMatrix::from_weights(labels(3), &w).unwrap();
        let (prio, lambda) = priority_vector(&pm).unwrap();
        for (a, b) in prio.weights().iter().zip(&w) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        assert!((lambda - 3.0).abs() < 1e-9);
        assert!(consistency_ratio(&pm).unwrap().abs() < 1e-9);
    }

    #[test]
    fn one_by_one_matrix() {
        let pm = PairwiseMatrix::new(Mat::identity(1), labels(1)).unwrap();
        let (prio, lambda) = priority_vector(&pm).unwrap();
        assert_eq!(prio.weights(), &[1.0]);
        assert!((lambda - 1.0).abs() < 1e-12);
        assert_eq!(consistency_ratio(&pm).unwrap(), 0.0);
    }

    #[test]
    fn two_by_two_is_definitionally_consistent() {
        let pm =
            PairwiseMatrix::from_upper_triangle(labels(2), &[4.0]).unwrap();
        assert_eq!(consistency_ratio(&pm).unwrap(), 0.0);
    }

    #[test]
    fn reciprocity_violation_is_rejected() {
        let m = Mat::from_rows(&[vec![1.0, 2.0], vec![0.4, 1.0]]).unwrap();
        assert!(matches!(
            PairwiseMatrix::new(m, labels(2)),
            Err(PairwiseError::ReciprocityViolation { .. })
        ));
    }

    #[test]
    fn nonpositive_entries_are_rejected() {
        let m = Mat::from_rows(&[vec![1.0, 0.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(
            PairwiseMatrix::new(m, labels(2)),
            Err(PairwiseError::NonPositiveEntry { .. })
        ));
    }

    #[test]
    fn unsupported_dimension_beyond_ri_table() {
        let w: Vec<f64> = (1..=11).map(|i| i as f64).collect();
        let pm = PairwiseMatrix::from_weights(labels(11), &w).unwrap();
        assert!(matches!(
            consistency_ratio(&pm),
            Err(PairwiseError::UnsupportedDimension { n: 11, .. })
        ));
    }

    #[test]
    fn single_criterion_ahp_reduces_to_alternative_priorities() {
        let criteria = PairwiseMatrix::new(Mat::identity(1), vec!["only".into()]).unwrap();
        let alts = PairwiseMatrix::from_weights(
            vec!["A".into(), "B".into(), "C".into()],
            &[0.5, 0.3, 0.2],
        )
        .unwrap();
        let res = apply_ahp(&criteria, std::slice::from_ref(&alts)).unwrap();
        let (prio, _) = priority_vector(&alts).unwrap();
        for (a, b) in res.final_scores.iter().zip(prio.weights()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn ahp_result_invariants_hold() {
        let criteria = PairwiseMatrix::from_weights(labels(3), &[0.5, 0.3, 0.2]).unwrap();
        let alt_labels = vec!["A".to_string(), "B".to_string(), "C".to_string()];
        let per: Vec<PairwiseMatrix> = [
            [0.4, 0.4, 0.2],
            [0.1, 0.6, 0.3],
            [0.3, 0.3, 0.4],
        ]
        .iter()
        .map(|w| PairwiseMatrix::from_weights(alt_labels.clone(), w).unwrap())
        .collect();
        let res = apply_ahp(&criteria, &per).unwrap();
        for j in 0..3 {
            let colsum: f64 = (0..3).map(|i| res.unweighted_scores[(i, j)]).sum();
            assert!((colsum - 1.0).abs() < 1e-9);
        }
        let total: f64 = res.final_scores.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
        for i in 0..3 {
            let row_sum: f64 = res.weighted_scores.row(i).iter().sum();
            assert!((row_sum - res.final_scores[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn ahp_length_mismatch_is_rejected() {
        let criteria = PairwiseMatrix::from_weights(labels(3), &[0.5, 0.3, 0.2]).unwrap();
        let alts = PairwiseMatrix::from_weights(vec!["A".into(), "B".into()], &[0.7, 0.3]).unwrap();
        assert!(matches!(
            apply_ahp(&criteria, &[alts]),
            Err(PairwiseError::LengthMismatch { expected: 3, got: 1 })
        ));
    }

    #[test]
    fn anp_power_one_reproduces_blocks() {
        let criteria = PairwiseMatrix::from_weights(labels(2), &[0.7, 0.3]).unwrap();
        let alt_labels = vec!["A".to_string(), "B".to_string()];
        let per = vec![
            PairwiseMatrix::from_weights(alt_labels.clone(), &[0.8, 0.2]).unwrap(),
            PairwiseMatrix::from_weights(alt_labels, &[0.4, 0.6]).unwrap(),
        ];
        let s = apply_anp(&criteria, &per, 1).unwrap();
        assert_eq!(s.rows(), 1 + 2 + 2);
        let ahp = apply_ahp(&criteria, &per).unwrap();
        for j in 0..2 {
            assert_eq!(s[(1 + j, 0)], ahp.criteria_weights.weights()[j]);
            for i in 0..2 {
                assert_eq!(s[(3 + i, 1 + j)], ahp.unweighted_scores[(i, j)]);
            }
        }
        // Goal column sums to one.
        let goal_sum: f64 = (0..s.rows()).map(|r| s[(r, 0)]).sum();
        assert!((goal_sum - 1.0).abs() < 1e-9);
        // Identity block.
        assert_eq!(s[(3, 3)], 1.0);
        assert_eq!(s[(4, 4)], 1.0);
        assert_eq!(s[(3, 4)], 0.0);
    }

    #[test]
    fn anp_power_zero_is_rejected() {
        let criteria = PairwiseMatrix::from_weights(labels(2), &[0.7, 0.3]).unwrap();
        let alt_labels = vec!["A".to_string(), "B".to_string()];
        let per = vec![
            PairwiseMatrix::from_weights(alt_labels.clone(), &[0.8, 0.2]).unwrap(),
            PairwiseMatrix::from_weights(alt_labels, &[0.4, 0.6]).unwrap(),
        ];
        assert!(matches!(
            apply_anp(&criteria, &per, 0),
            Err(PairwiseError::ZeroPower)
        ));
    }

    #[test]
    fn decision_tree_has_expected_node_count() {
        let criteria = PairwiseMatrix::from_weights(labels(2), &[0.7, 0.3]).unwrap();
        let alt_labels = vec!["A".to_string(), "B".to_string()];
        let per = vec![
            PairwiseMatrix::from_weights(alt_labels.clone(), &[0.8, 0.2]).unwrap(),
            PairwiseMatrix::from_weights(alt_labels, &[0.4, 0.6]).unwrap(),
        ];
        let text = emit_decision_tree(&criteria, &per).unwrap();
        // 1 goal + 2 criteria + 2*2 leaf instances = 7 node statements.
        let nodes = text.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count();
        assert_eq!(nodes, 7);
        let edges = text.lines().filter(|l| l.contains("->")).count();
        assert_eq!(edges, 2 + 4);
    }
}
