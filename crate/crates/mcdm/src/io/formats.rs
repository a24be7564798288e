//! Readers for the block-structured input formats: AHP, SMCDM, SBWM, BWM
//! and the plain decision-matrix layout.

use super::blocks::{block_as_string_vector, parse_labeled_numeric, CsvBlockFile, LabeledBlock};
use super::IoError;
use crate::matrix::Mat;
use crate::pairwise::PairwiseMatrix;
use crate::stratified::{SbwmModel, StratifiedMode, StratifiedModel};
use crate::weighting::BwmProblem;

fn require_blocks(file: &CsvBlockFile, expected: usize) -> Result<(), IoError> {
    if file.len() != expected {
        return Err(IoError::BlockCountMismatch {
            expected,
            got: file.len(),
            path: file.source_path().to_string(),
        });
    }
    Ok(())
}

fn square_pairwise(
    parsed: &LabeledBlock,
    block_no: usize,
    label_prefix: &str,
) -> Result<PairwiseMatrix, IoError> {
    let v = &parsed.values;
    if !v.is_square() {
        return Err(IoError::NonSquareBlock {
            block: block_no,
            rows: v.rows(),
            cols: v.cols(),
        });
    }
    let labels = match (&parsed.row_labels, &parsed.col_labels) {
        (Some(r), _) => r.clone(),
        (None, Some(c)) => c.clone(),
        (None, None) => parsed.row_labels_or(label_prefix),
    };
    PairwiseMatrix::new(v.clone(), labels).map_err(|source| IoError::InvalidPairwiseBlock {
        block: block_no,
        source,
    })
}

/// Read the AHP layout: an n x n criteria block followed by exactly n
/// alternative blocks of identical dimension.
pub fn read_ahp_csv(
    file: &CsvBlockFile,
) -> Result<(PairwiseMatrix, Vec<PairwiseMatrix>), IoError> {
    if file.is_empty() {
        return Err(IoError::BlockCountMismatch {
            expected: 2,
            got: 0,
            path: file.source_path().to_string(),
        });
    }
    let criteria_block = parse_labeled_numeric(&file.blocks()[0], 1)?;
    let criteria = square_pairwise(&criteria_block, 1, "C")?;
    let n = criteria.n();
    require_blocks(file, n + 1)?;

    let mut per_criterion = Vec::with_capacity(n);
    let mut m: Option<usize> = None;
    for (idx, block) in file.blocks()[1..].iter().enumerate() {
        let block_no = idx + 2;
        let parsed = parse_labeled_numeric(block, block_no)?;
        let pm = square_pairwise(&parsed, block_no, "A")?;
        match m {
            None => m = Some(pm.n()),
            Some(expected) if pm.n() != expected => {
                return Err(IoError::DimensionMismatch {
                    block: block_no,
                    detail: format!(
                        "alternative block is {}x{}, previous blocks were {expected}x{expected}",
                        pm.n(),
                        pm.n()
                    ),
                });
            }
            _ => {}
        }
        per_criterion.push(pm);
    }
    Ok((criteria, per_criterion))
}

fn check_nonnegative(values: &Mat, block_no: usize) -> Result<(), IoError> {
    for r in 0..values.rows() {
        for c in 0..values.cols() {
            let v = values[(r, c)];
            if v < 0.0 {
                return Err(IoError::NegativeEntry {
                    block: block_no,
                    row: r + 1,
                    col: c + 1,
                    value: v,
                });
            }
        }
    }
    Ok(())
}

/// Read the SMCDM layout: comparison (m x n), state-criteria (n x s) and a
/// likelihood vector.
///
/// The likelihood block must either hold one probability per state
/// (given-probabilities mode) or, when the state count is `2^k`, the `k + 1`
/// baseline and event weights (independent-events mode). The returned model
/// defaults to given probabilities when both interpretations fit; callers
/// switch with [`StratifiedModel::with_mode`].
pub fn read_smcdm_csv(file: &CsvBlockFile) -> Result<StratifiedModel, IoError> {
    require_blocks(file, 3)?;
    let comparison = parse_labeled_numeric(&file.blocks()[0], 1)?;
    check_nonnegative(&comparison.values, 1)?;
    let state_criteria = parse_labeled_numeric(&file.blocks()[1], 2)?;
    check_nonnegative(&state_criteria.values, 2)?;
    let likelihood_block = parse_labeled_numeric(&file.blocks()[2], 3)?;
    let likelihood = likelihood_block.as_vector(3)?;
    for (i, &p) in likelihood.iter().enumerate() {
        if p < 0.0 {
            return Err(IoError::NegativeEntry {
                block: 3,
                row: 1,
                col: i + 1,
                value: p,
            });
        }
    }

    let n = comparison.values.cols();
    if state_criteria.values.rows() != n {
        return Err(IoError::DimensionMismatch {
            block: 2,
            detail: format!(
                "state-criteria matrix has {} rows, expected one per criterion ({n})",
                state_criteria.values.rows()
            ),
        });
    }
    let s = state_criteria.values.cols();
    let len = likelihood.len();
    let independent_fit = len >= 2 && s == (1usize << (len - 1));
    let mode = if len == s {
        StratifiedMode::GivenProbabilities
    } else if independent_fit {
        StratifiedMode::IndependentEvents
    } else {
        return Err(IoError::DimensionMismatch {
            block: 3,
            detail: format!(
                "likelihood has {len} entries; expected {s} state probabilities or k+1 \
                 baseline+event weights with 2^k = {s}"
            ),
        });
    };

    let alternative_names = comparison.row_labels_or("A");
    let criterion_names = comparison.col_labels_or("C");
    let state_names = state_criteria.col_labels_or("S");
    StratifiedModel::new(
        comparison.values,
        state_criteria.values,
        likelihood,
        mode,
        alternative_names,
        criterion_names,
        state_names,
    )
    .map_err(IoError::from)
}

/// Read the SBWM layout: comparison, others-to-worst, others-to-best,
/// worst-criterion labels, best-criterion labels, likelihood.
pub fn read_sbwm_csv(file: &CsvBlockFile) -> Result<SbwmModel, IoError> {
    require_blocks(file, 6)?;
    let comparison = parse_labeled_numeric(&file.blocks()[0], 1)?;
    let o2w = parse_labeled_numeric(&file.blocks()[1], 2)?;
    let o2b = parse_labeled_numeric(&file.blocks()[2], 3)?;
    let worst_labels = block_as_string_vector(&file.blocks()[3], 4)?;
    let best_labels = block_as_string_vector(&file.blocks()[4], 5)?;
    let likelihood_block = parse_labeled_numeric(&file.blocks()[5], 6)?;
    let likelihood = likelihood_block.as_vector(6)?;

    let n = comparison.values.cols();
    let criterion_names = comparison.col_labels_or("C");
    for (block_no, judgments) in [(2usize, &o2w), (3usize, &o2b)] {
        if judgments.values.rows() != n {
            return Err(IoError::DimensionMismatch {
                block: block_no,
                detail: format!(
                    "judgment matrix has {} rows, expected one per criterion ({n})",
                    judgments.values.rows()
                ),
            });
        }
    }
    let s = o2w.values.cols();
    if o2b.values.cols() != s {
        return Err(IoError::DimensionMismatch {
            block: 3,
            detail: format!(
                "others-to-best has {} states, others-to-worst has {s}",
                o2b.values.cols()
            ),
        });
    }
    if worst_labels.len() != s {
        return Err(IoError::DimensionMismatch {
            block: 4,
            detail: format!("{} worst-criterion labels for {s} states", worst_labels.len()),
        });
    }
    if best_labels.len() != s {
        return Err(IoError::DimensionMismatch {
            block: 5,
            detail: format!("{} best-criterion labels for {s} states", best_labels.len()),
        });
    }
    if likelihood.len() != s {
        return Err(IoError::DimensionMismatch {
            block: 6,
            detail: format!("likelihood has {} entries for {s} states", likelihood.len()),
        });
    }

    let resolve = |label: &str, block: usize| -> Result<usize, IoError> {
        criterion_names
            .iter()
            .position(|c| c == label)
            .ok_or_else(|| IoError::UnknownCriterionLabel {
                block,
                label: label.to_string(),
            })
    };
    let worst_per_state = worst_labels
        .iter()
        .map(|l| resolve(l, 4))
        .collect::<Result<Vec<_>, _>>()?;
    let best_per_state = best_labels
        .iter()
        .map(|l| resolve(l, 5))
        .collect::<Result<Vec<_>, _>>()?;

    let alternative_names = comparison.row_labels_or("A");
    let state_names = o2w.col_labels_or("S");
    SbwmModel::new(
        comparison.values,
        o2w.values,
        o2b.values,
        worst_per_state,
        best_per_state,
        likelihood,
        alternative_names,
        criterion_names,
        state_names,
    )
    .map_err(IoError::from)
}

/// Read a single-block decision matrix: rows are alternatives, columns are
/// criteria. Directions are supplied out of band.
pub fn read_decision_matrix_csv(
    file: &CsvBlockFile,
) -> Result<(Mat, Vec<String>, Vec<String>), IoError> {
    require_blocks(file, 1)?;
    let parsed = parse_labeled_numeric(&file.blocks()[0], 1)?;
    Ok((
        parsed.values.clone(),
        parsed.row_labels_or("A"),
        parsed.col_labels_or("C"),
    ))
}

/// Read a standalone BWM problem: best-to-others vector, others-to-worst
/// vector, then single-cell best and worst criterion labels.
pub fn read_bwm_csv(file: &CsvBlockFile) -> Result<BwmProblem, IoError> {
    require_blocks(file, 4)?;
    let bo_block = parse_labeled_numeric(&file.blocks()[0], 1)?;
    let ow_block = parse_labeled_numeric(&file.blocks()[1], 2)?;
    let bo = bo_block.as_vector(1)?;
    let ow = ow_block.as_vector(2)?;
    if bo.len() != ow.len() {
        return Err(IoError::DimensionMismatch {
            block: 2,
            detail: format!(
                "best-to-others has {} judgments, others-to-worst has {}",
                bo.len(),
                ow.len()
            ),
        });
    }
    let names = if bo_block.values.rows() == 1 {
        bo_block.col_labels_or("C")
    } else {
        bo_block.row_labels_or("C")
    };

    let single_label = |block_no: usize| -> Result<String, IoError> {
        let b = &file.blocks()[block_no - 1];
        let cells = block_as_string_vector(b, block_no)?;
        if cells.len() != 1 {
            return Err(IoError::NotAVector {
                block: block_no,
                rows: b.rows(),
                cols: b.cols(),
            });
        }
        Ok(cells[0].clone())
    };
    let best_label = single_label(3)?;
    let worst_label = single_label(4)?;
    let resolve = |label: &str, block: usize| -> Result<usize, IoError> {
        names
            .iter()
            .position(|c| c == label)
            .ok_or_else(|| IoError::UnknownCriterionLabel {
                block,
                label: label.to_string(),
            })
    };
    let best = resolve(&best_label, 3)?;
    let worst = resolve(&worst_label, 4)?;
    BwmProblem::new(bo, ow, best, worst, names).map_err(IoError::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(text: &str) -> CsvBlockFile {
        CsvBlockFile::parse_str(text, "test.csv").unwrap()
    }

    const AHP_3: &str = "\
,Cost,Fun,Soft
Cost,1,3,5
Fun,0.3333333333333333,1,3
Soft,0.2,0.3333333333333333,1

,A,B,C
A,1,2,4
B,0.5,1,2
C,0.25,0.5,1

,A,B,C
A,1,0.5,3
B,2,1,4
C,0.3333333333333333,0.25,1

,A,B,C
A,1,1,2
B,1,1,2
C,0.5,0.5,1
";

    #[test]
    fn ahp_three_criteria_parses() {
        let (criteria, per) = read_ahp_csv(&file(AHP_3)).unwrap();
        assert_eq!(criteria.n(), 3);
        assert_eq!(criteria.labels()[0], "Cost");
        assert_eq!(per.len(), 3);
        assert_eq!(per[0].labels(), &["A", "B", "C"]);
    }

    #[test]
    fn ahp_single_criterion_edge_case() {
        let text = "1\n\n1,2\n0.5,1\n";
        let (criteria, per) = read_ahp_csv(&file(text)).unwrap();
        assert_eq!(criteria.n(), 1);
        assert_eq!(per[0].n(), 2);
    }

    #[test]
    fn ahp_block_count_mismatch() {
        // 3x3 criteria but only two alternative blocks.
        let text = "1,3,5\n0.3333333333333333,1,3\n0.2,0.3333333333333333,1\n\n1,2\n0.5,1\n\n1,2\n0.5,1\n";
        assert!(matches!(
            read_ahp_csv(&file(text)),
            Err(IoError::BlockCountMismatch {
                expected: 4,
                got: 3,
                ..
            })
        ));
    }

    #[test]
    fn ahp_alternative_dimension_mismatch() {
        let text = "1,2\n0.5,1\n\n1,2\n0.5,1\n\n1,2,3\n0.5,1,2\n0.3333333333333333,0.5,1\n";
        assert!(matches!(
            read_ahp_csv(&file(text)),
            Err(IoError::DimensionMismatch { block: 3, .. })
        ));
    }

    const SMCDM_MIN: &str = "\
,Q,P
A,0.5,0.5
B,0.7,0.3

,S1,S2
Q,0.6,0.2
P,0.4,0.8

0.3,0.7
";

    #[test]
    fn smcdm_minimal_parses_given_mode() {
        let model = read_smcdm_csv(&file(SMCDM_MIN)).unwrap();
        assert_eq!(model.alternatives(), 2);
        assert_eq!(model.criteria(), 2);
        assert_eq!(model.states(), 2);
        assert_eq!(model.mode(), StratifiedMode::GivenProbabilities);
        assert_eq!(model.criterion_names(), &["Q", "P"]);
    }

    #[test]
    fn smcdm_minimal_one_criterion_model() {
        // Smallest sensible layout: 2x1 comparison, 1x2 state-criteria, 1x2 likelihood.
        let text = "0.5\n0.7\n\n0.6,0.2\n\n0.3,0.7\n";
        let model = read_smcdm_csv(&file(text)).unwrap();
        assert_eq!(
            (model.alternatives(), model.criteria(), model.states()),
            (2, 1, 2)
        );
    }

    #[test]
    fn smcdm_block_count_mismatch() {
        let text = "1,2\n3,4\n\n0.5,0.5\n";
        assert!(matches!(
            read_smcdm_csv(&file(text)),
            Err(IoError::BlockCountMismatch {
                expected: 3,
                got: 2,
                ..
            })
        ));
    }

    #[test]
    fn smcdm_independent_length_likelihood() {
        // 2 criteria, 4 states, likelihood of length 3 = k + 1 with 2^2 = 4.
        let text = "\
0.5,0.5
0.7,0.3

0.6,0.2,0.5,0.3
0.4,0.8,0.5,0.7

1,0.5,0.25
";
        let model = read_smcdm_csv(&file(text)).unwrap();
        assert_eq!(model.mode(), StratifiedMode::IndependentEvents);
        assert_eq!(model.states(), 4);
    }

    #[test]
    fn smcdm_negative_entry_rejected() {
        let text = "0.5,-0.5\n0.7,0.3\n\n0.6,0.2\n0.4,0.8\n\n0.3,0.7\n";
        assert!(matches!(
            read_smcdm_csv(&file(text)),
            Err(IoError::NegativeEntry { block: 1, .. })
        ));
    }

    const SBWM_MIN: &str = "\
,C1,C2,C3
A,0.2,0.5,0.3
B,0.4,0.1,0.5

,S1,S2
C1,6,5
C2,3,2
C3,1,1

,S1,S2
C1,1,1
C2,2,3
C3,6,5

C3,C3

C1,C1

0.6,0.4
";

    #[test]
    fn sbwm_minimal_parses() {
        let model = read_sbwm_csv(&file(SBWM_MIN)).unwrap();
        assert_eq!(model.alternatives(), 2);
        assert_eq!(model.criteria(), 3);
        assert_eq!(model.states(), 2);
        assert_eq!(model.worst_per_state(), &[2, 2]);
        assert_eq!(model.best_per_state(), &[0, 0]);
    }

    #[test]
    fn sbwm_unknown_label_rejected() {
        let text = SBWM_MIN.replace("C3,C3", "X,C3");
        assert!(matches!(
            read_sbwm_csv(&file(&text)),
            Err(IoError::UnknownCriterionLabel { block: 4, .. })
        ));
    }

    #[test]
    fn sbwm_wrong_likelihood_length_rejected() {
        let text = SBWM_MIN.replace("0.6,0.4", "0.6,0.3,0.1");
        assert!(matches!(
            read_sbwm_csv(&file(&text)),
            Err(IoError::DimensionMismatch { block: 6, .. })
        ));
    }

    #[test]
    fn decision_matrix_reads_labels() {
        let text = ",Price,Quality\nCar,3,4\nBike,1,5\n";
        let (values, alts, crits) = read_decision_matrix_csv(&file(text)).unwrap();
        assert_eq!(values.rows(), 2);
        assert_eq!(alts, vec!["Car", "Bike"]);
        assert_eq!(crits, vec!["Price", "Quality"]);
    }

    #[test]
    fn bwm_file_parses() {
        let text = "\
C1,C2,C3
1,2,6

C1,C2,C3
6,3,1

C1

C3
";
        let p = read_bwm_csv(&file(text)).unwrap();
        assert_eq!(p.best_index(), 0);
        assert_eq!(p.worst_index(), 2);
        assert_eq!(p.best_to_others(), &[1.0, 2.0, 6.0]);
    }
}
