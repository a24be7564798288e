//! Cross-module invariants, mostly property-based.

mod common;

use proptest::prelude::*;

use mcdm::core::{
    normalize_minmax, normalize_vector, rank_from_scores, Direction, ScoreDirection,
};
use mcdm::io::{read_ahp_csv, read_sbwm_csv, read_smcdm_csv, CsvBlockFile};
use mcdm::pairwise::{apply_ahp, apply_anp, consistency_ratio, priority_vector, PairwiseMatrix};
use mcdm::stratified::{enumerate_states, solve_baseline_probability, state_probabilities};
use mcdm::weighting::{apply_bwm, apply_entropy, BwmProblem};

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{}", i + 1)).collect()
}

proptest! {
    #[test]
    fn normalize_vector_has_unit_norm(
        column in prop::collection::vec(-1e6f64..1e6, 1..20)
    ) {
        prop_assume!(column.iter().any(|x| x.abs() > 1e-9));
        let normalized = normalize_vector(&column).unwrap();
        let norm: f64 = normalized.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-12);
        for (a, b) in normalized.iter().zip(&column) {
            prop_assert!(a.signum() == b.signum() || *b == 0.0);
        }
    }

    #[test]
    fn minmax_spans_unit_interval(
        column in prop::collection::vec(-1e3f64..1e3, 2..20),
        cost in any::<bool>()
    ) {
        let min = column.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = column.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assume!(max > min + 1e-9);
        let dir = if cost { Direction::Cost } else { Direction::Benefit };
        let normalized = normalize_minmax(&column, dir).unwrap();
        let lo = normalized.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = normalized.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(lo.abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
        for v in &normalized {
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(v));
        }
    }

    /// Permuting the alternatives permutes the ordering identically.
    #[test]
    fn ranking_is_label_free(
        mut scores in prop::collection::vec(-100f64..100.0, 2..12),
        seed in any::<u64>()
    ) {
        // Deduplicate to keep the tie rule out of the mapping.
        scores.sort_by(f64::total_cmp);
        scores.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        prop_assume!(scores.len() >= 2);
        let base = rank_from_scores(&scores, ScoreDirection::HigherIsBetter).unwrap();

        // Deterministic permutation from the seed.
        let mut perm: Vec<usize> = (0..scores.len()).collect();
        let mut state = seed | 1;
        for i in (1..perm.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        // permuted[new] = scores[old] with new = perm[old].
        let mut permuted = vec![0.0; scores.len()];
        for (old, &new) in perm.iter().enumerate() {
            permuted[new] = scores[old];
        }
        let shuffled = rank_from_scores(&permuted, ScoreDirection::HigherIsBetter).unwrap();
        let mapped: Vec<usize> = base.ordering.iter().map(|&i| perm[i]).collect();
        prop_assert_eq!(shuffled.ordering, mapped);
    }

    /// Building from the upper triangle preserves reciprocity.
    #[test]
    fn upper_triangle_reciprocity(
        entries in prop::collection::vec(0.111f64..9.0, 1..=21)
    ) {
        let n = (1..=7)
            .find(|k| k * (k - 1) / 2 >= entries.len())
            .unwrap();
        let take = n * (n - 1) / 2;
        prop_assume!(entries.len() >= take && take > 0);
        let pm = PairwiseMatrix::from_upper_triangle(names("C", n), &entries[..take]).unwrap();
        for i in 0..n {
            for j in 0..n {
                let product = pm.values()[(i, j)] * pm.values()[(j, i)];
                prop_assert!((product - 1.0).abs() < 1e-12);
            }
        }
    }

    /// Consistent matrices are recovered and have (near) zero CR; the
    /// principal eigenvalue never drops below n.
    #[test]
    fn consistent_matrices_recover_weights(
        raw in prop::collection::vec(0.05f64..1.0, 2..=9)
    ) {
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let n = weights.len();
        let pm = PairwiseMatrix::from_weights(names("C", n), &weights).unwrap();
        let (prio, lambda) = priority_vector(&pm).unwrap();
        for (a, b) in prio.weights().iter().zip(&weights) {
            prop_assert!((a - b).abs() < 1e-8);
        }
        prop_assert!(lambda >= n as f64 - 1e-9);
        if n <= 10 {
            prop_assert!(consistency_ratio(&pm).unwrap() < 1e-9);
        }
    }

    /// Perron root bound for arbitrary reciprocal matrices.
    #[test]
    fn lambda_max_at_least_n(
        entries in prop::collection::vec(0.12f64..9.0, 21)
    ) {
        let n = 7;
        let pm = PairwiseMatrix::from_upper_triangle(names("C", n), &entries).unwrap();
        let (_, lambda) = priority_vector(&pm).unwrap();
        prop_assert!(lambda >= n as f64 - 1e-9);
    }

    /// Scaling the latent weights behind consistent judgments changes
    /// nothing: a_ij = (c w_i)/(c w_j) is the same judgment matrix.
    #[test]
    fn consistent_scaling_leaves_priorities_unchanged(
        raw in prop::collection::vec(0.05f64..1.0, 2..=8),
        scale in 0.01f64..100.0
    ) {
        let n = raw.len();
        let scaled: Vec<f64> = raw.iter().map(|w| w * scale).collect();
        let a = PairwiseMatrix::from_weights(names("C", n), &raw).unwrap();
        let b = PairwiseMatrix::from_weights(names("C", n), &scaled).unwrap();
        let (pa, _) = priority_vector(&a).unwrap();
        let (pb, _) = priority_vector(&b).unwrap();
        for (x, y) in pa.weights().iter().zip(pb.weights()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    /// The power-1 supermatrix embeds the AHP outputs exactly.
    #[test]
    fn anp_power_one_embeds_ahp(
        cw in prop::collection::vec(0.05f64..1.0, 2..=5),
        aw in prop::collection::vec(0.05f64..1.0, 2..=5)
    ) {
        let n = cw.len();
        let m = aw.len();
        let criteria = PairwiseMatrix::from_weights(names("C", n), &cw).unwrap();
        let mut rotated = aw.clone();
        let per: Vec<PairwiseMatrix> = (0..n)
            .map(|_| {
                rotated.rotate_left(1);
                PairwiseMatrix::from_weights(names("A", m), &rotated).unwrap()
            })
            .collect();
        let ahp = apply_ahp(&criteria, &per).unwrap();
        let s = apply_anp(&criteria, &per, 1).unwrap();
        prop_assert_eq!(s.rows(), 1 + n + m);
        for j in 0..n {
            prop_assert_eq!(s[(1 + j, 0)], ahp.criteria_weights.weights()[j]);
            for i in 0..m {
                prop_assert_eq!(s[(1 + n + i, 1 + j)], ahp.unweighted_scores[(i, j)]);
            }
        }
        for i in 0..m {
            for j in 0..m {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert_eq!(s[(1 + n + i, 1 + n + j)], want);
            }
        }
    }

    /// Entropy weights ignore positive column scaling.
    #[test]
    fn entropy_scaling_invariance(
        rows in prop::collection::vec(prop::collection::vec(0.1f64..10.0, 3), 3..8),
        column in 0usize..3,
        factor in 0.01f64..100.0
    ) {
        let m = rows.len();
        let dm = |rows: &[Vec<f64>]| {
            mcdm::core::DecisionMatrix::new(
                mcdm::matrix::Mat::from_rows(rows).unwrap(),
                names("A", m),
                names("C", 3),
                vec![Direction::Benefit; 3],
            )
            .unwrap()
        };
        let scaled: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .map(|(j, v)| if j == column { v * factor } else { *v })
                    .collect()
            })
            .collect();
        let base = apply_entropy(&dm(&rows));
        let scaled = apply_entropy(&dm(&scaled));
        match (base, scaled) {
            (Ok(a), Ok(b)) => {
                for (x, y) in a.weights().iter().zip(b.weights()) {
                    prop_assert!((x - y).abs() < 1e-12);
                }
            }
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "scaling changed the outcome: {a:?} vs {b:?}"),
        }
    }

    /// Every BWM solution satisfies its own LP constraints.
    #[test]
    fn bwm_solution_is_feasible(
        raw_bo in prop::collection::vec(1.0f64..9.0, 3..=7),
        raw_ow in prop::collection::vec(1.0f64..9.0, 3..=7),
        pick in any::<(u8, u8)>()
    ) {
        let n = raw_bo.len().min(raw_ow.len());
        let mut bo = raw_bo[..n].to_vec();
        let mut ow = raw_ow[..n].to_vec();
        let best = pick.0 as usize % n;
        let mut worst = pick.1 as usize % n;
        if worst == best {
            worst = (worst + 1) % n;
        }
        bo[best] = 1.0;
        ow[worst] = 1.0;
        let problem = BwmProblem::unnamed(bo, ow, best, worst).unwrap();
        let solution = apply_bwm(&problem).unwrap();
        prop_assert!(problem.max_violation(solution.weights.weights()) <= solution.xi + 1e-9);
        let sum: f64 = solution.weights.weights().iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-9);
    }

    /// The baseline probability is the exact polynomial root, and pushing
    /// any single event weight up strictly lowers it.
    #[test]
    fn baseline_probability_root_and_monotonicity(
        ratios in prop::collection::vec(0.01f64..50.0, 1..=8),
        bump in 0usize..8
    ) {
        let p0 = solve_baseline_probability(&ratios).unwrap();
        prop_assert!(p0 > 0.0 && p0 <= 1.0);
        // Residual of the defining polynomial.
        let k = ratios.len();
        let mut e = vec![0.0; k + 1];
        e[0] = 1.0;
        for &x in &ratios {
            for t in (1..=k).rev() {
                e[t] += e[t - 1] * x;
            }
        }
        let mut f = (1.0 + e[1]) * p0 - 1.0;
        let mut pt = p0;
        for et in e.iter().skip(2) {
            pt *= p0;
            f += et * pt;
        }
        prop_assert!(f.abs() < 1e-12, "residual {f}");

        let j = bump % ratios.len();
        let mut bigger = ratios.clone();
        bigger[j] *= 1.05;
        let p_after = solve_baseline_probability(&bigger).unwrap();
        prop_assert!(p_after < p0, "p0 must strictly decrease: {p0} -> {p_after}");
    }

    /// Derived state probabilities always sum to one.
    #[test]
    fn state_probabilities_sum_to_one(
        weights in prop::collection::vec(0.01f64..10.0, 2..=9)
    ) {
        let k = weights.len() - 1;
        let space = enumerate_states(k).unwrap();
        let probs = state_probabilities(&space, &weights).unwrap();
        let sum: f64 = probs.iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-9);
        prop_assert!(probs.iter().all(|p| *p >= 0.0));
    }

    /// Block splitting is idempotent and insensitive to trailing empty rows
    /// and columns.
    #[test]
    fn block_split_idempotent_and_trailing_insensitive(
        grids in prop::collection::vec(
            prop::collection::vec(prop::collection::vec(0f64..100.0, 1..5), 1..5),
            1..4
        ),
        trailing_cols in 0usize..3,
        trailing_rows in 0usize..3
    ) {
        // Render blocks with blank separators and trailing junk.
        let mut text = String::new();
        for (b, grid) in grids.iter().enumerate() {
            if b > 0 {
                text.push_str(",,\n\n");
            }
            let width = grid.iter().map(Vec::len).max().unwrap();
            for row in grid {
                let mut cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
                cells.resize(width + trailing_cols, String::new());
                text.push_str(&cells.join(","));
                text.push('\n');
            }
        }
        for _ in 0..trailing_rows {
            text.push_str(",,,\n");
        }
        let parsed = CsvBlockFile::parse_str(&text, "prop").unwrap();
        prop_assert_eq!(parsed.len(), grids.len());

        // Re-render the parsed blocks and parse again: identical split.
        let rebuilt: String = parsed
            .blocks()
            .iter()
            .map(|b| {
                b.cells()
                    .iter()
                    .map(|r| r.join(","))
                    .collect::<Vec<_>>()
                    .join("\n")
            })
            .collect::<Vec<_>>()
            .join("\n\n");
        let again = CsvBlockFile::parse_str(&rebuilt, "prop").unwrap();
        prop_assert_eq!(parsed.blocks(), again.blocks());
    }
}

/// Full AHP against a two-step hand computation whose priority vectors come
/// from the independent QR eigen oracle.
#[test]
fn ahp_matches_two_step_eigen_oracle() {
    let file = CsvBlockFile::parse_str(&common::read_fixture("ahp_computers.csv"), "ahp").unwrap();
    let (criteria, per_criterion) = read_ahp_csv(&file).unwrap();
    let result = apply_ahp(&criteria, &per_criterion).unwrap();

    let rows_of = |pm: &PairwiseMatrix| -> Vec<Vec<f64>> {
        (0..pm.n()).map(|i| pm.values().row(i).to_vec()).collect()
    };
    let (criteria_weights, _) = common::eigen_oracle(&rows_of(&criteria));
    let mut expected = vec![0.0; 3];
    for (j, pm) in per_criterion.iter().enumerate() {
        let (priorities, _) = common::eigen_oracle(&rows_of(pm));
        for i in 0..3 {
            expected[i] += criteria_weights[j] * priorities[i];
        }
    }
    for (got, want) in result.final_scores.iter().zip(&expected) {
        assert!((got - want).abs() < 1e-8, "{got} vs oracle {want}");
    }
}

/// The squared supermatrix's goal-to-alternatives block is the product of
/// the alternative priorities with the criteria weights.
#[test]
fn anp_square_matches_block_multiplication_oracle() {
    let file = CsvBlockFile::parse_str(&common::read_fixture("ahp_computers.csv"), "ahp").unwrap();
    let (criteria, per_criterion) = read_ahp_csv(&file).unwrap();
    let ahp = apply_ahp(&criteria, &per_criterion).unwrap();
    let squared = apply_anp(&criteria, &per_criterion, 2).unwrap();
    let (n, m) = (criteria.n(), per_criterion[0].n());
    for i in 0..m {
        let expected: f64 = (0..n)
            .map(|j| ahp.unweighted_scores[(i, j)] * ahp.criteria_weights.weights()[j])
            .sum();
        let got = squared[(1 + n + i, 0)];
        assert!(
            (got - expected).abs() < 1e-12,
            "goal-to-alternative {i}: {got} vs {expected}"
        );
    }
}

/// Randomly truncated fixtures must either fail to parse or yield a model
/// whose dimensions are internally consistent; a silent wrong-shape parse
/// is a bug.
#[test]
fn truncated_fixtures_never_parse_inconsistently() {
    for fixture_name in ["ahp_computers.csv", "smcdm_house.csv", "sbwm_waste.csv"] {
        let text = common::read_fixture(fixture_name);
        let lines: Vec<&str> = text.lines().collect();
        for cut in 1..lines.len() {
            let truncated = lines[..cut].join("\n");
            let Ok(file) = CsvBlockFile::parse_str(&truncated, "truncated") else {
                continue;
            };
            match fixture_name {
                "ahp_computers.csv" => {
                    if let Ok((criteria, per)) = read_ahp_csv(&file) {
                        assert_eq!(per.len(), criteria.n(), "cut {cut}: shape drifted");
                        let m = per[0].n();
                        assert!(per.iter().all(|p| p.n() == m));
                    }
                }
                "smcdm_house.csv" => {
                    if let Ok(model) = read_smcdm_csv(&file) {
                        assert_eq!(model.state_criteria().rows(), model.criteria());
                        assert_eq!(model.state_criteria().cols(), model.states());
                    }
                }
                _ => {
                    if let Ok(model) = read_sbwm_csv(&file) {
                        assert_eq!(model.others_to_worst().rows(), model.criteria());
                        assert_eq!(model.others_to_worst().cols(), model.states());
                        assert_eq!(model.likelihood().len(), model.states());
                    }
                }
            }
        }
    }
}
