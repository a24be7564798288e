//! Small dense two-phase simplex for the handful of auxiliary linear
//! programs in this crate (BWM weight-interval diagnostics, test
//! cross-checks). Problem sizes are at most a few hundred variables, so a
//! full tableau is appropriate.

/// Numeric pivot tolerance.
const PIVOT_TOL: f64 = 1e-10;

/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_STREAK: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Relation {
    Le,
    Ge,
    Eq,
}

/// `minimize objective . x` subject to `row . x (rel) rhs` and `x >= 0`.
#[derive(Debug, Clone)]
pub(crate) struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<(Vec<f64>, Relation, f64)>,
}

#[derive(Debug, Clone)]
pub(crate) struct LpSolution {
    pub x: Vec<f64>,
    pub objective_value: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum SimplexError {
    Infeasible,
    Unbounded,
    IterationLimit,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    n_total: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize, cost: &mut [f64], cost_value: &mut f64) {
        let p = self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v /= p;
        }
        self.rhs[row] /= p;
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let f = self.rows[r][col];
            if f.abs() <= PIVOT_TOL {
                self.rows[r][col] = 0.0;
                continue;
            }
            for c in 0..self.n_total {
                self.rows[r][c] -= f * self.rows[row][c];
            }
            self.rhs[r] -= f * self.rhs[row];
        }
        let f = cost[col];
        if f.abs() > 0.0 {
            for c in 0..self.n_total {
                cost[c] -= f * self.rows[row][c];
            }
            *cost_value -= f * self.rhs[row];
        }
        self.basis[row] = col;
    }

    /// Run the simplex loop for one phase. `allow` masks columns that may
    /// enter the basis.
    fn optimize(
        &mut self,
        cost: &mut [f64],
        cost_value: &mut f64,
        allow: impl Fn(usize) -> bool,
    ) -> Result<(), SimplexError> {
        let max_iter = 200 * (self.n_total + self.rows.len()) + 1000;
        let mut degenerate_streak = 0usize;
        for _ in 0..max_iter {
            let bland = degenerate_streak >= DEGENERATE_STREAK;
            let entering = if bland {
                (0..self.n_total).find(|&c| allow(c) && cost[c] < -PIVOT_TOL)
            } else {
                let mut best: Option<(usize, f64)> = None;
                for c in 0..self.n_total {
                    if allow(c)
                        && cost[c] < -PIVOT_TOL
                        && best.is_none_or(|(_, v)| cost[c] < v)
                    {
                        best = Some((c, cost[c]));
                    }
                }
                best.map(|(c, _)| c)
            };
            let Some(col) = entering else {
                return Ok(());
            };

            let mut leaving: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][col];
                if a > PIVOT_TOL {
                    let ratio = self.rhs[r] / a;
                    let better = match leaving {
                        None => true,
                        Some((lr, lv)) => {
                            ratio < lv - PIVOT_TOL
                                || (ratio < lv + PIVOT_TOL && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leaving = Some((r, ratio));
                    }
                }
            }
            let Some((row, ratio)) = leaving else {
                return Err(SimplexError::Unbounded);
            };
            if ratio.abs() <= PIVOT_TOL {
                degenerate_streak += 1;
            } else {
                degenerate_streak = 0;
            }
            self.pivot(row, col, cost, cost_value);
        }
        Err(SimplexError::IterationLimit)
    }
}

/// Solve a linear program with the two-phase dense simplex.
pub(crate) fn solve(lp: &LinearProgram) -> Result<LpSolution, SimplexError> {
    let nv = lp.objective.len();
    let m = lp.constraints.len();

    // Normalize to nonnegative right-hand sides.
    let mut norm: Vec<(Vec<f64>, Relation, f64)> = Vec::with_capacity(m);
    for (row, rel, rhs) in &lp.constraints {
        assert_eq!(row.len(), nv, "constraint arity");
        if *rhs < 0.0 {
            let flipped = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            norm.push((row.iter().map(|v| -v).collect(), flipped, -rhs));
        } else {
            norm.push((row.clone(), *rel, *rhs));
        }
    }

    let n_slack = norm
        .iter()
        .filter(|(_, rel, _)| matches!(rel, Relation::Le | Relation::Ge))
        .count();
    let n_artificial = norm
        .iter()
        .filter(|(_, rel, _)| matches!(rel, Relation::Ge | Relation::Eq))
        .count();
    let n_total = nv + n_slack + n_artificial;
    let artificial_start = nv + n_slack;

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack_idx = nv;
    let mut art_idx = artificial_start;
    for (row, rel, b) in &norm {
        let mut full = vec![0.0; n_total];
        full[..nv].copy_from_slice(row);
        match rel {
            Relation::Le => {
                full[slack_idx] = 1.0;
                basis.push(slack_idx);
                slack_idx += 1;
            }
            Relation::Ge => {
                full[slack_idx] = -1.0;
                slack_idx += 1;
                full[art_idx] = 1.0;
                basis.push(art_idx);
                art_idx += 1;
            }
            Relation::Eq => {
                full[art_idx] = 1.0;
                basis.push(art_idx);
                art_idx += 1;
            }
        }
        rows.push(full);
        rhs.push(*b);
    }

    let mut t = Tableau {
        rows,
        rhs,
        basis,
        n_total,
    };

    // Phase 1: minimize the sum of artificial variables.
    if n_artificial > 0 {
        let mut cost = vec![0.0; n_total];
        for c in artificial_start..n_total {
            cost[c] = 1.0;
        }
        let mut cost_value = 0.0;
        // Canonicalize: basic artificial columns must have zero reduced cost.
        for r in 0..t.rows.len() {
            if t.basis[r] >= artificial_start {
                for c in 0..n_total {
                    cost[c] -= t.rows[r][c];
                }
                cost_value -= t.rhs[r];
            }
        }
        t.optimize(&mut cost, &mut cost_value, |_| true)?;
        if -cost_value > 1e-7 {
            return Err(SimplexError::Infeasible);
        }
        // Drive remaining artificials out of the basis.
        for r in 0..t.rows.len() {
            if t.basis[r] >= artificial_start {
                if let Some(col) =
                    (0..artificial_start).find(|&c| t.rows[r][c].abs() > PIVOT_TOL)
                {
                    let mut dummy = vec![0.0; n_total];
                    let mut dummy_val = 0.0;
                    t.pivot(r, col, &mut dummy, &mut dummy_val);
                }
            }
        }
    }

    // Phase 2: original objective over structural and slack columns.
    let mut cost = vec![0.0; n_total];
    cost[..nv].copy_from_slice(&lp.objective);
    let mut cost_value = 0.0;
    for r in 0..t.rows.len() {
        let b = t.basis[r];
        if b < n_total && cost[b].abs() > 0.0 {
            let f = cost[b];
            for c in 0..n_total {
                cost[c] -= f * t.rows[r][c];
            }
            cost_value -= f * t.rhs[r];
        }
    }
    let art = artificial_start;
    t.optimize(&mut cost, &mut cost_value, |c| c < art)?;

    let mut x = vec![0.0; nv];
    for r in 0..t.rows.len() {
        let b = t.basis[r];
        if b < nv {
            x[b] = t.rhs[r];
        } else if b >= artificial_start && t.rhs[r] > 1e-7 {
            return Err(SimplexError::Infeasible);
        }
    }
    let objective_value = lp
        .objective
        .iter()
        .zip(&x)
        .map(|(c, v)| c * v)
        .sum::<f64>();
    Ok(LpSolution {
        x,
        objective_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximization_via_negated_objective() {
        // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6 -> x = 4, y = 0, obj 12.
        let lp = LinearProgram {
            objective: vec![-3.0, -2.0],
            constraints: vec![
                (vec![1.0, 1.0], Relation::Le, 4.0),
                (vec![1.0, 3.0], Relation::Le, 6.0),
            ],
        };
        let sol = solve(&lp).unwrap();
        assert!((sol.x[0] - 4.0).abs() < 1e-9);
        assert!(sol.x[1].abs() < 1e-9);
        assert!((sol.objective_value + 12.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_ge_constraints() {
        // min x + y s.t. x + y = 1, x >= 0.25 -> obj 1.
        let lp = LinearProgram {
            objective: vec![1.0, 1.0],
            constraints: vec![
                (vec![1.0, 1.0], Relation::Eq, 1.0),
                (vec![1.0, 0.0], Relation::Ge, 0.25),
            ],
        };
        let sol = solve(&lp).unwrap();
        assert!((sol.objective_value - 1.0).abs() < 1e-9);
        assert!(sol.x[0] >= 0.25 - 1e-9);
    }

    #[test]
    fn detects_infeasibility() {
        let lp = LinearProgram {
            objective: vec![1.0],
            constraints: vec![
                (vec![1.0], Relation::Le, 1.0),
                (vec![1.0], Relation::Ge, 2.0),
            ],
        };
        assert_eq!(solve(&lp).unwrap_err(), SimplexError::Infeasible);
    }

    #[test]
    fn detects_unboundedness() {
        let lp = LinearProgram {
            objective: vec![-1.0],
            constraints: vec![(vec![-1.0], Relation::Le, 0.0)],
        };
        assert_eq!(solve(&lp).unwrap_err(), SimplexError::Unbounded);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Multiple redundant constraints through the origin.
        let lp = LinearProgram {
            objective: vec![-1.0, -1.0],
            constraints: vec![
                (vec![1.0, 0.0], Relation::Le, 0.0),
                (vec![2.0, 0.0], Relation::Le, 0.0),
                (vec![1.0, 1.0], Relation::Le, 2.0),
            ],
        };
        let sol = solve(&lp).unwrap();
        assert!(sol.x[0].abs() < 1e-9);
        assert!((sol.x[1] - 2.0).abs() < 1e-9);
    }
}
