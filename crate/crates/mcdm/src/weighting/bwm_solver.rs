//! Exact LP solver specialized to the linear Best-Worst Method program.
//!
//! The program is `minimize xi` subject to
//!
//! ```text
//!   |w_B - a_Bj w_j|  <= xi   for all j
//!   |w_j - a_jW w_W|  <= xi   for all j
//!   sum w = 1, w >= 0
//! ```
//!
//! Every inequality touches at most three of the variables
//! `(w_B, w_W, xi, w_j)`, so an active-set walk can solve its working-set
//! system by eliminating each pinned middle weight and reducing to a tiny
//! dense system. That keeps one iteration at O(n) work, which is what makes
//! the stratified pipeline scale the way the runtime study expects.
//!
//! The walk starts from the vertex `w_B = 1, everything else 0,
//! xi = 1` (feasible because all judgments are at least 1) and performs
//! standard drop/add exchanges with lowest-index (Bland) selection, which
//! also breaks degenerate cycles.

/// Allowed violation when verifying feasibility of a computed vertex.
const FEAS_TOL: f64 = 1e-9;
/// A multiplier below this is treated as negative (constraint leaves).
const MULT_TOL: f64 = -1e-11;
/// Minimum directional rate for a constraint to block the line search.
const RATE_TOL: f64 = 1e-11;
/// Pivot threshold for the small dense solves.
const SINGULAR_TOL: f64 = 1e-12;

const XB: usize = 0;
const XW: usize = 1;
const XI: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BwmLpError {
    /// The active-set walk failed to terminate or hit a numerically singular
    /// working set. Cannot occur for validated inputs; reported rather than
    /// silently repaired.
    SolverFailure,
}

/// One inequality `sum(coef * z[var]) <= 0`, at most three terms.
#[derive(Debug, Clone, Copy)]
struct Constr {
    terms: [(usize, f64); 3],
    len: usize,
}

impl Constr {
    fn new(terms: &[(usize, f64)]) -> Self {
        let mut t = [(0usize, 0.0f64); 3];
        t[..terms.len()].copy_from_slice(terms);
        Constr {
            terms: t,
            len: terms.len(),
        }
    }

    fn eval(&self, z: &[f64]) -> f64 {
        self.terms[..self.len]
            .iter()
            .map(|&(v, c)| c * z[v])
            .sum()
    }

    fn coef(&self, var: usize) -> f64 {
        self.terms[..self.len]
            .iter()
            .find(|&&(v, _)| v == var)
            .map(|&(_, c)| c)
            .unwrap_or(0.0)
    }
}

struct Problem {
    /// Middle criterion count (n - 2).
    p: usize,
    /// Inequality catalogue; id 0 is reserved for the sum equality, so
    /// catalogue entry `i` has global id `i + 1`.
    constrs: Vec<Constr>,
}

const SLOT_KINDS: usize = 5;

impl Problem {
    /// `bo[s]`/`ow[s]` are the judgments of middle slot `s`; `gamma` is the
    /// best-to-worst judgment, `delta` the others-to-worst entry of the best
    /// criterion.
    fn new(bo: &[f64], ow: &[f64], gamma: f64, delta: f64) -> Self {
        let p = bo.len();
        let mut constrs = Vec::with_capacity(SLOT_KINDS * p + 7);
        for s in 0..p {
            let u = 3 + s;
            let a = bo[s];
            let b = ow[s];
            constrs.push(Constr::new(&[(XB, 1.0), (u, -a), (XI, -1.0)]));
            constrs.push(Constr::new(&[(u, a), (XB, -1.0), (XI, -1.0)]));
            constrs.push(Constr::new(&[(u, 1.0), (XW, -b), (XI, -1.0)]));
            constrs.push(Constr::new(&[(XW, b), (u, -1.0), (XI, -1.0)]));
            constrs.push(Constr::new(&[(u, -1.0)]));
        }
        constrs.push(Constr::new(&[(XB, 1.0), (XW, -gamma), (XI, -1.0)]));
        constrs.push(Constr::new(&[(XW, gamma), (XB, -1.0), (XI, -1.0)]));
        constrs.push(Constr::new(&[(XB, 1.0), (XW, -delta), (XI, -1.0)]));
        constrs.push(Constr::new(&[(XW, delta), (XB, -1.0), (XI, -1.0)]));
        constrs.push(Constr::new(&[(XB, -1.0)]));
        constrs.push(Constr::new(&[(XW, -1.0)]));
        constrs.push(Constr::new(&[(XI, -1.0)]));
        Problem { p, constrs }
    }

    fn n_vars(&self) -> usize {
        self.p + 3
    }

    fn n_ineq(&self) -> usize {
        self.constrs.len()
    }

    fn slot_of(&self, id: usize) -> Option<usize> {
        // id is 1-based (0 = equality).
        let i = id - 1;
        if i < SLOT_KINDS * self.p {
            Some(i / SLOT_KINDS)
        } else {
            None
        }
    }

    fn constr(&self, id: usize) -> &Constr {
        &self.constrs[id - 1]
    }

    /// Solve the working-set equality system.
    ///
    /// `active` holds inequality ids (the sum equality is implicit). `rhs_of`
    /// gives the right-hand side for each active inequality (0 for a point
    /// solve; -1 on the leaving constraint for an edge direction). `e_rhs` is
    /// the right-hand side of the sum equality (1 for a point, 0 for a
    /// direction).
    fn solve_system(
        &self,
        active: &[usize],
        rhs_of: impl Fn(usize) -> f64,
        e_rhs: f64,
    ) -> Option<Vec<f64>> {
        let p = self.p;
        // Classify active constraints by slot.
        let mut slot_pins: Vec<Vec<usize>> = vec![Vec::new(); p];
        let mut cross: Vec<usize> = Vec::new();
        for &id in active {
            match self.slot_of(id) {
                Some(s) => slot_pins[s].push(id),
                None => cross.push(id),
            }
        }

        // u_s = c0 + cb*x_b + cw*x_w + cx*xi for each pinned slot.
        #[derive(Clone, Copy, Default)]
        struct LinForm {
            c0: f64,
            cb: f64,
            cw: f64,
            cx: f64,
        }
        let mut forms: Vec<Option<LinForm>> = vec![None; p];
        let mut free_slots: Vec<usize> = Vec::new();
        let mut extra_eqs: Vec<(f64, f64, f64, f64)> = Vec::new(); // cb, cw, cx, rhs

        for s in 0..p {
            match slot_pins[s].len() {
                0 => free_slots.push(s),
                _ => {
                    let id = slot_pins[s][0];
                    let r = rhs_of(id);
                    let kind = (id - 1) % SLOT_KINDS;
                    let alpha = match kind {
                        0 | 1 => self.constr(id).coef(3 + s).abs(),
                        _ => 1.0,
                    };
                    let form = match kind {
                        // x_b - alpha*u - xi = r  =>  u = (x_b - xi - r)/alpha
                        0 => LinForm {
                            c0: -r / alpha,
                            cb: 1.0 / alpha,
                            cw: 0.0,
                            cx: -1.0 / alpha,
                        },
                        // alpha*u - x_b - xi = r  =>  u = (x_b + xi + r)/alpha
                        1 => LinForm {
                            c0: r / alpha,
                            cb: 1.0 / alpha,
                            cw: 0.0,
                            cx: 1.0 / alpha,
                        },
                        // u - beta*x_w - xi = r  =>  u = beta*x_w + xi + r
                        2 => LinForm {
                            c0: r,
                            cb: 0.0,
                            cw: self.constr(id).coef(XW).abs(),
                            cx: 1.0,
                        },
                        // beta*x_w - u - xi = r  =>  u = beta*x_w - xi - r
                        3 => LinForm {
                            c0: -r,
                            cb: 0.0,
                            cw: self.constr(id).coef(XW).abs(),
                            cx: -1.0,
                        },
                        // -u = r  =>  u = -r
                        _ => LinForm {
                            c0: -r,
                            cb: 0.0,
                            cw: 0.0,
                            cx: 0.0,
                        },
                    };
                    forms[s] = Some(form);
                    // Substitute the form into every additional pin.
                    for &id2 in &slot_pins[s][1..] {
                        let c2 = self.constr(id2);
                        let cu = c2.coef(3 + s);
                        let cb = c2.coef(XB) + cu * form.cb;
                        let cw = c2.coef(XW) + cu * form.cw;
                        let cx = c2.coef(XI) + cu * form.cx;
                        let rhs = rhs_of(id2) - cu * form.c0;
                        extra_eqs.push((cb, cw, cx, rhs));
                    }
                }
            }
        }

        // Reduced unknowns: x_b, x_w, xi, then free u's.
        let q = 3 + free_slots.len();
        let mut a: Vec<Vec<f64>> = Vec::with_capacity(q);
        let mut rhs = Vec::with_capacity(q);

        // Sum equality.
        {
            let mut row = vec![0.0; q];
            let mut cst = 0.0;
            row[XB] += 1.0;
            row[XW] += 1.0;
            for s in 0..p {
                if let Some(f) = forms[s] {
                    cst += f.c0;
                    row[XB] += f.cb;
                    row[XW] += f.cw;
                    row[XI] += f.cx;
                } else {
                    let idx = 3 + free_slots.iter().position(|&fs| fs == s).unwrap();
                    row[idx] += 1.0;
                }
            }
            a.push(row);
            rhs.push(e_rhs - cst);
        }
        for &(cb, cw, cx, r) in &extra_eqs {
            let mut row = vec![0.0; q];
            row[XB] = cb;
            row[XW] = cw;
            row[XI] = cx;
            a.push(row);
            rhs.push(r);
        }
        for &id in &cross {
            let c = self.constr(id);
            let mut row = vec![0.0; q];
            row[XB] = c.coef(XB);
            row[XW] = c.coef(XW);
            row[XI] = c.coef(XI);
            a.push(row);
            rhs.push(rhs_of(id));
        }
        if a.len() != q {
            return None;
        }

        let y = solve_dense(&mut a, &mut rhs)?;

        let mut z = vec![0.0; self.n_vars()];
        z[XB] = y[XB];
        z[XW] = y[XW];
        z[XI] = y[XI];
        for s in 0..p {
            z[3 + s] = match forms[s] {
                Some(f) => f.c0 + f.cb * y[XB] + f.cw * y[XW] + f.cx * y[XI],
                None => y[3 + free_slots.iter().position(|&fs| fs == s).unwrap()],
            };
        }
        Some(z)
    }

    /// Lagrange multipliers of the working set for `minimize xi`.
    ///
    /// Returns `(lambda_e, lambda)` with `lambda[i]` matching `active[i]`.
    fn multipliers(&self, active: &[usize]) -> Option<(f64, Vec<f64>)> {
        let p = self.p;
        let mut slot_pins: Vec<Vec<usize>> = vec![Vec::new(); p];
        let mut cross: Vec<usize> = Vec::new();
        for &id in active {
            match self.slot_of(id) {
                Some(s) => slot_pins[s].push(id),
                None => cross.push(id),
            }
        }

        // Unknown vector mu = [lambda_E, lambda_cross..., lambda of every
        // additional pin beyond a slot's first...].
        let mut extras: Vec<usize> = Vec::new();
        for pins in &slot_pins {
            extras.extend(pins.iter().skip(1).copied());
        }
        let q = 1 + cross.len() + extras.len();

        // Each active lambda is a linear form over mu.
        let mu_index_of_cross = |id: usize| 1 + cross.iter().position(|&c| c == id).unwrap();
        let mu_index_of_extra =
            |id: usize| 1 + cross.len() + extras.iter().position(|&c| c == id).unwrap();

        let mut lambda_forms: Vec<(usize, Vec<f64>)> = Vec::new(); // (id, coeffs over mu)
        for (s, pins) in slot_pins.iter().enumerate() {
            if pins.is_empty() {
                continue;
            }
            let u = 3 + s;
            // Stationarity in u_s: lambda_E + sum(lambda_pin * coef_u) = 0
            // expresses the first pin's lambda through the extras.
            let cu1 = self.constr(pins[0]).coef(u);
            let mut f = vec![0.0; q];
            f[0] = -1.0 / cu1;
            for &id2 in &pins[1..] {
                let cu2 = self.constr(id2).coef(u);
                f[mu_index_of_extra(id2)] = -cu2 / cu1;
                let mut f2 = vec![0.0; q];
                f2[mu_index_of_extra(id2)] = 1.0;
                lambda_forms.push((id2, f2));
            }
            lambda_forms.push((pins[0], f));
        }
        for &id in &cross {
            let mut f = vec![0.0; q];
            f[mu_index_of_cross(id)] = 1.0;
            lambda_forms.push((id, f));
        }

        // Remaining stationarity rows: x_b, x_w, xi, plus lambda_E = 0 per free slot.
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut rhs: Vec<f64> = Vec::new();
        for var in [XB, XW, XI] {
            let mut row = vec![0.0; q];
            if var != XI {
                row[0] += 1.0; // equality gradient
            }
            for (id, f) in &lambda_forms {
                let c = self.constr(*id).coef(var);
                if c != 0.0 {
                    for (k, fk) in f.iter().enumerate() {
                        row[k] += c * fk;
                    }
                }
            }
            rows.push(row);
            rhs.push(if var == XI { -1.0 } else { 0.0 });
        }
        for pins in &slot_pins {
            if pins.is_empty() {
                let mut row = vec![0.0; q];
                row[0] = 1.0;
                rows.push(row);
                rhs.push(0.0);
            }
        }
        if rows.len() != q {
            return None;
        }
        let mu = solve_dense(&mut rows, &mut rhs)?;

        let lambda_e = mu[0];
        let mut out = vec![0.0; active.len()];
        for (id, f) in &lambda_forms {
            let value: f64 = f.iter().zip(&mu).map(|(a, b)| a * b).sum();
            let pos = active.iter().position(|i| i == id).unwrap();
            out[pos] = value;
        }
        Some((lambda_e, out))
    }
}

/// Gaussian elimination with partial pivoting; consumes its inputs.
fn solve_dense(a: &mut [Vec<f64>], rhs: &mut [f64]) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < SINGULAR_TOL {
            return None;
        }
        a.swap(col, piv);
        rhs.swap(col, piv);
        for r in (col + 1)..n {
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut v = rhs[col];
        for c in (col + 1)..n {
            v -= a[col][c] * x[c];
        }
        x[col] = v / a[col][col];
    }
    Some(x)
}

/// Solve the BWM linear program for criterion count `n >= 2`.
///
/// `bo` and `ow` are the full judgment vectors indexed by criterion;
/// `best`/`worst` are criterion indices. Returns the weight vector (indexed
/// by criterion) and the optimal inconsistency objective.
pub(crate) fn solve(
    bo: &[f64],
    ow: &[f64],
    best: usize,
    worst: usize,
) -> Result<(Vec<f64>, f64), BwmLpError> {
    let n = bo.len();
    debug_assert!(n >= 2 && best != worst);
    let middles: Vec<usize> = (0..n).filter(|&j| j != best && j != worst).collect();
    let mid_bo: Vec<f64> = middles.iter().map(|&j| bo[j]).collect();
    let mid_ow: Vec<f64> = middles.iter().map(|&j| ow[j]).collect();
    let problem = Problem::new(&mid_bo, &mid_ow, bo[worst], ow[best]);
    let p = problem.p;

    // Initial vertex: x_b = 1, x_w = 0, all middles 0, xi = 1.
    let mut active: Vec<usize> = Vec::with_capacity(n);
    for s in 0..p {
        active.push(1 + SLOT_KINDS * s + 4); // N_s
    }
    let cross_base = 1 + SLOT_KINDS * p;
    active.push(cross_base + 5); // NW
    if p > 0 {
        active.push(1); // T1 of slot 0 pins xi = x_b
    } else {
        active.push(cross_base); // X1 pins xi
    }
    active.sort_unstable();
    let mut is_active = vec![false; problem.n_ineq() + 1];
    for &id in &active {
        is_active[id] = true;
    }

    let mut z = problem
        .solve_system(&active, |_| 0.0, 1.0)
        .ok_or(BwmLpError::SolverFailure)?;

    let cap = 100 * n + 1000;
    for _ in 0..cap {
        let (_, lambda) = problem
            .multipliers(&active)
            .ok_or(BwmLpError::SolverFailure)?;

        // Bland: leave on the lowest-id constraint with a negative multiplier.
        let mut leave: Option<usize> = None;
        for (pos, &id) in active.iter().enumerate() {
            if lambda[pos] < MULT_TOL && leave.is_none_or(|l| id < active[l]) {
                leave = Some(pos);
            }
        }
        let Some(leave_pos) = leave else {
            return extract(&problem, &z, &middles, best, worst, n);
        };
        let q = active[leave_pos];

        let d = problem
            .solve_system(&active, |id| if id == q { -1.0 } else { 0.0 }, 0.0)
            .ok_or(BwmLpError::SolverFailure)?;

        // Line search against inactive constraints.
        let mut best_t = f64::INFINITY;
        let mut blocker: Option<usize> = None;
        for id in 1..=problem.n_ineq() {
            if is_active[id] {
                continue;
            }
            let rate = problem.constr(id).eval(&d);
            if rate > RATE_TOL {
                let slack = -problem.constr(id).eval(&z);
                let t = (slack / rate).max(0.0);
                if t < best_t - 1e-12 || (t < best_t + 1e-12 && blocker.is_none_or(|b| id < b))
                {
                    best_t = t;
                    blocker = Some(id);
                }
            }
        }
        let Some(add_id) = blocker else {
            return Err(BwmLpError::SolverFailure);
        };

        active.remove(leave_pos);
        is_active[q] = false;
        let ins = active.partition_point(|&x| x < add_id);
        active.insert(ins, add_id);
        is_active[add_id] = true;

        z = problem
            .solve_system(&active, |_| 0.0, 1.0)
            .ok_or(BwmLpError::SolverFailure)?;
    }
    Err(BwmLpError::SolverFailure)
}

fn extract(
    problem: &Problem,
    z: &[f64],
    middles: &[usize],
    best: usize,
    worst: usize,
    n: usize,
) -> Result<(Vec<f64>, f64), BwmLpError> {
    // Verify feasibility of the final vertex.
    for id in 1..=problem.n_ineq() {
        if problem.constr(id).eval(z) > FEAS_TOL {
            return Err(BwmLpError::SolverFailure);
        }
    }
    let mut w = vec![0.0; n];
    w[best] = z[XB];
    w[worst] = z[XW];
    for (s, &j) in middles.iter().enumerate() {
        w[j] = z[3 + s];
    }
    let mut sum = 0.0;
    for v in w.iter_mut() {
        if *v < 0.0 {
            if *v < -FEAS_TOL {
                return Err(BwmLpError::SolverFailure);
            }
            *v = 0.0;
        }
        sum += *v;
    }
    if (sum - 1.0).abs() > 1e-6 {
        return Err(BwmLpError::SolverFailure);
    }
    for v in w.iter_mut() {
        *v /= sum;
    }
    Ok((w, z[XI].max(0.0)))
}
