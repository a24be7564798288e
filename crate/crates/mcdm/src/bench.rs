//! Runtime-scaling measurement: generate random inputs of growing criterion
//! count, time the BWM/SMCDM/SBWM/AHP entry points, and fit log-log slopes.
//!
//! Measurement is strictly single-threaded and uses the monotonic wall
//! clock. Calls are batched so that each timed sample spans at least a
//! couple of milliseconds, keeping clock granularity and allocator noise
//! out of the slopes.

use std::hint::black_box;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::io::fmt_f64;
use crate::matrix::Mat;
use crate::pairwise::{apply_ahp_with, PairwiseMatrix, RiTable};
use crate::stratified::{apply_sbwm, apply_smcdm, SbwmModel, StratifiedMode, StratifiedModel};
use crate::weighting::{apply_bwm, BwmProblem};

/// Alternatives count used by the generators that need a comparison matrix.
/// The scaling study varies criteria only.
const BENCH_ALTERNATIVES: usize = 5;

/// Events in the stratified generators (2^3 = 8 states).
const BENCH_EVENTS: usize = 3;

#[derive(Debug, Error, PartialEq)]
pub enum BenchError {
    #[error("unknown benchmark method {name:?}; available: bwm, smcdm, sbwm, ahp")]
    UnknownMethod { name: String },
    #[error("need at least {need} distinct sizes spanning a decade, got {got}")]
    InsufficientPoints { got: usize, need: usize },
    #[error("benchmark input generation failed: {detail}")]
    Generation { detail: String },
    #[error("method under test failed: {detail}")]
    MethodFailed { detail: String },
    #[error("malformed benchmark CSV: {detail}")]
    MalformedCsv { detail: String },
}

/// Methods covered by the runtime study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchMethod {
    Bwm,
    Smcdm,
    Sbwm,
    Ahp,
}

impl BenchMethod {
    pub fn name(&self) -> &'static str {
        match self {
            BenchMethod::Bwm => "bwm",
            BenchMethod::Smcdm => "smcdm",
            BenchMethod::Sbwm => "sbwm",
            BenchMethod::Ahp => "ahp",
        }
    }

    pub fn parse(name: &str) -> Result<Self, BenchError> {
        match name.to_ascii_lowercase().as_str() {
            "bwm" => Ok(BenchMethod::Bwm),
            "smcdm" => Ok(BenchMethod::Smcdm),
            "sbwm" => Ok(BenchMethod::Sbwm),
            "ahp" => Ok(BenchMethod::Ahp),
            other => Err(BenchError::UnknownMethod {
                name: other.to_string(),
            }),
        }
    }

    fn tag(&self) -> u64 {
        match self {
            BenchMethod::Bwm => 1,
            BenchMethod::Smcdm => 2,
            BenchMethod::Sbwm => 3,
            BenchMethod::Ahp => 4,
        }
    }
}

/// A generated input for one timed method.
#[derive(Debug, Clone)]
pub enum GeneratedProblem {
    Bwm(BwmProblem),
    Smcdm(StratifiedModel),
    Sbwm(SbwmModel),
    Ahp {
        criteria: PairwiseMatrix,
        per_criterion: Vec<PairwiseMatrix>,
        ri_table: RiTable,
    },
}

fn rng_for(method: BenchMethod, n: usize, seed: u64) -> ChaCha8Rng {
    let mixed = seed
        ^ method.tag().wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (n as u64).wrapping_mul(0xD1B5_4A32_D192_ED03);
    ChaCha8Rng::seed_from_u64(mixed)
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{}", i + 1)).collect()
}

/// Deterministic-in-seed valid input for `method` with `n` criteria.
///
/// BWM inputs are built fully consistent (judgments derived from one
/// best-to-worst chain); the stratified generators use free random
/// unity-anchored judgment columns.
pub fn generate_random_problem(
    method: BenchMethod,
    n: usize,
    seed: u64,
) -> Result<GeneratedProblem, BenchError> {
    if n < 2 {
        return Err(BenchError::Generation {
            detail: format!("need at least 2 criteria, got {n}"),
        });
    }
    let mut rng = rng_for(method, n, seed);
    match method {
        BenchMethod::Bwm => Ok(GeneratedProblem::Bwm(random_consistent_bwm(&mut rng, n)?)),
        BenchMethod::Smcdm => Ok(GeneratedProblem::Smcdm(random_smcdm(&mut rng, n)?)),
        BenchMethod::Sbwm => Ok(GeneratedProblem::Sbwm(random_sbwm(&mut rng, n)?)),
        BenchMethod::Ahp => {
            let criteria = random_reciprocal(&mut rng, n, "C");
            let per_criterion = (0..n)
                .map(|_| random_reciprocal(&mut rng, BENCH_ALTERNATIVES, "A"))
                .collect();
            Ok(GeneratedProblem::Ahp {
                criteria,
                per_criterion,
                ri_table: extended_ri_table(n),
            })
        }
    }
}

fn random_consistent_bwm(rng: &mut ChaCha8Rng, n: usize) -> Result<BwmProblem, BenchError> {
    let best = rng.gen_range(0..n);
    let mut worst = rng.gen_range(0..n);
    while worst == best {
        worst = rng.gen_range(0..n);
    }
    let mut bo = vec![0.0; n];
    for (j, v) in bo.iter_mut().enumerate() {
        if j != best && j != worst {
            *v = rng.gen_range(1.0..3.0);
        }
    }
    let a_bw = rng.gen_range(3.0..9.0);
    bo[best] = 1.0;
    bo[worst] = a_bw;
    // Consistent chain: a_jW = a_BW / a_Bj, all within the 1..9 scale.
    let ow: Vec<f64> = bo.iter().map(|a| a_bw / a).collect();
    BwmProblem::unnamed(bo, ow, best, worst).map_err(|e| BenchError::Generation {
        detail: e.to_string(),
    })
}

fn random_smcdm(rng: &mut ChaCha8Rng, n: usize) -> Result<StratifiedModel, BenchError> {
    let m = BENCH_ALTERNATIVES;
    let s = 1 << BENCH_EVENTS;
    let mut comparison = Mat::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            comparison[(i, j)] = rng.gen_range(0.0..1.0);
        }
    }
    let mut state_criteria = Mat::zeros(n, s);
    for t in 0..s {
        let col: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
        let sum: f64 = col.iter().sum();
        for j in 0..n {
            state_criteria[(j, t)] = col[j] / sum;
        }
    }
    let mut likelihood = vec![1.0];
    for _ in 0..BENCH_EVENTS {
        likelihood.push(rng.gen_range(0.1..1.0));
    }
    StratifiedModel::new(
        comparison,
        state_criteria,
        likelihood,
        StratifiedMode::IndependentEvents,
        names("A", m),
        names("C", n),
        names("S", s),
    )
    .map_err(|e| BenchError::Generation {
        detail: e.to_string(),
    })
}

fn random_sbwm(rng: &mut ChaCha8Rng, n: usize) -> Result<SbwmModel, BenchError> {
    let m = BENCH_ALTERNATIVES;
    let s = 1 << BENCH_EVENTS;
    let mut comparison = Mat::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            comparison[(i, j)] = rng.gen_range(0.0..1.0);
        }
    }
    let mut o2w = Mat::zeros(n, s);
    let mut o2b = Mat::zeros(n, s);
    let mut best_per_state = Vec::with_capacity(s);
    let mut worst_per_state = Vec::with_capacity(s);
    for t in 0..s {
        let best = rng.gen_range(0..n);
        let mut worst = rng.gen_range(0..n);
        while worst == best {
            worst = rng.gen_range(0..n);
        }
        for j in 0..n {
            o2b[(j, t)] = rng.gen_range(1.0..9.0);
            o2w[(j, t)] = rng.gen_range(1.0..9.0);
        }
        o2b[(best, t)] = 1.0;
        o2w[(worst, t)] = 1.0;
        best_per_state.push(best);
        worst_per_state.push(worst);
    }
    let raw: Vec<f64> = (0..s).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let likelihood: Vec<f64> = raw.iter().map(|p| p / total).collect();
    SbwmModel::new(
        comparison,
        o2w,
        o2b,
        worst_per_state,
        best_per_state,
        likelihood,
        names("A", m),
        names("C", n),
        names("S", s),
    )
    .map_err(|e| BenchError::Generation {
        detail: e.to_string(),
    })
}

/// Random index table stretched past the tabulated range so the timed AHP
/// calls can consistency-check judgment matrices of any benchmarked size.
/// Beyond n = 10 the values follow the standard asymptotic fit
/// `RI(n) ~ 1.7699 - 4.3513 / n`.
fn extended_ri_table(max_n: usize) -> RiTable {
    let mut values = vec![0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49];
    for n in 11..=max_n.max(10) {
        values.push(1.7699 - 4.3513 / n as f64);
    }
    RiTable::new(values)
}

fn random_reciprocal(rng: &mut ChaCha8Rng, n: usize, prefix: &str) -> PairwiseMatrix {
    let ln9 = 9.0f64.ln();
    let count = n * (n - 1) / 2;
    let upper: Vec<f64> = (0..count)
        .map(|_| (rng.gen_range(-ln9..ln9)).exp())
        .collect();
    PairwiseMatrix::from_upper_triangle(names(prefix, n), &upper)
        .expect("generated reciprocal matrix is valid")
}

/// Run the method under test once.
pub fn run_problem(problem: &GeneratedProblem) -> Result<(), BenchError> {
    match problem {
        GeneratedProblem::Bwm(p) => {
            let s = apply_bwm(p).map_err(|e| BenchError::MethodFailed {
                detail: e.to_string(),
            })?;
            black_box(s.xi);
        }
        GeneratedProblem::Smcdm(m) => {
            let s = apply_smcdm(m).map_err(|e| BenchError::MethodFailed {
                detail: e.to_string(),
            })?;
            black_box(s.ranking.scores.len());
        }
        GeneratedProblem::Sbwm(m) => {
            let s = apply_sbwm(m).map_err(|e| BenchError::MethodFailed {
                detail: e.to_string(),
            })?;
            black_box(s.ranking.scores.len());
        }
        GeneratedProblem::Ahp {
            criteria,
            per_criterion,
            ri_table,
        } => {
            let s = apply_ahp_with(criteria, per_criterion, ri_table).map_err(|e| {
                BenchError::MethodFailed {
                    detail: e.to_string(),
                }
            })?;
            black_box(s.final_scores.len());
        }
    }
    Ok(())
}

/// One timed cell of the study.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub method: String,
    pub n_criteria: usize,
    pub repetitions: usize,
    pub median_seconds: f64,
    /// Per-repetition per-call seconds, after the discarded warm-up run.
    pub all_samples: Vec<f64>,
}

/// Study configuration.
#[derive(Debug, Clone)]
pub struct ScalingOptions {
    pub methods: Vec<BenchMethod>,
    pub seed: u64,
    /// Timed repetitions per cell (a warm-up run is added and discarded).
    pub repetitions: usize,
    /// Criterion counts; defaults to the geometric grid 4..256.
    pub sizes: Vec<usize>,
    /// Wall-clock budget for the whole study.
    pub budget: Duration,
}

impl Default for ScalingOptions {
    fn default() -> Self {
        ScalingOptions {
            methods: vec![
                BenchMethod::Bwm,
                BenchMethod::Smcdm,
                BenchMethod::Sbwm,
                BenchMethod::Ahp,
            ],
            seed: 42,
            repetitions: 9,
            sizes: vec![4, 8, 16, 32, 64, 128, 256],
            budget: Duration::from_secs(600),
        }
    }
}

/// Fitted empirical complexity of one method.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodFit {
    pub method: String,
    pub slope: f64,
    pub r_squared: f64,
}

/// Full study output.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub records: Vec<BenchRecord>,
    pub fits: Vec<MethodFit>,
    /// Empty-body per-call time over the smallest real measurement at the
    /// largest size.
    pub overhead_ratio: f64,
    /// False when the harness overhead exceeds 1% of the smallest
    /// measurement, making the slopes unreliable.
    pub reliable: bool,
}

fn median(samples: &[f64]) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    }
}

/// Target duration of one timed batch.
const BATCH_TARGET: Duration = Duration::from_millis(8);

fn calibrate_batch(call: &mut impl FnMut()) -> usize {
    let start = Instant::now();
    call();
    let once = start.elapsed().max(Duration::from_nanos(20));
    let batch = (BATCH_TARGET.as_secs_f64() / once.as_secs_f64()).ceil() as usize;
    batch.clamp(1, 2_000_000)
}

fn one_sample(call: &mut impl FnMut(), batch: usize) -> f64 {
    let start = Instant::now();
    for _ in 0..batch {
        call();
    }
    start.elapsed().as_secs_f64() / batch as f64
}

/// Run the scaling study. Fewer than 5 repetitions would make the medians
/// meaningless, so the count is floored there.
///
/// Within a method, the repetitions cycle round-robin over all sizes so a
/// transient load spike spreads across the whole curve instead of
/// corrupting every sample of one cell.
pub fn run_scaling(options: &ScalingOptions) -> Result<ScalingReport, BenchError> {
    let started = Instant::now();
    let repetitions = options.repetitions.max(5);
    let mut records: Vec<BenchRecord> = Vec::new();
    let mut exhausted = false;
    for &method in &options.methods {
        if started.elapsed() > options.budget {
            break;
        }
        struct Cell {
            n: usize,
            problem: GeneratedProblem,
            batch: usize,
            samples: Vec<f64>,
        }
        let mut cells = Vec::with_capacity(options.sizes.len());
        for &n in &options.sizes {
            let problem = generate_random_problem(method, n, options.seed)?;
            // Fail fast (and only once) if the method errors on this input.
            run_problem(&problem)?;
            let mut call = || {
                run_problem(&problem).expect("validated above");
            };
            let batch = calibrate_batch(&mut call);
            cells.push(Cell {
                n,
                problem,
                batch,
                samples: Vec::with_capacity(repetitions),
            });
        }
        // One warm-up round, discarded, then the timed rounds. Each visit
        // re-warms caches with a short untimed burst: the round-robin just
        // ran a different problem size.
        for round in 0..=repetitions {
            if started.elapsed() > options.budget {
                exhausted = true;
                break;
            }
            for cell in cells.iter_mut() {
                let mut call = || {
                    run_problem(&cell.problem).expect("validated above");
                };
                let _ = one_sample(&mut call, (cell.batch / 4).max(1));
                let value = one_sample(&mut call, cell.batch);
                if round > 0 {
                    cell.samples.push(value);
                }
            }
        }
        for cell in cells {
            if cell.samples.is_empty() {
                continue;
            }
            records.push(BenchRecord {
                method: method.name().to_string(),
                n_criteria: cell.n,
                repetitions: cell.samples.len(),
                median_seconds: median(&cell.samples),
                all_samples: cell.samples,
            });
        }
        if exhausted {
            break;
        }
    }

    let mut fits = Vec::new();
    for &method in &options.methods {
        let slice: Vec<BenchRecord> = records
            .iter()
            .filter(|r| r.method == method.name())
            .cloned()
            .collect();
        if let Ok((slope, r_squared)) = fit_scaling(&slice) {
            fits.push(MethodFit {
                method: method.name().to_string(),
                slope,
                r_squared,
            });
        }
    }

    // Harness overhead: empty-body measurement against the smallest real
    // per-call time at the largest measured size.
    let max_n = records.iter().map(|r| r.n_criteria).max().unwrap_or(0);
    let smallest_at_max = records
        .iter()
        .filter(|r| r.n_criteria == max_n)
        .map(|r| r.median_seconds)
        .fold(f64::INFINITY, f64::min);
    let mut empty_call = || black_box(());
    let empty_batch = calibrate_batch(&mut empty_call);
    let empty_samples: Vec<f64> = (0..3)
        .map(|_| one_sample(&mut empty_call, empty_batch))
        .collect();
    let empty = median(&empty_samples);
    let overhead_ratio = if smallest_at_max.is_finite() {
        empty / smallest_at_max
    } else {
        f64::INFINITY
    };
    Ok(ScalingReport {
        reliable: !records.is_empty() && overhead_ratio < 0.01,
        records,
        fits,
        overhead_ratio,
    })
}

/// Ordinary least squares on `(ln n, ln median_seconds)`.
///
/// Returns the slope (empirical complexity exponent) and the coefficient of
/// determination.
pub fn fit_scaling(records: &[BenchRecord]) -> Result<(f64, f64), BenchError> {
    let mut points: Vec<(usize, f64)> = records
        .iter()
        .map(|r| (r.n_criteria, r.median_seconds))
        .collect();
    points.sort_by_key(|p| p.0);
    points.dedup_by_key(|p| p.0);
    if points.len() < 5 {
        return Err(BenchError::InsufficientPoints {
            got: points.len(),
            need: 5,
        });
    }
    let min_n = points.first().unwrap().0 as f64;
    let max_n = points.last().unwrap().0 as f64;
    if max_n / min_n < 10.0 {
        return Err(BenchError::InsufficientPoints {
            got: points.len(),
            need: 5,
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / k;
    let mean_y = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok((slope, r_squared))
}

/// Serialize records as CSV (`samples` holds the per-repetition values
/// joined with `;`).
pub fn write_bench_csv(records: &[BenchRecord]) -> String {
    let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
    wtr.write_record(["method", "n_criteria", "repetitions", "median_seconds", "samples"])
        .expect("csv");
    for r in records {
        let samples: Vec<String> = r.all_samples.iter().map(|s| fmt_f64(*s)).collect();
        wtr.write_record([
            r.method.as_str(),
            &r.n_criteria.to_string(),
            &r.repetitions.to_string(),
            &fmt_f64(r.median_seconds),
            &samples.join(";"),
        ])
        .expect("csv");
    }
    String::from_utf8(wtr.into_inner().expect("csv flush")).expect("utf8")
}

/// Parse records written by [`write_bench_csv`].
pub fn read_bench_csv(text: &str) -> Result<Vec<BenchRecord>, BenchError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| BenchError::MalformedCsv {
            detail: e.to_string(),
        })?;
        if record.len() != 5 {
            return Err(BenchError::MalformedCsv {
                detail: format!("expected 5 columns, got {}", record.len()),
            });
        }
        let parse_f = |s: &str| -> Result<f64, BenchError> {
            s.parse().map_err(|_| BenchError::MalformedCsv {
                detail: format!("bad float {s:?}"),
            })
        };
        let parse_u = |s: &str| -> Result<usize, BenchError> {
            s.parse().map_err(|_| BenchError::MalformedCsv {
                detail: format!("bad integer {s:?}"),
            })
        };
        let all_samples = if record[4].is_empty() {
            Vec::new()
        } else {
            record[4]
                .split(';')
                .map(parse_f)
                .collect::<Result<Vec<_>, _>>()?
        };
        out.push(BenchRecord {
            method: record[0].to_string(),
            n_criteria: parse_u(&record[1])?,
            repetitions: parse_u(&record[2])?,
            median_seconds: parse_f(&record[3])?,
            all_samples,
        });
    }
    Ok(out)
}
