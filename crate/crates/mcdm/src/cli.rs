//! Command-line front end: method dispatch, CSV ingestion, result
//! serialization and plot-data emission.
//!
//! Exit codes: 0 on success, 2 on usage errors (bad flags, unknown
//! methods), 1 on data or validation errors. All output is deterministic:
//! identical inputs produce byte-identical outputs.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{
    run_scaling, write_bench_csv, BenchMethod, ScalingOptions,
};
use crate::core::{DecisionMatrix, Direction, WeightVector};
use crate::io::{
    read_ahp_csv, read_bwm_csv, read_decision_matrix_csv, read_sbwm_csv, read_smcdm_csv,
    write_result, CsvBlockFile, OutputFormat, ResultPayload,
};
use crate::pairwise::{
    apply_ahp_with, apply_anp, consistency_report_with, emit_decision_tree, RiTable,
};
use crate::ranking::{registry, registry_lookup, MethodParams};
use crate::stratified::{apply_sbwm, apply_smcdm, emit_state_tree, StratifiedMode};
use crate::weighting::{apply_bwm, apply_critic, apply_entropy};

/// Environment variable overriding the Saaty random index table
/// (comma-separated RI values for n = 1, 2, 3, ...).
pub const RI_TABLE_ENV: &str = "MCDM_RI_TABLE";

#[derive(Debug)]
enum CliError {
    /// Wrong invocation: exit code 2.
    Usage(String),
    /// Bad data or failed validation: exit code 1.
    Data(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) => m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mcdm",
    version,
    about = "Multi-criteria decision analysis over CSV inputs",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format for the primary result.
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Write the primary result to a file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank alternatives of a decision matrix with a classical method.
    Rank {
        /// Method name (see `list-methods`).
        #[arg(long)]
        method: String,
        /// Decision-matrix CSV (rows = alternatives, columns = criteria).
        #[arg(long)]
        input: PathBuf,
        /// Per-criterion directions: `benefit,cost,...` or `all-benefit`.
        #[arg(long)]
        directions: Option<String>,
        /// Explicit comma-separated criteria weights.
        #[arg(long, conflicts_with = "weights_method")]
        weights: Option<String>,
        /// Derive weights: `entropy`, `critic`, or `bwm:<file>`.
        #[arg(long)]
        weights_method: Option<String>,
        /// VIKOR compromise coefficient.
        #[arg(long, default_value_t = 0.5)]
        vikor_v: f64,
        /// Write the score radar JSON to this path.
        #[arg(long)]
        radar: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Derive criteria weights from data or BWM judgments.
    Weights {
        /// `entropy`, `critic` or `bwm`.
        #[arg(long)]
        method: String,
        /// Decision-matrix CSV, or a BWM judgment CSV for `--method bwm`.
        #[arg(long)]
        input: PathBuf,
        /// Per-criterion directions (CRITIC only).
        #[arg(long)]
        directions: Option<String>,
        /// Write the weight radar JSON to this path.
        #[arg(long)]
        radar: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run AHP on a pairwise-comparison CSV.
    Ahp {
        /// AHP CSV: criteria block followed by one block per criterion.
        #[arg(long)]
        input: PathBuf,
        /// Write the goal/criteria/alternatives tree as DOT to this path.
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Write the criteria-weight radar JSON to this path.
        #[arg(long)]
        radar: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Raise the ANP supermatrix of an AHP problem to a power.
    Anp {
        #[arg(long)]
        input: PathBuf,
        /// Supermatrix exponent.
        #[arg(long, default_value_t = 3)]
        power: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Stratified MCDM over a comparison/state-criteria/likelihood CSV.
    Smcdm {
        #[arg(long)]
        input: PathBuf,
        /// Treat the likelihood block as baseline+event weights of
        /// independent events instead of per-state probabilities.
        #[arg(long)]
        independent: bool,
        /// Write the baseline-to-states tree as DOT to this path.
        #[arg(long)]
        tree: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Stratified Best-Worst Method over a six-block CSV.
    Sbwm {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Measure runtime scaling of the core methods and fit log-log slopes.
    Bench {
        /// Comma-separated subset of bwm,smcdm,sbwm,ahp.
        #[arg(long, default_value = "bwm,smcdm,sbwm,ahp")]
        methods: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Wall-clock budget for the whole study.
        #[arg(long, default_value_t = 600)]
        budget_seconds: u64,
        /// Timed repetitions per cell (a warm-up run is discarded).
        #[arg(long, default_value_t = 9)]
        repetitions: usize,
        /// Comma-separated criterion counts to measure (default 4..256
        /// geometric).
        #[arg(long)]
        sizes: Option<String>,
        /// Print fitted slopes to standard error.
        #[arg(long)]
        print_fit: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// List the registered ranking methods.
    ListMethods,
}

/// Run the CLI against explicit arguments and streams; returns the exit code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    2
                }
            };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(
    command: Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    match command {
        Command::Rank {
            method,
            input,
            directions,
            weights,
            weights_method,
            vikor_v,
            radar,
            out,
        } => cmd_rank(
            &method,
            &input,
            directions.as_deref(),
            weights.as_deref(),
            weights_method.as_deref(),
            vikor_v,
            radar.as_deref(),
            &out,
            stdout,
            stderr,
        ),
        Command::Weights {
            method,
            input,
            directions,
            radar,
            out,
        } => cmd_weights(
            &method,
            &input,
            directions.as_deref(),
            radar.as_deref(),
            &out,
            stdout,
            stderr,
        ),
        Command::Ahp {
            input,
            tree,
            radar,
            out,
        } => cmd_ahp(&input, tree.as_deref(), radar.as_deref(), &out, stdout, stderr),
        Command::Anp { input, power, out } => cmd_anp(&input, power, &out, stdout),
        Command::Smcdm {
            input,
            independent,
            tree,
            out,
        } => cmd_smcdm(&input, independent, tree.as_deref(), &out, stdout, stderr),
        Command::Sbwm { input, out } => cmd_sbwm(&input, &out, stdout),
        Command::Bench {
            methods,
            seed,
            budget_seconds,
            repetitions,
            sizes,
            print_fit,
            out,
        } => cmd_bench(
            &methods,
            seed,
            budget_seconds,
            repetitions,
            sizes.as_deref(),
            print_fit,
            &out,
            stdout,
            stderr,
        ),
        Command::ListMethods => {
            let _ = writeln!(stdout, "name,needs_weights,needs_directions,score_direction");
            for d in registry() {
                let dir = match d.score_direction {
                    crate::core::ScoreDirection::HigherIsBetter => "higher_is_better",
                    crate::core::ScoreDirection::LowerIsBetter => "lower_is_better",
                };
                let _ = writeln!(
                    stdout,
                    "{},{},{},{}",
                    d.name, d.needs_weights, d.needs_directions, dir
                );
            }
            Ok(())
        }
    }
}

fn data_err(e: impl std::fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}

fn emit(out: &OutputArgs, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &out.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display()))),
        None => {
            stdout.write_all(text.as_bytes()).map_err(data_err)?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

fn parse_directions(
    spec: Option<&str>,
    n: usize,
    stderr: &mut dyn Write,
) -> Result<Vec<Direction>, CliError> {
    match spec {
        None => {
            let _ = writeln!(
                stderr,
                "note: no --directions given; treating all {n} criteria as benefit"
            );
            Ok(vec![Direction::Benefit; n])
        }
        Some(s) if s.eq_ignore_ascii_case("all-benefit") => Ok(vec![Direction::Benefit; n]),
        Some(s) => {
            let parsed: Result<Vec<Direction>, CliError> = s
                .split(',')
                .map(|tok| match tok.trim().to_ascii_lowercase().as_str() {
                    "benefit" | "max" => Ok(Direction::Benefit),
                    "cost" | "min" => Ok(Direction::Cost),
                    other => Err(CliError::Usage(format!(
                        "unknown direction {other:?}; use benefit or cost"
                    ))),
                })
                .collect();
            let parsed = parsed?;
            if parsed.len() != n {
                return Err(CliError::Data(format!(
                    "--directions lists {} entries but the matrix has {n} criteria",
                    parsed.len()
                )));
            }
            Ok(parsed)
        }
    }
}

fn load_decision_matrix(
    input: &Path,
    directions: Option<&str>,
    stderr: &mut dyn Write,
) -> Result<DecisionMatrix, CliError> {
    let file = CsvBlockFile::read(input).map_err(data_err)?;
    let (values, alternatives, criteria) = read_decision_matrix_csv(&file).map_err(data_err)?;
    let dirs = parse_directions(directions, values.cols(), stderr)?;
    DecisionMatrix::new(values, alternatives, criteria, dirs).map_err(data_err)
}

fn resolve_weights(
    matrix: &DecisionMatrix,
    explicit: Option<&str>,
    method: Option<&str>,
    stderr: &mut dyn Write,
) -> Result<WeightVector, CliError> {
    let n = matrix.criteria();
    if let Some(list) = explicit {
        let values: Result<Vec<f64>, CliError> = list
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("bad weight {tok:?}")))
            })
            .collect();
        let values = values?;
        if values.len() != n {
            return Err(CliError::Data(format!(
                "--weights lists {} entries but the matrix has {n} criteria",
                values.len()
            )));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            let _ = writeln!(stderr, "note: weights sum to {sum}; normalizing to 1");
        }
        return WeightVector::from_unnormalized(values, matrix.criterion_names().to_vec())
            .map_err(data_err);
    }
    match method {
        Some("uniform") => {
            WeightVector::uniform(n, matrix.criterion_names().to_vec()).map_err(data_err)
        }
        Some("entropy") => apply_entropy(matrix).map_err(data_err),
        Some("critic") => apply_critic(matrix).map_err(data_err),
        Some(spec) if spec.starts_with("bwm:") => {
            let path = PathBuf::from(&spec[4..]);
            let file = CsvBlockFile::read(&path).map_err(data_err)?;
            let problem = read_bwm_csv(&file).map_err(data_err)?;
            if problem.n() != n {
                return Err(CliError::Data(format!(
                    "BWM file defines {} criteria but the matrix has {n}",
                    problem.n()
                )));
            }
            let solution = apply_bwm(&problem).map_err(data_err)?;
            Ok(solution.weights)
        }
        Some(other) => Err(CliError::Usage(format!(
            "unknown --weights-method {other:?}; use uniform, entropy, critic or bwm:<file>"
        ))),
        None => {
            let _ = writeln!(
                stderr,
                "note: no weights given; using uniform weights over {n} criteria"
            );
            WeightVector::uniform(n, matrix.criterion_names().to_vec()).map_err(data_err)
        }
    }
}

/// Radar plot data: axes plus one or more value series, in original units.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct RadarDoc {
    pub axes: Vec<String>,
    pub series: Vec<RadarSeries>,
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct RadarSeries {
    pub name: String,
    pub values: Vec<f64>,
}

/// Build radar-plot JSON. A radar needs at least three axes; with fewer,
/// bar output is the right plot and this returns an error saying so.
pub fn emit_radar(axes: &[String], series_name: &str, values: &[f64]) -> Result<String, String> {
    if axes.len() < 3 {
        return Err(format!(
            "a radar plot needs at least 3 axes, got {}; use a bar chart instead",
            axes.len()
        ));
    }
    let doc = RadarDoc {
        axes: axes.to_vec(),
        series: vec![RadarSeries {
            name: series_name.to_string(),
            values: values.to_vec(),
        }],
    };
    Ok(serde_json::to_string_pretty(&doc).expect("serialize"))
}

fn write_radar(
    path: &Path,
    axes: &[String],
    series_name: &str,
    values: &[f64],
) -> Result<(), CliError> {
    let text = emit_radar(axes, series_name, values).map_err(CliError::Data)?;
    write_file(path, &text)
}

#[allow(clippy::too_many_arguments)]
fn cmd_rank(
    method: &str,
    input: &Path,
    directions: Option<&str>,
    weights: Option<&str>,
    weights_method: Option<&str>,
    vikor_v: f64,
    radar: Option<&Path>,
    out: &OutputArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let (kind, _descriptor) =
        registry_lookup(method).map_err(|e| CliError::Usage(e.to_string()))?;
    if !(0.0..=1.0).contains(&vikor_v) {
        return Err(CliError::Usage(format!(
            "--vikor-v must lie in [0, 1], got {vikor_v}"
        )));
    }
    let matrix = load_decision_matrix(input, directions, stderr)?;
    let weight_vector = resolve_weights(&matrix, weights, weights_method, stderr)?;
    let params = MethodParams {
        vikor_v,
        ..MethodParams::default()
    };
    let mut warnings = Vec::new();
    let result = kind
        .apply_with_warnings(&matrix, &weight_vector, &params, &mut warnings)
        .map_err(data_err)?;
    for w in &warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let names = matrix.alternative_names().to_vec();
    let text = write_result(
        &ResultPayload::Rank {
            names: &names,
            result: &result,
        },
        out.format.into(),
    );
    emit(out, &text, stdout)?;
    if let Some(path) = radar {
        write_radar(path, &names, &format!("{method} scores"), &result.scores)?;
    }
    Ok(())
}

fn cmd_weights(
    method: &str,
    input: &Path,
    directions: Option<&str>,
    radar: Option<&Path>,
    out: &OutputArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let weights = match method.to_ascii_lowercase().as_str() {
        "entropy" => {
            let matrix = load_decision_matrix(input, directions, stderr)?;
            apply_entropy(&matrix).map_err(data_err)?
        }
        "critic" => {
            let matrix = load_decision_matrix(input, directions, stderr)?;
            apply_critic(&matrix).map_err(data_err)?
        }
        "bwm" => {
            let file = CsvBlockFile::read(input).map_err(data_err)?;
            let problem = read_bwm_csv(&file).map_err(data_err)?;
            let solution = apply_bwm(&problem).map_err(data_err)?;
            let _ = writeln!(stderr, "bwm inconsistency xi = {}", solution.xi);
            solution.weights
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown weighting method {other:?}; use entropy, critic or bwm"
            )))
        }
    };
    let text = write_result(&ResultPayload::Weights(&weights), out.format.into());
    emit(out, &text, stdout)?;
    if let Some(path) = radar {
        write_radar(
            path,
            weights.criterion_names(),
            &format!("{method} weights"),
            weights.weights(),
        )?;
    }
    Ok(())
}

fn ri_table_from_env() -> Result<RiTable, CliError> {
    match std::env::var(RI_TABLE_ENV) {
        Ok(raw) => {
            let values: Result<Vec<f64>, CliError> = raw
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<f64>().map_err(|_| {
                        CliError::Usage(format!("{RI_TABLE_ENV}: bad entry {tok:?}"))
                    })
                })
                .collect();
            Ok(RiTable::new(values?))
        }
        Err(std::env::VarError::NotPresent) => Ok(RiTable::default()),
        Err(e) => Err(CliError::Usage(format!("{RI_TABLE_ENV}: {e}"))),
    }
}

#[derive(Serialize)]
struct AhpDoc {
    consistency_ratio: f64,
    consistency_acceptable: bool,
    per_criterion_consistency_ratios: Vec<f64>,
    criteria: Vec<String>,
    criteria_weights: Vec<f64>,
    alternatives: Vec<String>,
    unweighted_scores: Vec<Vec<f64>>,
    weighted_scores: Vec<Vec<f64>>,
    final_scores: Vec<f64>,
    ordering: Vec<usize>,
    ties: Vec<Vec<usize>>,
}

fn mat_rows(m: &crate::matrix::Mat) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn cmd_ahp(
    input: &Path,
    tree: Option<&Path>,
    radar: Option<&Path>,
    out: &OutputArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let file = CsvBlockFile::read(input).map_err(data_err)?;
    let (criteria, per_criterion) = read_ahp_csv(&file).map_err(data_err)?;
    let table = ri_table_from_env()?;
    let result = apply_ahp_with(&criteria, &per_criterion, &table).map_err(data_err)?;
    let report = consistency_report_with(&criteria, &per_criterion, &table).map_err(data_err)?;
    if result.consistency_ratio >= 0.1 {
        let _ = writeln!(
            stderr,
            "warning: criteria consistency ratio {} is at or above the 0.1 acceptability threshold",
            result.consistency_ratio
        );
    }
    let ranking = crate::core::rank_from_scores(
        &result.final_scores,
        crate::core::ScoreDirection::HigherIsBetter,
    )
    .map_err(data_err)?;

    let text = match out.format {
        FormatArg::Csv => {
            let _ = writeln!(stderr, "consistency_ratio,{}", result.consistency_ratio);
            write_result(
                &ResultPayload::Rank {
                    names: &result.alternative_labels,
                    result: &ranking,
                },
                OutputFormat::Csv,
            )
        }
        FormatArg::Json => {
            let doc = AhpDoc {
                consistency_ratio: result.consistency_ratio,
                consistency_acceptable: result.consistency_ratio < 0.1,
                per_criterion_consistency_ratios: report.per_criterion_crs,
                criteria: criteria.labels().to_vec(),
                criteria_weights: result.criteria_weights.weights().to_vec(),
                alternatives: result.alternative_labels.clone(),
                unweighted_scores: mat_rows(&result.unweighted_scores),
                weighted_scores: mat_rows(&result.weighted_scores),
                final_scores: result.final_scores.clone(),
                ordering: ranking.ordering.clone(),
                ties: ranking.ties.clone(),
            };
            serde_json::to_string_pretty(&doc).expect("serialize")
        }
    };
    emit(out, &text, stdout)?;

    if let Some(path) = tree {
        let dot = emit_decision_tree(&criteria, &per_criterion).map_err(data_err)?;
        write_file(path, &dot)?;
    }
    if let Some(path) = radar {
        write_radar(
            path,
            criteria.labels(),
            "criteria weights",
            result.criteria_weights.weights(),
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct AnpDoc {
    power: u32,
    labels: Vec<String>,
    supermatrix: Vec<Vec<f64>>,
}

fn cmd_anp(
    input: &Path,
    power: u32,
    out: &OutputArgs,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    if power == 0 {
        return Err(CliError::Usage("--power must be at least 1".to_string()));
    }
    let file = CsvBlockFile::read(input).map_err(data_err)?;
    let (criteria, per_criterion) = read_ahp_csv(&file).map_err(data_err)?;
    let matrix = apply_anp(&criteria, &per_criterion, power).map_err(data_err)?;

    let mut labels = vec!["goal".to_string()];
    labels.extend(criteria.labels().iter().cloned());
    labels.extend(per_criterion[0].labels().iter().cloned());

    let text = match out.format {
        FormatArg::Csv => {
            let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
            let mut header = vec![String::new()];
            header.extend(labels.iter().cloned());
            wtr.write_record(&header).expect("csv");
            for r in 0..matrix.rows() {
                let mut record = vec![labels[r].clone()];
                record.extend(matrix.row(r).iter().map(|v| crate::io::fmt_f64(*v)));
                wtr.write_record(&record).expect("csv");
            }
            String::from_utf8(wtr.into_inner().expect("csv flush")).expect("utf8")
        }
        FormatArg::Json => {
            let doc = AnpDoc {
                power,
                labels,
                supermatrix: mat_rows(&matrix),
            };
            serde_json::to_string_pretty(&doc).expect("serialize")
        }
    };
    emit(out, &text, stdout)
}

#[derive(Serialize)]
struct SmcdmDoc {
    alternatives: Vec<String>,
    scores: Vec<f64>,
    ordering: Vec<usize>,
    ties: Vec<Vec<usize>>,
    criteria: Vec<String>,
    aggregate_weights: Vec<f64>,
    states: Vec<String>,
    probabilities: Vec<f64>,
}

fn cmd_smcdm(
    input: &Path,
    independent: bool,
    tree: Option<&Path>,
    out: &OutputArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let file = CsvBlockFile::read(input).map_err(data_err)?;
    let model = read_smcdm_csv(&file).map_err(data_err)?;
    let mode = if independent {
        StratifiedMode::IndependentEvents
    } else {
        StratifiedMode::GivenProbabilities
    };
    let model = model.with_mode(mode).map_err(data_err)?;
    for w in model.warnings() {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let outcome = apply_smcdm(&model).map_err(data_err)?;

    let text = match out.format {
        FormatArg::Csv => write_result(
            &ResultPayload::Rank {
                names: model.alternative_names(),
                result: &outcome.ranking,
            },
            OutputFormat::Csv,
        ),
        FormatArg::Json => {
            let doc = SmcdmDoc {
                alternatives: model.alternative_names().to_vec(),
                scores: outcome.ranking.scores.clone(),
                ordering: outcome.ranking.ordering.clone(),
                ties: outcome.ranking.ties.clone(),
                criteria: model.criterion_names().to_vec(),
                aggregate_weights: outcome.aggregate_weights.weights().to_vec(),
                states: model.state_names().to_vec(),
                probabilities: outcome.probabilities.clone(),
            };
            serde_json::to_string_pretty(&doc).expect("serialize")
        }
    };
    emit(out, &text, stdout)?;

    if let Some(path) = tree {
        let dot = emit_state_tree(&model).map_err(data_err)?;
        write_file(path, &dot)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SbwmDoc {
    alternatives: Vec<String>,
    scores: Vec<f64>,
    ordering: Vec<usize>,
    ties: Vec<Vec<usize>>,
    criteria: Vec<String>,
    states: Vec<String>,
    per_state_weights: Vec<Vec<f64>>,
    per_state_xi: Vec<f64>,
    aggregate_weights: Vec<f64>,
    probabilities: Vec<f64>,
}

fn cmd_sbwm(input: &Path, out: &OutputArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let file = CsvBlockFile::read(input).map_err(data_err)?;
    let model = read_sbwm_csv(&file).map_err(data_err)?;
    let outcome = apply_sbwm(&model).map_err(data_err)?;
    let text = match out.format {
        FormatArg::Csv => write_result(
            &ResultPayload::Rank {
                names: model.alternative_names(),
                result: &outcome.ranking,
            },
            OutputFormat::Csv,
        ),
        FormatArg::Json => {
            let doc = SbwmDoc {
                alternatives: model.alternative_names().to_vec(),
                scores: outcome.ranking.scores.clone(),
                ordering: outcome.ranking.ordering.clone(),
                ties: outcome.ranking.ties.clone(),
                criteria: model.criterion_names().to_vec(),
                states: model.state_names().to_vec(),
                per_state_weights: mat_rows(&outcome.per_state_weights),
                per_state_xi: outcome.per_state_xi.clone(),
                aggregate_weights: outcome.aggregate_weights.weights().to_vec(),
                probabilities: outcome.probabilities.clone(),
            };
            serde_json::to_string_pretty(&doc).expect("serialize")
        }
    };
    emit(out, &text, stdout)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    methods: &str,
    seed: u64,
    budget_seconds: u64,
    repetitions: usize,
    sizes: Option<&str>,
    print_fit: bool,
    out: &OutputArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let parsed: Result<Vec<BenchMethod>, _> = methods
        .split(',')
        .map(|tok| BenchMethod::parse(tok.trim()))
        .collect();
    let parsed = parsed.map_err(|e| CliError::Usage(e.to_string()))?;
    if repetitions < 5 {
        return Err(CliError::Usage(
            "--repetitions must be at least 5".to_string(),
        ));
    }
    let mut options = ScalingOptions {
        methods: parsed,
        seed,
        repetitions,
        budget: Duration::from_secs(budget_seconds),
        ..ScalingOptions::default()
    };
    if let Some(list) = sizes {
        let parsed_sizes: Result<Vec<usize>, CliError> = list
            .split(',')
            .map(|tok| {
                let n: usize = tok
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad size {tok:?}")))?;
                if n < 2 {
                    return Err(CliError::Usage(format!(
                        "sizes must be at least 2 criteria, got {n}"
                    )));
                }
                Ok(n)
            })
            .collect();
        options.sizes = parsed_sizes?;
    }
    let report = run_scaling(&options).map_err(data_err)?;
    if !report.reliable {
        let _ = writeln!(
            stderr,
            "warning: harness overhead is {:.2}% of the smallest measurement; results unreliable",
            report.overhead_ratio * 100.0
        );
    }
    if print_fit {
        for fit in &report.fits {
            let _ = writeln!(
                stderr,
                "fit: method={} slope={:.3} r2={:.4}",
                fit.method, fit.slope, fit.r_squared
            );
        }
    }
    let text = write_bench_csv(&report.records);
    emit(out, &text, stdout)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_cli(
            std::iter::once("mcdm").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn list_methods_prints_seven_rows() {
        let (code, out, _) = run(&["list-methods"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 8);
        assert!(out.contains("topsis"));
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        let (code, _, err) = run(&["frobnicate"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
    }

    #[test]
    fn unknown_method_is_usage_error_listing_available() {
        let (code, _, err) = run(&["rank", "--method", "electre", "--input", "nope.csv"]);
        assert_eq!(code, 2);
        assert!(err.contains("electre"));
        assert!(err.contains("topsis"));
    }

    #[test]
    fn missing_input_is_data_error() {
        let (code, _, err) = run(&["rank", "--method", "topsis", "--input", "no-such-file.csv"]);
        assert_eq!(code, 1);
        assert!(err.contains("no-such-file.csv"));
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("mcdm"));
    }

    #[test]
    fn radar_requires_three_axes() {
        let axes = vec!["a".to_string(), "b".to_string()];
        assert!(emit_radar(&axes, "s", &[1.0, 2.0]).is_err());
        let axes = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let doc = emit_radar(&axes, "s", &[1.0, 2.0, 3.0]).unwrap();
        let parsed: RadarDoc = serde_json::from_str(&doc).unwrap();
        assert_eq!(parsed.axes.len(), 3);
        assert_eq!(parsed.series[0].values, vec![1.0, 2.0, 3.0]);
    }
}
