use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rankci::inference::{CiMode, ZStyle};
use rankci::simulation::Scenario;
use rankci::{Criterion, Orientation, ZeroOverlapPolicy};
use rankci_cli::{
    cmd_ci, cmd_rank, cmd_simulate, cmd_sse_builtin, cmd_sse_external, coverage_csv,
    load_scenario_file, parse_input, parse_m_values, per_entity_csv, truth_table_csv, CliError,
    ResultsDocument,
};

/// Deterministic rankings with rank confidence intervals.
#[derive(Parser)]
#[command(name = "rankci", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Point ranks under the dominance criteria (plus Borda/Copeland on
    /// complete data).
    Rank(RankArgs),
    /// Rank confidence intervals (simultaneous or individual).
    Ci(CiArgs),
    /// Coverage experiments on generated scenarios.
    Simulate(SimulateArgs),
    /// Sum of squared errors between method ranks and each ballot.
    Sse(SseArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Input CSV: entity label column then one column per ranker; empty or
    /// NA cells are missing.
    #[arg(long)]
    input: PathBuf,
    /// Whether smaller ballot values mean better (rank lists) or worse.
    #[arg(long, value_enum, default_value_t = OrientationArg::LowerBetter)]
    orientation: OrientationArg,
    /// Skip entity pairs that share no ranker instead of failing. Changes
    /// the score scale for the affected entities; excluded pairs are listed
    /// on stderr.
    #[arg(long)]
    allow_missing_pairs: bool,
}

impl InputArgs {
    fn policy(&self) -> ZeroOverlapPolicy {
        if self.allow_missing_pairs {
            ZeroOverlapPolicy::ExcludePairs
        } else {
            ZeroOverlapPolicy::Error
        }
    }
}

#[derive(Args)]
struct RankArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct CiArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = CriterionArg::Cpdp)]
    criterion: CriterionArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Simultaneous)]
    mode: ModeArg,
    /// Overall confidence level.
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Quantile convention inside the individual-interval search.
    #[arg(long, value_enum, default_value_t = QuantileArg::Code)]
    individual_quantile: QuantileArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct SimulateArgs {
    /// Built-in scenario (1..=4).
    #[arg(long, conflicts_with = "scenario")]
    case: Option<u8>,
    /// JSON scenario file (means, variances, optional m/seed/missingness).
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Ranker count, or a sweep start:end:step (one CSV row per value).
    /// Defaults to the scenario's own ranker count (30 for the built-in
    /// cases).
    #[arg(long)]
    m: Option<String>,
    #[arg(long, default_value_t = 1000)]
    reps: u64,
    #[arg(long, default_value_t = 1729)]
    seed: u64,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Simultaneous)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = CriterionArg::Cpdp)]
    criterion: CriterionArg,
    /// Print the scenario's exact truth table instead of running replications.
    #[arg(long)]
    show_truth: bool,
    /// Where to write the per-entity coverage breakdown (individual mode).
    #[arg(long)]
    per_entity: Option<PathBuf>,
}

#[derive(Args)]
struct SseArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Built-in method whose ranks are scored.
    #[arg(long, value_enum, default_value_t = CriterionArg::Cpdp)]
    method: CriterionArg,
    /// CSV of externally supplied display ranks (entity,rank); overrides
    /// --method.
    #[arg(long)]
    ranks_file: Option<PathBuf>,
    /// Label for the external ranks in the report.
    #[arg(long, default_value = "external")]
    method_name: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    /// 1 = best (ballot rank lists).
    LowerBetter,
    /// larger values = better.
    HigherBetter,
}

impl From<OrientationArg> for Orientation {
    fn from(arg: OrientationArg) -> Self {
        match arg {
            OrientationArg::LowerBetter => Orientation::LowerIsBetter,
            OrientationArg::HigherBetter => Orientation::HigherIsBetter,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    Cpdp,
    Ctpdp,
}

impl From<CriterionArg> for Criterion {
    fn from(arg: CriterionArg) -> Self {
        match arg {
            CriterionArg::Cpdp => Criterion::Cpdp,
            CriterionArg::Ctpdp => Criterion::Ctpdp,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Simultaneous,
    Individual,
}

impl From<ModeArg> for CiMode {
    fn from(arg: ModeArg) -> Self {
        match arg {
            ModeArg::Simultaneous => CiMode::Simultaneous,
            ModeArg::Individual => CiMode::Individual,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum QuantileArg {
    /// One-sided-style z = Φ⁻¹(level), the reference convention.
    Code,
    /// Strict two-sided z = Φ⁻¹((1 + level) / 2).
    TwoSided,
}

impl From<QuantileArg> for ZStyle {
    fn from(arg: QuantileArg) -> Self {
        match arg {
            QuantileArg::Code => ZStyle::OneSided,
            QuantileArg::TwoSided => ZStyle::TwoSided,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    StructuredText,
}

fn emit(doc: &ResultsDocument, format: FormatArg) {
    match format {
        FormatArg::Csv => print!("{}", doc.to_csv()),
        FormatArg::StructuredText => print!("{}", doc.to_structured_text()),
    }
}

fn warn_excluded(matrix: &rankci::RankMatrix, policy: ZeroOverlapPolicy) {
    if policy == ZeroOverlapPolicy::ExcludePairs {
        if let Ok(analysis) = rankci::Analysis::with_policy(matrix, policy) {
            let excluded = analysis.dominance().excluded_pairs();
            if !excluded.is_empty() {
                eprintln!(
                    "warning: {} entity pair(s) share no ranker and were excluded",
                    excluded.len() / 2
                );
            }
        }
    }
}

fn run() -> Result<(), CliError> {
    match Cli::parse().command {
        Command::Rank(args) => {
            let matrix = parse_input(&args.input.input, args.input.orientation.into())?;
            warn_excluded(&matrix, args.input.policy());
            let doc = cmd_rank(&matrix, args.input.policy())?;
            emit(&doc, args.format);
        }
        Command::Ci(args) => {
            let matrix = parse_input(&args.input.input, args.input.orientation.into())?;
            warn_excluded(&matrix, args.input.policy());
            let doc = cmd_ci(
                &matrix,
                args.criterion.into(),
                args.mode.into(),
                args.level,
                args.individual_quantile.into(),
                args.input.policy(),
            )?;
            emit(&doc, args.format);
        }
        Command::Simulate(args) => {
            let base: Scenario = match (&args.scenario, args.case) {
                (Some(path), _) => load_scenario_file(path, 30, args.seed)?,
                (None, Some(case)) => Scenario::case(case, 30, args.seed)?,
                (None, None) => {
                    return Err(CliError::Args(
                        "pass either --case 1..=4 or --scenario file.json".into(),
                    ))
                }
            };
            if args.show_truth {
                print!("{}", truth_table_csv(&base)?);
                return Ok(());
            }
            let m_values = match &args.m {
                Some(spec) => parse_m_values(spec)?,
                None => vec![base.m],
            };
            let reports = cmd_simulate(
                &base,
                &m_values,
                args.reps,
                args.level,
                args.mode.into(),
                args.criterion.into(),
            )?;
            print!("{}", coverage_csv(&reports));
            if let Some(path) = args.per_entity {
                std::fs::write(&path, per_entity_csv(&reports)).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
            }
        }
        Command::Sse(args) => {
            let matrix = parse_input(&args.input.input, args.input.orientation.into())?;
            let report = match &args.ranks_file {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                        path: path.display().to_string(),
                        source,
                    })?;
                    cmd_sse_external(&matrix, &args.method_name, &text)?
                }
                None => cmd_sse_builtin(&matrix, args.method.into(), args.input.policy())?,
            };
            print!("{}", report.to_csv());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error[{}]: {err}", err.code());
            ExitCode::FAILURE
        }
    }
}
