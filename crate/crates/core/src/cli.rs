//! Command-line driver.
//!
//! Exit codes: 0 success, 2 usage error, 3 data or validation error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{load_channel, Extrapolation, PauliChannel, DEFAULT_MAX_CLIPPED, REGISTER_QUBITS};
use crate::code::{self, CodeError, StabilizerCode, NAMED_CODES};
use crate::decoder::{optimal_decoder, CosetMap};
use crate::ingest::{load_two_qubit_channel, IngestedChannel};
use crate::numeric::format_rate;
use crate::search::{run_search_multi, CandidatePool, SearchConfig, SearchResult};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

pub const DEFAULT_P: [f64; 2] = [0.001, 0.01];
pub const DEFAULT_ETA: [f64; 10] = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0];
pub const RATE_PRESET_P: [f64; 10] = [1e-4, 2e-4, 5e-4, 1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1];
pub const RATE_PRESET_ETA: [f64; 2] = [1.0, 100.0];

pub const SWEEP_HEADER: &str = "code,p,eta,logical_error_rate";
pub const INGEST_HEADER: &str = "code,tau_ms,extrapolation,logical_error_rate";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    /// Help or version output requested; not a failure.
    #[error("{0}")]
    Info(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Info(_) => 0,
        }
    }
}

fn data<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Data(e.to_string())
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(name = "tailored-qec", version, about = "Exact optimal-decoder evaluation and random search of small stabilizer codes")]
pub struct Cli {
    /// Log informational messages to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Logical error rate of one code under one channel.
    Eval(EvalArgs),
    /// Rates over a (code, p, eta) grid of biased channels, as CSV.
    Sweep(SweepArgs),
    /// Random search for low-weight distance-3 codes.
    Search(SearchArgs),
    /// Rates under 7-qubit channels extrapolated from two-qubit estimates, as CSV.
    Ingest(IngestArgs),
    /// Built-in codes.
    Codes {
        #[command(subcommand)]
        action: CodesAction,
    },
}

#[derive(Debug, Args)]
#[group(id = "noise", required = true, multiple = true)]
pub struct ChannelArgs {
    /// Total single-qubit error probability.
    #[arg(long, group = "noise", requires = "eta")]
    pub p: Option<f64>,
    /// Bias p_z / (p_x + p_y).
    #[arg(long, group = "noise", requires = "p")]
    pub eta: Option<f64>,
    /// Pauli-probability file on the code's qubits.
    #[arg(long, group = "noise", conflicts_with_all = ["p", "eta"])]
    pub channel: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Built-in label or code file.
    #[arg(long)]
    pub code: String,
    #[command(flatten)]
    pub noise: ChannelArgs,
    /// Write the decoder table (syndrome, recovery, class probabilities) as JSON.
    #[arg(long)]
    pub export_table: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// p in {0.001, 0.01}, eta in {1, 2, 5, ..., 1000}.
    Bias,
    /// p in {1e-4, 2e-4, 5e-4, ..., 0.1}, eta in {1, 100}.
    Rate,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated labels or code files.
    #[arg(long, value_delimiter = ',', default_value = "steane,cyclic7")]
    pub codes: Vec<String>,
    /// Default grid when --p or --eta is omitted.
    #[arg(long, value_enum, default_value = "bias")]
    pub preset: Preset,
    /// Comma-separated p values (overrides the preset).
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
    /// Comma-separated eta values (overrides the preset).
    #[arg(long, value_delimiter = ',')]
    pub eta: Vec<f64>,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Number of sampled codes.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated p values; each (p, eta) pair ranks the pool.
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub eta: Vec<f64>,
    #[arg(long, default_value_t = 7)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub max_weight: usize,
    #[arg(long, default_value_t = 3)]
    pub min_distance: usize,
    /// Drop codes whose stabilizer group was already drawn.
    #[arg(long)]
    pub dedup: bool,
    /// Allow generators of weight 1 and 2.
    #[arg(long)]
    pub include_low_weight: bool,
    /// Draw a fresh pool per channel instead of re-ranking one pool.
    #[arg(long)]
    pub redraw: bool,
    /// Number of ranked codes to print per channel.
    #[arg(long, default_value_t = 1)]
    pub top: usize,
    /// Result JSON; with several channels one file per channel is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExtrapolationChoice {
    Convex,
    ConvexProduct,
    Product,
    All,
}

impl ExtrapolationChoice {
    fn models(self) -> Vec<Extrapolation> {
        match self {
            ExtrapolationChoice::Convex => vec![Extrapolation::Convex],
            ExtrapolationChoice::ConvexProduct => vec![Extrapolation::ConvexProduct],
            ExtrapolationChoice::Product => vec![Extrapolation::Product],
            ExtrapolationChoice::All => Extrapolation::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Two-qubit PTM or Pauli-probability files.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "all")]
    pub extrapolation: ExtrapolationChoice,
    /// Comma-separated 7-qubit labels or code files.
    #[arg(long, value_delimiter = ',', default_value = "steane,cyclic7")]
    pub codes: Vec<String>,
    /// Skip files that fail validation instead of aborting.
    #[arg(long)]
    pub skip_bad: bool,
    /// Largest negative twirl mass clipped before a file is rejected.
    #[arg(long, default_value_t = DEFAULT_MAX_CLIPPED)]
    pub max_clipped: f64,
    /// Also report the best of this many random codes (row label "random-best").
    #[arg(long)]
    pub random_samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CodesAction {
    /// Names of the built-in codes.
    List,
    /// Generators, logicals, distance and fingerprint of a code.
    Show { label: String },
}

/// Parses `args` (including the program name) and runs the command, writing
/// the primary output to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;
    execute(cli.command, out)
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    let text = match command {
        Command::Eval(args) => cmd_eval(&args)?,
        Command::Sweep(args) => cmd_sweep(&args)?,
        Command::Search(args) => cmd_search(&args)?,
        Command::Ingest(args) => cmd_ingest(&args)?,
        Command::Codes { action } => cmd_codes(&action)?,
    };
    out.write_all(text.as_bytes()).map_err(data)
}

fn resolve_code(label: &str) -> Result<StabilizerCode, CliError> {
    match code::resolve(label) {
        Ok(c) => Ok(c),
        Err(e @ CodeError::UnknownLabel(_)) => Err(CliError::Usage(e.to_string())),
        Err(e) => Err(data(e)),
    }
}

fn check_grid(ps: &[f64], etas: &[f64]) -> Result<(), CliError> {
    if ps.is_empty() || etas.is_empty() {
        return Err(CliError::Usage("p and eta grids must be non-empty".into()));
    }
    if let Some(p) = ps.iter().find(|p| !(0.0..1.0).contains(*p)) {
        return Err(CliError::Usage(format!("p = {p} outside [0, 1)")));
    }
    if let Some(eta) = etas.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(CliError::Usage(format!("eta = {eta} must be positive and finite")));
    }
    Ok(())
}

fn write_output(path: Option<&Path>, text: String) -> Result<String, CliError> {
    match path {
        Some(path) => {
            fs::write(path, text).map_err(|e| io_error(path, e))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn cmd_eval(args: &EvalArgs) -> Result<String, CliError> {
    let code = resolve_code(&args.code)?;
    let channel = match (&args.noise.channel, args.noise.p, args.noise.eta) {
        (Some(path), _, _) => load_channel(path).map_err(data)?.0,
        (None, Some(p), Some(eta)) => {
            check_grid(&[p], &[eta])?;
            PauliChannel::biased(code.n(), p, eta).map_err(data)?
        }
        _ => return Err(CliError::Usage("give --p and --eta, or --channel".into())),
    };
    if channel.n() != code.n() {
        return Err(CliError::Data(format!(
            "channel acts on {} qubits, code {} on {}",
            channel.n(),
            code.name(),
            code.n()
        )));
    }
    let rate = if let Some(path) = &args.export_table {
        let table = optimal_decoder(&code, &channel).map_err(data)?;
        let json = serde_json::to_string_pretty(&table.records(&code)).map_err(data)?;
        fs::write(path, json + "\n").map_err(|e| io_error(path, e))?;
        table.logical_error_rate()
    } else {
        CosetMap::new(&code).and_then(|m| m.logical_error_rate(&channel)).map_err(data)?
    };
    Ok(format!("{}\n", format_rate(rate)))
}

fn sweep_rows(codes: &[StabilizerCode], ps: &[f64], etas: &[f64]) -> Result<Vec<(String, f64, f64, f64)>, CliError> {
    let maps: Vec<CosetMap> = codes.iter().map(CosetMap::new).collect::<Result<_, _>>().map_err(data)?;
    let points: Vec<(usize, f64, f64)> = (0..codes.len())
        .flat_map(|c| ps.iter().flat_map(move |&p| etas.iter().map(move |&eta| (c, p, eta))))
        .collect();
    let mut rows: Vec<(String, f64, f64, f64)> = points
        .par_iter()
        .map(|&(c, p, eta)| {
            let ch = PauliChannel::biased(codes[c].n(), p, eta).map_err(data)?;
            let rate = maps[c].logical_error_rate(&ch).map_err(data)?;
            Ok((codes[c].name(), p, eta, rate))
        })
        .collect::<Result<_, CliError>>()?;
    rows.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));
    rows.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1 && a.2 == b.2);
    Ok(rows)
}

/// CSV for a sweep over biased channels, rows ordered by (code, p, eta).
pub fn sweep_csv(codes: &[StabilizerCode], ps: &[f64], etas: &[f64]) -> Result<String, CliError> {
    check_grid(ps, etas)?;
    let mut csv = format!("{SWEEP_HEADER}\n");
    for (name, p, eta, rate) in sweep_rows(codes, ps, etas)? {
        writeln!(csv, "{},{p},{eta},{}", csv_field(&name), format_rate(rate)).unwrap();
    }
    Ok(csv)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<String, CliError> {
    let codes: Vec<StabilizerCode> = args.codes.iter().map(|c| resolve_code(c)).collect::<Result<_, _>>()?;
    let (default_p, default_eta): (&[f64], &[f64]) = match args.preset {
        Preset::Bias => (&DEFAULT_P, &DEFAULT_ETA),
        Preset::Rate => (&RATE_PRESET_P, &RATE_PRESET_ETA),
    };
    let ps = if args.p.is_empty() { default_p.to_vec() } else { args.p.clone() };
    let etas = if args.eta.is_empty() { default_eta.to_vec() } else { args.eta.clone() };
    let csv = sweep_csv(&codes, &ps, &etas)?;
    write_output(args.out.as_deref(), csv)
}

fn search_config(args: &SearchArgs) -> SearchConfig {
    SearchConfig {
        n: args.n,
        num_samples: args.samples as usize,
        max_generator_weight: args.max_weight,
        min_distance: args.min_distance,
        seed: args.seed,
        dedup: args.dedup,
        include_low_weight: args.include_low_weight,
        ..SearchConfig::default()
    }
}

fn result_path(base: &Path, p: f64, eta: f64) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("search");
    base.with_file_name(format!("{stem}_p{p}_eta{eta}.json"))
}

fn cmd_search(args: &SearchArgs) -> Result<String, CliError> {
    check_grid(&args.p, &args.eta)?;
    let config = search_config(args);
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let grid: Vec<(f64, f64)> = args.p.iter().flat_map(|&p| args.eta.iter().map(move |&eta| (p, eta))).collect();
    let channels: Vec<PauliChannel> = grid
        .iter()
        .map(|&(p, eta)| PauliChannel::biased(config.n, p, eta))
        .collect::<Result<_, _>>()
        .map_err(data)?;
    let results = run_search_multi(&config, &channels, args.redraw).map_err(data)?;

    let mut text = String::new();
    writeln!(text, "samples: {}", config.num_samples).unwrap();
    writeln!(text, "seed: {}", config.seed).unwrap();
    writeln!(
        text,
        "sampler: n={} k=1 max_weight={} min_distance={} support={}..={} letters=uniform(X,Y,Z) pool={}",
        config.n,
        config.max_generator_weight,
        config.min_distance,
        config.min_support(),
        config.max_generator_weight,
        if args.redraw { "redrawn per channel" } else { "shared" }
    )
    .unwrap();
    for (&(p, eta), result) in grid.iter().zip(&results) {
        write_search_summary(&mut text, p, eta, result, args.top);
        if let Some(base) = &args.out {
            let path = if grid.len() == 1 { base.clone() } else { result_path(base, p, eta) };
            let json = serde_json::to_string_pretty(&result.records()).map_err(data)?;
            fs::write(&path, json + "\n").map_err(|e| io_error(&path, e))?;
        }
    }
    Ok(text)
}

fn write_search_summary(text: &mut String, p: f64, eta: f64, result: &SearchResult, top: usize) {
    let r = &result.rejections;
    writeln!(text, "channel: p={p} eta={eta}").unwrap();
    writeln!(text, "retained: {}", result.ranked.len()).unwrap();
    writeln!(
        text,
        "rejections: non_commuting={} dependent={} dead_ends={} distance_too_small={} duplicates={}",
        r.non_commuting, r.dependent, r.dead_ends, r.distance_too_small, r.duplicates
    )
    .unwrap();
    for entry in result.ranked.iter().take(top) {
        let gens: Vec<String> = entry.code.generators().iter().map(|g| g.to_string()).collect();
        writeln!(
            text,
            "rank {}: rate={} fingerprint={} candidate={} generators={}",
            entry.rank,
            format_rate(entry.logical_error_rate),
            entry.fingerprint,
            entry.candidate,
            gens.join(",")
        )
        .unwrap();
    }
}

fn load_ingest_files(args: &IngestArgs) -> Result<Vec<IngestedChannel>, CliError> {
    let mut loaded = Vec::new();
    for path in &args.files {
        match load_two_qubit_channel(path, args.max_clipped) {
            Ok(ch) => {
                for w in &ch.warnings {
                    log::warn!("{}: {w}", path.display());
                }
                if let Some(report) = &ch.report {
                    if report.clipped_mass > 0.0 {
                        log::info!("{}: clipped {} of negative twirl mass", path.display(), report.clipped_mass);
                    }
                }
                loaded.push(ch);
            }
            Err(e) if args.skip_bad => log::warn!("skipping {}: {e}", path.display()),
            Err(e) => return Err(CliError::Data(format!("{}: {e}", path.display()))),
        }
    }
    if loaded.is_empty() {
        return Err(CliError::Data("no usable estimate files".into()));
    }
    loaded.sort_by(|a, b| a.tau_ms.total_cmp(&b.tau_ms).then_with(|| a.path.cmp(&b.path)));
    Ok(loaded)
}

fn cmd_ingest(args: &IngestArgs) -> Result<String, CliError> {
    let codes: Vec<StabilizerCode> = args.codes.iter().map(|c| resolve_code(c)).collect::<Result<_, _>>()?;
    if let Some(c) = codes.iter().find(|c| c.n() != REGISTER_QUBITS) {
        return Err(CliError::Usage(format!(
            "code {} has {} qubits; extrapolated channels act on {REGISTER_QUBITS}",
            c.name(),
            c.n()
        )));
    }
    if !(0.0..=1.0).contains(&args.max_clipped) {
        return Err(CliError::Usage(format!("--max-clipped {} outside [0, 1]", args.max_clipped)));
    }
    let files = load_ingest_files(args)?;
    let models = args.extrapolation.models();
    let maps: Vec<CosetMap> = codes.iter().map(CosetMap::new).collect::<Result<_, _>>().map_err(data)?;
    let pool = match args.random_samples {
        Some(0) => return Err(CliError::Usage("--random-samples must be at least 1".into())),
        Some(n) => Some(
            CandidatePool::draw(&SearchConfig {
                num_samples: n,
                seed: args.seed,
                ..SearchConfig::default()
            })
            .map_err(data)?,
        ),
        None => None,
    };

    let mut csv = format!("{INGEST_HEADER}\n");
    for file in &files {
        for &model in &models {
            let ch = model.apply(&file.channel, REGISTER_QUBITS).map_err(data)?;
            let rates: Vec<f64> = maps
                .par_iter()
                .map(|m| m.logical_error_rate(&ch))
                .collect::<Result<_, _>>()
                .map_err(data)?;
            for (code, rate) in codes.iter().zip(rates) {
                writeln!(csv, "{},{},{},{}", csv_field(&code.name()), file.tau_ms, model.name(), format_rate(rate)).unwrap();
            }
            if let Some(pool) = &pool {
                let result = pool.rank(&ch).map_err(data)?;
                if let Some(best) = result.best() {
                    writeln!(csv, "random-best,{},{},{}", file.tau_ms, model.name(), format_rate(best.logical_error_rate)).unwrap();
                }
            }
        }
    }
    write_output(args.out.as_deref(), csv)
}

fn cmd_codes(action: &CodesAction) -> Result<String, CliError> {
    match action {
        CodesAction::List => Ok(NAMED_CODES.iter().map(|c| format!("{c}\n")).collect()),
        CodesAction::Show { label } => {
            let code = resolve_code(label)?;
            let mut text = String::new();
            writeln!(text, "code: {}", code.name()).unwrap();
            writeln!(text, "n: {}", code.n()).unwrap();
            writeln!(text, "k: {}", code.k()).unwrap();
            for (i, g) in code.generators().iter().enumerate() {
                writeln!(text, "generator {i}: {g}").unwrap();
            }
            for (i, (lx, lz)) in code.logicals().iter().enumerate() {
                writeln!(text, "logical X{i}: {lx}").unwrap();
                writeln!(text, "logical Z{i}: {lz}").unwrap();
            }
            writeln!(text, "max generator weight: {}", code.max_generator_weight()).unwrap();
            writeln!(text, "distance: {}", code.distance().map_err(data)?).unwrap();
            writeln!(text, "fingerprint: {}", code.fingerprint()).unwrap();
            Ok(text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> Result<String, CliError> {
        let mut out = Vec::new();
        run(std::iter::once("tailored-qec").chain(args.iter().copied()), &mut out)?;
        Ok(String::from_utf8(out).unwrap())
    }

    #[test]
    fn eval_prints_a_round_trip_rate() {
        let out = run_str(&["eval", "--code", "steane", "--p", "0", "--eta", "1"]).unwrap();
        assert_eq!(out.trim().parse::<f64>().unwrap(), 0.0);
        let c = run_str(&["eval", "--code", "cyclic7", "--p", "0.01", "--eta", "1"]).unwrap();
        let s = run_str(&["eval", "--code", "steane", "--p", "0.01", "--eta", "1"]).unwrap();
        assert!(c.trim().parse::<f64>().unwrap() < s.trim().parse::<f64>().unwrap());
    }

    #[test]
    fn usage_errors() {
        let err = run_str(&["eval", "--code", "nosuch", "--p", "0.01", "--eta", "1"]).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_USAGE);
        assert!(err.to_string().contains("nosuch"));
        assert_eq!(run_str(&["search", "--samples", "0", "--p", "0.01", "--eta", "100"]).unwrap_err().exit_code(), EXIT_USAGE);
        assert_eq!(run_str(&["eval", "--code", "steane", "--p", "0.01"]).unwrap_err().exit_code(), EXIT_USAGE);
        assert_eq!(run_str(&["eval", "--code", "steane", "--p", "1.5", "--eta", "1"]).unwrap_err().exit_code(), EXIT_USAGE);
        assert_eq!(run_str(&["sweep", "--eta", "0"]).unwrap_err().exit_code(), EXIT_USAGE);
        assert_eq!(run_str(&["frobnicate"]).unwrap_err().exit_code(), EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).unwrap_err().exit_code(), 0);
    }

    #[test]
    fn sweep_has_one_row_per_grid_point_in_order() {
        let csv = run_str(&["sweep"]).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(lines.len(), 41);
        assert!(lines[1].starts_with("cyclic7,0.001,1,"));
        assert!(lines[40].starts_with("steane,0.01,1000,"));
        let rate = run_str(&["sweep", "--preset", "rate"]).unwrap();
        assert_eq!(rate.lines().count(), 1 + 2 * 10 * 2);
    }

    #[test]
    fn codes_show_and_list() {
        let out = run_str(&["codes", "show", "cyclic7"]).unwrap();
        assert!(out.contains("generator 0: XZIZXII"));
        assert!(out.contains("distance: 3"));
        assert_eq!(run_str(&["codes", "list"]).unwrap().lines().count(), 4);
        assert_eq!(run_str(&["codes", "show", "nope"]).unwrap_err().exit_code(), EXIT_USAGE);
    }

    #[test]
    fn csv_fields_are_quoted_when_needed() {
        assert_eq!(csv_field("steane"), "steane");
        assert_eq!(csv_field("XX,ZZ"), "\"XX,ZZ\"");
    }
}
