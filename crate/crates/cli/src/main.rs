use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod cmd;
mod error;
mod ranges;
mod run;

use error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(
    name = "lcslab",
    version,
    about = "LCS statistics of random strings: exact tables, Monte Carlo estimates, heuristic benchmarks"
)]
struct Cli {
    /// Worker threads; never changes numeric output.
    #[arg(long, global = true, env = "LCSLAB_WORKERS")]
    workers: Option<usize>,

    /// key=value file whose entries act as flags; explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact mean, variance and length distribution by full enumeration.
    Exact(ExactArgs),
    /// Monte Carlo estimates; appends to estimates.jsonl and rewrites estimates.csv.
    Simulate(SimulateArgs),
    /// Generate or analyse sequence dataset files.
    #[command(subcommand)]
    Dataset(DatasetCommand),
    /// Run the LCS heuristics on groups of sequences and report performance ratios.
    Bench(BenchArgs),
    /// Sweep symbol skew or alphabet size.
    #[command(subcommand)]
    Sweep(SweepCommand),
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct ExactArgs {
    /// Lengths: `a`, `a..b`, `a:b:step` or a comma list.
    #[arg(long)]
    pub n: String,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    /// Maximum number of evaluated tuples per length.
    #[arg(long, default_value_t = lcslab::seqgen::DEFAULT_ENUMERATION_BUDGET)]
    pub budget: u64,
    /// Disable the complement/reverse reduction for binary pairs.
    #[arg(long)]
    pub no_symmetry: bool,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// 16..25, 50..500 step 50, 1000..5000 step 500.
    Paper,
    /// The `paper` schedule extended to n = 10^5; takes many hours.
    PaperFull,
    /// 100, 500, 1000, 2000 with 2^12 trials.
    Desk,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct SimulateArgs {
    /// Lengths: `a`, `a..b`, `a:b:step` or a comma list.
    #[arg(long, conflicts_with = "preset")]
    pub n: Option<String>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Alphabet size; implied by --probs when given.
    #[arg(long)]
    pub q: Option<usize>,
    /// Comma-separated symbol probabilities.
    #[arg(long)]
    pub probs: Option<String>,
    /// Trials per length; presets choose their own unless given.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Grouped mode: number of datasets.
    #[arg(long, requires = "per_dataset")]
    pub groups: Option<u64>,
    /// Grouped mode: draws per dataset.
    #[arg(long, requires = "groups")]
    pub per_dataset: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = lcslab::mc::DEFAULT_BATCH_SIZE)]
    pub batch_size: u64,
    #[arg(long, default_value_t = lcslab::mc::DEFAULT_CONFIDENCE)]
    pub confidence: f64,
    #[arg(long, default_value_t = lcslab::DEFAULT_CELL_BUDGET)]
    pub cell_budget: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum DatasetCommand {
    /// Write a dataset file.
    Gen(DatasetGenArgs),
    /// Coverage and composition of a dataset file, as JSON.
    Analyze(DatasetAnalyzeArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GenSpecArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub probs: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct DatasetGenArgs {
    #[command(flatten)]
    pub spec: GenSpecArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct DatasetAnalyzeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// JSON report path; defaults to `<input>.analysis.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReferenceArg {
    Exact,
    UpperBound,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct BenchArgs {
    /// Dataset file; otherwise one is generated from --n/--count/--q/--probs/--seed.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub spec: GenSpecArgs,
    /// Sequences per group.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Comma list from dea, long-run, greedy, tournament.
    #[arg(long, default_value = "dea,long-run,greedy,tournament")]
    pub algorithms: String,
    #[arg(long, value_enum, default_value = "exact")]
    pub reference: ReferenceArg,
    /// Deposition window; defaults to max(2, ceil(q/2)).
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub max_dp_seqs: usize,
    #[arg(long, default_value_t = lcslab::DEFAULT_CELL_BUDGET)]
    pub cell_budget: u64,
    #[arg(long, default_value = "bench")]
    pub label: String,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum SweepCommand {
    /// Binary alphabet with probabilities (1-p, p).
    P(SweepPArgs),
    /// Uniform alphabets of the listed sizes.
    Alphabet(SweepAlphabetArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SweepCommon {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1024)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = lcslab::mc::DEFAULT_BATCH_SIZE)]
    pub batch_size: u64,
    #[arg(long, default_value_t = lcslab::DEFAULT_CELL_BUDGET)]
    pub cell_budget: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct SweepPArgs {
    /// `start:end:step` or a comma list, within (0, 0.5].
    #[arg(long)]
    pub grid: String,
    #[command(flatten)]
    pub common: SweepCommon,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct SweepAlphabetArgs {
    /// Comma list of alphabet sizes, increasing.
    #[arg(long)]
    pub q: String,
    #[command(flatten)]
    pub common: SweepCommon,
}

/// Subcommand names, used to place config-file flags after them.
fn command_path(cmd: &Command) -> Vec<&'static str> {
    match cmd {
        Command::Exact(_) => vec!["exact"],
        Command::Simulate(_) => vec!["simulate"],
        Command::Dataset(DatasetCommand::Gen(_)) => vec!["dataset", "gen"],
        Command::Dataset(DatasetCommand::Analyze(_)) => vec!["dataset", "analyze"],
        Command::Bench(_) => vec!["bench"],
        Command::Sweep(SweepCommand::P(_)) => vec!["sweep", "p"],
        Command::Sweep(SweepCommand::Alphabet(_)) => vec!["sweep", "alphabet"],
    }
}

/// Turns `key=value` lines into `--key=value` flags. Blank lines and `#`
/// comments are skipped; a bare `key` becomes a switch.
fn config_flags(path: &Path) -> CliResult<Vec<OsString>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut flags = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let flag = match line.split_once('=') {
            Some((k, v)) => format!("--{}={}", k.trim(), v.trim()),
            None => format!("--{line}"),
        };
        if flag.starts_with("--config") {
            return Err(CliError::usage(format!(
                "{}:{}: config files cannot nest",
                path.display(),
                i + 1
            )));
        }
        flags.push(flag.into());
    }
    Ok(flags)
}

/// Re-parses with config-file flags inserted right after the subcommand
/// names, so that later command-line flags override them.
fn resolve(args: Vec<OsString>) -> Result<Cli, clap::Error> {
    let cli = Cli::try_parse_from(&args)?;
    let Some(config) = cli.config.clone() else {
        return Ok(cli);
    };
    let flags = match config_flags(&config) {
        Ok(f) => f,
        Err(e) => {
            return Err(clap::Error::raw(
                clap::error::ErrorKind::Io,
                format!("{e}\n"),
            ));
        }
    };
    let path = command_path(&cli.command);
    let mut at = 1;
    for name in path {
        while at < args.len() && args[at] != name {
            at += 1;
        }
        at += 1;
    }
    let mut merged = args[..at.min(args.len())].to_vec();
    merged.extend(flags);
    merged.extend_from_slice(&args[at.min(args.len())..]);
    Cli::try_parse_from(merged)
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(CliError::usage("--workers must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::Other(e.to_string()))?;
    }
    match cli.command {
        Command::Exact(a) => cmd::exact::run(a),
        Command::Simulate(a) => cmd::simulate::run(a),
        Command::Dataset(DatasetCommand::Gen(a)) => cmd::dataset::gen(a),
        Command::Dataset(DatasetCommand::Analyze(a)) => cmd::dataset::analyze(a),
        Command::Bench(a) => cmd::bench::run(a),
        Command::Sweep(SweepCommand::P(a)) => cmd::sweep::run_p(a),
        Command::Sweep(SweepCommand::Alphabet(a)) => cmd::sweep::run_alphabet(a),
    }
}

fn main() -> ExitCode {
    let cli = match resolve(std::env::args_os().collect()) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // clap reports usage errors with 2 and help/version with 0
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
