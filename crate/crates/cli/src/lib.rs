//! Command-line front end for `rfx-core`: model files, instance files and
//! the `rfx` subcommands.

pub mod explain;
pub mod instances;
pub mod model;
pub mod stats;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rfx_core::fixtures::{orchid, parity_forest, random_forest};
use rfx_core::sat::dimacs::{parse_cnf, parse_dnf};
use rfx_core::{Instance, RandomForest};

use explain::{compute, export_wcnf, validate, ExplainFlags, Kind, Outcome, Record};
use instances::{load_instances, parse_inline};
use model::{load_forest, with_names_of, ModelFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NO_COMPREHENSIBLE: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("model: {0}")]
    Model(String),
    #[error("instances: row {row}{}: {message}", if *column > 0 { format!(", column {column}") } else { String::new() })]
    Instance { row: usize, column: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] rfx_core::Error),
    #[error("validation: {0}")]
    Validation(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rfx",
    version,
    about = "Abductive explanations for decision trees and random forests"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceFormat {
    Cnf,
    Dnf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the model's output (0 or 1) for every instance, one per line.
    Classify {
        #[arg(long, short)]
        model: PathBuf,
        #[arg(long, short)]
        instances: PathBuf,
    },
    /// Explain the model's output on one instance or on every row of a file.
    #[command(group(ArgGroup::new("input").required(true).args(["instance", "instances"])))]
    Explain {
        #[arg(long, short)]
        model: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Instance bits, e.g. 1101 or 1,1,0,1.
        #[arg(long)]
        instance: Option<String>,
        #[arg(long)]
        instances: Option<PathBuf>,
        #[command(flatten)]
        flags: ExplainFlags,
        /// Print one JSON record per explanation instead of text.
        #[arg(long)]
        json: bool,
        /// Write the MaxSAT instance of an optimisation kind as WCNF.
        #[arg(long, value_name = "PATH")]
        export_wcnf: Option<PathBuf>,
    },
    /// Build a forest equivalent to a DIMACS CNF or DNF.
    Convert {
        #[arg(long, value_enum)]
        from: SourceFormat,
        input: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Build a forest computing the negation of a model.
    Negate {
        model: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Explain every instance with several kinds and tabulate the results.
    Stats {
        #[arg(long, short)]
        model: PathBuf,
        #[arg(long, short)]
        instances: PathBuf,
        /// Comma-separated kinds.
        #[arg(long)]
        kinds: String,
        #[command(flatten)]
        flags: ExplainFlags,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Improvement trajectories of minimal-majoritary runs. Defaults to
        /// `<out>.trajectory.csv` when --out is given.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Write a fixture forest.
    #[command(group(ArgGroup::new("fixture").required(true).args(["parity", "random", "orchid"])))]
    FixtureGen {
        /// Parity forest over this many features: constantly 1, yet every
        /// majoritary reason is the full instance.
        #[arg(long, value_name = "N")]
        parity: Option<usize>,
        #[arg(long, default_value_t = 1, requires = "parity")]
        copies: usize,
        /// Random forest over this many features.
        #[arg(long, value_name = "N")]
        random: Option<usize>,
        #[arg(long, default_value_t = 5, requires = "random")]
        trees: usize,
        #[arg(long, default_value_t = 6, requires = "random")]
        depth: usize,
        #[arg(long, default_value_t = rfx_core::explain::DEFAULT_SEED, requires = "random")]
        seed: u64,
        /// The four-feature, three-tree orchid forest.
        #[arg(long)]
        orchid: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn emit_model(forest: &RandomForest, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    emit(path, &ModelFile::from_forest(forest).to_json(), out)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Runs one command, writing its primary output to `out`. Returns the
/// process exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Classify { model, instances } => {
            let forest = load_forest(&model)?;
            let mut text = String::new();
            for x in load_instances(&instances, &forest)? {
                text.push_str(if forest.eval(&x)? { "1\n" } else { "0\n" });
            }
            emit(None, &text, out)?;
            Ok(EXIT_OK)
        }
        Command::Explain {
            model,
            kind,
            instance,
            instances,
            flags,
            json,
            export_wcnf: wcnf_path,
        } => {
            let forest = load_forest(&model)?;
            let xs: Vec<Instance> = match (instance, instances) {
                (Some(bits), _) => vec![parse_inline(&bits, &forest)?],
                (None, Some(path)) => load_instances(&path, &forest)?,
                (None, None) => unreachable!("clap requires one input"),
            };
            let settings = flags.resolve(&forest, &[kind])?;
            if let Some(path) = &wcnf_path {
                if xs.len() != 1 {
                    return Err(CliError::Usage("--export-wcnf needs exactly one instance".into()));
                }
                emit(Some(path), &export_wcnf(&forest, &xs[0], kind, &settings)?, out)?;
            }
            let mut code = EXIT_OK;
            for x in &xs {
                let outcome = compute(&forest, x, kind, &settings, &mut |_| {})?;
                if let Some(r) = outcome.reason() {
                    validate(&forest, kind, &settings, r)?;
                }
                let record = Record::new(&forest, x, kind, &outcome);
                let text = if json {
                    serde_json::to_string(&record).expect("records serialize") + "\n"
                } else {
                    record.to_text()
                };
                emit(None, &text, out)?;
                code = match (&outcome, code) {
                    (Outcome::Partial(_), _) => EXIT_PARTIAL,
                    (Outcome::NoComprehensible, EXIT_OK) => EXIT_NO_COMPREHENSIBLE,
                    (_, c) => c,
                };
            }
            Ok(code)
        }
        Command::Convert { from, input, output } => {
            let text = read(&input)?;
            let forest = match from {
                SourceFormat::Cnf => {
                    let cnf = parse_cnf(&text)?;
                    RandomForest::from_cnf(cnf.clauses(), cnf.var_count())?
                }
                SourceFormat::Dnf => {
                    let (n, terms) = parse_dnf(&text)?;
                    RandomForest::from_dnf(&terms, n)?
                }
            };
            emit_model(&forest, output.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Negate { model, output } => {
            let forest = load_forest(&model)?;
            emit_model(&with_names_of(forest.negate(), &forest), output.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Stats {
            model,
            instances,
            kinds,
            flags,
            out: out_path,
            trajectory,
            jobs,
        } => {
            let forest = load_forest(&model)?;
            let kinds = Kind::parse_list(&kinds)?;
            let settings = flags.resolve(&forest, &kinds)?;
            let xs = load_instances(&instances, &forest)?;
            let report = stats::run_stats(&forest, &xs, &kinds, &settings, jobs);
            emit(out_path.as_deref(), &stats::write_csv(&report)?, out)?;
            let trajectory = trajectory.or_else(|| {
                let anytime = kinds.contains(&Kind::MinimalMajoritary);
                out_path
                    .filter(|_| anytime)
                    .map(|p| PathBuf::from(format!("{}.trajectory.csv", p.display())))
            });
            if let Some(path) = trajectory {
                emit(Some(&path), &stats::write_trajectory_csv(&report.trajectory)?, out)?;
            }
            Ok(EXIT_OK)
        }
        Command::FixtureGen {
            parity,
            copies,
            random,
            trees,
            depth,
            seed,
            orchid: use_orchid,
            output,
        } => {
            let forest = if let Some(n) = parity {
                if n == 0 || copies == 0 {
                    return Err(CliError::Usage("--parity and --copies must be at least 1".into()));
                }
                parity_forest(n, copies)
            } else if let Some(n) = random {
                if n == 0 || trees == 0 {
                    return Err(CliError::Usage("--random and --trees must be at least 1".into()));
                }
                random_forest(&mut ChaCha8Rng::seed_from_u64(seed), n, trees, depth)
            } else {
                debug_assert!(use_orchid);
                orchid::forest()
            };
            emit_model(&forest, output.as_deref(), out)?;
            Ok(EXIT_OK)
        }
    }
}
