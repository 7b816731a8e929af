use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lapdiag::Preconditioner;
use lapdiag_cli::{
    cmd_approx, cmd_compare, cmd_exact, cmd_generate, emit, to_json, ApproxArgs, CliError,
    ExactArgs, Source,
};

/// Diagonal of the Laplacian pseudoinverse: sketch estimates, exact
/// oracles and model-network generators.
///
/// Graph sources are `koch:G`, `urt:G:F`, `psfw:G`, or an edge-list file
/// (prefix with `file:` if the path contains a colon).
#[derive(Parser)]
#[command(name = "lapdiag", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate every diagonal entry within (1 ± ε)².
    Approx {
        source: String,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads for the sketch rows.
        #[arg(long)]
        threads: Option<usize>,
        /// Fail on disconnected input instead of using its largest component.
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum, default_value_t = PrecondArg::Elimination)]
        preconditioner: PrecondArg,
        /// Iteration cap for each row solve.
        #[arg(long)]
        max_iterations: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Dense pseudoinverse diagonal, resistances and Kirchhoff index.
    Exact {
        source: String,
        /// Largest node count for the dense path [env: LAPDIAG_DENSE_CAP].
        #[arg(long)]
        dense_cap: Option<usize>,
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Write a model network as an edge list plus a `.labels` sidecar.
    Generate {
        family: FamilyArg,
        generation: u32,
        /// Children per node per iteration (urt only).
        #[arg(short = 'f', long = "children")]
        f: Option<u32>,
        /// Edge-list path; labels go to `<path>.labels`. Edge list to
        /// standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Relative errors of an approx result against an exact one.
    Compare {
        exact: PathBuf,
        approx: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(clap::Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecondArg {
    None,
    Diagonal,
    Elimination,
}

impl From<PrecondArg> for Preconditioner {
    fn from(p: PrecondArg) -> Self {
        match p {
            PrecondArg::None => Preconditioner::None,
            PrecondArg::Diagonal => Preconditioner::Diagonal,
            PrecondArg::Elimination => Preconditioner::Elimination,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Koch,
    Urt,
    Psfw,
}

fn write(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    emit(text, path).map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Approx {
            source,
            epsilon,
            seed,
            threads,
            strict,
            preconditioner,
            max_iterations,
            out,
        } => {
            let args = ApproxArgs {
                threads,
                strict,
                preconditioner: preconditioner.into(),
                max_iterations,
                ..ApproxArgs::new(source.parse()?, epsilon, seed)
            };
            let result = cmd_approx(&args)?;
            let text = match out.format {
                Format::Json => to_json(&result),
                Format::Csv => result.to_csv(),
            };
            write(&text, out.output.as_deref())
        }
        Command::Exact {
            source,
            dense_cap,
            strict,
            out,
        } => {
            let args = ExactArgs {
                dense_cap,
                strict,
                ..ExactArgs::new(source.parse()?)
            };
            let result = cmd_exact(&args)?;
            let text = match out.format {
                Format::Json => to_json(&result),
                Format::Csv => result.to_csv(),
            };
            write(&text, out.output.as_deref())
        }
        Command::Generate {
            family,
            generation,
            f,
            output,
        } => {
            let source = match (family, f) {
                (FamilyArg::Koch, None) => Source::Koch { g: generation },
                (FamilyArg::Psfw, None) => Source::Psfw { g: generation },
                (FamilyArg::Urt, Some(f)) => Source::Urt { g: generation, f },
                (FamilyArg::Urt, None) => {
                    return Err(CliError::Usage("urt needs --children F".into()))
                }
                (_, Some(_)) => {
                    return Err(CliError::Usage("--children applies to urt only".into()))
                }
            };
            let files = cmd_generate(&source)?;
            match output {
                Some(path) => {
                    write(&files.edges, Some(&path))?;
                    let mut labels = path.into_os_string();
                    labels.push(".labels");
                    write(&files.labels, Some(Path::new(&labels)))?;
                    eprintln!(
                        "{source}: {} nodes, {} edges",
                        files.node_count, files.edge_count
                    );
                    Ok(())
                }
                None => write(&files.edges, None),
            }
        }
        Command::Compare { exact, approx, out } => {
            let result = cmd_compare(&read(&exact)?, &read(&approx)?)?;
            let text = match out.format {
                Format::Json => to_json(&result),
                Format::Csv => result.to_csv(),
            };
            write(&text, out.output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
