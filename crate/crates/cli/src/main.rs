use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gaussest_cli::config::RunConfig;
use gaussest_cli::experiment::{self, Job, Row};
use gaussest_cli::{expect, presets};

#[derive(Parser)]
#[command(name = "gaussest", version, about = "Estimation of Gaussian processes with Gaussian probes")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    seed: Option<u64>,
    /// Independent repetitions per point.
    #[arg(long)]
    blocks: Option<usize>,
    /// Shots per setting (ignored by sweeps over the shot count).
    #[arg(long)]
    shots: Option<usize>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo run of one configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        o: Overrides,
    },
    /// Regenerates the data of a figure.
    Reproduce {
        id: String,
        /// 10⁴ blocks per point and the largest shot counts.
        #[arg(long)]
        full: bool,
        #[command(flatten)]
        o: Overrides,
    },
    /// Tabulates closed-form expectations against the oracle.
    Expect {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Run(String),
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Run(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn read_config(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn apply(mut c: RunConfig, o: &Overrides, label: &str) -> Result<RunConfig, Failure> {
    if let Some(s) = o.seed {
        c.seed = s;
    }
    if let Some(b) = o.blocks {
        c.blocks = b;
    }
    if let Some(n) = o.shots {
        if c.sweep_param.as_deref() == Some("shots") {
            eprintln!("{label}: sweeps the shot count, --shots ignored");
        } else {
            c.shots = n;
        }
    }
    c.validate().map_err(|(k, m)| Failure::Usage(format!("{label}: {k}: {m}")))?;
    Ok(c)
}

/// Runs the jobs and writes the CSV; the per-point summary goes to standard
/// output when the CSV goes to a file, to standard error otherwise.
fn run_jobs(jobs: &[Job], out: &Option<PathBuf>, series: bool) -> Result<(), Failure> {
    let mut log: Box<dyn Write> = if out.is_some() {
        Box::new(io::stdout())
    } else {
        Box::new(io::stderr())
    };
    let mut rows: Vec<Row> = Vec::new();
    for job in jobs {
        rows.extend(experiment::run_job(job, &mut log).map_err(Failure::Run)?);
    }
    experiment::write_csv(sink(out)?, &rows, series).map_err(|e| Failure::Run(e.to_string()))?;
    if let Some(p) = out {
        let _ = writeln!(log, "wrote {} rows to {}", rows.len(), p.display());
    }
    Ok(())
}

fn main_inner(cli: Cli) -> Result<(), Failure> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Usage(format!("--threads: {e}")))?;
    }
    match cli.command {
        Command::Run { config, o } => {
            let text = read_config(&config)?;
            let c = RunConfig::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", config.display())))?;
            let c = apply(c, &o, &config.display().to_string())?;
            let out = o.out.clone().or_else(|| c.out.as_ref().map(PathBuf::from));
            run_jobs(&[Job::single(c.pipeline.name(), c)], &out, false)
        }
        Command::Reproduce { id, full, o } => {
            let jobs = presets::preset(&id, full).ok_or_else(|| {
                Failure::Usage(format!("unknown figure {id:?}; valid ids: {}", presets::FIGURES.join(", ")))
            })?;
            let jobs = jobs
                .into_iter()
                .map(|mut j| {
                    j.config = apply(j.config, &o, &format!("{id} {}", j.label))?;
                    Ok(j)
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            run_jobs(&jobs, &o.out, true)
        }
        Command::Expect { config, out } => {
            let c = match &config {
                Some(path) => RunConfig::parse_unchecked(&read_config(path)?)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => RunConfig::default(),
            };
            let rows = expect::expect_rows(&c).map_err(Failure::Usage)?;
            expect::write_csv(sink(&out)?, &rows).map_err(|e| Failure::Run(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::FAILURE
        }
    }
}
