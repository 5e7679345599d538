//! `fermsim` command-line front end.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fermsim::io::{fmt_f64, parse_bitstrings, record, Format, CSV_HEADER};
use fermsim::{
    extent, oracle_probability, oracle_support, parse_circuit, trajectory_count, BasisState,
    Circuit, EngineConfig, Error, EstimateResult, Mode, Simulator,
};

#[derive(Parser)]
#[command(
    name = "fermsim",
    version,
    about = "Born-rule probabilities for passive matchgate + controlled-phase circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the circuit extent and per-gate factors.
    Extent {
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Print the trajectory count needed for a target error.
    TrajCount {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        pmax: f64,
    },
    /// Estimate probabilities with a fixed number of trajectories.
    RawEstimate {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        trajectories: u64,
    },
    /// Estimate probabilities to additive error epsilon with failure probability delta.
    Estimate {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Exact probabilities by enumerating every trajectory.
    Exact {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Rank bitstrings by estimated probability, highest first.
    Rank {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 1000)]
        trajectories: u64,
        /// Number of bitstrings to print (default: all).
        #[arg(long)]
        top_k: Option<usize>,
    },
    /// Dense state-vector probabilities; prints the whole support without --bitstrings.
    Oracle {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        bitstrings: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Jsonl)]
        format: OutputFormat,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    bitstrings: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads, 0 = all available.
    #[arg(long, env = "FERMSIM_THREADS", default_value_t = 0)]
    threads: usize,
    #[arg(long, default_value_t = 1024, value_parser = clap::value_parser!(u64).range(1..))]
    chunk_size: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Jsonl)]
    format: OutputFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Jsonl,
    Csv,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Jsonl => Format::Jsonl,
            OutputFormat::Csv => Format::Csv,
        }
    }
}

enum Failure {
    Input(String),
    Refused(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_capability_refusal() {
            Failure::Refused(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_circuit(path: &Path) -> Result<Circuit, Failure> {
    parse_circuit(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_bitstrings(path: &Path, n: usize) -> Result<Vec<BasisState>, Failure> {
    let entries = parse_bitstrings(&read(path)?, n)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(entries.into_iter().map(|e| e.state).collect())
}

fn write_records(
    out: &mut impl Write,
    format: Format,
    rows: &[(&BasisState, &EstimateResult)],
) -> io::Result<()> {
    if format == Format::Csv {
        writeln!(out, "{CSV_HEADER}")?;
    }
    for (b, r) in rows {
        writeln!(out, "{}", record(format, b, r))?;
    }
    Ok(())
}

fn run_engine(run: &RunArgs, mode: Mode, out: &mut impl Write) -> Result<(), Failure> {
    let circuit = load_circuit(&run.circuit)?;
    let bits = load_bitstrings(&run.bitstrings, circuit.n())?;
    let sim = Simulator::with_config(&circuit, config(run));
    let results = sim.batch(&bits, mode, run.seed)?;
    let rows: Vec<_> = bits.iter().zip(&results).collect();
    write_records(out, run.format.into(), &rows)?;
    Ok(())
}

fn config(run: &RunArgs) -> EngineConfig {
    EngineConfig {
        chunk_size: run.chunk_size as usize,
        threads: run.threads,
        ..EngineConfig::default()
    }
}

fn oracle_result(circuit: &Circuit, probability: f64) -> EstimateResult {
    EstimateResult {
        probability,
        amplitude_accumulator_magnitude: probability.sqrt(),
        trajectories_used: 0,
        extent: extent(circuit).extent,
        seed: 0,
        achieved_epsilon: None,
        failure_probability: None,
        rounds: None,
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    match cli.command {
        Command::Extent { circuit } => {
            let c = load_circuit(&circuit)?;
            let report = extent(&c);
            let factors: Vec<String> = report
                .per_gate_factors
                .iter()
                .map(|&f| fmt_f64(f))
                .collect();
            writeln!(
                out,
                "{{\"extent\":{},\"per_gate_factors\":[{}],\"k\":{},\"n\":{},\"matchgates\":{}}}",
                fmt_f64(report.extent),
                factors.join(","),
                c.k(),
                c.n(),
                c.matchgate_count()
            )?;
        }
        Command::TrajCount {
            circuit,
            epsilon,
            delta,
            pmax,
        } => {
            let c = load_circuit(&circuit)?;
            let xi = extent(&c).extent;
            let t = trajectory_count(epsilon, delta, pmax, xi)?;
            writeln!(
                out,
                "{{\"trajectories\":{t},\"epsilon\":{},\"delta\":{},\"p_max\":{},\"extent\":{}}}",
                fmt_f64(epsilon),
                fmt_f64(delta),
                fmt_f64(pmax),
                fmt_f64(xi)
            )?;
        }
        Command::RawEstimate { run, trajectories } => {
            run_engine(&run, Mode::Raw { trajectories }, out)?
        }
        Command::Estimate {
            run,
            epsilon,
            delta,
        } => run_engine(&run, Mode::Adaptive { epsilon, delta }, out)?,
        Command::Exact { run } => run_engine(&run, Mode::Exact, out)?,
        Command::Rank {
            run,
            trajectories,
            top_k,
        } => {
            let circuit = load_circuit(&run.circuit)?;
            let bits = load_bitstrings(&run.bitstrings, circuit.n())?;
            let sim = Simulator::with_config(&circuit, config(&run));
            let results = sim.batch(&bits, Mode::Raw { trajectories }, run.seed)?;
            let mut order: Vec<usize> = (0..bits.len()).collect();
            // Stable sort keeps input order among ties.
            order.sort_by(|&i, &j| results[j].probability.total_cmp(&results[i].probability));
            order.truncate(top_k.unwrap_or(bits.len()));
            let rows: Vec<_> = order.iter().map(|&i| (&bits[i], &results[i])).collect();
            write_records(out, run.format.into(), &rows)?;
        }
        Command::Oracle {
            circuit,
            bitstrings,
            format,
        } => {
            let c = load_circuit(&circuit)?;
            let entries: Vec<(BasisState, f64)> = match bitstrings {
                Some(path) => load_bitstrings(&path, c.n())?
                    .into_iter()
                    .map(|b| oracle_probability(&c, &b).map(|p| (b, p)))
                    .collect::<Result<_, _>>()?,
                None => oracle_support(&c)?,
            };
            let results: Vec<EstimateResult> =
                entries.iter().map(|(_, p)| oracle_result(&c, *p)).collect();
            let rows: Vec<_> = entries.iter().map(|e| &e.0).zip(&results).collect();
            write_records(out, format.into(), &rows)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Refused(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
