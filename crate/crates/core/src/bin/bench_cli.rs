use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dynis::cli::{self, BenchConfig, GenKind, MetricsRow, RunFailure, Structure};

#[derive(Parser)]
#[command(name = "bench_cli", about = "Traces, checked runs and timing for the dynamic independent set structures")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a deterministic JSONL trace.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Execute a trace, printing one delta per op to stdout.
    Run {
        #[command(subcommand)]
        structure: RunCmd,
    },
    /// Time updates at a range of sizes and write a CSV.
    Bench {
        #[arg(long, value_enum)]
        structure: Structure,
        #[arg(long, default_value = "2^12..2^18")]
        sizes: String,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 4096)]
        ops: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: PathBuf,
    },
}

#[derive(Subcommand)]
enum RunCmd {
    Intervals {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        check: bool,
        /// Append the metrics row here; stderr otherwise.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    Squares {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        check: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::FAILURE
        }
    }
}

fn real_main() -> Result<(), String> {
    match Args::parse().cmd {
        Cmd::Gen { kind, n, seed, out } => {
            let ops = cli::gen(kind, n, seed).map_err(|e| e.to_string())?;
            let f = File::create(&out).map_err(|e| e.to_string())?;
            cli::write_trace(&ops, BufWriter::new(f)).map_err(|e| e.to_string())
        }
        Cmd::Run { structure } => {
            let (trace, csv, res) = match structure {
                RunCmd::Intervals { trace, k, check, csv } => {
                    let ops = load(&trace)?;
                    (trace, csv, cli::run_intervals(&ops, k, check, BufWriter::new(std::io::stdout().lock())))
                }
                RunCmd::Squares { trace, seed, k, check, csv } => {
                    let ops = load(&trace)?;
                    (trace, csv, cli::run_squares(&ops, seed, k, check, BufWriter::new(std::io::stdout().lock())))
                }
            };
            let row = res.map_err(|f: RunFailure| {
                eprintln!("{}", serde_json::to_string(&f).unwrap_or_default());
                format!("{}: {}", trace.display(), f)
            })?;
            report(&row, csv)
        }
        Cmd::Bench { structure, sizes, reps, ops, k, seed, csv } => {
            let sizes = cli::parse_sizes(&sizes).map_err(|e| e.to_string())?;
            let rows = cli::bench(&BenchConfig { structure, sizes, reps, ops, k, seed }).map_err(|e| e.to_string())?;
            for r in &rows {
                eprintln!("n={} mean={:.2}us median={:.2}us p99={:.2}us ratio={}", r.n, r.mean_us, r.median_us, r.p99_us,
                    r.ratio.map_or("-".into(), |x| format!("{:.3}", x)));
            }
            let f = File::create(&csv).map_err(|e| e.to_string())?;
            cli::write_csv(&rows, f).map_err(|e| e.to_string())
        }
    }
}

fn load(p: &PathBuf) -> Result<Vec<cli::TraceOp>, String> {
    let f = File::open(p).map_err(|e| format!("{}: {}", p.display(), e))?;
    cli::read_trace(BufReader::new(f)).map_err(|e| e.to_string())
}

fn report(row: &MetricsRow, csv: Option<PathBuf>) -> Result<(), String> {
    match csv {
        Some(p) => {
            let f = File::create(&p).map_err(|e| e.to_string())?;
            cli::write_csv(std::slice::from_ref(row), f).map_err(|e| e.to_string())
        }
        None => cli::write_csv(std::slice::from_ref(row), std::io::stderr()).map_err(|e| e.to_string()),
    }
}
