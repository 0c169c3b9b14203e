//! `matchgeo` command-line front end.
//!
//! Exit codes: 0 ok, 1 verification failed, 2 parse error, 3 compilation
//! error, 4 resource limit.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use matchgeo::analyzer::{analyze, Verdict, DEFAULT_SEARCH_BUDGET};
use matchgeo::compiler::{compile_with, verify, Strategy, DEFAULT_ROUTING_BUDGET};
use matchgeo::error::Error;
use matchgeo::io;

#[derive(Parser)]
#[command(name = "matchgeo", version, about = "Compile and verify matchgate circuits on interaction graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a logical circuit onto a graph and write the schedule.
    Compile {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        /// Strategy name or `auto`.
        #[arg(long, default_value = "auto")]
        strategy: String,
        #[arg(long)]
        out: PathBuf,
        /// Node budget of the routing search.
        #[arg(long, default_value_t = DEFAULT_ROUTING_BUDGET)]
        routing_budget: usize,
    },
    /// Check a schedule against its circuit by statevector simulation.
    Verify {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Search a graph for universality certificates.
    Analyze {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        /// Also write the certificates as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Verify(String),
    Parse(String),
    Compile(String),
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verify(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Compile(_) => 3,
            Failure::Resource(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verify(m) | Failure::Parse(m) | Failure::Compile(m) | Failure::Resource(m) => m,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn parsed<T>(path: &Path, r: matchgeo::error::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn compile_failure(e: Error) -> Failure {
    match e {
        Error::Resource(m) => Failure::Resource(m),
        other => Failure::Compile(other.to_string()),
    }
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Resource(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Compile { circuit, graph, strategy, out, routing_budget } => {
            let circ = parsed(&circuit, io::parse_circuit(&read(&circuit)?))?;
            let g = parsed(&graph, io::parse_graph(&read(&graph)?))?;
            let strategy = Strategy::parse(&strategy).map_err(|e| Failure::Parse(e.to_string()))?;
            let (schedule, report) = compile_with(&circ, &g, strategy, routing_budget).map_err(compile_failure)?;
            write(&out, &io::format_schedule(&schedule))?;
            println!("strategy: {}", schedule.strategy);
            print!("{report}");
            Ok(())
        }
        Command::Verify { circuit, schedule, tol } => {
            let circ = parsed(&circuit, io::parse_circuit(&read(&circuit)?))?;
            let sched = parsed(&schedule, io::parse_schedule(&read(&schedule)?))?;
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(Failure::Parse(format!("invalid tolerance {tol}")));
            }
            let report = match verify(&circ, &sched, tol) {
                Ok(r) => r,
                Err(Error::Resource(m)) => return Err(Failure::Resource(m)),
                Err(e) => return Err(Failure::Parse(e.to_string())),
            };
            print!("{report}");
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Verify("verification failed".into()))
            }
        }
        Command::Analyze { graph, k, budget, out } => {
            let g = parsed(&graph, io::parse_graph(&read(&graph)?))?;
            let analysis = analyze(&g, k, budget).map_err(|e| Failure::Parse(e.to_string()))?;
            match analysis.verdict() {
                Verdict::Certified => {
                    for c in &analysis.certificates {
                        println!("{} via {}: witness {:?}; {}", c.condition, c.strategy, c.witness, c.overhead);
                    }
                    println!("{} certificate(s)", analysis.certificates.len());
                }
                Verdict::NoCertificate => println!("no certificate found"),
                Verdict::Unknown => println!("unknown (budget exhausted)"),
            }
            if let Some(out) = out {
                write(&out, &io::format_analysis(&analysis))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
