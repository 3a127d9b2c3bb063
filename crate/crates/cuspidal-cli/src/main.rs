use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use cuspidal::modp::Monomials;
use cuspidal::report::{self, Format};
use cuspidal::sweep::{self, SweepReport, Theorem};
use cuspidal::Error;

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "cuspidal", version, about = "Exact test-vector sweeps for depth-zero cuspidal types of GL2")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run a sweep; exit 1 if any mismatch is found.
    Verify {
        #[arg(long, value_parser = parse_theorem)]
        theorem: Theorem,
        /// Inclusive range of odd primes, e.g. 3..13.
        #[arg(long)]
        primes: Option<String>,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json", value_parser = parse_format)]
        format: Format,
    },
    /// Classify one character and, given mu, decide both test-vector flags.
    Query {
        #[arg(long)]
        p: u32,
        #[arg(long, value_parser = parse_pair)]
        nu: (u32, u32),
        #[arg(long, value_parser = parse_pair)]
        chi: (u32, u32),
        /// Split weight mu, modulo p - 1.
        #[arg(long)]
        mu: Option<u32>,
        /// Use the mirrored monomial in the even, t_chi even clauses.
        #[arg(long)]
        alternate: bool,
    },
    /// Run a sweep and print the serialized report.
    Report {
        #[arg(long, value_parser = parse_format)]
        format: Format,
        #[arg(long, default_value = "even", value_parser = parse_theorem)]
        theorem: Theorem,
        #[arg(long, default_value = "3..7")]
        primes: String,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_theorem(s: &str) -> Result<Theorem, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected a,b but got {s:?}"))?;
    let a = a.trim().parse().map_err(|_| format!("bad digit {a:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad digit {b:?}"))?;
    Ok((a, b))
}

fn default_primes(t: Theorem) -> &'static str {
    match t {
        Theorem::GaussSum => "3..19",
        Theorem::Ktype => "3..7",
        _ => "3..13",
    }
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn set_jobs(jobs: Option<usize>) -> Result<(), String> {
    if let Some(n) = jobs {
        if n == 0 {
            return Err("--jobs must be positive".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn sweep(theorem: Theorem, primes: &str) -> Result<SweepReport, ExitCode> {
    let primes = sweep::parse_primes(primes, theorem.max_prime()).map_err(usage)?;
    let start = Instant::now();
    let report = sweep::run(theorem, &primes).map_err(|e| match e {
        Error::Usage(_) => usage(e),
        e => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_MISMATCH)
        }
    })?;
    eprintln!("wall time: {:.2?}", start.elapsed());
    Ok(report)
}

fn emit(report: &SweepReport, format: Format, out: Option<&PathBuf>) -> Result<(), ExitCode> {
    match out {
        Some(path) => report::write(report, format, path).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            let text = report::render(report, format).map_err(usage)?;
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    match cli.cmd {
        Cmd::Verify { theorem, primes, jobs, out, format } => {
            set_jobs(jobs).map_err(usage)?;
            let report = sweep(theorem, primes.as_deref().unwrap_or(default_primes(theorem)))?;
            if let Some(path) = &out {
                emit(&report, format, Some(path))?;
            }
            let s = &report.summary;
            println!(
                "{theorem} p in {:?}: {} verdicts, {} checks, checked {}, mismatches {}",
                report.context.p,
                report.verdicts.len(),
                report.checks.len(),
                s.checked,
                s.mismatches
            );
            for w in &s.witnesses {
                println!("mismatch: {w}");
            }
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_MISMATCH) })
        }
        Cmd::Query { p, nu, chi, mu, alternate } => {
            let monomials = if alternate { Monomials::Alternate } else { Monomials::Printed };
            let q = sweep::query(p, nu, chi, mu, monomials).map_err(usage)?;
            print!("{q}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Report { format, theorem, primes, jobs, out } => {
            set_jobs(jobs).map_err(usage)?;
            let report = sweep(theorem, &primes)?;
            emit(&report, format, out.as_ref())?;
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_MISMATCH) })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    run(cli).unwrap_or_else(|code| code)
}
