use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use horopack::horoball::ChordConvention;
use horopack::optimizer::{global_search, maximize_scenario, scan};
use horopack::report::{format_sig, run_verify, write_csv, DISPLAY_DIGITS};
use horopack::scenario::{Scenario, ScenarioId};
use horopack::{arrangement::solve_scenario, Error};

/// Density of horoball packings in plane-symmetric ideal tetrahedra.
///
/// Exit codes: 0 success, 1 verification or internal failure, 2 usage
/// error, 3 infeasible input.
#[derive(Parser)]
#[command(name = "horopack", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Chord {
    /// Arc length 2 sinh(d/2) for a chord of hyperbolic length d.
    Half,
    /// Arc length sinh(d), kept as a negative control.
    Full,
}

impl From<Chord> for ChordConvention {
    fn from(c: Chord) -> Self {
        match c {
            Chord::Half => ChordConvention::HalfChord,
            Chord::Full => ChordConvention::FullChord,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the reproduction table.
    Verify {
        /// Print the report as JSON instead of a table.
        #[arg(long)]
        json: bool,
        /// Chord-to-arc reading used for density evaluations.
        #[arg(long, value_enum, default_value = "half")]
        chord: Chord,
    },
    /// Sample the density curve of a scenario and write it as CSV.
    Scan {
        /// Scenario name (S1–S4, M1–M6).
        #[arg(long)]
        scenario: ScenarioId,
        #[arg(long, allow_negative_numbers = true)]
        z_lo: f64,
        #[arg(long, allow_negative_numbers = true)]
        z_hi: f64,
        /// Number of uniformly spaced samples, endpoints included.
        #[arg(long, default_value_t = 512)]
        samples: usize,
        /// Output file; CSV goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximize the density of one scenario, or of all with `all`.
    Optimize {
        /// Scenario name or `all`.
        #[arg(long, default_value = "all")]
        scenario: String,
        /// Width in z at which the one-dimensional search stops.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Solve one scenario at one shape and dump the arrangement.
    Arrangement {
        #[arg(long)]
        scenario: ScenarioId,
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
        /// Print JSON instead of a summary.
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Verification,
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let sig = |x: f64| format_sig(x, DISPLAY_DIGITS);
    match cli.command {
        Command::Verify { json, chord } => {
            let report = run_verify(chord.into())?;
            if json {
                print_json(&report)?;
            } else {
                print!("{}", report.to_text());
            }
            if !report.pass {
                return Err(Failure::Verification);
            }
        }
        Command::Scan {
            scenario,
            z_lo,
            z_hi,
            samples,
            out,
        } => {
            let curve = scan(&Scenario::new(scenario), z_lo, z_hi, samples)?;
            match &out {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(path)?);
                    write_csv(&curve, &mut w)?;
                    w.flush()?;
                }
                None => write_csv(&curve, io::stdout().lock())?,
            }
            if let Some((z, d)) = curve.max_sample() {
                let msg = format!(
                    "{scenario}: max sample density {} at z = {} ({} of {} samples infeasible)",
                    sig(d),
                    sig(z),
                    curve.gaps(),
                    samples
                );
                // Keep stdout clean when it carries the CSV.
                if out.is_some() {
                    println!("{msg}");
                } else {
                    eprintln!("{msg}");
                }
            }
        }
        Command::Optimize { scenario, tol } => {
            if scenario.eq_ignore_ascii_case("all") {
                print_json(&global_search(tol)?)?;
            } else {
                let id: ScenarioId = scenario.parse()?;
                print_json(&maximize_scenario(&Scenario::new(id), tol)?)?;
            }
        }
        Command::Arrangement { scenario, z, json } => {
            let report = solve_scenario(&Scenario::new(scenario), z)?.report();
            if json {
                print_json(&report)?;
            } else {
                println!(
                    "{} at z = {}: α = {}, tetrahedron volume {}, density {}",
                    report.scenario,
                    sig(report.z),
                    sig(report.alpha),
                    sig(report.tet_volume),
                    sig(report.density)
                );
                for b in &report.balls {
                    println!(
                        "  B{}: s = {}, sector volume {}",
                        b.index,
                        sig(b.s),
                        sig(b.sector_volume)
                    );
                }
                for c in &report.contacts {
                    let p = c.touch_point.map(sig);
                    println!("  {} at ({}, {}, {}, {})", c.constraint, p[0], p[1], p[2], p[3]);
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Infeasible { .. } => 3,
                Error::InvalidInput(_) | Error::Domain(_) => 2,
                _ => 1,
            })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
