//! Thin command-line front end; all logic lives in the library.

use clap::{Parser, Subcommand};
use constwidth::geom::{Cap, Direction};
use constwidth::io::cli::{self, CommandOutcome};
use constwidth::curvature::RhoSchedule;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "constwidth", about = "Constant-width bodies: completion, approximation, curvature certification")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Seed recorded in reports and used by any sampled statistic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the primary artifact (completed body, pipeline output) here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the constant-width property; exit 0 iff the deficit is within tolerance.
    VerifyWidth {
        body: PathBuf,
        #[arg(long)]
        width_tol: Option<f64>,
    },
    /// Iterated completion to a constant-width body.
    Complete {
        body: PathBuf,
        /// Completion directions as "x,y;x,y;..." (defaults per dimension).
        #[arg(long)]
        directions: Option<String>,
        #[arg(long)]
        width_tol: Option<f64>,
    },
    /// Approximation pipeline with the cap curvature certificate.
    Theorem4 {
        body: PathBuf,
        /// Cap pole, e.g. "0,0,1".
        #[arg(long)]
        v: String,
        #[arg(long)]
        eps: f64,
    },
    /// Curvature classification rows over a direction grid.
    Curvature {
        body: PathBuf,
        /// Cap restriction "x,y[,z]:threshold".
        #[arg(long)]
        cap: Option<String>,
        /// Angle schedule "beta0,factor,steps".
        #[arg(long)]
        schedule: Option<String>,
    },
    /// Emit a Reuleaux polygon body document.
    Reuleaux {
        #[arg(long)]
        k: usize,
        /// Arc partition "a,b,c,..." summing to pi.
        #[arg(long)]
        arcs: Option<String>,
    },
    /// Hausdorff distance between two bodies.
    Hausdorff { a: PathBuf, b: PathBuf },
    /// Completeness certificate (diameter-endpoint fraction).
    Certify {
        body: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Export the boundary as CSV polyline (2D) or OFF mesh (3D).
    Export {
        body: PathBuf,
        /// Target angular mesh of the export grid.
        #[arg(long, default_value_t = 0.05)]
        mesh: f64,
    },
}

fn parse_vector(text: &str) -> Result<Vec<f64>, constwidth::Error> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| constwidth::Error::Parse(format!("bad number {t:?}: {e}")))
        })
        .collect()
}

fn parse_direction(text: &str) -> Result<Direction, constwidth::Error> {
    Direction::new(&parse_vector(text)?)
}

fn parse_directions(text: &str) -> Result<Vec<Direction>, constwidth::Error> {
    text.split(';').map(parse_direction).collect()
}

fn parse_cap(text: &str) -> Result<Cap, constwidth::Error> {
    let (pole, thresh) = match text.split_once(':') {
        Some((p, t)) => (
            parse_direction(p)?,
            t.trim()
                .parse::<f64>()
                .map_err(|e| constwidth::Error::Parse(format!("bad threshold: {e}")))?,
        ),
        None => (parse_direction(text)?, 0.5),
    };
    Cap::new(pole, thresh)
}

fn parse_schedule(text: &str) -> Result<RhoSchedule, constwidth::Error> {
    let parts = parse_vector(text)?;
    if parts.len() != 3 {
        return Err(constwidth::Error::Parse(
            "schedule must be beta0,factor,steps".into(),
        ));
    }
    RhoSchedule::new(parts[0], parts[1], parts[2] as usize)
}

fn run(args: &Args) -> Result<CommandOutcome, constwidth::Error> {
    let read = |p: &PathBuf| -> Result<String, constwidth::Error> {
        Ok(std::fs::read_to_string(p)?)
    };
    match &args.command {
        Command::VerifyWidth { body, width_tol } => {
            cli::cmd_verify_width(&read(body)?, *width_tol, args.seed)
        }
        Command::Complete {
            body,
            directions,
            width_tol,
        } => {
            let dirs = directions.as_deref().map(parse_directions).transpose()?;
            cli::cmd_complete(&read(body)?, dirs, *width_tol, args.seed)
        }
        Command::Theorem4 { body, v, eps } => {
            cli::cmd_theorem4(&read(body)?, parse_direction(v)?, *eps, args.seed)
        }
        Command::Curvature {
            body,
            cap,
            schedule,
        } => {
            let cap = cap.as_deref().map(parse_cap).transpose()?;
            let sched = schedule.as_deref().map(parse_schedule).transpose()?;
            cli::cmd_curvature(&read(body)?, cap, sched, args.seed)
        }
        Command::Reuleaux { k, arcs } => {
            let arcs = arcs.as_deref().map(parse_vector).transpose()?;
            cli::cmd_reuleaux(*k, arcs)
        }
        Command::Hausdorff { a, b } => cli::cmd_hausdorff(&read(a)?, &read(b)?, args.seed),
        Command::Certify { body, tol } => cli::cmd_certify(&read(body)?, *tol, args.seed),
        Command::Export { body, mesh } => {
            let b = constwidth::io::parse_body(&read(body)?)?;
            let grid = constwidth::make_direction_grid(b.dim(), *mesh)?;
            let text = constwidth::io::export_boundary(&b, &grid)?;
            Ok(CommandOutcome {
                exit_code: 0,
                report: text,
                artifacts: Vec::new(),
            })
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            if let Some(out) = &args.out {
                for (_, content) in &outcome.artifacts {
                    if let Err(e) = std::fs::write(out, content) {
                        eprintln!("error writing {}: {e}", out.display());
                        return ExitCode::from(2);
                    }
                }
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code_for(&e) as u8)
        }
    }
}
