//! `compdyn`: validate schedules, classify orbits, verify the stated claims,
//! report continuity moduli, check the Carleman family and draw diagrams.

mod commands;
mod diagram;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use compdyn_core::schedule::TheoremId;
use compdyn_core::Exec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum FamilyChoice {
    /// The family used throughout: unit disks, rays and lines.
    #[default]
    Paper,
    /// Every `G_k` replaced by one upper half-plane.
    HalfPlane,
    /// An extra disk overlapping `B_1`.
    Overlap,
}

#[derive(Debug, Parser)]
#[command(name = "compdyn", version, about = "Symbolic dynamics of piecewise exponential target maps")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Disable data parallelism.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a schedule file.
    Validate { file: PathBuf },
    /// Classify one region's orbit.
    Classify {
        #[arg(long, required_unless_present = "spec", conflicts_with = "spec")]
        theorem: Option<TheoremId>,
        #[arg(long)]
        spec: Option<PathBuf>,
        /// `Base`, `G7`, `B3` or, for grid schedules, `G(0,3)`.
        #[arg(long)]
        region: String,
        #[arg(long, value_parser = ["f", "g", "gf", "fg"])]
        map: String,
    },
    /// Classification table over the probe set.
    Table {
        #[arg(long)]
        theorem: TheoremId,
        #[arg(long)]
        max_index: Option<i64>,
    },
    /// Check every stated classification.
    Verify {
        /// A theorem id, an alias, or `all`.
        #[arg(long)]
        theorem: String,
    },
    /// Continuity modulus of exp for a target centre.
    Modulus {
        #[arg(long, allow_negative_numbers = true)]
        center: i64,
    },
    /// Structural check of the closed set on a square window.
    CheckFamily {
        /// Half-width of the square window.
        #[arg(long, default_value_t = 30.0)]
        window: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long, value_enum, default_value_t)]
        family: FamilyChoice,
    },
    /// SVG of the pieces and schedule arrows.
    Diagram {
        #[arg(long)]
        theorem: TheoremId,
        #[arg(long)]
        out: PathBuf,
        /// Half-width of the square window.
        #[arg(long, default_value_t = 30.0)]
        window: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let outcome = match cli.command {
        Command::Validate { file } => commands::validate(&file),
        Command::Classify { theorem, spec, region, map } => {
            commands::classify_cmd(theorem, spec.as_deref(), &region, &map)
        }
        Command::Table { theorem, max_index } => commands::table(theorem, max_index, exec),
        Command::Verify { theorem } => commands::verify(&theorem, exec),
        Command::Modulus { center } => commands::modulus(center, exec),
        Command::CheckFamily { window, step, family } => commands::check_family(window, step, family, exec),
        Command::Diagram { theorem, out, window } => commands::diagram(theorem, &out, window),
    };
    match cli.format {
        Format::Json => println!("{}", outcome.doc.to_json()),
        Format::Text => {
            if outcome.code == 0 || outcome.code == 1 {
                print!("{}", outcome.text);
            } else {
                eprint!("{}", outcome.text);
            }
        }
    }
    ExitCode::from(outcome.code)
}
