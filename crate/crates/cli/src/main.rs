//! `reflect`: reflections, connected components and reflection-property checks for finite
//! semigroups given as `.sgt` tables.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Property holds.
pub const EXIT_HOLDS: u8 = 0;
/// Property fails; witnesses are printed.
pub const EXIT_FAILS: u8 = 1;
/// Parse, usage or I/O error.
pub const EXIT_INPUT: u8 = 2;
/// Input outside the variety's domain, or an order beyond the supported bound.
pub const EXIT_DOMAIN: u8 = 3;
/// A theorem-based check disagreed with its oracle.
pub const EXIT_DISAGREEMENT: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "reflect",
    version,
    about = "Reflections of finite semigroups onto subvarieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct VarietyArg {
    /// One of slat, band, band-slat, commutative.
    #[arg(long, default_value = "slat")]
    pub variety: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print HI(C) and the unit map for every table in FILE.
    Reflect {
        file: PathBuf,
        #[command(flatten)]
        variety: VarietyArg,
        #[arg(long)]
        json: bool,
    },
    /// List the connected components of every table in FILE.
    Components {
        file: PathBuf,
        #[command(flatten)]
        variety: VarietyArg,
        #[arg(long)]
        json: bool,
    },
    /// Check a reflection property; exit 0 if it holds, 1 if it fails.
    Check(CheckArgs),
    /// Enumerate all semigroups of one order up to isomorphism.
    Enumerate {
        #[arg(long)]
        order: usize,
        /// One of none, slat, band.
        #[arg(long, default_value = "none")]
        filter: String,
        /// Directory for the corpus file; prints to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run property checks over the whole corpus and write a JSON report.
    Survey {
        #[command(flatten)]
        variety: VarietyArg,
        #[arg(long, default_value_t = 3)]
        max_order: usize,
        /// Comma-separated: simple, sle, stable-units, localization, left-exact.
        #[arg(long, default_value = "sle,stable-units")]
        properties: String,
        /// Also run the definitional oracles and record agreement.
        #[arg(long)]
        oracle: bool,
        /// Bound on oracle corners (M and D).
        #[arg(long, default_value_t = 3)]
        oracle_order: usize,
        /// Bound on the objects of swept morphisms and cospans.
        #[arg(long, default_value_t = 3)]
        morphism_order: usize,
        /// Report path; prints to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// `.sgt` files; all their tables are used.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// One of simple, sle, stable-units, localization, left-exact.
    #[arg(long)]
    pub property: String,
    #[command(flatten)]
    pub variety: VarietyArg,
    /// Also run the definitional oracle and report agreement.
    #[arg(long)]
    pub oracle: bool,
    /// Oracle bound on corner objects.
    #[arg(long, default_value_t = 3)]
    pub max_order: usize,
    /// Map files for a cospan A → C ← B. With two tables the cospan is A → C ← A; with three
    /// tables it is A → C ← B in file order (A, B, C).
    #[arg(long, num_args = 2, value_names = ["F", "G"])]
    pub cospan: Option<Vec<PathBuf>>,
    #[arg(long)]
    pub json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Reflect {
            file,
            variety,
            json,
        } => commands::reflect_cmd(&file, &variety.variety, json),
        Command::Components {
            file,
            variety,
            json,
        } => commands::components(&file, &variety.variety, json),
        Command::Check(args) => commands::check(&args),
        Command::Enumerate { order, filter, out } => {
            commands::enumerate(order, &filter, out.as_deref())
        }
        Command::Survey {
            variety,
            max_order,
            properties,
            oracle,
            oracle_order,
            morphism_order,
            out,
        } => commands::survey(
            &variety.variety,
            max_order,
            &properties,
            commands::SurveyFlags {
                oracle,
                oracle_order,
                morphism_order,
            },
            out.as_deref(),
        ),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
