use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use ruled_strata::homology::{parse_rational, RuledSurface};
use ruled_strata::plumbing::parse_chain;
use ruled_strata::projective_maps::DEFAULT_TOL;
use ruled_strata::report::{
    run_decompositions, run_links, run_plumb, run_strata, run_verify_maps, ReportError, Table,
    DEFAULT_SAMPLES, DEFAULT_SEED,
};
use ruled_strata::stable_trees::DEFAULT_BRANCH_DEPTH;

#[derive(Parser)]
#[command(name = "ruled-strata", version, about = "Strata, links and plumbing on rational ruled surfaces")]
struct Cli {
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Admissible strata, areas, codimensions and link dimensions.
    Strata {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_lambda)]
        lambda: num_rational::Rational64,
        #[arg(long, default_value = "trivial")]
        surface: RuledSurface,
    },
    /// Normal-form link of J_m in the closure of J_k.
    Links {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value = "trivial")]
        surface: RuledSurface,
    },
    /// Lens space bounded by a linear plumbing chain.
    Plumb {
        /// Euler numbers, e.g. "-3,-1".
        #[arg(long, allow_hyphen_values = true)]
        chain: String,
    },
    /// Numeric checks of the projective models.
    VerifyMaps {
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Strata of the fiber of stable maps with branch degree n.
    Decompositions {
        #[arg(long)]
        n: i64,
        /// Maximum number of nodes per branch.
        #[arg(long, default_value_t = DEFAULT_BRANCH_DEPTH)]
        depth: u32,
        /// Enumerate the pointed variant.
        #[arg(long)]
        pointed: bool,
    },
}

fn parse_lambda(s: &str) -> Result<num_rational::Rational64, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn emit<R: Serialize + Table>(report: &R, json: bool) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("reports serialize")
        );
    } else {
        print!("{}", report.to_table());
    }
}

fn run(cli: Cli) -> Result<bool, ReportError> {
    let json = cli.json;
    match cli.command {
        Command::Strata { lambda, surface } => emit(&run_strata(lambda, surface)?, json),
        Command::Links { m, k, surface } => emit(&run_links(m, k, surface)?, json),
        Command::Plumb { chain } => {
            let r = run_plumb(&parse_chain(&chain)?)?;
            emit(&r, json);
            return Ok(r.agrees != Some(false));
        }
        Command::VerifyMaps { samples, seed, tol } => {
            let r = run_verify_maps(samples, seed, tol)?;
            emit(&r, json);
            return Ok(r.all_pass);
        }
        Command::Decompositions { n, depth, pointed } => {
            emit(&run_decompositions(n, depth, pointed)?, json)
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
