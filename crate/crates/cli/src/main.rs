use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use entcost_cli::query::{self, ChannelFamily, FamilyParams, Measure, PureChannel};
use entcost_cli::{emit_csv, figure, CliResult, RunConfig, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "entcost", version, about = "Entanglement cost and distillable-entanglement bounds for quantum channels")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Family {
    kind: ChannelFamily,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long = "G")]
    g: Option<f64>,
}

impl Family {
    fn params(&self) -> FamilyParams {
        FamilyParams {
            d: self.d,
            q: self.q,
            eta: self.eta,
            g: self.g,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the data behind figure 2, 3, 4, 5 or 6 as CSV.
    Figure {
        id: u8,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Grid points (default 101, or 51 for figure 4).
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Rains solver tolerance in bits (figure 4).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Entanglement cost of a channel family.
    Cost(Family),
    /// Distillable entanglement of a channel family.
    Distill(Family),
    /// Evaluate an entanglement measure on a state read from JSON.
    Measure {
        name: Measure,
        #[arg(long)]
        input: PathBuf,
    },
    /// Rains relative entropy of a bipartite state read from JSON.
    Rains {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Gaussian-state computations.
    Gaussian {
        #[command(subcommand)]
        cmd: GaussianCmd,
    },
}

#[derive(Subcommand)]
enum GaussianCmd {
    /// Entanglement of formation of a pure-loss or pure-amplifier channel
    /// acting on half of a two-mode squeezed vacuum.
    Eof {
        #[arg(long)]
        kind: PureChannel,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long = "G")]
        g: Option<f64>,
        #[arg(long)]
        ns: f64,
    },
}

fn run(cmd: Cmd) -> CliResult<()> {
    match cmd {
        Cmd::Figure { id, out, grid, seed, tol } => {
            let mut tolerances = BTreeMap::new();
            if let Some(t) = tol {
                tolerances.insert("rains_tol_bits".to_string(), t);
            }
            let cfg = RunConfig {
                seed,
                tolerances,
                grid_points: grid,
                output_path: out,
            };
            let table = figure(id, &cfg)?;
            match &cfg.output_path {
                Some(path) => emit_csv(&table, path)?,
                None => print!("{}", table.to_csv()),
            }
        }
        Cmd::Cost(f) => println!("{}", query::cost(f.kind, &f.params())?),
        Cmd::Distill(f) => println!("{}", query::distill(f.kind, &f.params())?),
        Cmd::Measure { name, input } => {
            println!("{}", query::measure(name, &query::read_input(&input)?)?)
        }
        Cmd::Rains { input, tol, max_iter } => {
            let r = query::rains(&query::read_input(&input)?, tol, max_iter)?;
            println!("{}", r.value_bits);
            eprintln!(
                "iterations {} final_gap {:e} feasibility_residual {:e}",
                r.iterations, r.final_gap, r.feasibility_residual
            );
        }
        Cmd::Gaussian {
            cmd: GaussianCmd::Eof { kind, eta, g, ns },
        } => println!("{}", query::gaussian_eof(kind, eta, g, ns)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
