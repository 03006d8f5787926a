#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod run;
mod selfcheck;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_gamma, parse_kind, Experiment, ExperimentConfig, Format, Overrides, Spacing};
use ringwalk::{Gamma, WalkKind};

#[derive(Parser)]
#[command(name = "ringwalk", version, about = "Classical and quantum walks on long-range rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its data files.
    Run(Box<RunArgs>),
    /// Run the fast consistency checks.
    Selfcheck {
        /// List the checks without running them.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    experiment: Experiment,
    /// Number of nodes.
    #[arg(long)]
    n: Option<usize>,
    /// Coupling exponent (>= 2, or `inf`).
    #[arg(long, value_parser = parse_gamma)]
    gamma: Option<Gamma>,
    /// Comma-separated exponents for the figure recipes.
    #[arg(long, value_delimiter = ',', value_parser = parse_gamma)]
    gammas: Option<Vec<Gamma>>,
    /// Coupling cutoff distance (default N/2).
    #[arg(long)]
    rmax: Option<usize>,
    #[arg(long)]
    tmin: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    /// Points per decade (log) or per unit time (linear).
    #[arg(long)]
    ppd: Option<usize>,
    #[arg(long, value_enum)]
    spacing: Option<Spacing>,
    /// Time step of the oscillating quantum curves in figures.
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    bins: Option<usize>,
    /// Output path prefix; standard output if omitted.
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// `classical` or `quantum`.
    #[arg(long, value_parser = parse_kind)]
    kind: Option<WalkKind>,
    /// Use dense diagonalization instead of the Bloch formula (N <= 4096).
    #[arg(long)]
    diagonalize: bool,
    /// Use the infinite-chain SPA.
    #[arg(long)]
    infinite: bool,
    /// Base configuration (JSON); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl RunArgs {
    fn into_config(self) -> Result<ExperimentConfig, config::ConfigError> {
        let base = match &self.config {
            Some(path) => {
                let loaded = ExperimentConfig::load(path)?;
                if loaded.experiment != self.experiment {
                    return Err(config::ConfigError(format!(
                        "config file is for `{}`, not `{}`",
                        loaded.experiment, self.experiment
                    )));
                }
                loaded
            }
            None => ExperimentConfig::defaults(self.experiment),
        };
        base.apply(Overrides {
            n: self.n,
            gamma: self.gamma,
            gammas: self.gammas,
            r_max: self.rmax,
            t_min: self.tmin,
            t_max: self.tmax,
            ppd: self.ppd,
            spacing: self.spacing,
            dt: self.dt,
            bins: self.bins,
            out: self.out,
            format: self.format,
            kind: self.kind,
            diagonalize: self.diagonalize,
            infinite: self.infinite,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Run(args) => {
            let config = match args.into_config() {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("usage error: {e}");
                    return ExitCode::from(1);
                }
            };
            match run::run(&config) {
                Ok(files) => {
                    for f in files {
                        eprintln!("wrote {}", f.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(e.exit_code())
                }
            }
        }
        Command::Selfcheck { list } => {
            if list {
                for c in selfcheck::CHECKS {
                    println!("{:<18} {}", c.id, c.description);
                }
                return ExitCode::SUCCESS;
            }
            let outcomes = selfcheck::run_all(selfcheck::default_spectrum);
            let failed = outcomes.iter().filter(|o| !o.pass).count();
            for o in &outcomes {
                println!("[{}] {:<18} {}", if o.pass { "PASS" } else { "FAIL" }, o.id, o.detail);
            }
            println!("{} of {} checks passed", outcomes.len() - failed, outcomes.len());
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
    }
}
