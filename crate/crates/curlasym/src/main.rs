use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use curlasym::{AlephSet, Outcome, Param};
use specnum::Tolerances;

/// Exact symbol calculus and numerical checks for the spectral asymmetry of curl.
#[derive(Parser)]
#[command(name = "curlasym", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Construct the projection symbols and record every intermediate.
    Project {
        /// Built-in name (c1..c24, flat) or JSON file.
        #[arg(long, default_value = "flat")]
        config: String,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=3))]
        accuracy: u32,
        /// 0, +, - or all.
        #[arg(long, default_value = "all")]
        aleph: AlephSet,
    },
    /// Asymmetry trace report for one configuration or the unit sweep.
    Asym {
        #[arg(long, conflicts_with = "sweep")]
        config: Option<String>,
        #[arg(long)]
        sweep: bool,
    },
    /// Spectral checks on Berger spheres.
    Berger {
        #[command(subcommand)]
        what: BergerCommand,
    },
    /// Bessel-kernel and singular-part checks.
    Kernel {
        /// Single Basset check at this y.
        #[arg(long)]
        y: Option<f64>,
        #[arg(long)]
        config: Option<String>,
        /// Sphere average of the singular part for --config (default c11).
        #[arg(long)]
        sphere: bool,
        #[arg(long)]
        basset_tolerance: Option<f64>,
        #[arg(long)]
        sphere_tolerance: Option<f64>,
    },
}

#[derive(Subcommand)]
enum BergerCommand {
    /// Curl spectrum as CSV.
    Spectrum {
        #[arg(long)]
        a: Param,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(2..))]
        nmax: u64,
    },
    /// Eta partial sum against the decomposition identity, plus the closed forms.
    Eta {
        #[arg(long)]
        a: Param,
        #[arg(long, default_value_t = 6.0)]
        s: f64,
        #[arg(long, default_value_t = 3000, value_parser = clap::value_parser!(u64).range(2..))]
        nmax: u64,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Weyl ratios of the counting functions.
    Weyl {
        #[arg(long)]
        a: Param,
        #[arg(long)]
        lambda: f64,
    },
}

fn run(cli: &Cli) -> anyhow::Result<(String, Outcome)> {
    let pretty = |(v, o): (serde_json::Value, Outcome)| -> anyhow::Result<(String, Outcome)> {
        Ok((serde_json::to_string_pretty(&v)? + "\n", o))
    };
    let mut tol = Tolerances::default();
    match &cli.command {
        Command::Project { config, accuracy, aleph } => pretty(curlasym::cmd_project(config, *accuracy, *aleph)?),
        Command::Asym { config, sweep } => pretty(curlasym::cmd_asym(config.as_deref(), *sweep)?),
        Command::Berger { what } => match what {
            BergerCommand::Spectrum { a, nmax } => curlasym::cmd_berger_spectrum(a, *nmax),
            BergerCommand::Eta { a, s, nmax, tolerance } => {
                if let Some(t) = tolerance {
                    tol.eta_identity = *t;
                }
                pretty(curlasym::cmd_berger_eta(a, *s, *nmax, &tol)?)
            }
            BergerCommand::Weyl { a, lambda } => pretty(curlasym::cmd_berger_weyl(a, *lambda)?),
        },
        Command::Kernel { y, config, sphere, basset_tolerance, sphere_tolerance } => {
            if let Some(t) = basset_tolerance {
                tol.basset = *t;
            }
            if let Some(t) = sphere_tolerance {
                tol.sphere_average = *t;
            }
            pretty(curlasym::cmd_kernel(*y, config.as_deref(), *sphere, &tol)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(n) = std::env::var("CURLASYM_THREADS") {
        match n.parse::<usize>() {
            Ok(n) => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            Err(_) => {
                eprintln!("error: CURLASYM_THREADS must be a number");
                return ExitCode::from(2);
            }
        }
    }
    let (text, outcome) = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.exit_code() as u8)
}
