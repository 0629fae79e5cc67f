//! `roegen`: phase diagrams, potentials and path simulation for Roegenian
//! economic systems.
//!
//! Exit codes: 0 success, 2 config/validation error, 3 numerical-convergence
//! error, 4 i/o error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use roegen_core::config::{self, Config};
use roegen_core::equilibrium::{self, PhaseDiagram};
use roegen_core::error::Error;
use roegen_core::model::Dictionary;
use roegen_core::output::{self, fmt_sig17};
use roegen_core::potentials::{self, QuasiStaticPath};
use roegen_core::{eos, simulate};

#[derive(Parser)]
#[command(name = "roegen", version, about = "Economic phase-equilibrium engine")]
struct Cli {
    /// Config file (JSON). Defaults applied when the default path is absent.
    #[arg(long, global = true, value_name = "file")]
    config: Option<PathBuf>,

    /// Output directory for emitted files.
    #[arg(long, global = true, value_name = "dir", default_value = "./out")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the full phase diagram and emit diagram.json, curve CSVs and diagram.svg.
    Diagram,
    /// Print the critical point as `I_c P_c Q_c`.
    Critical,
    /// Print `P_sat Q_low Q_high latent_q` of the Maxwell construction at --I.
    Maxwell {
        #[arg(long = "I")]
        i: f64,
    },
    /// Print an isotherm as `Q,P` CSV rows.
    Isotherm {
        #[arg(long = "I")]
        i: f64,
        #[arg(long)]
        qmin: f64,
        #[arg(long)]
        qmax: f64,
        #[arg(long)]
        n: usize,
    },
    /// Simulate an (I,P) path over the diagram and emit a JSON report.
    Simulate {
        /// Path CSV with header `I,P`.
        #[arg(long, value_name = "csv")]
        path: PathBuf,
    },
    /// Second-law verdict and Pfaff loop residual of an (I,Q) path.
    Laws {
        /// Path CSV with header `I,Q`.
        #[arg(long, value_name = "csv")]
        path: PathBuf,
    },
    /// Dump the thermodynamics-economics dictionary as CSV.
    Dictionary,
}

const DEFAULT_CONFIG_PATH: &str = "./roegen.json";

fn load_config(arg: &Option<PathBuf>) -> Result<Config, Error> {
    match arg {
        Some(path) => config::load_config(path),
        None => {
            let default_path = Path::new(DEFAULT_CONFIG_PATH);
            if default_path.exists() {
                config::load_config(default_path)
            } else {
                Ok(Config::default())
            }
        }
    }
}

fn build_diagram(config: &Config) -> Result<PhaseDiagram, Error> {
    equilibrium::build_diagram(
        &config.eos,
        &config.solid,
        &config.grid,
        &config.tolerances,
    )
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn run(cli: &Cli) -> Result<(), Error> {
    let config = load_config(&cli.config)?;
    match &cli.command {
        Command::Diagram => {
            let diagram = build_diagram(&config)?;
            let written = output::emit_outputs(&diagram, None, &cli.out)?;
            for path in written {
                println!("{}", path.display());
            }
        }
        Command::Critical => {
            let critical = equilibrium::find_critical(&config.eos)?;
            println!(
                "{} {} {}",
                fmt_sig17(critical.i),
                fmt_sig17(critical.p),
                fmt_sig17(critical.q)
            );
        }
        Command::Maxwell { i } => {
            let point =
                equilibrium::maxwell_construction_with(&config.eos, *i, &config.tolerances)?;
            println!(
                "{} {} {} {}",
                fmt_sig17(point.p_sat),
                fmt_sig17(point.q_low),
                fmt_sig17(point.q_high),
                fmt_sig17(point.latent_q)
            );
        }
        Command::Isotherm { i, qmin, qmax, n } => {
            let samples = eos::isotherm(&config.eos, *i, *qmin, *qmax, *n)?;
            print!("{}", output::isotherm_csv(&samples));
        }
        Command::Simulate { path } => {
            let text = read_file(path)?;
            let samples = output::read_path_csv(&text, "I,P")?;
            let diagram = build_diagram(&config)?;
            let report = simulate::simulate(&diagram, &samples)?;
            output::emit_outputs(&diagram, Some(&report), &cli.out)?;
            print!("{}", output::simulation_json(&report));
        }
        Command::Laws { path } => {
            let text = read_file(path)?;
            let samples = output::read_path_csv(&text, "I,Q")?;
            let model = config.potential_model();
            let qpath = QuasiStaticPath::reversible(&config.eos, &samples)?;
            let verdict = potentials::second_law_check(&model, &qpath)?;
            println!("second_law: {}", verdict.as_str());
            if qpath.is_closed() {
                let residual = potentials::pfaff_loop_residual(&model, &qpath, 4096)?;
                println!("pfaff_residual: {}", fmt_sig17(residual));
            } else {
                println!("pfaff_residual: n/a (open path)");
            }
        }
        Command::Dictionary => {
            print!("{}", Dictionary::builtin().to_csv());
        }
    }
    Ok(())
}

fn exit_code(error: &Error) -> u8 {
    match error {
        Error::Convergence { .. } => 3,
        Error::Io { .. } => 4,
        Error::Build { source, .. } | Error::Context { source, .. } => exit_code(source),
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            let mut source = std::error::Error::source(&error);
            while let Some(inner) = source {
                eprintln!("  caused by: {inner}");
                source = inner.source();
            }
            ExitCode::from(exit_code(&error))
        }
    }
}
