use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nsb_core::constants::PhysicalConstants;
use nsb_core::scenarios::{catalog, report_planck_numbers, run, ScenarioConfig, ScenarioName};
use nsb_core::Error;

#[derive(Parser)]
#[command(name = "nsb", version, about = "Pilot-wave equation solver and scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write CSV tables plus manifest.json
    Run {
        scenario: String,
        /// TOML configuration file
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override a config key, e.g. --set r=0.5 (repeatable)
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Also write a gnuplot script next to the tables
        #[arg(long)]
        plotscript: bool,
    },
    /// Print derived physical numbers
    Report {
        #[command(subcommand)]
        what: Report,
    },
    /// List the available scenarios
    List,
}

#[derive(Subcommand)]
enum Report {
    /// Planck time, oscillation frequency, period and energy
    Planck {
        #[arg(long)]
        json: bool,
    },
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run {
            scenario,
            config,
            out,
            set,
            plotscript,
        } => {
            let name: ScenarioName = scenario.parse()?;
            let mut cfg = ScenarioConfig::load(name, config.as_deref(), &set, out)?;
            cfg.plotscript = plotscript;
            let summary = run(&cfg)?;
            for file in &summary.manifest.outputs {
                println!("{}", summary.output_dir.join(&file.file).display());
            }
            println!("{}", summary.output_dir.join(nsb_core::scenarios::MANIFEST_FILE).display());
        }
        Command::Report {
            what: Report::Planck { json },
        } => {
            let report = report_planck_numbers(&PhysicalConstants::codata())?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.to_text());
            }
        }
        Command::List => {
            for (name, description) in catalog() {
                println!("{name:<16} {description}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nsb: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
