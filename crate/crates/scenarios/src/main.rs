use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use scenarios::config::{ScenarioConfig, ScenarioKind};
use scenarios::output::write_artifacts;
use scenarios::runners::{run_custom, run_desitter, run_newtonian};
use scenarios::verify::{verify, VerifyLevel};
use scenarios::ScenarioError;

#[derive(Parser)]
#[command(name = "curvtherm", version, about = "Quantum work statistics in curved spacetime")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Two-level system in a uniform gravitational field.
    Newtonian(RunArgs),
    /// Harmonic oscillator in de Sitter space.
    Desitter(RunArgs),
    /// Any system over tabulated frame data.
    Custom(RunArgs),
    /// Run the acceptance suite.
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        level: Level,
        /// Ignored; accepted for interface symmetry.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory for summary.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; falls back to `output_path` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Fast,
    Full,
}

fn run_scenario(kind: ScenarioKind, args: &RunArgs) -> Result<(), ScenarioError> {
    let config = ScenarioConfig::from_path(&args.config)?;
    let out = match (&args.out, &config.output_path) {
        (Some(p), _) => p.clone(),
        (None, Some(p)) => PathBuf::from(p),
        (None, None) => return Err(ScenarioError::Config("no output directory: pass --out or set output_path".into())),
    };
    let art = match kind {
        ScenarioKind::Newtonian => run_newtonian(&config)?,
        ScenarioKind::Desitter => run_desitter(&config)?,
        ScenarioKind::Custom => run_custom(&config)?,
    };
    write_artifacts(&art, &out)?;
    let r = &art.report;
    println!("scenario        {}", kind.name());
    println!("delta_f         {:.12e}", r.delta_f);
    println!("mean_work       {:.12e}", r.mean_work);
    println!("jarzynski       {:.12e} vs {:.12e}", r.jarzynski_lhs, r.jarzynski_rhs);
    println!("crooks residual {:.3e}", r.crooks_max_residual);
    println!("entropy prod.   {:.12e}", r.entropy_production);
    println!("artifacts       {}", out.display());
    Ok(())
}

fn write_summary(dir: &Path, json: &str) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("summary.json"), json)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Newtonian(a) => (ScenarioKind::Newtonian, a),
        Command::Desitter(a) => (ScenarioKind::Desitter, a),
        Command::Custom(a) => (ScenarioKind::Custom, a),
        Command::Verify { level, out, .. } => {
            let level = match level {
                Level::Fast => VerifyLevel::Fast,
                Level::Full => VerifyLevel::Full,
            };
            let summary = verify(level);
            for c in &summary.criteria {
                println!("{}", c.line());
                for f in &c.findings {
                    println!("    finding: {f}");
                }
            }
            let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
            match out {
                Some(dir) => {
                    if let Err(e) = write_summary(dir, &json) {
                        eprintln!("error: {e}");
                        return ExitCode::from(1);
                    }
                }
                None => println!("{json}"),
            }
            return if summary.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed: {}", summary.failed_ids().join(", "));
                ExitCode::from(3)
            };
        }
    };
    match run_scenario(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
