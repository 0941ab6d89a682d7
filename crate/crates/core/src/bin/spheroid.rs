use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spheroid_core::cli::{self, Command, Preset, RunConfig, Settings};
use spheroid_core::geometry::Coupling;
use spheroid_core::suite::Suite;
use spheroid_core::Error;

/// Free particle and Higgs oscillator spectra on a spheroid.
#[derive(Debug, Parser)]
#[command(name = "spheroid", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Curvature λ = 1/a² of the enclosing sphere.
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda: Option<f64>,
    /// Squared second eccentricity ε = a²/b² − 1.
    #[arg(long, global = true, allow_hyphen_values = true)]
    eps: Option<f64>,
    /// Oscillator frequency ω.
    #[arg(long, global = true, allow_hyphen_values = true)]
    omega: Option<f64>,
    /// Highest principal level included
    #[arg(long = "n-max", global = true)]
    n_max: Option<u32>,
    /// fig2a | fig2b | fig2c
    #[arg(long, global = true)]
    preset: Option<Preset>,
    /// squared | literal
    #[arg(long, global = true)]
    coupling: Option<Coupling>,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write a level diagram (free, osc, levels).
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    /// all | free | osc | oracle | geometry
    #[arg(long, global = true)]
    suite: Option<Suite>,
    /// JSON file with any of the settings above; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Tangent-plane point "x,y" for the geometry command (repeatable).
    #[arg(long = "point", global = true, value_parser = parse_point, allow_hyphen_values = true)]
    points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Cmd {
    /// Free-particle level table (CSV).
    Free,
    /// Oscillator level table (CSV).
    Osc,
    /// Unperturbed and perturbed oscillator tables with splittings (JSON).
    Levels,
    /// Run the validation suites (JSON report).
    Validate,
    /// Projection and metric diagnostics at tangent-plane points (JSON).
    Geometry,
}

fn parse_point(s: &str) -> Result<[f64; 2], String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y, got '{s}'"))?;
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("'{v}': {e}"));
    Ok([p(x)?, p(y)?])
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::from(cli::EXIT_OK as u8),
        Ok(false) => ExitCode::from(cli::EXIT_VALIDATION as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<bool, Error> {
    let command = match cli.command {
        Cmd::Free => Command::Free,
        Cmd::Osc => Command::Osc,
        Cmd::Levels => Command::Levels,
        Cmd::Validate => Command::Validate,
        Cmd::Geometry => Command::Geometry,
    };
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            Settings::from_json(&text)?
        }
        None => Settings::default(),
    };
    let flags = Settings {
        lambda: cli.lambda,
        eps: cli.eps,
        omega: cli.omega,
        n_max: cli.n_max,
        coupling: cli.coupling,
        preset: cli.preset,
        quad_rel_tol: None,
        out: cli.out,
        svg: cli.svg,
        suite: cli.suite,
        points: if cli.points.is_empty() { None } else { Some(cli.points) },
    };
    let env_tol = std::env::var(cli::QUAD_TOL_ENV).ok();
    let cfg = RunConfig::resolve(command, file.merge(flags), env_tol.as_deref())?;
    let outcome = cli::run(&cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        None => print!("{}", outcome.text),
    }
    Ok(outcome.passed)
}
