//! `holderlab`: runs boundary-regularity experiments from TOML configs.

mod commands;
mod config;
mod output;
mod presets;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use config::{ConfigSource, ExperimentConfig};
use output::Stamp;

#[derive(Parser)]
#[command(name = "holderlab", version, about = "Monte Carlo boundary-regularity experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the geometric conditions along the sequence (CSV).
    CheckGeometry(Common),
    /// Derive the exponent budget (JSON).
    Constants(Common),
    /// Estimate the solution at the configured points (JSON lines).
    Solve(Common),
    /// Measure oscillation decay at the origin (CSV).
    Profile(Common),
    /// Check a measured profile against the exponent budget (JSON).
    Certify {
        #[command(flatten)]
        common: Common,
        /// Exit with status 1 when the verdict is fail.
        #[arg(long)]
        strict: bool,
        /// Certify a CSV written by `profile` instead of measuring again.
        #[arg(long, value_name = "CSV")]
        from_profile: Option<PathBuf>,
    },
    /// Evaluate the modulus-of-continuity recursion (CSV).
    Perron(Common),
    /// Print the resolved config in canonical form with its hash.
    ShowConfig(Common),
    /// List the bundled presets.
    Presets,
}

#[derive(Args)]
struct Common {
    /// TOML config file.
    #[arg(long, short, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// Bundled config by name.
    #[arg(long)]
    preset: Option<String>,
    /// Override a config key, e.g. `--set domain.aperture=0.5`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Paths per evaluation, or samples per estimate for `check-geometry`.
    #[arg(long)]
    paths: Option<u64>,
    /// Shell width of walk-on-spheres.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Write the output here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Size of the worker pool. Output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    /// Loads the config and applies `--set` followed by the dedicated flags.
    fn resolve(&self, paths_key: Option<&str>) -> Result<ExperimentConfig> {
        let source = match (&self.config, &self.preset) {
            (Some(path), _) => ConfigSource::File(path),
            (None, Some(name)) => ConfigSource::Preset(name),
            (None, None) => bail!("one of --config and --preset is required"),
        };
        let mut overrides = self.overrides.clone();
        if let Some(seed) = self.seed {
            overrides.push(format!("seed={seed}"));
        }
        if let Some(paths) = self.paths {
            match paths_key {
                Some(key) => overrides.push(format!("{key}={paths}")),
                None => bail!("--paths does not apply to this command"),
            }
        }
        if let Some(eps) = self.epsilon {
            overrides.push(format!("solver.shell_epsilon={eps:?}"));
        }
        config::load(source)?.with_overrides(&overrides)
    }
}

fn run_command(command: &Command) -> Result<ExitCode> {
    let (common, paths_key) = match command {
        Command::Presets => {
            for (name, commands, _) in presets::PRESETS {
                println!("{name}\t{}", commands.join(","));
            }
            return Ok(ExitCode::SUCCESS);
        }
        Command::CheckGeometry(c) => (c, Some("geometry.samples")),
        Command::Constants(c) | Command::Perron(c) | Command::ShowConfig(c) => (c, None),
        Command::Solve(c) => (c, Some("solve.paths")),
        Command::Profile(c) => (c, Some("profile.paths_per_point")),
        Command::Certify { common, .. } => (common, Some("profile.paths_per_point")),
    };
    let cfg = common.resolve(paths_key)?;
    let stamp = Stamp { seed: cfg.seed, config_hash: cfg.hash()? };
    let work = || -> Result<commands::Rendered> {
        match command {
            Command::CheckGeometry(_) => commands::check_geometry(&cfg, &stamp),
            Command::Constants(_) => commands::constants(&cfg, &stamp),
            Command::Solve(_) => commands::solve(&cfg, &stamp),
            Command::Profile(_) => commands::profile(&cfg, &stamp),
            Command::Certify { from_profile, .. } => commands::certify(&cfg, &stamp, from_profile.as_deref()),
            Command::Perron(_) => commands::perron(&cfg, &stamp),
            Command::ShowConfig(_) => Ok(commands::Rendered {
                text: format!("# config_hash={}\n{}", stamp.config_hash, cfg.canonical()?),
                success: true,
            }),
            Command::Presets => unreachable!("handled above"),
        }
    };
    let rendered = match common.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .context("building the worker pool")?
            .install(work)?,
        None => work()?,
    };
    match &common.out {
        Some(path) => std::fs::write(path, &rendered.text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", rendered.text),
    }
    let strict = matches!(command, Command::Certify { strict: true, .. });
    Ok(if strict && !rendered.success { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_command(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
