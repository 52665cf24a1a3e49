use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand as ClapSubcommand};
use dysthe::io::{coefficient_table, parse_config, run, RunConfig, Subcommand};

#[derive(Parser)]
#[command(name = "dysthe", version, about = "Dysthe-type envelope simulations and estimate runs")]
struct Cli {
    /// Log progress and wrap-around warnings.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration.
    config: PathBuf,
    /// Overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(ClapSubcommand)]
enum Command {
    /// Evolve the initial data and write snapshots and diagnostics.
    Simulate(RunArgs),
    /// Compare direct and transformed evolutions of the general dispersion.
    VerifyCov(RunArgs),
    /// Check that the flow commutes with the scaling map.
    VerifyScaling(RunArgs),
    /// Measure the linear Strichartz ratio.
    EstimateStrichartz(RunArgs),
    /// Monte-Carlo bilinear constants across high-frequency shells.
    EstimateBilinear(RunArgs),
    /// Pullback differences at dyadic times.
    Scattering(RunArgs),
    /// Kernel convolution against spectral propagation in one dimension.
    Airy1d(RunArgs),
    /// Print the surface-tension coefficient table.
    Coeffs {
        /// Values of kappa; ignored when a configuration is given.
        #[arg(long, value_delimiter = ',')]
        kappa: Vec<f64>,
        /// TOML run configuration with a `[coeffs]` section.
        config: Option<PathBuf>,
        /// Overrides `output.dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(args: &RunArgs) -> Result<RunConfig> {
    let text = fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let mut cfg = parse_config(&text).with_context(|| format!("parsing {}", args.config.display()))?;
    if let Some(dir) = &args.out {
        cfg.output.dir = dir.clone();
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn execute(sub: Subcommand, args: &RunArgs) -> Result<()> {
    let cfg = load(args)?;
    let report = run(sub, &cfg).with_context(|| format!("{sub} run in {}", cfg.output.dir.display()))?;
    for c in &report.checks {
        println!("check {}: {:e} <= {:e}", c.name, c.value, c.bound);
    }
    println!("{sub}: wrote {} artifacts to {}", report.artifacts.len(), report.dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { log::LevelFilter::Info } else { log::LevelFilter::Warn };
    env_logger::Builder::new().filter_level(level).init();
    let result = match &cli.command {
        Command::Simulate(a) => execute(Subcommand::Simulate, a),
        Command::VerifyCov(a) => execute(Subcommand::VerifyCov, a),
        Command::VerifyScaling(a) => execute(Subcommand::VerifyScaling, a),
        Command::EstimateStrichartz(a) => execute(Subcommand::EstimateStrichartz, a),
        Command::EstimateBilinear(a) => execute(Subcommand::EstimateBilinear, a),
        Command::Scattering(a) => execute(Subcommand::Scattering, a),
        Command::Airy1d(a) => execute(Subcommand::Airy1d, a),
        Command::Coeffs {
            kappa,
            config: Some(config),
            out,
        } if kappa.is_empty() => {
            let a = RunArgs {
                config: config.clone(),
                out: out.clone(),
                seed: None,
            };
            execute(Subcommand::Coeffs, &a).and_then(|_| {
                let path = load(&a)?.output.dir.join("coeffs.csv");
                print!("{}", fs::read_to_string(&path)?);
                Ok(())
            })
        }
        Command::Coeffs { kappa, .. } => coeffs(kappa),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn coeffs(kappa: &[f64]) -> Result<()> {
    if kappa.is_empty() {
        bail!("give --kappa values or a configuration with a [coeffs] section");
    }
    print!("{}", coefficient_table(kappa)?);
    Ok(())
}
