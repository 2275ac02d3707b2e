use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::commands::{run, verify, Command, Outcome, Settings};
use crate::error::{CliError, CliResult};
use crate::output::Format;
use crate::problem::{parse_spec, Overrides};

#[derive(Debug, Parser)]
#[command(name = "reebvol", version, about = "Exact volumes, jumping numbers and energies on affine toric varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Add k-digit decimal renderings next to exact values.
    #[arg(long, global = true, value_name = "K")]
    pub decimal: Option<usize>,
    /// Worker threads.
    #[arg(long, global = true, env = "REEBVOL_JOBS", value_name = "K")]
    pub jobs: Option<usize>,
    /// Relative tolerance for convergence verdicts, as a rational.
    #[arg(long, global = true, value_name = "RAT")]
    pub tolerance: Option<String>,
    /// Round jumping numbers up to integers.
    #[arg(long, global = true)]
    pub ceiling: bool,
    /// Replace the filtration by max(psi, 0).
    #[arg(long, global = true)]
    pub clamp: bool,
}

#[derive(Debug, Args)]
pub struct SpecArg {
    /// Problem specification (JSON file, or - for stdin).
    pub spec: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// vol(xi) by the closed form, by triangulation and on the Okounkov body.
    Volume(SpecArg),
    /// Derivative of the volume along -eta.
    Derivative(SpecArg),
    /// Jumping numbers of the truncation at level m.
    Jumping {
        #[arg(long)]
        m: u64,
        /// Print the distribution function of the scaled spectrum instead.
        #[arg(long)]
        cdf: bool,
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Truncated averages along a level grid.
    Converge {
        #[arg(long, value_delimiter = ',')]
        m_grid: Option<Vec<u64>>,
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Expected vanishing order and the slice energy.
    Energy(SpecArg),
    /// Per-degree averages for an integral Reeb field.
    Stilde {
        #[arg(long)]
        t_max: Option<u64>,
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Legendre transform of the homogenized filtration on the slice.
    Legendre {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        v: Vec<String>,
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Superlevel-volume profile of the homogenized filtration.
    Profile(SpecArg),
    /// Every route with cross-checking verdicts.
    Report {
        #[arg(long, value_delimiter = ',')]
        m_grid: Option<Vec<u64>>,
        #[arg(long)]
        t_max: Option<u64>,
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Recompute the verdicts of a stored JSON report.
    Verify {
        /// Output of `report --format json`.
        report: PathBuf,
    },
}

fn read_input(path: &Path) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
    }
}

fn dispatch(cli: Cli) -> CliResult<Outcome> {
    let tolerance = cli
        .tolerance
        .as_deref()
        .map(|t| t.parse().map_err(|_| CliError::Input(format!("--tolerance: cannot parse {t:?}"))))
        .transpose()?;
    let mut overrides = Overrides { ceiling: cli.ceiling, clamp: cli.clamp, tolerance, ..Overrides::default() };
    let (command, path) = match cli.command {
        Cmd::Verify { report } => {
            let settings = Settings { format: cli.format, decimal: cli.decimal, overrides };
            return verify(&read_input(&report)?, &settings);
        }
        Cmd::Volume(s) => (Command::Volume, s.spec),
        Cmd::Derivative(s) => (Command::Derivative, s.spec),
        Cmd::Jumping { m, cdf, spec } => (Command::Jumping { m, cdf }, spec.spec),
        Cmd::Converge { m_grid, spec } => {
            overrides.m_grid = m_grid;
            (Command::Converge, spec.spec)
        }
        Cmd::Energy(s) => (Command::Energy, s.spec),
        Cmd::Stilde { t_max, spec } => {
            overrides.t_max = t_max;
            (Command::Stilde, spec.spec)
        }
        Cmd::Legendre { v, spec } => (Command::Legendre { v }, spec.spec),
        Cmd::Profile(s) => (Command::Profile, s.spec),
        Cmd::Report { m_grid, t_max, spec } => {
            overrides.m_grid = m_grid;
            overrides.t_max = t_max;
            (Command::Report, spec.spec)
        }
    };
    let spec = parse_spec(&read_input(&path)?)?;
    let settings = Settings { format: cli.format, decimal: cli.decimal, overrides };
    run(&command, &spec, &settings)
}

/// Runs a parsed command line, inside a dedicated pool when `--jobs` is set.
/// Returns the text for stdout, the text for stderr and the exit code.
pub fn execute(cli: Cli) -> (String, String, i32) {
    let result = match cli.jobs {
        Some(0) => Err(CliError::Input("--jobs must be at least 1".into())),
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| dispatch(cli)),
            Err(e) => Err(CliError::Input(format!("cannot start {k} workers: {e}"))),
        },
        None => dispatch(cli),
    };
    match result {
        Ok(o) => (o.stdout, String::new(), o.exit),
        Err(e) => (String::new(), format!("error: {e}\n"), e.exit_code()),
    }
}
