use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{FileConfig, Overrides, Settings};
use crate::error::Result;
use crate::experiments::{self, Experiment};
use crate::output;

#[derive(Debug, Parser)]
#[command(name = "multipath", version, about = "Multi-path interference, decoherence and coherence tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Visibility against one-path knowledge, one table per n.
    Fig2,
    /// Coherence against one-path knowledge, one table per n.
    Fig3,
    /// Screen patterns with decoherence on the last path (Neon defaults).
    Fig4,
    /// Visibility and coherence against t/τ_d, one table per n.
    Fig5,
    /// Channel intensity over one period of the phase θ.
    Scan,
    /// Screen density ρ(x, x, t) for one bath setting.
    Screen,
    /// Coherence decay law and the pairwise protocol against t/τ_d.
    Decay,
}

impl From<Command> for Experiment {
    fn from(c: Command) -> Self {
        match c {
            Command::Fig2 => Self::Fig2,
            Command::Fig3 => Self::Fig3,
            Command::Fig4 => Self::Fig4,
            Command::Fig5 => Self::Fig5,
            Command::Scan => Self::Scan,
            Command::Screen => Self::Screen,
            Command::Decay => Self::Decay,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Path count, or a comma-separated list for fig2/fig3/fig5/decay.
    #[arg(long, global = true, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Detector overlap β of the last path, in [0, 1].
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// 1-based path carrying the π phase; 0 for none.
    #[arg(long, global = true)]
    pub pi_path: Option<usize>,
    /// Samples per phase scan, or screen positions per pattern.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Grid points for β or time sweeps.
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// t/τ_d value(s), comma-separated.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub t_over_tau: Option<Vec<f64>>,
    /// Friction rate γ in 1/s (screen only; replaces --t-over-tau).
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Screen model: selective, fraunhofer or exact.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write a matplotlib script next to the data.
    #[arg(long, global = true)]
    pub emit_plot_script: bool,
}

impl Flags {
    pub fn settings(&self) -> Result<Settings> {
        let file = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Settings::resolve(
            file,
            Overrides {
                n: self.n.clone(),
                beta: self.beta,
                pi_path: self.pi_path,
                samples: self.samples,
                points: self.points,
                t_over_tau: self.t_over_tau.clone(),
                gamma: self.gamma,
                model: self.model.clone(),
                format: self.format.clone(),
                out: self.out.clone(),
                emit_plot_script: self.emit_plot_script,
            },
        )
    }
}

/// Runs one subcommand end to end and returns the files written.
pub fn execute(cli: &Cli) -> Result<Vec<PathBuf>> {
    let settings = cli.flags.settings()?;
    let run = experiments::run(cli.command.into(), &settings)?;
    output::write_run(&run, &settings.out, settings.format, settings.emit_plot_script)
}
