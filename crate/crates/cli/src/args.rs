use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sparse_gft::{LaplacianKind, SolverConfig};

#[derive(Debug, Parser)]
#[command(
    name = "sgft",
    version,
    about = "Sparse graph Fourier transform toolkit"
)]
pub struct Cli {
    /// Worker threads for the solver and scoring; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", content = "config", rename_all = "lowercase")]
pub enum Command {
    /// Write the Laplacian of a graph as a matrix CSV.
    Laplacian(LaplacianArgs),
    /// Compute a classic or sparse GFT basis.
    Gft(GftArgs),
    /// Generate the ten-source synthetic signal set.
    Synth(SynthArgs),
    /// Inject single-source spikes into a signal CSV and label them.
    Inject(InjectArgs),
    /// Fit detectors on training data and evaluate AUC on labeled test data.
    Detect(DetectArgs),
    /// Re-run a command from its manifest and check the outputs match.
    #[serde(skip)]
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Normalized,
    Unnormalized,
}

impl From<Kind> for LaplacianKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Normalized => LaplacianKind::Normalized,
            Kind::Unnormalized => LaplacianKind::Unnormalized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Classic,
    Sparse,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GraphArgs {
    /// Edge list CSV with rows `u,v,w` (0-based vertices).
    #[arg(long)]
    pub graph: PathBuf,
    /// Vertex count; defaults to one more than the largest index in the file.
    #[arg(long)]
    pub vertices: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SolverArgs {
    /// Number of components (default: all).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 1e-4)]
    pub ridge: f64,
    #[arg(long, default_value_t = 0.0)]
    pub lasso: f64,
    #[arg(long, default_value_t = 200)]
    pub outer_max_iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub outer_tol: f64,
    #[arg(long, default_value_t = 2000)]
    pub fista_max_iters: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub fista_tol: f64,
}

impl SolverArgs {
    pub fn config(&self) -> SolverConfig {
        SolverConfig {
            k: self.k,
            ridge: self.ridge,
            lasso: self.lasso,
            outer_max_iters: self.outer_max_iters,
            outer_tol: self.outer_tol,
            fista_max_iters: self.fista_max_iters,
            fista_tol: self.fista_tol,
            ..SolverConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct LaplacianArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value_t = Kind::Normalized)]
    pub kind: Kind,
    /// Output matrix CSV.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GftArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value_t = Kind::Normalized)]
    pub kind: Kind,
    #[arg(long, value_enum, default_value_t = Mode::Sparse)]
    pub mode: Mode,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Output basis JSON.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Number of observations.
    #[arg(short = 'n', long = "rows", default_value_t = 1000)]
    pub rows: usize,
    /// Output signal CSV.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct InjectArgs {
    /// Signal CSV to perturb.
    #[arg(long)]
    pub input: PathBuf,
    /// Signal CSV whose per-source std sets the spike size (default: the input).
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    /// Spike size in reference standard deviations.
    #[arg(long, default_value_t = 8.0)]
    pub magnitude: f64,
    /// Output labeled CSV.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DetectArgs {
    /// Clean training signal CSV.
    #[arg(long)]
    pub train: PathBuf,
    /// Labeled test CSV (final column `label`).
    #[arg(long)]
    pub test: PathBuf,
    /// Edge list CSV; when absent the correlation graph of the training data is used.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Correlation threshold for the automatic graph.
    #[arg(long, default_value_t = 0.3)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = Kind::Normalized)]
    pub kind: Kind,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = 0.5)]
    pub hf_quantile: f64,
    /// PCA baseline rank (default: p minus the high-frequency set size).
    #[arg(long)]
    pub pca_components: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Write outputs here instead of the recorded location.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Laplacian(_) => "laplacian",
            Command::Gft(_) => "gft",
            Command::Synth(_) => "synth",
            Command::Inject(_) => "inject",
            Command::Detect(_) => "detect",
            Command::Replay(_) => "replay",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Synth(a) => Some(a.seed),
            Command::Inject(a) => Some(a.seed),
            _ => None,
        }
    }

    pub fn out(&self) -> &Path {
        match self {
            Command::Laplacian(a) => &a.out,
            Command::Gft(a) => &a.out,
            Command::Synth(a) => &a.out,
            Command::Inject(a) => &a.out,
            Command::Detect(a) => &a.out,
            Command::Replay(a) => &a.manifest,
        }
    }

    pub fn set_out(&mut self, out: PathBuf) {
        match self {
            Command::Laplacian(a) => a.out = out,
            Command::Gft(a) => a.out = out,
            Command::Synth(a) => a.out = out,
            Command::Inject(a) => a.out = out,
            Command::Detect(a) => a.out = out,
            Command::Replay(a) => a.out = Some(out),
        }
    }

    /// Every path argument, for making them absolute before recording.
    pub fn paths_mut(&mut self) -> Vec<&mut PathBuf> {
        match self {
            Command::Laplacian(a) => vec![&mut a.graph.graph, &mut a.out],
            Command::Gft(a) => vec![&mut a.graph.graph, &mut a.out],
            Command::Synth(a) => vec![&mut a.out],
            Command::Inject(a) => {
                let mut v = vec![&mut a.input, &mut a.out];
                v.extend(a.reference.as_mut());
                v
            }
            Command::Detect(a) => {
                let mut v = vec![&mut a.train, &mut a.test, &mut a.out];
                v.extend(a.graph.as_mut());
                v
            }
            Command::Replay(a) => {
                let mut v = vec![&mut a.manifest];
                v.extend(a.out.as_mut());
                v
            }
        }
    }
}
