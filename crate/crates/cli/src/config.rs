//! JSON configurations, one top-level object per subcommand. Unknown fields
//! are rejected; relative paths resolve against the config file's directory.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use dynsamp::frames::{NRule, WindowAnchor};
use dynsamp::reconstruct::NoiseMode;
use dynsamp::sampling::{sublattice, SamplingPattern};
use dynsamp::{Complex64, Kernel, Signal};

use crate::CliError;

pub const DEFAULT_GRID: u64 = 1024;
pub const DEFAULT_REGULARITY_GRID: u64 = 4096;
pub const DEFAULT_RANK_TOL: f64 = dynsamp::spectral::DEFAULT_RANK_TOL;

fn default_grid() -> u64 {
    DEFAULT_GRID
}

fn default_regularity_grid() -> u64 {
    DEFAULT_REGULARITY_GRID
}

fn default_rank_tol() -> f64 {
    DEFAULT_RANK_TOL
}

fn default_mode() -> NoiseMode {
    NoiseMode::Complex
}

fn default_l_values() -> Vec<u64> {
    vec![8, 16, 32, 64]
}

fn default_n_rule() -> NRule {
    NRule::Dim
}

fn default_anchor() -> WindowAnchor {
    WindowAnchor::Trailing
}

/// A signal read from a file or drawn uniformly from `[-1, 1)` (real and,
/// when `complex`, imaginary parts) with ChaCha20.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalSpec {
    File(PathBuf),
    Random {
        seed: u64,
        #[serde(default)]
        start: i64,
        width: usize,
        #[serde(default)]
        complex: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PatternSpec {
    /// `mℤ + {0, …, L-1}`.
    Sublattice { m: u64, l: u64 },
    /// `mℤ + offsets`.
    Periodic { m: u64, offsets: Vec<u64> },
    /// A pattern file.
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub sigma: f64,
    pub seed: u64,
    #[serde(default = "default_mode")]
    pub mode: NoiseMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub kernel: PathBuf,
    pub signal: SignalSpec,
    pub steps: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub kernel: PathBuf,
    pub signal: SignalSpec,
    pub pattern: PatternSpec,
    pub n_steps: u32,
    /// Inclusive sample window; defaults to the smallest covering window.
    #[serde(default)]
    pub window: Option<[i64; 2]>,
    #[serde(default)]
    pub noise: Option<NoiseConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructConfig {
    pub kernel: PathBuf,
    pub samples: PathBuf,
    pub pattern: PatternSpec,
    /// Inclusive index range of the unknown signal.
    pub signal_window: [i64; 2],
    /// Inclusive sample window; defaults to the span of the sample file.
    #[serde(default)]
    pub window: Option<[i64; 2]>,
    #[serde(default = "default_rank_tol")]
    pub rank_tol: f64,
    /// Ground truth for the reported relative error.
    #[serde(default)]
    pub truth: Option<SignalSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnoseConfig {
    pub kernel: PathBuf,
    pub m: u64,
    pub l: u64,
    pub n_steps: u32,
    #[serde(default = "default_grid")]
    pub grid: u64,
    #[serde(default = "default_rank_tol")]
    pub rank_tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundsSpec {
    /// Sub-lattice `mℤ` with `N = m`, from the per-frequency systems.
    Analytic {
        m: u64,
        #[serde(default = "default_grid")]
        grid: u64,
    },
    /// Analysis matrix of an arbitrary pattern on a finite window.
    Empirical {
        pattern: PatternSpec,
        n_steps: u32,
        window: [i64; 2],
        #[serde(default)]
        interior_margin: Option<u64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameBoundsConfig {
    pub kernel: PathBuf,
    pub bounds: BoundsSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityConfig {
    pub kernel: PathBuf,
    pub pattern: PatternSpec,
    pub n_steps: u32,
    /// Window of the empirical frame bounds and of explicit-pattern density
    /// estimates.
    pub window: [i64; 2],
    #[serde(default)]
    pub interior_margin: Option<u64>,
    /// Grid certifying the symbol envelope.
    #[serde(default = "default_regularity_grid")]
    pub grid: u64,
    #[serde(default = "default_l_values")]
    pub l_values: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSweepConfig {
    pub kernel: PathBuf,
    pub signal: SignalSpec,
    pub m: u64,
    pub l: u64,
    pub n_steps: u32,
    pub sigmas: Vec<f64>,
    pub trials: u32,
    pub seed: u64,
    #[serde(default = "default_mode")]
    pub mode: NoiseMode,
    #[serde(default = "default_grid")]
    pub grid: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayConfig {
    pub kernel: PathBuf,
    pub locations: Vec<i64>,
    pub dims: Vec<u64>,
    #[serde(default = "default_n_rule")]
    pub n_rule: NRule,
    #[serde(default = "default_anchor")]
    pub anchor: WindowAnchor,
}

/// A parsed configuration together with its raw bytes and location.
pub struct Loaded<T> {
    pub config: T,
    pub bytes: Vec<u8>,
    pub dir: PathBuf,
}

/// Parses a JSON config from raw bytes.
pub fn parse<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Config(e.to_string()))
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<Loaded<T>, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))?;
    let config = parse(&bytes).map_err(|e| CliError::Config(format!("config {}: {}", path.display(), e.message())))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(Loaded { config, bytes, dir })
}

impl<T> Loaded<T> {
    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.dir.join(p)
        }
    }

    fn read_text(&self, field: &str, p: &Path) -> Result<(String, PathBuf), CliError> {
        let full = self.resolve(p);
        let text = std::fs::read_to_string(&full)
            .map_err(|e| CliError::Config(format!("{field}: {}: {e}", full.display())))?;
        Ok((text, full))
    }

    /// Kernel and the SHA-256 of the kernel file's bytes.
    pub fn kernel(&self, field: &str, p: &Path) -> Result<(Kernel, String), CliError> {
        let (text, full) = self.read_text(field, p)?;
        let kernel = dynsamp::io::read_kernel_csv(&text)
            .map_err(|e| CliError::Config(format!("{field}: {}: {e}", full.display())))?;
        Ok((kernel, crate::output::sha256_hex(text.as_bytes())))
    }

    pub fn signal(&self, field: &str, spec: &SignalSpec) -> Result<Signal, CliError> {
        match spec {
            SignalSpec::File(p) => {
                let (text, full) = self.read_text(field, p)?;
                dynsamp::io::read_signal_csv(&text).map_err(|e| CliError::Config(format!("{field}: {}: {e}", full.display())))
            }
            SignalSpec::Random {
                seed,
                start,
                width,
                complex,
            } => {
                if *width == 0 {
                    return Err(CliError::Config(format!("{field}.random.width must be >= 1")));
                }
                Ok(random_signal(*seed, *start, *width, *complex))
            }
        }
    }

    pub fn pattern(&self, field: &str, spec: &PatternSpec) -> Result<SamplingPattern, CliError> {
        let bad = |e: dynsamp::Error| CliError::Config(format!("{field}: {e}"));
        match spec {
            PatternSpec::Sublattice { m, l } => sublattice(*m, *l).map_err(bad),
            PatternSpec::Periodic { m, offsets } => SamplingPattern::periodic(*m, offsets.clone()).map_err(bad),
            PatternSpec::File(p) => {
                let (text, full) = self.read_text(field, p)?;
                dynsamp::io::read_pattern(&text).map_err(|e| CliError::Config(format!("{field}: {}: {e}", full.display())))
            }
        }
    }
}

pub fn random_signal(seed: u64, start: i64, width: usize, complex: bool) -> Signal {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let values = (0..width)
        .map(|_| {
            let re = rng.random_range(-1.0..1.0);
            let im = if complex { rng.random_range(-1.0..1.0) } else { 0.0 };
            Complex64::new(re, im)
        })
        .collect();
    Signal::new(start, values)
}

/// Seeds named in a signal spec.
pub fn signal_seed(spec: &SignalSpec) -> Option<u64> {
    match spec {
        SignalSpec::Random { seed, .. } => Some(*seed),
        SignalSpec::File(_) => None,
    }
}
