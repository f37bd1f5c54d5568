//! Run configuration: defaults, command-line flags, then an optional JSON
//! file on top. Everything is validated before any computation starts.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use gsb_core::polar::OVERFLOW_GUARD;
use gsb_core::{GroupSpec, QuadSpec};
use serde::Deserialize;

pub const MAX_CUTOFF: usize = 64;
pub const MAX_N: u32 = 8;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Sobolev shift: `auto` picks the context default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CPolicy {
    Auto,
    Fixed(f64),
}

impl std::str::FromStr for CPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(CPolicy::Auto);
        }
        s.parse::<f64>()
            .map(CPolicy::Fixed)
            .map_err(|_| format!("c must be 'auto' or a number, got '{s}'"))
    }
}

impl<'de> Deserialize<'de> for CPolicy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Name(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(CPolicy::Fixed(v)),
            Raw::Name(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Flags shared by every subcommand; each mirrors a `RunConfig` field.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Group: `torus:<rank>` or `su2`
    #[arg(long)]
    pub group: Option<String>,
    /// Comma-separated list of times
    #[arg(long, value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    /// Sobolev shift: a number or `auto`
    #[arg(long)]
    pub c: Option<CPolicy>,
    /// Comma-separated Sobolev orders
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,
    /// Highest order tabulated by `report smoothness`
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Irrep cutoff for test bases
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Quadrature levels over the Lie algebra
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<usize>>,
    /// Grid or truncation radii
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    /// Lattice scales for `report lattice`
    #[arg(long, value_delimiter = ',')]
    pub tau: Option<Vec<f64>>,
    /// Pass tolerance overriding the suite default
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Seed for sampled points
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file whose keys override the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Keys accepted in a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    group: Option<String>,
    t: Option<Vec<f64>>,
    c: Option<CPolicy>,
    n: Option<Vec<u32>>,
    n_max: Option<u32>,
    cutoff: Option<usize>,
    levels: Option<Vec<usize>>,
    radii: Option<Vec<f64>>,
    tau: Option<Vec<f64>>,
    tolerance: Option<f64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub group: GroupSpec,
    pub t: Vec<f64>,
    pub c: CPolicy,
    pub n: Vec<u32>,
    pub n_max: u32,
    pub cutoff: usize,
    pub levels: Option<Vec<usize>>,
    pub radii: Option<Vec<f64>>,
    pub tau: Vec<f64>,
    pub tolerance: Option<f64>,
    pub seed: u64,
    pub out: PathBuf,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            group: GroupSpec::torus(1),
            t: vec![1.0],
            c: CPolicy::Auto,
            n: vec![1, 2],
            n_max: 4,
            cutoff: 4,
            levels: None,
            radii: None,
            tau: vec![1.0, 4.0, 16.0, 64.0, 256.0],
            tolerance: None,
            seed: 20240,
            out: PathBuf::from("gsb-out"),
            format: Format::Csv,
        }
    }
}

fn parse_group(s: &str) -> Result<GroupSpec, ConfigError> {
    s.parse::<GroupSpec>().map_err(|e| ConfigError(e.to_string()))
}

impl RunConfig {
    /// Defaults, then flags, then the config file.
    pub fn resolve(args: &CommonArgs) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        cfg.apply_flags(args)?;
        if let Some(path) = &args.config {
            cfg.apply_file(path)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_flags(&mut self, a: &CommonArgs) -> Result<(), ConfigError> {
        if let Some(g) = &a.group {
            self.group = parse_group(g)?;
        }
        self.merge(
            a.t.clone(),
            a.c,
            a.n.clone(),
            a.n_max,
            a.cutoff,
            a.levels.clone(),
            a.radii.clone(),
            a.tau.clone(),
            a.tolerance,
            a.seed,
            a.out.clone(),
            a.format,
        );
        Ok(())
    }

    fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        let f: ConfigFile = serde_json::from_str(&text)
            .map_err(|e| ConfigError(format!("invalid config {}: {e}", path.display())))?;
        if let Some(g) = &f.group {
            self.group = parse_group(g)?;
        }
        self.merge(
            f.t, f.c, f.n, f.n_max, f.cutoff, f.levels, f.radii, f.tau, f.tolerance, f.seed, f.out, f.format,
        );
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn merge(
        &mut self,
        t: Option<Vec<f64>>,
        c: Option<CPolicy>,
        n: Option<Vec<u32>>,
        n_max: Option<u32>,
        cutoff: Option<usize>,
        levels: Option<Vec<usize>>,
        radii: Option<Vec<f64>>,
        tau: Option<Vec<f64>>,
        tolerance: Option<f64>,
        seed: Option<u64>,
        out: Option<PathBuf>,
        format: Option<Format>,
    ) {
        if let Some(v) = t {
            self.t = v;
        }
        if let Some(v) = c {
            self.c = v;
        }
        if let Some(v) = n {
            self.n = v;
        }
        if let Some(v) = n_max {
            self.n_max = v;
        }
        if let Some(v) = cutoff {
            self.cutoff = v;
        }
        if levels.is_some() {
            self.levels = levels;
        }
        if radii.is_some() {
            self.radii = radii;
        }
        if let Some(v) = tau {
            self.tau = v;
        }
        if tolerance.is_some() {
            self.tolerance = tolerance;
        }
        if let Some(v) = seed {
            self.seed = v;
        }
        if let Some(v) = out {
            self.out = v;
        }
        if let Some(v) = format {
            self.format = v;
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.t.is_empty() || self.t.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return err("t must be a nonempty list of positive numbers");
        }
        if let CPolicy::Fixed(c) = self.c {
            if !(c > 0.0 && c.is_finite()) {
                return err("c must be positive");
            }
        }
        if self.n.is_empty() || self.n.iter().any(|n| *n > MAX_N) || self.n_max > MAX_N {
            return err(format!("n must be a nonempty list of integers in 0..={MAX_N}"));
        }
        if self.cutoff == 0 || self.cutoff > MAX_CUTOFF {
            return err(format!("cutoff must lie in 1..={MAX_CUTOFF}"));
        }
        if let Some(r) = &self.radii {
            if r.is_empty() || r.iter().any(|v| !(*v > 0.0) || *v > OVERFLOW_GUARD) {
                return err(format!("radii must lie in (0, {OVERFLOW_GUARD}]"));
            }
            if r.windows(2).any(|w| w[1] <= w[0]) {
                return err("radii must be increasing");
            }
        }
        if self.tau.is_empty() || self.tau.iter().any(|v| !(*v > 0.0)) || self.tau.windows(2).any(|w| w[1] <= w[0]) {
            return err("tau must be a strictly increasing list of positive numbers");
        }
        if let Some(tol) = self.tolerance {
            if !(tol > 0.0) {
                return err("tolerance must be positive");
            }
        }
        self.kspace_quad().validate().map_err(|e| ConfigError(e.to_string()))?;
        Ok(())
    }

    /// Quadrature over the Lie algebra with any level override applied.
    pub fn kspace_quad(&self) -> QuadSpec {
        let q = QuadSpec::kspace(self.group);
        match &self.levels {
            Some(l) => q.with_levels(l.clone()),
            None => q,
        }
    }

    /// Shift used for kernel and Sobolev-norm work.
    pub fn kernel_c(&self) -> f64 {
        match self.c {
            CPolicy::Fixed(c) => c,
            CPolicy::Auto => self.group.delta_sq() + 1.0,
        }
    }

    pub fn group_tag(&self) -> String {
        self.group.to_string().replace(':', "")
    }
}
