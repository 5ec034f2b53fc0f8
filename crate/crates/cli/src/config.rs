//! Run configuration: command-line flags, optional config-file defaults,
//! and the merge/validation step that turns them into concrete settings.
//!
//! Precedence is command line > config file > built-in defaults. All
//! validation failures are usage errors (exit 2) that name the offending
//! flag; angles are radians only.

use std::path::{Path, PathBuf};

use cavity_walk::{center_pair, ArrayModel, PsiFamily, TimeGrid};
use clap::ValueEnum;

use crate::Failure;

pub const DEFAULT_OMEGA: f64 = 1.0;
pub const DEFAULT_HOPPING: f64 = 0.1;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Raw command-line flags; every field optional so the config file can
/// fill gaps before defaults apply.
#[derive(Debug, Clone, clap::Args)]
pub struct Flags {
    /// Number of cavities N
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Cavity resonance frequency ω (radians per unit time)
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    /// Nearest-neighbour hopping strength J
    #[arg(long, global = true)]
    pub j: Option<f64>,
    /// First doubly occupied cavity (defaults to ⌊N/2⌋)
    #[arg(long, global = true)]
    pub r: Option<usize>,
    /// Second doubly occupied cavity (defaults to ⌊N/2⌋+1)
    #[arg(long, global = true)]
    pub s: Option<usize>,
    /// Mixing angle θ in radians
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    /// Relative phase φ in radians
    #[arg(long, global = true)]
    pub phi: Option<f64>,
    /// Evolution time
    #[arg(long, global = true)]
    pub t: Option<f64>,
    /// Scan horizon (defaults to 400/|J|)
    #[arg(long = "t-max", global = true)]
    pub t_max: Option<f64>,
    /// Scan step (defaults to 0.05/|J|)
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// Refine scan maxima with a golden-section search
    #[arg(long, global = true, value_name = "BOOL")]
    pub refine: Option<bool>,
    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Seed for the randomized verification suite
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Config file with one `key = value` pair per line (# comments);
    /// keys are the long flag names without dashes (e.g. tmax)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Fully merged settings. Fields without a spec'd default stay optional;
/// commands that need them raise a usage error naming the flag.
#[derive(Debug, Clone)]
pub struct Settings {
    pub n: Option<usize>,
    pub omega: f64,
    pub hopping: f64,
    pub r: Option<usize>,
    pub s: Option<usize>,
    pub theta: f64,
    pub phi: f64,
    pub t: Option<f64>,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    pub refine: bool,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub seed: u64,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure::Usage(message.into())
}

impl Settings {
    /// Merges flags over config-file values over defaults, then validates.
    pub fn resolve(flags: &Flags) -> Result<Self, Failure> {
        let file = match &flags.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let settings = Self {
            n: flags.n.or(file.n),
            omega: flags.omega.or(file.omega).unwrap_or(DEFAULT_OMEGA),
            hopping: flags.j.or(file.j).unwrap_or(DEFAULT_HOPPING),
            r: flags.r.or(file.r),
            s: flags.s.or(file.s),
            theta: flags.theta.or(file.theta).unwrap_or(0.0),
            phi: flags.phi.or(file.phi).unwrap_or(0.0),
            t: flags.t.or(file.t),
            t_max: flags.t_max.or(file.t_max),
            dt: flags.dt.or(file.dt),
            refine: flags.refine.or(file.refine).unwrap_or(true),
            out: flags.out.clone().or(file.out),
            format: flags.format.or(file.format).unwrap_or(OutputFormat::Csv),
            seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        };
        settings.validate()?;
        Ok(settings)
    }

    fn validate(&self) -> Result<(), Failure> {
        if self.n == Some(0) {
            return Err(usage("--n must be at least 1"));
        }
        if !self.omega.is_finite() {
            return Err(usage(format!("--omega must be finite, got {}", self.omega)));
        }
        if !self.hopping.is_finite() {
            return Err(usage(format!("--j must be finite, got {}", self.hopping)));
        }
        for (flag, value) in [("--theta", self.theta), ("--phi", self.phi)] {
            if !value.is_finite() {
                return Err(usage(format!("{flag} must be finite, got {value}")));
            }
        }
        if let Some(t) = self.t {
            if !t.is_finite() {
                return Err(usage(format!("--t must be finite, got {t}")));
            }
        }
        for (flag, value) in [("--t-max", self.t_max), ("--dt", self.dt)] {
            if let Some(v) = value {
                if !v.is_finite() || v <= 0.0 {
                    return Err(usage(format!("{flag} must be positive and finite, got {v}")));
                }
            }
        }
        for (flag, value) in [("--r", self.r), ("--s", self.s)] {
            if value == Some(0) {
                return Err(usage(format!("{flag} is a 1-based cavity label; 0 is invalid")));
            }
        }
        Ok(())
    }

    /// The chain model; `--n` is required.
    pub fn model(&self) -> Result<ArrayModel, Failure> {
        let n = self.n.ok_or_else(|| usage("missing required flag --n"))?;
        ArrayModel::new(n, self.omega, self.hopping).map_err(|e| usage(e.to_string()))
    }

    /// The evolution time; `--t` is required.
    pub fn time(&self) -> Result<f64, Failure> {
        self.t.ok_or_else(|| usage("missing required flag --t"))
    }

    /// The superposition family for an `n`-cavity chain: `--r`/`--s`
    /// default to the central pair.
    pub fn family(&self, n: usize) -> Result<PsiFamily, Failure> {
        let (r, s) = match (self.r, self.s) {
            (Some(r), Some(s)) => (r, s),
            (provided_r, provided_s) => {
                let (center_r, center_s) = center_pair(n).map_err(|_| {
                    usage("--n must be at least 2 to place photons on two distinct cavities")
                })?;
                (provided_r.unwrap_or(center_r), provided_s.unwrap_or(center_s))
            }
        };
        for (flag, value) in [("--r", r), ("--s", s)] {
            if value > n {
                return Err(usage(format!("{flag} = {value} exceeds --n = {n}")));
            }
        }
        if r == s {
            return Err(usage(format!("--r and --s must name distinct cavities, both are {r}")));
        }
        PsiFamily::new(r, s, self.theta, self.phi).map_err(|e| usage(e.to_string()))
    }

    /// A family for commands that only read (θ, φ) and never touch the
    /// chain (negativity): placeholder cavities 1 and 2.
    pub fn angle_family(&self) -> Result<PsiFamily, Failure> {
        PsiFamily::new(1, 2, self.theta, self.phi).map_err(|e| usage(e.to_string()))
    }

    /// Scan grid from `--t-max`/`--dt`/`--refine`, with J-scaled defaults.
    pub fn time_grid(&self) -> Result<TimeGrid, Failure> {
        if self.hopping == 0.0 && (self.t_max.is_none() || self.dt.is_none()) {
            return Err(usage(
                "--j = 0 has no natural time scale; pass --t-max and --dt explicitly",
            ));
        }
        let t_max = self.t_max.unwrap_or(400.0 / self.hopping.abs());
        let dt = self.dt.unwrap_or(0.05 / self.hopping.abs());
        TimeGrid::new(t_max, dt, self.refine)
            .map_err(|e| usage(format!("{e} (from --t-max / --dt)")))
    }
}

/// Values read from a `key = value` config file.
#[derive(Debug, Default)]
struct ConfigFile {
    n: Option<usize>,
    omega: Option<f64>,
    j: Option<f64>,
    r: Option<usize>,
    s: Option<usize>,
    theta: Option<f64>,
    phi: Option<f64>,
    t: Option<f64>,
    t_max: Option<f64>,
    dt: Option<f64>,
    refine: Option<bool>,
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
    seed: Option<u64>,
}

impl ConfigFile {
    fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            usage(format!("--config {}: {e}", path.display()))
        })?;
        let mut file = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                usage(format!(
                    "--config {}: line {} is not `key = value`: {raw:?}",
                    path.display(),
                    lineno + 1
                ))
            })?;
            file.set(key.trim(), value.trim())
                .map_err(|why| usage(format!("--config {}: line {}: {why}", path.display(), lineno + 1)))?;
        }
        Ok(file)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String>
        where
            T::Err: std::fmt::Display,
        {
            value.parse().map_err(|e| format!("bad value for {key}: {e}"))
        }
        match key {
            "n" => self.n = Some(parse(key, value)?),
            "omega" => self.omega = Some(parse(key, value)?),
            "j" => self.j = Some(parse(key, value)?),
            "r" => self.r = Some(parse(key, value)?),
            "s" => self.s = Some(parse(key, value)?),
            "theta" => self.theta = Some(parse(key, value)?),
            "phi" => self.phi = Some(parse(key, value)?),
            "t" => self.t = Some(parse(key, value)?),
            "tmax" => self.t_max = Some(parse(key, value)?),
            "dt" => self.dt = Some(parse(key, value)?),
            "refine" => self.refine = Some(parse(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => {
                self.format = Some(match value {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    other => return Err(format!("bad value for format: {other:?} (csv|json)")),
                })
            }
            "seed" => self.seed = Some(parse(key, value)?),
            other => return Err(format!("unknown key {other:?}")),
        }
        Ok(())
    }
}
