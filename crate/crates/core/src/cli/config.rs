use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fock::Exponent;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    FockVerify,
    DiskVerify,
    Atomic,
    RigidityScan,
    RigidityRecover,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::FockVerify, Suite::DiskVerify, Suite::Atomic, Suite::RigidityScan, Suite::RigidityRecover];

    pub fn name(self) -> &'static str {
        match self {
            Suite::FockVerify => "fock-verify",
            Suite::DiskVerify => "disk-verify",
            Suite::Atomic => "atomic",
            Suite::RigidityScan => "rigidity-scan",
            Suite::RigidityRecover => "rigidity-recover",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

pub const DEFAULT_ALPHA: f64 = 1.0;
pub const DEFAULT_CAP: usize = 40;
pub const DEFAULT_SEED: u64 = 7;
pub const MIN_CAP: usize = 16;
pub const MAX_CAP: usize = 200;

/// Fully resolved settings for one suite run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub suite: Suite,
    pub alpha: f64,
    pub p: Exponent,
    pub degree_cap: usize,
    /// Lattice spacing for `atomic`; `0.5√(π/α)` when unset.
    pub delta: Option<f64>,
    /// Lattice radius for `atomic`; the per-degree radius rule when unset.
    pub radius: Option<f64>,
    pub seed: u64,
    pub tol_overrides: BTreeMap<String, f64>,
    pub output_path: Option<PathBuf>,
    pub csv_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(suite: Suite) -> Self {
        RunConfig {
            suite,
            alpha: DEFAULT_ALPHA,
            p: Exponent::Finite(2.0),
            degree_cap: DEFAULT_CAP,
            delta: None,
            radius: None,
            seed: DEFAULT_SEED,
            tol_overrides: BTreeMap::new(),
            output_path: None,
            csv_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0 && self.alpha <= 16.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 16], got {}", self.alpha)));
        }
        if let Exponent::Finite(p) = self.p {
            if !(p >= 1.0) {
                return Err(Error::Config(format!("p must be >= 1 or inf, got {p}")));
            }
        }
        if !(MIN_CAP..=MAX_CAP).contains(&self.degree_cap) {
            return Err(Error::Config(format!(
                "degree_cap must lie in {MIN_CAP}..={MAX_CAP}, got {}",
                self.degree_cap
            )));
        }
        for (name, v) in [("delta", self.delta), ("radius", self.radius)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::Config(format!("{name} must be positive, got {v}")));
                }
            }
        }
        for (name, tol) in &self.tol_overrides {
            if !(tol.is_finite() && *tol >= 0.0) {
                return Err(Error::Config(format!("tolerance override {name} must be finite and >= 0, got {tol}")));
            }
        }
        Ok(())
    }
}

/// Exponent as written in a config file: a number or `"inf"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ExponentValue {
    Number(f64),
    Text(String),
}

/// Keys accepted in a config file; all optional, unknown keys rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    suite: Option<Suite>,
    alpha: Option<f64>,
    p: Option<ExponentValue>,
    degree_cap: Option<usize>,
    delta: Option<f64>,
    radius: Option<f64>,
    seed: Option<u64>,
    #[serde(default)]
    tol_overrides: BTreeMap<String, f64>,
    output_path: Option<PathBuf>,
    csv_path: Option<PathBuf>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Values given on the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub suite: Option<Suite>,
    pub alpha: Option<f64>,
    pub p: Option<Exponent>,
    pub degree_cap: Option<usize>,
    pub delta: Option<f64>,
    pub radius: Option<f64>,
    pub seed: Option<u64>,
    pub tol_overrides: BTreeMap<String, f64>,
    pub output_path: Option<PathBuf>,
    pub csv_path: Option<PathBuf>,
}

/// Merges flag > file > default and validates the result.
pub fn resolve(flags: Overrides, file: FileConfig) -> Result<RunConfig> {
    let suite = flags
        .suite
        .or(file.suite)
        .ok_or_else(|| Error::Config("no suite given (positional argument or `suite` key)".into()))?;
    let file_p = match file.p {
        None => None,
        Some(ExponentValue::Number(p)) => Some(Exponent::new(p).map_err(|e| Error::Config(e.to_string()))?),
        Some(ExponentValue::Text(s)) => Some(s.parse::<Exponent>().map_err(|e| Error::Config(e.to_string()))?),
    };
    let defaults = RunConfig::new(suite);
    let mut tol_overrides = file.tol_overrides;
    tol_overrides.extend(flags.tol_overrides);
    let config = RunConfig {
        suite,
        alpha: flags.alpha.or(file.alpha).unwrap_or(defaults.alpha),
        p: flags.p.or(file_p).unwrap_or(defaults.p),
        degree_cap: flags.degree_cap.or(file.degree_cap).unwrap_or(defaults.degree_cap),
        delta: flags.delta.or(file.delta),
        radius: flags.radius.or(file.radius),
        seed: flags.seed.or(file.seed).unwrap_or(defaults.seed),
        tol_overrides,
        output_path: flags.output_path.or(file.output_path),
        csv_path: flags.csv_path.or(file.csv_path),
    };
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_flag_file_default() {
        let file = FileConfig::parse("suite = \"atomic\"\nalpha = 2.0\nseed = 3\np = \"inf\"\n[tol_overrides]\n\"a.b\" = 0.5\n").unwrap();
        let flags = Overrides { alpha: Some(0.5), ..Default::default() };
        let c = resolve(flags, file).unwrap();
        assert_eq!(c.suite, Suite::Atomic);
        assert_eq!(c.alpha, 0.5);
        assert_eq!(c.seed, 3);
        assert_eq!(c.p, Exponent::Infinity);
        assert_eq!(c.degree_cap, DEFAULT_CAP);
        assert_eq!(c.tol_overrides["a.b"], 0.5);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(FileConfig::parse("alpah = 1.0").is_err());
        let bad = FileConfig::parse("alpha = -1.0").unwrap();
        assert!(matches!(resolve(Overrides { suite: Some(Suite::FockVerify), ..Default::default() }, bad), Err(Error::Config(_))));
        assert!(resolve(Overrides::default(), FileConfig::default()).is_err());
        let cap = Overrides { suite: Some(Suite::Atomic), degree_cap: Some(4), ..Default::default() };
        assert!(resolve(cap, FileConfig::default()).is_err());
        assert!(FileConfig::parse("p = 1.5").is_ok());
        assert!(resolve(Overrides { suite: Some(Suite::Atomic), ..Default::default() }, FileConfig::parse("p = 0.5").unwrap()).is_err());
    }
}
