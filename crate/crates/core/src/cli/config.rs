//! Layered run configuration.
//!
//! Every field has a default. A TOML file may override the defaults, the
//! environment overrides the file, and command-line flags override both.
//!
//! ```toml
//! cache_dir = ".drcalc-cache"
//! cache = true
//! jobs = 4
//! strict = false
//! series_order = 20
//! qbar_order = 4
//! seed = 1
//!
//! [oracle]
//! validation_r = 2
//! max_escalations = 3
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::drinvariant::cache::{CACHE_ENV, DEFAULT_CACHE_DIR};
use crate::drinvariant::OracleParams;
use crate::error::{Error, Result};

pub const JOBS_ENV: &str = "DRCALC_JOBS";
pub const CONFIG_ENV: &str = "DRCALC_CONFIG";
pub const DEFAULT_CONFIG_FILE: &str = "drcalc.toml";

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    /// Default `./.drcalc-cache`.
    pub cache_dir: PathBuf,
    /// Whether evaluators read and write the disk cache. Default on.
    pub cache: bool,
    /// Worker threads; `None` lets the pool pick one per core.
    pub jobs: Option<usize>,
    /// Treat report-only outcomes as failures. Default off.
    pub strict: bool,
    /// Series order for the scalar identities. Default 20.
    pub series_order: u32,
    /// Order for the generating-function congruence. Default 4.
    pub qbar_order: u32,
    /// Oracle sampling: extra validation samples and range doublings.
    pub oracle: OracleParams,
    /// Seed for sampled cache verification. Default 1.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cache_dir: PathBuf::from(DEFAULT_CACHE_DIR),
            cache: true,
            jobs: None,
            strict: false,
            series_order: 20,
            qbar_order: 4,
            oracle: OracleParams::default(),
            seed: 1,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FileConfig {
    cache_dir: Option<PathBuf>,
    cache: Option<bool>,
    jobs: Option<usize>,
    strict: Option<bool>,
    series_order: Option<u32>,
    qbar_order: Option<u32>,
    seed: Option<u64>,
    oracle: FileOracle,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FileOracle {
    validation_r: Option<usize>,
    max_escalations: Option<u32>,
}

/// Overrides coming from command-line flags.
#[derive(Clone, Debug, Default)]
pub struct FlagOverrides {
    pub config: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub no_cache: bool,
    pub jobs: Option<usize>,
    pub strict: bool,
}

impl Config {
    /// Resolves the configuration; `env` looks up environment variables.
    pub fn resolve(flags: &FlagOverrides, env: impl Fn(&str) -> Option<String>) -> Result<Config> {
        let mut cfg = Config::default();

        let file = match (&flags.config, env(CONFIG_ENV)) {
            (Some(p), _) => Some(p.clone()),
            (None, Some(p)) => Some(PathBuf::from(p)),
            (None, None) => Some(PathBuf::from(DEFAULT_CONFIG_FILE)).filter(|p| p.exists()),
        };
        if let Some(path) = file {
            cfg.apply_file(&path)?;
        }

        if let Some(dir) = env(CACHE_ENV).filter(|s| !s.is_empty()) {
            cfg.cache_dir = PathBuf::from(dir);
        }
        if let Some(j) = env(JOBS_ENV).filter(|s| !s.is_empty()) {
            cfg.jobs = Some(parse_jobs(&j)?);
        }

        if let Some(dir) = &flags.cache_dir {
            cfg.cache_dir = dir.clone();
        }
        if flags.no_cache {
            cfg.cache = false;
        }
        if let Some(j) = flags.jobs {
            cfg.jobs = Some(j);
        }
        if flags.strict {
            cfg.strict = true;
        }
        if cfg.jobs == Some(0) {
            return Err(Error::Parse("jobs must be positive".into()));
        }
        Ok(cfg)
    }

    fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        let f: FileConfig = toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        if let Some(v) = f.cache_dir {
            self.cache_dir = v;
        }
        if let Some(v) = f.cache {
            self.cache = v;
        }
        if let Some(v) = f.jobs {
            self.jobs = Some(v);
        }
        if let Some(v) = f.strict {
            self.strict = v;
        }
        if let Some(v) = f.series_order {
            self.series_order = v;
        }
        if let Some(v) = f.qbar_order {
            self.qbar_order = v;
        }
        if let Some(v) = f.seed {
            self.seed = v;
        }
        if let Some(v) = f.oracle.validation_r {
            self.oracle.validation_r = v;
        }
        if let Some(v) = f.oracle.max_escalations {
            self.oracle.max_escalations = v;
        }
        Ok(())
    }
}

fn parse_jobs(s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Parse(format!("{JOBS_ENV}={s:?} is not a thread count")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn env_of(pairs: &[(&str, &str)]) -> impl Fn(&str) -> Option<String> {
        let m: HashMap<String, String> = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        move |k| m.get(k).cloned()
    }

    #[test]
    fn flags_beat_env_beat_file() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("c.toml");
        std::fs::write(&file, "cache_dir = \"from-file\"\njobs = 3\nseries_order = 8\n[oracle]\nvalidation_r = 5\n")
            .unwrap();

        let flags = FlagOverrides { config: Some(file.clone()), ..Default::default() };
        let cfg = Config::resolve(&flags, env_of(&[])).unwrap();
        assert_eq!(cfg.cache_dir, PathBuf::from("from-file"));
        assert_eq!(cfg.jobs, Some(3));
        assert_eq!(cfg.series_order, 8);
        assert_eq!(cfg.oracle.validation_r, 5);
        assert_eq!(cfg.oracle.max_escalations, OracleParams::default().max_escalations);

        let env = env_of(&[(CACHE_ENV, "from-env"), (JOBS_ENV, "2")]);
        let cfg = Config::resolve(&flags, &env).unwrap();
        assert_eq!(cfg.cache_dir, PathBuf::from("from-env"));
        assert_eq!(cfg.jobs, Some(2));

        let flags = FlagOverrides { cache_dir: Some("from-flag".into()), jobs: Some(1), ..flags };
        let cfg = Config::resolve(&flags, &env).unwrap();
        assert_eq!(cfg.cache_dir, PathBuf::from("from-flag"));
        assert_eq!(cfg.jobs, Some(1));
    }

    #[test]
    fn config_file_from_env_and_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("c.toml");
        std::fs::write(&file, "strict = true\n").unwrap();
        let cfg = Config::resolve(&FlagOverrides::default(), env_of(&[(CONFIG_ENV, file.to_str().unwrap())])).unwrap();
        assert!(cfg.strict);
        assert_eq!(cfg.series_order, 20);
        assert!(cfg.cache);
    }

    #[test]
    fn rejects_bad_input() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("c.toml");
        std::fs::write(&file, "colour = \"blue\"\n").unwrap();
        let flags = FlagOverrides { config: Some(file), ..Default::default() };
        assert!(matches!(Config::resolve(&flags, env_of(&[])), Err(Error::Parse(_))));
        assert!(Config::resolve(&FlagOverrides::default(), env_of(&[(JOBS_ENV, "many")])).is_err());
        assert!(Config::resolve(&FlagOverrides { jobs: Some(0), ..Default::default() }, env_of(&[])).is_err());
    }
}
