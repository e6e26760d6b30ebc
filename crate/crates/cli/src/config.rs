use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

pub const CACHE_ENV: &str = "LADDERLAB_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Effective run settings: defaults, then the config file, then the
/// environment, then flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sieve_limit: u64,
    pub zeta_range: f64,
    pub rel_tol: f64,
    pub cache_dir: PathBuf,
    pub output_format: OutputFormat,
    /// 0 picks the number of available cores.
    pub thread_count: usize,
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            sieve_limit: 100_000_000,
            zeta_range: 1e7,
            rel_tol: 1e-6,
            cache_dir: PathBuf::from("ladderlab-cache"),
            output_format: OutputFormat::Csv,
            thread_count: 0,
            timing: true,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    sieve_limit: Option<f64>,
    zeta_range: Option<f64>,
    rel_tol: Option<f64>,
    cache_dir: Option<PathBuf>,
    output_format: Option<OutputFormat>,
    thread_count: Option<usize>,
    timing: Option<bool>,
}

/// Flag values; `None` leaves the lower layers in place.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub sieve_limit: Option<f64>,
    pub zeta_range: Option<f64>,
    pub rel_tol: Option<f64>,
    pub cache_dir: Option<PathBuf>,
    pub output_format: Option<OutputFormat>,
    pub thread_count: Option<usize>,
    pub no_timing: bool,
}

fn as_limit(v: f64) -> Result<u64, CliError> {
    if !(v >= 2.0) || v.fract() != 0.0 || v > 1.8e19 {
        return Err(CliError::usage(format!("sieve limit must be an integer >= 2, got {v}")));
    }
    Ok(v as u64)
}

impl RunConfig {
    pub fn resolve(file: Option<&Path>, env_cache: Option<PathBuf>, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
            let f: FileConfig = toml::from_str(&text)
                .map_err(|e| CliError::usage(format!("bad config {}: {e}", path.display())))?;
            if let Some(v) = f.sieve_limit {
                cfg.sieve_limit = as_limit(v)?;
            }
            cfg.zeta_range = f.zeta_range.unwrap_or(cfg.zeta_range);
            cfg.rel_tol = f.rel_tol.unwrap_or(cfg.rel_tol);
            cfg.cache_dir = f.cache_dir.unwrap_or(cfg.cache_dir);
            cfg.output_format = f.output_format.unwrap_or(cfg.output_format);
            cfg.thread_count = f.thread_count.unwrap_or(cfg.thread_count);
            cfg.timing = f.timing.unwrap_or(cfg.timing);
        }
        if let Some(dir) = env_cache {
            cfg.cache_dir = dir;
        }
        if let Some(v) = flags.sieve_limit {
            cfg.sieve_limit = as_limit(v)?;
        }
        cfg.zeta_range = flags.zeta_range.unwrap_or(cfg.zeta_range);
        cfg.rel_tol = flags.rel_tol.unwrap_or(cfg.rel_tol);
        if let Some(dir) = &flags.cache_dir {
            cfg.cache_dir = dir.clone();
        }
        cfg.output_format = flags.output_format.unwrap_or(cfg.output_format);
        cfg.thread_count = flags.thread_count.unwrap_or(cfg.thread_count);
        if flags.no_timing {
            cfg.timing = false;
        }
        Ok(cfg)
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let format = match self.output_format {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        };
        write!(
            f,
            "sieve_limit={} zeta_range={} rel_tol={} cache_dir={} output_format={} thread_count={} timing={}",
            self.sieve_limit,
            self.zeta_range,
            self.rel_tol,
            self.cache_dir.display(),
            format,
            self.thread_count,
            self.timing
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layers_apply_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("lab.toml");
        std::fs::write(&file, "sieve_limit = 1e6\nrel_tol = 1e-7\ncache_dir = \"from-file\"\n").unwrap();
        let flags = Overrides { rel_tol: Some(1e-8), ..Default::default() };
        let cfg = RunConfig::resolve(Some(&file), Some("from-env".into()), &flags).unwrap();
        assert_eq!(cfg.sieve_limit, 1_000_000);
        assert_eq!(cfg.rel_tol, 1e-8);
        assert_eq!(cfg.cache_dir, PathBuf::from("from-env"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("lab.toml");
        std::fs::write(&file, "sieve = 3\n").unwrap();
        assert!(RunConfig::resolve(Some(&file), None, &Overrides::default()).is_err());
    }
}
