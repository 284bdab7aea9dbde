//! Run configuration: flags over a `key=value` file over defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use rsmoments::radicals::DEFAULT_BUDGET;

use crate::error::CliError;

pub const CACHE_ENV: &str = "RSMOMENTS_CACHE";
/// Prefix of embedded configuration lines in reports.
pub const EMBED_PREFIX: &str = "# config.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Text => "text",
        })
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(format!("format must be csv or text, got {other:?}")),
        }
    }
}

/// Values that may come from flags or a config file. `None` means unset.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub n: Option<usize>,
    pub cache: Option<PathBuf>,
    pub kappa: Option<u32>,
    pub a: Option<f64>,
    pub z0: Option<f64>,
    pub threads: Option<usize>,
    pub budget: Option<u128>,
    pub format: Option<Format>,
}

impl Settings {
    /// Fills every unset field from `lower`.
    pub fn or(self, lower: Settings) -> Settings {
        Settings {
            n: self.n.or(lower.n),
            cache: self.cache.or(lower.cache),
            kappa: self.kappa.or(lower.kappa),
            a: self.a.or(lower.a),
            z0: self.z0.or(lower.z0),
            threads: self.threads.or(lower.threads),
            budget: self.budget.or(lower.budget),
            format: self.format.or(lower.format),
        }
    }

    /// Parses `key=value` lines. Blank lines and `#` comments are skipped,
    /// except `# config.key=value`, which is read as `key=value` so that a
    /// report can be fed back as a config file. Files that contain embedded
    /// lines are treated as reports and their other lines are ignored.
    pub fn parse(text: &str, path: &Path) -> Result<Settings, CliError> {
        let report = text.lines().any(|l| l.starts_with(EMBED_PREFIX));
        let mut kv: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let body = if let Some(rest) = line.strip_prefix(EMBED_PREFIX) {
                rest
            } else if line.is_empty() || line.starts_with('#') || report {
                continue;
            } else {
                line
            };
            let (k, v) = body.split_once('=').ok_or_else(|| CliError::Config {
                path: path.to_path_buf(),
                line: i + 1,
                msg: format!("expected key=value, got {line:?}"),
            })?;
            kv.insert(k.trim().to_string(), (i + 1, v.trim().to_string()));
        }
        let mut s = Settings::default();
        for (key, (line, value)) in kv {
            let bad = |msg: String| CliError::Config {
                path: path.to_path_buf(),
                line,
                msg: format!("{key}: {msg}"),
            };
            match key.as_str() {
                "n" => s.n = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
                "cache" => s.cache = Some(PathBuf::from(value)),
                "kappa" => s.kappa = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
                "a" => s.a = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
                "z0" => s.z0 = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
                "threads" => s.threads = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
                "budget" => s.budget = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
                "format" => s.format = Some(value.parse().map_err(bad)?),
                _ => return Err(bad("unknown key".into())),
            }
        }
        Ok(s)
    }
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Coefficient bound; `None` picks the largest cached table.
    pub n: Option<usize>,
    pub cache: PathBuf,
    pub kappa: u32,
    pub a: Option<f64>,
    pub z0: Option<f64>,
    pub threads: Option<usize>,
    pub budget: u128,
    pub format: Format,
}

impl RunConfig {
    /// Flags win over the file, the file over `RSMOMENTS_CACHE`, and that
    /// over the built-in defaults.
    pub fn resolve(flags: Settings, file: Option<Settings>) -> Result<Self, CliError> {
        let s = flags.or(file.unwrap_or_default());
        if s.a.is_some() != s.z0.is_some() {
            return Err(CliError::Usage(
                "--a and --z0 must be given together".into(),
            ));
        }
        if s.threads == Some(0) {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        let cache = s
            .cache
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        Ok(RunConfig {
            n: s.n,
            cache,
            kappa: s.kappa.unwrap_or(12),
            a: s.a,
            z0: s.z0,
            threads: s.threads,
            budget: s.budget.unwrap_or(DEFAULT_BUDGET),
            format: s.format.unwrap_or(Format::Csv),
        })
    }

    /// `# config.key=value` lines, in a fixed order. `n` is the value in
    /// effect for the run.
    pub fn embed(&self, n: Option<usize>) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(n) = n.or(self.n) {
            out.push(format!("n={n}"));
        }
        out.push(format!("cache={}", self.cache.display()));
        out.push(format!("kappa={}", self.kappa));
        if let (Some(a), Some(z0)) = (self.a, self.z0) {
            out.push(format!("a={a:?}"));
            out.push(format!("z0={z0:?}"));
        }
        if let Some(t) = self.threads {
            out.push(format!("threads={t}"));
        }
        out.push(format!("budget={}", self.budget));
        out.push(format!("format={}", self.format));
        out.into_iter()
            .map(|l| format!("{EMBED_PREFIX}{l}"))
            .collect()
    }

    pub fn cache_file(&self, n: usize) -> PathBuf {
        self.cache.join(format!("tau_k{}_n{n}.csv", self.kappa))
    }

    pub fn sidecar_file(&self, n: usize) -> PathBuf {
        self.cache
            .join(format!("calibration_k{}_n{n}.txt", self.kappa))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file =
            Settings::parse("n=100\nkappa=12\n# note\nformat=text\n", Path::new("f")).unwrap();
        let flags = Settings {
            n: Some(50),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(flags, Some(file)).unwrap();
        assert_eq!(cfg.n, Some(50));
        assert_eq!(cfg.format, Format::Text);
    }

    #[test]
    fn embedded_lines_parse_back() {
        let cfg = RunConfig::resolve(
            Settings {
                n: Some(1000),
                cache: Some(PathBuf::from("/tmp/c")),
                a: Some(0.5),
                z0: Some(-0.25),
                ..Default::default()
            },
            None,
        )
        .unwrap();
        let mut text = cfg.embed(None).join("\n");
        text.push_str("\nk,T1\n2,1000.0\n");
        let back = RunConfig::resolve(
            Settings::default(),
            Some(Settings::parse(&text, Path::new("r")).unwrap()),
        )
        .unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn bad_lines_report_position() {
        let err = Settings::parse("n=1\nbogus\n", Path::new("cfg")).unwrap_err();
        assert!(err.to_string().contains("cfg:2"), "{err}");
        assert!(Settings::parse("colour=red\n", Path::new("cfg")).is_err());
    }
}
