//! Runtime settings with layered resolution.
//!
//! Settings are resolved in three layers, later layers winning:
//!
//! 1. built-in defaults,
//! 2. an optional `key=value` configuration file,
//! 3. command-line flags.
//!
//! The configuration file is located by, in order: the `--config` flag (the
//! file must then exist), the `QRICCATI_CONFIG` environment variable (ditto),
//! or `./qriccati.conf`, which is skipped silently when absent.  The file
//! format is one `key=value` pair per line; blank lines and lines starting
//! with `#` are ignored.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Output encoding for command results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    /// One compact JSON object per run (the default).
    Json,
    /// Tab-separated lines suitable for plotting tools.
    Table,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutputFormat::Json => write!(f, "json"),
            OutputFormat::Table => write!(f, "table"),
        }
    }
}

/// Fully resolved runtime settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    /// Target relative accuracy for numeric evaluation.
    pub eps: f64,
    /// Relative guard distance around poles of the special functions.
    pub pole_guard: f64,
    /// Degree bound for rational-solution searches.
    pub degree_bound: usize,
    /// Orbit depth for orbit-based commands.
    pub depth: usize,
    /// Output encoding.
    pub output: OutputFormat,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            eps: 1e-12,
            pole_guard: 1e-9,
            degree_bound: 6,
            depth: 30,
            output: OutputFormat::Json,
        }
    }
}

/// Values carried by the global command-line flags; `None` means the flag
/// was not given and the lower layers decide.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub eps: Option<f64>,
    pub pole_guard: Option<f64>,
    pub degree_bound: Option<usize>,
    pub depth: Option<usize>,
    pub output: Option<String>,
}

fn parse_positive(key: &str, raw: &str) -> Result<f64, CliError> {
    let value: f64 = raw
        .parse()
        .map_err(|_| CliError::Usage(format!("{key} must be a number, got '{raw}'")))?;
    if !value.is_finite() || value <= 0.0 {
        return Err(CliError::Usage(format!(
            "{key} must be a positive finite number, got '{raw}'"
        )));
    }
    Ok(value)
}

fn parse_count(key: &str, raw: &str) -> Result<usize, CliError> {
    raw.parse()
        .map_err(|_| CliError::Usage(format!("{key} must be a non-negative integer, got '{raw}'")))
}

fn parse_output(raw: &str) -> Result<OutputFormat, CliError> {
    match raw {
        "json" => Ok(OutputFormat::Json),
        "table" => Ok(OutputFormat::Table),
        other => Err(CliError::Usage(format!(
            "output must be 'json' or 'table', got '{other}'"
        ))),
    }
}

fn apply_file(settings: &mut Settings, path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path).map_err(|err| {
        CliError::Usage(format!(
            "cannot read configuration file {}: {err}",
            path.display()
        ))
    })?;
    for (index, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "{}:{}: expected key=value, got '{line}'",
                path.display(),
                index + 1
            )));
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "eps" => settings.eps = parse_positive("eps", value)?,
            "pole_guard" => settings.pole_guard = parse_positive("pole_guard", value)?,
            "degree_bound" => settings.degree_bound = parse_count("degree_bound", value)?,
            "depth" => settings.depth = parse_count("depth", value)?,
            "output" => settings.output = parse_output(value)?,
            other => {
                return Err(CliError::Usage(format!(
                    "{}:{}: unknown configuration key '{other}'",
                    path.display(),
                    index + 1
                )));
            }
        }
    }
    Ok(())
}

fn validate_flag_number(key: &str, value: f64) -> Result<f64, CliError> {
    if !value.is_finite() || value <= 0.0 {
        return Err(CliError::Usage(format!(
            "{key} must be a positive finite number, got {value}"
        )));
    }
    Ok(value)
}

/// Resolve the effective settings from defaults, the configuration file (if
/// any) and the command-line overrides.
pub fn resolve(overrides: &Overrides) -> Result<Settings, CliError> {
    let mut settings = Settings::default();

    let file = if let Some(path) = &overrides.config {
        if !path.exists() {
            return Err(CliError::Usage(format!(
                "configuration file {} does not exist",
                path.display()
            )));
        }
        Some(path.clone())
    } else if let Some(env_path) = std::env::var_os("QRICCATI_CONFIG") {
        if env_path.is_empty() {
            None
        } else {
            let path = PathBuf::from(env_path);
            if !path.exists() {
                return Err(CliError::Usage(format!(
                    "QRICCATI_CONFIG points at {}, which does not exist",
                    path.display()
                )));
            }
            Some(path)
        }
    } else {
        let default = PathBuf::from("qriccati.conf");
        default.exists().then_some(default)
    };
    if let Some(path) = file {
        apply_file(&mut settings, &path)?;
    }

    if let Some(eps) = overrides.eps {
        settings.eps = validate_flag_number("--eps", eps)?;
    }
    if let Some(guard) = overrides.pole_guard {
        settings.pole_guard = validate_flag_number("--pole-guard", guard)?;
    }
    if let Some(bound) = overrides.degree_bound {
        settings.degree_bound = bound;
    }
    if let Some(depth) = overrides.depth {
        settings.depth = depth;
    }
    if let Some(output) = &overrides.output {
        settings.output = parse_output(output)?;
    }
    Ok(settings)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_sane() {
        let settings = Settings::default();
        assert_eq!(settings.eps, 1e-12);
        assert_eq!(settings.pole_guard, 1e-9);
        assert_eq!(settings.degree_bound, 6);
        assert_eq!(settings.depth, 30);
        assert_eq!(settings.output, OutputFormat::Json);
    }

    #[test]
    fn file_layer_applies_and_flags_win() {
        let dir = std::env::temp_dir().join("qriccati-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("layered.conf");
        std::fs::write(&path, "# comment\n\neps = 1e-6\ndepth=12\noutput=table\n").unwrap();
        let overrides = Overrides {
            config: Some(path.clone()),
            depth: Some(40),
            ..Overrides::default()
        };
        let settings = resolve(&overrides).unwrap();
        assert_eq!(settings.eps, 1e-6);
        assert_eq!(settings.depth, 40, "flag outranks file");
        assert_eq!(settings.output, OutputFormat::Table);
        std::fs::remove_file(path).unwrap();
    }

    #[test]
    fn unknown_keys_and_malformed_lines_are_usage_errors() {
        let dir = std::env::temp_dir().join("qriccati-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        for (name, body, needle) in [
            ("unknown.conf", "granularity=3\n", "unknown configuration key"),
            ("malformed.conf", "eps\n", "expected key=value"),
            ("badvalue.conf", "eps=tiny\n", "must be a number"),
            ("negative.conf", "pole_guard=-1\n", "positive finite"),
        ] {
            let path = dir.join(name);
            std::fs::write(&path, body).unwrap();
            let overrides = Overrides {
                config: Some(path.clone()),
                ..Overrides::default()
            };
            let err = resolve(&overrides).unwrap_err();
            assert!(
                matches!(&err, CliError::Usage(msg) if msg.contains(needle)),
                "{name}: unexpected error {err}"
            );
            std::fs::remove_file(path).unwrap();
        }
    }

    #[test]
    fn missing_explicit_config_is_a_usage_error() {
        let overrides = Overrides {
            config: Some(PathBuf::from("/nonexistent/qriccati.conf")),
            ..Overrides::default()
        };
        assert!(matches!(resolve(&overrides), Err(CliError::Usage(_))));
    }
}
