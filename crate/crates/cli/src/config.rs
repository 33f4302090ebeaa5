//! Flat `key = value` run files.
//!
//! One entry per line. Blank lines and lines starting with `#` are skipped, keys are
//! lowercase identifiers, values run to the end of the line with surrounding whitespace
//! trimmed. A key may appear only once. Command-line flags take precedence over the file.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

pub const KNOWN_KEYS: &[&str] = &[
    "seed", "output_dir", "p", "q", "c", "n_phase", "q_max", "q_list", "n", "m_steps", "k", "tau", "l",
    "mode", "potential", "count", "lambda", "n_max", "phi1", "phi2", "which", "element",
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}`: cannot parse `{value}`")]
    BadValue { key: String, value: String },
    #[error("missing required parameter `{0}` (pass it as a flag or in the config file)")]
    Missing(String),
}

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

fn valid_key(key: &str) -> bool {
    let mut chars = key.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let syntax = |msg: &str| ConfigError::Syntax { line: i + 1, msg: msg.to_string() };
            let (key, value) = line.split_once('=').ok_or_else(|| syntax("expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if !valid_key(key) {
                return Err(syntax(&format!("invalid key `{key}`")));
            }
            if !KNOWN_KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey(key.to_string()));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(syntax(&format!("duplicate key `{key}`")));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Read { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        self.entries
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| ConfigError::BadValue { key: key.to_string(), value: v.clone() })
            })
            .transpose()
    }

    /// Flag value, else file value, else `default`.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: Option<T>) -> Result<T, ConfigError> {
        match flag {
            Some(v) => Ok(v),
            None => self
                .get(key)?
                .or(default)
                .ok_or_else(|| ConfigError::Missing(key.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_whitespace() {
        let cfg = ConfigFile::parse("# run\n\n q = 34 \np=21\nc = 0.5\n").unwrap();
        assert_eq!(cfg.get::<i64>("q").unwrap(), Some(34));
        assert_eq!(cfg.get::<i64>("p").unwrap(), Some(21));
        assert_eq!(cfg.get::<f64>("c").unwrap(), Some(0.5));
        assert_eq!(cfg.get::<f64>("tau").unwrap(), None);
    }

    #[test]
    fn flags_override_file() {
        let cfg = ConfigFile::parse("q = 34").unwrap();
        assert_eq!(cfg.resolve(Some(5i64), "q", None).unwrap(), 5);
        assert_eq!(cfg.resolve(None::<i64>, "q", None).unwrap(), 34);
        assert_eq!(cfg.resolve(None::<i64>, "p", Some(1)).unwrap(), 1);
        assert!(matches!(cfg.resolve(None::<i64>, "p", None), Err(ConfigError::Missing(_))));
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(matches!(ConfigFile::parse("q 34"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(ConfigFile::parse("q = 1\nq = 2"), Err(ConfigError::Syntax { line: 2, .. })));
        assert!(matches!(ConfigFile::parse("colour = red"), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(ConfigFile::parse("Q = 3"), Err(ConfigError::Syntax { .. })));
        let cfg = ConfigFile::parse("q = many").unwrap();
        assert!(matches!(cfg.get::<i64>("q"), Err(ConfigError::BadValue { .. })));
    }
}
