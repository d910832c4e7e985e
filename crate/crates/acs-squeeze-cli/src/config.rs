//! `key=value` config files: one pair per line, `#` starts a comment,
//! blank lines ignored. Every key must be consumed by the subcommand that
//! loaded the file; leftovers are reported as unknown keys (exit 2).

use crate::{CliError, CliResult};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Default)]
pub struct ConfigMap {
    entries: BTreeMap<String, String>,
}

impl ConfigMap {
    /// Loads `path` when given; an absent path yields an empty map so
    /// subcommands can resolve flags uniformly.
    pub fn load(path: &Option<PathBuf>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError(format!("cannot read config '{}': {e}", path.display())))?;
        Self::parse(&text, path)
    }

    fn parse(text: &str, path: &Path) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError(format!(
                    "config '{}' line {}: expected key=value",
                    path.display(),
                    lineno + 1
                ))
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(CliError(format!(
                    "config '{}' line {}: empty key",
                    path.display(),
                    lineno + 1
                )));
            }
            if entries.insert(key.clone(), value).is_some() {
                return Err(CliError(format!(
                    "config '{}' line {}: duplicate key '{}'",
                    path.display(),
                    lineno + 1,
                    key
                )));
            }
        }
        Ok(Self { entries })
    }

    /// Removes and parses one key; `Ok(None)` when absent.
    pub fn take<T: FromStr>(&mut self, key: &str, type_name: &str) -> CliResult<Option<T>> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some(value) => value.parse().map(Some).map_err(|_| {
                CliError(format!(
                    "config key '{key}': cannot parse '{value}' as {type_name}"
                ))
            }),
        }
    }

    pub fn take_f64(&mut self, key: &str) -> CliResult<Option<f64>> {
        self.take(key, "a number")
    }

    pub fn take_i64(&mut self, key: &str) -> CliResult<Option<i64>> {
        self.take(key, "an integer")
    }

    pub fn take_u64(&mut self, key: &str) -> CliResult<Option<u64>> {
        self.take(key, "a non-negative integer")
    }

    pub fn take_usize(&mut self, key: &str) -> CliResult<Option<usize>> {
        self.take(key, "a non-negative integer")
    }

    pub fn take_bool(&mut self, key: &str) -> CliResult<Option<bool>> {
        self.take(key, "true or false")
    }

    pub fn take_string(&mut self, key: &str) -> CliResult<Option<String>> {
        Ok(self.entries.remove(key))
    }

    pub fn take_path(&mut self, key: &str) -> CliResult<Option<PathBuf>> {
        Ok(self.entries.remove(key).map(PathBuf::from))
    }

    /// Fails if any key was never consumed (i.e. is not a parameter of the
    /// subcommand that loaded the file).
    pub fn finish(self) -> CliResult<()> {
        if self.entries.is_empty() {
            return Ok(());
        }
        let keys: Vec<&str> = self.entries.keys().map(String::as_str).collect();
        Err(CliError(format!(
            "unknown config key(s): {}",
            keys.join(", ")
        )))
    }
}

/// Lists the parameters that are still unset after merging flags and config,
/// as a single-line diagnostic naming each missing key.
pub fn require_all(missing: &[(&str, bool)]) -> CliResult<()> {
    let names: Vec<&str> = missing
        .iter()
        .filter(|(_, present)| !present)
        .map(|(name, _)| *name)
        .collect();
    if names.is_empty() {
        return Ok(());
    }
    Err(CliError(format!(
        "missing required parameter(s): {} (set via flags or a config file)",
        names.join(", ")
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_blanks_and_pairs() {
        let text = "# header\n\n two_j = 4  # trailing\nmetric=sorensen-x\n";
        let mut map = ConfigMap::parse(text, Path::new("t.cfg")).unwrap();
        assert_eq!(map.take_i64("two_j").unwrap(), Some(4));
        assert_eq!(
            map.take_string("metric").unwrap().as_deref(),
            Some("sorensen-x")
        );
        map.finish().unwrap();
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        let mut map = ConfigMap::parse("mystery = 1\n", Path::new("t.cfg")).unwrap();
        assert_eq!(map.take_i64("two_j").unwrap(), None);
        let err = map.finish().unwrap_err();
        assert!(err.0.contains("mystery"), "{}", err.0);

        let err = ConfigMap::parse("a=1\na=2\n", Path::new("t.cfg")).unwrap_err();
        assert!(err.0.contains("duplicate"), "{}", err.0);
    }

    #[test]
    fn rejects_bad_values_and_missing_equals() {
        let mut map = ConfigMap::parse("two_j = soup\n", Path::new("t.cfg")).unwrap();
        let err = map.take_i64("two_j").unwrap_err();
        assert!(err.0.contains("soup"), "{}", err.0);

        let err = ConfigMap::parse("just a line\n", Path::new("t.cfg")).unwrap_err();
        assert!(err.0.contains("key=value"), "{}", err.0);
    }

    #[test]
    fn names_missing_parameters() {
        let err = require_all(&[("two_j", true), ("theta1", false), ("phi", false)]).unwrap_err();
        assert!(
            err.0.contains("theta1") && err.0.contains("phi"),
            "{}",
            err.0
        );
        assert!(!err.0.contains("two_j"), "{}", err.0);
    }
}
