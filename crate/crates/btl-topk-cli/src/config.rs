//! `key = value` config files: UTF-8 text, `#` comments, comma-separated
//! lists. Every diagnostic carries the file path and line number.

use std::collections::HashSet;
use std::path::Path;

use crate::{CliError, CliResult};

/// A parsed config file: ordered `(line, key, value)` triples plus the
/// path for diagnostics. Values are kept raw; typed accessors parse on
/// demand and report the offending line.
#[derive(Debug, Clone)]
pub struct ConfigFile {
    path: String,
    entries: Vec<(usize, String, String)>,
}

impl ConfigFile {
    /// Reads and parses a config file. Syntax errors (a non-comment line
    /// without `=`) and duplicate keys are format errors.
    pub fn load(path: &Path) -> CliResult<ConfigFile> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
        Self::parse(&path.display().to_string(), &text)
    }

    /// Parses config text (exposed for tests).
    pub fn parse(path: &str, text: &str) -> CliResult<ConfigFile> {
        let mut entries: Vec<(usize, String, String)> = Vec::new();
        let mut seen: HashSet<String> = HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Format(format!(
                    "{path}:{line_no}: expected `key = value`, got `{line}`"
                )));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(CliError::Format(format!("{path}:{line_no}: empty key")));
            }
            if !seen.insert(key.clone()) {
                return Err(CliError::Format(format!(
                    "{path}:{line_no}: duplicate key `{key}`"
                )));
            }
            entries.push((line_no, key, value));
        }
        Ok(ConfigFile { path: path.to_string(), entries })
    }

    fn find(&self, key: &str) -> Option<(usize, &str)> {
        self.entries
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(line, _, v)| (*line, v.as_str()))
    }

    fn err(&self, line: usize, key: &str, msg: &str) -> CliError {
        CliError::Format(format!("{}:{line}: key `{key}`: {msg}", self.path))
    }

    /// Rejects keys outside the allowed set, naming the first offender.
    pub fn ensure_known_keys(&self, allowed: &[&str]) -> CliResult<()> {
        for (line, key, _) in &self.entries {
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::Format(format!(
                    "{}:{line}: unknown key `{key}` (expected one of: {})",
                    self.path,
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    /// Raw string value, if present.
    pub fn get_str(&self, key: &str) -> Option<String> {
        self.find(key).map(|(_, v)| v.to_string())
    }

    pub fn get_u64(&self, key: &str) -> CliResult<Option<u64>> {
        match self.find(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<u64>()
                .map(Some)
                .map_err(|_| self.err(line, key, &format!("invalid integer `{v}`"))),
        }
    }

    pub fn get_usize(&self, key: &str) -> CliResult<Option<usize>> {
        match self.find(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| self.err(line, key, &format!("invalid integer `{v}`"))),
        }
    }

    pub fn get_f64(&self, key: &str) -> CliResult<Option<f64>> {
        match self.find(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| self.err(line, key, &format!("invalid number `{v}`"))),
        }
    }

    pub fn get_bool(&self, key: &str) -> CliResult<Option<bool>> {
        match self.find(key) {
            None => Ok(None),
            Some((line, v)) => match v {
                "true" => Ok(Some(true)),
                "false" => Ok(Some(false)),
                _ => Err(self.err(line, key, &format!("expected true/false, got `{v}`"))),
            },
        }
    }

    /// Comma-separated list of numbers. An empty value parses as an empty
    /// list (used for optional sweep axes).
    pub fn get_f64_list(&self, key: &str) -> CliResult<Option<Vec<f64>>> {
        self.get_list(key, |v| v.parse::<f64>().ok(), "number")
    }

    pub fn get_u64_list(&self, key: &str) -> CliResult<Option<Vec<u64>>> {
        self.get_list(key, |v| v.parse::<u64>().ok(), "integer")
    }

    pub fn get_usize_list(&self, key: &str) -> CliResult<Option<Vec<usize>>> {
        self.get_list(key, |v| v.parse::<usize>().ok(), "integer")
    }

    /// Comma-separated list of strings (whitespace-trimmed, empties dropped).
    pub fn get_str_list(&self, key: &str) -> Option<Vec<String>> {
        self.find(key).map(|(_, v)| {
            v.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect()
        })
    }

    fn get_list<T>(
        &self,
        key: &str,
        parse: impl Fn(&str) -> Option<T>,
        kind: &str,
    ) -> CliResult<Option<Vec<T>>> {
        match self.find(key) {
            None => Ok(None),
            Some((line, v)) => {
                let mut out = Vec::new();
                for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    match parse(item) {
                        Some(x) => out.push(x),
                        None => {
                            return Err(
                                self.err(line, key, &format!("invalid {kind} `{item}` in list"))
                            )
                        }
                    }
                }
                Ok(Some(out))
            }
        }
    }

    /// The file path used in diagnostics.
    pub fn path(&self) -> &str {
        &self.path
    }
}
