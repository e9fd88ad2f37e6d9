//! Resolution of parameters: command-line flag, then config file, then
//! default. Every resolved value is recorded for the report.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Default)]
pub struct Resolver {
    file: BTreeMap<String, String>,
    resolved: Map<String, Value>,
}

impl Resolver {
    /// Reads `key = value` lines; `#` starts a comment.
    pub fn from_file(path: Option<&Path>) -> Result<Self, CliError> {
        let mut file = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::input(format!("config {}: {e}", path.display())))?;
            for (n, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    CliError::input(format!(
                        "config {} line {}: expected `key = value`",
                        path.display(),
                        n + 1
                    ))
                })?;
                file.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(Self {
            file,
            resolved: Map::new(),
        })
    }

    fn file_value<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        match self.file.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| CliError::input(format!("config key `{key}` = `{raw}`: {e}"))),
        }
    }

    fn record<T: Serialize>(&mut self, key: &str, v: &T) {
        self.resolved
            .insert(key.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    pub fn value<T: FromStr + Serialize>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T::Err: Display,
    {
        let v = match flag {
            Some(v) => v,
            None => self.file_value(key)?.unwrap_or(default),
        };
        self.record(key, &v);
        Ok(v)
    }

    pub fn optional<T: FromStr + Serialize>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        let v = match flag {
            Some(v) => Some(v),
            None => self.file_value(key)?,
        };
        if let Some(v) = &v {
            self.record(key, v);
        }
        Ok(v)
    }

    /// A comma-separated list of reals.
    pub fn reals(&mut self, key: &str, flag: Option<String>, default: &str) -> Result<Vec<f64>, CliError> {
        let raw = self.value(key, flag, default.to_string())?;
        parse_reals(key, &raw)
    }

    pub fn into_map(self) -> Map<String, Value> {
        self.resolved
    }
}

pub fn parse_reals(key: &str, raw: &str) -> Result<Vec<f64>, CliError> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::input(format!("`{key}`: `{}` is not a number", s.trim())))
        })
        .collect()
}

pub fn parse_usizes(key: &str, raw: &str) -> Result<Vec<usize>, CliError> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::input(format!("`{key}`: `{}` is not a non-negative integer", s.trim())))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn flag_beats_file_beats_default() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# sweep\nB = 0.2\nD = 0.1 # trailing").unwrap();
        let mut r = Resolver::from_file(Some(f.path())).unwrap();
        assert_eq!(r.value("B", None, 0.25).unwrap(), 0.2);
        assert_eq!(r.value("D", Some(0.3), 0.2).unwrap(), 0.3);
        assert_eq!(r.value("L", None, 1.0).unwrap(), 1.0);
        let m = r.into_map();
        assert_eq!(m["B"], 0.2);
        assert_eq!(m["L"], 1.0);
    }

    #[test]
    fn malformed_line_is_an_input_error() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "B 0.2").unwrap();
        assert_eq!(Resolver::from_file(Some(f.path())).err().unwrap().code, 2);
    }
}
