//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Keys are the long
//! flag names with `-` or `_` (`quad-tol` and `quad_tol` are the same key).
//! A flag given on the command line overrides the file.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, Result};

/// Every key a config file may set.
pub const KEYS: &[&str] = &[
    "out",
    "seed",
    "threads",
    "quad_tol",
    // multiplier-plot
    "mu_min",
    "mu_max",
    "samples",
    // airy-check
    "h",
    // decay
    "curve",
    "l",
    "r_min_exp",
    "r_max_exp",
    // blocks, orthogonality
    "p",
    "delta",
    "jmin",
    "jmax",
    "symbol",
    "j",
    "k",
    "kp_min",
    "kp_max",
    // counterexample
    "terms",
    "kappa",
    "alpha_shift",
    "coefficients",
    // exponent
    "codim",
    // apply
    "operator",
    "field",
    "input",
    "n",
    "period",
];

fn normalize(key: &str) -> String {
    key.trim().replace('-', "_")
}

#[derive(Debug, Clone, Default)]
pub struct Settings {
    file: BTreeMap<String, String>,
    /// Resolved values, echoed into the manifest and `run.conf`.
    resolved: BTreeMap<String, String>,
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut file = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key = value", i + 1))
            })?;
            let k = normalize(k);
            if !KEYS.contains(&k.as_str()) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key {k:?}",
                    i + 1
                )));
            }
            file.insert(k, v.trim().to_string());
        }
        Ok(Settings {
            file,
            resolved: BTreeMap::new(),
        })
    }

    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Settings::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::Usage(format!("cannot read config {}: {e}", p.display()))
                })?;
                Self::parse(&text)
            }
        }
    }

    /// Flag value, else file value, else the default.
    pub fn get<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let v = match (flag, self.file.get(key)) {
            (Some(v), _) => v,
            (None, Some(s)) => s
                .parse()
                .map_err(|e| CliError::Usage(format!("config key {key}: {e}")))?,
            (None, None) => default,
        };
        self.resolved.insert(key.to_string(), v.to_string());
        Ok(v)
    }

    /// As `get`, for keys without a default.
    pub fn get_opt<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let v = match (flag, self.file.get(key)) {
            (Some(v), _) => Some(v),
            (None, Some(s)) => Some(
                s.parse()
                    .map_err(|e| CliError::Usage(format!("config key {key}: {e}")))?,
            ),
            (None, None) => None,
        };
        if let Some(v) = &v {
            self.resolved.insert(key.to_string(), v.to_string());
        }
        Ok(v)
    }

    pub fn resolved(&self) -> &BTreeMap<String, String> {
        &self.resolved
    }

    /// The resolved settings in config-file form.
    pub fn to_conf(&self) -> String {
        self.resolved
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let mut s = Settings::parse("# c\nquad-tol = 1e-9\nl = 0.25\n\n").unwrap();
        assert_eq!(s.get("quad_tol", None, 1e-11).unwrap(), 1e-9);
        assert_eq!(s.get("l", Some(0.0), 0.1).unwrap(), 0.0);
        assert_eq!(s.get("p", None, -0.5).unwrap(), -0.5);
        assert_eq!(s.get_opt::<String>("input", None).unwrap(), None);
        assert_eq!(s.to_conf(), "l = 0\np = -0.5\nquad_tol = 0.000000001\n");
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(
            Settings::parse("nonsense"),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            Settings::parse("colour = red"),
            Err(CliError::Usage(_))
        ));
        let mut s = Settings::parse("samples = many").unwrap();
        assert!(matches!(
            s.get("samples", None, 10usize),
            Err(CliError::Usage(_))
        ));
    }
}
