//! Settings resolved from command-line flags, an optional `key = value`
//! file, and defaults, in that order of precedence.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::csvio::fmt_num;
use crate::CliError;

#[derive(Debug, Default)]
pub struct Settings {
    file: BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
}

impl Settings {
    pub fn from_file_text(text: &str) -> Result<Self, CliError> {
        let mut file = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Validation(format!("config line {} is not 'key = value'", n + 1)))?;
            file.insert(k.trim().replace('_', "-"), v.trim().to_string());
        }
        Ok(Self { file, resolved: BTreeMap::new() })
    }

    fn lookup<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.file.get(key) {
            None => Ok(None),
            Some(raw) => {
                raw.parse().map(Some).map_err(|_| CliError::Validation(format!("config value '{raw}' for {key} is invalid")))
            }
        }
    }

    pub fn f64(&mut self, key: &str, flag: Option<f64>, default: Option<f64>) -> Result<Option<f64>, CliError> {
        let v = match flag {
            Some(v) => Some(v),
            None => self.lookup(key)?.or(default),
        };
        if let Some(v) = v {
            self.resolved.insert(key.into(), fmt_num(v));
        }
        Ok(v)
    }

    pub fn usize(&mut self, key: &str, flag: Option<usize>, default: Option<usize>) -> Result<Option<usize>, CliError> {
        let v = match flag {
            Some(v) => Some(v),
            None => self.lookup(key)?.or(default),
        };
        if let Some(v) = v {
            self.resolved.insert(key.into(), v.to_string());
        }
        Ok(v)
    }

    pub fn string(&mut self, key: &str, flag: Option<String>, default: Option<&str>) -> Result<Option<String>, CliError> {
        let v = match flag {
            Some(v) => Some(v),
            None => self.lookup::<String>(key)?.or(default.map(str::to_string)),
        };
        if let Some(v) = &v {
            self.resolved.insert(key.into(), v.clone());
        }
        Ok(v)
    }

    /// Record a value that does not come from a flag, such as an input path.
    pub fn note(&mut self, key: &str, value: impl Into<String>) {
        self.resolved.insert(key.into(), value.into());
    }

    /// Resolved settings in key order, for output footers.
    pub fn echo(&self) -> Vec<(String, String)> {
        self.resolved.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }
}

/// `0.25,0.5` or `start:stop:step` (inclusive), or `default` for
/// `0.01, …, 0.99`.
pub fn parse_theta_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let s = s.trim();
    if s == "default" {
        return Ok(kleinian_spectra::formulas::default_theta_grid());
    }
    let bad = || CliError::Validation(format!("cannot read θ grid '{s}'"));
    if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
        let [a, b, h] = parts[..] else { return Err(bad()) };
        if !(h > 0.0) || b < a {
            return Err(bad());
        }
        let n = ((b - a) / h + 1e-9).floor() as usize;
        // round to the step's decimals so grids print cleanly
        return Ok((0..=n).map(|i| ((a + i as f64 * h) * 1e12).round() / 1e12).collect());
    }
    s.split(',').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beat_defaults() {
        let mut s = Settings::from_file_text("r-min = 1e-5\nr_max = 0.01 # comment\n").unwrap();
        assert_eq!(s.f64("r-min", Some(2e-5), Some(1e-6)).unwrap(), Some(2e-5));
        assert_eq!(s.f64("r-max", None, Some(0.1)).unwrap(), Some(0.01));
        assert_eq!(s.usize("scales-per-decade", None, Some(4)).unwrap(), Some(4));
        let echo = s.echo();
        assert_eq!(echo[0], ("r-max".to_string(), "0.01".to_string()));
    }

    #[test]
    fn theta_grids() {
        assert_eq!(parse_theta_grid("0.25,0.5").unwrap(), vec![0.25, 0.5]);
        assert_eq!(parse_theta_grid("0.05:0.95:0.05").unwrap().len(), 19);
        assert_eq!(parse_theta_grid("default").unwrap().len(), 99);
        assert!(parse_theta_grid("a,b").is_err());
    }
}
