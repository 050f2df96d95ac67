//! Flat key-value parameters: config file first, command-line flags on top.

use std::collections::BTreeMap;
use std::path::Path;

use super::CliError;

/// Parameter values by key, with the set of keys the command accepts.
#[derive(Debug, Clone, Default)]
pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    /// Merge a config file (if any) with flag values. `allowed` lists every
    /// key the command understands; unknown file keys are rejected.
    pub fn merge(
        file: Option<&Path>,
        flags: BTreeMap<String, String>,
        allowed: &[&str],
    ) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
            for (key, value) in parse_kv(&text)? {
                if !allowed.contains(&key.as_str()) {
                    return Err(CliError::Config(format!(
                        "unknown key `{key}` in {}",
                        path.display()
                    )));
                }
                values.insert(key, value);
            }
        }
        values.extend(flags);
        Ok(Params { values })
    }

    pub fn from_pairs(pairs: &[(&str, &str)]) -> Self {
        Params {
            values: pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => parse_f64(key, s),
        }
    }

    pub fn f64_req(&self, key: &str) -> Result<f64, CliError> {
        match self.raw(key) {
            None => Err(CliError::Config(format!("missing required parameter `{key}`"))),
            Some(s) => parse_f64(key, s),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("`{key}`: expected a non-negative integer, got `{s}`"))),
        }
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => match s.trim() {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => Err(CliError::Config(format!("`{key}`: expected true or false, got `{s}`"))),
            },
        }
    }

    pub fn sweep_or(&self, key: &str, default: &str) -> Result<Sweep, CliError> {
        Sweep::parse(key, self.raw(key).unwrap_or(default))
    }

    /// Integer list: comma-separated values or an integer range a:b.
    pub fn ints_or(&self, key: &str, default: &str) -> Result<Vec<i64>, CliError> {
        parse_ints(key, self.raw(key).unwrap_or(default))
    }
}

/// `key = value` lines; `#` starts a comment; blank lines ignored.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected `key = value`", i + 1)))?;
        let k = k.trim().replace('-', "_");
        if k.is_empty() {
            return Err(CliError::Config(format!("config line {}: empty key", i + 1)));
        }
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

fn parse_f64(key: &str, s: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("`{key}`: expected a number, got `{s}`")))?;
    if !v.is_finite() {
        return Err(CliError::Config(format!("`{key}`: must be finite, got `{s}`")));
    }
    Ok(v)
}

fn parse_ints(key: &str, s: &str) -> Result<Vec<i64>, CliError> {
    let bad = || CliError::Config(format!("`{key}`: expected integers like `0`, `-2,-1,1` or `-2:2`, got `{s}`"));
    if let Some((a, b)) = s.split_once(':') {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if b < a {
            return Err(CliError::Config(format!("`{key}`: empty range {a}:{b}")));
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Sampled parameter: a single value, a comma list, or
/// `start:stop:count[log|lin]` with endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub values: Vec<f64>,
    pub spacing: Spacing,
}

impl Sweep {
    pub fn parse(key: &str, s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        let parts: Vec<&str> = s.split(':').collect();
        match parts.len() {
            1 => {
                let values = s
                    .split(',')
                    .map(|p| parse_f64(key, p))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Sweep {
                    values,
                    spacing: Spacing::Linear,
                })
            }
            3 => {
                let start = parse_f64(key, parts[0])?;
                let stop = parse_f64(key, parts[1])?;
                let spec = parts[2].trim();
                let (num, spacing) = if let Some(n) = spec.strip_suffix("log") {
                    (n, Spacing::Log)
                } else if let Some(n) = spec.strip_suffix("lin") {
                    (n, Spacing::Linear)
                } else {
                    (spec, Spacing::Linear)
                };
                let count: i64 = num.trim().parse().map_err(|_| {
                    CliError::Config(format!("`{key}`: sweep count must be an integer, got `{num}`"))
                })?;
                if count < 1 {
                    return Err(CliError::Config(format!("`{key}`: sweep count must be >= 1, got {count}")));
                }
                if spacing == Spacing::Log && !(start > 0.0 && stop > 0.0) {
                    return Err(CliError::Config(format!(
                        "`{key}`: log sweep requires positive endpoints, got {start}:{stop}"
                    )));
                }
                Ok(Sweep {
                    values: sample(start, stop, count as usize, spacing),
                    spacing,
                })
            }
            _ => Err(CliError::Config(format!(
                "`{key}`: expected a value, a comma list or start:stop:count[log|lin], got `{s}`"
            ))),
        }
    }
}

fn sample(start: f64, stop: f64, count: usize, spacing: Spacing) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let n = (count - 1) as f64;
    (0..count)
        .map(|i| {
            let u = i as f64 / n;
            if i == 0 {
                return start;
            }
            if i + 1 == count {
                return stop;
            }
            match spacing {
                Spacing::Linear => start + (stop - start) * u,
                Spacing::Log => (start.ln() + (stop.ln() - start.ln()) * u).exp(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sweep_endpoints() {
        let s = Sweep::parse("kr0", "1e-2:1e-5:4log").unwrap();
        assert_eq!(s.values.len(), 4);
        assert_eq!(s.values[0], 1e-2);
        assert_eq!(s.values[3], 1e-5);
        assert!((s.values[1] - 1e-3).abs() < 1e-17);
    }

    #[test]
    fn sweep_errors_are_distinct() {
        let msg = |s: &str| match Sweep::parse("x", s) {
            Err(CliError::Config(m)) => m,
            other => panic!("{other:?}"),
        };
        assert!(msg("1:2:0").contains("count must be >= 1"));
        assert!(msg("-1:2:3log").contains("log sweep requires positive endpoints"));
        assert!(msg("1:2:3:4").contains("start:stop:count"));
        assert!(msg("1:2:xlog").contains("must be an integer"));
        assert!(msg("abc").contains("expected a number"));
    }

    #[test]
    fn kv_parsing() {
        let kv = parse_kv("# c\nalpha = 0.3  # flux\n\nspread-tol=1e-3\n").unwrap();
        assert_eq!(kv, vec![("alpha".into(), "0.3".into()), ("spread_tol".into(), "1e-3".into())]);
        assert!(parse_kv("alpha 0.3").is_err());
    }

    #[test]
    fn int_lists() {
        assert_eq!(parse_ints("l", "-2:1").unwrap(), vec![-2, -1, 0, 1]);
        assert_eq!(parse_ints("l", "-2,1").unwrap(), vec![-2, 1]);
        assert!(parse_ints("l", "2:1").is_err());
    }
}
