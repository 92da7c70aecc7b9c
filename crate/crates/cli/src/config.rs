//! Scan configuration from flags and from `key = value` files.
//!
//! A config file uses the flag names without dashes, one per line:
//!
//! ```text
//! # sphere times hemisphere
//! sphere = 2
//! r2 = 1
//! hemisphere = 2
//! window = 1/100:20
//! format = json
//! ```
//!
//! Factor keys are read in order, first factor first. Any factor given on
//! the command line replaces all factors from the file; other keys are
//! overridden one by one.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ArgMatches;
use yamabe::{FactorSpectrum, NumericMode, ProductFamily, Scalar, ScanWindow, SquaredLength};

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum FactorSpec {
    Sphere { n: u32, r2: Option<String> },
    Hemisphere { n: u32, r2: Option<String> },
    Interval(String),
    Torus(String),
    Custom(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    fn parse(text: &str) -> Result<Self, CliError> {
        match text {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::config(format!("unknown format '{other}' (text, json or csv)"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScanConfig {
    pub factors: Vec<FactorSpec>,
    pub window: Option<String>,
    pub lambda_max: Option<String>,
    pub mode: Option<String>,
    pub tol: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub below: Option<String>,
    pub samples: Option<usize>,
    pub branch_limit: Option<usize>,
    pub reference_custom: Vec<PathBuf>,
}

/// One factor key as it appears on the command line or in a file.
enum FactorToken {
    Sphere(u32),
    Hemisphere(u32),
    R2(String),
    Interval(String),
    Torus(String),
    Custom(PathBuf),
}

fn assemble(tokens: Vec<FactorToken>) -> Result<Vec<FactorSpec>, CliError> {
    let mut out: Vec<FactorSpec> = Vec::new();
    for token in tokens {
        match token {
            FactorToken::Sphere(n) => out.push(FactorSpec::Sphere { n, r2: None }),
            FactorToken::Hemisphere(n) => out.push(FactorSpec::Hemisphere { n, r2: None }),
            FactorToken::Interval(l) => out.push(FactorSpec::Interval(l)),
            FactorToken::Torus(l) => out.push(FactorSpec::Torus(l)),
            FactorToken::Custom(p) => out.push(FactorSpec::Custom(p)),
            FactorToken::R2(v) => match out.last_mut() {
                Some(FactorSpec::Sphere { r2, .. }) | Some(FactorSpec::Hemisphere { r2, .. }) if r2.is_none() => {
                    *r2 = Some(v)
                }
                _ => {
                    return Err(CliError::config(format!(
                        "r2 = {v} must follow a sphere or hemisphere factor"
                    )))
                }
            },
        }
    }
    Ok(out)
}

fn parse_u32(key: &str, value: &str) -> Result<u32, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::config(format!("{key}: expected a positive integer, got '{value}'")))
}

fn parse_usize(key: &str, value: &str) -> Result<usize, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::config(format!("{key}: expected a non-negative integer, got '{value}'")))
}

fn parse_tol(value: &str) -> Result<f64, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::config(format!("tol: expected a number, got '{value}'")))
}

impl ScanConfig {
    /// Reads the flags of one subcommand. Factor flags are ordered by their
    /// position on the command line.
    pub fn from_matches(m: &ArgMatches) -> Result<Self, CliError> {
        let mut tokens: Vec<(usize, FactorToken)> = Vec::new();
        let mut collect = |id: &str, make: &dyn Fn(&str) -> Result<FactorToken, CliError>| -> Result<(), CliError> {
            if let (Some(values), Some(indices)) = (m.get_raw(id), m.indices_of(id)) {
                for (v, i) in values.zip(indices) {
                    tokens.push((i, make(&v.to_string_lossy())?));
                }
            }
            Ok(())
        };
        collect("sphere", &|v| Ok(FactorToken::Sphere(parse_u32("sphere", v)?)))?;
        collect("hemisphere", &|v| Ok(FactorToken::Hemisphere(parse_u32("hemisphere", v)?)))?;
        collect("r2", &|v| Ok(FactorToken::R2(v.to_string())))?;
        collect("interval", &|v| Ok(FactorToken::Interval(v.to_string())))?;
        collect("torus", &|v| Ok(FactorToken::Torus(v.to_string())))?;
        collect("custom", &|v| Ok(FactorToken::Custom(PathBuf::from(v))))?;
        tokens.sort_by_key(|(i, _)| *i);
        let factors = assemble(tokens.into_iter().map(|(_, t)| t).collect())?;

        let string = |id: &str| m.try_get_one::<String>(id).ok().flatten().cloned();
        let format = match string("format") {
            Some(f) => Some(Format::parse(&f)?),
            None => None,
        };
        let tol = match string("tol") {
            Some(t) => Some(parse_tol(&t)?),
            None => None,
        };
        let usize_arg = |id: &str| -> Result<Option<usize>, CliError> {
            match string(id) {
                Some(v) => Ok(Some(parse_usize(id, &v)?)),
                None => Ok(None),
            }
        };
        let reference_custom = m
            .try_get_many::<String>("reference_custom")
            .ok()
            .flatten()
            .map(|v| v.map(PathBuf::from).collect())
            .unwrap_or_default();
        let mut cfg = ScanConfig {
            factors,
            window: string("window"),
            lambda_max: string("lambda_max"),
            mode: string("mode"),
            tol,
            format,
            out: string("out").map(PathBuf::from),
            below: string("below"),
            samples: usize_arg("samples")?,
            branch_limit: usize_arg("branch_limit")?,
            reference_custom,
        };
        if let Some(path) = string("config") {
            let file = ScanConfig::from_file(Path::new(&path))?;
            cfg = cfg.over(file);
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        ScanConfig::from_text(&text, &base)
            .map_err(|e| CliError::config(format!("{}: {}", path.display(), e.message)))
    }

    /// Parses config text; relative custom paths are resolved against `base`.
    pub fn from_text(text: &str, base: &Path) -> Result<Self, CliError> {
        let mut cfg = ScanConfig::default();
        let mut tokens = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| CliError::config(format!("line {}: {msg}", n + 1));
            let Some((key, value)) = line.split_once('=') else {
                return Err(err(format!("expected 'key = value', got '{line}'")));
            };
            let key = key.trim().replace('_', "-");
            let value = value.trim().to_string();
            let path = |v: &str| {
                let p = PathBuf::from(v);
                if p.is_relative() {
                    base.join(p)
                } else {
                    p
                }
            };
            match key.as_str() {
                "sphere" => tokens.push(FactorToken::Sphere(parse_u32("sphere", &value).map_err(|e| err(e.message))?)),
                "hemisphere" => tokens.push(FactorToken::Hemisphere(
                    parse_u32("hemisphere", &value).map_err(|e| err(e.message))?,
                )),
                "r2" => tokens.push(FactorToken::R2(value)),
                "interval" => tokens.push(FactorToken::Interval(value)),
                "torus" => tokens.push(FactorToken::Torus(value)),
                "custom" => tokens.push(FactorToken::Custom(path(&value))),
                "reference-custom" => cfg.reference_custom.push(path(&value)),
                "window" => cfg.window = Some(value),
                "lambda-max" => cfg.lambda_max = Some(value),
                "mode" => cfg.mode = Some(value),
                "tol" => cfg.tol = Some(parse_tol(&value).map_err(|e| err(e.message))?),
                "format" => cfg.format = Some(Format::parse(&value).map_err(|e| err(e.message))?),
                "out" => cfg.out = Some(path(&value)),
                "below" => cfg.below = Some(value),
                "samples" => cfg.samples = Some(parse_usize("samples", &value).map_err(|e| err(e.message))?),
                "branch-limit" => {
                    cfg.branch_limit = Some(parse_usize("branch-limit", &value).map_err(|e| err(e.message))?)
                }
                other => return Err(err(format!("unknown key '{other}'"))),
            }
        }
        cfg.factors = assemble(tokens)?;
        Ok(cfg)
    }

    /// `self` with unset fields taken from `file`.
    pub fn over(self, file: ScanConfig) -> ScanConfig {
        ScanConfig {
            factors: if self.factors.is_empty() { file.factors } else { self.factors },
            window: self.window.or(file.window),
            lambda_max: self.lambda_max.or(file.lambda_max),
            mode: self.mode.or(file.mode),
            tol: self.tol.or(file.tol),
            format: self.format.or(file.format),
            out: self.out.or(file.out),
            below: self.below.or(file.below),
            samples: self.samples.or(file.samples),
            branch_limit: self.branch_limit.or(file.branch_limit),
            reference_custom: if self.reference_custom.is_empty() {
                file.reference_custom
            } else {
                self.reference_custom
            },
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Text)
    }

    /// `None` keeps each factor's own mode (exact unless a custom file sets
    /// a tolerance).
    pub fn numeric_mode(&self) -> Result<Option<NumericMode>, CliError> {
        match (self.mode.as_deref(), self.tol) {
            (None, None) => Ok(None),
            (Some("exact"), None) => Ok(Some(NumericMode::Exact)),
            (Some("exact"), Some(_)) => Err(CliError::config("--tol only applies with --mode float")),
            (Some("float") | None, Some(tol)) => {
                if !(tol > 0.0 && tol.is_finite()) {
                    return Err(CliError::config(format!("tolerance must be positive, got {tol}")));
                }
                Ok(Some(NumericMode::Float { tol }))
            }
            (Some("float"), None) => Err(CliError::config("--mode float needs --tol")),
            (Some(other), _) => Err(CliError::config(format!("unknown mode '{other}' (exact or float)"))),
        }
    }

    pub fn build_factor(&self, spec: &FactorSpec) -> Result<FactorSpectrum, CliError> {
        let exact = |text: &str| Scalar::parse_exact(text).map_err(CliError::from);
        let r2 = |r2: &Option<String>| exact(r2.as_deref().unwrap_or("1"));
        let factor = match spec {
            FactorSpec::Sphere { n, r2: r } => FactorSpectrum::round_sphere(*n, &r2(r)?)?,
            FactorSpec::Hemisphere { n, r2: r } => FactorSpectrum::hemisphere_neumann(*n, &r2(r)?)?,
            FactorSpec::Interval(l) => FactorSpectrum::interval_neumann(&exact(l)?)?,
            FactorSpec::Torus(list) => {
                let lengths = list
                    .split(',')
                    .map(|l| SquaredLength::parse(l.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                FactorSpectrum::flat_torus(&lengths)?
            }
            FactorSpec::Custom(path) => FactorSpectrum::custom_from_file(path)?,
        };
        self.apply_mode(factor)
    }

    fn apply_mode(&self, factor: FactorSpectrum) -> Result<FactorSpectrum, CliError> {
        match (self.numeric_mode()?, factor.mode()) {
            (Some(NumericMode::Float { tol }), NumericMode::Exact) => Ok(factor.into_floating(tol)?),
            (Some(NumericMode::Exact), NumericMode::Float { .. }) => Err(CliError::config(format!(
                "{} is given in floating point; use --mode float",
                factor.label()
            ))),
            _ => Ok(factor),
        }
    }

    pub fn single_factor(&self) -> Result<FactorSpectrum, CliError> {
        match self.factors.as_slice() {
            [one] => self.build_factor(one),
            [] => Err(CliError::config("no factor given")),
            _ => Err(CliError::config("spectrum takes exactly one factor")),
        }
    }

    pub fn family(&self) -> Result<ProductFamily, CliError> {
        let [first, second] = self.factors.as_slice() else {
            return Err(CliError::config(format!(
                "a family needs exactly two factors (closed first, bounded second), got {}",
                self.factors.len()
            )));
        };
        Ok(ProductFamily::new(self.build_factor(first)?, self.build_factor(second)?)?)
    }

    /// The family again with custom factors replaced, in order, by the
    /// reference files. Without reference files this is `family()`.
    pub fn reference_family(&self) -> Result<ProductFamily, CliError> {
        let mut refs = self.reference_custom.iter();
        let mut swapped = self.clone();
        for f in swapped.factors.iter_mut() {
            if let FactorSpec::Custom(p) = f {
                if let Some(r) = refs.next() {
                    *p = r.clone();
                }
            }
        }
        if refs.next().is_some() {
            return Err(CliError::config("more reference spectra than custom factors"));
        }
        swapped.family()
    }

    fn scalar(&self, text: &str, mode: NumericMode) -> Result<Scalar, CliError> {
        Ok(Scalar::parse_exact(text)?.in_mode(mode))
    }

    pub fn window(&self, mode: NumericMode) -> Result<ScanWindow, CliError> {
        let text = self.window.as_deref().unwrap_or("1/10:10");
        let Some((lo, hi)) = text.split_once(':') else {
            return Err(CliError::config(format!("window '{text}' must look like MIN:MAX")));
        };
        Ok(ScanWindow::new(self.scalar(lo, mode)?, self.scalar(hi, mode)?)?)
    }

    pub fn lambda_max(&self, mode: NumericMode) -> Result<Option<Scalar>, CliError> {
        self.lambda_max.as_deref().map(|l| self.scalar(l, mode)).transpose()
    }

    pub fn below(&self, mode: NumericMode) -> Result<Scalar, CliError> {
        let text = self.below.as_deref().or(self.lambda_max.as_deref()).unwrap_or("10");
        self.scalar(text, mode)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_factors_keep_order() {
        let cfg = ScanConfig::from_text(
            "# comment\nsphere = 2\nr2 = 4\nhemisphere = 2\nwindow = 1/100:20\nformat = json\n",
            Path::new("."),
        )
        .unwrap();
        assert_eq!(
            cfg.factors,
            vec![
                FactorSpec::Sphere { n: 2, r2: Some("4".into()) },
                FactorSpec::Hemisphere { n: 2, r2: None },
            ]
        );
        assert_eq!(cfg.window.as_deref(), Some("1/100:20"));
        assert_eq!(cfg.format(), Format::Json);
    }

    #[test]
    fn file_errors_have_line_numbers() {
        let err = ScanConfig::from_text("sphere = 2\nbogus = 1\n", Path::new(".")).unwrap_err();
        assert!(err.message.contains("line 2"), "{}", err.message);
        let err = ScanConfig::from_text("r2 = 1\n", Path::new(".")).unwrap_err();
        assert!(err.message.contains("r2"));
    }

    #[test]
    fn flags_win() {
        let file = ScanConfig::from_text("sphere = 2\nhemisphere = 2\nwindow = 1:2\nformat = csv\n", Path::new(".")).unwrap();
        let flags = ScanConfig {
            window: Some("1/2:3".into()),
            ..Default::default()
        };
        let merged = flags.over(file);
        assert_eq!(merged.window.as_deref(), Some("1/2:3"));
        assert_eq!(merged.format(), Format::Csv);
        assert_eq!(merged.factors.len(), 2);
    }

    #[test]
    fn modes() {
        let mut cfg = ScanConfig::default();
        assert_eq!(cfg.numeric_mode().unwrap(), None);
        cfg.mode = Some("float".into());
        assert!(cfg.numeric_mode().is_err());
        cfg.tol = Some(1e-10);
        assert_eq!(cfg.numeric_mode().unwrap(), Some(NumericMode::Float { tol: 1e-10 }));
        cfg.mode = Some("fuzzy".into());
        assert!(cfg.numeric_mode().is_err());
    }
}
