//! Spectral models of the factor manifolds.
//!
//! A [`FactorSpectrum`] is the ordered list of distinct eigenvalues of the
//! Laplace–Beltrami operator on one factor (Neumann condition on the
//! boundary, when there is one) together with multiplicities, dimension and
//! constant scalar curvature.
//!
//! Catalog spectra are generated from closed-form level functions that are
//! monotone in the level index, so asking for every eigenvalue up to a bound
//! always terminates with a complete list:
//!
//! | model | eigenvalue at level `k` | multiplicity |
//! |---|---|---|
//! | interval `[0, πλ]` | `k²/λ²` | 1 |
//! | round sphere `Sⁿ(r)` | `k(k+n-1)/r²` | `C(n+k,n) - C(n+k-2,n)` |
//! | hemisphere `Sⁿ₊(r)` | `k(k+n-1)/r²` | `Σ_{j≤k, k-j even} μ_{Sⁿ⁻¹}(j)` |
//! | flat torus | `4π² Σ kᵢ²/Lᵢ²` | lattice count |
//!
//! Custom spectra read from a file are complete only up to their declared
//! `lambda_max`; requests beyond it fail with [`Error::IncompleteSpectrum`].

use std::collections::BTreeMap;
use std::cmp::Ordering;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{NumericMode, Rational, Scalar};

/// One distinct eigenvalue level.
#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    pub index: usize,
    pub value: Scalar,
    pub multiplicity: u64,
}

/// Unit in which a spectrum's eigenvalues are expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectralUnit {
    One,
    /// Eigenvalues are stored as multiples of π². Arises for flat tori whose
    /// squared side lengths are plain rationals.
    PiSquared,
}

impl fmt::Display for SpectralUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralUnit::One => f.write_str("1"),
            SpectralUnit::PiSquared => f.write_str("pi^2"),
        }
    }
}

/// Squared side length of a flat torus: `coefficient` or `coefficient·π²`.
#[derive(Clone, Debug, PartialEq)]
pub struct SquaredLength {
    pub coefficient: Rational,
    pub times_pi_sq: bool,
}

impl SquaredLength {
    pub fn rational(coefficient: Rational) -> Self {
        SquaredLength {
            coefficient,
            times_pi_sq: false,
        }
    }

    pub fn pi_sq_multiple(coefficient: Rational) -> Self {
        SquaredLength {
            coefficient,
            times_pi_sq: true,
        }
    }

    /// Accepts `Q`, `Qpi2`, `Q*pi^2` or `pi2` (so `4pi2` is a side of length 2π).
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        for suffix in ["*pi^2", "pi^2", "*pi2", "pi2"] {
            if let Some(head) = t.strip_suffix(suffix) {
                let coefficient = if head.is_empty() {
                    Rational::one()
                } else {
                    exact_rational(&Scalar::parse_exact(head)?)?
                };
                return Ok(SquaredLength::pi_sq_multiple(coefficient));
            }
        }
        Ok(SquaredLength::rational(exact_rational(&Scalar::parse_exact(t)?)?))
    }
}

impl fmt::Display for SquaredLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Scalar::Exact(self.coefficient.clone()))?;
        if self.times_pi_sq {
            f.write_str("pi2")?;
        }
        Ok(())
    }
}

/// Where a spectrum came from.
#[derive(Clone, Debug, PartialEq)]
pub enum FactorModel {
    Interval { length_over_pi: Rational },
    Sphere { n: u32, radius_sq: Rational },
    Hemisphere { n: u32, radius_sq: Rational },
    FlatTorus { squared_lengths: Vec<SquaredLength> },
    Custom,
}

#[derive(Clone, Debug)]
enum Generator {
    /// `k² · weight`
    Interval { weight: Rational },
    /// `k(k+n-1) · weight`
    Sphere { n: u32, weight: Rational },
    Hemisphere { n: u32, weight: Rational },
    /// `Σ weightᵢ kᵢ²` over the integer lattice.
    Torus { weights: Vec<Rational> },
    Finite {
        levels: Vec<(Scalar, u64)>,
        lambda_max: Scalar,
    },
}

#[derive(Clone, Debug)]
pub struct FactorSpectrum {
    label: String,
    dim: u32,
    scalar_curvature: Scalar,
    has_boundary: bool,
    boundary_minimal: bool,
    model: FactorModel,
    generator: Generator,
    unit: SpectralUnit,
    /// Multiplies every generated eigenvalue; a metric scaled by `t` has `1/t`.
    eigen_scale: Scalar,
    /// Product of all factors passed to [`FactorSpectrum::scaled`].
    metric_scale: Scalar,
    mode: NumericMode,
}

fn exact_rational(value: &Scalar) -> Result<Rational> {
    value
        .as_rational()
        .cloned()
        .ok_or_else(|| Error::InexactCatalogParameter(value.to_string()))
}

fn positive_exact(value: &Scalar, what: &str) -> Result<Rational> {
    let r = exact_rational(value)?;
    if !r.is_positive() {
        return Err(Error::InvalidParameter(format!("{what} must be positive, got {value}")));
    }
    Ok(r)
}

fn int(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Multiplicity of the `k`-th eigenvalue `k(k+n-1)` of the unit `Sⁿ`.
pub fn sphere_multiplicity(n: u32, k: u32) -> u64 {
    let (n, k) = (n as i64, k as i64);
    (binomial(n + k, n) - binomial(n + k - 2, n)) as u64
}

/// Multiplicity of the `k`-th Neumann eigenvalue of the hemisphere `Sⁿ₊`:
/// degree-`k` spherical harmonics even under the equatorial reflection.
pub fn hemisphere_multiplicity(n: u32, k: u32) -> u64 {
    (0..=k)
        .filter(|j| (k - j) % 2 == 0)
        .map(|j| sphere_multiplicity(n - 1, j))
        .sum()
}

impl FactorSpectrum {
    /// Neumann spectrum of the segment `[0, πλ]`.
    pub fn interval_neumann(length_over_pi: &Scalar) -> Result<Self> {
        let lambda = positive_exact(length_over_pi, "length_over_pi")?;
        let weight = (&lambda * &lambda).recip();
        Ok(FactorSpectrum {
            label: format!("I[0, {}pi]", Scalar::Exact(lambda.clone())),
            dim: 1,
            scalar_curvature: Scalar::zero(),
            has_boundary: true,
            boundary_minimal: true,
            model: FactorModel::Interval {
                length_over_pi: lambda,
            },
            generator: Generator::Interval { weight },
            unit: SpectralUnit::One,
            eigen_scale: Scalar::one(),
            metric_scale: Scalar::one(),
            mode: NumericMode::Exact,
        })
    }

    /// Round sphere `Sⁿ` of squared radius `radius_sq`.
    pub fn round_sphere(n: u32, radius_sq: &Scalar) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("sphere dimension must be at least 1".into()));
        }
        let r2 = positive_exact(radius_sq, "radius_sq")?;
        let weight = r2.recip();
        let nn = n as u64;
        Ok(FactorSpectrum {
            label: format!("S^{n}(r^2={})", Scalar::Exact(r2.clone())),
            dim: n,
            scalar_curvature: Scalar::Exact(int(nn * (nn - 1)) * &weight),
            has_boundary: false,
            boundary_minimal: false,
            model: FactorModel::Sphere { n, radius_sq: r2 },
            generator: Generator::Sphere { n, weight },
            unit: SpectralUnit::One,
            eigen_scale: Scalar::one(),
            metric_scale: Scalar::one(),
            mode: NumericMode::Exact,
        })
    }

    /// Closed hemisphere `Sⁿ₊` with the Neumann condition on its totally
    /// geodesic equator.
    pub fn hemisphere_neumann(n: u32, radius_sq: &Scalar) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(
                "hemisphere dimension must be at least 2".into(),
            ));
        }
        let r2 = positive_exact(radius_sq, "radius_sq")?;
        let weight = r2.recip();
        let nn = n as u64;
        Ok(FactorSpectrum {
            label: format!("S^{n}_+(r^2={})", Scalar::Exact(r2.clone())),
            dim: n,
            scalar_curvature: Scalar::Exact(int(nn * (nn - 1)) * &weight),
            has_boundary: true,
            boundary_minimal: true,
            model: FactorModel::Hemisphere { n, radius_sq: r2 },
            generator: Generator::Hemisphere { n, weight },
            unit: SpectralUnit::One,
            eigen_scale: Scalar::one(),
            metric_scale: Scalar::one(),
            mode: NumericMode::Exact,
        })
    }

    /// Flat torus `ℝᵈ / ⊕ Lᵢℤ`. Eigenvalues are `4π² Σ kᵢ²/Lᵢ²`; when every
    /// `Lᵢ²` is a rational multiple of π² they are exact rationals, and when
    /// every `Lᵢ²` is rational they are exact multiples of π². A mixture has
    /// incommensurable levels and is rejected.
    pub fn flat_torus(squared_lengths: &[SquaredLength]) -> Result<Self> {
        let first = squared_lengths
            .first()
            .ok_or_else(|| Error::InvalidParameter("torus needs at least one side".into()))?;
        if squared_lengths
            .iter()
            .any(|l| l.times_pi_sq != first.times_pi_sq)
        {
            return Err(Error::InvalidParameter(
                "torus side lengths must be rational multiples of each other".into(),
            ));
        }
        if squared_lengths.iter().any(|l| !l.coefficient.is_positive()) {
            return Err(Error::InvalidParameter(
                "torus squared lengths must be positive".into(),
            ));
        }
        let four = int(4);
        let weights = squared_lengths
            .iter()
            .map(|l| &four / &l.coefficient)
            .collect();
        let sides: Vec<String> = squared_lengths.iter().map(|l| l.to_string()).collect();
        Ok(FactorSpectrum {
            label: format!("T^{}(L^2={})", squared_lengths.len(), sides.join(",")),
            dim: squared_lengths.len() as u32,
            scalar_curvature: Scalar::zero(),
            has_boundary: false,
            boundary_minimal: false,
            model: FactorModel::FlatTorus {
                squared_lengths: squared_lengths.to_vec(),
            },
            generator: Generator::Torus { weights },
            unit: if first.times_pi_sq {
                SpectralUnit::One
            } else {
                SpectralUnit::PiSquared
            },
            eigen_scale: Scalar::one(),
            metric_scale: Scalar::one(),
            mode: NumericMode::Exact,
        })
    }

    /// Reads a spectrum file (see [`FactorSpectrum::custom_from_str`]).
    pub fn custom_from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "custom".into());
        Self::custom_from_str(&text, &label)
    }

    /// Parses the line-oriented spectrum format:
    ///
    /// ```text
    /// # comment
    /// dim = 2
    /// scalar_curvature = 2
    /// has_boundary = true
    /// boundary_minimal = true
    /// lambda_max = 30
    /// tolerance = 1e-12      # optional; switches to floating mode
    /// eig 0 1
    /// eig 2 2
    /// ```
    ///
    /// An optional `label = <text>` header overrides `default_label`.
    pub fn custom_from_str(text: &str, default_label: &str) -> Result<Self> {
        let mut headers: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        let mut eig_lines: Vec<(usize, &str, &str)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let file_err = |message: String| Error::SpectrumFile {
                line: line_no,
                message,
            };
            if let Some(rest) = line.strip_prefix("eig") {
                if rest.starts_with(char::is_whitespace) {
                    let mut parts = rest.split_whitespace();
                    let (Some(value), Some(mult), None) = (parts.next(), parts.next(), parts.next())
                    else {
                        return Err(file_err("expected 'eig <value> <multiplicity>'".into()));
                    };
                    eig_lines.push((line_no, value, mult));
                    continue;
                }
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(file_err(format!("unrecognized line '{line}'")));
            };
            let key = key.trim();
            match key {
                "dim" | "scalar_curvature" | "has_boundary" | "boundary_minimal" | "lambda_max"
                | "tolerance" | "label" => {}
                other => return Err(file_err(format!("unknown key '{other}'"))),
            }
            if headers.insert(key, (line_no, value.trim())).is_some() {
                return Err(file_err(format!("duplicate key '{key}'")));
            }
        }

        let end_line = text.lines().count().max(1);
        let required = |key: &str| {
            headers.get(key).copied().ok_or_else(|| Error::SpectrumFile {
                line: end_line,
                message: format!("missing header '{key}'"),
            })
        };
        let parse_bool = |key: &str, default: Option<bool>| -> Result<bool> {
            match headers.get(key) {
                Some(&(_, "true")) => Ok(true),
                Some(&(_, "false")) => Ok(false),
                Some(&(line, other)) => Err(Error::SpectrumFile {
                    line,
                    message: format!("expected true|false for '{key}', got '{other}'"),
                }),
                None => default.ok_or_else(|| Error::SpectrumFile {
                    line: end_line,
                    message: format!("missing header '{key}'"),
                }),
            }
        };

        let mode = match headers.get("tolerance") {
            None => NumericMode::Exact,
            Some(&(line, t)) => {
                let tol: f64 = t.parse().map_err(|_| Error::SpectrumFile {
                    line,
                    message: format!("bad tolerance '{t}'"),
                })?;
                if !(tol > 0.0 && tol.is_finite()) {
                    return Err(Error::SpectrumFile {
                        line,
                        message: "tolerance must be positive".into(),
                    });
                }
                NumericMode::Float { tol }
            }
        };
        let number = |line: usize, text: &str| {
            Scalar::parse_in(text, mode).map_err(|e| Error::SpectrumFile {
                line,
                message: e.to_string(),
            })
        };

        let (dim_line, dim_text) = required("dim")?;
        let dim: u32 = dim_text.parse().map_err(|_| Error::SpectrumFile {
            line: dim_line,
            message: format!("bad dim '{dim_text}'"),
        })?;
        if dim == 0 {
            return Err(Error::SpectrumFile {
                line: dim_line,
                message: "dim must be positive".into(),
            });
        }
        let (r_line, r_text) = required("scalar_curvature")?;
        let scalar_curvature = number(r_line, r_text)?;
        let has_boundary = parse_bool("has_boundary", None)?;
        let boundary_minimal = parse_bool("boundary_minimal", Some(false))?;
        if has_boundary && !boundary_minimal {
            let line = headers
                .get("boundary_minimal")
                .or(headers.get("has_boundary"))
                .map(|h| h.0)
                .unwrap_or(end_line);
            return Err(Error::SpectrumFile {
                line,
                message: "boundary must be minimal (vanishing mean curvature)".into(),
            });
        }
        let (lm_line, lm_text) = required("lambda_max")?;
        let lambda_max = number(lm_line, lm_text)?;

        let mut levels: Vec<(Scalar, u64)> = Vec::with_capacity(eig_lines.len());
        for (line, value_text, mult_text) in eig_lines {
            let value = number(line, value_text)?;
            let multiplicity: u64 = mult_text.parse().map_err(|_| Error::SpectrumFile {
                line,
                message: format!("bad multiplicity '{mult_text}'"),
            })?;
            let err = |message: String| Error::SpectrumFile { line, message };
            if multiplicity == 0 {
                return Err(err("multiplicity must be at least 1".into()));
            }
            if value.is_negative() {
                return Err(err(format!("negative eigenvalue {value}")));
            }
            match levels.last() {
                None => {
                    if !value.is_zero() || multiplicity != 1 {
                        return Err(err("first entry must be 'eig 0 1' (constants)".into()));
                    }
                }
                Some((prev, _)) => match value.compare(prev) {
                    Ordering::Greater => {}
                    Ordering::Equal => return Err(err(format!("duplicate eigenvalue {value}"))),
                    Ordering::Less => {
                        return Err(err(format!("unsorted eigenvalues: {value} after {prev}")))
                    }
                },
            }
            if value.compare(&lambda_max) == Ordering::Greater {
                return Err(err(format!("eigenvalue {value} exceeds lambda_max {lambda_max}")));
            }
            levels.push((value, multiplicity));
        }
        if levels.is_empty() {
            return Err(Error::SpectrumFile {
                line: end_line,
                message: "no 'eig' entries; the spectrum must start with 'eig 0 1'".into(),
            });
        }

        let label = headers
            .get("label")
            .map(|h| h.1.to_string())
            .unwrap_or_else(|| default_label.to_string());
        Ok(FactorSpectrum {
            label,
            dim,
            scalar_curvature,
            has_boundary,
            boundary_minimal,
            model: FactorModel::Custom,
            generator: Generator::Finite { levels, lambda_max },
            unit: SpectralUnit::One,
            eigen_scale: Scalar::one(),
            metric_scale: Scalar::one(),
            mode,
        })
    }

    /// The same factor with its metric multiplied by `t`: every eigenvalue
    /// and the scalar curvature are divided by `t`.
    pub fn scaled(&self, t: &Scalar) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::InvalidParameter(format!("scale factor must be positive, got {t}")));
        }
        let inv = t.recip()?;
        let mut out = self.clone();
        out.eigen_scale = &self.eigen_scale * &inv;
        out.scalar_curvature = &self.scalar_curvature * &inv;
        out.metric_scale = &self.metric_scale * t;
        if matches!(self.mode, NumericMode::Float { .. }) {
            out.eigen_scale = out.eigen_scale.in_mode(self.mode);
            out.scalar_curvature = out.scalar_curvature.in_mode(self.mode);
        }
        out.label = format!("{}*{}", t, self.label);
        Ok(out)
    }

    /// Converts an exact spectrum to floating mode with tolerance `tol`.
    /// π²-unit eigenvalues are multiplied out, so the result has unit 1.
    pub fn into_floating(mut self, tol: f64) -> Result<Self> {
        let mode = NumericMode::Float { tol };
        Scalar::float(0.0, tol)?;
        if self.unit == SpectralUnit::PiSquared {
            let pi_sq = Scalar::float(std::f64::consts::PI.powi(2), tol)?;
            self.eigen_scale = &self.eigen_scale * &pi_sq;
            self.unit = SpectralUnit::One;
        }
        self.eigen_scale = self.eigen_scale.in_mode(mode);
        self.scalar_curvature = self.scalar_curvature.in_mode(mode);
        if let Generator::Finite { levels, lambda_max } = &mut self.generator {
            for (value, _) in levels.iter_mut() {
                *value = value.in_mode(mode);
            }
            *lambda_max = lambda_max.in_mode(mode);
        }
        self.mode = mode;
        Ok(self)
    }

    /// How much the metric has been scaled relative to `model()`; the model's
    /// eigenvalues divided by this are the eigenvalues of `self`.
    pub fn metric_scale(&self) -> &Scalar {
        &self.metric_scale
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn scalar_curvature(&self) -> &Scalar {
        &self.scalar_curvature
    }

    pub fn has_boundary(&self) -> bool {
        self.has_boundary
    }

    pub fn boundary_minimal(&self) -> bool {
        self.boundary_minimal
    }

    /// Mean curvature of the boundary; zero for every admitted factor.
    pub fn boundary_mean_curvature(&self) -> Option<Scalar> {
        self.has_boundary
            .then(|| Scalar::zero().in_mode(self.mode))
    }

    pub fn model(&self) -> &FactorModel {
        &self.model
    }

    pub fn unit(&self) -> SpectralUnit {
        self.unit
    }

    pub fn mode(&self) -> NumericMode {
        self.mode
    }

    /// Upper end of the guaranteed-complete range, `None` for catalog spectra.
    pub fn completeness_limit(&self) -> Option<Scalar> {
        match &self.generator {
            Generator::Finite { lambda_max, .. } => Some(lambda_max * &self.eigen_scale),
            _ => None,
        }
    }

    fn check_complete(&self, bound: &Scalar) -> Result<()> {
        if let Some(limit) = self.completeness_limit() {
            if bound.compare(&limit) == Ordering::Greater {
                return Err(Error::IncompleteSpectrum {
                    label: self.label.clone(),
                    requested: bound.to_string(),
                    available: limit.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Every level with eigenvalue `<= bound`, ascending.
    pub fn levels_up_to(&self, bound: &Scalar) -> Result<Vec<Level>> {
        self.levels_where(bound, |ord| ord != Ordering::Greater)
    }

    /// Every level with eigenvalue `< bound`, ascending.
    pub fn levels_below(&self, bound: &Scalar) -> Result<Vec<Level>> {
        self.levels_where(bound, |ord| ord == Ordering::Less)
    }

    /// `(eigenvalue, multiplicity)` for every eigenvalue strictly below `bound`.
    pub fn eigenvalues_below(&self, bound: &Scalar) -> Result<Vec<(Scalar, u64)>> {
        if bound.is_negative() {
            return Err(Error::InvalidParameter(format!("bound must be non-negative, got {bound}")));
        }
        Ok(self
            .levels_below(bound)?
            .into_iter()
            .map(|l| (l.value, l.multiplicity))
            .collect())
    }

    fn levels_where(&self, bound: &Scalar, keep: impl Fn(Ordering) -> bool) -> Result<Vec<Level>> {
        self.check_complete(bound)?;
        if bound.is_negative() {
            return Ok(Vec::new());
        }
        let raw: Vec<(Scalar, u64)> = match &self.generator {
            Generator::Finite { levels, .. } => levels
                .iter()
                .map(|(v, m)| (v * &self.eigen_scale, *m))
                .collect(),
            _ => {
                let cutoff = self.base_cutoff(bound)?;
                self.base_levels(&cutoff)
                    .into_iter()
                    .map(|(v, m)| (self.finalize(v), m))
                    .collect()
            }
        };
        Ok(raw
            .into_iter()
            .take_while(|(v, _)| keep(v.compare(bound)))
            .enumerate()
            .map(|(index, (value, multiplicity))| Level {
                index,
                value,
                multiplicity,
            })
            .collect())
    }

    fn finalize(&self, base: Rational) -> Scalar {
        let v = Scalar::Exact(base) * &self.eigen_scale;
        v.in_mode(self.mode)
    }

    /// Cutoff in generator units, never below the true preimage of `bound`.
    fn base_cutoff(&self, bound: &Scalar) -> Result<Rational> {
        match (bound, &self.eigen_scale) {
            (Scalar::Exact(b), Scalar::Exact(scale)) => Ok(b / scale),
            _ => {
                let approx = bound.to_f64() / self.eigen_scale.to_f64();
                let padded = approx.abs() * (1.0 + 1e-6) + bound.tolerance().unwrap_or(0.0) + 1e-9;
                Rational::from_float(padded)
                    .ok_or_else(|| Error::InvalidParameter(format!("bad bound {bound}")))
            }
        }
    }

    fn base_levels(&self, cutoff: &Rational) -> Vec<(Rational, u64)> {
        let mut out = Vec::new();
        match &self.generator {
            Generator::Interval { weight } => {
                for k in 0u64.. {
                    let v = int(k * k) * weight;
                    if &v > cutoff {
                        break;
                    }
                    out.push((v, 1));
                }
            }
            Generator::Sphere { n, weight } | Generator::Hemisphere { n, weight } => {
                let hemi = matches!(self.generator, Generator::Hemisphere { .. });
                for k in 0u32.. {
                    let kk = k as u64;
                    let v = int(kk * (kk + *n as u64 - 1)) * weight;
                    if &v > cutoff {
                        break;
                    }
                    let m = if hemi {
                        hemisphere_multiplicity(*n, k)
                    } else {
                        sphere_multiplicity(*n, k)
                    };
                    out.push((v, m));
                }
            }
            Generator::Torus { weights } => {
                let mut counts: BTreeMap<Rational, u64> = BTreeMap::new();
                lattice_levels(weights, cutoff, Rational::zero(), 1, &mut counts);
                out.extend(counts);
            }
            Generator::Finite { .. } => unreachable!("finite spectra are not generated"),
        }
        out
    }
}

fn lattice_levels(
    weights: &[Rational],
    cutoff: &Rational,
    partial: Rational,
    copies: u64,
    counts: &mut BTreeMap<Rational, u64>,
) {
    let Some((w, rest)) = weights.split_first() else {
        *counts.entry(partial).or_insert(0) += copies;
        return;
    };
    let room = cutoff - &partial;
    let mut kmax = (room.to_f64().unwrap_or(0.0) / w.to_f64().unwrap_or(1.0))
        .max(0.0)
        .sqrt() as u64
        + 1;
    while kmax > 0 && int(kmax * kmax) * w > room {
        kmax -= 1;
    }
    for k in 0..=kmax {
        let v = &partial + int(k * k) * w;
        // ±k
        let signs = if k == 0 { 1 } else { 2 };
        lattice_levels(rest, cutoff, v, copies * signs, counts);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(levels: &[Level]) -> Vec<Scalar> {
        levels.iter().map(|l| l.value.clone()).collect()
    }

    fn mults(levels: &[Level]) -> Vec<u64> {
        levels.iter().map(|l| l.multiplicity).collect()
    }

    fn ints(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn interval_levels() {
        let s = FactorSpectrum::interval_neumann(&Scalar::int(1)).unwrap();
        let l = s.levels_up_to(&Scalar::int(9)).unwrap();
        assert_eq!(values(&l), ints(&[0, 1, 4, 9]));
        assert_eq!(mults(&l), vec![1, 1, 1, 1]);
        assert_eq!(s.levels_below(&Scalar::int(10)).unwrap().len(), 4);

        let half = FactorSpectrum::interval_neumann(&Scalar::int(2)).unwrap();
        assert_eq!(half.levels_up_to(&Scalar::one()).unwrap()[1].value, Scalar::ratio(1, 4));
        assert!(FactorSpectrum::interval_neumann(&Scalar::zero()).is_err());
        assert!(FactorSpectrum::interval_neumann(&Scalar::int(-1)).is_err());
    }

    #[test]
    fn sphere_levels() {
        let s2 = FactorSpectrum::round_sphere(2, &Scalar::one()).unwrap();
        let l = s2.levels_up_to(&Scalar::int(12)).unwrap();
        assert_eq!(values(&l), ints(&[0, 2, 6, 12]));
        assert_eq!(mults(&l), vec![1, 3, 5, 7]);
        assert_eq!(s2.scalar_curvature(), &Scalar::int(2));

        let circle = FactorSpectrum::round_sphere(1, &Scalar::one()).unwrap();
        let l = circle.levels_up_to(&Scalar::int(16)).unwrap();
        assert_eq!(values(&l), ints(&[0, 1, 4, 9, 16]));
        assert_eq!(mults(&l), vec![1, 2, 2, 2, 2]);
        assert_eq!(circle.scalar_curvature(), &Scalar::zero());

        let s3 = FactorSpectrum::round_sphere(3, &Scalar::int(4)).unwrap();
        let l = s3.levels_up_to(&Scalar::one()).unwrap();
        assert_eq!(l[1].value, Scalar::ratio(3, 4));
        assert_eq!(l[1].multiplicity, 4);
        assert_eq!(s3.scalar_curvature(), &Scalar::ratio(6, 4));
    }

    #[test]
    fn hemisphere_levels() {
        let h = FactorSpectrum::hemisphere_neumann(2, &Scalar::one()).unwrap();
        let l = h.levels_up_to(&Scalar::int(6)).unwrap();
        assert_eq!(values(&l), ints(&[0, 2, 6]));
        assert_eq!(mults(&l), vec![1, 2, 3]);
        assert!(h.has_boundary() && h.boundary_minimal());
        assert_eq!(hemisphere_multiplicity(3, 1), 3);
        assert!(FactorSpectrum::hemisphere_neumann(1, &Scalar::one()).is_err());
        for k in 0..=20 {
            assert_eq!(hemisphere_multiplicity(2, k), k as u64 + 1);
        }
    }

    #[test]
    fn torus_levels() {
        let two_pi = SquaredLength::pi_sq_multiple(int(4));
        let t = FactorSpectrum::flat_torus(&[two_pi.clone(), two_pi.clone()]).unwrap();
        let l = t.levels_up_to(&Scalar::int(5)).unwrap();
        assert_eq!(values(&l), ints(&[0, 1, 2, 4, 5]));
        assert_eq!(mults(&l), vec![1, 4, 4, 4, 8]);
        assert_eq!(t.unit(), SpectralUnit::One);

        let pi = SquaredLength::pi_sq_multiple(int(1));
        let t = FactorSpectrum::flat_torus(&[two_pi.clone(), pi]).unwrap();
        let l = t.levels_up_to(&Scalar::int(4)).unwrap();
        assert_eq!(values(&l), ints(&[0, 1, 4]));
        assert_eq!(mults(&l), vec![1, 2, 4]);

        let circle = FactorSpectrum::flat_torus(&[two_pi]).unwrap();
        let sphere = FactorSpectrum::round_sphere(1, &Scalar::one()).unwrap();
        let bound = Scalar::int(100);
        assert_eq!(
            circle.levels_up_to(&bound).unwrap(),
            sphere.levels_up_to(&bound).unwrap()
        );

        assert!(FactorSpectrum::flat_torus(&[]).is_err());
        let plain = SquaredLength::rational(int(1));
        let t = FactorSpectrum::flat_torus(&[plain.clone()]).unwrap();
        assert_eq!(t.unit(), SpectralUnit::PiSquared);
        assert!(FactorSpectrum::flat_torus(&[plain, SquaredLength::pi_sq_multiple(int(1))]).is_err());
    }

    #[test]
    fn squared_length_parsing() {
        assert_eq!(
            SquaredLength::parse("4pi2").unwrap(),
            SquaredLength::pi_sq_multiple(int(4))
        );
        assert_eq!(
            SquaredLength::parse("pi^2").unwrap(),
            SquaredLength::pi_sq_multiple(int(1))
        );
        assert_eq!(
            SquaredLength::parse("3/2").unwrap(),
            SquaredLength::rational(Rational::new(3.into(), 2.into()))
        );
        assert!(SquaredLength::parse("x").is_err());
    }

    #[test]
    fn eigenvalues_below_is_strict() {
        let i = FactorSpectrum::interval_neumann(&Scalar::one()).unwrap();
        assert_eq!(
            i.eigenvalues_below(&Scalar::int(5)).unwrap(),
            vec![(Scalar::int(0), 1), (Scalar::int(1), 1), (Scalar::int(4), 1)]
        );
        let s = FactorSpectrum::round_sphere(2, &Scalar::one()).unwrap();
        assert_eq!(s.eigenvalues_below(&Scalar::int(2)).unwrap(), vec![(Scalar::int(0), 1)]);
        assert!(s.eigenvalues_below(&Scalar::int(-1)).is_err());
    }

    const GOOD: &str = "# test factor\ndim = 2\nscalar_curvature = 1\nhas_boundary = true\nboundary_minimal = true\nlambda_max = 3\neig 0 1\neig 2.5 3\n";

    #[test]
    fn custom_spectrum_round_trip() {
        let s = FactorSpectrum::custom_from_str(GOOD, "good").unwrap();
        let l = s.levels_up_to(&Scalar::int(3)).unwrap();
        assert_eq!(values(&l), vec![Scalar::zero(), Scalar::ratio(5, 2)]);
        assert_eq!(mults(&l), vec![1, 3]);
        assert!(matches!(
            s.eigenvalues_below(&Scalar::int(10)),
            Err(Error::IncompleteSpectrum { .. })
        ));
    }

    #[test]
    fn custom_spectrum_errors_report_lines() {
        let unsorted = "dim = 1\nscalar_curvature = 0\nhas_boundary = false\nlambda_max = 10\neig 0 1\neig 2 2\neig 1 5\n";
        match FactorSpectrum::custom_from_str(unsorted, "u") {
            Err(Error::SpectrumFile { line, message }) => {
                assert_eq!(line, 7);
                assert!(message.contains("unsorted"));
            }
            other => panic!("expected unsorted error, got {other:?}"),
        }
        let non_minimal = GOOD.replace("boundary_minimal = true", "boundary_minimal = false");
        match FactorSpectrum::custom_from_str(&non_minimal, "b") {
            Err(Error::SpectrumFile { message, .. }) => assert!(message.contains("minimal")),
            other => panic!("expected boundary error, got {other:?}"),
        }
        let no_head = GOOD.replace("eig 0 1\n", "");
        assert!(FactorSpectrum::custom_from_str(&no_head, "h").is_err());
        let dup = GOOD.replace("eig 2.5 3", "eig 0 2");
        assert!(FactorSpectrum::custom_from_str(&dup, "d").is_err());
        let junk = format!("{GOOD}what is this\n");
        match FactorSpectrum::custom_from_str(&junk, "j") {
            Err(Error::SpectrumFile { line, .. }) => assert_eq!(line, 9),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(FactorSpectrum::custom_from_str(&GOOD.replace("dim = 2\n", ""), "m").is_err());
    }

    #[test]
    fn floating_custom_spectrum() {
        let text = "dim = 1\nscalar_curvature = 0\nhas_boundary = false\nlambda_max = 10\ntolerance = 1e-9\neig 0 1\neig 1.0000000001 2\n";
        let s = FactorSpectrum::custom_from_str(text, "f").unwrap();
        assert_eq!(s.mode(), NumericMode::Float { tol: 1e-9 });
        // 1.0000000001 equals 1 within the declared tolerance
        let l = s.levels_up_to(&Scalar::one()).unwrap();
        assert_eq!(l.len(), 2);
    }

    #[test]
    fn scaling_divides_eigenvalues_and_curvature() {
        let t = Scalar::int(3);
        let s = FactorSpectrum::round_sphere(2, &Scalar::one()).unwrap();
        let scaled = s.scaled(&t).unwrap();
        let direct = FactorSpectrum::round_sphere(2, &Scalar::int(3)).unwrap();
        let b = Scalar::int(50);
        assert_eq!(
            values(&scaled.levels_up_to(&b).unwrap()),
            values(&direct.levels_up_to(&b).unwrap())
        );
        assert_eq!(scaled.scalar_curvature(), direct.scalar_curvature());
    }
}
