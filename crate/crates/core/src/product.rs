//! The product family `ḡ_s = g₁ ⊕ s·g₂` and its homothetic reparametrization.
//!
//! Volume normalization is never carried out numerically: rescaling a metric
//! by a constant rescales every eigenvalue of `J` by the same positive factor,
//! so the set of degeneracy instants and every Morse index are unchanged.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{NumericMode, Scalar};
use crate::spectra::{FactorSpectrum, SpectralUnit};

/// Which factor carries the parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parametrization {
    /// `g₁ ⊕ s·g₂`: product eigenvalues `ρ_i + ρ_j/s`.
    ScaleSecond,
    /// `(1/s)·g₁ ⊕ g₂`, homothetic to the above: eigenvalues `s·ρ_i + ρ_j`.
    ShrinkFirst,
}

#[derive(Clone, Debug)]
pub struct ProductFamily {
    factor1: FactorSpectrum,
    factor2: FactorSpectrum,
    parametrization: Parametrization,
    mode: NumericMode,
}

/// One distinct eigenvalue of the product Laplacian with the level pairs
/// `(i, j)` that produce it.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductEigenvalue {
    pub value: Scalar,
    pub multiplicity: u64,
    pub sources: Vec<(usize, usize)>,
}

pub(crate) fn require_positive(s: &Scalar) -> Result<()> {
    if s.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveParameter(s.to_string()))
    }
}

impl ProductFamily {
    /// Validates the factor roles and builds `g₁ ⊕ s·g₂`.
    pub fn new(factor1: FactorSpectrum, factor2: FactorSpectrum) -> Result<Self> {
        if factor1.has_boundary() {
            return Err(Error::BoundaryRole(format!(
                "first factor '{}' must be closed",
                factor1.label()
            )));
        }
        if !factor2.has_boundary() {
            return Err(Error::BoundaryRole(format!(
                "second factor '{}' must have a boundary",
                factor2.label()
            )));
        }
        if !factor2.boundary_minimal() {
            return Err(Error::BoundaryRole(format!(
                "boundary of '{}' is not minimal",
                factor2.label()
            )));
        }
        let m = factor1.dim() + factor2.dim();
        if m < 3 {
            return Err(Error::DimensionTooSmall(m));
        }
        let mode = match (factor1.mode(), factor2.mode()) {
            (NumericMode::Exact, NumericMode::Exact) => NumericMode::Exact,
            (NumericMode::Float { tol: a }, NumericMode::Float { tol: b }) if a == b => {
                NumericMode::Float { tol: a }
            }
            (a, b) => {
                return Err(Error::MixedRepresentation(format!(
                    "factor modes {a} and {b} differ"
                )))
            }
        };
        if factor1.unit() != factor2.unit() {
            return Err(Error::MixedRepresentation(format!(
                "eigenvalue units {} and {} differ",
                factor1.unit(),
                factor2.unit()
            )));
        }
        if factor1.unit() == SpectralUnit::PiSquared
            && !(factor1.scalar_curvature().is_zero() && factor2.scalar_curvature().is_zero())
        {
            return Err(Error::MixedRepresentation(
                "pi^2-unit spectra require zero scalar curvature".into(),
            ));
        }
        Ok(ProductFamily {
            factor1,
            factor2,
            parametrization: Parametrization::ScaleSecond,
            mode,
        })
    }

    pub fn factor1(&self) -> &FactorSpectrum {
        &self.factor1
    }

    pub fn factor2(&self) -> &FactorSpectrum {
        &self.factor2
    }

    pub fn parametrization(&self) -> Parametrization {
        self.parametrization
    }

    pub fn mode(&self) -> NumericMode {
        self.mode
    }

    /// `m = m₁ + m₂`.
    pub fn dim(&self) -> u32 {
        self.factor1.dim() + self.factor2.dim()
    }

    fn m_minus_one(&self) -> Scalar {
        Scalar::int(self.dim() as i64 - 1)
    }

    /// `T₁ = R₁/(m-1)`.
    pub fn threshold1(&self) -> Scalar {
        self.factor1.scalar_curvature() / &self.m_minus_one()
    }

    /// `T₂ = R₂/(m-1)`.
    pub fn threshold2(&self) -> Scalar {
        self.factor2.scalar_curvature() / &self.m_minus_one()
    }

    pub fn label(&self) -> String {
        match self.parametrization {
            Parametrization::ScaleSecond => {
                format!("{} x s*{}", self.factor1.label(), self.factor2.label())
            }
            Parametrization::ShrinkFirst => {
                format!("(1/s)*{} x {}", self.factor1.label(), self.factor2.label())
            }
        }
    }

    /// `(w₁, w₂)` with product eigenvalues `w₁ρ_i + w₂ρ_j` at parameter `s`.
    pub fn metric_weights(&self, s: &Scalar) -> Result<(Scalar, Scalar)> {
        require_positive(s)?;
        let one = Scalar::one().in_mode(self.mode);
        Ok(match self.parametrization {
            Parametrization::ScaleSecond => (one, s.recip()?),
            Parametrization::ShrinkFirst => (s.clone(), one),
        })
    }

    /// `R(s)`; equals `R₁ + R₂/s` for `g₁ ⊕ s·g₂`.
    pub fn scalar_curvature_at(&self, s: &Scalar) -> Result<Scalar> {
        let (w1, w2) = self.metric_weights(s)?;
        Ok(&w1 * self.factor1.scalar_curvature() + &w2 * self.factor2.scalar_curvature())
    }

    /// `R(s)/(m-1)`, the level the Laplacian spectrum is compared against.
    pub fn critical_value_at(&self, s: &Scalar) -> Result<Scalar> {
        Ok(self.scalar_curvature_at(s)? / self.m_minus_one())
    }

    /// Mean curvature of `∂M = M₁ × ∂M₂` at parameter `s`; zero for every
    /// admitted family.
    pub fn mean_curvature_at(&self, s: &Scalar) -> Result<Scalar> {
        let h = self
            .factor2
            .boundary_mean_curvature()
            .unwrap_or_else(Scalar::zero);
        let (_, w2) = self.metric_weights(s)?;
        // metric factor on M₂ is 1/w₂
        mean_curvature_scale(&h, &w2.recip()?)
    }

    /// Every eigenvalue of the product Laplacian strictly below `bound` at
    /// parameter `s`, coincident values merged.
    pub fn spectrum_below(&self, s: &Scalar, bound: &Scalar) -> Result<Vec<ProductEigenvalue>> {
        let (w1, w2) = self.metric_weights(s)?;
        let first = self.factor1.levels_below(&(bound / &w1))?;
        let second = self.factor2.levels_below(&(bound / &w2))?;
        let mut pairs: Vec<(Scalar, u64, (usize, usize))> = Vec::new();
        for a in &first {
            let base = &w1 * &a.value;
            for b in &second {
                let value = &base + &(&w2 * &b.value);
                if value.compare(bound) == Ordering::Less {
                    pairs.push((value, a.multiplicity * b.multiplicity, (a.index, b.index)));
                }
            }
        }
        Ok(merge_eigenvalues(pairs))
    }
}

fn merge_eigenvalues(pairs: Vec<(Scalar, u64, (usize, usize))>) -> Vec<ProductEigenvalue> {
    let mut out: Vec<ProductEigenvalue> = Vec::new();
    if pairs.iter().all(|p| p.0.is_exact()) {
        let mut groups: BTreeMap<crate::Rational, ProductEigenvalue> = BTreeMap::new();
        for (value, mult, source) in pairs {
            let key = value.as_rational().cloned().expect("exact");
            let entry = groups.entry(key).or_insert_with(|| ProductEigenvalue {
                value,
                multiplicity: 0,
                sources: Vec::new(),
            });
            entry.multiplicity += mult;
            entry.sources.push(source);
        }
        out.extend(groups.into_values());
    } else {
        let mut pairs = pairs;
        pairs.sort_by(|a, b| a.0.to_f64().total_cmp(&b.0.to_f64()).then(a.2.cmp(&b.2)));
        for (value, mult, source) in pairs {
            match out.last_mut() {
                Some(group) if group.value.approx_eq(&value) => {
                    group.multiplicity += mult;
                    group.sources.push(source);
                }
                _ => out.push(ProductEigenvalue {
                    value,
                    multiplicity: mult,
                    sources: vec![source],
                }),
            }
        }
    }
    for group in &mut out {
        group.sources.sort();
    }
    out
}

/// Mean curvature of a boundary after scaling the metric by `t`: `H/√t`.
pub fn mean_curvature_scale(h: &Scalar, t: &Scalar) -> Result<Scalar> {
    require_positive(t)?;
    if h.is_zero() {
        return Ok(Scalar::zero().in_mode(h.mode()));
    }
    Ok(h / &t.sqrt()?)
}

/// How instants of a reparametrized family correspond to the original ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstantMap {
    Identity,
}

#[derive(Clone, Debug)]
pub struct Reparametrization {
    /// The homothetic family, parametrized by the same `s`.
    pub family: ProductFamily,
    /// First factor of the rescaled metric `(1/s)·ḡ_s` at the requested `s`
    /// (eigenvalues and curvature multiplied by `s`).
    pub factor1_at_s: FactorSpectrum,
    /// Second factor, unchanged.
    pub factor2: FactorSpectrum,
    pub instant_map: InstantMap,
}

/// Rescales `ḡ_s` by `1/s`, giving `(1/s)·g₁ ⊕ g₂`. The rescaled family is
/// degenerate at exactly the same parameters, so instants map identically.
/// Applied to an already reparametrized family it returns the original form.
pub fn homothety_reparametrization(fam: &ProductFamily, s: &Scalar) -> Result<Reparametrization> {
    require_positive(s)?;
    let mut family = fam.clone();
    family.parametrization = match fam.parametrization {
        Parametrization::ScaleSecond => Parametrization::ShrinkFirst,
        Parametrization::ShrinkFirst => Parametrization::ScaleSecond,
    };
    // (1/s)·ḡ_s in the original form; its inverse maps back to ḡ_s
    let (factor1_at_s, factor2) = match fam.parametrization {
        Parametrization::ScaleSecond => (fam.factor1.scaled(&s.recip()?)?, fam.factor2.clone()),
        Parametrization::ShrinkFirst => (fam.factor1.clone(), fam.factor2.scaled(s)?),
    };
    Ok(Reparametrization {
        family,
        factor1_at_s,
        factor2,
        instant_map: InstantMap::Identity,
    })
}
