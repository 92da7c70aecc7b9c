//! Cross-checks of the engine against [`crate::oracle`].
//!
//! A suite takes two families: the one the engine analyses and the one the
//! oracles recompute from. Normally they are the same; passing a corrupted
//! copy as the engine family is how the suite itself is tested.

use std::fmt;

use crate::bifurcation::{degeneracy_instants, index_jump, morse_index, required_bound, ScanWindow};
use crate::error::{Error, Result};
use crate::oracle;
use crate::product::ProductFamily;
use crate::scalar::{Rational, Scalar};
use crate::spectra::{FactorModel, FactorSpectrum, SpectralUnit};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub window: ScanWindow,
    /// Defaults to the engine's required bound for `window`.
    pub lambda: Option<Scalar>,
    pub samples: usize,
    /// Parameters where the Morse index is compared directly.
    pub index_probes: usize,
}

impl VerifyOptions {
    pub fn new(window: ScanWindow) -> Self {
        VerifyOptions {
            window,
            lambda: None,
            samples: 100_000,
            index_probes: 12,
        }
    }
}

/// Catalog checks for one factor: closed forms against the FD solver, the
/// harmonic-dimension counts or the lattice loop, as applicable.
pub fn verify_factor(spec: &FactorSpectrum, name: &str, report: &mut VerifyReport) -> Result<()> {
    let unit = match spec.unit() {
        SpectralUnit::One => 1.0,
        SpectralUnit::PiSquared => std::f64::consts::PI.powi(2),
    };
    let t = spec.metric_scale().clone();
    // model eigenvalue bound -> bound in the spectrum's own units
    let own_bound = |plain: Rational| -> Scalar { &Scalar::Exact(plain) / &t };
    let plain = |v: &Scalar| v.to_f64() * unit * t.to_f64();
    match spec.model().clone() {
        FactorModel::Interval { length_over_pi } => {
            let top = Rational::from_integer(81.into()) / (&length_over_pi * &length_over_pi);
            let levels = spec.levels_up_to(&own_bound(top))?;
            let grid = oracle::fd_interval_spectrum(Scalar::Exact(length_over_pi).to_f64(), 2000, levels.len())?;
            let mut worst: f64 = 0.0;
            for (l, fd) in levels.iter().zip(&grid.eigenvalues) {
                let v = plain(&l.value);
                let err = if v == 0.0 { fd.abs() } else { (fd - v).abs() / v };
                worst = worst.max(err);
            }
            report.push(
                format!("{name}: interval spectrum vs finite differences"),
                levels.len() == 10 && worst < 1e-3,
                format!("{} eigenvalues, worst relative error {worst:.2e}", levels.len()),
            );
        }
        FactorModel::Sphere { n, radius_sq } | FactorModel::Hemisphere { n, radius_sq } => {
            let hemisphere = matches!(spec.model(), FactorModel::Hemisphere { .. });
            let kind = if hemisphere { "even-harmonic" } else { "harmonic" };
            if n > 4 {
                report.push(
                    format!("{name}: multiplicities vs {kind} dimensions"),
                    true,
                    format!("dimension {n} beyond the oracle's range, nothing compared"),
                );
                return Ok(());
            }
            let top: u32 = if hemisphere { 10 } else { 12 };
            let k = top as i64;
            let bound = Rational::from_integer((k * (k + n as i64 - 1)).into()) / radius_sq;
            let levels = spec.levels_up_to(&own_bound(bound))?;
            let mut bad = Vec::new();
            for l in &levels {
                let k = l.index as u32;
                let expected = if hemisphere {
                    oracle::even_harmonic_dimension(n, k)?
                } else {
                    oracle::harmonic_dimension(n, k)?
                };
                if expected != l.multiplicity {
                    bad.push(format!("k = {k}: {} vs {expected}", l.multiplicity));
                }
            }
            if levels.len() != top as usize + 1 {
                bad.push(format!("{} levels listed up to degree {top}", levels.len()));
            }
            report.push(
                format!("{name}: multiplicities vs {kind} dimensions"),
                bad.is_empty(),
                if bad.is_empty() {
                    format!("{} levels agree", levels.len())
                } else {
                    bad.join("; ")
                },
            );
        }
        FactorModel::FlatTorus { squared_lengths } => {
            let pi_sq = std::f64::consts::PI.powi(2);
            let lengths: Vec<f64> = squared_lengths
                .iter()
                .map(|l| {
                    let c = Scalar::Exact(l.coefficient.clone()).to_f64();
                    if l.times_pi_sq {
                        c * pi_sq
                    } else {
                        c
                    }
                })
                .collect();
            let smallest = lengths.iter().cloned().fold(f64::INFINITY, f64::min);
            // about a dozen shells along the longest side
            let bound = 4.0 * pi_sq / smallest * 12.5;
            let expected = oracle::lattice_levels(&lengths, bound);
            let own = Scalar::parse_exact(&format!("{:.15e}", bound / unit))?;
            let levels = spec.levels_up_to(&(&own / &t))?;
            let got: Vec<(f64, u64)> = levels.iter().map(|l| (plain(&l.value), l.multiplicity)).collect();
            let agree = got.len() == expected.len()
                && got
                    .iter()
                    .zip(&expected)
                    .all(|(a, b)| a.1 == b.1 && (a.0 - b.0).abs() <= 1e-9 * b.0.max(1.0));
            report.push(
                format!("{name}: torus levels vs lattice enumeration"),
                agree,
                if agree {
                    format!("{} levels agree", got.len())
                } else {
                    format!("engine {got:?}, lattice {expected:?}")
                },
            );
        }
        FactorModel::Custom => report.push(
            format!("{name}: custom spectrum"),
            true,
            "tabulated, no closed form to compare",
        ),
    }
    Ok(())
}

/// Engine results for `engine` against oracle recomputation on `reference`.
pub fn verify_family(
    engine: &ProductFamily,
    reference: &ProductFamily,
    options: &VerifyOptions,
) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    verify_factor(engine.factor1(), "factor 1", &mut report)?;
    verify_factor(engine.factor2(), "factor 2", &mut report)?;

    let window = &options.window;
    let lambda = match &options.lambda {
        Some(l) => l.clone(),
        None => required_bound(engine, window)?,
    };
    let instants = match degeneracy_instants(engine, window, &lambda) {
        Ok(v) => v,
        Err(e @ Error::DegeneratePair { .. }) => return Err(e),
        Err(e) => {
            report.push("degeneracy instants", false, e.to_string());
            return Ok(report);
        }
    };

    let oracle_lambda = lambda.to_f64() * (1.0 + 1e-9) + 1e-9;
    let lo = window.min().to_f64();
    let hi = window.max().to_f64();
    match oracle::dense_scan_degeneracy(reference, lo, hi, options.samples, oracle_lambda) {
        Ok(brackets) => {
            let mut problems = Vec::new();
            for inst in &instants {
                let s = inst.s.to_f64();
                let hits = brackets.iter().filter(|b| b.contains(s)).count();
                if hits != 1 {
                    problems.push(format!("engine instant {} in {hits} brackets", inst.s));
                }
            }
            for b in &brackets {
                let hits = instants.iter().filter(|i| b.contains(i.s.to_f64())).count();
                if hits != 1 {
                    problems.push(format!(
                        "bracket [{:.12}, {:.12}] holds {hits} engine instants",
                        b.lo, b.hi
                    ));
                }
            }
            report.push(
                "instants vs dense scan",
                problems.is_empty(),
                if problems.is_empty() {
                    format!("{} instants agree", instants.len())
                } else {
                    problems.join("; ")
                },
            );
        }
        Err(e) => report.push("instants vs dense scan", false, e.to_string()),
    }

    let mut problems = Vec::new();
    let mut compared = 0;
    for inst in &instants {
        let jump = index_jump(engine, inst)?;
        for (label, t, n) in [("-", &inst.s - &jump.epsilon, jump.n_minus), ("+", &inst.s + &jump.epsilon, jump.n_plus)] {
            let bound = engine.critical_value_at(&t)?.to_f64().max(0.0) * (1.0 + 1e-9) + 1e-9;
            match oracle::brute_force_index(reference, t.to_f64(), bound) {
                Ok(b) if b == n => compared += 1,
                Ok(b) => problems.push(format!("n at {}{label}: engine {n}, brute force {b}", inst.s)),
                Err(e) => problems.push(format!("n at {}{label}: {e}", inst.s)),
            }
        }
        let branch_jump = inst.jump;
        if jump.observed_jump() != branch_jump {
            problems.push(format!(
                "s = {}: index moves {} -> {} but branches predict {branch_jump}",
                inst.s, jump.n_minus, jump.n_plus
            ));
        }
    }
    for t in probes(lo, hi, options.index_probes) {
        let s = Scalar::parse_exact(&format!("{t:.6e}"))?.in_mode(engine.mode());
        let n = match morse_index(engine, &s) {
            Ok(n) => n,
            Err(Error::AtDegeneracyInstant(_)) => continue,
            Err(e) => return Err(e),
        };
        let bound = engine.critical_value_at(&s)?.to_f64().max(0.0) * (1.0 + 1e-9) + 1e-9;
        match oracle::brute_force_index(reference, s.to_f64(), bound) {
            Ok(b) if b == n => compared += 1,
            Ok(b) => problems.push(format!("n at {s}: engine {n}, brute force {b}")),
            Err(e) => problems.push(format!("n at {s}: {e}")),
        }
    }
    report.push(
        "Morse index vs brute force",
        problems.is_empty(),
        if problems.is_empty() {
            format!("{compared} indices agree")
        } else {
            problems.join("; ")
        },
    );

    let mut problems = Vec::new();
    for t in probes(lo, hi, 5) {
        let s = Scalar::parse_exact(&format!("{t:.6e}"))?.in_mode(engine.mode());
        let bound = engine.critical_value_at(&s)?.max(&Scalar::zero().in_mode(engine.mode())).clone();
        let bound = &bound + &Scalar::int(5).in_mode(engine.mode());
        let ours = match engine.spectrum_below(&s, &bound) {
            Ok(v) => v,
            Err(Error::IncompleteSpectrum { .. }) => continue,
            Err(e) => return Err(e),
        };
        let theirs = match oracle::brute_force_product_spectrum(reference, s.to_f64(), bound.to_f64()) {
            Ok(v) => v,
            Err(e) => {
                problems.push(format!("s = {s}: {e}"));
                continue;
            }
        };
        let agree = ours.len() == theirs.len()
            && ours.iter().zip(&theirs).all(|(a, b)| {
                let v = a.value.to_f64() * unit_of(engine);
                a.multiplicity == b.1 && (v - b.0).abs() <= 1e-9 * b.0.abs().max(1.0)
            });
        if !agree {
            let ours: Vec<(f64, u64)> = ours.iter().map(|e| (e.value.to_f64() * unit_of(engine), e.multiplicity)).collect();
            problems.push(format!("s = {s}: engine {ours:?}, brute force {theirs:?}"));
        }
    }
    report.push(
        "product spectrum vs brute force",
        problems.is_empty(),
        if problems.is_empty() {
            "spectra agree at 5 parameters".to_string()
        } else {
            problems.join("; ")
        },
    );
    Ok(report)
}

fn unit_of(fam: &ProductFamily) -> f64 {
    match fam.factor1().unit() {
        SpectralUnit::One => 1.0,
        SpectralUnit::PiSquared => std::f64::consts::PI.powi(2),
    }
}

/// Log-spaced interior points of `(lo, hi)` that avoid simple rationals.
fn probes(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let step = (hi / lo).ln() / (count + 1) as f64;
    (1..=count)
        .map(|k| lo * (step * k as f64 + 0.0137).exp())
        .filter(|t| *t < hi)
        .collect()
}
