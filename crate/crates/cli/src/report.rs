//! Report rendering. JSON carries every number as the same string the text
//! table shows, so the two can be compared field by field.

use std::fmt::Write as _;

use serde::Serialize;
use yamabe::bifurcation::FamilyClassification;
use yamabe::verify::VerifyReport;
use yamabe::{FactorSpectrum, Level, NumericMode, ProductFamily, Scalar};

use crate::config::Format;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BranchJson {
    pub i: usize,
    pub j: usize,
    pub multiplicity: u64,
    pub monotonicity: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct InstantJson {
    pub s: String,
    pub branches: Vec<BranchJson>,
    pub multiplicity: u64,
    pub n_minus: u64,
    pub n_plus: u64,
    pub certified: bool,
    pub jump: i64,
    pub side: String,
    pub merged: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct WindowJson {
    pub min: String,
    pub max: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ScanReport {
    pub family: String,
    pub classification: String,
    pub window: WindowJson,
    pub lambda_max: String,
    pub mode: String,
    pub instants: Vec<InstantJson>,
    pub findings: Vec<String>,
}

fn mode_name(mode: NumericMode) -> String {
    match mode {
        NumericMode::Exact => "exact".into(),
        NumericMode::Float { tol } => format!("float(tol={tol:e})"),
    }
}

impl ScanReport {
    pub fn new(fam: &ProductFamily, c: &FamilyClassification) -> Self {
        let instants = c
            .instants
            .iter()
            .map(|ci| InstantJson {
                s: ci.instant.s.to_string(),
                branches: ci
                    .instant
                    .branch_refs()
                    .iter()
                    .map(|b| BranchJson {
                        i: b.i,
                        j: b.j,
                        multiplicity: b.multiplicity,
                        monotonicity: b.monotonicity.to_string(),
                    })
                    .collect(),
                multiplicity: ci.instant.total_multiplicity,
                n_minus: ci.jump.n_minus,
                n_plus: ci.jump.n_plus,
                certified: ci.jump.certified,
                jump: ci.instant.jump,
                side: ci.side.to_string(),
                merged: ci.instant.merged,
            })
            .collect();
        ScanReport {
            family: fam.label(),
            classification: c.case.to_string(),
            window: WindowJson {
                min: c.window.min().to_string(),
                max: c.window.max().to_string(),
            },
            lambda_max: c.lambda.to_string(),
            mode: mode_name(fam.mode()),
            instants,
            findings: c.findings.clone(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }

    fn branch_cell(inst: &InstantJson) -> String {
        inst.branches
            .iter()
            .map(|b| format!("({},{})x{}", b.i, b.j, b.multiplicity))
            .collect::<Vec<_>>()
            .join(";")
    }

    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "family: {}", self.family);
        let _ = writeln!(out, "classification: {}", self.classification);
        let _ = writeln!(out, "window: [{}, {}]", self.window.min, self.window.max);
        let _ = writeln!(out, "lambda_max: {}", self.lambda_max);
        let _ = writeln!(out, "mode: {}", self.mode);
        let _ = writeln!(out, "instants: {}", self.instants.len());
        if !self.instants.is_empty() {
            let header = ["s", "branches", "multiplicity", "n_minus", "n_plus", "certified", "side"];
            let rows: Vec<[String; 7]> = self
                .instants
                .iter()
                .map(|i| {
                    [
                        i.s.clone() + if i.merged { "*" } else { "" },
                        Self::branch_cell(i),
                        i.multiplicity.to_string(),
                        i.n_minus.to_string(),
                        i.n_plus.to_string(),
                        if i.certified { "certified" } else { "uncertified" }.to_string(),
                        i.side.clone(),
                    ]
                })
                .collect();
            let mut widths = header.map(str::len);
            for r in &rows {
                for (w, cell) in widths.iter_mut().zip(r) {
                    *w = (*w).max(cell.len());
                }
            }
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let _ = writeln!(out, "{}", line(header.to_vec()));
            for r in &rows {
                let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
            }
            if self.instants.iter().any(|i| i.merged) {
                let _ = writeln!(out, "* zeros merged within tolerance");
            }
        }
        for f in &self.findings {
            let _ = writeln!(out, "finding: {f}");
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = String::from("s,branches,multiplicity,n_minus,n_plus,certified,side,merged\n");
        for i in &self.instants {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                i.s,
                Self::branch_cell(i),
                i.multiplicity,
                i.n_minus,
                i.n_plus,
                i.certified,
                i.side,
                i.merged
            );
        }
        out
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct LevelJson {
    pub index: usize,
    pub value: String,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SpectrumReport {
    pub factor: String,
    pub dim: u32,
    pub scalar_curvature: String,
    pub has_boundary: bool,
    pub boundary_minimal: bool,
    pub unit: String,
    pub below: String,
    pub mode: String,
    pub levels: Vec<LevelJson>,
}

impl SpectrumReport {
    pub fn new(spec: &FactorSpectrum, below: &Scalar, levels: &[Level]) -> Self {
        SpectrumReport {
            factor: spec.label().to_string(),
            dim: spec.dim(),
            scalar_curvature: spec.scalar_curvature().to_string(),
            has_boundary: spec.has_boundary(),
            boundary_minimal: spec.boundary_minimal(),
            unit: spec.unit().to_string(),
            below: below.to_string(),
            mode: mode_name(spec.mode()),
            levels: levels
                .iter()
                .map(|l| LevelJson {
                    index: l.index,
                    value: l.value.to_string(),
                    multiplicity: l.multiplicity,
                })
                .collect(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Csv => {
                let mut out = String::from("index,value,multiplicity\n");
                for l in &self.levels {
                    let _ = writeln!(out, "{},{},{}", l.index, l.value, l.multiplicity);
                }
                out
            }
            Format::Text => {
                let mut out = String::new();
                let _ = writeln!(out, "factor: {}", self.factor);
                let _ = writeln!(out, "dim: {}", self.dim);
                let _ = writeln!(out, "scalar_curvature: {}", self.scalar_curvature);
                let _ = writeln!(out, "has_boundary: {}", self.has_boundary);
                let _ = writeln!(out, "boundary_minimal: {}", self.boundary_minimal);
                let _ = writeln!(out, "unit: {}", self.unit);
                let _ = writeln!(out, "below: {}", self.below);
                let _ = writeln!(out, "mode: {}", self.mode);
                let width = self.levels.iter().map(|l| l.value.len()).max().unwrap_or(5).max(5);
                let _ = writeln!(out, "index  {:<width$}  multiplicity", "value");
                for l in &self.levels {
                    let _ = writeln!(out, "{:<5}  {:<width$}  {}", l.index, l.value, l.multiplicity);
                }
                out
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct VerifyJson {
    pub family: String,
    pub lambda_max: String,
    pub mode: String,
    pub passed: bool,
    pub checks: Vec<CheckJson>,
}

pub fn render_verify(fam: &ProductFamily, lambda: &Scalar, report: &VerifyReport, format: Format) -> String {
    let json = VerifyJson {
        family: fam.label(),
        lambda_max: lambda.to_string(),
        mode: mode_name(fam.mode()),
        passed: report.passed(),
        checks: report
            .checks
            .iter()
            .map(|c| CheckJson {
                name: c.name.clone(),
                passed: c.passed,
                detail: c.detail.clone(),
            })
            .collect(),
    };
    match format {
        Format::Json => serde_json::to_string_pretty(&json).expect("report serializes") + "\n",
        Format::Csv => {
            let mut out = String::from("check,passed,detail\n");
            for c in &json.checks {
                let _ = writeln!(out, "\"{}\",{},\"{}\"", c.name, c.passed, c.detail.replace('"', "'"));
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "family: {}", json.family);
            let _ = writeln!(out, "lambda_max: {}", json.lambda_max);
            let _ = writeln!(out, "mode: {}", json.mode);
            for c in &report.checks {
                let _ = writeln!(out, "{c}");
            }
            let _ = writeln!(out, "{}", if json.passed { "all checks passed" } else { "verification FAILED" });
            out
        }
    }
}
