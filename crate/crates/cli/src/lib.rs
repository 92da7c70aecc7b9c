//! The `yamabe` command line: `spectrum`, `scan`, `branches` and `verify`.
//!
//! Exit codes: 0 success, 1 engine or verification failure, 2 degenerate
//! pair (no index-jump certification possible), 3 configuration error.

pub mod config;
pub mod report;

#[cfg(test)]
mod end_to_end;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;

use clap::{Arg, ArgAction, ArgMatches, Command};
use yamabe::bifurcation::{branches_within, enumeration_bounds, required_bound};
use yamabe::scalar::format_f64;
use yamabe::verify::{verify_family, VerifyOptions};
use yamabe::{classify_family, degeneracy_instants, Error, FamilyCase, NumericMode};

use crate::config::{Format, ScanConfig};
use crate::report::{render_verify, ScanReport, SpectrumReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn failure(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_FAILURE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::DegeneratePair { .. } => EXIT_DEGENERATE,
            Error::InsufficientBound { .. }
            | Error::IncompleteSpectrum { .. }
            | Error::AtDegeneracyInstant(_)
            | Error::NotAnInstant(_)
            | Error::NonIsolatedInstant(_)
            | Error::InexactSqrt(_)
            | Error::Oracle(_) => EXIT_FAILURE,
            _ => EXIT_CONFIG,
        };
        let message = match &e {
            Error::DegeneratePair { i_star, j_star } => format!(
                "degenerate pair at (i*, j*) = ({i_star}, {j_star}): the index-jump criterion is inapplicable"
            ),
            _ => e.to_string(),
        };
        CliError { code, message }
    }
}

fn long_name(id: &'static str) -> &'static str {
    match id {
        "lambda_max" => "lambda-max",
        other => other,
    }
}

fn common_args(cmd: Command) -> Command {
    let many = |name: &'static str, value: &'static str, help: &'static str| {
        Arg::new(name)
            .long(long_name(name))
            .value_name(value)
            .action(ArgAction::Append)
            .help(help)
    };
    let one = |name: &'static str, value: &'static str, help: &'static str| {
        Arg::new(name)
            .long(long_name(name))
            .value_name(value)
            .action(ArgAction::Set)
            .help(help)
    };
    cmd.arg(many("sphere", "N", "round sphere S^N factor"))
        .arg(many("hemisphere", "N", "hemisphere S^N_+ factor (Neumann)"))
        .arg(many("r2", "Q", "squared radius of the preceding sphere or hemisphere (default 1)"))
        .arg(many("interval", "LAMBDA", "interval [0, pi*LAMBDA] factor (Neumann)"))
        .arg(many("torus", "L2,L2,...", "flat torus with these squared side lengths, e.g. 4pi2,4pi2"))
        .arg(many("custom", "PATH", "tabulated spectrum file"))
        .arg(one("window", "MIN:MAX", "parameter window (default 1/10:10)"))
        .arg(one("lambda_max", "Q", "completeness bound (default: the bound the window needs)"))
        .arg(one("mode", "MODE", "exact or float"))
        .arg(one("tol", "T", "tolerance for floating mode"))
        .arg(one("format", "FORMAT", "text, json or csv"))
        .arg(one("out", "PATH", "write the report here instead of stdout"))
        .arg(one("config", "PATH", "key = value file; command-line flags take precedence"))
}

pub fn command() -> Command {
    Command::new("yamabe")
        .about("Degeneracy and bifurcation instants of product metrics with minimal boundary")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(
            common_args(Command::new("spectrum").about("eigenvalue table of one factor"))
                .arg(Arg::new("below").long("below").value_name("Q").help("list eigenvalues strictly below Q (default 10)")),
        )
        .subcommand(common_args(
            Command::new("scan").about("classify a family and list its degeneracy instants"),
        ))
        .subcommand(
            common_args(Command::new("branches").about("CSV samples of the eigenvalue branches"))
                .arg(Arg::new("samples").long("samples").value_name("N").help("sample count (default 200)"))
                .arg(
                    Arg::new("branch_limit")
                        .long("branch-limit")
                        .value_name("K")
                        .help("zeroless branches to include (default 3)"),
                ),
        )
        .subcommand(
            common_args(Command::new("verify").about("check the engine against the oracle suite"))
                .arg(Arg::new("samples").long("samples").value_name("N").help("dense-scan samples (default 100000)"))
                .arg(
                    Arg::new("reference_custom")
                        .long("reference-custom")
                        .value_name("PATH")
                        .action(ArgAction::Append)
                        .help("reference spectrum for the oracles, replacing custom factors in order"),
                ),
        )
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return code;
        }
    };
    match dispatch(&matches) {
        Ok((cfg, code, text)) => match &cfg.out {
            Some(path) => match fs::write(path, &text) {
                Ok(()) => code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    EXIT_CONFIG
                }
            },
            None => {
                let _ = write!(stdout, "{text}");
                code
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(matches: &ArgMatches) -> Result<(ScanConfig, i32, String), CliError> {
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let cfg = ScanConfig::from_matches(sub)?;
    let (code, text) = match name {
        "spectrum" => (EXIT_OK, cmd_spectrum(&cfg)?),
        "scan" => (EXIT_OK, cmd_scan(&cfg)?),
        "branches" => (EXIT_OK, cmd_branches(&cfg)?),
        "verify" => cmd_verify(&cfg)?,
        other => unreachable!("unknown subcommand {other}"),
    };
    Ok((cfg, code, text))
}

pub fn cmd_spectrum(cfg: &ScanConfig) -> Result<String, CliError> {
    let spec = cfg.single_factor()?;
    let below = cfg.below(spec.mode())?;
    let levels = spec.levels_below(&below)?;
    Ok(SpectrumReport::new(&spec, &below, &levels).render(cfg.format()))
}

fn family_mode(cfg: &ScanConfig) -> Result<(yamabe::ProductFamily, NumericMode), CliError> {
    let fam = cfg.family()?;
    let mode = fam.mode();
    Ok((fam, mode))
}

pub fn cmd_scan(cfg: &ScanConfig) -> Result<String, CliError> {
    let (fam, mode) = family_mode(cfg)?;
    let window = cfg.window(mode)?;
    let lambda = match cfg.lambda_max(mode)? {
        Some(l) => l,
        None => required_bound(&fam, &window)?,
    };
    let c = classify_family(&fam, &window, &lambda)?;
    if c.case == FamilyCase::DegeneratePair {
        return Err(Error::DegeneratePair {
            i_star: c.critical.i_star,
            j_star: c.critical.j_star,
        }
        .into());
    }
    Ok(ScanReport::new(&fam, &c).render(cfg.format()))
}

pub fn cmd_branches(cfg: &ScanConfig) -> Result<String, CliError> {
    let (fam, mode) = family_mode(cfg)?;
    let window = cfg.window(mode)?;
    let lambda = match cfg.lambda_max(mode)? {
        Some(l) => l,
        None => required_bound(&fam, &window)?,
    };
    let samples = cfg.samples.unwrap_or(200);
    if samples < 2 {
        return Err(CliError::config("branches needs at least 2 samples"));
    }
    let limit = cfg.branch_limit.unwrap_or(3);

    let mut chosen = Vec::new();
    for inst in degeneracy_instants(&fam, &window, &lambda)? {
        chosen.extend(inst.branches);
    }
    let (need1, need2) = enumeration_bounds(&fam, &window)?;
    let mut zeroless: Vec<_> = branches_within(&fam, &need1, &need2)?
        .into_iter()
        .filter(|b| b.zero().map_or(true, |s| !window.contains(&s)))
        .collect();
    zeroless.sort_by_key(|b| (b.i + b.j, b.i, b.j));
    chosen.extend(zeroless.into_iter().take(limit));
    chosen.sort_by_key(|b| (b.i, b.j));

    let mut out = String::new();
    let _ = writeln!(out, "# family: {}", fam.label());
    let _ = writeln!(out, "# window: [{}, {}]", window.min(), window.max());
    let _ = writeln!(out, "# lambda_max: {}", lambda);
    for b in &chosen {
        let zero = b.zero().map_or("none".to_string(), |s| s.to_string());
        let _ = writeln!(
            out,
            "# sigma_{}_{}: i={} j={} multiplicity={} monotonicity={} zero={}",
            b.i, b.j, b.i, b.j, b.multiplicity, b.monotonicity(), zero
        );
    }
    let mut header = vec!["s".to_string()];
    header.extend(chosen.iter().map(|b| format!("sigma_{}_{}", b.i, b.j)));
    let _ = writeln!(out, "{}", header.join(","));
    let step = &(window.max() - window.min()) / &yamabe::Scalar::int(samples as i64 - 1);
    for k in 0..samples {
        let s = if k + 1 == samples {
            window.max().clone()
        } else {
            window.min() + &(&step * &yamabe::Scalar::int(k as i64))
        };
        let mut row = vec![format_f64(s.to_f64())];
        for b in &chosen {
            row.push(format_f64(b.value_at(&s)?.to_f64()));
        }
        let _ = writeln!(out, "{}", row.join(","));
    }
    Ok(out)
}

pub fn cmd_verify(cfg: &ScanConfig) -> Result<(i32, String), CliError> {
    let (fam, mode) = family_mode(cfg)?;
    let reference = cfg.reference_family()?;
    let window = cfg.window(mode)?;
    let mut options = VerifyOptions::new(window.clone());
    options.lambda = cfg.lambda_max(mode)?;
    if let Some(n) = cfg.samples {
        options.samples = n;
    }
    let lambda = match &options.lambda {
        Some(l) => l.clone(),
        None => required_bound(&fam, &window)?,
    };
    let report = verify_family(&fam, &reference, &options)?;
    let code = if report.passed() { EXIT_OK } else { EXIT_FAILURE };
    let format = cfg.format.unwrap_or(Format::Text);
    Ok((code, render_verify(&fam, &lambda, &report, format)))
}
