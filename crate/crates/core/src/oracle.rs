//! Slow, naive reference computations used to cross-check the catalog and
//! the bifurcation engine.
//!
//! Everything here runs in `f64` with dense loops and shares no code with
//! [`crate::bifurcation`]. Factor spectra are read through the public level
//! listing only.
//!
//! The interval stencil on `N` vertices `x_k = k·h`, `h = πλ/(N-1)`, is
//!
//! ```text
//! (-u_{k-1} + 2u_k - u_{k+1}) / h²,   with ghost values u_{-1} = u_1, u_N = u_{N-2}
//! ```
//!
//! which has the exact eigenvalues `(4/h²)·sin²(kπ/(2(N-1)))`, `k = 0..N-1`,
//! so the error on a fixed mode is `O(h²)`. Scaling the two end rows by
//! `1/√2` makes the matrix symmetric with off-diagonal `-√2/h²` at the ends.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::product::{Parametrization, ProductFamily};
use crate::scalar::Scalar;
use crate::spectra::FactorSpectrum;

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpectrum {
    pub grid_points: usize,
    pub spacing: f64,
    /// Lowest eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// `h²·λ_k²/12`, the leading truncation error for mode `k`.
    pub error_estimate: Vec<f64>,
}

/// First `count` Neumann eigenvalues of `-d²/dx²` on `[0, π·length_over_pi]`.
pub fn fd_interval_spectrum(length_over_pi: f64, grid_points: usize, count: usize) -> Result<GridSpectrum> {
    if grid_points < 16 {
        return Err(Error::Oracle(format!("grid of {grid_points} points, need at least 16")));
    }
    if count > grid_points / 4 {
        return Err(Error::Oracle(format!(
            "{count} eigenvalues requested from {grid_points} points, at most {} resolved",
            grid_points / 4
        )));
    }
    if !(length_over_pi > 0.0 && length_over_pi.is_finite()) {
        return Err(Error::Oracle(format!("bad interval length {length_over_pi}")));
    }
    let h = std::f64::consts::PI * length_over_pi / (grid_points - 1) as f64;
    let inv = 1.0 / (h * h);
    let diag = vec![2.0 * inv; grid_points];
    let mut off = vec![-inv; grid_points - 1];
    off[0] = -std::f64::consts::SQRT_2 * inv;
    off[grid_points - 2] = -std::f64::consts::SQRT_2 * inv;

    let radius = 4.0 * inv + 1.0;
    let mut eigenvalues = Vec::with_capacity(count);
    for k in 0..count {
        eigenvalues.push(kth_eigenvalue(&diag, &off, k, -1.0, radius));
    }
    let error_estimate = eigenvalues.iter().map(|l| h * h * l * l / 12.0).collect();
    Ok(GridSpectrum {
        grid_points,
        spacing: h,
        eigenvalues,
        error_estimate,
    })
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for k in 1..diag.len() {
        let prev = if q == 0.0 { f64::EPSILON } else { q };
        q = diag[k] - x - off[k - 1] * off[k - 1] / prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn kth_eigenvalue(diag: &[f64], off: &[f64], k: usize, lo: f64, hi: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

const PRIMES: [u64; 2] = [2_147_483_647, 1_000_000_007];

/// Which monomials to keep, by parity of the exponent of the last variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LastParity {
    Any,
    Even,
    Odd,
}

fn monomials(vars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(vars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == vars {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(vars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(vars, degree, &mut Vec::new(), &mut out);
    out
}

fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] % p != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][c], p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + p - f * y % p) % p;
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Kernel dimension of the Laplacian from degree-`k` polynomials in `vars`
/// variables to degree `k-2`. The Laplacian preserves the parity of every
/// exponent, so the matrix is split into one dense block per parity class.
fn laplacian_kernel(vars: usize, k: u32, last: LastParity) -> usize {
    let source = monomials(vars, k);
    if k < 2 {
        return source
            .iter()
            .filter(|m| parity_ok(m, last))
            .count();
    }
    let target = monomials(vars, k - 2);
    let mut blocks: HashMap<Vec<u32>, (Vec<&Vec<u32>>, Vec<&Vec<u32>>)> = HashMap::new();
    for m in source.iter().filter(|m| parity_ok(m, last)) {
        blocks.entry(m.iter().map(|e| e % 2).collect()).or_default().0.push(m);
    }
    for m in &target {
        if let Some(b) = blocks.get_mut(&m.iter().map(|e| e % 2).collect::<Vec<_>>()) {
            b.1.push(m);
        }
    }
    let mut kernel = 0;
    for (src, tgt) in blocks.values() {
        if tgt.is_empty() {
            kernel += src.len();
            continue;
        }
        let index: HashMap<&Vec<u32>, usize> = tgt.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut best = 0;
        for p in PRIMES {
            let mut rows = vec![vec![0u64; src.len()]; tgt.len()];
            for (c, m) in src.iter().enumerate() {
                for v in 0..vars {
                    let e = m[v];
                    if e < 2 {
                        continue;
                    }
                    let mut image = (*m).clone();
                    image[v] -= 2;
                    let r = index[&image];
                    rows[r][c] = (rows[r][c] + (e as u64) * (e as u64 - 1)) % p;
                }
            }
            best = best.max(rank_mod(rows, p));
        }
        kernel += src.len() - best;
    }
    kernel
}

fn parity_ok(m: &[u32], last: LastParity) -> bool {
    match last {
        LastParity::Any => true,
        LastParity::Even => m[m.len() - 1] % 2 == 0,
        LastParity::Odd => m[m.len() - 1] % 2 == 1,
    }
}

fn check_size(n: u32, k: u32, min_n: u32) -> Result<()> {
    if n < min_n || n > 4 || k > 12 {
        return Err(Error::Oracle(format!(
            "harmonic dimension for n = {n}, k = {k} outside the supported range {min_n} <= n <= 4, k <= 12"
        )));
    }
    Ok(())
}

/// Degree-`k` harmonic polynomials in `n+1` variables, i.e. spherical
/// harmonics of degree `k` on the `n`-sphere.
pub fn harmonic_dimension(n: u32, k: u32) -> Result<u64> {
    check_size(n, k, 1)?;
    Ok(laplacian_kernel(n as usize + 1, k, LastParity::Any) as u64)
}

/// Harmonic polynomials even in the last variable: Neumann eigenfunctions
/// of the hemisphere.
pub fn even_harmonic_dimension(n: u32, k: u32) -> Result<u64> {
    check_size(n, k, 2)?;
    Ok(laplacian_kernel(n as usize + 1, k, LastParity::Even) as u64)
}

/// Harmonic polynomials odd in the last variable: Dirichlet eigenfunctions
/// of the hemisphere.
pub fn odd_harmonic_dimension(n: u32, k: u32) -> Result<u64> {
    check_size(n, k, 2)?;
    Ok(laplacian_kernel(n as usize + 1, k, LastParity::Odd) as u64)
}

/// Levels `(value, multiplicity)` of the flat torus with the given squared
/// side lengths (as plain numbers), by looping over the integer box.
pub fn lattice_levels(squared_lengths: &[f64], bound: f64) -> Vec<(f64, u64)> {
    let weights: Vec<f64> = squared_lengths.iter().map(|c| 4.0 * std::f64::consts::PI.powi(2) / c).collect();
    let ranges: Vec<i64> = weights.iter().map(|w| (bound / w).sqrt().floor() as i64).collect();
    let mut values = Vec::new();
    let mut point: Vec<i64> = ranges.iter().map(|r| -r).collect();
    loop {
        let e: f64 = point.iter().zip(&weights).map(|(k, w)| (k * k) as f64 * w).sum();
        if e <= bound * (1.0 + 1e-12) {
            values.push(e);
        }
        let mut d = 0;
        loop {
            if d == point.len() {
                return group_sorted(values);
            }
            if point[d] < ranges[d] {
                point[d] += 1;
                break;
            }
            point[d] = -ranges[d];
            d += 1;
        }
    }
}

fn group_sorted(mut values: Vec<f64>) -> Vec<(f64, u64)> {
    values.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, u64)> = Vec::new();
    for v in values {
        match out.last_mut() {
            Some((w, m)) if (v - *w).abs() <= 1e-9 * w.abs().max(1.0) => *m += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

struct PlainFamily {
    first: Vec<(usize, f64, u64)>,
    second: Vec<(usize, f64, u64)>,
    r1: f64,
    r2: f64,
    m: f64,
    shrink_first: bool,
}

impl PlainFamily {
    fn load(fam: &ProductFamily, bound1: f64, bound2: f64) -> Result<Self> {
        let read = |spec: &FactorSpectrum, bound: f64| -> Result<Vec<(usize, f64, u64)>> {
            if bound < 0.0 {
                return Ok(Vec::new());
            }
            let b = match spec.mode() {
                crate::NumericMode::Exact => Scalar::parse_exact(&format!("{bound:.17e}"))?,
                crate::NumericMode::Float { tol } => Scalar::float(bound, tol)?,
            };
            Ok(spec
                .levels_up_to(&b)?
                .into_iter()
                .map(|l| (l.index, l.value.to_f64() * unit_factor(spec), l.multiplicity))
                .collect())
        };
        Ok(PlainFamily {
            first: read(fam.factor1(), bound1 / unit_factor(fam.factor1()))?,
            second: read(fam.factor2(), bound2 / unit_factor(fam.factor2()))?,
            r1: fam.factor1().scalar_curvature().to_f64(),
            r2: fam.factor2().scalar_curvature().to_f64(),
            m: (fam.factor1().dim() + fam.factor2().dim()) as f64,
            shrink_first: fam.parametrization() == Parametrization::ShrinkFirst,
        })
    }

    fn weights(&self, s: f64) -> (f64, f64) {
        if self.shrink_first {
            (s, 1.0)
        } else {
            (1.0, 1.0 / s)
        }
    }

    fn theta(&self, s: f64) -> f64 {
        let (w1, w2) = self.weights(s);
        (w1 * self.r1 + w2 * self.r2) / (self.m - 1.0)
    }

    fn sigma(&self, s: f64, rho1: f64, rho2: f64) -> f64 {
        let (w1, w2) = self.weights(s);
        w1 * rho1 + w2 * rho2 - self.theta(s)
    }
}

/// Eigenvalues in units of `π²` are compared as plain numbers.
fn unit_factor(spec: &FactorSpectrum) -> f64 {
    match spec.unit() {
        crate::SpectralUnit::One => 1.0,
        crate::SpectralUnit::PiSquared => std::f64::consts::PI.powi(2),
    }
}

/// `n_s` by a double loop over all pairs with `i + j > 0`,
/// `ρ_i⁽¹⁾ <= Λ/w₁` and `ρ_j⁽²⁾ <= Λ/w₂` (`Λ·s` for the second factor of
/// `g₁ ⊕ s·g₂`).
pub fn brute_force_index(fam: &ProductFamily, s: f64, lambda: f64) -> Result<u64> {
    if !(s > 0.0) {
        return Err(Error::Oracle(format!("parameter {s} must be positive")));
    }
    let probe = PlainFamily::load(fam, 0.0, 0.0)?;
    let theta = probe.theta(s);
    if lambda < theta {
        return Err(Error::Oracle(format!(
            "bound {lambda} below the critical value {theta} at s = {s}"
        )));
    }
    let (w1, w2) = probe.weights(s);
    let plain = PlainFamily::load(fam, lambda / w1, lambda / w2)?;
    let mut count = 0;
    for &(i, rho1, m1) in &plain.first {
        for &(j, rho2, m2) in &plain.second {
            if i + j == 0 {
                continue;
            }
            if plain.sigma(s, rho1, rho2) < 0.0 {
                count += m1 * m2;
            }
        }
    }
    Ok(count)
}

/// Spectrum of `Δ` on the product at `s` below `bound` (strict), merged by
/// value, by a double loop.
pub fn brute_force_product_spectrum(fam: &ProductFamily, s: f64, bound: f64) -> Result<Vec<(f64, u64)>> {
    let probe = PlainFamily::load(fam, 0.0, 0.0)?;
    let (w1, w2) = probe.weights(s);
    let plain = PlainFamily::load(fam, bound / w1, bound / w2)?;
    let mut values = Vec::new();
    for &(_, rho1, m1) in &plain.first {
        for &(_, rho2, m2) in &plain.second {
            let v = w1 * rho1 + w2 * rho2;
            if v < bound * (1.0 - 1e-12) {
                values.push((v, m1 * m2));
            }
        }
    }
    values.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, u64)> = Vec::new();
    for (v, m) in values {
        match out.last_mut() {
            Some((w, n)) if (v - *w).abs() <= 1e-9 * w.abs().max(1.0) => *n += m,
            _ => out.push((v, m)),
        }
    }
    Ok(out)
}

/// An interval of width at most `1e-10·s` where some branch changes sign.
#[derive(Clone, Debug, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub branches: Vec<(usize, usize)>,
}

impl Bracket {
    pub fn contains(&self, s: f64) -> bool {
        let slack = 1e-12 * s.abs();
        self.lo - slack <= s && s <= self.hi + slack
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Sign changes of every branch with `ρ_i⁽¹⁾, ρ_j⁽²⁾ <= Λ` over a
/// log-spaced grid of `samples` points spanning `[lo, hi]`.
pub fn dense_scan_degeneracy(
    fam: &ProductFamily,
    lo: f64,
    hi: f64,
    samples: usize,
    lambda: f64,
) -> Result<Vec<Bracket>> {
    if samples < 1000 {
        return Err(Error::Oracle(format!("{samples} samples, need at least 1000")));
    }
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Oracle(format!("bad scan window ({lo}, {hi})")));
    }
    let plain = PlainFamily::load(fam, lambda, lambda)?;
    let step = (hi / lo).ln() / (samples - 1) as f64;
    let grid: Vec<f64> = (0..samples)
        .map(|k| if k + 1 == samples { hi } else { lo * (step * k as f64).exp() })
        .collect();

    // (cell index, bracket) per sign change
    let mut found: Vec<(usize, Bracket)> = Vec::new();
    for &(i, rho1, _) in &plain.first {
        for &(j, rho2, _) in &plain.second {
            if i + j == 0 {
                continue;
            }
            let f = |s: f64| plain.sigma(s, rho1, rho2);
            let sign = |s: f64| {
                let v = f(s);
                if v < 0.0 {
                    -1
                } else if v > 0.0 {
                    1
                } else {
                    0
                }
            };
            let scale = rho1.abs() + rho2.abs() + plain.r1.abs() + plain.r2.abs() + 1.0;
            let negligible = |s: f64| {
                let (w1, w2) = plain.weights(s);
                f(s).abs() <= 1e-13 * scale * (w1 + w2)
            };
            if negligible(lo) && negligible(hi) && negligible((lo * hi).sqrt()) {
                return Err(Error::Oracle(format!("branch ({i}, {j}) vanishes identically")));
            }
            let mut signs: Vec<i32> = grid.iter().map(|&s| sign(s)).collect();
            // the window is closed: a zero sitting on an endpoint counts
            for end in [0, samples - 1] {
                let s = grid[end];
                let (w1, w2) = plain.weights(s);
                if f(s).abs() <= 1e-12 * scale * (w1 + w2) {
                    signs[end] = 0;
                }
            }
            for c in 0..samples - 1 {
                let (sa, sb) = (signs[c], signs[c + 1]);
                let hit = (sa != 0 && sb != 0 && sa != sb) || (sa == 0 && c == 0) || sb == 0;
                if !hit {
                    continue;
                }
                let (mut a, mut b) = (grid[c], grid[c + 1]);
                if sb == 0 {
                    a = b;
                } else if sa == 0 {
                    b = a;
                } else {
                    while b - a > 1e-10 * a {
                        let mid = 0.5 * (a + b);
                        let sm = sign(mid);
                        if sm == 0 {
                            a = mid;
                            b = mid;
                        } else if sm == sa {
                            a = mid;
                        } else {
                            b = mid;
                        }
                    }
                }
                found.push((c, Bracket { lo: a, hi: b, branches: vec![(i, j)] }));
            }
        }
    }
    found.sort_by(|x, y| x.1.lo.total_cmp(&y.1.lo));

    let mut merged: Vec<(usize, Bracket)> = Vec::new();
    for (cell, br) in found {
        match merged.last_mut() {
            Some((_, last)) if br.lo <= last.hi + 1e-10 * last.hi => {
                last.hi = last.hi.max(br.hi);
                last.branches.extend(br.branches);
            }
            Some((last_cell, last)) if *last_cell == cell => {
                return Err(Error::Oracle(format!(
                    "instants near {} and {} share one grid cell; rerun with more samples",
                    last.midpoint(),
                    br.midpoint()
                )));
            }
            _ => merged.push((cell, br)),
        }
    }
    Ok(merged
        .into_iter()
        .map(|(_, mut b)| {
            b.branches.sort();
            b
        })
        .collect())
}
