//! Eigenvalue branches of `J_s`, degeneracy instants, Morse indices and the
//! classification of a product family.
//!
//! Every branch is `σ_{i,j}(s) = w₁(s)·a + w₂(s)·b` with
//! `a = ρ_i - R₁/(m-1)`, `b = ρ_j - R₂/(m-1)` and the metric weights of the
//! family (`(1, 1/s)` for `g₁ ⊕ s·g₂`). A branch that is not identically zero
//! is strictly monotone or constant, so it vanishes at most once, at
//! `s = -b/a`, and only when `a` and `b` have strictly opposite signs.
//!
//! The Morse index counts negative branches over the zero-mean subspace, so
//! the constant eigenfunction (`(i, j) = (0, 0)`) never enters. Counting it
//! as well would add one wherever `R(s) > 0` and leave every jump unchanged.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::product::{require_positive, Parametrization, ProductFamily};
use crate::scalar::{NumericMode, Rational, Scalar};

/// Closed parameter window `[min, max]` with `0 < min < max`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanWindow {
    min: Scalar,
    max: Scalar,
}

impl ScanWindow {
    pub fn new(min: Scalar, max: Scalar) -> Result<Self> {
        if !min.is_positive() {
            return Err(Error::InvalidWindow(format!("lower end {min} must be positive")));
        }
        if min.compare(&max) != Ordering::Less {
            return Err(Error::InvalidWindow(format!("empty window [{min}, {max}]")));
        }
        Ok(ScanWindow { min, max })
    }

    pub fn min(&self) -> &Scalar {
        &self.min
    }

    pub fn max(&self) -> &Scalar {
        &self.max
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        s.compare(&self.min) != Ordering::Less && s.compare(&self.max) != Ordering::Greater
    }
}

impl fmt::Display for ScanWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.min, self.max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
}

impl fmt::Display for Monotonicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Monotonicity::Increasing => "increasing",
            Monotonicity::Decreasing => "decreasing",
            Monotonicity::Constant => "constant",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenBranch {
    pub i: usize,
    pub j: usize,
    /// `ρ_i⁽¹⁾ - T₁`
    pub a: Scalar,
    /// `ρ_j⁽²⁾ - T₂`
    pub b: Scalar,
    pub multiplicity: u64,
    pub parametrization: Parametrization,
}

impl EigenBranch {
    pub fn new(
        i: usize,
        j: usize,
        a: Scalar,
        b: Scalar,
        multiplicity: u64,
        parametrization: Parametrization,
    ) -> Result<Self> {
        if i == 0 && j == 0 {
            return Err(Error::InvalidParameter(
                "the (0, 0) branch belongs to the constants and is excluded".into(),
            ));
        }
        if multiplicity == 0 {
            return Err(Error::InvalidParameter("branch multiplicity must be positive".into()));
        }
        Ok(EigenBranch {
            i,
            j,
            a,
            b,
            multiplicity,
            parametrization,
        })
    }

    /// Direction of `s ↦ σ(s)`. For `g₁ ⊕ s·g₂`, `σ' = -b/s²`.
    pub fn monotonicity(&self) -> Monotonicity {
        let driver = match self.parametrization {
            Parametrization::ScaleSecond => -&self.b,
            Parametrization::ShrinkFirst => self.a.clone(),
        };
        match driver.sign() {
            Ordering::Greater => Monotonicity::Increasing,
            Ordering::Less => Monotonicity::Decreasing,
            Ordering::Equal => Monotonicity::Constant,
        }
    }

    pub fn value_at(&self, s: &Scalar) -> Result<Scalar> {
        require_positive(s)?;
        Ok(match self.parametrization {
            Parametrization::ScaleSecond => &self.a + &(&self.b / s),
            Parametrization::ShrinkFirst => &(s * &self.a) + &self.b,
        })
    }

    /// The unique positive zero, present iff `a` and `b` have strictly
    /// opposite signs.
    pub fn zero(&self) -> Option<Scalar> {
        match (self.a.sign(), self.b.sign()) {
            (Ordering::Greater, Ordering::Less) | (Ordering::Less, Ordering::Greater) => {
                Some(-&(&self.b / &self.a))
            }
            _ => None,
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

pub fn sigma_value(branch: &EigenBranch, s: &Scalar) -> Result<Scalar> {
    branch.value_at(s)
}

pub fn branch_zero(branch: &EigenBranch) -> Option<Scalar> {
    branch.zero()
}

/// Every branch whose factor eigenvalues satisfy `ρ_i⁽¹⁾ <= bound1` and
/// `ρ_j⁽²⁾ <= bound2`, ordered by `(i, j)`.
pub fn branches_within(
    fam: &ProductFamily,
    bound1: &Scalar,
    bound2: &Scalar,
) -> Result<Vec<EigenBranch>> {
    let t1 = fam.threshold1();
    let t2 = fam.threshold2();
    let first = fam.factor1().levels_up_to(bound1)?;
    let second = fam.factor2().levels_up_to(bound2)?;
    let mut out = Vec::with_capacity(first.len() * second.len());
    for l1 in &first {
        let a = &l1.value - &t1;
        for l2 in &second {
            if l1.index == 0 && l2.index == 0 {
                continue;
            }
            out.push(EigenBranch {
                i: l1.index,
                j: l2.index,
                a: a.clone(),
                b: &l2.value - &t2,
                multiplicity: l1.multiplicity * l2.multiplicity,
                parametrization: fam.parametrization(),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriticalIndices {
    pub i_star: usize,
    pub j_star: usize,
    /// `ρ_{i*}⁽¹⁾ = T₁`
    pub equality1: bool,
    /// `ρ_{j*}⁽²⁾ = T₂`
    pub equality2: bool,
}

/// Least `i` with `ρ_i⁽¹⁾ >= T₁` and least `j` with `ρ_j⁽²⁾ >= T₂`.
pub fn critical_indices(fam: &ProductFamily) -> Result<CriticalIndices> {
    let locate = |spec: &crate::FactorSpectrum, threshold: &Scalar| -> Result<(usize, bool)> {
        let levels = spec.levels_up_to(threshold)?;
        let below = levels
            .iter()
            .filter(|l| l.value.compare(threshold) == Ordering::Less)
            .count();
        let equal = levels.iter().any(|l| l.value.approx_eq(threshold));
        Ok((below, equal))
    };
    let (i_star, equality1) = locate(fam.factor1(), &fam.threshold1())?;
    let (j_star, equality2) = locate(fam.factor2(), &fam.threshold2())?;
    Ok(CriticalIndices {
        i_star,
        j_star,
        equality1,
        equality2,
    })
}

/// Both thresholds are attained, so `σ_{i*,j*} ≡ 0`. Attaining both at
/// `(0, 0)` only hits the excluded constants and does not count.
pub fn is_degenerate_pair(fam: &ProductFamily) -> Result<bool> {
    let c = critical_indices(fam)?;
    Ok(c.equality1 && c.equality2 && (c.i_star, c.j_star) != (0, 0))
}

fn refuse_degenerate(fam: &ProductFamily) -> Result<CriticalIndices> {
    let c = critical_indices(fam)?;
    if c.equality1 && c.equality2 && (c.i_star, c.j_star) != (0, 0) {
        return Err(Error::DegeneratePair {
            i_star: c.i_star,
            j_star: c.j_star,
        });
    }
    Ok(c)
}

/// Factor eigenvalue bounds `(Λ₁, Λ₂)` that capture every branch vanishing
/// in `window`.
///
/// A zero `s = -b/a` of an increasing branch has `b < 0` and
/// `a = |b|/s <= T₂/s_min`, so `ρ_i <= T₁ + T₂⁺/s_min`; a decreasing branch
/// has `|a| <= T₁` and `b <= s_max·T₁`, so `ρ_j <= T₂ + T₁⁺·s_max`.
pub fn enumeration_bounds(fam: &ProductFamily, window: &ScanWindow) -> Result<(Scalar, Scalar)> {
    let t1 = fam.threshold1();
    let t2 = fam.threshold2();
    let need1 = &t1 + &(&t2.positive_part() / window.min());
    let need2 = &t2 + &(&t1.positive_part() * window.max());
    Ok((need1, need2))
}

/// Smallest completeness bound `Λ` accepted by [`degeneracy_instants`].
pub fn required_bound(fam: &ProductFamily, window: &ScanWindow) -> Result<Scalar> {
    let (need1, need2) = enumeration_bounds(fam, window)?;
    let zero = Scalar::zero().in_mode(fam.mode());
    Ok(need1.max(&need2).max(&zero).clone())
}

/// A parameter where `J_s` is singular.
#[derive(Clone, Debug, PartialEq)]
pub struct DegeneracyInstant {
    pub s: Scalar,
    /// Branches vanishing at `s`, ordered by `(i, j)`.
    pub branches: Vec<EigenBranch>,
    pub total_multiplicity: u64,
    /// `n_{s+} - n_{s-}`: decreasing branches enter the negative cone,
    /// increasing ones leave it.
    pub jump: i64,
    /// Floating mode only: distinct zeros were merged within tolerance.
    pub merged: bool,
}

impl DegeneracyInstant {
    fn from_branches(s: Scalar, mut branches: Vec<EigenBranch>, merged: bool) -> Self {
        branches.sort_by_key(|b| (b.i, b.j));
        let total_multiplicity = branches.iter().map(|b| b.multiplicity).sum();
        let jump = branches
            .iter()
            .map(|b| match b.monotonicity() {
                Monotonicity::Decreasing => b.multiplicity as i64,
                Monotonicity::Increasing => -(b.multiplicity as i64),
                Monotonicity::Constant => 0,
            })
            .sum();
        DegeneracyInstant {
            s,
            branches,
            total_multiplicity,
            jump,
            merged,
        }
    }

    pub fn branch_refs(&self) -> Vec<BranchRef> {
        self.branches.iter().map(BranchRef::from).collect()
    }
}

/// Compact `(i, j)` description of a branch for reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BranchRef {
    pub i: usize,
    pub j: usize,
    pub multiplicity: u64,
    pub monotonicity: Monotonicity,
}

impl From<&EigenBranch> for BranchRef {
    fn from(b: &EigenBranch) -> Self {
        BranchRef {
            i: b.i,
            j: b.j,
            multiplicity: b.multiplicity,
            monotonicity: b.monotonicity(),
        }
    }
}

fn instants_in(fam: &ProductFamily, window: &ScanWindow) -> Result<Vec<DegeneracyInstant>> {
    let (need1, need2) = enumeration_bounds(fam, window)?;
    let mut zeros: Vec<(Scalar, EigenBranch)> = Vec::new();
    for branch in branches_within(fam, &need1, &need2)? {
        if let Some(s) = branch.zero() {
            if window.contains(&s) {
                zeros.push((s, branch));
            }
        }
    }
    Ok(group_zeros(zeros, fam.mode()))
}

fn group_zeros(zeros: Vec<(Scalar, EigenBranch)>, mode: NumericMode) -> Vec<DegeneracyInstant> {
    match mode {
        NumericMode::Exact => {
            let mut groups: BTreeMap<Rational, Vec<EigenBranch>> = BTreeMap::new();
            for (s, branch) in zeros {
                let key = s.as_rational().cloned().expect("exact zero in exact mode");
                groups.entry(key).or_default().push(branch);
            }
            groups
                .into_iter()
                .map(|(s, branches)| DegeneracyInstant::from_branches(Scalar::Exact(s), branches, false))
                .collect()
        }
        NumericMode::Float { tol } => {
            let mut zeros = zeros;
            zeros.sort_by(|x, y| {
                x.0.to_f64()
                    .total_cmp(&y.0.to_f64())
                    .then((x.1.i, x.1.j).cmp(&(y.1.i, y.1.j)))
            });
            let mut out: Vec<(Scalar, Vec<EigenBranch>, bool)> = Vec::new();
            for (s, branch) in zeros {
                match out.last_mut() {
                    Some((anchor, branches, merged))
                        if (s.to_f64() - anchor.to_f64()).abs() <= tol * anchor.to_f64() =>
                    {
                        if s.to_f64() != anchor.to_f64() {
                            *merged = true;
                        }
                        branches.push(branch);
                    }
                    _ => out.push((s, vec![branch], false)),
                }
            }
            out.into_iter()
                .map(|(s, branches, merged)| DegeneracyInstant::from_branches(s, branches, merged))
                .collect()
        }
    }
}

/// Every degeneracy instant in `window`, ascending, with coincident zeros
/// merged. `lambda` is the caller's completeness bound; it must reach
/// [`required_bound`] so that no vanishing branch can be missed.
pub fn degeneracy_instants(
    fam: &ProductFamily,
    window: &ScanWindow,
    lambda: &Scalar,
) -> Result<Vec<DegeneracyInstant>> {
    refuse_degenerate(fam)?;
    let required = required_bound(fam, window)?;
    if lambda.compare(&required) == Ordering::Less {
        return Err(Error::InsufficientBound {
            required: required.to_string(),
            given: lambda.to_string(),
        });
    }
    instants_in(fam, window)
}

/// `n_s`: total multiplicity of negative branches at a nondegenerate `s`.
pub fn morse_index(fam: &ProductFamily, s: &Scalar) -> Result<u64> {
    refuse_degenerate(fam)?;
    require_positive(s)?;
    let theta = fam.critical_value_at(s)?;
    if theta.is_negative() {
        return Ok(0);
    }
    let (w1, w2) = fam.metric_weights(s)?;
    // σ <= 0 forces w₁ρ_i <= θ and w₂ρ_j <= θ
    let branches = branches_within(fam, &(&theta / &w1), &(&theta / &w2))?;
    let mut count = 0u64;
    for branch in &branches {
        match branch.value_at(s)?.sign() {
            Ordering::Less => count += branch.multiplicity,
            Ordering::Equal => return Err(Error::AtDegeneracyInstant(s.to_string())),
            Ordering::Greater => {}
        }
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndexJump {
    pub s: Scalar,
    pub epsilon: Scalar,
    pub n_minus: u64,
    pub n_plus: u64,
    /// `n_minus != n_plus`: the index-jump criterion yields a bifurcation
    /// instant in `(s-ε, s+ε)`, whose only degeneracy point is `s`.
    pub certified: bool,
}

impl IndexJump {
    pub fn observed_jump(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }
}

/// Morse indices on both sides of `instant`, at `s ± ε` with `ε` half the
/// gap to the nearest other instant and at most `s/2`.
pub fn index_jump(fam: &ProductFamily, instant: &DegeneracyInstant) -> Result<IndexJump> {
    refuse_degenerate(fam)?;
    let s = &instant.s;
    require_positive(s)?;
    if instant.branches.is_empty() {
        return Err(Error::NotAnInstant(s.to_string()));
    }
    for branch in &instant.branches {
        if !branch.value_at(s)?.is_zero() {
            return Err(Error::NotAnInstant(s.to_string()));
        }
    }
    let half = s / &Scalar::int(2);
    let neighborhood = ScanWindow::new(s / &Scalar::int(4), s * &Scalar::int(2))?;
    let others = instants_in(fam, &neighborhood)?;
    let mut epsilon = half.clone();
    for other in &others {
        let gap = (&other.s - s).abs();
        if gap.to_f64() == 0.0 || (other.s.is_exact() && gap.is_zero()) {
            continue;
        }
        if let NumericMode::Float { tol } = fam.mode() {
            if gap.to_f64() <= 4.0 * tol * s.to_f64() {
                return Err(Error::NonIsolatedInstant(s.to_string()));
            }
        }
        let candidate = &gap / &Scalar::int(2);
        if candidate.compare(&epsilon) == Ordering::Less {
            epsilon = candidate;
        }
    }
    let n_minus = morse_index(fam, &(s - &epsilon))?;
    let n_plus = morse_index(fam, &(s + &epsilon))?;
    Ok(IndexJump {
        s: s.clone(),
        epsilon,
        n_minus,
        n_plus,
        certified: n_minus != n_plus,
    })
}

/// Which statement about the family applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyCase {
    /// `R₁ > 0`, `R₂ > 0`: instants accumulate at `0` and at `∞`.
    BothPositive,
    /// `R₁ <= 0`, `R₂ <= 0`: no instants, locally rigid everywhere.
    RigidNonPositive,
    /// `R₁ <= 0`, `R₂ > 0`: a decreasing sequence tending to `0`.
    DecreasingToZero,
    /// `R₁ > 0`, `R₂ <= 0`: an increasing unbounded sequence.
    IncreasingUnbounded,
    /// `σ_{i*,j*} ≡ 0`; the index-jump criterion never applies.
    DegeneratePair,
}

impl fmt::Display for FamilyCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyCase::BothPositive => "BothPositive",
            FamilyCase::RigidNonPositive => "RigidNonPositive",
            FamilyCase::DecreasingToZero => "DecreasingToZero",
            FamilyCase::IncreasingUnbounded => "IncreasingUnbounded",
            FamilyCase::DegeneratePair => "DegeneratePair",
        })
    }
}

/// Position of a branch relative to the critical indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchCase {
    /// `i != i*` and `j != j*`: a zero iff `i > i*, j < j*` (increasing)
    /// or `i < i*, j > j*` (decreasing).
    Generic,
    /// `i = i*`: no zero when `ρ_{i*} = T₁`, otherwise a zero iff `j < j*`.
    CriticalFirst { equality: bool },
    /// `j = j*`: no zero when `ρ_{j*} = T₂`, otherwise a zero iff `i < i*`.
    CriticalSecond { equality: bool },
    /// `(i, j) = (i*, j*)`: never vanishes in a nondegenerate pair.
    CriticalBoth,
}

impl BranchCase {
    pub fn of(branch: &EigenBranch, crit: &CriticalIndices) -> Self {
        match (branch.i == crit.i_star, branch.j == crit.j_star) {
            (true, true) => BranchCase::CriticalBoth,
            (true, false) => BranchCase::CriticalFirst {
                equality: crit.equality1,
            },
            (false, true) => BranchCase::CriticalSecond {
                equality: crit.equality2,
            },
            (false, false) => BranchCase::Generic,
        }
    }

    /// Whether the index pattern alone predicts a zero.
    pub fn predicts_zero(&self, branch: &EigenBranch, crit: &CriticalIndices) -> bool {
        let (i, j, is, js) = (branch.i, branch.j, crit.i_star, crit.j_star);
        match self {
            BranchCase::Generic => (j < js && i > is) || (j > js && i < is),
            BranchCase::CriticalFirst { equality } => !equality && j < js,
            BranchCase::CriticalSecond { equality } => !equality && i < is,
            BranchCase::CriticalBoth => false,
        }
    }
}

impl fmt::Display for BranchCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchCase::Generic => f.write_str("generic"),
            BranchCase::CriticalFirst { equality: true } => f.write_str("i=i*,equal"),
            BranchCase::CriticalFirst { equality: false } => f.write_str("i=i*,strict"),
            BranchCase::CriticalSecond { equality: true } => f.write_str("j=j*,equal"),
            BranchCase::CriticalSecond { equality: false } => f.write_str("j=j*,strict"),
            BranchCase::CriticalBoth => f.write_str("i=i*,j=j*"),
        }
    }
}

/// Which accumulating sequence an instant belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AccumulationSide {
    /// Zeros of increasing branches (`i > i*`, `j < j*`).
    TendingToZero,
    /// Zeros of decreasing branches (`i < i*`, `j > j*`).
    Unbounded,
    /// Both kinds vanish here.
    Mixed,
}

impl fmt::Display for AccumulationSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AccumulationSide::TendingToZero => "tending-to-0",
            AccumulationSide::Unbounded => "unbounded",
            AccumulationSide::Mixed => "mixed",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifiedInstant {
    pub instant: DegeneracyInstant,
    pub jump: IndexJump,
    pub side: AccumulationSide,
    pub branch_cases: Vec<BranchCase>,
}

impl ClassifiedInstant {
    pub fn certified(&self) -> bool {
        self.jump.certified
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyClassification {
    pub case: FamilyCase,
    pub critical: CriticalIndices,
    pub window: ScanWindow,
    pub lambda: Scalar,
    pub instants: Vec<ClassifiedInstant>,
    /// Instants on the side accumulating at `0`, decreasing.
    pub tending_to_zero: Vec<Scalar>,
    /// Instants on the side accumulating at `∞`, increasing.
    pub unbounded: Vec<Scalar>,
    /// Disagreements between the case statement and the per-instant checks.
    pub findings: Vec<String>,
}

pub fn family_case(fam: &ProductFamily) -> Result<FamilyCase> {
    if is_degenerate_pair(fam)? {
        return Ok(FamilyCase::DegeneratePair);
    }
    let r1 = fam.factor1().scalar_curvature().is_positive();
    let r2 = fam.factor2().scalar_curvature().is_positive();
    Ok(match (r1, r2) {
        (true, true) => FamilyCase::BothPositive,
        (false, false) => FamilyCase::RigidNonPositive,
        (false, true) => FamilyCase::DecreasingToZero,
        (true, false) => FamilyCase::IncreasingUnbounded,
    })
}

/// Case tag, instants in `window` and their certification by index jumps.
/// Degenerate pairs get the [`FamilyCase::DegeneratePair`] tag and nothing
/// else.
pub fn classify_family(
    fam: &ProductFamily,
    window: &ScanWindow,
    lambda: &Scalar,
) -> Result<FamilyClassification> {
    let critical = critical_indices(fam)?;
    let case = family_case(fam)?;
    let mut out = FamilyClassification {
        case,
        critical,
        window: window.clone(),
        lambda: lambda.clone(),
        instants: Vec::new(),
        tending_to_zero: Vec::new(),
        unbounded: Vec::new(),
        findings: Vec::new(),
    };
    if case == FamilyCase::DegeneratePair {
        return Ok(out);
    }
    for instant in degeneracy_instants(fam, window, lambda)? {
        let jump = index_jump(fam, &instant)?;
        let increasing = instant
            .branches
            .iter()
            .any(|b| b.monotonicity() == Monotonicity::Increasing);
        let decreasing = instant
            .branches
            .iter()
            .any(|b| b.monotonicity() == Monotonicity::Decreasing);
        let side = match (increasing, decreasing) {
            (true, false) => AccumulationSide::TendingToZero,
            (false, true) => AccumulationSide::Unbounded,
            _ => AccumulationSide::Mixed,
        };
        let branch_cases: Vec<BranchCase> = instant
            .branches
            .iter()
            .map(|b| BranchCase::of(b, &critical))
            .collect();

        if jump.observed_jump() != instant.jump {
            out.findings.push(format!(
                "s = {}: branch jump {} disagrees with index jump {} -> {}",
                instant.s, instant.jump, jump.n_minus, jump.n_plus
            ));
        }
        match case {
            FamilyCase::RigidNonPositive => out
                .findings
                .push(format!("s = {}: instant in a family expected to be rigid", instant.s)),
            FamilyCase::DecreasingToZero | FamilyCase::IncreasingUnbounded if !jump.certified => {
                out.findings
                    .push(format!("s = {}: expected a bifurcation instant, index does not jump", instant.s))
            }
            _ => {}
        }
        match side {
            AccumulationSide::TendingToZero => out.tending_to_zero.push(instant.s.clone()),
            AccumulationSide::Unbounded => out.unbounded.push(instant.s.clone()),
            AccumulationSide::Mixed => {}
        }
        out.instants.push(ClassifiedInstant {
            instant,
            jump,
            side,
            branch_cases,
        });
    }
    out.tending_to_zero.reverse();
    Ok(out)
}
