use yamabe::bifurcation::{branches_within, required_bound, BranchCase};
use yamabe::oracle::{brute_force_index, brute_force_product_spectrum, dense_scan_degeneracy};
use yamabe::{
    classify_family, critical_indices, degeneracy_instants, homothety_reparametrization, index_jump, morse_index,
    DegeneracyInstant, Error, FactorSpectrum, FamilyCase, Parametrization, ProductFamily, Rational, Scalar,
    ScanWindow, SquaredLength,
};

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn s2() -> FactorSpectrum {
    FactorSpectrum::round_sphere(2, &Scalar::one()).unwrap()
}

fn hemi() -> FactorSpectrum {
    FactorSpectrum::hemisphere_neumann(2, &Scalar::one()).unwrap()
}

fn interval() -> FactorSpectrum {
    FactorSpectrum::interval_neumann(&Scalar::one()).unwrap()
}

fn torus() -> FactorSpectrum {
    let l = SquaredLength::pi_sq_multiple(Rational::from_integer(4.into()));
    FactorSpectrum::flat_torus(&[l.clone(), l]).unwrap()
}

fn families() -> Vec<ProductFamily> {
    vec![
        ProductFamily::new(s2(), hemi()).unwrap(),
        ProductFamily::new(s2(), interval()).unwrap(),
        ProductFamily::new(torus(), hemi()).unwrap(),
        ProductFamily::new(torus(), interval()).unwrap(),
        ProductFamily::new(
            FactorSpectrum::round_sphere(3, &q(4, 1)).unwrap(),
            FactorSpectrum::hemisphere_neumann(3, &q(2, 1)).unwrap(),
        )
        .unwrap(),
    ]
}

fn window(lo: Scalar, hi: Scalar) -> ScanWindow {
    ScanWindow::new(lo, hi).unwrap()
}

fn instants(fam: &ProductFamily, w: &ScanWindow) -> Vec<DegeneracyInstant> {
    degeneracy_instants(fam, w, &required_bound(fam, w).unwrap()).unwrap()
}

#[test]
fn instants_match_dense_scan_on_every_family() {
    let w = window(q(1, 50), q(30, 1));
    for fam in families() {
        let found = instants(&fam, &w);
        let lambda = required_bound(&fam, &w).unwrap().to_f64() + 1e-9;
        let brackets = dense_scan_degeneracy(&fam, 0.02, 30.0, 100_000, lambda).unwrap();
        assert_eq!(found.len(), brackets.len(), "{}", fam.label());
        for (inst, b) in found.iter().zip(&brackets) {
            assert!(b.contains(inst.s.to_f64()), "{}: {} vs {b:?}", fam.label(), inst.s);
            let ours: Vec<(usize, usize)> = inst.branches.iter().map(|b| (b.i, b.j)).collect();
            assert_eq!(ours, b.branches);
        }
    }
}

#[test]
fn morse_index_matches_brute_force() {
    let grid = [0.013, 0.07, 0.3, 0.77, 1.3, 2.9, 6.1, 13.3, 41.0];
    for fam in families() {
        for s in grid {
            let exact = Scalar::parse_exact(&format!("{s}")).unwrap();
            let n = morse_index(&fam, &exact).unwrap();
            let theta = fam.critical_value_at(&exact).unwrap().to_f64().max(0.0);
            assert_eq!(n, brute_force_index(&fam, s, theta + 1e-9).unwrap(), "{} at {s}", fam.label());
        }
    }
}

#[test]
fn jumps_match_branch_counts_and_brute_force() {
    let w = window(q(1, 50), q(30, 1));
    for fam in families() {
        for inst in instants(&fam, &w) {
            let j = index_jump(&fam, &inst).unwrap();
            assert_eq!(j.observed_jump(), inst.jump, "{} at {}", fam.label(), inst.s);
            let lo = (&inst.s - &j.epsilon).to_f64();
            let hi = (&inst.s + &j.epsilon).to_f64();
            let bound = |s: f64| fam.critical_value_at(&Scalar::parse_exact(&format!("{s:e}")).unwrap()).unwrap().to_f64() + 1.0;
            assert_eq!(brute_force_index(&fam, lo, bound(lo)).unwrap(), j.n_minus);
            assert_eq!(brute_force_index(&fam, hi, bound(hi)).unwrap(), j.n_plus);
            assert!(j.certified);
        }
    }
}

#[test]
fn product_spectrum_matches_brute_force() {
    for fam in families() {
        for s in [q(1, 3), q(1, 1), q(7, 2)] {
            let bound = q(9, 1);
            let ours = fam.spectrum_below(&s, &bound).unwrap();
            let theirs = brute_force_product_spectrum(&fam, s.to_f64(), 9.0).unwrap();
            assert_eq!(ours.len(), theirs.len(), "{} at {s}", fam.label());
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a.value.to_f64() - b.0).abs() < 1e-9);
                assert_eq!(a.multiplicity, b.1);
                let from_sources: u64 = a.sources.len() as u64;
                assert!(from_sources >= 1);
            }
        }
    }
}

#[test]
fn homothety_keeps_instants_and_jumps() {
    let w = window(q(1, 100), q(50, 1));
    for fam in families() {
        let base = instants(&fam, &w);
        let re = homothety_reparametrization(&fam, &q(3, 2)).unwrap();
        assert_eq!(re.family.parametrization(), Parametrization::ShrinkFirst);
        let other = instants(&re.family, &w);
        let s_base: Vec<&Scalar> = base.iter().map(|i| &i.s).collect();
        let s_other: Vec<&Scalar> = other.iter().map(|i| &i.s).collect();
        assert_eq!(s_base, s_other, "{}", fam.label());
        for (a, b) in base.iter().zip(&other) {
            assert_eq!(a.jump, b.jump);
            let ja = index_jump(&fam, a).unwrap();
            let jb = index_jump(&re.family, b).unwrap();
            assert_eq!(ja.observed_jump(), jb.observed_jump());
        }
    }
}

#[test]
fn reparametrized_first_factor_is_scaled() {
    let fam = ProductFamily::new(s2(), hemi()).unwrap();
    let re = homothety_reparametrization(&fam, &q(3, 1)).unwrap();
    // (1/3)·g₁: eigenvalues times 3
    let levels = re.factor1_at_s.levels_up_to(&q(6, 1)).unwrap();
    assert_eq!(levels[1].value, q(6, 1));
    assert_eq!(re.factor1_at_s.scalar_curvature(), &q(6, 1));
    let idem = homothety_reparametrization(&fam, &Scalar::one()).unwrap();
    assert_eq!(idem.factor1_at_s.levels_up_to(&q(2, 1)).unwrap()[1].value, q(2, 1));
}

#[test]
fn accumulation_adds_only_outside() {
    let fam = ProductFamily::new(s2(), hemi()).unwrap();
    let mut previous: Option<(Scalar, Scalar, usize)> = None;
    for d in [10, 100, 1000] {
        let w = window(q(1, d), q(d, 1));
        let found: Vec<Scalar> = instants(&fam, &w).into_iter().map(|i| i.s).collect();
        if let Some((lo, hi, count)) = &previous {
            let inside = found
                .iter()
                .filter(|s| s.compare(lo).is_ge() && s.compare(hi).is_le())
                .count();
            assert_eq!(inside, *count);
            assert!(found.len() > *count);
        }
        previous = Some((found[0].clone(), found.last().unwrap().clone(), found.len()));
    }
}

#[test]
fn torus_times_hemisphere_first_instants() {
    let fam = ProductFamily::new(torus(), hemi()).unwrap();
    let w = window(q(1, 10), q(1, 1));
    let s: Vec<Scalar> = instants(&fam, &w).into_iter().map(|i| i.s).collect();
    assert_eq!(s, vec![q(2, 15), q(1, 6), q(1, 3), q(2, 3)]);
}

#[test]
fn equality_cases_have_no_zeros() {
    let first_equal = FactorSpectrum::custom_from_str(
        "dim = 2\nscalar_curvature = 6\nhas_boundary = false\nlambda_max = 100\neig 0 1\neig 2 3\neig 6 5\neig 12 7\n",
        "eq",
    )
    .unwrap();
    let fam = ProductFamily::new(first_equal, hemi()).unwrap();
    let c = critical_indices(&fam).unwrap();
    assert_eq!((c.i_star, c.equality1, c.equality2), (1, true, false));
    for b in branches_within(&fam, &q(100, 1), &q(100, 1)).unwrap() {
        if b.i == c.i_star {
            assert_eq!(BranchCase::of(&b, &c), if b.j == c.j_star { BranchCase::CriticalBoth } else { BranchCase::CriticalFirst { equality: true } });
            assert!(b.zero().is_none());
        }
    }
    let cls = classify_family(&fam, &window(q(1, 10), q(10, 1)), &q(100, 1)).unwrap();
    assert_eq!(cls.case, FamilyCase::BothPositive);
    assert!(cls.instants.iter().all(|i| i.instant.branches.iter().all(|b| b.i != c.i_star)));
}

#[test]
fn jump_cancellation_is_uncertified() {
    let closed = FactorSpectrum::custom_from_str(
        "dim = 1\nscalar_curvature = 2\nhas_boundary = false\nlambda_max = 10\neig 0 1\neig 2 2\n",
        "a",
    )
    .unwrap();
    let bounded = FactorSpectrum::custom_from_str(
        "dim = 2\nscalar_curvature = 2\nhas_boundary = true\nboundary_minimal = true\nlambda_max = 10\neig 0 1\neig 2 2\n",
        "b",
    )
    .unwrap();
    let fam = ProductFamily::new(closed, bounded).unwrap();
    let w = window(q(1, 2), q(2, 1));
    let found = instants(&fam, &w);
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].s, Scalar::one());
    assert_eq!(found[0].jump, 0);
    assert_eq!(found[0].total_multiplicity, 4);
    let j = index_jump(&fam, &found[0]).unwrap();
    assert_eq!((j.n_minus, j.n_plus, j.certified), (2, 2, false));
}

#[test]
fn completeness_errors_surface() {
    let short = FactorSpectrum::custom_from_str(
        "dim = 2\nscalar_curvature = 2\nhas_boundary = false\nlambda_max = 3\neig 0 1\neig 2 3\n",
        "short",
    )
    .unwrap();
    let fam = ProductFamily::new(short, hemi()).unwrap();
    let w = window(q(1, 10), q(10, 1));
    let lambda = required_bound(&fam, &w).unwrap();
    assert!(matches!(
        degeneracy_instants(&fam, &w, &lambda),
        Err(Error::IncompleteSpectrum { .. })
    ));
}

#[test]
fn float_mode_merges_and_flags() {
    // zeros 1 and 1 + 1e-12 merge under tol 1e-9
    let closed = FactorSpectrum::custom_from_str(
        "dim = 1\nscalar_curvature = 2\nhas_boundary = false\nlambda_max = 10\ntolerance = 1e-9\neig 0 1\neig 2 2\n",
        "a",
    )
    .unwrap();
    let bounded = FactorSpectrum::custom_from_str(
        "dim = 2\nscalar_curvature = 2\nhas_boundary = true\nboundary_minimal = true\nlambda_max = 10\ntolerance = 1e-9\neig 0 1\neig 2.000000000001 2\n",
        "b",
    )
    .unwrap();
    let fam = ProductFamily::new(closed, bounded).unwrap();
    let w = ScanWindow::new(Scalar::float(0.5, 1e-9).unwrap(), Scalar::float(2.0, 1e-9).unwrap()).unwrap();
    let found = degeneracy_instants(&fam, &w, &Scalar::float(10.0, 1e-9).unwrap()).unwrap();
    assert_eq!(found.len(), 1);
    assert!(found[0].merged);
    assert_eq!(found[0].branches.len(), 2);
}
