use std::f64::consts::PI;

use yamabe::oracle::{even_harmonic_dimension, fd_interval_spectrum, harmonic_dimension, lattice_levels};
use yamabe::spectra::{hemisphere_multiplicity, sphere_multiplicity};
use yamabe::{FactorSpectrum, Rational, Scalar, SpectralUnit, SquaredLength};

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn table(spec: &FactorSpectrum, bound: i64) -> Vec<(Scalar, u64)> {
    spec.eigenvalues_below(&Scalar::int(bound)).unwrap()
}

#[test]
fn unit_two_sphere() {
    let s2 = FactorSpectrum::round_sphere(2, &Scalar::one()).unwrap();
    assert_eq!(table(&s2, 13), vec![(q(0, 1), 1), (q(2, 1), 3), (q(6, 1), 5), (q(12, 1), 7)]);
    assert_eq!(s2.scalar_curvature(), &q(2, 1));
    assert!(!s2.has_boundary());
}

#[test]
fn scaled_sphere_eigenvalues_divide_by_radius() {
    let s3 = FactorSpectrum::round_sphere(3, &q(4, 1)).unwrap();
    assert_eq!(table(&s3, 4), vec![(q(0, 1), 1), (q(3, 4), 4), (q(2, 1), 9), (q(15, 4), 16)]);
    assert_eq!(s3.scalar_curvature(), &q(3, 2));
}

#[test]
fn hemisphere_keeps_even_harmonics() {
    let h = FactorSpectrum::hemisphere_neumann(2, &Scalar::one()).unwrap();
    assert_eq!(table(&h, 21), vec![(q(0, 1), 1), (q(2, 1), 2), (q(6, 1), 3), (q(12, 1), 4), (q(20, 1), 5)]);
    assert!(h.has_boundary() && h.boundary_minimal());
}

#[test]
fn interval_levels_are_squares() {
    let i = FactorSpectrum::interval_neumann(&Scalar::one()).unwrap();
    assert_eq!(table(&i, 17), vec![(q(0, 1), 1), (q(1, 1), 1), (q(4, 1), 1), (q(9, 1), 1), (q(16, 1), 1)]);
    let half = FactorSpectrum::interval_neumann(&q(1, 2)).unwrap();
    assert_eq!(table(&half, 5)[1], (q(4, 1), 1));
}

#[test]
fn square_torus_levels() {
    let l = SquaredLength::pi_sq_multiple(Rational::from_integer(4.into()));
    let t = FactorSpectrum::flat_torus(&[l.clone(), l]).unwrap();
    assert_eq!(t.unit(), SpectralUnit::One);
    assert_eq!(table(&t, 6), vec![(q(0, 1), 1), (q(1, 1), 4), (q(2, 1), 4), (q(4, 1), 4), (q(5, 1), 8)]);
    assert_eq!(t.scalar_curvature(), &Scalar::zero());
}

#[test]
fn multiplicity_formulas_match_harmonic_ranks() {
    for n in 1..=4 {
        for k in 0..=10 {
            assert_eq!(sphere_multiplicity(n, k), harmonic_dimension(n, k).unwrap(), "S^{n}, k={k}");
        }
    }
    for n in 2..=4 {
        for k in 0..=10 {
            assert_eq!(hemisphere_multiplicity(n, k), even_harmonic_dimension(n, k).unwrap(), "S^{n}_+, k={k}");
        }
    }
}

#[test]
fn hemisphere_multiplicities_sum_to_sphere_over_levels() {
    // even and odd harmonics of degree k split the sphere multiplicity
    for n in 2..=4 {
        let total: u64 = (0..8).map(|k| hemisphere_multiplicity(n, k)).sum();
        let sphere: u64 = (0..8).map(|k| sphere_multiplicity(n, k)).sum();
        assert!(total < sphere);
        assert_eq!(harmonic_dimension(n, 5).unwrap(), sphere_multiplicity(n, 5));
    }
}

#[test]
fn finite_differences_converge_on_interval() {
    let fd = fd_interval_spectrum(1.0, 400, 10).unwrap();
    for (k, v) in fd.eigenvalues.iter().enumerate() {
        let exact = (k * k) as f64;
        assert!((v - exact).abs() < 1e-3 * exact.max(1.0), "mode {k}: {v}");
    }
}

#[test]
fn lattice_loop_matches_torus() {
    let l = SquaredLength::pi_sq_multiple(Rational::from_integer(4.into()));
    let t = FactorSpectrum::flat_torus(&[l.clone(), l]).unwrap();
    let lattice = lattice_levels(&[4.0 * PI * PI, 4.0 * PI * PI], 9.5);
    let ours = table(&t, 10);
    assert_eq!(ours.len(), lattice.len());
    for ((v, m), (w, n)) in ours.iter().zip(&lattice) {
        assert!((v.to_f64() - w).abs() < 1e-12);
        assert_eq!(m, n);
    }
}

#[test]
fn custom_file_errors_name_the_line() {
    let bad = "dim = 2\nscalar_curvature = 2\nhas_boundary = false\nlambda_max = 10\neig 0 1\neig two 3\n";
    let err = FactorSpectrum::custom_from_str(bad, "bad").unwrap_err().to_string();
    assert!(err.contains("line 6"), "{err}");
    let unsorted = "dim = 2\nscalar_curvature = 2\nhas_boundary = false\nlambda_max = 10\neig 0 1\neig 6 5\neig 2 3\n";
    assert!(FactorSpectrum::custom_from_str(unsorted, "u").is_err());
}

#[test]
fn custom_spectrum_above_limit_is_incomplete() {
    let text = "dim = 2\nscalar_curvature = 2\nhas_boundary = false\nlambda_max = 10\neig 0 1\neig 2 3\neig 6 5\n";
    let c = FactorSpectrum::custom_from_str(text, "c").unwrap();
    assert_eq!(table(&c, 10).len(), 3);
    assert!(c.levels_up_to(&Scalar::int(11)).is_err());
}
