use jacobi_spectra::eigen::finite_section_eigenvalues;
use jacobi_spectra::inequality::random_operator;
use jacobi_spectra::operator::dist_to_band;
use jacobi_spectra::spectrum::{compare_routes, find_zeros, FinderConfig, SECTION_BAND_GAP};
use jacobi_spectra::JacobiOperator;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn nearest(eigs: &[Complex64], lambda: Complex64) -> f64 {
    eigs.iter()
        .map(|e| (e - lambda).norm())
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn section_eigenvalues_converge_to_the_zeros() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let cfg = FinderConfig::default();
    let mut compared = 0;
    for _ in 0..6 {
        let op = random_operator(&mut rng, 5, 1.2, false, None);
        let search = find_zeros(&op, &cfg).unwrap();
        let s200 = finite_section_eigenvalues(&op, 200).unwrap();
        let s400 = finite_section_eigenvalues(&op, 400).unwrap();
        assert!(s200.unconverged.is_empty() && s400.unconverged.is_empty());
        for p in search
            .zeros
            .iter()
            .filter(|p| dist_to_band(p.lambda) >= SECTION_BAND_GAP)
        {
            let d200 = nearest(&s200.eigenvalues, p.lambda);
            let d400 = nearest(&s400.eigenvalues, p.lambda);
            assert!(d200 <= 1e-4, "lambda = {}: {d200:e}", p.lambda);
            assert!(
                d400 <= d200.max(1e-12),
                "lambda = {}: {d400:e} > {d200:e}",
                p.lambda
            );
            compared += 1;
        }
    }
    assert!(compared > 0);
}

#[test]
fn route_comparison_is_clean_for_random_operators() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let grid: Vec<Complex64> = (1..8)
        .flat_map(|i| (0..12).map(move |j| Complex64::from_polar(0.12 * i as f64, 0.5 * j as f64)))
        .collect();
    for _ in 0..4 {
        let op = random_operator(&mut rng, 4, 1.0, false, None);
        let cmp = compare_routes(&op, &grid, 120, &FinderConfig::default()).unwrap();
        assert!(cmp.violations.is_empty(), "{:?}", cmp.violations);
        assert!(cmp.rejected.is_empty());
    }
}

#[test]
fn free_section_has_no_off_band_eigenvalues() {
    let s = finite_section_eigenvalues(&JacobiOperator::free(), 150).unwrap();
    assert!(s.off_band(1e-9).is_empty());
    assert_eq!(s.eigenvalues.len(), 301);
}
