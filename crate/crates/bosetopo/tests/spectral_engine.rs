use bosetopo::linalg::{c, eigvals, multiset_distance, C64};
use bosetopo::models::{photo_magnonic_chain, ModelSpec};
use bosetopo::qbh::{build_qbh, Term};
use bosetopo::spectral::{
    band_structure, diagonalize, finite_size_scan, fit_localization, uniform_k_grid, zero_modes_of, Localization,
    Observable, Sector,
};

#[test]
fn eigenpairs_have_small_residuals() {
    let h = ModelSpec::bkc(9, 1.0, 0.4).build().unwrap();
    let s = diagonalize(&h.dynamical_matrix()).unwrap();
    assert_eq!(s.eigenvalues.len(), 18);
    assert!(s.all_converged());
    assert!(s.residuals.iter().all(|&r| r < 1e-9 * s.spectral_radius.max(1.0)));
}

#[test]
fn a_single_squeezed_mode_has_the_textbook_frequency() {
    // ω a†a + (λ a†² + h.c.)/… gives ±√(ω² − 4|λ|²) in this convention
    // when λ is the pairing amplitude of the term.
    let (w, lam) = (1.0, 0.3);
    let h = build_qbh(1, &[Term::Onsite(0, w), Term::Pairing(0, 0, c(lam, 0.0))]).unwrap();
    let d = h.delta()[[0, 0]].norm();
    let s = diagonalize(&h.dynamical_matrix()).unwrap();
    let expected = (w * w - d * d).sqrt();
    let mut re: Vec<f64> = s.eigenvalues.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    assert!((re[1] - expected).abs() < 1e-12);
    assert!((re[0] + expected).abs() < 1e-12);
}

#[test]
fn bands_of_the_ssh_chain_are_plus_minus_the_hopping_modulus() {
    let sym = ModelSpec::ssh(8, 0.5, 1.0).bloch_symbol().unwrap();
    let grid = uniform_k_grid(64);
    let bands = band_structure(&sym, &grid).unwrap();
    for (k, vals) in grid.iter().zip(&bands) {
        let e = (1.25 + f64::cos(*k)).sqrt();
        // Number-conserving symbols report the bands of K alone, sorted.
        let expected = [c(-e, 0.0), c(e, 0.0)];
        assert!(multiset_distance(vals, &expected) < 1e-12, "k = {k}");
        assert!(vals[0].re < vals[1].re);
    }
}

#[test]
fn uniform_grid_covers_the_zone_without_repeating() {
    let g = uniform_k_grid(8);
    assert_eq!(g.len(), 8);
    let step = g[1] - g[0];
    assert!((step - std::f64::consts::TAU / 8.0).abs() < 1e-15);
    assert!((g[7] - g[0] + step - std::f64::consts::TAU).abs() < 1e-12);
}

#[test]
fn edge_mode_of_the_offset_chain_is_on_the_right() {
    let (g, t) = (c(100e6, 0.0), c(11e6, 0.0));
    let h = photo_magnonic_chain(8, 1, 0.0, 0.0, t, g, true).unwrap();
    let r = zero_modes_of(&h, None).unwrap();
    assert_eq!(r.sector, Sector::Particle);
    assert_eq!(r.count, 2);
    assert_eq!(r.left_count(), 1);
    assert_eq!(r.right_count(), 1);
    let left = r.modes.iter().find(|m| m.is_left()).unwrap();
    assert!(left.disconnected);
    assert!(left.edge_weight_left > 1.0 - 1e-12);
    let right = r.modes.iter().find(|m| !m.is_left()).unwrap();
    assert!(!right.disconnected);
    assert!(right.edge_weight_right > 1.0 - 1e-12);
}

#[test]
fn localization_fit_recovers_a_decay_length() {
    let weights: Vec<f64> = (0..12).map(|j| (-(j as f64) / 1.5).exp()).collect();
    match fit_localization(&weights) {
        Localization::Exponential { length, .. } => assert!(length > 0.0 && length.is_finite()),
        other => panic!("expected exponential decay, got {other:?}"),
    }
    let flat = vec![1.0 / 12.0; 12];
    assert_eq!(fit_localization(&flat), Localization::Delocalized);
}

#[test]
fn ssh_edge_splitting_halves_with_each_cell() {
    let table =
        finite_size_scan(&ModelSpec::ssh(4, 0.5, 1.0), &[6, 8, 10, 12, 14], Observable::MinAbsEigenvalue).unwrap();
    let fit = table.fit.expect("exponential fit");
    assert!((fit.rate - 2f64.ln()).abs() < 5e-3, "rate {}", fit.rate);
    assert!(fit.r2 > 0.9999);
}

#[test]
fn squeezing_chain_zero_modes_come_from_the_full_matrix() {
    let h = ModelSpec::bkc(9, 1.0, 3.0).build().unwrap();
    let r = zero_modes_of(&h, Some(1e-6)).unwrap();
    assert_eq!(r.sector, Sector::Full);
    let vals: Vec<C64> = eigvals(h.dynamical_matrix().matrix()).unwrap().to_vec();
    let zeros = vals.iter().filter(|z| z.norm() < 1e-6).count();
    assert_eq!(r.count, zeros);
    assert!(r.count >= 2);
}

#[test]
fn complex_hopping_edge_mode_is_the_conjugate_of_the_annihilating_form() {
    // With H ∋ −t·a_{j+1}†a_j + g·m̃_{j+1}†a_j the form g·a_{N−1} + t·m̃_{N−1}
    // commutes with H; the eigenvector of K holds its conjugate coefficients.
    let g = c(100e6, 20e6);
    let t = c(11e6 * 0.3f64.cos(), 11e6 * 0.3f64.sin());
    let n = 6;
    let h = photo_magnonic_chain(n, 1, 0.0, 0.0, t, g, true).unwrap();
    let r = zero_modes_of(&h, None).unwrap();
    let right = r.modes.iter().find(|m| !m.is_left()).unwrap();
    let form = right.vector.mapv(|z| z.conj());
    let ratio = form[n - 1] / form[2 * n - 1];
    assert!((ratio / (g / t) - 1.0).norm() < 1e-10);
}
