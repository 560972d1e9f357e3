use bosetopo::linalg::{c, C64};
use bosetopo::models::photo_magnonic_chain;
use bosetopo::qbh::{build_qbh, Term};
use bosetopo::scattering::{driven_mode_profile, response_matrix, s_parameters, ScatteringSetup};
use bosetopo::Error;

fn single_cavity(w0: f64, kappa: f64) -> ScatteringSetup {
    let h = build_qbh(1, &[Term::Onsite(0, w0)]).unwrap();
    ScatteringSetup::new(h, vec![c(kappa, 0.0)], vec![0]).unwrap()
}

#[test]
fn single_mode_reflection_is_a_lorentzian() {
    let (w0, kappa) = (10.0, 0.5);
    let setup = single_cavity(w0, kappa);
    let grid: Vec<f64> = (0..201).map(|i| 9.0 + 0.01 * i as f64).collect();
    let r = s_parameters(&setup, &grid).unwrap();
    for (w, s) in grid.iter().zip(&r.s_matrix) {
        let expected = C64::new(1.0, 0.0) - kappa / (C64::new(0.0, 1.0) * (w0 - w) + kappa / 2.0);
        let got = s[[0, 0]];
        // Lossless single port: all power comes back.
        assert!((got.norm() - 1.0).abs() < 1e-12);
        assert!((got - expected).norm() < 1e-12, "w = {w}");
    }
    let at_resonance = s_parameters(&setup, &[w0]).unwrap().s_matrix[0][[0, 0]];
    assert!((at_resonance + 1.0).norm() < 1e-12);
}

#[test]
fn intrinsic_loss_absorbs_power() {
    let h = build_qbh(2, &[Term::Onsite(0, 1.0), Term::Onsite(1, 1.0), Term::Hopping(0, 1, c(0.05, 0.0))]).unwrap();
    let setup = ScatteringSetup::new(h, vec![c(0.02, 0.0), c(0.1, 0.0)], vec![0]).unwrap();
    let r = s_parameters(&setup, &[0.95, 1.0, 1.05]).unwrap();
    for s in &r.s_matrix {
        assert!(s[[0, 0]].norm() < 1.0);
    }
}

#[test]
fn polariton_transmission_peaks_at_the_split_modes() {
    let wa = 9.999e9;
    let h = photo_magnonic_chain(1, 0, wa, wa, c(0.0, 0.0), c(112.5e6, 0.0), true).unwrap();
    let setup = ScatteringSetup::photo_magnonic(h, 0.5e6, 10e6).unwrap();
    assert_eq!(setup.ports(), &[0, 1]);
    let grid: Vec<f64> = (0..2001).map(|i| wa - 300e6 + 0.3e6 * i as f64).collect();
    let s21 = s_parameters(&setup, &grid).unwrap().magnitude(1, 0);
    let peak_below = (0..1000).max_by(|&a, &b| s21[a].total_cmp(&s21[b])).unwrap();
    let peak_above = (1001..2001).max_by(|&a, &b| s21[a].total_cmp(&s21[b])).unwrap();
    assert!((grid[peak_below] - (wa - 112.5e6)).abs() <= 0.3e6);
    assert!((grid[peak_above] - (wa + 112.5e6)).abs() <= 0.3e6);
}

#[test]
fn mirror_symmetric_chain_is_reciprocal_and_symmetric() {
    let wa = 9.999e9;
    let h = photo_magnonic_chain(4, 0, wa, wa, c(25e6, 0.0), c(100e6, 0.0), true).unwrap();
    let setup = ScatteringSetup::photo_magnonic(h, 0.5e6, 10e6).unwrap();
    let grid: Vec<f64> = (0..401).map(|i| wa - 200e6 + 1e6 * i as f64).collect();
    let r = s_parameters(&setup, &grid).unwrap();
    assert!(r.singular.iter().all(|s| !s));
    for s in &r.s_matrix {
        assert!((s[[1, 0]] - s[[0, 1]]).norm() < 1e-10);
        assert!((s[[0, 0]] - s[[1, 1]]).norm() < 1e-10);
    }
}

#[test]
fn invalid_setups_are_rejected() {
    let h = build_qbh(2, &[Term::Onsite(0, 1.0), Term::Onsite(1, 1.0)]).unwrap();
    assert!(ScatteringSetup::new(h.clone(), vec![c(0.1, 0.0)], vec![0]).is_err());
    assert!(ScatteringSetup::new(h.clone(), vec![c(0.1, 0.0); 2], vec![]).is_err());
    assert!(ScatteringSetup::new(h.clone(), vec![c(0.1, 0.0); 2], vec![0, 0]).is_err());
    assert!(ScatteringSetup::new(h.clone(), vec![c(f64::NAN, 0.0); 2], vec![0]).is_err());
    let setup = ScatteringSetup::new(h, vec![c(0.1, 0.0); 2], vec![0, 1]).unwrap();
    assert!(matches!(response_matrix(&setup, -1.0), Err(Error::InvalidParameter(_))));
    assert!(driven_mode_profile(&setup, 5, 1.0).is_err());
}

#[test]
fn lossless_resonance_is_flagged_singular() {
    // The second mode has no loss and sits exactly on the drive frequency.
    let h = build_qbh(2, &[Term::Onsite(0, 1.0), Term::Onsite(1, 2.0)]).unwrap();
    let setup = ScatteringSetup::new(h, vec![c(0.1, 0.0), c(0.0, 0.0)], vec![0]).unwrap();
    let r = s_parameters(&setup, &[1.5, 2.0]).unwrap();
    assert_eq!(r.singular, vec![false, true]);
    assert!(r.s_matrix[1][[0, 0]].re.is_nan());
}

#[test]
fn offset_chain_profile_shows_the_right_edge_mode() {
    let wa = 9.999e9;
    let h = photo_magnonic_chain(4, 1, wa, wa, c(25e6, 0.0), c(100e6, 0.0), true).unwrap();
    let setup = ScatteringSetup::photo_magnonic(h, 0.5e6, 10e6).unwrap();
    let right = setup.ports()[1];
    let p = driven_mode_profile(&setup, right, wa).unwrap();
    assert_eq!(p.detection_mode, setup.ports()[0]);
    // The last photon carries the response; the last magnon follows at t/g.
    assert!((p.magnitudes[3] - 1.0).abs() < 1e-12);
    assert!((p.magnitudes[7] - 0.25).abs() < 1e-2);
}
