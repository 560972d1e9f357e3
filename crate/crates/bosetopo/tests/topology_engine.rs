use bosetopo::linalg::{c, C64, I};
use bosetopo::models::{bkc, bosonic_ssh, photo_magnonic_chain, ModelSpec, PerturbationKind};
use bosetopo::topology::{
    auxiliary_b, berry_winding, berry_winding_detailed, bulk_boundary_check, classify_symbol, detect_symmetry_class,
    pfaffian, pfaffian_invariant, symbol_invariant, winding_number, Band, ClassLabel, InvariantKind,
};
use bosetopo::Error;
use ndarray::array;

fn label(t: bool, n: bool, s: bool) -> ClassLabel {
    ClassLabel { t, n, s }
}

#[test]
fn model_library_classes() {
    let full = photo_magnonic_chain(6, 1, 1.0, 1.0, c(0.25, 0.0), c(1.0, 0.0), false).unwrap();
    assert_eq!(detect_symmetry_class(&full, 1e-8, false).class_label, label(true, false, false));
    let rwa = photo_magnonic_chain(6, 1, 1.0, 1.0, c(0.25, 0.0), c(1.0, 0.0), true).unwrap();
    assert_eq!(detect_symmetry_class(&rwa, 1e-8, false).class_label, label(true, true, false));
    let gauged = ModelSpec::photo_magnonic_gauged(6, 1, 0.25, 1.0).build().unwrap();
    assert_eq!(detect_symmetry_class(&gauged, 1e-8, false).class_label, label(false, true, true));
    let kitaev = bkc(6, 1.0, 0.4).unwrap();
    let r = detect_symmetry_class(&kitaev, 1e-8, false);
    assert_eq!(r.class_label, label(false, false, true));
    assert!(r.squeezing.is_some());
}

#[test]
fn ssh_dresses_into_the_pfaffian_class() {
    let r = detect_symmetry_class(&bosonic_ssh(6, 0.5, 1.0).unwrap(), 1e-8, true);
    assert_eq!(r.class_label, label(true, true, false));
    assert_eq!(r.effective_class(), label(false, true, true));
    assert!(r.effective_class().is_pfaffian_class());
}

#[test]
fn class_ranking_prefers_invariants_over_size() {
    assert!(label(false, true, true).rank() > label(true, true, false).rank());
    assert!(label(false, false, true).rank() > label(true, true, false).rank());
    assert!(label(true, true, false).rank() > label(true, false, false).rank());
}

#[test]
fn winding_of_simple_loops() {
    assert_eq!(winding_number(|k| (I * k).exp(), 64).unwrap().winding(), Some(1));
    assert_eq!(winding_number(|k| (-3.0 * I * k).exp(), 64).unwrap().winding(), Some(-3));
    assert_eq!(winding_number(|k| C64::new(2.0, 0.0) + (I * k).exp(), 64).unwrap().winding(), Some(0));
    // Closed loop through the origin.
    assert!(winding_number(|k| C64::new(1.0, 0.0) + (I * k).exp(), 64).unwrap().is_gap_closed());
}

#[test]
fn fast_winding_is_resolved_by_refinement() {
    let r = winding_number(|k| (40.0 * I * k).exp(), 64).unwrap();
    assert_eq!(r.winding(), Some(40));
    assert!(r.grid_size > 64);
}

#[test]
fn kitaev_winding_follows_the_sign_of_the_pairing() {
    for (delta, expected) in [(0.4, 1), (3.0, 1), (-0.4, -1), (-3.0, -1)] {
        let sym = ModelSpec::bkc(8, 1.0, delta).bloch_symbol().unwrap();
        let r = symbol_invariant(&sym, 1e-8, 1024).unwrap();
        assert_eq!(r.invariant.kind, InvariantKind::Winding(expected), "delta = {delta}");
    }
    let closed = symbol_invariant(&ModelSpec::bkc(8, 1.0, 0.0).bloch_symbol().unwrap(), 1e-8, 1024).unwrap();
    assert!(closed.invariant.is_gap_closed());
}

#[test]
fn auxiliary_matrix_of_the_kitaev_chain() {
    let h = bkc(4, 1.0, 0.4).unwrap();
    let axis = detect_symmetry_class(&h, 1e-8, false).squeezing.unwrap();
    let b = auxiliary_b(&h, axis, 1e-8).unwrap();
    assert_eq!(b.dim(), (4, 4));
    // Number-conserving chains have no squeezing axis to reduce along.
    let ssh = bosonic_ssh(4, 0.5, 1.0).unwrap();
    assert!(auxiliary_b(&ssh, (1.0, 0.0), 1e-8).is_err());
}

#[test]
fn pfaffian_of_small_matrices() {
    let a = array![[0.0, 2.0], [-2.0, 0.0]];
    assert_eq!(pfaffian(&a).unwrap(), 2.0);
    let b = array![[0.0, 1.0, 2.0, 3.0], [-1.0, 0.0, 4.0, 5.0], [-2.0, -4.0, 0.0, 6.0], [-3.0, -5.0, -6.0, 0.0]];
    // af − be + cd
    assert!((pfaffian(&b).unwrap() - (1.0 * 6.0 - 2.0 * 5.0 + 3.0 * 4.0)).abs() < 1e-12);
    assert!(pfaffian(&array![[0.0, 1.0], [1.0, 0.0]]).is_err());
}

#[test]
fn photo_magnonic_pfaffian_alternates_with_the_offset() {
    for n in 1..=4 {
        let sym = ModelSpec::photo_magnonic_gauged(8, n, 25e6, 100e6).bloch_symbol().unwrap();
        let r = pfaffian_invariant(&sym, 1e-8).unwrap();
        assert_eq!(r.pfaffian_sign(), Some(if n % 2 == 0 { 1 } else { -1 }), "n = {n}");
    }
}

#[test]
fn pfaffian_refuses_symbols_outside_its_class() {
    let sym = ModelSpec::bkc(8, 1.0, 0.4).bloch_symbol().unwrap();
    assert!(pfaffian_invariant(&sym, 1e-8).is_err());
}

#[test]
fn berry_winding_equals_the_offset() {
    let g = 100e6;
    for n in 0..4 {
        let sym =
            ModelSpec::photo_magnonic(8, n, 9.999e9, 9.999e9, c(g / 4.0, 0.0), c(g, 0.0), true).bloch_symbol().unwrap();
        assert_eq!(berry_winding(&sym, Band::Plus, 256).unwrap(), n as i64);
        let d = berry_winding_detailed(&sym, Band::Plus, 256, 1).unwrap();
        assert!((d.raw - n as f64).abs() < 1e-3);
    }
}

#[test]
fn degenerate_bands_are_reported() {
    let sym = ModelSpec::photo_magnonic(8, 1, 1.0, 1.0, c(0.0, 0.0), c(0.0, 0.0), true).bloch_symbol().unwrap();
    assert!(matches!(berry_winding(&sym, Band::Plus, 64), Err(Error::BandDegeneracy(_))));
}

#[test]
fn symbol_classification_matches_real_space() {
    let (cls, axis) = classify_symbol(&ModelSpec::bkc(8, 1.0, 0.4).bloch_symbol().unwrap(), 1e-8);
    assert_eq!(cls, label(false, false, true));
    assert!(axis.is_some());
}

#[test]
fn bulk_boundary_for_ssh_and_the_offset_chain() {
    let ssh = bulk_boundary_check(&ModelSpec::ssh(12, 10e6, 20e6), 12).unwrap();
    assert_eq!(ssh.invariant.kind, InvariantKind::Pfaffian(-1));
    assert_eq!(ssh.left_count, 1);
    assert!(ssh.holds);

    // The squeezing chain needs more cells before its two ends decouple:
    // the kernel vectors of B decay by |ε| every second site.
    for (delta, n) in [(0.4, 31), (-0.4, 24), (3.0, 24)] {
        let kitaev = bulk_boundary_check(&ModelSpec::bkc(n, 1.0, delta), n).unwrap();
        assert_eq!(kitaev.invariant.winding().map(i64::abs), Some(1));
        assert_eq!(kitaev.zero_modes.sector, bosetopo::spectral::Sector::Auxiliary);
        assert!(kitaev.left_count >= 1, "delta = {delta}");
        assert!(kitaev.holds);
    }

    let tc = 100e6;
    let chain = ModelSpec::photo_magnonic_gauged(12, 3, 25e6, 100e6).perturb(PerturbationKind::MagnonHopping, 0.1 * tc);
    let r = bulk_boundary_check(&chain, 12).unwrap();
    assert_eq!(r.left_count % 2, 1);
    assert!(r.holds && r.edges_decoupled);
}

#[test]
fn bulk_boundary_needs_a_long_enough_chain() {
    assert!(matches!(bulk_boundary_check(&ModelSpec::ssh(4, 0.5, 1.0), 4), Err(Error::InvalidParameter(_))));
}
