//! S-parameters of photo-magnonic chains probed at the two boundary
//! photons.
//!
//! The mirror-symmetric chain (offset 0) is reciprocal and has equal
//! reflections at both ends. The offset-1 chain keeps `|S21| = |S12|` but
//! reflects differently at its two ends, and its right edge mode shows up
//! when it is driven from the right.
//!
//! ```text
//! cargo run --release --example scattering
//! ```

use bosetopo::linalg::c;
use bosetopo::models::photo_magnonic_chain;
use bosetopo::scattering::{driven_mode_profile, s_parameters, ScatteringSetup};

pub fn run_example() -> bosetopo::Result<()> {
    let wa = 9.999e9;
    let (g, t) = (c(100e6, 0.0), c(25e6, 0.0));
    let grid: Vec<f64> = (0..2001).map(|i| wa - 300e6 + 600e6 * i as f64 / 2000.0).collect();
    for offset in [0usize, 1] {
        let h = photo_magnonic_chain(4, offset, wa, wa, t, g, true)?;
        let setup = ScatteringSetup::photo_magnonic(h, 0.5e6, 10e6)?;
        let r = s_parameters(&setup, &grid)?;
        let mut d_trans = 0.0f64;
        let mut d_refl = 0.0f64;
        for s in &r.s_matrix {
            d_trans = d_trans.max((s[[1, 0]].norm() - s[[0, 1]].norm()).abs());
            d_refl = d_refl.max((s[[0, 0]] - s[[1, 1]]).norm());
        }
        let at = grid.len() / 2;
        println!(
            "offset {offset}: max ||S21|-|S12|| = {d_trans:.1e}, max |S11 - S22| = {d_refl:.3}, at w_a: |S11| = {:.3}, |S22| = {:.3}, |S21| = {:.2e}",
            r.s_matrix[at][[0, 0]].norm(),
            r.s_matrix[at][[1, 1]].norm(),
            r.s_matrix[at][[1, 0]].norm()
        );
    }

    let h = photo_magnonic_chain(4, 1, wa, wa, t, g, true)?;
    let setup = ScatteringSetup::photo_magnonic(h, 0.5e6, 10e6)?;
    let labels = setup.hamiltonian().labels().to_vec();
    for drive in [setup.ports()[1], setup.ports()[0]] {
        let p = driven_mode_profile(&setup, drive, wa)?;
        let cells: Vec<String> = labels.iter().zip(&p.magnitudes).map(|(l, m)| format!("{l}:{m:.3}")).collect();
        println!("drive {} at w_a: {}", labels[drive], cells.join(" "));
        println!("  photon amplitude at {}: |v| = {:.4e}", labels[p.detection_mode], p.detection_amplitude.norm());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> bosetopo::Result<()> {
    run_example()
}
