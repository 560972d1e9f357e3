//! The right-edge zero mode of the offset-1 photo-magnonic chain.
//!
//! In the rotating frame at resonance the chain has one mode on the right
//! edge made of the last photon and the last magnon in the ratio `g* : t*`,
//! and one magnon on the left that couples to nothing.
//!
//! ```text
//! cargo run --example edge_mode
//! ```

use bosetopo::linalg::c;
use bosetopo::models::photo_magnonic_chain;
use bosetopo::spectral::{zero_modes_of, Localization};

pub fn run_example() -> bosetopo::Result<()> {
    let g = c(100e6, 0.0);
    let t = c(11e6, 0.0);
    for n in [4usize, 8] {
        let h = photo_magnonic_chain(n, 1, 0.0, 0.0, t, g, true)?;
        let report = zero_modes_of(&h, None)?;
        println!("N = {n}: {} zero modes ({} left, {} right)", report.count, report.left_count(), report.right_count());
        for mode in &report.modes {
            let side = if mode.is_left() { "left " } else { "right" };
            let (a, m) = (mode.vector[n - 1], mode.vector[2 * n - 1]);
            let shape = match mode.localization {
                Localization::Exponential { length, .. } => format!("exponential, length {length:.2} cells"),
                Localization::Compact => "compact".to_string(),
                Localization::Delocalized => "delocalized".to_string(),
            };
            if mode.is_left() {
                println!("  {side} disconnected = {}, {shape}", mode.disconnected);
            } else {
                println!("  {side} a_(N-1) / m_(N-1) = {:.6}, photon weight {:.4}, {shape}", a / m, a.norm_sqr());
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> bosetopo::Result<()> {
    run_example()
}
