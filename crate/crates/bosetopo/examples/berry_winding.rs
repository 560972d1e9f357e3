//! Berry winding of the upper polariton band of the photo-magnonic chain.
//!
//! Eigenvectors are put in the gauge where their magnon component is real
//! and positive, and the link phases are summed around the Brillouin zone.
//! The result is the coupling offset `n`.
//!
//! ```text
//! cargo run --example berry_winding
//! ```

use bosetopo::linalg::c;
use bosetopo::models::ModelSpec;
use bosetopo::topology::{berry_winding_detailed, Band};

pub fn run_example() -> bosetopo::Result<()> {
    let g = 100e6;
    for n in 0..4 {
        let spec = ModelSpec::photo_magnonic(12, n, 9.999e9, 9.999e9, c(g / 4.0, 0.0), c(g, 0.0), true);
        let sym = spec.bloch_symbol()?;
        let r = berry_winding_detailed(&sym, Band::Plus, 256, 1)?;
        println!(
            "offset {n}: gamma_+ = {} (before rounding {:.12}, Wilson loop mod 2: {:.3}, {} k-points)",
            r.winding, r.raw, r.wilson_mod2, r.grid_size
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> bosetopo::Result<()> {
    run_example()
}
