//! Polariton splitting of a single photon-magnon cell and of two coupled
//! cavities, from the closed forms and from the dynamical matrix.
//!
//! ```text
//! cargo run --example polaritons
//! ```

use bosetopo::linalg::c;
use bosetopo::models::{closed_form_polaritons, coupled_cavity_pair, photo_magnonic_chain};
use bosetopo::spectral::diagonalize;

fn positive_eigenvalues(h: &bosetopo::qbh::QuadraticHamiltonian) -> bosetopo::Result<Vec<f64>> {
    let spec = diagonalize(&h.dynamical_matrix())?;
    let mut pos: Vec<f64> = spec.eigenvalues.iter().map(|z| z.re).filter(|&x| x > 0.0).collect();
    pos.sort_by(f64::total_cmp);
    Ok(pos)
}

pub fn run_example() -> bosetopo::Result<()> {
    let omega = 9.999e9;
    let g = c(112.5e6, 0.0);

    let (plus, minus) = closed_form_polaritons(omega, omega, g, true)?;
    println!(
        "RWA closed form:   {:.6} GHz and {:.6} GHz, splitting {:.3} MHz",
        minus / 1e9,
        plus / 1e9,
        (plus - minus) / 1e6
    );

    let cell = photo_magnonic_chain(1, 0, omega, omega, c(0.0, 0.0), g, true)?;
    let numeric = positive_eigenvalues(&cell)?;
    println!("RWA dense solver:  splitting {:.3} MHz", (numeric[1] - numeric[0]) / 1e6);

    // Keeping the counter-rotating terms shifts both branches slightly.
    let (plus, minus) = closed_form_polaritons(omega, omega, g, false)?;
    let full = photo_magnonic_chain(1, 0, omega, omega, c(0.0, 0.0), g, false)?;
    let numeric = positive_eigenvalues(&full)?;
    println!(
        "full closed form:  splitting {:.3} MHz (dense solver {:.3} MHz)",
        (plus - minus) / 1e6,
        (numeric[1] - numeric[0]) / 1e6
    );

    let pair = coupled_cavity_pair(9.9783e9, c(12.7e6, 0.0))?;
    let modes = positive_eigenvalues(&pair)?;
    println!("two cavities:      splitting {:.4} MHz", (modes[1] - modes[0]) / 1e6);
    Ok(())
}

#[allow(dead_code)]
fn main() -> bosetopo::Result<()> {
    run_example()
}
