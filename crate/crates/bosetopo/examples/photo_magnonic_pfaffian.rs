//! Pfaffian invariant of the gauge-transformed photo-magnonic chain.
//!
//! With photon hopping `it` and coupling `ig` the chain is purely
//! imaginary and number conserving, so the Pfaffian sign applies. It equals
//! `(−1)^n` for coupling offset `n`. A magnon hopping `t_m` leaves the
//! invariant alone until the gap closes at `t_c = g²/(4t)`, found here by
//! bisection. The open chain then shows the zero-mode parity predicted by
//! the invariant.
//!
//! ```text
//! cargo run --example photo_magnonic_pfaffian
//! ```

use bosetopo::models::{ModelSpec, PerturbationKind};
use bosetopo::topology::{bulk_boundary_check, pfaffian_invariant};

fn gap_closed(n: usize, t: f64, g: f64, tm: f64) -> bosetopo::Result<bool> {
    let spec = ModelSpec::photo_magnonic_gauged(12, n, t, g).perturb(PerturbationKind::MagnonHopping, tm);
    Ok(pfaffian_invariant(&spec.bloch_symbol()?, 1e-8)?.is_gap_closed())
}

/// Smallest magnon hopping in `[0, hi]` at which the gap is closed.
pub fn first_gap_closing(n: usize, t: f64, g: f64, hi: f64) -> bosetopo::Result<f64> {
    let (mut lo, mut hi) = (0.0, hi);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if gap_closed(n, t, g, mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

pub fn run_example() -> bosetopo::Result<()> {
    let g = 100e6;
    let t = g / 4.0;
    let tc = g * g / (4.0 * t);
    for n in 1..=4 {
        let sym = ModelSpec::photo_magnonic_gauged(12, n, t, g).bloch_symbol()?;
        let s = pfaffian_invariant(&sym, 1e-8)?;
        let closing = first_gap_closing(n, t, g, 2.0 * tc)?;
        println!("offset {n}: s = {:?}, gap closes at t_m = {:.4} t_c", s.kind, closing / tc);
    }
    for (n, frac) in [(3usize, 0.1), (4, 0.9)] {
        let spec = ModelSpec::photo_magnonic_gauged(12, n, t, g).perturb(PerturbationKind::MagnonHopping, frac * tc);
        let r = bulk_boundary_check(&spec, 12)?;
        println!(
            "offset {n}, t_m = {frac} t_c: {:?}, {} left zero modes, {} right, correspondence holds: {}",
            r.invariant.kind, r.left_count, r.right_count, r.holds
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> bosetopo::Result<()> {
    run_example()
}
