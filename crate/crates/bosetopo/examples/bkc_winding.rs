//! Winding number of the bosonic Kitaev chain.
//!
//! The chain is in the squeezing class, and its auxiliary symbol is
//! `B(k) = t sin k − iδ cos k`, an ellipse around the origin whose
//! orientation follows the sign of `tδ`. The winding is `+1` for `tδ > 0`
//! and `−1` for `tδ < 0`; at `δ = 0` the ellipse collapses and the gap closes.
//!
//! ```text
//! cargo run --example bkc_winding
//! ```

use bosetopo::models::{bkc_epsilon, ModelSpec};
use bosetopo::topology::{symbol_invariant, InvariantKind};

pub fn run_example() -> bosetopo::Result<()> {
    let t = 1.0;
    for delta in [0.4, 1.0, 3.0, -0.4, -3.0, 0.0] {
        let sym = ModelSpec::bkc(16, t, delta).bloch_symbol()?;
        let r = symbol_invariant(&sym, 1e-8, 1024)?;
        let value = match r.invariant.kind {
            InvariantKind::Winding(n) => format!("winding {n:+}"),
            InvariantKind::GapClosed => "gap closed".to_string(),
            other => format!("{other:?}"),
        };
        println!(
            "delta = {delta:+.1}t  eps = {:+.3}  class {}  {value}  (min |det B| = {:.3})",
            bkc_epsilon(t, delta),
            r.class_label,
            r.invariant.gap_margin
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> bosetopo::Result<()> {
    run_example()
}
