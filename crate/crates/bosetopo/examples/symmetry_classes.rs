//! Symmetry classes of the model library, before and after dressing.
//!
//! ```text
//! cargo run --example symmetry_classes
//! ```

use bosetopo::linalg::c;
use bosetopo::models::{bkc, bosonic_ssh, photo_magnonic_chain, ModelSpec};
use bosetopo::topology::detect_symmetry_class;

pub fn run_example() -> bosetopo::Result<()> {
    let models = vec![
        ("photo-magnonic, full", photo_magnonic_chain(6, 1, 1.0, 1.0, c(0.25, 0.0), c(1.0, 0.0), false)?),
        ("photo-magnonic, RWA", photo_magnonic_chain(6, 1, 1.0, 1.0, c(0.25, 0.0), c(1.0, 0.0), true)?),
        ("photo-magnonic, gauged", ModelSpec::photo_magnonic_gauged(6, 1, 0.25, 1.0).build()?),
        ("Kitaev chain", bkc(6, 1.0, 0.4)?),
        ("SSH", bosonic_ssh(6, 0.5, 1.0)?),
    ];
    for (name, h) in models {
        let r = detect_symmetry_class(&h, 1e-8, true);
        let dressed = r.local_dressing.as_ref().map_or("none".to_string(), |d| d.class_label.to_string());
        println!(
            "{name:<24} class {:<8} dressed {dressed:<8} squeezing axis {:?}",
            r.class_label.to_string(),
            r.squeezing
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> bosetopo::Result<()> {
    run_example()
}
