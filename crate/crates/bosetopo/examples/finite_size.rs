//! Finite-size splitting of the SSH edge modes: the smallest eigenvalue
//! of the open chain decays exponentially with the number of cells.
//!
//! ```text
//! cargo run --example finite_size
//! ```

use bosetopo::models::ModelSpec;
use bosetopo::spectral::{finite_size_scan, Observable};

pub fn run_example() -> bosetopo::Result<()> {
    let spec = ModelSpec::ssh(4, 0.5, 1.0);
    let table = finite_size_scan(&spec, &[4, 6, 8, 10, 12, 14, 16], Observable::MinAbsEigenvalue)?;
    for (n, v) in &table.rows {
        println!("N = {n:2}: min |eigenvalue| = {v:.3e}");
    }
    if let Some(fit) = table.fit {
        println!("decay rate {:.4} per cell (ln 2 = {:.4}), r^2 = {:.6}", fit.rate, 2f64.ln(), fit.r2);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> bosetopo::Result<()> {
    run_example()
}
