//! Majorana bosons of the odd-length bosonic Kitaev chain.
//!
//! For `N = 2M + 1` the forms `L = Σ (−ε)^j x_(2j+1)` and
//! `R = Σ (−ε)^j p_(N−2j)` commute with the Hamiltonian, and
//! `[L, R] = i(M+1)(−ε)^M`.
//!
//! ```text
//! cargo run --example bkc_majorana
//! ```

use bosetopo::linalg::{norm, CVec, C64};
use bosetopo::models::{bkc, bkc_epsilon};
use bosetopo::qbh::{form_bracket, form_commutator_with, quadrature_p, quadrature_x};

/// `(L, R)` as coefficient vectors on an odd chain of `n` sites.
pub fn majorana_forms(n: usize, eps: f64) -> (CVec, CVec) {
    let m = (n - 1) / 2;
    let mut l = CVec::zeros(2 * n);
    let mut r = CVec::zeros(2 * n);
    for j in 0..=m {
        let w = (-eps).powi(j as i32);
        // Sites are numbered from 1 in the formulas and from 0 here.
        l = l + quadrature_x(n, 2 * j) * C64::new(w, 0.0);
        r = r + quadrature_p(n, n - 1 - 2 * j) * C64::new(w, 0.0);
    }
    (l, r)
}

pub fn run_example() -> bosetopo::Result<()> {
    let t = 1.0;
    for delta in [3.0, 1.0 / 3.0] {
        let eps = bkc_epsilon(t, delta);
        for n in [5usize, 9, 13] {
            let h = bkc(n, t, delta)?;
            let g = h.dynamical_matrix();
            let (l, r) = majorana_forms(n, eps);
            let m = (n - 1) / 2;
            let bracket = form_bracket(&l, &r);
            let expected = C64::new(0.0, (m + 1) as f64 * (-eps).powi(m as i32));
            println!(
                "eps = {eps:+.2}, N = {n:2}: |[H, L]| = {:.1e}, |[H, R]| = {:.1e}, [L, R] = {:+.6}i (expected {:+.6}i)",
                norm(&form_commutator_with(&g, &l)),
                norm(&form_commutator_with(&g, &r)),
                bracket.im,
                expected.im
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> bosetopo::Result<()> {
    run_example()
}
