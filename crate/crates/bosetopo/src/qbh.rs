//! Quadratic bosonic Hamiltonians and their dynamical matrices.
//!
//! A Hamiltonian on `N` modes is stored as the pair `(K, Δ)`:
//!
//! ```text
//! H = Σ_ij K_ij a_i† a_j + ½ Δ_ij a_i† a_j† + ½ Δ_ij* a_i a_j
//! ```
//!
//! The Heisenberg dynamics of linear forms is generated by the `2N × 2N`
//! dynamical matrix `G = [[K, −Δ], [Δ*, −K*]]`. A linear form
//! `v̂ = Σ_j v_j a_j† + v_{N+j} a_j` satisfies `[H, v̂] = (Gv)^`, so conserved
//! linear forms are exactly the kernel of `G`.

use ndarray::{s, Array2};

use crate::error::{Error, Result};
use crate::linalg::{block2, c, conj, dagger, identity, max_abs, zeros, CMat, CVec, C64, I, ONE};

/// Relative tolerance of the structural checks (Hermiticity of `K`,
/// symmetry of `Δ`, pseudo-Hermiticity and particle-hole symmetry of `G`).
pub const STRUCTURE_TOL: f64 = 1e-12;

/// Default tolerance for downstream "is zero" decisions.
pub const DEFAULT_TOL: f64 = 1e-8;

/// One user-facing term of a Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Term {
    /// `ω a_i† a_i`
    Onsite(usize, f64),
    /// `amp · a_i† a_j + h.c.` with `i ≠ j`
    Hopping(usize, usize, C64),
    /// `amp · a_i† a_j† + h.c.`; `i = j` is allowed.
    Pairing(usize, usize, C64),
}

/// How the modes of a Hamiltonian sit on the lattice.
///
/// `cells[j]` is the unit cell of mode `j`; within a cell, orbitals are
/// numbered by increasing mode index. `periodic` records whether the chain
/// was closed into a ring.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub labels: Vec<String>,
    pub cells: Vec<usize>,
    pub periodic: bool,
}

impl Layout {
    /// One mode per cell, labelled `a_j`.
    pub fn trivial(n: usize) -> Self {
        Self { labels: (0..n).map(|j| format!("a_{j}")).collect(), cells: (0..n).collect(), periodic: false }
    }

    pub fn n_cells(&self) -> usize {
        self.cells.iter().max().map_or(0, |m| m + 1)
    }

    /// Modes of every cell in orbital order.
    pub fn cell_modes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_cells()];
        for (mode, &cell) in self.cells.iter().enumerate() {
            out[cell].push(mode);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian {
    k: CMat,
    delta: CMat,
    layout: Layout,
}

fn scale(m: &CMat) -> f64 {
    max_abs(m).max(1.0)
}

impl QuadraticHamiltonian {
    /// Validates and wraps a `(K, Δ)` pair. Every mode is its own unit cell
    /// and gets the label `a_j` unless overridden.
    pub fn new(k: CMat, delta: CMat) -> Result<Self> {
        let n = k.nrows();
        Self::with_layout(k, delta, Layout::trivial(n))
    }

    pub fn with_layout(k: CMat, delta: CMat, layout: Layout) -> Result<Self> {
        let n = k.nrows();
        if n == 0 {
            return Err(Error::InvalidParameter("a Hamiltonian needs at least one mode".into()));
        }
        if k.ncols() != n || delta.dim() != (n, n) {
            return Err(Error::DimensionMismatch(format!("K is {:?} and Δ is {:?}", k.dim(), delta.dim())));
        }
        if layout.labels.len() != n || layout.cells.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} labels and {} cell indices for {n} modes",
                layout.labels.len(),
                layout.cells.len()
            )));
        }
        if !crate::linalg::is_finite(&k) || !crate::linalg::is_finite(&delta) {
            return Err(Error::NonFinite);
        }
        let herm = max_abs(&(&k - &dagger(&k)));
        if herm > STRUCTURE_TOL * scale(&k) {
            return Err(Error::Structure { property: "Hermitian (K)", residual: herm });
        }
        let sym = max_abs(&(&delta - &delta.t()));
        if sym > STRUCTURE_TOL * scale(&delta) {
            return Err(Error::Structure { property: "symmetric (Δ)", residual: sym });
        }
        Ok(Self { k, delta, layout })
    }

    pub fn n_modes(&self) -> usize {
        self.k.nrows()
    }

    pub fn k(&self) -> &CMat {
        &self.k
    }

    pub fn delta(&self) -> &CMat {
        &self.delta
    }

    pub fn labels(&self) -> &[String] {
        &self.layout.labels
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn n_cells(&self) -> usize {
        self.layout.n_cells()
    }

    /// `true` when the pairing matrix vanishes identically.
    pub fn conserves_number(&self) -> bool {
        self.delta.iter().all(|z| *z == C64::new(0.0, 0.0))
    }

    /// Same layout, new matrices.
    pub fn with_matrices(&self, k: CMat, delta: CMat) -> Result<Self> {
        Self::with_layout(k, delta, self.layout.clone())
    }

    pub fn dynamical_matrix(&self) -> DynamicalMatrix {
        dynamical_matrix(self)
    }
}

/// Builds a Hamiltonian from a list of terms. Term order is irrelevant.
pub fn build_qbh(n_modes: usize, terms: &[Term]) -> Result<QuadraticHamiltonian> {
    if n_modes == 0 {
        return Err(Error::InvalidParameter("n_modes must be positive".into()));
    }
    let check = |i: usize| {
        if i < n_modes {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, n_modes })
        }
    };
    let mut k = zeros(n_modes, n_modes);
    let mut d = zeros(n_modes, n_modes);
    for term in terms {
        match *term {
            Term::Onsite(i, w) => {
                check(i)?;
                if !w.is_finite() {
                    return Err(Error::InvalidParameter(format!("onsite frequency {w}")));
                }
                k[[i, i]] += w;
            }
            Term::Hopping(i, j, amp) => {
                check(i)?;
                check(j)?;
                if i == j {
                    return Err(Error::InvalidParameter(format!(
                        "hopping needs two distinct modes (got {i}, {j}); use Onsite"
                    )));
                }
                k[[i, j]] += amp;
                k[[j, i]] += amp.conj();
            }
            Term::Pairing(i, j, amp) => {
                check(i)?;
                check(j)?;
                if i == j {
                    d[[i, i]] += 2.0 * amp;
                } else {
                    d[[i, j]] += amp;
                    d[[j, i]] += amp;
                }
            }
        }
    }
    QuadraticHamiltonian::new(k, d)
}

/// The bosonic dynamical matrix `G = [[K, −Δ], [Δ*, −K*]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicalMatrix {
    g: CMat,
    n_modes: usize,
}

impl DynamicalMatrix {
    /// Wraps an arbitrary `2N × 2N` matrix after checking both structural
    /// constraints.
    pub fn from_matrix(g: CMat) -> Result<Self> {
        let (r, cl) = g.dim();
        if r != cl || r % 2 != 0 || r == 0 {
            return Err(Error::DimensionMismatch(format!("dynamical matrix must be 2N×2N, got {r}×{cl}")));
        }
        if !crate::linalg::is_finite(&g) {
            return Err(Error::NonFinite);
        }
        let (pseudo, ph) = structural_residuals(&g);
        let tol = STRUCTURE_TOL * scale(&g);
        if pseudo > tol {
            return Err(Error::Structure { property: "pseudo-Hermitian", residual: pseudo });
        }
        if ph > tol {
            return Err(Error::Structure { property: "particle-hole symmetric", residual: ph });
        }
        Ok(Self { g, n_modes: r / 2 })
    }

    pub fn matrix(&self) -> &CMat {
        &self.g
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Recovers `(K, Δ)` from the blocks.
    pub fn blocks(&self) -> (CMat, CMat) {
        let n = self.n_modes;
        let k = self.g.slice(s![..n, ..n]).to_owned();
        let d = -self.g.slice(s![..n, n..]).to_owned();
        (k, d)
    }
}

pub fn dynamical_matrix(h: &QuadraticHamiltonian) -> DynamicalMatrix {
    let g = block2(&h.k, &(-&h.delta), &conj(&h.delta), &(-conj(&h.k)));
    let n = h.n_modes();
    let out = DynamicalMatrix { g, n_modes: n };
    let (pseudo, ph) = structural_residuals(&out.g);
    debug_assert!(pseudo <= STRUCTURE_TOL * scale(&out.g) && ph <= STRUCTURE_TOL * scale(&out.g));
    out
}

/// `τ₃ = diag(I, −I)` of size `2N`.
pub fn tau3(n: usize) -> CMat {
    let mut t = identity(2 * n);
    for j in n..2 * n {
        t[[j, j]] = -ONE;
    }
    t
}

/// `τ₁`: identity blocks off the diagonal.
pub fn tau1(n: usize) -> CMat {
    block2(&zeros(n, n), &identity(n), &identity(n), &zeros(n, n))
}

/// `τ₂ = [[0, −iI], [iI, 0]]`.
pub fn tau2(n: usize) -> CMat {
    block2(&zeros(n, n), &(-I * identity(n)), &(I * identity(n)), &zeros(n, n))
}

/// Returns `(max|τ₃G†τ₃ − G|, max|τ₁G*τ₁ + G|)`.
pub fn structural_residuals(g: &CMat) -> (f64, f64) {
    let n = g.nrows() / 2;
    let t3 = tau3(n);
    let t1 = tau1(n);
    let pseudo = max_abs(&(&t3.dot(&dagger(g)).dot(&t3) - g));
    let ph = max_abs(&(&t1.dot(&conj(g)).dot(&t1) + g));
    (pseudo, ph)
}

/// `G1·G2 − G2·G1`.
pub fn commutator(a: &DynamicalMatrix, b: &DynamicalMatrix) -> Result<CMat> {
    matrix_commutator(&a.g, &b.g)
}

pub fn matrix_commutator(a: &CMat, b: &CMat) -> Result<CMat> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", a.dim(), b.dim())));
    }
    Ok(a.dot(b) - b.dot(a))
}

/// The symmetry generators of the bosonic classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaGenerator {
    /// `β₁ = −iτ₁`, generated by `Σ (a_j†² + a_j²)`-type forms.
    S1,
    /// `β₂ = −iτ₂`
    S2,
    /// `β₃ = τ₃`, total particle number.
    N,
    /// `n1·β₁ + n2·β₂` with `n1² + n2² = 1`.
    S(f64, f64),
}

/// Dynamical matrix of a symmetry generator at size `2N`.
pub fn beta_matrix(generator: BetaGenerator, n_modes: usize) -> Result<DynamicalMatrix> {
    if n_modes == 0 {
        return Err(Error::InvalidParameter("n_modes must be positive".into()));
    }
    let n = n_modes;
    let g = match generator {
        BetaGenerator::S1 => -I * tau1(n),
        BetaGenerator::S2 => -I * tau2(n),
        BetaGenerator::N => tau3(n),
        BetaGenerator::S(n1, n2) => {
            if ((n1 * n1 + n2 * n2) - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidParameter(format!("squeezing axis ({n1}, {n2}) is not normalized")));
            }
            (tau1(n) * n1 + tau2(n) * n2) * (-I)
        }
    };
    Ok(DynamicalMatrix { g, n_modes: n })
}

/// `(T_N)^n`: ones on the `n`-th lower diagonal. `n = 0` is the identity and
/// `n ≥ N` the zero matrix.
pub fn shift_matrix(size: usize, n: usize) -> Array2<f64> {
    let mut t = Array2::zeros((size, size));
    for j in 0..size.saturating_sub(n) {
        t[[j + n, j]] = 1.0;
    }
    t
}

/// Coefficient vector of the quadrature `x_j = (a_j + a_j†)/√2` on the
/// `(a†, a)` basis used by [`DynamicalMatrix`].
pub fn quadrature_x(n_modes: usize, j: usize) -> CVec {
    let mut v = CVec::zeros(2 * n_modes);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    v[j] = c(r, 0.0);
    v[n_modes + j] = c(r, 0.0);
    v
}

/// Coefficient vector of `p_j = i(a_j† − a_j)/√2`.
pub fn quadrature_p(n_modes: usize, j: usize) -> CVec {
    let mut v = CVec::zeros(2 * n_modes);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    v[j] = c(0.0, r);
    v[n_modes + j] = c(0.0, -r);
    v
}

/// The canonical commutator `[v̂†, ŵ] = v† τ₃ w` of two linear forms.
pub fn form_bracket(v: &CVec, w: &CVec) -> C64 {
    let n = v.len() / 2;
    (0..v.len())
        .map(|j| {
            let sign = if j < n { 1.0 } else { -1.0 };
            v[j].conj() * w[j] * sign
        })
        .sum()
}

/// Coefficients of `[H, v̂]`; zero exactly when `v̂` is conserved.
pub fn form_commutator_with(g: &DynamicalMatrix, v: &CVec) -> CVec {
    g.g.dot(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dynamical_matrix_blocks_round_trip() {
        let h = build_qbh(
            2,
            &[
                Term::Onsite(0, 3.0),
                Term::Onsite(1, 2.0),
                Term::Hopping(1, 0, c(0.3, 0.1)),
                Term::Pairing(0, 1, c(0.2, -0.4)),
            ],
        )
        .unwrap();
        let g = h.dynamical_matrix();
        let (k, d) = g.blocks();
        assert_eq!(&k, h.k());
        assert_eq!(&d, h.delta());
    }

    #[test]
    fn hopping_on_diagonal_is_rejected() {
        assert!(matches!(build_qbh(2, &[Term::Hopping(1, 1, ONE)]), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn beta_s_requires_unit_axis() {
        assert!(beta_matrix(BetaGenerator::S(1.0, 1.0), 2).is_err());
    }

    #[test]
    fn from_matrix_rejects_unstructured() {
        let mut g = tau3(2);
        g[[0, 1]] = c(1.0, 0.0);
        assert!(DynamicalMatrix::from_matrix(g).is_err());
    }
}
