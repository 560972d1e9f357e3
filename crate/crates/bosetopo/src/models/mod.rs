//! Named lattice models, their perturbations and their Bloch symbols.
//!
//! All real-space constructors use open boundaries unless a `periodic`
//! variant is requested, in which case the shift matrix `T_N` is replaced by
//! the cyclic shift and every hopping wraps around with the same amplitude.

mod spec;
mod symbol;

pub use spec::{ModelName, ModelSpec, PerturbationKind, PerturbationSpec, Scalar};
pub use symbol::BlochSymbol;

use crate::error::{Error, Result};
use crate::linalg::{block2, c, identity, to_complex, zeros, CMat, C64, I};
use crate::qbh::{shift_matrix, Layout, QuadraticHamiltonian};

/// `(T_N)^p` for open chains, or the `p`-th power of the cyclic shift for
/// rings.
pub(crate) fn shift(n: usize, p: usize, periodic: bool) -> CMat {
    if !periodic {
        return to_complex(&shift_matrix(n, p));
    }
    let mut t = zeros(n, n);
    for j in 0..n {
        t[[(j + p) % n, j]] += c(1.0, 0.0);
    }
    t
}

fn two_orbital_layout(n: usize, first: &str, second: &str, periodic: bool) -> Layout {
    let labels = (0..n).map(|j| format!("{first}_{j}")).chain((0..n).map(|j| format!("{second}_{j}"))).collect();
    let cells = (0..n).chain(0..n).collect();
    Layout { labels, cells, periodic }
}

/// Photon chain with one magnet per site, magnon `j + n` coupled to photon
/// `j` (the "offset" `n`).
///
/// Modes are ordered `[a_0..a_{N−1}, m_0..m_{N−1}]`. Photons hop with
/// amplitude `−t` (`K[a_{j+1}, a_j] = −t`), the photon-magnon coupling is
/// `g·m_{j+n}†a_j + h.c.` and, without the rotating-wave approximation, the
/// counter-rotating pairing `g*·a_j†m_{j+n}† + h.c.` is kept. Magnons with
/// index below `n` are left uncoupled on an open chain.
///
/// The diagonal frequencies are used as given: passing `ω_a = ω_m = 0`
/// gives the rotating-frame chain at resonance.
pub fn photo_magnonic_chain(
    n_cells: usize,
    offset: usize,
    omega_a: f64,
    omega_m: f64,
    t: C64,
    g: C64,
    rwa: bool,
) -> Result<QuadraticHamiltonian> {
    photo_magnonic_chain_bc(n_cells, offset, omega_a, omega_m, t, g, rwa, false)
}

/// [`photo_magnonic_chain`] closed into a ring.
pub fn photo_magnonic_ring(
    n_cells: usize,
    offset: usize,
    omega_a: f64,
    omega_m: f64,
    t: C64,
    g: C64,
    rwa: bool,
) -> Result<QuadraticHamiltonian> {
    photo_magnonic_chain_bc(n_cells, offset, omega_a, omega_m, t, g, rwa, true)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn photo_magnonic_chain_bc(
    n: usize,
    offset: usize,
    omega_a: f64,
    omega_m: f64,
    t: C64,
    g: C64,
    rwa: bool,
    periodic: bool,
) -> Result<QuadraticHamiltonian> {
    if n < 1 {
        return Err(Error::InvalidParameter("photo-magnonic chain needs N ≥ 1".into()));
    }
    if offset > n {
        return Err(Error::InvalidParameter(format!("offset n = {offset} exceeds N = {n}")));
    }
    for (name, v) in [("omega_a", omega_a), ("omega_m", omega_m)] {
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("{name} = {v}")));
        }
    }
    let t1 = shift(n, 1, periodic);
    let tn = shift(n, offset, periodic);
    let tn_t = tn.t().to_owned();
    let k_aa = identity(n) * omega_a - &t1 * t - t1.t().to_owned() * t.conj();
    let k_mm = identity(n) * omega_m;
    let k_ma = &tn * g;
    let k_am = &tn_t * g.conj();
    let k = block2(&k_aa, &k_am, &k_ma, &k_mm);
    let delta = if rwa {
        zeros(2 * n, 2 * n)
    } else {
        block2(&zeros(n, n), &(&tn_t * g.conj()), &(&tn * g.conj()), &zeros(n, n))
    };
    QuadraticHamiltonian::with_layout(k, delta, two_orbital_layout(n, "a", "m", periodic))
}

/// Bosonic Kitaev chain: `K = (it/2)(T − Tᵀ)`, `Δ = (iδ/2)(T + Tᵀ)`.
pub fn bkc(n: usize, t: f64, delta: f64) -> Result<QuadraticHamiltonian> {
    bkc_bc(n, t, delta, false)
}

/// [`bkc`] closed into a ring.
pub fn bkc_ring(n: usize, t: f64, delta: f64) -> Result<QuadraticHamiltonian> {
    bkc_bc(n, t, delta, true)
}

pub(crate) fn bkc_bc(n: usize, t: f64, delta: f64, periodic: bool) -> Result<QuadraticHamiltonian> {
    if n < 2 {
        return Err(Error::InvalidParameter("the Kitaev chain needs N ≥ 2".into()));
    }
    if !t.is_finite() || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("t = {t}, δ = {delta}")));
    }
    let s = shift(n, 1, periodic);
    let st = s.t().to_owned();
    let k = (&s - &st) * (I * t / 2.0);
    let d = (&s + &st) * (I * delta / 2.0);
    let mut layout = Layout::trivial(n);
    layout.periodic = periodic;
    QuadraticHamiltonian::with_layout(k, d, layout)
}

/// `ε = (δ − t)/(δ + t)`, the decay ratio of the Kitaev-chain edge modes.
pub fn bkc_epsilon(t: f64, delta: f64) -> f64 {
    (delta - t) / (delta + t)
}

/// Bosonic SSH chain with modes `[a_0..a_{N−1}, b_0..b_{N−1}]`, intra-cell
/// hopping `t1` and inter-cell hopping `t2` (`b_j ↔ a_{j+1}`).
pub fn bosonic_ssh(n: usize, t1: f64, t2: f64) -> Result<QuadraticHamiltonian> {
    bosonic_ssh_bc(n, t1, t2, false)
}

/// [`bosonic_ssh`] closed into a ring.
pub fn bosonic_ssh_ring(n: usize, t1: f64, t2: f64) -> Result<QuadraticHamiltonian> {
    bosonic_ssh_bc(n, t1, t2, true)
}

pub(crate) fn bosonic_ssh_bc(n: usize, t1: f64, t2: f64, periodic: bool) -> Result<QuadraticHamiltonian> {
    if n < 1 {
        return Err(Error::InvalidParameter("SSH chain needs N ≥ 1".into()));
    }
    if !(t1 > 0.0 && t2 > 0.0 && t1.is_finite() && t2.is_finite()) {
        return Err(Error::InvalidParameter(format!("SSH hoppings must be positive (t1 = {t1}, t2 = {t2})")));
    }
    let s = shift(n, 1, periodic);
    let upper = identity(n) * t1 + s.t().to_owned() * t2;
    let lower = identity(n) * t1 + &s * t2;
    let k = block2(&zeros(n, n), &upper, &lower, &zeros(n, n));
    QuadraticHamiltonian::with_layout(k, zeros(2 * n, 2 * n), two_orbital_layout(n, "a", "b", periodic))
}

/// Two photonic cavities at `ω_a` coupled by hopping `−t`; eigenvalues
/// `ω_a ± |t|`.
pub fn coupled_cavity_pair(omega_a: f64, t: C64) -> Result<QuadraticHamiltonian> {
    if !(omega_a > 0.0) {
        return Err(Error::InvalidParameter(format!("ω_a = {omega_a} must be positive")));
    }
    let k = ndarray::array![[c(omega_a, 0.0), -t.conj()], [-t, c(omega_a, 0.0)]];
    QuadraticHamiltonian::new(k, zeros(2, 2))
}

/// Closed-form polariton frequencies `(ω₊, ω₋)` of one photon coupled to one
/// magnon.
///
/// With `rwa` the pair is `(ω_a+ω_m)/2 ± √((ω_a−ω_m)² + 4|g|²)/2`; without it
/// the positive eigenvalues of the full dynamical matrix,
/// `ω±² = (ω_a²+ω_m²)/2 ± √((ω_a²−ω_m²)² + 16ω_aω_m|g|²)/2`.
pub fn closed_form_polaritons(omega_a: f64, omega_m: f64, g: C64, rwa: bool) -> Result<(f64, f64)> {
    let g2 = g.norm_sqr();
    if rwa {
        let root = ((omega_a - omega_m).powi(2) + 4.0 * g2).sqrt();
        let mean = (omega_a + omega_m) / 2.0;
        return Ok((mean + root / 2.0, mean - root / 2.0));
    }
    if !(omega_a > 0.0 && omega_m > 0.0) {
        return Err(Error::InvalidParameter("the full polariton formula needs positive ω_a and ω_m".into()));
    }
    let root = ((omega_a.powi(2) - omega_m.powi(2)).powi(2) + 16.0 * omega_a * omega_m * g2).sqrt();
    let mean = (omega_a.powi(2) + omega_m.powi(2)) / 2.0;
    let plus = mean + root / 2.0;
    let minus = mean - root / 2.0;
    if minus < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "coupling |g| = {} drives the lower polariton unstable",
            g.norm()
        )));
    }
    Ok((plus.sqrt(), minus.sqrt()))
}

fn is_two_orbital(h: &QuadraticHamiltonian, first: char, second: char) -> bool {
    let n = h.n_modes();
    if !n.is_multiple_of(2) {
        return false;
    }
    let half = n / 2;
    h.labels().iter().enumerate().all(|(j, l)| {
        let (prefix, idx) = if j < half { (first, j) } else { (second, j - half) };
        *l == format!("{prefix}_{idx}")
    })
}

/// Adds a perturbation to an existing chain.
///
/// * `MagnonHopping` with strength `t_m` adds `−i t_m (m_j m_{j+1}† − m_j† m_{j+1})`
///   on the photo-magnonic layout.
/// * `SshChiralBreaking` with strength `t` adds
///   `−(it/2)(a_{j+1}†a_j + b_{j+1}†b_j − h.c.)` on the SSH layout.
/// * `LinearInterpolation` with strength `x ∈ [0, 1]` returns
///   `(1 − x)·h + x·target`, entrywise on `(K, Δ)`.
///
/// Wrap-around terms are added when `h` is periodic.
pub fn apply_perturbation(h: &QuadraticHamiltonian, p: &PerturbationSpec) -> Result<QuadraticHamiltonian> {
    if !p.strength.is_finite() {
        return Err(Error::InvalidParameter(format!("perturbation strength {}", p.strength)));
    }
    let periodic = h.layout().periodic;
    match &p.kind {
        PerturbationKind::MagnonHopping => {
            if !is_two_orbital(h, 'a', 'm') {
                return Err(Error::IncompatibleLayout(
                    "magnon hopping needs the photo-magnonic layout [a_0.., m_0..]".into(),
                ));
            }
            let n = h.n_modes() / 2;
            let s = shift(n, 1, periodic);
            let hop = (&s - &s.t()) * (-I * p.strength);
            let mut k = h.k().clone();
            k.slice_mut(ndarray::s![n.., n..]).scaled_add(c(1.0, 0.0), &hop);
            h.with_matrices(k, h.delta().clone())
        }
        PerturbationKind::SshChiralBreaking => {
            if !is_two_orbital(h, 'a', 'b') {
                return Err(Error::IncompatibleLayout(
                    "chiral-breaking term needs the SSH layout [a_0.., b_0..]".into(),
                ));
            }
            let n = h.n_modes() / 2;
            let s = shift(n, 1, periodic);
            let hop = (&s - &s.t()) * (-I * p.strength / 2.0);
            let mut k = h.k().clone();
            k.slice_mut(ndarray::s![..n, ..n]).scaled_add(c(1.0, 0.0), &hop);
            k.slice_mut(ndarray::s![n.., n..]).scaled_add(c(1.0, 0.0), &hop);
            h.with_matrices(k, h.delta().clone())
        }
        PerturbationKind::LinearInterpolation { toward } => {
            let x = p.strength;
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::InvalidParameter(format!("interpolation parameter x = {x} outside [0, 1]")));
            }
            let mut target_spec = (**toward).clone();
            target_spec.pbc = periodic;
            let target = target_spec.build()?;
            interpolate(h, &target, x)
        }
    }
}

/// `(1 − x)·a + x·b` on `(K, Δ)`; the layout of `a` is kept.
pub fn interpolate(a: &QuadraticHamiltonian, b: &QuadraticHamiltonian, x: f64) -> Result<QuadraticHamiltonian> {
    if a.n_modes() != b.n_modes() {
        return Err(Error::IncompatibleLayout(format!(
            "interpolation between {} and {} modes",
            a.n_modes(),
            b.n_modes()
        )));
    }
    let k = a.k() * (1.0 - x) + b.k() * x;
    let d = a.delta() * (1.0 - x) + b.delta() * x;
    a.with_matrices(k, d)
}

/// Bloch symbol of a translation-invariant model.
pub fn bloch_symbol(spec: &ModelSpec) -> Result<BlochSymbol> {
    spec.bloch_symbol()
}
