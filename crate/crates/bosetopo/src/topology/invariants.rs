use std::collections::BTreeMap;
use std::f64::consts::PI;

use ndarray::Array2;

use super::pfaffian::pfaffian;
use crate::error::{Error, Result};
use crate::linalg::{det, eigh, max_abs, zeros, CMat, CVec, C64, I};
use crate::models::BlochSymbol;
use crate::qbh::QuadraticHamiltonian;
use crate::spectral::uniform_k_grid;

/// Largest number of points the adaptive winding refinement may use.
pub const MAX_WINDING_POINTS: usize = 1 << 20;

/// Grid used for the Pfaffian gap diagnosis.
pub const PFAFFIAN_GAP_GRID: usize = 1024;

/// Relative threshold below which a gap counts as closed.
pub const GAP_CLOSED_REL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InvariantKind {
    Winding(i64),
    Pfaffian(i8),
    Trivial,
    GapClosed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantResult {
    pub kind: InvariantKind,
    /// Minimum over the grid of `|det B(k)|` (winding) or of the smallest
    /// `|eigenvalue|` of `K(k)` (Pfaffian).
    pub gap_margin: f64,
    pub grid_size: usize,
}

impl InvariantResult {
    pub fn winding(&self) -> Option<i64> {
        match self.kind {
            InvariantKind::Winding(n) => Some(n),
            _ => None,
        }
    }

    pub fn pfaffian_sign(&self) -> Option<i8> {
        match self.kind {
            InvariantKind::Pfaffian(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_gap_closed(&self) -> bool {
        self.kind == InvariantKind::GapClosed
    }
}

fn check_axis(squeeze: (f64, f64)) -> Result<(f64, f64)> {
    let (n1, n2) = squeeze;
    let r = (n1 * n1 + n2 * n2).sqrt();
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter("squeezing axis (0, 0)".into()));
    }
    Ok((n1 / r, n2 / r))
}

/// `B = i(Im K − X)` with `X = n1·Im Δ + n2·Re Δ`, built from one
/// `(K, Δ)` pair, after checking that the pair commutes with
/// `n1β₁ + n2β₂` (`Re K = 0`, `n2·Im Δ = n1·Re Δ`).
fn aux_block(k: &CMat, d: &CMat, axis: (f64, f64), thresh: f64) -> Result<CMat> {
    let (n1, n2) = axis;
    let kre = k.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    if kre > thresh {
        return Err(Error::Symmetry(format!("Re K = {kre:.3e} is not zero, so the squeezing symmetry fails")));
    }
    let mis = d.iter().map(|z| (n2 * z.im - n1 * z.re).abs()).fold(0.0, f64::max);
    if mis > thresh {
        return Err(Error::Symmetry(format!(
            "pairing is not aligned with the squeezing axis ({n1:.3}, {n2:.3}) (residual {mis:.3e})"
        )));
    }
    Ok(k.mapv(|z| I * z.im) - d.mapv(|z| I * (n1 * z.im + n2 * z.re)))
}

/// Real-space auxiliary matrix `B` of a Hamiltonian in a squeezing class.
///
/// `G` splits into the blocks `B` and `−Bᵀ` on the two eigenspaces of the
/// squeezing generator, so `B` carries half of the spectrum.
pub fn auxiliary_b(h: &QuadraticHamiltonian, squeeze: (f64, f64), tol: f64) -> Result<CMat> {
    let axis = check_axis(squeeze)?;
    let scale = max_abs(h.k()).max(max_abs(h.delta())).max(f64::MIN_POSITIVE);
    aux_block(h.k(), h.delta(), axis, tol * scale)
}

/// Bloch symbol of the auxiliary matrix.
///
/// It is evaluated as `B(k) = Σ_r e^{−ikr} B_r`, the Toeplitz orientation
/// in which the winding of `det B` equals the index of the auxiliary
/// operator on a chain terminated on the left. For the Kitaev chain this
/// gives `B(k) = t sin k − iδ cos k`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliarySymbol {
    pub blocks: BTreeMap<i64, CMat>,
    pub n_cell: usize,
}

impl AuxiliarySymbol {
    pub fn at(&self, k: f64) -> CMat {
        let mut out = zeros(self.n_cell, self.n_cell);
        for (r, b) in &self.blocks {
            out.scaled_add((-I * (k * *r as f64)).exp(), b);
        }
        out
    }

    pub fn det_at(&self, k: f64) -> C64 {
        let m = self.at(k);
        if self.n_cell == 1 {
            m[[0, 0]]
        } else {
            det(&m).unwrap_or(C64::new(f64::NAN, f64::NAN))
        }
    }
}

pub fn auxiliary_b_symbol(sym: &BlochSymbol, squeeze: (f64, f64), tol: f64) -> Result<AuxiliarySymbol> {
    let axis = check_axis(squeeze)?;
    let thresh = tol * sym.scale().max(f64::MIN_POSITIVE);
    let mut blocks = BTreeMap::new();
    for (r, (k, d)) in sym.blocks() {
        blocks.insert(*r, aux_block(k, d, axis, thresh)?);
    }
    Ok(AuxiliarySymbol { blocks, n_cell: sym.n_cell() })
}

/// Winding number of `f(k)` around the origin as `k` runs over `[−π, π]`.
///
/// Phase increments are accumulated over a uniform closed grid; any step
/// whose increment reaches `π/2` is bisected until it does not. The total
/// number of points is capped at [`MAX_WINDING_POINTS`].
pub fn winding_number<F: Fn(f64) -> C64>(f: F, grid: usize) -> Result<InvariantResult> {
    if grid < 64 {
        return Err(Error::InvalidParameter(format!("winding grid {grid} is below the minimum of 64")));
    }
    let ks: Vec<f64> = (0..=grid).map(|i| -PI + 2.0 * PI * i as f64 / grid as f64).collect();
    let vals: Vec<C64> = ks.iter().map(|&k| f(k)).collect();
    if vals.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut gap = vals.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let mut peak = vals.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 || gap < GAP_CLOSED_REL * peak {
        return Ok(InvariantResult { kind: InvariantKind::GapClosed, gap_margin: gap, grid_size: grid + 1 });
    }
    let mut points = grid + 1;
    let mut total = 0.0;
    for i in 0..grid {
        total += refine(&f, ks[i], ks[i + 1], vals[i], vals[i + 1], &mut points, &mut gap, &mut peak)?;
        if gap < GAP_CLOSED_REL * peak {
            return Ok(InvariantResult { kind: InvariantKind::GapClosed, gap_margin: gap, grid_size: points });
        }
    }
    let turns = total / (2.0 * PI);
    let n = turns.round();
    if (turns - n).abs() > 1e-3 {
        return Err(Error::Unresolvable(format!("accumulated phase {turns:.6} turns is not an integer")));
    }
    Ok(InvariantResult { kind: InvariantKind::Winding(n as i64), gap_margin: gap, grid_size: points })
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> C64>(
    f: &F,
    k0: f64,
    k1: f64,
    z0: C64,
    z1: C64,
    points: &mut usize,
    gap: &mut f64,
    peak: &mut f64,
) -> Result<f64> {
    let step = (z1 / z0).arg();
    if step.abs() < PI / 2.0 {
        return Ok(step);
    }
    if *points >= MAX_WINDING_POINTS {
        return Err(Error::Unresolvable(format!(
            "winding refinement exceeded {MAX_WINDING_POINTS} points near a gap closing"
        )));
    }
    let km = 0.5 * (k0 + k1);
    let zm = f(km);
    *points += 1;
    *gap = gap.min(zm.norm());
    *peak = peak.max(zm.norm());
    if zm.norm() == 0.0 || *gap < GAP_CLOSED_REL * *peak {
        return Ok(0.0);
    }
    Ok(refine(f, k0, km, z0, zm, points, gap, peak)? + refine(f, km, k1, zm, z1, points, gap, peak)?)
}

/// Winding of `det B(k)` for a symbol in the squeezing class.
pub fn winding_of_symbol(sym: &BlochSymbol, squeeze: (f64, f64), grid: usize, tol: f64) -> Result<InvariantResult> {
    let b = auxiliary_b_symbol(sym, squeeze, tol)?;
    winding_number(|k| b.det_at(k), grid)
}

/// `ℤ₂` invariant `sign(Pf(−iK(0)) / Pf(−iK(−π)))` of a number-conserving
/// symbol whose blocks are purely imaginary.
pub fn pfaffian_invariant(sym: &BlochSymbol, tol: f64) -> Result<InvariantResult> {
    if !sym.conserves_number() {
        return Err(Error::Symmetry("the Pfaffian invariant needs Δ = 0 (number symmetry)".into()));
    }
    let n = sym.n_cell();
    if n % 2 == 1 {
        return Err(Error::Symmetry(format!(
            "the Pfaffian invariant needs an even number of orbitals per cell, got {n}"
        )));
    }
    let scale = sym.scale().max(f64::MIN_POSITIVE);
    let kre = sym.blocks().values().flat_map(|(k, _)| k.iter()).map(|z| z.re.abs()).fold(0.0, f64::max);
    if kre > tol * scale {
        return Err(Error::Symmetry(format!(
            "K has a real part ({kre:.3e}); dress the symbol into the squeezing class first"
        )));
    }
    let a0 = real_antisymmetric(&sym.k_at(0.0), tol * scale, "K(0)")?;
    let api = real_antisymmetric(&sym.k_at(-PI), tol * scale, "K(−π)")?;

    let grid = uniform_k_grid(PFAFFIAN_GAP_GRID);
    let mut gap = f64::INFINITY;
    let mut peak = 0.0f64;
    let mut inertia = None;
    let mut inertia_changes = false;
    for &k in &grid {
        let (vals, _) = eigh(&sym.k_at(k))?;
        gap = gap.min(vals.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min));
        peak = peak.max(vals.iter().map(|x| x.abs()).fold(0.0, f64::max));
        let neg = vals.iter().filter(|&&x| x < 0.0).count();
        match inertia {
            None => inertia = Some(neg),
            Some(prev) if prev != neg => inertia_changes = true,
            _ => {}
        }
    }
    let size = PFAFFIAN_GAP_GRID;
    if inertia_changes || peak == 0.0 || gap < GAP_CLOSED_REL * peak {
        return Ok(InvariantResult { kind: InvariantKind::GapClosed, gap_margin: gap, grid_size: size });
    }
    let p0 = pfaffian(&a0)?;
    let ppi = pfaffian(&api)?;
    if p0 == 0.0 || ppi == 0.0 {
        return Ok(InvariantResult { kind: InvariantKind::GapClosed, gap_margin: 0.0, grid_size: size });
    }
    let s = if (p0 / ppi) > 0.0 { 1 } else { -1 };
    Ok(InvariantResult { kind: InvariantKind::Pfaffian(s), gap_margin: gap, grid_size: size })
}

/// `−iK` as a real antisymmetric matrix, failing when `K` is not purely
/// imaginary Hermitian to `thresh`.
fn real_antisymmetric(k: &CMat, thresh: f64, name: &str) -> Result<Array2<f64>> {
    let a = k.mapv(|z| -I * z);
    let imag = a.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag > thresh {
        return Err(Error::Symmetry(format!("−i{name} is not real (imaginary part {imag:.3e})")));
    }
    let re = a.mapv(|z| z.re);
    let asym = (&re + &re.t()).iter().map(|x| x.abs()).fold(0.0, f64::max);
    if asym > thresh {
        return Err(Error::Symmetry(format!("−i{name} is not antisymmetric (residual {asym:.3e})")));
    }
    Ok(re)
}

/// The two extreme bands of a Hermitian symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    /// Highest band.
    Plus,
    /// Lowest band.
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerryResult {
    pub winding: i64,
    /// Value before rounding.
    pub raw: f64,
    /// `−(1/π)·arg Π⟨u_i|u_{i+1}⟩` with the principal branch; gauge invariant
    /// and equal to `raw` modulo 2.
    pub wilson_mod2: f64,
    pub grid_size: usize,
}

/// Berry winding of a band, `γ = −(1/π)·Σ_i arg⟨u(k_i)|u(k_{i+1})⟩`.
///
/// Before the links are multiplied, every eigenvector is put into the
/// periodic gauge in which its component on `gauge_orbital` is real and
/// positive. The phase is then accumulated link by link, which makes the
/// result an integer rather than an integer modulo 2, and it does not
/// depend on the phases the eigensolver happens to return. The grid is
/// doubled until the value is within `10⁻³` of an integer.
pub fn berry_winding_detailed(sym: &BlochSymbol, band: Band, grid: usize, gauge_orbital: usize) -> Result<BerryResult> {
    let n = sym.n_cell();
    if gauge_orbital >= n {
        return Err(Error::InvalidParameter(format!("gauge orbital {gauge_orbital} out of {n}")));
    }
    if grid < 8 {
        return Err(Error::InvalidParameter(format!("Berry grid {grid} too small")));
    }
    let mut size = grid;
    loop {
        let mut vectors = Vec::with_capacity(size);
        for k in uniform_k_grid(size) {
            let m = sym.k_at(k);
            let herm = max_abs(&(&m - &crate::linalg::dagger(&m)));
            if herm > 1e-12 * max_abs(&m).max(1.0) {
                return Err(Error::Symmetry(format!("K(k) is not Hermitian at k = {k:.4}")));
            }
            let (vals, vecs) = eigh(&m)?;
            let (j, other) = match band {
                Band::Plus => (n - 1, n.checked_sub(2)),
                Band::Minus => (0, (n > 1).then_some(1)),
            };
            if let Some(o) = other {
                let split = (vals[j] - vals[o]).abs();
                if split <= 1e-10 * vals.iter().map(|x| x.abs()).fold(1e-300, f64::max) {
                    return Err(Error::BandDegeneracy(format!("band touches its neighbour at k = {k:.4}")));
                }
            }
            vectors.push(vecs.column(j).to_owned());
        }
        let (raw, wilson) = wilson_loop(&vectors, gauge_orbital)?;
        if (raw - raw.round()).abs() <= 1e-3 {
            return Ok(BerryResult { winding: raw.round() as i64, raw, wilson_mod2: wilson, grid_size: size });
        }
        if size >= 1 << 16 {
            return Err(Error::Unresolvable(format!("Berry winding {raw:.6} is not near an integer")));
        }
        size *= 2;
    }
}

/// Convenience wrapper using the last orbital of the cell as gauge
/// reference.
pub fn berry_winding(sym: &BlochSymbol, band: Band, grid: usize) -> Result<i64> {
    Ok(berry_winding_detailed(sym, band, grid, sym.n_cell() - 1)?.winding)
}

/// Link-by-link Berry phase over a closed loop of eigenvectors (the last
/// link joins the final vector back to the first). Returns the gauge-fixed
/// accumulated value and the principal-branch Wilson loop value, both in
/// units of `π` with the overall `−` sign applied.
pub fn wilson_loop(vectors: &[CVec], gauge_orbital: usize) -> Result<(f64, f64)> {
    let fixed: Vec<CVec> = vectors
        .iter()
        .map(|u| {
            let z = u[gauge_orbital];
            if z.norm() < 1e-8 {
                return Err(Error::Unresolvable(format!(
                    "gauge orbital {gauge_orbital} has vanishing weight; choose another reference"
                )));
            }
            let phase = z.conj() / z.norm();
            Ok(u.mapv(|x| x * phase))
        })
        .collect::<Result<_>>()?;
    let m = fixed.len();
    let mut total = 0.0;
    let mut product = C64::new(1.0, 0.0);
    for i in 0..m {
        let link = crate::linalg::inner(&fixed[i], &fixed[(i + 1) % m]);
        total += link.arg();
        product *= link / link.norm();
    }
    Ok((-total / PI, -product.arg() / PI))
}
