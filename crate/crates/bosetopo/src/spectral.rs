//! Eigendecompositions, band structures, boundary zero modes and
//! finite-size scans.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{eig, eigh, inner, is_finite, max_abs, norm, qr, solve, sort_complex, CMat, CVec, C64};
use crate::models::{BlochSymbol, ModelSpec};
use crate::qbh::{DynamicalMatrix, Layout, QuadraticHamiltonian, DEFAULT_TOL};

/// Residual threshold, relative to the spectral radius, above which an
/// eigenpair is flagged as not converged.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Eigenvalues closer than this (relative to the spectral radius) form a
/// cluster.
pub const CLUSTER_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<C64>,
    /// Unit-norm right eigenvectors, one per column.
    pub right_eigenvectors: CMat,
    /// `‖Gv − λv‖` for each unit-norm pair.
    pub residuals: Vec<f64>,
    pub converged: Vec<bool>,
    /// Inverse participation ratio over per-mode weights (particle and hole
    /// components of a mode are summed).
    pub ipr: Vec<f64>,
    /// `v†τ₃v`; may vanish for zero modes, which is why vectors are
    /// normalized in the Euclidean norm instead.
    pub tau3_norms: Vec<f64>,
    pub spectral_radius: f64,
    pub warnings: Vec<String>,
}

impl SpectrumResult {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }

    pub fn is_defective(&self) -> bool {
        self.warnings.iter().any(|w| w.starts_with("defective"))
    }
}

/// Per-mode probability weights of a vector. For vectors of length `2N`
/// (particle and hole parts) the two components of each mode are summed.
fn mode_weights(v: &CVec, n_modes: usize) -> Vec<f64> {
    let total: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let total = if total > 0.0 { total } else { 1.0 };
    (0..n_modes)
        .map(|j| {
            let mut w = v[j].norm_sqr();
            if v.len() == 2 * n_modes {
                w += v[n_modes + j].norm_sqr();
            }
            w / total
        })
        .collect()
}

fn ipr_of(weights: &[f64]) -> f64 {
    weights.iter().map(|w| w * w).sum()
}

/// Full eigendecomposition of a dynamical matrix.
pub fn diagonalize(g: &DynamicalMatrix) -> Result<SpectrumResult> {
    diagonalize_matrix(g.matrix(), g.n_modes(), true)
}

/// Eigendecomposition of an arbitrary square matrix acting on `n_modes`
/// modes (`2N × 2N` with particle-hole structure when `bosonic`, `N × N`
/// otherwise).
pub fn diagonalize_matrix(m: &CMat, n_modes: usize, bosonic: bool) -> Result<SpectrumResult> {
    if !is_finite(m) {
        return Err(Error::NonFinite);
    }
    let dim = m.nrows();
    let (vals, mut vecs) = eig(m)?;
    let radius = vals.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let scale = radius.max(max_abs(m)).max(f64::MIN_POSITIVE);
    let mut residuals = Vec::with_capacity(dim);
    let mut converged = Vec::with_capacity(dim);
    let mut ipr = Vec::with_capacity(dim);
    let mut tau3 = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut col = vecs.column(j).to_owned();
        let nv = norm(&col);
        if nv > 0.0 {
            col.mapv_inplace(|z| z / nv);
        }
        vecs.column_mut(j).assign(&col);
        let r = norm(&(m.dot(&col) - &col * vals[j]));
        residuals.push(r);
        converged.push(r <= RESIDUAL_TOL * scale);
        ipr.push(ipr_of(&mode_weights(&col, n_modes)));
        tau3.push(if bosonic {
            (0..dim).map(|i| if i < n_modes { col[i].norm_sqr() } else { -col[i].norm_sqr() }).sum()
        } else {
            1.0
        });
    }
    let mut warnings = Vec::new();
    if converged.iter().any(|c| !c) {
        warnings.push(format!("{} eigenpairs exceed the residual bound", converged.iter().filter(|c| !**c).count()));
    }
    for cluster in clusters(vals.as_slice().unwrap(), CLUSTER_TOL * scale) {
        if cluster.len() < 2 {
            continue;
        }
        let sub =
            ndarray::stack(ndarray::Axis(1), &cluster.iter().map(|&j| vecs.column(j)).collect::<Vec<_>>()).unwrap();
        let (_, r) = qr(&sub)?;
        let min_diag = (0..cluster.len()).map(|i| r[[i, i]].norm()).fold(f64::INFINITY, f64::min);
        if min_diag < 1e-6 {
            warnings.push(format!(
                "defective cluster of {} eigenvalues near {:.6e} (eigenvector independence {:.2e})",
                cluster.len(),
                vals[cluster[0]],
                min_diag
            ));
        }
    }
    Ok(SpectrumResult {
        eigenvalues: vals.to_vec(),
        right_eigenvectors: vecs,
        residuals,
        converged,
        ipr,
        tau3_norms: tau3,
        spectral_radius: radius,
        warnings,
    })
}

/// Groups indices whose values are chained within `tol` of each other.
pub(crate) fn clusters(vals: &[C64], tol: f64) -> Vec<Vec<usize>> {
    let n = vals.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut j = i;
        while p[j] != r {
            let next = p[j];
            p[j] = r;
            j = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (vals[i] - vals[j]).norm() < tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Eigenvalues of `K(k)` (number-conserving symbols) or `G(k)` at every `k`,
/// each list sorted by real then imaginary part.
pub fn band_structure(sym: &BlochSymbol, k_grid: &[f64]) -> Result<Vec<Vec<C64>>> {
    if k_grid.is_empty() {
        return Err(Error::InvalidParameter("empty k grid".into()));
    }
    let number = sym.conserves_number();
    k_grid
        .par_iter()
        .map(|&k| {
            let m = if number { sym.k_at(k) } else { sym.dynamical_at(k) };
            let mut vals: Vec<C64> = if number {
                eigh(&m)?.0.iter().map(|&x| C64::new(x, 0.0)).collect()
            } else {
                crate::linalg::eigvals(&m)?.to_vec()
            };
            sort_complex(&mut vals);
            Ok(vals)
        })
        .collect()
}

/// `n` equally spaced momenta covering `[−π, π)`.
pub fn uniform_k_grid(n: usize) -> Vec<f64> {
    let pi = std::f64::consts::PI;
    (0..n).map(|i| -pi + 2.0 * pi * i as f64 / n as f64).collect()
}

/// How a zero mode's weight falls off along the chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Localization {
    /// `|ψ|` decays as `e^{−x/length}` (fit excludes the outermost cells).
    Exponential { length: f64, slope: f64 },
    /// Too few interior cells carry weight for a fit: the mode sits on one
    /// or two cells.
    Compact,
    /// The fitted slope is below `1/N_cells`.
    Delocalized,
}

#[derive(Debug, Clone)]
pub struct ZeroMode {
    pub eigenvalue: C64,
    pub vector: CVec,
    /// Weight on the first unit cell.
    pub edge_weight_left: f64,
    /// Weight on the last unit cell.
    pub edge_weight_right: f64,
    /// Weight on the left half of the chain (the middle cell of an odd chain
    /// counts half).
    pub left_half_weight: f64,
    pub cell_weights: Vec<f64>,
    pub localization: Localization,
    pub ipr: f64,
    /// The mode sits on a single mode with no couplings at all.
    pub disconnected: bool,
}

impl ZeroMode {
    pub fn is_left(&self) -> bool {
        self.left_half_weight > 0.5
    }
}

/// Which matrix the zero modes were taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// `K` alone (the pairing matrix vanishes, so `G = K ⊕ −K*`).
    Particle,
    /// The full dynamical matrix.
    Full,
    /// Singular vectors of the auxiliary matrix `B` of a squeezing class:
    /// near-kernel vectors of `B` and of `B†`, each counted once.
    Auxiliary,
}

#[derive(Debug, Clone)]
pub struct ZeroModeReport {
    pub count: usize,
    pub modes: Vec<ZeroMode>,
    pub tolerance_used: f64,
    pub sector: Sector,
    pub spectral_radius: f64,
    /// Smallest `|λ|` outside the zero-mode set.
    pub gap: f64,
}

impl ZeroModeReport {
    pub fn left_count(&self) -> usize {
        self.modes.iter().filter(|m| m.is_left()).count()
    }

    pub fn right_count(&self) -> usize {
        self.count - self.left_count()
    }
}

/// Zero modes of a dynamical matrix, treating every mode as its own cell.
/// `tol` defaults to `10⁻⁸ × spectral radius`.
pub fn zero_modes(g: &DynamicalMatrix, tol: Option<f64>) -> Result<ZeroModeReport> {
    let n = g.n_modes();
    let layout = Layout::trivial(n);
    let (k, d) = g.blocks();
    zero_modes_impl(g.matrix(), &k, &d, &layout, tol, Sector::Full)
}

/// Zero modes of a Hamiltonian using its unit-cell layout. Number-conserving
/// Hamiltonians are analysed through `K`, so each mode is counted once.
pub fn zero_modes_of(h: &QuadraticHamiltonian, tol: Option<f64>) -> Result<ZeroModeReport> {
    if h.conserves_number() {
        zero_modes_impl(h.k(), h.k(), h.delta(), h.layout(), tol, Sector::Particle)
    } else {
        let g = h.dynamical_matrix();
        zero_modes_impl(g.matrix(), h.k(), h.delta(), h.layout(), tol, Sector::Full)
    }
}

/// Boundary zero modes of a squeezing-class chain from its auxiliary
/// matrix `b` (acting on the modes of `h`).
///
/// The kernel of the dynamical matrix is spanned by the kernels of `B` and
/// `B†`. On an open chain these show up as singular values below `tol`: the
/// right singular vectors stand for kernel vectors of `B`, the left ones for
/// kernel vectors of `B†`. Both sets are reported, each localized on the
/// chain as far as its subspace allows; `eigenvalue` holds the singular
/// value.
pub fn kernel_modes(b: &CMat, h: &QuadraticHamiltonian, tol: f64) -> Result<ZeroModeReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("zero-mode tolerance {tol} must be positive")));
    }
    let n = h.n_modes();
    if b.dim() != (n, n) {
        return Err(Error::DimensionMismatch(format!("auxiliary matrix is {:?} for {n} modes", b.dim())));
    }
    let (u, sigma, v) = crate::linalg::svd(b)?;
    let idx: Vec<usize> = (0..n).filter(|&j| sigma[j] < tol).collect();
    let gap = (0..n).filter(|j| !idx.contains(j)).map(|j| sigma[j]).fold(f64::INFINITY, f64::min);
    let vals: Vec<C64> = idx.iter().map(|&j| C64::new(sigma[j], 0.0)).collect();
    let mut modes = Vec::new();
    if !idx.is_empty() {
        for basis in [&v, &u] {
            let sub =
                ndarray::stack(ndarray::Axis(1), &idx.iter().map(|&j| basis.column(j)).collect::<Vec<_>>()).unwrap();
            for (vec, lambda) in localize(&sub, &vals, h.layout())? {
                modes.push(describe_mode(vec, lambda, h.k(), h.delta(), h.layout()));
            }
        }
    }
    modes.sort_by(|a, b| b.left_half_weight.total_cmp(&a.left_half_weight));
    let radius = sigma.first().copied().unwrap_or(0.0);
    Ok(ZeroModeReport {
        count: modes.len(),
        modes,
        tolerance_used: tol,
        sector: Sector::Auxiliary,
        spectral_radius: radius,
        gap,
    })
}

fn zero_modes_impl(
    m: &CMat,
    k: &CMat,
    d: &CMat,
    layout: &Layout,
    tol: Option<f64>,
    sector: Sector,
) -> Result<ZeroModeReport> {
    let n_modes = k.nrows();
    let (radius, vals, vecs) = if sector == Sector::Particle {
        let (vals, vecs) = eigh(m)?;
        let vals: Vec<C64> = vals.iter().map(|&x| C64::new(x, 0.0)).collect();
        let radius = vals.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        (radius, vals, vecs)
    } else {
        let s = diagonalize_matrix(m, n_modes, true)?;
        (s.spectral_radius, s.eigenvalues, s.right_eigenvectors)
    };
    let tol = match tol {
        Some(t) if !(t > 0.0) => {
            return Err(Error::InvalidParameter(format!("zero-mode tolerance {t} must be positive")))
        }
        Some(t) => t,
        None => DEFAULT_TOL * radius.max(f64::MIN_POSITIVE),
    };
    let idx: Vec<usize> = (0..vals.len()).filter(|&j| vals[j].norm() < tol).collect();
    let gap = (0..vals.len()).filter(|j| !idx.contains(j)).map(|j| vals[j].norm()).fold(f64::INFINITY, f64::min);
    let mut modes = Vec::new();
    if !idx.is_empty() {
        let sub = ndarray::stack(ndarray::Axis(1), &idx.iter().map(|&j| vecs.column(j)).collect::<Vec<_>>()).unwrap();
        let sub_vals: Vec<C64> = idx.iter().map(|&j| vals[j]).collect();
        for (vec, lambda) in localize(&sub, &sub_vals, layout)? {
            modes.push(describe_mode(vec, lambda, k, d, layout));
        }
    }
    modes.sort_by(|a, b| b.left_half_weight.total_cmp(&a.left_half_weight));
    Ok(ZeroModeReport { count: modes.len(), modes, tolerance_used: tol, sector, spectral_radius: radius, gap })
}

/// Rotates a set of (near-)degenerate eigenvectors into the basis that
/// diagonalizes the cell-position operator, so each output vector is as
/// localized as the subspace allows. The reported eigenvalue of each output
/// is the weighted mean of the input eigenvalues it mixes.
fn localize(sub: &CMat, vals: &[C64], layout: &Layout) -> Result<Vec<(CVec, C64)>> {
    let m = sub.ncols();
    if m == 1 {
        return Ok(vec![(sub.column(0).to_owned(), vals[0])]);
    }
    let (q, r) = qr(sub)?;
    let n_modes = layout.cells.len();
    let dim = sub.nrows();
    let pos: Vec<f64> = (0..dim).map(|i| layout.cells[i % n_modes] as f64).collect();
    let mut x = CMat::zeros((m, m));
    for a in 0..m {
        for b in 0..m {
            x[[a, b]] = (0..dim).map(|i| q[[i, a]].conj() * pos[i] * q[[i, b]]).sum();
        }
    }
    let (_, y) = eigh(&x)?;
    let u = q.dot(&y);
    let mut out = Vec::with_capacity(m);
    for j in 0..m {
        let yj = y.column(j).to_owned();
        let lambda = match solve(&r, &yj) {
            Ok(coef) => {
                let w: f64 = coef.iter().map(|c| c.norm_sqr()).sum();
                if w > 0.0 && w.is_finite() {
                    coef.iter().zip(vals).map(|(c, l)| l * c.norm_sqr()).sum::<C64>() / w
                } else {
                    vals[j]
                }
            }
            Err(_) => vals[j],
        };
        out.push((u.column(j).to_owned(), lambda));
    }
    Ok(out)
}

fn describe_mode(v: CVec, lambda: C64, k: &CMat, d: &CMat, layout: &Layout) -> ZeroMode {
    let n_modes = k.nrows();
    let weights = mode_weights(&v, n_modes);
    let nc = layout.n_cells();
    let mut cell_weights = vec![0.0; nc];
    for (j, w) in weights.iter().enumerate() {
        cell_weights[layout.cells[j]] += w;
    }
    let half = nc / 2;
    let mut left: f64 = cell_weights[..half].iter().sum();
    if nc % 2 == 1 {
        left += cell_weights[half] / 2.0;
    }
    let disconnected = weights
        .iter()
        .enumerate()
        .find(|(_, w)| **w > 1.0 - 1e-12)
        .map(|(j, _)| (0..n_modes).all(|i| (i == j || k[[i, j]].norm() == 0.0) && d[[i, j]].norm() == 0.0))
        .unwrap_or(false);
    ZeroMode {
        eigenvalue: lambda,
        edge_weight_left: cell_weights.first().copied().unwrap_or(0.0),
        edge_weight_right: cell_weights.last().copied().unwrap_or(0.0),
        left_half_weight: left,
        localization: fit_localization(&cell_weights),
        ipr: ipr_of(&weights),
        cell_weights,
        vector: v,
        disconnected,
    }
}

/// Least-squares fit of `ln(cell weight)` against cell index, outermost cells
/// excluded. Weights below `10⁻²⁴` of the largest are treated as numerical
/// zeros and skipped.
pub fn fit_localization(cell_weights: &[f64]) -> Localization {
    let nc = cell_weights.len();
    if nc < 3 {
        return Localization::Compact;
    }
    let peak = cell_weights.iter().cloned().fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> =
        (1..nc - 1).filter(|&c| cell_weights[c] > 1e-24 * peak).map(|c| (c as f64, cell_weights[c].ln())).collect();
    if pts.len() < 2 {
        return Localization::Compact;
    }
    let (slope, _, _) = linear_fit(&pts);
    if slope.abs() < 1.0 / nc as f64 {
        Localization::Delocalized
    } else {
        // Weight is |ψ|², so the amplitude length is twice the weight length.
        Localization::Exponential { length: 2.0 / slope.abs(), slope }
    }
}

/// Ordinary least squares `y = a·x + b`; returns `(a, b, r²)`.
pub fn linear_fit(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let a = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let b = my - a * mx;
    let r2 = if syy > 0.0 && sxx > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (a, b, r2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    MinAbsEigenvalue,
    Gap,
    ZeroModeCount,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFit {
    /// Decay rate per cell: `value ∝ e^{−rate·N}`.
    pub rate: f64,
    pub r2: f64,
}

#[derive(Debug, Clone)]
pub struct ScanTable {
    pub observable: Observable,
    pub rows: Vec<(usize, f64)>,
    pub fit: Option<ExpFit>,
}

/// Evaluates `observable` on the open chain at every size. An exponential
/// fit is attached for `MinAbsEigenvalue`.
pub fn finite_size_scan(spec: &ModelSpec, sizes: &[usize], observable: Observable) -> Result<ScanTable> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("finite-size scan needs at least one size".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("sizes must be strictly ascending".into()));
    }
    let rows: Vec<(usize, f64)> = sizes
        .par_iter()
        .map(|&n| {
            let mut s = spec.clone();
            s.n_cells = n;
            let h = s.build()?;
            let value = match observable {
                Observable::MinAbsEigenvalue => min_abs_eigenvalue(&h)?,
                Observable::Gap => zero_modes_of(&h, None)?.gap,
                Observable::ZeroModeCount => zero_modes_of(&h, None)?.count as f64,
            };
            Ok((n, value))
        })
        .collect::<Result<_>>()?;
    let fit = (observable == Observable::MinAbsEigenvalue && rows.len() >= 2).then(|| {
        let pts: Vec<(f64, f64)> = rows.iter().map(|&(n, v)| (n as f64, v.max(f64::MIN_POSITIVE).ln())).collect();
        let (a, _, r2) = linear_fit(&pts);
        ExpFit { rate: -a, r2 }
    });
    Ok(ScanTable { observable, rows, fit })
}

/// Smallest `|λ|` of the Hamiltonian's spectrum (of `K` when number is
/// conserved, else of `G`).
pub fn min_abs_eigenvalue(h: &QuadraticHamiltonian) -> Result<f64> {
    let vals: Vec<f64> = if h.conserves_number() {
        eigh(h.k())?.0.iter().map(|x| x.abs()).collect()
    } else {
        crate::linalg::eigvals(h.dynamical_matrix().matrix())?.iter().map(|z| z.norm()).collect()
    };
    Ok(vals.into_iter().fold(f64::INFINITY, f64::min))
}

/// Probability that a normalized vector sits on the given modes.
pub fn support_on(v: &CVec, modes: &[usize], n_modes: usize) -> f64 {
    let w = mode_weights(v, n_modes);
    modes.iter().map(|&j| w[j]).sum()
}

/// `|⟨u, v⟩|` for unit vectors; handy for comparing eigenvectors up to phase.
pub fn overlap(u: &CVec, v: &CVec) -> f64 {
    inner(u, v).norm() / (norm(u) * norm(v))
}
