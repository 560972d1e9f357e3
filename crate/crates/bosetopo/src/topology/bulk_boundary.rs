use super::invariants::{
    auxiliary_b, auxiliary_b_symbol, pfaffian_invariant, winding_number, InvariantKind, InvariantResult,
};
use super::symmetry::{
    classify_symbol, detect_symmetry_class, find_symbol_dressing, ClassLabel, Dressing, SymbolDressing,
};
use crate::error::{Error, Result};
use crate::linalg::eigh;
use crate::models::{BlochSymbol, ModelSpec};
use crate::qbh::QuadraticHamiltonian;
use crate::qbh::DEFAULT_TOL;
use crate::spectral::{kernel_modes, uniform_k_grid, zero_modes_of, ZeroModeReport};

/// Zero-mode threshold as a fraction of the bulk gap.
///
/// Edge modes of an open chain are split by an amount that shrinks
/// exponentially with its length, while the remaining levels stay at a
/// sizeable fraction of the bulk gap (above a tenth of it for every model
/// in the library). A hundredth separates the two groups from `N = 16` on.
pub const ZERO_MODE_GAP_FRACTION: f64 = 1e-2;

/// Largest leakage of a counted edge mode into the other half of the chain
/// for which the two terminations count as decoupled.
pub const CROSS_EDGE_LIMIT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BulkBoundaryOptions {
    /// Relative tolerance for the symmetry classification.
    pub tol: f64,
    /// k-grid for the winding number and the bulk gap.
    pub grid: usize,
}

impl Default for BulkBoundaryOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, grid: 1024 }
    }
}

#[derive(Debug, Clone)]
pub struct BulkBoundaryReport {
    pub class_label: ClassLabel,
    /// Dressing applied to the symbol before the invariant was evaluated.
    pub dressing: Option<SymbolDressing>,
    pub invariant: InvariantResult,
    /// Smallest singular value of `B(k)` (winding classes) or smallest
    /// `|eigenvalue|` of `K(k)` (Pfaffian classes) over the grid.
    pub bulk_gap: f64,
    pub zero_modes: ZeroModeReport,
    pub left_count: usize,
    pub right_count: usize,
    /// Largest weight any zero mode keeps on the half of the chain it is
    /// not assigned to.
    pub cross_edge_weight: f64,
    pub edges_decoupled: bool,
    /// `left_count ≥ |𝔫|` for the winding, `(−1)^left_count = 𝔰` for the
    /// Pfaffian; vacuous for trivial classes; `false` when the gap closed.
    pub holds: bool,
}

/// Invariant of a symbol together with the class it was computed in.
#[derive(Debug, Clone)]
pub struct SymbolInvariant {
    pub class_label: ClassLabel,
    /// Dressing applied to the symbol before the invariant was evaluated.
    pub dressing: Option<SymbolDressing>,
    pub invariant: InvariantResult,
    /// Smallest singular value of `B(k)` (winding classes) or smallest
    /// `|eigenvalue|` of `K(k)` (Pfaffian classes); NaN for trivial classes.
    pub bulk_gap: f64,
}

/// Classifies `sym`, dressing it into a squeezing class when the bare class
/// carries no invariant, and evaluates the invariant of that class.
pub fn symbol_invariant(sym: &BlochSymbol, tol: f64, grid: usize) -> Result<SymbolInvariant> {
    let (bare_label, _) = classify_symbol(sym, tol);
    let (sym, dressing) = if bare_label.is_winding_class() || bare_label.is_pfaffian_class() {
        (sym.clone(), None)
    } else {
        match find_symbol_dressing(sym, tol) {
            Some(d) => (d.apply(sym)?, Some(d)),
            None => (sym.clone(), None),
        }
    };
    let (class_label, axis) = classify_symbol(&sym, tol);

    let (invariant, bulk_gap) = if class_label.is_pfaffian_class() && sym.n_cell() % 2 == 1 {
        // −iK(0) is real antisymmetric of odd order, hence singular: the gap
        // is closed at k = 0 whatever the parameters.
        let (vals, _) = eigh(&sym.k_at(0.0))?;
        let margin = vals.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
        (InvariantResult { kind: InvariantKind::GapClosed, gap_margin: margin, grid_size: 1 }, margin)
    } else if class_label.is_pfaffian_class() {
        let inv = pfaffian_invariant(&sym, tol)?;
        (inv, inv.gap_margin)
    } else if class_label.is_winding_class() {
        let axis = axis.ok_or_else(|| Error::Unresolvable("squeezing axis missing".into()))?;
        let b = auxiliary_b_symbol(&sym, axis, tol)?;
        let inv = winding_number(|k| b.det_at(k), grid)?;
        let mut gap = f64::INFINITY;
        for k in uniform_k_grid(grid) {
            let m = b.at(k);
            let bb = m.t().mapv(|z| z.conj()).dot(&m);
            let (vals, _) = eigh(&bb)?;
            gap = gap.min(vals[0].max(0.0).sqrt());
        }
        (inv, gap)
    } else {
        (InvariantResult { kind: InvariantKind::Trivial, gap_margin: f64::NAN, grid_size: 0 }, f64::NAN)
    };
    Ok(SymbolInvariant { class_label, dressing, invariant, bulk_gap })
}

/// Applies the orbital phases of a symbol dressing to every cell of an open
/// chain. Twists only occur for number-conserving symbols, which never
/// reach the winding branch, so they are not needed here.
fn dress_chain(h: &QuadraticHamiltonian, dressing: Option<&SymbolDressing>) -> Result<QuadraticHamiltonian> {
    let Some(d) = dressing else { return Ok(h.clone()) };
    let mut quarter_turns = vec![0u8; h.n_modes()];
    for cell in h.layout().cell_modes() {
        for (orbital, &mode) in cell.iter().enumerate() {
            quarter_turns[mode] = d.orbital_quarter_turns[orbital];
        }
    }
    Dressing { quarter_turns, class_label: d.class_label, squeezing: None }.apply(h)
}

/// Zero modes of the finite chain `h` as seen by the class of `si`.
///
/// `tol` defaults to [`ZERO_MODE_GAP_FRACTION`] times the bulk gap of the
/// symbol, or to the spectral default when the gap is unknown. Squeezing
/// (winding) classes are analysed through the singular values of their
/// auxiliary matrix: the dynamical matrix is not normal there, so its
/// eigenvalues say little about the kernel. Every other class uses the
/// eigenvalues of `K` or `G`. `class_tol` is the relative tolerance used
/// to locate the squeezing axis.
pub fn boundary_zero_modes(
    h: &QuadraticHamiltonian,
    si: &SymbolInvariant,
    tol: Option<f64>,
    class_tol: f64,
) -> Result<ZeroModeReport> {
    let gap_tol = (si.bulk_gap.is_finite() && si.bulk_gap > 0.0).then_some(ZERO_MODE_GAP_FRACTION * si.bulk_gap);
    let tol = tol.or(gap_tol);
    match (si.class_label.is_winding_class(), tol) {
        (true, Some(tol)) => {
            let h = dress_chain(h, si.dressing.as_ref())?;
            let axis = detect_symmetry_class(&h, class_tol, false).squeezing;
            let axis = axis.ok_or_else(|| Error::Unresolvable("squeezing axis missing".into()))?;
            kernel_modes(&auxiliary_b(&h, axis, class_tol)?, &h, tol)
        }
        _ => zero_modes_of(h, tol),
    }
}

pub fn bulk_boundary_check(spec: &ModelSpec, n_cells: usize) -> Result<BulkBoundaryReport> {
    bulk_boundary_check_with(spec, n_cells, &BulkBoundaryOptions::default())
}

/// Compares the bulk invariant of `spec` with the zero modes on the left
/// end of an open chain of `n_cells` cells.
///
/// A single open chain has two ends. Only modes whose weight sits mostly in
/// the left half are counted, which stands in for a half-infinite chain as
/// long as the ends are decoupled (see `cross_edge_weight`).
pub fn bulk_boundary_check_with(
    spec: &ModelSpec,
    n_cells: usize,
    opts: &BulkBoundaryOptions,
) -> Result<BulkBoundaryReport> {
    if n_cells < 8 {
        return Err(Error::InvalidParameter(format!("bulk-boundary check needs N ≥ 8, got {n_cells}")));
    }
    let SymbolInvariant { class_label, dressing, invariant, bulk_gap } =
        symbol_invariant(&spec.bloch_symbol()?, opts.tol, opts.grid)?;

    let h = spec.build_with_cells(n_cells, false)?;
    let si = SymbolInvariant { class_label, dressing, invariant, bulk_gap };
    let zero_modes = boundary_zero_modes(&h, &si, None, opts.tol)?;
    let SymbolInvariant { class_label, dressing, invariant, bulk_gap } = si;
    let left_count = zero_modes.left_count();
    let right_count = zero_modes.right_count();
    let cross_edge_weight =
        zero_modes.modes.iter().map(|m| m.left_half_weight.min(1.0 - m.left_half_weight)).fold(0.0, f64::max);

    let holds = match invariant.kind {
        InvariantKind::Winding(n) => left_count as i64 >= n.abs(),
        InvariantKind::Pfaffian(s) => (if left_count % 2 == 0 { 1 } else { -1 }) == s,
        InvariantKind::Trivial => true,
        InvariantKind::GapClosed => false,
    };
    Ok(BulkBoundaryReport {
        class_label,
        dressing,
        invariant,
        bulk_gap,
        zero_modes,
        left_count,
        right_count,
        cross_edge_weight,
        edges_decoupled: cross_edge_weight < CROSS_EDGE_LIMIT,
        holds,
    })
}
