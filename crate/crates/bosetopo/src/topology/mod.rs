//! Symmetry classes and topological invariants.
//!
//! The squeezing classes carry the invariants: `{S}` has an integer
//! winding number of `det B(k)`, `{N,S}` a sign built from Pfaffians of
//! `−iK` at `k = 0` and `k = −π`. Classes containing time reversal are
//! reported as trivial.

mod bulk_boundary;
mod invariants;
mod pfaffian;
mod symmetry;

pub use bulk_boundary::{
    boundary_zero_modes, bulk_boundary_check, bulk_boundary_check_with, symbol_invariant, BulkBoundaryOptions,
    BulkBoundaryReport, SymbolInvariant, CROSS_EDGE_LIMIT, ZERO_MODE_GAP_FRACTION,
};
pub use invariants::{
    auxiliary_b, auxiliary_b_symbol, berry_winding, berry_winding_detailed, pfaffian_invariant, wilson_loop,
    winding_number, winding_of_symbol, AuxiliarySymbol, Band, BerryResult, InvariantKind, InvariantResult,
    GAP_CLOSED_REL, MAX_WINDING_POINTS, PFAFFIAN_GAP_GRID,
};
pub use pfaffian::{pfaffian, ANTISYMMETRY_TOL};
pub use symmetry::{
    classify_symbol, detect_symmetry_class, find_symbol_dressing, ClassLabel, ClassResiduals, Dressing, SymbolDressing,
    SymmetryClassReport,
};
