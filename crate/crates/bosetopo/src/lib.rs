//! Quadratic bosonic Hamiltonians on one-dimensional lattices.
//!
//! The crate builds hopping/pairing pairs `(K, Δ)` for photon-magnon chains,
//! the bosonic Kitaev chain and the bosonic SSH chain, classifies them by
//! their many-body symmetries, computes winding, Pfaffian and Berry
//! invariants, finds boundary zero modes and simulates microwave
//! S-parameters with input-output theory.
//!
//! The runnable programs in `examples/` are the best entry point; each one
//! exercises a single capability end to end.

// Checks such as `!(x > 0.0)` are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod linalg;
pub mod models;
pub mod qbh;
pub mod scattering;
pub mod spectral;
pub mod topology;

pub use error::{Error, Result};
pub use linalg::{CMat, CVec, C64};
