//! Thin helpers over `ndarray` / `ndarray-linalg` shared by every module.

use ndarray::{s, Array1, Array2, ShapeBuilder};
use ndarray_linalg::{Determinant, Eig, Eigh, FactorizeInto, ReciprocalConditionNum, Solve, QR, SVD, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = Array2<C64>;
pub type CVec = Array1<C64>;

pub const I: C64 = C64::new(0.0, 1.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_real(m: &Array2<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn dagger(m: &CMat) -> CMat {
    m.t().mapv(|z| z.conj())
}

pub fn conj(m: &CMat) -> CMat {
    m.mapv(|z| z.conj())
}

pub fn to_complex(m: &Array2<f64>) -> CMat {
    m.mapv(|x| C64::new(x, 0.0))
}

pub fn identity(n: usize) -> CMat {
    Array2::eye(n)
}

pub fn zeros(n: usize, m: usize) -> CMat {
    Array2::zeros((n, m))
}

pub fn is_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Assembles `[[a, b], [c, d]]` from four equally shaped square blocks.
pub fn block2(a: &CMat, b: &CMat, c: &CMat, d: &CMat) -> CMat {
    let n = a.nrows();
    let mut out = zeros(2 * n, 2 * n);
    out.slice_mut(s![..n, ..n]).assign(a);
    out.slice_mut(s![..n, n..]).assign(b);
    out.slice_mut(s![n.., ..n]).assign(c);
    out.slice_mut(s![n.., n..]).assign(d);
    out
}

pub fn norm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `u† v`
pub fn inner(u: &CVec, v: &CVec) -> C64 {
    u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// General complex eigendecomposition; column `j` of the returned matrix is
/// the right eigenvector of eigenvalue `j`.
pub fn eig(m: &CMat) -> Result<(CVec, CMat)> {
    if !is_finite(m) {
        return Err(Error::NonFinite);
    }
    let (vals, vecs) = fortran(m).eig()?;
    Ok((vals, vecs))
}

pub fn eigvals(m: &CMat) -> Result<CVec> {
    Ok(eig(m)?.0)
}

/// Hermitian eigendecomposition with ascending eigenvalues.
pub fn eigh(m: &CMat) -> Result<(Array1<f64>, CMat)> {
    if !is_finite(m) {
        return Err(Error::NonFinite);
    }
    let (vals, vecs) = fortran(m).eigh(UPLO::Upper)?;
    Ok((vals, vecs))
}

/// Column-major copy. The LAPACK wrappers return conjugated eigenvectors for
/// row-major complex input, so every decomposition goes through this.
fn fortran(m: &CMat) -> CMat {
    let mut f = CMat::zeros(m.dim().f());
    f.assign(m);
    f
}

pub fn solve(m: &CMat, rhs: &CVec) -> Result<CVec> {
    Ok(m.solve(rhs)?)
}

/// Solves `m x = rhs` and returns the reciprocal condition number (1-norm)
/// of `m` alongside. An exactly singular `m` is an error.
pub fn solve_with_rcond(m: &CMat, rhs: &CVec) -> Result<(CVec, f64)> {
    if !is_finite(m) {
        return Err(Error::NonFinite);
    }
    let lu = fortran(m).factorize_into()?;
    let rcond = lu.rcond()?;
    Ok((lu.solve(rhs)?, rcond))
}

pub fn det(m: &CMat) -> Result<C64> {
    if m.nrows() == 0 {
        return Ok(ONE);
    }
    Ok(m.det()?)
}

pub fn det_real(m: &Array2<f64>) -> Result<f64> {
    if m.nrows() == 0 {
        return Ok(1.0);
    }
    Ok(m.det()?)
}

/// Orthonormal basis (columns) for the span of the columns of `m`, plus the
/// triangular factor.
pub fn qr(m: &CMat) -> Result<(CMat, CMat)> {
    let (q, r) = fortran(m).qr()?;
    Ok((q, r))
}

/// Full singular value decomposition `m = U·diag(σ)·V†` with `σ`
/// descending. Returns `(U, σ, V)`; the columns of `V` are the right
/// singular vectors.
pub fn svd(m: &CMat) -> Result<(CMat, Array1<f64>, CMat)> {
    if !is_finite(m) {
        return Err(Error::NonFinite);
    }
    let (u, sigma, vt) = fortran(m).svd(true, true)?;
    let u = u.ok_or_else(|| Error::LinearAlgebra("SVD returned no left vectors".into()))?;
    let vt = vt.ok_or_else(|| Error::LinearAlgebra("SVD returned no right vectors".into()))?;
    Ok((u, sigma, dagger(&vt)))
}

/// Sorts complex numbers by real part, then imaginary part.
pub fn sort_complex(v: &mut [C64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Greedy multiset matching: the largest distance between an element of `a`
/// and its partner in `b`, each element of `b` used once.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let mut best = f64::INFINITY;
        let mut best_j = usize::MAX;
        for (j, y) in b.iter().enumerate() {
            if !used[j] {
                let d = (x - y).norm();
                if d < best {
                    best = d;
                    best_j = j;
                }
            }
        }
        used[best_j] = true;
        worst = worst.max(best);
    }
    worst
}
