use ndarray::{s, Array2};

use crate::error::{Error, Result};
use crate::linalg::max_abs_real;

/// Tolerance on `max|A + Aᵀ|` relative to `max(1, max|A|)`.
pub const ANTISYMMETRY_TOL: f64 = 1e-9;

/// Pfaffian of a real antisymmetric matrix of even order.
///
/// Orders up to 8 use cofactor expansion along the first row, which is
/// exact up to rounding of the individual products. Larger orders use the
/// Parlett–Reid reduction to tridiagonal form with partial pivoting, where
/// every row/column interchange flips the sign.
pub fn pfaffian(a: &Array2<f64>) -> Result<f64> {
    let (n, m) = a.dim();
    if n != m {
        return Err(Error::DimensionMismatch(format!("Pfaffian of a {n}×{m} matrix")));
    }
    if n % 2 == 1 {
        return Err(Error::InvalidParameter(format!("Pfaffian needs even order, got {n}")));
    }
    let asym = max_abs_real(&(a + &a.t()));
    if asym > ANTISYMMETRY_TOL * max_abs_real(a).max(1.0) {
        return Err(Error::Structure { property: "antisymmetric", residual: asym });
    }
    if n <= 8 {
        let idx: Vec<usize> = (0..n).collect();
        Ok(cofactor(a, &idx))
    } else {
        Ok(parlett_reid(a.clone()))
    }
}

fn cofactor(a: &Array2<f64>, idx: &[usize]) -> f64 {
    match idx.len() {
        0 => 1.0,
        2 => a[[idx[0], idx[1]]],
        _ => {
            let first = idx[0];
            let mut total = 0.0;
            for (pos, &j) in idx.iter().enumerate().skip(1) {
                let entry = a[[first, j]];
                if entry == 0.0 {
                    continue;
                }
                let rest: Vec<usize> = idx.iter().copied().filter(|&i| i != first && i != j).collect();
                let sign = if pos % 2 == 1 { 1.0 } else { -1.0 };
                total += sign * entry * cofactor(a, &rest);
            }
            total
        }
    }
}

fn parlett_reid(mut a: Array2<f64>) -> f64 {
    let n = a.nrows();
    let mut pf = 1.0;
    let mut k = 0;
    while k + 1 < n {
        let (mut kp, mut best) = (k + 1, a[[k + 1, k]].abs());
        for i in k + 2..n {
            if a[[i, k]].abs() > best {
                best = a[[i, k]].abs();
                kp = i;
            }
        }
        if kp != k + 1 {
            for col in 0..n {
                a.swap([k + 1, col], [kp, col]);
            }
            for row in 0..n {
                a.swap([row, k + 1], [row, kp]);
            }
            pf = -pf;
        }
        let pivot = a[[k, k + 1]];
        if pivot == 0.0 {
            return 0.0;
        }
        pf *= pivot;
        if k + 2 < n {
            let tau = a.slice(s![k, k + 2..]).mapv(|x| x / pivot);
            let col = a.slice(s![k + 2.., k + 1]).to_owned();
            let m = n - k - 2;
            let mut sub = a.slice_mut(s![k + 2.., k + 2..]);
            for i in 0..m {
                for j in 0..m {
                    sub[[i, j]] += tau[i] * col[j] - col[i] * tau[j];
                }
            }
        }
        k += 2;
    }
    pf
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn odd_order_is_rejected() {
        let a = Array2::<f64>::zeros((3, 3));
        assert!(pfaffian(&a).is_err());
    }

    #[test]
    fn symmetric_input_is_rejected() {
        let a = array![[0.0, 1.0], [1.0, 0.0]];
        assert!(matches!(pfaffian(&a), Err(Error::Structure { .. })));
    }

    #[test]
    fn both_algorithms_agree_on_a_block_diagonal_matrix() {
        let mut a = Array2::<f64>::zeros((10, 10));
        for b in 0..5 {
            let v = (b + 2) as f64;
            a[[2 * b, 2 * b + 1]] = v;
            a[[2 * b + 1, 2 * b]] = -v;
        }
        let expected = 2.0 * 3.0 * 4.0 * 5.0 * 6.0;
        assert!((pfaffian(&a).unwrap() - expected).abs() < 1e-9);
        let small = a.slice(s![..8, ..8]).to_owned();
        assert!((pfaffian(&small).unwrap() - 120.0).abs() < 1e-12);
    }
}
