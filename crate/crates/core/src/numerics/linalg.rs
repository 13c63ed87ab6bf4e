//! Small dense solvers used by the optimization kernels.

use super::cmatrix::{CMatrix, C64};
use crate::error::{Error, Result};

/// Solves A·x = b for a row-major n×n real matrix by LU with partial pivoting.
pub fn solve_real(a: &[f64], n: usize, b: &[f64]) -> Result<Vec<f64>> {
    if a.len() != n * n || b.len() != n {
        return Err(Error::Dimension(format!("solve_real expects {n}x{n} system")));
    }
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    let scale = m.iter().fold(0.0_f64, |s, v| s.max(v.abs())).max(f64::MIN_POSITIVE);
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| m[i * n + k].abs().total_cmp(&m[j * n + k].abs()))
            .unwrap_or(k);
        if m[piv * n + k].abs() <= 1e-14 * scale {
            return Err(Error::Solver("singular linear system".into()));
        }
        if piv != k {
            for j in 0..n {
                m.swap(k * n + j, piv * n + j);
            }
            x.swap(k, piv);
        }
        let d = m[k * n + k];
        for i in k + 1..n {
            let f = m[i * n + k] / d;
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                m[i * n + j] -= f * m[k * n + j];
            }
            x[i] -= f * x[k];
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| m[k * n + j] * x[j]).sum();
        x[k] = (x[k] - s) / m[k * n + k];
    }
    Ok(x)
}

/// Solves A·x = b for symmetric positive definite A by Cholesky.
///
/// Adds a diagonal shift up to 1e-10·max|A_ii| when the factorization breaks down.
pub fn solve_real_spd(a: &[f64], n: usize, b: &[f64]) -> Result<Vec<f64>> {
    if a.len() != n * n || b.len() != n {
        return Err(Error::Dimension(format!("solve_real_spd expects {n}x{n} system")));
    }
    let dmax = (0..n).map(|i| a[i * n + i].abs()).fold(0.0_f64, f64::max).max(1e-300);
    let mut shift = 0.0;
    for _ in 0..8 {
        if let Some(l) = cholesky(a, n, shift) {
            let mut y = b.to_vec();
            for i in 0..n {
                let s: f64 = (0..i).map(|j| l[i * n + j] * y[j]).sum();
                y[i] = (y[i] - s) / l[i * n + i];
            }
            for i in (0..n).rev() {
                let s: f64 = (i + 1..n).map(|j| l[j * n + i] * y[j]).sum();
                y[i] = (y[i] - s) / l[i * n + i];
            }
            return Ok(y);
        }
        shift = if shift == 0.0 { 1e-16 * dmax } else { shift * 10.0 };
        if shift > 1e-10 * dmax {
            break;
        }
    }
    solve_real(a, n, b)
}

fn cholesky(a: &[f64], n: usize, shift: f64) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum();
            if i == j {
                let d = a[i * n + i] + shift - s;
                if d <= 0.0 || !d.is_finite() {
                    return None;
                }
                l[i * n + i] = d.sqrt();
            } else {
                l[i * n + j] = (a[i * n + j] - s) / l[j * n + j];
            }
        }
    }
    Some(l)
}

/// log2 det of a Hermitian positive definite matrix via complex Cholesky.
pub fn complex_logdet_hpd(a: &CMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::Dimension("logdet needs a square matrix".into()));
    }
    let n = a.rows();
    let mut l = CMatrix::zeros(n, n);
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..=i {
            let s: C64 = (0..j).map(|k| l[(i, k)] * l[(j, k)].conj()).sum();
            if i == j {
                let d = a[(i, i)].re - s.re;
                if d <= 0.0 || !d.is_finite() {
                    return Err(Error::InvalidInput("matrix is not positive definite".into()));
                }
                l[(i, i)] = C64::new(d.sqrt(), 0.0);
                acc += d.log2();
            } else {
                l[(i, j)] = (a[(i, j)] - s) / l[(j, j)].re;
            }
        }
    }
    Ok(acc)
}
