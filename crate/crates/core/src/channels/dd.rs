//! Delay-Doppler channel matrices on an M̃×Ñ grid.
//!
//! Grid vectors are Doppler-major: entry (delay l, Doppler bin j) sits at j·M̃ + l.

use crate::error::{Error, Result};
use crate::numerics::{CMatrix, C64};
use std::f64::consts::PI;

/// One resolvable path. The twisted-convolution phase is folded into `gain`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdPath {
    pub delay: usize,
    /// Integer Doppler bin; |k| < Ñ/2.
    pub doppler: i64,
    pub gain: C64,
}

/// H = Σ_i g_i·Δ^{k_i}·Π^{l_i}, with (Πx)[n] = x[n−1] cyclically and Δ = diag(e^{j2πn/(M̃Ñ)}).
pub fn dd_channel(paths: &[DdPath], m: usize, n: usize) -> Result<CMatrix> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("grid dimensions must be positive".into()));
    }
    let size = m * n;
    let mut h = CMatrix::zeros(size, size);
    for (i, p) in paths.iter().enumerate() {
        if p.delay >= m {
            return Err(Error::InvalidInput(format!("path {i}: delay {} outside 0..{m}", p.delay)));
        }
        if 2 * p.doppler.unsigned_abs() as usize >= n && !(n == 1 && p.doppler == 0) {
            return Err(Error::InvalidInput(format!("path {i}: Doppler {} outside |k| < {n}/2", p.doppler)));
        }
        if !(p.gain.re.is_finite() && p.gain.im.is_finite()) {
            return Err(Error::NonFinite(format!("path {i} gain")));
        }
        for row in 0..size {
            let col = (row + size - p.delay) % size;
            let ramp = C64::from_polar(1.0, 2.0 * PI * p.doppler as f64 * row as f64 / size as f64);
            h[(row, col)] += p.gain * ramp;
        }
    }
    Ok(h)
}

/// Π_k: maps Ñ symbols onto delay row k, one per Doppler bin.
pub fn ddma_indicator(k: usize, m: usize, n: usize) -> Result<CMatrix> {
    if k >= m {
        return Err(Error::InvalidInput(format!("user row {k} outside 0..{m}")));
    }
    let mut pi = CMatrix::zeros(m * n, n);
    for j in 0..n {
        pi[(j * m + k, j)] = C64::new(1.0, 0.0);
    }
    Ok(pi)
}
