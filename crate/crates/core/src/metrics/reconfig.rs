use crate::channels::{irs_effective_channel, uav_angles, upa_steering, Geometry, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::numerics::{vdot, CMatrix, C64};
use std::f64::consts::PI;

fn check_alpha(alpha: &[Vec<f64>], k: usize) -> Result<()> {
    if alpha.len() != k || alpha.iter().any(|r| r.len() != k) {
        return Err(Error::Dimension(format!("pairwise indicator must be {k}x{k}")));
    }
    Ok(())
}

/// Γ_k = |h_k^H p_k|² / (Σ_{r≠k} α_{k,r}|h_k^H p_r|² + σ_k²).
pub fn sinr_with_alpha(h: &[Vec<C64>], precoders: &[Vec<C64>], alpha: &[Vec<f64>], sigmas: &[f64]) -> Result<Vec<f64>> {
    let k = h.len();
    if precoders.len() != k || sigmas.len() != k {
        return Err(Error::Dimension(format!("{k} channels, {} precoders, {} noise values", precoders.len(), sigmas.len())));
    }
    check_alpha(alpha, k)?;
    let n = h.first().map_or(0, |v| v.len());
    if h.iter().chain(precoders).any(|v| v.len() != n) {
        return Err(Error::Dimension(format!("channel and precoder vectors must have length {n}")));
    }
    Ok((0..k)
        .map(|u| {
            let sig = vdot(&h[u], &precoders[u]).norm_sqr();
            let interf: f64 = (0..k)
                .filter(|&r| r != u)
                .map(|r| alpha[u][r] * vdot(&h[u], &precoders[r]).norm_sqr())
                .sum();
            sig / (interf + sigmas[u])
        })
        .collect())
}

/// UAV downlink SINRs with large-scale gain ϱ/d_k² applied outside the array response.
pub fn uav_sinr(
    geom: &Geometry,
    fc: f64,
    array: (usize, usize, f64),
    precoders: &[Vec<C64>],
    alpha: &[Vec<f64>],
    sigmas: &[f64],
) -> Result<Vec<f64>> {
    geom.validate()?;
    let r0 = geom.uav_position.ok_or_else(|| Error::InvalidInput("geometry has no UAV".into()))?;
    let k = geom.user_positions.len();
    if precoders.len() != k || sigmas.len() != k {
        return Err(Error::Dimension("one precoder and noise value per user".into()));
    }
    check_alpha(alpha, k)?;
    let rho = (SPEED_OF_LIGHT / (4.0 * PI * fc)).powi(2);
    let (nx, ny, b) = array;
    let mut out = Vec::with_capacity(k);
    for (u, rk) in geom.user_positions.iter().enumerate() {
        let d2 = (r0[0] - rk[0]).powi(2) + (r0[1] - rk[1]).powi(2) + (r0[2] - rk[2]).powi(2);
        if d2 <= 0.0 {
            return Err(Error::InvalidInput(format!("UAV coincides with user {u}")));
        }
        let (theta, phi) = uav_angles(&r0, rk);
        let a = upa_steering(theta, phi, nx, ny, b, fc)?;
        if precoders.iter().any(|p| p.len() != a.len()) {
            return Err(Error::Dimension(format!("precoders must have length {}", a.len())));
        }
        let g = rho / d2;
        let sig = g * vdot(&a, &precoders[u]).norm_sqr();
        let interf: f64 = (0..k)
            .filter(|&r| r != u)
            .map(|r| alpha[u][r] * g * vdot(&a, &precoders[r]).norm_sqr())
            .sum();
        out.push(sig / (interf + sigmas[u]));
    }
    Ok(out)
}

/// Effective channels h_D,k + F·Ψ·h_R,k for every user.
pub fn irs_channels(h_d: &[Vec<C64>], f: &CMatrix, psi: &[f64], h_r: &[Vec<C64>]) -> Result<Vec<Vec<C64>>> {
    if h_d.len() != h_r.len() {
        return Err(Error::Dimension("direct and reflected link counts differ".into()));
    }
    h_d.iter().zip(h_r).map(|(d, r)| irs_effective_channel(d, f, psi, r)).collect()
}

/// IRS-assisted NOMA SINRs.
pub fn irs_sinr(
    h_d: &[Vec<C64>],
    f: &CMatrix,
    psi: &[f64],
    h_r: &[Vec<C64>],
    precoders: &[Vec<C64>],
    alpha: &[Vec<f64>],
    sigmas: &[f64],
) -> Result<Vec<f64>> {
    let h = irs_channels(h_d, f, psi, h_r)?;
    sinr_with_alpha(&h, precoders, alpha, sigmas)
}

/// M/FA SINRs with lifted beams U (NQ×K): Γ_k = |ĥ_k^H u_k|² / (Σ_{r≠k}|ĥ_k^H u_r|² + σ_k²).
pub fn mfa_sinr(h_hat: &[Vec<C64>], u: &CMatrix, sigmas: &[f64]) -> Result<Vec<f64>> {
    let k = h_hat.len();
    if u.cols() != k || sigmas.len() != k || h_hat.iter().any(|h| h.len() != u.rows()) {
        return Err(Error::Dimension(format!("U is {}x{} for {k} users", u.rows(), u.cols())));
    }
    let cols: Vec<Vec<C64>> = (0..k).map(|j| u.col(j)).collect();
    let all_ones: Vec<Vec<f64>> = (0..k).map(|_| vec![1.0; k]).collect();
    sinr_with_alpha(h_hat, &cols, &all_ones, sigmas)
}
