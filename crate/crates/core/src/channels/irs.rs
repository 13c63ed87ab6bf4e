use crate::error::{Error, Result};
use crate::numerics::{CMatrix, C64};

/// Ψ = diag(e^{jψ_m}) with ψ in radians.
pub fn phase_matrix(psi: &[f64]) -> CMatrix {
    CMatrix::diag(&psi.iter().map(|&p| C64::from_polar(1.0, p)).collect::<Vec<_>>())
}

/// h = h_D + F·Ψ·h_R with Ψ = diag(e^{jψ_m}), ψ in radians.
pub fn irs_effective_channel(h_d: &[C64], f: &CMatrix, psi: &[f64], h_r: &[C64]) -> Result<Vec<C64>> {
    if f.rows() != h_d.len() || f.cols() != psi.len() || psi.len() != h_r.len() {
        return Err(Error::Dimension(format!(
            "h_D {} / F {}x{} / psi {} / h_R {}",
            h_d.len(),
            f.rows(),
            f.cols(),
            psi.len(),
            h_r.len()
        )));
    }
    if psi.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite("phase shift".into()));
    }
    let reflected: Vec<C64> = psi.iter().zip(h_r).map(|(&p, &h)| C64::from_polar(1.0, p) * h).collect();
    Ok(f.mat_vec(&reflected).iter().zip(h_d).map(|(a, b)| a + b).collect())
}
