use crate::error::{Error, Result};
use crate::numerics::C64;
use std::f64::consts::PI;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Positions in meters. Users sit on the ground plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    pub bs_position: [f64; 3],
    pub irs_position: [f64; 3],
    pub user_positions: Vec<[f64; 3]>,
    /// r_0 with z = H_0.
    pub uav_position: Option<[f64; 3]>,
    pub uav_velocity: [f64; 3],
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        let all = [self.bs_position, self.irs_position, self.uav_velocity]
            .into_iter()
            .chain(self.user_positions.iter().copied())
            .chain(self.uav_position);
        if all.flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("geometry coordinate".into()));
        }
        if let Some(r0) = self.uav_position {
            if r0[2] <= 0.0 {
                return Err(Error::InvalidInput(format!("UAV altitude must be positive, got {}", r0[2])));
            }
        }
        if let Some(k) = self.user_positions.iter().position(|r| r[2] != 0.0) {
            return Err(Error::InvalidInput(format!("user {k} is not on the ground plane")));
        }
        Ok(())
    }
}

pub(crate) fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Uniform planar array response a(θ, φ) = a_x ⊗ a_y, entry index n_x·N_y + n_y.
pub fn upa_steering(theta: f64, phi: f64, nx: usize, ny: usize, spacing: f64, fc: f64) -> Result<Vec<C64>> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidInput("array dimensions must be at least 1".into()));
    }
    if !(theta.is_finite() && phi.is_finite() && spacing.is_finite() && fc.is_finite()) || fc <= 0.0 {
        return Err(Error::InvalidInput("steering parameters must be finite with fc > 0".into()));
    }
    let k = 2.0 * PI * spacing * fc / SPEED_OF_LIGHT * theta.sin();
    let (ux, uy) = (k * phi.cos(), k * phi.sin());
    let mut out = Vec::with_capacity(nx * ny);
    for ix in 0..nx {
        for iy in 0..ny {
            out.push(C64::from_polar(1.0, -ux * ix as f64) * C64::from_polar(1.0, -uy * iy as f64));
        }
    }
    Ok(out)
}

/// Uniform linear array response with element spacing given in wavelengths.
pub fn ula_steering(n: usize, spacing_wavelengths: f64, angle: f64) -> Vec<C64> {
    (0..n)
        .map(|i| C64::from_polar(1.0, -2.0 * PI * spacing_wavelengths * i as f64 * angle.sin()))
        .collect()
}

/// Departure angles (θ, φ) from the UAV to user k.
///
/// θ is measured from nadir: atan(horizontal distance / altitude gap). φ is the bearing atan2(Δy, Δx).
pub fn uav_angles(r0: &[f64; 3], rk: &[f64; 3]) -> (f64, f64) {
    let dx = rk[0] - r0[0];
    let dy = rk[1] - r0[1];
    let h = r0[2] - rk[2];
    ((dx.hypot(dy)).atan2(h), dy.atan2(dx))
}

/// h_k = √ϱ‖r_0 − r_k‖⁻¹·a(θ_k, φ_k) with ϱ = (c / 4πf_c)².
pub fn uav_user_channel(geom: &Geometry, k: usize, fc: f64, nx: usize, ny: usize, spacing: f64) -> Result<Vec<C64>> {
    geom.validate()?;
    let r0 = geom.uav_position.ok_or_else(|| Error::InvalidInput("geometry has no UAV".into()))?;
    let rk = *geom
        .user_positions
        .get(k)
        .ok_or_else(|| Error::InvalidInput(format!("user {k} out of range")))?;
    let d = dist(&r0, &rk);
    if d <= 0.0 {
        return Err(Error::InvalidInput(format!("UAV coincides with user {k}")));
    }
    let (theta, phi) = uav_angles(&r0, &rk);
    let gain = SPEED_OF_LIGHT / (4.0 * PI * fc) / d;
    Ok(upa_steering(theta, phi, nx, ny, spacing, fc)?.into_iter().map(|a| a * gain).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rng;

    const FC: f64 = 2.0e9;

    fn geom(r0: [f64; 3], users: Vec<[f64; 3]>) -> Geometry {
        Geometry {
            bs_position: [0.0; 3],
            irs_position: [0.0; 3],
            user_positions: users,
            uav_position: Some(r0),
            uav_velocity: [0.0; 3],
        }
    }

    #[test]
    fn broadside_and_scalar_cases() {
        let a = upa_steering(0.0, 1.3, 3, 2, 0.07, FC).unwrap();
        assert!(a.iter().all(|z| (z - C64::new(1.0, 0.0)).norm() < 1e-15));
        assert_eq!(upa_steering(0.7, 0.2, 1, 1, 0.07, FC).unwrap(), vec![C64::new(1.0, 0.0)]);
        assert!(upa_steering(0.1, 0.1, 0, 2, 0.1, FC).is_err());
    }

    #[test]
    fn kronecker_ordering_half_wavelength() {
        let b = SPEED_OF_LIGHT / (2.0 * FC);
        let a = upa_steering(PI / 2.0, 0.0, 2, 2, b, FC).unwrap();
        // a_x = (1, e^{-iπ}), a_y = (1, 1); x index is the slow one
        let want = [C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::from_polar(1.0, -PI), C64::from_polar(1.0, -PI)];
        for (z, w) in a.iter().zip(want) {
            assert!((z - w).norm() < 1e-12);
        }
    }

    #[test]
    fn steering_entries_are_unit_modulus() {
        let mut rng = Rng::new(2);
        for _ in 0..50 {
            let a = upa_steering(rng.uniform_range(-PI, PI), rng.uniform_range(-PI, PI), 4, 3, 0.05, FC).unwrap();
            assert!(a.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn user_below_uav_gets_free_space_gain() {
        let g = geom([3.0, 4.0, 100.0], vec![[3.0, 4.0, 0.0]]);
        let h = uav_user_channel(&g, 0, FC, 2, 2, 0.07).unwrap();
        let want = SPEED_OF_LIGHT / (4.0 * PI * FC) / 100.0;
        assert!(h.iter().all(|z| (z.norm() - want).abs() < 1e-15));
    }

    #[test]
    fn doubling_distance_halves_magnitude() {
        let g1 = geom([0.0, 0.0, 30.0], vec![[40.0, 0.0, 0.0]]);
        let g2 = geom([0.0, 0.0, 60.0], vec![[80.0, 0.0, 0.0]]);
        let h1 = uav_user_channel(&g1, 0, FC, 2, 1, 0.07).unwrap();
        let h2 = uav_user_channel(&g2, 0, FC, 2, 1, 0.07).unwrap();
        for (a, b) in h1.iter().zip(&h2) {
            assert!((a.norm() - 2.0 * b.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn random_geometry_matches_scalar_formula() {
        let mut rng = Rng::new(8);
        let (nx, ny, b) = (3, 2, 0.06);
        for _ in 0..20 {
            let r0 = [rng.uniform_range(-50.0, 50.0), rng.uniform_range(-50.0, 50.0), rng.uniform_range(20.0, 120.0)];
            let rk = [rng.uniform_range(-50.0, 50.0), rng.uniform_range(-50.0, 50.0), 0.0];
            let h = uav_user_channel(&geom(r0, vec![rk]), 0, FC, nx, ny, b).unwrap();
            let d = ((r0[0] - rk[0]).powi(2) + (r0[1] - rk[1]).powi(2) + r0[2].powi(2)).sqrt();
            let horiz = ((r0[0] - rk[0]).powi(2) + (r0[1] - rk[1]).powi(2)).sqrt();
            let theta = (horiz / r0[2]).atan();
            let phi = (rk[1] - r0[1]).atan2(rk[0] - r0[0]);
            let rho = (SPEED_OF_LIGHT / (4.0 * PI * FC)).powi(2);
            for ix in 0..nx {
                for iy in 0..ny {
                    let ph = -2.0 * PI * b * FC / SPEED_OF_LIGHT * theta.sin()
                        * (ix as f64 * phi.cos() + iy as f64 * phi.sin());
                    let want = C64::from_polar(rho.sqrt() / d, ph);
                    assert!((h[ix * ny + iy] - want).norm() < 1e-12 * want.norm());
                }
            }
        }
    }

    #[test]
    fn coincident_positions_and_bad_geometry_fail() {
        let mut g = geom([0.0, 0.0, 10.0], vec![[0.0, 0.0, 0.0]]);
        g.uav_position = Some([0.0, 0.0, 0.0]);
        assert!(uav_user_channel(&g, 0, FC, 1, 1, 0.1).is_err());
        let g = geom([0.0, 0.0, 10.0], vec![[0.0, 0.0, 1.0]]);
        assert!(g.validate().is_err());
    }
}
