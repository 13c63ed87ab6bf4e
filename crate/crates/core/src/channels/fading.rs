use crate::error::{Error, Result};
use crate::numerics::{db_to_linear, eig_hermitian, CMatrix, Rng, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicianParams {
    /// Linear LoS-to-scatter power ratio.
    pub kappa: f64,
    pub pathloss_exponent: f64,
    /// Gain at 1 m in dB.
    pub reference_gain_db: f64,
}

impl Default for RicianParams {
    fn default() -> Self {
        Self { kappa: 1.0, pathloss_exponent: 3.0, reference_gain_db: -30.0 }
    }
}

impl RicianParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return Err(Error::InvalidInput(format!("Rician factor must be >= 0, got {}", self.kappa)));
        }
        if !(self.pathloss_exponent > 0.0 && self.pathloss_exponent.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "path-loss exponent must be > 0, got {}",
                self.pathloss_exponent
            )));
        }
        if !self.reference_gain_db.is_finite() {
            return Err(Error::NonFinite("reference gain".into()));
        }
        Ok(())
    }

    /// Linear power gain at the given distance.
    pub fn pathloss(&self, distance: f64) -> f64 {
        db_to_linear(self.reference_gain_db) * distance.powf(-self.pathloss_exponent)
    }
}

/// Rician fading matrix √PL·(√(κ/(1+κ))·LoS + √(1/(1+κ))·CN(0,1)).
///
/// `los` must be rows×cols with unit-modulus entries; `None` uses the all-ones matrix.
pub fn gen_rician(
    rows: usize,
    cols: usize,
    params: &RicianParams,
    distance: f64,
    los: Option<&CMatrix>,
    rng: &mut Rng,
) -> Result<CMatrix> {
    params.validate()?;
    if !(distance > 0.0 && distance.is_finite()) {
        return Err(Error::InvalidInput(format!("distance must be positive, got {distance}")));
    }
    if let Some(l) = los {
        if (l.rows(), l.cols()) != (rows, cols) {
            return Err(Error::Dimension(format!(
                "LoS matrix is {}x{}, expected {rows}x{cols}",
                l.rows(),
                l.cols()
            )));
        }
    }
    let amp = params.pathloss(distance).sqrt();
    let w_los = (params.kappa / (1.0 + params.kappa)).sqrt();
    let w_nlos = (1.0 / (1.0 + params.kappa)).sqrt();
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        let l = los.map_or(C64::new(1.0, 0.0), |m| m[(i, j)]);
        (l * w_los + rng.complex_normal() * w_nlos) * amp
    }))
}

/// CSI error model around an estimate ĥ.
#[derive(Debug, Clone)]
pub enum UncertaintyModel {
    /// ‖Δ‖ ≤ delta.
    Bounded { delta: f64 },
    /// Δ ~ CN(0, C).
    Gaussian { covariance: CMatrix },
}

/// Returns ĥ + Δ drawn from the model. Bounded draws are uniform in the ball.
pub fn perturb_csi(h_hat: &[C64], model: &UncertaintyModel, rng: &mut Rng) -> Result<Vec<C64>> {
    let n = h_hat.len();
    match model {
        UncertaintyModel::Bounded { delta } => {
            if !(*delta >= 0.0 && delta.is_finite()) {
                return Err(Error::InvalidInput(format!("uncertainty radius must be >= 0, got {delta}")));
            }
            if *delta == 0.0 || n == 0 {
                return Ok(h_hat.to_vec());
            }
            let dir: Vec<C64> = (0..n).map(|_| rng.complex_normal()).collect();
            let norm = crate::numerics::vnorm(&dir);
            let radius = delta * rng.uniform().powf(1.0 / (2 * n) as f64);
            Ok(h_hat.iter().zip(&dir).map(|(h, d)| h + d * (radius / norm)).collect())
        }
        UncertaintyModel::Gaussian { covariance } => {
            if (covariance.rows(), covariance.cols()) != (n, n) {
                return Err(Error::Dimension(format!("covariance must be {n}x{n}")));
            }
            let e = eig_hermitian(covariance)?;
            let tol = 1e-10 * covariance.frobenius_norm().max(1.0);
            if e.eigenvalues.first().is_some_and(|&l| l < -tol) {
                return Err(Error::InvalidInput("covariance is not positive semidefinite".into()));
            }
            let z: Vec<C64> = (0..n).map(|_| rng.complex_normal()).collect();
            let scaled: Vec<C64> = z.iter().zip(&e.eigenvalues).map(|(zi, &l)| zi * l.max(0.0).sqrt()).collect();
            let delta = e.eigenvectors.mat_vec(&scaled);
            Ok(h_hat.iter().zip(&delta).map(|(h, d)| h + d).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{vnorm, CMatrix};

    #[test]
    fn huge_kappa_reproduces_los() {
        let p = RicianParams { kappa: 1e9, pathloss_exponent: 2.0, reference_gain_db: 0.0 };
        let los = CMatrix::from_fn(3, 2, |i, j| C64::from_polar(1.0, 0.3 * (i + 2 * j) as f64));
        let h = gen_rician(3, 2, &p, 10.0, Some(&los), &mut Rng::new(1)).unwrap();
        let amp = p.pathloss(10.0).sqrt();
        for i in 0..3 {
            for j in 0..2 {
                assert!((h[(i, j)] - los[(i, j)] * amp).norm() <= 1e-4 * amp);
            }
        }
    }

    fn mean_power(p: &RicianParams, d: f64, draws: usize) -> f64 {
        let mut rng = Rng::new(99);
        let h = gen_rician(draws, 1, p, d, None, &mut rng).unwrap();
        h.data().iter().map(|z| z.norm_sqr()).sum::<f64>() / draws as f64
    }

    #[test]
    fn rayleigh_variance_is_pathloss() {
        let p = RicianParams { kappa: 0.0, pathloss_exponent: 3.0, reference_gain_db: -30.0 };
        let m = mean_power(&p, 20.0, 100_000);
        assert!((m / p.pathloss(20.0) - 1.0).abs() < 0.02);
    }

    #[test]
    fn unit_kappa_at_fifty_meters() {
        let p = RicianParams::default();
        let m = mean_power(&p, 50.0, 100_000);
        let want = 1e-3 * 50f64.powi(-3);
        assert!((m / want - 1.0).abs() < 0.02);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = RicianParams::default();
        let mut rng = Rng::new(0);
        assert!(gen_rician(1, 1, &p, 0.0, None, &mut rng).is_err());
        let bad = RicianParams { kappa: -1.0, ..p };
        assert!(gen_rician(1, 1, &bad, 1.0, None, &mut rng).is_err());
        assert!(gen_rician(2, 2, &p, 1.0, Some(&CMatrix::identity(3)), &mut rng).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let p = RicianParams::default();
        let a = gen_rician(4, 3, &p, 12.0, None, &mut Rng::new(5)).unwrap();
        let b = gen_rician(4, 3, &p, 12.0, None, &mut Rng::new(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bounded_draws_stay_in_ball() {
        let h = vec![C64::new(1.0, -1.0); 4];
        let mut rng = Rng::new(4);
        assert_eq!(perturb_csi(&h, &UncertaintyModel::Bounded { delta: 0.0 }, &mut rng).unwrap(), h);
        let model = UncertaintyModel::Bounded { delta: 0.3 };
        let mut max_r: f64 = 0.0;
        for _ in 0..100_000 {
            let g = perturb_csi(&h, &model, &mut rng).unwrap();
            let d: Vec<C64> = g.iter().zip(&h).map(|(a, b)| a - b).collect();
            let r = vnorm(&d);
            assert!(r <= 0.3 * (1.0 + 1e-12));
            max_r = max_r.max(r);
        }
        assert!(max_r > 0.29);
    }

    #[test]
    fn gaussian_sample_covariance() {
        let c = CMatrix::new(
            2,
            2,
            vec![C64::new(2.0, 0.0), C64::new(0.5, 0.5), C64::new(0.5, -0.5), C64::new(1.0, 0.0)],
        )
        .unwrap();
        let model = UncertaintyModel::Gaussian { covariance: c.clone() };
        let h = vec![C64::new(0.0, 0.0); 2];
        let mut rng = Rng::new(6);
        let draws = 100_000;
        let mut acc = CMatrix::zeros(2, 2);
        for _ in 0..draws {
            let d = perturb_csi(&h, &model, &mut rng).unwrap();
            acc = acc.add(&crate::numerics::outer(&d));
        }
        let emp = acc.scale_real(1.0 / draws as f64);
        assert!(emp.sub(&c).frobenius_norm() <= 0.05 * c.frobenius_norm());
    }

    #[test]
    fn non_psd_covariance_is_rejected() {
        let model = UncertaintyModel::Gaussian { covariance: CMatrix::diag_real(&[1.0, -1.0]) };
        assert!(perturb_csi(&[C64::new(0.0, 0.0); 2], &model, &mut Rng::new(0)).is_err());
    }
}
