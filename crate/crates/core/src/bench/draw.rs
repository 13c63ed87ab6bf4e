//! One channel realization of the sector deployment.
//!
//! The BS sits at the origin with its array broadside along +x, the IRS at
//! (bs_irs_dist, 0) facing the BS, and users are uniform over the 120° sector
//! annulus between the inner radius and the cell radius.

use super::config::{ScenarioConfig, MIN_USER_RADIUS_M};
use crate::channels::{gen_rician, perturb_csi, ula_steering, RicianParams, UncertaintyModel};
use crate::error::Result;
use crate::numerics::{derive_seed, dbm_to_mw, vnorm, CMatrix, Rng, C64};
use crate::problems::{IrsScenario, PhaseSet};
use std::f64::consts::PI;

/// Links shorter than this are clamped to avoid the pathloss singularity.
pub const MIN_LINK_M: f64 = 1.0;

/// Channels scaled by 1/σ so the noise power is one.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub h_d: Vec<Vec<C64>>,
    pub f: CMatrix,
    pub h_r: Vec<Vec<C64>>,
    pub positions: Vec<[f64; 2]>,
}

impl Realization {
    /// Hash of every channel coefficient, for checking paired trials.
    pub fn fingerprint(&self) -> u64 {
        let words: Vec<u64> = self
            .h_d
            .iter()
            .chain(&self.h_r)
            .flatten()
            .chain(self.f.data())
            .flat_map(|c| [c.re.to_bits(), c.im.to_bits()])
            .collect();
        derive_seed(&words)
    }

    /// Per-user radii of the effective-channel error ball: √υ²(‖h_D‖ + ‖F‖_F‖h_R‖).
    pub fn effective_deltas(&self, upsilon2: f64) -> Vec<f64> {
        let s = upsilon2.sqrt();
        let f = self.f.frobenius_norm();
        self.h_d.iter().zip(&self.h_r).map(|(d, r)| s * (vnorm(d) + f * vnorm(r))).collect()
    }

    /// True channels: direct and reflected links each move within a ball of radius √υ²‖h‖.
    pub fn perturbed(&self, upsilon2: f64, rng: &mut Rng) -> Result<Realization> {
        let s = upsilon2.sqrt();
        let mut draw = |h: &Vec<C64>| perturb_csi(h, &UncertaintyModel::Bounded { delta: s * vnorm(h) }, rng);
        let h_d = self.h_d.iter().map(&mut draw).collect::<Result<Vec<_>>>()?;
        let h_r = self.h_r.iter().map(&mut draw).collect::<Result<Vec<_>>>()?;
        Ok(Realization { h_d, f: self.f.clone(), h_r, positions: self.positions.clone() })
    }

    /// IRS scenario at the given budget; `with_irs = false` zeroes the cascaded link.
    pub fn scenario(&self, cfg: &ScenarioConfig, p_max_dbm: f64, with_irs: bool) -> IrsScenario {
        let f = if with_irs { self.f.clone() } else { CMatrix::zeros(self.f.rows(), self.f.cols()) };
        IrsScenario {
            h_d: self.h_d.clone(),
            f,
            h_r: self.h_r.clone(),
            sigmas: vec![1.0; self.h_d.len()],
            p_max: dbm_to_mw(p_max_dbm),
            phases: PhaseSet::uniform_bits(cfg.phase_bits),
        }
    }
}

fn bearing(from: [f64; 2], to: [f64; 2]) -> f64 {
    (to[1] - from[1]).atan2(to[0] - from[0])
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt().max(MIN_LINK_M)
}

/// Draws user positions and Rician links.
pub fn draw_realization(cfg: &ScenarioConfig, rng: &mut Rng) -> Result<Realization> {
    cfg.validate()?;
    let params = RicianParams { kappa: cfg.rician_k, pathloss_exponent: cfg.pathloss_exp, reference_gain_db: cfg.ref_gain_db };
    let (n, m) = (cfg.n_antennas, cfg.m_irs);
    let bs = [0.0, 0.0];
    let irs = [cfg.bs_irs_dist_m, 0.0];
    let (r0, r1) = (MIN_USER_RADIUS_M, cfg.cell_radius_m);
    let positions: Vec<[f64; 2]> = (0..cfg.k_users)
        .map(|_| {
            let r = rng.uniform_range(r0 * r0, r1 * r1).sqrt();
            let th = rng.uniform_range(-PI / 3.0, PI / 3.0);
            [r * th.cos(), r * th.sin()]
        })
        .collect();
    // the IRS faces the BS, so its broadside points along -x
    let irs_angle = |p: [f64; 2]| PI - bearing(irs, p);
    let scale = 1.0 / dbm_to_mw(cfg.noise_dbm).sqrt();
    let los_f = {
        let a = ula_steering(n, 0.5, bearing(bs, irs));
        let b = ula_steering(m, 0.5, irs_angle(bs));
        CMatrix::from_fn(n, m, |i, j| a[i] * b[j].conj())
    };
    let f = gen_rician(n, m, &params, dist(bs, irs), Some(&los_f), rng)?;
    let mut h_d = Vec::with_capacity(cfg.k_users);
    let mut h_r = Vec::with_capacity(cfg.k_users);
    for &p in &positions {
        let los = CMatrix::from_columns(&[ula_steering(n, 0.5, bearing(bs, p))])?;
        let d = gen_rician(n, 1, &params, dist(bs, p), Some(&los), rng)?;
        h_d.push(d.col(0).iter().map(|v| v * scale).collect());
        let los = CMatrix::from_columns(&[ula_steering(m, 0.5, irs_angle(p))])?;
        let r = gen_rician(m, 1, &params, dist(irs, p), Some(&los), rng)?;
        h_r.push(r.col(0).iter().map(|v| v * scale).collect());
    }
    Ok(Realization { h_d, f, h_r, positions })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn users_stay_in_the_sector() {
        let cfg = ScenarioConfig::default();
        let mut rng = Rng::new(4);
        for _ in 0..50 {
            let r = draw_realization(&cfg, &mut rng).unwrap();
            for p in &r.positions {
                let rad = (p[0] * p[0] + p[1] * p[1]).sqrt();
                assert!((MIN_USER_RADIUS_M..=cfg.cell_radius_m).contains(&rad));
                assert!(p[1].atan2(p[0]).abs() <= PI / 3.0 + 1e-12);
            }
            assert_eq!((r.f.rows(), r.f.cols(), r.h_r[0].len()), (8, 16, 16));
        }
    }

    #[test]
    fn zero_uncertainty_leaves_channels_unchanged() {
        let cfg = ScenarioConfig::preset("fig10-desk").unwrap();
        let mut rng = Rng::new(2);
        let r = draw_realization(&cfg, &mut rng).unwrap();
        assert_eq!(r.perturbed(0.0, &mut rng).unwrap(), r);
        assert!(r.effective_deltas(0.0).iter().all(|&d| d == 0.0));
    }
}
