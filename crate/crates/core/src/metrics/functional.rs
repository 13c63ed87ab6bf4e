use super::natural::{ofdma_rate_over, ScheduleMatrix};
use super::rate;
use crate::error::{Error, Result};
use crate::numerics::{CMatrix, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct IsacMetrics {
    pub sinr: Vec<f64>,
    pub rate: Vec<f64>,
    /// ‖PS − X0‖_F² / L.
    pub mse: f64,
}

/// Effective SINR, rate and beampattern MSE of a precoded ISAC frame.
///
/// Row k of H_C is (h_C^(k))^T; row k of S is s_k^T.
pub fn isac_metrics(h_c: &CMatrix, p: &CMatrix, s: &CMatrix, x0: &CMatrix, sigmas: &[f64]) -> Result<IsacMetrics> {
    let (k, n, l) = (h_c.rows(), h_c.cols(), s.cols());
    if l == 0 {
        return Err(Error::InvalidInput("frame length L must be at least 1".into()));
    }
    if (p.rows(), p.cols()) != (n, k) || s.rows() != k || (x0.rows(), x0.cols()) != (n, l) || sigmas.len() != k {
        return Err(Error::Dimension(format!(
            "H_C {k}x{n}, P {}x{}, S {}x{l}, X0 {}x{}, {} noise values",
            p.rows(),
            p.cols(),
            s.rows(),
            x0.rows(),
            x0.cols(),
            sigmas.len()
        )));
    }
    let ps = p.matmul(s);
    let received = h_c.matmul(&ps);
    let lf = l as f64;
    let mut sinr = Vec::with_capacity(k);
    for u in 0..k {
        let sig: f64 = (0..l).map(|t| s[(u, t)].norm_sqr()).sum::<f64>() / lf;
        let err: f64 = (0..l).map(|t| (received[(u, t)] - s[(u, t)]).norm_sqr()).sum::<f64>() / lf;
        sinr.push(sig / (err + sigmas[u]));
    }
    let rate = sinr.iter().map(|&g| rate(g)).collect();
    let mse = ps.sub(x0).frobenius_norm().powi(2) / lf;
    Ok(IsacMetrics { sinr, rate, mse })
}

/// Communication and offloading rates of one JCAC user.
///
/// Columns `0..d_c` of the schedule carry information symbols, the rest carry task symbols.
pub fn jcac_rates(h_diag: &[C64], pi: &ScheduleMatrix, d_c: usize, powers: &[f64], sigma2: f64) -> Result<(f64, f64)> {
    if pi.rows() != h_diag.len() || pi.cols() != powers.len() || d_c > pi.cols() {
        return Err(Error::Dimension("JCAC schedule does not match gains, powers or split".into()));
    }
    if !(sigma2 > 0.0) {
        return Err(Error::InvalidInput(format!("noise power {sigma2} must be positive")));
    }
    if let Some(p) = powers.iter().find(|p| !(**p >= 0.0)) {
        return Err(Error::InvalidInput(format!("power {p} must be >= 0")));
    }
    for d in 0..pi.cols() {
        if pi.col_sum(d) > 1 {
            return Err(Error::InvalidInput(format!("symbol {d} occupies {} subcarriers", pi.col_sum(d))));
        }
    }
    for m in 0..pi.rows() {
        let comm = (0..d_c).any(|d| pi.get(m, d));
        let task = (d_c..pi.cols()).any(|d| pi.get(m, d));
        if comm && task {
            return Err(Error::InvalidInput(format!("subcarrier {m} carries both information and task symbols")));
        }
    }
    Ok((
        ofdma_rate_over(h_diag, pi, powers, sigma2, 0..d_c),
        ofdma_rate_over(h_diag, pi, powers, sigma2, d_c..pi.cols()),
    ))
}

/// Per-user computing and transmission parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcacParams {
    /// Effective capacitance coefficient ς_k.
    pub capacitance: f64,
    /// CPU cycles per bit C_k.
    pub cycles_per_bit: f64,
    /// Task size L̃_k in bits.
    pub task_bits: f64,
    /// Bits computed locally L_k.
    pub local_bits: f64,
    /// Latency budget T̃ in seconds.
    pub latency: f64,
    /// Symbol time T in seconds.
    pub symbol_time: f64,
}

impl JcacParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.latency > 0.0 && self.symbol_time > 0.0) {
            return Err(Error::InvalidInput("latency and symbol time must be positive".into()));
        }
        if !(self.capacitance >= 0.0 && self.cycles_per_bit >= 0.0) {
            return Err(Error::InvalidInput("capacitance and cycles per bit must be >= 0".into()));
        }
        if !(0.0..=self.task_bits).contains(&self.local_bits) {
            return Err(Error::InvalidInput(format!(
                "local bits {} outside [0, {}]",
                self.local_bits, self.task_bits
            )));
        }
        Ok(())
    }
}

/// E_tot = Σ_k (ς_k C_k³ L_k³ / T̃² + Σ_l p_kl·T).
pub fn jcac_energy(params: &[JcacParams], powers: &[Vec<f64>]) -> Result<f64> {
    if params.len() != powers.len() {
        return Err(Error::Dimension("one power list per user".into()));
    }
    let mut e = 0.0;
    for (p, pw) in params.iter().zip(powers) {
        p.validate()?;
        e += p.capacitance * (p.cycles_per_bit * p.local_bits).powi(3) / (p.latency * p.latency)
            + pw.iter().sum::<f64>() * p.symbol_time;
    }
    Ok(e)
}

/// Rotary-wing propulsion constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UavPowerParams {
    pub w_u: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    /// Rotor tip speed V_T in m/s.
    pub v_tip: f64,
    /// Per-antenna circuit power in W.
    pub p_circ: f64,
}

impl Default for UavPowerParams {
    fn default() -> Self {
        Self { w_u: 100.0, c1: 4.03, c2: 0.0046, c3: 3.0, c4: 0.0056, v_tip: 120.0, p_circ: 0.5 }
    }
}

impl UavPowerParams {
    pub fn validate(&self) -> Result<()> {
        let all = [self.w_u, self.c1, self.c2, self.c3, self.c4, self.v_tip, self.p_circ];
        if all.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) || self.v_tip <= 0.0 {
            return Err(Error::InvalidInput("UAV power constants must be >= 0 with V_T > 0".into()));
        }
        Ok(())
    }
}

/// Aerodynamic power at speed ‖v‖:
/// √2·W_u·c1² / √(‖v‖² + √(‖v‖⁴ + 4c1⁴)) + c2·V_T³·(1 + c3·(‖v‖/V_T)²) + c4·‖v‖³.
pub fn uav_aero_power(v: &[f64], params: &UavPowerParams) -> Result<f64> {
    params.validate()?;
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("velocity".into()));
    }
    let s2: f64 = v.iter().map(|x| x * x).sum();
    let s = s2.sqrt();
    let c1sq = params.c1 * params.c1;
    let induced = if c1sq == 0.0 {
        0.0
    } else {
        std::f64::consts::SQRT_2 * params.w_u * c1sq / (s2 + (s2 * s2 + 4.0 * c1sq * c1sq).sqrt()).sqrt()
    };
    let profile = params.c2 * params.v_tip.powi(3) * (1.0 + params.c3 * (s / params.v_tip).powi(2));
    Ok(induced + profile + params.c4 * s.powi(3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::ofdma_rate;
    use crate::numerics::Rng;

    fn rand_mat(r: usize, c: usize, rng: &mut Rng) -> CMatrix {
        CMatrix::from_fn(r, c, |_, _| rng.complex_normal())
    }

    #[test]
    fn isac_perfect_beampattern_has_zero_mse() {
        let mut rng = Rng::new(1);
        let h = rand_mat(2, 3, &mut rng);
        let p = rand_mat(3, 2, &mut rng);
        let s = rand_mat(2, 4, &mut rng);
        let x0 = p.matmul(&s);
        assert_eq!(isac_metrics(&h, &p, &s, &x0, &[1.0, 1.0]).unwrap().mse, 0.0);
    }

    #[test]
    fn isac_perfect_equalization() {
        let mut rng = Rng::new(2);
        let h = CMatrix::identity(2);
        let s = rand_mat(2, 3, &mut rng);
        let m = isac_metrics(&h, &CMatrix::identity(2), &s, &CMatrix::zeros(2, 3), &[0.5, 0.25]).unwrap();
        for k in 0..2 {
            let e: f64 = (0..3).map(|t| s[(k, t)].norm_sqr()).sum();
            assert!((m.sinr[k] - e / (3.0 * [0.5, 0.25][k])).abs() < 1e-12);
        }
    }

    #[test]
    fn isac_entrywise_oracle() {
        let mut rng = Rng::new(3);
        let (k, n, l) = (2, 3, 4);
        let h = rand_mat(k, n, &mut rng);
        let p = rand_mat(n, k, &mut rng);
        let s = rand_mat(k, l, &mut rng);
        let x0 = rand_mat(n, l, &mut rng);
        let got = isac_metrics(&h, &p, &s, &x0, &[0.3, 0.7]).unwrap();
        for u in 0..k {
            let mut err = 0.0;
            let mut sig = 0.0;
            for t in 0..l {
                let mut y = C64::new(0.0, 0.0);
                for a in 0..n {
                    for j in 0..k {
                        y += h[(u, a)] * p[(a, j)] * s[(j, t)];
                    }
                }
                err += (y - s[(u, t)]).norm_sqr();
                sig += s[(u, t)].norm_sqr();
            }
            let g = (sig / l as f64) / (err / l as f64 + [0.3, 0.7][u]);
            assert!((got.sinr[u] / g - 1.0).abs() < 1e-12);
            assert!((got.rate[u] - (1.0 + g).log2()).abs() < 1e-12);
        }
        let mut mse = 0.0;
        for a in 0..n {
            for t in 0..l {
                let v: C64 = (0..k).map(|j| p[(a, j)] * s[(j, t)]).sum();
                mse += (v - x0[(a, t)]).norm_sqr();
            }
        }
        assert!((got.mse - mse / l as f64).abs() < 1e-12);
        assert!(isac_metrics(&h, &p, &s, &rand_mat(n, l + 1, &mut rng), &[0.3, 0.7]).is_err());
    }

    #[test]
    fn isac_mse_scales_quadratically() {
        let mut rng = Rng::new(4);
        let p = rand_mat(2, 1, &mut rng);
        let s = rand_mat(1, 3, &mut rng);
        let x0 = rand_mat(2, 3, &mut rng);
        let h = rand_mat(1, 2, &mut rng);
        let base = isac_metrics(&h, &p, &s, &x0, &[1.0]).unwrap().mse;
        let t = 2.5;
        let ps = p.matmul(&s);
        let x0t = ps.sub(&ps.sub(&x0).scale_real(t));
        let scaled = isac_metrics(&h, &p, &s, &x0t, &[1.0]).unwrap().mse;
        assert!((scaled - t * t * base).abs() < 1e-12 * scaled);
    }

    #[test]
    fn jcac_rate_cases() {
        let h = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(1.0, 1.0), C64::new(0.5, 0.0)];
        let comm_only = ScheduleMatrix::from_assignment(4, &[0, 1]).unwrap();
        let (rc, rm) = jcac_rates(&h, &comm_only, 2, &[1.0, 1.0], 1.0).unwrap();
        assert_eq!(rm, 0.0);
        assert!(rc > 0.0);
        let split = ScheduleMatrix::from_assignment(4, &[0, 1]).unwrap();
        let (a, b) = jcac_rates(&h, &split, 1, &[2.0, 2.0], 1.0).unwrap();
        assert_eq!(a, b);
        let sched = ScheduleMatrix::from_assignment(4, &[2, 0, 3]).unwrap();
        let p = [0.3, 1.1, 0.6];
        let (rc, rm) = jcac_rates(&h, &sched, 1, &p, 0.5).unwrap();
        let c_part = ScheduleMatrix::from_assignment(4, &[2]).unwrap();
        let m_part = ScheduleMatrix::from_assignment(4, &[0, 3]).unwrap();
        assert!((rc - ofdma_rate(&h, &c_part, &p[..1], 0.5).unwrap()).abs() < 1e-15);
        assert!((rm - ofdma_rate(&h, &m_part, &p[1..], 0.5).unwrap()).abs() < 1e-15);
        let overlap = ScheduleMatrix::from_assignment(4, &[1, 1]).unwrap();
        assert!(jcac_rates(&h, &overlap, 1, &[1.0, 1.0], 1.0).is_err());
    }

    fn jp(l: f64) -> JcacParams {
        JcacParams { capacitance: 1.0, cycles_per_bit: 1.0, task_bits: 4.0, local_bits: l, latency: 1.0, symbol_time: 0.1 }
    }

    #[test]
    fn jcac_energy_cases() {
        assert_eq!(jcac_energy(&[jp(0.0)], &[vec![0.0, 0.0]]).unwrap(), 0.0);
        assert_eq!(jcac_energy(&[jp(2.0)], &[vec![0.0]]).unwrap(), 8.0);
        let mut rng = Rng::new(5);
        let params: Vec<JcacParams> = (0..3)
            .map(|_| JcacParams {
                capacitance: rng.uniform_range(0.1, 2.0),
                cycles_per_bit: rng.uniform_range(0.5, 3.0),
                task_bits: 10.0,
                local_bits: rng.uniform_range(0.0, 10.0),
                latency: rng.uniform_range(0.5, 2.0),
                symbol_time: rng.uniform_range(0.01, 0.1),
            })
            .collect();
        let powers: Vec<Vec<f64>> = (0..3).map(|_| (0..2).map(|_| rng.uniform()).collect()).collect();
        let mut want = 0.0;
        for (p, pw) in params.iter().zip(&powers) {
            want += p.capacitance * p.cycles_per_bit.powi(3) * p.local_bits.powi(3) / p.latency.powi(2);
            for x in pw {
                want += x * p.symbol_time;
            }
        }
        assert!((jcac_energy(&params, &powers).unwrap() - want).abs() < 1e-12 * want);
        assert!(jcac_energy(&[jp(5.0)], &[vec![0.0]]).is_err());
    }

    #[test]
    fn aero_power_at_hover_and_growth() {
        let p = UavPowerParams::default();
        let hover = uav_aero_power(&[0.0, 0.0], &p).unwrap();
        assert!((hover - (p.w_u * p.c1 + p.c2 * p.v_tip.powi(3))).abs() < 1e-12 * hover);
        let only_cubic = UavPowerParams { w_u: 0.0, c2: 0.0, ..p };
        let mut last = -1.0;
        for s in [0.0, 1.0, 5.0, 10.0, 30.0] {
            let v = uav_aero_power(&[s, 0.0], &only_cubic).unwrap();
            assert!(v > last);
            last = v;
        }
        let mut rng = Rng::new(6);
        for _ in 0..20 {
            let v = [rng.uniform_range(-20.0, 20.0), rng.uniform_range(-20.0, 20.0)];
            let s = (v[0] * v[0] + v[1] * v[1]).sqrt();
            let t1 = 2f64.sqrt() * p.w_u * p.c1.powi(2) / (s.powi(2) + (s.powi(4) + 4.0 * p.c1.powi(4)).sqrt()).sqrt();
            let t2 = p.c2 * p.v_tip.powi(3) * (1.0 + p.c3 * (s / p.v_tip).powi(2));
            let t3 = p.c4 * s.powi(3);
            assert!((uav_aero_power(&v, &p).unwrap() - (t1 + t2 + t3)).abs() < 1e-10);
        }
    }
}
