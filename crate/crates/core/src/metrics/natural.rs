use super::{rate, SicOrder};
use crate::error::{Error, Result};
use crate::numerics::{complex_logdet_hpd, vdot, vnorm, CMatrix, C64};

/// Binary M×D matrix mapping data streams (columns) to resource elements (rows).
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

impl ScheduleMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![0; rows * cols] }
    }

    /// Stream d placed on subcarrier `assignment[d]`.
    pub fn from_assignment(rows: usize, assignment: &[usize]) -> Result<Self> {
        let mut s = Self::zeros(rows, assignment.len());
        for (d, &m) in assignment.iter().enumerate() {
            if m >= rows {
                return Err(Error::InvalidInput(format!("stream {d} assigned to subcarrier {m} of {rows}")));
            }
            s.set(m, d, true);
        }
        Ok(s)
    }

    /// Rounds entries of a 0/1-valued real matrix; anything else is rejected.
    pub fn from_values(rows: usize, cols: usize, vals: &[f64]) -> Result<Self> {
        if vals.len() != rows * cols {
            return Err(Error::Dimension(format!("schedule needs {} entries", rows * cols)));
        }
        let mut s = Self::zeros(rows, cols);
        for (i, &v) in vals.iter().enumerate() {
            if (v - 1.0).abs() <= 1e-9 {
                s.entries[i] = 1;
            } else if v.abs() > 1e-9 {
                return Err(Error::InvalidInput(format!("schedule entry {v} is not binary")));
            }
        }
        Ok(s)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, m: usize, d: usize) -> bool {
        self.entries[m * self.cols + d] == 1
    }

    pub fn set(&mut self, m: usize, d: usize, on: bool) {
        self.entries[m * self.cols + d] = on as u8;
    }

    pub fn col_sum(&self, d: usize) -> usize {
        (0..self.rows).filter(|&m| self.get(m, d)).count()
    }

    pub fn row_sum(&self, m: usize) -> usize {
        (0..self.cols).filter(|&d| self.get(m, d)).count()
    }
}

fn check_powers(p: &[f64]) -> Result<()> {
    if let Some(v) = p.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidInput(format!("power {v} must be finite and >= 0")));
    }
    Ok(())
}

fn check_noise(s: f64) -> Result<()> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidInput(format!("noise power {s} must be positive")));
    }
    Ok(())
}

/// Σ_{d∈cols, m} Π_md·log2(1 + |H_mm|²p_d/σ²) without schedule validation; unassigned streams add nothing.
pub fn ofdma_rate_over(h_diag: &[C64], pi: &ScheduleMatrix, p: &[f64], sigma2: f64, cols: std::ops::Range<usize>) -> f64 {
    let mut r = 0.0;
    for d in cols {
        for m in 0..pi.rows() {
            if pi.get(m, d) {
                r += rate(h_diag[m].norm_sqr() * p[d] / sigma2);
            }
        }
    }
    r
}

/// R_k = Σ_{d,m} Π_md·log2(1 + |H_mm|²p_d/σ²). Every stream must occupy exactly one subcarrier.
pub fn ofdma_rate(h_diag: &[C64], pi: &ScheduleMatrix, p: &[f64], sigma2: f64) -> Result<f64> {
    if pi.rows() != h_diag.len() || pi.cols() != p.len() {
        return Err(Error::Dimension(format!(
            "schedule {}x{} for {} subcarriers and {} streams",
            pi.rows(),
            pi.cols(),
            h_diag.len(),
            p.len()
        )));
    }
    check_powers(p)?;
    check_noise(sigma2)?;
    if let Some(d) = (0..pi.cols()).find(|&d| pi.col_sum(d) != 1) {
        return Err(Error::InvalidInput(format!("stream {d} occupies {} subcarriers", pi.col_sum(d))));
    }
    Ok(ofdma_rate_over(h_diag, pi, p, sigma2, 0..pi.cols()))
}

/// Per-user NOMA rates on one subcarrier.
///
/// User k is interfered by every user decoded after it:
/// R_k = log2(1 + g_k·p_k / (g_k·Σ_{later} p + σ_k²)).
pub fn noma_subcarrier_rates(gains: &[f64], powers: &[f64], sigmas: &[f64], order: &SicOrder) -> Result<Vec<f64>> {
    let k = gains.len();
    if k == 0 {
        return Err(Error::InvalidInput("no users scheduled".into()));
    }
    if powers.len() != k || sigmas.len() != k || order.len() != k {
        return Err(Error::Dimension("gains, powers, noise and order lengths differ".into()));
    }
    check_powers(powers)?;
    for &s in sigmas {
        check_noise(s)?;
    }
    let seq = order.sequence();
    let mut out = vec![0.0; k];
    let mut later = 0.0;
    for &u in seq.iter().rev() {
        out[u] = rate(gains[u] * powers[u] / (gains[u] * later + sigmas[u]));
        later += powers[u];
    }
    Ok(out)
}

/// Multi-subcarrier downlink NOMA: `h[k][m]` is user k's gain on subcarrier m and
/// `pi` is M×K. Users sharing a subcarrier are ordered by gain there.
pub fn noma_rates(h: &[Vec<C64>], pi: &ScheduleMatrix, powers: &[f64], sigmas: &[f64]) -> Result<Vec<f64>> {
    let k = h.len();
    let m = pi.rows();
    if pi.cols() != k || powers.len() != k || sigmas.len() != k || h.iter().any(|r| r.len() != m) {
        return Err(Error::Dimension("NOMA gains, schedule, powers and noise disagree".into()));
    }
    let mut out = vec![0.0; k];
    for sc in 0..m {
        let users: Vec<usize> = (0..k).filter(|&u| pi.get(sc, u)).collect();
        if users.is_empty() {
            continue;
        }
        let g: Vec<f64> = users.iter().map(|&u| h[u][sc].norm_sqr()).collect();
        let p: Vec<f64> = users.iter().map(|&u| powers[u]).collect();
        let s: Vec<f64> = users.iter().map(|&u| sigmas[u]).collect();
        let r = noma_subcarrier_rates(&g, &p, &s, &SicOrder::by_gain(&g))?;
        for (i, &u) in users.iter().enumerate() {
            out[u] += r[i];
        }
    }
    Ok(out)
}

/// Uplink DDMA rate of user k; users must be indexed by descending received power.
///
/// R_k = log2 det(I + p_k/(I_k + σ²)·Π_k^H H_k^H H_k Π_k), I_k = (1/Ñ)·Σ_{k'>k} p_k'·‖H_k'Π_k'‖_F².
pub fn ddma_rate(k: usize, hs: &[CMatrix], pis: &[CMatrix], powers: &[f64], sigma2: f64) -> Result<f64> {
    let users = hs.len();
    if pis.len() != users || powers.len() != users || k >= users {
        return Err(Error::Dimension("DDMA channel, indicator and power lists disagree".into()));
    }
    check_powers(powers)?;
    check_noise(sigma2)?;
    let mut eff = Vec::with_capacity(users);
    for (u, (h, pi)) in hs.iter().zip(pis).enumerate() {
        if !h.is_square() || h.cols() != pi.rows() {
            return Err(Error::Dimension(format!("user {u}: H is {}x{}, Π has {} rows", h.rows(), h.cols(), pi.rows())));
        }
        eff.push(h.matmul(pi));
    }
    let n = pis[k].cols();
    let received: Vec<f64> = eff.iter().zip(powers).map(|(e, p)| p * e.frobenius_norm().powi(2)).collect();
    for u in 1..users {
        if received[u] > received[u - 1] * (1.0 + 1e-12) + 1e-300 {
            return Err(Error::InvalidInput(format!(
                "users must be sorted by received power; user {u} exceeds user {}",
                u - 1
            )));
        }
    }
    let interference = received[k + 1..].iter().sum::<f64>() / n as f64;
    let gram = eff[k].adjoint().matmul(&eff[k]);
    let scale = powers[k] / (interference + sigma2);
    let m = CMatrix::identity(n).add(&gram.scale_real(scale)).hermitian_part();
    complex_logdet_hpd(&m)
}

/// Single-layer RSMA precoders and common-rate shares.
#[derive(Debug, Clone, PartialEq)]
pub struct RsmaAlloc {
    pub p_c: Vec<C64>,
    pub p_p: Vec<Vec<C64>>,
    pub c: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RsmaRates {
    pub r_c_k: Vec<f64>,
    pub r_p_k: Vec<f64>,
    /// min_k R_c,k.
    pub r_c: f64,
    /// R_p,k + C_k.
    pub r_k: Vec<f64>,
    /// R_c − ΣC_k; negative when the shares overdraw the common stream.
    pub budget_residual: f64,
}

fn check_rsma(h: &[Vec<C64>], alloc: &RsmaAlloc, sigmas: &[f64]) -> Result<usize> {
    let k = h.len();
    let n = alloc.p_c.len();
    if alloc.p_p.len() != k || alloc.c.len() != k || sigmas.len() != k {
        return Err(Error::Dimension(format!("RSMA allocation does not match {k} users")));
    }
    if h.iter().chain(alloc.p_p.iter()).any(|v| v.len() != n) {
        return Err(Error::Dimension(format!("RSMA vectors must have length {n}")));
    }
    for &s in sigmas {
        check_noise(s)?;
    }
    Ok(k)
}

/// Worst-case |h^H p|² over ‖Δ‖ ≤ δ: lower (signal) or upper (interference) bound.
fn bounded_power(h: &[C64], p: &[C64], delta: f64, signal: bool) -> f64 {
    let a = vdot(h, p);
    if delta == 0.0 {
        return a.norm_sqr();
    }
    let slack = delta * vnorm(p);
    if signal {
        (a.norm() - slack).max(0.0).powi(2)
    } else {
        (a.norm() + slack).powi(2)
    }
}

fn rsma_pair(h: &[Vec<C64>], delta: &[f64], alloc: &RsmaAlloc, sigmas: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let k = h.len();
    let mut r_c = vec![0.0; k];
    let mut r_p = vec![0.0; k];
    for u in 0..k {
        let interf: Vec<f64> = alloc.p_p.iter().map(|p| bounded_power(&h[u], p, delta[u], false)).collect();
        let total: f64 = interf.iter().sum();
        let common = bounded_power(&h[u], &alloc.p_c, delta[u], true);
        r_c[u] = rate(common / (total + sigmas[u]));
        let own = bounded_power(&h[u], &alloc.p_p[u], delta[u], true);
        r_p[u] = rate(own / (total - interf[u] + sigmas[u]));
    }
    (r_c, r_p)
}

/// Common and private RSMA rates with channel vectors h_k (received as h_k^H·x).
pub fn rsma_rates(h: &[Vec<C64>], alloc: &RsmaAlloc, sigmas: &[f64]) -> Result<RsmaRates> {
    let k = check_rsma(h, alloc, sigmas)?;
    let (r_c_k, r_p_k) = rsma_pair(h, &vec![0.0; k], alloc, sigmas);
    let r_c = r_c_k.iter().copied().fold(f64::INFINITY, f64::min);
    let r_c = if k == 0 { 0.0 } else { r_c };
    let r_k = r_p_k.iter().zip(&alloc.c).map(|(p, c)| p + c).collect();
    let budget_residual = r_c - alloc.c.iter().sum::<f64>();
    Ok(RsmaRates { r_c_k, r_p_k, r_c, r_k, budget_residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorstCaseRsma {
    pub r_c_k: Vec<f64>,
    pub r_p_k: Vec<f64>,
}

/// Lower bounds on the RSMA rates over ‖Δh_k‖ ≤ δ_k via Cauchy–Schwarz.
///
/// Signal power is bounded below by (|ĥ^H p| − δ‖p‖)₊², each interferer above by (|ĥ^H p| + δ‖p‖)².
/// With δ_k = 0 the nominal expressions are evaluated unchanged.
pub fn worst_case_rsma_rates(h_hat: &[Vec<C64>], delta: &[f64], alloc: &RsmaAlloc, sigmas: &[f64]) -> Result<WorstCaseRsma> {
    let k = check_rsma(h_hat, alloc, sigmas)?;
    if delta.len() != k {
        return Err(Error::Dimension("one uncertainty radius per user".into()));
    }
    if let Some(d) = delta.iter().find(|d| !(**d >= 0.0) || !d.is_finite()) {
        return Err(Error::InvalidInput(format!("uncertainty radius {d} must be >= 0")));
    }
    let (r_c_k, r_p_k) = rsma_pair(h_hat, delta, alloc, sigmas);
    Ok(WorstCaseRsma { r_c_k, r_p_k })
}
