use crate::channels::MfaCandidateSet;
use crate::error::{Error, Result};
use crate::metrics::{JcacParams, UavPowerParams};
use crate::numerics::{CMatrix, C64};

fn dim(msg: impl Into<String>) -> Error {
    Error::Dimension(msg.into())
}

fn check_len<T>(v: &[T], n: usize, what: &str) -> Result<()> {
    if v.len() != n {
        return Err(dim(format!("{what} has {} entries, expected {n}", v.len())));
    }
    Ok(())
}

fn check_rows(m: &[Vec<C64>], rows: usize, cols: usize, what: &str) -> Result<()> {
    check_len(m, rows, what)?;
    if m.iter().any(|r| r.len() != cols) {
        return Err(dim(format!("every row of {what} must have {cols} entries")));
    }
    Ok(())
}

fn check_noise(s: &[f64]) -> Result<()> {
    if let Some(v) = s.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidInput(format!("noise power {v} must be positive")));
    }
    Ok(())
}

fn check_nonneg(v: f64, what: &str) -> Result<()> {
    if !(v >= 0.0) {
        return Err(Error::InvalidInput(format!("{what} = {v} must be >= 0")));
    }
    Ok(())
}

/// Multi-subcarrier downlink NOMA with one subcarrier per user.
#[derive(Debug, Clone, PartialEq)]
pub struct NomaScenario {
    /// `h[k][m]`: gain of user k on subcarrier m.
    pub h: Vec<Vec<C64>>,
    pub sigmas: Vec<f64>,
    pub p_max: f64,
    pub r_min: Vec<f64>,
}

impl NomaScenario {
    pub fn users(&self) -> usize {
        self.h.len()
    }

    pub fn subcarriers(&self) -> usize {
        self.h.first().map_or(0, |r| r.len())
    }

    pub fn validate(&self) -> Result<()> {
        let (k, m) = (self.users(), self.subcarriers());
        if k == 0 || m == 0 {
            return Err(dim("NOMA scenario needs at least one user and subcarrier"));
        }
        check_rows(&self.h, k, m, "NOMA channel")?;
        check_len(&self.sigmas, k, "noise list")?;
        check_len(&self.r_min, k, "rate targets")?;
        check_noise(&self.sigmas)?;
        check_nonneg(self.p_max, "P_max")
    }
}

/// OFDMA uplink power minimisation; user k sends `streams[k]` streams.
#[derive(Debug, Clone, PartialEq)]
pub struct OfdmaScenario {
    pub h: Vec<Vec<C64>>,
    pub streams: Vec<usize>,
    pub sigma2: f64,
    pub p_max: Vec<f64>,
    pub r_min: Vec<f64>,
}

impl OfdmaScenario {
    pub fn users(&self) -> usize {
        self.h.len()
    }

    pub fn subcarriers(&self) -> usize {
        self.h.first().map_or(0, |r| r.len())
    }

    /// First stream index of each user in the flat power vector.
    pub fn stream_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.streams
            .iter()
            .map(|d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }

    pub fn total_streams(&self) -> usize {
        self.streams.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let (k, m) = (self.users(), self.subcarriers());
        if k == 0 || m == 0 {
            return Err(dim("OFDMA scenario needs at least one user and subcarrier"));
        }
        check_rows(&self.h, k, m, "OFDMA channel")?;
        check_len(&self.streams, k, "stream counts")?;
        check_len(&self.p_max, k, "power budgets")?;
        check_len(&self.r_min, k, "rate targets")?;
        check_noise(&[self.sigma2])?;
        for &p in &self.p_max {
            check_nonneg(p, "P_k,max")?;
        }
        Ok(())
    }
}

/// Robust single-layer RSMA with bounded channel errors.
#[derive(Debug, Clone, PartialEq)]
pub struct RsmaScenario {
    pub h_hat: Vec<Vec<C64>>,
    pub delta: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub p_max: f64,
    pub r_min: Vec<f64>,
}

impl RsmaScenario {
    pub fn users(&self) -> usize {
        self.h_hat.len()
    }

    pub fn antennas(&self) -> usize {
        self.h_hat.first().map_or(0, |r| r.len())
    }

    pub fn validate(&self) -> Result<()> {
        let (k, n) = (self.users(), self.antennas());
        if k == 0 || n == 0 {
            return Err(dim("RSMA scenario needs at least one user and antenna"));
        }
        check_rows(&self.h_hat, k, n, "channel estimates")?;
        check_len(&self.delta, k, "error radii")?;
        check_len(&self.sigmas, k, "noise list")?;
        check_len(&self.r_min, k, "rate targets")?;
        check_noise(&self.sigmas)?;
        for &d in &self.delta {
            check_nonneg(d, "delta")?;
        }
        check_nonneg(self.p_max, "P_max")
    }
}

/// Feasible IRS phase values in radians.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseSet {
    Continuous,
    Discrete(Vec<f64>),
}

impl PhaseSet {
    /// {0, 2π/2^b, …} for a b-bit shifter.
    pub fn uniform_bits(bits: u32) -> Self {
        let n = 1usize << bits;
        PhaseSet::Discrete((0..n).map(|i| 2.0 * std::f64::consts::PI * i as f64 / n as f64).collect())
    }
}

/// IRS-assisted multi-antenna NOMA downlink.
#[derive(Debug, Clone, PartialEq)]
pub struct IrsScenario {
    /// BS-user links, K×N.
    pub h_d: Vec<Vec<C64>>,
    /// BS-IRS link, N×M.
    pub f: CMatrix,
    /// IRS-user links, K×M.
    pub h_r: Vec<Vec<C64>>,
    pub sigmas: Vec<f64>,
    pub p_max: f64,
    pub phases: PhaseSet,
}

impl IrsScenario {
    pub fn users(&self) -> usize {
        self.h_d.len()
    }

    pub fn antennas(&self) -> usize {
        self.f.rows()
    }

    pub fn elements(&self) -> usize {
        self.f.cols()
    }

    pub fn validate(&self) -> Result<()> {
        let (k, n, m) = (self.users(), self.antennas(), self.elements());
        if k == 0 || n == 0 {
            return Err(dim("IRS scenario needs at least one user and antenna"));
        }
        check_rows(&self.h_d, k, n, "direct links")?;
        check_rows(&self.h_r, k, m, "reflected links")?;
        check_len(&self.sigmas, k, "noise list")?;
        check_noise(&self.sigmas)?;
        if let PhaseSet::Discrete(c) = &self.phases {
            if c.is_empty() || c.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput("phase codebook must be non-empty and finite".into()));
            }
        }
        check_nonneg(self.p_max, "P_max")
    }
}

/// One time slot of a rotary-wing UAV serving ground users at fixed altitude.
#[derive(Debug, Clone, PartialEq)]
pub struct UavScenario {
    pub users: Vec<[f64; 3]>,
    pub altitude: f64,
    pub r0_prev: [f64; 2],
    pub v_prev: [f64; 2],
    pub fc: f64,
    /// UPA (N_x, N_y, spacing in meters).
    pub array: (usize, usize, f64),
    pub sigmas: Vec<f64>,
    pub gamma_req: Vec<f64>,
    /// Per-antenna power limits P_i.
    pub p_antenna: Vec<f64>,
    pub a_max: f64,
    pub delta_t: f64,
    pub power: UavPowerParams,
}

impl UavScenario {
    pub fn antennas(&self) -> usize {
        self.array.0 * self.array.1
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.users.len();
        if k == 0 || self.antennas() == 0 {
            return Err(dim("UAV scenario needs at least one user and antenna"));
        }
        check_len(&self.sigmas, k, "noise list")?;
        check_len(&self.gamma_req, k, "SINR targets")?;
        check_len(&self.p_antenna, self.antennas(), "per-antenna limits")?;
        check_noise(&self.sigmas)?;
        if !(self.altitude > 0.0 && self.fc > 0.0 && self.delta_t > 0.0) {
            return Err(Error::InvalidInput("altitude, carrier and slot length must be positive".into()));
        }
        check_nonneg(self.a_max, "a_max")?;
        self.power.validate()
    }
}

/// Movable-antenna downlink: N elements each pick one of their candidate positions.
#[derive(Debug, Clone)]
pub struct MfaScenario {
    pub candidates: Vec<MfaCandidateSet>,
    pub sigmas: Vec<f64>,
    pub gamma_req: Vec<f64>,
}

impl MfaScenario {
    pub fn users(&self) -> usize {
        self.candidates.first().map_or(0, |c| c.bank.rows())
    }

    pub fn elements(&self) -> usize {
        self.candidates.len()
    }

    pub fn total_positions(&self) -> usize {
        self.candidates.iter().map(|c| c.q()).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.users();
        if k == 0 || self.candidates.is_empty() {
            return Err(dim("M/FA scenario needs at least one user and element"));
        }
        if self.candidates.iter().any(|c| c.bank.rows() != k || c.q() == 0) {
            return Err(dim("candidate banks disagree on user count or are empty"));
        }
        check_len(&self.sigmas, k, "noise list")?;
        check_len(&self.gamma_req, k, "SINR targets")?;
        check_noise(&self.sigmas)
    }
}

/// Communication-centric ISAC with a beampattern-similarity budget.
#[derive(Debug, Clone, PartialEq)]
pub struct IsacScenario {
    /// K×N.
    pub h_c: CMatrix,
    /// K×L unit-power symbols.
    pub s: CMatrix,
    /// N×L desired radar waveform.
    pub x0: CMatrix,
    pub sigmas: Vec<f64>,
    pub p_max: f64,
    /// MSE budget δ; infinity removes the sensing constraint.
    pub delta: f64,
}

impl IsacScenario {
    pub fn validate(&self) -> Result<()> {
        let (k, n, l) = (self.h_c.rows(), self.h_c.cols(), self.s.cols());
        if k == 0 || n == 0 || l == 0 {
            return Err(dim("ISAC scenario needs K, N, L >= 1"));
        }
        if self.s.rows() != k || self.x0.rows() != n || self.x0.cols() != l {
            return Err(dim("ISAC symbol or target matrix does not match H_C"));
        }
        check_len(&self.sigmas, k, "noise list")?;
        check_noise(&self.sigmas)?;
        check_nonneg(self.p_max, "P_max")?;
        check_nonneg(self.delta, "delta")
    }
}

/// JCAC energy minimisation; user k sends `d_c[k]` information and `d_mec[k]` task symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct JcacScenario {
    pub h: Vec<Vec<C64>>,
    pub d_c: Vec<usize>,
    pub d_mec: Vec<usize>,
    pub sigma2: f64,
    /// `local_bits` is ignored; L_k is a decision variable.
    pub params: Vec<JcacParams>,
    pub r_min: Vec<f64>,
}

impl JcacScenario {
    pub fn users(&self) -> usize {
        self.h.len()
    }

    pub fn subcarriers(&self) -> usize {
        self.h.first().map_or(0, |r| r.len())
    }

    pub fn d_tot(&self, k: usize) -> usize {
        self.d_c[k] + self.d_mec[k]
    }

    pub fn symbol_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        (0..self.users())
            .map(|k| {
                let o = acc;
                acc += self.d_tot(k);
                o
            })
            .collect()
    }

    pub fn total_symbols(&self) -> usize {
        (0..self.users()).map(|k| self.d_tot(k)).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let (k, m) = (self.users(), self.subcarriers());
        if k == 0 || m == 0 {
            return Err(dim("JCAC scenario needs at least one user and subcarrier"));
        }
        check_rows(&self.h, k, m, "JCAC channel")?;
        check_len(&self.d_c, k, "information symbol counts")?;
        check_len(&self.d_mec, k, "task symbol counts")?;
        check_len(&self.params, k, "computing parameters")?;
        check_len(&self.r_min, k, "rate targets")?;
        check_noise(&[self.sigma2])?;
        for p in &self.params {
            JcacParams { local_bits: 0.0, ..*p }.validate()?;
        }
        Ok(())
    }
}
