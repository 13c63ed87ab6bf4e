//! Sweep configuration, compiled presets and the `key = value` format.

use crate::error::{Error, Result};
use std::fmt::Write;
use std::str::FromStr;

/// Benchmark schemes, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Optimal,
    Suboptimal,
    Baseline1,
    Baseline2,
    Baseline3,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [Scheme::Optimal, Scheme::Suboptimal, Scheme::Baseline1, Scheme::Baseline2, Scheme::Baseline3];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Optimal => "optimal",
            Scheme::Suboptimal => "suboptimal",
            Scheme::Baseline1 => "baseline1",
            Scheme::Baseline2 => "baseline2",
            Scheme::Baseline3 => "baseline3",
        }
    }

    /// Stable stream identifier for seeding.
    pub fn id(self) -> u64 {
        self as u64 + 1
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Scheme::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            format!("unknown scheme {s:?}; expected one of optimal, suboptimal, baseline1, baseline2, baseline3")
        })
    }
}

/// Parses a comma-separated scheme list, dropping duplicates and keeping report order.
pub fn parse_schemes(text: &str) -> std::result::Result<Vec<Scheme>, String> {
    let mut out = text.split(',').map(|t| t.trim().parse()).collect::<std::result::Result<Vec<Scheme>, _>>()?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err("scheme list is empty".into());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n_antennas: usize,
    pub k_users: usize,
    pub m_irs: usize,
    pub cell_radius_m: f64,
    pub bs_irs_dist_m: f64,
    pub phase_bits: u32,
    pub pathloss_exp: f64,
    pub rician_k: f64,
    pub noise_dbm: f64,
    pub p_max_dbm_list: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// υ² in percent; 0 disables the robust variant.
    pub uncertainty_pct: f64,
    pub schemes: Vec<Scheme>,
    /// Recorded for completeness; half-wavelength arrays make rates independent of it.
    pub carrier_hz: f64,
    pub ref_gain_db: f64,
}

/// Inner radius of the user annulus.
pub const MIN_USER_RADIUS_M: f64 = 5.0;

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            n_antennas: 8,
            k_users: 4,
            m_irs: 16,
            cell_radius_m: 50.0,
            bs_irs_dist_m: 50.0,
            phase_bits: 2,
            pathloss_exp: 3.0,
            rician_k: 1.0,
            noise_dbm: -117.0,
            p_max_dbm_list: vec![20.0, 25.0, 30.0, 35.0],
            trials: 100,
            seed: 0,
            uncertainty_pct: 0.0,
            schemes: vec![Scheme::Suboptimal, Scheme::Baseline1, Scheme::Baseline2, Scheme::Baseline3],
            carrier_hz: 2e9,
            ref_gain_db: -30.0,
        }
    }
}

pub const PRESETS: [&str; 3] = ["fig10-full", "fig10-desk", "robust-desk"];

impl ScenarioConfig {
    pub fn preset(name: &str) -> Option<Self> {
        let base = Self::default();
        match name {
            "fig10-full" => Some(base),
            "fig10-desk" => Some(Self { k_users: 3, m_irs: 6, schemes: Scheme::ALL.to_vec(), ..base }),
            "robust-desk" => Some(Self { uncertainty_pct: 10.0, ..Self::preset("fig10-desk")? }),
            _ => None,
        }
    }

    /// υ² as a fraction.
    pub fn upsilon2(&self) -> f64 {
        self.uncertainty_pct / 100.0
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, message: String| Err(Error::Config { line: 0, key: key.into(), message });
        let positive = [
            ("cell_radius_m", self.cell_radius_m),
            ("bs_irs_dist_m", self.bs_irs_dist_m),
            ("pathloss_exp", self.pathloss_exp),
            ("carrier_hz", self.carrier_hz),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return bad(key, format!("must be positive and finite, got {v}"));
            }
        }
        if self.cell_radius_m <= MIN_USER_RADIUS_M {
            return bad("cell_radius_m", format!("must exceed the {MIN_USER_RADIUS_M} m inner radius"));
        }
        for (key, v) in [("n_antennas", self.n_antennas), ("k_users", self.k_users), ("m_irs", self.m_irs), ("trials", self.trials)] {
            if v == 0 {
                return bad(key, "must be at least 1".into());
            }
        }
        if self.k_users > 8 {
            return bad("k_users", format!("at most 8 users are supported, got {}", self.k_users));
        }
        if !(1..=8).contains(&self.phase_bits) {
            return bad("phase_bits", format!("must be in 1..=8, got {}", self.phase_bits));
        }
        if !(self.rician_k >= 0.0 && self.rician_k.is_finite()) {
            return bad("rician_k", format!("must be non-negative, got {}", self.rician_k));
        }
        for (key, v) in [("noise_dbm", self.noise_dbm), ("ref_gain_db", self.ref_gain_db)] {
            if !v.is_finite() {
                return bad(key, format!("must be finite, got {v}"));
            }
        }
        if self.p_max_dbm_list.is_empty() || self.p_max_dbm_list.iter().any(|v| !v.is_finite()) {
            return bad("p_max_dbm_list", "needs at least one finite value".into());
        }
        if !(0.0..100.0).contains(&self.uncertainty_pct) {
            return bad("uncertainty_pct", format!("must be in [0, 100), got {}", self.uncertainty_pct));
        }
        if self.schemes.is_empty() {
            return bad("schemes", "needs at least one scheme".into());
        }
        Ok(())
    }

    /// Canonical `key = value` text; parsing it reproduces `self`.
    pub fn serialize(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ");
        let mut out = String::new();
        let mut put = |k: &str, v: String| writeln!(out, "{k} = {v}").expect("writing to a string");
        put("n_antennas", self.n_antennas.to_string());
        put("k_users", self.k_users.to_string());
        put("m_irs", self.m_irs.to_string());
        put("cell_radius_m", format!("{:?}", self.cell_radius_m));
        put("bs_irs_dist_m", format!("{:?}", self.bs_irs_dist_m));
        put("phase_bits", self.phase_bits.to_string());
        put("pathloss_exp", format!("{:?}", self.pathloss_exp));
        put("rician_k", format!("{:?}", self.rician_k));
        put("noise_dbm", format!("{:?}", self.noise_dbm));
        put("p_max_dbm_list", list(&self.p_max_dbm_list));
        put("trials", self.trials.to_string());
        put("seed", self.seed.to_string());
        put("uncertainty_pct", format!("{:?}", self.uncertainty_pct));
        put("schemes", self.schemes.iter().map(|s| s.name()).collect::<Vec<_>>().join(", "));
        put("carrier_hz", format!("{:?}", self.carrier_hz));
        put("ref_gain_db", format!("{:?}", self.ref_gain_db));
        out
    }
}

/// Applies `key = value` lines from `text` on top of `base`.
///
/// `#` starts a comment. Unknown, duplicate and malformed keys fail with the line number.
pub fn parse_config(text: &str, base: ScenarioConfig) -> Result<ScenarioConfig> {
    let mut cfg = base;
    let mut seen: Vec<String> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |key: &str, message: String| Error::Config { line, key: key.into(), message };
        let (key, value) = content.split_once('=').ok_or_else(|| err(content, "expected `key = value`".into()))?;
        let (key, value) = (key.trim(), value.trim());
        if seen.iter().any(|k| k == key) {
            return Err(err(key, "duplicate key".into()));
        }
        seen.push(key.to_string());
        fn num<T: FromStr>(v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("cannot parse {v:?} as {}", std::any::type_name::<T>()))
        }
        let res: std::result::Result<(), String> = (|| {
            match key {
                "n_antennas" => cfg.n_antennas = num(value)?,
                "k_users" => cfg.k_users = num(value)?,
                "m_irs" => cfg.m_irs = num(value)?,
                "cell_radius_m" => cfg.cell_radius_m = num(value)?,
                "bs_irs_dist_m" => cfg.bs_irs_dist_m = num(value)?,
                "phase_bits" => cfg.phase_bits = num(value)?,
                "pathloss_exp" => cfg.pathloss_exp = num(value)?,
                "rician_k" => cfg.rician_k = num(value)?,
                "noise_dbm" => cfg.noise_dbm = num(value)?,
                "p_max_dbm_list" => cfg.p_max_dbm_list = value.split(',').map(|t| num(t.trim())).collect::<std::result::Result<_, _>>()?,
                "trials" => cfg.trials = num(value)?,
                "seed" => cfg.seed = num(value)?,
                "uncertainty_pct" => cfg.uncertainty_pct = num(value)?,
                "schemes" => cfg.schemes = parse_schemes(value)?,
                "carrier_hz" => cfg.carrier_hz = num(value)?,
                "ref_gain_db" => cfg.ref_gain_db = num(value)?,
                _ => return Err("unknown key".into()),
            }
            Ok(())
        })();
        res.map_err(|m| err(key, m))?;
    }
    cfg.validate().map_err(|e| match e {
        Error::Config { key, message, .. } => {
            let line = text
                .lines()
                .position(|l| l.split('#').next().unwrap_or("").split_once('=').is_some_and(|(k, _)| k.trim() == key))
                .map_or(0, |p| p + 1);
            Error::Config { line, key, message }
        }
        e => e,
    })?;
    Ok(cfg)
}
