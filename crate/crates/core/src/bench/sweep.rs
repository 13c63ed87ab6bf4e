//! Paired Monte-Carlo sweeps over the power budget and their CSV report.

use super::config::{ScenarioConfig, Scheme};
use super::draw::{draw_realization, Realization};
use super::schemes::{run_scheme, TrialChannels};
use crate::error::{Error, Result};
use crate::numerics::Rng;
use rayon::prelude::*;
use std::fmt::Write;

const CHANNEL_STREAM: u64 = 0xc4a7;
const TRUTH_STREAM: u64 = 0x7e57;

pub const CSV_HEADER: &str = "scheme,p_max_dbm,trial,sum_rate_bits_s_hz,status,iterations,runtime_ms,gap";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub p_max_dbm: f64,
    pub trial: usize,
    pub sum_rate: f64,
    pub status: String,
    pub iterations: usize,
    pub runtime_ms: f64,
    pub gap: Option<f64>,
    /// Worst-case objective in robust runs.
    pub bound: Option<f64>,
    /// Fingerprint of the estimated channels seen by this row.
    pub channel_hash: u64,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub config: ScenarioConfig,
    /// Ordered by (scheme, power, trial).
    pub rows: Vec<SweepRow>,
    /// True when some row failed.
    pub partial: bool,
}

/// Formats with `digits` significant digits, trimming trailing zeros.
pub fn format_sig(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let fixed = format!("{:.*}", decimals, mantissa.parse::<f64>().expect("mantissa") * 10f64.powi(exp));
        let fixed = format!("{:.*}", decimals, fixed.parse::<f64>().expect("fixed"));
        trim(&fixed)
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s.to_string() }
}

impl SweepReport {
    /// CSV text; `timing` fills the runtime column, which is otherwise empty so output stays reproducible.
    pub fn to_csv(&self, timing: bool) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let runtime = if timing { format_sig(r.runtime_ms, 9) } else { String::new() };
            let gap = r.gap.map(|g| format_sig(g, 9)).unwrap_or_default();
            let rate = if r.sum_rate.is_nan() { String::new() } else { format_sig(r.sum_rate, 9) };
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.scheme.name(),
                format_sig(r.p_max_dbm, 9),
                r.trial,
                rate,
                r.status,
                r.iterations,
                runtime,
                gap
            )
            .expect("writing to a string");
        }
        out
    }

    pub fn rows_for(&self, scheme: Scheme, p_idx: usize) -> impl Iterator<Item = &SweepRow> {
        let p = self.config.p_max_dbm_list[p_idx];
        self.rows.iter().filter(move |r| r.scheme == scheme && r.p_max_dbm == p)
    }

    /// Mean sum rate over successful trials.
    pub fn mean(&self, scheme: Scheme, p_idx: usize) -> f64 {
        let v: Vec<f64> = self.rows_for(scheme, p_idx).map(|r| r.sum_rate).filter(|v| !v.is_nan()).collect();
        v.iter().sum::<f64>() / v.len() as f64
    }

    pub fn row(&self, scheme: Scheme, p_idx: usize, trial: usize) -> Option<&SweepRow> {
        self.rows_for(scheme, p_idx).find(|r| r.trial == trial)
    }
}

/// Estimated channels of one trial; identical for every scheme and power point.
pub fn trial_realization(cfg: &ScenarioConfig, trial: usize) -> Result<Realization> {
    draw_realization(cfg, &mut Rng::for_stream(cfg.seed, &[CHANNEL_STREAM, trial as u64]))
}

fn sweep(cfg: &ScenarioConfig, upsilon2: Option<f64>, jobs: Option<usize>) -> Result<SweepReport> {
    cfg.validate()?;
    let trial_rows = |trial: usize| -> Result<Vec<SweepRow>> {
        let estimate = trial_realization(cfg, trial)?;
        let truth = match upsilon2 {
            Some(u) if u > 0.0 => Some((estimate.perturbed(u, &mut Rng::for_stream(cfg.seed, &[TRUTH_STREAM, trial as u64]))?, u)),
            _ => None,
        };
        let hash = estimate.fingerprint();
        let ch = TrialChannels { estimate, truth };
        let mut rows = Vec::new();
        for &scheme in &cfg.schemes {
            for (p_idx, &p) in cfg.p_max_dbm_list.iter().enumerate() {
                let r = run_scheme(cfg, scheme, p_idx, trial, &ch);
                rows.push(SweepRow {
                    scheme,
                    p_max_dbm: p,
                    trial,
                    sum_rate: r.sum_rate,
                    status: r.status,
                    iterations: r.iterations,
                    runtime_ms: r.runtime_ms,
                    gap: r.gap,
                    bound: r.bound,
                    channel_hash: hash,
                });
            }
        }
        Ok(rows)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
    let per_trial: Vec<Vec<SweepRow>> = pool.install(|| (0..cfg.trials).into_par_iter().map(trial_rows).collect::<Result<_>>())?;
    let mut rows: Vec<SweepRow> = per_trial.into_iter().flatten().collect();
    let p_index = |p: f64| cfg.p_max_dbm_list.iter().position(|&q| q == p).unwrap_or(usize::MAX);
    rows.sort_by(|a, b| (a.scheme, p_index(a.p_max_dbm), a.trial).cmp(&(b.scheme, p_index(b.p_max_dbm), b.trial)));
    let partial = rows.iter().any(|r| r.status == "error");
    Ok(SweepReport { config: cfg.clone(), rows, partial })
}

/// Perfect-CSI sweep; the uncertainty setting is ignored. `jobs = None` uses every core.
pub fn run_fig10_sweep(cfg: &ScenarioConfig, jobs: Option<usize>) -> Result<SweepReport> {
    sweep(cfg, None, jobs)
}

/// Robust sweep: schemes optimise the worst-case bound and rows report the rate at the true channel.
pub fn run_robust_variant(cfg: &ScenarioConfig, jobs: Option<usize>) -> Result<SweepReport> {
    let u = cfg.upsilon2();
    if !(0.0..1.0).contains(&u) {
        return Err(Error::InvalidInput(format!("υ² must lie in [0, 1), got {u}")));
    }
    sweep(cfg, Some(u), jobs)
}

/// Robust variant when the configuration asks for one, otherwise the perfect-CSI sweep.
pub fn run_configured_sweep(cfg: &ScenarioConfig, jobs: Option<usize>) -> Result<SweepReport> {
    if cfg.uncertainty_pct > 0.0 { run_robust_variant(cfg, jobs) } else { run_fig10_sweep(cfg, jobs) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ScenarioConfig {
        ScenarioConfig { trials: 3, k_users: 2, m_irs: 3, p_max_dbm_list: vec![10.0, 30.0], ..ScenarioConfig::preset("fig10-desk").unwrap() }
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(20.0, 9), "20");
        assert_eq!(format_sig(12.3456789012, 9), "12.3456789");
        assert_eq!(format_sig(-0.000123456789012, 9), "-0.000123456789");
        assert_eq!(format_sig(1.5e-9, 9), "1.5e-9");
        assert_eq!(format_sig(123456789012.0, 9), "1.23456789e11");
        assert_eq!(format_sig(0.0, 9), "0");
    }

    #[test]
    fn one_row_per_scheme_power_trial() {
        let cfg = ScenarioConfig { trials: 1, schemes: vec![Scheme::Baseline3], ..small() };
        let rep = run_fig10_sweep(&cfg, Some(1)).unwrap();
        assert_eq!(rep.rows.len(), 2);
        let csv = rep.to_csv(false);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("baseline3,10,0,"));
        assert!(lines[1].ends_with(",,"));
    }

    #[test]
    fn paired_channels_and_job_independence() {
        let cfg = small();
        let a = run_fig10_sweep(&cfg, Some(1)).unwrap();
        let b = run_fig10_sweep(&cfg, Some(3)).unwrap();
        assert_eq!(a.to_csv(false), b.to_csv(false));
        for r in &a.rows {
            assert_eq!(r.channel_hash, a.row(Scheme::Optimal, 0, r.trial).unwrap().channel_hash);
        }
        assert!(!a.partial);
    }

    #[test]
    fn zero_uncertainty_matches_perfect_csi() {
        let cfg = small();
        let robust = run_robust_variant(&cfg, Some(1)).unwrap();
        assert_eq!(robust.to_csv(false), run_fig10_sweep(&cfg, Some(1)).unwrap().to_csv(false));
    }

    #[test]
    fn robust_bound_is_sound_per_row() {
        let cfg = ScenarioConfig { uncertainty_pct: 10.0, ..small() };
        let rep = run_robust_variant(&cfg, Some(1)).unwrap();
        for r in &rep.rows {
            let b = r.bound.unwrap();
            assert!(b <= r.sum_rate + 1e-9, "{r:?}");
        }
    }
}
