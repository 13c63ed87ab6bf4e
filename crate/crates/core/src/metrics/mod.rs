//! Closed-form rate, SINR, MSE and energy metrics. All logarithms are base 2.

mod functional;
mod natural;
mod reconfig;
mod sic;

pub use functional::{
    isac_metrics, jcac_energy, jcac_rates, uav_aero_power, IsacMetrics, JcacParams, UavPowerParams,
};
pub use natural::{
    ddma_rate, noma_rates, noma_subcarrier_rates, ofdma_rate, ofdma_rate_over, rsma_rates, worst_case_rsma_rates, RsmaAlloc,
    RsmaRates, ScheduleMatrix, WorstCaseRsma,
};
pub use reconfig::{irs_channels, irs_sinr, mfa_sinr, sinr_with_alpha, uav_sinr};
pub use sic::SicOrder;

/// log2(1 + x).
pub fn rate(sinr: f64) -> f64 {
    sinr.ln_1p() / std::f64::consts::LN_2
}
