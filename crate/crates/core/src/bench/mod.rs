//! Monte-Carlo harness for IRS-assisted NOMA: five schemes over a power sweep, emitting CSV.

mod config;
mod draw;
mod presets;
mod schemes;
mod sweep;

pub use config::{parse_config, parse_schemes, ScenarioConfig, Scheme, MIN_USER_RADIUS_M, PRESETS};
pub use draw::{draw_realization, Realization, MIN_LINK_M};
pub use presets::{oracle_default, problem_preset, solve_default, PROBLEM_PRESETS};
pub use schemes::{design, run_scheme, scenario_deltas, Design, SchemeResult, TrialChannels};
pub use sweep::{
    format_sig, run_configured_sweep, run_fig10_sweep, run_robust_variant, trial_realization, SweepReport, SweepRow, CSV_HEADER,
};
