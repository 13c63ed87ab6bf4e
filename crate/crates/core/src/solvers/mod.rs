//! Optimization procedures over [`ProblemInstance`](crate::problems::ProblemInstance)s.

mod bcd;
mod bnb;
mod convex;
mod exhaustive;
mod irs;
mod options;
mod polyblock;
mod sca;
mod sdr;

pub use convex::{solve_convex, ConvexProgram, ConvexSolution, Smooth, SmoothFn};
pub use options::SolverOptions;
pub use sdr::{sinr_power_problem, solve_sdr, solve_sdr_beamforming, SdrOutcome, SdrSolution, SinrPowerProblem};
pub use bnb::{ofdma_min_power, ofdma_point, solve_bnb, water_fill_min_power, BnbNode, BnbReport, NodeBound, OfdmaRelaxer, Relaxer};
pub use polyblock::{noma_powers_for_zeta, solve_polyblock, PolyblockReport, PolyblockState};
pub use sca::{finite_difference_gradient, isac_sca_program, solve_sca, solve_sca_program, Outer, RealQuadratic, ScaProgram, ScaReport};
pub use bcd::{solve_bcd, solve_bcd_with, BcdBlock, BcdReport, BcdStep};
pub use irs::{
    for_each_phase_vector, irs_beam_block, irs_beams, irs_objective, oracle_score, worst_case_sum_rate, IrsScore, enumerate_irs, IrsConfiguration, irs_order, irs_order_block, irs_phase_block, irs_point, irs_scenario, oracle_value,
    phase_levels, search_phases, sic_zf_beams, sum_rate, water_fill_sum_rate, PHASE_ENUMERATION_LIMIT,
};
pub use exhaustive::{enumerate_binaries, enumerate_orders, solve_exhaustive, ExhaustiveReport, GridSpec, MAX_BINARIES, MAX_EVALUATIONS, MAX_GRID_DIMS};
