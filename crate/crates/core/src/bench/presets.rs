//! Small fixed problem instances for the `solve` and `oracle` commands.

use super::config::ScenarioConfig;
use super::sweep::trial_realization;
use crate::error::{Error, Result};
use crate::metrics::SicOrder;
use crate::numerics::{solve_real, CMatrix, Rng, C64};
use crate::problems::{build_problem, IsacScenario, NomaScenario, OfdmaScenario, ProblemInstance, ProblemKind, Solution};
use crate::solvers::{
    irs_beam_block, irs_order_block, irs_phase_block, irs_point, solve_bcd, solve_bnb, solve_exhaustive, solve_polyblock, solve_sca, ExhaustiveReport,
    GridSpec, IrsScore, OfdmaRelaxer, SolverOptions,
};

pub const PROBLEM_PRESETS: [&str; 4] = ["ofdma-k2m3", "noma-2user", "isac-toy", "irs-k1m4"];

const PRESET_SEED: u64 = 2024;

pub fn problem_preset(name: &str) -> Option<ProblemInstance> {
    let mut rng = Rng::new(PRESET_SEED);
    let kind = match name {
        "ofdma-k2m3" => {
            let h = (0..2).map(|_| (0..3).map(|_| rng.complex_normal()).collect()).collect();
            ProblemKind::OfdmaPowerMin(OfdmaScenario { h, streams: vec![1, 1], sigma2: 1.0, p_max: vec![100.0; 2], r_min: vec![1.0, 1.5] })
        }
        "noma-2user" => ProblemKind::NomaSumRate(NomaScenario {
            h: vec![vec![C64::new(2.0, 0.0)], vec![C64::new(0.4, 0.5)]],
            sigmas: vec![1.0; 2],
            p_max: 10.0,
            r_min: vec![0.5, 0.5],
        }),
        "isac-toy" => {
            let h_c = CMatrix::from_fn(1, 2, |_, _| rng.complex_normal());
            let s = CMatrix::from_fn(1, 2, |_, _| C64::from_polar(1.0, rng.uniform_range(0.0, std::f64::consts::TAU)));
            let x0 = CMatrix::from_fn(2, 2, |_, _| rng.complex_normal() * 0.7);
            ProblemKind::IsacCommCentric(IsacScenario { h_c, s, x0, sigmas: vec![0.5], p_max: 2.0, delta: 1.0 })
        }
        "irs-k1m4" => {
            let cfg = ScenarioConfig { k_users: 1, m_irs: 4, ..ScenarioConfig::preset("fig10-desk")? };
            ProblemKind::IrsSumRate(trial_realization(&cfg, 0).ok()?.scenario(&cfg, 30.0, true))
        }
        _ => return None,
    };
    Some(build_problem(kind).expect("preset data is valid"))
}

/// Least-squares precoder P = X0·Sᴴ(SSᴴ)⁻¹ as a flat start point.
fn isac_start(s: &IsacScenario) -> Result<Vec<f64>> {
    let k = s.s.rows();
    let g = s.s.matmul(&s.s.adjoint());
    let b = s.s.matmul(&s.x0.adjoint());
    let mut a = vec![0.0; 4 * k * k];
    for i in 0..k {
        for j in 0..k {
            let v = g[(i, j)];
            a[i * 2 * k + j] = v.re;
            a[i * 2 * k + k + j] = -v.im;
            a[(k + i) * 2 * k + j] = v.im;
            a[(k + i) * 2 * k + k + j] = v.re;
        }
    }
    let n = s.x0.rows();
    let mut p = vec![C64::new(0.0, 0.0); n * k];
    for col in 0..n {
        let rhs: Vec<f64> = (0..k).map(|i| b[(i, col)].re).chain((0..k).map(|i| b[(i, col)].im)).collect();
        let z = solve_real(&a, 2 * k, &rhs)?;
        for i in 0..k {
            // P = Zᴴ, so P[col][i] = conj(Z[i][col])
            p[col * k + i] = C64::new(z[i], -z[k + i]);
        }
    }
    Ok(p.iter().flat_map(|z| [z.re, z.im]).collect())
}

/// Runs the solver matched to the instance kind.
pub fn solve_default(instance: &ProblemInstance, opts: &SolverOptions) -> Result<Solution> {
    match &instance.kind {
        ProblemKind::OfdmaPowerMin(_) => Ok(solve_bnb(instance, &OfdmaRelaxer::new(instance)?, opts)?.solution),
        ProblemKind::NomaSumRate(_) => Ok(solve_polyblock(instance, opts)?.solution),
        ProblemKind::IsacCommCentric(s) => Ok(solve_sca(instance, &isac_start(s)?, opts)?.0),
        ProblemKind::IrsSumRate(s) => {
            let zero = vec![vec![C64::new(0.0, 0.0); s.antennas()]; s.users()];
            let x0 = irs_point(instance, &zero, &vec![0.0; s.elements()], &SicOrder::identity(s.users()));
            let blocks = [irs_order_block(instance, IrsScore::Nominal), irs_phase_block(instance, true, IrsScore::Nominal), irs_beam_block(instance)];
            Ok(solve_bcd(instance, &blocks, &x0, opts)?.0)
        }
        k => Err(Error::InvalidInput(format!("no default solver for {}", k.name()))),
    }
}

/// Reference value by enumeration: closed-form inner solves where available, else a 201-point grid.
pub fn oracle_default(instance: &ProblemInstance, opts: &SolverOptions) -> Result<ExhaustiveReport> {
    let grid = match instance.kind {
        ProblemKind::OfdmaPowerMin(_) | ProblemKind::IrsSumRate(_) => GridSpec::Exact,
        _ => GridSpec::Uniform(201),
    };
    solve_exhaustive(instance, grid, opts)
}
