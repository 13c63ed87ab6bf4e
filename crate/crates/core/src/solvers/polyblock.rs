//! Polyblock outer approximation for monotone NOMA sum-rate maximisation.
//!
//! Works in ζ_k = 1 + SINR_k. The objective Σ log2 ζ_k is increasing, the
//! power map ζ → p is monotone and triangular under a fixed SIC order, so the
//! feasible set is a normal set cut by the conormal QoS box ζ ≥ 2^{R_min}.
//! Vertices are projected onto the boundary along the ray to the origin.

use super::SolverOptions;
use crate::error::{Error, Result};
use crate::metrics::SicOrder;
use crate::problems::{NomaScenario, ProblemInstance, ProblemKind, Solution, Status};

#[derive(Debug, Clone)]
pub struct PolyblockState {
    pub vertices: Vec<Vec<f64>>,
    pub incumbent: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct PolyblockReport {
    pub solution: Solution,
    /// Best-vertex value per outer iteration.
    pub upper_bounds: Vec<f64>,
    /// Incumbent value per outer iteration.
    pub incumbents: Vec<f64>,
    pub state: Option<PolyblockState>,
}

/// Powers realising the SINR targets ζ − 1 on one schedule, users grouped per subcarrier.
pub fn noma_powers_for_zeta(s: &NomaScenario, assignment: &[usize], zeta: &[f64]) -> Vec<f64> {
    let k = s.users();
    let mut p = vec![0.0; k];
    for sc in 0..s.subcarriers() {
        let users: Vec<usize> = (0..k).filter(|&u| assignment[u] == sc).collect();
        if users.is_empty() {
            continue;
        }
        let g: Vec<f64> = users.iter().map(|&u| s.h[u][sc].norm_sqr()).collect();
        let order = SicOrder::by_gain(&g);
        let mut later = 0.0;
        // the last decoded user sees no intra-cell interference
        for &i in order.sequence().iter().rev() {
            let u = users[i];
            let gamma = zeta[u] - 1.0;
            let pu = if gamma <= 0.0 { 0.0 } else { gamma * (later + s.sigmas[u] / g[i]) };
            p[u] = pu;
            later += pu;
        }
    }
    p
}

fn value(z: &[f64]) -> f64 {
    z.iter().map(|v| v.log2()).sum()
}

struct Run {
    best: Vec<f64>,
    value: f64,
    upper: f64,
    uppers: Vec<f64>,
    incumbents: Vec<f64>,
    vertices: Vec<Vec<f64>>,
    exhausted: bool,
    iterations: usize,
}

fn polyblock_schedule(s: &NomaScenario, assignment: &[usize], opts: &SolverOptions) -> Option<Run> {
    let k = s.users();
    let a: Vec<f64> = s.r_min.iter().map(|r| r.max(0.0).exp2()).collect();
    let power = |z: &[f64]| noma_powers_for_zeta(s, assignment, z).iter().sum::<f64>();
    let feasible = |z: &[f64]| power(z) <= s.p_max * (1.0 + 1e-12);
    if !feasible(&a) {
        return None;
    }
    let b: Vec<f64> = (0..k)
        .map(|u| {
            let g = s.h[u][assignment[u]].norm_sqr();
            (1.0 + g * s.p_max / s.sigmas[u]).max(a[u])
        })
        .collect();
    let mut vertices = vec![b];
    let mut best = a.clone();
    let mut best_v = value(&a);
    let mut uppers = Vec::new();
    let mut incumbents = Vec::new();
    let mut iterations = 0;
    // largest value discarded by the tolerance test; keeps the bound valid
    let mut cut = f64::NEG_INFINITY;
    loop {
        let (vi, upper) = vertices
            .iter()
            .enumerate()
            .map(|(i, z)| (i, value(z)))
            .max_by(|x, y| x.1.total_cmp(&y.1).then(y.0.cmp(&x.0)))
            .unwrap_or((usize::MAX, best_v));
        let upper = upper.max(best_v).max(cut);
        uppers.push(upper);
        incumbents.push(best_v);
        if vi == usize::MAX || upper - best_v <= opts.tol_gap * best_v.abs().max(1.0) {
            return Some(Run { best, value: best_v, upper, uppers, incumbents, vertices, exhausted: false, iterations });
        }
        if iterations >= opts.max_iter.saturating_mul(1000) || vertices.len() >= opts.max_vertices {
            return Some(Run { best, value: best_v, upper, uppers, incumbents, vertices, exhausted: true, iterations });
        }
        iterations += 1;
        let z = vertices.swap_remove(vi);
        let at = |lam: f64| -> Vec<f64> { z.iter().map(|v| lam * v).collect() };
        let proj = if feasible(&z) {
            z.clone()
        } else {
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if feasible(&at(mid)) {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-15 {
                    break;
                }
            }
            at(lo)
        };
        let pv = value(&proj);
        if pv > best_v && proj.iter().zip(&a).all(|(p, lo)| p >= lo) {
            best_v = pv;
            best = proj.clone();
        }
        if proj != z {
            for i in 0..k {
                let mut child = z.clone();
                child[i] = proj[i];
                if child[i] < a[i] {
                    continue;
                }
                let v = value(&child);
                if v > best_v + opts.tol_gap * best_v.abs().max(1.0) {
                    vertices.push(child);
                } else {
                    cut = cut.max(v);
                }
            }
        }
        let floor = best_v + opts.tol_gap * best_v.abs().max(1.0);
        vertices.retain(|v| {
            let keep = value(v) > floor;
            if !keep {
                cut = cut.max(value(v));
            }
            keep
        });
    }
}

fn schedules(k: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|a: Vec<usize>| (0..m).map(move |sc| [a.clone(), vec![sc]].concat())).collect();
    }
    out
}

/// Polyblock over the powers of a NOMA instance, run once per user-to-subcarrier schedule.
pub fn solve_polyblock(instance: &ProblemInstance, opts: &SolverOptions) -> Result<PolyblockReport> {
    opts.validate()?;
    let ProblemKind::NomaSumRate(s) = &instance.kind else {
        return Err(Error::InvalidInput(format!("{} is not monotone in a polyblock-ready block", instance.kind.name())));
    };
    let start = std::time::Instant::now();
    let (k, m) = (s.users(), s.subcarriers());
    if (m as f64).powi(k as i32) > 1e5 {
        return Err(Error::Budget(format!("{m}^{k} schedules exceed the enumeration budget")));
    }
    let mut best: Option<(Vec<usize>, Run)> = None;
    let mut iterations = 0;
    let mut upper = f64::NEG_INFINITY;
    let mut exhausted = false;
    for assign in schedules(k, m) {
        let Some(run) = polyblock_schedule(s, &assign, opts) else { continue };
        iterations += run.iterations;
        upper = upper.max(run.upper);
        exhausted |= run.exhausted;
        if best.as_ref().is_none_or(|(_, b)| run.value > b.value) {
            best = Some((assign, run));
        }
    }
    let Some((assign, run)) = best else {
        let mut sol = Solution::infeasible(iterations);
        sol.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        return Ok(PolyblockReport { solution: sol, upper_bounds: vec![], incumbents: vec![], state: None });
    };
    let p = noma_powers_for_zeta(s, &assign, &run.best);
    let mut pi = vec![0.0; m * k];
    for (u, &sc) in assign.iter().enumerate() {
        pi[sc * k + u] = 1.0;
    }
    let mut x = instance.layout.zeros();
    // bisection leaves the point inside the budget up to round-off
    let total: f64 = p.iter().sum();
    let scale = if total > s.p_max { s.p_max / total } else { 1.0 };
    instance.layout.set_real(&mut x, "p", &p.iter().map(|v| v * scale).collect::<Vec<_>>());
    instance.layout.set_real(&mut x, "pi", &pi);
    let status = if exhausted { Status::Feasible } else { Status::Optimal };
    let mut solution = instance.solution(x, status, opts.tol_feas)?;
    solution.gap = Some(((upper - solution.objective) / solution.objective.abs().max(1e-300)).max(0.0));
    solution.iterations = iterations;
    solution.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(PolyblockReport {
        solution,
        upper_bounds: run.uppers,
        incumbents: run.incumbents,
        state: Some(PolyblockState { vertices: run.vertices, incumbent: run.best, value: run.value }),
    })
}
