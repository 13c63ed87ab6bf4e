//! Reference solver by full enumeration.
//!
//! Enumerates binaries × a uniform grid over at most three bounded continuous
//! coordinates, or a closed-form inner solve where one exists. The budget is
//! checked before any work starts.

use super::irs::{enumerate_irs, irs_point, phase_levels, IrsScore};
use super::{ofdma_min_power, ofdma_point, SolverOptions};
use crate::error::{Error, Result};
use crate::metrics::SicOrder;
use crate::problems::{check_feasibility, evaluate_objective, BlockKind, ProblemInstance, ProblemKind, Sense, Solution, Status};

pub const MAX_BINARIES: usize = 20;
pub const MAX_GRID_DIMS: usize = 3;
/// Largest number of candidate points evaluated.
pub const MAX_EVALUATIONS: f64 = 5e7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    /// Closed-form inner solve per discrete configuration.
    Exact,
    /// `n` uniform points per continuous coordinate over its bounds.
    Uniform(usize),
}

#[derive(Debug, Clone)]
pub struct ExhaustiveReport {
    pub solution: Solution,
    pub evaluated: usize,
    /// Largest grid spacing; `None` for closed-form inner solves.
    pub resolution: Option<f64>,
}

/// Best-scoring binary vector of length `n` with the number of vectors scored.
pub fn enumerate_binaries(n: usize, mut score: impl FnMut(&[bool]) -> Option<f64>) -> Result<(Option<(Vec<bool>, f64)>, usize)> {
    if n > MAX_BINARIES {
        return Err(Error::Budget(format!("{n} binaries exceed the enumeration limit of {MAX_BINARIES}")));
    }
    let mut best: Option<(Vec<bool>, f64)> = None;
    let mut bits = vec![false; n];
    for mask in 0u64..(1u64 << n) {
        for (i, b) in bits.iter_mut().enumerate() {
            *b = mask >> i & 1 == 1;
        }
        if let Some(v) = score(&bits) {
            if best.as_ref().is_none_or(|b| v > b.1) {
                best = Some((bits.clone(), v));
            }
        }
    }
    Ok((best, 1usize << n))
}

/// Best-scoring SIC order over all K! permutations with the number scored.
pub fn enumerate_orders(k: usize, mut score: impl FnMut(&SicOrder) -> Result<f64>) -> Result<(SicOrder, f64, usize)> {
    if k > 8 {
        return Err(Error::Budget(format!("{k}! decoding orders exceed the enumeration limit")));
    }
    let orders = SicOrder::all(k);
    let mut best: Option<(SicOrder, f64)> = None;
    for o in &orders {
        let v = score(o)?;
        if best.as_ref().is_none_or(|b| v > b.1) {
            best = Some((o.clone(), v));
        }
    }
    let (o, v) = best.ok_or_else(|| Error::InvalidInput("no users to order".into()))?;
    Ok((o, v, orders.len()))
}

/// Enumerates the instance and returns the best feasible point.
pub fn solve_exhaustive(instance: &ProblemInstance, grid: GridSpec, opts: &SolverOptions) -> Result<ExhaustiveReport> {
    opts.validate()?;
    let start = std::time::Instant::now();
    let mut report = match (&instance.kind, grid) {
        (ProblemKind::OfdmaPowerMin(_), GridSpec::Exact) => ofdma_exact(instance, opts)?,
        (ProblemKind::IrsSumRate(_), GridSpec::Exact) => irs_exact(instance, opts)?,
        (_, GridSpec::Exact) => {
            return Err(Error::InvalidInput(format!("no closed-form inner solve for {}; use a uniform grid", instance.kind.name())));
        }
        (_, GridSpec::Uniform(n)) => grid_search(instance, n, opts)?,
    };
    report.solution.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

fn ofdma_exact(instance: &ProblemInstance, opts: &SolverOptions) -> Result<ExhaustiveReport> {
    let ProblemKind::OfdmaPowerMin(s) = &instance.kind else { unreachable!() };
    let (m, total) = (s.subcarriers(), s.total_streams());
    if m * total > MAX_BINARIES {
        return Err(Error::Budget(format!("{} assignment binaries exceed the enumeration limit of {MAX_BINARIES}", m * total)));
    }
    // idle streams are dominated: a spare subcarrier can always carry zero power
    let mut best: Option<(f64, Vec<usize>, Vec<f64>)> = None;
    let mut evaluated = 0;
    let mut assignment = vec![0usize; total];
    let mut used = vec![false; m];
    fn walk(
        i: usize,
        assignment: &mut [usize],
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if i == assignment.len() {
            visit(assignment);
            return;
        }
        for sc in 0..used.len() {
            if !used[sc] {
                used[sc] = true;
                assignment[i] = sc;
                walk(i + 1, assignment, used, visit);
                used[sc] = false;
            }
        }
    }
    walk(0, &mut assignment, &mut used, &mut |a| {
        evaluated += 1;
        if let Some(p) = ofdma_min_power(s, a) {
            let cost: f64 = p.iter().sum();
            if best.as_ref().is_none_or(|b| cost < b.0) {
                best = Some((cost, a.to_vec(), p));
            }
        }
    });
    let solution = match best {
        Some((_, a, p)) => {
            let mut sol = instance.solution(ofdma_point(instance, s, &a, &p), Status::Optimal, opts.tol_feas)?;
            sol.gap = Some(0.0);
            sol.iterations = evaluated;
            sol
        }
        None => Solution::infeasible(evaluated),
    };
    Ok(ExhaustiveReport { solution, evaluated, resolution: None })
}

fn irs_exact(instance: &ProblemInstance, opts: &SolverOptions) -> Result<ExhaustiveReport> {
    let ProblemKind::IrsSumRate(s) = &instance.kind else { unreachable!() };
    let k = s.users();
    let count = (1..=k).product::<usize>() as f64 * (phase_levels(s).len() as f64).powi(s.elements() as i32);
    if k > 8 || count > MAX_EVALUATIONS {
        return Err(Error::Budget(format!("{count:.3e} order × phase configurations exceed the budget of {MAX_EVALUATIONS:.0e}")));
    }
    let best = enumerate_irs(s, IrsScore::Nominal)?;
    // with one user the matched filter at full power is exactly optimal
    let status = if k == 1 { Status::Optimal } else { Status::Feasible };
    let mut solution = instance.solution(irs_point(instance, &best.beams, &best.psi, &best.order), status, opts.tol_feas)?;
    if k == 1 {
        solution.gap = Some(0.0);
    }
    solution.iterations = best.evaluated;
    Ok(ExhaustiveReport { solution, evaluated: best.evaluated, resolution: None })
}

fn grid_search(instance: &ProblemInstance, n: usize, opts: &SolverOptions) -> Result<ExhaustiveReport> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("grid needs at least 2 points per coordinate, got {n}")));
    }
    let layout = &instance.layout;
    let mut binaries = Vec::new();
    let mut axes: Vec<(usize, f64, f64)> = Vec::new();
    for b in layout.blocks() {
        match b.kind {
            BlockKind::Binary => binaries.extend(b.range()),
            BlockKind::Continuous { lower, upper } => {
                if !(lower.is_finite() && upper.is_finite()) {
                    return Err(Error::Budget(format!("block {} is unbounded and cannot be gridded", b.name)));
                }
                axes.extend(b.range().map(|i| (i, lower, upper)));
            }
            BlockKind::Complex => return Err(Error::Budget(format!("complex block {} cannot be gridded", b.name))),
        }
    }
    if binaries.len() > MAX_BINARIES || axes.len() > MAX_GRID_DIMS {
        return Err(Error::Budget(format!(
            "{} binaries and {} continuous coordinates exceed the limits of {MAX_BINARIES} and {MAX_GRID_DIMS}",
            binaries.len(),
            axes.len()
        )));
    }
    let count = 2f64.powi(binaries.len() as i32) * (n as f64).powi(axes.len() as i32);
    if count > MAX_EVALUATIONS {
        return Err(Error::Budget(format!("{count:.3e} grid points exceed the budget of {MAX_EVALUATIONS:.0e}")));
    }
    let sign = if instance.sense == Sense::Maximize { 1.0 } else { -1.0 };
    let points = n.pow(axes.len() as u32);
    let mut x = layout.zeros();
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut failure = None;
    let (_, bin_count) = enumerate_binaries(binaries.len(), |bits| {
        for (&i, &b) in binaries.iter().zip(bits) {
            x[i] = if b { 1.0 } else { 0.0 };
        }
        for mut idx in 0..points {
            for &(i, lo, hi) in &axes {
                x[i] = lo + (hi - lo) * (idx % n) as f64 / (n - 1) as f64;
                idx /= n;
            }
            let outcome = check_feasibility(instance, &x, opts.tol_feas).and_then(|f| {
                if f.feasible { evaluate_objective(instance, &x).map(Some) } else { Ok(None) }
            });
            match outcome {
                Ok(Some(v)) if best.as_ref().is_none_or(|b| sign * v > b.1) => best = Some((x.clone(), sign * v)),
                Ok(_) => {}
                Err(e) => failure = Some(e),
            }
        }
        None
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let evaluated = bin_count * points;
    let resolution = axes.iter().map(|&(_, lo, hi)| (hi - lo) / (n - 1) as f64).fold(0.0, f64::max);
    let solution = match best {
        Some((x, _)) => {
            let status = if axes.is_empty() { Status::Optimal } else { Status::Feasible };
            let mut sol = instance.solution(x, status, opts.tol_feas)?;
            if axes.is_empty() {
                sol.gap = Some(0.0);
            }
            sol.iterations = evaluated;
            sol
        }
        None => Solution::infeasible(evaluated),
    };
    Ok(ExhaustiveReport { solution, evaluated, resolution: (!axes.is_empty()).then_some(resolution) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{Rng, C64};
    use crate::problems::{build_problem, NomaScenario, OfdmaScenario};

    #[test]
    fn payoff_table_argmax() {
        let table = [[1.0, 4.0], [3.0, 2.0]];
        let (best, n) = enumerate_binaries(2, |b| Some(table[b[0] as usize][b[1] as usize])).unwrap();
        assert_eq!(n, 4);
        assert_eq!(best.unwrap(), (vec![false, true], 4.0));
    }

    #[test]
    fn all_six_orders_are_scored() {
        let mut seen = Vec::new();
        let (o, _, n) = enumerate_orders(3, |o| {
            seen.push(o.sequence().to_vec());
            Ok(o.sequence()[0] as f64 * 10.0 + o.sequence()[1] as f64)
        })
        .unwrap();
        seen.sort();
        seen.dedup();
        assert_eq!((n, seen.len()), (6, 6));
        assert_eq!(o.sequence(), &[2, 1, 0]);
    }

    fn ofdma(rng: &mut Rng) -> ProblemInstance {
        let h = (0..2).map(|_| (0..3).map(|_| rng.complex_normal()).collect()).collect();
        build_problem(ProblemKind::OfdmaPowerMin(OfdmaScenario { h, streams: vec![1, 1], sigma2: 1.0, p_max: vec![1e3; 2], r_min: vec![1.0, 2.0] }))
            .unwrap()
    }

    #[test]
    fn ofdma_reference_uses_closed_form_powers() {
        let mut rng = Rng::new(5);
        for _ in 0..20 {
            let inst = ofdma(&mut rng);
            let ProblemKind::OfdmaPowerMin(s) = &inst.kind else { unreachable!() };
            // independent: every ordered pair of distinct subcarriers with p = (2^R − 1)σ²/|h|²
            let mut best = f64::INFINITY;
            for a in 0..3 {
                for b in (0..3).filter(|&b| b != a) {
                    let c = (2f64.powf(1.0) - 1.0) / s.h[0][a].norm_sqr() + (2f64.powf(2.0) - 1.0) / s.h[1][b].norm_sqr();
                    best = best.min(c);
                }
            }
            let rep = solve_exhaustive(&inst, GridSpec::Exact, &SolverOptions::default()).unwrap();
            assert_eq!(rep.evaluated, 6);
            assert!((rep.solution.objective - best).abs() <= 1e-12 * best);
            assert!(rep.solution.max_residual <= 1e-9);
        }
    }

    #[test]
    fn refuses_over_budget() {
        let mut rng = Rng::new(1);
        let h = (0..3).map(|_| (0..8).map(|_| rng.complex_normal()).collect()).collect();
        let inst = build_problem(ProblemKind::OfdmaPowerMin(OfdmaScenario { h, streams: vec![1; 3], sigma2: 1.0, p_max: vec![1.0; 3], r_min: vec![1.0; 3] }))
            .unwrap();
        assert!(matches!(solve_exhaustive(&inst, GridSpec::Exact, &SolverOptions::default()), Err(Error::Budget(_))));
        assert!(matches!(solve_exhaustive(&inst, GridSpec::Uniform(3), &SolverOptions::default()), Err(Error::Budget(_))));
    }

    #[test]
    fn grid_reports_resolution() {
        let h = vec![vec![C64::new(2.0, 0.0)], vec![C64::new(1.0, 0.0)]];
        let inst = build_problem(ProblemKind::NomaSumRate(NomaScenario { h, sigmas: vec![1.0; 2], p_max: 2.0, r_min: vec![0.0; 2] })).unwrap();
        let rep = solve_exhaustive(&inst, GridSpec::Uniform(21), &SolverOptions::default()).unwrap();
        assert_eq!(rep.resolution, Some(0.1));
        assert_eq!(rep.evaluated, 4 * 21 * 21);
        // full power to the strong user on the single subcarrier
        assert!((rep.solution.objective - (1.0 + 4.0 * 2.0f64).log2()).abs() < 1e-9);
    }
}
