//! Block coordinate ascent with per-update monotonicity.
//!
//! Blocks run in declared order; an update is kept only if it does not
//! lower the objective, so every recorded step is non-decreasing.

use super::SolverOptions;
use crate::error::{Error, Result};
use crate::problems::{check_feasibility, evaluate_objective, ProblemInstance, Sense, Solution, Status};

/// A named block update mapping the full decision vector to a new one.
pub struct BcdBlock<'a> {
    pub name: &'static str,
    pub update: Box<dyn Fn(&[f64]) -> Result<Vec<f64>> + 'a>,
}

impl<'a> BcdBlock<'a> {
    pub fn new(name: &'static str, update: impl Fn(&[f64]) -> Result<Vec<f64>> + 'a) -> Self {
        Self { name, update: Box::new(update) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BcdStep {
    pub cycle: usize,
    pub block: &'static str,
    pub before: f64,
    pub after: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone)]
pub struct BcdReport {
    pub x: Vec<f64>,
    /// Objective in maximisation form.
    pub value: f64,
    pub steps: Vec<BcdStep>,
    pub cycles: usize,
    pub status: Status,
}

/// Maximises `objective` by cycling `blocks` from `x0`.
pub fn solve_bcd_with(
    objective: &dyn Fn(&[f64]) -> Result<f64>,
    blocks: &[BcdBlock],
    x0: &[f64],
    opts: &SolverOptions,
) -> Result<BcdReport> {
    opts.validate()?;
    if blocks.is_empty() {
        return Err(Error::InvalidInput("BCD needs at least one block".into()));
    }
    let mut x = x0.to_vec();
    let mut value = objective(&x)?;
    let mut steps = Vec::new();
    let mut cycles = 0;
    let mut status = Status::IterationLimit;
    while cycles < opts.max_iter {
        cycles += 1;
        let start = value;
        for b in blocks {
            let cand = (b.update)(&x)?;
            if cand.len() != x.len() {
                return Err(Error::Dimension(format!("block {} returned {} entries, expected {}", b.name, cand.len(), x.len())));
            }
            let v = objective(&cand)?;
            let accepted = v >= value;
            steps.push(BcdStep { cycle: cycles, block: b.name, before: value, after: if accepted { v } else { value }, accepted });
            if accepted {
                x = cand;
                value = v;
            }
        }
        if value - start <= opts.tol_gap * value.abs().max(1e-12) {
            status = Status::Feasible;
            break;
        }
    }
    Ok(BcdReport { x, value, steps, cycles, status })
}

/// BCD on an instance; every block output must satisfy the instance constraints.
pub fn solve_bcd(instance: &ProblemInstance, blocks: &[BcdBlock], x0: &[f64], opts: &SolverOptions) -> Result<(Solution, BcdReport)> {
    let start = std::time::Instant::now();
    let sign = if instance.sense == Sense::Maximize { 1.0 } else { -1.0 };
    let checked: Vec<BcdBlock> = blocks
        .iter()
        .map(|b| {
            BcdBlock::new(b.name, move |x: &[f64]| {
                let out = (b.update)(x)?;
                let feas = check_feasibility(instance, &out, opts.tol_feas)?;
                if !feas.feasible {
                    return Err(Error::Solver(format!(
                        "block {} produced an infeasible point; violated {:?} (max residual {:.3e})",
                        b.name,
                        feas.violated(opts.tol_feas),
                        feas.max_residual()
                    )));
                }
                Ok(out)
            })
        })
        .collect();
    let objective = |x: &[f64]| evaluate_objective(instance, x).map(|v| sign * v);
    let report = solve_bcd_with(&objective, &checked, x0, opts)?;
    let mut solution = instance.solution(report.x.clone(), report.status, opts.tol_feas)?;
    solution.iterations = report.cycles;
    solution.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok((solution, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn separable(x: &[f64]) -> Result<f64> {
        Ok(-(x[0] - 1.0).powi(2) - (x[1] + 2.0).powi(2))
    }

    #[test]
    fn separable_blocks_finish_in_one_cycle() {
        let blocks = [
            BcdBlock::new("a", |x: &[f64]| Ok(vec![1.0, x[1]])),
            BcdBlock::new("b", |x: &[f64]| Ok(vec![x[0], -2.0])),
        ];
        let rep = solve_bcd_with(&separable, &blocks, &[5.0, 5.0], &SolverOptions::default()).unwrap();
        assert_eq!(rep.steps[1].after, 0.0);
        assert!(rep.steps[2..].iter().all(|s| s.after == 0.0));
        assert_eq!(rep.cycles, 2);
    }

    #[test]
    fn single_block_equals_its_solver() {
        let solve = |x: &[f64]| Ok(vec![1.0, -2.0 + 0.0 * x[0]]);
        let rep = solve_bcd_with(&separable, &[BcdBlock::new("all", solve)], &[0.0, 0.0], &SolverOptions::default()).unwrap();
        assert_eq!(rep.x, solve(&[0.0, 0.0]).unwrap());
    }

    #[test]
    fn worsening_updates_are_rejected() {
        let blocks = [BcdBlock::new("bad", |x: &[f64]| Ok(vec![x[0] + 1.0, x[1]]))];
        let rep = solve_bcd_with(&separable, &blocks, &[1.0, -2.0], &SolverOptions::default()).unwrap();
        assert!(!rep.steps[0].accepted);
        assert_eq!(rep.x, vec![1.0, -2.0]);
        for s in &rep.steps {
            assert!(s.after >= s.before);
        }
    }
}
