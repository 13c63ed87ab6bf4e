//! The eight resource-allocation problems as solver-consumable instances.
//!
//! Every instance owns a flat real decision vector described by a [`Layout`].
//! Residuals follow one sign convention: a constraint holds when its residual
//! is at most the tolerance.

mod eval;
mod layout;
mod scenario;

pub use eval::{alpha_from_order, alpha_matrix, irs_max_gain};
pub use layout::{Block, BlockKind, Layout};
pub use scenario::{
    IrsScenario, IsacScenario, JcacScenario, MfaScenario, NomaScenario, OfdmaScenario, PhaseSet, RsmaScenario, UavScenario,
};

use crate::error::{Error, Result};
use std::fmt;

/// Problem variant together with its scenario data.
#[derive(Debug, Clone)]
pub enum ProblemKind {
    NomaSumRate(NomaScenario),
    OfdmaPowerMin(OfdmaScenario),
    RsmaRobust(RsmaScenario),
    IrsSumRate(IrsScenario),
    UavPowerMin(UavScenario),
    MfaPowerMin(MfaScenario),
    IsacCommCentric(IsacScenario),
    JcacEnergyMin(JcacScenario),
}

impl ProblemKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::NomaSumRate(_) => "noma-sum-rate",
            ProblemKind::OfdmaPowerMin(_) => "ofdma-power-min",
            ProblemKind::RsmaRobust(_) => "rsma-robust",
            ProblemKind::IrsSumRate(_) => "irs-sum-rate",
            ProblemKind::UavPowerMin(_) => "uav-power-min",
            ProblemKind::MfaPowerMin(_) => "mfa-power-min",
            ProblemKind::IsacCommCentric(_) => "isac-comm-centric",
            ProblemKind::JcacEnergyMin(_) => "jcac-energy-min",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Structural facts solvers may rely on.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StructureFlags {
    pub has_binaries: bool,
    /// Blocks in which the objective is non-decreasing over the feasible set.
    pub monotone_in: Vec<&'static str>,
    /// Blocks over which the problem is convex once all other blocks are fixed.
    pub convex_when_fixed: Vec<&'static str>,
    /// SINR targets stored as signal − Γ·(interference + σ²) ≥ 0.
    pub sinr_constrained: bool,
}

/// A declared constraint family.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSpec {
    pub name: &'static str,
    pub description: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub constraint: &'static str,
    pub index: usize,
    pub value: f64,
    /// Exact constraints tolerate no slack.
    pub exact: bool,
}

impl Residual {
    pub fn holds(&self, tol: f64) -> bool {
        if self.exact {
            self.value <= 0.0
        } else {
            self.value <= tol
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    pub residuals: Vec<Residual>,
}

impl Feasibility {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max).max(0.0)
    }

    /// Names of violated constraint families in declaration order.
    pub fn violated(&self, tol: f64) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = Vec::new();
        for r in self.residuals.iter().filter(|r| !r.holds(tol)) {
            if !out.contains(&r.constraint) {
                out.push(r.constraint);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Feasible,
    Infeasible,
    IterationLimit,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Feasible => "feasible",
            Status::Infeasible => "infeasible",
            Status::IterationLimit => "iteration-limit",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub max_residual: f64,
    pub status: Status,
    /// Certified relative gap, if any.
    pub gap: Option<f64>,
    pub iterations: usize,
    pub runtime_ms: f64,
}

impl Solution {
    pub fn infeasible(iterations: usize) -> Self {
        Self {
            x: Vec::new(),
            objective: f64::NAN,
            max_residual: f64::INFINITY,
            status: Status::Infeasible,
            gap: None,
            iterations,
            runtime_ms: 0.0,
        }
    }
}

/// An immutable problem instance.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub kind: ProblemKind,
    pub sense: Sense,
    pub layout: Layout,
    pub flags: StructureFlags,
    pub constraints: Vec<ConstraintSpec>,
}

fn spec(list: &[(&'static str, &'static str)]) -> Vec<ConstraintSpec> {
    list.iter().map(|&(name, description)| ConstraintSpec { name, description }).collect()
}

const UNBOUNDED: BlockKind = BlockKind::Continuous { lower: f64::NEG_INFINITY, upper: f64::INFINITY };
const NONNEG: BlockKind = BlockKind::Continuous { lower: 0.0, upper: f64::INFINITY };

/// Validates scenario data and fixes the variable layout, sense, constraints and flags.
pub fn build_problem(kind: ProblemKind) -> Result<ProblemInstance> {
    let mut layout = Layout::new();
    let (sense, flags, constraints) = match &kind {
        ProblemKind::NomaSumRate(s) => {
            s.validate()?;
            layout.push("p", BlockKind::Continuous { lower: 0.0, upper: s.p_max }, s.users());
            layout.push("pi", BlockKind::Binary, s.subcarriers() * s.users());
            (
                Sense::Maximize,
                StructureFlags {
                    has_binaries: true,
                    monotone_in: vec!["p"],
                    convex_when_fixed: vec![],
                    sinr_constrained: true,
                },
                spec(&[
                    ("C1", "total transmit power within P_max"),
                    ("C2", "every user on exactly one subcarrier"),
                    ("C3", "per-user minimum rate"),
                    ("C4", "binary schedule"),
                ]),
            )
        }
        ProblemKind::OfdmaPowerMin(s) => {
            s.validate()?;
            layout.push("p", NONNEG, s.total_streams());
            layout.push("pi", BlockKind::Binary, s.subcarriers() * s.total_streams());
            (
                Sense::Minimize,
                StructureFlags {
                    has_binaries: true,
                    monotone_in: vec!["p"],
                    convex_when_fixed: vec!["p"],
                    sinr_constrained: true,
                },
                spec(&[
                    ("C1", "per-user power budget"),
                    ("C2", "at most one stream per subcarrier"),
                    ("C3", "per-user minimum rate"),
                    ("C4", "binary schedule"),
                    ("schedule", "every stream on exactly one subcarrier"),
                ]),
            )
        }
        ProblemKind::RsmaRobust(s) => {
            s.validate()?;
            layout.push("p_c", BlockKind::Complex, s.antennas());
            layout.push("p_p", BlockKind::Complex, s.users() * s.antennas());
            layout.push("c", NONNEG, s.users());
            (
                Sense::Maximize,
                StructureFlags { convex_when_fixed: vec!["c"], ..Default::default() },
                spec(&[
                    ("C1", "common shares within the worst-case common rate"),
                    ("C2", "total precoder power"),
                    ("C3", "worst-case private plus common rate target"),
                    ("C4", "non-negative common shares"),
                ]),
            )
        }
        ProblemKind::IrsSumRate(s) => {
            s.validate()?;
            let k = s.users();
            layout.push("p", BlockKind::Complex, k * s.antennas());
            layout.push("psi", BlockKind::Continuous { lower: 0.0, upper: 2.0 * std::f64::consts::PI }, s.elements());
            layout.push("alpha", BlockKind::Binary, k * k.saturating_sub(1));
            (
                Sense::Maximize,
                StructureFlags { has_binaries: true, ..Default::default() },
                spec(&[
                    ("C1", "total transmit power"),
                    ("C2", "unit-modulus or codebook phase shifts"),
                    ("C3", "binary decoding indicators"),
                    ("C4", "pairwise decoding consistency"),
                ]),
            )
        }
        ProblemKind::UavPowerMin(s) => {
            s.validate()?;
            let k = s.users.len();
            layout.push("p", BlockKind::Complex, k * s.antennas());
            layout.push("r0", UNBOUNDED, 2);
            layout.push("v", UNBOUNDED, 2);
            layout.push("alpha", BlockKind::Binary, k * k.saturating_sub(1));
            (
                Sense::Minimize,
                StructureFlags { has_binaries: true, sinr_constrained: true, ..Default::default() },
                spec(&[
                    ("C1", "per-antenna power"),
                    ("C2", "SINR target, normalised by noise"),
                    ("C3", "acceleration limit"),
                    ("C4", "kinematic consistency"),
                    ("C5", "binary decoding indicators"),
                    ("C6", "pairwise decoding consistency"),
                ]),
            )
        }
        ProblemKind::MfaPowerMin(s) => {
            s.validate()?;
            let (k, n, nq) = (s.users(), s.elements(), s.total_positions());
            layout.push("p", BlockKind::Complex, n * k);
            layout.push("t", BlockKind::Binary, nq);
            layout.push("u", BlockKind::Complex, nq * k);
            (
                Sense::Minimize,
                StructureFlags { has_binaries: true, sinr_constrained: true, ..Default::default() },
                spec(&[
                    ("C1", "SINR target, normalised by noise"),
                    ("C2", "binary position selection"),
                    ("C3", "one position per element"),
                    ("C4", "lifted beams equal selection times beams"),
                ]),
            )
        }
        ProblemKind::IsacCommCentric(s) => {
            s.validate()?;
            layout.push("p", BlockKind::Complex, s.h_c.cols() * s.h_c.rows());
            (
                Sense::Maximize,
                StructureFlags::default(),
                spec(&[("C1", "average transmit power"), ("C2", "beampattern MSE budget")]),
            )
        }
        ProblemKind::JcacEnergyMin(s) => {
            s.validate()?;
            layout.push("p", NONNEG, s.total_symbols());
            layout.push("pi", BlockKind::Binary, s.subcarriers() * s.total_symbols());
            layout.push("l", NONNEG, s.users());
            (
                Sense::Minimize,
                StructureFlags {
                    has_binaries: true,
                    monotone_in: vec![],
                    convex_when_fixed: vec!["p", "l"],
                    sinr_constrained: false,
                },
                spec(&[
                    ("C1", "communication rate target"),
                    ("C2", "offloaded plus local bits cover the task"),
                    ("C3", "non-negative powers"),
                    ("C4", "local bits within the task size"),
                    ("C5", "binary schedule"),
                    ("C6", "at most one symbol per subcarrier"),
                ]),
            )
        }
    };
    Ok(ProblemInstance { kind, sense, layout, flags, constraints })
}

/// Objective value at `x`, computed through the metrics formulas.
pub fn evaluate_objective(instance: &ProblemInstance, x: &[f64]) -> Result<f64> {
    instance.layout.check(x)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("decision vector".into()));
    }
    let v = eval::objective(instance, x)?;
    if !v.is_finite() {
        return Err(Error::NonFinite(format!("objective of {}", instance.kind.name())));
    }
    Ok(v)
}

/// Signed residuals in declaration order, followed by box bounds.
pub fn check_feasibility(instance: &ProblemInstance, x: &[f64], tol: f64) -> Result<Feasibility> {
    instance.layout.check(x)?;
    let mut residuals = eval::residuals(instance, x)?;
    for b in instance.layout.blocks() {
        if let BlockKind::Continuous { lower, upper } = b.kind {
            for (i, &v) in x[b.range()].iter().enumerate() {
                residuals.push(Residual { constraint: "bounds", index: b.offset + i, value: (lower - v).max(v - upper), exact: false });
            }
        }
    }
    if let Some(r) = residuals.iter().find(|r| r.value.is_nan()) {
        return Err(Error::NonFinite(format!("residual of {}[{}]", r.constraint, r.index)));
    }
    let feasible = residuals.iter().all(|r| r.holds(tol));
    Ok(Feasibility { feasible, residuals })
}

impl ProblemInstance {
    /// Big-M for products of phase selections with beamformer terms:
    /// P_max · (max effective channel norm)² · 10.
    pub fn big_m(&self) -> Option<f64> {
        match &self.kind {
            ProblemKind::IrsSumRate(s) => Some(s.p_max * irs_max_gain(s).powi(2) * 10.0),
            _ => None,
        }
    }

    /// Solution record for `x` with residual and objective filled in.
    pub fn solution(&self, x: Vec<f64>, status: Status, tol: f64) -> Result<Solution> {
        let objective = evaluate_objective(self, &x)?;
        let feas = check_feasibility(self, &x, tol)?;
        Ok(Solution { objective, max_residual: feas.max_residual(), x, status, gap: None, iterations: 0, runtime_ms: 0.0 })
    }
}

#[cfg(test)]
mod tests;
