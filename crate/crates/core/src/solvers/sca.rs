//! Successive convex approximation for objectives Σ_k φ_k(y_k(x)).
//!
//! Each y_k is a convex quadratic and each φ_k is convex and non-increasing,
//! so the tangent of φ_k at y_k(x⁽ʲ⁾) is a global under-estimator. The
//! surrogate is maximised exactly under the (convex) constraints, which makes
//! the objective sequence non-decreasing without a line search.

use super::convex::{solve_convex, ConvexProgram, Smooth};
use super::SolverOptions;
use crate::error::{Error, Result};
use crate::numerics::{CMatrix, C64};
use crate::problems::{check_feasibility, evaluate_objective, IsacScenario, ProblemInstance, ProblemKind, Solution, Status};
use std::f64::consts::LN_2;

/// ½xᵀQx + c·x + d with symmetric row-major Q.
#[derive(Debug, Clone, PartialEq)]
pub struct RealQuadratic {
    pub q: Vec<f64>,
    pub c: Vec<f64>,
    pub d: f64,
}

impl RealQuadratic {
    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn eval(&self, x: &[f64]) -> Smooth {
        let mut s = Smooth::quadratic(&self.q, &self.c, self.d, x);
        s.value = s.value.max(f64::MIN);
        s
    }

    /// ‖A·z − b‖² with z the complex vector interleaved in `x`.
    pub fn from_complex_residual(a: &CMatrix, b: &[C64]) -> Self {
        let (m, n) = (a.rows(), a.cols());
        // real embedding R (2m × 2n) of A
        let mut r = vec![0.0; 4 * m * n];
        let w = 2 * n;
        for i in 0..m {
            for j in 0..n {
                let z = a[(i, j)];
                r[(2 * i) * w + 2 * j] = z.re;
                r[(2 * i) * w + 2 * j + 1] = -z.im;
                r[(2 * i + 1) * w + 2 * j] = z.im;
                r[(2 * i + 1) * w + 2 * j + 1] = z.re;
            }
        }
        let br: Vec<f64> = b.iter().flat_map(|z| [z.re, z.im]).collect();
        let mut q = vec![0.0; w * w];
        let mut c = vec![0.0; w];
        for row in 0..2 * m {
            let rr = &r[row * w..(row + 1) * w];
            for i in 0..w {
                if rr[i] == 0.0 {
                    continue;
                }
                c[i] -= 2.0 * rr[i] * br[row];
                for j in 0..w {
                    q[i * w + j] += 2.0 * rr[i] * rr[j];
                }
            }
        }
        Self { q, c, d: br.iter().map(|v| v * v).sum() }
    }

    pub fn scaled(mut self, s: f64) -> Self {
        self.q.iter_mut().for_each(|v| *v *= s);
        self.c.iter_mut().for_each(|v| *v *= s);
        self.d *= s;
        self
    }

    pub fn shifted(mut self, by: f64) -> Self {
        self.d += by;
        self
    }
}

pub type Outer = Box<dyn Fn(f64) -> (f64, f64)>;

/// max Σ_k φ_k(y_k(x)) s.t. g_i(x) ≤ 0, with y_k and g_i convex quadratics.
pub struct ScaProgram {
    pub inner: Vec<RealQuadratic>,
    /// φ_k returning (value, derivative); convex and non-increasing.
    pub outer: Vec<Outer>,
    pub constraints: Vec<RealQuadratic>,
}

impl ScaProgram {
    pub fn dim(&self) -> usize {
        self.inner.first().map_or(0, |q| q.dim())
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.inner.iter().zip(&self.outer).map(|(y, phi)| phi(y.eval(x).value).0).sum()
    }

    /// Analytic gradient Σ φ'(y_k)·∇y_k.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        for (y, phi) in self.inner.iter().zip(&self.outer) {
            let s = y.eval(x);
            let d = phi(s.value).1;
            g.iter_mut().zip(&s.grad).for_each(|(a, b)| *a += d * b);
        }
        g
    }

    /// Tangent surrogate expanded at `at`, evaluated at `x`.
    pub fn surrogate(&self, at: &[f64], x: &[f64]) -> f64 {
        self.inner
            .iter()
            .zip(&self.outer)
            .map(|(y, phi)| {
                let y0 = y.eval(at).value;
                let (v, d) = phi(y0);
                v + d * (y.eval(x).value - y0)
            })
            .sum()
    }
}

/// Central differences with step `h`, the cross-check hook for analytic gradients.
pub fn finite_difference_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|i| {
            let orig = xp[i];
            xp[i] = orig + h;
            let up = f(&xp);
            xp[i] = orig - h;
            let down = f(&xp);
            xp[i] = orig;
            (up - down) / (2.0 * h)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct ScaReport {
    pub x: Vec<f64>,
    pub objective: f64,
    pub status: Status,
    /// Objective at x0 followed by each accepted iterate.
    pub history: Vec<f64>,
    pub iterations: usize,
    /// Stationarity residual of the last surrogate solve.
    pub kkt_residual: f64,
}

const MAX_SCA_ITER: usize = 200;

/// Runs SCA from a feasible `x0`.
pub fn solve_sca_program(prog: &ScaProgram, x0: &[f64], opts: &SolverOptions) -> Result<ScaReport> {
    opts.validate()?;
    let n = prog.dim();
    if x0.len() != n {
        return Err(Error::Dimension(format!("start has {} entries, program has {n}", x0.len())));
    }
    if let Some(g) = prog.constraints.iter().find(|g| g.eval(x0).value > opts.tol_feas) {
        return Err(Error::InvalidInput(format!("SCA start violates a constraint by {:.3e}", g.eval(x0).value)));
    }
    let mut x = x0.to_vec();
    let mut f = prog.objective(&x);
    let mut history = vec![f];
    let mut kkt_residual = f64::INFINITY;
    let mut status = Status::IterationLimit;
    let cap = opts.max_iter.min(MAX_SCA_ITER);
    let mut iterations = 0;
    while iterations < cap {
        iterations += 1;
        // surrogate: maximise Σ φ'(y0)·y(x)  ⇔  minimise Σ w·y(x), w = −φ'(y0) ≥ 0
        let mut q = vec![0.0; n * n];
        let mut c = vec![0.0; n];
        let mut d = 0.0;
        for (y, phi) in prog.inner.iter().zip(&prog.outer) {
            let w = -phi(y.eval(&x).value).1;
            q.iter_mut().zip(&y.q).for_each(|(a, b)| *a += w * b);
            c.iter_mut().zip(&y.c).for_each(|(a, b)| *a += w * b);
            d += w * y.d;
        }
        let sub_obj = RealQuadratic { q, c, d };
        let mut sub = ConvexProgram::new(n, move |z: &[f64]| sub_obj.eval(z));
        for g in &prog.constraints {
            let g = g.clone();
            sub = sub.constrain(move |z: &[f64]| g.eval(z));
        }
        let sol = solve_convex(&sub, &x, opts)?;
        if sol.status == Status::Infeasible {
            return Err(Error::Solver("surrogate subproblem infeasible from a feasible iterate".into()));
        }
        kkt_residual = sol.kkt_residual;
        let f_new = prog.objective(&sol.x);
        if f_new < f - 1e-12 * f.abs().max(1.0) {
            // surrogate soundness makes this a numerical artefact; keep the current iterate
            status = Status::Optimal;
            break;
        }
        let change = (f_new - f).abs();
        x = sol.x;
        let improved = f_new.max(f);
        f = improved;
        history.push(f);
        if change <= opts.tol_gap * f.abs().max(1e-12) {
            status = Status::Optimal;
            break;
        }
    }
    Ok(ScaReport { x, objective: f, status, history, iterations, kkt_residual })
}

/// The ISAC sum rate as Σ log2(1 + A_k / y_k(x)) with y_k the per-user error-plus-noise power.
pub fn isac_sca_program(s: &IsacScenario) -> Result<ScaProgram> {
    s.validate()?;
    let (k, n, l) = (s.h_c.rows(), s.h_c.cols(), s.s.cols());
    let lf = l as f64;
    // vec(P) is N×K row-major; (H P S)_{u,t} = Σ_{e,j} H_{u,e} P_{e,j} S_{j,t}
    let mut inner = Vec::with_capacity(k);
    let mut outer: Vec<Outer> = Vec::with_capacity(k);
    for u in 0..k {
        let a = CMatrix::from_fn(l, n * k, |t, idx| s.h_c[(u, idx / k)] * s.s[(idx % k, t)]);
        let b: Vec<C64> = (0..l).map(|t| s.s[(u, t)]).collect();
        inner.push(RealQuadratic::from_complex_residual(&a, &b).scaled(1.0 / lf).shifted(s.sigmas[u]));
        let amp: f64 = b.iter().map(|z| z.norm_sqr()).sum::<f64>() / lf;
        outer.push(Box::new(move |y: f64| ((amp / y).ln_1p() / LN_2, -amp / (y * (y + amp) * LN_2))));
    }
    // PS as a linear map of vec(P): (PS)_{e,t} = Σ_j P_{e,j} S_{j,t}
    let ps = CMatrix::from_fn(n * l, n * k, |row, idx| {
        let (e, t) = (row / l, row % l);
        if idx / k == e {
            s.s[(idx % k, t)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let zero = vec![C64::new(0.0, 0.0); n * l];
    let mut constraints = vec![RealQuadratic::from_complex_residual(&ps, &zero).scaled(1.0 / lf).shifted(-s.p_max)];
    if s.delta.is_finite() {
        let x0: Vec<C64> = (0..n * l).map(|row| s.x0[(row / l, row % l)]).collect();
        constraints.push(RealQuadratic::from_complex_residual(&ps, &x0).scaled(1.0 / lf).shifted(-s.delta));
    }
    Ok(ScaProgram { inner, outer, constraints })
}

/// SCA on an ISAC instance from the feasible precoder `x0`.
pub fn solve_sca(instance: &ProblemInstance, x0: &[f64], opts: &SolverOptions) -> Result<(Solution, ScaReport)> {
    let ProblemKind::IsacCommCentric(s) = &instance.kind else {
        return Err(Error::InvalidInput(format!("SCA is wired for ISAC instances, got {}", instance.kind.name())));
    };
    let start = std::time::Instant::now();
    if !check_feasibility(instance, x0, opts.tol_feas)?.feasible {
        return Err(Error::InvalidInput("SCA needs a feasible starting point".into()));
    }
    let prog = isac_sca_program(s)?;
    let report = solve_sca_program(&prog, x0, opts)?;
    let mut solution = instance.solution(report.x.clone(), report.status, opts.tol_feas)?;
    debug_assert!((evaluate_objective(instance, &report.x)? - report.objective).abs() <= 1e-9 * report.objective.abs().max(1.0));
    solution.iterations = report.iterations;
    solution.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok((solution, report))
}
