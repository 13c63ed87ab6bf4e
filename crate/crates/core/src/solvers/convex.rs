//! Log-barrier interior-point kernel with damped Newton steps and a phase-I start.

use super::SolverOptions;
use crate::error::{Error, Result};
use crate::numerics::solve_real_spd;
use crate::problems::Status;

/// Value, gradient and row-major Hessian of a twice-differentiable function.
#[derive(Debug, Clone, PartialEq)]
pub struct Smooth {
    pub value: f64,
    pub grad: Vec<f64>,
    pub hess: Vec<f64>,
}

impl Smooth {
    /// c·x + b.
    pub fn linear(c: &[f64], b: f64, x: &[f64]) -> Self {
        let n = x.len();
        Self { value: dot(c, x) + b, grad: c.to_vec(), hess: vec![0.0; n * n] }
    }

    /// ½xᵀQx + c·x + b with symmetric row-major Q.
    pub fn quadratic(q: &[f64], c: &[f64], b: f64, x: &[f64]) -> Self {
        let n = x.len();
        let qx: Vec<f64> = (0..n).map(|i| dot(&q[i * n..(i + 1) * n], x)).collect();
        Self { value: 0.5 * dot(x, &qx) + dot(c, x) + b, grad: qx.iter().zip(c).map(|(a, b)| a + b).collect(), hess: q.to_vec() }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub type SmoothFn<'a> = Box<dyn Fn(&[f64]) -> Smooth + 'a>;

/// min f(x) s.t. g_i(x) ≤ 0, lower ≤ x ≤ upper, with f and every g_i convex.
pub struct ConvexProgram<'a> {
    pub n: usize,
    pub objective: SmoothFn<'a>,
    pub constraints: Vec<SmoothFn<'a>>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl<'a> ConvexProgram<'a> {
    pub fn new(n: usize, objective: impl Fn(&[f64]) -> Smooth + 'a) -> Self {
        Self {
            n,
            objective: Box::new(objective),
            constraints: Vec::new(),
            lower: vec![f64::NEG_INFINITY; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn constrain(mut self, g: impl Fn(&[f64]) -> Smooth + 'a) -> Self {
        self.constraints.push(Box::new(g));
        self
    }

    pub fn bounds(mut self, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        self.lower = lower;
        self.upper = upper;
        self
    }

    fn barrier_terms(&self) -> usize {
        self.constraints.len()
            + self.lower.iter().filter(|l| l.is_finite()).count()
            + self.upper.iter().filter(|u| u.is_finite()).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub status: Status,
    /// Newton steps across phase I and phase II.
    pub iterations: usize,
    /// Barrier duality-gap bound m/t; the optimum lies in [objective − gap, objective].
    pub duality_gap: f64,
    /// ‖∇f + Σλ∇g + box multipliers‖∞ at the returned point.
    pub kkt_residual: f64,
    pub multipliers: Vec<f64>,
}

struct Barrier<'p, 'a> {
    prog: &'p ConvexProgram<'a>,
}

enum Eval {
    Infeasible,
    Value(f64),
}

impl Barrier<'_, '_> {
    fn strictly_inside(&self, x: &[f64]) -> bool {
        x.iter().zip(&self.prog.lower).zip(&self.prog.upper).all(|((v, l), u)| v > l && v < u)
    }

    fn value(&self, x: &[f64], t: f64) -> Eval {
        if !self.strictly_inside(x) {
            return Eval::Infeasible;
        }
        let mut phi = t * (self.prog.objective)(x).value;
        for g in &self.prog.constraints {
            let v = g(x).value;
            if !(v < 0.0) {
                return Eval::Infeasible;
            }
            phi -= (-v).ln();
        }
        for ((v, l), u) in x.iter().zip(&self.prog.lower).zip(&self.prog.upper) {
            if l.is_finite() {
                phi -= (v - l).ln();
            }
            if u.is_finite() {
                phi -= (u - v).ln();
            }
        }
        if phi.is_finite() {
            Eval::Value(phi)
        } else {
            Eval::Infeasible
        }
    }

    /// Gradient and Hessian of t·f + barrier.
    fn derivatives(&self, x: &[f64], t: f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.prog.n;
        let f = (self.prog.objective)(x);
        let mut grad: Vec<f64> = f.grad.iter().map(|g| t * g).collect();
        let mut hess: Vec<f64> = f.hess.iter().map(|h| t * h).collect();
        for g in &self.prog.constraints {
            let s = g(x);
            let inv = -1.0 / s.value;
            for i in 0..n {
                grad[i] += inv * s.grad[i];
                for j in 0..n {
                    hess[i * n + j] += inv * inv * s.grad[i] * s.grad[j] + inv * s.hess[i * n + j];
                }
            }
        }
        for i in 0..n {
            let (l, u) = (self.prog.lower[i], self.prog.upper[i]);
            if l.is_finite() {
                let d = x[i] - l;
                grad[i] -= 1.0 / d;
                hess[i * n + i] += 1.0 / (d * d);
            }
            if u.is_finite() {
                let d = u - x[i];
                grad[i] += 1.0 / d;
                hess[i * n + i] += 1.0 / (d * d);
            }
        }
        (grad, hess)
    }
}

/// Cholesky solve, retried with growing diagonal jitter when round-off breaks definiteness.
fn newton_direction(hess: &[f64], n: usize, rhs: &[f64]) -> Result<Vec<f64>> {
    if let Ok(d) = solve_real_spd(hess, n, rhs) {
        return Ok(d);
    }
    let scale = (0..n).map(|i| hess[i * n + i].abs()).fold(0.0f64, f64::max).max(f64::MIN_POSITIVE);
    let mut jitter = 1e-12 * scale;
    for _ in 0..6 {
        let mut h = hess.to_vec();
        (0..n).for_each(|i| h[i * n + i] += jitter);
        if let Ok(d) = solve_real_spd(&h, n, rhs) {
            return Ok(d);
        }
        jitter *= 100.0;
    }
    Err(Error::Solver("barrier Hessian is not positive definite".into()))
}

struct CenterOutcome {
    steps: usize,
    stopped: bool,
}

/// Newton centering at fixed t; returns early if `stop` fires on an iterate.
fn center(
    b: &Barrier,
    x: &mut Vec<f64>,
    t: f64,
    budget: usize,
    stop: Option<&dyn Fn(&[f64]) -> bool>,
) -> Result<CenterOutcome> {
    let n = b.prog.n;
    let mut steps = 0;
    while steps < budget {
        let (grad, hess) = b.derivatives(x, t);
        let neg: Vec<f64> = grad.iter().map(|g| -g).collect();
        let dx = newton_direction(&hess, n, &neg)?;
        let decrement = -dot(&grad, &dx);
        if !(decrement > 1e-12) {
            break;
        }
        let Eval::Value(phi0) = b.value(x, t) else {
            return Err(Error::Solver("barrier iterate left the interior".into()));
        };
        let mut alpha = 1.0;
        let mut moved = false;
        while alpha > 1e-16 {
            let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, d)| a + alpha * d).collect();
            if let Eval::Value(phi) = b.value(&trial, t) {
                if phi <= phi0 - 0.25 * alpha * decrement {
                    *x = trial;
                    moved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        steps += 1;
        if let Some(stop) = stop {
            if stop(x) {
                return Ok(CenterOutcome { steps, stopped: true });
            }
        }
        if !moved {
            break;
        }
    }
    Ok(CenterOutcome { steps, stopped: false })
}

struct BarrierRun {
    x: Vec<f64>,
    t: f64,
    steps: usize,
    stopped: bool,
    converged: bool,
}

const MU: f64 = 20.0;

fn run_barrier(
    prog: &ConvexProgram,
    mut x: Vec<f64>,
    opts: &SolverOptions,
    stop: Option<&dyn Fn(&[f64]) -> bool>,
) -> Result<BarrierRun> {
    let b = Barrier { prog };
    let m = prog.barrier_terms() as f64;
    let f0 = (prog.objective)(&x).value.abs();
    let mut t = if m > 0.0 { (m / f0.max(1e-300)).clamp(1e-3, 1e3) } else { 1.0 };
    let mut steps = 0;
    loop {
        let out = center(&b, &mut x, t, opts.max_newton.saturating_sub(steps).max(1), stop)?;
        steps += out.steps;
        if out.stopped {
            return Ok(BarrierRun { x, t, steps, stopped: true, converged: false });
        }
        let f = (prog.objective)(&x).value;
        let target = opts.tol_gap * f.abs().max(opts.tol_feas);
        if m == 0.0 || m / t <= target {
            return Ok(BarrierRun { x, t, steps, stopped: false, converged: true });
        }
        if steps >= opts.max_newton || t > 1e300 / MU {
            return Ok(BarrierRun { x, t, steps, stopped: false, converged: false });
        }
        t *= MU;
    }
}

fn interior_start(prog: &ConvexProgram, x0: &[f64]) -> Vec<f64> {
    x0.iter()
        .zip(&prog.lower)
        .zip(&prog.upper)
        .map(|((&v, &l), &u)| {
            let width = u - l;
            let margin = if width.is_finite() { 1e-3 * width } else { 1e-3 * v.abs().max(l.abs()).max(u.abs()).max(1.0) };
            let margin = if width.is_finite() { margin } else { margin.min(1.0) };
            let lo = if l.is_finite() { l + margin } else { f64::NEG_INFINITY };
            let hi = if u.is_finite() { u - margin } else { f64::INFINITY };
            if v > l && v < u {
                v
            } else {
                v.clamp(lo, hi)
            }
        })
        .collect()
}

/// Finds a strictly feasible point by minimising the common slack s with g_i(x) ≤ s.
fn phase_one(prog: &ConvexProgram, x: Vec<f64>, opts: &SolverOptions) -> Result<(Option<Vec<f64>>, usize)> {
    let n = prog.n;
    let worst = prog.constraints.iter().map(|g| g(&x).value).fold(f64::NEG_INFINITY, f64::max);
    let s0 = worst + worst.abs().max(1.0) * 0.1;
    let aux = ConvexProgram {
        n: n + 1,
        objective: Box::new(move |z: &[f64]| {
            let mut c = vec![0.0; n + 1];
            c[n] = 1.0;
            Smooth::linear(&c, 0.0, z)
        }),
        constraints: prog
            .constraints
            .iter()
            .map(|g| {
                Box::new(move |z: &[f64]| {
                    let s = g(&z[..n]);
                    let mut grad = s.grad.clone();
                    grad.push(-1.0);
                    let mut hess = vec![0.0; (n + 1) * (n + 1)];
                    for i in 0..n {
                        hess[i * (n + 1)..i * (n + 1) + n].copy_from_slice(&s.hess[i * n..(i + 1) * n]);
                    }
                    Smooth { value: s.value - z[n], grad, hess }
                }) as SmoothFn
            })
            .collect(),
        lower: prog.lower.iter().copied().chain([-(1.0 + worst.abs())]).collect(),
        upper: prog.upper.iter().copied().chain([f64::INFINITY]).collect(),
    };
    let mut z = x;
    z.push(s0);
    let stop = |z: &[f64]| prog.constraints.iter().all(|g| g(&z[..n]).value < 0.0);
    let run = run_barrier(&aux, z, opts, Some(&stop))?;
    if run.stopped || stop(&run.x) {
        return Ok((Some(run.x[..n].to_vec()), run.steps));
    }
    Ok((None, run.steps))
}

/// Solves a smooth convex program from `x0`, running phase I when `x0` is not strictly feasible.
pub fn solve_convex(prog: &ConvexProgram, x0: &[f64], opts: &SolverOptions) -> Result<ConvexSolution> {
    opts.validate()?;
    if x0.len() != prog.n || prog.lower.len() != prog.n || prog.upper.len() != prog.n {
        return Err(Error::Dimension(format!("program has {} variables, start has {}", prog.n, x0.len())));
    }
    if prog.lower.iter().zip(&prog.upper).any(|(l, u)| !(l < u)) {
        return Err(Error::InvalidInput("every box must have lower < upper".into()));
    }
    let mut x = interior_start(prog, x0);
    let mut iterations = 0;
    if prog.constraints.iter().any(|g| !(g(&x).value < 0.0)) {
        let (found, steps) = phase_one(prog, x, opts)?;
        iterations += steps;
        match found {
            Some(p) => x = p,
            None => {
                return Ok(ConvexSolution {
                    x: x0.to_vec(),
                    objective: f64::NAN,
                    status: Status::Infeasible,
                    iterations,
                    duality_gap: f64::INFINITY,
                    kkt_residual: f64::INFINITY,
                    multipliers: Vec::new(),
                })
            }
        }
    }
    let run = run_barrier(prog, x, opts, None)?;
    iterations += run.steps;
    let x = run.x;
    let t = run.t;
    let f = (prog.objective)(&x);
    let mut r = f.grad.clone();
    let mut multipliers = Vec::with_capacity(prog.constraints.len());
    for g in &prog.constraints {
        let s = g(&x);
        let lam = -1.0 / (t * s.value);
        multipliers.push(lam);
        r.iter_mut().zip(&s.grad).for_each(|(a, b)| *a += lam * b);
    }
    for i in 0..prog.n {
        if prog.lower[i].is_finite() {
            r[i] -= 1.0 / (t * (x[i] - prog.lower[i]));
        }
        if prog.upper[i].is_finite() {
            r[i] += 1.0 / (t * (prog.upper[i] - x[i]));
        }
    }
    Ok(ConvexSolution {
        objective: f.value,
        status: if run.converged { Status::Optimal } else { Status::IterationLimit },
        iterations,
        duality_gap: prog.barrier_terms() as f64 / t,
        kkt_residual: r.iter().fold(0.0f64, |a, v| a.max(v.abs())),
        multipliers,
        x,
    })
}
