//! Semidefinite relaxation of SINR-constrained transmit power minimisation.
//!
//! The lifted program min Σ tr(P_k) over P_k ⪰ 0 with linear SINR and
//! per-antenna rows is solved by ADMM between the polyhedral set and the PSD
//! cone. Beams are recovered from the principal eigenvector and their powers
//! re-solved exactly for the fixed directions.

use super::SolverOptions;
use crate::channels::mfa_stacked_bank;
use crate::error::{Error, Result};
use crate::numerics::{eig_hermitian, outer, psd_project, solve_real, vdot, vnorm2, CMatrix, Rng, C64};
use crate::problems::{alpha_matrix, ProblemInstance, ProblemKind, Solution, Status};
use std::f64::consts::PI;

/// min Σ‖p_k‖² s.t. |h_k^H p_k|² ≥ Γ_k(Σ_r α_kr|h_k^H p_r|² + σ_k²) and Σ_k |p_k,i|² ≤ P_i.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrPowerProblem {
    pub h: Vec<Vec<C64>>,
    pub alpha: Vec<Vec<f64>>,
    pub gamma: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub p_antenna: Option<Vec<f64>>,
}

impl SinrPowerProblem {
    pub fn users(&self) -> usize {
        self.h.len()
    }

    pub fn antennas(&self) -> usize {
        self.h.first().map_or(0, |h| h.len())
    }

    pub fn validate(&self) -> Result<()> {
        let (k, n) = (self.users(), self.antennas());
        if k == 0 || n == 0 {
            return Err(Error::Dimension("SINR power problem needs users and antennas".into()));
        }
        if self.h.iter().any(|h| h.len() != n)
            || self.alpha.len() != k
            || self.alpha.iter().any(|r| r.len() != k)
            || self.gamma.len() != k
            || self.sigmas.len() != k
            || self.p_antenna.as_ref().is_some_and(|p| p.len() != n)
        {
            return Err(Error::Dimension("SINR power problem fields disagree in size".into()));
        }
        if self.gamma.iter().any(|g| !(*g >= 0.0)) || self.sigmas.iter().any(|s| !(*s > 0.0)) {
            return Err(Error::InvalidInput("SINR targets must be >= 0 and noise > 0".into()));
        }
        if self.p_antenna.iter().flatten().any(|p| !(*p >= 0.0)) {
            return Err(Error::InvalidInput("per-antenna limits must be >= 0".into()));
        }
        Ok(())
    }

    /// Worst normalised SINR shortfall and antenna overshoot of `beams`.
    pub fn violation(&self, beams: &[Vec<C64>]) -> f64 {
        let k = self.users();
        let mut worst = 0.0f64;
        for u in 0..k {
            let sig = vdot(&self.h[u], &beams[u]).norm_sqr();
            let interf: f64 = (0..k).filter(|&r| r != u).map(|r| self.alpha[u][r] * vdot(&self.h[u], &beams[r]).norm_sqr()).sum();
            worst = worst.max((self.gamma[u] * (interf + self.sigmas[u]) - sig) / self.sigmas[u]);
        }
        if let Some(lim) = &self.p_antenna {
            for (i, &p) in lim.iter().enumerate() {
                let used: f64 = beams.iter().map(|b| b[i].norm_sqr()).sum();
                worst = worst.max((used - p) / p.max(f64::MIN_POSITIVE));
            }
        }
        worst
    }

    /// Minimum powers for fixed unit directions, if they admit any.
    pub fn powers_for_directions(&self, dirs: &[Vec<C64>]) -> Option<Vec<f64>> {
        let k = self.users();
        let g: Vec<Vec<f64>> = (0..k).map(|u| (0..k).map(|r| vdot(&self.h[u], &dirs[r]).norm_sqr()).collect()).collect();
        let mut a = vec![0.0; k * k];
        let mut b = vec![0.0; k];
        for u in 0..k {
            a[u * k + u] = g[u][u];
            for r in (0..k).filter(|&r| r != u) {
                a[u * k + r] = -self.gamma[u] * self.alpha[u][r] * g[u][r];
            }
            b[u] = self.gamma[u] * self.sigmas[u];
        }
        let q = solve_real(&a, k, &b).ok()?;
        if q.iter().any(|v| !(v.is_finite() && *v >= -1e-12 * v.abs().max(1.0))) {
            return None;
        }
        Some(q.into_iter().map(|v| v.max(0.0)).collect())
    }
}

#[derive(Debug, Clone)]
pub struct SdrOutcome {
    pub status: Status,
    pub beams: Vec<Vec<C64>>,
    pub lifted: Vec<CMatrix>,
    /// Σ tr(P_k) of the relaxation; a lower bound on the optimum.
    pub lifted_power: f64,
    /// Σ‖p_k‖² of the extracted beams.
    pub power: f64,
    /// max_k λ₂/λ₁ over the lifted matrices.
    pub rank_defect: f64,
    pub iterations: usize,
    pub randomized: bool,
    pub violation: f64,
}

/// Affine row Σ_r ⟨A_r, P_r⟩ ≤ b with Hermitian coefficient blocks.
struct Row {
    blocks: Vec<Option<CMatrix>>,
    b: f64,
}

fn inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.data().iter().zip(b.data()).map(|(x, y)| (x.conj() * y).re).sum()
}

fn lifted_rows(p: &SinrPowerProblem, scale: f64) -> Vec<Row> {
    let (k, n) = (p.users(), p.antennas());
    let mut rows = Vec::new();
    for u in 0..k {
        let hk = outer(&p.h[u]);
        let blocks = (0..k)
            .map(|r| {
                if r == u {
                    Some(hk.scale_real(-1.0))
                } else if p.alpha[u][r] != 0.0 && p.gamma[u] != 0.0 {
                    Some(hk.scale_real(p.gamma[u] * p.alpha[u][r]))
                } else {
                    None
                }
            })
            .collect();
        rows.push(Row { blocks, b: -p.gamma[u] * p.sigmas[u] / scale });
    }
    if let Some(lim) = &p.p_antenna {
        for (i, &pi) in lim.iter().enumerate() {
            let mut e = CMatrix::zeros(n, n);
            e[(i, i)] = C64::new(1.0, 0.0);
            rows.push(Row { blocks: vec![Some(e); k], b: pi / scale });
        }
    }
    for row in &mut rows {
        let norm: f64 = row.blocks.iter().flatten().map(|a| inner(a, a)).sum::<f64>().sqrt();
        if norm > 0.0 {
            for a in row.blocks.iter_mut().flatten() {
                *a = a.scale_real(1.0 / norm);
            }
            row.b /= norm;
        }
    }
    rows
}

/// Euclidean projection onto {P : rows hold} by Hildreth's dual coordinate ascent, warm-started.
fn project_polyhedron(rows: &[Row], gram: &[f64], y: &[CMatrix], lambda: &mut [f64]) -> Vec<CMatrix> {
    let m = rows.len();
    let c: Vec<f64> = rows
        .iter()
        .map(|r| r.blocks.iter().zip(y).filter_map(|(a, yk)| a.as_ref().map(|a| inner(a, yk))).sum::<f64>() - r.b)
        .collect();
    for _ in 0..20_000 {
        let mut change = 0.0f64;
        for i in 0..m {
            let gi = gram[i * m + i];
            if gi <= 0.0 {
                continue;
            }
            let grad: f64 = (0..m).map(|j| gram[i * m + j] * lambda[j]).sum::<f64>() - c[i];
            let next = (lambda[i] - grad / gi).max(0.0);
            change = change.max((next - lambda[i]).abs() * gi.sqrt());
            lambda[i] = next;
        }
        if change <= 1e-14 * (1.0 + c.iter().fold(0.0f64, |a, v| a.max(v.abs()))) {
            break;
        }
    }
    let mut out: Vec<CMatrix> = y.to_vec();
    for (row, &l) in rows.iter().zip(lambda.iter()) {
        if l == 0.0 {
            continue;
        }
        for (o, a) in out.iter_mut().zip(&row.blocks) {
            if let Some(a) = a {
                *o = o.sub(&a.scale_real(l));
            }
        }
    }
    out
}

fn frob2(ms: &[CMatrix]) -> f64 {
    ms.iter().map(|m| m.frobenius_norm().powi(2)).sum()
}

fn diff2(a: &[CMatrix], b: &[CMatrix]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.sub(y).frobenius_norm().powi(2)).sum()
}

/// Necessary condition: each user alone must reach its target under the antenna limits.
fn single_user_infeasible(p: &SinrPowerProblem) -> bool {
    let Some(lim) = &p.p_antenna else { return false };
    (0..p.users()).any(|u| {
        let best: f64 = p.h[u].iter().zip(lim).map(|(h, l)| h.norm() * l.sqrt()).sum::<f64>().powi(2);
        p.gamma[u] * p.sigmas[u] > best * (1.0 + 1e-12)
    })
}

/// Solves the lifted relaxation and extracts rank-one beams.
pub fn solve_sdr(p: &SinrPowerProblem, opts: &SolverOptions) -> Result<SdrOutcome> {
    opts.validate()?;
    p.validate()?;
    let (k, n) = (p.users(), p.antennas());
    let zero_beams = vec![vec![C64::new(0.0, 0.0); n]; k];
    if single_user_infeasible(p) {
        return Ok(SdrOutcome {
            status: Status::Infeasible,
            beams: zero_beams,
            lifted: vec![CMatrix::zeros(n, n); k],
            lifted_power: f64::NAN,
            power: f64::NAN,
            rank_defect: f64::NAN,
            iterations: 0,
            randomized: false,
            violation: f64::INFINITY,
        });
    }
    // powers in units of the largest single-user matched-filter requirement
    let scale = (0..k)
        .map(|u| p.gamma[u] * p.sigmas[u] / vnorm2(&p.h[u]).max(f64::MIN_POSITIVE))
        .fold(0.0f64, f64::max);
    let scale = if scale > 0.0 && scale.is_finite() { scale } else { 1.0 };
    let rows = lifted_rows(p, scale);
    let m = rows.len();
    let mut gram = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            gram[i * m + j] = rows[i]
                .blocks
                .iter()
                .zip(&rows[j].blocks)
                .filter_map(|(a, b)| match (a, b) {
                    (Some(a), Some(b)) => Some(inner(a, b)),
                    _ => None,
                })
                .sum();
        }
    }
    let ident = CMatrix::identity(n);
    let mut rho = 1.0;
    let mut z: Vec<CMatrix> = vec![CMatrix::zeros(n, n); k];
    let mut u: Vec<CMatrix> = vec![CMatrix::zeros(n, n); k];
    let mut lambda = vec![0.0; m];
    let max_sweeps = opts.max_iter.saturating_mul(100);
    let eps = 1e-10;
    let mut iterations = 0;
    let mut converged = false;
    let mut primal = f64::INFINITY;
    while iterations < max_sweeps {
        iterations += 1;
        let y: Vec<CMatrix> = z.iter().zip(&u).map(|(zk, uk)| zk.sub(uk).sub(&ident.scale_real(1.0 / rho))).collect();
        let x = project_polyhedron(&rows, &gram, &y, &mut lambda);
        let z_prev = z;
        z = x.iter().zip(&u).map(|(xk, uk)| psd_project(&xk.add(uk).hermitian_part())).collect::<Result<_>>()?;
        for ((uk, xk), zk) in u.iter_mut().zip(&x).zip(&z) {
            *uk = uk.add(xk).sub(zk);
        }
        primal = diff2(&x, &z).sqrt();
        let dual = rho * diff2(&z, &z_prev).sqrt();
        let size = frob2(&z).sqrt().max(1.0);
        let dual_size = rho * frob2(&u).sqrt().max(1.0 / rho);
        if primal <= eps * size && dual <= eps * dual_size {
            converged = true;
            break;
        }
        // residual balancing on a sparse schedule; frequent changes make ADMM cycle
        if iterations % 50 == 0 && iterations <= 5000 {
            if primal > 10.0 * dual {
                rho *= 2.0;
                u.iter_mut().for_each(|m| *m = m.scale_real(0.5));
            } else if dual > 10.0 * primal {
                rho *= 0.5;
                u.iter_mut().for_each(|m| *m = m.scale_real(2.0));
            }
        }
    }
    let lifted: Vec<CMatrix> = z.iter().map(|zk| zk.scale_real(scale)).collect();
    let lifted_power: f64 = lifted.iter().map(|l| l.trace().re).sum();
    if !converged && primal > 1e-3 * frob2(&z).sqrt().max(1.0) {
        return Ok(SdrOutcome {
            status: Status::Infeasible,
            beams: zero_beams,
            lifted,
            lifted_power,
            power: f64::NAN,
            rank_defect: f64::NAN,
            iterations,
            randomized: false,
            violation: f64::INFINITY,
        });
    }
    let mut dirs = Vec::with_capacity(k);
    let mut rank_defect = 0.0f64;
    let mut eigs = Vec::with_capacity(k);
    for l in &lifted {
        let e = eig_hermitian(&l.hermitian_part())?;
        let top = e.eigenvalues[n - 1];
        if top > 0.0 && n > 1 {
            rank_defect = rank_defect.max(e.eigenvalues[n - 2].max(0.0) / top);
        }
        dirs.push(e.eigenvectors.col(n - 1));
        eigs.push(e);
    }
    let mut randomized = false;
    let mut beams = finish(p, &dirs, opts.tol_feas);
    if beams.is_none() {
        randomized = true;
        let mut rng = Rng::for_stream(opts.seed, &[0x5d5]);
        let mut best: Option<(f64, Vec<Vec<C64>>)> = None;
        for _ in 0..200 {
            let cand: Vec<Vec<C64>> = eigs
                .iter()
                .map(|e| {
                    let mut v = vec![C64::new(0.0, 0.0); n];
                    for (j, &lam) in e.eigenvalues.iter().enumerate() {
                        let w = rng.complex_normal() * lam.max(0.0).sqrt();
                        for (i, vi) in v.iter_mut().enumerate() {
                            *vi += e.eigenvectors[(i, j)] * w;
                        }
                    }
                    let norm = vnorm2(&v).sqrt();
                    if norm > 0.0 {
                        v.iter_mut().for_each(|x| *x /= norm);
                    }
                    v
                })
                .collect();
            if let Some(b) = finish(p, &cand, opts.tol_feas) {
                let pw: f64 = b.iter().map(|x| vnorm2(x)).sum();
                if best.as_ref().is_none_or(|(bp, _)| pw < *bp) {
                    best = Some((pw, b));
                }
            }
        }
        beams = best.map(|(_, b)| b);
    }
    let (status, beams) = match beams {
        Some(b) if !randomized => (Status::Optimal, b),
        Some(b) => (Status::Feasible, b),
        None => {
            let b: Vec<Vec<C64>> = dirs.iter().zip(&lifted).map(|(d, l)| d.iter().map(|x| x * l.trace().re.max(0.0).sqrt()).collect()).collect();
            (Status::IterationLimit, b)
        }
    };
    let status = if !converged && status == Status::Optimal { Status::IterationLimit } else { status };
    let power = beams.iter().map(|b| vnorm2(b)).sum();
    let violation = p.violation(&beams);
    Ok(SdrOutcome { status, beams, lifted, lifted_power, power, rank_defect, iterations, randomized, violation })
}

/// Exact powers for the directions, kept only if every constraint holds.
fn finish(p: &SinrPowerProblem, dirs: &[Vec<C64>], tol: f64) -> Option<Vec<Vec<C64>>> {
    let q = p.powers_for_directions(dirs)?;
    let beams: Vec<Vec<C64>> = dirs.iter().zip(&q).map(|(d, &qk)| d.iter().map(|x| x * qk.sqrt()).collect()).collect();
    (p.violation(&beams) <= tol).then_some(beams)
}

/// The precoder block of a UAV or M/FA instance with geometry, order and selection taken from `x`.
pub fn sinr_power_problem(instance: &ProblemInstance, x: &[f64]) -> Result<SinrPowerProblem> {
    instance.layout.check(x)?;
    let l = &instance.layout;
    match &instance.kind {
        ProblemKind::UavPowerMin(s) => {
            let k = s.users.len();
            let r0 = l.real(x, "r0");
            let pos = [r0[0], r0[1], s.altitude];
            let rho = (crate::channels::SPEED_OF_LIGHT / (4.0 * PI * s.fc)).powi(2);
            let (nx, ny, b) = s.array;
            let h = s
                .users
                .iter()
                .map(|rk| {
                    let d2 = (pos[0] - rk[0]).powi(2) + (pos[1] - rk[1]).powi(2) + (pos[2] - rk[2]).powi(2);
                    let (theta, phi) = crate::channels::uav_angles(&pos, rk);
                    let a = crate::channels::upa_steering(theta, phi, nx, ny, b, s.fc)?;
                    Ok(a.into_iter().map(|v| v * (rho / d2).sqrt()).collect())
                })
                .collect::<Result<Vec<Vec<C64>>>>()?;
            let alpha = alpha_matrix(&l.real(x, "alpha").iter().map(|v| v.round()).collect::<Vec<_>>(), k);
            Ok(SinrPowerProblem { h, alpha, gamma: s.gamma_req.clone(), sigmas: s.sigmas.clone(), p_antenna: Some(s.p_antenna.clone()) })
        }
        ProblemKind::MfaPowerMin(s) => {
            let k = s.users();
            let t = l.real(x, "t");
            let bank = mfa_stacked_bank(&s.candidates)?;
            let mut chosen = Vec::with_capacity(s.elements());
            let mut start = 0;
            for c in &s.candidates {
                let q = (0..c.q()).max_by(|&a, &b| t[start + a].total_cmp(&t[start + b])).unwrap_or(0);
                chosen.push(start + q);
                start += c.q();
            }
            let h = (0..k).map(|r| chosen.iter().map(|&i| bank[(r, i)].conj()).collect()).collect();
            let all: Vec<Vec<f64>> = (0..k).map(|u| (0..k).map(|r| if r == u { 0.0 } else { 1.0 }).collect()).collect();
            Ok(SinrPowerProblem { h, alpha: all, gamma: s.gamma_req.clone(), sigmas: s.sigmas.clone(), p_antenna: None })
        }
        _ => Err(Error::InvalidInput(format!("{} has no SINR-constrained precoder block", instance.kind.name()))),
    }
}

#[derive(Debug, Clone)]
pub struct SdrSolution {
    pub solution: Solution,
    pub outcome: SdrOutcome,
}

/// SDR over the precoders of a UAV or M/FA instance; every other block is copied from `x`.
pub fn solve_sdr_beamforming(instance: &ProblemInstance, x: &[f64], opts: &SolverOptions) -> Result<SdrSolution> {
    let start = std::time::Instant::now();
    let prob = sinr_power_problem(instance, x)?;
    let outcome = solve_sdr(&prob, opts)?;
    if outcome.status == Status::Infeasible {
        let mut solution = Solution::infeasible(outcome.iterations);
        solution.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        return Ok(SdrSolution { solution, outcome });
    }
    let mut out = x.to_vec();
    let l = &instance.layout;
    let k = prob.users();
    match &instance.kind {
        ProblemKind::UavPowerMin(_) => {
            let flat: Vec<C64> = outcome.beams.iter().flatten().copied().collect();
            l.set_complex(&mut out, "p", &flat);
        }
        ProblemKind::MfaPowerMin(s) => {
            let n = s.elements();
            let mut pm = vec![C64::new(0.0, 0.0); n * k];
            for (j, b) in outcome.beams.iter().enumerate() {
                for e in 0..n {
                    pm[e * k + j] = b[e];
                }
            }
            l.set_complex(&mut out, "p", &pm);
            let t: Vec<f64> = l.real(x, "t").to_vec();
            let mut start_q = 0;
            let mut snapped = vec![0.0; t.len()];
            let mut u = vec![C64::new(0.0, 0.0); t.len() * k];
            for (e, c) in s.candidates.iter().enumerate() {
                let q = (0..c.q()).max_by(|&a, &b| t[start_q + a].total_cmp(&t[start_q + b])).unwrap_or(0);
                snapped[start_q + q] = 1.0;
                for j in 0..k {
                    u[(start_q + q) * k + j] = pm[e * k + j];
                }
                start_q += c.q();
            }
            l.set_real(&mut out, "t", &snapped);
            l.set_complex(&mut out, "u", &u);
        }
        _ => unreachable!("checked by sinr_power_problem"),
    }
    let mut solution = instance.solution(out, outcome.status, opts.tol_feas)?;
    solution.iterations = outcome.iterations;
    if outcome.lifted_power > 0.0 {
        solution.gap = Some(((outcome.power - outcome.lifted_power) / outcome.lifted_power).max(0.0));
    }
    solution.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(SdrSolution { solution, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn single(h: Vec<C64>, gamma: f64) -> SinrPowerProblem {
        SinrPowerProblem { h: vec![h], alpha: vec![vec![0.0]], gamma: vec![gamma], sigmas: vec![1.0], p_antenna: None }
    }

    #[test]
    fn single_user_matches_matched_filter() {
        // ‖h‖² = 2
        let h = vec![c(1.0, 0.0), c(0.0, 1.0)];
        let out = solve_sdr(&single(h.clone(), 1.0), &SolverOptions::default()).unwrap();
        assert_eq!(out.status, Status::Optimal);
        // oracle: scalar grid over power along h with step 1e-3
        let grid = (0..=2000).map(|i| i as f64 * 1e-3).find(|&pw| 2.0 * pw >= 1.0).unwrap();
        assert!((out.power - grid).abs() <= 1e-3, "{} vs {}", out.power, grid);
        assert!((out.power - 0.5).abs() < 1e-6);
        let cos = vdot(&h, &out.beams[0]).norm() / (vnorm2(&h) * vnorm2(&out.beams[0])).sqrt();
        assert!((cos - 1.0).abs() < 1e-8);
        assert!(out.rank_defect < 1e-6);
    }

    #[test]
    fn zero_target_gives_zero_power() {
        let out = solve_sdr(&single(vec![c(1.0, 0.5), c(-0.3, 0.2)], 0.0), &SolverOptions::default()).unwrap();
        assert!(out.power.abs() < 1e-12, "{}", out.power);
        assert!(out.violation <= 0.0);
    }

    #[test]
    fn orthogonal_users_decouple() {
        let h = vec![vec![c(2.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 1.5)]];
        let p = SinrPowerProblem {
            h: h.clone(),
            alpha: vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            gamma: vec![3.0, 2.0],
            sigmas: vec![0.5, 1.0],
            p_antenna: None,
        };
        let out = solve_sdr(&p, &SolverOptions::default()).unwrap();
        // oracle: each user solved alone
        let alone: f64 = (0..2)
            .map(|u| {
                let s = SinrPowerProblem { sigmas: vec![p.sigmas[u]], ..single(h[u].clone(), p.gamma[u]) };
                solve_sdr(&s, &SolverOptions::default()).unwrap().power
            })
            .sum();
        assert!((out.power - alone).abs() <= 1e-6 * alone, "{out:?} vs {alone}");
        assert!((alone - (3.0 * 0.5 / 4.0 + 2.0 / 2.25)).abs() < 1e-6);
    }

    #[test]
    fn tight_relaxation_matches_lifted_objective() {
        let mut rng = Rng::new(11);
        for _ in 0..3 {
            let h: Vec<Vec<C64>> = (0..2).map(|_| (0..3).map(|_| rng.complex_normal()).collect()).collect();
            let p = SinrPowerProblem {
                h,
                alpha: vec![vec![0.0, 1.0], vec![1.0, 0.0]],
                gamma: vec![1.0, 2.0],
                sigmas: vec![1.0, 1.0],
                p_antenna: None,
            };
            let out = solve_sdr(&p, &SolverOptions::default()).unwrap();
            assert!(out.violation <= 1e-7);
            if out.rank_defect <= 1e-6 {
                assert!((out.power - out.lifted_power).abs() <= 1e-6 * out.lifted_power, "{} vs {}", out.power, out.lifted_power);
            }
        }
    }

    #[test]
    fn unreachable_antenna_limits_are_infeasible() {
        let mut p = single(vec![c(1.0, 0.0), c(1.0, 0.0)], 10.0);
        p.p_antenna = Some(vec![0.1, 0.1]);
        assert_eq!(solve_sdr(&p, &SolverOptions::default()).unwrap().status, Status::Infeasible);
    }
}
