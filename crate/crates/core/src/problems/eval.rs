use super::{IrsScenario, PhaseSet, ProblemInstance, ProblemKind, Residual};
use crate::channels::{uav_angles, upa_steering, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::metrics::{
    irs_sinr, isac_metrics, jcac_energy, noma_rates, ofdma_rate_over, rate, uav_aero_power, worst_case_rsma_rates,
    JcacParams, RsmaAlloc, ScheduleMatrix, SicOrder,
};
use crate::numerics::{vdot, vnorm, vnorm2, CMatrix, C64};
use std::f64::consts::PI;

/// K×K indicator from the K(K−1) off-diagonal slots (row-major, diagonal skipped).
pub fn alpha_matrix(slots: &[f64], k: usize) -> Vec<Vec<f64>> {
    let mut it = slots.iter();
    (0..k)
        .map(|a| (0..k).map(|b| if a == b { 0.0 } else { *it.next().expect("alpha slot count") }).collect())
        .collect()
}

/// Off-diagonal slots of the pairwise indicator of `order`.
pub fn alpha_from_order(order: &SicOrder) -> Vec<f64> {
    let k = order.len();
    let mut out = Vec::with_capacity(k * k.saturating_sub(1));
    for a in 0..k {
        for b in (0..k).filter(|&b| b != a) {
            out.push(order.alpha(a, b));
        }
    }
    out
}

/// Upper bound on ‖h_D,k + FΨh_R,k‖ over all users and phase choices.
pub fn irs_max_gain(s: &IrsScenario) -> f64 {
    let col_norms: Vec<f64> = (0..s.elements()).map(|m| vnorm(&s.f.col(m))).collect();
    s.h_d
        .iter()
        .zip(&s.h_r)
        .map(|(d, r)| vnorm(d) + r.iter().zip(&col_norms).map(|(h, c)| h.norm() * c).sum::<f64>())
        .fold(0.0, f64::max)
}

fn snap(v: f64) -> f64 {
    if v.abs() <= 1e-9 {
        0.0
    } else if (v - 1.0).abs() <= 1e-9 {
        1.0
    } else {
        v
    }
}

fn binary_residuals(out: &mut Vec<Residual>, name: &'static str, vals: &[f64]) {
    for (i, &v) in vals.iter().enumerate() {
        let d = v.abs().min((v - 1.0).abs());
        out.push(Residual { constraint: name, index: i, value: if d <= 1e-9 { 0.0 } else { d }, exact: false });
    }
}

fn pairwise_residuals(out: &mut Vec<Residual>, name: &'static str, alpha: &[Vec<f64>]) {
    let k = alpha.len();
    let mut idx = 0;
    for a in 0..k {
        for b in a + 1..k {
            let v = (snap(alpha[a][b]) + snap(alpha[b][a]) - 1.0).abs();
            out.push(Residual { constraint: name, index: idx, value: v, exact: true });
            idx += 1;
        }
    }
}

fn push(out: &mut Vec<Residual>, name: &'static str, index: usize, value: f64) {
    out.push(Residual { constraint: name, index, value, exact: false });
}

fn rounded_schedule(rows: usize, cols: usize, vals: &[f64]) -> ScheduleMatrix {
    let r: Vec<f64> = vals.iter().map(|v| if *v >= 0.5 { 1.0 } else { 0.0 }).collect();
    ScheduleMatrix::from_values(rows, cols, &r).expect("rounded schedule")
}

fn user_block(pi: &[f64], m: usize, offset: usize, d: usize) -> &[f64] {
    &pi[m * offset..m * (offset + d)]
}

fn chunks(v: &[C64], n: usize) -> Vec<Vec<C64>> {
    v.chunks(n).map(|c| c.to_vec()).collect()
}

fn clamp0(v: &[f64]) -> Vec<f64> {
    v.iter().map(|p| p.max(0.0)).collect()
}

struct UavLinks {
    /// ϱ/d_k² · a_k for every user.
    steer: Vec<Vec<C64>>,
    gain: Vec<f64>,
}

fn uav_links(s: &super::UavScenario, r0: &[f64]) -> Result<UavLinks> {
    let rho = (SPEED_OF_LIGHT / (4.0 * PI * s.fc)).powi(2);
    let pos = [r0[0], r0[1], s.altitude];
    let (nx, ny, b) = s.array;
    let mut steer = Vec::new();
    let mut gain = Vec::new();
    for rk in &s.users {
        let d2 = (pos[0] - rk[0]).powi(2) + (pos[1] - rk[1]).powi(2) + (pos[2] - rk[2]).powi(2);
        let (theta, phi) = uav_angles(&pos, rk);
        steer.push(upa_steering(theta, phi, nx, ny, b, s.fc)?);
        gain.push(rho / d2);
    }
    Ok(UavLinks { steer, gain })
}

fn isac_p(s: &super::IsacScenario, x: &[f64], inst: &ProblemInstance) -> CMatrix {
    let (k, n) = (s.h_c.rows(), s.h_c.cols());
    CMatrix::new(n, k, inst.layout.complex(x, "p")).expect("ISAC precoder block")
}

fn rsma_alloc(inst: &ProblemInstance, x: &[f64], n: usize) -> RsmaAlloc {
    let l = &inst.layout;
    RsmaAlloc { p_c: l.complex(x, "p_c"), p_p: chunks(&l.complex(x, "p_p"), n), c: l.real(x, "c").to_vec() }
}

fn jcac_params(s: &super::JcacScenario, l: &[f64]) -> Vec<JcacParams> {
    s.params.iter().zip(l).map(|(p, &lk)| JcacParams { local_bits: lk, ..*p }).collect()
}

pub(super) fn objective(inst: &ProblemInstance, x: &[f64]) -> Result<f64> {
    let l = &inst.layout;
    match &inst.kind {
        ProblemKind::NomaSumRate(s) => {
            let pi = ScheduleMatrix::from_values(s.subcarriers(), s.users(), l.real(x, "pi"))?;
            Ok(noma_rates(&s.h, &pi, l.real(x, "p"), &s.sigmas)?.iter().sum())
        }
        ProblemKind::OfdmaPowerMin(_) => Ok(l.real(x, "p").iter().sum()),
        ProblemKind::RsmaRobust(s) => {
            let alloc = rsma_alloc(inst, x, s.antennas());
            let w = worst_case_rsma_rates(&s.h_hat, &s.delta, &alloc, &s.sigmas)?;
            Ok(w.r_p_k.iter().zip(&alloc.c).map(|(r, c)| r + c).sum())
        }
        ProblemKind::IrsSumRate(s) => {
            let p = chunks(&l.complex(x, "p"), s.antennas());
            let alpha = alpha_matrix(l.real(x, "alpha"), s.users());
            let g = irs_sinr(&s.h_d, &s.f, l.real(x, "psi"), &s.h_r, &p, &alpha, &s.sigmas)?;
            Ok(g.iter().map(|&v| rate(v)).sum())
        }
        ProblemKind::UavPowerMin(s) => {
            let p = l.complex(x, "p");
            Ok(vnorm2(&p) + uav_aero_power(l.real(x, "v"), &s.power)? + s.antennas() as f64 * s.power.p_circ)
        }
        ProblemKind::MfaPowerMin(_) => Ok(vnorm2(&l.complex(x, "p"))),
        ProblemKind::IsacCommCentric(s) => {
            let m = isac_metrics(&s.h_c, &isac_p(s, x, inst), &s.s, &s.x0, &s.sigmas)?;
            Ok(m.rate.iter().sum())
        }
        ProblemKind::JcacEnergyMin(s) => {
            let p = l.real(x, "p");
            let offs = s.symbol_offsets();
            let powers: Vec<Vec<f64>> = (0..s.users()).map(|k| p[offs[k]..offs[k] + s.d_tot(k)].to_vec()).collect();
            jcac_energy(&jcac_params(s, l.real(x, "l")), &powers)
        }
    }
}

pub(super) fn residuals(inst: &ProblemInstance, x: &[f64]) -> Result<Vec<Residual>> {
    let l = &inst.layout;
    let mut out = Vec::new();
    match &inst.kind {
        ProblemKind::NomaSumRate(s) => {
            let (k, m) = (s.users(), s.subcarriers());
            let p = l.real(x, "p");
            let pi = l.real(x, "pi");
            push(&mut out, "C1", 0, p.iter().sum::<f64>() - s.p_max);
            for u in 0..k {
                push(&mut out, "C2", u, ((0..m).map(|sc| pi[sc * k + u]).sum::<f64>() - 1.0).abs());
            }
            let r = noma_rates(&s.h, &rounded_schedule(m, k, pi), &clamp0(p), &s.sigmas)?;
            for u in 0..k {
                push(&mut out, "C3", u, s.r_min[u] - r[u]);
            }
            binary_residuals(&mut out, "C4", pi);
        }
        ProblemKind::OfdmaPowerMin(s) => {
            let m = s.subcarriers();
            let p = l.real(x, "p");
            let pi = l.real(x, "pi");
            let offs = s.stream_offsets();
            for (u, &o) in offs.iter().enumerate() {
                push(&mut out, "C1", u, p[o..o + s.streams[u]].iter().sum::<f64>() - s.p_max[u]);
            }
            for sc in 0..m {
                let used: f64 = offs
                    .iter()
                    .zip(&s.streams)
                    .map(|(&o, &d)| user_block(pi, m, o, d)[sc * d..(sc + 1) * d].iter().sum::<f64>())
                    .sum();
                push(&mut out, "C2", sc, used - 1.0);
            }
            for (u, &o) in offs.iter().enumerate() {
                let d = s.streams[u];
                let sched = rounded_schedule(m, d, user_block(pi, m, o, d));
                push(&mut out, "C3", u, s.r_min[u] - ofdma_rate_over(&s.h[u], &sched, &clamp0(&p[o..o + d]), s.sigma2, 0..d));
            }
            binary_residuals(&mut out, "C4", pi);
            for (u, &o) in offs.iter().enumerate() {
                let d = s.streams[u];
                let blk = user_block(pi, m, o, d);
                for j in 0..d {
                    push(&mut out, "schedule", o + j, ((0..m).map(|sc| blk[sc * d + j]).sum::<f64>() - 1.0).abs());
                }
            }
        }
        ProblemKind::RsmaRobust(s) => {
            let alloc = rsma_alloc(inst, x, s.antennas());
            let safe = RsmaAlloc { c: clamp0(&alloc.c), ..alloc.clone() };
            let w = worst_case_rsma_rates(&s.h_hat, &s.delta, &safe, &s.sigmas)?;
            let rc = w.r_c_k.iter().copied().fold(f64::INFINITY, f64::min);
            push(&mut out, "C1", 0, alloc.c.iter().sum::<f64>() - rc);
            let power = vnorm2(&alloc.p_c) + alloc.p_p.iter().map(|p| vnorm2(p)).sum::<f64>();
            push(&mut out, "C2", 0, power - s.p_max);
            for u in 0..s.users() {
                push(&mut out, "C3", u, s.r_min[u] - w.r_p_k[u] - w.r_c_k[u]);
            }
            for (u, &c) in alloc.c.iter().enumerate() {
                push(&mut out, "C4", u, -c);
            }
        }
        ProblemKind::IrsSumRate(s) => {
            let p = l.complex(x, "p");
            push(&mut out, "C1", 0, vnorm2(&p) - s.p_max);
            for (i, &psi) in l.real(x, "psi").iter().enumerate() {
                let e = C64::from_polar(1.0, psi);
                let v = match &s.phases {
                    PhaseSet::Continuous => (e.norm() - 1.0).abs(),
                    PhaseSet::Discrete(c) => c.iter().map(|&q| (e - C64::from_polar(1.0, q)).norm()).fold(f64::INFINITY, f64::min),
                };
                push(&mut out, "C2", i, v);
            }
            let a = l.real(x, "alpha");
            binary_residuals(&mut out, "C3", a);
            pairwise_residuals(&mut out, "C4", &alpha_matrix(a, s.users()));
        }
        ProblemKind::UavPowerMin(s) => {
            let (k, n) = (s.users.len(), s.antennas());
            let p = chunks(&l.complex(x, "p"), n);
            for i in 0..n {
                push(&mut out, "C1", i, p.iter().map(|pk| pk[i].norm_sqr()).sum::<f64>() - s.p_antenna[i]);
            }
            let r0 = l.real(x, "r0");
            let v = l.real(x, "v");
            let a = l.real(x, "alpha");
            let alpha = alpha_matrix(a, k);
            let links = uav_links(s, r0)?;
            for u in 0..k {
                let g = links.gain[u];
                let sig = g * vdot(&links.steer[u], &p[u]).norm_sqr();
                let interf: f64 = (0..k).filter(|&r| r != u).map(|r| alpha[u][r] * g * vdot(&links.steer[u], &p[r]).norm_sqr()).sum();
                push(&mut out, "C2", u, (s.gamma_req[u] * (interf + s.sigmas[u]) - sig) / s.sigmas[u]);
            }
            let dv = ((v[0] - s.v_prev[0]).powi(2) + (v[1] - s.v_prev[1]).powi(2)).sqrt();
            push(&mut out, "C3", 0, dv - s.a_max * s.delta_t);
            let speed = (v[0] * v[0] + v[1] * v[1]).sqrt();
            let moved = ((r0[0] - s.r0_prev[0]).powi(2) + (r0[1] - s.r0_prev[1]).powi(2)).sqrt();
            push(&mut out, "C4", 0, (speed * s.delta_t - moved).abs());
            binary_residuals(&mut out, "C5", a);
            pairwise_residuals(&mut out, "C6", &alpha);
        }
        ProblemKind::MfaPowerMin(s) => {
            let k = s.users();
            let nq = s.total_positions();
            let p = l.complex(x, "p");
            let t = l.real(x, "t");
            let u = l.complex(x, "u");
            let bank = crate::channels::mfa_stacked_bank(&s.candidates)?;
            let h_hat: Vec<Vec<C64>> = (0..k).map(|r| bank.row(r).iter().map(|c| c.conj()).collect()).collect();
            let cols: Vec<Vec<C64>> = (0..k).map(|j| (0..nq).map(|i| u[i * k + j]).collect()).collect();
            for r in 0..k {
                let sig = vdot(&h_hat[r], &cols[r]).norm_sqr();
                let interf: f64 = (0..k).filter(|&j| j != r).map(|j| vdot(&h_hat[r], &cols[j]).norm_sqr()).sum();
                push(&mut out, "C1", r, (s.gamma_req[r] * (interf + s.sigmas[r]) - sig) / s.sigmas[r]);
            }
            binary_residuals(&mut out, "C2", t);
            let mut start = 0;
            let mut owner = Vec::with_capacity(nq);
            for (e, c) in s.candidates.iter().enumerate() {
                push(&mut out, "C3", e, (t[start..start + c.q()].iter().sum::<f64>() - 1.0).abs());
                owner.extend(std::iter::repeat(e).take(c.q()));
                start += c.q();
            }
            for j in 0..k {
                let diff: f64 = (0..nq).map(|i| (u[i * k + j] - p[owner[i] * k + j] * t[i]).norm_sqr()).sum();
                push(&mut out, "C4", j, diff.sqrt());
            }
        }
        ProblemKind::IsacCommCentric(s) => {
            let p = isac_p(s, x, inst);
            let l_len = s.s.cols() as f64;
            let ps = p.matmul(&s.s);
            push(&mut out, "C1", 0, ps.frobenius_norm().powi(2) / l_len - s.p_max);
            let mse = ps.sub(&s.x0).frobenius_norm().powi(2) / l_len;
            push(&mut out, "C2", 0, if s.delta.is_finite() { mse - s.delta } else { f64::NEG_INFINITY });
        }
        ProblemKind::JcacEnergyMin(s) => {
            let m = s.subcarriers();
            let p = l.real(x, "p");
            let pi = l.real(x, "pi");
            let lk = l.real(x, "l");
            let offs = s.symbol_offsets();
            let mut rc = Vec::new();
            let mut rm = Vec::new();
            for (u, &o) in offs.iter().enumerate() {
                let d = s.d_tot(u);
                let sched = rounded_schedule(m, d, user_block(pi, m, o, d));
                let pw = clamp0(&p[o..o + d]);
                rc.push(ofdma_rate_over(&s.h[u], &sched, &pw, s.sigma2, 0..s.d_c[u]));
                rm.push(ofdma_rate_over(&s.h[u], &sched, &pw, s.sigma2, s.d_c[u]..d));
            }
            for u in 0..s.users() {
                push(&mut out, "C1", u, s.r_min[u] - rc[u]);
            }
            for u in 0..s.users() {
                push(&mut out, "C2", u, s.params[u].task_bits - lk[u] - rm[u]);
            }
            for (i, &v) in p.iter().enumerate() {
                push(&mut out, "C3", i, -v);
            }
            for u in 0..s.users() {
                push(&mut out, "C4", u, (-lk[u]).max(lk[u] - s.params[u].task_bits));
            }
            binary_residuals(&mut out, "C5", pi);
            for sc in 0..m {
                let used: f64 = offs
                    .iter()
                    .enumerate()
                    .map(|(u, &o)| {
                        let d = s.d_tot(u);
                        user_block(pi, m, o, d)[sc * d..(sc + 1) * d].iter().sum::<f64>()
                    })
                    .sum();
                push(&mut out, "C6", sc, used - 1.0);
            }
        }
    }
    if out.iter().any(|r| r.value.is_nan()) {
        return Err(Error::NonFinite(format!("residuals of {}", inst.kind.name())));
    }
    Ok(out)
}
