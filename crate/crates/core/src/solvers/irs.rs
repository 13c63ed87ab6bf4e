//! Building blocks for IRS-assisted NOMA sum-rate maximisation.
//!
//! Beams come from an oracle: SIC-aware zero forcing, where user r's beam is
//! orthogonal to the channels of every user decoded before r (the only users
//! that treat r as noise), followed by water-filling over the resulting
//! interference-free gains.

use super::bcd::BcdBlock;
use crate::error::{Error, Result};
use crate::metrics::{irs_channels, rate, SicOrder};
use crate::numerics::{vdot, vnorm2, C64};
use crate::problems::{alpha_from_order, alpha_matrix, IrsScenario, PhaseSet, ProblemInstance, ProblemKind};

/// Enumeration budget for joint phase search.
pub const PHASE_ENUMERATION_LIMIT: usize = 4096;
const CONTINUOUS_LEVELS: usize = 64;

pub fn irs_scenario(instance: &ProblemInstance) -> Result<&IrsScenario> {
    match &instance.kind {
        ProblemKind::IrsSumRate(s) => Ok(s),
        k => Err(Error::InvalidInput(format!("expected an IRS instance, got {}", k.name()))),
    }
}

/// Phase values searched per element.
pub fn phase_levels(s: &IrsScenario) -> Vec<f64> {
    match &s.phases {
        PhaseSet::Discrete(c) => c.clone(),
        PhaseSet::Continuous => (0..CONTINUOUS_LEVELS).map(|i| 2.0 * std::f64::consts::PI * i as f64 / CONTINUOUS_LEVELS as f64).collect(),
    }
}

/// Powers maximising Σ log2(1 + g_k q_k / σ_k) with Σ q ≤ P.
pub fn water_fill_sum_rate(g: &[f64], sigmas: &[f64], p_max: f64) -> Vec<f64> {
    let floors: Vec<f64> = g.iter().zip(sigmas).map(|(g, s)| if *g > 0.0 { s / g } else { f64::INFINITY }).collect();
    let mut idx: Vec<usize> = (0..g.len()).filter(|&i| floors[i].is_finite()).collect();
    idx.sort_by(|&a, &b| floors[a].total_cmp(&floors[b]).then(a.cmp(&b)));
    let mut q = vec![0.0; g.len()];
    if p_max <= 0.0 {
        return q;
    }
    let mut n = idx.len();
    while n > 0 {
        let mu = (p_max + idx[..n].iter().map(|&i| floors[i]).sum::<f64>()) / n as f64;
        if mu > floors[idx[n - 1]] {
            for &i in &idx[..n] {
                q[i] = mu - floors[i];
            }
            return q;
        }
        n -= 1;
    }
    q
}

/// Oracle beams for fixed channels and decoding order.
pub fn sic_zf_beams(h: &[Vec<C64>], order: &SicOrder, sigmas: &[f64], p_max: f64) -> Vec<Vec<C64>> {
    let k = h.len();
    let n = h.first().map_or(0, |v| v.len());
    let mut basis: Vec<Vec<C64>> = Vec::new();
    let mut dirs = vec![vec![C64::new(0.0, 0.0); n]; k];
    let mut gains = vec![0.0; k];
    for &r in order.sequence() {
        let mut u = h[r].clone();
        for q in &basis {
            let c = vdot(q, &u);
            u.iter_mut().zip(q).for_each(|(a, b)| *a -= b * c);
        }
        let norm2 = vnorm2(&u);
        if norm2 > 1e-24 * vnorm2(&h[r]).max(f64::MIN_POSITIVE) && norm2 > 0.0 {
            let norm = norm2.sqrt();
            dirs[r] = u.iter().map(|v| v / norm).collect();
            gains[r] = norm2;
        }
        // extend the basis with this user's channel for later users
        let mut w = h[r].clone();
        for q in &basis {
            let c = vdot(q, &w);
            w.iter_mut().zip(q).for_each(|(a, b)| *a -= b * c);
        }
        let wn = vnorm2(&w).sqrt();
        if wn > 1e-12 * vnorm2(&h[r]).sqrt().max(f64::MIN_POSITIVE) {
            basis.push(w.iter().map(|v| v / wn).collect());
        }
    }
    let q = water_fill_sum_rate(&gains, sigmas, p_max);
    dirs.iter().zip(&q).map(|(d, &qk)| d.iter().map(|v| v * qk.sqrt()).collect()).collect()
}

/// Sum rate with the given beams under the order's interference pattern.
pub fn sum_rate(h: &[Vec<C64>], beams: &[Vec<C64>], order: &SicOrder, sigmas: &[f64]) -> f64 {
    let k = h.len();
    (0..k)
        .map(|u| {
            let sig = vdot(&h[u], &beams[u]).norm_sqr();
            let interf: f64 = (0..k).filter(|&r| r != u).map(|r| order.alpha(u, r) * vdot(&h[u], &beams[r]).norm_sqr()).sum();
            rate(sig / (interf + sigmas[u]))
        })
        .sum()
}

/// Worst-case sum rate when each user's effective channel may move by up to `deltas[k]`.
///
/// Signal magnitude shrinks by δ‖p_k‖ and each uncancelled interferer grows by δ‖p_r‖.
pub fn worst_case_sum_rate(h: &[Vec<C64>], beams: &[Vec<C64>], order: &SicOrder, sigmas: &[f64], deltas: &[f64]) -> f64 {
    let k = h.len();
    (0..k)
        .map(|u| {
            let d = deltas[u];
            let sig = (vdot(&h[u], &beams[u]).norm() - d * vnorm2(&beams[u]).sqrt()).max(0.0).powi(2);
            let interf: f64 = (0..k)
                .filter(|&r| r != u)
                .map(|r| order.alpha(u, r) * (vdot(&h[u], &beams[r]).norm() + d * vnorm2(&beams[r]).sqrt()).powi(2))
                .sum();
            rate(sig / (interf + sigmas[u]))
        })
        .sum()
}

/// How candidate configurations are scored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IrsScore<'a> {
    Nominal,
    /// Worst case over per-user balls on the effective channel.
    WorstCase(&'a [f64]),
}

impl IrsScore<'_> {
    pub fn rate(&self, h: &[Vec<C64>], beams: &[Vec<C64>], order: &SicOrder, sigmas: &[f64]) -> f64 {
        match self {
            IrsScore::Nominal => sum_rate(h, beams, order, sigmas),
            IrsScore::WorstCase(d) => worst_case_sum_rate(h, beams, order, sigmas, d),
        }
    }
}

/// Oracle beams for phases and order, with their nominal sum rate.
pub fn oracle_value(s: &IrsScenario, psi: &[f64], order: &SicOrder) -> Result<(f64, Vec<Vec<C64>>)> {
    oracle_score(s, psi, order, IrsScore::Nominal)
}

/// Oracle beams for phases and order, scored by `score`.
pub fn oracle_score(s: &IrsScenario, psi: &[f64], order: &SicOrder, score: IrsScore) -> Result<(f64, Vec<Vec<C64>>)> {
    let h = irs_channels(&s.h_d, &s.f, psi, &s.h_r)?;
    let beams = sic_zf_beams(&h, order, &s.sigmas, s.p_max);
    Ok((score.rate(&h, &beams, order, &s.sigmas), beams))
}

/// Best joint configuration from the enumeration.
#[derive(Debug, Clone)]
pub struct IrsConfiguration {
    pub value: f64,
    pub psi: Vec<f64>,
    pub order: SicOrder,
    pub beams: Vec<Vec<C64>>,
    pub evaluated: usize,
}

/// Scores every decoding order × codebook phase vector with oracle beams.
pub fn enumerate_irs(s: &IrsScenario, score: IrsScore) -> Result<IrsConfiguration> {
    let levels = phase_levels(s);
    let orders = SicOrder::all(s.users());
    let mut best: Option<(f64, Vec<f64>, usize)> = None;
    let mut failure = None;
    let mut evaluated = 0;
    for_each_phase_vector(s.elements(), &levels, |psi| {
        let h = match irs_channels(&s.h_d, &s.f, psi, &s.h_r) {
            Ok(h) => h,
            Err(e) => return failure = Some(e),
        };
        for (i, order) in orders.iter().enumerate() {
            let beams = sic_zf_beams(&h, order, &s.sigmas, s.p_max);
            let v = score.rate(&h, &beams, order, &s.sigmas);
            evaluated += 1;
            if best.as_ref().is_none_or(|b| v > b.0) {
                best = Some((v, psi.to_vec(), i));
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let (value, psi, i) = best.ok_or_else(|| Error::InvalidInput("empty configuration space".into()))?;
    let order = orders[i].clone();
    let (_, beams) = oracle_score(s, &psi, &order, score)?;
    Ok(IrsConfiguration { value, psi, order, beams, evaluated })
}

/// Score of the configuration encoded in `x`.
pub fn irs_objective(instance: &ProblemInstance, x: &[f64], score: IrsScore) -> Result<f64> {
    let s = irs_scenario(instance)?;
    let order = irs_order(instance, x)?;
    let h = irs_channels(&s.h_d, &s.f, instance.layout.real(x, "psi"), &s.h_r)?;
    Ok(score.rate(&h, &beams_of(instance, x, s.users()), &order, &s.sigmas))
}

/// Decision vector for beams, phases and order.
pub fn irs_point(instance: &ProblemInstance, beams: &[Vec<C64>], psi: &[f64], order: &SicOrder) -> Vec<f64> {
    let l = &instance.layout;
    let mut x = l.zeros();
    let flat: Vec<C64> = beams.iter().flatten().copied().collect();
    l.set_complex(&mut x, "p", &flat);
    l.set_real(&mut x, "psi", psi);
    l.set_real(&mut x, "alpha", &alpha_from_order(order));
    x
}

/// Decoding order encoded in `x`.
pub fn irs_order(instance: &ProblemInstance, x: &[f64]) -> Result<SicOrder> {
    let s = irs_scenario(instance)?;
    let a: Vec<f64> = instance.layout.real(x, "alpha").iter().map(|v| v.round()).collect();
    SicOrder::from_pairwise(&alpha_matrix(&a, s.users()))
}

/// Per-user beams encoded in `x`.
pub fn irs_beams(instance: &ProblemInstance, x: &[f64]) -> Result<Vec<Vec<C64>>> {
    Ok(beams_of(instance, x, irs_scenario(instance)?.users()))
}

fn beams_of(instance: &ProblemInstance, x: &[f64], k: usize) -> Vec<Vec<C64>> {
    let p = instance.layout.complex(x, "p");
    p.chunks(p.len() / k.max(1)).map(|c| c.to_vec()).collect()
}

/// Every phase vector over `levels`, in lexicographic order.
pub fn for_each_phase_vector(m: usize, levels: &[f64], mut f: impl FnMut(&[f64])) {
    let q = levels.len();
    let mut digits = vec![0usize; m];
    let mut psi = vec![levels[0]; m];
    loop {
        f(&psi);
        let mut i = m;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < q {
                psi[i] = levels[digits[i]];
                break;
            }
            digits[i] = 0;
            psi[i] = levels[0];
        }
    }
}

/// Best phases for `score`: joint enumeration when small enough, else cyclic element-wise search from `start`.
pub fn search_phases(m: usize, levels: &[f64], start: &[f64], mut score: impl FnMut(&[f64]) -> f64) -> (Vec<f64>, f64) {
    let total = (levels.len() as f64).powi(m as i32);
    if total <= PHASE_ENUMERATION_LIMIT as f64 {
        let mut best = (start.to_vec(), score(start));
        for_each_phase_vector(m, levels, |psi| {
            let v = score(psi);
            if v > best.1 {
                best = (psi.to_vec(), v);
            }
        });
        return best;
    }
    let mut psi = start.to_vec();
    let mut value = score(&psi);
    for _ in 0..10 {
        let before = value;
        for i in 0..m {
            let keep = psi[i];
            let mut best = (keep, value);
            for &lv in levels {
                psi[i] = lv;
                let v = score(&psi);
                if v > best.1 {
                    best = (lv, v);
                }
            }
            psi[i] = best.0;
            value = best.1;
        }
        if value <= before {
            break;
        }
    }
    (psi, value)
}

/// Beams ← oracle at the current phases and order.
pub fn irs_beam_block<'a>(instance: &'a ProblemInstance) -> BcdBlock<'a> {
    BcdBlock::new("beams", move |x: &[f64]| {
        let s = irs_scenario(instance)?;
        let order = irs_order(instance, x)?;
        let psi = instance.layout.real(x, "psi").to_vec();
        let (_, beams) = oracle_value(s, &psi, &order)?;
        Ok(irs_point(instance, &beams, &psi, &order))
    })
}

/// Phases ← codebook search. With `with_oracle` each candidate is scored with its oracle beams,
/// otherwise the current beams stay fixed.
pub fn irs_phase_block<'a>(instance: &'a ProblemInstance, with_oracle: bool, score: IrsScore<'a>) -> BcdBlock<'a> {
    BcdBlock::new("phases", move |x: &[f64]| {
        let s = irs_scenario(instance)?;
        let order = irs_order(instance, x)?;
        let start = instance.layout.real(x, "psi").to_vec();
        let beams = beams_of(instance, x, s.users());
        let levels = phase_levels(s);
        let value = |psi: &[f64]| -> f64 {
            if with_oracle {
                oracle_score(s, psi, &order, score).map_or(f64::NEG_INFINITY, |v| v.0)
            } else {
                irs_channels(&s.h_d, &s.f, psi, &s.h_r).map_or(f64::NEG_INFINITY, |h| score.rate(&h, &beams, &order, &s.sigmas))
            }
        };
        let (psi, _) = search_phases(s.elements(), &levels, &start, value);
        let beams = if with_oracle { oracle_value(s, &psi, &order)?.1 } else { beams };
        Ok(irs_point(instance, &beams, &psi, &order))
    })
}

/// Decoding order ← best of all K! orders, each scored with its oracle beams.
pub fn irs_order_block<'a>(instance: &'a ProblemInstance, score: IrsScore<'a>) -> BcdBlock<'a> {
    BcdBlock::new("order", move |x: &[f64]| {
        let s = irs_scenario(instance)?;
        if s.users() > 6 {
            return Err(Error::Budget(format!("{}! decoding orders exceed the enumeration budget", s.users())));
        }
        let psi = instance.layout.real(x, "psi").to_vec();
        let mut best: Option<(f64, SicOrder, Vec<Vec<C64>>)> = None;
        for order in SicOrder::all(s.users()) {
            let (v, beams) = oracle_score(s, &psi, &order, score)?;
            if best.as_ref().is_none_or(|b| v > b.0) {
                best = Some((v, order, beams));
            }
        }
        let (_, order, beams) = best.expect("at least one order");
        Ok(irs_point(instance, &beams, &psi, &order))
    })
}
