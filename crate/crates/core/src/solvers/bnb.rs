//! Best-first branch and bound over binary variables.
//!
//! A [`Relaxer`] supplies node lower bounds for the minimisation form of the
//! instance (maximisation objectives are negated). Branching picks the most
//! fractional free binary; children inherit the parent bound when theirs is
//! weaker, so bounds never decrease along a path.

use super::convex::{solve_convex, ConvexProgram, Smooth};
use super::SolverOptions;
use crate::error::{Error, Result};
use crate::problems::{OfdmaScenario, ProblemInstance, ProblemKind, Sense, Solution, Status};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::LN_2;

const INTEGRALITY: f64 = 1e-4;

/// Result of relaxing one node.
#[derive(Debug, Clone)]
pub struct NodeBound {
    /// Lower bound on the best cost below this node.
    pub bound: f64,
    /// Relaxed value of every binary.
    pub relaxed: Vec<f64>,
    /// A feasible point found while bounding: (cost, decision vector).
    pub incumbent: Option<(f64, Vec<f64>)>,
}

pub trait Relaxer {
    fn n_binaries(&self) -> usize;

    /// Bound with `fixed[i] = Some(v)` pinning binary i; `None` when the node is infeasible.
    fn bound(&self, fixed: &[Option<bool>], opts: &SolverOptions) -> Result<Option<NodeBound>>;

    /// SOS1 groups: setting one member to 1 fixes the others to 0.
    fn groups(&self) -> Vec<Vec<usize>> {
        Vec::new()
    }
}

#[derive(Debug, Clone)]
pub struct BnbNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub fixed: Vec<Option<bool>>,
    pub bound: f64,
    pub depth: usize,
}

#[derive(Debug, Clone)]
pub struct BnbReport {
    pub solution: Solution,
    /// Certified global lower bound on the cost.
    pub lower_bound: f64,
    /// Every node whose relaxation was solved, in creation order.
    pub nodes: Vec<BnbNode>,
    pub branchings: usize,
}

struct Open {
    bound: f64,
    id: usize,
    relaxed: Vec<f64>,
}

impl PartialEq for Open {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Open {}
impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Open {
    // max-heap: lowest bound first, then lowest id
    fn cmp(&self, other: &Self) -> Ordering {
        other.bound.total_cmp(&self.bound).then(other.id.cmp(&self.id))
    }
}

fn propagate(fixed: &mut [Option<bool>], groups: &[Vec<usize>], i: usize) {
    for g in groups.iter().filter(|g| g.contains(&i)) {
        for &j in g.iter().filter(|&&j| j != i) {
            if fixed[j].is_none() {
                fixed[j] = Some(false);
            }
        }
    }
}

fn rel_gap(incumbent: f64, lower: f64) -> f64 {
    ((incumbent - lower) / incumbent.abs().max(1e-300)).max(0.0)
}

/// Branch and bound on `instance` using bounds from `relaxer`.
pub fn solve_bnb(instance: &ProblemInstance, relaxer: &dyn Relaxer, opts: &SolverOptions) -> Result<BnbReport> {
    opts.validate()?;
    if !instance.flags.has_binaries {
        return Err(Error::InvalidInput(format!("{} has no binaries to branch on", instance.kind.name())));
    }
    let start = std::time::Instant::now();
    let nb = relaxer.n_binaries();
    let groups = relaxer.groups();
    let mut nodes: Vec<BnbNode> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut branchings = 0;
    let closes = |bound: f64, best: &Option<(f64, Vec<f64>)>| match best {
        Some((inc, _)) => bound >= inc - opts.tol_gap * inc.abs() || inc - bound <= opts.tol_feas,
        None => false,
    };

    // smallest bound among nodes closed without branching
    let mut closed_min = f64::INFINITY;
    let expand = |fixed: Vec<Option<bool>>,
                      parent: Option<(usize, f64, usize)>,
                      nodes: &mut Vec<BnbNode>,
                      heap: &mut BinaryHeap<Open>,
                      best: &mut Option<(f64, Vec<f64>)>,
                      closed_min: &mut f64|
     -> Result<()> {
        let Some(nb_out) = relaxer.bound(&fixed, opts)? else { return Ok(()) };
        let id = nodes.len();
        let bound = parent.map_or(nb_out.bound, |(_, pb, _)| nb_out.bound.max(pb));
        nodes.push(BnbNode { id, parent: parent.map(|p| p.0), fixed: fixed.clone(), bound, depth: parent.map_or(0, |p| p.2 + 1) });
        if let Some((cost, x)) = nb_out.incumbent {
            if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                *best = Some((cost, x));
            }
        }
        let integral = nb_out.relaxed.iter().enumerate().all(|(i, v)| fixed[i].is_some() || v.min(1.0 - v) <= INTEGRALITY);
        if !integral && !closes(bound, best) {
            heap.push(Open { bound, id, relaxed: nb_out.relaxed });
        } else {
            *closed_min = closed_min.min(bound);
        }
        Ok(())
    };

    expand(vec![None; nb], None, &mut nodes, &mut heap, &mut best, &mut closed_min)?;
    let mut exhausted = false;
    while let Some(open) = heap.pop() {
        if closes(open.bound, &best) {
            closed_min = closed_min.min(open.bound);
            continue;
        }
        if nodes.len() + 2 > opts.max_nodes {
            heap.push(open);
            exhausted = true;
            break;
        }
        let node = nodes[open.id].clone();
        let pick = (0..nb)
            .filter(|&i| node.fixed[i].is_none())
            .max_by(|&a, &b| {
                let fa = open.relaxed[a].min(1.0 - open.relaxed[a]);
                let fb = open.relaxed[b].min(1.0 - open.relaxed[b]);
                fa.total_cmp(&fb).then(b.cmp(&a))
            })
            .expect("non-integral node has a free binary");
        branchings += 1;
        for value in [true, false] {
            let mut fixed = node.fixed.clone();
            fixed[pick] = Some(value);
            if value {
                propagate(&mut fixed, &groups, pick);
            }
            expand(fixed, Some((node.id, node.bound, node.depth)), &mut nodes, &mut heap, &mut best, &mut closed_min)?;
        }
    }
    let lower_bound = heap.iter().map(|o| o.bound).fold(closed_min, f64::min);
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let Some((cost, x)) = best else {
        let mut s = Solution::infeasible(nodes.len());
        s.status = if exhausted { Status::IterationLimit } else { Status::Infeasible };
        s.runtime_ms = runtime_ms;
        return Ok(BnbReport { solution: s, lower_bound, nodes, branchings });
    };
    let lower_bound = lower_bound.min(cost);
    let status = if exhausted { Status::Feasible } else { Status::Optimal };
    let mut solution = instance.solution(x, status, opts.tol_feas)?;
    debug_assert!(((if instance.sense == Sense::Minimize { solution.objective } else { -solution.objective }) - cost).abs() <= 1e-6 * cost.abs().max(1.0));
    solution.gap = Some(rel_gap(cost, lower_bound));
    solution.iterations = nodes.len();
    solution.runtime_ms = runtime_ms;
    Ok(BnbReport { solution, lower_bound, nodes, branchings })
}

/// Minimum powers reaching `target` bits over parallel channels with SNR-per-unit-power `a`.
pub fn water_fill_min_power(a: &[f64], target: f64) -> Option<Vec<f64>> {
    if target <= 0.0 {
        return Some(vec![0.0; a.len()]);
    }
    let mut idx: Vec<usize> = (0..a.len()).filter(|&i| a[i] > 0.0).collect();
    idx.sort_by(|&x, &y| a[y].total_cmp(&a[x]).then(x.cmp(&y)));
    if idx.is_empty() {
        return None;
    }
    let mut log_sum = 0.0;
    for n in 1..=idx.len() {
        log_sum += a[idx[n - 1]].log2();
        // log2 μ with Σ_{active} log2(μ a_i) = target
        let log_mu = (target - log_sum) / n as f64;
        let mu = log_mu.exp2();
        let next_ok = n == idx.len() || mu * a[idx[n]] <= 1.0;
        if mu * a[idx[n - 1]] >= 1.0 && next_ok {
            let mut p = vec![0.0; a.len()];
            for &i in &idx[..n] {
                p[i] = (mu - 1.0 / a[i]).max(0.0);
            }
            return Some(p);
        }
    }
    None
}

/// Per-stream subcarrier assignment to stream powers, or `None` if a budget or target fails.
pub fn ofdma_min_power(s: &OfdmaScenario, assignment: &[usize]) -> Option<Vec<f64>> {
    let m = s.subcarriers();
    if assignment.len() != s.total_streams() || assignment.iter().any(|&a| a >= m) {
        return None;
    }
    let mut used = vec![false; m];
    for &a in assignment {
        if std::mem::replace(&mut used[a], true) {
            return None;
        }
    }
    let offs = s.stream_offsets();
    let mut out = vec![0.0; assignment.len()];
    for k in 0..s.users() {
        let streams = offs[k]..offs[k] + s.streams[k];
        let a: Vec<f64> = assignment[streams.clone()].iter().map(|&sc| s.h[k][sc].norm_sqr() / s.sigma2).collect();
        let p = water_fill_min_power(&a, s.r_min[k])?;
        if p.iter().sum::<f64>() > s.p_max[k] * (1.0 + 1e-12) {
            return None;
        }
        out[streams].copy_from_slice(&p);
    }
    Some(out)
}

/// Decision vector for an OFDMA assignment and stream powers.
pub fn ofdma_point(instance: &ProblemInstance, s: &OfdmaScenario, assignment: &[usize], powers: &[f64]) -> Vec<f64> {
    let m = s.subcarriers();
    let offs = s.stream_offsets();
    let mut pi = vec![0.0; m * s.total_streams()];
    for k in 0..s.users() {
        let d = s.streams[k];
        for j in 0..d {
            pi[m * offs[k] + assignment[offs[k] + j] * d + j] = 1.0;
        }
    }
    let mut x = instance.layout.zeros();
    instance.layout.set_real(&mut x, "p", powers);
    instance.layout.set_real(&mut x, "pi", &pi);
    x
}

/// Perspective relaxation of OFDMA power minimisation.
///
/// Per (subcarrier m, stream j) the rate term Π·log2(1 + a·q/Π) is jointly
/// concave in (Π, q), where q = Π·p replaces the bilinear product and obeys the
/// McCormick envelope q ≤ P_max·Π. Stream and subcarrier exclusivity relax to
/// Σ Π ≤ 1; an integral relaxed schedule with an idle stream is completed on a
/// free subcarrier at zero power without changing the cost.
pub struct OfdmaRelaxer<'a> {
    instance: &'a ProblemInstance,
    s: &'a OfdmaScenario,
    /// Binary index → (subcarrier, global stream).
    pairs: Vec<(usize, usize)>,
    owner: Vec<usize>,
}

impl<'a> OfdmaRelaxer<'a> {
    pub fn new(instance: &'a ProblemInstance) -> Result<Self> {
        let ProblemKind::OfdmaPowerMin(s) = &instance.kind else {
            return Err(Error::InvalidInput(format!("OFDMA relaxer given {}", instance.kind.name())));
        };
        let m = s.subcarriers();
        let offs = s.stream_offsets();
        let mut pairs = Vec::with_capacity(m * s.total_streams());
        let mut owner = Vec::with_capacity(s.total_streams());
        for k in 0..s.users() {
            let d = s.streams[k];
            for sc in 0..m {
                for j in 0..d {
                    pairs.push((sc, offs[k] + j));
                }
            }
            owner.extend(std::iter::repeat_n(k, d));
        }
        Ok(Self { instance, s, pairs, owner })
    }

    fn index(&self, sc: usize, stream: usize) -> usize {
        let k = self.owner[stream];
        let offs = self.s.stream_offsets();
        let d = self.s.streams[k];
        self.s.subcarriers() * offs[k] + sc * d + (stream - offs[k])
    }

    /// Rounds relaxed values to a schedule that respects every fixing, then fills powers.
    fn complete(&self, relaxed: &[f64], fixed: &[Option<bool>]) -> Option<(f64, Vec<f64>)> {
        let m = self.s.subcarriers();
        let nd = self.s.total_streams();
        let mut order: Vec<usize> = (0..self.pairs.len()).filter(|&i| fixed[i] != Some(false)).collect();
        order.sort_by(|&a, &b| relaxed[b].total_cmp(&relaxed[a]).then(a.cmp(&b)));
        let mut assign = vec![usize::MAX; nd];
        let mut busy = vec![false; m];
        for &i in order.iter().filter(|&&i| relaxed[i] >= 0.5) {
            let (sc, j) = self.pairs[i];
            if assign[j] == usize::MAX && !busy[sc] {
                assign[j] = sc;
                busy[sc] = true;
            }
        }
        for j in 0..nd {
            if assign[j] == usize::MAX {
                // idle stream: best free subcarrier allowed by the fixings
                let k = self.owner[j];
                let sc = (0..m)
                    .filter(|&sc| !busy[sc] && fixed[self.index(sc, j)] != Some(false))
                    .max_by(|&a, &b| self.s.h[k][a].norm_sqr().total_cmp(&self.s.h[k][b].norm_sqr()).then(b.cmp(&a)))?;
                assign[j] = sc;
                busy[sc] = true;
            }
        }
        let p = ofdma_min_power(self.s, &assign)?;
        Some((p.iter().sum(), ofdma_point(self.instance, self.s, &assign, &p)))
    }
}

enum Slot {
    Free { pi: usize, q: usize },
    On { q: usize },
}

impl Relaxer for OfdmaRelaxer<'_> {
    fn n_binaries(&self) -> usize {
        self.pairs.len()
    }

    fn bound(&self, fixed_in: &[Option<bool>], opts: &SolverOptions) -> Result<Option<NodeBound>> {
        let s = self.s;
        let (m, nd) = (s.subcarriers(), s.total_streams());
        if nd > m {
            return Ok(None);
        }
        let mut fixed = fixed_in.to_vec();
        // a stream or subcarrier pinned to 1 excludes its other pairs
        for i in 0..self.pairs.len() {
            if fixed_in[i] == Some(true) {
                let (sc, j) = self.pairs[i];
                for (l, &(sc2, j2)) in self.pairs.iter().enumerate() {
                    if l != i && (sc2 == sc || j2 == j) {
                        if fixed_in[l] == Some(true) {
                            return Ok(None);
                        }
                        fixed[l] = Some(false);
                    }
                }
            }
        }
        let mut slots: Vec<Option<Slot>> = Vec::with_capacity(self.pairs.len());
        let mut n = 0;
        for f in &fixed {
            slots.push(match f {
                Some(false) => None,
                Some(true) => {
                    n += 1;
                    Some(Slot::On { q: n - 1 })
                }
                None => {
                    n += 2;
                    Some(Slot::Free { pi: n - 2, q: n - 1 })
                }
            });
        }
        let lower = vec![0.0; n];
        let mut upper = vec![f64::INFINITY; n];
        let mut x0 = vec![0.0; n];
        let start_pi = 0.5 / (m.max(nd) + 1) as f64;
        for (i, slot) in slots.iter().enumerate() {
            let pk = s.p_max[self.owner[self.pairs[i].1]];
            match slot {
                Some(Slot::Free { pi, q }) => {
                    upper[*pi] = 1.0;
                    x0[*pi] = start_pi;
                    x0[*q] = 0.5 * start_pi * pk.min(1e6);
                }
                Some(Slot::On { q }) => {
                    upper[*q] = pk;
                    x0[*q] = 0.5 * pk.min(1e6);
                }
                None => {}
            }
        }
        for k in 0..s.users() {
            let has_slot = (0..self.pairs.len()).any(|i| self.owner[self.pairs[i].1] == k && slots[i].is_some());
            if !has_slot && s.r_min[k] > 0.0 {
                return Ok(None);
            }
            if s.p_max[k] <= 0.0 && s.r_min[k] > 0.0 {
                return Ok(None);
            }
        }
        if n == 0 {
            let relaxed = fixed.iter().map(|f| if *f == Some(true) { 1.0 } else { 0.0 }).collect();
            return Ok(Some(NodeBound { bound: 0.0, relaxed, incumbent: None }));
        }
        // zero-budget users keep their slots pinned at zero power
        for (i, slot) in slots.iter().enumerate() {
            let pk = s.p_max[self.owner[self.pairs[i].1]];
            if pk <= 0.0 {
                let q = match slot {
                    Some(Slot::Free { q, .. }) | Some(Slot::On { q }) => *q,
                    None => continue,
                };
                upper[q] = 1e-300;
                x0[q] = 5e-301;
            }
        }
        let q_of = |slot: &Slot| match slot {
            Slot::Free { q, .. } | Slot::On { q } => *q,
        };
        let qs: Vec<usize> = slots.iter().flatten().map(q_of).collect();
        let mut c = vec![0.0; n];
        qs.iter().for_each(|&q| c[q] = 1.0);
        let mut prog = ConvexProgram::new(n, move |x: &[f64]| Smooth::linear(&c, 0.0, x)).bounds(lower, upper);
        for k in 0..s.users() {
            let mine: Vec<(usize, f64)> =
                (0..self.pairs.len()).filter(|&i| self.owner[self.pairs[i].1] == k && slots[i].is_some()).map(|i| (i, s.h[k][self.pairs[i].0].norm_sqr() / s.sigma2)).collect();
            let terms: Vec<(Option<usize>, usize, f64)> = mine
                .iter()
                .map(|&(i, a)| match slots[i].as_ref().unwrap() {
                    Slot::Free { pi, q } => (Some(*pi), *q, a),
                    Slot::On { q } => (None, *q, a),
                })
                .collect();
            let r_min = s.r_min[k];
            if r_min > 0.0 {
                let terms_rate = terms.clone();
                prog = prog.constrain(move |x: &[f64]| rate_shortfall(x, &terms_rate, r_min));
            }
            let pk = s.p_max[k];
            if pk.is_finite() && pk > 0.0 && terms.len() > 1 {
                let mut c = vec![0.0; n];
                terms.iter().for_each(|t| c[t.1] = 1.0);
                prog = prog.constrain(move |x: &[f64]| Smooth::linear(&c, -pk, x));
            }
            if pk.is_finite() && pk > 0.0 {
                for &(pi, q, _) in &terms {
                    if let Some(pi) = pi {
                        let mut c = vec![0.0; n];
                        c[q] = 1.0;
                        c[pi] = -pk;
                        prog = prog.constrain(move |x: &[f64]| Smooth::linear(&c, 0.0, x));
                    }
                }
            }
        }
        let free_pi = |i: usize| match &slots[i] {
            Some(Slot::Free { pi, .. }) => Some(*pi),
            _ => None,
        };
        let mut groups: Vec<Vec<usize>> = (0..nd).map(|j| (0..self.pairs.len()).filter(|&i| self.pairs[i].1 == j).filter_map(free_pi).collect()).collect();
        groups.extend((0..m).map(|sc| (0..self.pairs.len()).filter(|&i| self.pairs[i].0 == sc).filter_map(free_pi).collect()));
        for members in groups.into_iter().filter(|g| g.len() > 1) {
            let mut c = vec![0.0; n];
            members.iter().for_each(|&v| c[v] = 1.0);
            prog = prog.constrain(move |x: &[f64]| Smooth::linear(&c, -1.0, x));
        }
        let sol = solve_convex(&prog, &x0, opts)?;
        if sol.status == Status::Infeasible {
            return Ok(None);
        }
        let relaxed: Vec<f64> = slots
            .iter()
            .zip(&fixed)
            .map(|(slot, f)| match (slot, f) {
                (Some(Slot::Free { pi, .. }), _) => sol.x[*pi],
                (_, Some(true)) => 1.0,
                _ => 0.0,
            })
            .collect();
        let incumbent = self.complete(&relaxed, &fixed);
        Ok(Some(NodeBound { bound: sol.objective - sol.duality_gap, relaxed, incumbent }))
    }
}

/// R_min − Σ φ(Π, q) with φ the perspective of log2(1 + a·q).
fn rate_shortfall(x: &[f64], terms: &[(Option<usize>, usize, f64)], r_min: f64) -> Smooth {
    let n = x.len();
    let mut value = r_min;
    let mut grad = vec![0.0; n];
    let mut hess = vec![0.0; n * n];
    for &(pi, q, a) in terms {
        match pi {
            Some(pi) => {
                let (w, qv) = (x[pi], x[q]);
                let r = a * qv / w;
                value -= w * r.ln_1p() / LN_2;
                grad[q] -= a / ((1.0 + r) * LN_2);
                grad[pi] -= (r.ln_1p() - r / (1.0 + r)) / LN_2;
                let c = 1.0 / (w * (1.0 + r).powi(2) * LN_2);
                hess[pi * n + pi] += c * r * r;
                hess[pi * n + q] -= c * r * a;
                hess[q * n + pi] -= c * r * a;
                hess[q * n + q] += c * a * a;
            }
            None => {
                let qv = x[q];
                value -= (a * qv).ln_1p() / LN_2;
                grad[q] -= a / ((1.0 + a * qv) * LN_2);
                hess[q * n + q] += a * a / ((1.0 + a * qv).powi(2) * LN_2);
            }
        }
    }
    Smooth { value, grad, hess }
}
