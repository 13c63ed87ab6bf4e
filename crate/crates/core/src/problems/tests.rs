use super::*;
use crate::channels::MfaCandidateSet;
use crate::metrics::{
    irs_sinr, isac_metrics, noma_subcarrier_rates, uav_aero_power, uav_sinr, worst_case_rsma_rates, JcacParams, RsmaAlloc,
    SicOrder, UavPowerParams,
};
use crate::channels::Geometry;
use crate::numerics::{CMatrix, Rng, C64};
use proptest::prelude::*;

fn cvec(n: usize, rng: &mut Rng) -> Vec<C64> {
    (0..n).map(|_| rng.complex_normal()).collect()
}

fn cmat(r: usize, c: usize, rng: &mut Rng) -> CMatrix {
    CMatrix::from_fn(r, c, |_, _| rng.complex_normal())
}

fn noma(k: usize, m: usize, rng: &mut Rng) -> NomaScenario {
    NomaScenario {
        h: (0..k).map(|_| cvec(m, rng)).collect(),
        sigmas: vec![0.5; k],
        p_max: 4.0,
        r_min: vec![0.0; k],
    }
}

fn ofdma(rng: &mut Rng) -> OfdmaScenario {
    OfdmaScenario {
        h: (0..2).map(|_| cvec(3, rng)).collect(),
        streams: vec![1, 2],
        sigma2: 1.0,
        p_max: vec![5.0, 5.0],
        r_min: vec![0.0, 0.0],
    }
}

fn irs(k: usize, n: usize, m: usize, phases: PhaseSet, rng: &mut Rng) -> IrsScenario {
    IrsScenario {
        h_d: (0..k).map(|_| cvec(n, rng)).collect(),
        f: cmat(n, m, rng),
        h_r: (0..k).map(|_| cvec(m, rng)).collect(),
        sigmas: vec![0.3; k],
        p_max: 2.0,
        phases,
    }
}

fn isac(delta: f64, rng: &mut Rng) -> IsacScenario {
    IsacScenario { h_c: cmat(2, 3, rng), s: cmat(2, 4, rng), x0: cmat(3, 4, rng), sigmas: vec![0.2, 0.4], p_max: 3.0, delta }
}

fn uav() -> UavScenario {
    UavScenario {
        users: vec![[10.0, 0.0, 0.0], [-5.0, 8.0, 0.0]],
        altitude: 50.0,
        r0_prev: [0.0, 0.0],
        v_prev: [0.0, 0.0],
        fc: 2.4e9,
        array: (2, 2, 0.0625),
        sigmas: vec![1e-12, 1e-12],
        gamma_req: vec![1.0, 2.0],
        p_antenna: vec![1.0; 4],
        a_max: 5.0,
        delta_t: 1.0,
        power: UavPowerParams::default(),
    }
}

fn mfa(rng: &mut Rng) -> MfaScenario {
    let candidates = (0..2)
        .map(|n| MfaCandidateSet::new(vec![[n as f64, 0.0], [n as f64, 0.5], [n as f64, 1.0]], cmat(2, 3, rng)).unwrap())
        .collect();
    MfaScenario { candidates, sigmas: vec![0.1, 0.2], gamma_req: vec![1.0, 1.0] }
}

fn jcac(rng: &mut Rng) -> JcacScenario {
    let p = JcacParams { capacitance: 0.5, cycles_per_bit: 2.0, task_bits: 6.0, local_bits: 0.0, latency: 1.0, symbol_time: 0.1 };
    JcacScenario {
        h: (0..2).map(|_| cvec(4, rng)).collect(),
        d_c: vec![1, 1],
        d_mec: vec![1, 0],
        sigma2: 0.5,
        params: vec![p, JcacParams { task_bits: 3.0, ..p }],
        r_min: vec![0.5, 0.5],
    }
}

fn all_kinds(rng: &mut Rng) -> Vec<ProblemInstance> {
    [
        ProblemKind::NomaSumRate(noma(3, 2, rng)),
        ProblemKind::OfdmaPowerMin(ofdma(rng)),
        ProblemKind::RsmaRobust(RsmaScenario {
            h_hat: (0..2).map(|_| cvec(3, rng)).collect(),
            delta: vec![0.1, 0.2],
            sigmas: vec![0.5, 0.5],
            p_max: 2.0,
            r_min: vec![0.1, 0.1],
        }),
        ProblemKind::IrsSumRate(irs(2, 3, 4, PhaseSet::uniform_bits(2), rng)),
        ProblemKind::UavPowerMin(uav()),
        ProblemKind::MfaPowerMin(mfa(rng)),
        ProblemKind::IsacCommCentric(isac(1.0, rng)),
        ProblemKind::JcacEnergyMin(jcac(rng)),
    ]
    .into_iter()
    .map(|k| build_problem(k).unwrap())
    .collect()
}

/// Random point: continuous entries in [0, 1], binaries rounded, phases in [0, 2π).
fn random_x(inst: &ProblemInstance, rng: &mut Rng) -> Vec<f64> {
    let mut x = inst.layout.zeros();
    for b in inst.layout.blocks() {
        for v in &mut x[b.range()] {
            *v = match b.kind {
                BlockKind::Binary => (rng.uniform() < 0.5) as u8 as f64,
                BlockKind::Complex => rng.normal(),
                BlockKind::Continuous { .. } if b.name == "psi" => rng.uniform_range(0.0, 6.28),
                BlockKind::Continuous { .. } => rng.uniform(),
            };
        }
    }
    x
}

fn one_hot_schedule(inst: &ProblemInstance, x: &mut [f64], rng: &mut Rng) {
    // one subcarrier per user / stream, columns of width `cols`
    let (rows, cols) = match &inst.kind {
        ProblemKind::NomaSumRate(s) => (s.subcarriers(), s.users()),
        _ => return,
    };
    let mut pi = vec![0.0; rows * cols];
    for c in 0..cols {
        pi[rng.index(rows) * cols + c] = 1.0;
    }
    inst.layout.set_real(x, "pi", &pi);
}

#[test]
fn layouts_and_flags() {
    let mut rng = Rng::new(1);
    let insts = all_kinds(&mut rng);
    let dims: Vec<usize> = insts.iter().map(|i| i.layout.dim()).collect();
    // NOMA 3+6, OFDMA 3+9, RSMA 6+12+2, IRS 12+4+2, UAV 16+2+2+2, M/FA 8+6+24, ISAC 12, JCAC 3+12+2
    assert_eq!(dims, vec![9, 12, 20, 18, 22, 38, 12, 17]);
    assert_eq!(insts[0].flags.monotone_in, vec!["p"]);
    assert!(insts[0].flags.has_binaries && insts[0].sense == Sense::Maximize);
    assert!(!insts[6].flags.has_binaries);
    assert_eq!(insts[7].constraints.len(), 6);
}

#[test]
fn single_user_noma_matches_scalar_rate() {
    let s = NomaScenario { h: vec![vec![C64::new(1.0, 1.0)]], sigmas: vec![0.5], p_max: 3.0, r_min: vec![0.0] };
    let inst = build_problem(ProblemKind::NomaSumRate(s)).unwrap();
    assert_eq!(inst.layout.block("p").unwrap().len, 1);
    assert_eq!(inst.layout.block("pi").unwrap().len, 1);
    let x = vec![2.0, 1.0];
    let want = (1.0f64 + 2.0 * 2.0 / 0.5).log2();
    assert!((evaluate_objective(&inst, &x).unwrap() - want).abs() < 1e-12);
}

#[test]
fn zero_power_rate_objectives_vanish() {
    let mut rng = Rng::new(2);
    let insts = all_kinds(&mut rng);
    for i in [0usize, 2, 3] {
        let inst = &insts[i];
        let mut x = random_x(inst, &mut rng);
        for b in inst.layout.blocks() {
            if matches!(b.kind, BlockKind::Complex) || b.name == "p" || b.name == "c" {
                x[b.range()].iter_mut().for_each(|v| *v = 0.0);
            }
        }
        one_hot_schedule(inst, &mut x, &mut rng);
        assert_eq!(evaluate_objective(inst, &x).unwrap(), 0.0, "{}", inst.kind.name());
    }
}

#[test]
fn uav_hover_baseline() {
    let inst = build_problem(ProblemKind::UavPowerMin(uav())).unwrap();
    let x = inst.layout.zeros();
    let p = UavPowerParams::default();
    let want = uav_aero_power(&[0.0, 0.0], &p).unwrap() + 4.0 * p.p_circ;
    assert_eq!(evaluate_objective(&inst, &x).unwrap(), want);
}

#[test]
fn ofdma_vacuous_qos_is_feasible_at_zero_power() {
    let mut rng = Rng::new(3);
    let inst = build_problem(ProblemKind::OfdmaPowerMin(ofdma(&mut rng))).unwrap();
    let mut x = inst.layout.zeros();
    let mut pi = vec![0.0; 9];
    pi[1] = 1.0; // user 0, m=1
    pi[3] = 1.0; // user 1, m=0, d=0
    pi[3 + 2 * 2 + 1] = 1.0; // user 1, m=2, d=1
    inst.layout.set_real(&mut x, "pi", &pi);
    let f = check_feasibility(&inst, &x, 1e-9).unwrap();
    assert!(f.feasible, "{:?}", f.violated(1e-9));
    assert_eq!(evaluate_objective(&inst, &x).unwrap(), 0.0);
    pi[5] = 1.0; // second stream of user 1 also on subcarrier 1
    inst.layout.set_real(&mut x, "pi", &pi);
    let f = check_feasibility(&inst, &x, 1e-9).unwrap();
    assert_eq!(f.violated(1e-9), vec!["C2", "schedule"]);
}

#[test]
fn isac_without_sensing_budget_is_power_only() {
    let mut rng = Rng::new(4);
    let s = isac(f64::INFINITY, &mut rng);
    let inst = build_problem(ProblemKind::IsacCommCentric(s.clone())).unwrap();
    for a in 0..5 {
        for b in 0..5 {
            let mut p = CMatrix::zeros(3, 2);
            p.data_mut()[0] = C64::new(a as f64 * 0.2, 0.0);
            p.data_mut()[3] = C64::new(0.0, b as f64 * 0.2);
            let mut x = inst.layout.zeros();
            inst.layout.set_complex(&mut x, "p", p.data());
            let want: f64 = isac_metrics(&s.h_c, &p, &s.s, &s.x0, &s.sigmas).unwrap().rate.iter().sum();
            assert_eq!(evaluate_objective(&inst, &x).unwrap(), want);
            let f = check_feasibility(&inst, &x, 1e-9).unwrap();
            let c2 = f.residuals.iter().find(|r| r.constraint == "C2").unwrap();
            assert_eq!(c2.value, f64::NEG_INFINITY);
            let power = p.matmul(&s.s).frobenius_norm().powi(2) / 4.0;
            assert_eq!(f.feasible, power <= s.p_max + 1e-9);
        }
    }
}

#[test]
fn power_violation_shows_on_c1() {
    let mut rng = Rng::new(5);
    let inst = build_problem(ProblemKind::NomaSumRate(noma(2, 1, &mut rng))).unwrap();
    let x = vec![2.05, 2.05, 1.0, 1.0];
    let f = check_feasibility(&inst, &x, 1e-9).unwrap();
    assert!((f.residuals[0].value - 0.1).abs() < 1e-12);
    assert_eq!(f.residuals[0].constraint, "C1");
    assert_eq!(f.violated(1e-9), vec!["C1"]);
}

#[test]
fn mfa_non_one_hot_selection_is_named() {
    let mut rng = Rng::new(6);
    let inst = build_problem(ProblemKind::MfaPowerMin(mfa(&mut rng))).unwrap();
    let mut x = inst.layout.zeros();
    inst.layout.set_real(&mut x, "t", &[1.0, 1.0, 0.0, 0.0, 1.0, 0.0]);
    let f = check_feasibility(&inst, &x, 1e-9).unwrap();
    assert!(!f.feasible);
    assert!(f.violated(1e-9).contains(&"C3"));
}

#[test]
fn mfa_lifted_consistency() {
    let mut rng = Rng::new(7);
    let s = mfa(&mut rng);
    let inst = build_problem(ProblemKind::MfaPowerMin(s.clone())).unwrap();
    let mut x = inst.layout.zeros();
    let t = [0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
    inst.layout.set_real(&mut x, "t", &t);
    let p = cvec(4, &mut rng);
    inst.layout.set_complex(&mut x, "p", &p);
    // U = T P, element n owns rows 3n..3n+3
    let mut u = vec![C64::new(0.0, 0.0); 12];
    for i in 0..6 {
        for k in 0..2 {
            u[i * 2 + k] = p[(i / 3) * 2 + k] * t[i];
        }
    }
    inst.layout.set_complex(&mut x, "u", &u);
    let f = check_feasibility(&inst, &x, 1e-12).unwrap();
    assert!(f.residuals.iter().filter(|r| r.constraint == "C4").all(|r| r.value == 0.0));
    u[0] += C64::new(0.5, 0.0);
    inst.layout.set_complex(&mut x, "u", &u);
    let f = check_feasibility(&inst, &x, 1e-12).unwrap();
    assert!((f.residuals.iter().find(|r| r.constraint == "C4").unwrap().value - 0.5).abs() < 1e-12);
}

#[test]
fn jcac_offloading_residual_is_exact() {
    let mut rng = Rng::new(8);
    let s = jcac(&mut rng);
    let inst = build_problem(ProblemKind::JcacEnergyMin(s.clone())).unwrap();
    for _ in 0..20 {
        let mut x = random_x(&inst, &mut rng);
        let mut pi = vec![0.0; 12];
        // user 0: comm on m=0, task on m=2; user 1: comm on m=3
        pi[0] = 1.0;
        pi[2 * 2 + 1] = 1.0;
        pi[8 + 3] = 1.0;
        inst.layout.set_real(&mut x, "pi", &pi);
        let p = inst.layout.real(&x, "p").to_vec();
        let l = inst.layout.real(&x, "l").to_vec();
        let sched = crate::metrics::ScheduleMatrix::from_assignment(4, &[0, 2]).unwrap();
        let (_, r_mec) = crate::metrics::jcac_rates(&s.h[0], &sched, 1, &p[..2], s.sigma2).unwrap();
        let f = check_feasibility(&inst, &x, 1e-9).unwrap();
        let c2: Vec<f64> = f.residuals.iter().filter(|r| r.constraint == "C2").map(|r| r.value).collect();
        assert_eq!(c2[0], s.params[0].task_bits - l[0] - r_mec);
        assert_eq!(c2[1], s.params[1].task_bits - l[1]);
    }
}

#[test]
fn objective_matches_metrics_on_random_points() {
    let mut rng = Rng::new(9);
    let insts = all_kinds(&mut rng);
    for _ in 0..100 {
        // NOMA: single subcarrier per user, rates from the per-subcarrier formula
        let inst = &insts[0];
        let ProblemKind::NomaSumRate(s) = &inst.kind else { unreachable!() };
        let mut x = random_x(inst, &mut rng);
        one_hot_schedule(inst, &mut x, &mut rng);
        let p = inst.layout.real(&x, "p");
        let pi = inst.layout.real(&x, "pi");
        let mut want = 0.0;
        for m in 0..2 {
            let users: Vec<usize> = (0..3).filter(|&u| pi[m * 3 + u] == 1.0).collect();
            if users.is_empty() {
                continue;
            }
            let g: Vec<f64> = users.iter().map(|&u| s.h[u][m].norm_sqr()).collect();
            let pw: Vec<f64> = users.iter().map(|&u| p[u]).collect();
            let sg: Vec<f64> = users.iter().map(|&u| s.sigmas[u]).collect();
            want += noma_subcarrier_rates(&g, &pw, &sg, &SicOrder::by_gain(&g)).unwrap().iter().sum::<f64>();
        }
        assert!((evaluate_objective(inst, &x).unwrap() - want).abs() < 1e-12);

        let inst = &insts[2];
        let ProblemKind::RsmaRobust(s) = &inst.kind else { unreachable!() };
        let x = random_x(inst, &mut rng);
        let l = &inst.layout;
        let pp = l.complex(&x, "p_p");
        let alloc = RsmaAlloc { p_c: l.complex(&x, "p_c"), p_p: vec![pp[..3].to_vec(), pp[3..].to_vec()], c: l.real(&x, "c").to_vec() };
        let w = worst_case_rsma_rates(&s.h_hat, &s.delta, &alloc, &s.sigmas).unwrap();
        let want: f64 = (0..2).map(|k| w.r_p_k[k] + alloc.c[k]).sum();
        assert_eq!(evaluate_objective(inst, &x).unwrap(), want);

        let inst = &insts[3];
        let ProblemKind::IrsSumRate(s) = &inst.kind else { unreachable!() };
        let mut x = random_x(inst, &mut rng);
        let order = if rng.uniform() < 0.5 { SicOrder::identity(2) } else { SicOrder::from_sequence(vec![1, 0]).unwrap() };
        inst.layout.set_real(&mut x, "alpha", &alpha_from_order(&order));
        let pp = inst.layout.complex(&x, "p");
        let prec = vec![pp[..3].to_vec(), pp[3..].to_vec()];
        let g = irs_sinr(&s.h_d, &s.f, inst.layout.real(&x, "psi"), &s.h_r, &prec, &order.to_pairwise(), &s.sigmas).unwrap();
        let want: f64 = g.iter().map(|v| (1.0 + v).log2()).sum();
        assert!((evaluate_objective(inst, &x).unwrap() - want).abs() < 1e-12);

        let inst = &insts[6];
        let ProblemKind::IsacCommCentric(s) = &inst.kind else { unreachable!() };
        let x = random_x(inst, &mut rng);
        let p = CMatrix::new(3, 2, inst.layout.complex(&x, "p")).unwrap();
        let want: f64 = isac_metrics(&s.h_c, &p, &s.s, &s.x0, &s.sigmas).unwrap().rate.iter().sum();
        assert_eq!(evaluate_objective(inst, &x).unwrap(), want);

        let inst = &insts[7];
        let ProblemKind::JcacEnergyMin(s) = &inst.kind else { unreachable!() };
        let x = random_x(inst, &mut rng);
        let p = inst.layout.real(&x, "p");
        let l = inst.layout.real(&x, "l");
        let mut want = 0.0;
        for k in 0..2 {
            let q = &s.params[k];
            want += q.capacitance * (q.cycles_per_bit * l[k]).powi(3) / (q.latency * q.latency);
            let off = if k == 0 { 0 } else { 2 };
            want += p[off..off + s.d_tot(k)].iter().sum::<f64>() * q.symbol_time;
        }
        assert!((evaluate_objective(inst, &x).unwrap() - want).abs() < 1e-12 * want.max(1.0));

        let inst = &insts[4];
        let x = random_x(inst, &mut rng);
        let p = inst.layout.complex(&x, "p");
        let want = p.iter().map(|c| c.norm_sqr()).sum::<f64>()
            + uav_aero_power(inst.layout.real(&x, "v"), &UavPowerParams::default()).unwrap()
            + 2.0;
        assert!((evaluate_objective(inst, &x).unwrap() - want).abs() < 1e-12 * want);
    }
}

#[test]
fn uav_sinr_constraint_agrees_with_metric() {
    let s = uav();
    let inst = build_problem(ProblemKind::UavPowerMin(s.clone())).unwrap();
    let mut rng = Rng::new(10);
    for _ in 0..20 {
        let mut x = random_x(&inst, &mut rng);
        let order = SicOrder::from_sequence(vec![1, 0]).unwrap();
        inst.layout.set_real(&mut x, "alpha", &alpha_from_order(&order));
        let r0 = inst.layout.real(&x, "r0").to_vec();
        let geom = Geometry {
            bs_position: [0.0; 3],
            irs_position: [0.0; 3],
            user_positions: s.users.clone(),
            uav_position: Some([r0[0], r0[1], s.altitude]),
            uav_velocity: [0.0; 3],
        };
        let pp = inst.layout.complex(&x, "p");
        let prec = vec![pp[..4].to_vec(), pp[4..].to_vec()];
        let g = uav_sinr(&geom, s.fc, s.array, &prec, &order.to_pairwise(), &s.sigmas).unwrap();
        let f = check_feasibility(&inst, &x, 0.0).unwrap();
        for (k, r) in f.residuals.iter().filter(|r| r.constraint == "C2").enumerate() {
            assert_eq!(r.value <= 0.0, g[k] >= s.gamma_req[k] - 1e-12 * s.gamma_req[k], "user {k}");
        }
    }
}

#[test]
fn pairwise_order_enforced_exactly() {
    let mut rng = Rng::new(11);
    let inst = build_problem(ProblemKind::IrsSumRate(irs(2, 2, 2, PhaseSet::Continuous, &mut rng))).unwrap();
    let mut x = inst.layout.zeros();
    inst.layout.set_real(&mut x, "alpha", &[1.0, 1.0]);
    let f = check_feasibility(&inst, &x, 10.0).unwrap();
    assert_eq!(f.violated(10.0), vec!["C4"]);
    inst.layout.set_real(&mut x, "alpha", &[1.0, 0.0]);
    assert!(check_feasibility(&inst, &x, 1e-12).unwrap().feasible);
}

#[test]
fn irs_codebook_only_changes_feasible_set() {
    let mut rng = Rng::new(12);
    let cont = irs(2, 3, 3, PhaseSet::Continuous, &mut rng);
    let disc = IrsScenario { phases: PhaseSet::uniform_bits(2), ..cont.clone() };
    let a = build_problem(ProblemKind::IrsSumRate(cont)).unwrap();
    let b = build_problem(ProblemKind::IrsSumRate(disc)).unwrap();
    for _ in 0..10 {
        let mut x = random_x(&a, &mut rng);
        inst_alpha(&a, &mut x);
        assert_eq!(evaluate_objective(&a, &x).unwrap(), evaluate_objective(&b, &x).unwrap());
        let fa = check_feasibility(&a, &x, 1e-9).unwrap();
        let fb = check_feasibility(&b, &x, 1e-9).unwrap();
        assert!(fa.residuals.iter().filter(|r| r.constraint == "C2").all(|r| r.value < 1e-12));
        assert!(fb.violated(1e-9).contains(&"C2"));
    }
    let mut x = a.layout.zeros();
    a.layout.set_real(&mut x, "psi", &[0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI]);
    inst_alpha(&b, &mut x);
    assert!(check_feasibility(&b, &x, 1e-9).unwrap().feasible);
}

fn inst_alpha(inst: &ProblemInstance, x: &mut [f64]) {
    inst.layout.set_real(x, "alpha", &[1.0, 0.0]);
}

#[test]
fn projected_random_points_are_feasible() {
    let mut rng = Rng::new(13);
    let s = isac(f64::INFINITY, &mut rng);
    let inst = build_problem(ProblemKind::IsacCommCentric(s.clone())).unwrap();
    let noma_inst = build_problem(ProblemKind::NomaSumRate(noma(3, 2, &mut rng))).unwrap();
    for _ in 0..50 {
        // scale onto the power ball
        let mut x = random_x(&inst, &mut rng);
        let p = CMatrix::new(3, 2, inst.layout.complex(&x, "p")).unwrap();
        let power = p.matmul(&s.s).frobenius_norm().powi(2) / 4.0;
        let scale = (s.p_max / power).sqrt().min(1.0) * 0.999;
        x.iter_mut().for_each(|v| *v *= scale);
        assert!(check_feasibility(&inst, &x, 1e-9).unwrap().feasible);

        // project powers onto the simplex face Σp ≤ P_max
        let mut x = random_x(&noma_inst, &mut rng);
        one_hot_schedule(&noma_inst, &mut x, &mut rng);
        let total: f64 = noma_inst.layout.real(&x, "p").iter().sum();
        let p: Vec<f64> = noma_inst.layout.real(&x, "p").iter().map(|v| v * (4.0 / total).min(1.0)).collect();
        noma_inst.layout.set_real(&mut x, "p", &p);
        assert!(check_feasibility(&noma_inst, &x, 1e-9).unwrap().feasible);
    }
}

#[test]
fn big_m_scales_with_budget() {
    let mut rng = Rng::new(14);
    let s = irs(2, 2, 3, PhaseSet::uniform_bits(2), &mut rng);
    let g = irs_max_gain(&s);
    let inst = build_problem(ProblemKind::IrsSumRate(s.clone())).unwrap();
    assert_eq!(inst.big_m(), Some(s.p_max * g * g * 10.0));
    // the bound dominates every realised effective channel
    for _ in 0..50 {
        let psi: Vec<f64> = (0..3).map(|_| rng.uniform_range(0.0, 6.3)).collect();
        for h in crate::metrics::irs_channels(&s.h_d, &s.f, &psi, &s.h_r).unwrap() {
            assert!(crate::numerics::vnorm(&h) <= g + 1e-12);
        }
    }
    assert_eq!(build_problem(ProblemKind::IsacCommCentric(isac(1.0, &mut rng))).unwrap().big_m(), None);
}

#[test]
fn dimension_errors_are_reported() {
    let mut rng = Rng::new(15);
    let mut s = noma(2, 2, &mut rng);
    s.sigmas.pop();
    assert!(matches!(build_problem(ProblemKind::NomaSumRate(s)), Err(crate::Error::Dimension(_))));
    let inst = build_problem(ProblemKind::NomaSumRate(noma(2, 2, &mut rng))).unwrap();
    assert!(evaluate_objective(&inst, &[0.0; 3]).is_err());
    assert!(check_feasibility(&inst, &[0.0; 3], 1e-9).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn noma_sum_rate_is_monotone_in_powers(seed in 0u64..10_000, bump in 0.0f64..3.0, who in 0usize..3) {
        let mut rng = Rng::new(seed);
        let inst = build_problem(ProblemKind::NomaSumRate(noma(3, 1, &mut rng))).unwrap();
        let mut x = vec![rng.uniform(), rng.uniform(), rng.uniform(), 1.0, 1.0, 1.0];
        let before = evaluate_objective(&inst, &x).unwrap();
        x[who] += bump;
        prop_assert!(evaluate_objective(&inst, &x).unwrap() >= before - 1e-12);
    }
}
