//! Property tests for the structural invariants of risks, duals and
//! certificates on small random instances.

mod common;

use advdual::certify::duality_gap;
use advdual::dualsolve::{dual_objective, DualSolution};
use advdual::ground::sup_ball;
use advdual::io::{parse_instance, to_canonical_json, InstanceFile};
use advdual::measures::{pushforward, winf_distance};
use advdual::pipeline::solve;
use advdual::primalsolve::{construct_f, risk_adv, EtaField, PrimalConfig};
use advdual::dualsolve::DualConfig;
use advdual::{Coupling, GroundSet, Loss, Measure32, Norm, TwoClassMeasure};
use proptest::prelude::*;

const LOSSES: [Loss; 3] = [Loss::Exponential, Loss::Logistic, Loss::Hinge];

#[derive(Debug, Clone)]
struct Small {
    points: Vec<Vec<f64>>,
    norm: Norm,
    eps: f64,
    mass0: Vec<f64>,
    mass1: Vec<f64>,
}

impl Small {
    fn ground(&self) -> GroundSet<f64> {
        GroundSet::new(&self.points, self.norm, self.eps).unwrap()
    }

    fn measure(&self) -> TwoClassMeasure<f64> {
        TwoClassMeasure::new(self.mass0.clone(), self.mass1.clone()).unwrap()
    }
}

fn mass(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 0.01..1.0f64], n)
}

fn small() -> impl Strategy<Value = Small> {
    (2usize..=8, 1usize..=2).prop_flat_map(|(n, dim)| {
        (
            prop::collection::vec(prop::collection::vec(0.0..1.0f64, dim), n),
            prop_oneof![Just(Norm::L1), Just(Norm::L2), Just(Norm::Linf)],
            0.0..0.6f64,
            mass(n),
            mass(n),
        )
            .prop_map(|(points, norm, eps, mass0, mass1)| Small { points, norm, eps, mass0, mass1 })
    })
}

/// A coupling of `p` whose targets are drawn from each source's ball by `picks`.
fn coupling_from(g: &GroundSet<f64>, p: &[f64], picks: &[(usize, f64)]) -> Coupling<f64> {
    let mut entries = Vec::new();
    for (i, &w) in p.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        let nb = g.neighbors(i);
        let (k, split) = picks[i];
        let (a, b) = (nb[k % nb.len()], nb[(k / 2) % nb.len()]);
        entries.push((i, a, w * split));
        entries.push((i, b, w * (1.0 - split)));
    }
    Coupling::from_entries(entries)
}

fn picks(n: usize) -> impl Strategy<Value = Vec<(usize, f64)>> {
    prop::collection::vec((0usize..16, 0.0..=1.0f64), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn any_score_dominates_any_attack(
        inst in small(),
        f in prop::collection::vec(-3.0..3.0f64, 8),
        pk0 in picks(8),
        pk1 in picks(8),
    ) {
        let (g, m) = (inst.ground(), inst.measure());
        let n = g.len();
        let c0 = coupling_from(&g, &m.mass0, &pk0);
        let c1 = coupling_from(&g, &m.mass1, &pk1);
        let (m0, m1) = (pushforward(&c0, n), pushforward(&c1, n));
        for loss in LOSSES {
            let primal = risk_adv(&loss, &f[..n], &g, &m).unwrap();
            let dual = dual_objective(&loss, &m0, &m1).unwrap();
            prop_assert!(primal >= dual - 1e-9, "{loss}: {primal} < {dual}");
        }
    }

    #[test]
    fn residuals_are_nonnegative_and_sum_to_gap(
        inst in small(),
        f in prop::collection::vec(-3.0..3.0f64, 8),
        pk0 in picks(8),
        pk1 in picks(8),
    ) {
        let (g, m) = (inst.ground(), inst.measure());
        let n = g.len();
        let d = DualSolution::from_couplings(
            &Loss::Exponential,
            n,
            coupling_from(&g, &m.mass0, &pk0),
            coupling_from(&g, &m.mass1, &pk1),
        ).unwrap();
        for loss in LOSSES {
            let c = duality_gap(loss, &f[..n], &d, &g, &m).unwrap();
            let tol = 1e-9 * m.total().max(1.0);
            prop_assert!(c.slack_sup_r1 >= -tol && c.slack_sup_r0 >= -tol && c.slack_pointwise >= -tol, "{c:?}");
            prop_assert!((c.residual_sum() - c.gap).abs() <= 1e-9 * (1.0 + c.primal_value.abs()), "{c:?}");
        }
    }

    #[test]
    fn swapping_labels_negates_the_score(inst in small(), f in prop::collection::vec(-3.0..3.0f64, 8)) {
        let (g, m) = (inst.ground(), inst.measure());
        let n = g.len();
        let neg: Vec<f64> = f[..n].iter().map(|v| -v).collect();
        for loss in LOSSES {
            let a = risk_adv(&loss, &f[..n], &g, &m).unwrap();
            let b = risk_adv(&loss, &neg, &g, &m.swapped()).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn attacks_stay_within_epsilon(inst in small(), pk in picks(8)) {
        let g = inst.ground();
        let m = inst.measure();
        prop_assume!(m.total1() > 0.0);
        let c = coupling_from(&g, &m.mass1, &pk);
        let d = winf_distance(&g, &m.mass1, &pushforward(&c, g.len())).unwrap();
        prop_assert!(d <= inst.eps);
    }

    #[test]
    fn sup_ball_grows_with_epsilon(inst in small(), f in prop::collection::vec(-3.0..3.0f64, 8), extra in 0.0..0.5f64) {
        let g = inst.ground();
        let wider = g.with_epsilon(inst.eps + extra).unwrap();
        let n = g.len();
        let (a, b) = (sup_ball(&g, &f[..n]), sup_ball(&wider, &f[..n]));
        prop_assert!((0..n).all(|i| a[i] <= b[i] && a[i] >= f[i]));
    }

    #[test]
    fn optimal_scores_are_monotone_in_eta(mut eta in prop::collection::vec(0.0..=1.0f64, 2..12)) {
        eta.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for loss in LOSSES {
            let f = construct_f(&loss, &EtaField::new(eta.clone()).unwrap()).unwrap();
            prop_assert!(f.windows(2).all(|w| w[0] <= w[1]), "{loss}: {f:?}");
        }
    }

    #[test]
    fn instance_text_round_trips(inst in small()) {
        let file = InstanceFile {
            schema_version: 1,
            points: inst.points.clone(),
            norm: inst.norm,
            epsilon: inst.eps,
            mass0: inst.mass0.clone(),
            mass1: inst.mass1.clone(),
            refine: 0,
            primal: Default::default(),
            dual: Default::default(),
        };
        let text = to_canonical_json(&file).unwrap();
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back.file, &file);
        prop_assert_eq!(to_canonical_json(&back.file).unwrap(), text);
        prop_assert_eq!(back.digest, file.digest().unwrap());
    }
}

#[test]
fn solves_are_deterministic() {
    let (g, m) = common::random_instance(7);
    let a = solve(&g, &m, &LOSSES, &PrimalConfig::default(), &DualConfig::default()).unwrap();
    let b = solve(&g, &m, &LOSSES, &PrimalConfig::default(), &DualConfig::default()).unwrap();
    assert_eq!(a.primal.f, b.primal.f);
    assert_eq!(a.dual.coupling0, b.dual.coupling0);
    assert_eq!(a.dual.coupling1, b.dual.coupling1);
    for (x, y) in a.outcomes.iter().zip(&b.outcomes) {
        assert_eq!(x.certificate, y.certificate);
    }
}

#[test]
fn single_precision_pipeline_tracks_double() {
    for seed in 0..5 {
        let (g, m) = common::random_instance(seed);
        let pts32: Vec<Vec<f32>> = g.points().iter().map(|p| p.iter().map(|&v| v as f32).collect()).collect();
        let g32 = GroundSet::new(&pts32, g.norm(), g.epsilon() as f32).unwrap();
        let to32 = |v: &[f64]| v.iter().map(|&x| x as f32).collect::<Vec<f32>>();
        let m32: Measure32 = TwoClassMeasure::new(to32(&m.mass0), to32(&m.mass1)).unwrap();
        let s64 = solve(&g, &m, &[Loss::Exponential], &PrimalConfig::default(), &DualConfig::default()).unwrap();
        let s32 = solve(&g32, &m32, &[Loss::Exponential], &PrimalConfig::default(), &DualConfig::default()).unwrap();
        let (a, b) = (s64.certificate(Loss::Exponential).unwrap(), s32.certificate(Loss::Exponential).unwrap());
        assert!((a.primal_value - b.primal_value).abs() < 1e-3, "seed {seed}: {a:?} vs {b:?}");
        assert!((a.dual_value - b.dual_value).abs() < 1e-3, "seed {seed}: {a:?} vs {b:?}");
    }
}

#[test]
fn zero_epsilon_risk_is_pointwise() {
    let g = common::line(&[0.0, 1.0, 2.0, 3.0], 0.0);
    let m = TwoClassMeasure::new(vec![0.1, 0.2, 0.0, 0.3], vec![0.3, 0.0, 0.1, 0.1]).unwrap();
    let s = solve(&g, &m, &LOSSES, &PrimalConfig::default(), &DualConfig::default()).unwrap();
    let expected: f64 = (0..4).map(|x| 2.0 * (m.mass0[x] * m.mass1[x]).sqrt()).sum();
    let c = s.certificate(Loss::Exponential).unwrap();
    assert!((c.primal_value - expected).abs() < 1e-8 && (c.dual_value - expected).abs() < 1e-8, "{c:?}");
}
