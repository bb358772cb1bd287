use approx::assert_relative_eq;
use optodicke::model::ModelParams;
use optodicke::solver::{critical_coupling, find_roots, ground_state, turning_point, SolverConfig};
use optodicke::{PhaseLabel, ScaledAmplitude, SpinBranch, Stability, VariationalPoint};
use proptest::prelude::*;

fn params_strategy() -> impl Strategy<Value = ModelParams<f64>> {
    (0.2..3.0f64, 0.5..2.0f64, 1.0..50.0f64, 0.0..3.0f64, 0.0..3.0f64, 1u32..200)
        .prop_map(|(w, wa, wb, g, z, n)| ModelParams::new(w, wa, wb, g, z, n).unwrap())
}

fn central_first(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

fn richardson_second(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d2 = |h: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    (4.0 * d2(0.5 * h) - d2(h)) / 3.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn scaled_quantities_are_n_independent(p in params_strategy(), gb in 0.0..3.0f64, n in 1u32..10_000) {
        let q = p.with_n_atoms(n);
        let a = ScaledAmplitude::new(gb).unwrap();
        for branch in SpinBranch::BOTH {
            prop_assert_eq!(p.scaled_energy(branch, a), q.scaled_energy(branch, a));
            prop_assert_eq!(p.extremum_polynomial(branch, a), q.extremum_polynomial(branch, a));
            prop_assert_eq!(p.curvature(branch, a), q.curvature(branch, a));
            let pt = VariationalPoint::evaluate(&p, branch, a, 1e-9);
            prop_assert_eq!(p.observables_at(&pt), q.observables_at(&pt));
        }
    }

    #[test]
    fn derivatives_match_finite_differences(p in params_strategy(), gb in 0.01..3.0f64) {
        for branch in SpinBranch::BOTH {
            let e = |x: f64| p.scaled_energy(branch, ScaledAmplitude::new(x.abs()).unwrap());
            let a = ScaledAmplitude::new(gb).unwrap();
            let slope = 2.0 * gb * p.extremum_polynomial(branch, a);
            let fd1 = central_first(e, gb, 1e-5);
            prop_assert!((fd1 - slope).abs() <= 1e-6 * slope.abs().max(1.0), "{} vs {}", fd1, slope);
            let curv = p.curvature(branch, a);
            let fd2 = richardson_second(e, gb, 1e-3);
            prop_assert!((fd2 - curv).abs() <= 1e-6 * curv.abs().max(1.0), "{} vs {}", fd2, curv);
        }
    }

    #[test]
    fn branch_gap_is_level_splitting(p in params_strategy(), gb in 0.0..5.0f64) {
        let a = ScaledAmplitude::new(gb).unwrap();
        let gap = p.scaled_energy(SpinBranch::Inverted, a) - p.scaled_energy(SpinBranch::Normal, a);
        let split = p.level_splitting(a);
        prop_assert!((gap - split).abs() <= 1e-12 * split.max(1.0));
        prop_assert!(split >= p.omega_a);
    }

    #[test]
    fn level_splitting_monotone(p in params_strategy(), a in 0.0..3.0f64, b in 0.0..3.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let s = |x: f64| p.level_splitting(ScaledAmplitude::new(x).unwrap());
        prop_assert!(s(lo) <= s(hi));
    }

    #[test]
    fn phonon_number_identity(p in params_strategy()) {
        let cfg = SolverConfig::default();
        let gs = ground_state(&p, &cfg).unwrap();
        let o = gs.observables;
        let lhs = o.n_b * p.omega_b * p.omega_b;
        let rhs = p.zeta * p.zeta * o.n_p * o.n_p;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(f64::MIN_POSITIVE));
        prop_assert!(o.n_p >= 0.0);
        prop_assert!((-0.5..=0.5).contains(&o.delta_n_a));
    }

    #[test]
    fn consecutive_roots_alternate_stability(p in params_strategy()) {
        let cfg = SolverConfig::default();
        for branch in SpinBranch::BOTH {
            let set = find_roots(&p, branch, &cfg).unwrap();
            prop_assert!(set.roots.windows(2).all(|w| w[0].amplitude.value() < w[1].amplitude.value()));
            prop_assert!(set.roots.windows(2).all(|w| w[0].stability != w[1].stability));
            let limit = match branch { SpinBranch::Normal => 2, SpinBranch::Inverted => 1 };
            prop_assert!(set.roots.len() <= limit);
            for r in &set.roots {
                let slope = p.extremum_polynomial(branch, ScaledAmplitude::new(r.amplitude.value() + 1e-7).unwrap())
                    - p.extremum_polynomial(branch, ScaledAmplitude::new((r.amplitude.value() - 1e-7).max(0.0)).unwrap());
                if r.stability != Stability::Marginal && slope.abs() > 1e-12 {
                    prop_assert_eq!(r.curvature > 0.0, slope > 0.0);
                }
            }
        }
    }

    #[test]
    fn ground_is_minimal_stable_point(p in params_strategy()) {
        let cfg = SolverConfig::default();
        let gs = ground_state(&p, &cfg).unwrap();
        for branch in SpinBranch::BOTH {
            let set = find_roots(&p, branch, &cfg).unwrap();
            for pt in set.points().filter(|pt| pt.stability == Stability::Stable) {
                prop_assert!(gs.point.energy <= pt.energy + 1e-12);
            }
        }
    }
}

#[test]
fn zeta_zero_reduces_to_dicke() {
    let cfg = SolverConfig::default();
    for i in 0..=60 {
        let g = 0.05 * i as f64;
        let p = ModelParams::new(1.0, 1.0, 10.0, g, 0.0, 1).unwrap();
        let gs = ground_state(&p, &cfg).unwrap();
        assert_eq!(gs.observables.n_b, 0.0);
        if g <= 1.0 {
            assert_eq!(gs.phase, PhaseLabel::NpNminus);
        } else {
            assert_eq!(gs.phase, PhaseLabel::Sp);
            assert_relative_eq!(gs.point.energy, -0.25 * (g * g + 1.0 / (g * g)), epsilon = 1e-12);
        }
    }
    let base = ModelParams::new(1.0, 1.0, 10.0, 0.0, 0.0, 1).unwrap();
    assert_eq!(turning_point(&base, 0.0, &cfg).unwrap(), None);
}

#[test]
fn turning_point_decreases_with_zeta() {
    let cfg = SolverConfig::default();
    let base = ModelParams::new(1.0, 1.0, 10.0, 0.0, 0.0, 1).unwrap();
    let gts: Vec<f64> = [0.5, 1.0, 1.5, 2.0, 2.5]
        .iter()
        .map(|&z| turning_point(&base, z, &cfg).unwrap().unwrap().g)
        .collect();
    assert!(gts.windows(2).all(|w| w[1] < w[0]), "{gts:?}");
    assert!(gts.iter().all(|&g| g > critical_coupling(&base)));
}

#[test]
fn superradiant_amplitude_emerges_continuously() {
    let cfg = SolverConfig::default();
    let mut last = f64::INFINITY;
    for delta in [1e-2, 1e-3, 1e-4] {
        let p = ModelParams::new(1.0, 1.0, 10.0, 1.0 + delta, 1.0, 1).unwrap();
        let gs = ground_state(&p, &cfg).unwrap();
        assert_eq!(gs.phase, PhaseLabel::Sp);
        let x = gs.point.amplitude.photon_fraction();
        assert!(x < last && x < 10.0 * delta, "delta={delta} x={x}");
        last = x;
    }
}

#[test]
fn energy_ordering_inside_and_beyond_window() {
    let cfg = SolverConfig::default();
    let base = ModelParams::new(1.0, 1.0, 10.0, 0.0, 1.0, 1).unwrap();
    let gt = turning_point(&base, 1.0, &cfg).unwrap().unwrap().g;
    for i in 1..20 {
        let g = 1.0 + (gt - 1.0) * i as f64 / 20.0;
        let gs = ground_state(&base.with_g(g), &cfg).unwrap();
        assert_eq!(gs.phase, PhaseLabel::Sp);
        assert!(gs.point.energy < 0.5);
    }
    let below = ground_state(&base.with_g(gt - 1e-4), &cfg).unwrap().point.energy;
    let above = ground_state(&base.with_g(gt + 1e-4), &cfg).unwrap().point.energy;
    assert_eq!(above, 0.5);
    assert!(above - below > 0.5, "jump {}", above - below);
}

#[test]
fn unstable_inverted_root_lies_above_normal_one() {
    let cfg = SolverConfig::default();
    for &(g, z) in &[(0.8, 1.0), (1.5, 1.0), (1.05, 2.0), (0.3, 0.7)] {
        let p = ModelParams::new(1.0, 1.0, 10.0, g, z, 1).unwrap();
        let minus = find_roots(&p, SpinBranch::Normal, &cfg).unwrap();
        let plus = find_roots(&p, SpinBranch::Inverted, &cfg).unwrap();
        let um = minus.roots.iter().find(|r| r.stability == Stability::Unstable).unwrap();
        let up = &plus.roots[0];
        assert!(up.amplitude.value() >= um.amplitude.value());
        assert!(up.energy >= um.energy);
    }
}
