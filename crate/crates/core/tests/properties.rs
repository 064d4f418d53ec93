use harnack_core::bounds::{
    alpha_phi, estimate_slack, ln_harnack_factor, ln_kernel_lower_bound, technical_inequalities, EstimateId, Variant, SMALL_KT,
};
use harnack_core::certify::{run, CheckKind, Field, Grid, Sample, Section, SolutionKind, SweepSpec, VerificationReport};
use harnack_core::kernels::{euclid_jet, h3_jet, periodic_jet, Convention};
use harnack_core::par::Execution;
use harnack_core::quad::{integrate, QuadratureSpec};
use harnack_core::radial_solver::{solve_radial, PeriodicSolution, RadialGrid};
use harnack_core::spaces::{radial_laplacian_coefficient, volume_weight, ModelSpace};
use proptest::collection::vec;
use proptest::prelude::*;
use std::collections::BTreeMap;

fn log_uniform(a: f64, b: f64) -> impl Strategy<Value = f64> {
    (a.ln()..b.ln()).prop_map(f64::exp)
}

fn radial_space() -> impl Strategy<Value = ModelSpace> {
    prop_oneof![
        (1usize..=8).prop_map(|n| ModelSpace::euclidean(n).unwrap()),
        (2usize..=3, 0.25f64..4.0).prop_map(|(n, c)| ModelSpace::hyperbolic(n, c).unwrap()),
    ]
}

fn estimate() -> impl Strategy<Value = EstimateId> {
    prop_oneof![
        Just(EstimateId::MainNonlinear),
        Just(EstimateId::Linearized),
        (1.1f64..4.0).prop_map(EstimateId::LiYauAlpha),
        (1.1f64..4.0).prop_map(EstimateId::Davies),
        Just(EstimateId::Yau),
        Just(EstimateId::BakryQian),
        Just(EstimateId::HamiltonExp),
        Just(EstimateId::PerelmanLYH),
    ]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn small_h3_spec(check: CheckKind, nr: usize, nt: usize) -> SweepSpec {
    let mut s = SweepSpec::new(ModelSpace::hyperbolic(3, 1.0).unwrap(), check);
    s.r_grid = Grid::uniform(0.05, 6.0, nr);
    s.t_grid = Grid::geometric(0.05, 6.0, nt);
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn section_reduction(slacks in vec(-10.0f64..1.0, 1..300), tol in log_uniform(1e-9, 0.5)) {
        let samples: Vec<Sample> = slacks
            .iter()
            .enumerate()
            .map(|(i, &s)| Sample::new(vec![i as f64], s, 0.0))
            .collect();
        let sec = Section::new("s", true, tol, &["i"], samples).unwrap();
        prop_assert_eq!(sec.pass(), sec.violations == 0);
        prop_assert_eq!(sec.violations, slacks.iter().filter(|&&s| s > tol).count());
        prop_assert!(sec.samples.iter().all(|s| s.slack <= sec.worst_slack));
        // lowest index wins ties
        let first = slacks.iter().position(|&s| s == sec.worst_slack).unwrap();
        prop_assert_eq!(sec.worst_location[0], first as f64);
    }

    #[test]
    fn report_pass_iff_no_asserted_violations(a in vec(-1.0f64..1.0, 1..50), b in vec(-1.0f64..1.0, 1..50)) {
        let mk = |name: &str, asserted: bool, v: &[f64]| {
            let s = v.iter().map(|&x| Sample::new(vec![x], x, 0.0)).collect();
            Section::new(name, asserted, 0.5, &["x"], s).unwrap()
        };
        let r = VerificationReport::new("p", BTreeMap::new(), 0.5, vec![mk("a", true, &a), mk("b", false, &b)]);
        prop_assert_eq!(r.violations, r.sections[0].violations);
        prop_assert_eq!(r.pass, r.violations == 0);
        prop_assert_eq!(r.worst_slack, r.sections[0].worst_slack);
    }

    #[test]
    fn main_pair_is_componentwise_below_linear(n in 1usize..=8, k in log_uniform(1e-8, 20.0), t in log_uniform(1e-5, 50.0)) {
        let m = alpha_phi(Variant::MainNonlinear, n, k, t);
        let l = alpha_phi(Variant::Linearized, n, k, t);
        prop_assert!(m.alpha <= l.alpha * (1.0 + 1e-15));
        prop_assert!(m.phi <= l.phi * (1.0 + 1e-15));
        prop_assert!(m.alpha >= 1.0);
        prop_assert!(m.phi >= 0.5 * n as f64 / t * (1.0 - 1e-15));
    }

    #[test]
    fn small_kt_branch_is_continuous(n in 1usize..=8, t in log_uniform(1e-3, 10.0), d in 0.0f64..5.0, ratio in 1.05f64..4.0) {
        let k = SMALL_KT / t;
        let (lo, hi) = (k * (1.0 - 1e-9), k * (1.0 + 1e-9));
        for v in [Variant::MainNonlinear, Variant::Linearized] {
            let (a, b) = (alpha_phi(v, n, lo, t), alpha_phi(v, n, hi, t));
            prop_assert!(rel(a.alpha, b.alpha) < 1e-8 && rel(a.phi, b.phi) < 1e-8);
            // in log space: a relative 1e-8 in the value is 1e-8 absolute here
            let (a, b) = (ln_harnack_factor(v, n, lo, t, t * ratio, d).unwrap(), ln_harnack_factor(v, n, hi, t, t * ratio, d).unwrap());
            prop_assert!((a - b).abs() < 1e-8);
            let (a, b) = (ln_kernel_lower_bound(v, n, lo, d, t).unwrap(), ln_kernel_lower_bound(v, n, hi, d, t).unwrap());
            prop_assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn flat_harnack_factor(n in 1usize..=8, t1 in log_uniform(1e-3, 10.0), ratio in 1.01f64..10.0, d in 0.0f64..10.0) {
        let t2 = t1 * ratio;
        let want = 0.5 * n as f64 * (t2 / t1).ln() + d * d / (4.0 * (t2 - t1));
        for v in [Variant::MainNonlinear, Variant::Linearized] {
            let got = ln_harnack_factor(v, n, 0.0, t1, t2, d).unwrap();
            prop_assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0));
            prop_assert!(ln_harnack_factor(v, n, 1.0, t1, t2, d).unwrap() >= got);
        }
    }

    #[test]
    fn technical_inequalities_hold(x in log_uniform(1e-6, 50.0), n in 1usize..=8) {
        let v = technical_inequalities(x, n);
        prop_assert!(v.lemma23_value <= 0.0);
        prop_assert!(v.i_value >= 0.0);
    }

    #[test]
    fn laplacian_coefficient_positive_and_decreasing(space in radial_space(), r in 1e-3f64..49.0, dr in 1e-3f64..1.0) {
        prop_assume!(space.dim > 1);
        let a = radial_laplacian_coefficient(&space, r).unwrap();
        let b = radial_laplacian_coefficient(&space, r + dr).unwrap();
        prop_assert!(a > 0.0 && b > 0.0);
        prop_assert!(b <= a);
    }

    #[test]
    fn analytic_jets_solve_the_heat_equation(n in 1usize..=8, d in 0.0f64..10.0, t in log_uniform(0.01, 10.0)) {
        let e = euclid_jet(n, d, t).unwrap();
        prop_assert!(e.heat_residual().abs() <= 1e-9, "euclid {}", e.heat_residual());
        let h = h3_jet(d, t, 1.0).unwrap();
        prop_assert!(h.heat_residual().abs() <= 1e-9, "h3 {}", h.heat_residual());
        let m = h.to_convention(Convention::MinusLnNormalized);
        prop_assert!(m.heat_residual().abs() <= 1e-9);
    }

    #[test]
    fn euclid_dominates_h3(d in 0.0f64..10.0, t in log_uniform(1e-3, 10.0)) {
        let e = euclid_jet(3, d, t).unwrap();
        let h = h3_jet(d, t, 1.0).unwrap();
        prop_assert!(e.f >= h.f);
    }

    #[test]
    fn periodic_jets_are_even(l in 1.0f64..10.0, frac in 0.0f64..0.5, t in log_uniform(0.01, 5.0)) {
        let x = frac * l;
        let a = periodic_jet(&[l], &[x], t, 1e-12).unwrap();
        let b = periodic_jet(&[l], &[-x], t, 1e-12).unwrap();
        prop_assert!(rel(a.u, b.u) < 1e-13);
        prop_assert!((a.f_r + b.f_r).abs() <= 1e-12 * (1.0 + a.f_r.abs()));
        prop_assert!(rel(a.f_rr, b.f_rr) < 1e-10 || (a.f_rr - b.f_rr).abs() < 1e-10);
    }

    #[test]
    fn convention_round_trip(n in 1usize..=8, d in 0.0f64..5.0, t in log_uniform(0.01, 5.0)) {
        let j = euclid_jet(n, d, t).unwrap();
        let back = j.to_convention(Convention::MinusLnNormalized).to_convention(Convention::LnU);
        prop_assert!((back.f - j.f).abs() < 1e-12 * (1.0 + j.f.abs()));
        prop_assert!((back.f_t - j.f_t).abs() < 1e-12 * (1.0 + j.f_t.abs()));
        prop_assert_eq!(back.f_r, j.f_r);
    }

    #[test]
    fn tags_round_trip(a in 0.0f64..5.0, w in 0.1f64..5.0, m in 2usize..500, n in 1usize..=8) {
        for g in [Grid::uniform(a, a + w, m), Grid::geometric(a + 0.01, a + 0.01 + w, m), Grid::Explicit(vec![a, a + w])] {
            prop_assert_eq!(Grid::parse(&g.tag()).unwrap(), g);
        }
        for s in [
            ModelSpace::euclidean(n).unwrap(),
            ModelSpace::hyperbolic(3, w).unwrap(),
            ModelSpace::circle(w).unwrap(),
            ModelSpace::flat_torus(vec![w, a + 1.0]).unwrap(),
        ] {
            prop_assert_eq!(s.id().parse::<ModelSpace>().unwrap(), s);
        }
    }

    #[test]
    fn unit_mass_of_radial_kernels(n in 1usize..=8, t in log_uniform(0.01, 10.0)) {
        let s = ModelSpace::euclidean(n).unwrap();
        let q = QuadratureSpec::new(1e-13, 1e-15, 4000).unwrap();
        let r_max = 40.0 * t.sqrt();
        let (m, _) = integrate(|r| euclid_jet(n, r, t).unwrap().u * volume_weight(&s, r).unwrap(), 0.0, r_max, &q).unwrap();
        prop_assert!((m - 1.0).abs() <= 1e-10, "mass {}", m);
    }

    #[test]
    fn periodic_mean_is_invariant(a in -0.9f64..0.9, l in 1.0f64..10.0, t in 0.0f64..5.0) {
        let s = PeriodicSolution::cosine(l, a, 0.0).unwrap();
        let e = s.evolve(t).unwrap();
        prop_assert!((e.mean() - s.mean()).abs() < 1e-14);
        prop_assert!(e.value(&[0.3 * l]) > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sweeps_are_deterministic(seed in any::<u64>(), nr in 2usize..10, nt in 2usize..8, extra in 0.0f64..2.0) {
        for check in [CheckKind::HarnackPairs, CheckKind::Gradient(EstimateId::MainNonlinear)] {
            let mut s = small_h3_spec(check, nr, nt);
            s.seed = seed;
            s.pair_count = 300;
            s.k = Some(2.0 + extra);
            s.execution = Execution::Sequential;
            let a = run(&s).unwrap();
            s.execution = Execution::Parallel;
            let b = run(&s).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(&run(&s).unwrap(), &b);
        }
    }

    #[test]
    fn worst_location_reproduces(id in estimate(), nr in 2usize..12, nt in 2usize..8, extra in 0.0f64..2.0) {
        let mut s = small_h3_spec(CheckKind::Gradient(id), nr, nt);
        s.k = Some(2.0 + extra);
        let r = run(&s).unwrap();
        let (x, t) = (r.worst_location[0], r.worst_location[1]);
        let k = if r.worst_section == "robust" { s.k() + 1.0 } else { s.k() };
        let field = Field::new(&s.space, SolutionKind::Kernel).unwrap();
        let jet = field.jet(x, t).unwrap().to_convention(id.convention());
        prop_assert_eq!(estimate_slack(id, &jet, 3, k, t, None).unwrap(), r.worst_slack);
        prop_assert!(r.pass);
    }

    #[test]
    fn ordering_holds_at_k0(n in 1usize..=5, nr in 2usize..12, nt in 2usize..8) {
        let mut s = SweepSpec::new(ModelSpace::euclidean(n).unwrap(), CheckKind::Compare);
        s.r_grid = Grid::uniform(0.0, 5.0, nr);
        s.t_grid = Grid::geometric(0.05, 5.0, nt);
        let r = run(&s).unwrap();
        prop_assert!(r.section("main>=linear").unwrap().pass());
        prop_assert!(r.section("main>=davies:2").unwrap().pass());
    }

    #[test]
    fn understated_k_fails(frac in 0.1f64..0.6) {
        let mut s = small_h3_spec(CheckKind::Gradient(EstimateId::MainNonlinear), 12, 8);
        s.k = Some(2.0 * frac);
        let r = run(&s).unwrap();
        prop_assert!(!r.pass && r.violations > 0);
    }

    #[test]
    fn radial_solver_conserves_mass(space in radial_space(), t0 in 0.01f64..0.1, span in 0.1f64..1.0) {
        prop_assume!(space.dim <= 3 && space.curvature_scale <= 2.0);
        let kk = space.curvature_scale;
        let exact = |r: f64| match (space.dim, space.kind) {
            (3, harnack_core::spaces::SpaceKind::Hyperbolic) => h3_jet(r, t0, kk).unwrap().u,
            (n, _) => euclid_jet(n, r, t0).unwrap().u,
        };
        let g = RadialGrid::new(1e-3, 20.0, 0.02, 0.01).unwrap();
        let sol = solve_radial(&space, &|r| exact(r).max(1e-300), &g, t0, t0 + span, &[]).unwrap();
        let m0 = sol.masses[0];
        prop_assert!(sol.masses.iter().all(|m| (m / m0 - 1.0).abs() <= 1e-8));
        prop_assert!(sol.min_value > 0.0);
    }
}

#[test]
fn main_is_not_pointwise_sharper_than_linear_on_h3() {
    // both estimates hold, but slack = gradsq - alpha f_t - phi is not
    // ordered where f_t < 0: the larger linearized alpha raises its left side
    let s = small_h3_spec(CheckKind::Compare, 40, 20);
    let r = run(&s).unwrap();
    let lin = r.section("main>=linear").unwrap();
    assert!(lin.violations > 0);
    let (x, t) = (lin.worst_location[0], lin.worst_location[1]);
    let jet = h3_jet(x, t, 1.0).unwrap();
    assert!(jet.f_t < 0.0);
    assert!(r.section("main>=davies:2").unwrap().pass());
    assert!(r.section("main").unwrap().pass() && r.section("linear").unwrap().pass());
}
