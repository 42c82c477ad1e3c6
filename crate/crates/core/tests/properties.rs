use std::f64::consts::PI;

use ahm_core::asymptotics::{defining_function, energy_summary, total_energy};
use ahm_core::curvature::{scalar_curvature_oracle, scalar_curvature_warped};
use ahm_core::gauge::{closed_form_coeffs, radial_gauge};
use ahm_core::metric::fixtures::random_l1_perturbation;
use ahm_core::metric::{BackgroundParams, GridSpec, MetricDocument, MetricSpec, Point};
use ahm_core::verifier::{
    elementary_inequality, integrated_identity, nonneg_integrand_a, verify_theorem, Verdict, VerifyOptions,
};
use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn hm_type(n: usize, a: f64, r0: f64) -> MetricSpec {
    MetricSpec::hm_type(BackgroundParams::with_unit_torus(n, a, r0).unwrap())
}

fn perturbed(n: usize, a: f64, amplitude: f64, seed: u64) -> MetricSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_l1_perturbation(
        BackgroundParams::with_unit_torus(n, a, 1.0).unwrap(),
        amplitude,
        &mut rng,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn elementary_value_is_nonnegative(n in 2usize..=8, s in 1e-6f64..4.0) {
        let v = elementary_inequality(n, s);
        prop_assert!(v.direct >= 0.0);
        if (s - 1.0).abs() >= 1e-3 {
            prop_assert!(v.direct > 1e-12);
            prop_assert!((v.direct - v.factored).abs() <= 1e-12 * v.direct);
        }
    }

    #[test]
    fn hm_type_has_constant_curvature(
        n in 3usize..=5,
        a in -0.5f64..1.0,
        r0 in 0.5f64..2.5,
        log_offset in -6.0f64..3.0,
        xi in 0.0f64..1.0,
    ) {
        let spec = hm_type(n, a, r0);
        let r = spec.r_plus() * (1.0 + 10f64.powf(log_offset));
        let p = Point::new(r, vec![xi * spec.xi_period; n - 1]);
        let deficit = scalar_curvature_warped(&spec, &p).unwrap() + (n * (n - 1)) as f64;
        prop_assert!(deficit.abs() <= 1e-8, "{deficit}");
    }

    #[test]
    fn hm_energy_closed_form(n in 3usize..=6, rb in 0.3f64..3.0, l1 in 0.2f64..3.0, l2 in 0.2f64..3.0) {
        let mut lambda = vec![l1; n - 2];
        lambda[0] = l2;
        let expected = -rb.powi(n as i32) * 4.0 * PI / (n as f64 * rb) * lambda.iter().product::<f64>();
        let spec = MetricSpec::horowitz_myers(n, rb, lambda).unwrap();
        assert_relative_eq!(total_energy(&spec), expected, max_relative = 1e-10);
        prop_assert!(energy_summary(&spec).difference.abs() <= 1e-10 * expected.abs());
    }

    #[test]
    fn document_round_trip(n in 3usize..=5, a in -0.4f64..0.8, seed in 0u64..1000) {
        let spec = perturbed(n, a, 1e-2, seed);
        let doc = MetricDocument::from_spec(&spec);
        let again = MetricDocument::from_toml_str(&doc.to_toml_string()).unwrap();
        prop_assert_eq!(&again, &doc);
        prop_assert_eq!(MetricDocument::from_spec(&again.to_spec().unwrap()), doc);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_agrees_with_warped_formula(n in 3usize..=4, a in -0.4f64..0.8, seed in 0u64..1000, f in 2.0f64..4.0) {
        let spec = perturbed(n, a, 1e-2, seed);
        let p = Point::new(f * spec.r_plus(), vec![0.7; n - 1]);
        let exact = scalar_curvature_warped(&spec, &p).unwrap();
        let fd = scalar_curvature_oracle(&spec, &p, 1e-3).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-5, "{fd} vs {exact}");
    }

    #[test]
    fn gauge_is_identity_without_a_and_u(n in 3usize..=5, r0 in 0.5f64..2.0, v in -0.1f64..0.1) {
        let mut spec = hm_type(n, 0.0, r0);
        spec.add_v_const(n as u32, v);
        let gm = radial_gauge(&spec).unwrap();
        prop_assert!((gm.r_tilde_0 - r0).abs() <= 1e-10);
        for node in &gm.table {
            prop_assert!((node.r_tilde - node.r).abs() <= 1e-10 * node.r.max(1.0));
        }
    }

    #[test]
    fn defining_function_coefficient(n in 3usize..=5, a in -0.5f64..1.0, u in -0.2f64..0.2) {
        let mut spec = hm_type(n, a, 1.0);
        spec.set_u(n as u32 - 1, u);
        let c = defining_function(&spec).unwrap().expansion.order_n_minus_2;
        prop_assert!((c - (u - 0.5 * a) / (n as f64 - 1.0)).abs() <= 1e-4, "{c}");
    }

    #[test]
    fn integrand_nonnegative_on_hm_type(n in 3usize..=4, a in -0.5f64..1.0, f in 1.001f64..20.0, xi in 0.0f64..1.0) {
        let spec = hm_type(n, a, 1.0);
        let gm = radial_gauge(&spec).unwrap();
        let angles = vec![xi * spec.xi_period; n - 1];
        let v = nonneg_integrand_a(&spec, &gm, f * gm.r_tilde_0, &angles).unwrap();
        prop_assert!(v.excess >= -1e-10 && v.radial >= -1e-10 && v.xi >= -1e-10, "{v:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn identity_holds_regardless_of_curvature_sign(a in -0.4f64..0.8, seed in 0u64..1000) {
        let spec = perturbed(3, a, 1e-3, seed);
        let gm = radial_gauge(&spec).unwrap();
        let rep = integrated_identity(&spec, &gm, &closed_form_coeffs(&gm, &spec), &GridSpec::new(0, 8, 8)).unwrap();
        prop_assert!(rep.residual <= 1e-4, "{}", rep.residual);
        prop_assert!(rep.xi_cancellation <= 1e-10, "{}", rep.xi_cancellation);
    }

    #[test]
    fn lower_bound_ordering_on_gate_passing_specs(n in 3usize..=4, a in -0.5f64..1.0) {
        let options = VerifyOptions {
            grid: GridSpec::new(16, 8, 8),
            identity_grid: GridSpec::new(0, 8, 8),
            ..VerifyOptions::default()
        };
        let rep = verify_theorem(&hm_type(n, a, 1.0), &options).unwrap();
        prop_assert!(rep.hypothesis_flags.passed());
        let scale = rep.e_hm.abs().max(1.0);
        prop_assert!(rep.difference >= rep.lower_bound.unwrap() - 1e-4 * scale);
        prop_assert!(rep.passed(), "{:?}", rep.checks);
        prop_assert!(rep.equality_verdict != Verdict::HypothesisFailed);
    }
}
