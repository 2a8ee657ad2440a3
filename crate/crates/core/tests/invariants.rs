//! Structural relations of the scattering data, checked on random potentials.

use cpa_scatter::potential::{classify_default, ScarfII, SymmetryKind};
use cpa_scatter::smatrix::check_pt_relations;
use cpa_scatter::transfer::transfer_matrix_rectangular;
use cpa_scatter::{scattering_at, Propagator, PotentialSpec, ScatteringPoint, SolverConfig};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn at(spec: &PotentialSpec, k: f64) -> ScatteringPoint {
    scattering_at(spec, k, &SolverConfig::for_spec(spec)).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-9)
}

/// PT-symmetric potentials from every family with closed or numerical forms.
fn pt_symmetric() -> impl Strategy<Value = PotentialSpec> {
    prop_oneof![
        (0.5f64..3.0, -1.5f64..1.5).prop_map(|(p, q)| PotentialSpec::rectangular(c(p, 0.0), q, 1.0).unwrap()),
        (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(p, q)| PotentialSpec::gaussian(c(p, 0.0), q)),
        (0.1f64..2.0, 0.0f64..1.5).prop_map(|(a, b)| PotentialSpec::unbroken_ab(a, b)),
        (0.3f64..1.0).prop_map(PotentialSpec::broken_pt_c),
        (-3.0f64..1.0, -2.0f64..2.0)
            .prop_map(|(p, q)| PotentialSpec::ScarfII(ScarfII::General { p: c(p, 0.0), q: c(0.0, q) })),
    ]
}

fn any_potential() -> impl Strategy<Value = PotentialSpec> {
    prop_oneof![
        (-3.0f64..3.0, -2.0f64..2.0, -1.5f64..1.5, 0.3f64..2.0)
            .prop_map(|(a, b, q, l)| PotentialSpec::rectangular(c(a, b), q, l).unwrap()),
        (-3.0f64..3.0, -2.0f64..2.0, -3.0f64..3.0).prop_map(|(a, b, q)| PotentialSpec::gaussian(c(a, b), q)),
        (-2.0f64..2.0).prop_map(PotentialSpec::absorptive_d),
        pt_symmetric(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn transmission_is_side_independent(spec in any_potential(), k in 0.3f64..3.0, sign in prop::bool::ANY) {
        let k = if sign { k } else { -k };
        let p = at(&spec, k);
        prop_assume!(p.transmittance < 1e3);
        prop_assert!(p.t_mismatch <= 1e-6, "{:?} k={} mismatch={}", spec, k, p.t_mismatch);
    }

    #[test]
    fn pt_time_reversal_swaps_reflection_sides(spec in pt_symmetric(), k in 0.3f64..3.0) {
        prop_assert!(classify_default(&spec).is_pt());
        let (pos, neg) = (at(&spec, k), at(&spec, -k));
        prop_assume!(pos.transmittance < 1e3);
        prop_assert!(rel(neg.transmittance, pos.transmittance) <= 1e-6);
        prop_assert!(rel(neg.reflectance_left, pos.reflectance_right) <= 1e-6);
        prop_assert!(rel(neg.reflectance_right, pos.reflectance_left) <= 1e-6);
    }

    #[test]
    fn pt_phase_relations(spec in pt_symmetric(), k in 0.3f64..3.0, sign in prop::bool::ANY) {
        let k = if sign { k } else { -k };
        let p = at(&spec, k);
        prop_assume!(p.transmittance < 1e3);
        let checks = check_pt_relations(&p, &classify_default(&spec));
        for r in [checks.phase_residual_left, checks.phase_residual_right].into_iter().flatten() {
            prop_assert!(r <= 1e-4, "{:?} k={} residual={}", spec, k, r);
        }
    }

    #[test]
    fn pt_unimodularity(spec in pt_symmetric(), k in 0.3f64..3.0, sign in prop::bool::ANY) {
        let k = if sign { k } else { -k };
        let p = at(&spec, k);
        prop_assume!(p.transmittance < 1e3);
        prop_assert!((p.abs_det_s - 1.0).abs() <= 1e-6, "{:?} k={} |det S|={}", spec, k, p.abs_det_s);
        let checks = check_pt_relations(&p, &classify_default(&spec));
        if let Some(r) = checks.eq6_residual {
            prop_assert!(r <= 1e-6);
        }
    }

    #[test]
    fn pt_det_s_is_even_in_k(spec in pt_symmetric(), k in 0.3f64..3.0) {
        let (pos, neg) = (at(&spec, k), at(&spec, -k));
        prop_assume!(pos.transmittance < 1e3);
        prop_assert!((pos.abs_det_s - neg.abs_det_s).abs() <= 1e-6);
    }

    #[test]
    fn hermitian_flux_is_conserved(
        family in 0usize..3,
        p in -3.0f64..3.0,
        q in -2.0f64..2.0,
        k in 0.3f64..3.0,
        sign in prop::bool::ANY,
    ) {
        let spec = match family {
            0 => PotentialSpec::rectangular(c(p, 0.0), 0.0, 1.0 + q.abs()).unwrap(),
            1 => PotentialSpec::gaussian(c(p, 0.0), 0.0),
            _ => PotentialSpec::ScarfII(ScarfII::General { p: c(p, 0.0), q: c(q, 0.0) }),
        };
        prop_assert_eq!(classify_default(&spec).kind, SymmetryKind::Hermitian);
        let k = if sign { k } else { -k };
        let pt = at(&spec, k);
        prop_assert!((pt.transmittance + pt.reflectance_left - 1.0).abs() <= 1e-8);
        prop_assert!((pt.transmittance + pt.reflectance_right - 1.0).abs() <= 1e-8);
    }
}

#[test]
fn rk4_converges_at_fourth_order() {
    let (p, q, l, k) = (c(2.21, -1.091), 0.4, 2.0, 1.3);
    let spec = PotentialSpec::rectangular(p, q, l).unwrap();
    let exact = transfer_matrix_rectangular(p, q, l, k).unwrap();
    let error = |h: f64| {
        let prop = Propagator::new(&spec, &SolverConfig::for_spec(&spec).with_step(h).with_x_max(3.0)).unwrap();
        let (t, r) = prop.solve_left(k).unwrap();
        (t - exact.t).norm().max((r - exact.r_left).norm())
    };
    let steps = [0.01, 0.005, 0.0025];
    let errors: Vec<f64> = steps.iter().map(|&h| error(h)).collect();
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 3.5, "observed order {order:.3} from errors {errors:?}");
    }
}
