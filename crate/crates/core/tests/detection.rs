use cpa_scatter::detect::{
    check_unbroken_conjecture, detect, find_cpa, find_spectral_singularities, ConjectureCheck, CpaPoint, Detector,
    DetectorConfig, EventKind, SpectralSingularity,
};
use cpa_scatter::{PotentialSpec, SolverConfig};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cfg(spec: &PotentialSpec) -> SolverConfig {
    SolverConfig::for_spec(spec)
}

#[test]
fn absorptive_poles_sit_at_d_squared_on_negative_k_only() {
    for d in [1.0, 1.5, 2.0, 3.0] {
        let spec = PotentialSpec::absorptive_d(d);
        let e = d * d;
        let ss = find_spectral_singularities(&spec, 0.5 * e, 1.5 * e, &cfg(&spec), DetectorConfig::default()).unwrap();
        assert_eq!(ss.len(), 1, "d={d}: {ss:?}");
        assert!(ss[0].k < 0.0);
        assert!((ss[0].energy - e).abs() < 1e-4, "d={d}: {:?}", ss[0]);
    }
}

#[test]
fn pt_symmetric_potentials_never_show_cpa() {
    let specs = [
        PotentialSpec::broken_pt_c(2.0),
        PotentialSpec::unbroken_ab(1.2, 0.8),
        PotentialSpec::rectangular(c(2.7, 0.0), -0.9, 2.0).unwrap(),
        PotentialSpec::gaussian(c(4.0, 0.0), -6.25),
    ];
    for spec in specs {
        let cpa = find_cpa(&spec, 0.5, 10.0, &cfg(&spec), DetectorConfig::default()).unwrap();
        assert!(cpa.is_empty(), "{spec:?}: {cpa:?}");
    }
}

#[test]
fn cpa_only_events_carry_the_time_reversed_pole() {
    let specs = [PotentialSpec::absorptive_d(2.0), PotentialSpec::rectangular(c(2.21, -1.091), 0.0, 2.0).unwrap()];
    for spec in specs {
        let config = DetectorConfig::default();
        let report = detect(&spec, 0.5, 10.0, &cfg(&spec), config).unwrap();
        assert!(report.conflicts.is_empty());
        assert_eq!(report.events.len(), 1, "{spec:?}");
        let ev = report.events[0];
        assert_eq!(ev.kind, EventKind::CpaOnly);
        assert!(ev.diagnostics.abs_det_s < 1e-3);
        assert!(ev.diagnostics.t_neg > config.t_huge);
        assert!(ev.diagnostics.t_pos < 1e3);
        assert!(report.invariant_summary.all_pass(), "{:?}", report.invariant_summary);
    }
}

#[test]
fn self_dual_pole_is_cpa_with_lasing() {
    let spec = PotentialSpec::broken_pt_c(2.0);
    let detector = Detector::new(&spec, &cfg(&spec), DetectorConfig::default()).unwrap();
    let report = detector.detect(2.0, 6.0).unwrap();
    assert_eq!(report.events.len(), 1);
    let ev = report.events[0];
    assert_eq!(ev.kind, EventKind::CpaWithLasing);
    assert!((ev.energy - 4.0).abs() < 1e-3);
    assert!(ev.diagnostics.t_pos > 1e8 && ev.diagnostics.t_neg > 1e8);
    for e in [ev.energy - 0.01, ev.energy + 0.01] {
        let p = detector.propagator().scattering_at(e.sqrt()).unwrap();
        assert!((p.abs_det_s - 1.0).abs() <= 1e-3);
    }
}

#[test]
fn detection_is_bitwise_repeatable() {
    let spec = PotentialSpec::rectangular(c(2.7, 0.0), -0.9, 2.0).unwrap();
    let once = || serde_json::to_vec(&detect(&spec, 1.0, 6.0, &cfg(&spec), DetectorConfig::default()).unwrap()).unwrap();
    assert_eq!(once(), once());
}

#[test]
fn unbroken_conjecture_evidence() {
    let spec = PotentialSpec::unbroken_ab(0.3, 0.1);
    let fine = DetectorConfig { points_per_decade: 1600, ..DetectorConfig::default() };
    let check = check_unbroken_conjecture(&spec, 0.01, 20.0, &cfg(&spec), fine).unwrap();
    assert_eq!(check, ConjectureCheck { has_real_spectrum_criterion: Some(true), ss_found: false, cpa_found: false });

    let spec = PotentialSpec::broken_pt_c(2.0);
    let check = check_unbroken_conjecture(&spec, 0.5, 10.0, &cfg(&spec), DetectorConfig::default()).unwrap();
    assert_eq!(check, ConjectureCheck { has_real_spectrum_criterion: Some(false), ss_found: true, cpa_found: false });
    assert!(check.consistent());

    let spec = PotentialSpec::gaussian(c(4.0, 0.0), -6.25);
    let check = check_unbroken_conjecture(&spec, 3.0, 4.0, &cfg(&spec), DetectorConfig::default()).unwrap();
    assert_eq!(check.has_real_spectrum_criterion, None);
}

#[test]
fn unmatched_candidates_become_conflicts() {
    let spec = PotentialSpec::absorptive_d(2.0);
    let detector = Detector::new(&spec, &cfg(&spec), DetectorConfig::default()).unwrap();
    let ss = SpectralSingularity { energy: 4.0, k: -2.0, transmittance: 1e12, iterations: 1, bracket_width: 1e-6 };
    let lonely = detector.classify_events(&[ss], &[]);
    assert!(lonely.events.is_empty());
    assert_eq!(lonely.conflicts.len(), 1);
    assert_eq!(lonely.conflict_errors().len(), 1);

    let cpa = CpaPoint {
        energy: 9.0,
        k: 3.0,
        abs_det_s: 1e-5,
        t_pos: 0.1,
        t_neg: 0.2,
        time_reversed_pole: false,
        iterations: 1,
        bracket_width: 1e-6,
    };
    let out = detector.classify_events(&[ss], &[cpa]);
    assert_eq!(out.conflicts.len(), 2, "{out:?}");

    let positive = SpectralSingularity { k: 2.0, ..ss };
    let out = detector.classify_events(&[positive], &[]);
    assert_eq!(out.events.len(), 1);
    assert_eq!(out.events[0].kind, EventKind::SpectralSingularity);
}
