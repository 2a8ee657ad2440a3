//! Closed-form references for the numerical solver, registered by name.
//!
//! Each [`Oracle`] declares which potentials it covers; [`OracleRegistry`]
//! picks the first match at runtime and [`validate`] compares the integrator
//! against it over an energy grid.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{AnalyticPoint, ScarfDomain};
use crate::error::Result;
use crate::numeric::{Propagator, ScatteringPoint, SolverConfig};
use crate::potential::PotentialSpec;
use crate::transfer::{transfer_matrix_rectangular, SlabAmplitudes};

/// Grid points closer than this (in `k`) to a singular point are skipped.
pub const POLE_EXCLUSION: f64 = 0.05;
/// Reference magnitudes below this are compared absolutely.
pub const RELATIVE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reference {
    Observables(AnalyticPoint),
    Amplitudes(SlabAmplitudes),
}

/// Largest deviations found for each compared quantity.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Deviations {
    pub entries: BTreeMap<String, f64>,
}

impl Deviations {
    fn record(&mut self, name: &str, value: f64) {
        let entry = self.entries.entry(name.to_string()).or_insert(0.0);
        // NaN must stick, so compare rather than f64::max
        if !(value <= *entry) {
            *entry = value;
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.get(name).copied()
    }

    /// Largest deviation; NaN if any comparison produced NaN.
    pub fn max(&self) -> f64 {
        self.entries.values().fold(0.0, |m, &v| if !(v <= m) { v } else { m })
    }
}

pub trait Oracle: Send + Sync {
    fn name(&self) -> &'static str;

    fn covers(&self, spec: &PotentialSpec) -> bool;

    fn reference(&self, spec: &PotentialSpec, k: f64) -> Result<Reference>;

    /// Largest acceptable deviation in [`Oracle::compare`]'s metric.
    fn tolerance(&self) -> f64;

    /// Wavenumbers near which the comparison is not meaningful.
    fn singular_points(&self, _spec: &PotentialSpec) -> Vec<f64> {
        Vec::new()
    }

    /// Per-quantity deviations of a numerical point from the reference.
    fn compare(&self, numeric: &ScatteringPoint, reference: &Reference, out: &mut Deviations);
}

pub fn relative_deviation(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(RELATIVE_FLOOR)
}

fn amplitude_deviation(value: Complex64, reference: Complex64) -> f64 {
    (value - reference).norm() / reference.norm().max(1.0)
}

/// One of the three closed-form Scarf II parametrizations.
pub struct ScarfClosedForm {
    name: &'static str,
    matches: fn(&ScarfDomain) -> bool,
}

impl ScarfClosedForm {
    fn domain(&self, spec: &PotentialSpec) -> Option<ScarfDomain> {
        ScarfDomain::of(spec).filter(|d| (self.matches)(d))
    }
}

impl Oracle for ScarfClosedForm {
    fn name(&self) -> &'static str {
        self.name
    }

    fn covers(&self, spec: &PotentialSpec) -> bool {
        self.domain(spec).is_some()
    }

    fn reference(&self, spec: &PotentialSpec, k: f64) -> Result<Reference> {
        let domain = self.domain(spec).expect("oracle applied to a potential it does not cover");
        Ok(Reference::Observables(domain.point(k)?))
    }

    fn tolerance(&self) -> f64 {
        1e-4
    }

    fn singular_points(&self, spec: &PotentialSpec) -> Vec<f64> {
        self.domain(spec).map(|d| d.special_points()).unwrap_or_default()
    }

    fn compare(&self, numeric: &ScatteringPoint, reference: &Reference, out: &mut Deviations) {
        if let Reference::Observables(exact) = reference {
            out.record("T", relative_deviation(numeric.transmittance, exact.transmittance));
            out.record("R_left", relative_deviation(numeric.reflectance_left, exact.reflectance_left));
            out.record("R_right", relative_deviation(numeric.reflectance_right, exact.reflectance_right));
            out.record("absDetS", relative_deviation(numeric.abs_det_s, exact.abs_det_s));
        }
    }
}

/// Exact slab matching for the rectangular family.
pub struct SlabTransfer;

impl Oracle for SlabTransfer {
    fn name(&self) -> &'static str {
        "rectangular-transfer-matrix"
    }

    fn covers(&self, spec: &PotentialSpec) -> bool {
        matches!(spec, PotentialSpec::Rectangular { .. })
    }

    fn reference(&self, spec: &PotentialSpec, k: f64) -> Result<Reference> {
        match spec {
            PotentialSpec::Rectangular { p, q, half_width } => {
                Ok(Reference::Amplitudes(transfer_matrix_rectangular(*p, *q, *half_width, k)?))
            }
            _ => panic!("oracle applied to a potential it does not cover"),
        }
    }

    fn tolerance(&self) -> f64 {
        1e-10
    }

    fn compare(&self, numeric: &ScatteringPoint, reference: &Reference, out: &mut Deviations) {
        if let Reference::Amplitudes(exact) = reference {
            out.record("t", amplitude_deviation(numeric.t, exact.t));
            out.record("r_left", amplitude_deviation(numeric.r_left, exact.r_left));
            out.record("r_right", amplitude_deviation(numeric.r_right, exact.r_right));
        }
    }
}

pub struct OracleRegistry {
    oracles: Vec<Box<dyn Oracle>>,
}

impl Default for OracleRegistry {
    fn default() -> Self {
        let mut registry = Self::empty();
        registry.register(Box::new(ScarfClosedForm {
            name: "scarf2-absorptive",
            matches: |d| matches!(d, ScarfDomain::A { .. }),
        }));
        registry.register(Box::new(ScarfClosedForm {
            name: "scarf2-broken-pt",
            matches: |d| matches!(d, ScarfDomain::B { .. }),
        }));
        registry.register(Box::new(ScarfClosedForm {
            name: "scarf2-unbroken",
            matches: |d| matches!(d, ScarfDomain::C { .. }),
        }));
        registry.register(Box::new(SlabTransfer));
        registry
    }
}

impl OracleRegistry {
    pub fn empty() -> Self {
        Self { oracles: Vec::new() }
    }

    pub fn register(&mut self, oracle: Box<dyn Oracle>) {
        self.oracles.push(oracle);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.oracles.iter().map(|o| o.name()).collect()
    }

    pub fn by_name(&self, name: &str) -> Option<&dyn Oracle> {
        self.oracles.iter().find(|o| o.name() == name).map(|o| o.as_ref())
    }

    pub fn for_spec(&self, spec: &PotentialSpec) -> Option<&dyn Oracle> {
        self.oracles.iter().find(|o| o.covers(spec)).map(|o| o.as_ref())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub oracle: String,
    pub tolerance: f64,
    /// Signed wavenumbers compared.
    pub points: usize,
    /// Grid points skipped near singular wavenumbers.
    pub excluded: usize,
    pub max_deviation: Deviations,
    pub passed: bool,
}

/// Compares the integrator with `oracle` at `k = ±sqrt(E)` for every energy.
pub fn validate(
    oracle: &dyn Oracle,
    spec: &PotentialSpec,
    energies: &[f64],
    cfg: &SolverConfig,
) -> Result<ValidationSummary> {
    let propagator = Propagator::new(spec, cfg)?;
    let singular = oracle.singular_points(spec);
    let mut deviations = Deviations::default();
    let (mut points, mut excluded) = (0, 0);
    for &energy in energies {
        let k = energy.sqrt();
        for k in [k, -k] {
            if singular.iter().any(|s| (k - s).abs() < POLE_EXCLUSION) {
                excluded += 1;
                continue;
            }
            let numeric = propagator.scattering_at(k)?;
            let reference = oracle.reference(spec, k)?;
            oracle.compare(&numeric, &reference, &mut deviations);
            points += 1;
        }
    }
    let tolerance = oracle.tolerance();
    Ok(ValidationSummary {
        oracle: oracle.name().to_string(),
        tolerance,
        points,
        excluded,
        passed: deviations.max() <= tolerance,
        max_deviation: deviations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_selects_by_family() {
        let registry = OracleRegistry::default();
        assert_eq!(registry.for_spec(&PotentialSpec::absorptive_d(2.0)).unwrap().name(), "scarf2-absorptive");
        assert_eq!(registry.for_spec(&PotentialSpec::broken_pt_c(2.0)).unwrap().name(), "scarf2-broken-pt");
        assert_eq!(registry.for_spec(&PotentialSpec::unbroken_ab(1.2, 0.8)).unwrap().name(), "scarf2-unbroken");
        let rect = PotentialSpec::rectangular(Complex64::new(2.7, 0.0), -0.9, 2.0).unwrap();
        assert_eq!(registry.for_spec(&rect).unwrap().name(), "rectangular-transfer-matrix");
        assert!(registry.for_spec(&PotentialSpec::gaussian(Complex64::new(4.0, 0.0), -6.25)).is_none());
        let general = PotentialSpec::ScarfII(crate::potential::ScarfII::General {
            p: Complex64::new(1.0, 0.0),
            q: Complex64::new(0.0, 1.0),
        });
        assert!(registry.for_spec(&general).is_none());
        assert!(registry.by_name("scarf2-unbroken").is_some());
        assert_eq!(registry.names().len(), 4);
    }

    #[test]
    fn absorptive_validation_skips_singular_points() {
        let spec = PotentialSpec::absorptive_d(2.0);
        let registry = OracleRegistry::default();
        let oracle = registry.for_spec(&spec).unwrap();
        let summary = validate(oracle, &spec, &[1.0, 4.0, 6.0], &SolverConfig::for_spec(&spec)).unwrap();
        assert_eq!(summary.excluded, 2);
        assert_eq!(summary.points, 4);
        assert!(summary.passed, "{summary:?}");
        assert!(summary.max_deviation.get("T").unwrap() < 1e-4);
    }

    #[test]
    fn relative_deviation_uses_floor() {
        assert_eq!(relative_deviation(2.0, 1.0), 1.0);
        assert!(relative_deviation(2e-20, 1e-20) < 1e-10);
    }
}
