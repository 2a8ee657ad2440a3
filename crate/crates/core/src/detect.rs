//! Energy scans and the detectors for spectral singularities and coherent
//! perfect absorption.
//!
//! A spectral singularity shows up as a real-`k` pole of `T`, found as a
//! minimum of `g(k) = 1/T(k)`. CPA is a zero of `|det S|` at a real energy.
//! Candidates from both searches are merged by energy and matched against
//! three signatures:
//!
//! * CPA with lasing: poles at `+k` and `-k` with `|det S| = 1` on either side.
//! * CPA only: `|det S| -> 0` with a pole in the time-reversed channel only.
//! * spectral singularity: a pole at `+k` alone.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::FamilyRegistry;
use crate::error::{Result, ScatterError};
use crate::numeric::{Propagator, ScatteringPoint, SolverConfig};
use crate::optimize::{golden_section, local_minima, Minimum};
use crate::potential::{classify_default, PotentialSpec, SymmetryClass, SymmetryKind};
use crate::smatrix::check_pt_relations;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DetectorConfig {
    /// Refined `T` above which a minimum of `1/T` counts as a pole.
    pub t_huge: f64,
    /// Coarse-grid `1/T` below which a local minimum is refined.
    pub g_trigger: f64,
    /// Refined `|det S|` below which a minimum counts as CPA.
    pub tol_cpa: f64,
    /// Coarse-grid `|det S|` below which a local minimum is refined.
    pub cpa_trigger: f64,
    pub points_per_decade: usize,
    pub min_points: usize,
    /// Final bracket width in `k`.
    pub refine_width: f64,
    pub max_refine_iterations: u32,
    /// Energies closer than this are one event.
    pub energy_match: f64,
    /// Offset in `E` at which `|det S|` is probed around a pole.
    pub epsilon: f64,
    pub tol_one: f64,
    /// Lower bound on scanned energies.
    pub energy_floor: f64,
    /// Invariant checks skip points this close in `k` to a detected event.
    pub exclusion: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            t_huge: 1e3,
            g_trigger: 1e-3,
            tol_cpa: 1e-3,
            cpa_trigger: 0.1,
            points_per_decade: 400,
            min_points: 64,
            refine_width: 1e-6,
            max_refine_iterations: 200,
            energy_match: 1e-3,
            epsilon: 1e-2,
            tol_one: 1e-3,
            energy_floor: 1e-4,
            exclusion: 0.05,
        }
    }
}

fn check_range(e_min: f64, e_max: f64) -> Result<()> {
    if !(e_min.is_finite() && e_max.is_finite() && 0.0 < e_min && e_min < e_max) {
        return Err(ScatterError::InvalidRange(format!(
            "need 0 < E_min < E_max, got E_min = {e_min}, E_max = {e_max}"
        )));
    }
    Ok(())
}

/// `n` energies spaced uniformly on `[e_min, e_max]`.
pub fn uniform_grid(e_min: f64, e_max: f64, n: usize) -> Result<Vec<f64>> {
    check_range(e_min, e_max)?;
    if n < 2 {
        return Err(ScatterError::InvalidRange(format!("need at least 2 points, got {n}")));
    }
    let step = (e_max - e_min) / (n - 1) as f64;
    Ok((0..n).map(|i| if i + 1 == n { e_max } else { e_min + i as f64 * step }).collect())
}

/// Log-spaced energies with at least `per_decade` points per decade.
pub fn log_grid(e_min: f64, e_max: f64, per_decade: usize, min_points: usize) -> Result<Vec<f64>> {
    check_range(e_min, e_max)?;
    let decades = (e_max / e_min).log10();
    let n = ((decades * per_decade as f64).ceil() as usize + 1).max(min_points).max(2);
    let (lo, hi) = (e_min.ln(), e_max.ln());
    Ok((0..n)
        .map(|i| match i {
            0 => e_min,
            _ if i + 1 == n => e_max,
            _ => (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect())
}

/// Observables at `k = +sqrt(E)` and `k = -sqrt(E)`; a failed solve leaves
/// its side empty and records the error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSample {
    pub energy: f64,
    pub pos: Option<ScatteringPoint>,
    pub neg: Option<ScatteringPoint>,
    pub error: Option<String>,
}

impl ScanSample {
    fn compute(propagator: &Propagator, energy: f64) -> Self {
        let k = energy.sqrt();
        let (pos, neg) = (propagator.scattering_at(k), propagator.scattering_at(-k));
        let error = match (&pos, &neg) {
            (Err(e), _) | (_, Err(e)) => Some(e.to_string()),
            _ => None,
        };
        Self { energy, pos: pos.ok(), neg: neg.ok(), error }
    }

    pub fn pole_capped(&self) -> bool {
        [self.pos, self.neg].iter().flatten().any(|p| p.pole_capped)
    }
}

fn sample_all(propagator: &Propagator, energies: &[f64]) -> Vec<ScanSample> {
    energies.par_iter().map(|&e| ScanSample::compute(propagator, e)).collect()
}

/// Observables at both signs of `k` on a uniform energy grid.
pub fn scan(
    spec: &PotentialSpec,
    e_min: f64,
    e_max: f64,
    n_points: usize,
    cfg: &SolverConfig,
) -> Result<Vec<ScanSample>> {
    let energies = uniform_grid(e_min, e_max, n_points)?;
    let propagator = Propagator::new(spec, cfg)?;
    Ok(sample_all(&propagator, &energies))
}

/// One row of the scan CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    #[serde(rename = "E")]
    pub energy: f64,
    pub k: f64,
    #[serde(rename = "T_pos")]
    pub t_pos: f64,
    #[serde(rename = "T_neg")]
    pub t_neg: f64,
    #[serde(rename = "R_left_pos")]
    pub r_left_pos: f64,
    #[serde(rename = "R_right_pos")]
    pub r_right_pos: f64,
    #[serde(rename = "R_left_neg")]
    pub r_left_neg: f64,
    #[serde(rename = "R_right_neg")]
    pub r_right_neg: f64,
    #[serde(rename = "absDetS_pos")]
    pub abs_det_s_pos: f64,
    #[serde(rename = "absDetS_neg")]
    pub abs_det_s_neg: f64,
    /// `POLE` when a value was capped, `FAILED` when a solve failed; joined by `|`.
    pub flags: String,
}

pub const CSV_COLUMNS: [&str; 11] = [
    "E",
    "k",
    "T_pos",
    "T_neg",
    "R_left_pos",
    "R_right_pos",
    "R_left_neg",
    "R_right_neg",
    "absDetS_pos",
    "absDetS_neg",
    "flags",
];

impl From<&ScanSample> for ScanRow {
    fn from(s: &ScanSample) -> Self {
        let side = |p: &Option<ScatteringPoint>| match p {
            Some(p) => (p.transmittance, p.reflectance_left, p.reflectance_right, p.abs_det_s),
            None => (f64::NAN, f64::NAN, f64::NAN, f64::NAN),
        };
        let (t_pos, r_left_pos, r_right_pos, abs_det_s_pos) = side(&s.pos);
        let (t_neg, r_left_neg, r_right_neg, abs_det_s_neg) = side(&s.neg);
        let mut flags = Vec::new();
        if s.pole_capped() {
            flags.push("POLE");
        }
        if s.error.is_some() {
            flags.push("FAILED");
        }
        Self {
            energy: s.energy,
            k: s.energy.sqrt(),
            t_pos,
            t_neg,
            r_left_pos,
            r_right_pos,
            r_left_neg,
            r_right_neg,
            abs_det_s_pos,
            abs_det_s_neg,
            flags: flags.join("|"),
        }
    }
}

/// 17 significant digits, so that parsing returns the same `f64`.
pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn write_csv<W: Write>(rows: &[ScanRow], out: W) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_COLUMNS)?;
    for r in rows {
        let numbers = [
            r.energy,
            r.k,
            r.t_pos,
            r.t_neg,
            r.r_left_pos,
            r.r_right_pos,
            r.r_left_neg,
            r.r_right_neg,
            r.abs_det_s_pos,
            r.abs_det_s_neg,
        ];
        let mut record: Vec<String> = numbers.iter().map(|&x| format_f64(x)).collect();
        record.push(r.flags.clone());
        writer.write_record(&record)?;
    }
    writer.flush()
}

pub fn read_csv<R: Read>(input: R) -> std::result::Result<Vec<ScanRow>, csv::Error> {
    csv::Reader::from_reader(input).deserialize().collect()
}

/// A refined minimum of `1/T` with `T` above the pole threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralSingularity {
    #[serde(rename = "E")]
    pub energy: f64,
    pub k: f64,
    #[serde(rename = "T")]
    pub transmittance: f64,
    pub iterations: u32,
    pub bracket_width: f64,
}

/// A refined zero of `|det S|`, with the transmittances on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpaPoint {
    #[serde(rename = "E")]
    pub energy: f64,
    /// The sign whose transmittance stays finite.
    pub k: f64,
    #[serde(rename = "absDetS")]
    pub abs_det_s: f64,
    #[serde(rename = "T_pos")]
    pub t_pos: f64,
    #[serde(rename = "T_neg")]
    pub t_neg: f64,
    /// Whether `T(-k)` exceeds the pole threshold.
    pub time_reversed_pole: bool,
    pub iterations: u32,
    pub bracket_width: f64,
}

/// Detection context: a potential, its sampled propagator and thresholds.
pub struct Detector {
    spec: PotentialSpec,
    solver: SolverConfig,
    propagator: Propagator,
    config: DetectorConfig,
}

impl Detector {
    pub fn new(spec: &PotentialSpec, solver: &SolverConfig, config: DetectorConfig) -> Result<Self> {
        Ok(Self {
            spec: spec.clone(),
            solver: *solver,
            propagator: Propagator::new(spec, solver)?,
            config,
        })
    }

    pub fn config(&self) -> &DetectorConfig {
        &self.config
    }

    pub fn propagator(&self) -> &Propagator {
        &self.propagator
    }

    fn clamp_range(&self, e_min: f64, e_max: f64) -> Result<(f64, f64)> {
        check_range(e_min, e_max)?;
        let lo = e_min.max(self.config.energy_floor);
        check_range(lo, e_max)?;
        Ok((lo, e_max))
    }

    /// Log-spaced coarse samples used by both searches.
    pub fn coarse_scan(&self, e_min: f64, e_max: f64) -> Result<Vec<ScanSample>> {
        let (lo, hi) = self.clamp_range(e_min, e_max)?;
        let energies = log_grid(lo, hi, self.config.points_per_decade, self.config.min_points)?;
        Ok(sample_all(&self.propagator, &energies))
    }

    fn transmittance(&self, k: f64) -> f64 {
        self.propagator.transmittance(k).unwrap_or(f64::NAN)
    }

    fn refine(&self, objective: impl Fn(f64) -> f64, a: f64, b: f64) -> Minimum {
        golden_section(objective, a, b, self.config.refine_width, self.config.max_refine_iterations)
    }

    /// Brackets `[k_{i-1}, k_{i+1}]` around coarse local minima of `values`
    /// that fall below `trigger`.
    fn brackets(ks: &[f64], values: &[f64], trigger: f64) -> Vec<(f64, f64)> {
        local_minima(values)
            .into_iter()
            .filter(|&i| values[i] < trigger)
            .map(|i| (ks[i - 1], ks[i + 1]))
            .collect()
    }

    pub fn spectral_singularities_from(&self, coarse: &[ScanSample]) -> Vec<SpectralSingularity> {
        let mut brackets = Vec::new();
        for sign in [1.0, -1.0] {
            let ks: Vec<f64> = coarse.iter().map(|s| sign * s.energy.sqrt()).collect();
            let g: Vec<f64> = coarse
                .iter()
                .map(|s| {
                    let side = if sign > 0.0 { s.pos } else { s.neg };
                    side.map_or(f64::NAN, |p| 1.0 / p.transmittance)
                })
                .collect();
            brackets.extend(Self::brackets(&ks, &g, self.config.g_trigger));
        }
        let refined: Vec<SpectralSingularity> = brackets
            .par_iter()
            .map(|&(a, b)| {
                let m = self.refine(|k| 1.0 / self.transmittance(k), a, b);
                SpectralSingularity {
                    energy: m.x * m.x,
                    k: m.x,
                    transmittance: 1.0 / m.value,
                    iterations: m.iterations,
                    bracket_width: m.width,
                }
            })
            .collect();
        let mut accepted: Vec<SpectralSingularity> = Vec::new();
        for ss in refined.into_iter().filter(|s| s.transmittance > self.config.t_huge) {
            let duplicate = accepted
                .iter()
                .any(|a| a.k.signum() == ss.k.signum() && (a.energy - ss.energy).abs() < self.config.energy_match);
            if !duplicate {
                accepted.push(ss);
            }
        }
        accepted.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(b.k.total_cmp(&a.k)));
        accepted
    }

    pub fn cpa_from(&self, coarse: &[ScanSample]) -> Vec<CpaPoint> {
        let ks: Vec<f64> = coarse.iter().map(|s| s.energy.sqrt()).collect();
        let values: Vec<f64> = coarse.iter().map(|s| s.pos.map_or(f64::NAN, |p| p.abs_det_s)).collect();
        let brackets = Self::brackets(&ks, &values, self.config.cpa_trigger);
        let abs_det_s = |k: f64| self.propagator.scattering_at(k).map_or(f64::NAN, |p| p.abs_det_s);
        let refined: Vec<CpaPoint> = brackets
            .par_iter()
            .map(|&(a, b)| {
                let m = self.refine(abs_det_s, a, b);
                let (t_pos, t_neg) = (self.transmittance(m.x), self.transmittance(-m.x));
                // the absorbing side is the one with the smaller transmittance
                let k = if t_neg >= t_pos { m.x } else { -m.x };
                let t_reversed = if k > 0.0 { t_neg } else { t_pos };
                CpaPoint {
                    energy: m.x * m.x,
                    k,
                    abs_det_s: m.value,
                    t_pos,
                    t_neg,
                    time_reversed_pole: t_reversed > self.config.t_huge,
                    iterations: m.iterations,
                    bracket_width: m.width,
                }
            })
            .collect();
        let mut accepted: Vec<CpaPoint> = Vec::new();
        for cpa in refined {
            // a zero with both channels at a pole is the 0/0 of lasing, not absorption
            let finite_side = cpa.t_pos.min(cpa.t_neg) < self.config.t_huge;
            let duplicate = accepted.iter().any(|a| (a.energy - cpa.energy).abs() < self.config.energy_match);
            if cpa.abs_det_s < self.config.tol_cpa && finite_side && !duplicate {
                accepted.push(cpa);
            }
        }
        accepted.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        accepted
    }

    /// `|det S|` at `+sqrt(energy)`, or NaN if the solve fails.
    fn abs_det_s_at(&self, energy: f64) -> f64 {
        if energy <= 0.0 {
            return f64::NAN;
        }
        self.propagator.scattering_at(energy.sqrt()).map_or(f64::NAN, |p| p.abs_det_s)
    }

    /// Merges candidates by energy and assigns each group a signature.
    pub fn classify_events(&self, ss: &[SpectralSingularity], cpa: &[CpaPoint]) -> Classification {
        #[derive(Clone, Copy)]
        enum Candidate {
            Ss(SpectralSingularity),
            Cpa(CpaPoint),
        }
        let energy = |c: &Candidate| match c {
            Candidate::Ss(s) => s.energy,
            Candidate::Cpa(c) => c.energy,
        };
        let mut all: Vec<Candidate> =
            ss.iter().copied().map(Candidate::Ss).chain(cpa.iter().copied().map(Candidate::Cpa)).collect();
        all.sort_by(|a, b| energy(a).total_cmp(&energy(b)));

        let mut groups: Vec<Vec<Candidate>> = Vec::new();
        for c in all {
            match groups.last_mut() {
                Some(g) if energy(&c) - energy(g.last().unwrap()) <= self.config.energy_match => g.push(c),
                _ => groups.push(vec![c]),
            }
        }

        let mut out = Classification::default();
        for group in groups {
            let sss: Vec<SpectralSingularity> = group
                .iter()
                .filter_map(|c| if let Candidate::Ss(s) = c { Some(*s) } else { None })
                .collect();
            let cpas: Vec<CpaPoint> = group
                .iter()
                .filter_map(|c| if let Candidate::Cpa(c) = c { Some(*c) } else { None })
                .collect();
            let pos = sss.iter().filter(|s| s.k > 0.0).max_by(|a, b| a.transmittance.total_cmp(&b.transmittance));
            let neg = sss.iter().filter(|s| s.k < 0.0).max_by(|a, b| a.transmittance.total_cmp(&b.transmittance));
            let iterations = group
                .iter()
                .map(|c| match c {
                    Candidate::Ss(s) => s.iterations,
                    Candidate::Cpa(c) => c.iterations,
                })
                .max()
                .unwrap_or(0);
            let width = group
                .iter()
                .map(|c| match c {
                    Candidate::Ss(s) => s.bracket_width,
                    Candidate::Cpa(c) => c.bracket_width,
                })
                .fold(0.0, f64::max);

            let event = match (pos, neg, cpas.first()) {
                (Some(p), Some(n), None) => {
                    let e = 0.5 * (p.energy + n.energy);
                    let around = [self.abs_det_s_at(e - self.config.epsilon), self.abs_det_s_at(e + self.config.epsilon)];
                    if around.iter().all(|v| (v - 1.0).abs() <= self.config.tol_one) {
                        Ok(PhenomenonEvent {
                            kind: EventKind::CpaWithLasing,
                            energy: e,
                            k: p.k,
                            diagnostics: Diagnostics {
                                t_pos: p.transmittance,
                                t_neg: n.transmittance,
                                abs_det_s: self.abs_det_s_at(e),
                                refinement_iterations: iterations,
                                bracket_width: width,
                            },
                        })
                    } else {
                        Err(format!(
                            "poles at both signs but |det S| at E -/+ epsilon is {:?}, not 1",
                            around
                        ))
                    }
                }
                (Some(one), None, Some(c)) | (None, Some(one), Some(c)) => {
                    if one.k.signum() == -c.k.signum() {
                        Ok(PhenomenonEvent {
                            kind: EventKind::CpaOnly,
                            energy: c.energy,
                            k: c.k,
                            diagnostics: Diagnostics {
                                t_pos: c.t_pos,
                                t_neg: c.t_neg,
                                abs_det_s: c.abs_det_s,
                                refinement_iterations: iterations,
                                bracket_width: width,
                            },
                        })
                    } else {
                        Err("|det S| vanishes on the side that has the pole".to_string())
                    }
                }
                (Some(p), None, None) => {
                    let e = p.energy;
                    Ok(PhenomenonEvent {
                        kind: EventKind::SpectralSingularity,
                        energy: e,
                        k: p.k,
                        diagnostics: Diagnostics {
                            t_pos: p.transmittance,
                            t_neg: self.transmittance(-p.k),
                            abs_det_s: self.abs_det_s_at(e),
                            refinement_iterations: iterations,
                            bracket_width: width,
                        },
                    })
                }
                (None, Some(_), None) => Err("pole at negative k without a matching absorption zero".to_string()),
                (None, None, Some(_)) => Err("|det S| vanishes but the time-reversed channel has no pole".to_string()),
                (Some(_), Some(_), Some(_)) => Err("poles at both signs together with |det S| = 0".to_string()),
                (None, None, None) => unreachable!("groups are never empty"),
            };
            match event {
                Ok(ev) => out.events.push(ev),
                Err(reason) => out.conflicts.push(Conflict {
                    energy: group.iter().map(energy).sum::<f64>() / group.len() as f64,
                    reason,
                }),
            }
        }
        out
    }

    /// Pass/fail counts of the structural relations on the coarse samples,
    /// skipping points near detected events.
    pub fn invariant_summary(&self, coarse: &[ScanSample], symmetry: &SymmetryClass, avoid: &[f64]) -> InvariantSummary {
        let mut checks = vec![
            InvariantCheck::new("t-consistency", 1e-6),
            InvariantCheck::new("pt-time-reversal", 1e-6),
            InvariantCheck::new("pt-phase", 1e-4),
            InvariantCheck::new("unimodularity", 1e-6),
            InvariantCheck::new("detS-evenness", 1e-6),
            InvariantCheck::new("hermitian-unitarity", 1e-8),
        ];
        let mut excluded = 0;
        let mut failed_points = 0;
        let near = |k: f64| avoid.iter().any(|a| (a.abs() - k).abs() < self.config.exclusion);
        for s in coarse {
            let k = s.energy.sqrt();
            if near(k) {
                excluded += 1;
                continue;
            }
            let (Some(pos), Some(neg)) = (s.pos, s.neg) else {
                failed_points += 1;
                continue;
            };
            if pos.pole_capped || neg.pole_capped {
                excluded += 1;
                continue;
            }
            let pt = symmetry.is_pt();
            let hermitian = symmetry.kind == SymmetryKind::Hermitian;
            checks[0].record(Some(pos.t_mismatch.max(neg.t_mismatch)));
            checks[1].record(pt.then(|| {
                relative(neg.transmittance, pos.transmittance)
                    .max(relative(neg.reflectance_left, pos.reflectance_right))
                    .max(relative(neg.reflectance_right, pos.reflectance_left))
            }));
            let (cp, cn) = (check_pt_relations(&pos, symmetry), check_pt_relations(&neg, symmetry));
            let phase = [cp.phase_residual_left, cp.phase_residual_right, cn.phase_residual_left, cn.phase_residual_right]
                .into_iter()
                .flatten()
                .reduce(f64::max);
            checks[2].record(if pt { phase } else { None });
            checks[3].record(pt.then(|| {
                [cp.eq6_residual, cn.eq6_residual, cp.cross_residual, cn.cross_residual]
                    .into_iter()
                    .flatten()
                    .fold((pos.abs_det_s - 1.0).abs().max((neg.abs_det_s - 1.0).abs()), f64::max)
            }));
            checks[4].record(pt.then(|| (pos.abs_det_s - neg.abs_det_s).abs()));
            checks[5].record(hermitian.then(|| {
                let unitarity = |p: &ScatteringPoint| {
                    (p.transmittance + p.reflectance_left - 1.0)
                        .abs()
                        .max((p.reflectance_left - p.reflectance_right).abs())
                };
                unitarity(&pos).max(unitarity(&neg))
            }));
        }
        InvariantSummary { checks, excluded_points: excluded, failed_points }
    }

    /// Full pipeline over `[e_min, e_max]`.
    pub fn detect(&self, e_min: f64, e_max: f64) -> Result<DetectionReport> {
        let coarse = self.coarse_scan(e_min, e_max)?;
        let ss = self.spectral_singularities_from(&coarse);
        let cpa = self.cpa_from(&coarse);
        let classification = self.classify_events(&ss, &cpa);
        let symmetry = classify_default(&self.spec);
        let avoid: Vec<f64> = ss
            .iter()
            .map(|s| s.k)
            .chain(cpa.iter().map(|c| c.k))
            .chain(classification.events.iter().map(|e| e.k))
            .chain(classification.conflicts.iter().map(|c| c.energy.sqrt()))
            .collect();
        let invariant_summary = self.invariant_summary(&coarse, &symmetry, &avoid);
        Ok(DetectionReport {
            potential: FamilyRegistry::default().to_value(&self.spec),
            symmetry,
            solver: self.solver,
            thresholds: self.config,
            scan_range: ScanRange { e_min: coarse[0].energy, e_max, points: coarse.len() },
            events: classification.events,
            conflicts: classification.conflicts,
            invariant_summary,
        })
    }
}

fn relative(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1e-9)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    SpectralSingularity,
    CpaOnly,
    CpaWithLasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostics {
    /// `T(+sqrt E)`.
    #[serde(rename = "T_pos")]
    pub t_pos: f64,
    /// `T(-sqrt E)`.
    #[serde(rename = "T_neg")]
    pub t_neg: f64,
    #[serde(rename = "absDetS")]
    pub abs_det_s: f64,
    pub refinement_iterations: u32,
    pub bracket_width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhenomenonEvent {
    pub kind: EventKind,
    #[serde(rename = "E")]
    pub energy: f64,
    pub k: f64,
    pub diagnostics: Diagnostics,
}

/// An energy whose candidates match none of the signatures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conflict {
    #[serde(rename = "E")]
    pub energy: f64,
    pub reason: String,
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("conflicting signature at E = {}: {}", .0.energy, .0.reason)]
pub struct ConflictingSignature(pub Conflict);

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub events: Vec<PhenomenonEvent>,
    pub conflicts: Vec<Conflict>,
}

impl Classification {
    pub fn conflict_errors(&self) -> Vec<ConflictingSignature> {
        self.conflicts.iter().cloned().map(ConflictingSignature).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantCheck {
    pub name: String,
    pub tolerance: f64,
    pub passed: usize,
    pub failed: usize,
    /// Points where the relation does not apply.
    pub skipped: usize,
    pub max_residual: f64,
}

impl InvariantCheck {
    fn new(name: &str, tolerance: f64) -> Self {
        Self { name: name.to_string(), tolerance, passed: 0, failed: 0, skipped: 0, max_residual: 0.0 }
    }

    fn record(&mut self, residual: Option<f64>) {
        match residual {
            None => self.skipped += 1,
            Some(r) => {
                if r <= self.tolerance {
                    self.passed += 1;
                } else {
                    self.failed += 1;
                }
                if !(r <= self.max_residual) {
                    self.max_residual = r;
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantSummary {
    pub checks: Vec<InvariantCheck>,
    pub excluded_points: usize,
    pub failed_points: usize,
}

impl InvariantSummary {
    pub fn all_pass(&self) -> bool {
        self.failed_points == 0 && self.checks.iter().all(|c| c.failed == 0)
    }

    pub fn get(&self, name: &str) -> Option<&InvariantCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRange {
    #[serde(rename = "E_min")]
    pub e_min: f64,
    #[serde(rename = "E_max")]
    pub e_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DetectionReport {
    pub potential: serde_json::Value,
    pub symmetry: SymmetryClass,
    pub solver: SolverConfig,
    pub thresholds: DetectorConfig,
    pub scan_range: ScanRange,
    /// Sorted by energy.
    pub events: Vec<PhenomenonEvent>,
    pub conflicts: Vec<Conflict>,
    pub invariant_summary: InvariantSummary,
}

pub fn find_spectral_singularities(
    spec: &PotentialSpec,
    e_min: f64,
    e_max: f64,
    solver: &SolverConfig,
    config: DetectorConfig,
) -> Result<Vec<SpectralSingularity>> {
    let detector = Detector::new(spec, solver, config)?;
    Ok(detector.spectral_singularities_from(&detector.coarse_scan(e_min, e_max)?))
}

pub fn find_cpa(
    spec: &PotentialSpec,
    e_min: f64,
    e_max: f64,
    solver: &SolverConfig,
    config: DetectorConfig,
) -> Result<Vec<CpaPoint>> {
    let detector = Detector::new(spec, solver, config)?;
    Ok(detector.cpa_from(&detector.coarse_scan(e_min, e_max)?))
}

pub fn detect(
    spec: &PotentialSpec,
    e_min: f64,
    e_max: f64,
    solver: &SolverConfig,
    config: DetectorConfig,
) -> Result<DetectionReport> {
    Detector::new(spec, solver, config)?.detect(e_min, e_max)
}

/// Evidence for or against "no spectral singularity and no CPA while the
/// discrete spectrum is real" on one PT-symmetric instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConjectureCheck {
    /// `None` when the real-spectrum criterion is not known for the family.
    pub has_real_spectrum_criterion: Option<bool>,
    pub ss_found: bool,
    pub cpa_found: bool,
}

impl ConjectureCheck {
    /// False only for an instance with a real spectrum that shows either effect.
    pub fn consistent(&self) -> bool {
        self.has_real_spectrum_criterion != Some(true) || !(self.ss_found || self.cpa_found)
    }
}

pub fn check_unbroken_conjecture(
    spec: &PotentialSpec,
    e_min: f64,
    e_max: f64,
    solver: &SolverConfig,
    config: DetectorConfig,
) -> Result<ConjectureCheck> {
    let symmetry = classify_default(spec);
    let detector = Detector::new(spec, solver, config)?;
    let coarse = detector.coarse_scan(e_min, e_max)?;
    Ok(ConjectureCheck {
        has_real_spectrum_criterion: symmetry.pt_phase.map(|p| p == crate::potential::PtPhase::Unbroken),
        ss_found: !detector.spectral_singularities_from(&coarse).is_empty(),
        cpa_found: !detector.cpa_from(&coarse).is_empty(),
    })
}
