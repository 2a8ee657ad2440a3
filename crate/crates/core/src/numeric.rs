//! Scattering amplitudes by direct integration of `psi'' = (V(x) - k^2) psi`.
//!
//! The first-order system `(psi, psi')` is advanced with fixed-step classical
//! RK4 across `[-x_max, x_max]`, starting from a pure outgoing wave on the far
//! side and projecting onto `e^{±ikx}` on the near side. Running with `k < 0`
//! gives the time-reversed amplitudes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ScatterError};
use crate::potential::PotentialSpec;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Transmittance above which a point is stored capped and flagged.
pub const POLE_CAP: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub step: f64,
    pub x_max: f64,
    pub method: Method,
}

impl SolverConfig {
    pub const DEFAULT_STEP: f64 = 1e-3;

    /// Default step with `x_max` set to the family's truncation radius.
    pub fn for_spec(spec: &PotentialSpec) -> Self {
        let tail = spec.x_tail();
        Self {
            step: Self::DEFAULT_STEP,
            x_max: if tail > 0.0 { tail } else { 1.0 },
            method: Method::Rk4,
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn with_x_max(mut self, x_max: f64) -> Self {
        self.x_max = x_max;
        self
    }

    fn validate(&self, spec: &PotentialSpec) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(ScatterError::InvalidSolver(format!("step must be positive, got {}", self.step)));
        }
        if !(self.x_max > 0.0 && self.x_max.is_finite()) {
            return Err(ScatterError::InvalidSolver(format!("x_max must be positive, got {}", self.x_max)));
        }
        if self.x_max < spec.x_tail() {
            return Err(ScatterError::InvalidSolver(format!(
                "x_max = {} is inside the {} truncation radius {}",
                self.x_max,
                spec.family(),
                spec.x_tail()
            )));
        }
        Ok(())
    }
}

/// All observables at one signed wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringPoint {
    pub k: f64,
    pub t: Complex64,
    pub r_left: Complex64,
    pub r_right: Complex64,
    #[serde(rename = "T")]
    pub transmittance: f64,
    #[serde(rename = "R_left")]
    pub reflectance_left: f64,
    #[serde(rename = "R_right")]
    pub reflectance_right: f64,
    pub theta: f64,
    pub phi_left: f64,
    pub phi_right: f64,
    #[serde(rename = "detS")]
    pub det_s: Complex64,
    #[serde(rename = "absDetS")]
    pub abs_det_s: f64,
    /// Set when `T` exceeded [`POLE_CAP`] and the moduli were clamped.
    pub pole_capped: bool,
    /// `|t_left - t_right| / |t|` from the two incidence solves; zero when
    /// built from a single set of amplitudes.
    pub t_mismatch: f64,
}

impl ScatteringPoint {
    pub fn from_amplitudes(k: f64, t: Complex64, r_left: Complex64, r_right: Complex64) -> Self {
        let det_s = crate::smatrix::det_s(t, r_left, r_right);
        let transmittance = t.norm_sqr();
        let pole_capped = !(transmittance <= POLE_CAP);
        let cap = |v: f64| if v.is_finite() { v.min(POLE_CAP) } else { POLE_CAP };
        let phase = |z: Complex64| if z.re.is_finite() && z.im.is_finite() { principal_arg(z) } else { 0.0 };
        Self {
            k,
            t,
            r_left,
            r_right,
            transmittance: cap(transmittance),
            reflectance_left: cap(r_left.norm_sqr()),
            reflectance_right: cap(r_right.norm_sqr()),
            theta: phase(t),
            phi_left: phase(r_left),
            phi_right: phase(r_right),
            det_s,
            abs_det_s: if det_s.norm().is_finite() { det_s.norm() } else { POLE_CAP },
            pole_capped,
            t_mismatch: 0.0,
        }
    }

    pub fn energy(&self) -> f64 {
        self.k * self.k
    }
}

/// Argument in `(-pi, pi]`.
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.arg();
    if a == -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        a
    }
}

/// A potential sampled once on a fixed integration grid, reusable across
/// wavenumbers.
#[derive(Debug, Clone)]
pub struct Propagator {
    x_max: f64,
    h: f64,
    /// Per interval: `V` at its left end, midpoint and right end.
    samples: Vec<[Complex64; 3]>,
}

impl Propagator {
    pub fn new(spec: &PotentialSpec, cfg: &SolverConfig) -> Result<Self> {
        cfg.validate(spec)?;
        // even number of intervals so that x = 0 is a node
        let half = (cfg.x_max / cfg.step).ceil().max(1.0) as usize;
        let h = cfg.x_max / half as f64;
        let node = |i: usize| (i as f64 - half as f64) * h;
        let samples = (0..2 * half)
            .map(|i| {
                let a = if i == 0 { -cfg.x_max } else { node(i) };
                let b = if i + 1 == 2 * half { cfg.x_max } else { node(i + 1) };
                spec.interval_samples(a, b)
            })
            .collect();
        Ok(Self { x_max: cfg.x_max, h, samples })
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    fn check_k(&self, k: f64) -> Result<()> {
        if k == 0.0 {
            return Err(ScatterError::DegenerateK);
        }
        let limit = 0.01_f64.min(0.1 / k.abs());
        // small slack for the rounding of x_max / n
        if self.h > limit * (1.0 + 1e-9) {
            return Err(ScatterError::InvalidSolver(format!(
                "step {} exceeds min(0.01, 0.1/|k|) = {} at k = {}",
                self.h, limit, k
            )));
        }
        Ok(())
    }

    /// Incidence from the left: returns `(t, r_left)`.
    pub fn solve_left(&self, k: f64) -> Result<(Complex64, Complex64)> {
        self.check_k(k)?;
        let ik = I * k;
        let x = self.x_max;
        let psi = (ik * x).exp();
        let state = self.integrate([psi, ik * psi], -1.0, k)?;
        let x = -self.x_max;
        let (psi, dpsi) = (state[0], state[1]);
        let a = (-ik * x).exp() * (dpsi + ik * psi) / (2.0 * ik);
        let b = (ik * x).exp() * (ik * psi - dpsi) / (2.0 * ik);
        Ok((a.inv(), b / a))
    }

    /// Incidence from the right: returns `(t, r_right)`.
    pub fn solve_right(&self, k: f64) -> Result<(Complex64, Complex64)> {
        self.check_k(k)?;
        let ik = I * k;
        let x = -self.x_max;
        let psi = (-ik * x).exp();
        let state = self.integrate([psi, -ik * psi], 1.0, k)?;
        let x = self.x_max;
        let (psi, dpsi) = (state[0], state[1]);
        let c = (ik * x).exp() * (ik * psi - dpsi) / (2.0 * ik);
        let d = (-ik * x).exp() * (dpsi + ik * psi) / (2.0 * ik);
        Ok((c.inv(), d / c))
    }

    pub fn scattering_at(&self, k: f64) -> Result<ScatteringPoint> {
        let (t, r_left) = self.solve_left(k)?;
        let (t_right, r_right) = self.solve_right(k)?;
        let mut point = ScatteringPoint::from_amplitudes(k, t, r_left, r_right);
        let relative = (t - t_right).norm() / t.norm().max(f64::MIN_POSITIVE);
        point.t_mismatch = relative;
        if !point.pole_capped {
            let tol = if point.transmittance > 1e3 { 1e-3 } else { 1e-6 };
            if !(relative <= tol) {
                return Err(ScatterError::TransmissionMismatch { k, relative });
            }
        }
        Ok(point)
    }

    /// Transmittance from the left solve alone.
    pub fn transmittance(&self, k: f64) -> Result<f64> {
        Ok(self.solve_left(k)?.0.norm_sqr())
    }

    /// Advances `(psi, psi')` across the whole grid; `direction` is -1 for
    /// right-to-left, +1 for left-to-right.
    fn integrate(&self, mut y: [Complex64; 2], direction: f64, k: f64) -> Result<[Complex64; 2]> {
        let k2 = k * k;
        let h = direction * self.h;
        let half = 0.5 * h;
        let deriv = |y: &[Complex64; 2], v: Complex64| [y[1], (v - k2) * y[0]];
        let n = self.samples.len();
        for step in 0..n {
            let idx = if direction < 0.0 { n - 1 - step } else { step };
            let [va, vm, vb] = self.samples[idx];
            let (v_start, v_end) = if direction < 0.0 { (vb, va) } else { (va, vb) };

            let k1 = deriv(&y, v_start);
            let y2 = [y[0] + half * k1[0], y[1] + half * k1[1]];
            let k2s = deriv(&y2, vm);
            let y3 = [y[0] + half * k2s[0], y[1] + half * k2s[1]];
            let k3 = deriv(&y3, vm);
            let y4 = [y[0] + h * k3[0], y[1] + h * k3[1]];
            let k4 = deriv(&y4, v_end);
            for j in 0..2 {
                y[j] += h / 6.0 * (k1[j] + 2.0 * k2s[j] + 2.0 * k3[j] + k4[j]);
            }
            if !(y[0].norm_sqr() + y[1].norm_sqr()).is_finite() {
                let x = if direction < 0.0 {
                    self.x_max - (step + 1) as f64 * self.h
                } else {
                    -self.x_max + (step + 1) as f64 * self.h
                };
                return Err(ScatterError::NonFiniteState { x });
            }
        }
        Ok(y)
    }
}

pub fn solve_left(spec: &PotentialSpec, k: f64, cfg: &SolverConfig) -> Result<(Complex64, Complex64)> {
    Propagator::new(spec, cfg)?.solve_left(k)
}

pub fn solve_right(spec: &PotentialSpec, k: f64, cfg: &SolverConfig) -> Result<(Complex64, Complex64)> {
    Propagator::new(spec, cfg)?.solve_right(k)
}

pub fn scattering_at(spec: &PotentialSpec, k: f64, cfg: &SolverConfig) -> Result<ScatteringPoint> {
    Propagator::new(spec, cfg)?.scattering_at(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_particle_is_transparent() {
        let spec = PotentialSpec::zero();
        let cfg = SolverConfig::for_spec(&spec);
        let (t, r) = solve_left(&spec, 1.0, &cfg).unwrap();
        assert!((t - 1.0).norm() < 1e-12);
        assert!(r.norm() < 1e-12);
        let (t, r) = solve_right(&spec, 1.0, &cfg).unwrap();
        assert!((t - 1.0).norm() < 1e-12);
        assert!(r.norm() < 1e-12);
        let p = scattering_at(&spec, 1.0, &cfg).unwrap();
        assert!((p.transmittance - 1.0).abs() < 1e-12);
        assert!(p.reflectance_left < 1e-24);
        assert!((p.abs_det_s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_k_is_rejected() {
        let spec = PotentialSpec::absorptive_d(2.0);
        let cfg = SolverConfig::for_spec(&spec);
        assert_eq!(solve_left(&spec, 0.0, &cfg), Err(ScatterError::DegenerateK));
        assert_eq!(scattering_at(&spec, 0.0, &cfg), Err(ScatterError::DegenerateK));
    }

    #[test]
    fn step_limit_is_enforced() {
        let spec = PotentialSpec::absorptive_d(2.0);
        let cfg = SolverConfig::for_spec(&spec).with_step(0.05);
        assert!(matches!(solve_left(&spec, 1.0, &cfg), Err(ScatterError::InvalidSolver(_))));
        let cfg = SolverConfig::for_spec(&spec).with_step(0.01);
        assert!(matches!(solve_left(&spec, 20.0, &cfg), Err(ScatterError::InvalidSolver(_))));
        let cfg = SolverConfig::for_spec(&spec).with_x_max(5.0);
        assert!(matches!(solve_left(&spec, 1.0, &cfg), Err(ScatterError::InvalidSolver(_))));
    }

    #[test]
    fn absorptive_d_matches_closed_form_transmittance() {
        // ((1-2)/(1+2)) sinh^2(pi) / (cosh^2(pi) - cosh^2(2 pi))
        let pi = std::f64::consts::PI;
        let oracle = (-1.0 / 3.0) * pi.sinh().powi(2) / (pi.cosh().powi(2) - (2.0 * pi).cosh().powi(2));
        let spec = PotentialSpec::absorptive_d(2.0);
        let (t, _) = solve_left(&spec, 1.0, &SolverConfig::for_spec(&spec)).unwrap();
        assert!((t.norm_sqr() - oracle).abs() < 1e-8 * oracle, "{} vs {}", t.norm_sqr(), oracle);
    }

    #[test]
    fn p_symmetric_potential_is_reciprocal() {
        let spec = PotentialSpec::absorptive_d(2.0);
        let cfg = SolverConfig::for_spec(&spec);
        for k in [0.5, 1.0, 1.7, 3.0] {
            let (_, rl) = solve_left(&spec, k, &cfg).unwrap();
            let (_, rr) = solve_right(&spec, k, &cfg).unwrap();
            assert!((rl - rr).norm() < 1e-8, "k={k}");
        }
    }

    #[test]
    fn asymmetric_potential_left_right_transmission_agree() {
        let spec = PotentialSpec::gaussian(c(4.0, 0.0), -6.25);
        let cfg = SolverConfig::for_spec(&spec);
        let (tl, rl) = solve_left(&spec, 1.0, &cfg).unwrap();
        let (tr, rr) = solve_right(&spec, 1.0, &cfg).unwrap();
        assert!((tl - tr).norm() < 1e-8 * tl.norm());
        assert!((rl - rr).norm() > 1e-3);
    }

    #[test]
    fn cpa_point_of_absorptive_scarf() {
        let spec = PotentialSpec::absorptive_d(2.0);
        let p = scattering_at(&spec, 2.0, &SolverConfig::for_spec(&spec)).unwrap();
        assert!(p.abs_det_s < 1e-3);
    }

    #[test]
    fn broken_pt_scarf_is_unimodular() {
        let spec = PotentialSpec::broken_pt_c(2.0);
        let p = scattering_at(&spec, 1.0, &SolverConfig::for_spec(&spec)).unwrap();
        assert!((p.abs_det_s - 1.0).abs() < 1e-6);
    }

    #[test]
    fn phases_are_principal() {
        assert_eq!(principal_arg(c(-1.0, -0.0)), std::f64::consts::PI);
        assert_eq!(principal_arg(c(-1.0, 0.0)), std::f64::consts::PI);
        assert!((principal_arg(c(0.0, -1.0)) + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn capped_point_stays_finite() {
        let p = ScatteringPoint::from_amplitudes(1.0, c(1e7, 0.0), c(1e7, 0.0), c(0.0, 1e7));
        assert!(p.pole_capped);
        assert_eq!(p.transmittance, POLE_CAP);
        assert!(p.abs_det_s.is_finite());
    }
}
