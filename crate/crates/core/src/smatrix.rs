//! The coherent-injection S-matrix `[[t, r_left], [r_right, t]]` and the
//! structural relations it obeys for PT-symmetric potentials.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numeric::ScatteringPoint;
use crate::potential::SymmetryClass;

/// `|T - 1|` below which neither branch of the phase relations applies.
pub const UNIT_T_KNIFE_EDGE: f64 = 1e-9;
/// `|r| / |t|` below which a reflection phase is treated as undefined.
pub const PHASE_FLOOR: f64 = 1e-9;

pub fn det_s(t: Complex64, r_left: Complex64, r_right: Complex64) -> Complex64 {
    t * t - r_left * r_right
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnimodularSign {
    /// `T < 1`: `|det S| = T + sqrt(R_left R_right)`.
    Plus,
    /// `T > 1`: `|det S| = T - sqrt(R_left R_right)`.
    Minus,
    NA,
}

/// Residuals of the PT phase and unimodularity relations at one point.
/// `None` marks a relation that does not apply.
///
/// The phase relations are `theta - phi_left = theta - phi_right` for
/// `T < 1` and `theta - phi_left = phi_right - theta` for `T > 1`, the common
/// value being `±pi/2`. `phase_residual_left` is the distance of
/// `theta - phi_left` from `±pi/2`; `phase_residual_right` is the distance of
/// the right-hand combination from the left one (or from `±pi/2` when the
/// left reflection vanishes).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SMatrixChecks {
    #[serde(rename = "detS")]
    pub det_s: Complex64,
    #[serde(rename = "absDetS")]
    pub abs_det_s: f64,
    pub unimodular_sign: UnimodularSign,
    pub phase_residual_left: Option<f64>,
    pub phase_residual_right: Option<f64>,
    pub eq6_residual: Option<f64>,
    /// `| |det S| - (T ± sqrt(R_left R_right)) |`.
    pub cross_residual: Option<f64>,
}

/// Maps an angle to `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// Distance of an angle from the nearer of `+pi/2` and `-pi/2`.
fn quarter_turn_distance(a: f64) -> f64 {
    wrap_angle(a - FRAC_PI_2).abs().min(wrap_angle(a + FRAC_PI_2).abs())
}

pub fn check_pt_relations(point: &ScatteringPoint, symmetry: &SymmetryClass) -> SMatrixChecks {
    let det = det_s(point.t, point.r_left, point.r_right);
    let abs_det_s = det.norm();
    let mut checks = SMatrixChecks {
        det_s: det,
        abs_det_s,
        unimodular_sign: UnimodularSign::NA,
        phase_residual_left: None,
        phase_residual_right: None,
        eq6_residual: None,
        cross_residual: None,
    };
    let t = point.transmittance;
    if !symmetry.is_pt() || point.pole_capped || (t - 1.0).abs() < UNIT_T_KNIFE_EDGE {
        return checks;
    }
    let below = t < 1.0;
    checks.unimodular_sign = if below { UnimodularSign::Plus } else { UnimodularSign::Minus };

    let geometric = (point.reflectance_left * point.reflectance_right).sqrt();
    let predicted = if below { t + geometric } else { t - geometric };
    checks.eq6_residual = Some((predicted - 1.0).abs());
    checks.cross_residual = Some((abs_det_s - predicted).abs());

    let floor = PHASE_FLOOR * point.t.norm();
    let left_lag = (point.r_left.norm() > floor).then_some(point.theta - point.phi_left);
    if let Some(lag) = left_lag {
        checks.phase_residual_left = Some(quarter_turn_distance(lag));
    }
    if point.r_right.norm() > floor {
        let lag = if below { point.theta - point.phi_right } else { point.phi_right - point.theta };
        checks.phase_residual_right = Some(match left_lag {
            Some(left) => wrap_angle(lag - left).abs(),
            None => quarter_turn_distance(lag),
        });
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{SymmetryKind, PtPhase};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn det_s_examples() {
        assert_eq!(det_s(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)), c(1.0, 0.0));
        assert_eq!(det_s(c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0)), c(1.0, 0.0));
    }

    #[test]
    fn det_s_of_absorptive_scarf_amplitudes() {
        // closed-form amplitudes at d = 2, k = 1: t from T and its phase does not
        // matter for |det S| since r = t f with real f
        let pi = std::f64::consts::PI;
        let (d, k) = (2.0_f64, 1.0_f64);
        let tt = ((k - d) / (k + d)) * (pi * k).sinh().powi(2)
            / ((pi * k).cosh().powi(2) - (pi * d).cosh().powi(2));
        let f = -(pi * d).sinh() / (pi * k).sinh();
        let t = Complex64::from_polar(tt.sqrt(), 0.3);
        let det = det_s(t, t * f, t * f);
        assert!((det.norm() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + FRAC_PI_2).abs() < 1e-15);
        assert!(wrap_angle(2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn non_pt_points_report_only_determinant() {
        let p = ScatteringPoint::from_amplitudes(1.0, c(0.5, 0.0), c(0.2, 0.1), c(0.2, 0.1));
        let class = SymmetryClass { kind: SymmetryKind::PSymmetricNonHermitian, pt_phase: None };
        let checks = check_pt_relations(&p, &class);
        assert_eq!(checks.unimodular_sign, UnimodularSign::NA);
        assert!(checks.eq6_residual.is_none() && checks.phase_residual_left.is_none());
        assert!((checks.abs_det_s - (c(0.25, 0.0) - c(0.2, 0.1) * c(0.2, 0.1)).norm()).abs() < 1e-15);
    }

    #[test]
    fn reflectionless_point_has_no_phase_residual() {
        let p = ScatteringPoint::from_amplitudes(1.0, c(0.0, 0.9), c(0.0, 0.0), c(0.0, 0.0));
        let class = SymmetryClass { kind: SymmetryKind::PTSymmetric, pt_phase: Some(PtPhase::Unbroken) };
        let checks = check_pt_relations(&p, &class);
        assert_eq!(checks.unimodular_sign, UnimodularSign::Plus);
        assert!(checks.phase_residual_left.is_none());
        assert!(checks.phase_residual_right.is_none());
    }

    #[test]
    fn phase_relations_hold_up_to_sign() {
        let class = SymmetryClass { kind: SymmetryKind::PTSymmetric, pt_phase: None };
        let t = Complex64::from_polar(0.8, 0.4);
        // T < 1: both reflections a quarter turn behind t, with either common sign
        for lag in [FRAC_PI_2, -FRAC_PI_2] {
            let r = Complex64::from_polar(0.6, 0.4 - lag);
            let checks = check_pt_relations(&ScatteringPoint::from_amplitudes(1.0, t, r, r * 0.5), &class);
            assert!(checks.phase_residual_left.unwrap() < 1e-12);
            assert!(checks.phase_residual_right.unwrap() < 1e-12);
        }
        // mismatched lags violate the relation
        let rl = Complex64::from_polar(0.6, 0.4 - FRAC_PI_2);
        let rr = Complex64::from_polar(0.3, 0.4 + FRAC_PI_2);
        let checks = check_pt_relations(&ScatteringPoint::from_amplitudes(1.0, t, rl, rr), &class);
        assert!((checks.phase_residual_right.unwrap() - PI).abs() < 1e-12);
        // T > 1: phi_right leads theta by the same quarter turn
        let t = Complex64::from_polar(1.5, 0.4);
        let rl = Complex64::from_polar(1.0, 0.4 - FRAC_PI_2);
        let rr = Complex64::from_polar(1.25, 0.4 + FRAC_PI_2);
        let p = ScatteringPoint::from_amplitudes(1.0, t, rl, rr);
        let checks = check_pt_relations(&p, &class);
        assert_eq!(checks.unimodular_sign, UnimodularSign::Minus);
        assert!(checks.phase_residual_right.unwrap() < 1e-12);
        assert!(checks.eq6_residual.unwrap() < 1e-12);
    }

    #[test]
    fn unit_transmittance_is_knife_edge() {
        let p = ScatteringPoint::from_amplitudes(1.0, c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        let class = SymmetryClass { kind: SymmetryKind::PTSymmetric, pt_phase: None };
        assert_eq!(check_pt_relations(&p, &class).unimodular_sign, UnimodularSign::NA);
    }
}
