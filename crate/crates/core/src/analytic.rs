//! Closed-form observables of the three Scarf II parametrizations.
//!
//! Differences `cosh^2(pi k) - cosh^2(pi s)` are evaluated through the
//! identity `cosh^2 u - cosh^2 v = sinh(u - v) sinh(u + v)`, which removes the
//! cancellation near `k = ±s`. Hyperbolic ratios switch to log form once any
//! argument exceeds [`LOG_DOMAIN_ARG`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ScatterError};
use crate::numeric::POLE_CAP;
use crate::potential::{PotentialSpec, ScarfII};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Distance in `k` from a pole or 0/0 point inside which flags are raised
/// instead of evaluating.
pub const POLE_PROXIMITY: f64 = 1e-6;
pub const LOG_DOMAIN_ARG: f64 = 300.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticPoint {
    pub k: f64,
    #[serde(rename = "T")]
    pub transmittance: f64,
    pub f_left: Complex64,
    pub f_right: Complex64,
    #[serde(rename = "R_left")]
    pub reflectance_left: f64,
    #[serde(rename = "R_right")]
    pub reflectance_right: f64,
    #[serde(rename = "absDetS")]
    pub abs_det_s: f64,
    #[serde(rename = "atPole")]
    pub at_pole: bool,
    #[serde(rename = "atIndeterminacy")]
    pub at_indeterminacy: bool,
}

impl AnalyticPoint {
    fn regular(k: f64, t: f64, f_left: Complex64, f_right: Complex64, abs_det_s: f64) -> Self {
        Self {
            k,
            transmittance: t,
            f_left,
            f_right,
            reflectance_left: t * f_left.norm_sqr(),
            reflectance_right: t * f_right.norm_sqr(),
            abs_det_s,
            at_pole: false,
            at_indeterminacy: false,
        }
    }

    fn pole(k: f64, f_left: Complex64, f_right: Complex64, abs_det_s: f64, indeterminate: bool) -> Self {
        Self {
            k,
            transmittance: POLE_CAP,
            f_left,
            f_right,
            reflectance_left: POLE_CAP,
            reflectance_right: POLE_CAP,
            abs_det_s,
            at_pole: true,
            at_indeterminacy: indeterminate,
        }
    }

    pub fn energy(&self) -> f64 {
        self.k * self.k
    }

    pub fn is_flagged(&self) -> bool {
        self.at_pole || self.at_indeterminacy
    }
}

/// `ln|sinh y|`, valid for any nonzero `y`.
fn ln_abs_sinh(y: f64) -> f64 {
    let a = y.abs();
    if a < 20.0 {
        a.sinh().ln()
    } else {
        a + (-(-2.0 * a).exp()).ln_1p() - std::f64::consts::LN_2
    }
}

/// `y / sinh(pi y)`, continuous through `y = 0`.
fn pi_sinhc(y: f64) -> f64 {
    let z = PI * y;
    if z.abs() < 1e-4 {
        (1.0 - z * z / 6.0) / PI
    } else {
        y / z.sinh()
    }
}

fn check_k(k: f64) -> Result<()> {
    if k == 0.0 {
        Err(ScatterError::DegenerateK)
    } else {
        Ok(())
    }
}

/// Domain A, `V = (d^2 - i d) sech^2 x`.
///
/// `T = ((k-d)/(k+d)) sinh^2(pi k) / (cosh^2(pi k) - cosh^2(pi d))`,
/// `f_left = f_right = -sinh(pi d)/sinh(pi k)`, `|det S| = |(k-d)/(k+d)|`.
/// `k = -d` is a spectral singularity; at `k = +d` the transmittance takes
/// its finite limit `tanh(pi d)/(4 pi d)` and `|det S| -> 0`.
pub fn domain_a_point(k: f64, d: f64) -> Result<AnalyticPoint> {
    check_k(k)?;
    let f = if (PI * k).abs().max((PI * d).abs()) > LOG_DOMAIN_ARG {
        let mag = (ln_abs_sinh(PI * d) - ln_abs_sinh(PI * k)).exp();
        if d == 0.0 {
            0.0
        } else {
            -mag * (d.signum() * k.signum())
        }
    } else {
        -(PI * d).sinh() / (PI * k).sinh()
    };
    let f = Complex64::new(f, 0.0);

    if d != 0.0 && (k + d).abs() < POLE_PROXIMITY {
        return Ok(AnalyticPoint::pole(k, f, f, POLE_CAP, false));
    }
    if d != 0.0 && (k - d).abs() < POLE_PROXIMITY {
        let t = (PI * d).tanh() / (4.0 * PI * d);
        let mut point = AnalyticPoint::regular(k, t, f, f, 0.0);
        point.at_indeterminacy = true;
        return Ok(point);
    }

    let abs_det_s = ((k - d) / (k + d)).abs();
    let largest = [PI * k, PI * (k - d), PI * (k + d)].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let t = if largest > LOG_DOMAIN_ARG {
        // (k-d)/sinh(pi(k-d)) and (k+d)/sinh(pi(k+d)) share the sign of their argument pair, so T > 0
        let ln_t = 2.0 * ln_abs_sinh(PI * k) - ln_abs_sinh(PI * (k - d)) - ln_abs_sinh(PI * (k + d));
        ((k - d) / (k + d)).abs() * ln_t.exp()
    } else {
        pi_sinhc(k - d) * (PI * k).sinh().powi(2) / ((k + d) * (PI * (k + d)).sinh())
    };
    Ok(AnalyticPoint::regular(k, t, f, f, abs_det_s))
}

/// `|det S|` in its uncancelled form `|(k-d)/(k+d) * D/D|` with `D = cosh^2(pi k) - cosh^2(pi d)`: NaN at
/// `k = ±d` where it reads 0/0.
#[allow(clippy::eq_op)]
pub fn domain_a_det_s_uncancelled(k: f64, d: f64) -> f64 {
    let diff = (PI * k).cosh().powi(2) - (PI * d).cosh().powi(2);
    ((k - d) / (k + d) * (diff / diff)).abs()
}

/// Reflection factors of domain B; `r = t f`.
fn domain_b_factors(k: f64, c: f64) -> (Complex64, Complex64) {
    let big = (2.0 * PI * c).cosh();
    let u = PI * k.abs();
    let denom = -(-4.0 * u).exp_m1();
    let slow = (-u).exp();
    let fast = (-3.0 * u).exp();
    // for k > 0: f_left = 2i (e^{-3u} - e^{-u} C)/(1 - e^{-4u}), f_right = 2i (e^{-u} - e^{-3u} C)/(1 - e^{-4u});
    // k -> -k maps f_left -> -f_right and f_right -> -f_left
    let a = 2.0 * (fast - slow * big) / denom;
    let b = 2.0 * (slow - fast * big) / denom;
    if k > 0.0 {
        (I * a, I * b)
    } else {
        (-I * b, -I * a)
    }
}

/// Domain B, `V = (2c^2 - 1/4) sech^2 x - i (2c^2 + 1/2) sech x tanh x`.
///
/// `T = sinh^2(pi k) cosh^2(pi k) / (cosh^2(pi k) - cosh^2(pi c))^2` with
/// self-dual spectral singularities at `k = ±c`, where `|det S|` is 0/0 with
/// limit 1. Elsewhere `|det S| = 1`.
pub fn domain_b_point(k: f64, c: f64) -> Result<AnalyticPoint> {
    check_k(k)?;
    let (f_left, f_right) = domain_b_factors(k, c);
    if (k.abs() - c.abs()).abs() < POLE_PROXIMITY {
        return Ok(AnalyticPoint::pole(k, f_left, f_right, 1.0, true));
    }
    let largest = (PI * (k.abs() + c.abs())).max(2.0 * PI * k.abs());
    let t = if largest > LOG_DOMAIN_ARG {
        let ln_t = 2.0 * (ln_abs_sinh(2.0 * PI * k) - std::f64::consts::LN_2)
            - 2.0 * ln_abs_sinh(PI * (k - c))
            - 2.0 * ln_abs_sinh(PI * (k + c));
        ln_t.exp()
    } else {
        let num = 0.5 * (2.0 * PI * k).sinh();
        let den = (PI * (k - c)).sinh() * (PI * (k + c)).sinh();
        (num / den).powi(2)
    };
    Ok(AnalyticPoint::regular(k, t, f_left, f_right, 1.0))
}

/// The two factors of the domain-C transmittance denominator,
/// `sinh^2(pi k) + sin^2(pi a)` and `sinh^2(pi k) + cos^2(pi b)`, at complex `k`.
pub fn domain_c_denominators(k: Complex64, a: f64, b: f64) -> (Complex64, Complex64) {
    let s = (k * PI).sinh().powi(2);
    (s + (PI * a).sin().powi(2), s + (PI * b).cos().powi(2))
}

/// `f_{a,b}(k) = i [ -cos(pi a) sin(pi b)/cosh(pi k) + sin(pi a) cos(pi b)/sinh(pi k) ]`.
pub fn domain_c_factor(k: f64, a: f64, b: f64) -> Complex64 {
    let even = (PI * a).cos() * (PI * b).sin() / (PI * k).cosh();
    let odd = (PI * a).sin() * (PI * b).cos() / (PI * k).sinh();
    I * (odd - even)
}

/// Domain C, `V = -(a^2 + b^2 + a) sech^2 x - i b (2a + 1) sech x tanh x`.
///
/// `T = sinh^2 cosh^2 / ((sinh^2 + sin^2 pi a)(sinh^2 + cos^2 pi b))` at
/// `pi k`, `R_left = T |f_{a,b}|^2`, `R_right = T |f_{a,-b}|^2`, and
/// `|det S| = T [1 - f_{a,b} f_{a,-b}]`, which reduces to 1. No real poles.
pub fn domain_c_point(k: f64, a: f64, b: f64) -> Result<AnalyticPoint> {
    check_k(k)?;
    let s = (PI * k).sinh().powi(2);
    let sa = (PI * a).sin().powi(2);
    let cb = (PI * b).cos().powi(2);
    let t = if s >= 1.0 {
        (1.0 + 1.0 / s) / ((1.0 + sa / s) * (1.0 + cb / s))
    } else {
        s * (s + 1.0) / ((s + sa) * (s + cb))
    };
    let f_left = domain_c_factor(k, a, b);
    let f_right = domain_c_factor(k, a, -b);
    let det = t * (Complex64::new(1.0, 0.0) - f_left * f_right);
    Ok(AnalyticPoint::regular(k, t, f_left, f_right, det.norm()))
}

/// The analytic Scarf II domain a potential belongs to, if any.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ScarfDomain {
    A { d: f64 },
    B { c: f64 },
    C { a: f64, b: f64 },
}

impl ScarfDomain {
    pub fn of(spec: &PotentialSpec) -> Option<Self> {
        match spec.as_scarf()? {
            ScarfII::AbsorptiveD { d } => Some(ScarfDomain::A { d: *d }),
            ScarfII::BrokenPtC { c } => Some(ScarfDomain::B { c: *c }),
            ScarfII::UnbrokenAb { a, b } => Some(ScarfDomain::C { a: *a, b: *b }),
            ScarfII::General { .. } => None,
        }
    }

    pub fn point(&self, k: f64) -> Result<AnalyticPoint> {
        match *self {
            ScarfDomain::A { d } => domain_a_point(k, d),
            ScarfDomain::B { c } => domain_b_point(k, c),
            ScarfDomain::C { a, b } => domain_c_point(k, a, b),
        }
    }

    /// Real wavenumbers of spectral singularities.
    pub fn poles(&self) -> Vec<f64> {
        match *self {
            ScarfDomain::A { d } if d != 0.0 => vec![-d],
            ScarfDomain::B { c } if c != 0.0 => vec![-c.abs(), c.abs()],
            _ => Vec::new(),
        }
    }

    /// Points where closed forms are singular or 0/0.
    pub fn special_points(&self) -> Vec<f64> {
        match *self {
            ScarfDomain::A { d } if d != 0.0 => vec![-d, d],
            ScarfDomain::B { c } if c != 0.0 => vec![-c.abs(), c.abs()],
            _ => Vec::new(),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ScarfDomain::A { .. } => "scarf2_absorptive",
            ScarfDomain::B { .. } => "scarf2_broken_pt",
            ScarfDomain::C { .. } => "scarf2_unbroken",
        }
    }
}

/// One energy of a `|det S|` curve, sampled at `k = +sqrt(E)` and `k = -sqrt(E)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub energy: f64,
    pub pos: AnalyticPoint,
    pub neg: AnalyticPoint,
}

pub fn det_s_curve(domain: &ScarfDomain, energies: &[f64]) -> Result<Vec<CurvePoint>> {
    energies
        .iter()
        .map(|&e| {
            if !(e > 0.0) {
                return Err(ScatterError::InvalidRange(format!("energies must be positive, got {e}")));
            }
            let k = e.sqrt();
            Ok(CurvePoint { energy: e, pos: domain.point(k)?, neg: domain.point(-k)? })
        })
        .collect()
}

pub fn domain_a_det_s_curve(d: f64, energies: &[f64]) -> Result<Vec<CurvePoint>> {
    det_s_curve(&ScarfDomain::A { d }, energies)
}

pub fn domain_b_det_s_curve(c: f64, energies: &[f64]) -> Result<Vec<CurvePoint>> {
    det_s_curve(&ScarfDomain::B { c }, energies)
}

pub fn domain_c_det_s_curve(a: f64, b: f64, energies: &[f64]) -> Result<Vec<CurvePoint>> {
    det_s_curve(&ScarfDomain::C { a, b }, energies)
}
