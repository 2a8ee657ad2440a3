//! Exact amplitudes of the two-slab rectangular potential by plane-wave
//! matching.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ScatterError};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabAmplitudes {
    pub t: Complex64,
    pub r_left: Complex64,
    pub r_right: Complex64,
    /// `k^2 - V` was a negative real in some slab; the local wavenumber
    /// was taken as `+i sqrt|k^2 - V|`.
    pub branch_ambiguity: bool,
}

/// 2x2 map of `(psi, psi')` across one constant slab.
#[derive(Debug, Clone, Copy)]
struct Transfer([[Complex64; 2]; 2]);

impl Transfer {
    /// Propagates `(psi, psi')` forward by `width` where `psi'' = -kappa^2 psi`.
    fn slab(kappa: Complex64, width: f64) -> Self {
        let (s, c) = ((kappa * width).sin(), (kappa * width).cos());
        Transfer([[c, s / kappa], [-kappa * s, c]])
    }

    fn then(self, next: Transfer) -> Transfer {
        let (a, b) = (next.0, self.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Transfer(out)
    }

    fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Inverse of a unimodular map.
    fn inverse(&self) -> Transfer {
        let m = self.0;
        Transfer([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]])
    }
}

/// Local wavenumber `sqrt(k^2 - V)` on the principal branch.
fn local_wavenumber(k: f64, v: Complex64) -> (Complex64, bool) {
    let arg = Complex64::new(k * k, 0.0) - v;
    let ambiguous = arg.im == 0.0 && arg.re < 0.0;
    let kappa = if ambiguous {
        I * (-arg.re).sqrt()
    } else {
        arg.sqrt()
    };
    (kappa, ambiguous)
}

/// `t`, `r_left`, `r_right` for `V = P + iQ` on `(-L, 0)` and `P - iQ` on
/// `(0, L)`, by composing slab transfer matrices and matching to free waves
/// at `x = ±L`.
pub fn transfer_matrix_rectangular(p: Complex64, q: f64, half_width: f64, k: f64) -> Result<SlabAmplitudes> {
    if !(half_width > 0.0) {
        return Err(ScatterError::InvalidPotential(format!(
            "rectangular half-width L must be positive, got {half_width}"
        )));
    }
    if k == 0.0 {
        return Err(ScatterError::DegenerateK);
    }
    let (kappa_left, amb_left) = local_wavenumber(k, p + I * q);
    let (kappa_right, amb_right) = local_wavenumber(k, p - I * q);
    let forward = Transfer::slab(kappa_left, half_width).then(Transfer::slab(kappa_right, half_width));
    let backward = forward.inverse();

    let ik = I * k;
    let edge = half_width;

    // left incidence: pure e^{ikx} at +L, traced back to -L
    let out = (ik * edge).exp();
    let [psi, dpsi] = backward.apply([out, ik * out]);
    let a = (ik * edge).exp() * (dpsi + ik * psi) / (2.0 * ik);
    let b = (-ik * edge).exp() * (ik * psi - dpsi) / (2.0 * ik);
    let t = a.inv();
    let r_left = b / a;

    // right incidence: pure e^{-ikx} at -L, carried to +L
    let out = (ik * edge).exp();
    let [psi, dpsi] = forward.apply([out, -ik * out]);
    let c = (ik * edge).exp() * (ik * psi - dpsi) / (2.0 * ik);
    let d = (-ik * edge).exp() * (dpsi + ik * psi) / (2.0 * ik);
    let r_right = d / c;

    Ok(SlabAmplitudes { t, r_left, r_right, branch_ambiguity: amb_left || amb_right })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn empty_slab_is_transparent() {
        for k in [-3.0, -0.4, 0.2, 1.0, 5.0] {
            let s = transfer_matrix_rectangular(c(0.0, 0.0), 0.0, 2.0, k).unwrap();
            assert!((s.t - 1.0).norm() < 1e-13, "k={k}");
            assert!(s.r_left.norm() < 1e-13);
            assert!(s.r_right.norm() < 1e-13);
        }
    }

    #[test]
    fn real_barrier_is_unitary() {
        for k in [0.3, 1.0, 2.0, 5.0, 20.0] {
            let s = transfer_matrix_rectangular(c(3.0, 0.0), 0.0, 1.5, k).unwrap();
            let sum = s.t.norm_sqr() + s.r_left.norm_sqr();
            assert!((sum - 1.0).abs() < 1e-12, "k={k}: {sum}");
            assert_eq!(s.branch_ambiguity, k * k < 3.0);
        }
    }

    #[test]
    fn single_barrier_matches_textbook_transmission() {
        // symmetric barrier V0 on width 2L: T = 1 / (1 + V0^2 sin^2(2 kappa L) / (4 k^2 kappa^2))
        let (v0, l, k) = (2.0_f64, 1.0_f64, 2.0_f64);
        let kappa = (k * k - v0).sqrt();
        let expected = 1.0 / (1.0 + v0 * v0 * (2.0 * kappa * l).sin().powi(2) / (4.0 * k * k * kappa * kappa));
        let s = transfer_matrix_rectangular(c(v0, 0.0), 0.0, l, k).unwrap();
        assert!((s.t.norm_sqr() - expected).abs() < 1e-13);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(transfer_matrix_rectangular(c(1.0, 0.0), 0.0, 2.0, 0.0), Err(ScatterError::DegenerateK));
        assert!(transfer_matrix_rectangular(c(1.0, 0.0), 0.0, 0.0, 1.0).is_err());
    }
}
