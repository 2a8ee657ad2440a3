//! Golden-section minimization on a bracket.

use serde::{Deserialize, Serialize};

/// `(3 - sqrt 5) / 2`, the golden fraction of an interval.
const GOLDEN: f64 = 0.381_966_011_250_105_1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub iterations: u32,
    /// Width of the final bracket.
    pub width: f64,
}

/// Minimizes `f` on `[lo, hi]` by golden-section search until the bracket is
/// narrower than `tol`, returning the best point evaluated.
///
/// Non-finite objective values compare as `+inf`.
pub fn golden_section<F>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: u32) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let clean = |v: f64| if v.is_nan() { f64::INFINITY } else { v };
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut x1 = a + GOLDEN * (b - a);
    let mut x2 = b - GOLDEN * (b - a);
    let mut f1 = clean(f(x1));
    let mut f2 = clean(f(x2));
    let mut iterations = 0;
    while b - a > tol && iterations < max_iter {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + GOLDEN * (b - a);
            f1 = clean(f(x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - GOLDEN * (b - a);
            f2 = clean(f(x2));
        }
        iterations += 1;
    }
    let (x, value) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    Minimum { x, value, iterations, width: b - a }
}

/// Indices of interior local minima of `values` (ties resolved to the first).
pub fn local_minima(values: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    if values.len() < 3 {
        return out;
    }
    let mut i = 1;
    while i + 1 < values.len() {
        if values[i] < values[i - 1] {
            // walk across a flat run
            let mut j = i;
            while j + 1 < values.len() && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < values.len() && values[j + 1] > values[i] {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn finds_parabola_vertex() {
        let m = golden_section(|x| (x - 1.3).powi(2) + 2.0, 0.0, 3.0, 1e-8, 200);
        assert!((m.x - 1.3).abs() < 1e-7);
        assert!((m.value - 2.0).abs() < 1e-15);
        assert!(m.width <= 1e-8);
        assert!(m.iterations > 30 && m.iterations < 60);
    }

    #[test]
    fn cusp_minimum() {
        let m = golden_section(|x: f64| (x - 2.0).abs(), 1.9, 2.2, 1e-6, 200);
        assert!((m.x - 2.0).abs() < 1e-6);
    }

    #[test]
    fn nan_is_treated_as_large() {
        let m = golden_section(|x: f64| if x > 1.0 { f64::NAN } else { (x - 0.5).powi(2) }, 0.0, 2.0, 1e-9, 200);
        assert!((m.x - 0.5).abs() < 1e-6);
    }

    #[test]
    fn local_minima_examples() {
        assert_eq!(local_minima(&[3.0, 1.0, 2.0, 0.5, 4.0]), vec![1, 3]);
        assert_eq!(local_minima(&[3.0, 1.0, 1.0, 2.0]), vec![1]);
        assert!(local_minima(&[1.0, 2.0, 3.0]).is_empty());
        assert!(local_minima(&[1.0, 1.0, 1.0]).is_empty());
        assert!(local_minima(&[1.0]).is_empty());
    }

    proptest! {
        #[test]
        fn golden_section_brackets_quadratic_minimum(center in -5.0f64..5.0, lo in 0.1f64..3.0, hi in 0.1f64..3.0) {
            let m = golden_section(|x| (x - center).powi(2), center - lo, center + hi, 1e-7, 500);
            prop_assert!((m.x - center).abs() < 1e-6);
            prop_assert!(m.width <= 1e-7);
        }
    }
}
