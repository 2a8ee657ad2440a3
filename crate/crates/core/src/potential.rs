//! Complex potential families and their symmetry classification.
//!
//! Units follow the convention `hbar^2 = 1 = 2m`, so the potential and the
//! energy share units and `k = sqrt(E)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ScatterError};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Relative size of `|V|` beyond the truncation radius of analytic families.
pub const TAIL_SUPPRESSION: f64 = 1e-10;
/// Smallest truncation radius used for the Scarf II family.
pub const SCARF_X_TAIL: f64 = 12.0;
/// Truncation radius for the Gaussian family.
pub const GAUSSIAN_X_TAIL: f64 = 6.0;

/// Named parametrizations of the Scarf II potential
/// `V(x) = P sech^2 x + Q sech x tanh x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScarfII {
    /// Arbitrary complex strengths.
    General { p: Complex64, q: Complex64 },
    /// `(d^2 - i d) sech^2 x`: P-symmetric, absorptive for `d > 0`.
    AbsorptiveD { d: f64 },
    /// `(2c^2 - 1/4) sech^2 x - i (2c^2 + 1/2) sech x tanh x`: PT-symmetric, broken phase.
    BrokenPtC { c: f64 },
    /// `-(a^2 + b^2 + a) sech^2 x - i b (2a + 1) sech x tanh x`: PT-symmetric, unbroken phase.
    UnbrokenAb { a: f64, b: f64 },
}

impl ScarfII {
    /// The `(P, Q)` strengths of the sech² and sech·tanh terms.
    pub fn strengths(&self) -> (Complex64, Complex64) {
        match *self {
            ScarfII::General { p, q } => (p, q),
            ScarfII::AbsorptiveD { d } => (Complex64::new(d * d, -d), Complex64::new(0.0, 0.0)),
            ScarfII::BrokenPtC { c } => (
                Complex64::new(2.0 * c * c - 0.25, 0.0),
                Complex64::new(0.0, -(2.0 * c * c + 0.5)),
            ),
            ScarfII::UnbrokenAb { a, b } => (
                Complex64::new(-(a * a + b * b + a), 0.0),
                Complex64::new(0.0, -b * (2.0 * a + 1.0)),
            ),
        }
    }

    pub fn evaluate(&self, x: f64) -> Complex64 {
        let (p, q) = self.strengths();
        let sech = 1.0 / x.cosh();
        p * (sech * sech) + q * (sech * x.tanh())
    }

    /// Radius beyond which `|V| < TAIL_SUPPRESSION * max|V|`, using the
    /// asymptotes `sech^2 x ~ 4 e^{-2x}` and `sech x tanh x ~ 2 e^{-x}`.
    /// Rounded up to a multiple of 0.5 and never below [`SCARF_X_TAIL`].
    pub fn x_tail(&self) -> f64 {
        let (p, q) = self.strengths();
        let peak = (0..=500)
            .map(|i| self.evaluate(i as f64 * 0.01).norm())
            .fold(0.0, f64::max);
        if peak == 0.0 {
            return SCARF_X_TAIL;
        }
        // split the budget evenly between the two terms
        let budget = 0.5 * TAIL_SUPPRESSION * peak;
        let mut radius = SCARF_X_TAIL;
        if p.norm() > 0.0 {
            radius = radius.max(0.5 * (4.0 * p.norm() / budget).ln());
        }
        if q.norm() > 0.0 {
            radius = radius.max((2.0 * q.norm() / budget).ln());
        }
        (radius * 2.0).ceil() / 2.0
    }
}

/// Piecewise-linear samples of `V(x)`, zero outside the sampled range.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Tabulated {
    samples: Vec<(f64, Complex64)>,
}

impl Tabulated {
    pub fn new(samples: Vec<(f64, Complex64)>) -> Result<Self> {
        for pair in samples.windows(2) {
            if !(pair[1].0 > pair[0].0) {
                return Err(ScatterError::InvalidPotential(format!(
                    "tabulated x-values must be strictly increasing ({} then {})",
                    pair[0].0, pair[1].0
                )));
            }
        }
        if samples.iter().any(|(x, v)| !x.is_finite() || !v.re.is_finite() || !v.im.is_finite()) {
            return Err(ScatterError::InvalidPotential(
                "tabulated samples must be finite".into(),
            ));
        }
        Ok(Self { samples })
    }

    /// The zero potential.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn samples(&self) -> &[(f64, Complex64)] {
        &self.samples
    }

    fn contains(&self, x: f64) -> bool {
        match (self.samples.first(), self.samples.last()) {
            (Some(first), Some(last)) => x >= first.0 && x <= last.0,
            _ => false,
        }
    }

    pub fn evaluate(&self, x: f64) -> Complex64 {
        if !self.contains(x) {
            return Complex64::new(0.0, 0.0);
        }
        // first sample with abscissa > x
        let idx = self.samples.partition_point(|(xs, _)| *xs <= x);
        if idx == 0 {
            return self.samples[0].1;
        }
        if idx == self.samples.len() {
            return self.samples[idx - 1].1;
        }
        let (x0, v0) = self.samples[idx - 1];
        let (x1, v1) = self.samples[idx];
        let w = (x - x0) / (x1 - x0);
        v0 * (1.0 - w) + v1 * w
    }

    fn x_tail(&self) -> f64 {
        self.samples
            .iter()
            .map(|(x, _)| x.abs())
            .fold(0.0, f64::max)
    }
}

/// A complex potential drawn from one of the supported families.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    ScarfII(ScarfII),
    /// `P Θ1(x) - i Q Θ2(x)`: `P + iQ` on `(-L, 0)`, `P - iQ` on `[0, L)`.
    Rectangular { p: Complex64, q: f64, half_width: f64 },
    /// `P e^{-x^2} + i Q x e^{-x^2}`.
    Gaussian { p: Complex64, q: f64 },
    Tabulated(Tabulated),
}

impl PotentialSpec {
    pub fn absorptive_d(d: f64) -> Self {
        PotentialSpec::ScarfII(ScarfII::AbsorptiveD { d })
    }

    pub fn broken_pt_c(c: f64) -> Self {
        PotentialSpec::ScarfII(ScarfII::BrokenPtC { c })
    }

    pub fn unbroken_ab(a: f64, b: f64) -> Self {
        PotentialSpec::ScarfII(ScarfII::UnbrokenAb { a, b })
    }

    pub fn rectangular(p: Complex64, q: f64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(ScatterError::InvalidPotential(format!(
                "rectangular half-width L must be positive, got {half_width}"
            )));
        }
        Ok(PotentialSpec::Rectangular { p, q, half_width })
    }

    pub fn gaussian(p: Complex64, q: f64) -> Self {
        PotentialSpec::Gaussian { p, q }
    }

    /// The free particle.
    pub fn zero() -> Self {
        PotentialSpec::Tabulated(Tabulated::empty())
    }

    /// Short family name, as used in config files.
    pub fn family(&self) -> &'static str {
        match self {
            PotentialSpec::ScarfII(_) => "scarf2",
            PotentialSpec::Rectangular { .. } => "rectangular",
            PotentialSpec::Gaussian { .. } => "gaussian",
            PotentialSpec::Tabulated(_) => "tabulated",
        }
    }

    pub fn evaluate(&self, x: f64) -> Complex64 {
        match self {
            PotentialSpec::ScarfII(s) => s.evaluate(x),
            PotentialSpec::Rectangular { p, q, half_width } => {
                rectangular_value(*p, *q, *half_width, x)
            }
            PotentialSpec::Gaussian { p, q } => {
                let g = (-x * x).exp();
                p * g + I * (q * x * g)
            }
            PotentialSpec::Tabulated(t) => t.evaluate(x),
        }
    }

    /// Potential at the two ends and midpoint of `[a, b]`, taking one-sided
    /// limits from inside the interval at jump discontinuities.
    pub fn interval_samples(&self, a: f64, b: f64) -> [Complex64; 3] {
        let mid = 0.5 * (a + b);
        match self {
            PotentialSpec::Rectangular { p, q, half_width } => {
                let v = rectangular_value(*p, *q, *half_width, mid);
                [v; 3]
            }
            PotentialSpec::Tabulated(t) => {
                if !t.contains(mid) {
                    return [Complex64::new(0.0, 0.0); 3];
                }
                let (lo, hi) = (t.samples[0].0, t.samples[t.samples.len() - 1].0);
                [
                    t.evaluate(a.clamp(lo, hi)),
                    t.evaluate(mid),
                    t.evaluate(b.clamp(lo, hi)),
                ]
            }
            _ => [self.evaluate(a), self.evaluate(mid), self.evaluate(b)],
        }
    }

    /// Radius beyond which the potential is negligible (or exactly zero).
    pub fn x_tail(&self) -> f64 {
        match self {
            PotentialSpec::ScarfII(s) => s.x_tail(),
            PotentialSpec::Rectangular { half_width, .. } => *half_width,
            PotentialSpec::Gaussian { .. } => GAUSSIAN_X_TAIL,
            PotentialSpec::Tabulated(t) => t.x_tail(),
        }
    }

    /// The Scarf II parametrization, if this is a Scarf II potential.
    pub fn as_scarf(&self) -> Option<&ScarfII> {
        match self {
            PotentialSpec::ScarfII(s) => Some(s),
            _ => None,
        }
    }
}

fn rectangular_value(p: Complex64, q: f64, half_width: f64, x: f64) -> Complex64 {
    let theta1 = if x.abs() <= half_width { 1.0 } else { 0.0 };
    let theta2 = if x.abs() >= half_width {
        0.0
    } else if x < 0.0 {
        -1.0
    } else {
        1.0
    };
    p * theta1 - I * (q * theta2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryKind {
    Hermitian,
    PSymmetricNonHermitian,
    PTSymmetric,
    NonPT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PtPhase {
    Unbroken,
    Broken,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryClass {
    pub kind: SymmetryKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pt_phase: Option<PtPhase>,
}

impl SymmetryClass {
    pub fn is_pt(&self) -> bool {
        self.kind == SymmetryKind::PTSymmetric
    }
}

/// `n` points evenly spaced on `[-x_max, x_max]`.
pub fn symmetric_grid(x_max: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| -x_max + 2.0 * x_max * i as f64 / (n - 1) as f64)
        .collect()
}

/// Classifies the potential by testing, on `grid`, whether it is real,
/// PT-symmetric (`conj V(-x) = V(x)`) or parity-even (`V(-x) = V(x)`).
///
/// Tests run in that order. Differences are measured against
/// `tol * max|V|` over the grid. The point `x = 0` is skipped in the
/// mirror comparisons because a jump there (rectangular family) has no
/// bearing on the symmetry.
pub fn classify_symmetry(spec: &PotentialSpec, grid: &[f64], tol: f64) -> SymmetryClass {
    let scale = grid
        .iter()
        .map(|&x| spec.evaluate(x).norm())
        .fold(0.0, f64::max);
    let bound = tol * scale.max(f64::MIN_POSITIVE);

    let hermitian = grid.iter().all(|&x| spec.evaluate(x).im.abs() <= bound);
    let mirrored = || grid.iter().filter(|&&x| x != 0.0).map(|&x| (spec.evaluate(x), spec.evaluate(-x)));
    let pt = mirrored().all(|(v, vm)| (vm.conj() - v).norm() <= bound);
    let parity = mirrored().all(|(v, vm)| (vm - v).norm() <= bound);

    let kind = if hermitian {
        SymmetryKind::Hermitian
    } else if pt {
        SymmetryKind::PTSymmetric
    } else if parity {
        SymmetryKind::PSymmetricNonHermitian
    } else {
        SymmetryKind::NonPT
    };

    let pt_phase = match (kind, spec.as_scarf()) {
        (SymmetryKind::PTSymmetric, Some(scarf)) => Some(scarf_pt_phase(scarf)),
        _ => None,
    };
    SymmetryClass { kind, pt_phase }
}

/// Classification on the family's default grid (401 points over `±x_tail`).
pub fn classify_default(spec: &PotentialSpec) -> SymmetryClass {
    let extent = spec.x_tail().max(1.0);
    classify_symmetry(spec, &symmetric_grid(extent, 401), 1e-12)
}

/// Writing a PT-symmetric Scarf II as `-V1 sech^2 x + i V2 sech x tanh x`,
/// the discrete spectrum is real iff `|V2| <= V1 + 1/4`.
pub fn scarf_pt_phase(scarf: &ScarfII) -> PtPhase {
    let (p, q) = scarf.strengths();
    let v1 = -p.re;
    let v2 = q.im;
    if v2.abs() <= v1 + 0.25 {
        PtPhase::Unbroken
    } else {
        PtPhase::Broken
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    /// 1 for `E_n = -(n - a)^2`, 2 for `E_m = -(m - 1/2 - b)^2`.
    pub branch: u8,
    pub index: u32,
    pub energy: f64,
}

/// Discrete spectrum of the unbroken-phase Scarf II `V_{a,b}`:
/// `-(n - a)^2` for integers `0 <= n < a` and `-(m - 1/2 - b)^2` for
/// `0 <= m < b + 1/2`, sorted ascending (coincident levels are kept).
pub fn bound_state_energies(a: f64, b: f64) -> Vec<BoundState> {
    let mut levels = Vec::new();
    let mut n = 0u32;
    while (n as f64) < a {
        levels.push(BoundState { branch: 1, index: n, energy: -(n as f64 - a).powi(2) });
        n += 1;
    }
    let mut m = 0u32;
    while (m as f64) < b + 0.5 {
        levels.push(BoundState { branch: 2, index: m, energy: -(m as f64 - 0.5 - b).powi(2) });
        m += 1;
    }
    levels.sort_by(|x, y| x.energy.total_cmp(&y.energy).then(x.branch.cmp(&y.branch)));
    levels
}

/// Bound states for a spec, defined only for the unbroken `(a, b)` parametrization.
pub fn bound_states_of(spec: &PotentialSpec) -> Option<Vec<BoundState>> {
    match spec {
        PotentialSpec::ScarfII(ScarfII::UnbrokenAb { a, b }) => Some(bound_state_energies(*a, *b)),
        _ => None,
    }
}
