//! Two-column `.dat` files for the three figure panels: `|det S|`, `T(k)` and
//! `T(-k)` against energy.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cpa_scatter::analytic::{det_s_curve, ScarfDomain};
use cpa_scatter::detect::{format_f64, ScanSample};
use cpa_scatter::numeric::POLE_CAP;

/// One plotted value with an optional trailing comment marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub value: f64,
    pub marker: Option<&'static str>,
}

impl Cell {
    fn observable(value: f64, capped: bool) -> Self {
        if value.is_nan() && !capped {
            Cell { value, marker: Some("FAILED") }
        } else if capped || value >= POLE_CAP {
            Cell { value: POLE_CAP, marker: Some("POLE") }
        } else {
            Cell { value, marker: None }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Panels {
    pub energy: Vec<f64>,
    pub abs_det_s: Vec<Cell>,
    pub t_pos: Vec<Cell>,
    pub t_neg: Vec<Cell>,
}

impl Panels {
    pub fn from_scan(samples: &[ScanSample]) -> Self {
        let mut panels = Panels::default();
        for s in samples {
            panels.energy.push(s.energy);
            let side = |p: &Option<cpa_scatter::ScatteringPoint>| match p {
                Some(p) => (Cell::observable(p.abs_det_s, p.pole_capped), Cell::observable(p.transmittance, p.pole_capped)),
                None => (Cell::observable(f64::NAN, false), Cell::observable(f64::NAN, false)),
            };
            let (det, t_pos) = side(&s.pos);
            let (_, t_neg) = side(&s.neg);
            panels.abs_det_s.push(det);
            panels.t_pos.push(t_pos);
            panels.t_neg.push(t_neg);
        }
        panels
    }

    /// Closed-form curves; the domain's special energies inside the range are
    /// added to the grid so that poles and indeterminate points are drawn.
    pub fn from_closed_form(domain: &ScarfDomain, grid: &[f64]) -> cpa_scatter::Result<Self> {
        let (lo, hi) = (grid[0], grid[grid.len() - 1]);
        let mut energies: Vec<f64> = grid.to_vec();
        energies.extend(domain.special_points().iter().map(|k| k * k).filter(|e| *e >= lo && *e <= hi));
        energies.sort_by(f64::total_cmp);
        energies.dedup();
        let mut panels = Panels::default();
        for p in det_s_curve(domain, &energies)? {
            panels.energy.push(p.energy);
            let det = if p.pos.at_indeterminacy {
                Cell { value: p.pos.abs_det_s, marker: Some("INDETERMINATE") }
            } else {
                Cell::observable(p.pos.abs_det_s, p.pos.at_pole)
            };
            panels.abs_det_s.push(det);
            panels.t_pos.push(Cell::observable(p.pos.transmittance, p.pos.at_pole));
            panels.t_neg.push(Cell::observable(p.neg.transmittance, p.neg.at_pole));
        }
        Ok(panels)
    }

    fn render(&self, column: &str, cells: &[Cell]) -> String {
        let mut out = format!("# E {column}\n");
        for (e, c) in self.energy.iter().zip(cells) {
            let _ = write!(out, "{} {}", format_f64(*e), format_f64(c.value));
            if let Some(m) = c.marker {
                let _ = write!(out, " # {m}");
            }
            out.push('\n');
        }
        out
    }

    /// Writes `fig_<tag>_a.dat`, `_b.dat` and `_c.dat`, returning their paths.
    pub fn write(&self, dir: &Path, tag: &str) -> std::io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let files = [("a", "absDetS", &self.abs_det_s), ("b", "T_pos", &self.t_pos), ("c", "T_neg", &self.t_neg)];
        let mut paths = Vec::new();
        for (panel, column, cells) in files {
            let path = dir.join(format!("fig_{tag}_{panel}.dat"));
            std::fs::write(&path, self.render(column, cells))?;
            paths.push(path);
        }
        Ok(paths)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps_and_marks_poles() {
        assert_eq!(Cell::observable(2.0, false), Cell { value: 2.0, marker: None });
        assert_eq!(Cell::observable(2.0, true), Cell { value: POLE_CAP, marker: Some("POLE") });
        assert_eq!(Cell::observable(f64::INFINITY, false).marker, Some("POLE"));
        assert_eq!(Cell::observable(f64::NAN, false).marker, Some("FAILED"));
    }

    #[test]
    fn broken_scarf_marks_indeterminate_point() {
        let grid: Vec<f64> = (0..20).map(|i| 0.5 + 0.5 * i as f64).filter(|e| *e != 4.0).collect();
        let panels = Panels::from_closed_form(&ScarfDomain::B { c: 2.0 }, &grid).unwrap();
        let i = panels.energy.iter().position(|e| *e == 4.0).unwrap();
        assert_eq!(panels.abs_det_s[i].marker, Some("INDETERMINATE"));
        assert_eq!(panels.t_pos[i].marker, Some("POLE"));
        let text = panels.render("absDetS", &panels.abs_det_s);
        assert!(text.lines().filter(|l| !l.starts_with('#')).count() == panels.energy.len());
    }
}
