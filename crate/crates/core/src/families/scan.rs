//! One-parameter families as a single enum, and grid scans of their traces
//! that locate parabolic thresholds.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::four::*;
use super::three::{circle3_theta, three_periodic_circle, trace3_symmetric};
use super::two::*;
use super::{PeriodicOrbit, Rotation};
use crate::boundary::Curve;
use crate::collision::{sampled_zeros, CrossingKind};
use crate::error::{ImbError, Result};
use crate::stability::{classify, trace2_closed, trace2_factors, StabilityVerdict, TwoPeriodicParams};

pub const SCAN_POINTS: usize = 2000;
/// A local minimum of a level function this close to zero is a tangency.
pub const TOUCH_TOL: f64 = 1e-6;
const DEDUPE: f64 = 1e-9;
const IDENTICALLY_ZERO: f64 = 1e-9;

/// Every family with a closed form, together with its fixed curve data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    TwoCircle { r: f64 },
    TwoEllipse { a: f64, b: f64, axis: EllipseAxis },
    TwoSuperellipseAxis { k: u32 },
    TwoSuperellipseDiag { k: u32 },
    TwoStadium { side: f64, r: f64, kind: StadiumKind },
    ThreeCircle { r: f64, rot: Rotation },
    FourCircle { r: f64, rot: Rotation },
    /// The rotation is implied by which side of a²/√(a² + b²) x₀ falls.
    FourEllipse { a: f64, b: f64 },
    FourSuperellipse { k: u32, centers: SuperellipseCenters, rot: Rotation },
}

/// A family member built and checked against the dynamics.
#[derive(Debug, Clone)]
pub struct FamilyOrbit {
    pub curve: Curve,
    pub orbit: PeriodicOrbit,
    pub trace: f64,
    pub printed_trace: Option<f64>,
    pub params: Option<TwoPeriodicParams>,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::TwoCircle { .. } => "two_circle",
            Family::TwoEllipse { .. } => "two_ellipse",
            Family::TwoSuperellipseAxis { .. } => "two_superellipse_axis",
            Family::TwoSuperellipseDiag { .. } => "two_superellipse_diag",
            Family::TwoStadium { .. } => "two_stadium",
            Family::ThreeCircle { .. } => "three_circle",
            Family::FourCircle { .. } => "four_circle",
            Family::FourEllipse { .. } => "four_ellipse",
            Family::FourSuperellipse { .. } => "four_superellipse",
        }
    }

    pub fn period(&self) -> usize {
        match self {
            Family::ThreeCircle { .. } => 3,
            Family::FourCircle { .. } | Family::FourEllipse { .. } | Family::FourSuperellipse { .. } => 4,
            _ => 2,
        }
    }

    /// "mu" or "x0".
    pub fn parameter(&self) -> &'static str {
        match self {
            Family::TwoSuperellipseDiag { .. } | Family::FourEllipse { .. } | Family::FourSuperellipse { .. } => "x0",
            _ => "mu",
        }
    }

    pub fn curve(&self) -> Result<Curve> {
        match *self {
            Family::TwoCircle { r } | Family::ThreeCircle { r, .. } | Family::FourCircle { r, .. } => Curve::circle(r),
            Family::TwoEllipse { a, b, .. } | Family::FourEllipse { a, b } => Curve::ellipse(a, b),
            Family::TwoSuperellipseAxis { k }
            | Family::TwoSuperellipseDiag { k }
            | Family::FourSuperellipse { k, .. } => Curve::superellipse(k),
            Family::TwoStadium { side, r, .. } => Curve::stadium(side, r),
        }
    }

    /// Open interval of admissible parameter values.
    pub fn interval(&self) -> Result<(f64, f64)> {
        Ok(match *self {
            Family::TwoCircle { r } | Family::ThreeCircle { r, .. } | Family::FourCircle { r, .. } => (0.0, r),
            Family::TwoEllipse { a, b, axis } => (0.0, ellipse2_feasible_max(a, b, axis)),
            Family::TwoSuperellipseAxis { .. } => (0.0, 1.0),
            Family::TwoSuperellipseDiag { k } => {
                let c = 2f64.powf(-1.0 / (2 * k) as f64);
                (-c, c)
            }
            Family::TwoStadium { side, r, kind } => match kind {
                StadiumKind::Sides => (0.0, 0.5 * side),
                StadiumKind::Caps => (0.0, r),
            },
            Family::FourEllipse { a, b } => {
                let (lo, _, hi) = ellipse4_interval(a, b);
                (lo, hi)
            }
            Family::FourSuperellipse { k, centers, rot } => {
                let (lo, hi) = superellipse4_interval(k, centers, rot.expect_period(4)?);
                if centers == SuperellipseCenters::Diagonal && rot == Rotation::OneQuarter {
                    (lo, x_hat(k)?)
                } else {
                    (lo, hi)
                }
            }
        })
    }

    fn two_params(&self, p: f64) -> Option<TwoPeriodicParams> {
        match *self {
            Family::TwoCircle { r } => Some(circle2_params(r, p)),
            Family::TwoEllipse { a, b, axis } => Some(ellipse2_params(a, b, p, axis)),
            Family::TwoSuperellipseAxis { k } => Some(superellipse_axis2_params(k, p)),
            Family::TwoSuperellipseDiag { k } => Some(superellipse_diag2_params(k, p)),
            Family::TwoStadium { side, r, kind } => Some(stadium2_params(side, r, p, kind)),
            _ => None,
        }
    }

    /// The closed-form trace at parameter `p`, without running the map.
    pub fn trace_at(&self, p: f64) -> Result<f64> {
        if let Some(q) = self.two_params(p) {
            return Ok(trace2_closed(&q));
        }
        match *self {
            Family::ThreeCircle { r, rot } => {
                let th = circle3_theta(r, p, rot.expect_period(3)?);
                Ok(trace3_symmetric(th, 2.0 * r * th.sin() / p, rot))
            }
            Family::FourCircle { r, rot } => Ok(circle_quartic(circle4_theta(r, p, rot)?, r / p)),
            Family::FourEllipse { a, b } => Ok(ellipse4_trace(a, b, p)),
            Family::FourSuperellipse { k, centers, rot } => superellipse4_trace(k, centers, p, rot),
            _ => unreachable!(),
        }
    }

    /// Families whose every member is parabolic have no thresholds to find.
    pub fn identically_parabolic(&self) -> bool {
        matches!(
            self,
            Family::TwoCircle { .. }
                | Family::ThreeCircle { .. }
                | Family::FourCircle { .. }
                | Family::TwoStadium { kind: StadiumKind::Sides, .. }
        )
    }

    /// Functions whose zeros are the parabolic parameters, each tagged with
    /// the trace value (+2 or −2) it detects. Two-periodic families use the
    /// factors of Tr ∓ 2 so that double roots become sign changes.
    pub fn levels(&self) -> Vec<(f64, Box<dyn Fn(f64) -> f64 + Sync + '_>)> {
        if self.identically_parabolic() {
            return Vec::new();
        }
        if self.period() == 2 {
            return vec![
                (-2.0, Box::new(move |p| trace2_factors(&self.two_params(p).unwrap()).0)),
                (-2.0, Box::new(move |p| trace2_factors(&self.two_params(p).unwrap()).1)),
                (2.0, Box::new(move |p| trace2_factors(&self.two_params(p).unwrap()).2)),
            ];
        }
        if let Family::FourSuperellipse { k, centers: SuperellipseCenters::Axis, rot: Rotation::ThreeQuarters } = *self {
            return vec![
                (2.0, Box::new(move |x| axis34_defect(k, x))),
                (-2.0, Box::new(move |x| 4.0 - axis34_defect(k, x))),
            ];
        }
        let tr = move |p: f64| self.trace_at(p).unwrap_or(f64::NAN);
        vec![(2.0, Box::new(move |p| tr(p) - 2.0)), (-2.0, Box::new(move |p| tr(p) + 2.0))]
    }

    /// Construct the member at `p` and verify it with the dynamics.
    pub fn orbit(&self, p: f64) -> Result<FamilyOrbit> {
        let from_two = |t: TwoPeriodic| FamilyOrbit {
            trace: t.trace(),
            printed_trace: None,
            params: Some(t.params),
            curve: t.curve,
            orbit: t.orbit,
        };
        let from_four = |f: FourPeriodic| FamilyOrbit {
            trace: f.trace,
            printed_trace: f.printed_trace,
            params: None,
            curve: f.curve,
            orbit: f.orbit,
        };
        Ok(match *self {
            Family::TwoCircle { r } => from_two(two_periodic_circle(r, p)?),
            Family::TwoEllipse { a, b, axis } => from_two(two_periodic_ellipse(a, b, p, axis)?),
            Family::TwoSuperellipseAxis { k } => from_two(two_periodic_superellipse_axis(k, p)?),
            Family::TwoSuperellipseDiag { k } => from_two(two_periodic_superellipse_diag(k, p)?.0),
            Family::TwoStadium { side, r, kind } => from_two(two_periodic_stadium(side, r, p, kind)?),
            Family::ThreeCircle { r, rot } => {
                let t = three_periodic_circle(r, p, rot)?;
                FamilyOrbit { trace: t.trace, printed_trace: None, params: None, curve: t.curve, orbit: t.orbit }
            }
            Family::FourCircle { r, rot } => from_four(four_periodic_circle(r, p, rot)?),
            Family::FourEllipse { a, b } => {
                let (_, split, _) = ellipse4_interval(a, b);
                let rot = if p > split { Rotation::OneQuarter } else { Rotation::ThreeQuarters };
                from_four(four_periodic_ellipse(a, b, p, rot)?.four)
            }
            Family::FourSuperellipse { k, centers, rot } => from_four(four_periodic_superellipse(k, centers, p, rot)?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdKind {
    /// The trace crosses ±2.
    Crossing,
    /// The trace touches ±2 without crossing.
    Touch,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Threshold {
    pub at: f64,
    /// +2 or −2.
    pub level: f64,
    pub kind: ThresholdKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyScan {
    pub family: String,
    pub parameter: String,
    pub grid: Vec<f64>,
    pub traces: Vec<f64>,
    pub verdicts: Vec<StabilityVerdict>,
    pub thresholds: Vec<Threshold>,
}

/// n interior points of (lo, hi), uniformly spaced.
pub fn interior_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| lo + (hi - lo) * i as f64 / (n + 1) as f64).collect()
}

/// Zeros of the level functions on the grid, merged and sorted.
pub fn locate_thresholds(levels: &[(f64, Box<dyn Fn(f64) -> f64 + Sync + '_>)], grid: &[f64]) -> Vec<Threshold> {
    let mut out: Vec<Threshold> = Vec::new();
    for (level, f) in levels {
        let vals: Vec<f64> = grid.par_iter().map(|&x| f(x)).collect();
        if vals.iter().all(|v| v.abs() < IDENTICALLY_ZERO) {
            continue;
        }
        for z in sampled_zeros(&|x| f(x), grid, TOUCH_TOL) {
            let kind = match z.kind {
                CrossingKind::Transversal => ThresholdKind::Crossing,
                CrossingKind::Touch => ThresholdKind::Touch,
            };
            out.push(Threshold { at: z.at, level: *level, kind });
        }
    }
    out.sort_by(|a, b| a.at.total_cmp(&b.at));
    out.dedup_by(|b, a| (a.at - b.at).abs() < DEDUPE && a.level == b.level);
    out
}

pub fn scan_family(family: &Family, n: usize, tol: f64) -> Result<FamilyScan> {
    scan_family_on(family, None, n, tol)
}

/// Scan on a sub-interval `range` of the admissible one (or all of it).
pub fn scan_family_on(family: &Family, range: Option<(f64, f64)>, n: usize, tol: f64) -> Result<FamilyScan> {
    if n == 0 {
        return Err(ImbError::Validation("scan grid is empty".into()));
    }
    let (lo, hi) = family.interval()?;
    let (lo, hi) = match range {
        Some((a, b)) if a >= lo && b <= hi && a < b => (a, b),
        Some((a, b)) => {
            return Err(ImbError::Validation(format!(
                "scan range ({a}, {b}) is not inside the admissible interval ({lo}, {hi})"
            )))
        }
        None => (lo, hi),
    };
    let grid = interior_grid(lo, hi, n);
    let traces: Vec<f64> = grid.par_iter().map(|&p| family.trace_at(p)).collect::<Result<_>>()?;
    let verdicts = traces.iter().map(|&t| classify(t, tol)).collect();
    let thresholds = locate_thresholds(&family.levels(), &grid);
    Ok(FamilyScan {
        family: family.name().to_string(),
        parameter: family.parameter().to_string(),
        grid,
        traces,
        verdicts,
        thresholds,
    })
}

impl FamilyScan {
    /// Columns: parameter, trace, class.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "{},trace,class", self.parameter)?;
        for ((p, t), v) in self.grid.iter().zip(&self.traces).zip(&self.verdicts) {
            writeln!(w, "{p:.16e},{t:.16e},{}", v.class)?;
        }
        Ok(())
    }

    pub fn write_thresholds_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "{},level,kind", self.parameter)?;
        for t in &self.thresholds {
            let kind = match t.kind {
                ThresholdKind::Crossing => "crossing",
                ThresholdKind::Touch => "touch",
            };
            writeln!(w, "{:.16e},{:.16e},{kind}", t.at, t.level)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::{StabilityClass, TOL_CLOSED};

    #[test]
    fn superellipse_axis_thresholds_found() {
        let s = scan_family(&Family::TwoSuperellipseAxis { k: 2 }, 500, TOL_CLOSED).unwrap();
        let (a, b) = superellipse_axis_thresholds(2);
        assert_eq!(s.thresholds.len(), 2, "{:?}", s.thresholds);
        assert!((s.thresholds[0].at - a).abs() < 1e-8);
        assert!((s.thresholds[1].at - b).abs() < 1e-8);
    }

    #[test]
    fn circle_has_no_thresholds() {
        let s = scan_family(&Family::TwoCircle { r: 1.0 }, 50, 1e-7).unwrap();
        assert!(s.thresholds.is_empty());
        assert!(s.verdicts.iter().all(|v| v.class == StabilityClass::Parabolic));
    }

    #[test]
    fn empty_grid_is_rejected() {
        assert!(matches!(scan_family(&Family::TwoCircle { r: 1.0 }, 0, 1e-9), Err(ImbError::Validation(_))));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let s = scan_family(&Family::TwoCircle { r: 1.0 }, 3, 1e-7).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("mu,trace,class"));
        assert_eq!(text.lines().count(), 4);
    }
}
