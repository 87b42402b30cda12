//! Boundary curves parametrised by arclength, anticlockwise, with s = 0 at the
//! rightmost point.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{ImbError, Result};
use crate::geometry::{v2, Vec2};
use crate::quad::gk15;
use crate::roots::brent;

/// Serializable recipe for a star-shaped implicit curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "field", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldDescriptor {
    /// Polar radius r(φ) = r0 (1 + Σ cos[n-1]·cos nφ + sin[n-1]·sin nφ).
    Fourier {
        r0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

impl FieldDescriptor {
    fn radius(&self, phi: f64) -> f64 {
        match self {
            FieldDescriptor::Fourier { r0, cos, sin } => {
                let mut r = 1.0;
                for (n, c) in cos.iter().enumerate() {
                    r += c * ((n + 1) as f64 * phi).cos();
                }
                for (n, s) in sin.iter().enumerate() {
                    r += s * ((n + 1) as f64 * phi).sin();
                }
                r0 * r
            }
        }
    }
}

type Field = dyn Fn(Vec2) -> f64 + Send + Sync;

/// A smooth implicit function F with F < 0 inside. The curve must be
/// star-shaped about the origin; derivatives are taken numerically.
#[derive(Clone)]
pub struct ImplicitField {
    f: Arc<Field>,
    label: String,
    descriptor: Option<FieldDescriptor>,
}

impl ImplicitField {
    pub fn new<F: Fn(Vec2) -> f64 + Send + Sync + 'static>(label: &str, f: F) -> Self {
        ImplicitField { f: Arc::new(f), label: label.to_string(), descriptor: None }
    }

    pub fn from_descriptor(d: FieldDescriptor) -> Self {
        let dd = d.clone();
        ImplicitField {
            f: Arc::new(move |p: Vec2| p.norm() - dd.radius(p.y.atan2(p.x))),
            label: "fourier".into(),
            descriptor: Some(d),
        }
    }

    /// A pinched "telephone" shape, concave near the top and bottom.
    pub fn telephone() -> Self {
        Self::from_descriptor(FieldDescriptor::Fourier { r0: 1.0, cos: vec![0.0, 0.3], sin: vec![] })
    }

    pub fn eval(&self, p: Vec2) -> f64 {
        (self.f)(p)
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn descriptor(&self) -> Option<&FieldDescriptor> {
        self.descriptor.as_ref()
    }
}

impl fmt::Debug for ImplicitField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ImplicitField({})", self.label)
    }
}

#[derive(Debug, Clone)]
pub enum CurveSpec {
    Circle { r: f64 },
    Ellipse { a: f64, b: f64 },
    Superellipse { k: u32 },
    Stadium { side: f64, r: f64 },
    ImplicitSmooth(ImplicitField),
}

impl CurveSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(ImbError::InvalidCurve(m.to_string()));
        match *self {
            CurveSpec::Circle { r } if !(r > 0.0 && r.is_finite()) => bad("circle needs R > 0"),
            CurveSpec::Ellipse { a, b } if !(a > b && b > 0.0 && a.is_finite()) => {
                bad("ellipse needs a > b > 0")
            }
            CurveSpec::Superellipse { k } if k < 1 => bad("superellipse needs k >= 1"),
            CurveSpec::Stadium { side, r } if !(side > 0.0 && r > 0.0) => {
                bad("stadium needs Lside > 0 and R > 0")
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            CurveSpec::Circle { r } => format!("circle(R={r})"),
            CurveSpec::Ellipse { a, b } => format!("ellipse(a={a}, b={b})"),
            CurveSpec::Superellipse { k } => format!("superellipse(k={k})"),
            CurveSpec::Stadium { side, r } => format!("stadium(Lside={side}, R={r})"),
            CurveSpec::ImplicitSmooth(f) => format!("implicit({})", f.label()),
        }
    }
}

/// Native parameter against arclength, one entry per panel edge.
#[derive(Debug, Clone)]
pub struct ArclengthTable {
    pub t: Vec<f64>,
    pub s: Vec<f64>,
    pub total_length: f64,
}

/// Point, unit tangent, inward normal and signed curvature.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub p: Vec2,
    pub t: Vec2,
    pub n: Vec2,
    pub kappa: f64,
}

#[derive(Debug, Clone)]
pub struct Curve {
    spec: CurveSpec,
    length: f64,
    extent: f64,
    table: Option<ArclengthTable>,
}

const PANELS: usize = 256;

impl Curve {
    pub fn new(spec: CurveSpec) -> Result<Curve> {
        spec.validate()?;
        let mut c = Curve { spec, length: 0.0, extent: 0.0, table: None };
        match c.spec {
            CurveSpec::Circle { r } => {
                c.length = TAU * r;
                c.extent = r;
            }
            CurveSpec::Stadium { side, r } => {
                c.length = 2.0 * side + TAU * r;
                c.extent = 0.5 * side + r;
            }
            _ => {
                let panels = if matches!(c.spec, CurveSpec::ImplicitSmooth(_)) { 96 } else { PANELS };
                let h = TAU / panels as f64;
                let mut t = Vec::with_capacity(panels + 1);
                let mut s = Vec::with_capacity(panels + 1);
                let mut acc = 0.0;
                let mut ext: f64 = 0.0;
                for i in 0..=panels {
                    let ti = i as f64 * h;
                    t.push(ti);
                    s.push(acc);
                    ext = ext.max(c.native_point(ti).norm());
                    if i < panels {
                        acc += gk15(&|u| c.speed(u), ti, ti + h).0;
                    }
                }
                c.length = acc;
                c.extent = ext * 1.02;
                c.table = Some(ArclengthTable { t, s, total_length: acc });
            }
        }
        Ok(c)
    }

    pub fn circle(r: f64) -> Result<Curve> {
        Curve::new(CurveSpec::Circle { r })
    }
    pub fn ellipse(a: f64, b: f64) -> Result<Curve> {
        Curve::new(CurveSpec::Ellipse { a, b })
    }
    pub fn superellipse(k: u32) -> Result<Curve> {
        Curve::new(CurveSpec::Superellipse { k })
    }
    pub fn stadium(side: f64, r: f64) -> Result<Curve> {
        Curve::new(CurveSpec::Stadium { side, r })
    }

    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }
    pub fn total_length(&self) -> f64 {
        self.length
    }
    /// Radius of a disc about the origin containing the table.
    pub fn extent(&self) -> f64 {
        self.extent
    }
    pub fn table(&self) -> Option<&ArclengthTable> {
        self.table.as_ref()
    }
    pub fn wrap(&self, s: f64) -> f64 {
        let r = s.rem_euclid(self.length);
        if r >= self.length {
            0.0
        } else {
            r
        }
    }

    // ---- native parametrisation (ellipse, superellipse, implicit) ----

    fn native_point(&self, t: f64) -> Vec2 {
        match &self.spec {
            CurveSpec::Ellipse { a, b } => v2(a * t.cos(), b * t.sin()),
            CurveSpec::Superellipse { k } => {
                let (s, c) = t.sin_cos();
                superellipse_radius(*k, t) * v2(c, s)
            }
            CurveSpec::ImplicitSmooth(f) => {
                let (s, c) = t.sin_cos();
                implicit_radius(f, t) * v2(c, s)
            }
            _ => unreachable!("native parameter only for table-backed curves"),
        }
    }

    fn speed(&self, t: f64) -> f64 {
        match &self.spec {
            CurveSpec::Ellipse { a, b } => (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt(),
            CurveSpec::Superellipse { k } => {
                let k2 = 2 * *k as i32;
                let (s, c) = t.sin_cos();
                let g = c.powi(k2) + s.powi(k2);
                let dg = k2 as f64 * (s.powi(k2 - 1) * c - c.powi(k2 - 1) * s);
                let r = g.powf(-1.0 / k2 as f64);
                let dr = -r / (k2 as f64 * g) * dg;
                r.hypot(dr)
            }
            CurveSpec::ImplicitSmooth(f) => {
                let (s, c) = t.sin_cos();
                let rho = implicit_radius(f, t);
                let p = rho * v2(c, s);
                let g = numeric_gradient(&|q| f.eval(q), p);
                let u = v2(c, s);
                let drho = -rho * g.dot(u.rot90()) / g.dot(u);
                rho.hypot(drho)
            }
            _ => unreachable!(),
        }
    }

    fn native_of_point(&self, p: Vec2) -> f64 {
        match &self.spec {
            CurveSpec::Ellipse { a, b } => (p.y / b).atan2(p.x / a).rem_euclid(TAU),
            _ => p.y.atan2(p.x).rem_euclid(TAU),
        }
    }

    fn arclength_of_native(&self, t: f64) -> f64 {
        let tab = self.table.as_ref().expect("table-backed curve");
        let n = tab.t.len() - 1;
        let h = TAU / n as f64;
        let i = ((t / h).floor() as usize).min(n - 1);
        if t == tab.t[i] {
            return tab.s[i];
        }
        tab.s[i] + gk15(&|u| self.speed(u), tab.t[i], t).0
    }

    fn native_of_arclength(&self, s: f64) -> f64 {
        let tab = self.table.as_ref().expect("table-backed curve");
        let n = tab.t.len() - 1;
        let i = match tab.s.binary_search_by(|x| x.total_cmp(&s)) {
            Ok(i) => return tab.t[i.min(n)],
            Err(i) => i.saturating_sub(1).min(n - 1),
        };
        let (t0, t1, s0, s1) = (tab.t[i], tab.t[i + 1], tab.s[i], tab.s[i + 1]);
        let mut t = t0 + (s - s0) / (s1 - s0) * (t1 - t0);
        for _ in 0..8 {
            let err = s0 + gk15(&|u| self.speed(u), t0, t).0 - s;
            let dt = err / self.speed(t);
            t = (t - dt).clamp(t0, t1);
            if dt.abs() <= 1e-16 * (1.0 + t.abs()) {
                break;
            }
        }
        t
    }

    // ---- public geometry ----

    pub fn point_at(&self, s: f64) -> Vec2 {
        let s = self.wrap(s);
        match self.spec {
            CurveSpec::Circle { r } => {
                let (sn, cs) = (s / r).sin_cos();
                v2(r * cs, r * sn)
            }
            CurveSpec::Stadium { side, r } => stadium_piece(side, r, s).0,
            _ => self.native_point(self.native_of_arclength(s)),
        }
    }

    pub fn tangent_at(&self, s: f64) -> Vec2 {
        self.frame_at(s).t
    }

    /// Inward unit normal.
    pub fn normal_at(&self, s: f64) -> Vec2 {
        self.frame_at(s).n
    }

    pub fn curvature_at(&self, s: f64) -> f64 {
        self.frame_at(s).kappa
    }

    pub fn frame_at(&self, s: f64) -> Frame {
        let s = self.wrap(s);
        match self.spec {
            CurveSpec::Circle { r } => {
                let (sn, cs) = (s / r).sin_cos();
                let t = v2(-sn, cs);
                Frame { p: v2(r * cs, r * sn), t, n: t.rot90(), kappa: 1.0 / r }
            }
            CurveSpec::Stadium { side, r } => {
                let (p, t, kappa) = stadium_piece(side, r, s);
                Frame { p, t, n: t.rot90(), kappa }
            }
            _ => self.frame_at_point(self.point_at(s)),
        }
    }

    /// Frame computed from a point already on the boundary.
    pub fn frame_at_point(&self, p: Vec2) -> Frame {
        match &self.spec {
            CurveSpec::Circle { r } => {
                let t = p.unit().rot90();
                Frame { p, t, n: t.rot90(), kappa: 1.0 / r }
            }
            CurveSpec::Stadium { side, r } => {
                let q = v2(p.x.clamp(-0.5 * side, 0.5 * side), 0.0);
                let out = (p - q).unit();
                let t = out.rot90();
                let kappa = if p.x.abs() > 0.5 * side { 1.0 / r } else { 0.0 };
                Frame { p, t, n: t.rot90(), kappa }
            }
            _ => {
                let g = self.gradient(p);
                let (fxx, fxy, fyy) = self.hessian(p);
                let gn = g.norm();
                let t = g.rot90() * (1.0 / gn);
                let kappa = (fxx * g.y * g.y - 2.0 * fxy * g.x * g.y + fyy * g.x * g.x) / gn.powi(3);
                Frame { p, t, n: t.rot90(), kappa }
            }
        }
    }

    /// Implicit function, negative inside. For the circle and stadium it is
    /// the exact signed distance.
    pub fn implicit(&self, p: Vec2) -> f64 {
        match &self.spec {
            CurveSpec::Circle { r } => p.norm() - r,
            CurveSpec::Ellipse { a, b } => (p.x / a).powi(2) + (p.y / b).powi(2) - 1.0,
            CurveSpec::Superellipse { k } => {
                let k2 = 2 * *k as i32;
                p.x.powi(k2) + p.y.powi(k2) - 1.0
            }
            CurveSpec::Stadium { side, r } => {
                let q = v2(p.x.clamp(-0.5 * side, 0.5 * side), 0.0);
                (p - q).norm() - r
            }
            CurveSpec::ImplicitSmooth(f) => f.eval(p),
        }
    }

    pub fn gradient(&self, p: Vec2) -> Vec2 {
        match &self.spec {
            CurveSpec::Circle { .. } | CurveSpec::Stadium { .. } => {
                let h = 1e-7 * self.extent;
                numeric_gradient_h(&|q| self.implicit(q), p, h)
            }
            CurveSpec::Ellipse { a, b } => v2(2.0 * p.x / (a * a), 2.0 * p.y / (b * b)),
            CurveSpec::Superellipse { k } => {
                let k2 = 2 * *k as i32;
                k2 as f64 * v2(p.x.powi(k2 - 1), p.y.powi(k2 - 1))
            }
            CurveSpec::ImplicitSmooth(f) => numeric_gradient(&|q| f.eval(q), p),
        }
    }

    fn hessian(&self, p: Vec2) -> (f64, f64, f64) {
        match &self.spec {
            CurveSpec::Ellipse { a, b } => (2.0 / (a * a), 0.0, 2.0 / (b * b)),
            CurveSpec::Superellipse { k } => {
                let k2 = 2 * *k as i32;
                let c = (k2 * (k2 - 1)) as f64;
                (c * p.x.powi(k2 - 2), 0.0, c * p.y.powi(k2 - 2))
            }
            _ => {
                let h = 1e-4 * self.extent.max(1e-3);
                let f = |q: Vec2| self.implicit(q);
                let f0 = f(p);
                let fxx = (f(p + v2(h, 0.0)) - 2.0 * f0 + f(p - v2(h, 0.0))) / (h * h);
                let fyy = (f(p + v2(0.0, h)) - 2.0 * f0 + f(p - v2(0.0, h))) / (h * h);
                let fxy = (f(p + v2(h, h)) - f(p + v2(h, -h)) - f(p + v2(-h, h)) + f(p + v2(-h, -h)))
                    / (4.0 * h * h);
                (fxx, fxy, fyy)
            }
        }
    }

    /// F / |∇F|, a first-order signed distance.
    pub fn distance_estimate(&self, p: Vec2) -> f64 {
        match self.spec {
            CurveSpec::Circle { .. } | CurveSpec::Stadium { .. } => self.implicit(p),
            _ => self.implicit(p) / self.gradient(p).norm().max(1e-300),
        }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        self.implicit(p) < 0.0
    }

    /// Arclength of a boundary point; fails if `p` is more than 1e-8 (relative
    /// to the table size) off the curve.
    pub fn locate(&self, p: Vec2) -> Result<f64> {
        let (s, q) = match self.spec {
            CurveSpec::Circle { r } => {
                let phi = p.y.atan2(p.x).rem_euclid(TAU);
                (r * phi, r * v2(phi.cos(), phi.sin()))
            }
            CurveSpec::Stadium { side, r } => {
                let s = stadium_locate(side, r, p);
                (s, stadium_piece(side, r, s).0)
            }
            _ => {
                let t = self.native_of_point(p);
                (self.arclength_of_native(t), self.native_point(t))
            }
        };
        let d = p.dist(q);
        if d > 1e-8 * self.extent.max(1.0) {
            return Err(ImbError::LocateFailed { distance: d });
        }
        Ok(self.wrap(s))
    }
}

fn superellipse_radius(k: u32, t: f64) -> f64 {
    let k2 = 2 * k as i32;
    let (s, c) = t.sin_cos();
    (c.powi(k2) + s.powi(k2)).powf(-1.0 / k2 as f64)
}

fn implicit_radius(f: &ImplicitField, phi: f64) -> f64 {
    let u = v2(phi.cos(), phi.sin());
    if let Some(d) = f.descriptor() {
        return d.radius(phi);
    }
    let mut hi = 1.0;
    for _ in 0..60 {
        if f.eval(hi * u) > 0.0 {
            break;
        }
        hi *= 2.0;
    }
    brent(|r| f.eval(r * u), 0.0, hi, 1e-15).unwrap_or(f64::NAN)
}

fn numeric_gradient(f: &dyn Fn(Vec2) -> f64, p: Vec2) -> Vec2 {
    numeric_gradient_h(f, p, 1e-6 * p.norm().max(1.0))
}

fn numeric_gradient_h(f: &dyn Fn(Vec2) -> f64, p: Vec2, h: f64) -> Vec2 {
    v2(
        (f(p + v2(h, 0.0)) - f(p - v2(h, 0.0))) / (2.0 * h),
        (f(p + v2(0.0, h)) - f(p - v2(0.0, h))) / (2.0 * h),
    )
}

// Stadium pieces in anticlockwise order from the rightmost point: upper right
// quarter cap, top side, left cap, bottom side, lower right quarter cap.
fn stadium_piece(side: f64, r: f64, s: f64) -> (Vec2, Vec2, f64) {
    let hs = 0.5 * side;
    let q = FRAC_PI_2 * r;
    let arc = |cx: f64, phi: f64| {
        let (sn, cs) = phi.sin_cos();
        (v2(cx + r * cs, r * sn), v2(-sn, cs), 1.0 / r)
    };
    if s < q {
        arc(hs, s / r)
    } else if s < q + side {
        (v2(hs - (s - q), r), v2(-1.0, 0.0), 0.0)
    } else if s < q + side + PI * r {
        arc(-hs, FRAC_PI_2 + (s - q - side) / r)
    } else if s < q + 2.0 * side + PI * r {
        (v2(-hs + (s - q - side - PI * r), -r), v2(1.0, 0.0), 0.0)
    } else {
        arc(hs, 1.5 * PI + (s - q - 2.0 * side - PI * r) / r)
    }
}

fn stadium_locate(side: f64, r: f64, p: Vec2) -> f64 {
    let hs = 0.5 * side;
    let q = FRAC_PI_2 * r;
    if p.x > hs {
        let phi = p.y.atan2(p.x - hs);
        if phi >= 0.0 {
            r * phi
        } else {
            2.0 * side + TAU * r + r * phi
        }
    } else if p.x < -hs {
        let phi = p.y.atan2(p.x + hs).rem_euclid(TAU);
        q + side + r * (phi - FRAC_PI_2)
    } else if p.y >= 0.0 {
        q + (hs - p.x)
    } else {
        q + side + PI * r + (p.x + hs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn circle_origin_and_quarter() {
        let c = Curve::circle(1.0).unwrap();
        let p = c.point_at(0.0);
        assert!(close(p.x, 1.0, 1e-15) && close(p.y, 0.0, 1e-15));
        let q = c.point_at(FRAC_PI_2);
        assert!(close(q.x, 0.0, 1e-15) && close(q.y, 1.0, 1e-15));
        let t = c.tangent_at(0.0);
        assert!(close(t.x, 0.0, 1e-15) && close(t.y, 1.0, 1e-15));
        assert!(close(c.total_length(), TAU, 1e-15));
    }

    #[test]
    fn circle_curvature_is_reciprocal_radius() {
        let c = Curve::circle(2.0).unwrap();
        for s in [0.0, 1.0, 5.0, 12.0] {
            assert!(close(c.curvature_at(s), 0.5, 1e-15));
        }
    }

    #[test]
    fn ellipse_vertex_tangent() {
        let c = Curve::ellipse(2.0, 1.0).unwrap();
        let t = c.tangent_at(0.0);
        assert!(close(t.x, 0.0, 1e-12) && close(t.y, 1.0, 1e-12));
        let p = c.point_at(0.0);
        assert!(close(p.x, 2.0, 1e-12));
    }

    #[test]
    fn superellipse_eighth_is_diagonal() {
        let c = Curve::superellipse(2).unwrap();
        let p = c.point_at(c.total_length() / 8.0);
        assert!(close(p.x, p.y, 1e-10), "{p:?}");
        assert!(close(c.implicit(p), 0.0, 1e-12));
    }

    #[test]
    fn superellipse_curvature_special_points() {
        let c = Curve::superellipse(2).unwrap();
        assert!(c.curvature_at(0.0).abs() < 1e-12);
        let d = 2f64.powf(-0.25);
        let f = c.frame_at_point(v2(d, d));
        // Oracle: osculating circle through three nearby points of the curve.
        let s = c.locate(v2(d, d)).unwrap();
        let h = 1e-3;
        let (a, b, q) = (c.point_at(s - h), c.point_at(s), c.point_at(s + h));
        let area2 = (b - a).cross(q - a);
        let k3 = 2.0 * area2 / (a.dist(b) * b.dist(q) * q.dist(a));
        assert!(close(f.kappa, k3, 1e-4), "{} {}", f.kappa, k3);
        // Closed form ρ = 2^{(k−1)/(2k)}/(2k−1).
        assert!(close(1.0 / f.kappa, 2f64.powf(0.25) / 3.0, 1e-12));
    }

    #[test]
    fn stadium_length_and_sides() {
        let c = Curve::stadium(2.0, 1.0).unwrap();
        assert!(close(c.total_length(), 4.0 + TAU, 1e-14));
        let q = FRAC_PI_2;
        let t1 = c.tangent_at(q + 0.3);
        let t2 = c.tangent_at(q + 1.5);
        assert_eq!(t1, t2);
        assert_eq!(c.curvature_at(q + 0.3), 0.0);
        assert!(close(c.curvature_at(0.1), 1.0, 1e-15));
    }

    #[test]
    fn unit_speed_everywhere() {
        let curves = [
            Curve::circle(1.3).unwrap(),
            Curve::ellipse(2.0, 1.0).unwrap(),
            Curve::superellipse(3).unwrap(),
            Curve::stadium(2.0, 1.0).unwrap(),
        ];
        for c in &curves {
            let l = c.total_length();
            for i in 0..97 {
                let s = l * (i as f64 + 0.37) / 97.0;
                let h = 1e-5;
                let d = (c.point_at(s + h) - c.point_at(s - h)).norm() / (2.0 * h);
                assert!(close(d, 1.0, 1e-8), "{} s={s} speed={d}", c.spec().name());
            }
        }
    }

    #[test]
    fn periodic_in_s() {
        let c = Curve::ellipse(2.0, 1.0).unwrap();
        let l = c.total_length();
        assert_eq!(c.point_at(0.7 + l), c.point_at(c.wrap(0.7 + l)));
    }

    #[test]
    fn locate_inverts_point_at() {
        let curves = [
            Curve::circle(1.0).unwrap(),
            Curve::ellipse(2.0, 1.0).unwrap(),
            Curve::superellipse(2).unwrap(),
            Curve::stadium(2.0, 1.0).unwrap(),
        ];
        for c in &curves {
            let l = c.total_length();
            for i in 0..50 {
                let s = l * (i as f64 + 0.5) / 50.0;
                let back = c.locate(c.point_at(s)).unwrap();
                assert!(close(back, s, 1e-9 * l), "{} {s} {back}", c.spec().name());
            }
        }
    }

    #[test]
    fn locate_rejects_interior_point() {
        let c = Curve::ellipse(2.0, 1.0).unwrap();
        assert!(matches!(c.locate(v2(0.5, 0.1)), Err(ImbError::LocateFailed { .. })));
    }

    #[test]
    fn superellipse_length_matches_polygon() {
        let c = Curve::superellipse(2).unwrap();
        // Polygonal oracle in the polar angle with Richardson extrapolation.
        let poly = |n: usize| {
            let mut acc = 0.0;
            let p = |i: usize| {
                let t = TAU * i as f64 / n as f64;
                superellipse_radius(2, t) * v2(t.cos(), t.sin())
            };
            for i in 0..n {
                acc += p(i).dist(p(i + 1));
            }
            acc
        };
        let (a, b) = (poly(200_000), poly(400_000));
        let extrap = b + (b - a) / 3.0;
        assert!(close(c.total_length(), extrap, 1e-8), "{} {}", c.total_length(), extrap);
    }

    #[test]
    fn superellipse_quarter_turn_symmetry() {
        let c = Curve::superellipse(3).unwrap();
        let l = c.total_length();
        for s in [0.1, 0.5, 1.0, 1.6] {
            let p = c.point_at(s);
            let q = c.point_at(s + l / 4.0);
            assert!(p.rot90().dist(q) < 1e-10);
        }
    }

    #[test]
    fn telephone_is_concave_at_the_waist() {
        let c = Curve::new(CurveSpec::ImplicitSmooth(ImplicitField::telephone())).unwrap();
        let top = c.frame_at(c.total_length() / 4.0);
        assert!(top.kappa < 0.0, "{}", top.kappa);
        assert!(c.frame_at(0.0).kappa > 0.0);
    }

    #[test]
    fn tangent_orientation_is_anticlockwise() {
        let c = Curve::ellipse(3.0, 2.0).unwrap();
        for i in 0..20 {
            let f = c.frame_at(i as f64 * 0.7);
            assert!(f.t.cross(f.n) > 0.0);
            assert!(c.contains(f.p + f.n * 1e-6));
        }
    }
}
