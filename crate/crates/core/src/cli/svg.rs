//! Hand-rolled SVG output: orbit pictures and stability diagrams on a fixed
//! 1000×1000 viewbox. Every geometric primitive is its own `<path>`.

use std::f64::consts::TAU;
use std::fmt::Write;

use crate::boundary::Curve;
use crate::families::FamilyScan;
use crate::geometry::{v2, Vec2};
use crate::imb_map::StepData;
use crate::stability::StabilityClass;

pub const VIEW: f64 = 1000.0;
const MARGIN: f64 = 40.0;
const BOUNDARY_SAMPLES: usize = 600;

pub const ELLIPTIC_COLOR: &str = "#2b8cbe";
pub const PARABOLIC_COLOR: &str = "#e6a100";
pub const HYPERBOLIC_COLOR: &str = "#d7301f";

pub fn class_color(c: StabilityClass) -> &'static str {
    match c {
        StabilityClass::Elliptic => ELLIPTIC_COLOR,
        StabilityClass::Parabolic => PARABOLIC_COLOR,
        StabilityClass::Hyperbolic => HYPERBOLIC_COLOR,
    }
}

/// Uniform scaling of a model box into the viewbox, y up.
#[derive(Debug, Clone, Copy)]
pub struct Fit {
    scale: f64,
    lo: Vec2,
    offset: Vec2,
}

impl Fit {
    pub fn new(lo: Vec2, hi: Vec2) -> Fit {
        let w = (hi.x - lo.x).max(1e-12);
        let h = (hi.y - lo.y).max(1e-12);
        let avail = VIEW - 2.0 * MARGIN;
        let scale = avail / w.max(h);
        let offset = v2(MARGIN + 0.5 * (avail - w * scale), MARGIN + 0.5 * (avail - h * scale));
        Fit { scale, lo, offset }
    }

    pub fn px(&self, p: Vec2) -> (f64, f64) {
        let x = self.offset.x + (p.x - self.lo.x) * self.scale;
        let y = VIEW - (self.offset.y + (p.y - self.lo.y) * self.scale);
        (x, y)
    }

    pub fn len(&self, d: f64) -> f64 {
        d * self.scale
    }
}

#[derive(Debug, Default)]
pub struct Svg {
    body: String,
    paths: usize,
}

impl Svg {
    pub fn new() -> Svg {
        Svg::default()
    }

    pub fn path(&mut self, d: &str, style: &str) {
        self.paths += 1;
        let _ = writeln!(self.body, r#"<path d="{d}" {style}/>"#);
    }

    pub fn text(&mut self, x: f64, y: f64, s: &str, extra: &str) {
        let size = if extra.contains("font-size") { "" } else { r#" font-size="16""# };
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif"{size} {extra}>{}</text>"#,
            escape(s)
        );
    }

    pub fn path_count(&self) -> usize {
        self.paths
    }

    pub fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {v} {v}\" width=\"{v}\" height=\"{v}\">\n<rect x=\"0\" y=\"0\" width=\"{v}\" height=\"{v}\" fill=\"white\"/>\n{}</svg>\n",
            self.body,
            v = VIEW as u32
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn polyline(pts: impl IntoIterator<Item = (f64, f64)>) -> String {
    let mut d = String::new();
    for (i, (x, y)) in pts.into_iter().enumerate() {
        let _ = write!(d, "{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" });
    }
    d.trim_end().to_string()
}

/// One chord and one arc per step; each list of steps gets its own colour.
pub struct OrbitLayer<'a> {
    pub steps: &'a [StepData],
    pub color: &'a str,
}

/// Boundary outline, chords solid and Larmor arcs dashed. The box fits the
/// boundary and every Larmor circle used.
pub fn trajectory_svg(curve: &Curve, layers: &[OrbitLayer], title: &str) -> String {
    let l = curve.total_length();
    let outline: Vec<Vec2> = (0..BOUNDARY_SAMPLES).map(|i| curve.point_at(l * i as f64 / BOUNDARY_SAMPLES as f64)).collect();
    let (mut lo, mut hi) = (v2(f64::MAX, f64::MAX), v2(f64::MIN, f64::MIN));
    let mut grow = |p: Vec2, r: f64| {
        lo = v2(lo.x.min(p.x - r), lo.y.min(p.y - r));
        hi = v2(hi.x.max(p.x + r), hi.y.max(p.y + r));
    };
    for &p in &outline {
        grow(p, 0.0);
    }
    for layer in layers {
        for d in layer.steps {
            grow(d.center, d.mu);
        }
    }
    let fit = Fit::new(lo, hi);
    let mut svg = Svg::new();
    let mut d = polyline(outline.iter().map(|&p| fit.px(p)));
    d.push_str(" Z");
    svg.path(&d, r##"fill="#f4f4f4" stroke="black" stroke-width="2""##);
    for layer in layers {
        let chord_style = format!(r#"fill="none" stroke="{}" stroke-width="2""#, layer.color);
        let arc_style = format!(r#"fill="none" stroke="{}" stroke-width="1.5" stroke-dasharray="8,5""#, layer.color);
        for st in layer.steps {
            let (x0, y0) = fit.px(st.p0);
            let (x1, y1) = fit.px(st.p1);
            svg.path(&format!("M{x0:.3},{y0:.3} L{x1:.3},{y1:.3}"), &chord_style);
            svg.path(&arc_path(&fit, st), &arc_style);
        }
    }
    svg.text(MARGIN, 28.0, title, "");
    svg.finish()
}

/// The anticlockwise Larmor arc from P1 to P2, drawn as two halves so no
/// single SVG arc spans more than π. With y flipped, anticlockwise in the
/// plane is sweep-flag 1 on screen.
fn arc_path(fit: &Fit, st: &StepData) -> String {
    let r = fit.len(st.mu);
    let sweep = st.arc_sweep.clamp(0.0, TAU);
    let mid = st.center + (st.p1 - st.center).rotate(0.5 * sweep);
    let (x1, y1) = fit.px(st.p1);
    let (xm, ym) = fit.px(mid);
    let (x2, y2) = fit.px(st.p2);
    format!("M{x1:.3},{y1:.3} A{r:.3},{r:.3} 0 0 1 {xm:.3},{ym:.3} A{r:.3},{r:.3} 0 0 1 {x2:.3},{y2:.3}")
}

/// A labelled vertical reference mark on the parameter axis.
pub struct Mark<'a> {
    pub at: f64,
    pub label: &'a str,
}

const PLOT_TOP: f64 = 80.0;
const PLOT_BOTTOM: f64 = 640.0;
const BAND_TOP: f64 = 700.0;
const BAND_BOTTOM: f64 = 740.0;
const TRACE_CLIP: f64 = 6.0;

/// Trace against the parameter (clipped to ±6) above a band coloured by
/// class, with E/P/H labels on each run and a tick at every threshold.
pub fn stability_svg(scan: &FamilyScan, marks: &[Mark], title: &str) -> String {
    let mut svg = Svg::new();
    let (p_lo, p_hi) = match (scan.grid.first(), scan.grid.last()) {
        (Some(&a), Some(&b)) if b > a => (a, b),
        (Some(&a), _) => (a - 0.5, a + 0.5),
        _ => (0.0, 1.0),
    };
    let xs = |p: f64| MARGIN + (p - p_lo) / (p_hi - p_lo) * (VIEW - 2.0 * MARGIN);
    let ys = |t: f64| {
        let t = t.clamp(-TRACE_CLIP, TRACE_CLIP);
        PLOT_TOP + (TRACE_CLIP - t) / (2.0 * TRACE_CLIP) * (PLOT_BOTTOM - PLOT_TOP)
    };

    svg.path(
        &polyline([(MARGIN, PLOT_TOP), (MARGIN, PLOT_BOTTOM), (VIEW - MARGIN, PLOT_BOTTOM)]),
        r#"fill="none" stroke="black" stroke-width="1.5""#,
    );
    for level in [2.0, -2.0] {
        svg.path(
            &polyline([(MARGIN, ys(level)), (VIEW - MARGIN, ys(level))]),
            r##"fill="none" stroke="#888888" stroke-width="1" stroke-dasharray="6,4""##,
        );
        svg.text(MARGIN + 4.0, ys(level) - 4.0, &format!("{level:+}"), r##"fill="#555555""##);
    }

    // The trace, broken wherever it is not finite.
    let mut run: Vec<(f64, f64)> = Vec::new();
    let flush = |run: &mut Vec<(f64, f64)>, svg: &mut Svg| {
        if run.len() > 1 {
            svg.path(&polyline(run.drain(..)), r#"fill="none" stroke="black" stroke-width="2""#);
        }
        run.clear();
    };
    for (&p, &t) in scan.grid.iter().zip(&scan.traces) {
        if t.is_finite() {
            run.push((xs(p), ys(t)));
        } else {
            flush(&mut run, &mut svg);
        }
    }
    flush(&mut run, &mut svg);

    // Class band: one rectangle per run of equal class.
    let n = scan.grid.len();
    let mut i = 0;
    while i < n {
        let class = scan.verdicts[i].class;
        let mut j = i;
        while j + 1 < n && scan.verdicts[j + 1].class == class {
            j += 1;
        }
        let left = if i == 0 { xs(p_lo) } else { xs(0.5 * (scan.grid[i - 1] + scan.grid[i])) };
        let right = if j + 1 == n { xs(p_hi) } else { xs(0.5 * (scan.grid[j] + scan.grid[j + 1])) };
        let right = right.max(left + 1.0);
        svg.path(
            &format!("M{left:.3},{BAND_TOP} L{right:.3},{BAND_TOP} L{right:.3},{BAND_BOTTOM} L{left:.3},{BAND_BOTTOM} Z"),
            &format!(r#"fill="{}" stroke="none""#, class_color(class)),
        );
        if right - left > 14.0 {
            svg.text(0.5 * (left + right) - 5.0, BAND_TOP - 8.0, &class.letter().to_string(), "");
        }
        i = j + 1;
    }

    for th in &scan.thresholds {
        let x = xs(th.at);
        svg.path(
            &polyline([(x, PLOT_TOP), (x, BAND_BOTTOM + 12.0)]),
            r#"fill="none" stroke="black" stroke-width="1" stroke-dasharray="2,3""#,
        );
        svg.text(
            x,
            BAND_BOTTOM + 20.0,
            &format!("{:.6}", th.at),
            &format!(r#"font-size="12" transform="rotate(60 {x:.2} {:.2})""#, BAND_BOTTOM + 20.0),
        );
    }
    for (i, m) in marks.iter().filter(|m| m.at >= p_lo && m.at <= p_hi).enumerate() {
        let x = xs(m.at);
        svg.path(&polyline([(x, BAND_BOTTOM), (x, BAND_BOTTOM + 8.0)]), r##"fill="none" stroke="#1a9850" stroke-width="3""##);
        svg.text(x + 3.0, PLOT_TOP - 6.0 - 14.0 * (i % 3) as f64, m.label, r##"font-size="12" fill="#1a9850""##);
    }
    svg.text(MARGIN, VIEW - 60.0, &format!("{} = {p_lo:.6}", scan.parameter), "");
    svg.text(VIEW - MARGIN, VIEW - 60.0, &format!("{p_hi:.6}"), r#"text-anchor="end""#);
    svg.text(MARGIN, 24.0, title, "");
    svg.finish()
}

/// A plain x–y line chart; each series is one path, NaNs break it.
pub fn line_chart(series: &[(&[(f64, f64)], &str)], title: &str, x_label: &str) -> String {
    let mut svg = Svg::new();
    let pts = series.iter().flat_map(|s| s.0.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
    let (mut lo, mut hi) = (v2(f64::MAX, f64::MAX), v2(f64::MIN, f64::MIN));
    for p in pts {
        lo = v2(lo.x.min(p.0), lo.y.min(p.1));
        hi = v2(hi.x.max(p.0), hi.y.max(p.1));
    }
    if lo.x > hi.x {
        return svg.finish();
    }
    let x0 = MARGIN + 40.0;
    let (w, h) = (VIEW - x0 - MARGIN, VIEW - 2.0 * MARGIN - 80.0);
    let span = |a: f64, b: f64| if b > a { b - a } else { 1.0 };
    let xs = |x: f64| x0 + (x - lo.x) / span(lo.x, hi.x) * w;
    let ys = |y: f64| MARGIN + 40.0 + (hi.y - y) / span(lo.y, hi.y) * h;
    svg.path(
        &polyline([(x0, MARGIN + 40.0), (x0, MARGIN + 40.0 + h), (x0 + w, MARGIN + 40.0 + h)]),
        r#"fill="none" stroke="black" stroke-width="1.5""#,
    );
    for (data, color) in series {
        let mut run: Vec<(f64, f64)> = Vec::new();
        for &(x, y) in data.iter().chain(std::iter::once(&(f64::NAN, f64::NAN))) {
            if x.is_finite() && y.is_finite() {
                run.push((xs(x), ys(y)));
            } else if !run.is_empty() {
                if run.len() > 1 {
                    svg.path(&polyline(run.drain(..)), &format!(r#"fill="none" stroke="{color}" stroke-width="2""#));
                }
                run.clear();
            }
        }
    }
    let base = MARGIN + 40.0 + h + 24.0;
    svg.text(x0, base, &format!("{:.4}", lo.x), "");
    svg.text(x0 + w, base, &format!("{:.4}", hi.x), r#"text-anchor="end""#);
    svg.text(x0 + 0.5 * w, base + 24.0, x_label, r#"text-anchor="middle""#);
    svg.text(x0 - 6.0, ys(hi.y) + 5.0, &format!("{:.4}", hi.y), r#"text-anchor="end""#);
    svg.text(x0 - 6.0, ys(lo.y) + 5.0, &format!("{:.4}", lo.y), r#"text-anchor="end""#);
    svg.text(MARGIN, 40.0, title, "");
    svg.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_keeps_aspect_and_flips_y() {
        let f = Fit::new(v2(-2.0, -1.0), v2(2.0, 1.0));
        let (x, y) = f.px(v2(2.0, 1.0));
        assert!((x - (VIEW - MARGIN)).abs() < 1e-9);
        assert!(y < VIEW / 2.0);
        let (_, yb) = f.px(v2(0.0, -1.0));
        assert!(yb > VIEW / 2.0);
        assert!(((VIEW / 2.0 - y) - (yb - VIEW / 2.0)).abs() < 1e-9);
    }

    #[test]
    fn text_is_escaped() {
        let mut s = Svg::new();
        s.text(0.0, 0.0, "a<b & c", "");
        assert!(s.finish().contains("a&lt;b &amp; c"));
    }
}
