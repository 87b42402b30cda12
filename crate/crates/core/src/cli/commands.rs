use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::svg::{line_chart, stability_svg, trajectory_svg, Mark, OrbitLayer};
use super::{CheckConfig, RunConfig, Settings, Outcome};
use crate::boundary::{Curve, CurveSpec};
use crate::error::{ImbError, Result};
use crate::families::*;
use crate::imb_map::{iterate, jacobian_analytic, jacobian_numeric, step, PhasePoint, StepData};
use crate::rotation::*;
use crate::stability::classify;

const ORBIT_COLOR: &str = "#08519c";
const DUAL_COLOR: &str = "#cb181d";

fn io(e: std::io::Error) -> ImbError {
    ImbError::Io(e.to_string())
}

fn create(set: &Settings, name: &str, files: &mut Vec<PathBuf>) -> Result<BufWriter<File>> {
    let path = set.file(name)?;
    let f = File::create(&path).map_err(|e| ImbError::Io(format!("{}: {e}", path.display())))?;
    files.push(path);
    Ok(BufWriter::new(f))
}

fn write_text(set: &Settings, name: &str, text: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    let mut w = create(set, name, files)?;
    w.write_all(text.as_bytes()).map_err(io)?;
    w.flush().map_err(io)
}

fn need<'a, T>(x: &'a Option<T>, what: &str) -> Result<&'a T> {
    x.as_ref().ok_or_else(|| ImbError::Config(format!("missing [{what}] section")))
}

pub fn step_csv_header() -> &'static str {
    "step,s0,theta0,x0,y0,x1,y1,s1,theta1,x2,y2,s2,theta2,ell1,ell2,chi,kappa0,kappa1,kappa2"
}

fn write_steps<W: Write>(w: &mut W, steps: &[StepData]) -> std::io::Result<()> {
    writeln!(w, "{}", step_csv_header())?;
    for (i, d) in steps.iter().enumerate() {
        let v = [
            d.s0, d.theta0, d.p0.x, d.p0.y, d.p1.x, d.p1.y, d.s1, d.theta1, d.p2.x, d.p2.y, d.s2, d.theta2, d.ell1,
            d.ell2, d.chi, d.kappa0, d.kappa1, d.kappa2,
        ];
        write!(w, "{i}")?;
        for x in v {
            write!(w, ",{x:.16e}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

/// The dual of a symmetric 4-periodic member, with its steps.
fn dual_steps(curve: &Curve, orbit: &PeriodicOrbit) -> Result<(PeriodicOrbit, Vec<StepData>)> {
    let d = dual_orbit(curve, orbit)?;
    let steps = d.compose(curve)?.steps;
    Ok((d, steps))
}

/// Build one family member, write its steps and a summary row.
pub fn cmd_orbit(cfg: &RunConfig, set: &Settings) -> Result<Outcome> {
    let family = need(&cfg.family, "family")?;
    let oc = need(&cfg.orbit, "orbit")?;
    let fo = family.orbit(oc.param)?;
    let composed = fo.orbit.compose(&fo.curve)?;
    let comp_trace = composed.matrix.trace();
    let verdict = classify(fo.trace, set.class_tol());
    let mut out = Outcome { passed: true, ..Default::default() };
    let rot = fo.orbit.rotation.map(|r| r.as_str()).unwrap_or("");
    out.lines.push(format!(
        "{} {}={}: period {}, mu {:.12}, residual {:.2e}",
        family.name(),
        family.parameter(),
        oc.param,
        fo.orbit.period,
        fo.orbit.mu,
        fo.orbit.residual
    ));
    out.lines.push(format!("trace {:.12} (composed {:.12}) -> {}", fo.trace, comp_trace, verdict.class));
    if let Some(p) = fo.printed_trace.filter(|p| (p - fo.trace).abs() > 1e-9 * fo.trace.abs().max(1.0)) {
        out.lines.push(format!("printed trace {p:.12} differs from the composed one"));
    }
    let dual = if oc.dual { Some(dual_steps(&fo.curve, &fo.orbit)?) } else { None };
    if let Some((d, steps)) = &dual {
        let m = steps.iter().try_fold(crate::geometry::Mat2::IDENTITY, |m, s| jacobian_analytic(s).map(|j| j * m))?;
        out.lines.push(format!(
            "dual ({}) residual {:.2e}, trace {:.12}",
            d.rotation.map(|r| r.as_str()).unwrap_or(""),
            d.residual,
            m.trace()
        ));
    }
    if set.format.csv() {
        let mut w = create(set, "orbit.csv", &mut out.files)?;
        write_steps(&mut w, &composed.steps).map_err(io)?;
        w.flush().map_err(io)?;
        let mut w = create(set, "orbit_summary.csv", &mut out.files)?;
        writeln!(w, "family,parameter,value,period,rotation,mu,residual,trace,composed_trace,printed_trace,class")
            .map_err(io)?;
        writeln!(
            w,
            "{},{},{:.16e},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{},{}",
            family.name(),
            family.parameter(),
            oc.param,
            fo.orbit.period,
            rot,
            fo.orbit.mu,
            fo.orbit.residual,
            fo.trace,
            comp_trace,
            opt(fo.printed_trace),
            verdict.class
        )
        .map_err(io)?;
        w.flush().map_err(io)?;
        if let Some((_, steps)) = &dual {
            let mut w = create(set, "dual.csv", &mut out.files)?;
            write_steps(&mut w, steps).map_err(io)?;
            w.flush().map_err(io)?;
        }
    }
    if set.format.svg() {
        let mut layers = vec![OrbitLayer { steps: &composed.steps, color: ORBIT_COLOR }];
        if let Some((_, steps)) = &dual {
            layers.push(OrbitLayer { steps, color: DUAL_COLOR });
        }
        let title = format!("{} {} = {} ({})", family.name(), family.parameter(), oc.param, verdict.class);
        write_text(set, "orbit.svg", &trajectory_svg(&fo.curve, &layers, &title), &mut out.files)?;
    }
    Ok(out)
}

/// Known parameter values to set beside the located thresholds.
pub fn reference_values(family: &Family) -> Vec<(String, f64)> {
    let corner = |k: u32| 2f64.powf(-1.0 / (2 * k) as f64);
    match *family {
        Family::TwoSuperellipseAxis { k } => {
            let (a, b) = superellipse_axis_thresholds(k);
            vec![("mu*".into(), a), ("mu**".into(), b)]
        }
        Family::TwoSuperellipseDiag { k } => {
            let mut v = vec![("x0 (mu = 2^-1/2)".to_string(), 0.0)];
            if let Ok(x) = diag_x_tilde(k) {
                v.push(("x0~ (f = 1/2)".into(), x));
            }
            v
        }
        Family::FourEllipse { a, b } => {
            let mut v = vec![("split (mu = 0)".to_string(), ellipse4_interval(a, b).1)];
            if a == 3.0 && b == 2.0 {
                let p = ellipse4_printed_roots();
                v.push(("printed x0*".into(), p[0]));
                v.push(("printed x0**".into(), p[1]));
                v.push(("printed x0***".into(), p[2]));
            }
            v
        }
        Family::FourSuperellipse { k, centers: SuperellipseCenters::Diagonal, rot: Rotation::ThreeQuarters } => {
            vec![("-2^(-1/2k)".into(), -corner(k))]
        }
        Family::FourSuperellipse { k, centers: SuperellipseCenters::Axis, rot: Rotation::ThreeQuarters } => {
            vec![("x1~ = 0".into(), 0.0), ("2^(-1/2k)".into(), corner(k))]
        }
        _ => vec![],
    }
}

pub fn cmd_scan(cfg: &RunConfig, set: &Settings) -> Result<Outcome> {
    let family = need(&cfg.family, "family")?;
    let sc = cfg.scan.unwrap_or_default();
    let n = set.grid.or(sc.n).unwrap_or(SCAN_POINTS);
    let range = sc.lo.zip(sc.hi);
    let scan = scan_family_on(family, range, n, set.class_tol())?;
    let (lo, hi) = family.interval()?;
    let mut out = Outcome { passed: true, ..Default::default() };
    out.lines.push(format!(
        "{}: {} points on {} in ({lo:.10}, {hi:.10})",
        family.name(),
        scan.grid.len(),
        scan.parameter
    ));
    if family.identically_parabolic() {
        out.lines.push("the trace is parabolic across the whole family".into());
    }
    for t in &scan.thresholds {
        out.lines.push(format!("threshold {} = {:.12} at trace {:+} ({:?})", scan.parameter, t.at, t.level, t.kind));
    }
    let refs = reference_values(family);
    let nearest = |x: f64| {
        scan.thresholds
            .iter()
            .map(|t| t.at)
            .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()))
    };
    for (label, v) in &refs {
        let inside = *v > lo && *v < hi;
        match nearest(*v) {
            Some(t) if inside => out.lines.push(format!("{label} = {v:.12}: nearest threshold {t:.12} (diff {:.2e})", t - v)),
            _ if !inside => out.lines.push(format!("{label} = {v:.12} lies outside ({lo:.6}, {hi:.6})")),
            _ => out.lines.push(format!("{label} = {v:.12}: no threshold located")),
        }
    }
    if set.format.csv() {
        let mut w = create(set, "scan.csv", &mut out.files)?;
        scan.write_csv(&mut w).map_err(io)?;
        w.flush().map_err(io)?;
        let mut w = create(set, "thresholds.csv", &mut out.files)?;
        scan.write_thresholds_csv(&mut w).map_err(io)?;
        w.flush().map_err(io)?;
        if !refs.is_empty() {
            let mut w = create(set, "reference.csv", &mut out.files)?;
            writeln!(w, "label,value,in_interval,nearest_threshold,difference").map_err(io)?;
            for (label, v) in &refs {
                let inside = *v > lo && *v < hi;
                let t = nearest(*v).filter(|_| inside);
                writeln!(w, "{label},{v:.16e},{inside},{},{}", opt(t), opt(t.map(|t| t - v))).map_err(io)?;
            }
            w.flush().map_err(io)?;
        }
    }
    if set.format.svg() {
        let marks: Vec<Mark> = refs.iter().map(|(l, v)| Mark { at: *v, label: l }).collect();
        let title = format!("{} ({} thresholds)", family.name(), scan.thresholds.len());
        write_text(set, "stability.svg", &stability_svg(&scan, &marks, &title), &mut out.files)?;
    }
    Ok(out)
}

/// Draw a trajectory: either `seed` iterates on `curve`, or a family member
/// (with its dual when `orbit.dual` is set).
pub fn cmd_trace(cfg: &RunConfig, set: &Settings) -> Result<Outcome> {
    let mut out = Outcome { passed: true, ..Default::default() };
    let (curve, steps, dual, stop, title) = if let Some(seed) = &cfg.seed {
        let curve = need(&cfg.curve, "curve")?.build()?;
        if !(seed.mu > 0.0 && seed.mu.is_finite()) {
            return Err(ImbError::Validation(format!("Larmor radius must be positive, got {}", seed.mu)));
        }
        let o = iterate(&curve, seed.mu, PhasePoint::new(seed.s, seed.theta), seed.steps);
        let steps: Vec<StepData> = o.steps.iter().map(|x| x.1).collect();
        if steps.is_empty() {
            return Err(o.error.unwrap_or_else(|| ImbError::Validation("no steps".into())));
        }
        let title = format!("{} mu = {} from (s, theta) = ({}, {})", curve.spec().name(), seed.mu, seed.s, seed.theta);
        (curve, steps, None, o.error, title)
    } else {
        let family = need(&cfg.family, "family")?;
        let oc = need(&cfg.orbit, "orbit")?;
        let fo = family.orbit(oc.param)?;
        let steps = fo.orbit.compose(&fo.curve)?.steps;
        let dual = if oc.dual { Some(dual_steps(&fo.curve, &fo.orbit)?.1) } else { None };
        let title = format!("{} {} = {}", family.name(), family.parameter(), oc.param);
        (fo.curve, steps, dual, None, title)
    };
    out.lines.push(format!("{} steps on {}", steps.len(), curve.spec().name()));
    if set.format.csv() {
        let mut w = create(set, "trace.csv", &mut out.files)?;
        write_steps(&mut w, &steps).map_err(io)?;
        w.flush().map_err(io)?;
        if let Some(d) = &dual {
            let mut w = create(set, "dual.csv", &mut out.files)?;
            write_steps(&mut w, d).map_err(io)?;
            w.flush().map_err(io)?;
        }
    }
    if set.format.svg() {
        let mut layers = vec![OrbitLayer { steps: &steps, color: ORBIT_COLOR }];
        if let Some(d) = &dual {
            layers.push(OrbitLayer { steps: d, color: DUAL_COLOR });
        }
        write_text(set, "trace.svg", &trajectory_svg(&curve, &layers, &title), &mut out.files)?;
    }
    match stop {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Families whose closed forms can be checked on a given table.
fn families_on(spec: &CurveSpec) -> Vec<Family> {
    use Rotation::*;
    match *spec {
        CurveSpec::Circle { r } => vec![
            Family::TwoCircle { r },
            Family::ThreeCircle { r, rot: OneThird },
            Family::ThreeCircle { r, rot: TwoThirds },
            Family::FourCircle { r, rot: OneQuarter },
            Family::FourCircle { r, rot: ThreeQuarters },
        ],
        CurveSpec::Ellipse { a, b } => vec![
            Family::TwoEllipse { a, b, axis: EllipseAxis::Major },
            Family::TwoEllipse { a, b, axis: EllipseAxis::Minor },
            Family::FourEllipse { a, b },
        ],
        CurveSpec::Superellipse { k } if k >= 2 => {
            let mut v = vec![Family::TwoSuperellipseAxis { k }, Family::TwoSuperellipseDiag { k }];
            for centers in [SuperellipseCenters::Diagonal, SuperellipseCenters::Axis] {
                for rot in [OneQuarter, ThreeQuarters] {
                    v.push(Family::FourSuperellipse { k, centers, rot });
                }
            }
            v
        }
        CurveSpec::Stadium { side, r } => vec![
            Family::TwoStadium { side, r, kind: StadiumKind::Sides },
            Family::TwoStadium { side, r, kind: StadiumKind::Caps },
        ],
        _ => vec![],
    }
}

fn default_tables() -> Vec<CurveSpec> {
    vec![
        CurveSpec::Circle { r: 1.0 },
        CurveSpec::Ellipse { a: 2.0, b: 1.0 },
        CurveSpec::Superellipse { k: 2 },
        CurveSpec::Superellipse { k: 3 },
        CurveSpec::Stadium { side: 2.0, r: 1.0 },
    ]
}

#[derive(Debug, Default)]
struct CheckRow {
    table: String,
    check: String,
    count: usize,
    worst: f64,
    tol: f64,
    passed: bool,
    note: String,
}

/// A random phase point with θ away from the tangential ends, and μ in
/// (0.1, 1.1)·(extent/2).
fn sample(curve: &Curve, rng: &mut ChaCha8Rng) -> (PhasePoint, f64) {
    let s = rng.gen_range(0.0..curve.total_length());
    let theta = rng.gen_range(0.05..std::f64::consts::PI - 0.05);
    let mu = rng.gen_range(0.1..1.1) * 0.5 * curve.extent();
    (PhasePoint::new(s, theta), mu)
}

fn check_table(spec: &CurveSpec, c: &CheckConfig) -> Result<Vec<CheckRow>> {
    let curve = Curve::new(spec.clone())?;
    let name = spec.name();
    let mut rows = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);

    let mut det = CheckRow { table: name.clone(), check: "det DT = 1".into(), tol: c.det_tol, ..Default::default() };
    let mut skipped = 0;
    let mut tries = 0;
    while det.count < c.samples && tries < 20 * c.samples.max(1) {
        tries += 1;
        let (z, mu) = sample(&curve, &mut rng);
        let Ok((_, d)) = step(&curve, mu, z) else {
            skipped += 1;
            continue;
        };
        let Ok(j) = jacobian_analytic(&d) else {
            skipped += 1;
            continue;
        };
        det.worst = det.worst.max((j.det() - 1.0).abs());
        det.count += 1;
    }
    det.passed = det.count > 0 && det.worst <= det.tol;
    det.note = format!("{skipped} seeds skipped (no step)");
    rows.push(det);

    let mut jac = CheckRow {
        table: name.clone(),
        check: "analytic vs central-difference DT".into(),
        tol: c.jacobian_tol,
        ..Default::default()
    };
    let mut ratios = Vec::new();
    tries = 0;
    while jac.count < c.jacobian_points && tries < 50 * c.jacobian_points.max(1) {
        tries += 1;
        let (z, mu) = sample(&curve, &mut rng);
        let Ok((_, d)) = step(&curve, mu, z) else { continue };
        if !d.is_well_conditioned() || [d.theta0, d.theta1, d.theta2].iter().any(|t| t.sin() < 0.1) {
            continue;
        }
        let (Ok(a), Ok(n1), Ok(n2)) =
            (jacobian_analytic(&d), jacobian_numeric(&curve, mu, z, c.h), jacobian_numeric(&curve, mu, z, 0.5 * c.h))
        else {
            continue;
        };
        let e1 = a.sub(&n1).max_abs() / a.max_abs();
        let e2 = a.sub(&n2).max_abs() / a.max_abs();
        jac.worst = jac.worst.max(e1);
        if e2 > 1e-11 {
            ratios.push(e1 / e2);
        }
        jac.count += 1;
    }
    ratios.sort_by(f64::total_cmp);
    jac.passed = jac.count > 0 && jac.worst <= jac.tol;
    jac.note = match ratios.get(ratios.len() / 2) {
        Some(r) => format!("median error ratio on halving h: {r:.2}"),
        None => "errors at roundoff level".into(),
    };
    rows.push(jac);

    for family in families_on(spec) {
        let mut row = CheckRow {
            table: name.clone(),
            check: format!("closed vs composed trace, {}", describe(&family)),
            tol: c.trace_tol,
            passed: true,
            ..Default::default()
        };
        let (lo, hi) = family.interval()?;
        for p in interior_grid(lo, hi, c.family_points) {
            let res = family.trace_at(p).and_then(|closed| {
                let fo = family.orbit(p)?;
                Ok((closed, fo.orbit.composed_trace(&fo.curve)?))
            });
            match res {
                Ok((closed, comp)) => {
                    let rel = (closed - comp).abs() / closed.abs().max(1.0);
                    row.worst = row.worst.max(rel);
                    row.count += 1;
                }
                Err(e) => {
                    row.passed = false;
                    row.note = format!("{} at {p}: {e}", e.tag());
                }
            }
        }
        row.passed &= row.worst <= row.tol;
        rows.push(row);
    }
    Ok(rows)
}

fn describe(f: &Family) -> String {
    match *f {
        Family::TwoEllipse { axis, .. } => format!("two_ellipse {axis:?}").to_lowercase(),
        Family::TwoStadium { kind, .. } => format!("two_stadium {kind:?}").to_lowercase(),
        Family::ThreeCircle { rot, .. } | Family::FourCircle { rot, .. } => format!("{} {rot}", f.name()),
        Family::FourSuperellipse { centers, rot, .. } => format!("four_superellipse {centers:?} {rot}").to_lowercase(),
        _ => f.name().to_string(),
    }
}

/// Invariant suite: det DT = 1, the analytic Jacobian against central
/// differences, and closed-form traces against composition. With `--tol`
/// every tolerance is replaced by the given one.
pub fn cmd_check(cfg: &RunConfig, set: &Settings) -> Result<Outcome> {
    let mut c = cfg.check.unwrap_or_default();
    if let Some(t) = set.tol {
        c.det_tol = t;
        c.jacobian_tol = t;
        c.trace_tol = t;
    }
    let tables = match &cfg.curve {
        Some(cc) => vec![cc.spec()],
        None => default_tables(),
    };
    let mut rows = Vec::new();
    for spec in &tables {
        rows.extend(check_table(spec, &c)?);
    }
    let mut out = Outcome { passed: rows.iter().all(|r| r.passed), ..Default::default() };
    for r in &rows {
        out.lines.push(format!(
            "{} {} | {}: worst {:.2e} over {} (tol {:.1e}){}",
            if r.passed { "PASS" } else { "FAIL" },
            r.table,
            r.check,
            r.worst,
            r.count,
            r.tol,
            if r.note.is_empty() { String::new() } else { format!("; {}", r.note) }
        ));
    }
    if set.format.csv() {
        let mut w = create(set, "check.csv", &mut out.files)?;
        writeln!(w, "table,check,count,worst,tol,passed").map_err(io)?;
        for r in &rows {
            writeln!(w, "\"{}\",\"{}\",{},{:.16e},{:.16e},{}", r.table, r.check, r.count, r.worst, r.tol, r.passed)
                .map_err(io)?;
        }
        w.flush().map_err(io)?;
    }
    Ok(out)
}

fn caustic_name(k: CausticKind) -> &'static str {
    match k {
        CausticKind::Exterior => "exterior",
        CausticKind::EllipseCaustic => "ellipse",
        CausticKind::DegenerateMajor => "foci_segment",
        CausticKind::HyperbolaCaustic => "hyperbola",
        CausticKind::DegenerateMinor => "minor_axis",
        CausticKind::Imaginary => "imaginary",
    }
}

/// The rotation function of the elliptic billiard on (0, b²) ∪ (b², a²).
pub fn cmd_rot(cfg: &RunConfig, set: &Settings) -> Result<Outcome> {
    let rc = need(&cfg.rot, "rot")?;
    let (a, b) = (rc.a, rc.b);
    let nu0 = confocal_param(a, b)?;
    let r = limiting_rotation(nu0)?;
    let n = set.grid.unwrap_or(rc.n);
    let (aa, bb) = (a * a, b * b);
    let lambdas: Vec<f64> = interior_grid(0.0, bb, n).into_iter().chain(interior_grid(bb, aa, n)).collect();
    let mut rows = Vec::with_capacity(lambdas.len());
    for &l in &lambdas {
        rows.push((l, rot_lambda(a, b, l)?, rot_lambda_printed(a, b, l)?));
    }
    let mut out = Outcome { passed: true, ..Default::default() };
    out.lines.push(format!("a = {a}, b = {b}: nu0 = {nu0:.12}, r(nu0) = {r:.12}"));
    out.lines.push(format!(
        "limit at a^2: {:.10} (closed form {:.10}, 1 - r = {:.10})",
        rot_limit_at_a2(a, b)?,
        rot_limit_at_a2_closed(a, b)?,
        1.0 - r
    ));
    out.lines.push(format!(
        "limit at b^2: {:.8} from below, {:.8} from above",
        rot_limit_at_b2(a, b, false)?,
        rot_limit_at_b2(a, b, true)?
    ));
    if set.format.csv() {
        let mut w = create(set, "rot.csv", &mut out.files)?;
        writeln!(w, "lambda,rot,rot_printed,caustic").map_err(io)?;
        for (l, v, p) in &rows {
            writeln!(w, "{l:.16e},{v:.16e},{p:.16e},{}", caustic_name(caustic_kind(a, b, *l))).map_err(io)?;
        }
        w.flush().map_err(io)?;
    }
    if set.format.svg() {
        let (below, above): (Vec<(f64, f64)>, Vec<(f64, f64)>) =
            (rows[..n].iter().map(|x| (x.0, x.1)).collect(), rows[n..].iter().map(|x| (x.0, x.1)).collect());
        let title = format!("rot(lambda), a = {a}, b = {b}");
        let svg = line_chart(&[(&below, ORBIT_COLOR), (&above, DUAL_COLOR)], &title, "lambda");
        write_text(set, "rot.svg", &svg, &mut out.files)?;
    }
    Ok(out)
}
