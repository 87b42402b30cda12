//! Stability matrices of periodic orbits and the trace criteria for period two.

use serde::Serialize;

use crate::boundary::Curve;
use crate::error::{ImbError, Result};
use crate::geometry::{wrap_centered, Mat2};
use crate::imb_map::{iterate, jacobian_analytic, PhasePoint, StepData};

/// Default tolerance for traces evaluated from closed forms.
pub const TOL_CLOSED: f64 = 1e-9;
/// Default tolerance for traces of numerically composed matrices.
pub const TOL_COMPOSED: f64 = 1e-6;
/// Closure tolerance checked before composing a stability matrix.
pub const CLOSURE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StabilityClass {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl StabilityClass {
    pub fn as_str(self) -> &'static str {
        match self {
            StabilityClass::Elliptic => "elliptic",
            StabilityClass::Parabolic => "parabolic",
            StabilityClass::Hyperbolic => "hyperbolic",
        }
    }
    pub fn letter(self) -> char {
        match self {
            StabilityClass::Elliptic => 'E',
            StabilityClass::Parabolic => 'P',
            StabilityClass::Hyperbolic => 'H',
        }
    }
}

impl std::fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityVerdict {
    pub trace: f64,
    pub class: StabilityClass,
    pub tol: f64,
}

pub fn classify(trace: f64, tol: f64) -> StabilityVerdict {
    let gap = trace.abs() - 2.0;
    let class = if gap.abs() <= tol {
        StabilityClass::Parabolic
    } else if gap < 0.0 {
        StabilityClass::Elliptic
    } else {
        StabilityClass::Hyperbolic
    };
    StabilityVerdict { trace, class, tol }
}

/// max(|Δs| / L, |Δu|) with Δs taken modulo L.
pub fn phase_distance(curve: &Curve, a: PhasePoint, b: PhasePoint) -> f64 {
    let l = curve.total_length();
    (wrap_centered(a.s - b.s, l).abs() / l).max((a.u() - b.u()).abs())
}

/// Stability matrix with the steps that produced it and the closure residual.
#[derive(Debug, Clone)]
pub struct Composed {
    pub matrix: Mat2,
    pub steps: Vec<StepData>,
    pub residual: f64,
}

/// S_n(z) = DT(T^{n−1} z) ⋯ DT(z), after checking that z has period n.
pub fn compose(curve: &Curve, mu: f64, z: PhasePoint, n: usize) -> Result<Composed> {
    let steps = iterate(curve, mu, z, n).into_result()?;
    let end = steps.last().map(|s| s.0).unwrap_or(z);
    let residual = phase_distance(curve, end, z);
    if residual > CLOSURE_TOL {
        return Err(ImbError::NotPeriodic { residual });
    }
    let mut m = Mat2::IDENTITY;
    for (_, d) in &steps {
        m = jacobian_analytic(d)? * m;
    }
    Ok(Composed { matrix: m, steps: steps.into_iter().map(|s| s.1).collect(), residual })
}

pub fn stability_matrix(curve: &Curve, mu: f64, z: PhasePoint, n: usize) -> Result<Mat2> {
    compose(curve, mu, z, n).map(|c| c.matrix)
}

/// α = ℓ₁/μ, β = cot θ₀ + cot θ₃, δ = cot θ₁ + cot θ₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPeriodicParams {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
}

impl TwoPeriodicParams {
    pub fn new(alpha: f64, beta: f64, delta: f64) -> Self {
        TwoPeriodicParams { alpha, beta, delta }
    }

    /// Read (α, β, δ) off the two steps of a 2-periodic orbit.
    pub fn from_steps(first: &StepData, second: &StepData) -> Self {
        let cot = |t: f64| t.cos() / t.sin();
        TwoPeriodicParams {
            alpha: first.ell1 / first.mu,
            beta: cot(first.theta0) + cot(second.theta1),
            delta: cot(first.theta1) + cot(first.theta2),
        }
    }

    pub fn swapped(&self) -> Self {
        TwoPeriodicParams { alpha: self.alpha, beta: self.delta, delta: self.beta }
    }
}

pub fn trace2_closed(p: &TwoPeriodicParams) -> f64 {
    let (a, b, d) = (p.alpha, p.beta, p.delta);
    2.0 - 2.0 * a * (b + d) + a * a * b * d
}

/// The factorisations Tr + 2 = (αβ − 2)(αδ − 2) and Tr − 2 = α(αβδ − 2(β + δ)).
pub fn trace2_factors(p: &TwoPeriodicParams) -> (f64, f64, f64) {
    let (a, b, d) = (p.alpha, p.beta, p.delta);
    (a * b - 2.0, a * d - 2.0, a * b * d - 2.0 * (b + d))
}

/// Where α sits relative to m = min(2/β, 2/δ) and M = max(2/β, 2/δ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConvexInterval {
    BelowM,
    AtSmall,
    Between,
    AtLarge,
    BelowSum,
    AtSum,
    BeyondSum,
}

impl ConvexInterval {
    pub fn predicted(self) -> StabilityClass {
        use ConvexInterval::*;
        match self {
            BelowM | BelowSum => StabilityClass::Elliptic,
            AtSmall | AtLarge | AtSum => StabilityClass::Parabolic,
            Between | BeyondSum => StabilityClass::Hyperbolic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexDiagnosis {
    pub m: f64,
    pub big_m: f64,
    pub interval: ConvexInterval,
}

/// Relative tolerance for deciding that α sits on a threshold.
pub const ALPHA_REL_TOL: f64 = 1e-12;

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= ALPHA_REL_TOL * a.abs().max(b.abs())
}

/// Period-two criterion for strictly convex tables (β, δ > 0).
pub fn classify2_convex(p: &TwoPeriodicParams, tol: f64) -> Result<(StabilityVerdict, ConvexDiagnosis)> {
    if !(p.beta > 0.0 && p.delta > 0.0) {
        return Err(ImbError::Validation(format!(
            "convex criterion needs beta, delta > 0 (got {}, {}); use classify2_general",
            p.beta, p.delta
        )));
    }
    let (x, y) = (2.0 / p.beta, 2.0 / p.delta);
    let (m, big) = (x.min(y), x.max(y));
    let a = p.alpha;
    use ConvexInterval::*;
    let interval = if same(a, m) {
        AtSmall
    } else if same(a, m + big) {
        AtSum
    } else if same(a, big) {
        AtLarge
    } else if a < m {
        BelowM
    } else if a < big {
        Between
    } else if a < m + big {
        BelowSum
    } else {
        BeyondSum
    };
    Ok((classify(trace2_closed(p), tol), ConvexDiagnosis { m, big_m: big, interval }))
}

/// Case of the general period-two criterion, labelled by the first match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GeneralCase {
    /// β = δ = 0.
    I,
    /// β, δ ≤ 0, not both zero.
    II,
    /// One of β, δ positive; the other zero, or negative with 2/β + 2/δ ≤ 0.
    III,
    /// One of β, δ positive, the other negative, 2/β + 2/δ > 0.
    IV,
    /// β, δ > 0.
    V,
}

impl GeneralCase {
    pub fn label(self) -> &'static str {
        match self {
            GeneralCase::I => "i",
            GeneralCase::II => "ii",
            GeneralCase::III => "iii",
            GeneralCase::IV => "iv",
            GeneralCase::V => "v",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralDiagnosis {
    pub case: GeneralCase,
    /// Class predicted by the case's interval statement.
    pub predicted: StabilityClass,
}

pub fn general_case(beta: f64, delta: f64) -> GeneralCase {
    let (pos, other) = if beta > 0.0 { (beta, delta) } else { (delta, beta) };
    if beta == 0.0 && delta == 0.0 {
        GeneralCase::I
    } else if beta <= 0.0 && delta <= 0.0 {
        GeneralCase::II
    } else if other == 0.0 || (other < 0.0 && 2.0 / pos + 2.0 / other <= 0.0) {
        GeneralCase::III
    } else if other < 0.0 {
        GeneralCase::IV
    } else {
        GeneralCase::V
    }
}

/// Period-two criterion for any sign pattern of β and δ.
pub fn classify2_general(p: &TwoPeriodicParams, tol: f64) -> (StabilityVerdict, GeneralDiagnosis) {
    let verdict = classify(trace2_closed(p), tol);
    let case = general_case(p.beta, p.delta);
    let a = p.alpha;
    let (pos, other) = if p.beta > 0.0 { (p.beta, p.delta) } else { (p.delta, p.beta) };
    use StabilityClass::*;
    let predicted = match case {
        GeneralCase::I => Parabolic,
        GeneralCase::II => Hyperbolic,
        GeneralCase::III => {
            let t = 2.0 / pos;
            if same(a, t) {
                Parabolic
            } else if a < t {
                Elliptic
            } else {
                Hyperbolic
            }
        }
        GeneralCase::IV => {
            let (hi, lo) = (2.0 / pos, 2.0 / pos + 2.0 / other);
            if same(a, hi) || same(a, lo) {
                Parabolic
            } else if a > lo && a < hi {
                Elliptic
            } else {
                Hyperbolic
            }
        }
        GeneralCase::V => classify2_convex(p, tol).map(|r| r.1.interval.predicted()).unwrap_or(verdict.class),
    };
    (verdict, GeneralDiagnosis { case, predicted })
}

/// Trace of a 2-periodic orbit of the ordinary billiard: chord length l
/// between points with radii of curvature ρ₁, ρ₂ (infinite radii allowed).
pub fn billiard_trace2(l: f64, rho1: f64, rho2: f64) -> f64 {
    let (k1, k2) = (1.0 / rho1, 1.0 / rho2);
    2.0 - 4.0 * l * (k1 + k2) + 4.0 * l * l * k1 * k2
}

pub fn classify_billiard2(l: f64, rho1: f64, rho2: f64, tol: f64) -> StabilityVerdict {
    classify(billiard_trace2(l, rho1, rho2), tol)
}

/// The interval statement for the ordinary billiard with finite radii.
pub fn billiard_interval_class(l: f64, rho1: f64, rho2: f64) -> StabilityClass {
    let (r1, r2) = (rho1.min(rho2), rho1.max(rho2));
    let hit = |x: f64| same(l, x);
    if hit(r1) || hit(r2) || hit(r1 + r2) {
        StabilityClass::Parabolic
    } else if (l > r1 && l < r2) || l > r1 + r2 {
        StabilityClass::Hyperbolic
    } else {
        StabilityClass::Elliptic
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_basics() {
        assert_eq!(classify(2.0, TOL_CLOSED).class, StabilityClass::Parabolic);
        assert_eq!(classify(1.9, TOL_CLOSED).class, StabilityClass::Elliptic);
        assert_eq!(classify(-2.5, TOL_CLOSED).class, StabilityClass::Hyperbolic);
        assert_eq!(classify(-2.0, TOL_CLOSED).class, StabilityClass::Parabolic);
    }

    #[test]
    fn closed_trace_special_values() {
        assert_eq!(trace2_closed(&TwoPeriodicParams::new(0.0, 1.3, 0.4)), 2.0);
        assert!((trace2_closed(&TwoPeriodicParams::new(4.0, 1.0, 1.0)) - 2.0).abs() < 1e-15);
        assert!((trace2_closed(&TwoPeriodicParams::new(2.0, 1.0, 1.0)) + 2.0).abs() < 1e-15);
    }

    #[test]
    fn factors_reproduce_trace() {
        let p = TwoPeriodicParams::new(1.7, 0.3, -2.2);
        let (f1, f2, f3) = trace2_factors(&p);
        let t = trace2_closed(&p);
        assert!((f1 * f2 - (t + 2.0)).abs() < 1e-12);
        assert!((p.alpha * f3 - (t - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn convex_thresholds_are_parabolic() {
        let (b, d) = (0.7, 1.9);
        let (m, big) = (2.0 / d, 2.0 / b);
        for a in [m, big, m + big] {
            let p = TwoPeriodicParams::new(a, b, d);
            let (v, g) = classify2_convex(&p, TOL_CLOSED).unwrap();
            assert_eq!(v.class, StabilityClass::Parabolic);
            assert_eq!(g.interval.predicted(), StabilityClass::Parabolic);
            assert!((v.trace.abs() - 2.0).abs() < 1e-12);
        }
        let p = TwoPeriodicParams::new(0.5 * (big + m + big), b, d);
        assert_eq!(classify2_convex(&p, TOL_CLOSED).unwrap().0.class, StabilityClass::Elliptic);
    }

    #[test]
    fn convex_equal_case_collapses() {
        let p = TwoPeriodicParams::new(2.0 * 2.0 / 1.5, 1.5, 1.5);
        let (v, g) = classify2_convex(&p, TOL_CLOSED).unwrap();
        assert_eq!(v.class, StabilityClass::Parabolic);
        assert_eq!(g.interval, ConvexInterval::AtSum);
    }

    #[test]
    fn convex_rejects_nonpositive() {
        assert!(classify2_convex(&TwoPeriodicParams::new(1.0, 0.0, 1.0), TOL_CLOSED).is_err());
    }

    #[test]
    fn general_cases() {
        for a in [0.1, 1.0, 10.0] {
            let (v, g) = classify2_general(&TwoPeriodicParams::new(a, 0.0, 0.0), TOL_CLOSED);
            assert_eq!((v.class, g.case), (StabilityClass::Parabolic, GeneralCase::I));
            let (v, g) = classify2_general(&TwoPeriodicParams::new(a, -0.3, 0.0), TOL_CLOSED);
            assert_eq!((v.class, g.case), (StabilityClass::Hyperbolic, GeneralCase::II));
        }
        let (b, d) = (1.0, -4.0);
        let a = 0.5 * ((2.0 / b + 2.0 / d) + 2.0 / b);
        let (v, g) = classify2_general(&TwoPeriodicParams::new(a, b, d), TOL_CLOSED);
        assert_eq!((v.class, g.case, g.predicted), (StabilityClass::Elliptic, GeneralCase::IV, StabilityClass::Elliptic));
        let (_, g) = classify2_general(&TwoPeriodicParams::new(a, d, b), TOL_CLOSED);
        assert_eq!(g.case, GeneralCase::IV);
    }

    #[test]
    fn billiard_comparison() {
        let v = classify_billiard2(3.0, f64::INFINITY, f64::INFINITY, TOL_CLOSED);
        assert_eq!((v.trace, v.class), (2.0, StabilityClass::Parabolic));
        assert_eq!(classify_billiard2(4.0, 0.5, 0.5, TOL_CLOSED).class, StabilityClass::Hyperbolic);
        let l = 2f64.powf(1.25);
        let rho = 2f64.powf(0.25) / 3.0;
        assert_eq!(classify_billiard2(l, rho, rho, TOL_CLOSED).class, StabilityClass::Hyperbolic);
        for (l, r1, r2) in [(0.5, 1.0, 2.0), (1.5, 1.0, 2.0), (2.5, 1.0, 2.0), (3.5, 1.0, 2.0)] {
            assert_eq!(classify_billiard2(l, r1, r2, TOL_CLOSED).class, billiard_interval_class(l, r1, r2));
        }
    }
}
