//! The one-dimensional reduction curves on `(0, inf)`.
//!
//! Every regime (critical or subcritical, local or fractional) reduces to the same
//! two-parameter family
//!
//! ```text
//! f(t) = ((1+t)^a + kappa t^c) / (1+t)^b
//! g(t) = (1+t)^a ((1+t)^pg - 1) / t^c          with a = b - pg
//! ```
//!
//! where `b = q/gamma`, `pg = p/gamma` (`2/gamma` for the fractional operator)
//! and `c = gamma_c/gamma`. In the critical regimes `c = b`. The compact variable
//! `s = t/(1+t)` maps both curves onto `(0, 1)`:
//!
//! ```text
//! k(s) = (1-s)^pg + kappa s^c (1-s)^(b-c)
//! l(s) = s^-c (1-s)^(c-b) (1 - (1-s)^pg)
//! ```
//!
//! All evaluations go through logarithms (`ln_1p`, `exp_m1`) so exponents of
//! order `1e3` and arguments near the ends of the domain stay finite and free of
//! cancellation.
//!
//! For the critical curves the infimum of `g` at `gamma = p*` sits at `t -> 0`
//! (value `p/p*`); `g` increases to 1 as `t -> inf`.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::params::{Problem, CRITICAL_RTOL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveParams {
    /// `(q-p)/gamma`.
    pub a: f64,
    /// `q/gamma`.
    pub b: f64,
    /// `gamma_c/gamma`; equal to `b` in the critical regimes.
    pub c: f64,
    /// Weight times the relevant sharp constant.
    pub kappa: f64,
    /// `p/gamma`.
    pub pgamma: f64,
}

impl CurveParams {
    /// Builds curve exponents from `b`, `c`, `pg` and `kappa`; `a = b - pg`.
    pub fn new(b: f64, c: f64, pgamma: f64, kappa: f64) -> Result<Self> {
        if !(pgamma > 0.0 && pgamma.is_finite()) {
            return Err(domain("pgamma", pgamma, "finite, > 0"));
        }
        if !(b > pgamma && b.is_finite()) {
            return Err(domain("b", b, "finite, > pgamma"));
        }
        if !(c > 0.0 && c <= b) {
            return Err(domain("c", c, "0 < c <= b"));
        }
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(domain("kappa", kappa, "finite, >= 0"));
        }
        Ok(CurveParams {
            a: b - pgamma,
            b,
            c,
            kappa,
            pgamma,
        })
    }

    /// Curve exponents of a validated problem with `kappa = alpha * weight`, where
    /// `weight` is `S^{p*}`, `B` or the fractional constant depending on the regime.
    /// When `gamma` matches `gamma_c` to [`CRITICAL_RTOL`], `c` is set to exactly 1.
    pub fn for_problem(problem: &Problem, weight: f64) -> Result<Self> {
        let e = problem.exponents;
        let gamma = problem.gamma();
        let b = e.q / gamma;
        let c = if problem.regime.is_critical() {
            b
        } else if (gamma - e.gamma_c).abs() <= CRITICAL_RTOL * e.gamma_c {
            1.0
        } else {
            e.gamma_c / gamma
        };
        let mut cp = CurveParams::new(b, c, e.base / gamma, problem.alpha() * weight)?;
        if problem.regime.is_critical() && (gamma - e.critical).abs() <= CRITICAL_RTOL * e.critical
        {
            cp.b = 1.0;
            cp.c = 1.0;
            cp.a = 1.0 - cp.pgamma;
        }
        Ok(cp)
    }

    pub fn is_critical(&self) -> bool {
        self.b == self.c
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }
}

/// A point of `(0, 1)` together with its complement, so that `1 - s` keeps full
/// relative precision when `s` is close to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactPoint {
    pub s: f64,
    pub one_minus_s: f64,
}

impl CompactPoint {
    pub fn from_t(t: f64) -> Self {
        CompactPoint {
            s: t / (1.0 + t),
            one_minus_s: 1.0 / (1.0 + t),
        }
    }

    pub fn from_s(s: f64) -> Self {
        CompactPoint {
            s,
            one_minus_s: 1.0 - s,
        }
    }

    pub fn t(&self) -> f64 {
        self.s / self.one_minus_s
    }
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain("t", t, "0 < t < inf"))
    }
}

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s < 1.0 {
        Ok(())
    } else {
        Err(domain("s", s, "0 < s < 1"))
    }
}

/// `s = t/(1+t)`.
pub fn s_transform(t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(t / (1.0 + t))
}

/// `t = s/(1-s)`.
pub fn t_transform(s: f64) -> Result<f64> {
    check_s(s)?;
    Ok(s / (1.0 - s))
}

/// `f(t) = ((1+t)^a + kappa t^c)/(1+t)^b`.
pub fn f_curve(cp: &CurveParams, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(f_unchecked(cp, t))
}

fn f_unchecked(cp: &CurveParams, t: f64) -> f64 {
    let l1p = t.ln_1p();
    let head = (-cp.pgamma * l1p).exp();
    if cp.kappa == 0.0 {
        return head;
    }
    head + cp.kappa * power_product(t, cp.c, l1p, -cp.b)
}

/// `t^e1 (1+t)^e2` with `l1p = ln(1+t)`; direct powers when representable, log space otherwise.
fn power_product(t: f64, e1: f64, l1p: f64, e2: f64) -> f64 {
    let direct = t.powf(e1) * (e2 * l1p).exp();
    if direct.is_finite() && direct > f64::MIN_POSITIVE {
        direct
    } else {
        (e1 * t.ln() + e2 * l1p).exp()
    }
}

/// `g(t) = (1+t)^a ((1+t)^pg - 1)/t^c`.
pub fn g_curve(cp: &CurveParams, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(g_unchecked(cp, t))
}

fn g_unchecked(cp: &CurveParams, t: f64) -> f64 {
    let l1p = t.ln_1p();
    let bracket = (cp.pgamma * l1p).exp_m1();
    let direct = power_product(t, -cp.c, l1p, cp.a) * bracket;
    if direct.is_finite() && direct > f64::MIN_POSITIVE {
        direct
    } else {
        (cp.a * l1p - cp.c * t.ln() + bracket.ln()).exp()
    }
}

/// `k(s) = f(t(s))`.
pub fn k_curve(cp: &CurveParams, s: f64) -> Result<f64> {
    check_s(s)?;
    Ok(k_at(cp, CompactPoint::from_s(s)))
}

pub(crate) fn k_at(cp: &CurveParams, x: CompactPoint) -> f64 {
    let lc = x.one_minus_s.ln();
    let head = (cp.pgamma * lc).exp();
    if cp.kappa == 0.0 {
        return head;
    }
    head + cp.kappa * (cp.c * x.s.ln() + (cp.b - cp.c) * lc).exp()
}

/// `l(s) = g(t(s))`.
pub fn l_curve(cp: &CurveParams, s: f64) -> Result<f64> {
    check_s(s)?;
    Ok(l_at(cp, CompactPoint::from_s(s)))
}

pub(crate) fn l_at(cp: &CurveParams, x: CompactPoint) -> f64 {
    let lc = x.one_minus_s.ln();
    let e = one_minus_pow(x, cp.pgamma);
    (-cp.c * x.s.ln() + (cp.c - cp.b) * lc + e.ln()).exp()
}

/// `1 - (1-s)^e`, accurate for small `s`.
fn one_minus_pow(x: CompactPoint, e: f64) -> f64 {
    if x.s < 0.5 {
        -(e * (-x.s).ln_1p()).exp_m1()
    } else {
        -(e * x.one_minus_s.ln()).exp_m1()
    }
}

/// Factor with the sign of `f'(t)`.
///
/// Critical curves: `-(1+t)^(1-pg) + (b/pg) kappa (t/(1+t))^(b-1)`, with
/// `f' = pg/(1+t)^2 * h`. Subcritical curves: `-pg (1+t)^a + kappa (c-b) t^c +
/// kappa c t^(c-1)`, with `f' = (1+t)^(-b-1) * h`.
pub fn h_factor(cp: &CurveParams, t: f64) -> Result<f64> {
    check_t(t)?;
    let l1p = t.ln_1p();
    let lt = t.ln();
    if cp.is_critical() {
        let lead = -((1.0 - cp.pgamma) * l1p).exp();
        if cp.kappa == 0.0 {
            return Ok(lead);
        }
        Ok(lead + cp.b / cp.pgamma * cp.kappa * ((cp.b - 1.0) * (lt - l1p)).exp())
    } else {
        let lead = -cp.pgamma * (cp.a * l1p).exp();
        if cp.kappa == 0.0 {
            return Ok(lead);
        }
        Ok(lead
            + cp.kappa * (cp.c - cp.b) * (cp.c * lt).exp()
            + cp.kappa * cp.c * ((cp.c - 1.0) * lt).exp())
    }
}

/// Factor with the sign of `l'(s)`.
///
/// Critical curves give `(1 - pg/b)(1-s)^pg + (pg/b)(1-s)^(pg-1) - 1`. The general
/// form is `[((b-c)s - c(1-s))(1-(1-s)^pg) + pg s (1-s)^pg] / (b(1-s))`, which
/// reduces to the critical one when `c = b`.
pub fn m_factor(cp: &CurveParams, s: f64) -> Result<f64> {
    check_s(s)?;
    Ok(m_at(cp, CompactPoint::from_s(s)))
}

pub(crate) fn m_at(cp: &CurveParams, x: CompactPoint) -> f64 {
    let e = one_minus_pow(x, cp.pgamma);
    if cp.is_critical() {
        -e + cp.pgamma / cp.b * x.s * ((cp.pgamma - 1.0) * x.one_minus_s.ln()).exp()
    } else {
        let lead = ((cp.b - cp.c) * x.s - cp.c * x.one_minus_s) * e;
        let tail = cp.pgamma * x.s * (cp.pgamma * x.one_minus_s.ln()).exp();
        (lead + tail) / (cp.b * x.one_minus_s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    /// The functional value curve, maximized.
    F,
    /// The threshold curve, minimized.
    G,
    /// `g - 1` for critical curves, free of cancellation where `g` is close to its
    /// limit 1 at infinity.
    GExcess,
}

/// Analytic limits of `f` or `g` at `t -> 0` and `t -> inf`.
pub fn boundary_limits(cp: &CurveParams, which: CurveKind) -> (f64, f64) {
    match which {
        CurveKind::F => {
            let at_inf = if cp.is_critical() { cp.kappa } else { 0.0 };
            (1.0, at_inf)
        }
        CurveKind::G => {
            // g ~ pg t^(1-c) near 0 and g ~ t^(b-c) at infinity.
            let at_zero = if cp.c < 1.0 {
                0.0
            } else if cp.c == 1.0 {
                cp.pgamma
            } else {
                f64::INFINITY
            };
            let at_inf = if cp.is_critical() { 1.0 } else { f64::INFINITY };
            (at_zero, at_inf)
        }
        CurveKind::GExcess => {
            let (a, b) = boundary_limits(cp, CurveKind::G);
            (a - 1.0, b - 1.0)
        }
    }
}

/// `g(t) - 1 = s^-b - 1 - s^-b (1-s)^pg` for a critical curve.
pub fn g_excess(cp: &CurveParams, t: f64) -> Result<f64> {
    check_t(t)?;
    if !cp.is_critical() {
        return Err(domain("c", cp.c, "c = b (critical curve)"));
    }
    Ok(g_excess_at(cp, CompactPoint::from_t(t)))
}

pub(crate) fn g_excess_at(cp: &CurveParams, x: CompactPoint) -> f64 {
    if x.s < 0.5 {
        return l_at(cp, x) - 1.0;
    }
    let ls = (-x.one_minus_s).ln_1p();
    (-cp.b * ls).exp_m1() - (-cp.b * ls + cp.pgamma * x.one_minus_s.ln()).exp()
}

/// One of the two reduction curves, evaluated either in `t` or in the compact
/// variable `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarCurve {
    pub params: CurveParams,
    pub kind: CurveKind,
}

impl ScalarCurve {
    pub fn f(params: CurveParams) -> Self {
        ScalarCurve {
            params,
            kind: CurveKind::F,
        }
    }

    pub fn g(params: CurveParams) -> Self {
        ScalarCurve {
            params,
            kind: CurveKind::G,
        }
    }

    /// `g - 1` of a critical curve.
    pub fn g_excess(params: CurveParams) -> Result<Self> {
        if !params.is_critical() {
            return Err(domain("c", params.c, "c = b (critical curve)"));
        }
        Ok(ScalarCurve {
            params,
            kind: CurveKind::GExcess,
        })
    }

    pub fn eval_t(&self, t: f64) -> Result<f64> {
        match self.kind {
            CurveKind::F => f_curve(&self.params, t),
            CurveKind::G => g_curve(&self.params, t),
            CurveKind::GExcess => g_excess(&self.params, t),
        }
    }

    pub fn eval_s(&self, s: f64) -> Result<f64> {
        check_s(s)?;
        Ok(self.eval_compact(CompactPoint::from_s(s)))
    }

    pub(crate) fn eval_compact(&self, x: CompactPoint) -> f64 {
        match self.kind {
            CurveKind::F => k_at(&self.params, x),
            CurveKind::G => l_at(&self.params, x),
            CurveKind::GExcess => g_excess_at(&self.params, x),
        }
    }

    pub fn limits(&self) -> (f64, f64) {
        boundary_limits(&self.params, self.kind)
    }
}

/// One row of a curve sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    pub t: f64,
    pub s: f64,
    pub f: f64,
    pub g: f64,
    pub h_factor: f64,
    pub m_factor: f64,
}

/// Samples all curve quantities on a log-spaced grid of `n` points in `[t_min, t_max]`.
pub fn sample_curves(cp: &CurveParams, t_min: f64, t_max: f64, n: usize) -> Result<Vec<CurveSample>> {
    check_t(t_min)?;
    check_t(t_max)?;
    if t_max <= t_min {
        return Err(domain("t_max", t_max, "t_max > t_min"));
    }
    if n < 2 {
        return Err(domain("n", n as f64, "n >= 2"));
    }
    let (l0, l1) = (t_min.ln(), t_max.ln());
    (0..n)
        .map(|i| {
            let t = (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp();
            let x = CompactPoint::from_t(t);
            Ok(CurveSample {
                t,
                s: x.s,
                f: f_curve(cp, t)?,
                g: g_curve(cp, t)?,
                h_factor: h_factor(cp, t)?,
                m_factor: m_at(cp, x),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn critical_5_2(gamma: f64, kappa: f64) -> CurveParams {
        let pstar = 10.0 / 3.0;
        CurveParams::new(pstar / gamma, pstar / gamma, 2.0 / gamma, kappa).unwrap()
    }

    fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
            .collect()
    }

    #[test]
    fn kappa_zero_is_decreasing_power() {
        let cp = critical_5_2(3.0, 0.0);
        let grid = log_grid(1e-6, 1e6, 200);
        let mut prev = f64::INFINITY;
        for &t in &grid {
            let f = f_curve(&cp, t).unwrap();
            let expect = (1.0 + t).powf(-cp.pgamma);
            assert!((f - expect).abs() <= 1e-14 * expect);
            assert!(f < prev);
            prev = f;
        }
    }

    #[test]
    fn critical_value_at_one() {
        // N=5, p=2, gamma=3, alpha S^{p*} = 2, t = 1.
        let cp = critical_5_2(3.0, 2.0);
        let pstar = 10.0_f64 / 3.0;
        let expect = (2f64.powf((pstar - 2.0) / 3.0) + 2.0) / 2f64.powf(pstar / 3.0);
        let f = f_curve(&cp, 1.0).unwrap();
        assert!((f - expect).abs() <= 1e-15 * expect, "{f} vs {expect}");
    }

    #[test]
    fn f_tends_to_one_at_zero() {
        let cp = critical_5_2(2.5, 1.7);
        assert!((f_curve(&cp, 1e-14).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn g_limit_subcritical_supercritical_gamma() {
        // N=2, p=2, q=4: gamma_c = 2, gamma = 3 > gamma_c.
        let cp = CurveParams::new(4.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 1.0).unwrap();
        assert!(g_curve(&cp, 1e-12).unwrap() < 1e-3);
        assert_eq!(boundary_limits(&cp, CurveKind::G).0, 0.0);
    }

    #[test]
    fn g_critical_gamma_eq_pstar_limit() {
        let pstar = 10.0 / 3.0;
        let cp = critical_5_2(pstar, 0.0);
        let g0 = g_curve(&cp, 1e-10).unwrap();
        assert!((g0 - 2.0 / pstar).abs() < 1e-9);
        let ginf = g_curve(&cp, 1e12).unwrap();
        assert!((ginf - 1.0).abs() < 1e-3);
        assert_eq!(boundary_limits(&cp, CurveKind::G), (2.0 / pstar, 1.0));
    }

    #[test]
    fn g_is_accurate_near_zero() {
        // Series: g(t) = pg t^(1-c) (1 + (a + (pg-1)/2) t + O(t^2)) for gamma = gamma_c (c = 1).
        let cp = CurveParams::new(2.0, 1.0, 1.0, 0.0).unwrap();
        for &t in &[1e-3, 1e-6, 1e-9, 1e-12] {
            let series = cp.pgamma * (1.0 + (cp.a + (cp.pgamma - 1.0) / 2.0) * t);
            let g = g_curve(&cp, t).unwrap();
            assert!((g - series).abs() <= 1e-5 * t + 4.0 * f64::EPSILON, "t={t}: {g} vs {series}");
        }
    }

    #[test]
    fn limits_examples() {
        let cp = critical_5_2(3.0, 0.7);
        assert_eq!(boundary_limits(&cp, CurveKind::F), (1.0, 0.7));
        let sub = CurveParams::new(4.0 / 1.5, 2.0 / 1.5, 2.0 / 1.5, 1.0).unwrap();
        assert_eq!(boundary_limits(&sub, CurveKind::F), (1.0, 0.0));
        assert_eq!(
            boundary_limits(&sub, CurveKind::G),
            (f64::INFINITY, f64::INFINITY)
        );
    }

    #[test]
    fn limits_match_direct_evaluation() {
        let samples = [
            critical_5_2(2.0, 0.5),
            critical_5_2(3.0, 1.5),
            critical_5_2(10.0 / 3.0, 0.0),
            critical_5_2(5.0, 2.0),
            CurveParams::new(4.0 / 2.0, 1.0, 1.0, 0.8).unwrap(),
            CurveParams::new(4.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 0.8).unwrap(),
        ];
        for cp in samples {
            for kind in [CurveKind::F, CurveKind::G] {
                let curve = ScalarCurve { params: cp, kind };
                let (l0, l1) = curve.limits();
                let v0 = curve.eval_t(1e-30).unwrap();
                let v1 = curve.eval_t(1e10).unwrap();
                if l0.is_finite() {
                    let rate = if cp.c == 1.0 { 1e-30 } else { (1e-30f64).powf((1.0 - cp.c).min(1.0)) };
                    assert!((v0 - l0).abs() <= 1e-6 * l0.max(1.0) + 10.0 * rate, "{cp:?} {kind:?} 0: {v0} {l0}");
                } else {
                    assert!(v0 > curve.eval_t(1e-10).unwrap());
                }
                if l1.is_finite() {
                    // Convergence at infinity is algebraic with rate (1+t)^-min(pg, 1).
                    let rate = (1e10f64).powf(-cp.pgamma.min(1.0));
                    assert!((v1 - l1).abs() <= 1e-6 * l1.max(1.0) + 10.0 * rate, "{cp:?} {kind:?} inf: {v1} {l1}");
                } else {
                    assert!(v1 > curve.eval_t(1e5).unwrap());
                }
            }
        }
    }

    #[test]
    fn h_sign_matches_central_difference() {
        let cases = [
            critical_5_2(4.0, 0.3),
            critical_5_2(3.0, 1.2),
            critical_5_2(1.5, 0.8),
            CurveParams::new(4.0 / 2.0, 1.0, 1.0, 2.0).unwrap(),
            CurveParams::new(4.0 / 1.5, 2.0 / 1.5, 2.0 / 1.5, 3.0).unwrap(),
        ];
        for cp in cases {
            for t in log_grid(1e-4, 1e4, 400) {
                let d = 1e-7 * t;
                let fd = (f_curve(&cp, t + d).unwrap() - f_curve(&cp, t - d).unwrap()) / (2.0 * d);
                let h = h_factor(&cp, t).unwrap();
                if fd.abs() > 1e-6 && h.abs() > 1e-6 {
                    assert_eq!(h > 0.0, fd > 0.0, "{cp:?} t={t}: h={h} fd={fd}");
                }
            }
        }
    }

    #[test]
    fn h_is_decreasing_for_gamma_above_pstar() {
        let cp = critical_5_2(4.5, 0.5);
        let grid = log_grid(1e-8, 1e8, 300);
        let hs: Vec<f64> = grid.iter().map(|&t| h_factor(&cp, t).unwrap()).collect();
        assert!(hs.windows(2).all(|w| w[1] < w[0]));
        assert!(hs[0] > 0.0 && *hs.last().unwrap() < 0.0);
    }

    #[test]
    fn h_negative_when_kappa_zero() {
        let cp = critical_5_2(2.0, 0.0);
        for t in log_grid(1e-6, 1e6, 100) {
            assert!(h_factor(&cp, t).unwrap() < 0.0);
        }
    }

    #[test]
    fn excess_matches_g_and_resolves_tiny_dips() {
        let cp = critical_5_2(2.5, 0.0);
        assert!(g_excess(&CurveParams::new(2.0, 1.0, 1.0, 0.0).unwrap(), 1.0).is_err());
        for t in log_grid(1e-3, 1e3, 60) {
            let e = g_excess(&cp, t).unwrap();
            let g = g_curve(&cp, t).unwrap();
            assert!((e - (g - 1.0)).abs() < 1e-13 * g.max(1.0), "t={t}");
        }
        // gamma close to p: g - 1 ~ b/t - t^-pg at large t, negative but below 1e-30.
        let cp = critical_5_2(2.02, 0.0);
        let t = 1e40;
        let e = g_excess(&cp, t).unwrap();
        let approx = cp.b / t - t.powf(-cp.pgamma);
        assert!(e < 0.0 && (e / approx - 1.0).abs() < 1e-6, "{e} vs {approx}");
        assert_eq!(ScalarCurve::g_excess(cp).unwrap().limits(), (f64::INFINITY, 0.0));
    }

    #[test]
    fn transforms() {
        assert_eq!(s_transform(1.0).unwrap(), 0.5);
        assert_eq!(t_transform(0.5).unwrap(), 1.0);
        assert!(s_transform(0.0).is_err());
        assert!(t_transform(1.0).is_err());
        assert!(t_transform(-0.1).is_err());
        for t in log_grid(1e-8, 1e8, 500) {
            let back = t_transform(s_transform(t).unwrap()).unwrap();
            assert!((back - t).abs() <= 4.0 * f64::EPSILON * t * (1.0 + t), "{t} -> {back}");
        }
    }

    #[test]
    fn k_closed_form_critical() {
        let cp = critical_5_2(2.5, 1.3);
        for &s in &[0.01f64, 0.2, 0.5, 0.9, 0.999] {
            let expect = (1.0 - s).powf(cp.pgamma) + cp.kappa * s.powf(cp.b);
            assert!((k_curve(&cp, s).unwrap() - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn m_limits_and_roots() {
        let pstar = 10.0_f64 / 3.0;
        let gamma = 3.0;
        let cp = critical_5_2(gamma, 0.0);
        assert!(m_factor(&cp, 1e-12).unwrap().abs() < 1e-11);
        // m' vanishes at s1 = (p*-gamma)/(p*-p).
        let s1 = (pstar - gamma) / (pstar - 2.0);
        let d = 1e-6;
        let mp = (m_factor(&cp, s1 + d).unwrap() - m_factor(&cp, s1 - d).unwrap()) / (2.0 * d);
        assert!(mp.abs() < 1e-8, "m'(s1) = {mp}");
        let left = m_factor(&cp, s1 - 1e-2).unwrap() - m_factor(&cp, s1 - 2e-2).unwrap();
        assert!(left < 0.0);
    }

    #[test]
    fn m_matches_paper_form_in_critical_case() {
        let cp = critical_5_2(2.7, 0.0);
        let r = cp.pgamma / cp.b;
        for &s in &[1e-6f64, 0.1, 0.4, 0.8, 0.99] {
            let paper = (1.0 - r) * (1.0 - s).powf(cp.pgamma) + r * (1.0 - s).powf(cp.pgamma - 1.0)
                - 1.0;
            assert!((m_factor(&cp, s).unwrap() - paper).abs() < 1e-14);
        }
    }

    #[test]
    fn m_negative_when_gamma_at_most_p() {
        for gamma in [0.5, 1.0, 2.0] {
            let cp = critical_5_2(gamma, 0.0);
            for i in 1..1000 {
                let s = i as f64 / 1000.0;
                assert!(m_factor(&cp, s).unwrap() < 0.0, "gamma={gamma} s={s}");
            }
        }
    }

    #[test]
    fn m_sign_matches_l_derivative() {
        let cases = [
            critical_5_2(3.0, 0.0),
            critical_5_2(1.5, 0.0),
            CurveParams::new(4.0 / 1.5, 2.0 / 1.5, 2.0 / 1.5, 0.0).unwrap(),
            CurveParams::new(2.5, 1.5, 0.5, 0.0).unwrap(),
        ];
        for cp in cases {
            for i in 1..500 {
                let s = i as f64 / 500.0;
                let d = 1e-7 * s.min(1.0 - s);
                let fd = (l_curve(&cp, s + d).unwrap() - l_curve(&cp, s - d).unwrap()) / (2.0 * d);
                let m = m_factor(&cp, s).unwrap();
                if fd.abs() > 1e-5 * l_curve(&cp, s).unwrap() && m.abs() > 1e-6 {
                    assert_eq!(m > 0.0, fd > 0.0, "{cp:?} s={s}: m={m} fd={fd}");
                }
            }
        }
    }

    #[test]
    fn g_decreasing_in_gamma() {
        let pstar = 10.0 / 3.0;
        for t in log_grid(1e-3, 1e3, 50) {
            let mut prev = f64::INFINITY;
            for i in 1..40 {
                let gamma = 0.2 * i as f64;
                let cp = CurveParams::new(pstar / gamma, pstar / gamma, 2.0 / gamma, 0.0).unwrap();
                let g = g_curve(&cp, t).unwrap();
                assert!(g < prev, "t={t} gamma={gamma}");
                prev = g;
            }
        }
    }

    #[test]
    fn extreme_exponents_stay_finite() {
        let cp = CurveParams::new(1.5e3, 1.5e3, 1e3, 2.0).unwrap();
        for t in log_grid(1e-8, 1e8, 100) {
            assert!(f_curve(&cp, t).unwrap().is_finite());
            assert!(h_factor(&cp, t).unwrap().is_finite());
        }
        for i in 1..100 {
            let s = i as f64 / 100.0;
            assert!(k_curve(&cp, s).unwrap().is_finite());
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn curve_params() -> impl Strategy<Value = CurveParams> {
            (0.05f64..4.0, 0.05f64..4.0, 0.0f64..1.0, 0.0f64..3.0, any::<bool>()).prop_map(
                |(pg, extra, cfrac, kappa, critical)| {
                    let b = pg + extra;
                    let c = if critical { b } else { b * (0.05 + 0.95 * cfrac) };
                    CurveParams::new(b, c, pg, kappa).unwrap()
                },
            )
        }

        proptest! {
            #[test]
            fn compact_form_agrees(cp in curve_params(), lt in -8.0f64..8.0) {
                let t = 10f64.powf(lt);
                let x = CompactPoint::from_t(t);
                let f = f_curve(&cp, t).unwrap();
                let k = k_at(&cp, x);
                prop_assert!((f - k).abs() <= 1e-12 * f.abs().max(1e-300), "f={} k={}", f, k);
                let g = g_curve(&cp, t).unwrap();
                let l = l_at(&cp, x);
                prop_assert!((g - l).abs() <= 1e-12 * g.abs(), "g={} l={}", g, l);
            }
        }
    }
}
