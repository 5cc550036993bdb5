//! Supremum and infimum of the reduction curves over `(0, inf)`.
//!
//! The search runs in the compact variable `s = t/(1+t)`: a uniform scan of
//! [`SCAN_POINTS`] points plus geometric ladders towards both ends, followed by a
//! golden-section refinement of every interior local extremum. The two ends of
//! the domain are never sampled as candidates; their values come from
//! [`boundary_limits`](crate::curves::boundary_limits).

use serde::Serialize;

use crate::curves::{CompactPoint, CurveKind, CurveParams, ScalarCurve};
use crate::error::{domain, Error, Result};

/// Uniform scan resolution in `s`.
pub const SCAN_POINTS: usize = 4096;
/// Default bracket width for the refinement.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Number of geometric ladder points placed below the first and above the last scan point.
const LADDER: i32 = 980;
const MAX_GOLDEN_STEPS: usize = 400;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptResult {
    pub value: f64,
    /// Interior optimizer `t*` when one was found.
    pub argopt: Option<f64>,
    pub attained: bool,
    /// The interior candidate ties the boundary limit within `10 tol`; the verdict is
    /// left to the analytic classifier and `attained` is `false`.
    pub marginal: bool,
    pub err_bound: f64,
    pub n_evals: usize,
}

/// `sup_{t>0} f(t)`.
pub fn maximize_halfline(curve: &ScalarCurve, tol: f64) -> Result<OptResult> {
    if curve.kind != CurveKind::F {
        return Err(domain("curve", 1.0, "an f-type curve"));
    }
    optimize(curve, tol, Mode::Max)
}

/// `inf_{t>0} g(t)` (or of `g - 1`).
pub fn minimize_halfline(curve: &ScalarCurve, tol: f64) -> Result<OptResult> {
    if curve.kind == CurveKind::F {
        return Err(domain("curve", 0.0, "a g-type curve"));
    }
    optimize(curve, tol, Mode::Min)
}

/// Maximizes for f-type curves and minimizes for g-type curves.
pub fn optimize_curve(curve: &ScalarCurve, tol: f64) -> Result<OptResult> {
    match curve.kind {
        CurveKind::F => optimize(curve, tol, Mode::Max),
        CurveKind::G | CurveKind::GExcess => optimize(curve, tol, Mode::Min),
    }
}

fn sign(mode: Mode) -> f64 {
    match mode {
        Mode::Max => 1.0,
        Mode::Min => -1.0,
    }
}

/// Objective value with the sign flipped for minimization, so every search maximizes.
fn objective(curve: &ScalarCurve, mode: Mode, x: CompactPoint) -> Result<f64> {
    let v = curve.eval_compact(x);
    if v.is_nan() || (mode == Mode::Max && !v.is_finite()) || v == f64::NEG_INFINITY {
        return Err(Error::NonFinite { at: x.t() });
    }
    Ok(sign(mode) * v)
}

fn eval_all(curve: &ScalarCurve, mode: Mode, points: &[CompactPoint]) -> Result<Vec<f64>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        points.par_iter().map(|&x| objective(curve, mode, x)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        points.iter().map(|&x| objective(curve, mode, x)).collect()
    }
}

fn scan_points() -> Vec<CompactPoint> {
    let n = SCAN_POINTS as f64;
    let mut pts = Vec::with_capacity(SCAN_POINTS + 2 * LADDER as usize);
    for k in (1..=LADDER).rev() {
        pts.push(CompactPoint::from_s(2f64.powi(-k) / n));
    }
    for i in 1..SCAN_POINTS {
        let s = i as f64 / n;
        pts.push(CompactPoint {
            s,
            one_minus_s: (SCAN_POINTS - i) as f64 / n,
        });
    }
    for k in 1..=LADDER {
        let d = 2f64.powi(-k) / n;
        pts.push(CompactPoint {
            s: 1.0 - d,
            one_minus_s: d,
        });
    }
    pts
}

fn limit_objective(curve: &ScalarCurve, mode: Mode) -> f64 {
    let (a, b) = curve.limits();
    match mode {
        Mode::Max => a.max(b),
        Mode::Min => -(a.min(b)),
    }
}

struct Peak {
    t: f64,
    value: f64,
    err: f64,
}

fn optimize(curve: &ScalarCurve, tol: f64, mode: Mode) -> Result<OptResult> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(domain("tol", tol, "finite, > 0"));
    }
    let pts = scan_points();
    let vals = eval_all(curve, mode, &pts)?;
    let mut n_evals = pts.len();

    let mut best: Option<Peak> = None;
    for i in 1..pts.len() - 1 {
        if vals[i] > vals[i - 1] && vals[i] >= vals[i + 1] {
            let (peak, evals) = golden(curve, mode, pts[i - 1].t(), pts[i].t(), pts[i + 1].t(), vals[i], tol)?;
            n_evals += evals;
            if best.as_ref().map_or(true, |b| peak.value > b.value) {
                best = Some(peak);
            }
        }
    }

    let boundary = limit_objective(curve, mode);
    let s = sign(mode);
    let attained_margin = 10.0 * tol;
    let result = match best {
        Some(p) if p.value > boundary + attained_margin => OptResult {
            value: s * p.value,
            argopt: Some(p.t),
            attained: true,
            marginal: false,
            err_bound: p.err,
            n_evals,
        },
        Some(p) if p.value >= boundary - attained_margin => OptResult {
            value: s * p.value.max(boundary),
            argopt: Some(p.t),
            attained: false,
            marginal: true,
            err_bound: p.err.max((p.value - boundary).abs()),
            n_evals,
        },
        _ => OptResult {
            value: s * boundary,
            argopt: None,
            attained: false,
            marginal: false,
            err_bound: 0.0,
            n_evals,
        },
    };
    Ok(result)
}

/// Golden-section search for a maximum of the objective in `y = ln t` on the
/// bracket `(lo, hi)` with interior point `mid`.
fn golden(
    curve: &ScalarCurve,
    mode: Mode,
    lo: f64,
    mid: f64,
    hi: f64,
    v_mid: f64,
    tol: f64,
) -> Result<(Peak, usize)> {
    let at = |y: f64| objective(curve, mode, CompactPoint::from_t(y.exp()));
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut best_y = mid.ln();
    let mut best_v = v_mid;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = at(x1)?;
    let mut f2 = at(x2)?;
    let mut evals = 2;
    for _ in 0..MAX_GOLDEN_STEPS {
        if b - a <= tol {
            break;
        }
        if f1 >= f2 {
            if f1 > best_v {
                best_v = f1;
                best_y = x1;
            }
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = at(x1)?;
        } else {
            if f2 > best_v {
                best_v = f2;
                best_y = x2;
            }
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = at(x2)?;
        }
        evals += 1;
    }
    for (y, f) in [(x1, f1), (x2, f2)] {
        if f > best_v {
            best_v = f;
            best_y = y;
        }
    }
    let fa = at(a)?;
    let fb = at(b)?;
    evals += 2;
    let spread = (best_v - fa).abs().max((best_v - fb).abs());
    let err = spread + 4.0 * f64::EPSILON * best_v.abs();
    Ok((
        Peak {
            t: best_y.exp(),
            value: best_v,
            err,
        },
        evals,
    ))
}

/// Brute-force reference: uniform scan `s_i = i/n`, `i = 1..n-1`, combined with the
/// analytic boundary limits. No refinement.
pub fn grid_oracle(curve: &ScalarCurve, n: usize, mode: Mode) -> Result<OptResult> {
    if n < 100_000 {
        return Err(domain("n", n as f64, "n >= 1e5"));
    }
    let nf = n as f64;
    let eval = |i: usize| {
        objective(
            curve,
            mode,
            CompactPoint {
                s: i as f64 / nf,
                one_minus_s: (n - i) as f64 / nf,
            },
        )
        .map(|v| (i, v))
    };
    #[cfg(feature = "parallel")]
    let vals: Vec<(usize, f64)> = {
        use rayon::prelude::*;
        (1..n).into_par_iter().map(eval).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let vals: Vec<(usize, f64)> = (1..n).map(eval).collect::<Result<_>>()?;

    let (bi, bv) = vals
        .iter()
        .copied()
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let boundary = limit_objective(curve, mode);
    let s = sign(mode);
    let attained = bv > boundary;
    let argopt = attained.then(|| {
        CompactPoint {
            s: bi as f64 / nf,
            one_minus_s: (n - bi) as f64 / nf,
        }
        .t()
    });
    let err_bound = if attained {
        let left = if bi > 1 { vals[bi - 2].1 } else { boundary };
        let right = if bi + 1 < n { vals[bi].1 } else { boundary };
        (bv - left).abs().max((bv - right).abs())
    } else {
        0.0
    };
    Ok(OptResult {
        value: s * bv.max(boundary),
        argopt,
        attained,
        marginal: false,
        err_bound,
        n_evals: n - 1,
    })
}

/// Bisection in `ln t` for a sign change of `factor` on `[lo, hi]`.
pub fn log_bisect(factor: impl Fn(f64) -> Result<f64>, lo: f64, hi: f64) -> Result<Option<f64>> {
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut fa = factor(lo)?;
    let fb = factor(hi)?;
    if fa == 0.0 {
        return Ok(Some(lo));
    }
    if fb == 0.0 {
        return Ok(Some(hi));
    }
    if (fa > 0.0) == (fb > 0.0) {
        return Ok(None);
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = factor(m.exp())?;
        if fm == 0.0 {
            return Ok(Some(m.exp()));
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(Some((0.5 * (a + b)).exp()))
}

/// Zero of the `f'` factor `h` in `[lo, hi]`. For critical curves with
/// `gamma > p*` this is the unique maximizer of `f`.
pub fn h_root(cp: &CurveParams, lo: f64, hi: f64) -> Result<Option<f64>> {
    log_bisect(|t| crate::curves::h_factor(cp, t), lo, hi)
}

/// Zero of the `l'` factor `m`, returned in `t`, searched in `[lo, hi]` (also in `t`).
pub fn m_root(cp: &CurveParams, lo: f64, hi: f64) -> Result<Option<f64>> {
    log_bisect(
        |t| Ok(crate::curves::m_at(cp, CompactPoint::from_t(t))),
        lo,
        hi,
    )
}
