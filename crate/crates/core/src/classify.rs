//! Attainability classification: threshold weight, value `D`, verdict and optimizer
//! location for every regime.
//!
//! Boundary cells (`gamma = p`, `gamma = gamma_c`, `gamma = p*`, `alpha` equal to the
//! threshold, `p^2 = N`) are decided by the analytic table below. The numeric
//! optimizer only supplies values and locations.
//!
//! | regime | gamma | alpha | attained | D |
//! |---|---|---|---|---|
//! | critical, `p^2 >= N` | any | any | no | `sup f` |
//! | critical | `> p*` | `> 0` | yes | `sup f > 1` |
//! | critical | `= p*` | `<= p/(p* S^{p*})` | no | 1 |
//! | critical | `= p*` | above | yes | `f(t0)` |
//! | critical | `(p, p*)` | `< alpha(gamma)` | no | 1 |
//! | critical | `(p, p*)` | `>= alpha(gamma)` | yes | `sup f` |
//! | critical | `<= p` | any | no | `max(1, alpha S^{p*})` |
//! | subcritical | `> gamma_c` | `> 0` | yes | `sup f` |
//! | subcritical | `= gamma_c` | `<= p/(gamma_c B)` | no | 1 |
//! | subcritical | `= gamma_c` | above | yes | `sup f` |
//! | subcritical | `< gamma_c` | `< alpha(gamma)` | no | 1 |
//! | subcritical | `< gamma_c` | `>= alpha(gamma)` | yes | `sup f` |
//! | any | any | 0 | no | 1 |
//!
//! The fractional problem uses the same table with `p -> 2`, `p* -> 2N/(N-2s)`,
//! `gamma_c -> N(q-2)/(2s)`, `S^{p*} -> S_frac` and `p^2 < N` replaced by `4s < N`.
//!
//! For `gamma < gamma_c` below the threshold, `D = 1` follows from the proof of the
//! subcritical classification (the supremum of `f` is its limit at `t -> 0`), not
//! from the statement itself; verdicts in that cell carry a note saying so.

use std::cmp::Ordering;

use serde::Serialize;

use crate::curves::{f_curve, CurveParams, ScalarCurve};
use crate::error::{Error, Result};
use crate::halfline::{h_root, m_root, maximize_halfline, minimize_halfline, OptResult, DEFAULT_TOL};
use crate::params::{Problem, Regime, CRITICAL_RTOL};

/// Relative tolerance for treating `alpha` as equal to the threshold.
pub const ALPHA_TIE_RTOL: f64 = 1e-10;
const ROOT_LO: f64 = 1e-300;
const ROOT_HI: f64 = 1e300;

/// Sharp constants available to the classifier. Only the one matching the regime
/// is required: `sobolev` (critical local), `gns` (subcritical local) or
/// `fractional`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Constants {
    pub sobolev: Option<f64>,
    pub gns: Option<f64>,
    pub fractional: Option<f64>,
}

impl Constants {
    pub fn sobolev(s: f64) -> Self {
        Constants {
            sobolev: Some(s),
            ..Constants::default()
        }
    }

    pub fn gns(b: f64) -> Self {
        Constants {
            gns: Some(b),
            ..Constants::default()
        }
    }

    pub fn fractional(s: f64) -> Self {
        Constants {
            fractional: Some(s),
            ..Constants::default()
        }
    }

    /// The factor `C` with `kappa = alpha C`: `S^{p*}`, `B` or `S_frac`.
    pub fn weight(&self, problem: &Problem) -> Result<f64> {
        let missing = || Error::MissingConstant(problem.regime);
        let c = match problem.regime {
            Regime::CriticalLocal => self
                .sobolev
                .ok_or_else(missing)?
                .powf(problem.exponents.critical),
            Regime::SubcriticalLocal => self.gns.ok_or_else(missing)?,
            Regime::CriticalFractional | Regime::SubcriticalFractional => {
                self.fractional.ok_or_else(missing)?
            }
        };
        if !(c > 0.0 && c.is_finite()) {
            return Err(crate::error::domain("constant", c, "finite, > 0"));
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Reason {
    UniqueInteriorMax,
    SobolevNotAttained,
    BelowThreshold,
    AtThresholdCriticalGammaEqPstar,
    AtThresholdGammaEqGammaC,
    ConvexityExclusion,
    AlphaZero,
}

/// Position of gamma relative to the exponents that split the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaBranch {
    AboveCritical,
    AtCritical,
    Between,
    AtOrBelowBase,
    AboveGammaC,
    AtGammaC,
    BelowGammaC,
}

fn compare(gamma: f64, reference: f64) -> Ordering {
    if (gamma - reference).abs() <= CRITICAL_RTOL * reference {
        Ordering::Equal
    } else if gamma < reference {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

pub fn gamma_branch(problem: &Problem) -> GammaBranch {
    let g = problem.gamma();
    let e = problem.exponents;
    if problem.regime.is_critical() {
        match compare(g, e.critical) {
            Ordering::Greater => GammaBranch::AboveCritical,
            Ordering::Equal => GammaBranch::AtCritical,
            Ordering::Less => match compare(g, e.base) {
                Ordering::Greater => GammaBranch::Between,
                _ => GammaBranch::AtOrBelowBase,
            },
        }
    } else {
        match compare(g, e.gamma_c) {
            Ordering::Greater => GammaBranch::AboveGammaC,
            Ordering::Equal => GammaBranch::AtGammaC,
            Ordering::Less => GammaBranch::BelowGammaC,
        }
    }
}

/// Threshold weight with the data it was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold {
    pub value: f64,
    /// `inf g`, before dividing by the constant.
    pub inf_g: f64,
    /// `inf g - 1`, accurate for critical curves even when `inf g` rounds to 1.
    pub excess: Option<f64>,
    /// Minimizer of `g` when the infimum is attained in the interior.
    pub argmin: Option<f64>,
    pub closed_form: bool,
    pub branch: GammaBranch,
}

fn curve_params(problem: &Problem, weight: f64) -> Result<CurveParams> {
    CurveParams::for_problem(problem, weight)
}

/// Threshold `alpha(gamma)` for a validated problem.
pub fn threshold_alpha(problem: &Problem, constants: &Constants) -> Result<f64> {
    Ok(threshold_details(problem, constants, DEFAULT_TOL)?.value)
}

pub fn threshold_details(problem: &Problem, constants: &Constants, tol: f64) -> Result<Threshold> {
    let c = constants.weight(problem)?;
    let branch = gamma_branch(problem);
    let e = problem.exponents;
    let cp = curve_params(problem, 0.0)?;
    let closed = |inf_g: f64, excess: Option<f64>| Threshold {
        value: inf_g / c,
        inf_g,
        excess,
        argmin: None,
        closed_form: true,
        branch,
    };
    Ok(match branch {
        GammaBranch::AboveCritical => closed(0.0, Some(-1.0)),
        GammaBranch::AtCritical => {
            let inf_g = e.base / e.critical;
            closed(inf_g, Some(inf_g - 1.0))
        }
        GammaBranch::AtOrBelowBase => closed(1.0, Some(0.0)),
        GammaBranch::AboveGammaC => closed(0.0, None),
        GammaBranch::AtGammaC => closed(e.base / e.gamma_c, None),
        GammaBranch::Between => {
            let r = minimize_halfline(&ScalarCurve::g_excess(cp)?, tol)?;
            let inf_g = 1.0 + r.value;
            Threshold {
                value: inf_g / c,
                inf_g,
                excess: Some(r.value),
                argmin: r.argopt,
                closed_form: false,
                branch,
            }
        }
        GammaBranch::BelowGammaC => {
            let r = minimize_halfline(&ScalarCurve::g(cp), tol)?;
            Threshold {
                value: r.value / c,
                inf_g: r.value,
                excess: None,
                argmin: r.argopt,
                closed_form: false,
                branch,
            }
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub attained: bool,
    pub reason: Reason,
    #[serde(rename = "D")]
    pub d: f64,
    pub threshold: f64,
    pub t_star: Option<f64>,
    #[serde(rename = "closed_form_D")]
    pub closed_form_d: Option<f64>,
    /// `sup f` from the numeric optimizer.
    #[serde(rename = "numeric_D")]
    pub numeric_d: f64,
    pub regime: Regime,
    pub branch: GammaBranch,
    pub notes: Vec<String>,
}

/// `D` for a validated problem: the closed form where one applies, else `sup f`.
pub fn d_value(problem: &Problem, constants: &Constants) -> Result<f64> {
    Ok(classify(problem, constants)?.d)
}

pub fn classify(problem: &Problem, constants: &Constants) -> Result<Verdict> {
    classify_with_tol(problem, constants, DEFAULT_TOL)
}

fn tie(alpha: f64, threshold: f64) -> Ordering {
    if (alpha - threshold).abs() <= ALPHA_TIE_RTOL * threshold.abs() {
        Ordering::Equal
    } else if alpha < threshold {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

pub fn classify_with_tol(problem: &Problem, constants: &Constants, tol: f64) -> Result<Verdict> {
    let c = constants.weight(problem)?;
    let th = threshold_details(problem, constants, tol)?;
    let alpha = problem.alpha();
    let kappa = alpha * c;
    let cp = curve_params(problem, c)?;
    let opt = maximize_halfline(&ScalarCurve::f(cp), tol)?;
    let mut notes = Vec::new();
    if opt.marginal {
        notes.push(format!(
            "numeric maximum {:.17e} ties the boundary limit; verdict taken from the analytic table",
            opt.value
        ));
    }

    let mut v = Verdict {
        attained: false,
        reason: Reason::BelowThreshold,
        d: opt.value,
        threshold: th.value,
        t_star: None,
        closed_form_d: None,
        numeric_d: opt.value,
        regime: problem.regime,
        branch: th.branch,
        notes,
    };

    if alpha == 0.0 {
        v.reason = Reason::AlphaZero;
        v.closed_form_d = Some(1.0);
        v.d = 1.0;
        return Ok(v);
    }

    let side = tie(alpha, th.value);
    match th.branch {
        GammaBranch::AtOrBelowBase => {
            v.reason = Reason::ConvexityExclusion;
            v.closed_form_d = Some(kappa.max(1.0));
        }
        GammaBranch::AtCritical | GammaBranch::AtGammaC if side != Ordering::Greater => {
            v.reason = if th.branch == GammaBranch::AtCritical {
                Reason::AtThresholdCriticalGammaEqPstar
            } else {
                Reason::AtThresholdGammaEqGammaC
            };
            if side == Ordering::Less {
                v.reason = Reason::BelowThreshold;
            }
            v.closed_form_d = Some(1.0);
        }
        GammaBranch::Between | GammaBranch::BelowGammaC if side == Ordering::Less => {
            v.reason = Reason::BelowThreshold;
            v.closed_form_d = Some(1.0);
            if th.branch == GammaBranch::BelowGammaC {
                v.notes.push(
                    "D = 1 below the threshold follows from the proof of the subcritical classification"
                        .to_string(),
                );
            }
        }
        GammaBranch::Between | GammaBranch::BelowGammaC if side == Ordering::Equal => {
            v.attained = true;
            v.reason = Reason::UniqueInteriorMax;
            v.closed_form_d = Some(1.0);
            let t2 = match (th.argmin, th.branch) {
                (Some(t), _) => Some(t),
                (None, GammaBranch::Between) => m_root(&cp, ROOT_LO, ROOT_HI)?,
                (None, _) => None,
            };
            v.t_star = Some(t2.ok_or(Error::Unresolved("minimizer of g"))?);
        }
        GammaBranch::AtCritical => {
            v.attained = true;
            v.reason = Reason::UniqueInteriorMax;
            let pg = cp.pgamma;
            let t0 = (kappa / pg).powf(1.0 / (1.0 - pg)) - 1.0;
            v.t_star = Some(t0);
            v.closed_form_d = Some(f_curve(&cp, t0)?);
        }
        _ => {
            v.attained = true;
            v.reason = Reason::UniqueInteriorMax;
            v.t_star = Some(interior_argmax(&cp, &opt, th.branch)?);
        }
    }

    if let (true, Some(t)) = (v.attained, v.t_star) {
        let ft = f_curve(&cp, t)?;
        if ft > v.numeric_d {
            v.numeric_d = ft;
        }
    }
    v.d = v.closed_form_d.unwrap_or(v.numeric_d);

    if problem.regime.is_critical() && !problem.extremal_in_energy_space() {
        v.attained = false;
        v.reason = Reason::SobolevNotAttained;
        v.t_star = None;
    }
    Ok(v)
}

fn interior_argmax(cp: &CurveParams, opt: &OptResult, branch: GammaBranch) -> Result<f64> {
    if branch == GammaBranch::AboveCritical {
        if let Some(t) = h_root(cp, ROOT_LO, ROOT_HI)? {
            return Ok(t);
        }
    }
    if let Some(t) = opt.argopt {
        return Ok(t);
    }
    h_root(cp, ROOT_LO, ROOT_HI)?.ok_or(Error::Unresolved("maximizer of f"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdPoint {
    pub gamma: f64,
    pub threshold: f64,
    pub excess: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdCurve {
    pub points: Vec<ThresholdPoint>,
    pub non_increasing: bool,
    /// Strict decrease between consecutive grid points inside `(p, p*)`; `None` outside
    /// the critical regimes or when fewer than two grid points fall there.
    pub strictly_decreasing_between: Option<bool>,
}

/// Relative slack allowed when checking monotonicity of sampled thresholds.
pub const MONOTONE_RTOL: f64 = 1e-12;

/// `gamma -> alpha(gamma)` on a sorted positive grid.
pub fn threshold_curve(problem: &Problem, constants: &Constants, gammas: &[f64]) -> Result<ThresholdCurve> {
    if gammas.iter().any(|&g| !(g > 0.0 && g.is_finite())) || gammas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(crate::error::domain("gamma_grid", f64::NAN, "sorted, positive"));
    }
    let point = |&g: &f64| -> Result<(ThresholdPoint, GammaBranch)> {
        let p = problem.with_gamma(g)?;
        let th = threshold_details(&p, constants, DEFAULT_TOL)?;
        Ok((
            ThresholdPoint {
                gamma: g,
                threshold: th.value,
                excess: th.excess,
            },
            th.branch,
        ))
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<(ThresholdPoint, GammaBranch)> = {
        use rayon::prelude::*;
        gammas.par_iter().map(point).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<(ThresholdPoint, GammaBranch)> = gammas.iter().map(point).collect::<Result<_>>()?;

    let key = |p: &ThresholdPoint| p.excess.unwrap_or(p.threshold);
    let non_increasing = rows.windows(2).all(|w| {
        let (a, b) = (key(&w[0].0), key(&w[1].0));
        b <= a + MONOTONE_RTOL * a.abs()
    });
    let between: Vec<f64> = rows
        .iter()
        .filter(|r| r.1 == GammaBranch::Between)
        .map(|r| key(&r.0))
        .collect();
    let strictly_decreasing_between = (problem.regime.is_critical() && between.len() >= 2)
        .then(|| between.windows(2).all(|w| w[1] < w[0]));
    Ok(ThresholdCurve {
        points: rows.into_iter().map(|r| r.0).collect(),
        non_increasing,
        strictly_decreasing_between,
    })
}

/// One row of a gamma sweep at fixed alpha.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub gamma: f64,
    pub threshold: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub attained: bool,
}

/// Threshold and verdict at every gamma of a grid, in grid order.
pub fn sweep_gamma(problem: &Problem, constants: &Constants, gammas: &[f64]) -> Result<Vec<SweepRow>> {
    let row = |&g: &f64| -> Result<SweepRow> {
        let v = classify(&problem.with_gamma(g)?, constants)?;
        Ok(SweepRow {
            gamma: g,
            threshold: v.threshold,
            d: v.d,
            attained: v.attained,
        })
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        gammas.par_iter().map(row).collect()
    }
    #[cfg(not(feature = "parallel"))]
    gammas.iter().map(row).collect()
}
