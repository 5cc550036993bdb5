//! Property checks tying the curves, the classifier and the radial profiles together.
//!
//! Every check returns a [`CheckReport`] carrying its own tolerance. Inputs are
//! deterministic: the random profiles come from a fixed seed.

use serde::Serialize;

use crate::classify::{classify, threshold_alpha, threshold_curve, Constants, Reason};
use crate::constants::{sobolev_constant, DEFAULT_RESOLUTION};
use crate::curves::{f_curve, g_curve, h_factor, l_curve, m_factor, CurveParams, ScalarCurve};
use crate::error::Result;
use crate::extremal::{
    build_cut_u_star, build_u_star, evaluate_i, evaluate_j, lambda_from_tstar, normalize, normalized_dilation, norms,
    random_profiles, GridSpec, RadialProfile,
};
use crate::halfline::{maximize_halfline, DEFAULT_TOL};
use crate::params::{Exponent, Problem, ProblemParams, Target};

const MAX_DETAILS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub worst_violation: f64,
    pub tolerance: f64,
    pub n_cases: usize,
    /// Up to ten sampled failures.
    pub details: Vec<String>,
}

impl CheckReport {
    fn new(name: &str, tolerance: f64) -> Self {
        CheckReport {
            name: name.to_string(),
            passed: false,
            worst_violation: 0.0,
            tolerance,
            n_cases: 0,
            details: Vec::new(),
        }
    }

    /// Records one case; NaN violations count as infinite.
    fn record(&mut self, violation: f64, detail: impl FnOnce() -> String) {
        self.n_cases += 1;
        let v = if violation.is_nan() { f64::INFINITY } else { violation };
        if v > self.worst_violation {
            self.worst_violation = v;
        }
        if v > self.tolerance && self.details.len() < MAX_DETAILS {
            self.details.push(detail());
        }
    }

    fn fail(&mut self, detail: String) {
        self.record(f64::INFINITY, || detail);
    }

    fn finish(mut self) -> Self {
        self.passed = self.n_cases > 0 && self.worst_violation <= self.tolerance;
        self
    }
}

/// Inputs for the full suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub profiles: usize,
    /// `B_{2,2,4}`.
    pub gns_224: f64,
    /// Fractional constant used for every fractional cell; only `beta * S` matters.
    pub fractional: f64,
    pub resolution: usize,
}

impl SuiteConfig {
    pub fn new(gns_224: f64) -> Self {
        SuiteConfig {
            seed: 20240601,
            profiles: 1000,
            gns_224,
            fractional: 1.0,
            resolution: DEFAULT_RESOLUTION,
        }
    }
}

fn local(n: u32, p: f64, q: Target, gamma: f64, alpha: f64) -> Result<Problem> {
    Ok(Problem::new(ProblemParams::local(n, Exponent::from_f64(p), q, gamma, alpha))?)
}

fn fractional(n: u32, s: f64, q: Target, gamma: f64, beta: f64) -> Result<Problem> {
    Ok(Problem::new(ProblemParams::fractional(n, Exponent::from_f64(s), q, gamma, beta))?)
}

struct Cell {
    label: String,
    problem: Problem,
    constants: Constants,
    attained: bool,
    reason: Reason,
    d: Option<f64>,
}

/// Expected verdicts for a critical family. `base` is `p` (or 2), `crit` is `p*` (or
/// `2_s*`), `weight` is `S^{p*}` (or the fractional constant).
fn critical_cells(
    label: &str,
    make: &dyn Fn(f64, f64) -> Result<Problem>,
    constants: Constants,
    base: f64,
    crit: f64,
    weight: f64,
    in_space: bool,
    gammas: &[f64],
) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    let mut push = |gamma: f64, alpha: f64, attained: bool, reason: Reason, d: Option<f64>| -> Result<()> {
        cells.push(Cell {
            label: format!("{label} gamma={gamma} alpha={alpha:e}"),
            problem: make(gamma, alpha)?,
            constants,
            attained,
            reason,
            d,
        });
        Ok(())
    };
    let eq = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b;
    for &g in gammas {
        if !in_space {
            for k in [0.5, 2.0] {
                let alpha = k / weight;
                let d = (g <= base).then(|| k.max(1.0));
                push(g, alpha, false, Reason::SobolevNotAttained, d)?;
            }
            push(g, 0.0, false, Reason::AlphaZero, Some(1.0))?;
            continue;
        }
        if g < base || eq(g, base) {
            for k in [0.5, 1.0, 2.0] {
                push(g, k / weight, false, Reason::ConvexityExclusion, Some(k.max(1.0)))?;
            }
        } else if eq(g, crit) {
            let th = base / (crit * weight);
            push(g, 0.5 * th, false, Reason::BelowThreshold, Some(1.0))?;
            push(g, th, false, Reason::AtThresholdCriticalGammaEqPstar, Some(1.0))?;
            push(g, 2.0 * th, true, Reason::UniqueInteriorMax, None)?;
        } else if g < crit {
            let th = threshold_alpha(&make(g, 1.0)?, &constants)?;
            push(g, 0.5 * th, false, Reason::BelowThreshold, Some(1.0))?;
            push(g, th, true, Reason::UniqueInteriorMax, Some(1.0))?;
            push(g, 2.0 * th, true, Reason::UniqueInteriorMax, None)?;
        } else {
            for k in [0.5, 1.0, 2.0] {
                push(g, k / weight, true, Reason::UniqueInteriorMax, None)?;
            }
        }
        push(g, 0.0, false, Reason::AlphaZero, Some(1.0))?;
    }
    Ok(cells)
}

/// Expected verdicts for a subcritical family with scaling exponent `gamma_c`.
fn subcritical_cells(
    label: &str,
    make: &dyn Fn(f64, f64) -> Result<Problem>,
    constants: Constants,
    base: f64,
    gamma_c: f64,
    weight: f64,
    gammas: &[f64],
) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    for &g in gammas {
        let mut rows = Vec::new();
        if (g - gamma_c).abs() <= 1e-12 * gamma_c {
            let th = base / (gamma_c * weight);
            rows.push((0.5 * th, false, Reason::BelowThreshold, Some(1.0)));
            rows.push((th, false, Reason::AtThresholdGammaEqGammaC, Some(1.0)));
            rows.push((2.0 * th, true, Reason::UniqueInteriorMax, None));
        } else if g < gamma_c {
            let th = threshold_alpha(&make(g, 1.0)?, &constants)?;
            rows.push((0.5 * th, false, Reason::BelowThreshold, Some(1.0)));
            rows.push((th, true, Reason::UniqueInteriorMax, Some(1.0)));
            rows.push((2.0 * th, true, Reason::UniqueInteriorMax, None));
        } else {
            for k in [0.5, 1.0, 2.0] {
                rows.push((k / weight, true, Reason::UniqueInteriorMax, None));
            }
        }
        rows.push((0.0, false, Reason::AlphaZero, Some(1.0)));
        for (alpha, attained, reason, d) in rows {
            cells.push(Cell {
                label: format!("{label} gamma={g} alpha={alpha:e}"),
                problem: make(g, alpha)?,
                constants,
                attained,
                reason,
                d,
            });
        }
    }
    Ok(cells)
}

fn truth_table_cells(cfg: &SuiteConfig) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    // Local critical, p^2 < N.
    let s52 = sobolev_constant(5, 2.0, cfg.resolution)?.value;
    cells.extend(critical_cells(
        "local N=5 p=2 q=p*",
        &|g, a| local(5, 2.0, Target::Critical, g, a),
        Constants::sobolev(s52),
        2.0,
        10.0 / 3.0,
        s52.powf(10.0 / 3.0),
        true,
        &[1.0, 2.0, 2.5, 3.0, 10.0 / 3.0, 4.0, 8.0],
    )?);
    // Local critical, p^2 > N and p^2 = N.
    for (n, pstar) in [(3u32, 6.0), (4, 4.0)] {
        let s = sobolev_constant(n, 2.0, cfg.resolution)?.value;
        cells.extend(critical_cells(
            &format!("local N={n} p=2 q=p*"),
            &|g, a| local(n, 2.0, Target::Critical, g, a),
            Constants::sobolev(s),
            2.0,
            pstar,
            s.powf(pstar),
            false,
            &[1.0, 2.0, 3.0, pstar, 8.0],
        )?);
    }
    // Local subcritical.
    cells.extend(subcritical_cells(
        "local N=2 p=2 q=4",
        &|g, a| local(2, 2.0, Target::Value(4.0.into()), g, a),
        Constants::gns(cfg.gns_224),
        2.0,
        2.0,
        cfg.gns_224,
        &[1.0, 1.5, 2.0, 3.0, 5.0],
    )?);
    // Fractional critical, 4s < N and 4s >= N.
    let fs = cfg.fractional;
    cells.extend(critical_cells(
        "fractional N=3 s=1/2 q=2_s*",
        &|g, b| fractional(3, 0.5, Target::Critical, g, b),
        Constants::fractional(fs),
        2.0,
        3.0,
        fs,
        true,
        &[1.0, 2.0, 2.5, 3.0, 4.0],
    )?);
    cells.extend(critical_cells(
        "fractional N=2 s=1/2 q=2_s*",
        &|g, b| fractional(2, 0.5, Target::Critical, g, b),
        Constants::fractional(fs),
        2.0,
        4.0,
        fs,
        false,
        &[1.0, 3.0, 4.0, 5.0],
    )?);
    // Fractional subcritical: gamma_{s,q} = N(q-2)/(2s) = 3/2.
    cells.extend(subcritical_cells(
        "fractional N=3 s=1/2 q=5/2",
        &|g, b| fractional(3, 0.5, Target::Value(2.5.into()), g, b),
        Constants::fractional(fs),
        2.0,
        1.5,
        fs,
        &[1.0, 1.5, 2.0],
    )?);
    Ok(cells)
}

/// Instantiates every regime, gamma branch and alpha side with representative
/// parameters and compares the verdict (attained, reason, closed-form `D`) with the
/// theorem table.
pub fn run_truth_table(cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut rep = CheckReport::new("truth_table", 0.0);
    for cell in truth_table_cells(cfg)? {
        match classify(&cell.problem, &cell.constants) {
            Ok(v) => {
                let mut bad = Vec::new();
                if v.attained != cell.attained {
                    bad.push(format!("attained {} expected {}", v.attained, cell.attained));
                }
                if v.reason != cell.reason {
                    bad.push(format!("reason {:?} expected {:?}", v.reason, cell.reason));
                }
                if let Some(d) = cell.d {
                    if (v.d - d).abs() > 1e-12 * d {
                        bad.push(format!("D {:e} expected {d:e}", v.d));
                    }
                }
                let kappa = cell.problem.alpha() * cell.constants.weight(&cell.problem)?;
                let floor = if cell.problem.regime.is_critical() { kappa.max(1.0) } else { 1.0 };
                if v.d < floor * (1.0 - 1e-12) {
                    bad.push(format!("D {:e} below max(1, kappa) = {floor:e}", v.d));
                }
                rep.record(bad.len() as f64, || format!("{}: {}", cell.label, bad.join("; ")));
            }
            Err(e) => rep.fail(format!("{}: {e}", cell.label)),
        }
    }
    Ok(rep.finish())
}

/// Shared data for the profile checks: `N = 5`, `p = 2`, critical.
struct Critical52 {
    s: f64,
    weight: f64,
    u: RadialProfile,
}

impl Critical52 {
    const N: u32 = 5;
    const P: f64 = 2.0;
    const Q: f64 = 10.0 / 3.0;

    fn new(resolution: usize) -> Result<Self> {
        let s = sobolev_constant(Self::N, Self::P, resolution)?.value;
        Ok(Critical52 {
            s,
            weight: s.powf(Self::Q),
            u: build_u_star(Self::N, Self::P, &GridSpec::default())?,
        })
    }

    fn problem(&self, gamma: f64, alpha: f64) -> Result<Problem> {
        local(Self::N, Self::P, Target::Critical, gamma, alpha)
    }

    fn curve(&self, problem: &Problem) -> Result<CurveParams> {
        CurveParams::for_problem(problem, self.weight)
    }
}

const ENVELOPE_TOL: f64 = 1e-8;

/// `J(u) <= f(t(u))`, `J(u) <= D` and `I(u) >= g(t(u)) / S^{p*}` on seeded random
/// profiles, for a few `(gamma, alpha)`.
pub fn run_envelope(cfg: &SuiteConfig) -> Result<CheckReport> {
    let base = Critical52::new(cfg.resolution)?;
    let mut rep = CheckReport::new("envelope", ENVELOPE_TOL);
    let profiles = random_profiles(Critical52::N, cfg.profiles, cfg.seed, 64)?;
    let settings = [(3.0, 2.0), (4.0, 0.5), (10.0 / 3.0, 1.0), (1.5, 3.0)];
    for (i, u) in profiles.iter().enumerate() {
        let (gamma, k) = settings[i % settings.len()];
        let prob = base.problem(gamma, k / base.weight)?;
        let cp = base.curve(&prob)?;
        let d = classify(&prob, &Constants::sobolev(base.s))?.d;
        let w = normalize(u, Critical52::P, Critical52::Q, gamma)?;
        let t = norms(&w, Critical52::P, Critical52::Q)?.t_ratio(gamma);
        let j = evaluate_j(&w, &prob)?;
        let f = f_curve(&cp, t)?;
        rep.record(j - f, || format!("profile {i} gamma={gamma}: J={j:e} f(t)={f:e}"));
        rep.record(j - d, || format!("profile {i} gamma={gamma}: J={j:e} D={d:e}"));
        let ival = evaluate_i(&w, &prob)?;
        let g = g_curve(&cp, t)? / base.weight;
        rep.record((g - ival) / g, || format!("profile {i} gamma={gamma}: I={ival:e} g/S={g:e}"));
    }
    Ok(rep.finish())
}

const EQUALITY_TOL: f64 = 1e-6;

/// `|J(w_lambda) - f(t(lambda))| / f` on a 50-point log grid `lambda in [1e-4, 1e4]`.
pub fn run_equality_family(cfg: &SuiteConfig) -> Result<CheckReport> {
    let base = Critical52::new(cfg.resolution)?;
    let mut rep = CheckReport::new("equality_family", EQUALITY_TOL);
    let nm = norms(&base.u, Critical52::P, Critical52::Q)?;
    for (gamma, k) in [(3.0, 2.0), (4.0, 1.0)] {
        let prob = base.problem(gamma, k / base.weight)?;
        let cp = base.curve(&prob)?;
        for i in 0..50 {
            let lambda = 10f64.powf(-4.0 + 8.0 * i as f64 / 49.0);
            let w = normalized_dilation(&base.u, &nm, lambda, gamma)?;
            let t = lambda.powf(gamma / Critical52::N as f64) * nm.t_ratio(gamma);
            let j = evaluate_j(&w, &prob)?;
            let f = f_curve(&cp, t)?;
            rep.record((j - f).abs() / f, || format!("gamma={gamma} lambda={lambda:e}: J={j:e} f={f:e}"));
        }
    }
    Ok(rep.finish())
}

/// When the classifier reports a maximizer, `J(w_{lambda(t_star)}) = D`.
pub fn run_maximizer_check(cfg: &SuiteConfig) -> Result<CheckReport> {
    let base = Critical52::new(cfg.resolution)?;
    let mut rep = CheckReport::new("maximizer", EQUALITY_TOL);
    let nm = norms(&base.u, Critical52::P, Critical52::Q)?;
    let k = Constants::sobolev(base.s);
    let mut cases = vec![(4.0, 1.0 / base.weight), (8.0, 0.5 / base.weight), (3.0, 2.0 / base.weight)];
    let pstar = Critical52::Q;
    cases.push((pstar, 2.0 * Critical52::P / (pstar * base.weight)));
    let th = threshold_alpha(&base.problem(3.0, 1.0)?, &k)?;
    cases.push((3.0, th));
    for (gamma, alpha) in cases {
        let prob = base.problem(gamma, alpha)?;
        let v = classify(&prob, &k)?;
        let Some(t) = v.t_star.filter(|_| v.attained) else {
            rep.fail(format!("gamma={gamma} alpha={alpha:e}: no maximizer reported"));
            continue;
        };
        let lambda = lambda_from_tstar(t, &nm, gamma, Critical52::N)?;
        let w = normalized_dilation(&base.u, &nm, lambda, gamma)?;
        let j = evaluate_j(&w, &prob)?;
        rep.record((j - v.d).abs() / v.d, || format!("gamma={gamma} alpha={alpha:e}: J={j:e} D={:e}", v.d));
    }
    Ok(rep.finish())
}

/// Truncated Aubin–Talenti family for `N = 3`, `p = 2`, `gamma = 8`, `alpha = 1`:
/// the best `J` over dilations at `R in {10, 100, 1000}` increases, stays below `D`
/// and ends within `1e-2 D`. The violation is the final relative gap (or infinite if
/// the sequence is not increasing or exceeds `D`).
pub fn run_truncation_check(cfg: &SuiteConfig) -> Result<CheckReport> {
    let (n, p, gamma, alpha) = (3u32, 2.0, 8.0, 1.0);
    let pstar = 6.0;
    let s = sobolev_constant(n, p, cfg.resolution)?.value;
    let prob = local(n, p, Target::Critical, gamma, alpha)?;
    let d = classify(&prob, &Constants::sobolev(s))?.d;
    let mut rep = CheckReport::new("truncation", 1e-2);
    let mut prev = f64::NEG_INFINITY;
    let mut gap = f64::INFINITY;
    for r_cut in [10.0, 1e2, 1e3] {
        let u = build_cut_u_star(n, p, r_cut, &GridSpec::default())?;
        let nm = norms(&u, p, pstar)?;
        let s_r = nm.lq / nm.grad_lp;
        let cp = CurveParams::for_problem(&prob, s_r.powf(pstar))?;
        let opt = maximize_halfline(&ScalarCurve::f(cp), DEFAULT_TOL)?;
        let Some(t) = opt.argopt else {
            rep.fail(format!("R={r_cut}: no interior maximum"));
            continue;
        };
        let lambda = lambda_from_tstar(t, &nm, gamma, n)?;
        let w = normalized_dilation(&u, &nm, lambda, gamma)?;
        let j = evaluate_j(&w, &prob)?;
        gap = (d - j) / d;
        if !(j > prev) || j > d {
            rep.fail(format!("R={r_cut}: J={j:e} previous {prev:e} D={d:e}"));
        }
        prev = j;
    }
    rep.record(gap, || format!("final gap {gap:e}"));
    Ok(rep.finish())
}

fn sign_agrees(factor: f64, fd: f64) -> bool {
    (factor > 0.0) == (fd > 0.0)
}

/// Sign of `h` against central differences of `f` in `ln t`, and of `m` against
/// central differences of `l` in `s`, on 10^4 points in total. Points within relative
/// `1e-5` of a sign change of the factor are skipped, as are points where the
/// difference is below the rounding floor.
pub fn run_derivative_checks() -> Result<CheckReport> {
    let mut rep = CheckReport::new("derivative_signs", 0.0);
    let crit = |gamma: f64, kappa: f64| {
        let pg = 2.0 / gamma;
        let b = (10.0 / 3.0) / gamma;
        CurveParams::new(b, b, pg, kappa)
    };
    let sub = |gamma: f64, kappa: f64| CurveParams::new(4.0 / gamma, 2.0 / gamma, 2.0 / gamma, kappa);
    let h_curves = [crit(4.0, 2.0)?, crit(10.0 / 3.0, 1.2)?, crit(3.0, 1.5)?, sub(3.0, 1.0)?, sub(1.5, 3.0)?];
    let m_curves = [crit(3.0, 1.0)?, crit(10.0 / 3.0, 1.0)?, crit(2.5, 1.0)?, sub(1.5, 1.0)?, sub(1.0, 1.0)?];
    let per = 1000;
    let eps = f64::EPSILON;
    for cp in &h_curves {
        for i in 0..per {
            let y = (-3.0 + 6.0 * i as f64 / (per - 1) as f64) * std::f64::consts::LN_10;
            let t = y.exp();
            let h = h_factor(cp, t)?;
            if !sign_agrees(h_factor(cp, t * (1.0 - 1e-5))?, h_factor(cp, t * (1.0 + 1e-5))?) {
                continue;
            }
            let dy = 1e-4;
            let fp = f_curve(cp, (y + dy).exp())?;
            let fm = f_curve(cp, (y - dy).exp())?;
            if (fp - fm).abs() <= 1e3 * eps * fp.abs().max(fm.abs()) {
                continue;
            }
            rep.record(if sign_agrees(h, fp - fm) { 0.0 } else { 1.0 }, || {
                format!("h at t={t:e}: h={h:e} df={:e} params {cp:?}", fp - fm)
            });
        }
    }
    for cp in &m_curves {
        for i in 0..per {
            let s = 1e-3 + (1.0 - 2e-3) * i as f64 / (per - 1) as f64;
            let m = m_factor(cp, s)?;
            if !sign_agrees(m_factor(cp, s * (1.0 - 1e-5))?, m_factor(cp, s * (1.0 + 1e-5))?) {
                continue;
            }
            let ds = 1e-6 * s.min(1.0 - s);
            let lp = l_curve(cp, s + ds)?;
            let lm = l_curve(cp, s - ds)?;
            if (lp - lm).abs() <= 1e3 * eps * lp.abs().max(lm.abs()) {
                continue;
            }
            rep.record(if sign_agrees(m, lp - lm) { 0.0 } else { 1.0 }, || {
                format!("m at s={s}: m={m:e} dl={:e} params {cp:?}", lp - lm)
            });
        }
    }
    Ok(rep.finish())
}

const MONOTONE_TOL: f64 = 1e-6;

/// `alpha(gamma)` on 200 points of `[0.5, p*]` for `N = 5`, `p = 2`: non-increasing,
/// strictly decreasing on `(p, p*)`, equal to `S^{-p*}` on `(0, p]`, with limits
/// `S^{-p*}` at `p` and `p/(p* S^{p*})` at `p*`, and gaps `|alpha(gamma +- delta) -
/// alpha(gamma)|` shrinking as `delta` runs through `1e-2, 1e-3, 1e-4`.
pub fn run_monotonicity_scan(cfg: &SuiteConfig) -> Result<CheckReport> {
    let base = Critical52::new(cfg.resolution)?;
    let k = Constants::sobolev(base.s);
    let (p, pstar) = (Critical52::P, Critical52::Q);
    let mut rep = CheckReport::new("threshold_monotonicity", MONOTONE_TOL);
    let grid: Vec<f64> = (0..200).map(|i| 0.5 + (pstar - 0.5) * i as f64 / 199.0).collect();
    let grid: Vec<f64> = grid.into_iter().take(199).chain([pstar]).collect();
    let proto = base.problem(1.0, 1.0)?;
    let tc = threshold_curve(&proto, &k, &grid)?;
    if !tc.non_increasing {
        rep.fail("threshold curve increases somewhere".to_string());
    }
    if tc.strictly_decreasing_between != Some(true) {
        rep.fail(format!("strict decrease on (p, p*): {:?}", tc.strictly_decreasing_between));
    }
    let low = 1.0 / base.weight;
    for pt in tc.points.iter().filter(|pt| pt.gamma <= p) {
        rep.record((pt.threshold - low).abs() / low, || format!("gamma={}: {:e} vs {low:e}", pt.gamma, pt.threshold));
    }
    let th = |g: f64| threshold_alpha(&base.problem(g, 1.0)?, &k);
    let top = p / (pstar * base.weight);
    let mut last = (f64::INFINITY, f64::INFINITY);
    for delta in [1e-2, 1e-4, 1e-6, 1e-8] {
        let near_p = (th(p + delta)? - low).abs() / low;
        let near_top = (th(pstar - delta)? - top).abs() / top;
        if near_p > last.0 || near_top > last.1 {
            rep.fail(format!("limit gap grows at delta={delta:e}: {near_p:e}, {near_top:e}"));
        }
        last = (near_p, near_top);
    }
    rep.record(last.0, || format!("gamma -> p gap {:e}", last.0));
    rep.record(last.1, || format!("gamma -> p* gap {:e}", last.1));
    for g in [2.5, 3.0, 3.2] {
        let mut prev = f64::INFINITY;
        for delta in [1e-2, 1e-3, 1e-4] {
            let jump = (th(g + delta)? - th(g - delta)?).abs() / th(g)?;
            if !(jump < prev) {
                rep.fail(format!("continuity probe at gamma={g}, delta={delta:e}: {jump:e} after {prev:e}"));
            }
            prev = jump;
            rep.n_cases += 1;
        }
    }
    Ok(rep.finish())
}

/// All checks in a fixed order.
pub fn run_all(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    Ok(vec![
        run_truth_table(cfg)?,
        run_envelope(cfg)?,
        run_equality_family(cfg)?,
        run_maximizer_check(cfg)?,
        run_truncation_check(cfg)?,
        run_derivative_checks()?,
        run_monotonicity_scan(cfg)?,
    ])
}
