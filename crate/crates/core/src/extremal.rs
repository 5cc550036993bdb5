//! Radial profiles: the Aubin–Talenti function `u*`, the normalized dilations `w_lambda`,
//! cut-off versions `u_{*,R}`, seeded random test functions, their norms and the
//! functionals `J` and `I`.
//!
//! Profiles live on geometric grids. Integrals `int |v|^e r^{N-1} dr` are taken in
//! `x = ln r` by composite Simpson at two step sizes combined by Richardson
//! extrapolation, plus power-law corrections for `(0, r_0)` and, for algebraic tails,
//! `(r_M, inf)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::{classify, Constants};
use crate::constants::sphere_area;
use crate::error::{domain, Error, Result};
use crate::params::{Operator, Problem, Regime};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tail {
    /// `u(r) ~ C r^-rate` beyond the last grid point.
    Algebraic { rate: f64 },
    /// `u = 0` for `r >= support`.
    Compact { support: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeSource {
    Analytic,
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub n: u32,
    /// Geometric grid `r_0 < ... < r_M`.
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub deriv: Vec<f64>,
    pub derivative: DerivativeSource,
    pub tail: Tail,
}

/// Geometric radial grid: `r_min`, points per decade, and an upper end chosen from the
/// tail decay unless given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub r_min: f64,
    pub per_decade: usize,
    /// Relative size of the analytic tail correction that fixes the upper end.
    pub tail_tol: f64,
    pub r_max: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            r_min: 1e-6,
            per_decade: 128,
            tail_tol: 1e-14,
            r_max: None,
        }
    }
}

const R_MAX_CAP: f64 = 1e250;

impl GridSpec {
    fn check(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_min < 1.0) {
            return Err(domain("r_min", self.r_min, "0 < r_min < 1"));
        }
        if self.per_decade < 4 {
            return Err(domain("per_decade", self.per_decade as f64, ">= 4"));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return Err(domain("tail_tol", self.tail_tol, "0 < tail_tol < 1"));
        }
        Ok(())
    }

    /// Grid from `r_min` to at least `r_max` with a step `ln 10 / per_decade` and a
    /// number of intervals divisible by 4.
    fn build(&self, r_max: f64) -> Vec<f64> {
        let h = std::f64::consts::LN_10 / self.per_decade as f64;
        let span = (r_max / self.r_min).ln();
        let intervals = ((span / h).ceil() as usize).div_ceil(4) * 4;
        let l0 = self.r_min.ln();
        (0..=intervals).map(|i| (l0 + h * i as f64).exp()).collect()
    }
}

/// Integral `int_0^inf |v|^e r^{N-1} dr` (without the sphere factor) with error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moment {
    pub value: f64,
    pub err: f64,
}

fn log_step(grid: &[f64]) -> f64 {
    (grid[grid.len() - 1] / grid[0]).ln() / (grid.len() - 1) as f64
}

fn simpson(f: &[f64], h: f64, stride: usize) -> f64 {
    let m = (f.len() - 1) / stride;
    let mut s = f[0] + f[m * stride];
    for k in 1..m {
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f[k * stride];
    }
    s * h * stride as f64 / 3.0
}

impl RadialProfile {
    fn check(&self) -> Result<()> {
        let g = &self.grid;
        if g.len() < 9
            || (g.len() - 1) % 4 != 0
            || g[0] <= 0.0
            || g.windows(2).any(|w| !(w[1] > w[0]))
            || self.values.len() != g.len()
            || self.deriv.len() != g.len()
        {
            return Err(Error::BadGrid);
        }
        let h = log_step(g);
        if g.windows(2).any(|w| ((w[1] / w[0]).ln() - h).abs() > 1e-9 * h.max(1.0)) {
            return Err(Error::BadGrid);
        }
        if self.values.iter().chain(self.deriv.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { at: f64::NAN });
        }
        Ok(())
    }

    /// Profile from samples on a geometric grid, with the derivative from 4th-order
    /// central differences in `ln r`.
    pub fn from_samples(n: u32, grid: Vec<f64>, values: Vec<f64>, tail: Tail) -> Result<Self> {
        if grid.len() != values.len() || grid.len() < 9 {
            return Err(Error::BadGrid);
        }
        let h = log_step(&grid);
        let deriv = log_fd(&values, h)
            .into_iter()
            .zip(grid.iter())
            .map(|(d, r)| d / r)
            .collect();
        let p = RadialProfile {
            n,
            grid,
            values,
            deriv,
            derivative: DerivativeSource::FiniteDifference,
            tail,
        };
        p.check()?;
        Ok(p)
    }

    /// `int |u|^e r^{N-1} dr` (`grad = false`) or `int |u'|^e r^{N-1} dr`.
    pub fn moment(&self, e: f64, grad: bool) -> Result<Moment> {
        let nf = self.n as f64;
        let v = if grad { &self.deriv } else { &self.values };
        let f: Vec<f64> = v
            .iter()
            .zip(self.grid.iter())
            .map(|(&u, &r)| {
                if u == 0.0 {
                    0.0
                } else {
                    (e * u.abs().ln() + nf * r.ln()).exp()
                }
            })
            .collect();
        let h = log_step(&self.grid);
        let fine = simpson(&f, h, 1);
        let coarse = simpson(&f, h, 2);
        let body = fine + (fine - coarse) / 15.0;
        let err = (fine - coarse).abs() / 15.0;

        let head = if f[0] == 0.0 {
            0.0
        } else {
            let mut sigma = (f[1] / f[0]).ln() / h;
            if !(sigma > 0.0) {
                // Differenced gradients near r_min are rounding noise; |u'| is bounded there.
                if grad && self.derivative == DerivativeSource::FiniteDifference {
                    sigma = nf;
                } else {
                    return Err(domain("head exponent", sigma, "> 0"));
                }
            }
            f[0] / sigma
        };
        let m = f.len() - 1;
        let tail = match self.tail {
            Tail::Compact { .. } => 0.0,
            Tail::Algebraic { rate } => {
                let decay = if grad { e * (rate + 1.0) } else { e * rate };
                let tau = decay - nf;
                if !(tau > 0.0) {
                    return Err(Error::Divergent { exponent: e, rate });
                }
                f[m] / tau
            }
        };
        let value = body + head + tail;
        Ok(Moment {
            value,
            err: err + 1e-3 * (head + tail).abs(),
        })
    }

    /// Same function on the dilated grid `r -> r/mu`, times `scale`:
    /// `v(r) = scale * u(mu r)`.
    pub fn dilate(&self, mu: f64, scale: f64) -> RadialProfile {
        RadialProfile {
            n: self.n,
            grid: self.grid.iter().map(|r| r / mu).collect(),
            values: self.values.iter().map(|v| scale * v).collect(),
            deriv: self.deriv.iter().map(|d| scale * mu * d).collect(),
            derivative: self.derivative,
            tail: match self.tail {
                Tail::Compact { support } => Tail::Compact {
                    support: support / mu,
                },
                t => t,
            },
        }
    }

    /// Linear interpolation in `ln r`; zero beyond a compact support, power law in
    /// an algebraic tail.
    pub fn eval(&self, r: f64) -> f64 {
        let g = &self.grid;
        let m = g.len() - 1;
        if r <= g[0] {
            return self.values[0];
        }
        if r >= g[m] {
            return match self.tail {
                Tail::Compact { .. } => 0.0,
                Tail::Algebraic { rate } => self.values[m] * (g[m] / r).powf(rate),
            };
        }
        let h = log_step(g);
        let x = (r / g[0]).ln() / h;
        let i = (x.floor() as usize).min(m - 1);
        let th = x - i as f64;
        self.values[i] * (1.0 - th) + self.values[i + 1] * th
    }
}

/// 4th-order central differences of `v` with respect to a uniform variable of step `h`,
/// one-sided 4th-order stencils at the two first and two last points.
fn log_fd(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * h);
    }
    let fwd = |i: usize| {
        (-25.0 * v[i] + 48.0 * v[i + 1] - 36.0 * v[i + 2] + 16.0 * v[i + 3] - 3.0 * v[i + 4]) / (12.0 * h)
    };
    let bwd = |i: usize| {
        (25.0 * v[i] - 48.0 * v[i - 1] + 36.0 * v[i - 2] - 16.0 * v[i - 3] + 3.0 * v[i - 4]) / (12.0 * h)
    };
    d[0] = fwd(0);
    d[1] = fwd(1);
    d[n - 2] = bwd(n - 2);
    d[n - 1] = bwd(n - 1);
    d
}

fn check_np(n: u32, p: f64) -> Result<()> {
    if n < 2 {
        return Err(domain("N", n as f64, "N >= 2"));
    }
    if !(p > 1.0 && p < n as f64) {
        return Err(domain("p", p, "1 < p < N"));
    }
    Ok(())
}

/// `u*(r)`, `u*'(r)`.
pub fn u_star(n: u32, p: f64, r: f64) -> (f64, f64) {
    let nf = n as f64;
    let pp = p / (p - 1.0);
    let k = (nf - p) / p;
    let base = 1.0 + r.powf(pp);
    let u = base.powf(-k);
    let du = -((nf - p) / (p - 1.0)) * r.powf(1.0 / (p - 1.0)) * base.powf(-k - 1.0);
    (u, du)
}

/// Decay rate `(N-p)/(p-1)` of `u*`.
pub fn u_star_rate(n: u32, p: f64) -> f64 {
    (n as f64 - p) / (p - 1.0)
}

/// `u*` on a geometric grid. The upper end is chosen so that the power-law tail
/// correction of the slowest decaying moment (`|u|^p`, `|u'|^p` or `|u|^{p*}`,
/// whichever converge) is below `tail_tol` relative to `u(r_max)`-scale, capped at
/// `1e250`.
pub fn build_u_star(n: u32, p: f64, spec: &GridSpec) -> Result<RadialProfile> {
    check_np(n, p)?;
    spec.check()?;
    let nf = n as f64;
    let rate = u_star_rate(n, p);
    let r_max = spec.r_max.unwrap_or_else(|| {
        let pstar = nf * p / (nf - p);
        let taus = [p * rate - nf, p * (rate + 1.0) - nf, pstar * rate - nf];
        let tau = taus
            .iter()
            .copied()
            .filter(|&t| t > 0.0)
            .fold(f64::INFINITY, f64::min);
        // The first correction to the power-law tail is O(r^{-p/(p-1)}).
        let rel = spec.tail_tol.ln() / -(p / (p - 1.0)).min(tau);
        rel.exp().clamp(1e4, R_MAX_CAP)
    });
    let grid = spec.build(r_max);
    let (values, deriv): (Vec<f64>, Vec<f64>) = grid.iter().map(|&r| u_star(n, p, r)).unzip();
    let prof = RadialProfile {
        n,
        grid,
        values,
        deriv,
        derivative: DerivativeSource::Analytic,
        tail: Tail::Algebraic { rate },
    };
    prof.check()?;
    Ok(prof)
}

/// `||u||_p`, `||grad u||_p`, `||u||_q` with their error bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Norms {
    pub p: f64,
    pub q: f64,
    pub lp: f64,
    pub grad_lp: f64,
    pub lq: f64,
    pub lp_err: f64,
    pub grad_lp_err: f64,
    pub lq_err: f64,
}

impl Norms {
    /// `(||grad u||_p^gamma + ||u||_p^gamma)^{1/gamma}`.
    pub fn w_norm(&self, gamma: f64) -> f64 {
        (self.grad_lp.powf(gamma) + self.lp.powf(gamma)).powf(1.0 / gamma)
    }

    /// `t(u) = ||grad u||_p^gamma / ||u||_p^gamma`.
    pub fn t_ratio(&self, gamma: f64) -> f64 {
        (self.grad_lp / self.lp).powf(gamma)
    }
}

fn norm_from_moment(m: Moment, e: f64, omega: f64) -> (f64, f64) {
    let v = (omega * m.value).powf(1.0 / e);
    (v, v * m.err / m.value.abs().max(f64::MIN_POSITIVE) / e)
}

pub fn norms(profile: &RadialProfile, p: f64, q: f64) -> Result<Norms> {
    let omega = sphere_area(profile.n);
    let (lp, lp_err) = norm_from_moment(profile.moment(p, false)?, p, omega);
    let (grad_lp, grad_lp_err) = norm_from_moment(profile.moment(p, true)?, p, omega);
    let (lq, lq_err) = norm_from_moment(profile.moment(q, false)?, q, omega);
    Ok(Norms {
        p,
        q,
        lp,
        grad_lp,
        lq,
        lp_err,
        grad_lp_err,
        lq_err,
    })
}

/// `w_lambda(x) = lambda^{1/p} u(lambda^{1/N} x) / (||u||_p^gamma + lambda^{gamma/N} ||grad u||_p^gamma)^{1/gamma}`.
pub fn normalized_dilation(profile: &RadialProfile, base_norms: &Norms, lambda: f64, gamma: f64) -> Result<RadialProfile> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(domain("lambda", lambda, "finite, > 0"));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(domain("gamma", gamma, "finite, > 0"));
    }
    let nf = profile.n as f64;
    let p = base_norms.p;
    let denom = (base_norms.lp.powf(gamma) + lambda.powf(gamma / nf) * base_norms.grad_lp.powf(gamma)).powf(1.0 / gamma);
    Ok(profile.dilate(lambda.powf(1.0 / nf), lambda.powf(1.0 / p) / denom))
}

/// `w_lambda` built from `u*`; requires `p^2 < N`.
pub fn build_w_lambda(u_star_norms: &Norms, n: u32, lambda: f64, gamma: f64, spec: &GridSpec) -> Result<RadialProfile> {
    let p = u_star_norms.p;
    check_np(n, p)?;
    if p * p >= n as f64 {
        return Err(Error::Divergent {
            exponent: p,
            rate: u_star_rate(n, p),
        });
    }
    let u = build_u_star(n, p, spec)?;
    normalized_dilation(&u, u_star_norms, lambda, gamma)
}

/// `lambda = t^{N/gamma} (||u||_p / ||grad u||_p)^N`.
pub fn lambda_from_tstar(t_star: f64, norms: &Norms, gamma: f64, n: u32) -> Result<f64> {
    if !(t_star > 0.0 && t_star.is_finite()) {
        return Err(domain("t_star", t_star, "finite, > 0"));
    }
    let nf = n as f64;
    Ok(t_star.powf(nf / gamma) * (norms.lp / norms.grad_lp).powf(nf))
}

/// `phi(chi) = 1 - (6 chi^5 - 15 chi^4 + 10 chi^3)` on `[0, 1]` and its derivative.
pub fn cutoff(chi: f64) -> (f64, f64) {
    if chi <= 0.0 {
        (1.0, 0.0)
    } else if chi >= 1.0 {
        (0.0, 0.0)
    } else {
        let c3 = chi * chi * chi;
        let v = 1.0 - c3 * (10.0 + chi * (-15.0 + 6.0 * chi));
        let d = -30.0 * chi * chi * (1.0 - chi) * (1.0 - chi);
        (v, d)
    }
}

/// `u_{*,R}(r) = u*(r) phi(r/R - 1)`, supported in `r <= 2R`, on a geometric grid
/// with nodes at `R` and `2R`.
pub fn build_cut_u_star(n: u32, p: f64, r_cut: f64, spec: &GridSpec) -> Result<RadialProfile> {
    check_np(n, p)?;
    spec.check()?;
    if !(r_cut > 0.0 && r_cut.is_finite()) {
        return Err(domain("R", r_cut, "finite, > 0"));
    }
    // Step ln2/m with m a multiple of 4, at least as fine as per_decade.
    let m = ((spec.per_decade as f64 * std::f64::consts::LOG10_2).ceil() as usize).div_ceil(4) * 4;
    let h = std::f64::consts::LN_2 / m as f64;
    let octaves = ((2.0 * r_cut / spec.r_min).log2().ceil() as usize).max(2);
    let top = (2.0 * r_cut).ln();
    let count = octaves * m;
    let grid: Vec<f64> = (0..=count)
        .map(|i| if i == count { 2.0 * r_cut } else { (top - h * (count - i) as f64).exp() })
        .collect();
    let (values, deriv): (Vec<f64>, Vec<f64>) = grid
        .iter()
        .map(|&r| {
            let (u, du) = u_star(n, p, r);
            let (ph, dph) = cutoff(r / r_cut - 1.0);
            (u * ph, du * ph + u * dph / r_cut)
        })
        .unzip();
    let prof = RadialProfile {
        n,
        grid,
        values,
        deriv,
        derivative: DerivativeSource::Analytic,
        tail: Tail::Compact {
            support: 2.0 * r_cut,
        },
    };
    prof.check()?;
    Ok(prof)
}

/// `u_{*,R}` dilated by `lambda` and normalized like `w_lambda`.
pub fn build_truncated(n: u32, p: f64, r_cut: f64, lambda: f64, gamma: f64, q: f64, spec: &GridSpec) -> Result<RadialProfile> {
    let u = build_cut_u_star(n, p, r_cut, spec)?;
    let nm = norms(&u, p, q)?;
    normalized_dilation(&u, &nm, lambda, gamma)
}

/// Allowed deviation of `||u||_{W^{1,p}_gamma}` from 1 for `J` and `I`.
pub const NORMALIZATION_TOL: f64 = 1e-6;

fn local_exponents(problem: &Problem) -> Result<(f64, f64)> {
    match problem.params.operator {
        Operator::Local { .. } => Ok((problem.exponents.base, problem.exponents.q)),
        Operator::Fractional { .. } => Err(Error::RegimeMismatch {
            found: problem.regime,
            expected: "a local regime",
        }),
    }
}

fn normalized_norms(profile: &RadialProfile, problem: &Problem) -> Result<Norms> {
    let (p, q) = local_exponents(problem)?;
    let nm = norms(profile, p, q)?;
    let w = nm.w_norm(problem.gamma());
    if (w - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized {
            norm: w,
            tol: NORMALIZATION_TOL,
        });
    }
    Ok(nm)
}

/// `J(u) = ||u||_p^p + alpha ||u||_q^q` for a normalized profile.
pub fn evaluate_j(profile: &RadialProfile, problem: &Problem) -> Result<f64> {
    let nm = normalized_norms(profile, problem)?;
    Ok(nm.lp.powf(nm.p) + problem.alpha() * nm.lq.powf(nm.q))
}

/// `I(u) = (1 - ||u||_p^p) / ||u||_q^q` for a normalized profile.
pub fn evaluate_i(profile: &RadialProfile, problem: &Problem) -> Result<f64> {
    let nm = normalized_norms(profile, problem)?;
    Ok((1.0 - nm.lp.powf(nm.p)) / nm.lq.powf(nm.q))
}

/// Scales a profile to unit `||.||_{W^{1,p}_gamma}` norm.
pub fn normalize(profile: &RadialProfile, p: f64, q: f64, gamma: f64) -> Result<RadialProfile> {
    let w = norms(profile, p, q)?.w_norm(gamma);
    Ok(profile.dilate(1.0, 1.0 / w))
}

/// Explicit maximizer `w_lambda` of an attained critical local problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Maximizer {
    pub lambda: f64,
    pub t_star: f64,
    #[serde(rename = "D")]
    pub d: f64,
    /// `J(w_lambda)` by quadrature.
    #[serde(rename = "J_check")]
    pub j_check: f64,
    #[serde(skip)]
    pub profile: RadialProfile,
}

/// Classifies `problem` and, when a maximizer exists, builds `w_lambda` with
/// `lambda = lambda_from_tstar(t_star)` and evaluates `J` on it.
pub fn build_maximizer(problem: &Problem, sobolev: f64, spec: &GridSpec) -> Result<Maximizer> {
    if problem.regime != Regime::CriticalLocal {
        return Err(Error::RegimeMismatch {
            found: problem.regime,
            expected: "the critical local regime",
        });
    }
    let v = classify(problem, &Constants::sobolev(sobolev))?;
    let t_star = match (v.attained, v.t_star) {
        (true, Some(t)) => t,
        _ => return Err(Error::NoMaximizer(v.reason)),
    };
    let (n, p, q, gamma) = (problem.n(), problem.exponents.base, problem.exponents.q, problem.gamma());
    let u = build_u_star(n, p, spec)?;
    let nm = norms(&u, p, q)?;
    let lambda = lambda_from_tstar(t_star, &nm, gamma, n)?;
    let profile = normalized_dilation(&u, &nm, lambda, gamma)?;
    let j_check = evaluate_j(&profile, problem)?;
    Ok(Maximizer {
        lambda,
        t_star,
        d: v.d,
        j_check,
        profile,
    })
}

/// Radius beyond which the seeded test functions vanish to double precision.
pub const RANDOM_SUPPORT: f64 = 60.0;

/// Seeded nonnegative radial test functions: sums of one to three Gaussians
/// `a exp(-(r/sigma)^2)` and compact bumps `b (1 - (r/rho)^2)^4`, sampled on a geometric
/// grid up to [`RANDOM_SUPPORT`], with finite-difference derivatives.
pub fn random_profiles(n: u32, count: usize, seed: u64, per_decade: usize) -> Result<Vec<RadialProfile>> {
    let spec = GridSpec {
        per_decade,
        r_max: Some(RANDOM_SUPPORT),
        ..GridSpec::default()
    };
    spec.check()?;
    let grid = spec.build(RANDOM_SUPPORT);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let terms = rng.gen_range(1..=3);
            let parts: Vec<(bool, f64, f64)> = (0..terms)
                .map(|_| (rng.gen_bool(0.5), rng.gen_range(0.1..2.0), rng.gen_range(0.3..4.0)))
                .collect();
            let values: Vec<f64> = grid
                .iter()
                .map(|&r| {
                    parts
                        .iter()
                        .map(|&(bump, amp, width)| {
                            let x = r / width;
                            if bump {
                                if x < 1.0 {
                                    amp * (1.0 - x * x).powi(4)
                                } else {
                                    0.0
                                }
                            } else {
                                amp * (-x * x).exp()
                            }
                        })
                        .sum()
                })
                .collect();
            RadialProfile::from_samples(
                n,
                grid.clone(),
                values,
                Tail::Compact {
                    support: RANDOM_SUPPORT,
                },
            )
        })
        .collect()
}
