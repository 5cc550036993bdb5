//! Sharp constants: the Sobolev constant by radial quadrature of the Aubin–Talenti
//! profile, a lower-bound estimator for the Gagliardo–Nirenberg–Sobolev constant,
//! and user-supplied fractional constants.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::params::{Exponent, Problem, ProblemParams, Regime, Target};
use crate::quadrature::{gauss_legendre8, integrate, GL8_W, GL8_X};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantMethod {
    Quadrature,
    AscentEstimate,
    UserInput,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstantMeta {
    Sobolev {
        n: u32,
        p: f64,
        resolution: usize,
        panels: usize,
    },
    Gns {
        n: u32,
        p: f64,
        q: f64,
        budget: usize,
        sweeps: usize,
        converged: bool,
        ascent_log: Vec<f64>,
    },
    User {
        source: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpConstant {
    pub value: f64,
    pub method: ConstantMethod,
    pub err_bound: f64,
    pub meta: ConstantMeta,
}

/// Surface area of the unit sphere in `R^N`, `2 pi^{N/2} / Gamma(N/2)`.
pub fn sphere_area(n: u32) -> f64 {
    let pi = std::f64::consts::PI;
    // Gamma(N/2) for integer or half-integer arguments.
    let half_gamma = if n % 2 == 0 {
        (1..n / 2).map(|k| k as f64).product::<f64>()
    } else {
        let k = n / 2;
        (0..k).map(|j| j as f64 + 0.5).product::<f64>() * pi.sqrt()
    };
    2.0 * pi.powf(n as f64 / 2.0) / half_gamma
}

fn check_sobolev(n: u32, p: f64) -> Result<()> {
    if n < 2 {
        return Err(domain("N", n as f64, "N >= 2"));
    }
    if !(p > 1.0 && p < n as f64) {
        return Err(domain("p", p, "1 < p < N"));
    }
    Ok(())
}

/// `ln(1 + r^e)` from `ln r`, without overflow.
fn ln1p_pow(lr: f64, e: f64) -> f64 {
    let x = e * lr;
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `int_0^inf exp(lnf(ln r)) dr` where the integrand decays like `r^-decay`, `decay > 1`.
/// Split at `split`; the tail uses `r = split x^{-m}` with `m = 1/(decay - 1)`, which
/// makes the transformed integrand bounded at `x = 0`.
fn radial_integral(
    lnf: impl Fn(f64) -> f64,
    split: f64,
    decay: f64,
    panels: usize,
    rel_tol: f64,
) -> Result<(f64, f64, usize)> {
    let head = integrate(
        |r| if r > 0.0 { lnf(r.ln()).exp() } else { 0.0 },
        0.0,
        split,
        panels,
        rel_tol,
        0.0,
    )?;
    let m = 1.0 / (decay - 1.0);
    let ls = split.ln();
    let tail = integrate(
        |x| {
            if x <= 0.0 {
                return 0.0;
            }
            let lx = x.ln();
            (lnf(ls - m * lx) + m.ln() + ls - (m + 1.0) * lx).exp()
        },
        0.0,
        1.0,
        panels,
        rel_tol,
        0.0,
    )?;
    Ok((
        head.value + tail.value,
        head.err + tail.err,
        head.panels + tail.panels,
    ))
}

struct Quotient {
    value: f64,
    rel_err: f64,
    panels: usize,
}

fn sobolev_quotient(n: u32, p: f64, b: f64, panels: usize) -> Result<Quotient> {
    let nf = n as f64;
    let pp = p / (p - 1.0);
    let pstar = nf * p / (nf - p);
    let rel_tol = 1e-13;
    // u(r) = u*(b r); u^{p*} r^{N-1} = (1 + (br)^{p'})^{-N} r^{N-1}.
    let lb = b.ln();
    let (i1, e1, n1) = radial_integral(
        |lr| (nf - 1.0) * lr - nf * ln1p_pow(lr + lb, pp),
        1.0 / b,
        nf * pp - nf + 1.0,
        panels,
        rel_tol,
    )?;
    // |u'|^p r^{N-1} = ((N-p)/(p-1))^p b^p (br)^{p'} (1 + (br)^{p'})^{-N} r^{N-1}.
    let lc = p * ((nf - p) / (p - 1.0)).ln() + p * lb;
    let (i2, e2, n2) = radial_integral(
        |lr| lc + pp * (lr + lb) + (nf - 1.0) * lr - nf * ln1p_pow(lr + lb, pp),
        1.0 / b,
        (nf - 1.0) * pp - nf + 1.0,
        panels,
        rel_tol,
    )?;
    let omega = sphere_area(n);
    let value = (omega * i1).powf(1.0 / pstar) / (omega * i2).powf(1.0 / p);
    Ok(Quotient {
        value,
        rel_err: e1 / i1 / pstar + e2 / i2 / p,
        panels: n1 + n2,
    })
}

/// `||u*(b .)||_{p*} / ||grad u*(b .)||_p` by quadrature; independent of `b` in exact
/// arithmetic.
pub fn sobolev_quotient_dilated(n: u32, p: f64, b: f64, resolution: usize) -> Result<f64> {
    check_sobolev(n, p)?;
    if !(b > 0.0 && b.is_finite()) {
        return Err(domain("b", b, "finite, > 0"));
    }
    if resolution == 0 {
        return Err(domain("resolution", 0.0, ">= 1"));
    }
    Ok(sobolev_quotient(n, p, b, 2 * resolution)?.value)
}

/// `S_{N,p} = ||u*||_{p*} / ||grad u*||_p`, `u*(r) = (1 + r^{p/(p-1)})^{-(N-p)/p}`.
///
/// Two adaptive Gauss–Kronrod passes start from `resolution` and `2 resolution`
/// panels per half-line piece; the finer one is reported and the error bound is the
/// larger of twice their difference and the summed panel error estimates.
pub fn sobolev_constant(n: u32, p: f64, resolution: usize) -> Result<SharpConstant> {
    check_sobolev(n, p)?;
    if resolution == 0 {
        return Err(domain("resolution", 0.0, ">= 1"));
    }
    let coarse = sobolev_quotient(n, p, 1.0, resolution)?;
    let fine = sobolev_quotient(n, p, 1.0, 2 * resolution)?;
    let s = fine.value;
    let err_bound = (2.0 * (fine.value - coarse.value).abs())
        .max((coarse.rel_err + fine.rel_err) * s)
        .max(64.0 * f64::EPSILON * s);
    Ok(SharpConstant {
        value: s,
        method: ConstantMethod::Quadrature,
        err_bound,
        meta: ConstantMeta::Sobolev {
            n,
            p,
            resolution,
            panels: fine.panels,
        },
    })
}

/// Wraps a trusted fractional constant.
pub fn fractional_constant(value: f64, source: &str) -> Result<SharpConstant> {
    if !(value > 0.0 && value.is_finite()) {
        return Err(domain("value", value, "finite, > 0"));
    }
    Ok(SharpConstant {
        value,
        method: ConstantMethod::UserInput,
        err_bound: 0.0,
        meta: ConstantMeta::User {
            source: source.to_string(),
        },
    })
}

/// Nonnegative, non-increasing, piecewise-linear radial profile with `u(r_M) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseLinear {
    pub r: Vec<f64>,
    pub u: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(r: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if r.len() != u.len() || r.len() < 2 || r[0] != 0.0 {
            return Err(Error::BadGrid);
        }
        if r.windows(2).any(|w| !(w[1] > w[0])) || !r.iter().all(|x| x.is_finite()) {
            return Err(Error::BadGrid);
        }
        if u.iter().any(|&v| !(v >= 0.0 && v.is_finite()))
            || u.windows(2).any(|w| w[1] > w[0])
            || *u.last().unwrap() != 0.0
        {
            return Err(Error::BadGrid);
        }
        Ok(PiecewiseLinear { r, u })
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.u[0];
        }
        let j = self.r.partition_point(|&ri| ri <= x);
        if j >= self.r.len() {
            return 0.0;
        }
        let (r0, r1) = (self.r[j - 1], self.r[j]);
        let th = (x - r0) / (r1 - r0);
        self.u[j - 1] * (1.0 - th) + self.u[j] * th
    }
}

/// Exponents of the interpolation ratio `||u||_q^q / (||grad u||_p^{gc} ||u||_p^{q-gc})`.
#[derive(Debug, Clone, Copy)]
struct GnsExponents {
    n: f64,
    p: f64,
    q: f64,
    cg: f64,
    cp: f64,
}

impl GnsExponents {
    fn new(n: u32, p: f64, q: f64) -> Self {
        let gc = crate::params::gamma_c(n, p, q);
        GnsExponents {
            n: n as f64,
            p,
            q,
            cg: gc / p,
            cp: (q - gc) / p,
        }
    }
}

/// Cell integrals `(int u^q r^{N-1}, int u^p r^{N-1}, int |u'|^p r^{N-1})` without the
/// sphere factor.
fn cell(e: &GnsExponents, r0: f64, r1: f64, u0: f64, u1: f64) -> (f64, f64, f64) {
    let c = 0.5 * (r0 + r1);
    let h = 0.5 * (r1 - r0);
    let (mut a, mut b) = (0.0, 0.0);
    for k in 0..8 {
        let th = 0.5 * (1.0 + GL8_X[k]);
        let r = c + h * GL8_X[k];
        let u = u0 * (1.0 - th) + u1 * th;
        let w = GL8_W[k] * h * r.powf(e.n - 1.0);
        if u > 0.0 {
            let lu = u.ln();
            a += w * (e.q * lu).exp();
            b += w * (e.p * lu).exp();
        }
    }
    let slope = (u0 - u1) / (r1 - r0);
    let g = if slope > 0.0 {
        slope.powf(e.p) * (r1.powf(e.n) - r0.powf(e.n)) / e.n
    } else {
        0.0
    };
    (a, b, g)
}

/// `||u||_q^q / (||grad u||_p^{gamma_c} ||u||_p^{q-gamma_c})` for a piecewise-linear
/// radial profile, with `int u^q`, `int u^p` by 8-point Gauss–Legendre per cell and
/// the gradient term exactly.
pub fn gns_ratio(n: u32, p: f64, q: f64, profile: &PiecewiseLinear) -> f64 {
    let e = GnsExponents::new(n, p, q);
    let (mut a, mut b, mut g) = (0.0, 0.0, 0.0);
    for j in 0..profile.r.len() - 1 {
        let (ca, cb, cg) = cell(&e, profile.r[j], profile.r[j + 1], profile.u[j], profile.u[j + 1]);
        a += ca;
        b += cb;
        g += cg;
    }
    let omega = sphere_area(n);
    (omega * a) / ((omega * g).powf(e.cg) * (omega * b).powf(e.cp))
}

/// Ratio of a general radial function sampled by `u`, by Gauss–Legendre on
/// `panels` equal cells of `[0, radius]` with the derivative `du`.
pub fn gns_ratio_of(
    n: u32,
    p: f64,
    q: f64,
    u: impl Fn(f64) -> f64,
    du: impl Fn(f64) -> f64,
    radius: f64,
    panels: usize,
) -> f64 {
    let e = GnsExponents::new(n, p, q);
    let h = radius / panels as f64;
    let w = |r: f64| r.powf(e.n - 1.0);
    let (mut a, mut b, mut g) = (0.0, 0.0, 0.0);
    for j in 0..panels {
        let (r0, r1) = (j as f64 * h, (j + 1) as f64 * h);
        a += gauss_legendre8(|r| u(r).abs().powf(e.q) * w(r), r0, r1);
        b += gauss_legendre8(|r| u(r).abs().powf(e.p) * w(r), r0, r1);
        g += gauss_legendre8(|r| du(r).abs().powf(e.p) * w(r), r0, r1);
    }
    let omega = sphere_area(n);
    (omega * a) / ((omega * g).powf(e.cg) * (omega * b).powf(e.cp))
}

/// Result of the interpolation-constant ascent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GnsEstimate {
    pub constant: SharpConstant,
    /// The profile achieving `constant.value`.
    pub profile: PiecewiseLinear,
}

const GNS_RADIUS: f64 = 20.0;
const GNS_GRADING: f64 = 3.0;
const GNS_COARSE_CELLS: usize = 32;
const GNS_FINE_CELLS: usize = 2048;
/// Default sweep budget.
pub const GNS_DEFAULT_BUDGET: usize = 5000;

/// Initial panel count for [`sobolev_constant`] used by the CLI and the checks.
pub const DEFAULT_RESOLUTION: usize = 8;
const GNS_LEVEL_STOP: f64 = 1e-13;
const GNS_RELAX: f64 = 1.9;
const GNS_PIN: f64 = 1.0;
const GNS_CONVERGED: f64 = 1e-10;

fn graded_grid(cells: usize) -> Vec<f64> {
    let d = GNS_GRADING.exp_m1();
    (0..=cells)
        .map(|j| GNS_RADIUS * (GNS_GRADING * j as f64 / cells as f64).exp_m1() / d)
        .collect()
}

struct Ascent<'a> {
    e: GnsExponents,
    r: &'a [f64],
    u: Vec<f64>,
    cells: Vec<(f64, f64, f64)>,
    totals: (f64, f64, f64),
}

impl<'a> Ascent<'a> {
    fn new(e: GnsExponents, r: &'a [f64], u: Vec<f64>) -> Self {
        let cells: Vec<_> = (0..r.len() - 1)
            .map(|j| cell(&e, r[j], r[j + 1], u[j], u[j + 1]))
            .collect();
        let mut a = Ascent {
            e,
            r,
            u,
            cells,
            totals: (0.0, 0.0, 0.0),
        };
        a.refresh();
        a
    }

    fn refresh(&mut self) {
        self.totals = self.cells.iter().fold((0.0, 0.0, 0.0), |t, c| {
            (t.0 + c.0, t.1 + c.1, t.2 + c.2)
        });
    }

    /// Log ratio with a penalty pinning `||grad u||_p = ||u||_p`, which removes the
    /// dilation invariance.
    fn phi(&self, t: (f64, f64, f64)) -> f64 {
        let (lp, lg) = (t.1.ln(), t.2.ln());
        t.0.ln() - self.e.cp * lp - self.e.cg * lg - GNS_PIN * (lg - lp).powi(2)
    }

    /// Local cell sums touching node `i` when it takes value `v`.
    fn local(&self, i: usize, v: f64) -> (f64, f64, f64) {
        let mut s = (0.0, 0.0, 0.0);
        if i > 0 {
            let c = cell(&self.e, self.r[i - 1], self.r[i], self.u[i - 1], v);
            s = (s.0 + c.0, s.1 + c.1, s.2 + c.2);
        }
        let c = cell(&self.e, self.r[i], self.r[i + 1], v, self.u[i + 1]);
        (s.0 + c.0, s.1 + c.1, s.2 + c.2)
    }

    fn old_local(&self, i: usize) -> (f64, f64, f64) {
        let mut s = self.cells[i];
        if i > 0 {
            let c = self.cells[i - 1];
            s = (s.0 + c.0, s.1 + c.1, s.2 + c.2);
        }
        s
    }

    /// One projected coordinate update of node `i`; returns whether it was accepted.
    fn update(&mut self, i: usize) -> bool {
        let v = self.u[i];
        let lo = self.u[i + 1];
        let hi = if i == 0 { f64::INFINITY } else { self.u[i - 1] };
        let old = self.old_local(i);
        let rest = (
            self.totals.0 - old.0,
            self.totals.1 - old.1,
            self.totals.2 - old.2,
        );
        let add = |l: (f64, f64, f64)| (rest.0 + l.0, rest.1 + l.1, rest.2 + l.2);
        let phi0 = self.phi(self.totals);
        let scale = v.max(1e-300);
        let d = 1e-4 * scale;
        let fp = self.phi(add(self.local(i, v + d)));
        let fm = if v - d >= 0.0 {
            self.phi(add(self.local(i, v - d)))
        } else {
            f64::NAN
        };
        let (g1, g2) = if fm.is_finite() {
            ((fp - fm) / (2.0 * d), (fp - 2.0 * phi0 + fm) / (d * d))
        } else {
            ((fp - phi0) / d, f64::NAN)
        };
        if !g1.is_finite() || g1 == 0.0 {
            return false;
        }
        let mut step = if g2 < 0.0 && g2.is_finite() {
            -GNS_RELAX * g1 / g2
        } else {
            g1.signum() * 0.1 * scale
        };
        for _ in 0..6 {
            let w = (v + step).clamp(lo, hi);
            if w != v {
                let l = self.local(i, w);
                let t = add(l);
                if self.phi(t) > phi0 {
                    self.u[i] = w;
                    if i > 0 {
                        self.cells[i - 1] =
                            cell(&self.e, self.r[i - 1], self.r[i], self.u[i - 1], w);
                    }
                    self.cells[i] = cell(&self.e, self.r[i], self.r[i + 1], w, self.u[i + 1]);
                    self.totals = t;
                    return true;
                }
            }
            step *= 0.5;
        }
        false
    }

    fn sweep(&mut self, forward: bool) {
        let m = self.u.len() - 1;
        if forward {
            for i in 0..m {
                self.update(i);
            }
        } else {
            for i in (0..m).rev() {
                self.update(i);
            }
        }
        self.refresh();
    }
}

/// Lower bound for `B_{N,p,q}` by projected coordinate ascent of the interpolation
/// ratio over nonnegative non-increasing piecewise-linear radial profiles.
///
/// The ascent starts from a Gaussian on a 32-cell graded grid over `[0, 20]` and
/// doubles the grid (nested, by linear interpolation) up to 2048 cells. Each
/// coordinate takes an over-relaxed Newton step, kept only when it increases the log
/// ratio penalized by `(ln ||grad u||_p^p - ln ||u||_p^p)^2`; the penalty fixes the
/// scale without changing the supremum. `budget` caps the total number of sweeps.
/// The returned value is the unpenalized ratio of the returned profile, the best
/// seen during the ascent.
pub fn gns_constant_estimate(n: u32, p: f64, q: f64, budget: usize) -> Result<GnsEstimate> {
    let problem = Problem::new(ProblemParams::local(
        n,
        Exponent::from_f64(p),
        Target::Value(Exponent::from_f64(q)),
        1.0,
        0.0,
    ))?;
    if problem.regime != Regime::SubcriticalLocal {
        return Err(Error::RegimeMismatch {
            found: problem.regime,
            expected: "SubcriticalLocal",
        });
    }
    if budget == 0 {
        return Err(domain("budget", 0.0, ">= 1"));
    }
    let e = GnsExponents::new(n, p, q);
    let mut cells = GNS_COARSE_CELLS;
    let mut r = graded_grid(cells);
    let mut u: Vec<f64> = r.iter().map(|&x| (-x * x / 4.0).exp()).collect();
    *u.last_mut().unwrap() = 0.0;

    let ratio_of = |r: &[f64], u: &[f64]| {
        gns_ratio(
            n,
            p,
            q,
            &PiecewiseLinear {
                r: r.to_vec(),
                u: u.to_vec(),
            },
        )
    };

    let mut best_ratio = ratio_of(&r, &u);
    let mut best = (r.clone(), u.clone());
    let mut log = vec![best_ratio];
    let mut sweeps = 0;
    let mut converged = false;
    'levels: loop {
        let mut asc = Ascent::new(e, &r, u);
        let mut prev = asc.phi(asc.totals);
        let mut last_gain = f64::INFINITY;
        while sweeps < budget {
            asc.sweep(sweeps % 2 == 0);
            sweeps += 1;
            let now = asc.phi(asc.totals);
            last_gain = now - prev;
            prev = now;
            let ratio = ratio_of(&r, &asc.u);
            if ratio > best_ratio {
                best_ratio = ratio;
                best = (r.clone(), asc.u.clone());
            }
            log.push(best_ratio);
            if last_gain < GNS_LEVEL_STOP {
                break;
            }
        }
        u = asc.u;
        if cells >= GNS_FINE_CELLS {
            converged = last_gain < GNS_CONVERGED;
            break 'levels;
        }
        if sweeps >= budget {
            break 'levels;
        }
        cells *= 2;
        let fine = graded_grid(cells);
        let coarse = PiecewiseLinear {
            r: r.clone(),
            u: u.clone(),
        };
        u = fine.iter().map(|&x| coarse.eval(x)).collect();
        *u.last_mut().unwrap() = 0.0;
        r = fine;
    }

    let profile = PiecewiseLinear {
        r: best.0,
        u: best.1,
    };
    let value = gns_ratio(n, p, q, &profile);
    Ok(GnsEstimate {
        constant: SharpConstant {
            value,
            method: ConstantMethod::AscentEstimate,
            err_bound: 0.0,
            meta: ConstantMeta::Gns {
                n,
                p,
                q,
                budget,
                sweeps,
                converged,
                ascent_log: log,
            },
        },
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_areas() {
        let pi = std::f64::consts::PI;
        assert!((sphere_area(2) - 2.0 * pi).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * pi).abs() < 1e-14);
        assert!((sphere_area(4) - 2.0 * pi * pi).abs() < 1e-13);
        assert!((sphere_area(5) - 8.0 * pi * pi / 3.0).abs() < 1e-13);
    }

    #[test]
    fn sobolev_positive_and_rejects_bad_p() {
        let s = sobolev_constant(3, 1.5, 4).unwrap();
        assert!(s.value > 0.0 && s.err_bound >= 0.0);
        assert_eq!(s.method, ConstantMethod::Quadrature);
        assert!(sobolev_constant(3, 3.0, 4).is_err());
        assert!(sobolev_constant(3, 1.0, 4).is_err());
        assert!(sobolev_constant(3, 2.0, 0).is_err());
    }

    #[test]
    fn sobolev_dilation_invariance() {
        let base = sobolev_quotient_dilated(4, 2.0, 1.0, 8).unwrap();
        for b in [0.5, 2.0, 10.0] {
            let v = sobolev_quotient_dilated(4, 2.0, b, 8).unwrap();
            assert!((v / base - 1.0).abs() < 1e-10, "b={b}: {v} vs {base}");
        }
    }

    #[test]
    fn sobolev_near_p_equal_n() {
        let s = sobolev_constant(3, 2.9, 8).unwrap();
        assert!(s.value.is_finite() && s.value > 0.0);
    }

    #[test]
    fn fractional_wrapper() {
        let c = fractional_constant(1.0, "unit test").unwrap();
        assert_eq!(c.value, 1.0);
        assert_eq!(c.method, ConstantMethod::UserInput);
        assert_eq!(c.err_bound, 0.0);
        assert!(fractional_constant(0.0, "x").is_err());
        assert!(fractional_constant(-1.0, "x").is_err());
    }

    #[test]
    fn piecewise_linear_validation() {
        assert!(PiecewiseLinear::new(vec![0.0, 1.0], vec![1.0, 0.0]).is_ok());
        assert!(PiecewiseLinear::new(vec![0.0, 1.0], vec![1.0, 0.5]).is_err());
        assert!(PiecewiseLinear::new(vec![0.0, 1.0, 2.0], vec![1.0, 1.5, 0.0]).is_err());
        assert!(PiecewiseLinear::new(vec![0.0, 0.0], vec![1.0, 0.0]).is_err());
        let pl = PiecewiseLinear::new(vec![0.0, 1.0, 3.0], vec![2.0, 1.0, 0.0]).unwrap();
        assert_eq!(pl.eval(0.5), 1.5);
        assert_eq!(pl.eval(2.0), 0.5);
        assert_eq!(pl.eval(5.0), 0.0);
    }

    #[test]
    fn gns_ratio_scale_free() {
        let r: Vec<f64> = (0..=400).map(|i| i as f64 * 0.05).collect();
        let u: Vec<f64> = r
            .iter()
            .map(|&x| if x < 20.0 { (-x * x / 3.0).exp() } else { 0.0 })
            .collect();
        let base = gns_ratio(2, 2.0, 4.0, &PiecewiseLinear::new(r.clone(), u.clone()).unwrap());
        let scaled: Vec<f64> = u.iter().map(|v| 3.7 * v).collect();
        let v = gns_ratio(2, 2.0, 4.0, &PiecewiseLinear::new(r.clone(), scaled).unwrap());
        assert!((v / base - 1.0).abs() < 1e-12);
        // Dilation: same nodal values on the dilated grid.
        let rd: Vec<f64> = r.iter().map(|x| 2.5 * x).collect();
        let v = gns_ratio(2, 2.0, 4.0, &PiecewiseLinear::new(rd, u).unwrap());
        assert!((v / base - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gns_rejects_critical() {
        assert!(matches!(
            gns_constant_estimate(3, 2.0, 6.0, 10),
            Err(Error::RegimeMismatch { .. })
        ));
        assert!(matches!(
            gns_constant_estimate(3, 2.0, 7.0, 10),
            Err(Error::Param(_))
        ));
        assert!(gns_constant_estimate(2, 2.0, 4.0, 0).is_err());
    }

    #[test]
    fn gns_small_budget_is_lower_bound_and_monotone() {
        let est = gns_constant_estimate(2, 2.0, 4.0, 20).unwrap();
        let ConstantMeta::Gns { ascent_log, converged, sweeps, .. } = &est.constant.meta else {
            panic!("wrong meta");
        };
        assert!(ascent_log.windows(2).all(|w| w[1] >= w[0]));
        assert!(!converged);
        assert_eq!(*sweeps, 20);
        assert_eq!(gns_ratio(2, 2.0, 4.0, &est.profile), est.constant.value);
        assert_eq!(*ascent_log.last().unwrap(), est.constant.value);
    }
}
