//! Independent reference values: Beta integrals for the Aubin–Talenti profile, the
//! Talenti closed form, and a shooting solution of the cubic ground-state ODE.

#![allow(dead_code)]

use statrs::function::beta::beta;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

/// `|S^{N-1}| = 2 pi^{N/2} / Gamma(N/2)`.
pub fn sphere(n: u32) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / ln_gamma(n as f64 / 2.0).exp()
}

/// `int_0^inf r^{a-1} (1 + r^2)^{-k} dr = B(a/2, k - a/2) / 2`.
fn radial_beta(a: f64, k: f64) -> f64 {
    0.5 * beta(a / 2.0, k - a / 2.0)
}

/// `(||u*||_2, ||grad u*||_2, ||u*||_{2*})` for `p = 2`, `u* = (1 + r^2)^{-(N-2)/2}`.
/// `||u*||_2` is infinite for `N <= 4`.
pub fn talenti_norms_p2(n: u32) -> (f64, f64, f64) {
    let nf = n as f64;
    let w = sphere(n);
    let m = (nf - 2.0) / 2.0;
    let l2 = if n > 4 { (w * radial_beta(nf, 2.0 * m)).sqrt() } else { f64::INFINITY };
    // u' = -(N-2) r (1+r^2)^{-N/2}
    let grad = ((nf - 2.0).powi(2) * w * radial_beta(nf + 2.0, nf)).sqrt();
    let q = 2.0 * nf / (nf - 2.0);
    let lq = (w * radial_beta(nf, m * q)).powf(1.0 / q);
    (l2, grad, lq)
}

/// Sharp constant in `||u||_{p*} <= S ||grad u||_p`.
pub fn talenti(n: u32, p: f64) -> f64 {
    let nf = n as f64;
    let lg = ln_gamma(1.0 + nf / 2.0) + ln_gamma(nf) - ln_gamma(nf / p) - ln_gamma(1.0 + nf - nf / p);
    PI.powf(-0.5) * nf.powf(-1.0 / p) * ((p - 1.0) / (nf - p)).powf((p - 1.0) / p) * (lg / nf).exp()
}

/// Radial ground state of `Q'' + Q'/r - Q + Q^3 = 0` in the plane.
pub struct GroundState {
    pub q0: f64,
    pub mass: f64,
    pub grad: f64,
    pub quartic: f64,
}

impl GroundState {
    /// `||u||_4^4 / (||grad u||_2^2 ||u||_2^2)` at `u = Q`.
    pub fn gns_224(&self) -> f64 {
        let w = 2.0 * PI;
        (w * self.quartic) / ((w * self.grad) * (w * self.mass))
    }
}

enum Shot {
    Over,
    Under { state: [f64; 5] },
}

/// State: `[Q, Q', int Q^2 r, int Q'^2 r, int Q^4 r]`.
fn rhs(r: f64, y: &[f64; 5]) -> [f64; 5] {
    let (q, dq) = (y[0], y[1]);
    [dq, -dq / r + q - q * q * q, q * q * r, dq * dq * r, q.powi(4) * r]
}

fn shoot(q0: f64) -> Shot {
    // Taylor start Q = a + c2 r^2 + c4 r^4 away from the 1/r singularity, then
    // steps graded towards the origin.
    let mut r = 1e-3;
    let c2 = (q0 - q0 * q0 * q0) / 4.0;
    let c4 = (1.0 - 3.0 * q0 * q0) * c2 / 16.0;
    let r2 = r * r;
    let mut y = [
        q0 + c2 * r2 + c4 * r2 * r2,
        2.0 * c2 * r + 4.0 * c4 * r2 * r,
        q0 * q0 * r2 / 2.0 + q0 * c2 * r2 * r2 / 2.0,
        c2 * c2 * r2 * r2,
        q0.powi(4) * r2 / 2.0 + q0.powi(3) * c2 * r2 * r2,
    ];
    while r < 40.0 {
        let h = (0.05 * r).min(1e-3);
        let k1 = rhs(r, &y);
        let step = |k: &[f64; 5], f: f64| std::array::from_fn::<f64, 5, _>(|i| y[i] + f * h * k[i]);
        let k2 = rhs(r + h / 2.0, &step(&k1, 0.5));
        let k3 = rhs(r + h / 2.0, &step(&k2, 0.5));
        let k4 = rhs(r + h, &step(&k3, 1.0));
        let next: [f64; 5] = std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        r += h;
        if next[0] < 0.0 {
            return Shot::Over;
        }
        if next[1] > 0.0 {
            return Shot::Under { state: y };
        }
        y = next;
    }
    Shot::Under { state: y }
}

/// Bisection on `Q(0)` between undershoot and overshoot.
pub fn ground_state() -> GroundState {
    let (mut lo, mut hi) = (1.5, 3.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match shoot(mid) {
            Shot::Over => hi = mid,
            Shot::Under { .. } => lo = mid,
        }
    }
    let Shot::Under { state } = shoot(lo) else {
        unreachable!("lower bracket undershoots")
    };
    GroundState {
        q0: lo,
        mass: state[2],
        grad: state[3],
        quartic: state[4],
    }
}
