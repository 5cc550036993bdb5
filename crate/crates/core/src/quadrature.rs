//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals, plus the fixed
//! Gauss–Legendre rule used for per-cell integrals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 8-point Gauss–Legendre nodes and weights on `[-1, 1]`.
pub const GL8_X: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
pub const GL8_W: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

/// Panel cap for [`integrate`].
pub const MAX_PANELS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of the per-panel `|K15 - G7|` estimates.
    pub err: f64,
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Result<Panel> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    if !k.is_finite() {
        return Err(Error::NonFinite { at: c });
    }
    Ok(Panel {
        a,
        b,
        value: k * h,
        err: ((k - g) * h).abs(),
    })
}

/// Integrates `f` over `[a, b]` starting from `initial_panels` equal panels and
/// bisecting the panel with the largest error estimate until the total estimate
/// is below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    initial_panels: usize,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(domain("b", b, "finite a < b"));
    }
    if initial_panels == 0 {
        return Err(domain("initial_panels", 0.0, ">= 1"));
    }
    let mut heap = BinaryHeap::with_capacity(2 * initial_panels);
    let w = (b - a) / initial_panels as f64;
    for i in 0..initial_panels {
        let lo = a + w * i as f64;
        let hi = if i + 1 == initial_panels { b } else { lo + w };
        heap.push(gk15(&f, lo, hi)?);
    }
    let (mut value, mut err) = totals(&heap);
    loop {
        if err <= abs_tol.max(rel_tol * value.abs()) {
            let (value, err) = totals(&heap);
            return Ok(Integral {
                value,
                err,
                panels: heap.len(),
            });
        }
        if heap.len() >= MAX_PANELS {
            return Err(Error::Quadrature {
                estimate: err,
                panels: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::Quadrature {
                estimate: err,
                panels: heap.len() + 1,
            });
        }
        let left = gk15(&f, worst.a, mid)?;
        let right = gk15(&f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        if heap.len() % 256 == 0 {
            (value, err) = totals(&heap);
        }
    }
}

fn totals(heap: &BinaryHeap<Panel>) -> (f64, f64) {
    heap.iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.err))
}

/// Gauss–Legendre 8-point rule on `[a, b]`.
pub fn gauss_legendre8(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    h * GL8_X
        .iter()
        .zip(GL8_W.iter())
        .map(|(&x, &w)| w * f(c + h * x))
        .sum::<f64>()
}
