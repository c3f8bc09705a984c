//! Globally adaptive Gauss–Kronrod (7/15) quadrature and Gauss–Legendre
//! rules.

// published 30-digit nodes and weights, kept as printed
#![allow(clippy::excessive_precision)]

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Failure of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QuadError {
    /// The evaluation budget ran out before the error estimate met the
    /// tolerance.
    NoConvergence {
        /// Best estimate of the integral.
        estimate: f64,
        /// Estimated absolute error of `estimate`.
        error: f64,
        /// Integrand evaluations spent.
        evaluations: usize,
    },
    /// The integrand returned a NaN or infinite value.
    NonFinite {
        /// Abscissa where the bad value appeared (panel midpoint).
        at: f64,
    },
}

impl fmt::Display for QuadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadError::NoConvergence {
                estimate,
                error,
                evaluations,
            } => write!(
                f,
                "quadrature did not converge after {evaluations} evaluations \
                 (estimate {estimate:e}, error {error:e})"
            ),
            QuadError::NonFinite { at } => write!(f, "integrand is not finite near {at}"),
        }
    }
}

impl core::error::Error for QuadError {}

/// Result of a successful integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    /// Value of the integral.
    pub value: f64,
    /// Estimated absolute error.
    pub error: f64,
    /// Integrand evaluations spent.
    pub evaluations: usize,
}

/// Settings for adaptive Gauss–Kronrod integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    /// Target absolute error.
    pub abs_tol: f64,
    /// Budget of integrand evaluations.
    pub max_evals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            abs_tol: 1e-10,
            max_evals: 1_000_000,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
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
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel, QuadError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    if !value.is_finite() {
        return Err(QuadError::NonFinite { at: center });
    }
    let error = ((kronrod - gauss) * half).abs();
    Ok(Panel { a, b, value, error })
}

impl Quadrature {
    /// Settings with the given absolute tolerance and the default budget.
    pub fn with_tol(abs_tol: f64) -> Self {
        Quadrature {
            abs_tol,
            ..Quadrature::default()
        }
    }

    /// Integrates `f` over `[a, b]`, bisecting the panel with the largest
    /// error estimate until the summed estimate drops below `abs_tol`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<Integral, QuadError> {
        self.integrate_breaks(f, &[a, b])
    }

    /// Like [`Quadrature::integrate`] but starting from the panels delimited
    /// by `breaks` (sorted ascending, at least two points).
    pub fn integrate_breaks<F: Fn(f64) -> f64>(&self, f: F, breaks: &[f64]) -> Result<Integral, QuadError> {
        assert!(breaks.len() >= 2, "need at least one panel");
        let mut heap = BinaryHeap::new();
        let mut evaluations = 0;
        for w in breaks.windows(2) {
            if w[0] == w[1] {
                continue;
            }
            heap.push(gk15(&f, w[0], w[1])?);
            evaluations += 15;
        }
        let span = (breaks[breaks.len() - 1] - breaks[0]).abs();
        let min_width = 64.0 * f64::EPSILON * span.max(f64::MIN_POSITIVE);
        // Panels too narrow to split further are retired here.
        let mut frozen_value = 0.0;
        let mut frozen_error = 0.0;
        let mut running_error: f64 = heap.iter().map(|p| p.error).sum();
        loop {
            if running_error <= self.abs_tol || heap.is_empty() {
                // the running sum drifts; confirm with a fresh total
                let (value, error) = heap
                    .iter()
                    .fold((frozen_value, frozen_error), |(v, e), p| (v + p.value, e + p.error));
                if error <= self.abs_tol || heap.is_empty() {
                    return Ok(Integral {
                        value,
                        error,
                        evaluations,
                    });
                }
                running_error = error;
            }
            if evaluations + 30 > self.max_evals {
                let (estimate, error) = heap
                    .iter()
                    .fold((frozen_value, frozen_error), |(v, e), p| (v + p.value, e + p.error));
                return Err(QuadError::NoConvergence {
                    estimate,
                    error,
                    evaluations,
                });
            }
            let worst = heap.pop().expect("heap checked non-empty");
            let mid = 0.5 * (worst.a + worst.b);
            if (worst.b - worst.a).abs() < min_width || mid == worst.a || mid == worst.b {
                frozen_value += worst.value;
                frozen_error += worst.error;
                continue;
            }
            let left = gk15(&f, worst.a, mid)?;
            let right = gk15(&f, mid, worst.b)?;
            running_error += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
            evaluations += 30;
        }
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { p0 } else { p1 };
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, dp)
}

/// Applies a Gauss–Legendre rule (from [`gauss_legendre`]) on `[a, b]`.
pub fn apply_rule<F: Fn(f64) -> f64>(f: &F, nodes: &[f64], weights: &[f64], a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    nodes.iter().zip(weights).map(|(&x, &w)| w * f(c + h * x)).sum::<f64>() * h
}
