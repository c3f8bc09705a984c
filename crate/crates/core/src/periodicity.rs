//! Kernel-moment integrals, the `ψ` sandwich, polynomial moments and
//! periodicity defects.
//!
//! If `I^α f` were `T`-periodic for a `T`-periodic `f`, every kernel moment
//! `∫₀^T (nT - s)^{α-1} f(s) ds` would vanish, `∫₀^T f` would vanish, and
//! `φ(t) = ∫₀^T (T + t - s)^{α-1} f(s) ds` would vanish for all `t ≥ 0`.
//! The functions here compute those quantities so that a single clearly
//! nonzero value certifies non-periodicity.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::fmt;

use crate::grid::{FracOrder, GridFunction};
use crate::quad::{apply_rule, gauss_legendre, QuadError, Quadrature};

/// Errors from the periodicity module.
#[derive(Clone, Debug, PartialEq)]
pub enum PeriodicityError {
    /// Period not positive and finite.
    BadPeriod(f64),
    /// The evaluator is not periodic with the claimed period.
    NotPeriodic {
        /// Sample abscissa.
        at: f64,
        /// `|f(t + T) - f(t)|`.
        gap: f64,
    },
    /// Negative argument where `t ≥ 0` is required.
    NegativeArgument(f64),
    /// Kernel-moment index must be at least 1.
    ZeroIndex,
    /// `|∫₀^T f| > 1e-10`, so the sandwich bound does not apply.
    MeanNotZero(f64),
    /// The grid does not extend past the candidate period.
    WindowTooShort {
        /// Grid end.
        t_end: f64,
        /// Candidate period after snapping.
        period: f64,
    },
    /// Scan range invalid.
    BadRange {
        /// Lower candidate.
        lo: f64,
        /// Upper candidate.
        hi: f64,
    },
    /// Underlying quadrature failure.
    Quad(QuadError),
}

impl fmt::Display for PeriodicityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeriodicityError::BadPeriod(p) => write!(f, "period {p} must be positive and finite"),
            PeriodicityError::NotPeriodic { at, gap } => {
                write!(f, "signal is not periodic: |f(t+T) - f(t)| = {gap:e} at t = {at}")
            }
            PeriodicityError::NegativeArgument(t) => write!(f, "argument {t} must be nonnegative"),
            PeriodicityError::ZeroIndex => write!(f, "kernel-moment index must be at least 1"),
            PeriodicityError::MeanNotZero(m) => {
                write!(f, "signal mean over a period is {m:e}, not zero")
            }
            PeriodicityError::WindowTooShort { t_end, period } => write!(
                f,
                "grid ends at {t_end}, which does not leave a window past period {period}"
            ),
            PeriodicityError::BadRange { lo, hi } => write!(f, "invalid period range [{lo}, {hi}]"),
            PeriodicityError::Quad(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for PeriodicityError {}

impl From<QuadError> for PeriodicityError {
    fn from(e: QuadError) -> Self {
        PeriodicityError::Quad(e)
    }
}

type Result<T> = core::result::Result<T, PeriodicityError>;

/// Tolerance for the periodicity check done at construction.
pub const PERIODICITY_CHECK_TOL: f64 = 1e-12;

/// Largest `|∫₀^T f|` accepted as mean zero.
pub const MEAN_ZERO_TOL: f64 = 1e-10;

/// A real `T`-periodic function given by an evaluator.
pub struct PeriodicSignal {
    eval: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    period: f64,
    description: String,
}

impl fmt::Debug for PeriodicSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicSignal")
            .field("period", &self.period)
            .field("description", &self.description)
            .finish()
    }
}

impl PeriodicSignal {
    /// Wraps `eval`, checking `|f(t+T) - f(t)| ≤ 1e-12` on 97 points of
    /// `[0, 3T]`.
    pub fn new<F>(eval: F, period: f64, description: impl Into<String>) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(period.is_finite() && period > 0.0) {
            return Err(PeriodicityError::BadPeriod(period));
        }
        for i in 0..=96 {
            let t = 3.0 * period * i as f64 / 96.0;
            let gap = (eval(t + period) - eval(t)).abs();
            if !(gap <= PERIODICITY_CHECK_TOL) {
                return Err(PeriodicityError::NotPeriodic { at: t, gap });
            }
        }
        Ok(PeriodicSignal {
            eval: Box::new(eval),
            period,
            description: description.into(),
        })
    }

    /// `sin(2πt/T)`; for `T = 2π` this is exactly `sin t`.
    pub fn sine(period: f64) -> Result<Self> {
        let w = TAU / period;
        Self::new(move |t| (w * t).sin(), period, "sin")
    }

    /// `cos(2πt/T)`.
    pub fn cosine(period: f64) -> Result<Self> {
        let w = TAU / period;
        Self::new(move |t| (w * t).cos(), period, "cos")
    }

    /// The constant `c`, viewed as `T`-periodic.
    pub fn constant(c: f64, period: f64) -> Result<Self> {
        Self::new(move |_| c, period, "const")
    }

    /// Evaluates the signal.
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// The period `T`.
    pub fn period(&self) -> f64 {
        self.period
    }

    /// Free-form description.
    pub fn description(&self) -> &str {
        &self.description
    }
}

/// `∫₀^T (nT - s)^{α-1} f(s) ds`.
///
/// For `n = 1` the kernel is singular at `s = T`; with `u = (T - s)^α` the
/// integral becomes `(1/α) ∫₀^{T^α} f(T - u^{1/α}) du`, which is smooth.
/// For `n ≥ 2` the integrand is smooth and integrated directly.
pub fn kernel_moment(f: &PeriodicSignal, alpha: FracOrder, n: u32, quad: &Quadrature) -> Result<f64> {
    if n == 0 {
        return Err(PeriodicityError::ZeroIndex);
    }
    let a = alpha.get();
    let t = f.period();
    if n == 1 {
        let r = quad.integrate(|u| f.eval(t - u.powf(1.0 / a)), 0.0, t.powf(a))?;
        return Ok(r.value / a);
    }
    let nt = n as f64 * t;
    let r = quad.integrate(|s| (nt - s).powf(a - 1.0) * f.eval(s), 0.0, t)?;
    Ok(r.value)
}

const COMPOSITE_NODES: usize = 20;
const COMPOSITE_LEVELS: i32 = 60;
const COMPOSITE_PANELS: usize = 16;

/// Same integral as [`kernel_moment`] by a fixed composite rule, without
/// substitution or adaptivity.
///
/// Writing `r = nT - s`, the integral is `∫_{(n-1)T}^{nT} r^{α-1} f(nT - r) dr`.
/// For `n = 1` the panels are geometric in `r` (`[T/2^{i+1}, T/2^i]`, 60
/// levels), each with 20-point Gauss–Legendre, so every panel sits at least
/// its own width away from the singularity. The last cell `[0, T/2^60]`
/// contributes `f(T)·r^α/α` analytically. For `n ≥ 2` sixteen equal panels
/// are used.
pub fn kernel_moment_composite(f: &PeriodicSignal, alpha: FracOrder, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(PeriodicityError::ZeroIndex);
    }
    let a = alpha.get();
    let t = f.period();
    let nt = n as f64 * t;
    let (x, w) = gauss_legendre(COMPOSITE_NODES);
    let integrand = |r: f64| r.powf(a - 1.0) * f.eval(nt - r);
    let mut acc = 0.0;
    if n == 1 {
        let mut hi = t;
        for _ in 0..COMPOSITE_LEVELS {
            let lo = 0.5 * hi;
            acc += apply_rule(&integrand, &x, &w, lo, hi);
            hi = lo;
        }
        acc += f.eval(t) * hi.powf(a) / a;
    } else {
        let lo = nt - t;
        let width = t / COMPOSITE_PANELS as f64;
        for i in 0..COMPOSITE_PANELS {
            let a0 = lo + width * i as f64;
            acc += apply_rule(&integrand, &x, &w, a0, a0 + width);
        }
    }
    Ok(acc)
}

/// `φ(t) = ∫₀^T (T + t - s)^{α-1} f(s) ds` for `t ≥ 0`.
///
/// Uses `u = (T + t - s)^α - t^α`, turning the integral into
/// `(1/α) ∫₀^{(T+t)^α - t^α} f(T + t - (u + t^α)^{1/α}) du`, smooth for all
/// `t ≥ 0` including the singular case `t = 0`.
pub fn shifted_kernel_integral(f: &PeriodicSignal, alpha: FracOrder, t: f64, quad: &Quadrature) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(PeriodicityError::NegativeArgument(t));
    }
    let a = alpha.get();
    let p = f.period();
    let ta = t.powf(a);
    let upper = (p + t).powf(a) - ta;
    let inv = 1.0 / a;
    let r = quad.integrate(|u| f.eval(p + t - (u + ta).powf(inv)), 0.0, upper)?;
    Ok(r.value / a)
}

/// `ψ(t) = ∫₀^T (T - s + t)^α f(s) ds` for `t ≥ 0`.
pub fn psi_integral(f: &PeriodicSignal, alpha: FracOrder, t: f64, quad: &Quadrature) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(PeriodicityError::NegativeArgument(t));
    }
    let a = alpha.get();
    let p = f.period();
    let r = quad.integrate(|s| (p - s + t).powf(a) * f.eval(s), 0.0, p)?;
    Ok(r.value)
}

/// `∫₀^T f`, `∫₀^T f⁺` and `∫₀^T f⁻` for one period.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MeanParts {
    /// `∫₀^T f`.
    pub mean: f64,
    /// `∫₀^T max(f, 0)`.
    pub c_plus: f64,
    /// `∫₀^T max(-f, 0)`.
    pub c_minus: f64,
}

/// Integrals of `f`, its positive part and its negative part over one
/// period. `mean` is integrated directly and agrees with
/// `c_plus - c_minus` to quadrature tolerance.
pub fn mean_abs_parts(f: &PeriodicSignal, quad: &Quadrature) -> Result<MeanParts> {
    let p = f.period();
    let mean = quad.integrate(|s| f.eval(s), 0.0, p)?.value;
    let c_plus = quad.integrate(|s| f.eval(s).max(0.0), 0.0, p)?.value;
    let c_minus = quad.integrate(|s| (-f.eval(s)).max(0.0), 0.0, p)?.value;
    Ok(MeanParts { mean, c_plus, c_minus })
}

/// Sandwich `(t^α c - (T+t)^α c, (T+t)^α c - t^α c)` for `ψ(t)`, where
/// `c = ∫₀^T f⁺ = ∫₀^T f⁻` for mean-zero `f`.
pub fn psi_bound(f: &PeriodicSignal, alpha: FracOrder, t: f64, quad: &Quadrature) -> Result<(f64, f64)> {
    if !(t >= 0.0) {
        return Err(PeriodicityError::NegativeArgument(t));
    }
    let parts = mean_abs_parts(f, quad)?;
    if parts.mean.abs() > MEAN_ZERO_TOL {
        return Err(PeriodicityError::MeanNotZero(parts.mean));
    }
    let c = 0.5 * (parts.c_plus + parts.c_minus);
    let a = alpha.get();
    let spread = c * ((f.period() + t).powf(a) - t.powf(a));
    Ok((-spread, spread))
}

/// Absolute tolerance used for the `i`-th moment: the base tolerance scaled
/// by `∫₀^T t^i dt` when that exceeds one.
pub fn moment_tolerance(base: f64, period: f64, i: usize) -> f64 {
    let scale = period.powi(i as i32 + 1) / (i as f64 + 1.0);
    base * scale.max(1.0)
}

/// `[∫₀^T f(t) t^i dt for i = 0..=k_max]`.
pub fn moment_sequence(f: &PeriodicSignal, k_max: usize, quad: &Quadrature) -> Result<Vec<f64>> {
    let p = f.period();
    (0..=k_max)
        .map(|i| {
            let q = Quadrature {
                abs_tol: moment_tolerance(quad.abs_tol, p, i),
                ..*quad
            };
            Ok(q.integrate(|t| f.eval(t) * t.powi(i as i32), 0.0, p)?.value)
        })
        .collect()
}

/// Failure of a sampled function to repeat with a candidate period.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DefectReport {
    /// Requested candidate period `T̃`.
    pub candidate_period: f64,
    /// `T̃` rounded to the nearest positive multiple of the grid step.
    pub snapped_period: f64,
    /// `|candidate_period - snapped_period|`.
    pub snap_distance: f64,
    /// `max |g(t + T̃) - g(t)|` over the window.
    pub sup_defect: f64,
    /// `(∫ |g(t + T̃) - g(t)|² dt)^{1/2}` over the window, trapezoid rule.
    pub l2_defect: f64,
    /// Window `[lo, hi]` of base points `t`.
    pub window: (f64, f64),
    /// Number of sampled differences.
    pub samples: usize,
}

/// Sup and L2 norms of `t ↦ g(t + T̃) - g(t)` over `[0, t_end - T̃]`, with
/// `T̃` snapped to a multiple of the grid step.
pub fn defect(g: &GridFunction, period: f64) -> Result<DefectReport> {
    if !(period.is_finite() && period > 0.0) {
        return Err(PeriodicityError::BadPeriod(period));
    }
    let grid = g.grid();
    let h = grid.step();
    let n = grid.intervals();
    let shift = ((period / h).round() as usize).max(1);
    let snapped = shift as f64 * h;
    if shift >= n {
        return Err(PeriodicityError::WindowTooShort {
            t_end: grid.t_end(),
            period: snapped,
        });
    }
    let v = g.values();
    let samples = n + 1 - shift;
    let mut sup: f64 = 0.0;
    let mut sq = 0.0;
    for k in 0..samples {
        let d = v[k + shift] - v[k];
        sup = sup.max(d.abs());
        let w = if k == 0 || k == samples - 1 { 0.5 } else { 1.0 };
        sq += w * d * d;
    }
    Ok(DefectReport {
        candidate_period: period,
        snapped_period: snapped,
        snap_distance: (period - snapped).abs(),
        sup_defect: sup,
        l2_defect: (sq * h).sqrt(),
        window: (0.0, grid.node(n - shift)),
        samples,
    })
}

/// [`defect`] at `steps` equally spaced candidates in `[lo, hi]` (a single
/// candidate when `lo == hi` or `steps ≤ 1`), sorted by `sup_defect`
/// ascending with ties broken by the candidate period.
pub fn defect_scan(g: &GridFunction, lo: f64, hi: f64, steps: usize) -> Result<Vec<DefectReport>> {
    if !(lo > 0.0 && hi >= lo && hi < g.grid().t_end()) {
        return Err(PeriodicityError::BadRange { lo, hi });
    }
    let candidates: Vec<f64> = if lo == hi || steps <= 1 {
        alloc::vec![lo]
    } else {
        let d = (hi - lo) / (steps - 1) as f64;
        (0..steps)
            .map(|i| if i == steps - 1 { hi } else { lo + d * i as f64 })
            .collect()
    };
    let mut reports = candidates
        .into_iter()
        .map(|p| defect(g, p))
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| {
        a.sup_defect
            .total_cmp(&b.sup_defect)
            .then(a.candidate_period.total_cmp(&b.candidate_period))
    });
    Ok(reports)
}
