//! Caputo initial value problems `ᶜD^α u = F(t, u)`, `u(0) = u₀`, solved on
//! their Volterra form `u(t) = u₀ + I^α[F(·, u(·))](t)` with the fractional
//! Adams–Bashforth–Moulton predictor–corrector.
//!
//! The corrector uses the same product-trapezoidal weights as
//! [`crate::fracops::frac_integral`], so the reported residual measures
//! exactly how far the trajectory is from solving the discrete Volterra
//! equation.

use alloc::vec::Vec;
use core::fmt;

use crate::closedforms::caputo_sin_1f2;
use crate::grid::{FracOrder, GridFunction, UniformGrid};
use crate::kernel::{difference_weights, TrapezoidWeights};
use crate::periodicity::{defect_scan, DefectReport, PeriodicityError};
use crate::specfun::{gamma, SeriesOptions};

/// Magnitude at which a solve is abandoned.
pub const BLOW_UP_LIMIT: f64 = 1e12;

/// `|φ(u₀)|` at or below this counts as an equilibrium.
pub const EQUILIBRIUM_TOL: f64 = 1e-12;

/// Time-stepping scheme used for a solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Scheme {
    /// Fractional Adams–Bashforth–Moulton.
    PredictorCorrector,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::PredictorCorrector => f.write_str("predictor-corrector"),
        }
    }
}

/// Solver failures.
#[derive(Clone, PartialEq)]
pub enum SolveError {
    /// `|u|` exceeded [`BLOW_UP_LIMIT`] or became non-finite.
    BlowUp {
        /// Step index where the guard fired.
        step: usize,
        /// Time of that step.
        time: f64,
        /// Accepted values `u_0..u_{step-1}`.
        partial: Vec<f64>,
    },
    /// The initial value is not finite.
    BadInitialValue(f64),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::BlowUp { step, time, .. } => {
                write!(f, "solution blew up at step {step} (t = {time})")
            }
            SolveError::BadInitialValue(u) => write!(f, "initial value {u} is not finite"),
        }
    }
}

impl fmt::Debug for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::BlowUp { step, time, partial } => f
                .debug_struct("BlowUp")
                .field("step", step)
                .field("time", time)
                .field("partial_len", &partial.len())
                .finish(),
            SolveError::BadInitialValue(u) => f.debug_tuple("BadInitialValue").field(u).finish(),
        }
    }
}

impl core::error::Error for SolveError {}

/// Solver controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    /// Corrector sweeps per step.
    pub corrector_sweeps: u32,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { corrector_sweeps: 2 }
    }
}

/// A computed trajectory with solver metadata.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SolveResult {
    /// `u` at the grid nodes; starts at `u₀` exactly.
    pub trajectory: GridFunction,
    /// Scheme used.
    pub scheme: Scheme,
    /// Order `α`.
    pub alpha: FracOrder,
    /// Corrector sweeps per step.
    pub corrector_iterations: u32,
    /// Largest node defect of the discrete Volterra equation.
    pub max_residual: f64,
}

/// Solves `ᶜD^α u = rhs(t, u)`, `u(0) = u0` on `grid`.
pub fn solve_caputo<F>(
    rhs: F,
    alpha: FracOrder,
    u0: f64,
    grid: UniformGrid,
    opts: SolverOptions,
) -> Result<SolveResult, SolveError>
where
    F: Fn(f64, f64) -> f64,
{
    if !u0.is_finite() {
        return Err(SolveError::BadInitialValue(u0));
    }
    let a = alpha.get();
    let n = grid.intervals();
    let h = grid.step();
    let corrector_scale = h.powf(a) / gamma(a + 2.0).expect("finite on (2, 3)");
    let predictor_scale = h.powf(a) / gamma(a + 1.0).expect("finite on (1, 2)");
    let trap = TrapezoidWeights::new(a, n);
    let rect = difference_weights(a, n);

    let mut u = Vec::with_capacity(n + 1);
    let mut f = Vec::with_capacity(n + 1);
    let mut history = Vec::with_capacity(n + 1);
    u.push(u0);
    f.push(rhs(0.0, u0));
    history.push(0.0);

    for k in 1..=n {
        let t = grid.node(k);
        let mut pred = 0.0;
        for (j, fj) in f.iter().enumerate() {
            pred += rect[k - 1 - j] * fj;
        }
        let mut uk = u0 + predictor_scale * pred;
        let hist = trap.history(&f, k);
        for _ in 0..opts.corrector_sweeps {
            uk = u0 + corrector_scale * (hist + rhs(t, uk));
        }
        if !(uk.abs() <= BLOW_UP_LIMIT) {
            return Err(SolveError::BlowUp {
                step: k,
                time: t,
                partial: u,
            });
        }
        u.push(uk);
        f.push(rhs(t, uk));
        history.push(hist);
    }

    let max_residual = (1..=n)
        .map(|k| (u[k] - u0 - corrector_scale * (history[k] + f[k])).abs())
        .fold(0.0, f64::max);

    Ok(SolveResult {
        trajectory: GridFunction::new(grid, u).map_err(|_| SolveError::BadInitialValue(u0))?,
        scheme: Scheme::PredictorCorrector,
        alpha,
        corrector_iterations: opts.corrector_sweeps,
        max_residual,
    })
}

/// True iff `|phi(u0)| ≤ 1e-12`, i.e. `u ≡ u0` solves the autonomous
/// equation `ᶜD^α u = phi(u)`.
pub fn equilibrium_check<P: Fn(f64) -> f64>(phi: P, u0: f64) -> bool {
    phi(u0).abs() <= EQUILIBRIUM_TOL
}

/// Right-hand side `ψ(t, u) = u + ᶜD^α sin(t) − sin(t)`, for which
/// `u = sin t` is an exact solution with `u(0) = 0`.
///
/// Evaluations outside the `1F2` series range return NaN, which the solver's
/// blow-up guard turns into an error.
pub fn periodic_forcing_rhs(alpha: FracOrder, opts: SeriesOptions) -> impl Fn(f64, f64) -> f64 {
    move |t, u| {
        let forcing = caputo_sin_1f2(alpha, t, opts).unwrap_or(f64::NAN);
        u + forcing - t.sin()
    }
}

/// Defect scan of a solved trajectory over candidate periods.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct NonperiodicityCertificate {
    /// Scanned candidate range.
    pub range: (f64, f64),
    /// Number of candidates requested.
    pub steps: usize,
    /// Reports sorted by `sup_defect` ascending.
    pub reports: Vec<DefectReport>,
}

impl NonperiodicityCertificate {
    /// Smallest sup-defect over the scan: the margin by which no candidate
    /// period in the range fits the trajectory.
    pub fn margin(&self) -> f64 {
        self.reports.first().map_or(0.0, |r| r.sup_defect)
    }

    /// Report with the smallest defect.
    pub fn best(&self) -> Option<&DefectReport> {
        self.reports.first()
    }
}

/// Scans the trajectory of `result` for candidate periods in `[lo, hi]`.
///
/// This only covers the scanned range; it says nothing about periods
/// outside it.
pub fn nonperiodicity_certificate(
    result: &SolveResult,
    lo: f64,
    hi: f64,
    steps: usize,
) -> Result<NonperiodicityCertificate, PeriodicityError> {
    let reports = defect_scan(&result.trajectory, lo, hi, steps)?;
    Ok(NonperiodicityCertificate {
        range: (lo, hi),
        steps,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> FracOrder {
        FracOrder::new(0.5).unwrap()
    }

    #[test]
    fn zero_rhs_keeps_initial_value() {
        let g = UniformGrid::new(5.0, 200).unwrap();
        let r = solve_caputo(|_, _| 0.0, half(), 1.75, g, SolverOptions::default()).unwrap();
        assert!(r.trajectory.values().iter().all(|&u| u == 1.75));
        assert_eq!(r.max_residual, 0.0);
        assert_eq!(r.corrector_iterations, 2);
        assert_eq!(r.scheme, Scheme::PredictorCorrector);
    }

    #[test]
    fn equilibria_are_detected() {
        let logistic = |u: f64| u * (1.0 - u);
        assert!(equilibrium_check(logistic, 1.0));
        assert!(!equilibrium_check(logistic, 0.5));
        assert!(equilibrium_check(|u: f64| -u, 0.0));
    }

    #[test]
    fn blow_up_is_reported_with_partial_trajectory() {
        let g = UniformGrid::new(10.0, 400).unwrap();
        let err = solve_caputo(|_, u| u * u, half(), 2.0, g, SolverOptions::default()).unwrap_err();
        match err {
            SolveError::BlowUp { step, partial, .. } => {
                assert_eq!(partial.len(), step);
                assert_eq!(partial[0], 2.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_finite_initial_value_is_rejected() {
        let g = UniformGrid::new(1.0, 10).unwrap();
        assert!(solve_caputo(|_, u| u, half(), f64::NAN, g, SolverOptions::default()).is_err());
    }

    #[test]
    fn constant_trajectory_certificate_is_all_zero() {
        let g = UniformGrid::new(10.0, 500).unwrap();
        let r = solve_caputo(|_, u: f64| u * (1.0 - u), half(), 1.0, g, SolverOptions::default()).unwrap();
        let c = nonperiodicity_certificate(&r, 0.5, 5.0, 20).unwrap();
        assert_eq!(c.reports.len(), 20);
        assert!(c.reports.iter().all(|d| d.sup_defect == 0.0));
        assert_eq!(c.margin(), 0.0);
    }
}
