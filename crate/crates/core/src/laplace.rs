//! Forward Laplace transforms: numeric transforms with analytic power-law
//! tails, the closed form of `L[(T + t)^α]`, the one-period formula for
//! periodic functions, and the `λ → 0⁺` limits behind the moment argument.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::grid::FracOrder;
use crate::periodicity::{moment_sequence, moment_tolerance, PeriodicSignal, PeriodicityError};
use crate::quad::{QuadError, Quadrature};
use crate::specfun::{upper_incomplete_gamma_scaled, SpecialError};

/// Errors from the Laplace helpers.
#[derive(Clone, Debug, PartialEq)]
pub enum LaplaceError {
    /// A transform variable or horizon is not positive.
    NonPositive {
        /// Parameter name.
        what: &'static str,
        /// Offending value.
        value: f64,
    },
    /// Quadrature failure.
    Quad(QuadError),
    /// Special-function failure.
    Special(SpecialError),
    /// Failure while computing moments.
    Periodicity(PeriodicityError),
}

impl fmt::Display for LaplaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LaplaceError::NonPositive { what, value } => write!(f, "{what} = {value} must be positive"),
            LaplaceError::Quad(e) => write!(f, "{e}"),
            LaplaceError::Special(e) => write!(f, "{e}"),
            LaplaceError::Periodicity(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for LaplaceError {}

impl From<QuadError> for LaplaceError {
    fn from(e: QuadError) -> Self {
        LaplaceError::Quad(e)
    }
}

impl From<SpecialError> for LaplaceError {
    fn from(e: SpecialError) -> Self {
        LaplaceError::Special(e)
    }
}

impl From<PeriodicityError> for LaplaceError {
    fn from(e: PeriodicityError) -> Self {
        LaplaceError::Periodicity(e)
    }
}

type Result<T> = core::result::Result<T, LaplaceError>;

fn positive(what: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(LaplaceError::NonPositive { what, value })
    }
}

/// Describes `g(t) = scale · (shift + t)^exponent` for `t ≥ H`, so the part
/// of the transform beyond the horizon can be added in closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerTail {
    /// Multiplier.
    pub scale: f64,
    /// Shift inside the power.
    pub shift: f64,
    /// Exponent, must exceed `-1`.
    pub exponent: f64,
}

impl PowerTail {
    /// `∫_H^∞ scale (shift + t)^p e^{-st} dt
    ///   = scale · s^{-p-1} e^{s·shift} Γ(p+1, s(shift + H))`.
    pub fn transform_beyond(&self, s: f64, horizon: f64) -> Result<f64> {
        let a = self.exponent + 1.0;
        let z = s * (self.shift + horizon);
        let scaled = upper_incomplete_gamma_scaled(a, z)?;
        Ok(self.scale * s.powf(-a) * (-s * horizon).exp() * scaled)
    }
}

/// `∫₀^H g(t) e^{-st} dt` by adaptive quadrature, plus the closed-form tail
/// beyond `H` when `tail` is given.
pub fn laplace_numeric<G: Fn(f64) -> f64>(
    g: G,
    s: f64,
    horizon: f64,
    tail: Option<PowerTail>,
    quad: &Quadrature,
) -> Result<f64> {
    positive("s", s)?;
    positive("horizon", horizon)?;
    let body = quad.integrate(|t| g(t) * (-s * t).exp(), 0.0, horizon)?.value;
    let rest = match tail {
        Some(tail) => tail.transform_beyond(s, horizon)?,
        None => 0.0,
    };
    Ok(body + rest)
}

/// `L[(T + t)^α](s) = s^{-α-1} e^{sT} Γ(α+1, sT)`.
///
/// `e^{sT} Γ(α+1, sT)` is evaluated as one scaled quantity, so the result
/// stays finite when `sT` exceeds the range of `exp`.
pub fn varphi_transform_closed(alpha: FracOrder, period: f64, s: f64) -> Result<f64> {
    positive("s", s)?;
    positive("period", period)?;
    let a = alpha.get() + 1.0;
    let scaled = upper_incomplete_gamma_scaled(a, s * period)?;
    Ok(s.powf(-a) * scaled)
}

/// `L[u](λ) = ∫₀^T u(t) e^{-λt} dt / (1 - e^{-λT})` for `T`-periodic `u`.
pub fn periodic_laplace(u: &PeriodicSignal, lambda: f64, quad: &Quadrature) -> Result<f64> {
    positive("lambda", lambda)?;
    let p = u.period();
    let one_period = quad.integrate(|t| u.eval(t) * (-lambda * t).exp(), 0.0, p)?.value;
    Ok(one_period / -(-lambda * p).exp_m1())
}

/// `(1 - e^{-λT}) / (1 - e^{-λT̃})` for each `λ`; tends to `T/T̃` as
/// `λ → 0⁺`.
pub fn ratio_limit_check(period: f64, other_period: f64, lambdas: &[f64]) -> Result<Vec<f64>> {
    positive("period", period)?;
    positive("other period", other_period)?;
    lambdas
        .iter()
        .map(|&l| {
            positive("lambda", l)?;
            Ok((-l * period).exp_m1() / (-l * other_period).exp_m1())
        })
        .collect()
}

/// Outcome of the moment-extraction argument for one signal.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MomentReport {
    /// `∫₀^T f(t) t^i dt`, `i = 0..=k_max`.
    pub moments: Vec<f64>,
    /// First index whose moment is clearly nonzero.
    pub first_nonzero_index: Option<usize>,
    /// Human-readable conclusion.
    pub verdict: String,
}

/// Moments whose magnitude is below this multiple of the moment's own
/// quadrature tolerance are treated as zero.
pub const MOMENT_ZERO_FACTOR: f64 = 100.0;

/// Computes the moments `∫₀^T f t^i` and reports the first nonzero one. A
/// nonzero moment certifies that `f` has no fractional primitive that is
/// periodic with any period.
pub fn moment_extraction_demo(f: &PeriodicSignal, k_max: usize, quad: &Quadrature) -> Result<MomentReport> {
    let moments = moment_sequence(f, k_max, quad)?;
    let first_nonzero_index = moments
        .iter()
        .enumerate()
        .find(|(i, m)| m.abs() > MOMENT_ZERO_FACTOR * moment_tolerance(quad.abs_tol, f.period(), *i))
        .map(|(i, _)| i);
    let verdict = match first_nonzero_index {
        Some(i) => alloc::format!("moment {i} is nonzero: no fractional primitive of this signal is periodic"),
        None => alloc::format!("all moments zero up to index {k_max}"),
    };
    Ok(MomentReport {
        moments,
        first_nonzero_index,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_function_transforms_to_zero() {
        let v = laplace_numeric(|_| 0.0, 1.0, 10.0, None, &Quadrature::default()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn nonpositive_arguments_are_rejected() {
        let q = Quadrature::default();
        assert!(laplace_numeric(|_| 1.0, 0.0, 1.0, None, &q).is_err());
        let a = FracOrder::new(0.5).unwrap();
        assert!(varphi_transform_closed(a, 1.0, -1.0).is_err());
        assert!(ratio_limit_check(1.0, 2.0, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn equal_periods_give_unit_ratios() {
        let r = ratio_limit_check(2.5, 2.5, &[1.0, 1e-3, 1e-9]).unwrap();
        assert!(r.iter().all(|&x| x == 1.0));
    }

    #[test]
    fn unit_constant_transform() {
        let one = PeriodicSignal::constant(1.0, 3.0).unwrap();
        let q = Quadrature::with_tol(1e-13);
        for l in [0.01, 0.5, 4.0] {
            let v = periodic_laplace(&one, l, &q).unwrap();
            assert!((v - 1.0 / l).abs() < 1e-10 * (1.0 / l), "λ={l}");
        }
    }

    #[test]
    fn zero_signal_has_no_nonzero_moment() {
        let z = PeriodicSignal::constant(0.0, 1.0).unwrap();
        let r = moment_extraction_demo(&z, 4, &Quadrature::default()).unwrap();
        assert_eq!(r.first_nonzero_index, None);
        assert_eq!(r.moments, alloc::vec![0.0; 5]);
    }

    #[test]
    fn closed_form_survives_huge_products() {
        let a = FracOrder::new(0.5).unwrap();
        let v = varphi_transform_closed(a, 1000.0, 1.0).unwrap();
        // ~ T^α / s for sT → ∞
        assert!(v.is_finite() && v > 0.0);
        assert!((v - 1000f64.sqrt()).abs() / 1000f64.sqrt() < 1e-3);
    }
}
