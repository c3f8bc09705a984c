//! Closed forms used as references: the Caputo derivative of `sin` in its
//! `1F2` and Mittag-Leffler representations, the non-periodicity ratio built
//! from it, and fractional integrals of powers.

use core::fmt;

use num_complex::Complex64;

use crate::grid::FracOrder;
use crate::specfun::{gamma, hyp1f2, ln_gamma, mittag_leffler, SeriesOptions, SpecialError};

/// Errors from the closed-form evaluators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedFormError {
    /// Negative time argument.
    NegativeTime(f64),
    /// Power exponent `p ≤ -1`.
    BadExponent(f64),
    /// The conjugate-symmetric Mittag-Leffler pair left an imaginary part.
    ImaginaryResidue(f64),
    /// Ratio denominator too close to zero to conclude anything.
    Inconclusive {
        /// The near-zero denominator.
        denominator: f64,
    },
    /// Failure inside a special function.
    Special(SpecialError),
}

impl fmt::Display for ClosedFormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedFormError::NegativeTime(t) => write!(f, "time {t} is negative"),
            ClosedFormError::BadExponent(p) => write!(f, "exponent {p} must exceed -1"),
            ClosedFormError::ImaginaryResidue(im) => {
                write!(f, "imaginary parts failed to cancel (residue {im:e})")
            }
            ClosedFormError::Inconclusive { denominator } => write!(
                f,
                "denominator {denominator:e} is too small; inconclusive at this point"
            ),
            ClosedFormError::Special(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ClosedFormError {}

impl From<SpecialError> for ClosedFormError {
    fn from(e: SpecialError) -> Self {
        ClosedFormError::Special(e)
    }
}

/// Largest tolerated imaginary part after symmetrizing the Mittag-Leffler
/// pair.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// Smallest denominator magnitude accepted by [`nonperiodicity_ratio`].
pub const RATIO_DENOMINATOR_TOL: f64 = 1e-12;

/// `ᶜD^α sin(t) = t^{1-α}/Γ(2-α) · 1F2(1; (3-α)/2, 1-α/2; -t²/4)`.
pub fn caputo_sin_1f2(alpha: FracOrder, t: f64, opts: SeriesOptions) -> Result<f64, ClosedFormError> {
    if !(t >= 0.0) {
        return Err(ClosedFormError::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let a = alpha.get();
    let series = hyp1f2(1.0, 0.5 * (3.0 - a), 1.0 - 0.5 * a, -0.25 * t * t, opts)?.require_converged()?;
    Ok(t.powf(1.0 - a) / gamma(2.0 - a)? * series)
}

/// `ᶜD^α sin(t) = ½ t^{1-α} [E_{1,2-α}(it) + E_{1,2-α}(-it)]`.
///
/// Both series are summed in complex arithmetic; the imaginary parts must
/// cancel to [`IMAG_RESIDUE_TOL`] or the evaluation is rejected.
pub fn caputo_sin_ml(alpha: FracOrder, t: f64, opts: SeriesOptions) -> Result<f64, ClosedFormError> {
    if !(t >= 0.0) {
        return Err(ClosedFormError::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let beta = 2.0 - alpha.get();
    let plus = mittag_leffler(1.0, beta, Complex64::new(0.0, t), opts)?.require_converged()?;
    let minus = mittag_leffler(1.0, beta, Complex64::new(0.0, -t), opts)?.require_converged()?;
    let both = plus + minus;
    if both.im.abs() > IMAG_RESIDUE_TOL {
        return Err(ClosedFormError::ImaginaryResidue(both.im));
    }
    Ok(0.5 * t.powf(1.0 - alpha.get()) * both.re)
}

/// `ᶜD^α sin(t0) / ᶜD^α sin(t0 + T̃)`. Any value other than 1 shows that
/// `ᶜD^α sin` is not `T̃`-periodic.
pub fn nonperiodicity_ratio(
    alpha: FracOrder,
    t0: f64,
    period: f64,
    opts: SeriesOptions,
) -> Result<f64, ClosedFormError> {
    let num = caputo_sin_1f2(alpha, t0, opts)?;
    let den = if period == 0.0 {
        num
    } else {
        caputo_sin_1f2(alpha, t0 + period, opts)?
    };
    if den.abs() < RATIO_DENOMINATOR_TOL {
        return Err(ClosedFormError::Inconclusive { denominator: den });
    }
    Ok(num / den)
}

/// `I^α t^p = Γ(p+1)/Γ(p+1+α) · t^{p+α}` for `p > -1`.
pub fn frac_integral_power(alpha: FracOrder, p: f64, t: f64) -> Result<f64, ClosedFormError> {
    if !(p > -1.0) {
        return Err(ClosedFormError::BadExponent(p));
    }
    if !(t >= 0.0) {
        return Err(ClosedFormError::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let a = alpha.get();
    let log_ratio = ln_gamma(p + 1.0)? - ln_gamma(p + 1.0 + a)?;
    Ok(log_ratio.exp() * t.powf(p + a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o() -> SeriesOptions {
        SeriesOptions::default()
    }

    #[test]
    fn zero_time_gives_zero() {
        let a = FracOrder::new(0.5).unwrap();
        assert_eq!(caputo_sin_1f2(a, 0.0, o()).unwrap(), 0.0);
        assert_eq!(caputo_sin_ml(a, 0.0, o()).unwrap(), 0.0);
        assert_eq!(frac_integral_power(a, 2.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn negative_inputs_are_rejected() {
        let a = FracOrder::new(0.5).unwrap();
        assert!(caputo_sin_1f2(a, -1.0, o()).is_err());
        assert_eq!(
            frac_integral_power(a, -1.0, 1.0),
            Err(ClosedFormError::BadExponent(-1.0))
        );
    }

    #[test]
    fn degenerate_period_gives_unit_ratio() {
        let a = FracOrder::new(0.5).unwrap();
        assert_eq!(nonperiodicity_ratio(a, 2.0, 0.0, o()).unwrap(), 1.0);
    }

    #[test]
    fn ml_radius_propagates() {
        let a = FracOrder::new(0.5).unwrap();
        assert!(matches!(
            caputo_sin_ml(a, 60.0, o()),
            Err(ClosedFormError::Special(SpecialError::OutOfRadius { .. }))
        ));
    }
}
