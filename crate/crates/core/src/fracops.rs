//! Discrete Riemann–Liouville integral, Caputo derivative and
//! Riemann–Liouville derivative on uniform grids.
//!
//! * `I^α` uses product integration: `f` is replaced by its piecewise-linear
//!   interpolant and each subinterval's moment against `(t_k - s)^{α-1}` is
//!   taken in closed form.
//! * `ᶜD^α` is the L1 scheme: piecewise-constant difference quotients against
//!   exact moments of `(t_k - s)^{-α}`.
//! * `D^α f = ᶜD^α f + f(0) t^{-α} / Γ(1-α)`, with the singular term added
//!   analytically.
//!
//! All sums run in a fixed order, so results do not depend on anything but
//! the inputs.

use alloc::vec::Vec;

use crate::grid::{FracOrder, GridFunction};
use crate::kernel::{difference_weights, TrapezoidWeights};
use crate::specfun::gamma;

fn gamma_of(x: f64) -> f64 {
    // arguments here lie in (0, 3)
    gamma(x).expect("gamma is finite on (0, 3)")
}

/// `I^α f` at every node; `I^α f(0) = 0`.
pub fn frac_integral(f: &GridFunction, alpha: FracOrder) -> GridFunction {
    let a = alpha.get();
    let grid = *f.grid();
    let n = grid.intervals();
    let scale = grid.step().powf(a) / gamma_of(a + 2.0);
    let w = TrapezoidWeights::new(a, n);
    let fv = f.values();
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    for k in 1..=n {
        out.push(scale * (w.history(fv, k) + fv[k]));
    }
    GridFunction::from_raw(grid, out)
}

/// `ᶜD^α f` at every node by the L1 scheme; node 0 is set to 0.
///
/// The samples should come from a function with an integrable derivative;
/// the scheme has no way to check that.
pub fn caputo_derivative(f: &GridFunction, alpha: FracOrder) -> GridFunction {
    let a = alpha.get();
    let grid = *f.grid();
    let n = grid.intervals();
    let scale = grid.step().powf(-a) / gamma_of(2.0 - a);
    let c = difference_weights(1.0 - a, n);
    let fv = f.values();
    let diffs: Vec<f64> = fv.windows(2).map(|w| w[1] - w[0]).collect();
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    for k in 1..=n {
        let mut acc = 0.0;
        for j in 0..k {
            acc += c[k - 1 - j] * diffs[j];
        }
        out.push(scale * acc);
    }
    GridFunction::from_raw(grid, out)
}

/// Riemann–Liouville derivative on the grid.
///
/// When `f(0) ≠ 0` the derivative is unbounded at the origin; the value
/// stored at node 0 is then a placeholder (the Caputo part, 0) and
/// `singular_at_origin` is set so callers exclude it.
#[derive(Clone, Debug, PartialEq)]
pub struct RlDerivative {
    /// Node values; see `singular_at_origin` for node 0.
    pub values: GridFunction,
    /// `f(0) ≠ 0`, so node 0 carries no meaningful value.
    pub singular_at_origin: bool,
}

impl RlDerivative {
    /// First node index holding a meaningful value.
    pub fn first_valid(&self) -> usize {
        usize::from(self.singular_at_origin)
    }
}

/// `D^α f`, computed as `ᶜD^α f + f(0) t^{-α} / Γ(1-α)`.
pub fn rl_derivative(f: &GridFunction, alpha: FracOrder) -> RlDerivative {
    let a = alpha.get();
    let f0 = f.first();
    let caputo = caputo_derivative(f, alpha);
    if f0 == 0.0 {
        return RlDerivative {
            values: caputo,
            singular_at_origin: false,
        };
    }
    let grid = *f.grid();
    let coeff = f0 / gamma_of(1.0 - a);
    let mut values = caputo.into_values();
    for (k, v) in values.iter_mut().enumerate().skip(1) {
        *v += coeff * grid.node(k).powf(-a);
    }
    RlDerivative {
        values: GridFunction::from_raw(grid, values),
        singular_at_origin: true,
    }
}

/// `‖I^α(ᶜD^α f) − (f − f(0))‖∞` over nodes `k ≥ 1`, a consistency
/// diagnostic for the pair of schemes.
pub fn compose_check(f: &GridFunction, alpha: FracOrder) -> f64 {
    let back = frac_integral(&caputo_derivative(f, alpha), alpha);
    let f0 = f.first();
    back.values()
        .iter()
        .zip(f.values())
        .skip(1)
        .map(|(b, v)| (b - (v - f0)).abs())
        .fold(0.0, f64::max)
}

/// `‖D^α(I^α f) − f‖∞` over nodes `k ≥ 1`.
pub fn left_inverse_check(f: &GridFunction, alpha: FracOrder) -> f64 {
    let d = rl_derivative(&frac_integral(f, alpha), alpha);
    d.values.max_abs_diff(f, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::UniformGrid;

    fn order(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn integral_of_zero_is_zero() {
        let g = UniformGrid::new(3.0, 30).unwrap();
        let z = g.sample(|_| 0.0).unwrap();
        assert!(frac_integral(&z, order(0.4)).values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn integral_of_linear_functions_is_exact() {
        // product integration is exact for piecewise-linear data
        let g = UniformGrid::new(2.0, 40).unwrap();
        let f = g.sample(|t| 3.0 - 0.5 * t).unwrap();
        let a = 0.35;
        let out = frac_integral(&f, order(a));
        for (k, t) in g.nodes().enumerate() {
            let exact = 3.0 * t.powf(a) / gamma(a + 1.0).unwrap() - 0.5 * t.powf(a + 1.0) / gamma(a + 2.0).unwrap();
            assert!((out.values()[k] - exact).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn caputo_of_constant_vanishes() {
        let g = UniformGrid::new(5.0, 100).unwrap();
        let c = g.sample(|_| 2.5).unwrap();
        assert!(caputo_derivative(&c, order(0.7)).values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn caputo_of_identity_is_exact() {
        let a = 0.5;
        let g = UniformGrid::new(1.0, 50).unwrap();
        let f = g.sample(|t| t).unwrap();
        let d = caputo_derivative(&f, order(a));
        for (k, t) in g.nodes().enumerate() {
            let exact = t.powf(1.0 - a) / gamma(2.0 - a).unwrap();
            assert!((d.values()[k] - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn rl_derivative_of_constant_and_zero_start() {
        let a = 0.5;
        let g = UniformGrid::new(1.0, 100).unwrap();
        let one = g.sample(|_| 1.0).unwrap();
        let d = rl_derivative(&one, order(a));
        assert!(d.singular_at_origin);
        assert_eq!(d.first_valid(), 1);
        for (k, t) in g.nodes().enumerate().skip(1) {
            let exact = t.powf(-a) / gamma(0.5).unwrap();
            assert!((d.values.values()[k] - exact).abs() < 1e-12);
        }
        let s = g.sample(|t| t * t).unwrap();
        let d = rl_derivative(&s, order(a));
        assert!(!d.singular_at_origin);
        assert_eq!(d.values, caputo_derivative(&s, order(a)));
        let z = g.sample(|_| 0.0).unwrap();
        assert!(rl_derivative(&z, order(a)).values.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn compose_check_of_constant_is_zero() {
        let g = UniformGrid::new(4.0, 64).unwrap();
        let c = g.sample(|_| -1.25).unwrap();
        assert_eq!(compose_check(&c, order(0.5)), 0.0);
    }
}
