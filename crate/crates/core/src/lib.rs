//! Fractional-calculus numerics for studying how periodicity behaves under
//! Riemann–Liouville and Caputo operators.
//!
//! The crate is `no_std` (it needs `alloc`) and has no IO. It provides
//!
//! * [`specfun`]: gamma, upper incomplete gamma, `1F2` and the two-parameter
//!   Mittag-Leffler function, with truncation-error reporting for the series.
//! * [`fracops`]: product-integration fractional integral, L1 Caputo
//!   derivative and the Riemann–Liouville derivative on uniform grids.
//! * [`closedforms`]: closed forms for the Caputo derivative of `sin` and
//!   power-function fractional integrals.
//! * [`periodicity`]: kernel moments, the `ψ` sandwich and periodicity defects
//!   that certify a fractional image of a periodic signal is not periodic.
//! * [`laplace`]: forward Laplace-transform checks and the `λ → 0⁺` limits.
//! * [`fodesolve`]: a fractional Adams–Bashforth–Moulton solver for Caputo
//!   initial value problems.
//!
//! File formats, configuration and the command-line tool live in the
//! `fracperiod` crate.
#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_docs)]
// guards are written `!(x >= 0.0)` so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod dd;
pub mod quad;

pub mod closedforms;
pub mod fodesolve;
pub mod fracops;
pub mod grid;
pub mod kernel;
pub mod laplace;
pub mod periodicity;
pub mod specfun;

pub use grid::{FracOrder, GridError, GridFunction, UniformGrid};
pub use num_complex::Complex64;
pub use quad::{QuadError, Quadrature};
pub use specfun::{SeriesOptions, SeriesResult, SpecialError};
