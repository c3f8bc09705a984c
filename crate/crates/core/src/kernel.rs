//! Exact kernel moments of `(t_k - s)^{α-1}` and `(t_k - s)^{-α}` against
//! piecewise-constant and piecewise-linear interpolants on a uniform grid.
//!
//! These weights are shared by [`crate::fracops`] and [`crate::fodesolve`].
//! Differences of large powers are evaluated through binomial series once
//! the index is large enough for the direct form to cancel badly.

use alloc::vec::Vec;

const SERIES_FROM: usize = 8;

/// `Σ_{j ≥ 2, step} C(p, j) x^j`, truncated when terms are negligible.
fn binomial_tail(p: f64, x: f64, even_only: bool) -> f64 {
    // C(p, 1) x is the running coefficient before the loop
    let mut coeff = p * x;
    let mut sum = 0.0;
    let mut j = 1.0;
    loop {
        coeff *= (p - j) * x / (j + 1.0);
        j += 1.0;
        let keep = !even_only || (j as u64).is_multiple_of(2);
        if keep {
            sum += coeff;
        }
        if coeff.abs() <= 1e-18 * sum.abs() || j > 200.0 {
            break;
        }
    }
    sum
}

/// `(m+1)^p - 2m^p + (m-1)^p` for `m ≥ 1`.
pub fn second_difference(p: f64, m: usize) -> f64 {
    if m < SERIES_FROM {
        let mf = m as f64;
        (mf + 1.0).powf(p) - 2.0 * mf.powf(p) + (mf - 1.0).powf(p)
    } else {
        let mf = m as f64;
        2.0 * mf.powf(p) * binomial_tail(p, 1.0 / mf, true)
    }
}

/// `(m+1)^q - m^q` for `m ≥ 0`.
pub fn first_difference(q: f64, m: usize) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let mf = m as f64;
    mf.powf(q) * (q * (1.0 / mf).ln_1p()).exp_m1()
}

/// Endpoint weight `(k-1)^{α+1} - (k-1-α) k^α` of the product trapezoidal
/// rule at `s = 0`, for `k ≥ 1`.
pub fn start_weight(alpha: f64, k: usize) -> f64 {
    let p = alpha + 1.0;
    if k < SERIES_FROM {
        let kf = k as f64;
        (kf - 1.0).powf(p) - (kf - 1.0 - alpha) * kf.powf(alpha)
    } else {
        // k^p [(1 - 1/k)^p - 1 + p/k]
        let kf = k as f64;
        kf.powf(p) * binomial_tail(p, -1.0 / kf, false)
    }
}

/// Weights of the product trapezoidal rule for `I^α` on a uniform grid.
///
/// With `h^α / Γ(α+2)` factored out,
/// `I^α f(t_k) ≈ start[k]·f_0 + Σ_{j=1}^{k-1} inner[k-j]·f_j + f_k`.
#[derive(Clone, Debug)]
pub struct TrapezoidWeights {
    /// `start[k]`, `k = 0..=n` (`start[0]` unused, zero).
    pub start: Vec<f64>,
    /// `inner[m]`, `m = 0..=n` (`inner[0]` unused, zero).
    pub inner: Vec<f64>,
}

impl TrapezoidWeights {
    /// Weights up to index `n`.
    pub fn new(alpha: f64, n: usize) -> Self {
        let p = alpha + 1.0;
        let mut start = Vec::with_capacity(n + 1);
        let mut inner = Vec::with_capacity(n + 1);
        start.push(0.0);
        inner.push(0.0);
        for m in 1..=n {
            start.push(start_weight(alpha, m));
            inner.push(second_difference(p, m));
        }
        TrapezoidWeights { start, inner }
    }

    /// `start[k]·f_0 + Σ_{j=1}^{k-1} inner[k-j]·f_j`, i.e. everything but the
    /// `f_k` term. Summation order is fixed (ascending `j`).
    #[inline]
    pub fn history(&self, f: &[f64], k: usize) -> f64 {
        let mut acc = self.start[k] * f[0];
        for (j, fj) in f.iter().enumerate().take(k).skip(1) {
            acc += self.inner[k - j] * fj;
        }
        acc
    }
}

/// `first_difference(q, m)` for `m = 0..n`.
pub fn difference_weights(q: f64, n: usize) -> Vec<f64> {
    (0..n).map(|m| first_difference(q, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_branch_matches_direct_form() {
        for p in [1.1, 1.5, 1.9] {
            let m = SERIES_FROM;
            let mf = m as f64;
            let direct = (mf + 1.0).powf(p) - 2.0 * mf.powf(p) + (mf - 1.0).powf(p);
            assert!((second_difference(p, m) - direct).abs() < 1e-13);
            let alpha = p - 1.0;
            let direct = (mf - 1.0).powf(p) - (mf - 1.0 - alpha) * mf.powf(alpha);
            assert!((start_weight(alpha, m) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn weights_are_positive() {
        for alpha in [0.05, 0.3, 0.5, 0.95] {
            let w = TrapezoidWeights::new(alpha, 2000);
            assert!(w.start[1..].iter().all(|&x| x > 0.0));
            assert!(w.inner[1..].iter().all(|&x| x > 0.0));
        }
    }

    #[test]
    fn weights_integrate_constants_exactly() {
        // Σ weights = k^{α+1}(α+1) ... i.e. I^α 1 = t^α/Γ(α+1)
        let alpha = 0.4;
        let w = TrapezoidWeights::new(alpha, 500);
        let ones = alloc::vec![1.0; 501];
        for k in [1, 2, 10, 500] {
            let total = w.history(&ones, k) + 1.0;
            let expected = (k as f64).powf(alpha) * (alpha + 1.0);
            assert!((total - expected).abs() < 1e-10 * expected, "k={k}");
        }
    }

    #[test]
    fn first_difference_is_accurate() {
        let q = 0.5;
        let m = 1_000_000usize;
        let exact = 1.0 / ((m as f64 + 1.0).sqrt() + (m as f64).sqrt());
        assert!((first_difference(q, m) - exact).abs() < 1e-16);
    }
}
