//! Signal registry strings: `sin`, `cos`, `const:c`, `poly:p` and
//! `csv:PATH`.

use std::f64::consts::TAU;
use std::path::PathBuf;

use anyhow::{anyhow, bail};
use fracperiod_core::periodicity::PeriodicSignal;
use fracperiod_core::{GridFunction, UniformGrid};

use crate::io;

#[derive(Clone, Debug, PartialEq)]
pub enum Signal {
    /// `sin(2πt/P)`; plain `sin t` when no period is given.
    Sin,
    Cos,
    Const(f64),
    /// `t^p`, `p ≥ 0`.
    Poly(f64),
    Csv(PathBuf),
}

impl std::str::FromStr for Signal {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let number = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| anyhow!("bad number {v:?} in signal {s:?}"))
        };
        match s.split_once(':') {
            None if s == "sin" => Ok(Signal::Sin),
            None if s == "cos" => Ok(Signal::Cos),
            Some(("const", c)) => {
                let c = number(c)?;
                if !c.is_finite() {
                    bail!("constant must be finite");
                }
                Ok(Signal::Const(c))
            }
            Some(("poly", p)) => {
                let p = number(p)?;
                if !(p >= 0.0 && p.is_finite()) {
                    bail!("poly exponent must be a finite number ≥ 0");
                }
                Ok(Signal::Poly(p))
            }
            Some(("csv", path)) if !path.is_empty() => Ok(Signal::Csv(PathBuf::from(path))),
            _ => bail!("unknown signal {s:?}; expected sin, cos, const:c, poly:p or csv:PATH"),
        }
    }
}

impl Signal {
    fn eval_fn(&self, period: f64) -> Option<Box<dyn Fn(f64) -> f64>> {
        let w = TAU / period;
        match *self {
            Signal::Sin => Some(Box::new(move |t: f64| (w * t).sin())),
            Signal::Cos => Some(Box::new(move |t: f64| (w * t).cos())),
            Signal::Const(c) => Some(Box::new(move |_| c)),
            Signal::Poly(p) => Some(Box::new(move |t: f64| if p == 0.0 { 1.0 } else { t.powf(p) })),
            Signal::Csv(_) => None,
        }
    }

    /// Samples the signal on `[0, t_end]` with `n` intervals, or reads it
    /// from file for `csv:`. A CSV signal carries its own grid, so `t_end`
    /// and `n` must then be `None`.
    pub fn sample(&self, period: Option<f64>, t_end: Option<f64>, n: usize) -> anyhow::Result<GridFunction> {
        if let Signal::Csv(path) = self {
            if t_end.is_some() {
                bail!("csv signals define their own grid; drop --t-end");
            }
            return io::read_grid_function(path);
        }
        let t_end = t_end.ok_or_else(|| anyhow!("--t-end is required for this signal"))?;
        let f = self.eval_fn(period.unwrap_or(TAU)).expect("closed-form signal");
        Ok(UniformGrid::new(t_end, n)?.sample(f)?)
    }

    /// The signal as a validated periodic function with the given period.
    pub fn periodic(&self, period: f64) -> anyhow::Result<PeriodicSignal> {
        Ok(match *self {
            Signal::Sin => PeriodicSignal::sine(period)?,
            Signal::Cos => PeriodicSignal::cosine(period)?,
            Signal::Const(c) => PeriodicSignal::constant(c, period)?,
            Signal::Poly(_) | Signal::Csv(_) => bail!("signal is not periodic; use sin, cos or const:c"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_strings_parse() {
        assert_eq!("sin".parse::<Signal>().unwrap(), Signal::Sin);
        assert_eq!("const:-2.5".parse::<Signal>().unwrap(), Signal::Const(-2.5));
        assert_eq!("poly:2".parse::<Signal>().unwrap(), Signal::Poly(2.0));
        assert_eq!("csv:a/b.csv".parse::<Signal>().unwrap(), Signal::Csv("a/b.csv".into()));
        for bad in ["tan", "const:x", "poly:-1", "csv:", "sin:2"] {
            assert!(bad.parse::<Signal>().is_err(), "{bad}");
        }
    }

    #[test]
    fn sine_period_rescales_argument() {
        let g = Signal::Sin.sample(Some(2.0), Some(1.0), 4).unwrap();
        assert!((g.values()[1] - (std::f64::consts::PI * 0.25).sin()).abs() < 1e-15);
        assert!(Signal::Poly(1.0).periodic(1.0).is_err());
    }
}
