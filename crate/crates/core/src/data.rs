//! Catalog of closed-form data functions (forcing, boundary and initial
//! data, manufactured solutions) with exact derivatives.
//!
//! The coupling algorithms consume `g2'`, `d_x h` and `d_x^2 h` directly, so
//! derivatives are provided analytically rather than by finite differencing:
//! numerical differentiation of the data would contaminate the measured
//! viscosity rates.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CustomAxis {
    Space,
    Time,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DataSpec {
    Zero,
    /// `exp(-width (x - x0)^2)`, space only.
    GaussianBump { x0: f64, width: f64 },
    /// The reference space-time forcing `f(x,t) = f1(t) f2(x,t)` with
    /// `f1(t) = (sin^4(4 pi (t-t0)) + sin^4(2 pi (t-t0))/2) 1_{t>t0}` and
    /// `f2(x,t) = exp(-100 x^2/4) + exp(-100 (x - t/4 - 0.4)^2)
    ///          + exp(-100 (x + t/2 + 0.4)^2)`.
    PaperForcing { t0: f64 },
    /// `exp(-decay t) sin(freq (x + offset))`, used to manufacture solutions.
    SineManufactured { decay: f64, freq: f64, offset: f64 },
    /// `exp(alpha x + beta t)`.
    ExpEigen { alpha: f64, beta: f64 },
    /// Tabulated values along one axis, linearly interpolated.
    /// Derivative queries are rejected.
    Custom {
        axis: CustomAxis,
        coords: Vec<f64>,
        values: Vec<f64>,
    },
}

impl DataSpec {
    pub fn gaussian_bump(x0: f64) -> Self {
        DataSpec::GaussianBump { x0, width: 100.0 }
    }

    /// Value at `(x, t)`.
    ///
    /// Panics for `Custom` data queried outside its tabulated range; use
    /// [`DataSpec::eval_checked`] where the query point is not known to be
    /// inside the domain.
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.eval_checked(x, t)
            .expect("data evaluated outside its domain")
    }

    pub fn eval_checked(&self, x: f64, t: f64) -> Result<f64> {
        Ok(match self {
            DataSpec::Zero => 0.0,
            DataSpec::GaussianBump { x0, width } => (-width * (x - x0) * (x - x0)).exp(),
            DataSpec::PaperForcing { t0 } => f1(t - t0) * f2(x, t),
            DataSpec::SineManufactured { decay, freq, offset } => {
                (-decay * t).exp() * (freq * (x + offset)).sin()
            }
            DataSpec::ExpEigen { alpha, beta } => (alpha * x + beta * t).exp(),
            DataSpec::Custom { axis, coords, values } => {
                let s = match axis {
                    CustomAxis::Space => x,
                    CustomAxis::Time => t,
                };
                interp1(coords, values, s)?
            }
        })
    }

    /// Exact time derivative at `(x, t)`.
    pub fn eval_dt(&self, x: f64, t: f64) -> Result<f64> {
        Ok(match self {
            DataSpec::Zero => 0.0,
            DataSpec::GaussianBump { .. } => 0.0,
            DataSpec::PaperForcing { t0 } => {
                let s = t - t0;
                f1_prime(s) * f2(x, t) + f1(s) * f2_dt(x, t)
            }
            DataSpec::SineManufactured { decay, freq, offset } => {
                -decay * (-decay * t).exp() * (freq * (x + offset)).sin()
            }
            DataSpec::ExpEigen { alpha, beta } => beta * (alpha * x + beta * t).exp(),
            DataSpec::Custom { .. } => return Err(Error::DerivativeUnsupported("d/dt")),
        })
    }

    /// Exact first spatial derivative at `(x, t)`.
    pub fn eval_dx(&self, x: f64, t: f64) -> Result<f64> {
        Ok(match self {
            DataSpec::Zero => 0.0,
            DataSpec::GaussianBump { x0, width } => {
                let s = x - x0;
                -2.0 * width * s * (-width * s * s).exp()
            }
            DataSpec::PaperForcing { t0 } => f1(t - t0) * f2_dx(x, t),
            DataSpec::SineManufactured { decay, freq, offset } => {
                freq * (-decay * t).exp() * (freq * (x + offset)).cos()
            }
            DataSpec::ExpEigen { alpha, beta } => alpha * (alpha * x + beta * t).exp(),
            DataSpec::Custom { .. } => return Err(Error::DerivativeUnsupported("d/dx")),
        })
    }

    /// Exact second spatial derivative at `(x, t)`.
    pub fn eval_dxx(&self, x: f64, t: f64) -> Result<f64> {
        Ok(match self {
            DataSpec::Zero => 0.0,
            DataSpec::GaussianBump { x0, width } => {
                let s = x - x0;
                (4.0 * width * width * s * s - 2.0 * width) * (-width * s * s).exp()
            }
            DataSpec::PaperForcing { t0 } => f1(t - t0) * f2_dxx(x, t),
            DataSpec::SineManufactured { decay, freq, offset } => {
                -freq * freq * (-decay * t).exp() * (freq * (x + offset)).sin()
            }
            DataSpec::ExpEigen { alpha, beta } => alpha * alpha * (alpha * x + beta * t).exp(),
            DataSpec::Custom { .. } => return Err(Error::DerivativeUnsupported("d2/dx2")),
        })
    }

    pub fn supports_derivatives(&self) -> bool {
        !matches!(self, DataSpec::Custom { .. })
    }
}

const PI: f64 = std::f64::consts::PI;

/// `(sin^4(4 pi s) + sin^4(2 pi s)/2) 1_{s>0}`; vanishes to fourth order at
/// `s = 0`, so the forcing is C^3 across its switch-on time.
fn f1(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let s4 = (4.0 * PI * s).sin();
    let s2 = (2.0 * PI * s).sin();
    s4.powi(4) + 0.5 * s2.powi(4)
}

fn f1_prime(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let (a, b) = (4.0 * PI * s, 2.0 * PI * s);
    16.0 * PI * a.sin().powi(3) * a.cos() + 4.0 * PI * b.sin().powi(3) * b.cos()
}

fn f2(x: f64, t: f64) -> f64 {
    let s1 = x - t / 4.0 - 0.4;
    let s2 = x + t / 2.0 + 0.4;
    (-25.0 * x * x).exp() + (-100.0 * s1 * s1).exp() + (-100.0 * s2 * s2).exp()
}

fn f2_dx(x: f64, t: f64) -> f64 {
    let s1 = x - t / 4.0 - 0.4;
    let s2 = x + t / 2.0 + 0.4;
    -50.0 * x * (-25.0 * x * x).exp()
        - 200.0 * s1 * (-100.0 * s1 * s1).exp()
        - 200.0 * s2 * (-100.0 * s2 * s2).exp()
}

fn f2_dxx(x: f64, t: f64) -> f64 {
    let s1 = x - t / 4.0 - 0.4;
    let s2 = x + t / 2.0 + 0.4;
    (2500.0 * x * x - 50.0) * (-25.0 * x * x).exp()
        + (40000.0 * s1 * s1 - 200.0) * (-100.0 * s1 * s1).exp()
        + (40000.0 * s2 * s2 - 200.0) * (-100.0 * s2 * s2).exp()
}

fn f2_dt(x: f64, t: f64) -> f64 {
    let s1 = x - t / 4.0 - 0.4;
    let s2 = x + t / 2.0 + 0.4;
    50.0 * s1 * (-100.0 * s1 * s1).exp() - 100.0 * s2 * (-100.0 * s2 * s2).exp()
}

fn interp1(coords: &[f64], values: &[f64], s: f64) -> Result<f64> {
    if coords.len() < 2 || coords.len() != values.len() {
        return Err(Error::InvalidSpec("tabulated data needs matching coords/values, len >= 2".into()));
    }
    if s < coords[0] || s > *coords.last().unwrap() {
        return Err(Error::OutOfRange(s));
    }
    let i = match coords.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
        Ok(i) => return Ok(values[i]),
        Err(i) => i - 1,
    };
    let w = (s - coords[i]) / (coords[i + 1] - coords[i]);
    Ok(values[i] * (1.0 - w) + values[i + 1] * w)
}
