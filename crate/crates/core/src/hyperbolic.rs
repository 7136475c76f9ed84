//! Implicit upwind solver for the generic transport equation
//! `dv/dt + b dv/dx + eta v = p` on an interval, plus the exact
//! characteristics solution used as an oracle.
//!
//! The scheme is backward Euler in time with first-order upwinding that
//! follows `sign(b)`; it is unconditionally stable, which matters because the
//! modified-advection factor carries the stiff reaction `eta = c + a^2/nu`.

use crate::error::{Error, Result};
use crate::grid::{Field, Grid, TimeGrid, Trace};

pub struct TransportSpec<'a> {
    /// Advection speed, nonzero. Inflow is at `x_min` for `b > 0` and at
    /// `x_max` for `b < 0`.
    pub b: f64,
    /// Reaction coefficient, nonnegative (may be very large).
    pub eta: f64,
    /// Space-time source, sampled implicitly at `(x_j, t_{n+1})`.
    pub rhs: &'a (dyn Fn(f64, f64) -> f64 + Sync),
    /// Inflow data on the shared time grid.
    pub inflow: &'a Trace,
    /// Nodal initial values.
    pub initial: &'a [f64],
    pub grid: Grid,
    pub time: TimeGrid,
}

impl TransportSpec<'_> {
    fn check(&self) -> Result<()> {
        if self.b == 0.0 || !self.b.is_finite() {
            return Err(Error::InvalidSpec("transport speed b must be nonzero".into()));
        }
        if !(self.eta >= 0.0) {
            return Err(Error::InvalidSpec("transport reaction eta must be >= 0".into()));
        }
        if self.inflow.len() != self.time.n_levels() {
            return Err(Error::InvalidSpec("inflow trace length does not match time grid".into()));
        }
        if self.initial.len() != self.grid.n_nodes() {
            return Err(Error::InvalidSpec("initial data length does not match grid".into()));
        }
        Ok(())
    }
}

/// Solve the transport problem with the implicit upwind scheme; each step is
/// a single O(n_cells) sweep from the inflow node.
pub fn solve_transport(s: &TransportSpec) -> Result<Field> {
    s.check()?;
    let grid = s.grid;
    let time = s.time;
    let n = grid.n_cells;
    let (dx, dt) = (grid.dx(), time.dt());

    let corner = if s.b > 0.0 { 0 } else { n };
    let mismatch = (s.inflow.values[0] - s.initial[corner]).abs();
    if mismatch > 1e-8 * (1.0 + s.initial[corner].abs()) {
        log::warn!(
            "transport corner data incompatible at x = {}: inflow(0) = {}, initial = {}",
            grid.node(corner),
            s.inflow.values[0],
            s.initial[corner]
        );
    }

    let mut field = Field::zeros(grid, time);
    field.row_mut(0).copy_from_slice(s.initial);

    let courant = s.b.abs() / dx;
    let denom = 1.0 / dt + courant + s.eta;
    for step in 1..=time.n_steps {
        let t = time.t(step);
        let (prev, cur) = field.prev_cur_rows(step);
        if s.b > 0.0 {
            cur[0] = s.inflow.values[step];
            for j in 1..=n {
                let p = (s.rhs)(grid.node(j), t);
                cur[j] = (prev[j] / dt + courant * cur[j - 1] + p) / denom;
            }
        } else {
            cur[n] = s.inflow.values[step];
            for j in (0..n).rev() {
                let p = (s.rhs)(grid.node(j), t);
                cur[j] = (prev[j] / dt + courant * cur[j + 1] + p) / denom;
            }
        }
        if !cur.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite { context: "solve_transport", step });
        }
    }
    Ok(field)
}

/// Continuous data for the characteristics oracle.
pub struct TransportData<'a> {
    pub initial: &'a dyn Fn(f64) -> f64,
    pub inflow: &'a dyn Fn(f64) -> f64,
    pub source: &'a dyn Fn(f64, f64) -> f64,
}

/// Exact weak solution of the transport problem by integration along
/// characteristics,
/// `v(x,t) = h(x - b t) e^{-eta t} 1_{t < tau}
///         + g(t - tau) e^{-eta tau} 1_{t > tau}
///         + int_{(t-tau)^+}^{t} p(x - b(t-s), s) e^{-eta (t-s)} ds`,
/// with `tau(x)` the travel time from the inflow boundary. The integral is
/// evaluated by adaptive Simpson quadrature to tolerance 1e-10.
pub fn characteristics_oracle(
    b: f64,
    eta: f64,
    interval: (f64, f64),
    data: &TransportData,
    x: f64,
    t: f64,
) -> Result<f64> {
    if b == 0.0 {
        return Err(Error::InvalidSpec("transport speed b must be nonzero".into()));
    }
    let x_in = if b > 0.0 { interval.0 } else { interval.1 };
    let tau = (x - x_in) / b;
    debug_assert!(tau >= -1e-12);

    let mut v = if t < tau {
        (data.initial)(x - b * t) * (-eta * t).exp()
    } else {
        (data.inflow)(t - tau) * (-eta * tau).exp()
    };
    let lower = (t - tau).max(0.0);
    if t > lower {
        let integrand = |s: f64| (data.source)(x - b * (t - s), s) * (-eta * (t - s)).exp();
        v += adaptive_simpson(&integrand, lower, t, 1e-10)?;
    }
    Ok(v)
}

/// Adaptive Simpson quadrature with the standard 1/15 error estimate.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol {
        return Ok(left + right + err / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure { tol, err: err.abs() / 15.0 });
    }
    Ok(simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}
