//! Space-time norms, viscosity sweeps against the monodomain reference, and
//! log-log slope fitting.

use rayon::prelude::*;

use crate::coupling::{solve_coupled, solve_monodomain, split_grid};
use crate::error::{Error, Result};
use crate::grid::{Field, Grid, TimeGrid};
use crate::problem::{CouplingMethod, ProblemSpec};

/// Trapezoidal `L^2` norm over space and time.
pub fn l2_spacetime(f: &Field) -> f64 {
    let dx = f.grid.dx();
    let dt = f.time.dt();
    let (nx, nt) = (f.grid.n_nodes(), f.time.n_levels());
    let mut s = 0.0;
    for n in 0..nt {
        let wt = if n == 0 || n == nt - 1 { 0.5 } else { 1.0 };
        let row = f.row(n);
        for (j, v) in row.iter().enumerate() {
            let wx = if j == 0 || j == nx - 1 { 0.5 } else { 1.0 };
            s += wt * wx * v * v;
        }
    }
    (s * dx * dt).sqrt()
}

/// `L^2(x,t)` norm of the difference of two fields on the same grids.
pub fn l2_spacetime_diff(f: &Field, g: &Field) -> Result<f64> {
    if f.grid != g.grid || f.time != g.time {
        return Err(Error::InvalidSpec("fields live on different grids".into()));
    }
    let dx = f.grid.dx();
    let dt = f.time.dt();
    let (nx, nt) = (f.grid.n_nodes(), f.time.n_levels());
    let mut s = 0.0;
    for n in 0..nt {
        let wt = if n == 0 || n == nt - 1 { 0.5 } else { 1.0 };
        let (fr, gr) = (f.row(n), g.row(n));
        for j in 0..nx {
            let wx = if j == 0 || j == nx - 1 { 0.5 } else { 1.0 };
            let d = fr[j] - gr[j];
            s += wt * wx * d * d;
        }
    }
    Ok((s * dx * dt).sqrt())
}

/// Least-squares line through `(log nu, log err)`, plus consecutive-pair
/// slopes for saturation diagnosis.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub pair_slopes: Vec<f64>,
}

pub fn fit_slope(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 2 {
        return Err(Error::InsufficientData);
    }
    if points.iter().any(|(nu, err)| !(*nu > 0.0) || !(*err > 0.0)) {
        return Err(Error::InsufficientData);
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(n, e)| (n.ln(), e.ln())).collect();
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|(x, _)| x).sum();
    let sy: f64 = logs.iter().map(|(_, y)| y).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = logs.iter().map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom == 0.0 {
        return Err(Error::InsufficientData);
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let pair_slopes = logs
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
        .collect();
    Ok(SlopeFit { slope, intercept, pair_slopes })
}

/// One row of an error-versus-viscosity table.
#[derive(Clone, Debug)]
pub struct ErrorRecord {
    pub nu: f64,
    pub method: CouplingMethod,
    /// `||u - u_ad||_{L^2(x,t)}` on `Omega_1`.
    pub err_omega1: f64,
    /// `||u - u_a||_{L^2(x,t)}` on `Omega_2`.
    pub err_omega2: f64,
    pub dx: f64,
    pub dt: f64,
    /// Cell Peclet number `|a| dx / nu`.
    pub peclet: f64,
    /// Whether the run satisfies the resolution policy; unresolved records
    /// are kept in the table but excluded from default slope fits.
    pub resolved: bool,
    pub failure: Option<String>,
}

/// Resolution policy: the cell Peclet number must not exceed 2 and, for
/// `a < 0`, the inflow boundary layer of width `nu/|a|` must span at least
/// five cells.
pub fn is_resolved(a: f64, dx: f64, nu: f64) -> bool {
    let peclet = a.abs() * dx / nu;
    if peclet > 2.0 {
        return false;
    }
    if a < 0.0 && nu / a.abs() < 5.0 * dx {
        return false;
    }
    true
}

/// Run every `(nu, method)` cell: solve the monodomain reference and the
/// coupled method on the same grid and record the subdomain errors.
///
/// Cells run in parallel; the output order is by `nu_list` then `methods`
/// order, independent of completion order. Failed cells are recorded with a
/// failure message and the sweep continues.
pub fn run_sweep(
    template: &ProblemSpec,
    grid: &Grid,
    time: &TimeGrid,
    nu_list: &[f64],
    methods: &[CouplingMethod],
) -> Vec<ErrorRecord> {
    let dx = grid.dx();
    let dt = time.dt();
    nu_list
        .par_iter()
        .map(|&nu| {
            let spec = ProblemSpec { nu, ..template.clone() };
            let resolved = is_resolved(spec.a, dx, nu);
            let peclet = spec.a.abs() * dx / nu;
            let base = |method: &CouplingMethod| ErrorRecord {
                nu,
                method: method.clone(),
                err_omega1: f64::NAN,
                err_omega2: f64::NAN,
                dx,
                dt,
                peclet,
                resolved,
                failure: None,
            };
            let reference = match solve_monodomain(&spec, grid, time) {
                Ok(r) => r,
                Err(e) => {
                    return methods
                        .iter()
                        .map(|m| ErrorRecord { failure: Some(format!("reference: {e}")), ..base(m) })
                        .collect::<Vec<_>>();
                }
            };
            let subgrids = match split_grid(&spec, grid) {
                Ok(g) => g,
                Err(e) => {
                    return methods
                        .iter()
                        .map(|m| ErrorRecord { failure: Some(e.to_string()), ..base(m) })
                        .collect();
                }
            };
            let (omega1, omega2) = subgrids;
            let ref1 = reference.restrict(&omega1).expect("omega1 is a subgrid");
            let ref2 = reference.restrict(&omega2).expect("omega2 is a subgrid");
            methods
                .iter()
                .map(|m| {
                    let mut rec = base(m);
                    match m {
                        CouplingMethod::Monodomain => {
                            rec.err_omega1 = 0.0;
                            rec.err_omega2 = 0.0;
                        }
                        _ => match solve_coupled(&spec, grid, time, m) {
                            Ok(sol) => {
                                rec.err_omega1 =
                                    l2_spacetime_diff(&ref1, &sol.u_ad).expect("same grids");
                                rec.err_omega2 =
                                    l2_spacetime_diff(&ref2, &sol.u_a).expect("same grids");
                            }
                            Err(e) => rec.failure = Some(e.to_string()),
                        },
                    }
                    rec
                })
                .collect()
        })
        .flatten()
        .collect()
}
