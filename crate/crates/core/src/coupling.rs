//! Coupling algorithms: the factorization scheme (iterative for `a > 0`,
//! one-shot for `a < 0`), the classical variational and non-variational
//! couplings, the monodomain viscous reference, and the remainder operator.
//!
//! The factorization rests on the operator identity
//! `L_ad = (nu / a^2) (L_ma L_a - R)` with `R = (d/dt + c)^2` and
//! `L_ma = d/dt - a d/dx + c + a^2/nu`; the coupled solves exchange nodal
//! traces at the interface `x = 0` with no interpolation.

use crate::data::DataSpec;
use crate::error::{Error, Result};
use crate::grid::{Field, Grid, TimeGrid, Trace};
use crate::hyperbolic::{solve_transport, TransportSpec};
use crate::parabolic::{solve_advdiff, AdvDiffSpec, RightBc};
use crate::problem::{CouplingMethod, ProblemSpec};

/// Result of a coupled solve: the viscous field on `Omega_1 = (-l1, 0)` and
/// the inviscid field on `Omega_2 = (0, l2)`.
#[derive(Clone, Debug)]
pub struct CoupledSolution {
    pub u_ad: Field,
    pub u_a: Field,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    /// Interface trace history, one entry per sweep/iteration.
    pub interface_traces: Vec<Trace>,
    pub iterations: usize,
    pub converged: bool,
}

/// Split a global grid over `Omega = (-l1, l2)` at the interface `x = 0`.
pub fn split_grid(spec: &ProblemSpec, grid: &Grid) -> Result<(Grid, Grid)> {
    let omega1 = grid.subgrid(-spec.l1, 0.0)?;
    let omega2 = grid.subgrid(0.0, spec.l2)?;
    Ok((omega1, omega2))
}

/// Apply the remainder operator `R = (d/dt + c)^2`, i.e.
/// `w = d2v/dt2 + 2c dv/dt + c^2 v`, nodewise with second-order time
/// differences (central at interior levels, one-sided at `t = 0` and `t = T`).
pub fn apply_remainder(v: &Field, c: f64) -> Result<Field> {
    let levels = v.time.n_levels();
    if levels < 3 {
        return Err(Error::TooFewTimeLevels(levels));
    }
    let dt = v.time.dt();
    let mut w = Field::zeros(v.grid, v.time);
    let last = levels - 1;
    for j in 0..v.grid.n_nodes() {
        for n in 0..levels {
            let (d1, d2);
            if n == 0 {
                d1 = (-3.0 * v.at(0, j) + 4.0 * v.at(1, j) - v.at(2, j)) / (2.0 * dt);
                d2 = if levels >= 4 {
                    (2.0 * v.at(0, j) - 5.0 * v.at(1, j) + 4.0 * v.at(2, j) - v.at(3, j)) / (dt * dt)
                } else {
                    (v.at(0, j) - 2.0 * v.at(1, j) + v.at(2, j)) / (dt * dt)
                };
            } else if n == last {
                d1 = (3.0 * v.at(last, j) - 4.0 * v.at(last - 1, j) + v.at(last - 2, j)) / (2.0 * dt);
                d2 = if levels >= 4 {
                    (2.0 * v.at(last, j) - 5.0 * v.at(last - 1, j) + 4.0 * v.at(last - 2, j)
                        - v.at(last - 3, j))
                        / (dt * dt)
                } else {
                    (v.at(last, j) - 2.0 * v.at(last - 1, j) + v.at(last - 2, j)) / (dt * dt)
                };
            } else {
                d1 = (v.at(n + 1, j) - v.at(n - 1, j)) / (2.0 * dt);
                d2 = (v.at(n + 1, j) - 2.0 * v.at(n, j) + v.at(n - 1, j)) / (dt * dt);
            }
            w.set(n, j, d2 + 2.0 * c * d1 + c * c * v.at(n, j));
        }
    }
    Ok(w)
}

/// Residual of the factorization identity
/// `L_ad = (nu / a^2) (L_ma L_a - R)` evaluated on the exponential
/// eigenfunction `exp(alpha x + beta t)`, on which every operator acts as a
/// scalar symbol. Exact (up to roundoff) for all parameters.
pub fn factorization_identity_check(a: f64, nu: f64, c: f64, alpha: f64, beta: f64) -> f64 {
    let sym_a = beta + a * alpha + c;
    let sym_ma = beta - a * alpha + c + a * a / nu;
    let sym_r = (beta + c) * (beta + c);
    let lhs = nu / (a * a) * (sym_ma * sym_a - sym_r);
    let sym_ad = beta - nu * alpha * alpha + a * alpha + c;
    (lhs - sym_ad).abs()
}

fn data_trace(d: &DataSpec, x: f64, time: &TimeGrid) -> Trace {
    Trace::from_fn(*time, x, |t| d.eval(x, t))
}

fn nodal_initial(d: &DataSpec, grid: &Grid) -> Vec<f64> {
    grid.nodes().map(|x| d.eval(x, 0.0)).collect()
}

/// Monodomain viscous reference on the whole of Omega, with the
/// sign-appropriate boundary operators (absorbing outflow for `a > 0`,
/// Dirichlet on both walls for `a < 0`).
pub fn solve_monodomain(spec: &ProblemSpec, grid: &Grid, time: &TimeGrid) -> Result<Field> {
    let g1 = data_trace(&spec.g1, -spec.l1, time);
    let g2 = data_trace(&spec.g2, spec.l2, time);
    let initial = nodal_initial(&spec.h, grid);
    let rhs = |x: f64, t: f64| spec.f.eval(x, t);
    let right = if spec.a > 0.0 {
        RightBc::Absorbing(&g2)
    } else {
        RightBc::Dirichlet(&g2)
    };
    solve_advdiff(&AdvDiffSpec {
        a: spec.a,
        nu: spec.nu,
        c: spec.c,
        grid: *grid,
        time: *time,
        rhs: &rhs,
        left_bc: &g1,
        right_bc: right,
        initial: &initial,
    })
}

/// Factorization coupling for positive advection: `k_iters` sweeps of
/// advection solve, modified-advection solve carrying the remainder
/// correction, then a viscous solve in `Omega_1` whose interface condition
/// uses the modified-advection trace.
pub fn solve_factorization_pos(
    spec: &ProblemSpec,
    grid: &Grid,
    time: &TimeGrid,
    k_iters: usize,
    initial_guess: Option<&Trace>,
) -> Result<CoupledSolution> {
    if !(spec.a > 0.0) {
        return Err(Error::InvalidSpec("positive-advection algorithm needs a > 0".into()));
    }
    if k_iters == 0 {
        return Err(Error::InvalidSpec("factorization needs k_iters >= 1".into()));
    }
    let (omega1, omega2) = split_grid(spec, grid)?;
    let g1 = data_trace(&spec.g1, -spec.l1, time);
    let g2 = data_trace(&spec.g2, spec.l2, time);
    let h1 = nodal_initial(&spec.h, &omega1);
    let h2 = nodal_initial(&spec.h, &omega2);
    let rhs_f = |x: f64, t: f64| spec.f.eval(x, t);

    // u_ma(., 0) = f(., 0) + nu d_x^2 h, evaluated analytically.
    let init_ma: Vec<f64> = omega2
        .nodes()
        .map(|x| Ok(spec.f.eval(x, 0.0) + spec.nu * spec.h.eval_dxx(x, 0.0)?))
        .collect::<Result<_>>()?;

    let mut interface = match initial_guess {
        Some(t) => {
            if t.len() != time.n_levels() {
                return Err(Error::InvalidSpec("initial guess trace length mismatch".into()));
            }
            t.clone()
        }
        None => Trace::zeros(*time, 0.0),
    };

    let mut diagnostics = Diagnostics::default();
    let mut result: Option<(Field, Field)> = None;
    let scale = spec.a * spec.a / spec.nu;

    for _ in 0..k_iters {
        // (1) L_a u_a = f in Omega_2, inflow at x = 0 from the previous sweep.
        let u_a = solve_transport(&TransportSpec {
            b: spec.a,
            eta: spec.c,
            rhs: &rhs_f,
            inflow: &interface,
            initial: &h2,
            grid: omega2,
            time: *time,
        })?;

        // (2) L_ma u_ma = (a^2/nu) f + R u_a in Omega_2, propagating leftwards
        // from the absorbing wall data g2.
        let rem = apply_remainder(&u_a, spec.c)?;
        let rhs_ma = |x: f64, t: f64| scale * spec.f.eval(x, t) + rem.node_value(x, t);
        let u_ma = solve_transport(&TransportSpec {
            b: -spec.a,
            eta: spec.c + scale,
            rhs: &rhs_ma,
            inflow: &g2,
            initial: &init_ma,
            grid: omega2,
            time: *time,
        })?;
        let ma_trace = u_ma.trace(0);

        // (3) L_ad u_ad = f in Omega_1 with L_a u_ad(0,.) = u_ma(0,.).
        let u_ad = solve_advdiff(&AdvDiffSpec {
            a: spec.a,
            nu: spec.nu,
            c: spec.c,
            grid: omega1,
            time: *time,
            rhs: &rhs_f,
            left_bc: &g1,
            right_bc: RightBc::AdvectionFlux(&ma_trace),
            initial: &h1,
        })?;

        interface = u_ad.trace(omega1.n_cells);
        diagnostics.interface_traces.push(interface.clone());
        diagnostics.iterations += 1;
        result = Some((u_ad, u_a));
    }
    diagnostics.converged = true;
    let (u_ad, u_a) = result.expect("k_iters >= 1");
    Ok(CoupledSolution { u_ad, u_a, diagnostics })
}

/// Factorization coupling for negative advection: three solves, no iteration.
/// The second advection solve carries the remainder correction and closed-form
/// boundary/initial data `L_ma u_a^1(L2,.) = 2 g2' + (2c + a^2/nu) g2 - f(L2,.)`
/// and `L_ma u_a^1(., 0) = f(., 0) - 2a d_x h + a^2 h / nu`.
pub fn solve_factorization_neg(
    spec: &ProblemSpec,
    grid: &Grid,
    time: &TimeGrid,
) -> Result<CoupledSolution> {
    if !(spec.a < 0.0) {
        return Err(Error::InvalidSpec("negative-advection algorithm needs a < 0".into()));
    }
    let (omega1, omega2) = split_grid(spec, grid)?;
    let g1 = data_trace(&spec.g1, -spec.l1, time);
    let g2 = data_trace(&spec.g2, spec.l2, time);
    let h1 = nodal_initial(&spec.h, &omega1);
    let h2 = nodal_initial(&spec.h, &omega2);
    let rhs_f = |x: f64, t: f64| spec.f.eval(x, t);
    let scale = spec.a * spec.a / spec.nu;

    // (1) L_a u_a^1 = f in Omega_2, inflow at L2.
    let u_a1 = solve_transport(&TransportSpec {
        b: spec.a,
        eta: spec.c,
        rhs: &rhs_f,
        inflow: &g2,
        initial: &h2,
        grid: omega2,
        time: *time,
    })?;

    // (2) L_a u_a^2 = (a^2/nu) f + R u_a^1, with analytic data.
    let rem = apply_remainder(&u_a1, spec.c)?;
    let rhs2 = |x: f64, t: f64| scale * spec.f.eval(x, t) + rem.node_value(x, t);
    if !spec.g2.supports_derivatives() {
        return Err(Error::DerivativeUnsupported("g2' for the a < 0 algorithm"));
    }
    let bnd2 = {
        let l2 = spec.l2;
        let g2d = &spec.g2;
        let f = &spec.f;
        let c = spec.c;
        Trace::from_fn(*time, l2, |t| {
            2.0 * g2d.eval_dt(l2, t).expect("checked above") + (2.0 * c + scale) * g2d.eval(l2, t)
                - f.eval(l2, t)
        })
    };
    let init2: Vec<f64> = omega2
        .nodes()
        .map(|x| {
            Ok(spec.f.eval(x, 0.0) - 2.0 * spec.a * spec.h.eval_dx(x, 0.0)?
                + spec.a * spec.a * spec.h.eval(x, 0.0) / spec.nu)
        })
        .collect::<Result<_>>()?;
    let u_a2 = solve_transport(&TransportSpec {
        b: spec.a,
        eta: spec.c,
        rhs: &rhs2,
        inflow: &bnd2,
        initial: &init2,
        grid: omega2,
        time: *time,
    })?;
    let a2_trace = u_a2.trace(0);

    // (3) L_ad u_ad = f in Omega_1 with L_ma u_ad(0,.) = u_a^2(0,.).
    let u_ad = solve_advdiff(&AdvDiffSpec {
        a: spec.a,
        nu: spec.nu,
        c: spec.c,
        grid: omega1,
        time: *time,
        rhs: &rhs_f,
        left_bc: &g1,
        right_bc: RightBc::TransportRobin(&a2_trace),
        initial: &h1,
    })?;

    Ok(CoupledSolution {
        u_ad,
        u_a: u_a1,
        diagnostics: Diagnostics {
            interface_traces: vec![a2_trace],
            iterations: 1,
            converged: true,
        },
    })
}

/// One-sided second-order spatial derivative of a field at its left boundary
/// node, as a trace (used to exchange Neumann data at the interface).
fn left_boundary_dx_trace(f: &Field) -> Trace {
    let dx = f.grid.dx();
    Trace {
        time: f.time,
        location: f.grid.x_min,
        values: (0..f.time.n_levels())
            .map(|n| (-3.0 * f.at(n, 0) + 4.0 * f.at(n, 1) - f.at(n, 2)) / (2.0 * dx))
            .collect(),
    }
}

/// Classical variational / non-variational couplings from the literature,
/// used as comparison baselines.
pub fn solve_classical(
    spec: &ProblemSpec,
    grid: &Grid,
    time: &TimeGrid,
    method: &CouplingMethod,
) -> Result<CoupledSolution> {
    let (omega1, omega2) = split_grid(spec, grid)?;
    let g1 = data_trace(&spec.g1, -spec.l1, time);
    let g2 = data_trace(&spec.g2, spec.l2, time);
    let h1 = nodal_initial(&spec.h, &omega1);
    let h2 = nodal_initial(&spec.h, &omega2);
    let rhs_f = |x: f64, t: f64| spec.f.eval(x, t);
    let interface_node = omega1.n_cells;

    match (spec.a > 0.0, method) {
        (true, CouplingMethod::Variational) => {
            // One-shot: homogeneous Neumann nu du/dx = 0 at the interface,
            // then advection with the resulting Dirichlet trace.
            let zero_flux = Trace::zeros(*time, 0.0);
            let u_ad = solve_advdiff(&AdvDiffSpec {
                a: spec.a, nu: spec.nu, c: spec.c,
                grid: omega1, time: *time,
                rhs: &rhs_f, left_bc: &g1,
                right_bc: RightBc::Neumann(&zero_flux),
                initial: &h1,
            })?;
            let interface = u_ad.trace(interface_node);
            let u_a = solve_transport(&TransportSpec {
                b: spec.a, eta: spec.c, rhs: &rhs_f,
                inflow: &interface, initial: &h2,
                grid: omega2, time: *time,
            })?;
            Ok(CoupledSolution {
                u_ad,
                u_a,
                diagnostics: Diagnostics { interface_traces: vec![interface], iterations: 1, converged: true },
            })
        }
        (true, CouplingMethod::NonVariational { theta, max_iters, tol }) => {
            // Relaxed Dirichlet-Neumann fixed point on the interface value.
            let theta = match theta {
                Some(t) => *t,
                None => (1.0 / (450.0 * spec.nu.sqrt())).min(1.0),
            };
            if !(theta > 0.0 && theta <= 1.0) {
                return Err(Error::InvalidSpec(format!("relaxation theta out of (0,1]: {theta}")));
            }
            let mut lambda = Trace::zeros(*time, 0.0);
            let mut diagnostics = Diagnostics::default();
            let mut last_update = f64::INFINITY;
            for it in 1..=*max_iters {
                let u_a = solve_transport(&TransportSpec {
                    b: spec.a, eta: spec.c, rhs: &rhs_f,
                    inflow: &lambda, initial: &h2,
                    grid: omega2, time: *time,
                })?;
                let flux = left_boundary_dx_trace(&u_a);
                let u_ad = solve_advdiff(&AdvDiffSpec {
                    a: spec.a, nu: spec.nu, c: spec.c,
                    grid: omega1, time: *time,
                    rhs: &rhs_f, left_bc: &g1,
                    right_bc: RightBc::Neumann(&flux),
                    initial: &h1,
                })?;
                let u_ad_trace = u_ad.trace(interface_node);
                let mut next = lambda.clone();
                for (v, (ad, old)) in next
                    .values
                    .iter_mut()
                    .zip(u_ad_trace.values.iter().zip(lambda.values.iter()))
                {
                    *v = theta * ad + (1.0 - theta) * old;
                }
                let mut diff = next.clone();
                for (d, old) in diff.values.iter_mut().zip(lambda.values.iter()) {
                    *d -= old;
                }
                let update = diff.l2_time();
                let norm = next.l2_time();
                last_update = if norm > 0.0 { update / norm } else { update };
                diagnostics.interface_traces.push(next.clone());
                diagnostics.iterations = it;
                lambda = next;
                if update <= tol * norm.max(f64::MIN_POSITIVE) {
                    diagnostics.converged = true;
                    return Ok(CoupledSolution { u_ad, u_a, diagnostics });
                }
            }
            Err(Error::NoConvergence { iters: *max_iters, last: last_update })
        }
        (false, CouplingMethod::Variational) => {
            // One-shot: advection from the right, then Robin coupling
            // -nu du_ad/dx + a u_ad = a u_a at the interface.
            let u_a = solve_transport(&TransportSpec {
                b: spec.a, eta: spec.c, rhs: &rhs_f,
                inflow: &g2, initial: &h2,
                grid: omega2, time: *time,
            })?;
            let mut robin_data = u_a.trace(0);
            for v in robin_data.values.iter_mut() {
                *v *= spec.a;
            }
            let u_ad = solve_advdiff(&AdvDiffSpec {
                a: spec.a, nu: spec.nu, c: spec.c,
                grid: omega1, time: *time,
                rhs: &rhs_f, left_bc: &g1,
                right_bc: RightBc::Robin { flux: -spec.nu, value: spec.a, data: &robin_data },
                initial: &h1,
            })?;
            Ok(CoupledSolution {
                u_ad,
                u_a,
                diagnostics: Diagnostics { interface_traces: vec![robin_data], iterations: 1, converged: true },
            })
        }
        (false, CouplingMethod::NonVariational { .. }) => {
            // One-shot Dirichlet matching u_ad(0,.) = u_a(0,.).
            let u_a = solve_transport(&TransportSpec {
                b: spec.a, eta: spec.c, rhs: &rhs_f,
                inflow: &g2, initial: &h2,
                grid: omega2, time: *time,
            })?;
            let interface = u_a.trace(0);
            let u_ad = solve_advdiff(&AdvDiffSpec {
                a: spec.a, nu: spec.nu, c: spec.c,
                grid: omega1, time: *time,
                rhs: &rhs_f, left_bc: &g1,
                right_bc: RightBc::Dirichlet(&interface),
                initial: &h1,
            })?;
            Ok(CoupledSolution {
                u_ad,
                u_a,
                diagnostics: Diagnostics { interface_traces: vec![interface], iterations: 1, converged: true },
            })
        }
        (_, other) => Err(Error::InvalidSpec(format!(
            "solve_classical cannot run method {:?}",
            other
        ))),
    }
}

/// Dispatch a coupled solve by method; `Monodomain` is not a coupled method
/// and is rejected here (use [`solve_monodomain`]).
pub fn solve_coupled(
    spec: &ProblemSpec,
    grid: &Grid,
    time: &TimeGrid,
    method: &CouplingMethod,
) -> Result<CoupledSolution> {
    method.check()?;
    match method {
        CouplingMethod::Monodomain => Err(Error::InvalidSpec(
            "monodomain is the reference, not a coupling method".into(),
        )),
        CouplingMethod::Factorization { k_iters } => {
            if spec.a > 0.0 {
                solve_factorization_pos(spec, grid, time, *k_iters, None)
            } else {
                solve_factorization_neg(spec, grid, time)
            }
        }
        CouplingMethod::Variational | CouplingMethod::NonVariational { .. } => {
            solve_classical(spec, grid, time, method)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::CouplingMethod;

    #[test]
    fn remainder_annihilates_exp_minus_ct() {
        // (d/dt + c)^2 exp(-c t) = 0.
        let grid = Grid::new(0.0, 1.0, 4).unwrap();
        let c = 1.3;
        for n_steps in [40, 80] {
            let time = TimeGrid::new(1.0, n_steps).unwrap();
            let mut v = Field::zeros(grid, time);
            for n in 0..time.n_levels() {
                for j in 0..grid.n_nodes() {
                    v.set(n, j, (-c * time.t(n)).exp());
                }
            }
            let w = apply_remainder(&v, c).unwrap();
            assert!(w.max_abs() <= 5.0 * time.dt() * time.dt(), "{}", w.max_abs());
        }
    }

    #[test]
    fn remainder_on_exponential_eigenfunction() {
        // (d/dt + c)^2 exp(x + t) = (1 + c)^2 exp(x + t).
        let grid = Grid::new(0.0, 1.0, 8).unwrap();
        let time = TimeGrid::new(1.0, 200).unwrap();
        let c = 0.7;
        let mut v = Field::zeros(grid, time);
        for n in 0..time.n_levels() {
            for j in 0..grid.n_nodes() {
                v.set(n, j, (grid.node(j) + time.t(n)).exp());
            }
        }
        let w = apply_remainder(&v, c).unwrap();
        let factor = (1.0 + c) * (1.0 + c);
        let mut max_rel = 0.0f64;
        for n in 0..time.n_levels() {
            for j in 0..grid.n_nodes() {
                let exact = factor * v.at(n, j);
                max_rel = max_rel.max((w.at(n, j) - exact).abs() / exact.abs());
            }
        }
        assert!(max_rel <= 10.0 * time.dt() * time.dt(), "max rel err {max_rel}");
    }

    #[test]
    fn remainder_second_order_in_dt() {
        // Smooth v(x,t) = sin(x + 2t); exact (d/dt + c)^2 v known analytically.
        let grid = Grid::new(0.0, 1.0, 4).unwrap();
        let c = 1.0;
        let exact = |x: f64, t: f64| {
            // d2/dt2 = -4 sin, 2c d/dt = 4 cos, c^2 v = sin
            -4.0 * (x + 2.0 * t).sin() + 4.0 * (x + 2.0 * t).cos() + (x + 2.0 * t).sin()
        };
        let err = |n_steps: usize| -> f64 {
            let time = TimeGrid::new(1.0, n_steps).unwrap();
            let mut v = Field::zeros(grid, time);
            for n in 0..time.n_levels() {
                for j in 0..grid.n_nodes() {
                    v.set(n, j, (grid.node(j) + 2.0 * time.t(n)).sin());
                }
            }
            let w = apply_remainder(&v, c).unwrap();
            let mut e = 0.0f64;
            for n in 0..time.n_levels() {
                for j in 0..grid.n_nodes() {
                    e = e.max((w.at(n, j) - exact(grid.node(j), time.t(n))).abs());
                }
            }
            e
        };
        let (e1, e2) = (err(100), err(200));
        let ratio = e1 / e2;
        assert!((3.3..=4.7).contains(&ratio), "ratio {ratio} ({e1} -> {e2})");
    }

    #[test]
    fn remainder_rejects_short_fields() {
        let grid = Grid::new(0.0, 1.0, 2).unwrap();
        let time = TimeGrid::new(1.0, 1).unwrap();
        let v = Field::zeros(grid, time);
        assert!(matches!(apply_remainder(&v, 1.0), Err(Error::TooFewTimeLevels(2))));
    }

    #[test]
    fn factorization_identity_exact_cases() {
        // (nu/a^2)[(1+a+c)(1-a+c+a^2/nu) - (1+c)^2] = 1+a+c-nu at a=alpha=beta=1.
        assert!(factorization_identity_check(1.0, 0.1, 1.0, 1.0, 1.0) < 1e-12);
        assert!(factorization_identity_check(-1.0, 1e-3, 1.0, 2.0, 0.0) <= 1e-10);
    }

    fn zero_spec(a: f64) -> ProblemSpec {
        ProblemSpec {
            a,
            nu: 1e-2,
            c: 1.0,
            l1: 1.0,
            l2: 1.0,
            t_final: 1.0,
            f: DataSpec::Zero,
            g1: DataSpec::Zero,
            g2: DataSpec::Zero,
            h: DataSpec::Zero,
        }
    }

    #[test]
    fn zero_data_is_a_fixpoint_of_every_method() {
        let grid = Grid::new(-1.0, 1.0, 64).unwrap();
        let time = TimeGrid::new(1.0, 32).unwrap();
        let methods = [
            CouplingMethod::Factorization { k_iters: 2 },
            CouplingMethod::Variational,
            CouplingMethod::non_variational(),
        ];
        for a in [1.0, -1.0] {
            let spec = zero_spec(a);
            assert_eq!(solve_monodomain(&spec, &grid, &time).unwrap().max_abs(), 0.0);
            for m in &methods {
                let sol = solve_coupled(&spec, &grid, &time, m).unwrap();
                assert_eq!(sol.u_ad.max_abs(), 0.0, "{} a={a}", m.label());
                assert_eq!(sol.u_a.max_abs(), 0.0, "{} a={a}", m.label());
            }
        }
    }

    #[test]
    fn dispatch_rejects_monodomain_and_wrong_sign() {
        let grid = Grid::new(-1.0, 1.0, 16).unwrap();
        let time = TimeGrid::new(1.0, 8).unwrap();
        let spec = zero_spec(1.0);
        assert!(solve_coupled(&spec, &grid, &time, &CouplingMethod::Monodomain).is_err());
        assert!(solve_factorization_neg(&spec, &grid, &time).is_err());
        assert!(solve_factorization_pos(&zero_spec(-1.0), &grid, &time, 1, None).is_err());
    }
}
