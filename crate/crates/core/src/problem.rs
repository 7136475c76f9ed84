//! Physical problem description, coupling-method selection and validation.

use crate::data::DataSpec;
use crate::error::{Error, Result};
use crate::grid::{Grid, TimeGrid};

/// The advection-reaction-diffusion setup on `Omega = (-l1, l2) x (0, t_final)`.
///
/// The interface between the viscous subdomain `Omega_1 = (-l1, 0)` and the
/// inviscid subdomain `Omega_2 = (0, l2)` sits at `x = 0`.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    /// Advection speed, nonzero. Its sign selects the boundary operators and
    /// the coupling algorithm.
    pub a: f64,
    /// Viscosity, positive.
    pub nu: f64,
    /// Reaction coefficient, positive.
    pub c: f64,
    /// Left half-domain length, positive.
    pub l1: f64,
    /// Right half-domain length, positive.
    pub l2: f64,
    /// Time horizon, positive.
    pub t_final: f64,
    /// Space-time forcing, compactly supported in `(0, t_final]`.
    pub f: DataSpec,
    /// Left boundary data over time.
    pub g1: DataSpec,
    /// Right boundary data over time.
    pub g2: DataSpec,
    /// Initial condition over space.
    pub h: DataSpec,
}

impl ProblemSpec {
    /// Reference positive-advection setup: `a = 1`, `c = 1`, `L1 = L2 = 1`,
    /// `T = 1`, switch-on forcing at `t0 = 0.1`, initial bump at `x0 = -0.6`.
    pub fn paper_positive(nu: f64) -> Self {
        ProblemSpec {
            a: 1.0,
            nu,
            c: 1.0,
            l1: 1.0,
            l2: 1.0,
            t_final: 1.0,
            f: DataSpec::PaperForcing { t0: 0.1 },
            g1: DataSpec::Zero,
            g2: DataSpec::Zero,
            h: DataSpec::gaussian_bump(-0.6),
        }
    }

    /// Reference negative-advection setup: `a = -1`, initial bump at `x0 = 0.5`.
    pub fn paper_negative(nu: f64) -> Self {
        ProblemSpec {
            a: -1.0,
            h: DataSpec::gaussian_bump(0.5),
            ..Self::paper_positive(nu)
        }
    }

    pub fn omega(&self) -> (f64, f64) {
        (-self.l1, self.l2)
    }
}

/// Which coupled solver to run.
#[derive(Clone, Debug, PartialEq)]
pub enum CouplingMethod {
    /// Fully viscous reference on all of Omega.
    Monodomain,
    /// Factorization coupling. `k_iters` counts sweeps for `a > 0`; the
    /// `a < 0` algorithm is one-shot and ignores it.
    Factorization { k_iters: usize },
    /// Variational transmission conditions (one-shot).
    Variational,
    /// Non-variational transmission conditions. For `a > 0` this is a relaxed
    /// Dirichlet-Neumann iteration; `theta = None` uses the heuristic
    /// `1/(450 sqrt(nu))` clamped to `(0, 1]`.
    NonVariational {
        theta: Option<f64>,
        max_iters: usize,
        tol: f64,
    },
}

impl CouplingMethod {
    pub fn non_variational() -> Self {
        CouplingMethod::NonVariational {
            theta: None,
            max_iters: 200,
            tol: 1e-8,
        }
    }

    /// Stable identifier used in CSV tables and configs.
    pub fn label(&self) -> String {
        match self {
            CouplingMethod::Monodomain => "monodomain".into(),
            CouplingMethod::Factorization { k_iters } => format!("factorization{k_iters}"),
            CouplingMethod::Variational => "variational".into(),
            CouplingMethod::NonVariational { .. } => "nonvariational".into(),
        }
    }

    pub fn check(&self) -> Result<()> {
        match self {
            CouplingMethod::Factorization { k_iters } if *k_iters == 0 => {
                Err(Error::InvalidSpec("factorization needs k_iters >= 1".into()))
            }
            CouplingMethod::NonVariational { theta, tol, .. } => {
                if !(*tol > 0.0) {
                    return Err(Error::InvalidSpec("non-variational tol must be positive".into()));
                }
                if let Some(th) = theta {
                    if !(*th > 0.0 && *th <= 1.0) {
                        return Err(Error::InvalidSpec(format!(
                            "relaxation theta must lie in (0, 1], got {th}"
                        )));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Outcome of [`validate`]: the list of violated invariants, empty when valid.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

const SUPPORT_TOL: f64 = 1e-12;
// The initial bump for a < 0 sits in Omega_2 and only decays like
// exp(-100 d^2) towards the walls, so the boundary-compatibility check for
// that sign uses a looser tolerance.
const BOUNDARY_TOL: f64 = 1e-8;

/// Check a `(spec, grid, time)` triple against the model's invariants:
/// positivity of coefficients, interface alignment, and compact support of
/// the data sampled at grid nodes.
pub fn validate(spec: &ProblemSpec, grid: &Grid, time: &TimeGrid) -> ValidationReport {
    let mut v = Vec::new();

    if spec.a == 0.0 || !spec.a.is_finite() {
        v.push("a must be nonzero".into());
    }
    if !(spec.nu > 0.0) {
        v.push("nu must be positive".into());
    }
    if !(spec.c > 0.0) {
        v.push("c must be positive".into());
    }
    if !(spec.l1 > 0.0) {
        v.push("l1 must be positive".into());
    }
    if !(spec.l2 > 0.0) {
        v.push("l2 must be positive".into());
    }
    if !(spec.t_final > 0.0) {
        v.push("t_final must be positive".into());
    }
    if !v.is_empty() {
        return ValidationReport { violations: v };
    }

    let span = spec.l1 + spec.l2;
    if (grid.x_min + spec.l1).abs() > 1e-9 * span || (grid.x_max - spec.l2).abs() > 1e-9 * span {
        v.push(format!(
            "grid [{}, {}] does not cover Omega = ({}, {})",
            grid.x_min, grid.x_max, -spec.l1, spec.l2
        ));
    } else if grid.index_of(0.0).is_none() {
        v.push("interface not a grid node".into());
    }
    if (time.t_final - spec.t_final).abs() > 1e-12 * spec.t_final {
        v.push("time grid horizon differs from t_final".into());
    }

    // Support conditions, sampled at grid nodes / time levels.
    for x in grid.nodes() {
        match spec.f.eval_checked(x, 0.0) {
            Ok(val) if val.abs() > SUPPORT_TOL => {
                v.push("f must vanish at t = 0".into());
                break;
            }
            Err(e) => {
                v.push(format!("f not evaluable on the grid: {e}"));
                break;
            }
            _ => {}
        }
    }
    for (name, d, x) in [("g1", &spec.g1, -spec.l1), ("g2", &spec.g2, spec.l2)] {
        match d.eval_checked(x, 0.0) {
            Ok(val) if val.abs() > SUPPORT_TOL => v.push(format!("{name} must vanish at t = 0")),
            Err(e) => v.push(format!("{name} not evaluable: {e}")),
            _ => {}
        }
    }
    if spec.a > 0.0 {
        // h compactly supported in the viscous subdomain (-l1, 0).
        for x in grid.nodes().filter(|&x| x >= 0.0) {
            match spec.h.eval_checked(x, 0.0) {
                Ok(val) if val.abs() > SUPPORT_TOL => {
                    v.push("h must vanish for x >= 0 when a > 0".into());
                    break;
                }
                Err(e) => {
                    v.push(format!("h not evaluable: {e}"));
                    break;
                }
                _ => {}
            }
        }
    } else {
        // For a < 0 the initial bump lives in Omega_2; only require
        // compatibility with the homogeneous wall data.
        for x in [-spec.l1, spec.l2] {
            match spec.h.eval_checked(x, 0.0) {
                Ok(val) if val.abs() > BOUNDARY_TOL => {
                    v.push(format!("h must (numerically) vanish at the wall x = {x}"));
                }
                Err(e) => v.push(format!("h not evaluable: {e}")),
                _ => {}
            }
        }
    }

    ValidationReport { violations: v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_grid(n: usize) -> (Grid, TimeGrid) {
        let grid = Grid::new(-1.0, 1.0, n).unwrap();
        let n_steps = (1.0 / grid.dx()).round() as usize;
        (grid, TimeGrid::new(1.0, n_steps).unwrap())
    }

    #[test]
    fn accepts_paper_configurations() {
        let (grid, time) = paper_grid(2000);
        let rep = validate(&ProblemSpec::paper_positive(1e-3), &grid, &time);
        assert!(rep.is_valid(), "{:?}", rep.violations);
        let rep = validate(&ProblemSpec::paper_negative(1e-2), &grid, &time);
        assert!(rep.is_valid(), "{:?}", rep.violations);
    }

    #[test]
    fn rejects_nonpositive_nu() {
        let (grid, time) = paper_grid(100);
        let mut spec = ProblemSpec::paper_positive(1e-3);
        spec.nu = 0.0;
        let rep = validate(&spec, &grid, &time);
        assert!(rep.violations.iter().any(|m| m.contains("nu must be positive")));
    }

    #[test]
    fn rejects_misaligned_interface() {
        // l1 = 1, dx = 0.3: the interface x = 0 is not a node.
        let spec = ProblemSpec {
            l2: 0.8,
            ..ProblemSpec::paper_positive(1e-3)
        };
        let grid = Grid::new(-1.0, 0.8, 6).unwrap();
        let time = TimeGrid::new(1.0, 10).unwrap();
        let rep = validate(&spec, &grid, &time);
        assert!(rep.violations.iter().any(|m| m.contains("interface not a grid node")));
    }

    #[test]
    fn rejects_initial_data_leaking_across_interface() {
        let (grid, time) = paper_grid(100);
        let mut spec = ProblemSpec::paper_positive(1e-3);
        spec.h = DataSpec::gaussian_bump(0.5);
        let rep = validate(&spec, &grid, &time);
        assert!(rep.violations.iter().any(|m| m.contains("x >= 0")));
    }

    #[test]
    fn method_invariants() {
        assert!(CouplingMethod::Factorization { k_iters: 0 }.check().is_err());
        assert!(CouplingMethod::Factorization { k_iters: 2 }.check().is_ok());
        let bad = CouplingMethod::NonVariational { theta: Some(1.5), max_iters: 10, tol: 1e-8 };
        assert!(bad.check().is_err());
        assert!(CouplingMethod::non_variational().check().is_ok());
    }
}
