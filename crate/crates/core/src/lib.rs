//! Heterogeneous domain decomposition for the 1D time-dependent
//! advection-reaction-diffusion equation.
//!
//! The crate couples the viscous model on `Omega_1 = (-L1, 0)` with a pure
//! advection model on `Omega_2 = (0, L2)` through interface conditions at
//! `x = 0`. Besides the classical variational and non-variational couplings
//! it implements a factorization-based coupling built on the identity
//! `L_ad = (nu/a^2)(L_ma L_a - R)`, which yields solutions much closer to the
//! fully viscous reference as the viscosity becomes small.
//!
//! Solvers: Crank-Nicolson for advection-diffusion (with an operator boundary
//! condition menu), implicit upwind for transport, plus an exact
//! characteristics oracle, space-time norms, viscosity sweeps and slope fits.

pub mod analysis;
pub mod coupling;
pub mod data;
pub mod error;
pub mod grid;
pub mod hyperbolic;
pub mod parabolic;
pub mod problem;

pub use analysis::{fit_slope, l2_spacetime, l2_spacetime_diff, run_sweep, ErrorRecord, SlopeFit};
pub use coupling::{
    apply_remainder, factorization_identity_check, solve_classical, solve_coupled,
    solve_factorization_neg, solve_factorization_pos, solve_monodomain, split_grid,
    CoupledSolution, Diagnostics,
};
pub use data::{CustomAxis, DataSpec};
pub use error::{Error, Result};
pub use grid::{Field, Grid, TimeGrid, Trace};
pub use hyperbolic::{characteristics_oracle, solve_transport, TransportData, TransportSpec};
pub use parabolic::{solve_advdiff, thomas_solve, AdvDiffSpec, RightBc, Tridiagonal};
pub use problem::{validate, CouplingMethod, ProblemSpec, ValidationReport};
