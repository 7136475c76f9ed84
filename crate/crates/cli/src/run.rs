//! Subcommand implementations: solve, sweep, slopes, plot and the built-in
//! self-checks.

use std::path::{Path, PathBuf};

use hetdd_core::{
    characteristics_oracle, factorization_identity_check, fit_slope, run_sweep, solve_coupled,
    solve_monodomain, solve_transport, split_grid, thomas_solve, CouplingMethod, Field, Grid,
    ProblemSpec, TimeGrid, Trace, TransportData, TransportSpec, Tridiagonal,
};

use crate::config::{fmt_f64, RunConfig};
use crate::csvio::{self, ErrorRow};
use crate::error::{CliError, Result};
use crate::svg::{plot_errors, Panel};

fn out_path(out: &Path, prefix: &str, name: &str) -> PathBuf {
    out.join(format!("{prefix}{name}"))
}

fn validated(cfg: &RunConfig, nu: f64) -> Result<(ProblemSpec, Grid, TimeGrid)> {
    let spec = cfg.problem_spec(nu);
    let (grid, time) = cfg.grids()?;
    let report = hetdd_core::validate(&spec, &grid, &time);
    if !report.is_valid() {
        return Err(CliError::Validation(report.violations.join("; ")));
    }
    Ok((spec, grid, time))
}

/// Solve a single `(method, nu)` cell and dump the space-time fields, the
/// interface trace and the run manifest.
pub fn cmd_solve(cfg: &RunConfig, out: &Path) -> Result<()> {
    if cfg.methods.len() != 1 {
        return Err(CliError::Validation(format!(
            "solve needs exactly one method, config lists {}",
            cfg.methods.len()
        )));
    }
    let method = &cfg.methods[0];
    let (spec, grid, time) = validated(cfg, cfg.nu)?;

    let (u1, u2): (Field, Field) = match method {
        CouplingMethod::Monodomain => {
            let u = solve_monodomain(&spec, &grid, &time)?;
            let (omega1, omega2) = split_grid(&spec, &grid)?;
            (u.restrict(&omega1)?, u.restrict(&omega2)?)
        }
        _ => {
            let sol = solve_coupled(&spec, &grid, &time, method)?;
            log::info!(
                "coupled solve: {} interface iterations, converged = {}",
                sol.diagnostics.iterations,
                sol.diagnostics.converged
            );
            (sol.u_ad, sol.u_a)
        }
    };

    std::fs::create_dir_all(out)?;
    let label = method.label();
    csvio::write_fields(
        &out_path(out, &cfg.prefix, &format!("fields_{label}.csv")),
        &[(&u1, 1), (&u2, 2)],
    )?;
    // Trace of the viscous solution at the interface x = 0 (its last node).
    let j_interface = u1.grid.n_nodes() - 1;
    csvio::write_trace(
        &out_path(out, &cfg.prefix, "trace_interface.csv"),
        &u1.trace(j_interface),
    )?;
    std::fs::write(out_path(out, &cfg.prefix, "manifest.txt"), cfg.manifest())?;
    Ok(())
}

/// Run the viscosity sweep and write `errors.csv` plus the manifest.
pub fn cmd_sweep(cfg: &RunConfig, out: &Path, jobs: Option<usize>) -> Result<Vec<ErrorRow>> {
    let (template, grid, time) = validated(cfg, cfg.nu_list[0])?;
    for &nu in &cfg.nu_list {
        if !(nu > 0.0) {
            return Err(CliError::Validation(format!("nu_list entry {nu} is not positive")));
        }
    }

    let records = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| CliError::Validation(format!("bad --jobs value: {e}")))?
            .install(|| run_sweep(&template, &grid, &time, &cfg.nu_list, &cfg.methods)),
        None => run_sweep(&template, &grid, &time, &cfg.nu_list, &cfg.methods),
    };
    for r in &records {
        if let Some(msg) = &r.failure {
            log::warn!("cell (nu = {:.3e}, {}) failed: {msg}", r.nu, r.method.label());
        }
    }
    let rows: Vec<ErrorRow> = records.iter().map(ErrorRow::from).collect();

    std::fs::create_dir_all(out)?;
    csvio::write_errors(&out_path(out, &cfg.prefix, "errors.csv"), &rows)?;
    std::fs::write(out_path(out, &cfg.prefix, "manifest.txt"), cfg.manifest())?;
    Ok(rows)
}

/// Per-method slope fits recomputed from an `errors.csv` table.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeLine {
    pub method: String,
    pub omega1: Option<f64>,
    pub omega2: Option<f64>,
}

/// Fit `err ~ C nu^p` per method and error column. Rows with non-positive or
/// non-finite errors (the reference itself, failed cells) are excluded; a
/// method needs two usable points per column to get a slope.
pub fn slopes_from_rows(rows: &[ErrorRow]) -> Vec<SlopeLine> {
    let mut methods: Vec<&str> = Vec::new();
    for r in rows {
        if !methods.contains(&r.method.as_str()) {
            methods.push(&r.method);
        }
    }
    methods
        .iter()
        .map(|m| {
            let column = |pick: fn(&ErrorRow) -> f64| -> Option<f64> {
                let pts: Vec<(f64, f64)> = rows
                    .iter()
                    .filter(|r| r.method == *m)
                    .map(|r| (r.nu, pick(r)))
                    .filter(|(nu, e)| *nu > 0.0 && e.is_finite() && *e > 0.0)
                    .collect();
                fit_slope(&pts).ok().map(|f| f.slope)
            };
            SlopeLine {
                method: m.to_string(),
                omega1: column(|r| r.err_omega1),
                omega2: column(|r| r.err_omega2),
            }
        })
        .collect()
}

/// Format the slope table as CSV-style text (`nan` marks unfittable columns).
pub fn slopes_report(rows: &[ErrorRow]) -> String {
    let mut out = String::from("method,omega1_slope,omega2_slope\n");
    for line in slopes_from_rows(rows) {
        let cell = |v: Option<f64>| v.map(fmt_f64).unwrap_or_else(|| "nan".into());
        out.push_str(&format!("{},{},{}\n", line.method, cell(line.omega1), cell(line.omega2)));
    }
    out
}

pub fn cmd_slopes(errors_csv: &Path) -> Result<String> {
    let rows = csvio::read_errors(errors_csv)?;
    Ok(slopes_report(&rows))
}

/// Render the two log-log panels from an `errors.csv` table.
pub fn cmd_plot(errors_csv: &Path, out: &Path, prefix: &str) -> Result<()> {
    let rows = csvio::read_errors(errors_csv)?;
    std::fs::create_dir_all(out)?;
    std::fs::write(
        out_path(out, prefix, "errors_omega1.svg"),
        plot_errors(&rows, Panel::Omega1),
    )?;
    std::fs::write(
        out_path(out, prefix, "errors_omega2.svg"),
        plot_errors(&rows, Panel::Omega2),
    )?;
    Ok(())
}

/// Fast built-in self-tests: tridiagonal solver, transport oracle agreement
/// and the factorization operator identity. Returns the human-readable report
/// or a solver error if any check fails.
pub fn cmd_check() -> Result<String> {
    let mut report = String::new();
    let fail = |msg: String| CliError::Solver(hetdd_core::Error::InvalidSpec(msg));

    // Tridiagonal solve against a directly verifiable system: multiply back.
    let n = 40;
    let sys = Tridiagonal {
        sub: vec![-1.0; n - 1],
        diag: (0..n).map(|i| 4.0 + 0.01 * i as f64).collect(),
        sup: vec![-2.0; n - 1],
    };
    let rhs: Vec<f64> = (0..n).map(|i| (0.3 * i as f64).sin()).collect();
    let x = thomas_solve(&sys, &rhs)?;
    let mut max_res = 0.0f64;
    for i in 0..n {
        let mut ax = sys.diag[i] * x[i];
        if i > 0 {
            ax += sys.sub[i - 1] * x[i - 1];
        }
        if i + 1 < n {
            ax += sys.sup[i] * x[i + 1];
        }
        max_res = max_res.max((ax - rhs[i]).abs());
    }
    if max_res > 1e-12 {
        return Err(fail(format!("tridiagonal self-check residual {max_res:.3e}")));
    }
    report.push_str(&format!("thomas residual {max_res:.3e} ... ok\n"));

    // Implicit upwind transport against the exact characteristics oracle.
    let spec = ProblemSpec::paper_positive(1e-3);
    let grid = Grid::new(0.0, 1.0, 400).unwrap();
    let time = TimeGrid::new(1.0, 400).unwrap();
    let source = |x: f64, t: f64| spec.f.eval(x, t);
    let zero_t = |_: f64| 0.0;
    let zero_x = |_: f64| 0.0;
    let inflow = Trace::zeros(time, grid.x_min);
    let initial = vec![0.0; grid.n_nodes()];
    let tspec = TransportSpec {
        b: spec.a,
        eta: spec.c,
        rhs: &source,
        inflow: &inflow,
        initial: &initial,
        grid,
        time,
    };
    let num = solve_transport(&tspec)?;
    let data = TransportData { initial: &zero_x, inflow: &zero_t, source: &source };
    let mut exact = Field::zeros(grid, time);
    for level in 0..time.n_levels() {
        let t = time.t(level);
        for (j, xg) in grid.nodes().enumerate() {
            let v = characteristics_oracle(spec.a, spec.c, (grid.x_min, grid.x_max), &data, xg, t)?;
            exact.set(level, j, v);
        }
    }
    let err = hetdd_core::l2_spacetime_diff(&num, &exact).map_err(CliError::Solver)?;
    if !(err < 0.05) {
        return Err(fail(format!("transport oracle mismatch {err:.3e}")));
    }
    report.push_str(&format!("transport vs characteristics L2 {err:.3e} ... ok\n"));

    // Factorization operator identity on Fourier symbols, both signs.
    let mut max_id = 0.0f64;
    for a in [1.0, -1.0] {
        for k in 0..100 {
            let alpha = -3.0 + 0.06 * k as f64;
            let beta = 2.0 - 0.04 * k as f64;
            for nu in [1e-1, 1e-3] {
                max_id = max_id.max(factorization_identity_check(a, nu, 1.0, alpha, beta));
            }
        }
    }
    if max_id > 1e-9 {
        return Err(fail(format!("factorization identity residual {max_id:.3e}")));
    }
    report.push_str(&format!("factorization identity residual {max_id:.3e} ... ok\n"));

    Ok(report)
}
