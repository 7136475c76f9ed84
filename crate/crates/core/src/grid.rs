//! Uniform grids, space-time fields and boundary/interface traces.
//!
//! Every solver in this crate works on the same uniform subdivision of the
//! global domain so that interface nodes and time levels coincide exactly
//! between subdomain solves and no interpolation is ever needed.

use crate::error::{Error, Result};

/// Uniform spatial grid on `[x_min, x_max]` with `n_cells` cells.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize) -> Result<Self> {
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "grid endpoints must be finite with x_max > x_min, got [{x_min}, {x_max}]"
            )));
        }
        if n_cells == 0 {
            return Err(Error::InvalidSpec("grid needs at least one cell".into()));
        }
        Ok(Grid { x_min, x_max, n_cells })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_cells as f64
    }

    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    /// Node coordinate; endpoints are hit exactly.
    pub fn node(&self, j: usize) -> f64 {
        debug_assert!(j <= self.n_cells);
        if j == self.n_cells {
            self.x_max
        } else {
            self.x_min + (self.x_max - self.x_min) * (j as f64 / self.n_cells as f64)
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_nodes()).map(move |j| self.node(j))
    }

    /// Index of the node closest to `x`, if `x` lies on the grid.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let dx = self.dx();
        let jf = (x - self.x_min) / dx;
        let j = jf.round();
        if j < 0.0 || j > self.n_cells as f64 {
            return None;
        }
        let j = j as usize;
        let tol = 1e-9 * (self.x_max - self.x_min).abs().max(1.0);
        if (self.node(j) - x).abs() <= tol {
            Some(j)
        } else {
            None
        }
    }

    /// Restriction of this grid to `[x_lo, x_hi]`; both endpoints must be nodes.
    pub fn subgrid(&self, x_lo: f64, x_hi: f64) -> Result<Grid> {
        let j_lo = self
            .index_of(x_lo)
            .ok_or_else(|| Error::InvalidSpec(format!("{x_lo} is not a grid node")))?;
        let j_hi = self
            .index_of(x_hi)
            .ok_or_else(|| Error::InvalidSpec(format!("{x_hi} is not a grid node")))?;
        if j_hi <= j_lo {
            return Err(Error::InvalidSpec("empty subgrid".into()));
        }
        Grid::new(self.node(j_lo), self.node(j_hi), j_hi - j_lo)
    }
}

/// Uniform time grid on `[0, t_final]` with `n_steps` steps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub t_final: f64,
    pub n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_final: f64, n_steps: usize) -> Result<Self> {
        if !(t_final > 0.0) || !t_final.is_finite() {
            return Err(Error::InvalidSpec(format!("t_final must be positive, got {t_final}")));
        }
        if n_steps == 0 {
            return Err(Error::InvalidSpec("time grid needs at least one step".into()));
        }
        Ok(TimeGrid { t_final, n_steps })
    }

    pub fn dt(&self) -> f64 {
        self.t_final / self.n_steps as f64
    }

    pub fn n_levels(&self) -> usize {
        self.n_steps + 1
    }

    /// Time level; `t(n_steps)` is exactly `t_final`.
    pub fn t(&self, n: usize) -> f64 {
        debug_assert!(n <= self.n_steps);
        if n == self.n_steps {
            self.t_final
        } else {
            self.t_final * (n as f64 / self.n_steps as f64)
        }
    }
}

/// Nodal values over one subdomain for all time levels.
///
/// Row `n` holds the solution at time level `n`; row 0 is the discrete
/// initial condition of the producing solver.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub grid: Grid,
    pub time: TimeGrid,
    values: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: Grid, time: TimeGrid) -> Self {
        Field {
            grid,
            time,
            values: vec![0.0; grid.n_nodes() * time.n_levels()],
        }
    }

    #[inline]
    pub fn at(&self, n: usize, j: usize) -> f64 {
        self.values[n * self.grid.n_nodes() + j]
    }

    #[inline]
    pub fn set(&mut self, n: usize, j: usize, v: f64) {
        self.values[n * self.grid.n_nodes() + j] = v;
    }

    pub fn row(&self, n: usize) -> &[f64] {
        let w = self.grid.n_nodes();
        &self.values[n * w..(n + 1) * w]
    }

    pub fn row_mut(&mut self, n: usize) -> &mut [f64] {
        let w = self.grid.n_nodes();
        &mut self.values[n * w..(n + 1) * w]
    }

    /// Rows `step - 1` (shared) and `step` (mutable), borrowed together for
    /// time stepping.
    pub fn prev_cur_rows(&mut self, step: usize) -> (&[f64], &mut [f64]) {
        assert!(step >= 1 && step <= self.time.n_steps);
        let w = self.grid.n_nodes();
        let (head, tail) = self.values.split_at_mut(step * w);
        (&head[(step - 1) * w..], &mut tail[..w])
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Time series at spatial node `j`.
    pub fn trace(&self, j: usize) -> Trace {
        Trace {
            time: self.time,
            location: self.grid.node(j),
            values: (0..self.time.n_levels()).map(|n| self.at(n, j)).collect(),
        }
    }

    /// Value at a point that must coincide with a node of this field's grids.
    pub fn node_value(&self, x: f64, t: f64) -> f64 {
        let j = (x - self.grid.x_min) / self.grid.dx();
        let n = t / self.time.dt();
        let (jr, nr) = (j.round(), n.round());
        debug_assert!(
            (j - jr).abs() < 1e-6 && (n - nr).abs() < 1e-6,
            "node_value queried off-grid at ({x}, {t})"
        );
        self.at(nr as usize, jr as usize)
    }

    /// Restriction to a subgrid whose nodes are a subset of this field's nodes.
    pub fn restrict(&self, sub: &Grid) -> Result<Field> {
        let j0 = self
            .grid
            .index_of(sub.x_min)
            .ok_or_else(|| Error::InvalidSpec("subgrid left endpoint off parent grid".into()))?;
        let j1 = self
            .grid
            .index_of(sub.x_max)
            .ok_or_else(|| Error::InvalidSpec("subgrid right endpoint off parent grid".into()))?;
        if j1 - j0 != sub.n_cells {
            return Err(Error::InvalidSpec("subgrid spacing differs from parent".into()));
        }
        let mut out = Field::zeros(*sub, self.time);
        for n in 0..self.time.n_levels() {
            for j in 0..sub.n_nodes() {
                out.set(n, j, self.at(n, j0 + j));
            }
        }
        Ok(out)
    }
}

/// Time series at a fixed spatial location; the carrier of boundary and
/// interface data exchanged between solvers.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub time: TimeGrid,
    pub location: f64,
    pub values: Vec<f64>,
}

impl Trace {
    pub fn zeros(time: TimeGrid, location: f64) -> Self {
        Trace {
            time,
            location,
            values: vec![0.0; time.n_levels()],
        }
    }

    pub fn from_fn(time: TimeGrid, location: f64, f: impl Fn(f64) -> f64) -> Self {
        Trace {
            time,
            location,
            values: (0..time.n_levels()).map(|n| f(time.t(n))).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Trapezoidal `L^2(0,T)` norm.
    pub fn l2_time(&self) -> f64 {
        let dt = self.time.dt();
        let n = self.values.len();
        let mut s = 0.0;
        for (i, v) in self.values.iter().enumerate() {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            s += w * v * v;
        }
        (s * dt).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_node_identities() {
        let g = Grid::new(-1.0, 1.0, 10).unwrap();
        assert_eq!(g.n_nodes(), 11);
        assert_eq!(g.node(0), -1.0);
        assert_eq!(g.node(10), 1.0);
        assert!((g.dx() - 0.2).abs() < 1e-15);
        assert_eq!(g.index_of(0.0), Some(5));
        assert_eq!(g.index_of(0.05), None);
    }

    #[test]
    fn grid_rejects_degenerate() {
        assert!(Grid::new(1.0, 1.0, 4).is_err());
        assert!(Grid::new(0.0, 1.0, 0).is_err());
        assert!(TimeGrid::new(0.0, 4).is_err());
    }

    #[test]
    fn time_grid_hits_final_time() {
        let t = TimeGrid::new(1.0, 7).unwrap();
        assert_eq!(t.t(7), 1.0);
        assert_eq!(t.t(0), 0.0);
    }

    #[test]
    fn field_restrict_and_trace() {
        let g = Grid::new(-1.0, 1.0, 4).unwrap();
        let tg = TimeGrid::new(1.0, 2).unwrap();
        let mut f = Field::zeros(g, tg);
        for n in 0..3 {
            for j in 0..5 {
                f.set(n, j, (n * 10 + j) as f64);
            }
        }
        let sub = g.subgrid(0.0, 1.0).unwrap();
        let r = f.restrict(&sub).unwrap();
        assert_eq!(r.at(1, 0), 12.0);
        assert_eq!(r.at(2, 2), 24.0);
        let tr = f.trace(2);
        assert_eq!(tr.location, 0.0);
        assert_eq!(tr.values, vec![2.0, 12.0, 22.0]);
    }

    #[test]
    fn trace_l2_of_one_is_sqrt_t() {
        let tg = TimeGrid::new(2.0, 8).unwrap();
        let tr = Trace::from_fn(tg, 0.0, |_| 1.0);
        assert!((tr.l2_time() - 2.0f64.sqrt()).abs() < 1e-14);
    }
}
