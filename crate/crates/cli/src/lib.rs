//! Experiment driver for the heterogeneous domain-decomposition solvers:
//! config parsing, sweep execution, CSV tables and SVG log-log plots.

pub mod config;
pub mod csvio;
pub mod error;
pub mod run;
pub mod svg;

pub use config::{Forcing, Initial, RunConfig};
pub use csvio::{errors_to_string, parse_errors, read_errors, write_errors, ErrorRow};
pub use error::{CliError, Result};
pub use run::{cmd_check, cmd_plot, cmd_slopes, cmd_solve, cmd_sweep, slopes_from_rows, SlopeLine};
pub use svg::{plot_errors, Panel};
