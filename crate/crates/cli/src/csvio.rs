//! CSV reading/writing with a bit-exact contract: `.` decimal point, `,`
//! separator, LF line endings, mandatory header row, floats serialized with
//! 17 significant digits so `parse(write(x)) == x` for every finite value.

use std::path::Path;

use hetdd_core::{ErrorRecord, Field, Trace};

use crate::config::fmt_f64;
use crate::error::{CliError, Result};

pub const ERRORS_HEADER: &str = "nu,method,err_omega1,err_omega2,peclet,resolved";

/// One parsed row of `errors.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorRow {
    pub nu: f64,
    pub method: String,
    pub err_omega1: f64,
    pub err_omega2: f64,
    pub peclet: f64,
    pub resolved: bool,
}

impl From<&ErrorRecord> for ErrorRow {
    fn from(r: &ErrorRecord) -> Self {
        ErrorRow {
            nu: r.nu,
            method: r.method.label(),
            err_omega1: r.err_omega1,
            err_omega2: r.err_omega2,
            peclet: r.peclet,
            resolved: r.resolved,
        }
    }
}

/// Serialize the error table. Failed cells carry NaN errors and round-trip
/// through the literal `NaN`.
pub fn errors_to_string(rows: &[ErrorRow]) -> String {
    let mut out = String::from(ERRORS_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_f64(r.nu),
            r.method,
            fmt_f64(r.err_omega1),
            fmt_f64(r.err_omega2),
            fmt_f64(r.peclet),
            r.resolved
        ));
    }
    out
}

pub fn write_errors(path: &Path, rows: &[ErrorRow]) -> Result<()> {
    std::fs::write(path, errors_to_string(rows))?;
    Ok(())
}

pub fn parse_errors(text: &str) -> Result<Vec<ErrorRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == ERRORS_HEADER => {}
        other => {
            return Err(CliError::Config(format!(
                "bad errors.csv header: expected `{ERRORS_HEADER}`, got `{}`",
                other.unwrap_or("<empty file>")
            )))
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 6 {
            return Err(CliError::Config(format!(
                "errors.csv row {}: expected 6 fields, got {}",
                i + 2,
                parts.len()
            )));
        }
        let num = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| {
                CliError::Config(format!("errors.csv row {}: bad {what} `{s}`", i + 2))
            })
        };
        rows.push(ErrorRow {
            nu: num(parts[0], "nu")?,
            method: parts[1].to_string(),
            err_omega1: num(parts[2], "err_omega1")?,
            err_omega2: num(parts[3], "err_omega2")?,
            peclet: num(parts[4], "peclet")?,
            resolved: match parts[5] {
                "true" => true,
                "false" => false,
                other => {
                    return Err(CliError::Config(format!(
                        "errors.csv row {}: bad resolved flag `{other}`",
                        i + 2
                    )))
                }
            },
        });
    }
    Ok(rows)
}

pub fn read_errors(path: &Path) -> Result<Vec<ErrorRow>> {
    parse_errors(&std::fs::read_to_string(path)?)
}

/// Long-format space-time field dump: one row per `(t, x)` node per
/// subdomain, columns `x,t,value,subdomain`.
pub fn write_fields(path: &Path, parts: &[(&Field, u8)]) -> Result<()> {
    let mut out = String::from("x,t,value,subdomain\n");
    for (field, subdomain) in parts {
        for n in 0..field.time.n_levels() {
            let t = field.time.t(n);
            for (j, x) in field.grid.nodes().enumerate() {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_f64(x),
                    fmt_f64(t),
                    fmt_f64(field.at(n, j)),
                    subdomain
                ));
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Time trace dump, columns `t,value`.
pub fn write_trace(path: &Path, trace: &Trace) -> Result<()> {
    let mut out = String::from("t,value\n");
    for (n, v) in trace.values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", fmt_f64(trace.time.t(n)), fmt_f64(*v)));
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_round_trip_exactly() {
        let rows = vec![
            ErrorRow {
                nu: 1e-3,
                method: "variational".into(),
                err_omega1: 0.1 + 0.2, // deliberately non-representable decimals
                err_omega2: f64::NAN,
                peclet: 2.0 / 3.0,
                resolved: false,
            },
            ErrorRow {
                nu: 2.997e-2,
                method: "factorization2".into(),
                err_omega1: 5.4321e-300,
                err_omega2: 1.23456789012345678e8,
                peclet: 1.0,
                resolved: true,
            },
        ];
        let text = errors_to_string(&rows);
        assert!(text.starts_with(ERRORS_HEADER));
        assert!(!text.contains('\r'));
        let back = parse_errors(&text).unwrap();
        assert_eq!(back.len(), rows.len());
        for (a, b) in back.iter().zip(&rows) {
            assert_eq!(a.method, b.method);
            assert_eq!(a.nu.to_bits(), b.nu.to_bits());
            assert_eq!(a.err_omega1.to_bits(), b.err_omega1.to_bits());
            // NaN round-trips to a NaN (bit pattern normalizes to the quiet NaN).
            assert_eq!(a.err_omega2.is_nan(), b.err_omega2.is_nan());
            assert_eq!(a.peclet.to_bits(), b.peclet.to_bits());
            assert_eq!(a.resolved, b.resolved);
        }
    }

    #[test]
    fn bad_header_rejected() {
        assert!(parse_errors("nu,method\n").is_err());
        assert!(parse_errors("").is_err());
    }
}
