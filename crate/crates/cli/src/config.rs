//! Plain-text `key = value` run configuration.
//!
//! Files use sections `[problem]`, `[grid]`, `[sweep]`, `[output]`; a key may
//! also be written in dotted form (`problem.nu = 1e-3`) with or without a
//! section header, which is the form used by run manifests. Unknown keys are
//! errors so typos cannot silently fall back to defaults. Unspecified keys
//! take the reference-experiment defaults.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use hetdd_core::{CouplingMethod, DataSpec, Grid, ProblemSpec, TimeGrid};

use crate::error::{CliError, Result};

/// All keys the parser accepts, in manifest (dotted) form.
const KNOWN_KEYS: &[&str] = &[
    "problem.sign",
    "problem.a",
    "problem.nu",
    "problem.c",
    "problem.l1",
    "problem.l2",
    "problem.t_final",
    "problem.t0",
    "problem.x0",
    "problem.forcing",
    "problem.initial",
    "grid.n",
    "grid.n_steps",
    "sweep.nu_list",
    "sweep.methods",
    "sweep.theta",
    "sweep.max_iters",
    "sweep.tol",
    "output.prefix",
];

/// Space-time forcing selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Forcing {
    /// Switch-on forcing of the reference experiments, active for `t > t0`.
    Paper,
    Zero,
}

/// Initial-condition selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Initial {
    /// Gaussian bump `exp(-100 (x - x0)^2)`.
    Bump,
    Zero,
}

/// Fully resolved run parameters: problem data, grids, method list and the
/// viscosity sweep. Produced by [`RunConfig::parse`]; echoed verbatim by
/// [`RunConfig::manifest`] so a run can be replayed bit-identically.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub a: f64,
    pub nu: f64,
    pub c: f64,
    pub l1: f64,
    pub l2: f64,
    pub t_final: f64,
    pub t0: f64,
    pub x0: f64,
    pub forcing: Forcing,
    pub initial: Initial,
    /// Number of grid cells over the full domain `(-l1, l2)`.
    pub n: usize,
    /// Number of time steps; `None` selects `dt = dx`.
    pub n_steps: Option<usize>,
    pub nu_list: Vec<f64>,
    pub methods: Vec<CouplingMethod>,
    /// Relaxation for the non-variational iteration; `None` uses the
    /// `1/(450 sqrt(nu))` heuristic.
    pub theta: Option<f64>,
    pub max_iters: usize,
    pub tol: f64,
    /// Prefix prepended to every output file name.
    pub prefix: String,
}

impl RunConfig {
    /// Parse config text, then apply `key=value` overrides (dotted keys).
    pub fn parse(text: &str, overrides: &[String]) -> Result<RunConfig> {
        let mut map = parse_keys(text)?;
        for ov in overrides {
            let (key, value) = ov
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("override `{ov}` is not key=value")))?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(CliError::Config(format!("unknown key `{key}`")));
            }
            map.insert(key.to_string(), value.trim().to_string());
        }
        build(&map)
    }

    /// The coupled problem at viscosity `nu`.
    pub fn problem_spec(&self, nu: f64) -> ProblemSpec {
        ProblemSpec {
            a: self.a,
            nu,
            c: self.c,
            l1: self.l1,
            l2: self.l2,
            t_final: self.t_final,
            f: match self.forcing {
                Forcing::Paper => DataSpec::PaperForcing { t0: self.t0 },
                Forcing::Zero => DataSpec::Zero,
            },
            g1: DataSpec::Zero,
            g2: DataSpec::Zero,
            h: match self.initial {
                Initial::Bump => DataSpec::gaussian_bump(self.x0),
                Initial::Zero => DataSpec::Zero,
            },
        }
    }

    /// Space and time grids; `dt = dx` unless `grid.n_steps` was given.
    pub fn grids(&self) -> Result<(Grid, TimeGrid)> {
        let grid = Grid::new(-self.l1, self.l2, self.n)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let n_steps = self.resolved_n_steps(&grid);
        let time = TimeGrid::new(self.t_final, n_steps)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        Ok((grid, time))
    }

    fn resolved_n_steps(&self, grid: &Grid) -> usize {
        self.n_steps
            .unwrap_or_else(|| (self.t_final / grid.dx()).round().max(1.0) as usize)
    }

    /// Sorted `key = value` text echoing every resolved parameter. The
    /// manifest is itself a valid config that reproduces this run exactly.
    pub fn manifest(&self) -> String {
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        let sign = if self.a > 0.0 { "pos" } else { "neg" };
        map.insert("problem.sign".into(), sign.into());
        map.insert("problem.a".into(), fmt_f64(self.a));
        map.insert("problem.nu".into(), fmt_f64(self.nu));
        map.insert("problem.c".into(), fmt_f64(self.c));
        map.insert("problem.l1".into(), fmt_f64(self.l1));
        map.insert("problem.l2".into(), fmt_f64(self.l2));
        map.insert("problem.t_final".into(), fmt_f64(self.t_final));
        map.insert("problem.t0".into(), fmt_f64(self.t0));
        map.insert("problem.x0".into(), fmt_f64(self.x0));
        map.insert(
            "problem.forcing".into(),
            match self.forcing {
                Forcing::Paper => "paper".into(),
                Forcing::Zero => "zero".into(),
            },
        );
        map.insert(
            "problem.initial".into(),
            match self.initial {
                Initial::Bump => "bump".into(),
                Initial::Zero => "zero".into(),
            },
        );
        map.insert("grid.n".into(), self.n.to_string());
        if let Ok(grid) = Grid::new(-self.l1, self.l2, self.n) {
            map.insert("grid.n_steps".into(), self.resolved_n_steps(&grid).to_string());
        }
        map.insert(
            "sweep.nu_list".into(),
            self.nu_list.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(","),
        );
        map.insert(
            "sweep.methods".into(),
            self.methods.iter().map(|m| m.label()).collect::<Vec<_>>().join(","),
        );
        if let Some(theta) = self.theta {
            map.insert("sweep.theta".into(), fmt_f64(theta));
        }
        map.insert("sweep.max_iters".into(), self.max_iters.to_string());
        map.insert("sweep.tol".into(), fmt_f64(self.tol));
        map.insert("output.prefix".into(), self.prefix.clone());

        let mut out = String::new();
        for (k, v) in &map {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

/// 17-significant-digit scientific notation; round-trips every finite f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_keys(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    let mut section: Option<&str> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = Some(match name.trim() {
                "problem" => "problem",
                "grid" => "grid",
                "sweep" => "sweep",
                "output" => "output",
                other => {
                    return Err(CliError::Config(format!(
                        "line {}: unknown section `[{other}]`",
                        lineno + 1
                    )))
                }
            });
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!("line {}: expected key = value, got `{line}`", lineno + 1))
        })?;
        let key = key.trim();
        let full = if key.contains('.') {
            key.to_string()
        } else {
            match section {
                Some(s) => format!("{s}.{key}"),
                None => {
                    return Err(CliError::Config(format!(
                        "line {}: key `{key}` appears before any section header",
                        lineno + 1
                    )))
                }
            }
        };
        if !KNOWN_KEYS.contains(&full.as_str()) {
            return Err(CliError::Config(format!(
                "line {}: unknown key `{key}`",
                lineno + 1
            )));
        }
        map.insert(full, value.trim().to_string());
    }
    Ok(map)
}

fn get_f64(map: &BTreeMap<String, String>, key: &str, default: f64) -> Result<f64> {
    match map.get(key) {
        None => Ok(default),
        Some(s) => s
            .parse::<f64>()
            .map_err(|_| CliError::Config(format!("key `{key}`: `{s}` is not a number"))),
    }
}

fn get_usize(map: &BTreeMap<String, String>, key: &str) -> Result<Option<usize>> {
    match map.get(key) {
        None => Ok(None),
        Some(s) => s
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Config(format!("key `{key}`: `{s}` is not a positive integer"))),
    }
}

fn parse_method(
    label: &str,
    theta: Option<f64>,
    max_iters: usize,
    tol: f64,
) -> Result<CouplingMethod> {
    let label = label.trim();
    match label {
        "monodomain" => Ok(CouplingMethod::Monodomain),
        "variational" => Ok(CouplingMethod::Variational),
        "nonvariational" => Ok(CouplingMethod::NonVariational { theta, max_iters, tol }),
        _ => {
            if let Some(k) = label.strip_prefix("factorization") {
                let k_iters: usize = k.parse().map_err(|_| {
                    CliError::Config(format!("method `{label}`: bad iteration count `{k}`"))
                })?;
                Ok(CouplingMethod::Factorization { k_iters })
            } else {
                Err(CliError::Config(format!("unknown method `{label}`")))
            }
        }
    }
}

fn build(map: &BTreeMap<String, String>) -> Result<RunConfig> {
    // Advection sign: from `a` when given, else from `sign` (default positive).
    let sign_pos = match map.get("problem.sign").map(String::as_str) {
        None => None,
        Some("pos") => Some(true),
        Some("neg") => Some(false),
        Some(other) => {
            return Err(CliError::Config(format!(
                "key `problem.sign`: expected `pos` or `neg`, got `{other}`"
            )))
        }
    };
    let a = match map.get("problem.a") {
        Some(s) => {
            let a: f64 = s
                .parse()
                .map_err(|_| CliError::Config(format!("key `problem.a`: `{s}` is not a number")))?;
            if let Some(pos) = sign_pos {
                if (a > 0.0) != pos {
                    return Err(CliError::Config(format!(
                        "key `problem.a` = {a} contradicts problem.sign"
                    )));
                }
            }
            a
        }
        None => match sign_pos.unwrap_or(true) {
            true => 1.0,
            false => -1.0,
        },
    };
    let x0_default = if a > 0.0 { -0.6 } else { 0.5 };

    let nu = get_f64(map, "problem.nu", 1e-3)?;
    let forcing = match map.get("problem.forcing").map(String::as_str) {
        None | Some("paper") => Forcing::Paper,
        Some("zero") => Forcing::Zero,
        Some(other) => {
            return Err(CliError::Config(format!(
                "key `problem.forcing`: expected `paper` or `zero`, got `{other}`"
            )))
        }
    };
    let initial = match map.get("problem.initial").map(String::as_str) {
        None | Some("bump") => Initial::Bump,
        Some("zero") => Initial::Zero,
        Some(other) => {
            return Err(CliError::Config(format!(
                "key `problem.initial`: expected `bump` or `zero`, got `{other}`"
            )))
        }
    };

    let n = get_usize(map, "grid.n")?.unwrap_or(2000);
    let n_steps = get_usize(map, "grid.n_steps")?;

    let nu_list = match map.get("sweep.nu_list") {
        None => vec![nu],
        Some(s) => {
            let mut out = Vec::new();
            for part in s.split(',') {
                let part = part.trim();
                out.push(part.parse::<f64>().map_err(|_| {
                    CliError::Config(format!("key `sweep.nu_list`: `{part}` is not a number"))
                })?);
            }
            if out.is_empty() {
                return Err(CliError::Config("key `sweep.nu_list`: empty list".into()));
            }
            out
        }
    };

    let theta = match map.get("sweep.theta") {
        None => None,
        Some(s) => Some(s.parse::<f64>().map_err(|_| {
            CliError::Config(format!("key `sweep.theta`: `{s}` is not a number"))
        })?),
    };
    let max_iters = get_usize(map, "sweep.max_iters")?.unwrap_or(200);
    let tol = get_f64(map, "sweep.tol", 1e-8)?;

    let methods = match map.get("sweep.methods") {
        None => vec![
            CouplingMethod::Variational,
            CouplingMethod::NonVariational { theta, max_iters, tol },
            CouplingMethod::Factorization { k_iters: 1 },
            CouplingMethod::Factorization { k_iters: 2 },
        ],
        Some(s) => {
            let mut out = Vec::new();
            for part in s.split(',') {
                out.push(parse_method(part, theta, max_iters, tol)?);
            }
            out
        }
    };
    for m in &methods {
        m.check().map_err(|e| CliError::Validation(e.to_string()))?;
    }

    Ok(RunConfig {
        a,
        nu,
        c: get_f64(map, "problem.c", 1.0)?,
        l1: get_f64(map, "problem.l1", 1.0)?,
        l2: get_f64(map, "problem.l2", 1.0)?,
        t_final: get_f64(map, "problem.t_final", 1.0)?,
        t0: get_f64(map, "problem.t0", 0.1)?,
        x0: get_f64(map, "problem.x0", x0_default)?,
        forcing,
        initial,
        n,
        n_steps,
        nu_list,
        methods,
        theta,
        max_iters,
        tol,
        prefix: map.get("output.prefix").cloned().unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_experiment() {
        let cfg = RunConfig::parse("", &[]).unwrap();
        assert_eq!(cfg.a, 1.0);
        assert_eq!(cfg.c, 1.0);
        assert_eq!((cfg.l1, cfg.l2), (1.0, 1.0));
        assert_eq!(cfg.t_final, 1.0);
        assert_eq!(cfg.t0, 0.1);
        assert_eq!(cfg.x0, -0.6);
        assert_eq!(cfg.nu, 1e-3);
        // dt = dx by default: n = 2000 cells over a length-2 domain.
        let (grid, time) = cfg.grids().unwrap();
        assert!((grid.dx() - time.dt()).abs() < 1e-15);
    }

    #[test]
    fn negative_sign_defaults() {
        let cfg = RunConfig::parse("[problem]\nsign = neg\n", &[]).unwrap();
        assert_eq!(cfg.a, -1.0);
        assert_eq!(cfg.x0, 0.5);
    }

    #[test]
    fn unknown_key_is_an_error_naming_the_key() {
        let err = RunConfig::parse("[problem]\nvisocsity = 1e-3\n", &[]).unwrap_err();
        assert!(err.to_string().contains("visocsity"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn overrides_win_over_file_keys() {
        let cfg = RunConfig::parse(
            "[problem]\nnu = 1e-3\n",
            &["problem.nu=3e-2".to_string()],
        )
        .unwrap();
        assert_eq!(cfg.nu, 3e-2);
    }

    #[test]
    fn manifest_round_trips() {
        let text = "[problem]\nsign = neg\nnu = 7e-3\n[grid]\nn = 400\n\
                    [sweep]\nnu_list = 1e-2, 3e-3\nmethods = variational,factorization2\n";
        let cfg = RunConfig::parse(text, &[]).unwrap();
        let back = RunConfig::parse(&cfg.manifest(), &[]).unwrap();
        // The manifest pins the resolved n_steps; everything else is equal.
        assert_eq!(back.manifest(), cfg.manifest());
        assert_eq!(back.nu_list, cfg.nu_list);
        assert_eq!(back.methods, cfg.methods);
    }

    #[test]
    fn sign_contradiction_rejected() {
        let err = RunConfig::parse("[problem]\nsign = neg\na = 2.0\n", &[]).unwrap_err();
        assert!(err.to_string().contains("contradicts"), "{err}");
    }

    #[test]
    fn method_list_parses_factorization_counts() {
        let cfg = RunConfig::parse(
            "[sweep]\nmethods = monodomain, factorization3, nonvariational\ntheta = 0.5\n",
            &[],
        )
        .unwrap();
        assert_eq!(cfg.methods[0], CouplingMethod::Monodomain);
        assert_eq!(cfg.methods[1], CouplingMethod::Factorization { k_iters: 3 });
        assert_eq!(
            cfg.methods[2],
            CouplingMethod::NonVariational { theta: Some(0.5), max_iters: 200, tol: 1e-8 }
        );
    }
}
