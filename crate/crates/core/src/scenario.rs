//! Scenario documents: a JSON measure description plus an optional task.
//!
//! ```json
//! { "sigma": 1, "atoms": [{"t": 0, "c": 1}, {"t": 1, "c": 1}],
//!   "density": {"nodes": [0, 1], "values": [0, 1]},
//!   "task": {"command": "ineq", "tau": 0, "n": 0, "grid": "-20:20:0.01"} }
//! ```
//!
//! Unknown fields are rejected at every level.

use std::fmt;
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

use crate::measure::{Atom, MeasureError, PiecewiseLinearDensity, StieltjesMeasure};
use crate::zeros::{Rectangle, ZeroError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid measure: {0}")]
    Measure(#[from] MeasureError),
    #[error("invalid task field `{field}`: {message}")]
    Task {
        field: &'static str,
        message: String,
    },
}

fn task_err(field: &'static str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Task {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Eval,
    Identities,
    Ineq,
    Interp,
    ZerosCount,
    ZerosClassify,
    ZerosImag,
    Posdef,
    Demo,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Identities => "identities",
            Command::Ineq => "ineq",
            Command::Interp => "interp",
            Command::ZerosCount => "zeros-count",
            Command::ZerosClassify => "zeros-classify",
            Command::ZerosImag => "zeros-imag",
            Command::Posdef => "posdef",
            Command::Demo => "demo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    #[default]
    Json,
    Table,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "table" => Ok(OutputFormat::Table),
            other => Err(format!(
                "unknown output format `{other}` (csv, json, table)"
            )),
        }
    }
}

/// Uniform grid `a:b:step`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(try_from = "String")]
pub struct GridSpec {
    pub a: f64,
    pub b: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn new(a: f64, b: f64, step: f64) -> Result<Self, String> {
        if !(a.is_finite() && b.is_finite() && step.is_finite()) {
            return Err("grid bounds must be finite".into());
        }
        if !(step > 0.0 && b >= a) {
            return Err(format!(
                "grid needs step > 0 and b >= a, got {a}:{b}:{step}"
            ));
        }
        if (b - a) / step > 1e7 {
            return Err("grid has more than 10^7 points".into());
        }
        Ok(Self { a, b, step })
    }

    pub fn points(&self) -> Vec<f64> {
        crate::inequality::uniform_grid(self.a, self.b, self.step)
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid must look like a:b:step, got `{s}`"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
        Self::new(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }
}

impl TryFrom<String> for GridSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.a, self.b, self.step)
    }
}

/// Parse `x0,x1,y0,y1`.
pub fn parse_rect(s: &str) -> Result<Rectangle, String> {
    let vals: Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
    match vals
        .map_err(|e| format!("rectangle `{s}`: {e}"))?
        .as_slice()
    {
        &[x0, x1, y0, y1] => Rectangle::new(x0, x1, y0, y1).map_err(|e: ZeroError| e.to_string()),
        _ => Err(format!("rectangle must look like x0,x1,y0,y1, got `{s}`")),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    t: f64,
    c: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDensity {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTask {
    command: Command,
    grid: Option<GridSpec>,
    rect: Option<[f64; 4]>,
    tau: Option<f64>,
    n: Option<i32>,
    alpha: Option<f64>,
    tol: Option<f64>,
    out: Option<OutputFormat>,
    terms: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    sigma: f64,
    #[serde(default)]
    atoms: Vec<RawAtom>,
    #[serde(default)]
    density: Option<RawDensity>,
    #[serde(default)]
    task: Option<RawTask>,
}

/// A command with its parameters, validated against the command's preconditions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TaskParams {
    pub grid: Option<GridSpec>,
    pub rect: Option<Rectangle>,
    pub tau: Option<f64>,
    pub n: Option<i32>,
    pub alpha: Option<f64>,
    pub tol: Option<f64>,
    pub out: OutputFormat,
    pub terms: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskDescriptor {
    pub command: Command,
    pub params: TaskParams,
}

impl TaskParams {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if let Some(n) = self.n {
            if !(-1..=1).contains(&n) {
                return Err(task_err("n", format!("must be -1, 0 or 1, got {n}")));
            }
        }
        for (field, v) in [("tau", self.tau), ("alpha", self.alpha)] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(task_err(field, format!("must be finite, got {v}")));
                }
            }
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(task_err("tol", format!("must be positive, got {tol}")));
            }
        }
        if self.terms == Some(0) {
            return Err(task_err("terms", "must be positive"));
        }
        Ok(())
    }

    /// Fields set in `other` replace those in `self`; `out` is left alone.
    pub fn overlay(self, other: &TaskParams) -> TaskParams {
        TaskParams {
            grid: other.grid.or(self.grid),
            rect: other.rect.or(self.rect),
            tau: other.tau.or(self.tau),
            n: other.n.or(self.n),
            alpha: other.alpha.or(self.alpha),
            tol: other.tol.or(self.tol),
            out: self.out,
            terms: other.terms.or(self.terms),
        }
    }
}

impl TaskDescriptor {
    /// Parameters used when neither the scenario nor the caller sets them.
    ///
    /// `tol` is the identity residual bound for `identities`, the violation
    /// tolerance (relative to the margin scale) for `ineq`, and the slack added to
    /// the tail bound for `interp`.
    pub fn defaults(command: Command, sigma: f64) -> TaskDescriptor {
        let fine = GridSpec {
            a: -20.0,
            b: 20.0,
            step: std::f64::consts::PI / (50.0 * sigma),
        };
        let uniform = |a, b, step| Some(GridSpec { a, b, step });
        let base = TaskParams::default();
        let params = match command {
            Command::Eval => TaskParams {
                grid: Some(fine),
                n: Some(0),
                tau: Some(0.0),
                ..base
            },
            Command::Identities => TaskParams {
                grid: uniform(-50.0, 50.0, 0.5),
                alpha: Some(0.7),
                tol: Some(1e-10),
                ..base
            },
            Command::Ineq => TaskParams {
                grid: Some(fine),
                n: Some(0),
                tau: Some(0.0),
                tol: Some(1e-9),
                ..base
            },
            Command::Interp => TaskParams {
                grid: uniform(-10.0, 10.0, 0.25),
                alpha: Some(0.3),
                n: Some(0),
                tau: Some(0.0),
                terms: Some(1000),
                tol: Some(1e-9),
                ..base
            },
            Command::ZerosCount => TaskParams {
                rect: Some(Rectangle::standard_lower()),
                ..base
            },
            Command::Posdef => TaskParams {
                alpha: Some(1.0),
                ..base
            },
            Command::Demo => TaskParams {
                grid: uniform(0.0, 10.0, 0.01),
                ..base
            },
            Command::ZerosClassify | Command::ZerosImag => base,
        };
        TaskDescriptor { command, params }
    }

    /// Defaults, then the scenario's task when it names the same command, then
    /// `overrides`; the result is validated.
    pub fn resolve(
        command: Command,
        sigma: f64,
        scenario_task: Option<&TaskDescriptor>,
        overrides: &TaskParams,
    ) -> Result<TaskDescriptor, ScenarioError> {
        let mut params = Self::defaults(command, sigma).params;
        if let Some(task) = scenario_task.filter(|t| t.command == command) {
            params = params.overlay(&task.params);
            params.out = task.params.out;
        }
        params = params.overlay(overrides);
        params.validate()?;
        Ok(TaskDescriptor { command, params })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub measure: StieltjesMeasure,
    pub task: Option<TaskDescriptor>,
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let raw: RawScenario = serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let atoms = raw.atoms.iter().map(|a| Atom::new(a.t, a.c)).collect();
    let density = raw
        .density
        .map(|d| PiecewiseLinearDensity::new(d.nodes, d.values))
        .transpose()?;
    let measure = StieltjesMeasure::new(raw.sigma, atoms, density)?;
    let task = raw
        .task
        .map(|t| {
            let rect = t
                .rect
                .map(|[x0, x1, y0, y1]| Rectangle::new(x0, x1, y0, y1))
                .transpose()
                .map_err(|e| task_err("rect", e.to_string()))?;
            let params = TaskParams {
                grid: t.grid,
                rect,
                tau: t.tau,
                n: t.n,
                alpha: t.alpha,
                tol: t.tol,
                out: t.out.unwrap_or_default(),
                terms: t.terms,
            };
            params.validate()?;
            Ok::<_, ScenarioError>(TaskDescriptor {
                command: t.command,
                params,
            })
        })
        .transpose()?;
    Ok(Scenario { measure, task })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_atoms() {
        let s = parse_scenario(r#"{"sigma": 1, "atoms": [{"t": 0, "c": 1}, {"t": 1, "c": 1}]}"#)
            .unwrap();
        assert_eq!(s.measure.atoms().len(), 2);
        assert_eq!(s.measure.sigma(), 1.0);
        assert!(s.task.is_none());
    }

    #[test]
    fn atom_outside_support() {
        let err = parse_scenario(r#"{"sigma": 1, "atoms": [{"t": 2, "c": 1}]}"#).unwrap_err();
        assert!(err.to_string().contains("atom outside support"), "{err}");
    }

    #[test]
    fn density_interpolant() {
        let s = parse_scenario(
            r#"{"sigma": 1, "density": {"nodes": [0, 0.5, 1], "values": [0, 0.5, 1]}, "atoms": []}"#,
        )
        .unwrap();
        let d = s.measure.density().unwrap();
        for t in [0.1, 0.5, 0.77] {
            assert!((d.eval(t) - t).abs() < 1e-15);
        }
    }

    #[test]
    fn unknown_fields_report_position() {
        let text = "{\n  \"sigma\": 1,\n  \"atomz\": []\n}";
        match parse_scenario(text).unwrap_err() {
            ScenarioError::Parse { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("atomz"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let nested = r#"{"sigma": 1, "atoms": [{"t": 0, "c": 1, "w": 2}]}"#;
        assert!(matches!(
            parse_scenario(nested),
            Err(ScenarioError::Parse { .. })
        ));
    }

    #[test]
    fn task_fields() {
        let s = parse_scenario(
            r#"{"sigma": 1, "atoms": [{"t": 1, "c": 2}],
                "task": {"command": "zeros-count", "rect": [-1, 1, -2, -0.1],
                         "grid": "-5:5:0.5", "n": 0, "tau": 1.5707963267948966, "out": "csv"}}"#,
        )
        .unwrap();
        let t = s.task.unwrap();
        assert_eq!(t.command, Command::ZerosCount);
        assert_eq!(t.params.out, OutputFormat::Csv);
        assert_eq!(t.params.grid.unwrap().points().len(), 21);
        assert_eq!(t.params.rect.unwrap().y_max, -0.1);

        let bad_n =
            r#"{"sigma": 1, "atoms": [{"t": 1, "c": 2}], "task": {"command": "ineq", "n": 3}}"#;
        assert!(matches!(
            parse_scenario(bad_n),
            Err(ScenarioError::Task { field: "n", .. })
        ));
        let bad_rect = r#"{"sigma": 1, "atoms": [{"t": 1, "c": 2}], "task": {"command": "ineq", "rect": [1, 0, 0, 1]}}"#;
        assert!(matches!(
            parse_scenario(bad_rect),
            Err(ScenarioError::Task { field: "rect", .. })
        ));
        let bad_grid = r#"{"sigma": 1, "atoms": [{"t": 1, "c": 2}], "task": {"command": "eval", "grid": "1:0:1"}}"#;
        assert!(matches!(
            parse_scenario(bad_grid),
            Err(ScenarioError::Parse { .. })
        ));
    }

    #[test]
    fn grid_and_rect_strings() {
        assert_eq!(
            "0:1:0.25".parse::<GridSpec>().unwrap().points(),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
        assert!("0:1".parse::<GridSpec>().is_err());
        assert!("0:1:0".parse::<GridSpec>().is_err());
        let r = parse_rect("-20,20,-6,-0.001").unwrap();
        assert_eq!(r, Rectangle::standard_lower());
        assert!(parse_rect("1,2,3").is_err());
    }

    #[test]
    fn resolution_order() {
        let s = parse_scenario(
            r#"{"sigma": 2, "atoms": [{"t": 2, "c": 1}],
                "task": {"command": "ineq", "tau": 1.5, "tol": 1e-6, "out": "table"}}"#,
        )
        .unwrap();
        let flags = TaskParams {
            tol: Some(1e-3),
            ..TaskParams::default()
        };
        let t = TaskDescriptor::resolve(Command::Ineq, 2.0, s.task.as_ref(), &flags).unwrap();
        assert_eq!(t.params.tau, Some(1.5));
        assert_eq!(t.params.tol, Some(1e-3));
        assert_eq!(t.params.n, Some(0));
        assert_eq!(t.params.out, OutputFormat::Table);
        assert_eq!(t.params.grid.unwrap().step, std::f64::consts::PI / 100.0);

        // a task for another command contributes nothing
        let e =
            TaskDescriptor::resolve(Command::Eval, 2.0, s.task.as_ref(), &TaskParams::default())
                .unwrap();
        assert_eq!(e.params.tau, Some(0.0));
        assert_eq!(e.params.out, OutputFormat::Json);

        let bad = TaskParams {
            terms: Some(0),
            ..TaskParams::default()
        };
        assert!(TaskDescriptor::resolve(Command::Interp, 1.0, None, &bad).is_err());
    }
}
