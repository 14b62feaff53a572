//! One function per command. Each calls into the library and records the results;
//! thresholds come from the resolved task parameters.

use std::f64::consts::FRAC_PI_2;

use anyhow::{anyhow, bail, Context, Result};
use exptype::inequality::{check_inequality_with, counterexample_d, OmegaConfig, Tolerances};
use exptype::posdef::{
    h_prime_zero_checks, laplace_limit_check, lemma3_integral, recover_pd_profile,
};
use exptype::sampling::{interp_lhs, interp_rhs, SampledFunction};
use exptype::scenario::{Command, TaskParams};
use exptype::zeros::{
    classify, count_zeros, find_imaginary_zero, locate_zeros, Rectangle, Target, ZeroError,
};
use exptype::{Evaluator, StieltjesMeasure};
use serde_json::{json, Value};

use crate::render::{Report, Table, Violation};

/// Named fixtures runnable without a scenario file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Demo {
    /// Sign-changing `d` for the counterexample family with parameter `a`.
    Remark32,
    /// Triangular profile with `F(0) = 1/2`: one zero in the lower half-plane.
    TriangleCase2,
    /// Single atom at σ with τ = π/2: equality everywhere.
    AtomAtSigma,
}

fn required<T>(value: Option<T>, field: &str) -> Result<T> {
    value.ok_or_else(|| anyhow!("missing parameter `{field}`"))
}

fn omega(m: &StieltjesMeasure, p: &TaskParams) -> Result<OmegaConfig> {
    let n = required(p.n, "n")?;
    let tau = required(p.tau, "tau")?;
    Ok(OmegaConfig::new(m, n, tau)?)
}

fn rect_json(r: &Rectangle) -> Value {
    json!([r.x_min, r.x_max, r.y_min, r.y_max])
}

/// Property failures become violation records; everything else is an input error.
fn zero_violation(command: &'static str, err: ZeroError) -> Result<Report> {
    let message = err.to_string();
    let violation = match err {
        ZeroError::HypothesisViolated { quantity, x, value } => Violation {
            property: match quantity {
                "S" => "sine_nonnegative",
                _ => "cosine_nonnegative",
            },
            location: json!(x),
            observed: value,
            bound: 0.0,
        },
        ZeroError::CountMismatch { expected, counted } => Violation {
            property: "lower_zero_count",
            location: Value::Null,
            observed: counted as f64,
            bound: expected as f64,
        },
        ZeroError::MultiplicityExceeded(x) => Violation {
            property: "real_zero_multiplicity",
            location: json!(x),
            observed: 3.0,
            bound: 2.0,
        },
        other => return Err(other.into()),
    };
    let mut report = Report::new(command);
    report.set("error", message);
    report.violation = Some(violation);
    Ok(report)
}

pub fn run(command: Command, m: &StieltjesMeasure, p: &TaskParams) -> Result<Report> {
    match command {
        Command::Eval => eval(m, p),
        Command::Identities => identities(m, p),
        Command::Ineq => ineq(m, p),
        Command::Interp => interp(m, p),
        Command::ZerosCount => zeros_count(m, p),
        Command::ZerosClassify => zeros_classify(m),
        Command::ZerosImag => zeros_imag(m),
        Command::Posdef => posdef(m, p),
        Command::Demo => bail!("`demo` takes a fixture name, not a scenario"),
    }
}

fn eval(m: &StieltjesMeasure, p: &TaskParams) -> Result<Report> {
    let cfg = omega(m, p)?;
    let ev = cfg.evaluator();
    let rows = required(p.grid, "grid")?
        .points()
        .into_iter()
        .map(|x| {
            let s = ev.sample(x);
            let ms = cfg.margin(x);
            vec![
                x, s.f.re, s.f.im, s.g, s.h, s.c, s.s, s.delta, ms.e, ms.margin,
            ]
        })
        .collect();
    let mut r = Report::new("eval");
    r.set("sigma", m.sigma());
    r.set("n", cfg.n());
    r.set("tau", cfg.tau());
    r.table = Some(Table {
        columns: vec![
            "x", "F_re", "F_im", "G", "H", "C", "S", "Delta", "E", "margin",
        ],
        rows,
    });
    Ok(r)
}

fn identities(m: &StieltjesMeasure, p: &TaskParams) -> Result<Report> {
    let ev = Evaluator::new(m);
    let alpha = required(p.alpha, "alpha")?;
    let tol = required(p.tol, "tol")?;
    let rows: Vec<Vec<f64>> = required(p.grid, "grid")?
        .points()
        .into_iter()
        .map(|x| vec![x, ev.identity_residuals(x, alpha, -alpha).max_relative()])
        .collect();
    let (x_worst, worst) = rows
        .iter()
        .map(|r| (r[0], r[1]))
        .fold((f64::NAN, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    let mut r = Report::new("identities");
    r.set("alpha", alpha);
    r.set("beta", -alpha);
    r.set("max_relative_residual", worst);
    r.set("worst_location", x_worst);
    if worst > tol {
        r.violation = Some(Violation {
            property: "identity_residual",
            location: json!(x_worst),
            observed: worst,
            bound: tol,
        });
    }
    r.table = Some(Table {
        columns: vec!["x", "relative_residual"],
        rows,
    });
    Ok(r)
}

fn ineq(m: &StieltjesMeasure, p: &TaskParams) -> Result<Report> {
    let cfg = omega(m, p)?;
    let tol = Tolerances {
        violation: required(p.tol, "tol")?,
        ..Tolerances::for_measure(m)
    };
    let report = check_inequality_with(&cfg, &required(p.grid, "grid")?.points(), tol);
    let status = if !report.hypothesis_ok {
        "hypothesis not met"
    } else if report.global_equality {
        "global equality"
    } else if report.equality_points.is_empty() {
        "strict"
    } else {
        "equality at isolated points"
    };
    let mut r = Report::new("ineq");
    r.set("condition", report.condition.label());
    r.set("n", cfg.n());
    r.set("tau", cfg.tau());
    r.set("status", status);
    r.set("hypothesis_ok", report.hypothesis_ok);
    r.set("holds", report.holds());
    r.set("min_margin", report.min_margin);
    r.set("min_relative_margin", report.min_relative_margin);
    r.set("violations", report.violations.len());
    r.set("equality_points", json!(report.equality_points));
    r.set("dichotomy_failures", json!(report.dichotomy_failures));
    r.set("global_equality", report.global_equality);
    r.set("global_form_ok", report.global_form_ok);
    if report.hypothesis_ok {
        r.violation = if let Some(&x) = report.violations.first() {
            let s = cfg.margin(x);
            Some(Violation {
                property: "margin_nonnegative",
                location: json!(x),
                observed: s.margin,
                bound: -tol.violation * s.scale,
            })
        } else if let Some(&x) = report.dichotomy_failures.first() {
            let s = cfg.margin(x);
            Some(Violation {
                property: "equality_dichotomy",
                location: json!(x),
                observed: s.margin.abs(),
                bound: tol.equality * s.scale,
            })
        } else if report.global_equality && !report.global_form_ok {
            Some(Violation {
                property: "global_equality_form",
                location: Value::Null,
                observed: 1.0,
                bound: 0.0,
            })
        } else {
            None
        };
    }
    r.table = Some(Table {
        columns: vec!["x", "E", "d", "lhs", "rhs", "margin", "scale"],
        rows: report
            .samples
            .iter()
            .map(|s| vec![s.x, s.e, s.d, s.lhs, s.rhs, s.margin, s.scale])
            .collect(),
    });
    Ok(r)
}

fn interp(m: &StieltjesMeasure, p: &TaskParams) -> Result<Report> {
    let cfg = omega(m, p)?;
    let alpha = required(p.alpha, "alpha")?;
    let terms = required(p.terms, "terms")?;
    let tol = required(p.tol, "tol")?;
    let f = SampledFunction::from_omega(&cfg, alpha)?;
    let sigma = f.sigma();
    let mut rows = Vec::new();
    let mut violation = None;
    for x in required(p.grid, "grid")?.points() {
        let lhs = interp_lhs(&f, sigma, alpha, x);
        let rhs = interp_rhs(&f, sigma, alpha, x, terms)?;
        let residual = (lhs - rhs.value).abs();
        if residual > rhs.tail_bound + tol && violation.is_none() {
            violation = Some(Violation {
                property: "interpolation_residual",
                location: json!(x),
                observed: residual,
                bound: rhs.tail_bound + tol,
            });
        }
        rows.push(vec![x, lhs, rhs.value, rhs.tail_bound, residual]);
    }
    let mut r = Report::new("interp");
    r.set("alpha", alpha);
    r.set("terms", terms);
    r.set(
        "max_residual",
        rows.iter().map(|row| row[4]).fold(0.0, f64::max),
    );
    r.violation = violation;
    r.table = Some(Table {
        columns: vec!["x", "lhs", "rhs", "tail_bound", "residual"],
        rows,
    });
    Ok(r)
}

fn zeros_count(m: &StieltjesMeasure, p: &TaskParams) -> Result<Report> {
    let rect = required(p.rect, "rect")?;
    let (target, label) = match (p.alpha, p.n) {
        (Some(_), Some(_)) => bail!("give at most one of `alpha` and `n` for zeros-count"),
        (Some(a), None) => (Target::HAlpha(a), format!("h_alpha({a:?})")),
        (None, Some(n)) if n != 0 => (Target::PowerTimesF(n), format!("z^{n} F")),
        _ => (Target::F, "F".to_owned()),
    };
    let result = match count_zeros(target, m, &rect) {
        Ok(r) => r,
        Err(e) => return zero_violation("zeros-count", e),
    };
    let zeros = if result.count > 0 {
        locate_zeros(target, m, &rect)
            .context("locating the counted zeros")?
            .iter()
            .map(|z| json!({"re": z.re, "im": z.im}))
            .collect()
    } else {
        Vec::new()
    };
    let mut r = Report::new("zeros-count");
    r.set("target", label);
    r.set("rect", rect_json(&rect));
    r.set("count", result.count);
    r.set("winding_residual", result.winding_residual);
    r.set("boundary_samples", result.boundary_samples);
    r.set("zeros", zeros);
    Ok(r)
}

fn zeros_classify(m: &StieltjesMeasure) -> Result<Report> {
    let c = match classify(m) {
        Ok(c) => c,
        Err(e) => return zero_violation("zeros-classify", e),
    };
    let mut r = Report::new("zeros-classify");
    r.set("verdict", c.verdict.label());
    r.set(
        "real_zeros",
        c.real_zeros
            .iter()
            .map(|z| json!({"x": z.x, "multiplicity": z.multiplicity}))
            .collect::<Vec<_>>(),
    );
    r.set(
        "lower_zero",
        c.lower_zero
            .map_or(Value::Null, |z| json!({"re": z.re, "im": z.im})),
    );
    r.set("defect", c.defect);
    r.set("window", rect_json(&c.window));
    r.set(
        "lower_count",
        c.lower_count.map_or(Value::Null, |l| json!(l.count)),
    );
    r.set(
        "winding_residual",
        c.lower_count
            .map_or(Value::Null, |l| json!(l.winding_residual)),
    );
    Ok(r)
}

fn zeros_imag(m: &StieltjesMeasure) -> Result<Report> {
    let y = match find_imaginary_zero(m) {
        Ok(y) => y,
        Err(e) => return zero_violation("zeros-imag", e),
    };
    let mut r = Report::new("zeros-imag");
    r.set("found", y.is_some());
    r.set("y", y.map_or(Value::Null, Value::from));
    Ok(r)
}

fn posdef(m: &StieltjesMeasure, p: &TaskParams) -> Result<Report> {
    let alpha = required(p.alpha, "alpha")?;
    let rec = recover_pd_profile(m);
    let mut r = Report::new("posdef");
    r.set("positive_definite", rec.verdict);
    r.set("f0", rec.profile.f0());
    r.set("f0_nonnegative", rec.f0_nonnegative);
    r.set("pd_bound_ok", rec.pd_bound_ok);
    r.set("constant_phase", rec.constant_phase);
    r.set("s_equals_xk_residual", rec.s_equals_xk_residual);
    r.set(
        "first_violation",
        rec.first_violation
            .map_or(Value::Null, |(x, v)| json!({"x": x, "S": v})),
    );
    let mut violation = None;
    if rec.verdict && !rec.pd_bound_ok {
        violation = Some(Violation {
            property: "profile_bounded_by_origin",
            location: Value::Null,
            observed: f64::NAN,
            bound: rec.profile.f0(),
        });
    }
    match h_prime_zero_checks(m) {
        Ok(h) => {
            r.set("h_prime_0", h.h_prime_0);
            r.set("h_prime_prediction", h.prediction.label());
            r.set("h_prime_sign_ok", h.sign_ok);
            r.set("decaying_case", h.decaying_case);
            r.set("decaying_case_ok", json!(h.decaying_case_ok));
            if !h.sign_ok && violation.is_none() {
                violation = Some(Violation {
                    property: "h_prime_sign",
                    location: json!(0.0),
                    observed: h.h_prime_0,
                    bound: 0.0,
                });
            }
            if h.decaying_case_ok == Some(false) && violation.is_none() {
                violation = Some(Violation {
                    property: "decaying_case_positivity",
                    location: json!(0.0),
                    observed: h.h_prime_0.min(h.f0),
                    bound: 0.0,
                });
            }
        }
        Err(e) => r.set("h_prime_0", format!("skipped: {e}")),
    }
    if rec.verdict && !rec.profile.is_zero() {
        r.set("alpha", alpha);
        r.set("lemma3_beta_zero", lemma3_integral(&rec, alpha, 0.0)?);
        r.set("lemma3_beta_alpha", lemma3_integral(&rec, alpha, alpha)?);
    }
    let lap = laplace_limit_check(m, None);
    r.set(
        "laplace",
        json!({"t": lap.t, "estimate": lap.estimate, "target": lap.target, "error": lap.error()}),
    );
    r.violation = violation;
    Ok(r)
}

pub fn demo(which: Demo, a: Option<f64>, p: &TaskParams) -> Result<Report> {
    match which {
        Demo::Remark32 => {
            let a = a.unwrap_or(-0.75);
            let rows = required(p.grid, "grid")?
                .points()
                .into_iter()
                .map(|x| Ok(vec![x, counterexample_d(a, x)?]))
                .collect::<Result<Vec<_>>>()?;
            let (x_min, d_min) =
                rows.iter()
                    .map(|r| (r[0], r[1]))
                    .fold(
                        (f64::NAN, f64::INFINITY),
                        |b, c| if c.1 < b.1 { c } else { b },
                    );
            let d_max = rows.iter().map(|r| r[1]).fold(f64::NEG_INFINITY, f64::max);
            let mut r = Report::new("demo");
            r.set("demo", "remark32");
            r.set("a", a);
            r.set("min_d", d_min);
            r.set("min_location", x_min);
            r.set("max_d", d_max);
            r.set("sign_change", d_min < 0.0 && d_max > 0.0);
            r.set(
                "first_negative",
                rows.iter()
                    .find(|r| r[1] < 0.0)
                    .map_or(Value::Null, |r| json!(r[0])),
            );
            r.table = Some(Table {
                columns: vec!["x", "d"],
                rows,
            });
            Ok(r)
        }
        Demo::TriangleCase2 => {
            let m = StieltjesMeasure::from_pd_profile(&[0.0, 1.0], &[1.0, 0.0], -0.5)?;
            let mut r = zeros_classify(&m)?;
            r.command = "demo";
            r.set("demo", "triangle-case2");
            Ok(r)
        }
        Demo::AtomAtSigma => {
            let m = StieltjesMeasure::atomic(1.0, &[(1.0, 1.0)])?;
            let params = TaskParams {
                tau: Some(FRAC_PI_2),
                ..exptype::scenario::TaskDescriptor::defaults(Command::Ineq, 1.0).params
            };
            let mut r = ineq(&m, &params)?;
            r.command = "demo";
            r.set("demo", "atom-at-sigma");
            Ok(r)
        }
    }
}
