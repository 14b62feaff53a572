//! The sharp inequality `4σ d(x) ≥ x^{2n−2} D(x)` for `ω(z) = zⁿ F(z)`, its
//! equality points and the equality-form witness.
//!
//! The prefactor `x^{2n−2}` is cancelled against the bracket of `D` before
//! anything is evaluated. For `n = −1` the quotients `Δ/x²` and `bracket/x²` are
//! taken from Taylor expansions near the origin, so nothing is divided by a small
//! `x`.

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

use crate::measure::StieltjesMeasure;
use crate::transforms::{series_eval, Evaluator, TAYLOR_TERMS};

/// Below this `|x|σ` the `n = −1` quotients come from power series.
const SERIES_RADIUS: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InequalityError {
    #[error("n must be -1, 0 or 1, got {0}")]
    BadPower(i32),
    #[error("(n, tau) = ({n}, {tau}) matches none of the admissible conditions")]
    UnsupportedCombination { n: i32, tau: f64 },
    #[error("n = -1 needs F(0) = 0, got F(0) = {0}")]
    NonzeroAtOrigin(f64),
    #[error("a must lie in (-1, -1/2), got {0}")]
    CounterexampleParameter(f64),
}

/// Which sign hypothesis on `E` the configuration claims.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Condition {
    /// `C ≥ 0`, `n = 0`, `τ = 0`.
    CosineNonneg,
    /// `S ≥ 0` on `x > 0`, `F = o(1)`, `n = 1`, `τ = −π/2`.
    SineNonneg,
    /// `S ≥ 0` on `x > 0`, `F(0) = 0`, `n = −1`, `τ = −π/2`.
    SineOverX,
    /// `C cos τ₀ − S sin τ₀ ≥ 0`, `n = 0`, `τ = ±τ₀`.
    Phase { tau0: f64 },
}

impl Condition {
    pub fn label(&self) -> &'static str {
        match self {
            Condition::CosineNonneg => "cosine_nonnegative",
            Condition::SineNonneg => "sine_nonnegative",
            Condition::SineOverX => "sine_over_x",
            Condition::Phase { .. } => "phase",
        }
    }
}

/// `ω(z) = zⁿ F(z)` together with the phase `τ`.
#[derive(Debug, Clone)]
pub struct OmegaConfig {
    n: i32,
    tau: f64,
    condition: Condition,
    eval: Evaluator,
}

fn same_angle(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12
}

impl OmegaConfig {
    /// Accepts exactly the admissible `(n, τ)` pairs and records the condition.
    pub fn new(measure: &StieltjesMeasure, n: i32, tau: f64) -> Result<Self, InequalityError> {
        if !(-1..=1).contains(&n) {
            return Err(InequalityError::BadPower(n));
        }
        let condition = match n {
            0 if same_angle(tau, 0.0) => Condition::CosineNonneg,
            0 => Condition::Phase { tau0: tau },
            1 if same_angle(tau, -FRAC_PI_2) => Condition::SineNonneg,
            -1 if same_angle(tau, -FRAC_PI_2) => Condition::SineOverX,
            _ => return Err(InequalityError::UnsupportedCombination { n, tau }),
        };
        let eval = Evaluator::new(measure);
        if n == -1 {
            let f0 = measure.mass_summary().total_mass;
            if f0.abs() > 1e-12 * measure.total_variation().max(1.0) {
                return Err(InequalityError::NonzeroAtOrigin(f0));
            }
        }
        Ok(Self {
            n,
            tau,
            condition,
            eval,
        })
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn condition(&self) -> Condition {
        self.condition
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.eval
    }

    pub fn measure(&self) -> &StieltjesMeasure {
        self.eval.measure()
    }

    pub fn sigma(&self) -> f64 {
        self.eval.sigma()
    }

    /// `E(x) = xⁿ (C cos τ − S sin τ)`.
    pub fn e(&self, x: f64) -> f64 {
        self.eval
            .e(self.tau, self.n, x)
            .expect("F(0) = 0 checked at construction for n = -1")
    }

    /// `P(x) = xⁿ G(x)` and `Q(x) = xⁿ H(x)`; for `n = −1` at the origin the limits.
    pub fn pq(&self, x: f64) -> (f64, f64) {
        if self.near_origin(x) {
            let (tg, th) = self.eval.taylor_gh();
            return (shifted(&tg, x, 1), shifted(&th, x, 1));
        }
        let (g, h) = self.eval.gh_deriv(x, 0);
        let p = x.powi(self.n);
        (p * g, p * h)
    }

    /// `(P′(x), Q′(x))`.
    pub fn pq_deriv(&self, x: f64) -> (f64, f64) {
        if self.near_origin(x) {
            let (tg, th) = self.eval.taylor_gh();
            let d = |c: &[f64]| -> f64 {
                (2..c.len())
                    .rev()
                    .fold(0.0, |acc, j| acc * x + (j - 1) as f64 * c[j])
            };
            return (d(&tg), d(&th));
        }
        let (g, h) = self.eval.gh_deriv(x, 0);
        let (gp, hp) = self.eval.gh_deriv(x, 1);
        let n = self.n;
        let xn = x.powi(n);
        let dxn = if n == 0 {
            0.0
        } else {
            n as f64 * x.powi(n - 1)
        };
        (dxn * g + xn * gp, dxn * h + xn * hp)
    }

    fn near_origin(&self, x: f64) -> bool {
        self.n == -1 && x.abs() * self.sigma() < SERIES_RADIUS
    }

    /// Bracket of `D` with the factor `x^{1−n}` removed, and `x^{2n}Δ`.
    fn reduced(&self, x: f64) -> (f64, f64) {
        let sigma = self.sigma();
        let (ct, st) = (self.tau.cos(), self.tau.sin());
        if self.near_origin(x) {
            let (tc, ts) = self.eval.taylor_cs();
            let b = bracket_series(&tc, &ts, sigma, -1, ct, st);
            let delta = delta_series(&self.eval);
            return (shifted(&b, x, 2), shifted(&delta, x, 2));
        }
        let (c, s) = self.eval.cs_deriv(x, 0);
        let (cp, sp) = self.eval.cs_deriv(x, 1);
        let delta = self.eval.delta(x);
        match self.n {
            0 => (
                (2.0 * sigma * s + cp) * ct + (2.0 * sigma * c - sp) * st,
                delta,
            ),
            1 => (
                (2.0 * sigma * x * s + x * cp + c) * ct + (2.0 * sigma * x * c - x * sp - s) * st,
                x * x * delta,
            ),
            _ => {
                let b = (2.0 * sigma * x * s + x * cp - c) * ct
                    + (2.0 * sigma * x * c - x * sp + s) * st;
                (b / (x * x), delta / (x * x))
            }
        }
    }

    /// `d(x) = x^{2n} Δ(x)`.
    pub fn d(&self, x: f64) -> f64 {
        self.reduced(x).1
    }

    /// `D(x)`: the squared bracket exactly as printed, with no power of `x` removed.
    pub fn big_d(&self, x: f64) -> f64 {
        let sigma = self.sigma();
        let n = self.n as f64;
        let (ct, st) = (self.tau.cos(), self.tau.sin());
        let (c, s) = self.eval.cs_deriv(x, 0);
        let (cp, sp) = self.eval.cs_deriv(x, 1);
        let b = (2.0 * sigma * x * s + x * cp + n * c) * ct
            + (2.0 * sigma * x * c - x * sp - n * s) * st;
        b * b
    }

    /// Margin `4σd − x^{2n−2}D` at one point, with both terms.
    pub fn margin(&self, x: f64) -> MarginSample {
        let (b, d) = self.reduced(x);
        let lhs = 4.0 * self.sigma() * d;
        let rhs = b * b;
        MarginSample {
            x,
            e: self.e(x),
            d,
            lhs,
            rhs,
            margin: lhs - rhs,
            scale: lhs.abs().max(rhs).max(1.0),
        }
    }

    /// Margin of the original form `4σd − {(σP+Q′) sin θ + (P′−σQ) cos θ}²`,
    /// `θ = σx + τ`, computed from `P`, `Q` and their derivatives.
    pub fn margin_from_pq(&self, x: f64) -> f64 {
        let sigma = self.sigma();
        let (p, q) = self.pq(x);
        let (pp, qp) = self.pq_deriv(x);
        let theta = sigma * x + self.tau;
        let bracket = (sigma * p + qp) * theta.sin() + (pp - sigma * q) * theta.cos();
        4.0 * sigma * (p * qp - pp * q) - bracket * bracket
    }
}

/// `Σ_{j≥k} c_j x^{j−k}`.
fn shifted(coeffs: &[f64], x: f64, k: usize) -> f64 {
    series_eval(&coeffs[k..], x)
}

/// Taylor coefficients of the `D` bracket
/// `(2σxS + xC′ + nC) cos τ + (2σxC − xS′ − nS) sin τ`.
fn bracket_series(tc: &[f64], ts: &[f64], sigma: f64, n: i32, ct: f64, st: f64) -> Vec<f64> {
    let n = n as f64;
    (0..tc.len())
        .map(|j| {
            let jf = j as f64;
            let (cprev, sprev) = if j > 0 {
                (tc[j - 1], ts[j - 1])
            } else {
                (0.0, 0.0)
            };
            (2.0 * sigma * sprev + (jf + n) * tc[j]) * ct
                + (2.0 * sigma * cprev - (jf + n) * ts[j]) * st
        })
        .collect()
}

/// Taylor coefficients of `Δ = GH′ − G′H`, valid up to the truncation order.
fn delta_series(eval: &Evaluator) -> Vec<f64> {
    let (g, h) = eval.taylor_gh();
    let len = TAYLOR_TERMS - 2;
    let deriv = |v: &[f64]| -> Vec<f64> { (1..v.len()).map(|j| j as f64 * v[j]).collect() };
    let (gp, hp) = (deriv(&g), deriv(&h));
    (0..len)
        .map(|k| {
            (0..=k)
                .map(|i| g[i] * hp[k - i] - gp[i] * h[k - i])
                .sum::<f64>()
        })
        .collect()
}

/// One grid evaluation of the inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginSample {
    pub x: f64,
    pub e: f64,
    pub d: f64,
    /// `4σ d(x)`.
    pub lhs: f64,
    /// `x^{2n−2} D(x)`.
    pub rhs: f64,
    pub margin: f64,
    /// `max(|4σd|, |x^{2n−2}D|, 1)`.
    pub scale: f64,
}

/// Tolerances for equality and violation decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `|margin| ≤ equality · scale` counts as equality.
    pub equality: f64,
    /// `margin < −violation · scale` counts as a violation.
    pub violation: f64,
    /// `|E| ≤ e_abs` counts as a zero of `E`.
    pub e_abs: f64,
    /// `E ≥ −hypothesis` is the grid-checked sign hypothesis.
    pub hypothesis: f64,
}

impl Tolerances {
    pub fn for_measure(m: &StieltjesMeasure) -> Self {
        let v = m.total_variation();
        Self {
            equality: 1e-8,
            violation: 1e-9,
            e_abs: 1e-6 * v.sqrt(),
            hypothesis: 1e-10 * v.max(1e-300),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub condition: Condition,
    pub samples: Vec<MarginSample>,
    pub min_margin: f64,
    /// Smallest `margin / scale`.
    pub min_relative_margin: f64,
    /// Grid points with `margin < −violation · scale`.
    pub violations: Vec<f64>,
    /// Refined zeros of `E`; empty under global equality.
    pub equality_points: Vec<f64>,
    /// Refined zeros of `E` where the margin does not vanish.
    pub dichotomy_failures: Vec<f64>,
    /// `E ≡ 0` and margin `≡ 0` on the grid.
    pub global_equality: bool,
    /// Under global equality: `C cos τ ≡ 0` and `S sin τ ≡ 0` on the grid.
    pub global_form_ok: bool,
    /// `E ≥ −tol` on the grid (grid-verified, not proved).
    pub hypothesis_ok: bool,
    pub tolerances: Tolerances,
}

impl InequalityReport {
    /// The inequality held wherever its hypothesis did.
    pub fn holds(&self) -> bool {
        !self.hypothesis_ok || (self.violations.is_empty() && self.dichotomy_failures.is_empty())
    }

    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.x)
    }
}

/// Uniform grid `a, a+step, …` up to `b` (inclusive within rounding).
pub fn uniform_grid(a: f64, b: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && b >= a, "grid needs step > 0 and b >= a");
    let count = ((b - a) / step + 1e-9).floor() as usize;
    (0..=count).map(|k| a + step * k as f64).collect()
}

/// Default grid of step `π/(50σ)` on `[a, b]`.
pub fn default_grid(sigma: f64, a: f64, b: f64) -> Vec<f64> {
    uniform_grid(a, b, PI / (50.0 * sigma))
}

pub fn check_inequality(cfg: &OmegaConfig, grid: &[f64]) -> InequalityReport {
    check_inequality_with(cfg, grid, Tolerances::for_measure(cfg.measure()))
}

pub fn check_inequality_with(cfg: &OmegaConfig, grid: &[f64], tol: Tolerances) -> InequalityReport {
    let samples: Vec<MarginSample> = grid.iter().map(|&x| cfg.margin(x)).collect();
    let min_margin = samples
        .iter()
        .map(|s| s.margin)
        .fold(f64::INFINITY, f64::min);
    let min_relative_margin = samples
        .iter()
        .map(|s| s.margin / s.scale)
        .fold(f64::INFINITY, f64::min);
    let hyp_tol = |x: f64| tol.hypothesis * if cfg.n() == 1 { x.abs().max(1.0) } else { 1.0 };
    let hypothesis_ok = samples.iter().all(|s| s.e >= -hyp_tol(s.x));
    let violations = samples
        .iter()
        .filter(|s| s.margin < -tol.violation * s.scale)
        .map(|s| s.x)
        .collect();
    let global_equality = !samples.is_empty()
        && samples
            .iter()
            .all(|s| s.e.abs() <= tol.e_abs && s.margin.abs() <= 1e-10 * s.scale);
    let global_form_ok = global_equality
        && grid.iter().all(|&x| {
            let (c, s) = cfg.evaluator().cs_deriv(x, 0);
            (c * cfg.tau().cos()).abs() <= tol.e_abs && (s * cfg.tau().sin()).abs() <= tol.e_abs
        });
    let mut equality_points = Vec::new();
    let mut dichotomy_failures = Vec::new();
    if !global_equality {
        for x in refine_e_zeros(cfg, &samples, tol.e_abs) {
            let s = cfg.margin(x);
            if s.margin.abs() <= tol.equality * s.scale {
                equality_points.push(x);
            } else {
                dichotomy_failures.push(x);
            }
        }
    }
    InequalityReport {
        condition: cfg.condition(),
        samples,
        min_margin,
        min_relative_margin,
        violations,
        equality_points,
        dichotomy_failures,
        global_equality,
        global_form_ok,
        hypothesis_ok,
        tolerances: tol,
    }
}

/// Local minima of `|E|` on the grid, refined by golden-section search and kept
/// when the refined `|E|` is below `e_abs`.
fn refine_e_zeros(cfg: &OmegaConfig, samples: &[MarginSample], e_abs: f64) -> Vec<f64> {
    let n = samples.len();
    let mut out: Vec<f64> = Vec::new();
    for i in 0..n {
        let v = samples[i].e.abs();
        let left = if i > 0 {
            samples[i - 1].e.abs()
        } else {
            f64::INFINITY
        };
        let right = if i + 1 < n {
            samples[i + 1].e.abs()
        } else {
            f64::INFINITY
        };
        // strict on the left so plateaus give one candidate
        if !(v < left && v <= right) {
            continue;
        }
        let a = if i > 0 {
            samples[i - 1].x
        } else {
            samples[i].x
        };
        let b = if i + 1 < n {
            samples[i + 1].x
        } else {
            samples[i].x
        };
        let x = golden_min(|x| cfg.e(x).abs(), a, b, 1e-13);
        let x = if cfg.e(x).abs() <= v { x } else { samples[i].x };
        if cfg.e(x).abs() <= e_abs && out.last().is_none_or(|p| (x - p).abs() > 1e-9) {
            out.push(x);
        }
    }
    out
}

/// Golden-section minimisation of `f` on `[a, b]`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, width: f64) -> f64 {
    if b <= a {
        return a;
    }
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if b - a <= width {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let m = 0.5 * (a + b);
    [(a, f(a)), (m, f(m)), (b, f(b)), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .map(|p| p.0)
        .unwrap_or(m)
}

/// `(c, β, γ)` with `E ≡ c sin²(σx+τ+β)`, `P`, `Q` of the equality form and `d ≡ γ²σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqualityWitness {
    pub c: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Least-squares fit of `E` to `c sin²(σx+τ+β)`; `None` when `E` is not of that
/// form, `d` is not constant, or `P`, `Q` do not reproduce the equality form.
pub fn fit_equality_witness(cfg: &OmegaConfig, grid: &[f64]) -> Option<EqualityWitness> {
    if grid.len() < 3 {
        return None;
    }
    let sigma = cfg.sigma();
    let tau = cfg.tau();
    let v = cfg.measure().total_variation().max(1.0);
    let tol = 1e-8 * v;
    let e: Vec<f64> = grid.iter().map(|&x| cfg.e(x)).collect();
    let basis = |x: f64| {
        let ph = 2.0 * (sigma * x + tau);
        [1.0, ph.cos(), ph.sin()]
    };
    let coef = least_squares3(grid.iter().map(|&x| basis(x)), &e)?;
    let rms = (grid
        .iter()
        .zip(&e)
        .map(|(&x, &y)| {
            let b = basis(x);
            (y - coef[0] * b[0] - coef[1] * b[1] - coef[2] * b[2]).powi(2)
        })
        .sum::<f64>()
        / grid.len() as f64)
        .sqrt();
    if rms > tol {
        return None;
    }
    let c = 2.0 * coef[0];
    if c < -tol || ((coef[1].hypot(coef[2])) - coef[0].abs()).abs() > tol {
        return None;
    }
    let c = c.max(0.0);
    let beta = if c <= tol {
        0.0
    } else {
        let two_beta = coef[2].atan2(-coef[1]);
        (0.5 * two_beta).rem_euclid(PI)
    };
    let d: Vec<f64> = grid.iter().map(|&x| cfg.d(x)).collect();
    let d_mean = d.iter().sum::<f64>() / d.len() as f64;
    let dtol = 1e-8 * v * v * sigma.max(1.0);
    if d.iter().any(|di| (di - d_mean).abs() > dtol) || d_mean < -dtol {
        return None;
    }
    let g_abs = (d_mean.max(0.0) / sigma).sqrt();
    let residual = |gamma: f64| {
        grid.iter()
            .map(|&x| {
                let th = sigma * x + tau;
                let (p, q) = cfg.pq(x);
                let pw = c * beta.sin() * (th + beta).sin() + gamma * th.sin();
                let qw = c * beta.cos() * (th + beta).sin() - gamma * th.cos();
                (p - pw).abs().max((q - qw).abs())
            })
            .fold(0.0, f64::max)
    };
    let (gamma, worst) = [g_abs, -g_abs]
        .into_iter()
        .map(|g| (g, residual(g)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("two candidates");
    if worst > 1e-6 * v {
        return None;
    }
    Some(EqualityWitness { c, beta, gamma })
}

/// Normal equations for a 3-column linear least-squares problem.
fn least_squares3<I: Iterator<Item = [f64; 3]>>(rows: I, y: &[f64]) -> Option<[f64; 3]> {
    let mut ata = [[0.0; 3]; 3];
    let mut aty = [0.0; 3];
    for (row, &yi) in rows.zip(y) {
        for i in 0..3 {
            aty[i] += row[i] * yi;
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    solve3(ata, aty)
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let s: f64 = (i + 1..3).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

/// `d(x) = a²x² + ax sin x + (a+1)(1 − cos x)` for the counterexample
/// `ω(z) = sin z + az cos z + i(az sin z + 1 − cos z)`.
pub fn counterexample_d(a: f64, x: f64) -> Result<f64, InequalityError> {
    if !(a > -1.0 && a < -0.5) {
        return Err(InequalityError::CounterexampleParameter(a));
    }
    // 1 − cos x = 2 sin²(x/2) keeps the small-x value accurate
    let one_minus_cos = 2.0 * (0.5 * x).sin().powi(2);
    Ok(a * a * x * x + a * x * x.sin() + (a + 1.0) * one_minus_cos)
}

/// `P Q′ − P′ Q` of the counterexample from its parts, for cross-checking.
pub fn counterexample_d_from_parts(a: f64, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let p = s + a * x * c;
    let q = a * x * s + 2.0 * (0.5 * x).sin().powi(2);
    let pp = c + a * c - a * x * s;
    let qp = a * s + a * x * c + s;
    p * qp - pp * q
}
