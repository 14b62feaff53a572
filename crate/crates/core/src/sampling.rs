//! Both sides of the interpolation formula
//!
//! `σ f(x) cos(σx+α) − f′(x) sin(σx+α)
//!   = σ lim Σ_{k=−n}^{n} sin²(σx+α)/(σx+α−kπ)² · (−1)^k f((kπ−α)/σ)`,
//!
//! valid for `f` of exponential type at most σ with `f(x) = o(x)` on the real line.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::inequality::OmegaConfig;

/// `|σx + α − kπ|` below this takes the limit branch.
pub const COINCIDENCE: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplingError {
    #[error("n_terms must be at least 1")]
    NoTerms,
    #[error("sigma must be positive, got {0}")]
    BadSigma(f64),
    #[error(
        "derivative check failed at x = {x}: supplied {supplied}, central difference {numeric}"
    )]
    DerivativeMismatch { x: f64, supplied: f64, numeric: f64 },
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function of exponential type ≤ σ with `f(x) = o(x)`, and its derivative.
///
/// The growth class is the caller's claim; only the derivative is checked.
#[derive(Clone)]
pub struct SampledFunction {
    f: RealFn,
    df: RealFn,
    sigma: f64,
}

impl std::fmt::Debug for SampledFunction {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fm.debug_struct("SampledFunction")
            .field("sigma", &self.sigma)
            .finish_non_exhaustive()
    }
}

impl SampledFunction {
    /// Wraps `f` and `df` after comparing `df` with a central difference of `f` at
    /// ten seeded points of `[−10, 10]`.
    pub fn new<F, D>(f: F, df: D, sigma: f64) -> Result<Self, SamplingError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(SamplingError::BadSigma(sigma));
        }
        let out = Self {
            f: Arc::new(f),
            df: Arc::new(df),
            sigma,
        };
        out.self_check()?;
        Ok(out)
    }

    fn self_check(&self) -> Result<(), SamplingError> {
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
        let xs: Vec<f64> = (0..10).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let fmax = xs.iter().map(|&x| self.eval(x).abs()).fold(0.0, f64::max);
        for &x in &xs {
            let h = 1e-5 * x.abs().max(1.0) / self.sigma.max(1.0);
            let numeric = (self.eval(x + h) - self.eval(x - h)) / (2.0 * h);
            let supplied = self.derivative(x);
            if (numeric - supplied).abs() > 1e-6 * (supplied.abs() + self.sigma * fmax) {
                return Err(SamplingError::DerivativeMismatch {
                    x,
                    supplied,
                    numeric,
                });
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (self.df)(x)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `sin(σx + α)`.
    pub fn sine(sigma: f64, alpha: f64) -> Result<Self, SamplingError> {
        Self::new(
            move |x| (sigma * x + alpha).sin(),
            move |x| sigma * (sigma * x + alpha).cos(),
            sigma,
        )
    }

    /// `cos(σx + α)`.
    pub fn cosine(sigma: f64, alpha: f64) -> Result<Self, SamplingError> {
        Self::new(
            move |x| (sigma * x + alpha).cos(),
            move |x| -sigma * (sigma * x + alpha).sin(),
            sigma,
        )
    }

    pub fn constant(value: f64, sigma: f64) -> Result<Self, SamplingError> {
        Self::new(move |_| value, |_| 0.0, sigma)
    }

    /// `f(x) = P(x − τ/σ) cos α − Q(x − τ/σ) sin α` for `ω = P + iQ`.
    pub fn from_omega(cfg: &OmegaConfig, alpha: f64) -> Result<Self, SamplingError> {
        let shift = cfg.tau() / cfg.sigma();
        let (ca, sa) = (alpha.cos(), alpha.sin());
        let a = Arc::new(cfg.clone());
        let b = Arc::clone(&a);
        Self::new(
            move |x| {
                let (p, q) = a.pq(x - shift);
                p * ca - q * sa
            },
            move |x| {
                let (p, q) = b.pq_deriv(x - shift);
                p * ca - q * sa
            },
            cfg.sigma(),
        )
    }
}

/// `σ f(x) cos(σx+α) − f′(x) sin(σx+α)`.
pub fn interp_lhs(f: &SampledFunction, sigma: f64, alpha: f64, x: f64) -> f64 {
    let th = sigma * x + alpha;
    sigma * f.eval(x) * th.cos() - f.derivative(x) * th.sin()
}

/// Symmetric partial sum and its tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEvaluation {
    pub value: f64,
    pub n_terms: usize,
    /// Heuristic: `σ · max_{n<|k|≤3n} |f(λ_k)| · Σ_{|k|>n} (σx+α−kπ)^{−2}`.
    pub tail_bound: f64,
}

/// `σ Σ_{k=−n}^{n} sin²θ/(θ−kπ)² (−1)^k f(λ_k)`, `θ = σx+α`, `λ_k = (kπ−α)/σ`.
pub fn interp_rhs(
    f: &SampledFunction,
    sigma: f64,
    alpha: f64,
    x: f64,
    n_terms: usize,
) -> Result<SeriesEvaluation, SamplingError> {
    if n_terms == 0 {
        return Err(SamplingError::NoTerms);
    }
    if !(sigma > 0.0) {
        return Err(SamplingError::BadSigma(sigma));
    }
    let th = sigma * x + alpha;
    let node = |k: i64| (k as f64 * PI - alpha) / sigma;
    let sign = |k: i64| if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let n = n_terms as i64;

    let k0 = (th / PI).round() as i64;
    let gap = th - k0 as f64 * PI;
    if gap.abs() < COINCIDENCE && k0.abs() <= n {
        let lk = node(k0);
        let value = sigma * sign(k0) * f.eval(lk);
        let tail_bound = 2.0 * gap.abs() * (sigma * f.eval(lk).abs() + f.derivative(lk).abs());
        return Ok(SeriesEvaluation {
            value,
            n_terms,
            tail_bound,
        });
    }

    let s2 = th.sin().powi(2);
    let term = |k: i64| s2 / (th - k as f64 * PI).powi(2) * sign(k) * f.eval(node(k));
    let mut pairs: Vec<f64> = Vec::with_capacity(n_terms + 1);
    pairs.push(term(0));
    pairs.extend((1..=n).map(|k| term(k) + term(-k)));
    let value = sigma * pairwise_sum(&pairs);

    let envelope = (n + 1..=3 * n)
        .flat_map(|k| [f.eval(node(k)).abs(), f.eval(node(-k)).abs()])
        .fold(0.0, f64::max);
    let r = th / PI;
    let nf = n as f64;
    let tail_sum = if nf + 1.0 - r.abs() <= 0.0 {
        f64::INFINITY
    } else {
        (trigamma(nf + 1.0 - r) + trigamma(nf + 1.0 + r)) / (PI * PI)
    };
    Ok(SeriesEvaluation {
        value,
        n_terms,
        tail_bound: sigma * envelope * tail_sum,
    })
}

/// Fixed-tree pairwise summation.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        len if len <= 8 => v.iter().sum(),
        len => {
            let (a, b) = v.split_at(len / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// `ψ′(x) = Σ_{k≥0} 1/(x+k)²` for `x > 0`.
pub fn trigamma(x: f64) -> f64 {
    assert!(x > 0.0, "trigamma needs x > 0");
    let mut acc = 0.0;
    let mut x = x;
    while x < 16.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let ix = 1.0 / x;
    let ix2 = ix * ix;
    // 1/x + 1/(2x²) + Σ B_{2k}/x^{2k+1}
    let series = ix
        * (1.0
            + ix * 0.5
            + ix2 * (1.0 / 6.0 - ix2 * (1.0 / 30.0 - ix2 * (1.0 / 42.0 - ix2 * (1.0 / 30.0)))));
    acc + series
}
