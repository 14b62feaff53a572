//! Positive-definiteness side checks: recovery of the profile `f` behind `S ≥ 0`,
//! the sign of `H′(0)`, the Laplace limit at the origin, the exponential kernel
//! integrals, the autocorrelation `h` with `ĥ = 2Δ`, Fejér cosine polynomials, the
//! equidistant-node structure of monotone densities and complete monotonicity.
//!
//! Positive definiteness is always grid-verified through the cosine transform
//! `K ≥ 0`; no Bochner measure is reconstructed.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::measure::{MeasureError, PiecewiseLinearDensity, StieltjesMeasure};
use crate::quad::{gauss_legendre, Panel};
use crate::transforms::Evaluator;
use crate::zeros::hypothesis_grid;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PosDefError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("profile is not positive definite on the grid: S({x}) = {value}")]
    NotPositiveDefinite { x: f64, value: f64 },
    #[error("profile vanishes identically")]
    ZeroProfile,
    #[error("density is negative at node {0}")]
    NegativeDensity(usize),
    #[error("density decreases at node {0}")]
    NotMonotone(usize),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// `f(t) = μ((σ−|t|)₊) − μ(0)` stored as the piecewise polynomial
/// `φ(s) = μ(s) − μ(0)` on `[0, σ]`, together with the cosine transform
/// `K(x) = ∫₀^σ cos(tx) f(t) dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct PosDefProfile {
    sigma: f64,
    /// Pieces of `φ` between consecutive breakpoints (right limits at the left end).
    pieces: Vec<Panel>,
    f0: f64,
}

impl PosDefProfile {
    pub fn from_measure(m: &StieltjesMeasure) -> Self {
        let sigma = m.sigma();
        let mut breaks = vec![0.0, sigma];
        breaks.extend(m.atoms().iter().map(|a| a.t));
        if let Some(d) = m.density() {
            breaks.extend(d.nodes().iter().copied());
        }
        breaks.retain(|t| (0.0..=sigma).contains(t));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let panels = m.density().map(|d| d.panels().to_vec()).unwrap_or_default();
        let pieces = breaks
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                let mid = 0.5 * (a + b);
                let start = m.distribution(a) + m.jump_at(a);
                let (g, slope) = panels
                    .iter()
                    .find(|p| p.a <= mid && mid < p.b)
                    .map_or((0.0, 0.0), |p| {
                        (p.eval(a), p.coeffs.get(1).copied().unwrap_or(0.0))
                    });
                Panel::new(a, b, vec![start, g, 0.5 * slope])
            })
            .collect();
        let f0 = m.mass_summary().left_limit_mass;
        Self { sigma, pieces, f0 }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `f(0) = μ(σ−0) − μ(0)`.
    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn is_zero(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| p.coeffs.iter().all(|c| *c == 0.0))
    }

    pub fn eval(&self, t: f64) -> f64 {
        let u = t.abs();
        if u >= self.sigma {
            return 0.0;
        }
        if u == 0.0 {
            return self.f0;
        }
        let s = self.sigma - u;
        // left-continuous in s
        self.pieces
            .iter()
            .find(|p| p.a < s && s <= p.b)
            .map_or(0.0, |p| p.eval(s))
    }

    /// `K(x) = Re e^{iσx} ∫₀^σ φ(s) e^{−ixs} ds`, exact per piece.
    pub fn k(&self, x: f64) -> f64 {
        let z = Complex64::new(-x, 0.0);
        let acc: Complex64 = self.pieces.iter().map(|p| p.fourier(z, 0.0)).sum();
        (acc * Complex64::new(0.0, self.sigma * x).exp()).re
    }

    /// `∫_{−σ}^{σ} e^{−α|x|}(1 − β|x|) f(x) dx`, exact per piece.
    fn exp_kernel_integral(&self, alpha: f64, beta: f64) -> f64 {
        // x = σ − s: e^{−ασ} ∫ e^{αs}(1 − βσ + βs) φ(s) ds
        let z = Complex64::new(0.0, -alpha);
        let acc: Complex64 = self
            .pieces
            .iter()
            .map(|p| {
                p.times_linear(1.0 - beta * self.sigma, beta)
                    .fourier(z, alpha * self.sigma)
            })
            .sum();
        2.0 * acc.re
    }
}

/// Result of [`recover_pd_profile`].
#[derive(Debug, Clone, PartialEq)]
pub struct PdRecovery {
    pub profile: PosDefProfile,
    /// `S ≥ 0` on the grid ("grid-verified").
    pub verdict: bool,
    pub first_violation: Option<(f64, f64)>,
    pub f0_nonnegative: bool,
    /// `|f(t)| ≤ f(0)` on the grid (checked only under a true verdict).
    pub pd_bound_ok: bool,
    /// `max |S − xK| / scale` over the grid.
    pub s_equals_xk_residual: f64,
    /// `f(0) = 0`, equivalently `S ≡ 0` and `F = c e^{iσz}`.
    pub constant_phase: bool,
}

pub fn recover_pd_profile(m: &StieltjesMeasure) -> PdRecovery {
    let profile = PosDefProfile::from_measure(m);
    let ev = Evaluator::new(m);
    let v = m.total_variation();
    let tol = 1e-10 * v.max(1e-300);
    let mut first_violation = None;
    let mut residual: f64 = 0.0;
    for x in hypothesis_grid(m.sigma()).into_iter().skip(1) {
        let s = ev.cs_deriv(x, 0).1;
        let k = profile.k(x);
        residual = residual.max((s - x * k).abs() / (s.abs().max(v)).max(1e-300));
        if s < -tol && first_violation.is_none() {
            first_violation = Some((x, s));
        }
    }
    let verdict = first_violation.is_none();
    let f0 = profile.f0();
    let f0_nonnegative = f0 >= -tol;
    let pd_bound_ok = !verdict || {
        let n = 400;
        (0..=n).all(|j| {
            let t = profile.sigma() * j as f64 / n as f64;
            profile.eval(t).abs() <= f0 + 1e-12 * v.max(1.0)
        })
    };
    PdRecovery {
        constant_phase: verdict && f0.abs() <= tol,
        profile,
        verdict,
        first_violation,
        f0_nonnegative,
        pd_bound_ok,
        s_equals_xk_residual: residual,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignPrediction {
    NonPositive,
    NonNegative,
    Indeterminate,
}

impl SignPrediction {
    pub fn label(&self) -> &'static str {
        match self {
            SignPrediction::NonPositive => "nonpositive",
            SignPrediction::NonNegative => "nonnegative",
            SignPrediction::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HPrimeReport {
    /// `H′(0) = ∫ t dμ`.
    pub h_prime_0: f64,
    pub f0: f64,
    pub left_limit: f64,
    pub prediction: SignPrediction,
    pub sign_ok: bool,
    /// `S ≥ 0`, `F(x) → 0` at ±∞ (no atoms) and `F ≢ 0`.
    pub decaying_case: bool,
    /// Under the decaying case: `F(0) > 0`, `H′(0) > 0`, `Δ(0) > 0`.
    pub decaying_case_ok: Option<bool>,
}

/// Sign of `H′(0)` predicted by the position of `F(0)` relative to `0` and `μ(σ−0)−μ(0)`.
pub fn h_prime_zero_checks(m: &StieltjesMeasure) -> Result<HPrimeReport, PosDefError> {
    let ev = Evaluator::new(m);
    if let Some((x, value)) = crate::zeros::sine_violation(&ev) {
        return Err(PosDefError::NotPositiveDefinite { x, value });
    }
    let summary = m.mass_summary();
    let (f0, left) = (summary.total_mass, summary.left_limit_mass);
    let h_prime_0 = m.power_moment(1);
    let tol = 1e-12 * m.total_variation().max(1e-300);
    let prediction = if f0 <= tol {
        SignPrediction::NonPositive
    } else if f0 >= left - tol {
        SignPrediction::NonNegative
    } else {
        SignPrediction::Indeterminate
    };
    let sign_ok = match prediction {
        SignPrediction::NonPositive => h_prime_0 <= tol,
        SignPrediction::NonNegative => h_prime_0 >= -tol,
        SignPrediction::Indeterminate => true,
    };
    let decaying_case = m.atoms().is_empty() && !m.is_zero();
    let decaying_case_ok =
        decaying_case.then(|| f0 > 0.0 && h_prime_0 > 0.0 && ev.delta(0.0) > 0.0);
    Ok(HPrimeReport {
        h_prime_0,
        f0,
        left_limit: left,
        prediction,
        sign_ok,
        decaying_case,
        decaying_case_ok,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceCheck {
    pub t: f64,
    /// `∫₀^σ e^{−tu} dν(u) = F(it)`.
    pub estimate: f64,
    /// `ν(+0) − ν(0)`.
    pub target: f64,
}

impl LaplaceCheck {
    pub fn error(&self) -> f64 {
        (self.estimate - self.target).abs()
    }
}

pub fn laplace_limit_check(nu: &StieltjesMeasure, t: Option<f64>) -> LaplaceCheck {
    let t = t.unwrap_or(200.0 / nu.sigma());
    let estimate = crate::transforms::eval_f(nu, Complex64::new(0.0, t)).re;
    LaplaceCheck {
        t,
        estimate,
        target: nu.jump_at(0.0),
    }
}

/// `∫ e^{−α|x|}(1 − β|x|) f(x) dx` for a grid-verified nonzero profile and `|β| ≤ α`.
pub fn lemma3_integral(recovery: &PdRecovery, alpha: f64, beta: f64) -> Result<f64, PosDefError> {
    if !(alpha > 0.0 && alpha.is_finite() && beta.is_finite() && beta.abs() <= alpha) {
        return Err(PosDefError::InvalidParameter(format!(
            "need alpha > 0 and |beta| <= alpha, got alpha = {alpha}, beta = {beta}"
        )));
    }
    if let Some((x, value)) = recovery.first_violation {
        return Err(PosDefError::NotPositiveDefinite { x, value });
    }
    if recovery.profile.is_zero() {
        return Err(PosDefError::ZeroProfile);
    }
    Ok(recovery.profile.exp_kernel_integral(alpha, beta))
}

/// `h(x) = ∫_{|x|}^σ (2u − |x|) g(u) g(u − |x|) du` for a density `g` on `[0, σ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrelationProfile {
    g: PiecewiseLinearDensity,
    sigma: f64,
}

impl AutocorrelationProfile {
    pub fn new(g: PiecewiseLinearDensity) -> Self {
        let sigma = g.support().1;
        Self { g, sigma }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn density(&self) -> &PiecewiseLinearDensity {
        &self.g
    }

    pub fn eval(&self, x: f64) -> f64 {
        autocorr_h(&self.g, x)
    }

    /// `ĥ(x) = ∫_{−σ}^{σ} h(u) e^{−iux} du` from `n` uniform samples of `h` on
    /// `[0, σ]`, integrated exactly against the cosine on local cubics.
    pub fn h_hat_sampled(&self, x: f64, n: usize) -> f64 {
        let n = n.max(3);
        let step = self.sigma / n as f64;
        let hs: Vec<f64> = (0..=n).map(|j| self.eval(step * j as f64)).collect();
        let z = Complex64::new(x, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let start = j.saturating_sub(1).min(n - 3);
            let coeffs = cubic_through(&hs[start..start + 4], start as f64 - j as f64, step);
            acc += Panel::new(step * j as f64, step * (j + 1) as f64, coeffs).fourier(z, 0.0);
        }
        2.0 * acc.re
    }
}

/// Coefficients in `u = t − t_j` of the cubic through four equispaced samples whose
/// first node sits at `offset` steps from `t_j`.
fn cubic_through(ys: &[f64], offset: f64, step: f64) -> Vec<f64> {
    let nodes: Vec<f64> = (0..4).map(|i| (offset + i as f64) * step).collect();
    let mut out = vec![0.0; 4];
    for i in 0..4 {
        // Lagrange basis polynomial expanded in u
        let mut basis = vec![1.0];
        let mut denom = 1.0;
        for k in 0..4 {
            if k == i {
                continue;
            }
            let mut next = vec![0.0; basis.len() + 1];
            for (p, c) in basis.iter().enumerate() {
                next[p + 1] += c;
                next[p] -= c * nodes[k];
            }
            basis = next;
            denom *= nodes[i] - nodes[k];
        }
        for (p, c) in basis.iter().enumerate() {
            out[p] += ys[i] * c / denom;
        }
    }
    out
}

/// Exact value of the autocorrelation integral: the integrand is a cubic between
/// consecutive breakpoints of `g(u)` and `g(u − |x|)`.
pub fn autocorr_h(g: &PiecewiseLinearDensity, x: f64) -> f64 {
    let (_, sigma) = g.support();
    let ax = x.abs();
    if ax >= sigma {
        return 0.0;
    }
    let mut breaks: Vec<f64> = g
        .nodes()
        .iter()
        .flat_map(|&t| [t, t + ax])
        .chain([ax, sigma])
        .filter(|&t| t >= ax && t <= sigma)
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let (nodes, weights) = gauss_legendre(3);
    breaks
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            nodes
                .iter()
                .zip(&weights)
                .map(|(s, wt)| {
                    let u = mid + half * s;
                    wt * (2.0 * u - ax) * g.eval(u) * g.eval(u - ax)
                })
                .sum::<f64>()
                * half
        })
        .sum()
}

pub const H_HAT_SAMPLES: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HHatSample {
    pub x: f64,
    pub h_hat: f64,
    pub two_delta: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HHatReport {
    pub samples: Vec<HHatSample>,
    /// Largest change of `ĥ` when the sampling is doubled.
    pub convergence_delta: f64,
    pub max_residual: f64,
}

/// `|ĥ(x) − 2Δ(x)|` with `ĥ` from sampled `h` and `Δ` from the transform of `g`.
pub fn check_h_hat_identity(
    g: &PiecewiseLinearDensity,
    xs: &[f64],
) -> Result<HHatReport, PosDefError> {
    let profile = AutocorrelationProfile::new(g.clone());
    let sigma = profile.sigma();
    if !(sigma > 0.0) {
        return Err(PosDefError::InvalidParameter(format!(
            "density support must end at a positive sigma, got {sigma}"
        )));
    }
    let ev = Evaluator::new(&StieltjesMeasure::with_density(sigma, g.clone())?);
    let mut samples = Vec::with_capacity(xs.len());
    let mut convergence_delta: f64 = 0.0;
    for &x in xs {
        let h_hat = profile.h_hat_sampled(x, H_HAT_SAMPLES);
        let finer = profile.h_hat_sampled(x, 2 * H_HAT_SAMPLES);
        convergence_delta = convergence_delta.max((finer - h_hat).abs());
        let two_delta = 2.0 * ev.delta(x);
        samples.push(HHatSample {
            x,
            h_hat,
            two_delta,
            residual: (h_hat - two_delta).abs(),
        });
    }
    let max_residual = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    Ok(HHatReport {
        samples,
        convergence_delta,
        max_residual,
    })
}

/// `f(0) + 2 Σ_{k=1}^m f(k) cos kx`.
pub fn fejer_cosine_poly<F: Fn(f64) -> f64>(f: F, m_count: usize, x: f64) -> f64 {
    f(0.0)
        + 2.0
            * (1..=m_count)
                .map(|k| f(k as f64) * (k as f64 * x).cos())
                .sum::<f64>()
}

/// Minimum of the Fejér polynomial over `n` equispaced points of `[0, 2π]`.
pub fn fejer_min_on_grid<F: Fn(f64) -> f64>(f: F, m_count: usize, n: usize) -> (f64, f64) {
    (0..=n)
        .map(|j| {
            let x = 2.0 * PI * j as f64 / n as f64;
            (x, fejer_cosine_poly(&f, m_count, x))
        })
        .fold((0.0, f64::INFINITY), |best, cur| {
            if cur.1 < best.1 {
                cur
            } else {
                best
            }
        })
}

/// Piecewise-constant structure with equal steps `d` on `(β, σ)`, `g ≡ 0` on `(0, β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquidistantNodes {
    pub beta: f64,
    pub d: f64,
    pub pieces: usize,
}

impl EquidistantNodes {
    /// Real zeros `2πk/d`, `k ≥ 1`, up to `x_max`.
    pub fn predicted_zeros(&self, x_max: f64) -> Vec<f64> {
        (1..)
            .map(|k| 2.0 * PI * k as f64 / self.d)
            .take_while(|x| *x <= x_max)
            .collect()
    }
}

/// A validated nonnegative nondecreasing density on `[0, σ]`.
#[derive(Debug, Clone)]
pub struct MonotoneDensity {
    g: PiecewiseLinearDensity,
    ev: Evaluator,
}

const MAX_PIECES: usize = 100_000;

impl MonotoneDensity {
    pub fn new(g: PiecewiseLinearDensity) -> Result<Self, PosDefError> {
        let values = g.values();
        if let Some(i) = values.iter().position(|v| *v < 0.0) {
            return Err(PosDefError::NegativeDensity(i));
        }
        if let Some(i) = (1..values.len()).find(|&i| values[i] < values[i - 1]) {
            return Err(PosDefError::NotMonotone(i));
        }
        if g.is_zero() {
            return Err(PosDefError::ZeroProfile);
        }
        let sigma = g.support().1;
        let ev = Evaluator::new(&StieltjesMeasure::with_density(sigma, g.clone())?);
        Ok(Self { g, ev })
    }

    pub fn sigma(&self) -> f64 {
        self.ev.sigma()
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.ev
    }

    /// `S(x) = ∫₀^σ g(σ − t) sin xt dt`.
    pub fn s(&self, x: f64) -> f64 {
        self.ev.cs_deriv(x, 0).1
    }

    /// Exact test on the representation for equal-width constant pieces.
    pub fn equidistant_nodes(&self) -> Option<EquidistantNodes> {
        let panels = self.g.panels();
        let sigma = self.sigma();
        let first = panels
            .iter()
            .position(|p| p.coeffs[0] != 0.0 || p.eval(p.b) != 0.0)?;
        let active = &panels[first..];
        if active
            .iter()
            .any(|p| p.coeffs.get(1).copied().unwrap_or(0.0) != 0.0)
        {
            return None;
        }
        let beta = active[0].a;
        let span = sigma - beta;
        // breakpoints where the level changes
        let jumps: Vec<f64> = active
            .windows(2)
            .filter(|w| w[0].coeffs[0] != w[1].coeffs[0])
            .map(|w| (w[1].a - beta) / span)
            .collect();
        let pieces = (1..=MAX_PIECES).find(|&m| {
            jumps.iter().all(|r| {
                let k = r * m as f64;
                (k - k.round()).abs() <= 1e-12 * m as f64
            })
        })?;
        Some(EquidistantNodes {
            beta,
            d: span / pieces as f64,
            pieces,
        })
    }
}

/// Convenience wrapper: `S(x)` for a validated monotone density.
pub fn monotone_density_s(g: &PiecewiseLinearDensity, x: f64) -> Result<f64, PosDefError> {
    Ok(MonotoneDensity::new(g.clone())?.s(x))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CmReport {
    pub checks: usize,
    /// `(x, order, (−1)ⁿΔⁿf(x))` for every failed sign.
    pub failures: Vec<(f64, usize, f64)>,
}

impl CmReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const MAX_CM_ORDER: usize = 10;

/// `(−1)ⁿ Δ_hⁿ f(x) ≥ −tol` for `n ≤ max_order` at every grid point, where the
/// tolerance is a small multiple of the rounding error of the difference.
pub fn cm_check<F: Fn(f64) -> f64>(
    f: F,
    xs: &[f64],
    step: f64,
    max_order: usize,
) -> Result<CmReport, PosDefError> {
    if max_order > MAX_CM_ORDER {
        return Err(PosDefError::InvalidParameter(format!(
            "max_order {max_order} exceeds {MAX_CM_ORDER}"
        )));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(PosDefError::InvalidParameter(format!(
            "step must be positive, got {step}"
        )));
    }
    if let Some(x) = xs.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(PosDefError::InvalidParameter(format!(
            "grid point {x} not in (0, inf)"
        )));
    }
    let mut checks = 0;
    let mut failures = Vec::new();
    for &x in xs {
        let vals: Vec<f64> = (0..=max_order).map(|j| f(x + step * j as f64)).collect();
        for n in 0..=max_order {
            let mut diff = 0.0;
            let mut size = 0.0;
            let mut binom = 1.0;
            for j in 0..=n {
                // (−1)ⁿ Δⁿ f = Σ_j (−1)^j C(n,j) f(x + jh)
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                diff += sign * binom * vals[j];
                size += binom * vals[j].abs();
                binom = binom * (n - j) as f64 / (j + 1) as f64;
            }
            checks += 1;
            if diff < -64.0 * f64::EPSILON * size {
                failures.push((x, n, diff));
            }
        }
    }
    Ok(CmReport { checks, failures })
}

/// [`cm_check`] for `f(x) = x^{−μ}(1 + x²)^{−ν}`.
pub fn cm_finite_difference_check(
    mu_exp: f64,
    nu_exp: f64,
    xs: &[f64],
    step: f64,
    max_order: usize,
) -> Result<CmReport, PosDefError> {
    if !(mu_exp >= 1.0 && nu_exp > 0.0 && nu_exp <= 1.0) {
        return Err(PosDefError::InvalidParameter(format!(
            "need mu >= 1 and 0 < nu <= 1, got ({mu_exp}, {nu_exp})"
        )));
    }
    cm_check(
        |x| x.powf(-mu_exp) * (1.0 + x * x).powf(-nu_exp),
        xs,
        step,
        max_order,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Atom;

    fn triangular(jump: f64) -> StieltjesMeasure {
        StieltjesMeasure::from_pd_profile(&[0.0, 1.0], &[1.0, 0.0], jump).unwrap()
    }

    fn constant_density() -> PiecewiseLinearDensity {
        PiecewiseLinearDensity::new(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap()
    }

    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for j in 1..n {
            acc += f(a + h * j as f64) * if j % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }

    #[test]
    fn triangular_profile_round_trip() {
        let r = recover_pd_profile(&triangular(-0.5));
        assert!(r.verdict && r.f0_nonnegative && r.pd_bound_ok && !r.constant_phase);
        for t in [-1.5, -0.7, -0.2, 0.0, 0.3, 0.99, 1.0, 2.0] {
            let expected = (1.0 - f64::abs(t)).max(0.0);
            assert!((r.profile.eval(t) - expected).abs() < 1e-15, "t = {t}");
        }
        assert!(r.s_equals_xk_residual < 1e-10);
    }

    #[test]
    fn atom_at_sigma_has_zero_profile() {
        let m = StieltjesMeasure::atomic(2.0, &[(2.0, 3.0)]).unwrap();
        let r = recover_pd_profile(&m);
        assert!(r.verdict && r.constant_phase && r.profile.is_zero());
        assert_eq!(r.profile.k(1.3), 0.0);
    }

    #[test]
    fn sign_changing_sine_is_rejected() {
        let m = StieltjesMeasure::atomic(1.0, &[(0.0, 2.0), (1.0, -1.0)]).unwrap();
        let r = recover_pd_profile(&m);
        assert!(!r.verdict);
        assert!(r.first_violation.unwrap().1 < 0.0);
        assert!(r.s_equals_xk_residual < 1e-10);
    }

    #[test]
    fn cosine_transform_matches_quadrature() {
        let d = PiecewiseLinearDensity::new(vec![0.0, 0.4, 1.5], vec![0.2, 1.0, 0.3]).unwrap();
        let m = StieltjesMeasure::new(
            1.5,
            vec![
                Atom::new(0.0, 0.5),
                Atom::new(0.7, -0.2),
                Atom::new(1.5, 0.4),
            ],
            Some(d),
        )
        .unwrap();
        let p = PosDefProfile::from_measure(&m);
        for x in [0.0, 0.8, 3.0, 11.0] {
            // split at the atom (t = 0.8) and the density kink (t = 1.1)
            let f = |t: f64| (t * x).cos() * m.distribution(1.5 - t);
            let e = 1e-13;
            let q = simpson(f, e, 0.8 - e, 20000)
                + simpson(f, 0.8 + e, 1.1, 20000)
                + simpson(f, 1.1, 1.5 - e, 20000);
            assert!((p.k(x) - q).abs() < 1e-10, "x = {x}: {} vs {q}", p.k(x));
        }
    }

    #[test]
    fn h_prime_sign_cases() {
        let g = PiecewiseLinearDensity::new(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        let m = StieltjesMeasure::with_density(1.0, g).unwrap();
        let r = h_prime_zero_checks(&m).unwrap();
        assert_eq!(r.prediction, SignPrediction::NonNegative);
        assert!((r.h_prime_0 - 1.0 / 3.0).abs() < 1e-15 && r.sign_ok);
        assert_eq!(r.decaying_case_ok, Some(true));

        let atom = StieltjesMeasure::atomic(2.0, &[(2.0, 1.5)]).unwrap();
        let r = h_prime_zero_checks(&atom).unwrap();
        assert!((r.h_prime_0 - 3.0).abs() < 1e-15 && r.sign_ok);

        let r = h_prime_zero_checks(&triangular(-0.5)).unwrap();
        assert_eq!(r.prediction, SignPrediction::Indeterminate);
        assert_eq!(r.prediction.label(), "indeterminate");
    }

    #[test]
    fn laplace_limits() {
        let atom = StieltjesMeasure::atomic(1.0, &[(0.0, 1.0)]).unwrap();
        let c = laplace_limit_check(&atom, None);
        assert_eq!((c.estimate, c.target), (1.0, 1.0));
        let g = PiecewiseLinearDensity::new(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        let dens = StieltjesMeasure::with_density(1.0, g.clone()).unwrap();
        let c = laplace_limit_check(&dens, Some(50.0));
        assert!((c.estimate - (1.0 - (-50f64).exp()) / 50.0).abs() < 1e-15);
        assert_eq!(c.target, 0.0);
        let mixed = StieltjesMeasure::new(1.0, vec![Atom::new(0.0, 0.5)], Some(g)).unwrap();
        let c = laplace_limit_check(&mixed, Some(200.0));
        assert_eq!(c.target, 0.5);
        assert!(c.error() <= mixed.total_variation() / 200.0);
        assert!((c.error() - 1.0 / 200.0).abs() < 1e-15);
    }

    #[test]
    fn lemma3_integral_values() {
        let r = recover_pd_profile(&triangular(0.0));
        let v11 = lemma3_integral(&r, 1.0, 1.0).unwrap();
        let oracle = 2.0 * simpson(|x| (-x).exp() * (1.0 - x) * (1.0 - x), 0.0, 1.0, 2000);
        assert!((v11 - oracle).abs() < 1e-12 && v11 > 0.0);
        // closed form 2(e⁻¹ ... ) cross-check: ∫₀¹ e^{−x}(1−x)² dx = 1 − 2e⁻¹
        assert!((v11 - 2.0 * (1.0 - 2.0 / std::f64::consts::E)).abs() < 1e-14);
        let v10 = lemma3_integral(&r, 1.0, 0.0).unwrap();
        assert!(v10 > v11);
        assert!(lemma3_integral(&r, 1.0, 1.5).is_err());
        let zero = recover_pd_profile(&StieltjesMeasure::atomic(1.0, &[(1.0, 1.0)]).unwrap());
        assert_eq!(
            lemma3_integral(&zero, 1.0, 0.5),
            Err(PosDefError::ZeroProfile)
        );
    }

    #[test]
    fn autocorrelation_of_constant_density() {
        let g = constant_density();
        for x in [-1.2, -0.5, 0.0, 0.25, 0.9, 1.0] {
            let expected = (1.0 - f64::abs(x)).max(0.0);
            assert!((autocorr_h(&g, x) - expected).abs() < 1e-14, "x = {x}");
        }
        let g2 = PiecewiseLinearDensity::new(vec![0.0, 0.3, 1.0], vec![0.5, 2.0, -1.0]).unwrap();
        for x in [0.0, 0.2, 0.55] {
            let brute = simpson(
                |u| (2.0 * u - x) * g2.eval(u) * g2.eval(u - x),
                x,
                1.0,
                60000,
            );
            assert!((autocorr_h(&g2, x) - brute).abs() < 1e-6);
        }
    }

    #[test]
    fn h_hat_matches_twice_delta() {
        let g = constant_density();
        // closed form ĥ(x) = 2(1 − cos x)/x²
        let r = check_h_hat_identity(&g, &[0.0, 0.5, 1.0, 2.0, 5.0]).unwrap();
        assert!(r.convergence_delta < 1e-8);
        for s in &r.samples {
            let exact = if s.x == 0.0 {
                1.0
            } else {
                2.0 * (1.0 - s.x.cos()) / (s.x * s.x)
            };
            assert!((s.h_hat - exact).abs() < 1e-9, "{s:?}");
            assert!(s.residual < 1e-6, "{s:?}");
        }
        let zero = PiecewiseLinearDensity::new(vec![0.0, 1.0], vec![0.0, 0.0]).unwrap();
        let r = check_h_hat_identity(&zero, &[0.0, 2.0]).unwrap();
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn fejer_polynomial_and_transform_agree() {
        let f = |x: f64| (1.0 - x.abs() / 2.0).max(0.0);
        for x in [0.0, 1.0, 2.5] {
            assert!((fejer_cosine_poly(f, 2, x) - (1.0 + f64::cos(x))).abs() < 1e-15);
        }
        let m = StieltjesMeasure::from_fejer(4, 1.0, 2.0).unwrap();
        let ev = Evaluator::new(&m);
        let prof = |x: f64| crate::measure::fejer_profile(x, 4.0, 1.0, 2.0);
        for x in [0.3, 1.7, 4.0] {
            assert!((fejer_cosine_poly(prof, 4, x) - 2.0 * ev.cs_deriv(x, 0).0).abs() < 1e-12);
        }
        assert!(fejer_min_on_grid(prof, 4, 4000).1 >= -1e-12);
        assert_eq!(fejer_cosine_poly(|_| 0.0, 3, 1.0), 0.0);
    }

    #[test]
    fn equidistant_detector() {
        let g = MonotoneDensity::new(constant_density()).unwrap();
        let e = g.equidistant_nodes().unwrap();
        assert_eq!((e.beta, e.d, e.pieces), (0.0, 1.0, 1));
        for x in e.predicted_zeros(30.0) {
            assert!(g.s(x).abs() < 1e-14);
        }
        let steps =
            PiecewiseLinearDensity::piecewise_constant(&[0.0, 0.5, 1.0], &[1.0, 2.0]).unwrap();
        let g = MonotoneDensity::new(steps).unwrap();
        let e = g.equidistant_nodes().unwrap();
        assert_eq!(e.d, 0.5);
        assert!(g.s(4.0 * PI).abs() < 1e-14);
        let lin = PiecewiseLinearDensity::new(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        let g = MonotoneDensity::new(lin).unwrap();
        assert!(g.equidistant_nodes().is_none());
        let uneven =
            PiecewiseLinearDensity::piecewise_constant(&[0.0, 0.3, 1.0], &[0.0, 1.0]).unwrap();
        let e = MonotoneDensity::new(uneven)
            .unwrap()
            .equidistant_nodes()
            .unwrap();
        assert!((e.beta - 0.3).abs() < 1e-15 && (e.d - 0.7).abs() < 1e-15);
        let down = PiecewiseLinearDensity::new(vec![0.0, 1.0], vec![1.0, 0.5]).unwrap();
        assert_eq!(
            MonotoneDensity::new(down).unwrap_err(),
            PosDefError::NotMonotone(1)
        );
    }

    #[test]
    fn complete_monotonicity_spot_checks() {
        let xs: Vec<f64> = (0..=90).map(|j| 0.5 + 0.05 * j as f64).collect();
        assert!(cm_finite_difference_check(1.0, 1.0, &xs, 0.05, 6)
            .unwrap()
            .passed());
        assert!(cm_finite_difference_check(2.0, 0.5, &xs, 0.05, 6)
            .unwrap()
            .passed());
        assert!(cm_check(|x| 1.0 / x, &xs, 0.05, 6).unwrap().passed());
        // sin is not completely monotone
        assert!(!cm_check(f64::sin, &xs, 0.05, 3).unwrap().passed());
        assert!(cm_check(|x| 1.0 / x, &xs, 0.05, 11).is_err());
    }
}
