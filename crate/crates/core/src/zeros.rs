//! Zero counting and location for `F`, `zⁿF`, `F^{(k)}` and `h_α`, and the
//! classification of a measure by the zero structure its transform must have.
//!
//! Counting follows the phase of the target around a rectangle: the sum of
//! principal-branch phase increments over an adaptively refined boundary, which is
//! an exact multiple of 2π. A Simpson integral of `Im(f′/f dz)` on the same
//! segments gives the raw winding, and its distance to the integer count is the
//! reported residual.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use thiserror::Error;

use crate::measure::StieltjesMeasure;
use crate::transforms::Evaluator;

const MAX_DEPTH: usize = 50;
const SIMPSON_TOL: f64 = 1e-6;
const MAX_RETRIES: usize = 4;
/// Relative size below which a boundary value counts as a zero.
const BOUNDARY_REL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZeroError {
    #[error("invalid rectangle [{0}, {1}] x [{2}, {3}]")]
    InvalidRectangle(f64, f64, f64, f64),
    #[error("target vanishes on the contour near {0}; move the rectangle by about 1e-6")]
    BoundaryZero(Complex64),
    #[error("winding number is not an integer after refinement (residual {0})")]
    NonIntegerWinding(f64),
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("hypothesis violated: {quantity} = {value} at x = {x}")]
    HypothesisViolated {
        quantity: &'static str,
        x: f64,
        value: f64,
    },
    #[error("zero structure mismatch: expected {expected} zero(s) in the lower window, counted {counted}")]
    CountMismatch { expected: usize, counted: usize },
    #[error("real zero at {0} has multiplicity above what the theory allows")]
    MultiplicityExceeded(f64),
}

/// Axis-parallel rectangle `[x_min, x_max] × [y_min, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rectangle {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self, ZeroError> {
        let finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !(finite && x_min < x_max && y_min < y_max) {
            return Err(ZeroError::InvalidRectangle(x_min, x_max, y_min, y_max));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    /// `[−20, 20] × [−6, −10⁻³]`.
    pub fn standard_lower() -> Self {
        Self {
            x_min: -20.0,
            x_max: 20.0,
            y_min: -6.0,
            y_max: -1e-3,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.x_min && z.re <= self.x_max && z.im >= self.y_min && z.im <= self.y_max
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.x_min + self.x_max),
            0.5 * (self.y_min + self.y_max),
        )
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    /// Corners in counter-clockwise order starting bottom-left.
    pub fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.x_min, self.y_min),
            Complex64::new(self.x_max, self.y_min),
            Complex64::new(self.x_max, self.y_max),
            Complex64::new(self.x_min, self.y_max),
        ]
    }

    /// Split the longer side at `frac` of its length.
    pub fn split(&self, frac: f64) -> (Rectangle, Rectangle) {
        if self.width() >= self.height() {
            let x = self.x_min + frac * self.width();
            (
                Rectangle { x_max: x, ..*self },
                Rectangle { x_min: x, ..*self },
            )
        } else {
            let y = self.y_min + frac * self.height();
            (
                Rectangle { y_max: y, ..*self },
                Rectangle { y_min: y, ..*self },
            )
        }
    }
}

/// Function whose zeros are counted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    F,
    /// `zⁿ F(z)`, `n ∈ {−1, 0, 1}`.
    PowerTimesF(i32),
    /// `F^{(k)}`, `k ≤ 2`.
    Derivative(usize),
    /// `h_α = G cos α − H sin α`.
    HAlpha(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroCountResult {
    pub count: usize,
    /// `|raw winding / 2π − count|`.
    pub winding_residual: f64,
    pub boundary_samples: usize,
}

/// A target bound to a measure, evaluated in scaled form.
struct Bound<'a> {
    ev: &'a Evaluator,
    target: Target,
    floor: f64,
}

#[derive(Clone, Copy)]
struct Pt {
    z: Complex64,
    f: Complex64,
    /// `f′/f`
    r: Complex64,
}

impl<'a> Bound<'a> {
    fn new(ev: &'a Evaluator, target: Target) -> Result<Self, ZeroError> {
        let v = ev.total_variation();
        let sig = ev.sigma().max(1.0);
        let floor = match target {
            Target::F | Target::HAlpha(_) => v,
            Target::PowerTimesF(n) => {
                if !(-1..=1).contains(&n) {
                    return Err(ZeroError::InvalidTarget(format!("power {n} not in -1..=1")));
                }
                if n == -1 {
                    let f0 = ev.measure().mass_summary().total_mass;
                    if f0.abs() > 1e-12 * v.max(1.0) {
                        return Err(ZeroError::InvalidTarget(format!(
                            "z^-1 F needs F(0) = 0, got {f0}"
                        )));
                    }
                }
                v
            }
            Target::Derivative(k) => {
                if k > 2 {
                    return Err(ZeroError::InvalidTarget(format!(
                        "derivative order {k} > 2"
                    )));
                }
                v * sig.powi(k as i32)
            }
        };
        Ok(Self {
            ev,
            target,
            floor: BOUNDARY_REL * floor,
        })
    }

    /// Mantissas of `f` and `f′` (common exponent).
    fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        match self.target {
            Target::F => (
                self.ev.f_scaled(z, 0).mantissa,
                self.ev.f_scaled(z, 1).mantissa,
            ),
            Target::Derivative(k) => (
                self.ev.f_scaled(z, k).mantissa,
                self.ev.f_scaled(z, k + 1).mantissa,
            ),
            Target::PowerTimesF(n) => {
                let f = self.ev.f_scaled(z, 0).mantissa;
                let fp = self.ev.f_scaled(z, 1).mantissa;
                match n {
                    0 => (f, fp),
                    1 => (z * f, f + z * fp),
                    _ => (f / z, fp / z - f / (z * z)),
                }
            }
            Target::HAlpha(a) => (
                self.ev.h_alpha_scaled(a, z, 0).mantissa,
                self.ev.h_alpha_scaled(a, z, 1).mantissa,
            ),
        }
    }

    fn point(&self, z: Complex64) -> Result<Pt, ZeroError> {
        let (f, fp) = self.eval(z);
        let size = match self.target {
            Target::PowerTimesF(n) => self.floor * z.norm().powi(n),
            _ => self.floor,
        };
        if !(f.norm() > size) {
            return Err(ZeroError::BoundaryZero(z));
        }
        Ok(Pt { z, f, r: fp / f })
    }

    /// `(principal phase sum, Simpson winding)` over the segment `a → b`.
    fn segment(
        &self,
        a: Pt,
        b: Pt,
        depth: usize,
        samples: &mut usize,
    ) -> Result<(f64, f64), ZeroError> {
        let mid = self.point(0.5 * (a.z + b.z))?;
        *samples += 1;
        let d1 = (mid.f / a.f).arg();
        let d2 = (b.f / mid.f).arg();
        let simpson = ((b.z - a.z) / 6.0 * (a.r + mid.r * 4.0 + b.r)).im;
        let smooth = d1.abs() < FRAC_PI_4 && d2.abs() < FRAC_PI_4;
        if depth >= MAX_DEPTH || (smooth && (simpson - (d1 + d2)).abs() <= SIMPSON_TOL) {
            return Ok((d1 + d2, simpson));
        }
        let (p1, s1) = self.segment(a, mid, depth + 1, samples)?;
        let (p2, s2) = self.segment(mid, b, depth + 1, samples)?;
        Ok((p1 + p2, s1 + s2))
    }

    fn winding(&self, rect: &Rectangle, density: f64) -> Result<(f64, f64, usize), ZeroError> {
        let corners = rect.corners();
        let mut phase = 0.0;
        let mut raw = 0.0;
        let mut samples = 0usize;
        for e in 0..4 {
            let (p, q) = (corners[e], corners[(e + 1) % 4]);
            let len = (q - p).norm();
            let n = ((len * self.ev.sigma().max(1.0) * density).ceil() as usize).max(16);
            let mut prev = self.point(p)?;
            samples += 1;
            for j in 1..=n {
                let z = if j == n {
                    q
                } else {
                    p + (q - p) * (j as f64 / n as f64)
                };
                let cur = self.point(z)?;
                samples += 1;
                let (ph, si) = self.segment(prev, cur, 0, &mut samples)?;
                phase += ph;
                raw += si;
                prev = cur;
            }
        }
        Ok((phase, raw, samples))
    }
}

/// Number of zeros of the target inside `rect` (the boundary must avoid zeros).
pub fn count_zeros(
    target: Target,
    m: &StieltjesMeasure,
    rect: &Rectangle,
) -> Result<ZeroCountResult, ZeroError> {
    count_zeros_with(target, &Evaluator::new(m), rect)
}

pub fn count_zeros_with(
    target: Target,
    ev: &Evaluator,
    rect: &Rectangle,
) -> Result<ZeroCountResult, ZeroError> {
    let bound = Bound::new(ev, target)?;
    let mut density = 8.0;
    let mut last_residual = f64::NAN;
    for _ in 0..=MAX_RETRIES {
        let (phase, raw, samples) = bound.winding(rect, density)?;
        let turns = phase / (2.0 * PI);
        let count = turns.round();
        let residual = (raw / (2.0 * PI) - count).abs();
        if residual <= 0.25 && count >= 0.0 {
            return Ok(ZeroCountResult {
                count: count as usize,
                winding_residual: residual,
                boundary_samples: samples,
            });
        }
        last_residual = residual;
        density *= 2.0;
    }
    Err(ZeroError::NonIntegerWinding(last_residual))
}

/// All zeros inside `rect`, located by subdivision and Newton polishing.
pub fn locate_zeros(
    target: Target,
    m: &StieltjesMeasure,
    rect: &Rectangle,
) -> Result<Vec<Complex64>, ZeroError> {
    let ev = Evaluator::new(m);
    let bound = Bound::new(&ev, target)?;
    let mut out = Vec::new();
    let count = count_zeros_with(target, &ev, rect)?.count;
    locate_in(&bound, rect, count, 0, &mut out)?;
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(out)
}

fn locate_in(
    bound: &Bound,
    rect: &Rectangle,
    count: usize,
    depth: usize,
    out: &mut Vec<Complex64>,
) -> Result<(), ZeroError> {
    if count == 0 {
        return Ok(());
    }
    if count == 1 {
        if let Some(z) = newton(bound, rect.center(), 60) {
            if rect.contains(z) {
                out.push(z);
                return Ok(());
            }
        }
    }
    if depth > 60 || rect.width().max(rect.height()) < 1e-12 {
        // cluster of `count` zeros too tight to separate
        for _ in 0..count {
            out.push(rect.center());
        }
        return Ok(());
    }
    for frac in [0.5173, 0.4611, 0.5437] {
        let (r1, r2) = rect.split(frac);
        let c1 = count_zeros_with(bound.target, bound.ev, &r1);
        let c2 = count_zeros_with(bound.target, bound.ev, &r2);
        match (c1, c2) {
            (Ok(c1), Ok(c2)) => {
                locate_in(bound, &r1, c1.count, depth + 1, out)?;
                locate_in(bound, &r2, c2.count, depth + 1, out)?;
                return Ok(());
            }
            (Err(ZeroError::BoundaryZero(_)), _) | (_, Err(ZeroError::BoundaryZero(_))) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Err(ZeroError::BoundaryZero(rect.center()))
}

fn newton(bound: &Bound, start: Complex64, iters: usize) -> Option<Complex64> {
    let mut z = start;
    for _ in 0..iters {
        let (f, fp) = bound.eval(z);
        if fp.norm() == 0.0 || !f.is_finite() {
            return None;
        }
        let step = f / fp;
        z -= step;
        if step.norm() <= 1e-15 * z.norm().max(1.0) {
            return Some(z);
        }
    }
    let (f, fp) = bound.eval(z);
    ((f / fp).norm() <= 1e-12 * z.norm().max(1.0)).then_some(z)
}

/// A real zero of `F` and its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealZero {
    pub x: f64,
    pub multiplicity: u32,
}

/// Real zeros of `F` on `[a, b]`: brackets of `G` sign changes and local minima of
/// `|F|²` on a grid, each polished by complex Newton and accepted when it lands on
/// the axis with `|F| ≤ 10⁻¹⁰·V`.
pub fn find_real_zeros(
    m: &StieltjesMeasure,
    interval: (f64, f64),
    with_multiplicity: bool,
) -> Result<Vec<RealZero>, ZeroError> {
    find_real_zeros_with(&Evaluator::new(m), interval, with_multiplicity)
}

pub fn find_real_zeros_with(
    ev: &Evaluator,
    interval: (f64, f64),
    with_multiplicity: bool,
) -> Result<Vec<RealZero>, ZeroError> {
    let (a, b) = interval;
    if ev.measure().is_zero() || !(b > a) {
        return Ok(Vec::new());
    }
    let sigma = ev.sigma().max(1.0);
    let v = ev.total_variation();
    let step = PI / (50.0 * sigma);
    let n = ((b - a) / step).ceil() as usize;
    let xs: Vec<f64> = (0..=n).map(|j| (a + step * j as f64).min(b)).collect();
    let fs: Vec<Complex64> = xs.iter().map(|&x| ev.f(Complex64::new(x, 0.0))).collect();

    let mut candidates = Vec::new();
    for j in 0..xs.len() - 1 {
        let (g0, g1) = (fs[j].re, fs[j + 1].re);
        if g0 == 0.0 {
            candidates.push(xs[j]);
        } else if g0 * g1 < 0.0 {
            candidates.push(bisect(
                |x| ev.f(Complex64::new(x, 0.0)).re,
                xs[j],
                xs[j + 1],
            ));
        }
    }
    for j in 0..xs.len() {
        let here = fs[j].norm_sqr();
        let left = if j > 0 {
            fs[j - 1].norm_sqr()
        } else {
            f64::INFINITY
        };
        let right = if j + 1 < xs.len() {
            fs[j + 1].norm_sqr()
        } else {
            f64::INFINITY
        };
        if here < left && here <= right {
            let lo = xs[j.saturating_sub(1)];
            let hi = xs[(j + 1).min(xs.len() - 1)];
            candidates.push(crate::inequality::golden_min(
                |x| ev.f(Complex64::new(x, 0.0)).norm_sqr(),
                lo,
                hi,
                1e-14,
            ));
        }
    }

    let tol_f = 1e-10 * v.max(1e-300);
    let f0 = ev.f(Complex64::new(0.0, 0.0)).norm();
    let fp0 = ev.f_deriv(Complex64::new(0.0, 0.0), 1).norm();
    let tol_d = 1e-8 * v * sigma;
    let origin_double = f0 <= tol_f && fp0 <= tol_d;
    let bound = Bound::new(ev, Target::F)?;
    let mut found: Vec<f64> = Vec::new();
    for c in candidates {
        let x = if origin_double && c.abs() < 1e-3 {
            0.0
        } else {
            match newton(&bound, Complex64::new(c, 0.0), 60) {
                Some(z) if z.im.abs() < 1e-9 => z.re,
                _ => c,
            }
        };
        if x < a - 1e-12 || x > b + 1e-12 {
            continue;
        }
        if ev.f(Complex64::new(x, 0.0)).norm() > tol_f {
            continue;
        }
        if found.iter().all(|y| (y - x).abs() > 1e-7) {
            found.push(x);
        }
    }
    found.sort_by(f64::total_cmp);

    let mut out = Vec::with_capacity(found.len());
    for x in found {
        let multiplicity = if !with_multiplicity {
            1
        } else {
            let fp = ev.f_deriv(Complex64::new(x, 0.0), 1).norm();
            if fp > tol_d {
                1
            } else if x == 0.0 {
                let fpp = ev.f_deriv(Complex64::new(0.0, 0.0), 2).norm();
                if fpp > tol_d * sigma {
                    2
                } else {
                    return Err(ZeroError::MultiplicityExceeded(x));
                }
            } else {
                return Err(ZeroError::MultiplicityExceeded(x));
            }
        };
        out.push(RealZero { x, multiplicity });
    }
    Ok(out)
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Grid used for the sign hypotheses on `C` and `S`: `x ∈ [0, X]`, step `π/(50σ)`.
pub fn hypothesis_grid(sigma: f64) -> Vec<f64> {
    let x_max = 40.0f64.max(20.0 * PI / sigma);
    crate::inequality::default_grid(sigma, 0.0, x_max)
}

/// First grid point where `S < −tol` on `(0, X]`, if any.
pub fn sine_violation(ev: &Evaluator) -> Option<(f64, f64)> {
    let tol = 1e-10 * ev.total_variation().max(1e-300);
    hypothesis_grid(ev.sigma())
        .into_iter()
        .skip(1)
        .map(|x| (x, ev.cs_deriv(x, 0).1))
        .find(|(_, s)| *s < -tol)
}

/// First grid point where `C < −tol` (C is even, so `x ≥ 0` suffices).
pub fn cosine_violation(ev: &Evaluator) -> Option<(f64, f64)> {
    let tol = 1e-10 * ev.total_variation().max(1e-300);
    hypothesis_grid(ev.sigma())
        .into_iter()
        .map(|x| (x, ev.cs_deriv(x, 0).0))
        .find(|(_, c)| *c < -tol)
}

/// `g(y) = F(iy) e^{σy} = ∫ e^{ys} dμ(σ − s)`.
pub fn g_imag(ev: &Evaluator, y: f64) -> f64 {
    ev.f_reflected_deriv(Complex64::new(0.0, -y), 0).re
}

/// The zero `iy*`, `y* < 0`, when `0 < F(0) < μ(σ−0) − μ(0)` and `S ≥ 0`.
pub fn find_imaginary_zero(m: &StieltjesMeasure) -> Result<Option<f64>, ZeroError> {
    find_imaginary_zero_with(&Evaluator::new(m))
}

pub fn find_imaginary_zero_with(ev: &Evaluator) -> Result<Option<f64>, ZeroError> {
    if let Some((x, s)) = sine_violation(ev) {
        return Err(ZeroError::HypothesisViolated {
            quantity: "S",
            x,
            value: s,
        });
    }
    let summary = ev.measure().mass_summary();
    let tol = 1e-12 * ev.total_variation().max(1e-300);
    let (f0, left) = (summary.total_mass, summary.left_limit_mass);
    if !(f0 > tol && f0 < left - tol) {
        return Ok(None);
    }
    let mut hi = 0.0;
    let mut lo = -1.0 / ev.sigma();
    while g_imag(ev, lo) >= 0.0 {
        hi = lo;
        lo *= 2.0;
        if lo < -1e12 {
            return Ok(None);
        }
    }
    let y = bisect(|y| g_imag(ev, y), lo, hi);
    Ok(Some(y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    IdenticallyZero,
    TrivialConstantPhase,
    HbBarNontrivial,
    Hb,
    OneLowerZero,
    HypothesisViolated,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::IdenticallyZero => "identically_zero",
            Verdict::TrivialConstantPhase => "trivial_constant_phase",
            Verdict::HbBarNontrivial => "hb_bar_nontrivial",
            Verdict::Hb => "hb",
            Verdict::OneLowerZero => "one_lower_zero",
            Verdict::HypothesisViolated => "hypothesis_violated",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    pub real_zeros: Vec<RealZero>,
    pub lower_zero: Option<Complex64>,
    /// `(a₁ + b₁)/2`.
    pub defect: f64,
    /// Count in the lower window used to confirm the verdict.
    pub lower_count: Option<ZeroCountResult>,
    pub window: Rectangle,
}

/// Real interval scanned by [`classify`].
pub const CLASSIFY_REAL_INTERVAL: (f64, f64) = (-20.0, 20.0);

pub fn classify(m: &StieltjesMeasure) -> Result<Classification, ZeroError> {
    let summary = m.mass_summary();
    let defect = 0.5 * (summary.support_interval.0 + summary.support_interval.1);
    let mut window = Rectangle::standard_lower();
    let empty = |verdict| Classification {
        verdict,
        real_zeros: Vec::new(),
        lower_zero: None,
        defect,
        lower_count: None,
        window,
    };
    if m.is_zero() {
        return Ok(empty(Verdict::IdenticallyZero));
    }
    let ev = Evaluator::new(m);
    if m.density().is_none() && m.atoms().len() == 1 {
        let verdict = if m.atoms()[0].t == 0.0 {
            Verdict::TrivialConstantPhase
        } else {
            Verdict::Hb
        };
        let lower_count = count_zeros_with(Target::F, &ev, &window)?;
        if lower_count.count != 0 {
            return Err(ZeroError::CountMismatch {
                expected: 0,
                counted: lower_count.count,
            });
        }
        return Ok(Classification {
            lower_count: Some(lower_count),
            ..empty(verdict)
        });
    }

    let (expected, lower_zero) = if cosine_violation(&ev).is_none() {
        (0, None)
    } else if sine_violation(&ev).is_none() {
        match find_imaginary_zero_with(&ev)? {
            Some(y) => {
                if y <= window.y_min {
                    window.y_min = y - 1.0;
                }
                (1, Some(Complex64::new(0.0, y)))
            }
            None => (0, None),
        }
    } else {
        let lower_count = count_zeros_with(Target::F, &ev, &window).ok();
        return Ok(Classification {
            lower_count,
            ..empty(Verdict::HypothesisViolated)
        });
    };

    let lower_count = count_zeros_with(Target::F, &ev, &window)?;
    if lower_count.count != expected {
        return Err(ZeroError::CountMismatch {
            expected,
            counted: lower_count.count,
        });
    }
    let real_zeros = find_real_zeros_with(&ev, CLASSIFY_REAL_INTERVAL, true)?;
    let verdict = if expected == 1 {
        Verdict::OneLowerZero
    } else if real_zeros.is_empty() {
        Verdict::Hb
    } else {
        Verdict::HbBarNontrivial
    };
    Ok(Classification {
        verdict,
        real_zeros,
        lower_zero,
        defect,
        lower_count: Some(lower_count),
        window,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeReport {
    pub order: usize,
    pub lower_count: Option<ZeroCountResult>,
    /// Smallest `|F^{(k)}|` on the real interval after refining grid minima.
    pub min_abs_real: f64,
    pub min_location: f64,
    pub identically_zero: bool,
    pub passed: bool,
}

/// `F^{(k)}` has no zeros in `rect` and stays away from 0 on `real_interval`.
pub fn check_derivative_hb(
    m: &StieltjesMeasure,
    order: usize,
    rect: &Rectangle,
    real_interval: (f64, f64),
    threshold: f64,
) -> Result<DerivativeReport, ZeroError> {
    if !(1..=2).contains(&order) {
        return Err(ZeroError::InvalidTarget(format!(
            "derivative order {order} not in 1..=2"
        )));
    }
    if m.is_zero() {
        return Ok(DerivativeReport {
            order,
            lower_count: None,
            min_abs_real: 0.0,
            min_location: 0.0,
            identically_zero: true,
            passed: true,
        });
    }
    let ev = Evaluator::new(m);
    let lower_count = count_zeros_with(Target::Derivative(order), &ev, rect)?;
    let abs_at = |x: f64| ev.f_deriv(Complex64::new(x, 0.0), order).norm();
    let (a, b) = real_interval;
    let step = PI / (50.0 * ev.sigma().max(1.0));
    let n = ((b - a) / step).ceil() as usize;
    let xs: Vec<f64> = (0..=n).map(|j| (a + step * j as f64).min(b)).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| abs_at(x)).collect();
    let mut best = (f64::INFINITY, a);
    for j in 0..xs.len() {
        let left = if j > 0 { vals[j - 1] } else { f64::INFINITY };
        let right = if j + 1 < xs.len() {
            vals[j + 1]
        } else {
            f64::INFINITY
        };
        if vals[j] <= left && vals[j] <= right {
            let lo = xs[j.saturating_sub(1)];
            let hi = xs[(j + 1).min(xs.len() - 1)];
            let x = crate::inequality::golden_min(abs_at, lo, hi, 1e-13);
            let v = abs_at(x).min(vals[j]);
            if v < best.0 {
                best = (v, x);
            }
        }
    }
    Ok(DerivativeReport {
        order,
        passed: lower_count.count == 0 && best.0 > threshold,
        lower_count: Some(lower_count),
        min_abs_real: best.0,
        min_location: best.1,
        identically_zero: false,
    })
}
