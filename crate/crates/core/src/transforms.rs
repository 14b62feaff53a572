//! The transform family of a measure: `F`, `G`, `H`, `C`, `S`, `Δ`, `h_α`, `E`.
//!
//! `F^{(k)}(z) = i^k ∫ t^k e^{izt} dμ(t)` is computed in closed form (atoms) and
//! panel by panel (density), so derivatives are moment transforms rather than
//! differences. `C` and `S` come from the reflected measure `μ_R(s) = μ(σ − s)`,
//! never from `G` and `H`; the identities between them are then real checks.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::measure::StieltjesMeasure;

/// Highest derivative order the evaluator produces.
pub const MAX_ORDER: usize = 3;

/// Terms used for the Taylor expansions at the origin.
pub const TAYLOR_TERMS: usize = 40;

/// `mantissa · e^{exponent}`; the exponent is a nonnegative integer stored as f64.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: Complex64,
    pub exponent: f64,
}

impl Scaled {
    pub fn unscaled(value: Complex64) -> Self {
        Self {
            mantissa: value,
            exponent: 0.0,
        }
    }

    /// Plain value; may overflow for large exponents.
    pub fn value(&self) -> Complex64 {
        self.mantissa * self.exponent.exp()
    }

    /// Bring both to the larger exponent and add.
    pub fn add(&self, other: &Scaled) -> Scaled {
        let e = self.exponent.max(other.exponent);
        Scaled {
            mantissa: self.mantissa * (self.exponent - e).exp()
                + other.mantissa * (other.exponent - e).exp(),
            exponent: e,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Scaled {
        Scaled {
            mantissa: self.mantissa * factor,
            exponent: self.exponent,
        }
    }
}

/// Shift that keeps `|e^{izt}| e^{−shift} ≤ 1` for `t ∈ [0, σ]`.
pub fn growth_shift(z: Complex64, sigma: f64) -> f64 {
    (-z.im * sigma).max(0.0).ceil()
}

/// `e^{−shift} ∫ t^k e^{izt} dμ(t)`.
fn fourier_moment(m: &StieltjesMeasure, z: Complex64, k: usize, shift: f64) -> Complex64 {
    let i = Complex64::i();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in m.atoms() {
        acc += (i * z * a.t - shift).exp() * (a.c * a.t.powi(k as i32));
    }
    for p in m.panels() {
        acc += p.times_power(k).fourier(z, shift);
    }
    acc
}

fn i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Values and derivatives at a real point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformSample {
    pub x: f64,
    pub f: Complex64,
    pub fp: Complex64,
    pub g: f64,
    pub h: f64,
    pub c: f64,
    pub s: f64,
    pub gp: f64,
    pub hp: f64,
    pub cp: f64,
    pub sp: f64,
    pub delta: f64,
}

/// Residuals `|LHS − RHS|` of the algebraic identities linking the transform family
/// at one real point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals {
    /// `F = G + iH`, `e^{−iσx}F = C − iS`, and `G, H, C, S` real on the axis.
    pub parts: f64,
    /// `G, H` as a rotation of `C, S` by `σx`.
    pub rotation: f64,
    /// `G cos(σx+τ) + H sin(σx+τ) = C cos τ − S sin τ`.
    pub phase_combination: f64,
    /// `h_α h_β′ − h_α′ h_β = Δ sin(α − β)`.
    pub h_alpha_wronskian: f64,
    /// `Δ` from `G, H` against `Δ` from `C, S`.
    pub delta_routes: f64,
    /// Size of `F`-level quantities (total variation, at least 1).
    pub scale: f64,
    /// Size of `Δ`-level quantities.
    pub delta_scale: f64,
}

impl IdentityResiduals {
    /// Largest residual after dividing by the matching scale.
    pub fn max_relative(&self) -> f64 {
        let f = self.parts.max(self.rotation).max(self.phase_combination) / self.scale;
        let d = self.h_alpha_wronskian.max(self.delta_routes) / self.delta_scale;
        f.max(d)
    }
}

/// Evaluator for one measure; caches the reflected measure and power moments.
#[derive(Debug, Clone)]
pub struct Evaluator {
    measure: StieltjesMeasure,
    reflected: StieltjesMeasure,
    moments: OnceLock<(Vec<f64>, Vec<f64>)>,
}

impl Evaluator {
    pub fn new(measure: &StieltjesMeasure) -> Self {
        Self {
            reflected: measure.reflected(),
            measure: measure.clone(),
            moments: OnceLock::new(),
        }
    }

    pub fn measure(&self) -> &StieltjesMeasure {
        &self.measure
    }

    pub fn reflected(&self) -> &StieltjesMeasure {
        &self.reflected
    }

    pub fn sigma(&self) -> f64 {
        self.measure.sigma()
    }

    pub fn total_variation(&self) -> f64 {
        self.measure.total_variation()
    }

    /// `F^{(k)}(z)` in scaled form.
    pub fn f_scaled(&self, z: Complex64, k: usize) -> Scaled {
        let shift = growth_shift(z, self.sigma());
        Scaled {
            mantissa: fourier_moment(&self.measure, z, k, shift) * i_pow(k),
            exponent: shift,
        }
    }

    /// Scaled `F_R^{(k)}(z)`, where `F_R(z) = e^{iσz} F(−z)`.
    pub fn f_reflected_scaled(&self, z: Complex64, k: usize) -> Scaled {
        let shift = growth_shift(z, self.sigma());
        Scaled {
            mantissa: fourier_moment(&self.reflected, z, k, shift) * i_pow(k),
            exponent: shift,
        }
    }

    /// `F^{(k)}(z)`.
    pub fn f_deriv(&self, z: Complex64, k: usize) -> Complex64 {
        i_pow(k) * fourier_moment(&self.measure, z, k, 0.0)
    }

    pub fn f(&self, z: Complex64) -> Complex64 {
        self.f_deriv(z, 0)
    }

    /// `F_R^{(k)}(z)`, whose even/odd parts are `C^{(k)}` and `S^{(k)}`.
    pub fn f_reflected_deriv(&self, z: Complex64, k: usize) -> Complex64 {
        i_pow(k) * fourier_moment(&self.reflected, z, k, 0.0)
    }

    /// `(G(z), H(z))` for complex `z`.
    pub fn gh(&self, z: Complex64) -> (Complex64, Complex64) {
        even_odd(self.f(z), self.f(-z))
    }

    /// `(C(z), S(z))` for complex `z`.
    pub fn cs(&self, z: Complex64) -> (Complex64, Complex64) {
        let r = self.reflected_pair(z, 0);
        even_odd(r.0, r.1)
    }

    fn reflected_pair(&self, z: Complex64, k: usize) -> (Complex64, Complex64) {
        (self.f_reflected_deriv(z, k), self.f_reflected_deriv(-z, k))
    }

    /// `(G^{(k)}(x), H^{(k)}(x))` for real `x`.
    pub fn gh_deriv(&self, x: f64, k: usize) -> (f64, f64) {
        let v = self.f_deriv(Complex64::new(x, 0.0), k);
        (v.re, v.im)
    }

    /// `(C^{(k)}(x), S^{(k)}(x))` for real `x`.
    pub fn cs_deriv(&self, x: f64, k: usize) -> (f64, f64) {
        let v = self.f_reflected_deriv(Complex64::new(x, 0.0), k);
        (v.re, v.im)
    }

    pub fn sample(&self, x: f64) -> TransformSample {
        let z = Complex64::new(x, 0.0);
        let f = self.f_deriv(z, 0);
        let fp = self.f_deriv(z, 1);
        let (c, s) = self.cs_deriv(x, 0);
        let (cp, sp) = self.cs_deriv(x, 1);
        TransformSample {
            x,
            f,
            fp,
            g: f.re,
            h: f.im,
            c,
            s,
            gp: fp.re,
            hp: fp.im,
            cp,
            sp,
            delta: f.re * fp.im - fp.re * f.im,
        }
    }

    /// `Δ(x) = G H′ − G′ H`.
    pub fn delta(&self, x: f64) -> f64 {
        let (g, h) = self.gh_deriv(x, 0);
        let (gp, hp) = self.gh_deriv(x, 1);
        g * hp - gp * h
    }

    /// `Δ` through `C′S − CS′ + σ(C² + S²)`.
    pub fn delta_from_cs(&self, x: f64) -> f64 {
        let (c, s) = self.cs_deriv(x, 0);
        let (cp, sp) = self.cs_deriv(x, 1);
        cp * s - c * sp + self.sigma() * (c * c + s * s)
    }

    /// `h_α(z) = G(z) cos α − H(z) sin α`.
    pub fn h_alpha(&self, alpha: f64, z: Complex64) -> Complex64 {
        self.h_alpha_deriv(alpha, z, 0)
    }

    /// `h_α^{(k)}(z) = (F^{(k)}(z) e^{iα} + (−1)^k F^{(k)}(−z) e^{−iα}) / 2`.
    pub fn h_alpha_deriv(&self, alpha: f64, z: Complex64, k: usize) -> Complex64 {
        let rot = Complex64::from_polar(1.0, alpha);
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        (self.f_deriv(z, k) * rot + self.f_deriv(-z, k) * rot.conj() * sign) * 0.5
    }

    /// Scaled `h_α^{(k)}(z)`.
    pub fn h_alpha_scaled(&self, alpha: f64, z: Complex64, k: usize) -> Scaled {
        let rot = Complex64::from_polar(1.0, alpha);
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        let plus = self.f_scaled(z, k).scale(rot * 0.5);
        let minus = self.f_scaled(-z, k).scale(rot.conj() * (0.5 * sign));
        plus.add(&minus)
    }

    /// Exact power moments `∫ t^j dμ` and `∫ s^j dμ_R`, `j < TAYLOR_TERMS`.
    pub fn power_moments(&self) -> &(Vec<f64>, Vec<f64>) {
        self.moments.get_or_init(|| {
            let m = (0..TAYLOR_TERMS)
                .map(|j| self.measure.power_moment(j))
                .collect();
            let r = (0..TAYLOR_TERMS)
                .map(|j| self.reflected.power_moment(j))
                .collect();
            (m, r)
        })
    }

    /// Taylor coefficients of `C` and `S` at the origin.
    pub fn taylor_cs(&self) -> (Vec<f64>, Vec<f64>) {
        taylor_even_odd(&self.power_moments().1)
    }

    /// Taylor coefficients of `G` and `H` at the origin.
    pub fn taylor_gh(&self) -> (Vec<f64>, Vec<f64>) {
        taylor_even_odd(&self.power_moments().0)
    }

    /// `E(x) = xⁿ (C(x) cos τ − S(x) sin τ)`. For `n = −1` the origin needs
    /// `F(0) = 0` and is evaluated through the Taylor expansion.
    pub fn e(&self, tau: f64, n: i32, x: f64) -> Result<f64, TransformError> {
        match n {
            0 | 1 => {
                let (c, s) = self.cs_deriv(x, 0);
                Ok(x.powi(n) * (c * tau.cos() - s * tau.sin()))
            }
            -1 => {
                let tol = 1e-12 * self.total_variation().max(1.0);
                let f0 = self.power_moments().0[0];
                if x.abs() * self.sigma() < 1.0 {
                    if f0.abs() > tol {
                        if x == 0.0 {
                            return Err(TransformError::Domain(format!(
                                "x^-1 E at the origin needs F(0) = 0, got {f0}"
                            )));
                        }
                        let (c, s) = self.cs_deriv(x, 0);
                        return Ok((c * tau.cos() - s * tau.sin()) / x);
                    }
                    let (tc, ts) = self.taylor_cs();
                    let c_over_x = series_shifted(&tc, x);
                    let s_over_x = series_shifted(&ts, x);
                    Ok(c_over_x * tau.cos() - s_over_x * tau.sin())
                } else {
                    let (c, s) = self.cs_deriv(x, 0);
                    Ok((c * tau.cos() - s * tau.sin()) / x)
                }
            }
            _ => Err(TransformError::Domain(format!(
                "n must be -1, 0 or 1, got {n}"
            ))),
        }
    }

    /// Identity residuals at real `x`; the phase combination is checked over a fixed
    /// set of phases, the `h_α` Wronskian at the given pair of angles.
    pub fn identity_residuals(&self, x: f64, alpha: f64, beta: f64) -> IdentityResiduals {
        let sigma = self.sigma();
        let z = Complex64::new(x, 0.0);
        let f = self.f(z);
        let (g, h) = self.gh(z);
        let (c, s) = self.cs(z);
        let i = Complex64::i();
        let parts = (f - (g + i * h))
            .norm()
            .max((f * (-i * sigma * x).exp() - (c - i * s)).norm())
            .max(g.im.abs())
            .max(h.im.abs())
            .max(c.im.abs())
            .max(s.im.abs());
        let (g, h, c, s) = (g.re, h.re, c.re, s.re);
        let (sx, cx) = (sigma * x).sin_cos();
        let rotation = (g - (c * cx + s * sx))
            .abs()
            .max((h - (c * sx - s * cx)).abs());
        let phase_combination = [
            0.0,
            std::f64::consts::FRAC_PI_2,
            -std::f64::consts::FRAC_PI_2,
            0.7,
        ]
        .iter()
        .map(|&tau: &f64| {
            let ph = sigma * x + tau;
            (g * ph.cos() + h * ph.sin() - (c * tau.cos() - s * tau.sin())).abs()
        })
        .fold(0.0, f64::max);
        let delta = self.delta(x);
        let ha = self.h_alpha(alpha, z).re;
        let hb = self.h_alpha(beta, z).re;
        let hap = self.h_alpha_deriv(alpha, z, 1).re;
        let hbp = self.h_alpha_deriv(beta, z, 1).re;
        let h_alpha_wronskian = (ha * hbp - hap * hb - delta * (alpha - beta).sin()).abs();
        let delta_routes = (delta - self.delta_from_cs(x)).abs();
        let tv = self.total_variation().max(1.0);
        IdentityResiduals {
            parts,
            rotation,
            phase_combination,
            h_alpha_wronskian,
            delta_routes,
            scale: tv,
            delta_scale: tv * tv * sigma.max(1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransformError {
    #[error("domain error: {0}")]
    Domain(String),
}

/// Even and odd parts `((a + b)/2, (a − b)/(2i))` of a value pair `(u(z), u(−z))`.
fn even_odd(a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    ((a + b) * 0.5, (a - b) / Complex64::new(0.0, 2.0))
}

/// From moments `M_j`: coefficients of `Σ (ix)^j M_j / j!` split into real
/// (cosine) and imaginary (sine) parts.
fn taylor_even_odd(moments: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut even = vec![0.0; moments.len()];
    let mut odd = vec![0.0; moments.len()];
    let mut fact = 1.0;
    for (j, mj) in moments.iter().enumerate() {
        if j > 0 {
            fact *= j as f64;
        }
        let v = mj / fact;
        match j % 4 {
            0 => even[j] = v,
            1 => odd[j] = v,
            2 => even[j] = -v,
            _ => odd[j] = -v,
        }
    }
    (even, odd)
}

/// `Σ_{j≥1} c_j x^{j−1}`, i.e. `(p(x) − c_0)/x` without dividing.
pub fn series_shifted(coeffs: &[f64], x: f64) -> f64 {
    coeffs[1..].iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Horner evaluation of a power series.
pub fn series_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

// ---- free-function front end ----

pub fn eval_f(m: &StieltjesMeasure, z: Complex64) -> Complex64 {
    Evaluator::new(m).f(z)
}

pub fn eval_gh(m: &StieltjesMeasure, z: Complex64) -> (Complex64, Complex64) {
    Evaluator::new(m).gh(z)
}

pub fn eval_cs(m: &StieltjesMeasure, z: Complex64) -> (Complex64, Complex64) {
    Evaluator::new(m).cs(z)
}

pub fn eval_delta(m: &StieltjesMeasure, x: f64) -> f64 {
    Evaluator::new(m).delta(x)
}

pub fn eval_h_alpha(m: &StieltjesMeasure, alpha: f64, x: f64) -> f64 {
    Evaluator::new(m).h_alpha(alpha, Complex64::new(x, 0.0)).re
}

pub fn eval_e(m: &StieltjesMeasure, tau: f64, n: i32, x: f64) -> Result<f64, TransformError> {
    Evaluator::new(m).e(tau, n, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::PiecewiseLinearDensity;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_density() -> StieltjesMeasure {
        let d = PiecewiseLinearDensity::new(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        StieltjesMeasure::with_density(1.0, d).unwrap()
    }

    #[test]
    fn f_closed_forms() {
        let one = StieltjesMeasure::atomic(1.0, &[(0.0, 1.0)]).unwrap();
        assert_eq!(eval_f(&one, c(3.0, -2.0)), c(1.0, 0.0));
        let two = StieltjesMeasure::atomic(1.0, &[(0.0, 1.0), (1.0, 1.0)]).unwrap();
        assert!(eval_f(&two, c(PI, 0.0)).norm() < 1e-15);
        assert!((eval_f(&unit_density(), c(0.0, 0.0)) - 1.0).norm() < 1e-15);
        // ∫₀¹ e^{izt} dt = (e^{iz} − 1)/(iz)
        let z = c(2.3, -0.7);
        let exact = ((Complex64::i() * z).exp() - 1.0) / (Complex64::i() * z);
        assert!((eval_f(&unit_density(), z) - exact).norm() < 1e-14);
    }

    #[test]
    fn cs_closed_forms() {
        let sig = 1.5;
        let at_sigma = StieltjesMeasure::atomic(sig, &[(sig, 2.0)]).unwrap();
        let at_zero = StieltjesMeasure::atomic(sig, &[(0.0, 2.0)]).unwrap();
        for x in [-3.0, 0.4, 7.0] {
            let (cc, ss) = eval_cs(&at_sigma, c(x, 0.0));
            assert!((cc - 2.0).norm() < 1e-15 && ss.norm() < 1e-15);
            let (cc, ss) = eval_cs(&at_zero, c(x, 0.0));
            assert!((cc.re - 2.0 * (sig * x).cos()).abs() < 1e-14);
            assert!((ss.re - 2.0 * (sig * x).sin()).abs() < 1e-14);
        }
        let ev = Evaluator::new(&unit_density());
        for x in [0.3, 2.0, 11.0] {
            let (_, s) = ev.cs_deriv(x, 0);
            assert!((s - (1.0 - x.cos()) / x).abs() < 1e-14);
        }
    }

    #[test]
    fn derivative_of_single_atom() {
        let m = StieltjesMeasure::atomic(1.0, &[(1.0, 1.0)]).unwrap();
        let ev = Evaluator::new(&m);
        assert!((ev.f_deriv(c(0.0, 0.0), 1) - Complex64::i()).norm() < 1e-15);
        let constant = Evaluator::new(&StieltjesMeasure::atomic(1.0, &[(0.0, 1.0)]).unwrap());
        for k in 1..=3 {
            assert_eq!(constant.f_deriv(c(0.7, -0.2), k), c(0.0, 0.0));
        }
    }

    #[test]
    fn delta_closed_forms() {
        let (cc, sig) = (1.7, 2.0);
        let m = StieltjesMeasure::atomic(sig, &[(sig, cc)]).unwrap();
        let zero = StieltjesMeasure::zero(sig).unwrap();
        let (c0, c1) = (0.6, -1.3);
        let two = StieltjesMeasure::atomic(sig, &[(0.0, c0), (sig, c1)]).unwrap();
        for x in [-2.0, 0.0, 0.9, 13.0] {
            assert!((eval_delta(&m, x) - cc * cc * sig).abs() < 1e-13);
            assert_eq!(eval_delta(&zero, x), 0.0);
            let want = sig * c1 * (c0 * (sig * x).cos() + c1);
            assert!((eval_delta(&two, x) - want).abs() < 1e-13);
        }
    }

    #[test]
    fn e_and_h_alpha() {
        let fejer = StieltjesMeasure::from_fejer(2, 1.0, 1.0).unwrap();
        let m = StieltjesMeasure::atomic(1.0, &[(1.0, 3.0)]).unwrap();
        for x in [-4.0, 0.0, 2.5] {
            assert!((eval_e(&fejer, 0.0, 0, x).unwrap() - (1.0 + x.cos()) / 2.0).abs() < 1e-15);
            assert!((eval_e(&m, 0.0, 0, x).unwrap() - 3.0).abs() < 1e-15);
            let (g, _) = eval_gh(&fejer, c(x, 0.0));
            assert!((eval_h_alpha(&fejer, 0.0, x) - g.re).abs() < 1e-15);
        }
        assert!(matches!(
            eval_e(&fejer, 0.0, -1, 0.0),
            Err(TransformError::Domain(_))
        ));
        assert!(eval_e(&fejer, 0.0, 2, 1.0).is_err());
    }

    #[test]
    fn e_for_negative_power_is_continuous_at_origin() {
        // F(0) = 0: atoms 1@0, −1@1
        let m = StieltjesMeasure::atomic(1.0, &[(0.0, 1.0), (1.0, -1.0)]).unwrap();
        let ev = Evaluator::new(&m);
        let tau = -PI / 2.0;
        let at0 = ev.e(tau, -1, 0.0).unwrap();
        for x in [1e-9, 1e-3, 0.99, 1.01] {
            let direct = {
                let (cc, ss) = ev.cs_deriv(x, 0);
                (cc * tau.cos() - ss * tau.sin()) / x
            };
            assert!((ev.e(tau, -1, x).unwrap() - direct).abs() < 1e-7);
        }
        // S(x) = sin x − 0 ⇒ S(x)/x → 1
        assert!((at0 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scaled_evaluation_survives_deep_lower_half_plane() {
        let m = StieltjesMeasure::atomic(2.0, &[(0.0, 1.0), (2.0, 1.0)]).unwrap();
        let ev = Evaluator::new(&m);
        let z = c(1.0, -600.0);
        let s = ev.f_scaled(z, 0);
        assert!(s.mantissa.is_finite());
        assert_eq!(s.exponent, 1200.0);
        // dominant term e^{2iz} = e^{2i}·e^{1200}
        assert!((s.mantissa - Complex64::from_polar(1.0, 2.0)).norm() < 1e-12);
        let plain = ev.f_scaled(c(1.0, -3.0), 1);
        assert!(
            (plain.value() - ev.f_deriv(c(1.0, -3.0), 1)).norm() < 1e-12 * plain.value().norm()
        );
    }

    #[test]
    fn identities_hold_for_a_density_with_atoms() {
        let d = PiecewiseLinearDensity::new(vec![0.2, 0.5, 1.3], vec![1.0, -0.5, 2.0]).unwrap();
        let m = StieltjesMeasure::new(
            1.5,
            vec![
                crate::measure::Atom::new(0.0, 0.7),
                crate::measure::Atom::new(1.5, -0.4),
            ],
            Some(d),
        )
        .unwrap();
        let ev = Evaluator::new(&m);
        for x in [-7.0, 0.0, 2.0, 3.7, 40.0] {
            let r = ev.identity_residuals(x, 0.3, -1.1);
            assert!(r.max_relative() < 1e-12, "x={x}: {r:?}");
        }
    }

    #[test]
    fn taylor_matches_direct_evaluation() {
        let ev = Evaluator::new(&unit_density());
        let (tc, ts) = ev.taylor_cs();
        let (tg, th) = ev.taylor_gh();
        for x in [0.0, 0.3, -0.8] {
            let (cc, ss) = ev.cs_deriv(x, 0);
            let (g, h) = ev.gh_deriv(x, 0);
            assert!((series_eval(&tc, x) - cc).abs() < 1e-15);
            assert!((series_eval(&ts, x) - ss).abs() < 1e-15);
            assert!((series_eval(&tg, x) - g).abs() < 1e-15);
            assert!((series_eval(&th, x) - h).abs() < 1e-15);
        }
    }
}
