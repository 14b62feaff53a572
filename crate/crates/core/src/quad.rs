//! Exact integration of piecewise polynomials against complex exponentials.
//!
//! Every transform in this crate reduces to integrals of the form
//! `∫_a^b p(t) e^{izt} dt` with `p` a low-degree polynomial stored in panel-local
//! coordinates. Those are evaluated in closed form, so the only error left is
//! floating-point rounding.

use std::sync::OnceLock;

use num_complex::Complex64;

/// Largest polynomial degree handled by [`exp_moments`].
pub const MAX_DEGREE: usize = 12;

const SERIES_THRESHOLD: f64 = 2.0;

/// `J_j = ∫_0^w u^j e^{iζu} du` for `j = 0..=deg`.
///
/// Callers arrange `Im ζ ≥ 0` so that `|e^{iζu}| ≤ 1` on the panel.
pub fn exp_moments(zeta: Complex64, w: f64, deg: usize) -> [Complex64; MAX_DEGREE + 1] {
    assert!(
        deg <= MAX_DEGREE,
        "polynomial degree {deg} exceeds {MAX_DEGREE}"
    );
    let mut out = [Complex64::new(0.0, 0.0); MAX_DEGREE + 1];
    if w == 0.0 {
        return out;
    }
    let iz = Complex64::i() * zeta;
    if zeta.norm() * w < SERIES_THRESHOLD {
        // Σ_m (iζ)^m / m! · w^{j+m+1} / (j+m+1)
        for (j, slot) in out.iter_mut().enumerate().take(deg + 1) {
            let mut term = Complex64::new(w.powi(j as i32 + 1), 0.0);
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..60 {
                let contrib = term / (j + m + 1) as f64;
                acc += contrib;
                if contrib.norm() <= 1e-18 * acc.norm() {
                    break;
                }
                term = term * iz * w / (m + 1) as f64;
            }
            *slot = acc;
        }
    } else {
        let e = (iz * w).exp();
        out[0] = (e - 1.0) / iz;
        let mut wp = 1.0;
        for j in 1..=deg {
            wp *= w;
            out[j] = (e * wp - out[j - 1] * j as f64) / iz;
        }
    }
    out
}

/// A polynomial on `[a, b]`, stored as coefficients in `u = t - a`.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
    pub coeffs: Vec<f64>,
}

impl Panel {
    pub fn new(a: f64, b: f64, coeffs: Vec<f64>) -> Self {
        debug_assert!(b >= a);
        Self { a, b, coeffs }
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, t: f64) -> f64 {
        horner(&self.coeffs, t - self.a)
    }

    /// Polynomial multiplied by `(a + u)^k`, still in local coordinates.
    pub fn times_power(&self, k: usize) -> Panel {
        let mut coeffs = self.coeffs.clone();
        for _ in 0..k {
            coeffs = mul_linear(&coeffs, self.a, 1.0);
        }
        Panel::new(self.a, self.b, coeffs)
    }

    /// Polynomial multiplied by `(c0 + c1·t)`.
    pub fn times_linear(&self, c0: f64, c1: f64) -> Panel {
        Panel::new(
            self.a,
            self.b,
            mul_linear(&self.coeffs, c0 + c1 * self.a, c1),
        )
    }

    /// Coefficients of the same polynomial in `v = b - t`.
    pub fn coeffs_from_right(&self) -> Vec<f64> {
        // p(u) with u = w - v
        let w = self.width();
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        for (j, &pj) in self.coeffs.iter().enumerate() {
            if pj == 0.0 {
                continue;
            }
            // (w - v)^j = Σ_i C(j,i) w^{j-i} (-v)^i
            let mut binom = 1.0;
            for i in 0..=j {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                out[i] += pj * binom * w.powi((j - i) as i32) * sign;
                binom = binom * (j - i) as f64 / (i + 1) as f64;
            }
        }
        out
    }

    /// `e^{-shift} ∫_a^b p(t) e^{izt} dt`.
    pub fn fourier(&self, z: Complex64, shift: f64) -> Complex64 {
        let w = self.width();
        if w == 0.0 || self.coeffs.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let deg = self.degree();
        let (anchor, zeta, coeffs) = if z.im >= 0.0 {
            (self.a, z, self.coeffs.clone())
        } else {
            (self.b, -z, self.coeffs_from_right())
        };
        let j = exp_moments(zeta, w, deg);
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, jm) in coeffs.iter().zip(j.iter()) {
            acc += jm * *c;
        }
        let phase = (Complex64::i() * z * anchor - shift).exp();
        acc * phase
    }

    /// `∫_a^b p(t) dt`.
    pub fn integral(&self) -> f64 {
        let w = self.width();
        let mut wp = w;
        let mut acc = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            acc += c * wp / (j + 1) as f64;
            wp *= w;
        }
        acc
    }
}

/// Horner evaluation of `Σ c_j u^j`.
pub fn horner(coeffs: &[f64], u: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c)
}

/// `(Σ p_j u^j)(c0 + c1 u)`.
fn mul_linear(p: &[f64], c0: f64, c1: f64) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + 1];
    for (j, &pj) in p.iter().enumerate() {
        out[j] += pj * c0;
        out[j + 1] += pj * c1;
    }
    out
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let wgt = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = wgt;
        weights[n - 1 - i] = wgt;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Cached 24-point rule, exact for polynomials of degree ≤ 47.
pub fn gl24() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(24))
}

/// Integrate `f` over `[a, b]` with an `n`-point Gauss–Legendre rule.
pub fn integrate_gl<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.0
        .iter()
        .zip(rule.1.iter())
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(p: &Panel, z: Complex64) -> Complex64 {
        // composite Simpson with many points
        let n = 20_000;
        let h = p.width() / n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..=n {
            let t = p.a + h * i as f64;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += (Complex64::i() * z * t).exp() * p.eval(t) * w;
        }
        acc * h / 3.0
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(5);
        let v = integrate_gl(|x| x.powi(9) + 3.0 * x.powi(4), 0.0, 2.0, &rule);
        let exact = 2f64.powi(10) / 10.0 + 3.0 * 2f64.powi(5) / 5.0;
        assert!((v - exact).abs() < 1e-11 * exact);
        let s: f64 = gl24().1.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn panel_fourier_matches_simpson_on_both_branches() {
        let p = Panel::new(0.3, 1.1, vec![0.5, -1.2, 2.0]);
        for z in [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.7, 0.0),
            Complex64::new(15.0, 0.0),
            Complex64::new(-3.0, -2.5),
            Complex64::new(1e-6, 4.0),
        ] {
            let exact = p.fourier(z, 0.0);
            let b = brute(&p, z);
            assert!(
                (exact - b).norm() < 1e-9 * (1.0 + b.norm()),
                "z={z}: {exact} vs {b}"
            );
        }
    }

    #[test]
    fn right_anchored_coefficients_describe_the_same_polynomial() {
        let p = Panel::new(1.0, 1.5, vec![2.0, -3.0, 0.25, 1.0]);
        let q = p.coeffs_from_right();
        for t in [1.0, 1.2, 1.5] {
            assert!((p.eval(t) - horner(&q, 1.5 - t)).abs() < 1e-14);
        }
    }

    #[test]
    fn series_and_recurrence_agree_near_threshold() {
        let w = 0.8;
        for zr in [2.4, 2.6] {
            let zeta = Complex64::new(zr / w, 0.1);
            let a = exp_moments(zeta, w, 5);
            // evaluate the other branch by splitting the interval in halves
            let half = exp_moments(zeta, w / 2.0, 5);
            let shifted = {
                // ∫_{w/2}^{w} u^j e^{iζu} du via binomial shift
                let mut out = [Complex64::new(0.0, 0.0); 6];
                let e = (Complex64::i() * zeta * (w / 2.0)).exp();
                for (j, o) in out.iter_mut().enumerate() {
                    let mut binom = 1.0;
                    for i in 0..=j {
                        *o += half[i] * binom * (w / 2.0).powi((j - i) as i32);
                        binom = binom * (j - i) as f64 / (i + 1) as f64;
                    }
                    *o *= e;
                }
                out
            };
            for j in 0..=5 {
                let split = half[j] + shifted[j];
                assert!((a[j] - split).norm() < 1e-13, "j={j}");
            }
        }
    }
}
