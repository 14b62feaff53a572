//! Real Stieltjes measures on `[0, σ]`: point masses plus a piecewise-linear density.
//!
//! The distribution function μ is never stored. Jumps are attributed to points and
//! the absolutely continuous part is a continuous (up to explicitly encoded jumps)
//! piecewise-linear density, so μ is left-continuous on `(0, σ)` by construction.
//! An atom at `t = 0` realizes `μ(+0) ≠ μ(0)`, an atom at `t = σ` realizes
//! `μ(σ) ≠ μ(σ−0)`.

use thiserror::Error;

use crate::quad::{gl24, integrate_gl, Panel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("sigma must be positive and finite, got {0}")]
    NonPositiveSigma(f64),
    #[error("atom outside support: t = {t} not in [0, {sigma}]")]
    AtomOutsideSupport { t: f64, sigma: f64 },
    #[error("atom locations must be strictly increasing (t = {0} repeats or goes backwards)")]
    AtomsNotIncreasing(f64),
    #[error("atom at t = {0} has zero jump")]
    ZeroJump(f64),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("density needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("density has {nodes} nodes but {values} values")]
    LengthMismatch { nodes: usize, values: usize },
    #[error(
        "density nodes must be nondecreasing, with each node repeated at most once (at index {0})"
    )]
    NodesNotIncreasing(usize),
    #[error("density node {node} outside support [0, {sigma}]")]
    DensityOutsideSupport { node: f64, sigma: f64 },
    #[error("profile must vanish at the end of its support, f({at}) = {value}")]
    ProfileNotVanishing { at: f64, value: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A point mass `c` at `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub t: f64,
    pub c: f64,
}

impl Atom {
    pub fn new(t: f64, c: f64) -> Self {
        Self { t, c }
    }
}

/// Piecewise-linear interpolant through `(nodes[i], values[i])`, zero outside
/// `[nodes[0], nodes[last]]`.
///
/// A node may appear twice in a row; the pair then encodes a jump of the density
/// at that point (left value first).
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearDensity {
    nodes: Vec<f64>,
    values: Vec<f64>,
    panels: Vec<Panel>,
}

impl PiecewiseLinearDensity {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self, MeasureError> {
        if nodes.len() != values.len() {
            return Err(MeasureError::LengthMismatch {
                nodes: nodes.len(),
                values: values.len(),
            });
        }
        if nodes.len() < 2 {
            return Err(MeasureError::TooFewNodes(nodes.len()));
        }
        if nodes.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(MeasureError::NonFinite("density"));
        }
        for i in 1..nodes.len() {
            let repeated = nodes[i] == nodes[i - 1];
            let triple = repeated && i >= 2 && nodes[i - 2] == nodes[i];
            let edge = repeated && (i == 1 || i == nodes.len() - 1);
            if nodes[i] < nodes[i - 1] || triple || edge {
                return Err(MeasureError::NodesNotIncreasing(i));
            }
        }
        let panels = nodes
            .windows(2)
            .zip(values.windows(2))
            .filter(|(n, _)| n[1] > n[0])
            .map(|(n, v)| Panel::new(n[0], n[1], vec![v[0], (v[1] - v[0]) / (n[1] - n[0])]))
            .collect();
        Ok(Self {
            nodes,
            values,
            panels,
        })
    }

    /// Step function taking `levels[i]` on `[breaks[i], breaks[i+1])`.
    pub fn piecewise_constant(breaks: &[f64], levels: &[f64]) -> Result<Self, MeasureError> {
        if breaks.len() != levels.len() + 1 {
            return Err(MeasureError::LengthMismatch {
                nodes: breaks.len(),
                values: levels.len() + 1,
            });
        }
        let mut nodes = Vec::with_capacity(2 * levels.len());
        let mut values = Vec::with_capacity(2 * levels.len());
        for (i, &v) in levels.iter().enumerate() {
            if i > 0 && levels[i - 1] == v {
                // extend the previous piece
                *nodes.last_mut().expect("previous piece") = breaks[i + 1];
                continue;
            }
            nodes.push(breaks[i]);
            values.push(v);
            nodes.push(breaks[i + 1]);
            values.push(v);
        }
        Self::new(nodes, values)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Non-degenerate linear panels in local coordinates.
    pub fn panels(&self) -> &[Panel] {
        &self.panels
    }

    pub fn support(&self) -> (f64, f64) {
        (
            self.nodes[0],
            *self.nodes.last().expect("at least two nodes"),
        )
    }

    /// Density value; at a jump node the right-hand value is returned.
    pub fn eval(&self, t: f64) -> f64 {
        let (lo, hi) = self.support();
        if t < lo || t > hi {
            return 0.0;
        }
        match self.panels.iter().rposition(|p| p.a <= t) {
            Some(i) => self.panels[i].eval(t.min(self.panels[i].b)),
            None => 0.0,
        }
    }

    pub fn integral(&self) -> f64 {
        self.panels.iter().map(Panel::integral).sum()
    }

    /// `∫|g|`, splitting panels where the density changes sign.
    pub fn abs_integral(&self) -> f64 {
        self.panels
            .iter()
            .map(|p| {
                let va = p.coeffs[0];
                let vb = p.eval(p.b);
                let w = p.width();
                if va * vb >= 0.0 {
                    0.5 * w * (va.abs() + vb.abs())
                } else {
                    let root = w * va.abs() / (va.abs() + vb.abs());
                    0.5 * (root * va.abs() + (w - root) * vb.abs())
                }
            })
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }

    fn scaled(&self, lambda: f64) -> Self {
        Self::new(
            self.nodes.clone(),
            self.values.iter().map(|v| v * lambda).collect(),
        )
        .expect("scaling keeps a valid density")
    }

    fn reflected(&self, sigma: f64) -> Self {
        let nodes = self.nodes.iter().rev().map(|t| sigma - t).collect();
        let values = self.values.iter().rev().copied().collect();
        Self::new(nodes, values).expect("reflection keeps a valid density")
    }
}

/// Summary numbers of the distribution function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassSummary {
    /// `μ(σ) − μ(0)`, equal to `F(0)`.
    pub total_mass: f64,
    /// `μ(σ−0) − μ(0)`.
    pub left_limit_mass: f64,
    pub jump_at_sigma: f64,
    /// Smallest `[a₁, b₁]` outside of which μ is constant.
    pub support_interval: (f64, f64),
}

/// A real measure on `[0, σ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StieltjesMeasure {
    sigma: f64,
    atoms: Vec<Atom>,
    density: Option<PiecewiseLinearDensity>,
}

impl StieltjesMeasure {
    pub fn new(
        sigma: f64,
        atoms: Vec<Atom>,
        density: Option<PiecewiseLinearDensity>,
    ) -> Result<Self, MeasureError> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(MeasureError::NonPositiveSigma(sigma));
        }
        for (i, a) in atoms.iter().enumerate() {
            if !(a.t.is_finite() && a.c.is_finite()) {
                return Err(MeasureError::NonFinite("atom"));
            }
            if a.t < 0.0 || a.t > sigma {
                return Err(MeasureError::AtomOutsideSupport { t: a.t, sigma });
            }
            if a.c == 0.0 {
                return Err(MeasureError::ZeroJump(a.t));
            }
            if i > 0 && a.t <= atoms[i - 1].t {
                return Err(MeasureError::AtomsNotIncreasing(a.t));
            }
        }
        if let Some(d) = &density {
            let (lo, hi) = d.support();
            for node in [lo, hi] {
                if node < 0.0 || node > sigma {
                    return Err(MeasureError::DensityOutsideSupport { node, sigma });
                }
            }
        }
        let density = density.filter(|d| !d.is_zero());
        Ok(Self {
            sigma,
            atoms,
            density,
        })
    }

    /// Atomic measure from `(t, c)` pairs in any order; zero jumps are dropped and
    /// jumps at the same location merged.
    pub fn atomic(sigma: f64, pairs: &[(f64, f64)]) -> Result<Self, MeasureError> {
        let mut sorted: Vec<(f64, f64)> = pairs.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<Atom> = Vec::with_capacity(sorted.len());
        for (t, c) in sorted {
            match atoms.last_mut() {
                Some(last) if last.t == t => last.c += c,
                _ => atoms.push(Atom::new(t, c)),
            }
        }
        atoms.retain(|a| a.c != 0.0);
        Self::new(sigma, atoms, None)
    }

    pub fn with_density(sigma: f64, density: PiecewiseLinearDensity) -> Result<Self, MeasureError> {
        Self::new(sigma, Vec::new(), Some(density))
    }

    pub fn zero(sigma: f64) -> Result<Self, MeasureError> {
        Self::new(sigma, Vec::new(), None)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&PiecewiseLinearDensity> {
        self.density.as_ref()
    }

    pub(crate) fn panels(&self) -> &[Panel] {
        self.density.as_ref().map_or(&[], |d| d.panels())
    }

    /// `F ≡ 0` exactly when there is nothing to integrate against.
    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.density.is_none()
    }

    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.c.abs()).sum::<f64>()
            + self.density.as_ref().map_or(0.0, |d| d.abs_integral())
    }

    pub fn jump_at(&self, t: f64) -> f64 {
        self.atoms.iter().find(|a| a.t == t).map_or(0.0, |a| a.c)
    }

    pub fn mass_summary(&self) -> MassSummary {
        let total_mass = self.atoms.iter().map(|a| a.c).sum::<f64>()
            + self.density.as_ref().map_or(0.0, |d| d.integral());
        let jump_at_sigma = self.jump_at(self.sigma);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in &self.atoms {
            lo = lo.min(a.t);
            hi = hi.max(a.t);
        }
        for p in self.panels() {
            let va = p.coeffs[0];
            let vb = p.eval(p.b);
            if va != 0.0 || vb != 0.0 {
                lo = lo.min(p.a);
                hi = hi.max(p.b);
            }
        }
        let support_interval = if lo.is_finite() { (lo, hi) } else { (0.0, 0.0) };
        MassSummary {
            total_mass,
            left_limit_mass: total_mass - jump_at_sigma,
            jump_at_sigma,
            support_interval,
        }
    }

    /// `t ↦ μ(σ − t)` as a measure: atoms at `σ − λ` with the same jumps and the
    /// density `g(σ − s)`. `C` and `S` are the cosine and sine transforms of it.
    pub fn reflected(&self) -> Self {
        let atoms = self
            .atoms
            .iter()
            .rev()
            .map(|a| Atom::new(self.sigma - a.t, a.c))
            .collect();
        Self {
            sigma: self.sigma,
            atoms,
            density: self.density.as_ref().map(|d| d.reflected(self.sigma)),
        }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        if lambda == 0.0 {
            return Self::zero(self.sigma).expect("sigma already validated");
        }
        Self {
            sigma: self.sigma,
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom::new(a.t, a.c * lambda))
                .collect(),
            density: self.density.as_ref().map(|d| d.scaled(lambda)),
        }
    }

    /// Same measure with the jump at σ replaced by `jump`.
    pub fn with_jump_at_sigma(&self, jump: f64) -> Self {
        let mut atoms: Vec<Atom> = self
            .atoms
            .iter()
            .copied()
            .filter(|a| a.t != self.sigma)
            .collect();
        if jump != 0.0 {
            atoms.push(Atom::new(self.sigma, jump));
        }
        Self {
            sigma: self.sigma,
            atoms,
            density: self.density.clone(),
        }
    }

    /// `∫ t^j dμ(t)`.
    pub fn power_moment(&self, j: usize) -> f64 {
        let rule = gl24();
        let atoms: f64 = self.atoms.iter().map(|a| a.c * a.t.powi(j as i32)).sum();
        let dens: f64 = self
            .panels()
            .iter()
            .map(|p| integrate_gl(|t| p.eval(t) * t.powi(j as i32), p.a, p.b, rule))
            .sum();
        atoms + dens
    }

    /// `μ(s) − μ(0)` for the left-continuous distribution function.
    pub fn distribution(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|a| a.t < s || (s >= self.sigma && a.t <= self.sigma))
            .map(|a| a.c)
            .sum();
        let dens: f64 = self
            .panels()
            .iter()
            .map(|p| {
                if s >= p.b {
                    p.integral()
                } else if s > p.a {
                    Panel::new(p.a, s, p.coeffs.clone()).integral()
                } else {
                    0.0
                }
            })
            .sum();
        atoms + dens
    }

    // ---- constructors for the example families ----

    /// Atomic measure with Fejér-type coefficients sampled from the even profile
    /// `f(x) = (1 − (|x|/m)^λ)₊^δ`: atoms at `t = k`, `c_k = f(m − k)` for `k < m`,
    /// `c_m = f(0)/2`, zero jumps dropped.
    pub fn from_fejer(m_count: usize, lambda: f64, delta: f64) -> Result<Self, MeasureError> {
        if m_count == 0 {
            return Err(MeasureError::InvalidParameter(
                "m_count must be positive".into(),
            ));
        }
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(MeasureError::InvalidParameter(format!(
                "lambda must lie in (0, 1], got {lambda}"
            )));
        }
        if !(delta >= 1.0 && delta.is_finite()) {
            return Err(MeasureError::InvalidParameter(format!(
                "delta must be at least 1, got {delta}"
            )));
        }
        let m = m_count as f64;
        let profile = |x: f64| fejer_profile(x, m, lambda, delta);
        let mut pairs: Vec<(f64, f64)> = (0..m_count)
            .map(|k| (k as f64, profile(m - k as f64)))
            .collect();
        pairs.push((m, profile(0.0) / 2.0));
        Self::atomic(m, &pairs)
    }

    /// Density `g(t) = t^{μ−1}(1 − t²)^{ν−1}` on `[0, 1]`.
    ///
    /// `(1, 1)` and `(2, 1)` are linear and represented exactly. Otherwise the
    /// density is replaced by its panel means on a grid graded quadratically (in
    /// `(1 − t)^ν`) toward `t = 1`; panel masses are computed to rounding, so the
    /// total mass is exact and a nondecreasing `g` stays nondecreasing.
    pub fn from_monomial_density(mu_exp: f64, nu_exp: f64) -> Result<Self, MeasureError> {
        if !(mu_exp >= 1.0 && mu_exp.is_finite()) {
            return Err(MeasureError::InvalidParameter(format!(
                "exponent mu must be at least 1, got {mu_exp}"
            )));
        }
        if !(nu_exp > 0.0 && nu_exp <= 1.0) {
            return Err(MeasureError::InvalidParameter(format!(
                "exponent nu must lie in (0, 1], got {nu_exp}"
            )));
        }
        if nu_exp == 1.0 && (mu_exp == 1.0 || mu_exp == 2.0) {
            let v0 = if mu_exp == 1.0 { 1.0 } else { 0.0 };
            let d = PiecewiseLinearDensity::new(vec![0.0, 1.0], vec![v0, 1.0])?;
            return Self::with_density(1.0, d);
        }
        const PANELS: usize = 2000;
        let p = 2.0 / nu_exp;
        let mut breaks: Vec<f64> = (0..=PANELS)
            .map(|j| 1.0 - (1.0 - j as f64 / PANELS as f64).powf(p))
            .collect();
        breaks[PANELS] = 1.0;
        breaks.dedup();
        let levels: Vec<f64> = breaks
            .windows(2)
            .map(|w| monomial_mass(mu_exp, nu_exp, w[0], w[1]) / (w[1] - w[0]))
            .collect();
        let d = PiecewiseLinearDensity::piecewise_constant(&breaks, &levels)?;
        Self::with_density(1.0, d)
    }

    /// Measure with `μ(t) − μ(0) = f(σ − t)` on `[0, σ)` plus an atom `jump_at_sigma`
    /// at σ, where `f` is the even piecewise-linear profile given on `[0, σ]` by
    /// `nodes` (from 0 to σ) and `values` (ending in 0).
    pub fn from_pd_profile(
        nodes: &[f64],
        values: &[f64],
        jump_at_sigma: f64,
    ) -> Result<Self, MeasureError> {
        if nodes.len() != values.len() {
            return Err(MeasureError::LengthMismatch {
                nodes: nodes.len(),
                values: values.len(),
            });
        }
        if nodes.len() < 2 {
            return Err(MeasureError::TooFewNodes(nodes.len()));
        }
        if nodes[0] != 0.0 {
            return Err(MeasureError::InvalidParameter(
                "profile nodes must start at 0".into(),
            ));
        }
        for i in 1..nodes.len() {
            if nodes[i] <= nodes[i - 1] {
                return Err(MeasureError::NodesNotIncreasing(i));
            }
        }
        let sigma = *nodes.last().expect("checked length");
        let last = *values.last().expect("checked length");
        if last != 0.0 {
            return Err(MeasureError::ProfileNotVanishing {
                at: sigma,
                value: last,
            });
        }
        // density g(t) = −f'(σ − t): piecewise constant
        let mut breaks = vec![0.0];
        let mut levels = Vec::new();
        for j in (0..nodes.len() - 1).rev() {
            let slope = (values[j + 1] - values[j]) / (nodes[j + 1] - nodes[j]);
            breaks.push(sigma - nodes[j]);
            levels.push(-slope);
        }
        let density = if levels.iter().all(|l| *l == 0.0) {
            None
        } else {
            Some(PiecewiseLinearDensity::piecewise_constant(
                &breaks, &levels,
            )?)
        };
        let atoms = if jump_at_sigma != 0.0 {
            vec![Atom::new(sigma, jump_at_sigma)]
        } else {
            Vec::new()
        };
        Self::new(sigma, atoms, density)
    }
}

/// `(1 − (|x|/m)^λ)₊^δ`.
pub fn fejer_profile(x: f64, m: f64, lambda: f64, delta: f64) -> f64 {
    let r = x.abs() / m;
    if r >= 1.0 {
        0.0
    } else {
        (1.0 - r.powf(lambda)).powf(delta)
    }
}

/// `∫_a^b t^{μ−1}(1 − t²)^{ν−1} dt` with the endpoint singularities removed by
/// substitution.
fn monomial_mass(mu: f64, nu: f64, a: f64, b: f64) -> f64 {
    let rule = gl24();
    let split = 0.5;
    let mut total = 0.0;
    // left part: w = t^μ
    let (la, lb) = (a.min(split), b.min(split));
    if lb > la {
        let f = |w: f64| {
            let t = w.powf(1.0 / mu);
            (1.0 - t * t).powf(nu - 1.0) / mu
        };
        total += integrate_gl(f, la.powf(mu), lb.powf(mu), rule);
    }
    // right part: s = 1 − t, w = s^ν
    let (ra, rb) = (a.max(split), b.max(split));
    if rb > ra {
        let f = |w: f64| {
            let s = w.powf(1.0 / nu);
            (1.0 - s).powf(mu - 1.0) * (2.0 - s).powf(nu - 1.0) / nu
        };
        total += integrate_gl(f, (1.0 - rb).powf(nu), (1.0 - ra).powf(nu), rule);
    }
    total
}
