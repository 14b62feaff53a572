//! Entire functions of exponential type given as finite Fourier–Stieltjes
//! transforms `F(z) = ∫₀^σ e^{izt} dμ(t)`.
//!
//! The crate evaluates the transform family exactly for measures made of point
//! masses and piecewise-linear densities, checks the sharp inequality
//! `4σ d(x) ≥ x^{2n−2} D(x)` with its equality cases, counts and locates zeros in
//! the complex plane, and runs the positive-definiteness side checks.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod inequality;
pub mod measure;
pub mod posdef;
pub mod quad;
pub mod sampling;
pub mod scenario;
pub mod transforms;
pub mod zeros;

pub use measure::{Atom, MassSummary, MeasureError, PiecewiseLinearDensity, StieltjesMeasure};
pub use transforms::{Evaluator, Scaled, TransformSample};
