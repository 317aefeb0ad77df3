//! Spectral toolbox for the Gaussian-weighted Laplacian `L u = -Δu + x·∇u`
//! on domains of the standard Gauss space.
//!
//! The operator is the Dirichlet form of the measure
//! `dγ_N = (2π)^{-N/2} e^{-|x|²/2} dx`; its Neumann spectrum on the whole
//! space is `0, 1, 2, …` with Hermite polynomial eigenfunctions. This crate
//! covers:
//!
//! * [`special`]: erf/erfinv, the Gaussian tail distribution Φ and its
//!   inverse, probabilists' Hermite polynomials, Γ, and adaptive quadrature;
//! * [`measure`]: Gaussian measure and perimeter of intervals, balls,
//!   half-spaces and rectangles, plus measure-preserving endpoint maps;
//! * [`sturm1d`] and [`radial`]: certified Prüfer-phase shooting solvers for
//!   the one-dimensional and radial eigenvalue problems, with node counts
//!   and boundary shape derivatives;
//! * [`bounds`]: the comparison functions `k(R)` and `h(R)` and the regime
//!   chain that traps the first nontrivial Neumann eigenvalue of a ball;
//! * [`rearrange`]: weighted decreasing rearrangements, Hardy-Littlewood
//!   and Dirichlet-energy comparison gaps;
//! * [`weinberger`]: the radial test-function machinery that bounds
//!   `μ₁(Ω) ≤ μ₁(B_R)` for origin-symmetric planar domains;
//! * [`grid2d`]: masked finite-volume discretizations, tensor-product
//!   spectra, and the rounded-corner square family;
//! * [`verify`]: the end-to-end verification battery used by the
//!   acceptance suite and the CLI.

pub mod bounds;
pub mod error;
pub mod grid2d;
pub mod linalg;
pub mod measure;
pub mod radial;
pub mod rearrange;
pub mod report;
pub mod sampled;
pub mod shooting;
pub mod special;
pub mod sturm1d;
pub mod verify;
pub mod weinberger;

pub use error::{Error, Result};
pub use report::Check;

/// Default absolute tolerance for eigenvalue solves.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Unnormalized Gaussian weight below which infinite domains are truncated.
/// `e^{-t²/2} < 1e-18` when `|t| > 9.1046`.
pub const TRUNC_WEIGHT: f64 = 1e-18;

/// Radius at which the unnormalized Gaussian weight drops to `weight`.
pub fn trunc_radius(weight: f64) -> f64 {
    assert!(weight > 0.0 && weight < 1.0, "weight must be in (0,1)");
    (-2.0 * weight.ln()).sqrt()
}
