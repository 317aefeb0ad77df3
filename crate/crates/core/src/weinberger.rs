//! Ball-maximality machinery for the first nontrivial Neumann eigenvalue
//! on origin-symmetric planar domains: extend the ball eigenprofile past
//! its radius, form the test-function densities N(r), D(r), compute the
//! resulting upper bound ∫_Ω N dγ / ∫_Ω D dγ, and verify the chain
//! μ₁(Ω) ≤ bound ≤ μ₁(B_R) for domains of the ball's Gaussian measure.
//!
//! The test functions are P_i(x) = G(|x|)·x_i/|x| with G the radial part
//! of the ball's first nontrivial mode, held constant beyond the ball
//! radius. Central symmetry of Ω makes every P_i mean-zero, so the
//! Rayleigh quotient of the pair bounds μ₁(Ω); monotonicity of the two
//! densities turns the quotient comparison between Ω and B_R into a pair
//! of bathtub-style integral inequalities.

use crate::error::{Error, Result};
use crate::grid2d::{masked_eigs, MaskedGrid2D};
use crate::measure::ball_radius_for_measure;
use crate::radial::mu1_ball;
use crate::report::Check;
use crate::sampled::SampledFunction;
use crate::special::{gauss_legendre, quad};
use serde::Serialize;
use std::f64::consts::PI;

/// Angular quadrature: panels × nodes (panel edges at multiples of π/4 so
/// axis-aligned corners of rectangles fall on panel boundaries).
const ANGULAR_PANELS: usize = 8;
const ANGULAR_NODES: usize = 16;
/// Absolute tolerance of each inner radial integral. The integrands carry
/// the sampled profile's piecewise representation, whose derivative kinks
/// cap what adaptive quadrature can certify within budget; 1e-9 converges
/// comfortably and sits far below every comparison tolerance built on it.
const INNER_TOL: f64 = 1e-9;
/// Cells per side when a polar domain is rasterized for its eigenvalue.
const RASTER_CELLS: usize = 100;

/// Radial test-function data built from the ball eigenprofile: G (the
/// profile, constant beyond `r_ball`), the gradient density
/// `N(r) = G′² + (n−1)G²/r²`, and the mass density `D(r) = G²`.
#[derive(Debug, Clone)]
pub struct TestProfile {
    /// G on the solver grid `[r₀, R]`, with derivative samples.
    pub g: SampledFunction,
    /// N(r) on the same grid.
    pub ndens: SampledFunction,
    /// D(r) on the same grid.
    pub ddens: SampledFunction,
    /// Ball radius R; G is constant for r ≥ R.
    pub r_ball: f64,
    /// Ambient dimension of the profile equation.
    pub n_dim: usize,
    /// μ₁(B_R) as solved by the radial eigensolver.
    pub ball_mu1: f64,
}

impl TestProfile {
    fn plateau(&self) -> f64 {
        *self.g.values().last().expect("non-empty")
    }

    /// Linear slope g/r near the origin (the profile vanishes linearly).
    fn origin_slope(&self) -> f64 {
        self.g.values()[0] / self.g.grid()[0]
    }

    /// G(r) for any r ≥ 0: linear below the first sample, interpolated on
    /// the grid, constant beyond R.
    pub fn g_at(&self, r: f64) -> f64 {
        if r >= self.r_ball {
            self.plateau()
        } else if r <= self.g.left() {
            self.origin_slope() * r
        } else {
            self.g.eval(r)
        }
    }

    /// N(r) for any r ≥ 0. Beyond R the gradient term vanishes (G is
    /// constant) leaving `(n−1)G(R)²/r²`.
    pub fn ndens_at(&self, r: f64) -> f64 {
        if r >= self.r_ball {
            (self.n_dim as f64 - 1.0) * self.plateau().powi(2) / (r * r)
        } else if r <= self.g.left() {
            self.ndens.values()[0]
        } else {
            self.ndens.eval(r)
        }
    }

    /// D(r) for any r ≥ 0.
    pub fn ddens_at(&self, r: f64) -> f64 {
        if r >= self.r_ball {
            self.plateau().powi(2)
        } else if r <= self.g.left() {
            (self.origin_slope() * r).powi(2)
        } else {
            self.ddens.eval(r)
        }
    }
}

/// Build the test profile for dimension `n_dim` and ball radius `r`: the
/// radial part of μ₁(B_R)'s eigenfunction with the constant extension.
/// The monotonicity facts the comparison argument relies on — G
/// nondecreasing, N strictly decreasing, D nondecreasing — are verified
/// on the sample grid and violation is an error, not an assumption.
pub fn build_profile(n_dim: usize, r: f64, tol: f64) -> Result<TestProfile> {
    let (ball_mu1, w) = mu1_ball(n_dim, r, tol)?;
    let grid = w.grid().to_vec();
    let vals = w.values().to_vec();
    let ders = w.derivs().expect("eigenfunction carries derivatives").to_vec();
    let nf = n_dim as f64;
    let ndens_vals: Vec<f64> = grid
        .iter()
        .zip(vals.iter().zip(ders.iter()))
        .map(|(&r, (&v, &d))| d * d + (nf - 1.0) * (v / r).powi(2))
        .collect();
    let ddens_vals: Vec<f64> = vals.iter().map(|v| v * v).collect();

    let peak = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    for (i, pair) in vals.windows(2).enumerate() {
        if pair[0] < -1e-10 * peak {
            return Err(Error::Precondition(format!(
                "profile negative at sample {i}: {}",
                pair[0]
            )));
        }
        if pair[1] < pair[0] - 1e-8 * peak {
            return Err(Error::Precondition(format!(
                "profile not nondecreasing at sample {i}"
            )));
        }
    }
    let n0 = ndens_vals[0];
    for (i, pair) in ndens_vals.windows(2).enumerate() {
        if pair[1] > pair[0] + 1e-8 * n0 {
            return Err(Error::Precondition(format!(
                "gradient density not nonincreasing at sample {i}"
            )));
        }
    }
    let stride = 10;
    for i in 0..ndens_vals.len().saturating_sub(stride) {
        if !(ndens_vals[i + stride] < ndens_vals[i]) {
            return Err(Error::Precondition(format!(
                "gradient density not strictly decreasing across samples {i}..{}",
                i + stride
            )));
        }
    }
    let dmax = ddens_vals.iter().fold(0.0_f64, |m, v| m.max(*v));
    for (i, pair) in ddens_vals.windows(2).enumerate() {
        if pair[1] < pair[0] - 1e-10 * dmax {
            return Err(Error::Precondition(format!(
                "mass density not nondecreasing at sample {i}"
            )));
        }
    }

    Ok(TestProfile {
        ndens: SampledFunction::new(grid.clone(), ndens_vals)?,
        ddens: SampledFunction::new(grid, ddens_vals)?,
        g: w,
        r_ball: r,
        n_dim,
        ball_mu1,
    })
}

/// An origin-symmetric planar domain: either a star-shaped region given
/// by a polar radius function with ρ(θ) = ρ(θ+π), or an active-cell mask
/// with antipodal symmetry (which also covers non-star-shaped sets such
/// as annuli).
pub struct SymmetricDomain2D {
    repr: Repr,
    measure: f64,
}

enum Repr {
    Polar(Box<dyn Fn(f64) -> f64 + Send + Sync>),
    Mask(MaskedGrid2D),
}

impl std::fmt::Debug for SymmetricDomain2D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.repr {
            Repr::Polar(_) => write!(f, "SymmetricDomain2D::polar {{ measure: {} }}", self.measure),
            Repr::Mask(g) => write!(
                f,
                "SymmetricDomain2D::mask {{ cells: {}, measure: {} }}",
                g.active_count(),
                self.measure
            ),
        }
    }
}

/// Angular Gauss–Legendre sum of `f(θ)` over [0, 2π].
fn angular_sum(f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let (nodes, weights) = gauss_legendre(ANGULAR_NODES);
    let mut total = 0.0;
    for p in 0..ANGULAR_PANELS {
        let a = 2.0 * PI * p as f64 / ANGULAR_PANELS as f64;
        let b = 2.0 * PI * (p + 1) as f64 / ANGULAR_PANELS as f64;
        let c = 0.5 * (a + b);
        let hw = 0.5 * (b - a);
        for (x, w) in nodes.iter().zip(weights.iter()) {
            total += w * hw * f(c + hw * x)?;
        }
    }
    Ok(total)
}

/// ∫₀^{rmax} f(r)·r·e^{−r²/2} dr, split at an interior kink if given.
fn inner_radial(f: &dyn Fn(f64) -> f64, rmax: f64, split: Option<f64>) -> Result<f64> {
    let integrand = |r: f64| f(r) * r * (-0.5 * r * r).exp();
    match split {
        Some(s) if s < rmax => {
            Ok(quad(integrand, 0.0, s, INNER_TOL)? + quad(integrand, s, rmax, INNER_TOL)?)
        }
        _ => quad(integrand, 0.0, rmax, INNER_TOL),
    }
}

impl SymmetricDomain2D {
    /// Star-shaped domain {r < ρ(θ)}. Requires ρ positive, finite, and
    /// centrally symmetric (ρ(θ) = ρ(θ+π), verified on samples); the
    /// Gaussian measure uses the exact radial antiderivative per angle.
    pub fn polar(rho: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        for i in 0..256 {
            let th = 2.0 * PI * (i as f64 + 0.5) / 256.0;
            let r = rho(th);
            if !r.is_finite() || !(r > 0.0) {
                return Err(Error::InvalidDomain(format!(
                    "polar radius must be positive and finite, got {r} at angle {th}"
                )));
            }
            let r_op = rho(th + PI);
            if (r - r_op).abs() > 1e-10 * (1.0 + r.abs()) {
                return Err(Error::Precondition(format!(
                    "not centrally symmetric: rho({th:.4}) = {r} vs rho+pi = {r_op}"
                )));
            }
        }
        let measure =
            angular_sum(|th| Ok(1.0 - (-0.5 * rho(th).powi(2)).exp()))? / (2.0 * PI);
        Ok(SymmetricDomain2D { repr: Repr::Polar(Box::new(rho)), measure })
    }

    /// The centered disk of radius `r`.
    pub fn ball(r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidDomain(format!("ball radius must be positive, got {r}")));
        }
        Self::polar(move |_| r)
    }

    /// Wrap a mask; it must be antipodally symmetric (connectivity is
    /// already enforced by the mask constructor).
    pub fn from_mask(mask: MaskedGrid2D) -> Result<Self> {
        if !mask.is_symmetric() {
            return Err(Error::Precondition(
                "mask is not symmetric under the antipodal map".into(),
            ));
        }
        let measure = mask.measure();
        Ok(SymmetricDomain2D { repr: Repr::Mask(mask), measure })
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    /// ∫_Ω f(|x|) dγ₂ by polar quadrature or mask summation.
    fn integrate_radial(&self, f: &dyn Fn(f64) -> f64, split: Option<f64>) -> Result<f64> {
        match &self.repr {
            Repr::Polar(rho) => {
                Ok(angular_sum(|th| inner_radial(f, rho(th), split))? / (2.0 * PI))
            }
            Repr::Mask(g) => Ok((0..g.active_count())
                .map(|o| {
                    let (x, y) = g.center(o);
                    f(x.hypot(y)) * g.cell_weight(o)
                })
                .sum()),
        }
    }

    /// Means of the test functions P₁ = G(|x|)x/|x| and P₂ = G(|x|)y/|x|
    /// over the domain; central symmetry forces both to vanish.
    fn p_means(&self, profile: &TestProfile) -> Result<(f64, f64)> {
        match &self.repr {
            Repr::Polar(rho) => {
                let (nodes, weights) = gauss_legendre(ANGULAR_NODES);
                let mut mx = 0.0;
                let mut my = 0.0;
                for p in 0..ANGULAR_PANELS {
                    let a = 2.0 * PI * p as f64 / ANGULAR_PANELS as f64;
                    let b = 2.0 * PI * (p + 1) as f64 / ANGULAR_PANELS as f64;
                    let c = 0.5 * (a + b);
                    let hw = 0.5 * (b - a);
                    for (x, w) in nodes.iter().zip(weights.iter()) {
                        let th = c + hw * x;
                        let j = inner_radial(
                            &|r| profile.g_at(r),
                            rho(th),
                            Some(profile.r_ball),
                        )?;
                        mx += w * hw * th.cos() * j;
                        my += w * hw * th.sin() * j;
                    }
                }
                Ok((mx / (2.0 * PI), my / (2.0 * PI)))
            }
            Repr::Mask(g) => {
                let mut mx = 0.0;
                let mut my = 0.0;
                for o in 0..g.active_count() {
                    let (x, y) = g.center(o);
                    let r = x.hypot(y);
                    if r > 0.0 {
                        let gv = profile.g_at(r) / r;
                        mx += gv * x * g.cell_weight(o);
                        my += gv * y * g.cell_weight(o);
                    }
                }
                Ok((mx, my))
            }
        }
    }

    /// Mask for the eigenvalue evaluation: the stored mask, or a raster of
    /// the polar boundary on a centered grid.
    fn eigen_mask(&self) -> Result<MaskedGrid2D> {
        match &self.repr {
            Repr::Mask(g) => Ok(g.clone()),
            Repr::Polar(rho) => {
                let mut rmax = 0.0_f64;
                for i in 0..512 {
                    rmax = rmax.max(rho(2.0 * PI * (i as f64 + 0.5) / 512.0));
                }
                let half = rmax * 1.02 + 0.02;
                let n = RASTER_CELLS;
                let h = 2.0 * half / n as f64;
                MaskedGrid2D::from_predicate(-half, -half, n, n, h, move |x, y| {
                    x.hypot(y) <= rho(y.atan2(x))
                })
            }
        }
    }
}

/// Numerator and denominator of the Weinberger quotient over a domain.
fn bound_parts(omega: &SymmetricDomain2D, profile: &TestProfile) -> Result<(f64, f64)> {
    let split = Some(profile.r_ball);
    let num = omega.integrate_radial(&|r| profile.ndens_at(r), split)?;
    let den = omega.integrate_radial(&|r| profile.ddens_at(r), split)?;
    Ok((num, den))
}

/// The Weinberger upper bound ∫_Ω N dγ / ∫_Ω D dγ. Requires the domain
/// measure to match the profile's ball measure to 1e−8 (the comparison
/// argument is between sets of equal measure), and equals μ₁(B_R) exactly
/// when Ω is the ball.
pub fn weinberger_bound(omega: &SymmetricDomain2D, profile: &TestProfile) -> Result<f64> {
    if profile.n_dim != 2 {
        return Err(Error::InvalidDomain(
            "planar domain checks need a dimension-2 profile".into(),
        ));
    }
    let ball_measure = 1.0 - (-0.5 * profile.r_ball.powi(2)).exp();
    if (omega.measure() - ball_measure).abs() > 1e-8 {
        return Err(Error::Precondition(format!(
            "measure mismatch: domain {} vs ball {}",
            omega.measure(),
            ball_measure
        )));
    }
    let (num, den) = bound_parts(omega, profile)?;
    Ok(num / den)
}

/// Full verification record for one symmetric domain.
#[derive(Debug, Clone, Serialize)]
pub struct WeinbergerReport {
    pub measure: f64,
    pub r_ball: f64,
    /// μ₁(Ω) from the masked eigensolver (rasterized if polar).
    pub mu1_omega: f64,
    /// The Weinberger quotient over Ω.
    pub bound: f64,
    /// The same quotient over B_R (equals μ₁(B_R) up to quadrature).
    pub mu1_ball_quadrature: f64,
    /// μ₁(B_R) from the radial eigensolver.
    pub mu1_ball_eigen: f64,
    pub numerator_omega: f64,
    pub denominator_omega: f64,
    pub numerator_ball: f64,
    pub denominator_ball: f64,
    pub p_mean_x: f64,
    pub p_mean_y: f64,
    /// Whether the bound is within 1e−9 of μ₁(B_R) (true only when Ω is
    /// the ball up to quadrature resolution).
    pub equality_with_ball: bool,
    pub checks: Vec<Check>,
}

/// Verify the inequality chain μ₁(Ω) ≤ bound ≤ μ₁(B_R) for a symmetric
/// domain, along with the integral comparisons behind the second
/// inequality and the mean-zero property of the test functions. The
/// first inequality carries the masked eigensolver's discretization slack
/// (2% at the default grid); all exact inequalities carry 1e−9.
pub fn szego_weinberger_check(omega: &SymmetricDomain2D, tol: f64) -> Result<WeinbergerReport> {
    let measure = omega.measure();
    if !(measure > 0.0 && measure < 1.0) {
        return Err(Error::InvalidDomain(format!(
            "domain measure {measure} outside (0, 1)"
        )));
    }
    let r_ball = ball_radius_for_measure(2, measure)?;
    let profile = build_profile(2, r_ball, tol)?;
    let (num_o, den_o) = bound_parts(omega, &profile)?;
    let bound = num_o / den_o;
    let ball = SymmetricDomain2D::ball(r_ball)?;
    let (num_b, den_b) = bound_parts(&ball, &profile)?;
    let mu1_ball_quadrature = num_b / den_b;
    let mask = omega.eigen_mask()?;
    let mu1_omega = masked_eigs(&mask, 2, tol)?.eigenvalues[1];
    let (p_mean_x, p_mean_y) = omega.p_means(&profile)?;

    let grid_slack = 0.02 * mu1_omega.abs().max(1.0);
    let checks = vec![
        Check::le(
            "mu1(Omega) <= Weinberger bound (grid slack)",
            mu1_omega,
            bound,
            grid_slack,
        ),
        Check::le("Weinberger bound <= mu1(ball)", bound, mu1_ball_quadrature, 1e-9),
        Check::le(
            "gradient integral at most its ball value",
            num_o,
            num_b,
            1e-9,
        ),
        Check::le(
            "mass integral at least its ball value",
            den_b,
            den_o,
            1e-9,
        ),
        Check::close(
            "ball quadrature reproduces mu1(ball)",
            mu1_ball_quadrature,
            profile.ball_mu1,
            1e-6,
        ),
        Check::close("x test function has zero mean", p_mean_x, 0.0, 1e-8),
        Check::close("y test function has zero mean", p_mean_y, 0.0, 1e-8),
    ];
    Ok(WeinbergerReport {
        measure,
        r_ball,
        mu1_omega,
        bound,
        mu1_ball_quadrature,
        mu1_ball_eigen: profile.ball_mu1,
        numerator_omega: num_o,
        denominator_omega: den_o,
        numerator_ball: num_b,
        denominator_ball: den_b,
        p_mean_x,
        p_mean_y,
        equality_with_ball: mu1_ball_quadrature - bound <= 1e-9,
        checks,
    })
}

fn shape_circle(_: f64) -> f64 {
    1.0
}
fn shape_square(th: f64) -> f64 {
    1.0 / th.cos().abs().max(th.sin().abs())
}
fn shape_star2(th: f64) -> f64 {
    1.0 + 0.3 * (2.0 * th).cos()
}
fn shape_star4(th: f64) -> f64 {
    1.0 + 0.2 * (4.0 * th).cos()
}
fn shape_mix(th: f64) -> f64 {
    1.0 + 0.15 * (2.0 * th).cos() + 0.1 * (4.0 * th).cos()
}
fn shape_ellipse(th: f64) -> f64 {
    1.0 / (th.cos().powi(2) + 2.0 * th.sin().powi(2)).sqrt()
}
fn shape_rect(th: f64) -> f64 {
    1.0 / th.cos().abs().max(2.0 * th.sin().abs())
}

/// Scale a unit polar shape so the domain has Gaussian measure `m`.
fn fit_polar(shape: fn(f64) -> f64, m: f64) -> Result<SymmetricDomain2D> {
    let domain_at = |c: f64| SymmetricDomain2D::polar(move |th| c * shape(th));
    let (mut lo, mut hi) = (0.05_f64, 8.0_f64);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if domain_at(mid)?.measure() < m {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    domain_at(0.5 * (lo + hi))
}

/// Centered annulus mask with inner radius 0.4 and the requested measure.
fn annulus_mask(m: f64) -> Result<SymmetricDomain2D> {
    let inner = 0.4_f64;
    let outer = (-2.0 * ((-0.5 * inner * inner).exp() - m).ln()).sqrt();
    let half = outer * 1.05 + 0.02;
    let n = 104;
    let h = 2.0 * half / n as f64;
    let mask = MaskedGrid2D::from_predicate(-half, -half, n, n, h, move |x, y| {
        let r2 = x * x + y * y;
        r2 > inner * inner && r2 < outer * outer
    })?;
    SymmetricDomain2D::from_mask(mask)
}

/// Catalog of origin-symmetric planar test domains scaled to Gaussian
/// measure `m`. Kinds: `ball` (exact radial construction), `circle`
/// (the same disc built through the fitted-polar route), `square`,
/// `star2` (two-lobe star), `star4` (four-lobe star), `mix` (combined
/// star harmonics), `ellipse` (2:1 axis ratio), `rect` (2:1 rectangle),
/// `annulus` (rasterized, inner radius 0.4).
pub fn named_domain(kind: &str, m: f64) -> Result<SymmetricDomain2D> {
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::InvalidDomain(format!(
            "measure must lie in (0, 1), got {m}"
        )));
    }
    match kind {
        "ball" => SymmetricDomain2D::ball(ball_radius_for_measure(2, m)?),
        "square" => fit_polar(shape_square, m),
        "circle" => fit_polar(shape_circle, m),
        "star2" => fit_polar(shape_star2, m),
        "star4" => fit_polar(shape_star4, m),
        "mix" => fit_polar(shape_mix, m),
        "ellipse" => fit_polar(shape_ellipse, m),
        "rect" => fit_polar(shape_rect, m),
        "annulus" => annulus_mask(m),
        other => Err(Error::InvalidDomain(format!(
            "unknown domain kind {other:?}; expected one of ball, circle, \
             square, star2, star4, mix, ellipse, rect, annulus"
        ))),
    }
}
