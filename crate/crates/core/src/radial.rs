//! Radial eigenproblems on centered balls `B_R ⊂ ℝᴺ` under γ_N. The
//! separated equation for angular index k is
//!
//! ```text
//! f″ + ((N−1)/r − r)·f′ + (μ − k̄/r²)·f = 0,   k̄ = k(k + N − 2),
//! ```
//!
//! with `f′(0) = 0` for k = 0 and `f(0) = 0` for k ≥ 1, and Neumann or
//! Dirichlet data at r = R. The k = 0 branch gives the purely radial
//! eigenvalues τ_n(R); the k = 1 branch gives the angular family ν_n(R),
//! whose ground value is μ₁(B_R). Integration launches from a two-term
//! series at a small start radius, avoiding the origin singularity.

use crate::error::{Error, Result};
use crate::measure::gauss_ball_normalizer;
use crate::sampled::SampledFunction;
use crate::shooting::{Bc, Coeffs, ShootProblem};
use crate::sturm1d::EigenResult;

/// Start radius for the series launch.
const R_START: f64 = 1e-4;

/// A ball eigenproblem: dimension, angular index, radius (∞ allowed),
/// boundary condition at the outer radius.
#[derive(Debug, Clone, Copy)]
pub struct RadialProblem {
    pub n: usize,
    pub k: usize,
    pub r: f64,
    pub bc: Bc,
}

/// Shape derivative of a purely radial Neumann eigenvalue τ under
/// `R ↦ R + t`, with its finite-difference check.
#[derive(Debug, Clone, Copy)]
pub struct ShapeDerivativeRadial {
    /// `−c_N·τ·f(R)²·R^{N−1}·e^{−R²/2}` with `c_N = Nω_N/(2π)^{N/2}` and
    /// f normalized by `c_N ∫ f² r^{N−1} e^{−r²/2} dr = 1`.
    pub formula: f64,
    /// Central finite difference of τ(R) at step 1e−3.
    pub fd: f64,
}

impl RadialProblem {
    fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidDomain("dimension must be >= 1".into()));
        }
        if !(self.r > R_START * 8.0) {
            return Err(Error::InvalidDomain(format!("radius {} too small", self.r)));
        }
        Ok(())
    }

    /// Truncation radius standing in for R = ∞.
    fn effective_radius(&self) -> f64 {
        if self.r == f64::INFINITY {
            12.0_f64.max((self.n as f64).sqrt() + 6.0)
        } else {
            self.r
        }
    }

    fn kbar(&self) -> f64 {
        // k(k + N − 2) in floats: N = 1, k = 0 would underflow in usize.
        let kf = self.k as f64;
        kf * (kf + self.n as f64 - 2.0)
    }

    fn with_problem<T>(
        &self,
        r_out: f64,
        f: impl FnOnce(&ShootProblem) -> Result<T>,
    ) -> Result<T> {
        let nf = self.n as f64;
        let kf = self.k as f64;
        let kbar = self.kbar();
        let drift = move |r: f64| (nf - 1.0) / r - r;
        let potential = move |r: f64| kbar / (r * r);
        let c_n = gauss_ball_normalizer(self.n);
        let weight = move |r: f64| c_n * r.powf(nf - 1.0) * (-0.5 * r * r).exp();
        // Two-term series f = r^k(1 + c₂r²), c₂ = (k − μ)/(2(2k + N)),
        // turned into a starting phase at R_START; the common factor
        // r^{k−1} cancels inside atan2.
        let theta_start = move |mu: f64| {
            let c2 = (kf - mu) / (2.0 * (2.0 * kf + nf));
            let r0 = R_START;
            if kf == 0.0 {
                f64::atan2(1.0 + c2 * r0 * r0, 2.0 * c2 * r0)
            } else {
                f64::atan2(r0 * (1.0 + c2 * r0 * r0), kf + (kf + 2.0) * c2 * r0 * r0)
            }
        };
        let p = ShootProblem {
            coeffs: Coeffs { drift: &drift, potential: &potential, weight: &weight },
            x0: R_START,
            x1: r_out,
            theta_start: &theta_start,
            bc_right: self.bc,
        };
        f(&p)
    }
}

/// First `count` eigenvalues of the branch, with sampled radial profiles
/// normalized to unit L²(B_R, γ_N) radial norm; node locations of each
/// profile are reported as diagnostics.
pub fn radial_eigs(p: &RadialProblem, count: usize, tol: f64) -> Result<Vec<EigenResult>> {
    radial_eigs_opts(p, count, tol, None, 1201)
}

/// [`radial_eigs`] with an explicit truncation radius override (for
/// truncation-robustness tests) and sample count.
pub fn radial_eigs_opts(
    p: &RadialProblem,
    count: usize,
    tol: f64,
    trunc_override: Option<f64>,
    samples: usize,
) -> Result<Vec<EigenResult>> {
    p.validate()?;
    if count == 0 {
        return Err(Error::InvalidDomain("count must be at least 1".into()));
    }
    let r_out = trunc_override.unwrap_or_else(|| p.effective_radius());
    p.with_problem(r_out, |sp| {
        let mut out = Vec::with_capacity(count);
        for n in 0..count {
            let sol = sp.solve_index(n, tol)?;
            let (f, node_locations) = sp.sample_eigenfunction(sol.value, samples)?;
            out.push(EigenResult {
                value: sol.value,
                eigenfunction: f,
                nodes: node_locations.len(),
                node_locations,
                bracket: sol.bracket,
            });
        }
        Ok(out)
    })
}

/// Eigenvalue only, `index`-th of the branch.
pub fn radial_value(p: &RadialProblem, index: usize, tol: f64) -> Result<f64> {
    p.validate()?;
    p.with_problem(p.effective_radius(), |sp| Ok(sp.solve_index(index, tol)?.value))
}

/// First angular eigenvalue ν₁(R): ground value of the k = 1 Neumann
/// branch.
pub fn nu1(n: usize, r: f64, tol: f64) -> Result<f64> {
    radial_value(&RadialProblem { n, k: 1, r, bc: Bc::Neumann }, 0, tol)
}

/// First nontrivial purely radial Neumann eigenvalue τ₁(R): index 1 of
/// the k = 0 branch (index 0 is the constant, eigenvalue 0).
pub fn tau1(n: usize, r: f64, tol: f64) -> Result<f64> {
    radial_value(&RadialProblem { n, k: 0, r, bc: Bc::Neumann }, 1, tol)
}

/// μ₁ of the ball `B_R`: the angular ground value ν₁(R) together with its
/// radial profile w. The selection is re-verified at runtime: ν₁ must lie
/// strictly below both the first nontrivial radial eigenvalue τ₁(R) and
/// the ground value of the k = 2 branch; a violation is a hard error, not
/// a silent assumption.
pub fn mu1_ball(n: usize, r: f64, tol: f64) -> Result<(f64, SampledFunction)> {
    if n < 2 {
        return Err(Error::InvalidDomain("mu1_ball needs dimension >= 2".into()));
    }
    let angular = radial_eigs(&RadialProblem { n, k: 1, r, bc: Bc::Neumann }, 1, tol)?;
    let nu = angular[0].value;
    let tau = tau1(n, r, tol)?;
    if !(nu < tau) {
        return Err(Error::Precondition(format!(
            "branch ordering violated at N={n}, R={r}: nu1 = {nu} >= tau1 = {tau}"
        )));
    }
    let k2 = radial_value(&RadialProblem { n, k: 2, r, bc: Bc::Neumann }, 0, tol)?;
    if !(nu < k2) {
        return Err(Error::Precondition(format!(
            "branch ordering violated at N={n}, R={r}: nu1 = {nu} >= k=2 ground {k2}"
        )));
    }
    Ok((nu, angular.into_iter().next().expect("one result").eigenfunction))
}

/// Shape derivative of the `index`-th nontrivial purely radial Neumann
/// eigenvalue τ_index(R) (index ≥ 1) under `R ↦ R + t`, with the central
/// finite difference alongside. Both are strictly negative: radial
/// Neumann eigenvalues decrease as the ball grows.
pub fn shape_derivative_radial(
    n: usize,
    r: f64,
    index: usize,
    tol: f64,
) -> Result<ShapeDerivativeRadial> {
    if index == 0 {
        return Err(Error::InvalidDomain(
            "index 0 is the constant mode; its derivative is trivially 0".into(),
        ));
    }
    if !r.is_finite() {
        return Err(Error::InvalidDomain("shape derivative needs a finite radius".into()));
    }
    let p = RadialProblem { n, k: 0, r, bc: Bc::Neumann };
    let res = radial_eigs(&p, index + 1, tol)?;
    let tau = res[index].value;
    let f_r = res[index].eigenfunction.eval(r);
    let c_n = gauss_ball_normalizer(n);
    let formula = -c_n * tau * f_r * f_r * r.powf(n as f64 - 1.0) * (-0.5 * r * r).exp();
    let h = 1e-3;
    let up = radial_value(&RadialProblem { n, k: 0, r: r + h, bc: Bc::Neumann }, index, tol)?;
    let dn = radial_value(&RadialProblem { n, k: 0, r: r - h, bc: Bc::Neumann }, index, tol)?;
    Ok(ShapeDerivativeRadial { formula, fd: (up - dn) / (2.0 * h) })
}
