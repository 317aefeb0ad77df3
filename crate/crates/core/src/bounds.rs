//! Elementary bound functions k(R) and h(R) for the angular-vs-radial
//! eigenvalue comparison on balls, the split radius R̄, and the full
//! inequality chain assembled per radius regime.
//!
//! k(R) is a Rayleigh-type upper bound for the first angular eigenvalue
//! ν₁(R); h(R) is a vibrating-string lower bound for the first nontrivial
//! radial eigenvalue τ₁(R), defined for R > √(N−1) and valid when the
//! zero of the τ₁ eigenfunction lies right of √(N−1) (otherwise the
//! small-radius convexity argument already applies). Both are strictly
//! decreasing. The chain `ν₁ < k ≤ (anchor) ≤ h < τ₁` closes with
//! different anchors in three radius regimes, splitting once more inside
//! the middle regime (at R̄ for N = 2, at √(N+2) for N ≥ 3).

use crate::error::{Error, Result};
use crate::report::Check;
use crate::special::{gauss_weight, quad};
use serde::Serialize;
use std::f64::consts::PI;

/// Radius regime relative to √(N−1) and √(N−1) + π/√8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    J1,
    J2,
    J3,
}

/// The evaluated bounds and the per-link verdicts of the chain at (N, R).
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub r: f64,
    pub k_val: f64,
    /// `None` when R ≤ √(N−1), where h is undefined.
    pub h_val: Option<f64>,
    pub regime: Regime,
    pub links: Vec<Check>,
    pub chain_ok: bool,
}

/// `k(R) = N·∫₀ᴿ e^{−s²/2} s^{N−1} ds / ∫₀ᴿ e^{−s²/2} s^{N+1} ds`,
/// strictly decreasing in R with k(R) → 1 as R → ∞ (in dimension 2).
pub fn k_bound(n: usize, r: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidDomain("k bound needs dimension >= 2".into()));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidDomain(format!("k bound needs finite R > 0, got {r}")));
    }
    let nf = n as f64;
    let num = quad(|s| gauss_weight(s) * s.powf(nf - 1.0), 0.0, r, 1e-12)?;
    let den = quad(|s| gauss_weight(s) * s.powf(nf + 1.0), 0.0, r, 1e-12)?;
    Ok(nf * num / den)
}

/// `h(R) = π² / (4(R − √(N−1))²)` on R > √(N−1), strictly decreasing.
pub fn h_bound(n: usize, r: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidDomain("h bound needs dimension >= 2".into()));
    }
    let root = ((n - 1) as f64).sqrt();
    if !(r > root) {
        return Err(Error::InvalidDomain(format!(
            "h bound defined only for R > sqrt(N-1) = {root}, got {r}"
        )));
    }
    Ok(PI * PI / (4.0 * (r - root) * (r - root)))
}

/// The unique positive root R̄ of `t² + 1 − e^{t²/2}`; equivalently, the
/// radius where k (dimension 2) crosses the value 2. Bisection on the
/// sign-certified bracket [1, 2].
pub fn rbar() -> f64 {
    let f = |t: f64| t * t + 1.0 - (0.5 * t * t).exp();
    let (mut lo, mut hi) = (1.0_f64, 2.0_f64);
    debug_assert!(f(lo) > 0.0 && f(hi) < 0.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Which segment of the chain applies at radius R: at or below √(N−1),
/// within π/√8 above it, or beyond.
pub fn regime_of(n: usize, r: f64) -> Regime {
    let root = ((n - 1) as f64).sqrt();
    if r <= root {
        Regime::J1
    } else if r <= root + PI / 8.0_f64.sqrt() {
        Regime::J2
    } else {
        Regime::J3
    }
}

/// Evaluate every applicable link of the comparison chain at (N, R),
/// given the solved eigenvalues ν₁(R) and τ₁(R). Strict links demand
/// slack > 1e−10; non-strict links tolerate −1e−10.
///
/// `tau1_node` is the interior zero of the τ₁ eigenfunction when known.
/// The middle-regime comparison `h(R) < τ₁(R)` only holds — and is only
/// needed — when that zero lies right of √(N−1); when it sits at or left
/// of √(N−1) the convexity argument of the small-radius regime applies
/// instead, so the link records that case and skips the h comparison.
/// With no node supplied the h comparison is demanded unconditionally.
pub fn lemma_chain(
    n: usize,
    r: f64,
    nu1: f64,
    tau1: f64,
    tau1_node: Option<f64>,
) -> Result<BoundsReport> {
    const STRICT: f64 = 1e-10;
    const SLACK: f64 = 1e-10;
    let k_val = k_bound(n, r)?;
    let regime = regime_of(n, r);
    let h_val = match regime {
        Regime::J1 => None,
        _ => Some(h_bound(n, r)?),
    };
    let mut links = vec![
        Check::lt("nu1(R) < tau1(R)", nu1, tau1, STRICT),
        Check::le("nu1(R) <= k(R)", nu1, k_val, SLACK),
    ];
    match regime {
        Regime::J1 => {}
        Regime::J2 => {
            let h = h_val.expect("defined in J2");
            let root = ((n - 1) as f64).sqrt();
            match tau1_node {
                Some(r0) if r0 <= root + 1e-9 => links.push(Check::le(
                    "tau1 node at or left of sqrt(N-1): direct case, h not needed",
                    r0,
                    root,
                    1e-9,
                )),
                _ => links.push(Check::lt("h(R) < tau1(R)", h, tau1, STRICT)),
            }
            let nf = n as f64;
            if n == 2 {
                let rb = rbar();
                if r < rb {
                    let k1 = k_bound(2, 1.0)?;
                    let h_rb = h_bound(2, rb)?;
                    links.push(Check::le("k(R) <= k(sqrt(N-1))", k_val, k1, SLACK));
                    links.push(Check::lt("k(sqrt(N-1)) < h(rbar)", k1, h_rb, STRICT));
                    links.push(Check::le("h(rbar) <= h(R)", h_rb, h, SLACK));
                } else {
                    // k(rbar) = 2 exactly (the defining property of R̄)
                    // and h at the right end of the regime is exactly 2.
                    let k_rb = k_bound(2, rb)?;
                    let h_end = h_bound(2, 1.0 + PI / 8.0_f64.sqrt())?;
                    links.push(Check::le("k(R) <= k(rbar)", k_val, k_rb, SLACK));
                    links.push(Check::close("k(rbar) = 2", k_rb, 2.0, 1e-9));
                    links.push(Check::close("h(J2 right endpoint) = 2", h_end, 2.0, 1e-12));
                    links.push(Check::le("2 <= h(R)", 2.0, h, SLACK));
                }
            } else {
                let split = (nf + 2.0).sqrt();
                if r < split {
                    let k_left = k_bound(n, (nf - 1.0).sqrt())?;
                    let anchor = (2.0 * nf + 1.0) / (nf - 1.0);
                    let h_split = h_bound(n, split)?;
                    links.push(Check::le("k(R) <= k(sqrt(N-1))", k_val, k_left, SLACK));
                    links.push(Check::le("k(sqrt(N-1)) <= (2N+1)/(N-1)", k_left, anchor, SLACK));
                    links.push(Check::lt("(2N+1)/(N-1) < h(sqrt(N+2))", anchor, h_split, STRICT));
                    links.push(Check::le("h(sqrt(N+2)) <= h(R)", h_split, h, SLACK));
                } else {
                    let k_split = k_bound(n, split)?;
                    let h_end = h_bound(n, (nf - 1.0).sqrt() + PI / 8.0_f64.sqrt())?;
                    links.push(Check::le("k(R) <= k(sqrt(N+2))", k_val, k_split, SLACK));
                    links.push(Check::le("k(sqrt(N+2)) <= 2", k_split, 2.0, SLACK));
                    links.push(Check::close("h(J2 right endpoint) = 2", h_end, 2.0, 1e-12));
                    links.push(Check::le("2 <= h(R)", 2.0, h, SLACK));
                }
            }
        }
        Regime::J3 => {
            let nf = n as f64;
            let k_split = k_bound(n, (nf + 2.0).sqrt())?;
            links.push(Check::le("k(R) <= k(sqrt(N+2))", k_val, k_split, SLACK));
            links.push(Check::le("k(sqrt(N+2)) <= 2", k_split, 2.0, SLACK));
            links.push(Check::lt("tau1(R) > 2", 2.0, tau1, STRICT));
        }
    }
    let chain_ok = links.iter().all(|c| c.pass);
    Ok(BoundsReport { n, r, k_val, h_val, regime, links, chain_ok })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_at_radius_one_matches_closed_form() {
        // N=2 antiderivatives: ∫₀¹ e^{−t²/2} t dt = 1 − e^{−1/2} and
        // ∫₀¹ e^{−t²/2} t³ dt = 2 − 3e^{−1/2}.
        let k = k_bound(2, 1.0).unwrap();
        let e = (-0.5_f64).exp();
        let exact = (2.0 - 2.0 * e) / (2.0 - 3.0 * e);
        assert!((k - exact).abs() < 1e-9, "k(1) = {k} vs {exact}");
        assert!((exact - 4.361_993_867_092_269).abs() < 1e-12);
        assert!((k - 4.362).abs() < 5e-4, "3-decimal reference");
    }

    #[test]
    fn k_limit_and_monotonicity() {
        // k(R) → 1 from above as R grows (dimension 2).
        let k_big = k_bound(2, 8.0).unwrap();
        assert!((k_big - 1.0).abs() < 1e-9, "k(8) = {k_big}");
        for n in [2usize, 3, 7] {
            let mut prev = f64::INFINITY;
            for i in 1..=100 {
                let r = 0.05 + 4.0 * i as f64 / 100.0;
                let k = k_bound(n, r).unwrap();
                assert!(k < prev, "k not decreasing at N={n}, R={r}");
                prev = k;
            }
        }
    }

    #[test]
    fn h_values_and_monotonicity() {
        let rb = rbar();
        assert!((h_bound(2, rb).unwrap() - 7.204_926_222_518_916).abs() < 1e-9);
        // The commonly quoted 3-decimal value 7.210 corresponds to the
        // root itself rounded to 3 decimals before evaluating h.
        assert!((h_bound(2, 1.585).unwrap() - 7.210).abs() < 5e-4);
        assert!((h_bound(2, 1.585).unwrap() - 7.209_879_758_265_293).abs() < 1e-12);
        // h at the right endpoint of the middle regime is exactly 2.
        let h_end = h_bound(2, 1.0 + PI / 8.0_f64.sqrt()).unwrap();
        assert!((h_end - 2.0).abs() < 1e-12);
        // Direct-arithmetic cross-check in dimension 3 at R = √5.
        let h = h_bound(3, 5.0_f64.sqrt()).unwrap();
        let d = 5.0_f64.sqrt() - 2.0_f64.sqrt();
        assert!((h - PI * PI / (4.0 * d * d)).abs() < 1e-12);
        assert!((h - 3.653_002_495_337_619).abs() < 1e-12);
        let mut prev = f64::INFINITY;
        for i in 1..=100 {
            let r = 1.01 + 3.0 * i as f64 / 100.0;
            let h = h_bound(2, r).unwrap();
            assert!(h < prev, "h not decreasing at R={r}");
            prev = h;
        }
        assert!(h_bound(2, 0.9).is_err());
    }

    #[test]
    fn rbar_root_properties() {
        let f = |t: f64| t * t + 1.0 - (0.5 * t * t).exp();
        // Bracket certificate: f(1) = 2 − √e > 0, f(2) = 5 − e² < 0.
        assert!(f(1.0) > 0.0 && f(2.0) < 0.0);
        let rb = rbar();
        assert!(f(rb).abs() < 1e-11, "f(rbar) = {}", f(rb));
        assert!((rb - 1.585_201_065_244_513).abs() < 1e-11);
        assert!((rb - 1.585).abs() < 5e-4, "3-decimal reference");
        // k crosses 2 exactly at the root (dimension 2).
        assert!((k_bound(2, rb).unwrap() - 2.0).abs() < 1e-9);
        // The alternate exponential display (2−2e^{−t/2})/(2−3e^{−t/2})
        // evaluates near 1.705 at the root; it is not the k function.
        let alt = (2.0 - 2.0 * (-rb / 2.0).exp()) / (2.0 - 3.0 * (-rb / 2.0).exp());
        assert!((alt - 1.705_085_469_454_961).abs() < 1e-10);
        assert!((alt - 1.705).abs() < 5e-4);
    }

    #[test]
    fn anchor_inequalities_across_dimensions() {
        // k(√(N−1)) ≤ (2N+1)/(N−1) for N = 3..12.
        for n in 3..=12usize {
            let nf = n as f64;
            let k = k_bound(n, (nf - 1.0).sqrt()).unwrap();
            assert!(k <= (2.0 * nf + 1.0) / (nf - 1.0) + 1e-10, "N={n}: k={k}");
        }
        // k(√(N+2)) ≤ 2 for N = 2..12.
        for n in 2..=12usize {
            let k = k_bound(n, ((n + 2) as f64).sqrt()).unwrap();
            assert!(k <= 2.0 + 1e-10, "N={n}: k={k}");
        }
        // (2N+1)/(N−1) < h(√(N+2)) for N = 3..12 — and the N = 2 case
        // genuinely fails, which is why the dimension-2 chain splits at
        // the root R̄ instead.
        for n in 3..=12usize {
            let nf = n as f64;
            let lhs = (2.0 * nf + 1.0) / (nf - 1.0);
            let rhs = h_bound(n, (nf + 2.0).sqrt()).unwrap();
            assert!(lhs < rhs, "N={n}: {lhs} !< {rhs}");
        }
        let lhs2 = (2.0 * 2.0_f64 + 1.0) / (2.0 - 1.0);
        let rhs2 = h_bound(2, 2.0_f64).unwrap();
        assert!(lhs2 >= rhs2, "the dimension-2 failure must reproduce: {lhs2} vs {rhs2}");
        // Monotonicity of the two sequences over N = 3..12.
        for n in 3..=11usize {
            let nf = n as f64;
            let a = |m: f64| (2.0 * m + 1.0) / (m - 1.0);
            assert!(a(nf + 1.0) < a(nf));
            let h = |m: f64| h_bound(m as usize, (m + 2.0).sqrt()).unwrap();
            assert!(h(nf + 1.0) > h(nf));
        }
    }

    #[test]
    fn chain_regime_dispatch() {
        // J1: only the universal links (h undefined).
        let rep = lemma_chain(2, 0.5, 8.0, 20.0, None).unwrap();
        assert_eq!(rep.regime, Regime::J1);
        assert!(rep.h_val.is_none());
        assert_eq!(rep.links.len(), 2);
        // J2 needs plausible eigenvalues to pass; feed k/h-consistent ones.
        let rep = lemma_chain(2, 1.2, 3.0, 11.0, None).unwrap();
        assert_eq!(rep.regime, Regime::J2);
        assert!(rep.h_val.is_some());
        assert!(rep.links.len() > 3);
        // J3 includes the asymptotic link τ₁ > 2 (N=5: J3 starts at
        // 2 + π/√8 ≈ 3.11).
        let rep = lemma_chain(5, 3.2, 1.05, 2.4, None).unwrap();
        assert_eq!(rep.regime, Regime::J3);
        assert!(rep.links.iter().any(|c| c.name == "tau1(R) > 2"));
        // A violated chain reports chain_ok = false rather than erroring.
        let rep = lemma_chain(2, 1.2, 12.0, 11.0, None).unwrap();
        assert!(!rep.chain_ok);
    }

    #[test]
    fn middle_regime_h_comparison_is_conditional_on_the_node() {
        // Just right of √(N−1), h(R) blows up while τ₁ stays finite, so
        // the h link can only be demanded when the τ₁ node sits right of
        // √(N−1); with the node at or left of the root the chain must
        // close without it.
        let (r, nu, tau) = (1.05, 3.9, 12.0);
        assert!(h_bound(2, r).unwrap() > tau);
        let rep = lemma_chain(2, r, nu, tau, Some(0.8)).unwrap();
        assert!(rep.chain_ok, "direct case should close: {:?}", rep.links);
        let rep = lemma_chain(2, r, nu, tau, Some(1.3)).unwrap();
        assert!(!rep.chain_ok, "h comparison must be demanded and fail");
        let rep = lemma_chain(2, r, nu, tau, None).unwrap();
        assert!(!rep.chain_ok, "unknown node falls back to the h comparison");
    }
}
