//! Gaussian measure and Gaussian perimeter of the supported domain zoo
//! (intervals, half-lines, balls, half-spaces, rectangles), the
//! measure-preserving second-endpoint map `b_of_a`, and half-space
//! rearrangement of a measure value.

use crate::error::{Error, Result};
use crate::special::{
    self, erf, erfinv, gamma, gauss_density, gauss_weight, phi, phi_inverse, SQRT_2,
};

/// An extended-real open interval `(a, b)`, the domain of every 1D
/// eigenproblem. Endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval1D {
    a: f64,
    b: f64,
}

impl Interval1D {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_nan() || b.is_nan() || !(a < b) {
            return Err(Error::InvalidDomain(format!("interval needs a < b, got ({a}, {b})")));
        }
        Ok(Interval1D { a, b })
    }

    pub fn whole_line() -> Self {
        Interval1D { a: f64::NEG_INFINITY, b: f64::INFINITY }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn is_bounded(&self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }

    /// γ₁ measure `Φ(a) − Φ(b)`.
    pub fn gauss_measure(&self) -> f64 {
        phi(self.a) - phi(self.b)
    }

    /// Gaussian perimeter: density at each finite endpoint (an infinite
    /// endpoint contributes 0, forced analytically by the decay of the
    /// density — `gauss_density(±∞)` evaluates to exactly 0).
    pub fn gauss_perimeter(&self) -> f64 {
        gauss_density(self.a) + gauss_density(self.b)
    }
}

/// A domain with computable Gaussian measure and perimeter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Interval(Interval1D),
    /// Centered ball of radius `r` in dimension `n`.
    Ball { n: usize, r: f64 },
    /// `{x : x₁ > c}` in dimension `n`.
    HalfSpace { n: usize, c: f64 },
    Rectangle(Interval1D, Interval1D),
}

impl Domain {
    fn validate(&self) -> Result<()> {
        match *self {
            Domain::Ball { n, r } => {
                if n < 1 {
                    return Err(Error::InvalidDomain("ball dimension must be >= 1".into()));
                }
                if !(r > 0.0) || !r.is_finite() {
                    return Err(Error::InvalidDomain(format!("ball radius must be positive, got {r}")));
                }
            }
            Domain::HalfSpace { n, c } => {
                if n < 1 {
                    return Err(Error::InvalidDomain("half-space dimension must be >= 1".into()));
                }
                if c.is_nan() {
                    return Err(Error::InvalidDomain("half-space threshold is NaN".into()));
                }
            }
            Domain::Interval(_) | Domain::Rectangle(..) => {}
        }
        Ok(())
    }
}

/// Volume `ω_N = π^{N/2} / Γ(N/2 + 1)` of the Euclidean unit ball.
pub fn unit_ball_volume(n: usize) -> f64 {
    let nf = n as f64;
    std::f64::consts::PI.powf(nf / 2.0) / gamma(nf / 2.0 + 1.0).expect("positive argument")
}

/// Normalizer `c_N = N ω_N / (2π)^{N/2}`: the γ_N measure of the ball B_R
/// is `c_N ∫₀ᴿ e^{−s²/2} s^{N−1} ds` and its perimeter is
/// `c_N R^{N−1} e^{−R²/2}`.
pub fn gauss_ball_normalizer(n: usize) -> f64 {
    let nf = n as f64;
    nf * unit_ball_volume(n) / (2.0 * std::f64::consts::PI).powf(nf / 2.0)
}

/// Gaussian measure γ_N of a domain, in (0, 1].
pub fn gauss_measure(d: &Domain) -> Result<f64> {
    d.validate()?;
    Ok(match *d {
        Domain::Interval(iv) => iv.gauss_measure(),
        Domain::Ball { n, r } => {
            let nf = n as f64;
            gauss_ball_normalizer(n)
                * special::quad(|s| gauss_weight(s) * s.powf(nf - 1.0), 0.0, r, 1e-12)?
        }
        Domain::HalfSpace { c, .. } => phi(c),
        Domain::Rectangle(ix, iy) => ix.gauss_measure() * iy.gauss_measure(),
    })
}

/// Gaussian perimeter: the boundary integral of the Gaussian density.
pub fn gauss_perimeter(d: &Domain) -> Result<f64> {
    d.validate()?;
    Ok(match *d {
        Domain::Interval(iv) => iv.gauss_perimeter(),
        Domain::Ball { n, r } => {
            gauss_ball_normalizer(n) * r.powf(n as f64 - 1.0) * gauss_weight(r)
        }
        Domain::HalfSpace { c, .. } => gauss_density(c),
        Domain::Rectangle(ix, iy) => {
            ix.gauss_perimeter() * iy.gauss_measure() + iy.gauss_perimeter() * ix.gauss_measure()
        }
    })
}

/// Second endpoint of the measure-`L` interval starting at `a`:
/// `b(a) = √2·erfinv(2L + erf(a/√2))`, so `γ₁((a, b(a))) = L`.
///
/// `a = −∞` is allowed and yields the half-line limit `√2·erfinv(2L − 1)`.
pub fn b_of_a(a: f64, l: f64) -> Result<f64> {
    if !(0.0 < l && l < 1.0) {
        return Err(Error::InvalidDomain(format!("measure L must lie in (0,1), got {l}")));
    }
    if a.is_nan() || a == f64::INFINITY {
        return Err(Error::InvalidDomain(format!("left endpoint {a} invalid")));
    }
    let p = 2.0 * l + erf(a / SQRT_2);
    if p >= 1.0 {
        return Err(Error::InvalidDomain(format!(
            "no finite b: interval ({a}, ·) cannot reach measure {l}"
        )));
    }
    Ok(SQRT_2 * erfinv(p)?)
}

/// The half-space `{x₁ > Φ⁻¹(m)}` with Gaussian measure `m`: the
/// rearranged domain of any set of measure `m`.
pub fn half_space_rearranged(m: f64) -> Result<Domain> {
    if !(0.0 < m && m < 1.0) {
        return Err(Error::InvalidDomain(format!("measure must lie in (0,1), got {m}")));
    }
    Ok(Domain::HalfSpace { n: 1, c: phi_inverse(m)? })
}

/// Radius of the centered ball in dimension `n` with Gaussian measure `m`.
/// For N = 2 the closed form `R = √(−2 ln(1−m))` applies; other dimensions
/// solve the measure equation by bisection.
pub fn ball_radius_for_measure(n: usize, m: f64) -> Result<f64> {
    if !(0.0 < m && m < 1.0) {
        return Err(Error::InvalidDomain(format!("measure must lie in (0,1), got {m}")));
    }
    if n == 2 {
        return Ok((-2.0 * (1.0 - m).ln()).sqrt());
    }
    let f = |r: f64| -> Result<f64> { Ok(gauss_measure(&Domain::Ball { n, r })? - m) };
    let (mut lo, mut hi) = (1e-8, 1.0);
    while f(hi)? < 0.0 {
        hi *= 2.0;
        if hi > 64.0 {
            return Err(Error::NoConvergence("ball radius bracket expansion failed".into()));
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn interval_measures() {
        let half = Interval1D::new(0.0, f64::INFINITY).unwrap();
        assert!((half.gauss_measure() - 0.5).abs() < 1e-15);
        assert_eq!(Interval1D::whole_line().gauss_measure(), 1.0);
        assert!(Interval1D::new(1.0, 1.0).is_err());
        assert!(Interval1D::new(2.0, 1.0).is_err());
    }

    #[test]
    fn ball_measure_matches_dimension_two_closed_form() {
        // N=2 antiderivative: c₂ = 1 and ∫₀ᴿ s e^{−s²/2} ds = 1 − e^{−R²/2}.
        let m = gauss_measure(&Domain::Ball { n: 2, r: 1.0 }).unwrap();
        let exact = 1.0 - (-0.5_f64).exp();
        assert!((m - exact).abs() < 1e-12);
        assert!((exact - 0.393_469_340_287_366_6).abs() < 1e-15);
        for &r in &[0.4, 1.3, 2.7] {
            let m = gauss_measure(&Domain::Ball { n: 2, r }).unwrap();
            assert!((m - (1.0 - (-0.5 * r * r).exp())).abs() < 1e-12);
        }
    }

    #[test]
    fn ball_normalizer_small_dimensions() {
        // ω₁ = 2, ω₂ = π, ω₃ = 4π/3 via the half-integer gamma oracle.
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-13);
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-12);
        assert!((unit_ball_volume(3) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
        assert!((gauss_ball_normalizer(2) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn perimeter_formulas() {
        let p = gauss_perimeter(&Domain::Interval(Interval1D::new(0.0, f64::INFINITY).unwrap()))
            .unwrap();
        assert!((p - 1.0 / special::SQRT_2PI).abs() < 1e-15);
        let p = gauss_perimeter(&Domain::HalfSpace { n: 2, c: 0.0 }).unwrap();
        assert!((p - 1.0 / special::SQRT_2PI).abs() < 1e-15);
        let p = gauss_perimeter(&Domain::Interval(Interval1D::new(-1.0, 1.0).unwrap())).unwrap();
        let exact = 2.0 * (-0.5_f64).exp() / special::SQRT_2PI;
        assert!((p - exact).abs() < 1e-15);
        assert!((exact - 0.483_941_449_038_286_7).abs() < 1e-15);
        // Quadrature oracle for the same boundary integral: density at the
        // two endpoints as limits of shrinking-window averages.
        let window = 1e-6;
        let q: f64 = [-1.0, 1.0]
            .iter()
            .map(|&e| {
                special::quad(gauss_density, e - window, e + window, 1e-16).unwrap() / (2.0 * window)
            })
            .sum();
        assert!((p - q).abs() < 1e-9);
    }

    #[test]
    fn ball_perimeter_matches_measure_derivative() {
        // d/dR measure(B_R) = perimeter(B_R); central difference oracle.
        for &(n, r) in &[(2usize, 1.0), (3, 1.4), (5, 2.0)] {
            let h = 1e-5;
            let dm = (gauss_measure(&Domain::Ball { n, r: r + h }).unwrap()
                - gauss_measure(&Domain::Ball { n, r: r - h }).unwrap())
                / (2.0 * h);
            let p = gauss_perimeter(&Domain::Ball { n, r }).unwrap();
            assert!((dm - p).abs() < 1e-8, "N={n} R={r}: {dm} vs {p}");
        }
    }

    #[test]
    fn b_of_a_symmetric_and_half_line_limits() {
        for &l in &[0.2, 0.5, 0.8] {
            let a_sym = -SQRT_2 * erfinv(l).unwrap();
            let b = b_of_a(a_sym, l).unwrap();
            assert!((b + a_sym).abs() < 1e-12, "symmetric interval for L={l}");
            let b_inf = b_of_a(f64::NEG_INFINITY, l).unwrap();
            assert!((b_inf - SQRT_2 * erfinv(2.0 * l - 1.0).unwrap()).abs() < 1e-12);
        }
        let b = b_of_a(0.0, 0.3).unwrap();
        assert!((b - 0.841_621_233_572_914_3).abs() < 1e-12);
        let m = Interval1D::new(0.0, b).unwrap().gauss_measure();
        assert!((m - 0.3).abs() < 1e-12);
        assert!(b_of_a(2.0, 0.9).is_err());
        assert!(b_of_a(0.0, 1.2).is_err());
    }

    #[test]
    fn b_of_a_preserves_measure_on_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..300 {
            let l: f64 = rng.gen_range(0.05..0.95);
            let a_max = SQRT_2 * erfinv(1.0 - 2.0 * l).unwrap();
            let a = a_max - rng.gen_range(0.01..5.0);
            let b = b_of_a(a, l).unwrap();
            let m = Interval1D::new(a, b).unwrap().gauss_measure();
            assert!((m - l).abs() < 1e-10, "a={a} L={l}: measure {m}");
        }
    }

    #[test]
    fn half_space_rearranged_thresholds() {
        match half_space_rearranged(0.5).unwrap() {
            Domain::HalfSpace { c, .. } => assert_eq!(c, 0.0),
            other => panic!("unexpected {other:?}"),
        }
        match half_space_rearranged(phi(1.0)).unwrap() {
            Domain::HalfSpace { c, .. } => assert!((c - 1.0).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        match half_space_rearranged(0.25).unwrap() {
            Domain::HalfSpace { c, .. } => {
                assert!((c - 0.674_489_750_196_081_7).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
        let d = half_space_rearranged(0.37).unwrap();
        assert!((gauss_measure(&d).unwrap() - 0.37).abs() < 1e-10);
        assert!(half_space_rearranged(0.0).is_err());
    }

    #[test]
    fn isoperimetric_inequality_on_random_domains() {
        // The half-space of equal measure minimizes Gaussian perimeter.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..300 {
            let d = if i % 2 == 0 {
                let a = rng.gen_range(-3.0..2.5);
                let b = a + rng.gen_range(0.05..4.0);
                Domain::Interval(Interval1D::new(a, b).unwrap())
            } else {
                Domain::Ball { n: rng.gen_range(1..5), r: rng.gen_range(0.1..3.5) }
            };
            let m = gauss_measure(&d).unwrap();
            let p = gauss_perimeter(&d).unwrap();
            let p_star = gauss_perimeter(&half_space_rearranged(m).unwrap()).unwrap();
            assert!(p >= p_star - 1e-12, "{d:?}: P={p} < P*={p_star}");
        }
    }

    #[test]
    fn perimeter_extremal_at_symmetric_interval() {
        // Along the measure constraint b = b(a), the perimeter is maximal
        // at the symmetric interval and minimal at the half-line ends.
        for &l in &[0.2, 0.5, 0.8] {
            let a_sym = -SQRT_2 * erfinv(l).unwrap();
            let a_max = SQRT_2 * erfinv(1.0 - 2.0 * l).unwrap();
            let w = 0.9 * (a_max - a_sym);
            let n = 200;
            let mut best = (0usize, f64::MIN);
            let mut worst = (0usize, f64::MAX);
            for i in 0..n {
                let a = a_sym - w + 2.0 * w * i as f64 / (n - 1) as f64;
                let iv = Interval1D::new(a, b_of_a(a, l).unwrap()).unwrap();
                let p = iv.gauss_perimeter();
                if p > best.1 {
                    best = (i, p);
                }
                if p < worst.1 {
                    worst = (i, p);
                }
            }
            let sym_index = (n - 1) / 2;
            assert!(
                best.0.abs_diff(sym_index) <= 1,
                "L={l}: max at grid index {} (symmetric at {sym_index})",
                best.0
            );
            assert!(worst.0 == 0 || worst.0 == n - 1, "L={l}: min at index {}", worst.0);
        }
    }

    #[test]
    fn rectangle_measure_and_perimeter() {
        let ix = Interval1D::new(-1.0, 1.0).unwrap();
        let iy = Interval1D::new(0.0, f64::INFINITY).unwrap();
        let d = Domain::Rectangle(ix, iy);
        let m = gauss_measure(&d).unwrap();
        assert!((m - ix.gauss_measure() * 0.5).abs() < 1e-14);
        // Perimeter oracle: sum of the four weighted edges by quadrature.
        let p = gauss_perimeter(&d).unwrap();
        let edge_x = special::quad(
            |y| (gauss_density(-1.0) + gauss_density(1.0)) * gauss_density(y),
            0.0,
            f64::INFINITY,
            1e-13,
        )
        .unwrap();
        let edge_y = special::quad(
            |x| gauss_density(0.0) * gauss_density(x),
            -1.0,
            1.0,
            1e-13,
        )
        .unwrap();
        assert!((p - (edge_x + edge_y)).abs() < 1e-12);
    }

    #[test]
    fn ball_radius_round_trip() {
        let r = ball_radius_for_measure(2, 0.5).unwrap();
        assert!((r - (2.0 * 2.0_f64.ln()).sqrt()).abs() < 1e-12);
        for &(n, m) in &[(2usize, 0.3), (3, 0.5), (5, 0.7)] {
            let r = ball_radius_for_measure(n, m).unwrap();
            let back = gauss_measure(&Domain::Ball { n, r }).unwrap();
            assert!((back - m).abs() < 1e-9, "N={n} m={m}: round trip {back}");
        }
    }
}
