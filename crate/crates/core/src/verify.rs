//! The project's acceptance checklist as callable verification routines:
//! thirteen criteria, each returning named pass/fail checks with the
//! numbers behind them. Shared by the acceptance test target and the CLI
//! `verify-all` command so both report identical results.

use crate::bounds::{h_bound, k_bound, lemma_chain, rbar};
use crate::error::Result;
use crate::grid2d::{
    counterexample_run, hermite_square_bounds, tensor_eigs,
};
use crate::measure::{
    gauss_measure, gauss_perimeter, half_space_rearranged, b_of_a, Domain, Interval1D,
};
use crate::radial::{nu1, radial_eigs_opts, radial_value, shape_derivative_radial, RadialProblem};
use crate::rearrange::{hardy_littlewood_gap, polya_szego_gap, rearrange, rearrange_weighted};
use crate::report::Check;
use crate::sampled::SampledFunction;
use crate::shooting::Bc;
use crate::special::{erfinv, gauss_weight, phi, quad, SQRT_2};
use crate::sturm1d::{mu1, neumann_dirichlet_gap, shape_derivative_1d, slide_profile};
use crate::weinberger::{named_domain, szego_weinberger_check, SymmetricDomain2D};
use serde::Serialize;
use std::f64::consts::PI;

/// One acceptance criterion: its checklist position, a short label, and
/// the individual checks it ran.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub index: usize,
    pub name: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

/// Small deterministic PRNG (SplitMix64) so verification sampling is
/// reproducible from a single seed without external dependencies.
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * u
    }

    fn pick<T: Copy>(&mut self, options: &[T]) -> T {
        options[(self.next_u64() % options.len() as u64) as usize]
    }
}

/// Criterion 1: the Neumann spectrum of the operator on a large interval
/// reproduces the integers 0..4.
pub fn hermite_spectrum_checks(tol: f64) -> Result<Vec<Check>> {
    let iv = Interval1D::new(-8.0, 8.0)?;
    let mut checks = Vec::new();
    for n in 0..5usize {
        let val = crate::sturm1d::eig1d_value(&iv, Bc::Neumann, n, tol)?;
        checks.push(Check::close(
            format!("eigenvalue {n} on (-8, 8) equals {n}"),
            val,
            n as f64,
            1e-6,
        ));
    }
    Ok(checks)
}

/// Criterion 2: the Neumann–Dirichlet gap is 1 on random intervals and
/// half-lines.
pub fn nd_gap_checks(tol: f64, seed: u64) -> Result<Vec<Check>> {
    let mut rng = SplitMix64::new(seed ^ 0x9d2c);
    let mut checks = Vec::new();
    for i in 0..20usize {
        let iv = match i % 4 {
            0 | 1 => {
                let a = rng.uniform(-3.0, 2.0);
                let len = rng.uniform(0.3, 4.0);
                Interval1D::new(a, a + len)?
            }
            2 => Interval1D::new(rng.uniform(-2.0, 2.0), f64::INFINITY)?,
            _ => Interval1D::new(f64::NEG_INFINITY, rng.uniform(-2.0, 2.0))?,
        };
        let gap = neumann_dirichlet_gap(&iv, tol)?;
        checks.push(Check::close(
            format!("gap = 1 on ({:.3}, {:.3})", iv.a(), iv.b()),
            gap,
            1.0,
            2e-9,
        ));
    }
    Ok(checks)
}

/// Criterion 3: along the measure-preserving slide, the first Neumann
/// eigenvalue is minimal at the half-line, maximal at the symmetric
/// interval, and strictly increasing between them.
pub fn slide_extremum_checks(tol: f64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for &l in &[0.3, 0.5, 0.7] {
        let a_sym = -SQRT_2 * erfinv(l)?;
        let a_max = SQRT_2 * erfinv(1.0 - 2.0 * l)?;
        let span = 0.98 * (a_max - a_sym);
        let mut grid = vec![f64::NEG_INFINITY];
        // 59 finite points centered exactly on the symmetric interval.
        for i in 0..59usize {
            grid.push(a_sym + span * (i as f64 - 29.0) / 29.0);
        }
        let profile = slide_profile(l, &grid, tol)?;
        let values: Vec<f64> = profile.iter().map(|p| p.1).collect();
        let sym_index = 30usize;
        let argmax = values
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(y.1))
            .map(|p| p.0)
            .unwrap_or(0);
        let argmin = values
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(y.1))
            .map(|p| p.0)
            .unwrap_or(0);
        checks.push(Check::flag(
            format!("L={l}: maximal exactly at the symmetric interval"),
            argmax == sym_index,
        ));
        checks.push(Check::flag(
            format!("L={l}: minimal at the half-line limit"),
            argmin == 0,
        ));
        checks.push(Check::flag(
            format!("L={l}: strictly increasing left of the symmetric point"),
            (1..=sym_index).all(|i| values[i] > values[i - 1]),
        ));
    }
    Ok(checks)
}

/// Criterion 4: μ₁ = 5 on the distinguished interval, and the square
/// built from it shows 5 as a double eigenvalue.
pub fn square_constant_checks(tol: f64) -> Result<Vec<Check>> {
    let (a, b) = hermite_square_bounds();
    let iv = Interval1D::new(a, b)?;
    let val = mu1(&iv, tol)?;
    let spec = tensor_eigs(&iv, &iv, 4, tol)?;
    Ok(vec![
        Check::close("mu1 on the critical interval equals 5", val, 5.0, 1e-8),
        Check::close("square eigenvalue 5 (first copy)", spec.eigenvalues[1], 5.0, 1e-7),
        Check::close("square eigenvalue 5 (second copy)", spec.eigenvalues[2], 5.0, 1e-7),
        Check::flag(
            "next square level lies strictly above 5",
            spec.eigenvalues[3] > 5.1,
        ),
    ])
}

/// Criterion 5: the printed constants of the bound analysis.
pub fn printed_constant_checks() -> Result<Vec<Check>> {
    let e = (-0.5_f64).exp();
    let k1 = k_bound(2, 1.0)?;
    let root = rbar();
    let alt = (2.0 - 2.0 * (-root / 2.0).exp()) / (2.0 - 3.0 * (-root / 2.0).exp());
    Ok(vec![
        Check::close(
            "k(1) equals (2-2e^{-1/2})/(2-3e^{-1/2})",
            k1,
            (2.0 - 2.0 * e) / (2.0 - 3.0 * e),
            1e-9,
        ),
        Check::close("k(1) prints as 4.362", k1, 4.362, 5e-4),
        Check::close("h(1.585) prints as 7.210", h_bound(2, 1.585)?, 7.210, 5e-4),
        Check::close("the root radius prints as 1.585", root, 1.585, 5e-4),
        Check::close(
            "the exponential display at the root prints as 1.705",
            alt,
            1.705,
            5e-4,
        ),
        Check::close("k at the root equals 2", k_bound(2, root)?, 2.0, 1e-9),
        Check::close(
            "h at 1 + pi/sqrt(8) equals 2",
            h_bound(2, 1.0 + PI / 8.0_f64.sqrt())?,
            2.0,
            1e-12,
        ),
    ])
}

/// Criterion 6: the angular eigenvalue sits strictly below the radial one
/// across dimensions and radius regimes, with the elementary bounds
/// closing the comparison chain.
pub fn comparison_chain_checks(tol: f64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut min_tau_nu = f64::INFINITY;
    let mut min_k_nu = f64::INFINITY;
    let w = PI / 8.0_f64.sqrt();
    for &n in &[2usize, 3, 5] {
        let root = ((n - 1) as f64).sqrt();
        let mut radii = Vec::new();
        for &f in &[0.25, 0.5, 0.72, 0.93] {
            radii.push(root * f);
        }
        for &f in &[0.08, 0.2, 0.32, 0.44, 0.55, 0.66, 0.77, 0.88, 0.97] {
            radii.push(root + w * f);
        }
        for &d in &[0.15, 0.4, 0.7, 1.0, 1.4, 1.8, 2.3] {
            radii.push(root + w + d);
        }
        for r in radii {
            let nu = nu1(n, r, tol)?;
            // The middle-regime link needs the zero of the τ₁ profile,
            // so solve that branch with its eigenfunction.
            let p = RadialProblem { n, k: 0, r, bc: Bc::Neumann };
            let eigs = radial_eigs_opts(&p, 2, tol, None, 301)?;
            let tau = eigs[1].value;
            let tau_node = eigs[1].node_locations.first().copied();
            let rep = lemma_chain(n, r, nu, tau, tau_node)?;
            min_tau_nu = min_tau_nu.min(tau - nu);
            min_k_nu = min_k_nu.min(rep.k_val - nu);
            checks.push(Check::flag(
                format!("chain closes at N={n}, R={r:.3}"),
                rep.chain_ok,
            ));
            if !rep.chain_ok {
                for link in rep.links.into_iter().filter(|c| !c.pass) {
                    checks.push(Check {
                        name: format!("N={n}, R={r:.3}: {}", link.name),
                        ..link
                    });
                }
            }
        }
    }
    checks.push(Check::lt(
        "smallest tau1 - nu1 slack across the sweep",
        0.0,
        min_tau_nu,
        1e-10,
    ));
    checks.push(Check::le(
        "nu1 <= k(R) across the sweep",
        0.0,
        min_k_nu,
        1e-10,
    ));
    Ok(checks)
}

/// Criterion 7: the infinite-radius radial eigenvalue is 2 with the
/// quadratic eigenfunction, and the Dirichlet ground value on B_{√N} is 2.
pub fn infinite_radius_checks(tol: f64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let p = RadialProblem { n: 2, k: 0, r: f64::INFINITY, bc: Bc::Neumann };
    let res = radial_eigs_opts(&p, 2, tol, Some(12.0), 1201)?;
    let tau_inf = res[1].value;
    checks.push(Check::close(
        "radial eigenvalue at truncation 12 equals 2",
        tau_inf,
        2.0,
        1e-4,
    ));
    // The solved profile should be the normalized quadratic (2 − r²)/2
    // (unit norm against the planar Gaussian weight, positive at 0).
    let f = &res[1].eigenfunction;
    let dist2 = quad(
        |r| {
            let model = 0.5 * (2.0 - r * r);
            (f.eval(r) - model).powi(2) * r * gauss_weight(r)
        },
        1e-4,
        12.0,
        1e-10,
    )?;
    checks.push(Check::le(
        "L2 distance of the profile from the quadratic",
        dist2.sqrt(),
        1e-3,
        0.0,
    ));
    for &n in &[2usize, 3, 5] {
        let lam = radial_value(
            &RadialProblem { n, k: 0, r: (n as f64).sqrt(), bc: Bc::Dirichlet },
            0,
            tol,
        )?;
        checks.push(Check::close(
            format!("Dirichlet ground value on the radius-sqrt({n}) ball equals 2"),
            lam,
            2.0,
            1e-6,
        ));
    }
    Ok(checks)
}

/// Criterion 8: the angular eigenvalue tends to 1 from above as the
/// radius grows, monotonically along 4, 6, 8, 12.
pub fn asymptotic_sharpness_checks(tol: f64) -> Result<Vec<Check>> {
    let radii = [4.0, 6.0, 8.0, 12.0];
    let mut values = Vec::new();
    for &r in &radii {
        values.push(nu1(2, r, tol)?);
    }
    // The excess ν₁ − 1 decays like e^{−R²/2}: ~3e−4 at R = 4 but below
    // the eigenvalue tolerance past R ≈ 6, where strict ordering of the
    // computed values is numerically meaningless. Demand strict decrease
    // only across the resolvable first gap and tolerance-level
    // non-increase beyond it.
    Ok(vec![
        Check::close("nu1(12) equals 1", values[3], 1.0, 1e-3),
        Check::le("nu1(12) stays at or above the limit", 1.0, values[3], 1e-3),
        Check::lt("nu1 strictly decreases from R=4 to R=6", values[1], values[0], 1e-6),
        Check::le("nu1 does not increase from R=6 to R=8", values[2], values[1], 2e-8),
        Check::le("nu1 does not increase from R=8 to R=12", values[3], values[2], 2e-8),
    ])
}

/// Criterion 9: endpoint shape-derivative formulas match central finite
/// differences, and the radial derivatives are strictly negative.
pub fn shape_derivative_checks(tol: f64, seed: u64) -> Result<Vec<Check>> {
    let mut rng = SplitMix64::new(seed ^ 0x51de);
    let mut checks = Vec::new();
    for _ in 0..10 {
        let a = rng.uniform(-2.5, 1.0);
        let b = a + rng.uniform(0.4, 2.5);
        let iv = Interval1D::new(a, b)?;
        let sd = shape_derivative_1d(&iv, tol)?;
        let rel = (sd.formula - sd.fd).abs() / sd.fd.abs().max(1e-8);
        checks.push(Check::le(
            format!("slide derivative matches FD on ({a:.2}, {b:.2})"),
            rel,
            1e-4,
            0.0,
        ));
    }
    for i in 0..10usize {
        let n = [2usize, 3, 5][i % 3];
        let r = rng.uniform(0.8, 2.8);
        let index = 1 + i % 2;
        let sd = shape_derivative_radial(n, r, index, tol)?;
        let rel = (sd.formula - sd.fd).abs() / sd.fd.abs().max(1e-8);
        checks.push(Check::le(
            format!("radial derivative {index} matches FD at N={n}, R={r:.2}"),
            rel,
            1e-4,
            0.0,
        ));
        checks.push(Check::lt(
            format!("radial derivative {index} strictly negative at N={n}, R={r:.2}"),
            sd.formula,
            0.0,
            0.0,
        ));
    }
    Ok(checks)
}

/// Criterion 10: the ball-maximality chain μ₁(Ω) ≤ bound ≤ μ₁(B_R) on a
/// sampled family of symmetric domains, with the two integral comparisons
/// behind the second inequality, and equality only for the ball.
pub fn ball_maximality_checks(tol: f64) -> Result<Vec<Check>> {
    let domains: Vec<(String, SymmetricDomain2D, bool)> = vec![
        ("ball m=0.5".into(), named_domain("ball", 0.5)?, true),
        ("square m=0.3".into(), named_domain("square", 0.3)?, false),
        ("square m=0.5".into(), named_domain("square", 0.5)?, false),
        ("square m=0.7".into(), named_domain("square", 0.7)?, false),
        ("two-lobe star m=0.5".into(), named_domain("star2", 0.5)?, false),
        ("four-lobe star m=0.3".into(), named_domain("star4", 0.3)?, false),
        ("mixed star m=0.7".into(), named_domain("mix", 0.7)?, false),
        ("ellipse m=0.5".into(), named_domain("ellipse", 0.5)?, false),
        ("2:1 rectangle m=0.7".into(), named_domain("rect", 0.7)?, false),
        ("annulus mask m=0.3".into(), named_domain("annulus", 0.3)?, false),
    ];
    let mut checks = Vec::new();
    for (label, omega, is_ball) in &domains {
        let rep = szego_weinberger_check(omega, tol)?;
        checks.push(Check::le(
            format!("{label}: mu1 <= bound (grid slack)"),
            rep.mu1_omega,
            rep.bound,
            0.02 * rep.mu1_omega.abs().max(1.0),
        ));
        checks.push(Check::le(
            format!("{label}: bound <= mu1(ball)"),
            rep.bound,
            rep.mu1_ball_quadrature,
            1e-9,
        ));
        checks.push(Check::le(
            format!("{label}: gradient integral at most ball value"),
            rep.numerator_omega,
            rep.numerator_ball,
            1e-9,
        ));
        checks.push(Check::le(
            format!("{label}: mass integral at least ball value"),
            rep.denominator_ball,
            rep.denominator_omega,
            1e-9,
        ));
        if *is_ball {
            checks.push(Check::flag(
                format!("{label}: equality with the ball detected"),
                rep.equality_with_ball,
            ));
        } else {
            checks.push(Check::flag(
                format!("{label}: no false equality with the ball"),
                !rep.equality_with_ball,
            ));
        }
    }
    Ok(checks)
}

/// Criterion 11: the rounded-corner family keeps μ₁ above 1 (near 5)
/// while the equal-measure half-space sits at 1.
pub fn counterexample_checks(tol: f64) -> Result<Vec<Check>> {
    let report = counterexample_run(&[0.2, 0.1, 0.05], &[64, 128], tol)?;
    Ok(report.checks)
}

/// Criterion 12: rearrangement preserves Lᵖ norms and satisfies the two
/// comparison principles on random samples.
pub fn rearrangement_checks(seed: u64) -> Result<Vec<Check>> {
    let mut rng = SplitMix64::new(seed ^ 0x7ea5);
    let mut max_dev = [0.0_f64; 2];
    for i in 0..100usize {
        if i % 2 == 0 {
            // Direct weighted cells.
            let n = 20 + (i % 17) * 5;
            let values: Vec<f64> = (0..n).map(|_| rng.uniform(-2.0, 2.0)).collect();
            let weights: Vec<f64> = (0..n).map(|_| rng.uniform(0.001, 1.0)).collect();
            let r = rearrange_weighted(&values, &weights)?;
            for (pi, &p) in [1.0, 2.0].iter().enumerate() {
                let src = values
                    .iter()
                    .zip(&weights)
                    .map(|(v, w)| v.abs().powf(p) * w)
                    .sum::<f64>()
                    .powf(1.0 / p);
                max_dev[pi] = max_dev[pi].max((src - r.lp_norm(p)).abs());
            }
        } else {
            // Sampled function on a random bounded interval.
            let a = rng.uniform(-3.0, 1.0);
            let b = a + rng.uniform(0.5, 3.5);
            let n = 30 + (i % 23) * 4;
            let grid: Vec<f64> = (0..=n)
                .map(|j| a + (b - a) * j as f64 / n as f64)
                .collect();
            let values: Vec<f64> = grid.iter().map(|_| rng.uniform(-1.5, 1.5)).collect();
            let u = SampledFunction::new(grid.clone(), values)?;
            let iv = Interval1D::new(a, b)?;
            let r = rearrange(&u, &iv)?;
            for (pi, &p) in [1.0, 2.0].iter().enumerate() {
                let src = (0..n)
                    .map(|j| {
                        let mid = 0.5 * (u.values()[j] + u.values()[j + 1]);
                        let w = phi(grid[j]) - phi(grid[j + 1]);
                        mid.abs().powf(p) * w
                    })
                    .sum::<f64>()
                    .powf(1.0 / p);
                max_dev[pi] = max_dev[pi].max((src - r.lp_norm(p)).abs());
            }
        }
    }

    let mut min_hl = f64::INFINITY;
    for _ in 0..100usize {
        let a = rng.uniform(-2.5, 1.0);
        let b = a + rng.uniform(0.5, 3.0);
        let n = 30 + (rng.next_u64() % 70) as usize;
        let grid: Vec<f64> = (0..=n)
            .map(|j| a + (b - a) * j as f64 / n as f64)
            .collect();
        let u = SampledFunction::new(
            grid.clone(),
            grid.iter().map(|_| rng.uniform(-2.0, 2.0)).collect(),
        )?;
        let v = SampledFunction::new(
            grid.clone(),
            grid.iter().map(|_| rng.uniform(-2.0, 2.0)).collect(),
        )?;
        let iv = Interval1D::new(a, b)?;
        let (lower, upper) = hardy_littlewood_gap(&u, &v, &iv)?;
        min_hl = min_hl.min(lower).min(upper);
    }

    let mut min_ps = f64::INFINITY;
    for i in 0..50usize {
        let a = rng.uniform(-2.0, 0.5);
        let b = a + rng.uniform(0.8, 2.5);
        let n = 120 + i;
        let c: Vec<f64> = (0..3).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let grid: Vec<f64> = (0..=n)
            .map(|j| a + (b - a) * j as f64 / n as f64)
            .collect();
        let values: Vec<f64> = grid
            .iter()
            .map(|&x| {
                let t = (x - a) / (b - a);
                let base: f64 = (1..=3)
                    .map(|k| c[k - 1] * (k as f64 * PI * t).sin())
                    .sum();
                base * base
            })
            .collect();
        let u = SampledFunction::new(grid, values)?;
        let iv = Interval1D::new(a, b)?;
        min_ps = min_ps.min(polya_szego_gap(&u, &iv)?);
    }

    Ok(vec![
        Check::le("largest L1 deviation over 100 samples", max_dev[0], 1e-10, 0.0),
        Check::le("largest L2 deviation over 100 samples", max_dev[1], 1e-10, 0.0),
        Check::le(
            "smallest Hardy-Littlewood slack over 100 pairs",
            -1e-10,
            min_hl,
            0.0,
        ),
        Check::le("smallest energy gap over 50 profiles", -1e-8, min_ps, 0.0),
    ])
}

/// Criterion 13: the Gaussian isoperimetric comparison against the
/// rearranged half-space on random domains, plus the perimeter extremum
/// along the 1D slide.
pub fn isoperimetric_checks(seed: u64) -> Result<Vec<Check>> {
    let mut rng = SplitMix64::new(seed ^ 0x15e7);
    let mut min_slack = f64::INFINITY;
    for i in 0..1000usize {
        let d = match i % 5 {
            0 | 1 => {
                let a = rng.uniform(-3.5, 2.5);
                Domain::Interval(Interval1D::new(a, a + rng.uniform(0.05, 5.0))?)
            }
            2 => Domain::Ball { n: rng.pick(&[1usize, 2, 3, 4, 5]), r: rng.uniform(0.1, 3.5) },
            3 => Domain::Interval(Interval1D::new(rng.uniform(-2.5, 2.5), f64::INFINITY)?),
            _ => {
                let ax = rng.uniform(-2.0, 1.0);
                let ay = rng.uniform(-2.0, 1.0);
                Domain::Rectangle(
                    Interval1D::new(ax, ax + rng.uniform(0.3, 3.0))?,
                    Interval1D::new(ay, ay + rng.uniform(0.3, 3.0))?,
                )
            }
        };
        let m = gauss_measure(&d)?;
        if !(m > 1e-12 && m < 1.0 - 1e-12) {
            continue;
        }
        let p = gauss_perimeter(&d)?;
        let p_star = gauss_perimeter(&half_space_rearranged(m)?)?;
        min_slack = min_slack.min(p - p_star);
    }
    let mut checks = vec![Check::le(
        "smallest isoperimetric slack over 1000 domains",
        -1e-12,
        min_slack,
        0.0,
    )];
    for &l in &[0.3, 0.5, 0.7] {
        let a_sym = -SQRT_2 * erfinv(l)?;
        let a_max = SQRT_2 * erfinv(1.0 - 2.0 * l)?;
        let span = 0.95 * (a_max - a_sym);
        let n = 201usize;
        let mut best = (0usize, f64::MIN);
        for i in 0..n {
            let a = a_sym + span * (i as f64 - 100.0) / 100.0;
            let iv = Interval1D::new(a, b_of_a(a, l)?)?;
            let p = iv.gauss_perimeter();
            if p > best.1 {
                best = (i, p);
            }
        }
        checks.push(Check::flag(
            format!("L={l}: perimeter maximal at the symmetric interval"),
            best.0.abs_diff(100) <= 1,
        ));
    }
    Ok(checks)
}

/// One deferred criterion run, as produced by [`criterion_table`].
pub type CriterionJob = Box<dyn FnOnce() -> Result<Vec<Check>> + Send>;

/// The checklist as deferred jobs `(index, label, job)`, so callers can
/// choose the execution strategy (sequential here in [`run_all`], a
/// worker pool in the CLI) while keeping one source for the numbering
/// and labels.
pub fn criterion_table(tol: f64, seed: u64) -> Vec<(usize, &'static str, CriterionJob)> {
    vec![
        (1, "hermite spectrum on a large interval", Box::new(move || hermite_spectrum_checks(tol))),
        (2, "neumann-dirichlet gap", Box::new(move || nd_gap_checks(tol, seed))),
        (3, "slide profile extremes", Box::new(move || slide_extremum_checks(tol))),
        (4, "square eigenvalue 5 with multiplicity 2", Box::new(move || square_constant_checks(tol))),
        (5, "printed constants", Box::new(printed_constant_checks)),
        (6, "angular-radial comparison chain", Box::new(move || comparison_chain_checks(tol))),
        (7, "infinite-radius anchors", Box::new(move || infinite_radius_checks(tol))),
        (8, "asymptotic sharpness of the angular value", Box::new(move || asymptotic_sharpness_checks(tol))),
        (9, "shape derivative formulas", Box::new(move || shape_derivative_checks(tol, seed))),
        (10, "ball maximality chain", Box::new(move || ball_maximality_checks(tol))),
        (11, "rounded-corner counterexample", Box::new(move || counterexample_checks(tol))),
        (12, "rearrangement properties", Box::new(move || rearrangement_checks(seed))),
        (13, "isoperimetric comparison", Box::new(move || isoperimetric_checks(seed))),
    ]
}

/// Turn one finished job into its result record. Criteria that error
/// internally are reported as failed rather than aborting the run.
pub fn finish_criterion(
    index: usize,
    name: &str,
    outcome: Result<Vec<Check>>,
) -> CriterionResult {
    let checks = match outcome {
        Ok(c) => c,
        Err(e) => vec![Check::flag(format!("execution error: {e}"), false)],
    };
    let pass = checks.iter().all(|c| c.pass);
    CriterionResult { index, name: name.to_string(), pass, checks }
}

/// Run the full checklist in order.
pub fn run_all(tol: f64, seed: u64) -> Vec<CriterionResult> {
    criterion_table(tol, seed)
        .into_iter()
        .map(|(index, name, job)| finish_criterion(index, name, job()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut c = SplitMix64::new(43);
        assert_ne!(SplitMix64::new(42).next_u64(), c.next_u64());
        let mut d = SplitMix64::new(7);
        for _ in 0..1000 {
            let x = d.uniform(-2.0, 3.0);
            assert!((-2.0..3.0).contains(&x));
        }
    }

    #[test]
    fn printed_constants_all_pass() {
        let checks = printed_constant_checks().unwrap();
        assert_eq!(checks.len(), 7);
        for c in &checks {
            assert!(c.pass, "failed: {} (lhs {}, rhs {})", c.name, c.lhs, c.rhs);
        }
    }

    #[test]
    fn isoperimetric_sweep_passes() {
        let checks = isoperimetric_checks(1).unwrap();
        for c in &checks {
            assert!(c.pass, "failed: {} (slack {})", c.name, c.slack);
        }
    }
}
