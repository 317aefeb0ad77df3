//! 2D Gaussian-weighted Neumann eigensolver: exact tensor-product spectra
//! for rectangles (separation of variables through the 1D solver) and a
//! masked finite-volume solver for general planar domains.
//!
//! The masked solver discretizes `−div(φ₂ ∇u) = μ φ₂ u` with
//! cell-centered finite volumes on a uniform grid: each face between two
//! active cells carries the weight φ₂(face midpoint)·h, faces to inactive
//! cells are simply omitted (natural Neumann), so constants are an exact
//! kernel vector and μ₀ = 0 holds by construction. Small problems are
//! solved densely; larger ones by shifted block inverse iteration with
//! Rayleigh–Ritz extraction and the constant mode deflated.

use crate::error::{Error, Result};
use crate::linalg::{dense_generalized_eigs, projected_generalized_eigs, SymBanded};
use crate::measure::Interval1D;
use crate::report::Check;
use crate::shooting::Bc;
use crate::special::{gauss_density, phi_inverse};
use crate::sturm1d::{eig1d_value, mu1};
use nalgebra::DMatrix;
use serde::Serialize;

/// Endpoints (a, b) of the interval on which the fifth Hermite polynomial
/// has vanishing derivative at both ends, so that the square (a, b)² has
/// first nontrivial Neumann eigenvalue 5.
pub fn hermite_square_bounds() -> (f64, f64) {
    ((3.0 - 6.0_f64.sqrt()).sqrt(), (3.0 + 6.0_f64.sqrt()).sqrt())
}

/// Uniform planar grid with an active-cell mask and per-cell Gaussian
/// weights. Cell (i, j) has center `(x0 + (i+1/2)h, y0 + (j+1/2)h)`;
/// active cells are enumerated in row-major order (j outer, i inner).
#[derive(Debug, Clone)]
pub struct MaskedGrid2D {
    nx: usize,
    ny: usize,
    h: f64,
    x0: f64,
    y0: f64,
    active: Vec<bool>,
    /// Active ordinal per grid cell (usize::MAX when inactive).
    ordinal: Vec<usize>,
    /// (i, j) per active ordinal.
    cells: Vec<(usize, usize)>,
    /// φ₂(center)·h² per active ordinal.
    cell_weight: Vec<f64>,
}

fn density2(x: f64, y: f64) -> f64 {
    gauss_density(x) * gauss_density(y)
}

impl MaskedGrid2D {
    /// Build a mask over `[x0, x0+nx·h] × [y0, y0+ny·h]`: a cell is active
    /// iff its center satisfies the predicate (midpoint rule). The active
    /// region must be nonempty and 4-connected.
    pub fn from_predicate(
        x0: f64,
        y0: f64,
        nx: usize,
        ny: usize,
        h: f64,
        pred: impl Fn(f64, f64) -> bool,
    ) -> Result<Self> {
        if !(h > 0.0) || nx == 0 || ny == 0 {
            return Err(Error::InvalidDomain(format!(
                "grid needs positive spacing and extent, got h={h}, {nx}x{ny}"
            )));
        }
        let mut active = vec![false; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                let x = x0 + (i as f64 + 0.5) * h;
                let y = y0 + (j as f64 + 0.5) * h;
                active[j * nx + i] = pred(x, y);
            }
        }
        let mut ordinal = vec![usize::MAX; nx * ny];
        let mut cells = Vec::new();
        let mut cell_weight = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                if active[j * nx + i] {
                    ordinal[j * nx + i] = cells.len();
                    cells.push((i, j));
                    let x = x0 + (i as f64 + 0.5) * h;
                    let y = y0 + (j as f64 + 0.5) * h;
                    cell_weight.push(density2(x, y) * h * h);
                }
            }
        }
        if cells.is_empty() {
            return Err(Error::InvalidDomain("mask has no active cells".into()));
        }
        let g = MaskedGrid2D { nx, ny, h, x0, y0, active, ordinal, cells, cell_weight };
        if !g.is_connected() {
            return Err(Error::InvalidDomain("active region is not 4-connected".into()));
        }
        Ok(g)
    }

    /// The square (a, b)² of [`hermite_square_bounds`] with its top-right
    /// corner replaced by a circular arc of radius `delta` (the boundary
    /// is `y = b − δ + √(δ² − (x − (b − δ))²)` for x near b). `delta = 0`
    /// reproduces the square itself.
    pub fn rounded_square(delta: f64, cells_per_side: usize) -> Result<Self> {
        let (a, b) = hermite_square_bounds();
        let side = b - a;
        if !(delta >= 0.0) || delta >= side / 2.0 {
            return Err(Error::InvalidDomain(format!(
                "corner radius {delta} outside [0, {:.4})",
                side / 2.0
            )));
        }
        let h = side / cells_per_side as f64;
        let f_delta = move |x: f64| -> f64 {
            if x <= b - delta {
                b
            } else {
                b - delta + (delta * delta - (x - (b - delta)).powi(2)).max(0.0).sqrt()
            }
        };
        Self::from_predicate(a, a, cells_per_side, cells_per_side, h, move |x, y| {
            y <= f_delta(x)
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn active_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    pub fn center(&self, ord: usize) -> (f64, f64) {
        let (i, j) = self.cells[ord];
        (self.x0 + (i as f64 + 0.5) * self.h, self.y0 + (j as f64 + 0.5) * self.h)
    }

    pub fn cell_weight(&self, ord: usize) -> f64 {
        self.cell_weight[ord]
    }

    /// Total Gaussian mass of the active cells (approximates the measure
    /// of the continuous domain to first order in h).
    pub fn measure(&self) -> f64 {
        self.cell_weight.iter().sum()
    }

    fn is_active(&self, i: usize, j: usize) -> bool {
        i < self.nx && j < self.ny && self.active[j * self.nx + i]
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.cells.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(ord) = stack.pop() {
            let (i, j) = self.cells[ord];
            let neighbors = [
                (i.wrapping_add(1), j),
                (i.wrapping_sub(1), j),
                (i, j.wrapping_add(1)),
                (i, j.wrapping_sub(1)),
            ];
            for (oi, oj) in neighbors {
                if self.is_active(oi, oj) {
                    let o = self.ordinal[oj * self.nx + oi];
                    if !seen[o] {
                        seen[o] = true;
                        stack.push(o);
                    }
                }
            }
        }
        seen.iter().all(|s| *s)
    }

    /// Whether the mask is symmetric under the antipodal map (x, y) ↦
    /// (−x, −y). Requires the grid box itself to be origin-symmetric.
    pub fn is_symmetric(&self) -> bool {
        let x1 = self.x0 + self.nx as f64 * self.h;
        let y1 = self.y0 + self.ny as f64 * self.h;
        if (self.x0 + x1).abs() > 1e-10 || (self.y0 + y1).abs() > 1e-10 {
            return false;
        }
        for j in 0..self.ny {
            for i in 0..self.nx {
                if self.active[j * self.nx + i]
                    != self.active[(self.ny - 1 - j) * self.nx + (self.nx - 1 - i)]
                {
                    return false;
                }
            }
        }
        true
    }

    /// Stiffness matrix (face-weighted divergence-form differences) and
    /// diagonal mass vector for `A u = μ M u`.
    pub(crate) fn assemble(&self) -> (SymBanded, Vec<f64>) {
        let n = self.cells.len();
        let mut pairs: Vec<(usize, usize, f64)> = Vec::new();
        let mut bw = 0usize;
        for ord in 0..n {
            let (i, j) = self.cells[ord];
            let (cx, cy) = self.center(ord);
            if self.is_active(i + 1, j) {
                let other = self.ordinal[j * self.nx + i + 1];
                let edge_weight = density2(cx + 0.5 * self.h, cy) * self.h;
                pairs.push((ord, other, edge_weight / self.h));
                bw = bw.max(other - ord);
            }
            if self.is_active(i, j + 1) {
                let other = self.ordinal[(j + 1) * self.nx + i];
                let edge_weight = density2(cx, cy + 0.5 * self.h) * self.h;
                pairs.push((ord, other, edge_weight / self.h));
                bw = bw.max(other - ord);
            }
        }
        let mut a = SymBanded::zeros(n, bw.min(n.saturating_sub(1)));
        for (c, o, t) in pairs {
            a.add(c, c, t);
            a.add(o, o, t);
            a.add(c, o, -t);
        }
        (a, self.cell_weight.clone())
    }
}

/// Eigenvalues (ascending, starting with the Neumann zero mode) plus the
/// first nontrivial eigenfunction when a grid function is available.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    /// Samples of the first nontrivial mode over active cells (mask route
    /// only).
    pub first_mode: Option<Vec<f64>>,
    /// Grid spacing (0 for the exact tensor route).
    pub h: f64,
    pub active_cells: usize,
}

/// Spectrum of a product domain: all sums of 1D Neumann eigenvalues of
/// the two factors, sorted ascending with multiplicities, first `count`
/// returned.
pub fn tensor_eigs(
    ivx: &Interval1D,
    ivy: &Interval1D,
    count: usize,
    tol: f64,
) -> Result<SpectrumResult> {
    if count == 0 {
        return Err(Error::InvalidDomain("tensor spectrum needs count >= 1".into()));
    }
    let per_axis = count;
    let mut xs = Vec::with_capacity(per_axis);
    for n in 0..per_axis {
        xs.push(eig1d_value(ivx, Bc::Neumann, n, tol)?);
    }
    let same = ivx.a() == ivy.a() && ivx.b() == ivy.b();
    let ys = if same {
        xs.clone()
    } else {
        let mut v = Vec::with_capacity(per_axis);
        for n in 0..per_axis {
            v.push(eig1d_value(ivy, Bc::Neumann, n, tol)?);
        }
        v
    };
    let mut sums: Vec<f64> = Vec::with_capacity(per_axis * per_axis);
    for &x in &xs {
        for &y in &ys {
            sums.push(x + y);
        }
    }
    sums.sort_by(f64::total_cmp);
    sums.truncate(count);
    Ok(SpectrumResult { eigenvalues: sums, first_mode: None, h: 0.0, active_cells: 0 })
}

fn xorshift_vec(n: usize, seed: u64) -> Vec<f64> {
    let mut s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    (0..n)
        .map(|_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}

fn dot_m(x: &[f64], y: &[f64], m: &[f64]) -> f64 {
    x.iter().zip(y).zip(m).map(|((a, b), w)| a * b * w).sum()
}

/// M-orthonormalize the block against the constant mode and itself
/// (two passes of modified Gram–Schmidt for stability).
fn orthonormalize(cols: &mut [Vec<f64>], constant: &[f64], m: &[f64]) -> Result<()> {
    let n = constant.len();
    for k in 0..cols.len() {
        for _pass in 0..2 {
            let proj = dot_m(&cols[k], constant, m);
            for i in 0..n {
                cols[k][i] -= proj * constant[i];
            }
            let (head, tail) = cols.split_at_mut(k);
            let ck = &mut tail[0];
            for cp in head.iter() {
                let proj = dot_m(ck, cp, m);
                for i in 0..n {
                    ck[i] -= proj * cp[i];
                }
            }
        }
        let norm = dot_m(&cols[k], &cols[k], m).sqrt();
        if !(norm > 1e-14) {
            return Err(Error::NoConvergence(
                "degenerate block in inverse iteration".into(),
            ));
        }
        for x in &mut cols[k] {
            *x /= norm;
        }
    }
    Ok(())
}

/// First `count` eigenvalues of the masked problem. Below 4000 active
/// cells the pencil is solved densely; above, by shifted block inverse
/// iteration (shift 0.5) with the constant mode deflated and eigenvalues
/// extracted by Rayleigh–Ritz projection.
pub fn masked_eigs(grid: &MaskedGrid2D, count: usize, tol: f64) -> Result<SpectrumResult> {
    if count == 0 {
        return Err(Error::InvalidDomain("spectrum needs count >= 1".into()));
    }
    let n = grid.active_count();
    let count = count.min(n);
    let (a, m) = grid.assemble();
    if n < 4000 {
        let dense = DMatrix::from_fn(n, n, |i, j| a.get(i, j));
        let pairs = dense_generalized_eigs(&dense, &m)?;
        let eigenvalues: Vec<f64> = pairs.iter().take(count).map(|p| p.0).collect();
        let first_mode = pairs.get(1).map(|p| normalize_sign(p.1.as_slice().to_vec()));
        return Ok(SpectrumResult {
            eigenvalues,
            first_mode,
            h: grid.h(),
            active_cells: n,
        });
    }
    iterate_masked(grid, &a, &m, count, tol)
}

/// Force the iterative path even on small grids (the dense route serves as
/// its cross-check in tests).
pub fn masked_eigs_iterative(
    grid: &MaskedGrid2D,
    count: usize,
    tol: f64,
) -> Result<SpectrumResult> {
    if count == 0 {
        return Err(Error::InvalidDomain("spectrum needs count >= 1".into()));
    }
    let (a, m) = grid.assemble();
    iterate_masked(grid, &a, &m, count.min(grid.active_count()), tol)
}

fn normalize_sign(mut v: Vec<f64>) -> Vec<f64> {
    let peak = v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 0.05 * peak) {
        if *first < 0.0 {
            for x in &mut v {
                *x = -*x;
            }
        }
    }
    v
}

fn iterate_masked(
    grid: &MaskedGrid2D,
    a: &SymBanded,
    m: &[f64],
    count: usize,
    tol: f64,
) -> Result<SpectrumResult> {
    let n = grid.active_count();
    let needed = count.saturating_sub(1).max(1);
    let block = (needed + 2).min(n.saturating_sub(1)).max(1);
    let sigma = 0.5;

    // Factor A − σM, bumping the shift if it lands on an eigenvalue.
    let mut shift = sigma;
    let mut fact = None;
    for _ in 0..4 {
        let mut shifted = a.clone();
        for i in 0..n {
            shifted.add(i, i, -shift * m[i]);
        }
        match shifted.ldlt() {
            Ok(f) => {
                fact = Some(f);
                break;
            }
            Err(_) => shift += 0.01 * (1.0 + shift),
        }
    }
    let fact = fact
        .ok_or_else(|| Error::NoConvergence("could not factor the shifted operator".into()))?;

    // Constant mode, M-normalized: the exact kernel vector.
    let total_mass: f64 = m.iter().sum();
    let constant = vec![1.0 / total_mass.sqrt(); n];

    let mut cols: Vec<Vec<f64>> = (0..block)
        .map(|k| xorshift_vec(n, 0xC0FFEE + k as u64))
        .collect();
    orthonormalize(&mut cols, &constant, m)?;

    let residual_tol = (10.0 * tol.sqrt()).max(1e-6);
    let mut prev_theta = vec![f64::INFINITY; needed];
    let mut stable = 0usize;
    let mut result: Option<(Vec<f64>, Vec<Vec<f64>>)> = None;
    for _iter in 0..800 {
        // One block step of (A − σM)⁻¹ M.
        for col in cols.iter_mut() {
            let rhs: Vec<f64> = col.iter().zip(m).map(|(x, w)| x * w).collect();
            *col = fact.solve(&rhs);
        }
        orthonormalize(&mut cols, &constant, m)?;
        // Rayleigh–Ritz on the block.
        let ar = DMatrix::from_fn(block, block, |p, q| {
            if p <= q {
                let aq = a.mul_vec(&cols[q]);
                cols[p].iter().zip(&aq).map(|(x, y)| x * y).sum()
            } else {
                0.0
            }
        });
        let ar = DMatrix::from_fn(block, block, |p, q| {
            if p <= q {
                ar[(p, q)]
            } else {
                ar[(q, p)]
            }
        });
        let mr = DMatrix::from_fn(block, block, |p, q| {
            if p == q {
                1.0
            } else {
                dot_m(&cols[p], &cols[q], m)
            }
        });
        let (theta, rot) = projected_generalized_eigs(&ar, &mr)?;
        let mut rotated: Vec<Vec<f64>> = vec![vec![0.0; n]; block];
        for (k, col) in rotated.iter_mut().enumerate() {
            for p in 0..block {
                let c = rot[(p, k)];
                if c != 0.0 {
                    for i in 0..n {
                        col[i] += c * cols[p][i];
                    }
                }
            }
        }
        cols = rotated;
        let drift = (0..needed)
            .map(|k| (theta[k] - prev_theta[k]).abs())
            .fold(0.0_f64, f64::max);
        prev_theta = theta[..needed].to_vec();
        if drift < tol {
            stable += 1;
        } else {
            stable = 0;
        }
        if stable >= 2 {
            // Residual sanity on the needed pairs.
            let ok = (0..needed).all(|k| {
                let av = a.mul_vec(&cols[k]);
                let r2: f64 = (0..n)
                    .map(|i| {
                        let r = av[i] - theta[k] * m[i] * cols[k][i];
                        r * r / m[i]
                    })
                    .sum();
                r2.sqrt() <= residual_tol * (1.0 + theta[k].abs())
            });
            if ok {
                result = Some((theta, cols));
                break;
            }
            stable = 0;
        }
    }
    let (theta, cols) = result.ok_or_else(|| {
        Error::NoConvergence("block inverse iteration did not converge".into())
    })?;
    let mut eigenvalues = vec![0.0];
    eigenvalues.extend(theta.iter().take(count - 1));
    Ok(SpectrumResult {
        eigenvalues,
        first_mode: cols.first().map(|c| normalize_sign(c.clone())),
        h: grid.h(),
        active_cells: n,
    })
}

/// One rounded-corner domain in the counterexample sweep.
#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleRow {
    pub delta: f64,
    /// (h, μ₁(T_δ)) per grid level, coarse to fine.
    pub values: Vec<(f64, f64)>,
    /// First-order Richardson extrapolation from the finest two levels.
    pub extrapolated: f64,
}

/// Report for the rounded-corner family: μ₁(T_δ) stays above 1 while the
/// half-space of equal measure has μ₁ = 1.
#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    /// Exact tensor value of μ₁ for the unrounded square (= 5).
    pub square_tensor_mu1: f64,
    pub rows: Vec<CounterexampleRow>,
    /// μ₁ of the half-space with the square's measure (= 1, transverse mode).
    pub half_space_mu1: f64,
    /// μ₁ of the 1D half-line factor (must be ≥ 1 for the min to be 1).
    pub half_space_axis_value: f64,
    pub checks: Vec<Check>,
}

/// Run the rounded-corner sweep: for each `delta` (descending) solve the
/// masked problem at each grid level (`cells_per_side` ascending) and
/// extrapolate in h. Verifies μ₁(T_δ) > 1 throughout, that the smallest
/// delta extrapolates near 5, and that the equal-measure half-space sits
/// at exactly 1 via the tensor route.
pub fn counterexample_run(
    deltas: &[f64],
    cells_per_side: &[usize],
    tol: f64,
) -> Result<CounterexampleReport> {
    if deltas.is_empty() || cells_per_side.is_empty() {
        return Err(Error::InvalidDomain("empty sweep".into()));
    }
    if deltas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidDomain("deltas must be strictly descending".into()));
    }
    if cells_per_side.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidDomain(
            "grid levels must be strictly ascending in cells per side".into(),
        ));
    }
    let (a, b) = hermite_square_bounds();
    let iv = Interval1D::new(a, b)?;
    let tensor = tensor_eigs(&iv, &iv, 3, tol)?;
    let square_tensor_mu1 = tensor.eigenvalues[1];
    let mut checks = vec![
        Check::close("tensor mu1 of the square equals 5", square_tensor_mu1, 5.0, 1e-6),
        Check::close(
            "square mu1 is a double eigenvalue",
            tensor.eigenvalues[2],
            5.0,
            1e-6,
        ),
    ];

    let mut rows = Vec::new();
    for &delta in deltas {
        let mut values = Vec::new();
        for &cells in cells_per_side {
            let g = MaskedGrid2D::rounded_square(delta, cells)?;
            let spec = masked_eigs(&g, 2, tol)?;
            values.push((g.h(), spec.eigenvalues[1]));
        }
        let extrapolated = if values.len() >= 2 {
            let (h_c, mu_c) = values[values.len() - 2];
            let (h_f, mu_f) = values[values.len() - 1];
            let r = h_c / h_f;
            mu_f + (mu_f - mu_c) / (r - 1.0)
        } else {
            values[0].1
        };
        let min_mu = values
            .iter()
            .map(|v| v.1)
            .chain(std::iter::once(extrapolated))
            .fold(f64::INFINITY, f64::min);
        checks.push(Check::lt(
            format!("mu1(T_delta) > 1 at delta={delta}"),
            1.0,
            min_mu,
            1e-9,
        ));
        rows.push(CounterexampleRow { delta, values, extrapolated });
    }
    if let Some(last) = rows.last() {
        checks.push(Check::close(
            format!("mu1(T_delta) near 5 at delta={}", last.delta),
            last.extrapolated,
            5.0,
            0.5,
        ));
    }

    // Half-space of equal measure: the tensor decomposition over
    // (c, ∞) × ℝ gives μ₁ = min(μ₁(c, ∞), 1) = 1 because the half-line
    // factor stays ≥ 1; the transverse full-line mode contributes the 1.
    let m_square = iv.gauss_measure().powi(2);
    let c = phi_inverse(m_square)?;
    let axis = mu1(&Interval1D::new(c, f64::INFINITY)?, tol)?;
    let half_space_mu1 = axis.min(1.0);
    checks.push(Check::le("half-line factor has mu1 >= 1", 1.0, axis, 1e-9));
    checks.push(Check::close("half-space mu1 equals 1", half_space_mu1, 1.0, 1e-12));

    Ok(CounterexampleReport {
        square_tensor_mu1,
        rows,
        half_space_mu1,
        half_space_axis_value: axis,
        checks,
    })
}
