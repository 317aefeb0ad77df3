//! Small linear-algebra kernels for the 2D grid solver: a symmetric
//! banded matrix with an LDLᵀ factorization (used for shifted inverse
//! iteration) and a dense generalized symmetric eigensolver with diagonal
//! mass matrix (used as a fallback and as a cross-check on coarse grids).

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Symmetric banded matrix. Only the lower triangle is stored:
/// `bands[k][i] = A[i+k][i]` for `k = 0..=bw`.
#[derive(Debug, Clone)]
pub struct SymBanded {
    n: usize,
    bw: usize,
    bands: Vec<Vec<f64>>,
}

impl SymBanded {
    pub fn zeros(n: usize, bw: usize) -> Self {
        let bands = (0..=bw).map(|k| vec![0.0; n.saturating_sub(k)]).collect();
        SymBanded { n, bw, bands }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let k = hi - lo;
        if k > self.bw {
            0.0
        } else {
            self.bands[k][lo]
        }
    }

    /// Add `v` to the (i, j) and (j, i) entries (stored once).
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let k = hi - lo;
        assert!(k <= self.bw, "entry ({i},{j}) outside bandwidth {}", self.bw);
        self.bands[k][lo] += v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = self.bands[0][i] * x[i];
            for k in 1..=self.bw {
                if i + k < self.n {
                    acc += self.bands[k][i] * x[i + k];
                }
                if i >= k {
                    acc += self.bands[k][i - k] * x[i - k];
                }
            }
            *yi = acc;
        }
        y
    }

    /// LDLᵀ factorization in band form (no pivoting). Fails on a pivot
    /// smaller than `1e-12` times the diagonal scale, which callers treat
    /// as "shift too close to an eigenvalue" and retry with a bumped
    /// shift.
    pub fn ldlt(&self) -> Result<BandedLdlt> {
        let n = self.n;
        let bw = self.bw;
        let scale = (0..n).fold(0.0_f64, |m, i| m.max(self.bands[0][i].abs())).max(1.0);
        let mut l = vec![vec![0.0; n]; bw + 1];
        let mut d = vec![0.0; n];
        for j in 0..n {
            let start = j.saturating_sub(bw);
            let mut dj = self.bands[0][j];
            for k in start..j {
                let ljk = l[j - k][k];
                dj -= ljk * ljk * d[k];
            }
            if dj.abs() < 1e-12 * scale {
                return Err(Error::NoConvergence(format!(
                    "LDLT pivot {dj:.3e} at row {j} is numerically singular"
                )));
            }
            d[j] = dj;
            let imax = (j + bw + 1).min(n);
            for i in j + 1..imax {
                let mut v = if i - j <= bw { self.bands[i - j][j] } else { 0.0 };
                let kstart = i.saturating_sub(bw).max(start);
                for k in kstart..j {
                    v -= l[i - k][k] * l[j - k][k] * d[k];
                }
                l[i - j][j] = v / dj;
            }
        }
        Ok(BandedLdlt { n, bw, l, d })
    }
}

/// Factorization produced by [`SymBanded::ldlt`].
#[derive(Debug, Clone)]
pub struct BandedLdlt {
    n: usize,
    bw: usize,
    /// `l[k][j] = L[j+k][j]` for k = 1..=bw (l[0] unused).
    l: Vec<Vec<f64>>,
    d: Vec<f64>,
}

impl BandedLdlt {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let mut x = b.to_vec();
        // Forward: L z = b.
        for j in 0..self.n {
            let xj = x[j];
            for k in 1..=self.bw {
                if j + k < self.n {
                    x[j + k] -= self.l[k][j] * xj;
                }
            }
        }
        // Diagonal.
        for j in 0..self.n {
            x[j] /= self.d[j];
        }
        // Backward: Lᵀ y = z.
        for j in (0..self.n).rev() {
            let mut acc = x[j];
            for k in 1..=self.bw {
                if j + k < self.n {
                    acc -= self.l[k][j] * x[j + k];
                }
            }
            x[j] = acc;
        }
        x
    }
}

/// Solve the dense generalized symmetric eigenproblem `A v = λ M v` with
/// diagonal positive `M`, returning all pairs sorted ascending. The
/// eigenvectors are M-normalized.
pub fn dense_generalized_eigs(
    a: &DMatrix<f64>,
    m_diag: &[f64],
) -> Result<Vec<(f64, DVector<f64>)>> {
    let n = a.nrows();
    if a.ncols() != n || m_diag.len() != n {
        return Err(Error::InvalidDomain("matrix dimensions mismatch".into()));
    }
    if m_diag.iter().any(|m| !(*m > 0.0)) {
        return Err(Error::InvalidDomain("mass matrix must be positive".into()));
    }
    let sqrt_inv: Vec<f64> = m_diag.iter().map(|m| 1.0 / m.sqrt()).collect();
    let mut b = a.clone();
    for i in 0..n {
        for j in 0..n {
            b[(i, j)] *= sqrt_inv[i] * sqrt_inv[j];
        }
    }
    // Symmetrize against rounding before factorizing.
    let b = (&b + b.transpose()) * 0.5;
    let eig = b.symmetric_eigen();
    let mut pairs: Vec<(f64, DVector<f64>)> = (0..n)
        .map(|k| {
            let mut v = DVector::zeros(n);
            for i in 0..n {
                v[i] = eig.eigenvectors[(i, k)] * sqrt_inv[i];
            }
            (eig.eigenvalues[k], v)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(pairs)
}

/// Solve a small dense generalized symmetric eigenproblem `A v = λ B v`
/// with symmetric positive-definite `B` (not necessarily diagonal), as
/// arises from Rayleigh–Ritz projections. Returns ascending eigenvalues
/// and the matrix whose columns are B-orthonormal eigenvectors.
pub fn projected_generalized_eigs(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(Error::InvalidDomain("projected matrices must be square".into()));
    }
    let chol = b
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NoConvergence("projected mass matrix is not positive".into()))?;
    let l = chol.l();
    // C = L⁻¹ A L⁻ᵀ.
    let w = l
        .solve_lower_triangular(a)
        .ok_or_else(|| Error::NoConvergence("singular Cholesky factor".into()))?;
    let c = l
        .solve_lower_triangular(&w.transpose())
        .ok_or_else(|| Error::NoConvergence("singular Cholesky factor".into()))?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = c.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| eig.eigenvalues[p].total_cmp(&eig.eigenvalues[q]));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let z = DMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
    let vectors = l
        .transpose()
        .solve_upper_triangular(&z)
        .ok_or_else(|| Error::NoConvergence("singular Cholesky factor".into()))?;
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_spd_banded(n: usize, bw: usize, rng: &mut ChaCha8Rng) -> SymBanded {
        let mut a = SymBanded::zeros(n, bw);
        for i in 0..n {
            for k in 1..=bw {
                if i + k < n {
                    a.add(i + k, i, rng.gen_range(-1.0..1.0));
                }
            }
        }
        // Diagonal dominance makes it SPD.
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    row += a.get(i, j).abs();
                }
            }
            a.add(i, i, row + rng.gen_range(0.5..1.5));
        }
        a
    }

    fn to_dense(a: &SymBanded) -> DMatrix<f64> {
        DMatrix::from_fn(a.n(), a.n(), |i, j| a.get(i, j))
    }

    #[test]
    fn banded_solve_matches_dense_lu() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let n = rng.gen_range(10..60);
            let bw = rng.gen_range(1..6).min(n - 1);
            let a = random_spd_banded(n, bw, &mut rng);
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x = a.ldlt().unwrap().solve(&b);
            let dense = to_dense(&a);
            let xd = dense.lu().solve(&DVector::from_vec(b.clone())).unwrap();
            for i in 0..n {
                assert!((x[i] - xd[i]).abs() < 1e-9, "solution mismatch at {i}");
            }
            // Residual check.
            let ax = a.mul_vec(&x);
            for i in 0..n {
                assert!((ax[i] - b[i]).abs() < 1e-9, "residual at {i}");
            }
        }
    }

    #[test]
    fn mul_vec_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = random_spd_banded(25, 4, &mut rng);
        let x: Vec<f64> = (0..25).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y = a.mul_vec(&x);
        let yd = to_dense(&a) * DVector::from_vec(x);
        for i in 0..25 {
            assert!((y[i] - yd[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn indefinite_shifted_system_solves() {
        // 1D Dirichlet Laplacian shifted into the interior of its
        // spectrum: LDLT without pivoting still factors it.
        let n = 40;
        let mut a = SymBanded::zeros(n, 1);
        for i in 0..n {
            a.add(i, i, 2.0 - 0.5);
            if i + 1 < n {
                a.add(i + 1, i, -1.0);
            }
        }
        let b: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let x = a.ldlt().unwrap().solve(&b);
        let ax = a.mul_vec(&x);
        for i in 0..n {
            assert!((ax[i] - b[i]).abs() < 1e-8, "residual at {i}: {}", ax[i] - b[i]);
        }
    }

    #[test]
    fn singular_pivot_is_reported() {
        let mut a = SymBanded::zeros(3, 1);
        a.add(0, 0, 1.0);
        a.add(1, 1, 0.0);
        a.add(2, 2, 1.0);
        assert!(matches!(a.ldlt(), Err(Error::NoConvergence(_))));
    }

    #[test]
    fn dense_generalized_matches_tridiagonal_formula() {
        // A = tridiag(-1, 2, -1) has eigenvalues 2 - 2 cos(kπ/(n+1)).
        let n = 20;
        let a = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                2.0
            } else if i.abs_diff(j) == 1 {
                -1.0
            } else {
                0.0
            }
        });
        let m = vec![1.0; n];
        let pairs = dense_generalized_eigs(&a, &m).unwrap();
        for (k, (val, _)) in pairs.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((val - exact).abs() < 1e-10, "eigenvalue {k}: {val} vs {exact}");
        }
    }

    #[test]
    fn dense_generalized_with_random_mass() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 30;
        let sym = DMatrix::from_fn(n, n, |i, j| {
            let v = ((i * 31 + j * 17) % 13) as f64 / 13.0 - 0.5;
            let w = ((j * 31 + i * 17) % 13) as f64 / 13.0 - 0.5;
            v + w
        });
        let a = (&sym + sym.transpose()) * 0.5;
        let m: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..2.0)).collect();
        let pairs = dense_generalized_eigs(&a, &m).unwrap();
        // Residuals A v = λ M v and M-orthonormality of the returned pairs.
        for (val, v) in &pairs {
            let av = &a * v;
            for i in 0..n {
                assert!(
                    (av[i] - val * m[i] * v[i]).abs() < 1e-9,
                    "residual at {i} for eigenvalue {val}"
                );
            }
            let norm: f64 = (0..n).map(|i| v[i] * v[i] * m[i]).sum();
            assert!((norm - 1.0).abs() < 1e-9, "M-normalization {norm}");
        }
        // Ascending order.
        for w in pairs.windows(2) {
            assert!(w[0].0 <= w[1].0 + 1e-12);
        }
    }

    #[test]
    fn dense_generalized_rejects_bad_mass() {
        let a = DMatrix::identity(3, 3);
        assert!(dense_generalized_eigs(&a, &[1.0, -1.0, 1.0]).is_err());
        assert!(dense_generalized_eigs(&a, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn projected_generalized_solves_full_pencil() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let n = 8;
        let raw = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let a = (&raw + raw.transpose()) * 0.5;
        let rawb = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-0.3..0.3));
        let b = &rawb * rawb.transpose() + DMatrix::identity(n, n) * 2.0;
        let (values, vectors) = projected_generalized_eigs(&a, &b).unwrap();
        for w in values.windows(2) {
            assert!(w[0] <= w[1] + 1e-12);
        }
        for k in 0..n {
            let v = vectors.column(k);
            let av = &a * v;
            let bv = &b * v;
            for i in 0..n {
                assert!(
                    (av[i] - values[k] * bv[i]).abs() < 1e-9,
                    "pencil residual at ({i},{k})"
                );
            }
        }
        // B-orthonormality of the eigenvector basis.
        let gram = vectors.transpose() * &b * &vectors;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((gram[(i, j)] - want).abs() < 1e-9, "gram ({i},{j})");
            }
        }
        // A non-positive projected mass is rejected.
        let bad = DMatrix::identity(n, n) * -1.0;
        assert!(projected_generalized_eigs(&a, &bad).is_err());
    }
}
