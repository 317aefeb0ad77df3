//! Shared oracle for integration tests: a cell-centered finite-volume
//! discretization of the weighted Sturm–Liouville problem
//!
//!     −(w u′)′/w + v·u = μ u   on (a, b),
//!
//! solved by Sturm-sequence bisection on the generalized tridiagonal
//! eigenproblem. This route shares nothing with the library's shooting
//! solver (no Prüfer phase, no adaptive integration, no Newton polish),
//! so agreement between the two is meaningful.

/// Generalized tridiagonal pencil `A u = μ C u` with `A` symmetric
/// (diagonal `d`, off-diagonal `e`) and `C` diagonal positive.
pub struct Pencil {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
    pub c: Vec<f64>,
}

impl Pencil {
    /// Number of eigenvalues strictly below `sigma`, from the inertia of
    /// the LDLᵀ factorization of `A − σC`.
    fn count_below(&self, sigma: f64) -> usize {
        let n = self.d.len();
        let mut count = 0;
        let mut prev = 1.0_f64;
        for i in 0..n {
            let mut di = self.d[i] - sigma * self.c[i];
            if i > 0 {
                di -= self.e[i - 1] * self.e[i - 1] / prev;
            }
            if di == 0.0 {
                di = f64::MIN_POSITIVE;
            }
            if di < 0.0 {
                count += 1;
            }
            prev = di;
        }
        count
    }

    /// The `k`-th (0-based) generalized eigenvalue by bisection.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        // Gershgorin bounds for C⁻¹A.
        let n = self.d.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut radius = 0.0;
            if i > 0 {
                radius += self.e[i - 1].abs();
            }
            if i + 1 < n {
                radius += self.e[i].abs();
            }
            lo = lo.min((self.d[i] - radius) / self.c[i]);
            hi = hi.max((self.d[i] + radius) / self.c[i]);
        }
        lo = lo.min(0.0) - 1.0;
        hi += 1.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum FvBc {
    Neumann,
    Dirichlet,
}

/// Assemble the cell-centered finite-volume pencil on `[a, b]` with `m`
/// cells: face transmissibilities `w(face)/h` (halved distance at
/// Dirichlet boundaries, zero flux at Neumann ones), cell masses
/// `w(center)·h`, and a multiplicative potential lumped at centers.
pub fn assemble(
    a: f64,
    b: f64,
    m: usize,
    w: impl Fn(f64) -> f64,
    v: impl Fn(f64) -> f64,
    bc_left: FvBc,
    bc_right: FvBc,
) -> Pencil {
    let h = (b - a) / m as f64;
    let mut d = vec![0.0; m];
    let mut e = vec![0.0; m - 1];
    let mut c = vec![0.0; m];
    for i in 0..m {
        let center = a + (i as f64 + 0.5) * h;
        c[i] = w(center) * h;
        d[i] = v(center) * c[i];
    }
    for i in 1..m {
        let t = w(a + i as f64 * h) / h;
        d[i - 1] += t;
        d[i] += t;
        e[i - 1] = -t;
    }
    if bc_left == FvBc::Dirichlet {
        d[0] += w(a) / (0.5 * h);
    }
    if bc_right == FvBc::Dirichlet {
        d[m - 1] += w(b) / (0.5 * h);
    }
    Pencil { d, e, c }
}

/// `k`-th eigenvalue of `−u″ + xu′ = μu` on `[a, b]` (Gaussian weight
/// `e^{−x²/2}`), Richardson-extrapolated from grids of `m` and `2m` cells.
pub fn fd_eig1d(a: f64, b: f64, bc: FvBc, k: usize, m: usize) -> f64 {
    let w = |x: f64| (-0.5 * x * x).exp();
    let coarse = assemble(a, b, m, w, |_| 0.0, bc, bc).eigenvalue(k);
    let fine = assemble(a, b, 2 * m, w, |_| 0.0, bc, bc).eigenvalue(k);
    (4.0 * fine - coarse) / 3.0
}

/// `k`-th eigenvalue of the radial branch in dimension `n` with angular
/// number `ell` on `(0, r)`: weight `r^{n−1}e^{−r²/2}`, potential
/// `ℓ(ℓ+n−2)/r²`. The face at the origin carries zero weight, so the
/// natural condition there needs no special casing.
pub fn fd_radial(n: usize, ell: usize, r: f64, bc: FvBc, k: usize, m: usize) -> f64 {
    let nf = n as f64;
    let lf = ell as f64;
    let kbar = lf * (lf + nf - 2.0);
    let w = move |s: f64| s.powf(nf - 1.0) * (-0.5 * s * s).exp();
    let v = move |s: f64| kbar / (s * s);
    let coarse = assemble(0.0, r, m, w, v, FvBc::Neumann, bc).eigenvalue(k);
    let fine = assemble(0.0, r, 2 * m, w, v, FvBc::Neumann, bc).eigenvalue(k);
    (4.0 * fine - coarse) / 3.0
}

/// Deterministic SplitMix64 stream for reproducible random test cases.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + u * (hi - lo)
    }
}
