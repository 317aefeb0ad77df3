//! Functions represented by grid samples: the carrier for solved
//! eigenfunctions, test profiles, and rearrangement inputs.

use crate::error::{Error, Result};

/// A function on a 1D grid: strictly increasing abscissae, values, and
/// optional derivative samples. With derivatives the interpolant is cubic
/// Hermite (C¹); without, piecewise linear. Evaluation outside the grid
/// clamps to the end samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
    derivs: Option<Vec<f64>>,
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::build(grid, values, None)
    }

    pub fn with_derivs(grid: Vec<f64>, values: Vec<f64>, derivs: Vec<f64>) -> Result<Self> {
        Self::build(grid, values, Some(derivs))
    }

    fn build(grid: Vec<f64>, values: Vec<f64>, derivs: Option<Vec<f64>>) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::InvalidDomain("need at least two samples".into()));
        }
        if grid.len() != values.len() {
            return Err(Error::InvalidDomain(format!(
                "grid/value length mismatch: {} vs {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(d) = &derivs {
            if d.len() != grid.len() {
                return Err(Error::InvalidDomain("derivative sample length mismatch".into()));
            }
            if d.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidDomain("non-finite derivative sample".into()));
            }
        }
        if grid.iter().any(|v| !v.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDomain("non-finite sample".into()));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidDomain("grid must be strictly increasing".into()));
        }
        Ok(SampledFunction { grid, values, derivs })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivs(&self) -> Option<&[f64]> {
        self.derivs.as_deref()
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn left(&self) -> f64 {
        self.grid[0]
    }

    pub fn right(&self) -> f64 {
        *self.grid.last().expect("non-empty")
    }

    /// Index of the segment containing `x` (clamped to the grid range).
    fn segment(&self, x: f64) -> usize {
        match self.grid.partition_point(|&g| g <= x) {
            0 => 0,
            p if p >= self.grid.len() => self.grid.len() - 2,
            p => p - 1,
        }
    }

    /// Interpolated value and first derivative at `x`.
    pub fn eval_with_deriv(&self, x: f64) -> (f64, f64) {
        let i = self.segment(x);
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let h = x1 - x0;
        let t = ((x - x0) / h).clamp(0.0, 1.0);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        match &self.derivs {
            Some(d) => {
                // Cubic Hermite basis on [0,1] scaled by h.
                let (d0, d1) = (d[i] * h, d[i + 1] * h);
                let t2 = t * t;
                let t3 = t2 * t;
                let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
                    + (t3 - 2.0 * t2 + t) * d0
                    + (-2.0 * t3 + 3.0 * t2) * y1
                    + (t3 - t2) * d1;
                let dv = (6.0 * t2 - 6.0 * t) * y0
                    + (3.0 * t2 - 4.0 * t + 1.0) * d0
                    + (-6.0 * t2 + 6.0 * t) * y1
                    + (3.0 * t2 - 2.0 * t) * d1;
                (v, dv / h)
            }
            None => (y0 + (y1 - y0) * t, (y1 - y0) / h),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with_deriv(x).0
    }

    pub fn deriv(&self, x: f64) -> f64 {
        self.eval_with_deriv(x).1
    }

    /// ∫ f(x, u(x), u′(x)) dx over the grid span by per-segment 5-point
    /// Gauss–Legendre (exact through degree 9 per segment, so exact for
    /// products of the cubic interpolant and its derivative against
    /// polynomial factors; smooth weights converge at the grid rate).
    pub fn integrate<F: Fn(f64, f64, f64) -> f64>(&self, f: F) -> f64 {
        // Closed-form 5-point Gauss–Legendre nodes and weights on [-1, 1].
        let a = (10.0_f64 / 7.0).sqrt();
        let nodes = [
            -((5.0 + 2.0 * a) / 9.0_f64).sqrt(),
            -((5.0 - 2.0 * a) / 9.0_f64).sqrt(),
            0.0,
            ((5.0 - 2.0 * a) / 9.0_f64).sqrt(),
            ((5.0 + 2.0 * a) / 9.0_f64).sqrt(),
        ];
        let s70 = 70.0_f64.sqrt();
        let weights = [
            (322.0 - 13.0 * s70) / 900.0,
            (322.0 + 13.0 * s70) / 900.0,
            128.0 / 225.0,
            (322.0 + 13.0 * s70) / 900.0,
            (322.0 - 13.0 * s70) / 900.0,
        ];
        let mut total = 0.0;
        for i in 0..self.grid.len() - 1 {
            let (x0, x1) = (self.grid[i], self.grid[i + 1]);
            let c = 0.5 * (x0 + x1);
            let hw = 0.5 * (x1 - x0);
            let mut seg = 0.0;
            for (z, w) in nodes.iter().zip(weights.iter()) {
                let x = c + hw * z;
                let (u, du) = self.eval_with_deriv(x);
                seg += w * f(x, u, du);
            }
            total += seg * hw;
        }
        total
    }

    /// Same samples scaled by `c`.
    pub fn scaled(&self, c: f64) -> SampledFunction {
        SampledFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
            derivs: self.derivs.as_ref().map(|d| d.iter().map(|v| c * v).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(SampledFunction::new(vec![0.0], vec![1.0]).is_err());
        assert!(SampledFunction::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(SampledFunction::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(SampledFunction::new(vec![0.0, f64::NAN], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn linear_interpolation_between_and_beyond_samples() {
        let f = SampledFunction::new(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 2.0]).unwrap();
        assert_eq!(f.eval(0.5), 1.0);
        assert_eq!(f.eval(2.0), 2.0);
        assert_eq!(f.deriv(0.25), 2.0);
        // Clamped outside the span.
        assert_eq!(f.eval(-5.0), 0.0);
        assert_eq!(f.eval(9.0), 2.0);
    }

    #[test]
    fn hermite_interpolant_reproduces_cubics_exactly() {
        // u(x) = x³ − 2x: samples + derivatives on a coarse grid suffice.
        let grid: Vec<f64> = (0..6).map(|i| -1.5 + i as f64 * 0.6).collect();
        let values: Vec<f64> = grid.iter().map(|&x| x * x * x - 2.0 * x).collect();
        let derivs: Vec<f64> = grid.iter().map(|&x| 3.0 * x * x - 2.0).collect();
        let f = SampledFunction::with_derivs(grid, values, derivs).unwrap();
        let mut x = -1.5;
        while x <= 1.5 {
            let (v, dv) = f.eval_with_deriv(x);
            assert!((v - (x * x * x - 2.0 * x)).abs() < 1e-13, "value at {x}");
            assert!((dv - (3.0 * x * x - 2.0)).abs() < 1e-12, "deriv at {x}");
            x += 0.07;
        }
    }

    #[test]
    fn integrate_is_exact_for_polynomial_data() {
        // ∫₀² (u′)² dx for u = x² (derivative 2x): exact value 32/3.
        let grid: Vec<f64> = (0..9).map(|i| i as f64 * 0.25).collect();
        let values: Vec<f64> = grid.iter().map(|&x| x * x).collect();
        let derivs: Vec<f64> = grid.iter().map(|&x| 2.0 * x).collect();
        let f = SampledFunction::with_derivs(grid, values, derivs).unwrap();
        let v = f.integrate(|_, _, du| du * du);
        assert!((v - 32.0 / 3.0).abs() < 1e-12);
        // ∫ x·u dx for u = x²: ∫₀² x³ = 4.
        let v = f.integrate(|x, u, _| x * u);
        assert!((v - 4.0).abs() < 1e-12);
    }

    #[test]
    fn integrate_converges_for_smooth_weights() {
        // ∫₋₁¹ e^{−x²/2} dx against a dense Hermite-sampled cosine.
        let n = 400;
        let grid: Vec<f64> = (0..=n).map(|i| -1.0 + 2.0 * i as f64 / n as f64).collect();
        let values: Vec<f64> = grid.iter().map(|&x| x.cos()).collect();
        let derivs: Vec<f64> = grid.iter().map(|&x| -x.sin()).collect();
        let f = SampledFunction::with_derivs(grid, values, derivs).unwrap();
        let v = f.integrate(|x, u, _| u * (-0.5 * x * x).exp());
        let oracle = crate::special::quad(|x| x.cos() * (-0.5 * x * x).exp(), -1.0, 1.0, 1e-14)
            .unwrap();
        assert!((v - oracle).abs() < 1e-10, "{v} vs {oracle}");
    }
}
