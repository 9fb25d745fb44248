//! Finite-volume radial Laplacian on the cell-centred grid.
//!
//! `(Δu)_j = [F_{j+½}(u_{j+1} − u_j) − F_{j−½}(u_j − u_{j−1})] / V_j` with face
//! fluxes `F_{j+½} = r_{j+½}^{n−1}/h` and cell volumes `V_j`. The inner face
//! sits at r = 0 and carries no flux (reflection). Outside the last cell the
//! ghost value is `α u_{N−1}` with α = 0 (Dirichlet) or the harmonic
//! continuation factor `(r_{N−1}/r_N)^{n−2}`. Either way the operator is
//! symmetric in the cell-volume inner product.

use num_complex::Complex64;

use super::{GridSpec, RadialBoundary};
use crate::quadrature::sphere_area;

/// `((j+1)^n − j^n)/n`, expanded binomially to avoid cancellation.
fn unit_cell_volume(j: usize, n: usize) -> f64 {
    let j = j as f64;
    let mut sum = 0.0;
    let mut binom = 1.0;
    let mut jk = 1.0;
    for k in 0..n {
        sum += binom * jk;
        binom = binom * (n - k) as f64 / (k + 1) as f64;
        jk *= j;
    }
    sum / n as f64
}

/// Cell volumes including the sphere area factor.
pub(super) fn cell_volumes(grid: &GridSpec) -> Vec<f64> {
    let (n, points) = (grid.dim(), grid.points());
    let h = grid.spacing();
    let scale = sphere_area(n) * h.powi(n as i32);
    (0..points).map(|j| scale * unit_cell_volume(j, n)).collect()
}

/// Tridiagonal coefficients of the radial Laplacian.
#[derive(Debug, Clone)]
pub struct RadialOperator {
    /// `F_{j−½}/V_j`, zero for j = 0.
    pub lower: Vec<f64>,
    /// `F_{j+½}/V_j`.
    pub upper: Vec<f64>,
    /// `F_{j+½}` (without the sphere factor).
    flux: Vec<f64>,
    /// Ghost factor α.
    ghost: f64,
    area: f64,
}

impl RadialOperator {
    pub fn new(grid: &GridSpec) -> Self {
        assert!(grid.is_radial(), "radial operator on a tensor grid");
        let (n, points) = (grid.dim(), grid.points());
        let h = grid.spacing();
        let flux: Vec<f64> = (0..points)
            .map(|j| ((j + 1) as f64 * h).powi(n as i32 - 1) / h)
            .collect();
        // volumes without the sphere factor
        let vol: Vec<f64> = (0..points)
            .map(|j| h.powi(n as i32) * unit_cell_volume(j, n))
            .collect();
        let upper = (0..points).map(|j| flux[j] / vol[j]).collect();
        let lower = (0..points)
            .map(|j| if j == 0 { 0.0 } else { flux[j - 1] / vol[j] })
            .collect();
        let ghost = match grid.radial_boundary() {
            Some(RadialBoundary::Harmonic) => {
                ((points as f64 - 0.5) / (points as f64 + 0.5)).powi(n as i32 - 2)
            }
            _ => 0.0,
        };
        Self {
            lower,
            upper,
            flux,
            ghost,
            area: sphere_area(n),
        }
    }

    pub fn len(&self) -> usize {
        self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper.is_empty()
    }

    /// Diagonal entry of the Laplacian in row j.
    pub fn diagonal(&self, j: usize) -> f64 {
        let last = j + 1 == self.len();
        let out = if last { 1.0 - self.ghost } else { 1.0 };
        -(self.upper[j] * out + self.lower[j])
    }

    pub fn apply(&self, u: &[Complex64]) -> Vec<Complex64> {
        let m = u.len();
        (0..m)
            .map(|j| {
                let right = if j + 1 < m { u[j + 1] } else { u[j] * self.ghost };
                let left = if j > 0 { u[j - 1] } else { u[j] };
                (right - u[j]) * self.upper[j] - (u[j] - left) * self.lower[j]
            })
            .collect()
    }

    /// `‖∇u‖² = S_{n−1} Σ_j F_{j+½}|u_{j+1} − u_j|²`, equal to `−⟨u, Δu⟩`.
    /// The outer face contributes `F(1−α)|u_{N−1}|²`.
    pub fn gradient_norm_sq(&self, u: &[Complex64]) -> f64 {
        let m = u.len();
        if m == 0 {
            return 0.0;
        }
        let interior: f64 = (0..m - 1)
            .map(|j| self.flux[j] * (u[j + 1] - u[j]).norm_sqr())
            .sum();
        let outer = self.flux[m - 1] * (1.0 - self.ghost) * u[m - 1].norm_sqr();
        self.area * (interior + outer)
    }
}
