//! Grids, complex fields and the spatial integrals built on them.
//!
//! Two discretisations are supported:
//!
//! * **tensor**: periodic box `[−L/2, L/2)^n`, `n ≤ 3`, `N` points per axis
//!   (a power of two), trapezoid quadrature and spectral derivatives with
//!   wavenumbers `ξ = 2πk/L`, `k ∈ {−N/2, …, N/2−1}`;
//! * **radial**: cell-centred nodes `r_j = (j+½)h`, `h = r_max/N`, for radial
//!   data in `n ≥ 3` dimensions. Cell volumes `S_{n−1}((j+1)^n − j^n)h^n/n`
//!   are the quadrature weights, so the finite-volume Laplacian is symmetric
//!   with respect to the same inner product that defines the mass.

mod integrals;
mod radial;
mod spectral;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use integrals::{
    boundary_mass_fraction, hs_norm, laplacian_apply, mass, max_amplitude, variance,
    weighted_potential_integral, weighted_quadratic,
};
pub use radial::RadialOperator;
pub use spectral::SpectralOps;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GridError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("field has {found} values but the grid has {expected} nodes")]
    SizeMismatch { expected: usize, found: usize },
    #[error("field value at node {0} is not finite")]
    NonFinite(usize),
    #[error("unsupported on this grid: {0}")]
    Unsupported(String),
    #[error("invalid potential weight: {0}")]
    InvalidWeight(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridSpec {
    Tensor {
        n: usize,
        extent: f64,
        points: usize,
    },
    Radial {
        n: usize,
        r_max: f64,
        points: usize,
        #[serde(default)]
        boundary: RadialBoundary,
    },
}

/// Outer boundary condition of a radial grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialBoundary {
    /// Ghost value zero outside the last cell.
    #[default]
    Dirichlet,
    /// Ghost value continues the exterior harmonic `r^{2−n}`, i.e.
    /// `u_N = (r_{N−1}/r_N)^{n−2} u_{N−1}`. The quadratic form then includes
    /// the Dirichlet energy of the harmonic extension beyond `r_max`.
    Harmonic,
}

impl GridSpec {
    pub fn tensor(n: usize, extent: f64, points: usize) -> Result<Self, GridError> {
        let g = GridSpec::Tensor { n, extent, points };
        g.validate()?;
        Ok(g)
    }

    pub fn radial(n: usize, r_max: f64, points: usize) -> Result<Self, GridError> {
        let g = GridSpec::Radial {
            n,
            r_max,
            points,
            boundary: RadialBoundary::Dirichlet,
        };
        g.validate()?;
        Ok(g)
    }

    /// Same radial grid with another outer boundary; tensor grids are
    /// returned unchanged.
    pub fn with_boundary(self, boundary: RadialBoundary) -> Self {
        match self {
            GridSpec::Radial { n, r_max, points, .. } => GridSpec::Radial {
                n,
                r_max,
                points,
                boundary,
            },
            t => t,
        }
    }

    pub fn radial_boundary(&self) -> Option<RadialBoundary> {
        match *self {
            GridSpec::Radial { boundary, .. } => Some(boundary),
            GridSpec::Tensor { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<(), GridError> {
        match *self {
            GridSpec::Tensor { n, extent, points } => {
                if !(1..=3).contains(&n) {
                    return Err(GridError::InvalidGrid(format!(
                        "tensor grids support n in 1..=3, got {n}"
                    )));
                }
                if points < 8 || !points.is_power_of_two() {
                    return Err(GridError::InvalidGrid(format!(
                        "points per axis must be a power of two >= 8, got {points}"
                    )));
                }
                if !(extent > 0.0 && extent.is_finite()) {
                    return Err(GridError::InvalidGrid(format!("extent {extent}")));
                }
            }
            GridSpec::Radial { n, r_max, points, .. } => {
                if n < 3 {
                    return Err(GridError::InvalidGrid(format!(
                        "radial grids need n >= 3, got {n}"
                    )));
                }
                if points < 8 {
                    return Err(GridError::InvalidGrid(format!(
                        "radial grid needs at least 8 nodes, got {points}"
                    )));
                }
                if !(r_max > 0.0 && r_max.is_finite()) {
                    return Err(GridError::InvalidGrid(format!("r_max {r_max}")));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match *self {
            GridSpec::Tensor { n, .. } | GridSpec::Radial { n, .. } => n,
        }
    }

    pub fn points(&self) -> usize {
        match *self {
            GridSpec::Tensor { points, .. } | GridSpec::Radial { points, .. } => points,
        }
    }

    pub fn is_radial(&self) -> bool {
        matches!(self, GridSpec::Radial { .. })
    }

    /// Number of stored values.
    pub fn len(&self) -> usize {
        match *self {
            GridSpec::Tensor { n, points, .. } => points.pow(n as u32),
            GridSpec::Radial { points, .. } => points,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self) -> f64 {
        match *self {
            GridSpec::Tensor { extent, points, .. } => extent / points as f64,
            GridSpec::Radial { r_max, points, .. } => r_max / points as f64,
        }
    }

    /// Half-width of the box (tensor) or outer radius (radial).
    pub fn outer_radius(&self) -> f64 {
        match *self {
            GridSpec::Tensor { extent, .. } => 0.5 * extent,
            GridSpec::Radial { r_max, .. } => r_max,
        }
    }

    /// Axis coordinates `−L/2 + jh` of a tensor grid, or radii `(j+½)h`.
    pub fn axis(&self) -> Vec<f64> {
        let h = self.spacing();
        match *self {
            GridSpec::Tensor { extent, points, .. } => {
                (0..points).map(|j| -0.5 * extent + j as f64 * h).collect()
            }
            GridSpec::Radial { points, .. } => {
                (0..points).map(|j| (j as f64 + 0.5) * h).collect()
            }
        }
    }

    /// Coordinates of node `index`, written into `out` (length n for tensor
    /// grids, length 1 holding the radius for radial grids).
    pub fn coords_into(&self, index: usize, axis: &[f64], out: &mut [f64]) {
        match *self {
            GridSpec::Tensor { n, points, .. } => {
                let mut rem = index;
                for d in (0..n).rev() {
                    out[d] = axis[rem % points];
                    rem /= points;
                }
            }
            GridSpec::Radial { .. } => out[0] = axis[index],
        }
    }

    fn coord_len(&self) -> usize {
        match *self {
            GridSpec::Tensor { n, .. } => n,
            GridSpec::Radial { .. } => 1,
        }
    }

    /// `|x|` at every node.
    pub fn radii(&self) -> Vec<f64> {
        let axis = self.axis();
        match *self {
            GridSpec::Radial { .. } => axis,
            GridSpec::Tensor { .. } => {
                let mut c = vec![0.0; self.coord_len()];
                (0..self.len())
                    .map(|i| {
                        self.coords_into(i, &axis, &mut c);
                        c.iter().map(|x| x * x).sum::<f64>().sqrt()
                    })
                    .collect()
            }
        }
    }

    /// Calls `f(index, coords)` on every node in storage order.
    pub fn for_each_node(&self, mut f: impl FnMut(usize, &[f64])) {
        let axis = self.axis();
        let mut c = vec![0.0; self.coord_len()];
        for i in 0..self.len() {
            self.coords_into(i, &axis, &mut c);
            f(i, &c);
        }
    }

    /// Quadrature weight of every node: `h^n` on tensor grids, the cell
    /// volume on radial grids.
    pub fn quadrature_weights(&self) -> Vec<f64> {
        match *self {
            GridSpec::Tensor { n, .. } => vec![self.spacing().powi(n as i32); self.len()],
            GridSpec::Radial { .. } => radial::cell_volumes(self),
        }
    }
}

/// `(|x|² + δ²)^{−b/2}`, the regularised inhomogeneity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialWeight {
    pub b: f64,
    pub delta: f64,
}

impl PotentialWeight {
    pub fn new(b: f64, delta: f64) -> Result<Self, GridError> {
        if !(b >= 0.0 && b.is_finite()) {
            return Err(GridError::InvalidWeight(format!("b = {b}")));
        }
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(GridError::InvalidWeight(format!("delta = {delta}")));
        }
        Ok(Self { b, delta })
    }

    /// Weight with the default regularisation: one grid spacing on tensor
    /// grids, none on radial grids.
    pub fn for_grid(b: f64, grid: &GridSpec) -> Result<Self, GridError> {
        let delta = if grid.is_radial() { 0.0 } else { grid.spacing() };
        Self::new(b, delta)
    }

    /// Tensor grids put a node on the origin, so they need δ > 0 when b > 0.
    pub fn check_grid(&self, grid: &GridSpec) -> Result<(), GridError> {
        if !grid.is_radial() && self.delta == 0.0 && self.b > 0.0 {
            return Err(GridError::InvalidWeight(
                "delta = 0 is only allowed on radial grids".into(),
            ));
        }
        Ok(())
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        if self.b == 0.0 {
            return 1.0;
        }
        (r * r + self.delta * self.delta).powf(-0.5 * self.b)
    }

    /// `x·∇w / w = −b r²/(r²+δ²)`.
    #[inline]
    pub fn log_radial_derivative(&self, r: f64) -> f64 {
        let r2 = r * r;
        if r2 == 0.0 {
            return 0.0;
        }
        -self.b * r2 / (r2 + self.delta * self.delta)
    }

    pub fn on_grid(&self, grid: &GridSpec) -> Vec<f64> {
        grid.radii().into_iter().map(|r| self.eval(r)).collect()
    }
}

/// Complex amplitude sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: GridSpec,
    values: Vec<Complex64>,
    pub time_tag: f64,
}

impl Field {
    pub fn new(grid: GridSpec, values: Vec<Complex64>, time_tag: f64) -> Result<Self, GridError> {
        grid.validate()?;
        if values.len() != grid.len() {
            return Err(GridError::SizeMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(GridError::NonFinite(i));
        }
        Ok(Self {
            grid,
            values,
            time_tag,
        })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self {
            grid,
            values,
            time_tag: 0.0,
        }
    }

    /// Samples `f(coords)`; coords are `(x_1, …, x_n)` on tensor grids and
    /// `(r)` on radial grids.
    pub fn from_fn(grid: GridSpec, f: impl Fn(&[f64]) -> Complex64) -> Result<Self, GridError> {
        grid.validate()?;
        let mut values = Vec::with_capacity(grid.len());
        grid.for_each_node(|_, c| values.push(f(c)));
        Self::new(grid, values, 0.0)
    }

    /// Real radial profile `f(|x|)` on either grid kind.
    pub fn from_radial_fn(grid: GridSpec, f: impl Fn(f64) -> f64) -> Result<Self, GridError> {
        Self::from_fn(grid, |c| {
            let r = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            Complex64::new(f(r), 0.0)
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn scaled(&self, factor: Complex64) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|v| v * factor).collect(),
            time_tag: self.time_tag,
        }
    }

    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Field, GridError> {
        Field::new(self.grid, values, self.time_tag)
    }
}
