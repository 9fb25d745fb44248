//! Spatial integrals and the Laplacian on either grid kind.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{Field, GridError, GridSpec, PotentialWeight, RadialOperator, SpectralOps};

/// Share of the outer radius defining the boundary shell.
const BOUNDARY_SHELL: f64 = 0.9;

fn weighted_sum(u: &Field, density: impl Fn(usize, &[f64], Complex64) -> f64) -> f64 {
    let grid = u.grid();
    let weights = grid.quadrature_weights();
    let mut total = 0.0;
    grid.for_each_node(|i, c| total += weights[i] * density(i, c, u.values()[i]));
    total
}

/// `‖u‖²_{L²}`.
pub fn mass(u: &Field) -> f64 {
    let weights = u.grid().quadrature_weights();
    u.values()
        .par_iter()
        .zip(weights.par_iter())
        .map(|(v, w)| w * v.norm_sqr())
        .sum()
}

/// `‖u‖_{Ḣ^s}`. Radial grids support s = 0 and s = 1 only.
pub fn hs_norm(u: &Field, s: f64) -> Result<f64, GridError> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(GridError::Unsupported(format!("Sobolev index s = {s}")));
    }
    if s == 0.0 {
        return Ok(mass(u).sqrt());
    }
    let grid = u.grid();
    match *grid {
        GridSpec::Radial { .. } => {
            if s != 1.0 {
                return Err(GridError::Unsupported(format!(
                    "radial grids only provide s = 1, got s = {s}"
                )));
            }
            Ok(RadialOperator::new(grid).gradient_norm_sq(u.values()).sqrt())
        }
        GridSpec::Tensor { n, .. } => {
            let ops = SpectralOps::shared(grid)?;
            let mut spec = u.values().to_vec();
            ops.forward(&mut spec);
            // Parseval: Σ h^n|u|² = h^n/N^n Σ|û|²
            let norm = grid.spacing().powi(n as i32) / grid.len() as f64;
            Ok((norm * ops.weighted_power(&spec, s)).sqrt())
        }
    }
}

/// `∫ w(x)|u|^{σ+2} dx`.
pub fn weighted_potential_integral(u: &Field, w: &PotentialWeight, sigma: f64) -> f64 {
    let radii = u.grid().radii();
    let weights = u.grid().quadrature_weights();
    let p = sigma + 2.0;
    u.values()
        .par_iter()
        .zip(radii.par_iter().zip(weights.par_iter()))
        .map(|(v, (&r, q))| {
            let a = v.norm();
            if a == 0.0 {
                0.0
            } else {
                q * w.eval(r) * a.powf(p)
            }
        })
        .sum()
}

/// `∫ |x|²|u|² dx`.
pub fn variance(u: &Field) -> f64 {
    weighted_quadratic(u, |c| c.iter().map(|x| x * x).sum())
}

/// `∫ a(x)|u|² dx`; `a` receives `(x_1, …, x_n)` or `(r)` on radial grids.
pub fn weighted_quadratic(u: &Field, a: impl Fn(&[f64]) -> f64) -> f64 {
    weighted_sum(u, |_, c, v| {
        let m = v.norm_sqr();
        if m == 0.0 {
            0.0
        } else {
            a(c) * m
        }
    })
}

pub fn laplacian_apply(u: &Field) -> Result<Field, GridError> {
    let grid = u.grid();
    let values = match *grid {
        GridSpec::Radial { .. } => RadialOperator::new(grid).apply(u.values()),
        GridSpec::Tensor { .. } => {
            let ops = SpectralOps::shared(grid)?;
            let mut spec = u.values().to_vec();
            ops.forward(&mut spec);
            ops.apply_multiplier(&mut spec, |k2| Complex64::new(-k2, 0.0));
            ops.inverse(&mut spec);
            spec
        }
    };
    u.with_values(values)
}

/// Mass fraction in the outer 10% of the domain: `max_i |x_i| ≥ 0.45L` on
/// tensor grids, `r ≥ 0.9 r_max` on radial grids.
pub fn boundary_mass_fraction(u: &Field) -> f64 {
    let total = mass(u);
    if total == 0.0 {
        return 0.0;
    }
    let edge = BOUNDARY_SHELL * u.grid().outer_radius();
    let outer = weighted_quadratic(u, |c| {
        if c.iter().any(|x| x.abs() >= edge) {
            1.0
        } else {
            0.0
        }
    });
    outer / total
}

pub fn max_amplitude(u: &Field) -> f64 {
    u.values().iter().map(|v| v.norm()).fold(0.0, f64::max)
}
