//! Conserved quantities, virial observables and blow-up thresholds.
//!
//! Sign convention: `iu_t + Δu = λ w(x)|u|^σ u`, so λ < 0 focuses and
//! `E(u) = ½‖∇u‖² + λ/(σ+2) ∫ w|u|^{σ+2}`.

mod threshold;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{self, Field, GridError, PotentialWeight};

pub use threshold::{
    classify_blowup, classify_scaled_ground_state, g_argmax, g_threshold, BlowupCase, ThresholdReport,
};

#[derive(Debug, Clone, Error)]
pub enum DiagnosticsError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("classifier needs the energy-critical power: {0}")]
    NotCritical(String),
    #[error("classifier needs the focusing equation with lambda = -1, got {0}")]
    NotFocusing(f64),
    #[error("hypotheses fail: {0}")]
    Hypothesis(String),
}

/// Coupling, power and regularised weight of the model nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Nonlinearity {
    pub lambda: f64,
    pub sigma: f64,
    pub weight: PotentialWeight,
}

/// Pieces of the energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParts {
    pub h1dot_sq: f64,
    pub weighted_potential: f64,
}

impl EnergyParts {
    pub fn energy(&self, model: &Nonlinearity) -> f64 {
        0.5 * self.h1dot_sq + model.lambda / (model.sigma + 2.0) * self.weighted_potential
    }
}

pub fn energy_parts(u: &Field, model: &Nonlinearity) -> Result<EnergyParts, GridError> {
    let h1 = grid::hs_norm(u, 1.0)?;
    Ok(EnergyParts {
        h1dot_sq: h1 * h1,
        weighted_potential: grid::weighted_potential_integral(u, &model.weight, model.sigma),
    })
}

pub fn energy(u: &Field, model: &Nonlinearity) -> Result<f64, GridError> {
    Ok(energy_parts(u, model)?.energy(model))
}

/// `∫ w (nσ − 2 x·∇w/w) |u|^{σ+2}`; for `w = |x|^{-b}` the bracket is `nσ+2b`.
fn virial_potential(u: &Field, model: &Nonlinearity) -> f64 {
    let g = u.grid();
    let n = g.dim() as f64;
    let radii = g.radii();
    let q = g.quadrature_weights();
    let p = model.sigma + 2.0;
    u.values()
        .iter()
        .zip(radii.iter().zip(&q))
        .map(|(v, (&r, &q))| {
            let a = v.norm();
            if a == 0.0 {
                return 0.0;
            }
            let w = model.weight.eval(r);
            let bracket = n * model.sigma - 2.0 * model.weight.log_radial_derivative(r);
            q * w * bracket * a.powf(p)
        })
        .sum()
}

/// Right-hand side of the variance identity,
/// `d²/dt² ∫|x|²|u|² = 8‖∇u‖² + 4λ/(σ+2) ∫ w (nσ − 2x·∇w/w)|u|^{σ+2}`.
/// With λ = −1 and δ = 0 this is `8‖∇u‖² − 4(nσ+2b)/(σ+2) ∫|x|^{-b}|u|^{σ+2}`.
pub fn virial_rhs(u: &Field, model: &Nonlinearity) -> Result<f64, GridError> {
    let h1 = grid::hs_norm(u, 1.0)?;
    Ok(8.0 * h1 * h1 + 4.0 * model.lambda / (model.sigma + 2.0) * virial_potential(u, model))
}

/// `(θ, θ′, θ″)` of the cutoff: `r²` on [0,1], `−r²+4r−2` on [1,2], 2 beyond.
pub fn theta_cutoff(r: f64) -> (f64, f64, f64) {
    if r <= 1.0 {
        (r * r, 2.0 * r, 2.0)
    } else if r <= 2.0 {
        (-r * r + 4.0 * r - 2.0, -2.0 * r + 4.0, -2.0)
    } else {
        (2.0, 0.0, 0.0)
    }
}

/// `φ_R(x) = R² θ(|x|/R)`.
pub fn phi_r_weight(x: &[f64], radius: f64) -> f64 {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    radius * radius * theta_cutoff(r / radius).0
}

/// `ψ_R(y) + x_n²` with `ψ_R(y) = R² θ(|y|/R)` on the first n−1 coordinates.
pub fn cylindrical_phi_r(y: &[f64], x_n: f64, radius: f64) -> f64 {
    phi_r_weight(y, radius) + x_n * x_n
}

/// `∫ φ_R |u|²`.
pub fn localized_virial(u: &Field, radius: f64) -> f64 {
    grid::weighted_quadratic(u, |c| phi_r_weight(c, radius))
}

/// `∫ (ψ_R(y) + x_n²)|u|²` on tensor grids; radial grids have no axis.
pub fn localized_virial_cylindrical(u: &Field, radius: f64) -> Result<f64, GridError> {
    if u.grid().is_radial() {
        return Err(GridError::Unsupported(
            "cylindrical weights need a tensor grid".into(),
        ));
    }
    let n = u.grid().dim();
    Ok(grid::weighted_quadratic(u, |c| {
        cylindrical_phi_r(&c[..n - 1], c[n - 1], radius)
    }))
}

/// One time sample of the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    pub h1dot_sq: f64,
    pub weighted_potential: f64,
    pub variance: Option<f64>,
    pub virial_rhs: f64,
    pub localized_virial: Option<f64>,
    pub boundary_mass_fraction: f64,
    pub dt: f64,
    pub max_amp: f64,
}

pub const CSV_COLUMNS: [&str; 11] = [
    "t",
    "mass",
    "energy",
    "h1dot_sq",
    "weighted_potential",
    "variance",
    "virial_rhs",
    "localized_virial",
    "boundary_mass_fraction",
    "dt",
    "max_amp",
];

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

impl DiagnosticsRecord {
    pub fn capture(
        u: &Field,
        model: &Nonlinearity,
        t: f64,
        dt: f64,
        virial_radius: Option<f64>,
    ) -> Result<Self, GridError> {
        let parts = energy_parts(u, model)?;
        Ok(Self {
            t,
            mass: grid::mass(u),
            energy: parts.energy(model),
            h1dot_sq: parts.h1dot_sq,
            weighted_potential: parts.weighted_potential,
            variance: Some(grid::variance(u)),
            virial_rhs: 8.0 * parts.h1dot_sq
                + 4.0 * model.lambda / (model.sigma + 2.0) * virial_potential(u, model),
            localized_virial: virial_radius.map(|r| localized_virial(u, r)),
            boundary_mass_fraction: grid::boundary_mass_fraction(u),
            dt,
            max_amp: grid::max_amplitude(u),
        })
    }

    pub fn csv_header() -> String {
        CSV_COLUMNS.join(",")
    }

    pub fn csv_row(&self) -> String {
        [
            Some(self.t),
            Some(self.mass),
            Some(self.energy),
            Some(self.h1dot_sq),
            Some(self.weighted_potential),
            self.variance,
            Some(self.virial_rhs),
            self.localized_virial,
            Some(self.boundary_mass_fraction),
            Some(self.dt),
            Some(self.max_amp),
        ]
        .into_iter()
        .map(cell)
        .collect::<Vec<_>>()
        .join(",")
    }
}
