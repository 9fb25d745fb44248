use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{all_finite, DynamicsError, SimConfig};
use crate::grid::{Field, SpectralOps};

/// Strang splitting `N(dt/2) L(dt) N(dt/2)` on a periodic tensor grid.
pub struct SplitStepper {
    ops: Arc<SpectralOps>,
    weight: Vec<f64>,
    lambda: f64,
    sigma: f64,
    dealias: bool,
}

impl SplitStepper {
    pub fn new(cfg: &SimConfig) -> Result<Self, DynamicsError> {
        if cfg.grid.is_radial() {
            return Err(DynamicsError::InvalidConfig(
                "split-step needs a tensor grid".into(),
            ));
        }
        Ok(Self {
            ops: SpectralOps::shared(&cfg.grid)?,
            weight: cfg.model.weight.on_grid(&cfg.grid),
            lambda: cfg.model.lambda,
            sigma: cfg.model.sigma,
            dealias: cfg.dealias,
        })
    }

    /// `u ← u·exp(−i τ λ w |u|^σ)`; leaves |u| unchanged pointwise.
    fn nonlinear(&self, u: &mut [Complex64], tau: f64) {
        if self.lambda == 0.0 {
            return;
        }
        let (lambda, sigma) = (self.lambda, self.sigma);
        u.par_iter_mut().zip(self.weight.par_iter()).for_each(|(v, w)| {
            let a = v.norm();
            if a > 0.0 {
                let phase = -tau * lambda * w * a.powf(sigma);
                *v *= Complex64::from_polar(1.0, phase);
            }
        });
    }

    /// `û ← e^{−i dt |ξ|²} û`.
    fn linear(&self, u: &mut [Complex64], dt: f64) {
        self.ops.forward(u);
        self.ops
            .apply_multiplier(u, |k2| Complex64::from_polar(1.0, -dt * k2));
        if self.dealias {
            self.ops.dealias(u);
        }
        self.ops.inverse(u);
    }

    pub fn step(&self, u: &mut [Complex64], dt: f64) {
        self.nonlinear(u, 0.5 * dt);
        self.linear(u, dt);
        self.nonlinear(u, 0.5 * dt);
    }
}

/// One Strang step of the configured equation.
pub fn strang_step(u: &Field, cfg: &SimConfig, dt: f64) -> Result<Field, DynamicsError> {
    let stepper = SplitStepper::new(cfg)?;
    let mut values = u.values().to_vec();
    stepper.step(&mut values, dt);
    if !all_finite(&values) {
        return Err(DynamicsError::NonFinite);
    }
    let mut out = u.with_values(values)?;
    out.time_tag = u.time_tag + dt;
    Ok(out)
}
