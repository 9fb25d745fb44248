use num_complex::Complex64;

use super::{all_finite, DynamicsError, SimConfig};
use crate::grid::{Field, RadialOperator};

/// Crank–Nicolson for `u_t = iHu`, `H = Δ_r − λφ`, with the density
/// `φ = w|u|^σ` relaxed at half steps:
/// `φ^{k+½} = (1+ρ) w|u^k|^σ − ρ φ^{k−½}`, `ρ = dt_k/dt_{k−1}`.
pub struct RadialStepper {
    op: RadialOperator,
    weight: Vec<f64>,
    lambda: f64,
    sigma: f64,
    phi_prev: Option<Vec<f64>>,
    dt_prev: f64,
    // Thomas scratch
    c_prime: Vec<Complex64>,
    d_prime: Vec<Complex64>,
}

impl RadialStepper {
    pub fn new(cfg: &SimConfig) -> Self {
        let m = cfg.grid.len();
        Self {
            op: RadialOperator::new(&cfg.grid),
            weight: cfg.model.weight.on_grid(&cfg.grid),
            lambda: cfg.model.lambda,
            sigma: cfg.model.sigma,
            phi_prev: None,
            dt_prev: 0.0,
            c_prime: vec![Complex64::new(0.0, 0.0); m],
            d_prime: vec![Complex64::new(0.0, 0.0); m],
        }
    }

    /// Discards the relaxation history; the next step cold-starts with
    /// `φ^{−½} = w|u|^σ`.
    pub fn reset(&mut self) {
        self.phi_prev = None;
    }

    pub fn step(&mut self, u: &mut [Complex64], dt: f64) {
        let phi: Vec<f64> = match self.phi_prev.take() {
            None => self.density(u),
            Some(prev) => {
                let rho = dt / self.dt_prev;
                let now = self.density(u);
                now.iter()
                    .zip(&prev)
                    .map(|(d, p)| (1.0 + rho) * d - rho * p)
                    .collect()
            }
        };
        self.solve(u, &phi, dt);
        self.phi_prev = Some(phi);
        self.dt_prev = dt;
    }

    fn density(&self, u: &[Complex64]) -> Vec<f64> {
        u.iter()
            .zip(&self.weight)
            .map(|(v, w)| {
                let a = v.norm();
                if a == 0.0 {
                    0.0
                } else {
                    w * a.powf(self.sigma)
                }
            })
            .collect()
    }

    /// `(1 − i dt/2 H) u⁺ = (1 + i dt/2 H) u` with `H = Δ_r − λφ`.
    fn solve(&mut self, u: &mut [Complex64], phi: &[f64], dt: f64) {
        let m = u.len();
        let half = Complex64::new(0.0, 0.5 * dt);
        let op = &self.op;
        let lambda = self.lambda;
        let diag = |j: usize| op.diagonal(j) - lambda * phi[j];
        let zero = Complex64::new(0.0, 0.0);

        let rhs: Vec<Complex64> = (0..m)
            .map(|j| {
                let left = if j > 0 { u[j - 1] * op.lower[j] } else { zero };
                let right = if j + 1 < m { u[j + 1] * op.upper[j] } else { zero };
                u[j] + half * (left + u[j] * diag(j) + right)
            })
            .collect();

        // Thomas algorithm
        let one = Complex64::new(1.0, 0.0);
        let sub = |j: usize| -half * op.lower[j];
        let sup = |j: usize| -half * op.upper[j];
        let mut denom = one - half * diag(0);
        self.c_prime[0] = if m > 1 { sup(0) / denom } else { zero };
        self.d_prime[0] = rhs[0] / denom;
        for j in 1..m {
            let a = sub(j);
            denom = one - half * diag(j) - a * self.c_prime[j - 1];
            self.c_prime[j] = if j + 1 < m { sup(j) / denom } else { zero };
            self.d_prime[j] = (rhs[j] - a * self.d_prime[j - 1]) / denom;
        }
        u[m - 1] = self.d_prime[m - 1];
        for j in (0..m - 1).rev() {
            u[j] = self.d_prime[j] - self.c_prime[j] * u[j + 1];
        }
    }
}

/// One cold-started relaxation step.
pub fn radial_cn_step(u: &Field, cfg: &SimConfig, dt: f64) -> Result<Field, DynamicsError> {
    if !cfg.grid.is_radial() {
        return Err(DynamicsError::InvalidConfig(
            "Crank-Nicolson stepper needs a radial grid".into(),
        ));
    }
    let mut stepper = RadialStepper::new(cfg);
    let mut values = u.values().to_vec();
    stepper.step(&mut values, dt);
    if !all_finite(&values) {
        return Err(DynamicsError::NonFinite);
    }
    let mut out = u.with_values(values)?;
    out.time_tag = u.time_tag + dt;
    Ok(out)
}
