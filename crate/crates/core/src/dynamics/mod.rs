//! Time stepping: Strang splitting on periodic tensor grids, linearly implicit
//! Crank–Nicolson with a relaxed nonlinear density on radial grids.

mod radial_cn;
mod split_step;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagnostics::{DiagnosticsRecord, Nonlinearity};
use crate::exponents::{to_f64, CriticalityParams};
use crate::grid::{self, Field, GridError, GridSpec, PotentialWeight};

pub use radial_cn::{radial_cn_step, RadialStepper};
pub use split_step::{strang_step, SplitStepper};

/// Consecutive steps at `dt_min` that end a run.
pub const UNDERFLOW_STEPS: usize = 10;

#[derive(Debug, Clone, Error)]
pub enum DynamicsError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("non-finite value produced by the stepper")]
    NonFinite,
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub params: CriticalityParams,
    pub model: Nonlinearity,
    pub grid: GridSpec,
    pub dt_init: f64,
    pub t_end: f64,
    pub dt_min: f64,
    pub blowup_ratio: f64,
    /// Cap on the nonlinear phase rotation per step, in radians.
    pub safety: f64,
    pub record_every: usize,
    /// Two-thirds rule in the split-step linear substep.
    pub dealias: bool,
    /// Cutoff radius for the localized virial column.
    pub virial_radius: Option<f64>,
    /// Step budget; exhausting it ends the run with `step_limit`.
    pub max_steps: Option<usize>,
}

impl SimConfig {
    /// Config with default time controls: `dt_init = 1e-3`, `t_end = 1`,
    /// `dt_min = 1e-12`, `blowup_ratio = 1e3`, `safety = 0.1`,
    /// `record_every = 10`.
    pub fn new(
        params: CriticalityParams,
        lambda: f64,
        grid: GridSpec,
        weight: PotentialWeight,
    ) -> Result<Self, DynamicsError> {
        let sigma = to_f64(&params.sigma());
        let cfg = Self {
            params,
            model: Nonlinearity {
                lambda,
                sigma,
                weight,
            },
            grid,
            dt_init: 1e-3,
            t_end: 1.0,
            dt_min: 1e-12,
            blowup_ratio: 1e3,
            safety: 0.1,
            record_every: 10,
            dealias: false,
            virial_radius: None,
            max_steps: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let bad = |m: String| Err(DynamicsError::InvalidConfig(m));
        self.grid.validate()?;
        self.model.weight.check_grid(&self.grid)?;
        if self.params.n() as usize != self.grid.dim() {
            return bad(format!(
                "params have n = {} but the grid has n = {}",
                self.params.n(),
                self.grid.dim()
            ));
        }
        if !self.model.lambda.is_finite() {
            return bad(format!("lambda = {}", self.model.lambda));
        }
        if !(self.dt_init > 0.0 && self.t_end > 0.0 && self.dt_min > 0.0) {
            return bad("dt_init, t_end and dt_min must be positive".into());
        }
        if self.dt_min >= self.dt_init {
            return bad(format!(
                "dt_min = {} must be below dt_init = {}",
                self.dt_min, self.dt_init
            ));
        }
        if !(self.blowup_ratio > 1.0) {
            return bad(format!("blowup_ratio = {} must exceed 1", self.blowup_ratio));
        }
        if !(self.safety > 0.0 && self.safety < 1.0) {
            return bad(format!("safety = {} must lie in (0, 1)", self.safety));
        }
        if self.max_steps == Some(0) {
            return bad("max_steps must be positive".into());
        }
        if self.record_every == 0 {
            return bad("record_every must be positive".into());
        }
        if let Some(r) = self.virial_radius {
            if !(r > 0.0) {
                return bad(format!("virial radius {r}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    BlowupDetected,
    DtUnderflow,
    NonFinite,
    StepLimit,
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Termination::Completed => "completed",
            Termination::BlowupDetected => "blowup_detected",
            Termination::DtUnderflow => "dt_underflow",
            Termination::NonFinite => "non_finite",
            Termination::StepLimit => "step_limit",
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub termination: Termination,
    pub t_final: f64,
    pub steps: usize,
    pub series: Vec<DiagnosticsRecord>,
    /// Last finite state.
    pub final_field: Field,
    /// `‖u(t_final)‖_{Ḣ¹}/‖u₀‖_{Ḣ¹}`.
    pub h1_growth: f64,
}

/// `clamp(min(dt_init, safety / max|λ| w |u|^σ), dt_min, dt_init)`.
pub fn adapt_dt(u: &Field, cfg: &SimConfig, _dt_prev: f64) -> f64 {
    let radii = u.grid().radii();
    let m = &cfg.model;
    let peak = u
        .values()
        .par_iter()
        .zip(radii.par_iter())
        .map(|(v, &r)| m.lambda.abs() * m.weight.eval(r) * v.norm().powf(m.sigma))
        .reduce(|| 0.0, f64::max);
    let dt = if peak > 0.0 {
        cfg.dt_init.min(cfg.safety / peak)
    } else {
        cfg.dt_init
    };
    dt.clamp(cfg.dt_min, cfg.dt_init)
}

enum Stepper {
    Split(SplitStepper),
    Radial(RadialStepper),
}

impl Stepper {
    fn new(cfg: &SimConfig) -> Result<Self, DynamicsError> {
        Ok(if cfg.grid.is_radial() {
            Stepper::Radial(RadialStepper::new(cfg))
        } else {
            Stepper::Split(SplitStepper::new(cfg)?)
        })
    }

    fn step(&mut self, u: &mut [Complex64], dt: f64) {
        match self {
            Stepper::Split(s) => s.step(u, dt),
            Stepper::Radial(s) => s.step(u, dt),
        }
    }
}

pub(crate) fn all_finite(u: &[Complex64]) -> bool {
    u.par_iter().all(|v| v.re.is_finite() && v.im.is_finite())
}

/// Advances `u0` to `t_end`, or until blow-up is detected, `dt` underflows, or
/// a non-finite value appears.
pub fn run(cfg: &SimConfig, u0: &Field) -> Result<RunOutcome, DynamicsError> {
    run_observed(cfg, u0, |_, _| {})
}

/// [`run`], calling `observe(step, field)` after every accepted step.
pub fn run_observed(
    cfg: &SimConfig,
    u0: &Field,
    mut observe: impl FnMut(usize, &Field),
) -> Result<RunOutcome, DynamicsError> {
    cfg.validate()?;
    if *u0.grid() != cfg.grid {
        return Err(DynamicsError::InvalidConfig(
            "initial field does not live on the configured grid".into(),
        ));
    }
    let mut stepper = Stepper::new(cfg)?;
    let h1_0 = grid::hs_norm(u0, 1.0)?;
    let mut series = vec![DiagnosticsRecord::capture(
        u0,
        &cfg.model,
        0.0,
        adapt_dt(u0, cfg, cfg.dt_init),
        cfg.virial_radius,
    )?];

    let mut field = u0.clone();
    field.time_tag = 0.0;
    let mut t = 0.0;
    let mut steps = 0usize;
    let mut pinned = 0usize;
    let mut dt = cfg.dt_init;
    let mut growth = 1.0;
    let termination = loop {
        if t >= cfg.t_end {
            break Termination::Completed;
        }
        dt = adapt_dt(&field, cfg, dt);
        if dt <= cfg.dt_min {
            pinned += 1;
        } else {
            pinned = 0;
        }
        let remaining = cfg.t_end - t;
        let last = dt >= remaining;
        let this_dt = if last { remaining } else { dt };

        let mut next = field.values().to_vec();
        stepper.step(&mut next, this_dt);
        if !all_finite(&next) {
            break Termination::NonFinite;
        }
        t = if last { cfg.t_end } else { t + this_dt };
        steps += 1;
        field = field.with_values(next)?;
        field.time_tag = t;
        observe(steps, &field);

        let h1 = grid::hs_norm(&field, 1.0)?;
        growth = if h1_0 > 0.0 { h1 / h1_0 } else { 1.0 };
        let blowup = h1_0 > 0.0 && growth >= cfg.blowup_ratio;
        let underflow = pinned >= UNDERFLOW_STEPS;
        let budget = cfg.max_steps.is_some_and(|m| steps >= m);
        if steps % cfg.record_every == 0 || blowup || underflow || budget || t >= cfg.t_end {
            series.push(DiagnosticsRecord::capture(
                &field,
                &cfg.model,
                t,
                this_dt,
                cfg.virial_radius,
            )?);
        }
        if t >= cfg.t_end {
            break Termination::Completed;
        }
        if blowup {
            break Termination::BlowupDetected;
        }
        if underflow {
            break Termination::DtUnderflow;
        }
        if budget {
            break Termination::StepLimit;
        }
    };
    Ok(RunOutcome {
        termination,
        t_final: t,
        steps,
        series,
        final_field: field,
        h1_growth: growth,
    })
}
