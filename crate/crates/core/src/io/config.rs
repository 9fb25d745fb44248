//! Run configuration file (JSON).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::dynamics::SimConfig;
use crate::exponents::{
    format_rational, parse_rational, Coupling, CriticalityParams, Power, Rational,
};
use crate::grid::{Field, GridSpec, PotentialWeight, RadialBoundary};
use crate::ground_state::{w_eval, GroundStateProfile};

/// Rational entered either as a JSON string ("3/2", "0.25") or a number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Text(String),
    Integer(i64),
    Float(f64),
}

impl RationalText {
    pub fn parse(&self) -> Result<Rational, IoError> {
        let text = match self {
            RationalText::Text(s) => s.clone(),
            RationalText::Integer(i) => i.to_string(),
            RationalText::Float(f) => format!("{f}"),
        };
        parse_rational(&text).map_err(|e| IoError::Config(format!("`{text}`: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub n: u32,
    pub s: RationalText,
    pub b: RationalText,
    /// "auto" for the critical power.
    pub sigma: RationalText,
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    Tensor,
    Radial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub kind: GridKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
    pub points: usize,
    /// Radial grids only; defaults to Dirichlet.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<RadialBoundary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeltaText {
    /// "auto": one spacing on tensor grids, zero on radial grids.
    Auto(String),
    Value(f64),
}

impl Default for DeltaText {
    fn default() -> Self {
        DeltaText::Auto("auto".into())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSection {
    #[serde(default)]
    pub delta: DeltaText,
}

fn default_true() -> bool {
    true
}
fn default_blowup_ratio() -> f64 {
    1e3
}
fn default_safety() -> f64 {
    0.1
}
fn default_dt_min() -> f64 {
    1e-12
}
fn default_record_every() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub dt_init: f64,
    #[serde(default = "default_dt_min")]
    pub dt_min: f64,
    pub t_end: f64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default = "default_blowup_ratio")]
    pub blowup_ratio: f64,
    #[serde(default = "default_safety")]
    pub safety: f64,
    #[serde(default)]
    pub dealias: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    Gaussian,
    GroundStateScaled,
    File,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    #[serde(rename = "type")]
    pub kind: InitialKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale_c: Option<f64>,
    /// ε of the ground-state profile; 1 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub directory: PathBuf,
    /// Start and end dumps; on unless switched off.
    #[serde(default = "default_true")]
    pub dump_fields: bool,
    /// Extra dumps every this many steps when `dump_fields` is set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dump_every: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub virial_radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub params: ParamsSection,
    pub grid: GridSection,
    #[serde(default)]
    pub weight: WeightSection,
    pub time: TimeSection,
    pub initial: InitialSection,
    pub output: OutputSection,
}

/// Validated configuration with exact parameters resolved.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub file: RunConfigFile,
    pub sim: SimConfig,
}

impl RunConfigFile {
    pub fn from_json(text: &str) -> Result<Self, IoError> {
        serde_json::from_str(text).map_err(|e| IoError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| IoError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn params(&self) -> Result<CriticalityParams, IoError> {
        let p = &self.params;
        let s = p.s.parse()?;
        let b = p.b.parse()?;
        let power = match &p.sigma {
            RationalText::Text(t) if t == "auto" => Power::Critical,
            other => Power::Value(other.parse()?),
        };
        CriticalityParams::new(p.n, s, b, power, Coupling::from_real(p.lambda))
            .map_err(|e| IoError::Config(e.to_string()))
    }

    pub fn grid_spec(&self) -> Result<GridSpec, IoError> {
        let g = &self.grid;
        let n = self.params.n as usize;
        let spec = match g.kind {
            GridKind::Tensor => {
                if g.r_max.is_some() || g.boundary.is_some() {
                    return Err(IoError::Config(
                        "tensor grids take `extent`, not `r_max`/`boundary`".into(),
                    ));
                }
                let extent = g
                    .extent
                    .ok_or_else(|| IoError::Config("tensor grid needs `extent`".into()))?;
                GridSpec::tensor(n, extent, g.points)
            }
            GridKind::Radial => {
                if g.extent.is_some() {
                    return Err(IoError::Config("radial grids take `r_max`, not `extent`".into()));
                }
                let r_max = g
                    .r_max
                    .ok_or_else(|| IoError::Config("radial grid needs `r_max`".into()))?;
                GridSpec::radial(n, r_max, g.points)
                    .map(|s| s.with_boundary(g.boundary.unwrap_or_default()))
            }
        };
        spec.map_err(|e| IoError::Config(e.to_string()))
    }

    /// Canonical form: rationals rewritten as "num/den", `sigma` kept as
    /// "auto" when it was.
    pub fn canonical(&self) -> Result<Self, IoError> {
        let mut out = self.clone();
        out.params.s = RationalText::Text(format_rational(&self.params.s.parse()?));
        out.params.b = RationalText::Text(format_rational(&self.params.b.parse()?));
        if !matches!(&self.params.sigma, RationalText::Text(t) if t == "auto") {
            out.params.sigma = RationalText::Text(format_rational(&self.params.sigma.parse()?));
        }
        Ok(out)
    }

    pub fn resolve(&self) -> Result<ResolvedConfig, IoError> {
        let params = self.params()?;
        let grid = self.grid_spec()?;
        let b = crate::exponents::to_f64(params.b());
        let weight = match &self.weight.delta {
            DeltaText::Auto(t) if t == "auto" => PotentialWeight::for_grid(b, &grid),
            DeltaText::Auto(t) => {
                return Err(IoError::Config(format!(
                    "weight.delta must be \"auto\" or a number, got `{t}`"
                )))
            }
            DeltaText::Value(d) => PotentialWeight::new(b, *d),
        }
        .map_err(|e| IoError::Config(e.to_string()))?;
        let mut sim = SimConfig::new(params, self.params.lambda, grid, weight)
            .map_err(|e| IoError::Config(e.to_string()))?;
        let t = &self.time;
        sim.dt_init = t.dt_init;
        sim.dt_min = t.dt_min;
        sim.t_end = t.t_end;
        sim.record_every = t.record_every;
        sim.blowup_ratio = t.blowup_ratio;
        sim.safety = t.safety;
        sim.dealias = t.dealias;
        sim.max_steps = t.max_steps;
        sim.virial_radius = self.output.virial_radius;
        sim.validate().map_err(|e| IoError::Config(e.to_string()))?;
        self.check_initial()?;
        Ok(ResolvedConfig {
            file: self.clone(),
            sim,
        })
    }

    fn check_initial(&self) -> Result<(), IoError> {
        let i = &self.initial;
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| IoError::Config(format!("initial.{name} is required for this type")))
        };
        match i.kind {
            InitialKind::Gaussian => {
                need(i.amplitude, "amplitude")?;
                let w = need(i.width, "width")?;
                if !(w > 0.0) {
                    return Err(IoError::Config(format!("initial.width = {w}")));
                }
            }
            InitialKind::GroundStateScaled => {
                need(i.scale_c, "scale_c")?;
            }
            InitialKind::File => {
                if i.path.is_none() {
                    return Err(IoError::Config("initial.path is required for type file".into()));
                }
            }
        }
        Ok(())
    }
}

impl ResolvedConfig {
    /// Ground-state profile for `ground_state_scaled` data.
    pub fn ground_state_profile(&self) -> Result<GroundStateProfile, IoError> {
        let b = crate::exponents::to_f64(self.sim.params.b());
        let eps = self.file.initial.epsilon.unwrap_or(1.0);
        GroundStateProfile::new(self.sim.grid.dim(), b, eps)
            .map_err(|e| IoError::Config(e.to_string()))
    }

    /// Samples the initial field. `base` resolves relative dump paths.
    pub fn initial_field(&self, base: &Path) -> Result<Field, IoError> {
        let i = &self.file.initial;
        let grid = self.sim.grid;
        let field = match i.kind {
            InitialKind::Gaussian => {
                let (a, w) = (i.amplitude.unwrap_or(1.0), i.width.unwrap_or(1.0));
                Field::from_radial_fn(grid, |r| a * (-r * r / (2.0 * w * w)).exp())
            }
            InitialKind::GroundStateScaled => {
                let c = i.scale_c.unwrap_or(1.0);
                let profile = self.ground_state_profile()?;
                Field::from_radial_fn(grid, |r| c * w_eval(&profile, r))
            }
            InitialKind::File => {
                let path = i.path.as_ref().expect("checked on resolve");
                let path = if path.is_relative() {
                    base.join(path)
                } else {
                    path.clone()
                };
                let (field, _) = super::dump::read_field(&path)?;
                if *field.grid() != grid {
                    return Err(IoError::Config(format!(
                        "{} holds a field on a different grid",
                        path.display()
                    )));
                }
                Ok(field)
            }
        }
        .map_err(|e| IoError::Config(e.to_string()))?;
        let mut field = field;
        field.time_tag = 0.0;
        Ok(field)
    }
}
