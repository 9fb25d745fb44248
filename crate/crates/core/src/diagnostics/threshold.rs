//! Ground-state thresholds for blow-up in the energy-critical focusing case.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{energy_parts, DiagnosticsError, Nonlinearity};
use crate::exponents::{
    format_rational, rat, theorem_hypotheses, to_f64, CriticalityParams, Symmetry,
    TheoremId,
};
use crate::grid::Field;
use crate::ground_state::{scaled_energy_ratio, GroundStateQuantities};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowupCase {
    NegativeEnergy,
    BelowGroundStateAboveNorm,
    NoVerdict,
}

impl fmt::Display for BlowupCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlowupCase::NegativeEnergy => "negative_energy",
            BlowupCase::BelowGroundStateAboveNorm => "below_ground_state_above_norm",
            BlowupCase::NoVerdict => "no_verdict",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub e0: f64,
    pub h1_0: f64,
    pub e_w: f64,
    pub h1_w: f64,
    pub case: BlowupCase,
    pub symmetry: Symmetry,
    /// `1 − E(u₀)/E(W)`, only in the below-ground-state case.
    pub delta: Option<f64>,
}

impl ThresholdReport {
    /// `E(u₀)/‖W‖²_{Ḣ¹}`.
    pub fn energy_ratio(&self) -> f64 {
        self.e0 / (self.h1_w * self.h1_w)
    }
}

fn case_of(e0: f64, h1_0: f64, e_w: f64, h1_w: f64) -> BlowupCase {
    if e0 < 0.0 {
        BlowupCase::NegativeEnergy
    } else if e0 < e_w && h1_0 > h1_w {
        BlowupCase::BelowGroundStateAboveNorm
    } else {
        BlowupCase::NoVerdict
    }
}

/// Compares `E(u₀)`, `‖u₀‖_{Ḣ¹}` with the ground-state values.
pub fn classify_blowup(
    u0: &Field,
    model: &Nonlinearity,
    params: &CriticalityParams,
    gs: &GroundStateQuantities,
    symmetry: Symmetry,
) -> Result<ThresholdReport, DiagnosticsError> {
    let n = params.n();
    if n < 3 {
        return Err(DiagnosticsError::NotCritical(format!("n = {n} < 3")));
    }
    let sigma = params.sigma();
    let critical = (rat(4, 1) - params.b() * rat(2, 1)) / rat(n as i64 - 2, 1);
    if sigma != critical {
        return Err(DiagnosticsError::NotCritical(format!(
            "sigma = {} but (4-2b)/(n-2) = {}",
            format_rational(&sigma),
            format_rational(&critical)
        )));
    }
    if model.lambda != -1.0 {
        return Err(DiagnosticsError::NotFocusing(model.lambda));
    }
    let verdict = theorem_hypotheses(TheoremId::T1_13 { symmetry }, params);
    if !verdict.holds {
        return Err(DiagnosticsError::Hypothesis(verdict.failing().join("; ")));
    }
    if (to_f64(&sigma) - gs.sigma1).abs() > 1e-12 * gs.sigma1 {
        return Err(DiagnosticsError::NotCritical(format!(
            "ground state was computed for sigma = {}",
            gs.sigma1
        )));
    }

    let parts = energy_parts(u0, model)?;
    let e0 = parts.energy(model);
    let h1_0 = parts.h1dot_sq.sqrt();
    let (e_w, h1_w) = (gs.energy, gs.h1dot());
    let case = case_of(e0, h1_0, e_w, h1_w);
    let delta = (case == BlowupCase::BelowGroundStateAboveNorm).then(|| 1.0 - e0 / e_w);
    Ok(ThresholdReport {
        e0,
        h1_0,
        e_w,
        h1_w,
        case,
        symmetry,
        delta,
    })
}

/// Verdict for `u₀ = c·W` from the scaling algebra alone:
/// `E(cW)/‖W‖² = c²/2 − c^{σ+2}/(σ+2)` and `‖cW‖/‖W‖ = c`.
pub fn classify_scaled_ground_state(c: f64, gs: &GroundStateQuantities) -> BlowupCase {
    let p = gs.sigma1 + 2.0;
    let (ratio, norm_ratio) = scaled_energy_ratio(c, gs);
    case_of(ratio, norm_ratio, 0.5 - 1.0 / p, 1.0)
}

/// `g(y) = y²/2 − C^{σ+2}/(σ+2) · y^{σ+2}`.
pub fn g_threshold(y: f64, gs: &GroundStateQuantities) -> f64 {
    let p = gs.sigma1 + 2.0;
    0.5 * y * y - gs.c_hs.powf(p) / p * y.powf(p)
}

/// Maximiser of `g` on `y > 0` by golden-section search after bracketing
/// by doubling.
pub fn g_argmax(gs: &GroundStateQuantities) -> f64 {
    let g = |y: f64| g_threshold(y, gs);
    let mut hi = 1.0;
    while g(2.0 * hi) > g(hi) {
        hi *= 2.0;
    }
    while hi > 1e-300 && g(0.5 * hi) > g(hi) {
        hi *= 0.5;
    }
    let (mut a, mut b) = (0.0, 2.0 * hi);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if b - a <= 1e-15 * b {
            break;
        }
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    0.5 * (a + b)
}
