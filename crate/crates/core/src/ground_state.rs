//! The explicit Hardy–Sobolev optimiser
//!
//! ```text
//! W(r) = [ε(n−b)(n−2)]^{(n−2)/(4−2b)} / (ε + r^{2−b})^{(n−2)/(2−b)}
//! ```
//!
//! solving `ΔW + |x|^{-b} W^{σ₁+1} = 0` with `σ₁ = (4−2b)/(n−2)`, and the
//! constants derived from it by radial quadrature.

use thiserror::Error;

use crate::quadrature::{sphere_area, AdaptiveQuadrature, QuadratureError};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GroundStateError {
    #[error("invalid ground-state profile: {0}")]
    InvalidProfile(String),
    #[error("W' is singular at r = 0 when b > 1 (b = {0})")]
    SingularDerivative(f64),
    #[error("negative radius {0}")]
    NegativeRadius(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStateProfile {
    n: usize,
    b: f64,
    epsilon: f64,
    sigma1: f64,
}

impl GroundStateProfile {
    /// Requires n ≥ 3, 0 ≤ b < 2 and ε > 0. The unweighted case b = 0 (the
    /// Aubin–Talenti bubble) is accepted.
    pub fn new(n: usize, b: f64, epsilon: f64) -> Result<Self, GroundStateError> {
        if n < 3 {
            return Err(GroundStateError::InvalidProfile(format!(
                "dimension n = {n} must be at least 3"
            )));
        }
        if !(0.0..2.0).contains(&b) {
            return Err(GroundStateError::InvalidProfile(format!(
                "b = {b} outside [0, 2)"
            )));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(GroundStateError::InvalidProfile(format!(
                "epsilon = {epsilon} must be positive"
            )));
        }
        let sigma1 = (4.0 - 2.0 * b) / (n as f64 - 2.0);
        Ok(Self {
            n,
            b,
            epsilon,
            sigma1,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn sigma1(&self) -> f64 {
        self.sigma1
    }

    /// Numerator constant `[ε(n−b)(n−2)]^{(n−2)/(4−2b)}`.
    pub fn amplitude(&self) -> f64 {
        let n = self.n as f64;
        (self.epsilon * (n - self.b) * (n - 2.0)).powf((n - 2.0) / (4.0 - 2.0 * self.b))
    }

    /// Decay exponent `k = (n−2)/(2−b)` of the denominator.
    fn k(&self) -> f64 {
        (self.n as f64 - 2.0) / (2.0 - self.b)
    }

    /// Radius where `r^{2−b} = ε`; the natural length scale of W.
    pub fn core_radius(&self) -> f64 {
        self.epsilon.powf(1.0 / (2.0 - self.b))
    }
}

pub fn w_eval(profile: &GroundStateProfile, r: f64) -> f64 {
    let r = r.abs();
    profile.amplitude() * (profile.epsilon + r.powf(2.0 - profile.b)).powf(-profile.k())
}

/// Analytic radial derivative `W'(r)`.
pub fn w_grad_eval(profile: &GroundStateProfile, r: f64) -> Result<f64, GroundStateError> {
    if r < 0.0 {
        return Err(GroundStateError::NegativeRadius(r));
    }
    let b = profile.b;
    let k = profile.k();
    let factor = -profile.amplitude() * k * (2.0 - b);
    if r == 0.0 {
        return if b < 1.0 {
            Ok(0.0)
        } else if b == 1.0 {
            Ok(factor * profile.epsilon.powf(-k - 1.0))
        } else {
            Err(GroundStateError::SingularDerivative(b))
        };
    }
    Ok(factor * r.powf(1.0 - b) * (profile.epsilon + r.powf(2.0 - b)).powf(-k - 1.0))
}

/// Controls for the radial integrals. Integration runs in `ln r` over
/// `core_radius · e^{±log_span}` with analytic end corrections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub order: usize,
    pub log_span: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-13,
            order: 20,
            log_span: 40.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStateQuantities {
    pub n: usize,
    pub b: f64,
    pub sigma1: f64,
    /// `‖W‖²_{Ḣ¹}`
    pub h1dot_sq: f64,
    /// `∫|x|^{-b} W^{σ₁+2}`
    pub potential_integral: f64,
    /// Sharp constant in `(∫|x|^{-b}|f|^{σ₁+2})^{1/(σ₁+2)} ≤ C ‖f‖_{Ḣ¹}`.
    pub c_hs: f64,
    /// `E(W)` with focusing sign.
    pub energy: f64,
}

impl GroundStateQuantities {
    pub fn h1dot(&self) -> f64 {
        self.h1dot_sq.sqrt()
    }

    /// Relative Pohozaev residual `|‖W‖² − ∫|x|^{-b}W^{σ₁+2}| / ‖W‖²`.
    pub fn pohozaev_residual(&self) -> f64 {
        (self.h1dot_sq - self.potential_integral).abs() / self.h1dot_sq
    }

    /// `C^{−2(n−b)/(2−b)}`, which equals `‖W‖²_{Ḣ¹}`.
    pub fn closed_form_h1dot_sq(&self) -> f64 {
        let n = self.n as f64;
        self.c_hs.powf(-2.0 * (n - self.b) / (2.0 - self.b))
    }

    /// `(2−b)/(2(n−b)) · C^{−2(n−b)/(2−b)}`, which equals `E(W)`.
    pub fn closed_form_energy(&self) -> f64 {
        let n = self.n as f64;
        (2.0 - self.b) / (2.0 * (n - self.b)) * self.closed_form_h1dot_sq()
    }
}

/// Computes `‖W‖²_{Ḣ¹}`, `∫|x|^{-b}W^{σ₁+2}`, the sharp constant and `E(W)`.
pub fn compute_quantities(
    profile: &GroundStateProfile,
    spec: &QuadratureSpec,
) -> Result<GroundStateQuantities, GroundStateError> {
    let n = profile.n as f64;
    let b = profile.b;
    let sigma1 = profile.sigma1;
    let area = sphere_area(profile.n);
    let amp = profile.amplitude();
    let w0 = w_eval(profile, 0.0);

    let center = profile.core_radius().ln();
    let (u_lo, u_hi) = (center - spec.log_span, center + spec.log_span);
    let panels = (2.0 * spec.log_span).ceil() as usize;
    let breaks: Vec<f64> = (0..=panels)
        .map(|i| u_lo + (u_hi - u_lo) * i as f64 / panels as f64)
        .collect();
    let quad = AdaptiveQuadrature::new(spec.order, spec.rel_tol);

    // integrands in u = ln r carry the Jacobian r
    let kinetic = |u: f64| {
        let r = u.exp();
        let d = w_grad_eval(profile, r).unwrap_or(0.0);
        d * d * r.powf(n - 1.0) * r
    };
    let potential = |u: f64| {
        let r = u.exp();
        r.powf(n - 1.0 - b) * w_eval(profile, r).powf(sigma1 + 2.0) * r
    };
    let mut kin = quad.integrate(&kinetic, &breaks)?;
    let mut pot = quad.integrate(&potential, &breaks)?;

    let (r_lo, r_hi) = (u_lo.exp(), u_hi.exp());
    // near the origin W' ≈ −A k(2−b) ε^{−k−1} r^{1−b}, W ≈ W(0)
    let k = profile.k();
    let c1 = amp * k * (2.0 - b) * profile.epsilon.powf(-k - 1.0);
    kin += c1 * c1 * r_lo.powf(n + 2.0 - 2.0 * b) / (n + 2.0 - 2.0 * b);
    pot += w0.powf(sigma1 + 2.0) * r_lo.powf(n - b) / (n - b);
    // far field W ≈ A r^{2−n}
    kin += amp * amp * (n - 2.0) * r_hi.powf(2.0 - n);
    pot += amp.powf(sigma1 + 2.0) * r_hi.powf(b - n) / (n - b);

    let h1dot_sq = area * kin;
    let potential_integral = area * pot;
    let c_hs = potential_integral.powf(1.0 / (sigma1 + 2.0)) / h1dot_sq.sqrt();
    let energy = 0.5 * h1dot_sq - potential_integral / (sigma1 + 2.0);
    Ok(GroundStateQuantities {
        n: profile.n,
        b,
        sigma1,
        h1dot_sq,
        potential_integral,
        c_hs,
        energy,
    })
}

/// For `u₀ = c·W`: `(E(cW)/‖W‖², ‖cW‖_{Ḣ¹}/‖W‖_{Ḣ¹})`, using the Pohozaev
/// identity `‖W‖² = ∫|x|^{-b}W^{σ₁+2}`.
pub fn scaled_energy_ratio(c: f64, quantities: &GroundStateQuantities) -> (f64, f64) {
    let p = quantities.sigma1 + 2.0;
    (0.5 * c * c - c.powf(p) / p, c)
}
