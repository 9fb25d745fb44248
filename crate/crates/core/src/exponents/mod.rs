//! Exact exponent bookkeeping for the inhomogeneous NLS.
//!
//! Everything here is rational arithmetic; floating point never enters. The
//! theorem predicates live in [`theorems`], the admissible-pair arithmetic and
//! the working exponent of the contraction argument in this module.

mod rational;
mod theorems;

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use rational::{
    format_rational, int, is_even_integer, min_of, parse_rational, rat, to_f64, Extended,
    ParseRationalError, Rational, MAX_DECIMAL_DENOMINATOR,
};
pub use theorems::{region_comparison, theorem_hypotheses, Check, Region, RegionReport, Verdict};

use rational::{one, positive};

#[derive(Debug, Clone, Error)]
pub enum ExponentError {
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    #[error("Lebesgue exponent p = {0} is below 2")]
    BelowTwo(String),
    #[error("hypotheses of {} fail at: {}", .0.theorem, .0.failing().join("; "))]
    Hypothesis(Box<Verdict>),
    #[error("infeasible exponent: {0}")]
    Infeasible(String),
    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
}

/// Character of the coupling constant λ in front of the nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    Focusing,
    Defocusing,
    Complex,
}

impl Coupling {
    /// Sign convention of `iu_t + Δu = λ|x|^{-b}|u|^σ u`: negative λ focuses.
    pub fn from_real(lambda: f64) -> Coupling {
        if lambda < 0.0 {
            Coupling::Focusing
        } else {
            Coupling::Defocusing
        }
    }
}

/// Nonlinearity power: either explicit or "the critical one for this s".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Power {
    Critical,
    Value(Rational),
}

/// Symmetry class of initial data, used by the blow-up theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    FiniteVariance,
    Radial,
    Cylindrical,
    None,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::FiniteVariance => "finite_variance",
            Symmetry::Radial => "radial",
            Symmetry::Cylindrical => "cylindrical",
            Symmetry::None => "none",
        })
    }
}

impl FromStr for Symmetry {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "finite_variance" | "finite-variance" => Ok(Symmetry::FiniteVariance),
            "radial" => Ok(Symmetry::Radial),
            "cylindrical" => Ok(Symmetry::Cylindrical),
            "none" => Ok(Symmetry::None),
            other => Err(format!("unknown symmetry class `{other}`")),
        }
    }
}

/// Theorems whose hypotheses can be checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremId {
    /// Subcritical local well-posedness.
    T1_3,
    /// Critical local well-posedness (with the model-case clause).
    T1_7,
    /// Standard continuous dependence. `polynomial` asserts that f is a
    /// polynomial in z, z̄ of degree 1+σ.
    T1_10 { polynomial: bool },
    /// Blow-up for the focusing energy-critical equation.
    T1_13 { symmetry: Symmetry },
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoremId::T1_3 => f.write_str("T1.3"),
            TheoremId::T1_7 => f.write_str("T1.7"),
            TheoremId::T1_10 { polynomial: false } => f.write_str("T1.10"),
            TheoremId::T1_10 { polynomial: true } => f.write_str("T1.10[polynomial]"),
            TheoremId::T1_13 { symmetry } => write!(f, "T1.13[{symmetry}]"),
        }
    }
}

impl FromStr for TheoremId {
    type Err = ExponentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "T1.3" | "1.3" => Ok(TheoremId::T1_3),
            "T1.7" | "1.7" => Ok(TheoremId::T1_7),
            "T1.10" | "1.10" => Ok(TheoremId::T1_10 { polynomial: false }),
            "T1.13" | "1.13" => Ok(TheoremId::T1_13 {
                symmetry: Symmetry::FiniteVariance,
            }),
            other => Err(ExponentError::UnknownTheorem(other.to_string())),
        }
    }
}

/// The exact tuple (n, s, b, σ) together with the character of λ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalityParams {
    n: u32,
    s: Rational,
    b: Rational,
    sigma: Power,
    coupling: Coupling,
}

impl CriticalityParams {
    pub fn new(
        n: u32,
        s: Rational,
        b: Rational,
        sigma: Power,
        coupling: Coupling,
    ) -> Result<Self, ExponentError> {
        if n == 0 {
            return Err(ExponentError::InvalidParameter("n must be at least 1".into()));
        }
        if s.is_negative() {
            return Err(ExponentError::InvalidParameter(format!(
                "s = {} is negative",
                format_rational(&s)
            )));
        }
        if !positive(&b) {
            return Err(ExponentError::InvalidParameter(format!(
                "b = {} must be positive",
                format_rational(&b)
            )));
        }
        match &sigma {
            Power::Value(v) if !positive(v) => {
                return Err(ExponentError::InvalidParameter(format!(
                    "sigma = {} must be positive",
                    format_rational(v)
                )))
            }
            Power::Critical if s >= half(n) => {
                return Err(ExponentError::InvalidParameter(format!(
                    "critical sigma needs s < n/2, got s = {} >= {} (sigma_s is infinite)",
                    format_rational(&s),
                    format_rational(&half(n))
                )))
            }
            _ => {}
        }
        Ok(Self {
            n,
            s,
            b,
            sigma,
            coupling,
        })
    }

    /// Critical power `σ = σ_s`, focusing coupling.
    pub fn critical(n: u32, s: Rational, b: Rational) -> Result<Self, ExponentError> {
        Self::new(n, s, b, Power::Critical, Coupling::Focusing)
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn s(&self) -> &Rational {
        &self.s
    }
    pub fn b(&self) -> &Rational {
        &self.b
    }
    pub fn power(&self) -> &Power {
        &self.sigma
    }
    pub fn coupling(&self) -> Coupling {
        self.coupling
    }

    /// σ with the critical marker resolved through `σ_s`.
    pub fn sigma(&self) -> Rational {
        match &self.sigma {
            Power::Value(v) => v.clone(),
            Power::Critical => match sigma_critical(self.n, &self.s, &self.b) {
                Extended::Finite(v) => v,
                // excluded by the constructor
                Extended::Infinity => unreachable!("critical sigma with s >= n/2"),
            },
        }
    }
}

fn half(n: u32) -> Rational {
    rat(n as i64, 2)
}

/// `σ_s = (4−2b)/(n−2s)` for `s < n/2`, `∞` otherwise.
pub fn sigma_critical(n: u32, s: &Rational, b: &Rational) -> Extended {
    let n = int(n as i64);
    if s * int(2) >= n {
        return Extended::Infinity;
    }
    Extended::Finite((int(4) - b * int(2)) / (n - s * int(2)))
}

/// Largest admissible Lebesgue exponent: `2n/(n−2)` for n ≥ 3, `∞` for n ≤ 2
/// (excluded for n = 2, included for n = 1).
pub fn admissible_upper(n: u32) -> Extended {
    if n >= 3 {
        Extended::Finite(rat(2 * n as i64, n as i64 - 2))
    } else {
        Extended::Infinity
    }
}

/// `γ(p)` from `2/γ = n/2 − n/p`; `∞` when the right side vanishes (p = 2).
pub fn gamma_of(p: &Extended, n: u32) -> Result<Extended, ExponentError> {
    if *p < Extended::Finite(int(2)) {
        return Err(ExponentError::BelowTwo(p.to_string()));
    }
    let inv_p = match p.reciprocal() {
        Extended::Finite(v) => v,
        Extended::Infinity => unreachable!("p >= 2"),
    };
    let nn = int(n as i64);
    let rhs = half(n) - nn * inv_p;
    if rhs.is_zero() {
        return Ok(Extended::Infinity);
    }
    Ok(Extended::Finite(int(2) / rhs))
}

/// Whether p lies in the Schrödinger admissible range for dimension n.
pub fn is_admissible(p: &Extended, n: u32) -> bool {
    if *p < Extended::Finite(int(2)) {
        return false;
    }
    match n {
        1 => true,
        2 => !p.is_infinite(),
        _ => *p <= admissible_upper(n),
    }
}

/// A Schrödinger admissible pair `(γ(p), p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissiblePair {
    pub p: Extended,
    pub gamma: Extended,
}

impl AdmissiblePair {
    pub fn new(p: Extended, n: u32) -> Result<Self, ExponentError> {
        if !is_admissible(&p, n) {
            return Err(ExponentError::Infeasible(format!(
                "p = {p} is not admissible for n = {n}"
            )));
        }
        let gamma = gamma_of(&p, n)?;
        Ok(Self { p, gamma })
    }
}

/// The exponent r of the working space, plus the ε used for n ≤ 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkingExponent {
    pub r: Rational,
    pub epsilon: Option<Rational>,
}

/// ε = ½·min{n−s−b, n/2}: midpoint of the window the n ≤ 2 construction needs.
pub fn epsilon_choice(n: u32, s: &Rational, b: &Rational) -> Rational {
    let nn = int(n as i64);
    min_of(&[nn.clone() - s - b, half(n)]) / int(2)
}

/// Working exponent r of the contraction argument.
pub fn working_r(params: &CriticalityParams) -> Result<WorkingExponent, ExponentError> {
    let verdict = theorems::t17_core(params);
    if !verdict.holds {
        return Err(ExponentError::Hypothesis(Box::new(verdict)));
    }
    let n = int(params.n as i64);
    let sigma = params.sigma();
    let (s, b) = (&params.s, &params.b);
    if params.n >= 3 {
        let r = (int(2) * &n * &sigma + int(2) * &n)
            / (n.clone() + int(2) + int(2) * &sigma * s - int(2) * b);
        Ok(WorkingExponent { r, epsilon: None })
    } else {
        let eps = epsilon_choice(params.n, s, b);
        let r = (sigma.clone() * &n + &n) / (sigma * s + &n - b - &eps);
        Ok(WorkingExponent {
            r,
            epsilon: Some(eps),
        })
    }
}

/// The companion exponent r̄: `2n/(n−2)` for n ≥ 3; for n ≤ 2 the value
/// fixed by the duality relation `1/r̄' = σ(1/r − s/n) + 1/r + b/n`.
pub fn bar_r(params: &CriticalityParams, r: &Rational) -> Extended {
    if params.n >= 3 {
        return admissible_upper(params.n);
    }
    let inv_dual = dual_rhs(params, r);
    Extended::Finite(one() - inv_dual).reciprocal()
}

fn dual_rhs(params: &CriticalityParams, r: &Rational) -> Rational {
    let n = int(params.n as i64);
    let sigma = params.sigma();
    let inv_r = r.recip();
    sigma * (inv_r.clone() - &params.s / &n) + inv_r + &params.b / n
}

/// Exact check of `1/r̄' = σ(1/r − s/n) + 1/r + b/n` with `1/r > s/n`.
///
/// For n ≥ 3 r̄ = 2n/(n−2) is fixed and the equation is a genuine identity on
/// r. For n ≤ 2 the relation defines r̄, so what is checked is that the
/// resulting r̄ is admissible and strictly above 2.
pub fn dual_pair_identity(params: &CriticalityParams, r: &Rational) -> bool {
    let n = int(params.n as i64);
    if !positive(r) || r.recip() <= &params.s / &n {
        return false;
    }
    let rhs = dual_rhs(params, r);
    if params.n >= 3 {
        let inv_bar = admissible_upper(params.n).reciprocal();
        let inv_bar = inv_bar.finite().expect("finite").clone();
        one() - inv_bar == rhs
    } else {
        let bar = bar_r(params, r);
        bar > Extended::Finite(int(2)) && is_admissible(&bar, params.n)
    }
}

/// Exact check of `1/γ(r̄)' = (σ+1)/γ(r)`; errors when the critical
/// well-posedness hypotheses fail.
pub fn holder_time_identity(
    params: &CriticalityParams,
    r: &Rational,
) -> Result<bool, ExponentError> {
    let verdict = theorems::t17_core(params);
    if !verdict.holds {
        return Err(ExponentError::Hypothesis(Box::new(verdict)));
    }
    let r_ext = Extended::Finite(r.clone());
    if !is_admissible(&r_ext, params.n) {
        return Err(ExponentError::Infeasible(format!(
            "r = {} is not admissible for n = {}",
            format_rational(r),
            params.n
        )));
    }
    let bar = bar_r(params, r);
    if !is_admissible(&bar, params.n) {
        return Ok(false);
    }
    let gamma_bar = gamma_of(&bar, params.n)?;
    let gamma_r = gamma_of(&r_ext, params.n)?;
    let lhs = one() - gamma_bar.reciprocal().finite().expect("finite").clone();
    let rhs = (params.sigma() + one()) * gamma_r.reciprocal().finite().expect("finite").clone();
    Ok(lhs == rhs)
}

/// Exponent p of the nonlinear estimate, `1/p = σ(1/r − s/n) + 1/r`.
/// Infeasible unless `1/r > s/n` and the result satisfies `1 < p`.
pub fn lemma31_p(
    r: &Rational,
    s: &Rational,
    sigma: &Rational,
    n: u32,
) -> Result<Rational, ExponentError> {
    if !positive(r) {
        return Err(ExponentError::Infeasible(format!(
            "r = {} must be positive and finite",
            format_rational(r)
        )));
    }
    let nn = int(n as i64);
    let gap = r.recip() - s / nn;
    if !positive(&gap) {
        return Err(ExponentError::Infeasible(format!(
            "1/r - s/n = {} is not positive",
            format_rational(&gap)
        )));
    }
    let inv_p = sigma * gap + r.recip();
    if inv_p >= one() {
        return Err(ExponentError::Infeasible(format!(
            "1/p = {} gives p <= 1",
            format_rational(&inv_p)
        )));
    }
    Ok(inv_p.recip())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, s: Rational, b: Rational) -> CriticalityParams {
        CriticalityParams::critical(n, s, b).unwrap()
    }

    #[test]
    fn sigma_critical_examples() {
        assert_eq!(sigma_critical(3, &int(1), &int(1)), Extended::Finite(int(2)));
        assert_eq!(sigma_critical(4, &int(2), &rat(1, 2)), Extended::Infinity);
        assert_eq!(
            sigma_critical(2, &rat(1, 2), &rat(1, 2)),
            Extended::Finite(int(3))
        );
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(
            gamma_of(&Extended::Finite(int(2)), 3).unwrap(),
            Extended::Infinity
        );
        assert_eq!(
            gamma_of(&Extended::Finite(int(6)), 3).unwrap(),
            Extended::Finite(int(2))
        );
        assert_eq!(
            gamma_of(&Extended::Finite(rat(18, 7)), 3).unwrap(),
            Extended::Finite(int(6))
        );
        assert!(matches!(
            gamma_of(&Extended::Finite(rat(3, 2)), 3),
            Err(ExponentError::BelowTwo(_))
        ));
        // n = 1 keeps p = ∞ with γ = 4
        assert_eq!(
            gamma_of(&Extended::Infinity, 1).unwrap(),
            Extended::Finite(int(4))
        );
    }

    #[test]
    fn admissible_examples() {
        assert!(is_admissible(&Extended::Finite(int(6)), 3));
        assert!(!is_admissible(&Extended::Finite(rat(61, 10)), 3));
        assert!(!is_admissible(&Extended::Infinity, 2));
        assert!(is_admissible(&Extended::Finite(int(1000)), 2));
        assert!(is_admissible(&Extended::Finite(int(2)), 1));
        assert!(is_admissible(&Extended::Infinity, 1));
        assert!(!is_admissible(&Extended::Finite(rat(19, 10)), 1));
        let pair = AdmissiblePair::new(Extended::Finite(rat(18, 7)), 3).unwrap();
        assert_eq!(pair.gamma, Extended::Finite(int(6)));
        assert!(AdmissiblePair::new(Extended::Infinity, 2).is_err());
    }

    #[test]
    fn working_r_examples() {
        let w = working_r(&params(3, int(1), int(1))).unwrap();
        assert_eq!(w.r, rat(18, 7));
        assert_eq!(w.epsilon, None);

        // (6+6)/(3+2−1) = 3
        let w = working_r(&params(3, int(0), rat(1, 2))).unwrap();
        assert_eq!(w.r, int(3));

        let p = params(1, int(0), rat(1, 4));
        assert_eq!(p.sigma(), rat(7, 2));
        let w = working_r(&p).unwrap();
        assert_eq!(w.epsilon, Some(rat(1, 4)));
        // (σn+n)/(σs+n−b−ε) = (9/2)/(1 − 1/4 − 1/4)
        assert_eq!(w.r, int(9));
    }

    #[test]
    fn working_r_rejects_out_of_range_b() {
        let p = params(3, int(1), rat(7, 4));
        match working_r(&p) {
            Err(ExponentError::Hypothesis(v)) => {
                assert!(v.failing().iter().any(|c| c.contains("1+(n-2s)/2")));
            }
            other => panic!("expected hypothesis failure, got {other:?}"),
        }
    }

    #[test]
    fn dual_pair_examples() {
        let p = params(3, int(1), int(1));
        assert!(dual_pair_identity(&p, &rat(18, 7)));
        assert!(!dual_pair_identity(&p, &rat(5, 2)));

        let p = params(4, int(1), rat(1, 2));
        assert_eq!(p.sigma(), rat(3, 2));
        let r = working_r(&p).unwrap().r;
        assert!(dual_pair_identity(&p, &r));
    }

    #[test]
    fn holder_time_examples() {
        let p = params(3, int(1), int(1));
        assert!(holder_time_identity(&p, &rat(18, 7)).unwrap());
        let p = params(3, int(0), rat(1, 2));
        assert!(holder_time_identity(&p, &int(3)).unwrap());
        // 12/7 < 2 is not admissible in three dimensions
        assert!(holder_time_identity(&p, &rat(12, 7)).is_err());
        let bad = params(3, int(1), rat(7, 4));
        assert!(holder_time_identity(&bad, &rat(18, 7)).is_err());
    }

    #[test]
    fn lemma31_examples() {
        assert!(matches!(
            lemma31_p(&int(2), &int(0), &int(1), 3),
            Err(ExponentError::Infeasible(_))
        ));
        assert_eq!(lemma31_p(&rat(18, 7), &int(1), &int(2), 3).unwrap(), int(2));
        // 1/r = s/n exactly: no room for the Sobolev embedding
        assert!(matches!(
            lemma31_p(&int(4), &rat(1, 2), &int(2), 2),
            Err(ExponentError::Infeasible(_))
        ));
    }

    #[test]
    fn lemma31_matches_dual_exponent_minus_weight() {
        // Hölder with |x|^{-b} ∈ L^{n/b,∞}: 1/r̄' = 1/p + b/n.
        let p = params(3, int(1), int(1));
        let r = working_r(&p).unwrap().r;
        let lp = lemma31_p(&r, p.s(), &p.sigma(), 3).unwrap();
        let inv_bar_dual = one() - rat(1, 6);
        assert_eq!(lp.recip() + rat(1, 3), inv_bar_dual);
    }

    #[test]
    fn critical_rejects_large_s() {
        let err = CriticalityParams::critical(2, int(3), rat(1, 2)).unwrap_err();
        assert!(err.to_string().contains("s < n/2"));
        assert!(CriticalityParams::critical(2, int(1), rat(1, 2)).is_err());
    }

    #[test]
    fn theorem_ids_parse() {
        assert_eq!("T1.7".parse::<TheoremId>().unwrap(), TheoremId::T1_7);
        assert!(matches!(
            "T9.9".parse::<TheoremId>(),
            Err(ExponentError::UnknownTheorem(_))
        ));
    }
}
