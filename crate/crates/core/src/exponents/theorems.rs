//! Hypothesis predicates of the well-posedness and blow-up theorems, and the
//! comparison with the earlier, narrower parameter region.

use std::fmt;

use num_traits::Signed;

use super::rational::{format_rational, int, is_even_integer, min_of, Extended, Rational};
use super::{sigma_critical, CriticalityParams, Power, Symmetry, TheoremId};

/// One inequality of a theorem together with the exact values compared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub values: Vec<(String, Extended)>,
}

impl Check {
    fn new(name: impl Into<String>, holds: bool, values: Vec<(&str, Extended)>) -> Self {
        Self {
            name: name.into(),
            holds,
            values: values
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }

    fn cmp(
        lhs_label: &str,
        lhs: impl Into<Extended>,
        op: Cmp,
        rhs_label: &str,
        rhs: impl Into<Extended>,
    ) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let holds = match op {
            Cmp::Lt => lhs < rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Eq => lhs == rhs,
            Cmp::Ge => lhs >= rhs,
        };
        Self::new(
            format!("{lhs_label} {} {rhs_label}", op.symbol()),
            holds,
            vec![(lhs_label, lhs), (rhs_label, rhs)],
        )
    }

    /// `name (a = x, b = y)`
    pub fn describe(&self) -> String {
        let values = self
            .values
            .iter()
            .map(|(k, v)| format!("{k} = {v}"))
            .collect::<Vec<_>>()
            .join(", ");
        format!("{} ({values})", self.name)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.holds { "ok  " } else { "FAIL" };
        write!(f, "[{mark}] {}", self.describe())
    }
}

#[derive(Clone, Copy)]
enum Cmp {
    Lt,
    Le,
    Eq,
    Ge,
}

impl Cmp {
    fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Eq => "=",
            Cmp::Ge => ">=",
        }
    }
}

/// Conjunction of every condition of a theorem. Conditions are always all
/// evaluated; `holds` is their conjunction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub theorem: TheoremId,
    pub holds: bool,
    pub checks: Vec<Check>,
}

impl Verdict {
    fn from_checks(theorem: TheoremId, checks: Vec<Check>) -> Self {
        let holds = checks.iter().all(|c| c.holds);
        Self {
            theorem,
            holds,
            checks,
        }
    }

    pub fn failing(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.holds)
            .map(Check::describe)
            .collect()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {}",
            self.theorem,
            if self.holds { "holds" } else { "fails" }
        )?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}

fn nn(p: &CriticalityParams) -> Rational {
    int(p.n() as i64)
}

fn ceil_minus_one(s: &Rational) -> Rational {
    s.ceil() - int(1)
}

/// The b-window shared by the H^s theorems: `0 < b < min{2, n−s, 1+(n−2s)/2}`.
fn b_window(p: &CriticalityParams) -> Vec<Check> {
    let n = nn(p);
    let (s, b) = (p.s(), p.b());
    vec![
        Check::cmp("0", int(0), Cmp::Lt, "b", b.clone()),
        Check::cmp("b", b.clone(), Cmp::Lt, "2", int(2)),
        Check::cmp("b", b.clone(), Cmp::Lt, "n-s", n.clone() - s),
        Check::cmp(
            "b",
            b.clone(),
            Cmp::Lt,
            "1+(n-2s)/2",
            int(1) + (n - s * int(2)) / int(2),
        ),
    ]
}

fn critical_power(p: &CriticalityParams) -> Check {
    Check::cmp(
        "sigma",
        p.sigma(),
        Cmp::Eq,
        "sigma_s",
        sigma_critical(p.n(), p.s(), p.b()),
    )
}

fn existence_model_clause(p: &CriticalityParams) -> Check {
    let sigma = p.sigma();
    let bound = ceil_minus_one(p.s());
    let holds = is_even_integer(&sigma) || sigma > bound;
    Check::new(
        "model case: sigma even integer or sigma > ceil(s)-1",
        holds,
        vec![("sigma", sigma.into()), ("ceil(s)-1", bound.into())],
    )
}

/// Core conditions of the critical well-posedness theorem, without the
/// model-case clause on f.
pub(crate) fn t17_core(p: &CriticalityParams) -> Verdict {
    let n = nn(p);
    let mut checks = vec![
        Check::cmp("0", int(0), Cmp::Le, "s", p.s().clone()),
        Check::cmp("s", p.s().clone(), Cmp::Lt, "n/2", n / int(2)),
    ];
    checks.extend(b_window(p));
    checks.push(critical_power(p));
    Verdict::from_checks(TheoremId::T1_7, checks)
}

fn t13(p: &CriticalityParams) -> Verdict {
    let n = nn(p);
    let s = p.s();
    let s_bound = min_of(&[n.clone(), n / int(2) + int(1)]);
    let mut checks = vec![
        Check::cmp("0", int(0), Cmp::Le, "s", s.clone()),
        Check::cmp("s", s.clone(), Cmp::Lt, "min{n, n/2+1}", s_bound),
    ];
    checks.extend(b_window(p));
    checks.push(Check::cmp("0", int(0), Cmp::Lt, "sigma", p.sigma()));
    let sigma_s = sigma_critical(p.n(), s, p.b());
    let sub = match p.power() {
        Power::Critical => Check::new(
            "sigma < sigma_s",
            false,
            vec![("sigma", Extended::Finite(p.sigma())), ("sigma_s", sigma_s)],
        ),
        Power::Value(v) => Check::cmp("sigma", v.clone(), Cmp::Lt, "sigma_s", sigma_s),
    };
    checks.push(sub);
    checks.push(existence_model_clause(p));
    Verdict::from_checks(TheoremId::T1_3, checks)
}

fn t17(p: &CriticalityParams) -> Verdict {
    let mut v = t17_core(p);
    v.checks.push(existence_model_clause(p));
    Verdict::from_checks(TheoremId::T1_7, v.checks)
}

fn t110(p: &CriticalityParams, polynomial: bool) -> Verdict {
    let n = nn(p);
    let s = p.s();
    let mut checks = vec![
        Check::cmp("0", int(0), Cmp::Lt, "s", s.clone()),
        Check::cmp("s", s.clone(), Cmp::Lt, "n/2", n / int(2)),
    ];
    checks.extend(b_window(p));
    checks.push(critical_power(p));

    let sigma = p.sigma();
    let one = int(1);
    let poly = polynomial && sigma.is_integer();
    let small_s = s.is_positive() && *s < one && sigma > one;
    let large_s = *s >= one && sigma >= s.ceil();
    let holds = poly || is_even_integer(&sigma) || small_s || large_s;
    checks.push(Check::new(
        "continuity clause: polynomial of degree 1+sigma, or sigma even integer, \
         or (0<s<1 and sigma>1), or (s>=1 and sigma>=ceil(s))",
        holds,
        vec![
            ("sigma", sigma.into()),
            ("ceil(s)", s.ceil().into()),
            (
                "polynomial flag",
                Extended::Finite(if polynomial { int(1) } else { int(0) }),
            ),
        ],
    ));
    Verdict::from_checks(TheoremId::T1_10 { polynomial }, checks)
}

fn t113(p: &CriticalityParams, symmetry: Symmetry) -> Verdict {
    let n = nn(p);
    let b = p.b();
    let mut checks = vec![
        Check::cmp("n", n.clone(), Cmp::Ge, "3", int(3)),
        Check::cmp("0", int(0), Cmp::Lt, "b", b.clone()),
        Check::cmp("b", b.clone(), Cmp::Lt, "2", int(2)),
        Check::cmp("b", b.clone(), Cmp::Lt, "n/2", n.clone() / int(2)),
    ];
    let energy_critical = if p.n() >= 3 {
        Extended::Finite((int(4) - b * int(2)) / (n.clone() - int(2)))
    } else {
        Extended::Infinity
    };
    checks.push(Check::cmp(
        "sigma",
        p.sigma(),
        Cmp::Eq,
        "(4-2b)/(n-2)",
        energy_critical,
    ));
    if symmetry == Symmetry::Cylindrical {
        checks.push(Check::cmp("b", b.clone(), Cmp::Ge, "4-n", int(4) - n));
    }
    Verdict::from_checks(TheoremId::T1_13 { symmetry }, checks)
}

/// Every hypothesis of the given theorem, evaluated exactly.
pub fn theorem_hypotheses(theorem: TheoremId, params: &CriticalityParams) -> Verdict {
    match theorem {
        TheoremId::T1_3 => t13(params),
        TheoremId::T1_7 => t17(params),
        TheoremId::T1_10 { polynomial } => t110(params, polynomial),
        TheoremId::T1_13 { symmetry } => t113(params, symmetry),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Both,
    ExtendedOnly,
    EarlierOnly,
    Neither,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::Both => "both",
            Region::ExtendedOnly => "extended-only",
            Region::EarlierOnly => "earlier-only",
            Region::Neither => "neither",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionReport {
    pub region: Region,
    /// `min{2, n−2s}`
    pub earlier_b_bound: Rational,
    /// `min{2, n−s, 1+(n−2s)/2}`
    pub extended_b_bound: Rational,
    pub earlier_checks: Vec<Check>,
    pub extended_checks: Vec<Check>,
}

impl fmt::Display for RegionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "region: {}", self.region)?;
        writeln!(
            f,
            "  earlier (0<=s<=1, s<n/2, b<min{{2,n-2s}} = {}):",
            format_rational(&self.earlier_b_bound)
        )?;
        for c in &self.earlier_checks {
            writeln!(f, "    {c}")?;
        }
        writeln!(
            f,
            "  extended (0<=s<n/2, b<min{{2,n-s,1+(n-2s)/2}} = {}):",
            format_rational(&self.extended_b_bound)
        )?;
        for c in &self.extended_checks {
            writeln!(f, "    {c}")?;
        }
        Ok(())
    }
}

/// Where (n, s, b) falls relative to the older and the extended
/// well-posedness regions.
pub fn region_comparison(params: &CriticalityParams) -> RegionReport {
    let n = nn(params);
    let (s, b) = (params.s(), params.b());
    let at_bound = min_of(&[int(2), n.clone() - s * int(2)]);
    let ext_bound = min_of(&[
        int(2),
        n.clone() - s,
        int(1) + (n.clone() - s * int(2)) / int(2),
    ]);
    let at = vec![
        Check::cmp("0", int(0), Cmp::Le, "s", s.clone()),
        Check::cmp("s", s.clone(), Cmp::Le, "1", int(1)),
        Check::cmp("s", s.clone(), Cmp::Lt, "n/2", n.clone() / int(2)),
        Check::cmp("0", int(0), Cmp::Lt, "b", b.clone()),
        Check::cmp("b", b.clone(), Cmp::Lt, "min{2,n-2s}", at_bound.clone()),
    ];
    let ext = vec![
        Check::cmp("0", int(0), Cmp::Le, "s", s.clone()),
        Check::cmp("s", s.clone(), Cmp::Lt, "n/2", n / int(2)),
        Check::cmp("0", int(0), Cmp::Lt, "b", b.clone()),
        Check::cmp(
            "b",
            b.clone(),
            Cmp::Lt,
            "min{2,n-s,1+(n-2s)/2}",
            ext_bound.clone(),
        ),
    ];
    let in_at = at.iter().all(|c| c.holds);
    let in_ext = ext.iter().all(|c| c.holds);
    let region = match (in_at, in_ext) {
        (true, true) => Region::Both,
        (false, true) => Region::ExtendedOnly,
        (true, false) => Region::EarlierOnly,
        (false, false) => Region::Neither,
    };
    RegionReport {
        region,
        earlier_b_bound: at_bound,
        extended_b_bound: ext_bound,
        earlier_checks: at,
        extended_checks: ext,
    }
}
