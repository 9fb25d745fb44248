//! The `inls` command line.
//!
//! Exit codes: 0 ok, 1 usage or parse error, 2 hypotheses fail, 3 quadrature
//! failure, 4 non-finite numerics.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::diagnostics::{classify_blowup, g_argmax, ThresholdReport};
use crate::dynamics::{run_observed, DynamicsError, SimConfig, Termination};
use crate::exponents::{
    admissible_upper, format_rational, gamma_of, is_admissible, parse_rational, region_comparison,
    sigma_critical, theorem_hypotheses, to_f64, working_r, AdmissiblePair, Coupling,
    CriticalityParams, Extended, Power, Rational, Symmetry, TheoremId,
};
use crate::ground_state::{
    compute_quantities, GroundStateError, GroundStateProfile, GroundStateQuantities,
    QuadratureSpec,
};
use crate::io::{self, DumpMeta, IoError, Json, Report, RunConfigFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_QUADRATURE: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "INLS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "inls", version, about = "Numerical laboratory for iu_t + Δu = λ|x|^{-b}|u|^σ u")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Theorem hypotheses, critical power, working exponent and regions.
    Check(CheckArgs),
    /// Table of admissible pairs (γ(p), p).
    Pairs(PairsArgs),
    /// Ground-state constants, Pohozaev residual and ε-invariance.
    GroundState(GroundStateArgs),
    /// Run a simulation from a JSON config.
    Simulate(SimulateArgs),
    /// Second difference of the variance against the virial right-hand side.
    VirialReport(VirialArgs),
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    s: String,
    #[arg(long)]
    b: Option<String>,
    /// Defaults to the critical power σ_s.
    #[arg(long)]
    sigma: Option<String>,
    /// T1.3, T1.7, T1.10 or T1.13; decides the exit code.
    #[arg(long, default_value = "T1.7")]
    theorem: String,
    /// Symmetry class for T1.13.
    #[arg(long, default_value = "finite_variance")]
    symmetry: String,
    /// focusing, defocusing or complex.
    #[arg(long, default_value = "focusing")]
    coupling: String,
    /// f is a polynomial in z, z̄ (T1.10).
    #[arg(long)]
    polynomial: bool,
}

#[derive(Debug, Args)]
struct PairsArgs {
    #[arg(long)]
    n: u32,
    /// Lebesgue exponents to tabulate (rationals or `inf`).
    #[arg(long = "p", num_args = 1..)]
    p: Vec<String>,
    /// Adds the working exponent for (n, s, b) at the critical power.
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    b: Option<String>,
}

#[derive(Debug, Args)]
struct GroundStateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    b: String,
    #[arg(long, default_value = "1")]
    eps: String,
    /// Relative tolerance of the adaptive quadrature.
    #[arg(long, default_value_t = 1e-13)]
    tol: f64,
    /// Also write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    config: PathBuf,
}

#[derive(Debug, Args)]
struct VirialArgs {
    series: PathBuf,
    /// Only rows with t ≤ t_max enter the maximum.
    #[arg(long)]
    t_max: Option<f64>,
    /// Pass threshold for the printed verdict.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Augmented CSV; defaults to `<series>.virial.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
    fn usage(message: impl Into<String>) -> Self {
        Self::new(EXIT_USAGE, message)
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::usage(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (program name first), runs the command and returns the exit
/// code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    let result = match cli.command {
        Command::Check(a) => cmd_check(&a),
        Command::Pairs(a) => cmd_pairs(&a),
        Command::GroundState(a) => cmd_ground_state(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::VirialReport(a) => cmd_virial_report(&a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(text) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = text
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_ENV}=`{text}` is not a thread count"))?;
    // a second initialisation in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

fn rational_arg(name: &str, text: &str) -> Result<Rational, Failure> {
    parse_rational(text).map_err(|e| Failure::usage(format!("--{name}: {e}")))
}

fn coupling_arg(text: &str) -> Result<Coupling, Failure> {
    match text {
        "focusing" => Ok(Coupling::Focusing),
        "defocusing" => Ok(Coupling::Defocusing),
        "complex" => Ok(Coupling::Complex),
        other => Err(Failure::usage(format!("--coupling: unknown value `{other}`"))),
    }
}

fn theorem_arg(a: &CheckArgs) -> Result<TheoremId, Failure> {
    let id: TheoremId = a.theorem.parse().map_err(|e| Failure::usage(format!("{e}")))?;
    Ok(match id {
        TheoremId::T1_13 { .. } => TheoremId::T1_13 {
            symmetry: a.symmetry.parse().map_err(Failure::usage)?,
        },
        TheoremId::T1_10 { .. } => TheoremId::T1_10 {
            polynomial: a.polynomial,
        },
        other => other,
    })
}

fn cmd_check(a: &CheckArgs) -> CmdResult {
    let s = rational_arg("s", &a.s)?;
    let sigma = a.sigma.as_deref().map(|t| rational_arg("sigma", t)).transpose()?;
    let coupling = coupling_arg(&a.coupling)?;
    let requested = theorem_arg(a)?;
    let half_n = Rational::new((a.n as i64).into(), 2.into());
    if sigma.is_none() && s >= half_n {
        println!(
            "sigma_s = inf: s = {} >= n/2 = {}, so there is no critical power and \
             the critical theorems do not apply; pass --sigma to check an explicit power",
            format_rational(&s),
            format_rational(&half_n)
        );
        return Ok(EXIT_HYPOTHESIS);
    }
    let b_text = a
        .b
        .as_deref()
        .ok_or_else(|| Failure::usage("--b is required"))?;
    let b = rational_arg("b", b_text)?;
    let power = sigma.map_or(Power::Critical, Power::Value);
    let params = CriticalityParams::new(a.n, s.clone(), b.clone(), power, coupling)
        .map_err(|e| Failure::new(EXIT_HYPOTHESIS, e.to_string()))?;

    let sigma_s = sigma_critical(a.n, &s, &b);
    println!(
        "n = {}, s = {}, b = {}, sigma = {}{}, coupling = {}",
        a.n,
        format_rational(&s),
        format_rational(&b),
        format_rational(&params.sigma()),
        if matches!(params.power(), Power::Critical) {
            " (critical)"
        } else {
            ""
        },
        a.coupling
    );
    println!("sigma_s = {sigma_s}");
    let mut pair_ps = default_pair_grid(a.n);
    match working_r(&params) {
        Ok(w) => {
            let r = Extended::Finite(w.r.clone());
            let gamma = gamma_of(&r, a.n).map(|g| g.to_string()).unwrap_or_else(|e| e.to_string());
            println!("r = {}", format_rational(&w.r));
            println!("gamma(r) = {gamma}");
            match &w.epsilon {
                Some(eps) => println!("epsilon = {}", format_rational(eps)),
                None => println!("epsilon = none"),
            }
            pair_ps.push(r);
        }
        Err(e) => println!("r = unavailable ({e})"),
    }
    println!();

    let theorems = [
        TheoremId::T1_3,
        TheoremId::T1_7,
        TheoremId::T1_10 {
            polynomial: a.polynomial,
        },
        TheoremId::T1_13 {
            symmetry: match requested {
                TheoremId::T1_13 { symmetry } => symmetry,
                _ => a.symmetry.parse().map_err(Failure::usage)?,
            },
        },
    ];
    let mut requested_holds = false;
    for id in theorems {
        let v = theorem_hypotheses(id, &params);
        print!("{v}");
        if id == requested {
            requested_holds = v.holds;
        }
    }
    println!();
    print_pairs(a.n, pair_ps);
    println!();
    print!("{}", region_comparison(&params));
    println!();
    println!(
        "{requested}: {}",
        if requested_holds { "holds" } else { "fails" }
    );
    Ok(if requested_holds {
        EXIT_OK
    } else {
        EXIT_HYPOTHESIS
    })
}

/// 2, a few interior points and the upper end point of the admissible range.
fn default_pair_grid(n: u32) -> Vec<Extended> {
    let two = Rational::from_integer(2.into());
    match admissible_upper(n) {
        Extended::Finite(top) => (0..=4)
            .map(|k| {
                let t = Rational::new(k.into(), 4.into());
                Extended::Finite(two.clone() + (top.clone() - &two) * t)
            })
            .collect(),
        Extended::Infinity => {
            let mut v: Vec<Extended> = [2, 3, 4, 6, 10]
                .iter()
                .map(|&p| Extended::Finite(Rational::from_integer(p.into())))
                .collect();
            if n == 1 {
                v.push(Extended::Infinity);
            }
            v
        }
    }
}

fn print_pairs(n: u32, mut ps: Vec<Extended>) {
    ps.sort();
    ps.dedup();
    println!("admissible pairs, n = {n}:");
    println!("  {:<12} {:<12} admissible", "p", "gamma");
    for p in ps {
        let ok = is_admissible(&p, n);
        let gamma = if ok {
            AdmissiblePair::new(p.clone(), n)
                .map(|pair| pair.gamma.to_string())
                .unwrap_or_else(|e| e.to_string())
        } else {
            "-".into()
        };
        println!("  {:<12} {:<12} {}", p.to_string(), gamma, if ok { "yes" } else { "no" });
    }
}

fn cmd_pairs(a: &PairsArgs) -> CmdResult {
    if a.n == 0 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    let mut ps = if a.p.is_empty() {
        default_pair_grid(a.n)
    } else {
        a.p.iter()
            .map(|t| {
                t.parse::<Extended>()
                    .map_err(|e| Failure::usage(format!("--p: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    if let (Some(s), Some(b)) = (&a.s, &a.b) {
        let params = CriticalityParams::critical(a.n, rational_arg("s", s)?, rational_arg("b", b)?)
            .map_err(|e| Failure::new(EXIT_HYPOTHESIS, e.to_string()))?;
        match working_r(&params) {
            Ok(w) => {
                println!("working r = {}", format_rational(&w.r));
                ps.push(Extended::Finite(w.r));
            }
            Err(e) => return Err(Failure::new(EXIT_HYPOTHESIS, e.to_string())),
        }
    }
    print_pairs(a.n, ps);
    Ok(EXIT_OK)
}

fn quadrature_failure(e: GroundStateError) -> Failure {
    match e {
        GroundStateError::Quadrature(_) => Failure::new(EXIT_QUADRATURE, e.to_string()),
        other => Failure::usage(other.to_string()),
    }
}

fn ground_state_json(q: &GroundStateQuantities) -> Json {
    Json::obj([
        ("sigma1", Json::Num(q.sigma1)),
        ("h1dot_sq", Json::Num(q.h1dot_sq)),
        ("h1dot", Json::Num(q.h1dot())),
        ("potential_integral", Json::Num(q.potential_integral)),
        ("c_hs", Json::Num(q.c_hs)),
        ("energy", Json::Num(q.energy)),
        ("pohozaev_residual", Json::Num(q.pohozaev_residual())),
        ("closed_form_h1dot_sq", Json::Num(q.closed_form_h1dot_sq())),
        ("closed_form_energy", Json::Num(q.closed_form_energy())),
    ])
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn cmd_ground_state(a: &GroundStateArgs) -> CmdResult {
    let b_exact = rational_arg("b", &a.b)?;
    let eps = to_f64(&rational_arg("eps", &a.eps)?);
    let b = to_f64(&b_exact);
    if a.n < 3 || !(b > 0.0 && b < 2.0) {
        return Err(Failure::usage(format!(
            "ground state needs n >= 3 and 0 < b < 2, got n = {}, b = {}",
            a.n,
            format_rational(&b_exact)
        )));
    }
    if !(a.tol > 0.0) {
        return Err(Failure::usage("--tol must be positive"));
    }
    let spec = QuadratureSpec {
        rel_tol: a.tol,
        ..QuadratureSpec::default()
    };
    let quantities = |e: f64| {
        GroundStateProfile::new(a.n, b, e)
            .and_then(|p| compute_quantities(&p, &spec))
            .map_err(quadrature_failure)
    };
    let q1 = quantities(eps)?;
    let q2 = quantities(2.0 * eps)?;
    let argmax = g_argmax(&q1);
    let doc = Json::obj([
        ("n", Json::Int(a.n as i64)),
        ("b", Json::rational(&b_exact)),
        ("epsilon", Json::Num(eps)),
        ("quadrature_rel_tol", Json::Num(a.tol)),
        ("eps", ground_state_json(&q1)),
        ("two_eps", ground_state_json(&q2)),
        (
            "checks",
            Json::obj([
                ("c_hs_spread", Json::Num(rel(q2.c_hs, q1.c_hs))),
                ("h1dot_sq_spread", Json::Num(rel(q2.h1dot_sq, q1.h1dot_sq))),
                ("closed_form_h1dot_sq_residual", Json::Num(rel(q1.closed_form_h1dot_sq(), q1.h1dot_sq))),
                ("closed_form_energy_residual", Json::Num(rel(q1.closed_form_energy(), q1.energy))),
                ("g_argmax", Json::Num(argmax)),
                ("g_argmax_residual", Json::Num(rel(argmax, q1.h1dot()))),
                ("energy_over_h1dot_sq", Json::Num(q1.energy / q1.h1dot_sq)),
            ]),
        ),
    ]);
    let report = Report::new(doc);
    print!("{}", report.table());
    if let Some(path) = &a.json {
        std::fs::write(path, report.json() + "\n")
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    Ok(EXIT_OK)
}

/// Scope of the automatic blow-up classification: n ≥ 3, energy-critical σ
/// and λ = −1.
fn classification_scope(sim: &SimConfig) -> bool {
    let p = &sim.params;
    if p.n() < 3 || sim.model.lambda != -1.0 {
        return false;
    }
    let critical = (Rational::from_integer(4.into()) - p.b() * Rational::from_integer(2.into()))
        / Rational::from_integer((p.n() as i64 - 2).into());
    p.sigma() == critical
}

fn threshold_json(t: &ThresholdReport) -> Json {
    Json::obj([
        ("case", Json::Str(t.case.to_string())),
        ("symmetry", Json::Str(t.symmetry.to_string())),
        ("e0", Json::Num(t.e0)),
        ("h1_0", Json::Num(t.h1_0)),
        ("e_w", Json::Num(t.e_w)),
        ("h1_w", Json::Num(t.h1_w)),
        ("energy_ratio", Json::Num(t.energy_ratio())),
        ("ground_state_ratio", Json::Num(t.e_w / (t.h1_w * t.h1_w))),
        ("delta", Json::opt(t.delta)),
    ])
}

fn cmd_simulate(a: &SimulateArgs) -> CmdResult {
    let file = RunConfigFile::load(&a.config)?;
    let resolved = file.resolve()?;
    let canonical = file.canonical()?;
    let base = a.config.parent().unwrap_or(Path::new("."));
    let u0 = resolved.initial_field(base)?;
    let sim = &resolved.sim;
    let params = &sim.params;

    let theorems = [
        TheoremId::T1_3,
        TheoremId::T1_7,
        TheoremId::T1_10 { polynomial: false },
    ];
    let symmetry = if sim.grid.is_radial() {
        Symmetry::Radial
    } else {
        Symmetry::FiniteVariance
    };
    let mut verdicts: Vec<Json> = theorems
        .iter()
        .map(|&id| Json::verdict(&theorem_hypotheses(id, params)))
        .collect();
    verdicts.push(Json::verdict(&theorem_hypotheses(
        TheoremId::T1_13 { symmetry },
        params,
    )));

    let (gs_json, class_json) = if classification_scope(sim) {
        let profile = resolved.ground_state_profile()?;
        let gs = compute_quantities(&profile, &QuadratureSpec::default()).map_err(quadrature_failure)?;
        let class = match classify_blowup(&u0, &sim.model, params, &gs, symmetry) {
            Ok(t) => threshold_json(&t),
            Err(e) => Json::obj([("error", Json::Str(e.to_string()))]),
        };
        (ground_state_json(&gs), class)
    } else {
        (Json::Null, Json::Null)
    };

    let dir = io::create_run_dir(&file.output.directory, &canonical.to_json())?;
    std::fs::write(dir.join("config.json"), canonical.to_json() + "\n")
        .map_err(IoError::from)?;
    let meta = DumpMeta {
        b: sim.model.weight.b,
        delta: sim.model.weight.delta,
        sigma: sim.model.sigma,
        lambda: sim.model.lambda,
    };
    let mut dumps: Vec<PathBuf> = Vec::new();
    let mut dump_error: Option<IoError> = None;
    let mut dump = |name: String, f: &crate::grid::Field, dumps: &mut Vec<PathBuf>| {
        let path = dir.join(name);
        match io::write_field(&path, f, &meta) {
            Ok(()) => dumps.push(path),
            Err(e) => {
                dump_error.get_or_insert(e);
            }
        }
    };
    if file.output.dump_fields {
        dump("field_start.bin".into(), &u0, &mut dumps);
    }
    let every = file.output.dump_every.filter(|&k| k > 0 && file.output.dump_fields);
    let outcome = run_observed(sim, &u0, |step, f| {
        if let Some(k) = every {
            if step % k == 0 {
                dump(format!("field_step{step:08}.bin"), f, &mut dumps);
            }
        }
    });
    let outcome = match outcome {
        Ok(o) => o,
        Err(DynamicsError::NonFinite) => return Err(Failure::new(EXIT_NUMERIC, "non-finite field")),
        Err(e) => return Err(Failure::usage(e.to_string())),
    };
    if file.output.dump_fields {
        dump("field_end.bin".into(), &outcome.final_field, &mut dumps);
    }
    if let Some(e) = dump_error {
        return Err(e.into());
    }
    let series_path = dir.join("series.csv");
    io::write_series(&series_path, &outcome.series)?;

    let first = &outcome.series[0];
    let last = outcome.series.last().expect("series has the initial record");
    let p = params;
    let doc = Json::obj([
        ("config", Json::Str(a.config.display().to_string())),
        (
            "params",
            Json::obj([
                ("n", Json::Int(p.n() as i64)),
                ("s", Json::rational(p.s())),
                ("b", Json::rational(p.b())),
                ("sigma", Json::rational(&p.sigma())),
                ("sigma_auto", Json::Bool(matches!(p.power(), Power::Critical))),
                ("lambda", Json::Num(sim.model.lambda)),
                ("delta", Json::Num(sim.model.weight.delta)),
            ]),
        ),
        ("verdicts", Json::Arr(verdicts)),
        ("ground_state", gs_json),
        ("classification", class_json),
        (
            "run",
            Json::obj([
                ("termination", Json::Str(outcome.termination.to_string())),
                ("t_final", Json::Num(outcome.t_final)),
                ("t_end", Json::Num(sim.t_end)),
                ("steps", Json::Int(outcome.steps as i64)),
                ("h1_growth", Json::Num(outcome.h1_growth)),
                ("mass_drift", Json::Num(rel(last.mass, first.mass))),
                ("energy_initial", Json::Num(first.energy)),
                ("energy_final", Json::Num(last.energy)),
                ("max_amp_final", Json::Num(last.max_amp)),
                ("boundary_mass_fraction_final", Json::Num(last.boundary_mass_fraction)),
            ]),
        ),
        (
            "files",
            Json::obj([
                ("directory", Json::Str(dir.display().to_string())),
                ("series", Json::Str(series_path.display().to_string())),
                (
                    "dumps",
                    Json::Arr(dumps.iter().map(|d| Json::Str(d.display().to_string())).collect()),
                ),
            ]),
        ),
    ]);
    let report = Report::new(doc);
    report.write(&dir)?;
    print!("{}", report.table());
    Ok(match outcome.termination {
        Termination::NonFinite => EXIT_NUMERIC,
        _ => EXIT_OK,
    })
}

fn cmd_virial_report(a: &VirialArgs) -> CmdResult {
    let table = io::read_series(&a.series)?;
    let rep = io::virial_report(&table, a.t_max)?;
    let out = a.out.clone().unwrap_or_else(|| {
        let mut name = a.series.clone().into_os_string();
        name.push(".virial.csv");
        PathBuf::from(name)
    });
    std::fs::write(&out, rep.to_csv())
        .map_err(|e| Failure::usage(format!("{}: {e}", out.display())))?;
    println!("rows            {}", rep.t.len());
    println!("window          [{:.16e}, {:.16e}]", rep.window.0, rep.window.1);
    println!("max_rel_residual {:.16e}", rep.max_residual);
    println!(
        "verdict         {} (tol {:e})",
        if rep.max_residual <= a.tol { "pass" } else { "fail" },
        a.tol
    );
    println!("output          {}", out.display());
    Ok(EXIT_OK)
}
