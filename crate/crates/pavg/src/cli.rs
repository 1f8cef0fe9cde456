//! Argument parsing and subcommand dispatch.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use pavg_core::algebra::{quintic_pipeline, verify_trig, verify_walsh};
use pavg_core::operators::{amvp_reference, amvp_sweep_field, halving_sequence};
use pavg_core::paverage::{
    four_average_closed_form, gamma_median, p_limit_to_gamma_median, DEFAULT_TOL,
};
use pavg_core::polytopes::{exact_certificate, parse_set, verify_averaging_set};
use pavg_core::solver::{error_report, solve_from, NodeClass};
use pavg_core::{p_average, WeightedSample};
use serde_json::json;

use crate::io::{csv_table, emit_json, read_sample_csv, write_atomic};
use crate::schema::{p_json, parse_p, read_json, read_probe, ProblemFile};

#[derive(Debug, Parser)]
#[command(
    name = "pavg",
    version,
    about = "Discrete p-averages, p-averaging sets and game p-Laplacian schemes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// p-average of a weighted sample read from CSV.
    Compute(ComputeArgs),
    /// γ-median of a sample and the p-averages approaching it as p → 1.
    GammaMedian(GammaArgs),
    /// Checks the p-averaging identity of a direction set on random probes.
    VerifySet(VerifySetArgs),
    /// Discrete AMVP estimates d(ε) for a probe over a halving ε sequence.
    Amvp(AmvpArgs),
    /// Solves a Dirichlet problem for the lattice fixed-point scheme.
    Solve(SolveArgs),
    /// Checks that regular-polygon means reproduce complex polynomials.
    VerifyWalsh(WalshArgs),
    /// Checks the closed forms of cosine power sums over polygons.
    VerifyTrig(TrigArgs),
    /// Depresses the 6-average quintic and root-tests the stored resolvent.
    QuinticCheck(QuinticArgs),
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// Exponent p in (1, ∞]; `inf` gives the midrange.
    #[arg(long, value_parser = parse_p)]
    pub p: f64,
    /// CSV of `value[,weight]` rows; weights default to 1.
    #[arg(long)]
    pub values: PathBuf,
    /// Root tolerance, relative to max − min of the sample.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// JSON report path (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GammaArgs {
    /// CSV of sample values (weights are ignored).
    #[arg(long, conflicts_with = "list", required_unless_present = "list")]
    pub values: Option<PathBuf>,
    /// Comma-separated sample values, e.g. `0,1,2,4`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub list: Option<Vec<f64>>,
    /// Decreasing exponents in (1, 2] at which to report p-averages.
    #[arg(long, value_delimiter = ',', default_value = "2,1.5,1.1,1.01,1.001")]
    pub p_sequence: Vec<f64>,
    /// JSON report path (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifySetArgs {
    /// `icosahedron`, `dodecahedron`, `cell24`, `cell600`, `cell120`, `hexagon`,
    /// `polygon:k=K[,rot=R]` (2k+2 vertices, R in radians), `cross-cube:n=N` or `p6-2d`.
    #[arg(long)]
    pub set: String,
    /// Even exponent p ≥ 2 (defaults to the set's own exponent).
    #[arg(long)]
    pub p: Option<u32>,
    /// Number of random unit-direction probes.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Absolute tolerance on residuals and on the set constant.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for the probe stream.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also compute the exact moment certificate (exact-coordinate sets only).
    #[arg(long)]
    pub exact: bool,
    /// Rescale every vector to unit length first.
    #[arg(long)]
    pub normalize: bool,
    /// Write the vectors and weights as CSV to this path.
    #[arg(long)]
    pub vertices_csv: Option<PathBuf>,
    /// JSON report path (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AmvpArgs {
    /// Direction set, as for `verify-set`.
    #[arg(long)]
    pub set: String,
    /// Finite exponent p > 1 of the averages.
    #[arg(long, value_parser = parse_p)]
    pub p: f64,
    /// JSON probe: {base_point, base_value, gradient, hessian} or {field, point}.
    #[arg(long)]
    pub probe: PathBuf,
    /// Largest step ε (length units of the probe's coordinates).
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Number of ε values, each half the previous.
    #[arg(long, default_value_t = 6)]
    pub halvings: usize,
    /// CSV of (epsilon, estimate) rows.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// JSON summary path (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Pass when the extrapolated limit is within this of the reference.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// JSON problem file.
    #[arg(long)]
    pub config: PathBuf,
    /// Solution CSV: node coordinates, value, interior flag.
    #[arg(long, default_value = "solution.csv")]
    pub out: PathBuf,
    /// JSON run report (stdout if omitted).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WalshArgs {
    /// Highest polynomial degree; polygons have degree + 1 vertices.
    #[arg(long, default_value_t = 8)]
    pub degree: usize,
    /// Number of random polynomials and polygons.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Seed for the random stream.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance on the scaled error.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// JSON report path (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrigArgs {
    /// Largest k; sums run over the 2k + 2 polygon angles for every 1 ≤ r ≤ k.
    #[arg(long, default_value_t = 12)]
    pub kmax: u32,
    /// Random phases per (k, r) pair.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Seed for the random phases.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance on the scaled error.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// JSON report path (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuinticArgs {
    /// Comma-separated integer sample.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "1,6,11,13,19"
    )]
    pub values: Vec<i64>,
    /// JSON report path (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Result of a subcommand that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_bool(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

pub fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Compute(a) => compute(a),
        Command::GammaMedian(a) => gamma(a),
        Command::VerifySet(a) => verify_set(a),
        Command::Amvp(a) => amvp(a),
        Command::Solve(a) => solve(a),
        Command::VerifyWalsh(a) => walsh(a),
        Command::VerifyTrig(a) => trig(a),
        Command::QuinticCheck(a) => quintic(a),
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        bail!("--{name} must be positive, got {x}")
    }
}

fn compute(a: &ComputeArgs) -> Result<Outcome> {
    positive("tol", a.tol)?;
    let sample = read_sample_csv(&a.values)?;
    let r = p_average(&sample, a.p, a.tol)?;
    let closed = (a.p == 4.0).then(|| four_average_closed_form(&sample));
    let report = json!({
        "p": p_json(a.p),
        "n": sample.len(),
        "total_weight": sample.total_weight(),
        "value": r.value,
        "dispersion": r.dispersion,
        "residual": r.residual,
        "iterations": r.iterations,
        "four_average_closed_form": closed,
        "closed_form_difference": closed.map(|c| (c - r.value).abs()),
    });
    emit_json(&report, a.out.as_deref())?;
    Ok(Outcome::Pass)
}

fn gamma(a: &GammaArgs) -> Result<Outcome> {
    let values = match (&a.values, &a.list) {
        (Some(path), _) => read_sample_csv(path)?.values().to_vec(),
        (None, Some(list)) => list.clone(),
        (None, None) => bail!("one of --values or --list is required"),
    };
    WeightedSample::unweighted(values.clone()).context("field `values`")?;
    let median = gamma_median(&values)?;
    let averages = p_limit_to_gamma_median(&values, &a.p_sequence)?;
    let track: Vec<_> = a
        .p_sequence
        .iter()
        .zip(&averages)
        .map(|(p, v)| json!({ "p": p, "value": v, "distance_to_median": (v - median).abs() }))
        .collect();
    let report = json!({ "values": values, "gamma_median": median, "p_averages": track });
    emit_json(&report, a.out.as_deref())?;
    Ok(Outcome::Pass)
}

fn verify_set(a: &VerifySetArgs) -> Result<Outcome> {
    positive("tol", a.tol)?;
    let mut set = parse_set(&a.set).map_err(|e| anyhow!("--set: {e}"))?;
    if a.normalize {
        set = set.normalized();
    }
    let p = a.p.unwrap_or(set.exponent());
    let r = verify_averaging_set(&set, p, a.trials, a.tol, a.seed)?;
    let mut pass = r.pass;
    let exact = if a.exact {
        if !set.has_exact_coordinates() {
            bail!("--exact: set `{}` has no exact coordinates", set.label());
        }
        let cert = exact_certificate(&set, p)?;
        let value = match &cert {
            Some(c) => {
                let matches = p != set.exponent() || set.expected_d().is_none_or(|d| c.matches(d));
                pass &= c.isotropic && matches;
                json!({
                    "isotropic": c.isotropic,
                    "alpha": c.alpha.to_string(),
                    "beta": c.beta.to_string(),
                    "d": c.d.to_string(),
                    "d_value": c.d.to_f64(),
                    "matches_expected": matches,
                })
            }
            None => {
                pass = false;
                json!({ "isotropic": false })
            }
        };
        Some(value)
    } else {
        None
    };
    if let Some(path) = &a.vertices_csv {
        let header: Vec<String> = (1..=set.dim())
            .map(|i| format!("x{i}"))
            .chain(["weight".into()])
            .collect();
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        let rows = set
            .vectors()
            .zip(set.weights())
            .map(|(v, w)| v.iter().copied().chain([*w]).collect());
        write_atomic(path, &csv_table(&header, rows)?)?;
    }
    let expected_exact = if p == set.exponent() {
        set.expected_d().map(ToString::to_string)
    } else {
        None
    };
    let report = json!({
        "set": set.label(),
        "dimension": set.dim(),
        "vectors": set.len(),
        "set_exponent": set.exponent(),
        "p": p,
        "trials": r.trials,
        "seed": a.seed,
        "tol": a.tol,
        "d_estimate": r.d_estimate,
        "max_residual": r.max_residual,
        "expected_d": r.expected_d,
        "expected_d_exact": expected_exact,
        "d_error": r.d_error,
        "exact": exact,
        "pass": pass,
    });
    emit_json(&report, a.out.as_deref())?;
    Ok(Outcome::from_bool(pass))
}

fn amvp(a: &AmvpArgs) -> Result<Outcome> {
    positive("eps", a.eps)?;
    positive("tol", a.tol)?;
    if !a.p.is_finite() {
        bail!("--p must be finite for AMVP sweeps");
    }
    if a.halvings < 2 {
        bail!("--halvings must be at least 2");
    }
    let set = parse_set(&a.set).map_err(|e| anyhow!("--set: {e}"))?;
    let probe_file = read_probe(&a.probe)?;
    let (field, probe) = probe_file
        .resolve()
        .with_context(|| format!("malformed {}", a.probe.display()))?;
    if probe.dim() != set.dim() {
        bail!(
            "field `{}`: probe has dimension {}, set `{}` has {}",
            field_name(&a.probe),
            probe.dim(),
            set.label(),
            set.dim()
        );
    }
    let reference = amvp_reference(&set, probe.gradient(), probe.hessian(), a.p)?;
    let eps = halving_sequence(a.eps, a.halvings);
    let r = amvp_sweep_field(
        |y| field.value(y),
        probe.base_point(),
        reference,
        &set,
        &eps,
        a.p,
    )?;
    if let Some(path) = &a.csv {
        let rows = r
            .epsilons
            .iter()
            .zip(&r.estimates)
            .map(|(e, d)| vec![*e, *d]);
        write_atomic(path, &csv_table(&["epsilon", "estimate"], rows)?)?;
    }
    let pass = r.limit_error <= a.tol;
    let report = json!({
        "set": set.label(),
        "p": a.p,
        "base_point": probe.base_point(),
        "gradient": probe.gradient(),
        "epsilons": r.epsilons,
        "estimates": r.estimates,
        "fit_basis": "powers of (eps/eps_max)^2, constant term first",
        "fit": r.fit,
        "extrapolated_limit": r.extrapolated_limit,
        "reference": r.reference,
        "limit_error": r.limit_error,
        "max_abs_error_at_smallest_eps": r.max_abs_error_at_smallest_eps,
        "tol": a.tol,
        "pass": pass,
    });
    emit_json(&report, a.out.as_deref())?;
    Ok(Outcome::from_bool(pass))
}

fn field_name(probe: &Path) -> &'static str {
    match read_probe(probe) {
        Ok(crate::schema::ProbeFile::Field(_)) => "point",
        _ => "base_point",
    }
}

fn solve(a: &SolveArgs) -> Result<Outcome> {
    let problem: ProblemFile = read_json(&a.config)?;
    let ctx = || format!("malformed {}", a.config.display());
    let p = problem.p().with_context(ctx)?;
    let options = problem.options().with_context(ctx)?;
    let lattice = problem.lattice().with_context(ctx)?;
    let reference = problem.reference().with_context(ctx)?;
    let u0 = problem.initial_values(&lattice).with_context(ctx)?;
    let n = lattice.interior_count();
    let (gmin, gmax) = u0[n..]
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(*v), hi.max(*v))
        });
    let r = solve_from(&lattice, u0, p, &options, |_, _| {})?;
    let (umin, umax) = r.solution[..n]
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(*v), hi.max(*v))
        });
    let errors = reference
        .as_ref()
        .map(|f| error_report(&lattice, &r.solution, |x| f.value(x)));

    let dim = lattice.dim();
    let header: Vec<String> = (1..=dim)
        .map(|i| format!("x{i}"))
        .chain(["value".into(), "interior".into()])
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = (0..lattice.len()).map(|i| {
        let interior = if lattice.class(i) == NodeClass::Interior {
            1.0
        } else {
            0.0
        };
        lattice
            .node(i)
            .iter()
            .copied()
            .chain([r.solution[i], interior])
            .collect()
    });
    write_atomic(&a.out, &csv_table(&header, rows)?)?;

    let report = json!({
        "converged": r.converged,
        "iterations": r.iterations,
        "final_update_norm": r.final_update_norm,
        "tol": options.tol,
        "max_iters": options.max_iters,
        "sweep": problem.sweep.to_string(),
        "p": p_json(p),
        "dimension": dim,
        "stencil": problem.stencil_kind()?.name(),
        "epsilon": lattice.spacing(),
        "neighbor_distance": lattice.neighbor_distance(),
        "epsilon_convention": "epsilon is the lattice spacing; neighbours sit at epsilon times the common stencil norm",
        "interior_nodes": n,
        "strip_nodes": lattice.strip_count(),
        "boundary_min": gmin,
        "boundary_max": gmax,
        "solution_min": umin,
        "solution_max": umax,
        "comparison_holds": umin >= gmin - options.tol && umax <= gmax + options.tol,
        "sup_error": errors.map(|e| e.sup_error),
        "l2_error": errors.map(|e| e.l2_error),
    });
    emit_json(&report, a.report.as_deref())?;
    Ok(Outcome::from_bool(r.converged))
}

fn walsh(a: &WalshArgs) -> Result<Outcome> {
    positive("tol", a.tol)?;
    let r = verify_walsh(a.degree, a.trials, a.seed, a.tol)?;
    let report = json!({
        "max_degree": r.max_degree,
        "trials": r.trials,
        "seed": a.seed,
        "tol": a.tol,
        "max_relative_error": r.max_relative_error,
        "negative_case_error": r.negative_case_error,
        "pass": r.pass,
    });
    emit_json(&report, a.out.as_deref())?;
    Ok(Outcome::from_bool(r.pass))
}

fn trig(a: &TrigArgs) -> Result<Outcome> {
    positive("tol", a.tol)?;
    let r = verify_trig(a.kmax, a.samples, a.seed, a.tol)?;
    let report = json!({
        "kmax": r.kmax,
        "cases": r.cases,
        "seed": a.seed,
        "tol": a.tol,
        "max_scaled_error": r.max_scaled_error,
        "hexagon_fourth_power": r.hexagon_fourth_power,
        "negative_case_gap": r.negative_case_gap,
        "pass": r.pass,
    });
    emit_json(&report, a.out.as_deref())?;
    Ok(Outcome::from_bool(r.pass))
}

fn quintic(a: &QuinticArgs) -> Result<Outcome> {
    let r = quintic_pipeline(&a.values).context("--values")?;
    let pass = r.pass();
    let verdict = if !r.resolvent_integer_roots.is_empty() {
        "resolvent has a rational root"
    } else if r.matches_expected {
        "no rational root: the 6-average of this sample is not expressible by radicals"
    } else {
        "no rational root, but the depressed quintic differs from the stored resolvent's source"
    };
    let report = json!({
        "values": r.values,
        "quintic": r.quintic.to_string(),
        "shift": r.shift.to_string(),
        "depressed": r.depressed.to_string(),
        "matches_expected": r.matches_expected,
        "resolvent": r.resolvent.to_string(),
        "resolvent_note": "stored as printed; the x^3 and x^2 coefficients coincide",
        "resolvent_integer_roots": r.resolvent_integer_roots.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "resolvent_real_roots": r.resolvent_real_roots,
        "verdict": verdict,
        "pass": pass,
    });
    emit_json(&report, a.out.as_deref())?;
    Ok(Outcome::from_bool(pass))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn every_subcommand_has_help() {
        let cmd = Cli::command();
        for sub in cmd.get_subcommands() {
            assert!(sub.get_about().is_some(), "{}", sub.get_name());
            for arg in sub.get_arguments() {
                assert!(
                    arg.get_help().is_some(),
                    "{} --{}",
                    sub.get_name(),
                    arg.get_id()
                );
            }
        }
    }
}
