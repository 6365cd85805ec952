use std::path::Path;

use poaforge_core::analytic::AnalyticInstance;
use poaforge_core::equilibrium::{self, FiniteAuctionInstance, MonteCarloReport};
use poaforge_core::reduction::{self, discretize};
use poaforge_core::welfare::WelfareReport;
use poaforge_core::{classify, poa, validate, worstcase, PiecewiseInstance};
use serde::Serialize;

use crate::args::{Cli, Command, EmitFormat, SweepKind};
use crate::io;
use crate::CliError;

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { instance, m } => cmd_validate(&instance, m),
        Command::Classify { instance, m } => cmd_classify(&instance, m),
        Command::Poa { instance, m, lambda, mu, oracle } => {
            cmd_poa(&instance, m, lambda, mu, oracle)
        }
        Command::Reduce { input, out, trace } => cmd_reduce(&input, &out, trace.as_deref()),
        Command::WorstCase { grid, emit, out } => cmd_worst_case(grid, emit, out.as_deref()),
        Command::Sweep { kind, grid, m_list, lambda, mu, out } => {
            cmd_sweep(kind, grid, &m_list, lambda, mu, out.as_deref())
        }
        Command::Simulate { instance, n, samples, seed, format } => {
            cmd_simulate(&instance, n, samples, seed, format)
        }
        Command::Repro { quick } => cmd_repro(quick),
    }
}

/// Resolves an instance argument: a JSON path or a discretized builtin.
fn resolve_instance(
    name: &str,
    m: usize,
    lambda: Option<f64>,
    mu: f64,
) -> Result<PiecewiseInstance, CliError> {
    match name {
        "builtin:worstcase-discrete" => {
            let lam = lambda.unwrap_or_else(worstcase::worst_lambda);
            let analytic = worstcase::twin_ceiling_analytic(lam, mu)?;
            Ok(discretize(&analytic, m)?)
        }
        "builtin:hht" => {
            let src: AnalyticInstance =
                poaforge_core::analytic::hht_instance_at(lambda.unwrap_or(0.57));
            Ok(discretize(&src, m)?)
        }
        other if other.starts_with("builtin:") => {
            Err(CliError::new(format!("unknown builtin instance `{other}`"), 1))
        }
        path => io::load_instance(Path::new(path)),
    }
}

fn cmd_validate(name: &str, m: usize) -> Result<(), CliError> {
    let inst = resolve_instance(name, m, None, 1.0)?;
    let report = validate(&inst)?;
    if report.is_valid() {
        println!("valid");
        Ok(())
    } else {
        Err(CliError::new(format!("instance is invalid:\n{report}"), 1))
    }
}

fn cmd_classify(name: &str, m: usize) -> Result<(), CliError> {
    let inst = resolve_instance(name, m, None, 1.0)?;
    println!("{}", classify(&inst));
    Ok(())
}

#[derive(Serialize)]
struct PoaOutput {
    #[serde(flatten)]
    report: WelfareReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_fpa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_abs_error: Option<f64>,
}

fn cmd_poa(
    name: &str,
    m: usize,
    lambda: Option<f64>,
    mu: f64,
    oracle: bool,
) -> Result<(), CliError> {
    let inst = resolve_instance(name, m, lambda, mu)?;
    let report = poa(&inst)?;
    let (oracle_fpa, oracle_abs_error) = if oracle {
        let q = poaforge_core::quadrature_oracle_fpa(&inst)?;
        (Some(q.fpa), Some(q.abs_error_estimate))
    } else {
        (None, None)
    };
    print!("{}", io::to_json_string(&PoaOutput { report, oracle_fpa, oracle_abs_error })?);
    Ok(())
}

fn cmd_reduce(input: &Path, out: &Path, trace_path: Option<&Path>) -> Result<(), CliError> {
    let inst = io::load_instance(input)?;
    let (output, trace) = reduction::reduce_full(&inst)?;
    io::write_file(out, &io::to_json_string(&output)?)?;
    if let Some(tp) = trace_path {
        io::write_file(tp, &io::to_json_string(&trace)?)?;
    }
    let first = trace.steps.first().map(|s| s.poa_before);
    let last = trace.steps.last().map(|s| s.poa_after);
    println!(
        "reduced to {} in {} steps (ratio {} -> {}{})",
        classify(&output),
        trace.steps.len(),
        first.map(|p| format!("{p:.9}")).unwrap_or_else(|| "-".into()),
        last.map(|p| format!("{p:.9}")).unwrap_or_else(|| "-".into()),
        if trace.degenerate { ", degenerate input" } else { "" },
    );
    Ok(())
}

fn cmd_worst_case(
    grid: usize,
    emit: Option<EmitFormat>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let params = worstcase::optimize_with_grid(grid);
    print!("{}", io::to_json_string(&params)?);
    if let Some(format) = emit {
        if format != EmitFormat::Csv {
            return Err(CliError::new("only `--emit csv` is supported here", 1));
        }
        let rows = worstcase::sweep_grid(grid);
        io::emit_csv(
            out,
            &["lambda", "mu", "h", "objective"],
            rows.into_iter().map(|r| vec![r.lambda, r.mu, r.h_mu, r.objective]),
        )?;
    }
    Ok(())
}

fn cmd_sweep(
    kind: SweepKind,
    grid: usize,
    m_list: &str,
    lambda: Option<f64>,
    mu: f64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    match kind {
        SweepKind::Objective => {
            let rows = worstcase::sweep_grid(grid);
            let cells = io::par_map(rows, |r| {
                let integral = worstcase::poa_integral(r.lambda, r.mu).unwrap_or(f64::NAN);
                vec![r.lambda, r.mu, r.h_mu, r.objective, integral]
            });
            io::emit_csv(
                out,
                &["lambda", "mu", "h", "objective", "integral"],
                cells.into_iter(),
            )
        }
        SweepKind::Discretization => {
            let lam = lambda.unwrap_or_else(worstcase::worst_lambda);
            let ms: Vec<usize> = m_list
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::new(format!("bad --m-list: {e}"), 1))?;
            let objective = worstcase::poa_objective(lam, mu)?;
            let cells = io::par_map(ms, |&m| {
                let row = worstcase::twin_ceiling_analytic(lam, mu)
                    .and_then(|src| discretize(&src, m))
                    .and_then(|inst| poa(&inst))
                    .map(|r| r.poa)
                    .unwrap_or(f64::NAN);
                vec![m as f64, row, row - objective]
            });
            io::emit_csv(out, &["m", "poa", "error_vs_objective"], cells.into_iter())
        }
    }
}

fn builtin_finite(name: &str, n: usize) -> Result<FiniteAuctionInstance, CliError> {
    match name {
        "builtin:example1" => Ok(equilibrium::vickrey_uniform_pair()),
        "builtin:example2" => Ok(equilibrium::value_dominant_pair()),
        "builtin:example3" => Ok(equilibrium::mixed_monopolist_pair()),
        "builtin:single" => Ok(equilibrium::single_bidder_fixture()),
        "builtin:worstcase" => Ok(equilibrium::build_worst_case_instance(n)?),
        "builtin:hht" => Ok(equilibrium::hht_finite_instance(n)?),
        other => Err(CliError::new(
            format!("unknown simulation instance `{other}` (expected builtin:example1|example2|example3|single|hht|worstcase)"),
            1,
        )),
    }
}

/// Analytic reference welfare for fixtures where a closed/quadrature form
/// exists.
fn analytic_reference(name: &str, n: usize) -> Option<WelfareReport> {
    match name {
        "builtin:worstcase" => equilibrium::worst_case_analytic_welfare(n).ok(),
        "builtin:hht" => equilibrium::hht_analytic_welfare(n).ok(),
        _ => None,
    }
}

#[derive(Serialize)]
struct SimulateOutput {
    #[serde(flatten)]
    mc: MonteCarloReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    analytic: Option<WelfareReport>,
}

fn cmd_simulate(
    name: &str,
    n: usize,
    samples: u64,
    seed: u64,
    format: EmitFormat,
) -> Result<(), CliError> {
    let inst = builtin_finite(name, n)?;
    let mc = equilibrium::monte_carlo(&inst, samples, seed);
    let analytic = analytic_reference(name, n);
    match format {
        EmitFormat::Json => {
            print!("{}", io::to_json_string(&SimulateOutput { mc, analytic })?);
        }
        EmitFormat::Csv => {
            io::emit_csv(
                None,
                &["fpa", "opt", "poa", "se_fpa", "se_opt", "samples", "seed"],
                core::iter::once(vec![
                    mc.fpa,
                    mc.opt,
                    mc.poa,
                    mc.se_fpa,
                    mc.se_opt,
                    mc.samples as f64,
                    mc.seed as f64,
                ]),
            )?;
        }
    }
    Ok(())
}

fn cmd_repro(quick: bool) -> Result<(), CliError> {
    let bound = worstcase::tight_bound();
    let (grid, m, n, samples) =
        if quick { (80, 500, 100, 100_000u64) } else { (200, 2000, 1000, 1_000_000u64) };

    println!("reproducing the tight first-price-auction ratio bound 1 - 1/e^2 = {bound:.12}");
    println!();

    // 1. analytic optimization
    let params = worstcase::optimize_with_grid(grid);
    // 2. independent integral route at the optimum
    let integral = worstcase::poa_integral(params.lambda, params.mu)?;
    // 3. discretized twin-ceiling welfare through the piecewise engine
    let analytic_inst = worstcase::twin_ceiling_analytic(params.lambda, params.mu)?;
    let discretized = discretize(&analytic_inst, m)?;
    let engine = poa(&discretized)?;
    // 3b. the reduction pipeline recognizes/normalizes it
    let (reduced, trace) = reduction::run_main(&discretized)?;
    // 4. Monte Carlo on the explicit finite instance
    let bounds = equilibrium::lb_welfare_bounds(n)?;
    let finite = equilibrium::build_worst_case_instance(n)?;
    let mc = equilibrium::monte_carlo(&finite, samples, 7);

    let rows = [
        ("analytic optimum      ", params.objective, 1e-9),
        ("integral route        ", integral, 1e-8),
        (
            "discretized welfare   ",
            engine.poa,
            if quick { 2.5e-3 } else { 5e-4 },
        ),
        ("finite-instance ratio ", bounds.fpa_analytic / bounds.opt_analytic, 2e-3),
        ("Monte Carlo ratio     ", mc.poa, (3.0 * mc.se_fpa + 2e-3).max(1e-3)),
    ];
    println!("{:<24} {:>18} {:>14} {:>10}", "estimate", "value", "vs bound", "tolerance");
    let mut ok = true;
    for (label, value, tol) in rows {
        let diff = value - bound;
        let pass = diff.abs() <= tol;
        ok &= pass;
        println!(
            "{label} {value:>18.12} {diff:>+14.3e} {tol:>10.1e} {}",
            if pass { "ok" } else { "OFF" }
        );
    }
    println!();
    println!(
        "optimizer: lambda = {:.9} (target {:.9}), mu = {:.9}, pointmass = {:.9}",
        params.lambda,
        worstcase::worst_lambda(),
        params.mu,
        params.h_mu
    );
    println!(
        "reduction: discretized instance classifies `{}`, {} main-loop steps, output `{}`",
        classify(&discretized),
        trace.main_loop_steps(),
        classify(&reduced)
    );
    println!(
        "finite n = {n}: FPA {:.9} <= bound {:.9}, OPT {:.9} >= {:.9}",
        bounds.fpa_analytic, bounds.fpa_upper, bounds.opt_analytic, bounds.opt_lower
    );
    println!(
        "Monte Carlo ({samples} samples, seed 7): FPA {:.6} ± {:.1e}, OPT {:.6} ± {:.1e}",
        mc.fpa, mc.se_fpa, mc.opt, mc.se_opt
    );
    if ok {
        println!("\nall estimates agree with 1 - 1/e^2 within their tolerances");
        Ok(())
    } else {
        Err(CliError::new("some estimates disagree with the bound", 2))
    }
}
