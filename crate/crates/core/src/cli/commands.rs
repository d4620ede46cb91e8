//! The experiment behind each subcommand, returned as a [`Table`].

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::config::{normalize_amplitudes, ExperimentConfig, ScheduleChoice};
use super::output::{Cell, Table};
use super::stats::{log_log_slope, pearson};
use super::CliError;
use crate::entanglement::{entanglement_trace, entropy_trace};
use crate::evolution::{default_steps, ground_state_trace, propagate};
use crate::grover::{grover_search, optimal_iterations};
use crate::hamiltonian::{
    action_integral, local_schedule, runtime_report, AdiabaticCriterion, RuntimeReport, Schedule,
    SearchProblem,
};

/// Entropy changes smaller than this do not break monotonicity.
const MONOTONE_TOL: f64 = 1e-12;

fn criterion(cfg: &ExperimentConfig) -> Result<AdiabaticCriterion, CliError> {
    Ok(AdiabaticCriterion::new(cfg.epsilon, cfg.grid_points)?)
}

fn problem(cfg: &ExperimentConfig) -> Result<SearchProblem, CliError> {
    Ok(SearchProblem::new(cfg.n, cfg.marked, cfg.initial_state()?)?)
}

fn schedule(
    cfg: &ExperimentConfig,
    problem: &SearchProblem,
    crit: &AdiabaticCriterion,
) -> Result<Schedule, CliError> {
    Ok(match cfg.schedule {
        ScheduleChoice::Linear => Schedule::linear(),
        ScheduleChoice::Local => local_schedule(problem, crit, crit.grid_points())?,
    })
}

fn summarize_runtime(table: &mut Table, report: &RuntimeReport) {
    table.note("g_min", report.gap_min.gap);
    table.note("s_star", report.gap_min.s);
    table.note("t_min", report.t_min);
}

/// Energies, gap and adiabatic matrix element on the s-grid.
pub fn cmd_spectrum(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let problem = problem(cfg)?;
    let crit = criterion(cfg)?;
    let schedule = schedule(cfg, &problem, &crit)?;
    let report = runtime_report(&problem, &schedule, &crit)?;

    let energy_names: Vec<String> = (0..problem.dim()).map(|k| format!("E{k}")).collect();
    let mut header = vec!["s"];
    header.extend(energy_names.iter().map(String::as_str));
    header.extend(["gap", "matrix_element"]);
    let mut table = Table::new(&header);
    for p in &report.trace {
        let mut row = vec![Cell::from(p.s)];
        row.extend(p.energies.iter().map(|&e| Cell::from(e)));
        row.push(p.gap.into());
        row.push(p.matrix_element.into());
        table.push(row);
    }
    summarize_runtime(&mut table, &report);
    Ok(table)
}

/// Entanglement of the instantaneous ground state along s.
///
/// Two-qubit problems get concurrence and reduced eigenvalues; larger
/// registers report the entropy of the cut only.
pub fn cmd_entanglement(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let problem = problem(cfg)?;
    let crit = criterion(cfg)?;
    let schedule = schedule(cfg, &problem, &crit)?;
    let trace = ground_state_trace(&problem, &schedule, cfg.grid_points)?;
    let marked: Vec<f64> = trace.samples.iter().map(|p| p.fidelity_marked).collect();

    let (mut table, entropies) = if cfg.n == 2 && cfg.cut.is_none() {
        let points = entanglement_trace(&trace)?;
        let mut table = Table::new(&[
            "s",
            "concurrence",
            "entropy",
            "mu_plus",
            "mu_minus",
            "fidelity_marked",
        ]);
        for (p, &fm) in points.iter().zip(&marked) {
            table.push(vec![
                p.s.into(),
                p.concurrence.into(),
                p.entropy.into(),
                p.mu_plus.into(),
                p.mu_minus.into(),
                fm.into(),
            ]);
        }
        let entropies = points.iter().map(|p| (p.s, p.entropy)).collect::<Vec<_>>();
        (table, entropies)
    } else {
        let cut = cfg.cut.clone().unwrap_or_else(|| vec![0]);
        let points = entropy_trace(&trace, &cut)?;
        let mut table = Table::new(&["s", "entropy", "fidelity_marked"]);
        for (&(s, e), &fm) in points.iter().zip(&marked) {
            table.push(vec![s.into(), e.into(), fm.into()]);
        }
        (table, points)
    };
    let stats = EntropyProfile::new(&entropies);
    table.note("initial_entropy", stats.initial);
    table.note("final_entropy", stats.last);
    table.note("max_entropy", stats.max);
    table.note("s_of_max", stats.s_of_max);
    Ok(table)
}

/// Summary of an entropy curve `(s, S(s))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyProfile {
    pub initial: f64,
    pub last: f64,
    pub max: f64,
    pub s_of_max: f64,
    pub monotone_decreasing: bool,
}

impl EntropyProfile {
    pub fn new(curve: &[(f64, f64)]) -> Self {
        let (s_of_max, max) = curve
            .iter()
            .copied()
            .fold((0.0, f64::NEG_INFINITY), |best, p| if p.1 > best.1 { p } else { best });
        Self {
            initial: curve.first().map_or(0.0, |p| p.1),
            last: curve.last().map_or(0.0, |p| p.1),
            max,
            s_of_max,
            monotone_decreasing: curve.windows(2).all(|w| w[1].1 <= w[0].1 + MONOTONE_TOL),
        }
    }
}

/// Real two-qubit states `(c0, c1, c1, c3)` on a grid over the unit sphere
/// with `c0 >= 0`: `c0 = cos a`, `c1 = sin a cos b / sqrt 2`,
/// `c3 = sin a sin b`, with `resolution` steps in `a` over `[0, pi/2]` and
/// `4 resolution` steps in `b` over `[0, 2 pi)`.
pub fn sweep_states(resolution: usize) -> Vec<[f64; 4]> {
    let mut states = Vec::new();
    for i in 0..=resolution {
        let a = FRAC_PI_2 * i as f64 / resolution as f64;
        let steps_b = if i == 0 { 1 } else { 4 * resolution };
        for j in 0..steps_b {
            let b = 2.0 * PI * j as f64 / steps_b as f64;
            let c1 = a.sin() * b.cos() / 2f64.sqrt();
            states.push([a.cos(), c1, c1, a.sin() * b.sin()]);
        }
    }
    states
}

/// Ground-state entanglement and runtime for a family of initial states.
pub fn cmd_sweep(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let real = |c: [f64; 4]| c.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
    let half = 0.5;
    let root_half = 1.0 / 2f64.sqrt();
    let mut candidates: Vec<(&str, Vec<Complex64>)> = Vec::new();
    match &cfg.states {
        Some(states) => candidates.extend(states.iter().map(|a| ("custom", a.clone()))),
        None => {
            if cfg.n != 2 {
                return Err(CliError::Config(
                    "the default sweep family is two-qubit; give explicit states for n != 2".into(),
                ));
            }
            candidates.push(("uniform", real([half; 4])));
            candidates.push(("bell", real([root_half, 0.0, 0.0, root_half])));
            candidates.extend(sweep_states(cfg.resolution).into_iter().map(|c| ("grid", real(c))));
        }
    }

    let crit = criterion(cfg)?;
    let dim = 1usize << cfg.n;
    let mut header = vec!["label".to_owned()];
    header.extend((0..dim).map(|k| format!("c{k}")));
    header.extend(
        [
            "initial_entropy",
            "max_entropy",
            "s_of_max",
            "final_entropy",
            "g_min",
            "s_of_gmin",
            "t_min",
            "monotone_decreasing",
            "c0_ge_c3",
        ]
        .map(String::from),
    );
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table = Table::new(&header);
    let mut skipped = 0usize;
    let cut = cfg.cut.clone().unwrap_or_else(|| vec![0]);
    for (label, amps) in candidates {
        if amps.len() != dim {
            return Err(CliError::Config(format!(
                "sweep state has {} amplitudes, expected {dim}",
                amps.len()
            )));
        }
        let psi = normalize_amplitudes(amps)?;
        let problem = match SearchProblem::new(cfg.n, cfg.marked, psi.clone()) {
            Ok(p) => p,
            Err(crate::Error::ZeroOverlap) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let schedule = schedule(cfg, &problem, &crit)?;
        let report = runtime_report(&problem, &schedule, &crit)?;
        let trace = ground_state_trace(&problem, &schedule, cfg.grid_points)?;
        let profile = EntropyProfile::new(&entropy_trace(&trace, &cut)?);

        let mut row = vec![Cell::from(label)];
        row.extend(psi.amplitudes().iter().map(|c| Cell::from(c.re)));
        row.extend([
            profile.initial.into(),
            profile.max.into(),
            profile.s_of_max.into(),
            profile.last.into(),
            report.gap_min.gap.into(),
            report.gap_min.s.into(),
            report.t_min.into(),
            profile.monotone_decreasing.into(),
            (psi.amplitude(0).re >= psi.amplitude(dim - 1).re).into(),
        ]);
        table.push(row);
    }

    let column = |name: &str| -> Vec<f64> {
        let k = table.column(name).expect("known column");
        table.rows.iter().filter_map(|r| r[k].as_f64()).collect()
    };
    let entropy0 = column("initial_entropy");
    let corr = |ys: Vec<f64>| pearson(&entropy0, &ys).map_or(Cell::Text("nan".into()), Cell::Num);
    let corr_gap = corr(column("g_min"));
    let corr_time = corr(column("t_min"));
    let (ge, mono) = {
        let ge = table.column("c0_ge_c3").expect("known column");
        let mono = table.column("monotone_decreasing").expect("known column");
        let smax = table.column("s_of_max").expect("known column");
        let rows: Vec<_> = table.rows.iter().filter(|r| r[ge] == Cell::Flag(true)).collect();
        let hits = rows
            .iter()
            .filter(|r| r[mono] == Cell::Flag(true) || r[smax].as_f64() == Some(0.0))
            .count();
        (rows.len(), hits)
    };
    table.note("states", table.rows.len());
    table.note("skipped_zero_overlap", skipped);
    table.note("corr_initial_entropy_g_min", corr_gap);
    table.note("corr_initial_entropy_t_min", corr_time);
    table.note("c0_ge_c3_rows", ge);
    table.note("c0_ge_c3_rows_decreasing_or_peak_at_start", mono);
    Ok(table)
}

/// Minimum runtimes of the linear and local schedules across register sizes.
pub fn cmd_scaling(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    if !(2 <= cfg.n_min && cfg.n_min <= cfg.n_max && cfg.n_max <= 10) {
        return Err(CliError::Config(format!(
            "need 2 <= n_min <= n_max <= 10, got {}..{}",
            cfg.n_min, cfg.n_max
        )));
    }
    let crit = criterion(cfg)?;
    let mut table = Table::new(&[
        "n",
        "N",
        "t_min_linear",
        "t_min_local",
        "k0",
        "action_local",
        "action_ratio",
    ]);
    let (mut sizes, mut linear, mut local) = (Vec::new(), Vec::new(), Vec::new());
    for n in cfg.n_min..=cfg.n_max {
        let row = scaling_row(n, &crit)?;
        sizes.push(row.n_items as f64);
        linear.push(row.t_min_linear);
        local.push(row.t_min_local);
        table.push(vec![
            n.into(),
            row.n_items.into(),
            row.t_min_linear.into(),
            row.t_min_local.into(),
            optimal_iterations(row.n_items).into(),
            row.action_local.into(),
            row.action_ratio.into(),
        ]);
    }
    let slope = |ys: &[f64]| log_log_slope(&sizes, ys).map_or(Cell::Text("nan".into()), Cell::Num);
    table.note("slope_linear", slope(&linear));
    table.note("slope_local", slope(&local));
    Ok(table)
}

/// Runtimes and oracle action for one register size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub n_items: usize,
    pub t_min_linear: f64,
    pub t_min_local: f64,
    /// `integral_0^T g dt` for the local schedule at `T = t_min_local`.
    pub action_local: f64,
    /// `action_local / (sqrt(N) / 4)`.
    pub action_ratio: f64,
}

pub fn scaling_row(n: usize, crit: &AdiabaticCriterion) -> Result<ScalingRow, CliError> {
    let problem = SearchProblem::uniform(n, 0)?;
    let t_min_linear = runtime_report(&problem, &Schedule::linear(), crit)?.t_min;
    let local = local_schedule(&problem, crit, crit.grid_points())?;
    let t_min_local = runtime_report(&problem, &local, crit)?.t_min;
    let action_local = action_integral(&local, t_min_local)?;
    let n_items = problem.dim();
    Ok(ScalingRow {
        n_items,
        t_min_linear,
        t_min_local,
        action_local,
        action_ratio: action_local / ((n_items as f64).sqrt() / 4.0),
    })
}

/// Success probability of discrete Grover search per iteration.
pub fn cmd_grover(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let problem = SearchProblem::uniform(cfg.n, cfg.marked)?;
    let k0 = optimal_iterations(problem.dim());
    let k_max = cfg.k_max.unwrap_or(2 * k0 + 1).max(1);
    let run = grover_search(&problem, k_max)?;
    let mut table = Table::new(&["k", "success_probability"]);
    for &(k, p) in &run.iterations {
        table.push(vec![k.into(), p.into()]);
    }
    table.note("k0", k0);
    if let Some(p) = run.probability(k0) {
        table.note("p_k0", p);
    }
    table.note("bound", 1.0 - 1.0 / problem.dim() as f64);
    Ok(table)
}

/// Full Schrödinger propagation and its fidelities.
pub fn cmd_evolve(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let problem = problem(cfg)?;
    let crit = criterion(cfg)?;
    let schedule = schedule(cfg, &problem, &crit)?;
    let t_min = runtime_report(&problem, &schedule, &crit)?.t_min;
    let total_time = cfg.total_time.unwrap_or(10.0 * t_min);
    let steps = cfg.steps.unwrap_or_else(|| default_steps(total_time));
    let trace = propagate(&problem, &schedule, total_time, steps)?;

    let mut table = Table::new(&["s", "fidelity_ground", "fidelity_marked", "norm_drift"]);
    for p in &trace.samples {
        table.push(vec![
            p.s.into(),
            p.fidelity_ground.into(),
            p.fidelity_marked.into(),
            p.norm_drift.into(),
        ]);
    }
    let last = trace.final_sample();
    let target = 1.0 - cfg.epsilon * cfg.epsilon;
    table.note("t_min", t_min);
    table.note("T", total_time);
    table.note("steps", steps);
    table.note("final_fidelity_marked", last.fidelity_marked);
    table.note("target", target);
    table.note("target_met", last.fidelity_marked >= target);
    table.note("max_norm_drift", trace.max_norm_drift());
    Ok(table)
}
