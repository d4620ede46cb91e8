use super::problem::SearchProblem;
use super::schedule::{Schedule, ScheduleKind};
use super::spectrum::{golden_section, grid, spectral_point, spectrum_trace, GapMinimum, SpectralPoint};
use crate::error::{Error, Result};

/// Gaps below this cannot be resolved by the runtime estimates.
pub const MIN_RESOLVABLE_GAP: f64 = 1e-12;
/// Simpson nodes used for the action integral.
pub const ACTION_NODES: usize = 4097;

/// Accuracy target of the adiabatic condition, in units with `hbar = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticCriterion {
    epsilon: f64,
    grid_points: usize,
}

impl Default for AdiabaticCriterion {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            grid_points: 1024,
        }
    }
}

impl AdiabaticCriterion {
    pub const MIN_GRID: usize = 64;

    pub fn new(epsilon: f64, grid_points: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        if grid_points < Self::MIN_GRID {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least {} points, got {grid_points}",
                Self::MIN_GRID
            )));
        }
        Ok(Self {
            epsilon,
            grid_points,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }
}

/// `|<E1|dH/ds|E0>| / gap^2` at one spectral point.
pub fn adiabatic_rate(point: &SpectralPoint) -> Result<f64> {
    if point.gap < MIN_RESOLVABLE_GAP {
        return Err(Error::GapTooSmall {
            s: point.s,
            gap: point.gap,
        });
    }
    Ok(point.matrix_element / (point.gap * point.gap))
}

/// Everything the runtime estimate derives from one spectral sweep.
#[derive(Debug, Clone)]
pub struct RuntimeReport {
    pub trace: Vec<SpectralPoint>,
    pub gap_min: GapMinimum,
    /// Where the adiabatic rate peaks.
    pub s_of_max_rate: f64,
    /// Peak of `|<E1|dH/ds|E0>| / gap^2`, independent of epsilon.
    pub max_rate: f64,
    pub t_min: f64,
}

/// Spectrum trace, refined minimum gap and minimum adiabatic runtime.
pub fn runtime_report(
    problem: &SearchProblem,
    schedule: &Schedule,
    crit: &AdiabaticCriterion,
) -> Result<RuntimeReport> {
    let trace = spectrum_trace(problem, schedule, crit.grid_points)?;
    let gap_min = problem.min_gap(schedule, &trace)?;
    let rates = trace.iter().map(adiabatic_rate).collect::<Result<Vec<_>>>()?;
    let (k, grid_max) = rates
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or(Error::EmptyTrace)?;
    let lo = trace[k.saturating_sub(1)].s;
    let hi = trace[(k + 1).min(trace.len() - 1)].s;
    let (s_ref, neg) = golden_section(lo, hi, |s| {
        Ok(-adiabatic_rate(&spectral_point(problem, schedule, s)?)?)
    })?;
    let (s_of_max_rate, max_rate) = if -neg > grid_max {
        (s_ref, -neg)
    } else {
        (trace[k].s, grid_max)
    };
    Ok(RuntimeReport {
        trace,
        gap_min,
        s_of_max_rate,
        max_rate,
        t_min: max_rate / crit.epsilon,
    })
}

/// Minimum runtime for which the adiabatic condition holds everywhere:
/// `T_min = max_s |<E1|dH/ds|E0>| / (epsilon gap(s)^2)`, using
/// `dH/dt = (1/T) dH/ds`.
pub fn adiabatic_t_min(
    problem: &SearchProblem,
    schedule: &Schedule,
    crit: &AdiabaticCriterion,
) -> Result<f64> {
    Ok(runtime_report(problem, schedule, crit)?.t_min)
}

/// Schedule that meets the adiabatic condition locally.
///
/// Integrates `dt/ds = |<E1|dH/ds|E0>| / (epsilon gap(s)^2)` along the
/// linear path and tabulates the inverse `s(t / T)`, with `T` the integrated
/// time (available as [`Schedule::natural_time`]).
pub fn local_schedule(
    problem: &SearchProblem,
    crit: &AdiabaticCriterion,
    grid_points: usize,
) -> Result<Schedule> {
    let linear = Schedule::linear();
    let trace = spectrum_trace(problem, &linear, grid_points)?;
    let mut rates = trace.iter().map(adiabatic_rate).collect::<Result<Vec<_>>>()?;
    let peak = rates.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        // nothing to adapt to: the linear path is already adiabatic
        let times: Vec<f64> = grid(grid_points)?.collect();
        let progress = times.clone();
        let slopes = vec![1.0; times.len()];
        return Schedule::with_slopes(ScheduleKind::Local, times, progress, slopes, Some(0.0));
    }
    for r in rates.iter_mut() {
        *r = r.max(1e-12 * peak);
    }

    let path: Vec<f64> = trace.iter().map(|p| p.s).collect();
    let mut elapsed = Vec::with_capacity(path.len());
    let mut acc = 0.0;
    elapsed.push(0.0);
    for k in 1..path.len() {
        acc += 0.5 * (rates[k] + rates[k - 1]) * (path[k] - path[k - 1]);
        elapsed.push(acc);
    }
    let total = acc;
    let times: Vec<f64> = elapsed.iter().map(|t| t / total).collect();
    let slopes: Vec<f64> = rates.iter().map(|r| total / r).collect();
    let mut times = times;
    let last = times.len() - 1;
    times[last] = 1.0;
    Schedule::with_slopes(
        ScheduleKind::Local,
        times,
        path,
        slopes,
        Some(total / crit.epsilon),
    )
}

/// `integral_0^T g(t) dt` (with `hbar = 1`) by composite Simpson on
/// [`ACTION_NODES`] nodes.
pub fn action_integral(schedule: &Schedule, total_time: f64) -> Result<f64> {
    if !(total_time > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "total time must be positive, got {total_time}"
        )));
    }
    let mut err = None;
    let value = integrate_action(
        |s| {
            schedule.g(s).unwrap_or_else(|e| {
                err = Some(e);
                0.0
            })
        },
        total_time,
    );
    match err {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// `T * integral_0^1 g(s) ds` for an arbitrary oracle weight `g`.
pub fn integrate_action(mut g: impl FnMut(f64) -> f64, total_time: f64) -> f64 {
    let intervals = ACTION_NODES - 1;
    let h = 1.0 / intervals as f64;
    let mut sum = g(0.0) + g(1.0);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * g(k as f64 * h);
    }
    total_time * sum * h / 3.0
}
