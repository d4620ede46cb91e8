use std::sync::Arc;

use crate::error::{Error, Result};

/// Step of the central difference used for tabulated schedules.
pub const DIFF_STEP: f64 = 1e-6;
const BOUNDARY_TOL: f64 = 1e-12;
/// Spacing of the grid on which monotonicity is checked.
const MONOTONE_GRID: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Linear,
    Local,
    Tabulated,
}

/// Interpolation `f(s) H0 + g(s) H1` over normalized time `s = t / T`.
///
/// Non-linear schedules are stored as a monotone progress table `p(s)` with
/// `f = 1 - p` and `g = p`, interpolated by monotone cubic Hermite splines.
#[derive(Debug, Clone)]
pub struct Schedule {
    kind: ScheduleKind,
    table: Option<Arc<ProgressTable>>,
    natural_time: Option<f64>,
}

#[derive(Debug)]
struct ProgressTable {
    times: Vec<f64>,
    progress: Vec<f64>,
    slopes: Vec<f64>,
}

impl Schedule {
    /// `f(s) = 1 - s`, `g(s) = s`.
    pub fn linear() -> Self {
        Self {
            kind: ScheduleKind::Linear,
            table: None,
            natural_time: None,
        }
    }

    /// Progress table `p(times[k]) = progress[k]`; `times` strictly
    /// increasing from 0 to 1, `progress` non-decreasing from 0 to 1.
    pub fn tabulated(times: Vec<f64>, progress: Vec<f64>) -> Result<Self> {
        let slopes = pchip_slopes(&times, &progress);
        Self::from_table(ScheduleKind::Tabulated, times, progress, slopes, None)
    }

    /// Table with caller-supplied node slopes `dp/ds`, limited to keep the
    /// interpolant monotone.
    pub(crate) fn with_slopes(
        kind: ScheduleKind,
        times: Vec<f64>,
        progress: Vec<f64>,
        mut slopes: Vec<f64>,
        natural_time: Option<f64>,
    ) -> Result<Self> {
        limit_slopes(&times, &progress, &mut slopes);
        Self::from_table(kind, times, progress, slopes, natural_time)
    }

    fn from_table(
        kind: ScheduleKind,
        times: Vec<f64>,
        progress: Vec<f64>,
        slopes: Vec<f64>,
        natural_time: Option<f64>,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidSchedule(msg));
        if times.len() < 2 || times.len() != progress.len() {
            return invalid(format!(
                "need at least two nodes with matching lengths, got {} times and {} values",
                times.len(),
                progress.len()
            ));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return invalid("node times must be strictly increasing".into());
        }
        if progress.windows(2).any(|w| w[1] < w[0]) {
            return invalid("progress must be non-decreasing".into());
        }
        let last = times.len() - 1;
        if times[0].abs() > BOUNDARY_TOL || (times[last] - 1.0).abs() > BOUNDARY_TOL {
            return invalid("node times must span [0, 1]".into());
        }
        let schedule = Self {
            kind,
            table: Some(Arc::new(ProgressTable {
                times,
                progress,
                slopes,
            })),
            natural_time,
        };
        schedule.validate()?;
        Ok(schedule)
    }

    /// Checks the boundary values and monotonicity of `f` and `g`.
    pub fn validate(&self) -> Result<()> {
        let (f0, g0) = self.coefficients(0.0)?;
        let (f1, g1) = self.coefficients(1.0)?;
        if (f0 - 1.0).abs() > BOUNDARY_TOL
            || f1.abs() > BOUNDARY_TOL
            || g0.abs() > BOUNDARY_TOL
            || (g1 - 1.0).abs() > BOUNDARY_TOL
        {
            return Err(Error::InvalidSchedule(format!(
                "boundary values f(0)={f0}, f(1)={f1}, g(0)={g0}, g(1)={g1}"
            )));
        }
        let mut prev = (f0, g0);
        for k in 1..=MONOTONE_GRID {
            let cur = self.coefficients(k as f64 / MONOTONE_GRID as f64)?;
            if cur.0 > prev.0 || cur.1 < prev.1 {
                return Err(Error::InvalidSchedule(format!(
                    "not monotone near s = {}",
                    k as f64 / MONOTONE_GRID as f64
                )));
            }
            prev = cur;
        }
        Ok(())
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    /// Runtime the schedule was built for, when it carries one (local
    /// schedules record their integrated adiabatic time).
    pub fn natural_time(&self) -> Option<f64> {
        self.natural_time
    }

    /// Interpolation progress `g(s)`.
    pub fn progress(&self, s: f64) -> Result<f64> {
        let s = check_range(s)?;
        Ok(match &self.table {
            None => s,
            Some(t) => t.eval(s),
        })
    }

    pub fn f(&self, s: f64) -> Result<f64> {
        Ok(1.0 - self.progress(s)?)
    }

    pub fn g(&self, s: f64) -> Result<f64> {
        self.progress(s)
    }

    /// `(f(s), g(s))`.
    pub fn coefficients(&self, s: f64) -> Result<(f64, f64)> {
        let p = self.progress(s)?;
        Ok((1.0 - p, p))
    }

    /// `(f'(s), g'(s))`; central differences with step [`DIFF_STEP`] for
    /// tabulated kinds, second-order one-sided within a step of either end.
    pub fn derivatives(&self, s: f64) -> Result<(f64, f64)> {
        let s = check_range(s)?;
        let Some(table) = &self.table else {
            return Ok((-1.0, 1.0));
        };
        let h = DIFF_STEP;
        let p = |x: f64| table.eval(x);
        let dp = if s < h {
            (-3.0 * p(s) + 4.0 * p(s + h) - p(s + 2.0 * h)) / (2.0 * h)
        } else if s > 1.0 - h {
            (3.0 * p(s) - 4.0 * p(s - h) + p(s - 2.0 * h)) / (2.0 * h)
        } else {
            (p(s + h) - p(s - h)) / (2.0 * h)
        };
        Ok((-dp, dp))
    }
}

fn check_range(s: f64) -> Result<f64> {
    if !(-BOUNDARY_TOL..=1.0 + BOUNDARY_TOL).contains(&s) {
        return Err(Error::OutOfRange(s));
    }
    Ok(s.clamp(0.0, 1.0))
}

impl ProgressTable {
    fn eval(&self, s: f64) -> f64 {
        let t = &self.times;
        let k = t.partition_point(|&x| x <= s).clamp(1, t.len() - 1) - 1;
        let h = t[k + 1] - t[k];
        let u = (s - t[k]) / h;
        let (y0, y1) = (self.progress[k], self.progress[k + 1]);
        let (m0, m1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        let u2 = u * u;
        let u3 = u2 * u;
        let v = (2.0 * u3 - 3.0 * u2 + 1.0) * y0
            + (u3 - 2.0 * u2 + u) * m0
            + (-2.0 * u3 + 3.0 * u2) * y1
            + (u3 - u2) * m1;
        v.clamp(y0, y1)
    }
}

/// Fritsch–Carlson slopes for monotone data.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let secant: Vec<f64> = (0..n - 1)
        .map(|k| (y[k + 1] - y[k]) / (x[k + 1] - x[k]))
        .collect();
    let mut m = vec![0.0; n];
    m[0] = secant[0];
    m[n - 1] = secant[n - 2];
    for k in 1..n - 1 {
        m[k] = if secant[k - 1] * secant[k] <= 0.0 {
            0.0
        } else {
            (secant[k - 1] + secant[k]) / 2.0
        };
    }
    limit_slopes(x, y, &mut m);
    m
}

fn limit_slopes(x: &[f64], y: &[f64], m: &mut [f64]) {
    for k in 0..x.len().saturating_sub(1) {
        let delta = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
        if delta == 0.0 {
            m[k] = 0.0;
            m[k + 1] = 0.0;
            continue;
        }
        let a = m[k] / delta;
        let b = m[k + 1] / delta;
        let r = a * a + b * b;
        if r > 9.0 {
            let tau = 3.0 / r.sqrt();
            m[k] = tau * a * delta;
            m[k + 1] = tau * b * delta;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_boundaries_and_slopes() {
        let s = Schedule::linear();
        assert_eq!(s.coefficients(0.0).unwrap(), (1.0, 0.0));
        assert_eq!(s.coefficients(1.0).unwrap(), (0.0, 1.0));
        assert_eq!(s.derivatives(0.42).unwrap(), (-1.0, 1.0));
        assert!(s.validate().is_ok());
        assert_eq!(s.progress(-0.1), Err(Error::OutOfRange(-0.1)));
    }

    #[test]
    fn tabulated_interpolates_and_differentiates() {
        // p(s) = s^2 sampled on 11 nodes
        let times: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
        let progress: Vec<f64> = times.iter().map(|t| t * t).collect();
        let s = Schedule::tabulated(times, progress).unwrap();
        assert_eq!(s.kind(), ScheduleKind::Tabulated);
        assert!((s.g(0.5).unwrap() - 0.25).abs() < 1e-15);
        assert!((s.g(0.55).unwrap() - 0.3025).abs() < 5e-3);
        // at an interior node the derivative is the central difference of
        // the interpolant
        let (df, dg) = s.derivatives(0.5).unwrap();
        let want = (s.g(0.5 + DIFF_STEP).unwrap() - s.g(0.5 - DIFF_STEP).unwrap())
            / (2.0 * DIFF_STEP);
        assert_eq!(dg, want);
        assert_eq!(df, -want);
        assert!((dg - 1.0).abs() < 0.05);
        assert!(s.derivatives(0.0).unwrap().1.is_finite());
        assert!(s.derivatives(1.0).unwrap().1 > 1.0);
    }

    #[test]
    fn tabulated_rejects_bad_tables() {
        assert!(Schedule::tabulated(vec![0.0, 1.0], vec![0.0, 0.9]).is_err());
        assert!(Schedule::tabulated(vec![0.0, 0.5, 1.0], vec![0.0, 0.7, 0.6]).is_err());
        assert!(Schedule::tabulated(vec![0.0, 0.5, 0.5, 1.0], vec![0.0, 0.2, 0.3, 1.0]).is_err());
        assert!(Schedule::tabulated(vec![0.1, 1.0], vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn pchip_stays_monotone_on_steep_data() {
        let times = vec![0.0, 0.01, 0.02, 0.5, 0.98, 0.99, 1.0];
        let progress = vec![0.0, 0.4, 0.45, 0.5, 0.55, 0.6, 1.0];
        let s = Schedule::tabulated(times, progress).unwrap();
        assert!(s.validate().is_ok());
    }
}
