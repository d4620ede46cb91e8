//! Adiabatic ground-state tracking and full Schrödinger propagation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::{grid, SearchProblem, Schedule};
use crate::linalg::{inner, norm_sqr, HermitianSpectrum, QState};

/// Smallest step count accepted by [`propagate`].
pub const MIN_STEPS: usize = 16;
/// Norm drift above which a propagation is rejected.
pub const MAX_NORM_DRIFT: f64 = 1e-6;
/// Upper bound on the number of recorded samples of a propagation.
pub const MAX_RECORDED_SAMPLES: usize = 1025;

#[derive(Debug, Clone)]
pub struct EvolutionSample {
    pub s: f64,
    pub state: QState,
    /// `|<E0;s|psi(s)>|^2`.
    pub fidelity_ground: f64,
    /// `|<m|psi(s)>|^2`.
    pub fidelity_marked: f64,
    /// `| ||psi(s)|| - 1 |`.
    pub norm_drift: f64,
}

#[derive(Debug, Clone)]
pub struct EvolutionTrace {
    pub samples: Vec<EvolutionSample>,
    /// Total evolution time; infinite for pure adiabatic tracking.
    pub total_time: f64,
}

impl EvolutionTrace {
    pub fn final_sample(&self) -> &EvolutionSample {
        self.samples.last().expect("traces hold at least one sample")
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.samples.iter().map(|p| p.norm_drift).fold(0.0, f64::max)
    }
}

/// `|<a|b>|^2`.
pub fn fidelity(a: &QState, b: &QState) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// Instantaneous ground state on `grid_points` uniform nodes.
///
/// Each eigenvector is gauge-fixed, then rephased so that its overlap with
/// the previous node is real and positive.
pub fn ground_state_trace(
    problem: &SearchProblem,
    schedule: &Schedule,
    grid_points: usize,
) -> Result<EvolutionTrace> {
    let marked = problem.marked();
    let mut samples: Vec<EvolutionSample> = Vec::with_capacity(grid_points);
    for s in grid(grid_points)? {
        let h = problem.hamiltonian_at(schedule, s)?;
        let mut v = HermitianSpectrum::compute(&h)?.eigenvector(0);
        if let Some(prev) = samples.last() {
            let overlap = inner(prev.state.amplitudes(), &v);
            if overlap.norm() > 0.0 {
                let phase = overlap.conj() / overlap.norm();
                v.iter_mut().for_each(|c| *c *= phase);
            }
        }
        let state = QState::from_raw(v);
        samples.push(EvolutionSample {
            s,
            fidelity_ground: 1.0,
            fidelity_marked: state.probability(marked),
            norm_drift: (state.norm() - 1.0).abs(),
            state,
        });
    }
    Ok(EvolutionTrace {
        samples,
        total_time: f64::INFINITY,
    })
}

/// `max(4096, ceil(64 T))`: keeps the step-doubling change of the final
/// state below `1e-6` for `T <= 1000`.
pub fn default_steps(total_time: f64) -> usize {
    4096usize.max((64.0 * total_time).ceil() as usize)
}

/// Integrates `i d|psi>/dt = H(t/T) |psi>` from `|psi_0>` over `[0, T]`.
///
/// Each of the `steps` intervals applies the exact unitary
/// `exp(-i H(s_mid) T ds)` of the midpoint Hamiltonian, built from its
/// eigendecomposition (second order in `ds`). Samples are recorded at evenly spaced steps (at most
/// [`MAX_RECORDED_SAMPLES`], always including both ends).
pub fn propagate(
    problem: &SearchProblem,
    schedule: &Schedule,
    total_time: f64,
    steps: usize,
) -> Result<EvolutionTrace> {
    if !(total_time > 0.0) || !total_time.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "total time must be positive and finite, got {total_time}"
        )));
    }
    if steps < MIN_STEPS {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_STEPS} steps, got {steps}"
        )));
    }
    let stride = steps.div_ceil(MAX_RECORDED_SAMPLES - 1);
    let ds = 1.0 / steps as f64;
    let dt = total_time * ds;

    let mut psi = problem.initial().amplitudes().to_vec();
    let mut samples = vec![sample(problem, schedule, 0.0, &psi)?];
    let mut max_drift: f64 = 0.0;
    for k in 0..steps {
        let s_mid = (k as f64 + 0.5) * ds;
        let spectrum = HermitianSpectrum::compute(&problem.hamiltonian_at(schedule, s_mid)?)?;
        psi = spectrum.evolve(dt, &psi);
        max_drift = max_drift.max((norm_sqr(&psi).sqrt() - 1.0).abs());
        if (k + 1) % stride == 0 || k + 1 == steps {
            let s = if k + 1 == steps { 1.0 } else { (k + 1) as f64 * ds };
            samples.push(sample(problem, schedule, s, &psi)?);
        }
    }
    if max_drift > MAX_NORM_DRIFT {
        return Err(Error::StepTooCoarse(max_drift));
    }
    Ok(EvolutionTrace {
        samples,
        total_time,
    })
}

fn sample(
    problem: &SearchProblem,
    schedule: &Schedule,
    s: f64,
    psi: &[Complex64],
) -> Result<EvolutionSample> {
    let h = problem.hamiltonian_at(schedule, s)?;
    let ground = HermitianSpectrum::compute(&h)?.eigenvector(0);
    let state = QState::from_raw(psi.to_vec());
    Ok(EvolutionSample {
        s,
        fidelity_ground: inner(&ground, psi).norm_sqr(),
        fidelity_marked: state.probability(problem.marked()),
        norm_drift: (state.norm() - 1.0).abs(),
        state,
    })
}
