//! Discrete Grover iteration.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::SearchProblem;
use crate::linalg::QState;

#[derive(Debug, Clone, PartialEq)]
pub struct GroverRun {
    pub n_items: usize,
    pub marked: usize,
    /// `(k, |<m|psi_k>|^2)` for `k = 0..=k_max`.
    pub iterations: Vec<(usize, f64)>,
}

impl GroverRun {
    pub fn probability(&self, k: usize) -> Option<f64> {
        self.iterations.get(k).map(|&(_, p)| p)
    }
}

/// `k0 = floor(pi/4 sqrt(N))`.
///
/// Rounding to nearest instead overshoots the rotation for `N = 4` (where it
/// gives `P = 1/4`) and falls below `1 - 1/N` for `N = 128, 256, 512`.
pub fn optimal_iterations(n_items: usize) -> usize {
    (FRAC_PI_4 * (n_items as f64).sqrt()).floor() as usize
}

/// `(2|u><u| - I)(I - 2|m><m|) |psi>` with `|u>` the uniform superposition.
///
/// The diffusion axis is always the uniform state, whatever initial state
/// `problem` carries.
pub fn grover_step(state: &QState, problem: &SearchProblem) -> Result<QState> {
    if state.dim() != problem.dim() {
        return Err(Error::DimMismatch {
            expected: problem.dim(),
            found: state.dim(),
        });
    }
    let mut amps = state.amplitudes().to_vec();
    amps[problem.marked()] = -amps[problem.marked()];
    reflect_about_uniform(&mut amps);
    Ok(QState::from_raw(amps))
}

fn reflect_about_uniform(amps: &mut [Complex64]) {
    let mean = amps.iter().sum::<Complex64>() / amps.len() as f64;
    for a in amps.iter_mut() {
        *a = mean * 2.0 - *a;
    }
}

/// Success probability after each of `k_max` iterations from the uniform
/// state, starting with `k = 0`.
pub fn grover_search(problem: &SearchProblem, k_max: usize) -> Result<GroverRun> {
    if k_max < 1 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    let marked = problem.marked();
    let mut psi = QState::uniform(problem.n_qubits())?;
    let mut iterations = Vec::with_capacity(k_max + 1);
    iterations.push((0, psi.probability(marked)));
    for k in 1..=k_max {
        psi = grover_step(&psi, problem)?;
        iterations.push((k, psi.probability(marked)));
    }
    Ok(GroverRun {
        n_items: problem.dim(),
        marked,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{projector, HermitianOp};

    fn dense_grover(problem: &SearchProblem) -> Vec<Complex64> {
        let dim = problem.dim();
        let u = QState::uniform(problem.n_qubits()).unwrap();
        let id = HermitianOp::identity(dim);
        let diffusion =
            HermitianOp::linear_combination(&[(2.0, &projector(&u)), (-1.0, &id)]).unwrap();
        let oracle = HermitianOp::linear_combination(&[
            (1.0, &id),
            (-2.0, &projector(&problem.marked_state())),
        ])
        .unwrap();
        let mut g = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                g[i * dim + j] = (0..dim).map(|k| diffusion.get(i, k) * oracle.get(k, j)).sum();
            }
        }
        g
    }

    #[test]
    fn four_items_one_step_finds_marked() {
        for m in 0..4 {
            let p = SearchProblem::uniform(2, m).unwrap();
            let run = grover_search(&p, 1).unwrap();
            assert!((run.probability(0).unwrap() - 0.25).abs() < 1e-15);
            assert!((run.probability(1).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn step_matches_dense_operator() {
        let p = SearchProblem::uniform(4, 11).unwrap();
        let g = dense_grover(&p);
        let dim = p.dim();
        let inputs = [
            p.marked_state(),
            QState::uniform(4).unwrap(),
            QState::normalized(
                (0..dim)
                    .map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.3).cos()))
                    .collect(),
            )
            .unwrap(),
        ];
        for psi in &inputs {
            let fast = grover_step(psi, &p).unwrap();
            for i in 0..dim {
                let want: Complex64 = (0..dim).map(|j| g[i * dim + j] * psi.amplitude(j)).sum();
                assert!((fast.amplitude(i) - want).norm() < 1e-12);
            }
            assert!((fast.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn oracle_reflection_is_an_involution() {
        let p = SearchProblem::uniform(3, 2).unwrap();
        let psi = QState::uniform(3).unwrap();
        let mut amps = psi.amplitudes().to_vec();
        amps[2] = -amps[2];
        amps[2] = -amps[2];
        assert_eq!(amps, psi.amplitudes());
        let mut twice = psi.amplitudes().to_vec();
        reflect_about_uniform(&mut twice);
        reflect_about_uniform(&mut twice);
        for (a, b) in twice.iter().zip(psi.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!(grover_step(&QState::uniform(2).unwrap(), &p).is_err());
    }

    #[test]
    fn probabilities_follow_rotation_angle() {
        for n in 2..=10 {
            let p = SearchProblem::uniform(n, 1).unwrap();
            let big_n = p.dim() as f64;
            let theta = (1.0 / big_n.sqrt()).asin();
            let k0 = optimal_iterations(p.dim());
            let run = grover_search(&p, 2 * k0 + 3).unwrap();
            for &(k, prob) in &run.iterations {
                let want = ((2 * k + 1) as f64 * theta).sin().powi(2);
                assert!((prob - want).abs() < 1e-9);
            }
            assert!(run.probability(k0).unwrap() >= 1.0 - 1.0 / big_n);
        }
    }

    #[test]
    fn optimal_iteration_counts() {
        assert_eq!(optimal_iterations(4), 1);
        assert_eq!(optimal_iterations(16), 3);
        assert_eq!(optimal_iterations(128), 8);
        assert_eq!(optimal_iterations(1024), 25);
        assert!(grover_search(&SearchProblem::uniform(2, 0).unwrap(), 0).is_err());
    }
}
