//! Two-qubit concurrence, reduced-state eigenvalues and entropy of
//! entanglement.
//!
//! Concurrence uses the convention `C = |c0 c3 - c1 c2|`, which peaks at
//! `1/2` for a Bell state; [`normalized_concurrence`] gives the usual `2C`.
//! Entropies are in bits.

use crate::error::{Error, Result};
use crate::evolution::EvolutionTrace;
use crate::linalg::{partial_trace, DensityMatrix, QState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementPoint {
    pub s: f64,
    pub concurrence: f64,
    pub entropy: f64,
    pub mu_plus: f64,
    pub mu_minus: f64,
}

fn require_two_qubits(state: &QState) -> Result<()> {
    if state.n_qubits() != 2 {
        return Err(Error::WrongSize(state.n_qubits()));
    }
    Ok(())
}

/// `|c0 c3 - c1 c2|`, in `[0, 1/2]`.
pub fn concurrence(state: &QState) -> Result<f64> {
    require_two_qubits(state)?;
    let c = state.amplitudes();
    Ok((c[0] * c[3] - c[1] * c[2]).norm())
}

/// `2 |c0 c3 - c1 c2|`, in `[0, 1]`.
pub fn normalized_concurrence(state: &QState) -> Result<f64> {
    Ok(2.0 * concurrence(state)?)
}

/// Eigenvalues `(mu_plus, mu_minus)` of either single-qubit reduced state,
/// `mu_pm = (1 +- sqrt(1 - 4 C^2)) / 2`.
pub fn reduced_eigenvalues(state: &QState) -> Result<(f64, f64)> {
    let c = concurrence(state)?;
    Ok(eigenvalues_from_concurrence(c))
}

/// `mu_minus` is taken as `C^2 / mu_plus` (their product is `C^2`), which
/// avoids cancellation for weakly entangled states.
pub fn eigenvalues_from_concurrence(c: f64) -> (f64, f64) {
    let disc = (1.0 - 4.0 * c * c).max(0.0).sqrt();
    let mu_plus = 0.5 * (1.0 + disc);
    (mu_plus, c * c / mu_plus)
}

/// `-sum lambda log2 lambda` over the positive entries.
pub fn von_neumann_entropy(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Entropy of a two-level spectrum `(1 - p, p)`, accurate for small `p`.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    let q = 1.0 - p;
    -p * p.log2() - q * (-p).ln_1p() / std::f64::consts::LN_2
}

/// Entropy of the reduced state on the qubits in `cut` (qubit 0 is the
/// most significant bit).
pub fn entropy_of_entanglement(state: &QState, cut: &[usize]) -> Result<f64> {
    let rho = DensityMatrix::from_pure(state);
    let reduced = partial_trace(&rho, state.n_qubits(), cut)?;
    Ok(von_neumann_entropy(&reduced.eigenvalues()?))
}

/// Two-qubit entanglement at every sample of `evolution`.
pub fn entanglement_trace(evolution: &EvolutionTrace) -> Result<Vec<EntanglementPoint>> {
    evolution
        .samples
        .iter()
        .map(|p| {
            let concurrence = concurrence(&p.state)?;
            let (mu_plus, mu_minus) = eigenvalues_from_concurrence(concurrence);
            Ok(EntanglementPoint {
                s: p.s,
                concurrence,
                entropy: binary_entropy(mu_minus),
                mu_plus,
                mu_minus,
            })
        })
        .collect()
}

/// `(s, entropy)` of the reduced state on `cut` at every sample.
pub fn entropy_trace(evolution: &EvolutionTrace, cut: &[usize]) -> Result<Vec<(f64, f64)>> {
    evolution
        .samples
        .iter()
        .map(|p| Ok((p.s, entropy_of_entanglement(&p.state, cut)?)))
        .collect()
}
