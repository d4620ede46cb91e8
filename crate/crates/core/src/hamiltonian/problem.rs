use num_complex::Complex64;

use super::schedule::Schedule;
use crate::error::{Error, Result};
use crate::linalg::{dim_for, projector, HermitianOp, QState};

/// Smallest accepted `|<m|psi_0>|`.
const MIN_OVERLAP: f64 = 1e-12;

/// Unstructured search over `N = 2^n` items with one marked item.
///
/// Holds the haystack Hamiltonian `H0 = I - |psi_0><psi_0|` and the oracle
/// Hamiltonian `H1 = I - |m><m|`.
#[derive(Debug, Clone)]
pub struct SearchProblem {
    n: usize,
    marked: usize,
    initial: QState,
    h0: HermitianOp,
    h1: HermitianOp,
}

impl SearchProblem {
    pub fn new(n: usize, marked: usize, initial: QState) -> Result<Self> {
        let dim = dim_for(n)?;
        if marked >= dim {
            return Err(Error::MarkedOutOfRange { marked, n });
        }
        if initial.dim() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                found: initial.dim(),
            });
        }
        if initial.amplitude(marked).norm() <= MIN_OVERLAP {
            return Err(Error::ZeroOverlap);
        }
        let id = HermitianOp::identity(dim);
        let h0 = HermitianOp::linear_combination(&[(1.0, &id), (-1.0, &projector(&initial))])?;
        let mut h1_diag = vec![1.0; dim];
        h1_diag[marked] = 0.0;
        let h1 = HermitianOp::diagonal(&h1_diag);
        Ok(Self {
            n,
            marked,
            initial,
            h0,
            h1,
        })
    }

    /// Search starting from the uniform superposition.
    pub fn uniform(n: usize, marked: usize) -> Result<Self> {
        Self::new(n, marked, QState::uniform(n)?)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn marked(&self) -> usize {
        self.marked
    }

    pub fn initial(&self) -> &QState {
        &self.initial
    }

    pub fn marked_state(&self) -> QState {
        QState::basis(self.n, self.marked).expect("marked index validated at construction")
    }

    /// `|<m|psi_0>|`.
    pub fn overlap(&self) -> f64 {
        self.initial.amplitude(self.marked).norm()
    }

    /// `H0 = I - |psi_0><psi_0|`.
    pub fn build_h0(&self) -> HermitianOp {
        self.h0.clone()
    }

    /// `H1 = I - |m><m|`.
    pub fn build_h1(&self) -> HermitianOp {
        self.h1.clone()
    }

    pub fn h0(&self) -> &HermitianOp {
        &self.h0
    }

    pub fn h1(&self) -> &HermitianOp {
        &self.h1
    }

    /// `H(s) = f(s) H0 + g(s) H1`.
    pub fn hamiltonian_at(&self, schedule: &Schedule, s: f64) -> Result<HermitianOp> {
        let (f, g) = schedule.coefficients(s)?;
        Ok(self.combine(f, g))
    }

    /// `dH/ds = f'(s) H0 + g'(s) H1`.
    pub fn dh_ds(&self, schedule: &Schedule, s: f64) -> Result<HermitianOp> {
        let (df, dg) = schedule.derivatives(s)?;
        Ok(self.combine(df, dg))
    }

    /// `dH/ds |v>` without forming the dense derivative.
    pub fn apply_dh_ds(&self, schedule: &Schedule, s: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let (df, dg) = schedule.derivatives(s)?;
        let mut w = self.h0.apply(v)?;
        for (i, (wi, vi)) in w.iter_mut().zip(v).enumerate() {
            *wi = *wi * df + vi * (self.h1.get(i, i).re * dg);
        }
        Ok(w)
    }

    pub(crate) fn combine(&self, a: f64, b: f64) -> HermitianOp {
        let dim = self.dim();
        let mut entries: Vec<Complex64> = self.h0.entries().iter().map(|h| h * a).collect();
        for i in 0..dim {
            entries[i * dim + i] += self.h1.get(i, i) * b;
        }
        HermitianOp::from_raw(dim, entries)
    }
}
