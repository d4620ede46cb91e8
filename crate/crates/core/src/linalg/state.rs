use num_complex::Complex64;

use crate::error::{Error, Result};

/// Pure state of `n` qubits in the computational basis.
///
/// Basis index `b` encodes `|b_{n-1} ... b_0>`; qubit 0 is the most
/// significant bit (qubit A for two qubits), qubit `n - 1` the least.
#[derive(Debug, Clone, PartialEq)]
pub struct QState {
    n: usize,
    amps: Vec<Complex64>,
}

impl QState {
    /// Tolerance on `|1 - sum |c_i|^2|` accepted by [`QState::new`].
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let n = qubits_for_len(amps.len())?;
        let norm_sqr = norm_sqr(&amps);
        if (norm_sqr - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self { n, amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let n = qubits_for_len(amps.len())?;
        let norm = norm_sqr(&amps).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        amps.iter_mut().for_each(|c| *c /= norm);
        Ok(Self { n, amps })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis state `|index>`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let dim = dim_for(n)?;
        if index >= dim {
            return Err(Error::DimMismatch {
                expected: dim,
                found: index,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Equal-weight superposition of all `2^n` basis states.
    pub fn uniform(n: usize) -> Result<Self> {
        let dim = dim_for(n)?;
        let c = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            n,
            amps: vec![c; dim],
        })
    }

    /// `(|00> + |11>) / sqrt(2)`.
    pub fn bell() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        Self {
            n: 2,
            amps: vec![Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)],
        }
    }

    /// Wraps amplitudes produced by norm-preserving kernels without the
    /// strict normalization check.
    pub(crate) fn from_raw(amps: Vec<Complex64>) -> Self {
        let n = amps.len().trailing_zeros() as usize;
        debug_assert_eq!(1usize << n, amps.len());
        Self { n, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amps).sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &QState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(inner(&self.amps, &other.amps))
    }

    /// Probability `|<index|self>|^2`.
    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }
}

/// `a ⊗ b`, with `a` on the more significant qubits.
pub fn tensor_product(a: &QState, b: &QState) -> QState {
    let amps = a
        .amps
        .iter()
        .flat_map(|&ai| b.amps.iter().map(move |&bj| ai * bj))
        .collect();
    QState {
        n: a.n + b.n,
        amps,
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

pub(crate) fn dim_for(n: usize) -> Result<usize> {
    if n == 0 || n > 30 {
        return Err(Error::InvalidParameter(format!(
            "qubit count must be in 1..=30, got {n}"
        )));
    }
    Ok(1usize << n)
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros() as usize)
}
