use num_complex::Complex64;

use super::eigen::HermitianSpectrum;
use super::operator::{check_hermitian, HermitianOp};
use super::state::QState;
use crate::error::{Error, Result};

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub const TOL: f64 = 1e-12;

    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        check_hermitian(dim, &entries)?;
        let rho = Self { dim, entries };
        let tr = rho.trace();
        if (tr - 1.0).abs() > Self::TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let min = rho.eigenvalues()?.first().copied().unwrap_or(0.0);
        if min < -Self::TOL {
            return Err(Error::InvalidDensity(format!("eigenvalue {min}")));
        }
        Ok(rho)
    }

    /// `|psi><psi|`.
    pub fn from_pure(psi: &QState) -> Self {
        let op = super::operator::projector(psi);
        Self {
            dim: op.dim(),
            entries: op.entries().to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn as_operator(&self) -> HermitianOp {
        HermitianOp::from_raw(self.dim, self.entries.clone())
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(HermitianSpectrum::compute(&self.as_operator())?
            .values()
            .to_vec())
    }
}

/// Reduced density matrix on the qubits in `keep` (qubit 0 is the most
/// significant bit). The kept qubits retain their relative order.
pub fn partial_trace(rho: &DensityMatrix, n: usize, keep: &[usize]) -> Result<DensityMatrix> {
    if rho.dim() != 1usize << n {
        return Err(Error::DimMismatch {
            expected: 1 << n,
            found: rho.dim(),
        });
    }
    let traced = complement(n, keep)?;
    let dk = 1usize << keep.len();
    let dt = 1usize << traced.len();

    // full[a][t]: index of the basis state with kept bits `a`, traced bits `t`
    let full: Vec<Vec<usize>> = (0..dk)
        .map(|a| {
            (0..dt)
                .map(|t| scatter(a, keep, n) | scatter(t, &traced, n))
                .collect()
        })
        .collect();

    let mut entries = vec![Complex64::new(0.0, 0.0); dk * dk];
    for a in 0..dk {
        for b in 0..dk {
            entries[a * dk + b] = full[a]
                .iter()
                .zip(&full[b])
                .map(|(&i, &j)| rho.get(i, j))
                .sum();
        }
    }
    Ok(DensityMatrix {
        dim: dk,
        entries,
    })
}

/// Qubits not in `keep`, ascending. Errors when `keep` is empty, covers all
/// qubits, repeats an index, or names a qubit `>= n`.
pub(crate) fn complement(n: usize, keep: &[usize]) -> Result<Vec<usize>> {
    let bad = || Error::BadSubset {
        keep: keep.to_vec(),
        n,
    };
    if keep.is_empty() || keep.len() >= n {
        return Err(bad());
    }
    let mut seen = vec![false; n];
    for &q in keep {
        if q >= n || seen[q] {
            return Err(bad());
        }
        seen[q] = true;
    }
    Ok((0..n).filter(|&q| !seen[q]).collect())
}

/// Places bit `i` of `value` (most significant first, over `qubits.len()`
/// bits) at the index position of `qubits[i]`.
fn scatter(value: usize, qubits: &[usize], n: usize) -> usize {
    let w = qubits.len();
    qubits.iter().enumerate().fold(0, |acc, (i, &q)| {
        let bit = (value >> (w - 1 - i)) & 1;
        acc | (bit << (n - 1 - q))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::state::tensor_product;

    #[test]
    fn bell_reduces_to_half_identity() {
        let rho = DensityMatrix::from_pure(&QState::bell());
        let ra = partial_trace(&rho, 2, &[0]).unwrap();
        assert!((ra.get(0, 0) - 0.5).norm() < 1e-15);
        assert!((ra.get(1, 1) - 0.5).norm() < 1e-15);
        assert!(ra.get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn product_state_reduces_to_factor() {
        // |01>: qubit A in |0>, qubit B in |1>
        let rho = DensityMatrix::from_pure(&QState::basis(2, 1).unwrap());
        let ra = partial_trace(&rho, 2, &[0]).unwrap();
        assert_eq!(ra.get(0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(ra.get(1, 1), Complex64::new(0.0, 0.0));
        let rb = partial_trace(&rho, 2, &[1]).unwrap();
        assert_eq!(rb.get(1, 1), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn keeps_requested_order_in_three_qubits() {
        // |0> ⊗ |1> ⊗ |+>
        let zero = QState::basis(1, 0).unwrap();
        let one = QState::basis(1, 1).unwrap();
        let plus = QState::uniform(1).unwrap();
        let psi = tensor_product(&tensor_product(&zero, &one), &plus);
        let rho = DensityMatrix::from_pure(&psi);
        let r = partial_trace(&rho, 3, &[1]).unwrap();
        assert!((r.get(1, 1) - 1.0).norm() < 1e-15);
        let r = partial_trace(&rho, 3, &[0, 2]).unwrap();
        // |0>|+> on (A, C)
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert!((r.get(i, j) - 0.5).norm() < 1e-15);
        }
        assert!(r.get(2, 2).norm() < 1e-15);
    }

    #[test]
    fn bad_subsets() {
        let rho = DensityMatrix::from_pure(&QState::bell());
        for keep in [&[][..], &[0, 1], &[2], &[0, 0]] {
            assert!(matches!(
                partial_trace(&rho, 2, keep),
                Err(Error::BadSubset { .. })
            ));
        }
    }

    #[test]
    fn validates_density_matrices() {
        let half = Complex64::new(0.5, 0.0);
        let z = Complex64::new(0.0, 0.0);
        assert!(DensityMatrix::new(2, vec![half, z, z, half]).is_ok());
        assert!(DensityMatrix::new(2, vec![half, z, z, half * 3.0]).is_err());
        // trace one but an eigenvalue of -0.5
        let one = Complex64::new(1.0, 0.0);
        assert!(DensityMatrix::new(2, vec![half, one, one, half]).is_err());
    }
}
