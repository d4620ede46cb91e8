use num_complex::Complex64;

use super::state::QState;
use crate::error::{Error, Result};

/// Dense Hermitian matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOp {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianOp {
    /// Entrywise tolerance on `H - H^dagger`.
    pub const SYMMETRY_TOL: f64 = 1e-12;

    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        check_hermitian(dim, &entries)?;
        Ok(Self { dim, entries })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self::new(dim, entries)
    }

    pub(crate) fn from_raw(dim: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * dim + i] = Complex64::new(d, 0.0);
        }
        Self { dim, entries }
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

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    /// `sum_k w_k A_k`; all terms must share one dimension.
    pub fn linear_combination(terms: &[(f64, &HermitianOp)]) -> Result<Self> {
        let Some(&(_, first)) = terms.first() else {
            return Err(Error::InvalidParameter("empty linear combination".into()));
        };
        let dim = first.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for &(w, op) in terms {
            if op.dim != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    found: op.dim,
                });
            }
            if w == 0.0 {
                continue;
            }
            for (e, a) in entries.iter_mut().zip(&op.entries) {
                *e += a * w;
            }
        }
        Ok(Self { dim, entries })
    }

    /// Matrix-vector product `H v`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(self
            .entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    /// True when every entry has an exactly zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|c| c.im == 0.0)
    }
}

pub(crate) fn check_hermitian(dim: usize, entries: &[Complex64]) -> Result<()> {
    for i in 0..dim {
        for j in i..dim {
            let deviation = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
            if !(deviation <= HermitianOp::SYMMETRY_TOL) {
                return Err(Error::NonHermitian {
                    row: i,
                    col: j,
                    deviation,
                });
            }
        }
    }
    Ok(())
}

/// Rank-one projector `|psi><psi|`.
pub fn projector(psi: &QState) -> HermitianOp {
    let a = psi.amplitudes();
    let dim = a.len();
    let mut entries = Vec::with_capacity(dim * dim);
    for ai in a {
        entries.extend(a.iter().map(|aj| ai * aj.conj()));
    }
    HermitianOp::from_raw(dim, entries)
}

/// `<psi|H|psi>`, discarding the round-off imaginary part.
pub fn expectation(h: &HermitianOp, psi: &QState) -> Result<f64> {
    let hv = h.apply(psi.amplitudes())?;
    Ok(super::state::inner(psi.amplitudes(), &hv).re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projector_of_basis_state() {
        let p = projector(&QState::basis(2, 0).unwrap());
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == 0 && j == 0 { 1.0 } else { 0.0 };
                assert_eq!(p.get(i, j), Complex64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn projector_of_uniform_is_quarter_everywhere() {
        let p = projector(&QState::uniform(2).unwrap());
        assert!(p.entries().iter().all(|c| (c - 0.25).norm() < 1e-15));
    }

    #[test]
    fn projector_of_bell() {
        let p = projector(&QState::bell());
        for i in 0..4 {
            for j in 0..4 {
                let corner = (i == 0 || i == 3) && (j == 0 || j == 3);
                let want = if corner { 0.5 } else { 0.0 };
                assert!((p.get(i, j) - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let e = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(1.0, 0.0),
        ];
        assert!(matches!(
            HermitianOp::new(2, e),
            Err(Error::NonHermitian { row: 0, col: 1, .. })
        ));
    }

    #[test]
    fn expectation_values() {
        let n = 2;
        let uniform = QState::uniform(n).unwrap();
        let m = QState::basis(n, 0).unwrap();
        let id = HermitianOp::identity(4);
        let h0 = HermitianOp::linear_combination(&[(1.0, &id), (-1.0, &projector(&uniform))])
            .unwrap();
        let h1 =
            HermitianOp::linear_combination(&[(1.0, &id), (-1.0, &projector(&m))]).unwrap();
        assert!(expectation(&h1, &m).unwrap().abs() < 1e-15);
        assert!(expectation(&h0, &uniform).unwrap().abs() < 1e-15);
        assert!((expectation(&h0, &m).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(
            expectation(&h0, &QState::uniform(3).unwrap()),
            Err(Error::DimMismatch {
                expected: 4,
                found: 8
            })
        );
    }
}
