//! Dense complex linear algebra: states, Hermitian operators, density
//! matrices, the eigensolver and partial traces.

mod density;
mod eigen;
mod operator;
mod state;

pub use density::{partial_trace, DensityMatrix};
pub use eigen::{fix_gauge, hermitian_eig, EigenDecomposition, HermitianSpectrum};
pub use operator::{expectation, projector, HermitianOp};
pub use state::{tensor_product, QState};
pub(crate) use state::{dim_for, inner, norm_sqr};
