//! Small-dimension complex linear algebra and the information quantities
//! built on it: root fidelity, von Neumann entropy, symmetric Holevo information.
//!
//! All logarithms are base 2.

mod eig;
mod info;
mod matrix;

pub use eig::{herm_eig, herm_eig_tol, singular_values, trace_norm, HermEig};
pub use info::{
    binary_entropy, min_eigenvalue, root_fidelity, symmetric_holevo, von_neumann_entropy, CqChannel, DensityMatrix,
    SPECTRAL_ZERO,
};
pub use matrix::{partial_trace, reduce_pure, tensor_product, tensor_vec, ComplexMatrix, C64};

/// Default tolerance for Hermiticity, positivity and trace checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
