//! Density matrices, binary-input cq channels and the two channel
//! parameters used throughout: root fidelity and symmetric Holevo information.

use super::eig::{herm_eig, herm_eig_tol, trace_norm};
use super::matrix::{ComplexMatrix, C64};
use super::DEFAULT_TOLERANCE;
use crate::error::{Error, Result};

/// Eigenvalues below this are treated as exact zeros before square roots.
///
/// Jacobi leaves null eigenvalues at O(1e-17); their square roots would add
/// O(1e-9) per null direction to a trace norm.
pub const SPECTRAL_ZERO: f64 = 1e-13;

/// A validated quantum state: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    tolerance: f64,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tolerance: f64) -> Result<Self> {
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tolerance || tr.im.abs() > tolerance {
            return Err(Error::TraceNotOne(tr.re));
        }
        let eig = herm_eig_tol(&matrix, tolerance)?;
        let min = eig.values.first().copied().unwrap_or(0.0);
        if min < -tolerance {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { matrix, tolerance })
    }

    /// `|psi><psi|` after normalizing `psi`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::TraceNotOne(0.0));
        }
        let unit: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&unit))
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::diag(probs))
    }

    /// Computational basis state `|k><k|` of dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim);
        m[(k, k)] = C64::new(1.0, 0.0);
        Self {
            matrix: m,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Eigenvalues with rounding noise in `[-tolerance, 0)` clamped to zero.
    pub fn spectrum(&self) -> Vec<f64> {
        herm_eig_tol(&self.matrix, self.tolerance)
            .expect("validated at construction")
            .values
            .into_iter()
            .map(|x| x.max(0.0))
            .collect()
    }

    /// Principal square root, with eigenvalues under [`SPECTRAL_ZERO`] dropped.
    pub fn sqrt(&self) -> ComplexMatrix {
        herm_eig_tol(&self.matrix, self.tolerance)
            .expect("validated at construction")
            .map_values(|x| if x > SPECTRAL_ZERO { x.sqrt() } else { 0.0 })
    }

    /// Equal-weight mixture `(self + other) / 2`.
    pub fn average(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Ok(Self {
            matrix: (&self.matrix + &other.matrix).scale(0.5),
            tolerance: self.tolerance.max(other.tolerance),
        })
    }

    /// Conjugation `U rho U^dagger` by a unitary.
    pub fn conjugate(&self, unitary: &ComplexMatrix) -> Result<Self> {
        if unitary.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: unitary.dim(),
            });
        }
        Self::with_tolerance(&(unitary * &self.matrix) * &unitary.adjoint(), self.tolerance)
    }
}

fn check_dims(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    Ok(())
}

/// Binary-input classical-quantum channel `x -> rho_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct CqChannel {
    rho0: DensityMatrix,
    rho1: DensityMatrix,
}

impl CqChannel {
    pub fn new(rho0: DensityMatrix, rho1: DensityMatrix) -> Result<Self> {
        check_dims(&rho0, &rho1)?;
        Ok(Self { rho0, rho1 })
    }

    /// Classical channel with output distributions `p(.|0)` and `p(.|1)`.
    pub fn classical(p0: &[f64], p1: &[f64]) -> Result<Self> {
        Self::new(DensityMatrix::diagonal(p0)?, DensityMatrix::diagonal(p1)?)
    }

    pub fn rho0(&self) -> &DensityMatrix {
        &self.rho0
    }

    pub fn rho1(&self) -> &DensityMatrix {
        &self.rho1
    }

    pub fn output(&self, x: u8) -> &DensityMatrix {
        if x == 0 {
            &self.rho0
        } else {
            &self.rho1
        }
    }

    pub fn dim(&self) -> usize {
        self.rho0.dim()
    }

    /// `sqrt(F(W))`.
    pub fn root_fidelity(&self) -> f64 {
        root_fidelity(&self.rho0, &self.rho1).expect("dims checked at construction")
    }

    /// `I(W)` in bits.
    pub fn symmetric_holevo(&self) -> f64 {
        symmetric_holevo(self)
    }
}

/// `||sqrt(rho) sqrt(sigma)||_1`, clamped to `[0, 1]`.
pub fn root_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    let product = &rho.sqrt() * &sigma.sqrt();
    Ok(trace_norm(&product).clamp(0.0, 1.0))
}

/// `-Tr rho log2 rho`, with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.spectrum())
}

pub(crate) fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// `H((rho0 + rho1)/2) - (H(rho0) + H(rho1))/2`, clamped to `[0, 1]`.
pub fn symmetric_holevo(w: &CqChannel) -> f64 {
    let avg = w.rho0.average(&w.rho1).expect("dims checked at construction");
    let value = von_neumann_entropy(&avg) - 0.5 * (von_neumann_entropy(&w.rho0) + von_neumann_entropy(&w.rho1));
    value.clamp(0.0, 1.0)
}

/// Binary entropy `h2(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_of_spectrum(&[p, 1.0 - p])
}

/// Smallest eigenvalue of a Hermitian matrix, for diagnostics.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(herm_eig(m)?.values.first().copied().unwrap_or(0.0))
}
