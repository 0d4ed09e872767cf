//! Cyclic Jacobi eigensolver for small Hermitian matrices and a one-sided
//! Jacobi SVD built on the same complex rotation.

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `m = V diag(values) V^dagger`, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub values: Vec<f64>,
    /// Eigenvectors as columns: `vectors[(r, k)]` is component `r` of eigenvector `k`.
    pub vectors: ComplexMatrix,
}

impl HermEig {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_values(|x| x)
    }

    /// `V f(diag) V^dagger`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, |r, c| {
            (0..n)
                .filter(|&k| fv[k] != 0.0)
                .map(|k| v[(r, k)] * v[(c, k)].conj() * fv[k])
                .sum()
        })
    }
}

/// Rotation zeroing the off-diagonal entry of the 2x2 Hermitian block
/// `[[app, apq], [conj(apq), aqq]]`. Returns `(c, s, phase)` with `phase = apq / |apq|`.
fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> (f64, f64, C64) {
    let mag = apq.norm();
    let phase = apq / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, phase)
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Fails with [`Error::NotHermitian`] if `max |m - m^dagger|` exceeds `tol`.
pub fn herm_eig_tol(m: &ComplexMatrix, tol: f64) -> Result<HermEig> {
    let defect = m.hermiticity_defect();
    if defect > tol {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.dim();
    // symmetrize so the rotations act on an exactly Hermitian matrix
    let mut a = ComplexMatrix::from_fn(n, |r, c| {
        if r == c {
            C64::new(m[(r, r)].re, 0.0)
        } else {
            (m[(r, c)] + m[(c, r)].conj()) * 0.5
        }
    });
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let skip = scale * 1e-18;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.norm() <= skip {
                    continue;
                }
                rotated = true;
                let (c, s, ph) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, apq);
                let phc = ph.conj();
                // A <- A J with J = [[c, s], [-s conj(ph), c conj(ph)]] on columns p, q
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * c - akq * phc * s;
                    a[(k, q)] = akp * s + akq * phc * c;
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * c - vkq * phc * s;
                    v[(k, q)] = vkp * s + vkq * phc * c;
                }
                // A <- J^dagger A on rows p, q
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = apk * c - aqk * ph * s;
                    a[(q, k)] = apk * s + aqk * ph * c;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, k| v[(r, order[k])]);
    Ok(HermEig { values, vectors })
}

/// [`herm_eig_tol`] with the default tolerance `1e-10`.
pub fn herm_eig(m: &ComplexMatrix) -> Result<HermEig> {
    herm_eig_tol(m, super::DEFAULT_TOLERANCE)
}

/// Singular values of a square matrix by one-sided (Hestenes) Jacobi.
///
/// Values are computed as column norms after orthogonalization, so small
/// singular values keep absolute accuracy near machine epsilon times the norm.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|c| (0..n).map(|r| m[(r, c)]).collect()).collect();
    let tiny = m.frobenius_norm() * 1e-300;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g <= tiny || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (c, s, ph) = jacobi_rotation(alpha, beta, gamma);
                let phc = ph.conj();
                let (left, right) = cols.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = xp * c - yq * phc * s;
                    *y = xp * s + yq * phc * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Schatten 1-norm.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).iter().sum()
}
