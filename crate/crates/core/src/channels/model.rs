use crate::error::{Error, Result};
use crate::quantum::{partial_trace, ComplexMatrix, DensityMatrix, C64};

const TABLE_TOLERANCE: f64 = 1e-12;
const ISOMETRY_TOLERANCE: f64 = 1e-10;

/// Classical wiretap channel `p(y, z | x)` with binary input.
///
/// `table[x][y * z_size + z]` holds `p(y, z | x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalWiretapChannel {
    y_size: usize,
    z_size: usize,
    table: [Vec<f64>; 2],
}

impl ClassicalWiretapChannel {
    pub fn new(y_size: usize, z_size: usize, table: [Vec<f64>; 2]) -> Result<Self> {
        if y_size == 0 || z_size == 0 {
            return Err(Error::InvalidTable("alphabet sizes must be positive".into()));
        }
        for (x, row) in table.iter().enumerate() {
            if row.len() != y_size * z_size {
                return Err(Error::InvalidTable(format!(
                    "row {x} has {} entries, expected {}",
                    row.len(),
                    y_size * z_size
                )));
            }
            if let Some(p) = row.iter().find(|p| p.is_nan() || **p < 0.0) {
                return Err(Error::InvalidTable(format!("row {x} has entry {p}")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > TABLE_TOLERANCE {
                return Err(Error::InvalidTable(format!("row {x} sums to {sum}")));
            }
        }
        Ok(Self { y_size, z_size, table })
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    pub fn z_size(&self) -> usize {
        self.z_size
    }

    pub fn prob(&self, y: usize, z: usize, x: usize) -> f64 {
        self.table[x][y * self.z_size + z]
    }

    /// Bob's marginal `p(y|x)`.
    pub fn bob_marginal(&self, x: usize) -> Vec<f64> {
        (0..self.y_size)
            .map(|y| (0..self.z_size).map(|z| self.prob(y, z, x)).sum())
            .collect()
    }

    /// Eve's marginal `p(z|x)`.
    pub fn eve_marginal(&self, x: usize) -> Vec<f64> {
        (0..self.z_size)
            .map(|z| (0..self.y_size).map(|y| self.prob(y, z, x)).sum())
            .collect()
    }

    /// Largest deviation `|p(y,z|x) - p(y|x) p(z|x)|`.
    pub fn factorization_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for x in 0..2 {
            let (py, pz) = (self.bob_marginal(x), self.eve_marginal(x));
            for (y, &p_y) in py.iter().enumerate() {
                for (z, &p_z) in pz.iter().enumerate() {
                    worst = worst.max((self.prob(y, z, x) - p_y * p_z).abs());
                }
            }
        }
        worst
    }
}

fn check_probability(name: &'static str, value: f64, hi: f64, range: &'static str) -> Result<()> {
    if !(0.0..=hi).contains(&value) {
        return Err(Error::ParameterOutOfRange { name, value, range });
    }
    Ok(())
}

/// Independent binary symmetric channels to Bob and Eve.
pub fn make_bsc_wiretap(p_b: f64, p_e: f64) -> Result<ClassicalWiretapChannel> {
    check_probability("p_b", p_b, 0.5, "[0, 1/2]")?;
    check_probability("p_e", p_e, 0.5, "[0, 1/2]")?;
    let flip = |p: f64, a: usize, b: usize| if a == b { 1.0 - p } else { p };
    let table = [0usize, 1].map(|x| {
        let mut row = Vec::with_capacity(4);
        for y in 0..2 {
            for z in 0..2 {
                row.push(flip(p_b, x, y) * flip(p_e, x, z));
            }
        }
        row
    });
    ClassicalWiretapChannel::new(2, 2, table)
}

/// Isometric extension `A' -> B ⊗ E ⊗ S2` of a qubit-input wiretap channel.
///
/// Output factors are ordered B, E, S2 with S2 least significant.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumWiretapChannel {
    b_dim: usize,
    e_dim: usize,
    s2_dim: usize,
    /// `columns[x] = U|x>`.
    columns: [Vec<C64>; 2],
}

impl QuantumWiretapChannel {
    pub fn new(b_dim: usize, e_dim: usize, s2_dim: usize, columns: [Vec<C64>; 2]) -> Result<Self> {
        let out = b_dim * e_dim * s2_dim;
        for col in &columns {
            if col.len() != out {
                return Err(Error::DimensionMismatch {
                    expected: out,
                    actual: col.len(),
                });
            }
        }
        let w = Self {
            b_dim,
            e_dim,
            s2_dim,
            columns,
        };
        let defect = w.isometry_defect();
        if defect > ISOMETRY_TOLERANCE {
            return Err(Error::NotIsometry(defect));
        }
        Ok(w)
    }

    /// Builds the isometry `|psi> -> sum_k K_k |psi> ⊗ |k>_E` from Kraus operators acting
    /// qubit -> B. Each Kraus operator is `b_dim x 2`, row-major.
    pub fn from_kraus(b_dim: usize, kraus: &[Vec<C64>]) -> Result<Self> {
        let e_dim = kraus.len();
        let mut columns = [
            vec![C64::new(0.0, 0.0); b_dim * e_dim],
            vec![C64::new(0.0, 0.0); b_dim * e_dim],
        ];
        for (k, op) in kraus.iter().enumerate() {
            if op.len() != 2 * b_dim {
                return Err(Error::DimensionMismatch {
                    expected: 2 * b_dim,
                    actual: op.len(),
                });
            }
            for (x, col) in columns.iter_mut().enumerate() {
                for b in 0..b_dim {
                    col[b * e_dim + k] = op[b * 2 + x];
                }
            }
        }
        Self::new(b_dim, e_dim, 1, columns)
    }

    pub fn b_dim(&self) -> usize {
        self.b_dim
    }

    pub fn e_dim(&self) -> usize {
        self.e_dim
    }

    pub fn s2_dim(&self) -> usize {
        self.s2_dim
    }

    pub fn output_dim(&self) -> usize {
        self.b_dim * self.e_dim * self.s2_dim
    }

    pub fn column(&self, x: usize) -> &[C64] {
        &self.columns[x]
    }

    /// `max |U^dagger U - I|`.
    pub fn isometry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..2 {
            for b in 0..2 {
                let ip: C64 = self.columns[a]
                    .iter()
                    .zip(&self.columns[b])
                    .map(|(u, v)| u.conj() * v)
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).norm());
            }
        }
        worst
    }

    /// `U psi` for a qubit vector.
    pub fn apply(&self, psi: [C64; 2]) -> Vec<C64> {
        self.columns[0]
            .iter()
            .zip(&self.columns[1])
            .map(|(u0, u1)| u0 * psi[0] + u1 * psi[1])
            .collect()
    }

    /// `U rho U^dagger` on B ⊗ E ⊗ S2.
    pub fn joint_output(&self, rho: &DensityMatrix) -> Result<ComplexMatrix> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                actual: rho.dim(),
            });
        }
        let r = rho.matrix();
        Ok(ComplexMatrix::from_fn(self.output_dim(), |i, j| {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..2 {
                for b in 0..2 {
                    acc += r[(a, b)] * self.columns[a][i] * self.columns[b][j].conj();
                }
            }
            acc
        }))
    }

    fn factor_dims(&self) -> [usize; 3] {
        [self.b_dim, self.e_dim, self.s2_dim]
    }

    /// Channel to Bob, `Tr_{E S2} U rho U^dagger`.
    pub fn bob_output(&self, rho: &DensityMatrix) -> Result<ComplexMatrix> {
        partial_trace(&self.joint_output(rho)?, &self.factor_dims(), &[0])
    }

    /// Channel to Eve, `Tr_{B S2} U rho U^dagger`.
    pub fn eve_output(&self, rho: &DensityMatrix) -> Result<ComplexMatrix> {
        partial_trace(&self.joint_output(rho)?, &self.factor_dims(), &[1])
    }

    /// Channel to B ⊗ E with the shield traced out.
    pub fn wiretap_output(&self, rho: &DensityMatrix) -> Result<ComplexMatrix> {
        partial_trace(&self.joint_output(rho)?, &self.factor_dims(), &[0, 1])
    }
}

/// Quantum form of a classical wiretap channel: measure the input, prepare
/// `|y>|z>` with probability `p(y,z|x)`, and record `|x,y,z>` in the shield S2.
pub fn embed_classical(c: &ClassicalWiretapChannel) -> Result<QuantumWiretapChannel> {
    let (ny, nz) = (c.y_size(), c.z_size());
    let s2 = 2 * ny * nz;
    let out = ny * nz * s2;
    let columns = [0usize, 1].map(|x| {
        let mut col = vec![C64::new(0.0, 0.0); out];
        for y in 0..ny {
            for z in 0..nz {
                let shield = (x * ny + y) * nz + z;
                col[(y * nz + z) * s2 + shield] = C64::new(c.prob(y, z, x).sqrt(), 0.0);
            }
        }
        col
    });
    QuantumWiretapChannel::new(ny, nz, s2, columns)
}

/// Quantum erasure channel `rho -> (1-eps) rho + eps |e><e|` on a qubit plus
/// erasure flag (index 2). Eve receives the complementary erasure channel.
pub fn make_erasure_wiretap(eps: f64) -> Result<QuantumWiretapChannel> {
    check_probability("eps", eps, 1.0, "[0, 1]")?;
    const FLAG: usize = 2;
    let (keep, lose) = ((1.0 - eps).sqrt(), eps.sqrt());
    let columns = [0usize, 1].map(|x| {
        let mut col = vec![C64::new(0.0, 0.0); 9];
        col[x * 3 + FLAG] += keep;
        col[FLAG * 3 + x] += lose;
        col
    });
    QuantumWiretapChannel::new(3, 3, 1, columns)
}

/// Amplitude damping with transmissivity `eta`:
/// `A0 = sqrt(1-eta)|0><1|`, `A1 = |0><0| + sqrt(eta)|1><1|`.
pub fn make_amplitude_damping(eta: f64) -> Result<QuantumWiretapChannel> {
    check_probability("eta", eta, 1.0, "[0, 1]")?;
    let c = |x: f64| C64::new(x, 0.0);
    let a0 = vec![c(0.0), c((1.0 - eta).sqrt()), c(0.0), c(0.0)];
    let a1 = vec![c(1.0), c(0.0), c(0.0), c(eta.sqrt())];
    QuantumWiretapChannel::from_kraus(2, &[a0, a1])
}
