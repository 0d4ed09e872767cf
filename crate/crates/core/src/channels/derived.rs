//! The amplitude and phase cq channels induced by a wiretap channel, their
//! scalar metrics, and the key-rate condition evaluated on them.

use serde::Serialize;

use super::model::{ClassicalWiretapChannel, QuantumWiretapChannel};
use crate::error::{Error, Result};
use crate::quantum::{herm_eig_tol, reduce_pure, CqChannel, DensityMatrix, C64, SPECTRAL_ZERO};

/// The three binary-input cq channels used by the code construction.
#[derive(Debug, Clone)]
pub struct DerivedChannelSet {
    /// Amplitude channel to Bob, `z -> Tr_{E S1 S2} |psi_z><psi_z|`.
    pub w_ab: CqChannel,
    /// Amplitude channel to Eve; both shields are unavailable to her.
    pub w_ae: CqChannel,
    /// Phase channel to Bob on B ⊗ C ⊗ S1 ⊗ S2.
    pub w_pb: CqChannel,
}

/// Scalar summary of a [`DerivedChannelSet`]. Informations are in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelMetrics {
    #[serde(rename = "rootF_ab")]
    pub root_f_ab: f64,
    #[serde(rename = "rootF_ae")]
    pub root_f_ae: f64,
    #[serde(rename = "rootF_pb")]
    pub root_f_pb: f64,
    pub i_zb: f64,
    pub i_ze: f64,
    pub i_pb: f64,
}

impl ChannelMetrics {
    /// `I(W_PB) + I(W_AE) - 1`, zero up to rounding.
    pub fn uncertainty_residual(&self) -> f64 {
        self.i_pb + self.i_ze - 1.0
    }

    /// `sqrt F(W_AE) + 2 sqrt F(W_PB) - 1`, nonnegative up to rounding.
    pub fn fidelity_uncertainty_slack(&self) -> f64 {
        self.root_f_ae + 2.0 * self.root_f_pb - 1.0
    }
}

/// Purification `|psi> = sum_k sqrt(l_k) |v_k>|k>` on A' ⊗ S1 with `s1_dim` purifying levels.
fn purify(rho: &DensityMatrix, s1_dim: usize) -> Vec<C64> {
    let eig = herm_eig_tol(rho.matrix(), rho.tolerance()).expect("validated state");
    let mut psi = vec![C64::new(0.0, 0.0); 2 * s1_dim];
    // largest eigenvalues first so a pure input lands on S1 index 0
    for (k, idx) in (0..2).rev().take(s1_dim).enumerate() {
        let lambda = eig.values[idx].max(0.0);
        for a in 0..2 {
            psi[a * s1_dim + k] = eig.vectors[(a, idx)] * lambda.sqrt();
        }
    }
    psi
}

fn rank(rho: &DensityMatrix) -> usize {
    rho.spectrum().iter().filter(|&&l| l > SPECTRAL_ZERO).count()
}

/// Builds `W_AB`, `W_AE` and `W_PB` for the input ensemble `{rho_0, rho_1}` with uniform prior.
///
/// `inputs` defaults to the computational basis, in which case the purifying
/// system S1 is trivial. Mixed inputs are purified onto a qubit S1.
pub fn derive_channels(w: &QuantumWiretapChannel, inputs: Option<&[DensityMatrix; 2]>) -> Result<DerivedChannelSet> {
    let basis = [DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)];
    let inputs = inputs.unwrap_or(&basis);
    for rho in inputs {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                actual: rho.dim(),
            });
        }
    }
    let s1 = if inputs.iter().all(|r| rank(r) <= 1) { 1 } else { 2 };
    let out = w.output_dim();

    // |Psi_z> on B ⊗ E ⊗ S2 ⊗ S1
    let psi_out: Vec<Vec<C64>> = inputs
        .iter()
        .map(|rho| {
            let psi = purify(rho, s1);
            let mut v = vec![C64::new(0.0, 0.0); out * s1];
            for k in 0..s1 {
                let image = w.apply([psi[k], psi[s1 + k]]);
                for (i, amp) in image.into_iter().enumerate() {
                    v[i * s1 + k] = amp;
                }
            }
            v
        })
        .collect();

    let dims = [w.b_dim(), w.e_dim(), w.s2_dim(), s1];
    let amplitude = |keep: usize| -> Result<CqChannel> {
        let r0 = DensityMatrix::new(reduce_pure(&psi_out[0], &dims, &[keep])?)?;
        let r1 = DensityMatrix::new(reduce_pure(&psi_out[1], &dims, &[keep])?)?;
        CqChannel::new(r0, r1)
    };
    let w_ab = amplitude(0)?;
    let w_ae = amplitude(1)?;

    // Z^x on C applied to (|0>_C|Psi_0> + |1>_C|Psi_1>)/sqrt2, then Tr_E
    let phase_dims = [2, w.b_dim(), w.e_dim(), w.s2_dim(), s1];
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let omega = |x: u8| -> Result<DensityMatrix> {
        let mut phi = Vec::with_capacity(2 * out * s1);
        for (z, v) in psi_out.iter().enumerate() {
            let sign = if x == 1 && z == 1 { -scale } else { scale };
            phi.extend(v.iter().map(|a| a * sign));
        }
        DensityMatrix::new(reduce_pure(&phi, &phase_dims, &[0, 1, 3, 4])?)
    };
    let w_pb = CqChannel::new(omega(0)?, omega(1)?)?;

    Ok(DerivedChannelSet { w_ab, w_ae, w_pb })
}

pub fn metrics(d: &DerivedChannelSet) -> ChannelMetrics {
    ChannelMetrics {
        root_f_ab: d.w_ab.root_fidelity(),
        root_f_ae: d.w_ae.root_fidelity(),
        root_f_pb: d.w_pb.root_fidelity(),
        i_zb: d.w_ab.symmetric_holevo(),
        i_ze: d.w_ae.symmetric_holevo(),
        i_pb: d.w_pb.symmetric_holevo(),
    }
}

/// Sufficient condition for a vanishing secret-key rate:
/// `sqrt F(W_AB) + sqrt F(W_PB) < 1`.
pub fn key_rate_condition(m: &ChannelMetrics) -> bool {
    m.root_f_ab + m.root_f_pb < 1.0
}

/// `I(Z;B) - I(Z;E)`, the achievable net private rate. May be negative.
pub fn symmetric_private_info(m: &ChannelMetrics) -> f64 {
    m.i_zb - m.i_ze
}

/// Closed-form phase root fidelity of a classical wiretap channel under uniform input.
///
/// The phase state to Bob is block diagonal in Eve's symbol `z`, each block a
/// pure state `|chi_{z,x'}>` with `<chi_{z,0}|chi_{z,1}> = p(z) sum_x (-1)^x p(x|z)`,
/// so `sqrt F = sum_z p(z) |sum_x (-1)^x p(x|z)|`: the total variation distance
/// between Eve's two output distributions.
pub fn phase_fidelity_factored(c: &ClassicalWiretapChannel) -> Result<f64> {
    let defect = c.factorization_defect();
    if defect > 1e-12 {
        return Err(Error::NotFactorizable(defect));
    }
    let (pz0, pz1) = (c.eve_marginal(0), c.eve_marginal(1));
    let mut total = 0.0;
    for (a, b) in pz0.iter().zip(&pz1) {
        let pz = 0.5 * (a + b);
        if pz == 0.0 {
            continue;
        }
        // p(x|z) = p(z|x) p(x) / p(z)
        let (px0, px1) = (0.5 * a / pz, 0.5 * b / pz);
        total += pz * (px0 - px1).abs();
    }
    Ok(total.clamp(0.0, 1.0))
}
