//! Wiretap channel models and the amplitude/phase cq channels derived from them.

mod derived;
mod model;

pub use derived::{
    derive_channels, key_rate_condition, metrics, phase_fidelity_factored, symmetric_private_info, ChannelMetrics,
    DerivedChannelSet,
};
pub use model::{
    embed_classical, make_amplitude_damping, make_bsc_wiretap, make_erasure_wiretap, ClassicalWiretapChannel,
    QuantumWiretapChannel,
};

use serde::Serialize;

use crate::error::Result;

/// The example channel families with their natural parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WiretapFamily {
    /// Independent binary symmetric channels with flip probabilities `p_b`, `p_e`.
    Bsc { p_b: f64, p_e: f64 },
    /// Quantum erasure channel; Eve receives what Bob loses.
    Erasure { eps: f64 },
    /// Amplitude damping with transmissivity `eta`.
    AmplitudeDamping { eta: f64 },
}

impl WiretapFamily {
    pub fn quantum(&self) -> Result<QuantumWiretapChannel> {
        match *self {
            Self::Bsc { p_b, p_e } => embed_classical(&make_bsc_wiretap(p_b, p_e)?),
            Self::Erasure { eps } => make_erasure_wiretap(eps),
            Self::AmplitudeDamping { eta } => make_amplitude_damping(eta),
        }
    }

    /// Derived channels for the computational-basis input ensemble.
    pub fn derive(&self) -> Result<DerivedChannelSet> {
        derive_channels(&self.quantum()?, None)
    }

    pub fn metrics(&self) -> Result<ChannelMetrics> {
        Ok(metrics(&self.derive()?))
    }
}
