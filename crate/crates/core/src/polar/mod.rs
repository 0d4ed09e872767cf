//! The polar transform and code construction for the private scheme.
//!
//! Conventions: `G_N = F^{⊗n}` with no bit-reversal permutation, and the
//! branch string of index `i` is its binary expansion, most significant bit
//! first. Encoder, tables and decoders all share this convention.

mod code;
mod construct;
mod table;
mod transform;

pub use code::{
    classify, leakage_bound, leakage_bound_from_phase, polar_threshold, rates, reliability_bound, CodeSpec, IndexRole,
    Rates, ReliabilityBound,
};
pub use construct::{construct, family_tables, Construction, ConstructionReport, SetSizes};
pub use table::{bec_synth_exact, bound_synth, FidelityTable, TableKind};
pub use transform::{depth_of, encode, encode_in_place};

/// Default rate exponent for desk-scale blocklengths.
pub const DEFAULT_BETA: f64 = 0.25;
