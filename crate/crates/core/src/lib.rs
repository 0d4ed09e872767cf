//! Secret-key-assisted polar codes for private communication over classical
//! and quantum wiretap channels.
//!
//! - [`quantum`]: density matrices, root fidelity, entropy and Holevo information.
//! - [`channels`]: wiretap channel models and the derived amplitude/phase cq channels.
//! - [`polar`]: the polar transform, synthesized-channel fidelity tables and the
//!   four-way index partition with its rates and bounds.
//! - [`extremal`]: the coupled extremal birth processes behind the key-rate condition.
//! - [`simulate`]: encode/transmit/decode trials over erasure and binary symmetric channels.

pub mod channels;
pub mod error;
pub mod extremal;
pub mod format;
pub mod polar;
pub mod quantum;
pub mod simulate;

pub use error::{Error, Result};
