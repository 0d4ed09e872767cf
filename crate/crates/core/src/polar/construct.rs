use serde::Serialize;

use super::code::{classify, leakage_bound, rates, reliability_bound, CodeSpec, Rates, ReliabilityBound};
use super::table::{bec_synth_exact, bound_synth, FidelityTable, TableKind};
use crate::channels::WiretapFamily;
use crate::error::Result;

/// A classified code together with the tables it was built from.
#[derive(Debug, Clone)]
pub struct Construction {
    pub spec: CodeSpec,
    pub amp: FidelityTable,
    pub phase: FidelityTable,
    pub eve: FidelityTable,
}

/// Summary for reporting: the code plus its rates and bounds.
#[derive(Debug, Clone, Serialize)]
pub struct ConstructionReport {
    pub channel: WiretapFamily,
    pub exact_tables: bool,
    pub spec: CodeSpec,
    pub sizes: SetSizes,
    pub rates: Rates,
    pub reliability: ReliabilityBound,
    pub leakage_bound: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SetSizes {
    pub a: usize,
    pub x: usize,
    pub z: usize,
    pub b: usize,
    pub straddling: usize,
}

/// Amplitude, phase and Eve tables for `family` at depth `n`.
///
/// Erasure tables are exact; every other family uses the extremal bounds
/// seeded with the numerically computed root fidelities.
pub fn family_tables(family: &WiretapFamily, n: u32) -> Result<(FidelityTable, FidelityTable, FidelityTable)> {
    Ok(match *family {
        WiretapFamily::Erasure { eps } => {
            family.quantum()?;
            (
                bec_synth_exact(eps, n, false),
                bec_synth_exact(eps, n, true),
                bec_synth_exact(1.0 - eps, n, false).with_kind(TableKind::AmplitudeEve),
            )
        }
        _ => {
            let m = family.metrics()?;
            (
                bound_synth(m.root_f_ab, n, false),
                bound_synth(m.root_f_pb, n, true),
                bound_synth(m.root_f_ae, n, false).with_kind(TableKind::AmplitudeEve),
            )
        }
    })
}

/// Builds the tables for `family` at depth `n` and classifies with exponent `beta`.
pub fn construct(family: &WiretapFamily, n: u32, beta: f64) -> Result<Construction> {
    let (amp, phase, eve) = family_tables(family, n)?;
    let spec = classify(&amp, &phase, beta)?;
    Ok(Construction { spec, amp, phase, eve })
}

impl Construction {
    pub fn report(&self, channel: WiretapFamily) -> Result<ConstructionReport> {
        let s = &self.spec;
        Ok(ConstructionReport {
            channel,
            exact_tables: self.amp.is_exact() && self.phase.is_exact(),
            sizes: SetSizes {
                a: s.a.len(),
                x: s.x.len(),
                z: s.z.len(),
                b: s.b.len(),
                straddling: s.straddling.len(),
            },
            rates: rates(s),
            reliability: reliability_bound(s, &self.amp)?,
            leakage_bound: leakage_bound(s, &self.eve)?,
            spec: s.clone(),
        })
    }
}
