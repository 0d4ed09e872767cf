//! The polar coding rule applied to amplitude and phase tables, the resulting
//! four-way index partition, and the rates and bounds that follow from it.

use serde::Serialize;

use super::table::FidelityTable;
use crate::error::{Error, Result};

/// Role of a synthesized-channel index in the private code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IndexRole {
    /// Good for amplitude and phase: message bits.
    A,
    /// Amplitude-good only: uniformly random bits.
    X,
    /// Phase-good only: frozen bits.
    Z,
    /// Bad for both: secret-key bits.
    B,
}

/// A code at blocklength `N = 2^n` with its index partition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodeSpec {
    pub n: u32,
    pub block_length: usize,
    pub beta: f64,
    /// `2^(-N^beta)`.
    pub threshold: f64,
    pub a: Vec<usize>,
    pub x: Vec<usize>,
    pub z: Vec<usize>,
    pub b: Vec<usize>,
    /// Indices whose amplitude or phase interval contains the threshold; these
    /// are classified bad on that axis.
    pub straddling: Vec<usize>,
}

impl CodeSpec {
    /// Per-index role, indexed by synthesized-channel index.
    pub fn roles(&self) -> Vec<IndexRole> {
        let mut roles = vec![IndexRole::B; self.block_length];
        for (set, role) in [
            (&self.a, IndexRole::A),
            (&self.x, IndexRole::X),
            (&self.z, IndexRole::Z),
        ] {
            for &i in set {
                roles[i] = role;
            }
        }
        roles
    }

    /// `A ∪ X` in ascending order: the indices the decoder must recover.
    pub fn decoded_indices(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.a.iter().chain(&self.x).copied().collect();
        c.sort_unstable();
        c
    }

    /// Partition built from explicit sets; they must be disjoint and cover `[N]`.
    pub fn from_sets(n: u32, beta: f64, a: Vec<usize>, x: Vec<usize>, z: Vec<usize>, b: Vec<usize>) -> Result<Self> {
        let block_length = 1usize << n;
        let mut seen = vec![false; block_length];
        for &i in a.iter().chain(&x).chain(&z).chain(&b) {
            if i >= block_length || seen[i] {
                return Err(Error::InvalidFactors(format!("index {i} out of range or repeated")));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidFactors("index sets do not cover [N]".into()));
        }
        let sorted = |mut v: Vec<usize>| {
            v.sort_unstable();
            v
        };
        Ok(Self {
            n,
            block_length,
            beta,
            threshold: polar_threshold(n, beta),
            a: sorted(a),
            x: sorted(x),
            z: sorted(z),
            b: sorted(b),
            straddling: Vec::new(),
        })
    }
}

/// `2^(-N^beta)` for `N = 2^n`.
pub fn polar_threshold(n: u32, beta: f64) -> f64 {
    let nb = ((1u64 << n) as f64).powf(beta);
    (-nb).exp2()
}

/// Applies the polar coding rule to both tables and assembles A, X, Z, B.
///
/// An index is good on an axis only if the upper end of its interval is below
/// the threshold.
pub fn classify(amp: &FidelityTable, phase: &FidelityTable, beta: f64) -> Result<CodeSpec> {
    if amp.n != phase.n {
        return Err(Error::DepthMismatch(amp.n, phase.n));
    }
    if !(beta > 0.0 && beta < 0.5) {
        return Err(Error::ParameterOutOfRange {
            name: "beta",
            value: beta,
            range: "(0, 1/2)",
        });
    }
    let threshold = polar_threshold(amp.n, beta);
    let (mut a, mut x, mut z, mut b, mut straddling) = (vec![], vec![], vec![], vec![], vec![]);
    for i in 0..amp.len() {
        let amp_good = amp.hi[i] < threshold;
        let phase_good = phase.hi[i] < threshold;
        let straddles = |t: &FidelityTable| t.lo[i] < threshold && t.hi[i] >= threshold;
        if straddles(amp) || straddles(phase) {
            straddling.push(i);
        }
        match (amp_good, phase_good) {
            (true, true) => a.push(i),
            (true, false) => x.push(i),
            (false, true) => z.push(i),
            (false, false) => b.push(i),
        }
    }
    Ok(CodeSpec {
        n: amp.n,
        block_length: amp.len(),
        beta,
        threshold,
        a,
        x,
        z,
        b,
        straddling,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rates {
    /// `(|A| - |B|) / N`.
    pub net_private: f64,
    /// `|B| / N`.
    pub key_rate: f64,
    /// `|A| / N`.
    pub info_rate: f64,
}

pub fn rates(spec: &CodeSpec) -> Rates {
    let n = spec.block_length as f64;
    Rates {
        net_private: (spec.a.len() as f64 - spec.b.len() as f64) / n,
        key_rate: spec.b.len() as f64 / n,
        info_rate: spec.a.len() as f64 / n,
    }
}

fn check_depth(spec: &CodeSpec, table: &FidelityTable) -> Result<()> {
    if spec.n != table.n {
        return Err(Error::DepthMismatch(spec.n, table.n));
    }
    Ok(())
}

/// Upper bound on `I(U_A; E^N)`: `sum_{i in A} sqrt(1 - lo_eve(i)^2)`.
pub fn leakage_bound(spec: &CodeSpec, eve_amp: &FidelityTable) -> Result<f64> {
    check_depth(spec, eve_amp)?;
    Ok(spec
        .a
        .iter()
        .map(|&i| (1.0 - eve_amp.lo[i].powi(2)).max(0.0).sqrt())
        .fold(0.0, |s, v| s + v))
}

/// [`leakage_bound`] without an Eve table: the fidelity uncertainty relation
/// gives `lo_eve(i) >= 1 - 2 hi_phase(i)`, floored at zero.
pub fn leakage_bound_from_phase(spec: &CodeSpec, phase: &FidelityTable) -> Result<f64> {
    check_depth(spec, phase)?;
    Ok(spec
        .a
        .iter()
        .map(|&i| {
            let lo_eve = (1.0 - 2.0 * phase.hi[i]).max(0.0);
            (1.0 - lo_eve * lo_eve).max(0.0).sqrt()
        })
        .fold(0.0, |s, v| s + v))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReliabilityBound {
    /// `sum_{i in A ∪ X} hi_amp(i)`, the classical union bound.
    pub union: f64,
    /// `sqrt(2 * union)`, valid for cq channels.
    pub quantum: f64,
}

pub fn reliability_bound(spec: &CodeSpec, amp: &FidelityTable) -> Result<ReliabilityBound> {
    check_depth(spec, amp)?;
    let union = spec.a.iter().chain(&spec.x).map(|&i| amp.hi[i]).fold(0.0, |s, v| s + v);
    Ok(ReliabilityBound {
        union,
        quantum: (2.0 * union).sqrt(),
    })
}
