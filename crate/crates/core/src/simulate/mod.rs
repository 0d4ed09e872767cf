//! Encode, transmit and decode trials over erasure and binary symmetric channels.
//!
//! Message bits go to A, uniformly random bits to X, frozen bits to Z and
//! pre-shared key bits to B. Frozen and key bits are redrawn every trial and
//! are known to the decoder. Trial `t` draws from the ChaCha8 stream `t` under
//! the master seed, so reports are identical for any thread count.

mod decode;

pub use decode::{boxplus, bsc_llr, sc_decode_bec, sc_decode_bsc, sc_genie_decisions, BecDecoded, BoxplusRule};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::WiretapFamily;
use crate::error::{Error, Result};
use crate::polar::{encode_in_place, family_tables, leakage_bound, reliability_bound, CodeSpec};

/// Places each group of bits at its set's indices in ascending order.
pub fn assemble_input(spec: &CodeSpec, message: &[u8], random: &[u8], frozen: &[u8], key: &[u8]) -> Result<Vec<u8>> {
    let mut u = vec![0u8; spec.block_length];
    for (name, set, bits) in [
        ('A', &spec.a, message),
        ('X', &spec.x, random),
        ('Z', &spec.z, frozen),
        ('B', &spec.b, key),
    ] {
        if set.len() != bits.len() {
            return Err(Error::BitCountMismatch {
                set: name,
                expected: set.len(),
                actual: bits.len(),
            });
        }
        for (&i, &v) in set.iter().zip(bits) {
            u[i] = v;
        }
    }
    Ok(u)
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialConfig {
    /// Bob sees a BEC(`eps`) for `Erasure` and a BSC(`p_b`) for `Bsc`.
    pub channel: WiretapFamily,
    pub spec: CodeSpec,
    pub trials: u64,
    pub seed: u64,
    pub rule: BoxplusRule,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub channel: WiretapFamily,
    pub n: u32,
    pub beta: f64,
    pub seed: u64,
    pub fer: f64,
    /// Frames with an undecidable erasure decision (counted as errors).
    pub flagged_frames: u64,
    pub fer_bound_union: f64,
    pub fer_bound_quantum: f64,
    pub leakage_bound: f64,
    pub leakage_exact_bec: Option<f64>,
    pub trials_run: u64,
}

/// Bob's side of the channel for one frame.
#[derive(Debug, Clone, Copy)]
enum BobChannel {
    Erasure(f64),
    Symmetric(f64),
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn draw_bits(rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.gen::<bool>() as u8).collect()
}

/// Runs one frame; returns `(errored, flagged)`.
fn run_trial(spec: &CodeSpec, bob: BobChannel, rule: BoxplusRule, seed: u64, trial: u64) -> (bool, bool) {
    let mut rng = trial_rng(seed, trial);
    let message = draw_bits(&mut rng, spec.a.len());
    let random = draw_bits(&mut rng, spec.x.len());
    let frozen = draw_bits(&mut rng, spec.z.len());
    let key = draw_bits(&mut rng, spec.b.len());
    let u = assemble_input(spec, &message, &random, &frozen, &key).expect("sizes drawn from spec");

    let mut known = vec![None; spec.block_length];
    for &i in spec.z.iter().chain(&spec.b) {
        known[i] = Some(u[i]);
    }
    let mut x = u.clone();
    encode_in_place(&mut x).expect("block length is a power of two");

    let (decoded, flagged) = match bob {
        BobChannel::Erasure(eps) => {
            let received: Vec<Option<u8>> = x.iter().map(|&b| (rng.gen::<f64>() >= eps).then_some(b)).collect();
            let d = sc_decode_bec(&received, &known);
            (d.bits, d.flagged)
        }
        BobChannel::Symmetric(p) => {
            let l = bsc_llr(p);
            let llrs: Vec<f64> = x
                .iter()
                .map(|&b| {
                    let y = b ^ u8::from(rng.gen::<f64>() < p);
                    if y == 0 {
                        l
                    } else {
                        -l
                    }
                })
                .collect();
            (sc_decode_bsc(&llrs, &known, rule), false)
        }
    };
    let wrong = spec.a.iter().chain(&spec.x).any(|&i| decoded[i] != u[i]);
    (wrong || flagged, flagged)
}

pub fn run(config: &TrialConfig) -> Result<SimReport> {
    let spec = &config.spec;
    if config.trials == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "trials",
            value: 0.0,
            range: "[1, inf)",
        });
    }
    let bob = match config.channel {
        WiretapFamily::Erasure { eps } => BobChannel::Erasure(eps),
        WiretapFamily::Bsc { p_b, .. } => BobChannel::Symmetric(p_b),
        WiretapFamily::AmplitudeDamping { .. } => {
            return Err(Error::Unsupported(
                "bit-level simulation needs a classical-output channel",
            ))
        }
    };
    let (amp, _, eve) = family_tables(&config.channel, spec.n)?;
    let reliability = reliability_bound(spec, &amp)?;
    let leakage_exact_bec = match config.channel {
        WiretapFamily::Erasure { .. } => Some(spec.a.iter().map(|&i| 1.0 - eve.lo[i]).fold(0.0, |s, v| s + v)),
        _ => None,
    };

    let (errors, flagged) = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let (e, f) = run_trial(spec, bob, config.rule, config.seed, t);
            (u64::from(e), u64::from(f))
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    Ok(SimReport {
        channel: config.channel,
        n: spec.n,
        beta: spec.beta,
        seed: config.seed,
        fer: errors as f64 / config.trials as f64,
        flagged_frames: flagged,
        fer_bound_union: reliability.union,
        fer_bound_quantum: reliability.quantum,
        leakage_bound: leakage_bound(spec, &eve)?,
        leakage_exact_bec,
        trials_run: config.trials,
    })
}
