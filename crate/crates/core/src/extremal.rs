//! Extremal birth processes for the root fidelity under channel splitting.
//!
//! One step maps `f -> f^2` when the branch bit is 0 and `f -> 2f - f^2` when it
//! is 1. The phase process is driven by the complemented bits, so a pair
//! `(f_a, f_p)` evolves on opposite branches at every step.
//!
//! Monte Carlo runs draw IID fair-coin branch bits. Trial `t` uses a ChaCha8
//! stream selected by `t` under the master seed, so results do not depend on
//! scheduling.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::sig9;

/// Values beyond this distance from 0 or 1 count as saturated.
pub const SATURATION: f64 = 1e-9;

/// Distance outside the search bracket at which saturation is probed.
pub const SATURATION_PROBE: f64 = 1e-3;

/// Default level above which a final value counts as converged to one.
pub const DEFAULT_GOOD_LEVEL: f64 = 0.99;

pub fn extremal_step(f: f64, bit: u8) -> f64 {
    if bit == 0 {
        f * f
    } else {
        2.0 * f - f * f
    }
}

/// Final value of a single process driven by `bits`.
pub fn evolve(f0: f64, bits: &[u8]) -> f64 {
    bits.iter().fold(f0, |f, &b| extremal_step(f, b))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryResult {
    pub depth: usize,
    pub bits: Vec<u8>,
    pub f_a: f64,
    pub f_p: f64,
}

/// Evolves the amplitude process on `bits` and the phase process on their complement.
pub fn pair_trajectory(f0_a: f64, f0_p: f64, bits: &[u8]) -> TrajectoryResult {
    let (f_a, f_p) = bits.iter().fold((f0_a, f0_p), |(a, p), &b| {
        (extremal_step(a, b), extremal_step(p, 1 - b))
    });
    TrajectoryResult {
        depth: bits.len(),
        bits: bits.to_vec(),
        f_a,
        f_p,
    }
}

/// Initial value separating trajectories that die out (below) from those that
/// saturate at one (at or above), located to within `f_tolerance`.
///
/// Fails with [`Error::NonSaturating`] when the bits are too short for starts
/// [`SATURATION_PROBE`] outside the bracket to come within [`SATURATION`] of 0 and 1.
pub fn threshold_search(bits: &[u8], f_tolerance: f64) -> Result<f64> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > f_tolerance {
        let mid = 0.5 * (lo + hi);
        if evolve(mid, bits) < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let below = evolve((lo - SATURATION_PROBE).max(0.0), bits);
    let above = evolve((hi + SATURATION_PROBE).min(1.0), bits);
    if below > SATURATION || above < 1.0 - SATURATION {
        return Err(Error::NonSaturating(bits.len()));
    }
    Ok(0.5 * (lo + hi))
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Fair-coin branch bits for one trial.
pub fn trial_bits(seed: u64, trial: u64, depth: usize) -> Vec<u8> {
    let mut rng = trial_rng(seed, trial);
    (0..depth).map(|_| rng.gen::<bool>() as u8).collect()
}

/// Fraction of trials whose final `min(f_a, f_p)` exceeds `level`.
pub fn doubly_good_fraction_at(f0_a: f64, f0_p: f64, trials: u64, depth: usize, seed: u64, level: f64) -> f64 {
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let r = pair_trajectory(f0_a, f0_p, &trial_bits(seed, t, depth));
            u64::from(r.f_a.min(r.f_p) > level)
        })
        .sum();
    hits as f64 / trials.max(1) as f64
}

/// [`doubly_good_fraction_at`] with the default level 0.99.
pub fn doubly_good_fraction(f0_a: f64, f0_p: f64, trials: u64, depth: usize, seed: u64) -> f64 {
    doubly_good_fraction_at(f0_a, f0_p, trials, depth, seed, DEFAULT_GOOD_LEVEL)
}

/// Empirical mean and standard error of a single process at `depth`.
pub fn final_value_stats(f0: f64, trials: u64, depth: usize, seed: u64) -> (f64, f64) {
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| evolve(f0, &trial_bits(seed, t, depth)))
        .collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

/// CSV dump `trial,depth,f_a,f_p`, one row per step (depth 0 is the initial pair).
pub fn write_trajectories_csv<W: Write>(
    mut out: W,
    f0_a: f64,
    f0_p: f64,
    trials: u64,
    depth: usize,
    seed: u64,
) -> io::Result<()> {
    writeln!(out, "trial,depth,f_a,f_p")?;
    for t in 0..trials {
        let (mut a, mut p) = (f0_a, f0_p);
        writeln!(out, "{t},0,{},{}", sig9(a), sig9(p))?;
        for (k, b) in trial_bits(seed, t, depth).into_iter().enumerate() {
            a = extremal_step(a, b);
            p = extremal_step(p, 1 - b);
            writeln!(out, "{t},{},{},{}", k + 1, sig9(a), sig9(p))?;
        }
    }
    Ok(())
}
