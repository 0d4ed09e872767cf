//! Per-index root-fidelity tables for the synthesized channels at blocklength `N = 2^n`.
//!
//! Index `i` has branch string `b_1 ... b_n`, its binary expansion read most
//! significant bit first; step `k` of the recursion takes the "plus" branch when
//! `b_k = 1` and the "minus" branch when `b_k = 0`. Phase channels see the
//! encoder transposed, which for table purposes means every branch is flipped.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::format::sig9;

/// Which synthesized channel family a table describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableKind {
    AmplitudeBob,
    AmplitudeEve,
    PhaseBob,
}

impl TableKind {
    /// Phase tables follow the complemented branch string.
    pub fn complement_branches(self) -> bool {
        matches!(self, Self::PhaseBob)
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::AmplitudeBob => "amplitude-bob",
            Self::AmplitudeEve => "amplitude-eve",
            Self::PhaseBob => "phase-bob",
        })
    }
}

/// Guaranteed intervals `[lo_i, hi_i]` for `sqrt F(W_N^(i))`.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityTable {
    pub n: u32,
    pub kind: TableKind,
    /// Initial root fidelity of the unsynthesized channel.
    pub param: f64,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl FidelityTable {
    pub fn len(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn with_kind(mut self, kind: TableKind) -> Self {
        self.kind = kind;
        self
    }

    /// Table with every interval collapsed to the constant `value`.
    pub fn constant(n: u32, kind: TableKind, value: f64) -> Self {
        let len = 1usize << n;
        Self {
            n,
            kind,
            param: value,
            lo: vec![value; len],
            hi: vec![value; len],
        }
    }

    /// CSV with header `index,lo,hi,kind,n,param`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "index,lo,hi,kind,n,param")?;
        for (i, (lo, hi)) in self.lo.iter().zip(&self.hi).enumerate() {
            writeln!(
                out,
                "{i},{},{},{},{},{}",
                sig9(*lo),
                sig9(*hi),
                self.kind,
                self.n,
                sig9(self.param)
            )?;
        }
        Ok(())
    }
}

fn minus(f: f64) -> f64 {
    2.0 * f - f * f
}

fn plus(f: f64) -> f64 {
    f * f
}

/// Expands one recursion level: entry `j` becomes children `2j` (branch 0) and `2j + 1` (branch 1).
fn expand<T, F>(level: &[T], step: F) -> Vec<T>
where
    T: Copy + Send + Sync + Default,
    F: Fn(T, u8) -> T + Sync,
{
    let mut next = vec![T::default(); level.len() * 2];
    next.par_chunks_mut(2).zip(level.par_iter()).for_each(|(kids, &v)| {
        kids[0] = step(v, 0);
        kids[1] = step(v, 1);
    });
    next
}

/// Exact erasure parameters of the synthesized channels of a BEC(`eps`).
///
/// For the erasure channel the root fidelity equals the erasure probability and
/// the two branch maps are exact.
pub fn bec_synth_exact(eps: f64, n: u32, complement_branches: bool) -> FidelityTable {
    let mut level = vec![eps];
    for _ in 0..n {
        level = expand(&level, |e, b| {
            if (b == 1) != complement_branches {
                plus(e)
            } else {
                minus(e)
            }
        });
    }
    FidelityTable {
        n,
        kind: if complement_branches {
            TableKind::PhaseBob
        } else {
            TableKind::AmplitudeBob
        },
        param: eps,
        lo: level.clone(),
        hi: level,
    }
}

/// Guaranteed intervals from the extremal recursion seeded with `f0`.
///
/// Upper bound: `U -> U^2` on plus, `U -> 2U - U^2` on minus.
/// Lower bound: `L -> L^2` on plus, `L -> L` on minus.
pub fn bound_synth(f0: f64, n: u32, complement_branches: bool) -> FidelityTable {
    #[derive(Clone, Copy, Default)]
    struct Interval(f64, f64);

    let mut level = vec![Interval(f0, f0)];
    for _ in 0..n {
        level = expand(&level, |Interval(lo, hi), b| {
            if (b == 1) != complement_branches {
                Interval(plus(lo), plus(hi))
            } else {
                Interval(lo, minus(hi))
            }
        });
    }
    FidelityTable {
        n,
        kind: if complement_branches {
            TableKind::PhaseBob
        } else {
            TableKind::AmplitudeBob
        },
        param: f0,
        lo: level.iter().map(|i| i.0).collect(),
        hi: level.iter().map(|i| i.1).collect(),
    }
}
