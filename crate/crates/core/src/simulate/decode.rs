//! Successive cancellation decoding for `x = u F^{⊗n}` in natural order.
//!
//! With `u = (u_top, u_bot)` the codeword splits as
//! `x_top = (u_top ⊕ u_bot) G'` and `x_bot = u_bot G'`, so the top half is
//! decoded first from the combined observation and the bottom half second
//! with the re-encoded top half as side information.

use serde::Serialize;

/// Check-node rule for LLR decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoxplusRule {
    #[default]
    Exact,
    MinSum,
}

/// `2 atanh(tanh(a/2) tanh(b/2))`, or its min-sum approximation.
pub fn boxplus(a: f64, b: f64, rule: BoxplusRule) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    let m = a.abs().min(b.abs());
    if rule == BoxplusRule::MinSum || m.is_infinite() {
        return sign * m;
    }
    let corr = |s: f64| if s.is_finite() { (-s.abs()).exp().ln_1p() } else { 0.0 };
    sign * m + corr(a + b) - corr(a - b)
}

/// `ln((1-p)/p)`: the LLR of a received 0 on a BSC(`p`).
pub fn bsc_llr(p: f64) -> f64 {
    ((1.0 - p) / p).ln()
}

/// Generic SC recursion. `decide(i, obs)` returns the bit fed forward for
/// index `i`; `x` receives the re-encoded codeword of this subtree.
fn sc<T: Copy>(
    obs: &[T],
    f: &impl Fn(T, T) -> T,
    g: &impl Fn(T, T, u8) -> T,
    decide: &mut impl FnMut(usize, T) -> u8,
    offset: usize,
    x: &mut [u8],
) {
    if obs.len() == 1 {
        x[0] = decide(offset, obs[0]);
        return;
    }
    let half = obs.len() / 2;
    let (top, bot) = obs.split_at(half);
    let (x_top, x_bot) = x.split_at_mut(half);

    let upper: Vec<T> = top.iter().zip(bot).map(|(&t, &b)| f(t, b)).collect();
    sc(&upper, f, g, decide, offset, x_top);

    let lower: Vec<T> = top
        .iter()
        .zip(bot)
        .zip(x_top.iter())
        .map(|((&t, &b), &v)| g(t, b, v))
        .collect();
    sc(&lower, f, g, decide, offset + half, x_bot);

    for (a, b) in x_top.iter_mut().zip(x_bot.iter()) {
        *a ^= *b;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BecDecoded {
    pub bits: Vec<u8>,
    /// Some unknown bit was undecidable and was set to 0.
    pub flagged: bool,
}

/// SC decoding over an erasure channel; `None` marks an erasure.
///
/// `known[i]` supplies the value of frozen and key positions.
pub fn sc_decode_bec(received: &[Option<u8>], known: &[Option<u8>]) -> BecDecoded {
    assert_eq!(received.len(), known.len());
    let mut bits = vec![0u8; received.len()];
    let mut flagged = false;
    let mut x = vec![0u8; received.len()];
    sc(
        received,
        &|a: Option<u8>, b: Option<u8>| Some(a? ^ b?),
        &|a: Option<u8>, b: Option<u8>, v| b.or(a.map(|a| a ^ v)),
        &mut |i, obs: Option<u8>| {
            let bit = known[i].or(obs).unwrap_or_else(|| {
                flagged = true;
                0
            });
            bits[i] = bit;
            bit
        },
        0,
        &mut x,
    );
    BecDecoded { bits, flagged }
}

fn g_llr(a: f64, b: f64, v: u8) -> f64 {
    if v == 0 {
        b + a
    } else {
        b - a
    }
}

fn hard(llr: f64) -> u8 {
    u8::from(llr < 0.0)
}

/// SC decoding from channel LLRs `ln P(y|0)/P(y|1)`; ties decide 0.
pub fn sc_decode_bsc(llrs: &[f64], known: &[Option<u8>], rule: BoxplusRule) -> Vec<u8> {
    assert_eq!(llrs.len(), known.len());
    let mut bits = vec![0u8; llrs.len()];
    let mut x = vec![0u8; llrs.len()];
    sc(
        llrs,
        &|a, b| boxplus(a, b, rule),
        &g_llr,
        &mut |i, l| {
            bits[i] = known[i].unwrap_or_else(|| hard(l));
            bits[i]
        },
        0,
        &mut x,
    );
    bits
}

/// Hard decision at every index when all earlier bits are revealed as `truth`.
pub fn sc_genie_decisions(llrs: &[f64], truth: &[u8], rule: BoxplusRule) -> Vec<u8> {
    assert_eq!(llrs.len(), truth.len());
    let mut decisions = vec![0u8; llrs.len()];
    let mut x = vec![0u8; llrs.len()];
    sc(
        llrs,
        &|a, b| boxplus(a, b, rule),
        &g_llr,
        &mut |i, l| {
            decisions[i] = hard(l);
            truth[i]
        },
        0,
        &mut x,
    );
    decisions
}
