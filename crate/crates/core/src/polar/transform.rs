use crate::error::{Error, Result};

/// `u G_N` over GF(2) with `G_N = F^{⊗n}`, `F = [[1, 0], [1, 1]]`, natural index order.
///
/// `G_N` is an involution over GF(2), so `encode` also inverts itself.
pub fn encode(u: &[u8]) -> Result<Vec<u8>> {
    let mut x = u.to_vec();
    encode_in_place(&mut x)?;
    Ok(x)
}

pub fn encode_in_place(x: &mut [u8]) -> Result<()> {
    let n = x.len();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let mut span = 1;
    while span < n {
        for block in x.chunks_mut(2 * span) {
            let (lo, hi) = block.split_at_mut(span);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        span *= 2;
    }
    Ok(())
}

/// Recursion depth `n` with `len = 2^n`.
pub fn depth_of(len: usize) -> Result<u32> {
    if !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Explicit Kronecker-power generator matrix.
    fn generator(n: u32) -> Vec<Vec<u8>> {
        let mut g = vec![vec![1u8]];
        for _ in 0..n {
            let m = g.len();
            let mut next = vec![vec![0u8; 2 * m]; 2 * m];
            for r in 0..m {
                for c in 0..m {
                    next[r][c] = g[r][c];
                    next[m + r][c] = g[r][c];
                    next[m + r][m + c] = g[r][c];
                }
            }
            g = next;
        }
        g
    }

    #[test]
    fn zero_maps_to_zero() {
        assert_eq!(encode(&[0; 16]).unwrap(), vec![0; 16]);
    }

    #[test]
    fn single_butterfly() {
        for (u1, u2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert_eq!(encode(&[u1, u2]).unwrap(), vec![u1 ^ u2, u2]);
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert_eq!(encode(&[0; 6]), Err(Error::NotPowerOfTwo(6)));
    }

    #[test]
    fn matches_explicit_generator() {
        let g = generator(3);
        for word in 0..256u32 {
            let u: Vec<u8> = (0..8).map(|i| ((word >> i) & 1) as u8).collect();
            let expect: Vec<u8> = (0..8)
                .map(|c| (0..8).fold(0u8, |acc, r| acc ^ (u[r] & g[r][c])))
                .collect();
            assert_eq!(encode(&u).unwrap(), expect);
        }
    }

    proptest! {
        #[test]
        fn encode_is_an_involution(bits in proptest::collection::vec(0u8..2, 64)) {
            prop_assert_eq!(encode(&encode(&bits).unwrap()).unwrap(), bits);
        }
    }
}
