//! Polar encoding: bit-reversal permutation plus the Kronecker butterfly.
//!
//! The encoder computes c = u · B_n · F^⊗n over GF(2) with
//! F = [[1,0],[1,1]]. Since B_n commutes with F^⊗n, the codeword is
//! obtained by running the in-place XOR butterfly on u and then applying
//! the bit-reversal permutation to the result.

use crate::code::Bit;
use crate::error::{Error, Result};

fn checked_log2(len: usize) -> Result<u32> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros())
}

/// Reverse the low `n` bits of `i`.
#[inline]
pub fn reverse_bits(i: usize, n: u32) -> usize {
    i.reverse_bits() >> (usize::BITS - n)
}

/// Permute `v` so the element at index i lands at index rev_n(i).
/// Applying the permutation twice is the identity.
pub fn bit_reversal_permute<T: Clone>(v: &[T]) -> Result<Vec<T>> {
    let n = checked_log2(v.len())?;
    let mut out = v.to_vec();
    for i in 0..v.len() {
        out[reverse_bits(i, n)] = v[i].clone();
    }
    Ok(out)
}

/// In-place XOR butterfly computing u · F^⊗n over GF(2).
fn butterfly(x: &mut [Bit]) {
    let len = x.len();
    let mut half = 1;
    while half < len {
        let step = half * 2;
        for block in (0..len).step_by(step) {
            for j in block..block + half {
                x[j] ^= x[j + half];
            }
        }
        half = step;
    }
}

/// Encode a length-2^n source vector: c = u · B_n · F^⊗n mod 2.
pub fn encode(u: &[Bit], n: u32) -> Result<Vec<Bit>> {
    if u.len() != 1usize << n {
        return Err(Error::Config(format!(
            "source length {} does not match N = 2^{}",
            u.len(),
            n
        )));
    }
    checked_log2(u.len())?;
    let mut x = u.to_vec();
    butterfly(&mut x);
    bit_reversal_permute(&x)
}

/// Materialize G_N = B_n · F^⊗n over GF(2). Reference oracle for the
/// butterfly encoder; refuses n > 12.
pub fn generator_matrix(n: u32) -> Result<Vec<Vec<Bit>>> {
    if n == 0 || n > 12 {
        return Err(Error::Config(format!(
            "generator_matrix supports 1 <= n <= 12, got {n}"
        )));
    }
    // F^⊗n by repeated Kronecker product with F = [[1,0],[1,1]].
    let mut f = vec![vec![1u8, 0], vec![1u8, 1]];
    for _ in 1..n {
        let m = f.len();
        let mut next = vec![vec![0u8; 2 * m]; 2 * m];
        for (bi, brow) in [[1u8, 0u8], [1u8, 1u8]].iter().enumerate() {
            for (bj, &bval) in brow.iter().enumerate() {
                if bval == 0 {
                    continue;
                }
                for i in 0..m {
                    for j in 0..m {
                        next[bi * m + i][bj * m + j] = f[i][j];
                    }
                }
            }
        }
        f = next;
    }
    // Row permutation by bit reversal: G = B_n F^⊗n.
    let size = f.len();
    let mut g = vec![Vec::new(); size];
    for (i, row) in f.into_iter().enumerate() {
        g[reverse_bits(i, n)] = row;
    }
    Ok(g)
}

/// Multiply a row vector by a binary matrix over GF(2). Test oracle path.
pub fn matmul_gf2(u: &[Bit], m: &[Vec<Bit>]) -> Vec<Bit> {
    let cols = m[0].len();
    let mut out = vec![0u8; cols];
    for (ui, row) in u.iter().zip(m) {
        if *ui == 1 {
            for (o, &r) in out.iter_mut().zip(row) {
                *o ^= r;
            }
        }
    }
    out
}
