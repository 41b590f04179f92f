//! Bitwise CRC over bit vectors, MSB-first, zero initial register,
//! no reflection, no final XOR.

use crate::code::{Bit, CrcSpec};

/// Polynomial division remainder of `word` by the generator, `degree` bits
/// MSB first.
fn remainder(word: &[Bit], spec: &CrcSpec) -> Vec<Bit> {
    let deg = spec.degree();
    let taps = spec.taps();
    let mut reg = vec![0u8; deg];
    for &bit in word {
        let fb = reg[0] ^ bit;
        reg.rotate_left(1);
        reg[deg - 1] = 0;
        if fb == 1 {
            for (r, &t) in reg.iter_mut().zip(&taps) {
                *r ^= t;
            }
        }
    }
    reg
}

/// Append `degree` check bits to `payload` so that [`crc_check`] passes.
pub fn crc_encode(payload: &[Bit], spec: &CrcSpec) -> Vec<Bit> {
    // The shift register computes rem(payload * x^deg) as it consumes the
    // payload; appending that remainder makes the word divisible.
    let mut word = payload.to_vec();
    word.extend(remainder(payload, spec));
    word
}

/// True iff the polynomial division remainder of `word` is zero.
pub fn crc_check(word: &[Bit], spec: &CrcSpec) -> bool {
    remainder(word, spec).iter().all(|&b| b == 0)
}
