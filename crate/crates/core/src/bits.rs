//! Bit strings, cursors, and the Elias universal integer codes.
//!
//! Every encoder in this crate emits its payload as a [`BitString`]; the
//! container serialises bit strings most-significant-bit-first within bytes,
//! zero-padding only the final byte of a record group.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    /// Elias codes are defined for positive integers only.
    #[error("value 0 is outside the Elias code domain")]
    ZeroValue,
    /// The bit string ended in the middle of a codeword.
    #[error("bit string ended mid-codeword at bit {position}")]
    Truncated { position: usize },
    /// A codeword prefix that cannot occur in valid output.
    #[error("malformed codeword at bit {position}")]
    Malformed { position: usize },
}

/// Growable sequence of bits with exact length.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitString {
    bytes: Vec<u8>,
    len: usize,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        let byte = self.len / 8;
        if byte == self.bytes.len() {
            self.bytes.push(0);
        }
        if bit {
            self.bytes[byte] |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_bits(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        for i in (0..width).rev() {
            self.push((value >> i) & 1 == 1);
        }
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        if index >= self.len {
            return None;
        }
        Some(self.bytes[index / 8] & (0x80 >> (index % 8)) != 0)
    }

    /// Appends another bit string. Concatenation is length-additive.
    pub fn extend(&mut self, other: &BitString) {
        for i in 0..other.len {
            self.push(other.get(i).unwrap());
        }
    }

    /// Bytes with the final partial byte zero-padded.
    pub fn as_padded_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Rebuilds a bit string from padded bytes and an exact bit length.
    pub fn from_padded_bytes(bytes: &[u8], len: usize) -> Self {
        assert!(len <= bytes.len() * 8, "bit length exceeds byte buffer");
        Self {
            bytes: bytes.to_vec(),
            len,
        }
    }
}

/// Read position over a [`BitString`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BitCursor {
    position: usize,
}

impl BitCursor {
    pub fn new() -> Self {
        Self { position: 0 }
    }

    pub fn position(&self) -> usize {
        self.position
    }

    pub fn remaining(&self, bits: &BitString) -> usize {
        bits.len().saturating_sub(self.position)
    }

    pub fn read_bit(&mut self, bits: &BitString) -> Result<bool, CodeError> {
        let b = bits.get(self.position).ok_or(CodeError::Truncated {
            position: self.position,
        })?;
        self.position += 1;
        Ok(b)
    }

    /// Reads `width` bits as an unsigned integer, most significant first.
    pub fn read_bits(&mut self, bits: &BitString, width: u32) -> Result<u64, CodeError> {
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | self.read_bit(bits)? as u64;
        }
        Ok(v)
    }

    /// Peeks up to `width` bits without advancing; missing bits read as 0.
    ///
    /// Returns the value left-aligned to `width` bits together with the
    /// number of real bits that backed it.
    pub fn peek_bits_zero_padded(&self, bits: &BitString, width: u32) -> (u64, u32) {
        let mut v = 0u64;
        let mut real = 0u32;
        for i in 0..width {
            v <<= 1;
            if let Some(b) = bits.get(self.position + i as usize) {
                v |= b as u64;
                real += 1;
            }
        }
        (v, real)
    }

    pub fn skip(&mut self, n: usize) {
        self.position += n;
    }
}

/// Elias gamma code: unary-coded bit width, then the value without its
/// leading one. Length is exactly `2*floor(lb k) + 1`.
pub fn elias_gamma_encode(k: u64) -> Result<BitString, CodeError> {
    if k == 0 {
        return Err(CodeError::ZeroValue);
    }
    let n = 63 - k.leading_zeros(); // floor(lb k)
    let mut out = BitString::new();
    for _ in 0..n {
        out.push(false);
    }
    out.push_bits(k, n + 1);
    Ok(out)
}

pub fn elias_gamma_decode(bits: &BitString, cursor: &mut BitCursor) -> Result<u64, CodeError> {
    let start = cursor.position();
    let mut zeros = 0u32;
    loop {
        if cursor.read_bit(bits)? {
            break;
        }
        zeros += 1;
        if zeros > 63 {
            return Err(CodeError::Malformed { position: start });
        }
    }
    let rest = cursor.read_bits(bits, zeros)?;
    Ok((1u64 << zeros) | rest)
}

/// Elias delta code: gamma-coded exponent, then the mantissa bits.
///
/// `|delta(k)| <= lb k + 2 lb(1 + lb k) + 1` for every k >= 1.
pub fn elias_delta_encode(k: u64) -> Result<BitString, CodeError> {
    if k == 0 {
        return Err(CodeError::ZeroValue);
    }
    let n = 63 - k.leading_zeros(); // floor(lb k)
    let mut out = elias_gamma_encode(n as u64 + 1)?;
    out.push_bits(k & !(1u64 << n), n);
    Ok(out)
}

pub fn elias_delta_decode(bits: &BitString, cursor: &mut BitCursor) -> Result<u64, CodeError> {
    let start = cursor.position();
    let n = elias_gamma_decode(bits, cursor)? - 1;
    if n > 63 {
        return Err(CodeError::Malformed { position: start });
    }
    let rest = cursor.read_bits(bits, n as u32)?;
    Ok((1u64 << n) | rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::DeterministicStream;

    fn codeword_str(b: &BitString) -> String {
        (0..b.len())
            .map(|i| if b.get(i).unwrap() { '1' } else { '0' })
            .collect()
    }

    #[test]
    fn gamma_reference_codewords() {
        // Independent reference construction: floor(lb k) zeros, then k in
        // binary. Hand table for the first few values.
        let expected = [
            (1, "1"),
            (2, "010"),
            (3, "011"),
            (4, "00100"),
            (5, "00101"),
            (9, "0001001"),
        ];
        for (k, s) in expected {
            assert_eq!(codeword_str(&elias_gamma_encode(k).unwrap()), s, "k={k}");
        }
    }

    #[test]
    fn gamma_length_formula() {
        for k in 1..=1024u64 {
            let n = (k as f64).log2().floor() as usize;
            assert_eq!(elias_gamma_encode(k).unwrap().len(), 2 * n + 1, "k={k}");
        }
    }

    #[test]
    fn delta_reference_codewords() {
        assert_eq!(codeword_str(&elias_delta_encode(1).unwrap()), "1");
        assert_eq!(codeword_str(&elias_delta_encode(2).unwrap()), "0100");
        assert_eq!(codeword_str(&elias_delta_encode(3).unwrap()), "0101");
        assert_eq!(codeword_str(&elias_delta_encode(17).unwrap()), "001010001");
        // and back
        let bits = elias_delta_encode(2).unwrap();
        let mut cur = BitCursor::new();
        assert_eq!(elias_delta_decode(&bits, &mut cur).unwrap(), 2);
    }

    #[test]
    fn delta_length_bound() {
        // |delta(k)| <= lb k + 2 lb(1 + lb k) + 1
        for k in 1..=100_000u64 {
            let len = elias_delta_encode(k).unwrap().len() as f64;
            let lbk = (k as f64).log2();
            assert!(len <= lbk + 2.0 * (1.0 + lbk).log2() + 1.0 + 1e-9, "k={k} len={len}");
        }
        assert_eq!(elias_delta_encode(1).unwrap().len(), 1);
        assert!(elias_delta_encode(17).unwrap().len() <= 10);
    }

    #[test]
    fn delta_roundtrip_large() {
        for k in [1u64, 2, 3, 1000, 1_000_000, u64::MAX / 2, u64::MAX] {
            let bits = elias_delta_encode(k).unwrap();
            let mut cur = BitCursor::new();
            assert_eq!(elias_delta_decode(&bits, &mut cur).unwrap(), k);
            assert_eq!(cur.position(), bits.len());
        }
    }

    #[test]
    fn zero_is_a_domain_error() {
        assert_eq!(elias_gamma_encode(0), Err(CodeError::ZeroValue));
        assert_eq!(elias_delta_encode(0), Err(CodeError::ZeroValue));
    }

    #[test]
    fn truncated_codeword_is_detected() {
        let bits = elias_delta_encode(1_000_000).unwrap();
        let cut = BitString::from_padded_bytes(bits.as_padded_bytes(), bits.len() - 3);
        let mut cur = BitCursor::new();
        assert!(matches!(
            elias_delta_decode(&cut, &mut cur),
            Err(CodeError::Truncated { .. })
        ));
    }

    #[test]
    fn concatenated_stream_decodes_in_order() {
        let values = [1u64, 7, 2, 900, 31, 1, 65536, 12];
        let mut all = BitString::new();
        for &v in &values {
            all.extend(&elias_delta_encode(v).unwrap());
        }
        let mut cur = BitCursor::new();
        let decoded: Vec<u64> = (0..values.len())
            .map(|_| elias_delta_decode(&all, &mut cur).unwrap())
            .collect();
        assert_eq!(decoded, values);
        assert_eq!(cur.position(), all.len());
    }

    #[test]
    fn prefix_freedom_random_pairs() {
        let mut s = DeterministicStream::new(7, 0);
        let mut checked = 0;
        while checked < 10_000 {
            let a = (s.next_uniform() * 1e6) as u64 + 1;
            let b = (s.next_uniform() * 1e6) as u64 + 1;
            if a == b {
                continue;
            }
            let ca = elias_delta_encode(a).unwrap();
            let cb = elias_delta_encode(b).unwrap();
            let (short, long) = if ca.len() <= cb.len() { (&ca, &cb) } else { (&cb, &ca) };
            let is_prefix = (0..short.len()).all(|i| short.get(i) == long.get(i));
            assert!(!is_prefix, "{a} vs {b}");
            checked += 1;
        }
    }

    #[test]
    fn padded_byte_roundtrip() {
        let mut b = BitString::new();
        b.push_bits(0b1011_0, 5);
        let bytes = b.as_padded_bytes().to_vec();
        assert_eq!(bytes, vec![0b1011_0000]);
        let back = BitString::from_padded_bytes(&bytes, 5);
        assert_eq!(back, b);
    }
}
