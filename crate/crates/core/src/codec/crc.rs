use alloc::vec::Vec;

/// A CRC over GF(2) processed MSB first with a zero initial register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crc {
    /// Generator coefficients below the leading term.
    poly: u32,
    len: usize,
}

impl Crc {
    /// `g(D) = D^11 + D^10 + D^9 + D^5 + 1` (NR uplink CRC11).
    pub const fn nr_crc11() -> Self {
        Crc { poly: 0x621, len: 11 }
    }

    pub const fn new(poly_without_leading_term: u32, len: usize) -> Self {
        Crc { poly: poly_without_leading_term, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn register(&self, bits: &[u8]) -> u32 {
        let mask = (1u32 << self.len) - 1;
        let mut reg = 0u32;
        for &b in bits {
            let fb = ((reg >> (self.len - 1)) ^ b as u32) & 1;
            reg = (reg << 1) & mask;
            if fb == 1 {
                reg ^= self.poly;
            }
        }
        reg
    }

    /// Parity bits of `bits`, most significant first.
    pub fn checksum(&self, bits: &[u8]) -> Vec<u8> {
        let reg = self.register(bits);
        (0..self.len).rev().map(|i| ((reg >> i) & 1) as u8).collect()
    }

    /// True iff `word = message ‖ checksum(message)`.
    pub fn check(&self, word: &[u8]) -> bool {
        self.register(word) == 0
    }
}
