//! GF(16) as GF(2)[x] / (x^4 + x + 1).

use std::ops::{Add, Mul};

const MODULUS: u8 = 0b1_0011;

/// An element of GF(16), stored as a polynomial over GF(2) in the low 4 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf16(u8);

impl Gf16 {
    pub const ZERO: Gf16 = Gf16(0);
    pub const ONE: Gf16 = Gf16(1);
    /// `x`, a primitive element for this modulus.
    pub const GENERATOR: Gf16 = Gf16(2);

    pub fn new(bits: u8) -> Self {
        assert!(bits < 16, "GF(16) element out of range: {bits}");
        Gf16(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = Gf16> {
        (0..16).map(Gf16)
    }

    pub fn pow(self, mut e: u32) -> Gf16 {
        let (mut base, mut acc) = (self, Gf16::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Discrete log base [`Gf16::GENERATOR`]; `None` for zero.
    pub fn log(self) -> Option<u32> {
        if self == Gf16::ZERO {
            return None;
        }
        let mut acc = Gf16::ONE;
        for k in 0..15 {
            if acc == self {
                return Some(k);
            }
            acc = acc * Gf16::GENERATOR;
        }
        unreachable!("generator is primitive")
    }
}

impl Add for Gf16 {
    type Output = Gf16;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Gf16) -> Gf16 {
        Gf16(self.0 ^ rhs.0)
    }
}

impl Mul for Gf16 {
    type Output = Gf16;
    fn mul(self, rhs: Gf16) -> Gf16 {
        let (mut a, mut b, mut acc) = (self.0, rhs.0, 0u8);
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & 0x10 != 0 {
                a ^= MODULUS;
            }
        }
        Gf16(acc)
    }
}
