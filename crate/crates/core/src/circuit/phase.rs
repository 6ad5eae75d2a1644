use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Neg};

/// Largest denominator exponent a [`Phase`] may carry.
pub const MAX_PHASE_BITS: u32 = 62;

/// A phase angle `2π · num / 2^bits`, kept reduced and in `[0, 2π)`.
///
/// Every angle in the circuits built here (oracle phases, their
/// controlled powers, inverse-QFT rotations and their halves) is a dyadic
/// fraction of a full turn, so arithmetic on them stays exact until the
/// simulator converts to radians.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase {
    num: u64,
    bits: u32,
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, bits: 0 };

    /// `num / 2^bits` of a full turn, reduced modulo one turn.
    pub fn turns(num: i128, bits: u32) -> Phase {
        assert!(
            bits <= MAX_PHASE_BITS,
            "phase denominator 2^{bits} too fine"
        );
        let den = 1i128 << bits;
        let num = num.rem_euclid(den) as u64;
        Phase { num, bits }.reduced()
    }

    /// `2π / 2^bits`.
    pub fn unit(bits: u32) -> Phase {
        Phase::turns(1, bits)
    }

    fn reduced(mut self) -> Phase {
        if self.num == 0 {
            return Phase::ZERO;
        }
        let shift = self.num.trailing_zeros().min(self.bits);
        self.num >>= shift;
        self.bits -= shift;
        self
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    /// Exponent of the power-of-two denominator.
    pub fn denominator_bits(self) -> u32 {
        self.bits
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn radians(self) -> f64 {
        TAU * self.num as f64 / (1u64 << self.bits) as f64
    }

    /// `self · 2^k`, modulo a full turn.
    pub fn times_pow2(self, k: u32) -> Phase {
        if k >= self.bits {
            Phase::ZERO
        } else {
            Phase::turns(self.num as i128, self.bits - k)
        }
    }

    /// `self · count`, modulo a full turn.
    pub fn times(self, count: u64) -> Phase {
        let den = 1u128 << self.bits;
        let num = (self.num as u128 * (count as u128 % den)) % den;
        Phase::turns(num as i128, self.bits)
    }

    pub fn half(self) -> Phase {
        Phase::turns(self.num as i128, self.bits + 1)
    }

    /// Recovers a dyadic phase from radians, accepting denominators up to
    /// `2^max_bits`. Used when re-reading exported circuits, whose angles are
    /// printed to twelve significant digits.
    pub fn from_radians(radians: f64, max_bits: u32) -> Option<Phase> {
        let turns = (radians / TAU).rem_euclid(1.0);
        for bits in 0..=max_bits.min(MAX_PHASE_BITS) {
            let scaled = turns * (1u64 << bits) as f64;
            let rounded = scaled.round();
            if (scaled - rounded).abs() < 2e-6 {
                return Some(Phase::turns(rounded as i128, bits));
            }
        }
        None
    }
}

impl Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        Phase::turns(-(self.num as i128), self.bits)
    }
}

impl Add for Phase {
    type Output = Phase;

    fn add(self, other: Phase) -> Phase {
        let bits = self.bits.max(other.bits);
        let a = (self.num as i128) << (bits - self.bits);
        let b = (other.num as i128) << (bits - other.bits);
        Phase::turns(a + b, bits)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // num is odd unless zero, so num·π / 2^(bits-1) is already reduced
        match (self.num, self.bits) {
            (0, _) => f.write_str("0"),
            (1, 1) => f.write_str("π"),
            (1, bits) => write!(f, "π/{}", 1u64 << (bits - 1)),
            (num, bits) => write!(f, "{num}π/{}", 1u64 << (bits - 1)),
        }
    }
}
