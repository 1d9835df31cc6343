//! Exact k-sparse recovery over a prime field.
//!
//! A vector `x ∈ F_p^n` is summarised by `2k` power sums
//! `S_r = Σ_j x_j (j+1)^r` (a Vandermonde sketch) plus `t` rows of a random
//! matrix applied to `x` (a fingerprint). The power sums determine any
//! k-sparse `x` uniquely and are decoded like a Reed–Solomon syndrome; the
//! fingerprint catches the non-sparse inputs on which the decoder returns
//! garbage.

mod decode;
mod prime;
mod sketch;

pub use prime::{choose_prime, is_prime};
pub use sketch::{
    decode_pair, encode_pair, fingerprint_add, fingerprint_entry, fingerprint_matches, vandermonde_add, verify_fingerprint,
    FingerprintSketch, SparseVec, VandermondeSketch,
};
pub use decode::{berlekamp_massey, decode_rows, decode_sparse, DecodeFailure};

use thiserror::Error;

/// Largest modulus accepted; keeps `a + b` and the 128-bit products safe.
pub const MAX_MODULUS: u64 = 1 << 62;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("n^c = {n}^{c} exceeds the 2^62 modulus budget")]
    Overflow { n: u64, c: u32 },
    #[error("{0} is not a prime below 2^62")]
    NotPrime(u64),
    #[error("modulus {p} must exceed the dimension {n}")]
    DimensionTooLarge { n: usize, p: u64 },
    #[error("bad sketch encoding: {0}")]
    Encoding(String),
}

/// A prime modulus and the ambient dimension it serves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldParams {
    p: u64,
    n: usize,
}

impl FieldParams {
    pub fn new(p: u64, n: usize) -> Result<Self, FieldError> {
        if p >= MAX_MODULUS || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if (p as u128) <= n as u128 {
            return Err(FieldError::DimensionTooLarge { n, p });
        }
        Ok(FieldParams { p, n })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Inverse by Fermat; `a` must be non-zero.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0, "zero has no inverse");
        self.pow(a, self.p - 2)
    }

    /// Maps a small signed integer into the field.
    pub fn from_i64(&self, x: i64) -> u64 {
        let r = x.rem_euclid(self.p as i64);
        r as u64
    }

    /// Reads a field element as a signed integer in `(-p/2, p/2]`.
    pub fn to_i64(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            -((self.p - a) as i64)
        } else {
            a as i64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_basics() {
        let f = FieldParams::new(101, 10).unwrap();
        assert_eq!(f.add(100, 5), 4);
        assert_eq!(f.sub(3, 5), 99);
        assert_eq!(f.mul(50, 50), 2500 % 101);
        assert_eq!(f.mul(f.inv(37), 37), 1);
        assert_eq!(f.to_i64(f.from_i64(-1)), -1);
        assert_eq!(f.to_i64(1), 1);
        assert!(matches!(FieldParams::new(100, 10), Err(FieldError::NotPrime(100))));
        assert!(matches!(FieldParams::new(7, 10), Err(FieldError::DimensionTooLarge { .. })));
    }
}
