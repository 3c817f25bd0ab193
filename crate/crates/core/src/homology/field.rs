//! Coefficient fields for exact elimination.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub trait Field: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; only called on nonzero values.
    fn inv(&self) -> Self;
}

/// Integers modulo the prime `P` (`P < 2^32`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp<const P: u64>(u64);

/// The default large prime used for Betti numbers.
pub const LARGE_PRIME: u64 = 2_147_483_629;

pub type FLarge = Fp<LARGE_PRIME>;

impl<const P: u64> Fp<P> {
    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Fp(acc)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }

    fn from_i64(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn add(&self, other: &Self) -> Self {
        Fp((self.0 + other.0) % P)
    }

    fn mul(&self, other: &Self) -> Self {
        Fp(self.0 * other.0 % P)
    }

    fn neg(&self) -> Self {
        Fp((P - self.0) % P)
    }

    fn inv(&self) -> Self {
        debug_assert!(self.0 != 0);
        self.pow(P - 2)
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn inv(&self) -> Self {
        if self.is_negative() {
            -(BigRational::one() / self.abs())
        } else {
            BigRational::one() / self
        }
    }
}
