//! Coefficient rings.
//!
//! Every chain, cochain, form and equation system in the crate is generic over a
//! [`Coefficient`]. Two rings matter in practice: the integers (backed by
//! [`num_bigint::BigInt`]) and the two-element field [`Z2`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Runtime tag for the coefficient ring, used by file formats and the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "Z2")]
    Z2,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => f.write_str("Z"),
            Ring::Z2 => f.write_str("Z2"),
        }
    }
}

impl std::str::FromStr for Ring {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Z" | "z" => Ok(Ring::Integers),
            "Z2" | "z2" => Ok(Ring::Z2),
            other => Err(format!("unknown ring `{other}` (expected Z or Z2)")),
        }
    }
}

/// A commutative ring with unit that the obstruction machinery can run over.
pub trait Coefficient:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Eq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    const RING: Ring;

    fn from_i64(value: i64) -> Self;

    /// `(-1)^exponent` in this ring.
    fn neg_one_pow(exponent: usize) -> Self {
        if exponent % 2 == 0 {
            Self::one()
        } else {
            -Self::one()
        }
    }

    /// Reduction modulo 2.
    fn to_z2(&self) -> Z2;

    /// Lossy conversion used by file formats; `None` if the value does not fit.
    fn to_i64(&self) -> Option<i64>;
}

/// The integers. Intersection numbers are small, but lattice witnesses may not be.
pub type Integer = BigInt;

impl Coefficient for BigInt {
    const RING: Ring = Ring::Integers;

    fn from_i64(value: i64) -> Self {
        BigInt::from(value)
    }

    fn to_z2(&self) -> Z2 {
        Z2(self.is_odd())
    }

    fn to_i64(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
}

/// An element of the field with two elements.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "u8", into = "u8")]
pub struct Z2(pub bool);

impl Z2 {
    pub const ZERO: Z2 = Z2(false);
    pub const ONE: Z2 = Z2(true);

    #[inline]
    pub fn bit(self) -> bool {
        self.0
    }
}

impl From<bool> for Z2 {
    fn from(b: bool) -> Self {
        Z2(b)
    }
}

impl From<u8> for Z2 {
    fn from(v: u8) -> Self {
        Z2(v & 1 == 1)
    }
}

impl From<Z2> for u8 {
    fn from(v: Z2) -> Self {
        v.0 as u8
    }
}

impl fmt::Debug for Z2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 as u8)
    }
}

impl fmt::Display for Z2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 as u8)
    }
}

impl Add for Z2 {
    type Output = Z2;
    #[inline]
    fn add(self, rhs: Z2) -> Z2 {
        Z2(self.0 ^ rhs.0)
    }
}

impl AddAssign for Z2 {
    #[inline]
    fn add_assign(&mut self, rhs: Z2) {
        self.0 ^= rhs.0;
    }
}

impl Sub for Z2 {
    type Output = Z2;
    #[inline]
    fn sub(self, rhs: Z2) -> Z2 {
        Z2(self.0 ^ rhs.0)
    }
}

impl Mul for Z2 {
    type Output = Z2;
    #[inline]
    fn mul(self, rhs: Z2) -> Z2 {
        Z2(self.0 & rhs.0)
    }
}

impl Neg for Z2 {
    type Output = Z2;
    #[inline]
    fn neg(self) -> Z2 {
        self
    }
}

impl Zero for Z2 {
    fn zero() -> Self {
        Z2::ZERO
    }

    fn is_zero(&self) -> bool {
        !self.0
    }
}

impl One for Z2 {
    fn one() -> Self {
        Z2::ONE
    }
}

impl Coefficient for Z2 {
    const RING: Ring = Ring::Z2;

    fn from_i64(value: i64) -> Self {
        Z2(value.rem_euclid(2) == 1)
    }

    fn to_z2(&self) -> Z2 {
        *self
    }

    fn to_i64(&self) -> Option<i64> {
        Some(self.0 as i64)
    }
}
