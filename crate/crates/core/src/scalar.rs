//! The exact integer scalar all lattice computations are generic over.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact, signed integer type.
///
/// Implemented for every type that provides the required arithmetic, which
/// includes `BigInt` as well as the primitive signed integers. The primitive
/// types are convenient for small searches but can overflow; `BigInt` never
/// does and is what the crate-level aliases use.
pub trait Scalar:
    Integer + Signed + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync
{
    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("i64 value must fit the scalar type")
    }
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
{
}
