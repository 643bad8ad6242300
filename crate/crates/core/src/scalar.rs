use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact integer ring element usable by the linear algebra layer.
///
/// Implemented for every type with Euclidean division and a sign, which covers
/// `BigInt` as well as the fixed-width signed integers. Fixed-width types are
/// handy in tests but overflow quickly on matrix powers.
pub trait Scalar:
    Clone + Debug + Display + Eq + Ord + Hash + Signed + Integer + FromPrimitive + ToPrimitive + Send + Sync
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("scalar type cannot represent an i64")
    }
}

impl<T> Scalar for T where
    T: Clone + Debug + Display + Eq + Ord + Hash + Signed + Integer + FromPrimitive + ToPrimitive + Send + Sync
{
}
