//! The integer scalar every module is generic over.
//!
//! Anything exact and signed works: `i64` for speed, `i128` for headroom,
//! `BigInt` when nothing may overflow. Fixed-width types go through checked
//! arithmetic and surface `Error::Overflow` instead of wrapping.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

pub trait Int:
    num_integer::Integer
    + Signed
    + Clone
    + Debug
    + Display
    + Hash
    + FromPrimitive
    + ToPrimitive
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + Send
    + Sync
    + 'static
{
}

impl<T> Int for T where
    T: num_integer::Integer
        + Signed
        + Clone
        + Debug
        + Display
        + Hash
        + FromPrimitive
        + ToPrimitive
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + Send
        + Sync
        + 'static
{
}

pub fn add<T: Int>(a: &T, b: &T) -> Result<T> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub fn sub<T: Int>(a: &T, b: &T) -> Result<T> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

pub fn mul<T: Int>(a: &T, b: &T) -> Result<T> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

pub fn neg<T: Int>(a: &T) -> Result<T> {
    sub(&T::zero(), a)
}

pub fn abs<T: Int>(a: &T) -> Result<T> {
    if a.is_negative() {
        neg(a)
    } else {
        Ok(a.clone())
    }
}

pub fn lift<T: Int>(v: i64) -> Result<T> {
    T::from_i64(v).ok_or(Error::Overflow)
}

pub fn lift_usize<T: Int>(v: usize) -> Result<T> {
    T::from_usize(v).ok_or(Error::Overflow)
}

pub fn to_usize<T: Int>(v: &T) -> Result<usize> {
    v.to_usize().ok_or(Error::Overflow)
}

pub fn product<'a, T: Int + 'a>(xs: impl IntoIterator<Item = &'a T>) -> Result<T> {
    xs.into_iter().try_fold(T::one(), |acc, x| mul(&acc, x))
}

pub fn parse<T: Int>(s: &str) -> Result<T> {
    T::from_str_radix(s.trim(), 10).map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

/// Serde helpers: integers go out as JSON numbers when they fit in i64,
/// as decimal strings otherwise.
pub mod json {
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    use super::Int;

    pub fn int<T: Int, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(i) => s.serialize_i64(i),
            None => s.serialize_str(&v.to_string()),
        }
    }

    pub fn ints<T: Int, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&Wrap(x))?;
        }
        seq.end()
    }

    pub fn matrix<T: Int, S: Serializer>(v: &[Vec<T>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for row in v {
            seq.serialize_element(&IntSlice(row))?;
        }
        seq.end()
    }

    pub struct Wrap<'a, T>(pub &'a T);

    impl<T: Int> serde::Serialize for Wrap<'_, T> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            int(self.0, s)
        }
    }

    pub struct IntSlice<'a, T>(pub &'a [T]);

    impl<T: Int> serde::Serialize for IntSlice<'_, T> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            ints(self.0, s)
        }
    }
}
