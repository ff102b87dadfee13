use serde::Serialize;

use crate::error::{Error, Result};
use crate::farey::{CFrac, Slope};
use crate::scalar::{self as s, Int};

/// A `(p, q)`-torus knot type in normal form: `-q > p > 0`, `gcd(p, q) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(bound = "")]
pub struct TorusKnot<T: Int> {
    #[serde(serialize_with = "crate::scalar::json::int")]
    p: T,
    #[serde(serialize_with = "crate::scalar::json::int")]
    q: T,
}

impl<T: Int> TorusKnot<T> {
    pub fn new(p: T, q: T) -> Result<Self> {
        if !p.gcd(&q).is_one() {
            return Err(Error::NotCoprime(p.to_string(), q.to_string()));
        }
        if !(p.is_positive() && s::neg(&q)? > p) {
            return Err(Error::InvalidSlope(format!("{q}/{p}")));
        }
        Ok(TorusKnot { p, q })
    }

    pub fn from_i64(p: i64, q: i64) -> Result<Self> {
        Self::new(s::lift(p)?, s::lift(q)?)
    }

    pub fn p(&self) -> &T {
        &self.p
    }

    pub fn q(&self) -> &T {
        &self.q
    }

    pub fn slope(&self) -> Slope<T> {
        Slope::new(self.q.clone(), self.p.clone()).expect("validated in new")
    }

    /// `q'/p'`.
    pub fn cw(&self) -> Result<Slope<T>> {
        self.slope().neighbor_cw()
    }

    /// `q''/p''`.
    pub fn acw(&self) -> Result<Slope<T>> {
        self.slope().neighbor_acw()
    }

    /// `q/p = [a_1, ..., a_m]`.
    pub fn a_expansion(&self) -> Result<CFrac<T>> {
        self.slope().cf_expand()
    }

    /// `(-1 - p/q)^{-1} = -q/(q+p) = [b_1, ..., b_n]`.
    pub fn b_expansion(&self) -> Result<CFrac<T>> {
        Slope::new(s::neg(&self.q)?, s::add(&self.q, &self.p)?)?.cf_expand()
    }
}

impl<T: Int> std::fmt::Display for TorusKnot<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}
