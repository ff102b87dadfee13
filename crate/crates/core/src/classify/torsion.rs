use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::euler::TorsionKind;

/// A non-negative half-integer, stored as a count of halves.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Torsion(u32);

impl Torsion {
    pub const ZERO: Torsion = Torsion(0);

    pub fn from_halves(h: u32) -> Self {
        Torsion(h)
    }

    pub fn halves(self) -> u32 {
        self.0
    }

    pub fn kind(self) -> TorsionKind {
        match self.0 {
            0 => TorsionKind::Zero,
            h if h % 2 == 0 => TorsionKind::Integer,
            _ => TorsionKind::HalfInteger,
        }
    }

    /// After one half Lutz twist.
    pub fn half_twist(self) -> Self {
        Torsion(self.0 + 1)
    }

    /// After one full Lutz twist.
    pub fn full_twist(self) -> Self {
        Torsion(self.0 + 2)
    }

    /// `1/2, 1, ..., self`.
    pub fn positive_steps(self) -> impl Iterator<Item = Torsion> {
        (1..=self.0).map(Torsion)
    }
}

impl fmt::Display for Torsion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for Torsion {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let bad = || Error::Parse(format!("not a non-negative half-integer: {text:?}"));
        let halves = if let Some((n, d)) = t.split_once('/') {
            let n: u32 = n.trim().parse().map_err(|_| bad())?;
            match d.trim() {
                "1" => n.checked_mul(2).ok_or_else(bad)?,
                "2" => n,
                _ => return Err(bad()),
            }
        } else if let Some((w, frac)) = t.split_once('.') {
            let w: u32 = if w.is_empty() {
                0
            } else {
                w.parse().map_err(|_| bad())?
            };
            let extra = match frac.trim_end_matches('0') {
                "" => 0,
                "5" => 1,
                _ => return Err(bad()),
            };
            w.checked_mul(2)
                .and_then(|h| h.checked_add(extra))
                .ok_or_else(bad)?
        } else {
            t.parse::<u32>()
                .map_err(|_| bad())?
                .checked_mul(2)
                .ok_or_else(bad)?
        };
        Ok(Torsion(halves))
    }
}

impl Serialize for Torsion {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_multiple_of(2) {
            ser.serialize_u32(self.0 / 2)
        } else {
            ser.serialize_f64(f64::from(self.0) / 2.0)
        }
    }
}
