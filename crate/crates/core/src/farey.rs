//! Slopes on the Farey graph and negative continued fractions.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{self as s, Int};

/// A reduced extended rational `num/den` with `den >= 0`; infinity is `-1/0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Slope<T> {
    num: T,
    den: T,
}

/// Unreduced componentwise difference of two adjacent slopes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FareyDiff<T> {
    pub num: T,
    pub den: T,
}

impl<T: Int> Slope<T> {
    pub fn new(num: T, den: T) -> Result<Self> {
        if den.is_zero() {
            return if num.is_zero() {
                Err(Error::ZeroSlope)
            } else {
                Ok(Self::infinity())
            };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g.clone(), den / g);
        if d.is_negative() {
            n = s::neg(&n)?;
            d = s::neg(&d)?;
        }
        Ok(Slope { num: n, den: d })
    }

    pub fn from_i64(num: i64, den: i64) -> Result<Self> {
        Self::new(s::lift(num)?, s::lift(den)?)
    }

    pub fn infinity() -> Self {
        Slope {
            num: -T::one(),
            den: T::zero(),
        }
    }

    pub fn integer(n: T) -> Self {
        Slope {
            num: n,
            den: T::one(),
        }
    }

    pub fn num(&self) -> &T {
        &self.num
    }

    pub fn den(&self) -> &T {
        &self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    /// `b/a . d/c = bc - ad`.
    pub fn dot(&self, other: &Self) -> Result<T> {
        s::sub(
            &s::mul(&self.num, &other.den)?,
            &s::mul(&self.den, &other.num)?,
        )
    }

    pub fn is_edge(&self, other: &Self) -> Result<bool> {
        Ok(s::abs(&self.dot(other)?)?.is_one())
    }

    pub fn farey_sum(&self, other: &Self) -> Result<Self> {
        let opposite = (self.num.is_positive() && other.num.is_negative())
            || (self.num.is_negative() && other.num.is_positive());
        if opposite {
            return Err(Error::FareySumSigns(self.to_string(), other.to_string()));
        }
        Self::new(
            s::add(&self.num, &other.num)?,
            s::add(&self.den, &other.den)?,
        )
    }

    /// `self ⊖ other`, componentwise and unreduced.
    pub fn farey_diff(&self, other: &Self) -> Result<FareyDiff<T>> {
        if !self.is_edge(other)? {
            return Err(Error::NotAdjacent(self.to_string(), other.to_string()));
        }
        Ok(FareyDiff {
            num: s::sub(&self.num, &other.num)?,
            den: s::sub(&self.den, &other.den)?,
        })
    }

    /// `q'/p'` with `p q' - p' q = 1` and `1 <= p' <= p`.
    pub fn neighbor_cw(&self) -> Result<Self> {
        if self.is_infinite() {
            return Err(Error::Infinite);
        }
        let (q, p) = (&self.num, &self.den);
        if p.is_one() {
            return Ok(Self::integer(s::add(q, &T::one())?));
        }
        // q x + p y = 1, so q^{-1} = x mod p and p' = -x mod p
        let x = q.extended_gcd(p).x;
        let pp = s::neg(&x)?.mod_floor(p);
        let qq = s::add(&T::one(), &s::mul(&pp, q)?)? / p.clone();
        Ok(Slope { num: qq, den: pp })
    }

    /// `(q - q')/(p - p')`; infinity when `p = 1`.
    pub fn neighbor_acw(&self) -> Result<Self> {
        let cw = self.neighbor_cw()?;
        Self::new(s::sub(&self.num, &cw.num)?, s::sub(&self.den, &cw.den)?)
    }

    pub fn cf_expand(&self) -> Result<CFrac<T>> {
        if self.is_infinite() || self.num >= s::neg(&self.den)? {
            return Err(Error::CfDomain(self.to_string()));
        }
        Ok(CFrac {
            entries: floor_expansion(&self.num, &self.den)?,
        })
    }
}

/// `a = floor(s)` (or `s` itself when integral), then recurse on `1/(a - s)`.
/// For `s < -1` every entry is `<= -2`; for `-1 <= s < 0` only the first is `-1`.
pub(crate) fn floor_expansion<T: Int>(num: &T, den: &T) -> Result<Vec<T>> {
    let (mut n, mut d) = (num.clone(), den.clone());
    let mut out = Vec::new();
    loop {
        let (a, r) = n.div_mod_floor(&d);
        out.push(a);
        if r.is_zero() {
            return Ok(out);
        }
        // 1/(a - n/d) = -d/r with 0 < r < d
        n = s::neg(&d)?;
        d = r;
    }
}

/// Right-to-left evaluation without any entry check. `[]` is infinity.
pub(crate) fn eval_entries<T: Int>(entries: &[T]) -> Result<Slope<T>> {
    let Some((last, rest)) = entries.split_last() else {
        return Ok(Slope::infinity());
    };
    let (mut n, mut d) = (last.clone(), T::one());
    for a in rest.iter().rev() {
        // a - d/n
        let next = s::sub(&s::mul(a, &n)?, &d)?;
        d = n;
        n = next;
    }
    Slope::new(n, d)
}

/// `a/b` against `c/d` for positive `b`, `d`, without cross-multiplying.
fn cmp_fraction<T: Int>(a: &T, b: &T, c: &T, d: &T) -> Ordering {
    let (qa, ra) = a.div_mod_floor(b);
    let (qc, rc) = c.div_mod_floor(d);
    match qa.cmp(&qc) {
        Ordering::Equal => {}
        o => return o,
    }
    match (ra.is_zero(), rc.is_zero()) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (false, false) => cmp_fraction(d, &rc, b, &ra),
    }
}

impl<T: Int> Ord for Slope<T> {
    /// Infinity sits below every rational.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => cmp_fraction(&self.num, &self.den, &other.num, &other.den),
        }
    }
}

impl<T: Int> PartialOrd for Slope<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Int> fmt::Display for Slope<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl<T: Int> FromStr for Slope<T> {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "inf" || t == "∞" {
            return Ok(Self::infinity());
        }
        match t.split_once('/') {
            Some((n, d)) => Self::new(s::parse(n)?, s::parse(d)?),
            None => Self::new(s::parse(t)?, T::one()),
        }
    }
}

impl<T: Int> Serialize for Slope<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de, T: Int> Deserialize<'de> for Slope<T> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let text = String::deserialize(de)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Negative continued fraction `[a_1, ..., a_m] = a_1 - 1/(a_2 - ...)`, entries `<= -2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CFrac<T> {
    entries: Vec<T>,
}

impl<T: Int> CFrac<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        let bound = s::lift::<T>(-2)?;
        if let Some(bad) = entries.iter().find(|a| **a > bound) {
            return Err(Error::CfEntry(bad.to_string()));
        }
        Ok(CFrac { entries })
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn last(&self) -> Option<&T> {
        self.entries.last()
    }

    pub fn eval(&self) -> Result<Slope<T>> {
        eval_entries(&self.entries)
    }
}

impl<T: Int> fmt::Display for CFrac<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

impl<T: Int> FromStr for CFrac<T> {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [..], got {text:?}")))?;
        if inner.trim().is_empty() {
            return Self::new(Vec::new());
        }
        Self::new(inner.split(',').map(s::parse).collect::<Result<_>>()?)
    }
}

impl<T: Int> Serialize for CFrac<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type S = Slope<i64>;

    fn sl(n: i64, d: i64) -> S {
        S::from_i64(n, d).unwrap()
    }

    // brute force: every p' in 1..=p, keep the ones with p q' - p' q = 1
    fn cw_oracle(q: i64, p: i64) -> (i64, i64) {
        let hits: Vec<_> = (1..=p)
            .filter_map(|pp| {
                let t = 1 + pp * q;
                (t % p == 0).then_some((t / p, pp))
            })
            .collect();
        assert_eq!(hits.len(), 1, "q/p = {q}/{p}");
        hits[0]
    }

    #[test]
    fn oracle_neighbors_of_minus_16_over_7() {
        assert_eq!(cw_oracle(-16, 7), (-9, 4));
        assert_eq!(sl(-16, 7).neighbor_cw().unwrap(), sl(-9, 4));
        assert_eq!(sl(-16, 7).neighbor_acw().unwrap(), sl(-7, 3));
    }

    #[test]
    fn neighbors_match_oracle_everywhere() {
        for q in -40..=-2i64 {
            for p in 1..-q {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let s = sl(q, p);
                let (qq, pp) = cw_oracle(q, p);
                let cw = s.neighbor_cw().unwrap();
                let acw = s.neighbor_acw().unwrap();
                assert_eq!(cw, sl(qq, pp));
                assert_eq!(cw.farey_sum(&acw).unwrap(), s);
                assert!(s.is_edge(&cw).unwrap() && s.is_edge(&acw).unwrap());
                assert!(cw > s && s > acw);
            }
        }
    }

    #[test]
    fn construction_normalizes() {
        assert_eq!(sl(-32, 14), sl(-16, 7));
        assert_eq!(sl(-32, 14).num(), &-16);
        assert!(sl(1, 0).is_infinite());
        assert_eq!(sl(1, 0).num(), &-1);
        assert_eq!((*sl(6, -3).num(), *sl(6, -3).den()), (-2, 1));
        assert_eq!(S::from_i64(0, 0), Err(Error::ZeroSlope));
    }

    #[test]
    fn dot_examples() {
        assert_eq!(sl(0, 1).dot(&S::infinity()).unwrap(), 1);
        assert_eq!(sl(-9, 4).dot(&sl(-16, 7)).unwrap(), 1);
        assert_eq!(sl(-1, 1).dot(&sl(-16, 7)).unwrap(), 9);
        assert_eq!(sl(-16, 7).dot(&sl(-1, 1)).unwrap(), -9);
    }

    #[test]
    fn farey_sum_examples() {
        assert_eq!(sl(-9, 4).farey_sum(&sl(-7, 3)).unwrap(), sl(-16, 7));
        assert_eq!(sl(0, 1).farey_sum(&sl(0, 1)).unwrap(), sl(0, 1));
        assert_eq!(sl(-3, 1).farey_sum(&S::infinity()).unwrap(), sl(-4, 1));
        assert!(matches!(
            sl(2, 1).farey_sum(&sl(-3, 1)),
            Err(Error::FareySumSigns(..))
        ));
    }

    #[test]
    fn farey_diff_examples() {
        let q = -3;
        assert_eq!(S::infinity().farey_diff(&sl(q, 1)).unwrap().num, 2);
        // q and -1 are not adjacent; q + 1 is the telescoped sum along q, q+1, ..., -1
        assert!(matches!(
            sl(q, 1).farey_diff(&sl(-1, 1)),
            Err(Error::NotAdjacent(..))
        ));
        let sum: i64 = (q..-1)
            .map(|a| sl(a, 1).farey_diff(&sl(a + 1, 1)).unwrap().num)
            .sum();
        assert_eq!(sum, q + 1);
        let d = sl(-3, 1).farey_diff(&sl(-2, 1)).unwrap();
        assert_eq!((d.num, d.den), (-1, 0));
        assert!(matches!(
            sl(-16, 7).farey_diff(&sl(-2, 1)),
            Err(Error::NotAdjacent(..))
        ));
    }

    #[test]
    fn edges() {
        assert!(sl(-16, 7).is_edge(&sl(-9, 4)).unwrap());
        assert!(!sl(-16, 7).is_edge(&sl(-2, 1)).unwrap());
        assert!(sl(0, 1).is_edge(&S::infinity()).unwrap());
    }

    #[test]
    fn integer_neighbors() {
        assert_eq!(sl(-3, 1).neighbor_cw().unwrap(), sl(-2, 1));
        assert!(sl(-3, 1).neighbor_acw().unwrap().is_infinite());
        assert_eq!(S::infinity().neighbor_cw(), Err(Error::Infinite));
    }

    #[test]
    fn cf_examples() {
        let cf = |n, d| sl(n, d).cf_expand().unwrap().entries().to_vec();
        assert_eq!(cf(-16, 7), vec![-3, -2, -2, -3]);
        assert_eq!(cf(-16, 9), vec![-2, -5, -2]);
        assert_eq!(cf(-2, 1), vec![-2]);
        let ev = |v: Vec<i64>| CFrac::new(v).unwrap().eval().unwrap();
        assert_eq!(ev(vec![-3, -2, -2, -3]), sl(-16, 7));
        assert!(ev(vec![]).is_infinite());
        assert_eq!(ev(vec![-2, -2]), sl(-3, 2));
    }

    #[test]
    fn cf_domain_errors() {
        assert!(matches!(sl(-1, 1).cf_expand(), Err(Error::CfDomain(_))));
        assert!(matches!(sl(-1, 2).cf_expand(), Err(Error::CfDomain(_))));
        assert!(matches!(S::infinity().cf_expand(), Err(Error::CfDomain(_))));
        assert!(matches!(
            CFrac::<i64>::new(vec![-3, -1]),
            Err(Error::CfEntry(_))
        ));
    }

    #[test]
    fn floor_expansion_allows_leading_minus_one() {
        assert_eq!(floor_expansion(&-1i64, &2).unwrap(), vec![-1, -2]);
        assert_eq!(floor_expansion(&-2i64, &3).unwrap(), vec![-1, -3]);
        assert_eq!(floor_expansion(&-1i64, &1).unwrap(), vec![-1]);
    }

    #[test]
    fn ordering_puts_infinity_first() {
        let mut v = vec![sl(-2, 1), S::infinity(), sl(-16, 7), sl(-9, 4)];
        v.sort();
        assert_eq!(v, vec![S::infinity(), sl(-16, 7), sl(-9, 4), sl(-2, 1)]);
        assert!(Slope::<i64>::new(i64::MAX, 3).unwrap() > Slope::new(i64::MAX - 1, 3).unwrap());
    }

    #[test]
    fn text_round_trips() {
        assert_eq!("-16/7".parse::<S>().unwrap(), sl(-16, 7));
        assert!("inf".parse::<S>().unwrap().is_infinite());
        assert_eq!(sl(-16, 7).to_string(), "-16/7");
        assert_eq!(S::infinity().to_string(), "inf");
        let cf: CFrac<i64> = "[-3, -2, -2, -3]".parse().unwrap();
        assert_eq!(cf.to_string(), "[-3, -2, -2, -3]");
        assert_eq!(serde_json::to_string(&sl(-16, 7)).unwrap(), "\"-16/7\"");
    }

    #[test]
    fn overflow_is_an_error_not_a_wrap() {
        let big = Slope::<i64>::new(i64::MIN, 1).unwrap();
        assert_eq!(
            big.farey_sum(&Slope::infinity()).unwrap_err(),
            Error::Overflow
        );
    }

    #[test]
    fn bigint_slopes() {
        let q: BigInt = "-1000000000000000000000000000001".parse().unwrap();
        let p: BigInt = "7".parse().unwrap();
        let s = Slope::new(q, p).unwrap();
        let cw = s.neighbor_cw().unwrap();
        assert_eq!(cw.dot(&s).unwrap(), BigInt::from(1));
        assert_eq!(s.cf_expand().unwrap().eval().unwrap(), s);
    }
}
