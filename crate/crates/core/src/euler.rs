//! Euler classes of the contact structures `xi_{P1,P2}` on `S^1 x S^2`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::decor::{self, Decoration, Sign};
use crate::error::{Error, Result};
use crate::paths::{BlockSequence, PathSide};
use crate::scalar::{self as s, Int};

/// Which component of a pair a knot lives in: `Plus` has negative Euler class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn symbol(self) -> char {
        match self {
            Side::Plus => '+',
            Side::Minus => '-',
        }
    }

    pub fn other(self) -> Self {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TorsionKind {
    Zero,
    Integer,
    HalfInteger,
}

/// Sum over `P1` edges of `eps (p_{i+1} ⊖ p_i)` and over `P2` edges of
/// `eps' (q_i ⊖ q_{i+1})`, numerators only.
pub fn euler_class<T: Int>(seq: &BlockSequence<T>, dec: &Decoration) -> Result<T> {
    dec.check(seq)?;
    let mut e = T::zero();
    for (block, signs) in seq.blocks().iter().zip(decor::edge_signs(seq, dec)) {
        for ((u, v), sign) in block.edges().zip(signs) {
            let term = match block.side() {
                PathSide::P1 => v.farey_diff(u)?.num,
                PathSide::P2 => u.farey_diff(v)?.num,
            };
            let expected_positive = block.side() == PathSide::P1;
            if term.is_positive() != expected_positive || term.is_zero() {
                return Err(Error::Construction(format!(
                    "edge {u} -> {v} on {:?} contributes {term}",
                    block.side()
                )));
            }
            e = match sign {
                Sign::Positive => s::add(&e, &term)?,
                Sign::Negative => s::sub(&e, &term)?,
            };
        }
    }
    Ok(e)
}

pub fn euler_value_set<T: Int>(seq: &BlockSequence<T>) -> Result<BTreeSet<T>> {
    decor::enumerate(seq)
        .map(|d| euler_class(seq, &d))
        .collect()
}

fn even_range<T: Int>(lo: &T, hi: &T, signed: bool) -> Result<Vec<T>> {
    let two = s::lift::<T>(2)?;
    let mut out = BTreeSet::new();
    let mut k = lo.clone();
    while k <= *hi {
        let e = s::mul(&two, &k)?;
        if signed {
            out.insert(s::neg(&e)?);
        }
        out.insert(e);
        k = s::add(&k, &T::one())?;
    }
    Ok(out.into_iter().collect())
}

/// `{2q+2, ..., -2q-2}` in steps of 2.
pub fn expected_value_set<T: Int>(q: &T) -> Result<Vec<T>> {
    even_range(&T::zero(), &s::sub(&s::neg(q)?, &T::one())?, true)
}

/// The constant `k_e`, computed three ways that must agree.
pub fn k_e<T: Int>(seq: &BlockSequence<T>) -> Result<T> {
    let knot = seq.knot();
    let q = knot.q();
    let a_m = knot.a_expansion()?.last().cloned().expect("non-empty");
    let b_n = knot.b_expansion()?.last().cloned().expect("non-empty");
    let q1 = knot.cw()?.num().clone();
    let q2 = s::sub(q, &q1)?;
    let two = s::lift::<T>(2)?;
    let big_a = a_m < s::neg(&two)?;

    let closed = if big_a {
        s::add(
            &s::neg(q)?,
            &s::mul(&s::add(&a_m, &two)?, &s::sub(q, &q1)?)?,
        )?
    } else {
        s::add(&s::neg(q)?, &s::mul(&s::add(&b_n, &two)?, &q1)?)?
    };
    let split = if big_a {
        s::neg(&s::add(
            &q1,
            &s::mul(&s::abs(&s::add(&a_m, &T::one())?)?, &q2)?,
        )?)?
    } else {
        s::neg(&s::add(
            &s::mul(&s::abs(&s::add(&b_n, &T::one())?)?, &q1)?,
            &q2,
        )?)?
    };
    let path = s::add(
        &s::abs(&s::sub(seq.farthest(1).num(), q)?)?,
        &s::abs(&s::sub(seq.farthest(2).num(), q)?)?,
    )?;
    if closed != split || split != path {
        return Err(Error::Construction(format!(
            "k_e forms disagree: {closed}, {split}, {path}"
        )));
    }
    let lo = s::neg(q)?;
    let hi = s::sub(&s::mul(&two, &lo)?, &two)?;
    if closed < lo || closed > hi {
        return Err(Error::Construction(format!(
            "k_e = {closed} outside [{lo}, {hi}]"
        )));
    }
    Ok(closed)
}

/// Euler classes of the totally 2-inconsistent decorations, one per
/// decoration in enumeration order.
pub fn totally2_euler_values<T: Int>(seq: &BlockSequence<T>) -> Result<Vec<(Decoration, T)>> {
    let mut out = Vec::new();
    for d in decor::enumerate(seq) {
        if decor::is_totally_k_inconsistent(seq, &d, 2)? {
            let e = euler_class(seq, &d)?;
            out.push((d, e));
        }
    }
    Ok(out)
}

pub fn totally2_euler_set<T: Int>(seq: &BlockSequence<T>) -> Result<BTreeSet<T>> {
    Ok(totally2_euler_values(seq)?
        .into_iter()
        .map(|(_, e)| e)
        .collect())
}

/// `{±2k : k_e + q + 1 <= k <= -q - 1}`.
pub fn totally2_interval<T: Int>(seq: &BlockSequence<T>) -> Result<Vec<T>> {
    let q = seq.knot().q();
    let lo = s::add(&s::add(&k_e(seq)?, q)?, &T::one())?;
    let hi = s::sub(&s::neg(q)?, &T::one())?;
    even_range(&lo, &hi, true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct EulerSupport<T: Int> {
    pub torsion_kind: TorsionKind,
    #[serde(serialize_with = "crate::scalar::json::ints")]
    pub k_set: Vec<T>,
    #[serde(serialize_with = "crate::scalar::json::ints")]
    pub e_legendrian: Vec<T>,
    #[serde(serialize_with = "crate::scalar::json::ints")]
    pub e_transverse: Vec<T>,
}

impl<T: Int> EulerSupport<T> {
    pub fn allows_legendrian(&self, e: &T) -> bool {
        self.e_legendrian.binary_search(e).is_ok()
    }

    pub fn allows_transverse(&self, e: &T) -> bool {
        self.e_transverse.binary_search(e).is_ok()
    }
}

/// `k` ranges over `1..-q-1` (no torsion), `k_e+q+1..-q-1` (integer torsion)
/// or `k_e+2q+1..-1` (half-integer torsion); `e = ±2k`, `e^T = 2k`.
pub fn euler_support<T: Int>(seq: &BlockSequence<T>, kind: TorsionKind) -> Result<EulerSupport<T>> {
    let q = seq.knot().q();
    let one = T::one();
    let top = s::sub(&s::neg(q)?, &one)?;
    let (lo, hi) = match kind {
        TorsionKind::Zero => (one.clone(), top),
        TorsionKind::Integer => (s::add(&s::add(&k_e(seq)?, q)?, &one)?, top),
        TorsionKind::HalfInteger => {
            let two_q = s::add(q, q)?;
            (s::add(&s::add(&k_e(seq)?, &two_q)?, &one)?, s::neg(&one)?)
        }
    };
    let mut k_set = Vec::new();
    let mut k = lo.clone();
    while k <= hi {
        k_set.push(k.clone());
        k = s::add(&k, &one)?;
    }
    Ok(EulerSupport {
        torsion_kind: kind,
        k_set,
        e_legendrian: even_range(&lo, &hi, true)?,
        e_transverse: even_range(&lo, &hi, false)?,
    })
}

pub fn side_of<T: Int>(seq: &BlockSequence<T>, dec: &Decoration) -> Result<Side> {
    let e = euler_class(seq, dec)?;
    if e.is_negative() {
        Ok(Side::Plus)
    } else if e.is_positive() {
        Ok(Side::Minus)
    } else {
        Err(Error::FullyConsistent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decor::{consistency_level, enumerate, negate, ConsistencyLevel};
    use crate::knot::TorusKnot;

    fn seq(p: i64, q: i64) -> BlockSequence<i64> {
        BlockSequence::new(&TorusKnot::from_i64(p, q).unwrap()).unwrap()
    }

    fn dec(c: &BlockSequence<i64>, v: &[usize]) -> Decoration {
        Decoration::new(c, v.to_vec()).unwrap()
    }

    // oracle: walk the raw paths vertex by vertex, with an arbitrary
    // (negatives-first) order of signs inside each block
    fn euler_oracle(c: &BlockSequence<i64>, d: &Decoration) -> i64 {
        let mut e = 0;
        for b in c.blocks() {
            let v = b.vertices();
            let neg = b.len() - d.positive(b.index());
            for i in 0..b.len() {
                let sign = if i < neg { -1 } else { 1 };
                let (a, z) = (v[i].num(), v[i + 1].num());
                e += sign
                    * match b.side() {
                        PathSide::P1 => z - a,
                        PathSide::P2 => a - z,
                    };
            }
        }
        e
    }

    #[test]
    fn shuffle_invariance_against_oracle() {
        for (p, q) in [(7, -16), (3, -11), (5, -13), (2, -9)] {
            let c = seq(p, q);
            for d in enumerate(&c) {
                assert_eq!(euler_class(&c, &d).unwrap(), euler_oracle(&c, &d));
            }
        }
    }

    #[test]
    fn examples() {
        let c = seq(1, -3);
        assert_eq!(euler_class(&c, &dec(&c, &[1, 1])).unwrap(), 2);
        for (p, q) in [(1, -3), (7, -16), (4, -9)] {
            let c = seq(p, q);
            let all_pos: Vec<_> = c.lengths();
            assert_eq!(
                euler_class(&c, &Decoration::new(&c, all_pos).unwrap()).unwrap(),
                0
            );
        }
        // p = 1, A_1 negative, k positives in B_2 gives -2k
        for q in -9..=-2i64 {
            let c = seq(1, q);
            for k in 0..=(-q - 1) as usize {
                assert_eq!(euler_class(&c, &dec(&c, &[0, k])).unwrap(), -2 * k as i64);
            }
        }
    }

    #[test]
    fn value_sets() {
        let set: Vec<_> = euler_value_set(&seq(1, -3)).unwrap().into_iter().collect();
        assert_eq!(set, vec![-4, -2, 0, 2, 4]);
        let set: Vec<_> = euler_value_set(&seq(7, -16)).unwrap().into_iter().collect();
        assert_eq!(set, (-15..=15).map(|k| 2 * k).collect::<Vec<_>>());
        assert_eq!(expected_value_set(&-16i64).unwrap(), set);
    }

    #[test]
    fn zero_only_when_consistent() {
        let c = seq(7, -16);
        for d in enumerate(&c) {
            let zero = euler_class(&c, &d).unwrap() == 0;
            assert_eq!(
                zero,
                consistency_level(&c, &d).unwrap() == ConsistencyLevel::FullyConsistent
            );
            if !zero {
                assert_eq!(
                    euler_class(&c, &negate(&c, &d)).unwrap(),
                    -euler_class(&c, &d).unwrap()
                );
            }
        }
    }

    #[test]
    fn k_e_examples() {
        for q in -12..=-2 {
            assert_eq!(k_e(&seq(1, q)).unwrap(), -2 * q - 2);
        }
        assert_eq!(k_e(&seq(7, -16)).unwrap(), 23);
        assert_eq!(k_e(&seq(1, -2)).unwrap(), 2);
    }

    #[test]
    fn totally2_examples() {
        let c = seq(1, -3);
        assert_eq!(
            totally2_euler_set(&c)
                .unwrap()
                .into_iter()
                .collect::<Vec<_>>(),
            vec![-4, 4]
        );
        assert_eq!(totally2_interval(&c).unwrap(), vec![-4, 4]);
        let c = seq(7, -16);
        let vals = totally2_euler_values(&c).unwrap();
        assert_eq!(vals.len(), 16);
        let set: Vec<_> = totally2_euler_set(&c).unwrap().into_iter().collect();
        assert_eq!(set.len(), 16);
        assert_eq!(set, totally2_interval(&c).unwrap());
    }

    // the interval can be shorter than 2l: here 14 values over 16 decorations
    #[test]
    fn totally2_values_can_repeat() {
        let c = seq(5, -13);
        assert_eq!(k_e(&c).unwrap(), 18);
        assert_eq!(totally2_euler_values(&c).unwrap().len(), 16);
        let set: Vec<_> = totally2_euler_set(&c).unwrap().into_iter().collect();
        assert_eq!(set, totally2_interval(&c).unwrap());
        assert_eq!(set.len(), 14);
    }

    #[test]
    fn support_table() {
        let c = seq(1, -3);
        let z = euler_support(&c, TorsionKind::Zero).unwrap();
        assert_eq!(z.k_set, vec![1, 2]);
        assert_eq!(z.e_legendrian, vec![-4, -2, 2, 4]);
        assert_eq!(z.e_transverse, vec![2, 4]);
        for q in -10..=-2 {
            let c = seq(1, q);
            let i = euler_support(&c, TorsionKind::Integer).unwrap();
            assert_eq!(i.k_set, vec![-q - 1]);
            assert_eq!(i.e_legendrian, vec![2 * (q + 1), -2 * (q + 1)]);
            let h = euler_support(&c, TorsionKind::HalfInteger).unwrap();
            assert_eq!(h.e_legendrian, vec![-2, 2]);
            assert_eq!(h.e_transverse, vec![-2]);
        }
    }

    #[test]
    fn sides() {
        let c = seq(1, -3);
        assert_eq!(side_of(&c, &dec(&c, &[0, 2])).unwrap(), Side::Minus.other());
        assert_eq!(euler_class(&c, &dec(&c, &[0, 2])).unwrap(), -4);
        assert_eq!(side_of(&c, &dec(&c, &[1, 0])).unwrap(), Side::Minus);
        assert_eq!(side_of(&c, &dec(&c, &[1, 2])), Err(Error::FullyConsistent));
    }
}
