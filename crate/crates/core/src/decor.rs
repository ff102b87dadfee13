//! Decorations: per-block counts of positive basic slices, i.e. sign
//! assignments up to shuffling inside continued fraction blocks.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::paths::{BlockSequence, PathSide};
use crate::scalar::{self as s, Int};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Decoration {
    positives: Vec<usize>,
}

impl Decoration {
    /// Checked against the block lengths of `seq`.
    pub fn new<T: Int>(seq: &BlockSequence<T>, positives: Vec<usize>) -> Result<Self> {
        let d = Decoration { positives };
        d.check(seq)?;
        Ok(d)
    }

    pub fn positives(&self) -> &[usize] {
        &self.positives
    }

    /// Positive count of `C_k`, 1-based.
    pub fn positive(&self, k: usize) -> usize {
        self.positives[k - 1]
    }

    pub fn check<T: Int>(&self, seq: &BlockSequence<T>) -> Result<()> {
        if self.positives.len() != seq.len() {
            return Err(Error::BadDecoration(format!(
                "{} counts for {} blocks",
                self.positives.len(),
                seq.len()
            )));
        }
        for (k, (&c, len)) in self.positives.iter().zip(seq.lengths()).enumerate() {
            if c > len {
                return Err(Error::BadDecoration(format!(
                    "C_{} has {len} slices, not {c}",
                    k + 1
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConsistencyLevel {
    FullyConsistent,
    Inconsistent(usize),
}

impl ConsistencyLevel {
    pub fn inconsistent_at(self) -> Option<usize> {
        match self {
            ConsistencyLevel::FullyConsistent => None,
            ConsistencyLevel::Inconsistent(j) => Some(j),
        }
    }
}

impl Serialize for ConsistencyLevel {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ConsistencyLevel::FullyConsistent => ser.serialize_str("consistent"),
            ConsistencyLevel::Inconsistent(j) => {
                use serde::ser::SerializeMap;
                let mut m = ser.serialize_map(Some(1))?;
                m.serialize_entry("inconsistent", j)?;
                m.end()
            }
        }
    }
}

/// All decorations in lexicographic order of `positives`.
pub fn enumerate<T: Int>(seq: &BlockSequence<T>) -> Decorations {
    Decorations {
        lengths: seq.lengths(),
        next: Some(vec![0; seq.len()]),
    }
}

pub struct Decorations {
    lengths: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Iterator for Decorations {
    type Item = Decoration;

    fn next(&mut self) -> Option<Decoration> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        for i in (0..succ.len()).rev() {
            if succ[i] < self.lengths[i] {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(Decoration { positives: cur })
    }
}

/// `prod (|C_k| + 1)`.
pub fn count<T: Int>(seq: &BlockSequence<T>) -> Result<T> {
    let factors = seq
        .lengths()
        .into_iter()
        .map(|l| s::lift_usize::<T>(l + 1))
        .collect::<Result<Vec<_>>>()?;
    s::product(&factors)
}

/// The common sign of `C_k` if it is monochrome.
pub fn block_sign<T: Int>(seq: &BlockSequence<T>, dec: &Decoration, k: usize) -> Option<Sign> {
    let c = dec.positive(k);
    if c == 0 {
        Some(Sign::Negative)
    } else if c == seq.block(k).len() {
        Some(Sign::Positive)
    } else {
        None
    }
}

/// Least `j` such that `C_1..C_j` are not all monochrome of one sign.
pub fn consistency_level<T: Int>(
    seq: &BlockSequence<T>,
    dec: &Decoration,
) -> Result<ConsistencyLevel> {
    dec.check(seq)?;
    let first = block_sign(seq, dec, 1).expect("C_1 has length 1");
    for k in 2..=seq.len() {
        if block_sign(seq, dec, k) != Some(first) {
            return Ok(ConsistencyLevel::Inconsistent(k));
        }
    }
    Ok(ConsistencyLevel::FullyConsistent)
}

/// A-blocks up to `k` monochrome of one sign, B-blocks up to `k` of the other.
pub fn is_totally_k_inconsistent<T: Int>(
    seq: &BlockSequence<T>,
    dec: &Decoration,
    k: usize,
) -> Result<bool> {
    dec.check(seq)?;
    if k < 2 || k > seq.len() {
        return Err(Error::KOutOfRange { k, n: seq.len() });
    }
    let mut a = None;
    let mut b = None;
    for j in 1..=k {
        let Some(sign) = block_sign(seq, dec, j) else {
            return Ok(false);
        };
        let slot = match seq.block(j).side() {
            PathSide::P1 => &mut a,
            PathSide::P2 => &mut b,
        };
        if *slot.get_or_insert(sign) != sign {
            return Ok(false);
        }
    }
    Ok(matches!((a, b), (Some(x), Some(y)) if x != y))
}

pub fn negate<T: Int>(seq: &BlockSequence<T>, dec: &Decoration) -> Decoration {
    let positives = dec
        .positives
        .iter()
        .zip(seq.lengths())
        .map(|(&c, len)| len - c)
        .collect();
    Decoration { positives }
}

/// Per-block edge signs in path order, positives first.
pub fn edge_signs<T: Int>(seq: &BlockSequence<T>, dec: &Decoration) -> Vec<Vec<Sign>> {
    seq.blocks()
        .iter()
        .zip(&dec.positives)
        .map(|(b, &c)| {
            (0..b.len())
                .map(|i| {
                    if i < c {
                        Sign::Positive
                    } else {
                        Sign::Negative
                    }
                })
                .collect()
        })
        .collect()
}

/// `m_k = |C_k| prod_{r > k} (|C_r| + 1)`, `m_N = |C_N|`, for `k = 2..=N`.
pub fn m_closed_form<T: Int>(seq: &BlockSequence<T>) -> Result<Vec<T>> {
    let lens = seq.lengths();
    let mut out = Vec::with_capacity(lens.len().saturating_sub(1));
    for k in 2..=lens.len() {
        let mut m = s::lift_usize::<T>(lens[k - 1])?;
        for &l in &lens[k..] {
            m = s::mul(&m, &s::lift_usize(l + 1)?)?;
        }
        out.push(m);
    }
    Ok(out)
}

/// Half the number of `j`-inconsistent decorations, `j = 2..=N`, checked
/// against the closed form.
pub fn m_values<T: Int>(seq: &BlockSequence<T>) -> Result<Vec<T>> {
    let n = seq.len();
    let mut by_level = vec![0usize; n + 1];
    let mut consistent = 0usize;
    for dec in enumerate(seq) {
        match consistency_level(seq, &dec)? {
            ConsistencyLevel::FullyConsistent => consistent += 1,
            ConsistencyLevel::Inconsistent(j) => by_level[j] += 1,
        }
    }
    if consistent != 2 {
        return Err(Error::Construction(format!(
            "{consistent} fully consistent decorations"
        )));
    }
    let closed = m_closed_form(seq)?;
    let mut out = Vec::with_capacity(n - 1);
    for j in 2..=n {
        if !by_level[j].is_multiple_of(2) {
            return Err(Error::Construction(format!(
                "odd number of {j}-inconsistent decorations"
            )));
        }
        let m = s::lift_usize::<T>(by_level[j] / 2)?;
        if m != closed[j - 2] {
            return Err(Error::Construction(format!(
                "m_{j} = {m} but closed form gives {}",
                closed[j - 2]
            )));
        }
        out.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::TorusKnot;

    fn seq(p: i64, q: i64) -> BlockSequence<i64> {
        BlockSequence::new(&TorusKnot::from_i64(p, q).unwrap()).unwrap()
    }

    fn dec(c: &BlockSequence<i64>, v: &[usize]) -> Decoration {
        Decoration::new(c, v.to_vec()).unwrap()
    }

    // oracle: expand every raw per-edge sign vector, read the level off the
    // signs directly, and collapse by sorting signs inside blocks
    fn raw_levels(c: &BlockSequence<i64>) -> std::collections::BTreeMap<Vec<usize>, Option<usize>> {
        let lens = c.lengths();
        let edges: usize = lens.iter().sum();
        let mut out = std::collections::BTreeMap::new();
        for mask in 0u64..(1 << edges) {
            let mut bit = 0;
            let mut blocks = Vec::new();
            for &l in &lens {
                blocks.push(
                    (0..l)
                        .map(|i| mask >> (bit + i) & 1 == 1)
                        .collect::<Vec<_>>(),
                );
                bit += l;
            }
            let first = blocks[0][0];
            let level = (1..blocks.len())
                .find(|&j| blocks[j].iter().any(|&x| x != first))
                .map(|j| j + 1);
            let key: Vec<usize> = blocks
                .iter()
                .map(|b| b.iter().filter(|&&x| x).count())
                .collect();
            if let Some(prev) = out.insert(key, level) {
                assert_eq!(prev, level);
            }
        }
        out
    }

    #[test]
    fn counts_match_raw_oracle() {
        for (p, q) in [(1, -3), (7, -16), (3, -11), (2, -7), (1, -2)] {
            let c = seq(p, q);
            let oracle = raw_levels(&c);
            let all: Vec<_> = enumerate(&c).collect();
            assert_eq!(all.len(), oracle.len());
            for d in &all {
                let lvl = consistency_level(&c, d).unwrap().inconsistent_at();
                assert_eq!(lvl, oracle[d.positives()]);
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate(&seq(1, -3)).count(), 6);
        assert_eq!(enumerate(&seq(7, -16)).count(), 48);
        assert_eq!(count(&seq(7, -16)).unwrap(), 48);
        let first: Vec<_> = enumerate(&seq(1, -3))
            .take(3)
            .map(|d| d.positives().to_vec())
            .collect();
        assert_eq!(first, vec![vec![0, 0], vec![0, 1], vec![0, 2]]);
    }

    #[test]
    fn level_examples() {
        let c = seq(1, -3);
        assert_eq!(
            consistency_level(&c, &dec(&c, &[1, 2])).unwrap(),
            ConsistencyLevel::FullyConsistent
        );
        assert_eq!(
            consistency_level(&c, &dec(&c, &[0, 2])).unwrap(),
            ConsistencyLevel::Inconsistent(2)
        );
        let c = seq(7, -16);
        assert_eq!(
            consistency_level(&c, &dec(&c, &[1, 2, 2, 1])).unwrap(),
            ConsistencyLevel::Inconsistent(3)
        );
    }

    #[test]
    fn totally_inconsistent_examples() {
        let c = seq(1, -3);
        assert!(is_totally_k_inconsistent(&c, &dec(&c, &[0, 2]), 2).unwrap());
        assert!(!is_totally_k_inconsistent(&c, &dec(&c, &[0, 1]), 2).unwrap());
        assert_eq!(
            is_totally_k_inconsistent(&c, &dec(&c, &[0, 1]), 3),
            Err(Error::KOutOfRange { k: 3, n: 2 })
        );
        let c = seq(7, -16);
        let n = enumerate(&c)
            .filter(|d| is_totally_k_inconsistent(&c, d, 2).unwrap())
            .count();
        assert_eq!(n, 16);
    }

    #[test]
    fn m_values_examples() {
        assert_eq!(m_values(&seq(7, -16)).unwrap(), vec![16, 6, 1]);
        for q in -12..=-2 {
            assert_eq!(m_values(&seq(1, q)).unwrap(), vec![-q - 1]);
        }
    }

    #[test]
    fn negate_examples() {
        let c = seq(1, -3);
        assert_eq!(negate(&c, &dec(&c, &[0, 2])).positives(), &[1, 0]);
        for d in enumerate(&seq(7, -16)) {
            let c = seq(7, -16);
            let n = negate(&c, &d);
            assert_eq!(negate(&c, &n), d);
            assert_eq!(
                consistency_level(&c, &n).unwrap(),
                consistency_level(&c, &d).unwrap()
            );
            for k in 2..=c.len() {
                assert_eq!(
                    is_totally_k_inconsistent(&c, &n, k),
                    is_totally_k_inconsistent(&c, &d, k)
                );
            }
        }
    }

    #[test]
    fn bad_decorations() {
        let c = seq(1, -3);
        assert!(Decoration::new(&c, vec![0, 3]).is_err());
        assert!(Decoration::new(&c, vec![0]).is_err());
    }

    #[test]
    fn level_json() {
        assert_eq!(
            serde_json::to_string(&ConsistencyLevel::FullyConsistent).unwrap(),
            "\"consistent\""
        );
        assert_eq!(
            serde_json::to_string(&ConsistencyLevel::Inconsistent(3)).unwrap(),
            "{\"inconsistent\":3}"
        );
        let c = seq(1, -3);
        assert_eq!(
            serde_json::to_string(&dec(&c, &[0, 2])).unwrap(),
            "{\"positives\":[0,2]}"
        );
    }
}
