//! The Farey path pair `(P1, P2)` of `q/p`, its continued fraction blocks,
//! and their interleaving `C_1, ..., C_N`.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::farey::{eval_entries, Slope};
use crate::knot::TorusKnot;
use crate::scalar::{self as s, Int};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PathSide {
    P1,
    P2,
}

impl PathSide {
    /// Blocks on `P1` are the `A_i`, on `P2` the `B_i`.
    pub fn letter(self) -> char {
        match self {
            PathSide::P1 => 'A',
            PathSide::P2 => 'B',
        }
    }

    pub fn other(self) -> Self {
        match self {
            PathSide::P1 => PathSide::P2,
            PathSide::P2 => PathSide::P1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FareyPath<T: Int> {
    side: PathSide,
    vertices: Vec<Slope<T>>,
}

impl<T: Int> FareyPath<T> {
    pub fn side(&self) -> PathSide {
        self.side
    }

    pub fn vertices(&self) -> &[Slope<T>] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block<T: Int> {
    side: PathSide,
    index: usize,
    vertices: Vec<Slope<T>>,
}

impl<T: Int> Block<T> {
    pub fn side(&self) -> PathSide {
        self.side
    }

    /// Position in the interleaved sequence, 1-based; 0 before interleaving.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn vertices(&self) -> &[Slope<T>] {
        &self.vertices
    }

    /// Number of edges, i.e. basic slices.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The vertex farthest from `q/p`.
    pub fn farthest(&self) -> &Slope<T> {
        self.vertices.last().expect("blocks have at least one edge")
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.side.letter(), self.index)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Slope<T>, &Slope<T>)> {
        self.vertices.windows(2).map(|w| (&w[0], &w[1]))
    }
}

fn check_slope<T: Int>(s: &Slope<T>) -> Result<()> {
    if s.is_infinite() || *s.num() >= s::neg(s.den())? {
        return Err(Error::InvalidSlope(s.to_string()));
    }
    Ok(())
}

/// Drop the last continued fraction entry until nothing is left.
pub fn build_p1<T: Int>(slope: &Slope<T>) -> Result<FareyPath<T>> {
    check_slope(slope)?;
    let cf = slope.cf_expand()?;
    let entries = cf.entries();
    let vertices = (0..=entries.len())
        .rev()
        .map(|j| eval_entries(&entries[..j]))
        .collect::<Result<_>>()?;
    Ok(FareyPath {
        side: PathSide::P1,
        vertices,
    })
}

/// Increment the last entry, folding a trailing `-1` into its predecessor,
/// until the expansion is `[-1]`.
pub fn build_p2<T: Int>(slope: &Slope<T>) -> Result<FareyPath<T>> {
    check_slope(slope)?;
    let mut entries = slope.cf_expand()?.entries().to_vec();
    let minus_one = -T::one();
    let mut vertices = vec![eval_entries(&entries)?];
    while !(entries.len() == 1 && entries[0] == minus_one) {
        let last = entries.last_mut().expect("non-empty");
        *last = s::add(last, &T::one())?;
        while entries.len() > 1 && entries[entries.len() - 1] == minus_one {
            entries.pop();
            let last = entries.last_mut().expect("non-empty");
            *last = s::add(last, &T::one())?;
        }
        vertices.push(eval_entries(&entries)?);
    }
    Ok(FareyPath {
        side: PathSide::P2,
        vertices,
    })
}

/// Consecutive edges `(u,v), (v,w)` share a block iff `|u . w| = 2`.
pub fn subdivide<T: Int>(path: &FareyPath<T>) -> Result<Vec<Block<T>>> {
    let v = &path.vertices;
    let two = s::lift::<T>(2)?;
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 1..v.len() - 1 {
        if s::abs(&v[i - 1].dot(&v[i + 1])?)? != two {
            blocks.push(Block {
                side: path.side,
                index: 0,
                vertices: v[start..=i].to_vec(),
            });
            start = i;
        }
    }
    blocks.push(Block {
        side: path.side,
        index: 0,
        vertices: v[start..].to_vec(),
    });
    Ok(blocks)
}

/// Interleaved blocks `C_1..C_N` of `q/p` with `s_k` and `n_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSequence<T: Int> {
    knot: TorusKnot<T>,
    p1: FareyPath<T>,
    p2: FareyPath<T>,
    blocks: Vec<Block<T>>,
    n_values: Vec<T>,
}

impl<T: Int> BlockSequence<T> {
    pub fn new(knot: &TorusKnot<T>) -> Result<Self> {
        let slope = knot.slope();
        let p1 = build_p1(&slope)?;
        let p2 = build_p2(&slope)?;
        let b1 = subdivide(&p1)?;
        let b2 = subdivide(&p2)?;
        let blocks = interleave(b1, b2)?;
        let mut seq = BlockSequence {
            knot: knot.clone(),
            p1,
            p2,
            blocks,
            n_values: Vec::new(),
        };
        seq.validate_paths()?;
        seq.validate_basing()?;
        seq.n_values = compute_n_values(&seq)?;
        Ok(seq)
    }

    pub fn knot(&self) -> &TorusKnot<T> {
        &self.knot
    }

    pub fn slope(&self) -> Slope<T> {
        self.knot.slope()
    }

    pub fn p1(&self) -> &FareyPath<T> {
        &self.p1
    }

    pub fn p2(&self) -> &FareyPath<T> {
        &self.p2
    }

    pub fn blocks(&self) -> &[Block<T>] {
        &self.blocks
    }

    /// `C_k`, 1-based.
    pub fn block(&self, k: usize) -> &Block<T> {
        &self.blocks[k - 1]
    }

    /// `N`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.blocks.iter().map(Block::len).collect()
    }

    /// `s_k`, 1-based.
    pub fn farthest(&self, k: usize) -> &Slope<T> {
        self.block(k).farthest()
    }

    /// `n_0, n_1, ..., n_N`.
    pub fn n_values(&self) -> &[T] {
        &self.n_values
    }

    /// `n_k` for `0 <= k <= N`.
    pub fn n(&self, k: usize) -> &T {
        &self.n_values[k]
    }

    pub fn side_blocks(&self, side: PathSide) -> impl Iterator<Item = &Block<T>> {
        self.blocks.iter().filter(move |b| b.side == side)
    }

    fn validate_paths(&self) -> Result<()> {
        let slope = self.slope();
        for path in [&self.p1, &self.p2] {
            let v = &path.vertices;
            if v[0] != slope {
                return Err(Error::Construction(format!(
                    "{:?} does not start at {slope}",
                    path.side
                )));
            }
            for w in v.windows(2) {
                if !w[0].is_edge(&w[1])? {
                    return Err(Error::Construction(format!(
                        "{} and {} are not adjacent",
                        w[0], w[1]
                    )));
                }
            }
            // numerators strictly increase; infinity's -1 counts as the top
            for w in v.windows(2) {
                if w[1].num() <= w[0].num() {
                    return Err(Error::Construction(format!(
                        "{:?} numerators not increasing at {} -> {}",
                        path.side, w[0], w[1]
                    )));
                }
            }
        }
        if !self.p1.vertices.last().expect("non-empty").is_infinite() {
            return Err(Error::Construction("P1 does not end at infinity".into()));
        }
        if *self.p2.vertices.last().expect("non-empty") != Slope::integer(-T::one()) {
            return Err(Error::Construction("P2 does not end at -1".into()));
        }
        if self.p1.vertices[1] != slope.neighbor_acw()?
            || self.p2.vertices[1] != slope.neighbor_cw()?
        {
            return Err(Error::Construction(
                "second path vertices are not the Farey neighbours".into(),
            ));
        }
        let total: usize = self.lengths().iter().sum();
        if total != self.p1.edge_count() + self.p2.edge_count() {
            return Err(Error::Construction("blocks do not cover the paths".into()));
        }
        Ok(())
    }

    /// Every edge `(u, v)` of `C_k`, `k >= 2`, has `u ⊖ v = ±s_{k-1}`.
    fn validate_basing(&self) -> Result<()> {
        for k in 2..=self.len() {
            let base = self.farthest(k - 1);
            for (u, v) in self.block(k).edges() {
                let d = u.farey_diff(v)?;
                let same = d.num == *base.num() && d.den == *base.den();
                let flipped = s::neg(&d.num)? == *base.num() && s::neg(&d.den)? == *base.den();
                if !(same || flipped) {
                    return Err(Error::Construction(format!(
                        "edge {u} -> {v} of C_{k} is not based at {base}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Put the length-1 first block at index 1 (`P1` on a tie) and alternate.
pub fn interleave<T: Int>(
    p1_blocks: Vec<Block<T>>,
    p2_blocks: Vec<Block<T>>,
) -> Result<Vec<Block<T>>> {
    let first = match (
        p1_blocks.first().map(Block::len),
        p2_blocks.first().map(Block::len),
    ) {
        (Some(1), _) => PathSide::P1,
        (_, Some(1)) => PathSide::P2,
        _ => {
            return Err(Error::Construction(
                "neither first block has length 1".into(),
            ))
        }
    };
    let (lead, trail) = match first {
        PathSide::P1 => (p1_blocks, p2_blocks),
        PathSide::P2 => (p2_blocks, p1_blocks),
    };
    if lead.len() != trail.len() && lead.len() != trail.len() + 1 {
        return Err(Error::Construction(format!(
            "cannot alternate {} and {} blocks",
            lead.len(),
            trail.len()
        )));
    }
    let mut out = Vec::with_capacity(lead.len() + trail.len());
    let mut trail = trail.into_iter();
    for b in lead {
        out.push(b);
        out.extend(trail.next());
    }
    for (i, b) in out.iter_mut().enumerate() {
        b.index = i + 1;
    }
    Ok(out)
}

/// `n_0 = 0`, `n_k = |s_k . q/p|`, checked against `n_k = |C_k| n_{k-1} + n_{k-2}`.
pub fn compute_n_values<T: Int>(seq: &BlockSequence<T>) -> Result<Vec<T>> {
    let slope = seq.slope();
    let mut n = vec![T::zero()];
    for k in 1..=seq.len() {
        n.push(s::abs(&seq.farthest(k).dot(&slope)?)?);
    }
    if !n[1].is_one() {
        return Err(Error::Construction(format!("n_1 = {}", n[1])));
    }
    for k in 2..=seq.len() {
        let len = s::lift_usize::<T>(seq.block(k).len())?;
        let expect = s::add(&s::mul(&len, &n[k - 1])?, &n[k - 2])?;
        if expect != n[k] {
            return Err(Error::Construction(format!(
                "n-recurrence fails at k = {k}: {} != {expect}",
                n[k]
            )));
        }
    }
    Ok(n)
}

impl<T: Int> Serialize for BlockSequence<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(bound = "")]
        struct B<'a, T: Int> {
            index: usize,
            side: PathSide,
            label: String,
            length: usize,
            vertices: &'a [Slope<T>],
            farthest: &'a Slope<T>,
        }
        let blocks: Vec<_> = self
            .blocks
            .iter()
            .map(|b| B {
                index: b.index,
                side: b.side,
                label: b.label(),
                length: b.len(),
                vertices: &b.vertices,
                farthest: b.farthest(),
            })
            .collect();
        let mut st = ser.serialize_struct("BlockSequence", 3)?;
        st.serialize_field("slope", &self.slope())?;
        st.serialize_field("blocks", &blocks)?;
        st.serialize_field("n_values", &crate::scalar::json::IntSlice(&self.n_values))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = Slope<i64>;

    fn sl(n: i64, d: i64) -> S {
        S::from_i64(n, d).unwrap()
    }

    fn seq(p: i64, q: i64) -> BlockSequence<i64> {
        BlockSequence::new(&TorusKnot::from_i64(p, q).unwrap()).unwrap()
    }

    #[test]
    fn p1_examples() {
        let v = build_p1(&sl(-16, 7)).unwrap().vertices;
        assert_eq!(
            v,
            vec![sl(-16, 7), sl(-7, 3), sl(-5, 2), sl(-3, 1), S::infinity()]
        );
        assert_eq!(
            build_p1(&sl(-5, 1)).unwrap().vertices,
            vec![sl(-5, 1), S::infinity()]
        );
        assert_eq!(
            build_p1(&sl(-3, 2)).unwrap().vertices,
            vec![sl(-3, 2), sl(-2, 1), S::infinity()]
        );
    }

    #[test]
    fn p2_examples() {
        let v = build_p2(&sl(-16, 7)).unwrap().vertices;
        assert_eq!(v, vec![sl(-16, 7), sl(-9, 4), sl(-2, 1), sl(-1, 1)]);
        let v = build_p2(&sl(-5, 1)).unwrap().vertices;
        assert_eq!(v, (-5..=-1).map(|q| sl(q, 1)).collect::<Vec<_>>());
        assert_eq!(
            build_p2(&sl(-2, 1)).unwrap().vertices,
            vec![sl(-2, 1), sl(-1, 1)]
        );
    }

    #[test]
    fn invalid_slopes_rejected() {
        assert!(matches!(build_p1(&sl(-1, 2)), Err(Error::InvalidSlope(_))));
        assert!(matches!(
            build_p2(&S::infinity()),
            Err(Error::InvalidSlope(_))
        ));
    }

    #[test]
    fn subdivision_examples() {
        let lens = |p: FareyPath<i64>| {
            subdivide(&p)
                .unwrap()
                .iter()
                .map(Block::len)
                .collect::<Vec<_>>()
        };
        assert_eq!(lens(build_p1(&sl(-16, 7)).unwrap()), vec![1, 3]);
        assert_eq!(lens(build_p2(&sl(-16, 7)).unwrap()), vec![2, 1]);
        assert_eq!(lens(build_p2(&sl(-9, 1)).unwrap()), vec![8]);
    }

    #[test]
    fn interleaving_of_7_16() {
        let c = seq(7, -16);
        assert_eq!(c.lengths(), vec![1, 2, 3, 1]);
        assert_eq!(c.block(1).side(), PathSide::P1);
        let labels: Vec<_> = c.blocks().iter().map(Block::label).collect();
        assert_eq!(labels, vec!["A1", "B2", "A3", "B4"]);
        assert_eq!(&c.n_values()[1..], &[1, 2, 7, 9]);
        assert_eq!(c.n(0), &0);
    }

    #[test]
    fn interleaving_p_equal_one() {
        for q in -12..=-2 {
            let c = seq(1, q);
            assert_eq!(c.lengths(), vec![1, (-q - 1) as usize]);
            assert_eq!(c.block(1).side(), PathSide::P1);
            assert_eq!(&c.n_values()[1..], &[1, -q - 1]);
        }
    }

    #[test]
    fn minus_two_ties_to_p1() {
        let c = seq(1, -2);
        assert_eq!(c.lengths(), vec![1, 1]);
        assert_eq!(c.block(1).side(), PathSide::P1);
    }

    // C_1 sits on P1 exactly when the last entry of q/p is below -2, or q/p = -2
    #[test]
    fn first_block_side_follows_last_entry() {
        for q in -30..=-2i64 {
            for p in 1..-q {
                if num_integer::Integer::gcd(&p, &q) != 1 {
                    continue;
                }
                let c = seq(p, q);
                let am = *c.knot().a_expansion().unwrap().last().unwrap();
                let on_p1 = c.block(1).side() == PathSide::P1;
                assert_eq!(on_p1, am < -2 || (p, q) == (1, -2), "({p},{q})");
            }
        }
    }

    #[test]
    fn json_shape() {
        let c = seq(1, -3);
        let v: serde_json::Value = serde_json::to_value(&c).unwrap();
        assert_eq!(v["slope"], "-3/1");
        assert_eq!(
            v["blocks"][0]["vertices"],
            serde_json::json!(["-3/1", "inf"])
        );
        assert_eq!(v["blocks"][1]["side"], "P2");
        assert_eq!(v["blocks"][1]["farthest"], "-1/1");
        assert_eq!(v["n_values"], serde_json::json!([0, 1, 2]));
    }
}
