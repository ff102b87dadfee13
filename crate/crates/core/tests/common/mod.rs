//! Property checks shared by the proptest suite and the acceptance runner.
#![allow(dead_code)]

use contact_atlas::decor::{self, Decoration};
use contact_atlas::euler;
use contact_atlas::scalar::Int;
use contact_atlas::surgery::smith_normal_form;
use contact_atlas::Slope;
use contact_atlas::{BigMatrix, Matrix};
use contact_atlas::{BlockSequence, PathSide, TorusKnot};
use num_bigint::BigInt;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

/// Every `(p, q)` with `-q > p > 0`, `gcd = 1`, `2 <= -q <= max`.
pub fn knots(max: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for q in (-max..=-2).rev() {
        for p in 1..-q {
            if num_integer::gcd(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

pub fn seq(p: i64, q: i64) -> BlockSequence {
    BlockSequence::new(&TorusKnot::from_i64(p, q).unwrap()).unwrap()
}

/// Text, continued fraction and neighbour round trips of `num/den`.
pub fn farey_round_trip(num: i64, den: i64) -> Check {
    let s = Slope::from_i64(num, den).map_err(e)?;
    let back: Slope = s.to_string().parse().map_err(e)?;
    ensure!(back == s, "{s} reparsed as {back}");
    let json = serde_json::to_string(&s).map_err(e)?;
    let back: Slope = serde_json::from_str(&json).map_err(e)?;
    ensure!(back == s, "{s} json round trip gave {back}");

    let cw = s.neighbor_cw().map_err(e)?;
    let acw = s.neighbor_acw().map_err(e)?;
    ensure!(
        s.dot(&cw).map_err(e)?.abs() == 1,
        "{s} not adjacent to cw {cw}"
    );
    ensure!(
        s.dot(&acw).map_err(e)?.abs() == 1,
        "{s} not adjacent to acw {acw}"
    );
    if *s.den() > 1 {
        ensure!(cw.farey_sum(&acw).map_err(e)? == s, "{cw} + {acw} != {s}");
        ensure!(
            *cw.den() < *s.den() && *acw.den() < *s.den(),
            "neighbours of {s} are not parents"
        );
    }
    if *s.num() < -*s.den() {
        let cf = s.cf_expand().map_err(e)?;
        ensure!(cf.entries().iter().all(|&a| a <= -2), "{s} expands to {cf}");
        ensure!(cf.eval().map_err(e)? == s, "{cf} does not evaluate to {s}");
        let text = cf.to_string();
        let reparsed: contact_atlas::CFrac = text.parse().map_err(e)?;
        ensure!(reparsed == cf, "{text} reparsed differently");
    }
    Ok(())
}

/// Path endpoints, edges, block shape and the basing property.
pub fn path_invariants(p: i64, q: i64) -> Check {
    let knot = TorusKnot::from_i64(p, q).map_err(e)?;
    let c = BlockSequence::new(&knot).map_err(e)?;
    let slope = knot.slope();
    for (path, end) in [(c.p1(), Slope::infinity()), (c.p2(), Slope::integer(-1))] {
        let v = path.vertices();
        ensure!(v[0] == slope, "path does not start at {slope}");
        ensure!(
            *v.last().unwrap() == end,
            "path ends at {}",
            v.last().unwrap()
        );
        for w in v.windows(2) {
            ensure!(
                w[0].is_edge(&w[1]).map_err(e)?,
                "{} -> {} is not an edge",
                w[0],
                w[1]
            );
        }
        for w in v.windows(3) {
            ensure!(w[0] != w[2], "path backtracks at {}", w[1]);
        }
    }
    let blocks = c.blocks();
    ensure!(
        blocks[0].len() == 1,
        "first block has length {}",
        blocks[0].len()
    );
    for w in blocks.windows(2) {
        ensure!(
            w[0].side() != w[1].side(),
            "blocks {} and {} on one side",
            w[0].index(),
            w[1].index()
        );
    }
    for side in [PathSide::P1, PathSide::P2] {
        let edges: usize = blocks
            .iter()
            .filter(|b| b.side() == side)
            .map(|b| b.len())
            .sum();
        let path = if side == PathSide::P1 { c.p1() } else { c.p2() };
        ensure!(
            edges == path.edge_count(),
            "{side:?} blocks cover {edges} of {} edges",
            path.edge_count()
        );
    }
    let n = c.n_values();
    for k in 1..=c.len() {
        let want = c.farthest(k).dot(&slope).map_err(e)?.abs();
        ensure!(n[k] == want, "n_{k} = {} but |s_k . q/p| = {want}", n[k]);
        ensure!(k == 1 || n[k] >= n[k - 1], "n values decrease at {k}");
    }
    Ok(())
}

/// `e(-d) = -e(d)` and negation keeps the consistency level.
pub fn negate_antisymmetry(c: &BlockSequence, d: &Decoration) -> Check {
    let nd = decor::negate(c, d);
    let a = euler::euler_class(c, d).map_err(e)?;
    let b = euler::euler_class(c, &nd).map_err(e)?;
    ensure!(a == -b, "e({d:?}) = {a} but e(-d) = {b}");
    ensure!(decor::negate(c, &nd) == *d, "negation is not an involution");
    let la = decor::consistency_level(c, d).map_err(e)?;
    let lb = decor::consistency_level(c, &nd).map_err(e)?;
    ensure!(la == lb, "levels {la:?} and {lb:?} differ under negation");
    Ok(())
}

/// `U A V = D` with `U`, `V` unimodular and `D` in Smith form.
pub fn snf_unimodular<T: Int>(a: &contact_atlas::surgery::Matrix<T>) -> Check {
    let zero = T::zero();
    let one = T::one();
    let sm = smith_normal_form(a).map_err(e)?;
    let prod = sm.u.mul(a).map_err(e)?.mul(&sm.v).map_err(e)?;
    ensure!(prod == sm.d, "U A V != D for\n{a}");
    ensure!(sm.u.det().map_err(e)?.abs() == one, "U is not unimodular");
    ensure!(sm.v.det().map_err(e)?.abs() == one, "V is not unimodular");
    for i in 0..sm.d.rows() {
        for j in 0..sm.d.cols() {
            ensure!(
                i == j || sm.d[(i, j)] == zero,
                "D has an off-diagonal entry at ({i},{j})"
            );
        }
    }
    let diag = sm.diagonal();
    ensure!(
        diag.iter().all(|x| !x.is_negative()),
        "negative invariant factor {diag:?}"
    );
    for w in diag.windows(2) {
        let ok = if w[0].is_zero() {
            w[1].is_zero()
        } else {
            w[1].is_multiple_of(&w[0])
        };
        ensure!(ok, "{} does not divide {}", w[0], w[1]);
    }
    if a.is_square() {
        ensure!(
            a.det().map_err(e)?.abs() == diag.iter().fold(one.clone(), |acc, x| acc * x.clone()),
            "|det A| differs from the product of invariant factors"
        );
    }
    Ok(())
}

/// The same matrix over `BigInt`, where transforms cannot overflow.
pub fn widen(a: &Matrix) -> BigMatrix {
    BigMatrix::from_rows(
        a.to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect(),
    )
    .unwrap()
}
