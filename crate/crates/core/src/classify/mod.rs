//! Counts, censuses and mountain ranges of non-loose torus knots.

mod census;
mod report;
mod torsion;

use num_rational::Ratio;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub use census::{
    legendrian_census, mountain_range, transverse_census, CensusRange, LegendrianRecord,
    MountainRange, PairComponent, Target, TransverseRecord,
};
pub use report::{classify, ClassificationReport, EulerSupportTable, TIGHT_ANNOTATION};
pub use torsion::Torsion;

use crate::decor;
use crate::error::{Error, Result};
use crate::euler;
use crate::farey::CFrac;
use crate::knot::TorusKnot;
use crate::paths::BlockSequence;
use crate::scalar::{self as s, Int};
use crate::surgery::ratio;

/// The representative `(p', q)` with `-q > p' > 0` and `p' ≡ ±p (mod 2q)`.
pub fn normalize<T: Int>(p: T, q: T) -> Result<TorusKnot<T>> {
    if !q.is_negative() {
        return Err(Error::PositiveQ(q.to_string()));
    }
    if !p.gcd(&q).is_one() {
        return Err(Error::NotCoprime(p.to_string(), q.to_string()));
    }
    let aq = s::neg(&q)?;
    if aq.is_one() {
        return Err(Error::CannotBeNonLoose(p.to_string(), q.to_string()));
    }
    let modulus = s::add(&aq, &aq)?;
    let r = p.mod_floor(&modulus);
    let candidates = [r.clone(), s::sub(&modulus, &r)?];
    let p1 = candidates
        .into_iter()
        .find(|c| c.is_positive() && *c < aq)
        .ok_or_else(|| Error::NoRepresentative(p.to_string(), q.to_string()))?;
    TorusKnot::new(p1, q)
}

/// `|prod_{i<last} (a_i + 1) * last|`, with `last` either `a_m` or `a_m + 1`,
/// or omitted entirely.
fn cf_product<T: Int>(cf: &CFrac<T>, last: Last) -> Result<T> {
    let entries = cf.entries();
    let (tail, head) = entries.split_last().expect("non-empty expansion");
    let mut acc = T::one();
    for a in head {
        acc = s::mul(&acc, &s::add(a, &T::one())?)?;
    }
    acc = match last {
        Last::Entry => s::mul(&acc, tail)?,
        Last::Incremented => s::mul(&acc, &s::add(tail, &T::one())?)?,
        Last::Omitted => acc,
    };
    s::abs(&acc)
}

#[derive(Clone, Copy)]
enum Last {
    Entry,
    Incremented,
    Omitted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counts<T: Int> {
    pub m: T,
    pub n: T,
    pub l: T,
    pub t: T,
    pub k_e: T,
    pub big_n: usize,
    pub block_lengths: Vec<usize>,
    /// `n_1, ..., n_N`.
    pub n_values: Vec<T>,
    /// `m_2, ..., m_N`.
    pub m_values: Vec<T>,
}

impl<T: Int> Counts<T> {
    /// `m_k`, zero beyond `N`.
    pub fn m_k(&self, k: usize) -> T {
        self.m_values
            .get(k.wrapping_sub(2))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    /// Number of pairs of wings at level `k`, `m_k - m_{k+1}`.
    pub fn wings_at(&self, k: usize) -> Result<T> {
        s::sub(&self.m_k(k), &self.m_k(k + 1))
    }
}

impl<T: Int> Serialize for Counts<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::scalar::json::{IntSlice, Wrap};
        let mut st = ser.serialize_struct("Counts", 9)?;
        st.serialize_field("m", &Wrap(&self.m))?;
        st.serialize_field("n", &Wrap(&self.n))?;
        st.serialize_field("l", &Wrap(&self.l))?;
        st.serialize_field("t", &Wrap(&self.t))?;
        st.serialize_field("k_e", &Wrap(&self.k_e))?;
        st.serialize_field("N", &self.big_n)?;
        st.serialize_field("block_lengths", &self.block_lengths)?;
        st.serialize_field("n_values", &IntSlice(&self.n_values))?;
        st.serialize_field("m_values", &IntSlice(&self.m_values))?;
        st.end()
    }
}

/// Closed forms from the two continued fractions, checked against the
/// block sequence and a full enumeration of decorations.
pub fn counts<T: Int>(seq: &BlockSequence<T>) -> Result<Counts<T>> {
    let knot = seq.knot();
    let a = knot.a_expansion()?;
    let b = knot.b_expansion()?;
    let m = s::mul(&cf_product(&a, Last::Entry)?, &cf_product(&b, Last::Entry)?)?;
    let n = s::mul(
        &cf_product(&a, Last::Incremented)?,
        &cf_product(&b, Last::Incremented)?,
    )?;
    let l = s::mul(
        &cf_product(&a, Last::Omitted)?,
        &cf_product(&b, Last::Omitted)?,
    )?;

    let fail = |what: String| Err(Error::Construction(what));
    let by_blocks = decor::count(seq)?;
    let enumerated = s::lift_usize::<T>(decor::enumerate(seq).count())?;
    if m != by_blocks || m != enumerated {
        return fail(format!(
            "m = {m}, block product {by_blocks}, enumeration {enumerated}"
        ));
    }
    let m_values = decor::m_values(seq)?;
    if m_values[0] != n {
        return fail(format!("m_2 = {} but n = {n}", m_values[0]));
    }
    let total2 = decor::enumerate(seq)
        .map(|d| decor::is_totally_k_inconsistent(seq, &d, 2))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();
    if s::lift_usize::<T>(total2)? != s::add(&l, &l)? {
        return fail(format!(
            "{total2} totally 2-inconsistent decorations but l = {l}"
        ));
    }
    let sum_m = m_values
        .iter()
        .try_fold(T::zero(), |acc, x| s::add(&acc, x))?;
    if s::add(&s::add(&sum_m, &sum_m)?, &s::lift(2)?)? != m {
        return fail(format!("2 + 2 sum m_j != m = {m}"));
    }
    let mut counts = Counts {
        m,
        n,
        l,
        t: T::zero(),
        k_e: euler::k_e(seq)?,
        big_n: seq.len(),
        block_lengths: seq.lengths(),
        n_values: seq.n_values()[1..].to_vec(),
        m_values,
    };
    let mut t = T::zero();
    let mut wings = T::zero();
    for k in 2..=seq.len() {
        let w = counts.wings_at(k)?;
        t = s::add(&t, &s::mul(&w, seq.n(k - 1))?)?;
        wings = s::add(&wings, &w)?;
    }
    if wings != counts.n {
        return fail(format!("sum of wing pairs {wings} != n = {}", counts.n));
    }
    counts.t = t;
    Ok(counts)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightCounts<T: Int> {
    pub upper_solid: T,
    pub lower_solid: T,
    pub lens_minus: T,
    pub lens_plus: T,
    pub connected_sum: T,
}

impl<T: Int> Serialize for TightCounts<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::scalar::json::Wrap;
        let mut st = ser.serialize_struct("TightCounts", 5)?;
        st.serialize_field("upper_solid", &Wrap(&self.upper_solid))?;
        st.serialize_field("lower_solid", &Wrap(&self.lower_solid))?;
        st.serialize_field("lens_minus", &Wrap(&self.lens_minus))?;
        st.serialize_field("lens_plus", &Wrap(&self.lens_plus))?;
        st.serialize_field("connected_sum", &Wrap(&self.connected_sum))?;
        st.end()
    }
}

/// Tight structures on the two solid tori, the two lens spaces and their
/// connected sum.
pub fn tight_counts<T: Int>(knot: &TorusKnot<T>) -> Result<TightCounts<T>> {
    let a = knot.a_expansion()?;
    let b = knot.b_expansion()?;
    let lens_minus = cf_product(&a, Last::Incremented)?;
    let lens_plus = cf_product(&b, Last::Incremented)?;
    Ok(TightCounts {
        upper_solid: cf_product(&a, Last::Entry)?,
        lower_solid: cf_product(&b, Last::Entry)?,
        connected_sum: s::mul(&lens_minus, &lens_plus)?,
        lens_minus,
        lens_plus,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurgeredManifold<T: Int> {
    /// `M(S^2; r_1, r_2, r_3)`.
    SeifertFibered { invariants: [Ratio<T>; 3] },
    /// `L(a_1, b_1) # L(a_2, b_2)`.
    ConnectedSumLens { summands: [(T, T); 2] },
}

impl<T: Int> std::fmt::Display for SurgeredManifold<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SurgeredManifold::SeifertFibered {
                invariants: [a, b, c],
            } => write!(f, "M(S^2; {a}, {b}, {c})"),
            SurgeredManifold::ConnectedSumLens {
                summands: [(a, b), (c, d)],
            } => {
                write!(f, "L({a}, {b}) # L({c}, {d})")
            }
        }
    }
}

impl<T: Int> Serialize for SurgeredManifold<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::scalar::json::Wrap;
        let mut st = ser.serialize_struct("SurgeredManifold", 3)?;
        match self {
            SurgeredManifold::SeifertFibered { invariants } => {
                st.serialize_field("kind", "SeifertFibered")?;
                let inv: Vec<String> = invariants.iter().map(ToString::to_string).collect();
                st.serialize_field("invariants", &inv)?;
            }
            SurgeredManifold::ConnectedSumLens { summands } => {
                st.serialize_field("kind", "ConnectedSumLens")?;
                let sm: Vec<[Wrap<'_, T>; 2]> =
                    summands.iter().map(|(a, b)| [Wrap(a), Wrap(b)]).collect();
                st.serialize_field("summands", &sm)?;
            }
        }
        st.serialize_field("description", &self.to_string())?;
        st.end()
    }
}

/// The result of `r/s` surgery on the knot's core.
pub fn surgered_manifold<T: Int>(
    knot: &TorusKnot<T>,
    r: T,
    sden: T,
) -> Result<SurgeredManifold<T>> {
    if !r.gcd(&sden).is_one() {
        return Err(Error::NotCoprime(r.to_string(), sden.to_string()));
    }
    let (p, q) = (knot.p().clone(), knot.q().clone());
    if sden.is_zero() {
        return Ok(SurgeredManifold::ConnectedSumLens {
            summands: [(q.clone(), p.clone()), (s::neg(&q)?, p)],
        });
    }
    let q1 = knot.cw()?.num().clone();
    let first = ratio(q1.clone(), q.clone())?;
    let second = ratio(s::neg(&q1)?, q)?;
    let third = ratio(s::neg(&r)?, sden)?;
    Ok(SurgeredManifold::SeifertFibered {
        invariants: [first, second, third],
    })
}
