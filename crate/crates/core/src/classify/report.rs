use std::collections::BTreeMap;

use serde::Serialize;

use super::census::{legendrian_census, mountain_range, transverse_census};
use super::{
    counts, tight_counts, CensusRange, Counts, LegendrianRecord, MountainRange, TightCounts,
    Torsion, TransverseRecord,
};
use crate::error::{Error, Result};
use crate::euler::{euler_support, EulerSupport, Side, TorsionKind};
use crate::knot::TorusKnot;
use crate::paths::BlockSequence;
use crate::scalar::{self as s, Int};

pub const TIGHT_ANNOTATION: &str =
    "the tight structure on S^1 x S^2 carries exactly two further Legendrian realizations with tw = 0; they are not listed";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct EulerSupportTable<T: Int> {
    pub zero: EulerSupport<T>,
    pub integer: EulerSupport<T>,
    pub half_integer: EulerSupport<T>,
}

impl<T: Int> EulerSupportTable<T> {
    pub fn for_torsion(&self, tor: Torsion) -> &EulerSupport<T> {
        match tor.kind() {
            TorsionKind::Zero => &self.zero,
            TorsionKind::Integer => &self.integer,
            TorsionKind::HalfInteger => &self.half_integer,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct ClassificationReport<T: Int> {
    #[serde(rename = "pq", serialize_with = "pq")]
    pub knot: TorusKnot<T>,
    pub range: CensusRange,
    pub counts: Counts<T>,
    pub tight_counts: TightCounts<T>,
    pub euler_support: EulerSupportTable<T>,
    pub legendrian: Vec<LegendrianRecord<T>>,
    pub transverse: Vec<TransverseRecord<T>>,
    pub mountain: MountainRange<T>,
    pub annotations: Vec<String>,
}

fn pq<T: Int, S: serde::Serializer>(
    k: &TorusKnot<T>,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    crate::scalar::json::ints(&[k.p().clone(), k.q().clone()], ser)
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Construction(what()))
    }
}

/// Full classification over `range`, with every count cross-checked.
pub fn classify<T: Int>(
    knot: &TorusKnot<T>,
    range: CensusRange,
) -> Result<ClassificationReport<T>> {
    if range.tw_min > range.tw_max {
        return Err(Error::Parse(format!(
            "empty tw range {}..={}",
            range.tw_min, range.tw_max
        )));
    }
    let seq = BlockSequence::new(knot)?;
    let counts = counts(&seq)?;
    let euler_support = EulerSupportTable {
        zero: euler_support(&seq, TorsionKind::Zero)?,
        integer: euler_support(&seq, TorsionKind::Integer)?,
        half_integer: euler_support(&seq, TorsionKind::HalfInteger)?,
    };
    let mountain = mountain_range(&seq)?;
    let legendrian = legendrian_census(&seq, &mountain, &range)?;
    let transverse = transverse_census(&seq, &mountain, &range)?;

    let n = s::to_usize(&counts.n)?;
    let l = s::to_usize(&counts.l)?;
    let m = s::to_usize(&counts.m)?;
    let t = s::to_usize(&counts.t)?;
    check(mountain.pair_components.len() == n, || {
        "pair components != n".into()
    })?;
    check(mountain.towers().count() == l, || {
        "torsion towers != l".into()
    })?;
    for (k, _, c) in &mountain.depth_histogram {
        check(s::lift_usize::<T>(*c)? == counts.wings_at(*k)?, || {
            format!("wing pairs at level {k}")
        })?;
    }

    let mut per_level: BTreeMap<(i64, Torsion), usize> = BTreeMap::new();
    for r in &legendrian {
        *per_level.entry((r.tw, r.tor)).or_default() += 1;
        let e = if r.side == Side::Plus {
            s::neg(&r.euler)?
        } else {
            r.euler.clone()
        };
        check(
            euler_support.for_torsion(r.tor).allows_legendrian(&r.euler)
                && (r.tor != Torsion::ZERO || e.is_positive()),
            || {
                format!(
                    "{} has euler class {} outside the support",
                    r.label, r.euler
                )
            },
        )?;
    }
    for ((tw, tor), c) in &per_level {
        let want = match (*tor == Torsion::ZERO, *tw) {
            (true, tw) if tw > 0 => Some(2 * n),
            (true, 0) => Some(m - 2),
            (true, _) => None,
            (false, _) => Some(2 * l),
        };
        if let Some(w) = want {
            check(*c == w, || {
                format!("{c} knots at tw = {tw}, tor = {tor}, expected {w}")
            })?;
        }
    }
    let plus = legendrian.iter().filter(|r| r.side == Side::Plus).count();
    check(2 * plus == legendrian.len(), || {
        "records are not side-symmetric".into()
    })?;

    let t0: Vec<_> = transverse
        .iter()
        .filter(|r| r.tor == Torsion::ZERO)
        .collect();
    check(t0.len() == t, || {
        format!(
            "{} transverse knots without torsion, expected {t}",
            t0.len()
        )
    })?;
    check(
        t0.iter().filter(|r| r.stabilization.is_loose()).count() == n,
        || "transverse intervals != n".into(),
    )?;
    for r in &transverse {
        check(
            euler_support.for_torsion(r.tor).allows_transverse(&r.euler),
            || {
                format!(
                    "{} has euler class {} outside the support",
                    r.label, r.euler
                )
            },
        )?;
    }

    Ok(ClassificationReport {
        knot: knot.clone(),
        range,
        counts,
        tight_counts: tight_counts(knot)?,
        euler_support,
        mountain,
        legendrian,
        transverse,
        annotations: vec![TIGHT_ANNOTATION.to_string()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_small_knots() {
        for (p, q) in [
            (1, -2),
            (1, -3),
            (2, -5),
            (7, -16),
            (3, -8),
            (5, -13),
            (4, -11),
            (1, -7),
        ] {
            let k = TorusKnot::<i64>::from_i64(p, q).unwrap();
            let r = classify(&k, CensusRange::default()).unwrap();
            assert_eq!(r.annotations.len(), 1);
        }
    }

    #[test]
    fn json_shape() {
        let k = TorusKnot::<i64>::from_i64(1, -3).unwrap();
        let r = classify(
            &k,
            CensusRange {
                tw_min: -1,
                tw_max: 1,
                tor_max: Torsion::from_halves(1),
            },
        )
        .unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["counts"]["m"], 6);
        assert_eq!(v["pq"], serde_json::json!([1, -3]));
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.starts_with(r#"{"pq":[1,-3],"range":"#));
        assert_eq!(
            v["mountain"]["pair_components"][0]["euler_pair"],
            serde_json::json!([-2, 2])
        );
        assert!(v["legendrian"]
            .as_array()
            .unwrap()
            .iter()
            .any(|x| x["tor"] == 0.5));
    }

    #[test]
    fn empty_range_rejected() {
        let k = TorusKnot::<i64>::from_i64(1, -3).unwrap();
        assert!(classify(
            &k,
            CensusRange {
                tw_min: 2,
                tw_max: 1,
                tor_max: Torsion::ZERO
            }
        )
        .is_err());
    }
}
