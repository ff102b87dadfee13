use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::Torsion;
use crate::decor::{self, Decoration};
use crate::error::{Error, Result};
use crate::euler::{self, Side, TorsionKind};
use crate::paths::BlockSequence;
use crate::scalar::json::{IntSlice, Wrap};
use crate::scalar::{self as s, Int};
use crate::surgery::{lutz, LutzKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRange {
    pub tw_min: i64,
    pub tw_max: i64,
    pub tor_max: Torsion,
}

impl Default for CensusRange {
    fn default() -> Self {
        CensusRange {
            tw_min: -5,
            tw_max: 5,
            tor_max: Torsion::from_halves(4),
        }
    }
}

/// One pair of components `L_{+,k}`, `L_{-,k}` of the mountain range.
/// Coordinates are those of the `+` member; the `-` member is the mirror
/// image `x -> -x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairComponent<T: Int> {
    pub index: usize,
    /// The positive Euler class; the `+` member carries `-euler`.
    pub euler: T,
    pub wing_level: usize,
    /// `n_{k-1}` for wing level `k`.
    pub depth: T,
    /// Horizontal position of the peak at level `r`, for `r = 2..=wing_level`.
    pub peak_offsets: Vec<i64>,
    /// `+`-side decorations sitting at the peaks, same order as `peak_offsets`.
    pub peaks: Vec<Decoration>,
    pub torsion_tower: bool,
    strip_depths: Vec<i64>,
}

impl<T: Int> PairComponent<T> {
    /// Membership in the `+` picture: a ray `x = -y` above the axis and one
    /// strip per peak below it.
    fn contains_plus(&self, x: i64, y: i64) -> bool {
        if y > 0 {
            return x == -y;
        }
        self.peak_offsets
            .iter()
            .zip(&self.strip_depths)
            .any(|(&px, &depth)| {
                let a = x - px - y;
                let b = px - x - y;
                a % 2 == 0 && a >= 0 && b >= 0 && b / 2 < depth
            })
    }

    pub fn contains(&self, side: Side, x: i64, y: i64) -> bool {
        match side {
            Side::Plus => self.contains_plus(x, y),
            Side::Minus => self.contains_plus(-x, y),
        }
    }

    /// Sorted `x` positions of the `+` picture at height `y`.
    fn plus_row(&self, y: i64) -> Vec<i64> {
        if y > 0 {
            return vec![-y];
        }
        let mut xs: Vec<i64> = Vec::new();
        for (&px, &depth) in self.peak_offsets.iter().zip(&self.strip_depths) {
            for i in 0..depth.min(1 - y) {
                let l = -y - i;
                xs.push(px + l - i);
            }
        }
        xs.sort_unstable();
        xs.dedup();
        xs
    }

    pub fn row(&self, side: Side, y: i64) -> Vec<i64> {
        let mut xs = self.plus_row(y);
        if side == Side::Minus {
            xs = xs.into_iter().map(|x| -x).rev().collect();
        }
        xs
    }

    pub fn euler_on(&self, side: Side) -> Result<T> {
        match side {
            Side::Plus => s::neg(&self.euler),
            Side::Minus => Ok(self.euler.clone()),
        }
    }

    pub fn label(&self, side: Side, x: i64, y: i64) -> String {
        let px = if side == Side::Plus { x } else { -x };
        let base = format!("L^{{{y}}}_{{{},{}}}", side.symbol(), self.index);
        if px == -y {
            base
        } else {
            format!("{base}[{x}]")
        }
    }

    fn target(&self, side: Side, x: i64, y: i64) -> Target {
        if self.contains(side, x, y) {
            Target::Label(self.label(side, x, y))
        } else {
            Target::Loose
        }
    }
}

impl<T: Int> Serialize for PairComponent<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("PairComponent", 7)?;
        st.serialize_field("index", &self.index)?;
        let minus = s::neg(&self.euler).map_err(serde::ser::Error::custom)?;
        st.serialize_field("euler_pair", &IntSlice(&[minus, self.euler.clone()]))?;
        st.serialize_field("wing_level", &self.wing_level)?;
        st.serialize_field("depth", &Wrap(&self.depth))?;
        st.serialize_field("peak_offsets", &self.peak_offsets)?;
        st.serialize_field("peaks", &self.peaks)?;
        st.serialize_field("torsion_tower", &self.torsion_tower)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MountainRange<T: Int> {
    pub pair_components: Vec<PairComponent<T>>,
    /// `(wing level, depth, number of pairs)`.
    pub depth_histogram: Vec<(usize, T, usize)>,
}

impl<T: Int> MountainRange<T> {
    pub fn towers(&self) -> impl Iterator<Item = &PairComponent<T>> {
        self.pair_components.iter().filter(|c| c.torsion_tower)
    }
}

impl<T: Int> Serialize for MountainRange<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(bound = "")]
        struct Bin<'a, T: Int> {
            wing_level: usize,
            depth: Wrap<'a, T>,
            pairs: usize,
        }
        let bins: Vec<Bin<'_, T>> = self
            .depth_histogram
            .iter()
            .map(|(k, d, c)| Bin {
                wing_level: *k,
                depth: Wrap(d),
                pairs: *c,
            })
            .collect();
        let mut st = ser.serialize_struct("MountainRange", 2)?;
        st.serialize_field("pair_components", &self.pair_components)?;
        st.serialize_field("depth_histogram", &bins)?;
        st.end()
    }
}

fn to_i64<T: Int>(v: &T) -> Result<i64> {
    v.to_i64().ok_or(Error::Overflow)
}

/// Pairs of components, their wing levels and peak decorations.
///
/// For a fixed Euler class, each `+` component of wing level `k` carries one
/// decoration of each consistency level `2..=k`; so the number of components
/// reaching level `r` is the number of level-`r` decorations with that class.
pub fn mountain_range<T: Int>(seq: &BlockSequence<T>) -> Result<MountainRange<T>> {
    // euler class (negative) -> level -> decorations in lexicographic order
    let mut plus: BTreeMap<T, BTreeMap<usize, Vec<(Decoration, bool)>>> = BTreeMap::new();
    for dec in decor::enumerate(seq) {
        let Some(level) = decor::consistency_level(seq, &dec)?.inconsistent_at() else {
            continue;
        };
        let e = euler::euler_class(seq, &dec)?;
        if !e.is_negative() {
            continue;
        }
        let total = decor::is_totally_k_inconsistent(seq, &dec, 2)?;
        plus.entry(e)
            .or_default()
            .entry(level)
            .or_default()
            .push((dec, total));
    }

    let n_vals: Vec<i64> = seq.n_values().iter().map(to_i64).collect::<Result<_>>()?;
    let mut comps: Vec<PairComponent<T>> = Vec::new();
    for (e, by_level) in plus {
        let count = |r: usize| by_level.get(&r).map_or(0, Vec::len);
        let top = by_level.keys().max().copied().unwrap_or(1);
        if let Some(r) = (3..=top).find(|&r| count(r) > count(r - 1)) {
            return Err(Error::Construction(format!(
                "euler class {e}: more level-{r} decorations than level-{}",
                r - 1
            )));
        }
        let mut base: Vec<(Decoration, bool)> = by_level.get(&2).cloned().unwrap_or_default();
        base.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        for (i, (rep, total)) in base.iter().enumerate() {
            let level = (2..=top).take_while(|&r| i < count(r)).last().unwrap_or(2);
            if *total && level != 2 {
                return Err(Error::Construction(format!(
                    "euler class {e}: torsion tower above level 2"
                )));
            }
            let mut peaks = vec![rep.clone()];
            for r in 3..=level {
                peaks.push(by_level[&r][i].0.clone());
            }
            let mut peak_offsets = vec![0i64];
            let mut strip_depths = vec![n_vals[1]];
            for r in 3..=level {
                let prev = *peak_offsets.last().expect("non-empty");
                peak_offsets.push(prev + 2 * (n_vals[r - 1] - n_vals[r - 2]));
                strip_depths.push(n_vals[r - 1]);
            }
            comps.push(PairComponent {
                index: 0,
                euler: s::neg(&e)?,
                wing_level: level,
                depth: seq.n(level - 1).clone(),
                peak_offsets,
                peaks,
                torsion_tower: *total,
                strip_depths,
            });
        }
    }
    comps.sort_by(|a, b| {
        a.euler
            .cmp(&b.euler)
            .then_with(|| a.peaks[0].cmp(&b.peaks[0]))
    });
    for (i, c) in comps.iter_mut().enumerate() {
        c.index = i + 1;
    }

    let mut depth_histogram = Vec::new();
    for k in 2..=seq.len() {
        let c = comps.iter().filter(|c| c.wing_level == k).count();
        if c > 0 {
            depth_histogram.push((k, seq.n(k - 1).clone(), c));
        }
    }
    Ok(MountainRange {
        pair_components: comps,
        depth_histogram,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Label(String),
    Loose,
}

impl Target {
    pub fn is_loose(&self) -> bool {
        matches!(self, Target::Loose)
    }
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Target::Label(l) => f.write_str(l),
            Target::Loose => f.write_str("loose"),
        }
    }
}

impl Serialize for Target {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegendrianRecord<T: Int> {
    pub label: String,
    pub tw: i64,
    pub tor: Torsion,
    pub side: Side,
    /// Pair index when `tor = 0`, tower index otherwise.
    pub component: usize,
    pub x: i64,
    pub euler: T,
    pub decoration: Option<Decoration>,
    pub stab_plus: Target,
    pub stab_minus: Target,
}

impl<T: Int> Serialize for LegendrianRecord<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("LegendrianRecord", 10)?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("tw", &self.tw)?;
        st.serialize_field("tor", &self.tor)?;
        st.serialize_field("side", &self.side)?;
        st.serialize_field("component", &self.component)?;
        st.serialize_field("x", &self.x)?;
        st.serialize_field("euler", &Wrap(&self.euler))?;
        if let Some(d) = &self.decoration {
            st.serialize_field("decoration", d)?;
        }
        st.serialize_field("stab_plus", &self.stab_plus)?;
        st.serialize_field("stab_minus", &self.stab_minus)?;
        st.end()
    }
}

fn half_lutz_on(side: Side) -> LutzKind {
    match side {
        Side::Plus => LutzKind::HalfOnPlusSide,
        Side::Minus => LutzKind::HalfOnMinusSide,
    }
}

fn twisted_euler<T: Int>(e: &T, q: &T, tor: Torsion, side: Side) -> Result<T> {
    match tor.kind() {
        TorsionKind::HalfInteger => lutz(e, q, half_lutz_on(side)),
        _ => Ok(e.clone()),
    }
}

/// Every non-loose Legendrian in the range, ordered by torsion, then `tw`
/// descending, component, side and `x`.
pub fn legendrian_census<T: Int>(
    seq: &BlockSequence<T>,
    mountain: &MountainRange<T>,
    range: &CensusRange,
) -> Result<Vec<LegendrianRecord<T>>> {
    let mut out = Vec::new();
    let sides = [Side::Plus, Side::Minus];
    for y in (range.tw_min..=range.tw_max).rev() {
        for c in &mountain.pair_components {
            for side in sides {
                for x in c.row(side, y) {
                    let decoration = if y == 0 {
                        let px = if side == Side::Plus { x } else { -x };
                        let r = c
                            .peak_offsets
                            .iter()
                            .position(|&p| p == px)
                            .ok_or_else(|| {
                                Error::Construction(format!(
                                    "tw = 0 point off the peaks in component {}",
                                    c.index
                                ))
                            })?;
                        let d = c.peaks[r].clone();
                        Some(if side == Side::Plus {
                            d
                        } else {
                            decor::negate(seq, &d)
                        })
                    } else {
                        None
                    };
                    out.push(LegendrianRecord {
                        label: c.label(side, x, y),
                        tw: y,
                        tor: Torsion::ZERO,
                        side,
                        component: c.index,
                        x,
                        euler: c.euler_on(side)?,
                        decoration,
                        stab_plus: c.target(side, x + 1, y - 1),
                        stab_minus: c.target(side, x - 1, y - 1),
                    });
                }
            }
        }
    }
    let q = seq.knot().q();
    for tor in range.tor_max.positive_steps() {
        for y in (range.tw_min..=range.tw_max).rev() {
            for (j, c) in mountain.towers().enumerate() {
                for side in sides {
                    let label =
                        |yy: i64| format!("L^{{{yy},{tor}}}_{{{},{}}}", side.symbol(), j + 1);
                    let (stab_plus, stab_minus) = match side {
                        Side::Plus => (Target::Label(label(y - 1)), Target::Loose),
                        Side::Minus => (Target::Loose, Target::Label(label(y - 1))),
                    };
                    out.push(LegendrianRecord {
                        label: label(y),
                        tw: y,
                        tor,
                        side,
                        component: j + 1,
                        x: if side == Side::Plus { -y } else { y },
                        euler: twisted_euler(&c.euler_on(side)?, q, tor, side)?,
                        decoration: None,
                        stab_plus,
                        stab_minus,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransverseRecord<T: Int> {
    pub label: String,
    pub tor: Torsion,
    pub euler: T,
    /// Pair index of the component this knot is the positive push-off of.
    pub component: usize,
    pub stabilization: Target,
    pub half_lutz_to: Option<String>,
}

impl<T: Int> Serialize for TransverseRecord<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("TransverseRecord", 6)?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("tor", &self.tor)?;
        st.serialize_field("euler", &Wrap(&self.euler))?;
        st.serialize_field("component", &self.component)?;
        st.serialize_field("stabilization", &self.stabilization)?;
        if let Some(h) = &self.half_lutz_to {
            st.serialize_field("half_lutz_to", h)?;
        }
        st.end()
    }
}

/// Non-loose transverse knots: `T_{i,j,k}` without torsion (the `j`-th pair of
/// wing level `k`, `i = 1..=n_{k-1}`) and `T^t_j` over the torsion towers.
pub fn transverse_census<T: Int>(
    seq: &BlockSequence<T>,
    mountain: &MountainRange<T>,
    range: &CensusRange,
) -> Result<Vec<TransverseRecord<T>>> {
    let mut out = Vec::new();
    let tower_of: BTreeMap<usize, usize> = mountain
        .towers()
        .enumerate()
        .map(|(j, c)| (c.index, j + 1))
        .collect();
    let mut per_level: BTreeMap<usize, usize> = BTreeMap::new();
    for c in &mountain.pair_components {
        let k = c.wing_level;
        let j = {
            let slot = per_level.entry(k).or_insert(0);
            *slot += 1;
            *slot
        };
        let depth = s::to_usize(&c.depth)?;
        for i in 1..=depth {
            let half_lutz_to = match tower_of.get(&c.index) {
                Some(t) if i == 1 && range.tor_max > Torsion::ZERO => {
                    Some(format!("T^{{1/2}}_{{{t}}}"))
                }
                _ => None,
            };
            out.push(TransverseRecord {
                label: format!("T_{{{i},{j},{k}}}"),
                tor: Torsion::ZERO,
                euler: c.euler.clone(),
                component: c.index,
                stabilization: if i > 1 {
                    Target::Label(format!("T_{{{},{j},{k}}}", i - 1))
                } else {
                    Target::Loose
                },
                half_lutz_to,
            });
        }
    }
    let q = seq.knot().q();
    for tor in range.tor_max.positive_steps() {
        for (j, c) in mountain.towers().enumerate() {
            let next = tor.half_twist();
            out.push(TransverseRecord {
                label: format!("T^{{{tor}}}_{{{}}}", j + 1),
                tor,
                euler: twisted_euler(&c.euler, q, tor, Side::Minus)?,
                component: c.index,
                stabilization: Target::Loose,
                half_lutz_to: (next <= range.tor_max)
                    .then(|| format!("T^{{{next}}}_{{{}}}", j + 1)),
            });
        }
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

    #[test]
    fn mountain_7_16() {
        let c = seq(7, -16);
        let m = mountain_range(&c).unwrap();
        assert_eq!(m.pair_components.len(), 16);
        assert_eq!(m.depth_histogram, vec![(2, 1, 10), (3, 2, 5), (4, 7, 1)]);
        assert_eq!(m.towers().count(), 8);
        for comp in &m.pair_components {
            assert!(comp.euler > 0);
            for d in &comp.peaks {
                assert_eq!(euler::euler_class(&c, d).unwrap(), -comp.euler);
            }
            for (r, d) in comp.peaks.iter().enumerate() {
                assert_eq!(
                    decor::consistency_level(&c, d).unwrap().inconsistent_at(),
                    Some(r + 2)
                );
            }
        }
        let deep = m
            .pair_components
            .iter()
            .find(|c| c.wing_level == 4)
            .unwrap();
        assert_eq!(deep.peak_offsets, vec![0, 2, 12]);
    }

    #[test]
    fn p_one_indices_match_euler() {
        for q in -9..=-2 {
            let c = seq(1, q);
            let m = mountain_range(&c).unwrap();
            assert_eq!(m.pair_components.len() as i64, -q - 1);
            for comp in &m.pair_components {
                assert_eq!(comp.euler, 2 * comp.index as i64);
                assert_eq!(comp.wing_level, 2);
            }
        }
    }

    #[test]
    fn every_peak_decoration_used_once() {
        for (p, q) in [(7, -16), (3, -8), (5, -13), (2, -5), (4, -11)] {
            let c = seq(p, q);
            let m = mountain_range(&c).unwrap();
            let mut used: Vec<Decoration> = m
                .pair_components
                .iter()
                .flat_map(|c| c.peaks.clone())
                .collect();
            let n = used.len();
            used.sort();
            used.dedup();
            assert_eq!(used.len(), n);
            let plus = decor::enumerate(&c)
                .filter(|d| euler::euler_class(&c, d).unwrap() < 0)
                .filter(|d| {
                    decor::consistency_level(&c, d)
                        .unwrap()
                        .inconsistent_at()
                        .is_some()
                })
                .count();
            assert_eq!(n, plus);
        }
    }

    #[test]
    fn legendrian_level_counts() {
        let c = seq(7, -16);
        let m = mountain_range(&c).unwrap();
        let range = CensusRange::default();
        let recs = legendrian_census(&c, &m, &range).unwrap();
        let at = |tw: i64, h: u32| {
            recs.iter()
                .filter(|r| r.tw == tw && r.tor.halves() == h)
                .count()
        };
        for tw in 1..=5 {
            assert_eq!(at(tw, 0), 32);
        }
        assert_eq!(at(0, 0), 46);
        for h in 1..=4 {
            for tw in -5..=5 {
                assert_eq!(at(tw, h), 16);
            }
        }
        for r in recs.iter().filter(|r| r.tw == 0 && r.tor == Torsion::ZERO) {
            let d = r.decoration.as_ref().unwrap();
            assert_eq!(euler::euler_class(&c, d).unwrap(), r.euler);
            assert_eq!(euler::side_of(&c, d).unwrap(), r.side);
        }
    }

    #[test]
    fn stabilizations_stay_inside() {
        let c = seq(7, -16);
        let m = mountain_range(&c).unwrap();
        let recs = legendrian_census(
            &c,
            &m,
            &CensusRange {
                tw_min: -12,
                tw_max: 3,
                tor_max: Torsion::ZERO,
            },
        )
        .unwrap();
        let labels: std::collections::HashSet<&str> =
            recs.iter().map(|r| r.label.as_str()).collect();
        for r in recs.iter().filter(|r| r.tw > -12) {
            for t in [&r.stab_plus, &r.stab_minus] {
                if let Target::Label(l) = t {
                    assert!(labels.contains(l.as_str()), "{l}");
                }
            }
            // a primary-line knot always has one non-loose stabilization
            if r.tw > 0 {
                assert!(r.stab_plus.is_loose() != r.stab_minus.is_loose());
            }
        }
    }

    #[test]
    fn transverse_counts() {
        let c = seq(7, -16);
        let m = mountain_range(&c).unwrap();
        let t = transverse_census(&c, &m, &CensusRange::default()).unwrap();
        assert_eq!(t.iter().filter(|r| r.tor == Torsion::ZERO).count(), 27);
        assert_eq!(
            t.iter()
                .filter(|r| r.tor == Torsion::ZERO && r.stabilization.is_loose())
                .count(),
            16
        );
        assert_eq!(t.iter().filter(|r| r.tor.halves() == 1).count(), 8);
        assert!(t.iter().all(|r| r.tor != Torsion::ZERO || r.euler > 0));
    }
}
