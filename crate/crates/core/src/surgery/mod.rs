//! Contact surgery diagrams on Legendrian links in `(S^3, xi_std)`.

mod matrix;
mod snf;

use std::collections::HashMap;

use num_rational::Ratio;
use num_traits::CheckedAdd;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::Value;

pub use matrix::Matrix;
pub use snf::{homology, smith_normal_form, HomologyPresentation, Smith};

use crate::decor::Decoration;
use crate::error::{Error, Result};
use crate::farey::floor_expansion;
use crate::knot::TorusKnot;
use crate::paths::{BlockSequence, PathSide};
use crate::scalar::{self as s, Int};

/// Root id of the chain whose slots follow the `A` blocks.
pub const A_CHAIN: &str = "P1";
/// Root id of the chain whose slots follow the `B` blocks.
pub const B_CHAIN: &str = "P2";

pub fn ratio<T: Int>(num: T, den: T) -> Result<Ratio<T>> {
    if den.is_zero() {
        return Err(Error::UnsupportedCoefficient(format!("{num}/0")));
    }
    // reduce by hand so sign handling goes through checked ops
    let g = num.gcd(&den);
    let (mut n, mut d) = (num / g.clone(), den / g);
    if d.is_negative() {
        n = s::neg(&n)?;
        d = s::neg(&d)?;
    }
    Ok(Ratio::new_raw(n, d))
}

pub fn parse_ratio<T: Int>(text: &str) -> Result<Ratio<T>> {
    match text.split_once('/') {
        Some((n, d)) => ratio(s::parse(n)?, s::parse(d)?),
        None => ratio(s::parse(text)?, T::one()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgeryComponent<T: Int> {
    pub id: String,
    /// Of the Legendrian before this component's own stabilizations.
    pub tb: T,
    pub rot: T,
    pub contact_coeff: Ratio<T>,
    pub stab_plus: usize,
    pub stab_minus: usize,
    /// Stabilizations whose signs are not chosen yet.
    pub slots: usize,
    /// Id of the component this one is a Legendrian push-off of.
    pub pushoff_of: Option<String>,
}

impl<T: Int> SurgeryComponent<T> {
    pub fn unknot(id: &str, contact_coeff: Ratio<T>) -> Self {
        SurgeryComponent {
            id: id.to_string(),
            tb: -T::one(),
            rot: T::zero(),
            contact_coeff,
            stab_plus: 0,
            stab_minus: 0,
            slots: 0,
            pushoff_of: None,
        }
    }

    pub fn effective_tb(&self) -> Result<T> {
        s::sub(
            &self.tb,
            &s::lift_usize(self.stab_plus + self.stab_minus + self.slots)?,
        )
    }

    /// `S+` adds 1 to rot, `S-` subtracts 1.
    pub fn effective_rot(&self) -> Result<T> {
        let plus = s::lift_usize::<T>(self.stab_plus)?;
        let minus = s::lift_usize::<T>(self.stab_minus)?;
        s::sub(&s::add(&self.rot, &plus)?, &minus)
    }

    /// Contact coefficient plus `tb`.
    pub fn topological_coeff(&self) -> Result<Ratio<T>> {
        let tb = Ratio::from_integer(self.effective_tb()?);
        self.contact_coeff.checked_add(&tb).ok_or(Error::Overflow)
    }
}

impl<T: Int> Serialize for SurgeryComponent<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::scalar::json::Wrap;
        let mut st = ser.serialize_struct("SurgeryComponent", 8)?;
        st.serialize_field("id", &self.id)?;
        st.serialize_field("tb", &Wrap(&self.tb))?;
        st.serialize_field("rot", &Wrap(&self.rot))?;
        let c = format!(
            "{}/{}",
            self.contact_coeff.numer(),
            self.contact_coeff.denom()
        );
        st.serialize_field("contact_coeff", &c)?;
        st.serialize_field("stab_plus", &self.stab_plus)?;
        st.serialize_field("stab_minus", &self.stab_minus)?;
        if self.slots > 0 {
            st.serialize_field("slots", &self.slots)?;
        } else {
            st.skip_field("slots")?;
        }
        match &self.pushoff_of {
            Some(p) => st.serialize_field("pushoff_of", p)?,
            None => st.skip_field("pushoff_of")?,
        }
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgeryDiagram<T: Int> {
    components: Vec<SurgeryComponent<T>>,
    linking: Vec<Vec<T>>,
}

impl<T: Int> SurgeryDiagram<T> {
    pub fn new(components: Vec<SurgeryComponent<T>>, linking: Vec<Vec<T>>) -> Result<Self> {
        let n = components.len();
        if linking.len() != n || linking.iter().any(|r| r.len() != n) {
            return Err(Error::Diagram(format!("linking matrix is not {n}x{n}")));
        }
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            if !linking[i][i].is_zero() {
                return Err(Error::Diagram(format!(
                    "nonzero self-linking on {}",
                    components[i].id
                )));
            }
            for j in 0..i {
                if linking[i][j] != linking[j][i] {
                    return Err(Error::Diagram(format!(
                        "linking not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let mut seen = HashMap::new();
        for (i, c) in components.iter().enumerate() {
            if c.contact_coeff.numer().is_zero() {
                return Err(Error::Diagram(format!("contact coefficient 0 on {}", c.id)));
            }
            if let Some(parent) = &c.pushoff_of {
                if !seen.contains_key(parent.as_str()) {
                    return Err(Error::Diagram(format!(
                        "{} is a push-off of unknown {parent}",
                        c.id
                    )));
                }
            }
            if seen.insert(c.id.as_str(), i).is_some() {
                return Err(Error::Diagram(format!("duplicate id {}", c.id)));
            }
        }
        Ok(SurgeryDiagram {
            components,
            linking,
        })
    }

    pub fn components(&self) -> &[SurgeryComponent<T>] {
        &self.components
    }

    pub fn linking(&self) -> &[Vec<T>] {
        &self.linking
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    /// Components expanded from the root `root`, in chain order.
    pub fn chain(&self, root: &str) -> Vec<usize> {
        let prefix = format!("{root}.");
        (0..self.len())
            .filter(|&i| {
                self.components[i].id == root || self.components[i].id.starts_with(&prefix)
            })
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Diagram(e.to_string()))?;
        let comps = v
            .get("components")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Diagram("missing \"components\" array".into()))?;
        let components = comps
            .iter()
            .map(component_from_json)
            .collect::<Result<Vec<_>>>()?;
        let rows = v
            .get("linking")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Diagram("missing \"linking\" matrix".into()))?;
        let linking = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Diagram("linking rows must be arrays".into()))?
                    .iter()
                    .map(json_int)
                    .collect()
            })
            .collect::<Result<Vec<Vec<T>>>>()?;
        Self::new(components, linking)
    }
}

fn json_int<T: Int>(v: &Value) -> Result<T> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .ok_or_else(|| Error::Diagram(format!("not an integer: {n}")))
            .and_then(s::lift),
        Value::String(t) => {
            s::parse(t).map_err(|_| Error::Diagram(format!("not an integer: {t:?}")))
        }
        other => Err(Error::Diagram(format!("not an integer: {other}"))),
    }
}

fn json_count(v: Option<&Value>, field: &str) -> Result<usize> {
    match v {
        None => Ok(0),
        Some(x) => x
            .as_u64()
            .and_then(|u| usize::try_from(u).ok())
            .ok_or_else(|| Error::Diagram(format!("{field} must be a non-negative integer"))),
    }
}

fn component_from_json<T: Int>(v: &Value) -> Result<SurgeryComponent<T>> {
    let field = |name: &str| {
        v.get(name)
            .ok_or_else(|| Error::Diagram(format!("component lacks \"{name}\"")))
    };
    let id = field("id")?
        .as_str()
        .ok_or_else(|| Error::Diagram("id must be a string".into()))?
        .to_string();
    let contact_coeff = match field("contact_coeff")? {
        Value::String(t) => parse_ratio(t).map_err(|e| Error::Diagram(format!("{id}: {e}")))?,
        n @ Value::Number(_) => Ratio::from_integer(json_int(n)?),
        other => return Err(Error::Diagram(format!("{id}: bad contact_coeff {other}"))),
    };
    Ok(SurgeryComponent {
        tb: json_int(field("tb")?)?,
        rot: json_int(field("rot")?)?,
        contact_coeff,
        stab_plus: json_count(v.get("stab_plus"), "stab_plus")?,
        stab_minus: json_count(v.get("stab_minus"), "stab_minus")?,
        slots: json_count(v.get("slots"), "slots")?,
        pushoff_of: v
            .get("pushoff_of")
            .and_then(Value::as_str)
            .map(str::to_string),
        id,
    })
}

impl<T: Int> Serialize for SurgeryDiagram<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("SurgeryDiagram", 2)?;
        st.serialize_field("components", &self.components)?;
        st.serialize_field("linking", &LinkingRows(&self.linking))?;
        st.end()
    }
}

struct LinkingRows<'a, T>(&'a [Vec<T>]);

impl<T: Int> Serialize for LinkingRows<'_, T> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        crate::scalar::json::matrix(self.0, ser)
    }
}

/// `Q_ii = p_i`, `Q_ij = q_j l_ij`, where `p_i/q_i` (with `q_i >= 1`) is the
/// topological coefficient.
pub fn linking_matrix<T: Int>(d: &SurgeryDiagram<T>) -> Result<Matrix<T>> {
    let n = d.len();
    let coeffs = d
        .components
        .iter()
        .map(SurgeryComponent::topological_coeff)
        .collect::<Result<Vec<_>>>()?;
    let mut q = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            q[(i, j)] = if i == j {
                coeffs[i].numer().clone()
            } else {
                s::mul(coeffs[j].denom(), &d.linking[i][j])?
            };
        }
    }
    Ok(q)
}

/// Replace every negative contact coefficient `r = [d_1, ..., d_u]` by a chain
/// of push-offs with `|x_i + 2|` slots (`x_1 = d_1 - 1`, `x_i = d_i`), folding
/// runs of unstabilized push-offs into one `-1/k` component.
pub fn dg_expand<T: Int>(d: &SurgeryDiagram<T>) -> Result<SurgeryDiagram<T>> {
    struct Part<T: Int> {
        comp: SurgeryComponent<T>,
        origin: usize,
    }
    let mut parts: Vec<Part<T>> = Vec::new();
    for (k, c) in d.components.iter().enumerate() {
        let r = &c.contact_coeff;
        if r.numer().is_positive() {
            if !r.numer().is_one() {
                return Err(Error::UnsupportedCoefficient(format!(
                    "{}/{} on {}",
                    r.numer(),
                    r.denom(),
                    c.id
                )));
            }
            parts.push(Part {
                comp: c.clone(),
                origin: k,
            });
            continue;
        }
        let entries = floor_expansion(r.numer(), r.denom())?;
        let two = s::lift::<T>(2)?;
        let slots = entries
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let x = if i == 0 {
                    s::sub(e, &T::one())?
                } else {
                    e.clone()
                };
                s::to_usize(&s::abs(&s::add(&x, &two)?)?)
            })
            .collect::<Result<Vec<_>>>()?;
        // group boundaries: every stabilized push-off starts a new component
        let mut groups: Vec<(usize, usize)> = Vec::new(); // (slots, size)
        for (i, &sl) in slots.iter().enumerate() {
            if i == 0 || sl > 0 {
                groups.push((sl, 1));
            } else {
                groups.last_mut().expect("first member opens a group").1 += 1;
            }
        }
        let single = groups.len() == 1;
        let mut prev: Option<SurgeryComponent<T>> = None;
        for (g, &(sl, size)) in groups.iter().enumerate() {
            let coeff = ratio(-T::one(), s::lift_usize(size)?)?;
            let id = if single {
                c.id.clone()
            } else {
                format!("{}.{}", c.id, g + 1)
            };
            let comp = match &prev {
                None => SurgeryComponent {
                    id,
                    contact_coeff: coeff,
                    slots: c.slots + sl,
                    ..c.clone()
                },
                Some(p) => SurgeryComponent {
                    id,
                    tb: p.effective_tb()?,
                    rot: p.effective_rot()?,
                    contact_coeff: coeff,
                    stab_plus: 0,
                    stab_minus: 0,
                    slots: sl,
                    pushoff_of: Some(p.id.clone()),
                },
            };
            prev = Some(comp.clone());
            parts.push(Part { comp, origin: k });
        }
    }
    let n = parts.len();
    let mut linking = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let l = if parts[i].origin == parts[j].origin {
                // later members of a chain are push-offs of every earlier one
                parts[i].comp.effective_tb()?
            } else {
                d.linking[parts[i].origin][parts[j].origin].clone()
            };
            linking[i][j] = l.clone();
            linking[j][i] = l;
        }
    }
    SurgeryDiagram::new(parts.into_iter().map(|p| p.comp).collect(), linking)
}

/// Slot counts of the chain rooted at `root`, skipping unstabilized members.
pub fn chain_slots<T: Int>(d: &SurgeryDiagram<T>, root: &str) -> Vec<usize> {
    d.chain(root)
        .into_iter()
        .map(|i| d.components[i].slots)
        .filter(|&s| s > 0)
        .collect()
}

/// Fill the slots: an `A` slot gets as many `S+` as its block has positive
/// slices, a `B` slot as many as its block has negative ones.
pub fn decoration_to_stabilizations<T: Int>(
    seq: &BlockSequence<T>,
    dec: &Decoration,
    d: &SurgeryDiagram<T>,
) -> Result<SurgeryDiagram<T>> {
    dec.check(seq)?;
    let mut out = d.clone();
    for (root, side) in [(A_CHAIN, PathSide::P1), (B_CHAIN, PathSide::P2)] {
        let slotted: Vec<usize> = d
            .chain(root)
            .into_iter()
            .filter(|&i| d.components[i].slots > 0)
            .collect();
        let blocks: Vec<_> = seq.side_blocks(side).collect();
        let slots: Vec<usize> = slotted.iter().map(|&i| d.components[i].slots).collect();
        let lens: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
        if slots != lens {
            return Err(Error::SlotMismatch(format!(
                "{root} slots {slots:?} vs {} blocks {lens:?}",
                side.letter()
            )));
        }
        for (&i, b) in slotted.iter().zip(blocks) {
            let pos = dec.positive(b.index());
            let plus = match side {
                PathSide::P1 => pos,
                PathSide::P2 => b.len() - pos,
            };
            let c = &mut out.components[i];
            c.stab_plus += plus;
            c.stab_minus += c.slots - plus;
            c.slots = 0;
        }
    }
    propagate_pushoffs(&mut out)?;
    Ok(out)
}

/// Push-offs copy the current `tb` and `rot` of their parent.
fn propagate_pushoffs<T: Int>(d: &mut SurgeryDiagram<T>) -> Result<()> {
    for i in 0..d.len() {
        if let Some(parent) = d.components[i].pushoff_of.clone() {
            let p = d
                .position(&parent)
                .ok_or_else(|| Error::Diagram(format!("unknown parent {parent}")))?;
            let (tb, rot) = (
                d.components[p].effective_tb()?,
                d.components[p].effective_rot()?,
            );
            d.components[i].tb = tb;
            d.components[i].rot = rot;
        }
    }
    Ok(())
}

/// `PD(e) = sum n_i rot_i [mu_i]`, read off on the last component's meridian.
pub fn pd_euler<T: Int>(d: &SurgeryDiagram<T>) -> Result<T> {
    for c in &d.components {
        if c.slots > 0 {
            return Err(Error::UnassignedSlots(c.id.clone()));
        }
        if !s::abs(c.contact_coeff.numer())?.is_one() {
            return Err(Error::UnsupportedCoefficient(format!(
                "{}/{} on {} (need ±1/n)",
                c.contact_coeff.numer(),
                c.contact_coeff.denom(),
                c.id
            )));
        }
    }
    if d.is_empty() {
        return Ok(T::zero());
    }
    let h = homology(&linking_matrix(d)?)?;
    let c = h.scalar_classes()?;
    let reference = c.last().expect("non-empty");
    if reference.is_zero() {
        return Err(Error::Construction(
            "reference meridian has no free part".into(),
        ));
    }
    let mut sum = T::zero();
    for (comp, ci) in d.components.iter().zip(c) {
        let term = s::mul(
            &s::mul(comp.contact_coeff.denom(), &comp.effective_rot()?)?,
            ci,
        )?;
        sum = s::add(&sum, &term)?;
    }
    if !sum.is_multiple_of(reference) {
        return Err(Error::Construction(format!(
            "PD(e) = {sum}/{reference} is not integral"
        )));
    }
    Ok(sum / reference.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LutzKind {
    HalfOnPlusSide,
    HalfOnMinusSide,
    Full,
}

pub fn lutz<T: Int>(e: &T, q: &T, kind: LutzKind) -> Result<T> {
    let two_q = s::add(q, q)?;
    match kind {
        LutzKind::HalfOnMinusSide => s::add(e, &two_q),
        LutzKind::HalfOnPlusSide => s::sub(e, &two_q),
        LutzKind::Full => Ok(e.clone()),
    }
}

/// Four components, bottom to top: two `+1` unknots, then contact `-q/q''`
/// (slots follow the `B` blocks) and `-q/q'` (slots follow the `A` blocks).
/// Every pair links `-1`; all are `tb = -1`, `rot = 0` unknots.
pub fn tw0_diagram<T: Int>(knot: &TorusKnot<T>) -> Result<SurgeryDiagram<T>> {
    let q = knot.q();
    let q1 = knot.cw()?.num().clone();
    let q2 = s::sub(q, &q1)?;
    let one = Ratio::from_integer(T::one());
    let components = vec![
        SurgeryComponent::unknot("U1", one.clone()),
        SurgeryComponent::unknot("U2", one),
        SurgeryComponent::unknot(B_CHAIN, ratio(s::neg(q)?, q2)?),
        SurgeryComponent::unknot(A_CHAIN, ratio(s::neg(q)?, q1)?),
    ];
    let linking = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| if i == j { T::zero() } else { -T::one() })
                .collect()
        })
        .collect();
    SurgeryDiagram::new(components, linking)
}

/// The expanded and stabilized diagram of the decoration at `tw = 0`.
pub fn decorated_diagram<T: Int>(
    seq: &BlockSequence<T>,
    dec: &Decoration,
) -> Result<SurgeryDiagram<T>> {
    let expanded = dg_expand(&tw0_diagram(seq.knot())?)?;
    decoration_to_stabilizations(seq, dec, &expanded)
}

/// Displayed linking matrix of the `p = 1` family.
pub fn p1_family_matrix<T: Int>(q: &T) -> Result<Matrix<T>> {
    let one = T::one();
    let m1 = -T::one();
    let a = s::add(q, &one)?;
    let rows = vec![
        vec![T::zero(), m1.clone(), m1.clone(), a.clone()],
        vec![m1.clone(), T::zero(), m1.clone(), a.clone()],
        vec![m1.clone(), m1.clone(), s::sub(q, &one)?, a.clone()],
        vec![m1.clone(), m1.clone(), m1, s::add(&s::add(q, q)?, &one)?],
    ];
    Matrix::from_rows(rows)
}

/// Linking matrix of the half Lutz twist diagram, for `q` and `q'`.
pub fn half_lutz_matrix<T: Int>(q: &T, q1: &T) -> Result<Matrix<T>> {
    let m1 = -T::one();
    let a = s::sub(q, q1)?;
    let b = q1.clone();
    let row = |d: [T; 4], x: T, y: T| -> Vec<T> { d.into_iter().chain([x, y]).collect() };
    let z = T::zero();
    let m2 = s::lift::<T>(-2)?;
    let rows = vec![
        row(
            [z.clone(), m1.clone(), m1.clone(), m1.clone()],
            a.clone(),
            b.clone(),
        ),
        row(
            [m1.clone(), m2, m1.clone(), m1.clone()],
            a.clone(),
            b.clone(),
        ),
        row(
            [m1.clone(), m1.clone(), z.clone(), m1.clone()],
            a.clone(),
            b.clone(),
        ),
        row(
            [m1.clone(), m1.clone(), m1.clone(), z],
            a.clone(),
            b.clone(),
        ),
        row(
            [m1.clone(), m1.clone(), m1.clone(), m1.clone()],
            s::sub(&s::add(q, q)?, q1)?,
            b.clone(),
        ),
        row([m1.clone(), m1.clone(), m1.clone(), m1], a, s::add(q, q1)?),
    ];
    Matrix::from_rows(rows)
}
