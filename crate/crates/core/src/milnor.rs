//! Equivariant Milnor triple invariants `mu(i, j, k; g, h)` and their
//! classification up to change of lifts.
//!
//! Component indices are 1-based. The symmetries are
//! `mu(i,j,k; g,h) = mu(j,k,i; g^-1 h, g^-1)` and `mu(i,k,j; h,g) = -mu(i,j,k; g,h)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::{Group, GroupElement};
use crate::scalar::{coeff_from_json, coeff_to_json, Coeff};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MuKey {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub g: GroupElement,
    pub h: GroupElement,
}

impl MuKey {
    pub fn new(i: usize, j: usize, k: usize, g: GroupElement, h: GroupElement) -> Self {
        MuKey { i, j, k, g, h }
    }

    pub fn indices(&self) -> (usize, usize, usize) {
        (self.i, self.j, self.k)
    }

    /// `(j, k, i; g^-1 h, g^-1)`, same value.
    pub fn rotate(&self, group: &Group) -> MuKey {
        let gi = group.inv(&self.g);
        MuKey::new(self.j, self.k, self.i, group.mul(&gi, &self.h), gi)
    }

    /// `(i, k, j; h, g)`, opposite value.
    pub fn swap(&self) -> MuKey {
        MuKey::new(self.i, self.k, self.j, self.h.clone(), self.g.clone())
    }
}

impl fmt::Display for MuKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mu({},{},{}; {}, {})", self.i, self.j, self.k, self.g, self.h)
    }
}

/// Orbit of `key` under the two symmetries with the sign relating each member to
/// `key`. `None` when some member is reached with both signs, which forces zero.
pub fn signed_orbit(key: &MuKey, group: &Group) -> Option<BTreeMap<MuKey, bool>> {
    let mut orbit = BTreeMap::from([(key.clone(), true)]);
    let mut stack = vec![(key.clone(), true)];
    while let Some((k, s)) = stack.pop() {
        for (next, ns) in [(k.rotate(group), s), (k.swap(), !s)] {
            match orbit.get(&next) {
                Some(&old) if old != ns => return None,
                Some(_) => {}
                None => {
                    orbit.insert(next.clone(), ns);
                    stack.push((next, ns));
                }
            }
        }
    }
    Some(orbit)
}

/// Why an index pattern admits no nonzero value, if it does not.
fn definedness_violation(key: &MuKey, group: &Group) -> Option<String> {
    let (i, j, k) = key.indices();
    if i != j && j == k && key.g == key.h {
        return Some(format!("{key} needs g != h"));
    }
    if i == j && j == k {
        let one = group.identity();
        if key.g == one || key.h == one || key.g == key.h {
            return Some(format!("{key} needs 1, g, h pairwise distinct"));
        }
    }
    None
}

/// Finite-support collection closed under the symmetries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MuCollection<C> {
    q: usize,
    group: Group,
    entries: BTreeMap<MuKey, C>,
}

impl<C: Coeff> MuCollection<C> {
    pub fn empty(q: usize, group: &Group) -> Self {
        MuCollection { q, group: group.clone(), entries: BTreeMap::new() }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn entries(&self) -> &BTreeMap<MuKey, C> {
        &self.entries
    }

    pub fn get(&self, key: &MuKey) -> C {
        self.entries.get(key).cloned().unwrap_or_else(C::zero)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn check_key(&self, key: &MuKey) -> Result<()> {
        for idx in [key.i, key.j, key.k] {
            if idx == 0 || idx > self.q {
                return Err(Error::InvalidInput(format!("{key}: component index {idx} outside 1..={}", self.q)));
            }
        }
        self.group.check(&key.g)?;
        self.group.check(&key.h)
    }

    /// Saturates the seeds under the symmetries.
    ///
    /// Seeds in one orbit must agree (else [`Error::Conflict`]); a nonzero seed whose
    /// orbit forces zero is [`Error::Undefined`]. Zero seeds assert a zero orbit.
    pub fn symmetry_closure(q: usize, group: &Group, seeds: &[(MuKey, C)]) -> Result<Self> {
        let mut out = Self::empty(q, group);
        let mut assigned: BTreeMap<MuKey, (C, MuKey)> = BTreeMap::new();
        for (key, v) in seeds {
            out.check_key(key)?;
            if v.is_zero() {
                if let Some(orbit) = signed_orbit(key, group) {
                    for k in orbit.keys() {
                        if let Some((old, src)) = assigned.get(k) {
                            if !old.is_zero() {
                                return Err(Error::Conflict(format!("{key} = 0 contradicts {src} = {old}")));
                            }
                        }
                        assigned.insert(k.clone(), (C::zero(), key.clone()));
                    }
                }
                continue;
            }
            if let Some(why) = definedness_violation(key, group) {
                return Err(Error::Undefined(why));
            }
            let orbit = signed_orbit(key, group)
                .ok_or_else(|| Error::Undefined(format!("{key} is forced to vanish by the symmetries")))?;
            for (k, s) in orbit {
                let val = if s { v.clone() } else { -v.clone() };
                if let Some((old, src)) = assigned.get(&k) {
                    if *old != val {
                        return Err(Error::Conflict(format!(
                            "{key} = {v} forces {k} = {val}, but {src} forces {old}"
                        )));
                    }
                    continue;
                }
                assigned.insert(k, (val, key.clone()));
            }
        }
        out.entries = assigned.into_iter().filter(|(_, (v, _))| !v.is_zero()).map(|(k, (v, _))| (k, v)).collect();
        Ok(out)
    }

    /// Whether the entries are closed under the symmetries.
    pub fn is_closed(&self) -> bool {
        let seeds: Vec<(MuKey, C)> = self.entries.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        matches!(Self::symmetry_closure(self.q, &self.group, &seeds), Ok(c) if c == *self)
    }

    /// Orbit representatives: the least key carrying a positive value.
    pub fn representatives(&self) -> Vec<(MuKey, C)> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for key in self.entries.keys() {
            if seen.contains(key) {
                continue;
            }
            let orbit = signed_orbit(key, &self.group).expect("stored orbits are consistent");
            let rep = orbit
                .keys()
                .find(|k| self.get(k).is_positive())
                .expect("every nonzero orbit has a positive member")
                .clone();
            seen.extend(orbit.into_keys());
            let v = self.get(&rep);
            out.push((rep, v));
        }
        out.sort();
        out
    }

    /// New value at `(i,j,k; g,h)` is the old value at `(i,j,k; u_i^-1 g u_j, u_i^-1 h u_k)`.
    pub fn lift_change(&self, u: &[GroupElement]) -> Result<Self> {
        if u.len() != self.q {
            return Err(Error::SizeMismatch(format!("lift change of length {} for {} components", u.len(), self.q)));
        }
        for x in u {
            self.group.check(x)?;
        }
        let gr = &self.group;
        let inv: Vec<GroupElement> = u.iter().map(|x| gr.inv(x)).collect();
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| {
                let g = gr.mul(&gr.mul(&u[k.i - 1], &k.g), &inv[k.j - 1]);
                let h = gr.mul(&gr.mul(&u[k.i - 1], &k.h), &inv[k.k - 1]);
                (MuKey::new(k.i, k.j, k.k, g, h), v.clone())
            })
            .collect();
        Ok(MuCollection { q: self.q, group: self.group.clone(), entries })
    }

    /// Adds `±1` on the orbit of `(i,j,k; g,h)`. Repeated indices leave the
    /// collection unchanged and return a warning.
    pub fn delta_move(
        &self,
        i: usize,
        j: usize,
        k: usize,
        g: &GroupElement,
        h: &GroupElement,
        positive: bool,
    ) -> Result<(Self, Option<String>)> {
        let key = MuKey::new(i, j, k, g.clone(), h.clone());
        self.check_key(&key)?;
        if i == j || j == k || i == k {
            return Ok((self.clone(), Some(format!("indices of {key} are not distinct; no change"))));
        }
        let orbit = signed_orbit(&key, &self.group).expect("distinct indices never force zero");
        let mut out = self.clone();
        for (k, s) in orbit {
            let d = if s == positive { C::one() } else { -C::one() };
            let v = out.get(&k) + d;
            if v.is_zero() {
                out.entries.remove(&k);
            } else {
                out.entries.insert(k, v);
            }
        }
        Ok((out, None))
    }

    /// `sum_{g,h} mu(i,j,k; g,h) (g,h)` in `Z[pi x pi]`.
    pub fn package(&self, i: usize, j: usize, k: usize) -> PairRingElement<C> {
        let terms = self
            .entries
            .iter()
            .filter(|(key, _)| key.indices() == (i, j, k))
            .map(|(key, v)| ((key.g.clone(), key.h.clone()), v.clone()))
            .collect();
        PairRingElement { group: self.group.clone(), terms }
    }

    /// Support size and sorted values for every index triple; unchanged by lift changes.
    pub fn triple_profile(&self) -> BTreeMap<(usize, usize, usize), Vec<C>> {
        let mut out: BTreeMap<(usize, usize, usize), Vec<C>> = BTreeMap::new();
        for (k, v) in &self.entries {
            out.entry(k.indices()).or_default().push(v.clone());
        }
        for vals in out.values_mut() {
            vals.sort();
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "group": self.group.to_json(),
            "entries": self.representatives().iter().map(|(k, v)| json!({
                "ijk": [k.i, k.j, k.k],
                "g": self.group.element_to_json(&k.g),
                "h": self.group.element_to_json(&k.h),
                "v": coeff_to_json(v),
            })).collect::<Vec<_>>(),
        })
    }

    /// Parses a collection and closes it under the symmetries.
    pub fn from_json(v: &Value) -> Result<Self> {
        let q = v.get("q").and_then(Value::as_u64).ok_or_else(|| Error::parse("q", "expected a count"))? as usize;
        let group = Group::from_json(v.get("group").ok_or_else(|| Error::parse("group", "missing"))?)?;
        let items = v.get("entries").and_then(Value::as_array).ok_or_else(|| Error::parse("entries", "expected an array"))?;
        let mut seeds = Vec::with_capacity(items.len());
        for (n, item) in items.iter().enumerate() {
            let loc = format!("entries[{n}]");
            let ijk: Vec<usize> = item
                .get("ijk")
                .and_then(Value::as_array)
                .filter(|a| a.len() == 3)
                .and_then(|a| a.iter().map(|x| x.as_u64().map(|x| x as usize)).collect())
                .ok_or_else(|| Error::parse(&loc, "expected ijk: [i, j, k]"))?;
            let el = |key: &str| {
                group.parse_element(item.get(key).ok_or_else(|| Error::parse(format!("{loc}.{key}"), "missing"))?)
            };
            let val = item
                .get("v")
                .and_then(coeff_from_json::<C>)
                .ok_or_else(|| Error::parse(format!("{loc}.v"), "expected an integer"))?;
            seeds.push((MuKey::new(ijk[0], ijk[1], ijk[2], el("g")?, el("h")?), val));
        }
        Self::symmetry_closure(q, &group, &seeds)
    }
}

/// Element of `Z[pi x pi]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairRingElement<C> {
    pub group: Group,
    pub terms: BTreeMap<(GroupElement, GroupElement), C>,
}

impl<C: Coeff> PairRingElement<C> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            let s = terms.get(k).cloned().unwrap_or_else(C::zero) + v.clone();
            if s.is_zero() {
                terms.remove(k);
            } else {
                terms.insert(k.clone(), s);
            }
        }
        PairRingElement { group: self.group.clone(), terms }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|((g, h), c)| {
                    json!({"g": self.group.element_to_json(g), "h": self.group.element_to_json(h), "c": coeff_to_json(c)})
                })
                .collect(),
        )
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Equivalence {
    Equivalent,
    Inequivalent,
    Unknown,
}

impl Equivalence {
    pub fn name(self) -> &'static str {
        match self {
            Equivalence::Equivalent => "equivalent",
            Equivalence::Inequivalent => "inequivalent",
            Equivalence::Unknown => "unknown",
        }
    }
}

/// Searches for a lift change `u` with `c1.lift_change(u) == c2`, together with the
/// lift change found.
///
/// Finite groups are searched exhaustively. Infinite groups are searched over the
/// ball of `ball_radius` in every coordinate; failing that, the collections are
/// declared inequivalent only when an invariant of the action separates them:
/// the support and value multiset of each index triple, and for abelian groups the
/// `(i,i,i)` entries, on which the action is trivial.
pub fn surgery_equivalent<C: Coeff>(
    c1: &MuCollection<C>,
    c2: &MuCollection<C>,
    ball_radius: usize,
) -> Result<(Equivalence, Option<Vec<GroupElement>>)> {
    if c1.q != c2.q || c1.group != c2.group {
        return Err(Error::SizeMismatch(format!(
            "collections over ({}, {}) and ({}, {})",
            c1.q, c1.group, c2.q, c2.group
        )));
    }
    let group = &c1.group;
    if c1.triple_profile() != c2.triple_profile() {
        return Ok((Equivalence::Inequivalent, None));
    }
    let candidates = match group.elements() {
        Some(all) => all,
        None => group.ball(ball_radius),
    };
    if let Some(u) = search_lift(c1, c2, &candidates) {
        return Ok((Equivalence::Equivalent, Some(u)));
    }
    if group.is_finite() {
        return Ok((Equivalence::Inequivalent, None));
    }
    if group.is_abelian() {
        let diagonal = |c: &MuCollection<C>| -> BTreeMap<MuKey, C> {
            c.entries.iter().filter(|(k, _)| k.i == k.j && k.j == k.k).map(|(k, v)| (k.clone(), v.clone())).collect()
        };
        if diagonal(c1) != diagonal(c2) {
            return Ok((Equivalence::Inequivalent, None));
        }
    }
    Ok((Equivalence::Unknown, None))
}

/// Backtracking over `u_1, u_2, ...`: once `u_1..u_t` are fixed, every entry whose
/// indices are at most `t` has a determined image, which must match `c2`.
fn search_lift<C: Coeff>(c1: &MuCollection<C>, c2: &MuCollection<C>, candidates: &[GroupElement]) -> Option<Vec<GroupElement>> {
    let q = c1.q;
    if q == 0 {
        return (c1 == c2).then(Vec::new);
    }
    let mut by_level: Vec<Vec<(&MuKey, &C)>> = vec![Vec::new(); q + 1];
    for (k, v) in &c1.entries {
        by_level[k.i.max(k.j).max(k.k)].push((k, v));
    }
    let group = &c1.group;
    let mut u: Vec<GroupElement> = Vec::with_capacity(q);
    let mut inv: Vec<GroupElement> = Vec::with_capacity(q);
    #[allow(clippy::too_many_arguments)]
    fn rec<C: Coeff>(
        t: usize,
        q: usize,
        group: &Group,
        candidates: &[GroupElement],
        by_level: &[Vec<(&MuKey, &C)>],
        c2: &MuCollection<C>,
        u: &mut Vec<GroupElement>,
        inv: &mut Vec<GroupElement>,
    ) -> bool {
        if t == q {
            return true;
        }
        for x in candidates {
            u.push(x.clone());
            inv.push(group.inv(x));
            let ok = by_level[t + 1].iter().all(|(k, v)| {
                let g = group.mul(&group.mul(&u[k.i - 1], &k.g), &inv[k.j - 1]);
                let h = group.mul(&group.mul(&u[k.i - 1], &k.h), &inv[k.k - 1]);
                c2.entries.get(&MuKey::new(k.i, k.j, k.k, g, h)) == Some(*v)
            });
            if ok && rec(t + 1, q, group, candidates, by_level, c2, u, inv) {
                return true;
            }
            u.pop();
            inv.pop();
        }
        false
    }
    // images are distinct and supports have equal size, so matching every entry is a bijection
    if c1.len() != c2.len() {
        return None;
    }
    rec(0, q, group, candidates, &by_level, c2, &mut u, &mut inv).then_some(u)
}
