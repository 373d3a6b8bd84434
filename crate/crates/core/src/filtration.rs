//! Formal surgery brackets: `[N, L] = sum_{L' in L} (-1)^|L'| N_{L'}` on
//! symbols `N_S` indexed by sets of link components.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{coeff_from_json, coeff_to_json, Coeff};

/// Index set of components.
pub type IndexSet = BTreeSet<usize>;

/// `N_S`: the result of surgery along the sublink `S`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SurgerySymbol(pub IndexSet);

impl fmt::Display for SurgerySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "N{{{}}}", parts.join(","))
    }
}

/// Finite integer combination of symbols without zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalSum<C> {
    terms: BTreeMap<SurgerySymbol, C>,
}

impl<C: Coeff> Default for FormalSum<C> {
    fn default() -> Self {
        FormalSum { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> FormalSum<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn symbol(s: IndexSet) -> Self {
        let mut out = Self::zero();
        out.add_term(SurgerySymbol(s), C::one());
        out
    }

    pub fn add_term(&mut self, s: SurgerySymbol, c: C) {
        let v = self.terms.get(&s).cloned().unwrap_or_else(C::zero) + c;
        if v.is_zero() {
            self.terms.remove(&s);
        } else {
            self.terms.insert(s, v);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, k: &C) {
        for (s, c) in &other.terms {
            self.add_term(s.clone(), c.clone() * k.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-C::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, s: &IndexSet) -> C {
        self.terms.get(&SurgerySymbol(s.clone())).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SurgerySymbol, &C)> {
        self.terms.iter()
    }

    /// Whether every symbol lies inside `universe`.
    pub fn within(&self, universe: &IndexSet) -> bool {
        self.terms.keys().all(|s| s.0.is_subset(universe))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(s, c)| json!({"subset": s.0.iter().collect::<Vec<_>>(), "coefficient": coeff_to_json(c)}))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let items = v.as_array().ok_or_else(|| Error::parse("sum", "expected an array"))?;
        let mut out = Self::zero();
        for (n, item) in items.iter().enumerate() {
            let loc = format!("sum[{n}]");
            let raw: Vec<usize> = item
                .get("subset")
                .and_then(Value::as_array)
                .and_then(|a| a.iter().map(|x| x.as_u64().map(|x| x as usize)).collect())
                .ok_or_else(|| Error::parse(format!("{loc}.subset"), "expected an array of indices"))?;
            let subset: IndexSet = raw.iter().copied().collect();
            if subset.len() != raw.len() {
                return Err(Error::parse(format!("{loc}.subset"), "repeated index"));
            }
            let c = item
                .get("coefficient")
                .and_then(coeff_from_json::<C>)
                .ok_or_else(|| Error::parse(format!("{loc}.coefficient"), "expected an integer"))?;
            out.add_term(SurgerySymbol(subset), c);
        }
        Ok(out)
    }
}

impl<C: Coeff> fmt::Display for FormalSum<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (s, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else if n > 0 { "+" } else { "" };
            let sep = if n > 0 { " " } else { "" };
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sep}{sign}{s}")?;
            } else {
                write!(f, "{sep}{sign}{mag}*{s}")?;
            }
        }
        Ok(())
    }
}

fn subsets(set: &IndexSet) -> impl Iterator<Item = IndexSet> + '_ {
    let items: Vec<usize> = set.iter().copied().collect();
    (0u64..1 << items.len()).map(move |mask| {
        items.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &x)| x).collect()
    })
}

fn sign<C: Coeff>(n: usize) -> C {
    if n.is_multiple_of(2) {
        C::one()
    } else {
        -C::one()
    }
}

fn check_disjoint(a: &IndexSet, b: &IndexSet, what: &str) -> Result<()> {
    match a.intersection(b).next() {
        Some(x) => Err(Error::InvalidInput(format!("component {x} appears in both {what}"))),
        None => Ok(()),
    }
}

const MAX_BRACKET_SIZE: usize = 20;

/// `sum_{L' in L} (-1)^|L'| N_{extras + L'}`.
pub fn bracket<C: Coeff>(l: &IndexSet, extras: &IndexSet) -> Result<FormalSum<C>> {
    check_disjoint(l, extras, "the bracket set and the extras")?;
    if l.len() > MAX_BRACKET_SIZE {
        return Err(Error::ResourceBound(format!("bracket over {} components", l.len())));
    }
    let mut out = FormalSum::zero();
    for sub in subsets(l) {
        let n = sub.len();
        out.add_term(SurgerySymbol(extras.union(&sub).copied().collect()), sign(n));
    }
    Ok(out)
}

/// Both sides of `[N_L, K] = sum_{L' in L} (-1)^|L'| [N, K + L']`, expanded into symbols.
pub fn pushforward_expand<C: Coeff>(l: &IndexSet, k: &IndexSet) -> Result<(FormalSum<C>, FormalSum<C>)> {
    check_disjoint(l, k, "L and K")?;
    if l.len() + k.len() > MAX_BRACKET_SIZE {
        return Err(Error::ResourceBound(format!("expansion over {} components", l.len() + k.len())));
    }
    let lhs = bracket(k, l)?;
    let mut rhs = FormalSum::zero();
    for sub in subsets(l) {
        let inner: IndexSet = k.union(&sub).copied().collect();
        rhs.add_scaled(&bracket::<C>(&inner, &IndexSet::new())?, &sign(sub.len()));
    }
    Ok((lhs, rhs))
}
