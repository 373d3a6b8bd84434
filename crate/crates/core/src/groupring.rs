//! Exact arithmetic in the integral group ring `Z[pi]`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::{Group, GroupElement, QuotientMap};
use crate::scalar::{coeff_from_json, coeff_to_json, Coeff};

/// Finite-support integer combination of group elements. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupRingElement<C> {
    group: Group,
    terms: BTreeMap<GroupElement, C>,
}

impl<C: Coeff> PartialOrd for GroupRingElement<C> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<C: Coeff> Ord for GroupRingElement<C> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.terms.iter().cmp(other.terms.iter())
    }
}

impl<C: Coeff> GroupRingElement<C> {
    pub fn zero(group: &Group) -> Self {
        GroupRingElement {
            group: group.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(group: &Group) -> Self {
        Self::monomial(group, group.identity(), C::one())
    }

    /// `c * 1`
    pub fn from_int(group: &Group, c: C) -> Self {
        Self::monomial(group, group.identity(), c)
    }

    pub fn monomial(group: &Group, g: GroupElement, c: C) -> Self {
        let mut x = Self::zero(group);
        if !c.is_zero() {
            x.terms.insert(g, c);
        }
        x
    }

    /// Group element `g` with coefficient one.
    pub fn element(group: &Group, g: GroupElement) -> Self {
        Self::monomial(group, g, C::one())
    }

    /// Sums the given terms; repeated elements accumulate.
    pub fn from_terms(group: &Group, terms: impl IntoIterator<Item = (GroupElement, C)>) -> Result<Self> {
        let mut x = Self::zero(group);
        for (g, c) in terms {
            group.check(&g)?;
            x.add_term(g, c);
        }
        Ok(x)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &C)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, g: &GroupElement) -> C {
        self.terms.get(g).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(&self.group.identity()).is_one()
    }

    /// Whether the element is `c * 1` for an integer `c`.
    pub fn as_integer(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (g, c) = self.terms.iter().next().unwrap();
                self.group.is_identity(g).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// `±g` for a group element `g`, i.e. a trivial unit.
    pub fn as_signed_element(&self) -> Option<(bool, GroupElement)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (g, c) = self.terms.iter().next().unwrap();
        if c.is_one() {
            Some((true, g.clone()))
        } else if (-c.clone()).is_one() {
            Some((false, g.clone()))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, g: GroupElement, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch(format!("{} vs {}", self.group, other.group)))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    /// Convolution product.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let mut acc: BTreeMap<GroupElement, C> = BTreeMap::new();
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                let gh = self.group.mul(g, h);
                let slot = acc.entry(gh).or_insert_with(C::zero);
                *slot = slot.clone() + a.clone() * b.clone();
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(GroupRingElement {
            group: self.group.clone(),
            terms: acc,
        })
    }

    pub fn neg_ref(&self) -> Self {
        GroupRingElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(g, c)| (g.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(&self.group);
        }
        GroupRingElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c.clone() * k.clone())).collect(),
        }
    }

    /// Multiplies on the left by a group element.
    pub fn left_translate(&self, g: &GroupElement) -> Self {
        GroupRingElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(h, c)| (self.group.mul(g, h), c.clone())).collect(),
        }
    }

    /// Multiplies on the right by a group element.
    pub fn right_translate(&self, g: &GroupElement) -> Self {
        GroupRingElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(h, c)| (self.group.mul(h, g), c.clone())).collect(),
        }
    }

    /// The involution `sum n_g g -> sum n_g g^{-1}`.
    pub fn involute(&self) -> Self {
        GroupRingElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(g, c)| (self.group.inv(g), c.clone())).collect(),
        }
    }

    /// Sum of coefficients.
    pub fn augmentation(&self) -> C {
        self.terms.values().fold(C::zero(), |a, c| a + c.clone())
    }

    pub fn is_self_conjugate(&self) -> bool {
        self.involute() == *self
    }

    /// Self-conjugate, and every order-2 element has an even coefficient.
    pub fn is_self_conjugate_almost_even(&self) -> bool {
        self.is_self_conjugate() && self.odd_involution_coefficient().is_none()
    }

    /// First order-2 element carrying an odd coefficient, if any.
    pub fn odd_involution_coefficient(&self) -> Option<(GroupElement, C)> {
        self.terms
            .iter()
            .find(|(g, c)| self.group.is_involution(g) && !Coeff::is_even(*c))
            .map(|(g, c)| (g.clone(), c.clone()))
    }

    /// Writes a self-conjugate almost-even `x` as `d + y + involute(y)` with `d` in `{0, 1}`.
    ///
    /// For a pair `{g, g^-1}` with `g^2 != 1` the whole coefficient goes to the smaller
    /// of the two; an involution contributes half its coefficient; the coefficient `c`
    /// of the identity contributes `d = c mod 2` and `(c - d) / 2`.
    pub fn split_self_conjugate(&self) -> Result<(C, Self)> {
        if !self.is_self_conjugate() {
            return Err(Error::InvalidInput(format!("{self} is not self-conjugate")));
        }
        if let Some((g, c)) = self.odd_involution_coefficient() {
            return Err(Error::InvalidInput(format!(
                "{self} has odd coefficient {c} on order-2 element {g}"
            )));
        }
        let two = C::one() + C::one();
        let mut d = C::zero();
        let mut y = Self::zero(&self.group);
        for (g, c) in &self.terms {
            if self.group.is_identity(g) {
                d = c.mod_floor(&two);
                y.add_term(g.clone(), (c.clone() - d.clone()) / two.clone());
            } else if self.group.is_involution(g) {
                y.add_term(g.clone(), c.clone() / two.clone());
            } else if *g < self.group.inv(g) {
                y.add_term(g.clone(), c.clone());
            }
        }
        Ok((d, y))
    }

    /// Image under the ring map induced by `q`.
    pub fn map_through(&self, q: &QuotientMap) -> Result<Self> {
        if *q.source() != self.group {
            return Err(Error::GroupMismatch(format!(
                "element over {} mapped by quotient from {}",
                self.group,
                q.source()
            )));
        }
        let mut out = Self::zero(q.target());
        for (g, c) in &self.terms {
            out.add_term(q.image(g)?, c.clone());
        }
        Ok(out)
    }

    /// Membership in the two-sided ideal generated by `h - 1`, `h` in `ker q`.
    /// Since the kernel is normal, this is exactly the kernel of the induced ring map.
    pub fn ideal_member(&self, q: &QuotientMap) -> Result<bool> {
        Ok(self.map_through(q)?.is_zero())
    }

    /// Evaluates at a ring homomorphism `Z[pi] -> R` given on group elements.
    pub fn evaluate<R, F>(&self, zero: R, mut f: F) -> R
    where
        R: Add<Output = R>,
        F: FnMut(&GroupElement, &C) -> R,
    {
        self.terms.iter().fold(zero, |acc, (g, c)| acc + f(g, c))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group.to_json(),
            "terms": self.terms_json(),
        })
    }

    /// The `terms` array alone, sorted by the group order.
    pub fn terms_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(g, c)| json!({"g": self.group.element_to_json(g), "c": coeff_to_json(c)}))
                .collect(),
        )
    }

    /// Parses `{"group": .., "terms": [..]}`. When `context` is given the group
    /// may be omitted, and a bare integer is read as a multiple of the identity.
    pub fn from_json(v: &Value, context: Option<&Group>) -> Result<Self> {
        if let (Some(g), Some(_)) = (context, coeff_from_json::<C>(v)) {
            return Ok(Self::from_int(g, coeff_from_json(v).unwrap()));
        }
        let group = match (v.get("group"), context) {
            (Some(gv), ctx) => {
                let g = Group::from_json(gv)?;
                if let Some(c) = ctx {
                    if *c != g {
                        return Err(Error::GroupMismatch(format!("entry over {g}, expected {c}")));
                    }
                }
                g
            }
            (None, Some(c)) => c.clone(),
            (None, None) => return Err(Error::parse("element.group", "missing group")),
        };
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("element.terms", "expected an array"))?;
        let mut x = Self::zero(&group);
        for (i, t) in terms.iter().enumerate() {
            let g = t
                .get("g")
                .ok_or_else(|| Error::parse(format!("terms[{i}].g"), "missing"))
                .and_then(|gv| group.parse_element(gv))?;
            let c = t
                .get("c")
                .and_then(coeff_from_json::<C>)
                .ok_or_else(|| Error::parse(format!("terms[{i}].c"), "expected an integer"))?;
            x.add_term(g, c);
        }
        Ok(x)
    }
}

impl<C: Coeff> fmt::Display for GroupRingElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (g, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if self.group.is_identity(g) {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "[{g}]")?;
            } else {
                write!(f, "{mag}[{g}]")?;
            }
        }
        Ok(())
    }
}

// Operator forms panic on group mismatch; use the `checked_*` methods on untrusted input.

impl<C: Coeff> Add for &GroupRingElement<C> {
    type Output = GroupRingElement<C>;
    fn add(self, rhs: Self) -> GroupRingElement<C> {
        self.checked_add(rhs).expect("group ring addition")
    }
}

impl<C: Coeff> Sub for &GroupRingElement<C> {
    type Output = GroupRingElement<C>;
    fn sub(self, rhs: Self) -> GroupRingElement<C> {
        self.checked_sub(rhs).expect("group ring subtraction")
    }
}

impl<C: Coeff> Mul for &GroupRingElement<C> {
    type Output = GroupRingElement<C>;
    fn mul(self, rhs: Self) -> GroupRingElement<C> {
        self.checked_mul(rhs).expect("group ring multiplication")
    }
}

impl<C: Coeff> Neg for &GroupRingElement<C> {
    type Output = GroupRingElement<C>;
    fn neg(self) -> GroupRingElement<C> {
        self.neg_ref()
    }
}

impl<C: Coeff> Add for GroupRingElement<C> {
    type Output = GroupRingElement<C>;
    fn add(self, rhs: Self) -> GroupRingElement<C> {
        &self + &rhs
    }
}

impl<C: Coeff> Sub for GroupRingElement<C> {
    type Output = GroupRingElement<C>;
    fn sub(self, rhs: Self) -> GroupRingElement<C> {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for GroupRingElement<C> {
    type Output = GroupRingElement<C>;
    fn mul(self, rhs: Self) -> GroupRingElement<C> {
        &self * &rhs
    }
}

impl<C: Coeff> Neg for GroupRingElement<C> {
    type Output = GroupRingElement<C>;
    fn neg(self) -> GroupRingElement<C> {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Int;

    type E = GroupRingElement<Int>;

    fn el(g: &Group, terms: &[(GroupElement, i64)]) -> E {
        E::from_terms(g, terms.iter().map(|(x, c)| (x.clone(), Int::from(*c)))).unwrap()
    }

    fn c(k: u64) -> GroupElement {
        GroupElement::Cyclic(k)
    }

    fn t(k: i64) -> GroupElement {
        GroupElement::FreeAbelian(vec![k])
    }

    #[test]
    fn involution_examples() {
        let z3 = Group::Cyclic(3);
        assert_eq!(el(&z3, &[(c(0), 2), (c(1), 1)]).involute(), el(&z3, &[(c(0), 2), (c(2), 1)]));
        let z = Group::integers();
        let x = el(&z, &[(t(0), 1), (t(1), 3), (t(2), -1)]);
        assert_eq!(x.involute(), el(&z, &[(t(0), 1), (t(-1), 3), (t(-2), -1)]));
        assert_eq!(x.involute().involute(), x);
    }

    #[test]
    fn multiplication_examples() {
        let z2 = Group::Cyclic(2);
        let a = el(&z2, &[(c(0), 1), (c(1), 1)]);
        let b = el(&z2, &[(c(0), 1), (c(1), -1)]);
        assert!((&a * &b).is_zero());
        let z = Group::integers();
        let p = el(&z, &[(t(0), 1), (t(1), 1)]);
        assert_eq!(&p * &el(&z, &[(t(1), 1)]), el(&z, &[(t(1), 1), (t(2), 1)]));
        let f2 = Group::Free(2);
        let a = E::element(&f2, GroupElement::Free(vec![1]));
        let bb = E::element(&f2, GroupElement::Free(vec![2]));
        assert_ne!(&a * &bb, &bb * &a);
        assert!(a.checked_mul(&p).is_err());
    }

    #[test]
    fn almost_even_examples() {
        let z2 = Group::Cyclic(2);
        assert!(!el(&z2, &[(c(0), 1), (c(1), 1)]).is_self_conjugate_almost_even());
        assert!(el(&z2, &[(c(0), 3), (c(1), 2)]).is_self_conjugate_almost_even());
        let z3 = Group::Cyclic(3);
        assert!(el(&z3, &[(c(0), 1), (c(1), 1), (c(2), 1)]).is_self_conjugate_almost_even());
        assert!(!el(&z3, &[(c(1), 1)]).is_self_conjugate_almost_even());
    }

    #[test]
    fn split_examples() {
        let z2 = Group::Cyclic(2);
        let (d, y) = E::zero(&z2).split_self_conjugate().unwrap();
        assert_eq!((d, y.is_zero()), (Int::from(0), true));
        let (d, y) = el(&z2, &[(c(0), 3), (c(1), 2)]).split_self_conjugate().unwrap();
        assert_eq!(d, Int::from(1));
        assert_eq!(y, el(&z2, &[(c(0), 1), (c(1), 1)]));
        let z = Group::integers();
        let (d, y) = el(&z, &[(t(1), 1), (t(-1), 1)]).split_self_conjugate().unwrap();
        assert_eq!(d, Int::from(0));
        // the smaller of t, t^-1 in the numeric order is t^-1
        assert_eq!(y, el(&z, &[(t(-1), 1)]));
        assert!(el(&z2, &[(c(1), 1)]).split_self_conjugate().is_err());
    }

    #[test]
    fn ideal_membership_examples() {
        let z = Group::integers();
        let q = QuotientMap::new(z.clone(), Group::Cyclic(2), vec![c(1)]).unwrap();
        assert!(el(&z, &[(t(2), 1), (t(0), -1)]).ideal_member(&q).unwrap());
        assert!(!el(&z, &[(t(1), 1), (t(0), -2)]).ideal_member(&q).unwrap());
        let z2 = Group::FreeAbelian(2);
        let q2 = QuotientMap::new(z2.clone(), z.clone(), vec![t(1), t(0)]).unwrap();
        let uv = GroupElement::FreeAbelian(vec![1, 1]);
        let u = GroupElement::FreeAbelian(vec![1, 0]);
        assert!(el(&z2, &[(uv, 1), (u, -1)]).ideal_member(&q2).unwrap());
        assert!(el(&z, &[(t(0), 1)]).ideal_member(&q2).is_err());
    }

    #[test]
    fn json_roundtrip_and_order() {
        let f2 = Group::Free(2);
        let x = el(&f2, &[(GroupElement::Free(vec![1, -2]), 4), (GroupElement::Free(vec![]), -1)]);
        let v = x.to_json();
        assert_eq!(v["terms"][0]["g"], json!("1"));
        assert_eq!(E::from_json(&v, None).unwrap(), x);
        let huge = E::from_int(&f2, "123456789012345678901234567890".parse().unwrap());
        assert_eq!(E::from_json(&huge.to_json(), None).unwrap(), huge);
    }
}
