//! Realizing almost-even Hermitian matrices as linking matrices, and writing
//! self-conjugate ideal elements as sums of norm-like terms.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groupring::GroupRingElement;
use crate::groups::{Group, GroupElement, QuotientMap};
use crate::hermitian::HermitianMatrix;
use crate::matrix::Matrix;
use crate::scalar::Coeff;

/// One band or twist move on a linking matrix. Indices are 0-based.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RealizationMove {
    /// Adds `±g` to `a_ij` and `±g^-1` to `a_ji`. With `i == j` (only for `g != 1`)
    /// adds `±(g + g^-1)`, or `±2g` when `g` has order two.
    OffDiagonal {
        i: usize,
        j: usize,
        positive: bool,
        g: GroupElement,
    },
    /// Adds `±1` to `a_ii`.
    DiagonalTwist { i: usize, positive: bool },
}

impl RealizationMove {
    pub fn to_json(&self, group: &Group) -> Value {
        match self {
            RealizationMove::OffDiagonal { i, j, positive, g } => json!({
                "kind": "off_diagonal",
                "i": i,
                "j": j,
                "sign": if *positive { 1 } else { -1 },
                "g": group.element_to_json(g),
            }),
            RealizationMove::DiagonalTwist { i, positive } => json!({
                "kind": "diagonal_twist",
                "i": i,
                "sign": if *positive { 1 } else { -1 },
            }),
        }
    }

    pub fn from_json(v: &Value, group: &Group) -> Result<Self> {
        let index = |key: &str| {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::parse(key, "expected a non-negative index"))
        };
        let positive = match v.get("sign").and_then(Value::as_i64) {
            Some(1) => true,
            Some(-1) => false,
            _ => return Err(Error::parse("sign", "expected 1 or -1")),
        };
        match v.get("kind").and_then(Value::as_str) {
            Some("off_diagonal") => {
                let g = group.parse_element(v.get("g").ok_or_else(|| Error::parse("g", "missing"))?)?;
                Ok(RealizationMove::OffDiagonal { i: index("i")?, j: index("j")?, positive, g })
            }
            Some("diagonal_twist") => Ok(RealizationMove::DiagonalTwist { i: index("i")?, positive }),
            _ => Err(Error::parse("kind", "expected off_diagonal or diagonal_twist")),
        }
    }
}

fn signed<C: Coeff>(positive: bool) -> C {
    if positive {
        C::one()
    } else {
        -C::one()
    }
}

/// Moves that build `a` from the zero matrix: off-diagonal and symmetric diagonal
/// content first, in entry order, then the twists on the identity coefficients.
pub fn realization_moves<C: Coeff>(a: &HermitianMatrix<C>) -> Result<Vec<RealizationMove>> {
    a.check_almost_even()?;
    let group = a.group();
    let n = a.size();
    let two = C::one() + C::one();
    let mut moves = Vec::new();
    let mut twists = Vec::new();
    for i in 0..n {
        for (g, c) in a.get(i, i).terms() {
            let positive = c.is_positive();
            let copies = if group.is_identity(g) {
                twists.extend(repeat(c.abs(), RealizationMove::DiagonalTwist { i, positive }));
                continue;
            } else if group.is_involution(g) {
                c.abs() / two.clone()
            } else if *g < group.inv(g) {
                c.abs()
            } else {
                continue;
            };
            let mv = RealizationMove::OffDiagonal { i, j: i, positive, g: g.clone() };
            moves.extend(repeat(copies, mv));
        }
        for j in i + 1..n {
            for (g, c) in a.get(i, j).terms() {
                let mv = RealizationMove::OffDiagonal { i, j, positive: c.is_positive(), g: g.clone() };
                moves.extend(repeat(c.abs(), mv));
            }
        }
    }
    moves.extend(twists);
    Ok(moves)
}

fn repeat<C: Coeff>(count: C, mv: RealizationMove) -> impl Iterator<Item = RealizationMove> {
    let k = count.to_usize().expect("move count fits in memory");
    std::iter::repeat_n(mv, k)
}

/// Replays moves on `start`.
pub fn apply_moves<C: Coeff>(start: &HermitianMatrix<C>, moves: &[RealizationMove]) -> Result<HermitianMatrix<C>> {
    let group = start.group().clone();
    let n = start.size();
    let mut m: Matrix<C> = start.matrix().clone();
    let check = |i: usize| {
        if i >= n {
            Err(Error::InvalidInput(format!("move index {i} out of range for size {n}")))
        } else {
            Ok(())
        }
    };
    for mv in moves {
        match mv {
            RealizationMove::OffDiagonal { i, j, positive, g } => {
                check(*i)?;
                check(*j)?;
                group.check(g)?;
                let s: C = signed(*positive);
                let gi = group.inv(g);
                if i == j {
                    if group.is_identity(g) {
                        return Err(Error::InvalidInput(format!(
                            "off-diagonal move at ({i},{i}) needs a non-identity element"
                        )));
                    }
                    let mut x = m.get(*i, *i).clone();
                    x.add_term(g.clone(), s.clone());
                    x.add_term(gi, s);
                    m.set(*i, *i, x);
                } else {
                    let mut x = m.get(*i, *j).clone();
                    x.add_term(g.clone(), s.clone());
                    m.set(*i, *j, x);
                    let mut y = m.get(*j, *i).clone();
                    y.add_term(gi, s);
                    m.set(*j, *i, y);
                }
            }
            RealizationMove::DiagonalTwist { i, positive } => {
                check(*i)?;
                let mut x = m.get(*i, *i).clone();
                x.add_term(group.identity(), signed(*positive));
                m.set(*i, *i, x);
            }
        }
    }
    HermitianMatrix::new(m)
}

/// `sign * (g1 (h - 1) g2 + conj(g2) (h^-1 - 1) conj(g1))` with `h` in the kernel.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormLikeTerm {
    pub positive: bool,
    pub g1: GroupElement,
    pub h: GroupElement,
    pub g2: GroupElement,
}

impl NormLikeTerm {
    pub fn value<C: Coeff>(&self, group: &Group) -> GroupRingElement<C> {
        let s: C = signed(self.positive);
        let (g1, g2, h) = (&self.g1, &self.g2, &self.h);
        let mut out = GroupRingElement::zero(group);
        out.add_term(group.mul(&group.mul(g1, h), g2), s.clone());
        out.add_term(group.mul(g1, g2), -s.clone());
        let (g1i, g2i, hi) = (group.inv(g1), group.inv(g2), group.inv(h));
        out.add_term(group.mul(&group.mul(&g2i, &hi), &g1i), s.clone());
        out.add_term(group.mul(&g2i, &g1i), -s);
        out
    }

    pub fn to_json(&self, group: &Group) -> Value {
        json!({
            "sign": if self.positive { 1 } else { -1 },
            "g1": group.element_to_json(&self.g1),
            "h": group.element_to_json(&self.h),
            "g2": group.element_to_json(&self.g2),
        })
    }

    pub fn from_json(v: &Value, group: &Group) -> Result<Self> {
        let positive = match v.get("sign").and_then(Value::as_i64) {
            Some(1) => true,
            Some(-1) => false,
            _ => return Err(Error::parse("sign", "expected 1 or -1")),
        };
        let el = |k: &str| group.parse_element(v.get(k).ok_or_else(|| Error::parse(k, "missing"))?);
        Ok(NormLikeTerm { positive, g1: el("g1")?, h: el("h")?, g2: el("g2")? })
    }
}

/// Sum of the term values.
pub fn eval_normlike<C: Coeff>(terms: &[NormLikeTerm], group: &Group) -> Result<GroupRingElement<C>> {
    let mut out = GroupRingElement::zero(group);
    for t in terms {
        for x in [&t.g1, &t.h, &t.g2] {
            group.check(x)?;
        }
        out = &out + &t.value(group);
    }
    Ok(out)
}

/// Writes `lambda` as a sum of norm-like terms relative to `q`.
///
/// The support is split into cosets of `ker q`. A coset `g` with `g^2 != 1` is
/// handled together with `g^-1` through the smaller of the two: every `x` in it with
/// coefficient `e` gives `e` copies of `(1, x lift(g)^-1, lift(g))`, whose value is
/// `x + x^-1 - lift(g) - lift(g)^-1`. Cosets with `g^2 = 1` pair `x` with `x^-1`
/// instead, and self-inverse `x` use half their (even) coefficient. The correction
/// terms cancel because every coset sum of coefficients vanishes.
pub fn normlike_decompose<C: Coeff>(lambda: &GroupRingElement<C>, q: &QuotientMap) -> Result<Vec<NormLikeTerm>> {
    let src = q.source();
    let dst = q.target();
    if lambda.group() != src {
        return Err(Error::GroupMismatch(format!("element over {} with quotient from {src}", lambda.group())));
    }
    if !lambda.is_self_conjugate() {
        return Err(Error::InvalidInput(format!("{lambda} is not self-conjugate")));
    }
    if let Some((g, c)) = lambda.odd_involution_coefficient() {
        return Err(Error::InvalidInput(format!("{lambda} is not almost even: coefficient {c} on order-2 element {g}")));
    }
    if !lambda.ideal_member(q)? {
        return Err(Error::InvalidInput(format!("{lambda} is not in the ideal generated by the kernel")));
    }
    let mut cosets: BTreeMap<GroupElement, Vec<(GroupElement, C)>> = BTreeMap::new();
    for (x, c) in lambda.terms() {
        cosets.entry(q.image(x)?).or_default().push((x.clone(), c.clone()));
    }
    let two = C::one() + C::one();
    let mut terms = Vec::new();
    for (g, members) in &cosets {
        let paired = dst.is_involution(g) || dst.is_identity(g);
        if !paired && *g > dst.inv(g) {
            continue;
        }
        let radius = members.iter().map(|(x, _)| src.word_length(x)).max().unwrap_or(0);
        let lift = if dst.is_identity(g) { src.identity() } else { q.minimal_preimage(g, radius)? };
        let lift_inv = src.inv(&lift);
        for (x, c) in members {
            let xi = src.inv(x);
            let copies = if !paired {
                c.abs()
            } else if *x == xi {
                c.abs() / two.clone()
            } else if *x > xi {
                c.abs()
            } else {
                continue;
            };
            let h = src.mul(x, &lift_inv);
            if src.is_identity(&h) {
                continue;
            }
            let term = NormLikeTerm {
                positive: c.is_positive(),
                g1: src.identity(),
                h,
                g2: lift.clone(),
            };
            let k = copies.to_usize().expect("term count fits in memory");
            terms.extend(std::iter::repeat_n(term, k));
        }
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Int;

    type H = HermitianMatrix<Int>;
    type E = GroupRingElement<Int>;

    fn el(g: &Group, terms: &[(GroupElement, i64)]) -> E {
        E::from_terms(g, terms.iter().map(|(x, c)| (x.clone(), Int::from(*c)))).unwrap()
    }

    #[test]
    fn zero_matrix_has_no_moves() {
        let g = Group::Cyclic(3);
        assert!(realization_moves(&H::zeros(&g, 3)).unwrap().is_empty());
    }

    #[test]
    fn integer_example() {
        let g = Group::Trivial;
        let a = H::from_ints(&g, &[&[2, 1], &[1, 0]]).unwrap();
        let moves = realization_moves(&a).unwrap();
        assert_eq!(
            moves,
            vec![
                RealizationMove::OffDiagonal { i: 0, j: 1, positive: true, g: GroupElement::Trivial },
                RealizationMove::DiagonalTwist { i: 0, positive: true },
                RealizationMove::DiagonalTwist { i: 0, positive: true },
            ]
        );
        assert_eq!(apply_moves(&H::zeros(&g, 2), &moves).unwrap(), a);
    }

    #[test]
    fn involution_example() {
        let z2 = Group::Cyclic(2);
        let t = GroupElement::Cyclic(1);
        let a = H::new(Matrix::diagonal(&z2, vec![el(&z2, &[(t.clone(), 2)])])).unwrap();
        let moves = realization_moves(&a).unwrap();
        assert_eq!(moves, vec![RealizationMove::OffDiagonal { i: 0, j: 0, positive: true, g: t.clone() }]);
        assert_eq!(apply_moves(&H::zeros(&z2, 1), &moves).unwrap(), a);
        let odd = H::new(Matrix::diagonal(&z2, vec![el(&z2, &[(t, 1)])])).unwrap();
        assert!(matches!(realization_moves(&odd), Err(Error::NotAlmostEven { index: 0, .. })));
    }

    #[test]
    fn apply_examples() {
        let g = Group::Trivial;
        let one = H::from_ints(&g, &[&[1]]).unwrap();
        assert_eq!(apply_moves(&one, &[]).unwrap(), one);
        let twist = RealizationMove::DiagonalTwist { i: 0, positive: false };
        assert_eq!(apply_moves(&one, &[twist]).unwrap(), H::zeros(&g, 1));
        let bad = RealizationMove::DiagonalTwist { i: 1, positive: true };
        assert!(apply_moves(&one, &[bad]).is_err());
        let diag_one = RealizationMove::OffDiagonal { i: 0, j: 0, positive: true, g: GroupElement::Trivial };
        assert!(apply_moves(&one, &[diag_one]).is_err());
    }

    #[test]
    fn move_json_round_trip() {
        let f2 = Group::free(2).unwrap();
        let a = GroupElement::Free(vec![1, -2]);
        let mv = RealizationMove::OffDiagonal { i: 0, j: 1, positive: false, g: a };
        assert_eq!(RealizationMove::from_json(&mv.to_json(&f2), &f2).unwrap(), mv);
    }

    #[test]
    fn normlike_examples() {
        let z = Group::integers();
        let z2 = Group::Cyclic(2);
        let q = QuotientMap::new(z.clone(), z2.clone(), vec![GroupElement::Cyclic(1)]).unwrap();
        let u = |k: i64| GroupElement::FreeAbelian(vec![k]);
        assert!(normlike_decompose(&E::zero(&z), &q).unwrap().is_empty());
        let lambda = el(&z, &[(u(2), 1), (u(-2), 1), (u(0), -2)]);
        let terms = normlike_decompose(&lambda, &q).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].h, u(2));
        assert_eq!(eval_normlike::<Int>(&terms, &z).unwrap(), lambda);

        let z4 = Group::Cyclic(4);
        let q4 = QuotientMap::new(z4.clone(), z2, vec![GroupElement::Cyclic(1)]).unwrap();
        let lambda = el(&z4, &[(GroupElement::Cyclic(2), 2), (GroupElement::Cyclic(0), -2)]);
        let terms = normlike_decompose(&lambda, &q4).unwrap();
        assert_eq!(terms, vec![NormLikeTerm { positive: true, g1: GroupElement::Cyclic(0), h: GroupElement::Cyclic(2), g2: GroupElement::Cyclic(0) }]);
        assert_eq!(eval_normlike::<Int>(&terms, &z4).unwrap(), lambda);
    }

    #[test]
    fn normlike_off_identity_coset() {
        let z = Group::integers();
        let z2 = Group::Cyclic(2);
        let q = QuotientMap::new(z.clone(), z2, vec![GroupElement::Cyclic(1)]).unwrap();
        let u = |k: i64| GroupElement::FreeAbelian(vec![k]);
        // u^3 + u^-3 - u - u^-1 lies in the odd coset
        let lambda = el(&z, &[(u(3), 1), (u(-3), 1), (u(1), -1), (u(-1), -1)]);
        let terms = normlike_decompose(&lambda, &q).unwrap();
        assert_eq!(eval_normlike::<Int>(&terms, &z).unwrap(), lambda);
        let single = NormLikeTerm { positive: true, g1: u(0), h: u(5), g2: u(0) };
        assert_eq!(single.value::<Int>(&z), el(&z, &[(u(5), 1), (u(-5), 1), (u(0), -2)]));
    }

    #[test]
    fn normlike_rejects_invalid() {
        let z = Group::integers();
        let q = QuotientMap::new(z.clone(), Group::Cyclic(2), vec![GroupElement::Cyclic(1)]).unwrap();
        let u = |k: i64| GroupElement::FreeAbelian(vec![k]);
        assert!(normlike_decompose(&el(&z, &[(u(1), 1)]), &q).is_err());
        assert!(normlike_decompose(&el(&z, &[(u(1), 1), (u(-1), 1)]), &q).is_err());
    }
}
