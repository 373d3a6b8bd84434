//! Hermitian matrices over `Z[pi]` and the predicates of the Witt-type semigroups.

use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::groupring::GroupRingElement;
use crate::groups::Group;
use crate::intlinalg::determinant;
use crate::matrix::{invert as invert_matrix, Matrix};
use crate::scalar::Coeff;

/// A square matrix `A` over `Z[pi]` with `conj(A)^t = A`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HermitianMatrix<C>(Matrix<C>);

impl<C: Coeff> HermitianMatrix<C> {
    pub fn new(m: Matrix<C>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::SizeMismatch(format!("{}x{} matrix is not square", m.rows(), m.cols())));
        }
        for i in 0..m.rows() {
            for j in i..m.cols() {
                if m.get(j, i).involute() != *m.get(i, j) {
                    return Err(Error::InvalidInput(format!("matrix is not Hermitian at ({i},{j})")));
                }
            }
        }
        Ok(HermitianMatrix(m))
    }

    pub fn empty(group: &Group) -> Self {
        HermitianMatrix(Matrix::zeros(group, 0, 0))
    }

    pub fn zeros(group: &Group, n: usize) -> Self {
        HermitianMatrix(Matrix::zeros(group, n, n))
    }

    pub fn from_ints(group: &Group, rows: &[&[i64]]) -> Result<Self> {
        Self::new(Matrix::from_ints(group, rows))
    }

    /// The 1x1 matrix `(±1)`.
    pub fn unit(group: &Group, positive: bool) -> Self {
        let c = if positive { C::one() } else { -C::one() };
        HermitianMatrix(Matrix::diagonal(group, vec![GroupRingElement::from_int(group, c)]))
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub fn group(&self) -> &Group {
        self.0.group()
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElement<C> {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &Matrix<C> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<C> {
        self.0
    }

    pub fn neg(&self) -> Self {
        HermitianMatrix(self.0.neg())
    }

    /// Every diagonal entry is self-conjugate with even coefficients on order-2 elements.
    pub fn is_almost_even(&self) -> bool {
        self.almost_even_violation().is_none()
    }

    pub fn check_almost_even(&self) -> Result<()> {
        match self.almost_even_violation() {
            None => Ok(()),
            Some(e) => Err(e),
        }
    }

    fn almost_even_violation(&self) -> Option<Error> {
        (0..self.size()).find_map(|i| {
            self.get(i, i)
                .odd_involution_coefficient()
                .map(|(g, c)| Error::NotAlmostEven {
                    index: i,
                    element: g.to_string(),
                    coefficient: c.to_string(),
                })
        })
    }

    /// `P A conj(P)^t`
    pub fn congruence(&self, p: &Matrix<C>) -> Result<Self> {
        if p.cols() != self.size() {
            return Err(Error::SizeMismatch(format!(
                "congruence by a {}x{} matrix on size {}",
                p.rows(),
                p.cols(),
                self.size()
            )));
        }
        let m = p.checked_mul(&self.0)?.checked_mul(&p.conj_transpose())?;
        Ok(HermitianMatrix(m))
    }

    pub fn block_sum(&self, other: &Self) -> Result<Self> {
        Ok(HermitianMatrix(self.0.block_sum(&other.0)?))
    }

    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        Ok(HermitianMatrix(self.0.permute_symmetric(perm)?))
    }

    /// Diagonal with every diagonal entry `±1`.
    pub fn is_unidiagonal(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let x = self.get(i, j);
                if i == j {
                    matches!(x.as_integer(), Some(c) if c.abs().is_one())
                } else {
                    x.is_zero()
                }
            })
        })
    }

    /// Signs of the diagonal of a unidiagonal matrix.
    pub fn unidiagonal_signature(&self) -> Option<i64> {
        if !self.is_unidiagonal() {
            return None;
        }
        Some(
            (0..self.size())
                .map(|i| if self.get(i, i).as_integer().unwrap().is_positive() { 1 } else { -1 })
                .sum(),
        )
    }

    /// Literal block shape `(0 I; I X)`. Odd sizes are a domain error.
    pub fn is_metabolic_form(&self) -> Result<bool> {
        let n = self.size();
        if n % 2 == 1 {
            return Err(Error::Domain(format!("metabolic shape needs even size, got {n}")));
        }
        let k = n / 2;
        for i in 0..k {
            for j in 0..k {
                if !self.get(i, j).is_zero() {
                    return Ok(false);
                }
                let off = self.get(i, k + j);
                let ok = if i == j { off.is_one() } else { off.is_zero() };
                if !ok {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Two-sided inverse over the group ring; almost-evenness is inherited and checked.
    pub fn invert(&self) -> Result<HermitianMatrix<C>> {
        let inv = invert_matrix(&self.0)?;
        let inv = HermitianMatrix::new(inv)?;
        if self.is_almost_even() {
            debug_assert!(inv.is_almost_even());
            inv.check_almost_even()?;
        }
        Ok(inv)
    }

    pub fn to_json(&self) -> Value {
        self.0.to_json()
    }

    pub fn from_json(v: &Value, group: Option<&Group>) -> Result<Self> {
        Self::new(Matrix::from_json(v, group)?)
    }
}

impl<C: Coeff> fmt::Display for HermitianMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Outcome of the bounded elementary-factorization search.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ElementaryVerdict {
    Elementary,
    NotElementary,
    UnknownAtBound,
}

/// Default move budget for [`is_elementary`]: `10 n^2`.
pub fn default_elementary_bound(n: usize) -> usize {
    10 * n * n
}

/// Recognizes products of elementary generators: identity plus one off-diagonal
/// entry, or identity with one diagonal entry replaced by `±g`.
///
/// Greedy elimination: repeatedly pick an entry `±g` in an unused row and column
/// and clear its column and row with generator moves. Reaching a monomial matrix of
/// units proves the matrix elementary. A non-unit augmentation determinant proves
/// it is not. Running out of unit pivots or of `bound` moves gives `UnknownAtBound`.
pub fn is_elementary<C: Coeff>(p: &Matrix<C>, bound: usize) -> ElementaryVerdict {
    if !p.is_square() {
        return ElementaryVerdict::NotElementary;
    }
    let n = p.rows();
    if !determinant(&p.augmented()).abs().is_one() {
        return ElementaryVerdict::NotElementary;
    }
    let g = p.group().clone();
    let mut m = p.clone();
    let mut row_used = vec![false; n];
    let mut col_used = vec![false; n];
    let mut moves = 0usize;
    for _ in 0..n {
        let pivot = (0..n)
            .filter(|&i| !row_used[i])
            .flat_map(|i| (0..n).filter(|&j| !col_used[j]).map(move |j| (i, j)))
            .find(|&(i, j)| m.get(i, j).as_signed_element().is_some());
        let Some((i, j)) = pivot else {
            return ElementaryVerdict::UnknownAtBound;
        };
        let (positive, unit) = m.get(i, j).as_signed_element().unwrap();
        let c = if positive { C::one() } else { -C::one() };
        let u_inv = GroupRingElement::monomial(&g, g.inv(&unit), c);
        for k in 0..n {
            if k == i || m.get(k, j).is_zero() {
                continue;
            }
            let f = m.get(k, j) * &u_inv;
            for l in 0..n {
                let v = m.get(k, l) - &(&f * m.get(i, l));
                m.set(k, l, v);
            }
            moves += 1;
        }
        for l in 0..n {
            if l == j || m.get(i, l).is_zero() {
                continue;
            }
            let f = &u_inv * m.get(i, l);
            for k in 0..n {
                let v = m.get(k, l) - &(m.get(k, j) * &f);
                m.set(k, l, v);
            }
            moves += 1;
        }
        if moves > bound {
            return ElementaryVerdict::UnknownAtBound;
        }
        row_used[i] = true;
        col_used[j] = true;
    }
    ElementaryVerdict::Elementary
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupElement;
    use crate::scalar::Int;

    type H = HermitianMatrix<Int>;
    type M = Matrix<Int>;
    type E = GroupRingElement<Int>;

    fn t2() -> GroupElement {
        GroupElement::Cyclic(1)
    }

    fn zt(g: &Group, a: i64, b: i64) -> E {
        E::from_terms(g, [(GroupElement::Cyclic(0), Int::from(a)), (t2(), Int::from(b))]).unwrap()
    }

    #[test]
    fn almost_even_examples() {
        let z2 = Group::Cyclic(2);
        assert!(H::new(M::diagonal(&z2, vec![zt(&z2, 1, 2)])).unwrap().is_almost_even());
        let odd = H::new(M::diagonal(&z2, vec![zt(&z2, 0, 1)])).unwrap();
        assert!(!odd.is_almost_even());
        match odd.check_almost_even() {
            Err(Error::NotAlmostEven { index, element, .. }) => assert_eq!((index, element.as_str()), (0, "1")),
            other => panic!("unexpected {other:?}"),
        }
        let g = Group::Trivial;
        assert!(H::from_ints(&g, &[&[1, 5], &[5, 3]]).unwrap().is_almost_even());
    }

    #[test]
    fn non_hermitian_rejected() {
        let z3 = Group::Cyclic(3);
        let g = E::element(&z3, GroupElement::Cyclic(1));
        assert!(H::new(M::diagonal(&z3, vec![g])).is_err());
        assert!(H::from_ints(&Group::Trivial, &[&[1, 2], &[3, 4]]).is_err());
    }

    #[test]
    fn congruence_examples() {
        let g = Group::Trivial;
        let a = H::from_ints(&g, &[&[0, 1], &[1, 1]]).unwrap();
        assert_eq!(a.congruence(&M::identity(&g, 2)).unwrap(), a);
        let p = M::from_ints(&g, &[&[0, 1], &[1, -1]]);
        assert_eq!(a.congruence(&p).unwrap(), H::from_ints(&g, &[&[1, 0], &[0, -1]]).unwrap());
        let z2 = Group::Cyclic(2);
        let b = H::new(M::diagonal(&z2, vec![zt(&z2, 2, 2)])).unwrap();
        let tp = M::diagonal(&z2, vec![zt(&z2, 0, 1)]);
        assert_eq!(b.congruence(&tp).unwrap(), b);
        assert!(b.congruence(&M::identity(&z2, 2)).is_err());
    }

    #[test]
    fn block_sum_examples() {
        let g = Group::Trivial;
        let a = H::from_ints(&g, &[&[1]]).unwrap();
        assert_eq!(a.block_sum(&H::empty(&g)).unwrap(), a);
        let d = a.block_sum(&H::from_ints(&g, &[&[-1]]).unwrap()).unwrap();
        assert_eq!(d, H::from_ints(&g, &[&[1, 0], &[0, -1]]).unwrap());
        assert!(a.block_sum(&H::unit(&Group::Cyclic(2), true)).is_err());
    }

    #[test]
    fn unidiagonal_and_elementary() {
        let g = Group::Trivial;
        assert!(H::from_ints(&g, &[&[1, 0, 0], &[0, -1, 0], &[0, 0, 1]]).unwrap().is_unidiagonal());
        assert!(!H::from_ints(&g, &[&[1, 0], &[0, 2]]).unwrap().is_unidiagonal());
        let z3 = Group::Cyclic(3);
        let mut p = M::identity(&z3, 2);
        p.set(0, 1, &E::from_int(&z3, Int::from(3)) + &E::element(&z3, GroupElement::Cyclic(1)));
        assert_eq!(is_elementary(&p, 40), ElementaryVerdict::Elementary);
        let d = M::diagonal(&z3, vec![E::element(&z3, GroupElement::Cyclic(1)), E::one(&z3)]);
        assert_eq!(is_elementary(&d, 40), ElementaryVerdict::Elementary);
        let swap = M::from_ints(&Group::Trivial, &[&[0, 1], &[1, 0]]);
        assert_eq!(is_elementary(&swap, 40), ElementaryVerdict::Elementary);
        let two = M::from_ints(&Group::Trivial, &[&[2, 1], &[1, 1]]);
        assert_eq!(is_elementary(&two, 40), ElementaryVerdict::Elementary);
        let sing = M::from_ints(&Group::Trivial, &[&[2, 0], &[0, 1]]);
        assert_eq!(is_elementary(&sing, 40), ElementaryVerdict::NotElementary);
        // no unit entries anywhere: the greedy search gives up
        let hard = M::from_ints(&Group::Trivial, &[&[2, 3], &[3, 5]]);
        assert_eq!(is_elementary(&hard, 40), ElementaryVerdict::UnknownAtBound);
    }

    #[test]
    fn metabolic_shape() {
        let g = Group::Trivial;
        assert!(H::from_ints(&g, &[&[0, 1], &[1, 7]]).unwrap().is_metabolic_form().unwrap());
        assert!(!H::from_ints(&g, &[&[1, 0], &[0, -1]]).unwrap().is_metabolic_form().unwrap());
        let m4 = H::from_ints(&g, &[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 2, 5], &[0, 1, 5, -3]]).unwrap();
        assert!(m4.is_metabolic_form().unwrap());
        assert!(matches!(H::from_ints(&g, &[&[1]]).unwrap().is_metabolic_form(), Err(Error::Domain(_))));
    }

    #[test]
    fn inverse_of_hermitian() {
        let z2 = Group::Cyclic(2);
        let t = H::new(M::diagonal(&z2, vec![zt(&z2, 0, 1)])).unwrap();
        assert_eq!(t.invert().unwrap(), t);
        let g = Group::Trivial;
        let a = H::from_ints(&g, &[&[0, 1], &[1, 1]]).unwrap();
        let inv = a.invert().unwrap();
        assert_eq!(inv, H::from_ints(&g, &[&[-1, 1], &[1, 0]]).unwrap());
        assert_eq!(inv.invert().unwrap(), a);
    }
}
