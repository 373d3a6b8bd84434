//! Matrices over `Z[pi]` and their inverses.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::groupring::GroupRingElement;
use crate::groups::{Group, GroupElement};
use crate::scalar::Coeff;

/// Dense `rows x cols` matrix over a group ring, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<C> {
    group: Group,
    rows: usize,
    cols: usize,
    entries: Vec<GroupRingElement<C>>,
}

impl<C: Coeff> Matrix<C> {
    pub fn zeros(group: &Group, rows: usize, cols: usize) -> Self {
        Matrix {
            group: group.clone(),
            rows,
            cols,
            entries: vec![GroupRingElement::zero(group); rows * cols],
        }
    }

    pub fn identity(group: &Group, n: usize) -> Self {
        let mut m = Self::zeros(group, n, n);
        for i in 0..n {
            m.set(i, i, GroupRingElement::one(group));
        }
        m
    }

    pub fn from_rows(group: &Group, rows: Vec<Vec<GroupRingElement<C>>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::SizeMismatch(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for x in row {
                if x.group() != group {
                    return Err(Error::GroupMismatch(format!("entry over {}, matrix over {group}", x.group())));
                }
                entries.push(x);
            }
        }
        Ok(Matrix {
            group: group.clone(),
            rows: nrows,
            cols,
            entries,
        })
    }

    /// Integer matrix embedded through the identity element.
    pub fn from_ints(group: &Group, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| GroupRingElement::from_int(group, <C as Coeff>::from_i64(v))).collect())
            .collect();
        Self::from_rows(group, rows).expect("rectangular integer rows")
    }

    pub fn diagonal(group: &Group, diag: Vec<GroupRingElement<C>>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(group, n, n);
        for (i, x) in diag.into_iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GroupRingElement<C> {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: GroupRingElement<C>) {
        self.entries[r * self.cols + c] = x;
    }

    pub fn entries(&self) -> &[GroupRingElement<C>] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GroupRingElement::is_zero)
    }

    fn check_group(&self, other: &Self) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch(format!("{} vs {}", self.group, other.group)))
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        if self.cols != other.rows {
            return Err(Error::SizeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.group, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::SizeMismatch("matrix sum of different shapes".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(Matrix { entries, ..self.clone() })
    }

    pub fn neg(&self) -> Self {
        Matrix {
            entries: self.entries.iter().map(GroupRingElement::neg_ref).collect(),
            ..self.clone()
        }
    }

    /// Involuted transpose `conj(M)^t`.
    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(&self.group, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).involute());
            }
        }
        out
    }

    pub fn block_sum(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        let mut out = Self::zeros(&self.group, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// `out[i][j] = self[perm[i]][perm[j]]`, i.e. `Q M Q^t` for the permutation matrix `Q`.
    pub fn permute_symmetric(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.rows)?;
        if !self.is_square() {
            return Err(Error::SizeMismatch("symmetric permutation of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut out = Self::zeros(&self.group, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(perm[i], perm[j]).clone());
            }
        }
        Ok(out)
    }

    /// Permutation matrix `Q` with `Q M Q^t = M.permute_symmetric(perm)`.
    pub fn permutation(group: &Group, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, perm.len())?;
        let mut q = Self::zeros(group, perm.len(), perm.len());
        for (i, &p) in perm.iter().enumerate() {
            q.set(i, p, GroupRingElement::one(group));
        }
        Ok(q)
    }

    /// Applies the augmentation to every entry.
    pub fn augmented(&self) -> crate::intlinalg::IntMatrix<C> {
        let mut m = crate::intlinalg::IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).augmentation());
            }
        }
        m
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array((0..self.cols).map(|j| self.get(i, j).to_json()).collect()))
                .collect(),
        )
    }

    /// Parses an array of rows of group ring elements. Entries may omit their group
    /// (or be bare integers) when `group` is given.
    pub fn from_json(v: &Value, group: Option<&Group>) -> Result<Self> {
        let rows = v.as_array().ok_or_else(|| Error::parse("matrix", "expected an array of rows"))?;
        let mut group = group.cloned();
        if group.is_none() {
            group = rows
                .iter()
                .flat_map(|r| r.as_array().into_iter().flatten())
                .find_map(|x| x.get("group"))
                .map(Group::from_json)
                .transpose()?;
        }
        let group = match group {
            Some(g) => g,
            None if rows.is_empty() => Group::Trivial,
            None => return Err(Error::parse("matrix", "cannot determine the group of the entries")),
        };
        let mut parsed = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_array().ok_or_else(|| Error::parse(format!("matrix[{i}]"), "expected an array"))?;
            let mut row = Vec::with_capacity(r.len());
            for (j, x) in r.iter().enumerate() {
                let e = GroupRingElement::from_json(x, Some(&group)).map_err(|e| match e {
                    Error::Parse { location, message } => Error::parse(format!("matrix[{i}][{j}].{location}"), message),
                    other => other,
                })?;
                row.push(e);
            }
            parsed.push(row);
        }
        Self::from_rows(&group, parsed)
    }
}

impl<C: Coeff> fmt::Display for Matrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::SizeMismatch(format!("permutation of length {} on size {n}", perm.len())));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidInput(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Two-sided inverse over `Z[pi]`.
///
/// Finite groups go through the left regular representation and exact rational
/// Gauss-Jordan elimination; abelian infinite groups use the determinant and
/// adjugate computed division-free, requiring the determinant to be a unit `±g`.
pub fn invert<C: Coeff>(a: &Matrix<C>) -> Result<Matrix<C>> {
    if !a.is_square() {
        return Err(Error::SizeMismatch(format!("cannot invert a {}x{} matrix", a.rows, a.cols)));
    }
    let inv = if a.group.is_finite() {
        invert_regular(a)?
    } else if a.group.is_abelian() {
        invert_commutative(a)?
    } else {
        return Err(Error::UnsupportedGroup(format!(
            "inversion over the noncommutative infinite group {}",
            a.group
        )));
    };
    let n = a.rows;
    if !a.checked_mul(&inv)?.is_identity() || !inv.checked_mul(a)?.is_identity() {
        return Err(Error::Singular);
    }
    debug_assert_eq!(inv.rows, n);
    Ok(inv)
}

fn invert_regular<C: Coeff>(a: &Matrix<C>) -> Result<Matrix<C>> {
    let g = &a.group;
    let elems = g.elements().expect("finite group");
    let k = elems.len();
    let index = |x: &GroupElement| elems.binary_search(x).expect("element of finite group");
    let n = a.rows;
    let dim = n * k;
    // rho(x)_{g,h} = coefficient of g in x h
    let mut m: Vec<Vec<Ratio<C>>> = vec![vec![Ratio::zero(); 2 * dim]; dim];
    for i in 0..n {
        for j in 0..n {
            for (x, c) in a.get(i, j).terms() {
                for (hi, h) in elems.iter().enumerate() {
                    let gi = index(&g.mul(x, h));
                    m[i * k + gi][j * k + hi] = m[i * k + gi][j * k + hi].clone() + Ratio::from_integer(c.clone());
                }
            }
        }
    }
    for r in 0..dim {
        m[r][dim + r] = Ratio::one();
    }
    for col in 0..dim {
        let Some(p) = (col..dim).find(|&r| !m[r][col].is_zero()) else {
            return Err(Error::Singular);
        };
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = x.clone() / pivot.clone();
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        }
    }
    let e = index(&g.identity());
    let mut inv = Matrix::zeros(g, n, n);
    for i in 0..n {
        for j in 0..n {
            let mut entry = GroupRingElement::zero(g);
            for (gi, x) in elems.iter().enumerate() {
                let q = &m[i * k + gi][dim + j * k + e];
                if !q.is_integer() {
                    return Err(Error::Singular);
                }
                entry.add_term(x.clone(), q.to_integer());
            }
            inv.set(i, j, entry);
        }
    }
    Ok(inv)
}

/// Determinant of a square matrix over a commutative group ring, by dynamic
/// programming over column subsets (no divisions).
pub fn commutative_determinant<C: Coeff>(a: &Matrix<C>) -> GroupRingElement<C> {
    let n = a.rows;
    let g = &a.group;
    let mut f: Vec<GroupRingElement<C>> = vec![GroupRingElement::zero(g); 1 << n];
    f[0] = GroupRingElement::one(g);
    for mask in 0usize..(1 << n) {
        if f[mask].is_zero() {
            continue;
        }
        let r = mask.count_ones() as usize;
        if r == n {
            continue;
        }
        for j in 0..n {
            if mask & (1 << j) != 0 || a.get(r, j).is_zero() {
                continue;
            }
            let above = (mask >> (j + 1)).count_ones();
            let term = &f[mask] * a.get(r, j);
            let term = if above % 2 == 1 { term.neg_ref() } else { term };
            let next = mask | (1 << j);
            f[next] = &f[next] + &term;
        }
    }
    f[(1 << n) - 1].clone()
}

fn minor<C: Coeff>(a: &Matrix<C>, skip_row: usize, skip_col: usize) -> Matrix<C> {
    let n = a.rows;
    let mut m = Matrix::zeros(&a.group, n - 1, n - 1);
    for (ri, i) in (0..n).filter(|&i| i != skip_row).enumerate() {
        for (cj, j) in (0..n).filter(|&j| j != skip_col).enumerate() {
            m.set(ri, cj, a.get(i, j).clone());
        }
    }
    m
}

fn invert_commutative<C: Coeff>(a: &Matrix<C>) -> Result<Matrix<C>> {
    let n = a.rows;
    if n > 16 {
        return Err(Error::ResourceBound(format!("adjugate inversion limited to size 16, got {n}")));
    }
    let g = &a.group;
    let det = commutative_determinant(a);
    let (positive, unit) = det.as_signed_element().ok_or(Error::Singular)?;
    let det_inv = GroupRingElement::monomial(
        g,
        g.inv(&unit),
        if positive { C::one() } else { -C::one() },
    );
    let mut inv = Matrix::zeros(g, n, n);
    for i in 0..n {
        for j in 0..n {
            let cof = commutative_determinant(&minor(a, i, j));
            let cof = if (i + j) % 2 == 1 { cof.neg_ref() } else { cof };
            inv.set(j, i, &det_inv * &cof);
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Int;

    type M = Matrix<Int>;
    type E = GroupRingElement<Int>;

    #[test]
    fn integer_inverse() {
        let g = Group::Trivial;
        let a = M::from_ints(&g, &[&[0, 1], &[1, 1]]);
        assert_eq!(invert(&a).unwrap(), M::from_ints(&g, &[&[-1, 1], &[1, 0]]));
        assert_eq!(invert(&M::identity(&g, 3)).unwrap(), M::identity(&g, 3));
        assert_eq!(invert(&M::from_ints(&g, &[&[2]])), Err(Error::Singular));
    }

    #[test]
    fn group_element_inverse() {
        let z2 = Group::Cyclic(2);
        let t = M::diagonal(&z2, vec![E::element(&z2, GroupElement::Cyclic(1))]);
        assert_eq!(invert(&t).unwrap(), t);
        // 1 + t is a zero divisor in Z[Z/2]
        let s = M::diagonal(&z2, vec![&E::one(&z2) + &E::element(&z2, GroupElement::Cyclic(1))]);
        assert_eq!(invert(&s), Err(Error::Singular));
    }

    #[test]
    fn laurent_inverse() {
        let z = Group::integers();
        let t = |k: i64| E::element(&z, GroupElement::FreeAbelian(vec![k]));
        // [[t, 1], [0, t^-1]] has determinant 1
        let a = M::from_rows(&z, vec![vec![t(1), E::one(&z)], vec![E::zero(&z), t(-1)]]).unwrap();
        let inv = invert(&a).unwrap();
        assert!(a.checked_mul(&inv).unwrap().is_identity());
        assert_eq!(invert(&inv).unwrap(), a);
        let b = M::diagonal(&z, vec![&t(1) + &E::one(&z)]);
        assert_eq!(invert(&b), Err(Error::Singular));
    }

    #[test]
    fn noncommutative_infinite_is_unsupported() {
        let f2 = Group::Free(2);
        assert!(matches!(invert(&M::identity(&f2, 1)), Err(Error::UnsupportedGroup(_))));
    }

    #[test]
    fn nonabelian_finite_inverse() {
        let s3 = Group::symmetric3();
        let r = E::element(&s3, GroupElement::Table(1));
        let s = E::element(&s3, GroupElement::Table(3));
        let a = M::from_rows(&s3, vec![vec![r.clone(), s.clone()], vec![E::zero(&s3), r.clone()]]).unwrap();
        let inv = invert(&a).unwrap();
        assert!(a.checked_mul(&inv).unwrap().is_identity());
        assert!(inv.checked_mul(&a).unwrap().is_identity());
    }

    #[test]
    fn permutation_matches_conjugation() {
        let g = Group::Trivial;
        let a = M::from_ints(&g, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let perm = [2, 0, 1];
        let q = M::permutation(&g, &perm).unwrap();
        let via_q = q.checked_mul(&a).unwrap().checked_mul(&q.conj_transpose()).unwrap();
        assert_eq!(a.permute_symmetric(&perm).unwrap(), via_q);
        assert!(a.permute_symmetric(&[0, 0, 1]).is_err());
    }
}
