//! Exact integer linear algebra: Smith normal form, rank and determinant.

use std::fmt;

use crate::scalar::Coeff;

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Coeff> fmt::Debug for IntMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|c| c.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<C: Coeff> IntMatrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![C::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C::one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| <C as Coeff>::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &C {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[C] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).clone() + a.clone() * b.clone();
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &C) {
        for c in 0..self.cols {
            let s = self.get(src, c);
            if !s.is_zero() {
                let v = self.get(dst, c).clone() + k.clone() * s.clone();
                self.set(dst, c, v);
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &C) {
        for r in 0..self.rows {
            let s = self.get(r, src);
            if !s.is_zero() {
                let v = self.get(r, dst).clone() + s.clone() * k.clone();
                self.set(r, dst, v);
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c).clone();
            self.set(r, c, v);
        }
    }
}

/// Result of [`smith_normal_form`]: `u * m * v = d` with `d` diagonal.
#[derive(Clone, Debug)]
pub struct SmithForm<C: Coeff> {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`, all positive.
    pub factors: Vec<C>,
    pub u: IntMatrix<C>,
    pub v: IntMatrix<C>,
    pub d: IntMatrix<C>,
}

/// Smith normal form by unimodular row and column operations, pivoting on the
/// entry of smallest absolute value.
pub fn smith_normal_form<C: Coeff>(m: &IntMatrix<C>) -> SmithForm<C> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = min_abs_entry(&a, t) else {
            break;
        };
        a.swap_rows(t, pr);
        u.swap_rows(t, pr);
        a.swap_cols(t, pc);
        v.swap_cols(t, pc);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                let nq = -q;
                a.add_row(i, t, &nq);
                u.add_row(i, t, &nq);
                if !a.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                let nq = -q;
                a.add_col(j, t, &nq);
                v.add_col(j, t, &nq);
                if !a.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remainder in row/column t into the pivot
                let mut best: Option<(usize, usize)> = None;
                let mut best_abs: Option<C> = None;
                let cand = (t..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j)));
                for (i, j) in cand {
                    let x = a.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    let ab = x.abs();
                    if best_abs.as_ref().is_none_or(|b| ab < *b) {
                        best_abs = Some(ab);
                        best = Some((i, j));
                    }
                }
                let (i, j) = best.expect("pivot row or column is nonzero");
                a.swap_rows(t, i);
                u.swap_rows(t, i);
                a.swap_cols(t, j);
                v.swap_cols(t, j);
                continue;
            }
            // divisibility of the remaining block by the pivot
            let p = a.get(t, t).clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = C::one();
                    a.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let factors = (0..rows.min(cols))
        .map(|i| a.get(i, i).clone())
        .filter(|x| !x.is_zero())
        .collect();
    SmithForm { factors, u, v, d: a }
}

fn min_abs_entry<C: Coeff>(a: &IntMatrix<C>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut best_abs: Option<C> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ab = x.abs();
            if ab.is_one() {
                return Some((i, j));
            }
            if best_abs.as_ref().is_none_or(|b| ab < *b) {
                best_abs = Some(ab);
                best = Some((i, j));
            }
        }
    }
    best
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
pub fn rational_rank<C: Coeff>(m: &IntMatrix<C>) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut prev = C::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        a.swap_rows(rank, p);
        let pivot = a.get(rank, col).clone();
        for i in rank + 1..rows {
            let lead = a.get(i, col).clone();
            for j in col + 1..cols {
                let v = (a.get(i, j).clone() * pivot.clone() - lead.clone() * a.get(rank, j).clone()) / prev.clone();
                a.set(i, j, v);
            }
            a.set(i, col, C::zero());
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Determinant of a square matrix by Bareiss elimination.
pub fn determinant<C: Coeff>(m: &IntMatrix<C>) -> C {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut prev = C::one();
    let mut sign = C::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a.get(r, k).is_zero()) else {
            return C::zero();
        };
        if p != k {
            a.swap_rows(k, p);
            sign = -sign;
        }
        let pivot = a.get(k, k).clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a.get(i, j).clone() * pivot.clone() - a.get(i, k).clone() * a.get(k, j).clone()) / prev.clone();
                a.set(i, j, v);
            }
            a.set(i, k, C::zero());
        }
        prev = pivot;
    }
    if n == 0 {
        C::one()
    } else {
        sign * a.get(n - 1, n - 1).clone()
    }
}
