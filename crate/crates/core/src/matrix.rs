//! Dense matrices over a [`Field`], with elimination-based rank, kernel,
//! determinant and inverse.
//!
//! Elimination skips zero entries, which matters: the cochain matrices built
//! by the Kostant engine are very sparse, and exact rational arithmetic on
//! explicit zeros is the dominant cost otherwise.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Field;

#[derive(Clone, PartialEq)]
pub struct Mat<T: Field> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
    ctx: T::Ctx,
}

impl<T: Field> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl<T: Field> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T: Field> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Reduced row echelon form together with its pivot columns.
pub struct Echelon<T: Field> {
    pub mat: Mat<T>,
    pub pivots: Vec<usize>,
}

impl<T: Field> Mat<T> {
    pub fn zeros(rows: usize, cols: usize, ctx: &T::Ctx) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(ctx); rows * cols],
            ctx: ctx.clone(),
        }
    }

    pub fn identity(n: usize, ctx: &T::Ctx) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            m[(i, i)] = T::one(ctx);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, ctx: &T::Ctx, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat {
            rows,
            cols,
            data,
            ctx: ctx.clone(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>, ctx: &T::Ctx) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::parse("matrix", "rows have different lengths"));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
            ctx: ctx.clone(),
        })
    }

    pub fn diag(entries: &[T], ctx: &T::Ctx) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len(), ctx);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
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

    pub fn ctx(&self) -> &T::Ctx {
        &self.ctx
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn map<U: Field>(&self, ctx: &U::Ctx, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
            ctx: ctx.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    /// True when every entry is negligible in the field's own sense.
    pub fn is_negligible(&self) -> bool {
        self.data.iter().all(|x| x.negligible(&self.ctx))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, &self.ctx, |r, c| self[(c, r)].clone())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, &self.ctx, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(&self.ctx, |x| if x.is_zero() { x.clone() } else { x.mul(s) })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in add"
        );
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
            ctx: self.ctx.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in sub"
        );
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
            ctx: self.ctx.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols, &self.ctx);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(b);
                    let cell = &mut out[(i, j)];
                    *cell = cell.add(&prod);
                }
            }
        }
        out
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = T::zero(&self.ctx);
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, &self.ctx, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
            ctx: self.ctx.clone(),
        }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), &self.ctx, |r, c| {
            self[(rows[r], cols[c])].clone()
        })
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    pub fn from_cols(vectors: &[Vec<T>], len: usize, ctx: &T::Ctx) -> Self {
        Self::from_fn(len, vectors.len(), ctx, |r, c| vectors[c][r].clone())
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols, &self.ctx);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)].clone();
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out[(self.rows + r, self.cols + c)] = other[(r, c)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Chooses a pivot row in column `c` among rows `from..`. Exact fields take
    /// the first nonzero entry; inexact fields take the largest magnitude.
    fn pivot_row(&self, c: usize, from: usize) -> Option<usize> {
        if T::EXACT {
            (from..self.rows).find(|&r| !self[(r, c)].is_zero())
        } else {
            let best = (from..self.rows).max_by(|&a, &b| self[(a, c)].magnitude_cmp(&self[(b, c)]))?;
            (!self[(best, c)].negligible(&self.ctx)).then_some(best)
        }
    }

    /// Eliminates `row` using the (normalized) pivot row `p` at column `c`.
    fn eliminate(&mut self, row: usize, p: usize, c: usize) {
        let factor = self[(row, c)].clone();
        if factor.is_zero() {
            return;
        }
        for j in c..self.cols {
            let pv = &self.data[p * self.cols + j];
            if pv.is_zero() {
                continue;
            }
            let delta = factor.mul(pv);
            let cell = &mut self.data[row * self.cols + j];
            *cell = cell.sub(&delta);
        }
        if !T::EXACT {
            self.data[row * self.cols + c] = T::zero(&self.ctx);
        }
    }

    pub fn rref(&self) -> Echelon<T> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = m.pivot_row(c, r) else {
                if !T::EXACT {
                    for rr in r..m.rows {
                        m[(rr, c)] = T::zero(&m.ctx);
                    }
                }
                continue;
            };
            m.swap_rows(p, r);
            let inv = T::one(&m.ctx).div(&m[(r, c)]);
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    m[(r, j)] = m[(r, j)].mul(&inv);
                }
            }
            for rr in 0..m.rows {
                if rr != r {
                    m.eliminate(rr, r, c);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { mat: m, pivots }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // forward elimination only; cheaper than a full rref
        let mut m = self.clone();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = m.pivot_row(c, r) else { continue };
            m.swap_rows(p, r);
            let inv = T::one(&m.ctx).div(&m[(r, c)]);
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    m[(r, j)] = m[(r, j)].mul(&inv);
                }
            }
            for rr in r + 1..m.rows {
                m.eliminate(rr, r, c);
            }
            r += 1;
        }
        r
    }

    /// Basis of the null space, one vector per free column, as columns of the result.
    pub fn kernel(&self) -> Mat<T> {
        let ech = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        let mut out = Mat::zeros(self.cols, free.len(), &self.ctx);
        for (k, &f) in free.iter().enumerate() {
            out[(f, k)] = T::one(&self.ctx);
            for (i, &p) in ech.pivots.iter().enumerate() {
                let v = &ech.mat[(i, f)];
                if !v.is_zero() {
                    out[(p, k)] = v.neg();
                }
            }
        }
        out
    }

    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::Precondition(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut m = self.clone();
        let mut det = T::one(&m.ctx);
        for c in 0..m.cols {
            let Some(p) = m.pivot_row(c, c) else {
                return Ok(T::zero(&m.ctx));
            };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg();
            }
            let piv = m[(c, c)].clone();
            det = det.mul(&piv);
            let inv = T::one(&m.ctx).div(&piv);
            for j in c..m.cols {
                if !m[(c, j)].is_zero() {
                    m[(c, j)] = m[(c, j)].mul(&inv);
                }
            }
            for rr in c + 1..m.rows {
                m.eliminate(rr, c, c);
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Mat<T>> {
        if !self.is_square() {
            return Err(Error::Precondition("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let aug = self.hstack(&Mat::identity(n, &self.ctx));
        let ech = aug.rref();
        if ech.pivots.len() < n || ech.pivots[n - 1] >= n {
            return Err(Error::Singular(format!("{n}x{n} matrix is not invertible")));
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(ech.mat.select(&rows, &cols))
    }

    /// Solves `self * X = rhs`; errors when no solution exists.
    pub fn solve(&self, rhs: &Mat<T>) -> Result<Mat<T>> {
        assert_eq!(self.rows, rhs.rows);
        let aug = self.hstack(rhs);
        let ech = aug.rref();
        if ech.pivots.iter().any(|&p| p >= self.cols) {
            return Err(Error::Singular("linear system is inconsistent".into()));
        }
        let mut x = Mat::zeros(self.cols, rhs.cols, &self.ctx);
        for (i, &p) in ech.pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(p, j)] = ech.mat[(i, self.cols + j)].clone();
            }
        }
        Ok(x)
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols, &self.ctx);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = &other[(k, l)];
                        if !b.is_zero() {
                            out[(i * other.rows + k, j * other.cols + l)] = a.mul(b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Upper triangular check, used to read eigenvalues off the diagonal.
    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|r| (0..r.min(self.cols)).all(|c| self[(r, c)].is_zero()))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self[(r, c)].is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Qi, Real, RealCtx};
    use rug::Rational;

    fn q(v: i64) -> Rational {
        Rational::from(v)
    }

    fn qm(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect(),
            &(),
        )
        .unwrap()
    }

    #[test]
    fn rank_kernel_and_det_exact() {
        let a = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).is_zero());
        assert_eq!(a.det().unwrap(), q(0));

        let b = qm(&[&[2, 1], &[7, 4]]);
        assert_eq!(b.det().unwrap(), q(1));
        let inv = b.inverse().unwrap();
        assert_eq!(b.mul(&inv), Mat::identity(2, &()));
        assert!(a.inverse().is_err());
    }

    #[test]
    fn solve_and_inconsistency() {
        let a = qm(&[&[1, 1], &[1, -1]]);
        let rhs = qm(&[&[3], &[1]]);
        let x = a.solve(&rhs).unwrap();
        assert_eq!(x, qm(&[&[2], &[1]]));
        let sing = qm(&[&[1, 1], &[2, 2]]);
        assert!(sing.solve(&qm(&[&[1], &[3]])).is_err());
    }

    #[test]
    fn gaussian_rational_kernel() {
        let i = Qi::i();
        let one = Qi::from_int(1);
        let z = Qi::from_int(0);
        // rows (1, i) and (i, -1) are dependent
        let m = Mat::from_rows(
            vec![vec![one.clone(), i.clone()], vec![i.clone(), one.neg()]],
            &(),
        )
        .unwrap();
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert!(m.mul(&k).is_zero());
        let _ = z;
    }

    #[test]
    fn real_rank_respects_tolerance() {
        let ctx = RealCtx::new(256);
        let eps = Real(rug::Float::with_val(256, rug::Float::i_exp(1, -200)));
        let m = Mat::from_rows(
            vec![
                vec![ctx.real(1.0), ctx.real(2.0)],
                vec![ctx.real(2.0), ctx.real(4.0).add(&eps)],
            ],
            &ctx,
        )
        .unwrap();
        assert_eq!(m.rank(), 1);
        let det = m.det().unwrap();
        assert!(det.0.clone().abs() < 1e-50);
    }

    #[test]
    fn kron_shapes() {
        let a = qm(&[&[1, 2], &[3, 4]]);
        let i2 = Mat::<Rational>::identity(2, &());
        let k = i2.kron(&a);
        assert_eq!((k.rows(), k.cols()), (4, 4));
        assert_eq!(k[(3, 2)], q(3));
        assert_eq!(k[(0, 2)], q(0));
    }
}
