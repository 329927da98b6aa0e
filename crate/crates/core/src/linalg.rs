//! Dense exact linear algebra.
//!
//! Conventions: vectors are rows. A matrix `A` of shape `m × n` describes the
//! linear map `k^m → k^n`, `v ↦ v·A`, so "first `A`, then `B`" is the
//! product `A·B`. The solvers (`kernel_basis`, `solve`) work on the column
//! side, `A·x = b`, because that is how they are specified; the `left_*`
//! variants solve `x·A = b`.

use crate::field::Field;

pub type Vector<F> = Vec<<F as Field>::Elem>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Result of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<F: Field> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl<F: Field> Matrix<F> {
    /// Panics if `data.len() != rows * cols`.
    pub fn new(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { field, rows, cols, data }
    }

    pub fn zero(field: F, rows: usize, cols: usize) -> Self {
        let z = field.zero();
        Matrix { rows, cols, data: vec![z; rows * cols], field }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    /// Builds a matrix from row vectors, each of length `cols`.
    pub fn from_rows(field: F, cols: usize, rows: &[Vector<F>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row has wrong length");
            data.extend(r.iter().cloned());
        }
        Matrix { field, rows: rows.len(), cols, data }
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: F, rows: usize, cols: usize, entries: &[i64]) -> Self {
        let data = entries.iter().map(|&n| field.from_i64(n)).collect();
        Self::new(field, rows, cols, data)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vector<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vector<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { field: self.field.clone(), rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let f = &self.field;
        let mut out = Self::zero(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    f.add_mul_assign(d, a, b);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.field.add(a, b))
            .collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.field.sub(a, b))
            .collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let data = self.data.iter().map(|a| self.field.mul(a, c)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// `self += c * other`
    pub fn add_scaled_assign(&mut self, c: &F::Elem, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if self.field.is_zero(c) {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            self.field.add_mul_assign(a, c, b);
        }
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[F::Elem]) -> Vector<F> {
        assert_eq!(v.len(), self.rows, "vector length mismatch");
        let f = &self.field;
        let mut out = vec![f.zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (d, b) in out.iter_mut().zip(self.row(i)) {
                f.add_mul_assign(d, a, b);
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[F::Elem]) -> Vector<F> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows).map(|i| dot(&self.field, self.row(i), v)).collect()
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend(self.row(i).iter().cloned());
            data.extend(other.row(i).iter().cloned());
        }
        Matrix { field: self.field.clone(), rows: self.rows, cols, data }
    }

    /// `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.field.clone(), self.rows + other.rows, self.cols + other.cols);
        out.write_block(0, 0, self);
        out.write_block(self.rows, self.cols, other);
        out
    }

    pub fn write_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in r0..r0 + rows {
            data.extend(self.data[i * self.cols + c0..i * self.cols + c0 + cols].iter().cloned());
        }
        Matrix { field: self.field.clone(), rows, cols, data }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { field: self.field.clone(), rows: self.rows, cols: cols.len(), data }
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let rank = pivots.len();
        Rref { matrix: m, pivots, rank }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !f.is_zero(self.get(i, c))) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..cols {
                let v = f.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            let (head, tail) = self.data.split_at_mut(r * cols);
            let (prow, tail) = tail.split_at_mut(cols);
            for chunk in head.chunks_mut(cols).chain(tail.chunks_mut(cols)) {
                if f.is_zero(&chunk[c]) {
                    continue;
                }
                let factor = chunk[c].clone();
                for j in c..cols {
                    f.sub_mul_assign(&mut chunk[j], &factor, &prow[j]);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{x : A·x = 0}`, one vector per free column in ascending
    /// order, with a 1 in that free position.
    pub fn kernel_basis(&self) -> Vec<Vector<F>> {
        let Rref { matrix, pivots, .. } = self.rref();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(matrix.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// Basis of `{x : x·A = 0}`.
    pub fn left_kernel(&self) -> Vec<Vector<F>> {
        self.transpose().kernel_basis()
    }

    /// One solution of `A·x = b`, with free variables set to zero.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vector<F>> {
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let f = &self.field;
        let bcol = Matrix { field: f.clone(), rows: self.rows, cols: 1, data: b.to_vec() };
        let aug = self.hstack(&bcol).rref();
        if aug.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &pc) in aug.pivots.iter().enumerate() {
            x[pc] = aug.matrix.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// One solution of `x·A = b`.
    pub fn solve_left(&self, b: &[F::Elem]) -> Option<Vector<F>> {
        self.transpose().solve(b)
    }

    /// Solves `X·A = B` row by row.
    pub fn solve_left_matrix(&self, b: &Self) -> Option<Self> {
        assert_eq!(b.cols, self.cols);
        let t = self.transpose();
        let f = &self.field;
        let rows = b.rows;
        let bt = b.transpose();
        let aug = t.hstack(&bt).rref();
        if aug.pivots.iter().any(|&p| p >= self.rows) {
            return None;
        }
        let mut x = Self::zero(f.clone(), rows, self.rows);
        for (r, &pc) in aug.pivots.iter().enumerate() {
            for q in 0..rows {
                x.set(q, pc, aug.matrix.get(r, self.rows + q).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = self.hstack(&Self::identity(self.field.clone(), n)).rref();
        if aug.rank < n || aug.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(aug.matrix.block(0, n, n, n))
    }
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        if !f.is_zero(x) {
            f.add_mul_assign(&mut acc, x, y);
        }
    }
    acc
}

pub fn zero_vec<F: Field>(f: &F, n: usize) -> Vector<F> {
    vec![f.zero(); n]
}

pub fn unit_vec<F: Field>(f: &F, n: usize, i: usize) -> Vector<F> {
    let mut v = zero_vec(f, n);
    v[i] = f.one();
    v
}

pub fn is_zero_vec<F: Field>(f: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| f.is_zero(x))
}

pub fn add_vec<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vector<F> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn sub_vec<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vector<F> {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

pub fn scale_vec<F: Field>(f: &F, c: &F::Elem, a: &[F::Elem]) -> Vector<F> {
    a.iter().map(|x| f.mul(c, x)).collect()
}

pub fn neg_vec<F: Field>(f: &F, a: &[F::Elem]) -> Vector<F> {
    a.iter().map(|x| f.neg(x)).collect()
}

/// `a += c * b`
pub fn axpy<F: Field>(f: &F, a: &mut [F::Elem], c: &F::Elem, b: &[F::Elem]) {
    if f.is_zero(c) {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        f.add_mul_assign(x, c, y);
    }
}

/// A subspace of `k^n` kept as a fully reduced echelon basis, so the stored
/// rows always equal the RREF of everything inserted so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    field: F,
    ambient: usize,
    rows: Vec<Vector<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn new(field: F, ambient: usize) -> Self {
        Subspace { field, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn spanned_by<'a, I>(field: F, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = &'a Vector<F>>,
    {
        let mut s = Self::new(field, ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn basis(&self) -> &[Vector<F>] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn field(&self) -> &F {
        &self.field
    }

    /// Remainder of `v` after elimination against the pivots.
    pub fn reduce(&self, v: &[F::Elem]) -> Vector<F> {
        let f = &self.field;
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !f.is_zero(&w[p]) {
                let c = w[p].clone();
                for (x, y) in w.iter_mut().zip(row) {
                    f.sub_mul_assign(x, &c, y);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        is_zero_vec(&self.field, &self.reduce(v))
    }

    /// Adds `v` to the span. Returns `false` when it was already there.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let f = self.field.clone();
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&w[p]).expect("nonzero");
        for x in w.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for row in self.rows.iter_mut() {
            if !f.is_zero(&row[p]) {
                let c = row[p].clone();
                for (x, y) in row.iter_mut().zip(&w) {
                    f.sub_mul_assign(x, &c, y);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, w);
        true
    }

    pub fn as_matrix(&self) -> Matrix<F> {
        Matrix::from_rows(self.field.clone(), self.ambient, &self.rows)
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }
}

/// A quotient `k^n / span(relations)` with its projection and a section.
///
/// The quotient basis is the set of free (non-pivot) columns of the relation
/// RREF, in ascending order. `projection` is `n × q` and `section` is
/// `q × n` in the row convention, so `section · projection = I_q` and the
/// section sends quotient basis vector `j` to the standard vector at the
/// `j`-th free column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientPresentation<F: Field> {
    pub relations: Subspace<F>,
    pub free: Vec<usize>,
    pub projection: Matrix<F>,
    pub section: Matrix<F>,
}

impl<F: Field> QuotientPresentation<F> {
    pub fn ambient(&self) -> usize {
        self.relations.ambient()
    }
    pub fn dim(&self) -> usize {
        self.free.len()
    }
    pub fn project(&self, v: &[F::Elem]) -> Vector<F> {
        let r = self.relations.reduce(v);
        self.free.iter().map(|&c| r[c].clone()).collect()
    }
    pub fn lift(&self, q: &[F::Elem]) -> Vector<F> {
        let f = self.relations.field();
        let mut v = zero_vec(f, self.ambient());
        for (x, &c) in q.iter().zip(&self.free) {
            v[c] = x.clone();
        }
        v
    }
}

pub fn quotient_space<F: Field>(
    field: F,
    ambient: usize,
    relations: &[Vector<F>],
) -> QuotientPresentation<F> {
    quotient_of(Subspace::spanned_by(field, ambient, relations))
}

pub fn quotient_of<F: Field>(relations: Subspace<F>) -> QuotientPresentation<F> {
    let f = relations.field().clone();
    let n = relations.ambient();
    let free: Vec<usize> = (0..n).filter(|c| relations.pivots.binary_search(c).is_err()).collect();
    let q = free.len();
    let mut projection = Matrix::zero(f.clone(), n, q);
    for (j, &c) in free.iter().enumerate() {
        projection.set(c, j, f.one());
    }
    for (row, &p) in relations.rows.iter().zip(&relations.pivots) {
        for (j, &c) in free.iter().enumerate() {
            projection.set(p, j, f.neg(&row[c]));
        }
    }
    let mut section = Matrix::zero(f.clone(), q, n);
    for (j, &c) in free.iter().enumerate() {
        section.set(j, c, f.one());
    }
    QuotientPresentation { relations, free, projection, section }
}

/// Coordinates with respect to a list of linearly independent vectors.
#[derive(Clone, Debug)]
pub struct Basis<F: Field> {
    field: F,
    vectors: Vec<Vector<F>>,
    pivots: Vec<usize>,
    pivot_inverse: Matrix<F>,
}

impl<F: Field> Basis<F> {
    /// `None` when the vectors are linearly dependent.
    pub fn new(field: F, ambient: usize, vectors: Vec<Vector<F>>) -> Option<Self> {
        let m = Matrix::from_rows(field.clone(), ambient, &vectors);
        let r = m.rref();
        if r.rank < vectors.len() {
            return None;
        }
        let pivot_inverse = m.select_columns(&r.pivots).inverse()?;
        Some(Basis { field, vectors, pivots: r.pivots, pivot_inverse })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }
    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
    pub fn vectors(&self) -> &[Vector<F>] {
        &self.vectors
    }

    /// `c` with `Σ c_i v_i = v`, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &[F::Elem]) -> Option<Vector<F>> {
        let f = &self.field;
        let vp: Vector<F> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let c = self.pivot_inverse.vec_mul(&vp);
        let mut back = zero_vec(f, v.len());
        for (ci, bi) in c.iter().zip(&self.vectors) {
            axpy(f, &mut back, ci, bi);
        }
        if back == v {
            Some(c)
        } else {
            None
        }
    }

    pub fn combine(&self, c: &[F::Elem]) -> Vector<F> {
        let f = &self.field;
        let n = self.vectors.first().map_or(0, |v| v.len());
        let mut out = zero_vec(f, n);
        for (ci, bi) in c.iter().zip(&self.vectors) {
            axpy(f, &mut out, ci, bi);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn q(rows: usize, cols: usize, e: &[i64]) -> Matrix<Rationals> {
        Matrix::from_i64(Rationals, rows, cols, e)
    }

    #[test]
    fn rref_examples() {
        let r = q(2, 2, &[1, 0, 0, 1]).rref();
        assert_eq!(r.matrix, q(2, 2, &[1, 0, 0, 1]));
        assert_eq!((r.pivots, r.rank), (vec![0, 1], 2));

        let r = q(2, 2, &[1, 2, 2, 4]).rref();
        assert_eq!(r.matrix, q(2, 2, &[1, 2, 0, 0]));
        assert_eq!((r.pivots, r.rank), (vec![0], 1));

        let f5 = PrimeField::new(5).unwrap();
        let r = Matrix::from_i64(f5, 2, 2, &[0, 1, 1, 0]).rref();
        assert_eq!(r.matrix, Matrix::identity(f5, 2));
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn kernel_examples() {
        assert!(q(2, 2, &[1, 0, 0, 1]).kernel_basis().is_empty());
        let k = Matrix::zero(Rationals, 2, 3).kernel_basis();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            assert_eq!(*v, unit_vec(&Rationals, 3, i));
        }
        let k = q(1, 2, &[1, 1]).kernel_basis();
        assert_eq!(k, vec![vec![Rationals.from_i64(-1), Rationals.from_i64(1)]]);
    }

    #[test]
    fn solve_examples() {
        let id = q(2, 2, &[1, 0, 0, 1]);
        let b = vec![Rationals.from_i64(3), Rationals.from_i64(-7)];
        assert_eq!(id.solve(&b), Some(b.clone()));
        let x = q(1, 2, &[1, 1]).solve(&[Rationals.from_i64(2)]).unwrap();
        assert_eq!(x, vec![Rationals.from_i64(2), Rationals.from_i64(0)]);
        assert_eq!(q(1, 2, &[0, 0]).solve(&[Rationals.from_i64(1)]), None);
    }

    #[test]
    fn quotient_examples() {
        let qp = quotient_space(Rationals, 2, &[]);
        assert_eq!(qp.dim(), 2);
        assert_eq!(qp.projection, Matrix::identity(Rationals, 2));

        let rel = vec![Rationals.from_i64(1), Rationals.from_i64(-1)];
        let qp = quotient_space(Rationals, 2, &[rel.clone()]);
        assert_eq!(qp.dim(), 1);
        assert!(is_zero_vec(&Rationals, &qp.projection.vec_mul(&rel)));
        assert_eq!(qp.section.mul(&qp.projection), Matrix::identity(Rationals, 1));

        let all: Vec<_> = (0..3).map(|i| unit_vec(&Rationals, 3, i)).collect();
        assert_eq!(quotient_space(Rationals, 3, &all).dim(), 0);
    }

    #[test]
    fn project_agrees_with_matrix() {
        let rels = vec![
            vec![Rationals.from_i64(1), Rationals.from_i64(2), Rationals.from_i64(0), Rationals.from_i64(1)],
            vec![Rationals.from_i64(0), Rationals.from_i64(0), Rationals.from_i64(1), Rationals.from_i64(3)],
        ];
        let qp = quotient_space(Rationals, 4, &rels);
        let v: Vec<_> = [5, -1, 2, 7].iter().map(|&n| Rationals.from_i64(n)).collect();
        assert_eq!(qp.project(&v), qp.projection.vec_mul(&v));
        assert_eq!(qp.project(&qp.lift(&qp.project(&v))), qp.project(&v));
    }

    #[test]
    fn inverse_and_left_solve() {
        let a = q(2, 2, &[2, 1, 1, 1]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(Rationals, 2));
        assert!(q(2, 2, &[1, 2, 2, 4]).inverse().is_none());
        let b = vec![Rationals.from_i64(4), Rationals.from_i64(3)];
        let x = a.solve_left(&b).unwrap();
        assert_eq!(a.vec_mul(&x), b);
        let bm = q(2, 2, &[4, 3, 0, 1]);
        let xm = a.solve_left_matrix(&bm).unwrap();
        assert_eq!(xm.mul(&a), bm);
    }

    #[test]
    fn basis_coordinates() {
        let vs = vec![
            vec![Rationals.from_i64(1), Rationals.from_i64(1), Rationals.from_i64(0)],
            vec![Rationals.from_i64(0), Rationals.from_i64(1), Rationals.from_i64(1)],
        ];
        let b = Basis::new(Rationals, 3, vs).unwrap();
        let v = vec![Rationals.from_i64(2), Rationals.from_i64(5), Rationals.from_i64(3)];
        assert_eq!(b.coords(&v), Some(vec![Rationals.from_i64(2), Rationals.from_i64(3)]));
        let w = vec![Rationals.from_i64(1), Rationals.from_i64(0), Rationals.from_i64(0)];
        assert_eq!(b.coords(&w), None);
    }

    #[test]
    fn subspace_matches_rref() {
        let m = q(3, 4, &[1, 2, 3, 4, 2, 4, 6, 8, 0, 1, 1, 0]);
        let s = Subspace::spanned_by(Rationals, 4, &m.row_vectors());
        let r = m.rref();
        assert_eq!(s.pivots(), &r.pivots[..]);
        assert_eq!(s.as_matrix(), r.matrix.block(0, 0, r.rank, 4));
    }
}
