//! Dense exact linear algebra: reduced row-echelon form, rank, kernels,
//! particular solutions, and a small subspace helper built on them.

use std::fmt;

use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from rows. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix row");
            data.extend(r);
        }
        Mat { rows: n, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Mat { rows, cols, data: entries.iter().map(|&x| T::from_int(x)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn mul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_negligible() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_negligible())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Reduced row-echelon form and the pivot columns.
    pub fn rref(&self) -> (Mat<T>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_negligible()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = T::one() / m[(r, c)].clone();
            for j in c..m.cols {
                let v = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_negligible() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = m[(i, j)].clone() - factor.clone() * m[(r, j)].clone();
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        // Clean exact-zero noise for inexact scalars.
        for x in m.data.iter_mut() {
            if x.is_negligible() {
                *x = T::zero();
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space. One vector per free column, in
    /// increasing free-column order, with that free coordinate set to 1.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![T::zero(); self.cols];
                v[free] = T::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, free)].clone();
                }
                v
            })
            .collect()
    }

    /// One solution of `self * x = b`, with free variables set to zero, or
    /// `None` if the system is inconsistent.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    /// Exact determinant of a square matrix by elimination.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let mut det = T::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_negligible()) else {
                return T::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = det * pivot.clone();
            for i in c + 1..m.rows {
                let factor = m[(i, c)].clone() / pivot.clone();
                if factor.is_negligible() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m[(i, j)].clone() - factor.clone() * m[(c, j)].clone();
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Mat<T>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = T::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_exact_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// A subspace of `T^dim` kept in reduced row-echelon form.
///
/// The complement used for quotients is spanned by the standard basis
/// vectors at non-pivot positions; projection onto it is reduction modulo
/// the echelon rows.
#[derive(Clone, Debug)]
pub struct Subspace<T> {
    dim: usize,
    echelon: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

impl<T: Scalar> Subspace<T> {
    pub fn zero(dim: usize) -> Self {
        Subspace { dim, echelon: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        Self::spanned_by(dim, Mat::<T>::identity(dim).row_vec())
    }

    pub fn spanned_by(dim: usize, vectors: Vec<Vec<T>>) -> Self {
        if vectors.is_empty() {
            return Self::zero(dim);
        }
        let (r, pivots) = Mat::from_rows(dim, vectors).rref();
        let echelon = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { dim, echelon, pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.echelon
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Non-pivot coordinates; these index the complement basis.
    pub fn complement_positions(&self) -> Vec<usize> {
        (0..self.dim).filter(|c| !self.pivots.contains(c)).collect()
    }

    pub fn codim(&self) -> usize {
        self.dim - self.dim()
    }

    /// Reduces `v` modulo the subspace; the result vanishes on pivot positions.
    pub fn reduce(&self, v: &[T]) -> Vec<T> {
        let mut out = v.to_vec();
        for (row, &p) in self.echelon.iter().zip(&self.pivots) {
            if out[p].is_negligible() {
                continue;
            }
            let factor = out[p].clone();
            for (o, r) in out.iter_mut().zip(row) {
                *o = o.clone() - factor.clone() * r.clone();
            }
        }
        out
    }

    /// Coordinates of the class of `v` in the complement basis.
    pub fn project(&self, v: &[T]) -> Vec<T> {
        let r = self.reduce(v);
        self.complement_positions().into_iter().map(|c| r[c].clone()).collect()
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.reduce(v).iter().all(|x| x.is_negligible())
    }

    /// Adds vectors; returns true if the dimension grew.
    pub fn extend(&mut self, vectors: impl IntoIterator<Item = Vec<T>>) -> bool {
        let before = self.dim();
        let mut all = self.echelon.clone();
        let mut any = false;
        for v in vectors {
            if !self.contains(&v) {
                all.push(v);
                any = true;
            }
        }
        if any {
            *self = Self::spanned_by(self.dim, all);
        }
        self.dim() > before
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn m(rows: usize, cols: usize, e: &[i64]) -> Mat<Q> {
        Mat::from_i64(rows, cols, e)
    }

    fn v(e: &[i64]) -> Vec<Q> {
        e.iter().map(|&x| Q::from_int(x)).collect()
    }

    #[test]
    fn rref_rank_one() {
        let (r, p) = m(2, 2, &[1, 2, 2, 4]).rref();
        assert_eq!(r, m(2, 2, &[1, 2, 0, 0]));
        assert_eq!(p, vec![0]);
        assert_eq!(m(2, 2, &[1, 2, 2, 4]).rank(), 1);
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = Mat::<Q>::identity(3);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1, 2]));
        assert_eq!(id.rank(), 3);
        let z = m(2, 2, &[0, 0, 0, 0]);
        assert_eq!(z.rref(), (z.clone(), vec![]));
        assert_eq!(z.rank(), 0);
    }

    #[test]
    fn kernels() {
        assert_eq!(m(2, 2, &[1, 2, 2, 4]).kernel_basis(), vec![v(&[-2, 1])]);
        assert!(Mat::<Q>::identity(2).kernel_basis().is_empty());
        let k = m(1, 3, &[0, 0, 0]).kernel_basis();
        assert_eq!(k, vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]);
    }

    #[test]
    fn solving() {
        let id = Mat::<Q>::identity(2);
        assert_eq!(id.solve(&v(&[3, -4])), Some(v(&[3, -4])));
        assert_eq!(m(2, 1, &[1, 1]).solve(&v(&[1, 2])), None);
        // x + y = 3: free variable y set to zero.
        assert_eq!(m(1, 2, &[1, 1]).solve(&v(&[3])), Some(v(&[3, 0])));
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(2, 2, &[2, 1, 1, 2]);
        assert_eq!(a.determinant(), Q::from_int(3));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        assert!(m(2, 2, &[1, 2, 2, 4]).inverse().is_none());
        assert_eq!(m(1, 1, &[0]).determinant(), Q::from_int(0));
    }

    #[test]
    fn subspace_projection() {
        let s = Subspace::spanned_by(3, vec![v(&[1, 1, 0])]);
        assert_eq!(s.dim(), 1);
        assert_eq!(s.complement_positions(), vec![1, 2]);
        assert_eq!(s.project(&v(&[1, 1, 0])), v(&[0, 0]));
        assert_eq!(s.project(&v(&[1, 0, 5])), v(&[-1, 5]));
        assert!(s.contains(&v(&[2, 2, 0])));
    }

    #[test]
    fn float_instance_works() {
        let a: Mat<f64> = Mat::from_i64(2, 2, &[1, 2, 2, 4]);
        assert_eq!(a.rank(), 1);
        assert_eq!(a.kernel_basis(), vec![vec![-2.0, 1.0]]);
    }
}
