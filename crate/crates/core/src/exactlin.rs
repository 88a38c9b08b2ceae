//! Dense exact matrices and the handful of linear-algebra kernels every other
//! module reduces to: row reduction, null spaces, solving, Kronecker products
//! and quotient coordinates.
//!
//! Column vectors and bases are returned as matrices whose columns are the
//! vectors; an empty basis is an `n x 0` matrix.

use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldElem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("basis vectors are linearly dependent")]
    DegenerateBasis,
}

pub type LinResult<T> = Result<T, LinError>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    // row-major
    data: Vec<FieldElem>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat[{}x{} {}]{:?}", self.rows, self.cols, self.field, self.to_strings())
    }
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows of integers.
    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Mat::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged integer matrix");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.int(v));
            }
        }
        m
    }

    /// Builds a matrix from explicit rows; every entry must belong to `field`.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<FieldElem>>) -> LinResult<Mat> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinError::Shape(format!(
                    "row of length {} in a matrix with {cols} columns",
                    row.len()
                )));
            }
            for e in row {
                if e.field() != field {
                    return Err(LinError::FieldMismatch(field, e.field()));
                }
                data.push(e);
            }
        }
        Ok(Mat {
            field,
            rows: nrows,
            cols,
            data,
        })
    }

    /// Matrix whose columns are `cols`, each of length `rows`.
    pub fn from_columns(field: Field, rows: usize, cols: &[Vec<FieldElem>]) -> LinResult<Mat> {
        let mut m = Mat::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(LinError::Shape(format!(
                    "column of length {} where {rows} expected",
                    c.len()
                )));
            }
            for (i, e) in c.iter().enumerate() {
                if e.field() != field {
                    return Err(LinError::FieldMismatch(field, e.field()));
                }
                m.set(i, j, e.clone());
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        debug_assert_eq!(v.field(), self.field);
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElem::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<FieldElem>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn select_columns(&self, idx: &[usize]) -> Mat {
        let mut m = Mat::zeros(self.field, self.rows, idx.len());
        for (k, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, k, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Mat {
            field: self.field,
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    /// Rows `start..end`.
    pub fn row_range(&self, start: usize, end: usize) -> Mat {
        Mat {
            field: self.field,
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    fn check_field(&self, other: &Mat) -> LinResult<()> {
        if self.field != other.field {
            Err(LinError::FieldMismatch(self.field, other.field))
        } else {
            Ok(())
        }
    }

    pub fn mul(&self, other: &Mat) -> LinResult<Mat> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(LinError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.field, self.rows, other.cols);
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
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Mat, op: impl Fn(&FieldElem, &FieldElem) -> FieldElem) -> LinResult<Mat> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(LinError::Shape(format!(
                "shape {:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| op(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Mat) -> LinResult<Mat> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Mat) -> LinResult<Mat> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &FieldElem) -> Mat {
        Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> LinResult<Mat> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(LinError::Shape("hstack row mismatch".into()));
        }
        let mut m = Mat::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(m)
    }

    /// `self` stacked above `other`.
    pub fn vstack(&self, other: &Mat) -> LinResult<Mat> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(LinError::Shape("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Mat {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Block-diagonal matrix with the given blocks.
    pub fn block_diag(field: Field, blocks: &[Mat]) -> Mat {
        let r: usize = blocks.iter().map(Mat::rows).sum();
        let c: usize = blocks.iter().map(Mat::cols).sum();
        let mut m = Mat::zeros(field, r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // first nonzero pivot; exact arithmetic needs no magnitude heuristic
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&factor * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = self.hstack(&Mat::identity(self.field, n)).ok()?;
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        Some(r.select_columns(&(n..2 * n).collect::<Vec<_>>()))
    }

    /// All entries flattened row-major, as a single column.
    pub fn flatten(&self) -> Vec<FieldElem> {
        self.data.clone()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect()
    }
}

/// Basis of the null space of `m`, as the columns of a `cols x nullity` matrix.
pub fn kernel_basis(m: &Mat) -> Mat {
    let (r, pivots) = m.rref();
    let n = m.cols;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut k = Mat::zeros(m.field, n, free.len());
    for (t, &f) in free.iter().enumerate() {
        k.set(f, t, m.field.one());
        for (row, &p) in pivots.iter().enumerate() {
            let v = -r.get(row, f);
            k.set(p, t, v);
        }
    }
    k
}

/// Basis of the column space of `m`, taken from the pivot columns of `m`.
pub fn image_basis(m: &Mat) -> Mat {
    let (_, pivots) = m.rref();
    m.select_columns(&pivots)
}

/// Solves `m * x = b` (for every column of `b` at once). Returns `None` when
/// some column is inconsistent. Free variables are set to zero, so the
/// returned solution depends linearly on `b`.
pub fn solve(m: &Mat, b: &Mat) -> LinResult<Option<Mat>> {
    m.check_field(b)?;
    if m.rows != b.rows {
        return Err(LinError::Shape(format!(
            "system has {} equations but right-hand side has {} rows",
            m.rows, b.rows
        )));
    }
    let aug = m.hstack(b)?;
    let (r, pivots) = aug.rref();
    if pivots.iter().any(|&p| p >= m.cols) {
        return Ok(None);
    }
    let mut x = Mat::zeros(m.field, m.cols, b.cols);
    for (row, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x.set(p, j, r.get(row, m.cols + j).clone());
        }
    }
    Ok(Some(x))
}

/// Standard Kronecker product, shape `(a.rows*b.rows) x (a.cols*b.cols)`.
pub fn kronecker(a: &Mat, b: &Mat) -> LinResult<Mat> {
    a.check_field(b)?;
    let mut out = Mat::zeros(a.field, a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out.set(i * b.rows + k, j * b.cols + l, x * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Projection `k^n -> k^n / span(basis)` in coordinates: `basis` is extended
/// by standard basis vectors in index order and the map returns the
/// coordinates along the added vectors. Kernel is exactly `span(basis)`.
pub fn quotient_coords(n: usize, basis: &Mat) -> LinResult<Mat> {
    if basis.rows != n {
        return Err(LinError::Shape(format!(
            "subspace basis has {} rows, space has dimension {n}",
            basis.rows
        )));
    }
    let k = basis.cols;
    if basis.rank() != k {
        return Err(LinError::DegenerateBasis);
    }
    let complement = complement_indices(basis);
    let mut full = basis.clone();
    for &e in &complement {
        let mut col = Mat::zeros(basis.field, n, 1);
        col.set(e, 0, basis.field.one());
        full = full.hstack(&col)?;
    }
    let inv = full.inverse().ok_or(LinError::DegenerateBasis)?;
    Ok(inv.row_range(k, n))
}

/// Indices of the standard basis vectors that extend the columns of `basis`
/// to a basis of the ambient space, chosen greedily in index order.
pub fn complement_indices(basis: &Mat) -> Vec<usize> {
    let n = basis.rows;
    let mut current = basis.clone();
    let mut rank = current.rank();
    let mut out = Vec::new();
    for e in 0..n {
        if rank == n {
            break;
        }
        let mut col = Mat::zeros(basis.field, n, 1);
        col.set(e, 0, basis.field.one());
        let cand = current.hstack(&col).expect("same shape");
        let r = cand.rank();
        if r > rank {
            current = cand;
            rank = r;
            out.push(e);
        }
    }
    out
}

/// Canonical basis of the column span: the nonzero rows of the RREF of the
/// transpose, returned as columns. Equal spans give equal matrices.
pub fn canonical_span(m: &Mat) -> Mat {
    let (r, piv) = m.transpose().rref();
    r.row_range(0, piv.len()).transpose()
}

/// Basis of the intersection of two column spans in the same ambient space.
pub fn intersect_spans(a: &Mat, b: &Mat) -> LinResult<Mat> {
    let stacked = a.hstack(&b.scale(&a.field.int(-1)))?;
    let k = kernel_basis(&stacked);
    let coeffs = k.row_range(0, a.cols);
    Ok(image_basis(&a.mul(&coeffs)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let k = kernel_basis(&Mat::identity(q(), 3));
        assert_eq!(k.shape(), (3, 0));
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = Mat::from_ints(q(), &[&[1, 1], &[1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k, Mat::from_ints(q(), &[&[-1], &[1]]));
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let b = Mat::from_ints(q(), &[&[4], &[-2]]);
        assert_eq!(solve(&Mat::identity(q(), 2), &b).unwrap(), Some(b.clone()));
        let m = Mat::from_ints(q(), &[&[1, 1], &[1, 1]]);
        let b = Mat::from_ints(q(), &[&[1], &[2]]);
        assert_eq!(solve(&m, &b).unwrap(), None);
        assert!(matches!(
            solve(&m, &Mat::zeros(q(), 3, 1)),
            Err(LinError::Shape(_))
        ));
    }

    #[test]
    fn kronecker_small_cases() {
        let a = Mat::from_ints(q(), &[&[2]]);
        let b = Mat::from_ints(q(), &[&[3]]);
        assert_eq!(kronecker(&a, &b).unwrap(), Mat::from_ints(q(), &[&[6]]));
        let i6 = kronecker(&Mat::identity(q(), 2), &Mat::identity(q(), 3)).unwrap();
        assert_eq!(i6, Mat::identity(q(), 6));
        let f3 = Field::Prime(3);
        assert!(matches!(
            kronecker(&Mat::identity(q(), 1), &Mat::identity(f3, 1)),
            Err(LinError::FieldMismatch(..))
        ));
    }

    #[test]
    fn image_and_quotient_coords() {
        assert_eq!(image_basis(&Mat::zeros(q(), 3, 2)).cols(), 0);
        let b = Mat::from_ints(q(), &[&[0], &[1]]);
        let p = quotient_coords(2, &b).unwrap();
        assert_eq!(p, Mat::from_ints(q(), &[&[1, 0]]));
        assert!(p.mul(&b).unwrap().is_zero());
        let dep = Mat::from_ints(q(), &[&[1, 2], &[1, 2]]);
        assert_eq!(quotient_coords(2, &dep), Err(LinError::DegenerateBasis));
    }

    #[test]
    fn intersection_of_spans() {
        let a = Mat::from_ints(q(), &[&[1, 0], &[0, 1], &[0, 0]]);
        let b = Mat::from_ints(q(), &[&[0, 0], &[1, 0], &[0, 1]]);
        let i = intersect_spans(&a, &b).unwrap();
        assert_eq!(canonical_span(&i), Mat::from_ints(q(), &[&[0], &[1], &[0]]));
    }

    fn gf3_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
        proptest::collection::vec(0i64..3, rows * cols).prop_map(move |v| {
            let f = Field::Prime(3);
            let mut m = Mat::zeros(f, rows, cols);
            for (i, x) in v.into_iter().enumerate() {
                m.set(i / cols, i % cols, f.int(x));
            }
            m
        })
    }

    fn q_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
        proptest::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
            let mut m = Mat::zeros(q(), rows, cols);
            for (i, x) in v.into_iter().enumerate() {
                m.set(i / cols, i % cols, q().int(x));
            }
            m
        })
    }

    proptest! {
        #[test]
        fn gf3_kernel_vectors_annihilate(m in gf3_matrix(4, 6)) {
            let k = kernel_basis(&m);
            prop_assert_eq!(k.cols(), 6 - m.rank());
            prop_assert!(m.mul(&k).unwrap().is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn rank_nullity(m in q_matrix(3, 5)) {
            prop_assert_eq!(kernel_basis(&m).cols() + image_basis(&m).cols(), 5);
        }

        #[test]
        fn consistent_systems_solve(m in q_matrix(3, 4), x in q_matrix(4, 1)) {
            let b = m.mul(&x).unwrap();
            let sol = solve(&m, &b).unwrap().expect("consistent by construction");
            prop_assert_eq!(m.mul(&sol).unwrap(), b);
        }

        #[test]
        fn kronecker_rank_multiplies(a in q_matrix(3, 3), b in q_matrix(3, 3)) {
            prop_assert_eq!(kronecker(&a, &b).unwrap().rank(), a.rank() * b.rank());
        }

        #[test]
        fn kronecker_mixed_product(a in q_matrix(2, 3), b in q_matrix(2, 2), c in q_matrix(3, 2), d in q_matrix(2, 1)) {
            let lhs = kronecker(&a, &b).unwrap().mul(&kronecker(&c, &d).unwrap()).unwrap();
            let rhs = kronecker(&a.mul(&c).unwrap(), &b.mul(&d).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn kronecker_bilinear(a in q_matrix(2, 2), a2 in q_matrix(2, 2), b in q_matrix(2, 3)) {
            let lhs = kronecker(&a.add(&a2).unwrap(), &b).unwrap();
            let rhs = kronecker(&a, &b).unwrap().add(&kronecker(&a2, &b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn quotient_coords_kills_subspace_and_is_onto(m in q_matrix(4, 2)) {
            let b = image_basis(&m);
            let p = quotient_coords(4, &b).unwrap();
            prop_assert!(p.mul(&b).unwrap().is_zero());
            prop_assert_eq!(p.rank(), 4 - b.cols());
        }
    }
}
