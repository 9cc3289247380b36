//! Dense matrices over a finite field with exact Gaussian elimination.

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>, // row-major
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// Builds a matrix from equal-length rows; `cols` is used when there are no rows.
    pub fn from_rows<R: AsRef<[Elem]>>(field: &Field, rows: &[R], cols: usize) -> Result<Matrix> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Dimension(format!("row of length {} in a {cols}-column matrix", r.len())));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { field: field.clone(), rows: rows.len(), cols, data })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out[(i, j)], f.mul(a, other[(l, j)]));
                    out[(i, j)] = v;
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        (0..self.cols)
            .map(|j| f.sum((0..self.rows).map(|i| f.mul(v[i], self[(i, j)]))))
            .collect()
    }

    /// Matrix times column vector.
    pub fn apply_col(&self, v: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        (0..self.rows).map(|i| dot(f, self.row(i), v)).collect()
    }

    pub fn scale(&self, c: Elem) -> Matrix {
        let mut m = self.clone();
        for x in m.data.iter_mut() {
            *x = self.field.mul(*x, c);
        }
        m
    }

    pub fn echelon(&self) -> Echelon {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = f.inv(m[(r, c)]);
            for j in c..m.cols {
                m[(r, j)] = f.mul(m[(r, j)], inv);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m[(i, c)];
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m[(i, j)], f.mul(factor, m[(r, j)]));
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right nullspace {v : M v = 0}. Each basis vector has a 1
    /// in one free column and zeros in the other free columns.
    pub fn nullspace(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let Echelon { matrix: e, pivots } = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![f.zero(); self.cols];
                v[free] = f.one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(e[(r, free)]);
                }
                v
            })
            .collect()
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> Result<Elem> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!("determinant of {}x{}", self.rows, self.cols)));
        }
        Ok(det_rows(&self.field, &self.row_vecs()))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Matrix::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = f.one();
        }
        let e = aug.echelon();
        if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
            return Err(Error::Dependent("matrix is singular".into()));
        }
        let mut inv = Matrix::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = e.matrix[(i, n + j)];
            }
        }
        Ok(inv)
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

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Elem;
    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Elem {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(f.zero(), |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Determinant of the square matrix with the given rows, in the given order.
pub fn det_rows<R: AsRef<[Elem]>>(f: &Field, rows: &[R]) -> Elem {
    let n = rows.len();
    let mut m: Vec<Vec<Elem>> = rows.iter().map(|r| r.as_ref().to_vec()).collect();
    debug_assert!(m.iter().all(|r| r.len() == n));
    let mut det = f.one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return f.zero();
        };
        if piv != c {
            m.swap(piv, c);
            det = f.neg(det);
        }
        let pv = m[c][c];
        det = f.mul(det, pv);
        let inv = f.inv(pv);
        for i in c + 1..n {
            let factor = f.mul(m[i][c], inv);
            if factor.is_zero() {
                continue;
            }
            for j in c..n {
                let v = f.sub(m[i][j], f.mul(factor, m[c][j]));
                m[i][j] = v;
            }
        }
    }
    det
}

/// Rank of a list of vectors.
pub fn rank_of<R: AsRef<[Elem]>>(f: &Field, rows: &[R]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].as_ref().len();
    Matrix::from_rows(f, rows, cols).map(|m| m.rank()).unwrap_or(0)
}

/// Whether two lists of vectors span the same subspace (row-space equality
/// via reduced echelon forms).
pub fn same_row_space<R: AsRef<[Elem]>>(f: &Field, a: &[R], b: &[R], cols: usize) -> Result<bool> {
    let ea = Matrix::from_rows(f, a, cols)?.echelon();
    let eb = Matrix::from_rows(f, b, cols)?.echelon();
    if ea.pivots != eb.pivots {
        return Ok(false);
    }
    let r = ea.pivots.len();
    Ok((0..r).all(|i| ea.matrix.row(i) == eb.matrix.row(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(q: u32) -> Field {
        Field::of_order(q).unwrap()
    }

    fn mat(f: &Field, rows: &[&[u32]]) -> Matrix {
        let r: Vec<Vec<Elem>> =
            rows.iter().map(|r| r.iter().map(|&x| f.elem(x).unwrap()).collect()).collect();
        Matrix::from_rows(f, &r, rows[0].len()).unwrap()
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        let f = gf(7);
        assert!(Matrix::identity(&f, 4).nullspace().is_empty());
        assert_eq!(Matrix::identity(&f, 4).det().unwrap(), f.one());
    }

    #[test]
    fn rank_deficient_nullspace() {
        let f = gf(5);
        // third row = first + second, fourth = 2 * first
        let m = mat(&f, &[&[1, 2, 3, 4], &[0, 1, 1, 0], &[1, 3, 4, 4], &[2, 4, 1, 3]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.apply_col(v).iter().all(|x| x.is_zero()));
        }
        // brute force: count all solutions of M v = 0 over GF(5)^4
        let mut count = 0;
        for n in 0..625u32 {
            let v: Vec<Elem> = (0..4).map(|i| f.elem(n / 5u32.pow(i) % 5).unwrap()).collect();
            if m.apply_col(&v).iter().all(|x| x.is_zero()) {
                count += 1;
            }
        }
        assert_eq!(count, 25);
    }

    #[test]
    fn determinant_vandermonde() {
        let f = gf(13);
        let ts = [2u32, 5, 7, 11];
        let rows: Vec<Vec<Elem>> = ts
            .iter()
            .map(|&t| (0..4).map(|e| f.pow(f.elem(t).unwrap(), e)).collect())
            .collect();
        let mut expect = f.one();
        for i in 0..4 {
            for j in i + 1..4 {
                let d = f.sub(f.elem(ts[j]).unwrap(), f.elem(ts[i]).unwrap());
                expect = f.mul(expect, d);
            }
        }
        assert_eq!(det_rows(&f, &rows), expect);
    }

    #[test]
    fn inverse_roundtrip() {
        let f = gf(9);
        let m = mat(&f, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 0]]);
        if m.det().unwrap().is_zero() {
            assert!(m.inverse().is_err());
        } else {
            let inv = m.inverse().unwrap();
            assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(&f, 3));
        }
        let singular = mat(&f, &[&[1, 2], &[1, 2]]);
        assert!(singular.inverse().is_err());
    }

    proptest! {
        #[test]
        fn det_agrees_with_rank(entries in proptest::collection::vec(0u32..7, 16)) {
            let f = gf(7);
            let rows: Vec<Vec<Elem>> = entries
                .chunks(4)
                .map(|c| c.iter().map(|&x| f.elem(x).unwrap()).collect())
                .collect();
            let m = Matrix::from_rows(&f, &rows, 4).unwrap();
            prop_assert_eq!(m.det().unwrap().is_zero(), m.rank() < 4);
            prop_assert_eq!(m.rank() + m.nullspace().len(), 4);
            let mut swapped = rows.clone();
            swapped.swap(0, 2);
            prop_assert_eq!(det_rows(&f, &swapped), f.neg(det_rows(&f, &rows)));
        }
    }
}
