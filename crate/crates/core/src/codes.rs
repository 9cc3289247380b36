//! Linear codes over GF(q) and their link to arcs: the columns of a
//! generator matrix of an [n, k, n − k + 1] code form an n-arc in PG(k − 1, q).

use rayon::prelude::*;

use crate::arc::Arc;
use crate::error::{Error, Result};
use crate::geometry::Space;
use crate::gf::{Elem, Field};
use crate::linalg::{dot, Matrix};

/// Largest q^k for which [`LinearCode::min_distance`] enumerates codewords.
pub const MIN_DISTANCE_GUARD: u64 = 1 << 24;

/// A linear code stored through a full-rank generator matrix.
#[derive(Clone, Debug)]
pub struct LinearCode {
    generator: Matrix,
}

impl LinearCode {
    /// Rows of `g` must be linearly independent.
    pub fn new(g: Matrix) -> Result<LinearCode> {
        if g.rank() != g.rows() {
            return Err(Error::Dependent("generator rows".into()));
        }
        Ok(LinearCode { generator: g })
    }

    /// The code whose generator matrix has the arc's points as columns.
    pub fn from_arc(a: &Arc) -> Result<LinearCode> {
        let f = a.field();
        let mut g = Matrix::zeros(f, a.k(), a.len());
        for (j, p) in a.points().iter().enumerate() {
            for (i, &x) in p.iter().enumerate() {
                g[(i, j)] = x;
            }
        }
        LinearCode::new(g)
    }

    pub fn field(&self) -> &Field {
        self.generator.field()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    /// The dual code, generated by a basis of the right nullspace of G.
    pub fn dual(&self) -> LinearCode {
        let basis = self.generator.nullspace();
        let n = self.length();
        let g = Matrix::from_rows(self.field(), &basis, n).expect("nullspace vectors have length n");
        LinearCode { generator: g }
    }

    pub fn encode(&self, msg: &[Elem]) -> Vec<Elem> {
        self.generator.apply_row(msg)
    }

    /// Whether c is orthogonal to every row of the dual, i.e. lies in the code.
    pub fn contains(&self, c: &[Elem]) -> bool {
        let f = self.field();
        c.len() == self.length() && self.dual().generator.row_vecs().iter().all(|h| dot(f, h, c).is_zero())
    }

    /// Minimum weight over one codeword per projective class. Guarded by
    /// q^k ≤ [`MIN_DISTANCE_GUARD`].
    pub fn min_distance(&self) -> Result<usize> {
        let f = self.field();
        let k = self.dimension();
        if k == 0 {
            return Err(Error::Dimension("zero code has no minimum distance".into()));
        }
        let size = (f.q() as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
        if size > MIN_DISTANCE_GUARD {
            return Err(Error::GuardExceeded(format!("q^k = {size} > {MIN_DISTANCE_GUARD}")));
        }
        let space = Space::new(f, k)?;
        let d = (0..space.num_points())
            .into_par_iter()
            .map(|i| {
                let m = space.point_at(i);
                self.encode(&m).iter().filter(|x| !x.is_zero()).count()
            })
            .min()
            .expect("at least one message");
        Ok(d)
    }

    /// Singleton bound d = n − k + 1.
    pub fn is_mds(&self) -> Result<bool> {
        Ok(self.min_distance()? == self.length() - self.dimension() + 1)
    }
}

impl PartialEq for LinearCode {
    /// Equality of row spaces.
    fn eq(&self, other: &LinearCode) -> bool {
        self.field() == other.field()
            && self.length() == other.length()
            && self.dimension() == other.dimension()
            && self.generator.echelon().matrix.row_vecs()[..self.dimension()]
                == other.generator.echelon().matrix.row_vecs()[..other.dimension()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arc::{hyperoval, nrc, OPolynomial};
    use crate::linalg::same_row_space;

    #[test]
    fn nrc_codes_are_mds() {
        for (k, q) in [(2, 5), (3, 5), (3, 7), (4, 8), (5, 9)] {
            let f = Field::of_order(q).unwrap();
            let c = LinearCode::from_arc(&nrc(k, &f).unwrap()).unwrap();
            assert_eq!(c.min_distance().unwrap(), q as usize + 2 - k);
            assert!(c.is_mds().unwrap());
        }
    }

    #[test]
    fn non_arc_code_is_not_mds() {
        let f = Field::of_order(5).unwrap();
        let o = f.one();
        let z = f.zero();
        let g = Matrix::from_rows(&f, &[vec![o, z, o, o], vec![z, o, o, o]], 4).unwrap();
        let c = LinearCode::new(g).unwrap();
        assert_eq!(c.min_distance().unwrap(), 2);
        assert!(!c.is_mds().unwrap());
    }

    #[test]
    fn dual_is_orthogonal_and_involutive() {
        let f = Field::of_order(8).unwrap();
        let c = LinearCode::from_arc(&hyperoval(OPolynomial::Regular, &f).unwrap()).unwrap();
        let d = c.dual();
        assert_eq!(d.dimension(), 7);
        for r in c.generator().row_vecs() {
            for s in d.generator().row_vecs() {
                assert!(dot(&f, &r, &s).is_zero());
            }
        }
        assert_eq!(d.dual(), c);
        assert!(d.is_mds().unwrap());
        let rows = c.generator().row_vecs();
        let back = d.dual().generator().row_vecs();
        assert!(same_row_space(&f, &rows, &back, 10).unwrap());
    }

    #[test]
    fn equality_ignores_basis() {
        let f = Field::of_order(7).unwrap();
        let c = LinearCode::from_arc(&nrc(3, &f).unwrap()).unwrap();
        let mut rows = c.generator().row_vecs();
        let r0 = rows[0].clone();
        for (x, y) in rows[1].iter_mut().zip(&r0) {
            *x = f.add(*x, f.mul(f.from_int(3), *y));
        }
        rows.swap(0, 2);
        let other = LinearCode::new(Matrix::from_rows(&f, &rows, 8).unwrap()).unwrap();
        assert_eq!(c, other);
        assert!(c.contains(&rows[1]));
    }

    #[test]
    fn guard_is_enforced() {
        let f = Field::of_order(256).unwrap();
        // 256^4 > 2^24 messages, however short the code
        let mut rows = Matrix::identity(&f, 4).row_vecs();
        for r in rows.iter_mut() {
            r.push(f.one());
        }
        let c = LinearCode::new(Matrix::from_rows(&f, &rows, 5).unwrap()).unwrap();
        assert!(matches!(c.min_distance(), Err(Error::GuardExceeded(_))));
    }
}
