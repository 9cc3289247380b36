//! Points, hyperplanes, ordered determinants, pencils, projections, conics
//! and lifted projectivities in PG(k−1, q).
//!
//! Raw vectors (`&[Elem]`) are used wherever a fixed representative matters;
//! [`ProjPoint`] and [`LinearForm`] hold canonical representatives (first
//! nonzero coordinate equal to 1) for equality and ordering.

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linalg::{det_rows, dot, rank_of, Matrix};

/// Scales `v` so its first nonzero coordinate is 1; `None` for the zero vector.
pub fn normalize(f: &Field, v: &[Elem]) -> Option<Vec<Elem>> {
    let lead = v.iter().copied().find(|x| !x.is_zero())?;
    let inv = f.inv(lead);
    Some(v.iter().map(|&x| f.mul(x, inv)).collect())
}

/// A projective point in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint(Vec<Elem>);

impl ProjPoint {
    pub fn new(f: &Field, v: &[Elem]) -> Result<ProjPoint> {
        normalize(f, v)
            .map(ProjPoint)
            .ok_or_else(|| Error::Precondition("the zero vector is not a projective point".into()))
    }

    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Elem> {
        self.0
    }
}

/// A hyperplane, given by its canonical dual coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm(Vec<Elem>);

impl LinearForm {
    pub fn new(f: &Field, coeffs: &[Elem]) -> Result<LinearForm> {
        normalize(f, coeffs)
            .map(LinearForm)
            .ok_or_else(|| Error::Precondition("the zero form defines no hyperplane".into()))
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.0
    }

    pub fn eval(&self, f: &Field, x: &[Elem]) -> Elem {
        dot(f, &self.0, x)
    }

    pub fn contains(&self, f: &Field, x: &[Elem]) -> bool {
        self.eval(f, x).is_zero()
    }
}

/// Ambient space PG(k−1, q): point enumeration in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    field: Field,
    k: usize,
}

impl Space {
    pub fn new(field: &Field, k: usize) -> Result<Space> {
        if k == 0 {
            return Err(Error::Dimension("vector dimension must be at least 1".into()));
        }
        Ok(Space { field: field.clone(), k })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// (q^k − 1)/(q − 1).
    pub fn num_points(&self) -> usize {
        let q = self.field.q() as usize;
        (0..self.k).map(|e| q.pow(e as u32)).sum()
    }

    /// Position of a normalized vector in the canonical (lexicographic) order.
    pub fn index_of(&self, v: &[Elem]) -> usize {
        let q = self.field.q() as usize;
        let lead = v.iter().position(|x| !x.is_zero()).expect("nonzero vector");
        debug_assert_eq!(v[lead], self.field.one());
        let before: usize = (0..self.k - 1 - lead).map(|e| q.pow(e as u32)).sum();
        let tail = v[lead + 1..].iter().fold(0usize, |acc, x| acc * q + x.index() as usize);
        before + tail
    }

    /// Index of the projective point of an arbitrary nonzero vector.
    pub fn index_of_raw(&self, v: &[Elem]) -> usize {
        self.index_of(&normalize(&self.field, v).expect("nonzero vector"))
    }

    pub fn point_at(&self, mut idx: usize) -> Vec<Elem> {
        let q = self.field.q() as usize;
        let mut lead = self.k - 1;
        loop {
            let block = q.pow((self.k - 1 - lead) as u32);
            if idx < block {
                break;
            }
            idx -= block;
            lead -= 1;
        }
        let mut v = vec![self.field.zero(); self.k];
        v[lead] = self.field.one();
        for pos in (lead + 1..self.k).rev() {
            v[pos] = self.field.elem((idx % q) as u32).expect("index within field");
            idx /= q;
        }
        v
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        (0..self.num_points()).map(move |i| self.point_at(i))
    }
}

/// Normalized points of the projective subspace spanned by `rows`
/// (which must be linearly independent), in no particular order.
pub fn points_in_span(f: &Field, rows: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let d = rows.len();
    let k = rows[0].len();
    let coeff_space = Space::new(f, d).expect("nonempty");
    coeff_space
        .points()
        .map(|c| {
            let mut v = vec![f.zero(); k];
            for (ci, r) in c.iter().zip(rows) {
                if ci.is_zero() {
                    continue;
                }
                for (vj, &rj) in v.iter_mut().zip(r) {
                    *vj = f.add(*vj, f.mul(*ci, rj));
                }
            }
            normalize(f, &v).expect("independent rows")
        })
        .collect()
}

/// Determinant of the matrix with first row `u` followed by `rest` in the
/// given order. The sign depends on that order.
pub fn det_ordered(f: &Field, u: &[Elem], rest: &[&[Elem]]) -> Result<Elem> {
    let k = u.len();
    if rest.len() + 1 != k || rest.iter().any(|r| r.len() != k) {
        return Err(Error::Dimension(format!(
            "det_ordered needs {} further rows of length {k}",
            k.saturating_sub(1)
        )));
    }
    let mut rows: Vec<&[Elem]> = Vec::with_capacity(k);
    rows.push(u);
    rows.extend_from_slice(rest);
    Ok(det_rows(f, &rows))
}

/// The hyperplane spanned by k − 1 independent vectors.
pub fn hyperplane_through(f: &Field, rows: &[&[Elem]]) -> Result<LinearForm> {
    let k = rows.first().map(|r| r.len()).unwrap_or(0);
    if rows.len() + 1 != k {
        return Err(Error::Dimension(format!("{} points do not determine a hyperplane", rows.len())));
    }
    let m = Matrix::from_rows(f, rows, k)?;
    let ns = m.nullspace();
    if ns.len() != 1 {
        return Err(Error::Dependent("points do not span a hyperplane".into()));
    }
    LinearForm::new(f, &ns[0])
}

/// The q + 1 hyperplanes containing the span of k − 2 independent points,
/// sorted by canonical dual coordinates.
pub fn hyperplanes_through(f: &Field, k: usize, s: &[&[Elem]]) -> Result<Vec<LinearForm>> {
    if k < 2 || s.len() + 2 != k || s.iter().any(|r| r.len() != k) {
        return Err(Error::Dimension(format!("need {} points of length {k}", k.saturating_sub(2))));
    }
    let ns = if s.is_empty() {
        // k = 2: every point of PG(1, q) is a "hyperplane"
        vec![vec![f.one(), f.zero()], vec![f.zero(), f.one()]]
    } else {
        Matrix::from_rows(f, s, k)?.nullspace()
    };
    if ns.len() != 2 {
        return Err(Error::Dependent("points are dependent".into()));
    }
    let mut forms: Vec<LinearForm> = points_in_span(f, &ns).into_iter().map(LinearForm).collect();
    forms.sort();
    Ok(forms)
}

/// Projects each point of `a` from `x` onto the hyperplane `pi`: the point
/// where the line through `x` and `a` meets `pi`. Coordinates stay ambient.
pub fn project(f: &Field, a: &[Vec<Elem>], x: &[Elem], pi: &LinearForm) -> Result<Vec<Vec<Elem>>> {
    let px = pi.eval(f, x);
    if px.is_zero() {
        return Err(Error::Precondition("centre of projection lies on the target hyperplane".into()));
    }
    let nx = normalize(f, x).ok_or_else(|| Error::Precondition("zero centre".into()))?;
    a.iter()
        .map(|p| {
            if normalize(f, p).as_deref() == Some(nx.as_slice()) {
                return Err(Error::Precondition("projected point equals the centre".into()));
            }
            // pi(x)·p − pi(p)·x lies on the line xp and on pi
            let pa = pi.eval(f, p);
            Ok(p.iter().zip(x).map(|(&pi_, &xi)| f.sub(f.mul(px, pi_), f.mul(pa, xi))).collect())
        })
        .collect()
}

/// Coordinates of points on the hyperplane `pi` with respect to the
/// nullspace basis of `pi` (identity on the non-pivot columns), giving
/// vectors of length k − 1.
pub fn hyperplane_coordinates(f: &Field, pi: &LinearForm, pts: &[Vec<Elem>]) -> Result<Vec<Vec<Elem>>> {
    let k = pi.coeffs().len();
    let m = Matrix::from_rows(f, &[pi.coeffs()], k)?;
    let e = m.echelon();
    let free: Vec<usize> = (0..k).filter(|c| !e.pivots.contains(c)).collect();
    pts.iter()
        .map(|p| {
            if !pi.contains(f, p) {
                return Err(Error::Precondition("point is not on the hyperplane".into()));
            }
            Ok(free.iter().map(|&c| p[c]).collect())
        })
        .collect()
}

/// A ternary quadratic form with coefficients of
/// X1², X1X2, X1X3, X2², X2X3, X3² (in that order), canonically scaled.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Conic(pub [Elem; 6]);

pub(crate) fn quadratic_monomials(f: &Field, x: &[Elem]) -> [Elem; 6] {
    [
        f.mul(x[0], x[0]),
        f.mul(x[0], x[1]),
        f.mul(x[0], x[2]),
        f.mul(x[1], x[1]),
        f.mul(x[1], x[2]),
        f.mul(x[2], x[2]),
    ]
}

impl Conic {
    pub fn new(f: &Field, c: &[Elem; 6]) -> Result<Conic> {
        let v = normalize(f, c).ok_or_else(|| Error::Precondition("zero quadratic form".into()))?;
        Ok(Conic(v.try_into().expect("six coefficients")))
    }

    pub fn eval(&self, f: &Field, x: &[Elem]) -> Elem {
        dot(f, &self.0, &quadratic_monomials(f, x))
    }

    pub fn contains(&self, f: &Field, x: &[Elem]) -> bool {
        self.eval(f, x).is_zero()
    }

    /// The symmetric bilinear form B(x, y) = Q(x + y) − Q(x) − Q(y).
    pub fn polar(&self, f: &Field, x: &[Elem], y: &[Elem]) -> Elem {
        let s: Vec<Elem> = x.iter().zip(y).map(|(&a, &b)| f.add(a, b)).collect();
        f.sub(f.sub(self.eval(f, &s), self.eval(f, x)), self.eval(f, y))
    }
}

/// The unique conic through five points of a planar arc.
pub fn conic_through(f: &Field, five: &[Vec<Elem>]) -> Result<Conic> {
    if five.len() != 5 || five.iter().any(|p| p.len() != 3) {
        return Err(Error::Dimension("a conic is fitted through five planar points".into()));
    }
    let rows: Vec<[Elem; 6]> = five.iter().map(|p| quadratic_monomials(f, p)).collect();
    let ns = Matrix::from_rows(f, &rows, 6)?.nullspace();
    if ns.len() != 1 {
        return Err(Error::Dependent("three of the five points are collinear".into()));
    }
    // a line pair through five points would contain three collinear ones
    for i in 0..5 {
        for j in i + 1..5 {
            for l in j + 1..5 {
                if rank_of(f, &[&five[i][..], &five[j][..], &five[l][..]]) < 3 {
                    return Err(Error::Dependent("three of the five points are collinear".into()));
                }
            }
        }
    }
    Conic::new(f, &ns[0].clone().try_into().expect("six coefficients"))
}

/// Matrix L with ν(x·α) = ν(x)·L for the degree-(k−1) Veronese map
/// ν(x1, x2) = (x1^(k−1), x1^(k−2)·x2, …, x2^(k−1)), with points as row vectors.
pub fn lift_projectivity(f: &Field, alpha: &[[Elem; 2]; 2], k: usize) -> Result<Matrix> {
    if k == 0 {
        return Err(Error::Dimension("k must be positive".into()));
    }
    let [[a, b], [c, d]] = *alpha;
    if f.sub(f.mul(a, d), f.mul(b, c)).is_zero() {
        return Err(Error::Dependent("singular 2x2 matrix".into()));
    }
    let deg = k - 1;
    // (x1 a + x2 c)^(deg−j) (x1 b + x2 d)^j as coefficient vectors indexed by
    // the power of x2.
    let binom_pow = |u: Elem, v: Elem, n: usize| -> Vec<Elem> {
        let mut poly = vec![f.one()];
        for _ in 0..n {
            let mut next = vec![f.zero(); poly.len() + 1];
            for (i, &p) in poly.iter().enumerate() {
                next[i] = f.add(next[i], f.mul(p, u));
                next[i + 1] = f.add(next[i + 1], f.mul(p, v));
            }
            poly = next;
        }
        poly
    };
    let mut l = Matrix::zeros(f, k, k);
    for j in 0..k {
        let left = binom_pow(a, c, deg - j);
        let right = binom_pow(b, d, j);
        for (i1, &x) in left.iter().enumerate() {
            for (i2, &y) in right.iter().enumerate() {
                let i = i1 + i2;
                l[(i, j)] = f.add(l[(i, j)], f.mul(x, y));
            }
        }
    }
    Ok(l)
}

/// ν(x1, x2) = (x1^(k−1), …, x2^(k−1)).
pub fn veronese(f: &Field, x: [Elem; 2], k: usize) -> Vec<Elem> {
    (0..k)
        .map(|i| f.mul(f.pow(x[0], (k - 1 - i) as u64), f.pow(x[1], i as u64)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(q: u32) -> Field {
        Field::of_order(q).unwrap()
    }

    fn v(f: &Field, xs: &[u32]) -> Vec<Elem> {
        xs.iter().map(|&x| f.elem(x).unwrap()).collect()
    }

    #[test]
    fn canonical_indexing_roundtrip() {
        for (q, k) in [(2, 3), (3, 3), (4, 2), (5, 4), (9, 3)] {
            let f = gf(q);
            let s = Space::new(&f, k).unwrap();
            let pts: Vec<Vec<Elem>> = s.points().collect();
            assert_eq!(pts.len(), s.num_points());
            for (i, p) in pts.iter().enumerate() {
                assert_eq!(s.index_of(p), i);
                assert_eq!(normalize(&f, p).unwrap(), *p);
            }
            let mut sorted = pts.clone();
            sorted.sort();
            assert_eq!(sorted, pts);
        }
    }

    #[test]
    fn det_ordered_basics() {
        let f = gf(7);
        let e = |i: usize| {
            let mut x = vec![f.zero(); 4];
            x[i] = f.one();
            x
        };
        let (e1, e2, e3, e4) = (e(0), e(1), e(2), e(3));
        assert_eq!(det_ordered(&f, &e1, &[&e2, &e3, &e4]).unwrap(), f.one());
        assert_eq!(det_ordered(&f, &e1, &[&e3, &e2, &e4]).unwrap(), f.neg(f.one()));
        let u: Vec<Elem> = e2.iter().zip(&e3).map(|(&a, &b)| f.add(a, b)).collect();
        assert!(det_ordered(&f, &u, &[&e2, &e3, &e4]).unwrap().is_zero());
        assert!(det_ordered(&f, &e1, &[&e2, &e3]).is_err());
    }

    #[test]
    fn pencil_of_lines() {
        let f = gf(5);
        let p = v(&f, &[1, 0, 0]);
        let lines = hyperplanes_through(&f, 3, &[&p]).unwrap();
        assert_eq!(lines.len(), 6);
        assert!(lines.iter().all(|l| l.contains(&f, &p)));
        let mut dedup = lines.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), 6);
    }

    #[test]
    fn pencil_matches_brute_force_in_pg35() {
        let f = gf(5);
        let nrc = |t: u32| (0..4).map(|i| f.pow(f.elem(t).unwrap(), i)).collect::<Vec<_>>();
        let (a, b) = (nrc(2), nrc(3));
        let pencil = hyperplanes_through(&f, 4, &[&a, &b]).unwrap();
        let dual = Space::new(&f, 4).unwrap();
        let brute: Vec<LinearForm> = dual
            .points()
            .filter(|h| dot(&f, h, &a).is_zero() && dot(&f, h, &b).is_zero())
            .map(|h| LinearForm::new(&f, &h).unwrap())
            .collect();
        assert_eq!(dual.num_points(), 156);
        assert_eq!(pencil, brute);
        assert!(hyperplanes_through(&f, 4, &[&a, &a]).is_err());
    }

    #[test]
    fn project_single_point() {
        let f = gf(7);
        let x = v(&f, &[1, 0, 0]);
        let pi = LinearForm::new(&f, &v(&f, &[1, 0, 0])).unwrap();
        let a = v(&f, &[1, 2, 3]);
        let img = project(&f, &[a], &x, &pi).unwrap();
        assert_eq!(normalize(&f, &img[0]).unwrap(), v(&f, &[0, 1, 5]));
        assert!(project(&f, std::slice::from_ref(&x), &x, &pi).is_err());
        let bad = LinearForm::new(&f, &v(&f, &[0, 1, 0])).unwrap();
        assert!(project(&f, &[v(&f, &[1, 1, 1])], &x, &bad).is_err());
    }

    #[test]
    fn conic_through_parabola_points() {
        let f = gf(7);
        let pts: Vec<Vec<Elem>> =
            (0..5).map(|t| vec![f.one(), f.elem(t).unwrap(), f.pow(f.elem(t).unwrap(), 2)]).collect();
        let c = conic_through(&f, &pts).unwrap();
        // X1X3 − X2²
        assert_eq!(c.0, [f.zero(), f.zero(), f.one(), f.neg(f.one()), f.zero(), f.zero()]);
        for t in f.elements() {
            assert!(c.contains(&f, &[f.one(), t, f.mul(t, t)]));
        }
        assert!(c.contains(&f, &v(&f, &[0, 0, 1])));
        // (1,0,0), (1,1,0), (0,1,0) lie on X3 = 0
        let bad = vec![
            v(&f, &[0, 0, 1]),
            v(&f, &[1, 0, 0]),
            v(&f, &[1, 1, 0]),
            v(&f, &[0, 1, 0]),
            v(&f, &[1, 4, 1]),
        ];
        assert!(conic_through(&f, &bad).is_err());
    }

    #[test]
    fn lift_examples() {
        let f = gf(11);
        let (o, z) = (f.one(), f.zero());
        assert_eq!(lift_projectivity(&f, &[[o, z], [z, o]], 4).unwrap(), Matrix::identity(&f, 4));
        let lam = f.elem(3).unwrap();
        let l = lift_projectivity(&f, &[[lam, z], [z, o]], 3).unwrap();
        let mut expect = Matrix::zeros(&f, 3, 3);
        expect[(0, 0)] = f.mul(lam, lam);
        expect[(1, 1)] = lam;
        expect[(2, 2)] = o;
        assert_eq!(l, expect);
        assert!(lift_projectivity(&f, &[[o, o], [o, o]], 3).is_err());
    }

    #[test]
    fn lift_intertwines_on_projective_line() {
        let f = gf(7);
        let alpha = [[f.elem(2).unwrap(), f.elem(5).unwrap()], [f.elem(1).unwrap(), f.elem(3).unwrap()]];
        for k in 2..6 {
            let l = lift_projectivity(&f, &alpha, k).unwrap();
            let line = Space::new(&f, 2).unwrap();
            for x in line.points() {
                let xa = [
                    f.add(f.mul(x[0], alpha[0][0]), f.mul(x[1], alpha[1][0])),
                    f.add(f.mul(x[0], alpha[0][1]), f.mul(x[1], alpha[1][1])),
                ];
                assert_eq!(veronese(&f, xa, k), l.apply_row(&veronese(&f, [x[0], x[1]], k)));
            }
        }
    }

    proptest! {
        #[test]
        fn normalization_scale_invariant(xs in proptest::collection::vec(0u32..9, 4), s in 1u32..9) {
            let f = gf(9);
            let x = v(&f, &xs);
            let lam = f.elem(s).unwrap();
            let y: Vec<Elem> = x.iter().map(|&c| f.mul(c, lam)).collect();
            let nx = normalize(&f, &x);
            prop_assert_eq!(nx.clone(), normalize(&f, &y));
            if let Some(n) = nx {
                prop_assert_eq!(normalize(&f, &n), Some(n));
            }
        }

        #[test]
        fn lift_is_homomorphism(a in proptest::collection::vec(0u32..5, 4), b in proptest::collection::vec(0u32..5, 4)) {
            let f = gf(5);
            let m = |e: &[u32]| [[f.elem(e[0]).unwrap(), f.elem(e[1]).unwrap()], [f.elem(e[2]).unwrap(), f.elem(e[3]).unwrap()]];
            let (ma, mb) = (m(&a), m(&b));
            let det = |x: &[[Elem; 2]; 2]| f.sub(f.mul(x[0][0], x[1][1]), f.mul(x[0][1], x[1][0]));
            prop_assume!(!det(&ma).is_zero() && !det(&mb).is_zero());
            let mut ab = [[f.zero(); 2]; 2];
            for i in 0..2 { for j in 0..2 { for l in 0..2 {
                ab[i][j] = f.add(ab[i][j], f.mul(ma[i][l], mb[l][j]));
            }}}
            for k in 2..5 {
                let lhs = lift_projectivity(&f, &ab, k).unwrap();
                let rhs = lift_projectivity(&f, &ma, k).unwrap().mul(&lift_projectivity(&f, &mb, k).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn projection_preserves_collinearity(t in proptest::collection::vec(0u32..7, 9)) {
            let f = gf(7);
            let x = v(&f, &[1, 2, 3, 1]);
            let pi = LinearForm::new(&f, &v(&f, &[0, 0, 0, 1])).unwrap();
            let (a, b) = (v(&f, &t[0..4]), v(&f, &t[4..8]));
            prop_assume!(rank_of(&f, &[&a[..], &b[..], &x[..]]) == 3);
            let c: Vec<Elem> = a.iter().zip(&b).map(|(&p, &r)| f.add(p, f.mul(f.elem(t[8]).unwrap(), r))).collect();
            let img = project(&f, &[a, b, c], &x, &pi).unwrap();
            prop_assert!(rank_of(&f, &img) <= 2);
        }
    }
}
