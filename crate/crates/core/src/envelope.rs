//! Homogeneous polynomials, the dual hypersurface φ(Z) of degree mt through
//! every tangent hyperplane of an arc, completion of arcs from its linear
//! factors, and the planar (t,t)-tensor check.
//!
//! Dual coordinates follow the substitution Z_j = det_j(X₁,…,X_{k−1}), the
//! unsigned maximal minor with column j deleted. Expanding along a last row u,
//! det(X₁,…,X_{k−1},u) = Σ_j (−1)^{k+j} u_j Z_j (1-based j). So the point u
//! corresponds to the linear form L_u(Z) with those coefficients, and a
//! hyperplane with coefficients α has Z_j = (−1)^{k+j} α_j.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::arc::{is_arc, Arc};
use crate::error::{Error, Result};
use crate::geometry::{normalize, LinearForm, Space};
use crate::gf::{Elem, Field};
use crate::linalg::{det_rows, rank_of, Matrix};
use crate::tangent::{build_scaled_system, tangent_forms, TangentSystem};

/// Sparse homogeneous polynomial. Keys are exponent tuples; since every
/// monomial has the same degree, key order is graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomPoly {
    field: Field,
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, Elem>,
}

impl HomPoly {
    pub fn zero(field: &Field, nvars: usize, degree: u32) -> HomPoly {
        HomPoly { field: field.clone(), nvars, degree, terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, nvars: usize, c: Elem) -> HomPoly {
        HomPoly::monomial(field, vec![0; nvars], c)
    }

    pub fn monomial(field: &Field, exp: Vec<u32>, c: Elem) -> HomPoly {
        let mut p = HomPoly::zero(field, exp.len(), exp.iter().sum());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> HomPoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        HomPoly::monomial(field, e, field.one())
    }

    /// Σ c_i Z_i.
    pub fn linear(field: &Field, coeffs: &[Elem]) -> HomPoly {
        let n = coeffs.len();
        let mut p = HomPoly::zero(field, n, 1);
        for (i, &c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                p.terms.insert(e, c);
            }
        }
        p
    }

    /// Builds a polynomial from (exponent, coefficient) pairs, merging repeats.
    pub fn from_terms(field: &Field, nvars: usize, degree: u32, terms: impl IntoIterator<Item = (Vec<u32>, Elem)>) -> Result<HomPoly> {
        let mut p = HomPoly::zero(field, nvars, degree);
        for (e, c) in terms {
            if e.len() != nvars || e.iter().sum::<u32>() != degree {
                return Err(Error::Dimension(format!("monomial {e:?} is not of degree {degree} in {nvars} variables")));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Elem) {
        let f = &self.field;
        let entry = self.terms.entry(e).or_insert_with(|| f.zero());
        *entry = f.add(*entry, c);
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &[u32]) -> Elem {
        self.terms.get(exp).copied().unwrap_or_else(|| self.field.zero())
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Elem)> {
        self.terms.iter()
    }

    fn compatible(&self, other: &HomPoly) -> Result<()> {
        if self.nvars != other.nvars || self.field != other.field {
            return Err(Error::Dimension(format!("{} vs {} variables", self.nvars, other.nvars)));
        }
        Ok(())
    }

    pub fn add(&self, other: &HomPoly) -> Result<HomPoly> {
        self.compatible(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::Dimension(format!("degrees {} and {} differ", self.degree, other.degree)));
        }
        let mut out = if self.is_zero() { other.clone() } else { self.clone() };
        let src = if self.is_zero() { &HomPoly::zero(&self.field, self.nvars, 0) } else { other };
        for (e, &c) in &src.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: Elem) -> HomPoly {
        let f = &self.field;
        let mut out = HomPoly::zero(f, self.nvars, self.degree);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(e, &v)| (e.clone(), f.mul(v, c))).collect();
        }
        out
    }

    pub fn sub(&self, other: &HomPoly) -> Result<HomPoly> {
        self.add(&other.scale(self.field.neg(self.field.one())))
    }

    pub fn mul(&self, other: &HomPoly) -> Result<HomPoly> {
        self.compatible(other)?;
        let f = &self.field;
        let mut out = HomPoly::zero(f, self.nvars, self.degree + other.degree);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> HomPoly {
        let mut acc = HomPoly::constant(&self.field, self.nvars, self.field.one());
        for _ in 0..n {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    pub fn eval(&self, x: &[Elem]) -> Result<Elem> {
        if x.len() != self.nvars {
            return Err(Error::Dimension(format!("point has {} coordinates, expected {}", x.len(), self.nvars)));
        }
        let f = &self.field;
        Ok(f.sum(self.terms.iter().map(|(e, &c)| {
            f.mul(c, f.product(e.iter().zip(x).map(|(&k, &xi)| f.pow(xi, k as u64))))
        })))
    }

    fn leading(&self) -> Option<(&Vec<u32>, &Elem)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient self / d, by division on lex-leading terms.
    pub fn divide_exact(&self, d: &HomPoly) -> Result<HomPoly> {
        self.compatible(d)?;
        let f = &self.field;
        let (ld, &cd) = d.leading().ok_or(Error::InexactDivision)?;
        if d.degree > self.degree && !self.is_zero() {
            return Err(Error::InexactDivision);
        }
        let mut rem = self.clone();
        let mut quot = HomPoly::zero(f, self.nvars, self.degree.saturating_sub(d.degree));
        while let Some((lr, &cr)) = rem.leading() {
            if lr.iter().zip(ld).any(|(a, b)| a < b) {
                return Err(Error::InexactDivision);
            }
            let e: Vec<u32> = lr.iter().zip(ld).map(|(a, b)| a - b).collect();
            let c = f.div(cr, cd);
            let term = HomPoly::monomial(f, e.clone(), c);
            rem = rem.sub(&term.mul(d)?)?;
            quot.add_term(e, c);
        }
        Ok(quot)
    }

    /// Scales so the least monomial in graded-lex order has coefficient 1.
    pub fn normalized(&self) -> HomPoly {
        match self.terms.values().next() {
            Some(&c) => self.scale(self.field.inv(c)),
            None => self.clone(),
        }
    }

    /// Substitutes a fixed vector for the variables `range`, giving a
    /// polynomial in the remaining variables.
    pub fn substitute(&self, start: usize, values: &[Elem]) -> Result<HomPoly> {
        let end = start + values.len();
        if end > self.nvars {
            return Err(Error::Dimension("substitution out of range".into()));
        }
        let f = &self.field;
        let rest = self.nvars - values.len();
        let mut out: Option<HomPoly> = None;
        for (e, &c) in &self.terms {
            let v = f.product(e[start..end].iter().zip(values).map(|(&k, &x)| f.pow(x, k as u64)));
            let mut ne = e[..start].to_vec();
            ne.extend_from_slice(&e[end..]);
            let term = HomPoly::monomial(f, ne, f.mul(c, v));
            out = Some(match out {
                None => term,
                Some(p) => p.add(&term)?,
            });
        }
        Ok(out.unwrap_or_else(|| HomPoly::zero(f, rest, 0)))
    }

    /// Coefficients on `basis` (a list of monomials), erroring if a term is missing.
    pub fn coefficient_vector(&self, basis: &[Vec<u32>]) -> Vec<Elem> {
        basis.iter().map(|e| self.coeff(e)).collect()
    }

    pub fn to_data(&self) -> PolyData {
        PolyData {
            field: self.field.clone(),
            nvars: self.nvars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(e, &c)| TermData { exp: e.clone(), coef: self.field.coeffs(c) })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_data()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<HomPoly> {
        let d: PolyData = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        d.try_into()
    }
}

/// Serialized polynomial; terms in descending graded-lex order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyData {
    pub field: Field,
    pub nvars: usize,
    pub degree: u32,
    pub terms: Vec<TermData>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermData {
    pub exp: Vec<u32>,
    pub coef: Vec<u32>,
}

impl TryFrom<PolyData> for HomPoly {
    type Error = Error;

    fn try_from(d: PolyData) -> Result<HomPoly> {
        let terms = d
            .terms
            .iter()
            .map(|t| Ok((t.exp.clone(), d.field.from_coeffs(&t.coef)?)))
            .collect::<Result<Vec<_>>>()?;
        HomPoly::from_terms(&d.field, d.nvars, d.degree, terms)
    }
}

/// Exponent tuples of degree `degree` in `nvars` variables, ascending.
pub fn monomials(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == nvars {
            prefix.push(degree);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for d in 0..=degree {
            prefix.push(d);
            rec(nvars, degree - d, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(nvars, degree, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// The unsigned maximal minors det_j(X₁,…,X_{k−1}) of numeric rows.
pub fn minors(f: &Field, rows: &[&[Elem]]) -> Vec<Elem> {
    let k = rows.len() + 1;
    (0..k)
        .map(|j| {
            let sub: Vec<Vec<Elem>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            det_rows(f, &sub)
        })
        .collect()
}

/// φ(det₁,…,det_k) as a polynomial in the k(k−1) variables X_{i,c}, indexed
/// i·k + c (row i, coordinate c).
pub fn detj_substitute(phi: &HomPoly) -> Result<HomPoly> {
    let f = phi.field();
    let k = phi.nvars();
    if k < 2 {
        return Err(Error::Dimension("need at least 2 dual variables".into()));
    }
    let nv = k * (k - 1);
    let minor_polys: Vec<HomPoly> = (0..k)
        .map(|j| {
            let cols: Vec<usize> = (0..k).filter(|&c| c != j).collect();
            let mut acc = HomPoly::zero(f, nv, (k - 1) as u32);
            for perm in (0..k - 1).permutations(k - 1) {
                let par = crate::tangent::parity(&perm);
                let mut e = vec![0u32; nv];
                for (i, &p) in perm.iter().enumerate() {
                    e[i * k + cols[p]] += 1;
                }
                let c = if par == 1 { f.neg(f.one()) } else { f.one() };
                acc = acc.add(&HomPoly::monomial(f, e, c)).expect("same degree");
            }
            acc
        })
        .collect();
    let mut out = HomPoly::zero(f, nv, phi.degree() * (k as u32 - 1));
    for (e, &c) in phi.terms() {
        let mut term = HomPoly::constant(f, nv, c);
        for (j, &ej) in e.iter().enumerate() {
            term = term.mul(&minor_polys[j].pow(ej))?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

/// L_u(Z) = Σ_j (−1)^{k+j} u_j Z_j: vanishes at the dual coordinates of
/// every hyperplane through u.
pub fn point_form(f: &Field, u: &[Elem]) -> HomPoly {
    let k = u.len();
    let coeffs: Vec<Elem> = u
        .iter()
        .enumerate()
        .map(|(j, &x)| if (k + j + 1) % 2 == 1 { f.neg(x) } else { x })
        .collect();
    HomPoly::linear(f, &coeffs)
}

/// Inverse of [`point_form`]: the point whose form has these coefficients.
pub fn form_point(f: &Field, coeffs: &[Elem]) -> Vec<Elem> {
    let k = coeffs.len();
    let v: Vec<Elem> = coeffs
        .iter()
        .enumerate()
        .map(|(j, &x)| if (k + j + 1) % 2 == 1 { f.neg(x) } else { x })
        .collect();
    normalize(f, &v).unwrap_or(v)
}

/// Dual coordinates Z of a hyperplane with coefficients α.
pub fn hyperplane_dual(f: &Field, alpha: &[Elem]) -> Vec<Elem> {
    form_point(f, alpha)
}

/// 1 for q even, 2 for q odd.
pub fn envelope_multiplicity(f: &Field) -> u32 {
    if f.p() == 2 {
        1
    } else {
        2
    }
}

#[derive(Clone, Debug)]
pub struct EnvelopeResult {
    pub phi: HomPoly,
    pub m: u32,
    pub t: usize,
    /// Indices of the points used in the interpolation formula.
    pub subset: Vec<usize>,
    /// Number of (S, x) pairs for which G(x, S) = f_S(x)^m was checked.
    pub checked: usize,
}

/// Builds φ from the first mt + k − 1 points as
/// Σ_T g(T)^m Π_{u∈E∖T} L_u(Z)/det(T,u), normalizes it, and checks
/// G(x, S) = f_S(x)^m for every (k−2)-subset S and point x of the arc.
pub fn sbbt_envelope(a: &Arc) -> Result<EnvelopeResult> {
    let sys = build_scaled_system(a)?;
    sbbt_envelope_from(&sys)
}

pub fn sbbt_envelope_from(sys: &TangentSystem) -> Result<EnvelopeResult> {
    let a = sys.arc();
    let f = a.field();
    let k = a.k();
    let t = sys.t();
    let m = envelope_multiplicity(f);
    let need = m as usize * t + k - 1;
    if a.len() < need {
        return Err(Error::Precondition(format!("|A| = {} < mt + k − 1 = {need}", a.len())));
    }
    let e: Vec<usize> = (0..need).collect();
    let mut phi = HomPoly::zero(f, k, m * t as u32);
    for tset in e.iter().copied().combinations(k - 1) {
        let g = f.pow(sys.g_value(&tset)?, m as u64);
        let mut term = HomPoly::constant(f, k, g);
        for &u in e.iter().filter(|u| !tset.contains(u)) {
            let mut rows: Vec<&[Elem]> = tset.iter().map(|&i| a.point(i)).collect();
            rows.push(a.point(u));
            let d = det_rows(f, &rows);
            term = term.mul(&point_form(f, a.point(u)))?.scale(f.inv(d));
        }
        phi = phi.add(&term)?;
    }
    if phi.is_zero() {
        return Err(Error::Verification("φ vanished identically".into()));
    }
    let mut checked = 0;
    for s in (0..a.len()).combinations(k - 2) {
        for x in 0..a.len() {
            let mut rows: Vec<&[Elem]> = vec![a.point(x)];
            rows.extend(s.iter().map(|&i| a.point(i)));
            let z = minors(f, &rows);
            let lhs = phi.eval(&z)?;
            let rhs = f.pow(sys.eval_at(&s, x)?, m as u64);
            if lhs != rhs {
                return Err(Error::Verification(format!("G(x, S) ≠ f_S(x)^m at S = {s:?}, x = {x}")));
            }
            checked += 1;
        }
    }
    Ok(EnvelopeResult { phi: phi.normalized(), m, t, subset: e, checked })
}

/// Dual coordinates of every hyperplane meeting the arc in exactly k − 2
/// points, normalized and deduplicated.
pub fn tangent_dual_points(a: &Arc) -> Result<Vec<Vec<Elem>>> {
    let f = a.field();
    let mut out = std::collections::BTreeSet::new();
    for s in (0..a.len()).combinations(a.k() - 2) {
        for h in tangent_forms(a, &s)? {
            out.insert(hyperplane_dual(f, h.coeffs()));
        }
    }
    Ok(out.into_iter().collect())
}

/// Dimension of the space of degree-`degree` forms vanishing on `pts`.
pub fn vanishing_dimension(f: &Field, pts: &[Vec<Elem>], degree: u32) -> usize {
    let k = pts.first().map_or(0, |p| p.len());
    let mons = monomials(k, degree);
    let rows: Vec<Vec<Elem>> = pts.iter().map(|p| eval_monomials(f, &mons, p)).collect();
    mons.len() - rank_of(f, &rows)
}

fn eval_monomials(f: &Field, mons: &[Vec<u32>], x: &[Elem]) -> Vec<Elem> {
    mons.iter()
        .map(|e| f.product(e.iter().zip(x).map(|(&k, &xi)| f.pow(xi, k as u64))))
        .collect()
}

/// Uniqueness data for an envelope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Uniqueness {
    /// Dimension of degree-mt forms vanishing on every tangent-dual point.
    pub plain: usize,
    /// Same, additionally requiring a zero of multiplicity m at each
    /// tangent-dual point along the dual line of its (k−2)-subset.
    pub with_multiplicity: usize,
    /// Whether φ satisfies all of these conditions.
    pub phi_satisfies: bool,
}

/// Dimension of the degree-mt forms through the tangent-dual points, with
/// and without the multiplicity-m condition along each dual line ⟨S⟩^⊥.
pub fn envelope_uniqueness(a: &Arc, env: &EnvelopeResult) -> Result<Uniqueness> {
    let f = a.field();
    let k = a.k();
    let pts = tangent_dual_points(a)?;
    let degree = env.phi.degree();
    let mons = monomials(k, degree);
    let plain = vanishing_dimension(f, &pts, degree);
    let mut rows: Vec<Vec<Elem>> = pts.iter().map(|p| eval_monomials(f, &mons, p)).collect();
    if env.m > 1 {
        for s in (0..a.len()).combinations(k - 2) {
            let through: Vec<&[Elem]> = s.iter().map(|&i| a.point(i)).collect();
            let pencil = crate::geometry::hyperplanes_through(f, k, &through)?;
            for h in tangent_forms(a, &s)? {
                let z = hyperplane_dual(f, h.coeffs());
                let other = pencil.iter().find(|g| g != &&h).expect("q + 1 ≥ 2 hyperplanes");
                let w = hyperplane_dual(f, other.coeffs());
                rows.push(directional_row(f, &mons, &z, &w));
            }
        }
    }
    let with_multiplicity = mons.len() - rank_of(f, &rows);
    let coeffs = env.phi.coefficient_vector(&mons);
    let phi_satisfies = rows.iter().all(|r| crate::linalg::dot(f, r, &coeffs).is_zero());
    Ok(Uniqueness { plain, with_multiplicity, phi_satisfies })
}

/// Row r with r·coeffs = Σ_j w_j ∂_j φ(z).
fn directional_row(f: &Field, mons: &[Vec<u32>], z: &[Elem], w: &[Elem]) -> Vec<Elem> {
    mons.iter()
        .map(|e| {
            f.sum((0..e.len()).filter(|&j| e[j] > 0).map(|j| {
                let mut d = e.clone();
                d[j] -= 1;
                let mono = f.product(d.iter().zip(z).map(|(&k, &x)| f.pow(x, k as u64)));
                f.mul(f.mul(f.from_int(e[j] as i64), w[j]), mono)
            }))
        })
        .collect()
}

/// Number of candidate points [`linear_factors`] may test.
pub const FACTOR_GUARD: usize = 1 << 16;

/// Projective linear factors of φ with multiplicities, each found by
/// repeated exact division. Candidates are all points of the dual space.
pub fn linear_factors(phi: &HomPoly) -> Result<Vec<(LinearForm, u32)>> {
    let f = phi.field();
    let k = phi.nvars();
    let space = Space::new(f, k)?;
    if !(k <= 4 || f.q() <= 16) || space.num_points() > FACTOR_GUARD {
        return Err(Error::GuardExceeded(format!("{} candidate factors", space.num_points())));
    }
    let mut out = Vec::new();
    for c in space.points() {
        let l = HomPoly::linear(f, &c);
        let mut rest = phi.clone();
        let mut mult = 0;
        while rest.degree() >= 1 {
            match rest.divide_exact(&l) {
                Ok(qt) => {
                    rest = qt;
                    mult += 1;
                }
                Err(_) => break,
            }
        }
        if mult > 0 {
            out.push((LinearForm::new(f, &c)?, mult));
        }
    }
    Ok(out)
}

/// Points x whose form L_x divides φ with multiplicity at least m.
pub fn envelope_extension_points(env: &EnvelopeResult) -> Result<Vec<Vec<Elem>>> {
    let f = env.phi.field();
    let mut pts: Vec<Vec<Elem>> = linear_factors(&env.phi)?
        .into_iter()
        .filter(|(_, mult)| *mult >= env.m)
        .map(|(l, _)| form_point(f, l.coeffs()))
        .collect();
    pts.sort();
    Ok(pts)
}

/// Appends every point read off φ's linear factors that extends the arc,
/// then checks the enlarged set is still an arc.
pub fn complete_via_envelope(a: &Arc) -> Result<Arc> {
    let env = sbbt_envelope(a)?;
    let f = a.field();
    let mut extra = Vec::new();
    for x in envelope_extension_points(&env)? {
        if a.contains_point(&x) {
            continue;
        }
        let mut pts = a.points().to_vec();
        pts.push(x.clone());
        if is_arc(f, a.k(), &pts)?.is_arc {
            extra.push(x);
        }
    }
    let label = format!("completed via envelope (+{})", extra.len());
    let done = a.extended(&extra).map_err(|e| Error::Verification(format!("completion is not an arc: {e}")))?;
    Ok(done.with_construction(label))
}

/// Degree-r ternary forms vanishing on a planar point set, plus an r-socle.
#[derive(Clone, Debug)]
pub struct VanishingForms {
    pub basis: Vec<HomPoly>,
    /// Indices of points whose evaluation columns form a basis of the column space.
    pub socle: Vec<usize>,
}

pub fn vanishing_forms(f: &Field, pts: &[Vec<Elem>], r: u32) -> Result<VanishingForms> {
    if pts.iter().any(|p| p.len() != 3) {
        return Err(Error::Dimension("vanishing forms are planar (k = 3)".into()));
    }
    let mons = monomials(3, r);
    let rows: Vec<Vec<Elem>> = pts.iter().map(|p| eval_monomials(f, &mons, p)).collect();
    let m = Matrix::from_rows(f, &rows, mons.len())?;
    let basis = m
        .nullspace()
        .into_iter()
        .map(|v| HomPoly::from_terms(f, 3, r, mons.iter().cloned().zip(v)).expect("degree r"))
        .collect();
    // columns of M_r are the points: pivots of the transposed matrix
    let socle = m.transpose().echelon().pivots;
    Ok(VanishingForms { basis, socle })
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorReport {
    /// F(X,a) ≡ λ_a f_a(X) (mod Ψ[X]) with λ_a ≠ 0, for every a.
    pub proportional: bool,
    /// Symmetric (t odd) or alternating (t even) modulo (Ψ[X], Ψ[Y]).
    pub symmetry: bool,
    pub dim_psi: usize,
    pub first_failure: Option<String>,
}

impl TensorReport {
    pub fn holds(&self) -> bool {
        self.proportional && self.symmetry
    }
}

/// Checks a (t,t)-form F(X₁,X₂,X₃,Y₁,Y₂,Y₃) against a planar arc.
///
/// Proportionality is tested in the coefficient space: F(X,a) must lie in
/// span(Ψ ∪ {f_a}) but not in span(Ψ). For the symmetry condition, the
/// (t,t)-forms modulo Ψ[X]·V_t[Y] + V_t[X]·Ψ[Y] embed in functions on A×A,
/// so it is tested by evaluation at all pairs of arc points.
pub fn verify_planar_tensor(a: &Arc, big_f: &HomPoly) -> Result<TensorReport> {
    let f = a.field();
    if a.k() != 3 {
        return Err(Error::Precondition("the tensor check is planar".into()));
    }
    let t = a.t();
    if t < 1 {
        return Err(Error::Precondition("t = 0".into()));
    }
    let t = t as u32;
    if big_f.nvars() != 6 {
        return Err(Error::Dimension("F must have 6 variables".into()));
    }
    if !big_f.is_zero() && (big_f.degree() != 2 * t || big_f.terms().any(|(e, _)| e[..3].iter().sum::<u32>() != t)) {
        return Err(Error::Dimension(format!("F is not of bidegree ({t},{t})")));
    }
    let sys = build_scaled_system(a)?;
    let psi = vanishing_forms(f, a.points(), t)?;
    let mons = monomials(3, t);
    let psi_rows: Vec<Vec<Elem>> = psi.basis.iter().map(|p| p.coefficient_vector(&mons)).collect();
    let psi_rank = rank_of(f, &psi_rows);
    let mut report = TensorReport { proportional: true, symmetry: true, dim_psi: psi.basis.len(), first_failure: None };
    for i in 0..a.len() {
        let fa = big_f.substitute(3, a.point(i))?;
        let fa_vec = if fa.is_zero() { vec![f.zero(); mons.len()] } else { fa.coefficient_vector(&mons) };
        let tp = sys.f_s(&[i])?;
        let mut fi = HomPoly::constant(f, 3, tp.scalar);
        for h in &tp.forms {
            fi = fi.mul(&HomPoly::linear(f, h.coeffs()))?;
        }
        let mut with_fi = psi_rows.clone();
        with_fi.push(fi.coefficient_vector(&mons));
        let r_fi = rank_of(f, &with_fi);
        with_fi.push(fa_vec.clone());
        let in_span = rank_of(f, &with_fi) == r_fi;
        let mut psi_f = psi_rows.clone();
        psi_f.push(fa_vec);
        let outside_psi = rank_of(f, &psi_f) > psi_rank;
        if !(in_span && outside_psi) {
            report.proportional = false;
            report.first_failure.get_or_insert_with(|| format!("F(X, a_{i}) is not a nonzero multiple of f_a mod Ψ"));
        }
    }
    let eps_neg = t.is_multiple_of(2);
    'outer: for i in 0..a.len() {
        for j in 0..a.len() {
            let mut xy = a.point(i).to_vec();
            xy.extend_from_slice(a.point(j));
            let mut yx = a.point(j).to_vec();
            yx.extend_from_slice(a.point(i));
            let u = big_f.eval(&xy)?;
            let v = big_f.eval(&yx)?;
            let ok = if eps_neg { f.add(u, v).is_zero() && (i != j || u.is_zero()) } else { u == v };
            if !ok {
                report.symmetry = false;
                report.first_failure.get_or_insert_with(|| format!("symmetry fails at (a_{i}, a_{j})"));
                break 'outer;
            }
        }
    }
    Ok(report)
}

/// The symmetric bilinear form of a conic: F(X,Y) = ½(Q(X+Y) − Q(X) − Q(Y)),
/// scaled by 2 to avoid the division (q odd).
pub fn conic_polarization(f: &Field, c: &crate::geometry::Conic) -> HomPoly {
    // monomials X1², X1X2, X1X3, X2², X2X3, X3²
    let pairs = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    let two = f.from_int(2);
    let mut p = HomPoly::zero(f, 6, 2);
    for (&(i, j), &coef) in pairs.iter().zip(c.0.iter()) {
        let mut add = |a: usize, b: usize, v: Elem| {
            let mut e = vec![0u32; 6];
            e[a] += 1;
            e[3 + b] += 1;
            p = p.add(&HomPoly::monomial(f, e, v)).expect("degree 2");
        };
        if i == j {
            add(i, i, f.mul(two, coef));
        } else {
            add(i, j, coef);
            add(j, i, coef);
        }
    }
    p
}
