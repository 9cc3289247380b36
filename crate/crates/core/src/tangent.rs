//! Tangent hyperplanes of an arc, the scaled tangent system f_S, the
//! g-function and the identities they satisfy.
//!
//! Points are referred to by their index in the arc's stored order, and
//! subsets by sorted index vectors.

use std::collections::HashMap;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arc::Arc;
use crate::error::{Error, Result};
use crate::geometry::{hyperplanes_through, LinearForm};
use crate::gf::{Elem, Field};
use crate::linalg::det_rows;

/// Parity of the permutation sorting `seq` (number of inversions mod 2).
pub fn parity(seq: &[usize]) -> usize {
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    inv % 2
}

fn sign(f: &Field, exponent: usize, x: Elem) -> Elem {
    if exponent % 2 == 1 {
        f.neg(x)
    } else {
        x
    }
}

fn mask(s: &[usize]) -> u64 {
    s.iter().fold(0u64, |m, &i| m | (1u64 << i))
}

fn check_distinct(idx: &[usize], n: usize) -> Result<()> {
    if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
        return Err(Error::Precondition(format!("index {bad} is not a point of the arc")));
    }
    if idx.iter().duplicates().next().is_some() {
        return Err(Error::Precondition(format!("repeated indices in {idx:?}")));
    }
    Ok(())
}

/// The t hyperplanes through ⟨S⟩ that meet the arc in exactly S, as linear
/// forms in canonical order.
pub fn tangent_forms(a: &Arc, s: &[usize]) -> Result<Vec<LinearForm>> {
    let f = a.field();
    let k = a.k();
    if k < 3 {
        return Err(Error::Precondition("tangent hyperplanes need k ≥ 3".into()));
    }
    if s.len() != k - 2 {
        return Err(Error::Dimension(format!("S must have {} points, got {}", k - 2, s.len())));
    }
    check_distinct(s, a.len())?;
    let rows: Vec<&[Elem]> = s.iter().map(|&i| a.point(i)).collect();
    let forms: Vec<LinearForm> = hyperplanes_through(f, k, &rows)?
        .into_iter()
        .filter(|h| (0..a.len()).filter(|i| !s.contains(i)).all(|i| !h.contains(f, a.point(i))))
        .collect();
    let t = a.t();
    if forms.len() as i64 != t {
        return Err(Error::Verification(format!("found {} tangents through {s:?}, expected t = {t}", forms.len())));
    }
    Ok(forms)
}

/// f_S as a product of t linear forms times a scalar.
#[derive(Clone, Debug)]
pub struct TangentPoly {
    pub forms: Vec<LinearForm>,
    pub scalar: Elem,
}

impl TangentPoly {
    pub fn eval(&self, f: &Field, x: &[Elem]) -> Elem {
        f.mul(self.scalar, f.product(self.forms.iter().map(|h| h.eval(f, x))))
    }
}

/// All f_S of an arc, scaled consistently.
#[derive(Clone, Debug)]
pub struct TangentSystem {
    arc: Arc,
    t: usize,
    base: Elem,
    fs: HashMap<u64, TangentPoly>,
}

/// Scales every f_S with base normalization f_𝓔(a_{k−2}) = 1, where 𝓔 is the
/// first k − 2 points.
pub fn build_scaled_system(a: &Arc) -> Result<TangentSystem> {
    build_scaled_system_with(a, a.field().one())
}

/// As [`build_scaled_system`] with f_𝓔(a_{k−2}) = `base`.
pub fn build_scaled_system_with(a: &Arc, base: Elem) -> Result<TangentSystem> {
    let f = a.field();
    let k = a.k();
    let n = a.len();
    if k < 3 {
        return Err(Error::Precondition("tangent system needs k ≥ 3".into()));
    }
    if a.t() < 1 {
        return Err(Error::Precondition("t = 0: there are no tangents to scale".into()));
    }
    if n < k {
        return Err(Error::Precondition(format!("need at least k = {k} points")));
    }
    if n > 64 {
        return Err(Error::GuardExceeded(format!("{n} points; subsets are keyed by 64-bit masks")));
    }
    if base.is_zero() {
        return Err(Error::Precondition("base normalization must be nonzero".into()));
    }
    let t = a.t() as usize;
    let e_len = k - 2;
    let mut subsets: Vec<Vec<usize>> = (0..n).combinations(k - 2).collect();
    // stable sort keeps lexicographic order inside each layer
    subsets.sort_by_key(|s| s.iter().filter(|&&i| i >= e_len).count());
    let mut fs: HashMap<u64, TangentPoly> = HashMap::with_capacity(subsets.len());
    for s in subsets {
        let forms = tangent_forms(a, &s)?;
        let raw = TangentPoly { forms, scalar: f.one() };
        let outside = s.iter().filter(|&&i| i >= e_len).count();
        let (point, target) = if outside == 0 {
            (k - 2, base)
        } else {
            let e = (0..e_len).find(|i| !s.contains(i)).expect("S ≠ 𝓔");
            let last = *s.last().expect("k ≥ 3");
            let mut s2: Vec<usize> = s.iter().copied().filter(|&i| i != last).collect();
            s2.push(e);
            s2.sort_unstable();
            let rhs = fs[&mask(&s2)].eval(f, a.point(last));
            let par = s.iter().filter(|&&i| i > e).count();
            (e, sign(f, par * (t + 1), rhs))
        };
        let v = raw.eval(f, a.point(point));
        let scalar = f.div(target, v);
        fs.insert(mask(&s), TangentPoly { scalar, ..raw });
    }
    Ok(TangentSystem { arc: a.clone(), t, base, fs })
}

impl TangentSystem {
    pub fn arc(&self) -> &Arc {
        &self.arc
    }

    pub fn field(&self) -> &Field {
        self.arc.field()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn base_normalization(&self) -> Elem {
        self.base
    }

    /// The scaled f_S for an unordered (k−2)-subset S.
    pub fn f_s(&self, s: &[usize]) -> Result<&TangentPoly> {
        check_distinct(s, self.arc.len())?;
        if s.len() != self.arc.k() - 2 {
            return Err(Error::Dimension(format!("S must have {} points", self.arc.k() - 2)));
        }
        Ok(&self.fs[&mask(s)])
    }

    /// f_S(x) for a vector x.
    pub fn eval(&self, s: &[usize], x: &[Elem]) -> Result<Elem> {
        Ok(self.f_s(s)?.eval(self.field(), x))
    }

    /// f_S evaluated at arc point `x`.
    pub fn eval_at(&self, s: &[usize], x: usize) -> Result<Elem> {
        self.eval(s, self.arc.point(x))
    }

    /// g(S, a) = f_S(a) with f_S read as an ordered set:
    /// (−1)^{s(t+1)} f_{set(S)}(a), s the parity sorting S. This makes g
    /// change by (−1)^{t+1} under every transposition of C. Taking s as the
    /// parity sorting all of C instead would contradict that law for t even.
    pub fn g_value(&self, c: &[usize]) -> Result<Elem> {
        let k = self.arc.k();
        if c.len() != k - 1 {
            return Err(Error::Dimension(format!("C must have {} points", k - 1)));
        }
        check_distinct(c, self.arc.len())?;
        let (&last, init) = c.split_last().expect("k ≥ 3");
        let v = self.eval_at(init, last)?;
        Ok(sign(self.field(), parity(init) * (self.t + 1), v))
    }

    /// g on every sorted (k−1)-subset.
    pub fn g_function(&self) -> GFunction {
        let values = (0..self.arc.len())
            .combinations(self.arc.k() - 1)
            .map(|c| {
                let v = self.g_value(&c).expect("valid subset");
                (c, v)
            })
            .collect();
        GFunction { values }
    }

    /// f_{D∪x}(y)·f_{D∪y}(z)·f_{D∪z}(x) − (−1)^{t+1} f_{D∪y}(x)·f_{D∪z}(y)·f_{D∪x}(z) = 0.
    /// Independent of how the f_S are scaled.
    pub fn check_lemma_of_tangents(&self, d: &[usize], x: usize, y: usize, z: usize) -> Result<bool> {
        let f = self.field();
        let mut all = d.to_vec();
        all.extend([x, y, z]);
        check_distinct(&all, self.arc.len())?;
        if d.len() != self.arc.k() - 3 {
            return Err(Error::Dimension(format!("D must have {} points", self.arc.k() - 3)));
        }
        let with = |p: usize| {
            let mut s = d.to_vec();
            s.push(p);
            s.sort_unstable();
            s
        };
        let (dx, dy, dz) = (with(x), with(y), with(z));
        let lhs = f.product([self.eval_at(&dx, y)?, self.eval_at(&dy, z)?, self.eval_at(&dz, x)?]);
        let rhs = f.product([self.eval_at(&dy, x)?, self.eval_at(&dz, y)?, self.eval_at(&dx, z)?]);
        Ok(lhs == sign(f, self.t + 1, rhs))
    }

    /// f_{D∪x}(y) = (−1)^{s(σ)(t+1)} f_{D∪y}(x), σ ordering (D∪x, y) as (D∪y, x).
    pub fn check_scaled_law(&self, d: &[usize], x: usize, y: usize) -> Result<bool> {
        let f = self.field();
        let mut all = d.to_vec();
        all.extend([x, y]);
        check_distinct(&all, self.arc.len())?;
        if d.len() != self.arc.k() - 3 {
            return Err(Error::Dimension(format!("D must have {} points", self.arc.k() - 3)));
        }
        let seq = |p: usize, last: usize| {
            let mut s = d.to_vec();
            s.push(p);
            s.sort_unstable();
            s.push(last);
            s
        };
        let sx = seq(x, y);
        let sy = seq(y, x);
        let s_sigma = parity(&sx) + parity(&sy);
        let lhs = self.eval_at(&sx[..sx.len() - 1], y)?;
        let rhs = self.eval_at(&sy[..sy.len() - 1], x)?;
        Ok(lhs == sign(f, s_sigma * (self.t + 1), rhs))
    }

    /// Lemma-of-tangents sum over (k−1)-subsets C of E containing S.
    pub fn sum_equation(&self, e: &[usize], s: &[usize]) -> Result<Elem> {
        self.g_function().sum_equation(&self.arc, e, s)
    }

    /// Sum over (k−1)-subsets C ⊆ Δ of g(C)·Π_{u∈E∖C} det(u,C)⁻¹.
    pub fn delta_equation(&self, e: &[usize], delta: &[usize]) -> Result<Elem> {
        self.g_function().delta_equation(&self.arc, e, delta)
    }
}

/// Values of g on sorted (k−1)-subsets.
#[derive(Clone, Debug)]
pub struct GFunction {
    pub values: HashMap<Vec<usize>, Elem>,
}

impl GFunction {
    pub fn get(&self, c: &[usize]) -> Option<Elem> {
        self.values.get(c).copied()
    }

    pub fn set(&mut self, c: Vec<usize>, v: Elem) {
        self.values.insert(c, v);
    }

    /// g(C)·Π_{u∈E∖C} det(u,C)⁻¹ for sorted C.
    pub fn term(&self, a: &Arc, e: &[usize], c: &[usize]) -> Result<Elem> {
        let f = a.field();
        let g = self
            .get(c)
            .ok_or_else(|| Error::Precondition(format!("g undefined on {c:?}")))?;
        let mut acc = g;
        for &u in e.iter().filter(|u| !c.contains(u)) {
            let mut rows: Vec<&[Elem]> = vec![a.point(u)];
            rows.extend(c.iter().map(|&i| a.point(i)));
            acc = f.div(acc, det_rows(f, &rows));
        }
        Ok(acc)
    }

    fn check_e(a: &Arc, e: &[usize]) -> Result<usize> {
        check_distinct(e, a.len())?;
        let t = a.t();
        if t < 0 || e.len() as i64 != a.k() as i64 + t {
            return Err(Error::Dimension(format!("E must have k + t = {} points", a.k() as i64 + t)));
        }
        Ok(t as usize)
    }

    fn sorted(v: &[usize]) -> Vec<usize> {
        let mut v = v.to_vec();
        v.sort_unstable();
        v
    }

    pub fn sum_equation(&self, a: &Arc, e: &[usize], s: &[usize]) -> Result<Elem> {
        let f = a.field();
        let k = a.k();
        GFunction::check_e(a, e)?;
        if s.len() != k - 2 || !s.iter().all(|i| e.contains(i)) {
            return Err(Error::Dimension(format!("S must be a {}-subset of E", k - 2)));
        }
        let mut acc = f.zero();
        for &x in e.iter().filter(|x| !s.contains(x)) {
            let mut c = s.to_vec();
            c.push(x);
            acc = f.add(acc, self.term(a, e, &GFunction::sorted(&c))?);
        }
        Ok(acc)
    }

    pub fn delta_equation(&self, a: &Arc, e: &[usize], delta: &[usize]) -> Result<Elem> {
        let f = a.field();
        let t = GFunction::check_e(a, e)?;
        if delta.len() != t + 2 || !delta.iter().all(|i| e.contains(i)) {
            return Err(Error::Dimension(format!("Δ must be a {}-subset of E", t + 2)));
        }
        let mut acc = f.zero();
        for c in GFunction::sorted(delta).into_iter().combinations(a.k() - 1) {
            acc = f.add(acc, self.term(a, e, &c)?);
        }
        Ok(acc)
    }

    /// Σ_S λ_S·eqn(S) over all (k−2)-subsets S of E, λ_S = (−1)^m (k−m−2)! m!
    /// with m = |S ∩ Δ|. Equals (−1)^{k−2}(k−1)! times [`Self::delta_equation`]
    /// whatever the values of g; requires k ≤ p.
    pub fn weighted_delta_combination(&self, a: &Arc, e: &[usize], delta: &[usize]) -> Result<Elem> {
        let f = a.field();
        let k = a.k();
        if k as u32 > f.p() {
            return Err(Error::Precondition(format!("k = {k} > p = {}", f.p())));
        }
        GFunction::check_e(a, e)?;
        let fact = |n: usize| f.product((1..=n).map(|i| f.from_int(i as i64)));
        let mut acc = f.zero();
        for s in GFunction::sorted(e).into_iter().combinations(k - 2) {
            let m = s.iter().filter(|i| delta.contains(i)).count();
            let lambda = sign(f, m, f.mul(fact(k - m - 2), fact(m)));
            acc = f.add(acc, f.mul(lambda, self.sum_equation(a, e, &s)?));
        }
        Ok(acc)
    }
}

/// Identity family checked by [`sweep`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    /// Lemma of tangents over all (D, x, y, z).
    Lemma,
    /// Scaled pairwise law over all (D, x, y).
    Scaled,
    /// Sum equations over all (E, S).
    Sums,
    /// Δ-equations over all (E, Δ); requires k ≤ p.
    Deltas,
}

/// Which cases a sweep visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    Exhaustive,
    /// `count` cases drawn without replacement from a seeded generator.
    Random { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub check: Check,
    pub checked: usize,
    pub failed: usize,
    pub first_failure: Option<Vec<Vec<usize>>>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

fn sweep_cases(sys: &TangentSystem, check: Check) -> Result<Vec<Vec<Vec<usize>>>> {
    let a = &sys.arc;
    let (n, k, t) = (a.len(), a.k(), sys.t);
    let mut cases = Vec::new();
    match check {
        Check::Lemma | Check::Scaled => {
            let r = if check == Check::Lemma { 3 } else { 2 };
            for d in (0..n).combinations(k - 3) {
                let rest: Vec<usize> = (0..n).filter(|i| !d.contains(i)).collect();
                for xs in rest.into_iter().permutations(r) {
                    cases.push(vec![d.clone(), xs]);
                }
            }
        }
        Check::Sums | Check::Deltas => {
            if n < k + t {
                return Err(Error::Precondition(format!("need at least k + t = {} points", k + t)));
            }
            if check == Check::Deltas && k as u32 > a.field().p() {
                return Err(Error::Precondition(format!("k = {k} > p = {}", a.field().p())));
            }
            let r = if check == Check::Sums { k - 2 } else { t + 2 };
            for e in (0..n).combinations(k + t) {
                for s in e.iter().copied().combinations(r.min(k + t)) {
                    cases.push(vec![e.clone(), s]);
                }
            }
        }
    }
    Ok(cases)
}

/// Evaluates one identity family over all valid cases, or over a seeded
/// random sample of them.
pub fn sweep(sys: &TangentSystem, check: Check, sampling: Sampling) -> Result<SweepReport> {
    let mut cases = sweep_cases(sys, check)?;
    if let Sampling::Random { count, seed } = sampling {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        cases = cases.choose_multiple(&mut rng, count).cloned().collect();
    }
    let g = matches!(check, Check::Sums | Check::Deltas).then(|| sys.g_function());
    let zero = sys.field().zero();
    let results: Vec<bool> = cases
        .par_iter()
        .map(|c| -> Result<bool> {
            Ok(match check {
                Check::Lemma => sys.check_lemma_of_tangents(&c[0], c[1][0], c[1][1], c[1][2])?,
                Check::Scaled => sys.check_scaled_law(&c[0], c[1][0], c[1][1])?,
                Check::Sums => g.as_ref().expect("g").sum_equation(&sys.arc, &c[0], &c[1])? == zero,
                Check::Deltas => g.as_ref().expect("g").delta_equation(&sys.arc, &c[0], &c[1])? == zero,
            })
        })
        .collect::<Result<_>>()?;
    let failed = results.iter().filter(|ok| !**ok).count();
    let first_failure = results.iter().position(|ok| !ok).map(|i| cases[i].clone());
    Ok(SweepReport { check, checked: cases.len(), failed, first_failure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arc::{nrc, Arc};
    use crate::geometry::Space;

    fn twelve_arc() -> Arc {
        let f = Field::of_order(13).unwrap();
        let pts: Vec<Vec<Elem>> = [
            [3, 4, 1], [-3, 4, 1], [3, -4, 1], [-3, -4, 1],
            [4, 3, 1], [4, -3, 1], [-4, 3, 1], [-4, -3, 1],
            [1, 1, 1], [1, -1, 1], [-1, 1, 1], [-1, -1, 1],
        ]
        .iter()
        .map(|p| p.iter().map(|&c| f.from_int(c)).collect())
        .collect();
        Arc::new(&f, 3, pts).unwrap()
    }

    #[test]
    fn tangent_counts() {
        let f7 = Field::of_order(7).unwrap();
        let conic = nrc(3, &f7).unwrap();
        assert_eq!(tangent_forms(&conic, &[2]).unwrap().len(), 1);
        let c4 = nrc(4, &f7).unwrap();
        // oracle: filter the full list of planes of PG(3,7) through the pair
        let space = Space::new(&f7, 4).unwrap();
        for s in (0..8).combinations(2) {
            let forms = tangent_forms(&c4, &s).unwrap();
            let brute = space
                .points()
                .filter(|h| {
                    let on = |i: usize| crate::linalg::dot(&f7, h, c4.point(i)).is_zero();
                    (0..8).all(|i| on(i) == s.contains(&i))
                })
                .count();
            assert_eq!(forms.len(), 2);
            assert_eq!(brute, 2);
        }
        let f8 = Field::of_order(8).unwrap();
        let h = crate::arc::hyperoval(crate::arc::OPolynomial::Regular, &f8).unwrap();
        assert!(tangent_forms(&h, &[0]).unwrap().is_empty());
        assert!(build_scaled_system(&h).is_err());
    }

    #[test]
    fn base_normalization_holds() {
        let a = twelve_arc();
        let sys = build_scaled_system(&a).unwrap();
        assert_eq!(sys.eval_at(&[0], 1).unwrap(), a.field().one());
        for s in (0..12).combinations(1) {
            for x in 0..12 {
                assert_eq!(sys.eval_at(&s, x).unwrap().is_zero(), s.contains(&x));
            }
        }
    }

    #[test]
    fn scaled_law_exhaustive_on_twelve_arc() {
        let sys = build_scaled_system(&twelve_arc()).unwrap();
        for (x, y) in (0..12).tuple_combinations() {
            assert!(sys.check_scaled_law(&[], x, y).unwrap());
            assert!(sys.check_scaled_law(&[], y, x).unwrap());
        }
    }

    #[test]
    fn g_permutation_law() {
        let f = Field::of_order(7).unwrap();
        let a = nrc(4, &f).unwrap().without(7);
        // t = 3 here: g is symmetric
        let sys = build_scaled_system(&a).unwrap();
        assert_eq!(sys.t(), 3);
        for p in [2usize, 5, 6].iter().copied().permutations(3) {
            assert_eq!(sys.g_value(&p).unwrap(), sys.g_value(&[2, 5, 6]).unwrap());
        }
        let full = nrc(4, &f).unwrap();
        let sys2 = build_scaled_system(&full).unwrap();
        assert_eq!(sys2.t(), 2);
        let base = sys2.g_value(&[1, 3, 4]).unwrap();
        for p in [1usize, 3, 4].iter().copied().permutations(3) {
            let expect = if parity(&p) == 1 { f.neg(base) } else { base };
            assert_eq!(sys2.g_value(&p).unwrap(), expect);
        }
        assert!(sys2.g_value(&[1, 1, 4]).is_err());
    }

    #[test]
    fn lemma_is_independent_of_base() {
        let f = Field::of_order(7).unwrap();
        let a = nrc(4, &f).unwrap();
        let s1 = build_scaled_system(&a).unwrap();
        let s2 = build_scaled_system_with(&a, f.from_int(5)).unwrap();
        for d in 0..8 {
            for (x, y, z) in (0..8).filter(|&i| i != d).tuple_combinations() {
                let r1 = s1.check_lemma_of_tangents(&[d], x, y, z).unwrap();
                assert!(r1);
                assert_eq!(r1, s2.check_lemma_of_tangents(&[d], x, y, z).unwrap());
            }
        }
    }

    #[test]
    fn sum_equation_and_negative_control() {
        let f = Field::of_order(7).unwrap();
        let a = nrc(4, &f).unwrap();
        let sys = build_scaled_system(&a).unwrap();
        let e = [0, 1, 2, 4, 5, 7];
        for s in e.iter().copied().combinations(2) {
            assert!(sys.sum_equation(&e, &s).unwrap().is_zero());
        }
        let mut g = sys.g_function();
        g.set(vec![0, 1, 2], f.zero());
        assert!(!g.sum_equation(&a, &e, &[0, 1]).unwrap().is_zero());
    }

    #[test]
    fn weighted_combination_identity_holds_for_any_g() {
        let f = Field::of_order(7).unwrap();
        let a = nrc(4, &f).unwrap();
        let sys = build_scaled_system(&a).unwrap();
        let mut g = sys.g_function();
        // arbitrary values: the combinatorial identity does not use the lemma
        for (i, v) in g.values.values_mut().enumerate() {
            *v = f.from_int(i as i64 * 3 + 1);
        }
        let e = [0, 2, 3, 4, 6, 7];
        let delta = [0, 3, 4, 7];
        let direct = g.delta_equation(&a, &e, &delta).unwrap();
        let weighted = g.weighted_delta_combination(&a, &e, &delta).unwrap();
        // (−1)^{k−2}(k−1)! = 6
        assert_eq!(weighted, f.mul(f.from_int(6), direct));
        assert!(sys.delta_equation(&e, &delta).unwrap().is_zero());
    }

    #[test]
    fn parity_counts_inversions() {
        assert_eq!(parity(&[0, 1, 2]), 0);
        assert_eq!(parity(&[1, 0, 2]), 1);
        assert_eq!(parity(&[2, 0, 1]), 0);
        assert_eq!(parity(&[2, 1, 0]), 1);
    }

    #[test]
    fn sweeps_pass_on_nrc() {
        let f = Field::of_order(7).unwrap();
        let sys = build_scaled_system(&nrc(4, &f).unwrap()).unwrap();
        for check in [Check::Lemma, Check::Scaled, Check::Sums, Check::Deltas] {
            let r = sweep(&sys, check, Sampling::Exhaustive).unwrap();
            assert!(r.passed(), "{check:?}: {r:?}");
            assert!(r.checked > 0);
        }
        // 8 choices of D, 7·6·5 ordered triples
        assert_eq!(sweep(&sys, Check::Lemma, Sampling::Exhaustive).unwrap().checked, 8 * 210);
    }

    #[test]
    fn sampled_sweeps_are_reproducible() {
        let sys = build_scaled_system(&twelve_arc()).unwrap();
        let s = Sampling::Random { count: 50, seed: 7 };
        let a = sweep(&sys, Check::Lemma, s).unwrap();
        assert_eq!(a.checked, 50);
        assert_eq!(a, sweep(&sys, Check::Lemma, s).unwrap());
    }

    #[test]
    fn delta_sweep_needs_small_k() {
        let f = Field::of_order(5).unwrap();
        let sys = build_scaled_system(&nrc(6, &f).unwrap()).unwrap();
        assert!(matches!(sweep(&sys, Check::Deltas, Sampling::Exhaustive), Err(Error::Precondition(_))));
    }
}
