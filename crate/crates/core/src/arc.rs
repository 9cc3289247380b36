//! Arcs: ordered point sets with fixed vector representatives, the arc test,
//! the named constructions, duality and one-point extensions.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::geometry::{hyperplane_through, normalize, points_in_span, Space};
use crate::gf::{gcd, Elem, Field, QElem, QuadExt};
use crate::linalg::{det_rows, rank_of, Matrix};

/// An arc in PG(k−1, q). Point order and the raw vector representatives are
/// part of its identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    field: Field,
    k: usize,
    points: Vec<Vec<Elem>>,
    construction: Option<String>,
}

/// Result of [`is_arc`]: on failure, indices of a dependent subset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArcCheck {
    pub is_arc: bool,
    pub witness: Option<Vec<usize>>,
}

impl ArcCheck {
    fn ok() -> ArcCheck {
        ArcCheck { is_arc: true, witness: None }
    }

    fn fail(w: Vec<usize>) -> ArcCheck {
        ArcCheck { is_arc: false, witness: Some(w) }
    }
}

/// Up to this many points beyond k, [`is_arc`] checks every k-subset determinant.
const SUBSET_THRESHOLD: usize = 4;

/// Tests whether every k of the given vectors are linearly independent.
pub fn is_arc(f: &Field, k: usize, points: &[Vec<Elem>]) -> Result<ArcCheck> {
    if k == 0 {
        return Err(Error::Dimension("k must be positive".into()));
    }
    if let Some(bad) = points.iter().position(|p| p.len() != k) {
        return Err(Error::Dimension(format!("point {bad} does not have {k} coordinates")));
    }
    if let Some(z) = points.iter().position(|p| p.iter().all(|x| x.is_zero())) {
        return Ok(ArcCheck::fail(vec![z]));
    }
    let n = points.len();
    if n <= k {
        return Ok(if rank_of(f, points) == n {
            ArcCheck::ok()
        } else {
            ArcCheck::fail((0..n).collect())
        });
    }
    if n <= k + SUBSET_THRESHOLD {
        for sub in (0..n).combinations(k) {
            let rows: Vec<&[Elem]> = sub.iter().map(|&i| &points[i][..]).collect();
            if det_rows(f, &rows).is_zero() {
                return Ok(ArcCheck::fail(sub));
            }
        }
        return Ok(ArcCheck::ok());
    }
    // Every dependent k-subset is caught either at its first k − 1 elements
    // (if those are dependent) or by the hyperplane they span.
    for sub in (0..n).combinations(k - 1) {
        let rows: Vec<&[Elem]> = sub.iter().map(|&i| &points[i][..]).collect();
        let last = sub.last().copied().map_or(0, |l| l + 1);
        if k == 1 {
            continue;
        }
        let Ok(h) = hyperplane_through(f, &rows) else {
            let mut w = sub.clone();
            let extra = (0..n).find(|i| !sub.contains(i)).expect("n > k");
            w.push(extra);
            w.sort_unstable();
            return Ok(ArcCheck::fail(w));
        };
        if let Some(u) = (last..n).find(|&u| h.contains(f, &points[u])) {
            let mut w = sub;
            w.push(u);
            return Ok(ArcCheck::fail(w));
        }
    }
    Ok(ArcCheck::ok())
}

impl Arc {
    /// Validates the arc property and stores the vectors as given.
    pub fn new(field: &Field, k: usize, points: Vec<Vec<Elem>>) -> Result<Arc> {
        let check = is_arc(field, k, &points)?;
        if !check.is_arc {
            return Err(Error::Verification(format!(
                "not an arc: points {:?} are dependent",
                check.witness.unwrap_or_default()
            )));
        }
        Ok(Arc { field: field.clone(), k, points, construction: None })
    }

    pub fn with_construction(mut self, label: impl Into<String>) -> Arc {
        self.construction = Some(label.into());
        self
    }

    pub fn construction(&self) -> Option<&str> {
        self.construction.as_deref()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Elem>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[Elem] {
        &self.points[i]
    }

    /// Tangent deficiency t = q + k − 1 − |A|.
    pub fn t(&self) -> i64 {
        self.field.q() as i64 + self.k as i64 - 1 - self.points.len() as i64
    }

    /// Canonical representatives of the points.
    pub fn point_set(&self) -> BTreeSet<Vec<Elem>> {
        self.points.iter().map(|p| normalize(&self.field, p).expect("nonzero")).collect()
    }

    pub fn contains_point(&self, x: &[Elem]) -> bool {
        let Some(nx) = normalize(&self.field, x) else { return false };
        self.points.iter().any(|p| normalize(&self.field, p).as_ref() == Some(&nx))
    }

    /// Sub-arc on the given indices, in the given order.
    pub fn subset(&self, idx: &[usize]) -> Arc {
        Arc {
            field: self.field.clone(),
            k: self.k,
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
            construction: None,
        }
    }

    /// The arc with one point removed.
    pub fn without(&self, i: usize) -> Arc {
        let idx: Vec<usize> = (0..self.len()).filter(|&j| j != i).collect();
        self.subset(&idx)
    }

    /// Appends points after checking the result is still an arc.
    pub fn extended(&self, extra: &[Vec<Elem>]) -> Result<Arc> {
        let mut pts = self.points.clone();
        pts.extend_from_slice(extra);
        Arc::new(&self.field, self.k, pts)
    }

    pub fn to_data(&self) -> ArcData {
        ArcData {
            field: self.field.clone(),
            k: self.k,
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(|&x| self.field.coeffs(x)).collect())
                .collect(),
            construction: self.construction.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_data()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Arc> {
        let data: ArcData = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Arc::try_from(data)
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "{}-arc in PG({}, {})", self.len(), self.k - 1, self.field.q())?;
        for p in &self.points {
            let cs: Vec<String> = p.iter().map(|&x| self.field.show(x)).collect();
            writeln!(out, "  ({})", cs.join(", "))?;
        }
        Ok(())
    }
}

/// Serialized form: `{"field":{..},"k":3,"points":[[[c0,..],..],..]}`, each
/// coordinate given by its coefficient tuple. Need not be an arc.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArcData {
    pub field: Field,
    pub k: usize,
    pub points: Vec<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
}

impl ArcData {
    pub fn vectors(&self) -> Result<Vec<Vec<Elem>>> {
        self.points
            .iter()
            .map(|p| p.iter().map(|c| self.field.from_coeffs(c)).collect())
            .collect()
    }
}

impl TryFrom<ArcData> for Arc {
    type Error = Error;

    fn try_from(data: ArcData) -> Result<Arc> {
        let pts = data.vectors()?;
        let mut arc = Arc::new(&data.field, data.k, pts)?;
        arc.construction = data.construction;
        Ok(arc)
    }
}

/// The normal rational curve {(1, t, …, t^(k−1))} ∪ {(0, …, 0, 1)}, with t
/// in canonical field order.
pub fn nrc(k: usize, f: &Field) -> Result<Arc> {
    if k < 2 {
        return Err(Error::Precondition("a normal rational curve needs k ≥ 2".into()));
    }
    if (f.q() as usize) < k - 1 {
        return Err(Error::Precondition(format!("q = {} < k − 1 = {}", f.q(), k - 1)));
    }
    let mut pts: Vec<Vec<Elem>> =
        f.elements().map(|t| (0..k).map(|i| f.pow(t, i as u64)).collect()).collect();
    let mut inf = vec![f.zero(); k];
    inf[k - 1] = f.one();
    pts.push(inf);
    Ok(Arc::new(f, k, pts)?.with_construction(format!("nrc k={k}")))
}

/// The points of the unique normal rational curve through k + 2 points of
/// an arc, parametrised as in the classical construction: with p1..pk as
/// basis, p0 and p(k+1) the images of (1,0) and (0,1).
pub fn nrc_through(f: &Field, pts: &[Vec<Elem>]) -> Result<Vec<Vec<Elem>>> {
    let k = pts.first().map(|p| p.len()).unwrap_or(0);
    if k < 2 || pts.len() != k + 2 {
        return Err(Error::Dimension(format!("need k + 2 points, got {}", pts.len())));
    }
    if !is_arc(f, k, pts)?.is_arc {
        return Err(Error::Precondition("points do not form an arc".into()));
    }
    let basis = Matrix::from_rows(f, &pts[1..=k], k)?;
    let inv = basis.inverse()?;
    let u = inv.apply_row(&pts[0]);
    let v = inv.apply_row(&pts[k + 1]);
    let u_inv: Vec<Elem> = u.iter().map(|&x| f.inv(x)).collect();
    let v_inv: Vec<Elem> = v.iter().map(|&x| f.inv(x)).collect();
    let line = Space::new(f, 2)?;
    let mut out = Vec::new();
    for x in line.points() {
        let mut p = vec![f.zero(); k];
        for i in 0..k {
            let coeff = f.product(
                (0..k).filter(|&j| j != i).map(|j| f.sub(f.mul(u_inv[j], x[0]), f.mul(v_inv[j], x[1]))),
            );
            for (pc, &bc) in p.iter_mut().zip(&pts[i + 1]) {
                *pc = f.add(*pc, f.mul(coeff, bc));
            }
        }
        out.push(normalize(f, &p).expect("curve points are nonzero"));
    }
    Ok(out)
}

/// Known hyperoval families of PG(2, q), q even. Parameters not listed are
/// chosen as the least valid field elements in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OPolynomial {
    Regular,
    Translation { i: u32 },
    Segre,
    Glynn1,
    Glynn2,
    Payne,
    Cherowitzo,
    Subiaco1,
    Subiaco2,
    Subiaco3,
    Adelaide,
}

impl OPolynomial {
    pub fn parse(name: &str, i: Option<u32>) -> Result<OPolynomial> {
        Ok(match name {
            "regular" => OPolynomial::Regular,
            "translation" => OPolynomial::Translation { i: i.unwrap_or(1) },
            "segre" => OPolynomial::Segre,
            "glynn1" => OPolynomial::Glynn1,
            "glynn2" => OPolynomial::Glynn2,
            "payne" => OPolynomial::Payne,
            "cherowitzo" => OPolynomial::Cherowitzo,
            "subiaco1" => OPolynomial::Subiaco1,
            "subiaco2" => OPolynomial::Subiaco2,
            "subiaco3" => OPolynomial::Subiaco3,
            "adelaide" => OPolynomial::Adelaide,
            other => return Err(Error::Parse(format!("unknown hyperoval family {other}"))),
        })
    }

    pub fn name(&self) -> String {
        match self {
            OPolynomial::Regular => "regular".into(),
            OPolynomial::Translation { i } => format!("translation i={i}"),
            OPolynomial::Segre => "segre".into(),
            OPolynomial::Glynn1 => "glynn1".into(),
            OPolynomial::Glynn2 => "glynn2".into(),
            OPolynomial::Payne => "payne".into(),
            OPolynomial::Cherowitzo => "cherowitzo".into(),
            OPolynomial::Subiaco1 => "subiaco1".into(),
            OPolynomial::Subiaco2 => "subiaco2".into(),
            OPolynomial::Subiaco3 => "subiaco3".into(),
            OPolynomial::Adelaide => "adelaide".into(),
        }
    }

    /// Whether the family's conditions on q = 2^h hold.
    pub fn applies_to(&self, f: &Field) -> bool {
        let h = f.h();
        f.p() == 2
            && match self {
                OPolynomial::Regular => true,
                OPolynomial::Translation { i } => *i >= 1 && gcd(h as u64, *i as u64) == 1,
                OPolynomial::Segre
                | OPolynomial::Glynn1
                | OPolynomial::Glynn2
                | OPolynomial::Payne
                | OPolynomial::Cherowitzo => h % 2 == 1,
                OPolynomial::Subiaco1 | OPolynomial::Subiaco2 => h % 4 == 2,
                OPolynomial::Subiaco3 => h % 4 != 2,
                OPolynomial::Adelaide => h.is_multiple_of(2) && h >= 4,
            }
    }

    /// Values f(t) for every t in canonical order, plus a description of the
    /// parameters used. Candidate parameters that do not give a hyperoval are
    /// skipped in favour of the next valid one.
    pub fn evaluate(&self, f: &Field) -> Result<(Vec<Elem>, String)> {
        if !self.applies_to(f) {
            return Err(Error::Precondition(format!(
                "{} hyperoval does not exist for q = {}",
                self.name(),
                f.q()
            )));
        }
        let h = f.h();
        let monomial = |e: u64| f.elements().map(|t| f.pow(t, e)).collect::<Vec<_>>();
        let sigma = 1u64 << h.div_ceil(2);
        let sqrt = |x: Elem| f.pow_frac(x, 1, 2).expect("squaring is bijective in characteristic 2");
        Ok(match *self {
            OPolynomial::Regular => (monomial(2), "f = X^2".into()),
            OPolynomial::Translation { i } => (monomial(1 << i), format!("f = X^(2^{i})")),
            OPolynomial::Segre => (monomial(6), "f = X^6".into()),
            OPolynomial::Glynn1 => (monomial(3 * sigma + 4), format!("f = X^(3σ+4), σ = {sigma}")),
            OPolynomial::Glynn2 => {
                let lambda = if h % 4 == 3 { 1u64 << ((h + 1) / 4) } else { 1u64 << (3 * ((h - 1) / 4) + 1) };
                (monomial(sigma + lambda), format!("f = X^(σ+λ), σ = {sigma}, λ = {lambda}"))
            }
            OPolynomial::Payne => {
                let vals = f
                    .elements()
                    .map(|t| {
                        let a = f.pow_frac(t, 1, 6)?;
                        let b = f.pow_frac(t, 3, 6)?;
                        let c = f.pow_frac(t, 5, 6)?;
                        Ok(f.add(f.add(a, b), c))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let exps = [1, 3, 5].map(|n| f.frac_exponent(n, 6).unwrap_or(0));
                (vals, format!("f = X^(1/6)+X^(3/6)+X^(5/6) = X^{}+X^{}+X^{}", exps[0], exps[1], exps[2]))
            }
            OPolynomial::Cherowitzo => {
                let vals = f
                    .elements()
                    .map(|t| f.add(f.add(f.pow(t, sigma), f.pow(t, sigma + 2)), f.pow(t, 3 * sigma + 4)))
                    .collect();
                (vals, format!("f = X^σ+X^(σ+2)+X^(3σ+4), σ = {sigma}"))
            }
            OPolynomial::Subiaco1 => {
                let omega = f
                    .elements()
                    .find(|&w| f.add(f.add(f.mul(w, w), w), f.one()).is_zero())
                    .ok_or_else(|| Error::Construction("no cube root of unity".into()))?;
                let w2 = f.mul(omega, omega);
                let vals = f
                    .elements()
                    .map(|t| {
                        let t2 = f.mul(t, t);
                        let t4 = f.mul(t2, t2);
                        let den = f.add(f.add(t4, f.mul(w2, t2)), f.one());
                        if den.is_zero() {
                            return Err(Error::Construction("vanishing denominator".into()));
                        }
                        Ok(f.add(f.div(f.mul(w2, f.add(t4, t)), den), sqrt(t)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                (vals, format!("ω = {}", f.show(omega)))
            }
            OPolynomial::Subiaco2 => {
                let mut last_err = None;
                for delta in f.nonzero() {
                    let Ok(ext) = QuadExt::new(f, delta, f.one()) else { continue };
                    if ext.order(ext.root()) != f.q() as u64 + 1 {
                        continue;
                    }
                    let d = |e: u64| f.pow(delta, e);
                    let vals = f
                        .elements()
                        .map(|t| {
                            let t2 = f.mul(t, t);
                            let t3 = f.mul(t2, t);
                            let t4 = f.mul(t2, t2);
                            let num = f.sum([f.mul(d(2), t4), f.mul(d(5), t3), f.mul(d(2), t2), f.mul(d(3), t)]);
                            let den = f.add(f.add(t4, f.mul(d(2), t2)), f.one());
                            if den.is_zero() {
                                return Err(Error::Construction("vanishing denominator".into()));
                            }
                            Ok(f.add(f.div(num, den), sqrt(f.div(t, delta))))
                        })
                        .collect::<Result<Vec<_>>>();
                    match vals {
                        Ok(v) if hyperoval_points_ok(f, &v) => {
                            return Ok((v, format!("δ = {}", f.show(delta))));
                        }
                        Ok(_) => last_err = Some(format!("δ = {} gives no hyperoval", f.show(delta))),
                        Err(e) => last_err = Some(e.to_string()),
                    }
                }
                return Err(Error::Construction(last_err.unwrap_or_else(|| "no valid δ".into())));
            }
            OPolynomial::Subiaco3 => {
                let mut last_err = None;
                for delta in f.nonzero() {
                    if f.trace2(f.inv(delta))? != f.one() {
                        continue;
                    }
                    let d = |e: u64| f.pow(delta, e);
                    let vals = f
                        .elements()
                        .map(|t| subiaco3_value(f, t, delta, &d))
                        .collect::<Result<Vec<_>>>();
                    match vals {
                        Ok(v) if hyperoval_points_ok(f, &v) => {
                            return Ok((v, format!("δ = {}", f.show(delta))));
                        }
                        Ok(_) => last_err = Some(format!("δ = {} gives no hyperoval", f.show(delta))),
                        Err(e) => last_err = Some(e.to_string()),
                    }
                }
                return Err(Error::Construction(last_err.unwrap_or_else(|| "no valid δ".into())));
            }
            OPolynomial::Adelaide => {
                let q = f.q() as u64;
                let m0 = (q - 1) / 3 % (q + 1);
                for delta in f.nonzero() {
                    let Ok(ext) = QuadExt::new(f, delta, f.one()) else { continue };
                    for m in [m0, (q + 1 - m0) % (q + 1)] {
                        if let Ok(v) = adelaide_values(f, &ext, m) {
                            if hyperoval_points_ok(f, &v) {
                                return Ok((v, format!("β root of Y^2+{}Y+1, m = {m}", f.show(delta))));
                            }
                        }
                    }
                }
                return Err(Error::Construction("no valid β".into()));
            }
        })
    }
}

// The middle numerator term is δ³X². Read as δ³X³ the resulting point set
// is not an arc for any admissible δ (see `subiaco3_cubic_misprint_is_not_an_arc`).
fn subiaco3_value(f: &Field, t: Elem, delta: Elem, d: &dyn Fn(u64) -> Elem) -> Result<Elem> {
    let t2 = f.mul(t, t);
    let t3 = f.mul(t2, t);
    let t4 = f.mul(t2, t2);
    let num = f.sum([f.mul(f.add(d(4), d(2)), t3), f.mul(d(3), t2), f.mul(d(2), t)]);
    let den = f.add(f.add(t4, f.mul(d(2), t2)), f.one());
    if den.is_zero() {
        return Err(Error::Construction("vanishing denominator".into()));
    }
    let root = f.pow_frac(f.div(t, delta), 1, 2)?;
    Ok(f.add(f.div(num, den), root))
}

fn adelaide_values(f: &Field, ext: &QuadExt, m: u64) -> Result<Vec<Elem>> {
    let beta = ext.root();
    let beta_q = ext.conj(beta);
    let tb = ext.trace(beta);
    if tb.is_zero() {
        return Err(Error::Construction("T(β) = 0".into()));
    }
    let tbm = ext.trace(ext.pow(beta, m));
    f.elements()
        .map(|t| {
            let sqrt_t = f.pow_frac(t, 1, 2)?;
            let first = f.div(f.mul(tbm, f.add(t, f.one())), tb);
            let inner: QElem = ext.add(ext.mul(beta, ext.embed(t)), beta_q);
            let num = ext.trace(ext.pow(inner, m));
            let base = f.add(f.add(t, f.mul(tb, sqrt_t)), f.one());
            let den = f.mul(tb, f.pow(base, m.saturating_sub(1)));
            if den.is_zero() {
                return Err(Error::Construction("vanishing denominator".into()));
            }
            Ok(f.add(f.add(first, f.div(num, den)), sqrt_t))
        })
        .collect()
}

fn hyperoval_vectors(f: &Field, vals: &[Elem]) -> Vec<Vec<Elem>> {
    let mut pts: Vec<Vec<Elem>> =
        f.elements().zip(vals).map(|(t, &v)| vec![f.one(), t, v]).collect();
    pts.push(vec![f.zero(), f.one(), f.zero()]);
    pts.push(vec![f.zero(), f.zero(), f.one()]);
    pts
}

fn hyperoval_points_ok(f: &Field, vals: &[Elem]) -> bool {
    is_arc(f, 3, &hyperoval_vectors(f, vals)).map(|c| c.is_arc).unwrap_or(false)
}

/// {(1, t, f(t))} ∪ {(0,1,0), (0,0,1)} for an o-polynomial f.
pub fn hyperoval(spec: OPolynomial, f: &Field) -> Result<Arc> {
    let (vals, params) = spec.evaluate(f)?;
    let pts = hyperoval_vectors(f, &vals);
    let arc = Arc::new(f, 3, pts).map_err(|e| {
        Error::Construction(format!("{} ({params}) is not a hyperoval: {e}", spec.name()))
    })?;
    Ok(arc.with_construction(format!("hyperoval {}; {params}", spec.name())))
}

/// {(1, t, t^σ, t^(σ+1))} ∪ {(0,0,0,1)} with σ: x ↦ x^(2^e), q = 2^h, (e, h) = 1.
pub fn segre_3space(e: u32, f: &Field) -> Result<Arc> {
    if f.p() != 2 || e == 0 || gcd(e as u64, f.h() as u64) != 1 {
        return Err(Error::Precondition(format!("need q even and (e, h) = 1, got e = {e}, q = {}", f.q())));
    }
    let mut pts: Vec<Vec<Elem>> = f
        .elements()
        .map(|t| {
            let ts = f.frobenius(t, e);
            vec![f.one(), t, ts, f.mul(ts, t)]
        })
        .collect();
    pts.push(vec![f.zero(), f.zero(), f.zero(), f.one()]);
    Ok(Arc::new(f, 4, pts)?.with_construction(format!("segre 3-space arc e={e}")))
}

/// {(1, t, t² + η t⁶, t³, t⁴)} ∪ {(0,0,0,0,1)} in PG(4, 9), η⁴ = −1.
pub fn glynn(f: &Field) -> Result<Arc> {
    if f.q() != 9 {
        return Err(Error::Precondition("the Glynn arc lives in PG(4, 9)".into()));
    }
    let minus_one = f.neg(f.one());
    let eta = f.elements().find(|&x| f.pow(x, 4) == minus_one).expect("GF(9) has 8th roots of unity");
    let mut pts: Vec<Vec<Elem>> = f
        .elements()
        .map(|t| {
            let t2 = f.pow(t, 2);
            vec![f.one(), t, f.add(t2, f.mul(eta, f.pow(t, 6))), f.pow(t, 3), f.pow(t, 4)]
        })
        .collect();
    pts.push(vec![f.zero(), f.zero(), f.zero(), f.zero(), f.one()]);
    Ok(Arc::new(f, 5, pts)?.with_construction(format!("glynn arc η = {}", f.show(eta))))
}

pub type Mat3 = [[Elem; 3]; 3];

fn hermitian_value(f: &Field, m: &Mat3, x: &[Elem], r: u64) -> Elem {
    let xr: Vec<Elem> = x.iter().map(|&c| f.pow(c, r)).collect();
    let mut s = f.zero();
    for i in 0..3 {
        for j in 0..3 {
            s = f.add(s, f.mul(f.mul(x[i], m[i][j]), xr[j]));
        }
    }
    s
}

fn char_poly_irreducible(f: &Field, m: &Mat3) -> bool {
    let tr = f.sum((0..3).map(|i| m[i][i]));
    let minor = |a: usize, b: usize| f.sub(f.mul(m[a][a], m[b][b]), f.mul(m[a][b], m[b][a]));
    let c2 = f.sum([minor(0, 1), minor(0, 2), minor(1, 2)]);
    let det = det_rows(f, &[&m[0][..], &m[1][..], &m[2][..]]);
    // X³ − tr X² + c2 X − det, irreducible iff it has no root (degree 3)
    f.elements().all(|x| {
        let x2 = f.mul(x, x);
        let v = f.sum([f.mul(x2, x), f.neg(f.mul(tr, x2)), f.mul(c2, x), f.neg(det)]);
        !v.is_zero()
    })
}

/// Searches matrices H with H^(√q) = Hᵗ in row-major lexicographic order
/// until the characteristic polynomial is irreducible.
pub fn kestenband_matrix(f: &Field) -> Result<Mat3> {
    let r = f
        .sqrt_order()
        .filter(|_| f.q() > 4)
        .ok_or_else(|| Error::Precondition(format!("q = {} is not a square > 4", f.q())))?
        as u64;
    let sub: Vec<Elem> = f.elements().filter(|&x| f.pow(x, r) == x).collect();
    let all: Vec<Elem> = f.elements().collect();
    // free entries in row-major order: a11, a12, a13, a22, a23, a33
    for &a11 in &sub {
        for &a12 in &all {
            for &a13 in &all {
                for &a22 in &sub {
                    for &a23 in &all {
                        for &a33 in &sub {
                            let h = [
                                [a11, a12, a13],
                                [f.pow(a12, r), a22, a23],
                                [f.pow(a13, r), f.pow(a23, r), a33],
                            ];
                            if char_poly_irreducible(f, &h) {
                                return Ok(h);
                            }
                        }
                    }
                }
            }
        }
    }
    Err(Error::Construction("no Hermitian matrix with irreducible characteristic polynomial".into()))
}

/// V(I) ∩ V(H) in PG(2, q), q a square > 4. Uses [`kestenband_matrix`]
/// when `h` is `None`.
pub fn kestenband(f: &Field, h: Option<Mat3>) -> Result<Arc> {
    let r = f
        .sqrt_order()
        .filter(|_| f.q() > 4)
        .ok_or_else(|| Error::Precondition(format!("q = {} is not a square > 4", f.q())))?
        as u64;
    let h = match h {
        Some(h) => {
            for i in 0..3 {
                for j in 0..3 {
                    if f.pow(h[i][j], r) != h[j][i] {
                        return Err(Error::Precondition("H^(√q) ≠ Hᵗ".into()));
                    }
                }
            }
            if !char_poly_irreducible(f, &h) {
                return Err(Error::Precondition("characteristic polynomial of H is reducible".into()));
            }
            h
        }
        None => kestenband_matrix(f)?,
    };
    let id = [[f.one(), f.zero(), f.zero()], [f.zero(), f.one(), f.zero()], [f.zero(), f.zero(), f.one()]];
    let space = Space::new(f, 3)?;
    let pts: Vec<Vec<Elem>> = space
        .points()
        .filter(|x| hermitian_value(f, &id, x, r).is_zero() && hermitian_value(f, &h, x, r).is_zero())
        .collect();
    let rows: Vec<String> =
        h.iter().map(|row| row.iter().map(|&x| f.show(x)).collect::<Vec<_>>().join(" ")).collect();
    Ok(Arc::new(f, 3, pts)?.with_construction(format!("kestenband H = [{}]", rows.join("; "))))
}

/// Columns of a generator matrix of the dual code, as an arc of the same
/// size in PG(n − k − 1, q).
pub fn dual_arc(a: &Arc) -> Result<Arc> {
    let n = a.len();
    if n < a.k() + 2 {
        return Err(Error::Dimension(format!(
            "dual of a {n}-arc in PG({}, q) would have dimension < 1",
            a.k() - 1
        )));
    }
    let dual = LinearCode::from_arc(a)?.dual();
    let g = dual.generator();
    let pts: Vec<Vec<Elem>> = (0..n).map(|j| g.column(j)).collect();
    Ok(Arc::new(a.field(), n - a.k(), pts)?.with_construction("dual arc"))
}

/// All points x with A ∪ {x} an arc, in canonical order. Empty iff A is complete.
pub fn extensions(a: &Arc) -> Result<Vec<Vec<Elem>>> {
    let f = a.field();
    let k = a.k();
    let space = Space::new(f, k)?;
    let mut blocked = vec![false; space.num_points()];
    let n = a.len();
    if n + 1 >= k {
        if k >= 2 {
            for sub in (0..n).combinations(k - 1) {
                let rows: Vec<Vec<Elem>> = sub.iter().map(|&i| a.point(i).to_vec()).collect();
                for p in points_in_span(f, &rows) {
                    blocked[space.index_of(&p)] = true;
                }
            }
        }
        if k == 1 {
            blocked.iter_mut().for_each(|b| *b = true);
        }
    } else {
        for p in points_in_span(f, a.points()) {
            blocked[space.index_of(&p)] = true;
        }
    }
    for p in a.points() {
        blocked[space.index_of_raw(p)] = true;
    }
    Ok((0..space.num_points()).filter(|&i| !blocked[i]).map(|i| space.point_at(i)).collect())
}

pub fn is_complete(a: &Arc) -> Result<bool> {
    Ok(extensions(a)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Field {
        Field::of_order(q).unwrap()
    }

    fn pts(f: &Field, xs: &[[i64; 3]]) -> Vec<Vec<Elem>> {
        xs.iter().map(|p| p.iter().map(|&c| f.from_int(c)).collect()).collect()
    }

    #[test]
    fn nrc_small_cases() {
        let f = gf(5);
        let c = nrc(3, &f).unwrap();
        assert_eq!(c.len(), 6);
        assert_eq!(c.t(), 1);
        let f7 = gf(7);
        let a = nrc(4, &f7).unwrap();
        assert_eq!(a.len(), 8);
        // every 4-subset has nonzero determinant
        for sub in (0..8).combinations(4) {
            let rows: Vec<&[Elem]> = sub.iter().map(|&i| a.point(i)).collect();
            assert!(!det_rows(&f7, &rows).is_zero());
        }
        assert!(nrc(5, &gf(3)).is_err());
    }

    #[test]
    fn collinear_triple_is_reported() {
        let f = gf(7);
        let p = pts(&f, &[[1, 1, 1], [0, 1, 0], [0, 1, 3], [1, 2, 4], [0, 0, 1], [1, 5, 2]]);
        let check = is_arc(&f, 3, &p).unwrap();
        assert!(!check.is_arc);
        let w = check.witness.unwrap();
        assert_eq!(w.len(), 3);
        let rows: Vec<&[Elem]> = w.iter().map(|&i| &p[i][..]).collect();
        assert!(det_rows(&f, &rows).is_zero());
        // the sieve path (more than k + 4 points) finds a witness as well
        let mut long = nrc(3, &f).unwrap().points().to_vec();
        long.push(vec![f.zero(), f.one(), f.from_int(3)]);
        let check = is_arc(&f, 3, &long).unwrap();
        assert!(!check.is_arc);
        let w = check.witness.unwrap();
        let rows: Vec<&[Elem]> = w.iter().map(|&i| &long[i][..]).collect();
        assert!(det_rows(&f, &rows).is_zero());
    }

    #[test]
    fn sieve_and_subsets_agree() {
        let f = gf(5);
        let space = Space::new(&f, 3).unwrap();
        let all: Vec<Vec<Elem>> = space.points().collect();
        for start in 0..10 {
            let sel: Vec<Vec<Elem>> = all.iter().skip(start).step_by(4).take(7).cloned().collect();
            let sieve = is_arc(&f, 3, &sel).unwrap().is_arc;
            let brute = (0..sel.len())
                .combinations(3)
                .all(|s| !det_rows(&f, &[&sel[s[0]][..], &sel[s[1]][..], &sel[s[2]][..]]).is_zero());
            assert_eq!(sieve, brute);
        }
    }

    #[test]
    fn twelve_arc_pg2_13() {
        let f = gf(13);
        let a = Arc::new(&f, 3, twelve_arc_points(&f)).unwrap();
        assert_eq!(a.t(), 3);
    }

    pub(crate) fn twelve_arc_points(f: &Field) -> Vec<Vec<Elem>> {
        pts(
            f,
            &[
                [3, 4, 1],
                [-3, 4, 1],
                [3, -4, 1],
                [-3, -4, 1],
                [4, 3, 1],
                [4, -3, 1],
                [-4, 3, 1],
                [-4, -3, 1],
                [1, 1, 1],
                [1, -1, 1],
                [-1, 1, 1],
                [-1, -1, 1],
            ],
        )
    }

    #[test]
    fn nrc_through_recovers_curve() {
        for (k, q) in [(3, 7), (4, 7), (5, 9)] {
            let f = gf(q);
            let c = nrc(k, &f).unwrap();
            let chosen: Vec<Vec<Elem>> = [1, 3, 4, 6, 0, 7, 2].iter().take(k + 2).map(|&i| c.point(i).to_vec()).collect();
            let curve: BTreeSet<Vec<Elem>> = nrc_through(&f, &chosen).unwrap().into_iter().collect();
            assert_eq!(curve, c.point_set());
        }
    }

    #[test]
    fn hyperovals_q8() {
        let f = gf(8);
        for fam in [
            OPolynomial::Regular,
            OPolynomial::Translation { i: 2 },
            OPolynomial::Segre,
            OPolynomial::Glynn1,
            OPolynomial::Glynn2,
            OPolynomial::Payne,
            OPolynomial::Cherowitzo,
        ] {
            let h = hyperoval(fam, &f).unwrap();
            assert_eq!(h.len(), 10, "{fam:?}");
            assert!(is_complete(&h).unwrap());
        }
        assert!(hyperoval(OPolynomial::Translation { i: 3 }, &f).is_err());
        assert!(hyperoval(OPolynomial::Subiaco1, &f).is_err());
        assert!(hyperoval(OPolynomial::Regular, &gf(9)).is_err());
    }

    #[test]
    fn families_q4_q16() {
        let f4 = gf(4);
        for fam in [OPolynomial::Subiaco1, OPolynomial::Subiaco2] {
            assert_eq!(hyperoval(fam, &f4).unwrap().len(), 6);
        }
        let f16 = gf(16);
        for fam in [OPolynomial::Translation { i: 3 }, OPolynomial::Subiaco3, OPolynomial::Adelaide] {
            let h = hyperoval(fam, &f16).unwrap();
            assert_eq!(h.len(), 18);
            assert!(is_complete(&h).unwrap());
        }
        assert!(hyperoval(OPolynomial::Segre, &f16).is_err());
        assert!(hyperoval(OPolynomial::Adelaide, &f4).is_err());
    }

    #[test]
    fn subiaco3_cubic_misprint_is_not_an_arc() {
        let f = gf(16);
        for delta in f.nonzero().filter(|&d| f.trace2(f.inv(d)).unwrap() == f.one()) {
            let d = |e: u64| f.pow(delta, e);
            let vals: Vec<Elem> = f
                .elements()
                .map(|t| {
                    let t3 = f.pow(t, 3);
                    let num = f.sum([f.mul(f.add(d(4), d(2)), t3), f.mul(d(3), t3), f.mul(d(2), t)]);
                    let den = f.sum([f.pow(t, 4), f.mul(d(2), f.pow(t, 2)), f.one()]);
                    f.add(f.div(num, den), f.pow_frac(f.div(t, delta), 1, 2).unwrap())
                })
                .collect();
            assert!(!hyperoval_points_ok(&f, &vals));
            let good: Vec<Elem> = f.elements().map(|t| subiaco3_value(&f, t, delta, &d).unwrap()).collect();
            assert!(hyperoval_points_ok(&f, &good));
        }
    }

    #[test]
    fn payne_resolves_to_sextic_quartic_quadratic() {
        let f = gf(8);
        let (vals, _) = OPolynomial::Payne.evaluate(&f).unwrap();
        for (t, v) in f.elements().zip(vals) {
            assert_eq!(v, f.sum([f.pow(t, 6), f.pow(t, 4), f.pow(t, 2)]));
        }
    }

    #[test]
    fn special_arcs() {
        let f9 = gf(9);
        let g = glynn(&f9).unwrap();
        assert_eq!((g.len(), g.k()), (10, 5));
        let f8 = gf(8);
        let s1 = segre_3space(1, &f8).unwrap();
        assert_eq!(s1.point_set(), nrc(4, &f8).unwrap().point_set());
        let s2 = segre_3space(2, &f8).unwrap();
        assert_eq!(s2.len(), 9);
        assert!(segre_3space(3, &f8).is_err());
        let kb = kestenband(&f9, None).unwrap();
        assert_eq!(kb.len(), 7);
        assert!(kestenband(&gf(4), None).is_err());
        assert!(kestenband(&gf(8), None).is_err());
    }

    #[test]
    fn kestenband_rejects_bad_matrix() {
        let f = gf(9);
        let z = f.zero();
        let o = f.one();
        let id = [[o, z, z], [z, o, z], [z, z, o]];
        assert!(kestenband(&f, Some(id)).is_err());
        let x = f.generator();
        let non_hermitian = [[o, x, z], [x, o, z], [z, z, o]];
        assert!(kestenband(&f, Some(non_hermitian)).is_err());
    }

    #[test]
    fn extension_examples() {
        let f8 = gf(8);
        let conic = nrc(3, &f8).unwrap();
        let ext = extensions(&conic).unwrap();
        assert_eq!(ext, vec![vec![f8.zero(), f8.one(), f8.zero()]]);
        let f7 = gf(7);
        assert!(extensions(&nrc(3, &f7).unwrap()).unwrap().is_empty());
        // two points in PG(2, q): everything off their line extends
        let two = nrc(3, &f7).unwrap().subset(&[0, 1]);
        assert_eq!(extensions(&two).unwrap().len(), 57 - 8);
    }

    #[test]
    fn dual_arc_examples() {
        let f = gf(5);
        let d = dual_arc(&nrc(3, &f).unwrap()).unwrap();
        assert_eq!((d.len(), d.k()), (6, 3));
        let f8 = gf(8);
        let dh = dual_arc(&hyperoval(OPolynomial::Regular, &f8).unwrap()).unwrap();
        assert_eq!((dh.len(), dh.k()), (10, 7));
        assert!(dual_arc(&nrc(3, &f).unwrap().subset(&[0, 1, 2, 3])).is_err());
    }

    #[test]
    fn json_roundtrip_preserves_representatives() {
        let f = gf(9);
        let two = f.from_int(2);
        let raw: Vec<Vec<Elem>> = nrc(3, &f)
            .unwrap()
            .points()
            .iter()
            .map(|p| p.iter().map(|&c| f.mul(c, two)).collect())
            .collect();
        let a = Arc::new(&f, 3, raw).unwrap();
        let back = Arc::from_json(&a.to_json()).unwrap();
        assert_eq!(a, back);
        let s = a.to_json();
        assert!(s.starts_with(r#"{"field":{"p":3,"h":2,"modulus":[1,0,1]},"k":3,"points":[[[2,0],[0,0],[0,0]]"#), "{s}");
    }
}
