//! Necessary conditions for extending a small arc 𝒢 to a large one: the
//! matrix P_n and the search for nullspace vectors with no zero coordinate.

use itertools::Itertools;
use rayon::prelude::*;

use crate::arc::Arc;
use crate::error::{Error, Result};
use crate::geometry::Space;
use crate::gf::Elem;
use crate::linalg::{det_rows, Matrix};

/// Largest number of projective nullspace combinations searched.
pub const COMBINATION_GUARD: u64 = 1 << 20;

/// Witnesses kept in a `Possible` verdict.
pub const MAX_WITNESSES: usize = 16;

/// P_n with its row labels (S, U) and column labels C, all lexicographic.
#[derive(Clone, Debug)]
pub struct PnMatrix {
    pub n: usize,
    pub rows: Vec<(Vec<usize>, Vec<usize>)>,
    pub cols: Vec<Vec<usize>>,
    pub matrix: Matrix,
}

/// Entry ((S,U), C) is Π_{u∈U} det(u, C) when S ⊂ C and 0 otherwise, with C
/// in arc order.
pub fn build_pn(g: &Arc, n: usize) -> Result<PnMatrix> {
    let f = g.field();
    let k = g.k();
    let len = g.len();
    if k < 3 {
        return Err(Error::Precondition("P_n needs k ≥ 3".into()));
    }
    if len < k + n {
        return Err(Error::Dimension(format!("|G| = {len} < k + n = {}", k + n)));
    }
    let cols: Vec<Vec<usize>> = (0..len).combinations(k - 1).collect();
    let mut rows = Vec::new();
    for s in (0..len).combinations(k - 2) {
        let rest: Vec<usize> = (0..len).filter(|i| !s.contains(i)).collect();
        for u in rest.into_iter().combinations(n) {
            rows.push((s.clone(), u));
        }
    }
    let dets: Vec<Vec<Elem>> = cols
        .iter()
        .map(|c| {
            (0..len)
                .map(|u| {
                    let mut r: Vec<&[Elem]> = vec![g.point(u)];
                    r.extend(c.iter().map(|&i| g.point(i)));
                    det_rows(f, &r)
                })
                .collect()
        })
        .collect();
    let mut matrix = Matrix::zeros(f, rows.len(), cols.len());
    for (ri, (s, u)) in rows.iter().enumerate() {
        for (ci, c) in cols.iter().enumerate() {
            if s.iter().all(|x| c.contains(x)) {
                matrix[(ri, ci)] = f.product(u.iter().map(|&x| dets[ci][x]));
            }
        }
    }
    Ok(PnMatrix { n, rows, cols, matrix })
}

/// Basis of {v : Mv = 0} and the rank of M.
pub fn nullspace(m: &Matrix) -> (Vec<Vec<Elem>>, usize) {
    let basis = m.nullspace();
    let rank = m.cols() - basis.len();
    (basis, rank)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No nullspace vector has all coordinates nonzero: 𝒢 extends to no
    /// arc of the target size.
    Obstructed { rank: usize, nullity: usize },
    /// All-nonzero solutions exist (a necessary condition only).
    Possible { nullity: usize, count: u64, witnesses: Vec<Vec<Elem>> },
    /// The nullspace is too large to search exhaustively.
    Undecided { nullity: usize, combinations: u64 },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Obstructed { .. } => "obstructed",
            Verdict::Possible { .. } => "possible",
            Verdict::Undecided { .. } => "undecided",
        }
    }
}

/// n = target − q − 2k + 1 + |𝒢|, from |A| = q + 2k − 1 − |𝒢| + n.
pub fn n_for_target(g: &Arc, target: usize) -> Result<usize> {
    let n = target as i64 - g.field().q() as i64 - 2 * g.k() as i64 + 1 + g.len() as i64;
    if n < 0 {
        return Err(Error::Precondition(format!("target {target} gives n = {n} < 0")));
    }
    let t = g.len() as i64 - g.k() as i64 - n;
    if t < 0 {
        return Err(Error::Precondition(format!("target {target} gives t = {t} < 0")));
    }
    Ok(n as usize)
}

/// Exhausts projective combinations of a nullspace basis, guarded by
/// (q^d − 1)/(q − 1) ≤ [`COMBINATION_GUARD`].
pub fn extendability_verdict(g: &Arc, target: usize) -> Result<Verdict> {
    let f = g.field();
    let n = n_for_target(g, target)?;
    let pn = build_pn(g, n)?;
    let (basis, rank) = nullspace(&pn.matrix);
    let d = basis.len();
    if d == 0 {
        return Ok(Verdict::Obstructed { rank, nullity: 0 });
    }
    let q = f.q() as u64;
    let combos = (0..d as u32).try_fold(0u64, |acc, i| acc.checked_add(q.checked_pow(i)?));
    let combos = match combos {
        Some(c) if c <= COMBINATION_GUARD => c,
        other => return Ok(Verdict::Undecided { nullity: d, combinations: other.unwrap_or(u64::MAX) }),
    };
    let space = Space::new(f, d)?;
    let ncols = pn.cols.len();
    let combine = |i: usize| -> Vec<Elem> {
        let c = space.point_at(i);
        (0..ncols)
            .map(|j| f.sum(c.iter().zip(&basis).map(|(&ci, b)| f.mul(ci, b[j]))))
            .collect()
    };
    let hits: Vec<usize> = (0..combos as usize)
        .into_par_iter()
        .filter(|&i| combine(i).iter().all(|x| !x.is_zero()))
        .collect();
    if hits.is_empty() {
        Ok(Verdict::Obstructed { rank, nullity: d })
    } else {
        let witnesses = hits.iter().take(MAX_WITNESSES).map(|&i| combine(i)).collect();
        Ok(Verdict::Possible { nullity: d, count: hits.len() as u64, witnesses })
    }
}
