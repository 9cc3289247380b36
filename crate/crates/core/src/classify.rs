//! Exhaustive search for arcs at small q, up to projective equivalence.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arc::{Arc, ArcData};
use crate::error::{Error, Result};
use crate::geometry::{conic_through, normalize, points_in_span, Space};
use crate::gf::{Elem, Field};
use crate::linalg::Matrix;

/// Projectivity x ↦ xM with a_i M ∝ b_i for two ordered frames.
fn frame_map(f: &Field, a: &[Vec<Elem>], b: &[Vec<Elem>]) -> Option<Matrix> {
    let k = a[0].len();
    let a0 = Matrix::from_rows(f, &a[..k], k).ok()?;
    let b0 = Matrix::from_rows(f, &b[..k], k).ok()?;
    let a0i = a0.inverse().ok()?;
    let b0i = b0.inverse().ok()?;
    let lambda = a0i.apply_row(&a[k]);
    let mu = b0i.apply_row(&b[k]);
    if lambda.iter().chain(&mu).any(|x| x.is_zero()) {
        return None;
    }
    let mut d = Matrix::zeros(f, k, k);
    for i in 0..k {
        d[(i, i)] = f.div(mu[i], lambda[i]);
    }
    a0i.mul(&d).ok()?.mul(&b0).ok()
}

/// Whether some projectivity maps A's point set onto B's. Maps A's first
/// frame onto every ordered (k+1)-tuple of B and compares images.
pub fn equivalent(a: &Arc, b: &Arc) -> Result<bool> {
    if a.k() != b.k() || a.len() != b.len() || a.field() != b.field() {
        return Err(Error::Dimension("arcs differ in dimension, field or size".into()));
    }
    let f = a.field();
    let k = a.k();
    if a.len() <= k {
        // independent sets of equal size are always equivalent
        return Ok(true);
    }
    let frame: Vec<Vec<Elem>> = a.points()[..=k].to_vec();
    let target = b.point_set();
    let bp = b.points();
    for tuple in (0..b.len()).permutations(k + 1) {
        let img: Vec<Vec<Elem>> = tuple.iter().map(|&i| bp[i].clone()).collect();
        let Some(m) = frame_map(f, &frame, &img) else { continue };
        if a
            .points()
            .iter()
            .all(|p| normalize(f, &m.apply_row(p)).is_some_and(|x| target.contains(&x)))
        {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The conic through the first five points contains every point.
pub fn is_conic_arc(a: &Arc) -> Result<bool> {
    if a.k() != 3 {
        return Err(Error::Precondition("conics live in the plane".into()));
    }
    if a.len() < 5 {
        return Err(Error::Precondition("need at least 5 points".into()));
    }
    let f = a.field();
    let c = conic_through(f, &a.points()[..5])?;
    Ok(a.points().iter().all(|p| c.contains(f, p)))
}

/// Sorted counts, over points off the arc, of the (k−1)-subsets whose span
/// contains the point. A projective invariant used to bucket arcs.
pub fn secant_profile(a: &Arc) -> Result<Vec<usize>> {
    let f = a.field();
    let space = Space::new(f, a.k())?;
    let mut counts = vec![0usize; space.num_points()];
    for sub in (0..a.len()).combinations(a.k() - 1) {
        let rows: Vec<Vec<Elem>> = sub.iter().map(|&i| a.point(i).to_vec()).collect();
        for p in points_in_span(f, &rows) {
            counts[space.index_of(&p)] += 1;
        }
    }
    for p in a.points() {
        counts[space.index_of_raw(p)] = usize::MAX;
    }
    let mut prof: Vec<usize> = counts.into_iter().filter(|&c| c != usize::MAX).collect();
    prof.sort_unstable();
    Ok(prof)
}

/// Default cap on visited search nodes.
pub const NODE_GUARD: u64 = 500_000_000;

#[derive(Clone, Debug, Default)]
pub struct CensusOptions {
    /// File recording finished top-level branches; reused on restart.
    pub checkpoint: Option<PathBuf>,
    pub node_limit: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CensusStats {
    pub branches: usize,
    pub nodes: u64,
    pub arcs_found: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CensusReport {
    pub field: Field,
    pub k: usize,
    pub size: usize,
    pub complete_only: bool,
    pub classes: usize,
    pub representatives: Vec<ArcData>,
    pub stats: CensusStats,
}

impl CensusReport {
    pub fn arcs(&self) -> Result<Vec<Arc>> {
        self.representatives.iter().cloned().map(Arc::try_from).collect()
    }
}

#[derive(Clone, Copy)]
struct Bits<'a> {
    words: &'a [u64],
}

fn bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

fn set(words: &mut [u64], i: usize) {
    words[i / 64] |= 1 << (i % 64);
}

struct Search<'a> {
    space: &'a Space,
    k: usize,
    size: usize,
    complete_only: bool,
    nwords: usize,
    nodes: &'a AtomicU64,
    limit: u64,
}

impl Search<'_> {
    /// Marks every point in the span of p with each (k−2)-subset of `arc`.
    fn block(&self, words: &mut [u64], arc: &[usize], p: usize) {
        let f = self.space.field();
        let pv = self.space.point_at(p);
        for sub in arc.iter().combinations(self.k - 2) {
            let mut rows: Vec<Vec<Elem>> = sub.iter().map(|&&i| self.space.point_at(i)).collect();
            rows.push(pv.clone());
            for x in points_in_span(f, &rows) {
                set(words, self.space.index_of(&x));
            }
        }
        set(words, p);
    }

    fn full(&self, b: Bits<'_>) -> bool {
        (0..self.space.num_points()).all(|i| bit(b.words, i))
    }

    fn dfs(&self, arc: &mut Vec<usize>, words: &[u64], min_next: usize, out: &mut Vec<Vec<usize>>) -> Result<()> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) > self.limit {
            return Err(Error::GuardExceeded(format!("more than {} search nodes", self.limit)));
        }
        if arc.len() == self.size {
            if !self.complete_only || self.full(Bits { words }) {
                out.push(arc.clone());
            }
            return Ok(());
        }
        let n = self.space.num_points();
        let free = (min_next..n).filter(|&i| !bit(words, i)).count();
        if free < self.size - arc.len() {
            return Ok(());
        }
        for p in min_next..n {
            if bit(words, p) {
                continue;
            }
            let mut next = words.to_vec();
            self.block(&mut next, arc, p);
            arc.push(p);
            self.dfs(arc, &next, p + 1, out)?;
            arc.pop();
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize, Default)]
struct Checkpoint {
    field: Option<Field>,
    k: usize,
    size: usize,
    complete_only: bool,
    done: BTreeMap<usize, (u64, Vec<Vec<usize>>)>,
}

/// Classifies arcs of a given size in PG(k−1, q) up to projectivity.
pub fn census(field: &Field, k: usize, size: usize, complete_only: bool) -> Result<CensusReport> {
    census_with(field, k, size, complete_only, &CensusOptions::default())
}

/// Depth-first extension of the standard frame e₁,…,e_k, e₁+⋯+e_k by points in
/// increasing canonical index, pruning with the secant sieve. Top-level
/// branches run in parallel and merge in branch order; duplicates are then
/// removed serially with [`equivalent`].
pub fn census_with(field: &Field, k: usize, size: usize, complete_only: bool, opts: &CensusOptions) -> Result<CensusReport> {
    let f = field;
    if k < 3 {
        return Err(Error::Precondition("census needs k ≥ 3".into()));
    }
    if size < k + 1 {
        return Err(Error::Precondition(format!("size must be at least k + 1 = {}", k + 1)));
    }
    let space = Space::new(f, k)?;
    if space.num_points() > 1 << 16 {
        return Err(Error::GuardExceeded(format!("{} points", space.num_points())));
    }
    let nwords = space.num_points().div_ceil(64);
    let frame: Vec<usize> = (0..=k)
        .map(|i| {
            let v: Vec<Elem> = (0..k).map(|j| if i == k || i == j { f.one() } else { f.zero() }).collect();
            space.index_of(&v)
        })
        .collect();
    let nodes = AtomicU64::new(0);
    let search = Search {
        space: &space,
        k,
        size,
        complete_only,
        nwords,
        nodes: &nodes,
        limit: opts.node_limit.unwrap_or(NODE_GUARD),
    };
    let mut words = vec![0u64; search.nwords];
    let mut arc: Vec<usize> = Vec::new();
    for &p in &frame {
        search.block(&mut words, &arc, p);
        arc.push(p);
    }
    let branches: Vec<usize> = if size == k + 1 {
        vec![]
    } else {
        (0..space.num_points()).filter(|&i| !bit(&words, i)).collect()
    };

    let mut ckpt = Checkpoint { field: Some(f.clone()), k, size, complete_only, ..Default::default() };
    if let Some(path) = &opts.checkpoint {
        if let Ok(text) = fs::read_to_string(path) {
            let old: Checkpoint = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            if old.field.as_ref() == Some(f) && old.k == k && old.size == size && old.complete_only == complete_only {
                ckpt.done = old.done;
            }
        }
    }
    let ckpt = Mutex::new(ckpt);

    let found: Vec<Vec<Vec<usize>>> = if size == k + 1 {
        let full = search.full(Bits { words: &words });
        vec![if !complete_only || full { vec![arc.clone()] } else { vec![] }]
    } else {
        branches
            .par_iter()
            .map(|&b| -> Result<Vec<Vec<usize>>> {
                if let Some((_, arcs)) = ckpt.lock().expect("lock").done.get(&b) {
                    return Ok(arcs.clone());
                }
                let start = nodes.load(Ordering::Relaxed);
                let mut local_arc = arc.clone();
                let mut w = words.clone();
                search.block(&mut w, &local_arc, b);
                local_arc.push(b);
                let mut out = Vec::new();
                search.dfs(&mut local_arc, &w, b + 1, &mut out)?;
                if let Some(path) = &opts.checkpoint {
                    let mut c = ckpt.lock().expect("lock");
                    c.done.insert(b, (nodes.load(Ordering::Relaxed) - start, out.clone()));
                    let text = serde_json::to_string(&*c).expect("serializable");
                    fs::write(path, text).map_err(|e| Error::Parse(format!("checkpoint: {e}")))?;
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?
    };

    let all: Vec<Vec<usize>> = found.into_iter().flatten().collect();
    let arcs_found = all.len();
    let mut reps: Vec<(Vec<usize>, Arc)> = Vec::new();
    for idx in all {
        let pts: Vec<Vec<Elem>> = idx.iter().map(|&i| space.point_at(i)).collect();
        let cand = Arc::new(f, k, pts)?;
        let prof = secant_profile(&cand)?;
        let mut dup = false;
        for (p, r) in &reps {
            if *p == prof && equivalent(&cand, r)? {
                dup = true;
                break;
            }
        }
        if !dup {
            reps.push((prof, cand));
        }
    }
    let representatives: Vec<ArcData> = reps
        .into_iter()
        .enumerate()
        .map(|(i, (_, a))| a.with_construction(format!("census class {}", i + 1)).to_data())
        .collect();
    Ok(CensusReport {
        field: f.clone(),
        k,
        size,
        complete_only,
        classes: representatives.len(),
        representatives,
        stats: CensusStats { branches: branches.len(), nodes: nodes.load(Ordering::Relaxed), arcs_found },
    })
}

/// Point sets as canonical index sets, for comparing census output.
pub fn index_set(a: &Arc) -> Result<BTreeSet<usize>> {
    let space = Space::new(a.field(), a.k())?;
    Ok(a.points().iter().map(|p| space.index_of_raw(p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arc::{extensions, kestenband, nrc};

    fn gf(q: u32) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn equivalence_basics() {
        let f = gf(7);
        let c = nrc(3, &f).unwrap();
        assert!(equivalent(&c, &c).unwrap());
        // reversed order and rescaled representatives
        let mut pts: Vec<Vec<Elem>> = c.points().iter().rev().cloned().collect();
        pts[0] = pts[0].iter().map(|&x| f.mul(x, f.from_int(3))).collect();
        assert!(equivalent(&c, &Arc::new(&f, 3, pts).unwrap()).unwrap());
        // any two frames
        let a = c.subset(&[0, 1, 2, 3]);
        let b = c.subset(&[7, 2, 5, 4]);
        assert!(equivalent(&a, &b).unwrap());
        assert!(equivalent(&a, &c).is_err());
    }

    #[test]
    fn conic_detection() {
        let f9 = gf(9);
        assert!(is_conic_arc(&nrc(3, &f9).unwrap()).unwrap());
        assert!(!is_conic_arc(&kestenband(&f9, None).unwrap()).unwrap());
        assert!(is_conic_arc(&nrc(3, &f9).unwrap().subset(&[0, 1, 2, 3])).is_err());
    }

    #[test]
    fn conics_q5() {
        let f = gf(5);
        let r = census(&f, 3, 6, false).unwrap();
        assert_eq!(r.classes, 1);
        let a = &r.arcs().unwrap()[0];
        assert!(is_conic_arc(a).unwrap());
        assert!(equivalent(a, &nrc(3, &f).unwrap()).unwrap());
    }

    #[test]
    fn complete_arcs_q5_are_conics() {
        // every complete arc in PG(2,5) has 6 points; smaller ones extend
        let f = gf(5);
        assert_eq!(census(&f, 3, 5, true).unwrap().classes, 0);
        let r = census(&f, 3, 6, true).unwrap();
        assert_eq!(r.classes, 1);
        for a in r.arcs().unwrap() {
            assert!(extensions(&a).unwrap().is_empty());
        }
    }

    #[test]
    fn frame_only_census() {
        let f = gf(3);
        let r = census(&f, 3, 4, false).unwrap();
        assert_eq!(r.classes, 1);
        assert_eq!(census(&f, 3, 4, true).unwrap().classes, 1);
    }

    #[test]
    fn checkpoint_resume_is_stable() {
        let f = gf(7);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.json");
        let opts = CensusOptions { checkpoint: Some(path.clone()), node_limit: None };
        let first = census_with(&f, 3, 6, true, &opts).unwrap();
        assert!(path.exists());
        let second = census_with(&f, 3, 6, true, &opts).unwrap();
        assert_eq!(first.classes, 2);
        assert_eq!(second.classes, first.classes);
        assert_eq!(second.stats.arcs_found, first.stats.arcs_found);
    }

    #[test]
    fn node_guard() {
        let f = gf(7);
        let opts = CensusOptions { checkpoint: None, node_limit: Some(10) };
        assert!(matches!(census_with(&f, 3, 8, false, &opts), Err(Error::GuardExceeded(_))));
    }
}
