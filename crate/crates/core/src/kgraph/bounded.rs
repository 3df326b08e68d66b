//! Bounded searches for aperiodicity and cofinality.

use serde::Serialize;

use super::{Cube, KGraph, KGraphError};

/// Cap on the number of candidate paths examined per `(v, m, n)`.
const PATH_BUDGET: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundedStatus {
    VerifiedUpToBound,
    CounterexampleFound,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundedVerdict {
    pub status: BoundedStatus,
    pub bound: Vec<usize>,
    /// First failing vertex or vertex pair, and degrees, when not verified.
    pub witness: Option<serde_json::Value>,
    /// Largest `N` used by a cofinality certificate.
    pub max_n: Option<Vec<usize>>,
    pub checked: usize,
}

fn box_points(bound: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=b).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out.sort_by_key(|p| (p.iter().sum::<usize>(), p.clone()));
    out
}

fn check_bound(g: &KGraph, bound: &[usize]) -> Result<(), KGraphError> {
    if bound.len() != g.rank() {
        return Err(KGraphError::InvalidSize(format!(
            "degree bound has {} entries, rank is {}",
            bound.len(),
            g.rank()
        )));
    }
    if !g.is_row_finite() {
        return Err(KGraphError::NotRowFinite);
    }
    Ok(())
}

/// For each vertex `v` and pair `m != n` in the box `[0, bound]`, looks for
/// `λ ∈ vΛ` with `d(λ) = (m ∨ n) + p`, `p` in the box, such that
/// `λ(m, m + p) != λ(n, n + p)`.
pub fn check_aperiodicity(g: &KGraph, bound: &[usize]) -> Result<BoundedVerdict, KGraphError> {
    check_bound(g, bound)?;
    let points = box_points(bound);
    let mut checked = 0;
    for v in 0..g.vertex_count() {
        for (a, m) in points.iter().enumerate() {
            for n in &points[a + 1..] {
                checked += 1;
                if !has_aperiodic_witness(g, v, m, n, &points)? {
                    return Ok(BoundedVerdict {
                        status: BoundedStatus::Inconclusive,
                        bound: bound.to_vec(),
                        witness: Some(serde_json::json!({
                            "vertex": g.vertex_id(v),
                            "m": m,
                            "n": n,
                        })),
                        max_n: None,
                        checked,
                    });
                }
            }
        }
    }
    Ok(BoundedVerdict {
        status: BoundedStatus::VerifiedUpToBound,
        bound: bound.to_vec(),
        witness: None,
        max_n: None,
        checked,
    })
}

fn has_aperiodic_witness(
    g: &KGraph,
    v: usize,
    m: &[usize],
    n: &[usize],
    points: &[Vec<usize>],
) -> Result<bool, KGraphError> {
    let join: Vec<usize> = m.iter().zip(n).map(|(a, b)| *a.max(b)).collect();
    let mut budget = PATH_BUDGET;
    for p in points {
        let degree: Vec<usize> = join.iter().zip(p).map(|(a, b)| a + b).collect();
        for lambda in g.paths_of_degree(v, &degree) {
            if differs(g, &lambda, m, n, p)? {
                return Ok(true);
            }
            budget -= 1;
            if budget == 0 {
                return Ok(false);
            }
        }
    }
    Ok(false)
}

fn differs(g: &KGraph, lambda: &Cube, m: &[usize], n: &[usize], p: &[usize]) -> Result<bool, KGraphError> {
    Ok(g.segment(lambda, m, p)? != g.segment(lambda, n, p)?)
}

/// For each pair `(v, w)`, looks for `N` in the box `[0, bound]` such that every
/// `α ∈ vΛ^N` has `wΛs(α)` nonempty.
pub fn check_cofinality(g: &KGraph, bound: &[usize]) -> Result<BoundedVerdict, KGraphError> {
    check_bound(g, bound)?;
    let nv = g.vertex_count();
    // reaches[w][u]: some path has range w and source u
    let mut reaches = vec![vec![false; nv]; nv];
    for (w, row) in reaches.iter_mut().enumerate() {
        row[w] = true;
        let mut stack = vec![w];
        while let Some(x) = stack.pop() {
            for e in g.edges_with_range(x) {
                let s = g.src(e);
                if !row[s] {
                    row[s] = true;
                    stack.push(s);
                }
            }
        }
    }
    let points = box_points(bound);
    let mut max_n = vec![0; g.rank()];
    let mut checked = 0;
    for v in 0..nv {
        let source_sets: Vec<Vec<bool>> = points.iter().map(|p| sources_of_degree(g, v, p)).collect();
        for (w, reach) in reaches.iter().enumerate() {
            checked += 1;
            let found = points
                .iter()
                .zip(&source_sets)
                .find(|(_, srcs)| srcs.iter().enumerate().all(|(u, &hit)| !hit || reach[u]));
            match found {
                Some((p, _)) => {
                    for (mx, x) in max_n.iter_mut().zip(p) {
                        *mx = (*mx).max(*x);
                    }
                }
                None => {
                    return Ok(BoundedVerdict {
                        status: BoundedStatus::Inconclusive,
                        bound: bound.to_vec(),
                        witness: Some(serde_json::json!({
                            "v": g.vertex_id(v),
                            "w": g.vertex_id(w),
                        })),
                        max_n: None,
                        checked,
                    });
                }
            }
        }
    }
    Ok(BoundedVerdict {
        status: BoundedStatus::VerifiedUpToBound,
        bound: bound.to_vec(),
        witness: None,
        max_n: Some(max_n),
        checked,
    })
}

/// `{ s(α) : α ∈ vΛ^degree }`, color by color.
fn sources_of_degree(g: &KGraph, v: usize, degree: &[usize]) -> Vec<bool> {
    let mut cur = vec![false; g.vertex_count()];
    cur[v] = true;
    for (i, &d) in degree.iter().enumerate() {
        for _ in 0..d {
            let mut next = vec![false; g.vertex_count()];
            for e in g.edges().iter().filter(|e| e.color == i + 1 && cur[e.rng]) {
                next[e.src] = true;
            }
            cur = next;
        }
    }
    cur
}
