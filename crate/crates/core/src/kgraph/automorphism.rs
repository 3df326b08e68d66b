use super::{Cube, KGraph, KGraphError, Square};

/// A color-preserving bijection of vertices and edges compatible with squares.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    vertex_map: Vec<usize>,
    edge_map: Vec<usize>,
}

fn invert(map: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; map.len()];
    for (i, &j) in map.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

fn is_permutation(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    map.iter().all(|&j| j < seen.len() && !std::mem::replace(&mut seen[j], true))
}

impl Automorphism {
    pub fn new(g: &KGraph, vertex_map: Vec<usize>, edge_map: Vec<usize>) -> Result<Self, KGraphError> {
        let bad = |msg: String| KGraphError::InvalidAutomorphism(msg);
        if vertex_map.len() != g.vertex_count() || !is_permutation(&vertex_map) {
            return Err(bad("vertex map is not a bijection".into()));
        }
        if edge_map.len() != g.edge_count() || !is_permutation(&edge_map) {
            return Err(bad("edge map is not a bijection".into()));
        }
        for (e, &be) in edge_map.iter().enumerate() {
            let id = g.edge_id(e);
            if g.color(be) != g.color(e) {
                return Err(bad(format!("edge `{id}` changes color")));
            }
            if g.src(be) != vertex_map[g.src(e)] || g.rng(be) != vertex_map[g.rng(e)] {
                return Err(bad(format!("edge `{id}` is not mapped compatibly with its endpoints")));
            }
        }
        let a = Automorphism { vertex_map, edge_map };
        for s in g.squares() {
            let img = a.apply_square(s);
            if g.left_square(img.e, img.f) != Some(&img) {
                return Err(bad(format!(
                    "square ({}, {}, {}, {}) is not sent to a square",
                    g.edge_id(s.e),
                    g.edge_id(s.f),
                    g.edge_id(s.fp),
                    g.edge_id(s.ep)
                )));
            }
        }
        Ok(a)
    }

    pub fn identity(g: &KGraph) -> Self {
        Automorphism { vertex_map: (0..g.vertex_count()).collect(), edge_map: (0..g.edge_count()).collect() }
    }

    /// Builds from id pairs; unmapped ids are fixed.
    pub fn from_ids<'a>(
        g: &KGraph,
        vertices: impl IntoIterator<Item = (&'a str, &'a str)>,
        edges: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, KGraphError> {
        let mut vm: Vec<usize> = (0..g.vertex_count()).collect();
        let mut em: Vec<usize> = (0..g.edge_count()).collect();
        let vertex =
            |id: &str| g.vertex_by_id(id).ok_or_else(|| KGraphError::UnknownId { kind: "vertex", id: id.into() });
        let edge = |id: &str| g.edge_by_id(id).ok_or_else(|| KGraphError::UnknownId { kind: "edge", id: id.into() });
        for (a, b) in vertices {
            vm[vertex(a)?] = vertex(b)?;
        }
        for (a, b) in edges {
            em[edge(a)?] = edge(b)?;
        }
        Automorphism::new(g, vm, em)
    }

    pub fn vertex(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    pub fn edge(&self, e: usize) -> usize {
        self.edge_map[e]
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &[usize] {
        &self.edge_map
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &j)| i == j)
            && self.edge_map.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        Automorphism { vertex_map: invert(&self.vertex_map), edge_map: invert(&self.edge_map) }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Self {
        Automorphism {
            vertex_map: other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            edge_map: other.edge_map.iter().map(|&e| self.edge_map[e]).collect(),
        }
    }

    pub fn apply_square(&self, s: &Square) -> Square {
        Square { e: self.edge_map[s.e], f: self.edge_map[s.f], fp: self.edge_map[s.fp], ep: self.edge_map[s.ep] }
    }

    /// Image of a cube; canonical form is preserved since colors are.
    pub fn apply_cube(&self, c: &Cube) -> Cube {
        Cube { range: self.vertex_map[c.range], edges: c.edges.iter().map(|&e| self.edge_map[e]).collect() }
    }

    /// Every automorphism of `g`, by backtracking over color-preserving edge images.
    /// Stops after `limit` results.
    pub fn search_all(g: &KGraph, limit: usize) -> Vec<Automorphism> {
        let mut out = Vec::new();
        let mut vmap = vec![usize::MAX; g.vertex_count()];
        let mut vused = vec![false; g.vertex_count()];
        let mut emap = vec![usize::MAX; g.edge_count()];
        let mut eused = vec![false; g.edge_count()];
        search_edges(g, 0, &mut vmap, &mut vused, &mut emap, &mut eused, &mut out, limit);
        out
    }
}

#[allow(clippy::too_many_arguments)]
fn search_edges(
    g: &KGraph,
    e: usize,
    vmap: &mut Vec<usize>,
    vused: &mut Vec<bool>,
    emap: &mut Vec<usize>,
    eused: &mut Vec<bool>,
    out: &mut Vec<Automorphism>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if e == g.edge_count() {
        let free: Vec<usize> = (0..g.vertex_count()).filter(|&v| vmap[v] == usize::MAX).collect();
        let targets: Vec<usize> = (0..g.vertex_count()).filter(|&v| !vused[v]).collect();
        let mut perm = targets.clone();
        permute_isolated(g, &free, &mut perm, 0, vmap, emap, out, limit);
        return;
    }
    let (s, r) = (g.src(e), g.rng(e));
    for t in 0..g.edge_count() {
        if eused[t] || g.color(t) != g.color(e) {
            continue;
        }
        let mut assigned = Vec::new();
        let mut ok = true;
        for (v, w) in [(s, g.src(t)), (r, g.rng(t))] {
            if vmap[v] == usize::MAX {
                if vused[w] {
                    ok = false;
                    break;
                }
                vmap[v] = w;
                vused[w] = true;
                assigned.push(v);
            } else if vmap[v] != w {
                ok = false;
                break;
            }
        }
        if ok {
            emap[e] = t;
            eused[t] = true;
            search_edges(g, e + 1, vmap, vused, emap, eused, out, limit);
            eused[t] = false;
            emap[e] = usize::MAX;
        }
        for v in assigned {
            vused[vmap[v]] = false;
            vmap[v] = usize::MAX;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn permute_isolated(
    g: &KGraph,
    free: &[usize],
    perm: &mut Vec<usize>,
    k: usize,
    vmap: &[usize],
    emap: &[usize],
    out: &mut Vec<Automorphism>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if k == perm.len() {
        let mut vm = vmap.to_vec();
        for (&v, &w) in free.iter().zip(perm.iter()) {
            vm[v] = w;
        }
        let squares_ok = g.squares().iter().all(|s| {
            let img = Square { e: emap[s.e], f: emap[s.f], fp: emap[s.fp], ep: emap[s.ep] };
            g.left_square(img.e, img.f) == Some(&img)
        });
        if squares_ok {
            out.push(Automorphism { vertex_map: vm, edge_map: emap.to_vec() });
        }
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute_isolated(g, free, perm, k + 1, vmap, emap, out, limit);
        perm.swap(k, i);
    }
}
