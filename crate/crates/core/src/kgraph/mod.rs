//! k-graphs given by a colored 1-skeleton plus factorization squares.

mod automorphism;
mod bounded;
mod builders;
mod cube;
mod io;

use std::collections::HashMap;

use thiserror::Error;

pub use automorphism::Automorphism;
pub use bounded::{check_aperiodicity, check_cofinality, BoundedStatus, BoundedVerdict};
pub use builders::{
    build_bouquet, build_theta_graph, build_tower, ftheta, ftheta_beta, product_automorphism, theta_from_fn, ThetaPair,
    ThetaPerm,
};
pub use cube::{Cube, Path, PathIter};
pub use io::{AutomorphismSpec, EdgeSpec, SkeletonSpec, SquareSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KGraphError {
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown {kind} id `{id}`")]
    UnknownId { kind: &'static str, id: String },
    #[error("edge `{edge}` has color {color}, expected 1..={rank}")]
    InvalidColor { edge: String, color: usize, rank: usize },
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("square {index} {square}: {reason}")]
    SquareTypingError { index: usize, square: String, reason: String },
    #[error("no square has ({first}, {second}) on its {side} side")]
    SquareIncomplete { side: &'static str, first: String, second: String },
    #[error("squares {a} and {b} share the {side} pair ({first}, {second})")]
    SquareAmbiguous { side: &'static str, first: String, second: String, a: usize, b: usize },
    #[error("associativity fails on the triple ({}, {}, {})", .0[0], .0[1], .0[2])]
    AssociativityViolation([String; 3]),
    #[error("not a bijection: {0}")]
    NotABijection(String),
    #[error("edges are not composable: {0}")]
    NotComposable(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("graph is not row-finite")]
    NotRowFinite,
}

impl KGraphError {
    /// The variant name, for diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            KGraphError::DuplicateId(_) => "DuplicateId",
            KGraphError::UnknownId { .. } => "UnknownId",
            KGraphError::InvalidColor { .. } => "InvalidColor",
            KGraphError::InvalidSize(_) => "InvalidSize",
            KGraphError::SquareTypingError { .. } => "SquareTypingError",
            KGraphError::SquareIncomplete { .. } => "SquareIncomplete",
            KGraphError::SquareAmbiguous { .. } => "SquareAmbiguous",
            KGraphError::AssociativityViolation(_) => "AssociativityViolation",
            KGraphError::NotABijection(_) => "NotABijection",
            KGraphError::NotComposable(_) => "NotComposable",
            KGraphError::IndexOutOfRange { .. } => "IndexOutOfRange",
            KGraphError::InvalidAutomorphism(_) => "InvalidAutomorphism",
            KGraphError::NotRowFinite => "NotRowFinite",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    /// 1-based color.
    pub color: usize,
    pub src: usize,
    pub rng: usize,
}

/// `e f = fp ep` with `color(e) = color(ep) < color(f) = color(fp)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Square {
    pub e: usize,
    pub f: usize,
    pub fp: usize,
    pub ep: usize,
}

/// A validated k-graph. Immutable once built.
#[derive(Debug, Clone)]
pub struct KGraph {
    rank: usize,
    vertices: Vec<String>,
    vertex_index: HashMap<String, usize>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, usize>,
    squares: Vec<Square>,
    left: HashMap<(usize, usize), usize>,
    right: HashMap<(usize, usize), usize>,
}

impl KGraph {
    /// Validates a skeleton given by ids. Checks run in the order: ids, typing,
    /// ambiguity, completeness, associativity (k >= 3).
    pub fn new(
        rank: usize,
        vertices: Vec<String>,
        edges: Vec<(String, usize, String, String)>,
        squares: Vec<[String; 4]>,
    ) -> Result<Self, KGraphError> {
        if rank == 0 {
            return Err(KGraphError::InvalidSize("rank must be positive".into()));
        }
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(KGraphError::DuplicateId(v.clone()));
            }
        }
        let lookup_vertex = |id: &str| {
            vertex_index.get(id).copied().ok_or_else(|| KGraphError::UnknownId { kind: "vertex", id: id.to_string() })
        };
        let mut edge_index = HashMap::new();
        let mut edge_list = Vec::with_capacity(edges.len());
        for (i, (id, color, src, rng)) in edges.into_iter().enumerate() {
            if vertex_index.contains_key(&id) || edge_index.insert(id.clone(), i).is_some() {
                return Err(KGraphError::DuplicateId(id));
            }
            if color == 0 || color > rank {
                return Err(KGraphError::InvalidColor { edge: id, color, rank });
            }
            edge_list.push(Edge { color, src: lookup_vertex(&src)?, rng: lookup_vertex(&rng)?, id });
        }
        let lookup_edge = |id: &str| {
            edge_index.get(id).copied().ok_or_else(|| KGraphError::UnknownId { kind: "edge", id: id.to_string() })
        };
        let mut sq = Vec::with_capacity(squares.len());
        for [e, f, fp, ep] in &squares {
            sq.push(Square { e: lookup_edge(e)?, f: lookup_edge(f)?, fp: lookup_edge(fp)?, ep: lookup_edge(ep)? });
        }
        let mut g = KGraph {
            rank,
            vertices,
            vertex_index,
            edges: edge_list,
            edge_index,
            squares: sq,
            left: HashMap::new(),
            right: HashMap::new(),
        };
        g.validate()?;
        Ok(g)
    }

    fn square_error(&self, index: usize, reason: &str) -> KGraphError {
        let s = self.squares[index];
        let id = |e: usize| self.edges[e].id.as_str();
        KGraphError::SquareTypingError {
            index,
            square: format!("({}, {}, {}, {})", id(s.e), id(s.f), id(s.fp), id(s.ep)),
            reason: reason.to_string(),
        }
    }

    fn validate(&mut self) -> Result<(), KGraphError> {
        for (idx, s) in self.squares.iter().enumerate() {
            let (e, f, fp, ep) = (&self.edges[s.e], &self.edges[s.f], &self.edges[s.fp], &self.edges[s.ep]);
            if e.color != ep.color || f.color != fp.color || e.color >= f.color {
                return Err(self.square_error(idx, "colors must satisfy color(e)=color(ep) < color(f)=color(fp)"));
            }
            let checks = [
                (f.rng == e.src, "r(f) != s(e)"),
                (fp.rng == e.rng, "r(fp) != r(e)"),
                (ep.src == f.src, "s(ep) != s(f)"),
                (ep.rng == fp.src, "r(ep) != s(fp)"),
            ];
            if let Some((_, why)) = checks.iter().find(|(ok, _)| !ok) {
                return Err(self.square_error(idx, why));
            }
        }
        let mut left = HashMap::new();
        let mut right = HashMap::new();
        for (idx, s) in self.squares.iter().enumerate() {
            if let Some(prev) = left.insert((s.e, s.f), idx) {
                return Err(KGraphError::SquareAmbiguous {
                    side: "left",
                    first: self.edges[s.e].id.clone(),
                    second: self.edges[s.f].id.clone(),
                    a: prev,
                    b: idx,
                });
            }
            if let Some(prev) = right.insert((s.fp, s.ep), idx) {
                return Err(KGraphError::SquareAmbiguous {
                    side: "right",
                    first: self.edges[s.fp].id.clone(),
                    second: self.edges[s.ep].id.clone(),
                    a: prev,
                    b: idx,
                });
            }
        }
        for (a, ea) in self.edges.iter().enumerate() {
            for (b, eb) in self.edges.iter().enumerate() {
                if ea.src != eb.rng || ea.color == eb.color {
                    continue;
                }
                let (map, side) = if ea.color < eb.color { (&left, "left") } else { (&right, "right") };
                if !map.contains_key(&(a, b)) {
                    return Err(KGraphError::SquareIncomplete { side, first: ea.id.clone(), second: eb.id.clone() });
                }
            }
        }
        self.left = left;
        self.right = right;
        if self.rank >= 3 {
            self.check_associativity()?;
        }
        Ok(())
    }

    /// Resolves every composable triple with colors `i < j < l` to order `l j i`
    /// in the two possible ways and compares.
    fn check_associativity(&self) -> Result<(), KGraphError> {
        for (a, ea) in self.edges.iter().enumerate() {
            for b in self.edges_with_range(ea.src) {
                if self.edges[b].color <= ea.color {
                    continue;
                }
                for c in self.edges_with_range(self.edges[b].src) {
                    if self.edges[c].color <= self.edges[b].color {
                        continue;
                    }
                    let mut one = [a, b, c];
                    for pos in [0, 1, 0] {
                        self.swap_pair(&mut one, pos);
                    }
                    let mut two = [a, b, c];
                    for pos in [1, 0, 1] {
                        self.swap_pair(&mut two, pos);
                    }
                    if one != two {
                        return Err(KGraphError::AssociativityViolation([
                            ea.id.clone(),
                            self.edges[b].id.clone(),
                            self.edges[c].id.clone(),
                        ]));
                    }
                }
            }
        }
        Ok(())
    }

    /// Rewrites the adjacent pair at `pos, pos+1` by its square.
    pub(crate) fn swap_pair(&self, path: &mut [usize], pos: usize) {
        let (x, y) = (path[pos], path[pos + 1]);
        let (nx, ny) = if self.edges[x].color < self.edges[y].color {
            let s = self.squares[self.left[&(x, y)]];
            (s.fp, s.ep)
        } else {
            let s = self.squares[self.right[&(x, y)]];
            (s.e, s.f)
        };
        path[pos] = nx;
        path[pos + 1] = ny;
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    pub fn vertex_id(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn edge_id(&self, i: usize) -> &str {
        &self.edges[i].id
    }

    pub fn vertex_by_id(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_by_id(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    /// Edge index by id; panics on unknown ids. Intended for tests and examples.
    pub fn e(&self, id: &str) -> usize {
        self.edge_by_id(id).unwrap_or_else(|| panic!("no edge `{id}`"))
    }

    pub fn color(&self, e: usize) -> usize {
        self.edges[e].color
    }

    pub fn src(&self, e: usize) -> usize {
        self.edges[e].src
    }

    pub fn rng(&self, e: usize) -> usize {
        self.edges[e].rng
    }

    /// Square index with `(e, f)` on the left.
    pub fn left_square(&self, e: usize, f: usize) -> Option<&Square> {
        self.left.get(&(e, f)).map(|&i| &self.squares[i])
    }

    /// Square index with `(fp, ep)` on the right.
    pub fn right_square(&self, fp: usize, ep: usize) -> Option<&Square> {
        self.right.get(&(fp, ep)).map(|&i| &self.squares[i])
    }

    pub(crate) fn edges_with_range(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().enumerate().filter(move |(_, e)| e.rng == v).map(|(i, _)| i)
    }

    /// Always true for a finite skeleton.
    pub fn is_row_finite(&self) -> bool {
        true
    }

    /// True when some vertex receives no edge of some color.
    pub fn has_sources(&self) -> bool {
        (0..self.vertices.len())
            .any(|v| (1..=self.rank).any(|c| !self.edges.iter().any(|e| e.rng == v && e.color == c)))
    }

    /// Disjoint union, ids prefixed by `a.` and `b.`.
    pub fn disjoint_union(a: &KGraph, b: &KGraph) -> Result<KGraph, KGraphError> {
        if a.rank != b.rank {
            return Err(KGraphError::InvalidSize("ranks differ".into()));
        }
        let mut spec = SkeletonSpec::from_graph(a).prefixed("a.");
        let other = SkeletonSpec::from_graph(b).prefixed("b.");
        spec.vertices.extend(other.vertices);
        spec.edges.extend(other.edges);
        spec.squares.extend(other.squares);
        spec.build()
    }
}
