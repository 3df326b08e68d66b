//! Skeleton and automorphism JSON, and DOT export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Automorphism, KGraph, KGraphError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: String,
    pub color: usize,
    pub src: String,
    pub rng: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareSpec {
    pub e: String,
    pub f: String,
    pub fp: String,
    pub ep: String,
}

/// `{"rank", "vertices", "edges", "squares"}`, with an optional provenance block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeletonSpec {
    pub rank: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub squares: Vec<SquareSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

impl SkeletonSpec {
    pub fn from_graph(g: &KGraph) -> Self {
        SkeletonSpec {
            rank: g.rank(),
            vertices: g.vertices().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    color: e.color,
                    src: g.vertex_id(e.src).to_string(),
                    rng: g.vertex_id(e.rng).to_string(),
                })
                .collect(),
            squares: g
                .squares()
                .iter()
                .map(|s| SquareSpec {
                    e: g.edge_id(s.e).to_string(),
                    f: g.edge_id(s.f).to_string(),
                    fp: g.edge_id(s.fp).to_string(),
                    ep: g.edge_id(s.ep).to_string(),
                })
                .collect(),
            provenance: None,
        }
    }

    pub fn build(&self) -> Result<KGraph, KGraphError> {
        KGraph::new(
            self.rank,
            self.vertices.clone(),
            self.edges.iter().map(|e| (e.id.clone(), e.color, e.src.clone(), e.rng.clone())).collect(),
            self.squares.iter().map(|s| [s.e.clone(), s.f.clone(), s.fp.clone(), s.ep.clone()]).collect(),
        )
    }

    pub(crate) fn prefixed(mut self, p: &str) -> Self {
        let pre = |s: &mut String| *s = format!("{p}{s}");
        self.vertices.iter_mut().for_each(pre);
        for e in &mut self.edges {
            pre(&mut e.id);
            pre(&mut e.src);
            pre(&mut e.rng);
        }
        for s in &mut self.squares {
            pre(&mut s.e);
            pre(&mut s.f);
            pre(&mut s.fp);
            pre(&mut s.ep);
        }
        self
    }
}

/// `{"vertex_map": {id: id}, "edge_map": {id: id}}`; omitted ids are fixed.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismSpec {
    #[serde(default)]
    pub vertex_map: BTreeMap<String, String>,
    #[serde(default)]
    pub edge_map: BTreeMap<String, String>,
}

impl AutomorphismSpec {
    pub fn from_automorphism(g: &KGraph, a: &Automorphism) -> Self {
        AutomorphismSpec {
            vertex_map: (0..g.vertex_count())
                .map(|v| (g.vertex_id(v).to_string(), g.vertex_id(a.vertex(v)).to_string()))
                .collect(),
            edge_map: (0..g.edge_count())
                .map(|e| (g.edge_id(e).to_string(), g.edge_id(a.edge(e)).to_string()))
                .collect(),
        }
    }

    pub fn build(&self, g: &KGraph) -> Result<Automorphism, KGraphError> {
        Automorphism::from_ids(
            g,
            self.vertex_map.iter().map(|(a, b)| (a.as_str(), b.as_str())),
            self.edge_map.iter().map(|(a, b)| (a.as_str(), b.as_str())),
        )
    }
}

const DOT_COLORS: [&str; 6] = ["blue", "red", "darkgreen", "orange", "purple", "brown"];
const DOT_STYLES: [&str; 3] = ["solid", "dashed", "dotted"];

impl KGraph {
    /// Graphviz rendering of the skeleton. Colors 1, 2, 3 are drawn solid, dashed
    /// and dotted.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph skeleton {\n  rankdir=RL;\n");
        for v in self.vertices() {
            let _ = writeln!(out, "  \"{}\";", escape(v));
        }
        for e in self.edges() {
            let c = e.color - 1;
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\", color={}, style={}];",
                escape(self.vertex_id(e.src)),
                escape(self.vertex_id(e.rng)),
                escape(&e.id),
                DOT_COLORS[c % DOT_COLORS.len()],
                DOT_STYLES[c % DOT_STYLES.len()],
            );
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
