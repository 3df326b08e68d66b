use super::{KGraph, KGraphError};

/// A morphism written as a composable edge list `g_1 g_2 ... g_r`, with
/// `range` = r(g_1). An empty edge list is the vertex `range`.
///
/// As an element of `Q_r` the edges have strictly increasing colors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pub range: usize,
    pub edges: Vec<usize>,
}

/// Paths of arbitrary degree share the representation.
pub type Path = Cube;

impl Cube {
    pub fn vertex(v: usize) -> Self {
        Cube { range: v, edges: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.edges.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }
}

impl KGraph {
    pub fn is_composable(&self, edges: &[usize]) -> bool {
        edges.windows(2).all(|w| self.src(w[0]) == self.rng(w[1]))
    }

    fn require_composable(&self, edges: &[usize]) -> Result<(), KGraphError> {
        if let Some(i) = edges.iter().position(|&e| e >= self.edge_count()) {
            return Err(KGraphError::NotComposable(format!("edge index {} is unknown", edges[i])));
        }
        if let Some(w) = edges.windows(2).find(|w| self.src(w[0]) != self.rng(w[1])) {
            return Err(KGraphError::NotComposable(format!("s({}) != r({})", self.edge_id(w[0]), self.edge_id(w[1]))));
        }
        Ok(())
    }

    /// Refactors `edges` so its colors read `target`, by repeated square moves.
    ///
    /// `target` must be a rearrangement of the input colors; edges of equal
    /// color keep their relative order.
    pub fn shuffle(&self, edges: &[usize], target: &[usize]) -> Result<Vec<usize>, KGraphError> {
        self.require_composable(edges)?;
        let colors: Vec<usize> = edges.iter().map(|&e| self.color(e)).collect();
        let mut a = colors.clone();
        let mut b = target.to_vec();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(KGraphError::NotABijection(format!("target colors {target:?} do not rearrange {colors:?}")));
        }
        // key of the q-th occurrence of color c = slot of the q-th c in target
        let mut slots: Vec<Vec<usize>> = vec![Vec::new(); self.rank + 1];
        for (pos, &c) in target.iter().enumerate().rev() {
            slots[c].push(pos);
        }
        let mut keys: Vec<usize> = colors.iter().map(|&c| slots[c].pop().unwrap()).collect();
        let mut path = edges.to_vec();
        let n = path.len();
        for pass in 0..n {
            let mut moved = false;
            for i in 0..n.saturating_sub(1 + pass) {
                if keys[i] > keys[i + 1] {
                    self.swap_pair(&mut path, i);
                    keys.swap(i, i + 1);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
        Ok(path)
    }

    /// Color-sorted form of a composable edge list.
    pub fn canonicalize(&self, edges: &[usize]) -> Result<Vec<usize>, KGraphError> {
        let mut target: Vec<usize> = edges.iter().map(|&e| self.color(e)).collect();
        target.sort_unstable();
        self.shuffle(edges, &target)
    }

    /// Canonical cube from any composable edge list with distinct colors.
    pub fn cube_from_edges(&self, edges: &[usize]) -> Result<Cube, KGraphError> {
        let canon = self.canonicalize(edges)?;
        if canon.windows(2).any(|w| self.color(w[0]) == self.color(w[1])) {
            return Err(KGraphError::NotComposable("repeated color in a cube".into()));
        }
        match canon.first() {
            Some(&g) => Ok(Cube { range: self.rng(g), edges: canon }),
            None => Err(KGraphError::InvalidSize("use Cube::vertex for 0-cubes".into())),
        }
    }

    pub fn cube_colors(&self, c: &Cube) -> Vec<usize> {
        c.edges.iter().map(|&e| self.color(e)).collect()
    }

    pub fn cube_source(&self, c: &Cube) -> usize {
        c.edges.last().map_or(c.range, |&e| self.src(e))
    }

    /// Edge ids joined by `*`, or the vertex id for a 0-cube.
    pub fn cube_id(&self, c: &Cube) -> String {
        if c.is_vertex() {
            self.vertex_id(c.range).to_string()
        } else {
            c.edges.iter().map(|&e| self.edge_id(e)).collect::<Vec<_>>().join("*")
        }
    }

    /// Parses a cube id as written by [`KGraph::cube_id`]; any factorization order is accepted.
    pub fn parse_cube(&self, id: &str) -> Result<Cube, KGraphError> {
        if let Some(v) = self.vertex_by_id(id) {
            return Ok(Cube::vertex(v));
        }
        let edges = id
            .split('*')
            .map(|s| {
                self.edge_by_id(s.trim())
                    .ok_or_else(|| KGraphError::UnknownId { kind: "edge", id: s.trim().to_string() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.cube_from_edges(&edges)
    }

    /// `Q_r`, ordered lexicographically by color set, then by edge indices.
    pub fn enumerate_cubes(&self, r: usize) -> Vec<Cube> {
        if r == 0 {
            return (0..self.vertex_count()).map(Cube::vertex).collect();
        }
        if r > self.rank() {
            return Vec::new();
        }
        let mut by_color: Vec<Vec<usize>> = vec![Vec::new(); self.rank() + 1];
        for (i, e) in self.edges().iter().enumerate() {
            by_color[e.color].push(i);
        }
        let mut out = Vec::new();
        for colors in color_subsets(self.rank(), r) {
            let mut stack = Vec::with_capacity(r);
            self.extend_cubes(&colors, &by_color, &mut stack, &mut out);
        }
        out
    }

    fn extend_cubes(&self, colors: &[usize], by_color: &[Vec<usize>], stack: &mut Vec<usize>, out: &mut Vec<Cube>) {
        let depth = stack.len();
        if depth == colors.len() {
            out.push(Cube { range: self.rng(stack[0]), edges: stack.clone() });
            return;
        }
        for &g in &by_color[colors[depth]] {
            if depth > 0 && self.src(stack[depth - 1]) != self.rng(g) {
                continue;
            }
            stack.push(g);
            self.extend_cubes(colors, by_color, stack, out);
            stack.pop();
        }
    }

    /// `F_j^l`: for `l = 0` moves the color `i_j` edge last and drops it, for `l = 1`
    /// moves it first and drops it. `j` is 1-based.
    pub fn face(&self, c: &Cube, j: usize, l: u8) -> Result<Cube, KGraphError> {
        let r = c.dim();
        if j == 0 || j > r {
            return Err(KGraphError::IndexOutOfRange { index: j, max: r });
        }
        let colors = self.cube_colors(c);
        let moved = colors[j - 1];
        let mut rest: Vec<usize> = colors.iter().copied().filter(|&x| x != moved).collect();
        let (path, range) = if l == 0 {
            rest.push(moved);
            let mut p = self.shuffle(&c.edges, &rest)?;
            p.pop();
            (p, c.range)
        } else {
            rest.insert(0, moved);
            let mut p = self.shuffle(&c.edges, &rest)?;
            let first = p.remove(0);
            (p, self.src(first))
        };
        let range = path.first().map_or(range, |&g| self.rng(g));
        Ok(Cube { range, edges: path })
    }

    /// All paths of degree `degree` with range `v`, in canonical color-sorted form.
    pub fn paths_of_degree(&self, v: usize, degree: &[usize]) -> PathIter<'_> {
        let colors: Vec<usize> = degree.iter().enumerate().flat_map(|(i, &d)| std::iter::repeat_n(i + 1, d)).collect();
        PathIter::new(self, v, colors)
    }

    /// The segment `λ(m, m + p)` of a canonical path of degree `d ≥ m + p`.
    pub fn segment(&self, path: &Cube, m: &[usize], p: &[usize]) -> Result<Cube, KGraphError> {
        let colors = self.cube_colors(path);
        let mut d = vec![0usize; self.rank() + 1];
        for &c in &colors {
            d[c] += 1;
        }
        let mut target = Vec::with_capacity(colors.len());
        let mut lead = 0;
        let mut mid = 0;
        for (i, (&mi, &pi)) in m.iter().zip(p).enumerate() {
            if mi + pi > d[i + 1] {
                return Err(KGraphError::InvalidSize("segment exceeds the degree of the path".into()));
            }
            lead += mi;
            mid += pi;
        }
        for (i, &mi) in m.iter().enumerate() {
            target.extend(std::iter::repeat_n(i + 1, mi));
        }
        for (i, &pi) in p.iter().enumerate() {
            target.extend(std::iter::repeat_n(i + 1, pi));
        }
        for c in 1..=self.rank() {
            let used = m[c - 1] + p[c - 1];
            target.extend(std::iter::repeat_n(c, d[c] - used));
        }
        let reordered = self.shuffle(&path.edges, &target)?;
        let seg = reordered[lead..lead + mid].to_vec();
        let range = match (seg.first(), lead) {
            (Some(&g), _) => self.rng(g),
            (None, 0) => path.range,
            (None, _) => self.src(reordered[lead - 1]),
        };
        Ok(Cube { range, edges: seg })
    }
}

/// Lexicographic `r`-subsets of `1..=k`.
fn color_subsets(k: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn go(start: usize, k: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for c in start..=k {
            cur.push(c);
            go(c + 1, k, r, cur, out);
            cur.pop();
        }
    }
    go(1, k, r, &mut cur, &mut out);
    out
}

/// Depth-first enumeration of composable edge lists with a fixed color sequence.
pub struct PathIter<'a> {
    g: &'a KGraph,
    v: usize,
    colors: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    cursor: Vec<usize>,
    started: bool,
    done: bool,
}

impl<'a> PathIter<'a> {
    fn new(g: &'a KGraph, v: usize, colors: Vec<usize>) -> Self {
        PathIter { g, v, colors, candidates: Vec::new(), cursor: Vec::new(), started: false, done: false }
    }

    fn options(&self, depth: usize) -> Vec<usize> {
        let range = if depth == 0 {
            self.v
        } else {
            let prev = self.candidates[depth - 1][self.cursor[depth - 1]];
            self.g.src(prev)
        };
        let c = self.colors[depth];
        self.g.edges_with_range(range).filter(|&e| self.g.color(e) == c).collect()
    }

    /// Fills levels from `depth` downwards with first choices; false on a dead end.
    fn descend(&mut self, mut depth: usize) -> bool {
        while depth < self.colors.len() {
            let opts = self.options(depth);
            if opts.is_empty() {
                return false;
            }
            self.candidates.truncate(depth);
            self.cursor.truncate(depth);
            self.candidates.push(opts);
            self.cursor.push(0);
            depth += 1;
        }
        true
    }

    /// Advances to the next full assignment.
    fn advance(&mut self) -> bool {
        loop {
            let Some(depth) = (0..self.cursor.len()).rev().find(|&d| self.cursor[d] + 1 < self.candidates[d].len())
            else {
                return false;
            };
            self.cursor[depth] += 1;
            self.candidates.truncate(depth + 1);
            self.cursor.truncate(depth + 1);
            if self.descend(depth + 1) {
                return true;
            }
        }
    }
}

impl Iterator for PathIter<'_> {
    type Item = Cube;

    fn next(&mut self) -> Option<Cube> {
        if self.done {
            return None;
        }
        let ok = if self.started {
            self.advance()
        } else {
            self.started = true;
            self.descend(0) || self.advance()
        };
        if !ok {
            self.done = true;
            return None;
        }
        let edges: Vec<usize> = self.candidates.iter().zip(&self.cursor).map(|(c, &i)| c[i]).collect();
        if edges.is_empty() {
            self.done = true;
        }
        Some(Cube { range: self.v, edges })
    }
}
