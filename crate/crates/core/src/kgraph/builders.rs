use super::{Automorphism, KGraph, KGraphError};

/// A permutation of `m x n` as a list of `((i, j), (i', j'))` pairs.
/// `((i, j), θ(i, j))`.
pub type ThetaPair = ((usize, usize), (usize, usize));
pub type ThetaPerm = Vec<ThetaPair>;

/// Tabulates `theta` on `0..m x 0..n`.
pub fn theta_from_fn(m: usize, n: usize, theta: impl Fn(usize, usize) -> (usize, usize)) -> ThetaPerm {
    let mut out = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            out.push(((i, j), theta(i, j)));
        }
    }
    out
}

/// `B_n`: one vertex `v`, loops `f1..fn` of color 1.
pub fn build_bouquet(n: usize) -> Result<KGraph, KGraphError> {
    if n == 0 {
        return Err(KGraphError::InvalidSize("a bouquet needs at least one edge".into()));
    }
    let edges = (1..=n).map(|i| (format!("f{i}"), 1, "v".to_string(), "v".to_string())).collect();
    KGraph::new(1, vec!["v".into()], edges, Vec::new())
}

/// Single-vertex 2-graph with edges `f0..f{m-1}` (color 1), `g0..g{n-1}` (color 2)
/// and squares `f_i g_j = g_j' f_i'` for `theta(i, j) = (i', j')`.
pub fn build_theta_graph(m: usize, n: usize, theta: &[ThetaPair]) -> Result<KGraph, KGraphError> {
    if m == 0 || n == 0 {
        return Err(KGraphError::InvalidSize("m and n must be positive".into()));
    }
    let mut dom = vec![false; m * n];
    let mut img = vec![false; m * n];
    for &((i, j), (i2, j2)) in theta {
        if i >= m || j >= n || i2 >= m || j2 >= n {
            return Err(KGraphError::NotABijection(format!("({i},{j}) -> ({i2},{j2}) is out of range")));
        }
        if std::mem::replace(&mut dom[i * n + j], true) {
            return Err(KGraphError::NotABijection(format!("({i},{j}) is listed twice")));
        }
        if std::mem::replace(&mut img[i2 * n + j2], true) {
            return Err(KGraphError::NotABijection(format!("({i2},{j2}) is hit twice")));
        }
    }
    if let Some(k) = dom.iter().position(|x| !x) {
        return Err(KGraphError::NotABijection(format!("({},{}) has no image", k / n, k % n)));
    }
    let v = || "v".to_string();
    let mut edges: Vec<_> = (0..m).map(|i| (format!("f{i}"), 1, v(), v())).collect();
    edges.extend((0..n).map(|j| (format!("g{j}"), 2, v(), v())));
    let squares = theta
        .iter()
        .map(|&((i, j), (i2, j2))| [format!("f{i}"), format!("g{j}"), format!("g{j2}"), format!("f{i2}")])
        .collect();
    KGraph::new(2, vec![v()], edges, squares)
}

/// `F_θ^+` with `θ(i, j) = (i+1 mod 2, j+1 mod 3)`.
pub fn ftheta() -> KGraph {
    build_theta_graph(2, 3, &theta_from_fn(2, 3, |i, j| ((i + 1) % 2, (j + 1) % 3)))
        .expect("the cyclic theta is a bijection")
}

/// The automorphism `f0 <-> f1`, `g0 -> g1 -> g2 -> g0` of [`ftheta`].
pub fn ftheta_beta(g: &KGraph) -> Automorphism {
    product_automorphism(g, &[1, 0], &[1, 2, 0]).expect("the cyclic permutations commute with theta")
}

/// `f_i -> f_{s1(i)}`, `g_j -> g_{s2(j)}` on a theta graph; valid iff it commutes with theta.
pub fn product_automorphism(g: &KGraph, s1: &[usize], s2: &[usize]) -> Result<Automorphism, KGraphError> {
    let mut edge_map = vec![0; g.edge_count()];
    for (e, slot) in edge_map.iter_mut().enumerate() {
        let id = g.edge_id(e);
        let (prefix, perm) = match &id[..1] {
            "f" => ("f", s1),
            "g" => ("g", s2),
            _ => return Err(KGraphError::InvalidAutomorphism(format!("`{id}` is not a theta-graph edge"))),
        };
        let i: usize = id[1..]
            .parse()
            .map_err(|_| KGraphError::InvalidAutomorphism(format!("`{id}` is not a theta-graph edge")))?;
        let target = perm.get(i).ok_or_else(|| KGraphError::InvalidAutomorphism(format!("no image for `{id}`")))?;
        *slot = g
            .edge_by_id(&format!("{prefix}{target}"))
            .ok_or_else(|| KGraphError::InvalidAutomorphism(format!("no edge {prefix}{target}")))?;
    }
    Automorphism::new(g, (0..g.vertex_count()).collect(), edge_map)
}

/// Truncated tower: vertices `v1..vN`, edges `e{n}_{j}` for `1 <= j <= n < N` from
/// `v{n+1}` to `v{n}`, with `β(e{n}_{j}) = e{n}_{j+1}` (indices mod n) fixing vertices.
pub fn build_tower(levels: usize) -> Result<(KGraph, Automorphism), KGraphError> {
    if levels < 2 {
        return Err(KGraphError::InvalidSize("a tower needs at least two levels".into()));
    }
    let vertices: Vec<String> = (1..=levels).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    let mut shift = Vec::new();
    for n in 1..levels {
        for j in 1..=n {
            edges.push((format!("e{n}_{j}"), 1, format!("v{}", n + 1), format!("v{n}")));
            shift.push((format!("e{n}_{j}"), format!("e{n}_{}", j % n + 1)));
        }
    }
    let g = KGraph::new(1, vertices, edges, Vec::new())?;
    let beta = Automorphism::from_ids(&g, [], shift.iter().map(|(a, b)| (a.as_str(), b.as_str())))?;
    Ok((g, beta))
}
