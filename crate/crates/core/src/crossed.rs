//! The crossed product `Λ ×_β Z` and the long exact sequence relating its
//! cohomology to that of `Λ`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{build_complex, coeff_blocks, CoeffGroup, CubicalComplex};
use crate::intlinalg::{exactness_check, ExactnessVerdict, FGAbGroup, GroupHom, IntMatrix};
use crate::kgraph::{Automorphism, Cube, KGraph, KGraphError, SkeletonSpec};

/// `Λ ×_β Z` as an ordinary `(k+1)`-graph, with the correspondence of cubes.
#[derive(Debug, Clone)]
pub struct CrossedProduct {
    base: CubicalComplex,
    beta: Automorphism,
    product: CubicalComplex,
    zero_edge: Vec<usize>,
    loop_edge: Vec<usize>,
    zero_cube: Vec<Vec<usize>>,
    one_cube: Vec<Vec<usize>>,
    origin: Vec<Vec<(usize, u8)>>,
}

/// Edge ids of the product: `(e,0)` for a base edge, `(v,1)` for the loop at `v`.
pub fn zero_edge_id(e: &str) -> String {
    format!("({e},0)")
}

pub fn loop_edge_id(v: &str) -> String {
    format!("({v},1)")
}

/// Builds `Λ ×_β Z`: vertices of `Λ`, edges `(e,0)` of the same color, loops `(v,1)` of
/// color `k+1` from `β⁻¹v` to `v`, base squares, and for each edge `x` the square
/// `(x,0)(s(x),1) = (r(x),1)(β⁻¹x,0)`.
pub fn crossed_product(g: &KGraph, beta: &Automorphism) -> Result<CrossedProduct> {
    let k = g.rank();
    Automorphism::new(g, beta.vertex_map().to_vec(), beta.edge_map().to_vec())?;
    let inv = beta.inverse();
    let vid = |v: usize| g.vertex_id(v).to_string();
    let mut edges: Vec<(String, usize, String, String)> =
        g.edges().iter().map(|e| (zero_edge_id(&e.id), e.color, vid(e.src), vid(e.rng))).collect();
    for v in 0..g.vertex_count() {
        edges.push((loop_edge_id(g.vertex_id(v)), k + 1, vid(inv.vertex(v)), vid(v)));
    }
    let mut squares: Vec<[String; 4]> =
        g.squares().iter().map(|s| [s.e, s.f, s.fp, s.ep].map(|x| zero_edge_id(g.edge_id(x)))).collect();
    for (x, e) in g.edges().iter().enumerate() {
        squares.push([
            zero_edge_id(&e.id),
            loop_edge_id(g.vertex_id(e.src)),
            loop_edge_id(g.vertex_id(e.rng)),
            zero_edge_id(g.edge_id(inv.edge(x))),
        ]);
    }
    let pg = KGraph::new(k + 1, g.vertices().to_vec(), edges, squares)?;
    let base = build_complex(g)?;
    let product = build_complex(&pg)?;

    let zero_edge: Vec<usize> = (0..g.edge_count()).collect();
    let loop_edge: Vec<usize> = (0..g.vertex_count()).map(|v| g.edge_count() + v).collect();
    let mut cp = CrossedProduct {
        base,
        beta: beta.clone(),
        product,
        zero_edge,
        loop_edge,
        zero_cube: Vec::new(),
        one_cube: Vec::new(),
        origin: Vec::new(),
    };
    let mut origin: Vec<Vec<(usize, u8)>> =
        (0..=k + 1).map(|r| vec![(usize::MAX, 0); cp.product.cube_count(r)]).collect();
    for r in 0..=k {
        let mut zs = Vec::new();
        let mut os = Vec::new();
        for (i, c) in cp.base.cubes(r).iter().enumerate() {
            let z = cp.product.cube_index(r, &cp.lift_zero(c)).expect("(λ,0) is a cube");
            let o = cp.product.cube_index(r + 1, &cp.lift_one(c)).expect("(λ,1) is a cube");
            origin[r][z] = (i, 0);
            origin[r + 1][o] = (i, 1);
            zs.push(z);
            os.push(o);
        }
        cp.zero_cube.push(zs);
        cp.one_cube.push(os);
    }
    if origin.iter().flatten().any(|&(i, _)| i == usize::MAX) {
        return Err(KGraphError::InvalidSize("product has cubes outside the expected description".into()).into());
    }
    cp.origin = origin;
    Ok(cp)
}

impl CrossedProduct {
    pub fn base(&self) -> &CubicalComplex {
        &self.base
    }

    pub fn product(&self) -> &CubicalComplex {
        &self.product
    }

    pub fn base_graph(&self) -> &KGraph {
        self.base.graph()
    }

    pub fn product_graph(&self) -> &KGraph {
        self.product.graph()
    }

    pub fn beta(&self) -> &Automorphism {
        &self.beta
    }

    /// Base rank `k`.
    pub fn k(&self) -> usize {
        self.base.top()
    }

    /// Product edge `(e,0)`.
    pub fn zero_edge(&self, e: usize) -> usize {
        self.zero_edge[e]
    }

    /// Product edge `(v,1)`.
    pub fn loop_edge(&self, v: usize) -> usize {
        self.loop_edge[v]
    }

    /// `(λ, 0)` as a product cube.
    pub fn lift_zero(&self, c: &Cube) -> Cube {
        Cube { range: c.range, edges: c.edges.iter().map(|&e| self.zero_edge[e]).collect() }
    }

    /// `(λ, 1)`: the edges of `λ` followed by the loop at `s(λ)`.
    pub fn lift_one(&self, c: &Cube) -> Cube {
        let mut edges: Vec<usize> = c.edges.iter().map(|&e| self.zero_edge[e]).collect();
        edges.push(self.loop_edge[self.base_graph().cube_source(c)]);
        Cube { range: c.range, edges }
    }

    /// Index in `Q_r(Λ×_βZ)` of `(λ_i, 0)`, `λ_i ∈ Q_r(Λ)`.
    pub fn zero_index(&self, r: usize, i: usize) -> usize {
        self.zero_cube[r][i]
    }

    /// Index in `Q_{r+1}(Λ×_βZ)` of `(λ_i, 1)`, `λ_i ∈ Q_r(Λ)`.
    pub fn one_index(&self, r: usize, i: usize) -> usize {
        self.one_cube[r][i]
    }

    /// `(i, ℓ)` with product cube `p ∈ Q_r` equal to `(λ_i, ℓ)`.
    pub fn origin(&self, r: usize, p: usize) -> (usize, u8) {
        self.origin[r][p]
    }

    fn check_len<T>(&self, f: &[T], degree: usize, expected: usize) -> Result<()> {
        if f.len() != expected {
            return Err(Error::DegreeMismatch { degree, expected, found: f.len() });
        }
        Ok(())
    }

    /// `i*(f)(λ) = f(λ, 0)` on `r`-cochains of the product.
    pub fn i_star<T: Clone>(&self, f: &[T], r: usize) -> Result<Vec<T>> {
        self.check_len(f, r, self.product.cube_count(r))?;
        Ok(self.zero_cube.get(r).map_or_else(Vec::new, |zs| zs.iter().map(|&z| f[z].clone()).collect()))
    }

    /// `j*(f)(λ, 1) = f(λ)`, `j*(f)(λ, 0) = 0`, taking `r`-cochains of `Λ` to `(r+1)`-cochains.
    pub fn j_star<T: Clone + Zero>(&self, f: &[T], r: usize) -> Result<Vec<T>> {
        self.check_len(f, r, self.base.cube_count(r))?;
        let mut out = vec![T::zero(); self.product.cube_count(r + 1)];
        for (i, v) in f.iter().enumerate() {
            out[self.one_cube[r][i]] = v.clone();
        }
        Ok(out)
    }

    /// The section `σ(f)(λ, 0) = f(λ)`, `σ(f)(λ, 1) = 0`.
    pub fn sigma<T: Clone + Zero>(&self, f: &[T], r: usize) -> Result<Vec<T>> {
        self.check_len(f, r, self.base.cube_count(r))?;
        let mut out = vec![T::zero(); self.product.cube_count(r)];
        for (i, v) in f.iter().enumerate() {
            out[self.zero_cube[r][i]] = v.clone();
        }
        Ok(out)
    }

    /// `Ξ(c, g) = j*(c) + σ(g)` for `c ∈ C^r(Λ)`, `g ∈ C^{r+1}(Λ)`; requires `β = id`.
    pub fn xi_compose<T: Clone + Zero>(&self, c: &[T], g: &[T], r: usize) -> Result<Vec<T>> {
        if !self.beta.is_identity() {
            return Err(Error::BetaNotIdentity);
        }
        let a = self.j_star(c, r)?;
        let b = self.sigma(g, r + 1)?;
        Ok(a.into_iter().zip(b).map(|(x, y)| x + y).collect())
    }

    /// Inverse of [`CrossedProduct::xi_compose`]: `c(λ) = h(λ, 1)`, `g(λ) = h(λ, 0)`,
    /// for `h ∈ C^{r+1}(Λ × T_1)`.
    pub fn xi_split<T: Clone>(&self, h: &[T], r: usize) -> Result<(Vec<T>, Vec<T>)> {
        if !self.beta.is_identity() {
            return Err(Error::BetaNotIdentity);
        }
        self.check_len(h, r + 1, self.product.cube_count(r + 1))?;
        let c = self.one_cube[r].iter().map(|&p| h[p].clone()).collect();
        let g = self.zero_cube.get(r + 1).map_or_else(Vec::new, |zs| zs.iter().map(|&p| h[p].clone()).collect());
        Ok((c, g))
    }

    /// Matrix of `i*` on `r`-cochains.
    pub fn i_star_matrix(&self, r: usize) -> IntMatrix {
        let rows = self.base.cube_count(r);
        let mut m = IntMatrix::zeros(rows, self.product.cube_count(r));
        if r > self.k() {
            return m;
        }
        for i in 0..rows {
            m[(i, self.zero_cube[r][i])] = BigInt::one();
        }
        m
    }

    /// Matrix of `j*` from `r`-cochains of `Λ` to `(r+1)`-cochains of the product.
    pub fn j_star_matrix(&self, r: usize) -> IntMatrix {
        let cols = self.base.cube_count(r);
        let mut m = IntMatrix::zeros(self.product.cube_count(r + 1), cols);
        if r > self.k() {
            return m;
        }
        for i in 0..cols {
            m[(self.one_cube[r][i], i)] = BigInt::one();
        }
        m
    }

    /// Matrix of `σ` on `r`-cochains.
    pub fn sigma_matrix(&self, r: usize) -> IntMatrix {
        self.i_star_matrix(r).transpose()
    }

    /// Serializable skeleton with a provenance block.
    pub fn to_spec(&self) -> SkeletonSpec {
        let g = self.base_graph();
        let mut spec = SkeletonSpec::from_graph(self.product_graph());
        let base_edge: serde_json::Map<String, serde_json::Value> =
            g.edges().iter().map(|e| (zero_edge_id(&e.id), e.id.clone().into())).collect();
        let loops: serde_json::Map<String, serde_json::Value> =
            g.vertices().iter().map(|v| (loop_edge_id(v), v.clone().into())).collect();
        spec.provenance = Some(serde_json::json!({
            "base_edge": base_edge,
            "z_loop_vertex": loops,
            "beta": crate::kgraph::AutomorphismSpec::from_automorphism(g, &self.beta),
        }));
        spec
    }
}

/// Which map is placed between `H^r(Λ)` and `H^r(Λ)` in the sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConnectingConvention {
    /// `δ_E^r = (-1)^{r+1} (1 - (β⁻¹)*)`, the connecting map of the short exact sequence.
    DeltaE,
    /// `1 - β*`.
    OneMinusBetaStar,
}

impl ConnectingConvention {
    pub fn label(self) -> &'static str {
        match self {
            ConnectingConvention::DeltaE => "delta_E",
            ConnectingConvention::OneMinusBetaStar => "1-beta*",
        }
    }
}

/// The cochain-level matrix of the connecting map on `C^r(Λ, A)`.
pub fn connecting_cochain_matrix(
    cp: &CrossedProduct,
    r: usize,
    coeff: &CoeffGroup,
    conv: ConnectingConvention,
) -> IntMatrix {
    let n = cp.base.cube_count(r);
    let id = IntMatrix::identity(n);
    let m = match conv {
        ConnectingConvention::OneMinusBetaStar => id.sub(&cp.base.cube_permutation(&cp.beta, r).transpose()),
        ConnectingConvention::DeltaE => {
            let inv = cp.beta.inverse();
            let d = id.sub(&cp.base.cube_permutation(&inv, r).transpose());
            if r.is_multiple_of(2) {
                d.neg()
            } else {
                d
            }
        }
    };
    coeff_blocks(&m, coeff.cyclic_orders().len())
}

/// The map `H^r(Λ, A) -> H^r(Λ, A)` in the chosen convention.
pub fn connecting_map(
    cp: &CrossedProduct,
    r: usize,
    coeff: &CoeffGroup,
    conv: ConnectingConvention,
) -> Result<GroupHom> {
    let h = cp.base.cohomology_group(r, coeff)?;
    let t = connecting_cochain_matrix(cp, r, coeff, conv);
    Ok(crate::intlinalg::induced_map(&t, &h, &h)?)
}

/// The connecting map computed from its definition: lift a cocycle `m` by
/// `n(λ,0) = m(λ)`, `n(λ,1) = 0`, and read `c(λ) = δn(λ,1)`.
pub fn snake_connecting_map(cp: &CrossedProduct, r: usize, coeff: &CoeffGroup) -> Result<GroupHom> {
    let h = cp.base.cohomology_group(r, coeff)?;
    let lift = cp.sigma_matrix(r);
    let delta = cp.product.coboundary(r);
    let read = cp.j_star_matrix(r).transpose();
    let t = &(&read * &delta) * &lift;
    let t = coeff_blocks(&t, coeff.cyclic_orders().len());
    Ok(crate::intlinalg::induced_map(&t, &h, &h)?)
}

/// `i*: H^r(Λ×_βZ, A) -> H^r(Λ, A)`.
pub fn i_star_on_cohomology(cp: &CrossedProduct, r: usize, coeff: &CoeffGroup) -> Result<GroupHom> {
    let src = cp.product.cohomology_group(r, coeff)?;
    let dst = cp.base.cohomology_group(r, coeff)?;
    let t = coeff_blocks(&cp.i_star_matrix(r), coeff.cyclic_orders().len());
    Ok(crate::intlinalg::induced_map(&t, &src, &dst)?)
}

/// `j*: H^r(Λ, A) -> H^{r+1}(Λ×_βZ, A)`.
pub fn j_star_on_cohomology(cp: &CrossedProduct, r: usize, coeff: &CoeffGroup) -> Result<GroupHom> {
    let src = cp.base.cohomology_group(r, coeff)?;
    let dst = cp.product.cohomology_group(r + 1, coeff)?;
    let t = coeff_blocks(&cp.j_star_matrix(r), coeff.cyclic_orders().len());
    Ok(crate::intlinalg::induced_map(&t, &src, &dst)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct LesNode {
    pub label: String,
    pub group: FGAbGroup,
    pub verdict: ExactnessVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct LesMap {
    pub name: String,
    pub from: String,
    pub to: String,
    pub hom: GroupHom,
}

/// Groups forced by the sequence in one degree: `0 -> coker -> H -> ker -> 0`.
#[derive(Debug, Clone, Serialize)]
pub struct ForcedGroup {
    pub degree: usize,
    pub direct: FGAbGroup,
    pub cokernel: FGAbGroup,
    pub kernel: FGAbGroup,
    /// `coker ⊕ ker`, which is the middle group whenever the extension splits.
    pub split: FGAbGroup,
    /// Ranks add up and, for finite groups, orders multiply.
    pub consistent: bool,
    /// The kernel is free, so the extension splits and `split` must equal `direct`.
    pub split_certain: bool,
    pub agrees: bool,
}

impl ForcedGroup {
    fn new(degree: usize, direct: FGAbGroup, cokernel: FGAbGroup, kernel: FGAbGroup, split_certain: bool) -> Self {
        let mut orders = cokernel.orders.clone();
        orders.extend(kernel.orders.iter().cloned());
        let split = FGAbGroup::from_cyclic_orders(&orders);
        let rank_ok = direct.free_rank == cokernel.free_rank + kernel.free_rank;
        let order_ok = match (direct.order(), cokernel.order(), kernel.order()) {
            (Some(d), Some(c), Some(k)) => d == c * k,
            _ => {
                let t = |g: &FGAbGroup| -> BigInt { g.invariant_factors.iter().product() };
                !split_certain || t(&direct) == t(&cokernel) * t(&kernel)
            }
        };
        let consistent = rank_ok && order_ok;
        let agrees = consistent && (!split_certain || split == direct);
        ForcedGroup { degree, direct, cokernel, kernel, split, consistent, split_certain, agrees }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LesReport {
    pub coeff: String,
    pub convention: ConnectingConvention,
    pub nodes: Vec<LesNode>,
    pub maps: Vec<LesMap>,
    pub forced: Vec<ForcedGroup>,
    pub all_exact: bool,
}

/// Computes every group and map of the sequence
/// `0 -> H^0(P) -> H^0(Λ) -> H^0(Λ) -> H^1(P) -> ... -> H^k(Λ) -> H^{k+1}(P) -> 0`
/// for `P = Λ×_βZ`, and checks exactness at every node.
pub fn les_assemble(cp: &CrossedProduct, coeff: &CoeffGroup, conv: ConnectingConvention) -> Result<LesReport> {
    if matches!(coeff, CoeffGroup::Circle) {
        return Err(Error::InvalidCoefficients("the sequence is assembled for Z, Z/m and f.g. coefficients".into()));
    }
    let k = cp.k();
    let mut maps = Vec::new();
    let mut groups = Vec::new();
    for r in 0..=k {
        let i = i_star_on_cohomology(cp, r, coeff)?;
        let c = connecting_map(cp, r, coeff, conv)?;
        let j = j_star_on_cohomology(cp, r, coeff)?;
        let (p, b) = (format!("H^{r}(P)"), format!("H^{r}(L)"));
        groups.push((p.clone(), i.source.clone()));
        groups.push((format!("{b} "), i.target.clone()));
        groups.push((format!("{b}  "), c.target.clone()));
        maps.push(LesMap { name: "i*".into(), from: p, to: b.clone(), hom: i });
        maps.push(LesMap { name: conv.label().into(), from: b.clone(), to: b.clone(), hom: c });
        maps.push(LesMap { name: "j*".into(), from: b, to: format!("H^{}(P)", r + 1), hom: j });
    }
    groups.push((format!("H^{}(P)", k + 1), maps.last().expect("k >= 1").hom.target.clone()));

    let trivial = FGAbGroup::zero();
    let verdicts: Vec<Result<ExactnessVerdict>> = (0..groups.len())
        .into_par_iter()
        .map(|t| {
            let g = &groups[t].1;
            let incoming = match t {
                0 => GroupHom::zero(trivial.clone(), g.clone()),
                _ => maps[t - 1].hom.clone(),
            };
            let outgoing = match maps.get(t) {
                Some(m) => m.hom.clone(),
                None => GroupHom::zero(g.clone(), trivial.clone()),
            };
            Ok(exactness_check(&incoming, &outgoing)?)
        })
        .collect();
    let mut nodes = Vec::with_capacity(groups.len());
    for ((label, group), v) in groups.into_iter().zip(verdicts) {
        nodes.push(LesNode { label: label.trim_end().to_string(), group, verdict: v? });
    }
    let all_exact = nodes.iter().all(|n| n.verdict.exact);

    let mut forced = Vec::new();
    for r in 0..=k + 1 {
        let direct = cp.product.cohomology_group(r, coeff)?;
        let cokernel = match r {
            0 => FGAbGroup::zero(),
            _ => maps[3 * (r - 1) + 1].hom.cokernel(),
        };
        let kernel = match maps.get(3 * r + 1) {
            Some(m) => m.hom.kernel(),
            None => FGAbGroup::zero(),
        };
        let split_certain = matches!(coeff, CoeffGroup::Z) && kernel.invariant_factors.is_empty();
        forced.push(ForcedGroup::new(r, direct, cokernel, kernel, split_certain));
    }
    Ok(LesReport { coeff: coeff.to_string(), convention: conv, nodes, maps, forced, all_exact })
}

/// `H_n(Λ×_βZ)` forced by the homology sequence
/// `H_n(Λ) --(1-β_*)--> H_n(Λ) -> H_n(P) -> H_{n-1}(Λ) --(1-β_*)--> H_{n-1}(Λ)`,
/// compared with the direct computation.
pub fn les_forced_homology(cp: &CrossedProduct, n: usize) -> Result<ForcedGroup> {
    let one_minus = |r: usize| -> Result<GroupHom> {
        let b = cp.base.beta_lower_star(&cp.beta, r)?;
        Ok(GroupHom::identity(b.source.clone()).sub(&b)?)
    };
    let cokernel = if n <= cp.k() { one_minus(n)?.cokernel() } else { FGAbGroup::zero() };
    let kernel = if n >= 1 && n - 1 <= cp.k() { one_minus(n - 1)?.kernel() } else { FGAbGroup::zero() };
    let split_certain = kernel.invariant_factors.is_empty();
    Ok(ForcedGroup::new(n, cp.product.homology(n)?, cokernel, kernel, split_certain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kgraph::{build_bouquet, ftheta, ftheta_beta};

    #[test]
    fn cube_counts_of_theta_product() {
        let g = ftheta();
        let cp = crossed_product(&g, &ftheta_beta(&g)).unwrap();
        let counts: Vec<usize> = (0..=3).map(|r| cp.product().cube_count(r)).collect();
        assert_eq!(counts, vec![1, 6, 11, 6]);
    }

    #[test]
    fn xi_needs_identity() {
        let g = ftheta();
        let cp = crossed_product(&g, &ftheta_beta(&g)).unwrap();
        let c = vec![BigInt::zero(); 5];
        let d = vec![BigInt::zero(); 6];
        assert!(matches!(cp.xi_compose(&c, &d, 1), Err(Error::BetaNotIdentity)));
        let b = build_bouquet(2).unwrap();
        let cp = crossed_product(&b, &Automorphism::identity(&b)).unwrap();
        assert_eq!(cp.product_graph().squares().len(), 2);
    }

    #[test]
    fn degree_mismatch() {
        let b = build_bouquet(2).unwrap();
        let cp = crossed_product(&b, &Automorphism::identity(&b)).unwrap();
        assert!(matches!(cp.i_star(&[BigInt::zero()], 1), Err(Error::DegreeMismatch { .. })));
    }
}
