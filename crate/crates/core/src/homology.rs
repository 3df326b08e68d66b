//! Cubical chain and cochain complexes of a k-graph.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intlinalg::{
    bigint_json, ext_group, hom_group, homology_of_pair, induced_map, kernel_basis, kernel_lattice_mod,
    quotient_lattice, FGAbGroup, GroupHom, IntMatrix,
};
use crate::kgraph::{Automorphism, Cube, KGraph};

/// Cubes `Q_0..Q_k` and boundary matrices `∂_1..∂_k`.
#[derive(Debug, Clone)]
pub struct CubicalComplex {
    graph: KGraph,
    cubes: Vec<Vec<Cube>>,
    index: Vec<HashMap<Cube, usize>>,
    /// `boundaries[r]` is `∂_r : C_r -> C_{r-1}` for `1 <= r <= k`; entry 0 is `0 x |Q_0|`.
    boundaries: Vec<IntMatrix>,
}

/// Builds the complex, checking `∂ ∘ ∂ = 0`.
pub fn build_complex(g: &KGraph) -> Result<CubicalComplex> {
    let k = g.rank();
    let cubes: Vec<Vec<Cube>> = (0..=k).map(|r| g.enumerate_cubes(r)).collect();
    let index: Vec<HashMap<Cube, usize>> =
        cubes.iter().map(|q| q.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect()).collect();
    let mut boundaries = vec![IntMatrix::zeros(0, cubes[0].len())];
    for r in 1..=k {
        let mut d = IntMatrix::zeros(cubes[r - 1].len(), cubes[r].len());
        for (col, c) in cubes[r].iter().enumerate() {
            for j in 1..=r {
                for l in 0..=1u8 {
                    let face = g.face(c, j, l)?;
                    let row = index[r - 1][&face];
                    let sign = if (j + l as usize).is_multiple_of(2) { 1 } else { -1 };
                    d[(row, col)] += sign;
                }
            }
        }
        boundaries.push(d);
    }
    for r in 1..k {
        if !(&boundaries[r] * &boundaries[r + 1]).is_zero() {
            return Err(crate::intlinalg::LinAlgError::NotAComplex.into());
        }
    }
    Ok(CubicalComplex { graph: g.clone(), cubes, index, boundaries })
}

impl CubicalComplex {
    pub fn graph(&self) -> &KGraph {
        &self.graph
    }

    pub fn top(&self) -> usize {
        self.graph.rank()
    }

    /// `Q_r`, empty beyond the top dimension.
    pub fn cubes(&self, r: usize) -> &[Cube] {
        self.cubes.get(r).map_or(&[], |v| v.as_slice())
    }

    pub fn cube_count(&self, r: usize) -> usize {
        self.cubes(r).len()
    }

    pub fn cube_index(&self, r: usize, c: &Cube) -> Option<usize> {
        self.index.get(r)?.get(c).copied()
    }

    pub fn cube_ids(&self, r: usize) -> Vec<String> {
        self.cubes(r).iter().map(|c| self.graph.cube_id(c)).collect()
    }

    /// `∂_r : C_r -> C_{r-1}`; zero maps outside `1..=k`.
    pub fn boundary(&self, r: usize) -> IntMatrix {
        if r == 0 {
            IntMatrix::zeros(0, self.cube_count(0))
        } else if r <= self.top() {
            self.boundaries[r].clone()
        } else {
            IntMatrix::zeros(self.cube_count(r - 1), self.cube_count(r))
        }
    }

    /// `δ^r = ∂_{r+1}^T : C^r -> C^{r+1}`.
    pub fn coboundary(&self, r: usize) -> IntMatrix {
        self.boundary(r + 1).transpose()
    }

    /// Chain with the given coefficients on cube ids (any factorization order).
    pub fn chain(&self, r: usize, terms: &[(i64, &str)]) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.cube_count(r)];
        for &(c, id) in terms {
            let cube = self.graph.parse_cube(id)?;
            let i = self.cube_index(r, &cube).ok_or_else(|| Error::Input(format!("`{id}` is not a {r}-cube")))?;
            v[i] += c;
        }
        Ok(v)
    }

    /// `P[βλ][λ] = 1` on `C_r`.
    pub fn cube_permutation(&self, beta: &Automorphism, r: usize) -> IntMatrix {
        let n = self.cube_count(r);
        let mut p = IntMatrix::zeros(n, n);
        for (i, c) in self.cubes(r).iter().enumerate() {
            let j = self.index[r][&beta.apply_cube(c)];
            p[(j, i)] = BigInt::one();
        }
        p
    }

    /// `H_r(Λ)` with cycle representatives.
    pub fn homology(&self, r: usize) -> Result<FGAbGroup> {
        if r > self.top() {
            return Ok(FGAbGroup::zero());
        }
        Ok(homology_of_pair(&self.boundary(r), &self.boundary(r + 1))?)
    }

    /// `H_r(Λ, A) = ker(∂_r ⊗ A) / im(∂_{r+1} ⊗ A)` for finitely generated `A`.
    pub fn homology_with(&self, r: usize, coeff: &CoeffGroup) -> Result<FGAbGroup> {
        if matches!(coeff, CoeffGroup::Circle) {
            return Err(Error::InvalidCoefficients("homology takes finitely generated coefficients".into()));
        }
        if r > self.top() {
            return Ok(FGAbGroup::zero());
        }
        cochain_subquotient(&self.boundary(r), &self.boundary(r + 1), &coeff.cyclic_orders())
    }

    /// `H^r(Λ, A)` by direct computation; circle coefficients go through [`cohomology_uct`].
    pub fn cohomology(&self, r: usize, coeff: &CoeffGroup) -> Result<Cohomology> {
        if matches!(coeff, CoeffGroup::Circle) {
            return cohomology_uct(self, r, coeff);
        }
        if r > self.top() {
            return Ok(Cohomology::Group(FGAbGroup::zero()));
        }
        let orders = coeff.cyclic_orders();
        let delta_out = self.coboundary(r);
        let delta_in = if r == 0 { IntMatrix::zeros(self.cube_count(0), 0) } else { self.coboundary(r - 1) };
        Ok(Cohomology::Group(cochain_subquotient(&delta_out, &delta_in, &orders)?))
    }

    /// `H^r(Λ, A)` for a non-circle `A`, panicking on circle coefficients.
    pub fn cohomology_group(&self, r: usize, coeff: &CoeffGroup) -> Result<FGAbGroup> {
        match self.cohomology(r, coeff)? {
            Cohomology::Group(g) => Ok(g),
            Cohomology::Circle(_) => Err(Error::InvalidCoefficients("T has no direct cochain model".into())),
        }
    }

    /// `β^*` on `H^r(Λ, A)`, induced by `f ↦ f ∘ β`.
    pub fn beta_star(&self, beta: &Automorphism, r: usize, coeff: &CoeffGroup) -> Result<GroupHom> {
        let h = self.cohomology_group(r, coeff)?;
        if r > self.top() {
            return Ok(GroupHom::identity(h));
        }
        let p = self.cube_permutation(beta, r).transpose();
        let t = coeff_blocks(&p, coeff.cyclic_orders().len());
        Ok(induced_map(&t, &h, &h)?)
    }

    /// `β_*` on `H_r(Λ)`, induced by the cube permutation.
    pub fn beta_lower_star(&self, beta: &Automorphism, r: usize) -> Result<GroupHom> {
        let h = self.homology(r)?;
        if r > self.top() {
            return Ok(GroupHom::identity(h));
        }
        Ok(induced_map(&self.cube_permutation(beta, r), &h, &h)?)
    }
}

/// `Z/B` where `Z = ker δ_out` and `B = im δ_in`, taken summand by summand over
/// cyclic coefficient orders (`0` for `Z`) and stacked block-diagonally.
pub fn cochain_subquotient(delta_out: &IntMatrix, delta_in: &IntMatrix, orders: &[BigInt]) -> Result<FGAbGroup> {
    let n = delta_out.cols();
    let mut zs = Vec::with_capacity(orders.len());
    let mut bs = Vec::with_capacity(orders.len());
    for o in orders {
        if o.is_zero() {
            zs.push(kernel_basis(delta_out));
            bs.push(delta_in.clone());
        } else {
            zs.push(kernel_lattice_mod(delta_out, o));
            bs.push(delta_in.hstack(&IntMatrix::scalar(n, o)));
        }
    }
    let z = IntMatrix::block_diagonal(&zs);
    let b = IntMatrix::block_diagonal(&bs);
    let z = if orders.is_empty() { IntMatrix::zeros(0, 0) } else { z };
    let b = if orders.is_empty() { IntMatrix::zeros(0, 0) } else { b };
    Ok(quotient_lattice(&z, &b)?)
}

/// `T ⊕ T ⊕ ...` acting on `C^r ⊗ A` for `summands` cyclic summands.
pub fn coeff_blocks(t: &IntMatrix, summands: usize) -> IntMatrix {
    IntMatrix::block_diagonal(&vec![t.clone(); summands])
}

/// Coefficient group `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffGroup {
    Z,
    Zmod(BigInt),
    /// `Z^rank ⊕ Z/d_1 ⊕ ...`.
    FG {
        rank: usize,
        factors: Vec<BigInt>,
    },
    Circle,
}

impl CoeffGroup {
    pub fn zmod(m: u64) -> Self {
        CoeffGroup::Zmod(BigInt::from(m))
    }

    /// Orders of the cyclic summands, `0` for `Z`.
    pub fn cyclic_orders(&self) -> Vec<BigInt> {
        match self {
            CoeffGroup::Z => vec![BigInt::zero()],
            CoeffGroup::Zmod(m) => vec![m.clone()],
            CoeffGroup::FG { rank, factors } => {
                let mut v = vec![BigInt::zero(); *rank];
                v.extend(factors.iter().cloned());
                v
            }
            CoeffGroup::Circle => Vec::new(),
        }
    }

    pub fn as_group(&self) -> Option<FGAbGroup> {
        (!matches!(self, CoeffGroup::Circle)).then(|| FGAbGroup::from_cyclic_orders(&self.cyclic_orders()))
    }
}

impl fmt::Display for CoeffGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffGroup::Z => f.write_str("Z"),
            CoeffGroup::Zmod(m) => write!(f, "Z/{m}"),
            CoeffGroup::Circle => f.write_str("T"),
            CoeffGroup::FG { .. } => f.write_str(&self.as_group().expect("not circle").describe()),
        }
    }
}

impl FromStr for CoeffGroup {
    type Err = Error;

    /// `Z`, `Z/m`, `T`, or a sum such as `Z^2 + Z/4`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidCoefficients(s.to_string());
        let t = s.trim();
        match t {
            "Z" => return Ok(CoeffGroup::Z),
            "T" => return Ok(CoeffGroup::Circle),
            _ => {}
        }
        let mut rank = 0;
        let mut factors = Vec::new();
        for part in t.split('+').map(str::trim) {
            if part == "Z" {
                rank += 1;
            } else if let Some(e) = part.strip_prefix("Z^") {
                rank += e.parse::<usize>().map_err(|_| bad())?;
            } else if let Some(m) = part.strip_prefix("Z/") {
                let m: BigInt = m.parse().map_err(|_| bad())?;
                if m < BigInt::from(2) {
                    return Err(bad());
                }
                factors.push(m);
            } else {
                return Err(bad());
            }
        }
        Ok(match (rank, factors.len()) {
            (1, 0) => CoeffGroup::Z,
            (0, 1) => CoeffGroup::Zmod(factors.pop().unwrap()),
            _ => CoeffGroup::FG { rank, factors },
        })
    }
}

/// `T^circle_rank ⊕ ⊕ Z/d_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleGroupDescriptor {
    pub circle_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl CircleGroupDescriptor {
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        match self.circle_rank {
            0 => {}
            1 => parts.push("T".to_string()),
            a => parts.push(format!("T^{a}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl Serialize for CircleGroupDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("circle_rank", &self.circle_rank)?;
        let t: Vec<serde_json::Value> = self.torsion.iter().map(bigint_json).collect();
        m.serialize_entry("torsion", &t)?;
        m.serialize_entry("description", &self.describe())?;
        m.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum Cohomology {
    Group(FGAbGroup),
    Circle(CircleGroupDescriptor),
}

impl Cohomology {
    pub fn describe(&self) -> String {
        match self {
            Cohomology::Group(g) => g.describe(),
            Cohomology::Circle(c) => c.describe(),
        }
    }

    pub fn as_group(&self) -> Option<&FGAbGroup> {
        match self {
            Cohomology::Group(g) => Some(g),
            Cohomology::Circle(_) => None,
        }
    }

    pub fn as_circle(&self) -> Option<&CircleGroupDescriptor> {
        match self {
            Cohomology::Circle(c) => Some(c),
            Cohomology::Group(_) => None,
        }
    }
}

/// `Ext(H_{r-1}, A) ⊕ Hom(H_r, A)`; for `A = T`, `Hom(Z, T) = T`, `Hom(Z/m, T) = Z/m`
/// and `Ext(-, T) = 0`.
pub fn cohomology_uct(cx: &CubicalComplex, r: usize, coeff: &CoeffGroup) -> Result<Cohomology> {
    let hr = cx.homology(r)?;
    if let CoeffGroup::Circle = coeff {
        return Ok(Cohomology::Circle(CircleGroupDescriptor {
            circle_rank: hr.free_rank,
            torsion: hr.invariant_factors.clone(),
        }));
    }
    let a = coeff.as_group().expect("not circle");
    let ext = if r == 0 { FGAbGroup::zero() } else { ext_group(&cx.homology(r - 1)?, &a) };
    let hom = hom_group(&hr, &a);
    let mut orders = ext.orders.clone();
    orders.extend(hom.orders.iter().cloned());
    Ok(Cohomology::Group(FGAbGroup::from_cyclic_orders(&orders)))
}

/// `H_r ⊗ A ⊕ Tor(H_{r-1}, A)`.
pub fn homology_uct(cx: &CubicalComplex, r: usize, coeff: &CoeffGroup) -> Result<FGAbGroup> {
    if matches!(coeff, CoeffGroup::Circle) {
        return Err(Error::InvalidCoefficients("homology takes finitely generated coefficients".into()));
    }
    let a = coeff.cyclic_orders();
    let mut orders = Vec::new();
    for o in cx.homology(r)?.orders {
        orders.extend(a.iter().map(|x| o.gcd(x)));
    }
    if r > 0 {
        for o in cx.homology(r - 1)?.orders.iter().filter(|o| !o.is_zero()) {
            orders.extend(a.iter().filter(|x| !x.is_zero()).map(|x| o.gcd(x)));
        }
    }
    Ok(FGAbGroup::from_cyclic_orders(&orders))
}

/// `{"degree", "free_rank", "torsion", "coeff", "basis"}`.
pub fn group_report(degree: usize, group: &FGAbGroup, coeff: &str) -> serde_json::Value {
    let basis: Vec<Vec<serde_json::Value>> = group
        .representatives()
        .map(|reps| reps.columns().iter().map(|c| c.iter().map(bigint_json).collect()).collect())
        .unwrap_or_default();
    serde_json::json!({
        "degree": degree,
        "free_rank": group.free_rank,
        "torsion": group.invariant_factors.iter().map(bigint_json).collect::<Vec<_>>(),
        "coeff": coeff,
        "description": group.describe(),
        "basis": basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_parsing() {
        assert_eq!("Z".parse::<CoeffGroup>().unwrap(), CoeffGroup::Z);
        assert_eq!("Z/6".parse::<CoeffGroup>().unwrap(), CoeffGroup::zmod(6));
        assert_eq!("T".parse::<CoeffGroup>().unwrap(), CoeffGroup::Circle);
        assert_eq!(
            "Z^2 + Z/4".parse::<CoeffGroup>().unwrap(),
            CoeffGroup::FG { rank: 2, factors: vec![BigInt::from(4)] }
        );
        assert!("Z/1".parse::<CoeffGroup>().is_err());
        assert!("Q".parse::<CoeffGroup>().is_err());
    }
}
