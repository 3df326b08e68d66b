//! Finitely generated abelian groups given as subquotients of `Z^n`, and homomorphisms between them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::bigint_json;
use super::snf::{kernel_basis, lattice_basis, smith_normal_form, solve_integer, Snf};
use super::{IntMatrix, LinAlgError};

/// How a group sits inside an ambient `Z^n`: as `cycles / boundaries` with explicit
/// generator representatives and a coordinate map back to generators.
#[derive(Clone, Debug)]
pub struct Ambient {
    /// Basis (columns) of the lattice of cycles.
    pub cycles: IntMatrix,
    /// Generators (columns) of the sublattice being quotiented out.
    pub boundaries: IntMatrix,
    /// Cycle representative of each presentation generator (columns).
    pub reps: IntMatrix,
    cycles_snf: Snf,
    /// Maps cycle-basis coordinates to presentation-generator coordinates.
    post: IntMatrix,
}

impl Ambient {
    pub fn dim(&self) -> usize {
        self.cycles.rows()
    }

    /// Coordinates of `z` in the cycle basis, or `None` when `z` is not a cycle.
    fn cycle_coords(&self, z: &[BigInt]) -> Option<Vec<BigInt>> {
        let w = self.cycles_snf.u.mul_vec(z);
        let q = self.cycles_snf.rank;
        if w[q..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut y = vec![BigInt::zero(); q];
        for i in 0..q {
            let (d, r) = w[i].div_rem(&self.cycles_snf.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[i] = d;
        }
        Some(self.cycles_snf.v.mul_vec(&y))
    }

    pub fn contains_cycle(&self, z: &[BigInt]) -> bool {
        self.cycle_coords(z).is_some()
    }

    pub fn is_boundary(&self, z: &[BigInt]) -> bool {
        matches!(solve_integer(&self.boundaries, z), Ok(Some(_)))
    }
}

/// `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_t` presented on generators with diagonal relations.
#[derive(Clone, Debug)]
pub struct FGAbGroup {
    /// Order of each presentation generator; `0` marks an infinite-cyclic generator.
    pub orders: Vec<BigInt>,
    pub free_rank: usize,
    /// Invariant factors `>= 2` in divisibility order.
    pub invariant_factors: Vec<BigInt>,
    pub ambient: Option<Ambient>,
}

impl PartialEq for FGAbGroup {
    /// Isomorphism type only.
    fn eq(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.invariant_factors == other.invariant_factors
    }
}

impl FGAbGroup {
    pub fn zero() -> Self {
        Self::from_cyclic_orders(&[])
    }

    pub fn free(rank: usize) -> Self {
        Self::from_cyclic_orders(&vec![BigInt::zero(); rank])
    }

    /// `Z^free ⊕ Z/t_1 ⊕ ...`, small-integer convenience.
    pub fn from_parts(free: usize, torsion: &[u64]) -> Self {
        let mut orders = vec![BigInt::zero(); free];
        orders.extend(torsion.iter().map(|&t| BigInt::from(t)));
        Self::from_cyclic_orders(&orders)
    }

    /// Direct sum of cyclic groups of the given orders (`0` for `Z`, `1` allowed and dropped).
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let kept: Vec<BigInt> = orders.iter().filter(|o| !o.is_one()).cloned().collect();
        let (free_rank, invariant_factors) = normalize(&kept);
        FGAbGroup { orders: kept, free_rank, invariant_factors, ambient: None }
    }

    pub fn generator_count(&self) -> usize {
        self.orders.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Cardinality, when finite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    /// Diagonal relation matrix of the presentation.
    pub fn relations(&self) -> IntMatrix {
        IntMatrix::diagonal(&self.orders)
    }

    /// Reduces a generator-coordinate vector into canonical range.
    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        x.iter().zip(&self.orders).map(|(v, o)| if o.is_zero() { v.clone() } else { v.mod_floor(o) }).collect()
    }

    pub fn is_zero_element(&self, x: &[BigInt]) -> bool {
        self.reduce(x).iter().all(Zero::is_zero)
    }

    /// Class of an ambient cycle in generator coordinates.
    pub fn coordinates(&self, z: &[BigInt]) -> Result<Vec<BigInt>, LinAlgError> {
        let amb = self.ambient.as_ref().ok_or(LinAlgError::NoAmbient)?;
        if z.len() != amb.dim() {
            return Err(LinAlgError::DimensionMismatch { expected: amb.dim(), found: z.len() });
        }
        let c = amb.cycle_coords(z).ok_or(LinAlgError::NotACycle)?;
        Ok(self.reduce(&amb.post.mul_vec(&c)))
    }

    /// Cycle representatives of the generators, one per column.
    pub fn representatives(&self) -> Option<&IntMatrix> {
        self.ambient.as_ref().map(|a| &a.reps)
    }

    /// `Z^a ⊕ ⊕ Z/d_i` in the usual notation.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.invariant_factors.len() {
            let d = &self.invariant_factors[i];
            let run = self.invariant_factors[i..].iter().take_while(|x| *x == d).count();
            parts.push(if run == 1 { format!("Z/{d}") } else { format!("(Z/{d})^{run}") });
            i += run;
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// Torsion part as a list of `u64`, for reports and tests. Panics on overflow.
    pub fn torsion_u64(&self) -> Vec<u64> {
        self.invariant_factors.iter().map(|d| u64::try_from(d).expect("invariant factor exceeds u64")).collect()
    }
}

impl fmt::Display for FGAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl Serialize for FGAbGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("free_rank", &self.free_rank)?;
        let t: Vec<serde_json::Value> = self.invariant_factors.iter().map(bigint_json).collect();
        m.serialize_entry("torsion", &t)?;
        m.serialize_entry("description", &self.describe())?;
        m.end()
    }
}

/// Splits a list of cyclic orders into free rank and invariant factors.
fn normalize(orders: &[BigInt]) -> (usize, Vec<BigInt>) {
    let free = orders.iter().filter(|o| o.is_zero()).count();
    let finite: Vec<BigInt> = orders.iter().filter(|o| !o.is_zero()).map(|o| o.abs()).collect();
    if finite.is_empty() {
        return (free, Vec::new());
    }
    let snf = smith_normal_form(&IntMatrix::diagonal(&finite));
    let factors = snf.invariant_factors().into_iter().filter(|d| !d.is_one()).collect();
    (free, factors)
}

/// The quotient `span(sub_gens) / span(rel_gens)` with ambient data.
///
/// Fails with [`LinAlgError::NotASubgroup`] when some relation generator lies
/// outside the lattice spanned by `sub_gens`.
pub fn quotient_lattice(sub_gens: &IntMatrix, rel_gens: &IntMatrix) -> Result<FGAbGroup, LinAlgError> {
    if sub_gens.rows() != rel_gens.rows() {
        return Err(LinAlgError::DimensionMismatch { expected: sub_gens.rows(), found: rel_gens.rows() });
    }
    let n = sub_gens.rows();
    let cycles = lattice_basis(sub_gens);
    let q = cycles.cols();
    let cycles_snf = smith_normal_form(&cycles);

    let mut scratch = Ambient {
        cycles: cycles.clone(),
        boundaries: rel_gens.clone(),
        reps: IntMatrix::zeros(n, 0),
        cycles_snf,
        post: IntMatrix::identity(q),
    };
    let mut rel_coords = Vec::with_capacity(rel_gens.cols());
    for j in 0..rel_gens.cols() {
        let c = scratch.cycle_coords(&rel_gens.column(j)).ok_or(LinAlgError::NotASubgroup)?;
        rel_coords.push(c);
    }
    let c = IntMatrix::from_columns(q, &rel_coords);
    let rel_snf = smith_normal_form(&c);

    let mut orders = Vec::new();
    let mut keep = Vec::new();
    for i in 0..q {
        let order = if i < rel_snf.rank { rel_snf.d[(i, i)].clone() } else { BigInt::zero() };
        if order.is_one() {
            continue;
        }
        orders.push(order);
        keep.push(i);
    }
    let reps = &cycles * &rel_snf.u_inv.select_columns(&keep);
    scratch.post = rel_snf.u.select_rows(&keep);
    scratch.reps = reps;

    let (free_rank, invariant_factors) = normalize(&orders);
    Ok(FGAbGroup { orders, free_rank, invariant_factors, ambient: Some(scratch) })
}

/// `ker(d_out) / im(d_in)` with explicit cycle representatives.
pub fn homology_of_pair(d_out: &IntMatrix, d_in: &IntMatrix) -> Result<FGAbGroup, LinAlgError> {
    if d_out.cols() != d_in.rows() {
        return Err(LinAlgError::DimensionMismatch { expected: d_out.cols(), found: d_in.rows() });
    }
    if !(d_out * d_in).is_zero() {
        return Err(LinAlgError::NotAComplex);
    }
    quotient_lattice(&kernel_basis(d_out), d_in)
}

/// A homomorphism between presented groups, as a matrix on presentation generators.
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub source: FGAbGroup,
    pub target: FGAbGroup,
    /// `target.generator_count() x source.generator_count()`, entries reduced.
    pub matrix: IntMatrix,
}

impl GroupHom {
    /// Checks that every source relation is sent into the target relation lattice.
    pub fn new(source: FGAbGroup, target: FGAbGroup, matrix: IntMatrix) -> Result<Self, LinAlgError> {
        if matrix.rows() != target.generator_count() || matrix.cols() != source.generator_count() {
            return Err(LinAlgError::DimensionMismatch {
                expected: target.generator_count() * source.generator_count(),
                found: matrix.rows() * matrix.cols(),
            });
        }
        for (j, ord) in source.orders.iter().enumerate() {
            let image: Vec<BigInt> = matrix.column(j).iter().map(|x| x * ord).collect();
            if !target.is_zero_element(&image) {
                return Err(LinAlgError::RelationsNotRespected { generator: j });
            }
        }
        let matrix = matrix.reduce_rows_mod(&target.orders);
        Ok(GroupHom { source, target, matrix })
    }

    pub fn zero(source: FGAbGroup, target: FGAbGroup) -> Self {
        let matrix = IntMatrix::zeros(target.generator_count(), source.generator_count());
        GroupHom { source, target, matrix }
    }

    pub fn identity(group: FGAbGroup) -> Self {
        let n = group.generator_count();
        GroupHom { source: group.clone(), target: group, matrix: IntMatrix::identity(n) }
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.target.reduce(&self.matrix.mul_vec(x))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `self ∘ first`.
    pub fn compose_after(&self, first: &GroupHom) -> Result<GroupHom, LinAlgError> {
        if first.target.orders != self.source.orders {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.source.generator_count(),
                found: first.target.generator_count(),
            });
        }
        let m = &self.matrix * &first.matrix;
        GroupHom::new(first.source.clone(), self.target.clone(), m)
    }

    /// `self - other` (same source and target).
    pub fn sub(&self, other: &GroupHom) -> Result<GroupHom, LinAlgError> {
        GroupHom::new(self.source.clone(), self.target.clone(), self.matrix.sub(&other.matrix))
    }

    pub fn negate(&self) -> GroupHom {
        GroupHom::new(self.source.clone(), self.target.clone(), self.matrix.neg())
            .expect("negation preserves relations")
    }

    /// Lattice (in source generator coordinates) of elements mapped to zero.
    fn kernel_lattice(&self) -> IntMatrix {
        let g = self.source.generator_count();
        let stacked = self.matrix.hstack(&self.target.relations());
        let k = kernel_basis(&stacked);
        let top: Vec<usize> = (0..g).collect();
        lattice_basis(&k.select_rows(&top))
    }

    fn image_lattice(&self) -> IntMatrix {
        self.matrix.hstack(&self.target.relations())
    }

    /// Kernel, embedded in the source's generator coordinates.
    pub fn kernel(&self) -> FGAbGroup {
        quotient_lattice(&self.kernel_lattice(), &self.source.relations()).expect("source relations lie in the kernel")
    }

    /// Image, embedded in the target's generator coordinates.
    pub fn image(&self) -> FGAbGroup {
        quotient_lattice(&self.image_lattice(), &self.target.relations())
            .expect("target relations lie in the image lattice")
    }

    pub fn cokernel(&self) -> FGAbGroup {
        let n = self.target.generator_count();
        quotient_lattice(&IntMatrix::identity(n), &self.image_lattice()).expect("image lies in the target")
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

impl Serialize for GroupHom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("source", &self.source)?;
        m.serialize_entry("target", &self.target)?;
        m.serialize_entry("matrix", &self.matrix)?;
        m.end()
    }
}

/// The map induced on subquotients by a chain map `t : src ambient -> dst ambient`.
///
/// Fails with [`LinAlgError::NotChainMap`] unless `t` sends cycles to cycles and
/// boundaries to boundaries.
pub fn induced_map(t: &IntMatrix, src: &FGAbGroup, dst: &FGAbGroup) -> Result<GroupHom, LinAlgError> {
    let sa = src.ambient.as_ref().ok_or(LinAlgError::NoAmbient)?;
    let da = dst.ambient.as_ref().ok_or(LinAlgError::NoAmbient)?;
    if t.cols() != sa.dim() || t.rows() != da.dim() {
        return Err(LinAlgError::DimensionMismatch { expected: da.dim() * sa.dim(), found: t.rows() * t.cols() });
    }
    for j in 0..sa.cycles.cols() {
        if !da.contains_cycle(&t.mul_vec(&sa.cycles.column(j))) {
            return Err(LinAlgError::NotChainMap);
        }
    }
    for j in 0..sa.boundaries.cols() {
        if !da.is_boundary(&t.mul_vec(&sa.boundaries.column(j))) {
            return Err(LinAlgError::NotChainMap);
        }
    }
    let cols =
        (0..sa.reps.cols()).map(|j| dst.coordinates(&t.mul_vec(&sa.reps.column(j)))).collect::<Result<Vec<_>, _>>()?;
    GroupHom::new(src.clone(), dst.clone(), IntMatrix::from_columns(dst.generator_count(), &cols))
}

/// `Hom(G, A)`: `Hom(Z, A) = A`, `Hom(Z/m, A) = A[m]`, additive in `G`.
pub fn hom_group(g: &FGAbGroup, a: &FGAbGroup) -> FGAbGroup {
    let mut orders = Vec::new();
    for go in &g.orders {
        for ao in &a.orders {
            match (go.is_zero(), ao.is_zero()) {
                (true, _) => orders.push(ao.clone()),
                (false, true) => {}
                (false, false) => orders.push(go.gcd(ao)),
            }
        }
    }
    FGAbGroup::from_cyclic_orders(&orders)
}

/// `Ext(G, A)`: `Ext(Z, A) = 0`, `Ext(Z/m, A) = A / mA`, additive in `G`.
pub fn ext_group(g: &FGAbGroup, a: &FGAbGroup) -> FGAbGroup {
    let mut orders = Vec::new();
    for go in g.orders.iter().filter(|o| !o.is_zero()) {
        for ao in &a.orders {
            orders.push(if ao.is_zero() { go.clone() } else { go.gcd(ao) });
        }
    }
    FGAbGroup::from_cyclic_orders(&orders)
}

/// Outcome of an exactness test at the middle group of `f` then `g`.
#[derive(Clone, Debug, Serialize)]
pub struct ExactnessVerdict {
    pub exact: bool,
    pub composition_zero: bool,
    /// `ker(g) / im(f)`; trivial iff exact (given a zero composite).
    pub homology: FGAbGroup,
    /// On failure: a source generator with nonzero composite, or a kernel element outside the image.
    #[serde(serialize_with = "serialize_opt_vec")]
    pub witness: Option<Vec<BigInt>>,
}

fn serialize_opt_vec<S: serde::Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_none(),
        Some(v) => {
            let j: Vec<serde_json::Value> = v.iter().map(bigint_json).collect();
            j.serialize(s)
        }
    }
}

/// Decides `im(f) = ker(g)`.
pub fn exactness_check(f: &GroupHom, g: &GroupHom) -> Result<ExactnessVerdict, LinAlgError> {
    if f.target.orders != g.source.orders {
        return Err(LinAlgError::DimensionMismatch {
            expected: g.source.generator_count(),
            found: f.target.generator_count(),
        });
    }
    let composite = &g.matrix * &f.matrix;
    for j in 0..composite.cols() {
        if !g.target.is_zero_element(&composite.column(j)) {
            let mut w = vec![BigInt::zero(); f.source.generator_count()];
            w[j] = BigInt::one();
            return Ok(ExactnessVerdict {
                exact: false,
                composition_zero: false,
                homology: FGAbGroup::zero(),
                witness: Some(w),
            });
        }
    }
    let ker = g.kernel_lattice();
    let im = f.image_lattice();
    let mut witness = None;
    for j in 0..ker.cols() {
        let z = ker.column(j);
        if solve_integer(&im, &z)?.is_none() {
            witness = Some(z);
            break;
        }
    }
    let homology = quotient_lattice(&ker, &im)?;
    let exact = witness.is_none() && homology.is_trivial();
    debug_assert_eq!(witness.is_none(), homology.is_trivial());
    Ok(ExactnessVerdict { exact, composition_zero: true, homology, witness })
}
