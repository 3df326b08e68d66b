//! Circle-valued cochains in the exact model `Q/Z ⊕ Q^g` of a subgroup of `T`.
//!
//! The first coordinate is a rational number of turns taken mod 1; the free
//! coordinates stand for rationally independent angles `t1, t2, ...`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::crossed::CrossedProduct;
use crate::error::{Error, Result};
use crate::homology::{CircleGroupDescriptor, CubicalComplex};
use crate::intlinalg::{smith_normal_form, IntMatrix};

/// An element `turn + Σ a_i t_i` with `turn ∈ [0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Phase {
    turn: BigRational,
    /// Coefficients of `t1, t2, ...`, without trailing zeros.
    free: Vec<BigRational>,
}

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

impl Phase {
    pub fn turn(x: BigRational) -> Self {
        Phase { turn: frac(&x), free: Vec::new() }
    }

    /// `p/q` turns.
    pub fn ratio(p: i64, q: i64) -> Self {
        Phase::turn(BigRational::new(p.into(), q.into()))
    }

    /// The free generator `t_i` (1-based).
    pub fn generator(i: usize) -> Self {
        assert!(i >= 1, "free generators are numbered from 1");
        let mut free = vec![BigRational::zero(); i];
        free[i - 1] = BigRational::one();
        Phase { turn: BigRational::zero(), free }
    }

    pub fn turn_part(&self) -> &BigRational {
        &self.turn
    }

    pub fn free_part(&self) -> &[BigRational] {
        &self.free
    }

    /// Number of free generators involved.
    pub fn width(&self) -> usize {
        self.free.len()
    }

    fn normalized(mut self) -> Self {
        self.turn = frac(&self.turn);
        while self.free.last().is_some_and(Zero::is_zero) {
            self.free.pop();
        }
        self
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Phase { turn: &self.turn * c, free: self.free.iter().map(|x| x * c).collect() }.normalized()
    }

    pub fn mul_int(&self, c: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(c.clone()))
    }

    /// Finite order exactly when no free generator occurs.
    pub fn has_infinite_order(&self) -> bool {
        !self.free.is_empty()
    }

    /// The order, when finite: the denominator of the turn.
    pub fn order(&self) -> Option<BigInt> {
        (!self.has_infinite_order()).then(|| self.turn.denom().clone())
    }

    /// Value in the multiplicative model, `exp(2πi·turn)` times formal factors.
    pub fn multiplicative(&self) -> String {
        if self.is_zero() {
            return "1".into();
        }
        format!("exp(2πi({self}))")
    }
}

impl Zero for Phase {
    fn zero() -> Self {
        Phase { turn: BigRational::zero(), free: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.turn.is_zero() && self.free.is_empty()
    }
}

impl Add for Phase {
    type Output = Phase;

    fn add(self, rhs: Phase) -> Phase {
        &self + &rhs
    }
}

impl Add<&Phase> for &Phase {
    type Output = Phase;

    fn add(self, rhs: &Phase) -> Phase {
        let n = self.free.len().max(rhs.free.len());
        let z = BigRational::zero();
        let free = (0..n).map(|i| self.free.get(i).unwrap_or(&z) + rhs.free.get(i).unwrap_or(&z)).collect();
        Phase { turn: &self.turn + &rhs.turn, free }.normalized()
    }
}

impl AddAssign<&Phase> for Phase {
    fn add_assign(&mut self, rhs: &Phase) {
        *self = &*self + rhs;
    }
}

impl Neg for &Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        self.mul_int(&BigInt::from(-1))
    }
}

impl Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        -&self
    }
}

impl Sub for &Phase {
    type Output = Phase;

    fn sub(self, rhs: &Phase) -> Phase {
        self + &(-rhs)
    }
}

impl Sub for Phase {
    type Output = Phase;

    fn sub(self, rhs: Phase) -> Phase {
        &self - &rhs
    }
}

impl Mul<&Phase> for &BigInt {
    type Output = Phase;

    fn mul(self, rhs: &Phase) -> Phase {
        rhs.mul_int(self)
    }
}

fn fmt_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for Phase {
    /// `1/3 + 2*t1 - 1/2*t2`; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(bool, String)> = Vec::new();
        if !self.turn.is_zero() {
            terms.push((false, fmt_rational(&self.turn)));
        }
        for (i, c) in self.free.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = if mag.is_one() { format!("t{}", i + 1) } else { format!("{}*t{}", fmt_rational(&mag), i + 1) };
            terms.push((c.is_negative(), body));
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (neg, body)) in terms.iter().enumerate() {
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => f.write_str(body)?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phase({self})")
    }
}

impl Serialize for Phase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            let p: BigInt = p.trim().parse().ok()?;
            (!q.is_zero()).then(|| BigRational::new(p, q))
        }
        None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
    }
}

impl FromStr for Phase {
    type Err = Error;

    /// Sums of terms `p/q`, `tN`, `c*tN` with optional signs, e.g. `1/3 + 2*t1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPhase(s.to_string());
        let mut text = s.trim().replace(' ', "");
        if text.is_empty() {
            return Err(bad());
        }
        if !text.starts_with(['+', '-']) {
            text.insert(0, '+');
        }
        let mut out = Phase::zero();
        let mut rest = text.as_str();
        while !rest.is_empty() {
            let sign = if rest.starts_with('-') { -1 } else { 1 };
            rest = &rest[1..];
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let term = &rest[..end];
            rest = &rest[end..];
            if term.is_empty() {
                return Err(bad());
            }
            let (coef, gen) = match term.rsplit_once('*') {
                Some((c, g)) => (parse_rational(c).ok_or_else(bad)?, Some(g)),
                None if term.starts_with('t') => (BigRational::one(), Some(term)),
                None => (parse_rational(term).ok_or_else(bad)?, None),
            };
            let coef = coef * BigRational::from_integer(sign.into());
            let value = match gen {
                Some(g) => {
                    let i: usize = g.strip_prefix('t').and_then(|n| n.parse().ok()).ok_or_else(bad)?;
                    if i == 0 {
                        return Err(bad());
                    }
                    Phase::generator(i).scale(&coef)
                }
                None => Phase::turn(coef),
            };
            out += &value;
        }
        Ok(out)
    }
}

/// The phase group with `g` free generators; used to validate parsed phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PhaseGroup {
    pub g: usize,
}

impl PhaseGroup {
    pub fn new(g: usize) -> Self {
        PhaseGroup { g }
    }

    pub fn parse(&self, s: &str) -> Result<Phase> {
        let p: Phase = s.parse()?;
        if p.width() > self.g {
            return Err(Error::InvalidPhase(format!(
                "{s} uses t{} but only {} free generators exist",
                p.width(),
                self.g
            )));
        }
        Ok(p)
    }

    pub fn generators(&self) -> Vec<Phase> {
        (1..=self.g).map(Phase::generator).collect()
    }
}

/// A phase on every `r`-cube, indexed like the complex's cube list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseCochain {
    pub degree: usize,
    pub values: Vec<Phase>,
}

impl PhaseCochain {
    pub fn zero(cx: &CubicalComplex, degree: usize) -> Self {
        PhaseCochain { degree, values: vec![Phase::zero(); cx.cube_count(degree)] }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &PhaseCochain) -> PhaseCochain {
        PhaseCochain {
            degree: self.degree,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &PhaseCochain) -> PhaseCochain {
        PhaseCochain {
            degree: self.degree,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }

    /// Integer multiples `c * v` of a chain-coordinate vector.
    pub fn from_integers(degree: usize, v: &[BigInt], unit: &Phase) -> Self {
        PhaseCochain { degree, values: v.iter().map(|c| unit.mul_int(c)).collect() }
    }

    /// `{"degree": r, "values": {cube_id: phase}}`.
    pub fn to_json(&self, cx: &CubicalComplex) -> serde_json::Value {
        let values: serde_json::Map<String, serde_json::Value> =
            cx.cube_ids(self.degree).into_iter().zip(&self.values).map(|(id, p)| (id, p.to_string().into())).collect();
        serde_json::json!({ "degree": self.degree, "values": values })
    }

    /// Parses `{"degree", "values"}`; cubes not listed get the zero phase.
    pub fn from_json(cx: &CubicalComplex, v: &serde_json::Value, phases: &PhaseGroup) -> Result<Self> {
        let degree = v
            .get("degree")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::Input("cochain: `degree` must be a non-negative integer".into()))?
            as usize;
        let map = v
            .get("values")
            .and_then(serde_json::Value::as_object)
            .ok_or_else(|| Error::Input("cochain: `values` must be an object".into()))?;
        let mut out = PhaseCochain::zero(cx, degree);
        for (id, val) in map {
            let cube = cx.graph().parse_cube(id)?;
            let i = cx
                .cube_index(degree, &cube)
                .ok_or_else(|| Error::Input(format!("cochain: `{id}` is not a {degree}-cube")))?;
            let s = match val {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                _ => return Err(Error::Input(format!("cochain: value at `values.{id}` must be a phase string"))),
            };
            out.values[i] = phases.parse(&s)?;
        }
        Ok(out)
    }
}

fn apply(m: &IntMatrix, v: &[Phase]) -> Vec<Phase> {
    (0..m.rows())
        .map(|i| {
            let mut acc = Phase::zero();
            for (a, p) in m.row(i).iter().zip(v) {
                if !a.is_zero() {
                    acc += &p.mul_int(a);
                }
            }
            acc
        })
        .collect()
}

/// `δ^r f (λ) = f(∂_{r+1} λ)`.
pub fn delta(cx: &CubicalComplex, f: &PhaseCochain) -> PhaseCochain {
    PhaseCochain { degree: f.degree + 1, values: apply(&cx.coboundary(f.degree), &f.values) }
}

pub fn is_cocycle(cx: &CubicalComplex, f: &PhaseCochain) -> bool {
    delta(cx, f).is_zero()
}

/// `b` with `δb = f`, or `None`. Solved through the Smith form `U δ V = D`: with
/// `c = U f`, take `y_i = c_i / d_i` below the rank (turns and free parts alike),
/// require `c_i = 0` beyond it, and return `b = V y`. Degree 0 has no witnesses.
pub fn coboundary_witness(cx: &CubicalComplex, f: &PhaseCochain) -> Option<PhaseCochain> {
    if f.degree == 0 {
        return None;
    }
    let a = cx.coboundary(f.degree - 1);
    let snf = smith_normal_form(&a);
    let c = apply(&snf.u, &f.values);
    if c[snf.rank..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![Phase::zero(); a.cols()];
    for i in 0..snf.rank {
        let d = BigRational::from_integer(snf.d[(i, i)].clone());
        y[i] = c[i].scale(&d.recip());
    }
    let b = PhaseCochain { degree: f.degree - 1, values: apply(&snf.v, &y) };
    debug_assert_eq!(delta(cx, &b), *f);
    Some(b)
}

/// `Z^r(Λ, T) ≅ T^{n - rank} ⊕ ⊕ Z/d_i` for the invariant factors `d_i` of `δ^r`.
pub fn cocycle_group(cx: &CubicalComplex, r: usize) -> CircleGroupDescriptor {
    let snf = smith_normal_form(&cx.coboundary(r));
    CircleGroupDescriptor {
        circle_rank: cx.cube_count(r) - snf.rank,
        torsion: snf.invariant_factors().into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// Generators of `Z^r(Λ, Q/Z ⊕ Q^g)`: each integer kernel vector times every `t_i` and
/// times `1/den`, plus the torsion cocycles `V e_i / d_i`.
pub fn cocycle_generators(cx: &CubicalComplex, r: usize, phases: &PhaseGroup, den: i64) -> Vec<PhaseCochain> {
    let a = cx.coboundary(r);
    let snf = smith_normal_form(&a);
    let mut out = Vec::new();
    for j in snf.rank..a.cols() {
        let v = snf.v.column(j);
        for t in phases.generators() {
            out.push(PhaseCochain::from_integers(r, &v, &t));
        }
        out.push(PhaseCochain::from_integers(r, &v, &Phase::ratio(1, den)));
    }
    for i in 0..snf.rank {
        let d = &snf.d[(i, i)];
        if d.is_one() {
            continue;
        }
        let unit = Phase::turn(BigRational::new(BigInt::one(), d.clone()));
        out.push(PhaseCochain::from_integers(r, &snf.v.column(i), &unit));
    }
    out
}

/// `i*` on phase cochains.
pub fn restrict(cp: &CrossedProduct, phi: &PhaseCochain) -> Result<PhaseCochain> {
    Ok(PhaseCochain { degree: phi.degree, values: cp.i_star(&phi.values, phi.degree)? })
}

/// `j*` on phase cochains: an `r`-cochain on `Λ` becomes an `(r+1)`-cochain on the product.
pub fn inflate(cp: &CrossedProduct, c: &PhaseCochain) -> Result<PhaseCochain> {
    Ok(PhaseCochain { degree: c.degree + 1, values: cp.j_star(&c.values, c.degree)? })
}

/// `φ(λ, 1)` for `λ ∈ Q_r(Λ)`, where `φ` has degree `r + 1`.
fn at_one<'a>(cp: &CrossedProduct, phi: &'a PhaseCochain, r: usize, i: usize) -> &'a Phase {
    &phi.values[cp.one_index(r, i)]
}

fn at_zero<'a>(cp: &CrossedProduct, phi: &'a PhaseCochain, r: usize, i: usize) -> &'a Phase {
    &phi.values[cp.zero_index(r, i)]
}

#[derive(Debug, Clone, Serialize)]
pub struct TwistEntry {
    pub edge: String,
    pub image: String,
    pub phase: Phase,
    /// `φ·s_{image}` in multiplicative notation.
    pub display: String,
}

/// Scalars of the automorphism `β_φ`: `s_e ↦ φ(βe,1) s_{βe}`, `p_v ↦ p_{βv}`, and of its
/// inverse `s_e ↦ conj(φ(e,1)) s_{β⁻¹e}`.
#[derive(Debug, Clone, Serialize)]
pub struct TwistData {
    pub vertices: Vec<(String, String)>,
    pub forward: Vec<TwistEntry>,
    pub inverse: Vec<TwistEntry>,
}

impl TwistData {
    /// The phase attached to `s_e` by `β_φ`, indexed by base edge.
    pub fn forward_phases(&self) -> Vec<Phase> {
        self.forward.iter().map(|t| t.phase.clone()).collect()
    }
}

pub fn twist_data(cp: &CrossedProduct, phi: &PhaseCochain) -> Result<TwistData> {
    if phi.degree != 2 {
        return Err(Error::DegreeMismatch { degree: 2, expected: cp.product().cube_count(2), found: phi.values.len() });
    }
    if !is_cocycle(cp.product(), phi) {
        return Err(Error::NotACocycle);
    }
    let g = cp.base_graph();
    let beta = cp.beta();
    let inv = beta.inverse();
    let entry = |e: usize, image: usize, phase: Phase| TwistEntry {
        edge: g.edge_id(e).to_string(),
        image: g.edge_id(image).to_string(),
        display: if phase.is_zero() {
            format!("s_{{{}}}", g.edge_id(image))
        } else {
            format!("{}·s_{{{}}}", phase.multiplicative(), g.edge_id(image))
        },
        phase,
    };
    let forward = (0..g.edge_count())
        .map(|e| {
            let be = beta.edge(e);
            entry(e, be, at_one(cp, phi, 1, be).clone())
        })
        .collect();
    let inverse = (0..g.edge_count()).map(|e| entry(e, inv.edge(e), -at_one(cp, phi, 1, e))).collect();
    let vertices =
        (0..g.vertex_count()).map(|v| (g.vertex_id(v).to_string(), g.vertex_id(beta.vertex(v)).to_string())).collect();
    Ok(TwistData { vertices, forward, inverse })
}

#[derive(Debug, Clone, Serialize)]
pub struct SquareResidue {
    /// `λ = e f = f' e'`.
    pub square: String,
    pub e: String,
    pub f: String,
    pub fp: String,
    pub ep: String,
    /// `-φ(βλ,0) + φ(λ,0) - φ(βf',1) + φ(βe,1) - φ(βe',1) + φ(βf,1)`.
    pub residue: Phase,
    /// Phase left over when rewriting `S_{f'} S_{e'}` into `i*(φ)(λ) S_e S_f`.
    pub tg2_residue: Phase,
}

#[derive(Debug, Clone, Serialize)]
pub struct CohrelReport {
    pub holds: bool,
    pub tg2_holds: bool,
    pub squares: Vec<SquareResidue>,
}

/// A scalar times a word `s_{w_1} s_{w_2} ...` in the generators of `C*_ψ(Λ)`.
#[derive(Debug, Clone)]
struct Monomial {
    phase: Phase,
    word: Vec<usize>,
}

/// Checks the identity `1 = δ²φ(βλ,1)` square by square, and independently replays
/// the rewriting `S_{f'}S_{e'} = ... = i*(φ)(ef) S_e S_f` with `S_x = φ(βx,1) s_{βx}`.
pub fn verify_cohrel(cp: &CrossedProduct, phi: &PhaseCochain) -> Result<CohrelReport> {
    if phi.degree != 2 {
        return Err(Error::DegreeMismatch { degree: 2, expected: cp.product().cube_count(2), found: phi.values.len() });
    }
    let base = cp.base();
    let g = base.graph();
    let beta = cp.beta();
    let edge_one = |x: usize| {
        let i = base.cube_index(1, &crate::kgraph::Cube { range: g.rng(x), edges: vec![x] }).expect("edge is a 1-cube");
        at_one(cp, phi, 1, i).clone()
    };
    let square_zero = |c: &crate::kgraph::Cube| {
        let i = base.cube_index(2, c).expect("square is a 2-cube");
        at_zero(cp, phi, 2, i).clone()
    };
    let mut squares = Vec::new();
    for lambda in base.cubes(2) {
        let (e, f) = (lambda.edges[0], lambda.edges[1]);
        let sq = g.left_square(e, f).expect("every 2-cube has its square");
        let (fp, ep) = (sq.fp, sq.ep);
        let blambda = beta.apply_cube(lambda);
        let residue = -square_zero(&blambda) + square_zero(lambda) - edge_one(beta.edge(fp)) + edge_one(beta.edge(e))
            - edge_one(beta.edge(ep))
            + edge_one(beta.edge(f));

        // S_{f'} S_{e'} in terms of the s generators
        let mut m = Monomial {
            phase: &edge_one(beta.edge(fp)) + &edge_one(beta.edge(ep)),
            word: vec![beta.edge(fp), beta.edge(ep)],
        };
        // TG2 for i*(φ): s_{ν'} s_{μ'} = i*(φ)(μν) s_μ s_ν
        let rel = *g.right_square(m.word[0], m.word[1]).expect("β maps squares to squares");
        let mu_nu = crate::kgraph::Cube { range: g.rng(rel.e), edges: vec![rel.e, rel.f] };
        m.phase += &square_zero(&mu_nu);
        m.word = vec![rel.e, rel.f];
        // back to S: s_{βx} = conj(φ(βx,1)) S_x
        let inv = beta.inverse();
        for w in m.word.iter_mut() {
            m.phase = &m.phase - &edge_one(*w);
            *w = inv.edge(*w);
        }
        debug_assert_eq!(m.word, vec![e, f]);
        let tg2_residue = &m.phase - &square_zero(lambda);

        squares.push(SquareResidue {
            square: g.cube_id(lambda),
            e: g.edge_id(e).into(),
            f: g.edge_id(f).into(),
            fp: g.edge_id(fp).into(),
            ep: g.edge_id(ep).into(),
            residue,
            tg2_residue,
        });
    }
    let holds = squares.iter().all(|s| s.residue.is_zero());
    let tg2_holds = squares.iter().all(|s| s.tg2_residue.is_zero());
    Ok(CohrelReport { holds, tg2_holds, squares })
}

/// Lifts a 2-cocycle `ψ` on `Λ` with `β*ψ - ψ = δb` to
/// `φ(λ,0) = ψ(λ)`, `φ(λ,1) = b(β⁻¹λ)` on the product.
pub fn cor2_lift(cp: &CrossedProduct, psi: &PhaseCochain) -> Result<(PhaseCochain, PhaseCochain)> {
    let base = cp.base();
    if psi.degree != 2 || psi.values.len() != base.cube_count(2) {
        return Err(Error::DegreeMismatch { degree: 2, expected: base.cube_count(2), found: psi.values.len() });
    }
    if !is_cocycle(base, psi) {
        return Err(Error::NotACocycle);
    }
    let beta = cp.beta();
    let shifted: Vec<Phase> = base
        .cubes(2)
        .iter()
        .map(|c| psi.values[base.cube_index(2, &beta.apply_cube(c)).expect("β permutes cubes")].clone())
        .collect();
    let diff = PhaseCochain { degree: 2, values: shifted }.sub(psi);
    let b = coboundary_witness(base, &diff).ok_or(Error::ClassNotInvariant)?;
    let inv = beta.inverse();
    let mut phi = PhaseCochain::zero(cp.product(), 2);
    for (i, v) in psi.values.iter().enumerate() {
        phi.values[cp.zero_index(2, i)] = v.clone();
    }
    for (i, c) in base.cubes(1).iter().enumerate() {
        let pre = base.cube_index(1, &inv.apply_cube(c)).expect("β permutes cubes");
        phi.values[cp.one_index(1, i)] = b.values[pre].clone();
    }
    if !is_cocycle(cp.product(), &phi) || restrict(cp, &phi)? != *psi {
        return Err(Error::NotACocycle);
    }
    Ok((phi, b))
}

/// `gcd` of a list of integers, as a convenience for relation checks.
pub fn gcd_all(xs: &[BigInt]) -> BigInt {
    xs.iter().fold(BigInt::zero(), |a, b| a.gcd(b))
}
