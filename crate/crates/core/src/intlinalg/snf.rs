//! Smith normal form with unimodular transforms, and the linear solvers built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{IntMatrix, LinAlgError};

/// How the pivot for each diagonal position is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotRule {
    /// Smallest nonzero absolute value in the remaining block (ties: first in row-major order).
    SmallestAbs,
    /// A uniformly random nonzero entry of the remaining block, seeded.
    Randomized(u64),
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | ...`, all `d_i >= 0`.
///
/// The inverses of both transforms are tracked alongside them.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl Snf {
    /// The full diagonal of `D` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn row_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_row_multiple(dst, src, q);
        self.u.add_row_multiple(dst, src, q);
        self.u_inv.add_col_multiple(src, dst, &-q);
    }

    fn col_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_col_multiple(dst, src, q);
        self.v.add_col_multiple(dst, src, q);
        self.v_inv.add_row_multiple(src, dst, &-q);
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn row_negate(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    smith_normal_form_with(a, PivotRule::SmallestAbs)
}

pub fn smith_normal_form_with(a: &IntMatrix, rule: PivotRule) -> Snf {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        a: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    let mut rng = match rule {
        PivotRule::Randomized(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        PivotRule::SmallestAbs => None,
    };

    let mut t = 0;
    while t < m.min(n) {
        let pivot = match rng.as_mut() {
            None => smallest_in_block(&w.a, t),
            Some(rng) => random_in_block(&w.a, t, rng),
        };
        let Some((pi, pj)) = pivot else { break };
        w.row_swap(t, pi);
        w.col_swap(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if w.a[(i, t)].is_zero() {
                    continue;
                }
                let q = &w.a[(i, t)] / &w.a[(t, t)];
                w.row_add(i, t, &-q);
                if !w.a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if w.a[(t, j)].is_zero() {
                    continue;
                }
                let q = &w.a[(t, j)] / &w.a[(t, t)];
                w.col_add(j, t, &-q);
                if !w.a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // a remainder survived: it is strictly smaller than the pivot
                let (pi, pj) = smallest_in_cross(&w.a, t);
                w.row_swap(t, pi);
                w.col_swap(t, pj);
                continue;
            }
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !w.a[(i, j)].is_multiple_of(&w.a[(t, t)])));
            match offender {
                Some(i) => w.row_add(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.row_negate(t);
        }
        t += 1;
    }

    Snf { rank: t, u: w.u, u_inv: w.u_inv, d: w.a, v: w.v, v_inv: w.v_inv }
}

fn smallest_in_block(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
                if x.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

fn random_in_block(a: &IntMatrix, t: usize, rng: &mut ChaCha8Rng) -> Option<(usize, usize)> {
    let nonzero: Vec<(usize, usize)> =
        (t..a.rows()).flat_map(|i| (t..a.cols()).map(move |j| (i, j))).filter(|&(i, j)| !a[(i, j)].is_zero()).collect();
    if nonzero.is_empty() {
        None
    } else {
        Some(nonzero[rng.gen_range(0..nonzero.len())])
    }
}

/// Smallest nonzero entry in row `t` or column `t` (from position `t` on).
fn smallest_in_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut best_abs = a[(t, t)].abs();
    let candidates = (t..a.rows()).map(|i| (i, t)).chain((t + 1..a.cols()).map(|j| (t, j)));
    for (i, j) in candidates {
        let x = a[(i, j)].abs();
        if !x.is_zero() && (best_abs.is_zero() || x < best_abs) {
            best = (i, j);
            best_abs = x;
        }
    }
    best
}

pub fn rank(a: &IntMatrix) -> usize {
    smith_normal_form(a).rank
}

/// A basis of the integer kernel `{x : A x = 0}`, as columns.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let cols: Vec<usize> = (snf.rank..a.cols()).collect();
    snf.v.select_columns(&cols)
}

/// A basis (as columns) of the lattice spanned by the columns of `gens`.
pub fn lattice_basis(gens: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(gens);
    let mut out = IntMatrix::zeros(gens.rows(), snf.rank);
    for j in 0..snf.rank {
        let d = &snf.d[(j, j)];
        for i in 0..gens.rows() {
            out[(i, j)] = &snf.u_inv[(i, j)] * d;
        }
    }
    out
}

/// Lattice of `x` with `A x ≡ 0 (mod m)`, as a basis of columns.
pub fn kernel_lattice_mod(a: &IntMatrix, m: &BigInt) -> IntMatrix {
    let n = a.cols();
    let stacked = a.hstack(&IntMatrix::scalar(a.rows(), m));
    let k = kernel_basis(&stacked);
    let top: Vec<usize> = (0..n).collect();
    lattice_basis(&k.select_rows(&top))
}

/// An integer solution of `A x = b`, or `None`.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinAlgError> {
    if b.len() != a.rows() {
        return Err(LinAlgError::DimensionMismatch { expected: a.rows(), found: b.len() });
    }
    let snf = smith_normal_form(a);
    Ok(solve_with_snf(&snf, b))
}

pub(crate) fn solve_with_snf(snf: &Snf, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let ub = snf.u.mul_vec(b);
    let n = snf.v.rows();
    let mut y = vec![BigInt::zero(); n];
    for (i, c) in ub.iter().enumerate() {
        if i < snf.rank {
            let (q, r) = c.div_rem(&snf.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// A solution of `A x ≡ b (mod m)` with entries in `[0, m)`, or `None`.
///
/// Solved over the integers on the augmented system `[A | m I]`.
pub fn solve_mod(a: &IntMatrix, b: &[BigInt], m: &BigInt) -> Result<Option<Vec<BigInt>>, LinAlgError> {
    if m < &BigInt::from(2) {
        return Err(LinAlgError::InvalidModulus(m.clone()));
    }
    let stacked = a.hstack(&IntMatrix::scalar(a.rows(), m));
    Ok(solve_integer(&stacked, b)?.map(|x| x[..a.cols()].iter().map(|v| v.mod_floor(m)).collect()))
}

/// Decides solvability of `A x ≡ b (mod m)` from the Smith form of `A` alone:
/// with `U A V = D`, the system is solvable iff `gcd(d_i, m)` divides `(U b)_i`
/// for every row (taking `d_i = 0` past the rank).
pub fn solvable_mod_by_residues(a: &IntMatrix, b: &[BigInt], m: &BigInt) -> Result<bool, LinAlgError> {
    if b.len() != a.rows() {
        return Err(LinAlgError::DimensionMismatch { expected: a.rows(), found: b.len() });
    }
    if m < &BigInt::from(2) {
        return Err(LinAlgError::InvalidModulus(m.clone()));
    }
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_vec(b);
    Ok(ub.iter().enumerate().all(|(i, c)| {
        let d = if i < snf.rank { snf.d[(i, i)].clone() } else { BigInt::zero() };
        c.is_multiple_of(&d.gcd(m))
    }))
}
