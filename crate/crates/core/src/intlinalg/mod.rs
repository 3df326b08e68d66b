//! Exact integer linear algebra: dense matrices, Smith normal form, and
//! finitely generated abelian groups presented as subquotients of `Z^n`.

mod group;
mod matrix;
mod snf;

use num_bigint::BigInt;
use thiserror::Error;

pub use group::{
    exactness_check, ext_group, hom_group, homology_of_pair, induced_map, quotient_lattice, Ambient, ExactnessVerdict,
    FGAbGroup, GroupHom,
};
pub(crate) use matrix::bigint_json;
pub use matrix::IntMatrix;
pub use snf::{
    kernel_basis, kernel_lattice_mod, lattice_basis, rank, smith_normal_form, smith_normal_form_with,
    solvable_mod_by_residues, solve_integer, solve_mod, PivotRule, Snf,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(BigInt),
    #[error("not a complex: composite of boundary maps is nonzero")]
    NotAComplex,
    #[error("matrix does not induce a chain map on the given subquotients")]
    NotChainMap,
    #[error("relation lattice is not contained in the generating lattice")]
    NotASubgroup,
    #[error("matrix does not respect the relation of source generator {generator}")]
    RelationsNotRespected { generator: usize },
    #[error("vector is not a cycle")]
    NotACycle,
    #[error("group carries no ambient chain data")]
    NoAmbient,
}
