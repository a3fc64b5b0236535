//! Exact arithmetic: integer and rational polynomials, factorization, certified
//! root isolation, number fields and integer lattices.

pub mod charpoly;
pub mod eigen;
pub mod factor;
pub mod field;
pub mod lattice;
pub mod matrix;
pub mod modp;
pub mod poly;
pub mod roots;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use charpoly::char_poly;
pub use eigen::generalized_eigenspace;
pub use factor::{factor_rational, is_irreducible};
pub use field::{compositum, Compositum, FieldElement, LabeledField};
pub use lattice::{hermite_normal_form, integer_left_kernel, Hnf, IntegerLattice};
pub use matrix::{IntMatrix, RatMatrix};
pub use poly::{IntPoly, QPoly};
pub use roots::{is_pisot_unit, isolate_roots, modulus_vs_one, CRat, ModulusClass, RootBox};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial {0} is not squarefree")]
    NotSquarefree(String),
    #[error("polynomial {0} is not irreducible and monic")]
    Reducible(String),
    #[error("polynomial {0} has no real root greater than 1")]
    NoRealRootAboveOne(String),
    #[error("root isolation did not converge for {0}")]
    RootIsolation(String),
    #[error("{0} does not divide the characteristic polynomial with the requested multiplicity")]
    NotAFactor(String),
    #[error("no primitive element found")]
    PrimitiveElement,
}

/// Product of the non-zero eigenvalues (with multiplicity) is `±1`: the
/// lowest non-zero coefficient of the characteristic polynomial is `±1`.
pub fn is_pseudo_unimodular(m: &IntMatrix) -> Result<bool, ExactError> {
    let cp = char_poly(m)?;
    Ok(cp
        .coeffs()
        .iter()
        .find(|c| !c.is_zero())
        .is_some_and(|c| c.abs().is_one()))
}
