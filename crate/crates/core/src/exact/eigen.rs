//! Generalized eigenspaces of integer matrices over number fields.
//!
//! For an irreducible factor `q` of the characteristic polynomial with
//! multiplicity `e`, the rational subspace `ker q(M)^e` is computed first.
//! The eigenvalue problem is then solved for the restriction of `M` to that
//! subspace, which is only `deg(q) e` dimensional.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::charpoly::char_poly;
use super::field::{kernel_field, FieldElement, LabeledField};
use super::matrix::{IntMatrix, RatMatrix};
use super::poly::IntPoly;
use super::ExactError;

/// Rational basis (primitive integer vectors) of `ker q(m)^e`.
pub fn rational_generalized_kernel(m: &IntMatrix, q: &IntPoly, e: usize) -> Vec<Vec<BigInt>> {
    let qm = m.eval_poly(q);
    qm.pow(e as u64).rational_kernel()
}

/// Matrix `a` with `m b = b a`, where the columns of `b` span an
/// `m`-invariant subspace.
pub fn restrict(m: &IntMatrix, basis: &[Vec<BigInt>]) -> RatMatrix {
    let n = m.rows();
    let r = basis.len();
    let b = IntMatrix::from_cols(n, basis.to_vec());
    let mb = m.mul_mat(&b).to_rat();
    // r independent rows of b give an invertible square block.
    let (_, rows) = b.transpose().to_rat().rref();
    let pick =
        |x: &RatMatrix| RatMatrix::from_rows(rows.iter().map(|&i| x.row(i).to_vec()).collect());
    let bsub = pick(&b.to_rat());
    let inv = bsub.inverse().expect("basis has full column rank");
    let a = inv.mul_mat(&pick(&mb));
    debug_assert_eq!(a.rows(), r);
    a
}

/// Exact basis of the generalized eigenspace `ker (m - γ I)^mult` over
/// `Q(γ)`, `γ` the root designated by `field`.
pub fn generalized_eigenspace(
    m: &IntMatrix,
    field: &Arc<LabeledField>,
    mult: usize,
) -> Result<Vec<Vec<FieldElement>>, ExactError> {
    let cp = char_poly(m)?;
    let q = field.min_poly();
    if cp.div_exact(&q.pow(mult)).is_none() {
        return Err(ExactError::NotAFactor(q.to_string()));
    }
    let basis = rational_generalized_kernel(m, q, mult);
    let a = restrict(m, &basis);
    let r = a.rows();
    let gamma = field.gen();
    // (A - γ I)^mult over Q(γ).
    let lift = |x: &BigRational| field.from_rational(x.clone());
    let mut shifted: Vec<Vec<FieldElement>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let v = lift(&a[(i, j)]);
                    if i == j {
                        &v - &gamma
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    let base = shifted.clone();
    for _ in 1..mult {
        shifted = mat_mul(field, &shifted, &base);
    }
    let ker = kernel_field(field, shifted, r);
    // Back to the ambient space: v = B y.
    Ok(ker
        .into_iter()
        .map(|y| {
            (0..m.rows())
                .map(|i| {
                    basis.iter().zip(&y).fold(field.zero(), |acc, (col, yj)| {
                        if col[i].is_zero() {
                            acc
                        } else {
                            &acc + &yj.scale(&BigRational::from_integer(col[i].clone()))
                        }
                    })
                })
                .collect()
        })
        .collect())
}

fn mat_mul(
    field: &Arc<LabeledField>,
    a: &[Vec<FieldElement>],
    b: &[Vec<FieldElement>],
) -> Vec<Vec<FieldElement>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    a[i].iter().zip(b).fold(field.zero(), |acc, (x, row)| {
                        if x.is_zero() || row[j].is_zero() {
                            acc
                        } else {
                            &acc + &(x * &row[j])
                        }
                    })
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::roots::isolate_roots;

    #[test]
    fn fibonacci_eigenvector() {
        let m = IntMatrix::from_i64(&[&[1, 1], &[1, 0]]);
        let p = IntPoly::from_i64(&[-1, -1, 1]);
        let root = isolate_roots(&p).unwrap()[1].clone();
        let k = LabeledField::new(p, root).unwrap();
        let space = generalized_eigenspace(&m, &k, 1).unwrap();
        assert_eq!(space.len(), 1);
        let v = &space[0];
        let ratio = &v[0] * &v[1].inv().unwrap();
        assert_eq!(ratio, k.gen());
    }

    #[test]
    fn identity_has_full_eigenspace() {
        let m = IntMatrix::identity(2);
        let p = IntPoly::from_i64(&[-1, 1]);
        let k = LabeledField::new(
            p,
            crate::exact::roots::RootBox::exact(BigRational::from_integer(1.into())),
        )
        .unwrap();
        assert_eq!(generalized_eigenspace(&m, &k, 2).unwrap().len(), 2);
    }

    #[test]
    fn rejects_non_factor() {
        let m = IntMatrix::identity(2);
        let p = IntPoly::from_i64(&[-2, 1]);
        let k = LabeledField::new(
            p,
            crate::exact::roots::RootBox::exact(BigRational::from_integer(2.into())),
        )
        .unwrap();
        assert!(generalized_eigenspace(&m, &k, 1).is_err());
    }
}
