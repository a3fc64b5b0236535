//! Projections of the abelianized fixed point and the Rauzy fractals they
//! produce, with desk-scale checks of the domain exchange, the
//! graph-directed IFS and the separation of the digit sets.

mod checks;
mod cloud;
mod render;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::exact::eigen::rational_generalized_kernel;
use crate::exact::field::kernel_field;
use crate::exact::{ExactError, FieldElement, IntMatrix, IntPoly, LabeledField, RatMatrix};
use crate::spectrum::{
    convergence_value, perron_is_pisot_unit, rat_to_f64, spectral_decomposition, EigenLattice,
    SpectrumError,
};
use crate::substitution::{Substitution, SubstitutionError};

pub use checks::{
    epsilon_separation, exchange_check, ifs_residual, overlap_fraction, psi_graph, ExchangeConfig,
    ExchangeReport, IfsReport, LetterResidual, PsiGraph, SeparationLevel, SeparationReport,
    DEFAULT_SEPARATION_DEPTH,
};
pub use cloud::{closest_pair_distance, rauzy_cloud, rauzy_cloud_of_word, PointCloud, MAX_POINTS};
pub use render::{render_svg, write_csv, Panel, RenderConfig};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
    #[error("the Perron root is not a Pisot unit")]
    NotPisotUnit,
    #[error("the projection has no map N with NV = VM")]
    NoContraction,
    #[error("projection has {found} columns, the alphabet has {expected} letters")]
    Dimension { found: usize, expected: usize },
    #[error("{what} would need {needed}, above the budget {budget}")]
    Budget {
        what: &'static str,
        needed: usize,
        budget: usize,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectionKind {
    /// Along every generalized eigenspace except those of the contracting
    /// conjugates of the Perron root.
    Usual,
    /// Rows `α_i (1,…,1) − w_i` built from eigenvalue witnesses.
    Torus,
}

/// A linear map `V: R^A → R^d` together with the map `N` satisfying
/// `NV = VM` when one exists.
#[derive(Clone, Debug)]
pub struct Projection {
    pub kind: ProjectionKind,
    /// `d × |A|`.
    pub matrix: DMatrix<f64>,
    /// Least-squares solution of `NV = VM`.
    pub contraction: Option<DMatrix<f64>>,
    /// `‖NV − VM‖∞`, infinite when `V` is rank deficient.
    pub residual: f64,
    pub det_abs: Option<f64>,
}

impl Projection {
    pub fn from_matrix(kind: ProjectionKind, matrix: DMatrix<f64>, m: &IntMatrix) -> Self {
        let mf = int_to_f64(m);
        let vm = &matrix * &mf;
        let gram = &matrix * matrix.transpose();
        let contraction = gram.try_inverse().map(|g| &vm * matrix.transpose() * g);
        let residual = match &contraction {
            Some(n) => max_abs(&(n * &matrix - &vm)),
            None => f64::INFINITY,
        };
        let det_abs = contraction.as_ref().map(|n| n.determinant().abs());
        Projection {
            kind,
            matrix,
            contraction,
            residual,
            det_abs,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn letters(&self) -> usize {
        self.matrix.ncols()
    }

    /// `V e_a`.
    pub fn column(&self, a: usize) -> Vec<f64> {
        self.matrix.column(a).iter().copied().collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|r| self.matrix.row(r).iter().copied().collect())
            .collect()
    }

    /// `V c` for an integer vector, with compensated summation.
    pub fn apply_counts(&self, c: &[i64]) -> Vec<f64> {
        (0..self.dim())
            .map(|r| {
                let row = self.matrix.row(r);
                compensated_dot(row.iter().copied(), c.iter().map(|&x| x as f64))
            })
            .collect()
    }
}

/// Dot product with error-free products and Neumaier summation.
pub fn compensated_dot(a: impl Iterator<Item = f64>, b: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut add = |x: f64| {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    };
    for (x, y) in a.zip(b) {
        let p = x * y;
        add(p);
        add(x.mul_add(y, -p));
    }
    sum + comp
}

pub(crate) fn int_to_f64(m: &IntMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        rat_to_f64(&BigRational::from_integer(m[(i, j)].clone()))
    })
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, &x| a.max(x.abs()))
}

/// Usual projection of a substitution: rows are the real and imaginary parts
/// of left eigenvectors of `M` for the contracting conjugates of `β`, real
/// conjugates first, one upper-half-plane root per complex pair.
pub fn usual_projection(s: &Substitution) -> Result<Projection, GeometryError> {
    usual_projection_of_matrix(&s.incidence_matrix())
}

pub fn usual_projection_of_matrix(m: &IntMatrix) -> Result<Projection, GeometryError> {
    let dec = spectral_decomposition(m)?;
    if !perron_is_pisot_unit(&dec)? {
        return Err(GeometryError::NotPisotUnit);
    }
    let n = m.rows();
    let f = &dec.factors[dec.perron_factor];
    let mut conj: Vec<_> = f
        .roots
        .iter()
        .enumerate()
        .filter(|&(j, r)| j != dec.perron_root && !r.center.im.is_negative())
        .map(|(_, r)| r.clone())
        .collect();
    conj.sort_by_key(|r| !r.real);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for r in conj {
        let field = LabeledField::new(f.poly.clone(), r.clone())?;
        let g = field.gen();
        let mt: Vec<Vec<FieldElement>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let x = field.from_rational(BigRational::from_integer(m[(j, i)].clone()));
                        if i == j {
                            &x - &g
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect();
        let ker = kernel_field(&field, mt, n);
        let l = ker
            .into_iter()
            .next()
            .expect("simple conjugate has an eigenvector");
        let vals: Vec<(f64, f64)> = l
            .iter()
            .map(|x| {
                let z = x.eval_precise();
                (rat_to_f64(&z.re), rat_to_f64(&z.im))
            })
            .collect();
        rows.push(vals.iter().map(|v| v.0).collect());
        if !r.real {
            rows.push(vals.iter().map(|v| v.1).collect());
        }
    }
    let d = rows.len();
    let v = DMatrix::from_fn(d, n, |i, j| rows[i][j]);
    Ok(Projection::from_matrix(ProjectionKind::Usual, v, m))
}

/// Rows `α_i (1,…,1) − w_i`.
pub fn torus_projection(
    m: &IntMatrix,
    w: &[Vec<BigInt>],
    alpha: &[FieldElement],
) -> Result<Projection, GeometryError> {
    let n = m.rows();
    for wi in w {
        if wi.len() != n {
            return Err(GeometryError::Dimension {
                found: wi.len(),
                expected: n,
            });
        }
    }
    let v = DMatrix::from_fn(w.len(), n, |i, j| {
        let a = alpha[i].eval_precise().re;
        rat_to_f64(&(a - BigRational::from_integer(w[i][j].clone())))
    });
    Ok(Projection::from_matrix(ProjectionKind::Torus, v, m))
}

/// Witness pairs `(w_i, α_i)` of an eigenvalue lattice whose `α_i` are
/// rationally independent together with 1, as many as its independent rank.
pub fn independent_witnesses(l: &EigenLattice) -> (Vec<Vec<BigInt>>, Vec<FieldElement>) {
    let mut rows: Vec<Vec<BigRational>> = vec![l.field.one().coords()];
    let (mut ws, mut alphas) = (Vec::new(), Vec::new());
    for (w, a) in &l.witnesses {
        if alphas.len() == l.alpha.independent_rank() {
            break;
        }
        rows.push(a.coords());
        if RatMatrix::from_rows(rows.clone()).rank() == rows.len() {
            ws.push(w.clone());
            alphas.push(a.clone());
        } else {
            rows.pop();
        }
    }
    (ws, alphas)
}

/// Torus projection of the working system of an eigenvalue lattice.
pub fn witness_projection(l: &EigenLattice) -> Result<Projection, GeometryError> {
    let (w, a) = independent_witnesses(l);
    torus_projection(l.working_matrix(), &w, &a)
}

/// `max_i ‖(α_i(1,…,1) − w_i) Mⁿ‖∞`, computed exactly.
pub fn projection_convergence(
    m: &IntMatrix,
    w: &[Vec<BigInt>],
    alpha: &[FieldElement],
    n: u32,
) -> f64 {
    w.iter()
        .zip(alpha)
        .map(|(w, a)| convergence_value(m, w, a, n))
        .fold(0.0, f64::max)
}

/// Projection `Π` onto the generalized eigenspaces of the non-zero
/// eigenvalues along the generalized kernel of `M`.
pub fn image_projector(m: &IntMatrix) -> RatMatrix {
    let n = m.rows();
    let cp = crate::exact::char_poly(m).expect("square matrix");
    let (k, q) = cp.split_x_power();
    if k == 0 {
        return RatMatrix::identity(n);
    }
    let image = rational_generalized_kernel(m, &q, 1);
    let kernel = rational_generalized_kernel(m, &IntPoly::x(), k);
    let r = image.len();
    let mut cols = image;
    cols.extend(kernel);
    let p = IntMatrix::from_cols(n, cols).to_rat();
    let pinv = p
        .inverse()
        .expect("generalized eigenspaces are complementary");
    let mut d = RatMatrix::zeros(n, n);
    for i in 0..r {
        d[(i, i)] = BigRational::from_integer(1.into());
    }
    p.mul_mat(&d).mul_mat(&pinv)
}

/// `V = V'Π`. Then `V M^k = V' M^k` for every `k` at least the nilpotency
/// index of `M` on its generalized kernel.
pub fn psi_base_projection(m: &IntMatrix, v_prime: &Projection) -> Projection {
    let pi = image_projector(m);
    let pf = DMatrix::from_fn(pi.rows(), pi.cols(), |i, j| rat_to_f64(&pi[(i, j)]));
    Projection::from_matrix(ProjectionKind::Usual, &v_prime.matrix * pf, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::parse_substitution;

    #[test]
    fn fibonacci_projection() {
        let s = parse_substitution("a->ab b->a").unwrap();
        let p = usual_projection(&s).unwrap();
        assert_eq!(p.dim(), 1);
        let conj = (1.0 - 5f64.sqrt()) / 2.0;
        let n = p.contraction.as_ref().unwrap();
        assert!((n[(0, 0)] - conj).abs() < 1e-12);
        // Left eigenvector: (x, y) M = conj (x, y) with M = [[1,1],[1,0]].
        let (x, y) = (p.matrix[(0, 0)], p.matrix[(0, 1)]);
        assert!((x + y - conj * x).abs() < 1e-12 && (x - conj * y).abs() < 1e-12);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((p.det_abs.unwrap() * phi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_conjugate_pair() {
        // Tribonacci: one complex pair of contracting conjugates.
        let s = parse_substitution("a->ab b->ac c->a").unwrap();
        let p = usual_projection(&s).unwrap();
        assert_eq!(p.dim(), 2);
        assert!(p.residual < 1e-9);
        let n = p.contraction.unwrap();
        // Rotation-scaling block [[a, -b], [b, a]].
        assert!((n[(0, 0)] - n[(1, 1)]).abs() < 1e-9);
        assert!((n[(0, 1)] + n[(1, 0)]).abs() < 1e-9);
    }

    #[test]
    fn non_pisot_rejected() {
        let s = parse_substitution("a->abbbccccccccccdddddddd b->bccc c->d d->a").unwrap();
        assert!(matches!(
            usual_projection(&s),
            Err(GeometryError::NotPisotUnit)
        ));
    }

    #[test]
    fn compensated_dot_cancels() {
        let a = [1e16, 1.0, -1e16];
        let b = [1.0, 1.0, 1.0];
        assert_eq!(compensated_dot(a.iter().copied(), b.iter().copied()), 1.0);
    }

    #[test]
    fn projector_is_idempotent() {
        let m = IntMatrix::from_i64(&[&[1, 1, 0], &[1, 0, 0], &[0, 1, 0]]);
        let p = image_projector(&m);
        assert_eq!(p.mul_mat(&p), p);
        assert_eq!(p.mul_mat(&m.to_rat()), m.to_rat());
    }
}
