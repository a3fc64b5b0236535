//! Eigenvalues of substitution subshifts.
//!
//! `e^{2iπα}` is an eigenvalue of a (left-)proper primitive
//! pseudo-unimodular substitution iff some integer row vector `w` satisfies
//! `w v = α` for every sum-one generalized eigenvector `v` of an eigenvalue of
//! modulus at least one, and `w v = 0` for every sum-zero one. The valid `w`
//! are the integer left kernel of a matrix `M_S` collecting the rational
//! coordinates of the differences and sum-zero vectors; `α = w v₀` with `v₀`
//! the Perron eigenvector of sum one.

mod classify;
mod lattice;

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::eigen::rational_generalized_kernel;
use crate::exact::matrix::primitive_vec;
use crate::exact::roots::{compare_real, largest_real_root, refine};
use crate::exact::{
    char_poly, compositum, factor_rational, generalized_eigenspace, integer_left_kernel,
    is_pisot_unit, is_pseudo_unimodular, isolate_roots, modulus_vs_one, ExactError, FieldElement,
    IntMatrix, IntPoly, IntegerLattice, LabeledField, ModulusClass, RootBox,
};
use crate::proprify::{proprify, Proprification, ProprifyError};
use crate::substitution::{matrix_primitivity, Substitution};

pub use classify::{
    check_finite_extension_hypothesis, classify, hypothesis_on, pisot_rank_bound_check,
    torus_factor_vectors, weakly_irreducible_pisot, ClassKind, Classification, HypothesisCheck,
    PisotRankReport, TorusFactor,
};
pub use lattice::AlphaLattice;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectrumError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Proprify(#[from] ProprifyError),
    #[error("the incidence matrix is not primitive")]
    NotPrimitive,
    #[error("the incidence matrix is not pseudo-unimodular")]
    NotPseudoUnimodular,
    #[error("the Perron eigenvalue is not a Pisot unit")]
    NotPisotUnit,
    #[error("the Perron eigenvalue is a Pisot number")]
    PerronIsPisot,
    #[error("the finite extension hypothesis fails at factor {0}")]
    HypothesisFails(String),
    #[error("found only {found} of {needed} independent torus coordinates")]
    TorusRank { found: usize, needed: usize },
}

/// An irreducible factor of the characteristic polynomial with its roots.
#[derive(Clone, Debug)]
pub struct FactorInfo {
    pub poly: IntPoly,
    pub multiplicity: usize,
    pub roots: Vec<RootBox>,
    pub modulus: Vec<ModulusClass>,
}

impl FactorInfo {
    pub fn has_large_root(&self) -> bool {
        self.modulus.iter().any(|&m| m != ModulusClass::Less)
    }
}

#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub matrix: IntMatrix,
    pub char_poly: IntPoly,
    pub factors: Vec<FactorInfo>,
    /// Index in `factors` of the minimal polynomial of the Perron root.
    pub perron_factor: usize,
    /// Index of the Perron root in that factor's root list.
    pub perron_root: usize,
    pub perron: Arc<LabeledField>,
    /// Perron eigenvector normalized to sum one.
    pub v0: Vec<FieldElement>,
}

impl SpectralDecomposition {
    pub fn perron_poly(&self) -> &IntPoly {
        &self.factors[self.perron_factor].poly
    }

    /// `(factor index, root index)` of every eigenvalue of modulus `>= 1`.
    pub fn modulus_ge_one_roots(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            for (j, m) in f.modulus.iter().enumerate() {
                if *m != ModulusClass::Less {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

fn is_x(p: &IntPoly) -> bool {
    *p == IntPoly::x()
}

/// Factors the characteristic polynomial, certifies the modulus class of
/// every root and computes the Perron eigenvector over `Q(β)`.
pub fn spectral_decomposition(m: &IntMatrix) -> Result<SpectralDecomposition, SpectrumError> {
    if !m.is_square() {
        return Err(ExactError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        }
        .into());
    }
    if !matrix_primitivity(m).primitive {
        return Err(SpectrumError::NotPrimitive);
    }
    let cp = char_poly(m)?;
    let mut factors = Vec::new();
    for (q, e) in factor_rational(&cp)? {
        let roots = if is_x(&q) {
            vec![RootBox::exact(BigRational::zero())]
        } else {
            isolate_roots(&q)?
        };
        let modulus = roots.iter().map(|r| modulus_vs_one(r, &q)).collect();
        factors.push(FactorInfo {
            poly: q,
            multiplicity: e,
            roots,
            modulus,
        });
    }
    // Spectral radius: the largest real root over all factors.
    let mut best: Option<(usize, RootBox)> = None;
    for (i, f) in factors.iter().enumerate() {
        if is_x(&f.poly) {
            continue;
        }
        if let Some(r) = largest_real_root(&f.poly)? {
            let better = match &best {
                None => true,
                Some((j, b)) => {
                    compare_real(&f.poly, &r, &factors[*j].poly, b) == Ordering::Greater
                }
            };
            if better {
                best = Some((i, r));
            }
        }
    }
    let (perron_factor, pbox) = best.ok_or(SpectrumError::NotPrimitive)?;
    let perron_root = factors[perron_factor]
        .roots
        .iter()
        .position(|r| *r == pbox)
        .expect("largest real root is among the isolated roots");
    let perron = LabeledField::new(factors[perron_factor].poly.clone(), pbox)?;
    let space = generalized_eigenspace(m, &perron, 1)?;
    let v = normalize_sum_basis(space);
    let v0 = v.into_iter().next().expect("Perron eigenspace is a line");
    Ok(SpectralDecomposition {
        matrix: m.clone(),
        char_poly: cp,
        factors,
        perron_factor,
        perron_root,
        perron,
        v0,
    })
}

fn vec_sum(v: &[FieldElement]) -> FieldElement {
    let field = v[0].field().clone();
    v.iter().fold(field.zero(), |acc, x| &acc + x)
}

/// Makes every vector sum to 0 or 1 without changing the span: the first
/// vector of non-zero sum is scaled to sum one and used to clear the sums of
/// the others.
pub fn normalize_sum_basis(mut basis: Vec<Vec<FieldElement>>) -> Vec<Vec<FieldElement>> {
    let sums: Vec<FieldElement> = basis.iter().map(|v| vec_sum(v)).collect();
    let Some(p) = sums.iter().position(|s| !s.is_zero()) else {
        return basis;
    };
    let inv = sums[p].inv().unwrap();
    let pivot: Vec<FieldElement> = basis[p].iter().map(|x| x * &inv).collect();
    for (i, v) in basis.iter_mut().enumerate() {
        if i == p {
            *v = pivot.clone();
        } else if !sums[i].is_zero() {
            for (x, y) in v.iter_mut().zip(&pivot) {
                *x = &*x - &(&sums[i] * y);
            }
        }
    }
    basis
}

/// Provenance of a vector of the S-set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SKind {
    /// Rational basis vector of `ker q(M)^e` when all of it has sum zero.
    RationalSumZero,
    /// Generalized eigenvector of sum zero for one root of the factor.
    SumZero { root: usize },
    /// `v - v₀` with `v` of sum one for one root of the factor.
    Difference { root: usize },
}

#[derive(Clone, Debug)]
pub struct SVector {
    pub factor: usize,
    pub kind: SKind,
    /// Entries over the field the vector lives in (`Q` for rational ones).
    pub entries: Vec<FieldElement>,
}

#[derive(Clone, Debug)]
pub struct SData {
    pub decomposition: SpectralDecomposition,
    pub s: Vec<SVector>,
    /// Integer matrix with one column per non-zero rational coordinate of
    /// each S-vector, each column scaled to a primitive integer vector.
    pub ms: IntMatrix,
}

fn upper_half_plane(p: &IntPoly, r: &RootBox) -> bool {
    if r.real {
        return true;
    }
    let mut r = r.clone();
    loop {
        if r.center.im.abs() > r.half_width {
            return r.center.im.is_positive();
        }
        let w = &r.half_width / BigRational::from_integer(BigInt::from(4));
        r = refine(p, &r, &w);
    }
}

/// Columns of rational coordinates of a vector over a number field.
fn coordinate_columns(v: &[FieldElement]) -> Vec<Vec<BigInt>> {
    let deg = v[0].field().degree();
    let coords: Vec<Vec<BigRational>> = v.iter().map(FieldElement::coords).collect();
    (0..deg)
        .filter_map(|j| {
            let col: Vec<BigRational> = coords.iter().map(|c| c[j].clone()).collect();
            integer_column(&col)
        })
        .collect()
}

fn integer_column(col: &[BigRational]) -> Option<Vec<BigInt>> {
    if col.iter().all(Zero::is_zero) {
        return None;
    }
    let l = col.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    Some(primitive_vec(
        col.iter()
            .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
            .collect(),
    ))
}

/// Builds the S-set and `M_S` for a primitive pseudo-unimodular matrix.
pub fn build_s_and_ms(m: &IntMatrix) -> Result<SData, SpectrumError> {
    let dec = spectral_decomposition(m)?;
    if !is_pseudo_unimodular(m)? {
        return Err(SpectrumError::NotPseudoUnimodular);
    }
    let n = m.rows();
    let mut s = Vec::new();
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    let rationals = LabeledField::rationals();

    for (fi, f) in dec.factors.iter().enumerate() {
        if !f.has_large_root() {
            continue;
        }
        let roots: Vec<usize> = (0..f.roots.len())
            .filter(|&j| f.modulus[j] != ModulusClass::Less)
            .filter(|&j| upper_half_plane(&f.poly, &f.roots[j]))
            .collect();
        if fi == dec.perron_factor {
            // Conjugates of β: their eigenvectors are Galois images of v₀.
            for j in roots.into_iter().filter(|&j| j != dec.perron_root) {
                let fg = LabeledField::new(f.poly.clone(), f.roots[j].clone())?;
                let vg: Vec<FieldElement> = dec
                    .v0
                    .iter()
                    .map(|x| FieldElement::new(&fg, x.residue().clone()))
                    .collect();
                let c = compositum(&dec.perron, &fg)?;
                let diff: Vec<FieldElement> = vg
                    .iter()
                    .zip(&dec.v0)
                    .map(|(a, b)| &c.embed2(a) - &c.embed1(b))
                    .collect();
                cols.extend(coordinate_columns(&diff));
                s.push(SVector {
                    factor: fi,
                    kind: SKind::Difference { root: j },
                    entries: diff,
                });
            }
            continue;
        }
        let ker = rational_generalized_kernel(m, &f.poly, f.multiplicity);
        let all_zero = ker.iter().all(|v| v.iter().sum::<BigInt>().is_zero());
        if all_zero {
            for v in ker {
                cols.push(primitive_vec(v.clone()));
                s.push(SVector {
                    factor: fi,
                    kind: SKind::RationalSumZero,
                    entries: v
                        .into_iter()
                        .map(|x| rationals.from_rational(BigRational::from_integer(x)))
                        .collect(),
                });
            }
            continue;
        }
        for j in roots {
            let fg = LabeledField::new(f.poly.clone(), f.roots[j].clone())?;
            let basis = normalize_sum_basis(generalized_eigenspace(m, &fg, f.multiplicity)?);
            for v in basis {
                if vec_sum(&v).is_zero() {
                    cols.extend(coordinate_columns(&v));
                    s.push(SVector {
                        factor: fi,
                        kind: SKind::SumZero { root: j },
                        entries: v,
                    });
                } else {
                    let c = compositum(&dec.perron, &fg)?;
                    let diff: Vec<FieldElement> = v
                        .iter()
                        .zip(&dec.v0)
                        .map(|(a, b)| &c.embed2(a) - &c.embed1(b))
                        .collect();
                    cols.extend(coordinate_columns(&diff));
                    s.push(SVector {
                        factor: fi,
                        kind: SKind::Difference { root: j },
                        entries: diff,
                    });
                }
            }
        }
    }
    let ms = if cols.is_empty() {
        IntMatrix::zeros(n, 0)
    } else {
        IntMatrix::from_cols(n, cols)
    };
    Ok(SData {
        decomposition: dec,
        s,
        ms,
    })
}

/// `w v` over the field of `v`.
pub fn dot_int(w: &[BigInt], v: &[FieldElement]) -> FieldElement {
    let field = v[0].field().clone();
    w.iter().zip(v).fold(field.zero(), |acc, (a, x)| {
        if a.is_zero() {
            acc
        } else {
            &acc + &x.scale(&BigRational::from_integer(a.clone()))
        }
    })
}

/// Which system the lattice was computed on.
#[derive(Clone, Debug)]
pub enum Working {
    /// The input itself; `left_proper_power` is `None` when no power up to
    /// the search bound is left-proper and proprification was disabled.
    Original {
        left_proper_power: Option<usize>,
    },
    Proprified(Box<Proprification>),
}

#[derive(Clone, Debug)]
pub struct EigenLattice {
    /// `Q(β)` for the Perron root `β` of the input substitution.
    pub field: Arc<LabeledField>,
    pub alpha: AlphaLattice,
    /// Valid `w` over the working alphabet.
    pub kernel_basis: IntegerLattice,
    /// `(w, w v₀)` for each kernel basis vector, `w v₀` expressed in `field`.
    pub witnesses: Vec<(Vec<BigInt>, FieldElement)>,
    pub working: Working,
    pub data: SData,
}

impl EigenLattice {
    /// True when completeness of the lattice rests on left-properness of a
    /// power of the working substitution (always the case for `ξ`).
    pub fn complete(&self) -> bool {
        match &self.working {
            Working::Original { left_proper_power } => left_proper_power.is_some(),
            Working::Proprified(p) => p.left_proper_power.is_some(),
        }
    }

    pub fn working_matrix(&self) -> &IntMatrix {
        &self.data.decomposition.matrix
    }
}

/// Powers searched for left-properness before proprifying.
pub const PROPER_POWER_SEARCH: usize = 8;

/// Substitution the eigenvalue computation runs on.
pub fn working_substitution(
    s: &Substitution,
    allow_proprify: bool,
) -> Result<(Substitution, Working), SpectrumError> {
    match s.proper_power(PROPER_POWER_SEARCH) {
        Some(k) => Ok((
            s.clone(),
            Working::Original {
                left_proper_power: Some(k),
            },
        )),
        None if allow_proprify => {
            let p = proprify(s)?;
            Ok((p.xi.clone(), Working::Proprified(Box::new(p))))
        }
        None => Ok((
            s.clone(),
            Working::Original {
                left_proper_power: None,
            },
        )),
    }
}

/// Integer kernel of `M_S` and the α-lattice of a matrix, in its own
/// `Q(β)`.
pub fn lattice_of_matrix(
    m: &IntMatrix,
) -> Result<(SData, IntegerLattice, Vec<(Vec<BigInt>, FieldElement)>), SpectrumError> {
    let data = build_s_and_ms(m)?;
    let n = m.rows();
    let kernel = if data.ms.cols() == 0 {
        IntegerLattice::full(n)
    } else {
        integer_left_kernel(&data.ms)
    };
    let witnesses = kernel
        .basis
        .iter()
        .map(|w| (w.clone(), dot_int(w, &data.decomposition.v0)))
        .collect();
    Ok((data, kernel, witnesses))
}

/// The α-lattice of the subshift of `s`, expressed in `Q(β)`.
pub fn eigenvalue_lattice(
    s: &Substitution,
    allow_proprify: bool,
) -> Result<EigenLattice, SpectrumError> {
    let m = s.incidence_matrix();
    if !matrix_primitivity(&m).primitive {
        return Err(SpectrumError::NotPrimitive);
    }
    if !is_pseudo_unimodular(&m)? {
        return Err(SpectrumError::NotPseudoUnimodular);
    }
    let (ws, working) = working_substitution(s, allow_proprify)?;
    let (data, kernel, wit) = lattice_of_matrix(&ws.incidence_matrix())?;
    let field = match &working {
        Working::Original { .. } => data.decomposition.perron.clone(),
        Working::Proprified(_) => spectral_decomposition(&m)?.perron,
    };
    let work_field = data.decomposition.perron.clone();
    let witnesses: Vec<(Vec<BigInt>, FieldElement)> = if work_field.same_as(&field) {
        wit
    } else {
        // Q(β_ξ) ⊆ Q(β): ξ's Perron root is a power of β.
        let c = compositum(&field, &work_field)?;
        debug_assert!(c.field.same_as(&field));
        wit.into_iter().map(|(w, a)| (w, c.embed2(&a))).collect()
    };
    let alpha = AlphaLattice::new(&field, witnesses.iter().map(|(_, a)| a.clone()));
    Ok(EigenLattice {
        field,
        alpha,
        kernel_basis: kernel,
        witnesses,
        working,
        data,
    })
}

/// `‖(α(1,…,1) − w) Mⁿ‖∞`. The products are exact; `α` is approximated
/// to well below the size of the entries of `(1,…,1) Mⁿ`.
pub fn convergence_value(m: &IntMatrix, w: &[BigInt], alpha: &FieldElement, n: u32) -> f64 {
    PowerOracle::new(m, n).value(w, alpha)
}

/// `Mⁿ` and `(1,…,1) Mⁿ` kept for repeated convergence queries.
#[derive(Clone, Debug)]
pub struct PowerOracle {
    mn: IntMatrix,
    u: Vec<BigInt>,
}

impl PowerOracle {
    pub fn new(m: &IntMatrix, n: u32) -> Self {
        let mn = m.pow(n as u64);
        let u = mn.vec_mul(&vec![BigInt::one(); m.rows()]);
        PowerOracle { mn, u }
    }

    /// `‖(α(1,…,1) − w) Mⁿ‖∞`.
    pub fn value(&self, w: &[BigInt], alpha: &FieldElement) -> f64 {
        let v = self.mn.vec_mul(w);
        let a = approximate_real(alpha, &self.u);
        self.u
            .iter()
            .zip(&v)
            .map(|(ui, vi)| {
                let x = &a * BigRational::from_integer(ui.clone())
                    - BigRational::from_integer(vi.clone());
                rat_to_f64(&x).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Oracle form: true iff the value is below `tol`.
pub fn convergence_oracle(
    m: &IntMatrix,
    w: &[BigInt],
    alpha: &FieldElement,
    n: u32,
    tol: f64,
) -> bool {
    convergence_value(m, w, alpha, n) < tol
}

/// Rational within `2^-64 / max|u|` of the real number `alpha`.
fn approximate_real(alpha: &FieldElement, u: &[BigInt]) -> BigRational {
    if let Some(q) = alpha.as_rational() {
        return q;
    }
    let field = alpha.field();
    let umax = u.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::one);
    let coeffs = alpha.residue().coeffs();
    // |r(x) - r(y)| <= |x - y| * sum |c_i| i R^(i-1) with R a bound on |β|.
    let r_bound = field.root().center.re.abs().ceil() + BigRational::from_integer(2.into());
    let mut lip = BigRational::zero();
    for (i, c) in coeffs.iter().enumerate().skip(1) {
        let mut t = c.abs() * BigRational::from_integer(BigInt::from(i));
        for _ in 1..i {
            t *= &r_bound;
        }
        lip += t;
    }
    let target = BigRational::new(
        BigInt::one(),
        (BigInt::one() << 64u32)
            * (umax + BigInt::one())
            * (lip.ceil().to_integer() + BigInt::one()),
    );
    let r = refine(field.min_poly(), field.root(), &target);
    let x = r.center.re;
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * &x + c)
}

pub fn rat_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // Numerator and denominator may overflow f64 separately.
        let shift = x.denom().bits().max(x.numer().bits()) as i64 - 1000;
        if shift <= 0 {
            return f64::NAN;
        }
        let s = shift as u32;
        let n = (x.numer() >> s).to_f64().unwrap_or(f64::NAN);
        let d = (x.denom() >> s).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Pisot report of the Perron factor.
pub fn perron_is_pisot_unit(dec: &SpectralDecomposition) -> Result<bool, SpectrumError> {
    let rep = is_pisot_unit(dec.perron_poly())?;
    Ok(rep.pisot && rep.unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::parse_substitution;

    #[test]
    fn normalize_sums() {
        let q = LabeledField::rationals();
        let v = |a: &[i64]| a.iter().map(|&x| q.from_int(x)).collect::<Vec<_>>();
        let out = normalize_sum_basis(vec![v(&[1, 1]), v(&[1, 2])]);
        let sums: Vec<FieldElement> = out.iter().map(|x| vec_sum(x)).collect();
        assert!(sums[0].is_one() && sums[1].is_zero());
        let zero = normalize_sum_basis(vec![v(&[1, -1])]);
        assert!(vec_sum(&zero[0]).is_zero());
    }

    #[test]
    fn fibonacci_has_empty_s() {
        let s = parse_substitution("a->ab b->a").unwrap();
        let d = build_s_and_ms(&s.incidence_matrix()).unwrap();
        assert!(d.s.is_empty());
        assert_eq!(d.ms.cols(), 0);
        let l = eigenvalue_lattice(&s, true).unwrap();
        assert!(l.kernel_basis.is_full());
        assert_eq!(l.alpha.independent_rank(), 1);
    }

    #[test]
    fn sqrt_two_lattice() {
        let s = parse_substitution("a->abdd b->bc c->d d->a").unwrap();
        let m = s.incidence_matrix();
        assert_eq!(m.row(0), [1, 0, 0, 1].map(BigInt::from));
        let (data, kernel, _) = lattice_of_matrix(&m).unwrap();
        assert_eq!(data.s.len(), 1);
        let expect = IntegerLattice::from_generators(
            4,
            &[vec![1, 1, 1, 1], vec![0, 3, 4, 1]]
                .into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect::<Vec<_>>(),
        );
        assert_eq!(kernel, expect);
    }
}
