//! Number fields `Q(γ)` tagged with one complex root, their elements, and
//! composita of two such fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::charpoly::char_poly;
use super::factor::{factor_rational, is_irreducible, is_squarefree};
use super::matrix::{IntMatrix, RatMatrix};
use super::poly::{IntPoly, QPoly};
use super::roots::{isolate_roots, refine, CRat, RootBox};
use super::ExactError;

/// `Q(γ)` where `γ` is the root of `min_poly` isolated by `root`.
#[derive(Debug)]
pub struct LabeledField {
    min_poly: IntPoly,
    modulus: QPoly,
    root: RootBox,
    precise: OnceLock<CRat>,
}

impl PartialEq for LabeledField {
    fn eq(&self, o: &Self) -> bool {
        self.min_poly == o.min_poly && self.root == o.root
    }
}

impl LabeledField {
    /// Fails unless `min_poly` is monic and irreducible.
    pub fn new(min_poly: IntPoly, root: RootBox) -> Result<Arc<Self>, ExactError> {
        if !min_poly.is_monic() || !is_irreducible(&min_poly) {
            return Err(ExactError::Reducible(min_poly.to_string()));
        }
        Ok(Arc::new(Self::new_unchecked(min_poly, root)))
    }

    pub(crate) fn new_unchecked(min_poly: IntPoly, root: RootBox) -> Self {
        LabeledField {
            modulus: min_poly.to_qpoly(),
            min_poly,
            root,
            precise: OnceLock::new(),
        }
    }

    pub fn rationals() -> Arc<Self> {
        Arc::new(Self::new_unchecked(
            IntPoly::x(),
            RootBox::exact(BigRational::zero()),
        ))
    }

    pub fn min_poly(&self) -> &IntPoly {
        &self.min_poly
    }

    pub fn root(&self) -> &RootBox {
        &self.root
    }

    pub fn degree(&self) -> usize {
        self.min_poly.deg()
    }

    /// Root approximation with error below `1e-40` in each coordinate.
    pub fn root_precise(&self) -> &CRat {
        self.precise.get_or_init(|| {
            let w = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(40));
            refine(&self.min_poly, &self.root, &w).center
        })
    }

    pub fn root_approx(&self) -> Complex64 {
        self.root_precise().to_c64()
    }

    pub fn gen(self: &Arc<Self>) -> FieldElement {
        FieldElement::new(self, QPoly::x())
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement::new(self, QPoly::zero())
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        FieldElement::new(self, QPoly::one())
    }

    pub fn from_rational(self: &Arc<Self>, q: BigRational) -> FieldElement {
        FieldElement::new(self, QPoly::constant(q))
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> FieldElement {
        self.from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Element with the given power-basis coordinates.
    pub fn from_coords(self: &Arc<Self>, coords: Vec<BigRational>) -> FieldElement {
        FieldElement::new(self, QPoly::new(coords))
    }

    /// Both fields are the same subfield of C with the same generator.
    pub fn same_as(&self, o: &LabeledField) -> bool {
        self.min_poly == o.min_poly && same_root(&self.min_poly, &self.root, &o.root)
    }
}

/// Decides whether two boxes of the same squarefree polynomial isolate the
/// same root.
pub fn same_root(p: &IntPoly, a: &RootBox, b: &RootBox) -> bool {
    if !a.intersects(b) {
        return false;
    }
    let roots = isolate_roots(p).unwrap_or_default();
    root_index(p, &roots, a) == root_index(p, &roots, b)
}

/// Index of the isolated root (among `roots`) which `r` also isolates.
pub fn root_index(p: &IntPoly, roots: &[RootBox], r: &RootBox) -> usize {
    let mut r = r.clone();
    let mut roots = roots.to_vec();
    loop {
        let hits: Vec<usize> = (0..roots.len())
            .filter(|&j| roots[j].intersects(&r))
            .collect();
        if hits.len() == 1 {
            return hits[0];
        }
        assert!(!hits.is_empty(), "box does not isolate a root of {p}");
        let w = std::cmp::max(r.half_width.clone(), roots[hits[0]].half_width.clone())
            / BigRational::from_integer(BigInt::from(4));
        r = refine(p, &r, &w);
        for &j in &hits {
            roots[j] = refine(p, &roots[j], &w);
        }
    }
}

impl fmt::Display for LabeledField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[x]/({}) at x = {}", self.min_poly, self.root)
    }
}

/// Element of a labeled field, stored as a reduced polynomial in the
/// generator.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Arc<LabeledField>,
    residue: QPoly,
}

impl PartialEq for FieldElement {
    fn eq(&self, o: &Self) -> bool {
        self.residue == o.residue
    }
}

impl Eq for FieldElement {}

impl FieldElement {
    pub fn new(field: &Arc<LabeledField>, residue: QPoly) -> Self {
        let residue = if residue.deg() >= field.degree() && !residue.is_zero() {
            residue.rem(&field.modulus)
        } else {
            residue
        };
        FieldElement {
            field: field.clone(),
            residue,
        }
    }

    pub fn field(&self) -> &Arc<LabeledField> {
        &self.field
    }

    pub fn residue(&self) -> &QPoly {
        &self.residue
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.residue == QPoly::one()
    }

    /// Rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        (self.residue.deg() == 0).then(|| self.residue.coeff(0))
    }

    /// Power-basis coordinates, padded to the field degree.
    pub fn coords(&self) -> Vec<BigRational> {
        (0..self.field.degree())
            .map(|i| self.residue.coeff(i))
            .collect()
    }

    pub fn inv(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        let (g, s, _) = QPoly::ext_gcd(&self.residue, &self.field.modulus);
        debug_assert_eq!(g, QPoly::one());
        Some(FieldElement::new(&self.field, s))
    }

    pub fn pow(&self, e: u32) -> FieldElement {
        let mut r = self.field.one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    pub fn scale(&self, k: &BigRational) -> FieldElement {
        FieldElement::new(&self.field, self.residue.scale(k))
    }

    /// Exact value at the precise root approximation.
    pub fn eval_precise(&self) -> CRat {
        let z = self.field.root_precise();
        let mut acc = CRat::zero();
        for c in self.residue.coeffs().iter().rev() {
            acc = &(&acc * z) + &CRat::real(c.clone());
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        self.eval_precise().to_c64()
    }

    /// Image under the field morphism sending the generator to `image`.
    pub fn embed(&self, image: &FieldElement) -> FieldElement {
        let mut acc = image.field.zero();
        for c in self.residue.coeffs().iter().rev() {
            acc = &(&acc * image) + &image.field.from_rational(c.clone());
        }
        acc
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            residue: &self.residue + &o.residue,
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            residue: &self.residue - &o.residue,
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        FieldElement::new(&self.field, &self.residue * &o.residue)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            residue: -&self.residue,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Printed as a polynomial in the generator, named b.
        let s = self.residue.to_string();
        write!(f, "{}", s.replace('x', "b"))
    }
}

/// `p(x)` for an integer polynomial `p`.
pub fn eval_at(p: &IntPoly, x: &FieldElement) -> FieldElement {
    let field = x.field();
    let mut acc = field.zero();
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * x) + &field.from_rational(BigRational::from_integer(c.clone()));
    }
    acc
}

/// Reduced row echelon form over a number field; returns pivot columns.
pub fn rref_field(rows: &mut [Vec<FieldElement>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("non-zero pivot");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, pv) in row.iter_mut().zip(&pivot) {
                *x = &*x - &(&f * pv);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel of a matrix over a number field.
pub fn kernel_field(
    field: &Arc<LabeledField>,
    rows: Vec<Vec<FieldElement>>,
    ncols: usize,
) -> Vec<Vec<FieldElement>> {
    let mut rows = rows;
    let pivots = rref_field(&mut rows);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![field.zero(); ncols];
            v[f] = field.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -&rows[i][f];
            }
            v
        })
        .collect()
}

/// A field containing two given fields, with the images of both generators.
#[derive(Clone, Debug)]
pub struct Compositum {
    pub field: Arc<LabeledField>,
    pub image1: FieldElement,
    pub image2: FieldElement,
}

impl Compositum {
    pub fn embed1(&self, x: &FieldElement) -> FieldElement {
        x.embed(&self.image1)
    }

    pub fn embed2(&self, x: &FieldElement) -> FieldElement {
        x.embed(&self.image2)
    }
}

fn companion(p: &IntPoly) -> IntMatrix {
    let n = p.deg();
    let mut m = IntMatrix::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = BigInt::one();
    }
    for i in 0..n {
        m[(i, n - 1)] = -p.coeff(i);
    }
    m
}

/// Compositum `Q(a, b)` with primitive element `θ = a + k b`, `k` the
/// smallest positive integer giving a squarefree resultant. When one field
/// contains the other, that field itself is returned with its own generator.
pub fn compositum(
    f1: &Arc<LabeledField>,
    f2: &Arc<LabeledField>,
) -> Result<Compositum, ExactError> {
    if f2.degree() == 1 {
        let b = BigRational::new(-f2.min_poly.coeff(0), f2.min_poly.coeff(1));
        return Ok(Compositum {
            field: f1.clone(),
            image1: f1.gen(),
            image2: f1.from_rational(b),
        });
    }
    if f1.degree() == 1 {
        let a = BigRational::new(-f1.min_poly.coeff(0), f1.min_poly.coeff(1));
        return Ok(Compositum {
            field: f2.clone(),
            image1: f2.from_rational(a),
            image2: f2.gen(),
        });
    }
    if f1.same_as(f2) {
        return Ok(Compositum {
            field: f1.clone(),
            image1: f1.gen(),
            image2: f1.gen(),
        });
    }
    let (n, m) = (f1.degree(), f2.degree());
    let c1 = companion(&f1.min_poly);
    let c2 = companion(&f2.min_poly);
    for k in 1..=64i64 {
        // Kronecker sum C1 (x) I + k I (x) C2 has eigenvalues a_i + k b_j.
        let mut ks = IntMatrix::zeros(n * m, n * m);
        for i in 0..n {
            for j in 0..n {
                for l in 0..m {
                    ks[(i * m + l, j * m + l)] += &c1[(i, j)];
                }
            }
            for l in 0..m {
                for q in 0..m {
                    ks[(i * m + l, i * m + q)] += &c2[(l, q)] * BigInt::from(k);
                }
            }
        }
        let h = char_poly(&ks)?;
        if !is_squarefree(&h) {
            continue;
        }
        let (g, theta_box) = locate_theta(f1, f2, k, &h)?;
        let field = Arc::new(LabeledField::new_unchecked(g, theta_box));
        let theta = field.gen();
        let b = common_root(&field, &f1.min_poly, &f2.min_poly, k)?;
        let a = &theta - &b.scale(&BigRational::from_integer(BigInt::from(k)));
        let result = if field.degree() == n {
            rebase(f1, &a, &b)
        } else if field.degree() == m {
            let c = rebase(f2, &b, &a);
            Compositum {
                field: c.field,
                image1: c.image2,
                image2: c.image1,
            }
        } else {
            Compositum {
                field,
                image1: a,
                image2: b,
            }
        };
        debug_assert!(eval_at(&f1.min_poly, &result.image1).is_zero());
        debug_assert!(eval_at(&f2.min_poly, &result.image2).is_zero());
        return Ok(result);
    }
    Err(ExactError::PrimitiveElement)
}

/// Finds the irreducible factor of `h` having `θ = a + k b` as a root.
fn locate_theta(
    f1: &LabeledField,
    f2: &LabeledField,
    k: i64,
    h: &IntPoly,
) -> Result<(IntPoly, RootBox), ExactError> {
    let factors = factor_rational(h)?;
    let mut cands: Vec<(IntPoly, RootBox)> = Vec::new();
    for (g, _) in &factors {
        for b in isolate_roots(g)? {
            cands.push((g.clone(), b));
        }
    }
    let kq = BigRational::from_integer(BigInt::from(k));
    let mut ra = f1.root.clone();
    let mut rb = f2.root.clone();
    loop {
        let tb = RootBox {
            center: &ra.center + &rb.center.scale(&kq),
            half_width: &ra.half_width + &kq * &rb.half_width,
            real: false,
        };
        let hits: Vec<usize> = (0..cands.len())
            .filter(|&i| cands[i].1.intersects(&tb))
            .collect();
        if hits.len() == 1 {
            return Ok(cands.swap_remove(hits[0]));
        }
        let w = std::cmp::max(
            tb.half_width.clone(),
            BigRational::new(BigInt::one(), BigInt::from(1u64 << 60)),
        ) / BigRational::from_integer(BigInt::from(8));
        ra = refine(&f1.min_poly, &ra, &w);
        rb = refine(&f2.min_poly, &rb, &w);
        for &i in &hits {
            cands[i].1 = refine(&cands[i].0, &cands[i].1, &w);
        }
    }
}

type FPoly = Vec<FieldElement>;

fn fpoly_trim(mut p: FPoly) -> FPoly {
    while p.last().is_some_and(FieldElement::is_zero) {
        p.pop();
    }
    p
}

fn fpoly_rem(a: &FPoly, b: &FPoly) -> FPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let inv = b[db].inv().expect("non-zero leading coefficient");
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = &r[r.len() - 1] * &inv;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = &r[shift + j] - &(&c * bj);
        }
        r = fpoly_trim(r);
    }
    r
}

/// The root `b` of `f2` with `f1(θ - k b) = 0`, expressed in `Q(θ)`.
fn common_root(
    field: &Arc<LabeledField>,
    f1: &IntPoly,
    f2: &IntPoly,
    k: i64,
) -> Result<FieldElement, ExactError> {
    let theta = field.gen();
    // f1(θ - k y) as a polynomial in y over Q(θ).
    let lin: FPoly = vec![theta, field.from_int(-k)];
    let mut a: FPoly = Vec::new();
    for c in f1.coeffs().iter().rev() {
        let mut next = vec![field.zero(); a.len() + 1];
        for (i, ai) in a.iter().enumerate() {
            next[i] = &next[i] + &(ai * &lin[0]);
            next[i + 1] = &next[i + 1] + &(ai * &lin[1]);
        }
        next[0] = &next[0] + &field.from_rational(BigRational::from_integer(c.clone()));
        a = fpoly_trim(next);
    }
    let mut b: FPoly = f2
        .coeffs()
        .iter()
        .map(|c| field.from_rational(BigRational::from_integer(c.clone())))
        .collect();
    while !b.is_empty() {
        let r = fpoly_rem(&a, &b);
        a = b;
        b = r;
    }
    if a.len() != 2 {
        return Err(ExactError::PrimitiveElement);
    }
    let inv = a[1].inv().expect("non-zero");
    Ok(-&(&a[0] * &inv))
}

/// Re-expresses the compositum `Q(θ)` (equal to `f`) in the power basis of
/// `f`'s generator `a`; `b` is carried along.
fn rebase(f: &Arc<LabeledField>, a: &FieldElement, b: &FieldElement) -> Compositum {
    let n = f.degree();
    // Rows: coordinates of a^i in the θ basis.
    let mut rows = Vec::with_capacity(n);
    let mut p = a.field().one();
    for _ in 0..n {
        rows.push(p.coords());
        p = &p * a;
    }
    let t = RatMatrix::from_rows(rows).transpose();
    let x = t.solve(&b.coords()).expect("a generates the compositum");
    Compositum {
        field: f.clone(),
        image1: f.gen(),
        image2: f.from_coords(x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(c: &[i64], pick: usize) -> Arc<LabeledField> {
        let p = IntPoly::from_i64(c);
        let r = isolate_roots(&p).unwrap()[pick].clone();
        LabeledField::new(p, r).unwrap()
    }

    #[test]
    fn inverse_in_golden_field() {
        let k = field(&[-1, -1, 1], 1);
        let phi = k.gen();
        let inv = phi.inv().unwrap();
        assert_eq!(&inv, &(&phi - &k.one()));
        assert!((inv.to_complex().re - 0.6180339887498949).abs() < 1e-12);
    }

    #[test]
    fn sqrt2_sqrt3() {
        let k2 = field(&[-2, 0, 1], 1);
        let k3 = field(&[-3, 0, 1], 1);
        let c = compositum(&k2, &k3).unwrap();
        assert_eq!(c.field.min_poly(), &IntPoly::from_i64(&[1, 0, -10, 0, 1]));
        let two = c.field.from_int(2);
        assert_eq!(&c.image1 * &c.image1, two);
        assert!((c.image1.to_complex().re - 2f64.sqrt()).abs() < 1e-12);
        assert!((c.image2.to_complex().re - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn subfield_is_absorbed() {
        // Q(sqrt 5) inside Q(phi): the golden conjugate lands in Q(phi).
        let kphi = field(&[-1, -1, 1], 1);
        let k5 = field(&[-5, 0, 1], 0);
        let c = compositum(&kphi, &k5).unwrap();
        assert_eq!(c.field.degree(), 2);
        assert!((c.image2.to_complex().re + 5f64.sqrt()).abs() < 1e-12);
        assert_eq!(c.image1, kphi.gen());
    }

    #[test]
    fn rational_and_identical_fields() {
        let kphi = field(&[-1, -1, 1], 1);
        let q = LabeledField::rationals();
        let c = compositum(&q, &kphi).unwrap();
        assert_eq!(c.field.degree(), 2);
        let c = compositum(&kphi, &kphi).unwrap();
        assert_eq!(c.image1, c.image2);
    }

    #[test]
    fn kernel_over_golden_field() {
        let k = field(&[-1, -1, 1], 1);
        let phi = k.gen();
        // [[1 - phi, 1], [1, -phi]] has kernel spanned by (phi, phi^2 - phi) ~ (phi, 1).
        let rows = vec![vec![&k.one() - &phi, k.one()], vec![k.one(), -&phi]];
        let ker = kernel_field(&k, rows, 2);
        assert_eq!(ker.len(), 1);
        let ratio = &ker[0][0] * &ker[0][1].inv().unwrap();
        assert_eq!(ratio, phi);
    }
}
