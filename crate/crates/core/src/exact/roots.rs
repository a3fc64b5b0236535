//! Certified isolation of complex roots of integer polynomials.
//!
//! Approximations come from a double-precision Aberth iteration. They are then
//! polished with exact Weierstrass (Durand-Kerner) steps on dyadic rationals
//! until the Gerschgorin discs of the Weierstrass matrix are pairwise
//! disjoint, which certifies one root per disc. Real roots are moved onto the
//! real axis and refined by exact bisection; complex roots by Newton steps with
//! the `n |p/p'|` inclusion radius.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::factor::is_squarefree;
use super::poly::IntPoly;
use super::ExactError;

/// Complex number with rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        CRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        CRat {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::real(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::real(BigRational::one())
    }

    pub fn from_int(x: &BigInt) -> Self {
        Self::real(BigRational::from_integer(x.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CRat::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `|re| + |im|`, an upper bound for the modulus.
    pub fn l1(&self) -> BigRational {
        self.re.abs() + self.im.abs()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        CRat::new(&self.re * k, &self.im * k)
    }

    pub fn div(&self, o: &CRat) -> CRat {
        let d = o.norm_sqr();
        let n = self * &o.conj();
        CRat::new(n.re / &d, n.im / &d)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub fn from_c64(z: Complex64, bits: u32) -> Self {
        let conv = |x: f64| {
            BigRational::from_float(x).map_or_else(BigRational::zero, |r| round_dyadic(&r, bits))
        };
        CRat::new(conv(z.re), conv(z.im))
    }

    pub fn round(&self, bits: u32) -> Self {
        CRat::new(round_dyadic(&self.re, bits), round_dyadic(&self.im, bits))
    }
}

impl Add for &CRat {
    type Output = CRat;
    fn add(self, o: &CRat) -> CRat {
        CRat::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &CRat {
    type Output = CRat;
    fn sub(self, o: &CRat) -> CRat {
        CRat::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &CRat {
    type Output = CRat;
    fn mul(self, o: &CRat) -> CRat {
        CRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &CRat {
    type Output = CRat;
    fn neg(self) -> CRat {
        CRat::new(-self.re.clone(), -self.im.clone())
    }
}

/// Rounds to the nearest multiple of `2^-bits`.
pub fn round_dyadic(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = x * BigRational::from_integer(scale.clone());
    let n = (scaled + BigRational::new(BigInt::one(), BigInt::from(2))).floor();
    BigRational::new(n.to_integer(), scale)
}

/// Axis-aligned square `center ± half_width` (in both coordinates) isolating
/// exactly one root of its polynomial. Exact rational roots use a zero
/// half-width.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RootBox {
    pub center: CRat,
    pub half_width: BigRational,
    /// Certified real root: the box is centered on the real axis and the root
    /// is its real point.
    pub real: bool,
}

impl RootBox {
    pub fn exact(x: BigRational) -> Self {
        RootBox {
            center: CRat::real(x),
            half_width: BigRational::zero(),
            real: true,
        }
    }

    pub fn contains(&self, z: &CRat) -> bool {
        (&z.re - &self.center.re).abs() <= self.half_width
            && (&z.im - &self.center.im).abs() <= self.half_width
    }

    pub fn intersects(&self, o: &RootBox) -> bool {
        let w = &self.half_width + &o.half_width;
        (&self.center.re - &o.center.re).abs() <= w && (&self.center.im - &o.center.im).abs() <= w
    }

    /// True if `o` lies inside `self`.
    pub fn encloses(&self, o: &RootBox) -> bool {
        let w = &self.half_width - &o.half_width;
        !w.is_negative()
            && (&self.center.re - &o.center.re).abs() <= w
            && (&self.center.im - &o.center.im).abs() <= w
    }

    pub fn mirror(&self) -> RootBox {
        RootBox {
            center: self.center.conj(),
            half_width: self.half_width.clone(),
            real: self.real,
        }
    }

    pub fn approx(&self) -> Complex64 {
        self.center.to_c64()
    }

    /// Lower and upper bounds for `|z|^2` over the box.
    pub fn modulus_sq_bounds(&self) -> (BigRational, BigRational) {
        let range = |c: &BigRational| {
            let lo = c - &self.half_width;
            let hi = c + &self.half_width;
            let max = std::cmp::max(lo.abs(), hi.abs());
            let min = if !lo.is_positive() && !hi.is_negative() {
                BigRational::zero()
            } else {
                std::cmp::min(lo.abs(), hi.abs())
            };
            (&min * &min, &max * &max)
        };
        let (a, b) = range(&self.center.re);
        let (c, d) = range(&self.center.im);
        (a + c, b + d)
    }
}

impl fmt::Display for RootBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.approx();
        if self.real {
            write!(f, "{:.12}", z.re)
        } else {
            write!(f, "{:.12}{:+.12}i", z.re, z.im)
        }
    }
}

/// Result of comparing the modulus of a root with 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum ModulusClass {
    Less,
    Equal,
    Greater,
}

fn eval_c(p: &IntPoly, z: &CRat) -> CRat {
    let mut acc = CRat::zero();
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * z) + &CRat::from_int(c);
    }
    acc
}

fn eval_c64(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter()
        .rev()
        .fold(Complex64::zero(), |acc, &c| acc * z + c)
}

/// Double-precision Aberth iteration; returns `deg p` approximations.
fn aberth(p: &IntPoly) -> Vec<Complex64> {
    let n = p.deg();
    let lc = p.lc().to_f64().unwrap_or(1.0);
    let coeffs: Vec<Complex64> = p
        .coeffs()
        .iter()
        .map(|c| Complex64::new(c.to_f64().unwrap_or(0.0) / lc, 0.0))
        .collect();
    let deriv: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect();
    let radius = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..2000 {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let ratio = eval_c64(&coeffs, z[k]) / eval_c64(&deriv, z[k]);
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::one() - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                max_step = max_step.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

/// Weierstrass corrections `W_i = p(z_i) / (lc prod_{j != i} (z_i - z_j))`;
/// `None` if two approximations coincide.
fn weierstrass(p: &IntPoly, z: &[CRat]) -> Option<Vec<CRat>> {
    let lc = CRat::from_int(&p.lc());
    (0..z.len())
        .map(|i| {
            let mut den = lc.clone();
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    den = &den * &(&z[i] - zj);
                }
            }
            if den.is_zero() {
                None
            } else {
                Some(eval_c(p, &z[i]).div(&den))
            }
        })
        .collect()
}

/// One box per complex root of a squarefree polynomial, pairwise disjoint,
/// sorted by real part then imaginary part of the center.
pub fn isolate_roots(p: &IntPoly) -> Result<Vec<RootBox>, ExactError> {
    let n = p.deg();
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if !is_squarefree(p) {
        return Err(ExactError::NotSquarefree(p.to_string()));
    }
    if n == 1 {
        let r = BigRational::new(-p.coeff(0), p.coeff(1));
        return Ok(vec![RootBox::exact(r)]);
    }
    let mut bits = 60u32;
    let mut z: Vec<CRat> = aberth(p)
        .into_iter()
        .map(|c| CRat::from_c64(c, bits))
        .collect();
    let n_minus_1 = BigRational::from_integer(BigInt::from(n - 1));
    for _ in 0..64 {
        if let Some(w) = weierstrass(p, &z) {
            let boxes: Vec<RootBox> = z
                .iter()
                .zip(&w)
                .map(|(zi, wi)| RootBox {
                    center: zi - wi,
                    half_width: &n_minus_1 * wi.l1(),
                    real: false,
                })
                .collect();
            if let Some(mut certified) = certify(p, boxes) {
                certified.sort_by(|a, b| {
                    a.center
                        .re
                        .cmp(&b.center.re)
                        .then_with(|| a.center.im.cmp(&b.center.im))
                });
                return Ok(certified);
            }
            z = z
                .iter()
                .zip(&w)
                .map(|(zi, wi)| (zi - wi).round(bits))
                .collect();
        } else {
            // Coincident approximations: perturb deterministically.
            for (k, zk) in z.iter_mut().enumerate() {
                let eps = BigRational::new(BigInt::from(k as i64 + 1), BigInt::one() << (bits / 2));
                zk.im += eps;
            }
        }
        bits = (bits * 2).min(1 << 14);
    }
    Err(ExactError::RootIsolation(p.to_string()))
}

/// Checks disjointness, classifies real roots and recenters them on the axis.
fn certify(p: &IntPoly, boxes: Vec<RootBox>) -> Option<Vec<RootBox>> {
    if !pairwise_disjoint(&boxes) {
        return None;
    }
    let mut out = Vec::with_capacity(boxes.len());
    for (i, b) in boxes.iter().enumerate() {
        let m = b.mirror();
        let hits: Vec<usize> = (0..boxes.len())
            .filter(|&j| m.intersects(&boxes[j]))
            .collect();
        if hits == [i] {
            out.push(real_box(p, b)?);
        } else if hits.contains(&i) {
            return None;
        } else {
            out.push(b.clone());
        }
    }
    if pairwise_disjoint(&out) {
        Some(out)
    } else {
        None
    }
}

fn pairwise_disjoint(boxes: &[RootBox]) -> bool {
    (0..boxes.len()).all(|i| (i + 1..boxes.len()).all(|j| !boxes[i].intersects(&boxes[j])))
}

/// Real segment of a box known to contain a real root, as an axis-centered
/// box; verifies the sign change.
fn real_box(p: &IntPoly, b: &RootBox) -> Option<RootBox> {
    let lo = &b.center.re - &b.half_width;
    let hi = &b.center.re + &b.half_width;
    let (slo, shi) = (p.eval_rat(&lo), p.eval_rat(&hi));
    if slo.is_zero() {
        return Some(RootBox::exact(lo));
    }
    if shi.is_zero() {
        return Some(RootBox::exact(hi));
    }
    if slo.signum() == shi.signum() {
        return None;
    }
    let two = BigRational::from_integer(BigInt::from(2));
    Some(RootBox {
        center: CRat::real((&lo + &hi) / &two),
        half_width: (hi - lo) / two,
        real: true,
    })
}

/// Refines `r` (isolating a root of `p`) until its half-width is at most
/// `width`. The result is contained in `r`.
pub fn refine(p: &IntPoly, r: &RootBox, width: &BigRational) -> RootBox {
    if r.half_width <= *width {
        return r.clone();
    }
    if r.real {
        refine_real(p, r, width)
    } else {
        refine_complex(p, r, width)
    }
}

fn refine_real(p: &IntPoly, r: &RootBox, width: &BigRational) -> RootBox {
    let two = BigRational::from_integer(BigInt::from(2));
    let mut lo = &r.center.re - &r.half_width;
    let mut hi = &r.center.re + &r.half_width;
    let slo = p.eval_rat(&lo).signum();
    while (&hi - &lo) / &two > *width {
        let mid = (&lo + &hi) / &two;
        let sm = p.eval_rat(&mid).signum();
        if sm.is_zero() {
            return RootBox::exact(mid);
        }
        if sm == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    RootBox {
        center: CRat::real((&lo + &hi) / &two),
        half_width: (hi - lo) / two,
        real: true,
    }
}

fn refine_complex(p: &IntPoly, r: &RootBox, width: &BigRational) -> RootBox {
    let n = BigRational::from_integer(BigInt::from(p.deg()));
    let dp = p.derivative();
    let target_bits = bits_for(width) + 16;
    let mut z = r.center.clone();
    let mut bits = 64u32.min(target_bits);
    let mut best = r.clone();
    for _ in 0..200 {
        let pz = eval_c(p, &z);
        let dz = eval_c(&dp, &z);
        if dz.is_zero() {
            break;
        }
        let step = pz.div(&dz);
        let radius = &n * step.l1();
        let candidate = RootBox {
            center: z.clone(),
            half_width: radius,
            real: false,
        };
        if best.encloses(&candidate) {
            best = candidate;
            if best.half_width <= *width {
                return best;
            }
        }
        z = (&z - &step).round(bits);
        bits = (bits * 2).min(target_bits.max(64));
    }
    // Newton stalled; the best certified box is still valid.
    best
}

/// Number of fractional bits needed to resolve `w`.
fn bits_for(w: &BigRational) -> u32 {
    if !w.is_positive() {
        return 256;
    }
    let ratio = BigRational::one() / w;
    (ratio.to_integer().bits() as u32) + 2
}

/// Exact trichotomy `|root| <, =, > 1` for the root isolated by `r`, a root
/// of the irreducible polynomial `p`.
pub fn modulus_vs_one(r: &RootBox, p: &IntPoly) -> ModulusClass {
    let one = BigRational::one();
    let recip = p.reciprocal();
    let self_reciprocal = recip == *p || recip == -p;
    let mut r = r.clone();
    let mut all: Option<Vec<RootBox>> = None;
    let mut w = r.half_width.clone();
    for _ in 0..400 {
        let (lo, hi) = r.modulus_sq_bounds();
        if hi < one {
            return ModulusClass::Less;
        }
        if lo > one {
            return ModulusClass::Greater;
        }
        if self_reciprocal && lo.is_positive() {
            // A root of modulus one is fixed by z -> 1/conj(z); otherwise
            // its image is another root of p.
            let others = all.get_or_insert_with(|| isolate_roots(p).unwrap_or_default());
            let image = inverse_conj_box(&r);
            let own: Vec<usize> = (0..others.len())
                .filter(|&j| others[j].intersects(&r))
                .collect();
            if own.len() == 1 {
                let hits: Vec<usize> = (0..others.len())
                    .filter(|&j| others[j].intersects(&image))
                    .collect();
                if hits == own {
                    return ModulusClass::Equal;
                }
            }
            for b in others.iter_mut() {
                *b = refine(p, b, &w);
            }
        }
        w = if w.is_zero() {
            BigRational::new(BigInt::one(), BigInt::from(1u64 << 40))
        } else {
            w / BigRational::from_integer(BigInt::from(4))
        };
        r = refine(p, &r, &w);
    }
    unreachable!("modulus comparison did not terminate for {p}")
}

/// A box containing `1 / conj(z)` for every `z` in `r`; requires `0` outside `r`.
fn inverse_conj_box(r: &RootBox) -> RootBox {
    // For z = c + d with |d| <= rho: |1/conj(z) - 1/conj(c)| <= rho / (|c| (|c| - rho)),
    // with |c| >= (|Re c| + |Im c|) / 2 and rho <= 2 half_width.
    let c = &r.center;
    let rho = &r.half_width * BigRational::from_integer(BigInt::from(2));
    let c_lo = c.l1() / BigRational::from_integer(BigInt::from(2));
    let gap = &c_lo - &rho;
    let center = CRat::one().div(&c.conj());
    if !gap.is_positive() {
        return RootBox {
            center,
            half_width: BigRational::from_integer(BigInt::from(1_000_000)),
            real: false,
        };
    }
    RootBox {
        center,
        half_width: rho / (c_lo * gap),
        real: false,
    }
}

/// Outcome of the Pisot/unit test.
#[derive(Clone, Debug)]
pub struct PisotReport {
    pub pisot: bool,
    pub unit: bool,
    pub perron_root: RootBox,
}

/// Largest real root of a squarefree polynomial, if any.
pub fn largest_real_root(p: &IntPoly) -> Result<Option<RootBox>, ExactError> {
    let roots = isolate_roots(p)?;
    // Real boxes are disjoint segments of the axis, so centers order them.
    Ok(roots
        .into_iter()
        .filter(|b| b.real)
        .max_by(|a, b| a.center.re.cmp(&b.center.re)))
}

/// Decides whether the real root `> 1` of the monic irreducible `p` is a
/// Pisot number and a unit.
pub fn is_pisot_unit(p: &IntPoly) -> Result<PisotReport, ExactError> {
    if !super::factor::is_irreducible(p) {
        return Err(ExactError::Reducible(p.to_string()));
    }
    let roots = isolate_roots(p)?;
    let perron = roots
        .iter()
        .filter(|b| b.real)
        .max_by(|a, b| a.center.re.cmp(&b.center.re))
        .cloned()
        .filter(|b| modulus_vs_one(b, p) == ModulusClass::Greater && b.center.re.is_positive())
        .ok_or_else(|| ExactError::NoRealRootAboveOne(p.to_string()))?;
    let pisot = roots
        .iter()
        .filter(|b| **b != perron)
        .all(|b| modulus_vs_one(b, p) == ModulusClass::Less);
    let unit = p.coeff(0).abs().is_one() && p.lc().is_one();
    Ok(PisotReport {
        pisot,
        unit,
        perron_root: perron,
    })
}

/// Orders two real root boxes of possibly different polynomials, refining
/// until their segments separate. Equal roots never separate; callers only
/// compare distinct roots.
pub fn compare_real(p: &IntPoly, a: &RootBox, q: &IntPoly, b: &RootBox) -> Ordering {
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        let a_hi = &a.center.re + &a.half_width;
        let a_lo = &a.center.re - &a.half_width;
        let b_hi = &b.center.re + &b.half_width;
        let b_lo = &b.center.re - &b.half_width;
        if a_hi < b_lo {
            return Ordering::Less;
        }
        if b_hi < a_lo {
            return Ordering::Greater;
        }
        if a.half_width.is_zero() && b.half_width.is_zero() {
            return a.center.re.cmp(&b.center.re);
        }
        let w = std::cmp::max(a.half_width.clone(), b.half_width.clone())
            / BigRational::from_integer(BigInt::from(4));
        a = refine(p, &a, &w);
        b = refine(q, &b, &w);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn approx(b: &RootBox) -> (f64, f64) {
        let z = b.approx();
        (z.re, z.im)
    }

    #[test]
    fn golden_ratio_roots() {
        let roots = isolate_roots(&p(&[-1, -1, 1])).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| r.real));
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((approx(&roots[0]).0 - (1.0 - phi)).abs() < 1e-9);
        assert!((approx(&roots[1]).0 - phi).abs() < 1e-9);
        assert_eq!(
            modulus_vs_one(&roots[1], &p(&[-1, -1, 1])),
            ModulusClass::Greater
        );
        assert_eq!(
            modulus_vs_one(&roots[0], &p(&[-1, -1, 1])),
            ModulusClass::Less
        );
    }

    #[test]
    fn gaussian_roots_have_modulus_one() {
        let f = p(&[1, 0, 1]);
        let roots = isolate_roots(&f).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| !r.real));
        for r in &roots {
            assert!((r.approx().im.abs() - 1.0).abs() < 1e-9);
            assert_eq!(modulus_vs_one(r, &f), ModulusClass::Equal);
        }
    }

    #[test]
    fn salem_like_roots() {
        // x^4 - 2x^3 - 7x^2 - 2x + 1 is self-reciprocal with two real roots
        // off the unit circle and a complex pair on it.
        let f = p(&[1, -2, -7, -2, 1]);
        let roots = isolate_roots(&f).unwrap();
        let classes: Vec<ModulusClass> = roots.iter().map(|r| modulus_vs_one(r, &f)).collect();
        let greater = classes
            .iter()
            .filter(|c| **c == ModulusClass::Greater)
            .count();
        assert_eq!(greater, 2);
    }

    #[test]
    fn refinement_reaches_requested_width() {
        let f = p(&[-2, 0, 1]);
        let roots = isolate_roots(&f).unwrap();
        let w = BigRational::new(BigInt::one(), BigInt::from(10).pow(30));
        let r = refine(&f, &roots[1], &w);
        assert!(r.half_width <= w);
        assert!(roots[1].encloses(&r));
        let x = r.center.re.to_f64().unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn complex_refinement() {
        let f = p(&[1, 1, 1]);
        let roots = isolate_roots(&f).unwrap();
        let w = BigRational::new(BigInt::one(), BigInt::from(10).pow(30));
        for r in &roots {
            let s = refine(&f, r, &w);
            assert!(s.half_width <= w);
            assert!(r.encloses(&s));
        }
    }

    #[test]
    fn pisot_units() {
        let rep = is_pisot_unit(&p(&[-1, -1, 1])).unwrap();
        assert!(rep.pisot && rep.unit);
        let rep = is_pisot_unit(&p(&[1, -2, -7, -2, 1])).unwrap();
        assert!(!rep.pisot && rep.unit);
        let rep = is_pisot_unit(&p(&[-1, -4, 1])).unwrap();
        assert!(rep.pisot && rep.unit);
        assert!(is_pisot_unit(&p(&[-1, 0, 1])).is_err());
    }

    #[test]
    fn rejects_repeated_roots() {
        assert!(isolate_roots(&p(&[1, 2, 1])).is_err());
    }
}
