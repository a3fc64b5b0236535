//! Dense univariate polynomials over the integers and the rationals.
//!
//! Both types store coefficients in ascending degree order. The representation
//! is canonical: the zero polynomial has no coefficients and otherwise the last
//! coefficient is non-zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial with arbitrary-precision integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

/// Polynomial with arbitrary-precision rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

fn trim<T: Zero>(v: &mut Vec<T>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        trim(&mut coeffs);
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x - c`
    pub fn linear_root(c: &BigInt) -> Self {
        Self::new(vec![-c.clone(), BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the convention `deg 0 = 0`.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Gcd of the coefficients, non-negative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn pow(&self, e: usize) -> IntPoly {
        let mut result = IntPoly::one();
        for _ in 0..e {
            result = &result * self;
        }
        result
    }

    /// `x^deg p(1/x)`.
    pub fn reciprocal(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPoly::new(c)
    }

    /// Splits `p = x^k q` with `q(0) != 0`.
    pub fn split_x_power(&self) -> (usize, IntPoly) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (
            k,
            IntPoly::new(self.coeffs[k.min(self.coeffs.len())..].to_vec()),
        )
    }

    /// Exact division over the integers, `None` if `other` does not divide `self`.
    pub fn div_exact(&self, other: &IntPoly) -> Option<IntPoly> {
        assert!(!other.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let (n, m) = (self.deg(), other.deg());
        if n < m {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); n - m + 1];
        let lc = other.lc();
        for i in (0..=n - m).rev() {
            let c = &rem[i + m];
            if c.is_zero() {
                continue;
            }
            let (q, r) = c.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (j, oc) in other.coeffs.iter().enumerate() {
                rem[i + j] -= &q * oc;
            }
            quot[i] = q;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(IntPoly::new(quot))
        } else {
            None
        }
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// Sup norm of the coefficients.
    pub fn max_norm(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Composition `self(other(x))`.
    pub fn compose(&self, other: &IntPoly) -> IntPoly {
        let mut acc = IntPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &IntPoly::constant(c.clone());
        }
        acc
    }
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        trim(&mut coeffs);
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn x() -> Self {
        QPoly::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn lc(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, k: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().recip();
        self.scale(&inv)
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn div_rem(&self, other: &QPoly) -> (QPoly, QPoly) {
        assert!(!other.is_zero(), "division by the zero polynomial");
        if self.deg() < other.deg() || self.is_zero() {
            return (QPoly::zero(), self.clone());
        }
        let m = other.deg();
        let inv_lc = other.lc().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.deg() - m + 1];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + m] * &inv_lc;
            if c.is_zero() {
                continue;
            }
            for (j, oc) in other.coeffs.iter().enumerate() {
                rem[i + j] -= &c * oc;
            }
            quot[i] = c;
        }
        rem.truncate(m);
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn rem(&self, other: &QPoly) -> QPoly {
        self.div_rem(other).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn ext_gcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Clears denominators and returns the primitive integer polynomial with
    /// positive leading coefficient.
    pub fn to_primitive_int(&self) -> IntPoly {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
                .collect(),
        )
        .primitive_part()
    }

    pub fn compose(&self, other: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &QPoly::constant(c.clone());
        }
        acc
    }
}

macro_rules! ring_ops {
    ($t:ident, $c:ty) => {
        impl Add for &$t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                let n = self.coeffs.len().max(o.coeffs.len());
                let mut v = Vec::with_capacity(n);
                for i in 0..n {
                    let mut c = self.coeffs.get(i).cloned().unwrap_or_else(<$c>::zero);
                    if let Some(d) = o.coeffs.get(i) {
                        c += d;
                    }
                    v.push(c);
                }
                $t::new(v)
            }
        }

        impl Sub for &$t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                self + &(-o)
            }
        }

        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                $t {
                    coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
                }
            }
        }

        impl Mul for &$t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                if self.is_zero() || o.is_zero() {
                    return $t::zero();
                }
                let mut v = vec![<$c>::zero(); self.coeffs.len() + o.coeffs.len() - 1];
                for (i, a) in self.coeffs.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in o.coeffs.iter().enumerate() {
                        v[i + j] += a * b;
                    }
                }
                $t::new(v)
            }
        }

        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }

        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }

        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
    };
}

ring_ops!(IntPoly, BigInt);
ring_ops!(QPoly, BigRational);

fn write_terms<T, F>(f: &mut fmt::Formatter<'_>, coeffs: &[T], fmt_abs: F) -> fmt::Result
where
    T: Signed + One,
    F: Fn(&T) -> String,
{
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        let a = c.abs();
        let coef = if a.is_one() && i > 0 {
            String::new()
        } else if i > 0 {
            format!("{}*", fmt_abs(&a))
        } else {
            fmt_abs(&a)
        };
        match i {
            0 => write!(f, "{coef}")?,
            1 => write!(f, "{coef}x")?,
            _ => write!(f, "{coef}x^{i}")?,
        }
    }
    Ok(())
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, |c| c.to_string())
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, |c| {
            if c.is_integer() {
                c.numer().to_string()
            } else {
                format!("({}/{})", c.numer(), c.denom())
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_matches_usual_notation() {
        let p = IntPoly::from_i64(&[1, -2, -7, -2, 1]);
        assert_eq!(p.to_string(), "x^4 - 2*x^3 - 7*x^2 - 2*x + 1");
        assert_eq!(IntPoly::zero().to_string(), "0");
        assert_eq!(IntPoly::from_i64(&[-1, 1]).to_string(), "x - 1");
    }

    #[test]
    fn exact_division() {
        let a = IntPoly::from_i64(&[-1, 0, 1]);
        let b = IntPoly::from_i64(&[1, 1]);
        assert_eq!(a.div_exact(&b), Some(IntPoly::from_i64(&[-1, 1])));
        assert_eq!(a.div_exact(&IntPoly::from_i64(&[1, 2])), None);
    }

    #[test]
    fn rational_gcd_and_bezout() {
        let a = IntPoly::from_i64(&[-1, 0, 1]).to_qpoly();
        let b = IntPoly::from_i64(&[1, 2, 1]).to_qpoly();
        let (g, s, t) = QPoly::ext_gcd(&a, &b);
        assert_eq!(g, IntPoly::from_i64(&[1, 1]).to_qpoly());
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn split_powers_of_x() {
        let p = IntPoly::from_i64(&[0, 0, 3, 1]);
        let (k, q) = p.split_x_power();
        assert_eq!(k, 2);
        assert_eq!(q, IntPoly::from_i64(&[3, 1]));
    }
}
