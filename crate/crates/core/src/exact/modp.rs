//! Arithmetic in `Z/pZ` and `Z/pZ[x]` for word-sized primes.
//!
//! Polynomials are plain `Vec<u64>` in ascending order, trimmed so the last
//! entry is non-zero. Everything here is a helper for modular characteristic
//! polynomials and for factorization over the integers.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zp {
    pub p: u64,
}

pub type PolyP = Vec<u64>;

impl Zp {
    pub fn new(p: u64) -> Self {
        Zp { p }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse of a non-zero residue.
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    pub fn reduce(self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }

    pub fn trim(self, mut a: PolyP) -> PolyP {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn poly_from_int(self, coeffs: &[BigInt]) -> PolyP {
        self.trim(coeffs.iter().map(|c| self.reduce(c)).collect())
    }

    pub fn poly_add(self, a: &[u64], b: &[u64]) -> PolyP {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| self.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        self.trim(v)
    }

    pub fn poly_sub(self, a: &[u64], b: &[u64]) -> PolyP {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        self.trim(v)
    }

    pub fn poly_mul(self, a: &[u64], b: &[u64]) -> PolyP {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut v = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                v[i + j] = self.add(v[i + j], self.mul(x, y));
            }
        }
        self.trim(v)
    }

    pub fn poly_scale(self, a: &[u64], k: u64) -> PolyP {
        self.trim(a.iter().map(|&x| self.mul(x, k)).collect())
    }

    pub fn monic(self, a: &[u64]) -> PolyP {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.poly_scale(a, self.inv(lc)),
        }
    }

    pub fn poly_divrem(self, a: &[u64], b: &[u64]) -> (PolyP, PolyP) {
        assert!(!b.is_empty(), "division by zero polynomial mod p");
        if a.len() < b.len() {
            return (Vec::new(), a.to_vec());
        }
        let m = b.len() - 1;
        let inv = self.inv(*b.last().unwrap());
        let mut rem = a.to_vec();
        let mut quot = vec![0u64; a.len() - m];
        for i in (0..quot.len()).rev() {
            let c = self.mul(rem[i + m], inv);
            if c == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                rem[i + j] = self.sub(rem[i + j], self.mul(c, bj));
            }
            quot[i] = c;
        }
        rem.truncate(m);
        (self.trim(quot), self.trim(rem))
    }

    pub fn poly_rem(self, a: &[u64], b: &[u64]) -> PolyP {
        self.poly_divrem(a, b).1
    }

    /// Monic gcd.
    pub fn poly_gcd(self, a: &[u64], b: &[u64]) -> PolyP {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// Returns `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn poly_ext_gcd(self, a: &[u64], b: &[u64]) -> (PolyP, PolyP, PolyP) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.poly_divrem(&r0, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = self.poly_sub(&s0, &self.poly_mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = self.poly_sub(&t0, &self.poly_mul(&q, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = self.inv(*r0.last().expect("gcd of two zero polynomials"));
        (
            self.poly_scale(&r0, inv),
            self.poly_scale(&s0, inv),
            self.poly_scale(&t0, inv),
        )
    }

    pub fn poly_derivative(self, a: &[u64]) -> PolyP {
        let v = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.mul(c, i as u64 % self.p))
            .collect();
        self.trim(v)
    }

    /// `base^e mod modulus`.
    pub fn poly_powmod(self, base: &[u64], e: &BigUint, modulus: &[u64]) -> PolyP {
        let mut result = self.poly_rem(&[1], modulus);
        let b = self.poly_rem(base, modulus);
        for i in (0..e.bits()).rev() {
            result = self.poly_rem(&self.poly_mul(&result, &result), modulus);
            if e.bit(i) {
                result = self.poly_rem(&self.poly_mul(&result, &b), modulus);
            }
        }
        result
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// returns `(d, product of all irreducible factors of degree d)`.
    pub fn distinct_degree(self, f: &[u64]) -> Vec<(usize, PolyP)> {
        let mut out = Vec::new();
        let mut f = f.to_vec();
        let x = vec![0, 1];
        let mut h = x.clone();
        let mut d = 0;
        while f.len() > 1 {
            d += 1;
            if 2 * d > f.len() - 1 {
                let deg = f.len() - 1;
                out.push((deg, f));
                break;
            }
            h = self.poly_powmod(&h, &BigUint::from(self.p), &f);
            let g = self.poly_gcd(&f, &self.poly_sub(&h, &x));
            if g.len() > 1 {
                f = self.poly_divrem(&f, &g).0;
                h = self.poly_rem(&h, &f);
                out.push((d, g));
            }
        }
        out
    }

    /// Equal-degree splitting (Cantor-Zassenhaus, odd `p`) of a monic
    /// squarefree product of irreducibles of degree `d`.
    pub fn equal_degree<R: Rng>(self, f: &[u64], d: usize, rng: &mut R) -> Vec<PolyP> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.to_vec()];
        }
        let e = (BigUint::from(self.p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: PolyP = self.trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = self.poly_powmod(&a, &e, f);
            let g = self.poly_gcd(f, &self.poly_sub(&b, &[1]));
            if g.len() > 1 && g.len() < f.len() {
                let q = self.poly_divrem(f, &g).0;
                let mut parts = self.equal_degree(&g, d, rng);
                parts.extend(self.equal_degree(&self.monic(&q), d, rng));
                return parts;
            }
        }
    }

    /// Full factorization of a monic squarefree polynomial into monic irreducibles.
    pub fn factor_squarefree<R: Rng>(self, f: &[u64], rng: &mut R) -> Vec<PolyP> {
        let mut out = Vec::new();
        for (d, g) in self.distinct_degree(f) {
            out.extend(self.equal_degree(&g, d, rng));
        }
        out.sort();
        out
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let z = Zp::new(n);
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = z.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = z.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes strictly below `start`, in decreasing order.
pub fn primes_below(start: u64) -> impl Iterator<Item = u64> {
    (2..start).rev().filter(|&n| is_prime_u64(n))
}

/// Symmetric residue of `x` modulo `m`, in `(-m/2, m/2]`.
pub fn symmetric(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Chinese remaindering: combine `x mod m` with `r mod p`.
pub fn crt_step(x: &BigInt, m: &BigInt, r: u64, p: u64) -> BigInt {
    if m.is_zero() {
        return BigInt::from(r);
    }
    let z = Zp::new(p);
    let xm = z.reduce(x);
    let minv = z.inv(z.reduce(m));
    let t = z.mul(z.sub(r, xm), minv);
    x + m * BigInt::from(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn factors_x4_minus_1_mod_5() {
        let z = Zp::new(5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = vec![4, 0, 0, 0, 1];
        let fs = z.factor_squarefree(&f, &mut rng);
        assert_eq!(fs, vec![vec![1, 1], vec![2, 1], vec![3, 1], vec![4, 1]]);
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(561));
        assert_eq!(
            primes_below(20).take(3).collect::<Vec<_>>(),
            vec![19, 17, 13]
        );
    }
}
