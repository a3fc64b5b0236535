//! Factorization of integer polynomials over the rationals.
//!
//! Pipeline: strip content and powers of x, divide out cyclotomic factors by
//! trial division, squarefree decomposition (Yun), then Zassenhaus on each
//! squarefree part: factor modulo a small prime, Hensel-lift to a modulus
//! beyond the Mignotte bound, and recombine subsets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modp::{primes_below, symmetric, PolyP, Zp};
use super::poly::IntPoly;
use super::ExactError;

/// Irreducible factors with multiplicities. The product of the factors,
/// raised to their multiplicities, equals `p` up to a rational constant.
/// Factors are primitive with positive leading coefficient, pairwise
/// distinct, and sorted by degree then coefficients.
pub fn factor_rational(p: &IntPoly) -> Result<Vec<(IntPoly, usize)>, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let mut out: Vec<(IntPoly, usize)> = Vec::new();
    let (k, rest) = p.primitive_part().split_x_power();
    if k > 0 {
        out.push((IntPoly::x(), k));
    }
    let mut rest = rest.primitive_part();

    // Cyclotomic factors come in large families in proprified matrices and
    // would otherwise blow up the recombination step.
    let max_n = cyclotomic_index_bound(rest.deg());
    for n in 1..=max_n {
        if totient(n) > rest.deg() {
            continue;
        }
        let phi = cyclotomic(n);
        let mut mult = 0;
        while let Some(q) = rest.div_exact(&phi) {
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            out.push((phi, mult));
        }
    }

    for (part, mult) in squarefree_decomposition(&rest) {
        for f in factor_squarefree(&part) {
            out.push((f, mult));
        }
    }
    out.sort_by(|a, b| poly_order(&a.0, &b.0));
    Ok(out)
}

fn poly_order(a: &IntPoly, b: &IntPoly) -> std::cmp::Ordering {
    a.deg()
        .cmp(&b.deg())
        .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

/// True iff `p` is irreducible over the rationals (degree at least 1).
pub fn is_irreducible(p: &IntPoly) -> bool {
    if p.deg() == 0 {
        return false;
    }
    match factor_rational(p) {
        Ok(f) => f.len() == 1 && f[0].1 == 1,
        Err(_) => false,
    }
}

/// Yun's squarefree decomposition: pairs `(a_i, i)` with `p = c prod a_i^i`,
/// each `a_i` squarefree and primitive. Constant parts are dropped.
pub fn squarefree_decomposition(p: &IntPoly) -> Vec<(IntPoly, usize)> {
    let mut out = Vec::new();
    if p.deg() == 0 {
        return out;
    }
    let f = p.to_qpoly();
    let fp = f.derivative();
    let a0 = f.gcd(&fp);
    let mut b = f.div_rem(&a0).0;
    let mut c = fp.div_rem(&a0).0;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.deg() > 0 {
        let a = b.gcd(&d);
        b = b.div_rem(&a).0;
        c = d.div_rem(&a).0;
        d = &c - &b.derivative();
        if a.deg() > 0 {
            out.push((a.to_primitive_int(), i));
        }
        i += 1;
    }
    out
}

pub fn is_squarefree(p: &IntPoly) -> bool {
    let f = p.to_qpoly();
    f.gcd(&f.derivative()).deg() == 0
}

/// Euler's totient.
pub fn totient(mut n: usize) -> usize {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Largest `n` with `totient(n) <= d` is below this bound.
pub fn cyclotomic_index_bound(d: usize) -> usize {
    // totient(n) >= sqrt(n / 2)
    2 * d * d + 2
}

/// The n-th cyclotomic polynomial, as `prod_{d | n} (x^d - 1)^{mu(n/d)}`.
pub fn cyclotomic(n: usize) -> IntPoly {
    assert!(n >= 1);
    let x_pow_minus_one = |d: usize| {
        let mut c = vec![BigInt::zero(); d + 1];
        c[0] = -BigInt::one();
        c[d] = BigInt::one();
        IntPoly::new(c)
    };
    let divisors: Vec<usize> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for &d in &divisors {
        match moebius(n / d) {
            1 => num = &num * &x_pow_minus_one(d),
            -1 => den = &den * &x_pow_minus_one(d),
            _ => {}
        }
    }
    num.div_exact(&den).expect("cyclotomic quotient is exact")
}

fn moebius(mut n: usize) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `Some(n)` if `p` (primitive, positive leading coefficient) equals the n-th
/// cyclotomic polynomial.
pub fn cyclotomic_index(p: &IntPoly) -> Option<usize> {
    let d = p.deg();
    if d == 0 || !p.is_monic() {
        return None;
    }
    (1..=cyclotomic_index_bound(d))
        .filter(|&n| totient(n) == d)
        .find(|&n| &cyclotomic(n) == p)
}

/// Irreducible factors of a squarefree primitive polynomial.
pub fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let f = f.primitive_part();
    if f.deg() <= 1 {
        return if f.deg() == 1 { vec![f] } else { Vec::new() };
    }
    let lc = f.lc();
    let n = f.deg();

    // Pick the prime giving the fewest modular factors among a few candidates.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut best: Option<(u64, Vec<PolyP>)> = None;
    let mut tried = 0;
    for p in primes_below(1 << 20).filter(|&p| p > 1000) {
        let z = Zp::new(p);
        if z.reduce(&lc) == 0 {
            continue;
        }
        let fp = z.poly_from_int(f.coeffs());
        if z.poly_gcd(&fp, &z.poly_derivative(&fp)).len() != 1 {
            continue;
        }
        let facs = z.factor_squarefree(&z.monic(&fp), &mut rng);
        if facs.len() == 1 {
            return vec![f];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried == 5 {
            break;
        }
    }
    let (p, modular) = best.expect("no suitable prime found");

    // Mignotte: any factor g of f has |g_i| <= 2^n ||f||_2, and after
    // multiplying by lc the bound gains a factor |lc|.
    let norm2 = f.coeffs().iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1u32;
    let bound: BigInt = (BigInt::one() << n) * norm2 * lc.abs() * 2u32 + 1u32;
    let mut k = 1u32;
    let mut pk = BigInt::from(p);
    while pk <= bound {
        pk = &pk * &pk;
        k *= 2;
    }
    let lifted = hensel_lift_all(&f, p, k, &modular);
    recombine(f, &lifted, &pk)
}

/// Polynomials with coefficients reduced into `[0, m)`.
fn reduce_mod(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = v.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn mul_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    reduce_mod(&v, m)
}

fn add_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let v: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect();
    reduce_mod(&v, m)
}

fn sub_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let nb: Vec<BigInt> = b.iter().map(|c| -c).collect();
    add_mod(a, &nb, m)
}

/// Division by a polynomial whose leading coefficient is 1 mod m.
fn divrem_monic_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return (Vec::new(), reduce_mod(a, m));
    }
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        quot[i] = c;
    }
    rem.truncate(db);
    (reduce_mod(&quot, m), reduce_mod(&rem, m))
}

fn to_big(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

/// One quadratic Hensel step: from `f = g h mod m` with `s g + t h = 1 mod m`
/// and `h` monic, returns the same data modulo `m^2`.
#[allow(clippy::type_complexity)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let m2 = m * m;
    let e = sub_mod(f, &mul_mod(g, h, &m2), &m2);
    let (q, r) = divrem_monic_mod(&mul_mod(s, &e, &m2), h, &m2);
    let g2 = add_mod(
        g,
        &add_mod(&mul_mod(t, &e, &m2), &mul_mod(&q, g, &m2), &m2),
        &m2,
    );
    let h2 = add_mod(h, &r, &m2);
    let b = sub_mod(
        &add_mod(&mul_mod(s, &g2, &m2), &mul_mod(t, &h2, &m2), &m2),
        &[BigInt::one()],
        &m2,
    );
    let (c, d) = divrem_monic_mod(&mul_mod(s, &b, &m2), &h2, &m2);
    let s2 = sub_mod(s, &d, &m2);
    let t2 = sub_mod(
        t,
        &add_mod(&mul_mod(t, &b, &m2), &mul_mod(&c, &g2, &m2), &m2),
        &m2,
    );
    (g2, h2, s2, t2)
}

/// Lifts the monic modular factorization of `f / lc` to modulus `p^k`
/// (`k` a power of two). Returns monic factors modulo `p^k`.
fn hensel_lift_all(f: &IntPoly, p: u64, k: u32, factors: &[PolyP]) -> Vec<Vec<BigInt>> {
    let z = Zp::new(p);
    let pk = num_traits::pow(BigInt::from(p), k as usize);
    let lc = f.lc();
    let mut target: Vec<BigInt> = reduce_mod(f.coeffs(), &pk);
    let mut target_lc = lc.mod_floor(&pk);
    let mut out = Vec::new();
    let mut rest: Vec<PolyP> = factors.to_vec();
    while rest.len() > 1 {
        let first = rest.remove(0);
        let others = rest.iter().fold(vec![1u64], |acc, u| z.poly_mul(&acc, u));
        let lc_p = z.reduce(&target_lc);
        let g0 = z.poly_scale(&first, lc_p);
        let (_, s0, t0) = z.poly_ext_gcd(&g0, &others);
        let (mut g, mut h, mut s, mut t) = (to_big(&g0), to_big(&others), to_big(&s0), to_big(&t0));
        let mut m = BigInt::from(p);
        while m < pk {
            let f_m = reduce_mod(&target, &(&m * &m));
            (g, h, s, t) = hensel_step(&f_m, &g, &h, &s, &t, &m);
            m = &m * &m;
        }
        // g has leading coefficient lc; make it monic modulo p^k.
        let inv = mod_inverse(&target_lc, &pk);
        out.push(reduce_mod(
            &g.iter().map(|c| c * &inv).collect::<Vec<_>>(),
            &pk,
        ));
        target = h;
        target_lc = BigInt::one();
    }
    // What is left of the target is the lift of the last modular factor.
    let inv = mod_inverse(&target_lc, &pk);
    out.push(reduce_mod(
        &target.iter().map(|c| c * &inv).collect::<Vec<_>>(),
        &pk,
    ));
    out
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "non-invertible leading coefficient");
    e.x.mod_floor(m)
}

/// Subset recombination of lifted factors into true factors over Z.
fn recombine(f: IntPoly, lifted: &[Vec<BigInt>], pk: &BigInt) -> Vec<IntPoly> {
    let mut f = f;
    let mut remaining: Vec<Vec<BigInt>> = lifted.to_vec();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut found = false;
        for subset in combinations(remaining.len(), size) {
            let lc = f.lc();
            let mut g = vec![lc.clone()];
            for &i in &subset {
                g = mul_mod(&g, &remaining[i], pk);
            }
            let g = IntPoly::new(g.iter().map(|c| symmetric(c, pk)).collect());
            // Cheap filter on the constant term before trial division.
            let c0 = g.coeff(0);
            let f0 = f.coeff(0) * &lc;
            if !c0.is_zero() && !(f0.is_multiple_of(&c0)) {
                continue;
            }
            let g = g.primitive_part();
            if let Some(q) = f.div_exact(&g) {
                out.push(g);
                f = q.primitive_part();
                let keep: Vec<Vec<BigInt>> = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, v)| v.clone())
                    .collect();
                remaining = keep;
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if f.deg() > 0 {
        out.push(f.primitive_part());
    }
    out
}

/// All k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The product of `(f, e)` pairs.
pub fn expand(factors: &[(IntPoly, usize)]) -> IntPoly {
    factors
        .iter()
        .fold(IntPoly::one(), |acc, (f, e)| &acc * &f.pow(*e))
}

/// Rational gcd of two integer polynomials, as a primitive integer polynomial.
pub fn gcd_int(a: &IntPoly, b: &IntPoly) -> IntPoly {
    a.to_qpoly().gcd(&b.to_qpoly()).to_primitive_int()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn difference_of_squares() {
        let f = factor_rational(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(f, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
    }

    #[test]
    fn repeated_golden_factor() {
        // (x^2 - 4x - 1)(x^2 - x - 1)^2
        let g = p(&[-1, -1, 1]);
        let h = p(&[-1, -4, 1]);
        let prod = &h * &g.pow(2);
        let f = factor_rational(&prod).unwrap();
        assert_eq!(f, vec![(h, 1), (g, 2)]);
    }

    #[test]
    fn irreducible_quartic() {
        assert!(is_irreducible(&p(&[1, -2, -7, -2, 1])));
        // x^4 - 10x^2 + 1 is irreducible over Q but splits modulo every prime.
        assert!(is_irreducible(&p(&[1, 0, -10, 0, 1])));
    }

    #[test]
    fn swinnerton_dyer_times_linear() {
        let f = &p(&[1, 0, -10, 0, 1]) * &p(&[3, 2]);
        let fs = factor_rational(&f).unwrap();
        assert_eq!(fs, vec![(p(&[3, 2]), 1), (p(&[1, 0, -10, 0, 1]), 1)]);
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), p(&[-1, 1]));
        assert_eq!(cyclotomic(6), p(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), p(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_index(&p(&[1, 1, 1])), Some(3));
        assert_eq!(cyclotomic_index(&p(&[-1, -1, 1])), None);
    }

    #[test]
    fn combination_enumeration() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(3, 1), vec![vec![0], vec![1], vec![2]]);
    }
}
