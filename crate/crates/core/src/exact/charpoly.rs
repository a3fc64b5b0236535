//! Characteristic polynomials of integer matrices.
//!
//! Each prime gives the characteristic polynomial modulo p through a
//! Hessenberg reduction; enough primes are combined by Chinese remaindering
//! to exceed an a priori bound on the coefficients.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::modp::{crt_step, primes_below, symmetric, Zp};
use super::poly::IntPoly;
use super::ExactError;

/// `det(xI - m)`, exact and monic.
pub fn char_poly(m: &IntMatrix) -> Result<IntPoly, ExactError> {
    if !m.is_square() {
        return Err(ExactError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(IntPoly::one());
    }
    // Every eigenvalue is bounded by the largest absolute column sum r, so
    // each coefficient is at most binomial(n, k) r^k <= (1 + r)^n.
    let r = (0..n)
        .map(|j| m.col(j).iter().map(|x| x.abs()).sum::<BigInt>())
        .max()
        .unwrap_or_else(BigInt::zero);
    let bound: BigInt = num_traits::pow(r + 1u32, n) * 2u32 + 1u32;

    let mut modulus = BigInt::one();
    let mut acc = vec![BigInt::zero(); n + 1];
    for p in primes_below(1u64 << 62) {
        if modulus > bound {
            break;
        }
        let z = Zp::new(p);
        let cp = char_poly_mod(m, z);
        for (a, &c) in acc.iter_mut().zip(&cp) {
            *a = crt_step(a, &modulus, c, p);
        }
        modulus *= p;
    }
    Ok(IntPoly::new(
        acc.iter().map(|c| symmetric(c, &modulus)).collect(),
    ))
}

/// Characteristic polynomial modulo `p`, returned with all `n + 1`
/// coefficients (ascending).
fn char_poly_mod(m: &IntMatrix, z: Zp) -> Vec<u64> {
    let n = m.rows();
    let mut h: Vec<Vec<u64>> = (0..n)
        .map(|i| m.row(i).iter().map(|x| z.reduce(x)).collect())
        .collect();

    // Similarity reduction to upper Hessenberg form.
    for k in 0..n.saturating_sub(2) {
        let Some(piv) = (k + 1..n).find(|&i| h[i][k] != 0) else {
            continue;
        };
        if piv != k + 1 {
            h.swap(piv, k + 1);
            for row in h.iter_mut() {
                row.swap(piv, k + 1);
            }
        }
        let inv = z.inv(h[k + 1][k]);
        for i in k + 2..n {
            let f = z.mul(h[i][k], inv);
            if f == 0 {
                continue;
            }
            // row_i -= f row_{k+1}
            for j in 0..n {
                let v = z.mul(f, h[k + 1][j]);
                h[i][j] = z.sub(h[i][j], v);
            }
            // col_{k+1} += f col_i
            for row in h.iter_mut() {
                let v = z.mul(f, row[i]);
                row[k + 1] = z.add(row[k + 1], v);
            }
        }
    }

    // p_k = characteristic polynomial of the leading k x k block.
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        // (x - h[k][k]) p_k
        let prev = &polys[k];
        let mut next = vec![0u64; k + 2];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = z.add(next[i + 1], c);
            next[i] = z.sub(next[i], z.mul(h[k][k], c));
        }
        let mut t = 1u64;
        for i in (0..k).rev() {
            t = z.mul(t, h[i + 1][i]);
            if t == 0 {
                break;
            }
            let f = z.mul(t, h[i][k]);
            for (j, &c) in polys[i].iter().enumerate() {
                next[j] = z.sub(next[j], z.mul(f, c));
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}
