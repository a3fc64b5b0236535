//! Hermite normal form and integer lattices in canonical form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Row Hermite normal form `h = u m` with `u` unimodular.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Pivot column of each non-zero row of `h`.
    pub pivots: Vec<usize>,
}

/// Row HNF: pivots strictly increase to the right, each pivot is positive,
/// entries above a pivot lie in `[0, pivot)` and zero rows come last.
pub fn hermite_normal_form(m: &IntMatrix) -> Hnf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h: Vec<Vec<BigInt>> = m.to_rows();
    let mut u: Vec<Vec<BigInt>> = IntMatrix::identity(rows).to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;

    fn sub_row(rows: &mut [Vec<BigInt>], i: usize, j: usize, q: &BigInt) {
        let (src, dst) = if i < j {
            let (a, b) = rows.split_at_mut(j);
            (&b[0], &mut a[i])
        } else {
            let (a, b) = rows.split_at_mut(i);
            (&a[j], &mut b[0])
        };
        for (d, s) in dst.iter_mut().zip(src) {
            *d -= q * s;
        }
    }

    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..rows).filter(|&i| !h[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&p) = nz.first() {
                    h.swap(r, p);
                    u.swap(r, p);
                }
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| h[i][c].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let q = h[i][c].div_floor(&h[p][c]);
                    sub_row(&mut h, i, p, &q);
                    sub_row(&mut u, i, p, &q);
                }
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if !q.is_zero() {
                sub_row(&mut h, i, r, &q);
                sub_row(&mut u, i, r, &q);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Hnf {
        h: IntMatrix::from_vec(rows, cols, h.into_iter().flatten().collect()),
        u: IntMatrix::from_vec(rows, rows, u.into_iter().flatten().collect()),
        pivots,
    }
}

/// Sublattice of `Z^n` with its basis in row Hermite normal form, so equal
/// lattices have identical bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerLattice {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<BigInt>>,
}

impl IntegerLattice {
    /// Lattice spanned by arbitrary (possibly dependent) generators.
    pub fn from_generators(ambient_dim: usize, gens: &[Vec<BigInt>]) -> Self {
        if gens.is_empty() {
            return IntegerLattice {
                ambient_dim,
                basis: Vec::new(),
            };
        }
        let m = IntMatrix::from_rows(gens.to_vec());
        let hnf = hermite_normal_form(&m);
        let basis = (0..hnf.pivots.len())
            .map(|i| hnf.h.row(i).to_vec())
            .collect();
        IntegerLattice { ambient_dim, basis }
    }

    pub fn full(n: usize) -> Self {
        Self::from_generators(n, &IntMatrix::identity(n).to_rows())
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut v = v.to_vec();
        for row in &self.basis {
            let c = row.iter().position(|x| !x.is_zero()).unwrap();
            let (q, rem) = v[c].div_rem(&row[c]);
            if !rem.is_zero() {
                return false;
            }
            for (x, b) in v.iter_mut().zip(row) {
                *x -= &q * b;
            }
        }
        v.iter().all(Zero::is_zero)
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient_dim && self.basis.iter().enumerate().all(|(i, r)| r[i].is_one())
    }
}

/// Saturated lattice `{w in Z^rows : w m = 0}`.
pub fn integer_left_kernel(m: &IntMatrix) -> IntegerLattice {
    let hnf = hermite_normal_form(m);
    let rank = hnf.pivots.len();
    let gens: Vec<Vec<BigInt>> = (rank..m.rows()).map(|i| hnf.u.row(i).to_vec()).collect();
    IntegerLattice::from_generators(m.rows(), &gens)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.to_rows();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(m: &IntMatrix) -> Vec<Vec<i64>> {
        use num_traits::ToPrimitive;
        m.to_rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect())
            .collect()
    }

    #[test]
    fn hnf_small() {
        let m = IntMatrix::from_i64(&[&[2, 4], &[1, 3]]);
        let hnf = hermite_normal_form(&m);
        assert_eq!(rows(&hnf.h), vec![vec![1, 1], vec![0, 2]]);
        assert_eq!(hnf.u.mul_mat(&m), hnf.h);
        assert_eq!(determinant(&hnf.u).abs(), BigInt::one());
    }

    #[test]
    fn hnf_identity_and_zero() {
        let id = IntMatrix::identity(3);
        let hnf = hermite_normal_form(&id);
        assert_eq!(hnf.h, id);
        assert_eq!(hnf.u, id);
        let z = IntMatrix::from_i64(&[&[0, 0]]);
        assert_eq!(hermite_normal_form(&z).h, z);
    }

    #[test]
    fn left_kernel_examples() {
        let k = integer_left_kernel(&IntMatrix::from_i64(&[&[1], &[2]]));
        assert_eq!(k.basis, vec![vec![BigInt::from(2), BigInt::from(-1)]]);
        let z = IntMatrix::zeros(3, 3);
        assert!(integer_left_kernel(&z).is_full());
    }

    #[test]
    fn determinant_matches_expansion() {
        let m = IntMatrix::from_i64(&[&[2, -1, 0], &[1, 3, 2], &[0, 5, -4]]);
        // 2(-12 - 10) + 1(-4 - 0) = -48
        assert_eq!(determinant(&m), BigInt::from(-48));
    }
}
