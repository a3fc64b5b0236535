//! Finitely generated subgroups of a number field containing `Z`, in a
//! canonical form: a minimal common denominator and the row Hermite normal
//! form of the scaled power-basis coordinates.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::{FieldElement, IntegerLattice, LabeledField};

#[derive(Clone, Debug)]
pub struct AlphaLattice {
    pub field: Arc<LabeledField>,
    pub denominator: BigInt,
    /// HNF rows of `denominator * coordinates`.
    pub rows: Vec<Vec<BigInt>>,
}

impl PartialEq for AlphaLattice {
    fn eq(&self, o: &Self) -> bool {
        self.field.same_as(&o.field) && self.denominator == o.denominator && self.rows == o.rows
    }
}

impl AlphaLattice {
    /// `Z + Σ g Z`.
    pub fn new<I: IntoIterator<Item = FieldElement>>(field: &Arc<LabeledField>, gens: I) -> Self {
        let mut coords: Vec<Vec<BigRational>> = vec![field.one().coords()];
        coords.extend(gens.into_iter().map(|g| g.coords()));
        let deg = field.degree();
        let den = coords
            .iter()
            .flatten()
            .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let ints: Vec<Vec<BigInt>> = coords
            .iter()
            .map(|c| {
                c.iter()
                    .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
                    .collect()
            })
            .collect();
        let lat = IntegerLattice::from_generators(deg, &ints);
        let g = lat
            .basis
            .iter()
            .flatten()
            .fold(den.clone(), |g, x| g.gcd(x));
        let rows = lat
            .basis
            .into_iter()
            .map(|r| r.into_iter().map(|x| x / &g).collect())
            .collect();
        AlphaLattice {
            field: field.clone(),
            denominator: den / g,
            rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Rank modulo the integers.
    pub fn independent_rank(&self) -> usize {
        self.rank() - 1
    }

    pub fn generators(&self) -> Vec<FieldElement> {
        self.rows
            .iter()
            .map(|r| {
                self.field.from_coords(
                    r.iter()
                        .map(|x| BigRational::new(x.clone(), self.denominator.clone()))
                        .collect(),
                )
            })
            .collect()
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        let lat = IntegerLattice {
            ambient_dim: self.field.degree(),
            basis: self.rows.clone(),
        };
        let scaled: Vec<BigRational> = x
            .coords()
            .iter()
            .map(|c| c * BigRational::from_integer(self.denominator.clone()))
            .collect();
        if scaled.iter().any(|c| !c.is_integer()) {
            return false;
        }
        lat.contains(&scaled.iter().map(|c| c.to_integer()).collect::<Vec<_>>())
    }

    /// True when every element is rational.
    pub fn is_rational(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.iter().skip(1).all(Zero::is_zero))
    }
}

impl fmt::Display for AlphaLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self
            .generators()
            .iter()
            .map(|x| format!("({x})Z"))
            .collect();
        write!(f, "{}", g.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{isolate_roots, IntPoly};

    fn golden() -> Arc<LabeledField> {
        let p = IntPoly::from_i64(&[-1, -1, 1]);
        let r = isolate_roots(&p).unwrap()[1].clone();
        LabeledField::new(p, r).unwrap()
    }

    #[test]
    fn canonical_equality() {
        let k = golden();
        let phi = k.gen();
        let a = AlphaLattice::new(&k, [phi.clone()]);
        // φ² = φ + 1 spans the same group together with 1.
        let b = AlphaLattice::new(&k, [phi.pow(2), k.from_int(3)]);
        assert_eq!(a, b);
        assert_eq!(a.independent_rank(), 1);
        let half = AlphaLattice::new(&k, [phi.scale(&BigRational::new(1.into(), 2.into()))]);
        assert_ne!(a, half);
        assert_eq!(half.denominator, BigInt::from(2));
        assert!(half.contains(&phi));
        assert!(!a.contains(&half.generators()[1]));
    }

    #[test]
    fn rational_lattices() {
        let k = golden();
        let l = AlphaLattice::new(&k, [k.from_rational(BigRational::new(1.into(), 3.into()))]);
        assert!(l.is_rational());
        assert_eq!(l.independent_rank(), 0);
        assert_eq!(l.denominator, BigInt::from(3));
    }
}
