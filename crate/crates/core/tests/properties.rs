//! Invariants checked on random inputs.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use subst_spectra::exact::lattice::determinant;
use subst_spectra::exact::{
    factor_rational, hermite_normal_form, integer_left_kernel, is_irreducible, IntMatrix, IntPoly,
};
use subst_spectra::geometry::{rauzy_cloud, usual_projection};
use subst_spectra::proprify::proprify;
use subst_spectra::substitution::{parse_substitution, DumontThomas, Substitution};

/// Primitive substitutions on 2 to 4 letters with images of length 1 to 4.
fn primitive_substitution() -> impl Strategy<Value = Substitution> {
    (2usize..=4)
        .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(0..n, 1..=4), n))
        .prop_filter_map("not primitive", |images| {
            let letters = (0..images.len())
                .map(|i| ((b'a' + i as u8) as char).to_string())
                .collect();
            let s = Substitution::new(letters, images).ok()?;
            s.is_primitive().primitive.then_some(s)
        })
}

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, cols), rows).prop_map(|r| {
        IntMatrix::from_rows(
            r.into_iter()
                .map(|row| row.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    })
}

fn seeded(s: &Substitution) -> (Substitution, usize) {
    let seed = s.fixed_point_seed().unwrap();
    (s.pow(seed.power), seed.letter)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn abelianization_intertwines(s in primitive_substitution(), word in prop::collection::vec(0usize..4, 0..30)) {
        let word: Vec<usize> = word.into_iter().map(|a| a % s.size()).collect();
        let ab: Vec<BigInt> = s.abelianize(&word).into_iter().map(BigInt::from).collect();
        let image: Vec<BigInt> = s.abelianize(&s.apply(&word)).into_iter().map(BigInt::from).collect();
        prop_assert_eq!(s.incidence_matrix().mul_vec(&ab), image);
    }

    #[test]
    fn fixed_point_prefix_is_fixed(s in primitive_substitution()) {
        let (p, a) = seeded(&s);
        let u = p.fixed_point_prefix(a, 200).unwrap();
        prop_assert_eq!(u.len(), 200);
        let image = p.apply(&u);
        prop_assert_eq!(&image[..200], &u[..]);
        // Longer requests extend shorter ones.
        let v = p.fixed_point_prefix(a, 77).unwrap();
        prop_assert_eq!(&u[..77], &v[..]);
    }

    #[test]
    fn dumont_thomas_reconstructs_prefix_counts(s in primitive_substitution(), k in 0usize..300) {
        let (p, a) = seeded(&s);
        let dt = DumontThomas::new(&p, a, 300).unwrap();
        let e = dt.digits(k).unwrap();
        prop_assert_eq!(e.reconstruct(&p), p.abelianize(&dt.prefix()[..k]));
        prop_assert_eq!(e.path[0], dt.prefix()[k]);
        for (n, pre) in e.prefixes.iter().enumerate() {
            // Each digit is a proper prefix of the image of the parent letter.
            let img = p.image(e.path[n + 1]);
            prop_assert!(pre.len() < img.len());
            prop_assert_eq!(&img[..pre.len()], &pre[..]);
            prop_assert_eq!(img[pre.len()], e.path[n]);
        }
    }

    #[test]
    fn proprification_recodes_the_fixed_point(s in primitive_substitution()) {
        let Ok(pr) = proprify(&s) else { return Ok(()) };
        prop_assert!(pr.xi.is_primitive().primitive);
        prop_assert!(pr.left_proper_power.is_some());
        let base = s.pow(pr.power_k);
        let u = base.fixed_point_prefix(pr.return_words.letter, 400).unwrap();
        let (xp, x0) = seeded(&pr.xi);
        let v = xp.fixed_point_prefix(x0, 400).unwrap();
        let decoded: Vec<usize> = v.iter().map(|&c| pr.letter_map[c]).collect();
        prop_assert_eq!(decoded, u);
    }

    #[test]
    fn factors_multiply_back(a in prop::collection::vec(-4i64..=4, 1..=4), b in prop::collection::vec(-4i64..=4, 1..=4)) {
        let p = &IntPoly::from_i64(&a) * &IntPoly::from_i64(&b);
        prop_assume!(!p.is_zero() && p.deg() > 0);
        let f = factor_rational(&p).unwrap();
        let mut prod = IntPoly::one();
        for (q, e) in &f {
            prop_assert!(is_irreducible(q));
            prop_assert!(q.lc().is_positive());
            prop_assert!(q.content().is_one());
            prod = &prod * &q.pow(*e);
        }
        prop_assert_eq!(p.scale(&prod.lc()), prod.scale(&p.lc()));
    }

    #[test]
    fn hnf_is_a_unimodular_transform(m in small_matrix(3, 4)) {
        let h = hermite_normal_form(&m);
        prop_assert_eq!(h.u.mul_mat(&m), h.h.clone());
        prop_assert_eq!(determinant(&h.u).abs(), BigInt::one());
        for (r, &c) in h.pivots.iter().enumerate() {
            prop_assert!(h.h[(r, c)].is_positive());
            for above in 0..r {
                prop_assert!(!h.h[(above, c)].is_negative() && h.h[(above, c)] < h.h[(r, c)]);
            }
        }
        prop_assert_eq!(h.pivots.len(), m.rank());
    }

    #[test]
    fn left_kernel_annihilates(a in small_matrix(4, 2), b in small_matrix(2, 4)) {
        let m = a.mul_mat(&b);
        let k = integer_left_kernel(&m);
        prop_assert_eq!(k.rank() + m.rank(), 4);
        for v in &k.basis {
            prop_assert!(m.vec_mul(v).iter().all(Zero::is_zero));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// The worm of a Pisot unit substitution stays bounded, and one
    /// substitution step is the contraction on projected prefix counts.
    #[test]
    fn worm_shift_relation(which in 0usize..3, k in 1usize..2000) {
        let rules = ["1->12 2->13 3->1", "1->213 2->4 3->5 4->1 5->21", "a->ab b->a"][which];
        let s = parse_substitution(rules).unwrap();
        let proj = usual_projection(&s).unwrap();
        let n = proj.contraction.clone().unwrap();
        let (p, a) = seeded(&s);
        let u = p.fixed_point_prefix(a, 20_000).unwrap();
        let x = proj.apply_counts(&s.abelianize(&u[..k]));
        let y = proj.apply_counts(&s.abelianize(&s.apply(&u[..k])));
        let nx = &n * nalgebra::DVector::from_vec(x.clone());
        for (yi, nxi) in y.iter().zip(nx.iter()) {
            prop_assert!((yi - nxi).abs() < 1e-9 * (1.0 + k as f64));
        }
        // The first 200 points already bound the rest.
        let cloud = rauzy_cloud(&s, &proj, 200).unwrap();
        let r = cloud.points().flat_map(|q| q.iter().map(|v| v.abs())).fold(0.0, f64::max);
        prop_assert!(x.iter().all(|v| v.abs() <= 2.0 * r + 1.0));
    }
}
