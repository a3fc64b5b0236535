//! Proprification through return words.
//!
//! A power `σ^k` with a one-sided fixed point `u` starting with `a` is
//! recoded over the return words on `a` (the return substitution `τ`), then
//! over positions inside return words (the substitution `ξ`). The subshift
//! of `ξ` is conjugate to that of `σ` and some power of `ξ` is left-proper.

use std::collections::HashMap;

use thiserror::Error;

use crate::exact::{char_poly, factor_rational, ExactError, IntMatrix, IntPoly};
use crate::substitution::{Substitution, SubstitutionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProprifyError {
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("the substitution is periodic: a single return word on {0}")]
    Periodic(String),
    #[error("no power of the return substitution up to {0} is long enough to recode positions")]
    ShortImages(usize),
}

/// Return words on `letter`, in breadth-first discovery order from the
/// return word that starts the fixed point (index 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnWordSet {
    pub letter: usize,
    pub words: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Proprification {
    pub original: Substitution,
    /// `σ^power_k` has the fixed point used for return words.
    pub power_k: usize,
    pub return_words: ReturnWordSet,
    pub tau: Substitution,
    /// `ξ` is built from `τ^tau_power`, the least power whose images are at
    /// least as long as the return words they recode.
    pub tau_power: usize,
    pub xi: Substitution,
    /// Original letter represented by each letter of `ξ`.
    pub letter_map: Vec<usize>,
    /// `(r, p)` for each letter of `ξ`, 1-based `p`.
    pub positions: Vec<(usize, usize)>,
    pub left_proper_power: Option<usize>,
    /// Least `l` such that `M_ξ` and `M_σ^l` share their eigenvalues other
    /// than 0 and 1, with multiplicity.
    pub eigen_witness: Option<usize>,
}

/// Names `a, b, …, z, aa, ab, …` for return words.
pub fn return_word_name(i: usize) -> String {
    let mut n = i;
    let mut s = Vec::new();
    loop {
        s.push(b'a' + (n % 26) as u8);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).unwrap()
}

fn split_at_letter(w: &[usize], a: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for &c in w {
        if c == a || out.is_empty() {
            out.push(Vec::new());
        }
        out.last_mut().unwrap().push(c);
    }
    out
}

/// Return words on the fixed letter of `σ^k` and the return substitution.
/// Returns `(k, words, τ)`.
pub fn return_substitution(
    s: &Substitution,
) -> Result<(usize, ReturnWordSet, Substitution), ProprifyError> {
    if !s.is_primitive().primitive {
        return Err(SubstitutionError::NotPrimitive.into());
    }
    let seed = s.fixed_point_seed()?;
    let sk = s.pow(seed.power);
    let a = seed.letter;

    // Grow the fixed point until it contains a second `a`.
    let mut u = vec![a];
    while u.iter().filter(|&&c| c == a).count() < 2 {
        let next = sk.apply(&u);
        if next.len() > 1 << 24 {
            return Err(ProprifyError::Periodic(s.letter(a).to_string()));
        }
        u = next;
    }
    let second = u.iter().skip(1).position(|&c| c == a).unwrap() + 1;
    let w0 = u[..second].to_vec();

    let mut words = vec![w0];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    index.insert(words[0].clone(), 0);
    let mut images: Vec<Vec<usize>> = Vec::new();
    let mut head = 0;
    while head < words.len() {
        let img = sk.apply(&words[head]);
        let mut dec = Vec::new();
        for r in split_at_letter(&img, a) {
            let id = *index.entry(r.clone()).or_insert_with(|| {
                words.push(r);
                words.len() - 1
            });
            dec.push(id);
        }
        images.push(dec);
        head += 1;
    }
    if words.len() == 1 {
        return Err(ProprifyError::Periodic(s.letter(a).to_string()));
    }
    let names = (0..words.len()).map(return_word_name).collect();
    let tau = Substitution::new(names, images)?;
    Ok((seed.power, ReturnWordSet { letter: a, words }, tau))
}

/// `ξ` from a return substitution (possibly a power of it) and the return
/// word lengths. Letter `(r, p)` is named by its rank in `(r, p)` order.
pub fn xi_substitution(
    tau: &Substitution,
    lengths: &[usize],
) -> Result<(Substitution, Vec<(usize, usize)>), ProprifyError> {
    let mut positions = Vec::new();
    let mut offset = Vec::new();
    for (r, &len) in lengths.iter().enumerate() {
        offset.push(positions.len());
        for p in 1..=len {
            positions.push((r, p));
        }
    }
    let psi = |word: &[usize]| -> Vec<usize> {
        word.iter()
            .flat_map(|&r| offset[r]..offset[r] + lengths[r])
            .collect()
    };
    let mut images = Vec::with_capacity(positions.len());
    for &(r, p) in &positions {
        let img = tau.image(r);
        let len = lengths[r];
        if img.len() < len {
            return Err(ProprifyError::ShortImages(1));
        }
        images.push(if p < len {
            psi(&img[p - 1..p])
        } else {
            psi(&img[len - 1..])
        });
    }
    let names = (0..positions.len()).map(|i| i.to_string()).collect();
    Ok((Substitution::new(names, images)?, positions))
}

/// Non-zero, non-one eigenvalues with multiplicity, as irreducible factors.
fn spectrum_signature(m: &IntMatrix) -> Result<Vec<(IntPoly, usize)>, ExactError> {
    let x = IntPoly::x();
    let x1 = IntPoly::from_i64(&[-1, 1]);
    let mut f = factor_rational(&char_poly(m)?)?;
    f.retain(|(q, _)| *q != x && *q != x1);
    Ok(f)
}

pub fn proprify(s: &Substitution) -> Result<Proprification, ProprifyError> {
    let (power_k, rw, tau) = return_substitution(s)?;
    let lengths: Vec<usize> = rw.words.iter().map(Vec::len).collect();
    let limit = 64;
    let mut tj = tau.clone();
    let mut tau_power = 1;
    while (0..tau.size()).any(|r| tj.image(r).len() < lengths[r]) {
        if tau_power == limit {
            return Err(ProprifyError::ShortImages(limit));
        }
        tj = tau.compose(&tj);
        tau_power += 1;
    }
    let (xi, positions) = xi_substitution(&tj, &lengths)?;
    let letter_map = positions.iter().map(|&(r, p)| rw.words[r][p - 1]).collect();
    let left_proper_power = xi.proper_power(xi.size() + 1);

    let target = spectrum_signature(&xi.incidence_matrix())?;
    let m = s.incidence_matrix();
    let mut eigen_witness = None;
    let mut ml = m.clone();
    for l in 1..=2 * power_k * tau_power {
        if l > 1 {
            ml = ml.mul_mat(&m);
        }
        if spectrum_signature(&ml)? == target {
            eigen_witness = Some(l);
            break;
        }
    }

    Ok(Proprification {
        original: s.clone(),
        power_k,
        return_words: rw,
        tau,
        tau_power,
        xi,
        letter_map,
        positions,
        left_proper_power,
        eigen_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::parse_substitution;

    #[test]
    fn names() {
        assert_eq!(return_word_name(0), "a");
        assert_eq!(return_word_name(25), "z");
        assert_eq!(return_word_name(26), "aa");
        assert_eq!(return_word_name(27), "ab");
    }

    #[test]
    fn fibonacci_return_words() {
        let s = parse_substitution("a->ab b->a").unwrap();
        let (k, rw, tau) = return_substitution(&s).unwrap();
        assert_eq!(k, 1);
        assert_eq!(rw.words, vec![vec![0, 1], vec![0]]);
        assert_eq!(tau.to_rules_string(), "a->ab b->a");
        let p = proprify(&s).unwrap();
        assert_eq!(p.xi.size(), 3);
    }

    #[test]
    fn periodic_input_is_rejected() {
        let s = parse_substitution("a->ab b->ab").unwrap();
        assert!(matches!(proprify(&s), Err(ProprifyError::Periodic(_))));
    }

    #[test]
    fn five_letter_example() {
        let s = parse_substitution("1->213 2->4 3->5 4->1 5->21").unwrap();
        let p = proprify(&s).unwrap();
        assert_eq!(p.power_k, 3);
        let words: Vec<String> = p
            .return_words
            .words
            .iter()
            .map(|w| s.word_string(w))
            .collect();
        assert_eq!(words, ["142", "1352", "13"]);
        assert_eq!(p.tau.to_rules_string(), "a->ababc b->abacabc c->abac");
        assert!(p.tau.is_left_proper());
        let xi: Vec<String> = (0..p.xi.size()).map(|i| p.xi.image_string(i)).collect();
        assert_eq!(
            xi,
            [
                "012",
                "3456",
                "012345678",
                "012",
                "3456",
                "012",
                "78012345678",
                "012",
                "345601278"
            ]
        );
        assert!(!p.xi.is_left_proper());
        assert_eq!(p.left_proper_power, Some(2));
        assert!(p.eigen_witness.is_some());
    }

    #[test]
    fn larger_inputs() {
        for rules in [
            "a->Ab b->A A->aB B->a",
            "a->abbbccccccccccdddddddd b->bccc c->d d->a",
            "1->15 2->2122 3->122 4->13 5->14122",
        ] {
            let s = parse_substitution(rules).unwrap();
            let p = proprify(&s).unwrap();
            assert!(p.xi.is_primitive().primitive, "{rules}");
            assert!(p.left_proper_power.is_some(), "{rules}");
            assert!(p.eigen_witness.is_some(), "{rules}");
        }
    }
}
