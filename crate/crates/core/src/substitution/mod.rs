//! Substitutions over finite alphabets: incidence matrices, primitivity,
//! properness, one-sided fixed points, and the prefix-suffix automaton.

mod automaton;
mod parse;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::exact::IntMatrix;

pub use automaton::{
    dumont_thomas_digits, DTExpansion, DumontThomas, PrefixSuffixAutomaton, Transition,
};
pub use parse::{parse_substitution, ParseError, ParseErrorKind};

/// Letter counts indexed by the alphabet.
pub type AbelianVector = Vec<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubstitutionError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("the image of {0} is empty")]
    Erasing(String),
    #[error("the image of {0} uses a letter outside the alphabet")]
    UnknownLetter(String),
    #[error("letter {0} is declared twice")]
    DuplicateLetter(String),
    #[error("the substitution is not primitive")]
    NotPrimitive,
    #[error("no power of the substitution up to {0} has a growing fixed letter")]
    NoFixedPoint(usize),
    #[error("{0} is not the first letter of its own image, or its image does not grow")]
    BadSeed(String),
    #[error("position {0} is beyond the generated prefix")]
    OutOfRange(usize),
}

/// A non-erasing morphism of the free monoid over `letters`. Letters are
/// opaque names; internally they are dense indices in declaration order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Substitution {
    letters: Vec<String>,
    images: Vec<Vec<usize>>,
}

/// Primitivity verdict with the least exponent `n` such that `M^n > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Primitivity {
    pub primitive: bool,
    pub witness_power: Option<usize>,
}

/// `σ^power(letter)` starts with `letter` and has length at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixedPointSeed {
    pub power: usize,
    pub letter: usize,
}

impl Substitution {
    pub fn new(letters: Vec<String>, images: Vec<Vec<usize>>) -> Result<Self, SubstitutionError> {
        assert_eq!(letters.len(), images.len(), "one image per letter");
        let mut seen = HashMap::new();
        for (i, l) in letters.iter().enumerate() {
            if seen.insert(l.clone(), i).is_some() {
                return Err(SubstitutionError::DuplicateLetter(l.clone()));
            }
        }
        for (i, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(SubstitutionError::Erasing(letters[i].clone()));
            }
            if img.iter().any(|&b| b >= letters.len()) {
                return Err(SubstitutionError::UnknownLetter(letters[i].clone()));
            }
        }
        Ok(Substitution { letters, images })
    }

    /// Substitution whose letters are the characters of the rule heads, e.g.
    /// `from_compact(&[("a", "ab"), ("b", "a")])`.
    pub fn from_compact(rules: &[(&str, &str)]) -> Result<Self, SubstitutionError> {
        let letters: Vec<String> = rules.iter().map(|(h, _)| h.to_string()).collect();
        let index: HashMap<&str, usize> = rules
            .iter()
            .enumerate()
            .map(|(i, (h, _))| (*h, i))
            .collect();
        let mut images = Vec::new();
        for (h, img) in rules {
            let mut v = Vec::new();
            for ch in img.chars() {
                let s = ch.to_string();
                match index.get(s.as_str()) {
                    Some(&i) => v.push(i),
                    None => return Err(SubstitutionError::UnknownLetter(h.to_string())),
                }
            }
            images.push(v);
        }
        Self::new(letters, images)
    }

    pub fn size(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> &str {
        &self.letters[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l == name)
    }

    pub fn image(&self, a: usize) -> &[usize] {
        &self.images[a]
    }

    pub fn images(&self) -> &[Vec<usize>] {
        &self.images
    }

    pub fn apply(&self, word: &[usize]) -> Vec<usize> {
        word.iter()
            .flat_map(|&a| self.images[a].iter().copied())
            .collect()
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        Substitution {
            letters: self.letters.clone(),
            images: other.images.iter().map(|w| self.apply(w)).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Substitution {
        assert!(k >= 1);
        let mut s = self.clone();
        for _ in 1..k {
            s = self.compose(&s);
        }
        s
    }

    /// Renames letters; `names[i]` becomes the name of letter `i`.
    pub fn with_letters(&self, names: Vec<String>) -> Result<Substitution, SubstitutionError> {
        Substitution::new(names, self.images.clone())
    }

    pub fn abelianize(&self, word: &[usize]) -> AbelianVector {
        let mut v = vec![0i64; self.size()];
        for &a in word {
            v[a] += 1;
        }
        v
    }

    /// Entry `(b, a)` counts the occurrences of `b` in `σ(a)`.
    pub fn incidence_matrix(&self) -> IntMatrix {
        let n = self.size();
        let mut m = IntMatrix::zeros(n, n);
        for (a, img) in self.images.iter().enumerate() {
            for &b in img {
                m[(b, a)] += BigInt::from(1);
            }
        }
        m
    }

    pub fn is_primitive(&self) -> Primitivity {
        let d = self.size();
        let mut b = BoolMatrix::zeros(d);
        for (a, img) in self.images.iter().enumerate() {
            for &c in img {
                b.set(c, a);
            }
        }
        bool_primitivity(b)
    }

    pub fn is_left_proper(&self) -> bool {
        let first = self.images[0][0];
        self.images.iter().all(|w| w[0] == first)
    }

    pub fn is_right_proper(&self) -> bool {
        let last = *self.images[0].last().unwrap();
        self.images.iter().all(|w| *w.last().unwrap() == last)
    }

    /// Least `k <= max_k` with `σ^k` left-proper. Only first letters
    /// matter: `σ^k(a)` starts with `f^k(a)` for the first-letter map `f`.
    pub fn proper_power(&self, max_k: usize) -> Option<usize> {
        let f: Vec<usize> = self.images.iter().map(|w| w[0]).collect();
        let mut cur: Vec<usize> = (0..self.size()).collect();
        for k in 1..=max_k {
            cur = cur.iter().map(|&a| f[a]).collect();
            if cur.iter().all(|&a| a == cur[0]) {
                return Some(k);
            }
        }
        None
    }

    /// Least `k` (and first such letter) with `σ^k(a)` starting with `a` and
    /// of length at least 2.
    pub fn fixed_point_seed(&self) -> Result<FixedPointSeed, SubstitutionError> {
        let n = self.size();
        let f: Vec<usize> = self.images.iter().map(|w| w[0]).collect();
        let mut first: Vec<usize> = (0..n).collect();
        let mut len: Vec<u128> = vec![1; n];
        let limit = 4 * n * n + 8;
        for k in 1..=limit {
            first = first.iter().map(|&a| f[a]).collect();
            len = (0..n)
                .map(|a| {
                    // |σ^k(a)| = sum of |σ^{k-1}(b)| over b in σ(a)
                    self.images[a]
                        .iter()
                        .map(|&b| len[b])
                        .sum::<u128>()
                        .min(1 << 100)
                })
                .collect();
            if let Some(a) = (0..n).find(|&a| first[a] == a && len[a] >= 2) {
                return Ok(FixedPointSeed {
                    power: k,
                    letter: a,
                });
            }
        }
        Err(SubstitutionError::NoFixedPoint(limit))
    }

    /// First `n` letters of the one-sided fixed point starting with `a`.
    pub fn fixed_point_prefix(&self, a: usize, n: usize) -> Result<Vec<usize>, SubstitutionError> {
        if self.images[a][0] != a {
            return Err(SubstitutionError::BadSeed(self.letters[a].clone()));
        }
        let mut w = vec![a];
        while w.len() < n {
            // Only the first n letters of σ(w) are needed, and they come from
            // at most the first n letters of w.
            let mut next = Vec::with_capacity(n);
            for &c in &w {
                next.extend_from_slice(&self.images[c]);
                if next.len() >= n {
                    break;
                }
            }
            if next.len() <= w.len() {
                return Err(SubstitutionError::BadSeed(self.letters[a].clone()));
            }
            w = next;
        }
        w.truncate(n);
        Ok(w)
    }

    /// Compact (`a->ab b->a`) when every letter is one character, bracketed
    /// (`a1->[a1 b2]`) otherwise.
    pub fn to_rules_string(&self) -> String {
        let compact = self.letters.iter().all(|l| l.chars().count() == 1);
        self.images
            .iter()
            .enumerate()
            .map(|(a, img)| {
                let body: Vec<&str> = img.iter().map(|&b| self.letters[b].as_str()).collect();
                if compact {
                    format!("{}->{}", self.letters[a], body.concat())
                } else {
                    format!("{}->[{}]", self.letters[a], body.join(" "))
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Image of `a` as a string of letter names (joined without separator).
    pub fn image_string(&self, a: usize) -> String {
        self.word_string(&self.images[a])
    }

    pub fn word_string(&self, w: &[usize]) -> String {
        w.iter().map(|&b| self.letters[b].as_str()).collect()
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rules_string())
    }
}

/// Primitivity of a non-negative square matrix.
pub fn matrix_primitivity(m: &IntMatrix) -> Primitivity {
    let d = m.rows();
    let mut b = BoolMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            if m[(i, j)].is_positive() {
                b.set(i, j);
            }
        }
    }
    bool_primitivity(b)
}

/// Least `n <= (d-1)^2 + 1` (Wielandt) with `B^n > 0`, found by binary
/// lifting over the powers `B^(2^i)`.
fn bool_primitivity(b: BoolMatrix) -> Primitivity {
    let d = b.n;
    if d == 0 {
        return Primitivity {
            primitive: false,
            witness_power: None,
        };
    }
    let bound = (d - 1) * (d - 1) + 1;
    let mut powers = vec![b];
    while (1usize << (powers.len() - 1)) < bound {
        let last = powers.last().unwrap();
        powers.push(last.mul(last));
    }
    // Largest n < bound with B^n not positive, built bit by bit.
    let mut cur = BoolMatrix::identity(d);
    let mut n = 0usize;
    for i in (0..powers.len()).rev() {
        let cand = cur.mul(&powers[i]);
        if !cand.all_positive() && n + (1 << i) <= bound {
            cur = cand;
            n += 1 << i;
        }
    }
    let witness = n + 1;
    if witness <= bound && cur.mul(&powers[0]).all_positive() {
        Primitivity {
            primitive: true,
            witness_power: Some(witness),
        }
    } else {
        Primitivity {
            primitive: false,
            witness_power: None,
        }
    }
}

/// Square boolean matrix with bit-packed rows.
#[derive(Clone)]
struct BoolMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    fn zeros(n: usize) -> Self {
        let words = n.div_ceil(64);
        BoolMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn mul(&self, o: &BoolMatrix) -> BoolMatrix {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                if self.get(i, k) {
                    for w in 0..self.words {
                        out.bits[i * self.words + w] |= o.bits[k * self.words + w];
                    }
                }
            }
        }
        out
    }

    fn all_positive(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j)))
    }
}
