//! Prefix-suffix automaton and Dumont-Thomas expansions of fixed-point
//! prefixes.

use super::{AbelianVector, Substitution, SubstitutionError};

/// `source →(prefix, suffix) target` with `σ(source) = prefix target suffix`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub source: usize,
    pub prefix: Vec<usize>,
    pub suffix: Vec<usize>,
    pub target: usize,
}

#[derive(Clone, Debug)]
pub struct PrefixSuffixAutomaton {
    pub states: usize,
    /// Ordered by source letter, then by position in the image.
    pub transitions: Vec<Transition>,
}

impl PrefixSuffixAutomaton {
    pub fn new(s: &Substitution) -> Self {
        let mut transitions = Vec::new();
        for a in 0..s.size() {
            let img = s.image(a);
            for (i, &b) in img.iter().enumerate() {
                transitions.push(Transition {
                    source: a,
                    prefix: img[..i].to_vec(),
                    suffix: img[i + 1..].to_vec(),
                    target: b,
                });
            }
        }
        PrefixSuffixAutomaton {
            states: s.size(),
            transitions,
        }
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    /// Transitions with the prefix replaced by its abelianization:
    /// `(source, ab(p), target)`.
    pub fn abelianized(&self) -> Vec<(usize, AbelianVector, usize)> {
        self.transitions
            .iter()
            .map(|t| {
                let mut v = vec![0i64; self.states];
                for &c in &t.prefix {
                    v[c] += 1;
                }
                (t.source, v, t.target)
            })
            .collect()
    }

    pub fn transitions_from(&self, a: usize) -> impl Iterator<Item = &Transition> {
        self.transitions.iter().filter(move |t| t.source == a)
    }
}

/// Expansion `u_[0,k) = σ^N(p_N) … σ(p_1) p_0` of a prefix of the fixed
/// point. `path[0] = u_k` and `path[n+1] →(p_n, s_n) path[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DTExpansion {
    pub digits: Vec<AbelianVector>,
    pub prefixes: Vec<Vec<usize>>,
    pub path: Vec<usize>,
}

impl DTExpansion {
    /// `Σ M^n t_n`, evaluated as `t_0 + M(t_1 + M(t_2 + …))`.
    pub fn reconstruct(&self, s: &Substitution) -> AbelianVector {
        let d = s.size();
        let mut acc = vec![0i64; d];
        for t in self.digits.iter().rev() {
            let mut next = t.clone();
            for (a, img) in s.images().iter().enumerate() {
                for &b in img {
                    next[b] += acc[a];
                }
            }
            acc = next;
        }
        acc
    }
}

/// Fixed-point prefix together with the cumulative image lengths, so that
/// the parent of every position is a binary search away.
#[derive(Clone, Debug)]
pub struct DumontThomas<'a> {
    s: &'a Substitution,
    u: Vec<usize>,
    /// `cum[j] = |σ(u_[0,j))|`.
    cum: Vec<usize>,
}

impl<'a> DumontThomas<'a> {
    pub fn new(s: &'a Substitution, a: usize, n: usize) -> Result<Self, SubstitutionError> {
        let u = s.fixed_point_prefix(a, n.max(1))?;
        Ok(Self::from_prefix(s, u))
    }

    pub fn from_prefix(s: &'a Substitution, u: Vec<usize>) -> Self {
        let mut cum = Vec::with_capacity(u.len() + 1);
        let mut acc = 0usize;
        cum.push(0);
        for &c in &u {
            acc += s.image(c).len();
            cum.push(acc);
        }
        DumontThomas { s, u, cum }
    }

    pub fn prefix(&self) -> &[usize] {
        &self.u
    }

    pub fn digits(&self, k: usize) -> Result<DTExpansion, SubstitutionError> {
        if k >= self.u.len() {
            return Err(SubstitutionError::OutOfRange(k));
        }
        let mut exp = DTExpansion {
            digits: Vec::new(),
            prefixes: Vec::new(),
            path: vec![self.u[k]],
        };
        let mut k = k;
        while k > 0 {
            // Largest j with cum[j] <= k; j < k because images are non-empty
            // and σ(u_0) starts with u_0.
            let j = self.cum.partition_point(|&c| c <= k) - 1;
            let off = k - self.cum[j];
            let p = self.s.image(self.u[j])[..off].to_vec();
            exp.digits.push(self.s.abelianize(&p));
            exp.prefixes.push(p);
            exp.path.push(self.u[j]);
            k = j;
        }
        Ok(exp)
    }
}

/// Dumont-Thomas digits of position `k` in the fixed point starting with `a`.
pub fn dumont_thomas_digits(
    s: &Substitution,
    a: usize,
    k: usize,
) -> Result<DTExpansion, SubstitutionError> {
    DumontThomas::new(s, a, k + 1)?.digits(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> Substitution {
        Substitution::from_compact(&[("a", "ab"), ("b", "a")]).unwrap()
    }

    #[test]
    fn fibonacci_transitions() {
        let aut = PrefixSuffixAutomaton::new(&fib());
        let t: Vec<(usize, Vec<usize>, Vec<usize>, usize)> = aut
            .transitions
            .iter()
            .map(|t| (t.source, t.prefix.clone(), t.suffix.clone(), t.target))
            .collect();
        assert_eq!(
            t,
            vec![
                (0, vec![], vec![1], 0),
                (0, vec![0], vec![], 1),
                (1, vec![], vec![], 0)
            ]
        );
    }

    #[test]
    fn fibonacci_position_three() {
        let e = dumont_thomas_digits(&fib(), 0, 3).unwrap();
        assert_eq!(e.reconstruct(&fib()), vec![2, 1]);
        assert_eq!(dumont_thomas_digits(&fib(), 0, 0).unwrap().digits.len(), 0);
    }

    #[test]
    fn path_follows_the_automaton() {
        let s = fib();
        let aut = PrefixSuffixAutomaton::new(&s);
        let e = dumont_thomas_digits(&s, 0, 17).unwrap();
        for n in 0..e.digits.len() {
            assert!(aut.transitions.iter().any(|t| t.source == e.path[n + 1]
                && t.target == e.path[n]
                && t.prefix == e.prefixes[n]));
        }
    }

    #[test]
    fn out_of_range() {
        let s = fib();
        let dt = DumontThomas::new(&s, 0, 5).unwrap();
        assert_eq!(dt.digits(5), Err(SubstitutionError::OutOfRange(5)));
    }
}
