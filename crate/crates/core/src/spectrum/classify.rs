//! Finite-extension hypothesis, torus factors and classification.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{
    dot_int, eigenvalue_lattice, perron_is_pisot_unit, spectral_decomposition, EigenLattice,
    SpectralDecomposition, SpectrumError,
};
use crate::exact::eigen::rational_generalized_kernel;
use crate::exact::factor::cyclotomic_index;
use crate::exact::{
    integer_left_kernel, is_pisot_unit, is_pseudo_unimodular, FieldElement, IntMatrix, IntPoly,
    IntegerLattice, RatMatrix,
};
use crate::substitution::{matrix_primitivity, Substitution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisCheck {
    pub holds: bool,
    pub failing_factor: Option<IntPoly>,
}

/// Every generalized eigenvector of an eigenvalue of modulus `>= 1` other
/// than `β` has sum zero. For a factor `q` this holds for one root iff it
/// holds for all of them, so it is tested on the rational space
/// `ker q(M)^e`.
pub fn hypothesis_on(dec: &SpectralDecomposition) -> Result<HypothesisCheck, SpectrumError> {
    if !perron_is_pisot_unit(dec)? {
        return Err(SpectrumError::NotPisotUnit);
    }
    for (i, f) in dec.factors.iter().enumerate() {
        if i == dec.perron_factor || !f.has_large_root() {
            continue;
        }
        let ker = rational_generalized_kernel(&dec.matrix, &f.poly, f.multiplicity);
        if ker.iter().any(|v| !v.iter().sum::<BigInt>().is_zero()) {
            return Ok(HypothesisCheck {
                holds: false,
                failing_factor: Some(f.poly.clone()),
            });
        }
    }
    Ok(HypothesisCheck {
        holds: true,
        failing_factor: None,
    })
}

pub fn check_finite_extension_hypothesis(m: &IntMatrix) -> Result<HypothesisCheck, SpectrumError> {
    if !is_pseudo_unimodular(m)? {
        return Err(SpectrumError::NotPseudoUnimodular);
    }
    hypothesis_on(&spectral_decomposition(m)?)
}

#[derive(Clone, Debug)]
pub struct TorusFactor {
    pub w: Vec<Vec<BigInt>>,
    pub alpha: Vec<FieldElement>,
}

/// `d = deg β − 1` integer vectors orthogonal to `ker Q(M)`, where the
/// characteristic polynomial is `π_β X^k Q`, whose values `α_i = w_i v₀`
/// are rationally independent together with 1.
pub fn torus_factor_vectors(m: &IntMatrix) -> Result<TorusFactor, SpectrumError> {
    let dec = spectral_decomposition(m)?;
    let h = hypothesis_on(&dec)?;
    if let Some(f) = h.failing_factor {
        return Err(SpectrumError::HypothesisFails(f.to_string()));
    }
    let n = m.rows();
    let mut q = IntPoly::one();
    for (i, f) in dec.factors.iter().enumerate() {
        if i != dec.perron_factor && f.poly != IntPoly::x() {
            q = &q * &f.poly.pow(f.multiplicity);
        }
    }
    let ker = rational_generalized_kernel(m, &q, 1);
    let orth = if ker.is_empty() {
        IntegerLattice::full(n)
    } else {
        integer_left_kernel(&IntMatrix::from_cols(n, ker))
    };
    let d = dec.perron.degree() - 1;
    let mut rows: Vec<Vec<BigRational>> = vec![dec.perron.one().coords()];
    let mut out = TorusFactor {
        w: Vec::new(),
        alpha: Vec::new(),
    };
    for w in &orth.basis {
        if out.w.len() == d {
            break;
        }
        let a = dot_int(w, &dec.v0);
        rows.push(a.coords());
        if RatMatrix::from_rows(rows.clone()).rank() == rows.len() {
            out.w.push(w.clone());
            out.alpha.push(a);
        } else {
            rows.pop();
        }
    }
    if out.w.len() < d {
        return Err(SpectrumError::TorusRank {
            found: out.w.len(),
            needed: d,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassKind {
    /// `(Ω, Sⁿ)` is weakly mixing: every α is rational with denominator `n`.
    WeaklyMixingPower(BigInt),
    /// Finite extension of a minimal translation of the torus `T^d`.
    FiniteExtension(usize),
    /// Some but fewer than `deg β − 1` independent eigenvalues.
    Intermediate,
    /// `deg β − 1` independent eigenvalues without the finite-extension
    /// hypothesis: an extension of a torus translation of undecided
    /// finiteness.
    TorusExtension(usize),
}

impl ClassKind {
    pub fn label(&self) -> &'static str {
        match self {
            ClassKind::WeaklyMixingPower(_) => "WEAKLY_MIXING_POWER",
            ClassKind::FiniteExtension(_) => "FINITE_EXTENSION",
            ClassKind::Intermediate => "INTERMEDIATE",
            ClassKind::TorusExtension(_) => "TORUS_EXTENSION",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub kind: ClassKind,
    pub evidence: Vec<String>,
    pub perron_degree: usize,
    pub pisot_unit: bool,
    pub weakly_irreducible_pisot: bool,
    pub hypothesis: Option<HypothesisCheck>,
    pub lattice: EigenLattice,
}

/// Perron root a Pisot unit and every other eigenvalue zero or a root of
/// unity (conjugates of β live in the Perron factor itself).
pub fn weakly_irreducible_pisot(dec: &SpectralDecomposition) -> Result<bool, SpectrumError> {
    if !perron_is_pisot_unit(dec)? {
        return Ok(false);
    }
    Ok(dec.factors.iter().enumerate().all(|(i, f)| {
        i == dec.perron_factor || f.poly == IntPoly::x() || cyclotomic_index(&f.poly).is_some()
    }))
}

pub fn classify(s: &Substitution, allow_proprify: bool) -> Result<Classification, SpectrumError> {
    let m = s.incidence_matrix();
    if !matrix_primitivity(&m).primitive {
        return Err(SpectrumError::NotPrimitive);
    }
    let dec = spectral_decomposition(&m)?;
    let deg = dec.perron.degree();
    let pisot_unit = perron_is_pisot_unit(&dec)?;
    let wip = weakly_irreducible_pisot(&dec)?;
    let lattice = eigenvalue_lattice(s, allow_proprify)?;
    let rank = lattice.alpha.independent_rank();
    let mut evidence = vec![
        format!("Perron polynomial {} of degree {deg}", dec.perron_poly()),
        format!("Pisot unit: {pisot_unit}; weakly irreducible Pisot: {wip}"),
        format!(
            "eigenvalue lattice {} with {rank} independent generator(s) modulo Z",
            lattice.alpha
        ),
    ];
    let hypothesis = if pisot_unit {
        let h = hypothesis_on(&lattice.data.decomposition)?;
        evidence.push(match &h.failing_factor {
            None => "finite extension hypothesis holds on the working matrix".into(),
            Some(f) => format!("finite extension hypothesis fails at factor {f}"),
        });
        Some(h)
    } else {
        None
    };
    let kind = if rank == 0 {
        evidence.push(format!(
            "all eigenvalues are rational with denominator {}",
            lattice.alpha.denominator
        ));
        ClassKind::WeaklyMixingPower(lattice.alpha.denominator.clone())
    } else if wip || hypothesis.as_ref().is_some_and(|h| h.holds) {
        ClassKind::FiniteExtension(deg - 1)
    } else if rank < deg - 1 {
        ClassKind::Intermediate
    } else {
        ClassKind::TorusExtension(rank)
    };
    if !lattice.complete() {
        evidence.push("no left-proper power was used: the lattice may be incomplete".into());
    }
    Ok(Classification {
        kind,
        evidence,
        perron_degree: deg,
        pisot_unit,
        weakly_irreducible_pisot: wip,
        hypothesis,
        lattice,
    })
}

#[derive(Clone, Debug)]
pub struct PisotRankReport {
    /// Z-rank of the α-lattice, the integers included.
    pub rank: usize,
    pub independent_rank: usize,
    pub degree: usize,
    pub holds: bool,
}

/// For a non-Pisot Perron root the α-lattice has Z-rank below `deg β`.
pub fn pisot_rank_bound_check(
    s: &Substitution,
    allow_proprify: bool,
) -> Result<PisotRankReport, SpectrumError> {
    let dec = spectral_decomposition(&s.incidence_matrix())?;
    if is_pisot_unit(dec.perron_poly())?.pisot {
        return Err(SpectrumError::PerronIsPisot);
    }
    let l = eigenvalue_lattice(s, allow_proprify)?;
    let degree = dec.perron.degree();
    Ok(PisotRankReport {
        rank: l.alpha.rank(),
        independent_rank: l.alpha.independent_rank(),
        degree,
        holds: l.alpha.rank() < degree,
    })
}
