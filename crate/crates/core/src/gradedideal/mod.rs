//! Homogeneous ideals over ℤ in a weighted polynomial ring, decided one
//! graded piece at a time with integer lattices.

pub mod hnf;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polycore::int::{is_negative, Int};
use crate::polycore::{Monomial, Polynomial, Var};
pub use hnf::{EchelonBuilder, HermiteBasis};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("{0} is not homogeneous")]
    NotHomogeneous(String),
    #[error("variable {0} is not in the ambient ring")]
    ForeignVariable(Var),
    #[error("ideals live in different rings: {0} vs {1}")]
    AmbientMismatch(Ambient, Ambient),
}

/// The variables of a weighted polynomial ring; weights come from [`Var::weight`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ambient {
    vars: Vec<Var>,
}

impl Ambient {
    pub fn new<I: IntoIterator<Item = Var>>(vars: I) -> Self {
        let mut vars: Vec<Var> = vars.into_iter().collect();
        vars.sort();
        vars.dedup();
        Ambient { vars }
    }

    /// `ℤ[c1, …, cn]`
    pub fn chern(n: usize) -> Self {
        Self::new((1..=n).map(|i| Var::C(i as u16)))
    }

    /// `ℤ[c1, …, cn, extra…]`
    pub fn chern_with(n: usize, extra: &[Var]) -> Self {
        Self::new((1..=n).map(|i| Var::C(i as u16)).chain(extra.iter().copied()))
    }

    pub fn variables(&self) -> &[Var] {
        &self.vars
    }

    pub fn without(&self, v: Var) -> Self {
        Self::new(self.vars.iter().copied().filter(|&w| w != v))
    }

    pub fn check(&self, p: &Polynomial) -> Result<(), IdealError> {
        match p.variables().into_iter().find(|v| !self.vars.contains(v)) {
            Some(v) => Err(IdealError::ForeignVariable(v)),
            None => Ok(()),
        }
    }

    /// All monomials of weighted degree `d`, in decreasing monomial order.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        fn go(vars: &[Var], d: u32, acc: &mut Vec<(Var, u32)>, out: &mut Vec<Monomial>) {
            let Some((&v, rest)) = vars.split_last() else {
                if d == 0 {
                    out.push(Monomial::from_pairs(acc.iter().copied()));
                }
                return;
            };
            let w = v.weight();
            for e in 0..=d / w {
                if e > 0 {
                    acc.push((v, e));
                }
                go(rest, d - e * w, acc, out);
                if e > 0 {
                    acc.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(&self.vars, d, &mut Vec::new(), &mut out);
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.vars.iter().map(|v| v.to_string()).collect();
        write!(f, "Z[{}]", names.join(", "))
    }
}

/// Coordinates for one graded piece: monomials in decreasing order.
struct PieceBasis {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl PieceBasis {
    fn new(ambient: &Ambient, d: u32) -> Self {
        Self::from_monomials(ambient.monomials_of_degree(d))
    }

    fn from_monomials(monomials: Vec<Monomial>) -> Self {
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        PieceBasis { monomials, index }
    }

    fn vector(&self, p: &Polynomial) -> Vec<Int> {
        let mut v = vec![Int::ZERO; self.monomials.len()];
        for (m, c) in p.terms() {
            v[self.index[m]] = c.clone();
        }
        v
    }

    fn polynomial(&self, v: &[Int]) -> Polynomial {
        Polynomial::from_terms(
            v.iter()
                .zip(&self.monomials)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, m)| (m.clone(), c.clone())),
        )
    }
}

/// The degree-`d` part of an ideal as a lattice in the monomial coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPieceLattice {
    degree: u32,
    monomials: Vec<Monomial>,
    basis: HermiteBasis,
}

impl GradedPieceLattice {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The monomial basis of the graded piece, in increasing order.
    pub fn monomial_basis(&self) -> Vec<Monomial> {
        self.monomials.iter().rev().cloned().collect()
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_zero()
    }

    pub fn hermite_basis(&self) -> &HermiteBasis {
        &self.basis
    }

    /// The Hermite basis as polynomials, each with a positive leading
    /// coefficient, largest leading monomial first.
    pub fn basis_polynomials(&self) -> Vec<Polynomial> {
        let coords = self.coords();
        self.basis.rows().map(|(_, r)| coords.polynomial(r)).collect()
    }

    fn coords(&self) -> PieceBasis {
        PieceBasis::from_monomials(self.monomials.clone())
    }

    /// Canonical representative of `p` modulo this lattice.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let coords = self.coords();
        coords.polynomial(&self.basis.reduce(coords.vector(p)))
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }
}

/// A homogeneous ideal given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedIdeal {
    ambient: Ambient,
    generators: Vec<Polynomial>,
}

impl GradedIdeal {
    pub fn new(ambient: Ambient, generators: Vec<Polynomial>) -> Result<Self, IdealError> {
        for g in &generators {
            ambient.check(g)?;
            if !g.is_homogeneous() {
                return Err(IdealError::NotHomogeneous(g.to_string()));
            }
        }
        Ok(GradedIdeal { ambient, generators })
    }

    pub fn zero(ambient: Ambient) -> Self {
        GradedIdeal { ambient, generators: Vec::new() }
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.generators.iter().filter_map(|g| g.degree()).max().unwrap_or(0)
    }

    /// The default verification horizon: twice the largest generator degree.
    pub fn default_bound(&self) -> u32 {
        2 * self.max_generator_degree()
    }

    fn multiples_in_degree<'a>(&'a self, d: u32) -> impl Iterator<Item = Polynomial> + 'a {
        self.generators.iter().filter(|g| !g.is_zero()).flat_map(move |g| {
            let e = g.degree().unwrap();
            let cofactors = if e <= d { self.ambient.monomials_of_degree(d - e) } else { Vec::new() };
            cofactors.into_iter().map(move |m| g.mul_monomial(&m))
        })
    }

    pub fn graded_piece(&self, d: u32) -> GradedPieceLattice {
        let coords = PieceBasis::new(&self.ambient, d);
        let mut multiples: Vec<Vec<Int>> = self.multiples_in_degree(d).map(|p| coords.vector(&p)).collect();
        // sparse vectors first keeps intermediate entries small
        multiples.sort_by_key(|v| v.iter().filter(|x| !x.is_zero()).count());
        let basis = HermiteBasis::from_vectors(coords.monomials.len(), multiples);
        GradedPieceLattice { degree: d, monomials: coords.monomials, basis }
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool, IdealError> {
        self.ambient.check(p)?;
        let Some(d) = p.degree() else {
            return Ok(true);
        };
        if !p.is_homogeneous() {
            return Err(IdealError::NotHomogeneous(p.to_string()));
        }
        Ok(self.graded_piece(d).contains(p))
    }

    /// Compares graded pieces in every degree `0..=bound`.
    pub fn equal_up_to(&self, other: &GradedIdeal, bound: u32) -> Result<EqualityReport, IdealError> {
        if self.ambient != other.ambient {
            return Err(IdealError::AmbientMismatch(self.ambient.clone(), other.ambient.clone()));
        }
        let degrees: Vec<DegreeComparison> = (0..=bound)
            .into_par_iter()
            .map(|d| {
                let (lhs, rhs) = rayon::join(|| self.graded_piece(d), || other.graded_piece(d));
                DegreeComparison {
                    degree: d,
                    lhs_hnf: render(&lhs),
                    rhs_hnf: render(&rhs),
                    equal: lhs.basis == rhs.basis,
                }
            })
            .collect();
        let equal = degrees.iter().all(|c| c.equal);
        Ok(EqualityReport { bound, degrees, equal })
    }

    /// A smaller generating set with the same graded pieces up to `bound`.
    ///
    /// Degrees are processed in increasing order; within a degree candidates
    /// are taken by leading monomial. Each candidate is reduced modulo the
    /// lattice spanned by what has been kept so far and kept only if a
    /// nonzero remainder survives. Generators above `bound` are kept as is.
    pub fn simplify_generators(&self, bound: u32) -> Vec<Polynomial> {
        let mut by_degree: BTreeMap<u32, Vec<&Polynomial>> = BTreeMap::new();
        for g in self.generators.iter().filter(|g| !g.is_zero()) {
            by_degree.entry(g.degree().unwrap()).or_default().push(g);
        }
        let mut kept: Vec<Polynomial> = Vec::new();
        let mut beyond: Vec<Polynomial> = Vec::new();
        for (d, mut candidates) in by_degree {
            if d > bound {
                beyond.extend(candidates.into_iter().cloned());
                continue;
            }
            candidates.sort_by(|a, b| a.leading_term().unwrap().0.cmp(&b.leading_term().unwrap().0).then(a.cmp(b)));
            let so_far = GradedIdeal { ambient: self.ambient.clone(), generators: kept.clone() };
            let mut piece = so_far.graded_piece(d);
            let coords = piece.coords();
            let mut builder = EchelonBuilder::new(coords.monomials.len());
            for (_, row) in piece.basis.rows() {
                builder.insert(row.to_vec());
            }
            for cand in candidates {
                let rest = piece.reduce(cand);
                if rest.is_zero() {
                    continue;
                }
                let rest = if is_negative(&rest.leading_term().unwrap().1) { -rest } else { rest };
                builder.insert(coords.vector(&rest));
                piece.basis = builder.clone().finish();
                kept.push(rest);
            }
        }
        kept.extend(beyond);
        kept
    }

    pub fn with_generators(&self, generators: Vec<Polynomial>) -> Result<GradedIdeal, IdealError> {
        GradedIdeal::new(self.ambient.clone(), generators)
    }
}

fn render(piece: &GradedPieceLattice) -> Vec<String> {
    piece.basis_polynomials().iter().map(|p| p.to_string()).collect()
}

/// Per-degree comparison of two graded pieces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeComparison {
    pub degree: u32,
    pub lhs_hnf: Vec<String>,
    pub rhs_hnf: Vec<String>,
    pub equal: bool,
}

/// Outcome of [`GradedIdeal::equal_up_to`], with the Hermite bases of every
/// degree checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityReport {
    pub bound: u32,
    pub degrees: Vec<DegreeComparison>,
    pub equal: bool,
}

impl EqualityReport {
    pub fn mismatched_degrees(&self) -> Vec<u32> {
        self.degrees.iter().filter(|c| !c.equal).map(|c| c.degree).collect()
    }
}

impl fmt::Display for EqualityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ideals {} up to degree {}", if self.equal { "agree" } else { "differ" }, self.bound)?;
        for c in self.degrees.iter().filter(|c| !c.equal) {
            writeln!(f, "  degree {}: [{}] vs [{}]", c.degree, c.lhs_hnf.join(", "), c.rhs_hnf.join(", "))?;
        }
        Ok(())
    }
}
