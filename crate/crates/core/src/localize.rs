//! Torus fixed points on `ℙ(V)` and the explicit-localization pushforward
//! along the Veronese embedding `ℙ(E*) → ℙ(Sym²E*)`.

use rayon::prelude::*;
use thiserror::Error;

use crate::polycore::int::{int, pow2};
use crate::polycore::{sum_fractions, LinearFormProduct, PolyError, Polynomial, StructuredFraction, Var};
use crate::symchern::{
    build_roots, is_symmetric, symmetric_to_chern, total_chern_poly, BaseModule, ModuleDescriptor, RepRoots,
    SymchernError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalizeError {
    #[error("roots {0} and {1} coincide; localization denominators would vanish")]
    RepeatedRoots(usize, usize),
    #[error("no fixed point with index {0}")]
    NoSuchPoint(usize),
    #[error("pushforward needs n >= 2 and 0 <= r < n, got n = {n}, r = {r}")]
    InvalidParameters { n: usize, r: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Symchern(#[from] SymchernError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A torus-fixed point of `ℙ(V)`: the coordinate line of one root `m_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub index: usize,
    pub root: Polynomial,
    /// Restriction of the hyperplane class: `−m_j`.
    pub hyperplane_restriction: Polynomial,
    /// `{m_i − m_j : i ≠ j}`.
    pub tangent_weights: Vec<Polynomial>,
}

impl FixedPoint {
    /// Top Chern class of the tangent space as a factored product.
    pub fn tangent_euler_class(&self) -> Result<LinearFormProduct, LocalizeError> {
        Ok(LinearFormProduct::from_factors(&self.tangent_weights)?)
    }

    /// Restricts a class in the hyperplane variable `var` to this point.
    pub fn restrict(&self, p: &Polynomial, var: Var) -> Polynomial {
        p.substitute(var, &self.hyperplane_restriction)
    }
}

fn check_distinct(v: &RepRoots) -> Result<(), LocalizeError> {
    let roots = v.roots();
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if roots[i] == roots[j] {
                return Err(LocalizeError::RepeatedRoots(i, j));
            }
        }
    }
    Ok(())
}

pub fn fixed_points(v: &RepRoots) -> Result<Vec<FixedPoint>, LocalizeError> {
    check_distinct(v)?;
    let roots = v.roots();
    Ok(roots
        .iter()
        .enumerate()
        .map(|(j, m)| FixedPoint {
            index: j,
            root: m.clone(),
            hyperplane_restriction: -m,
            tangent_weights: roots
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, mi)| mi - m)
                .collect(),
        })
        .collect())
}

/// The linear factors `var + m_i`, `i ≠ j`, whose product is the class of the
/// `j`-th fixed point (cut out by the other coordinate hyperplanes).
pub fn fundamental_class_factors(v: &RepRoots, j: usize, var: Var) -> Result<Vec<Polynomial>, LocalizeError> {
    check_distinct(v)?;
    if j >= v.dimension() {
        return Err(LocalizeError::NoSuchPoint(j));
    }
    let x = Polynomial::var(var);
    Ok(v.roots().iter().enumerate().filter(|&(i, _)| i != j).map(|(_, m)| &x + m).collect())
}

pub fn fundamental_class(v: &RepRoots, j: usize, var: Var) -> Result<Polynomial, LocalizeError> {
    Ok(crate::polycore::product(&fundamental_class_factors(v, j, var)?))
}

/// The Veronese map on fixed points: the point of `ℙ(E*)` with root `l_j`
/// goes to the point of `ℙ(Sym²E*)` with root `2l_j`.
#[derive(Clone, Debug)]
pub struct VeroneseCorrespondence {
    pub n: usize,
    pub source: RepRoots,
    pub target: RepRoots,
    pub point_map: Vec<usize>,
}

impl VeroneseCorrespondence {
    pub fn new(n: usize) -> Result<Self, LocalizeError> {
        let source = build_roots(n, &ModuleDescriptor::new(BaseModule::Dual))?;
        let target = build_roots(n, &ModuleDescriptor::new(BaseModule::Sym2Dual))?;
        let point_map = source
            .roots()
            .iter()
            .map(|l| {
                let doubled = l.scale(&int(2));
                target
                    .roots()
                    .iter()
                    .position(|m| *m == doubled)
                    .ok_or_else(|| LocalizeError::InternalInconsistency(format!("no target root {doubled}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(VeroneseCorrespondence { n, source, target, point_map })
    }
}

fn check_pushforward_args(n: usize, r: usize) -> Result<(), LocalizeError> {
    if n < 2 || r >= n {
        return Err(LocalizeError::InvalidParameters { n, r });
    }
    Ok(())
}

/// The summands `[Q_j]·(−l_j)^r / c_top(T_{P_j}ℙ(E*))` of the localization
/// formula for `i_* K^r`, with fully expanded numerators.
pub fn localization_summands(n: usize, r: usize) -> Result<Vec<StructuredFraction>, LocalizeError> {
    check_pushforward_args(n, r)?;
    let corr = VeroneseCorrespondence::new(n)?;
    let points = fixed_points(&corr.source)?;
    points
        .iter()
        .map(|pt| {
            let class = fundamental_class(&corr.target, corr.point_map[pt.index], Var::H)?;
            let numerator = &class * &pt.hyperplane_restriction.pow(r as u32);
            Ok(StructuredFraction::new(numerator, pt.tangent_euler_class()?)?)
        })
        .collect()
}

/// `i_* K^r` by summing the localization summands directly in the root
/// variables. Exponential in `n`; see [`veronese_pushforward`].
pub fn veronese_pushforward_direct(n: usize, r: usize) -> Result<Polynomial, LocalizeError> {
    let total = sum_fractions(&localization_summands(n, r)?);
    let poly = total
        .into_polynomial()
        .map_err(|f| LocalizeError::InternalInconsistency(format!("denominator survived: {f}")))?;
    if !is_symmetric(&poly, n) {
        return Err(LocalizeError::InternalInconsistency(format!("pushforward not symmetric: {poly}")));
    }
    Ok(symmetric_to_chern(&poly, n)?)
}

/// `i_* K^r` in `ℤ[c_1, …, c_n, H]` by explicit localization on `ℙ(E*)`.
///
/// The classes of the image points share the linear factors `H + l_i + l_k`;
/// those are pulled out before summing so only the interpolating part goes
/// through the fraction arithmetic.
pub fn veronese_pushforward(n: usize, r: usize) -> Result<Polynomial, LocalizeError> {
    check_pushforward_args(n, r)?;
    let corr = VeroneseCorrespondence::new(n)?;
    let points = fixed_points(&corr.source)?;
    let classes = points
        .iter()
        .map(|pt| {
            let factors = fundamental_class_factors(&corr.target, corr.point_map[pt.index], Var::H)?;
            Ok(LinearFormProduct::from_factors(&factors)?)
        })
        .collect::<Result<Vec<_>, LocalizeError>>()?;
    let common = classes
        .iter()
        .skip(1)
        .fold(classes[0].clone(), |acc, c| acc.common_factors(c));

    let summands = points
        .par_iter()
        .zip(classes.par_iter())
        .map(|(pt, class)| {
            let rest = class.quotient(&common).expect("common factors divide every class");
            let numerator = &rest.expand() * &pt.hyperplane_restriction.pow(r as u32);
            Ok(StructuredFraction::new(numerator, pt.tangent_euler_class()?)?)
        })
        .collect::<Result<Vec<_>, LocalizeError>>()?;

    let interpolated = sum_fractions(&summands)
        .into_polynomial()
        .map_err(|f| LocalizeError::InternalInconsistency(format!("denominator survived: {f}")))?;
    let shared = common.expand();
    for part in [&interpolated, &shared] {
        if !is_symmetric(part, n) {
            return Err(LocalizeError::InternalInconsistency(format!("pushforward not symmetric: {part}")));
        }
    }
    Ok(&symmetric_to_chern(&shared, n)? * &symmetric_to_chern(&interpolated, n)?)
}

/// `R(H) = ∏_{i<j}(H + l_i + l_j)` rewritten in Chern classes.
pub fn r_polynomial(n: usize) -> Result<Polynomial, LocalizeError> {
    let wedge = build_roots(n, &ModuleDescriptor::new(BaseModule::Wedge2Dual))?;
    Ok(symmetric_to_chern(&total_chern_poly(&wedge, Var::H), n)?)
}

/// `2^{n−1−r} · H^r · R(H)`: the pushforward read off from Lagrange
/// interpolation, without any localization sum.
pub fn closed_form_pushforward(n: usize, r: usize) -> Result<Polynomial, LocalizeError> {
    check_pushforward_args(n, r)?;
    let h_power = Polynomial::var(Var::H).pow(r as u32);
    Ok((&h_power * &r_polynomial(n)?).scale(&pow2((n - 1 - r) as u32)))
}

/// Expected weighted degree of `i_* K^r`.
pub fn pushforward_degree(n: usize, r: usize) -> u32 {
    (n * (n + 1) / 2 - 1 - (n - 1 - r)) as u32
}
