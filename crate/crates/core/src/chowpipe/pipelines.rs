use crate::gradedideal::{Ambient, GradedIdeal};
use crate::polycore::int::{binomial, int, pow2};
use crate::polycore::{product, Polynomial, Var};
use crate::symchern::{e_top, root_var, symmetric_to_chern, BaseModule, ModuleDescriptor};

use super::{normalize_signs, ChowpipeError, PushforwardRoute, RingPresentation, Step};

pub const M01_BOUND: u32 = 12;

/// Verification horizon for the reduced quadrics pipeline.
pub fn quadrics_bound(n: usize) -> u32 {
    (n * (n - 1) + n) as u32
}

/// Verification horizon for the orthogonal pipeline.
pub fn orthogonal_bound(n: usize) -> u32 {
    (2 * n + 2) as u32
}

fn c(i: usize) -> Polynomial {
    if i == 0 {
        Polynomial::one()
    } else {
        Polynomial::var(Var::C(i as u16))
    }
}

fn check_rank(n: usize) -> Result<(), ChowpipeError> {
    if n < 2 {
        return Err(ChowpipeError::InvalidParameters(format!("rank must be at least 2, got {n}")));
    }
    Ok(())
}

fn check_twist(k: i64) -> Result<(), ChowpipeError> {
    if k < 0 {
        return Err(ChowpipeError::InvalidParameters(format!("twist must be non-negative, got {k}")));
    }
    Ok(())
}

/// `(4c3, 2c1c3, c1²c3)`
pub fn m01_literal() -> Vec<Polynomial> {
    ["4*c3", "2*c1*c3", "c1^2*c3"].iter().map(|s| s.parse().unwrap()).collect()
}

fn quadric_source(n: usize) -> Step {
    Step::ProjectiveBundle { n, module: ModuleDescriptor::new(BaseModule::Sym2Dual), var: Var::H }
}

/// Rank-three quadrics of rank at least two, with the Veronese classes computed
/// by localization, checked against `(4c3, 2c1c3, c1²c3)`.
pub fn m01() -> Result<RingPresentation, ChowpipeError> {
    m01_bounded(M01_BOUND)
}

/// [`m01`] with a different verification horizon.
pub fn m01_bounded(bound: u32) -> Result<RingPresentation, ChowpipeError> {
    let mut pres = RingPresentation::replay(&[
        quadric_source(3),
        Step::ExciseVeronese { n: 3, route: PushforwardRoute::Localization },
        Step::TorsorQuotient { k: 1 },
        Step::SimplifyGenerators { bound },
    ])?;
    pres.verify_against("literal ideal (4c3, 2c1c3, c1^2c3)", &m01_literal(), bound, false)?;
    pres.into_checked()
}

/// `{2^{n−1−r}(k c1)^r e_top(n, k)}`, `0 ≤ r < n`, dropping zero members.
pub fn quadric_family(n: usize, k: i64) -> Result<Vec<Polynomial>, ChowpipeError> {
    check_rank(n)?;
    let e = e_top(n, k)?;
    let kc1 = c(1).scale(&int(k));
    Ok((0..n)
        .map(|r| (&kc1.pow(r as u32) * &e).scale(&pow2((n - 1 - r) as u32)))
        .filter(|g| !g.is_zero())
        .collect())
}

/// Nondegenerate quadrics modulo the torsor of weight `k`.
pub fn reduced_quadrics(n: usize, k: i64) -> Result<RingPresentation, ChowpipeError> {
    check_rank(n)?;
    reduced_quadrics_bounded(n, k, quadrics_bound(n))
}

/// [`reduced_quadrics`] with a different verification horizon.
pub fn reduced_quadrics_bounded(n: usize, k: i64, bound: u32) -> Result<RingPresentation, ChowpipeError> {
    check_rank(n)?;
    check_twist(k)?;
    let mut pres = RingPresentation::replay(&[
        quadric_source(n),
        Step::ExciseVeronese { n, route: PushforwardRoute::ClosedForm },
        Step::TorsorQuotient { k },
        Step::SimplifyGenerators { bound },
    ])?;
    pres.verify_against("generator family 2^(n-1-r)(k c1)^r e_top", &quadric_family(n, k)?, bound, false)?;
    if k % 2 == 0 {
        let single = e_top(n, k)?.scale(&pow2((n - 1) as u32));
        pres.verify_against("single generator 2^(n-1) e_top (even k)", &[single], bound, false)?;
    }
    pres.into_checked()
}

/// The closed-form relations `α_1(H), …, α_n(H)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaFamily {
    pub n: usize,
    pub alphas: Vec<Polynomial>,
}

impl AlphaFamily {
    /// `α_i(h)` for every `i`.
    pub fn at(&self, h: &Polynomial) -> Vec<Polynomial> {
        self.alphas.iter().map(|a| a.substitute(Var::H, h)).collect()
    }

    /// `α_i(k c1)`
    pub fn at_twist(&self, k: i64) -> Vec<Polynomial> {
        self.at(&c(1).scale(&int(k)))
    }
}

/// `α_i = Σ_{j<i} binom(n−j, i−j)(−1)^j c_j H^{i−j}`, minus `2c_i` for odd `i`.
pub fn alpha_family(n: usize) -> Result<AlphaFamily, ChowpipeError> {
    check_rank(n)?;
    let h = Polynomial::var(Var::H);
    let alphas = (1..=n)
        .map(|i| {
            let mut a = Polynomial::zero();
            for j in 0..i {
                let coeff = binomial((n - j) as u64, (i - j) as u64) * int(if j % 2 == 0 { 1 } else { -1 });
                a = &a + &(&c(j) * &h.pow((i - j) as u32)).scale(&coeff);
            }
            if i % 2 == 1 {
                a = &a - &c(i).scale(&int(2));
            }
            a
        })
        .collect();
    Ok(AlphaFamily { n, alphas })
}

/// The first `n` graded pieces `β′_1, …, β′_n` of
/// `c(E* ⊗ O(1)) / c(E)`, with the numerator expanded in the torus roots.
pub fn chern_series_divide(n: usize) -> Result<Vec<Polynomial>, ChowpipeError> {
    check_rank(n)?;
    let one_plus_h = Polynomial::one() + Polynomial::var(Var::H);
    let factors: Vec<Polynomial> = (1..=n).map(|i| &one_plus_h + &Polynomial::var(root_var(i))).collect();
    let numerator = product(&factors).homogeneous_components();
    let numerator: Vec<Polynomial> = (0..=n)
        .map(|i| symmetric_to_chern(&numerator.get(&(i as u32)).cloned().unwrap_or_default(), n))
        .collect::<Result<_, _>>()?;
    let mut beta = vec![Polynomial::one()];
    for i in 1..=n {
        let mut b = numerator[i].clone();
        for (j, bj) in beta.iter().enumerate() {
            b = &b - &(bj * &c(i - j));
        }
        beta.push(b);
    }
    beta.remove(0);
    Ok(beta)
}

/// `ℤ[c, H]/(α_1(H), …, α_n(H))`
pub(super) fn alpha_presentation(n: usize) -> Result<RingPresentation, ChowpipeError> {
    let ideal = GradedIdeal::new(Ambient::chern_with(n, &[Var::H]), alpha_family(n)?.alphas)?;
    Ok(RingPresentation::source(ideal, Step::AlphaRelations { n }))
}

/// `ℤ[c, H]/(β′_1, …, β′_n)`
pub(super) fn series_presentation(n: usize) -> Result<RingPresentation, ChowpipeError> {
    let ideal = GradedIdeal::new(Ambient::chern_with(n, &[Var::H]), chern_series_divide(n)?)?;
    Ok(RingPresentation::source(ideal, Step::SeriesRelations { n }))
}

/// `(2c1, 2c3, 2c5, …)` over odd indices up to `n`.
pub fn doubled_odd_classes(n: usize) -> Vec<Polynomial> {
    (1..=n).step_by(2).map(|i| c(i).scale(&int(2))).collect()
}

/// The complement of the rank-one locus modulo the torsor of weight `k`:
/// relations `α_i(k c1)`, simplified. The same ideal is rederived from the
/// Chern series quotient and compared.
pub fn orthogonal(n: usize, k: i64) -> Result<RingPresentation, ChowpipeError> {
    check_rank(n)?;
    orthogonal_bounded(n, k, orthogonal_bound(n))
}

/// [`orthogonal`] with a different verification horizon.
pub fn orthogonal_bounded(n: usize, k: i64, bound: u32) -> Result<RingPresentation, ChowpipeError> {
    check_rank(n)?;
    check_twist(k)?;
    let mut pres = RingPresentation::replay(&[
        Step::AlphaRelations { n },
        Step::TorsorQuotient { k },
        Step::SimplifyGenerators { bound },
    ])?;
    let series = RingPresentation::replay(&[Step::SeriesRelations { n }, Step::TorsorQuotient { k }])?;
    pres.verify_against("series division relations", &normalize_signs(series.relations().to_vec()), bound, false)?;
    if k == 0 {
        pres.verify_against("odd Chern classes doubled (k = 0)", &doubled_odd_classes(n), bound, false)?;
    }
    pres.into_checked()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    fn gens(ss: &[&str]) -> Vec<Polynomial> {
        ss.iter().map(|s| p(s)).collect()
    }

    /// `Σ_j (−1)^j c_j (1+H)^{n−j}` split by degree.
    fn numerator_by_formula(n: usize) -> Vec<Polynomial> {
        let one_plus_h = Polynomial::one() + Polynomial::var(Var::H);
        let mut total = Polynomial::zero();
        for j in 0..=n {
            let sign = int(if j % 2 == 0 { 1 } else { -1 });
            total = &total + &(&c(j) * &one_plus_h.pow((n - j) as u32)).scale(&sign);
        }
        (0..=n).map(|i| total.homogeneous_component(i as u32)).collect()
    }

    #[test]
    fn m01_reproduces_literal_ideal() {
        let pres = m01().unwrap();
        assert_eq!(pres.relations(), m01_literal().as_slice());
        let v = &pres.verifications()[0];
        assert!(v.passed());
        assert_eq!(v.report.bound, 12);
        assert_eq!(v.report.degrees[3].lhs_hnf, ["4*c3"]);
        assert_eq!(v.report.degrees[3].rhs_hnf, ["4*c3"]);
    }

    #[test]
    fn m01_provenance_order() {
        let names: Vec<String> = m01().unwrap().provenance().iter().map(|s| s.to_string()).collect();
        assert_eq!(
            names,
            [
                "projective-bundle n=3 module=Sym2(E*) var=H",
                "excise-veronese n=3 route=localization",
                "torsor-quotient k=1",
                "simplify bound=12"
            ]
        );
    }

    #[test]
    fn pipelines_replay_exactly() {
        for pres in [m01().unwrap(), reduced_quadrics(3, 2).unwrap(), orthogonal(4, 1).unwrap()] {
            let again = RingPresentation::replay(pres.provenance()).unwrap();
            assert_eq!(again.relations(), pres.relations());
            assert_eq!(again.to_json()["relations"], pres.to_json()["relations"]);
        }
    }

    #[test]
    fn untwisted_quadrics() {
        assert_eq!(reduced_quadrics(3, 0).unwrap().relations(), [p("4*c3 - 4*c1*c2")]);
        assert_eq!(reduced_quadrics(2, 0).unwrap().relations(), [p("2*c1")]);
    }

    #[test]
    fn unit_twist_rank_three_matches_m01() {
        let q = reduced_quadrics(3, 1).unwrap();
        assert!(q.ideal().equal_up_to(m01().unwrap().ideal(), 12).unwrap().equal);
    }

    #[test]
    fn quadric_family_examples() {
        // e_top(3, 1) = c3
        assert_eq!(quadric_family(3, 1).unwrap(), gens(&["4*c3", "2*c1*c3", "c1^2*c3"]));
        assert_eq!(quadric_family(3, 0).unwrap(), gens(&["4*c3 - 4*c1*c2"]));
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_family(4).unwrap().alphas[0], p("4*H - 2*c1"));
        let three = alpha_family(3).unwrap();
        assert_eq!(three.alphas[1], p("3*H^2 - 2*c1*H"));
        assert_eq!(three.alphas[1], &p("H") * &three.alphas[0]);
    }

    #[test]
    fn alpha_at_zero() {
        for n in 2..=8 {
            let at_zero = alpha_family(n).unwrap().at(&Polynomial::zero());
            for (i, a) in at_zero.iter().enumerate() {
                let i = i + 1;
                let expected = if i % 2 == 1 { c(i).scale(&int(-2)) } else { Polynomial::zero() };
                assert_eq!(a, &expected, "n = {n}, i = {i}");
            }
        }
    }

    #[test]
    fn alphas_are_homogeneous_of_their_index() {
        for n in 2..=6 {
            for (i, a) in alpha_family(n).unwrap().alphas.iter().enumerate() {
                assert!(a.is_homogeneous());
                assert_eq!(a.degree(), Some(i as u32 + 1));
            }
        }
    }

    #[test]
    fn rank_four_twists() {
        let fam = alpha_family(4).unwrap();
        assert_eq!(
            fam.at_twist(3),
            gens(&["10*c1", "45*c1^2", "81*c1^3 + 6*c1*c2 - 2*c3", "54*c1^4 + 9*c1^2*c2 - 3*c1*c3"])
        );
        assert_eq!(
            fam.at_twist(1),
            gens(&["2*c1", "3*c1^2", "c1^3 + 2*c1*c2 - 2*c3", "c1^2*c2 - c1*c3"])
        );
    }

    #[test]
    fn numerator_from_roots_matches_binomial_expansion() {
        for n in 2..=6 {
            let one_plus_h = Polynomial::one() + Polynomial::var(Var::H);
            let roots: Vec<Polynomial> = (1..=n).map(|i| &one_plus_h + &Polynomial::var(root_var(i))).collect();
            let by_roots = product(&roots);
            let by_formula: Polynomial = crate::polycore::sum(&numerator_by_formula(n));
            assert_eq!(crate::symchern::chern_to_roots(&by_formula, n), by_roots);
        }
    }

    #[test]
    fn first_series_term_is_first_alpha() {
        for n in 2..=6 {
            assert_eq!(chern_series_divide(n).unwrap()[0], alpha_family(n).unwrap().alphas[0]);
        }
    }

    #[test]
    fn truncated_series_times_denominator_gives_numerator() {
        for n in 2..=5 {
            let beta = chern_series_divide(n).unwrap();
            let series = crate::polycore::sum(&beta) + Polynomial::one();
            let denominator: Polynomial = crate::polycore::sum(&(0..=n).map(c).collect::<Vec<_>>());
            let prod = &series * &denominator;
            let numerator = numerator_by_formula(n);
            for d in 0..=n {
                assert_eq!(prod.homogeneous_component(d as u32), numerator[d], "n = {n}, degree {d}");
            }
        }
    }

    #[test]
    fn series_and_alpha_ideals_agree() {
        for n in 2..=4 {
            let ambient = Ambient::chern_with(n, &[Var::H]);
            let a = GradedIdeal::new(ambient.clone(), alpha_family(n).unwrap().alphas).unwrap();
            let b = GradedIdeal::new(ambient, chern_series_divide(n).unwrap()).unwrap();
            assert!(a.equal_up_to(&b, 2 * n as u32).unwrap().equal, "n = {n}");
        }
    }

    #[test]
    fn orthogonal_rank_four_unit_twist() {
        let pres = orthogonal(4, 1).unwrap();
        assert_eq!(pres.relations(), gens(&["2*c1", "c1^2", "2*c3", "c1*c3"]).as_slice());
    }

    #[test]
    fn orthogonal_untwisted_recovers_doubled_odd_classes() {
        for n in 2..=5 {
            let pres = orthogonal(n, 0).unwrap();
            assert!(pres.verifications().iter().all(|v| v.passed()));
            assert_eq!(pres.relations(), doubled_odd_classes(n).as_slice());
        }
    }

    #[test]
    fn rank_three_second_alpha_is_redundant() {
        let fam = alpha_family(3).unwrap();
        for k in 0..=5 {
            let a = fam.at_twist(k);
            let first = GradedIdeal::new(Ambient::chern(3), vec![a[0].clone()]).unwrap();
            assert!(first.contains(&a[1]).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(reduced_quadrics(1, 0), Err(ChowpipeError::InvalidParameters(_))));
        assert!(matches!(orthogonal(3, -1), Err(ChowpipeError::InvalidParameters(_))));
        assert!(alpha_family(1).is_err());
    }
}
