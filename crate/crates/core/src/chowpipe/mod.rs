//! Ring presentations assembled from projective bundles, excision of the
//! Veronese image and torsor quotients, with a replayable step log.

mod pipelines;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gradedideal::{Ambient, EqualityReport, GradedIdeal, IdealError};
use crate::localize::{closed_form_pushforward, veronese_pushforward, LocalizeError};
use crate::polycore::int::{int, is_negative};
use crate::polycore::{Polynomial, Var};
use crate::symchern::{build_roots, total_chern_poly_in_chern, ModuleDescriptor, RepRoots, SymchernError};

pub use pipelines::{
    alpha_family, chern_series_divide, m01, m01_bounded, m01_literal, orthogonal, orthogonal_bound,
    orthogonal_bounded, doubled_odd_classes, quadric_family, quadrics_bound, reduced_quadrics, reduced_quadrics_bounded,
    AlphaFamily, M01_BOUND,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowpipeError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("presentation has no variable {0}")]
    MissingVariable(Var),
    #[error("cannot replay: {0}")]
    Replay(String),
    #[error("bad step {0:?}")]
    BadStep(String),
    #[error("verification failed: {}", .0.failed_checks().join(", "))]
    VerificationFailure(Box<RingPresentation>),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Localize(#[from] LocalizeError),
    #[error(transparent)]
    Symchern(#[from] SymchernError),
}

/// How the classes of the Veronese image are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PushforwardRoute {
    /// Summing over torus fixed points.
    Localization,
    /// `2^{n−1−r} H^r R(H)` directly.
    ClosedForm,
}

impl PushforwardRoute {
    fn name(self) -> &'static str {
        match self {
            PushforwardRoute::Localization => "localization",
            PushforwardRoute::ClosedForm => "closed-form",
        }
    }
}

/// One replayable pipeline step.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    /// `ℤ[c, var]/(c_top(V ⊗ O(1)))` for `ℙ(V)`.
    ProjectiveBundle { n: usize, module: ModuleDescriptor, var: Var },
    /// Adds the classes `i_*K^r`, `0 ≤ r < n`, of the Veronese image.
    ExciseVeronese { n: usize, route: PushforwardRoute },
    /// `H ↦ k·c1`.
    TorsorQuotient { k: i64 },
    /// `ℤ[c, H]/(α_1(H), …, α_n(H))`.
    AlphaRelations { n: usize },
    /// `ℤ[c, H]/(β′_1, …, β′_n)` from dividing total Chern series.
    SeriesRelations { n: usize },
    SimplifyGenerators { bound: u32 },
}

impl Step {
    /// What the step computes, in words.
    pub fn description(&self) -> &'static str {
        match self {
            Step::ProjectiveBundle { .. } => "projective bundle formula",
            Step::ExciseVeronese { .. } => "excision of the Veronese image via its pushforward classes",
            Step::TorsorQuotient { .. } => "G_m-torsor quotient H = k*c1",
            Step::AlphaRelations { .. } => "closed-form relations for the rank-one locus complement",
            Step::SeriesRelations { .. } => "relations from dividing total Chern series",
            Step::SimplifyGenerators { .. } => "degree-by-degree generator reduction",
        }
    }

    fn is_source(&self) -> bool {
        matches!(self, Step::ProjectiveBundle { .. } | Step::AlphaRelations { .. } | Step::SeriesRelations { .. })
    }

    /// Applies the step. Source steps ignore `input`; the others require it.
    pub fn apply(&self, input: Option<RingPresentation>) -> Result<RingPresentation, ChowpipeError> {
        if self.is_source() {
            if input.is_some() {
                return Err(ChowpipeError::Replay(format!("{self} must come first")));
            }
            return match *self {
                Step::ProjectiveBundle { n, module, var } => projective_bundle(&build_roots(n, &module)?, module, var),
                Step::AlphaRelations { n } => pipelines::alpha_presentation(n),
                Step::SeriesRelations { n } => pipelines::series_presentation(n),
                _ => unreachable!(),
            };
        }
        let pres = input.ok_or_else(|| ChowpipeError::Replay(format!("{self} needs an input presentation")))?;
        match *self {
            Step::ExciseVeronese { n, route } => excise_veronese(pres, n, route),
            Step::TorsorQuotient { k } => torsor_quotient(pres, k),
            Step::SimplifyGenerators { bound } => Ok(simplify(pres, bound)),
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::ProjectiveBundle { n, module, var } => write!(f, "projective-bundle n={n} module={module} var={var}"),
            Step::ExciseVeronese { n, route } => write!(f, "excise-veronese n={n} route={}", route.name()),
            Step::TorsorQuotient { k } => write!(f, "torsor-quotient k={k}"),
            Step::AlphaRelations { n } => write!(f, "alpha-relations n={n}"),
            Step::SeriesRelations { n } => write!(f, "series-relations n={n}"),
            Step::SimplifyGenerators { bound } => write!(f, "simplify bound={bound}"),
        }
    }
}

impl FromStr for Step {
    type Err = ChowpipeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ChowpipeError::BadStep(s.to_string());
        let mut words = s.split_whitespace();
        let name = words.next().ok_or_else(bad)?;
        let mut fields = std::collections::HashMap::new();
        for w in words {
            let (key, value) = w.split_once('=').ok_or_else(bad)?;
            if fields.insert(key, value).is_some() {
                return Err(bad());
            }
        }
        let take = |key: &str| fields.get(key).copied().ok_or_else(bad);
        let step = match name {
            "projective-bundle" => Step::ProjectiveBundle {
                n: take("n")?.parse().map_err(|_| bad())?,
                module: take("module")?.parse().map_err(|_| bad())?,
                var: take("var")?.parse().map_err(|_| bad())?,
            },
            "excise-veronese" => Step::ExciseVeronese {
                n: take("n")?.parse().map_err(|_| bad())?,
                route: match take("route")? {
                    "localization" => PushforwardRoute::Localization,
                    "closed-form" => PushforwardRoute::ClosedForm,
                    _ => return Err(bad()),
                },
            },
            "torsor-quotient" => Step::TorsorQuotient { k: take("k")?.parse().map_err(|_| bad())? },
            "alpha-relations" => Step::AlphaRelations { n: take("n")?.parse().map_err(|_| bad())? },
            "series-relations" => Step::SeriesRelations { n: take("n")?.parse().map_err(|_| bad())? },
            "simplify" => Step::SimplifyGenerators { bound: take("bound")?.parse().map_err(|_| bad())? },
            _ => return Err(bad()),
        };
        let expected = match step {
            Step::ProjectiveBundle { .. } => 3,
            Step::ExciseVeronese { .. } => 2,
            _ => 1,
        };
        if fields.len() != expected {
            return Err(bad());
        }
        Ok(step)
    }
}

/// An ideal comparison attached to a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub name: String,
    /// Informational checks are reported but never fail a pipeline.
    pub informational: bool,
    pub expected: Vec<String>,
    pub report: EqualityReport,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.report.equal
    }
}

/// `ℤ[variables]/(relations)` together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingPresentation {
    relations: GradedIdeal,
    provenance: Vec<Step>,
    verifications: Vec<Verification>,
}

impl RingPresentation {
    fn source(relations: GradedIdeal, step: Step) -> Self {
        RingPresentation { relations, provenance: vec![step], verifications: Vec::new() }
    }

    fn then(mut self, relations: GradedIdeal, step: Step) -> Self {
        self.relations = relations;
        self.provenance.push(step);
        self
    }

    pub fn ambient(&self) -> &Ambient {
        self.relations.ambient()
    }

    /// Variables with their weights.
    pub fn variables(&self) -> Vec<(Var, u32)> {
        self.ambient().variables().iter().map(|&v| (v, v.weight())).collect()
    }

    pub fn ideal(&self) -> &GradedIdeal {
        &self.relations
    }

    pub fn relations(&self) -> &[Polynomial] {
        self.relations.generators()
    }

    pub fn provenance(&self) -> &[Step] {
        &self.provenance
    }

    pub fn verifications(&self) -> &[Verification] {
        &self.verifications
    }

    /// Names of failed checks that are not informational.
    pub fn failed_checks(&self) -> Vec<String> {
        self.verifications.iter().filter(|v| !v.informational && !v.passed()).map(|v| v.name.clone()).collect()
    }

    /// Re-runs a step log from scratch.
    pub fn replay(steps: &[Step]) -> Result<RingPresentation, ChowpipeError> {
        let mut current = None;
        for step in steps {
            current = Some(step.apply(current)?);
        }
        current.ok_or_else(|| ChowpipeError::Replay("empty step log".into()))
    }

    /// Compares the relations with `expected` up to `bound` and records it.
    pub fn verify_against(
        &mut self,
        name: &str,
        expected: &[Polynomial],
        bound: u32,
        informational: bool,
    ) -> Result<&Verification, ChowpipeError> {
        let other = self.relations.with_generators(expected.to_vec())?;
        let report = self.relations.equal_up_to(&other, bound)?;
        self.verifications.push(Verification {
            name: name.to_string(),
            informational,
            expected: expected.iter().map(|p| p.to_string()).collect(),
            report,
        });
        Ok(self.verifications.last().unwrap())
    }

    /// `Err(VerificationFailure)` if a gating check failed.
    pub fn into_checked(self) -> Result<RingPresentation, ChowpipeError> {
        if self.failed_checks().is_empty() {
            Ok(self)
        } else {
            Err(ChowpipeError::VerificationFailure(Box::new(self)))
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "variables": self.variables().iter()
                .map(|(v, w)| serde_json::json!({"name": v.to_string(), "weight": w}))
                .collect::<Vec<_>>(),
            "relations": self.relations().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "provenance": self.provenance.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "verification": self.verifications,
        })
    }

    /// `ℤ[c_1, …]/(…)` as a LaTeX math expression.
    pub fn to_latex(&self) -> String {
        let vars: Vec<String> = self.ambient().variables().iter().map(|v| v.to_latex()).collect();
        let rels: Vec<String> = self.relations().iter().map(|p| p.to_latex()).collect();
        let rels = if rels.is_empty() { "0".to_string() } else { rels.join(",\\ ") };
        format!("\\mathbb{{Z}}[{}]/\\left({}\\right)", vars.join(", "), rels)
    }

    /// A standalone LaTeX document displaying the presentation.
    pub fn to_latex_document(&self) -> String {
        let mut s = String::new();
        s.push_str("\\documentclass{article}\n\\usepackage{amsmath,amssymb}\n\\begin{document}\n");
        s.push_str("\\[\n");
        s.push_str(&self.to_latex());
        s.push_str("\n\\]\n");
        if !self.provenance.is_empty() {
            s.push_str("\\begin{enumerate}\n");
            for step in &self.provenance {
                s.push_str(&format!("\\item \\texttt{{{}}}: {}\n", latex_escape(&step.to_string()), latex_escape(step.description())));
            }
            s.push_str("\\end{enumerate}\n");
        }
        s.push_str("\\end{document}\n");
        s
    }
}

fn latex_escape(s: &str) -> String {
    s.replace('\\', "\\textbackslash{}")
        .replace('_', "\\_")
        .replace('^', "\\^{}")
        .replace('*', "$\\ast$")
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relations().iter().map(|p| p.to_string()).collect();
        writeln!(f, "{} / ({})", self.ambient(), rels.join(", "))?;
        let weights: Vec<String> = self.variables().iter().map(|(v, w)| format!("{v}:{w}")).collect();
        writeln!(f, "weights: {}", weights.join(" "))?;
        writeln!(f, "provenance:")?;
        for (i, step) in self.provenance.iter().enumerate() {
            writeln!(f, "  {}. {step}  [{}]", i + 1, step.description())?;
        }
        if !self.verifications.is_empty() {
            writeln!(f, "verification:")?;
        }
        for v in &self.verifications {
            let status = match (v.passed(), v.informational) {
                (true, _) => "pass",
                (false, false) => "FAIL",
                (false, true) => "differs (informational)",
            };
            writeln!(f, "  {}: {status} (degrees <= {})", v.name, v.report.bound)?;
            if !v.passed() {
                for c in v.report.degrees.iter().filter(|c| !c.equal) {
                    writeln!(f, "    degree {}: [{}] vs [{}]", c.degree, c.lhs_hnf.join(", "), c.rhs_hnf.join(", "))?;
                }
            }
        }
        Ok(())
    }
}

/// `ℤ[c1, …, cn, var]/(∏(var + m))` for the projectivization of `V`.
pub fn projective_bundle(v: &RepRoots, module: ModuleDescriptor, var: Var) -> Result<RingPresentation, ChowpipeError> {
    let n = v.rank();
    let relation = total_chern_poly_in_chern(v, var)?;
    let ideal = GradedIdeal::new(Ambient::chern_with(n, &[var]), vec![relation])?;
    Ok(RingPresentation::source(ideal, Step::ProjectiveBundle { n, module, var }))
}

/// Appends `i_*K^r` for `r = 0, …, n−1`.
pub fn excise_veronese(
    pres: RingPresentation,
    n: usize,
    route: PushforwardRoute,
) -> Result<RingPresentation, ChowpipeError> {
    if !pres.ambient().variables().contains(&Var::H) {
        return Err(ChowpipeError::MissingVariable(Var::H));
    }
    let mut gens = pres.relations().to_vec();
    for r in 0..n {
        gens.push(match route {
            PushforwardRoute::Localization => veronese_pushforward(n, r)?,
            PushforwardRoute::ClosedForm => closed_form_pushforward(n, r)?,
        });
    }
    let ideal = pres.relations.with_generators(gens)?;
    Ok(pres.then(ideal, Step::ExciseVeronese { n, route }))
}

/// Substitutes `H ↦ k·c1`, drops `H` and the relations that vanish.
pub fn torsor_quotient(pres: RingPresentation, k: i64) -> Result<RingPresentation, ChowpipeError> {
    if !pres.ambient().variables().contains(&Var::H) {
        return Err(ChowpipeError::MissingVariable(Var::H));
    }
    let h = Polynomial::var(Var::C(1)).scale(&int(k));
    let gens: Vec<Polynomial> =
        pres.relations().iter().map(|g| g.substitute(Var::H, &h)).filter(|g| !g.is_zero()).collect();
    let ideal = GradedIdeal::new(pres.ambient().without(Var::H), gens)?;
    Ok(pres.then(ideal, Step::TorsorQuotient { k }))
}

/// Replaces the relations by [`GradedIdeal::simplify_generators`].
pub fn simplify(pres: RingPresentation, bound: u32) -> RingPresentation {
    let gens = pres.relations.simplify_generators(bound);
    let ideal = pres.relations.with_generators(gens).expect("same ring");
    pres.then(ideal, Step::SimplifyGenerators { bound })
}

/// Generators up to sign, with positive leading coefficients.
pub(crate) fn normalize_signs(gens: Vec<Polynomial>) -> Vec<Polynomial> {
    gens.into_iter()
        .map(|g| match g.leading_term() {
            Some((_, c)) if is_negative(c) => -g,
            _ => g,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symchern::BaseModule;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    fn bundle(n: usize, base: BaseModule, var: Var) -> RingPresentation {
        let module = ModuleDescriptor::new(base);
        projective_bundle(&build_roots(n, &module).unwrap(), module, var).unwrap()
    }

    fn r_hat() -> Polynomial {
        p("H^3 - 2*c1*H^2 + c1^2*H + c2*H + c3 - c1*c2")
    }

    #[test]
    fn projective_space_of_the_dual() {
        assert_eq!(bundle(3, BaseModule::Dual, Var::K).relations(), [p("K^3 - c1*K^2 + c2*K - c3")]);
        assert_eq!(bundle(2, BaseModule::Dual, Var::K).relations(), [p("K^2 - c1*K + c2")]);
    }

    #[test]
    fn quadric_space_relation_is_product_of_two_cubics() {
        let pres = bundle(3, BaseModule::Sym2Dual, Var::H);
        let cubic = p("H^3 - 2*c1*H^2 + 4*c2*H - 8*c3");
        assert_eq!(pres.relations(), [&cubic * &r_hat()]);
        assert_eq!(pres.ambient(), &Ambient::chern_with(3, &[Var::H]));
    }

    #[test]
    fn excision_appends_pushforwards() {
        let pres = excise_veronese(bundle(3, BaseModule::Sym2Dual, Var::H), 3, PushforwardRoute::Localization).unwrap();
        assert_eq!(&pres.relations()[1..], [r_hat().scale(&int(4)), &p("2*H") * &r_hat(), &p("H^2") * &r_hat()]);
        let small = excise_veronese(bundle(2, BaseModule::Sym2Dual, Var::H), 2, PushforwardRoute::ClosedForm).unwrap();
        assert_eq!(&small.relations()[1..], [p("2*H - 2*c1"), p("H^2 - c1*H")]);
    }

    #[test]
    fn repeated_excision_does_not_change_pieces() {
        let once = excise_veronese(bundle(3, BaseModule::Sym2Dual, Var::H), 3, PushforwardRoute::ClosedForm).unwrap();
        let twice = excise_veronese(once.clone(), 3, PushforwardRoute::ClosedForm).unwrap();
        assert!(once.ideal().equal_up_to(twice.ideal(), 10).unwrap().equal);
    }

    #[test]
    fn torsor_quotient_at_unit_twist() {
        let pres = excise_veronese(bundle(3, BaseModule::Sym2Dual, Var::H), 3, PushforwardRoute::Localization).unwrap();
        let q = torsor_quotient(pres, 1).unwrap();
        assert_eq!(&q.relations()[1..], [p("4*c3"), p("2*c1*c3"), p("c1^2*c3")]);
        assert_eq!(q.ambient(), &Ambient::chern(3));
    }

    #[test]
    fn torsor_quotient_at_zero_keeps_h_free_parts() {
        let pres = excise_veronese(bundle(3, BaseModule::Sym2Dual, Var::H), 3, PushforwardRoute::ClosedForm).unwrap();
        let q = torsor_quotient(pres.clone(), 0).unwrap();
        let expected: Vec<Polynomial> = pres
            .relations()
            .iter()
            .map(|g| g.coefficients_in(Var::H).remove(&0).unwrap_or_default())
            .filter(|g| !g.is_zero())
            .collect();
        assert_eq!(q.relations(), expected.as_slice());
        assert!(matches!(torsor_quotient(q, 1), Err(ChowpipeError::MissingVariable(Var::H))));
    }

    #[test]
    fn step_text_round_trip() {
        let steps = [
            Step::ProjectiveBundle { n: 3, module: "det^2*Sym2(E*)".parse().unwrap(), var: Var::H },
            Step::ExciseVeronese { n: 4, route: PushforwardRoute::ClosedForm },
            Step::TorsorQuotient { k: -1 },
            Step::AlphaRelations { n: 5 },
            Step::SeriesRelations { n: 2 },
            Step::SimplifyGenerators { bound: 12 },
        ];
        for s in steps {
            assert_eq!(s.to_string().parse::<Step>().unwrap(), s);
        }
        for bad in ["", "simplify", "simplify bound=x", "torsor-quotient k=1 k=2", "simplify bound=1 n=2", "nope n=1"] {
            assert!(bad.parse::<Step>().is_err(), "{bad}");
        }
    }

    #[test]
    fn replay_needs_a_source_first() {
        assert!(RingPresentation::replay(&[Step::TorsorQuotient { k: 1 }]).is_err());
        assert!(RingPresentation::replay(&[]).is_err());
        let twice = [Step::AlphaRelations { n: 2 }, Step::AlphaRelations { n: 2 }];
        assert!(RingPresentation::replay(&twice).is_err());
    }

    #[test]
    fn latex_document_is_balanced() {
        let pres = torsor_quotient(
            excise_veronese(bundle(2, BaseModule::Sym2Dual, Var::H), 2, PushforwardRoute::ClosedForm).unwrap(),
            0,
        )
        .unwrap();
        let doc = pres.to_latex_document();
        assert_eq!(doc.matches('{').count(), doc.matches('}').count());
        assert_eq!(doc.matches("\\begin{").count(), doc.matches("\\end{").count());
        assert!(doc.contains("\\mathbb{Z}[c_{1}, c_{2}]"));
    }
}
