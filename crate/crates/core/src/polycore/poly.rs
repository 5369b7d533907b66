use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::int::{gcd, int, is_negative, Int};
use super::{Monomial, PolyError, Var};

/// An exact polynomial with integer coefficients.
///
/// Terms are kept sorted ascending in the monomial order with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Polynomial {
    terms: Vec<(Monomial, Int)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Int::ONE)
    }

    pub fn constant(c: Int) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_i64(c: i64) -> Self {
        Self::constant(int(c))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Int::ONE, Monomial::var(v))
    }

    pub fn term(c: Int, m: Monomial) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Linear combination `Σ a_v · v` of variables.
    pub fn linear(coeffs: &[(Var, i64)]) -> Self {
        Self::from_terms(coeffs.iter().map(|&(v, a)| (Monomial::var(v), int(a))))
    }

    /// Collects arbitrary terms, merging repeated monomials.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Int)>>(terms: I) -> Self {
        let mut acc: HashMap<Monomial, Int> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert(Int::ZERO) += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, Int>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Polynomial { terms }
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> &[(Monomial, Int)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Int)> {
        self.terms.last()
    }

    pub fn coefficient(&self, m: &Monomial) -> Int {
        self.terms
            .binary_search_by(|t| t.0.cmp(m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or(Int::ZERO)
    }

    /// Highest weighted degree of a term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        // terms are sorted by degree first
        self.terms.last().map(|t| t.0.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => {
                let d = m.degree();
                self.terms.iter().all(|t| t.0.degree() == d)
            }
        }
    }

    pub fn homogeneous_components(&self) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Vec<(Monomial, Int)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree()).or_default().push((m.clone(), c.clone()));
        }
        // each bucket inherits the sorted order
        out.into_iter().map(|(d, terms)| (d, Polynomial { terms })).collect()
    }

    pub fn homogeneous_component(&self, d: u32) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().filter(|t| t.0.degree() == d).cloned().collect(),
        }
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.iter().flat_map(|(m, _)| m.vars()).collect()
    }

    /// Coefficients as a polynomial in `v`: `self = Σ_e coeff[e] · v^e`.
    pub fn coefficients_in(&self, v: Var) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Vec<(Monomial, Int)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            out.entry(e).or_default().push((rest, c.clone()));
        }
        out.into_iter().map(|(e, t)| (e, Polynomial::from_terms(t))).collect()
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> Int {
        self.terms.iter().fold(Int::ZERO, |g, (_, c)| gcd(&g, c))
    }

    pub fn scale(&self, c: &Int) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        // multiplication by a monomial preserves the order
        Polynomial {
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.map_vars(&f), c.clone())))
    }

    /// Replaces every occurrence of `v` by `q` and expands.
    pub fn substitute(&self, v: Var, q: &Polynomial) -> Polynomial {
        let mut powers: Vec<Polynomial> = vec![Polynomial::one()];
        let mut acc: HashMap<Monomial, Int> = HashMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            while powers.len() <= e as usize {
                let next = powers.last().unwrap() * q;
                powers.push(next);
            }
            for (pm, pc) in &powers[e as usize].terms {
                *acc.entry(rest.mul(pm)).or_insert(Int::ZERO) += c * pc;
            }
        }
        Polynomial::from_map(acc)
    }

    /// Exact quotient `self / q` over the integers.
    ///
    /// Uses leading-term division in the monomial order, which produces the
    /// quotient whenever one exists and fails on the first term that cannot
    /// be cancelled.
    pub fn exact_divide(&self, q: &Polynomial) -> Result<Polynomial, PolyError> {
        let (lm, lc) = q.leading_term().ok_or(PolyError::DivisionByZero)?;
        if self.is_zero() {
            return Ok(Polynomial::zero());
        }
        if q.terms.len() == 1 && lm.is_one() {
            return self.exact_divide_int(lc);
        }
        let mut rem: BTreeMap<Monomial, Int> = self.terms.iter().cloned().collect();
        let mut quotient: Vec<(Monomial, Int)> = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let cof = lm.cofactor_in(&m).ok_or(PolyError::NotDivisible)?;
            if !(&c % lc).is_zero() {
                return Err(PolyError::NotDivisible);
            }
            let t = &c / lc;
            for (qm, qc) in q.terms.iter().rev().skip(1) {
                let key = qm.mul(&cof);
                let entry = rem.entry(key).or_insert(Int::ZERO);
                *entry -= &t * qc;
                if entry.is_zero() {
                    let key = qm.mul(&cof);
                    rem.remove(&key);
                }
            }
            quotient.push((cof, t));
        }
        quotient.reverse();
        Ok(Polynomial { terms: quotient })
    }

    pub fn exact_divide_int(&self, d: &Int) -> Result<Polynomial, PolyError> {
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if !(c % d).is_zero() {
                return Err(PolyError::NotDivisible);
            }
            terms.push((m.clone(), c / d));
        }
        Ok(Polynomial { terms })
    }

    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    s.push_str(&mag.to_string());
                }
                s.push_str(&m.to_latex());
            }
        }
        s
    }

    fn add_impl(&self, other: &Polynomial, negate_other: bool) -> Polynomial {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let fix = |c: &Int| if negate_other { -c.clone() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b[j].0.clone(), fix(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), fix(c))));
        Polynomial { terms: out }
    }

    fn mul_impl(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let (small, large) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        if small.terms.len() == 1 {
            let (m, c) = &small.terms[0];
            return large.mul_monomial(m).scale(c);
        }
        let mut acc: HashMap<Monomial, Int> = HashMap::with_capacity(large.terms.len() * 2);
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                *acc.entry(ma.mul(mb)).or_insert(Int::ZERO) += ca * cb;
            }
        }
        Polynomial::from_map(acc)
    }
}

pub fn sum<'a, I: IntoIterator<Item = &'a Polynomial>>(polys: I) -> Polynomial {
    Polynomial::from_terms(polys.into_iter().flat_map(|p| p.terms.iter().cloned()))
}

pub fn product<'a, I: IntoIterator<Item = &'a Polynomial>>(polys: I) -> Polynomial {
    polys.into_iter().fold(Polynomial::one(), |acc, p| &acc * p)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.add_impl(rhs, false)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        self.add_impl(&rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.add_impl(rhs, true)
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        self.add_impl(&rhs, true)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.mul_impl(rhs)
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        self.mul_impl(&rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl From<Var> for Polynomial {
    fn from(v: Var) -> Self {
        Polynomial::var(v)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl FromStr for Polynomial {
    type Err = PolyError;

    /// Parses the canonical text form, e.g. `4*c3 + 2*c1*c3 - H^2`.
    /// Terms may appear in any order and repeat.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| PolyError::Parse(format!("{why} in {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty input"));
        }
        let mut terms = Vec::new();
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let negative = match rest.as_bytes()[0] {
                b'+' => {
                    rest = &rest[1..];
                    false
                }
                b'-' => {
                    rest = &rest[1..];
                    true
                }
                _ if first => false,
                _ => return Err(bad("expected '+' or '-'")),
            };
            first = false;
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let (body, tail) = rest.split_at(end);
            rest = tail;
            if body.is_empty() {
                return Err(bad("empty term"));
            }
            let mut coeff = Int::ONE;
            let mut pairs = Vec::new();
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(bad("empty factor"));
                }
                if factor.bytes().all(|b| b.is_ascii_digit()) {
                    coeff *= factor.parse::<Int>().map_err(|_| bad("bad integer"))?;
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                    None => (factor, 1),
                };
                pairs.push((name.parse::<Var>()?, exp));
            }
            if negative {
                coeff = -coeff;
            }
            terms.push((Monomial::from_pairs(pairs), coeff));
        }
        Ok(Polynomial::from_terms(terms))
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    coeff: String,
    exps: BTreeMap<String, u32>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<JsonTerm> = self
            .terms
            .iter()
            .map(|(m, c)| JsonTerm {
                coeff: c.to_string(),
                exps: m.iter().map(|(v, e)| (v.name(), *e)).collect(),
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw: Vec<JsonTerm> = Vec::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(raw.len());
        for t in raw {
            let c: Int = t.coeff.parse().map_err(|_| D::Error::custom(format!("bad coefficient {:?}", t.coeff)))?;
            let mut pairs = Vec::new();
            for (name, e) in t.exps {
                pairs.push((name.parse::<Var>().map_err(D::Error::custom)?, e));
            }
            terms.push((Monomial::from_pairs(pairs), c));
        }
        Ok(Polynomial::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    /// `R̂(H) = H³ − 2c1H² + (c1²+c2)H + (c3 − c1c2)`.
    fn r_hat() -> Polynomial {
        p("H^3 - 2*c1*H^2 + c1^2*H + c2*H + c3 - c1*c2")
    }

    #[test]
    fn canonical_text() {
        let q = p("2*c1*c3 + 4*c3");
        assert_eq!(q.to_string(), "4*c3 + 2*c1*c3");
        assert_eq!(p("c3 - c3").to_string(), "0");
        assert_eq!(p("-1").to_string(), "-1");
        assert_eq!(r_hat().to_string(), "-c1*c2 + c3 + c1^2*H + c2*H - 2*c1*H^2 + H^3");
    }

    #[test]
    fn parse_errors() {
        assert!("".parse::<Polynomial>().is_err());
        assert!("c1 +".parse::<Polynomial>().is_err());
        assert!("c1**c2".parse::<Polynomial>().is_err());
        assert!("z7".parse::<Polynomial>().is_err());
        assert!("c1^x".parse::<Polynomial>().is_err());
    }

    #[test]
    fn substitute_h_by_c1_leaves_c3() {
        // the torsor substitution that turns every pushforward into a multiple of c3
        let out = r_hat().substitute(Var::H, &Polynomial::var(Var::C(1)));
        assert_eq!(out, p("c3"));
    }

    #[test]
    fn substitute_zero_case() {
        assert!(p("H").substitute(Var::H, &Polynomial::zero()).is_zero());
    }

    #[test]
    fn substitute_first_alpha_for_n4() {
        let alpha1 = p("4*H - 2*c1");
        assert_eq!(alpha1.substitute(Var::H, &p("c1")), p("2*c1"));
    }

    #[test]
    fn substitute_matches_term_by_term_expansion() {
        // independent oracle: expand each H^e by repeated multiplication
        let q = p("2*c1 + H");
        let src = p("H^3*c2 - 3*H*c1 + 7");
        let mut expected = Polynomial::zero();
        for (e, coeff) in src.coefficients_in(Var::H) {
            let mut pw = Polynomial::one();
            for _ in 0..e {
                pw = &pw * &q;
            }
            expected = expected + &coeff * &pw;
        }
        assert_eq!(src.substitute(Var::H, &q), expected);
    }

    #[test]
    fn exact_divide_examples() {
        let a = p("l2 - l1");
        let b = p("l3 - l1");
        assert_eq!((&a * &b).exact_divide(&a).unwrap(), b);
        let four = r_hat().scale(&int(4));
        assert_eq!(four.exact_divide(&p("2")).unwrap(), r_hat().scale(&int(2)));
        assert_eq!(p("l1 + l2").exact_divide(&p("l1")), Err(PolyError::NotDivisible));
        assert_eq!(p("l1").exact_divide(&Polynomial::zero()), Err(PolyError::DivisionByZero));
        assert_eq!(p("3*c1").exact_divide(&p("2")), Err(PolyError::NotDivisible));
        assert_eq!(p("2*c1 + 2").exact_divide(&p("2*c1")), Err(PolyError::NotDivisible));
    }

    #[test]
    fn homogeneity() {
        assert!(p("c2 + c1^2 + H^2").is_homogeneous());
        assert!(!p("c2 + c1").is_homogeneous());
        assert_eq!(p("c2 + c1").homogeneous_components().len(), 2);
        assert_eq!(p("c1*c3 + H").degree(), Some(4));
    }

    #[test]
    fn json_round_trip() {
        let q = r_hat().scale(&int(-3)) + p("123456789012345678901234567890*c5");
        let text = serde_json::to_string(&q).unwrap();
        let back: Polynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(back, q);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        assert_eq!(back.to_string().parse::<Polynomial>().unwrap(), q);
    }

    #[test]
    fn json_shape() {
        let text = serde_json::to_string(&p("-2*c1*c3")).unwrap();
        assert_eq!(text, r#"[{"coeff":"-2","exps":{"c1":1,"c3":1}}]"#);
    }

    #[test]
    fn latex() {
        assert_eq!(p("c1^2*c3 + 4*c3 - 2*c1*c3").to_latex(), "4c_{3} - 2c_{1}c_{3} + c_{1}^{2}c_{3}");
    }
}
