use std::collections::BTreeMap;
use std::fmt;

use super::int::{gcd, is_negative, lcm, Int};
use super::{PolyError, Polynomial};

/// `unit · ∏ factor^multiplicity` for primitive linear forms.
///
/// Each factor is stored primitive with a positive leading coefficient, so
/// `l1 − l2` and `l2 − l1` are recognised as the same factor; signs and
/// contents move into `unit`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearFormProduct {
    unit: Int,
    factors: BTreeMap<Polynomial, u32>,
}

impl Default for LinearFormProduct {
    fn default() -> Self {
        Self::one()
    }
}

/// Splits a degree-one form into `(scalar, primitive form)`.
fn normalize_linear(form: &Polynomial) -> Result<(Int, Polynomial), PolyError> {
    if form.is_zero() || !form.is_homogeneous() || form.degree() != Some(1) {
        return Err(PolyError::NotLinear(form.to_string()));
    }
    let mut content = form.content();
    if is_negative(&form.leading_term().unwrap().1) {
        content = -content;
    }
    let primitive = form.exact_divide_int(&content)?;
    Ok((content, primitive))
}

impl LinearFormProduct {
    pub fn one() -> Self {
        LinearFormProduct { unit: Int::ONE, factors: BTreeMap::new() }
    }

    pub fn from_factors<'a, I: IntoIterator<Item = &'a Polynomial>>(forms: I) -> Result<Self, PolyError> {
        let mut out = Self::one();
        for f in forms {
            out.push(f, 1)?;
        }
        Ok(out)
    }

    pub fn push(&mut self, form: &Polynomial, multiplicity: u32) -> Result<(), PolyError> {
        if multiplicity == 0 {
            return Ok(());
        }
        let (scalar, primitive) = normalize_linear(form)?;
        self.unit *= scalar.pow(multiplicity as usize);
        *self.factors.entry(primitive).or_insert(0) += multiplicity;
        Ok(())
    }

    pub fn scaled(mut self, c: &Int) -> Self {
        self.unit *= c;
        self
    }

    pub fn unit(&self) -> &Int {
        &self.unit
    }

    /// Normalised factors with multiplicities.
    pub fn factors(&self) -> impl Iterator<Item = (&Polynomial, u32)> {
        self.factors.iter().map(|(f, &m)| (f, m))
    }

    pub fn degree(&self) -> u32 {
        self.factors.values().sum()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.unit.is_one()
    }

    pub fn expand(&self) -> Polynomial {
        let mut acc = Polynomial::constant(self.unit.clone());
        for (f, &m) in &self.factors {
            for _ in 0..m {
                acc = &acc * f;
            }
        }
        acc
    }

    /// Factors shared with `other`, with minimum multiplicities and unit 1.
    pub fn common_factors(&self, other: &LinearFormProduct) -> LinearFormProduct {
        let factors = self
            .factors
            .iter()
            .filter_map(|(f, &m)| other.factors.get(f).map(|&n| (f.clone(), m.min(n))))
            .collect();
        LinearFormProduct { unit: Int::ONE, factors }
    }

    /// `self / other` when `other`'s factor multiset is contained in `self`'s
    /// and the units divide.
    pub fn quotient(&self, other: &LinearFormProduct) -> Option<LinearFormProduct> {
        if !(&self.unit % &other.unit).is_zero() {
            return None;
        }
        let mut factors = self.factors.clone();
        for (f, &m) in &other.factors {
            let have = factors.get_mut(f)?;
            if *have < m {
                return None;
            }
            *have -= m;
            if *have == 0 {
                factors.remove(f);
            }
        }
        Some(LinearFormProduct { unit: &self.unit / &other.unit, factors })
    }

    /// Least common multiple: union of factors with maximal multiplicities.
    fn lcm(&self, other: &LinearFormProduct) -> LinearFormProduct {
        let mut factors = self.factors.clone();
        for (f, &m) in &other.factors {
            let e = factors.entry(f.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        LinearFormProduct { unit: lcm(&self.unit, &other.unit), factors }
    }
}

impl fmt::Display for LinearFormProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unit)?;
        for (form, m) in &self.factors {
            write!(f, "*({form})")?;
            if *m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

/// A fraction whose denominator is a product of linear forms: the only kind
/// of denominator torus localization produces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StructuredFraction {
    numerator: Polynomial,
    denominator: LinearFormProduct,
}

impl StructuredFraction {
    /// Builds and reduces `numerator / denominator`.
    pub fn new(numerator: Polynomial, denominator: LinearFormProduct) -> Result<Self, PolyError> {
        if denominator.unit.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let mut out = StructuredFraction { numerator, denominator };
        if is_negative(&out.denominator.unit) {
            out.denominator.unit = -out.denominator.unit;
            out.numerator = -out.numerator;
        }
        out.reduce();
        Ok(out)
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        StructuredFraction { numerator: p, denominator: LinearFormProduct::one() }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &LinearFormProduct {
        &self.denominator
    }

    /// The plain polynomial, when the denominator has fully cancelled.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.denominator.is_one().then_some(&self.numerator)
    }

    pub fn into_polynomial(self) -> Result<Polynomial, Self> {
        if self.denominator.is_one() {
            Ok(self.numerator)
        } else {
            Err(self)
        }
    }

    /// Cancels every linear factor that divides the numerator, then the
    /// integer content.
    fn reduce(&mut self) {
        if self.numerator.is_zero() {
            self.denominator = LinearFormProduct::one();
            return;
        }
        let factors: Vec<(Polynomial, u32)> = self.denominator.factors.iter().map(|(f, &m)| (f.clone(), m)).collect();
        for (f, m) in factors {
            let mut left = m;
            while left > 0 {
                match self.numerator.exact_divide(&f) {
                    Ok(q) => {
                        self.numerator = q;
                        left -= 1;
                    }
                    Err(_) => break,
                }
            }
            if left == 0 {
                self.denominator.factors.remove(&f);
            } else {
                self.denominator.factors.insert(f, left);
            }
        }
        let g = gcd(&self.numerator.content(), &self.denominator.unit);
        if !g.is_one() {
            self.numerator = self.numerator.exact_divide_int(&g).expect("content divides");
            self.denominator.unit = &self.denominator.unit / &g;
        }
    }
}

impl fmt::Display for StructuredFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_one() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})", self.numerator, self.denominator)
        }
    }
}

/// Sums fractions over their least common denominator and cancels whatever
/// the summed numerator allows.
pub fn sum_fractions(fs: &[StructuredFraction]) -> StructuredFraction {
    let lcd = fs.iter().fold(LinearFormProduct::one(), |acc, f| acc.lcm(&f.denominator));
    let numerators: Vec<Polynomial> = fs
        .iter()
        .map(|f| {
            let cofactor = lcd.quotient(&f.denominator).expect("lcd is a multiple");
            &f.numerator * &cofactor.expand()
        })
        .collect();
    let numerator = super::poly::sum(&numerators);
    StructuredFraction::new(numerator, lcd).expect("lcd unit is positive")
}
