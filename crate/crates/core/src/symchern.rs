//! Torus characters of `GL_n`-modules and the rewriting of symmetric
//! polynomials in Chern roots as polynomials in Chern classes.
//!
//! Conventions: `l_1, …, l_n` are the Chern roots of the dual standard
//! representation `E*`, and `c_i` always denotes `c_i(E)`, so
//! `c_i = (−1)^i e_i(l)`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::polycore::int::{int, Int};
use crate::polycore::{product, Monomial, Polynomial, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymchernError {
    #[error("unsupported module descriptor {0:?}")]
    UnsupportedModule(String),
    #[error("rank must be at least 2, got {0}")]
    InvalidRank(usize),
    #[error("polynomial is not symmetric in l1..l{n}: {poly}")]
    NotSymmetric { n: usize, poly: String },
    #[error("root {0} is not a linear form in the Chern roots")]
    BadRoot(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseModule {
    /// `E`
    Standard,
    /// `E*`
    Dual,
    /// `Sym²E*`
    Sym2Dual,
    /// `∧²E*`
    Wedge2Dual,
}

/// A module from the grammar `E | E* | Sym2(E*) | Wedge2(E*) | det^k*M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModuleDescriptor {
    pub twist: i64,
    pub base: BaseModule,
}

impl ModuleDescriptor {
    pub const fn new(base: BaseModule) -> Self {
        ModuleDescriptor { twist: 0, base }
    }

    pub const fn twisted(twist: i64, base: BaseModule) -> Self {
        ModuleDescriptor { twist, base }
    }

    pub fn dimension(&self, n: usize) -> usize {
        match self.base {
            BaseModule::Standard | BaseModule::Dual => n,
            BaseModule::Sym2Dual => n * (n + 1) / 2,
            BaseModule::Wedge2Dual => n * (n - 1) / 2,
        }
    }
}

impl fmt::Display for ModuleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twist != 0 {
            write!(f, "det^{}*", self.twist)?;
        }
        let base = match self.base {
            BaseModule::Standard => "E",
            BaseModule::Dual => "E*",
            BaseModule::Sym2Dual => "Sym2(E*)",
            BaseModule::Wedge2Dual => "Wedge2(E*)",
        };
        write!(f, "{base}")
    }
}

impl FromStr for ModuleDescriptor {
    type Err = SymchernError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unsupported = || SymchernError::UnsupportedModule(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (twist, base) = match compact.strip_prefix("det^") {
            Some(rest) => {
                let (k, base) = rest.split_once('*').ok_or_else(unsupported)?;
                (k.parse::<i64>().map_err(|_| unsupported())?, base)
            }
            None => (0, compact.as_str()),
        };
        let base = match base {
            "E" => BaseModule::Standard,
            "E*" => BaseModule::Dual,
            "Sym2(E*)" => BaseModule::Sym2Dual,
            "Wedge2(E*)" => BaseModule::Wedge2Dual,
            _ => return Err(unsupported()),
        };
        Ok(ModuleDescriptor { twist, base })
    }
}

/// The torus character decomposition of a `GL_n`-module, as a multiset of
/// linear forms in `l_1, …, l_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepRoots {
    n: usize,
    roots: Vec<Polynomial>,
}

impl RepRoots {
    pub fn new(n: usize, roots: Vec<Polynomial>) -> Result<Self, SymchernError> {
        for r in &roots {
            let ok = r.is_homogeneous()
                && r.degree().unwrap_or(1) == 1
                && r.variables().iter().all(|v| matches!(v, Var::L(i) if (*i as usize) <= n && *i >= 1));
            if !ok {
                return Err(SymchernError::BadRoot(r.to_string()));
            }
        }
        Ok(RepRoots { n, roots })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn roots(&self) -> &[Polynomial] {
        &self.roots
    }

    pub fn dimension(&self) -> usize {
        self.roots.len()
    }

    /// Applies a permutation of the root variables: `l_i ↦ l_{perm[i-1]+1}`.
    pub fn permuted(&self, perm: &[usize]) -> RepRoots {
        let roots = self.roots.iter().map(|r| permute_roots(r, perm)).collect();
        RepRoots { n: self.n, roots }
    }

    /// Groups root indices by Weyl orbit (roots with the same multiset of
    /// coefficients lie in one orbit).
    pub fn weyl_orbits(&self) -> Vec<Vec<usize>> {
        let mut orbits: BTreeMap<Vec<Int>, Vec<usize>> = BTreeMap::new();
        for (idx, r) in self.roots.iter().enumerate() {
            let mut coeffs: Vec<Int> = (1..=self.n).map(|i| r.coefficient(&Monomial::var(Var::L(i as u16)))).collect();
            coeffs.sort();
            orbits.entry(coeffs).or_default().push(idx);
        }
        orbits.into_values().collect()
    }
}

pub fn root_var(i: usize) -> Var {
    Var::L(i as u16)
}

/// `c1` written in the roots: `−(l_1 + … + l_n)`.
pub fn c1_in_roots(n: usize) -> Polynomial {
    -product_sum_roots(n)
}

fn product_sum_roots(n: usize) -> Polynomial {
    Polynomial::from_terms((1..=n).map(|i| (Monomial::var(root_var(i)), Int::ONE)))
}

pub fn permute_roots(p: &Polynomial, perm: &[usize]) -> Polynomial {
    p.map_vars(|v| match v {
        Var::L(i) if (i as usize) <= perm.len() => Var::L(perm[i as usize - 1] as u16 + 1),
        other => other,
    })
}

pub fn build_roots(n: usize, module: &ModuleDescriptor) -> Result<RepRoots, SymchernError> {
    if n < 2 {
        return Err(SymchernError::InvalidRank(n));
    }
    let l = |i: usize| Polynomial::var(root_var(i));
    let mut roots = Vec::with_capacity(module.dimension(n));
    match module.base {
        BaseModule::Standard => roots.extend((1..=n).map(|i| -l(i))),
        BaseModule::Dual => roots.extend((1..=n).map(l)),
        BaseModule::Sym2Dual => {
            roots.extend((1..=n).map(|i| l(i).scale(&int(2))));
            for i in 1..=n {
                for j in i + 1..=n {
                    roots.push(&l(i) + &l(j));
                }
            }
        }
        BaseModule::Wedge2Dual => {
            for i in 1..=n {
                for j in i + 1..=n {
                    roots.push(&l(i) + &l(j));
                }
            }
        }
    }
    if module.twist != 0 {
        let shift = c1_in_roots(n).scale(&int(module.twist));
        roots = roots.iter().map(|r| r + &shift).collect();
    }
    Ok(RepRoots { n, roots })
}

/// Invariance under the adjacent transpositions `l_i ↔ l_{i+1}`, which
/// generate the symmetric group. Root variables beyond `l_n` make the
/// polynomial non-symmetric.
pub fn is_symmetric(p: &Polynomial, n: usize) -> bool {
    let in_range = p
        .variables()
        .iter()
        .all(|v| !matches!(v, Var::L(i) if *i as usize > n || *i == 0));
    if !in_range {
        return false;
    }
    for i in 1..n {
        let (a, b) = (Var::L(i as u16), Var::L(i as u16 + 1));
        let swap = |v: Var| {
            if v == a {
                b
            } else if v == b {
                a
            } else {
                v
            }
        };
        for (m, c) in p.terms() {
            if m.exponent(a) == m.exponent(b) {
                continue;
            }
            if &p.coefficient(&m.map_vars(swap)) != c {
                return false;
            }
        }
    }
    true
}

/// `e_i(l_1, …, l_n)`.
pub fn elementary(n: usize, i: usize) -> Polynomial {
    if i > n {
        return Polynomial::zero();
    }
    let mut terms = Vec::new();
    let mut subset: Vec<usize> = (1..=i).collect();
    loop {
        terms.push((Monomial::from_pairs(subset.iter().map(|&j| (root_var(j), 1))), Int::ONE));
        // next combination
        let mut k = i;
        while k > 0 && subset[k - 1] == n - i + k {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        subset[k - 1] += 1;
        for t in k..i {
            subset[t] = subset[t - 1] + 1;
        }
    }
    Polynomial::from_terms(terms)
}

/// Rewrites `c_i ↦ (−1)^i e_i(l)`; classes `c_i` with `i > n` vanish.
pub fn chern_to_roots(q: &Polynomial, n: usize) -> Polynomial {
    let mut out = q.clone();
    for v in q.variables() {
        if let Var::C(i) = v {
            let i = i as usize;
            let image = if i % 2 == 0 { elementary(n, i) } else { -elementary(n, i) };
            out = out.substitute(v, &image);
        }
    }
    out
}

type Dense = Vec<u32>;

fn is_dominant(e: &[u32]) -> bool {
    e.windows(2).all(|w| w[0] >= w[1])
}

fn sorted_desc(mut e: Dense) -> Dense {
    e.sort_unstable_by(|a, b| b.cmp(a));
    e
}

/// Dominant-exponent parts of products of elementary symmetric polynomials.
///
/// A symmetric polynomial is determined by its coefficients on monomials
/// with non-increasing exponents, and multiplying by `e_i` can be done on
/// that part alone: `(f·e_i)[w] = Σ_{|S|=i} f[sort(w − 1_S)]`.
struct ElementaryProducts {
    n: usize,
    subsets: Vec<Vec<Vec<usize>>>,
    cache: HashMap<Dense, HashMap<Dense, Int>>,
}

impl ElementaryProducts {
    fn new(n: usize) -> Self {
        let subsets = (0..=n)
            .map(|i| {
                (0u32..(1 << n))
                    .filter(|mask| mask.count_ones() as usize == i)
                    .map(|mask| (0..n).filter(|b| mask >> b & 1 == 1).collect())
                    .collect()
            })
            .collect();
        ElementaryProducts { n, subsets, cache: HashMap::new() }
    }

    /// Dominant part of `∏ e_i^{mu[i-1]}`.
    fn get(&mut self, mu: &[u32]) -> &HashMap<Dense, Int> {
        if !self.cache.contains_key(mu) {
            let value = match mu.iter().rposition(|&m| m > 0) {
                None => HashMap::from([(vec![0; self.n], Int::ONE)]),
                Some(idx) => {
                    let mut smaller = mu.to_vec();
                    smaller[idx] -= 1;
                    let base = self.get(&smaller).clone();
                    self.times_elementary(&base, idx + 1)
                }
            };
            self.cache.insert(mu.to_vec(), value);
        }
        &self.cache[mu]
    }

    fn times_elementary(&self, base: &HashMap<Dense, Int>, i: usize) -> HashMap<Dense, Int> {
        let subsets = &self.subsets[i];
        let mut targets: HashSet<Dense> = HashSet::new();
        for u in base.keys() {
            for s in subsets {
                let mut w = u.clone();
                for &j in s {
                    w[j] += 1;
                }
                targets.insert(sorted_desc(w));
            }
        }
        let mut out = HashMap::with_capacity(targets.len());
        for w in targets {
            let mut acc = Int::ZERO;
            for s in subsets {
                if s.iter().any(|&j| w[j] == 0) {
                    continue;
                }
                let mut v = w.clone();
                for &j in s {
                    v[j] -= 1;
                }
                if let Some(c) = base.get(&sorted_desc(v)) {
                    acc += c;
                }
            }
            if !acc.is_zero() {
                out.insert(w, acc);
            }
        }
        out
    }
}

/// Rewrites a polynomial symmetric in `l_1, …, l_n` (with arbitrary other
/// variables treated as coefficients) in terms of `c_1, …, c_n`.
///
/// Classical leading-term elimination: the lex-leading monomial `l^λ` of a
/// symmetric polynomial is cancelled by `∏ e_i^{λ_i − λ_{i+1}}`, and the
/// leading monomial strictly decreases at every step.
pub fn symmetric_to_chern(p: &Polynomial, n: usize) -> Result<Polynomial, SymchernError> {
    if !is_symmetric(p, n) {
        return Err(SymchernError::NotSymmetric { n, poly: p.to_string() });
    }
    let mut groups: BTreeMap<Monomial, BTreeMap<Dense, Int>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (roots, rest) = m.split_roots();
        let mut dense = vec![0u32; n];
        for &(v, e) in roots.iter() {
            if let Var::L(i) = v {
                dense[i as usize - 1] = e;
            }
        }
        if is_dominant(&dense) {
            groups.entry(rest).or_default().insert(dense, c.clone());
        }
    }
    let mut products = ElementaryProducts::new(n);
    let mut out = Vec::new();
    for (rest, mut residual) in groups {
        while let Some((lambda, a)) = residual.pop_last() {
            let mu: Vec<u32> = (0..n).map(|i| lambda[i] - lambda.get(i + 1).copied().unwrap_or(0)).collect();
            for (w, coef) in products.get(&mu) {
                if *w == lambda {
                    debug_assert!(coef.is_one());
                    continue;
                }
                let entry = residual.entry(w.clone()).or_insert(Int::ZERO);
                *entry -= &a * coef;
                if entry.is_zero() {
                    residual.remove(w);
                }
            }
            let odd = mu.iter().enumerate().filter(|(i, _)| i % 2 == 0).map(|(_, m)| m).sum::<u32>() % 2 == 1;
            let chern = Monomial::from_pairs(mu.iter().enumerate().map(|(i, &m)| (Var::C(i as u16 + 1), m)));
            out.push((rest.mul(&chern), if odd { -a } else { a }));
        }
    }
    Ok(Polynomial::from_terms(out))
}

/// `∏_{m ∈ roots(V)} (var + m)`, expanded in the root variables.
pub fn total_chern_poly(v: &RepRoots, var: Var) -> Polynomial {
    let x = Polynomial::var(var);
    let factors: Vec<Polynomial> = v.roots.iter().map(|m| &x + m).collect();
    product(&factors)
}

/// Same class as `symmetric_to_chern(total_chern_poly(v, var))`, computed one
/// Weyl orbit at a time so the full product is never expanded in the roots.
pub fn total_chern_poly_in_chern(v: &RepRoots, var: Var) -> Result<Polynomial, SymchernError> {
    let x = Polynomial::var(var);
    let mut acc = Polynomial::one();
    for orbit in v.weyl_orbits() {
        let factors: Vec<Polynomial> = orbit.iter().map(|&i| &x + &v.roots[i]).collect();
        acc = &acc * &symmetric_to_chern(&product(&factors), v.n)?;
    }
    Ok(acc)
}

/// Top Chern class of `det^k ⊗ ∧²E*` in `c_1, …, c_n`.
pub fn e_top(n: usize, k: i64) -> Result<Polynomial, SymchernError> {
    let roots = build_roots(n, &ModuleDescriptor::twisted(k, BaseModule::Wedge2Dual))?;
    symmetric_to_chern(&product(roots.roots()), n)
}
