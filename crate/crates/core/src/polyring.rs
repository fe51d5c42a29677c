//! Sparse multivariate polynomials over the rationals, degrevlex orders,
//! normal forms and Buchberger's algorithm.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::intlinalg::{RatMatrix, Rational};

/// Default cap on the number of S-pair reductions in one Gröbner computation.
pub const DEFAULT_BUDGET: usize = 200_000;

/// Default cap on the number of standard monomials enumerated.
pub const DEFAULT_MONOMIAL_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable universe mismatch: {0} vs {1}")]
    UniverseMismatch(usize, usize),
    #[error("Gröbner computation exceeded the budget of {0} pair reductions")]
    BudgetExceeded(usize),
    #[error("no generators given")]
    EmptyInput,
    #[error("quotient is not finite-dimensional (variable {0:?} has no pure-power leading monomial)")]
    InfiniteDimension(Option<usize>),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// A monomial with sparse exponents, sorted by variable, no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: usize) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(v, &e)| (v, e)).collect())
    }

    pub fn from_pairs(mut pairs: Vec<(usize, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut out: Vec<(usize, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    /// Squarefree product of the given variables.
    pub fn product_of(vars: impl IntoIterator<Item = usize>) -> Self {
        Self::from_pairs(vars.into_iter().map(|v| (v, 1)).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: usize) -> u32 {
        self.0.binary_search_by_key(&v, |&(var, _)| var).map_or(0, |i| self.0[i].1)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.0.last().map(|&(v, _)| v)
    }

    /// `Some(v)` when the monomial is a pure power of variable `v`.
    pub fn pure_power_var(&self) -> Option<usize> {
        match self.0.as_slice() {
            [(v, _)] => Some(*v),
            _ => None,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        merge(&self.0, &other.0, |a, b| a + b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        merge(&self.0, &other.0, u32::max)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }

    /// True if `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        let mut j = 0;
        for &(v, e) in &self.0 {
            while j < other.0.len() && other.0[j].0 < v {
                j += 1;
            }
            if j == other.0.len() || other.0[j].0 != v || other.0[j].1 < e {
                return false;
            }
        }
        true
    }

    /// `self / divisor`, if exact.
    pub fn div(&self, divisor: &Monomial) -> Option<Monomial> {
        if !divisor.divides(self) {
            return None;
        }
        let mut out = Vec::with_capacity(self.0.len());
        for &(v, e) in &self.0 {
            let d = e - divisor.exponent(v);
            if d > 0 {
                out.push((v, d));
            }
        }
        Some(Monomial(out))
    }

    pub fn render(&self, names: &VarNames) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&(v, e)| if e == 1 { names.name(v) } else { format!("{}^{}", names.name(v), e) })
            .collect::<Vec<_>>()
            .join("*")
    }
}

fn merge(a: &[(usize, u32)], b: &[(usize, u32)], f: impl Fn(u32, u32) -> u32) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, f(a[i].1, b[j].1)));
            i += 1;
            j += 1;
        }
    }
    Monomial(out)
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&VarNames::X))
    }
}

/// Graded reverse lexicographic order with a declared variable priority.
///
/// `priority[0]` is the largest variable. Ties in total degree are broken at
/// the lowest-priority variable whose exponents differ: the monomial with the
/// smaller exponent there is the larger one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    priority: Vec<usize>,
}

impl MonomialOrder {
    pub fn degrevlex(nvars: usize) -> Self {
        MonomialOrder { priority: (0..nvars).collect() }
    }

    /// Returns `None` unless `priority` is a permutation of `0..len`.
    pub fn with_priority(priority: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; priority.len()];
        for &v in &priority {
            if v >= seen.len() || std::mem::replace(&mut seen[v], true) {
                return None;
            }
        }
        Some(MonomialOrder { priority })
    }

    pub fn nvars(&self) -> usize {
        self.priority.len()
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        a.degree().cmp(&b.degree()).then_with(|| {
            for &v in self.priority.iter().rev() {
                let (ea, eb) = (a.exponent(v), b.exponent(v));
                if ea != eb {
                    return eb.cmp(&ea);
                }
            }
            Ordering::Equal
        })
    }
}

/// How variables are printed and parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarNames {
    /// `x0, x1, ...`
    X,
    /// `y1..yn` followed by their inverses `w1..wn`.
    Laurent(usize),
    Custom(Vec<String>),
}

impl VarNames {
    pub fn name(&self, v: usize) -> String {
        match self {
            VarNames::X => format!("x{v}"),
            VarNames::Laurent(n) if v < *n => format!("y{}", v + 1),
            VarNames::Laurent(n) => format!("w{}", v - n + 1),
            VarNames::Custom(names) => names[v].clone(),
        }
    }

    pub fn resolve(&self, name: &str, nvars: usize) -> Option<usize> {
        let idx = match self {
            VarNames::X => name.strip_prefix('x')?.parse::<usize>().ok()?,
            VarNames::Laurent(n) => {
                let (base, k) =
                    if let Some(rest) = name.strip_prefix('y') { (0, rest) } else { (*n, name.strip_prefix('w')?) };
                let k: usize = k.parse().ok()?;
                if k == 0 || k > *n {
                    return None;
                }
                base + k - 1
            }
            VarNames::Custom(names) => names.iter().position(|s| s == name)?,
        };
        (idx < nvars).then_some(idx)
    }
}

/// Polynomial with exact rational coefficients in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(nvars, Monomial::one(), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn term(nvars: usize, m: Monomial, c: Rational) -> Self {
        debug_assert!(m.max_var().is_none_or(|v| v < nvars));
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { nvars, terms }
    }

    pub fn monomial(nvars: usize, m: Monomial) -> Self {
        Self::term(nvars, m, Rational::one())
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        Self::monomial(nvars, Monomial::var(v))
    }

    /// `1 - x_v`
    pub fn one_minus_var(nvars: usize, v: usize) -> Self {
        &Self::one(nvars) - &Self::var(nvars, v)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn leading_monomial(&self, order: &MonomialOrder) -> Option<&Monomial> {
        self.leading_term(order).map(|(m, _)| m)
    }

    /// Same polynomial viewed in a ring with `nvars` variables.
    pub fn with_nvars(&self, nvars: usize) -> Option<Poly> {
        if self.terms.keys().any(|m| m.max_var().is_some_and(|v| v >= nvars)) {
            return None;
        }
        Some(Poly { nvars, terms: self.terms.clone() })
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * m * other`
    fn add_scaled(&mut self, c: &Rational, m: &Monomial, other: &Poly) {
        for (om, oc) in &other.terms {
            self.add_term(m.mul(om), c * oc);
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn make_monic(&self, order: &MonomialOrder) -> Poly {
        match self.leading_term(order) {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_universe(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_universe(other)?;
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_scaled(c, m, other);
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    fn check_universe(&self, other: &Poly) -> Result<(), PolyError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(PolyError::UniverseMismatch(self.nvars, other.nvars))
        }
    }

    /// Substitutes `images[v]` for each variable `v`, calling `reduce` after
    /// every multiplication to keep intermediate results small.
    pub fn substitute(&self, images: &[Poly], reduce: &dyn Fn(Poly) -> Poly) -> Result<Poly, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::UniverseMismatch(self.nvars, images.len()));
        }
        let target = images.first().map_or(0, Poly::nvars);
        if let Some(bad) = images.iter().find(|p| p.nvars != target) {
            return Err(PolyError::UniverseMismatch(target, bad.nvars));
        }
        let mut powers: BTreeMap<(usize, u32), Poly> = BTreeMap::new();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (v, e) in m.iter() {
                let p = match powers.get(&(v, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let mut acc = Poly::one(target);
                        for _ in 0..e {
                            acc = reduce(&acc * &images[v]);
                        }
                        powers.insert((v, e), acc.clone());
                        acc
                    }
                };
                t = reduce(&t * &p);
            }
            out = &out + &t;
        }
        Ok(reduce(out))
    }

    /// Renders terms in decreasing order, coefficients as `p/q`.
    pub fn render(&self, order: &MonomialOrder, names: &VarNames) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| order.cmp(b.0, a.0));
        let mut s = String::new();
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            let a = c.abs();
            if m.is_one() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&m.render(names));
            } else {
                s.push_str(&format!("{}*{}", a, m.render(names)));
            }
        }
        s
    }

    /// Parses sums of products of rationals, variables, powers `^k` and
    /// parenthesised subexpressions. Accepts everything [`Poly::render`] emits.
    pub fn parse(text: &str, nvars: usize, names: &VarNames) -> Result<Poly, PolyError> {
        let tokens: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if tokens.is_empty() {
            return Err(PolyError::Parse("empty input".into()));
        }
        let mut parser = Parser { s: &tokens, pos: 0, nvars, names, text };
        let p = parser.expr()?;
        if parser.pos != tokens.len() {
            return Err(parser.error("unexpected character"));
        }
        Ok(p)
    }
}

struct Parser<'a> {
    s: &'a [char],
    pos: usize,
    nvars: usize,
    names: &'a VarNames,
    text: &'a str,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> PolyError {
        PolyError::Parse(format!("{what} at offset {} in {:?}", self.pos, self.text))
    }

    fn peek(&self) -> Option<char> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        let hit = self.peek() == Some(c);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, PolyError> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        let base = self.atom()?;
        if self.eat('^') {
            let k = self.digits().ok_or_else(|| self.error("expected exponent"))?;
            let k: u32 = k.parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.s[start..self.pos].iter().collect())
    }

    fn atom(&mut self) -> Result<Poly, PolyError> {
        if self.eat('(') {
            let inner = self.expr()?;
            if !self.eat(')') {
                return Err(self.error("expected ')'"));
            }
            return Ok(inner);
        }
        if let Some(num) = self.digits() {
            let mut lit = num;
            if self.eat('/') {
                let den = self.digits().ok_or_else(|| self.error("expected denominator"))?;
                lit = format!("{lit}/{den}");
            }
            let c = parse_rational(&lit).map_err(PolyError::Parse)?;
            return Ok(Poly::constant(self.nvars, c));
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a term"));
        }
        let name: String = self.s[start..self.pos].iter().collect();
        let v = self
            .names
            .resolve(&name, self.nvars)
            .ok_or_else(|| PolyError::Parse(format!("unknown variable {name:?}")))?;
        Ok(Poly::var(self.nvars, v))
    }
}

/// Parses `p`, `-p` or `p/q` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let bad = || format!("bad rational {s:?}");
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&MonomialOrder::degrevlex(self.nvars), &VarNames::X))
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomial universes differ")
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_add(&-rhs).expect("polynomial universes differ")
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomial universes differ")
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

pub fn poly_add(a: &Poly, b: &Poly) -> Result<Poly, PolyError> {
    a.try_add(b)
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Result<Poly, PolyError> {
    a.try_mul(b)
}

pub fn poly_pow(a: &Poly, k: u32) -> Poly {
    a.pow(k)
}

/// Full normal form of `p` modulo the list `gens`: no term of the result is
/// divisible by a leading monomial of `gens`. The first divisor in list order
/// is used at every step.
pub fn reduce(p: &Poly, gens: &[Poly], order: &MonomialOrder) -> Poly {
    let leads: Vec<(Monomial, Rational)> =
        gens.iter().filter_map(|g| g.leading_term(order).map(|(m, c)| (m.clone(), c.clone()))).collect();
    let divisors: Vec<&Poly> = gens.iter().filter(|g| !g.is_zero()).collect();
    reduce_with(p, &divisors, &leads, order)
}

fn reduce_with(p: &Poly, gens: &[&Poly], leads: &[(Monomial, Rational)], order: &MonomialOrder) -> Poly {
    let mut rest = p.clone();
    let mut out = Poly::zero(p.nvars);
    while let Some((m, c)) = rest.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(k) => {
                let (lm, lc) = &leads[k];
                let q = m.div(lm).expect("divisibility checked");
                let f = -(&c / lc);
                rest.add_scaled(&f, &q, gens[k]);
            }
            None => {
                rest.terms.remove(&m);
                out.terms.insert(m, c);
            }
        }
    }
    out
}

pub fn s_polynomial(f: &Poly, g: &Poly, order: &MonomialOrder) -> Poly {
    let (fm, fc) = f.leading_term(order).expect("nonzero f");
    let (gm, gc) = g.leading_term(order).expect("nonzero g");
    let l = fm.lcm(gm);
    let mut s = Poly::zero(f.nvars);
    s.add_scaled(&fc.recip(), &l.div(fm).unwrap(), f);
    s.add_scaled(&-gc.recip(), &l.div(gm).unwrap(), g);
    s
}

/// A reduced Gröbner basis: monic, autoreduced, sorted by increasing
/// leading monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    generators: Vec<Poly>,
    order: MonomialOrder,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn nvars(&self) -> usize {
        self.order.nvars()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators.iter().filter_map(|g| g.leading_monomial(&self.order).cloned()).collect()
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        reduce(p, &self.generators, &self.order)
    }

    /// The unit ideal.
    pub fn is_trivial(&self) -> bool {
        self.generators.iter().any(|g| !g.is_zero() && g.is_constant())
    }

    /// Checks Buchberger's criterion on all pairs plus the reducedness
    /// invariants.
    pub fn verify(&self) -> bool {
        let g = &self.generators;
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                if !self.reduce(&s_polynomial(&g[i], &g[j], &self.order)).is_zero() {
                    return false;
                }
            }
        }
        let leads = self.leading_monomials();
        for (i, p) in g.iter().enumerate() {
            let Some((_, c)) = p.leading_term(&self.order) else { return false };
            if !c.is_one() {
                return false;
            }
            for (j, lm) in leads.iter().enumerate() {
                if i != j && p.terms().any(|(m, _)| lm.divides(m)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn render(&self, names: &VarNames) -> Vec<String> {
        self.generators.iter().map(|g| g.render(&self.order, names)).collect()
    }
}

/// Buchberger's algorithm with the normal selection strategy and both of
/// Buchberger's criteria. `budget` caps the number of S-pair reductions.
pub fn buchberger(gens: &[Poly], order: &MonomialOrder, budget: usize) -> Result<GroebnerBasis, PolyError> {
    if gens.is_empty() {
        return Err(PolyError::EmptyInput);
    }
    let nvars = order.nvars();
    if let Some(bad) = gens.iter().find(|g| g.nvars != nvars) {
        return Err(PolyError::UniverseMismatch(nvars, bad.nvars));
    }

    let mut basis: Vec<Poly> = Vec::new();
    let mut leads: Vec<Monomial> = Vec::new();
    for g in gens {
        let r = reduce(g, &basis, order);
        if !r.is_zero() {
            let r = r.make_monic(order);
            leads.push(r.leading_monomial(order).unwrap().clone());
            basis.push(r);
        }
    }

    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }
    let key = |i: usize, j: usize| if i < j { (i, j) } else { (j, i) };

    let mut steps = 0usize;
    loop {
        let next = pending
            .iter()
            .min_by(|&&(a, b), &&(c, d)| {
                order.cmp(&leads[a].lcm(&leads[b]), &leads[c].lcm(&leads[d])).then((a, b).cmp(&(c, d)))
            })
            .copied();
        let Some((i, j)) = next else { break };
        pending.remove(&(i, j));

        if leads[i].is_coprime(&leads[j]) {
            continue;
        }
        let l = leads[i].lcm(&leads[j]);
        let chain = (0..basis.len()).any(|k| {
            k != i && k != j && leads[k].divides(&l) && !pending.contains(&key(i, k)) && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }

        steps += 1;
        if steps > budget {
            return Err(PolyError::BudgetExceeded(budget));
        }
        let r = reduce(&s_polynomial(&basis[i], &basis[j], order), &basis, order);
        if !r.is_zero() {
            let r = r.make_monic(order);
            let t = basis.len();
            leads.push(r.leading_monomial(order).unwrap().clone());
            basis.push(r);
            for k in 0..t {
                pending.insert((k, t));
            }
        }
    }

    // minimal basis: drop anything whose leading monomial is divisible by another's
    let keep: Vec<usize> = (0..basis.len())
        .filter(|&i| {
            !(0..basis.len()).any(|j| j != i && leads[j].divides(&leads[i]) && (leads[j] != leads[i] || j < i))
        })
        .collect();
    let minimal: Vec<Poly> = keep.iter().map(|&i| basis[i].clone()).collect();
    let mut reduced: Vec<Poly> = (0..minimal.len())
        .map(|i| {
            let others: Vec<Poly> =
                minimal.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect();
            reduce(&minimal[i], &others, order).make_monic(order)
        })
        .collect();
    reduced.sort_by(|a, b| order.cmp(a.leading_monomial(order).unwrap(), b.leading_monomial(order).unwrap()));

    let gb = GroebnerBasis { generators: reduced, order: order.clone() };
    debug_assert!(gb.verify());
    Ok(gb)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StandardMonomials {
    Finite(Vec<Monomial>),
    /// The quotient is infinite-dimensional. Carries the escaping variable
    /// when one lacks a pure-power leading monomial; `None` means the
    /// enumeration hit its cap.
    Infinite(Option<usize>),
}

/// Monomials outside the leading-monomial ideal, in increasing order.
pub fn standard_monomials(gb: &GroebnerBasis, cap: usize) -> StandardMonomials {
    let leads = gb.leading_monomials();
    if leads.iter().any(Monomial::is_one) {
        return StandardMonomials::Finite(Vec::new());
    }
    for v in 0..gb.nvars() {
        if !leads.iter().any(|m| m.pure_power_var() == Some(v)) {
            return StandardMonomials::Infinite(Some(v));
        }
    }
    let is_standard = |m: &Monomial| !leads.iter().any(|l| l.divides(m));
    let mut found: BTreeSet<Monomial> = BTreeSet::new();
    let mut frontier = vec![Monomial::one()];
    found.insert(Monomial::one());
    while let Some(m) = frontier.pop() {
        for v in 0..gb.nvars() {
            let next = m.mul(&Monomial::var(v));
            if is_standard(&next) && found.insert(next.clone()) {
                if found.len() > cap {
                    return StandardMonomials::Infinite(None);
                }
                frontier.push(next);
            }
        }
    }
    let mut out: Vec<Monomial> = found.into_iter().collect();
    out.sort_by(|a, b| gb.order.cmp(a, b));
    StandardMonomials::Finite(out)
}

/// A finite-dimensional quotient `Q[x]/I` with its standard-monomial basis.
#[derive(Debug, Clone)]
pub struct QuotientRing {
    generators: Vec<Poly>,
    gb: GroebnerBasis,
    basis: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
}

impl QuotientRing {
    pub fn new(generators: Vec<Poly>, order: &MonomialOrder, budget: usize) -> Result<Self, PolyError> {
        let gb = buchberger(&generators, order, budget)?;
        let basis = match standard_monomials(&gb, DEFAULT_MONOMIAL_CAP) {
            StandardMonomials::Finite(b) => b,
            StandardMonomials::Infinite(v) => return Err(PolyError::InfiniteDimension(v)),
        };
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(QuotientRing { generators, gb, basis, index })
    }

    pub fn nvars(&self) -> usize {
        self.gb.nvars()
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn groebner_basis(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn order(&self) -> &MonomialOrder {
        self.gb.order()
    }

    pub fn standard_monomials(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn normal_form(&self, p: &Poly) -> Poly {
        self.gb.reduce(p)
    }

    pub fn is_zero(&self, p: &Poly) -> bool {
        self.normal_form(p).is_zero()
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.normal_form(&(a * b))
    }

    /// Coordinates of the normal form of `p` in the standard-monomial basis.
    pub fn coordinates(&self, p: &Poly) -> Vec<Rational> {
        let nf = self.normal_form(p);
        let mut out = vec![Rational::zero(); self.basis.len()];
        for (m, c) in nf.terms() {
            out[self.index[m]] = c.clone();
        }
        out
    }

    pub fn from_coordinates(&self, coords: &[Rational]) -> Poly {
        let mut p = Poly::zero(self.nvars());
        for (m, c) in self.basis.iter().zip(coords) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    /// Matrix of multiplication by `p`; column `k` holds the coordinates of
    /// `p * s_k`.
    pub fn multiplication_matrix(&self, p: &Poly) -> RatMatrix {
        let q = self.dim();
        let mut m = RatMatrix::zeros(q, q);
        for (k, s) in self.basis.iter().enumerate() {
            let prod = self.mul(p, &Poly::monomial(self.nvars(), s.clone()));
            for (i, c) in self.coordinates(&prod).into_iter().enumerate() {
                m[(i, k)] = c;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str, n: usize) -> Poly {
        Poly::parse(s, n, &VarNames::X).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p("1 - x1", 2) * &p("1 + x1", 2), p("1 - x1^2", 2));
        assert_eq!(p("1 - x1", 2).pow(2), p("1 - 2*x1 + x1^2", 2));
        let a = p("3/2*x0*x1 - x1 + 7", 2);
        assert!((&a + &-&a).is_zero());
        assert_eq!(poly_add(&p("x0", 1), &p("x0", 2)), Err(PolyError::UniverseMismatch(1, 2)));
    }

    #[test]
    fn degrevlex_order() {
        let o = MonomialOrder::degrevlex(3);
        let m = |e: &[u32]| Monomial::from_exponents(e);
        // x0*x2 < x1^2 in degrevlex
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        assert_eq!(o.cmp(&m(&[2, 0, 0]), &m(&[1, 1, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 0, 3]), &m(&[1, 0, 0])), Ordering::Greater);
        let rev = MonomialOrder::with_priority(vec![2, 1, 0]).unwrap();
        assert_eq!(rev.cmp(&m(&[1, 0, 0]), &m(&[0, 0, 1])), Ordering::Less);
        assert!(MonomialOrder::with_priority(vec![0, 0, 1]).is_none());
    }

    #[test]
    fn render_and_parse() {
        let o = MonomialOrder::degrevlex(3);
        let a = p("-1/2*x0^2*x2 + x1 - 3", 3);
        assert_eq!(a.render(&o, &VarNames::X), "-1/2*x0^2*x2 + x1 - 3");
        assert_eq!(Poly::parse(&a.render(&o, &VarNames::X), 3, &VarNames::X).unwrap(), a);
        let l = Poly::parse("y1*w1 - 1", 2, &VarNames::Laurent(1)).unwrap();
        assert_eq!(l.render(&MonomialOrder::degrevlex(2), &VarNames::Laurent(1)), "y1*w1 - 1");
        assert!(Poly::parse("x0 + ", 1, &VarNames::X).is_err());
        assert!(Poly::parse("x7", 2, &VarNames::X).is_err());
        assert!(Poly::parse("1/0", 1, &VarNames::X).is_err());
    }

    #[test]
    fn reduce_examples() {
        let o = MonomialOrder::degrevlex(2);
        assert!(reduce(&p("x0^2", 2), &[p("x0^2", 2)], &o).is_zero());
        assert_eq!(reduce(&p("x0*x1 + x1", 2), &[p("x0*x1", 2)], &o), p("x1", 2));
    }

    #[test]
    fn buchberger_examples() {
        let o = MonomialOrder::degrevlex(2);
        let gb = buchberger(&[p("x0^2", 2), p("x0*x1", 2)], &o, DEFAULT_BUDGET).unwrap();
        assert_eq!(gb.generators(), &[p("x0*x1", 2), p("x0^2", 2)]);
        assert_eq!(standard_monomials(&gb, 100), StandardMonomials::Infinite(Some(1)));

        let gb = buchberger(&[p("x0 - x1", 2), p("x1^2", 2)], &o, DEFAULT_BUDGET).unwrap();
        assert!(gb.verify());
        let leads = gb.leading_monomials();
        assert_eq!(leads, vec![Monomial::var(0), Monomial::from_exponents(&[0, 2])]);
        assert_eq!(standard_monomials(&gb, 100), StandardMonomials::Finite(vec![Monomial::one(), Monomial::var(1)]));

        let gb = buchberger(&[p("2*x0^2 + 4*x1", 2)], &o, DEFAULT_BUDGET).unwrap();
        assert_eq!(gb.generators(), &[p("x0^2 + 2*x1", 2)]);

        let gb = buchberger(&[p("x0^2", 1)], &MonomialOrder::degrevlex(1), DEFAULT_BUDGET).unwrap();
        assert_eq!(standard_monomials(&gb, 100), StandardMonomials::Finite(vec![Monomial::one(), Monomial::var(0)]));
        assert_eq!(buchberger(&[], &o, 10), Err(PolyError::EmptyInput));
    }

    #[test]
    fn budget_is_enforced() {
        let o = MonomialOrder::degrevlex(3);
        let gens = [p("x0^2 - x1*x2", 3), p("x1^2 - x0*x2", 3), p("x2^2 - x0*x1 + x0", 3)];
        assert_eq!(buchberger(&gens, &o, 0), Err(PolyError::BudgetExceeded(0)));
        assert!(buchberger(&gens, &o, DEFAULT_BUDGET).unwrap().verify());
    }

    #[test]
    fn membership_of_inputs() {
        let o = MonomialOrder::degrevlex(3);
        let gens = [p("x0*x1 - x2", 3), p("x1^2 - x0", 3), p("x2^3 - 1", 3)];
        let gb = buchberger(&gens, &o, DEFAULT_BUDGET).unwrap();
        for g in &gens {
            assert!(gb.reduce(g).is_zero());
        }
    }

    #[test]
    fn quotient_multiplication_matrix() {
        // Q[x]/(x^2 - 2): multiplication by x squares to 2
        let ring = QuotientRing::new(vec![p("x0^2 - 2", 1)], &MonomialOrder::degrevlex(1), DEFAULT_BUDGET).unwrap();
        let m = ring.multiplication_matrix(&p("x0", 1));
        let sq = m.mul(&m).unwrap();
        let mut two = RatMatrix::identity(2);
        two[(0, 0)] = q(2, 1);
        two[(1, 1)] = q(2, 1);
        assert_eq!(sq, two);
    }

    fn small_poly(nvars: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((prop::collection::vec(0u32..=2, nvars), -3i64..=3), 0..5).prop_map(move |ts| {
            let mut out = Poly::zero(nvars);
            for (e, c) in ts {
                out.add_term(Monomial::from_exponents(&e), Rational::from_integer(c.into()));
            }
            out
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gb_postconditions(gens in prop::collection::vec(small_poly(3), 1..4)) {
            prop_assume!(gens.iter().any(|g| !g.is_zero()));
            let o = MonomialOrder::degrevlex(3);
            let gb = buchberger(&gens, &o, DEFAULT_BUDGET).unwrap();
            prop_assert!(gb.verify());
            for g in &gens {
                prop_assert!(gb.reduce(g).is_zero());
            }
        }

        #[test]
        fn normal_form_is_idempotent_and_multiplicative(a in small_poly(3), b in small_poly(3)) {
            let o = MonomialOrder::degrevlex(3);
            let gens = [p("x0^2 - x1", 3), p("x1^2 - x2", 3), p("x2^2", 3)];
            let gb = buchberger(&gens, &o, DEFAULT_BUDGET).unwrap();
            let ra = gb.reduce(&a);
            prop_assert_eq!(gb.reduce(&ra), ra.clone());
            let rb = gb.reduce(&b);
            prop_assert_eq!(gb.reduce(&(&a * &b)), gb.reduce(&(&ra * &rb)));
        }

        #[test]
        fn render_parse_roundtrip(a in small_poly(4)) {
            let o = MonomialOrder::degrevlex(4);
            prop_assert_eq!(Poly::parse(&a.render(&o, &VarNames::X), 4, &VarNames::X).unwrap(), a);
        }
    }
}
