//! Multivariate formal power series over exact rationals, truncated by total degree.
//!
//! A [`Ring`] fixes the ordered variable names, optional aliases (derived
//! symbols such as `p = w·y_1⋯y_{N-1}`) and the truncation degree `D`. A
//! [`Series`] stores only nonzero coefficients of monomials of total degree
//! at most `D`; every operation re-truncates.
//!
//! Factors with negative exponents never enter a [`Series`]. They are split by
//! [`expand_linear_factor`] into a [`LaurentPrefix`] and a unit series, and the
//! prefixes must cancel in [`finalize`].

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::{format_rational, Error, Rational, Result};

/// Exponent vector aligned with the variables of a [`Ring`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.0.iter().map(|&e| e as i64).collect()
    }

    /// `Some` only when every exponent is nonnegative.
    pub fn from_signed(exps: &[i64]) -> Option<Monomial> {
        exps.iter()
            .map(|&e| u32::try_from(e).ok())
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

/// Ordered formal variables plus named aliases for derived monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSet {
    names: Vec<String>,
    aliases: BTreeMap<String, Monomial>,
}

impl VariableSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::Invalid(format!("duplicate variable name {a}")));
            }
        }
        Ok(VariableSet {
            names,
            aliases: BTreeMap::new(),
        })
    }

    pub fn with_alias(mut self, name: &str, mono: Monomial) -> Result<Self> {
        if mono.0.len() != self.names.len() {
            return Err(Error::Invalid(format!("alias {name} has wrong arity")));
        }
        if self.names.iter().any(|n| n == name) {
            return Err(Error::Invalid(format!("alias {name} shadows a variable")));
        }
        self.aliases.insert(name.to_string(), mono);
        Ok(self)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn alias(&self, name: &str) -> Option<&Monomial> {
        self.aliases.get(name)
    }
}

/// Variable set together with the total-degree truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    pub vars: VariableSet,
    pub degree: u32,
}

impl Ring {
    pub fn new(vars: VariableSet, degree: u32) -> Arc<Ring> {
        Arc::new(Ring { vars, degree })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// The monomial consisting of a single variable.
    pub fn var(&self, name: &str) -> Result<Monomial> {
        let idx = self
            .vars
            .index_of(name)
            .ok_or_else(|| Error::Invalid(format!("unknown variable {name}")))?;
        let mut e = vec![0; self.nvars()];
        e[idx] = 1;
        Ok(Monomial(e))
    }

    /// Alias lookup, falling back to plain variables.
    pub fn symbol(&self, name: &str) -> Result<Monomial> {
        match self.vars.alias(name) {
            Some(m) => Ok(m.clone()),
            None => self.var(name),
        }
    }

    /// Number of monomials of total degree at most `D`.
    pub fn monomial_count(&self) -> u64 {
        // binom(n + D, D)
        let (n, d) = (self.nvars() as u64, self.degree as u64);
        (1..=d).fold(1u64, |acc, k| acc * (n + k) / k)
    }

    /// Every monomial of total degree at most `D`, lexicographic.
    pub fn monomials(&self) -> Vec<Monomial> {
        fn rec(idx: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if idx == cur.len() {
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[idx] = e;
                rec(idx + 1, left - e, cur, out);
            }
            cur[idx] = 0;
        }
        let mut out = Vec::new();
        rec(0, self.degree, &mut vec![0; self.nvars()], &mut out);
        out
    }
}

/// Truncated series: nonzero coefficients only, all monomials within the truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Series {
    pub fn zero(ring: &Arc<Ring>) -> Series {
        Series {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Series {
        Series::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Rational) -> Series {
        Series::term(ring, Monomial::one(ring.nvars()), c)
    }

    /// `c·mono`, or zero if the monomial exceeds the truncation.
    pub fn term(ring: &Arc<Ring>, mono: Monomial, c: Rational) -> Series {
        assert_eq!(mono.0.len(), ring.nvars(), "monomial arity");
        let mut s = Series::zero(ring);
        if !c.is_zero() && mono.degree() <= ring.degree {
            s.terms.insert(mono, c);
        }
        s
    }

    /// Collect terms, merging duplicates and dropping zeros and over-degree monomials.
    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Series {
        let mut s = Series::zero(ring);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    fn add_term(&mut self, mono: Monomial, c: Rational) {
        if c.is_zero() || mono.degree() > self.ring.degree {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.ring.nvars()))
    }

    fn check_ring(&self, other: &Series) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!(
                "{:?}/D={} vs {:?}/D={}",
                self.ring.vars.names(),
                self.ring.degree,
                other.ring.vars.names(),
                other.ring.degree
            )))
        }
    }

    pub fn checked_add(&self, other: &Series) -> Result<Series> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Series) -> Result<Series> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Series) -> Result<Series> {
        self.check_ring(other)?;
        let degree = self.ring.degree;
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb) in &other.terms {
                if da + mb.degree() > degree {
                    continue;
                }
                let prod = ca * cb;
                acc.entry(ma.mul(mb))
                    .and_modify(|c| *c += &prod)
                    .or_insert(prod);
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Series {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn scale(&self, c: &Rational) -> Series {
        if c.is_zero() {
            return Series::zero(&self.ring);
        }
        Series {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Multiply by a monomial (over-degree terms fall off).
    pub fn shift(&self, mono: &Monomial) -> Series {
        Series::from_terms(
            &self.ring,
            self.terms.iter().map(|(m, c)| (m.mul(mono), c.clone())),
        )
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut result = Series::one(&self.ring);
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

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn invert_unit(&self) -> Result<Series> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NonUnit);
        }
        let inv0 = c0.recip();
        // a = c0 (1 - r)  =>  1/a = inv0 Σ r^k
        let mut r = self.scale(&-inv0.clone());
        r.terms.remove(&Monomial::one(self.ring.nvars()));
        let mut sum = Series::one(&self.ring);
        let mut power = Series::one(&self.ring);
        for _ in 0..self.ring.degree {
            power = &power * &r;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(sum.scale(&inv0))
    }

    /// `Σ a^k / k!` for a series with zero constant term.
    pub fn exp_series(&self) -> Result<Series> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut sum = Series::one(&self.ring);
        let mut power = Series::one(&self.ring);
        for k in 1..=self.ring.degree {
            power = (&power * self).scale(&Rational::from_integer(k.into()).recip());
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(sum)
    }

    /// `log(a)` for a series with constant term 1.
    pub fn log_series(&self) -> Result<Series> {
        if !self.constant_term().is_one() {
            return Err(Error::Invalid("log needs constant term 1".into()));
        }
        let r = self - &Series::one(&self.ring);
        let mut sum = Series::zero(&self.ring);
        let mut power = Series::one(&self.ring);
        for k in 1..=self.ring.degree {
            power = &power * &r;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            sum = &sum + &power.scale(&Rational::new(sign.into(), (k as i64).into()));
        }
        Ok(sum)
    }

    /// Rewrite every coefficient through `f(monomial, coefficient)`.
    pub fn map_coefficients(&self, f: impl Fn(&Monomial, &Rational) -> Rational) -> Series {
        Series::from_terms(
            &self.ring,
            self.terms.iter().map(|(m, c)| (m.clone(), f(m, c))),
        )
    }

    /// Keep the terms whose monomial satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Series {
        Series {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Re-embed into another ring through a monomial map; terms mapped to `None` are dropped.
    pub fn remap(&self, target: &Arc<Ring>, f: impl Fn(&Monomial) -> Option<Monomial>) -> Series {
        Series::from_terms(
            target,
            self.terms
                .iter()
                .filter_map(|(m, c)| f(m).map(|mm| (mm, c.clone()))),
        )
    }

    /// Sum of many series in one pass.
    pub fn sum<'a>(ring: &Arc<Ring>, items: impl IntoIterator<Item = &'a Series>) -> Series {
        let mut out = Series::zero(ring);
        for s in items {
            assert!(*s.ring == **ring, "ring mismatch in sum");
            for (m, c) in &s.terms {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Canonical golden-file text: a header with the variable names and the
    /// truncation degree, then one `e1 e2 … ek : num/den` line per term in
    /// lexicographic exponent order.
    pub fn to_canonical_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "vars {} degree {}",
            self.ring.vars.names().join(" "),
            self.ring.degree
        );
        for (m, c) in &self.terms {
            let exps: Vec<String> = m.0.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{} : {}", exps.join(" "), format_rational(c));
        }
        out
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = self.ring.vars.names();
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({})", format_rational(c))?;
            for (name, &e) in names.iter().zip(&m.0) {
                match e {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;
    fn add(self, rhs: &'a Series) -> Series {
        self.checked_add(rhs).expect("series ring mismatch")
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, rhs: &'a Series) -> Series {
        self.checked_sub(rhs).expect("series ring mismatch")
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    fn mul(self, rhs: &'a Series) -> Series {
        self.checked_mul(rhs).expect("series ring mismatch")
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&-Rational::one())
    }
}

/// A scalar times a signed-exponent monomial, held aside while expanding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPrefix {
    pub scalar: Rational,
    pub exponents: Vec<i64>,
}

impl LaurentPrefix {
    pub fn trivial(nvars: usize) -> Self {
        LaurentPrefix {
            scalar: Rational::one(),
            exponents: vec![0; nvars],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.scalar.is_one() && self.exponents.iter().all(|&e| e == 0)
    }
}

/// Expand `(1 - c·L)^{power}` for `power = ±1`, `L` a signed monomial.
///
/// With `L` in the nonnegative cone the prefix is trivial. With `L` in the
/// nonpositive cone the factor is rewritten as `(-cL)^{power}·(1 - L⁻¹/c)^{power}`
/// so the series part has unit constant term. Mixed signs leave the cone.
pub fn expand_linear_factor(
    ring: &Arc<Ring>,
    c: &Rational,
    l: &[i64],
    power: i32,
) -> Result<(LaurentPrefix, Series)> {
    assert!(power == 1 || power == -1, "power must be ±1");
    assert_eq!(l.len(), ring.nvars(), "monomial arity");
    let n = ring.nvars();
    if let Some(mono) = Monomial::from_signed(l) {
        let base = &Series::one(ring) - &Series::term(ring, mono, c.clone());
        let series = if power == 1 {
            base
        } else {
            base.invert_unit().map_err(|_| {
                Error::NonGeneric(format!("factor 1 - {} is zero", format_rational(c)))
            })?
        };
        return Ok((LaurentPrefix::trivial(n), series));
    }
    let neg: Vec<i64> = l.iter().map(|e| -e).collect();
    let inv_mono = Monomial::from_signed(&neg).ok_or_else(|| Error::InadmissibleMonomial(l.to_vec()))?;
    if c.is_zero() {
        return Err(Error::ZeroPivot);
    }
    let base = &Series::one(ring) - &Series::term(ring, inv_mono, c.recip());
    let (scalar, exponents, series) = if power == 1 {
        (-c.clone(), l.to_vec(), base)
    } else {
        (-c.recip(), neg, base.invert_unit()?)
    };
    Ok((LaurentPrefix { scalar, exponents }, series))
}

/// Multiply out prefixes and series; the prefix exponents must cancel exactly.
pub fn finalize(ring: &Arc<Ring>, prefixes: &[LaurentPrefix], series: &[Series]) -> Result<Series> {
    let mut net = vec![0i64; ring.nvars()];
    let mut scalar = Rational::one();
    for p in prefixes {
        for (acc, e) in net.iter_mut().zip(&p.exponents) {
            *acc += e;
        }
        scalar *= &p.scalar;
    }
    if net.iter().any(|&e| e != 0) {
        return Err(Error::LaurentResidue(net));
    }
    let mut out = Series::constant(ring, scalar);
    for s in series {
        out = out.checked_mul(s)?;
    }
    Ok(out)
}

/// `(1 - c·M)^{power}` for a nonnegative monomial and any integer power.
pub fn linear_factor_power(ring: &Arc<Ring>, c: &Rational, mono: &Monomial, power: i64) -> Result<Series> {
    let base = &Series::one(ring) - &Series::term(ring, mono.clone(), c.clone());
    if power >= 0 {
        Ok(base.pow(power as u32))
    } else {
        Ok(base.invert_unit()?.pow(power.unsigned_abs() as u32))
    }
}
