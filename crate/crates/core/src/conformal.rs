//! Expansion in `ħ` under `q = e^{ħ/b}`, `t = e^{-bħ}`, `u_i = e^{u'_i ħ}`,
//! `v_i = e^{v'_i ħ}`, and the degeneration of a product of Nekrasov factors
//! to the bifundamental factor `Z_bif` at `N = 2`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::partitions::{enumerate_tuples, Partition};
use crate::qspecial::nekrasov_factors;
use crate::report::VerificationReport;
use crate::{format_rational, rat, Error, Rational};

/// Power series in `ħ` truncated after `ħ^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HbarSeries {
    coeffs: Vec<Rational>,
}

impl HbarSeries {
    pub fn zero(order: usize) -> Self {
        HbarSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        HbarSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        HbarSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(self.order(), other.order(), "ħ-series truncation mismatch");
    }
}

/// `e^{cħ} = Σ_{k ≤ R} c^k ħ^k / k!`.
pub fn hbar_exp(c: &Rational, order: usize) -> HbarSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut term = Rational::one();
    for k in 0..=order {
        if k > 0 {
            term = term * c / rat(k as i64, 1);
        }
        coeffs.push(term.clone());
    }
    HbarSeries { coeffs }
}

impl<'a> Add<&'a HbarSeries> for &'a HbarSeries {
    type Output = HbarSeries;
    fn add(self, rhs: &'a HbarSeries) -> HbarSeries {
        self.check_order(rhs);
        HbarSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a HbarSeries> for &'a HbarSeries {
    type Output = HbarSeries;
    fn sub(self, rhs: &'a HbarSeries) -> HbarSeries {
        self.check_order(rhs);
        HbarSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a HbarSeries> for &'a HbarSeries {
    type Output = HbarSeries;
    fn mul(self, rhs: &'a HbarSeries) -> HbarSeries {
        self.check_order(rhs);
        let r = self.order();
        let mut out = HbarSeries::zero(r);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(r + 1 - i).enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }
}

/// `b`, the momenta `P`, `P'`, `α`, and a common offset added to every `u'_i`, `v'_i`.
///
/// With zero offset this is `u'_1 = P+α/2`, `u'_2 = -P+α/2`, `v'_1 = P'-α/2`,
/// `v'_2 = -P'-α/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformalParams {
    pub b: Rational,
    pub p: Rational,
    pub p_prime: Rational,
    pub alpha: Rational,
    pub offset: Rational,
}

impl ConformalParams {
    pub fn simple(b: Rational, p: Rational, p_prime: Rational, alpha: Rational) -> Self {
        ConformalParams {
            b,
            p,
            p_prime,
            alpha,
            offset: Rational::zero(),
        }
    }

    pub fn shifted(mut self, offset: Rational) -> Self {
        self.offset = offset;
        self
    }

    /// `P_1 = P`, `P_2 = -P`.
    pub fn momentum(&self, i: usize) -> Rational {
        if i == 1 {
            self.p.clone()
        } else {
            -self.p.clone()
        }
    }

    pub fn momentum_prime(&self, i: usize) -> Rational {
        if i == 1 {
            self.p_prime.clone()
        } else {
            -self.p_prime.clone()
        }
    }

    pub fn u_prime(&self, i: usize) -> Rational {
        self.momentum(i) + &self.alpha / rat(2, 1) + &self.offset
    }

    pub fn v_prime(&self, i: usize) -> Rational {
        self.momentum_prime(i) - &self.alpha / rat(2, 1) + &self.offset
    }

    fn echo(&self) -> BTreeMap<String, String> {
        [
            ("b", &self.b),
            ("P", &self.p),
            ("P'", &self.p_prime),
            ("alpha", &self.alpha),
            ("offset", &self.offset),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), format_rational(v)))
        .collect()
    }
}

/// The bifundamental factor
/// `∏_{i,j} ∏_{□∈λ^{(i)}} (P'_i - P_j - α + b^{-1}(a_{λ^{(i)}}+1) - b ℓ_{μ^{(j)}})
///  ∏_{□∈μ^{(j)}} (P'_i - P_j - α - b^{-1} a_{μ^{(j)}} + b(ℓ_{λ^{(i)}}+1))`.
pub fn z_bif(alpha: &Rational, p_prime: &Rational, lambda: &[Partition; 2], p: &Rational, mu: &[Partition; 2], b: &Rational) -> Rational {
    let params = ConformalParams::simple(b.clone(), p.clone(), p_prime.clone(), alpha.clone());
    let b_inv = b.recip();
    let mut out = Rational::one();
    for i in 1..=2 {
        for j in 1..=2 {
            let base = params.momentum_prime(i) - params.momentum(j) - alpha;
            let (l, m) = (&lambda[i - 1], &mu[j - 1]);
            for (r, c) in l.cells() {
                out *= &base + &b_inv * rat(l.arm(r, c) + 1, 1) - b * rat(m.leg(r, c), 1);
            }
            for (r, c) in m.cells() {
                out *= &base - &b_inv * rat(m.arm(r, c), 1) + b * rat(l.leg(r, c) + 1, 1);
            }
        }
    }
    out
}

/// `∏_{i,j=1}^2 N_{λ^{(i)} μ^{(j)}}(q v_i/(t u_j))` as an `ħ`-series.
pub fn nekrasov_hbar_product(lambda: &[Partition; 2], mu: &[Partition; 2], params: &ConformalParams, order: usize) -> HbarSeries {
    let one = HbarSeries::one(order);
    let mut out = one.clone();
    let b_inv = params.b.recip();
    for i in 1..=2 {
        for j in 1..=2 {
            let shift = params.v_prime(i) - params.u_prime(j);
            for f in nekrasov_factors(&lambda[i - 1], &mu[j - 1]) {
                // u q^a t^c = exp(ħ [v'_i - u'_j + (1+a)/b - b(c-1)])
                let x = &shift + &b_inv * rat(1 + f.q_exp, 1) - &params.b * rat(f.t_exp - 1, 1);
                out = &out * &(&one - &hbar_exp(&x, order));
            }
        }
    }
    out
}

/// Leading-order check of the Nekrasov product against `Z_bif`.
pub fn nekrasov_hbar_limit(lambda: &[Partition; 2], mu: &[Partition; 2], params: &ConformalParams, order: usize) -> VerificationReport {
    let mut echo = params.echo();
    echo.insert("lambda".into(), format!("{} | {}", lambda[0], lambda[1]));
    echo.insert("mu".into(), format!("{} | {}", mu[0], mu[1]));
    let size = (lambda[0].size() + lambda[1].size() + mu[0].size() + mu[1].size()) as usize;
    let lead = 2 * size;
    if order < lead {
        let err = Error::Invalid(format!("order deficit: need ħ^{lead}, truncation at ħ^{order}"));
        return VerificationReport::error("hbar-limit", echo, order as u32, &err);
    }
    let series = nekrasov_hbar_product(lambda, mu, params, order);
    let mut report = VerificationReport::new("hbar-limit", echo, order as u32);
    for k in 0..lead {
        report.compare_scalar(&format!("hbar^{k}"), &series.coefficient(k), &Rational::zero());
    }
    let z = z_bif(&params.alpha, &params.p_prime, lambda, &params.p, mu, &params.b);
    report.compare_scalar(&format!("hbar^{lead}"), &series.coefficient(lead), &z);
    report
}

/// All `N = 2` pairs with `|𝛌| + |𝛍| ≤ max_total`, truncated one order past the leading one.
pub fn check_hbar_all(max_total: u32, params: &ConformalParams) -> VerificationReport {
    let quads = enumerate_tuples(4, max_total);
    let reports: Vec<VerificationReport> = quads
        .par_iter()
        .map(|t| {
            let lambda = [t[0].clone(), t[1].clone()];
            let mu = [t[2].clone(), t[3].clone()];
            let size: u32 = t.iter().map(Partition::size).sum();
            nekrasov_hbar_limit(&lambda, &mu, params, 2 * size as usize + 1)
        })
        .collect();
    let mut echo = params.echo();
    echo.insert("max_total".into(), max_total.to_string());
    let mut out = VerificationReport::new("hbar-limit", echo, 2 * max_total + 1);
    for r in &reports {
        out.absorb(r);
    }
    out.with_detail(format!("{} partition pairs", reports.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qspecial::nekrasov_factors_second_form;

    fn params() -> ConformalParams {
        ConformalParams::simple(rat(2, 3), rat(1, 5), rat(1, 7), rat(1, 11))
    }

    fn pair(a: &str, b: &str) -> [Partition; 2] {
        [a.parse().unwrap(), b.parse().unwrap()]
    }

    #[test]
    fn hbar_exp_basics() {
        assert_eq!(hbar_exp(&rat(0, 1), 4), HbarSeries::one(4));
        assert_eq!(
            hbar_exp(&rat(1, 1), 2),
            HbarSeries::from_coeffs(vec![rat(1, 1), rat(1, 1), rat(1, 2)], 2)
        );
        let a = rat(-3, 7);
        assert_eq!(&hbar_exp(&a, 5) * &hbar_exp(&-a.clone(), 5), HbarSeries::one(5));
    }

    #[test]
    fn hbar_ring_axioms() {
        let a = HbarSeries::from_coeffs(vec![rat(1, 2), rat(-1, 3), rat(2, 1)], 6);
        let b = hbar_exp(&rat(5, 4), 6);
        let c = HbarSeries::from_coeffs(vec![rat(0, 1), rat(7, 1), rat(0, 1), rat(1, 9)], 6);
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&a * &b, &b * &a);
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(c.valuation(), Some(1));
    }

    #[test]
    fn parametrization_constraint() {
        let p = params().shifted(rat(3, 13));
        for i in 1..=2 {
            for j in 1..=2 {
                assert_eq!(p.v_prime(i) - p.u_prime(j), p.momentum_prime(i) - p.momentum(j) - &p.alpha);
            }
        }
        assert_eq!(p.u_prime(1) - p.u_prime(2), rat(2, 5));
    }

    #[test]
    fn z_bif_single_box() {
        // one cell of λ^{(1)}, μ empty: a_λ = 0 and ℓ_∅(1,1) = -1
        let p = params();
        let z = z_bif(&p.alpha, &p.p_prime, &pair("1", "-"), &p.p, &pair("-", "-"), &p.b);
        let expected: Rational = (1..=2)
            .map(|j| p.momentum_prime(1) - p.momentum(j) - &p.alpha + p.b.recip() + &p.b)
            .product();
        assert_eq!(z, expected);
        assert_eq!(z_bif(&p.alpha, &p.p_prime, &pair("-", "-"), &p.p, &pair("-", "-"), &p.b), rat(1, 1));
    }

    #[test]
    fn z_bif_is_the_second_form_leading_term() {
        // Oracle: the leading ħ coefficient of each factor 1 - e^{Xħ} is -X, so
        // the ħ^{2n} coefficient is ∏ X over the second-form factor list.
        let p = params();
        let (lambda, mu) = (pair("2,1", "1"), pair("1", "2"));
        let mut expected = Rational::one();
        for i in 1..=2 {
            for j in 1..=2 {
                for f in nekrasov_factors_second_form(&lambda[i - 1], &mu[j - 1]) {
                    expected *= p.v_prime(i) - p.u_prime(j) + p.b.recip() * rat(1 + f.q_exp, 1) - &p.b * rat(f.t_exp - 1, 1);
                }
            }
        }
        assert_eq!(z_bif(&p.alpha, &p.p_prime, &lambda, &p.p, &mu, &p.b), expected);
    }

    #[test]
    fn single_box_limit() {
        let r = nekrasov_hbar_limit(&pair("1", "-"), &pair("-", "-"), &params(), 3);
        assert!(r.passed(), "{r:?}");
        let r = nekrasov_hbar_limit(&pair("-", "-"), &pair("-", "-"), &params(), 1);
        assert!(r.passed());
    }

    #[test]
    fn order_deficit_is_an_error() {
        let r = nekrasov_hbar_limit(&pair("1", "-"), &pair("-", "-"), &params(), 1);
        assert_eq!(r.status, crate::report::Status::Error);
    }

    #[test]
    fn all_pairs_to_size_two() {
        assert!(check_hbar_all(2, &params()).passed());
        assert!(check_hbar_all(2, &params().shifted(rat(-5, 3))).passed());
    }
}
