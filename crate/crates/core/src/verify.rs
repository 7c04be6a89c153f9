//! Identity checks assembled from the builders, plus the aggregate suite.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::conformal::{check_hbar_all, ConformalParams};
use crate::functions::{f_ellip, f_ghat_n_shifted, f_ghat_n_shifted_numeric, f_gl_n, prefactor_c, SeriesRole};
use crate::macdonald::{check_bispectral, check_eigen, check_poincare, check_specialization};
use crate::params::{dual_t, ParamSet};
use crate::partitions::{c_factor, cprime_factor, enumerate_partitions, Partition};
use crate::qspecial::{nekrasov, nekrasov_cyclic, nekrasov_second_form, qpoch_finite};
use crate::report::{Status, SuiteReport, VerificationReport};
use crate::series::{Monomial, Ring, Series, VariableSet};
use crate::{format_rational, rat, rpow, Error, Rational, Result};

fn echo(p: &ParamSet) -> BTreeMap<String, String> {
    let e = p.describe();
    let mut out = BTreeMap::new();
    out.insert("n".into(), e.n.to_string());
    out.insert("q".into(), e.q);
    out.insert("tau".into(), e.tau);
    out.insert("t".into(), e.t);
    out.insert("kappa0".into(), e.kappa0);
    out.insert("s".into(), e.s.join(","));
    out
}

fn or_error(identity: &str, params: BTreeMap<String, String>, degree: u32, run: impl FnOnce() -> Result<VerificationReport>) -> VerificationReport {
    run().unwrap_or_else(|e| VerificationReport::error(identity, params, degree, &e))
}

/// The main theorem: shifted `f^{ĝl_N}` against `𝔠 · f^{ellip}_N`.
///
/// Returns the report and, when the build succeeded, the left-hand series.
pub fn verify_theorem_main(p: &ParamSet, degree: u32) -> (VerificationReport, Option<Series>) {
    let params = echo(p);
    let mut lhs_out = None;
    let report = or_error("thm-main", params.clone(), degree, || {
        p.validate()?;
        let t = p.t();
        let (lhs, stats) = f_ghat_n_shifted(p.n, degree, &p.q, &p.tau)?;
        let rhs = &prefactor_c(p.n, degree, &p.q, &t)? * &f_ellip(p.n, degree, &p.q, &t)?;
        let mut report = VerificationReport::new("thm-main", params.clone(), degree);
        report.compare_series(&lhs, &rhs)?;
        lhs_out = Some(lhs);
        Ok(report.with_detail(format!(
            "{} tuples, {} Laurent checks, {} integrality checks",
            stats.tuples, stats.laurent_checks, stats.integrality_checks
        )))
    });
    (report, lhs_out)
}

/// Which reading of the `N = 1` summand to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Convention {
    Printed,
    KappaInverted,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Printed => "printed",
            Convention::KappaInverted => "kappa-inverted",
        }
    }
}

fn p_ring(degree: u32) -> Result<std::sync::Arc<Ring>> {
    Ok(Ring::new(VariableSet::new(["p"])?, degree))
}

/// `exp Σ_n (1/n) (1-q^nκ^n)(1-κ^n/t^n) κ^{-n} p^n / ((1-q^n)(1-t^{-n})(1-p^n))`.
pub fn n1_lhs(degree: u32, q: &Rational, t: &Rational, kappa: &Rational) -> Result<Series> {
    let ring = p_ring(degree)?;
    let one = Rational::one();
    let mut exponent = Series::zero(&ring);
    for n in 1..=degree as i64 {
        let num = (&one - rpow(q, n) * rpow(kappa, n)) * (&one - rpow(kappa, n) / rpow(t, n)) / rpow(kappa, n);
        let den = (&one - rpow(q, n)) * (&one - rpow(t, -n)) * rat(n, 1);
        if den.is_zero() {
            return Err(Error::NonGeneric(format!("q^{n} = 1 or t^{n} = 1")));
        }
        let c = num / den;
        let mut k = n;
        while k <= degree as i64 {
            exponent = &exponent + &Series::term(&ring, Monomial(vec![k as u32]), c.clone());
            k += n;
        }
    }
    exponent.exp_series()
}

/// One summand of the `N = 1` sum, without the `p^{|λ|}`.
pub fn n1_summand(lambda: &Partition, q: &Rational, t: &Rational, kappa: &Rational, convention: Convention) -> Result<Rational> {
    let k = match convention {
        Convention::Printed => kappa.clone(),
        Convention::KappaInverted => kappa.recip(),
    };
    let mut num = Rational::one();
    let mut den = Rational::one();
    let l = lambda.len() as i64;
    for j in 1..=l {
        let order = (lambda.part(j) - lambda.part(j + 1)) as u32;
        for i in 1..=j {
            let a = rpow(q, -lambda.part(i) + lambda.part(j + 1)) * rpow(t, i - j);
            let b = rpow(q, lambda.part(i) - lambda.part(j)) * rpow(t, j - i + 1);
            num *= qpoch_finite(&(&k * &a), q, order) * qpoch_finite(&(&k * &b), q, order);
            den *= qpoch_finite(&a, q, order) * qpoch_finite(&b, q, order);
        }
    }
    if den.is_zero() {
        return Err(Error::NonGeneric(format!("vanishing denominator at λ = {lambda}")));
    }
    Ok(rpow(&k.recip(), lambda.size() as i64) * num / den)
}

pub fn n1_rhs(degree: u32, q: &Rational, t: &Rational, kappa: &Rational, convention: Convention) -> Result<Series> {
    let ring = p_ring(degree)?;
    let mut out = Series::zero(&ring);
    for lambda in enumerate_partitions(degree) {
        let c = n1_summand(&lambda, q, t, kappa, convention)?;
        out = &out + &Series::term(&ring, Monomial(vec![lambda.size()]), c);
    }
    Ok(out)
}

fn n1_params(q: &Rational, t: &Rational, kappa: &Rational, convention: Convention) -> BTreeMap<String, String> {
    [("q", format_rational(q)), ("t", format_rational(t)), ("kappa", format_rational(kappa)), ("convention", convention.name().into())]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

/// The `N = 1` summation formula at one parameter triple.
pub fn verify_n1(degree: u32, q: &Rational, t: &Rational, kappa: &Rational, convention: Convention) -> VerificationReport {
    let params = n1_params(q, t, kappa, convention);
    or_error("n1", params.clone(), degree, || {
        let lhs = n1_lhs(degree, q, t, kappa)?;
        let rhs = n1_rhs(degree, q, t, kappa, convention)?;
        let mut report = VerificationReport::new("n1", params.clone(), degree);
        report.compare_series(&lhs, &rhs)?;
        Ok(report)
    })
}

/// Default generic triples `(q, t, κ)`.
pub fn n1_triples() -> Vec<(Rational, Rational, Rational)> {
    vec![
        (rat(2, 1), rat(3, 1), rat(5, 1)),
        (rat(2, 5), rat(3, 7), rat(5, 8)),
        (rat(7, 3), rat(2, 11), rat(4, 13)),
    ]
}

/// Run the requested conventions over every triple; the detail names the
/// conventions that validate at all triples.
pub fn verify_n1_conventions(degree: u32, triples: &[(Rational, Rational, Rational)], conventions: &[Convention]) -> (VerificationReport, BTreeMap<Convention, bool>) {
    let mut verdicts = BTreeMap::new();
    let mut params = BTreeMap::new();
    let names: Vec<&str> = conventions.iter().map(|c| c.name()).collect();
    params.insert("conventions".into(), names.join(","));
    let mut subs = Vec::new();
    for &c in conventions {
        let reports: Vec<VerificationReport> = triples.iter().map(|(q, t, k)| verify_n1(degree, q, t, k, c)).collect();
        verdicts.insert(c, reports.iter().all(VerificationReport::passed));
        subs.push(reports);
    }
    let validating: Vec<&str> = verdicts.iter().filter(|(_, &ok)| ok).map(|(c, _)| c.name()).collect();
    let mut report = VerificationReport::new("n1", params, degree);
    // with both conventions requested the check passes iff exactly one validates
    let both = conventions.len() > 1;
    for r in subs.iter().flatten() {
        if both && r.status != Status::Error {
            report.coefficients_compared += r.coefficients_compared;
        } else {
            report.absorb(r);
        }
    }
    if both && validating.len() != 1 && report.status == Status::Pass {
        report.status = Status::Fail;
    }
    let detail = if validating.is_empty() {
        "validating convention: none".to_string()
    } else {
        format!("validating convention: {}", validating.join(","))
    };
    (report.with_detail(detail), verdicts)
}

/// `μ^{(k)} = (λ_j : i - j ≡ k mod N)`.
pub fn cyclic_slice(lambda: &Partition, i: i64, k: i64, n: u32) -> Partition {
    let parts: Vec<u32> = lambda
        .parts()
        .iter()
        .enumerate()
        .filter(|(j, _)| (i - (*j as i64 + 1) - k).rem_euclid(n as i64) == 0)
        .map(|(_, &v)| v)
        .collect();
    Partition::new(parts).expect("a subsequence of a partition is a partition")
}

/// Both sides of the cyclic-slice Nekrasov identity, computed independently.
pub fn lemma_nek_sides(lambda: &Partition, i: i64, n: u32, q: &Rational, tau: &Rational) -> Result<(Rational, Rational)> {
    let t = rpow(tau, n as i64);
    let one = Rational::one();
    let mut lhs = Rational::one();
    for k in 1..=n as i64 {
        let u = if k == i { t.clone() } else { one.clone() };
        let prev = cyclic_slice(lambda, i, k - 1, n);
        let cur = cyclic_slice(lambda, i, k, n);
        let den = nekrasov(&cur, &cur, &one, q, &t);
        if den.is_zero() {
            return Err(Error::VanishingDenominator(format!("N_{{μμ}}(1) at μ = {cur}")));
        }
        lhs *= nekrasov(&prev, &cur, &u, q, &t) / den;
    }
    let kappa = tau.recip();
    let den = nekrasov_cyclic(0, n, lambda, lambda, &one, q, &kappa);
    if den.is_zero() {
        return Err(Error::VanishingDenominator(format!("cyclic N_{{λλ}}(1) at λ = {lambda}")));
    }
    let rhs = nekrasov_cyclic(0, n, lambda, lambda, &t, q, &kappa) / den;
    Ok((lhs, rhs))
}

/// Seeded random partitions of size at most `max_size`, uniform over the list.
pub fn sample_partitions(count: usize, max_size: u32, seed: u64) -> Vec<Partition> {
    let pool: Vec<Partition> = enumerate_partitions(max_size).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect()
}

pub fn verify_lemma_nek(samples: usize, ns: &[u32], seed: u64, q: &Rational, tau: &Rational) -> VerificationReport {
    let mut params = BTreeMap::new();
    params.insert("q".into(), format_rational(q));
    params.insert("tau".into(), format_rational(tau));
    params.insert("seed".into(), seed.to_string());
    params.insert("samples".into(), samples.to_string());
    let ns_text: Vec<String> = ns.iter().map(u32::to_string).collect();
    params.insert("n_range".into(), ns_text.join(","));
    let mut report = VerificationReport::new("lemma-nek", params.clone(), 8);
    for &n in ns {
        for i in 1..=n as i64 {
            let stream = seed ^ ((n as u64) << 32) ^ (i as u64);
            for lambda in sample_partitions(samples, 8, stream) {
                match lemma_nek_sides(&lambda, i, n, q, tau) {
                    Ok((l, r)) => report.compare_scalar(&format!("N={n} i={i} λ={lambda}"), &l, &r),
                    Err(e) => return VerificationReport::error("lemma-nek", params, 8, &e),
                }
            }
        }
    }
    report
}

/// The `p → 0` limit: `w`-free part of the shifted build at `κ = κ₀^{-N}`
/// against `f^{gl_N}(x; s|q, q/t)`.
pub fn verify_p_limit(p: &ParamSet, degree: u32, kappa0: &Rational) -> (VerificationReport, Option<Series>) {
    let mut params = echo(p);
    params.insert("kappa0".into(), format_rational(kappa0));
    let mut slice_out = None;
    let report = or_error("p-limit", params.clone(), degree, || {
        p.validate()?;
        let t = p.t();
        let (full, _) = f_ghat_n_shifted_numeric(p.n, degree, &p.s, &kappa0.recip(), &p.q, &t)?;
        let ring = full.ring().clone();
        let w = ring.vars.index_of("w").expect("w is a variable");
        let slice = full.filter(|m| m.0[w] == 0);
        let gl = f_gl_n(p.n, degree, &SeriesRole::XFormalSNumeric(p.s.clone()), &p.q, &dual_t(&p.q, &t))?;
        let gl = gl.remap(&ring, |m| {
            let mut e = m.0.clone();
            e.insert(w, 0);
            Some(Monomial(e))
        });
        let mut report = VerificationReport::new("p-limit", params.clone(), degree);
        report.compare_series(&slice, &gl)?;
        slice_out = Some(slice);
        Ok(report)
    });
    (report, slice_out)
}

/// Both product forms of `N_{λμ}(u)` for all pairs with `|λ|, |μ| ≤ max_size`.
pub fn verify_nek_forms(max_size: u32, q: &Rational, t: &Rational, u: &Rational) -> VerificationReport {
    let mut params = BTreeMap::new();
    params.insert("q".into(), format_rational(q));
    params.insert("t".into(), format_rational(t));
    params.insert("u".into(), format_rational(u));
    let parts: Vec<Partition> = enumerate_partitions(max_size).collect();
    let rows: Vec<Vec<(String, Rational, Rational)>> = parts
        .par_iter()
        .map(|l| {
            parts
                .iter()
                .map(|m| (format!("({l};{m})"), nekrasov(l, m, u, q, t), nekrasov_second_form(l, m, u, q, t)))
                .collect()
        })
        .collect();
    let mut report = VerificationReport::new("nek-forms", params, max_size);
    for (label, a, b) in rows.iter().flatten() {
        report.compare_scalar(label, a, b);
    }
    report
}

/// `c_λ c'_λ = (-1)^{|λ|} q^{n(λ')+|λ|} t^{n(λ)} N_{λλ}(1)` for `|λ| ≤ max_size`.
pub fn verify_c_identity(max_size: u32, q: &Rational, t: &Rational) -> VerificationReport {
    let mut params = BTreeMap::new();
    params.insert("q".into(), format_rational(q));
    params.insert("t".into(), format_rational(t));
    let mut report = VerificationReport::new("c-identity", params, max_size);
    for l in enumerate_partitions(max_size) {
        let lhs = c_factor(&l, q, t) * cprime_factor(&l, q, t);
        let size = l.size() as i64;
        let sign = if size % 2 == 0 { Rational::one() } else { -Rational::one() };
        let rhs = sign * rpow(q, l.conjugate().n() + size) * rpow(t, l.n()) * nekrasov(&l, &l, &Rational::one(), q, t);
        report.compare_scalar(&l.to_string(), &lhs, &rhs);
    }
    report
}

/// Settings for the aggregate run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub params: ParamSet,
    pub degree: u32,
    pub seed: u64,
}

impl SuiteConfig {
    pub fn defaults() -> Self {
        SuiteConfig {
            params: ParamSet::defaults(2),
            degree: 3,
            seed: 2024,
        }
    }
}

/// Standard conformal parameters `b = 2/3`, `P = 1/5`, `P' = 1/7`, `α = 1/11`.
pub fn default_conformal() -> ConformalParams {
    ConformalParams::simple(rat(2, 3), rat(1, 5), rat(1, 7), rat(1, 11))
}

/// Every check at the configured `N` and degree; fixed-size checks use their standard bounds.
///
/// Returns the suite report and the named series that golden files cover.
pub fn verify_all(cfg: &SuiteConfig) -> Result<(SuiteReport, Vec<(String, Series)>)> {
    cfg.params.validate()?;
    let p = &cfg.params;
    let d = cfg.degree;
    let t = p.t();
    let mut reports = Vec::new();
    let mut series = Vec::new();

    reports.push(verify_nek_forms(6, &rat(2, 5), &rat(3, 7), &rat(7, 11)));
    reports.push(verify_c_identity(10, &p.q, &t));
    reports.push(verify_lemma_nek(50, &[2, 3, 4], cfg.seed, &p.q, &p.tau));
    reports.push(check_eigen(p.n, d, &p.s, &p.q, &t));
    reports.push(check_bispectral(p.n, d, &p.q, &t));
    reports.push(check_poincare(p.n, d, &p.s, &p.q, &t));
    for size in 0..=3u32 {
        for lambda in crate::partitions::partitions_of(size) {
            if lambda.len() <= p.n {
                reports.push(check_specialization(&lambda, p.n, 1, &p.q, &t));
            }
        }
    }
    let (r, lhs) = verify_theorem_main(p, d);
    reports.push(r);
    if let Some(lhs) = lhs {
        series.push(("thm-main".to_string(), lhs));
    }
    let (r, _) = verify_n1_conventions(d.max(1), &n1_triples(), &[Convention::Printed, Convention::KappaInverted]);
    reports.push(r);
    let (r, slice) = verify_p_limit(p, d, &p.kappa0);
    reports.push(r);
    if let Some(slice) = slice {
        series.push(("p-limit".to_string(), slice));
    }
    reports.push(check_hbar_all(4, &default_conformal()));
    let f = f_gl_n(p.n, d, &SeriesRole::XFormalSNumeric(p.s.clone()), &p.q, &t)?;
    series.push(("f-gl".to_string(), f));
    Ok((SuiteReport::new(reports), series))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_order_one_values() {
        let (q, t, k) = (rat(2, 1), rat(3, 1), rat(5, 1));
        let lhs = n1_lhs(1, &q, &t, &k).unwrap();
        assert_eq!(lhs.coefficient(&Monomial(vec![1])), rat(-9, 5));
        let one = Partition::new(vec![1]).unwrap();
        assert_eq!(n1_summand(&one, &q, &t, &k, Convention::Printed).unwrap(), rat(-21, 5));
        assert_eq!(n1_summand(&one, &q, &t, &k, Convention::KappaInverted).unwrap(), rat(-9, 5));
    }

    #[test]
    fn n1_inverted_convention_validates() {
        let (report, verdicts) = verify_n1_conventions(4, &n1_triples(), &[Convention::Printed, Convention::KappaInverted]);
        assert!(report.passed(), "{report:?}");
        assert!(verdicts[&Convention::KappaInverted]);
        assert!(!verdicts[&Convention::Printed]);
    }

    #[test]
    fn n1_inverted_at_kappa_inverse_t_matches_shifted_build() {
        // κ = t^{-1}: the inverted summand reduces to the N = 1 Ruijsenaars term
        let p = ParamSet::defaults(1);
        let t = p.t();
        let (shifted, _) = f_ghat_n_shifted(1, 4, &p.q, &p.tau).unwrap();
        let rhs = n1_rhs(4, &p.q, &t, &t.recip(), Convention::KappaInverted).unwrap();
        for k in 0..=4u32 {
            assert_eq!(shifted.coefficient(&Monomial(vec![k])), rhs.coefficient(&Monomial(vec![k])));
        }
    }

    #[test]
    fn lemma_nek_trivial_and_small() {
        let (q, tau) = (rat(2, 5), rat(4, 9));
        let (l, r) = lemma_nek_sides(&Partition::empty(), 1, 2, &q, &tau).unwrap();
        assert_eq!((l.clone(), r), (rat(1, 1), rat(1, 1)));
        let (l, r) = lemma_nek_sides(&Partition::new(vec![1]).unwrap(), 1, 2, &q, &tau).unwrap();
        assert_eq!(l, r);
        assert!(verify_lemma_nek(5, &[2, 3], 7, &q, &tau).passed());
    }

    #[test]
    fn cyclic_slices() {
        let l = Partition::new(vec![5, 4, 3, 2, 1]).unwrap();
        // i = 1, N = 2: k = 0 keeps j odd
        assert_eq!(cyclic_slice(&l, 1, 0, 2).parts(), &[5, 3, 1]);
        assert_eq!(cyclic_slice(&l, 1, 1, 2).parts(), &[4, 2]);
        assert_eq!(cyclic_slice(&l, 2, 0, 2).parts(), &[4, 2]);
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(sample_partitions(10, 8, 3), sample_partitions(10, 8, 3));
        assert!(sample_partitions(20, 8, 3).iter().all(|p| p.size() <= 8));
    }

    #[test]
    fn small_fixed_size_checks() {
        assert!(verify_nek_forms(3, &rat(2, 5), &rat(3, 7), &rat(7, 11)).passed());
        assert!(verify_c_identity(5, &rat(2, 5), &rat(3, 7)).passed());
    }

    #[test]
    fn theorem_and_limit_small() {
        let p = ParamSet::defaults(2);
        let (r, lhs) = verify_theorem_main(&p, 2);
        assert!(r.passed(), "{r:?}");
        assert!(lhs.is_some());
        assert!(verify_p_limit(&p, 2, &rat(5, 8)).0.passed());
    }

    #[test]
    fn non_generic_config_is_an_error() {
        let mut p = ParamSet::defaults(1);
        p.q = p.tau.clone();
        let (r, _) = verify_theorem_main(&p, 1);
        assert_eq!(r.status, Status::Error);
        let cfg = SuiteConfig { params: p, degree: 1, seed: 0 };
        assert!(matches!(verify_all(&cfg), Err(Error::NonGeneric(_))));
    }
}
