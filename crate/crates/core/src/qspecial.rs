//! q-Pochhammer symbols, theta functions, elliptic shifted products and
//! Nekrasov factors, as exact scalars and as truncated series.
//!
//! Series-valued products take their argument as `c·M` with `c` rational and
//! `M` a monomial of the ambient ring. Wherever the elliptic nome `p` appears
//! it is read from the ring alias `"p"`.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::partitions::Partition;
use crate::series::{Monomial, Ring, Series};
use crate::{format_rational, rpow, Error, Rational, Result};

/// `(a; q)_n = ∏_{m<n} (1 - a q^m)`.
pub fn qpoch_finite(a: &Rational, q: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = a.clone();
    for _ in 0..n {
        acc *= Rational::one() - &term;
        term *= q;
    }
    acc
}

/// `(cM; q)_n` as a polynomial series.
pub fn qpoch_finite_series(ring: &Arc<Ring>, c: &Rational, mono: &Monomial, q: &Rational, n: u32) -> Series {
    let mut acc = Series::one(ring);
    let mut coeff = c.clone();
    for _ in 0..n {
        let factor = &Series::one(ring) - &Series::term(ring, mono.clone(), coeff.clone());
        acc = &acc * &factor;
        coeff *= q;
    }
    acc
}

/// Which side of Euler's expansion to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Euler {
    /// `(cM; q)_∞ = Σ (-1)^k q^{k(k-1)/2} (cM)^k / (q;q)_k`
    Product,
    /// `1/(cM; q)_∞ = Σ (cM)^k / (q;q)_k`
    Reciprocal,
}

/// Euler expansion of `(cM; q)_∞` or its reciprocal; `M` must have positive degree.
pub fn qpoch_infinite_series(
    ring: &Arc<Ring>,
    c: &Rational,
    mono: &Monomial,
    q: &Rational,
    side: Euler,
) -> Result<Series> {
    if c.is_zero() {
        return Ok(Series::one(ring));
    }
    let deg = mono.degree();
    if deg == 0 {
        return Err(Error::InadmissibleMonomial(mono.to_signed()));
    }
    let mut out = Series::one(ring);
    let mut qq_k = Rational::one(); // (q;q)_k
    let mut q_pow = Rational::one(); // q^k
    let mut c_pow = Rational::one();
    let mut k: u32 = 0;
    while (k + 1) * deg <= ring.degree {
        k += 1;
        q_pow *= q;
        qq_k *= Rational::one() - &q_pow;
        if qq_k.is_zero() {
            return Err(Error::NonGeneric("(q;q)_k vanished".into()));
        }
        c_pow *= c;
        let mut coeff = &c_pow / &qq_k;
        if side == Euler::Product {
            coeff *= rpow(q, (k as i64) * (k as i64 - 1) / 2);
            if k % 2 == 1 {
                coeff = -coeff;
            }
        }
        out = &out + &Series::term(ring, mono.pow(k), coeff);
    }
    Ok(out)
}

fn p_monomial(ring: &Arc<Ring>) -> Result<Monomial> {
    let p = ring.symbol("p")?;
    if p.degree() == 0 {
        return Err(Error::Invalid("the nome p must have positive degree".into()));
    }
    Ok(p)
}

/// `(cM; p)_∞ = ∏_{m≥0} (1 - cM p^m)`, a finite product under truncation.
pub fn p_pochhammer_series(ring: &Arc<Ring>, c: &Rational, mono: &Monomial) -> Result<Series> {
    let p = p_monomial(ring)?;
    let mut out = Series::one(ring);
    let mut arg = mono.clone();
    while arg.degree() <= ring.degree {
        out = &out * &(&Series::one(ring) - &Series::term(ring, arg.clone(), c.clone()));
        arg = arg.mul(&p);
    }
    Ok(out)
}

/// `θ_p(cM) = (cM; p)_∞ (p/(cM); p)_∞`; both `M` and `p/M` must lie in the cone.
pub fn theta_p_series(ring: &Arc<Ring>, c: &Rational, mono: &Monomial) -> Result<Series> {
    if c.is_zero() {
        return Err(Error::NonGeneric("theta function at zero argument".into()));
    }
    let p = p_monomial(ring)?;
    let quotient: Vec<i64> = p
        .to_signed()
        .iter()
        .zip(mono.to_signed())
        .map(|(a, b)| a - b)
        .collect();
    let p_over_m = Monomial::from_signed(&quotient).ok_or(Error::InadmissibleMonomial(quotient))?;
    let first = p_pochhammer_series(ring, c, mono)?;
    let second = p_pochhammer_series(ring, &c.recip(), &p_over_m)?;
    Ok(&first * &second)
}

/// Elliptic shifted product `⟨cM⟩_n = ∏_{k<n} θ_p(q^k cM)`.
pub fn wg_bracket_series(ring: &Arc<Ring>, c: &Rational, mono: &Monomial, n: u32, q: &Rational) -> Result<Series> {
    let mut out = Series::one(ring);
    let mut coeff = c.clone();
    for _ in 0..n {
        out = &out * &theta_p_series(ring, &coeff, mono)?;
        coeff *= q;
    }
    Ok(out)
}

/// `1/⟨cM⟩_n`, failing if the bracket is not a unit.
pub fn wg_bracket_inverse(ring: &Arc<Ring>, c: &Rational, mono: &Monomial, n: u32, q: &Rational) -> Result<Series> {
    wg_bracket_series(ring, c, mono, n, q)?
        .invert_unit()
        .map_err(|_| Error::NonGeneric(format!("<{} M>_{n} has zero constant term", format_rational(c))))
}

/// Double Pochhammer `(cM; q, p)_∞ = ∏_{m≥0} (cM p^m; q)_∞`.
pub fn double_qpoch_series(ring: &Arc<Ring>, c: &Rational, mono: &Monomial, q: &Rational, side: Euler) -> Result<Series> {
    let p = p_monomial(ring)?;
    let mut out = Series::one(ring);
    let mut arg = mono.clone();
    while arg.degree() <= ring.degree {
        out = &out * &qpoch_infinite_series(ring, c, &arg, q, side)?;
        arg = arg.mul(&p);
    }
    Ok(out)
}

/// `Γ(cM; q, p) = (qp/(cM); q, p)_∞ / (cM; q, p)_∞` when `p/M` lies in the cone.
pub fn elliptic_gamma_series(ring: &Arc<Ring>, c: &Rational, mono: &Monomial, q: &Rational) -> Result<Series> {
    let p = p_monomial(ring)?;
    let quotient: Vec<i64> = p
        .to_signed()
        .iter()
        .zip(mono.to_signed())
        .map(|(a, b)| a - b)
        .collect();
    let p_over_m = Monomial::from_signed(&quotient).ok_or(Error::InadmissibleMonomial(quotient))?;
    let num = double_qpoch_series(ring, &(q / c), &p_over_m, q, Euler::Product)?;
    let den = double_qpoch_series(ring, c, mono, q, Euler::Reciprocal)?;
    Ok(&num * &den)
}

/// One linear factor `1 - u·q^{q_exp}·t^{t_exp}` of a Nekrasov product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QtFactor {
    pub q_exp: i64,
    pub t_exp: i64,
}

/// Factors of the first printed product form of `N_{λμ}(u)`:
/// `∏_{□∈λ}(1 - u q^{-a_μ(□)-1} t^{-ℓ_λ(□)}) ∏_{□∈μ}(1 - u q^{a_λ(□)} t^{ℓ_μ(□)+1})`.
pub fn nekrasov_factors(lambda: &Partition, mu: &Partition) -> Vec<QtFactor> {
    let mut out = Vec::with_capacity((lambda.size() + mu.size()) as usize);
    for (i, j) in lambda.cells() {
        out.push(QtFactor {
            q_exp: -mu.arm(i, j) - 1,
            t_exp: -lambda.leg(i, j),
        });
    }
    for (i, j) in mu.cells() {
        out.push(QtFactor {
            q_exp: lambda.arm(i, j),
            t_exp: mu.leg(i, j) + 1,
        });
    }
    out
}

/// Factors of the second printed product form of `N_{λμ}(u)`:
/// `∏_{□∈λ}(1 - u q^{a_λ(□)} t^{ℓ_μ(□)+1}) ∏_{□∈μ}(1 - u q^{-a_μ(□)-1} t^{-ℓ_λ(□)})`.
pub fn nekrasov_factors_second_form(lambda: &Partition, mu: &Partition) -> Vec<QtFactor> {
    let mut out = Vec::with_capacity((lambda.size() + mu.size()) as usize);
    for (i, j) in lambda.cells() {
        out.push(QtFactor {
            q_exp: lambda.arm(i, j),
            t_exp: mu.leg(i, j) + 1,
        });
    }
    for (i, j) in mu.cells() {
        out.push(QtFactor {
            q_exp: -mu.arm(i, j) - 1,
            t_exp: -lambda.leg(i, j),
        });
    }
    out
}

pub fn evaluate_qt_factors(factors: &[QtFactor], u: &Rational, q: &Rational, t: &Rational) -> Rational {
    factors.iter().fold(Rational::one(), |acc, f| {
        acc * (Rational::one() - u * rpow(q, f.q_exp) * rpow(t, f.t_exp))
    })
}

/// `N_{λμ}(u)` via the first product form.
pub fn nekrasov(lambda: &Partition, mu: &Partition, u: &Rational, q: &Rational, t: &Rational) -> Rational {
    evaluate_qt_factors(&nekrasov_factors(lambda, mu), u, q, t)
}

/// `N_{λμ}(u)` via the second product form.
pub fn nekrasov_second_form(lambda: &Partition, mu: &Partition, u: &Rational, q: &Rational, t: &Rational) -> Rational {
    evaluate_qt_factors(&nekrasov_factors_second_form(lambda, mu), u, q, t)
}

/// One linear factor `1 - u·q^{q_exp}·κ^{kappa_exp}` of a cyclic Nekrasov product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicFactor {
    pub q_exp: i64,
    pub kappa_exp: i64,
}

/// Linear factors of `N^{(k|N)}_{λμ}(u|q,κ)`.
///
/// The first product runs over `j ≥ i ≥ 1` with `j - i ≡ k`, the second over
/// `β ≥ α ≥ 1` with `β - α ≡ -k-1 (mod N)`. Pochhammer orders
/// `λ_j - λ_{j+1}` and `μ_β - μ_{β+1}` vanish beyond the lengths of `λ` and
/// `μ`, which bounds both scans.
pub fn nekrasov_cyclic_factors(k: i64, n: u32, lambda: &Partition, mu: &Partition) -> Vec<CyclicFactor> {
    let n = n as i64;
    let mut out = Vec::new();
    for j in 1..=lambda.len() as i64 {
        let order = lambda.part(j) - lambda.part(j + 1);
        if order == 0 {
            continue;
        }
        for i in 1..=j {
            if (j - i - k).rem_euclid(n) != 0 {
                continue;
            }
            let base = -mu.part(i) + lambda.part(j + 1);
            out.extend((0..order).map(|m| CyclicFactor {
                q_exp: base + m,
                kappa_exp: j - i,
            }));
        }
    }
    for beta in 1..=mu.len() as i64 {
        let order = mu.part(beta) - mu.part(beta + 1);
        if order == 0 {
            continue;
        }
        for alpha in 1..=beta {
            if (beta - alpha + k + 1).rem_euclid(n) != 0 {
                continue;
            }
            let base = lambda.part(alpha) - mu.part(beta);
            out.extend((0..order).map(|m| CyclicFactor {
                q_exp: base + m,
                kappa_exp: alpha - beta - 1,
            }));
        }
    }
    out
}

pub fn evaluate_cyclic_factors(factors: &[CyclicFactor], u: &Rational, q: &Rational, kappa: &Rational) -> Rational {
    factors.iter().fold(Rational::one(), |acc, f| {
        acc * (Rational::one() - u * rpow(q, f.q_exp) * rpow(kappa, f.kappa_exp))
    })
}

/// `N^{(k|N)}_{λμ}(u|q,κ)`.
pub fn nekrasov_cyclic(
    k: i64,
    n: u32,
    lambda: &Partition,
    mu: &Partition,
    u: &Rational,
    q: &Rational,
    kappa: &Rational,
) -> Rational {
    evaluate_cyclic_factors(&nekrasov_cyclic_factors(k, n, lambda, mu), u, q, kappa)
}
