//! Rational parameter sets shared by the builders and verifiers.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::{format_rational, rat, rpow, Error, Rational, Result};

/// Specialised values of `q`, `t = τ^N`, the κ root `κ₀` and the spectral vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSet {
    pub n: usize,
    pub q: Rational,
    pub tau: Rational,
    pub kappa0: Rational,
    pub s: Vec<Rational>,
}

/// Spectral values `s_i`: distinct primes over distinct primes.
pub fn default_spectral(n: usize) -> Vec<Rational> {
    const NUM: [i64; 6] = [3, 7, 13, 19, 29, 37];
    const DEN: [i64; 6] = [2, 5, 11, 17, 23, 31];
    (0..n).map(|i| rat(NUM[i % 6] + 41 * (i / 6) as i64, DEN[i % 6])).collect()
}

impl ParamSet {
    /// Defaults `q = 2/5`, `τ = 4/9`, `κ₀ = 5/8` and [`default_spectral`].
    pub fn defaults(n: usize) -> ParamSet {
        ParamSet {
            n,
            q: rat(2, 5),
            tau: rat(4, 9),
            kappa0: rat(5, 8),
            s: default_spectral(n),
        }
    }

    pub fn t(&self) -> Rational {
        rpow(&self.tau, self.n as i64)
    }

    /// Reject the parameter values where the constructions degenerate.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Invalid("N must be at least 1".into()));
        }
        let t = self.t();
        let bad = |x: &Rational| x.is_zero() || x.is_one() || *x == -Rational::one();
        if bad(&self.q) {
            return Err(Error::NonGeneric(format!("q = {}", format_rational(&self.q))));
        }
        if bad(&t) {
            return Err(Error::NonGeneric(format!("t = {}", format_rational(&t))));
        }
        if self.tau.is_zero() || self.kappa0.is_zero() {
            return Err(Error::NonGeneric("τ and κ₀ must be nonzero".into()));
        }
        if self.q == t {
            return Err(Error::NonGeneric("q = t makes q/t = 1".into()));
        }
        if self.s.len() != self.n {
            return Err(Error::Invalid(format!(
                "expected {} spectral values, got {}",
                self.n,
                self.s.len()
            )));
        }
        if self.s.iter().any(Zero::is_zero) {
            return Err(Error::NonGeneric("spectral values must be nonzero".into()));
        }
        Ok(())
    }

    pub fn describe(&self) -> ParamEcho {
        ParamEcho {
            n: self.n,
            q: format_rational(&self.q),
            tau: format_rational(&self.tau),
            t: format_rational(&self.t()),
            kappa0: format_rational(&self.kappa0),
            s: self.s.iter().map(format_rational).collect(),
        }
    }
}

/// Text echo of a [`ParamSet`] for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamEcho {
    pub n: usize,
    pub q: String,
    pub tau: String,
    pub t: String,
    pub kappa0: String,
    pub s: Vec<String>,
}

/// The `t ↦ q/t` swap. Every place that evaluates a function "at `q/t`"
/// goes through here.
pub fn dual_t(q: &Rational, t: &Rational) -> Rational {
    q / t
}
