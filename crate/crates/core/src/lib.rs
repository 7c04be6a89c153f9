//! Exact truncated power-series machinery for asymptotically free Macdonald
//! functions, their elliptic lift, and non-stationary Ruijsenaars functions,
//! together with order-by-order verifiers for the identities relating them.
//!
//! All arithmetic is over arbitrary-precision rationals. Parameters such as
//! `q`, `t` and the spectral variables are specialised to rational numbers;
//! the remaining variables are formal and every series is truncated by total
//! degree.

pub mod conformal;
pub mod error;
pub mod functions;
pub mod macdonald;
pub mod params;
pub mod partitions;
pub mod qspecial;
pub mod report;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use num_rational::BigRational as Rational;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

/// Build `num/den` as an exact rational.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer power of a rational, negative exponents allowed.
///
/// Panics on `0^negative`; callers guarantee a nonzero base.
pub fn rpow(base: &Rational, exp: i64) -> Rational {
    if exp == 0 {
        return Rational::one();
    }
    assert!(!(base.is_zero() && exp < 0), "zero raised to a negative power");
    let p: Rational = Pow::pow(base, exp.unsigned_abs() as u32);
    if exp < 0 {
        p.recip()
    } else {
        p
    }
}

/// Parse `"num/den"` (or a bare integer) into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = n
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {text:?}")))?;
    let den: BigInt = d
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {text:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `num/den` text for a rational (denominator always printed).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
