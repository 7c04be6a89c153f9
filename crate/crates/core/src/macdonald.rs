//! The Macdonald q-difference operator `D_N` acting on series in the ratios
//! `y_k = x_{k+1}/x_k`, the eigen-equation and duality checks for
//! `f^{gl_N}`, and an independent Gram–Schmidt construction of Macdonald
//! polynomials.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::functions::{f_gl_n, f_gl_series, sigma_names, y_names, y_ring, y_sigma_ring, RatioMap, SeriesRole, Spectral};
use crate::params::dual_t;
use crate::partitions::{partitions_of, Partition};
use crate::qspecial::{qpoch_infinite_series, Euler};
use crate::report::VerificationReport;
use crate::series::{linear_factor_power, Monomial, Ring, Series};
use crate::{format_rational, rpow, Error, Rational, Result};

/// Numeric data of `D_N(s; q, t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceOperatorSpec {
    pub n: usize,
    pub s: Vec<Rational>,
    pub q: Rational,
    pub t: Rational,
}

fn ratio_mono(ring: &Ring, from: usize, to: usize) -> Monomial {
    // x_to / x_from for from < to
    let mut e = vec![0; ring.nvars()];
    for slot in e.iter_mut().take(to - 1).skip(from - 1) {
        *slot = 1;
    }
    Monomial(e)
}

/// `T_{q,x_k}`: the coefficient of `∏ y^e` picks up `q^{e_{k-1} - e_k}`.
pub fn q_shift(f: &Series, k: usize, q: &Rational) -> Series {
    let n = f.ring().nvars() + 1;
    f.map_coefficients(|m, c| {
        let before = if k >= 2 { m.0[k - 2] as i64 } else { 0 };
        let after = if k < n { m.0[k - 1] as i64 } else { 0 };
        c * rpow(q, before - after)
    })
}

/// `D_N f` for `f` a series in `y_1..y_{N-1}`.
pub fn apply_dn(f: &Series, spec: &DifferenceOperatorSpec) -> Result<Series> {
    let ring = f.ring().clone();
    let n = spec.n;
    if ring.nvars() + 1 != n {
        return Err(Error::RingMismatch(format!(
            "D_{n} needs {} ratio variables, series has {}",
            n - 1,
            ring.nvars()
        )));
    }
    let t_inv = spec.t.recip();
    let one = Rational::one();
    let parts: Vec<Series> = (1..=n)
        .into_par_iter()
        .map(|k| -> Result<Series> {
            let mut pre = Series::constant(&ring, spec.s[k - 1].clone());
            for l in 1..=n {
                if l == k {
                    continue;
                }
                let (mono, c) = if l < k {
                    (ratio_mono(&ring, l, k), &spec.t)
                } else {
                    (ratio_mono(&ring, k, l), &t_inv)
                };
                pre = &pre * &linear_factor_power(&ring, c, &mono, 1)?;
                pre = &pre * &linear_factor_power(&ring, &one, &mono, -1)?;
            }
            Ok(&pre * &q_shift(f, k, &spec.q))
        })
        .collect::<Result<_>>()?;
    Ok(Series::sum(&ring, &parts))
}

/// `D_N f - (s_1 + … + s_N) f`.
pub fn residual(f: &Series, spec: &DifferenceOperatorSpec) -> Result<Series> {
    let eigen: Rational = spec.s.iter().sum();
    Ok(&apply_dn(f, spec)? - &f.scale(&eigen))
}

/// The eigen-equation residual of `f^{gl_N}(x; s|q,t)` at numeric `s`.
pub fn eigen_residual(n: usize, degree: u32, s: &[Rational], q: &Rational, t: &Rational) -> Result<Series> {
    let f = f_gl_n(n, degree, &SeriesRole::XFormalSNumeric(s.to_vec()), q, t)?;
    residual(
        &f,
        &DifferenceOperatorSpec {
            n,
            s: s.to_vec(),
            q: q.clone(),
            t: t.clone(),
        },
    )
}

fn base_params(n: usize, q: &Rational, t: &Rational) -> BTreeMap<String, String> {
    let mut p = BTreeMap::new();
    p.insert("n".into(), n.to_string());
    p.insert("q".into(), format_rational(q));
    p.insert("t".into(), format_rational(t));
    p
}

fn spectral_param(p: &mut BTreeMap<String, String>, s: &[Rational]) {
    let text: Vec<String> = s.iter().map(format_rational).collect();
    p.insert("s".into(), text.join(","));
}

/// Report form of [`eigen_residual`].
pub fn check_eigen(n: usize, degree: u32, s: &[Rational], q: &Rational, t: &Rational) -> VerificationReport {
    let mut params = base_params(n, q, t);
    spectral_param(&mut params, s);
    let mut report = VerificationReport::new("eigen", params.clone(), degree);
    match eigen_residual(n, degree, s, q, t) {
        Ok(res) => {
            let zero = Series::zero(res.ring());
            if let Err(e) = report.compare_series(&res, &zero) {
                return VerificationReport::error("eigen", params, degree, &e);
            }
            report
        }
        Err(e) => VerificationReport::error("eigen", params, degree, &e),
    }
}

fn duality_prefactor(ring: &Arc<Ring>, ratios: &RatioMap, n: usize, num: &Rational, den: &Rational, q: &Rational) -> Result<Series> {
    let mut out = Series::one(ring);
    for i in 1..=n {
        for j in i + 1..=n {
            out = &out * &qpoch_infinite_series(ring, num, ratios.get(i, j), q, Euler::Product)?;
            out = &out * &qpoch_infinite_series(ring, den, ratios.get(i, j), q, Euler::Reciprocal)?;
        }
    }
    Ok(out)
}

/// Bispectral duality
/// `∏ (q s_j/s_i;q)_∞/(q s_j/(t s_i);q)_∞ f(x;s) = ∏ (q x_j/x_i;q)_∞/(q x_j/(t x_i);q)_∞ f(s;x)`
/// in `(y, σ)`.
pub fn bispectral_sides(n: usize, degree: u32, q: &Rational, t: &Rational) -> Result<(Series, Series)> {
    let ring = y_sigma_ring(n, degree)?;
    let x = RatioMap::consecutive(&ring, &y_names(n))?;
    let s = RatioMap::consecutive(&ring, &sigma_names(n))?;
    let q_over_t = dual_t(q, t);
    let lhs = &duality_prefactor(&ring, &s, n, q, &q_over_t, q)?
        * &f_gl_series(&ring, n, &x, &Spectral::Formal(s.clone()), q, t)?;
    let rhs = &duality_prefactor(&ring, &x, n, q, &q_over_t, q)?
        * &f_gl_series(&ring, n, &s, &Spectral::Formal(x), q, t)?;
    Ok((lhs, rhs))
}

pub fn check_bispectral(n: usize, degree: u32, q: &Rational, t: &Rational) -> VerificationReport {
    let params = base_params(n, q, t);
    let run = || -> Result<VerificationReport> {
        let (lhs, rhs) = bispectral_sides(n, degree, q, t)?;
        let mut report = VerificationReport::new("bispectral", params.clone(), degree);
        report.compare_series(&lhs, &rhs)?;
        Ok(report)
    };
    run().unwrap_or_else(|e| VerificationReport::error("bispectral", params.clone(), degree, &e))
}

/// Poincaré duality
/// `f(x;s|q,t) = ∏ (t x_j/x_i;q)_∞/(q x_j/(t x_i);q)_∞ f(x;s|q,q/t)` at numeric `s`.
pub fn poincare_sides(n: usize, degree: u32, s: &[Rational], q: &Rational, t: &Rational) -> Result<(Series, Series)> {
    let ring = y_ring(n, degree)?;
    let x = RatioMap::consecutive(&ring, &y_names(n))?;
    let spectral = Spectral::Numeric(s.to_vec());
    let lhs = f_gl_series(&ring, n, &x, &spectral, q, t)?;
    let dual = dual_t(q, t);
    let rhs = &duality_prefactor(&ring, &x, n, t, &dual, q)? * &f_gl_series(&ring, n, &x, &spectral, q, &dual)?;
    Ok((lhs, rhs))
}

pub fn check_poincare(n: usize, degree: u32, s: &[Rational], q: &Rational, t: &Rational) -> VerificationReport {
    let mut params = base_params(n, q, t);
    spectral_param(&mut params, s);
    let run = || -> Result<VerificationReport> {
        let (lhs, rhs) = poincare_sides(n, degree, s, q, t)?;
        let mut report = VerificationReport::new("poincare", params.clone(), degree);
        report.compare_series(&lhs, &rhs)?;
        Ok(report)
    };
    run().unwrap_or_else(|e| VerificationReport::error("poincare", params.clone(), degree, &e))
}

/// A polynomial in `x_1..x_N` keyed by exponent vectors.
pub type Polynomial = BTreeMap<Vec<u32>, Rational>;

fn poly_mul(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut out = Polynomial::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let slot = out.entry(e).or_insert_with(Rational::zero);
            *slot += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn power_sum(r: u32, vars: usize) -> Polynomial {
    (0..vars)
        .map(|i| {
            let mut e = vec![0; vars];
            e[i] = r;
            (e, Rational::one())
        })
        .collect()
}

fn padded(lambda: &Partition, vars: usize) -> Vec<u32> {
    let mut e = lambda.parts().to_vec();
    e.resize(vars, 0);
    e
}

/// `z_ρ ∏ (1 - q^{ρ_i})/(1 - t^{ρ_i})`.
fn power_sum_norm(rho: &Partition, q: &Rational, t: &Rational) -> Result<Rational> {
    let mut z = Rational::one();
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for &r in rho.parts() {
        *counts.entry(r).or_default() += 1;
    }
    for (&r, &m) in &counts {
        for k in 1..=m {
            z *= Rational::from_integer((r as u64 * k).into());
        }
    }
    let one = Rational::one();
    for &r in rho.parts() {
        let den = &one - rpow(t, r as i64);
        if den.is_zero() {
            return Err(Error::NonGeneric(format!("t^{r} = 1")));
        }
        z *= (&one - rpow(q, r as i64)) / den;
    }
    Ok(z)
}

fn invert_matrix(mut a: Vec<Vec<Rational>>) -> Result<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::ZeroPivot)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].recip();
        for j in 0..n {
            a[col][j] *= &p;
            inv[col][j] *= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let (x, y) = (&a[col][j] * &f, &inv[col][j] * &f);
                    a[r][j] -= x;
                    inv[r][j] -= y;
                }
            }
        }
    }
    Ok(inv)
}

/// Macdonald polynomials `P_λ`, `|λ| = n`, in the monomial basis `m_μ`
/// (all partitions of `n`), via Gram–Schmidt on the power-sum inner product
/// `⟨p_ρ, p_σ⟩ = δ_{ρσ} z_ρ ∏ (1-q^{ρ_i})/(1-t^{ρ_i})`.
pub struct MacdonaldBasis {
    pub partitions: Vec<Partition>,
    /// `polys[k][μ]`: coefficient of `m_{partitions[μ]}` in `P_{partitions[k]}`.
    pub polys: Vec<Vec<Rational>>,
    gram: Vec<Vec<Rational>>,
}

impl MacdonaldBasis {
    pub fn new(n: u32, q: &Rational, t: &Rational) -> Result<MacdonaldBasis> {
        // increasing dominance-compatible order: (1^n) first
        let mut parts = partitions_of(n);
        parts.reverse();
        let vars = n.max(1) as usize;
        let dim = parts.len();
        // p_ρ = Σ_μ M[ρ][μ] m_μ, read off at the sorted exponent x^μ
        let mut m = vec![vec![Rational::zero(); dim]; dim];
        for (r, rho) in parts.iter().enumerate() {
            let mut poly: Polynomial = [(vec![0; vars], Rational::one())].into_iter().collect();
            for &part in rho.parts() {
                poly = poly_mul(&poly, &power_sum(part, vars));
            }
            for (c, mu) in parts.iter().enumerate() {
                m[r][c] = poly.get(&padded(mu, vars)).cloned().unwrap_or_else(Rational::zero);
            }
        }
        let minv = invert_matrix(m)?;
        let norms: Vec<Rational> = parts.iter().map(|rho| power_sum_norm(rho, q, t)).collect::<Result<_>>()?;
        // ⟨m_μ, m_ν⟩ = Σ_ρ Minv[μ][ρ] Minv[ν][ρ] z_ρ(q,t)
        let mut gram = vec![vec![Rational::zero(); dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                gram[a][b] = (0..dim).map(|r| &minv[a][r] * &minv[b][r] * &norms[r]).sum();
            }
        }
        let mut polys: Vec<Vec<Rational>> = Vec::with_capacity(dim);
        let mut self_norms: Vec<Rational> = Vec::with_capacity(dim);
        let ip = |u: &[Rational], v: &[Rational]| -> Rational {
            let mut acc = Rational::zero();
            for a in 0..dim {
                if u[a].is_zero() {
                    continue;
                }
                for b in 0..dim {
                    if !v[b].is_zero() {
                        acc += &u[a] * &v[b] * &gram[a][b];
                    }
                }
            }
            acc
        };
        for k in 0..dim {
            let mut v = vec![Rational::zero(); dim];
            v[k] = Rational::one();
            let mut e_k = v.clone();
            for (prev, norm) in polys.iter().zip(&self_norms) {
                let coeff = ip(&e_k, prev) / norm;
                for a in 0..dim {
                    v[a] -= &coeff * &prev[a];
                }
            }
            e_k.clone_from(&v);
            let norm = ip(&e_k, &e_k);
            if norm.is_zero() {
                return Err(Error::NonGeneric("singular Gram matrix".into()));
            }
            polys.push(v);
            self_norms.push(norm);
        }
        Ok(MacdonaldBasis {
            partitions: parts,
            polys,
            gram,
        })
    }

    pub fn inner(&self, a: usize, b: usize) -> Rational {
        let dim = self.partitions.len();
        let mut acc = Rational::zero();
        for x in 0..dim {
            for y in 0..dim {
                acc += &self.polys[a][x] * &self.polys[b][y] * &self.gram[x][y];
            }
        }
        acc
    }

    pub fn index_of(&self, lambda: &Partition) -> Option<usize> {
        self.partitions.iter().position(|p| p == lambda)
    }
}

/// Monic `P_λ(x_1..x_N)` as a polynomial in `N` variables.
pub fn macdonald_oracle(lambda: &Partition, n: usize, q: &Rational, t: &Rational) -> Result<Polynomial> {
    if lambda.len() > n {
        return Err(Error::Invalid(format!("ℓ({lambda}) exceeds N = {n}")));
    }
    let basis = MacdonaldBasis::new(lambda.size(), q, t)?;
    let k = basis.index_of(lambda).expect("λ is a partition of |λ|");
    let mut out = Polynomial::new();
    for (mu, c) in basis.partitions.iter().zip(&basis.polys[k]) {
        if c.is_zero() || mu.len() > n {
            continue;
        }
        for e in distinct_permutations(&padded(mu, n)) {
            out.insert(e, c.clone());
        }
    }
    Ok(out)
}

fn distinct_permutations(v: &[u32]) -> Vec<Vec<u32>> {
    let mut cur = v.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

/// `y`-exponents `e` with `x^a = x^λ ∏ y^e`, i.e. `e_k = Σ_{j≤k} (λ_j - a_j)`.
fn ratio_exponents(lambda: &[u32], a: &[u32]) -> Option<Vec<u32>> {
    let mut acc = 0i64;
    let mut out = Vec::with_capacity(a.len().saturating_sub(1));
    for k in 0..a.len().saturating_sub(1) {
        acc += lambda[k] as i64 - a[k] as i64;
        out.push(u32::try_from(acc).ok()?);
    }
    Some(out)
}

/// Smallest truncation that sees the whole support of `x^{-λ} P_λ`.
pub fn specialization_degree(lambda: &Partition, n: usize, q: &Rational, t: &Rational) -> Result<u32> {
    let lam = padded(lambda, n);
    let oracle = macdonald_oracle(lambda, n, q, t)?;
    Ok(oracle
        .keys()
        .filter_map(|a| ratio_exponents(&lam, a))
        .map(|e| e.iter().sum::<u32>())
        .max()
        .unwrap_or(0))
}

/// `x^λ f^{gl_N}(x; s|q,t)` at `s_i = q^{λ_i} t^{N-i}` against `P_λ`.
///
/// `slack` extra degrees beyond the oracle support are tracked; all of them
/// must vanish on the series side.
pub fn check_specialization(lambda: &Partition, n: usize, slack: u32, q: &Rational, t: &Rational) -> VerificationReport {
    let mut params = base_params(n, q, t);
    params.insert("lambda".into(), lambda.to_string());
    params.insert("slack".into(), slack.to_string());
    let run = || -> Result<VerificationReport> {
        let lam = padded(lambda, n);
        let support = specialization_degree(lambda, n, q, t)?;
        let degree = support + slack;
        let s: Vec<Rational> = (1..=n)
            .map(|i| rpow(q, lam[i - 1] as i64) * rpow(t, (n - i) as i64))
            .collect();
        let f = f_gl_n(n, degree, &SeriesRole::XFormalSNumeric(s), q, t)?;
        let oracle = macdonald_oracle(lambda, n, q, t)?;
        let mut expected = Vec::new();
        for (a, c) in &oracle {
            let e = ratio_exponents(&lam, a).ok_or_else(|| {
                Error::InadmissibleMonomial(a.iter().map(|&v| v as i64).collect())
            })?;
            expected.push((Monomial(e), c.clone()));
        }
        let expected = Series::from_terms(f.ring(), expected);
        let mut report = VerificationReport::new("spec-macdonald", params.clone(), degree);
        report.compare_series(&f, &expected)?;
        Ok(report.with_detail(format!("support degree {support}, margin {slack}")))
    };
    run().unwrap_or_else(|e| VerificationReport::error("spec-macdonald", params.clone(), 0, &e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{c_n_coeff, ThetaMatrix};
    use crate::params::default_spectral;
    use crate::rat;
    fn spec(n: usize) -> DifferenceOperatorSpec {
        DifferenceOperatorSpec {
            n,
            s: default_spectral(n),
            q: rat(2, 5),
            t: rat(3, 7),
        }
    }

    #[test]
    fn dn_on_constant_has_spectral_sum() {
        let sp = spec(3);
        let ring = y_ring(3, 2).unwrap();
        let out = apply_dn(&Series::one(&ring), &sp).unwrap();
        assert_eq!(out.constant_term(), sp.s.iter().sum::<Rational>());
    }

    #[test]
    fn dn_at_n1_is_multiplication() {
        let sp = spec(1);
        let ring = y_ring(1, 3).unwrap();
        let f = Series::constant(&ring, rat(7, 3));
        assert_eq!(apply_dn(&f, &sp).unwrap(), f.scale(&sp.s[0]));
    }

    #[test]
    fn q_shift_exponent_rule() {
        let ring = y_ring(2, 2).unwrap();
        let y = Series::term(&ring, Monomial(vec![1]), rat(1, 1));
        let q = rat(2, 5);
        assert_eq!(q_shift(&y, 1, &q), y.scale(&q.recip()));
        assert_eq!(q_shift(&y, 2, &q), y.scale(&q));
    }

    #[test]
    fn eigen_equation_small() {
        let (q, t) = (rat(2, 5), rat(3, 7));
        for (n, d) in [(1usize, 3u32), (2, 3), (3, 2)] {
            let res = eigen_residual(n, d, &default_spectral(n), &q, &t).unwrap();
            assert!(res.is_zero(), "N = {n}: {res}");
        }
    }

    #[test]
    fn eigen_order_one_determines_c_n() {
        // Solve the degree-1 eigen-equation for the y_1 coefficient of a trial
        // series 1 + c·y_1 at N = 2: linear in c, so c = -r0/(r1 - r0) where r0,
        // r1 are the y_1 residual coefficients at c = 0 and c = 1.
        let sp = spec(2);
        let ring = y_ring(2, 1).unwrap();
        let y1 = Monomial(vec![1]);
        let trial = |c: Rational| -> Rational {
            let f = &Series::one(&ring) + &Series::term(&ring, y1.clone(), c);
            residual(&f, &sp).unwrap().coefficient(&y1)
        };
        let (r0, r1) = (trial(rat(0, 1)), trial(rat(1, 1)));
        let solved = -r0.clone() / (r1 - r0);
        let mut th = ThetaMatrix::zero(2);
        th.set(1, 2, 1).unwrap();
        assert_eq!(solved, c_n_coeff(&th, &sp.s, &sp.q, &sp.t).unwrap());
    }

    #[test]
    fn eigen_order_one_n3() {
        // Degree-1 equations at N = 3 decouple in the y_1 and y_2 coefficients.
        let sp = spec(3);
        let ring = y_ring(3, 1).unwrap();
        let y1 = Monomial(vec![1, 0]);
        let trial = |c: Rational| -> Rational {
            let f = &Series::one(&ring) + &Series::term(&ring, y1.clone(), c);
            residual(&f, &sp).unwrap().coefficient(&y1)
        };
        let (r0, r1) = (trial(rat(0, 1)), trial(rat(1, 1)));
        let solved = -r0.clone() / (r1 - r0);
        let mut th = ThetaMatrix::zero(3);
        th.set(1, 2, 1).unwrap();
        assert_eq!(solved, c_n_coeff(&th, &sp.s, &sp.q, &sp.t).unwrap());
    }

    #[test]
    fn perturbed_coefficient_leaves_residual() {
        let sp = spec(2);
        let f = f_gl_n(2, 3, &SeriesRole::XFormalSNumeric(sp.s.clone()), &sp.q, &sp.t).unwrap();
        let bumped = &f + &Series::term(f.ring(), Monomial(vec![2]), rat(1, 1));
        let res = residual(&bumped, &sp).unwrap();
        assert!(!res.coefficient(&Monomial(vec![2])).is_zero());
        assert!(res.coefficient(&Monomial(vec![1])).is_zero());
    }

    #[test]
    fn dualities_small() {
        let (q, t) = (rat(2, 5), rat(3, 7));
        for n in 1..=3 {
            assert!(check_bispectral(n, 2, &q, &t).passed(), "bispectral N = {n}");
            assert!(check_poincare(n, 3, &default_spectral(n), &q, &t).passed(), "poincare N = {n}");
        }
    }

    #[test]
    fn macdonald_p2() {
        let (q, t) = (rat(2, 5), rat(3, 7));
        let basis = MacdonaldBasis::new(2, &q, &t).unwrap();
        let k = basis.index_of(&Partition::new(vec![2]).unwrap()).unwrap();
        let m11 = basis.index_of(&Partition::new(vec![1, 1]).unwrap()).unwrap();
        let one = rat(1, 1);
        let expected = (&one + &q) * (&one - &t) / (&one - &q * &t);
        assert_eq!(basis.polys[k][m11], expected);
        assert_eq!(basis.polys[k][k], one);
        let p1 = macdonald_oracle(&Partition::new(vec![1]).unwrap(), 3, &q, &t).unwrap();
        assert_eq!(p1.len(), 3);
        assert!(p1.values().all(|c| c.is_one()));
        let p0 = macdonald_oracle(&Partition::empty(), 2, &q, &t).unwrap();
        assert_eq!(p0, [(vec![0, 0], rat(1, 1))].into_iter().collect());
    }

    #[test]
    fn macdonald_p2_is_eigenvector_of_dx() {
        // 𝒟_x = Σ_i ∏_{j≠i} (x_j - t x_i)/(x_j - x_i) T_{q,x_i} at N = 2 on
        // P_(2): check 𝒟_x P · (x_2 - x_1) = e · P · (x_2 - x_1) as polynomials.
        let (q, t) = (rat(2, 5), rat(3, 7));
        let p = macdonald_oracle(&Partition::new(vec![2]).unwrap(), 2, &q, &t).unwrap();
        let shift = |i: usize| -> Polynomial {
            p.iter()
                .map(|(e, c)| (e.clone(), c * rpow(&q, e[i] as i64)))
                .collect()
        };
        let lin = |a: Rational, b: Rational| -> Polynomial {
            [(vec![1, 0], a), (vec![0, 1], b)].into_iter().filter(|(_, c)| !c.is_zero()).collect()
        };
        // i = 1: (x_2 - t x_1)/(x_2 - x_1); i = 2: (x_1 - t x_2)/(x_1 - x_2) = -(x_1 - t x_2)/(x_2 - x_1)
        let mut lhs = poly_mul(&lin(-t.clone(), rat(1, 1)), &shift(0));
        for (e, c) in poly_mul(&lin(rat(-1, 1), t.clone()), &shift(1)) {
            *lhs.entry(e).or_insert_with(Rational::zero) += c;
        }
        lhs.retain(|_, c| !c.is_zero());
        let eigen = rpow(&q, 2) * &t + rat(1, 1);
        let rhs: Polynomial = poly_mul(&lin(rat(-1, 1), rat(1, 1)), &p)
            .into_iter()
            .map(|(e, c)| (e, c * &eigen))
            .collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn macdonald_orthogonality() {
        let (q, t) = (rat(2, 5), rat(3, 7));
        for n in 1..=4 {
            let basis = MacdonaldBasis::new(n, &q, &t).unwrap();
            for a in 0..basis.partitions.len() {
                for b in 0..a {
                    assert!(basis.inner(a, b).is_zero(), "n = {n}");
                }
            }
        }
    }

    #[test]
    fn specialization_small() {
        let (q, t) = (rat(2, 5), rat(3, 7));
        for lam in [vec![], vec![1], vec![2], vec![1, 1]] {
            let lambda = Partition::new(lam).unwrap();
            let r = check_specialization(&lambda, 2, 2, &q, &t);
            assert!(r.passed(), "{lambda}: {r:?}");
        }
        let r = check_specialization(&Partition::new(vec![1]).unwrap(), 2, 1, &q, &t);
        assert_eq!(r.degree, 2);
    }

    #[test]
    fn ratio_exponent_inverse() {
        assert_eq!(ratio_exponents(&[2, 1, 0], &[0, 1, 2]), Some(vec![2, 2]));
        assert_eq!(ratio_exponents(&[1, 0], &[2, 0]), None);
    }
}
