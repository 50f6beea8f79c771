//! Exact integer coefficient algebra for Dirichlet series.
//!
//! A series `Σ a_n n^{-s}` is stored as its first `N` coefficients. Products of
//! shifted Riemann zetas `ζ(s-k)` and finite polynomials in `2^{-s}` are all
//! that the closed forms in this crate need, so [`ClosedFormExpr`] models
//! exactly that shape.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DirichletError {
    #[error("coefficient overflow at n = {0}")]
    Overflow(usize),
    #[error("series limits differ: {0} vs {1}")]
    LimitMismatch(usize, usize),
    #[error("series limit must be at least 1")]
    EmptyLimit,
    #[error("modulus of a shift must be at least 1")]
    ZeroModulus,
}

pub type Result<T> = std::result::Result<T, DirichletError>;

/// Coefficients `a_1..=a_N` of a Dirichlet series.
///
/// Index 0 is never stored; [`CoefficientSeries::get`] takes the Dirichlet
/// index `n` directly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoefficientSeries {
    coeffs: Vec<i64>,
}

impl CoefficientSeries {
    /// The all-zero series up to `limit`.
    pub fn zeros(limit: usize) -> Result<Self> {
        if limit == 0 {
            return Err(DirichletError::EmptyLimit);
        }
        Ok(Self {
            coeffs: vec![0; limit],
        })
    }

    /// The convolution identity: 1 at n = 1, 0 elsewhere.
    pub fn identity(limit: usize) -> Result<Self> {
        let mut s = Self::zeros(limit)?;
        s.coeffs[0] = 1;
        Ok(s)
    }

    /// Builds a series from `a_1, a_2, ...`.
    pub fn from_coeffs(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(DirichletError::EmptyLimit);
        }
        Ok(Self { coeffs })
    }

    pub fn limit(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient at Dirichlet index `n` (1-based). Panics outside `1..=limit`.
    pub fn get(&self, n: usize) -> i64 {
        assert!(
            (1..=self.limit()).contains(&n),
            "index {n} outside 1..={}",
            self.limit()
        );
        self.coeffs[n - 1]
    }

    /// Coefficients in order `a_1, a_2, ...`.
    pub fn as_slice(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.coeffs
    }

    /// Pairs `(n, a_n)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().enumerate().map(|(i, &c)| (i + 1, c))
    }

    /// Restricts the series to its first `limit` coefficients.
    pub fn truncate(&self, limit: usize) -> Result<Self> {
        if limit == 0 {
            return Err(DirichletError::EmptyLimit);
        }
        let limit = limit.min(self.limit());
        Ok(Self {
            coeffs: self.coeffs[..limit].to_vec(),
        })
    }
}

/// Proper and improper divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors of 0 are not defined");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// d(n), the number of positive divisors.
pub fn divisor_count(n: u64) -> u64 {
    divisors(n).len() as u64
}

/// σ(n), the sum of positive divisors.
pub fn divisor_sum(n: u64) -> u64 {
    divisors(n).into_iter().sum()
}

/// Coefficients of ζ(s - k): the value at n is n^k.
pub fn zeta_shift_coeffs(k: u32, limit: usize) -> Result<CoefficientSeries> {
    let mut s = CoefficientSeries::zeros(limit)?;
    for (i, c) in s.coeffs.iter_mut().enumerate() {
        let n = i + 1;
        *c = (n as i64)
            .checked_pow(k)
            .ok_or(DirichletError::Overflow(n))?;
    }
    Ok(s)
}

fn check_limits(a: &CoefficientSeries, b: &CoefficientSeries) -> Result<usize> {
    if a.limit() != b.limit() {
        return Err(DirichletError::LimitMismatch(a.limit(), b.limit()));
    }
    Ok(a.limit())
}

/// Dirichlet product: `(A * B)_n = Σ_{d | n} A_d B_{n/d}`.
pub fn convolve(a: &CoefficientSeries, b: &CoefficientSeries) -> Result<CoefficientSeries> {
    let limit = check_limits(a, b)?;
    let mut out = vec![0i64; limit];
    for d in 1..=limit {
        let ad = a.coeffs[d - 1];
        if ad == 0 {
            continue;
        }
        for e in 1..=limit / d {
            let n = d * e;
            let term = ad
                .checked_mul(b.coeffs[e - 1])
                .ok_or(DirichletError::Overflow(n))?;
            out[n - 1] = out[n - 1]
                .checked_add(term)
                .ok_or(DirichletError::Overflow(n))?;
        }
    }
    Ok(CoefficientSeries { coeffs: out })
}

/// `c · m^{-s} · A`: the coefficient at n is `c · A_{n/m}` when `m | n`, else 0.
pub fn scale_shift(a: &CoefficientSeries, m: usize, c: i64) -> Result<CoefficientSeries> {
    if m == 0 {
        return Err(DirichletError::ZeroModulus);
    }
    let limit = a.limit();
    let mut out = vec![0i64; limit];
    for n in (m..=limit).step_by(m) {
        out[n - 1] = c
            .checked_mul(a.coeffs[n / m - 1])
            .ok_or(DirichletError::Overflow(n))?;
    }
    Ok(CoefficientSeries { coeffs: out })
}

/// Pointwise sum.
pub fn add(a: &CoefficientSeries, b: &CoefficientSeries) -> Result<CoefficientSeries> {
    check_limits(a, b)?;
    let coeffs = a
        .iter()
        .zip(b.coeffs.iter())
        .map(|((n, x), &y)| x.checked_add(y).ok_or(DirichletError::Overflow(n)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoefficientSeries { coeffs })
}

/// One summand of a closed form: `q(2^{-s}) · ∏ ζ(s - k)` over `shifts`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    /// `q_0 + q_1 2^{-s} + ... + q_k 2^{-ks}`, lowest degree first.
    pub two_adic_poly: Vec<i64>,
    /// Multiset of zeta shifts, kept sorted. Empty means the term is a bare
    /// Dirichlet polynomial.
    pub shifts: Vec<u32>,
}

impl Term {
    pub fn new(two_adic_poly: Vec<i64>, mut shifts: Vec<u32>) -> Self {
        shifts.sort_unstable();
        Self {
            two_adic_poly,
            shifts,
        }
    }
}

/// A finite sum of [`Term`]s.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ClosedFormExpr {
    pub terms: Vec<Term>,
}

impl ClosedFormExpr {
    pub fn new(terms: Vec<Term>) -> Self {
        Self { terms }
    }
}

/// Product of the shifted zetas of `shifts`, as coefficients up to `limit`.
pub fn zeta_product(shifts: &[u32], limit: usize) -> Result<CoefficientSeries> {
    let mut acc = CoefficientSeries::identity(limit)?;
    for &k in shifts {
        acc = convolve(&acc, &zeta_shift_coeffs(k, limit)?)?;
    }
    Ok(acc)
}

/// Exact coefficients `1..=limit` of a closed form.
pub fn eval_closed_form(expr: &ClosedFormExpr, limit: usize) -> Result<CoefficientSeries> {
    let mut total = CoefficientSeries::zeros(limit)?;
    for term in &expr.terms {
        let zetas = zeta_product(&term.shifts, limit)?;
        for (k, &q) in term.two_adic_poly.iter().enumerate() {
            if q == 0 {
                continue;
            }
            // 2^k beyond the limit contributes nothing.
            let Some(m) = 1usize.checked_shl(k as u32).filter(|&m| m <= limit) else {
                continue;
            };
            total = add(&total, &scale_shift(&zetas, m, q)?)?;
        }
    }
    Ok(total)
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// First coprime pair `(m, n)`, `1 < m < n`, `mn ≤ N`, with `A_{mn} ≠ A_m A_n`.
///
/// Returns `Some((1, 1))` when `A_1 ≠ 1`.
pub fn multiplicativity_witness(a: &CoefficientSeries) -> Option<(usize, usize)> {
    if a.get(1) != 1 {
        return Some((1, 1));
    }
    let limit = a.limit();
    for m in 2..=limit {
        for n in (m + 1)..=(limit / m) {
            if gcd(m, n) != 1 {
                continue;
            }
            let product = a.get(m).checked_mul(a.get(n));
            if product != Some(a.get(m * n)) {
                return Some((m, n));
            }
        }
    }
    None
}

/// True iff `A_1 = 1` and `A_{mn} = A_m A_n` for every coprime pair with `mn ≤ N`.
pub fn is_multiplicative(a: &CoefficientSeries) -> bool {
    multiplicativity_witness(a).is_none()
}

fn fmt_power_of_two(f: &mut fmt::Formatter<'_>, k: usize) -> fmt::Result {
    if k == 1 {
        write!(f, "2^(-s)")
    } else {
        write!(f, "2^(-{k}s)")
    }
}

struct Poly<'a>(&'a [i64]);

impl fmt::Display for Poly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &q) in self.0.iter().enumerate() {
            if q == 0 {
                continue;
            }
            let magnitude = q.unsigned_abs();
            if first {
                if q < 0 {
                    write!(f, "-")?;
                }
            } else if q < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (k, magnitude) {
                (0, _) => write!(f, "{magnitude}")?,
                (_, 1) => fmt_power_of_two(f, k)?,
                _ => {
                    write!(f, "{magnitude}*")?;
                    fmt_power_of_two(f, k)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nonzero: Vec<usize> = (0..self.two_adic_poly.len())
            .filter(|&k| self.two_adic_poly[k] != 0)
            .collect();
        let poly = Poly(&self.two_adic_poly);
        if self.shifts.is_empty() {
            return write!(f, "{poly}");
        }
        match nonzero.as_slice() {
            [0] if self.two_adic_poly[0] == 1 => {}
            [_] => write!(f, "{poly} * ")?,
            _ => write!(f, "({poly}) * ")?,
        }
        for &k in &self.shifts {
            if k == 0 {
                write!(f, "Z(s)")?;
            } else {
                write!(f, "Z(s-{k})")?;
            }
        }
        Ok(())
    }
}

/// Renders e.g. `(1 + 8*2^(-2s)) * Z(s)Z(s-1)Z(s-2)`; `Z(s-k)` stands for ζ(s - k).
impl fmt::Display for ClosedFormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{term}")?;
        }
        Ok(())
    }
}
