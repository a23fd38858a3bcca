//! Hilbert series: truncated power series in `t` and in `(u, t)`, the
//! closed form for the invariant subalgebra, the graded-character route, and
//! the count coming from irreducible words of a confluent system.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::central::CENTRAL_GENS;
use crate::coeff::{rat, Rational};
use crate::rewrite::{irreducible_monomials, RuleSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HilbertError {
    #[error("denominator vanishes at t = 0")]
    DenominatorVanishesAtZero,
    #[error("rank must be at least {0}")]
    RankTooSmall(usize),
}

/// Power series `c_0 + c_1 t + … + c_N t^N`, truncated at `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series1 {
    coeffs: Vec<Rational>,
}

impl Series1 {
    pub fn zero(n: usize) -> Self {
        Self { coeffs: vec![Rational::zero(); n + 1] }
    }

    pub fn one(n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[0] = Rational::one();
        s
    }

    /// Polynomial with integer coefficients (ascending), truncated at `n`.
    pub fn from_poly(p: &[i64], n: usize) -> Self {
        let mut s = Self::zero(n);
        for (i, &c) in p.iter().enumerate().take(n + 1) {
            s.coeffs[i] = rat(c);
        }
        s
    }

    pub fn from_counts(c: &[u64]) -> Self {
        Self { coeffs: c.iter().map(|&x| Rational::from_integer(x.into())).collect() }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    /// Coefficients as integers, if they all are.
    pub fn to_integers(&self) -> Option<Vec<i128>> {
        use num_traits::ToPrimitive;
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer().to_i128()).flatten()).collect()
    }

    pub fn truncate(&self, n: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(n + 1, Rational::zero());
        Self { coeffs: c }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.truncation()), |acc, _| &acc * self)
    }

    /// `1/self`, needing `c_0 ≠ 0`.
    pub fn inverse(&self) -> Result<Self, HilbertError> {
        let n = self.truncation();
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(HilbertError::DenominatorVanishesAtZero);
        }
        let mut out = vec![Rational::zero(); n + 1];
        out[0] = c0.recip();
        for k in 1..=n {
            let mut s = Rational::zero();
            for j in 1..=k {
                s += &self.coeffs[j] * &out[k - j];
            }
            out[k] = -s / c0;
        }
        Ok(Self { coeffs: out })
    }
}

impl Add for &Series1 {
    type Output = Series1;
    fn add(self, o: &Series1) -> Series1 {
        let n = self.truncation().min(o.truncation());
        Series1 { coeffs: (0..=n).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect() }
    }
}

impl Sub for &Series1 {
    type Output = Series1;
    fn sub(self, o: &Series1) -> Series1 {
        let n = self.truncation().min(o.truncation());
        Series1 { coeffs: (0..=n).map(|i| &self.coeffs[i] - &o.coeffs[i]).collect() }
    }
}

impl Mul for &Series1 {
    type Output = Series1;
    fn mul(self, o: &Series1) -> Series1 {
        let n = self.truncation().min(o.truncation());
        let mut c = vec![Rational::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                c[i + j] += &self.coeffs[i] * &o.coeffs[j];
            }
        }
        Series1 { coeffs: c }
    }
}

impl fmt::Display for Series1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `num/den` to order `n`, exactly.
pub fn expand_rational(num: &[i64], den: &[i64], n: usize) -> Result<Series1, HilbertError> {
    if den.first().copied().unwrap_or(0) == 0 {
        return Err(HilbertError::DenominatorVanishesAtZero);
    }
    Ok(&Series1::from_poly(num, n) * &Series1::from_poly(den, n).inverse()?)
}

/// Dense integer polynomial product.
pub fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

pub fn poly_pow(a: &[i64], k: u32) -> Vec<i64> {
    (0..k).fold(vec![1], |acc, _| poly_mul(&acc, a))
}

fn binom(n: u64, k: u64) -> i64 {
    if k > n {
        return 0;
    }
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r as i64
}

/// `⟨n, k⟩ = binom(n + k − 1, k)`, the coefficient of `x^k` in `(1 − x)^{-n}`.
pub fn multichoose(n: u64, k: u64) -> i64 {
    if n == 0 {
        return i64::from(k == 0);
    }
    binom(n + k - 1, k)
}

/// The bracket `Σ binom(n−2,k)² t^{2k} − Σ binom(n−2,k) binom(n−2,k+1) t^{2k+1}`.
pub fn closed_form_bracket(n: usize) -> Vec<i64> {
    let m = (n - 2) as u64;
    let mut p = vec![0; 2 * n];
    for k in 0..=m {
        p[2 * k as usize] += binom(m, k).pow(2);
        p[2 * k as usize + 1] -= binom(m, k) * binom(m, k + 1);
    }
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// Hilbert series of the invariant subalgebra of rank `n`:
/// `(1+t)^{n−2} / ((1−t)^n (1−t²)^{2n−3})` times the bracket.
///
/// At `n = 1` the binomial sums are empty; the invariants are the polynomial
/// ring on the one Casimir, so the series is `1/(1−t)`.
pub fn closed_form_h(n: usize, order: usize) -> Result<Series1, HilbertError> {
    match n {
        0 => Err(HilbertError::RankTooSmall(1)),
        1 => expand_rational(&[1], &[1, -1], order),
        _ => {
            let num = poly_mul(&poly_pow(&[1, 1], n as u32 - 2), &closed_form_bracket(n));
            let den = poly_mul(&poly_pow(&[1, -1], n as u32), &poly_pow(&[1, 0, -1], 2 * n as u32 - 3));
            expand_rational(&num, &den, order)
        }
    }
}

/// Truncated series in `t` whose coefficients are Laurent polynomials in
/// `u²`; `c[t][j + N]` is the coefficient of `u^{2j} t^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series2 {
    n: usize,
    c: Vec<Vec<Rational>>,
}

impl Series2 {
    pub fn zero(n: usize) -> Self {
        Self { n, c: vec![vec![Rational::zero(); 2 * n + 1]; n + 1] }
    }

    pub fn one(n: usize) -> Self {
        let mut s = Self::zero(n);
        s.c[0][n] = Rational::one();
        s
    }

    /// Embeds a series in `t` alone.
    pub fn from_t(s: &Series1) -> Self {
        let n = s.truncation();
        let mut out = Self::zero(n);
        for k in 0..=n {
            out.c[k][n] = s.coeff(k).clone();
        }
        out
    }

    /// `1/(1 − u^{2e} t)` for `e = ±1`.
    pub fn geometric(e: i32, n: usize) -> Self {
        let mut s = Self::zero(n);
        for k in 0..=n {
            let j = e * k as i32;
            s.c[k][(j + n as i32) as usize] = Rational::one();
        }
        s
    }

    /// Coefficient of `u^{2j} t^k`.
    pub fn coeff(&self, j: i32, k: usize) -> Rational {
        let idx = j + self.n as i32;
        if idx < 0 || idx as usize > 2 * self.n {
            return Rational::zero();
        }
        self.c[k][idx as usize].clone()
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.n), |acc, _| &acc * self)
    }

    /// The `u¹` coefficient of `(u − u^{-1})·self`, i.e. `[u⁰] − [u²]`.
    pub fn invariant_part(&self) -> Series1 {
        let mut out = Series1::zero(self.n);
        for k in 0..=self.n {
            out.coeffs[k] = self.coeff(0, k) - self.coeff(1, k);
        }
        out
    }
}

impl Mul for &Series2 {
    type Output = Series2;
    fn mul(self, o: &Series2) -> Series2 {
        let n = self.n.min(o.n);
        let mut out = Series2::zero(n);
        let off = n as i32;
        for k1 in 0..=n {
            for (a, x) in self.c[k1].iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let j1 = a as i32 - self.n as i32;
                for k2 in 0..=n - k1 {
                    for (b, y) in o.c[k2].iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        let j = j1 + b as i32 - o.n as i32;
                        // weights beyond ±N cannot reach t-degree ≤ N
                        if j.abs() <= off {
                            out.c[k1 + k2][(j + off) as usize] += x * y;
                        }
                    }
                }
            }
        }
        out
    }
}

/// Graded character of one reflection-equation factor,
/// `(1+t) / ((1−t)(1−u²t)(1−u^{-2}t))`.
pub fn rea_character(order: usize) -> Series2 {
    let t_part = expand_rational(&[1, 1], &[1, -1], order).expect("nonzero constant term");
    &(&Series2::from_t(&t_part) * &Series2::geometric(1, order)) * &Series2::geometric(-1, order)
}

/// Invariant dimensions from the graded character of `n` factors.
pub fn character_route(n: usize, order: usize) -> Series1 {
    rea_character(order).pow(n as u32).invariant_part()
}

/// The same extraction done by hand:
/// `((1+t)/(1−t))^n (Σ ⟨n,m⟩² t^{2m} − Σ ⟨n,m⟩⟨n,m+1⟩ t^{2m+1})`.
pub fn convolution_route(n: usize, order: usize) -> Series1 {
    let mut inner = Series1::zero(order);
    for m in 0..=order / 2 {
        let a = multichoose(n as u64, m as u64);
        inner.coeffs[2 * m] += rat(a * a);
        if 2 * m < order {
            inner.coeffs[2 * m + 1] -= rat(a * multichoose(n as u64, m as u64 + 1));
        }
    }
    let ratio = expand_rational(&[1, 1], &[1, -1], order).expect("nonzero constant term");
    &ratio.pow(n as u32) * &inner
}

/// `Π 1/(1 − t^{deg})` over the central generators.
pub fn central_series(order: usize) -> Series1 {
    let mut den = vec![1];
    for g in &CENTRAL_GENS {
        let mut f = vec![0; g.degree as usize + 1];
        f[0] = 1;
        f[g.degree as usize] = -1;
        den = poly_mul(&den, &f);
    }
    expand_rational(&[1], &den, order).expect("nonzero constant term")
}

/// Irreducible words of a confluent system, times the central ring.
pub fn enumerated_series(sys: &RuleSystem, order: usize) -> Series1 {
    let words = Series1::from_counts(&irreducible_monomials(sys, order as u32));
    &words * &central_series(order)
}

/// The two printed numerators for rank four: `(1+t)²(1−2t+2t²−2t³+t⁴)` and
/// `1+t²+4t³+t⁴+t⁶`, over the common denominator `(1−t)⁴(1−t²)⁵`.
pub fn rank_four_numerators() -> (Vec<i64>, Vec<i64>) {
    (poly_mul(&[1, 2, 1], &[1, -2, 2, -2, 1]), vec![1, 0, 1, 4, 1, 0, 1])
}

/// Coefficient table used by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct SeriesTable {
    pub n: usize,
    pub route: String,
    pub coefficients: Vec<String>,
}

impl SeriesTable {
    pub fn new(n: usize, route: &str, s: &Series1) -> Self {
        Self { n, route: route.to_string(), coefficients: s.coeffs.iter().map(|c| c.to_string()).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(s: &Series1) -> Vec<i128> {
        s.to_integers().unwrap()
    }

    #[test]
    fn expansions() {
        assert_eq!(ints(&expand_rational(&[1], &[1, -1], 3).unwrap()), vec![1, 1, 1, 1]);
        assert_eq!(ints(&expand_rational(&[1, 1], &[1, -1], 2).unwrap()), vec![1, 2, 2]);
        assert_eq!(expand_rational(&[1], &[0, 1], 2), Err(HilbertError::DenominatorVanishesAtZero));
        let num = [1, 0, 1, 4, 1, 0, 1];
        let den = poly_mul(&poly_pow(&[1, -1], 4), &poly_pow(&[1, 0, -1], 5));
        assert_eq!(ints(&expand_rational(&num, &den, 3).unwrap()), vec![1, 4, 16, 48]);
    }

    #[test]
    fn low_degree_counts_by_hand() {
        // degree 2: ten central quadratics and six two-point loops;
        // degree 3: twenty central cubics, 4·6 mixed, four three-point loops
        let h = closed_form_h(4, 3).unwrap();
        assert_eq!(ints(&h), vec![1, 4, 10 + 6, 20 + 24 + 4]);
    }

    #[test]
    fn multichoose_identity() {
        for n in 1..6u64 {
            for k in 0..6u64 {
                assert_eq!(multichoose(n, k), binom(n + k - 1, k));
            }
        }
        assert_eq!(multichoose(3, 2), 6);
    }

    #[test]
    fn rank_one_is_polynomial_ring() {
        let one = vec![1i128; 11];
        assert_eq!(ints(&closed_form_h(1, 10).unwrap()), one);
        assert_eq!(ints(&character_route(1, 10)), one);
        assert_eq!(ints(&convolution_route(1, 10)), one);
    }

    #[test]
    fn routes_agree_up_to_rank_five() {
        for n in 1..=5 {
            let c = closed_form_h(n, 10).unwrap();
            assert_eq!(character_route(n, 10), c, "n = {n}");
            assert_eq!(convolution_route(n, 10), c, "n = {n}");
        }
    }

    #[test]
    fn frozen_values() {
        // independent expansion, see the routes test
        assert_eq!(ints(&closed_form_h(3, 6).unwrap()), vec![1, 3, 9, 20, 42, 78, 138]);
        assert_eq!(ints(&closed_form_h(4, 8).unwrap()), vec![1, 4, 16, 48, 132, 320, 720, 1500, 2953]);
        assert_eq!(closed_form_bracket(4), vec![1, -2, 4, -2, 1]);
    }

    #[test]
    fn printed_rank_four_numerators_differ() {
        let (first, second) = rank_four_numerators();
        assert_eq!(first, vec![1, 0, -1, 0, -1, 0, 1]);
        assert_ne!(first, second);
        // the bracket of the general formula gives the second display
        assert_eq!(poly_mul(&[1, 2, 1], &closed_form_bracket(4)), second);
    }

    #[test]
    fn central_series_counts_monomials() {
        let s = central_series(12);
        let counts = crate::central::monomial_counts(12);
        assert_eq!(s, Series1::from_counts(&counts));
    }

    #[test]
    fn golden_system_matches_rank_four() {
        let e = enumerated_series(crate::skein::golden_system(), 12);
        assert_eq!(e, closed_form_h(4, 12).unwrap());
        assert_eq!(ints(&e)[..2], [1, 4]);
    }

    proptest! {
        #[test]
        fn inverse_is_inverse(p in prop::collection::vec(-5i64..6, 1..6), c0 in 1i64..4) {
            let mut p = p;
            p[0] = c0;
            let s = Series1::from_poly(&p, 8);
            prop_assert_eq!(&s * &s.inverse().unwrap(), Series1::one(8));
        }
    }
}
