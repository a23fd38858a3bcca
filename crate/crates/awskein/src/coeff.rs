//! Exact scalars: Laurent polynomials in `v = q^{1/4}` over ℚ, and their
//! fraction field ℚ(v).
//!
//! Integer powers of `q` are stored as `v`-exponents divisible by 4, so
//! `q^k` is `v^{4k}`. The text form uses `q` throughout: `q^2 + 2 + q^-2`,
//! `q^(3/4)`, `(q^2 - 1)/(q^4 + 1)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation at zero")]
    ZeroArgument,
    #[error("cannot parse coefficient {text:?} at byte {pos}: {msg}")]
    Parse { text: String, pos: usize, msg: String },
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat2(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Finite sum `Σ c_e v^e`, sorted by exponent, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i32, Rational)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    /// `c · v^e`.
    pub fn monomial(e: i32, c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(e, c)] }
        }
    }

    pub fn v_pow(e: i32) -> Self {
        Self::monomial(e, Rational::one())
    }

    pub fn q_pow(k: i32) -> Self {
        Self::v_pow(4 * k)
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// Builds from arbitrary `(exponent, coefficient)` pairs, merging repeats.
    pub fn from_terms<I: IntoIterator<Item = (i32, Rational)>>(it: I) -> Self {
        let mut v: Vec<(i32, Rational)> = it.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(i32, Rational)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        Self { terms: out }
    }

    /// `Σ c_k q^k` from integer coefficients; handy for tables.
    pub fn from_q_ints(pairs: &[(i32, i64)]) -> Self {
        Self::from_terms(pairs.iter().map(|&(k, c)| (4 * k, rat(c))))
    }

    pub fn terms(&self) -> &[(i32, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.last().map(|t| &t.1)
    }

    /// Multiply by `v^e`.
    pub fn shift(&self, e: i32) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, x)| (*k, x * c)).collect() }
    }

    /// The bar involution `v ↦ v^{-1}` (hence `q ↦ q^{-1}`).
    pub fn bar(&self) -> Self {
        let mut terms: Vec<_> = self.terms.iter().map(|(k, c)| (-k, c.clone())).collect();
        terms.reverse();
        Self { terms }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> Result<f64, CoeffError> {
        if x == 0.0 {
            return Err(CoeffError::ZeroArgument);
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * x.powi(*e))
            .sum())
    }

    /// Exact quotient when `other` divides `self` in ℚ[v, v^{-1}].
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if other.is_monomial() {
            let (e, c) = &other.terms[0];
            return Some(self.shift(-e).scale(&c.recip()));
        }
        let (a, na) = self.split_poly();
        let (b, nb) = other.split_poly();
        let (q, r) = poly_divrem(&na, &nb);
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_dense(&q).shift(a - b))
    }

    /// `self = v^m · P(v)` with `P(0) ≠ 0`; returns `(m, dense P)`.
    fn split_poly(&self) -> (i32, Vec<Rational>) {
        let m = self.min_exp().unwrap_or(0);
        let top = self.max_exp().unwrap_or(0);
        let mut dense = vec![Rational::zero(); (top - m + 1) as usize];
        for (e, c) in &self.terms {
            dense[(e - m) as usize] = c.clone();
        }
        (m, dense)
    }

    fn from_dense(d: &[Rational]) -> Self {
        Self {
            terms: d
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i32, c.clone()))
                .collect(),
        }
    }
}

fn add_terms(a: &[(i32, Rational)], b: &[(i32, Rational)], negate_b: bool) -> Vec<(i32, Rational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        LaurentPoly { terms: add_terms(&self.terms, &o.terms, false) }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        LaurentPoly { terms: add_terms(&self.terms, &o.terms, true) }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero();
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return LaurentPoly { terms: o.terms.iter().map(|(k, x)| (k + e, x * c)).collect() };
        }
        if o.terms.len() == 1 {
            let (e, c) = &o.terms[0];
            return LaurentPoly { terms: self.terms.iter().map(|(k, x)| (k + e, x * c)).collect() };
        }
        let mut raw = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                raw.push((a + b, x * y));
            }
        }
        LaurentPoly::from_terms(raw)
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
owned_ops!(LaurentPoly);

/// Dense polynomial division over ℚ; returns (quotient, remainder).
fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lb = b[db].clone();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let c = &r[dr] / &lb;
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            let t = &c * bc;
            r[i + shift] -= t;
        }
        q[shift] = c;
        r = trim(r);
    }
    (q, r)
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn monic(v: Vec<Rational>) -> Vec<Rational> {
    let v = trim(v);
    match v.last().cloned() {
        Some(l) => v.into_iter().map(|c| c / &l).collect(),
        None => v,
    }
}

/// Monic gcd of dense polynomials over ℚ. Polynomials in `v^s` are
/// compressed first, which is the common case (`q = v^4`).
fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let s = stride_of(a).gcd(&stride_of(b));
    if s > 1 {
        let ca: Vec<_> = a.iter().step_by(s).cloned().collect();
        let cb: Vec<_> = b.iter().step_by(s).cloned().collect();
        let g = poly_gcd_plain(&ca, &cb);
        let mut out = vec![Rational::zero(); (g.len() - 1) * s + 1];
        for (i, c) in g.into_iter().enumerate() {
            out[i * s] = c;
        }
        return out;
    }
    poly_gcd_plain(a, b)
}

fn stride_of(a: &[Rational]) -> usize {
    a.iter()
        .enumerate()
        .filter(|(i, c)| *i > 0 && !c.is_zero())
        .fold(0usize, |g, (i, _)| g.gcd(&i))
}

fn poly_gcd_plain(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = monic(r);
    }
    monic(x)
}

/// Element of ℚ(v) in canonical form: `den` is a monic polynomial with
/// nonzero constant term, coprime to `num`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<LaurentPoly> for RatFunc {
    fn from(num: LaurentPoly) -> Self {
        Self { num, den: LaurentPoly::one() }
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        LaurentPoly::zero().into()
    }

    pub fn one() -> Self {
        LaurentPoly::one().into()
    }

    pub fn from_int(n: i64) -> Self {
        LaurentPoly::from_int(n).into()
    }

    pub fn from_rational(c: Rational) -> Self {
        LaurentPoly::constant(c).into()
    }

    pub fn q_pow(k: i32) -> Self {
        LaurentPoly::q_pow(k).into()
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        self.den.is_one().then_some(&self.num)
    }

    fn canonical(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_monomial() {
            let (e, c) = &den.terms[0];
            return num.shift(-e).scale(&c.recip()).into();
        }
        let (a, n) = num.split_poly();
        let (b, d) = den.split_poly();
        let g = poly_gcd(&n, &d);
        let (n, d) = if g.len() > 1 {
            (poly_divrem(&n, &g).0, poly_divrem(&d, &g).0)
        } else {
            (n, d)
        };
        let lead = d.last().cloned().expect("nonzero denominator");
        let n: Vec<Rational> = n.into_iter().map(|c| c / &lead).collect();
        let d: Vec<Rational> = d.into_iter().map(|c| c / &lead).collect();
        let num = LaurentPoly::from_dense(&n).shift(a - b);
        let den = LaurentPoly::from_dense(&d);
        if den.is_one() {
            num.into()
        } else {
            Self { num, den }
        }
    }

    pub fn recip(&self) -> Result<Self, CoeffError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self, CoeffError> {
        if o.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        if o.den.is_one() && o.num.is_monomial() && self.den.is_one() {
            let (e, c) = &o.num.terms[0];
            return Ok(self.num.shift(-e).scale(&c.recip()).into());
        }
        if self.den.is_one() && o.den.is_one() {
            if let Some(q) = self.num.div_exact(&o.num) {
                return Ok(q.into());
            }
        }
        Ok(Self::canonical(&self.num * &o.den, &self.den * &o.num))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { num: self.num.scale(c), den: self.den.clone() }.renorm_zero()
    }

    fn renorm_zero(self) -> Self {
        if self.num.is_zero() {
            Self::zero()
        } else {
            self
        }
    }

    pub fn bar(&self) -> Self {
        Self::canonical(self.num.bar(), self.den.bar())
    }

    pub fn pow(&self, n: i32) -> Result<Self, CoeffError> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, x: f64) -> Result<f64, CoeffError> {
        Ok(self.num.eval_f64(x)? / self.den.eval_f64(x)?)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.den.is_one() && o.den.is_one() {
            return (&self.num + &o.num).into();
        }
        if self.den == o.den {
            return RatFunc::canonical(&self.num + &o.num, self.den.clone());
        }
        RatFunc::canonical(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.den.is_one() && o.den.is_one() {
            return (&self.num * &o.num).into();
        }
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::canonical(&self.num * &o.num, &self.den * &o.den)
    }
}
owned_ops!(RatFunc);

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn fmt_q_exp(e: i32) -> String {
    if e % 4 == 0 {
        let k = e / 4;
        if k == 1 {
            "q".into()
        } else {
            format!("q^{k}")
        }
    } else {
        let r = rat2(e as i64, 4);
        format!("q^({r})")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            match (*e == 0, a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{}", fmt_q_exp(*e))?,
                (false, false) => write!(f, "{a}*{}", fmt_q_exp(*e))?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl RatFunc {
    /// Display wrapped in parentheses whenever it is not a single term,
    /// suitable as a multiplicative prefix.
    pub fn fmt_factor(&self) -> String {
        if self.den.is_one() && self.num.terms.len() == 1 {
            let s = self.num.to_string();
            if !s.starts_with('-') {
                return s;
            }
        }
        format!("({self})")
    }
}

// ---------------------------------------------------------------------------
// Parsing: sums/products/quotients of rationals and powers of q.

struct CoeffParser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> CoeffParser<'a> {
    fn err(&self, msg: &str) -> CoeffError {
        CoeffError::Parse { text: self.src.to_string(), pos: self.pos, msg: msg.to_string() }
    }

    fn ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc, CoeffError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, CoeffError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.factor()?;
                    acc = acc.div(&d).map_err(|_| self.err("division by zero"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc, CoeffError> {
        let (base, is_q) = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            if self.peek() == Some(b'(') {
                self.pos += 1;
                let r = self.signed_rational()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                let v = &r * rat(4);
                if !is_q || !v.is_integer() {
                    return Err(self.err("fractional exponent only allowed on q in quarter steps"));
                }
                let e = v.to_integer().to_i32().ok_or_else(|| self.err("exponent too large"))?;
                return Ok(LaurentPoly::v_pow(e).into());
            }
            let r = self.signed_rational()?;
            if !r.is_integer() {
                return Err(self.err("exponent must be an integer"));
            }
            let n = r.to_integer().to_i32().ok_or_else(|| self.err("exponent too large"))?;
            return base.pow(n).map_err(|_| self.err("negative power of zero"));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<(RatFunc, bool), CoeffError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok((e, false))
            }
            Some(b'q') => {
                self.pos += 1;
                Ok((RatFunc::q_pow(1), true))
            }
            Some(c) if c.is_ascii_digit() => Ok((RatFunc::from_rational(self.unsigned_int()?), false)),
            _ => Err(self.err("expected number, q or '('")),
        }
    }

    fn unsigned_int(&mut self) -> Result<Rational, CoeffError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let n: BigInt = self.src[start..self.pos].parse().map_err(|_| self.err("bad integer"))?;
        Ok(Rational::from_integer(n))
    }

    fn signed_rational(&mut self) -> Result<Rational, CoeffError> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut r = self.unsigned_int()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let d = self.unsigned_int()?;
            if d.is_zero() {
                return Err(self.err("zero denominator"));
            }
            r /= d;
        }
        Ok(if neg { -r } else { r })
    }
}

impl FromStr for RatFunc {
    type Err = CoeffError;
    fn from_str(s: &str) -> Result<Self, CoeffError> {
        let mut p = CoeffParser { src: s, bytes: s.as_bytes(), pos: 0 };
        let r = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(r)
    }
}

impl FromStr for LaurentPoly {
    type Err = CoeffError;
    fn from_str(s: &str) -> Result<Self, CoeffError> {
        let r: RatFunc = s.parse()?;
        match r.as_laurent() {
            Some(l) => Ok(l.clone()),
            None => Err(CoeffError::Parse { text: s.into(), pos: 0, msg: "not a Laurent polynomial".into() }),
        }
    }
}

/// Quantum integer `[n] = (q^n − q^{-n})/(q − q^{-1})`.
pub fn qint(n: i32) -> LaurentPoly {
    let m = n.abs();
    let body = LaurentPoly::from_terms((0..m).map(|j| (4 * (m - 1 - 2 * j), Rational::one())));
    if n < 0 {
        -body
    } else {
        body
    }
}

/// `[n]! = [1][2]⋯[n]`.
pub fn qfactorial(n: u32) -> LaurentPoly {
    (1..=n as i32).fold(LaurentPoly::one(), |acc, k| &acc * &qint(k))
}

/// `q − q^{-1}`.
pub fn q_minus_qinv() -> LaurentPoly {
    LaurentPoly::from_q_ints(&[(1, 1), (-1, -1)])
}

/// `q + q^{-1}`.
pub fn q_plus_qinv() -> LaurentPoly {
    LaurentPoly::from_q_ints(&[(1, 1), (-1, 1)])
}
