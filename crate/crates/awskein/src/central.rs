//! The commutative coefficient ring `ℚ(v)[s1, s2, s3, s4, s1234]` generated
//! by the central (boundary-parallel) loops, graded by `|s_i| = 1`,
//! `|s1234| = 4`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{CoeffError, RatFunc};

pub const NCENTRAL: usize = 5;

/// Exponent vector over `(s1, s2, s3, s4, s1234)`.
pub type CMono = [u8; NCENTRAL];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralGen {
    pub id: usize,
    pub name: &'static str,
    pub degree: u32,
}

pub const CENTRAL_GENS: [CentralGen; NCENTRAL] = [
    CentralGen { id: 0, name: "s1", degree: 1 },
    CentralGen { id: 1, name: "s2", degree: 1 },
    CentralGen { id: 2, name: "s3", degree: 1 },
    CentralGen { id: 3, name: "s4", degree: 1 },
    CentralGen { id: 4, name: "s1234", degree: 4 },
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CentralError {
    #[error("degree of the zero polynomial")]
    ZeroPolynomial,
    #[error("malformed central polynomial: {0}")]
    Malformed(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

pub fn mono_degree(m: &CMono) -> u32 {
    m.iter().zip(CENTRAL_GENS.iter()).map(|(e, g)| *e as u32 * g.degree).sum()
}

/// Central generator index for the loop around the point set `A`, if `A`
/// is a singleton or the full set `{1,2,3,4}`.
pub fn central_index(points: &[u8]) -> Option<usize> {
    match points {
        [p] if (1..=4).contains(p) => Some(*p as usize - 1),
        [1, 2, 3, 4] => Some(4),
        _ => None,
    }
}

pub fn central_by_name(name: &str) -> Option<usize> {
    CENTRAL_GENS.iter().position(|g| g.name.eq_ignore_ascii_case(name))
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CentralPoly {
    terms: BTreeMap<CMono, RatFunc>,
}

impl CentralPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(RatFunc::one())
    }

    pub fn scalar(c: RatFunc) -> Self {
        Self::term([0; NCENTRAL], c)
    }

    pub fn term(m: CMono, c: RatFunc) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn gen(i: usize) -> Self {
        let mut m = [0; NCENTRAL];
        m[i] = 1;
        Self::term(m, RatFunc::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (CMono, RatFunc)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CMono, &RatFunc)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient if this is a pure scalar.
    pub fn as_scalar(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero()),
            1 => self.terms.get(&[0; NCENTRAL]).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: CMono, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                let s = &*x + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &CentralPoly, c: &CentralPoly) {
        for (m1, c1) in &other.terms {
            for (m2, c2) in &c.terms {
                self.add_term(mono_mul(m1, m2), &(c1 * c2));
            }
        }
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn mul_mono(&self, m: &CMono) -> Self {
        Self { terms: self.terms.iter().map(|(k, x)| (mono_mul(k, m), x.clone())).collect() }
    }

    pub fn degree(&self) -> Result<u32, CentralError> {
        self.terms.keys().map(mono_degree).max().ok_or(CentralError::ZeroPolynomial)
    }

    /// Applies `f` to every coefficient (e.g. the bar involution).
    pub fn map_coeffs(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Substitutes each central generator `i` by `images[i]`.
    pub fn substitute(&self, images: &[CentralPoly; NCENTRAL]) -> CentralPoly {
        let mut out = CentralPoly::zero();
        for (m, c) in &self.terms {
            let mut t = CentralPoly::scalar(c.clone());
            for (i, e) in m.iter().enumerate() {
                for _ in 0..*e {
                    t = &t * &images[i];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Divides every coefficient by `d`.
    pub fn div_scalar(&self, d: &RatFunc) -> Result<Self, CoeffError> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, &c.div(d)?);
        }
        Ok(out)
    }

    pub fn bar(&self) -> Self {
        self.map_coeffs(|c| c.bar())
    }

    pub fn to_json(&self) -> Vec<CentralTermJson> {
        self.terms
            .iter()
            .map(|(m, c)| CentralTermJson { exps: m.to_vec(), coeff: c.to_string() })
            .collect()
    }

    pub fn from_json(v: &[CentralTermJson]) -> Result<Self, CentralError> {
        let mut p = Self::zero();
        for t in v {
            if t.exps.len() != NCENTRAL {
                return Err(CentralError::Malformed(format!("exponent vector {:?}", t.exps)));
            }
            let mut m = [0; NCENTRAL];
            m.copy_from_slice(&t.exps);
            p.add_term(m, &t.coeff.parse()?);
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralTermJson {
    pub exps: Vec<u8>,
    pub coeff: String,
}

pub fn mono_mul(a: &CMono, b: &CMono) -> CMono {
    let mut m = *a;
    for i in 0..NCENTRAL {
        m[i] += b[i];
    }
    m
}

impl Add for &CentralPoly {
    type Output = CentralPoly;
    fn add(self, o: &CentralPoly) -> CentralPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl Sub for &CentralPoly {
    type Output = CentralPoly;
    fn sub(self, o: &CentralPoly) -> CentralPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl Neg for &CentralPoly {
    type Output = CentralPoly;
    fn neg(self) -> CentralPoly {
        CentralPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Mul for &CentralPoly {
    type Output = CentralPoly;
    fn mul(self, o: &CentralPoly) -> CentralPoly {
        let mut out = CentralPoly::zero();
        out.add_assign_scaled(self, o);
        out
    }
}

/// Printing order: graded lexicographic, largest first.
fn print_key(m: &CMono) -> (u32, [std::cmp::Reverse<u8>; NCENTRAL]) {
    (mono_degree(m), m.map(std::cmp::Reverse))
}

pub fn fmt_cmono(m: &CMono) -> String {
    let mut parts = Vec::new();
    for (i, e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(CENTRAL_GENS[i].name.to_string()),
            _ => parts.push(format!("{}^{}", CENTRAL_GENS[i].name, e)),
        }
    }
    parts.join("*")
}

/// Writes `c * mono` with a leading sign handled by the caller.
fn fmt_scaled(c: &RatFunc, mono: &str) -> (bool, String) {
    let neg_c = -c;
    let (neg, c) = match (c.as_laurent(), neg_c.as_laurent()) {
        (Some(l), _) if l.terms().len() == 1 && l.terms()[0].1 < num_traits::Zero::zero() => (true, neg_c),
        _ => (false, c.clone()),
    };
    let body = if mono.is_empty() {
        c.fmt_factor()
    } else if c.is_one() {
        mono.to_string()
    } else {
        format!("{}*{}", c.fmt_factor(), mono)
    };
    (neg, body)
}

impl CentralPoly {
    /// Printed terms `(negative?, text)` in canonical order.
    pub fn signed_terms(&self, suffix: &str) -> Vec<(bool, String)> {
        let mut ms: Vec<_> = self.terms.iter().collect();
        ms.sort_by_key(|m| std::cmp::Reverse(print_key(m.0)));
        ms.into_iter()
            .map(|(m, c)| {
                let mono = fmt_cmono(m);
                let full = match (mono.is_empty(), suffix.is_empty()) {
                    (true, _) => suffix.to_string(),
                    (false, true) => mono,
                    (false, false) => format!("{mono}*{suffix}"),
                };
                fmt_scaled(c, &full)
            })
            .collect()
    }
}

pub fn join_signed(parts: &[(bool, String)]) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (neg, body)) in parts.iter().enumerate() {
        if i == 0 {
            if *neg {
                s.push('-');
            }
        } else {
            s.push_str(if *neg { " - " } else { " + " });
        }
        s.push_str(body);
    }
    s
}

impl fmt::Display for CentralPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join_signed(&self.signed_terms("")))
    }
}

impl fmt::Debug for CentralPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Number of central monomials of each degree `0..=max`.
pub fn monomial_counts(max: u32) -> Vec<u64> {
    let mut counts = vec![0u64; max as usize + 1];
    let m = max as usize;
    // s1..s4 of degree 1, s1234 of degree 4
    for e5 in 0..=m / 4 {
        let rest = m - 4 * e5;
        for d in 0..=rest {
            // number of monomials of degree d in 4 variables
            let c = ((d + 1) * (d + 2) * (d + 3) / 6) as u64;
            counts[d + 4 * e5] += c;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use proptest::prelude::*;

    fn s(i: usize) -> CentralPoly {
        CentralPoly::gen(i)
    }

    #[test]
    fn products_and_degree() {
        let p = &s(0) * &s(1);
        assert_eq!(p.terms().next().unwrap().0, &[1, 1, 0, 0, 0]);
        let lhs = &(&s(0) + &s(1)) * &(&s(0) - &s(1));
        let rhs = &(&s(0) * &s(0)) - &(&s(1) * &s(1));
        assert_eq!(lhs, rhs);
        assert_eq!((&s(1) * &s(4)).degree().unwrap(), 5);
        assert_eq!((&(&s(0) * &s(0)) * &s(0)).degree().unwrap(), 3);
        assert_eq!(s(4).degree().unwrap(), 4);
        assert_eq!(CentralPoly::scalar(RatFunc::q_pow(2)).degree().unwrap(), 0);
        assert_eq!(CentralPoly::zero().degree(), Err(CentralError::ZeroPolynomial));
    }

    #[test]
    fn printing() {
        let c: RatFunc = "q^2 + 1".parse().unwrap();
        let p = CentralPoly::term([1, 0, 2, 0, 1], c);
        assert_eq!(p.to_string(), "(q^2 + 1)*s1*s3^2*s1234");
        let m = &CentralPoly::scalar(RatFunc::from_int(-2)) + &s(0);
        assert_eq!(m.to_string(), "s1 - 2");
    }

    #[test]
    fn json_roundtrip() {
        let p = &(&s(0) * &s(4)).scale(&"q - q^-1".parse().unwrap()) + &CentralPoly::scalar(RatFunc::from_int(3));
        let back = CentralPoly::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn central_hilbert_series() {
        // 1/((1-t)^4 (1-t^4)) expanded independently by brute force
        let counts = monomial_counts(12);
        let mut brute = vec![0u64; 13];
        for a in 0..=12u32 {
            for b in 0..=12u32 {
                for c in 0..=12u32 {
                    for d in 0..=12u32 {
                        for e in 0..=3u32 {
                            let deg = a + b + c + d + 4 * e;
                            if deg <= 12 {
                                brute[deg as usize] += 1;
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(counts, brute);
        assert_eq!(&counts[..4], &[1, 4, 10, 20]);
    }

    fn arb_cp() -> impl Strategy<Value = CentralPoly> {
        prop::collection::vec((prop::array::uniform5(0u8..3), -3i64..4, -2i32..3), 0..4).prop_map(|v| {
            CentralPoly::from_terms(
                v.into_iter().map(|(m, c, e)| (m, RatFunc::from(crate::coeff::LaurentPoly::monomial(4 * e, rat(c))))),
            )
        })
    }

    proptest! {
        #[test]
        fn degree_additive(a in arb_cp(), b in arb_cp()) {
            if !a.is_zero() && !b.is_zero() {
                prop_assert_eq!((&a * &b).degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
            }
        }

        #[test]
        fn ring_laws(a in arb_cp(), b in arb_cp(), c in arb_cp()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }
    }
}
