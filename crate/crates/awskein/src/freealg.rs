//! The free algebra over the central ring on the 20 extended generators,
//! with a text parser and printer.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::central::{central_by_name, join_signed, mono_degree, CentralError, CentralPoly, CENTRAL_GENS};
use crate::coeff::{rat, CoeffError, LaurentPoly, RatFunc, Rational};

/// Index into the generator table.
pub type Gen = u8;

/// A monomial of the free algebra; the empty word is the unit.
pub type Word = Vec<Gen>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    I = 1,
    II = 2,
    III = 3,
    IV = 4,
    V = 5,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenKind {
    /// Simple loop around the listed points.
    Simple(Vec<u8>),
    /// Loop around `inside` passing outside the `double` points.
    DoublePoint { inside: Vec<u8>, double: Vec<u8> },
    /// Two disjoint simple loops read as one generator.
    DisjointPair(Vec<u8>, Vec<u8>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenEntry {
    pub name: String,
    pub group: Group,
    pub degree: u32,
    pub kind: GenKind,
}

impl GenEntry {
    pub fn new(name: &str, group: Group, kind: GenKind) -> Self {
        let degree = match &kind {
            GenKind::Simple(p) => p.len() as u32,
            GenKind::DoublePoint { inside, double } => (inside.len() + 2 * double.len()) as u32,
            GenKind::DisjointPair(a, b) => (a.len() + b.len()) as u32,
        };
        Self { name: name.to_string(), group, degree, kind }
    }

    pub fn simple_points(&self) -> Option<&[u8]> {
        match &self.kind {
            GenKind::Simple(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorTable {
    entries: Vec<GenEntry>,
}

impl GeneratorTable {
    pub fn from_entries(entries: Vec<GenEntry>) -> Self {
        Self { entries }
    }

    /// The extended generators for the five-punctured sphere, in global order.
    pub fn sigma05() -> &'static GeneratorTable {
        static TABLE: OnceLock<GeneratorTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            use GenKind::*;
            use Group::*;
            let s = |p: &[u8]| Simple(p.to_vec());
            let d = |i: &[u8], x: &[u8]| DoublePoint { inside: i.to_vec(), double: x.to_vec() };
            let entries = vec![
                GenEntry::new("S12", I, s(&[1, 2])),
                GenEntry::new("S23", I, s(&[2, 3])),
                GenEntry::new("S34", I, s(&[3, 4])),
                GenEntry::new("S14", I, s(&[1, 4])),
                GenEntry::new("D123", II, d(&[1, 3], &[2])),
                GenEntry::new("D234", II, d(&[2, 4], &[3])),
                GenEntry::new("D341", II, d(&[3, 1], &[4])),
                GenEntry::new("D412", II, d(&[4, 2], &[1])),
                GenEntry::new("P1234", II, DisjointPair(vec![1, 2], vec![3, 4])),
                GenEntry::new("P2314", II, DisjointPair(vec![2, 3], vec![1, 4])),
                GenEntry::new("T1234", III, d(&[1, 4], &[2, 3])),
                GenEntry::new("T2341", III, d(&[2, 1], &[3, 4])),
                GenEntry::new("T3142", III, d(&[3, 2], &[1, 4])),
                GenEntry::new("T4123", III, d(&[4, 3], &[1, 2])),
                GenEntry::new("S13", IV, s(&[1, 3])),
                GenEntry::new("S24", IV, s(&[2, 4])),
                GenEntry::new("S123", V, s(&[1, 2, 3])),
                GenEntry::new("S234", V, s(&[2, 3, 4])),
                GenEntry::new("S134", V, s(&[1, 3, 4])),
                GenEntry::new("S124", V, s(&[1, 2, 4])),
            ];
            GeneratorTable { entries }
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, g: Gen) -> &GenEntry {
        &self.entries[g as usize]
    }

    pub fn entries(&self) -> &[GenEntry] {
        &self.entries
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.entries[g as usize].name
    }

    pub fn degree(&self, g: Gen) -> u32 {
        self.entries[g as usize].degree
    }

    pub fn group(&self, g: Gen) -> Group {
        self.entries[g as usize].group
    }

    pub fn by_name(&self, name: &str) -> Option<Gen> {
        self.entries.iter().position(|e| e.name.eq_ignore_ascii_case(name)).map(|i| i as Gen)
    }

    /// Letter for the simple loop around `points` (sorted, size 2 or 3).
    pub fn simple(&self, points: &[u8]) -> Option<Gen> {
        let mut p = points.to_vec();
        p.sort_unstable();
        self.entries
            .iter()
            .position(|e| e.simple_points() == Some(p.as_slice()))
            .map(|i| i as Gen)
    }

    pub fn word_degree(&self, w: &[Gen]) -> u32 {
        w.iter().map(|&g| self.degree(g)).sum()
    }

    pub fn word_name(&self, w: &[Gen]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&g| self.name(g)).collect::<Vec<_>>().join("*")
    }
}

/// Shorthand: the letter with the given canonical name.
pub fn g(name: &str) -> Gen {
    GeneratorTable::sigma05().by_name(name).unwrap_or_else(|| panic!("unknown generator {name}"))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator {name:?}")]
    UnknownGenerator { name: String },
}

#[derive(Debug, Error)]
pub enum FreeAlgError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Central(#[from] CentralError),
}

/// Finite sum of `central coefficient × word`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, CentralPoly>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::central(CentralPoly::one())
    }

    pub fn scalar(c: RatFunc) -> Self {
        Self::central(CentralPoly::scalar(c))
    }

    pub fn central(c: CentralPoly) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn letter(g: Gen) -> Self {
        Self::word(vec![g])
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, CentralPoly::one())
    }

    pub fn term(w: Word, c: CentralPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &CentralPoly)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, CentralPoly)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, w: &[Gen]) -> Option<&CentralPoly> {
        self.terms.get(w)
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

    pub fn add_term(&mut self, w: Word, c: &CentralPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                let s = &*x + c;
                if s.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, o: &NCPoly) {
        for (w, c) in &o.terms {
            self.add_term(w.clone(), c);
        }
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(w, x)| (w.clone(), x.scale(c))).collect() }
    }

    pub fn scale_central(&self, c: &CentralPoly) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), &(x * c));
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&CentralPoly) -> CentralPoly) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), &f(x));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Largest word length present.
    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Maximum over terms of word degree plus central degree.
    pub fn total_degree(&self, table: &GeneratorTable) -> Option<u32> {
        self.terms
            .iter()
            .flat_map(|(w, c)| {
                let wd = table.word_degree(w);
                c.terms().map(move |(m, _)| wd + mono_degree(m))
            })
            .max()
    }

    /// Flattened terms `(central monomial, word, scalar)`.
    pub fn monomials(&self) -> Vec<(crate::central::CMono, Word, RatFunc)> {
        let mut v = Vec::new();
        for (w, c) in &self.terms {
            for (m, x) in c.terms() {
                v.push((*m, w.clone(), x.clone()));
            }
        }
        v
    }

    pub fn parse(text: &str) -> Result<Self, FreeAlgError> {
        parse_expr(text, GeneratorTable::sigma05())
    }

    pub fn display(&self, table: &GeneratorTable) -> String {
        let mut parts = Vec::new();
        for (w, c) in &self.terms {
            let suffix = if w.is_empty() { String::new() } else { table.word_name(w) };
            parts.extend(c.signed_terms(&suffix));
        }
        join_signed(&parts)
    }
}

/// `[a, b]_q = q·a·b − q^{-1}·b·a`.
pub fn q_commutator(a: &NCPoly, b: &NCPoly) -> NCPoly {
    &(a * b).scale(&RatFunc::q_pow(1)) - &(b * a).scale(&RatFunc::q_pow(-1))
}

impl Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, o: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_assign(o);
        out
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, o: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), &-c);
        }
        out
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        NCPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

impl Mul for &NCPoly {
    type Output = NCPoly;
    fn mul(self, o: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, &(c1 * c2));
            }
        }
        out
    }
}

impl Add for NCPoly {
    type Output = NCPoly;
    fn add(self, o: NCPoly) -> NCPoly {
        &self + &o
    }
}

impl Sub for NCPoly {
    type Output = NCPoly;
    fn sub(self, o: NCPoly) -> NCPoly {
        &self - &o
    }
}

impl Mul for NCPoly {
    type Output = NCPoly;
    fn mul(self, o: NCPoly) -> NCPoly {
        &self * &o
    }
}

impl Neg for NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        -&self
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(GeneratorTable::sigma05()))
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// ---------------------------------------------------------------------------
// Parser.
//
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := atom ("^" (signed-int | "(" signed-rational ")"))?
//   atom   := rational | "q" | genname | "(" expr ")"
//
// Division and fractional exponents are accepted only on scalars.

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    table: &'a GeneratorTable,
}

enum Value {
    Poly(NCPoly),
    /// A bare `q`, so that `q^(1/4)` can be recognised.
    Q,
}

impl Value {
    fn poly(self) -> NCPoly {
        match self {
            Value::Poly(p) => p,
            Value::Q => NCPoly::scalar(RatFunc::q_pow(1)),
        }
    }
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn peek(&mut self) -> Option<u8> {
        let b = self.src.as_bytes();
        while self.pos < b.len() && b[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        b.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<NCPoly, ParseError> {
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

    fn term(&mut self) -> Result<NCPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.factor()?;
                    let s = scalar_of(&d).ok_or(ParseError::Syntax { pos: at, msg: "divisor must be a scalar".into() })?;
                    let inv = s.recip().map_err(|_| ParseError::Syntax { pos: at, msg: "division by zero".into() })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<NCPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base.poly());
        }
        self.pos += 1;
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let r = self.signed_rational()?;
            if self.peek() != Some(b')') {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
            let v = &r * rat(4);
            if !matches!(base, Value::Q) || !v.is_integer() {
                return Err(self.err("fractional exponents are only allowed on q, in quarter steps"));
            }
            let e = v.to_integer().to_i32().ok_or_else(|| self.err("exponent too large"))?;
            return Ok(NCPoly::scalar(LaurentPoly::v_pow(e).into()));
        }
        let r = self.signed_rational()?;
        if !r.is_integer() {
            return Err(self.err("exponent must be an integer"));
        }
        let n = r.to_integer().to_i32().ok_or_else(|| self.err("exponent too large"))?;
        let p = base.poly();
        if n >= 0 {
            return Ok(p.pow(n as u32));
        }
        let s = scalar_of(&p).ok_or_else(|| self.err("negative powers are only allowed on scalars"))?;
        let inv = s.pow(n).map_err(|_| self.err("negative power of zero"))?;
        Ok(NCPoly::scalar(inv))
    }

    fn atom(&mut self) -> Result<Value, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(Value::Poly(e))
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.unsigned_rational()?;
                Ok(Value::Poly(NCPoly::scalar(RatFunc::from_rational(r))))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let b = self.src.as_bytes();
                while self.pos < b.len() && b[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                if name == "q" {
                    return Ok(Value::Q);
                }
                if let Some(i) = central_by_name(name) {
                    return Ok(Value::Poly(NCPoly::central(CentralPoly::gen(i))));
                }
                match self.table.by_name(name) {
                    Some(g) => Ok(Value::Poly(NCPoly::letter(g))),
                    None => Err(ParseError::UnknownGenerator { name: name.to_string() }),
                }
            }
            _ => Err(self.err("expected number, q, generator or '('")),
        }
    }

    fn digits(&mut self) -> Result<Rational, ParseError> {
        self.peek();
        let start = self.pos;
        let b = self.src.as_bytes();
        while self.pos < b.len() && b[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let n: num_bigint::BigInt = self.src[start..self.pos].parse().map_err(|_| self.err("bad integer"))?;
        Ok(Rational::from_integer(n))
    }

    /// `digits ("/" digits)?` — the slash is only consumed when followed by a digit.
    fn unsigned_rational(&mut self) -> Result<Rational, ParseError> {
        let n = self.digits()?;
        let save = self.pos;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                let d = self.digits()?;
                if d.is_zero() {
                    return Err(self.err("zero denominator"));
                }
                return Ok(n / d);
            }
        }
        self.pos = save;
        Ok(n)
    }

    fn signed_rational(&mut self) -> Result<Rational, ParseError> {
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
        let r = self.unsigned_rational()?;
        Ok(if neg { -r } else { r })
    }
}

fn scalar_of(p: &NCPoly) -> Option<RatFunc> {
    if p.is_zero() {
        return Some(RatFunc::zero());
    }
    if p.terms.len() != 1 {
        return None;
    }
    let (w, c) = p.terms.iter().next()?;
    if !w.is_empty() {
        return None;
    }
    c.as_scalar()
}

pub fn parse_expr(text: &str, table: &GeneratorTable) -> Result<NCPoly, FreeAlgError> {
    let mut p = Parser { src: text, pos: 0, table };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("unexpected trailing input").into());
    }
    Ok(e)
}

/// Letter name printed for a central generator.
pub fn central_name(i: usize) -> &'static str {
    CENTRAL_GENS[i].name
}

/// True when every coefficient is a Laurent polynomial (no denominators).
pub fn is_laurent(p: &NCPoly) -> bool {
    p.terms().all(|(_, c)| c.terms().all(|(_, x)| x.is_laurent()))
}

/// Sign-aware helper used by printers of other modules.
pub fn is_negative_scalar(c: &RatFunc) -> bool {
    c.as_laurent().is_some_and(|l| l.terms().len() == 1 && l.terms()[0].1.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> NCPoly {
        NCPoly::parse(s).unwrap()
    }

    #[test]
    fn table_shape() {
        let t = GeneratorTable::sigma05();
        assert_eq!(t.len(), 20);
        for e in t.entries() {
            let want = match e.group {
                Group::I | Group::IV => 2,
                Group::II => 4,
                Group::III => 6,
                Group::V => 3,
            };
            assert_eq!(e.degree, want, "{}", e.name);
        }
        assert_eq!(t.degree(g("D123")), 4);
        assert_eq!(t.degree(g("P1234")), 4);
        assert_eq!(t.degree(g("S123")), 3);
        assert_eq!(t.simple(&[3, 1]), Some(g("S13")));
    }

    #[test]
    fn products() {
        let a = p("S12") * p("S23");
        assert_eq!(a, NCPoly::word(vec![g("S12"), g("S23")]));
        let b = p("s1*S12") * p("s3*S23");
        assert_eq!(b, p("s1*s3*S12*S23"));
        assert_eq!(&NCPoly::one() * &a, a);
    }

    #[test]
    fn commutators() {
        let x = p("S13");
        assert_eq!(q_commutator(&x, &x), p("(q - q^-1)*S13^2"));
        assert_eq!(q_commutator(&p("S12"), &p("S34")), p("q*S12*S34 - q^-1*S34*S12"));
        assert_eq!(q_commutator(&NCPoly::one(), &p("S24")), p("(q-q^-1)*S24"));
    }

    #[test]
    fn parsing() {
        let c = p("(q+q^-1)*S1234");
        assert_eq!(c.terms().count(), 1);
        assert!(c.coeff(&[]).is_some());
        assert_eq!(p("D123"), NCPoly::letter(g("D123")));
        assert_eq!(p("q^(1/4)*q^(3/4)"), p("q"));
        assert_eq!(p("S12/(q+1)*(q+1)"), p("S12"));
        assert!(matches!(NCPoly::parse("S99"), Err(FreeAlgError::Parse(ParseError::UnknownGenerator { .. }))));
        assert!(matches!(NCPoly::parse("S12 +"), Err(FreeAlgError::Parse(ParseError::Syntax { .. }))));
        assert!(matches!(NCPoly::parse("1/S12"), Err(FreeAlgError::Parse(ParseError::Syntax { .. }))));
    }

    fn arb_poly() -> impl Strategy<Value = NCPoly> {
        let term = (
            prop::collection::vec(0u8..20, 0..4),
            prop::array::uniform5(0u8..2),
            -3i64..4,
            -2i32..3,
        );
        prop::collection::vec(term, 0..4).prop_map(|ts| {
            let mut out = NCPoly::zero();
            for (w, m, c, e) in ts {
                let coeff = RatFunc::from(LaurentPoly::monomial(4 * e, rat(c)));
                out.add_term(w, &CentralPoly::term(m, coeff));
            }
            out
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn print_parse_roundtrip(a in arb_poly()) {
            prop_assert_eq!(p(&a.to_string()), a);
        }

        #[test]
        fn associativity(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn central_coefficients_commute(a in arb_poly(), b in arb_poly(), i in 0usize..5) {
            let c = NCPoly::central(CentralPoly::gen(i));
            let left = &(&c * &a) * &b;
            prop_assert_eq!(&left, &(&c * &(&a * &b)));
            prop_assert_eq!(&left, &(&a * &(&c * &b)));
        }
    }
}
