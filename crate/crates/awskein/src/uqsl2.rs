//! Exact arithmetic in `U_q(sl2)`: normal-ordered monomials, Hopf structure,
//! grading, adjoint action, the coaction `τ_L`, the Casimir, and the
//! reflection-equation-algebra image.
//!
//! Monomials are stored as `Ẽ^e F^f K^k` with `Ẽ = (q − q^{-1})E`. In this
//! basis `FẼ = ẼF − (K − K^{-1})`, so every structure constant is a Laurent
//! polynomial; printing converts back to powers of `E`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use thiserror::Error;

use crate::central::join_signed;
use crate::coeff::{q_minus_qinv, qfactorial, LaurentPoly, RatFunc};
use crate::tensor::TensorElem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UqError {
    #[error("adjoint orbit did not vanish within {0} steps")]
    TruncationExceeded(u32),
}

pub const DEFAULT_TRUNCATION: u32 = 16;

/// `Ẽ^e F^f K^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct UqMono {
    pub e: u16,
    pub f: u16,
    pub k: i16,
}

impl UqMono {
    pub const ONE: UqMono = UqMono { e: 0, f: 0, k: 0 };

    pub fn new(e: u16, f: u16, k: i16) -> Self {
        Self { e, f, k }
    }

    pub fn grade(&self) -> i32 {
        self.e as i32 - self.f as i32
    }
}

type MonoProduct = Rc<Vec<(UqMono, LaurentPoly)>>;

thread_local! {
    static MUL_CACHE: RefCell<HashMap<(UqMono, UqMono), MonoProduct>> = RefCell::new(HashMap::new());
}

/// `A_e = Σ_{m<e} q^{2m}` and `B_e = Σ_{m<e} q^{-2m}`.
fn ab_sums(e: u16) -> (LaurentPoly, LaurentPoly) {
    let a = LaurentPoly::from_q_ints(&(0..e as i32).map(|m| (2 * m, 1)).collect::<Vec<_>>());
    let b = LaurentPoly::from_q_ints(&(0..e as i32).map(|m| (-2 * m, 1)).collect::<Vec<_>>());
    (a, b)
}

fn add_into(map: &mut BTreeMap<UqMono, LaurentPoly>, m: UqMono, c: LaurentPoly) {
    if c.is_zero() {
        return;
    }
    let entry = map.entry(m).or_insert_with(LaurentPoly::zero);
    *entry = &*entry + &c;
    if entry.is_zero() {
        map.remove(&m);
    }
}

/// Product of two basis monomials, by left multiplication with the
/// generators of the left factor.
pub fn mono_mul(a: UqMono, b: UqMono) -> MonoProduct {
    if let Some(hit) = MUL_CACHE.with(|c| c.borrow().get(&(a, b)).cloned()) {
        return hit;
    }
    let mut cur: BTreeMap<UqMono, LaurentPoly> = BTreeMap::new();
    // K^{a.k} · Ẽ^e F^f K^k = q^{2 a.k (e − f)} Ẽ^e F^f K^{k + a.k}
    let shift = 2 * a.k as i32 * b.grade();
    cur.insert(UqMono::new(b.e, b.f, b.k + a.k), LaurentPoly::q_pow(shift));
    for _ in 0..a.f {
        let mut next = BTreeMap::new();
        for (m, c) in cur {
            add_into(&mut next, UqMono::new(m.e, m.f + 1, m.k), c.clone());
            if m.e > 0 {
                let (ae, be) = ab_sums(m.e);
                let f = m.f as i32;
                let low_plus = &(&ae * &LaurentPoly::q_pow(-2 * f)) * &c;
                let low_minus = &(&be * &LaurentPoly::q_pow(2 * f)) * &c;
                add_into(&mut next, UqMono::new(m.e - 1, m.f, m.k + 1), -low_plus);
                add_into(&mut next, UqMono::new(m.e - 1, m.f, m.k - 1), low_minus);
            }
        }
        cur = next;
    }
    let out: Vec<_> = cur.into_iter().map(|(m, c)| (UqMono::new(m.e + a.e, m.f, m.k), c)).collect();
    let out = Rc::new(out);
    MUL_CACHE.with(|c| c.borrow_mut().insert((a, b), out.clone()));
    out
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct UqElem {
    terms: BTreeMap<UqMono, RatFunc>,
}

impl UqElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::mono(UqMono::ONE, RatFunc::one())
    }

    pub fn scalar(c: RatFunc) -> Self {
        Self::mono(UqMono::ONE, c)
    }

    pub fn mono(m: UqMono, c: RatFunc) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    /// `Ẽ = (q − q^{-1})E`.
    pub fn e_tilde() -> Self {
        Self::mono(UqMono::new(1, 0, 0), RatFunc::one())
    }

    pub fn e() -> Self {
        Self::e_tilde().scale(&RatFunc::new(LaurentPoly::one(), q_minus_qinv()).expect("nonzero"))
    }

    pub fn f() -> Self {
        Self::mono(UqMono::new(0, 1, 0), RatFunc::one())
    }

    pub fn k_pow(k: i16) -> Self {
        Self::mono(UqMono::new(0, 0, k), RatFunc::one())
    }

    pub fn k() -> Self {
        Self::k_pow(1)
    }

    pub fn kinv() -> Self {
        Self::k_pow(-1)
    }

    /// `Λ = (q − q^{-1})² EF + q^{-1}K + qK^{-1}`.
    pub fn casimir() -> Self {
        let mut t = BTreeMap::new();
        t.insert(UqMono::new(1, 1, 0), RatFunc::from(q_minus_qinv()));
        t.insert(UqMono::new(0, 0, 1), RatFunc::q_pow(-1));
        t.insert(UqMono::new(0, 0, -1), RatFunc::q_pow(1));
        Self { terms: t }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&UqMono, &RatFunc)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: UqMono, c: &RatFunc) {
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

    pub fn scale(&self, c: &RatFunc) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Homogeneous components by `|Ẽ^e F^f K^k| = e − f`.
    pub fn grade_decompose(&self) -> Vec<(i32, UqElem)> {
        let mut by: BTreeMap<i32, UqElem> = BTreeMap::new();
        for (m, c) in &self.terms {
            by.entry(m.grade()).or_default().add_term(*m, c);
        }
        by.into_iter().collect()
    }

    pub fn counit(&self) -> RatFunc {
        self.terms
            .iter()
            .filter(|(m, _)| m.e == 0 && m.f == 0)
            .fold(RatFunc::zero(), |acc, (_, c)| &acc + c)
    }

    pub fn antipode(&self) -> UqElem {
        let mut out = UqElem::zero();
        for (m, c) in &self.terms {
            // S(Ẽ^e F^f K^k) = K^{-k} S(F)^f S(Ẽ)^e
            let sf = &UqElem::k() * &UqElem::f();
            let se = (&UqElem::e_tilde() * &UqElem::kinv()).scale(&RatFunc::from_int(-1));
            let sf = sf.scale(&RatFunc::from_int(-1));
            let img = &(&UqElem::k_pow(-m.k) * &sf.pow(m.f as u32)) * &se.pow(m.e as u32);
            out = &out + &img.scale(c);
        }
        out
    }

    pub fn coproduct(&self) -> TensorElem {
        let mut out = TensorElem::zero(2);
        for (m, c) in &self.terms {
            out.add_assign(&coproduct_mono(*m).scale(c));
        }
        out
    }

    /// Coefficients with every denominator cleared, if possible.
    pub fn is_laurent(&self) -> bool {
        self.terms.values().all(|c| c.is_laurent())
    }

    pub fn bar_coeffs(&self) -> UqElem {
        Self { terms: self.terms.iter().map(|(m, c)| (*m, c.bar())).collect() }
    }
}

fn coproduct_mono(m: UqMono) -> TensorElem {
    thread_local! {
        static CACHE: RefCell<HashMap<UqMono, TensorElem>> = RefCell::new(HashMap::new());
    }
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&m).cloned()) {
        return hit;
    }
    let one = UqMono::ONE;
    let k = |x: i16| UqMono::new(0, 0, x);
    let de = TensorElem::from_terms(
        2,
        vec![(vec![UqMono::new(1, 0, 0), k(1)], RatFunc::one()), (vec![one, UqMono::new(1, 0, 0)], RatFunc::one())],
    );
    let df = TensorElem::from_terms(
        2,
        vec![(vec![UqMono::new(0, 1, 0), one], RatFunc::one()), (vec![k(-1), UqMono::new(0, 1, 0)], RatFunc::one())],
    );
    let dk = TensorElem::from_terms(2, vec![(vec![k(m.k), k(m.k)], RatFunc::one())]);
    let mut acc = TensorElem::one(2);
    for _ in 0..m.e {
        acc = &acc * &de;
    }
    for _ in 0..m.f {
        acc = &acc * &df;
    }
    acc = &acc * &dk;
    CACHE.with(|c| c.borrow_mut().insert(m, acc.clone()));
    acc
}

impl Add for &UqElem {
    type Output = UqElem;
    fn add(self, o: &UqElem) -> UqElem {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl Sub for &UqElem {
    type Output = UqElem;
    fn sub(self, o: &UqElem) -> UqElem {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl Neg for &UqElem {
    type Output = UqElem;
    fn neg(self) -> UqElem {
        UqElem { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Mul for &UqElem {
    type Output = UqElem;
    fn mul(self, o: &UqElem) -> UqElem {
        let mut out = UqElem::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let cab = ca * cb;
                for (m, c) in mono_mul(*a, *b).iter() {
                    out.add_term(*m, &(&cab * &RatFunc::from(c.clone())));
                }
            }
        }
        out
    }
}

impl fmt::Display for UqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            // Ẽ^e = (q − q^{-1})^e E^e
            let c = c * &RatFunc::from(q_minus_qinv().pow(m.e as u32));
            parts.push(fmt_term(&c, &fmt_mono(m)));
        }
        write!(f, "{}", join_signed(&parts))
    }
}

impl fmt::Debug for UqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `E^2*F*K^-1` style, in terms of `E` (not `Ẽ`).
pub fn fmt_mono(m: &UqMono) -> String {
    let mut parts = Vec::new();
    let mut push = |name: &str, n: i32| match n {
        0 => {}
        1 => parts.push(name.to_string()),
        _ => parts.push(format!("{name}^{n}")),
    };
    push("E", m.e as i32);
    push("F", m.f as i32);
    push("K", m.k as i32);
    parts.join("*")
}

pub(crate) fn fmt_term(c: &RatFunc, mono: &str) -> (bool, String) {
    let neg = crate::freealg::is_negative_scalar(c);
    let c = if neg { -c } else { c.clone() };
    let body = if mono.is_empty() {
        c.fmt_factor()
    } else if c.is_one() {
        mono.to_string()
    } else {
        format!("{}*{}", c.fmt_factor(), mono)
    };
    (neg, body)
}

/// `h ⊳ x = Σ h_(1) x S(h_(2))`.
pub fn adjoint(h: &UqElem, x: &UqElem) -> UqElem {
    let mut out = UqElem::zero();
    for (ms, c) in h.coproduct().terms() {
        let h1 = UqElem::mono(ms[0], RatFunc::one());
        let h2 = UqElem::mono(ms[1], RatFunc::one()).antipode();
        out = &out + &(&(&h1 * x) * &h2).scale(c);
    }
    out
}

/// `Ẽ ⊳ x = (Ẽx − xẼ)K^{-1}`, the hot path of the quasi-R sums.
pub fn adjoint_e_tilde(x: &UqElem) -> UqElem {
    let e = UqElem::e_tilde();
    &(&(&e * x) - &(x * &e)) * &UqElem::kinv()
}

/// Scalar part of the quasi-R-matrix component: `Θ_i = c_i · Ẽ^i ⊗ F^i`
/// with `c_i = q^{i(i−1)/2}/[i]!`.
pub fn theta_coeff(i: u32) -> RatFunc {
    let i = i as i32;
    let num = LaurentPoly::v_pow(2 * i * (i - 1));
    RatFunc::new(num, qfactorial(i as u32)).expect("nonzero factorial")
}

/// `τ_L(x) = Σ_i K^{i+|x|} v_i ⊗ u_i ⊳ x`, summed per homogeneous component
/// until the adjoint orbit vanishes.
pub fn tau_l(x: &UqElem, bound: u32) -> Result<TensorElem, UqError> {
    let mut out = TensorElem::zero(2);
    for (grade, comp) in x.grade_decompose() {
        let mut y = comp;
        let mut i: u32 = 0;
        while !y.is_zero() {
            if i > bound {
                return Err(UqError::TruncationExceeded(bound));
            }
            let left = &UqElem::k_pow((i as i32 + grade) as i16) * &UqElem::f().pow(i);
            let c = theta_coeff(i);
            out.add_assign(&TensorElem::pure(&[left, y.scale(&c)]));
            y = adjoint_e_tilde(&y);
            i += 1;
        }
    }
    Ok(out)
}

/// Generators of the reflection-equation image: `[[k++, k+-], [k-+, k--]]`.
pub fn rea_matrix() -> [[UqElem; 2]; 2] {
    let qi = RatFunc::q_pow(-1);
    let kpp = (&UqElem::casimir() - &UqElem::k().scale(&qi)).scale(&qi);
    // q^{-1}(q − q^{-1})E = q^{-1}Ẽ
    let kpm = UqElem::e_tilde().scale(&qi);
    let kmp = (&UqElem::k() * &UqElem::f()).scale(&RatFunc::from(q_minus_qinv()));
    let kmm = UqElem::k();
    [[kpp, kpm], [kmp, kmm]]
}

#[derive(Debug, Clone)]
pub struct ReaReport {
    pub determinant_ok: bool,
    /// `k^+_+ k^-_- − q k^+_- k^-_+ − 1`, the determinant with coefficient `q`
    /// instead of `q²`; nonzero for this image matrix.
    pub literal_determinant_residual: UqElem,
    pub reflection_entries_ok: usize,
    pub trace_ok: bool,
    pub witnesses: Vec<String>,
}

impl ReaReport {
    pub fn passed(&self) -> bool {
        self.determinant_ok && self.reflection_entries_ok == 16 && self.trace_ok
    }
}

type Mat4 = Vec<Vec<UqElem>>;

fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(UqElem::zero(), |acc, k| {
                        if a[i][k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            &acc + &(&a[i][k] * &b[k][j])
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Checks the quantum determinant `k^+_+ k^-_- − q² k^+_- k^-_+ = 1`, the
/// reflection equation `R21 (K⊗I) R (I⊗K) = (I⊗K) R21 (K⊗I) R` and
/// `tr_q(K) = Λ` on the image matrix.
///
/// `R` has its `q − q^{-1}` entry in row `(s, t)`, column `(t, s)` with `s`
/// the first basis vector, and the basis of `C²` is ordered `(v_-, v_+)`.
pub fn verify_rea_image() -> ReaReport {
    let km = rea_matrix();
    let q = RatFunc::q_pow(1);
    let mut witnesses = Vec::new();

    let cross = &km[0][1] * &km[1][0];
    let det = &(&km[0][0] * &km[1][1]) - &cross.scale(&RatFunc::q_pow(2));
    let determinant_ok = det == UqElem::one();
    if !determinant_ok {
        witnesses.push(format!("determinant: {det}"));
    }
    let literal_determinant_residual = &(&(&km[0][0] * &km[1][1]) - &cross.scale(&q)) - &UqElem::one();

    let sc = |c: RatFunc| UqElem::scalar(c);
    let z = UqElem::zero;
    // Index (a, b) ↦ 2a + b with a, b ∈ {0 = −, 1 = +}.
    let r: Mat4 = vec![
        vec![sc(q.clone()), z(), z(), z()],
        vec![z(), sc(RatFunc::one()), sc(q_minus_qinv().into()), z()],
        vec![z(), z(), sc(RatFunc::one()), z()],
        vec![z(), z(), z(), sc(q.clone())],
    ];
    let flip = |i: usize| (i % 2) * 2 + i / 2;
    let r21: Mat4 = (0..4).map(|i| (0..4).map(|j| r[flip(i)][flip(j)].clone()).collect()).collect();
    // entry of K at (−/+ index) — km is stored with + first
    let kent = |a: usize, b: usize| km[1 - a][1 - b].clone();
    let k1: Mat4 =
        (0..4).map(|i| (0..4).map(|j| if i % 2 == j % 2 { kent(i / 2, j / 2) } else { z() }).collect()).collect();
    let k2: Mat4 =
        (0..4).map(|i| (0..4).map(|j| if i / 2 == j / 2 { kent(i % 2, j % 2) } else { z() }).collect()).collect();
    let lhs = mat_mul(&mat_mul(&mat_mul(&r21, &k1), &r), &k2);
    let rhs = mat_mul(&mat_mul(&mat_mul(&k2, &r21), &k1), &r);
    let mut reflection_entries_ok = 0;
    for i in 0..4 {
        for j in 0..4 {
            let d = &lhs[i][j] - &rhs[i][j];
            if d.is_zero() {
                reflection_entries_ok += 1;
            } else {
                witnesses.push(format!("reflection entry ({i},{j}): {d}"));
            }
        }
    }

    let tr = &km[0][0].scale(&q) + &km[1][1].scale(&RatFunc::q_pow(-1));
    let trace_ok = tr == UqElem::casimir();
    if !trace_ok {
        witnesses.push(format!("quantum trace: {tr}"));
    }
    ReaReport { determinant_ok, literal_determinant_residual, reflection_entries_ok, trace_ok, witnesses }
}

/// The quantum-group axioms checked on generators: defining relations,
/// Hopf axioms, the two forms of the Casimir and its centrality, the images
/// of `τ_L` on `E, FK, K, Λ`, and the coaction axioms for `τ_L`.
pub fn verify_hopf() -> crate::Report {
    let mut rep = crate::Report::new("quantum group axioms");
    let (e, f, k, ki) = (UqElem::e(), UqElem::f(), UqElem::k(), UqElem::kinv());
    let lam = UqElem::casimir();
    let r = |x: &str| -> RatFunc { x.parse().expect("static coefficient") };
    let qm = RatFunc::from(q_minus_qinv());
    let qm2 = &qm * &qm;
    let mut eq = |name: &str, a: UqElem, b: UqElem| rep.check(a == b, || format!("{name}: {a} ≠ {b}"));

    eq("[E,F]", &(&e * &f) - &(&f * &e), (&k - &ki).scale(&qm.recip().expect("q ≠ ±1")));
    eq("KE", &k * &e, (&e * &k).scale(&r("q^2")));
    eq("KF", &k * &f, (&f * &k).scale(&r("q^-2")));
    eq("KK^-1", &k * &ki, UqElem::one());
    let fe = &(&(&f * &e).scale(&qm2) + &k.scale(&r("q"))) + &ki.scale(&r("q^-1"));
    let ef = &(&(&e * &f).scale(&qm2) + &k.scale(&r("q^-1"))) + &ki.scale(&r("q"));
    eq("Casimir FE form", fe, lam.clone());
    eq("Casimir EF form", ef, lam.clone());
    for x in [&e, &f, &k, &ki] {
        eq("Casimir centrality", &lam * x, x * &lam);
    }
    eq("S(EF) = S(F)S(E)", (&e * &f).antipode(), &f.antipode() * &e.antipode());

    for x in [&e, &f, &k, &ki, &lam] {
        let d = x.coproduct();
        let name = x.to_string();
        rep.check(d.apply_counit(0).as_single().as_ref() == Some(x), || format!("(ε⊗id)Δ({name})"));
        rep.check(d.apply_counit(1).as_single().as_ref() == Some(x), || format!("(id⊗ε)Δ({name})"));
        let mut left = UqElem::zero();
        let mut right = UqElem::zero();
        for (ms, c) in d.terms() {
            let a = UqElem::mono(ms[0], c.clone());
            let b = UqElem::mono(ms[1], RatFunc::one());
            left = &left + &(&a.antipode() * &b);
            right = &right + &(&a * &b.antipode());
        }
        let eps = UqElem::scalar(x.counit());
        rep.check(left == eps, || format!("m(S⊗id)Δ({name})"));
        rep.check(right == eps, || format!("m(id⊗S)Δ({name})"));
        rep.check(d.apply_coproduct(0) == d.apply_coproduct(1), || format!("coassociativity on {name}"));
        for y in [&e, &f, &k] {
            rep.check((x * y).coproduct() == &d * &y.coproduct(), || format!("Δ({name}·{y}) multiplicative"));
        }
    }

    let b = DEFAULT_TRUNCATION;
    let fk = &f * &k;
    let t = |xs: &[UqElem]| TensorElem::pure(xs);
    let images = [
        ("τ_L(E)", e.clone(), t(&[k.clone(), e.clone()])),
        ("τ_L(Λ)", lam.clone(), t(&[UqElem::one(), lam.clone()])),
        ("τ_L(K)", k.clone(), &t(&[UqElem::one(), k.clone()]) - &t(&[fk.clone(), e.clone()]).scale(&(&r("q^-1") * &qm2))),
        (
            "τ_L(FK)",
            fk.clone(),
            &(&(&t(&[ki.clone(), fk.clone()]) - &t(&[f.clone(), lam.clone()]).scale(&r("q")))
                + &t(&[f.clone(), k.clone()]).scale(&r("q^2 + 1")))
                - &t(&[&(&f * &f) * &k, e.clone()]).scale(&(&r("q^-1") * &qm2)),
        ),
    ];
    for (name, x, want) in &images {
        let got = tau_l(x, b);
        rep.check(got.as_ref() == Ok(want), || format!("{name} = {got:?}"));
    }
    let gens = [e.clone(), fk, k.clone(), lam];
    for x in &gens {
        match tau_l(x, b) {
            Ok(tx) => {
                let co = tx.apply_tau_l(1, b).map(|y| y == tx.apply_coproduct(0)).unwrap_or(false);
                rep.check(co, || format!("(Δ⊗id)τ_L = (id⊗τ_L)τ_L on {x}"));
                rep.check(tx.apply_counit(0).as_single().as_ref() == Some(x), || format!("(ε⊗id)τ_L on {x}"));
            }
            Err(err) => rep.check(false, || format!("τ_L({x}): {err}")),
        }
        for y in &gens {
            let ok = match (tau_l(&(x * y), b), tau_l(x, b), tau_l(y, b)) {
                (Ok(a), Ok(tx), Ok(ty)) => a == &tx * &ty,
                _ => false,
            };
            rep.check(ok, || format!("τ_L multiplicative on {x}·{y}"));
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e() -> UqElem {
        UqElem::e()
    }
    fn f() -> UqElem {
        UqElem::f()
    }
    fn k() -> UqElem {
        UqElem::k()
    }
    fn ki() -> UqElem {
        UqElem::kinv()
    }
    fn s(x: &str) -> RatFunc {
        x.parse().unwrap()
    }

    #[test]
    fn defining_relations() {
        let comm = &(&e() * &f()) - &(&f() * &e());
        let want = (&k() - &ki()).scale(&RatFunc::new(LaurentPoly::one(), q_minus_qinv()).unwrap());
        assert_eq!(comm, want);
        assert_eq!(&k() * &e(), (&e() * &k()).scale(&s("q^2")));
        assert_eq!(&k() * &f(), (&f() * &k()).scale(&s("q^-2")));
        assert_eq!(&k() * &ki(), UqElem::one());
    }

    #[test]
    fn casimir_two_forms_and_centrality() {
        let qm2 = RatFunc::from(q_minus_qinv().pow(2));
        let fe = &(&(&f() * &e()).scale(&qm2) + &k().scale(&s("q"))) + &ki().scale(&s("q^-1"));
        let ef = &(&(&e() * &f()).scale(&qm2) + &k().scale(&s("q^-1"))) + &ki().scale(&s("q"));
        assert_eq!(fe, ef);
        assert_eq!(fe, UqElem::casimir());
        let c = UqElem::casimir();
        for x in [e(), f(), k(), ki()] {
            assert!((&(&c * &x) - &(&x * &c)).is_zero());
        }
    }

    #[test]
    fn hopf_axioms_on_generators() {
        for x in [e(), f(), k(), ki(), UqElem::casimir()] {
            // (ε ⊗ id)Δ = id = (id ⊗ ε)Δ
            let d = x.coproduct();
            assert_eq!(d.apply_counit(0).as_single().unwrap(), x);
            assert_eq!(d.apply_counit(1).as_single().unwrap(), x);
            // m(S ⊗ id)Δ = ε = m(id ⊗ S)Δ
            let mut left = UqElem::zero();
            let mut right = UqElem::zero();
            for (ms, c) in d.terms() {
                let a = UqElem::mono(ms[0], c.clone());
                let b = UqElem::mono(ms[1], RatFunc::one());
                left = &left + &(&a.antipode() * &b);
                right = &right + &(&a * &b.antipode());
            }
            assert_eq!(left, UqElem::scalar(x.counit()));
            assert_eq!(right, UqElem::scalar(x.counit()));
            // coassociativity
            assert_eq!(d.apply_coproduct(0), d.apply_coproduct(1));
        }
        assert_eq!(k().pow(1).antipode(), ki());
        assert_eq!(ki().antipode(), k());
        assert_eq!(ki().coproduct(), TensorElem::pure(&[ki(), ki()]));
        // S(EF) = S(F)S(E)
        let sef = (&e() * &f()).antipode();
        assert_eq!(sef, &f().antipode() * &e().antipode());
        assert_eq!(UqElem::casimir().counit(), s("q + q^-1"));
        // Δ is multiplicative: Δ(Λ) commutes with Δ(E)
        let dl = UqElem::casimir().coproduct();
        let de = e().coproduct();
        assert!((&(&dl * &de) - &(&de * &dl)).is_zero());
    }

    #[test]
    fn grading_and_adjoint() {
        let fk = &f() * &k();
        assert!(fk.grade_decompose().iter().all(|(g, _)| *g == -1));
        assert!(UqElem::casimir().grade_decompose().iter().all(|(g, _)| *g == 0));
        for x in [e(), f(), fk.clone(), &e() * &e()] {
            for (g, comp) in x.grade_decompose() {
                let q2g = RatFunc::q_pow(2 * g);
                assert_eq!(&k() * &comp, (&comp * &k()).scale(&q2g));
            }
        }
        assert_eq!(adjoint(&k(), &e()), e().scale(&s("q^2")));
        assert!(adjoint(&e(), &UqElem::casimir()).is_zero());
        assert_eq!(adjoint(&UqElem::one(), &fk), fk);
        assert_eq!(adjoint_e_tilde(&fk), adjoint(&UqElem::e_tilde(), &fk));
        // module-algebra property on a sample
        let (x, y) = (&f() * &k(), &e() * &k());
        let lhs = adjoint(&e(), &(&x * &y));
        let mut rhs = UqElem::zero();
        for (ms, c) in e().coproduct().terms() {
            let h1 = UqElem::mono(ms[0], c.clone());
            let h2 = UqElem::mono(ms[1], RatFunc::one());
            rhs = &rhs + &(&adjoint(&h1, &x) * &adjoint(&h2, &y));
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn tau_l_on_generators() {
        let b = DEFAULT_TRUNCATION;
        assert_eq!(tau_l(&e(), b).unwrap(), TensorElem::pure(&[k(), e()]));
        assert_eq!(tau_l(&UqElem::casimir(), b).unwrap(), TensorElem::pure(&[UqElem::one(), UqElem::casimir()]));
        let qm = RatFunc::from(q_minus_qinv());
        let want_k = &TensorElem::pure(&[UqElem::one(), k()])
            - &TensorElem::pure(&[&f() * &k(), e()]).scale(&(&s("q^-1") * &(&qm * &qm)));
        assert_eq!(tau_l(&k(), b).unwrap(), want_k);
        // τ_L(FK) = K^{-1}⊗FK − qF⊗Λ + q(q+q^{-1})F⊗K − q^{-1}(q−q^{-1})² F²K⊗E
        let fk = &f() * &k();
        let want = &(&(&TensorElem::pure(&[ki(), fk.clone()])
            - &TensorElem::pure(&[f(), UqElem::casimir()]).scale(&s("q")))
            + &TensorElem::pure(&[f(), k()]).scale(&s("q^2 + 1")))
            - &TensorElem::pure(&[&(&f() * &f()) * &k(), e()]).scale(&(&s("q^-1") * &(&qm * &qm)));
        assert_eq!(tau_l(&fk, b).unwrap(), want);
        assert_eq!(tau_l(&ki(), 3), Err(UqError::TruncationExceeded(3)));
    }

    #[test]
    fn tau_l_coaction_axioms_and_multiplicativity() {
        let b = DEFAULT_TRUNCATION;
        let gens = [e(), &f() * &k(), k(), UqElem::casimir()];
        for x in &gens {
            let t = tau_l(x, b).unwrap();
            assert_eq!(t.apply_coproduct(0), t.apply_tau_l(1, b).unwrap());
            assert_eq!(t.apply_counit(0).as_single().unwrap(), *x);
        }
        for x in &gens {
            for y in &gens {
                let lhs = tau_l(&(x * y), b).unwrap();
                let rhs = &tau_l(x, b).unwrap() * &tau_l(y, b).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn rea_image() {
        let r = verify_rea_image();
        assert!(r.passed(), "{:?}", r.witnesses);
        // the coefficient-q determinant leaves q^-1(1 − q^-1)(q − q^-1)²·EFK
        let qm = RatFunc::from(q_minus_qinv());
        let efk = (&(&UqElem::e() * &UqElem::f()) * &UqElem::k()).scale(&(&qm * &qm));
        assert_eq!(r.literal_determinant_residual, efk.scale(&s("q^-1 - q^-2")));
    }

    #[test]
    fn hopf_suite() {
        let rep = verify_hopf();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!(rep.checked, 79);
    }

    #[test]
    fn printing() {
        assert_eq!(e().to_string(), "E");
        assert_eq!((&(&e() * &e()) * &(&f() * &ki())).to_string(), "E^2*F*K^-1");
        assert_eq!(UqElem::casimir().to_string(), "(q^2 - 2 + q^-2)*E*F + q^-1*K + q*K^-1");
    }
}
