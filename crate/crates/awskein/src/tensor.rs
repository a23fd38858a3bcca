//! Tensor powers `U_q(sl2)^⊗n`: iterated coproducts, the Casimirs `Λ_A`,
//! the braided product and its coproduct `Δ̄`, the quasi-R-matrix, the
//! unbraiding maps `φ_n`/`γ_n`, and the verification passes built on them.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::central::join_signed;
use crate::coeff::{q_plus_qinv, LaurentPoly, RatFunc};
use crate::skein::LoopSet;
use crate::uqsl2::{
    adjoint, adjoint_e_tilde, fmt_mono, fmt_term, mono_mul, tau_l, theta_coeff, UqElem, UqError, UqMono,
    DEFAULT_TRUNCATION,
};
use crate::Report;

pub type Key = Vec<UqMono>;

/// Element of `U_q(sl2)^⊗n` as a map from monomial tuples to coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TensorElem {
    n: usize,
    terms: HashMap<Key, RatFunc>,
}

fn key_grade(k: &[UqMono]) -> i32 {
    k.iter().map(|m| m.grade()).sum()
}

impl TensorElem {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: HashMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::mono(vec![UqMono::ONE; n], RatFunc::one())
    }

    pub fn scalar(n: usize, c: RatFunc) -> Self {
        Self::mono(vec![UqMono::ONE; n], c)
    }

    pub fn mono(key: Key, c: RatFunc) -> Self {
        let mut out = Self::zero(key.len());
        out.add_term(key, &c);
        out
    }

    pub fn from_terms(n: usize, terms: Vec<(Key, RatFunc)>) -> Self {
        let mut out = Self::zero(n);
        for (k, c) in terms {
            assert_eq!(k.len(), n, "tensor arity mismatch");
            out.add_term(k, &c);
        }
        out
    }

    /// `x_1 ⊗ x_2 ⊗ … ⊗ x_n`.
    pub fn pure(factors: &[UqElem]) -> Self {
        factors.iter().fold(Self::one(0), |acc, x| acc.tensor(&Self::from_single(x)))
    }

    pub fn from_single(x: &UqElem) -> Self {
        let mut out = Self::zero(1);
        for (m, c) in x.terms() {
            out.add_term(vec![*m], c);
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &RatFunc)> {
        self.terms.iter()
    }

    pub fn sorted_terms(&self) -> Vec<(&Key, &RatFunc)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
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

    pub fn add_term(&mut self, k: Key, c: &RatFunc) {
        debug_assert_eq!(k.len(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(x) => {
                let s = &*x + c;
                if s.is_zero() {
                    self.terms.remove(&k);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, o: &TensorElem) {
        if self.terms.is_empty() && self.n != o.n {
            self.n = o.n;
        }
        assert_eq!(self.n, o.n, "tensor arity mismatch");
        for (k, c) in &o.terms {
            self.add_term(k.clone(), c);
        }
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Self { n: self.n, terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect() }
    }

    /// Plain (unbraided) tensor product, concatenating factors.
    pub fn tensor(&self, o: &TensorElem) -> Self {
        let mut out = Self::zero(self.n + o.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let mut k = a.clone();
                k.extend_from_slice(b);
                out.add_term(k, &(ca * cb));
            }
        }
        out
    }

    pub fn as_single(&self) -> Option<UqElem> {
        (self.n == 1).then(|| {
            let mut out = UqElem::zero();
            for (k, c) in &self.terms {
                out.add_term(k[0], c);
            }
            out
        })
    }

    pub fn as_scalar(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero()),
            1 => self.terms.iter().next().filter(|(k, _)| k.iter().all(|m| *m == UqMono::ONE)).map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    /// Total grade if homogeneous.
    pub fn grade(&self) -> Option<i32> {
        let mut it = self.terms.keys().map(|k| key_grade(k));
        let g = it.next()?;
        it.all(|h| h == g).then_some(g)
    }

    pub fn grade_decompose(&self) -> Vec<(i32, TensorElem)> {
        let mut by: BTreeMap<i32, TensorElem> = BTreeMap::new();
        for (k, c) in &self.terms {
            by.entry(key_grade(k)).or_insert_with(|| TensorElem::zero(self.n)).add_term(k.clone(), c);
        }
        by.into_iter().collect()
    }

    /// Groups terms by every factor except `pos`; the collected factor at
    /// `pos` is handed whole to `f`, whose `m`-fold output is spliced in.
    pub fn try_map_factor<E>(
        &self,
        pos: usize,
        m: usize,
        mut f: impl FnMut(&UqElem) -> Result<TensorElem, E>,
    ) -> Result<TensorElem, E> {
        assert!(pos < self.n);
        let mut groups: HashMap<Key, UqElem> = HashMap::new();
        for (k, c) in &self.terms {
            let mut rest = k.clone();
            let mid = rest.remove(pos);
            groups.entry(rest).or_default().add_term(mid, c);
        }
        let mut out = TensorElem::zero(self.n - 1 + m);
        for (rest, x) in groups {
            let img = f(&x)?;
            assert_eq!(img.n, m);
            for (ik, ic) in &img.terms {
                let mut k = rest[..pos].to_vec();
                k.extend_from_slice(ik);
                k.extend_from_slice(&rest[pos..]);
                out.add_term(k, ic);
            }
        }
        Ok(out)
    }

    pub fn map_factor(&self, pos: usize, m: usize, mut f: impl FnMut(&UqElem) -> TensorElem) -> TensorElem {
        self.try_map_factor::<()>(pos, m, |x| Ok(f(x))).expect("infallible")
    }

    pub fn apply_counit(&self, pos: usize) -> TensorElem {
        self.map_factor(pos, 0, |x| TensorElem::scalar(0, x.counit()))
    }

    pub fn apply_coproduct(&self, pos: usize) -> TensorElem {
        self.map_factor(pos, 2, |x| x.coproduct())
    }

    pub fn apply_antipode(&self, pos: usize) -> TensorElem {
        self.map_factor(pos, 1, |x| TensorElem::from_single(&x.antipode()))
    }

    /// `id^{⊗pos} ⊗ τ_L ⊗ id…`. Terms are grouped first: single monomials
    /// are generally not locally finite, only their sums are.
    pub fn apply_tau_l(&self, pos: usize, bound: u32) -> Result<TensorElem, UqError> {
        self.try_map_factor(pos, 2, |x| tau_l(x, bound))
    }

    /// Places the factors at `positions` (0-based, increasing) of an
    /// `n`-fold tensor, with `1` elsewhere.
    pub fn embed(&self, positions: &[usize], n: usize) -> TensorElem {
        assert_eq!(positions.len(), self.n);
        let mut out = TensorElem::zero(n);
        for (k, c) in &self.terms {
            let mut key = vec![UqMono::ONE; n];
            for (m, &p) in k.iter().zip(positions) {
                key[p] = *m;
            }
            out.add_term(key, c);
        }
        out
    }

    /// Coefficients all Laurent polynomials.
    pub fn is_laurent(&self) -> bool {
        self.terms.values().all(|c| c.is_laurent())
    }
}

impl fmt::Display for TensorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let qm = crate::coeff::q_minus_qinv();
        let mut parts = Vec::new();
        for (k, c) in self.sorted_terms().into_iter().rev() {
            let e: u32 = k.iter().map(|m| m.e as u32).sum();
            let c = c * &RatFunc::from(qm.pow(e));
            let body: Vec<String> =
                k.iter().map(|m| if *m == UqMono::ONE { "1".to_string() } else { fmt_mono(m) }).collect();
            parts.push(fmt_term(&c, &format!("({})", body.join(" ⊗ "))));
        }
        write!(f, "{}", join_signed(&parts))
    }
}

impl fmt::Debug for TensorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &TensorElem {
    type Output = TensorElem;
    fn add(self, o: &TensorElem) -> TensorElem {
        let mut out = self.clone();
        out.add_assign(o);
        out
    }
}

impl Sub for &TensorElem {
    type Output = TensorElem;
    fn sub(self, o: &TensorElem) -> TensorElem {
        let mut out = self.clone();
        out.add_assign(&-o);
        out
    }
}

impl Neg for &TensorElem {
    type Output = TensorElem;
    fn neg(self) -> TensorElem {
        TensorElem { n: self.n, terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }
}

impl Mul for &TensorElem {
    type Output = TensorElem;
    fn mul(self, o: &TensorElem) -> TensorElem {
        assert_eq!(self.n, o.n, "tensor arity mismatch");
        let n = self.n;
        let mut acc: HashMap<Key, LaurentPoly> = HashMap::new();
        let mut rational: HashMap<Key, RatFunc> = HashMap::new();
        let mut partial: Vec<(Key, LaurentPoly)> = Vec::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                let cab = ca * cb;
                partial.clear();
                partial.push((Vec::with_capacity(n), LaurentPoly::one()));
                for j in 0..n {
                    let prod = mono_mul(ka[j], kb[j]);
                    if prod.len() == 1 {
                        let (m, c) = &prod[0];
                        for (k, pc) in partial.iter_mut() {
                            k.push(*m);
                            if !c.is_one() {
                                *pc = &*pc * c;
                            }
                        }
                    } else {
                        let mut next = Vec::with_capacity(partial.len() * prod.len());
                        for (k, pc) in &partial {
                            for (m, c) in prod.iter() {
                                let mut k2 = k.clone();
                                k2.push(*m);
                                next.push((k2, pc * c));
                            }
                        }
                        partial = next;
                    }
                }
                match cab.as_laurent() {
                    Some(l) => {
                        for (k, pc) in partial.drain(..) {
                            let v = &pc * l;
                            match acc.get_mut(&k) {
                                Some(x) => *x = &*x + &v,
                                None => {
                                    acc.insert(k, v);
                                }
                            }
                        }
                    }
                    None => {
                        for (k, pc) in partial.drain(..) {
                            let v = &cab * &RatFunc::from(pc);
                            match rational.get_mut(&k) {
                                Some(x) => *x = &*x + &v,
                                None => {
                                    rational.insert(k, v);
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut out = TensorElem::zero(n);
        for (k, c) in acc {
            if !c.is_zero() {
                out.terms.insert(k, c.into());
            }
        }
        for (k, c) in rational {
            out.add_term(k, &c);
        }
        out
    }
}

impl Add for TensorElem {
    type Output = TensorElem;
    fn add(self, o: TensorElem) -> TensorElem {
        &self + &o
    }
}

impl Sub for TensorElem {
    type Output = TensorElem;
    fn sub(self, o: TensorElem) -> TensorElem {
        &self - &o
    }
}

impl Mul for TensorElem {
    type Output = TensorElem;
    fn mul(self, o: TensorElem) -> TensorElem {
        &self * &o
    }
}

/// `Δ^{(n)}(x)`, an element with `n + 1` factors.
pub fn iterated_coproduct(x: &UqElem, n: usize) -> TensorElem {
    let mut out = TensorElem::from_single(x);
    for i in 0..n {
        out = out.apply_coproduct(i);
    }
    out
}

/// `Δ^{(n-1)}` of a monomial, cached.
fn iterated_coproduct_mono(m: UqMono, n: usize) -> TensorElem {
    thread_local! {
        static CACHE: RefCell<HashMap<(UqMono, usize), TensorElem>> = RefCell::new(HashMap::new());
    }
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&(m, n)).cloned()) {
        return hit;
    }
    let out = iterated_coproduct(&UqElem::mono(m, RatFunc::one()), n - 1);
    CACHE.with(|c| c.borrow_mut().insert((m, n), out.clone()));
    out
}

/// `Δ^{(n-1)}(x)` for an arbitrary element (n factors).
pub fn diagonal(x: &UqElem, n: usize) -> TensorElem {
    let mut out = TensorElem::zero(n);
    for (m, c) in x.terms() {
        out.add_assign(&iterated_coproduct_mono(*m, n).scale(c));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TensorError {
    #[error("invalid subset {0} of 1..{1}")]
    InvalidSubset(String, usize),
    #[error(transparent)]
    Uq(#[from] UqError),
}

/// `Λ_A ∈ U^⊗n` through the `Δ`/`τ_L` chain. `Λ_∅` is the scalar `q + q^{-1}`.
pub fn build_lambda(a: LoopSet, n: usize) -> Result<TensorElem, TensorError> {
    thread_local! {
        static CACHE: RefCell<HashMap<(LoopSet, usize), TensorElem>> = RefCell::new(HashMap::new());
    }
    if a.max_point().is_some_and(|m| m as usize > n) {
        return Err(TensorError::InvalidSubset(a.to_string(), n));
    }
    if a.is_empty() {
        return Ok(TensorElem::scalar(n, q_plus_qinv().into()));
    }
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&(a, n)).cloned()) {
        return Ok(hit);
    }
    let k = a.max_point().expect("nonempty") as usize;
    let mut x = TensorElem::from_single(&UqElem::casimir());
    for i in 1..k {
        x = if a.contains(i as u8) {
            x.apply_coproduct(i - 1)
        } else {
            x.apply_tau_l(i - 1, DEFAULT_TRUNCATION)?
        };
    }
    let out = x.tensor(&TensorElem::one(n - k));
    CACHE.with(|c| c.borrow_mut().insert((a, n), out.clone()));
    Ok(out)
}

/// `F ⊳ x = Fx − K^{-1} x K F`.
pub fn adjoint_f(x: &UqElem) -> UqElem {
    let mut out = UqElem::zero();
    let f = UqElem::f();
    for (m, c) in x.terms() {
        let mx = UqElem::mono(*m, c.clone());
        let shifted = (&mx * &f).scale(&RatFunc::q_pow(-2 * m.grade()));
        out = &out + &(&(&f * &mx) - &shifted);
    }
    out
}

/// `Ẽ ⊳ (x_1 ⊗ … ⊗ x_n) = Σ_j x_1 ⊗ … ⊗ Ẽ⊳x_j ⊗ K⊳x_{j+1} ⊗ … ⊗ K⊳x_n`,
/// the diagonal action through `Δ^{(n-1)}(Ẽ)`.
pub fn adjoint_e_tilde_tensor(x: &TensorElem) -> TensorElem {
    let mut out = TensorElem::zero(x.n);
    for (k, c) in &x.terms {
        let mut after = 0;
        for j in (0..x.n).rev() {
            let img = adjoint_e_tilde(&UqElem::mono(k[j], RatFunc::one()));
            let cj = c * &RatFunc::q_pow(2 * after);
            for (m, mc) in img.terms() {
                let mut key = k.clone();
                key[j] = *m;
                out.add_term(key, &(&cj * mc));
            }
            after += k[j].grade();
        }
    }
    out
}

/// Diagonal adjoint action of an arbitrary `h` on a tensor.
pub fn adjoint_tensor(h: &UqElem, x: &TensorElem) -> TensorElem {
    let n = x.n;
    let dh = diagonal(h, n);
    let mut out = TensorElem::zero(n);
    for (hk, hc) in &dh.terms {
        for (xk, xc) in &x.terms {
            let mut piece = TensorElem::scalar(0, hc * xc);
            for j in 0..n {
                let img = adjoint(&UqElem::mono(hk[j], RatFunc::one()), &UqElem::mono(xk[j], RatFunc::one()));
                piece = piece.tensor(&TensorElem::from_single(&img));
                if piece.is_zero() {
                    break;
                }
            }
            if !piece.is_zero() {
                out.add_assign(&piece);
            }
        }
    }
    out
}

fn grouped_first(x: &TensorElem) -> BTreeMap<UqMono, TensorElem> {
    let mut g: BTreeMap<UqMono, TensorElem> = BTreeMap::new();
    for (k, c) in &x.terms {
        g.entry(k[0]).or_insert_with(|| TensorElem::zero(x.n - 1)).add_term(k[1..].to_vec(), c);
    }
    g
}

fn grouped_tail(x: &TensorElem) -> HashMap<Key, UqElem> {
    let mut g: HashMap<Key, UqElem> = HashMap::new();
    for (k, c) in &x.terms {
        g.entry(k[1..].to_vec()).or_default().add_term(k[0], c);
    }
    g
}

fn prepend(a: &UqElem, rest: &TensorElem) -> TensorElem {
    TensorElem::from_single(a).tensor(rest)
}

/// Braided product on `(U^lf)^{⊗̃n}`:
/// `(g⊗h)·(x⊗y) = Σ_i q^{2(|h|+i)(|x|−i)} g(v_i⊳x) ⊗ (u_i⊳h)·y`,
/// recursing on the tail factors.
pub fn braided_mul(x: &TensorElem, y: &TensorElem, bound: u32) -> Result<TensorElem, UqError> {
    assert_eq!(x.n, y.n, "tensor arity mismatch");
    if x.n <= 1 {
        return Ok(x * y);
    }
    let mut out = TensorElem::zero(x.n);
    let xs = grouped_first(x);
    let ys = grouped_tail(y);
    for (g, h) in &xs {
        let g = UqElem::mono(*g, RatFunc::one());
        for (gh, hcomp) in h.grade_decompose() {
            for (ytail, xe) in &ys {
                let ytail = TensorElem::mono(ytail.clone(), RatFunc::one());
                for (gx, xcomp) in xe.grade_decompose() {
                    let mut vx = xcomp;
                    let mut uh = hcomp.clone();
                    let mut i: i32 = 0;
                    while !vx.is_zero() && !uh.is_zero() {
                        if i as u32 > bound {
                            return Err(UqError::TruncationExceeded(bound));
                        }
                        let c = &theta_coeff(i as u32) * &RatFunc::q_pow(2 * (gh + i) * (gx - i));
                        let right = braided_mul(&uh, &ytail, bound)?;
                        out.add_assign(&prepend(&(&g * &vx), &right).scale(&c));
                        vx = adjoint_f(&vx);
                        uh = adjoint_e_tilde_tensor(&uh);
                        i += 1;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `S(K^a F^i)`.
fn antipode_kf(a: i32, i: u32) -> UqElem {
    (&UqElem::k_pow(a as i16) * &UqElem::f().pow(i)).antipode()
}

/// `Δ̄(x) = Σ x_(1) S(K^{i+|x_(2)|} v_i) ⊗ u_i ⊳ x_(2)`.
pub fn bar_coproduct(x: &UqElem, bound: u32) -> Result<TensorElem, UqError> {
    bar_coproduct_iterated(x, 2, bound)
}

/// `Δ̄^{(k-1)}(x)` with `k` braided factors.
pub fn bar_coproduct_iterated(x: &UqElem, k: usize, bound: u32) -> Result<TensorElem, UqError> {
    assert!(k >= 1);
    if k == 1 {
        return Ok(TensorElem::from_single(x));
    }
    let d = x.coproduct();
    let mut out = TensorElem::zero(k);
    for (x1, x2) in grouped_first(&d) {
        let x1 = UqElem::mono(x1, RatFunc::one());
        let x2 = x2.as_single().expect("two factors");
        for (g, comp) in x2.grade_decompose() {
            let mut tail = bar_coproduct_iterated(&comp, k - 1, bound)?;
            let mut i: u32 = 0;
            while !tail.is_zero() {
                if i > bound {
                    return Err(UqError::TruncationExceeded(bound));
                }
                let left = &x1 * &antipode_kf(i as i32 + g, i);
                out.add_assign(&prepend(&left, &tail).scale(&theta_coeff(i)));
                tail = adjoint_e_tilde_tensor(&tail);
                i += 1;
            }
        }
    }
    Ok(out)
}

/// `Δ̄^{(k-1)}(x)` placed at the 1-based `positions` of an `n`-fold braided
/// tensor power, `1` elsewhere.
pub fn bar_coproduct_iterated_at(x: &UqElem, positions: &[usize], n: usize, bound: u32) -> Result<TensorElem, UqError> {
    let d = bar_coproduct_iterated(x, positions.len(), bound)?;
    let zero_based: Vec<usize> = positions.iter().map(|p| p - 1).collect();
    Ok(d.embed(&zero_based, n))
}

/// One-step unbraiding `φ_n(a⊗b) = Σ aK^{i+|b|}v_i ⊗ u_i⊳b`.
pub fn phi(x: &TensorElem, bound: u32) -> Result<TensorElem, UqError> {
    if x.n <= 1 {
        return Ok(x.clone());
    }
    let mut out = TensorElem::zero(x.n);
    for (a, b) in grouped_first(x) {
        let a = UqElem::mono(a, RatFunc::one());
        for (g, comp) in b.grade_decompose() {
            let mut ub = comp;
            let mut i: u32 = 0;
            while !ub.is_zero() {
                if i > bound {
                    return Err(UqError::TruncationExceeded(bound));
                }
                let left = &(&a * &UqElem::k_pow((i as i32 + g) as i16)) * &UqElem::f().pow(i);
                out.add_assign(&prepend(&left, &ub).scale(&theta_coeff(i)));
                ub = adjoint_e_tilde_tensor(&ub);
                i += 1;
            }
        }
    }
    Ok(out)
}

/// Left inverse of `φ_n`: `a⊗b ↦ Σ aS(v_i)K^{-(i+|b|)} ⊗ u_i⊳b`.
pub fn phi_inverse(x: &TensorElem, bound: u32) -> Result<TensorElem, UqError> {
    if x.n <= 1 {
        return Ok(x.clone());
    }
    let mut out = TensorElem::zero(x.n);
    for (a, b) in grouped_first(x) {
        let a = UqElem::mono(a, RatFunc::one());
        for (g, comp) in b.grade_decompose() {
            let mut ub = comp;
            let mut i: u32 = 0;
            while !ub.is_zero() {
                if i > bound {
                    return Err(UqError::TruncationExceeded(bound));
                }
                let left = &(&a * &UqElem::f().pow(i).antipode()) * &UqElem::k_pow(-(i as i32 + g) as i16);
                out.add_assign(&prepend(&left, &ub).scale(&theta_coeff(i)));
                ub = adjoint_e_tilde_tensor(&ub);
                i += 1;
            }
        }
    }
    Ok(out)
}

fn map_tails(
    x: &TensorElem,
    f: &dyn Fn(&TensorElem) -> Result<TensorElem, UqError>,
) -> Result<TensorElem, UqError> {
    let mut out = TensorElem::zero(x.n);
    for (a, tail) in grouped_first(x) {
        out.add_assign(&prepend(&UqElem::mono(a, RatFunc::one()), &f(&tail)?));
    }
    Ok(out)
}

/// `γ_n = (id ⊗ γ_{n-1}) ∘ φ_n`, with `γ_1` the inclusion.
pub fn unbraid(x: &TensorElem, bound: u32) -> Result<TensorElem, UqError> {
    if x.n <= 1 {
        return Ok(x.clone());
    }
    let p = phi(x, bound)?;
    map_tails(&p, &|t| unbraid(t, bound))
}

/// Left inverse of `γ_n`.
pub fn unbraid_inverse(x: &TensorElem, bound: u32) -> Result<TensorElem, UqError> {
    if x.n <= 1 {
        return Ok(x.clone());
    }
    let t = map_tails(x, &|t| unbraid_inverse(t, bound))?;
    phi_inverse(&t, bound)
}

/// `Λ_A` via the braided route: `γ_n` applied to `Δ̄^{(k-1)}(Λ)` placed on `A`.
pub fn lambda_via_unbraiding(a: LoopSet, n: usize) -> Result<TensorElem, UqError> {
    let pos: Vec<usize> = a.points().iter().map(|&p| p as usize).collect();
    let d = bar_coproduct_iterated_at(&UqElem::casimir(), &pos, n, DEFAULT_TRUNCATION)?;
    unbraid(&d, DEFAULT_TRUNCATION)
}

/// Quasi-R-matrix components `Θ_i = u_i ⊗ v_i` up to order `n`, with the
/// two expressions of the inverse `Γ_i`.
#[derive(Debug, Clone)]
pub struct QuasiR {
    pub order: u32,
    pub theta: Vec<TensorElem>,
}

impl QuasiR {
    pub fn new(order: u32) -> Self {
        let theta = (0..=order).map(theta_component).collect();
        Self { order, theta }
    }

    /// `Γ_i = S(u_i)K^i ⊗ v_i`.
    pub fn gamma(&self, i: u32) -> TensorElem {
        let u = UqElem::e_tilde().pow(i).scale(&theta_coeff(i));
        TensorElem::pure(&[&u.antipode() * &UqElem::k_pow(i as i16), UqElem::f().pow(i)])
    }

    /// `Γ_i = u_i ⊗ S^{-1}(v_i)K^{-i}`.
    pub fn gamma_alt(&self, i: u32) -> TensorElem {
        let u = UqElem::e_tilde().pow(i).scale(&theta_coeff(i));
        // S^{-1}(F) = −FK
        let sinv_f = (&UqElem::f() * &UqElem::k()).scale(&RatFunc::from_int(-1));
        TensorElem::pure(&[u, &sinv_f.pow(i) * &UqElem::k_pow(-(i as i16))])
    }
}

pub fn theta_component(i: u32) -> TensorElem {
    TensorElem::pure(&[UqElem::e_tilde().pow(i), UqElem::f().pow(i)]).scale(&theta_coeff(i))
}

/// `Ψ(x⊗y) = xK^{-|y|} ⊗ K^{-|x|}y` on factors `a`, `b` of a tensor.
pub fn psi_at(x: &TensorElem, a: usize, b: usize) -> TensorElem {
    let mut out = TensorElem::zero(x.n);
    for (k, c) in &x.terms {
        let (ga, gb) = (k[a].grade(), k[b].grade());
        let left = &UqElem::mono(k[a], RatFunc::one()) * &UqElem::k_pow(-gb as i16);
        let right = &UqElem::k_pow(-ga as i16) * &UqElem::mono(k[b], RatFunc::one());
        for (ma, ca) in left.terms() {
            for (mb, cb) in right.terms() {
                let mut key = k.clone();
                key[a] = *ma;
                key[b] = *mb;
                out.add_term(key, &(&(c * ca) * cb));
            }
        }
    }
    out
}

fn first_grade_part(x: &TensorElem, max: i32) -> TensorElem {
    let mut out = TensorElem::zero(x.n);
    for (k, c) in &x.terms {
        if k[0].grade() <= max {
            out.add_term(k.clone(), c);
        }
    }
    out
}

fn swap2(x: &TensorElem) -> TensorElem {
    let mut out = TensorElem::zero(2);
    for (k, c) in &x.terms {
        out.add_term(vec![k[1], k[0]], c);
    }
    out
}

/// Quasi-R-matrix identities, checked per graded component up to `order`.
pub fn verify_quasi_r(order: u32) -> Report {
    let mut rep = Report::new("quasi-R-matrix");
    let qr = QuasiR::new(order);
    rep.check(qr.theta[1] == TensorElem::pure(&[UqElem::e_tilde(), UqElem::f()]), || "Θ_1 ≠ (q−q^{-1})E⊗F".into());
    // ΘΓ = 1 and ΓΘ = 1, per order, for both expressions of Γ
    for m in 0..=order {
        let want = if m == 0 { TensorElem::one(2) } else { TensorElem::zero(2) };
        for (label, gam) in [("S(u)K⊗v", 0), ("u⊗S^{-1}(v)K^{-1}", 1)] {
            let mut tg = TensorElem::zero(2);
            let mut gt = TensorElem::zero(2);
            for a in 0..=m {
                let g = if gam == 0 { qr.gamma(m - a) } else { qr.gamma_alt(m - a) };
                tg.add_assign(&(&qr.theta[a as usize] * &g));
                let g2 = if gam == 0 { qr.gamma(a) } else { qr.gamma_alt(a) };
                gt.add_assign(&(&g2 * &qr.theta[(m - a) as usize]));
            }
            rep.check(tg == want, || format!("ΘΓ order {m} ({label}): {}", &tg - &want));
            rep.check(gt == want, || format!("ΓΘ order {m} ({label}): {}", &gt - &want));
        }
    }
    // Ψ(Δ^op(x))Θ = ΘΔ(x)
    let theta_sum = qr.theta.iter().fold(TensorElem::zero(2), |acc, t| &acc + t);
    for (name, x) in [("E", UqElem::e()), ("F", UqElem::f()), ("K", UqElem::k()), ("K^-1", UqElem::kinv())] {
        let d = x.coproduct();
        let gmin = d.terms().map(|(k, _)| k[0].grade()).min().unwrap_or(0);
        let lhs = &psi_at(&swap2(&d), 0, 1) * &theta_sum;
        let rhs = &theta_sum * &d;
        let diff = first_grade_part(&(&lhs - &rhs), order as i32 + gmin);
        rep.check(diff.is_zero(), || format!("intertwining for {name}: {diff}"));
    }
    // (Δ⊗id)Θ = Ψ_23(Θ_13)Θ_23 and (id⊗Δ)Θ = Ψ_12(Θ_13)Θ_12
    for i in 0..=order {
        let ti = &qr.theta[i as usize];
        let (mut r1, mut r2) = (TensorElem::zero(3), TensorElem::zero(3));
        for a in 0..=i {
            let t13 = qr.theta[a as usize].embed(&[0, 2], 3);
            let tb = &qr.theta[(i - a) as usize];
            r1.add_assign(&(&psi_at(&t13, 1, 2) * &tb.embed(&[1, 2], 3)));
            r2.add_assign(&(&psi_at(&t13, 0, 1) * &tb.embed(&[0, 1], 3)));
        }
        let l1 = ti.apply_coproduct(0);
        let l2 = ti.apply_coproduct(1);
        rep.check(l1 == r1, || format!("(Δ⊗id)Θ order {i}: {}", &l1 - &r1));
        rep.check(l2 == r2, || format!("(id⊗Δ)Θ order {i}: {}", &l2 - &r2));
    }
    rep
}

/// Every `Λ_A` commutes with `Δ^{(n-1)}(h)` for `h ∈ {E, F, K}`.
pub fn verify_centralizer(n: usize) -> Report {
    let mut rep = Report::new(format!("centralizer n={n}"));
    let hs = [("E", UqElem::e_tilde()), ("F", UqElem::f()), ("K", UqElem::k())];
    for a in LoopSet::all_nonempty(n as u8) {
        let l = match build_lambda(a, n) {
            Ok(l) => l,
            Err(e) => {
                rep.check(false, || format!("{a}: {e}"));
                continue;
            }
        };
        for (name, h) in &hs {
            let dh = diagonal(h, n);
            let c = &(&dh * &l) - &(&l * &dh);
            rep.check(c.is_zero(), || format!("[Δ({name}), Λ_{a}] = {c}"));
        }
    }
    rep
}

/// Commutator theorem and the two commuting statements for all admissible
/// pairs in `U^⊗n`. With the coproduct conventions used here the bracket is
/// `[Λ_B, Λ_A]_q = (q^{-2}−q²)Λ_{A△B} + (q−q^{-1})(Λ_{A∩B}Λ_{A∪B} + Λ_{A∖B}Λ_{B∖A})`.
pub fn verify_aw_commutators(n: usize) -> Report {
    let mut rep = Report::new(format!("aw commutators n={n}"));
    let lam = |a: LoopSet| build_lambda(a, n).expect("subset of 1..n");
    let q = RatFunc::q_pow(1);
    let qi = RatFunc::q_pow(-1);
    let c2: RatFunc = "q^-2 - q^2".parse().expect("literal");
    let c1: RatFunc = "q - q^-1".parse().expect("literal");
    for (a, b) in crate::skein::admissible_pairs(n as u8) {
        let (la, lb) = (lam(a), lam(b));
        let lhs = &(&lb * &la).scale(&q) - &(&la * &lb).scale(&qi);
        let mixed = &(&lam(a.intersection(&b)) * &lam(a.union(&b))) + &(&lam(a.difference(&b)) * &lam(b.difference(&a)));
        let rhs = &lam(a.symmetric_difference(&b)).scale(&c2) + &mixed.scale(&c1);
        let r = &lhs - &rhs;
        rep.check(r.is_zero(), || format!("[Λ_{b}, Λ_{a}]_q: residual with {} terms", r.len()));
    }
    for (a, b) in crate::skein::commuting_pairs(n as u8) {
        let (la, lb) = (lam(a), lam(b));
        let r = &(&la * &lb) - &(&lb * &la);
        rep.check(r.is_zero(), || format!("[Λ_{a}, Λ_{b}] = {r}"));
    }
    rep
}

/// `γ_n(Δ̄^{(k-1)}(Λ)` on `A) = Λ_A` for every nonempty `A ⊆ {1..n}`.
pub fn verify_unbraiding(n: usize) -> Report {
    let mut rep = Report::new(format!("unbraiding n={n}"));
    for a in LoopSet::all_nonempty(n as u8) {
        match (lambda_via_unbraiding(a, n), build_lambda(a, n)) {
            (Ok(x), Ok(y)) => rep.check(x == y, || format!("γ_{n} route differs for {a}: {}", &x - &y)),
            (x, y) => rep.check(false, || format!("{a}: {:?} {:?}", x.err(), y.err())),
        }
    }
    rep
}

/// Generators of the locally finite part used for sampling.
fn lf_generators() -> [UqElem; 4] {
    [UqElem::e(), &UqElem::f() * &UqElem::k(), UqElem::k(), UqElem::casimir()]
}

/// A product of at most `deg` locally finite generators.
fn random_lf(rng: &mut impl rand::Rng, deg: usize) -> UqElem {
    let gens = lf_generators();
    let len = rng.gen_range(0..=deg);
    (0..len).fold(UqElem::one(), |acc, _| &acc * &gens[rng.gen_range(0..gens.len())])
}

fn random_braided(rng: &mut impl rand::Rng, n: usize, deg: usize) -> TensorElem {
    let factors: Vec<UqElem> = (0..n).map(|_| random_lf(rng, deg)).collect();
    TensorElem::pure(&factors)
}

/// Sampled checks of the braided structure: `γ_n` is multiplicative and has
/// the stated left inverse, `Δ̄` is multiplicative for the braided product,
/// and `γ_n` intertwines the adjoint action with conjugation by `Δ^{(n-1)}`.
pub fn verify_braided_samples(samples: usize, seed: u64) -> Report {
    use rand::SeedableRng;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut rep = Report::new("braided samples");
    let b = DEFAULT_TRUNCATION;
    for s in 0..samples {
        let n = 2 + s % 2;
        let x = random_braided(&mut rng, n, 2);
        let y = random_braided(&mut rng, n, 2);
        let res = (|| -> Result<(bool, bool), UqError> {
            let gx = unbraid(&x, b)?;
            let gy = unbraid(&y, b)?;
            let lhs = unbraid(&braided_mul(&x, &y, b)?, b)?;
            Ok((lhs == &gx * &gy, unbraid_inverse(&gx, b)? == x))
        })();
        match res {
            Ok((mul, inv)) => {
                rep.check(mul, || format!("γ_{n}(x·y) ≠ γ(x)γ(y) for x = {x}, y = {y}"));
                rep.check(inv, || format!("left inverse fails on {x}"));
            }
            Err(e) => rep.check(false, || format!("{e} on {x}, {y}")),
        }
    }
    for _ in 0..samples.div_ceil(10) {
        let x = random_lf(&mut rng, 2);
        let y = random_lf(&mut rng, 2);
        let res = (|| -> Result<bool, UqError> {
            Ok(bar_coproduct(&(&x * &y), b)? == braided_mul(&bar_coproduct(&x, b)?, &bar_coproduct(&y, b)?, b)?)
        })();
        rep.check(res == Ok(true), || format!("Δ̄ not multiplicative on {x}, {y}: {res:?}"));
    }
    for n in [2, 3] {
        for _ in 0..3 {
            let x = random_braided(&mut rng, n, 2);
            for (name, h) in [("E", UqElem::e()), ("F", UqElem::f()), ("K", UqElem::k())] {
                let res = (|| -> Result<TensorElem, UqError> {
                    let lhs = unbraid(&adjoint_tensor(&h, &x), b)?;
                    let gx = unbraid(&x, b)?;
                    let mut rhs = TensorElem::zero(n);
                    for (k, c) in h.coproduct().terms() {
                        let h1 = UqElem::mono(k[0], c.clone());
                        let h2 = UqElem::mono(k[1], RatFunc::one()).antipode();
                        rhs.add_assign(&(&(&diagonal(&h1, n) * &gx) * &diagonal(&h2, n)));
                    }
                    Ok(&lhs - &rhs)
                })();
                rep.check(res.as_ref().is_ok_and(|r| r.is_zero()), || format!("γ_{n}({name} ⊳ {x}): {res:?}"));
            }
        }
    }
    rep
}

/// `Δ̄` on `K, E, KF, Λ` against their closed forms.
pub fn verify_bar_coproduct() -> Report {
    let mut rep = Report::new("braided coproduct");
    let b = DEFAULT_TRUNCATION;
    let r = |x: &str| -> RatFunc { x.parse().expect("static coefficient") };
    let (e, k, c) = (UqElem::e(), UqElem::k(), UqElem::casimir());
    let kf = &k * &UqElem::f();
    let qm2 = RatFunc::from(crate::coeff::q_minus_qinv().pow(2));
    let lk = (&c - &k.scale(&r("q^-1"))).scale(&r("q^-1"));
    let t = |a: &UqElem, b: &UqElem| TensorElem::pure(&[a.clone(), b.clone()]);
    let want_c = [
        t(&c, &c).scale(&r("q^-1")),
        t(&c, &k).scale(&r("-q^-2")),
        t(&k, &c).scale(&r("-q^-2")),
        t(&k, &k).scale(&r("q^-2*(q + q^-1)")),
        t(&e, &kf).scale(&qm2),
        t(&kf, &e).scale(&(&qm2 * &r("q^-2"))),
    ]
    .iter()
    .fold(TensorElem::zero(2), |acc, x| &acc + x);
    let cases = [
        ("K", k.clone(), &t(&k, &k) + &t(&kf, &e).scale(&(&r("q^-1") * &qm2))),
        ("E", e.clone(), &t(&e, &k) + &t(&lk, &e)),
        ("KF", kf.clone(), &t(&k, &kf) + &t(&kf, &(&c - &k.scale(&r("q^-1")))).scale(&r("q^-1"))),
        ("Λ", c.clone(), want_c),
    ];
    for (name, x, want) in cases {
        let got = bar_coproduct(&x, b);
        rep.check(got.as_ref() == Ok(&want), || format!("Δ̄({name}) = {got:?}"));
    }
    rep
}
