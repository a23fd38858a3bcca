//! The substitution `s_A ↦ −Λ_A` from the free algebra on loops into
//! `U_q(sl2)^⊗n`, used to check every relation of the presentation exactly.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::central::{CMono, CentralPoly, NCENTRAL};
use crate::coeff::RatFunc;
use crate::freealg::{GenKind, GeneratorTable, NCPoly, Word};
use crate::rewrite::RuleSystem;
use crate::skein::{LoopSet, Relation, RelationClass, RelationCorpus, THREE_POINT_SECTION};
use crate::tensor::{build_lambda, Key, TensorElem, TensorError};
use crate::Report;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("generator {0} has no image in U^⊗{1}")]
    NoImage(String, usize),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// How a relation of the skein side is read in `U^⊗n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `s_A ↦ −Λ_A`, coefficients as written.
    Literal,
    /// `s_A ↦ −Λ_A` with `q ↦ q^{-1}` on coefficients.
    Bar,
    /// `s_A ↦ −Λ_A` as an anti-homomorphism (words read right to left).
    Reverse,
}

impl Convention {
    pub fn apply(&self, p: &NCPoly) -> NCPoly {
        match self {
            Convention::Literal => p.clone(),
            Convention::Bar => p.map_coeffs(|c| c.bar()),
            Convention::Reverse => {
                let mut out = NCPoly::zero();
                for (w, c) in p.terms() {
                    out.add_term(w.iter().rev().copied().collect(), c);
                }
                out
            }
        }
    }
}

/// The reading under which the corpus holds.
pub const CANONICAL: Convention = Convention::Reverse;

/// Images of loops and words in `U^⊗n`, memoised by word prefix.
pub struct SkeinOracle {
    n: usize,
    convention: Convention,
    letters: HashMap<u8, TensorElem>,
    central: [Option<TensorElem>; NCENTRAL],
    words: HashMap<Word, TensorElem>,
    cmonos: HashMap<CMono, TensorElem>,
}

impl SkeinOracle {
    /// Simple loops only; extended generators are added by
    /// [`SkeinOracle::with_extended`].
    pub fn new(n: usize, convention: Convention) -> Result<Self, OracleError> {
        let table = GeneratorTable::sigma05();
        let neg = |a: LoopSet| -> Result<TensorElem, OracleError> { Ok(-&build_lambda(a, n)?) };
        let mut letters = HashMap::new();
        for (i, e) in table.entries().iter().enumerate() {
            if let GenKind::Simple(p) = &e.kind {
                if p.iter().all(|&x| x as usize <= n) {
                    letters.insert(i as u8, neg(LoopSet::new(p))?);
                }
            }
        }
        let mut central: [Option<TensorElem>; NCENTRAL] = Default::default();
        for (i, slot) in central.iter_mut().enumerate().take(n.min(4)) {
            *slot = Some(neg(LoopSet::new(&[i as u8 + 1]))?);
        }
        if n == 4 {
            central[4] = Some(neg(LoopSet::new(&[1, 2, 3, 4]))?);
        }
        Ok(Self { n, convention, letters, central, words: HashMap::new(), cmonos: HashMap::new() })
    }

    /// Adds the double-point and disjoint-pair generators, each defined by
    /// the generator-generating relation in which it first appears linearly.
    pub fn with_extended(n: usize, convention: Convention, corpus: &RelationCorpus) -> Result<Self, OracleError> {
        let mut o = Self::new(n, convention)?;
        for r in corpus.of_class(RelationClass::GeneratorGenerating) {
            let fresh: Vec<(u8, RatFunc)> = r
                .rhs
                .terms()
                .filter(|(w, _)| w.len() == 1 && !o.letters.contains_key(&w[0]))
                .filter_map(|(w, c)| c.as_scalar().map(|s| (w[0], s)))
                .collect();
            let [(g, c)] = fresh.as_slice() else { continue };
            let mut rest = r.rhs.clone();
            rest.add_term(vec![*g], &CentralPoly::scalar(-c));
            // Relations mentioning loops outside `1..n` define nothing here.
            let (Ok(l), Ok(x)) = (o.eval(&r.lhs), o.eval(&rest)) else { continue };
            let val = &l - &x;
            let c = if convention == Convention::Bar { c.bar() } else { c.clone() };
            let inv = c.recip().expect("nonzero coefficient");
            o.letters.insert(*g, val.scale(&inv));
        }
        Ok(o)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letter(&self, g: u8) -> Result<&TensorElem, OracleError> {
        self.letters
            .get(&g)
            .ok_or_else(|| OracleError::NoImage(GeneratorTable::sigma05().name(g).to_string(), self.n))
    }

    fn word(&mut self, w: &[u8]) -> Result<TensorElem, OracleError> {
        if w.is_empty() {
            return Ok(TensorElem::one(self.n));
        }
        if let Some(x) = self.words.get(w) {
            return Ok(x.clone());
        }
        let head = self.word(&w[..w.len() - 1])?;
        let x = &head * self.letter(w[w.len() - 1])?;
        self.words.insert(w.to_vec(), x.clone());
        Ok(x)
    }

    fn cmono(&mut self, m: &CMono) -> Result<TensorElem, OracleError> {
        if let Some(x) = self.cmonos.get(m) {
            return Ok(x.clone());
        }
        let mut x = TensorElem::one(self.n);
        for (i, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let c = self.central[i]
                .as_ref()
                .ok_or_else(|| OracleError::NoImage(crate::freealg::central_name(i).to_string(), self.n))?;
            for _ in 0..e {
                x = &x * c;
            }
        }
        self.cmonos.insert(*m, x.clone());
        Ok(x)
    }

    /// Image of a polynomial.
    pub fn eval(&mut self, p: &NCPoly) -> Result<TensorElem, OracleError> {
        let mut acc = TensorElem::zero(self.n);
        for (m, w, c) in self.convention.apply(p).monomials() {
            let x = &self.cmono(&m)? * &self.word(&w)?;
            acc.add_assign(&x.scale(&c));
        }
        Ok(acc)
    }

    /// `image(lhs) − image(rhs)`.
    pub fn residual(&mut self, r: &Relation) -> Result<TensorElem, OracleError> {
        self.eval(&r.difference())
    }

    /// Solves `residual = Σ x_j · image(candidate_j)` exactly; returns the
    /// coefficients when the residual lies in the span and they are unique.
    pub fn fit(
        &mut self,
        residual: &TensorElem,
        candidates: &[(CMono, Word)],
    ) -> Result<Option<Vec<RatFunc>>, OracleError> {
        let mut cols = Vec::new();
        for (m, w) in candidates {
            let p = NCPoly::term(w.clone(), CentralPoly::term(*m, RatFunc::one()));
            cols.push(self.eval(&p)?);
        }
        let (sol, rank) = solve_in_span(residual, &cols);
        let sol = sol.filter(|_| rank == cols.len());
        Ok(match self.convention {
            Convention::Bar => sol.map(|v| v.iter().map(|x| x.bar()).collect()),
            _ => sol,
        })
    }
}

type Row = HashMap<Key, RatFunc>;

/// Gaussian elimination with columns as sparse vectors over the tensor basis.
/// Also returns the rank of the columns; the solution is unique iff the rank
/// equals the number of columns.
fn solve_in_span(target: &TensorElem, cols: &[TensorElem]) -> (Option<Vec<RatFunc>>, usize) {
    let to_row = |x: &TensorElem| -> Row { x.terms().map(|(k, c)| (k.clone(), c.clone())).collect() };
    let k = cols.len();
    // Each reduced column carries its combination of original columns.
    let mut basis: Vec<(Key, Row, Vec<RatFunc>)> = Vec::new();
    let reduce = |mut v: Row, mut comb: Vec<RatFunc>, basis: &[(Key, Row, Vec<RatFunc>)]| {
        for (pk, pv, pc) in basis {
            if let Some(c) = v.get(pk).cloned() {
                for (key, x) in pv {
                    let e = v.entry(key.clone()).or_insert_with(RatFunc::zero);
                    *e = &*e - &(&c * x);
                }
                v.retain(|_, x| !x.is_zero());
                for (a, b) in comb.iter_mut().zip(pc) {
                    *a = &*a - &(&c * b);
                }
            }
        }
        (v, comb)
    };
    for (j, col) in cols.iter().enumerate() {
        let mut comb = vec![RatFunc::zero(); k];
        comb[j] = RatFunc::one();
        let (v, comb) = reduce(to_row(col), comb, &basis);
        let Some(pk) = v.keys().min().cloned() else { continue };
        let inv = v[&pk].recip().expect("nonzero pivot");
        let v: Row = v.into_iter().map(|(key, x)| (key, &x * &inv)).collect();
        let comb: Vec<RatFunc> = comb.iter().map(|x| x * &inv).collect();
        for (_, bv, bc) in basis.iter_mut() {
            if let Some(c) = bv.get(&pk).cloned() {
                for (key, x) in &v {
                    let e = bv.entry(key.clone()).or_insert_with(RatFunc::zero);
                    *e = &*e - &(&c * x);
                }
                bv.retain(|_, x| !x.is_zero());
                for (a, b) in bc.iter_mut().zip(&comb) {
                    *a = &*a - &(&c * b);
                }
            }
        }
        basis.push((pk, v, comb));
    }
    let (rest, comb) = reduce(to_row(target), vec![RatFunc::zero(); k], &basis);
    (rest.is_empty().then(|| comb.iter().map(|x| -x).collect()), basis.len())
}

/// Checks every corpus relation under `s_A ↦ −Λ_A`: the five-punctured
/// relations in `U^⊗4`, the four-punctured ones in `U^⊗3`.
pub fn verify_iso_corpus(corpus: &RelationCorpus) -> Report {
    let mut rep = Report::new("iso corpus");
    let run = |n: usize, rels: Vec<&Relation>, rep: &mut Report| match SkeinOracle::with_extended(n, CANONICAL, corpus) {
        Ok(mut o) => {
            for r in rels {
                match o.residual(r) {
                    Ok(res) => rep.check(res.is_zero(), || format!("{} [{}]: residual {} terms", r.name, r.section, res.len())),
                    Err(e) => rep.check(false, || format!("{}: {e}", r.name)),
                }
            }
        }
        Err(e) => rep.check(false, || format!("oracle n={n}: {e}")),
    };
    let (three, four): (Vec<&Relation>, Vec<&Relation>) =
        corpus.relations.iter().partition(|r| r.section == THREE_POINT_SECTION);
    run(4, four, &mut rep);
    run(3, three, &mut rep);
    rep
}

/// Every rule of `sys` (or the first `limit`) under `s_A ↦ −Λ_A` in `U^⊗4`,
/// split across threads.
pub fn verify_iso_rules(sys: &RuleSystem, corpus: &RelationCorpus, limit: Option<usize>) -> Report {
    let mut rep = Report::new("iso rules");
    let rules = &sys.rules()[..limit.unwrap_or(usize::MAX).min(sys.len())];
    let chunk = rules.len().div_ceil(rayon::current_num_threads().max(1)).max(1);
    let table = sys.table();
    let results: Vec<Vec<(bool, String)>> = rules
        .par_chunks(chunk)
        .map(|rs| match SkeinOracle::with_extended(4, CANONICAL, corpus) {
            Ok(mut o) => rs
                .iter()
                .map(|r| match o.eval(&r.relation()) {
                    Ok(res) => (res.is_zero(), format!("rule {}: residual {} terms", table.word_name(&r.lhs), res.len())),
                    Err(e) => (false, format!("rule {}: {e}", table.word_name(&r.lhs))),
                })
                .collect(),
            Err(e) => vec![(false, format!("oracle: {e}"))],
        })
        .collect();
    for (ok, w) in results.into_iter().flatten() {
        rep.check(ok, || w);
    }
    rep
}
