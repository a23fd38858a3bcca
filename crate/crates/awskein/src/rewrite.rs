//! Pairwise reduction systems over the central ring: the three-tier monomial
//! order, normal forms, overlap ambiguities, confluence and compatibility
//! checks, and the completion procedure that grows a seed into a confluent
//! system.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::central::{mono_degree, CMono, CentralPoly, CentralTermJson, NCENTRAL};
use crate::coeff::RatFunc;
use crate::freealg::{Gen, GeneratorTable, NCPoly, Word};
use crate::Report;

/// Default cap on rule applications per normal-form computation.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    SeedAppendix,
    GeneratorGenerating,
    Propagated,
    CommutatorClosure,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Origin::SeedAppendix => "seed-appendix",
            Origin::GeneratorGenerating => "generator-generating",
            Origin::Propagated => "propagated",
            Origin::CommutatorClosure => "commutator-closure",
        };
        f.write_str(s)
    }
}

/// `lhs ↦ rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: NCPoly,
    pub origin: Origin,
}

impl Rule {
    pub fn new(lhs: Word, rhs: NCPoly, origin: Origin) -> Self {
        Self { lhs, rhs, origin }
    }

    /// `lhs − rhs`, the relation the rule encodes.
    pub fn relation(&self) -> NCPoly {
        &NCPoly::word(self.lhs.clone()) - &self.rhs
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("step budget {budget} exceeded while reducing {witness}")]
    StepBudgetExceeded { budget: u64, witness: String },
    #[error("rule with left-hand side {0} is not pairwise")]
    NonPairwiseRule(String),
    #[error("duplicate left-hand side {0}")]
    DuplicateLhs(String),
    #[error("derived rule {0} has a right-hand monomial not below its left-hand side")]
    DerivedRuleIncomparable(String),
    #[error("no mechanism resolves {0}")]
    NoProgress(String),
    #[error("rule file: {0}")]
    Format(String),
}

// ---------------------------------------------------------------------------
// Order

/// Outcome of comparing two expressions under the partial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    Less,
    Greater,
    Incomparable,
    Equal,
}

/// The data the order looks at.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderKey {
    /// `rho[n]` = total inversions over the words of length `n`.
    pub rho: Vec<u64>,
    pub total_degree: u32,
    /// Most distinct letters among the monomials of top total degree.
    pub distinct: usize,
    /// Sum of nearness over the monomials of top total degree.
    pub nearness: u64,
}

/// Pairs `k < l` with `w_k > w_l` in the table order.
pub fn inversions(w: &[Gen]) -> u64 {
    let mut n = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                n += 1;
            }
        }
    }
    n
}

/// `Σ_{i,j} |group(w_i) − group(w_j)|` over ordered pairs of positions.
pub fn nearness(w: &[Gen], table: &GeneratorTable) -> u64 {
    let g: Vec<i64> = w.iter().map(|&x| table.group(x) as i64).collect();
    let mut s = 0;
    for a in &g {
        for b in &g {
            s += (a - b).unsigned_abs();
        }
    }
    s
}

fn distinct_letters(w: &[Gen]) -> usize {
    let mut v = w.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

impl OrderKey {
    pub fn of(x: &NCPoly, table: &GeneratorTable) -> Self {
        let monos: Vec<(CMono, &Word)> =
            x.terms().flat_map(|(w, c)| c.terms().map(move |(m, _)| (*m, w))).collect();
        Self::from_monomials(monos.iter().map(|(m, w)| (m, w.as_slice())), table)
    }

    pub fn of_monomial(m: &CMono, w: &[Gen], table: &GeneratorTable) -> Self {
        Self::from_monomials(std::iter::once((m, w)), table)
    }

    fn from_monomials<'a>(it: impl Iterator<Item = (&'a CMono, &'a [Gen])> + Clone, table: &GeneratorTable) -> Self {
        let mut rho = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (_, w) in it.clone() {
            // ρ_n sums over distinct words, not over central multiples
            if !seen.insert(w.to_vec()) {
                continue;
            }
            let inv = inversions(w);
            if rho.len() <= w.len() {
                rho.resize(w.len() + 1, 0);
            }
            rho[w.len()] += inv;
        }
        while rho.last() == Some(&0) {
            rho.pop();
        }
        let deg = |m: &CMono, w: &[Gen]| mono_degree(m) + table.word_degree(w);
        let total_degree = it.clone().map(|(m, w)| deg(m, w)).max().unwrap_or(0);
        let top = it.filter(|(m, w)| deg(m, w) == total_degree);
        let mut distinct = 0;
        let mut near = 0;
        for (_, w) in top {
            distinct = distinct.max(distinct_letters(w));
            near += nearness(w, table);
        }
        Self { rho, total_degree, distinct, nearness: near }
    }

    /// Largest length carrying an inversion, 0 if there is none.
    pub fn reduced_degree(&self) -> usize {
        self.rho.len().saturating_sub(1)
    }

    /// Chained comparison; `Equal` means the keys cannot separate the two.
    pub fn compare(&self, o: &OrderKey) -> Ordering {
        let rd = self.reduced_degree().cmp(&o.reduced_degree());
        if rd != Ordering::Equal {
            return rd;
        }
        let n = self.reduced_degree();
        if n > 0 {
            let r = self.rho[n].cmp(&o.rho[n]);
            if r != Ordering::Equal {
                return r;
            }
        }
        self.total_degree
            .cmp(&o.total_degree)
            .then(self.distinct.cmp(&o.distinct))
            .then(o.nearness.cmp(&self.nearness))
    }
}

fn to_comparison(o: Ordering) -> Comparison {
    match o {
        Ordering::Less => Comparison::Less,
        Ordering::Greater => Comparison::Greater,
        Ordering::Equal => Comparison::Incomparable,
    }
}

/// The partial order on expressions.
pub fn compare(a: &NCPoly, b: &NCPoly, table: &GeneratorTable) -> Comparison {
    if a == b {
        return Comparison::Equal;
    }
    to_comparison(OrderKey::of(a, table).compare(&OrderKey::of(b, table)))
}

fn compare_monomials(a: (&CMono, &[Gen]), b: (&CMono, &[Gen]), table: &GeneratorTable) -> Comparison {
    if a == b {
        return Comparison::Equal;
    }
    to_comparison(OrderKey::of_monomial(a.0, a.1, table).compare(&OrderKey::of_monomial(b.0, b.1, table)))
}

// ---------------------------------------------------------------------------
// Systems and normal forms

#[derive(Debug, Clone)]
pub struct RuleSystem {
    rules: Vec<Rule>,
    index: HashMap<(Gen, Gen), usize>,
    table: GeneratorTable,
}

impl RuleSystem {
    pub fn new(rules: Vec<Rule>, table: GeneratorTable) -> Result<Self, RewriteError> {
        let mut index = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            if r.lhs.len() != 2 {
                return Err(RewriteError::NonPairwiseRule(table.word_name(&r.lhs)));
            }
            if index.insert((r.lhs[0], r.lhs[1]), i).is_some() {
                return Err(RewriteError::DuplicateLhs(table.word_name(&r.lhs)));
            }
        }
        Ok(Self { rules, index, table })
    }

    pub fn empty(table: GeneratorTable) -> Self {
        Self { rules: Vec::new(), index: HashMap::new(), table }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn table(&self) -> &GeneratorTable {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rule_for(&self, a: Gen, b: Gen) -> Option<&Rule> {
        self.index.get(&(a, b)).map(|&i| &self.rules[i])
    }

    pub fn is_reducible(&self, w: &[Gen]) -> bool {
        w.windows(2).any(|p| self.index.contains_key(&(p[0], p[1])))
    }

    fn push(&mut self, r: Rule) {
        self.index.insert((r.lhs[0], r.lhs[1]), self.rules.len());
        self.rules.push(r);
    }
}

/// Where to apply the next reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// Memoising reducer; the cache is only valid for the system it was built on.
pub struct Reducer<'a> {
    sys: &'a RuleSystem,
    strategy: Strategy,
    budget: u64,
    steps: u64,
    cache: HashMap<Word, NCPoly>,
}

impl<'a> Reducer<'a> {
    pub fn new(sys: &'a RuleSystem, strategy: Strategy) -> Self {
        Self { sys, strategy, budget: DEFAULT_BUDGET, steps: 0, cache: HashMap::new() }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    fn with_cache(mut self, cache: HashMap<Word, NCPoly>) -> Self {
        self.cache = cache;
        self
    }

    fn into_cache(self) -> HashMap<Word, NCPoly> {
        self.cache
    }

    /// Rule applications performed so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn find(&self, w: &[Gen]) -> Option<usize> {
        let hit = |i: &usize| self.sys.index.contains_key(&(w[*i], w[*i + 1]));
        let n = w.len().saturating_sub(1);
        match self.strategy {
            Strategy::Leftmost => (0..n).find(hit),
            Strategy::Rightmost => (0..n).rev().find(hit),
        }
    }

    pub fn reduce_word(&mut self, w: &[Gen]) -> Result<NCPoly, RewriteError> {
        if let Some(r) = self.cache.get(w) {
            return Ok(r.clone());
        }
        let out = match self.find(w) {
            None => NCPoly::word(w.to_vec()),
            Some(i) => {
                self.steps += 1;
                if self.steps > self.budget {
                    return Err(RewriteError::StepBudgetExceeded {
                        budget: self.budget,
                        witness: self.sys.table.word_name(w),
                    });
                }
                let rule = &self.sys.rules[self.sys.index[&(w[i], w[i + 1])]];
                let mut acc = NCPoly::zero();
                for (u, c) in rule.rhs.terms() {
                    let mut v = w[..i].to_vec();
                    v.extend_from_slice(u);
                    v.extend_from_slice(&w[i + 2..]);
                    let r = self.reduce_word(&v)?;
                    acc.add_assign(&r.scale_central(c));
                }
                acc
            }
        };
        self.cache.insert(w.to_vec(), out.clone());
        Ok(out)
    }

    pub fn reduce(&mut self, x: &NCPoly) -> Result<NCPoly, RewriteError> {
        let mut acc = NCPoly::zero();
        for (w, c) in x.terms() {
            if self.sys.is_reducible(w) {
                acc.add_assign(&self.reduce_word(w)?.scale_central(c));
            } else {
                acc.add_term(w.clone(), c);
            }
        }
        Ok(acc)
    }
}

/// Normal form with the deterministic leftmost strategy.
pub fn normal_form(x: &NCPoly, sys: &RuleSystem) -> Result<NCPoly, RewriteError> {
    Reducer::new(sys, Strategy::Leftmost).reduce(x)
}

pub fn normal_form_with(x: &NCPoly, sys: &RuleSystem, strategy: Strategy, budget: u64) -> Result<NCPoly, RewriteError> {
    Reducer::new(sys, strategy).with_budget(budget).reduce(x)
}

/// A random polynomial of total degree at most `max_degree`: up to three
/// words with small q-monomial coefficients, some times a central loop.
pub fn random_poly(rng: &mut impl Rng, table: &GeneratorTable, max_degree: u32) -> NCPoly {
    let mut out = NCPoly::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut left = rng.gen_range(0..=max_degree);
        let mut w = Word::new();
        for _ in 0..8 {
            let g = rng.gen_range(0..table.len()) as Gen;
            if table.degree(g) <= left {
                left -= table.degree(g);
                w.push(g);
            }
        }
        let c = &RatFunc::q_pow(rng.gen_range(-3..=3)) * &RatFunc::from_int(rng.gen_range(1..=4));
        let mut cp = CentralPoly::scalar(c);
        if left > 0 && rng.gen_bool(0.5) {
            cp = &cp * &CentralPoly::gen(rng.gen_range(0..4));
        }
        out.add_term(w, &cp);
    }
    out
}

/// Leftmost and rightmost reduction agree on `samples` random inputs of
/// degree at most 8.
pub fn check_strategy_independence(sys: &RuleSystem, samples: usize, seed: u64) -> Report {
    let mut rep = Report::new("strategy independence");
    let mut rng = StdRng::seed_from_u64(seed);
    let inputs: Vec<NCPoly> = (0..samples).map(|_| random_poly(&mut rng, &sys.table, 8)).collect();
    let results: Vec<(bool, String)> = inputs
        .par_iter()
        .map(|x| {
            let l = normal_form_with(x, sys, Strategy::Leftmost, DEFAULT_BUDGET);
            let r = normal_form_with(x, sys, Strategy::Rightmost, DEFAULT_BUDGET);
            (l.is_ok() && l == r, format!("{}: {l:?} vs {r:?}", x.display(&sys.table)))
        })
        .collect();
    for (ok, w) in results {
        rep.check(ok, || w);
    }
    rep
}

// ---------------------------------------------------------------------------
// Ambiguities

/// Overlap `abc` with `ab = lhs(first)` and `bc = lhs(second)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ambiguity {
    pub first: usize,
    pub second: usize,
    pub word: Word,
}

pub fn enumerate_ambiguities(sys: &RuleSystem) -> Result<Vec<Ambiguity>, RewriteError> {
    if let Some(r) = sys.rules.iter().find(|r| r.lhs.len() != 2) {
        return Err(RewriteError::NonPairwiseRule(sys.table.word_name(&r.lhs)));
    }
    let mut by_first: HashMap<Gen, Vec<usize>> = HashMap::new();
    for (i, r) in sys.rules.iter().enumerate() {
        by_first.entry(r.lhs[0]).or_default().push(i);
    }
    let mut out = Vec::new();
    for (i, r) in sys.rules.iter().enumerate() {
        for &j in by_first.get(&r.lhs[1]).into_iter().flatten() {
            out.push(Ambiguity { first: i, second: j, word: vec![r.lhs[0], r.lhs[1], sys.rules[j].lhs[1]] });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmbiguityFailure {
    pub word: String,
    pub via_first: String,
    pub via_second: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfluenceReport {
    pub rules: usize,
    pub ambiguities: usize,
    pub resolved: usize,
    pub failures: Vec<AmbiguityFailure>,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.resolved == self.ambiguities
    }
}

/// Both one-step reductions of an overlap, each carried to normal form.
fn resolve(amb: &Ambiguity, sys: &RuleSystem, red: &mut Reducer) -> Result<(NCPoly, NCPoly), RewriteError> {
    let c = NCPoly::letter(amb.word[2]);
    let a = NCPoly::letter(amb.word[0]);
    let x = red.reduce(&(&sys.rules[amb.first].rhs * &c))?;
    let y = red.reduce(&(&a * &sys.rules[amb.second].rhs))?;
    Ok((x, y))
}

pub fn check_confluence(sys: &RuleSystem) -> Result<ConfluenceReport, RewriteError> {
    let ambs = enumerate_ambiguities(sys)?;
    let chunk = ambs.len().div_ceil(rayon::current_num_threads().max(1) * 4).max(1);
    let results: Vec<Result<Vec<Option<AmbiguityFailure>>, RewriteError>> = ambs
        .par_chunks(chunk)
        .map(|part| {
            let mut red = Reducer::new(sys, Strategy::Leftmost);
            part.iter()
                .map(|amb| {
                    let (x, y) = resolve(amb, sys, &mut red)?;
                    Ok((x != y).then(|| AmbiguityFailure {
                        word: sys.table.word_name(&amb.word),
                        via_first: x.display(&sys.table),
                        via_second: y.display(&sys.table),
                    }))
                })
                .collect()
        })
        .collect();
    let mut failures = Vec::new();
    let mut resolved = 0;
    for r in results {
        for f in r? {
            match f {
                Some(f) => failures.push(f),
                None => resolved += 1,
            }
        }
    }
    Ok(ConfluenceReport { rules: sys.len(), ambiguities: ambs.len(), resolved, failures })
}

/// Every right-hand monomial strictly below its left-hand side.
pub fn check_compatibility(sys: &RuleSystem) -> Report {
    let mut rep = Report::new("order compatibility");
    let t = &sys.table;
    for r in &sys.rules {
        let zero = [0u8; NCENTRAL];
        let bad: Vec<String> = r
            .rhs
            .monomials()
            .into_iter()
            .filter(|(m, w, _)| compare_monomials((m, w), (&zero, &r.lhs), t) != Comparison::Less)
            .map(|(m, w, _)| NCPoly::term(w, CentralPoly::term(m, RatFunc::one())).display(t))
            .collect();
        rep.check(bad.is_empty(), || format!("{} ↦ …: not below: {}", t.word_name(&r.lhs), bad.join(", ")));
    }
    rep
}

// ---------------------------------------------------------------------------
// Completion

/// Progress counters of a completion run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CompletionStats {
    pub relations_processed: usize,
    pub rules_from_seed: usize,
    pub propagated: usize,
    pub commutator_closure: usize,
}

/// Index of the unique top monomial of `x`, if one dominates all others.
/// Among several maximal monomials the one with the largest letter wins.
fn leading(x: &NCPoly, table: &GeneratorTable) -> Option<(CMono, Word, RatFunc, bool)> {
    let monos = x.monomials();
    let keys: Vec<OrderKey> = monos.iter().map(|(m, w, _)| OrderKey::of_monomial(m, w, table)).collect();
    let maximal: Vec<usize> = (0..monos.len())
        .filter(|&i| !(0..monos.len()).any(|j| keys[j].compare(&keys[i]) == Ordering::Greater))
        .collect();
    let pick = *maximal.iter().max_by(|&&i, &&j| {
        let (wi, wj) = (&monos[i].1, &monos[j].1);
        let pure = |k: usize| monos[k].1.len() == 2 && monos[k].0 == [0; NCENTRAL];
        pure(i)
            .cmp(&pure(j))
            .then(wi.iter().max().cmp(&wj.iter().max()))
            .then(wi.cmp(wj))
    })?;
    let strict = maximal.len() == 1;
    let (m, w, c) = monos[pick].clone();
    Some((m, w, c, strict))
}

/// Knuth–Bendix style completion for pairwise systems.
///
/// The generator-generating rules are oriented first, then each seed
/// relation is reduced and oriented by its top monomial. Every new rule
/// triggers its overlaps with the existing rules; for an overlap of a
/// generator-generating rule `ab ↦ r_ab` with `bc ↦ r_bc` the identity
/// `r_ab·c = a·r_bc` yields a rule for `m·c` with `m` the new generator
/// (propagation), and overlaps whose difference leads with a descending
/// product `b·a` of new generators yield the commutator-closure rules.
/// Relations whose top monomial is not a bare pair are parked and retried
/// whenever the system grows.
pub fn complete_system(
    seed: &[NCPoly],
    gen_gen: &[Rule],
    table: &GeneratorTable,
) -> Result<(RuleSystem, CompletionStats), RewriteError> {
    let mut sys = RuleSystem::empty(table.clone());
    let mut stats = CompletionStats::default();
    let mut queue: VecDeque<(NCPoly, Origin)> = VecDeque::new();
    for r in gen_gen {
        queue.push_back((r.relation(), Origin::GeneratorGenerating));
    }
    for s in seed {
        queue.push_back((s.clone(), Origin::SeedAppendix));
    }
    let mut parked: Vec<(NCPoly, Origin)> = Vec::new();
    // normal forms of words stay valid until the next rule is added
    let mut cache = HashMap::new();
    loop {
        while let Some((rel, origin)) = queue.pop_front() {
            stats.relations_processed += 1;
            let mut reducer = Reducer::new(&sys, Strategy::Leftmost).with_cache(std::mem::take(&mut cache));
            let red = reducer.reduce(&rel)?;
            cache = reducer.into_cache();
            if red.is_zero() {
                continue;
            }
            let Some((m, w, c, strict)) = leading(&red, table) else { continue };
            if w.len() != 2 || m != [0; NCENTRAL] || !strict {
                parked.push((red, origin));
                continue;
            }
            let inv = c.recip().map_err(|e| RewriteError::Format(e.to_string()))?;
            let mut rhs = red.scale(&inv);
            rhs.add_term(w.clone(), &CentralPoly::scalar(-RatFunc::one()));
            let rhs = rhs.scale(&-RatFunc::one());
            let origin = match origin {
                Origin::GeneratorGenerating | Origin::SeedAppendix => {
                    stats.rules_from_seed += 1;
                    origin
                }
                _ if w[0] > w[1] => {
                    stats.commutator_closure += 1;
                    Origin::CommutatorClosure
                }
                _ => {
                    stats.propagated += 1;
                    Origin::Propagated
                }
            };
            let id = sys.rules.len();
            sys.push(Rule::new(w, rhs, origin));
            cache.clear();
            // overlaps of the new rule with everything present, itself included
            let (a, b) = (sys.rules[id].lhs[0], sys.rules[id].lhs[1]);
            let mut ambs = Vec::new();
            for (j, r) in sys.rules.iter().enumerate() {
                if r.lhs[0] == b {
                    ambs.push(Ambiguity { first: id, second: j, word: vec![a, b, r.lhs[1]] });
                }
                if r.lhs[1] == a && j != id {
                    ambs.push(Ambiguity { first: j, second: id, word: vec![r.lhs[0], a, b] });
                }
            }
            for amb in ambs {
                let c = NCPoly::letter(amb.word[2]);
                let a = NCPoly::letter(amb.word[0]);
                let diff = &(&sys.rules[amb.first].rhs * &c) - &(&a * &sys.rules[amb.second].rhs);
                queue.push_back((diff, Origin::Propagated));
            }
            if !parked.is_empty() {
                queue.extend(parked.drain(..));
            }
        }
        if parked.is_empty() {
            break;
        }
        // a full pass produced nothing new for the parked relations
        let before = parked.len();
        let mut still = Vec::new();
        for (rel, o) in parked.drain(..) {
            let red = normal_form(&rel, &sys)?;
            if !red.is_zero() {
                still.push((red, o));
            }
        }
        if still.is_empty() {
            break;
        }
        if still.len() == before {
            let (rel, _) = &still[0];
            return Err(match leading(rel, table) {
                Some((m, w, _, false)) if w.len() == 2 && m == [0; NCENTRAL] => {
                    RewriteError::DerivedRuleIncomparable(format!("{} in {}", table.word_name(&w), rel.display(table)))
                }
                _ => RewriteError::NoProgress(rel.display(table)),
            });
        }
        queue.extend(still);
    }
    interreduce(&mut sys)?;
    Ok((sys, stats))
}

/// Brings every right-hand side to normal form.
pub fn interreduce(sys: &mut RuleSystem) -> Result<(), RewriteError> {
    let reduced: Vec<NCPoly> = {
        let mut red = Reducer::new(sys, Strategy::Leftmost);
        sys.rules.iter().map(|r| red.reduce(&r.rhs)).collect::<Result<_, _>>()?
    };
    for (r, rhs) in sys.rules.iter_mut().zip(reduced) {
        r.rhs = rhs;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Irreducible words

/// Number of irreducible words of each degree `0..=max_degree`.
pub fn irreducible_monomials(sys: &RuleSystem, max_degree: u32) -> Vec<u64> {
    let t = &sys.table;
    let n = t.len() as Gen;
    let maxd = max_degree as usize;
    // count[d][g] = irreducible words of degree d ending in letter g
    let mut count = vec![vec![0u64; n as usize]; maxd + 1];
    let mut out = vec![0u64; maxd + 1];
    out[0] = 1;
    for d in 1..=maxd {
        for g in 0..n {
            let dg = t.degree(g) as usize;
            if dg == 0 || dg > d {
                continue;
            }
            let mut c = if dg == d { 1 } else { 0 };
            if d > dg {
                for h in 0..n {
                    if sys.rule_for(h, g).is_none() {
                        c += count[d - dg][h as usize];
                    }
                }
            }
            count[d][g as usize] = c;
            out[d] += c;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RhsTermJson {
    pub coeff: Vec<CentralTermJson>,
    pub word: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleJson {
    pub lhs: Vec<String>,
    pub rhs: Vec<RhsTermJson>,
    pub origin: Origin,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleFile {
    pub version: u32,
    pub rules: Vec<RuleJson>,
}

pub const RULE_FILE_VERSION: u32 = 1;

fn names(w: &[Gen], t: &GeneratorTable) -> Vec<String> {
    w.iter().map(|&g| t.name(g).to_string()).collect()
}

fn letters(ns: &[String], t: &GeneratorTable) -> Result<Word, RewriteError> {
    ns.iter()
        .map(|n| t.by_name(n).ok_or_else(|| RewriteError::Format(format!("unknown generator {n}"))))
        .collect()
}

pub fn export_rules(sys: &RuleSystem) -> RuleFile {
    let t = &sys.table;
    let rules = sys
        .rules
        .iter()
        .map(|r| RuleJson {
            lhs: names(&r.lhs, t),
            rhs: r.rhs.terms().map(|(w, c)| RhsTermJson { coeff: c.to_json(), word: names(w, t) }).collect(),
            origin: r.origin,
        })
        .collect();
    RuleFile { version: RULE_FILE_VERSION, rules }
}

pub fn import_rules(file: &RuleFile, table: &GeneratorTable) -> Result<RuleSystem, RewriteError> {
    if file.version != RULE_FILE_VERSION {
        return Err(RewriteError::Format(format!("unsupported version {}", file.version)));
    }
    let mut rules = Vec::new();
    for r in &file.rules {
        let mut rhs = NCPoly::zero();
        for term in &r.rhs {
            let c = CentralPoly::from_json(&term.coeff).map_err(|e| RewriteError::Format(e.to_string()))?;
            rhs.add_term(letters(&term.word, table)?, &c);
        }
        rules.push(Rule::new(letters(&r.lhs, table)?, rhs, r.origin));
    }
    RuleSystem::new(rules, table.clone())
}

pub fn rules_to_json(sys: &RuleSystem) -> String {
    serde_json::to_string_pretty(&export_rules(sys)).expect("rule file serialises")
}

pub fn rules_from_json(text: &str, table: &GeneratorTable) -> Result<RuleSystem, RewriteError> {
    let file: RuleFile = serde_json::from_str(text).map_err(|e| RewriteError::Format(e.to_string()))?;
    import_rules(&file, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::LaurentPoly;
    use crate::freealg::{g, GenEntry, GenKind, Group};
    use crate::skein::golden_system;
    use proptest::prelude::{prop, prop_assert, prop_assert_eq, proptest, ProptestConfig};
    use proptest::strategy::Strategy as _;

    fn sb() -> &'static GeneratorTable {
        GeneratorTable::sigma05()
    }

    fn w(names: &[&str]) -> NCPoly {
        NCPoly::word(names.iter().map(|n| g(n)).collect())
    }

    fn p(text: &str) -> NCPoly {
        NCPoly::parse(text).unwrap()
    }

    /// Letters `b < a`, both of degree 1.
    fn toy_table() -> GeneratorTable {
        let e = |n: &str| GenEntry::new(n, Group::I, GenKind::Simple(vec![1]));
        GeneratorTable::from_entries(vec![e("b"), e("a")])
    }

    fn toy() -> RuleSystem {
        let (b, a) = (0, 1);
        RuleSystem::new(
            vec![
                Rule::new(vec![a, b], NCPoly::word(vec![b, a]), Origin::SeedAppendix),
                Rule::new(vec![b, a], NCPoly::word(vec![a]), Origin::SeedAppendix),
            ],
            toy_table(),
        )
        .unwrap()
    }

    #[test]
    fn order_examples() {
        assert_eq!(compare(&w(&["S12", "S23"]), &w(&["S23", "S12"]), sb()), Comparison::Less);
        assert_eq!(compare(&w(&["D123"]), &w(&["S12", "S23"]), sb()), Comparison::Less);
        assert_eq!(compare(&w(&["S23", "S12"]), &w(&["S23", "S12"]), sb()), Comparison::Equal);
        // total degree counts the central part
        assert_eq!(compare(&p("S1234*S13"), &p("S12*S14"), sb()), Comparison::Greater);
        // same keys, different words
        assert_eq!(compare(&w(&["S12"]), &w(&["S23"]), sb()), Comparison::Incomparable);
    }

    #[test]
    fn order_key_fields() {
        let k = OrderKey::of(&w(&["S24", "S13", "S12"]), sb());
        assert_eq!(k.rho, vec![0, 0, 0, 3]);
        assert_eq!(k.reduced_degree(), 3);
        assert_eq!(k.total_degree, 6);
        assert_eq!(k.distinct, 3);
        // groups IV, IV, I: 2·(0 + 3 + 3)
        assert_eq!(k.nearness, 12);
        assert_eq!(inversions(&[g("S12"), g("S12")]), 0);
    }

    #[test]
    fn toy_system_from_the_worked_example() {
        let sys = toy();
        let (b, a) = (0, 1);
        let aba = NCPoly::word(vec![a, b, a]);
        assert_eq!(normal_form(&aba, &sys).unwrap(), NCPoly::word(vec![a, a]));
        let ambs = enumerate_ambiguities(&sys).unwrap();
        assert!(ambs.iter().any(|x| x.word == vec![a, b, a]));
        let rep = check_confluence(&sys).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert!(check_compatibility(&sys).passed());
    }

    #[test]
    fn ambiguity_enumeration() {
        let rules = vec![
            Rule::new(vec![g("S23"), g("S12")], NCPoly::zero(), Origin::SeedAppendix),
            Rule::new(vec![g("S12"), g("S13")], NCPoly::zero(), Origin::SeedAppendix),
        ];
        let sys = RuleSystem::new(rules, sb().clone()).unwrap();
        let ambs = enumerate_ambiguities(&sys).unwrap();
        assert_eq!(ambs, vec![Ambiguity { first: 0, second: 1, word: vec![g("S23"), g("S12"), g("S13")] }]);

        let disjoint = vec![
            Rule::new(vec![g("S23"), g("S12")], NCPoly::zero(), Origin::SeedAppendix),
            Rule::new(vec![g("S134"), g("S24")], NCPoly::zero(), Origin::SeedAppendix),
        ];
        let sys = RuleSystem::new(disjoint, sb().clone()).unwrap();
        assert!(enumerate_ambiguities(&sys).unwrap().is_empty());

        let long = vec![Rule::new(vec![g("S12"), g("S23"), g("S13")], NCPoly::zero(), Origin::SeedAppendix)];
        assert!(matches!(RuleSystem::new(long, sb().clone()), Err(RewriteError::NonPairwiseRule(_))));
    }

    #[test]
    fn compatibility_flags_identity_rule() {
        let sys = RuleSystem::new(
            vec![Rule::new(vec![g("S23"), g("S12")], w(&["S23", "S12"]), Origin::SeedAppendix)],
            sb().clone(),
        )
        .unwrap();
        assert!(!check_compatibility(&sys).passed());
        let gg = RuleSystem::new(
            vec![Rule::new(
                vec![g("S12"), g("S23")],
                p("q^-1*D123 + q*S13 + S1*S3 + S2*S123"),
                Origin::GeneratorGenerating,
            )],
            sb().clone(),
        )
        .unwrap();
        assert!(check_compatibility(&gg).passed());
    }

    #[test]
    fn empty_seed_completes_to_empty_system() {
        let (sys, stats) = complete_system(&[], &[], sb()).unwrap();
        assert!(sys.is_empty());
        assert_eq!(stats.relations_processed, 0);
        assert!(check_confluence(&sys).unwrap().passed());
    }

    #[test]
    fn budget_is_enforced() {
        let (b, a) = (0, 1);
        // a·b ↦ a·b loops forever
        let sys = RuleSystem::new(
            vec![Rule::new(vec![a, b], NCPoly::word(vec![a, b]), Origin::SeedAppendix)],
            toy_table(),
        )
        .unwrap();
        let r = normal_form_with(&NCPoly::word(vec![a, b]), &sys, Strategy::Leftmost, 50);
        assert!(matches!(r, Err(RewriteError::StepBudgetExceeded { budget: 50, .. })));
    }

    #[test]
    fn golden_normal_forms() {
        let sys = golden_system();
        // the commutator rhs still contains S12*S23, which generates D123
        let nf = normal_form(&w(&["S23", "S12"]), sys).unwrap();
        let appendix = p("(1 - q^2)*S1*S3 + (q^-1 - q^3)*S13 + (1 - q^2)*S2*S123 + q^2*S12*S23");
        assert_eq!(nf, normal_form(&appendix, sys).unwrap());
        assert_eq!(nf, p("S1*S3 + q*D123 + q^-1*S13 + S2*S123"));
        // the commuting pair reduces further to the disjoint-pair generator
        assert_eq!(normal_form(&w(&["S14", "S23"]), sys).unwrap(), normal_form(&w(&["S23", "S14"]), sys).unwrap());
        assert_eq!(normal_form(&w(&["S14", "S23"]), sys).unwrap(), w(&["P2314"]));
        let reduced = w(&["S12", "S12", "S13", "S123"]);
        assert_eq!(normal_form(&reduced, sys).unwrap(), reduced);
        assert_eq!(normal_form(&p("S1"), sys).unwrap(), p("S1"));
    }

    #[test]
    fn irreducible_counts_low_degree() {
        let c = irreducible_monomials(golden_system(), 4);
        assert_eq!(c[0], 1);
        assert_eq!(c[1], 0);
        assert_eq!(c[2], 6);
        assert_eq!(c[3], 4);
    }

    #[test]
    fn json_round_trip() {
        let sys = golden_system();
        let back = rules_from_json(&rules_to_json(sys), sb()).unwrap();
        assert_eq!(back.rules(), sys.rules());
        let bad = r#"{"version": 9, "rules": []}"#;
        assert!(rules_from_json(bad, sb()).is_err());
    }

    fn arb_monomial() -> impl proptest::strategy::Strategy<Value = (CMono, Word)> {
        (prop::array::uniform5(0u8..2), prop::collection::vec(0u8..20, 0..4))
    }

    fn arb_input() -> impl proptest::strategy::Strategy<Value = NCPoly> {
        prop::collection::vec((prop::collection::vec(0u8..20, 0..4), -2i32..3), 1..4).prop_map(|ts| {
            let mut x = NCPoly::zero();
            for (w, k) in ts {
                x.add_term(w, &CentralPoly::scalar(LaurentPoly::q_pow(k).into()));
            }
            x
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn compare_is_a_strict_partial_order(a in arb_monomial(), b in arb_monomial(), c in arb_monomial()) {
            let t = sb();
            let cmp = |x: &(CMono, Word), y: &(CMono, Word)| compare_monomials((&x.0, &x.1), (&y.0, &y.1), t);
            prop_assert_eq!(cmp(&a, &a), Comparison::Equal);
            if cmp(&a, &b) == Comparison::Less {
                prop_assert_eq!(cmp(&b, &a), Comparison::Greater);
                if cmp(&b, &c) == Comparison::Less {
                    prop_assert_eq!(cmp(&a, &c), Comparison::Less);
                }
            }
        }

        #[test]
        fn normal_form_is_idempotent_and_linear(x in arb_input(), y in arb_input(), k in -3i32..4) {
            let sys = golden_system();
            let nx = normal_form(&x, sys).unwrap();
            prop_assert_eq!(normal_form(&nx, sys).unwrap(), nx.clone());
            for (w, _) in nx.terms() {
                prop_assert!(!sys.is_reducible(w));
            }
            let c = CentralPoly::gen(0).scale(&RatFunc::q_pow(k));
            let lhs = normal_form(&(&x + &y.scale_central(&c)), sys).unwrap();
            let rhs = &nx + &normal_form(&y, sys).unwrap().scale_central(&c);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
