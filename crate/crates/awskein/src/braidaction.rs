//! The action of the braid group `B_4` on the skein algebra of the
//! five-punctured sphere by half twists of neighbouring punctures.
//!
//! On simple loops the half twist `β_i` is given by three cases; on the
//! extended generators it is forced by their defining relations, and on the
//! central ring it permutes `s_i ↔ s_{i+1}`.

use rayon::prelude::*;
use thiserror::Error;

use crate::central::{CentralPoly, NCENTRAL};
use crate::coeff::{LaurentPoly, RatFunc};
use crate::freealg::{GenKind, Gen, NCPoly};
use crate::rewrite::{Reducer, RewriteError, RuleSystem, Strategy};
use crate::skein::{build_generator_table, load_appendix_corpus, loop_poly, LoopSet, THREE_POINT_SECTION};
use crate::Report;

/// Number of punctures permuted by the action.
pub const STRANDS: u8 = 4;

const BUDGET: u64 = 1 << 40;

#[derive(Debug, Error)]
pub enum BraidError {
    #[error("braid generator index {0} out of range 1..=3")]
    InvalidIndex(u8),
    #[error("the empty loop is a scalar, not a generator")]
    EmptyLoop,
    #[error("coefficient {coeff} of {word} is not divisible by q^2 - q^-2")]
    InexactDivision { word: String, coeff: String },
    #[error("malformed braid word: {0}")]
    BadWord(String),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// A half twist `β_i` (or its inverse) exchanging punctures `i` and `i+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BraidGen {
    index: u8,
    inverse: bool,
}

impl BraidGen {
    pub fn new(index: u8) -> Result<Self, BraidError> {
        if (1..STRANDS).contains(&index) {
            Ok(Self { index, inverse: false })
        } else {
            Err(BraidError::InvalidIndex(index))
        }
    }

    pub fn index(&self) -> u8 {
        self.index
    }

    pub fn is_inverse(&self) -> bool {
        self.inverse
    }

    pub fn inverse(&self) -> Self {
        Self { index: self.index, inverse: !self.inverse }
    }

    /// Parses a word such as `"1 2 -1"`; negative entries are inverses.
    pub fn parse_word(text: &str) -> Result<Vec<BraidGen>, BraidError> {
        text.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                let k: i16 = s.parse().map_err(|_| BraidError::BadWord(text.to_string()))?;
                let b = BraidGen::new(k.unsigned_abs().min(255) as u8)?;
                Ok(if k < 0 { b.inverse() } else { b })
            })
            .collect()
    }
}

fn q() -> RatFunc {
    RatFunc::q_pow(1)
}

fn qinv() -> RatFunc {
    RatFunc::q_pow(-1)
}

/// `q^2 − q^{-2}` as a Laurent polynomial.
fn quantum_two() -> LaurentPoly {
    &LaurentPoly::q_pow(2) - &LaurentPoly::q_pow(-2)
}

/// Divides every coefficient of `x` exactly by `±(q^2 − q^{-2})`.
fn divide_exact(x: &NCPoly, negate: bool) -> Result<NCPoly, BraidError> {
    let d = if negate { -&quantum_two() } else { quantum_two() };
    let table = build_generator_table();
    let mut out = NCPoly::zero();
    for (w, c) in x.terms() {
        let mut cc = CentralPoly::zero();
        for (m, r) in c.terms() {
            let quot = r.as_laurent().and_then(|l| l.div_exact(&d)).ok_or_else(|| BraidError::InexactDivision {
                word: table.word_name(w),
                coeff: r.to_string(),
            })?;
            cc.add_term(*m, &quot.into());
        }
        out.add_term(w.clone(), &cc);
    }
    Ok(out)
}

/// `β^{±1}_i · s_A` for a nonempty `A ⊆ {1..4}`, reduced to normal form.
///
/// The forward twist moves `i` to `i+1`; for a loop containing `i+1` but not
/// `i` it is the q-commutator formula. The inverse swaps the roles of `i` and
/// `i+1` and inverts `q`.
pub fn beta_on_loop(b: BraidGen, a: LoopSet, red: &mut Reducer<'_>) -> Result<NCPoly, BraidError> {
    if a.is_empty() {
        return Err(BraidError::EmptyLoop);
    }
    let (i, j) = if b.inverse { (b.index + 1, b.index) } else { (b.index, b.index + 1) };
    // `i` is the puncture being moved onto `j`.
    match (a.contains(i), a.contains(j)) {
        (true, true) | (false, false) => Ok(loop_poly(a)),
        (true, false) => Ok(loop_poly(a.remove(i).insert(j))),
        (false, true) => {
            let (qq, qi) = if b.inverse { (qinv(), q()) } else { (q(), qinv()) };
            let sa = loop_poly(a);
            let pair = loop_poly(LoopSet::new(&[b.index, b.index + 1]));
            let bracket = &(&sa * &pair).scale(&qq) - &(&pair * &sa).scale(&qi);
            let si = loop_poly(LoopSet::new(&[i]));
            let sj = loop_poly(LoopSet::new(&[j]));
            let tail = &(&sj * &loop_poly(a.insert(i))) + &(&si * &loop_poly(a.remove(j)));
            let num = &bracket - &tail.scale(&(&qq - &qi));
            let num = red.reduce(&num)?;
            divide_exact(&num, b.inverse)
        }
    }
}

/// `β_i · s_A` with the forward twist, in normal form for the golden system.
pub fn beta_on_generator(i: u8, a: LoopSet) -> Result<NCPoly, BraidError> {
    let sys = crate::skein::golden_system();
    let mut red = Reducer::new(sys, Strategy::Leftmost).with_budget(BUDGET);
    beta_on_loop(BraidGen::new(i)?, a, &mut red)
}

/// Images of every letter and central generator under one half twist.
#[derive(Debug, Clone)]
pub struct BraidImages {
    pub gen: BraidGen,
    letters: Vec<NCPoly>,
    central: [CentralPoly; NCENTRAL],
}

impl BraidImages {
    /// Simple loops by the case formulas; each extended generator `X` is
    /// solved from the generator-generating relation `W = c·X + r` as
    /// `X = (W − r)/c`, whose image only involves earlier letters.
    pub fn new(b: BraidGen, red: &mut Reducer<'_>) -> Result<Self, BraidError> {
        let table = build_generator_table();
        let mut central: [CentralPoly; NCENTRAL] = Default::default();
        for (k, slot) in central.iter_mut().enumerate().take(4) {
            let img = beta_on_loop(b, LoopSet::new(&[k as u8 + 1]), red)?;
            *slot = img.coeff(&[]).cloned().expect("singletons map to central loops");
        }
        central[4] = CentralPoly::gen(4);
        let mut letters: Vec<Option<NCPoly>> = vec![None; table.len()];
        for (k, e) in table.entries().iter().enumerate() {
            if let GenKind::Simple(p) = &e.kind {
                letters[k] = Some(beta_on_loop(b, LoopSet::new(p), red)?);
            }
        }
        let mut partial = Self { gen: b, letters: Vec::new(), central };
        for rel in load_appendix_corpus().section("generator_generating") {
            let w = rel.lhs_word().expect("generator-generating lhs is a word");
            let defined = rel.rhs.terms().find_map(|(u, c)| match u.as_slice() {
                [x] if letters[*x as usize].is_none() => c.as_scalar().map(|s| (*x, s)),
                _ => None,
            });
            let Some((x, c)) = defined else { continue };
            let rest = &rel.rhs - &NCPoly::term(vec![x], CentralPoly::scalar(c.clone()));
            let expr = (&NCPoly::word(w) - &rest).scale(&c.recip().expect("nonzero coefficient"));
            letters[x as usize] = Some(partial.apply_with(&expr, red, Some(&letters))?);
        }
        partial.letters = letters
            .into_iter()
            .enumerate()
            .map(|(k, l)| l.unwrap_or_else(|| panic!("no image for {}", table.name(k as Gen))))
            .collect();
        Ok(partial)
    }

    pub fn letter(&self, g: Gen) -> &NCPoly {
        &self.letters[g as usize]
    }

    pub fn central(&self) -> &[CentralPoly; NCENTRAL] {
        &self.central
    }

    /// Applies the twist as an algebra endomorphism and reduces.
    pub fn apply(&self, x: &NCPoly, red: &mut Reducer<'_>) -> Result<NCPoly, BraidError> {
        self.apply_with(x, red, None)
    }

    fn apply_with(&self, x: &NCPoly, red: &mut Reducer<'_>, known: Option<&[Option<NCPoly>]>) -> Result<NCPoly, BraidError> {
        let mut out = NCPoly::zero();
        for (w, c) in x.terms() {
            let mut acc = NCPoly::central(c.substitute(&self.central));
            for &l in w {
                let img = match known {
                    Some(k) => k[l as usize].as_ref().expect("letter defined before use"),
                    None => &self.letters[l as usize],
                };
                acc = red.reduce(&(&acc * img))?;
            }
            out.add_assign(&acc);
        }
        Ok(red.reduce(&out)?)
    }
}

/// Images for `β_1, β_2, β_3` and their inverses.
pub struct BraidAction<'a> {
    sys: &'a RuleSystem,
    forward: Vec<BraidImages>,
    backward: Vec<BraidImages>,
}

impl<'a> BraidAction<'a> {
    pub fn new(sys: &'a RuleSystem) -> Result<Self, BraidError> {
        let build = |inv: bool| -> Result<Vec<BraidImages>, BraidError> {
            (1..STRANDS)
                .into_par_iter()
                .map(|i| {
                    let mut red = Reducer::new(sys, Strategy::Leftmost).with_budget(BUDGET);
                    let b = BraidGen::new(i)?;
                    BraidImages::new(if inv { b.inverse() } else { b }, &mut red)
                })
                .collect()
        };
        Ok(Self { sys, forward: build(false)?, backward: build(true)? })
    }

    pub fn system(&self) -> &'a RuleSystem {
        self.sys
    }

    pub fn reducer(&self) -> Reducer<'a> {
        Reducer::new(self.sys, Strategy::Leftmost).with_budget(BUDGET)
    }

    pub fn images(&self, b: BraidGen) -> &BraidImages {
        let k = (b.index - 1) as usize;
        if b.inverse {
            &self.backward[k]
        } else {
            &self.forward[k]
        }
    }

    /// Applies a braid word; the rightmost generator acts first.
    pub fn apply_word(&self, word: &[BraidGen], x: &NCPoly, red: &mut Reducer<'_>) -> Result<NCPoly, BraidError> {
        let mut cur = red.reduce(x)?;
        for b in word.iter().rev() {
            cur = self.images(*b).apply(&cur, red)?;
        }
        Ok(cur)
    }
}

/// `β_i` applied to `x` as an algebra endomorphism, in normal form for the
/// golden system.
pub fn beta_endomorphism(i: u8, x: &NCPoly) -> Result<NCPoly, BraidError> {
    let sys = crate::skein::golden_system();
    let mut red = Reducer::new(sys, Strategy::Leftmost).with_budget(BUDGET);
    let imgs = BraidImages::new(BraidGen::new(i)?, &mut red)?;
    imgs.apply(x, &mut red)
}

fn all_loops() -> Vec<LoopSet> {
    LoopSet::all_nonempty(STRANDS)
}

/// Well-definedness on every relation of the five-punctured corpus, the
/// braid relations and far commutation on all 15 simple loops, and
/// invertibility of each half twist.
pub fn verify_braid_action(sys: &RuleSystem) -> Result<Report, BraidError> {
    let act = BraidAction::new(sys)?;
    let table = sys.table();
    let mut rep = Report::new("braid action");

    let corpus = load_appendix_corpus();
    let rels: Vec<_> = corpus.relations.iter().filter(|r| r.section != THREE_POINT_SECTION).collect();
    let mut jobs: Vec<(u8, usize)> = Vec::new();
    for i in 1..STRANDS {
        jobs.extend((0..rels.len()).map(|k| (i, k)));
    }
    let results: Vec<Result<(bool, String), BraidError>> = jobs
        .par_iter()
        .map(|&(i, k)| {
            let mut red = act.reducer();
            let r = &rels[k];
            let res = act.images(BraidGen::new(i)?).apply(&r.difference(), &mut red)?;
            Ok((res.is_zero(), format!("β_{i} on relation {}: residual {}", r.name, res.display(table))))
        })
        .collect();
    for r in results {
        let (ok, w) = r?;
        rep.check(ok, || w);
    }

    let words = |s: &str| BraidGen::parse_word(s).expect("static braid word");
    let identities: Vec<(String, Vec<BraidGen>, Vec<BraidGen>)> = vec![
        ("β1β2β1 = β2β1β2".into(), words("1 2 1"), words("2 1 2")),
        ("β2β3β2 = β3β2β3".into(), words("2 3 2"), words("3 2 3")),
        ("β1β3 = β3β1".into(), words("1 3"), words("3 1")),
        ("β1β1⁻¹ = 1".into(), words("1 -1"), vec![]),
        ("β1⁻¹β1 = 1".into(), words("-1 1"), vec![]),
        ("β2β2⁻¹ = 1".into(), words("2 -2"), vec![]),
        ("β2⁻¹β2 = 1".into(), words("-2 2"), vec![]),
        ("β3β3⁻¹ = 1".into(), words("3 -3"), vec![]),
        ("β3⁻¹β3 = 1".into(), words("-3 3"), vec![]),
    ];
    let mut jobs = Vec::new();
    for k in 0..identities.len() {
        jobs.extend(all_loops().into_iter().map(|a| (k, a)));
    }
    let results: Vec<Result<(bool, String), BraidError>> = jobs
        .par_iter()
        .map(|&(k, a)| {
            let (name, lw, rw) = &identities[k];
            let mut red = act.reducer();
            let x = loop_poly(a);
            let l = act.apply_word(lw, &x, &mut red)?;
            let r = act.apply_word(rw, &x, &mut red)?;
            let diff = &l - &r;
            Ok((diff.is_zero(), format!("{name} on {a}: residual {}", diff.display(table))))
        })
        .collect();
    for r in results {
        let (ok, w) = r?;
        rep.check(ok, || w);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{g, parse_expr};
    use crate::skein::golden_system;

    fn ls(p: &[u8]) -> LoopSet {
        LoopSet::new(p)
    }

    fn expr(s: &str) -> NCPoly {
        parse_expr(s, build_generator_table()).unwrap()
    }

    #[test]
    fn case_formulas() {
        assert_eq!(beta_on_generator(1, ls(&[1])).unwrap(), expr("S2"));
        assert_eq!(beta_on_generator(1, ls(&[2])).unwrap(), expr("S1"));
        assert_eq!(beta_on_generator(2, ls(&[2, 3])).unwrap(), expr("S23"));
        assert_eq!(beta_on_generator(2, ls(&[1, 2, 3, 4])).unwrap(), expr("S1234"));
        assert_eq!(beta_on_generator(1, ls(&[1, 3])).unwrap(), expr("S23"));
        assert!(matches!(BraidGen::new(4), Err(BraidError::InvalidIndex(4))));
        assert!(matches!(beta_on_generator(1, LoopSet::EMPTY), Err(BraidError::EmptyLoop)));
    }

    #[test]
    fn twisting_a_pair_through_its_neighbour() {
        // s23 under the first twist is the loop around 1 and 3 passing
        // behind 2.
        assert_eq!(beta_on_generator(1, ls(&[2, 3])).unwrap(), NCPoly::letter(g("D123")));
    }

    #[test]
    fn endomorphism_basics() {
        assert_eq!(beta_endomorphism(2, &NCPoly::one()).unwrap(), NCPoly::one());
        let prod = expr("S1*S2*S3*S4*S1234");
        assert_eq!(beta_endomorphism(1, &prod).unwrap(), prod);
        let x = expr("S12");
        let y = expr("S23");
        let sys = golden_system();
        let mut red = Reducer::new(sys, Strategy::Leftmost);
        let imgs = BraidImages::new(BraidGen::new(2).unwrap(), &mut red).unwrap();
        let lhs = imgs.apply(&(&x * &y), &mut red).unwrap();
        let bx = imgs.apply(&x, &mut red).unwrap();
        let by = imgs.apply(&y, &mut red).unwrap();
        let rhs = red.reduce(&(&bx * &by)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn braid_word_parsing() {
        let w = BraidGen::parse_word("1 2 -1").unwrap();
        assert_eq!(w.len(), 3);
        assert!(w[2].is_inverse());
        assert!(BraidGen::parse_word("1 x").is_err());
        assert!(BraidGen::parse_word("0").is_err());
    }

    #[test]
    fn second_twist_of_s134() {
        let img = beta_on_generator(2, ls(&[1, 3, 4])).unwrap();
        assert_eq!(img, expr("q*S23*S134 - q^2*S124 - q*s2*S14 - q*s3*s1234"));
    }

    #[test]
    fn degree_grows_by_two_on_the_commutator_case() {
        let table = build_generator_table();
        for i in 1..STRANDS {
            for a in LoopSet::all_nonempty(STRANDS) {
                let d = beta_on_generator(i, a).unwrap().total_degree(table).unwrap() as usize;
                let moved = !a.contains(i) && a.contains(i + 1);
                let expected = if moved && (2..=3).contains(&a.len()) { a.len() + 2 } else { a.len() };
                assert_eq!(d, expected, "β_{i} on {a}");
            }
        }
    }

    #[test]
    fn action_is_well_defined_and_satisfies_braid_relations() {
        let rep = verify_braid_action(golden_system()).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!(rep.checked, 3 * 81 + 9 * 15);
    }
}
