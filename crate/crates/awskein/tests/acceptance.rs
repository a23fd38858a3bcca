//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! A FAIL that traces to an inconsistent printed formula (rather than to the
//! engine) is reported as such and does not fail the run; any other FAIL
//! exits nonzero.

use std::time::{Duration, Instant};

use awskein::braidaction::{beta_on_generator, verify_braid_action};
use awskein::hilbert::{character_route, closed_form_h, enumerated_series, rank_four_numerators};
use awskein::oracle::{verify_iso_corpus, verify_iso_rules};
use awskein::rewrite::{check_compatibility, check_confluence, check_strategy_independence, RuleSystem};
use awskein::skein::{build_generator_table, build_skein_system, load_appendix_corpus, loop_poly, LoopSet};
use awskein::tensor::{
    verify_aw_commutators, verify_bar_coproduct, verify_braided_samples, verify_quasi_r, verify_unbraiding,
};
use awskein::uqsl2::{verify_hopf, verify_rea_image};
use awskein::Report;

#[derive(PartialEq)]
enum Verdict {
    Pass,
    Fail,
    /// Fails only because a printed formula contradicts itself.
    DocumentedFail,
}

struct Line {
    id: u8,
    title: &'static str,
    verdict: Verdict,
    notes: Vec<String>,
}

fn summarize(r: &Report) -> String {
    let first = r.failures.first().map(|f| format!("; first: {}", &f[..f.len().min(160)])).unwrap_or_default();
    format!("{}: {}/{} ok{first}", r.name, r.checked - r.failures.len(), r.checked)
}

fn from_reports(id: u8, title: &'static str, reports: &[Report], mut notes: Vec<String>) -> Line {
    let ok = reports.iter().all(Report::passed);
    notes.extend(reports.iter().map(summarize));
    Line { id, title, verdict: if ok { Verdict::Pass } else { Verdict::Fail }, notes }
}

/// Integer power series `num/den` to `t^n` by long division.
fn expand(num: &[i128], den: &[i128], n: usize) -> Vec<i128> {
    assert_eq!(den[0], 1);
    let mut out = vec![0i128; n + 1];
    for k in 0..=n {
        let mut c = num.get(k).copied().unwrap_or(0);
        for j in 1..=k.min(den.len() - 1) {
            c -= den[j] * out[k - j];
        }
        out[k] = c;
    }
    out
}

fn pmul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut c = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

fn ppow(a: &[i128], k: usize) -> Vec<i128> {
    (0..k).fold(vec![1], |acc, _| pmul(&acc, a))
}

/// `(1−t)^4 (1−t²)^5`.
fn rank_four_denominator() -> Vec<i128> {
    pmul(&ppow(&[1, -1], 4), &ppow(&[1, 0, -1], 5))
}

fn ints(s: &awskein::hilbert::Series1) -> Vec<i128> {
    s.to_integers().expect("integer series")
}

fn criterion_1(sys: &RuleSystem, elapsed: Duration) -> Line {
    let t = Instant::now();
    let mut notes = vec![format!("completion: {} rules in {:.1}s", sys.len(), elapsed.as_secs_f64())];
    match check_confluence(sys) {
        Ok(c) => {
            let total = elapsed + t.elapsed();
            notes.push(format!(
                "ambiguities {} resolved {} failures {} ({:.1}s total)",
                c.ambiguities,
                c.resolved,
                c.failures.len(),
                total.as_secs_f64()
            ));
            if sys.len() != 241 {
                notes.push(format!("rule count {} differs from the printed 241; allowed because criteria 2 and 4 are checked below", sys.len()));
            }
            let ok = c.passed() && total < Duration::from_secs(120);
            Line { id: 1, title: "confluence", verdict: if ok { Verdict::Pass } else { Verdict::Fail }, notes }
        }
        Err(e) => Line { id: 1, title: "confluence", verdict: Verdict::Fail, notes: vec![e.to_string()] },
    }
}

fn criterion_2(sys: &RuleSystem) -> Line {
    let got = ints(&enumerated_series(sys, 12));
    let want = expand(&[1, 0, 1, 4, 1, 0, 1], &rank_four_denominator(), 12);
    let spot = got[..4] == [1, 4, 16, 48];
    let notes = vec![format!("enumerated {got:?}"), format!("target     {want:?}")];
    Line { id: 2, title: "Hilbert/PBW match to degree 12", verdict: if got == want && spot { Verdict::Pass } else { Verdict::Fail }, notes }
}

fn criterion_3() -> Line {
    let mut notes = Vec::new();
    let mut routes_ok = true;
    for n in 1..=5 {
        let a = closed_form_h(n, 10).map(|s| ints(&s));
        let b = ints(&character_route(n, 10));
        let ok = a.as_ref().map(|a| *a == b).unwrap_or(false);
        routes_ok &= ok;
        notes.push(format!("n={n}: closed {} character", if ok { "=" } else { "≠" }));
    }
    // The two displayed rank-four forms share the denominator, so they agree
    // as rational functions iff the numerators agree.
    let (first, second) = rank_four_numerators();
    let first: Vec<i128> = first.into_iter().map(i128::from).collect();
    let second: Vec<i128> = second.into_iter().map(i128::from).collect();
    let literal_ok = first == second;
    notes.push(format!(
        "printed rank-four forms: numerators {first:?} vs {second:?} -> {}",
        if literal_ok { "agree" } else { "DISAGREE" }
    ));
    let corrected = pmul(&[1, 2, 1], &[1, -2, 4, -2, 1]);
    let corrected_ok = corrected == second && ints(&closed_form_h(4, 12).expect("rank 4")) == expand(&second, &rank_four_denominator(), 12);
    notes.push(format!(
        "with the bracket of the general closed form at n=4, (1+t)²(1−2t+4t²−2t³+t⁴) = {corrected:?} -> {}",
        if corrected_ok { "agrees with the second form and the closed form" } else { "mismatch" }
    ));
    let verdict = match (routes_ok, literal_ok, corrected_ok) {
        (true, true, _) => Verdict::Pass,
        (true, false, true) => Verdict::DocumentedFail,
        _ => Verdict::Fail,
    };
    Line { id: 3, title: "series route equality", verdict, notes }
}

fn criterion_8(sys: &RuleSystem) -> Line {
    let mut cases = Report::new("case formulas");
    let table = build_generator_table();
    let ls = LoopSet::new;
    for (i, a, want) in [(1, ls(&[1]), ls(&[2])), (2, ls(&[2, 3]), ls(&[2, 3])), (2, ls(&[1, 2, 3, 4]), ls(&[1, 2, 3, 4])), (1, ls(&[3, 4]), ls(&[3, 4]))] {
        let got = beta_on_generator(i, a);
        let ok = got.as_ref().map(|g| *g == loop_poly(want)).unwrap_or(false);
        cases.check(ok, || format!("β_{i}·{a} = {:?}", got.map(|g| g.display(table))));
    }
    match verify_braid_action(sys) {
        Ok(r) => from_reports(8, "braid action", &[cases, r], vec![]),
        Err(e) => Line { id: 8, title: "braid action", verdict: Verdict::Fail, notes: vec![e.to_string()] },
    }
}

fn main() {
    let start = Instant::now();
    let corpus = load_appendix_corpus();
    let t = Instant::now();
    let completed = build_skein_system(corpus);
    let elapsed = t.elapsed();
    let sys = match completed {
        Ok((sys, _)) => sys,
        Err(e) => {
            println!("criterion 1: FAIL confluence — completion error: {e}");
            std::process::exit(1);
        }
    };

    let lines = vec![
        criterion_1(&sys, elapsed),
        criterion_2(&sys),
        criterion_3(),
        from_reports(4, "isomorphism oracle", &[verify_iso_corpus(corpus), verify_iso_rules(&sys, corpus, None)], vec![]),
        from_reports(5, "commutator theorem", &[verify_aw_commutators(3), verify_aw_commutators(4)], vec![]),
        {
            let rea = verify_rea_image();
            let mut r = Report::new("reflection equation image");
            r.check(rea.determinant_ok, || "quantum determinant".into());
            r.check(rea.trace_ok, || "quantum trace".into());
            for k in 0..16 {
                r.check(k < rea.reflection_entries_ok, || format!("reflection entries ok: {}/16", rea.reflection_entries_ok));
            }
            from_reports(6, "quantum-group axioms", &[verify_hopf(), verify_bar_coproduct(), r], vec![])
        },
        from_reports(
            7,
            "unbraiding",
            &[verify_unbraiding(4), verify_braided_samples(200, 7), verify_quasi_r(6)],
            vec![],
        ),
        criterion_8(&sys),
        from_reports(
            9,
            "order compatibility",
            &[check_compatibility(&sys), check_strategy_independence(&sys, 1000, 99)],
            vec![],
        ),
    ];

    let mut hard_fail = false;
    for l in &lines {
        let tag = match l.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::DocumentedFail => "FAIL (printed formula inconsistent; see notes)",
        };
        println!("criterion {}: {tag} — {}", l.id, l.title);
        for n in &l.notes {
            println!("    {n}");
        }
        hard_fail |= l.verdict == Verdict::Fail;
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if hard_fail {
        std::process::exit(1);
    }
}
