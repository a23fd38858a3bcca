use awskein::central::CentralPoly;
use awskein::coeff::{LaurentPoly, RatFunc};
use awskein::freealg::{Gen, NCPoly};
use awskein::rewrite::{
    check_compatibility, check_confluence, normal_form_with, rules_to_json, Rule, RuleSystem, Strategy, DEFAULT_BUDGET,
};
use awskein::skein::{build_generator_table, build_skein_system, golden_system, load_appendix_corpus, GOLDEN_RULES_JSON};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn completion_reproduces_the_golden_file() {
    let (sys, stats) = build_skein_system(load_appendix_corpus()).unwrap();
    assert_eq!(sys.len(), 280);
    assert!(stats.relations_processed >= 280);
    assert_eq!(rules_to_json(&sys), GOLDEN_RULES_JSON.trim_end());
}

#[test]
fn golden_system_is_confluent_and_compatible() {
    let sys = golden_system();
    let rep = check_confluence(sys).unwrap();
    assert!(rep.passed(), "{:?}", &rep.failures[..rep.failures.len().min(3)]);
    assert_eq!(rep.ambiguities, 3580);
    assert!(check_compatibility(sys).passed());
}

#[test]
fn perturbed_coefficient_breaks_confluence() {
    let sys = golden_system();
    let mut rules: Vec<Rule> = sys.rules().to_vec();
    // Scale one non-generator-generating rule's right-hand side by q.
    let k = rules.iter().position(|r| r.rhs.len() > 1 && r.origin.to_string() == "seed-appendix").unwrap();
    rules[k].rhs = rules[k].rhs.scale(&RatFunc::q_pow(1));
    let bad = RuleSystem::new(rules, sys.table().clone()).unwrap();
    let rep = check_confluence(&bad).unwrap();
    assert!(!rep.passed());
    assert!(!rep.failures.is_empty());
}

fn random_input(rng: &mut StdRng) -> NCPoly {
    let table = build_generator_table();
    let mut out = NCPoly::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut budget = rng.gen_range(2..=8u32);
        let mut w: Vec<Gen> = Vec::new();
        loop {
            let g = rng.gen_range(0..table.len()) as Gen;
            let d = table.degree(g);
            if d > budget {
                if budget < 2 || rng.gen_bool(0.3) {
                    break;
                }
                continue;
            }
            budget -= d;
            w.push(g);
        }
        let mut c = CentralPoly::scalar(LaurentPoly::from_q_ints(&[(rng.gen_range(-2..=2), rng.gen_range(1..=3))]).into());
        if budget >= 1 && rng.gen_bool(0.5) {
            c = &c * &CentralPoly::gen(rng.gen_range(0..4));
        }
        out.add_assign(&NCPoly::term(w, c));
    }
    out
}

#[test]
fn normal_form_is_strategy_independent() {
    let sys = golden_system();
    let mut rng = StdRng::seed_from_u64(2024);
    for _ in 0..1000 {
        let x = random_input(&mut rng);
        let l = normal_form_with(&x, sys, Strategy::Leftmost, DEFAULT_BUDGET).unwrap();
        let r = normal_form_with(&x, sys, Strategy::Rightmost, DEFAULT_BUDGET).unwrap();
        assert_eq!(l, r, "{x}");
    }
}
