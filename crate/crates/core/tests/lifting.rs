mod common;

use common::*;
use proptest::prelude::*;
use type0::closures::{star_lifted, union_embeddings, union_grammar};
use type0::engine::{enumerate_derivations, SearchBudget};
use type0::lifting::{Embedding, LiftClause, LiftedGrammar};
use type0::{Grammar, NonterminalTag};

#[test]
fn lift_and_sink_strings() {
    let g = anbn();
    let f = form(&g, "a S b");
    let lifted = Embedding::First.lift_string(&f);
    assert_eq!(lifted.to_string(), "a @1.S b");
    assert_eq!(Embedding::First.sink_string(&lifted), Some(f.clone()));
    assert_eq!(Embedding::Second.sink_string(&lifted), None);
    assert_eq!(Embedding::Second.lift_string(&f).to_string(), "a @2.S b");
    assert_eq!(Embedding::Identity.lift_string(&f), f);
}

#[test]
fn fresh_symbols_do_not_sink() {
    let u = union_grammar(&anbn(), &g1());
    let f = form(&u, "@new");
    for e in [Embedding::First, Embedding::Second] {
        assert_eq!(e.sink_string(&f), None);
    }
    assert_eq!(Embedding::Identity.sink_nt(&NonterminalTag::StarZ), None);
    assert_eq!(Embedding::Identity.sink_nt(&NonterminalTag::StarH), None);
}

#[test]
fn constructions_give_sound_embeddings() {
    for (_, a) in all() {
        for (_, b) in all() {
            let (l1, l2) = union_embeddings(&a, &b);
            assert!(l1.validate().is_empty(), "{:?}", l1.validate());
            assert!(l2.validate().is_empty(), "{:?}", l2.validate());
        }
        assert!(star_lifted(&a).validate().is_empty());
    }
}

fn without_rule(g: &Grammar, index: usize) -> Grammar {
    let mut rules = g.rules().to_vec();
    rules.remove(index);
    Grammar::new(g.terminals().clone(), g.nonterminals().clone(), g.initial().clone(), rules).unwrap()
}

#[test]
fn deleted_rule_is_reported() {
    let g = anbn();
    let star = star_lifted(&g);
    let broken = LiftedGrammar::new(g.clone(), without_rule(&star.g, 0), star.embedding);
    let report = broken.validate();
    assert_eq!(report.len(), 1);
    assert_eq!(report[0].clause, LiftClause::CorrespondingRules);
    assert_eq!(report[0].witness, "S -> a S b");
}

#[test]
fn extra_rule_is_reported() {
    let (a, b) = (anbn(), g1());
    let (_, l2) = union_embeddings(&a, &b);
    // g1's rule transported to the other side has no preimage in anbn.
    let mut rules = l2.g.rules().to_vec();
    rules.push(Embedding::First.lift_rule(&b.rules()[0]));
    let mut nts = l2.g.nonterminals().clone();
    nts.insert(NonterminalTag::named("S1").unwrap().lift1());
    let g = Grammar::new(l2.g.terminals().clone(), nts, l2.g.initial().clone(), rules).unwrap();
    let broken = LiftedGrammar::new(a, g, Embedding::First);
    let clauses: Vec<_> = broken.validate().into_iter().map(|v| v.clause).collect();
    assert_eq!(clauses, [LiftClause::PreimageOfRules]);
}

#[test]
fn missing_terminal_and_nonterminal_are_reported() {
    let g = anbn();
    let target = empty();
    let clauses: Vec<_> = LiftedGrammar::new(g.clone(), target, Embedding::Second)
        .validate()
        .into_iter()
        .map(|v| v.clause)
        .collect();
    assert!(clauses.contains(&LiftClause::LiftDeclared));
    assert!(clauses.contains(&LiftClause::CorrespondingRules));
    let bare = Grammar::new([], [NonterminalTag::named("S").unwrap().lift2()], NonterminalTag::named("S").unwrap().lift2(), vec![]).unwrap();
    let clauses: Vec<_> = LiftedGrammar::new(g, bare, Embedding::Second)
        .validate()
        .into_iter()
        .map(|v| v.clause)
        .collect();
    assert!(clauses.contains(&LiftClause::SharedTerminals));
}

#[test]
fn derivations_lift_step_for_step() {
    let g = anbn();
    let b = g2();
    let (l1, l2) = union_embeddings(&g, &b);
    for (lg, base) in [(&l1, &g), (&l2, &b)] {
        for (word, t) in enumerate_derivations(base, &SearchBudget::for_word_len(4)) {
            let lifted = lg.lift_derivation(&t).unwrap();
            assert_eq!(lifted.len(), t.len());
            assert_eq!(lifted.end(), &word.to_form());
            for (f, f0) in lifted.forms().zip(t.forms()) {
                assert_eq!(lg.sink_string(f).as_ref(), Some(f0));
            }
        }
    }
}

#[test]
fn lifting_a_foreign_trace_fails() {
    let (l1, _) = union_embeddings(&anbn(), &g1());
    let t = enumerate_derivations(&g1(), &SearchBudget::for_word_len(1))
        .into_values()
        .last()
        .unwrap();
    assert!(l1.lift_derivation(&t).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lifted_grammars_simulate(a in small_grammar(), b in small_grammar()) {
        let (l1, l2) = union_embeddings(&a, &b);
        let star = star_lifted(&a);
        for lg in [&l1, &l2, &star] {
            prop_assert!(lg.validate().is_empty());
            for (_, t) in enumerate_derivations(&lg.g0, &SearchBudget::new(6, 5, 3)) {
                let lifted = lg.lift_derivation(&t).unwrap();
                prop_assert_eq!(lifted.len(), t.len());
                prop_assert_eq!(lg.sink_string(lifted.end()), Some(t.end().clone()));
            }
        }
    }

    #[test]
    fn sink_after_lift_is_identity(f in small_grammar().prop_flat_map(|g| form_over(&g, 6))) {
        for e in [Embedding::First, Embedding::Second] {
            prop_assert_eq!(e.sink_string(&e.lift_string(&f)), Some(f.clone()));
        }
    }
}
