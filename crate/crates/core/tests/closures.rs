mod common;

use common::*;
use proptest::prelude::*;
use type0::closures::*;
use type0::engine::{
    derives_within, enumerate_derivations, enumerate_language, generates_within, step_successors,
    SearchBudget,
};
use type0::format::render_grammar;
use type0::oracle::{lang_concat_upto, lang_star_upto, lang_union, WordSet};
use type0::{Error, Grammar, Grule, NonterminalTag, SententialForm, Word};

fn w(chars: &str) -> Word {
    Word::from_chars(chars).unwrap()
}

fn rule_lines(g: &Grammar) -> Vec<String> {
    g.rules().iter().map(|r| r.to_string()).collect()
}

fn language(g: &Grammar, len: usize) -> WordSet {
    WordSet::new(enumerate_language(g, &SearchBudget::for_word_len(len)), len)
}

#[test]
fn union_of_anbn_with_itself() {
    let g = anbn();
    let u = union_grammar(&g, &g);
    assert_eq!(u.rules().len(), 2 * g.rules().len() + 2);
    assert_eq!(u.initial(), &NonterminalTag::Fresh);
    let got = language(&u, 6);
    assert_eq!(got, lang_union(&language(&g, 6), &language(&g, 6)).unwrap());
    assert_eq!(got.words().iter().cloned().collect::<Vec<_>>(), [w(""), w("ab"), w("aabb"), w("aaabbb")]);
}

#[test]
fn union_with_empty_language_is_the_other_language() {
    for len in 0..=6 {
        assert_eq!(language(&union_grammar(&empty(), &anbn()), len), language(&anbn(), len));
    }
}

#[test]
fn union_traces_take_one_extra_step() {
    let (a, b) = (g1(), anbn());
    let u = union_grammar(&a, &b);
    for (side, g) in [(Side::First, &a), (Side::Second, &b)] {
        for (word, t) in enumerate_derivations(g, &SearchBudget::for_word_len(4)) {
            let lifted = union_trace(&a, &b, side, &t).unwrap();
            lifted.replay(&u).unwrap();
            assert_eq!(lifted.len(), t.len() + 1);
            assert_eq!(lifted.end(), &word.to_form());
        }
    }
}

#[test]
fn reversal_mirrors_fields() {
    let g = anbn();
    assert_eq!(rule_lines(&reversal_grammar(&g)), ["S -> b S a", "S -> eps"]);
    let g = g2();
    let r = reversal_rule(&g.rules()[2]);
    assert_eq!(r, Grule::new(SententialForm::empty(), r.input_nt.clone(), form(&g, "a"), form(&g, "b")));
    assert_eq!(r.to_string(), "S2 a -> b");
}

#[test]
fn reversal_is_an_involution() {
    for (_, g) in all() {
        assert_eq!(reversal_grammar(&reversal_grammar(&g)), g);
        let s = star_grammar(&g);
        assert_eq!(reversal_grammar(&reversal_grammar(&s)), s);
    }
}

#[test]
fn reversal_traces_mirror() {
    let s = star_grammar(&anbn());
    let r = reversal_grammar(&s);
    for (word, t) in enumerate_derivations(&s, &SearchBudget::for_word_len(4)) {
        let m = reversal_trace(&s, &t).unwrap();
        m.replay(&r).unwrap();
        assert_eq!(m.len(), t.len());
        assert_eq!(m.end(), &word.reversed().to_form());
    }
}

#[test]
fn naive_concat_generates_b() {
    let (a, b) = (g1(), g2());
    let naive = naive_concat_grammar(&a, &b);
    let t = generates_within(&naive, &w("b"), &SearchBudget::new(4, 4, 1)).unwrap().unwrap();
    assert_eq!(t.len(), 4);
    let oracle = lang_concat_upto(&language(&a, 6), &language(&b, 6), 6).unwrap();
    assert!(!oracle.contains(&w("b")));
}

#[test]
fn naive_and_proxy_concat_agree_on_context_free_operands() {
    let cf = [anbn(), g1(), empty(), eps()];
    for a in &cf {
        for b in &cf {
            for len in 0..=4 {
                assert_eq!(
                    language(&naive_concat_grammar(a, b), len),
                    language(&concat_grammar(a, b), len)
                );
            }
        }
    }
}

#[test]
fn proxy_concat_of_counterexample_grammars() {
    let (a, b) = (g1(), g2());
    let c = concat_grammar(&a, &b);
    assert_eq!(c.rules().len(), a.rules().len() + b.rules().len() + 2 * 2 + 1);
    let got = language(&c, 3);
    assert_eq!(got.words().iter().cloned().collect::<Vec<_>>(), [w(""), w("a"), w("aa"), w("aaa")]);
    assert_eq!(got, lang_concat_upto(&language(&a, 3), &language(&b, 3), 3).unwrap());
}

#[test]
fn proxied_contextual_rule() {
    let c = concat_grammar(&g1(), &g2());
    let expected = Grule::new(
        SententialForm::single(NonterminalTag::Proxy2(type0::Terminal::new("a").unwrap())),
        NonterminalTag::named("S2").unwrap().lift2(),
        SententialForm::empty(),
        SententialForm::single(NonterminalTag::Proxy2(type0::Terminal::new("b").unwrap())),
    );
    assert!(c.rules().contains(&expected));
    assert_eq!(expected.to_string(), "@p2.a @2.S2 -> @p2.b");
}

#[test]
fn concat_of_anbn_with_itself_matches_oracle() {
    let g = anbn();
    assert_eq!(
        language(&concat_grammar(&g, &g), 6),
        lang_concat_upto(&language(&g, 6), &language(&g, 6), 6).unwrap()
    );
}

#[test]
fn concat_trace_length() {
    let (a, b) = (anbn(), g2());
    let c = concat_grammar(&a, &b);
    let da = enumerate_derivations(&a, &SearchBudget::for_word_len(4));
    let db = enumerate_derivations(&b, &SearchBudget::for_word_len(2));
    for (w1, t1) in &da {
        for (w2, t2) in &db {
            let t = concat_trace(&a, &b, t1, t2).unwrap();
            t.replay(&c).unwrap();
            assert_eq!(t.len(), 1 + t1.len() + w1.len() + t2.len() + w2.len());
            assert_eq!(t.end(), &w1.concat(w2).to_form());
        }
    }
}

#[test]
fn concat_trace_rejects_a_trace_of_the_wrong_grammar() {
    let (a, b) = (anbn(), g1());
    let ta = enumerate_derivations(&a, &SearchBudget::for_word_len(2))[&w("ab")].clone();
    assert_eq!(concat_trace(&a, &b, &ta, &ta), Err(Error::TraceMismatch { index: 1 }));
}

#[test]
fn star_rules_of_anbn() {
    assert_eq!(
        rule_lines(&star_grammar(&anbn())),
        [
            "S -> a S b",
            "S -> eps",
            "@Z -> @Z S @H",
            "@Z -> @R @H",
            "@R @H -> @R",
            "@R @H -> eps",
            "@R a -> a @R",
            "@R b -> b @R",
        ]
    );
    assert!(render_grammar(&star_grammar(&anbn())).contains("\n@R @H -> @R\n"));
}

#[test]
fn star_of_star_keeps_markers_apart() {
    let s = star_grammar(&anbn());
    let ss = star_grammar(&s);
    assert_eq!(star_embedding(&s), type0::lifting::Embedding::First);
    assert!(ss.nonterminals().contains(&NonterminalTag::StarZ.lift1()));
    assert_eq!(language(&ss, 4), language(&s, 4));
}

#[test]
fn star_of_anbn_to_length_four() {
    let got = language(&star_grammar(&anbn()), 4);
    assert_eq!(
        got.words().iter().cloned().collect::<Vec<_>>(),
        [w(""), w("ab"), w("aabb"), w("abab")]
    );
    assert_eq!(got, lang_star_upto(&language(&anbn(), 4), 4).unwrap());
}

fn anbn_trace(word: &str) -> type0::DerivationTrace {
    enumerate_derivations(&anbn(), &SearchBudget::for_word_len(6))[&w(word)].clone()
}

#[test]
fn compartments() {
    let g = anbn();
    let star = star_grammar(&g);
    let t = build_compartments(&g, &[], &[]).unwrap();
    assert_eq!((t.len(), t.end()), (0, &form(&star, "@Z")));

    let t = build_compartments(&g, &[w("ab")], &[anbn_trace("ab")]).unwrap();
    t.replay(&star).unwrap();
    assert_eq!((t.len(), t.end()), (3, &form(&star, "@Z a b @H")));

    let t = build_compartments(&g, &[w("ab"), w("aabb")], &[anbn_trace("ab"), anbn_trace("aabb")]).unwrap();
    t.replay(&star).unwrap();
    assert_eq!((t.len(), t.end()), (7, &form(&star, "@Z a b @H a a b b @H")));

    assert_eq!(
        build_compartments(&g, &[w("ab")], &[anbn_trace("aabb")]),
        Err(Error::TraceMismatch { index: 0 })
    );
}

#[test]
fn scans() {
    let g = anbn();
    let star = star_grammar(&g);
    let t = terminal_scan(&g, &[]).unwrap();
    assert_eq!((t.len(), t.end()), (0, &form(&star, "@R @H")));

    let t = terminal_scan(&g, &[w("ab")]).unwrap();
    t.replay(&star).unwrap();
    let forms: Vec<_> = t.forms().cloned().collect();
    assert_eq!(
        forms,
        ["@R @H a b @H", "@R a b @H", "a @R b @H", "a b @R @H"].map(|f| form(&star, f))
    );

    let t = terminal_scan(&g, &[w("ab"), w("ab")]).unwrap();
    t.replay(&star).unwrap();
    assert_eq!((t.len(), t.end()), (6, &form(&star, "a b a b @R @H")));
}

#[test]
fn star_trace_of_the_worked_word() {
    let g = anbn();
    let star = star_grammar(&g);
    let words = [w("ab"), w("aaabbb"), w("ab")];
    let traces: Vec<_> = ["ab", "aaabbb", "ab"].iter().map(|x| anbn_trace(x)).collect();
    let t = star_trace(&g, &words, &traces).unwrap();
    t.replay(&star).unwrap();
    assert_eq!(t.end(), &w("abaaabbbab").to_form());
    // n + Σk + 1 + n + |join| + 1
    assert_eq!(t.len(), 3 + 8 + 1 + 3 + 10 + 1);
}

fn classify(g: &Grammar, tokens: &str) -> Vec<StarClassification> {
    classify_star_form(g, &form(&star_grammar(g), tokens))
}

#[test]
fn opening_case() {
    let g = anbn();
    let found = classify(&g, "@Z a a S b b @H S @H");
    let expected = StarClassification::Opening {
        x: vec![form(&g, "a a S b b"), form(&g, "S")],
    };
    assert!(found.contains(&expected), "{found:?}");
    assert!(verify_star_classification(&g, &expected, &SearchBudget::new(64, 12, 8)).is_verified());

    let bogus = StarClassification::Opening { x: vec![form(&g, "b a")] };
    assert!(!verify_star_classification(&g, &bogus, &SearchBudget::new(1000, 6, 4)).is_verified());
}

#[test]
fn cleaning_case() {
    let g = anbn();
    let found = classify(&g, "@R @H a S b @H a a a b b b @H S @H");
    let expected = StarClassification::Cleaning {
        x: vec![form(&g, "a S b"), form(&g, "a a a b b b"), form(&g, "S")],
    };
    assert!(found.contains(&expected), "{found:?}");
}

#[test]
fn scanning_case() {
    let g = anbn();
    let found = classify(&g, "a b a a a b @R b b @H a S b @H");
    let scanning = found
        .iter()
        .find(|c| c.case_number() == 3)
        .expect("case 3 present");
    assert_eq!(
        scanning,
        &StarClassification::Scanning {
            w: vec![],
            beta: w("abaaab"),
            gamma: form(&g, "b b"),
            x: vec![form(&g, "a S b")],
        }
    );
    match verify_star_classification(&g, scanning, &SearchBudget::new(64, 14, 10)) {
        Verification::Verified(StarClassification::Scanning { w: ws, beta, gamma, .. }) => {
            assert_eq!(ws, vec![w("ab")]);
            assert_eq!(beta, w("aaab"));
            assert_eq!(gamma, form(&g, "b b"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn finished_case() {
    let g = anbn();
    let found = classify(&g, "a b a a a b b b a b");
    let finished = StarClassification::Finished { word: w("abaaabbbab") };
    assert!(found.contains(&finished));
    assert!(verify_star_classification(&g, &finished, &SearchBudget::for_word_len(10)).is_verified());
    let not_in_star = StarClassification::Finished { word: w("ba") };
    assert!(!verify_star_classification(&g, &not_in_star, &SearchBudget::for_word_len(4)).is_verified());
}

#[test]
fn classifications_recompose() {
    let g = anbn();
    let star = star_grammar(&g);
    for tokens in [
        "@Z a a S b b @H S @H",
        "@R @H a S b @H a a a b b b @H S @H",
        "a b a a a b @R b b @H a S b @H",
        "a b a a a b b b a b",
        "a b @R",
        "@Z @H",
        "eps",
    ] {
        let f = form(&star, tokens);
        let found = classify_star_form(&g, &f);
        assert!(!found.is_empty(), "{tokens}");
        for c in found {
            assert_eq!(c.recompose(&g), f, "{c:?}");
        }
    }
}

#[test]
fn reachable_star_forms_step_to_reachable_forms() {
    // Every successor of a reachable form is classified too; a spot check
    // on a longer derivation than the acceptance sweep covers.
    let g = anbn();
    let star = star_grammar(&g);
    let mut frontier = vec![form(&star, "a b a a a b @R b b @H a S b @H")];
    for _ in 0..6 {
        let next: Vec<SententialForm> = frontier.iter().flat_map(|f| step_successors(&star, f)).collect();
        for f in &next {
            assert!(!classify_star_form(&g, f).is_empty(), "{f}");
        }
        frontier = next;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn union_hard_direction(a in small_grammar(), b in small_grammar()) {
        let budget = SearchBudget::new(8, 6, 3);
        let u = enumerate_language(&union_grammar(&a, &b), &SearchBudget { max_steps: 9, ..budget });
        let la = enumerate_language(&a, &budget);
        let lb = enumerate_language(&b, &budget);
        let both: std::collections::BTreeSet<_> = la.union(&lb).cloned().collect();
        prop_assert_eq!(u, both);
    }

    #[test]
    fn reversal_exactness(g in small_grammar()) {
        let budget = SearchBudget::new(8, 6, 3);
        let there = enumerate_derivations(&g, &budget);
        let back = enumerate_derivations(&reversal_grammar(&g), &budget);
        prop_assert_eq!(there.len(), back.len());
        for (word, t) in &there {
            prop_assert_eq!(back.get(&word.reversed()).map(|b| b.len()), Some(t.len()));
        }
    }

    #[test]
    fn star_contains_every_base_word(g in small_grammar()) {
        let s = star_grammar(&g);
        for (word, t) in enumerate_derivations(&g, &SearchBudget::new(6, 5, 3)) {
            let built = star_trace(&g, std::slice::from_ref(&word), std::slice::from_ref(&t)).unwrap();
            prop_assert!(built.replay(&s).is_ok());
            let found = derives_within(
                &s,
                &s.start_form(),
                &word.to_form(),
                &SearchBudget::new(built.len(), built.max_form_len(), word.len()),
            );
            prop_assert!(found.is_some());
        }
    }
}
