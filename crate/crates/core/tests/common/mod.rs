//! Grammars and generators shared by the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;
use type0::format::{parse_form, parse_grammar};
use type0::{Grammar, Grule, NonterminalTag, SententialForm, Symbol, Terminal};

pub const ANBN: &str = include_str!("../../../../grammars/anbn.gram");
pub const G1: &str = include_str!("../../../../grammars/g1.gram");
pub const G2: &str = include_str!("../../../../grammars/g2.gram");
pub const EMPTY: &str = include_str!("../../../../grammars/empty.gram");
pub const EPS: &str = include_str!("../../../../grammars/eps.gram");

pub fn grammar_path(name: &str) -> String {
    format!("{}/../../grammars/{name}.gram", env!("CARGO_MANIFEST_DIR"))
}

pub fn load(text: &str) -> Grammar {
    parse_grammar(text).expect("test grammar parses").to_general()
}

pub fn anbn() -> Grammar {
    load(ANBN)
}

/// `S1 -> S1 a | eps`.
pub fn g1() -> Grammar {
    load(G1)
}

/// `S2 -> S2 a | eps`, `a S2 -> b`.
pub fn g2() -> Grammar {
    load(G2)
}

pub fn empty() -> Grammar {
    load(EMPTY)
}

pub fn eps() -> Grammar {
    load(EPS)
}

/// Every test grammar with its name.
pub fn all() -> Vec<(&'static str, Grammar)> {
    vec![
        ("anbn", anbn()),
        ("g1", g1()),
        ("g2", g2()),
        ("empty", empty()),
        ("eps", eps()),
    ]
}

pub fn form(g: &Grammar, tokens: &str) -> SententialForm {
    parse_form(g, tokens).expect("form parses")
}

fn nt(name: &str) -> NonterminalTag {
    NonterminalTag::named(name).unwrap()
}

/// Symbols of the random grammars: terminals `a b`, nonterminals `S A B`.
fn symbol(nonterminals: usize) -> impl Strategy<Value = Symbol> {
    let names = ["S", "A", "B"];
    prop_oneof![
        2 => prop_oneof![Just(Symbol::t("a")), Just(Symbol::t("b"))],
        1 => (0..nonterminals).prop_map(move |i| Symbol::nt(nt(names[i]))),
    ]
}

fn rule(nonterminals: usize) -> impl Strategy<Value = Grule> {
    // Mostly context-free, so that a fair share of grammars derive words.
    let context = || {
        prop_oneof![
            3 => Just(Vec::new()),
            1 => prop::collection::vec(symbol(nonterminals), 1..=2),
        ]
    };
    (
        context(),
        0..nonterminals,
        context(),
        prop::collection::vec(symbol(nonterminals), 0..=3),
    )
        .prop_map(|(left, head, mut right, output)| {
            right.truncate(2 - left.len().min(2));
            let mut lhs = left;
            lhs.push(Symbol::nt(nt(["S", "A", "B"][head])));
            lhs.extend(right);
            Grule::designate(lhs.into(), output.into()).expect("lhs has a nonterminal")
        })
}

/// Grammars over `a b` with at most 3 nonterminals, at most 4 rules and
/// rule sides of at most 3 symbols.
pub fn small_grammar() -> impl Strategy<Value = Grammar> {
    (1..=3usize)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(rule(n), 0..=4)))
        .prop_map(|(n, rules)| {
            let names = ["S", "A", "B"];
            Grammar::new(
                [Terminal::new("a").unwrap(), Terminal::new("b").unwrap()],
                names[..n].iter().map(|s| nt(s)),
                nt("S"),
                rules,
            )
            .expect("generated grammar is valid")
        })
}

/// Forms over a grammar's declared symbols.
pub fn form_over(g: &Grammar, max_len: usize) -> impl Strategy<Value = SententialForm> {
    let symbols: Vec<Symbol> = g.symbol_table().into_values().collect();
    prop::collection::vec(prop::sample::select(symbols), 0..=max_len).prop_map(SententialForm::from)
}
