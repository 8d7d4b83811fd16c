//! Closure constructions: union, reversal, concatenation and Kleene star.
//!
//! Each construction renames the nonterminals of its operands with
//! structured tags (see [`NonterminalTag`]) so the operands can never share
//! a nonterminal, and adds the few rules that glue them together.

mod classify;
mod traces;

use std::collections::BTreeSet;

use crate::grammar::{Grammar, Grule};
use crate::lifting::{Embedding, LiftedGrammar};
use crate::symbol::{NonterminalTag, SententialForm, Symbol, Terminal};

pub use classify::{classify_star_form, verify_star_classification, StarClassification, Verification};
pub use traces::{
    build_compartments, concat_trace, naive_concat_trace, reversal_trace, star_trace, terminal_scan,
    union_trace, Side,
};

fn nt(tag: NonterminalTag) -> Symbol {
    Symbol::Nonterminal(tag)
}

fn merged_terminals(g1: &Grammar, g2: &Grammar) -> BTreeSet<Terminal> {
    g1.terminals().union(g2.terminals()).cloned().collect()
}

fn lifted_nonterminals(g1: &Grammar, g2: &Grammar) -> BTreeSet<NonterminalTag> {
    g1.nonterminals()
        .iter()
        .map(|n| Embedding::First.lift_nt(n))
        .chain(g2.nonterminals().iter().map(|n| Embedding::Second.lift_nt(n)))
        .chain(std::iter::once(NonterminalTag::Fresh))
        .collect()
}

/// `Fresh -> Lift1(S1)` and `Fresh -> Lift2(S2)` followed by the lifted
/// rules of both operands.
pub fn union_grammar(g1: &Grammar, g2: &Grammar) -> Grammar {
    let mut rules = vec![
        Grule::context_free(
            NonterminalTag::Fresh,
            SententialForm::single(Embedding::First.lift_nt(g1.initial())),
        ),
        Grule::context_free(
            NonterminalTag::Fresh,
            SententialForm::single(Embedding::Second.lift_nt(g2.initial())),
        ),
    ];
    rules.extend(g1.rules().iter().map(|r| Embedding::First.lift_rule(r)));
    rules.extend(g2.rules().iter().map(|r| Embedding::Second.lift_rule(r)));
    Grammar::assemble(
        merged_terminals(g1, g2),
        lifted_nonterminals(g1, g2),
        NonterminalTag::Fresh,
        rules,
    )
}

/// The two operand embeddings of [`union_grammar`].
pub fn union_embeddings(g1: &Grammar, g2: &Grammar) -> (LiftedGrammar, LiftedGrammar) {
    let u = union_grammar(g1, g2);
    (
        LiftedGrammar::new(g1.clone(), u.clone(), Embedding::First),
        LiftedGrammar::new(g2.clone(), u, Embedding::Second),
    )
}

pub fn reversal_rule(r: &Grule) -> Grule {
    Grule::new(
        r.input_right.reversed(),
        r.input_nt.clone(),
        r.input_left.reversed(),
        r.output.reversed(),
    )
}

/// Reverses every rule; the language is reversed wordwise.
pub fn reversal_grammar(g: &Grammar) -> Grammar {
    Grammar::assemble(
        g.terminals().clone(),
        g.nonterminals().clone(),
        g.initial().clone(),
        g.rules().iter().map(reversal_rule).collect(),
    )
}

/// The textbook `S -> S1 S2` construction. Correct for context-free
/// operands only: with terminals on left-hand sides, a rule of the second
/// operand can match across the boundary.
pub fn naive_concat_grammar(g1: &Grammar, g2: &Grammar) -> Grammar {
    let mut rules = vec![Grule::context_free(
        NonterminalTag::Fresh,
        SententialForm::new(vec![
            nt(Embedding::First.lift_nt(g1.initial())),
            nt(Embedding::Second.lift_nt(g2.initial())),
        ]),
    )];
    rules.extend(g1.rules().iter().map(|r| Embedding::First.lift_rule(r)));
    rules.extend(g2.rules().iter().map(|r| Embedding::Second.lift_rule(r)));
    Grammar::assemble(
        merged_terminals(g1, g2),
        lifted_nonterminals(g1, g2),
        NonterminalTag::Fresh,
        rules,
    )
}

/// Renames a symbol for use inside the operand on `side` of a
/// concatenation: nonterminals are lifted and terminals become proxies.
pub fn wrap_symbol(side: Side, s: &Symbol) -> Symbol {
    match (side, s) {
        (Side::First, Symbol::Terminal(t)) => nt(NonterminalTag::Proxy1(t.clone())),
        (Side::Second, Symbol::Terminal(t)) => nt(NonterminalTag::Proxy2(t.clone())),
        (Side::First, Symbol::Nonterminal(n)) => nt(Embedding::First.lift_nt(n)),
        (Side::Second, Symbol::Nonterminal(n)) => nt(Embedding::Second.lift_nt(n)),
    }
}

pub fn wrap_string(side: Side, form: &[Symbol]) -> SententialForm {
    form.iter().map(|s| wrap_symbol(side, s)).collect()
}

/// Concatenation safe for unrestricted operands.
///
/// Operand rules see only nonterminals (terminals are replaced by
/// per-side proxies), so no rule can match across the boundary. Rule
/// order: the start rule, the first operand's rules, the second operand's
/// rules, then `Proxy1(t) -> t` for every terminal, then `Proxy2(t) -> t`.
pub fn concat_grammar(g1: &Grammar, g2: &Grammar) -> Grammar {
    let terminals = merged_terminals(g1, g2);
    let mut rules = vec![Grule::context_free(
        NonterminalTag::Fresh,
        SententialForm::new(vec![
            nt(Embedding::First.lift_nt(g1.initial())),
            nt(Embedding::Second.lift_nt(g2.initial())),
        ]),
    )];
    rules.extend(g1.rules().iter().map(|r| r.map_symbols(|s| wrap_symbol(Side::First, s))));
    rules.extend(g2.rules().iter().map(|r| r.map_symbols(|s| wrap_symbol(Side::Second, s))));
    for make in [NonterminalTag::Proxy1, NonterminalTag::Proxy2] {
        rules.extend(terminals.iter().map(|t| {
            Grule::context_free(make(t.clone()), SententialForm::single(t.clone()))
        }));
    }
    let mut nonterminals = lifted_nonterminals(g1, g2);
    for t in &terminals {
        nonterminals.insert(NonterminalTag::Proxy1(t.clone()));
        nonterminals.insert(NonterminalTag::Proxy2(t.clone()));
    }
    Grammar::assemble(terminals, nonterminals, NonterminalTag::Fresh, rules)
}

/// How the base grammar's nonterminals appear inside its star grammar.
///
/// Plain user names are kept as they are; the star markers are distinct
/// constructors and cannot collide with them. A base grammar that already
/// uses structured tags (for instance the star of a star) is wrapped in
/// `Lift1` so its own markers stay apart from the new ones.
pub fn star_embedding(g: &Grammar) -> Embedding {
    if g.nonterminals().iter().all(NonterminalTag::is_plain) {
        Embedding::Identity
    } else {
        Embedding::First
    }
}

/// Star grammar with start `Z`, delimiter `#` (`StarH`) and cleaner `R`:
/// the base rules, then `Z -> Z S #`, `Z -> R #`, `R # -> R`, `R # -> ε`,
/// then `R t -> t R` for every terminal `t`.
pub fn star_grammar(g: &Grammar) -> Grammar {
    use NonterminalTag::{StarH, StarR, StarZ};
    let e = star_embedding(g);
    let mut rules: Vec<Grule> = g.rules().iter().map(|r| e.lift_rule(r)).collect();
    let hash = || SententialForm::single(StarH);
    rules.push(Grule::context_free(
        StarZ,
        SententialForm::new(vec![nt(StarZ), nt(e.lift_nt(g.initial())), nt(StarH)]),
    ));
    rules.push(Grule::context_free(
        StarZ,
        SententialForm::new(vec![nt(StarR), nt(StarH)]),
    ));
    rules.push(Grule::new(
        SententialForm::empty(),
        StarR,
        hash(),
        SententialForm::single(StarR),
    ));
    rules.push(Grule::new(SententialForm::empty(), StarR, hash(), SententialForm::empty()));
    for t in g.terminals() {
        rules.push(Grule::new(
            SententialForm::empty(),
            StarR,
            SententialForm::single(t.clone()),
            SententialForm::new(vec![Symbol::Terminal(t.clone()), nt(StarR)]),
        ));
    }
    let nonterminals = g
        .nonterminals()
        .iter()
        .map(|n| e.lift_nt(n))
        .chain([StarZ, StarH, StarR])
        .collect();
    Grammar::assemble(g.terminals().clone(), nonterminals, StarZ, rules)
}

/// The base grammar embedded in its star grammar.
pub fn star_lifted(g: &Grammar) -> LiftedGrammar {
    LiftedGrammar::new(g.clone(), star_grammar(g), star_embedding(g))
}
