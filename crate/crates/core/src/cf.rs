//! Context-free grammars as a special case of general grammars.

use std::collections::BTreeSet;

use crate::closures::{wrap_string, Side};
use crate::error::Error;
use crate::grammar::{Grammar, Grule};
use crate::symbol::{NonterminalTag, SententialForm, Symbol, Terminal};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CfRule {
    pub head: NonterminalTag,
    pub body: SententialForm,
}

impl CfRule {
    pub fn new(head: NonterminalTag, body: SententialForm) -> Self {
        CfRule { head, body }
    }
}

/// A grammar whose rules all rewrite a single nonterminal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfGrammar {
    terminals: BTreeSet<Terminal>,
    nonterminals: BTreeSet<NonterminalTag>,
    initial: NonterminalTag,
    rules: Vec<CfRule>,
}

impl CfGrammar {
    pub fn new(
        terminals: impl IntoIterator<Item = Terminal>,
        nonterminals: impl IntoIterator<Item = NonterminalTag>,
        initial: NonterminalTag,
        rules: Vec<CfRule>,
    ) -> Result<Self, Error> {
        let cg = CfGrammar {
            terminals: terminals.into_iter().collect(),
            nonterminals: nonterminals.into_iter().collect(),
            initial,
            rules,
        };
        general_of_cf(&cg).validate()?;
        Ok(cg)
    }

    pub fn terminals(&self) -> &BTreeSet<Terminal> {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &BTreeSet<NonterminalTag> {
        &self.nonterminals
    }

    pub fn initial(&self) -> &NonterminalTag {
        &self.initial
    }

    pub fn rules(&self) -> &[CfRule] {
        &self.rules
    }
}

impl TryFrom<&Grammar> for CfGrammar {
    type Error = Error;

    /// Fails with the index of the first rule that has context.
    fn try_from(g: &Grammar) -> Result<Self, Error> {
        let rules = g
            .rules()
            .iter()
            .enumerate()
            .map(|(i, r)| {
                if r.is_context_free() {
                    Ok(CfRule::new(r.input_nt.clone(), r.output.clone()))
                } else {
                    Err(Error::NotContextFree(i))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CfGrammar {
            terminals: g.terminals().clone(),
            nonterminals: g.nonterminals().clone(),
            initial: g.initial().clone(),
            rules,
        })
    }
}

pub fn general_of_cf(cg: &CfGrammar) -> Grammar {
    Grammar::assemble_unchecked(
        cg.terminals.clone(),
        cg.nonterminals.clone(),
        cg.initial.clone(),
        cg.rules
            .iter()
            .map(|r| Grule::context_free(r.head.clone(), r.body.clone()))
            .collect(),
    )
}

pub fn is_context_free(g: &Grammar) -> bool {
    g.rules().iter().all(Grule::is_context_free)
}

fn lifted_cf_nonterminals(cg1: &CfGrammar, cg2: &CfGrammar) -> BTreeSet<NonterminalTag> {
    cg1.nonterminals
        .iter()
        .map(|n| n.clone().lift1())
        .chain(cg2.nonterminals.iter().map(|n| n.clone().lift2()))
        .chain([NonterminalTag::Fresh])
        .collect()
}

fn lift_cf_rule(r: &CfRule, side: Side) -> CfRule {
    let lift = |n: &NonterminalTag| match side {
        Side::First => n.clone().lift1(),
        Side::Second => n.clone().lift2(),
    };
    CfRule::new(
        lift(&r.head),
        r.body
            .iter()
            .map(|s| match s {
                Symbol::Terminal(_) => s.clone(),
                Symbol::Nonterminal(n) => Symbol::Nonterminal(lift(n)),
            })
            .collect(),
    )
}

/// Union of context-free grammars: a fresh start symbol choosing either
/// operand's (lifted) start symbol.
pub fn cf_union(cg1: &CfGrammar, cg2: &CfGrammar) -> CfGrammar {
    let mut rules = vec![
        CfRule::new(
            NonterminalTag::Fresh,
            SententialForm::single(cg1.initial.clone().lift1()),
        ),
        CfRule::new(
            NonterminalTag::Fresh,
            SententialForm::single(cg2.initial.clone().lift2()),
        ),
    ];
    rules.extend(cg1.rules.iter().map(|r| lift_cf_rule(r, Side::First)));
    rules.extend(cg2.rules.iter().map(|r| lift_cf_rule(r, Side::Second)));
    CfGrammar {
        terminals: cg1.terminals.union(&cg2.terminals).cloned().collect(),
        nonterminals: lifted_cf_nonterminals(cg1, cg2),
        initial: NonterminalTag::Fresh,
        rules,
    }
}

/// Concatenation of context-free grammars using per-side terminal proxies.
/// Every added rule has a single nonterminal on the left, so the result
/// stays context-free.
pub fn cf_concat(cg1: &CfGrammar, cg2: &CfGrammar) -> CfGrammar {
    let terminals: BTreeSet<Terminal> = cg1.terminals.union(&cg2.terminals).cloned().collect();
    let mut rules = vec![CfRule::new(
        NonterminalTag::Fresh,
        SententialForm::new(vec![
            Symbol::Nonterminal(cg1.initial.clone().lift1()),
            Symbol::Nonterminal(cg2.initial.clone().lift2()),
        ]),
    )];
    for (cg, side) in [(cg1, Side::First), (cg2, Side::Second)] {
        rules.extend(cg.rules.iter().map(|r| {
            let head = match side {
                Side::First => r.head.clone().lift1(),
                Side::Second => r.head.clone().lift2(),
            };
            CfRule::new(head, wrap_string(side, &r.body))
        }));
    }
    let mut nonterminals = lifted_cf_nonterminals(cg1, cg2);
    for make in [NonterminalTag::Proxy1, NonterminalTag::Proxy2] {
        for t in &terminals {
            rules.push(CfRule::new(make(t.clone()), SententialForm::single(t.clone())));
            nonterminals.insert(make(t.clone()));
        }
    }
    CfGrammar {
        terminals,
        nonterminals,
        initial: NonterminalTag::Fresh,
        rules,
    }
}
