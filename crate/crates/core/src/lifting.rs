//! Embedding a small grammar into a larger one and transporting
//! derivations across the embedding.

use std::collections::BTreeSet;
use std::fmt;

use crate::engine::{DerivationTrace, Match, TraceStep};
use crate::error::Error;
use crate::grammar::{Grammar, Grule};
use crate::symbol::{NonterminalTag, SententialForm, Symbol};

/// How nonterminals of the small grammar are named in the large one.
/// Both directions are computed from the tag's shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Embedding {
    /// `n ↦ Lift1(n)`.
    First,
    /// `n ↦ Lift2(n)`.
    Second,
    /// `n ↦ n`, with the star markers excluded from the inverse.
    Identity,
}

impl Embedding {
    pub fn lift_nt(self, n: &NonterminalTag) -> NonterminalTag {
        match self {
            Embedding::First => n.clone().lift1(),
            Embedding::Second => n.clone().lift2(),
            Embedding::Identity => n.clone(),
        }
    }

    pub fn sink_nt(self, n: &NonterminalTag) -> Option<NonterminalTag> {
        match (self, n) {
            (Embedding::First, NonterminalTag::Lift1(inner)) => Some((**inner).clone()),
            (Embedding::Second, NonterminalTag::Lift2(inner)) => Some((**inner).clone()),
            (Embedding::Identity, n) if !n.is_star_marker() => Some(n.clone()),
            _ => None,
        }
    }

    pub fn lift_symbol(self, s: &Symbol) -> Symbol {
        match s {
            Symbol::Terminal(_) => s.clone(),
            Symbol::Nonterminal(n) => Symbol::Nonterminal(self.lift_nt(n)),
        }
    }

    pub fn lift_string(self, form: &[Symbol]) -> SententialForm {
        form.iter().map(|s| self.lift_symbol(s)).collect()
    }

    pub fn sink_string(self, form: &[Symbol]) -> Option<SententialForm> {
        form.iter()
            .map(|s| match s {
                Symbol::Terminal(_) => Some(s.clone()),
                Symbol::Nonterminal(n) => self.sink_nt(n).map(Symbol::Nonterminal),
            })
            .collect()
    }

    pub fn lift_rule(self, r: &Grule) -> Grule {
        r.map_symbols(|s| self.lift_symbol(s))
    }
}

/// One of the structural requirements on a [`LiftedGrammar`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LiftClause {
    LiftInjective,
    SinkInjective,
    LiftThenSink,
    CorrespondingRules,
    PreimageOfRules,
    SharedTerminals,
    /// Every lifted nonterminal is declared by the large grammar.
    LiftDeclared,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftViolation {
    pub clause: LiftClause,
    pub witness: String,
}

impl fmt::Display for LiftViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.clause, self.witness)
    }
}

/// A small grammar `g0` embedded in a large grammar `g`.
#[derive(Debug, Clone)]
pub struct LiftedGrammar {
    pub g0: Grammar,
    pub g: Grammar,
    pub embedding: Embedding,
}

impl LiftedGrammar {
    pub fn new(g0: Grammar, g: Grammar, embedding: Embedding) -> Self {
        LiftedGrammar { g0, g, embedding }
    }

    pub fn lift_string(&self, form: &[Symbol]) -> SententialForm {
        self.embedding.lift_string(form)
    }

    pub fn sink_string(&self, form: &[Symbol]) -> Option<SententialForm> {
        self.embedding.sink_string(form)
    }

    pub fn lift_rule(&self, r: &Grule) -> Grule {
        self.embedding.lift_rule(r)
    }

    /// Checks every clause exhaustively; an empty report means the
    /// embedding is sound.
    pub fn validate(&self) -> Vec<LiftViolation> {
        let e = self.embedding;
        let mut report = Vec::new();
        let mut violation = |clause, witness: String| report.push(LiftViolation { clause, witness });

        let mut images = BTreeSet::new();
        for n in self.g0.nonterminals() {
            let lifted = e.lift_nt(n);
            if !self.g.nonterminals().contains(&lifted) {
                violation(LiftClause::LiftDeclared, lifted.render());
            }
            if !images.insert(lifted.clone()) {
                violation(LiftClause::LiftInjective, lifted.render());
            }
            if e.sink_nt(&lifted).as_ref() != Some(n) {
                violation(LiftClause::LiftThenSink, n.render());
            }
        }

        let mut sunk = BTreeSet::new();
        for n in self.g.nonterminals() {
            if let Some(m) = e.sink_nt(n) {
                if !sunk.insert(m.clone()) {
                    violation(LiftClause::SinkInjective, m.render());
                }
            }
        }

        let lifted_rules: Vec<Grule> = self.g0.rules().iter().map(|r| e.lift_rule(r)).collect();
        for (r0, lifted) in self.g0.rules().iter().zip(&lifted_rules) {
            if !self.g.rules().contains(lifted) {
                violation(LiftClause::CorrespondingRules, r0.to_string());
            }
        }
        for r in self.g.rules() {
            if e.sink_nt(&r.input_nt).is_some() && !lifted_rules.contains(r) {
                violation(LiftClause::PreimageOfRules, r.to_string());
            }
        }

        for t in self.g0.terminals() {
            if !self.g.terminals().contains(t) {
                violation(LiftClause::SharedTerminals, t.to_string());
            }
        }
        report
    }

    /// Transports a derivation of `g0` into `g`, step for step.
    pub fn lift_derivation(&self, trace: &DerivationTrace) -> Result<DerivationTrace, Error> {
        trace.replay(&self.g0)?;
        let mut out = DerivationTrace::empty(self.lift_string(&trace.start));
        for (i, step) in trace.steps.iter().enumerate() {
            let rule = &self.g0.rules()[step.matched.rule_index];
            let lifted = self.lift_rule(rule);
            let rule_index = self
                .g
                .rules()
                .iter()
                .position(|r| *r == lifted)
                .ok_or(Error::InvalidTrace(i))?;
            out.steps.push(TraceStep {
                matched: Match {
                    rule_index,
                    position: step.matched.position,
                },
                form: self.lift_string(&step.form),
            });
        }
        out.replay(&self.g)?;
        Ok(out)
    }
}
