//! Explicit derivations in constructed grammars, built from derivations in
//! their operands. These follow the inclusion `L(op) ⊇ op(L)` step by step
//! and fix the step counts used as search budgets elsewhere.

use crate::engine::{DerivationTrace, Match};
use crate::error::Error;
use crate::grammar::Grammar;
use crate::lifting::{Embedding, LiftedGrammar};
use crate::oracle::append_join_append;
use crate::symbol::{NonterminalTag, SententialForm, Symbol, Word};

use super::{
    concat_grammar, naive_concat_grammar, reversal_grammar, star_embedding, star_grammar,
    union_grammar,
};

/// Which operand of a binary construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

fn rule_index_for(g: &Grammar, head: &NonterminalTag, lhs: &SententialForm) -> usize {
    g.rules()
        .iter()
        .position(|r| &r.input_nt == head && r.lhs() == *lhs)
        .expect("construction rule present")
}

/// The word a trace derives from the initial nonterminal.
fn derived_word(g: &Grammar, trace: &DerivationTrace, index: usize) -> Result<Word, Error> {
    trace.replay(g).map_err(|_| Error::TraceMismatch { index })?;
    if trace.start != g.start_form() {
        return Err(Error::TraceMismatch { index });
    }
    trace.end().to_word().ok_or(Error::TraceMismatch { index })
}

/// Re-applies the matches of `trace` to the end of `out`, with rule indices
/// shifted by `rule_offset` and positions by `offset`.
fn transport(
    out: &mut DerivationTrace,
    target: &Grammar,
    trace: &DerivationTrace,
    rule_offset: usize,
    offset: usize,
) -> Result<(), Error> {
    for step in &trace.steps {
        out.push(
            target,
            Match {
                rule_index: rule_offset + step.matched.rule_index,
                position: offset + step.matched.position,
            },
        )?;
    }
    Ok(())
}

/// A derivation in `union_grammar(g1, g2)` of the word derived by `trace`
/// in the operand on `side`: one start rule, then the lifted steps.
pub fn union_trace(
    g1: &Grammar,
    g2: &Grammar,
    side: Side,
    trace: &DerivationTrace,
) -> Result<DerivationTrace, Error> {
    let u = union_grammar(g1, g2);
    let (operand, embedding, start_rule) = match side {
        Side::First => (g1, Embedding::First, 0),
        Side::Second => (g2, Embedding::Second, 1),
    };
    derived_word(operand, trace, 0)?;
    let lifted = LiftedGrammar::new(operand.clone(), u.clone(), embedding).lift_derivation(trace)?;
    let mut out = DerivationTrace::empty(u.start_form());
    out.push(&u, Match { rule_index: start_rule, position: 0 })?;
    out.extend(lifted)?;
    Ok(out)
}

fn resolve_proxies(
    out: &mut DerivationTrace,
    g: &Grammar,
    side: Side,
    from: usize,
    word: &Word,
) -> Result<(), Error> {
    for (i, t) in word.terminals().iter().enumerate() {
        let proxy = match side {
            Side::First => NonterminalTag::Proxy1(t.clone()),
            Side::Second => NonterminalTag::Proxy2(t.clone()),
        };
        let rule_index = rule_index_for(g, &proxy, &SententialForm::single(proxy.clone()));
        out.push(g, Match { rule_index, position: from + i })?;
    }
    Ok(())
}

/// A derivation of `w1 w2` in `concat_grammar(g1, g2)`: the start rule, the
/// first operand's steps, its proxies resolved left to right, then the
/// same for the second operand. Length `1 + k1 + |w1| + k2 + |w2|`.
pub fn concat_trace(
    g1: &Grammar,
    g2: &Grammar,
    t1: &DerivationTrace,
    t2: &DerivationTrace,
) -> Result<DerivationTrace, Error> {
    let w1 = derived_word(g1, t1, 0)?;
    let w2 = derived_word(g2, t2, 1)?;
    let c = concat_grammar(g1, g2);
    let mut out = DerivationTrace::empty(c.start_form());
    out.push(&c, Match { rule_index: 0, position: 0 })?;
    transport(&mut out, &c, t1, 1, 0)?;
    resolve_proxies(&mut out, &c, Side::First, 0, &w1)?;
    transport(&mut out, &c, t2, 1 + g1.rules().len(), w1.len())?;
    resolve_proxies(&mut out, &c, Side::Second, w1.len(), &w2)?;
    Ok(out)
}

/// A derivation `Z ⇒* Z w1 # w2 # … wn #` in `star_grammar(g)`.
///
/// Compartments are opened right to left: `Z -> Z S #` makes room for the
/// next word directly after `Z`, and that word's trace runs at offset 1.
/// Length `n + Σ len(traces[i])`.
pub fn build_compartments(
    g: &Grammar,
    words: &[Word],
    traces: &[DerivationTrace],
) -> Result<DerivationTrace, Error> {
    if words.len() != traces.len() {
        return Err(Error::TraceMismatch {
            index: words.len().min(traces.len()),
        });
    }
    for (i, (w, t)) in words.iter().zip(traces).enumerate() {
        if derived_word(g, t, i)? != *w {
            return Err(Error::TraceMismatch { index: i });
        }
    }
    let star = star_grammar(g);
    let lifted = LiftedGrammar::new(g.clone(), star.clone(), star_embedding(g));
    let open = g.rules().len();
    let mut out = DerivationTrace::empty(star.start_form());
    for t in traces.iter().rev() {
        out.push(&star, Match { rule_index: open, position: 0 })?;
        let inner = lifted.lift_derivation(t)?;
        transport(&mut out, &star, &inner, 0, 1)?;
    }
    Ok(out)
}

/// A derivation `R # w1 # … wn # ⇒* w1 … wn R #` in `star_grammar(g)`,
/// alternating `R # -> R` with `R t -> t R` over each word.
/// Length `n + Σ |wi|`.
pub fn terminal_scan(g: &Grammar, words: &[Word]) -> Result<DerivationTrace, Error> {
    if let Some(t) = words
        .iter()
        .flat_map(|w| w.terminals())
        .find(|t| !g.terminals().contains(*t))
    {
        return Err(Error::UndeclaredSymbol(t.to_string()));
    }
    let star = star_grammar(g);
    let hash = Symbol::Nonterminal(NonterminalTag::StarH);
    let r = Symbol::Nonterminal(NonterminalTag::StarR);
    let pieces: Vec<Vec<Symbol>> = words.iter().map(|w| w.to_form().into_symbols()).collect();
    let (delimited, _) = append_join_append(&[hash.clone()], &pieces);
    let mut start = vec![r.clone()];
    start.extend(delimited);

    let skip = rule_index_for(
        &star,
        &NonterminalTag::StarR,
        &SententialForm::new(vec![r.clone(), hash.clone()]),
    );
    let mut out = DerivationTrace::empty(start.into());
    let mut at = 0;
    for w in words {
        out.push(&star, Match { rule_index: skip, position: at })?;
        for t in w.terminals() {
            let step = rule_index_for(
                &star,
                &NonterminalTag::StarR,
                &SententialForm::new(vec![r.clone(), Symbol::Terminal(t.clone())]),
            );
            out.push(&star, Match { rule_index: step, position: at })?;
            at += 1;
        }
    }
    Ok(out)
}

/// A derivation of `w1 … wn` in `star_grammar(g)` from the words' traces
/// in `g`. Length `n + Σ k_i + 1 + (n + Σ |wi|) + 1`.
pub fn star_trace(
    g: &Grammar,
    words: &[Word],
    traces: &[DerivationTrace],
) -> Result<DerivationTrace, Error> {
    let star = star_grammar(g);
    let mut out = build_compartments(g, words, traces)?;
    let close = g.rules().len() + 1;
    out.push(&star, Match { rule_index: close, position: 0 })?;
    out.extend(terminal_scan(g, words)?)?;
    let erase = g.rules().len() + 3;
    let at = out.end().len() - 2;
    out.push(&star, Match { rule_index: erase, position: at })?;
    Ok(out)
}

/// A derivation of `w1 w2` in `naive_concat_grammar(g1, g2)`: the start
/// rule, then the first operand's lifted steps, then the second's.
/// Length `1 + k1 + k2`.
pub fn naive_concat_trace(
    g1: &Grammar,
    g2: &Grammar,
    t1: &DerivationTrace,
    t2: &DerivationTrace,
) -> Result<DerivationTrace, Error> {
    let w1 = derived_word(g1, t1, 0)?;
    derived_word(g2, t2, 1)?;
    let c = naive_concat_grammar(g1, g2);
    let mut out = DerivationTrace::empty(c.start_form());
    out.push(&c, Match { rule_index: 0, position: 0 })?;
    transport(&mut out, &c, t1, 1, 0)?;
    transport(&mut out, &c, t2, 1 + g1.rules().len(), w1.len())?;
    Ok(out)
}

/// The mirror image of `trace` in `reversal_grammar(g)`: same rules, forms
/// reversed, same length.
pub fn reversal_trace(g: &Grammar, trace: &DerivationTrace) -> Result<DerivationTrace, Error> {
    trace.replay(g)?;
    let rev = reversal_grammar(g);
    let mut out = DerivationTrace::empty(trace.start.reversed());
    let mut before = &trace.start;
    for step in &trace.steps {
        let lhs_len = g.rules()[step.matched.rule_index].lhs_len();
        let position = before.len() - step.matched.position - lhs_len;
        out.push(&rev, Match { rule_index: step.matched.rule_index, position })?;
        before = &step.form;
    }
    Ok(out)
}
