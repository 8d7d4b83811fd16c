//! The one-step rewrite relation and budgeted breadth-first search over it.
//!
//! Membership for unrestricted grammars is undecidable, so every search is
//! bounded by a [`SearchBudget`]. A negative answer always means "not found
//! within budget". Forms longer than `max_form_len` are discarded, which
//! makes enumeration an under-approximation of the language: rules may
//! shrink forms, so a discarded form could still have led to a short word.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::grammar::Grammar;
use crate::symbol::{SententialForm, Symbol, Word};

/// An occurrence of a rule's left-hand side inside a form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Match {
    pub rule_index: usize,
    /// Offset where the left-hand side begins.
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub matched: Match,
    pub form: SententialForm,
}

/// A replayable derivation: each step names the rule and offset used and
/// records the form it produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTrace {
    pub start: SententialForm,
    pub steps: Vec<TraceStep>,
}

impl DerivationTrace {
    pub fn empty(start: SententialForm) -> Self {
        DerivationTrace {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> &SententialForm {
        self.steps.last().map_or(&self.start, |s| &s.form)
    }

    /// All forms in order, starting with `start`.
    pub fn forms(&self) -> impl Iterator<Item = &SententialForm> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.form))
    }

    pub fn max_form_len(&self) -> usize {
        self.forms().map(|f| f.len()).max().unwrap_or(0)
    }

    /// Re-applies every recorded match and checks the recorded forms.
    pub fn replay(&self, g: &Grammar) -> Result<(), Error> {
        let mut current = self.start.clone();
        for (i, step) in self.steps.iter().enumerate() {
            let next = apply_rule(g, &current, step.matched).map_err(|_| Error::InvalidTrace(i))?;
            if next != step.form {
                return Err(Error::InvalidTrace(i));
            }
            current = next;
        }
        Ok(())
    }

    /// Appends `m` applied to the current end form.
    pub fn push(&mut self, g: &Grammar, m: Match) -> Result<(), Error> {
        let next = apply_rule(g, self.end(), m)?;
        self.steps.push(TraceStep {
            matched: m,
            form: next,
        });
        Ok(())
    }

    /// Appends `other`, whose start must equal this trace's end.
    pub fn extend(&mut self, other: DerivationTrace) -> Result<(), Error> {
        if &other.start != self.end() {
            return Err(Error::InvalidTrace(self.steps.len()));
        }
        self.steps.extend(other.steps);
        Ok(())
    }
}

/// Limits for every search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_steps: usize,
    pub max_form_len: usize,
    pub max_word_len: usize,
}

impl SearchBudget {
    pub const DEFAULT_MAX_STEPS: usize = 256;

    /// Defaults for words up to `max_word_len`: forms up to
    /// `2 * max_word_len + 4` symbols and [`Self::DEFAULT_MAX_STEPS`] steps.
    pub fn for_word_len(max_word_len: usize) -> Self {
        SearchBudget {
            max_steps: Self::DEFAULT_MAX_STEPS,
            max_form_len: 2 * max_word_len + 4,
            max_word_len,
        }
    }

    pub fn new(max_steps: usize, max_form_len: usize, max_word_len: usize) -> Self {
        SearchBudget {
            max_steps,
            max_form_len,
            max_word_len,
        }
    }

    /// Componentwise order.
    pub fn fits_within(&self, other: &SearchBudget) -> bool {
        self.max_steps <= other.max_steps
            && self.max_form_len <= other.max_form_len
            && self.max_word_len <= other.max_word_len
    }
}

type Id = u32;

fn is_subsequence(small: &[Id], big: &[Id]) -> bool {
    let mut rest = big.iter();
    small.iter().all(|s| rest.any(|b| b == s))
}

/// A grammar with interned symbols and rules indexed by their first symbol.
pub(crate) struct Compiled {
    ids: HashMap<Symbol, Id>,
    symbols: Vec<Symbol>,
    terminal: Vec<bool>,
    lhs: Vec<Vec<Id>>,
    output: Vec<Vec<Id>>,
    by_first: HashMap<Id, Vec<usize>>,
    /// No rule lowers the number of terminals in a form.
    terminals_never_shrink: bool,
    /// Every rule's output contains the terminals of its left-hand side
    /// as a subsequence, so the terminals of a form only ever gain
    /// insertions.
    terminals_persist: bool,
}

impl Compiled {
    pub(crate) fn new(grammar: &Grammar) -> Self {
        let mut c = Compiled {
            ids: HashMap::new(),
            symbols: Vec::new(),
            terminal: Vec::new(),
            lhs: Vec::new(),
            output: Vec::new(),
            by_first: HashMap::new(),
            terminals_never_shrink: true,
            terminals_persist: true,
        };
        for (_, sym) in grammar.symbol_table() {
            c.intern(&sym);
        }
        for (i, rule) in grammar.rules().iter().enumerate() {
            let lhs = c.encode(&rule.lhs());
            let out = c.encode(&rule.output);
            let (tl, to) = (c.terminals_of(&lhs), c.terminals_of(&out));
            c.terminals_never_shrink &= to.len() >= tl.len();
            c.terminals_persist &= is_subsequence(&tl, &to);
            c.by_first.entry(lhs[0]).or_default().push(i);
            c.lhs.push(lhs);
            c.output.push(out);
        }
        c
    }

    fn intern(&mut self, sym: &Symbol) -> Id {
        if let Some(&id) = self.ids.get(sym) {
            return id;
        }
        let id = self.symbols.len() as Id;
        self.ids.insert(sym.clone(), id);
        self.symbols.push(sym.clone());
        self.terminal.push(sym.is_terminal());
        id
    }

    pub(crate) fn encode(&mut self, form: &[Symbol]) -> Vec<Id> {
        form.iter().map(|s| self.intern(s)).collect()
    }

    pub(crate) fn decode(&self, form: &[Id]) -> SententialForm {
        form.iter().map(|&s| self.symbols[s as usize].clone()).collect()
    }

    fn terminals_of(&self, form: &[Id]) -> Vec<Id> {
        form.iter().copied().filter(|&s| self.terminal[s as usize]).collect()
    }

    fn terminal_count(&self, form: &[Id]) -> usize {
        form.iter().filter(|&&s| self.terminal[s as usize]).count()
    }

    fn matches_in(&self, form: &[Id], mut visit: impl FnMut(Match)) {
        for position in 0..form.len() {
            if let Some(rules) = self.by_first.get(&form[position]) {
                for &rule_index in rules {
                    if form[position..].starts_with(&self.lhs[rule_index]) {
                        visit(Match {
                            rule_index,
                            position,
                        });
                    }
                }
            }
        }
    }

    fn rewrite(&self, form: &[Id], m: Match) -> Vec<Id> {
        let lhs_len = self.lhs[m.rule_index].len();
        let out = &self.output[m.rule_index];
        let mut next = Vec::with_capacity(form.len() - lhs_len + out.len());
        next.extend_from_slice(&form[..m.position]);
        next.extend_from_slice(out);
        next.extend_from_slice(&form[m.position + lhs_len..]);
        next
    }

    /// Limits for a search towards `target`, or for enumeration of words up
    /// to `max_word_len` when there is no target. Terminal pruning is added
    /// only where the grammar makes it exact.
    fn limits(&self, budget: &SearchBudget, target: Option<&[Id]>) -> Limits {
        let max_terminals = match target {
            Some(t) => self.terminal_count(t),
            None => budget.max_word_len,
        };
        Limits {
            max_steps: budget.max_steps,
            max_form_len: budget.max_form_len,
            max_terminals: self.terminals_never_shrink.then_some(max_terminals),
            terminal_pattern: target
                .filter(|_| self.terminals_persist)
                .map(|t| self.terminals_of(t)),
        }
    }

    fn admissible(&self, form: &[Id], limits: &Limits) -> bool {
        if form.len() > limits.max_form_len {
            return false;
        }
        if let Some(cap) = limits.max_terminals {
            if self.terminal_count(form) > cap {
                return false;
            }
        }
        match &limits.terminal_pattern {
            Some(pattern) => is_subsequence(&self.terminals_of(form), pattern),
            None => true,
        }
    }
}

struct Limits {
    max_steps: usize,
    max_form_len: usize,
    max_terminals: Option<usize>,
    /// Terminals of the target, when every reachable form's terminals must
    /// be a subsequence of them.
    terminal_pattern: Option<Vec<Id>>,
}

impl Limits {
    fn unpruned(max_steps: usize, max_form_len: usize) -> Self {
        Limits {
            max_steps,
            max_form_len,
            max_terminals: None,
            terminal_pattern: None,
        }
    }
}

/// The explored part of the rewrite graph, in breadth-first order. Node
/// `i` is the `i`-th form of `forms`.
struct Exploration {
    forms: IndexSet<Box<[Id]>>,
    parent: Vec<Option<(usize, Match)>>,
    depth: Vec<usize>,
}

impl Exploration {
    fn form(&self, node: usize) -> &[Id] {
        &self.forms[node]
    }

    fn trace(&self, c: &Compiled, node: usize) -> DerivationTrace {
        let mut path = Vec::new();
        let mut at = node;
        while let Some((prev, m)) = self.parent[at] {
            path.push((m, at));
            at = prev;
        }
        path.reverse();
        DerivationTrace {
            start: c.decode(self.form(at)),
            steps: path
                .into_iter()
                .map(|(m, n)| TraceStep {
                    matched: m,
                    form: c.decode(self.form(n)),
                })
                .collect(),
        }
    }
}

/// Breadth-first search from `start`. Stops early when `target` is reached
/// and returns its node.
fn explore(
    c: &Compiled,
    start: Vec<Id>,
    limits: &Limits,
    target: Option<&[Id]>,
) -> (Exploration, Option<usize>) {
    let mut ex = Exploration {
        forms: IndexSet::new(),
        parent: vec![None],
        depth: vec![0],
    };
    let at_target = target == Some(start.as_slice());
    ex.forms.insert(start.into_boxed_slice());
    if at_target {
        return (ex, Some(0));
    }
    let mut head = 0;
    while head < ex.forms.len() {
        let node = head;
        head += 1;
        let depth = ex.depth[node];
        if depth >= limits.max_steps {
            continue;
        }
        let form = ex.forms[node].clone();
        let mut found = None;
        c.matches_in(&form, |m| {
            if found.is_some() {
                return;
            }
            let next = c.rewrite(&form, m);
            if !c.admissible(&next, limits) {
                return;
            }
            let hit = target == Some(next.as_slice());
            let (id, fresh) = ex.forms.insert_full(next.into_boxed_slice());
            if !fresh {
                return;
            }
            if hit {
                found = Some(id);
            }
            ex.parent.push(Some((node, m)));
            ex.depth.push(depth + 1);
        });
        if found.is_some() {
            return (ex, found);
        }
    }
    (ex, None)
}

/// All occurrences of rule left-hand sides in `form`, ordered by
/// position and then rule index.
pub fn find_matches(g: &Grammar, form: &SententialForm) -> Vec<Match> {
    let mut c = Compiled::new(g);
    let ids = c.encode(form);
    let mut out = Vec::new();
    c.matches_in(&ids, |m| out.push(m));
    out
}

/// Replaces the occurrence named by `m` with the rule's output.
pub fn apply_rule(g: &Grammar, form: &SententialForm, m: Match) -> Result<SententialForm, Error> {
    let invalid = Error::InvalidMatch {
        rule: m.rule_index,
        position: m.position,
    };
    let rule = g.rules().get(m.rule_index).ok_or_else(|| invalid.clone())?;
    let lhs = rule.lhs();
    if m.position + lhs.len() > form.len() || form[m.position..m.position + lhs.len()] != *lhs {
        return Err(invalid);
    }
    let mut next = form[..m.position].to_vec();
    next.extend_from_slice(&rule.output);
    next.extend_from_slice(&form[m.position + lhs.len()..]);
    Ok(next.into())
}

/// The distinct one-step successors of `form`, in canonical order.
pub fn step_successors(g: &Grammar, form: &SententialForm) -> Vec<SententialForm> {
    let mut c = Compiled::new(g);
    let ids = c.encode(form);
    let mut out = BTreeSet::new();
    c.matches_in(&ids, |m| {
        out.insert(c.decode(&c.rewrite(&ids, m)));
    });
    out.into_iter().collect()
}

/// A shortest derivation `from ⇒* to` using at most `max_steps` steps
/// through forms of at most `max_form_len` symbols.
pub fn derives_within(
    g: &Grammar,
    from: &SententialForm,
    to: &SententialForm,
    budget: &SearchBudget,
) -> Option<DerivationTrace> {
    let mut c = Compiled::new(g);
    let start = c.encode(from);
    let target = c.encode(to);
    if target.len() > budget.max_form_len && start != target {
        return None;
    }
    let limits = c.limits(budget, Some(&target));
    let (ex, found) = explore(&c, start, &limits, Some(&target));
    found.map(|node| ex.trace(&c, node))
}

/// A shortest derivation of `word` from the initial nonterminal.
pub fn generates_within(
    g: &Grammar,
    word: &Word,
    budget: &SearchBudget,
) -> Result<Option<DerivationTrace>, Error> {
    if let Some(t) = word.terminals().iter().find(|t| !g.terminals().contains(*t)) {
        return Err(Error::UndeclaredSymbol(t.to_string()));
    }
    Ok(derives_within(g, &g.start_form(), &word.to_form(), budget))
}

/// Words of length at most `max_word_len` generated within the budget,
/// each with a shortest derivation.
pub fn enumerate_derivations(g: &Grammar, budget: &SearchBudget) -> BTreeMap<Word, DerivationTrace> {
    let mut c = Compiled::new(g);
    let start = c.encode(&g.start_form());
    let limits = c.limits(budget, None);
    let (ex, _) = explore(&c, start, &limits, None);
    let mut out = BTreeMap::new();
    for (node, form) in ex.forms.iter().enumerate() {
        if form.len() <= budget.max_word_len && c.terminal_count(form) == form.len() {
            let trace = ex.trace(&c, node);
            let word = trace.end().to_word().expect("all-terminal form");
            out.insert(word, trace);
        }
    }
    out
}

/// Words of length at most `max_word_len` generated within the budget.
pub fn enumerate_language(g: &Grammar, budget: &SearchBudget) -> BTreeSet<Word> {
    enumerate_derivations(g, budget).into_keys().collect()
}

/// Every form reachable from `start` within the budget, with its distance
/// in steps, in breadth-first order.
pub fn reachable_forms(
    g: &Grammar,
    start: &SententialForm,
    max_steps: usize,
    max_form_len: usize,
) -> Vec<(SententialForm, usize)> {
    let mut c = Compiled::new(g);
    let start = c.encode(start);
    let (ex, _) = explore(&c, start, &Limits::unpruned(max_steps, max_form_len), None);
    ex.forms
        .iter()
        .zip(&ex.depth)
        .map(|(f, &d)| (c.decode(f), d))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::Grule;
    use crate::symbol::{NonterminalTag, Terminal};

    fn s() -> NonterminalTag {
        NonterminalTag::named("S").unwrap()
    }

    fn anbn() -> Grammar {
        let form = SententialForm::new(vec![Symbol::t("a"), Symbol::nt(s()), Symbol::t("b")]);
        Grammar::new(
            [Terminal::new("a").unwrap(), Terminal::new("b").unwrap()],
            [s()],
            s(),
            vec![
                Grule::context_free(s(), form),
                Grule::context_free(s(), SententialForm::empty()),
            ],
        )
        .unwrap()
    }

    fn word(s: &str) -> Word {
        Word::from_chars(s).unwrap()
    }

    #[test]
    fn empty_form_has_no_matches() {
        assert!(find_matches(&anbn(), &SententialForm::empty()).is_empty());
    }

    #[test]
    fn successors_of_start() {
        let succ = step_successors(&anbn(), &anbn().start_form());
        assert_eq!(succ.len(), 2);
        assert_eq!(succ[0], SententialForm::empty());
        assert_eq!(succ[1].to_string(), "a S b");
        assert!(step_successors(&anbn(), &word("ab").to_form()).is_empty());
    }

    #[test]
    fn apply_rejects_bad_match() {
        let g = anbn();
        let err = apply_rule(&g, &word("ab").to_form(), Match { rule_index: 0, position: 0 });
        assert!(matches!(err, Err(Error::InvalidMatch { .. })));
        let err = apply_rule(&g, &g.start_form(), Match { rule_index: 7, position: 0 });
        assert!(matches!(err, Err(Error::InvalidMatch { .. })));
    }

    #[test]
    fn erasing_rule_empties_form() {
        let g = anbn();
        let out = apply_rule(&g, &g.start_form(), Match { rule_index: 1, position: 0 }).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn reflexive_derivation_has_no_steps() {
        let g = anbn();
        let f = g.start_form();
        let t = derives_within(&g, &f, &f, &SearchBudget::new(0, 0, 0)).unwrap();
        assert!(t.is_empty());
    }

    #[test]
    fn generates_aabb_in_three_steps() {
        let g = anbn();
        let t = generates_within(&g, &word("aabb"), &SearchBudget::for_word_len(4))
            .unwrap()
            .unwrap();
        assert_eq!(t.len(), 3);
        t.replay(&g).unwrap();
        let t = generates_within(&g, &word(""), &SearchBudget::for_word_len(0))
            .unwrap()
            .unwrap();
        assert_eq!(t.len(), 1);
        assert!(generates_within(&g, &word("abb"), &SearchBudget::for_word_len(3))
            .unwrap()
            .is_none());
        assert!(generates_within(&g, &word("abab"), &SearchBudget::for_word_len(8))
            .unwrap()
            .is_none());
    }

    #[test]
    fn undeclared_terminal_is_an_error() {
        let err = generates_within(&anbn(), &word("c"), &SearchBudget::for_word_len(1));
        assert_eq!(err, Err(Error::UndeclaredSymbol("c".into())));
    }

    #[test]
    fn enumerates_anbn() {
        let words = enumerate_language(&anbn(), &SearchBudget::for_word_len(6));
        let expected: BTreeSet<Word> =
            ["", "ab", "aabb", "aaabbb"].into_iter().map(word).collect();
        assert_eq!(words, expected);
    }

    #[test]
    fn grammar_without_rules_generates_nothing() {
        let g = Grammar::new([], [s()], s(), vec![]).unwrap();
        assert!(enumerate_language(&g, &SearchBudget::for_word_len(4)).is_empty());
    }

    #[test]
    fn step_limit_cuts_enumeration() {
        let words = enumerate_language(&anbn(), &SearchBudget::new(2, 10, 6));
        let expected: BTreeSet<Word> = ["", "ab"].into_iter().map(word).collect();
        assert_eq!(words, expected);
    }
}
