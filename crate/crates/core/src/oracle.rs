//! Language operations on finite word sets, and differential checks of
//! the closure constructions against them.
//!
//! A [`WordSet`] remembers the length bound it was produced under, so two
//! sets are only ever combined when the result is complete up to its own
//! bound.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::closures::{
    concat_grammar, concat_trace, naive_concat_grammar, naive_concat_trace, reversal_grammar,
    reversal_trace, star_grammar, star_trace, union_grammar, union_trace, Side,
};
use crate::engine::{enumerate_derivations, enumerate_language, DerivationTrace, SearchBudget};
use crate::error::Error;
use crate::grammar::Grammar;
use crate::symbol::Word;

/// Every word of a language up to length `max_len`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordSet {
    words: BTreeSet<Word>,
    max_len: usize,
}

impl WordSet {
    /// Words longer than `max_len` are dropped.
    pub fn new(words: impl IntoIterator<Item = Word>, max_len: usize) -> Self {
        WordSet {
            words: words.into_iter().filter(|w| w.len() <= max_len).collect(),
            max_len,
        }
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// The same set cut down to a smaller bound.
    pub fn truncate(&self, max_len: usize) -> WordSet {
        WordSet::new(self.words.iter().cloned(), max_len.min(self.max_len))
    }
}

pub fn lang_union(a: &WordSet, b: &WordSet) -> Result<WordSet, Error> {
    if a.max_len != b.max_len {
        return Err(Error::BoundMismatch(a.max_len, b.max_len));
    }
    Ok(WordSet::new(a.words.union(&b.words).cloned(), a.max_len))
}

fn require_bound(set: &WordSet, need: usize) -> Result<(), Error> {
    if set.max_len < need {
        return Err(Error::InsufficientInputBound {
            have: set.max_len,
            need,
        });
    }
    Ok(())
}

/// `{ ab : a ∈ A, b ∈ B, |ab| ≤ max_len }`.
pub fn lang_concat_upto(a: &WordSet, b: &WordSet, max_len: usize) -> Result<WordSet, Error> {
    require_bound(a, max_len)?;
    require_bound(b, max_len)?;
    let mut out = BTreeSet::new();
    for x in &a.words {
        for y in &b.words {
            if x.len() + y.len() <= max_len {
                out.insert(x.concat(y));
            }
        }
    }
    Ok(WordSet::new(out, max_len))
}

/// Joins of finite sequences of words of `A`, up to `max_len`.
pub fn lang_star_upto(a: &WordSet, max_len: usize) -> Result<WordSet, Error> {
    require_bound(a, max_len)?;
    let pieces: Vec<&Word> = a.words.iter().filter(|w| !w.is_empty()).collect();
    let mut reached = BTreeSet::from([Word::empty()]);
    let mut frontier = vec![Word::empty()];
    while let Some(w) = frontier.pop() {
        for p in &pieces {
            if w.len() + p.len() <= max_len {
                let next = w.concat(p);
                if reached.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
    }
    Ok(WordSet::new(reached, max_len))
}

pub fn lang_reverse(a: &WordSet) -> WordSet {
    WordSet::new(a.words.iter().map(Word::reversed), a.max_len)
}

/// Returns `(s ++ join(l ++ s for l in L), join(s ++ l for l in L) ++ s)`.
/// The two sequences are always equal.
pub fn append_join_append<T: Clone>(s: &[T], lists: &[Vec<T>]) -> (Vec<T>, Vec<T>) {
    let mut left = s.to_vec();
    for l in lists {
        left.extend_from_slice(l);
        left.extend_from_slice(s);
    }
    let mut right = Vec::new();
    for l in lists {
        right.extend_from_slice(s);
        right.extend_from_slice(l);
    }
    right.extend_from_slice(s);
    (left, right)
}

/// A closure construction together with its operands.
#[derive(Debug, Clone, Copy)]
pub enum ClosureCheck<'a> {
    Union(&'a Grammar, &'a Grammar),
    Concat(&'a Grammar, &'a Grammar),
    /// The textbook concatenation, expected to fail on operands with
    /// terminals in rule left-hand sides.
    ConcatNaive(&'a Grammar, &'a Grammar),
    Star(&'a Grammar),
    Reverse(&'a Grammar),
}

impl ClosureCheck<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            ClosureCheck::Union(..) => "union",
            ClosureCheck::Concat(..) => "concat",
            ClosureCheck::ConcatNaive(..) => "concat-naive",
            ClosureCheck::Star(_) => "star",
            ClosureCheck::Reverse(_) => "reverse",
        }
    }

    pub fn operands(&self) -> Vec<&Grammar> {
        match *self {
            ClosureCheck::Union(a, b)
            | ClosureCheck::Concat(a, b)
            | ClosureCheck::ConcatNaive(a, b) => vec![a, b],
            ClosureCheck::Star(a) | ClosureCheck::Reverse(a) => vec![a],
        }
    }

    pub fn construct(&self) -> Grammar {
        match *self {
            ClosureCheck::Union(a, b) => union_grammar(a, b),
            ClosureCheck::Concat(a, b) => concat_grammar(a, b),
            ClosureCheck::ConcatNaive(a, b) => naive_concat_grammar(a, b),
            ClosureCheck::Star(a) => star_grammar(a),
            ClosureCheck::Reverse(a) => reversal_grammar(a),
        }
    }
}

/// Outcome of comparing a construction's enumeration with the oracle set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub operation: String,
    pub max_word_len: usize,
    pub operand_budget: SearchBudget,
    pub operand_sizes: Vec<usize>,
    pub construction_budget: SearchBudget,
    pub oracle: WordSet,
    pub construction: WordSet,
    pub equal: bool,
    /// Generated by the construction but outside the oracle set. Each has
    /// a derivation, so these are confirmed over-generation.
    pub construction_only: Vec<Word>,
    /// In the oracle set but not found by the construction; may be a
    /// budget shortfall rather than a missing word.
    pub oracle_only: Vec<Word>,
}

impl ClosureReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for ClosureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check {} (max word length {})", self.operation, self.max_word_len)?;
        let sizes: Vec<String> = self.operand_sizes.iter().map(|n| n.to_string()).collect();
        writeln!(f, "operand words: {}", sizes.join(", "))?;
        writeln!(f, "oracle words: {}", self.oracle.len())?;
        writeln!(
            f,
            "construction words: {} (steps <= {}, form length <= {})",
            self.construction.len(),
            self.construction_budget.max_steps,
            self.construction_budget.max_form_len
        )?;
        for w in &self.construction_only {
            writeln!(f, "construction-only (confirmed): {w}")?;
        }
        for w in &self.oracle_only {
            writeln!(f, "oracle-only (possibly budget): {w}")?;
        }
        write!(f, "result: {}", if self.equal { "equal" } else { "mismatch" })
    }
}

/// Shortest derivation per word, for one operand.
type Derivations = BTreeMap<Word, DerivationTrace>;

/// Budget large enough to replay `traces` in the construction: twice
/// their longest length, and forms no shorter than their longest form or
/// the operands' own limit.
fn budget_covering(traces: &[DerivationTrace], operand_budget: &SearchBudget) -> SearchBudget {
    let steps = traces.iter().map(DerivationTrace::len).max().unwrap_or(0);
    let form = traces.iter().map(DerivationTrace::max_form_len).max().unwrap_or(0);
    SearchBudget {
        max_steps: 2 * steps.max(1),
        max_form_len: form.max(operand_budget.max_form_len),
        max_word_len: operand_budget.max_word_len,
    }
}

/// Cheapest `(a, b)` with `a ++ b == w` and both parts derivable.
fn cheapest_split<'d>(w: &Word, a: &'d Derivations, b: &'d Derivations) -> Option<(&'d DerivationTrace, &'d DerivationTrace)> {
    (0..=w.len())
        .filter_map(|cut| {
            let ta = a.get(&Word(w.terminals()[..cut].to_vec()))?;
            let tb = b.get(&Word(w.terminals()[cut..].to_vec()))?;
            Some((ta, tb))
        })
        .min_by_key(|(ta, tb)| ta.len() + tb.len())
}

/// Cheapest split of `w` into nonempty words of `a`, minimising the star
/// construction's cost `Σ (k_i + 2)`.
fn cheapest_pieces(w: &Word, a: &Derivations) -> Option<(Vec<Word>, Vec<DerivationTrace>)> {
    let n = w.len();
    let mut best: Vec<Option<(usize, usize)>> = vec![None; n + 1];
    best[0] = Some((0, 0));
    for end in 1..=n {
        for start in 0..end {
            let Some((cost, _)) = best[start] else { continue };
            if let Some(t) = a.get(&Word(w.terminals()[start..end].to_vec())) {
                let c = cost + t.len() + 2;
                if best[end].is_none_or(|(have, _)| c < have) {
                    best[end] = Some((c, start));
                }
            }
        }
    }
    best[n]?;
    let mut cuts = vec![n];
    let mut at = n;
    while at > 0 {
        at = best[at].expect("reachable").1;
        cuts.push(at);
    }
    cuts.reverse();
    let words: Vec<Word> = cuts
        .windows(2)
        .map(|c| Word(w.terminals()[c[0]..c[1]].to_vec()))
        .collect();
    let traces = words.iter().map(|p| a[p].clone()).collect();
    Some((words, traces))
}

/// Enumerates the operands, applies the set-level operation, enumerates
/// the constructed grammar, and compares.
///
/// Operands are enumerated with [`SearchBudget::for_word_len`]. The
/// construction's budget is derived from explicit derivations of every
/// oracle word in the constructed grammar (built from the operands'
/// shortest derivations), with the step count doubled as slack.
pub fn check_closure(check: ClosureCheck<'_>, max_word_len: usize) -> Result<ClosureReport, Error> {
    let operand_budget = SearchBudget::for_word_len(max_word_len);
    let operands = check.operands();
    let derivations: Vec<Derivations> = operands
        .iter()
        .map(|g| enumerate_derivations(g, &operand_budget))
        .collect();
    let sets: Vec<WordSet> = derivations
        .iter()
        .map(|d| WordSet::new(d.keys().cloned(), max_word_len))
        .collect();

    let oracle = match check {
        ClosureCheck::Union(..) => lang_union(&sets[0], &sets[1])?,
        ClosureCheck::Concat(..) | ClosureCheck::ConcatNaive(..) => {
            lang_concat_upto(&sets[0], &sets[1], max_word_len)?
        }
        ClosureCheck::Star(_) => lang_star_upto(&sets[0], max_word_len)?,
        ClosureCheck::Reverse(_) => lang_reverse(&sets[0]),
    };

    let mut witnesses = Vec::new();
    for w in oracle.words() {
        let trace = match check {
            ClosureCheck::Union(a, b) => match derivations[0].get(w) {
                Some(t) => union_trace(a, b, Side::First, t)?,
                None => union_trace(a, b, Side::Second, &derivations[1][w])?,
            },
            ClosureCheck::Concat(a, b) | ClosureCheck::ConcatNaive(a, b) => {
                let (ta, tb) = cheapest_split(w, &derivations[0], &derivations[1])
                    .expect("oracle word splits");
                if matches!(check, ClosureCheck::Concat(..)) {
                    concat_trace(a, b, ta, tb)?
                } else {
                    naive_concat_trace(a, b, ta, tb)?
                }
            }
            ClosureCheck::Star(a) => {
                let (words, traces) =
                    cheapest_pieces(w, &derivations[0]).expect("oracle word splits");
                star_trace(a, &words, &traces)?
            }
            ClosureCheck::Reverse(a) => reversal_trace(a, &derivations[0][&w.reversed()])?,
        };
        witnesses.push(trace);
    }

    let constructed = check.construct();
    let construction_budget = budget_covering(&witnesses, &operand_budget);
    let construction = WordSet::new(
        enumerate_language(&constructed, &construction_budget),
        max_word_len,
    );
    let construction_only: Vec<Word> = construction
        .words()
        .difference(oracle.words())
        .cloned()
        .collect();
    let oracle_only: Vec<Word> = oracle
        .words()
        .difference(construction.words())
        .cloned()
        .collect();
    Ok(ClosureReport {
        operation: check.name().to_string(),
        max_word_len,
        operand_budget,
        operand_sizes: sets.iter().map(WordSet::len).collect(),
        construction_budget,
        equal: construction_only.is_empty() && oracle_only.is_empty(),
        oracle,
        construction,
        construction_only,
        oracle_only,
    })
}

/// Renders a word set one word per line, `eps` for the empty word.
pub fn render_words(words: &BTreeSet<Word>) -> String {
    let mut out = String::new();
    for w in words {
        writeln!(out, "{w}").expect("write to string");
    }
    out
}
