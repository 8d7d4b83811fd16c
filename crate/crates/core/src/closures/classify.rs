//! Shapes of forms derivable in a star grammar.
//!
//! Every form derivable from `Z` in `star_grammar(g)` has one of six
//! shapes, each with side conditions relating its pieces to `g`:
//!
//! 1. `Z x1 # … xm #` with `S ⇒* xi`
//! 2. `R # x1 # … xm #` with `S ⇒* xi`
//! 3. `w1 … wn β R γ # x1 # … xm #` with `wi ∈ L`, `β` terminal,
//!    `S ⇒* βγ` and `S ⇒* xi`
//! 4. a word of `L*`
//! 5. `σ R` (the cleaner stuck at the end)
//! 6. `ω #` with no `Z` or `R` (a delimiter that can never be removed)
//!
//! [`classify_star_form`] checks shapes only; [`verify_star_classification`]
//! checks the side conditions with bounded search.

use std::collections::{BTreeSet, HashMap};

use crate::engine::{derives_within, enumerate_language, SearchBudget};
use crate::grammar::Grammar;
use crate::lifting::Embedding;
use crate::symbol::{NonterminalTag, SententialForm, Symbol, Word};

use super::star_embedding;

/// A decomposition of a star-grammar form. Compartment contents, `γ` and
/// `σ` are given over the base grammar's symbols; `ω` keeps its
/// delimiters and so stays over the star grammar's symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StarClassification {
    /// Case 1.
    Opening { x: Vec<SententialForm> },
    /// Case 2.
    Cleaning { x: Vec<SententialForm> },
    /// Case 3.
    Scanning {
        w: Vec<Word>,
        beta: Word,
        gamma: SententialForm,
        x: Vec<SententialForm>,
    },
    /// Case 4.
    Finished { word: Word },
    /// Case 5.
    StuckCleaner { sigma: SententialForm },
    /// Case 6.
    StuckDelimiter { omega: SententialForm },
}

impl StarClassification {
    pub fn case_number(&self) -> u8 {
        match self {
            StarClassification::Opening { .. } => 1,
            StarClassification::Cleaning { .. } => 2,
            StarClassification::Scanning { .. } => 3,
            StarClassification::Finished { .. } => 4,
            StarClassification::StuckCleaner { .. } => 5,
            StarClassification::StuckDelimiter { .. } => 6,
        }
    }

    /// Reassembles the classified form from the witnesses.
    pub fn recompose(&self, g: &Grammar) -> SententialForm {
        let e = star_embedding(g);
        let z = Symbol::Nonterminal(NonterminalTag::StarZ);
        let r = Symbol::Nonterminal(NonterminalTag::StarR);
        let hash = Symbol::Nonterminal(NonterminalTag::StarH);
        let compartments = |x: &[SententialForm]| -> Vec<Symbol> {
            x.iter()
                .flat_map(|xi| {
                    let mut v = e.lift_string(xi).into_symbols();
                    v.push(hash.clone());
                    v
                })
                .collect()
        };
        let mut out = Vec::new();
        match self {
            StarClassification::Opening { x } => {
                out.push(z);
                out.extend(compartments(x));
            }
            StarClassification::Cleaning { x } => {
                out.extend([r, hash.clone()]);
                out.extend(compartments(x));
            }
            StarClassification::Scanning { w, beta, gamma, x } => {
                for wi in w {
                    out.extend(wi.to_form().into_symbols());
                }
                out.extend(beta.to_form().into_symbols());
                out.push(r);
                out.extend(e.lift_string(gamma).into_symbols());
                out.push(hash.clone());
                out.extend(compartments(x));
            }
            StarClassification::Finished { word } => out.extend(word.to_form().into_symbols()),
            StarClassification::StuckCleaner { sigma } => {
                out.extend(e.lift_string(sigma).into_symbols());
                out.push(r);
            }
            StarClassification::StuckDelimiter { omega } => {
                out.extend(omega.iter().cloned());
                out.push(hash);
            }
        }
        out.into()
    }
}

struct Shapes<'g> {
    g: &'g Grammar,
    e: Embedding,
}

impl Shapes<'_> {
    /// A symbol of the base grammar, sunk back to the base's own naming.
    fn base(&self, s: &Symbol) -> Option<Symbol> {
        match s {
            Symbol::Terminal(_) => Some(s.clone()),
            Symbol::Nonterminal(n) => self
                .e
                .sink_nt(n)
                .filter(|m| self.g.nonterminals().contains(m))
                .map(Symbol::Nonterminal),
        }
    }

    fn base_string(&self, form: &[Symbol]) -> Option<SententialForm> {
        form.iter().map(|s| self.base(s)).collect()
    }

    /// Splits `x1 # x2 # … xm #` into compartments over base symbols.
    fn compartments(&self, form: &[Symbol]) -> Option<Vec<SententialForm>> {
        let mut out = Vec::new();
        let mut rest = form;
        while !rest.is_empty() {
            let end = rest.iter().position(is_hash)?;
            out.push(self.base_string(&rest[..end])?);
            rest = &rest[end + 1..];
        }
        Some(out)
    }
}

fn is_tag(s: &Symbol, tag: &NonterminalTag) -> bool {
    s.as_nonterminal() == Some(tag)
}

fn is_hash(s: &Symbol) -> bool {
    is_tag(s, &NonterminalTag::StarH)
}

fn is_r(s: &Symbol) -> bool {
    is_tag(s, &NonterminalTag::StarR)
}

fn is_z(s: &Symbol) -> bool {
    is_tag(s, &NonterminalTag::StarZ)
}

/// Every case whose shape matches `form`, in case order.
///
/// In case 3 the terminal prefix is reported whole as `β` with no `wi`;
/// splitting it into words is left to verification.
pub fn classify_star_form(g: &Grammar, form: &SententialForm) -> Vec<StarClassification> {
    let shapes = Shapes {
        g,
        e: star_embedding(g),
    };
    let mut out = Vec::new();

    if form.first().is_some_and(is_z) {
        if let Some(x) = shapes.compartments(&form[1..]) {
            out.push(StarClassification::Opening { x });
        }
    }

    if form.len() >= 2 && is_r(&form[0]) && is_hash(&form[1]) {
        if let Some(x) = shapes.compartments(&form[2..]) {
            out.push(StarClassification::Cleaning { x });
        }
    }

    let r_positions: Vec<usize> = form
        .iter()
        .enumerate()
        .filter_map(|(i, s)| is_r(s).then_some(i))
        .collect();
    if let [p] = r_positions[..] {
        let beta = SententialForm::new(form[..p].to_vec()).to_word();
        let rest = &form[p + 1..];
        if let (Some(beta), Some(q)) = (beta, rest.iter().position(is_hash)) {
            let gamma = shapes.base_string(&rest[..q]);
            let x = shapes.compartments(&rest[q + 1..]);
            if let (Some(gamma), Some(x)) = (gamma, x) {
                out.push(StarClassification::Scanning {
                    w: Vec::new(),
                    beta,
                    gamma,
                    x,
                });
            }
        }
    }

    if let Some(word) = form.to_word() {
        out.push(StarClassification::Finished { word });
    }

    if let Some((last, sigma)) = form.split_last() {
        if is_r(last) {
            if let Some(sigma) = shapes.base_string(sigma) {
                out.push(StarClassification::StuckCleaner { sigma });
            }
        }
        if is_hash(last) && sigma.iter().all(|s| is_hash(s) || shapes.base(s).is_some()) {
            out.push(StarClassification::StuckDelimiter {
                omega: sigma.to_vec().into(),
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    /// All side conditions hold. For case 3 the witness carries the split
    /// of the terminal prefix that was found.
    Verified(StarClassification),
    Unverified,
}

impl Verification {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verification::Verified(_))
    }
}

/// Bounded membership and derivability checks against the base grammar.
struct Checker<'g> {
    g: &'g Grammar,
    budget: SearchBudget,
    language: Option<(usize, BTreeSet<Word>)>,
}

impl Checker<'_> {
    fn derivable(&self, x: &SententialForm) -> bool {
        derives_within(self.g, &self.g.start_form(), x, &self.budget).is_some()
    }

    fn language_upto(&mut self, len: usize) -> &BTreeSet<Word> {
        let stale = self.language.as_ref().is_none_or(|(have, _)| *have < len);
        if stale {
            let len = len.max(self.budget.max_word_len);
            let budget = SearchBudget {
                max_word_len: len,
                max_form_len: self.budget.max_form_len.max(len),
                ..self.budget
            };
            self.language = Some((len, enumerate_language(self.g, &budget)));
        }
        &self.language.as_ref().expect("filled above").1
    }

    /// Splits `word` into nonempty words of the base language.
    fn split_into_words(&mut self, word: &Word) -> Option<Vec<Word>> {
        let language = self.language_upto(word.len()).clone();
        let n = word.len();
        // best[i]: a split of word[..i]
        let mut best: HashMap<usize, Vec<Word>> = HashMap::new();
        best.insert(0, Vec::new());
        for end in 1..=n {
            for start in 0..end {
                if let Some(prefix) = best.get(&start) {
                    let piece = Word(word.terminals()[start..end].to_vec());
                    if language.contains(&piece) {
                        let mut split = prefix.clone();
                        split.push(piece);
                        best.insert(end, split);
                        break;
                    }
                }
            }
        }
        best.remove(&n)
    }
}

/// Checks the side conditions of `c` within `budget`.
pub fn verify_star_classification(
    g: &Grammar,
    c: &StarClassification,
    budget: &SearchBudget,
) -> Verification {
    let mut checker = Checker {
        g,
        budget: *budget,
        language: None,
    };
    let verified = |ok: bool| {
        if ok {
            Verification::Verified(c.clone())
        } else {
            Verification::Unverified
        }
    };
    match c {
        StarClassification::Opening { x } | StarClassification::Cleaning { x } => {
            verified(x.iter().all(|xi| checker.derivable(xi)))
        }
        StarClassification::Scanning { w, beta, gamma, x } => {
            if !x.iter().all(|xi| checker.derivable(xi)) {
                return Verification::Unverified;
            }
            let prefix = w.iter().fold(Word::empty(), |acc, wi| acc.concat(wi)).concat(beta);
            for cut in 0..=prefix.len() {
                let head = Word(prefix.terminals()[..cut].to_vec());
                let beta = Word(prefix.terminals()[cut..].to_vec());
                if !checker.derivable(&beta.to_form().concat(gamma)) {
                    continue;
                }
                if let Some(w) = checker.split_into_words(&head) {
                    return Verification::Verified(StarClassification::Scanning {
                        w,
                        beta,
                        gamma: gamma.clone(),
                        x: x.clone(),
                    });
                }
            }
            Verification::Unverified
        }
        StarClassification::Finished { word } => verified(checker.split_into_words(word).is_some()),
        StarClassification::StuckCleaner { .. } | StarClassification::StuckDelimiter { .. } => {
            verified(true)
        }
    }
}
