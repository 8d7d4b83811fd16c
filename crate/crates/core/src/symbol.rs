//! Alphabet atoms: terminals, structured nonterminal tags, symbols, and
//! the strings built from them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Reserved token for the empty string in every textual position.
pub const EPSILON_TOKEN: &str = "eps";

fn check_token(token: &str) -> Result<(), Error> {
    if token.is_empty()
        || token.chars().any(char::is_whitespace)
        || token.contains('#')
        || token == EPSILON_TOKEN
        || token == "->"
    {
        return Err(Error::InvalidToken(token.to_string()));
    }
    Ok(())
}

/// A terminal token.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Terminal(String);

impl Terminal {
    pub fn new(token: impl Into<String>) -> Result<Self, Error> {
        let token = token.into();
        check_token(&token)?;
        if token.starts_with('@') {
            return Err(Error::InvalidToken(token));
        }
        Ok(Terminal(token))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Terminal {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        Terminal::new(s)
    }
}

impl From<Terminal> for String {
    fn from(t: Terminal) -> String {
        t.0
    }
}

impl fmt::Display for Terminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Nonterminal identity.
///
/// Constructions never invent names: they wrap the nonterminals of their
/// operands in distinct constructors, so the tags they add can never clash
/// with a user nonterminal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NonterminalTag {
    Named(String),
    /// Nonterminal inherited from the first operand.
    Lift1(Box<NonterminalTag>),
    /// Nonterminal inherited from the second operand.
    Lift2(Box<NonterminalTag>),
    /// The distinguished start symbol of a union or concatenation.
    Fresh,
    /// Stand-in for a terminal inside the first operand's rules.
    Proxy1(Terminal),
    /// Stand-in for a terminal inside the second operand's rules.
    Proxy2(Terminal),
    /// Start symbol of the star grammar.
    StarZ,
    /// Compartment delimiter of the star grammar.
    StarH,
    /// Cleaner of the star grammar.
    StarR,
}

impl NonterminalTag {
    /// A plain named nonterminal. Names starting with `@` are accepted so
    /// that rendered grammars can be read back.
    pub fn named(name: impl Into<String>) -> Result<Self, Error> {
        let name = name.into();
        check_token(&name)?;
        Ok(NonterminalTag::Named(name))
    }

    pub fn lift1(self) -> Self {
        NonterminalTag::Lift1(Box::new(self))
    }

    pub fn lift2(self) -> Self {
        NonterminalTag::Lift2(Box::new(self))
    }

    pub fn is_star_marker(&self) -> bool {
        matches!(
            self,
            NonterminalTag::StarZ | NonterminalTag::StarH | NonterminalTag::StarR
        )
    }

    /// True for a `Named` tag whose name a user could have typed.
    pub fn is_plain(&self) -> bool {
        matches!(self, NonterminalTag::Named(n) if !n.starts_with('@'))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out
    }

    fn render_into(&self, out: &mut String) {
        match self {
            NonterminalTag::Named(n) => out.push_str(n),
            NonterminalTag::Lift1(inner) => {
                out.push_str("@1.");
                inner.render_into(out);
            }
            NonterminalTag::Lift2(inner) => {
                out.push_str("@2.");
                inner.render_into(out);
            }
            NonterminalTag::Fresh => out.push_str("@new"),
            NonterminalTag::Proxy1(t) => {
                out.push_str("@p1.");
                out.push_str(t.as_str());
            }
            NonterminalTag::Proxy2(t) => {
                out.push_str("@p2.");
                out.push_str(t.as_str());
            }
            NonterminalTag::StarZ => out.push_str("@Z"),
            NonterminalTag::StarH => out.push_str("@H"),
            NonterminalTag::StarR => out.push_str("@R"),
        }
    }
}

impl fmt::Display for NonterminalTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Symbol {
    Terminal(Terminal),
    Nonterminal(NonterminalTag),
}

impl Symbol {
    pub fn t(token: &str) -> Self {
        Symbol::Terminal(Terminal::new(token).expect("valid terminal token"))
    }

    pub fn nt(tag: NonterminalTag) -> Self {
        Symbol::Nonterminal(tag)
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, Symbol::Terminal(_))
    }

    pub fn as_terminal(&self) -> Option<&Terminal> {
        match self {
            Symbol::Terminal(t) => Some(t),
            Symbol::Nonterminal(_) => None,
        }
    }

    pub fn as_nonterminal(&self) -> Option<&NonterminalTag> {
        match self {
            Symbol::Nonterminal(n) => Some(n),
            Symbol::Terminal(_) => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Symbol::Terminal(t) => t.0.clone(),
            Symbol::Nonterminal(n) => n.render(),
        }
    }
}

impl From<Terminal> for Symbol {
    fn from(t: Terminal) -> Self {
        Symbol::Terminal(t)
    }
}

impl From<NonterminalTag> for Symbol {
    fn from(n: NonterminalTag) -> Self {
        Symbol::Nonterminal(n)
    }
}

// Canonical order: rendered text first; structure breaks ties between
// distinct tags that render alike.
impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.render().cmp(&other.render()).then_with(|| match (self, other) {
            (Symbol::Terminal(a), Symbol::Terminal(b)) => a.cmp(b),
            (Symbol::Terminal(_), Symbol::Nonterminal(_)) => Ordering::Less,
            (Symbol::Nonterminal(_), Symbol::Terminal(_)) => Ordering::Greater,
            (Symbol::Nonterminal(a), Symbol::Nonterminal(b)) => a.cmp(b),
        })
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A string of symbols. The empty form is the empty string.
///
/// Forms order by length first, then lexicographically by rendered symbol.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SententialForm(Vec<Symbol>);

impl SententialForm {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        SententialForm(symbols)
    }

    pub fn empty() -> Self {
        SententialForm(Vec::new())
    }

    pub fn single(symbol: impl Into<Symbol>) -> Self {
        SententialForm(vec![symbol.into()])
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn is_all_terminal(&self) -> bool {
        self.0.iter().all(Symbol::is_terminal)
    }

    /// The terminal word spelled by this form, if it has no nonterminals.
    pub fn to_word(&self) -> Option<Word> {
        self.0
            .iter()
            .map(|s| s.as_terminal().cloned())
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    pub fn concat(&self, other: &SententialForm) -> SententialForm {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        SententialForm(v)
    }

    pub fn reversed(&self) -> SententialForm {
        SententialForm(self.0.iter().rev().cloned().collect())
    }

    pub fn tokens(&self) -> Vec<String> {
        self.0.iter().map(Symbol::render).collect()
    }
}

impl Deref for SententialForm {
    type Target = [Symbol];
    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for SententialForm {
    fn from(v: Vec<Symbol>) -> Self {
        SententialForm(v)
    }
}

impl FromIterator<Symbol> for SententialForm {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        SententialForm(iter.into_iter().collect())
    }
}

impl Ord for SententialForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for SententialForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SententialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tokens(f, self.0.iter())
    }
}

/// A string of terminals. Ordered by length, then lexicographically.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Terminal>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Splits a string into single-character terminals.
    pub fn from_chars(s: &str) -> Result<Self, Error> {
        s.chars()
            .map(|c| Terminal::new(c.to_string()))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    /// Parses whitespace-separated tokens; a lone `eps` is the empty word.
    pub fn from_tokens(s: &str) -> Result<Self, Error> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        if tokens == [EPSILON_TOKEN] {
            return Ok(Word::empty());
        }
        tokens
            .into_iter()
            .map(Terminal::new)
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terminals(&self) -> &[Terminal] {
        &self.0
    }

    pub fn to_form(&self) -> SententialForm {
        self.0.iter().cloned().map(Symbol::Terminal).collect()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().cloned().collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tokens(f, self.0.iter())
    }
}

fn write_tokens<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    mut items: impl Iterator<Item = T>,
) -> fmt::Result {
    match items.next() {
        None => f.write_str(EPSILON_TOKEN),
        Some(first) => {
            write!(f, "{first}")?;
            for item in items {
                write!(f, " {item}")?;
            }
            Ok(())
        }
    }
}
