//! Rewrite rules and validated grammars.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::Error;
use crate::symbol::{NonterminalTag, SententialForm, Symbol, Terminal};

/// A rewrite rule `left N right -> output`.
///
/// The left-hand side is stored split around one designated nonterminal,
/// so every rule has a nonterminal on its left by construction. Which
/// nonterminal is designated does not affect the rewrite relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grule {
    pub input_left: SententialForm,
    pub input_nt: NonterminalTag,
    pub input_right: SententialForm,
    pub output: SententialForm,
}

impl Grule {
    pub fn new(
        input_left: SententialForm,
        input_nt: NonterminalTag,
        input_right: SententialForm,
        output: SententialForm,
    ) -> Self {
        Grule {
            input_left,
            input_nt,
            input_right,
            output,
        }
    }

    /// A context-free rule `head -> output`.
    pub fn context_free(head: NonterminalTag, output: SententialForm) -> Self {
        Grule::new(SententialForm::empty(), head, SententialForm::empty(), output)
    }

    /// Builds a rule from a flat left-hand side, designating its leftmost
    /// nonterminal.
    pub fn designate(lhs: SententialForm, rhs: SententialForm) -> Result<Self, Error> {
        let at = lhs
            .iter()
            .position(|s| !s.is_terminal())
            .ok_or(Error::NoNonterminalOnLhs)?;
        Grule::designate_at(lhs, rhs, at)
    }

    /// Builds a rule designating the nonterminal at index `at` of `lhs`.
    pub fn designate_at(lhs: SententialForm, rhs: SententialForm, at: usize) -> Result<Self, Error> {
        let mut symbols = lhs.into_symbols();
        if at >= symbols.len() {
            return Err(Error::NoNonterminalOnLhs);
        }
        let right: Vec<Symbol> = symbols.split_off(at + 1);
        let nt = match symbols.pop() {
            Some(Symbol::Nonterminal(n)) => n,
            _ => return Err(Error::NoNonterminalOnLhs),
        };
        Ok(Grule::new(symbols.into(), nt, right.into(), rhs))
    }

    pub fn lhs(&self) -> SententialForm {
        let mut v = Vec::with_capacity(self.lhs_len());
        v.extend_from_slice(&self.input_left);
        v.push(Symbol::Nonterminal(self.input_nt.clone()));
        v.extend_from_slice(&self.input_right);
        v.into()
    }

    pub fn lhs_len(&self) -> usize {
        self.input_left.len() + 1 + self.input_right.len()
    }

    pub fn is_context_free(&self) -> bool {
        self.input_left.is_empty() && self.input_right.is_empty()
    }

    /// Every symbol in all four fields.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.input_left
            .iter()
            .cloned()
            .chain(std::iter::once(Symbol::Nonterminal(self.input_nt.clone())))
            .chain(self.input_right.iter().cloned())
            .chain(self.output.iter().cloned())
    }

    /// Applies `f` to every symbol, keeping the designated nonterminal in
    /// place. `f` must send nonterminals to nonterminals.
    pub(crate) fn map_symbols(&self, f: impl Fn(&Symbol) -> Symbol) -> Grule {
        let map_form = |form: &SententialForm| form.iter().map(&f).collect::<SententialForm>();
        let nt = match f(&Symbol::Nonterminal(self.input_nt.clone())) {
            Symbol::Nonterminal(n) => n,
            Symbol::Terminal(_) => unreachable!("symbol map sent a nonterminal to a terminal"),
        };
        Grule::new(
            map_form(&self.input_left),
            nt,
            map_form(&self.input_right),
            map_form(&self.output),
        )
    }
}

impl fmt::Display for Grule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs(), self.output)
    }
}

/// A general grammar over explicit finite alphabets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    terminals: BTreeSet<Terminal>,
    nonterminals: BTreeSet<NonterminalTag>,
    initial: NonterminalTag,
    rules: Vec<Grule>,
}

impl Grammar {
    /// Validates and builds a grammar.
    pub fn new(
        terminals: impl IntoIterator<Item = Terminal>,
        nonterminals: impl IntoIterator<Item = NonterminalTag>,
        initial: NonterminalTag,
        rules: Vec<Grule>,
    ) -> Result<Self, Error> {
        let g = Grammar {
            terminals: terminals.into_iter().collect(),
            nonterminals: nonterminals.into_iter().collect(),
            initial,
            rules,
        };
        g.validate()?;
        Ok(g)
    }

    /// For constructions whose output is valid whenever their inputs are.
    pub(crate) fn assemble(
        terminals: BTreeSet<Terminal>,
        nonterminals: BTreeSet<NonterminalTag>,
        initial: NonterminalTag,
        rules: Vec<Grule>,
    ) -> Self {
        let g = Grammar::assemble_unchecked(terminals, nonterminals, initial, rules);
        debug_assert_eq!(g.validate(), Ok(()));
        g
    }

    pub(crate) fn assemble_unchecked(
        terminals: BTreeSet<Terminal>,
        nonterminals: BTreeSet<NonterminalTag>,
        initial: NonterminalTag,
        rules: Vec<Grule>,
    ) -> Self {
        Grammar {
            terminals,
            nonterminals,
            initial,
            rules,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !self.nonterminals.contains(&self.initial) {
            return Err(Error::InitialNotDeclared(self.initial.render()));
        }
        let mut names: BTreeMap<String, ()> = BTreeMap::new();
        for name in self
            .terminals
            .iter()
            .map(|t| t.as_str().to_string())
            .chain(self.nonterminals.iter().map(NonterminalTag::render))
        {
            if names.insert(name.clone(), ()).is_some() {
                return Err(Error::NameCollision(name));
            }
        }
        for rule in &self.rules {
            for sym in rule.symbols() {
                if !self.declares(&sym) {
                    return Err(Error::UndeclaredSymbol(sym.render()));
                }
            }
        }
        Ok(())
    }

    pub fn declares(&self, sym: &Symbol) -> bool {
        match sym {
            Symbol::Terminal(t) => self.terminals.contains(t),
            Symbol::Nonterminal(n) => self.nonterminals.contains(n),
        }
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

    pub fn rules(&self) -> &[Grule] {
        &self.rules
    }

    pub fn start_form(&self) -> SententialForm {
        SententialForm::single(self.initial.clone())
    }

    /// Every declared symbol, keyed by its rendered name.
    pub fn symbol_table(&self) -> BTreeMap<String, Symbol> {
        self.terminals
            .iter()
            .map(|t| (t.as_str().to_string(), Symbol::Terminal(t.clone())))
            .chain(
                self.nonterminals
                    .iter()
                    .map(|n| (n.render(), Symbol::Nonterminal(n.clone()))),
            )
            .collect()
    }
}
