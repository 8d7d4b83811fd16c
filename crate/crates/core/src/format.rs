//! The `.gram` text format.
//!
//! ```text
//! # comment
//! kind: general          # or cf; optional, general by default
//! terminals: a b
//! nonterminals: S
//! start: S
//! rules:
//! S -> a S b
//! S -> eps
//! ```
//!
//! Left-hand sides may be any string with at least one nonterminal; the
//! leftmost one is designated. Structured nonterminals are written with an
//! `@` sigil (`@1.S`, `@new`, `@p2.a`, `@Z`, ...) and read back as plain
//! names, so a round trip keeps the language but not the tag structure.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::cf::{general_of_cf, CfGrammar};
use crate::error::Error;
use crate::grammar::{Grammar, Grule};
use crate::symbol::{NonterminalTag, SententialForm, Symbol, Terminal, EPSILON_TOKEN};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: undeclared symbol {token}")]
    UndeclaredSymbol { line: usize, token: String },
    #[error("line {line}: left-hand side has no nonterminal")]
    NoNonterminalOnLhs { line: usize },
    #[error("line {line}: rule is not context-free")]
    NotContextFree { line: usize },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: Error },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrammarKind {
    General,
    Cf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedGrammar {
    General(Grammar),
    Cf(CfGrammar),
}

impl ParsedGrammar {
    pub fn kind(&self) -> GrammarKind {
        match self {
            ParsedGrammar::General(_) => GrammarKind::General,
            ParsedGrammar::Cf(_) => GrammarKind::Cf,
        }
    }

    pub fn to_general(&self) -> Grammar {
        match self {
            ParsedGrammar::General(g) => g.clone(),
            ParsedGrammar::Cf(cg) => general_of_cf(cg),
        }
    }
}

#[derive(Default)]
struct Header {
    kind: Option<(usize, GrammarKind)>,
    terminals: Option<(usize, Vec<String>)>,
    nonterminals: Option<(usize, Vec<String>)>,
    start: Option<(usize, String)>,
}

/// Reads a grammar. Line numbers in errors are 1-based.
pub fn parse_grammar(text: &str) -> Result<ParsedGrammar, ParseError> {
    let mut header = Header::default();
    let mut rule_lines: Vec<(usize, &str)> = Vec::new();
    let mut in_rules = false;
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if in_rules {
            rule_lines.push((line_no, line));
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| syntax(line_no, "expected `key: value` or `rules:`"))?;
        let tokens: Vec<String> = value.split_whitespace().map(str::to_string).collect();
        let duplicate = || syntax(line_no, format!("duplicate `{}:`", key.trim()));
        match key.trim() {
            "kind" => {
                let kind = match tokens.as_slice() {
                    [k] if k == "general" => GrammarKind::General,
                    [k] if k == "cf" => GrammarKind::Cf,
                    _ => return Err(syntax(line_no, "kind must be `general` or `cf`")),
                };
                if header.kind.replace((line_no, kind)).is_some() {
                    return Err(duplicate());
                }
            }
            "terminals" => {
                if header.terminals.replace((line_no, tokens)).is_some() {
                    return Err(duplicate());
                }
            }
            "nonterminals" => {
                if header.nonterminals.replace((line_no, tokens)).is_some() {
                    return Err(duplicate());
                }
            }
            "start" => {
                let [name] = <[String; 1]>::try_from(tokens)
                    .map_err(|_| syntax(line_no, "start takes exactly one nonterminal"))?;
                if header.start.replace((line_no, name)).is_some() {
                    return Err(duplicate());
                }
            }
            "rules" if tokens.is_empty() => in_rules = true,
            other => return Err(syntax(line_no, format!("unknown header `{other}:`"))),
        }
    }

    let (t_line, t_names) = header.terminals.unwrap_or((0, Vec::new()));
    let (n_line, n_names) = header.nonterminals.unwrap_or((0, Vec::new()));
    let (s_line, start) = header
        .start
        .ok_or_else(|| syntax(last_line, "missing `start:`"))?;
    let kind = header.kind.map_or(GrammarKind::General, |(_, k)| k);

    let invalid = |line| move |source| ParseError::Invalid { line, source };
    let terminals = t_names
        .iter()
        .map(|t| Terminal::new(t.as_str()))
        .collect::<Result<BTreeSet<_>, _>>()
        .map_err(invalid(t_line))?;
    let nonterminals = n_names
        .iter()
        .map(|n| NonterminalTag::named(n.as_str()))
        .collect::<Result<BTreeSet<_>, _>>()
        .map_err(invalid(n_line))?;
    let initial = NonterminalTag::named(start).map_err(invalid(s_line))?;

    let resolve = |line: usize, tokens: &[&str]| -> Result<SententialForm, ParseError> {
        if tokens == [EPSILON_TOKEN] {
            return Ok(SententialForm::empty());
        }
        tokens
            .iter()
            .map(|&tok| {
                if tok == EPSILON_TOKEN {
                    return Err(syntax(line, "`eps` must stand alone"));
                }
                if let Some(n) = nonterminals.iter().find(|n| n.render() == tok) {
                    return Ok(Symbol::Nonterminal(n.clone()));
                }
                if let Some(t) = terminals.iter().find(|t| t.as_str() == tok) {
                    return Ok(Symbol::Terminal(t.clone()));
                }
                Err(ParseError::UndeclaredSymbol {
                    line,
                    token: tok.to_string(),
                })
            })
            .collect()
    };

    let mut rules = Vec::new();
    let mut rule_line_numbers = Vec::new();
    for (line, text) in rule_lines {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let arrow = match tokens.iter().filter(|&&t| t == "->").count() {
            1 => tokens.iter().position(|&t| t == "->").expect("counted"),
            _ => return Err(syntax(line, "expected exactly one `->`")),
        };
        let (lhs, rhs) = (&tokens[..arrow], &tokens[arrow + 1..]);
        if lhs.is_empty() || rhs.is_empty() {
            return Err(syntax(line, "empty side; write `eps` for the empty string"));
        }
        let lhs = resolve(line, lhs)?;
        let rhs = resolve(line, rhs)?;
        let rule = Grule::designate(lhs, rhs).map_err(|_| ParseError::NoNonterminalOnLhs { line })?;
        if kind == GrammarKind::Cf && !rule.is_context_free() {
            return Err(ParseError::NotContextFree { line });
        }
        rules.push(rule);
        rule_line_numbers.push(line);
    }

    let g = Grammar::new(terminals, nonterminals, initial, rules).map_err(|e| {
        let line = match e {
            Error::InitialNotDeclared(_) => s_line,
            _ => n_line.max(t_line),
        };
        ParseError::Invalid { line, source: e }
    })?;
    Ok(match kind {
        GrammarKind::General => ParsedGrammar::General(g),
        GrammarKind::Cf => ParsedGrammar::Cf(CfGrammar::try_from(&g).map_err(|e| match e {
            Error::NotContextFree(i) => ParseError::NotContextFree {
                line: rule_line_numbers[i],
            },
            other => ParseError::Invalid {
                line: 0,
                source: other,
            },
        })?),
    })
}

fn render_with_kind(g: &Grammar, kind: GrammarKind) -> String {
    let mut out = String::new();
    let kind = match kind {
        GrammarKind::General => "general",
        GrammarKind::Cf => "cf",
    };
    let join = |names: Vec<String>| {
        names
            .iter()
            .map(|n| format!(" {n}"))
            .collect::<String>()
    };
    let terminals: Vec<String> = g.terminals().iter().map(|t| t.to_string()).collect();
    let mut nonterminals: Vec<String> = g.nonterminals().iter().map(NonterminalTag::render).collect();
    nonterminals.sort();
    writeln!(out, "kind: {kind}").unwrap();
    writeln!(out, "terminals:{}", join(terminals)).unwrap();
    writeln!(out, "nonterminals:{}", join(nonterminals)).unwrap();
    writeln!(out, "start: {}", g.initial()).unwrap();
    writeln!(out, "rules:").unwrap();
    for r in g.rules() {
        writeln!(out, "{r}").unwrap();
    }
    out
}

/// Canonical text of a grammar, rules in stored order.
pub fn render_grammar(g: &Grammar) -> String {
    render_with_kind(g, GrammarKind::General)
}

pub fn render_cf_grammar(cg: &CfGrammar) -> String {
    render_with_kind(&general_of_cf(cg), GrammarKind::Cf)
}

/// Reads whitespace-separated symbol names declared by `g`; a lone `eps`
/// is the empty form.
pub fn parse_form(g: &Grammar, text: &str) -> Result<SententialForm, Error> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens == [EPSILON_TOKEN] {
        return Ok(SententialForm::empty());
    }
    let table = g.symbol_table();
    tokens
        .into_iter()
        .map(|tok| {
            table
                .get(tok)
                .cloned()
                .ok_or_else(|| Error::UndeclaredSymbol(tok.to_string()))
        })
        .collect()
}
