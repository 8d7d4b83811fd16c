//! Unrestricted (type-0) grammars: bounded derivation search, closure
//! constructions under union, reversal, concatenation and Kleene star, and
//! a language-level oracle to compare them against.
//!
//! ```
//! use type0::format::parse_grammar;
//! use type0::engine::{enumerate_language, SearchBudget};
//!
//! let g = parse_grammar("terminals: a b\nnonterminals: S\nstart: S\nrules:\nS -> a S b\nS -> eps\n")
//!     .unwrap()
//!     .to_general();
//! let words = enumerate_language(&g, &SearchBudget::for_word_len(4));
//! let shown: Vec<String> = words.iter().map(|w| w.to_string()).collect();
//! assert_eq!(shown, ["eps", "a b", "a a b b"]);
//! ```

pub mod cf;
pub mod cli;
pub mod closures;
pub mod engine;
pub mod error;
pub mod format;
pub mod grammar;
pub mod lifting;
pub mod oracle;
pub mod symbol;

pub use engine::{DerivationTrace, Match, SearchBudget};
pub use error::Error;
pub use grammar::{Grammar, Grule};
pub use symbol::{NonterminalTag, SententialForm, Symbol, Terminal, Word};
