//! Command-line front end. [`run`] is the whole program; `main` only wires
//! it to the process streams.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 closure mismatch,
//! 3 word or form not derived within the budget.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::closures::{
    classify_star_form, concat_grammar, naive_concat_grammar, reversal_grammar, star_grammar,
    union_grammar, verify_star_classification, StarClassification, Verification,
};
use crate::engine::{derives_within, enumerate_language, generates_within, DerivationTrace, SearchBudget};
use crate::format::{parse_form, parse_grammar, render_grammar};
use crate::grammar::Grammar;
use crate::oracle::{check_closure, render_words, ClosureCheck};
use crate::symbol::{SententialForm, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "type0", version, about = "Explore unrestricted grammars by bounded search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct BudgetArgs {
    /// Maximum derivation length.
    #[arg(long)]
    max_steps: Option<usize>,
    /// Maximum sentential form length.
    #[arg(long)]
    max_form_len: Option<usize>,
}

impl BudgetArgs {
    fn resolve(self, word_len: usize) -> SearchBudget {
        let base = SearchBudget::for_word_len(word_len);
        SearchBudget::new(
            self.max_steps.unwrap_or(base.max_steps),
            self.max_form_len.unwrap_or(base.max_form_len),
            word_len,
        )
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Union,
    Concat,
    ConcatNaive,
    Star,
    Reverse,
}

impl Op {
    fn arity(self) -> usize {
        match self {
            Op::Union | Op::Concat | Op::ConcatNaive => 2,
            Op::Star | Op::Reverse => 1,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every word up to a length, in length-then-lexicographic order.
    Enum {
        file: PathBuf,
        #[arg(long)]
        max_word_len: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Search for a derivation of a word.
    Member {
        file: PathBuf,
        /// Space-separated terminals; `eps` or "" for the empty word.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Read the word one character per terminal.
        #[arg(long)]
        chars: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Search for a derivation between two sentential forms.
    Derive {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Build a closure grammar and write it in `.gram` format.
    Op {
        op: Op,
        #[arg(num_args = 1..=2, required = true)]
        files: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare a closure construction against the language-level oracle.
    Check {
        op: Op,
        #[arg(num_args = 1..=2, required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        max_word_len: usize,
        #[arg(long)]
        json: bool,
    },
    /// Decompose a form of the star grammar of a base grammar.
    Classify {
        base: PathBuf,
        #[arg(long)]
        form: String,
        /// Also search for the derivations the decomposition asserts.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_ERROR,
        message: message.to_string(),
    }
}

fn load(path: &Path) -> Result<Grammar, Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    parse_grammar(&text)
        .map(|p| p.to_general())
        .map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_all(op: Op, files: &[PathBuf]) -> Result<Vec<Grammar>, Failure> {
    if files.len() != op.arity() {
        return Err(fail(format!(
            "{op:?} takes {} grammar file(s), got {}",
            op.arity(),
            files.len()
        )));
    }
    files.iter().map(|f| load(f)).collect()
}

fn trace_json(trace: &DerivationTrace) -> Value {
    json!({
        "start": trace.start.tokens(),
        "steps": trace.steps.iter().map(|s| json!({
            "rule": s.matched.rule_index,
            "pos": s.matched.position,
            "form": s.form.tokens(),
        })).collect::<Vec<_>>(),
    })
}

fn trace_text(trace: &DerivationTrace) -> String {
    let mut out = format!("   {}\n", trace.start);
    for s in &trace.steps {
        out.push_str(&format!(
            "=> {}    (rule {} at {})\n",
            s.form, s.matched.rule_index, s.matched.position
        ));
    }
    out.push_str(&format!("steps: {}\n", trace.len()));
    out
}

fn report_trace(found: Option<DerivationTrace>, json_out: bool) -> (String, i32) {
    match (found, json_out) {
        (Some(t), true) => (
            json!({"found": true, "steps": t.len(), "trace": trace_json(&t)}).to_string() + "\n",
            EXIT_OK,
        ),
        (Some(t), false) => (trace_text(&t), EXIT_OK),
        (None, true) => (json!({"found": false}).to_string() + "\n", EXIT_NOT_FOUND),
        (None, false) => ("not found within budget\n".to_string(), EXIT_NOT_FOUND),
    }
}

fn form_json(f: &SententialForm) -> Value {
    json!(f.tokens())
}

fn word_json(w: &Word) -> Value {
    json!(w.to_form().tokens())
}

fn classification_json(c: &StarClassification) -> Value {
    let forms = |x: &[SententialForm]| x.iter().map(form_json).collect::<Vec<_>>();
    let mut v = match c {
        StarClassification::Opening { x } => json!({"name": "opening", "m": x.len(), "x": forms(x)}),
        StarClassification::Cleaning { x } => json!({"name": "cleaning", "m": x.len(), "x": forms(x)}),
        StarClassification::Scanning { w, beta, gamma, x } => json!({
            "name": "scanning",
            "n": w.len(),
            "m": x.len(),
            "w": w.iter().map(word_json).collect::<Vec<_>>(),
            "beta": word_json(beta),
            "gamma": form_json(gamma),
            "x": forms(x),
        }),
        StarClassification::Finished { word } => json!({"name": "finished", "word": word_json(word)}),
        StarClassification::StuckCleaner { sigma } => json!({"name": "stuck-cleaner", "sigma": form_json(sigma)}),
        StarClassification::StuckDelimiter { omega } => json!({"name": "stuck-delimiter", "omega": form_json(omega)}),
    };
    v["case"] = json!(c.case_number());
    v
}

fn execute(cli: Cli) -> Result<(String, i32), Failure> {
    match cli.command {
        Command::Enum {
            file,
            max_word_len,
            budget,
        } => {
            let g = load(&file)?;
            let words = enumerate_language(&g, &budget.resolve(max_word_len));
            Ok((render_words(&words), EXIT_OK))
        }
        Command::Member {
            file,
            word,
            chars,
            json,
            budget,
        } => {
            let g = load(&file)?;
            let w = if chars { Word::from_chars(&word) } else { Word::from_tokens(&word) }.map_err(fail)?;
            let found = generates_within(&g, &w, &budget.resolve(w.len())).map_err(fail)?;
            Ok(report_trace(found, json))
        }
        Command::Derive {
            file,
            from,
            to,
            json,
            budget,
        } => {
            let g = load(&file)?;
            let from = parse_form(&g, &from).map_err(fail)?;
            let to = parse_form(&g, &to).map_err(fail)?;
            let found = derives_within(&g, &from, &to, &budget.resolve(from.len().max(to.len())));
            Ok(report_trace(found, json))
        }
        Command::Op { op, files, output } => {
            let gs = load_all(op, &files)?;
            let g = match op {
                Op::Union => union_grammar(&gs[0], &gs[1]),
                Op::Concat => concat_grammar(&gs[0], &gs[1]),
                Op::ConcatNaive => naive_concat_grammar(&gs[0], &gs[1]),
                Op::Star => star_grammar(&gs[0]),
                Op::Reverse => reversal_grammar(&gs[0]),
            };
            let text = render_grammar(&g);
            match output {
                Some(path) => {
                    fs::write(&path, text).map_err(|e| fail(format!("{}: {e}", path.display())))?;
                    Ok((String::new(), EXIT_OK))
                }
                None => Ok((text, EXIT_OK)),
            }
        }
        Command::Check {
            op,
            files,
            max_word_len,
            json,
        } => {
            let gs = load_all(op, &files)?;
            let check = match op {
                Op::Union => ClosureCheck::Union(&gs[0], &gs[1]),
                Op::Concat => ClosureCheck::Concat(&gs[0], &gs[1]),
                Op::ConcatNaive => ClosureCheck::ConcatNaive(&gs[0], &gs[1]),
                Op::Star => ClosureCheck::Star(&gs[0]),
                Op::Reverse => ClosureCheck::Reverse(&gs[0]),
            };
            let report = check_closure(check, max_word_len).map_err(fail)?;
            let text = if json { report.to_json() } else { report.to_string() };
            let code = if report.equal { EXIT_OK } else { EXIT_MISMATCH };
            Ok((text + "\n", code))
        }
        Command::Classify {
            base,
            form,
            verify,
            budget,
        } => {
            let g = load(&base)?;
            let star = star_grammar(&g);
            let form = parse_form(&star, &form).map_err(fail)?;
            let budget = budget.resolve(form.len());
            let cases: Vec<Value> = classify_star_form(&g, &form)
                .iter()
                .map(|c| {
                    if !verify {
                        return classification_json(c);
                    }
                    match verify_star_classification(&g, c, &budget) {
                        Verification::Verified(refined) => {
                            let mut v = classification_json(&refined);
                            v["verified"] = json!(true);
                            v
                        }
                        Verification::Unverified => {
                            let mut v = classification_json(c);
                            v["verified"] = json!(false);
                            v
                        }
                    }
                })
                .collect();
            let out = json!({"form": form.tokens(), "cases": cases});
            Ok((serde_json::to_string_pretty(&out).expect("json") + "\n", EXIT_OK))
        }
    }
}

/// Runs the program on `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
