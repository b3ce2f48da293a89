//! The bounded arithmetic sentences used to check [`pa_to_zf`](super::pa_to_zf).

use super::table::read_formula;
use super::BridgeError;
use crate::syntax::{Formula, SExpr, Signature, SyntaxError};
use std::sync::OnceLock;

const CORPUS_TEXT: &str = include_str!("../../data/delta0_corpus.sexp");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub sentence: Formula,
}

/// The shipped corpus of 50 sentences, in file order.
pub fn delta0_corpus() -> &'static [CorpusEntry] {
    static CORPUS: OnceLock<Vec<CorpusEntry>> = OnceLock::new();
    CORPUS.get_or_init(|| parse_corpus(CORPUS_TEXT).expect("shipped corpus is well formed"))
}

fn bad(pos: usize, msg: impl Into<String>) -> BridgeError {
    BridgeError::Syntax(SyntaxError::Parse { pos, msg: msg.into() })
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, BridgeError> {
    let top = SExpr::parse_one(text)?;
    let SExpr::List(items, pos) = &top else { return Err(bad(top.pos(), "expected (delta0-corpus ...)")) };
    if items.first().and_then(SExpr::as_atom) != Some("delta0-corpus") {
        return Err(bad(*pos, "expected (delta0-corpus ...)"));
    }
    let mut out = Vec::new();
    let mut version_seen = false;
    for item in &items[1..] {
        let SExpr::List(parts, p) = item else { return Err(bad(item.pos(), "expected an entry")) };
        match (parts.first().and_then(SExpr::as_atom), parts.len()) {
            (Some("version"), 2) if parts[1].as_atom() == Some("1") => version_seen = true,
            (Some("s"), 3) => {
                let name = parts[1].as_atom().ok_or_else(|| bad(parts[1].pos(), "expected a name"))?.to_string();
                let sentence = read_formula(&parts[2], &[])?;
                if !sentence.is_sentence() || !sentence.fits_signature(Signature::Arith) {
                    return Err(bad(*p, format!("{name} is not an arithmetic sentence")));
                }
                out.push(CorpusEntry { name, sentence });
            }
            _ => return Err(bad(*p, "expected (version 1) or (s name sentence)")),
        }
    }
    if !version_seen {
        return Err(bad(*pos, "missing (version 1)"));
    }
    Ok(out)
}
