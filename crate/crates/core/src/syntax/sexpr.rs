use super::{Formula, Signature, Term, Var};
use crate::hf::AckCode;
use num_bigint::BigUint;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("signature error: {0}")]
    Signature(String),
}

fn perr<T>(pos: usize, msg: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError::Parse { pos, msg: msg.into() })
}

/// A raw s-expression with byte offsets, before it is read as a formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExpr {
    Atom(String, usize),
    List(Vec<SExpr>, usize),
}

impl SExpr {
    pub fn pos(&self) -> usize {
        match self {
            SExpr::Atom(_, p) | SExpr::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(s, _) => Some(s),
            SExpr::List(..) => None,
        }
    }

    /// Read every top-level s-expression in `text`. `;` starts a line comment.
    pub fn parse_all(text: &str) -> Result<Vec<SExpr>, SyntaxError> {
        let mut reader = Reader { src: text.as_bytes(), pos: 0 };
        let mut out = Vec::new();
        loop {
            reader.skip_ws();
            if reader.pos >= reader.src.len() {
                return Ok(out);
            }
            out.push(reader.read()?);
        }
    }

    pub fn parse_one(text: &str) -> Result<SExpr, SyntaxError> {
        let mut all = SExpr::parse_all(text)?;
        match all.len() {
            1 => Ok(all.pop().unwrap()),
            0 => perr(0, "empty input"),
            _ => perr(all[1].pos(), "trailing input after expression"),
        }
    }
}

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() {
            let b = self.src[self.pos];
            if b == b';' {
                while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<SExpr, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            None => perr(start, "unexpected end of input"),
            Some(b')') => perr(start, "unexpected ')'"),
            Some(b'(') => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.src.get(self.pos) {
                        None => return perr(start, "unclosed '('"),
                        Some(b')') => {
                            self.pos += 1;
                            return Ok(SExpr::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                while self.pos < self.src.len() {
                    let b = self.src[self.pos];
                    if b.is_ascii_whitespace() || b == b'(' || b == b')' || b == b';' {
                        break;
                    }
                    self.pos += 1;
                }
                let tok = std::str::from_utf8(&self.src[start..self.pos])
                    .map_err(|_| SyntaxError::Parse { pos: start, msg: "invalid UTF-8".into() })?;
                Ok(SExpr::Atom(tok.to_string(), start))
            }
        }
    }
}

pub(crate) fn parse_var(tok: &str, pos: usize) -> Result<Var, SyntaxError> {
    tok.strip_prefix('v')
        .and_then(|d| if d.is_empty() { None } else { d.parse::<Var>().ok() })
        .ok_or_else(|| SyntaxError::Parse { pos, msg: format!("expected variable vN, found '{tok}'") })
}

fn parse_nat(e: &SExpr) -> Result<BigUint, SyntaxError> {
    match e {
        SExpr::Atom(tok, pos) => {
            BigUint::from_str(tok).map_err(|_| SyntaxError::Parse { pos: *pos, msg: format!("expected natural number, found '{tok}'") })
        }
        SExpr::List(_, pos) => perr(*pos, "expected natural number"),
    }
}

fn head(items: &[SExpr], pos: usize) -> Result<&str, SyntaxError> {
    match items.first() {
        Some(SExpr::Atom(h, _)) => Ok(h),
        Some(other) => perr(other.pos(), "expected operator symbol"),
        None => perr(pos, "empty list"),
    }
}

fn arity(items: &[SExpr], n: usize, pos: usize, op: &str) -> Result<(), SyntaxError> {
    if items.len() != n + 1 {
        return perr(pos, format!("'{op}' takes {n} argument(s), found {}", items.len() - 1));
    }
    Ok(())
}

pub(crate) fn term_from_sexpr(e: &SExpr) -> Result<Term, SyntaxError> {
    match e {
        SExpr::Atom(tok, pos) => Ok(Term::Var(parse_var(tok, *pos)?)),
        SExpr::List(items, pos) => {
            let op = head(items, *pos)?;
            match op {
                "c" => {
                    arity(items, 1, *pos, op)?;
                    Ok(Term::Const(AckCode::from(parse_nat(&items[1])?)))
                }
                "num" => {
                    arity(items, 1, *pos, op)?;
                    let n = parse_nat(&items[1])?;
                    let n: u64 = n.try_into().map_err(|_| SyntaxError::Parse { pos: *pos, msg: "numeral too large".into() })?;
                    Ok(Term::numeral(n))
                }
                "S" => {
                    arity(items, 1, *pos, op)?;
                    Ok(Term::succ(term_from_sexpr(&items[1])?))
                }
                "+" | "*" => {
                    arity(items, 2, *pos, op)?;
                    let s = term_from_sexpr(&items[1])?;
                    let t = term_from_sexpr(&items[2])?;
                    Ok(if op == "+" { Term::add(s, t) } else { Term::mul(s, t) })
                }
                other => perr(*pos, format!("unknown term constructor '{other}'")),
            }
        }
    }
}

/// Read a formula, expanding `and`, `imp`, `iff` and `forall` into `¬`/`∨`/`∃`.
/// `macro_call` gets a chance to handle list heads the core grammar does not know.
pub(crate) fn formula_from_sexpr(
    e: &SExpr,
    macro_call: &mut dyn FnMut(&str, &[SExpr], usize) -> Option<Result<Formula, SyntaxError>>,
) -> Result<Formula, SyntaxError> {
    let SExpr::List(items, pos) = e else {
        return perr(e.pos(), "expected a formula, found an atom");
    };
    let pos = *pos;
    let op = head(items, pos)?;
    let mut sub = |i: usize| formula_from_sexpr(&items[i], macro_call);
    match op {
        "=" | "in" | "ackmem" => {
            arity(items, 2, pos, op)?;
            let s = term_from_sexpr(&items[1])?;
            let t = term_from_sexpr(&items[2])?;
            Ok(match op {
                "=" => Formula::Eq(s, t),
                "in" => Formula::In(s, t),
                _ => Formula::AckMem(s, t),
            })
        }
        "prov" => {
            arity(items, 2, pos, op)?;
            let name = items[1].as_atom().ok_or_else(|| SyntaxError::Parse { pos: items[1].pos(), msg: "expected theory label".into() })?;
            Ok(Formula::Prov(name.to_string(), Box::new(sub(2)?)))
        }
        "not" => {
            arity(items, 1, pos, op)?;
            Ok(Formula::not(sub(1)?))
        }
        "or" | "and" | "imp" | "iff" => {
            arity(items, 2, pos, op)?;
            let a = sub(1)?;
            let b = sub(2)?;
            Ok(match op {
                "or" => Formula::or(a, b),
                "and" => Formula::and(a, b),
                "imp" => Formula::imp(a, b),
                _ => Formula::iff(a, b),
            })
        }
        "exists" | "forall" => {
            arity(items, 2, pos, op)?;
            let v = match &items[1] {
                SExpr::Atom(tok, p) => parse_var(tok, *p)?,
                other => return perr(other.pos(), "expected bound variable"),
            };
            let body = sub(2)?;
            Ok(if op == "exists" { Formula::exists(v, body) } else { Formula::forall(v, body) })
        }
        other => match macro_call(other, &items[1..], pos) {
            Some(r) => r,
            None => perr(pos, format!("unknown connective or relation '{other}'")),
        },
    }
}

/// Parse a formula and check it against `sig`.
pub fn parse(text: &str, sig: Signature) -> Result<Formula, SyntaxError> {
    let f = parse_any(text)?;
    if !f.fits_signature(sig) {
        return Err(SyntaxError::Signature(format!("formula {f} is not in the {sig} signature")));
    }
    Ok(f)
}

/// Parse a formula in whichever signature it uses; mixing signatures is an error.
pub fn parse_any(text: &str) -> Result<Formula, SyntaxError> {
    let e = SExpr::parse_one(text)?;
    let f = formula_from_sexpr(&e, &mut |_, _, _| None)?;
    if let Err((a, b)) = f.signature() {
        return Err(SyntaxError::Signature(format!("formula mixes {a} and {b} symbols")));
    }
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    term_from_sexpr(&SExpr::parse_one(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_membership_of_constants() {
        let f = parse("(in (c 0) (c 1))", Signature::Set).unwrap();
        assert_eq!(f, Formula::In(Term::constant(0u64), Term::constant(1u64)));
    }

    #[test]
    fn forall_is_expanded() {
        let f = parse("(forall v0 (= v0 v0))", Signature::Set).unwrap();
        let eq = Formula::eq(Term::var(0), Term::var(0));
        assert_eq!(f, Formula::not(Formula::exists(0, Formula::not(eq))));
    }

    #[test]
    fn arithmetic_terms() {
        let f = parse("(= (S (num 0)) (+ (num 0) (S (num 0))))", Signature::Arith).unwrap();
        let one = Term::succ(Term::Zero);
        assert_eq!(f, Formula::eq(one.clone(), Term::add(Term::Zero, one)));
    }

    #[test]
    fn and_imp_expansion() {
        let a = parse("(and (= v0 v0) (= v1 v1))", Signature::Set).unwrap();
        let e0 = Formula::eq(Term::var(0), Term::var(0));
        let e1 = Formula::eq(Term::var(1), Term::var(1));
        assert_eq!(a, Formula::not(Formula::or(Formula::not(e0.clone()), Formula::not(e1.clone()))));
        let i = parse("(imp (= v0 v0) (= v1 v1))", Signature::Set).unwrap();
        assert_eq!(i, Formula::or(Formula::not(e0), e1));
    }

    #[test]
    fn errors_carry_positions() {
        match parse("(in (c 0) (c 1)", Signature::Set) {
            Err(SyntaxError::Parse { pos: 0, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse("(or (= v0 v0) (bogus v1))", Signature::Set) {
            Err(SyntaxError::Parse { pos: 14, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("(exists x (= x x))", Signature::Set), Err(SyntaxError::Parse { pos: 8, .. })));
    }

    #[test]
    fn signature_mismatch() {
        assert!(matches!(parse("(in (c 0) (c 1))", Signature::Arith), Err(SyntaxError::Signature(_))));
        assert!(matches!(parse("(= (num 0) (num 0))", Signature::Set), Err(SyntaxError::Signature(_))));
        assert!(matches!(parse_any("(= (num 0) (c 0))"), Err(SyntaxError::Signature(_))));
    }

    #[test]
    fn whitespace_and_comments() {
        let f = parse("  ( in\n (c 0) ; comment\n (c 1) ) ", Signature::Set).unwrap();
        assert_eq!(f.to_string(), "(in (c 0) (c 1))");
    }
}
