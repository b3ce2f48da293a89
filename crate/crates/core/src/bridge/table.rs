//! Loading the set-signature graph formulas of the arithmetic primitives.

use super::BridgeError;
use crate::syntax::{formula_from_sexpr, parse_var, term_from_sexpr, Formula, SExpr, Signature, SyntaxError, Term, Var};
use std::collections::BTreeSet;
use std::sync::OnceLock;

/// Names every table must define, with their arities.
pub const REQUIRED: [(&str, usize); 5] = [("ordinal", 1), ("zero", 1), ("succ", 2), ("add", 3), ("mul", 3)];

const STANDARD_TEXT: &str = include_str!("../../data/translation_table.sexp");

/// A named formula with free variables exactly `v0..v(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub arity: usize,
    pub body: Formula,
}

impl Definition {
    /// The body with `args` for its parameters; bound variables are moved
    /// clear of every variable in `args`.
    pub fn apply(&self, args: &[Term]) -> Formula {
        assert_eq!(args.len(), self.arity, "{} takes {} arguments", self.name, self.arity);
        let base = args.iter().filter_map(Term::max_var).max().map_or(0, |m| m + 1);
        self.body.instantiate(args, base)
    }
}

/// An immutable, versioned list of definitions. Later definitions may use
/// earlier ones as relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationTable {
    pub version: u32,
    defs: Vec<Definition>,
}

impl TranslationTable {
    /// The table shipped in `data/translation_table.sexp`.
    pub fn standard() -> &'static TranslationTable {
        static TABLE: OnceLock<TranslationTable> = OnceLock::new();
        TABLE.get_or_init(|| TranslationTable::parse(STANDARD_TEXT).expect("shipped translation table is well formed"))
    }

    pub fn parse(text: &str) -> Result<Self, BridgeError> {
        let top = SExpr::parse_one(text)?;
        let SExpr::List(items, pos) = &top else {
            return Err(table_err(top.pos(), "expected (translation-table ...)"));
        };
        if items.first().and_then(SExpr::as_atom) != Some("translation-table") {
            return Err(table_err(*pos, "expected (translation-table ...)"));
        }
        let mut version = None;
        let mut defs: Vec<Definition> = Vec::new();
        for item in &items[1..] {
            let SExpr::List(parts, p) = item else {
                return Err(table_err(item.pos(), "expected (version n) or (def ...)"));
            };
            match parts.first().and_then(SExpr::as_atom) {
                Some("version") if parts.len() == 2 => {
                    let v = parts[1].as_atom().and_then(|a| a.parse().ok()).ok_or_else(|| table_err(*p, "bad version"))?;
                    version = Some(v);
                }
                Some("def") if parts.len() == 4 => defs.push(read_def(parts, *p, &defs)?),
                _ => return Err(table_err(*p, "expected (version n) or (def name (params) body)")),
            }
        }
        let version = version.ok_or_else(|| table_err(*pos, "missing (version n)"))?;
        if version != 1 {
            return Err(BridgeError::Table(format!("unsupported translation table version {version}")));
        }
        let table = TranslationTable { version, defs };
        for (name, arity) in REQUIRED {
            match table.get(name) {
                Some(d) if d.arity == arity => {}
                Some(d) => return Err(BridgeError::Table(format!("{name} has {} parameters, expected {arity}", d.arity))),
                None => return Err(BridgeError::Table(format!("missing definition of {name}"))),
            }
        }
        Ok(table)
    }

    pub fn get(&self, name: &str) -> Option<&Definition> {
        self.defs.iter().find(|d| d.name == name)
    }

    pub fn definitions(&self) -> &[Definition] {
        &self.defs
    }

    /// The instance `name(args)`. Panics on an unknown name; the required
    /// names are checked at load time.
    pub fn apply(&self, name: &str, args: &[Term]) -> Formula {
        self.get(name).unwrap_or_else(|| panic!("no definition of {name}")).apply(args)
    }
}

fn table_err(pos: usize, msg: &str) -> BridgeError {
    BridgeError::Syntax(SyntaxError::Parse { pos, msg: msg.to_string() })
}

fn read_def(parts: &[SExpr], pos: usize, earlier: &[Definition]) -> Result<Definition, BridgeError> {
    let name = parts[1].as_atom().ok_or_else(|| table_err(parts[1].pos(), "expected definition name"))?.to_string();
    if earlier.iter().any(|d| d.name == name) {
        return Err(table_err(pos, &format!("{name} defined twice")));
    }
    let SExpr::List(params, ppos) = &parts[2] else {
        return Err(table_err(parts[2].pos(), "expected parameter list"));
    };
    for (i, p) in params.iter().enumerate() {
        let v = match p {
            SExpr::Atom(tok, at) => parse_var(tok, *at)?,
            SExpr::List(_, at) => return Err(table_err(*at, "expected parameter variable")),
        };
        if v != i as Var {
            return Err(table_err(*ppos, "parameters must be v0, v1, ... in order"));
        }
    }
    let body = read_formula(&parts[3], earlier)?;
    if !body.fits_signature(Signature::Set) {
        return Err(BridgeError::Table(format!("{name} is not a set-signature formula")));
    }
    let expected: BTreeSet<Var> = (0..params.len() as Var).collect();
    if body.free_vars() != expected {
        return Err(BridgeError::Table(format!("{name} has free variables {:?}, expected {:?}", body.free_vars(), expected)));
    }
    Ok(Definition { name, arity: params.len(), body })
}

/// Read a formula with the bridge sugar and with `defs` callable as relations:
/// - `(exists-in v t φ)` is `∃v(v ∈ t ∧ φ)`, `(forall-in v t φ)` is `∀v(v ∈ t → φ)`;
/// - `(le a b)` is `∃z(z + a = b)`, `(lt a b)` is `∃z(S z + a = b)`, with `z` fresh;
/// - `(exists-le v t φ)` is `∃v(v ≤ t ∧ φ)`, `(forall-le v t φ)` is `∀v(v ≤ t → φ)`.
pub(crate) fn read_formula(e: &SExpr, defs: &[Definition]) -> Result<Formula, BridgeError> {
    let mut failure = None;
    let out = formula_from_sexpr(e, &mut |op, args, pos| match expand(op, args, pos, defs) {
        Ok(Some(f)) => Some(Ok(f)),
        Ok(None) => None,
        Err(err) => {
            let msg = err.to_string();
            failure = Some(err);
            Some(Err(SyntaxError::Parse { pos, msg }))
        }
    });
    match (out, failure) {
        (Ok(f), _) => Ok(f),
        (Err(_), Some(err)) => Err(err),
        (Err(err), None) => Err(err.into()),
    }
}

fn bound_var(e: &SExpr) -> Result<Var, BridgeError> {
    match e {
        SExpr::Atom(tok, p) => Ok(parse_var(tok, *p)?),
        SExpr::List(_, p) => Err(table_err(*p, "expected bound variable")),
    }
}

fn fresh_above(terms: &[&Term]) -> Var {
    terms.iter().filter_map(|t| t.max_var()).max().map_or(0, |m| m + 1)
}

fn le(a: Term, b: Term, strict: bool) -> Formula {
    let z = fresh_above(&[&a, &b]);
    let zt = if strict { Term::succ(Term::Var(z)) } else { Term::Var(z) };
    Formula::exists(z, Formula::eq(Term::add(zt, a), b))
}

fn expand(op: &str, args: &[SExpr], pos: usize, defs: &[Definition]) -> Result<Option<Formula>, BridgeError> {
    let want = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(table_err(pos, &format!("'{op}' takes {n} argument(s), found {}", args.len())))
        }
    };
    let f = match op {
        "exists-in" | "forall-in" | "exists-le" | "forall-le" => {
            want(3)?;
            let v = bound_var(&args[0])?;
            let t = term_from_sexpr(&args[1])?;
            if t.contains_var(v) {
                return Err(table_err(pos, &format!("bound v{v} occurs in its own bound")));
            }
            let body = read_formula(&args[2], defs)?;
            let guard = if op.ends_with("-in") { Formula::mem(Term::Var(v), t) } else { le(Term::Var(v), t, false) };
            if op.starts_with("exists") {
                Formula::exists(v, Formula::and(guard, body))
            } else {
                Formula::forall(v, Formula::imp(guard, body))
            }
        }
        "le" | "lt" => {
            want(2)?;
            le(term_from_sexpr(&args[0])?, term_from_sexpr(&args[1])?, op == "lt")
        }
        _ => {
            let Some(def) = defs.iter().find(|d| d.name == op) else { return Ok(None) };
            want(def.arity)?;
            let terms = args.iter().map(term_from_sexpr).collect::<Result<Vec<_>, _>>()?;
            def.apply(&terms)
        }
    };
    Ok(Some(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_table_loads() {
        let t = TranslationTable::standard();
        assert_eq!(t.version, 1);
        for (name, arity) in REQUIRED {
            let d = t.get(name).unwrap();
            assert_eq!(d.arity, arity);
            assert_eq!(d.body.free_vars(), (0..arity as Var).collect());
        }
    }

    #[test]
    fn macro_calls_do_not_capture() {
        let t = TranslationTable::standard();
        let f = t.apply("succ", &[Term::Var(10), Term::Var(11)]);
        assert_eq!(f.free_vars(), [10, 11].into_iter().collect());
    }

    #[test]
    fn rejects_bad_tables() {
        let bad = [
            "(translation-table (def zero (v0) (= v0 v0)))",
            "(translation-table (version 2))",
            "(translation-table (version 1) (def zero (v1) (= v1 v1)))",
            "(translation-table (version 1) (def zero (v0) (= v0 v1)))",
            "(translation-table (version 1) (def zero (v0) (= v0 v0)))",
            "(translation-table (version 1) (def zero (v0) (nope v0)))",
        ];
        for text in bad {
            assert!(TranslationTable::parse(text).is_err(), "{text}");
        }
    }

    #[test]
    fn sugar_expands_to_bounded_shapes() {
        let e = SExpr::parse_one("(forall-in v1 v0 (exists-in v2 v1 (= v2 v2)))").unwrap();
        let f = read_formula(&e, &[]).unwrap();
        let g = crate::syntax::parse_any("(forall v1 (imp (in v1 v0) (exists v2 (and (in v2 v1) (= v2 v2)))))").unwrap();
        assert_eq!(f, g);
        let e = SExpr::parse_one("(lt v0 v3)").unwrap();
        let g = crate::syntax::parse_any("(exists v4 (= (+ (S v4) v0) v3))").unwrap();
        assert_eq!(read_formula(&e, &[]).unwrap(), g);
    }
}
