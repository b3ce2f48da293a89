//! First-order syntax for the two signatures the workbench speaks: arithmetic
//! (`0`, `S`, `+`, `×`, `=`) and set theory (`∈`, `=`, constants `c_a`).
//!
//! The primitive connectives are `¬`, `∨` and `∃`. Conjunction, universal
//! quantification, implication and the biconditional are accepted by the
//! parser and by the builder helpers below, but they are always expanded into
//! the primitive forms, so every truth-clause case analysis downstream only
//! has to handle three connectives.
//!
//! Two designated relations live in the arithmetic signature besides `=`:
//! `AckMem`, the Ackermann bit-test `x ∈_Ack y` produced by the set-to-arithmetic
//! translation, and `Prov`, a provability predicate for a named theory whose
//! argument is the quoted body formula (free variables of the body are the
//! dotted variables of the quotation).

mod gen;
mod godel;
mod sexpr;

pub use gen::{enumerate_sentences, for_each_sentence, random_sentence, SentenceShape};
pub use godel::{godel_code, godel_decode, min_code_at_depth, GodelCode};
pub use sexpr::{parse, parse_any, parse_term, SExpr, SyntaxError};
pub(crate) use sexpr::{formula_from_sexpr, parse_var, term_from_sexpr};

use crate::hf::AckCode;
use num_bigint::BigUint;
use std::collections::BTreeSet;
use std::fmt;

/// Variable index: `v0`, `v1`, ...
pub type Var = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    Arith,
    Set,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signature::Arith => f.write_str("arith"),
            Signature::Set => f.write_str("set"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    /// `c_a`, naming the hereditarily finite set with Ackermann code `a`.
    Const(AckCode),
    Zero,
    Succ(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Eq(Term, Term),
    In(Term, Term),
    AckMem(Term, Term),
    Prov(String, Box<Formula>),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubstError {
    #[error("substituted term {0} is not closed")]
    OpenTerm(String),
    #[error("substituting {term} for v{var} would capture v{captured}")]
    Capture { var: Var, term: String, captured: Var },
}

impl Term {
    pub fn var(i: Var) -> Term {
        Term::Var(i)
    }

    pub fn constant(code: impl Into<AckCode>) -> Term {
        Term::Const(code.into())
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn add(s: Term, t: Term) -> Term {
        Term::Add(Box::new(s), Box::new(t))
    }

    pub fn mul(s: Term, t: Term) -> Term {
        Term::Mul(Box::new(s), Box::new(t))
    }

    /// The numeral `S^n(0)`.
    pub fn numeral(n: u64) -> Term {
        (0..n).fold(Term::Zero, |t, _| Term::succ(t))
    }

    /// If this term is a numeral `S^n(0)`, its value `n`.
    pub fn numeral_value(&self) -> Option<u64> {
        let mut n = 0u64;
        let mut t = self;
        loop {
            match t {
                Term::Zero => return Some(n),
                Term::Succ(inner) => {
                    n += 1;
                    t = inner;
                }
                _ => return None,
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) | Term::Zero => true,
            Term::Succ(t) => t.is_closed(),
            Term::Add(s, t) | Term::Mul(s, t) => s.is_closed() && t.is_closed(),
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::Const(_) | Term::Zero => false,
            Term::Succ(t) => t.contains_var(v),
            Term::Add(s, t) | Term::Mul(s, t) => s.contains_var(v) || t.contains_var(v),
        }
    }

    pub fn vars_into(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(w) => {
                out.insert(*w);
            }
            Term::Const(_) | Term::Zero => {}
            Term::Succ(t) => t.vars_into(out),
            Term::Add(s, t) | Term::Mul(s, t) => {
                s.vars_into(out);
                t.vars_into(out);
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) | Term::Zero => 1,
            Term::Succ(t) => 1 + t.node_count(),
            Term::Add(s, t) | Term::Mul(s, t) => 1 + s.node_count() + t.node_count(),
        }
    }

    /// Signature this term forces, if any. Variables are neutral.
    pub fn signature(&self) -> Option<Signature> {
        match self {
            Term::Var(_) => None,
            Term::Const(_) => Some(Signature::Set),
            _ => Some(Signature::Arith),
        }
    }

    fn fits(&self, sig: Signature) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Const(_) => sig == Signature::Set,
            Term::Zero => sig == Signature::Arith,
            Term::Succ(t) => sig == Signature::Arith && t.fits(sig),
            Term::Add(s, t) | Term::Mul(s, t) => sig == Signature::Arith && s.fits(sig) && t.fits(sig),
        }
    }

    pub(crate) fn replace(&self, v: Var, by: &Term) -> Term {
        match self {
            Term::Var(w) if *w == v => by.clone(),
            Term::Var(_) | Term::Const(_) | Term::Zero => self.clone(),
            Term::Succ(t) => Term::succ(t.replace(v, by)),
            Term::Add(s, t) => Term::add(s.replace(v, by), t.replace(v, by)),
            Term::Mul(s, t) => Term::mul(s.replace(v, by), t.replace(v, by)),
        }
    }

    pub fn map_vars(&self, f: &impl Fn(Var) -> Var) -> Term {
        match self {
            Term::Var(w) => Term::Var(f(*w)),
            Term::Const(_) | Term::Zero => self.clone(),
            Term::Succ(t) => Term::succ(t.map_vars(f)),
            Term::Add(s, t) => Term::add(s.map_vars(f), t.map_vars(f)),
            Term::Mul(s, t) => Term::mul(s.map_vars(f), t.map_vars(f)),
        }
    }

    /// All subterms, including the term itself.
    pub fn subterms_into<'a>(&'a self, out: &mut Vec<&'a Term>) {
        out.push(self);
        match self {
            Term::Succ(t) => t.subterms_into(out),
            Term::Add(s, t) | Term::Mul(s, t) => {
                s.subterms_into(out);
                t.subterms_into(out);
            }
            _ => {}
        }
    }

    pub fn max_var(&self) -> Option<Var> {
        let mut vs = BTreeSet::new();
        self.vars_into(&mut vs);
        vs.last().copied()
    }
}

impl Formula {
    pub fn eq(s: Term, t: Term) -> Formula {
        Formula::Eq(s, t)
    }

    pub fn mem(s: Term, t: Term) -> Formula {
        Formula::In(s, t)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(v: Var, body: Formula) -> Formula {
        Formula::Exists(v, Box::new(body))
    }

    /// `a ∧ b` as `¬(¬a ∨ ¬b)`.
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::or(Formula::not(a), Formula::not(b)))
    }

    /// `a → b` as `¬a ∨ b`.
    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    /// `a ↔ b` as `(a → b) ∧ (b → a)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// `∀v body` as `¬∃v ¬body`.
    pub fn forall(v: Var, body: Formula) -> Formula {
        Formula::not(Formula::exists(v, Formula::not(body)))
    }

    /// Right-nested conjunction of a non-empty list.
    pub fn and_all(mut parts: Vec<Formula>) -> Formula {
        let last = parts.pop().expect("and_all of empty list");
        parts.into_iter().rev().fold(last, |acc, f| Formula::and(f, acc))
    }

    /// Balanced disjunction tree of a non-empty list; depth grows with log2 of the width.
    pub fn or_balanced(parts: &[Formula]) -> Formula {
        assert!(!parts.is_empty(), "or_balanced of empty list");
        if parts.len() == 1 {
            return parts[0].clone();
        }
        let mid = parts.len().div_ceil(2);
        Formula::or(Formula::or_balanced(&parts[..mid]), Formula::or_balanced(&parts[mid..]))
    }

    /// Leaves of a disjunction tree.
    pub fn disjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::Or(a, b) => {
                let mut out = a.disjuncts();
                out.extend(b.disjuncts());
                out
            }
            other => vec![other],
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Eq(..) | Formula::In(..) | Formula::AckMem(..) | Formula::Prov(..))
    }

    /// Length of the longest path in the parsing tree. Terms do not count.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::In(..) | Formula::AckMem(..) | Formula::Prov(..) => 1,
            Formula::Not(f) | Formula::Exists(_, f) => 1 + f.depth(),
            Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Formula nodes plus term nodes. This is the size measure used by the
    /// exhaustive enumeration budgets.
    pub fn node_count(&self) -> usize {
        match self {
            Formula::Eq(s, t) | Formula::In(s, t) | Formula::AckMem(s, t) => 1 + s.node_count() + t.node_count(),
            Formula::Prov(_, body) => 1 + body.node_count(),
            Formula::Not(f) | Formula::Exists(_, f) => 1 + f.node_count(),
            Formula::Or(a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    pub fn immediate_subformulas(&self) -> Vec<&Formula> {
        match self {
            Formula::Eq(..) | Formula::In(..) | Formula::AckMem(..) | Formula::Prov(..) => vec![],
            Formula::Not(f) | Formula::Exists(_, f) => vec![f],
            Formula::Or(a, b) => vec![a, b],
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let mut push_term = |t: &Term, bound: &Vec<Var>| {
            let mut vs = BTreeSet::new();
            t.vars_into(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Formula::Eq(s, t) | Formula::In(s, t) | Formula::AckMem(s, t) => {
                push_term(s, bound);
                push_term(t, bound);
            }
            Formula::Prov(_, body) | Formula::Not(body) => body.free_vars_into(bound, out),
            Formula::Or(a, b) => {
                a.free_vars_into(bound, out);
                b.free_vars_into(bound, out);
            }
            Formula::Exists(v, body) => {
                bound.push(*v);
                body.free_vars_into(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_free(&self, v: Var) -> bool {
        match self {
            Formula::Eq(s, t) | Formula::In(s, t) | Formula::AckMem(s, t) => s.contains_var(v) || t.contains_var(v),
            Formula::Prov(_, f) | Formula::Not(f) => f.is_free(v),
            Formula::Or(a, b) => a.is_free(v) || b.is_free(v),
            Formula::Exists(w, f) => *w != v && f.is_free(v),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Largest variable index occurring anywhere, bound or free.
    pub fn max_var(&self) -> Option<Var> {
        match self {
            Formula::Eq(s, t) | Formula::In(s, t) | Formula::AckMem(s, t) => s.max_var().max(t.max_var()),
            Formula::Prov(_, f) | Formula::Not(f) => f.max_var(),
            Formula::Or(a, b) => a.max_var().max(b.max_var()),
            Formula::Exists(v, f) => Some(*v).max(f.max_var()),
        }
    }

    /// Replace every free occurrence of `v` by the closed term `t`.
    pub fn substitute(&self, v: Var, t: &Term) -> Result<Formula, SubstError> {
        if !t.is_closed() {
            return Err(SubstError::OpenTerm(t.to_string()));
        }
        Ok(self.replace_free(v, t))
    }

    /// Like [`Formula::substitute`] but for arbitrary terms; fails rather than
    /// capture a variable of `t` under a quantifier of `self`.
    pub fn substitute_term(&self, v: Var, t: &Term) -> Result<Formula, SubstError> {
        let mut tv = BTreeSet::new();
        t.vars_into(&mut tv);
        if tv.is_empty() {
            return Ok(self.replace_free(v, t));
        }
        self.check_capture(v, t, &tv, &mut Vec::new())?;
        Ok(self.replace_free(v, t))
    }

    fn check_capture(&self, v: Var, t: &Term, tv: &BTreeSet<Var>, binders: &mut Vec<Var>) -> Result<(), SubstError> {
        match self {
            Formula::Eq(a, b) | Formula::In(a, b) | Formula::AckMem(a, b) => {
                if a.contains_var(v) || b.contains_var(v) {
                    if let Some(c) = binders.iter().find(|w| tv.contains(w)) {
                        return Err(SubstError::Capture { var: v, term: t.to_string(), captured: *c });
                    }
                }
                Ok(())
            }
            Formula::Prov(_, f) | Formula::Not(f) => f.check_capture(v, t, tv, binders),
            Formula::Or(a, b) => {
                a.check_capture(v, t, tv, binders)?;
                b.check_capture(v, t, tv, binders)
            }
            Formula::Exists(w, f) => {
                if *w == v {
                    return Ok(());
                }
                binders.push(*w);
                let r = f.check_capture(v, t, tv, binders);
                binders.pop();
                r
            }
        }
    }

    pub(crate) fn replace_free(&self, v: Var, t: &Term) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(a.replace(v, t), b.replace(v, t)),
            Formula::In(a, b) => Formula::In(a.replace(v, t), b.replace(v, t)),
            Formula::AckMem(a, b) => Formula::AckMem(a.replace(v, t), b.replace(v, t)),
            Formula::Prov(name, f) => Formula::Prov(name.clone(), Box::new(f.replace_free(v, t))),
            Formula::Not(f) => Formula::not(f.replace_free(v, t)),
            Formula::Or(a, b) => Formula::or(a.replace_free(v, t), b.replace_free(v, t)),
            Formula::Exists(w, f) if *w == v => self.clone(),
            Formula::Exists(w, f) => Formula::exists(*w, f.replace_free(v, t)),
        }
    }

    /// Rename every bound variable `w` to `w + offset`, leaving free variables alone.
    pub fn shift_bound(&self, offset: Var) -> Formula {
        self.shift_bound_in(offset, &mut Vec::new())
    }

    fn shift_bound_in(&self, offset: Var, bound: &mut Vec<Var>) -> Formula {
        let rename = |t: &Term, bound: &Vec<Var>| t.map_vars(&|w| if bound.contains(&w) { w + offset } else { w });
        match self {
            Formula::Eq(a, b) => Formula::Eq(rename(a, bound), rename(b, bound)),
            Formula::In(a, b) => Formula::In(rename(a, bound), rename(b, bound)),
            Formula::AckMem(a, b) => Formula::AckMem(rename(a, bound), rename(b, bound)),
            Formula::Prov(n, f) => Formula::Prov(n.clone(), Box::new(f.shift_bound_in(offset, bound))),
            Formula::Not(f) => Formula::not(f.shift_bound_in(offset, bound)),
            Formula::Or(a, b) => Formula::or(a.shift_bound_in(offset, bound), b.shift_bound_in(offset, bound)),
            Formula::Exists(w, f) => {
                // Inner binders of the same name shadow outer ones; dedupe keeps
                // the renaming a function of the innermost binder.
                let shadowed = bound.contains(w);
                if !shadowed {
                    bound.push(*w);
                }
                let body = f.shift_bound_in(offset, bound);
                if !shadowed {
                    bound.pop();
                }
                Formula::exists(w + offset, body)
            }
        }
    }

    /// Instantiate a template whose free variables are `v0..v(n-1)` with the
    /// given terms. Bound variables of the template are first moved above
    /// `fresh_base` so nothing in `args` can be captured.
    pub fn instantiate(&self, args: &[Term], fresh_base: Var) -> Formula {
        let shifted = self.shift_bound(fresh_base);
        // Two-phase replacement so argument terms mentioning v0..v(n-1)
        // are not rewritten again by later substitutions.
        let parking = fresh_base + shifted.max_var().unwrap_or(0) + 1;
        let mut f = shifted;
        for i in 0..args.len() as Var {
            f = f.replace_free(i, &Term::Var(parking + i));
        }
        for (i, a) in args.iter().enumerate() {
            f = f.replace_free(parking + i as Var, a);
        }
        f
    }

    /// All constants `c_a` occurring in the formula.
    pub fn constants(&self) -> BTreeSet<AckCode> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| {
            let mut subs = Vec::new();
            t.subterms_into(&mut subs);
            for s in subs {
                if let Term::Const(c) = s {
                    out.insert(c.clone());
                }
            }
        });
        out
    }

    /// Call `f` on every maximal term (argument of an atom).
    pub fn visit_terms<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        match self {
            Formula::Eq(a, b) | Formula::In(a, b) | Formula::AckMem(a, b) => {
                f(a);
                f(b);
            }
            Formula::Prov(_, g) | Formula::Not(g) | Formula::Exists(_, g) => g.visit_terms(f),
            Formula::Or(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
        }
    }

    /// The signature this formula is forced into, `Ok(None)` if it is neutral
    /// (only `=` between variables), or an error if it mixes the two.
    pub fn signature(&self) -> Result<Option<Signature>, (Signature, Signature)> {
        let mut found: Option<Signature> = None;
        let mut clash = None;
        let mut note = |s: Signature| match found {
            None => found = Some(s),
            Some(prev) if prev != s => clash = Some((prev, s)),
            _ => {}
        };
        self.collect_signatures(&mut note);
        match clash {
            Some(c) => Err(c),
            None => Ok(found),
        }
    }

    fn collect_signatures(&self, note: &mut impl FnMut(Signature)) {
        fn terms(t: &Term, note: &mut impl FnMut(Signature)) {
            let mut subs = Vec::new();
            t.subterms_into(&mut subs);
            for s in subs {
                if let Some(sig) = s.signature() {
                    note(sig);
                }
            }
        }
        match self {
            Formula::Eq(a, b) => {
                terms(a, note);
                terms(b, note);
            }
            Formula::In(a, b) => {
                note(Signature::Set);
                terms(a, note);
                terms(b, note);
            }
            Formula::AckMem(a, b) => {
                note(Signature::Arith);
                terms(a, note);
                terms(b, note);
            }
            Formula::Prov(_, f) => {
                note(Signature::Arith);
                f.collect_signatures(note);
            }
            Formula::Not(f) | Formula::Exists(_, f) => f.collect_signatures(note),
            Formula::Or(a, b) => {
                a.collect_signatures(note);
                b.collect_signatures(note);
            }
        }
    }

    pub fn fits_signature(&self, sig: Signature) -> bool {
        match self {
            Formula::Eq(a, b) => a.fits(sig) && b.fits(sig),
            Formula::In(a, b) => sig == Signature::Set && a.fits(sig) && b.fits(sig),
            Formula::AckMem(a, b) => sig == Signature::Arith && a.fits(sig) && b.fits(sig),
            Formula::Prov(_, f) => sig == Signature::Arith && f.fits_signature(sig),
            Formula::Not(f) | Formula::Exists(_, f) => f.fits_signature(sig),
            Formula::Or(a, b) => a.fits_signature(sig) && b.fits_signature(sig),
        }
    }

    /// Replace each constant occurrence (set signature) or maximal closed
    /// compound term (arithmetic) by a fresh variable, yielding the template
    /// from which this formula arises by closed-term substitution.
    pub fn abstract_closed_terms(&self) -> Formula {
        let mut next = self.max_var().map_or(0, |m| m + 1);
        self.abstract_in(&mut next)
    }

    fn abstract_in(&self, next: &mut Var) -> Formula {
        let mut abs = |t: &Term| -> Term {
            if t.is_closed() {
                let v = *next;
                *next += 1;
                Term::Var(v)
            } else {
                t.clone()
            }
        };
        match self {
            Formula::Eq(a, b) => {
                let a = abs(a);
                Formula::Eq(a, abs(b))
            }
            Formula::In(a, b) => {
                let a = abs(a);
                Formula::In(a, abs(b))
            }
            Formula::AckMem(a, b) => {
                let a = abs(a);
                Formula::AckMem(a, abs(b))
            }
            Formula::Prov(..) => self.clone(),
            Formula::Not(f) => Formula::not(f.abstract_in(next)),
            Formula::Or(a, b) => {
                let a = a.abstract_in(next);
                Formula::or(a, b.abstract_in(next))
            }
            Formula::Exists(v, f) => Formula::exists(*v, f.abstract_in(next)),
        }
    }
}

/// A decidable family of formulas, closed under immediate subformulas.
pub trait FormulaFamily {
    fn contains(&self, f: &Formula) -> bool;
}

/// `Depth_k`: all formulas of depth at most `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthFamily(pub usize);

impl FormulaFamily for DepthFamily {
    fn contains(&self, f: &Formula) -> bool {
        f.depth() <= self.0
    }
}

impl<F: Fn(&Formula) -> bool> FormulaFamily for F {
    fn contains(&self, f: &Formula) -> bool {
        self(f)
    }
}

/// Whether `f` is a sentence obtained by substituting closed terms (or
/// constants `c_a`) for the free variables of some member of `family`.
pub fn is_fsent(f: &Formula, family: &impl FormulaFamily) -> bool {
    f.is_sentence() && (family.contains(f) || family.contains(&f.abstract_closed_terms()))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "v{v}"),
            Term::Const(c) => write!(f, "(c {c})"),
            Term::Zero => f.write_str("(num 0)"),
            Term::Succ(t) => write!(f, "(S {t})"),
            Term::Add(s, t) => write!(f, "(+ {s} {t})"),
            Term::Mul(s, t) => write!(f, "(* {s} {t})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(s, t) => write!(f, "(= {s} {t})"),
            Formula::In(s, t) => write!(f, "(in {s} {t})"),
            Formula::AckMem(s, t) => write!(f, "(ackmem {s} {t})"),
            Formula::Prov(name, body) => write!(f, "(prov {name} {body})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::Exists(v, g) => write!(f, "(exists v{v} {g})"),
        }
    }
}

impl From<u64> for Term {
    fn from(n: u64) -> Term {
        Term::Const(AckCode::from(n))
    }
}

impl From<BigUint> for Term {
    fn from(n: BigUint) -> Term {
        Term::Const(AckCode::from(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: u64) -> Term {
        Term::constant(n)
    }

    #[test]
    fn depth_examples() {
        assert_eq!(Formula::eq(c(0), c(1)).depth(), 1);
        assert_eq!(Formula::not(Formula::eq(c(0), c(1))).depth(), 2);
        let f = Formula::or(Formula::not(Formula::mem(Term::var(0), Term::var(1))), Formula::eq(Term::var(0), Term::var(1)));
        assert_eq!(f.depth(), 3);
    }

    #[test]
    fn immediate_subformula_examples() {
        assert!(Formula::eq(c(0), c(1)).immediate_subformulas().is_empty());
        let a = Formula::eq(c(0), c(0));
        let b = Formula::mem(c(0), c(1));
        let or = Formula::or(a.clone(), b.clone());
        assert_eq!(or.immediate_subformulas(), vec![&a, &b]);
        let body = Formula::mem(Term::var(0), c(3));
        let ex = Formula::exists(0, body.clone());
        assert_eq!(ex.immediate_subformulas(), vec![&body]);
    }

    #[test]
    fn substitution_examples() {
        let f = Formula::mem(Term::var(0), c(3));
        assert_eq!(f.substitute(0, &c(1)).unwrap(), Formula::mem(c(1), c(3)));

        let bound = Formula::exists(0, Formula::eq(Term::var(0), Term::var(1)));
        assert_eq!(bound.substitute(0, &c(2)).unwrap(), bound);

        let g = Formula::eq(Term::var(0), Term::var(0));
        let two = Term::numeral(2);
        assert_eq!(g.substitute(0, &two).unwrap(), Formula::eq(two.clone(), two));

        assert!(matches!(g.substitute(0, &Term::var(3)), Err(SubstError::OpenTerm(_))));
    }

    #[test]
    fn substitute_term_detects_capture() {
        let f = Formula::exists(1, Formula::eq(Term::var(0), Term::var(1)));
        assert!(matches!(f.substitute_term(0, &Term::var(1)), Err(SubstError::Capture { captured: 1, .. })));
        assert!(f.substitute_term(0, &Term::var(2)).is_ok());
    }

    #[test]
    fn fsent_examples() {
        assert!(is_fsent(&Formula::mem(c(0), c(1)), &DepthFamily(1)));
        assert!(!is_fsent(&Formula::mem(Term::var(0), c(1)), &DepthFamily(5)));
        assert!(!is_fsent(&Formula::not(Formula::mem(c(0), c(0))), &DepthFamily(1)));
    }

    #[test]
    fn signature_detection() {
        assert_eq!(Formula::mem(c(0), c(1)).signature(), Ok(Some(Signature::Set)));
        assert_eq!(Formula::eq(Term::var(0), Term::var(0)).signature(), Ok(None));
        assert!(Formula::eq(c(0), Term::Zero).signature().is_err());
    }

    #[test]
    fn instantiate_avoids_capture() {
        // template: ∃v1 (v1 = v0)
        let tpl = Formula::exists(1, Formula::eq(Term::var(1), Term::var(0)));
        let out = tpl.instantiate(&[Term::var(1)], 10);
        assert_eq!(out, Formula::exists(11, Formula::eq(Term::var(11), Term::var(1))));
    }

    #[test]
    fn balanced_disjunction_depth() {
        let atoms: Vec<_> = (0..32).map(|i| Formula::eq(c(i), c(i))).collect();
        let d = Formula::or_balanced(&atoms);
        assert_eq!(d.depth(), 6);
        assert_eq!(d.disjuncts().len(), 32);
    }
}
