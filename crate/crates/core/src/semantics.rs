//! Exact Tarskian evaluation.
//!
//! Three evaluators live here:
//! - [`eval_in`] over any finite ∈-transitive [`Universe`], with quantifiers
//!   ranging over the whole domain in ascending order;
//! - [`eval_delta0`] over all of `V_ω`, for sentences whose quantifiers are
//!   bounded by a set term;
//! - [`ArithModel`] over the standard naturals, with quantifiers ranging
//!   below an explicit bound.
//!
//! A quantifier of the shape `∃v(v ∈ t ∧ ψ)` or `∀v(v ∈ t → ψ)` is evaluated by
//! scanning the members of `t` only. Both shapes expand to
//! `∃v ¬(¬(v ∈ t) ∨ χ)`, whose body is false outside `t`, so the shortcut is
//! exact in every evaluator.

use crate::hf::{ack_decode, ack_encode, ack_mem, AckCode, DomainSpec, HFSet, HfError};
use crate::syntax::{Formula, Signature, Term, Var};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("term {0} is not closed")]
    OpenTerm(String),
    #[error("formula {0} is not a sentence")]
    NotSentence(String),
    #[error("constant c_{0} does not denote an element of the domain")]
    Domain(String),
    #[error("formula {0} is outside the {1} signature")]
    Signature(String, Signature),
    #[error("unbounded quantifier in {0}")]
    Fragment(String),
    #[error("formula depth {depth} exceeds the evaluation budget {max}")]
    Depth { depth: usize, max: usize },
    #[error("no interpretation for provability predicate Prov_{0}")]
    Prov(String),
    #[error(transparent)]
    Hf(#[from] HfError),
}

/// Resource limits for evaluation. Witnesses are always searched in
/// ascending element order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalBudget {
    pub max_depth: usize,
}

impl Default for EvalBudget {
    fn default() -> Self {
        EvalBudget { max_depth: 256 }
    }
}

/// A finite, ∈-transitive set structure whose elements are indexed `0..size()`
/// in ascending code order.
pub trait Universe {
    fn size(&self) -> usize;
    fn is_member(&self, x: usize, y: usize) -> bool;
    /// Members of element `y`, ascending. Transitivity guarantees they are elements.
    fn members(&self, y: usize) -> Vec<usize>;
    /// Element denoted by `c_a`, if it is in the domain.
    fn lookup(&self, a: &AckCode) -> Option<usize>;
    /// Code of an element, when it is small enough to materialize.
    fn code_of(&self, id: usize) -> Option<AckCode>;
    fn describe(&self) -> String;
}

/// An initial segment of the naturals viewed as sets: `V_r` or the codes below `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteStructure {
    spec: DomainSpec,
    size: usize,
}

impl FiniteStructure {
    pub fn new(spec: DomainSpec, budget: usize) -> Result<Self, HfError> {
        let size = crate::hf::enumerate_domain(&spec, budget)?.len();
        Ok(FiniteStructure { spec, size })
    }

    pub fn rank(r: u32) -> Result<Self, HfError> {
        FiniteStructure::new(DomainSpec::rank(r), crate::hf::DEFAULT_DOMAIN_BUDGET)
    }

    pub fn codes_below(n: u64) -> Result<Self, HfError> {
        FiniteStructure::new(DomainSpec::code(n), crate::hf::DEFAULT_DOMAIN_BUDGET)
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn elements(&self) -> Vec<AckCode> {
        (0..self.size as u64).map(AckCode::from).collect()
    }
}

impl Universe for FiniteStructure {
    fn size(&self) -> usize {
        self.size
    }

    fn is_member(&self, x: usize, y: usize) -> bool {
        x < 64 && (y as u64 >> x) & 1 == 1
    }

    fn members(&self, y: usize) -> Vec<usize> {
        (0..64).filter(|&x| (y as u64 >> x) & 1 == 1).collect()
    }

    fn lookup(&self, a: &AckCode) -> Option<usize> {
        a.to_u64().and_then(|v| usize::try_from(v).ok()).filter(|&v| v < self.size)
    }

    fn code_of(&self, id: usize) -> Option<AckCode> {
        Some(AckCode::from(id))
    }

    fn describe(&self) -> String {
        self.spec.to_string()
    }
}

/// The transitive closure of a finite family of sets, as a structure. Used
/// where the needed sets (large ordinals, recursion functions) have codes far
/// beyond any rank cap but the closure itself is small.
#[derive(Debug, Clone)]
pub struct ClosureDomain {
    elements: Vec<HFSet>,
    index: HashMap<HFSet, usize>,
    members: Vec<Vec<usize>>,
    member_sets: Vec<Vec<bool>>,
    codes: Vec<Option<AckCode>>,
}

impl ClosureDomain {
    /// Smallest transitive set containing every root.
    pub fn from_roots(roots: impl IntoIterator<Item = HFSet>) -> Self {
        let mut seen: std::collections::BTreeSet<HFSet> = Default::default();
        let mut stack: Vec<HFSet> = roots.into_iter().collect();
        while let Some(s) = stack.pop() {
            if seen.contains(&s) {
                continue;
            }
            stack.extend(s.children().iter().cloned());
            seen.insert(s);
        }
        let elements: Vec<HFSet> = seen.into_iter().collect();
        let index: HashMap<HFSet, usize> = elements.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let members: Vec<Vec<usize>> = elements.iter().map(|s| s.children().iter().map(|c| index[c]).collect()).collect();
        let n = elements.len();
        let member_sets = members
            .iter()
            .map(|ms| {
                let mut row = vec![false; n];
                for &m in ms {
                    row[m] = true;
                }
                row
            })
            .collect();
        let codes = elements.iter().map(|s| ack_encode(s).ok()).collect();
        ClosureDomain { elements, index, members, member_sets, codes }
    }

    pub fn element(&self, id: usize) -> &HFSet {
        &self.elements[id]
    }

    pub fn id_of(&self, s: &HFSet) -> Option<usize> {
        self.index.get(s).copied()
    }
}

impl Universe for ClosureDomain {
    fn size(&self) -> usize {
        self.elements.len()
    }

    fn is_member(&self, x: usize, y: usize) -> bool {
        self.member_sets[y][x]
    }

    fn members(&self, y: usize) -> Vec<usize> {
        self.members[y].clone()
    }

    fn lookup(&self, a: &AckCode) -> Option<usize> {
        // Codes of elements fit in memory, so anything longer cannot denote one.
        if a.value().bits() > crate::hf::MAX_CODE_BITS {
            return None;
        }
        self.index.get(&ack_decode(a)).copied()
    }

    fn code_of(&self, id: usize) -> Option<AckCode> {
        self.codes[id].clone()
    }

    fn describe(&self) -> String {
        format!("closure domain of {} sets", self.elements.len())
    }
}

/// If `f` is `∃v ¬(¬(v ∈ t) ∨ χ)` with `v` not in `t`, return `(v, t, χ)`.
pub fn bounded_quantifier(f: &Formula) -> Option<(Var, &Term, &Formula)> {
    let Formula::Exists(v, body) = f else { return None };
    let Formula::Not(inner) = body.as_ref() else { return None };
    let Formula::Or(left, rest) = inner.as_ref() else { return None };
    let Formula::Not(atom) = left.as_ref() else { return None };
    match atom.as_ref() {
        Formula::In(Term::Var(w), t) if w == v && !t.contains_var(*v) => Some((*v, t, rest)),
        _ => None,
    }
}

fn check_sentence(phi: &Formula, sig: Signature, budget: EvalBudget) -> Result<(), EvalError> {
    if !phi.is_sentence() {
        return Err(EvalError::NotSentence(phi.to_string()));
    }
    if !phi.fits_signature(sig) {
        return Err(EvalError::Signature(phi.to_string(), sig));
    }
    let depth = phi.depth();
    if depth > budget.max_depth {
        return Err(EvalError::Depth { depth, max: budget.max_depth });
    }
    Ok(())
}

struct SetEval<'a, U: Universe + ?Sized> {
    u: &'a U,
    consts: HashMap<AckCode, usize>,
    env: Vec<usize>,
}

impl<U: Universe + ?Sized> SetEval<'_, U> {
    fn term(&self, t: &Term) -> usize {
        match t {
            Term::Var(v) => self.env[*v as usize],
            Term::Const(c) => self.consts[c],
            _ => unreachable!("signature checked"),
        }
    }

    fn eval(&mut self, f: &Formula) -> bool {
        match f {
            Formula::Eq(s, t) => self.term(s) == self.term(t),
            Formula::In(s, t) => self.u.is_member(self.term(s), self.term(t)),
            Formula::Not(g) => !self.eval(g),
            Formula::Or(a, b) => self.eval(a) || self.eval(b),
            Formula::Exists(v, g) => {
                let slot = *v as usize;
                let saved = self.env[slot];
                let found = match bounded_quantifier(f) {
                    Some((_, t, _)) => {
                        let range = self.u.members(self.term(t));
                        range.into_iter().any(|a| {
                            self.env[slot] = a;
                            self.eval(g)
                        })
                    }
                    None => (0..self.u.size()).any(|a| {
                        self.env[slot] = a;
                        self.eval(g)
                    }),
                };
                self.env[slot] = saved;
                found
            }
            Formula::AckMem(..) | Formula::Prov(..) => unreachable!("signature checked"),
        }
    }
}

/// Truth of a set-signature sentence in a finite universe.
pub fn eval_in<U: Universe + ?Sized>(phi: &Formula, u: &U, budget: EvalBudget) -> Result<bool, EvalError> {
    check_sentence(phi, Signature::Set, budget)?;
    let mut consts = HashMap::new();
    for c in phi.constants() {
        let id = u.lookup(&c).ok_or_else(|| EvalError::Domain(c.to_string()))?;
        consts.insert(c, id);
    }
    let slots = phi.max_var().map_or(0, |m| m as usize + 1);
    let mut ev = SetEval { u, consts, env: vec![0; slots] };
    Ok(ev.eval(phi))
}

/// Truth of a set-signature formula in a finite universe, with each free
/// variable given an element index by `assignment`.
pub fn eval_with<U: Universe + ?Sized>(phi: &Formula, u: &U, assignment: &[(Var, usize)], budget: EvalBudget) -> Result<bool, EvalError> {
    if let Some(v) = phi.free_vars().into_iter().find(|v| !assignment.iter().any(|(w, _)| w == v)) {
        return Err(EvalError::NotSentence(format!("{phi} (v{v} unassigned)")));
    }
    if !phi.fits_signature(Signature::Set) {
        return Err(EvalError::Signature(phi.to_string(), Signature::Set));
    }
    let depth = phi.depth();
    if depth > budget.max_depth {
        return Err(EvalError::Depth { depth, max: budget.max_depth });
    }
    let mut consts = HashMap::new();
    for c in phi.constants() {
        let id = u.lookup(&c).ok_or_else(|| EvalError::Domain(c.to_string()))?;
        consts.insert(c, id);
    }
    let top = assignment.iter().map(|(v, _)| *v).chain(phi.max_var()).max();
    let mut env = vec![0; top.map_or(0, |m| m as usize + 1)];
    for &(v, a) in assignment {
        if a >= u.size() {
            return Err(EvalError::Domain(format!("element #{a}")));
        }
        env[v as usize] = a;
    }
    Ok(SetEval { u, consts, env }.eval(phi))
}

/// Truth of a set-signature sentence in a finite structure.
pub fn eval_sentence(phi: &Formula, s: &FiniteStructure) -> Result<bool, EvalError> {
    eval_in(phi, s, EvalBudget::default())
}

/// The least element `a` (in ascending order) with `ψ(c_a)` true, for `φ = ∃v ψ`.
pub fn first_witness<U: Universe + ?Sized>(phi: &Formula, u: &U) -> Result<Option<usize>, EvalError> {
    let Formula::Exists(v, body) = phi else { return Ok(None) };
    check_sentence(phi, Signature::Set, EvalBudget::default())?;
    for a in 0..u.size() {
        let code = u.code_of(a).ok_or_else(|| EvalError::Domain(format!("element #{a}")))?;
        let inst = body.replace_free(*v, &Term::Const(code));
        if eval_in(&inst, u, EvalBudget::default())? {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// Whether every quantifier of `phi` is bounded by a set term.
pub fn is_delta0(phi: &Formula) -> bool {
    match phi {
        Formula::Eq(..) | Formula::In(..) | Formula::AckMem(..) | Formula::Prov(..) => true,
        Formula::Not(g) => is_delta0(g),
        Formula::Or(a, b) => is_delta0(a) && is_delta0(b),
        Formula::Exists(_, g) => bounded_quantifier(phi).is_some() && is_delta0(g),
    }
}

struct Delta0Eval {
    env: Vec<Option<AckCode>>,
}

impl Delta0Eval {
    fn term(&self, t: &Term) -> AckCode {
        match t {
            Term::Var(v) => self.env[*v as usize].clone().expect("bound before use"),
            Term::Const(c) => c.clone(),
            _ => unreachable!("signature checked"),
        }
    }

    fn eval(&mut self, f: &Formula) -> bool {
        match f {
            Formula::Eq(s, t) => self.term(s) == self.term(t),
            Formula::In(s, t) => ack_mem(&self.term(s), &self.term(t)),
            Formula::Not(g) => !self.eval(g),
            Formula::Or(a, b) => self.eval(a) || self.eval(b),
            Formula::Exists(v, g) => {
                let (_, t, _) = bounded_quantifier(f).expect("fragment checked");
                let slot = *v as usize;
                let saved = self.env[slot].take();
                let found = self.term(t).members().into_iter().any(|a| {
                    self.env[slot] = Some(a);
                    self.eval(g)
                });
                self.env[slot] = saved;
                found
            }
            Formula::AckMem(..) | Formula::Prov(..) => unreachable!("signature checked"),
        }
    }
}

/// Truth in `(V_ω, ∈)` of a sentence whose quantifiers are all bounded.
pub fn eval_delta0(phi: &Formula) -> Result<bool, EvalError> {
    check_sentence(phi, Signature::Set, EvalBudget::default())?;
    if !is_delta0(phi) {
        return Err(EvalError::Fragment(phi.to_string()));
    }
    let slots = phi.max_var().map_or(0, |m| m as usize + 1);
    Ok(Delta0Eval { env: vec![None; slots] }.eval(phi))
}

/// Standard-model value of a closed arithmetic term.
pub fn eval_term(t: &Term) -> Result<BigUint, EvalError> {
    match t {
        Term::Zero => Ok(BigUint::zero()),
        Term::Succ(s) => Ok(eval_term(s)? + 1u32),
        Term::Add(a, b) => Ok(eval_term(a)? + eval_term(b)?),
        Term::Mul(a, b) => Ok(eval_term(a)? * eval_term(b)?),
        Term::Var(_) => Err(EvalError::OpenTerm(t.to_string())),
        Term::Const(_) => Err(EvalError::Signature(t.to_string(), Signature::Arith)),
    }
}

/// The standard naturals with quantifiers ranging over `0..bound`.
///
/// For a sentence whose quantifiers are bounded by terms of value `< bound`
/// this is exactly truth in ℕ. `AckMem` is the bit test; `Prov` atoms are
/// answered by `prov`, after the free variables of the quoted body have been
/// replaced by the numerals of their current values.
pub struct ArithModel<'a> {
    pub bound: u64,
    pub prov: Option<&'a dyn Fn(&str, &Formula) -> bool>,
}

impl<'a> ArithModel<'a> {
    pub fn new(bound: u64) -> Self {
        ArithModel { bound, prov: None }
    }

    pub fn with_prov(bound: u64, prov: &'a dyn Fn(&str, &Formula) -> bool) -> Self {
        ArithModel { bound, prov: Some(prov) }
    }

    pub fn eval(&self, phi: &Formula) -> Result<bool, EvalError> {
        check_sentence(phi, Signature::Arith, EvalBudget::default())?;
        let slots = phi.max_var().map_or(0, |m| m as usize + 1);
        self.eval_env(phi, &mut vec![None; slots])
    }

    fn term(&self, t: &Term, env: &[Option<u64>]) -> BigUint {
        match t {
            Term::Var(v) => BigUint::from(env[*v as usize].expect("bound before use")),
            Term::Zero => BigUint::zero(),
            Term::Succ(s) => self.term(s, env) + 1u32,
            Term::Add(a, b) => self.term(a, env) + self.term(b, env),
            Term::Mul(a, b) => self.term(a, env) * self.term(b, env),
            Term::Const(_) => unreachable!("signature checked"),
        }
    }

    fn eval_env(&self, f: &Formula, env: &mut Vec<Option<u64>>) -> Result<bool, EvalError> {
        Ok(match f {
            Formula::Eq(s, t) => self.term(s, env) == self.term(t, env),
            Formula::AckMem(s, t) => {
                let x = self.term(s, env);
                let c = self.term(t, env);
                x.to_u64().is_some_and(|b| c.bit(b))
            }
            Formula::Prov(name, body) => {
                let prov = self.prov.ok_or_else(|| EvalError::Prov(name.clone()))?;
                let mut closed = (**body).clone();
                for v in body.free_vars() {
                    let n = env.get(v as usize).copied().flatten().expect("bound before use");
                    closed = closed.replace_free(v, &Term::numeral(n));
                }
                prov(name, &closed)
            }
            Formula::Not(g) => !self.eval_env(g, env)?,
            Formula::Or(a, b) => self.eval_env(a, env)? || self.eval_env(b, env)?,
            Formula::Exists(v, g) => {
                let slot = *v as usize;
                let saved = env[slot];
                let mut found = false;
                for n in 0..self.bound {
                    env[slot] = Some(n);
                    if self.eval_env(g, env)? {
                        found = true;
                        break;
                    }
                }
                env[slot] = saved;
                found
            }
            Formula::In(..) => unreachable!("signature checked"),
        })
    }
}

/// Truth in ℕ with quantifiers below `bound`.
pub fn eval_arith(phi: &Formula, bound: u64) -> Result<bool, EvalError> {
    ArithModel::new(bound).eval(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, parse_term};

    fn set(s: &str) -> Formula {
        parse(s, Signature::Set).unwrap()
    }

    #[test]
    fn term_values() {
        assert_eq!(eval_term(&parse_term("(S (num 0))").unwrap()).unwrap(), BigUint::from(1u32));
        assert_eq!(eval_term(&parse_term("(+ (S (num 0)) (S (num 0)))").unwrap()).unwrap(), BigUint::from(2u32));
        assert_eq!(eval_term(&parse_term("(* (num 2) (num 3))").unwrap()).unwrap(), BigUint::from(6u32));
        assert!(matches!(eval_term(&Term::var(0)), Err(EvalError::OpenTerm(_))));
    }

    #[test]
    fn sentence_examples() {
        let v3 = FiniteStructure::rank(3).unwrap();
        assert!(eval_sentence(&set("(in (c 0) (c 1))"), &v3).unwrap());
        assert!(eval_sentence(&set("(exists v0 (in v0 (c 3)))"), &v3).unwrap());
        assert!(eval_sentence(&set("(not (exists v0 (in v0 (c 0))))"), &v3).unwrap());
        assert!(matches!(eval_sentence(&set("(in (c 0) (c 4))"), &v3), Err(EvalError::Domain(_))));
        assert!(matches!(eval_sentence(&set("(in v0 (c 1))"), &v3), Err(EvalError::NotSentence(_))));
    }

    #[test]
    fn witness_is_least() {
        let v3 = FiniteStructure::rank(3).unwrap();
        assert_eq!(first_witness(&set("(exists v0 (in v0 (c 3)))"), &v3).unwrap(), Some(0));
        assert_eq!(first_witness(&set("(exists v0 (in (c 1) v0))"), &v3).unwrap(), Some(2));
        assert_eq!(first_witness(&set("(exists v0 (in v0 (c 0)))"), &v3).unwrap(), None);
    }

    #[test]
    fn delta0_examples() {
        assert!(eval_delta0(&set("(exists v0 (and (in v0 (c 6)) (= v0 (c 1))))")).unwrap());
        assert!(eval_delta0(&set("(forall v0 (imp (in v0 (c 0)) (not (= v0 v0))))")).unwrap());
        assert!(!eval_delta0(&set("(exists v0 (and (in v0 (c 3)) (exists v1 (and (in v1 v0) (= v1 (c 1))))))")).unwrap());
        assert!(matches!(eval_delta0(&set("(exists v0 (= v0 v0))")), Err(EvalError::Fragment(_))));
        // c_(2^100) has member 100, far outside any rank cap.
        let big = format!("(exists v0 (and (in v0 (c {})) (= v0 (c 100))))", BigUint::from(1u32) << 100u32);
        assert!(eval_delta0(&set(&big)).unwrap());
    }

    #[test]
    fn cap_coherence_on_small_sentences() {
        let v4 = FiniteStructure::rank(4).unwrap();
        let phis = [
            "(forall v0 (imp (in v0 (c 11)) (exists v1 (and (in v1 v0) (= v1 (c 0))))))",
            "(exists v0 (and (in v0 (c 13)) (forall v1 (imp (in v1 v0) (in v1 (c 3))))))",
            "(forall v0 (imp (in v0 (c 15)) (or (= v0 (c 0)) (in (c 0) v0))))",
        ];
        for p in phis {
            let f = set(p);
            assert_eq!(eval_delta0(&f).unwrap(), eval_sentence(&f, &v4).unwrap(), "{p}");
        }
    }

    #[test]
    fn closure_domain_of_ordinals() {
        let mut o = HFSet::empty();
        let mut ords = vec![o.clone()];
        for _ in 0..6 {
            o = o.successor();
            ords.push(o.clone());
        }
        let d = ClosureDomain::from_roots(ords.clone());
        assert_eq!(d.size(), 7);
        for (i, s) in ords.iter().enumerate() {
            assert_eq!(d.id_of(s), Some(i));
            assert_eq!(d.members(i), (0..i).collect::<Vec<_>>());
        }
        assert_eq!(d.code_of(3), Some(AckCode::from(11u64)));
        assert!(d.code_of(6).is_none());
        let f = set("(forall v0 (forall v1 (or (in v0 v1) (or (= v0 v1) (in v1 v0)))))");
        assert!(eval_in(&f, &d, EvalBudget::default()).unwrap());
    }

    #[test]
    fn arithmetic_model() {
        let f = parse("(exists v0 (= (+ v0 v0) (S (num 0))))", Signature::Arith).unwrap();
        assert!(!eval_arith(&f, 9).unwrap());
        let g = parse("(exists v0 (= (* v0 v0) (num 4)))", Signature::Arith).unwrap();
        assert!(eval_arith(&g, 9).unwrap());
        let m = Formula::AckMem(Term::numeral(1), Term::numeral(2));
        assert!(eval_arith(&m, 1).unwrap());
        let p = parse("(prov U (= v0 v0))", Signature::Arith);
        assert!(p.is_ok());
        let q = Formula::Prov("U".into(), Box::new(Formula::eq(Term::Zero, Term::Zero)));
        assert!(matches!(eval_arith(&q, 1), Err(EvalError::Prov(_))));
        let yes = |_: &str, _: &Formula| true;
        assert!(ArithModel::with_prov(1, &yes).eval(&q).unwrap());
    }

    #[test]
    fn budget_limits_depth() {
        let v3 = FiniteStructure::rank(3).unwrap();
        let f = set("(not (not (not (in (c 0) (c 1)))))");
        assert!(matches!(eval_in(&f, &v3, EvalBudget { max_depth: 3 }), Err(EvalError::Depth { depth: 4, max: 3 })));
    }
}
