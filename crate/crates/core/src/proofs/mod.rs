//! A one-sided sequent calculus over `¬`, `∨`, `∃`.
//!
//! A sequent is a finite set of formulas read disjunctively. Every rule
//! allows implicit weakening and contraction: a premise may be any subset of
//! the conclusion plus the rule's active formulas. The rules are
//!
//! | rule        | principal in conclusion | premises                              |
//! |-------------|-------------------------|---------------------------------------|
//! | `Ax`        | atomic `A` and `¬A`      | none                                  |
//! | `Or`        | `A ∨ B`                 | `Γ, A, B`                             |
//! | `And`       | `¬(A ∨ B)`              | `Γ, A*` and `Γ, B*`                   |
//! | `DoubleNeg` | `¬¬A`                   | `Γ, A`                                |
//! | `Exists t`  | `∃v A`                  | `Γ, A[t/v]`                           |
//! | `Forall y`  | `¬∃v A`                 | `Γ, (A[y/v])*`, `y` not free in `Γ`    |
//! | `Cut C`     | none                    | `Γ, C` and `Γ, C*`                    |
//! | `Assumption φ` | `φ ∈ Φ`              | none                                  |
//!
//! where `F*` is the dual: `G` if `F = ¬G`, otherwise `¬F`. A proof of `ψ`
//! from `Φ` is a tree whose root sequent lies inside `{ψ} ∪ Φ*`.

mod cutelim;
mod file;
mod fixtures;
mod search;

pub use cutelim::{eliminate_cuts, eliminate_cuts_with_stats, internalize_assumptions, BlowupStats};
pub use file::{ProofDocument, ProofFile, ProofNode};
pub use fixtures::{fixture_corpus, modus_ponens_fixture, Fixture};
pub use search::{bounded_search, bounded_search_with, SearchConfig, SearchStats, DEFAULT_SIZE_CEILING};

use crate::syntax::{godel_code, Formula, Term, Var};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use std::collections::{BTreeSet, HashSet};

pub type Sequent = BTreeSet<Formula>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofError {
    #[error("invalid proof node at {path:?}: {msg}")]
    Structural { path: Vec<usize>, msg: String },
    #[error("root sequent is not contained in the goal plus dual assumptions: extra {0}")]
    Root(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("variable capture while substituting: {0}")]
    Capture(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    Ax(Formula),
    Or(Formula),
    And(Formula),
    DoubleNeg(Formula),
    Exists { principal: Formula, witness: Term },
    Forall { principal: Formula, eigen: Var },
    Cut(Formula),
    Assumption(Formula),
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Ax(_) => "ax",
            Rule::Or(_) => "or",
            Rule::And(_) => "and",
            Rule::DoubleNeg(_) => "dneg",
            Rule::Exists { .. } => "exists",
            Rule::Forall { .. } => "forall",
            Rule::Cut(_) => "cut",
            Rule::Assumption(_) => "assumption",
        }
    }

    /// The formula the rule is about: the principal, or the cut formula.
    pub fn formula(&self) -> &Formula {
        match self {
            Rule::Ax(f) | Rule::Or(f) | Rule::And(f) | Rule::DoubleNeg(f) | Rule::Cut(f) | Rule::Assumption(f) => f,
            Rule::Exists { principal, .. } | Rule::Forall { principal, .. } => principal,
        }
    }

    fn arity(&self) -> usize {
        match self {
            Rule::Ax(_) | Rule::Assumption(_) => 0,
            Rule::Or(_) | Rule::DoubleNeg(_) | Rule::Exists { .. } | Rule::Forall { .. } => 1,
            Rule::And(_) | Rule::Cut(_) => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProofTree {
    pub sequent: Sequent,
    pub rule: Rule,
    pub children: Vec<ProofTree>,
}

/// `G` if `f = ¬G`, otherwise `¬f`.
pub fn dual(f: &Formula) -> Formula {
    match f {
        Formula::Not(g) => (**g).clone(),
        other => Formula::not(other.clone()),
    }
}

pub fn sequent<I: IntoIterator<Item = Formula>>(fs: I) -> Sequent {
    fs.into_iter().collect()
}

impl ProofTree {
    pub fn new(sequent: Sequent, rule: Rule, children: Vec<ProofTree>) -> Self {
        ProofTree { sequent, rule, children }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(ProofTree::node_count).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(ProofTree::height).max().unwrap_or(0)
    }

    pub fn cut_count(&self) -> usize {
        usize::from(matches!(self.rule, Rule::Cut(_))) + self.children.iter().map(ProofTree::cut_count).sum::<usize>()
    }

    pub fn is_cut_free(&self) -> bool {
        self.cut_count() == 0
    }

    /// Largest depth of a cut formula, 0 if cut-free.
    pub fn max_cut_rank(&self) -> usize {
        let here = match &self.rule {
            Rule::Cut(c) => c.depth(),
            _ => 0,
        };
        self.children.iter().map(ProofTree::max_cut_rank).fold(here, usize::max)
    }

    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a ProofTree)) {
        f(self);
        for c in &self.children {
            c.visit(f);
        }
    }

    /// Largest variable index occurring anywhere in the tree.
    pub fn max_var(&self) -> Option<Var> {
        let mut m: Option<Var> = None;
        self.visit(&mut |n| {
            for f in &n.sequent {
                m = m.max(f.max_var());
            }
            m = m.max(n.rule.formula().max_var());
            match &n.rule {
                Rule::Exists { witness, .. } => m = m.max(witness.max_var()),
                Rule::Forall { eigen, .. } => m = m.max(Some(*eigen)),
                _ => {}
            }
        });
        m
    }
}

fn err(path: &[usize], msg: impl Into<String>) -> ProofError {
    ProofError::Structural { path: path.to_vec(), msg: msg.into() }
}

fn subset_with(premise: &Sequent, conclusion: &Sequent, actives: &[&Formula]) -> Option<Formula> {
    premise.iter().find(|f| !conclusion.contains(*f) && !actives.contains(f)).cloned()
}

pub(crate) fn instantiate_body(body: &Formula, v: Var, t: &Term) -> Result<Formula, ProofError> {
    body.substitute_term(v, t).map_err(|e| ProofError::Capture(e.to_string()))
}

fn check_node(node: &ProofTree, assumptions: &HashSet<Formula>, path: &mut Vec<usize>) -> Result<(), ProofError> {
    let s = &node.sequent;
    if node.children.len() != node.rule.arity() {
        return Err(err(path, format!("rule {} takes {} premise(s), found {}", node.rule.name(), node.rule.arity(), node.children.len())));
    }
    let principal = node.rule.formula();
    if !matches!(node.rule, Rule::Cut(_)) && !s.contains(principal) {
        return Err(err(path, format!("principal {principal} is not in the sequent")));
    }
    let premise = |i: usize| &node.children[i].sequent;
    let need = |i: usize, actives: &[&Formula], path: &[usize]| -> Result<(), ProofError> {
        match subset_with(premise(i), s, actives) {
            None => Ok(()),
            Some(extra) => Err(err(path, format!("premise {i} of {} has stray formula {extra}", node.rule.name()))),
        }
    };
    match &node.rule {
        Rule::Ax(a) => {
            if !a.is_atomic() {
                return Err(err(path, format!("axiom formula {a} is not atomic")));
            }
            if !s.contains(&Formula::not(a.clone())) {
                return Err(err(path, format!("axiom needs ¬{a} in the sequent")));
            }
        }
        Rule::Assumption(f) => {
            if !assumptions.contains(f) {
                return Err(err(path, format!("{f} is not a declared assumption")));
            }
        }
        Rule::Or(f) => {
            let Formula::Or(a, b) = f else { return Err(err(path, format!("{f} is not a disjunction"))) };
            need(0, &[a, b], path)?;
        }
        Rule::And(f) => {
            let Formula::Not(inner) = f else { return Err(err(path, format!("{f} is not a negated disjunction"))) };
            let Formula::Or(a, b) = inner.as_ref() else { return Err(err(path, format!("{f} is not a negated disjunction"))) };
            need(0, &[&dual(a)], path)?;
            need(1, &[&dual(b)], path)?;
        }
        Rule::DoubleNeg(f) => {
            let Formula::Not(inner) = f else { return Err(err(path, format!("{f} is not a double negation"))) };
            let Formula::Not(h) = inner.as_ref() else { return Err(err(path, format!("{f} is not a double negation"))) };
            need(0, &[h], path)?;
        }
        Rule::Exists { principal: f, witness } => {
            let Formula::Exists(v, body) = f else { return Err(err(path, format!("{f} is not existential"))) };
            let inst = instantiate_body(body, *v, witness).map_err(|e| err(path, e.to_string()))?;
            need(0, &[&inst], path)?;
        }
        Rule::Forall { principal: f, eigen } => {
            let Formula::Not(inner) = f else { return Err(err(path, format!("{f} is not universal"))) };
            let Formula::Exists(v, body) = inner.as_ref() else { return Err(err(path, format!("{f} is not universal"))) };
            if let Some(g) = s.iter().find(|g| g.is_free(*eigen)) {
                return Err(err(path, format!("eigenvariable v{eigen} is free in {g}")));
            }
            let inst = dual(&instantiate_body(body, *v, &Term::Var(*eigen)).map_err(|e| err(path, e.to_string()))?);
            need(0, &[&inst], path)?;
        }
        Rule::Cut(c) => {
            need(0, &[c], path)?;
            need(1, &[&dual(c)], path)?;
        }
    }
    for (i, c) in node.children.iter().enumerate() {
        path.push(i);
        check_node(c, assumptions, path)?;
        path.pop();
    }
    Ok(())
}

/// Check every node and that the root proves `goal` from `assumptions`.
pub fn check_proof_detailed(pi: &ProofTree, assumptions: &[Formula], goal: &Formula) -> Result<(), ProofError> {
    let set: HashSet<Formula> = assumptions.iter().cloned().collect();
    check_node(pi, &set, &mut Vec::new())?;
    let allowed: HashSet<Formula> = assumptions.iter().map(dual).chain(std::iter::once(goal.clone())).collect();
    if let Some(extra) = pi.sequent.iter().find(|f| !allowed.contains(*f)) {
        return Err(ProofError::Root(extra.to_string()));
    }
    Ok(())
}

pub fn check_proof(pi: &ProofTree, assumptions: &[Formula], goal: &Formula) -> bool {
    check_proof_detailed(pi, assumptions, goal).is_ok()
}

/// Whether `f` is `g` with terms substituted for some free variables of `g`.
pub fn is_instance(f: &Formula, g: &Formula) -> bool {
    fn term_match(f: &Term, g: &Term, bound: &[Var], sub: &mut Vec<(Var, Term)>) -> bool {
        match g {
            Term::Var(v) if !bound.contains(v) => {
                if let Some((_, t)) = sub.iter().find(|(w, _)| w == v) {
                    return t == f;
                }
                // A substituted term must not mention variables bound at this position.
                let mut vs = BTreeSet::new();
                f.vars_into(&mut vs);
                if vs.iter().any(|w| bound.contains(w)) {
                    return false;
                }
                sub.push((*v, f.clone()));
                true
            }
            Term::Var(v) => matches!(f, Term::Var(w) if w == v),
            Term::Const(c) => matches!(f, Term::Const(d) if d == c),
            Term::Zero => matches!(f, Term::Zero),
            Term::Succ(a) => matches!(f, Term::Succ(b) if term_match(b, a, bound, sub)),
            Term::Add(a1, a2) => matches!(f, Term::Add(b1, b2) if term_match(b1, a1, bound, sub) && term_match(b2, a2, bound, sub)),
            Term::Mul(a1, a2) => matches!(f, Term::Mul(b1, b2) if term_match(b1, a1, bound, sub) && term_match(b2, a2, bound, sub)),
        }
    }
    fn go(f: &Formula, g: &Formula, bound: &mut Vec<Var>, sub: &mut Vec<(Var, Term)>) -> bool {
        match (f, g) {
            (Formula::Eq(a, b), Formula::Eq(c, d)) | (Formula::In(a, b), Formula::In(c, d)) | (Formula::AckMem(a, b), Formula::AckMem(c, d)) => {
                term_match(a, c, bound, sub) && term_match(b, d, bound, sub)
            }
            (Formula::Prov(n, a), Formula::Prov(m, b)) => n == m && go(a, b, bound, sub),
            (Formula::Not(a), Formula::Not(b)) => go(a, b, bound, sub),
            (Formula::Or(a1, a2), Formula::Or(b1, b2)) => go(a1, b1, bound, sub) && go(a2, b2, bound, sub),
            (Formula::Exists(v, a), Formula::Exists(w, b)) if v == w => {
                bound.push(*v);
                let ok = go(a, b, bound, sub);
                bound.pop();
                ok
            }
            _ => false,
        }
    }
    go(f, g, &mut Vec::new(), &mut Vec::new())
}

fn subformulas_into(f: &Formula, out: &mut HashSet<Formula>) {
    if out.insert(f.clone()) {
        for g in f.immediate_subformulas() {
            subformulas_into(g, out);
        }
    }
}

/// Every formula in every sequent, and every cut formula, is (up to dual) a
/// substitution instance of a subformula of `goal` or of an assumption.
pub fn has_subformula_property(pi: &ProofTree, assumptions: &[Formula], goal: &Formula) -> bool {
    let mut subs = HashSet::new();
    subformulas_into(goal, &mut subs);
    for a in assumptions {
        subformulas_into(a, &mut subs);
    }
    let subs: Vec<Formula> = subs.into_iter().collect();
    let mut cache: HashSet<Formula> = HashSet::new();
    let mut ok = true;
    let mut check = |f: &Formula| {
        if cache.contains(f) {
            return;
        }
        let d = dual(f);
        if subs.iter().any(|g| is_instance(f, g) || is_instance(&d, g)) {
            cache.insert(f.clone());
        } else {
            ok = false;
        }
    };
    pi.visit(&mut |n| {
        for f in &n.sequent {
            check(f);
        }
        check(n.rule.formula());
    });
    ok
}

/// `supexp(0) = 1`, `supexp(n+1) = 2^supexp(n)`. Fails once the value would
/// need more than `max_bits` bits.
pub fn supexp(n: u32, max_bits: u64) -> Result<BigUint, ProofError> {
    let mut v = BigUint::one();
    for i in 0..n {
        let e = v.to_u64().filter(|&e| e < max_bits).ok_or_else(|| ProofError::Resource(format!("supexp({}) needs more than {max_bits} bits", i + 1)))?;
        v = BigUint::one() << e;
    }
    Ok(v)
}

/// `2_r(n)`: `r` exponentiations stacked on `n`. `None` when it exceeds `max_bits` bits.
pub fn tower_bound(r: usize, n: u64, max_bits: u64) -> Option<BigUint> {
    let mut v = BigUint::from(n);
    for _ in 0..r {
        let e = v.to_u64().filter(|&e| e < max_bits)?;
        v = BigUint::one() << e;
    }
    Some(v)
}

/// A number for the whole proof that exceeds the Gödel code of every formula in it.
pub fn proof_code(pi: &ProofTree) -> BigUint {
    fn pair(a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        (&s * (&s + 1u32)) / 2u32 + b
    }
    let mut acc = BigUint::from(pi.rule.arity() as u32 + 1);
    for f in &pi.sequent {
        acc = pair(&acc, &godel_code(f));
    }
    acc = pair(&acc, &godel_code(pi.rule.formula()));
    for c in &pi.children {
        acc = pair(&acc, &proof_code(c));
    }
    acc + 1u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_any, Formula};

    fn f(s: &str) -> Formula {
        parse_any(s).unwrap()
    }

    fn excluded_middle(a: &Formula) -> ProofTree {
        let na = Formula::not(a.clone());
        let em = Formula::or(na.clone(), a.clone());
        let ax = ProofTree::new(sequent([na, a.clone()]), Rule::Ax(a.clone()), vec![]);
        ProofTree::new(sequent([em.clone()]), Rule::Or(em), vec![ax])
    }

    #[test]
    fn excluded_middle_checks() {
        let a = f("(in (c 0) (c 1))");
        let p = excluded_middle(&a);
        let goal = Formula::or(Formula::not(a.clone()), a.clone());
        assert_eq!(p.node_count(), 2);
        assert!(check_proof(&p, &[], &goal));
        assert!(!check_proof(&p, &[], &a));
        assert!(has_subformula_property(&p, &[], &goal));
    }

    #[test]
    fn modus_ponens_fixture_checks() {
        let fx = modus_ponens_fixture();
        assert_eq!(fx.proof.node_count(), 5);
        assert_eq!(fx.proof.cut_count(), 1);
        assert!(check_proof(&fx.proof, &fx.assumptions, &fx.goal));
    }

    #[test]
    fn structural_errors_carry_paths() {
        let a = f("(in (c 0) (c 1))");
        let b = f("(in (c 1) (c 0))");
        let mut p = excluded_middle(&a);
        p.children[0].rule = Rule::Ax(b);
        match check_proof_detailed(&p, &[], &p.sequent.iter().next().unwrap().clone()) {
            Err(ProofError::Structural { path, .. }) => assert_eq!(path, vec![0]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn eigenvariable_condition() {
        // ⊢ ∀v0 (v0 = v0 ∨ ¬ v0 = v0) is fine; reusing a variable free in the conclusion is not.
        let body = f("(or (= v0 v0) (not (= v0 v0)))");
        let all = Formula::forall(0, body.clone());
        let inst = body.clone();
        let eq = f("(= v0 v0)");
        let ax = ProofTree::new(sequent([eq.clone(), Formula::not(eq.clone())]), Rule::Ax(eq.clone()), vec![]);
        let or = ProofTree::new(sequent([inst.clone()]), Rule::Or(inst.clone()), vec![ax]);
        // all = ¬∃v0 ¬body; premise needs dual(¬body) = body.
        let good = ProofTree::new(sequent([all.clone()]), Rule::Forall { principal: all.clone(), eigen: 0 }, vec![or.clone()]);
        assert!(check_proof(&good, &[], &all));
        let extra = f("(= v0 (c 1))");
        let bad = ProofTree::new(sequent([all.clone(), extra]), Rule::Forall { principal: all.clone(), eigen: 0 }, vec![or]);
        assert!(matches!(check_proof_detailed(&bad, &[], &all), Err(ProofError::Structural { .. })));
    }

    #[test]
    fn foreign_cut_breaks_subformula_property() {
        let a = f("(in (c 0) (c 1))");
        let c = f("(= (c 5) (c 5))");
        let em = excluded_middle(&a);
        let goal = em.sequent.iter().next().unwrap().clone();
        let mut left = em.clone();
        left.sequent.insert(c.clone());
        let mut right = em.clone();
        right.sequent.insert(Formula::not(c.clone()));
        let cut = ProofTree::new(em.sequent.clone(), Rule::Cut(c), vec![left, right]);
        assert!(check_proof(&cut, &[], &goal));
        assert!(!has_subformula_property(&cut, &[], &goal));
    }

    #[test]
    fn instance_matching() {
        assert!(is_instance(&f("(in (c 0) (c 3))"), &f("(in v0 (c 3))")));
        assert!(!is_instance(&f("(in (c 0) (c 1))"), &f("(in v0 v0)")));
        assert!(is_instance(&f("(exists v1 (in v1 (c 2)))"), &f("(exists v1 (in v1 v0))")));
        assert!(!is_instance(&f("(exists v1 (in v1 v1))"), &f("(exists v1 (in v1 v0))")));
    }

    #[test]
    fn supexp_values() {
        let vals: Vec<_> = (0..5).map(|n| supexp(n, 1 << 20).unwrap()).collect();
        assert_eq!(vals, [1u32, 2, 4, 16, 65536].map(BigUint::from));
        assert_eq!(supexp(5, 1 << 20).unwrap().bits(), 65537);
        assert!(matches!(supexp(6, 1 << 20), Err(ProofError::Resource(_))));
        assert_eq!(tower_bound(2, 3, 64), Some(BigUint::from(256u32)));
        assert_eq!(tower_bound(3, 10, 64), None);
    }

    #[test]
    fn proof_code_dominates_formulas() {
        let fx = modus_ponens_fixture();
        let pc = proof_code(&fx.proof);
        for a in &fx.assumptions {
            assert!(godel_code(a) < pc);
        }
        assert!(godel_code(&fx.goal) < pc);
    }
}
