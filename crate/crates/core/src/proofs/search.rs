//! Iterative-deepening search for cut-free proofs under a node budget.
//!
//! Invertible rules (`Or`, `And`, `DoubleNeg`, `Forall`) are applied eagerly
//! to the first eligible formula; `Exists` keeps its principal and tries each
//! witness drawn from the terms of the sequent. A branch is abandoned when no
//! pair of complementary literals, and no assumption, can ever appear in it.

use super::{dual, instantiate_body, is_instance, sequent, ProofError, ProofTree, Rule, Sequent};
use crate::hf::AckCode;
use crate::syntax::{Formula, Signature, Term, Var};
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap};
use std::hash::{Hash, Hasher};
use std::rc::Rc;

/// Failed sequents remembered before the memo stops growing.
const FAILURE_MEMO_CAP: usize = 1 << 20;

fn fingerprint<T: Hash + ?Sized>(x: &T) -> u64 {
    let mut h = DefaultHasher::new();
    x.hash(&mut h);
    h.finish()
}

/// Largest node budget accepted by [`bounded_search`].
pub const DEFAULT_SIZE_CEILING: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub size_ceiling: usize,
    /// Cap on rule applications tried, across all deepening rounds.
    pub max_expansions: u64,
    /// Close a branch when it contains an assumption verbatim.
    pub assumption_leaves: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { size_ceiling: DEFAULT_SIZE_CEILING, max_expansions: 20_000_000, assumption_leaves: true }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SearchStats {
    pub expansions: u64,
    pub pruned: u64,
    pub rounds: usize,
}

/// A term of an atom pattern. Bound variables of the formula become
/// unification variables `U`; free variables stay rigid.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Pat {
    U(u32),
    Rigid(Var),
    Const(AckCode),
    Zero,
    Succ(Box<Pat>),
    Add(Box<Pat>, Box<Pat>),
    Mul(Box<Pat>, Box<Pat>),
}

impl Pat {
    fn of(t: &Term, bound: &[(Var, u32)]) -> Pat {
        match t {
            Term::Var(v) => match bound.iter().rev().find(|(w, _)| w == v) {
                Some((_, u)) => Pat::U(*u),
                None => Pat::Rigid(*v),
            },
            Term::Const(c) => Pat::Const(c.clone()),
            Term::Zero => Pat::Zero,
            Term::Succ(a) => Pat::Succ(Box::new(Pat::of(a, bound))),
            Term::Add(a, b) => Pat::Add(Box::new(Pat::of(a, bound)), Box::new(Pat::of(b, bound))),
            Term::Mul(a, b) => Pat::Mul(Box::new(Pat::of(a, bound)), Box::new(Pat::of(b, bound))),
        }
    }

    fn shifted(&self, by: u32) -> Pat {
        match self {
            Pat::U(u) => Pat::U(u + by),
            Pat::Succ(a) => Pat::Succ(Box::new(a.shifted(by))),
            Pat::Add(a, b) => Pat::Add(Box::new(a.shifted(by)), Box::new(b.shifted(by))),
            Pat::Mul(a, b) => Pat::Mul(Box::new(a.shifted(by)), Box::new(b.shifted(by))),
            other => other.clone(),
        }
    }

    fn resolve<'p>(&'p self, sub: &'p HashMap<u32, Pat>) -> &'p Pat {
        let mut p = self;
        while let Pat::U(u) = p {
            match sub.get(u) {
                Some(q) => p = q,
                None => break,
            }
        }
        p
    }

    fn occurs(&self, u: u32, sub: &HashMap<u32, Pat>) -> bool {
        match self.resolve(sub) {
            Pat::U(w) => *w == u,
            Pat::Succ(a) => a.occurs(u, sub),
            Pat::Add(a, b) | Pat::Mul(a, b) => a.occurs(u, sub) || b.occurs(u, sub),
            _ => false,
        }
    }

    fn unify(&self, other: &Pat, sub: &mut HashMap<u32, Pat>) -> bool {
        let (a, b) = (self.resolve(sub).clone(), other.resolve(sub).clone());
        match (&a, &b) {
            (Pat::U(x), Pat::U(y)) if x == y => true,
            (Pat::U(x), t) | (t, Pat::U(x)) => {
                if t.occurs(*x, sub) {
                    return false;
                }
                sub.insert(*x, t.clone());
                true
            }
            (Pat::Rigid(x), Pat::Rigid(y)) => x == y,
            (Pat::Const(x), Pat::Const(y)) => x == y,
            (Pat::Zero, Pat::Zero) => true,
            (Pat::Succ(x), Pat::Succ(y)) => x.unify(y, sub),
            (Pat::Add(x1, x2), Pat::Add(y1, y2)) | (Pat::Mul(x1, x2), Pat::Mul(y1, y2)) => x1.unify(y1, sub) && x2.unify(y2, sub),
            _ => false,
        }
    }
}

/// Bound on unification variables per formula, used to rename two patterns apart.
const RENAME_APART: u32 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
enum AtomPat {
    Binary(u8, Pat, Pat),
    Prov(String),
}

impl AtomPat {
    fn of(f: &Formula, bound: &[(Var, u32)]) -> AtomPat {
        match f {
            Formula::Eq(a, b) => AtomPat::Binary(0, Pat::of(a, bound), Pat::of(b, bound)),
            Formula::In(a, b) => AtomPat::Binary(1, Pat::of(a, bound), Pat::of(b, bound)),
            Formula::AckMem(a, b) => AtomPat::Binary(2, Pat::of(a, bound), Pat::of(b, bound)),
            Formula::Prov(l, _) => AtomPat::Prov(l.clone()),
            _ => unreachable!("atoms only"),
        }
    }

    /// Some instances of the two patterns coincide.
    fn meets(&self, other: &AtomPat) -> bool {
        match (self, other) {
            (AtomPat::Binary(p, a1, a2), AtomPat::Binary(q, b1, b2)) => {
                let mut sub = HashMap::new();
                p == q && a1.unify(&b1.shifted(RENAME_APART), &mut sub) && a2.unify(&b2.shifted(RENAME_APART), &mut sub)
            }
            (AtomPat::Prov(a), AtomPat::Prov(b)) => a == b,
            _ => false,
        }
    }
}

/// What can ever surface from one formula: signed atoms and closable assumptions.
#[derive(Debug, Default)]
struct Potential {
    id: u32,
    pos: Vec<AtomPat>,
    neg: Vec<AtomPat>,
    assumption: bool,
}

struct Searcher<'a> {
    assumptions: &'a [Formula],
    sig: Signature,
    cfg: SearchConfig,
    stats: SearchStats,
    /// Failed sequents by 64-bit hash. A collision can only hide a proof.
    failed: HashMap<u64, usize>,
    potential: HashMap<u64, Rc<Potential>>,
    /// Whether some positive atom of the first potential meets a negative
    /// atom of the second, by potential id.
    pos_meets_neg: HashMap<(u32, u32), bool>,
    next_id: u32,
}

impl<'a> Searcher<'a> {
    fn potential_of(&mut self, f: &Formula) -> Rc<Potential> {
        let key = fingerprint(f);
        if let Some(p) = self.potential.get(&key) {
            return p.clone();
        }
        fn walk(f: &Formula, positive: bool, leaves: bool, assumptions: &[Formula], bound: &mut Vec<(Var, u32)>, out: &mut Potential) {
            if positive && !out.assumption && leaves && assumptions.iter().any(|a| is_instance(a, f)) {
                out.assumption = true;
            }
            match f {
                Formula::Not(g) => walk(g, !positive, leaves, assumptions, bound, out),
                Formula::Or(a, b) => {
                    walk(a, positive, leaves, assumptions, bound, out);
                    walk(b, positive, leaves, assumptions, bound, out);
                }
                Formula::Exists(v, a) => {
                    bound.push((*v, bound.len() as u32));
                    walk(a, positive, leaves, assumptions, bound, out);
                    bound.pop();
                }
                atom => {
                    let p = AtomPat::of(atom, bound);
                    let side = if positive { &mut out.pos } else { &mut out.neg };
                    if !side.contains(&p) {
                        side.push(p);
                    }
                }
            }
        }
        let mut out = Potential { id: self.next_id, ..Potential::default() };
        self.next_id += 1;
        walk(f, true, self.cfg.assumption_leaves, self.assumptions, &mut Vec::new(), &mut out);
        let rc = Rc::new(out);
        if self.potential.len() < FAILURE_MEMO_CAP {
            self.potential.insert(key, rc.clone());
        }
        rc
    }

    fn pos_meets_neg(&mut self, p: &Potential, q: &Potential) -> bool {
        if let Some(&b) = self.pos_meets_neg.get(&(p.id, q.id)) {
            return b;
        }
        let b = p.pos.iter().any(|a| q.neg.iter().any(|c| a.meets(c)));
        if self.pos_meets_neg.len() < FAILURE_MEMO_CAP {
            self.pos_meets_neg.insert((p.id, q.id), b);
        }
        b
    }

    /// `gamma` without the formulas that can never contribute to a cut-free
    /// proof: no atom they can surface meets a complementary atom anywhere in
    /// `gamma`, and no assumption leaf can come from them. Iterated to a
    /// fixpoint, since dropping one formula can strand another. `None` when
    /// nothing is dropped.
    fn strip_pure(&mut self, gamma: &Sequent) -> Option<Sequent> {
        let pots: Vec<Rc<Potential>> = gamma.iter().map(|f| self.potential_of(f)).collect();
        let mut live: Vec<usize> = (0..pots.len()).collect();
        loop {
            let before = live.len();
            let snapshot = live.clone();
            live.retain(|&i| {
                let p = &pots[i];
                p.assumption || snapshot.iter().any(|&j| self.pos_meets_neg(p, &pots[j]) || self.pos_meets_neg(&pots[j], p))
            });
            if live.len() == before {
                break;
            }
        }
        if live.len() == pots.len() {
            return None;
        }
        Some(gamma.iter().enumerate().filter(|(i, _)| live.binary_search(i).is_ok()).map(|(_, f)| f.clone()).collect())
    }

    fn witnesses(&self, gamma: &Sequent) -> Vec<Term> {
        let mut out = BTreeSet::new();
        for f in gamma {
            let free = f.free_vars();
            f.visit_terms(&mut |t| {
                let mut subs = Vec::new();
                t.subterms_into(&mut subs);
                for s in subs {
                    match s {
                        Term::Var(v) if free.contains(v) => {
                            out.insert(s.clone());
                        }
                        _ if s.is_closed() => {
                            out.insert(s.clone());
                        }
                        _ => {}
                    }
                }
            });
        }
        if out.is_empty() {
            out.insert(match self.sig {
                Signature::Set => Term::constant(0u64),
                Signature::Arith => Term::Zero,
            });
        }
        out.into_iter().collect()
    }

    fn tick(&mut self) -> Result<(), ProofError> {
        self.stats.expansions += 1;
        if self.stats.expansions > self.cfg.max_expansions {
            return Err(ProofError::Resource(format!("proof search exceeded {} expansions", self.cfg.max_expansions)));
        }
        Ok(())
    }

    fn prove(&mut self, gamma: &Sequent, budget: usize) -> Result<Option<ProofTree>, ProofError> {
        if budget == 0 {
            return Ok(None);
        }
        // A proof of a subset is a proof of the whole, as weakening is implicit.
        let reduced = if budget > 1 { self.strip_pure(gamma) } else { None };
        if let Some(r) = &reduced {
            self.stats.pruned += 1;
            if r.is_empty() {
                return Ok(None);
            }
        }
        let gamma = reduced.as_ref().unwrap_or(gamma);
        let key = fingerprint(gamma);
        if self.failed.get(&key).is_some_and(|&b| b >= budget) {
            return Ok(None);
        }
        let found = self.prove_uncached(gamma, budget)?;
        if found.is_none() && self.failed.len() < FAILURE_MEMO_CAP {
            self.failed.insert(key, budget);
        }
        Ok(found)
    }

    fn prove_uncached(&mut self, gamma: &Sequent, budget: usize) -> Result<Option<ProofTree>, ProofError> {
        self.tick()?;
        for f in gamma {
            if f.is_atomic() && gamma.contains(&Formula::not(f.clone())) {
                return Ok(Some(ProofTree::new(gamma.clone(), Rule::Ax(f.clone()), vec![])));
            }
        }
        if let Some(a) = self.assumptions.iter().find(|a| self.cfg.assumption_leaves && gamma.contains(*a)) {
            return Ok(Some(ProofTree::new(gamma.clone(), Rule::Assumption(a.clone()), vec![])));
        }
        if budget == 1 {
            return Ok(None);
        }
        let rest = |f: &Formula, add: &[Formula]| {
            let mut s = gamma.clone();
            s.remove(f);
            s.extend(add.iter().cloned());
            s
        };
        let invertible = gamma.iter().find(|f| match f {
            Formula::Or(..) => true,
            Formula::Not(g) => matches!(g.as_ref(), Formula::Or(..) | Formula::Not(_) | Formula::Exists(..)),
            _ => false,
        });
        if let Some(f) = invertible {
            let f = f.clone();
            return match &f {
                Formula::Or(a, b) => {
                    let prem = rest(&f, &[(**a).clone(), (**b).clone()]);
                    Ok(self.prove(&prem, budget - 1)?.map(|c| ProofTree::new(gamma.clone(), Rule::Or(f.clone()), vec![c])))
                }
                Formula::Not(g) => match g.as_ref() {
                    Formula::Not(h) => {
                        let prem = rest(&f, &[(**h).clone()]);
                        Ok(self.prove(&prem, budget - 1)?.map(|c| ProofTree::new(gamma.clone(), Rule::DoubleNeg(f.clone()), vec![c])))
                    }
                    Formula::Or(a, b) => {
                        let left = rest(&f, &[dual(a)]);
                        let right = rest(&f, &[dual(b)]);
                        for lb in 1..budget.saturating_sub(1) {
                            if let Some(l) = self.prove(&left, lb)? {
                                let remaining = budget - 1 - l.node_count();
                                return Ok(self.prove(&right, remaining)?.map(|r| ProofTree::new(gamma.clone(), Rule::And(f.clone()), vec![l, r])));
                            }
                        }
                        Ok(None)
                    }
                    Formula::Exists(v, body) => {
                        let y: Var = gamma.iter().filter_map(Formula::max_var).max().map_or(0, |m| m + 1);
                        let inst = dual(&instantiate_body(body, *v, &Term::Var(y))?);
                        let prem = rest(&f, &[inst]);
                        Ok(self.prove(&prem, budget - 1)?.map(|c| ProofTree::new(gamma.clone(), Rule::Forall { principal: f.clone(), eigen: y }, vec![c])))
                    }
                    _ => unreachable!(),
                },
                _ => unreachable!(),
            };
        }
        let exists: Vec<Formula> = gamma.iter().filter(|f| matches!(f, Formula::Exists(..))).cloned().collect();
        if exists.is_empty() {
            return Ok(None);
        }
        let witnesses = self.witnesses(gamma);
        for f in &exists {
            let Formula::Exists(v, body) = f else { unreachable!() };
            for t in &witnesses {
                let Ok(inst) = instantiate_body(body, *v, t) else { continue };
                if gamma.contains(&inst) {
                    continue;
                }
                let mut prem = gamma.clone();
                prem.insert(inst);
                if let Some(c) = self.prove(&prem, budget - 1)? {
                    return Ok(Some(ProofTree::new(gamma.clone(), Rule::Exists { principal: f.clone(), witness: t.clone() }, vec![c])));
                }
            }
        }
        Ok(None)
    }
}

/// Search for a cut-free proof of `goal` from `assumptions` with at most `size` nodes.
///
/// Returns `Ok(None)` when none exists within the budget, and a `Resource`
/// error when `size` exceeds the configured ceiling or the expansion cap is hit.
pub fn bounded_search(assumptions: &[Formula], goal: &Formula, size: usize) -> Result<Option<ProofTree>, ProofError> {
    bounded_search_with(assumptions, goal, size, SearchConfig::default()).map(|(p, _)| p)
}

pub fn bounded_search_with(assumptions: &[Formula], goal: &Formula, size: usize, cfg: SearchConfig) -> Result<(Option<ProofTree>, SearchStats), ProofError> {
    if size > cfg.size_ceiling {
        return Err(ProofError::Resource(format!("node budget {size} exceeds the ceiling {}", cfg.size_ceiling)));
    }
    let sig = assumptions
        .iter()
        .chain(std::iter::once(goal))
        .find_map(|f| f.signature().ok().flatten())
        .unwrap_or(Signature::Set);
    let root = sequent(assumptions.iter().map(dual).chain(std::iter::once(goal.clone())));
    let mut s = Searcher { assumptions, sig, cfg, stats: SearchStats::default(), failed: HashMap::new(), potential: HashMap::new(), pos_meets_neg: HashMap::new(), next_id: 0 };
    for b in 1..=size {
        s.stats.rounds = b;
        if let Some(p) = s.prove(&root, b)? {
            return Ok((Some(p), s.stats));
        }
    }
    Ok((None, s.stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofs::check_proof;
    use crate::syntax::parse_any;

    fn f(s: &str) -> Formula {
        parse_any(s).unwrap()
    }

    #[test]
    fn excluded_middle_within_four() {
        let goal = f("(or (not (in (c 0) (c 1))) (in (c 0) (c 1)))");
        let p = bounded_search(&[], &goal, 4).unwrap().expect("proof");
        assert!(p.node_count() <= 4);
        assert!(check_proof(&p, &[], &goal));
    }

    #[test]
    fn modus_ponens_within_eight() {
        let psi = f("(in (c 0) (c 1))");
        let chi = f("(in (c 1) (c 2))");
        let phi = vec![psi.clone(), Formula::imp(psi, chi.clone())];
        let p = bounded_search(&phi, &chi, 8).unwrap().expect("proof");
        assert!(p.node_count() <= 8);
        assert!(p.is_cut_free());
        assert!(check_proof(&p, &phi, &chi));
    }

    #[test]
    fn atom_alone_is_not_provable() {
        let goal = f("(in (c 0) (c 1))");
        assert_eq!(bounded_search(&[], &goal, 10).unwrap(), None);
    }

    #[test]
    fn ceiling_is_enforced() {
        let goal = f("(in (c 0) (c 1))");
        assert!(matches!(bounded_search(&[], &goal, DEFAULT_SIZE_CEILING + 1), Err(ProofError::Resource(_))));
    }

    #[test]
    fn quantifier_rules() {
        // ∀v0 ψ(v0) ⊢ ψ(c3) and ⊢ ∀v0 (v0 = v0 ∨ ¬ v0 = v0).
        let all = f("(forall v0 (in v0 (c 8)))");
        let inst = f("(in (c 3) (c 8))");
        let p = bounded_search(std::slice::from_ref(&all), &inst, 6).unwrap().expect("instance");
        assert!(check_proof(&p, &[all], &inst));
        let lem = f("(forall v0 (or (= v0 v0) (not (= v0 v0))))");
        let q = bounded_search(&[], &lem, 6).unwrap().expect("universal");
        assert!(check_proof(&q, &[], &lem));
    }

    #[test]
    fn no_self_inequality_without_equality_axioms() {
        let goal = f("(exists v0 (not (= v0 v0)))");
        let phi = vec![f("(in (c 0) (c 1))"), f("(forall v0 (not (in v0 (c 0))))")];
        let (p, stats) = bounded_search_with(&phi, &goal, 20, SearchConfig::default()).unwrap();
        assert!(p.is_none());
        assert!(stats.pruned > 0);
    }
}
