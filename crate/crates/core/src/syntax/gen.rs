//! Sentence generators for the set signature: exhaustive enumeration by node
//! count and seeded random sampling by depth.
//!
//! Bound variables are named canonically: the quantifier at nesting level `i`
//! binds `v_i`. Enumeration therefore lists each sentence once up to renaming
//! of bound variables.

use super::{Formula, Term, Var};
use crate::hf::AckCode;
use rand::Rng;
use std::collections::HashMap;

/// Parameters for [`random_sentence`].
#[derive(Debug, Clone)]
pub struct SentenceShape {
    /// Constant pool; each term slot picks from these or from the bound variables in scope.
    pub constants: Vec<AckCode>,
    pub min_depth: usize,
    pub max_depth: usize,
}

impl SentenceShape {
    pub fn new(constants: Vec<AckCode>, max_depth: usize) -> Self {
        SentenceShape { constants, min_depth: 1, max_depth }
    }
}

struct Enumerator<'a> {
    constants: &'a [AckCode],
    memo: HashMap<(usize, Var), Vec<Formula>>,
}

impl Enumerator<'_> {
    fn terms(&self, scope: Var) -> Vec<Term> {
        self.constants.iter().cloned().map(Term::Const).chain((0..scope).map(Term::Var)).collect()
    }

    /// Every formula with exactly `n` nodes whose free variables are among `v0..v(scope-1)`.
    fn exact(&mut self, n: usize, scope: Var) -> Vec<Formula> {
        if let Some(v) = self.memo.get(&(n, scope)) {
            return v.clone();
        }
        let mut out = Vec::new();
        self.each_exact(n, scope, &mut |f| out.push(f.clone()));
        self.memo.insert((n, scope), out.clone());
        out
    }

    /// Stream the formulas of [`Enumerator::exact`] without storing the top layer.
    fn each_exact(&mut self, n: usize, scope: Var, visit: &mut dyn FnMut(&Formula)) {
        if n < 3 {
            return;
        }
        if n == 3 {
            let ts = self.terms(scope);
            for s in &ts {
                for t in &ts {
                    visit(&Formula::Eq(s.clone(), t.clone()));
                    visit(&Formula::In(s.clone(), t.clone()));
                }
            }
            return;
        }
        for g in self.exact(n - 1, scope) {
            visit(&Formula::not(g));
        }
        for a in 3..(n - 1).saturating_sub(2) {
            let b = n - 1 - a;
            let left = self.exact(a, scope);
            let right = self.exact(b, scope);
            for l in &left {
                for r in &right {
                    visit(&Formula::or(l.clone(), r.clone()));
                }
            }
        }
        for g in self.exact(n - 1, scope + 1) {
            visit(&Formula::exists(scope, g));
        }
    }
}

/// Visit every set-signature sentence with at most `max_nodes` nodes (formula
/// plus term nodes) whose constants come from `constants`, in a fixed order:
/// by node count, then negations, disjunctions, quantifiers.
pub fn for_each_sentence(constants: &[AckCode], max_nodes: usize, mut visit: impl FnMut(&Formula)) {
    let mut en = Enumerator { constants, memo: HashMap::new() };
    for n in 3..=max_nodes {
        en.each_exact(n, 0, &mut visit);
    }
}

/// Collected form of [`for_each_sentence`].
pub fn enumerate_sentences(constants: &[AckCode], max_nodes: usize) -> Vec<Formula> {
    let mut out = Vec::new();
    for_each_sentence(constants, max_nodes, |f| out.push(f.clone()));
    out
}

/// A random set-signature sentence with depth in `shape.min_depth..=shape.max_depth`.
pub fn random_sentence<R: Rng + ?Sized>(rng: &mut R, shape: &SentenceShape) -> Formula {
    assert!(!shape.constants.is_empty(), "constant pool must be non-empty");
    assert!(1 <= shape.min_depth && shape.min_depth <= shape.max_depth);
    let d = rng.gen_range(shape.min_depth..=shape.max_depth);
    random_exact(rng, &shape.constants, d, 0)
}

fn random_term<R: Rng + ?Sized>(rng: &mut R, constants: &[AckCode], scope: Var) -> Term {
    if scope > 0 && rng.gen_bool(0.5) {
        Term::Var(rng.gen_range(0..scope))
    } else {
        Term::Const(constants[rng.gen_range(0..constants.len())].clone())
    }
}

fn random_exact<R: Rng + ?Sized>(rng: &mut R, constants: &[AckCode], depth: usize, scope: Var) -> Formula {
    if depth == 1 {
        let s = random_term(rng, constants, scope);
        let t = random_term(rng, constants, scope);
        return if rng.gen_bool(0.5) { Formula::Eq(s, t) } else { Formula::In(s, t) };
    }
    match rng.gen_range(0..3) {
        0 => Formula::not(random_exact(rng, constants, depth - 1, scope)),
        1 => Formula::exists(scope, random_exact(rng, constants, depth - 1, scope + 1)),
        _ => {
            let deep = random_exact(rng, constants, depth - 1, scope);
            let other_depth = rng.gen_range(1..depth);
            let other = random_exact(rng, constants, other_depth, scope);
            if rng.gen_bool(0.5) {
                Formula::or(deep, other)
            } else {
                Formula::or(other, deep)
            }
        }
    }
}
