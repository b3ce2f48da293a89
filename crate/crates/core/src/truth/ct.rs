//! Exhaustive audit of the compositional truth clauses over a node budget.

use super::TruthOracle;
use crate::hf::{ack_mem, AckCode};
use crate::syntax::{for_each_sentence, DepthFamily, Formula, FormulaFamily, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum CtClause {
    /// Only `F`-sentences are in `T`, and `F` is closed under immediate subformulas.
    Syntax = 1,
    /// `c_a = c_b ∈ T ↔ a = b` and `c_a ∈ c_b ∈ T ↔ a ∈ b`.
    Atomic = 2,
    /// `¬ψ ∈ T ↔ ψ ∉ T`.
    Negation = 3,
    /// `ψ₁ ∨ ψ₂ ∈ T ↔ ψ₁ ∈ T or ψ₂ ∈ T`.
    Disjunction = 4,
    /// `∃v ψ ∈ T ↔ ψ(c_a) ∈ T for some a`.
    Existential = 5,
}

impl CtClause {
    pub const ALL: [CtClause; 5] = [CtClause::Syntax, CtClause::Atomic, CtClause::Negation, CtClause::Disjunction, CtClause::Existential];

    pub fn number(self) -> u8 {
        self as u8
    }
}

/// One failed instance of a clause: the sentence, whether it is in `T`, and
/// what the clause says it should be.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CtViolation {
    pub clause: CtClause,
    pub sentence: String,
    pub in_t: bool,
    pub required: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CtReport {
    pub depth_bound: usize,
    pub node_budget: usize,
    pub clauses_checked: Vec<CtClause>,
    pub sentences_enumerated: usize,
    /// Instances checked per clause, in clause order.
    pub instances: Vec<(CtClause, usize)>,
    pub violations: Vec<CtViolation>,
}

impl CtReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check clauses (1)–(5) for `t` with `F = Depth_f` on every sentence over
/// `constants` with at most `node_budget` nodes. Sentences deeper than `f`
/// are enumerated too, so clause (1) can catch a class that overreaches.
pub fn verify_ct(t: &dyn TruthOracle, f: usize, constants: &[AckCode], node_budget: usize) -> CtReport {
    let family = DepthFamily(f);
    let mut counts = [0usize; 5];
    let mut violations = Vec::new();
    let mut enumerated = 0;
    let mut note = |clause: CtClause, phi: &Formula, in_t: bool, required: bool, counts: &mut [usize; 5]| {
        counts[clause as usize - 1] += 1;
        if in_t != required {
            violations.push(CtViolation { clause, sentence: phi.to_string(), in_t, required });
        }
    };
    for_each_sentence(constants, node_budget, |phi| {
        enumerated += 1;
        let in_t = t.member(phi);
        if !family.contains(phi) {
            if in_t {
                note(CtClause::Syntax, phi, true, false, &mut counts);
            } else {
                counts[0] += 1;
            }
            return;
        }
        // Clause (1): immediate subformulas stay in F; open bodies are never in T.
        for sub in phi.immediate_subformulas() {
            let closed = family.contains(sub);
            note(CtClause::Syntax, sub, closed, true, &mut counts);
            if !sub.is_sentence() && t.member(sub) {
                note(CtClause::Syntax, sub, true, false, &mut counts);
            }
        }
        match phi {
            Formula::Eq(Term::Const(a), Term::Const(b)) => note(CtClause::Atomic, phi, in_t, a == b, &mut counts),
            Formula::In(Term::Const(a), Term::Const(b)) => note(CtClause::Atomic, phi, in_t, ack_mem(a, b), &mut counts),
            Formula::Not(psi) => note(CtClause::Negation, phi, in_t, !t.member(psi), &mut counts),
            Formula::Or(a, b) => note(CtClause::Disjunction, phi, in_t, t.member(a) || t.member(b), &mut counts),
            Formula::Exists(v, psi) => {
                let some = constants.iter().any(|c| t.member(&psi.replace_free(*v, &Term::Const(c.clone()))));
                note(CtClause::Existential, phi, in_t, some, &mut counts);
            }
            _ => {}
        }
    });
    CtReport {
        depth_bound: f,
        node_budget,
        clauses_checked: CtClause::ALL.to_vec(),
        sentences_enumerated: enumerated,
        instances: CtClause::ALL.iter().map(|&c| (c, counts[c as usize - 1])).collect(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truth::{PredicateOracle, TruthTower};

    fn consts(n: u64) -> Vec<AckCode> {
        (0..n).map(AckCode::from).collect()
    }

    #[test]
    fn valid_tower_has_no_violations() {
        let tower = TruthTower::over_rank(3, 5).unwrap();
        let r = verify_ct(&tower, 5, &consts(4), 7);
        assert!(r.passed(), "{:?}", r.violations.first());
        assert!(r.instances.iter().all(|(_, n)| *n > 0), "{:?}", r.instances);
    }

    #[test]
    fn everything_violates_negation() {
        let all = PredicateOracle(|_: &Formula| true);
        let r = verify_ct(&all, 5, &consts(2), 5);
        assert!(r.violations.iter().any(|v| v.clause == CtClause::Negation));
    }

    #[test]
    fn nothing_violates_atomic() {
        let none = PredicateOracle(|_: &Formula| false);
        let r = verify_ct(&none, 5, &consts(2), 5);
        let atomic: Vec<_> = r.violations.iter().filter(|v| v.clause == CtClause::Atomic).collect();
        // True atomics over {0, 1}: 0=0, 1=1, 0∈1.
        assert_eq!(atomic.len(), 3);
        assert!(atomic.iter().all(|v| !v.in_t && v.required));
    }

    #[test]
    fn overreaching_class_violates_syntax() {
        let tower = TruthTower::over_rank(3, 5).unwrap();
        let r = verify_ct(&tower, 2, &consts(4), 5);
        assert!(r.violations.iter().all(|v| v.clause == CtClause::Syntax));
        assert!(!r.violations.is_empty());
    }
}
