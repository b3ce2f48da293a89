//! A small corpus of checked proofs over the hereditarily finite sets.
//!
//! Every assumption is true in `V_4`. Most fixtures route the argument
//! through lemmas joined by cuts, so cut elimination has work to do.

use super::search::{bounded_search_with, SearchConfig};
use super::{dual, sequent, ProofTree, Rule, Sequent};
use crate::syntax::{parse_any, Formula};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub name: &'static str,
    pub assumptions: Vec<Formula>,
    pub goal: Formula,
    pub proof: ProofTree,
}

fn f(s: &str) -> Formula {
    parse_any(s).expect("fixture formulas parse")
}

fn root(assumptions: &[Formula], goal: &Formula) -> Sequent {
    sequent(assumptions.iter().map(dual).chain(std::iter::once(goal.clone())))
}

fn search(assumptions: &[Formula], goal: &Formula) -> ProofTree {
    let cfg = SearchConfig { assumption_leaves: false, ..SearchConfig::default() };
    bounded_search_with(assumptions, goal, cfg.size_ceiling, cfg)
        .expect("fixture search stays within resources")
        .0
        .unwrap_or_else(|| panic!("fixture goal {goal} is provable"))
}

/// Prove `goal` by cutting on each lemma in turn; every lemma is proved from
/// the assumptions alone and then available to the rest of the argument.
fn via_lemmas(assumptions: &[Formula], goal: &Formula, lemmas: &[Formula]) -> ProofTree {
    let Some((lemma, rest)) = lemmas.split_first() else {
        return search(assumptions, goal);
    };
    let left = search(assumptions, lemma);
    let mut extended = assumptions.to_vec();
    extended.push(lemma.clone());
    let right = via_lemmas(&extended, goal, rest);
    ProofTree::new(root(assumptions, goal), Rule::Cut(lemma.clone()), vec![left, right])
}

fn fixture(name: &'static str, assumptions: &[&str], goal: &str, lemmas: &[&str]) -> Fixture {
    let assumptions: Vec<Formula> = assumptions.iter().map(|s| f(s)).collect();
    let goal = f(goal);
    let lemmas: Vec<Formula> = lemmas.iter().map(|s| f(s)).collect();
    let proof = via_lemmas(&assumptions, &goal, &lemmas);
    Fixture { name, assumptions, goal, proof }
}

/// `ψ, ¬ψ ∨ χ ⊢ χ` in five nodes with one cut on `ψ`.
pub fn modus_ponens_fixture() -> Fixture {
    let psi = f("(in (c 0) (c 1))");
    let chi = f("(in (c 1) (c 2))");
    let imp = Formula::imp(psi.clone(), chi.clone());
    let top = sequent([chi.clone(), dual(&imp)]);
    let with = |extra: &Formula| {
        let mut s = top.clone();
        s.insert(extra.clone());
        s
    };
    let not_psi = dual(&psi);
    let mut and_left = with(&not_psi);
    and_left.insert(psi.clone());
    let mut and_right = with(&not_psi);
    and_right.insert(dual(&chi));
    let and = ProofTree::new(
        with(&not_psi),
        Rule::And(dual(&imp)),
        vec![ProofTree::new(and_left, Rule::Ax(psi.clone()), vec![]), ProofTree::new(and_right, Rule::Ax(chi.clone()), vec![])],
    );
    let assume = ProofTree::new(sequent([chi.clone(), psi.clone()]), Rule::Assumption(psi.clone()), vec![]);
    let proof = ProofTree::new(top, Rule::Cut(psi.clone()), vec![assume, and]);
    Fixture { name: "modus_ponens", assumptions: vec![psi, imp], goal: chi, proof }
}

/// The full corpus, modus ponens first.
pub fn fixture_corpus() -> Vec<Fixture> {
    vec![
        modus_ponens_fixture(),
        fixture("excluded_middle", &[], "(or (not (in (c 0) (c 1))) (in (c 0) (c 1)))", &[]),
        fixture(
            "implication_chain",
            &[
                "(in (c 0) (c 1))",
                "(imp (in (c 0) (c 1)) (in (c 1) (c 2)))",
                "(imp (in (c 1) (c 2)) (in (c 1) (c 3)))",
                "(imp (in (c 1) (c 3)) (in (c 3) (c 8)))",
                "(imp (in (c 3) (c 8)) (in (c 0) (c 3)))",
            ],
            "(in (c 0) (c 3))",
            &["(in (c 1) (c 2))", "(in (c 1) (c 3))", "(in (c 3) (c 8))"],
        ),
        fixture("witness_from_fact", &["(in (c 0) (c 1))"], "(exists v0 (in v0 (c 1)))", &["(in (c 0) (c 1))"]),
        fixture(
            "subset_transfer",
            &["(forall v0 (imp (in v0 (c 1)) (in v0 (c 3))))", "(in (c 0) (c 1))"],
            "(exists v0 (in v0 (c 3)))",
            &["(in (c 0) (c 3))"],
        ),
        fixture(
            "universal_lemma",
            &[],
            "(or (= (c 2) (c 2)) (not (= (c 2) (c 2))))",
            &["(forall v0 (or (= v0 v0) (not (= v0 v0))))"],
        ),
        fixture(
            "disjunctive_syllogism",
            &["(or (in (c 1) (c 0)) (in (c 0) (c 1)))", "(not (in (c 1) (c 0)))"],
            "(in (c 0) (c 1))",
            &["(and (not (in (c 1) (c 0))) (or (in (c 1) (c 0)) (in (c 0) (c 1))))"],
        ),
        fixture("double_negation", &["(not (not (in (c 0) (c 1))))"], "(in (c 0) (c 1))", &["(not (not (in (c 0) (c 1))))"]),
        fixture(
            "de_morgan",
            &["(not (or (in (c 1) (c 0)) (in (c 2) (c 1))))"],
            "(and (not (in (c 1) (c 0))) (not (in (c 2) (c 1))))",
            &["(not (in (c 1) (c 0)))"],
        ),
        fixture(
            "existential_elimination",
            &["(exists v0 (and (in v0 (c 1)) (in v0 (c 3))))"],
            "(exists v0 (in v0 (c 3)))",
            &["(exists v0 (and (in v0 (c 3)) (in v0 (c 1))))"],
        ),
        fixture(
            "subset_chain",
            &["(forall v0 (imp (in v0 (c 1)) (in v0 (c 3))))", "(forall v0 (imp (in v0 (c 3)) (in v0 (c 7))))"],
            "(forall v0 (imp (in v0 (c 1)) (in v0 (c 7))))",
            &["(forall v0 (imp (in v0 (c 1)) (and (in v0 (c 3)) (in v0 (c 7)))))"],
        ),
        fixture(
            "alpha_variant",
            &["(forall v0 (not (in v0 (c 0))))"],
            "(forall v1 (not (in v1 (c 0))))",
            &["(forall v0 (not (in v0 (c 0))))"],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofs::{check_proof_detailed, eliminate_cuts_with_stats, has_subformula_property};

    #[test]
    fn corpus_checks_and_eliminates() {
        let corpus = fixture_corpus();
        assert!(corpus.len() >= 10);
        for fx in &corpus {
            check_proof_detailed(&fx.proof, &fx.assumptions, &fx.goal).unwrap_or_else(|e| panic!("{}: {e}", fx.name));
            let (out, stats) = eliminate_cuts_with_stats(&fx.proof, &fx.assumptions).unwrap_or_else(|e| panic!("{}: {e}", fx.name));
            assert!(out.is_cut_free(), "{}", fx.name);
            check_proof_detailed(&out, &fx.assumptions, &fx.goal).unwrap_or_else(|e| panic!("{} after elimination: {e}", fx.name));
            assert!(has_subformula_property(&out, &fx.assumptions, &fx.goal), "{}", fx.name);
            assert!(stats.within_reference, "{}", fx.name);
        }
    }

    #[test]
    fn chain_has_three_cuts() {
        let chain = fixture_corpus().into_iter().find(|f| f.name == "implication_chain").unwrap();
        assert_eq!(chain.proof.cut_count(), 3);
    }
}
