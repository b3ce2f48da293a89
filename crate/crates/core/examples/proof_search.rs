//! Bounded proof search: a tautology is found quickly, and a false sentence
//! has no proof from true axioms of `V_3` within the size ceiling.
//!
//! Run with `cargo run --release --example proof_search`.

use truthbench::proofs::{bounded_search, bounded_search_with, check_proof, SearchConfig};
use truthbench::schemes::true_axiom_battery;
use truthbench::semantics::FiniteStructure;
use truthbench::syntax::{parse, Signature};

fn main() {
    let lem = parse("(forall v0 (or (in v0 (c 1)) (not (in v0 (c 1)))))", Signature::Set).unwrap();
    let proof = bounded_search(&[], &lem, 8).unwrap().expect("excluded middle has a small proof");
    assert!(check_proof(&proof, &[], &lem));
    println!("proved {lem} in {} nodes", proof.node_count());

    let v3 = FiniteStructure::rank(3).unwrap();
    let axioms = true_axiom_battery(&v3, 4).unwrap();
    let absurd = parse("(exists v0 (not (= v0 v0)))", Signature::Set).unwrap();
    let (found, stats) = bounded_search_with(&axioms, &absurd, 12, SearchConfig::default()).unwrap();
    println!(
        "{} true axioms, proof of {absurd} within 12 nodes: {} ({} expansions, {} pruned)",
        axioms.len(),
        found.is_some(),
        stats.expansions,
        stats.pruned
    );
}
