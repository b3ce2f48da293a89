//! Evaluating sentences: in a finite fragment of the sets, by bounded
//! quantifiers in all hereditarily finite sets, and in the naturals.
//!
//! Run with `cargo run --example evaluation`.

use truthbench::semantics::{eval_arith, eval_delta0, eval_sentence, eval_term, FiniteStructure};
use truthbench::syntax::{parse, parse_term, Signature};

fn main() {
    let v3 = FiniteStructure::rank(3).expect("V_3 is small");
    for text in [
        "(forall v0 (exists v1 (in v0 v1)))",
        "(exists v0 (forall v1 (not (in v1 v0))))",
        "(forall v0 (forall v1 (exists v2 (and (in v0 v2) (in v1 v2)))))",
    ] {
        let phi = parse(text, Signature::Set).expect("set sentence");
        println!("V_3 |= {phi}: {}", eval_sentence(&phi, &v3).expect("within budget"));
    }

    // Bounded quantifiers range over members, so no structure is needed.
    let bounded = parse("(forall v0 (imp (in v0 (c 11)) (exists v1 (and (in v1 (c 11)) (in v0 v1)))))", Signature::Set).unwrap();
    println!("every member of 11 lies in another member: {}", eval_delta0(&bounded).unwrap());

    let t = parse_term("(* (num 2) (+ (S (num 0)) (num 3)))").unwrap();
    println!("{t} = {}", eval_term(&t).unwrap());

    for n in [7, 9] {
        let composite = parse(&format!("(exists v0 (exists v1 (= (* (S (S v0)) (S (S v1))) (num {n}))))"), Signature::Arith).unwrap();
        println!("{n} is composite: {}", eval_arith(&composite, 16).unwrap());
    }
}
