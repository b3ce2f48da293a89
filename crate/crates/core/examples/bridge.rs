//! Moving between arithmetic and sets: ordinals, the two translations, and
//! the bounded-arithmetic corpus checked on both sides.
//!
//! Run with `cargo run --example bridge`.

use truthbench::bridge::{delta0_corpus, nat_to_ordinal, pa_to_zf, zf_to_pa, BridgeDomain};
use truthbench::semantics::{eval_arith, eval_sentence, FiniteStructure};
use truthbench::syntax::{parse, Signature};

fn main() {
    for n in 0..5 {
        println!("ordinal {n} has code {}", nat_to_ordinal(n).unwrap());
    }
    println!("ordinal 5 has a code of {} bits", nat_to_ordinal(5).unwrap().value().bits());

    let set = parse("(exists v0 (forall v1 (not (in v1 v0))))", Signature::Set).unwrap();
    let arith = zf_to_pa(&set).unwrap();
    let s = FiniteStructure::codes_below(16).unwrap();
    println!("{set}\n  -> {arith}");
    println!("  both sides: {} / {}", eval_sentence(&set, &s).unwrap(), eval_arith(&arith, 16).unwrap());

    let dom = BridgeDomain::new(12);
    let mut agree = 0;
    let corpus = delta0_corpus();
    for e in corpus {
        let image = pa_to_zf(&e.sentence).unwrap();
        if dom.eval_sentence(&image).unwrap() == eval_arith(&e.sentence, 64).unwrap() {
            agree += 1;
        }
    }
    println!("corpus: {agree} of {} sentences keep their truth value", corpus.len());
}
