//! Ackermann coding of hereditarily finite sets: encode, decode, membership
//! as a bit test, transitive closure and rank.
//!
//! Run with `cargo run --example hf_coding`.

use truthbench::hf::{ack_decode, ack_encode, ack_mem, parse_set_literal, rank, transitive_closure_code, v_size, AckCode};

fn main() {
    let two = parse_set_literal("{{}, {{}}}").expect("valid literal");
    let code = ack_encode(&two).expect("small set");
    println!("{two} has code {code}");

    for n in [0u64, 1, 2, 3, 11, 4096] {
        let s = ack_decode(&AckCode::from(n));
        println!("decode({n}) = {s}, rank {}", rank(&s));
    }

    let (x, c) = (AckCode::from(1u64), AckCode::from(11u64));
    println!("{x} in {c}: {}", ack_mem(&x, &c));
    println!("transitive closure of 4096 is {}", transitive_closure_code(&AckCode::from(4096u64)));

    for r in 0..=5 {
        println!("|V_{r}| = {}", v_size(r).expect("small rank"));
    }
}
