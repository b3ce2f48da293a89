//! Checking the fixture proofs and eliminating their cuts, with blow-up
//! statistics for each.
//!
//! Run with `cargo run --example cut_elimination`.

use truthbench::proofs::{check_proof, eliminate_cuts_with_stats, fixture_corpus, has_subformula_property};

fn main() {
    println!("{:<24} {:>5} {:>5} {:>4} {:>6} {:>6}", "fixture", "nodes", "cuts", "rank", "after", "height");
    for fx in fixture_corpus() {
        assert!(check_proof(&fx.proof, &fx.assumptions, &fx.goal));
        let (cf, s) = eliminate_cuts_with_stats(&fx.proof, &fx.assumptions).expect("fixtures eliminate");
        assert!(check_proof(&cf, &fx.assumptions, &fx.goal));
        assert!(has_subformula_property(&cf, &fx.assumptions, &fx.goal));
        println!(
            "{:<24} {:>5} {:>5} {:>4} {:>6} {:>6}",
            fx.name, s.input_nodes, s.input_cuts, s.max_cut_rank, s.output_nodes, s.output_height
        );
    }
}
