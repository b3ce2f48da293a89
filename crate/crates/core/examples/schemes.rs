//! Scheme audits: replacement instances over `V_3`, with the missing image
//! sets reported by rank, and reflection over a sound and a faulty theory.
//!
//! Run with `cargo run --release --example schemes`.

use truthbench::hf::DomainSpec;
use truthbench::schemes::{
    audit_internal, fault_injected_theory, reflection_audit, replacement_battery, sample_theory, InternalOutcome, ReflectionConfig,
    SchemeKind,
};
use truthbench::truth::{TowerConfig, TruthTower};

fn main() {
    let mut cfg = TowerConfig::new(DomainSpec::rank(3), 40);
    cfg.max_reach = 64;
    let tower = TruthTower::build(cfg).unwrap();
    let report = audit_internal(&tower, SchemeKind::Replacement, &replacement_battery()).unwrap();
    for e in &report.entries {
        match &e.outcome {
            InternalOutcome::NotInTMost { boundary: Some(b) } => {
                println!("{}: image {} of rank {} is missing", e.generator, b.image_set, b.image_rank)
            }
            o => println!("{}: {o:?}", e.generator),
        }
    }

    for theory in [sample_theory(), fault_injected_theory()] {
        let verdicts = reflection_audit(&theory, ReflectionConfig::default()).unwrap();
        let failing: Vec<_> = verdicts.iter().filter(|v| !v.passed()).map(|v| &v.generator).collect();
        println!("reflection over {}: {} generators, failing {failing:?}", theory.label, verdicts.len());
    }
}
