//! A depth-stratified truth tower over `V_4`: membership in `T_Most`, the
//! compositional audit, the disjunction and closure faces, a definable set,
//! and the piecewise code.
//!
//! Run with `cargo run --release --example truth_tower`.

use truthbench::hf::AckCode;
use truthbench::syntax::{parse, Signature};
use truthbench::truth::{faces_audit, verify_ct, FacesConfig, TruthTower};

fn main() {
    let tower = TruthTower::over_rank(4, 6).expect("V_4 within budget");
    println!("tower over {} with {} levels", tower.config().domain, tower.reach());

    let phi = parse("(forall v0 (exists v1 (in v0 v1)))", Signature::Set).unwrap();
    let m = tower.t_most(&phi).unwrap();
    println!("{phi} in T_Most: {} (decided at level {})", m.value, m.certificate);

    let codes: Vec<AckCode> = (0u64..16).map(AckCode::from).collect();
    let ct = verify_ct(&tower, tower.reach(), &codes, 5);
    println!("CT audit: {} sentences, {} violations", ct.sentences_enumerated, ct.violations.len());

    let faces = faces_audit(&tower, &FacesConfig::default());
    for f in &faces.faces {
        println!("face {:<12} checked {:>5}, failures {}", f.face, f.checked, f.failures);
    }

    let nonempty = parse("(exists v1 (in v1 v0))", Signature::Set).unwrap();
    let members = tower.definable_set(&nonempty).unwrap();
    println!("non-empty sets of V_4: {} of 16", members.len());

    let c = tower.piecewise_code(1 << 10).unwrap();
    println!("piecewise code below 1024 marks {} sentences", c.member_count());
}
