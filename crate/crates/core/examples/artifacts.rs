//! Saving a tower as a sealed artifact, loading it back, and catching an
//! edited copy.
//!
//! Run with `cargo run --example artifacts`.

use truthbench::artifact::{read_artifact, write_artifact, ArtifactEnvelope, ArtifactKind};
use truthbench::truth::{TowerArtifact, TruthTower, ARTIFACT_NODE_BUDGET};

fn main() {
    let mut cfg = TruthTower::over_rank(3, 4).unwrap().config().clone();
    cfg.node_budget = ARTIFACT_NODE_BUDGET;
    let tower = TruthTower::build(cfg).unwrap();
    let art = TowerArtifact::from_tower(&tower);

    let dir = std::env::temp_dir().join("truthbench-artifacts-example");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tower.json");
    write_artifact(&path, ArtifactKind::Tower, &art).unwrap();
    println!("wrote {}", path.display());

    let loaded: TowerArtifact = read_artifact(&path, ArtifactKind::Tower).unwrap();
    let rebuilt = loaded.rebuild().unwrap();
    println!("reloaded: mismatched levels {:?}", loaded.verify(&rebuilt));

    let text = std::fs::read_to_string(&path).unwrap();
    let edited = text.replacen("\"reach\": 4", "\"reach\": 3", 1);
    match ArtifactEnvelope::open::<TowerArtifact>(&edited, ArtifactKind::Tower) {
        Ok(_) => println!("edited copy accepted"),
        Err(e) => println!("edited copy rejected: {e}"),
    }
}
