//! The saved form of a tower: its configuration plus, per level, the Gödel
//! codes of the budget sentences the level puts in `T`.
//!
//! Levels are oracles, so loading an artifact rebuilds the tower from the
//! recorded configuration; the tables let [`TowerArtifact::verify`] confirm
//! that the rebuilt tower answers as the saved one did.

use super::{TowerConfig, TruthError, TruthTower};
use crate::hf::DomainSpec;
use crate::syntax::godel_code;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

/// Node budget for the sentence tables of artifacts written by default.
pub const ARTIFACT_NODE_BUDGET: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelTable {
    pub k: usize,
    /// Budget sentences of depth at most `k`.
    pub sentences: usize,
    /// Codes of those in `T_k`, ascending, in decimal.
    pub true_codes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerArtifact {
    pub domain: DomainSpec,
    /// Levels built. A resource figure: every level exists over a finite structure.
    pub reach: usize,
    pub max_reach: usize,
    pub domain_budget: usize,
    /// Node budget of the sentence tables.
    pub node_budget: usize,
    pub levels: Vec<LevelTable>,
}

fn level_table(tower: &TruthTower, k: usize) -> LevelTable {
    let level = tower.level(k).expect("k within reach");
    let mut sentences = 0;
    let mut codes: Vec<BigUint> = Vec::new();
    tower.for_each_budget_sentence(k, |f| {
        sentences += 1;
        if level.query(f).expect("budget sentences are decided within reach") {
            codes.push(godel_code(f));
        }
    });
    codes.sort();
    LevelTable { k, sentences, true_codes: codes.iter().map(BigUint::to_string).collect() }
}

impl TowerArtifact {
    pub fn from_tower(tower: &TruthTower) -> Self {
        let c = tower.config();
        TowerArtifact {
            domain: c.domain.clone(),
            reach: tower.reach(),
            max_reach: c.max_reach,
            domain_budget: c.domain_budget,
            node_budget: c.node_budget,
            levels: (1..=tower.reach()).map(|k| level_table(tower, k)).collect(),
        }
    }

    pub fn config(&self) -> TowerConfig {
        TowerConfig {
            domain: self.domain.clone(),
            reach: self.reach,
            node_budget: self.node_budget,
            max_reach: self.max_reach,
            domain_budget: self.domain_budget,
        }
    }

    pub fn rebuild(&self) -> Result<TruthTower, TruthError> {
        TruthTower::build(self.config())
    }

    /// Levels whose recomputed table differs from the saved one.
    pub fn verify(&self, tower: &TruthTower) -> Vec<usize> {
        self.levels
            .iter()
            .filter(|saved| saved.k > tower.reach() || level_table(tower, saved.k) != **saved)
            .map(|saved| saved.k)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::eval_sentence;
    use crate::syntax::godel_decode;

    fn small() -> TruthTower {
        let mut cfg = TowerConfig::new(DomainSpec::rank(2), 3);
        cfg.node_budget = ARTIFACT_NODE_BUDGET;
        TruthTower::build(cfg).unwrap()
    }

    #[test]
    fn rebuilt_tower_matches_its_tables() {
        let tower = small();
        let art = TowerArtifact::from_tower(&tower);
        assert_eq!(art.levels.len(), 3);
        let again = art.rebuild().unwrap();
        assert!(art.verify(&again).is_empty());
    }

    #[test]
    fn tables_list_exactly_the_true_sentences() {
        let tower = small();
        let art = TowerArtifact::from_tower(&tower);
        let s = tower.structure();
        for lvl in &art.levels {
            for code in &lvl.true_codes {
                let f = godel_decode(&code.parse().unwrap()).unwrap();
                assert!(f.depth() <= lvl.k);
                assert!(eval_sentence(&f, s).unwrap(), "{f}");
            }
            assert!(lvl.true_codes.len() < lvl.sentences);
        }
        assert!(art.levels.windows(2).all(|w| w[0].sentences <= w[1].sentences));
    }

    #[test]
    fn edited_tables_are_caught() {
        let tower = small();
        let mut art = TowerArtifact::from_tower(&tower);
        art.levels[1].true_codes.pop();
        assert_eq!(art.verify(&tower), vec![2]);
    }
}
