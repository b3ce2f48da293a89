//! Seeded audits of disjunctive correctness and sentential closure.

use super::TruthTower;
use crate::semantics::eval_sentence;
use crate::syntax::{random_sentence, Formula, SentenceShape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FacesConfig {
    pub seed: u64,
    pub max_width: usize,
    pub samples_per_width: usize,
    pub mp_triples: usize,
}

impl Default for FacesConfig {
    fn default() -> Self {
        FacesConfig { seed: 0x5eed, max_width: 32, samples_per_width: 16, mp_triples: 500 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FaceResult {
    pub face: String,
    pub checked: usize,
    pub failures: usize,
    /// Up to five failing sentences.
    pub examples: Vec<String>,
}

impl FaceResult {
    fn new(face: &str) -> Self {
        FaceResult { face: face.to_string(), checked: 0, failures: 0, examples: Vec::new() }
    }

    fn record(&mut self, ok: bool, f: &Formula) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < 5 {
                self.examples.push(f.to_string());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FacesReport {
    pub seed: u64,
    pub reach: usize,
    pub faces: Vec<FaceResult>,
}

impl FacesReport {
    pub fn passed(&self) -> bool {
        self.faces.iter().all(FaceResult::passed)
    }

    pub fn face(&self, name: &str) -> Option<&FaceResult> {
        self.faces.iter().find(|f| f.face == name)
    }
}

fn ceil_log2(w: usize) -> usize {
    (usize::BITS - (w.max(1) - 1).leading_zeros()) as usize
}

/// Right-nested disjunction `d₁ ∨ (d₂ ∨ (… ∨ dₙ))`.
fn or_chain(parts: &[Formula]) -> Formula {
    let (last, init) = parts.split_last().expect("non-empty");
    init.iter().rev().fold(last.clone(), |acc, d| Formula::or(d.clone(), acc))
}

/// Audit `T_Most` on seeded disjunctions and modus-ponens triples.
///
/// - `DC`: a disjunction is in `T` iff some disjunct is true in the structure.
/// - `DC_out`: a disjunction in `T` has a disjunct in `T`.
/// - `SentClosure`: `ψ ∈ T` and `¬ψ ∨ χ ∈ T` imply `χ ∈ T`.
pub fn faces_audit(tower: &TruthTower, cfg: &FacesConfig) -> FacesReport {
    let reach = tower.reach();
    let s = tower.structure();
    let constants = tower.domain_codes();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut dc = FaceResult::new("DC");
    let mut dc_out = FaceResult::new("DC_out");
    let mut closure = FaceResult::new("SentClosure");
    let truth = |f: &Formula| eval_sentence(f, s).expect("generated sentences are in the domain");
    let in_t = |f: &Formula| tower.t_most(f).expect("generated within reach").value;

    let check_disjunction = |parts: &[Formula], disj: &Formula, dc: &mut FaceResult, dc_out: &mut FaceResult| {
        let member = in_t(disj);
        let some_true = parts.iter().any(&truth);
        dc.record(member == some_true, disj);
        if member {
            dc_out.record(parts.iter().any(&in_t), disj);
        }
    };

    for width in 1..=cfg.max_width {
        let spare = reach.saturating_sub(ceil_log2(width));
        if spare == 0 {
            continue;
        }
        let shape = SentenceShape::new(constants.clone(), spare);
        for _ in 0..cfg.samples_per_width {
            let parts: Vec<Formula> = (0..width).map(|_| random_sentence(&mut rng, &shape)).collect();
            check_disjunction(&parts, &Formula::or_balanced(&parts), &mut dc, &mut dc_out);
            let chain_depth = width + parts.iter().map(Formula::depth).max().unwrap_or(0) - 1;
            if chain_depth <= reach {
                check_disjunction(&parts, &or_chain(&parts), &mut dc, &mut dc_out);
            }
        }
        // Atomic disjunctions that are all false, and the same with one true disjunct planted.
        let atoms = SentenceShape::new(constants.clone(), 1);
        let mut falses = Vec::with_capacity(width);
        while falses.len() < width {
            let a = random_sentence(&mut rng, &atoms);
            if !truth(&a) {
                falses.push(a);
            }
        }
        check_disjunction(&falses, &Formula::or_balanced(&falses), &mut dc, &mut dc_out);
        let mut planted = falses.clone();
        let pos = rng.gen_range(0..width);
        planted[pos] = loop {
            let a = random_sentence(&mut rng, &atoms);
            if truth(&a) {
                break a;
            }
        };
        check_disjunction(&planted, &Formula::or_balanced(&planted), &mut dc, &mut dc_out);
    }

    if reach >= 3 {
        let psi_shape = SentenceShape::new(constants.clone(), reach - 2);
        let chi_shape = SentenceShape::new(constants.clone(), reach - 1);
        let max_attempts = cfg.mp_triples.saturating_mul(200);
        let mut attempts = 0;
        while closure.checked < cfg.mp_triples && attempts < max_attempts {
            attempts += 1;
            let psi = random_sentence(&mut rng, &psi_shape);
            if !in_t(&psi) {
                continue;
            }
            let chi = random_sentence(&mut rng, &chi_shape);
            let imp = Formula::or(Formula::not(psi.clone()), chi.clone());
            if !in_t(&imp) {
                continue;
            }
            closure.record(in_t(&chi), &chi);
        }
    }

    FacesReport { seed: cfg.seed, reach, faces: vec![dc, dc_out, closure] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Signature, Term};

    #[test]
    fn log2_widths() {
        assert_eq!([1, 2, 3, 4, 5, 32, 33].map(ceil_log2), [0, 1, 2, 2, 3, 5, 6]);
    }

    #[test]
    fn small_audit_passes() {
        let tower = TruthTower::over_rank(3, 5).unwrap();
        let cfg = FacesConfig { seed: 3, max_width: 8, samples_per_width: 4, mp_triples: 50 };
        let r = faces_audit(&tower, &cfg);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.face("SentClosure").unwrap().checked, 50);
        assert!(r.face("DC").unwrap().checked > 0);
    }

    #[test]
    fn wide_disjunction_with_one_true_atom() {
        let tower = TruthTower::over_rank(4, 6).unwrap();
        let falsum = parse("(in (c 1) (c 0))", Signature::Set).unwrap();
        let mut parts = vec![falsum; 32];
        assert!(!tower.t_most(&Formula::or_balanced(&parts)).unwrap().value);
        parts[17] = Formula::In(Term::constant(0u64), Term::constant(1u64));
        let m = tower.t_most(&Formula::or_balanced(&parts)).unwrap();
        assert!(m.value);
        assert_eq!(m.certificate, 6);
    }
}
