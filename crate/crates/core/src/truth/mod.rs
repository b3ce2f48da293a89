//! Depth-stratified truth classes over a finite set structure.
//!
//! Level 1 decides atomic sentences directly. Level `k+1` decides sentences
//! of depth `k+1` by one compositional step over level `k` (negation,
//! disjunction, or an existential whose instances `ψ(c_a)` are asked of level
//! `k`), and hands shallower sentences down the chain. A tower is the chain
//! of levels `1..=reach`; `T_Most` answers a sentence at the level equal to
//! its depth.
//!
//! Over a finite structure every level exists, so `reach` is only the number
//! of levels the resource budget allowed to be built.

mod artifact;
mod ct;
mod faces;

pub use artifact::{LevelTable, TowerArtifact, ARTIFACT_NODE_BUDGET};
pub use ct::{verify_ct, CtClause, CtReport, CtViolation};
pub use faces::{faces_audit, FaceResult, FacesConfig, FacesReport};

use crate::hf::{ack_mem, AckCode, DomainSpec, HfError, DEFAULT_DOMAIN_BUDGET};
use crate::semantics::{eval_in, EvalBudget, EvalError, FiniteStructure, Universe};
use crate::syntax::{for_each_sentence, godel_decode, min_code_at_depth, Formula, Signature, Term};
use num_bigint::BigUint;
use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

/// Memo entries kept per level before further answers are computed but not stored.
pub const MEMO_CAP: usize = 1 << 21;

/// Default ceiling on tower reach.
pub const DEFAULT_MAX_REACH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TruthError {
    #[error("formula {0} is not a sentence")]
    NotSentence(String),
    #[error("formula {0} is not in the set signature")]
    Signature(String),
    #[error("constant c_{0} does not denote an element of the domain")]
    Domain(String),
    #[error("sentence of depth {depth} queried at level {level}")]
    Depth { depth: usize, level: usize },
    #[error("sentence of depth {depth} is beyond the tower reach {reach}")]
    ReachExceeded { depth: usize, reach: usize },
    #[error("requested reach {requested} exceeds the resource budget {max}")]
    Resource { requested: usize, max: usize },
    #[error("expected exactly one free variable, found {0}")]
    Arity(usize),
    #[error(transparent)]
    Hf(#[from] HfError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Anything that can be asked whether a sentence belongs to a truth class.
/// An `Err` answer means the sentence is outside what the class decides,
/// which the audits treat as non-membership.
pub trait TruthOracle: Send + Sync {
    fn contains(&self, phi: &Formula) -> Result<bool, TruthError>;

    /// Largest depth the oracle decides, if bounded.
    fn depth_bound(&self) -> Option<usize>;

    fn member(&self, phi: &Formula) -> bool {
        self.contains(phi).unwrap_or(false)
    }
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    value: bool,
    witness: Option<u32>,
}

/// One level of a tower: a memoized oracle for sentences of depth at most `k`.
pub struct Level {
    k: usize,
    structure: Arc<FiniteStructure>,
    prev: Option<Arc<Level>>,
    memo: Mutex<HashMap<Formula, Entry>>,
}

impl std::fmt::Debug for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Level").field("k", &self.k).field("domain", &self.structure.describe()).finish()
    }
}

/// The level-1 oracle: `c_a = c_b` iff `a = b`, `c_a ∈ c_b` iff bit `a` of `b` is set.
pub fn atomic_level(structure: Arc<FiniteStructure>) -> Arc<Level> {
    Arc::new(Level { k: 1, structure, prev: None, memo: Mutex::new(HashMap::new()) })
}

/// The level-`k+1` oracle built on `prev`.
pub fn extend_level(prev: &Arc<Level>) -> Arc<Level> {
    Arc::new(Level { k: prev.k + 1, structure: prev.structure.clone(), prev: Some(prev.clone()), memo: Mutex::new(HashMap::new()) })
}

fn check_query(phi: &Formula, s: &FiniteStructure) -> Result<usize, TruthError> {
    if !phi.is_sentence() {
        return Err(TruthError::NotSentence(phi.to_string()));
    }
    if !phi.fits_signature(Signature::Set) {
        return Err(TruthError::Signature(phi.to_string()));
    }
    for c in phi.constants() {
        if s.lookup(&c).is_none() {
            return Err(TruthError::Domain(c.to_string()));
        }
    }
    Ok(phi.depth())
}

impl Level {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn structure(&self) -> &Arc<FiniteStructure> {
        &self.structure
    }

    /// Membership of a sentence of depth at most `k`.
    pub fn query(&self, phi: &Formula) -> Result<bool, TruthError> {
        let d = check_query(phi, &self.structure)?;
        if d > self.k {
            return Err(TruthError::Depth { depth: d, level: self.k });
        }
        Ok(self.decide(phi, d))
    }

    /// The least witness recorded for an existential sentence of depth `k`, if it is true.
    pub fn witness(&self, phi: &Formula) -> Result<Option<AckCode>, TruthError> {
        let d = check_query(phi, &self.structure)?;
        if d > self.k {
            return Err(TruthError::Depth { depth: d, level: self.k });
        }
        let level = self.at(d);
        let entry = level.entry(phi);
        Ok(entry.witness.map(|w| AckCode::from(w as u64)))
    }

    fn at(&self, d: usize) -> &Level {
        let mut l = self;
        while l.k > d {
            l = l.prev.as_deref().expect("levels below k exist");
        }
        l
    }

    /// `phi` is a checked sentence of depth `d <= k`.
    fn decide(&self, phi: &Formula, d: usize) -> bool {
        self.at(d).entry(phi).value
    }

    fn term_id(&self, t: &Term) -> usize {
        match t {
            Term::Const(c) => self.structure.lookup(c).expect("constants checked"),
            _ => unreachable!("sentences have only constant terms at atoms"),
        }
    }

    /// Answer for a sentence whose depth is exactly this level's `k`.
    fn entry(&self, phi: &Formula) -> Entry {
        if self.k == 1 {
            let value = match phi {
                Formula::Eq(s, t) => self.term_id(s) == self.term_id(t),
                Formula::In(s, t) => self.structure.is_member(self.term_id(s), self.term_id(t)),
                other => unreachable!("depth-1 set sentence {other}"),
            };
            return Entry { value, witness: None };
        }
        if let Some(e) = self.memo.lock().expect("memo lock").get(phi) {
            return *e;
        }
        let prev = self.prev.as_deref().expect("k > 1");
        let entry = match phi {
            Formula::Not(psi) => Entry { value: !prev.decide(psi, psi.depth()), witness: None },
            Formula::Or(a, b) => Entry { value: prev.decide(a, a.depth()) || prev.decide(b, b.depth()), witness: None },
            Formula::Exists(v, psi) => {
                let d = psi.depth();
                let witness = (0..self.structure.size()).find(|&a| {
                    let inst = psi.replace_free(*v, &Term::Const(AckCode::from(a)));
                    prev.decide(&inst, d)
                });
                Entry { value: witness.is_some(), witness: witness.map(|w| w as u32) }
            }
            other => unreachable!("atomic sentence {other} at level {}", self.k),
        };
        let mut memo = self.memo.lock().expect("memo lock");
        if memo.len() < MEMO_CAP {
            memo.insert(phi.clone(), entry);
        }
        entry
    }

    pub fn memo_len(&self) -> usize {
        self.memo.lock().expect("memo lock").len()
    }
}

impl TruthOracle for Arc<Level> {
    fn contains(&self, phi: &Formula) -> Result<bool, TruthError> {
        self.query(phi)
    }

    fn depth_bound(&self) -> Option<usize> {
        Some(self.k)
    }
}

/// Answer of `T_Most` with its depth certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Membership {
    pub value: bool,
    /// Depth of the level that decided the sentence; equals the sentence depth.
    pub certificate: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TowerConfig {
    pub domain: DomainSpec,
    pub reach: usize,
    /// Node budget for exhaustive listings (agreement, CT audits, artifacts).
    pub node_budget: usize,
    pub max_reach: usize,
    pub domain_budget: usize,
}

impl TowerConfig {
    pub fn new(domain: DomainSpec, reach: usize) -> Self {
        TowerConfig { domain, reach, node_budget: 7, max_reach: DEFAULT_MAX_REACH, domain_budget: DEFAULT_DOMAIN_BUDGET }
    }
}

/// Levels `1..=reach` over one structure.
pub struct TruthTower {
    config: TowerConfig,
    structure: Arc<FiniteStructure>,
    levels: Vec<Arc<Level>>,
}

impl TruthTower {
    pub fn build(config: TowerConfig) -> Result<Self, TruthError> {
        if config.reach > config.max_reach {
            return Err(TruthError::Resource { requested: config.reach, max: config.max_reach });
        }
        let structure = Arc::new(FiniteStructure::new(config.domain.clone(), config.domain_budget)?);
        let mut levels = Vec::with_capacity(config.reach);
        if config.reach >= 1 {
            levels.push(atomic_level(structure.clone()));
        }
        while levels.len() < config.reach {
            let next = extend_level(levels.last().expect("non-empty"));
            levels.push(next);
        }
        Ok(TruthTower { config, structure, levels })
    }

    /// Tower over `V_r` with the given reach and default budgets.
    pub fn over_rank(r: u32, reach: usize) -> Result<Self, TruthError> {
        TruthTower::build(TowerConfig::new(DomainSpec::rank(r), reach))
    }

    pub fn config(&self) -> &TowerConfig {
        &self.config
    }

    pub fn structure(&self) -> &Arc<FiniteStructure> {
        &self.structure
    }

    pub fn reach(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, k: usize) -> Option<&Arc<Level>> {
        k.checked_sub(1).and_then(|i| self.levels.get(i))
    }

    /// Levels present form an initial segment `1..=reach`, as a cut must.
    pub fn reach_is_cut(&self) -> bool {
        self.levels.iter().enumerate().all(|(i, l)| l.k == i + 1)
    }

    pub fn domain_codes(&self) -> Vec<AckCode> {
        self.structure.elements()
    }

    pub fn t_most(&self, phi: &Formula) -> Result<Membership, TruthError> {
        let d = check_query(phi, &self.structure)?;
        if d > self.reach() {
            return Err(TruthError::ReachExceeded { depth: d, reach: self.reach() });
        }
        Ok(Membership { value: self.levels[d - 1].decide(phi, d), certificate: d })
    }

    /// `{a : φ(c_a) ∈ T_Most}` for `φ` with exactly one free variable.
    pub fn definable_set(&self, phi: &Formula) -> Result<Vec<AckCode>, TruthError> {
        let free = phi.free_vars();
        if free.len() != 1 {
            return Err(TruthError::Arity(free.len()));
        }
        let v = *free.first().expect("one free variable");
        let depth = phi.depth();
        if depth > self.reach() {
            return Err(TruthError::ReachExceeded { depth, reach: self.reach() });
        }
        let mut out = Vec::new();
        for a in self.domain_codes() {
            let inst = phi.replace_free(v, &Term::Const(a.clone()));
            if self.t_most(&inst)?.value {
                out.push(a);
            }
        }
        Ok(out)
    }

    /// Largest `m` for which every code below `m` has depth within reach.
    pub fn piecewise_limit(&self) -> BigUint {
        min_code_at_depth(self.reach() + 1)
    }

    /// The code `c` whose bit `x` is set iff `x` is the Gödel code of a
    /// sentence in `T_Most`, for every `x < m`.
    pub fn piecewise_code(&self, m: u64) -> Result<AckCode, TruthError> {
        let limit = self.piecewise_limit();
        if BigUint::from(m) > limit {
            return Err(TruthError::ReachExceeded { depth: self.reach() + 1, reach: self.reach() });
        }
        let mut c = BigUint::default();
        for x in 0..m {
            if let Some(phi) = godel_decode(&BigUint::from(x)) {
                if self.member(&phi) {
                    c.set_bit(x, true);
                }
            }
        }
        Ok(AckCode::new(c))
    }

    /// Every sentence within the node budget of depth at most `max_depth`,
    /// over the whole domain.
    pub fn for_each_budget_sentence(&self, max_depth: usize, mut visit: impl FnMut(&Formula)) {
        for_each_sentence(&self.domain_codes(), self.config.node_budget, |f| {
            if f.depth() <= max_depth {
                visit(f)
            }
        });
    }
}

impl TruthOracle for TruthTower {
    fn contains(&self, phi: &Formula) -> Result<bool, TruthError> {
        self.t_most(phi).map(|m| m.value)
    }

    fn depth_bound(&self) -> Option<usize> {
        Some(self.reach())
    }
}

/// Bit `x` of `c` agrees with membership of the sentence coded by `x`, for all `x < m`.
pub fn piecewise_agrees(c: &AckCode, m: u64, oracle: &dyn Fn(&Formula) -> bool) -> Vec<u64> {
    (0..m)
        .filter(|&x| {
            let want = godel_decode(&BigUint::from(x)).is_some_and(|f| oracle(&f));
            ack_mem(&AckCode::from(x), c) != want
        })
        .collect()
}

/// Tarskian satisfaction cut off at depth `k`, computed without any levels.
pub struct DirectOracle {
    pub structure: Arc<FiniteStructure>,
    pub k: usize,
}

impl TruthOracle for DirectOracle {
    fn contains(&self, phi: &Formula) -> Result<bool, TruthError> {
        let d = check_query(phi, &self.structure)?;
        if d > self.k {
            return Err(TruthError::Depth { depth: d, level: self.k });
        }
        Ok(eval_in(phi, self.structure.as_ref(), EvalBudget::default())?)
    }

    fn depth_bound(&self) -> Option<usize> {
        Some(self.k)
    }
}

/// Another oracle with the answers on a fixed set of sentences inverted.
pub struct Flipped<O> {
    pub inner: O,
    pub flips: HashSet<Formula>,
}

impl<O: TruthOracle> TruthOracle for Flipped<O> {
    fn contains(&self, phi: &Formula) -> Result<bool, TruthError> {
        let v = self.inner.contains(phi)?;
        Ok(v != self.flips.contains(phi))
    }

    fn depth_bound(&self) -> Option<usize> {
        self.inner.depth_bound()
    }
}

/// A class given by a predicate on sentences, such as "everything" or "nothing".
pub struct PredicateOracle<F: Fn(&Formula) -> bool + Send + Sync>(pub F);

impl<F: Fn(&Formula) -> bool + Send + Sync> TruthOracle for PredicateOracle<F> {
    fn contains(&self, phi: &Formula) -> Result<bool, TruthError> {
        Ok((self.0)(phi))
    }

    fn depth_bound(&self) -> Option<usize> {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Disagreement {
    pub sentence: String,
    pub left: bool,
    pub right: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct AgreementReport {
    pub depth_bound: usize,
    pub node_budget: usize,
    pub checked: usize,
    pub disagreements: Vec<Disagreement>,
}

/// Compare two oracles on every sentence over `constants` within `node_budget`
/// nodes whose depth is at most the smaller of their bounds.
pub fn check_agreement(a: &dyn TruthOracle, b: &dyn TruthOracle, constants: &[AckCode], node_budget: usize) -> AgreementReport {
    let depth_bound = match (a.depth_bound(), b.depth_bound()) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => usize::MAX,
    };
    let mut checked = 0;
    let mut disagreements = Vec::new();
    for_each_sentence(constants, node_budget, |f| {
        if f.depth() > depth_bound {
            return;
        }
        checked += 1;
        let (x, y) = (a.member(f), b.member(f));
        if x != y {
            disagreements.push(Disagreement { sentence: f.to_string(), left: x, right: y });
        }
    });
    AgreementReport { depth_bound, node_budget, checked, disagreements }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::eval_sentence;
    use crate::syntax::parse;

    fn set(s: &str) -> Formula {
        parse(s, Signature::Set).unwrap()
    }

    fn v(r: u32) -> Arc<FiniteStructure> {
        Arc::new(FiniteStructure::rank(r).unwrap())
    }

    #[test]
    fn atomic_examples() {
        let t1 = atomic_level(v(4));
        assert!(t1.query(&set("(in (c 0) (c 1))")).unwrap());
        assert!(t1.query(&set("(= (c 2) (c 2))")).unwrap());
        assert!(!t1.query(&set("(in (c 3) (c 1))")).unwrap());
        assert!(matches!(t1.query(&set("(not (in (c 0) (c 0)))")), Err(TruthError::Depth { depth: 2, level: 1 })));
    }

    #[test]
    fn extend_examples() {
        let t2 = extend_level(&atomic_level(v(4)));
        assert!(t2.query(&set("(not (in (c 0) (c 0)))")).unwrap());
        assert!(t2.query(&set("(exists v0 (in v0 (c 3)))")).unwrap());
        assert_eq!(t2.witness(&set("(exists v0 (in v0 (c 3)))")).unwrap(), Some(AckCode::from(0u64)));
        assert!(t2.query(&set("(or (in (c 0) (c 1)) (in (c 1) (c 0)))")).unwrap());
        assert!(t2.query(&set("(in (c 0) (c 1))")).unwrap());
        assert!(matches!(t2.query(&set("(not (not (in (c 0) (c 0))))")), Err(TruthError::Depth { depth: 3, level: 2 })));
    }

    #[test]
    fn t_most_examples() {
        let tower = TruthTower::over_rank(4, 6).unwrap();
        assert_eq!(tower.t_most(&set("(in (c 0) (c 1))")).unwrap(), Membership { value: true, certificate: 1 });
        let f = set("(not (exists v0 (in v0 (c 0))))");
        assert_eq!(tower.t_most(&f).unwrap(), Membership { value: true, certificate: 3 });
        assert!(eval_sentence(&f, tower.structure()).unwrap());
        let mut deep = set("(in (c 0) (c 1))");
        for _ in 0..8 {
            deep = Formula::not(deep);
        }
        assert_eq!(deep.depth(), 9);
        assert!(matches!(tower.t_most(&deep), Err(TruthError::ReachExceeded { depth: 9, reach: 6 })));
        assert!(tower.reach_is_cut());
    }

    #[test]
    fn reach_budget_is_enforced() {
        assert!(matches!(TruthTower::over_rank(4, 9), Err(TruthError::Resource { requested: 9, max: 8 })));
        let mut cfg = TowerConfig::new(DomainSpec::rank(6), 2);
        cfg.max_reach = 8;
        assert!(matches!(TruthTower::build(cfg), Err(TruthError::Hf(HfError::Budget { .. }))));
    }

    #[test]
    fn definable_set_examples() {
        let tower = TruthTower::over_rank(3, 4).unwrap();
        let codes = |v: Vec<u64>| v.into_iter().map(AckCode::from).collect::<Vec<_>>();
        assert_eq!(tower.definable_set(&set("(in v0 (c 3))")).unwrap(), codes(vec![0, 1]));
        assert_eq!(tower.definable_set(&set("(= v0 v0)")).unwrap(), codes(vec![0, 1, 2, 3]));
        assert_eq!(tower.definable_set(&set("(not (= v0 v0))")).unwrap(), codes(vec![]));
        assert!(matches!(tower.definable_set(&set("(= v0 v1)")), Err(TruthError::Arity(2))));
    }

    #[test]
    fn piecewise_examples() {
        let tower = TruthTower::over_rank(4, 6).unwrap();
        assert_eq!(tower.piecewise_code(0).unwrap(), AckCode::from(0u64));
        let small = tower.piecewise_code(500).unwrap();
        let big = tower.piecewise_code(3000).unwrap();
        let mask = (BigUint::from(1u32) << 500u32) - 1u32;
        assert_eq!(big.value() & &mask, *small.value());
        let s = tower.structure().clone();
        let oracle = |f: &Formula| f.is_sentence() && eval_sentence(f, &s).unwrap_or(false);
        assert!(piecewise_agrees(&big, 3000, &oracle).is_empty());
        let shallow = TruthTower::over_rank(4, 2).unwrap();
        assert!(shallow.piecewise_code(89).is_ok());
        assert!(matches!(shallow.piecewise_code(90), Err(TruthError::ReachExceeded { .. })));
    }

    #[test]
    fn agreement_examples() {
        let s = v(3);
        let consts: Vec<_> = (0..4u64).map(AckCode::from).collect();
        let mut t3 = atomic_level(s.clone());
        for _ in 1..3 {
            t3 = extend_level(&t3);
        }
        let mut t5 = atomic_level(s.clone());
        for _ in 1..5 {
            t5 = extend_level(&t5);
        }
        let r = check_agreement(&t3, &t5, &consts, 6);
        assert!(r.checked > 0 && r.disagreements.is_empty());
        assert!(check_agreement(&t3, &t3, &consts, 6).disagreements.is_empty());
        let flip = set("(in (c 0) (c 1))");
        let bad = Flipped { inner: t3.clone(), flips: [flip.clone()].into_iter().collect() };
        let r = check_agreement(&bad, &t5, &consts, 6);
        assert_eq!(r.disagreements.len(), 1);
        assert_eq!(r.disagreements[0].sentence, flip.to_string());
    }

    #[test]
    fn stratification_matches_direct() {
        let s = v(3);
        let consts: Vec<_> = (0..4u64).map(AckCode::from).collect();
        let mut t = atomic_level(s.clone());
        for _ in 1..4 {
            t = extend_level(&t);
        }
        let direct = DirectOracle { structure: s, k: 4 };
        let r = check_agreement(&t, &direct, &consts, 6);
        assert!(r.disagreements.is_empty(), "{:?}", r.disagreements.first());
    }
}
