//! Axiom-scheme generators and their audits.
//!
//! Generators are pure functions of the generating formula. The audits ask
//! three different questions:
//! - [`audit_internal`]: is each instance in `T_Most` of a tower, and if a
//!   replacement instance is not, is the missing image set above the rank cap?
//! - [`reflection_audit`]: whenever bounded search proves `φ(n)` from a
//!   theory, is `φ(n)` true?
//! - [`true_axiom_battery`]: which sentences are safe premises for the
//!   consistency probe?
//!
//! Variable conventions: induction formulas use `v0`; replacement formulas
//! use `v0` for the argument, `v1` for the image and `v2` for an optional
//! parameter.

use crate::hf::{ack_decode, rank, AckCode, HFSet};
use crate::proofs::{bounded_search_with, ProofError, SearchConfig};
use crate::semantics::{eval_in, eval_with, ArithModel, EvalBudget, EvalError, FiniteStructure, Universe};
use crate::syntax::{parse, Formula, Signature, SyntaxError, Term, Var};
use crate::truth::{TruthError, TruthTower};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error("expected free variables {expected}, found {found:?}")]
    Arity { expected: String, found: Vec<Var> },
    #[error("formula {0} is outside the {1} signature")]
    Signature(String, Signature),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Proof(#[from] ProofError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Truth(#[from] TruthError),
    #[error("theory file: {0}")]
    Theory(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Induction,
    /// `∈`-induction, the set-theoretic analog of induction.
    EpsilonInduction,
    Replacement,
    Reflection,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeInstance {
    pub kind: SchemeKind,
    pub generator: Formula,
    pub instance: Formula,
    pub level: Option<usize>,
    pub theory: Option<String>,
}

fn one_free_var(phi: &Formula) -> Result<Var, SchemeError> {
    let free: Vec<Var> = phi.free_vars().into_iter().collect();
    match free.as_slice() {
        [v] => Ok(*v),
        _ => Err(SchemeError::Arity { expected: "exactly one".into(), found: free }),
    }
}

fn require(phi: &Formula, sig: Signature) -> Result<(), SchemeError> {
    if phi.fits_signature(sig) {
        Ok(())
    } else {
        Err(SchemeError::Signature(phi.to_string(), sig))
    }
}

fn fresh(phi: &Formula) -> Var {
    phi.max_var().map_or(0, |m| m + 1)
}

fn bounded_forall(v: Var, t: Term, body: Formula) -> Formula {
    Formula::forall(v, Formula::imp(Formula::mem(Term::Var(v), t), body))
}

fn bounded_exists(v: Var, t: Term, body: Formula) -> Formula {
    Formula::exists(v, Formula::and(Formula::mem(Term::Var(v), t), body))
}

/// `φ(0) ∧ ∀x(φ(x) → φ(Sx)) → ∀x φ(x)` for arithmetic `φ(x)`.
pub fn induction_instance(phi: &Formula) -> Result<Formula, SchemeError> {
    require(phi, Signature::Arith)?;
    let x = one_free_var(phi)?;
    let base = phi.replace_free(x, &Term::Zero);
    let step = Formula::forall(x, Formula::imp(phi.clone(), phi.replace_free(x, &Term::succ(Term::Var(x)))));
    Ok(Formula::imp(Formula::and(base, step), Formula::forall(x, phi.clone())))
}

/// `∀x(∀y∈x φ(y) → φ(x)) → ∀x φ(x)` for set `φ(x)`.
pub fn epsilon_induction_instance(phi: &Formula) -> Result<Formula, SchemeError> {
    require(phi, Signature::Set)?;
    let x = one_free_var(phi)?;
    let y = fresh(phi);
    let hyp = bounded_forall(y, Term::Var(x), phi.replace_free(x, &Term::Var(y)));
    let prog = Formula::forall(x, Formula::imp(hyp, phi.clone()));
    Ok(Formula::imp(prog, Formula::forall(x, phi.clone())))
}

/// The pieces of a replacement instance, with the variables it binds.
struct ReplParts {
    params: Vec<Var>,
    v: Var,
    /// `φ` functional on `v`: `∀x∈v ∀y ∀y' (φ(x,y) ∧ φ(x,y') → y = y')`.
    functional: Formula,
    /// `∃w (∀y∈w ∃x∈v φ ∧ ∀x∈v ∀y (φ → y ∈ w))`, i.e. `w = {y : ∃x∈v φ}`.
    image_exists: Formula,
    /// `∃x∈v φ(x, y)`, free in `y`, `v` and the parameters.
    hit: Formula,
}

fn replacement_parts(phi: &Formula) -> Result<ReplParts, SchemeError> {
    require(phi, Signature::Set)?;
    let free = phi.free_vars();
    let allowed: BTreeSet<Var> = [0, 1, 2].into_iter().collect();
    if !free.is_subset(&allowed) {
        return Err(SchemeError::Arity { expected: "among v0, v1, v2".into(), found: free.into_iter().collect() });
    }
    let (x, y) = (0, 1);
    let base = fresh(phi).max(3);
    let (v, w, y2) = (base, base + 1, base + 2);
    let phi_y2 = phi.replace_free(y, &Term::Var(y2));
    let functional = bounded_forall(
        x,
        Term::Var(v),
        Formula::forall(
            y,
            Formula::forall(y2, Formula::imp(Formula::and(phi.clone(), phi_y2), Formula::eq(Term::Var(y), Term::Var(y2)))),
        ),
    );
    let hit = bounded_exists(x, Term::Var(v), phi.clone());
    let image = Formula::and(
        bounded_forall(y, Term::Var(w), hit.clone()),
        bounded_forall(x, Term::Var(v), Formula::forall(y, Formula::imp(phi.clone(), Formula::mem(Term::Var(y), Term::Var(w))))),
    );
    let params = if free.contains(&2) { vec![2] } else { vec![] };
    Ok(ReplParts { params, v, functional, image_exists: Formula::exists(w, image), hit })
}

/// `∀z ∀v (φ functional on v → ∃w w = {y : ∃x∈v φ(x, y, z)})` for set `φ(x, y[, z])`.
pub fn replacement_instance(phi: &Formula) -> Result<Formula, SchemeError> {
    let p = replacement_parts(phi)?;
    let body = Formula::forall(p.v, Formula::imp(p.functional, p.image_exists));
    Ok(p.params.iter().rev().fold(body, |acc, &z| Formula::forall(z, acc)))
}

/// Where a replacement instance fails: the parameter and domain set, and the
/// set of images the instance asks for, which the structure lacks.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Boundary {
    pub parameter: Option<String>,
    pub domain_set: String,
    pub image_set: String,
    pub image_rank: u32,
    pub image_in_structure: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum InternalOutcome {
    InTMost,
    NotInTMost { boundary: Option<Boundary> },
    ReachExceeded { depth: usize, reach: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct InternalEntry {
    pub generator: String,
    pub instance_depth: usize,
    pub outcome: InternalOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct InternalReport {
    pub kind: SchemeKind,
    pub structure: String,
    pub entries: Vec<InternalEntry>,
}

impl InternalReport {
    /// Every instance is in `T_Most`, or is a replacement instance whose
    /// missing image set lies outside the structure.
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| match &e.outcome {
            InternalOutcome::InTMost => true,
            InternalOutcome::NotInTMost { boundary: Some(b) } => !b.image_in_structure,
            _ => false,
        })
    }
}

/// The first `(z, v)` at which `φ` is functional on `v` but the image set is
/// missing from `s`.
pub fn find_boundary(phi: &Formula, s: &FiniteStructure) -> Result<Option<Boundary>, SchemeError> {
    let p = replacement_parts(phi)?;
    let budget = EvalBudget::default();
    let n = s.size();
    let y = 1;
    let zs: Vec<Option<usize>> = if p.params.is_empty() { vec![None] } else { (0..n).map(Some).collect() };
    for z in zs {
        let with_z = |mut a: Vec<(Var, usize)>| {
            if let Some(z) = z {
                a.push((2, z));
            }
            a
        };
        for v in 0..n {
            if !eval_with(&p.functional, s, &with_z(vec![(p.v, v)]), budget)? {
                continue;
            }
            if eval_with(&p.image_exists, s, &with_z(vec![(p.v, v)]), budget)? {
                continue;
            }
            let mut images = Vec::new();
            for cand in 0..n {
                if eval_with(&p.hit, s, &with_z(vec![(p.v, v), (y, cand)]), budget)? {
                    images.push(ack_decode(&s.code_of(cand).expect("finite structures have codes")));
                }
            }
            let image = HFSet::from_children(images);
            let code = crate::hf::ack_encode(&image).ok();
            let shown = |id: usize| s.code_of(id).expect("finite structures have codes").to_string();
            return Ok(Some(Boundary {
                parameter: z.map(shown),
                domain_set: shown(v),
                image_set: image.to_string(),
                image_rank: rank(&image),
                image_in_structure: code.is_some_and(|c| s.lookup(&c).is_some()),
            }));
        }
    }
    Ok(None)
}

/// Generate each instance of `kind` and ask the tower. Instances deeper
/// than the reach are reported, not raised.
pub fn audit_internal(tower: &TruthTower, kind: SchemeKind, battery: &[Formula]) -> Result<InternalReport, SchemeError> {
    let mut entries = Vec::new();
    for phi in battery {
        let inst = match kind {
            SchemeKind::Replacement => replacement_instance(phi)?,
            SchemeKind::EpsilonInduction => epsilon_induction_instance(phi)?,
            other => return Err(SchemeError::Theory(format!("{other:?} instances are not set sentences"))),
        };
        let depth = inst.depth();
        let outcome = match tower.t_most(&inst) {
            Ok(m) if m.value => InternalOutcome::InTMost,
            Ok(_) => {
                let boundary = if kind == SchemeKind::Replacement { find_boundary(phi, tower.structure())? } else { None };
                InternalOutcome::NotInTMost { boundary }
            }
            Err(TruthError::ReachExceeded { depth, reach }) => InternalOutcome::ReachExceeded { depth, reach },
            Err(e) => return Err(e.into()),
        };
        entries.push(InternalEntry { generator: phi.to_string(), instance_depth: depth, outcome });
    }
    Ok(InternalReport { kind, structure: format!("{:?}", tower.structure().spec()), entries })
}

/// A finite theory with a battery of one-variable formulas for its
/// reflection instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheorySpec {
    pub label: String,
    pub signature: Signature,
    pub axioms: Vec<Formula>,
    pub battery: Vec<Formula>,
}

/// The JSON form of a [`TheorySpec`]: formulas as s-expressions.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TheoryFile {
    pub label: String,
    pub signature: Signature,
    pub axioms: Vec<String>,
    #[serde(default)]
    pub battery: Vec<String>,
}

impl TheorySpec {
    pub fn new(label: &str, signature: Signature, axioms: &[&str], battery: &[&str]) -> Result<Self, SchemeError> {
        let file = TheoryFile {
            label: label.to_string(),
            signature,
            axioms: axioms.iter().map(|s| s.to_string()).collect(),
            battery: battery.iter().map(|s| s.to_string()).collect(),
        };
        TheorySpec::from_file(&file)
    }

    pub fn from_file(file: &TheoryFile) -> Result<Self, SchemeError> {
        let read = |texts: &[String]| texts.iter().map(|t| parse(t, file.signature)).collect::<Result<Vec<_>, _>>();
        let axioms = read(&file.axioms)?;
        let battery = read(&file.battery)?;
        for phi in &battery {
            one_free_var(phi)?;
        }
        if let Some(bad) = axioms.iter().find(|a| !a.is_sentence()) {
            return Err(SchemeError::Theory(format!("axiom {bad} is not a sentence")));
        }
        Ok(TheorySpec { label: file.label.clone(), signature: file.signature, axioms, battery })
    }

    pub fn to_file(&self) -> TheoryFile {
        let show = |fs: &[Formula]| fs.iter().map(Formula::to_string).collect();
        TheoryFile { label: self.label.clone(), signature: self.signature, axioms: show(&self.axioms), battery: show(&self.battery) }
    }
}

/// `∀x(Prov_U(⌜φ(ẋ)⌝) → φ(x))`.
pub fn reflection_instance(label: &str, phi: &Formula) -> Result<Formula, SchemeError> {
    let x = one_free_var(phi)?;
    Ok(Formula::forall(x, Formula::imp(Formula::Prov(label.to_string(), Box::new(phi.clone())), phi.clone())))
}

/// `REF⁰(U) = U`, and level `k + 1` adds the reflection instances of level
/// `k` for every battery formula.
pub fn ref_tower(u: &TheorySpec, levels: usize) -> Result<Vec<TheorySpec>, SchemeError> {
    let mut out = vec![u.clone()];
    for k in 1..=levels {
        let prev = out.last().expect("level 0 present");
        let mut axioms = prev.axioms.clone();
        for phi in &u.battery {
            axioms.push(reflection_instance(&prev.label, phi)?);
        }
        out.push(TheorySpec { label: format!("REF{k}({})", u.label), signature: u.signature, axioms, battery: u.battery.clone() });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ReflectionConfig {
    /// Proof size ceiling for bounded search.
    pub size: usize,
    /// Instances `φ(n)` are audited for `n` in `0..=max_n`.
    pub max_n: u64,
    /// Quantifier bound for evaluating `φ(n)` in the naturals.
    pub eval_bound: u64,
}

impl Default for ReflectionConfig {
    fn default() -> Self {
        ReflectionConfig { size: 12, max_n: 5, eval_bound: 32 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ReflectionVerdict {
    pub theory: String,
    pub generator: String,
    pub instance: String,
    /// Values `n` with a proof of `φ(n)` found.
    pub proved: Vec<u64>,
    /// Proved values at which `φ(n)` is false.
    pub failures: Vec<u64>,
    /// The instance evaluated as a sentence, with `Prov` answered by search.
    pub sentence_true: bool,
}

impl ReflectionVerdict {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Search for a proof of `goal` from `theory` within `size` nodes.
pub fn provable(theory: &TheorySpec, goal: &Formula, size: usize) -> Result<bool, SchemeError> {
    let cfg = SearchConfig { size_ceiling: size.max(SearchConfig::default().size_ceiling), ..SearchConfig::default() };
    Ok(bounded_search_with(&theory.axioms, goal, size, cfg)?.0.is_some())
}

/// Audit every battery instance of `REF(U)`. `Prov` atoms labelled with `U`
/// are answered by bounded search from `U`'s axioms; other labels are false.
pub fn reflection_audit(u: &TheorySpec, cfg: ReflectionConfig) -> Result<Vec<ReflectionVerdict>, SchemeError> {
    if u.signature != Signature::Arith {
        return Err(SchemeError::Signature(u.label.clone(), Signature::Arith));
    }
    let mut out = Vec::new();
    for phi in &u.battery {
        let inst = reflection_instance(&u.label, phi)?;
        let x = one_free_var(phi)?;
        let mut proved = Vec::new();
        let mut failures = Vec::new();
        for n in 0..=cfg.max_n {
            let goal = phi.replace_free(x, &Term::numeral(n));
            if provable(u, &goal, cfg.size)? {
                proved.push(n);
                if !ArithModel::new(cfg.eval_bound).eval(&goal)? {
                    failures.push(n);
                }
            }
        }
        let prov = |label: &str, f: &Formula| label == u.label && provable(u, f, cfg.size).unwrap_or(false);
        let sentence_true = ArithModel { bound: cfg.max_n + 1, prov: Some(&prov) }.eval(&inst)?;
        out.push(ReflectionVerdict { theory: u.label.clone(), generator: phi.to_string(), instance: inst.to_string(), proved, failures, sentence_true });
    }
    Ok(out)
}

/// Whether every axiom without `Prov` atoms is true with quantifiers below `bound`.
pub fn theory_is_sound(u: &TheorySpec, bound: u64) -> Result<bool, SchemeError> {
    for a in &u.axioms {
        let mut has_prov = false;
        check_prov(a, &mut has_prov);
        if !has_prov && !ArithModel::new(bound).eval(a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_prov(f: &Formula, found: &mut bool) {
    match f {
        Formula::Prov(..) => *found = true,
        Formula::Not(g) | Formula::Exists(_, g) => check_prov(g, found),
        Formula::Or(a, b) => {
            check_prov(a, found);
            check_prov(b, found);
        }
        _ => {}
    }
}

/// A few true equations of successor, addition and multiplication, and a
/// battery mixing provable and unprovable formulas.
pub fn sample_theory() -> TheorySpec {
    TheorySpec::new(
        "Q0",
        Signature::Arith,
        &[
            "(forall v0 (= v0 v0))",
            "(forall v0 (not (= (S v0) (num 0))))",
            "(forall v0 (= (+ v0 (num 0)) v0))",
            "(forall v0 (forall v1 (= (+ v0 (S v1)) (S (+ v0 v1)))))",
            "(forall v0 (= (* v0 (num 0)) (num 0)))",
        ],
        &[
            "(= v0 v0)",
            "(= (+ v0 (num 0)) v0)",
            "(not (= (S v0) (num 0)))",
            "(= (* v0 (num 0)) (num 0))",
            "(= (+ (num 0) v0) v0)",
            "(= v0 (S v0))",
        ],
    )
    .expect("sample theory parses")
}

/// The sample theory with the false axiom `0 = S0` added.
pub fn fault_injected_theory() -> TheorySpec {
    let mut u = sample_theory();
    u.label = "Q0+bad".into();
    u.axioms.push(parse("(= (num 0) (S (num 0)))", Signature::Arith).expect("parses"));
    u
}

/// Replacement generators for [`audit_internal`]: maps that stay inside
/// every rank cap, and the singleton map, which leaves it.
pub fn replacement_battery() -> Vec<Formula> {
    [
        "(= v1 v0)",
        "(= v1 v2)",
        "(or (= v0 v0) (= v1 v1))",
        "(and (= v1 v0) (in v2 v0))",
        "(exists v3 (and (in v3 v0) (= v1 v3)))",
        "(forall v3 (iff (in v3 v1) (= v3 v0)))",
    ]
    .iter()
    .map(|s| parse(s, Signature::Set).expect("battery parses"))
    .collect()
}

/// True premises for the consistency probe: every atomic fact and negated
/// fact among the codes below `atoms`, and every battery replacement
/// instance that holds in `s`.
pub fn true_axiom_battery(s: &FiniteStructure, atoms: u64) -> Result<Vec<Formula>, SchemeError> {
    let mut out = Vec::new();
    for a in 0..atoms {
        for b in 0..atoms {
            let (ca, cb) = (Term::constant(a), Term::constant(b));
            let eq = Formula::eq(ca.clone(), cb.clone());
            out.push(if a == b { eq } else { Formula::not(eq) });
            let mem = Formula::mem(ca, cb);
            out.push(if crate::hf::ack_mem(&AckCode::from(a), &AckCode::from(b)) { mem } else { Formula::not(mem) });
        }
    }
    for phi in replacement_battery() {
        let inst = replacement_instance(&phi)?;
        if eval_in(&inst, s, EvalBudget::default())? {
            out.push(inst);
        }
    }
    Ok(out)
}
