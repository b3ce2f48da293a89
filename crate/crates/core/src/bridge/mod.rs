//! Arithmetic on von Neumann ordinals, and the two formula translations.
//!
//! [`zf_to_pa`] reads a set sentence as a sentence about Ackermann codes:
//! `x ∈ y` becomes the bit test `AckMem(x, y)` and `c_a` becomes the numeral
//! `a`. [`pa_to_zf`] goes the other way: quantifiers are relativized to the
//! finite ordinals and `0`, `S`, `+`, `×` are replaced by the graph formulas
//! of the [`TranslationTable`].
//!
//! The graphs of `+` and `×` assert that a finite recursion function exists.
//! Those functions, like ordinals from 6 on, have no code that fits in
//! memory, so set-side evaluation happens in a [`BridgeDomain`]: the
//! transitive closure of the ordinals up to some `M` together with every
//! recursion function whose values stay at or below `M`.

mod corpus;
mod table;

pub use corpus::{delta0_corpus, CorpusEntry};
pub use table::{Definition, TranslationTable, REQUIRED};

use crate::hf::{AckCode, HFSet, HfError, MAX_CODE_BITS};
use crate::semantics::{eval_in, eval_with, ClosureDomain, EvalBudget, EvalError, Universe};
use crate::syntax::{Formula, SyntaxError, Term, Var};
use num_bigint::BigUint;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BridgeError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("translation table: {0}")]
    Table(String),
    #[error("cannot translate {0}")]
    Untranslatable(String),
    #[error(transparent)]
    Hf(#[from] HfError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Numerals up to this value become constants in [`pa_to_zf`]; larger ones
/// are reached by a chain of successors. The code of 5 has 2060 bits.
pub const CONST_NUMERALS: u64 = 4;

/// Constants at or above this code are rejected by [`zf_to_pa`]: numerals
/// are unary.
pub const NUMERAL_LIMIT: u64 = 1 << 10;

/// Evaluation budget for translated formulas, which nest far deeper than
/// hand-written ones.
pub const BRIDGE_BUDGET: EvalBudget = EvalBudget { max_depth: 1 << 12 };

/// The von Neumann ordinal `n` as a tree.
pub fn ordinal_set(n: u64) -> HFSet {
    let mut s = HFSet::empty();
    for _ in 0..n {
        s = s.successor();
    }
    s
}

/// The code of the von Neumann ordinal `n`: `code(n + 1) = code(n) + 2^code(n)`.
/// Fails from `n = 6` on, whose code has about `2^2059` bits.
pub fn nat_to_ordinal(n: u64) -> Result<AckCode, HfError> {
    let mut c = BigUint::from(0u32);
    for _ in 0..n {
        let bit = match u64::try_from(&c) {
            Ok(b) if b < MAX_CODE_BITS => b,
            _ => return Err(HfError::TooLarge { bits: format!("{c} + 1"), limit: MAX_CODE_BITS }),
        };
        let mut next = c.clone();
        next.set_bit(bit, true);
        c = next;
    }
    Ok(AckCode::new(c))
}

fn untranslatable(f: &Formula, why: &str) -> BridgeError {
    BridgeError::Untranslatable(format!("{f}: {why}"))
}

/// Read a set formula in the language of arithmetic with `AckMem`.
pub fn zf_to_pa(phi: &Formula) -> Result<Formula, BridgeError> {
    let term = |t: &Term| -> Result<Term, BridgeError> {
        match t {
            Term::Var(v) => Ok(Term::Var(*v)),
            Term::Const(c) => match c.to_u64() {
                Some(n) if n < NUMERAL_LIMIT => Ok(Term::numeral(n)),
                _ => Err(untranslatable(phi, &format!("constant c_{c} is too large for a numeral"))),
            },
            _ => Err(untranslatable(phi, "arithmetic term in a set formula")),
        }
    };
    Ok(match phi {
        Formula::Eq(s, t) => Formula::Eq(term(s)?, term(t)?),
        Formula::In(s, t) => Formula::AckMem(term(s)?, term(t)?),
        Formula::Not(g) => Formula::not(zf_to_pa(g)?),
        Formula::Or(a, b) => Formula::or(zf_to_pa(a)?, zf_to_pa(b)?),
        Formula::Exists(v, g) => Formula::exists(*v, zf_to_pa(g)?),
        Formula::AckMem(..) | Formula::Prov(..) => return Err(untranslatable(phi, "not a set formula")),
    })
}

/// Relativize an arithmetic formula to the finite ordinals, with the
/// standard table.
pub fn pa_to_zf(phi: &Formula) -> Result<Formula, BridgeError> {
    pa_to_zf_with(phi, TranslationTable::standard())
}

pub fn pa_to_zf_with(phi: &Formula, table: &TranslationTable) -> Result<Formula, BridgeError> {
    let mut tr = ToSet { table, next: phi.max_var().map_or(0, |m| m + 1), hoisted: BTreeMap::new() };
    let body = tr.formula(phi)?;
    // Hoisted numerals n > CONST_NUMERALS, outermost first: ∃h(ordinal(h) ∧ succ(prev, h) ∧ ...).
    let mut out = body;
    let chain: Vec<(u64, Var)> = tr.hoisted.iter().map(|(&n, &v)| (n, v)).collect();
    for (i, &(n, h)) in chain.iter().enumerate().rev() {
        let prev = if i == 0 { Term::Const(nat_to_ordinal(n - 1)?) } else { Term::Var(chain[i - 1].1) };
        let def = Formula::and(table.apply("ordinal", &[Term::Var(h)]), table.apply("succ", &[prev, Term::Var(h)]));
        out = Formula::exists(h, Formula::and(def, out));
    }
    Ok(out)
}

struct ToSet<'a> {
    table: &'a TranslationTable,
    next: Var,
    hoisted: BTreeMap<u64, Var>,
}

impl ToSet<'_> {
    fn fresh(&mut self) -> Var {
        self.next += 1;
        self.next - 1
    }

    /// A variable or constant naming the value of `t`, if `t` needs no graph.
    fn simple(&mut self, t: &Term) -> Result<Option<Term>, BridgeError> {
        if let Term::Var(v) = t {
            return Ok(Some(Term::Var(*v)));
        }
        let Some(n) = t.numeral_value() else { return Ok(None) };
        if n <= CONST_NUMERALS {
            return Ok(Some(Term::Const(nat_to_ordinal(n)?)));
        }
        for k in CONST_NUMERALS + 1..=n {
            if !self.hoisted.contains_key(&k) {
                let h = self.fresh();
                self.hoisted.insert(k, h);
            }
        }
        Ok(Some(Term::Var(self.hoisted[&n])))
    }

    /// `∃u(ordinal(u) ∧ [t denotes u] ∧ rest(u))` for compound `t`, else `rest(t*)`.
    fn with_operand(&mut self, t: &Term, rest: impl FnOnce(&mut Self, Term) -> Result<Formula, BridgeError>) -> Result<Formula, BridgeError> {
        if let Some(s) = self.simple(t)? {
            return rest(self, s);
        }
        let u = self.fresh();
        let def = self.denotes(t, Term::Var(u))?;
        let body = rest(self, Term::Var(u))?;
        let ord = self.table.apply("ordinal", &[Term::Var(u)]);
        Ok(Formula::exists(u, Formula::and(ord, Formula::and(def, body))))
    }

    /// A formula saying `t` has the value named by the simple term `target`.
    fn denotes(&mut self, t: &Term, target: Term) -> Result<Formula, BridgeError> {
        if let Some(s) = self.simple(t)? {
            return Ok(Formula::eq(s, target));
        }
        match t {
            Term::Succ(a) => self.with_operand(a, |me, a| Ok(me.table.apply("succ", &[a, target]))),
            Term::Add(a, b) | Term::Mul(a, b) => {
                let name = if matches!(t, Term::Add(..)) { "add" } else { "mul" };
                let b = b.as_ref().clone();
                self.with_operand(a, move |me, a| me.with_operand(&b, move |me, b| Ok(me.table.apply(name, &[a, b, target]))))
            }
            Term::Const(_) => Err(BridgeError::Untranslatable(format!("set constant {t} in an arithmetic formula"))),
            Term::Var(_) | Term::Zero => unreachable!("simple terms handled above"),
        }
    }

    fn formula(&mut self, f: &Formula) -> Result<Formula, BridgeError> {
        Ok(match f {
            Formula::Eq(s, t) => {
                if let Some(s) = self.simple(s)? {
                    self.denotes(t, s)?
                } else if let Some(t) = self.simple(t)? {
                    self.denotes(s, t)?
                } else {
                    let t = t.clone();
                    self.with_operand(s, move |me, s| me.denotes(&t, s))?
                }
            }
            Formula::Not(g) => Formula::not(self.formula(g)?),
            Formula::Or(a, b) => Formula::or(self.formula(a)?, self.formula(b)?),
            Formula::Exists(v, g) => Formula::exists(*v, Formula::and(self.table.apply("ordinal", &[Term::Var(*v)]), self.formula(g)?)),
            Formula::In(..) | Formula::AckMem(..) | Formula::Prov(..) => return Err(untranslatable(f, "not an arithmetic formula")),
        })
    }
}

/// The closure of the ordinals `0..=max` and of every recursion function for
/// `x + y` and `x · y` whose values stay at or below `max`.
#[derive(Debug, Clone)]
pub struct BridgeDomain {
    max: u64,
    domain: ClosureDomain,
    ordinals: Vec<usize>,
}

fn kuratowski(a: &HFSet, b: &HFSet) -> HFSet {
    HFSet::from_children([HFSet::from_children([a.clone()]), HFSet::from_children([a.clone(), b.clone()])])
}

/// `{⟨k, f(k)⟩ : k ≤ y}`.
fn recursion_function(y: u64, f: impl Fn(u64) -> u64, ords: &[HFSet]) -> HFSet {
    HFSet::from_children((0..=y).map(|k| kuratowski(&ords[k as usize], &ords[f(k) as usize])))
}

impl BridgeDomain {
    pub fn new(max: u64) -> Self {
        let ords: Vec<HFSet> = (0..=max).map(ordinal_set).collect();
        let mut roots = vec![ords[max as usize].clone()];
        for x in 0..=max {
            for y in 0..=max - x {
                roots.push(recursion_function(y, |k| x + k, &ords));
            }
            for y in 0..=max {
                if x * y <= max {
                    roots.push(recursion_function(y, |k| x * k, &ords));
                }
            }
        }
        let domain = ClosureDomain::from_roots(roots);
        let ordinals = ords.iter().map(|o| domain.id_of(o).expect("ordinals are in their closure")).collect();
        BridgeDomain { max, domain, ordinals }
    }

    pub fn max(&self) -> u64 {
        self.max
    }

    pub fn domain(&self) -> &ClosureDomain {
        &self.domain
    }

    /// Element index of the ordinal `n ≤ max`.
    pub fn ordinal(&self, n: u64) -> usize {
        self.ordinals[n as usize]
    }

    /// The ordinal value of element `id`, if it is one.
    pub fn value_of(&self, id: usize) -> Option<u64> {
        self.ordinals.iter().position(|&o| o == id).map(|n| n as u64)
    }

    pub fn eval_sentence(&self, phi: &Formula) -> Result<bool, BridgeError> {
        Ok(eval_in(phi, &self.domain, BRIDGE_BUDGET)?)
    }

    /// Truth of the definition `name` at the given element indices.
    pub fn holds(&self, table: &TranslationTable, name: &str, elems: &[usize]) -> Result<bool, BridgeError> {
        let def = table.get(name).ok_or_else(|| BridgeError::Table(format!("no definition of {name}")))?;
        let assignment: Vec<(Var, usize)> = elems.iter().enumerate().map(|(i, &e)| (i as Var, e)).collect();
        Ok(eval_with(&def.body, &self.domain, &assignment, BRIDGE_BUDGET)?)
    }
}

/// Disagreements between one table definition and brute-force arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TableCheck {
    pub name: String,
    pub cases: usize,
    pub mismatches: Vec<String>,
}

/// Check every required definition against arithmetic on the ordinals
/// `0..=max`: `ordinal` and `zero` on every element of the domain, `succ` on
/// every ordinal and element pair, `add` and `mul` on all triples of ordinals.
pub fn validate_table(table: &TranslationTable, max: u64) -> Result<Vec<TableCheck>, BridgeError> {
    let dom = &BridgeDomain::new(max);
    let n = dom.domain.size();
    let mut checks = Vec::new();
    let mut check = |name: &str, cases: &mut dyn Iterator<Item = (Vec<usize>, bool)>| -> Result<(), BridgeError> {
        let mut c = TableCheck { name: name.to_string(), cases: 0, mismatches: Vec::new() };
        for (elems, expected) in cases {
            c.cases += 1;
            if dom.holds(table, name, &elems)? != expected {
                let shown: Vec<String> = elems.iter().map(|&e| dom.domain.element(e).to_string()).collect();
                c.mismatches.push(format!("{name}({}) should be {expected}", shown.join(", ")));
            }
        }
        checks.push(c);
        Ok(())
    };
    check("ordinal", &mut (0..n).map(|e| (vec![e], dom.value_of(e).is_some())))?;
    check("zero", &mut (0..n).map(|e| (vec![e], dom.domain.element(e).is_empty())))?;
    check(
        "succ",
        &mut (0..=max).flat_map(|a| (0..n).map(move |e| (vec![dom.ordinal(a), e], dom.value_of(e) == Some(a + 1)))),
    )?;
    let triples = || (0..=max).flat_map(move |x| (0..=max).flat_map(move |y| (0..=max).map(move |z| (x, y, z))));
    check("add", &mut triples().map(|(x, y, z)| (vec![dom.ordinal(x), dom.ordinal(y), dom.ordinal(z)], x + y == z)))?;
    check("mul", &mut triples().map(|(x, y, z)| (vec![dom.ordinal(x), dom.ordinal(y), dom.ordinal(z)], x * y == z)))?;
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hf::{ack_decode, rank};
    use crate::semantics::{eval_sentence, ArithModel, FiniteStructure};
    use crate::syntax::{for_each_sentence, parse_any};

    #[test]
    fn ordinal_codes() {
        assert_eq!(nat_to_ordinal(0).unwrap(), AckCode::from(0u64));
        assert_eq!(nat_to_ordinal(1).unwrap(), AckCode::from(1u64));
        assert_eq!(nat_to_ordinal(2).unwrap(), AckCode::from(3u64));
        assert_eq!(nat_to_ordinal(3).unwrap(), AckCode::from(11u64));
        assert_eq!(nat_to_ordinal(4).unwrap(), AckCode::from(2059u64));
        assert_eq!(nat_to_ordinal(5).unwrap().value().bits(), 2060);
        assert!(nat_to_ordinal(6).is_err());
    }

    #[test]
    fn ordinal_coherence() {
        let mut prev = None;
        for n in 0..=5 {
            let c = nat_to_ordinal(n).unwrap();
            assert_eq!(rank(&ack_decode(&c)) as u64, n);
            assert_eq!(ack_decode(&c), ordinal_set(n));
            assert!(prev.is_none_or(|p| p < c));
            prev = Some(c);
        }
        for n in 0..16 {
            assert_eq!(rank(&ordinal_set(n)) as u64, n);
        }
    }

    #[test]
    fn zf_to_pa_examples() {
        let f = zf_to_pa(&parse_any("(in (c 0) (c 1))").unwrap()).unwrap();
        assert_eq!(f, Formula::AckMem(Term::numeral(0), Term::numeral(1)));
        assert!(ArithModel::new(4).eval(&f).unwrap());
        let id = parse_any("(= v0 v0)").unwrap();
        assert_eq!(zf_to_pa(&id).unwrap(), id);
        let f = zf_to_pa(&parse_any("(exists v0 (in v0 (c 3)))").unwrap()).unwrap();
        assert!(ArithModel::new(4).eval(&f).unwrap());
        assert!(zf_to_pa(&parse_any("(= (num 0) (num 0))").unwrap()).is_err());
    }

    #[test]
    fn pa_to_zf_examples() {
        let f = pa_to_zf(&parse_any("(= (num 0) (num 0))").unwrap()).unwrap();
        assert_eq!(f, parse_any("(= (c 0) (c 0))").unwrap());
        assert!(eval_sentence(&f, &FiniteStructure::rank(3).unwrap()).unwrap());

        let dom = BridgeDomain::new(4);
        let sum = pa_to_zf(&parse_any("(= (+ (S (num 0)) (S (num 0))) (S (S (num 0))))").unwrap()).unwrap();
        assert!(dom.eval_sentence(&sum).unwrap());
        let wrong = pa_to_zf(&parse_any("(= (+ (S (num 0)) (S (num 0))) (S (num 0)))").unwrap()).unwrap();
        assert!(!dom.eval_sentence(&wrong).unwrap());
        let half = pa_to_zf(&parse_any("(exists v0 (= (+ v0 v0) (S (num 0))))").unwrap()).unwrap();
        assert!(!dom.eval_sentence(&half).unwrap());
        assert!(!eval_sentence(&half, &FiniteStructure::rank(4).unwrap()).unwrap());
    }

    #[test]
    fn sum_needs_rank_five() {
        // The recursion function {⟨0,1⟩, ⟨1,2⟩} has rank 5, so V_4 refutes 1 + 1 = 2.
        let sum = pa_to_zf(&parse_any("(= (+ (S (num 0)) (S (num 0))) (S (S (num 0))))").unwrap()).unwrap();
        assert!(!eval_sentence(&sum, &FiniteStructure::rank(4).unwrap()).unwrap());
        let ords: Vec<HFSet> = (0..3).map(ordinal_set).collect();
        assert_eq!(rank(&recursion_function(1, |k| 1 + k, &ords)), 5);
    }

    #[test]
    fn large_numerals_are_hoisted() {
        let dom = BridgeDomain::new(8);
        let f = pa_to_zf(&parse_any("(= (+ (num 3) (num 4)) (num 7))").unwrap()).unwrap();
        assert!(f.constants().iter().all(|c| c.value().bits() <= 12));
        assert!(dom.eval_sentence(&f).unwrap());
        let g = pa_to_zf(&parse_any("(= (* (num 2) (num 3)) (num 7))").unwrap()).unwrap();
        assert!(!dom.eval_sentence(&g).unwrap());
    }

    #[test]
    fn pa_to_zf_rejects_set_atoms() {
        assert!(pa_to_zf(&parse_any("(in v0 v0)").unwrap()).is_err());
        assert!(pa_to_zf(&parse_any("(ackmem (num 0) (num 1))").unwrap()).is_err());
    }

    #[test]
    fn table_matches_arithmetic_to_twelve() {
        for c in validate_table(TranslationTable::standard(), 12).unwrap() {
            assert!(c.cases > 0);
            assert!(c.mismatches.is_empty(), "{}: {:?}", c.name, &c.mismatches[..c.mismatches.len().min(3)]);
        }
    }

    #[test]
    fn set_to_arith_transport_small() {
        let s = FiniteStructure::codes_below(8).unwrap();
        let consts: Vec<AckCode> = (0..8u64).map(AckCode::from).collect();
        let pa = ArithModel::new(8);
        for_each_sentence(&consts, 5, |phi| {
            assert_eq!(eval_sentence(phi, &s).unwrap(), pa.eval(&zf_to_pa(phi).unwrap()).unwrap(), "{phi}");
        });
    }
}
