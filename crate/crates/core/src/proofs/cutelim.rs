//! Cut elimination by inversion and reduction on cut rank.
//!
//! Assumption leaves are first internalized: every sequent is weakened by the
//! duals of the assumptions and each leaf becomes an identity derivation. Cuts
//! are then removed from the top down. Each cut `{X, ¬X}` is reduced by
//! inverting the premise holding the invertible side and cutting on strictly
//! smaller formulas; an atomic cut grafts the other premise onto the axioms.

use super::{dual, instantiate_body, tower_bound, ProofError, ProofTree, Rule, Sequent};
use crate::syntax::{Formula, Term, Var};
use std::collections::BTreeSet;

/// Node ceiling for the cut-free output.
pub const DEFAULT_MAX_NODES: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BlowupStats {
    pub input_nodes: usize,
    pub input_height: usize,
    pub input_cuts: usize,
    pub max_cut_rank: usize,
    pub output_nodes: usize,
    pub output_height: usize,
    /// `2_{r+1}(n)` for cut rank `r` and input size `n`, in decimal, or `None`
    /// when it has more than 2^20 bits.
    pub reference_bound: Option<String>,
    pub within_reference: bool,
}

struct Elim {
    next: Var,
    max_nodes: usize,
}

fn orient(c: &Formula) -> Formula {
    // The member of {c, dual c} that is not the negation of the other.
    match c {
        Formula::Not(g) => (**g).clone(),
        _ => c.clone(),
    }
}

fn term_vars(t: &Term) -> BTreeSet<Var> {
    let mut s = BTreeSet::new();
    t.vars_into(&mut s);
    s
}

fn without(s: &Sequent, f: &Formula) -> Sequent {
    let mut s = s.clone();
    s.remove(f);
    s
}

impl Elim {
    fn fresh(&mut self) -> Var {
        let v = self.next;
        self.next += 1;
        v
    }

    fn guard(&self, p: &ProofTree) -> Result<(), ProofError> {
        let n = p.node_count();
        if n > self.max_nodes {
            return Err(ProofError::Resource(format!("cut elimination exceeded {} nodes", self.max_nodes)));
        }
        Ok(())
    }

    /// Replace free `z` by `t` throughout, leaving the premises of a rebinding `Forall z` alone.
    fn subst(&self, p: &ProofTree, z: Var, t: &Term) -> Result<ProofTree, ProofError> {
        let tv = term_vars(t);
        let sub = |f: &Formula| instantiate_body(f, z, t);
        let sequent = p.sequent.iter().map(sub).collect::<Result<Sequent, _>>()?;
        let (rule, descend) = match &p.rule {
            Rule::Ax(f) => (Rule::Ax(sub(f)?), true),
            Rule::Or(f) => (Rule::Or(sub(f)?), true),
            Rule::And(f) => (Rule::And(sub(f)?), true),
            Rule::DoubleNeg(f) => (Rule::DoubleNeg(sub(f)?), true),
            Rule::Cut(f) => (Rule::Cut(sub(f)?), true),
            Rule::Assumption(f) => (Rule::Assumption(sub(f)?), true),
            Rule::Exists { principal, witness } => (Rule::Exists { principal: sub(principal)?, witness: witness.replace(z, t) }, true),
            Rule::Forall { principal, eigen } => {
                if tv.contains(eigen) {
                    return Err(ProofError::Capture(format!("eigenvariable v{eigen} occurs in {t}")));
                }
                (Rule::Forall { principal: sub(principal)?, eigen: *eigen }, *eigen != z)
            }
        };
        let children = if descend {
            p.children.iter().map(|c| self.subst(c, z, t)).collect::<Result<_, _>>()?
        } else {
            p.children.clone()
        };
        Ok(ProofTree { sequent, rule, children })
    }

    /// Rename every eigenvariable to a variable never used before.
    fn freshen(&mut self, p: &ProofTree) -> Result<ProofTree, ProofError> {
        let mut node = p.clone();
        if let Rule::Forall { principal, eigen } = &p.rule {
            let y = self.fresh();
            let child = self.subst(&p.children[0], *eigen, &Term::Var(y))?;
            node.rule = Rule::Forall { principal: principal.clone(), eigen: y };
            node.children = vec![self.freshen(&child)?];
        } else {
            node.children = p.children.iter().map(|c| self.freshen(c)).collect::<Result<_, _>>()?;
        }
        Ok(node)
    }

    fn weaken(&mut self, p: &ProofTree, extra: &Sequent) -> Result<ProofTree, ProofError> {
        fn add(p: &mut ProofTree, extra: &Sequent) {
            p.sequent.extend(extra.iter().cloned());
            for c in &mut p.children {
                add(c, extra);
            }
        }
        let mut q = self.freshen(p)?;
        add(&mut q, extra);
        Ok(q)
    }

    /// Remove `f` everywhere after weakening by `actives`; nodes with `f` as
    /// principal are replaced by the chosen premise.
    fn invert(&mut self, p: &ProofTree, f: &Formula, actives: Sequent, pick: &mut dyn FnMut(&mut Self, &ProofTree) -> Result<ProofTree, ProofError>) -> Result<ProofTree, ProofError> {
        fn go(e: &mut Elim, n: &ProofTree, f: &Formula, pick: &mut dyn FnMut(&mut Elim, &ProofTree) -> Result<ProofTree, ProofError>) -> Result<ProofTree, ProofError> {
            if n.rule.formula() == f && !matches!(n.rule, Rule::Cut(_) | Rule::Assumption(_)) {
                let chosen = pick(e, n)?;
                return go(e, &chosen, f, pick);
            }
            let children = n.children.iter().map(|c| go(e, c, f, pick)).collect::<Result<_, _>>()?;
            Ok(ProofTree { sequent: without(&n.sequent, f), rule: n.rule.clone(), children })
        }
        let w = self.weaken(p, &actives)?;
        go(self, &w, f, pick)
    }

    fn inv_or(&mut self, p: &ProofTree, x: &Formula) -> Result<ProofTree, ProofError> {
        let Formula::Or(a, b) = x else { unreachable!() };
        self.invert(p, x, [(**a).clone(), (**b).clone()].into(), &mut |_, n| Ok(n.children[0].clone()))
    }

    fn inv_and(&mut self, p: &ProofTree, nx: &Formula, side: usize) -> Result<ProofTree, ProofError> {
        let Formula::Not(inner) = nx else { unreachable!() };
        let Formula::Or(a, b) = inner.as_ref() else { unreachable!() };
        let act = dual(if side == 0 { a } else { b });
        self.invert(p, nx, [act].into(), &mut |_, n| Ok(n.children[side].clone()))
    }

    fn inv_dneg(&mut self, p: &ProofTree, nnh: &Formula) -> Result<ProofTree, ProofError> {
        let Formula::Not(inner) = nnh else { unreachable!() };
        let Formula::Not(h) = inner.as_ref() else { unreachable!() };
        self.invert(p, nnh, [(**h).clone()].into(), &mut |_, n| Ok(n.children[0].clone()))
    }

    fn inv_forall(&mut self, p: &ProofTree, nx: &Formula, t: &Term) -> Result<ProofTree, ProofError> {
        let Formula::Not(inner) = nx else { unreachable!() };
        let Formula::Exists(v, body) = inner.as_ref() else { unreachable!() };
        let act = dual(&instantiate_body(body, *v, t)?);
        let t = t.clone();
        self.invert(p, nx, [act].into(), &mut |e, n| {
            let Rule::Forall { eigen, .. } = &n.rule else { unreachable!() };
            e.subst(&n.children[0], *eigen, &t)
        })
    }

    /// From `p ∋ c` and `q ∋ c*`, a cut-free proof of `(p \ c) ∪ (q \ c*)`.
    fn reduce(&mut self, c: &Formula, p: &ProofTree, q: &ProofTree) -> Result<ProofTree, ProofError> {
        let x = orient(c);
        if &x == c {
            self.reduce_pair(&x, p, q)
        } else {
            self.reduce_pair(&x, q, p)
        }
    }

    /// From `px ∋ x` and `pn ∋ ¬x`, a cut-free proof of `(px \ x) ∪ (pn \ ¬x)`.
    fn reduce_pair(&mut self, x: &Formula, px: &ProofTree, pn: &ProofTree) -> Result<ProofTree, ProofError> {
        let nx = Formula::not(x.clone());
        if !px.sequent.contains(x) {
            return Ok(px.clone());
        }
        if !pn.sequent.contains(&nx) {
            return Ok(pn.clone());
        }
        let out = match x {
            Formula::Or(a, b) => {
                let p1 = self.inv_or(px, x)?;
                let qa = self.inv_and(pn, &nx, 0)?;
                let qb = self.inv_and(pn, &nx, 1)?;
                let r = self.reduce(a, &p1, &qa)?;
                self.reduce(b, &r, &qb)?
            }
            Formula::Not(h) => {
                // ¬x = ¬¬h is invertible; the remaining cut is on {h, ¬h}.
                let pn1 = self.inv_dneg(pn, &nx)?;
                self.reduce_pair(h, &pn1, px)?
            }
            Formula::Exists(..) => self.reduce_exists(x, &nx, px, pn)?,
            _ => self.reduce_atomic(x, px, pn)?,
        };
        self.guard(&out)?;
        Ok(out)
    }

    fn reduce_atomic(&mut self, a: &Formula, pa: &ProofTree, pn: &ProofTree) -> Result<ProofTree, ProofError> {
        let na = Formula::not(a.clone());
        let delta = without(&pn.sequent, &na);
        let w = self.weaken(pa, &delta)?;
        if delta.contains(a) {
            return Ok(w);
        }
        fn go(n: &ProofTree, a: &Formula, pn: &ProofTree) -> ProofTree {
            if matches!(&n.rule, Rule::Ax(b) if b == a) {
                return pn.clone();
            }
            ProofTree { sequent: without(&n.sequent, a), rule: n.rule.clone(), children: n.children.iter().map(|c| go(c, a, pn)).collect() }
        }
        Ok(go(&w, a, pn))
    }

    fn reduce_exists(&mut self, x: &Formula, nx: &Formula, px: &ProofTree, pn: &ProofTree) -> Result<ProofTree, ProofError> {
        let Formula::Exists(v, body) = x else { unreachable!() };
        let delta = without(&pn.sequent, nx);
        let w = self.weaken(px, &delta)?;
        if delta.contains(x) {
            return Ok(w);
        }
        let pn = self.freshen(pn)?;
        self.reduce_exists_go(&w, x, nx, *v, body, &pn)
    }

    fn reduce_exists_go(&mut self, n: &ProofTree, x: &Formula, nx: &Formula, v: Var, body: &Formula, pn: &ProofTree) -> Result<ProofTree, ProofError> {
        if let Rule::Exists { principal, witness } = &n.rule {
            if principal == x {
                let child = self.reduce_exists_go(&n.children[0], x, nx, v, body, pn)?;
                let inst = instantiate_body(body, v, witness)?;
                let q = self.inv_forall(pn, nx, witness)?;
                return self.reduce(&inst, &child, &q);
            }
        }
        let children = n.children.iter().map(|c| self.reduce_exists_go(c, x, nx, v, body, pn)).collect::<Result<_, _>>()?;
        Ok(ProofTree { sequent: without(&n.sequent, x), rule: n.rule.clone(), children })
    }

    fn eliminate(&mut self, p: &ProofTree) -> Result<ProofTree, ProofError> {
        let children: Vec<ProofTree> = p.children.iter().map(|c| self.eliminate(c)).collect::<Result<_, _>>()?;
        match &p.rule {
            Rule::Cut(c) => self.reduce(c, &children[0], &children[1]),
            _ => Ok(ProofTree { sequent: p.sequent.clone(), rule: p.rule.clone(), children }),
        }
    }

    /// A proof of `gamma`, which must contain `f` and `f*`, from axioms only.
    fn identity(&mut self, f: &Formula, gamma: &Sequent) -> Result<ProofTree, ProofError> {
        let x = orient(f);
        let nx = Formula::not(x.clone());
        let with = |extra: &[&Formula]| {
            let mut s = gamma.clone();
            s.extend(extra.iter().map(|f| (*f).clone()));
            s
        };
        Ok(match &x {
            Formula::Or(a, b) => {
                let g1 = with(&[a, b]);
                let da = dual(a);
                let db = dual(b);
                let left = self.identity(a, &with(&[a, b, &da]))?;
                let right = self.identity(b, &with(&[a, b, &db]))?;
                let and = ProofTree::new(g1, Rule::And(nx), vec![left, right]);
                ProofTree::new(gamma.clone(), Rule::Or(x), vec![and])
            }
            Formula::Exists(v, body) => {
                let y = self.fresh();
                let inst = instantiate_body(body, *v, &Term::Var(y))?;
                let dinst = dual(&inst);
                let inner = self.identity(&inst, &with(&[&dinst, &inst]))?;
                let ex = ProofTree::new(with(&[&dinst]), Rule::Exists { principal: x.clone(), witness: Term::Var(y) }, vec![inner]);
                ProofTree::new(gamma.clone(), Rule::Forall { principal: nx, eigen: y }, vec![ex])
            }
            Formula::Not(h) => {
                let inner = self.identity(h, &with(&[h]))?;
                ProofTree::new(gamma.clone(), Rule::DoubleNeg(nx), vec![inner])
            }
            atom => ProofTree::new(gamma.clone(), Rule::Ax(atom.clone()), vec![]),
        })
    }

    fn internalize(&mut self, p: &ProofTree, assumptions: &[Formula]) -> Result<ProofTree, ProofError> {
        let duals: Sequent = assumptions.iter().map(dual).collect();
        let w = self.weaken(p, &duals)?;
        self.replace_assumptions(&w)
    }

    fn replace_assumptions(&mut self, n: &ProofTree) -> Result<ProofTree, ProofError> {
        if let Rule::Assumption(f) = &n.rule {
            return self.identity(f, &n.sequent);
        }
        let children = n.children.iter().map(|c| self.replace_assumptions(c)).collect::<Result<_, _>>()?;
        Ok(ProofTree { sequent: n.sequent.clone(), rule: n.rule.clone(), children })
    }
}

fn start(p: &ProofTree, assumptions: &[Formula]) -> Elim {
    let top = assumptions.iter().filter_map(Formula::max_var).chain(p.max_var()).max();
    Elim { next: top.map_or(0, |v| v + 1), max_nodes: DEFAULT_MAX_NODES }
}

/// Replace assumption leaves by identity derivations; the root gains the
/// duals of `assumptions`.
pub fn internalize_assumptions(pi: &ProofTree, assumptions: &[Formula]) -> Result<ProofTree, ProofError> {
    start(pi, assumptions).internalize(pi, assumptions)
}

/// A cut-free proof of the same goal from the same assumptions.
///
/// The result has no `Cut` and no `Assumption` nodes; its root lies inside the
/// input root plus the duals of `assumptions`. Fails with `Capture` when an
/// existential witness would be captured by a quantifier of the formula it is
/// substituted into, and with `Resource` beyond [`DEFAULT_MAX_NODES`] nodes.
pub fn eliminate_cuts(pi: &ProofTree, assumptions: &[Formula]) -> Result<ProofTree, ProofError> {
    let mut e = start(pi, assumptions);
    let internal = e.internalize(pi, assumptions)?;
    e.eliminate(&internal)
}

pub fn eliminate_cuts_with_stats(pi: &ProofTree, assumptions: &[Formula]) -> Result<(ProofTree, BlowupStats), ProofError> {
    let out = eliminate_cuts(pi, assumptions)?;
    let rank = pi.max_cut_rank();
    let n = pi.node_count();
    let bound = tower_bound(rank + 1, n as u64, 1 << 20);
    let within = bound.as_ref().is_none_or(|b| *b >= out.node_count().into());
    let stats = BlowupStats {
        input_nodes: n,
        input_height: pi.height(),
        input_cuts: pi.cut_count(),
        max_cut_rank: rank,
        output_nodes: out.node_count(),
        output_height: out.height(),
        reference_bound: bound.map(|b| b.to_string()),
        within_reference: within,
    };
    Ok((out, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofs::{check_proof, has_subformula_property, modus_ponens_fixture, sequent};
    use crate::syntax::parse_any;

    fn f(s: &str) -> Formula {
        parse_any(s).unwrap()
    }

    #[test]
    fn identity_derivations_check() {
        for s in [
            "(in (c 0) (c 1))",
            "(or (in (c 0) (c 1)) (not (= (c 2) (c 2))))",
            "(exists v0 (forall v1 (or (in v1 v0) (= v1 v0))))",
            "(not (not (in (c 0) (c 1))))",
        ] {
            let phi = f(s);
            let mut e = Elim { next: 10, max_nodes: DEFAULT_MAX_NODES };
            let gamma = sequent([phi.clone(), dual(&phi)]);
            let p = e.identity(&phi, &gamma).unwrap();
            assert!(check_proof(&p, std::slice::from_ref(&phi), &phi), "{s}");
            assert!(p.is_cut_free());
        }
    }

    #[test]
    fn modus_ponens_cut_is_removed() {
        let fx = modus_ponens_fixture();
        let (out, stats) = eliminate_cuts_with_stats(&fx.proof, &fx.assumptions).unwrap();
        assert!(out.is_cut_free());
        assert!(check_proof(&out, &fx.assumptions, &fx.goal));
        assert!(has_subformula_property(&out, &fx.assumptions, &fx.goal));
        assert!(stats.within_reference);
        assert_eq!(stats.input_cuts, 1);
    }

    #[test]
    fn quantified_cut_is_removed() {
        // From ∀v0 (v0 ∈ c1 → v0 ∈ c3) and c0 ∈ c1, prove ∃v0 v0 ∈ c3 via the lemma c0 ∈ c3.
        let all = f("(forall v0 (imp (in v0 (c 1)) (in v0 (c 3))))");
        let fact = f("(in (c 0) (c 1))");
        let goal = f("(exists v0 (in v0 (c 3)))");
        let lemma = f("(in (c 0) (c 3))");
        let phi = vec![all.clone(), fact.clone()];
        let root = sequent([goal.clone(), dual(&all), dual(&fact)]);
        let with = |extra: &[&Formula]| {
            let mut s = root.clone();
            s.extend(extra.iter().map(|f| (*f).clone()));
            s
        };
        // Left: Γ, lemma. dual(all) = ∃v0 ¬(¬v0∈c1 ∨ v0∈c3), instantiate with c0.
        let ex_body = f("(not (or (not (in (c 0) (c 1))) (in (c 0) (c 3))))");
        let and_node = ProofTree::new(
            with(&[&lemma, &ex_body]),
            Rule::And(ex_body.clone()),
            vec![
                ProofTree::new(with(&[&lemma, &ex_body, &fact]), Rule::Ax(fact.clone()), vec![]),
                ProofTree::new(with(&[&lemma, &ex_body, &dual(&lemma)]), Rule::Ax(lemma.clone()), vec![]),
            ],
        );
        let left = ProofTree::new(with(&[&lemma]), Rule::Exists { principal: dual(&all), witness: Term::constant(0u64) }, vec![and_node]);
        // Right: Γ, ¬lemma; goal by witness c0.
        let right = ProofTree::new(
            with(&[&dual(&lemma)]),
            Rule::Exists { principal: goal.clone(), witness: Term::constant(0u64) },
            vec![ProofTree::new(with(&[&dual(&lemma), &lemma]), Rule::Ax(lemma.clone()), vec![])],
        );
        let cut = ProofTree::new(root, Rule::Cut(lemma), vec![left, right]);
        assert!(check_proof(&cut, &phi, &goal));
        let out = eliminate_cuts(&cut, &phi).unwrap();
        assert!(out.is_cut_free());
        assert!(check_proof(&out, &phi, &goal));
        assert!(has_subformula_property(&out, &phi, &goal));
    }

    #[test]
    fn universal_cut_with_eigenvariable() {
        // Cut on ∀v0 (v0 = v0 ∨ ¬v0 = v0), proved with an eigenvariable, then instantiated at c2.
        let body = f("(or (= v0 v0) (not (= v0 v0)))");
        let all = Formula::forall(0, body.clone());
        let goal = f("(or (= (c 2) (c 2)) (not (= (c 2) (c 2))))");
        let eq0 = f("(= v0 v0)");
        let left = ProofTree::new(
            sequent([goal.clone(), all.clone()]),
            Rule::Forall { principal: all.clone(), eigen: 0 },
            vec![ProofTree::new(
                sequent([goal.clone(), all.clone(), body.clone()]),
                Rule::Or(body.clone()),
                vec![ProofTree::new(sequent([goal.clone(), all.clone(), body.clone(), eq0.clone(), dual(&eq0)]), Rule::Ax(eq0.clone()), vec![])],
            )],
        );
        // dual(all) = ∃v0 ¬body; instantiate with c2 and close by And on ¬goal.
        let ex = dual(&all);
        let ng = dual(&goal);
        let eq2 = f("(= (c 2) (c 2))");
        let s2 = sequent([goal.clone(), ex.clone(), ng.clone()]);
        let mut s3 = s2.clone();
        s3.insert(eq2.clone());
        s3.insert(dual(&eq2));
        let right = ProofTree::new(
            sequent([goal.clone(), ex.clone()]),
            Rule::Exists { principal: ex.clone(), witness: Term::constant(2u64) },
            vec![ProofTree::new(
                s2.clone(),
                Rule::Or(goal.clone()),
                vec![ProofTree::new(s3.clone(), Rule::Ax(eq2.clone()), vec![])],
            )],
        );
        // Right branch: the Or on goal only adds the disjuncts; ¬goal is then redundant but harmless.
        let cut = ProofTree::new(sequent([goal.clone()]), Rule::Cut(all), vec![left, right]);
        let ok = check_proof(&cut, &[], &goal);
        assert!(ok, "{:?}", crate::proofs::check_proof_detailed(&cut, &[], &goal));
        let out = eliminate_cuts(&cut, &[]).unwrap();
        assert!(out.is_cut_free());
        assert!(check_proof(&out, &[], &goal));
    }
}
