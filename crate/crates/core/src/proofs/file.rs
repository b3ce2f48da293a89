//! The on-disk form of a proof: assumptions, goal and a tree of nodes whose
//! formulas are s-expressions. Wrapped in an [`ArtifactEnvelope`] of kind
//! `proof` when written.
//!
//! [`ArtifactEnvelope`]: crate::artifact::ArtifactEnvelope

use super::{check_proof_detailed, ProofError, ProofTree, Rule};
use crate::syntax::{parse_any, parse_term, Formula, SyntaxError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofNode {
    pub rule: String,
    /// The principal formula, or the cut formula.
    pub formula: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen: Option<u32>,
    pub sequent: Vec<String>,
    #[serde(default)]
    pub children: Vec<ProofNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofFile {
    pub assumptions: Vec<String>,
    pub goal: String,
    pub proof: ProofNode,
}

/// A decoded proof file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofDocument {
    pub assumptions: Vec<Formula>,
    pub goal: Formula,
    pub proof: ProofTree,
}

fn structural(path: &[usize], msg: String) -> ProofError {
    ProofError::Structural { path: path.to_vec(), msg }
}

fn read_formula(text: &str, path: &[usize]) -> Result<Formula, ProofError> {
    parse_any(text).map_err(|e: SyntaxError| structural(path, format!("bad formula '{text}': {e}")))
}

impl ProofNode {
    pub fn from_tree(t: &ProofTree) -> Self {
        let (witness, eigen) = match &t.rule {
            Rule::Exists { witness, .. } => (Some(witness.to_string()), None),
            Rule::Forall { eigen, .. } => (None, Some(*eigen)),
            _ => (None, None),
        };
        ProofNode {
            rule: t.rule.name().to_string(),
            formula: t.rule.formula().to_string(),
            witness,
            eigen,
            sequent: t.sequent.iter().map(Formula::to_string).collect(),
            children: t.children.iter().map(ProofNode::from_tree).collect(),
        }
    }

    fn to_tree_at(&self, path: &mut Vec<usize>) -> Result<ProofTree, ProofError> {
        let f = read_formula(&self.formula, path)?;
        let rule = match self.rule.as_str() {
            "ax" => Rule::Ax(f),
            "or" => Rule::Or(f),
            "and" => Rule::And(f),
            "dneg" => Rule::DoubleNeg(f),
            "cut" => Rule::Cut(f),
            "assumption" => Rule::Assumption(f),
            "exists" => {
                let w = self.witness.as_deref().ok_or_else(|| structural(path, "exists node without a witness".into()))?;
                let witness = parse_term(w).map_err(|e| structural(path, format!("bad witness '{w}': {e}")))?;
                Rule::Exists { principal: f, witness }
            }
            "forall" => {
                let eigen = self.eigen.ok_or_else(|| structural(path, "forall node without an eigenvariable".into()))?;
                Rule::Forall { principal: f, eigen }
            }
            other => return Err(structural(path, format!("unknown rule '{other}'"))),
        };
        let sequent = self.sequent.iter().map(|s| read_formula(s, path)).collect::<Result<_, _>>()?;
        let mut children = Vec::with_capacity(self.children.len());
        for (i, c) in self.children.iter().enumerate() {
            path.push(i);
            children.push(c.to_tree_at(path)?);
            path.pop();
        }
        Ok(ProofTree::new(sequent, rule, children))
    }

    pub fn to_tree(&self) -> Result<ProofTree, ProofError> {
        self.to_tree_at(&mut Vec::new())
    }
}

impl ProofFile {
    pub fn new(assumptions: &[Formula], goal: &Formula, proof: &ProofTree) -> Self {
        ProofFile {
            assumptions: assumptions.iter().map(Formula::to_string).collect(),
            goal: goal.to_string(),
            proof: ProofNode::from_tree(proof),
        }
    }

    /// Decode formulas and the tree; does not check the rules.
    pub fn decode(&self) -> Result<ProofDocument, ProofError> {
        let assumptions = self.assumptions.iter().map(|a| read_formula(a, &[])).collect::<Result<_, _>>()?;
        let goal = read_formula(&self.goal, &[])?;
        Ok(ProofDocument { assumptions, goal, proof: self.proof.to_tree()? })
    }
}

impl ProofDocument {
    pub fn check(&self) -> Result<(), ProofError> {
        check_proof_detailed(&self.proof, &self.assumptions, &self.goal)
    }

    pub fn to_file(&self) -> ProofFile {
        ProofFile::new(&self.assumptions, &self.goal, &self.proof)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofs::fixture_corpus;

    #[test]
    fn fixtures_round_trip_through_json() {
        for fx in fixture_corpus() {
            let file = ProofFile::new(&fx.assumptions, &fx.goal, &fx.proof);
            let json = serde_json::to_string(&file).unwrap();
            let back: ProofFile = serde_json::from_str(&json).unwrap();
            let doc = back.decode().unwrap();
            assert_eq!(doc.proof, fx.proof, "{}", fx.name);
            assert_eq!(doc.goal, fx.goal);
            doc.check().unwrap();
        }
    }

    #[test]
    fn structural_errors_carry_a_path() {
        let fx = &fixture_corpus()[0];
        let mut file = ProofFile::new(&fx.assumptions, &fx.goal, &fx.proof);
        let mut node = &mut file.proof;
        let mut depth = 0;
        while !node.children.is_empty() {
            node = &mut node.children[0];
            depth += 1;
        }
        node.rule = "magic".into();
        match file.decode() {
            Err(ProofError::Structural { path, .. }) => assert_eq!(path.len(), depth),
            other => panic!("expected a structural error, got {other:?}"),
        }
    }
}
