//! One report value per command, rendered for people and for programs.
//!
//! The machine form is JSON and parses back to an equal [`Report`].

use crate::proofs::{BlowupStats, SearchStats};
use crate::schemes::{InternalOutcome, InternalReport, ReflectionVerdict};
use crate::truth::{CtReport, FacesReport};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// How the command came out, which also fixes the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Success, or every check passed.
    Ok,
    /// A yes/no query answered no.
    False,
    /// An audit found violations.
    Violations,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::False => 1,
            Status::Violations => 2,
        }
    }

    fn from_bool(b: bool) -> Self {
        if b {
            Status::Ok
        } else {
            Status::False
        }
    }

    fn from_passed(passed: bool) -> Self {
        if passed {
            Status::Ok
        } else {
            Status::Violations
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub k: usize,
    pub sentences: usize,
    pub true_sentences: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ReportBody {
    /// A computed value with labelled facts about it.
    Value { value: String, facts: Vec<(String, String)> },
    /// A yes/no answer to `query`.
    Boolean { query: String, value: bool, facts: Vec<(String, String)> },
    TowerBuilt { domain: String, reach: usize, node_budget: usize, levels: Vec<LevelSummary>, written: Option<String> },
    Ct(CtReport),
    Faces(FacesReport),
    DefinableSet { formula: String, members: Vec<String> },
    Piecewise { m: u64, code: String, bits_set: u64 },
    /// Only produced for valid proofs; invalid ones are errors.
    ProofCheck { nodes: usize, height: usize, cuts: usize },
    CutElim { stats: BlowupStats, written: Option<String> },
    Search { goal: String, size: usize, found: bool, proof_nodes: Option<usize>, stats: SearchStats, written: Option<String> },
    Internal(InternalReport),
    Reflection { theory: String, levels: usize, size: usize, verdicts: Vec<ReflectionVerdict> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// Seed used by randomized parts of the command, if any.
    pub seed: Option<u64>,
    pub status: Status,
    pub body: ReportBody,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: Option<u64>, body: ReportBody) -> Self {
        let status = match &body {
            ReportBody::Value { .. }
            | ReportBody::TowerBuilt { .. }
            | ReportBody::DefinableSet { .. }
            | ReportBody::Piecewise { .. }
            | ReportBody::ProofCheck { .. } => Status::Ok,
            ReportBody::Boolean { value, .. } => Status::from_bool(*value),
            ReportBody::Ct(r) => Status::from_passed(r.passed()),
            ReportBody::Faces(r) => Status::from_passed(r.passed()),
            ReportBody::CutElim { stats, .. } => Status::from_passed(stats.within_reference),
            ReportBody::Search { found, .. } => Status::from_bool(*found),
            ReportBody::Internal(r) => Status::from_passed(r.passed()),
            ReportBody::Reflection { verdicts, .. } => Status::from_passed(verdicts.iter().all(ReflectionVerdict::passed)),
        };
        Report { command: command.into(), seed, status, body }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}

pub fn render_machine(r: &Report) -> String {
    serde_json::to_string_pretty(r).expect("reports serialize")
}

pub fn parse_machine(text: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(text)
}

fn facts_text(out: &mut String, facts: &[(String, String)]) {
    let width = facts.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in facts {
        let _ = writeln!(out, "  {k:width$}  {v}");
    }
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    match &r.body {
        ReportBody::Value { value, facts } => {
            let _ = writeln!(out, "{value}");
            facts_text(&mut out, facts);
        }
        ReportBody::Boolean { query, value, facts } => {
            let _ = writeln!(out, "{value}");
            let _ = writeln!(out, "  query  {query}");
            facts_text(&mut out, facts);
        }
        ReportBody::TowerBuilt { domain, reach, node_budget, levels, written } => {
            let _ = writeln!(out, "tower over {domain}, reach {reach} (resource budget, not a logical bound)");
            let _ = writeln!(out, "sentence tables within {node_budget} nodes:");
            let _ = writeln!(out, "  {:>5}  {:>9}  {:>6}", "level", "sentences", "true");
            for l in levels {
                let _ = writeln!(out, "  {:>5}  {:>9}  {:>6}", l.k, l.sentences, l.true_sentences);
            }
            if let Some(p) = written {
                let _ = writeln!(out, "wrote {p}");
            }
        }
        ReportBody::Ct(ct) => {
            let _ = writeln!(
                out,
                "CT audit, depth bound {}, node budget {}, {} sentences",
                ct.depth_bound, ct.node_budget, ct.sentences_enumerated
            );
            for (clause, n) in &ct.instances {
                let _ = writeln!(out, "  clause {} ({clause:?}): {n} instances", clause.number());
            }
            let _ = writeln!(out, "{} violations", ct.violations.len());
            for v in &ct.violations {
                let _ = writeln!(out, "  clause {}: {} in T = {}, required {}", v.clause.number(), v.sentence, v.in_t, v.required);
            }
        }
        ReportBody::Faces(f) => {
            let _ = writeln!(out, "faces audit, reach {}", f.reach);
            let _ = writeln!(out, "  {:<12}  {:>7}  {:>8}  result", "face", "checked", "failures");
            for face in &f.faces {
                let _ = writeln!(out, "  {:<12}  {:>7}  {:>8}  {}", face.face, face.checked, face.failures, pass_fail(face.passed()));
                for e in &face.examples {
                    let _ = writeln!(out, "      {e}");
                }
            }
        }
        ReportBody::DefinableSet { formula, members } => {
            let _ = writeln!(out, "{{{}}}", members.join(", "));
            let _ = writeln!(out, "  {} members defined by {formula}", members.len());
        }
        ReportBody::Piecewise { m, code, bits_set } => {
            let _ = writeln!(out, "{code}");
            let _ = writeln!(out, "  codes below {m}: {bits_set} sentences in T");
        }
        ReportBody::ProofCheck { nodes, height, cuts } => {
            let _ = writeln!(out, "valid");
            let _ = writeln!(out, "  nodes {nodes}, height {height}, cuts {cuts}");
        }
        ReportBody::CutElim { stats, written } => {
            let _ = writeln!(out, "cut-free proof: {} nodes, height {}", stats.output_nodes, stats.output_height);
            let _ = writeln!(
                out,
                "  input: {} nodes, height {}, {} cuts, max cut rank {}",
                stats.input_nodes, stats.input_height, stats.input_cuts, stats.max_cut_rank
            );
            let bound = stats.reference_bound.as_deref().unwrap_or("(too large to print)");
            let _ = writeln!(out, "  reference curve 2_(r+1)(n) = {bound}; within: {}", stats.within_reference);
            if let Some(p) = written {
                let _ = writeln!(out, "wrote {p}");
            }
        }
        ReportBody::Search { goal, size, found, proof_nodes, stats, written } => {
            match proof_nodes {
                Some(n) if *found => {
                    let _ = writeln!(out, "proof of {goal} found with {n} nodes");
                }
                _ => {
                    let _ = writeln!(out, "no proof of {goal} within {size} nodes");
                }
            }
            let _ = writeln!(out, "  expansions {}, pruned {}, rounds {}", stats.expansions, stats.pruned, stats.rounds);
            if let Some(p) = written {
                let _ = writeln!(out, "wrote {p}");
            }
        }
        ReportBody::Internal(rep) => {
            let _ = writeln!(out, "{:?} audit over {}", rep.kind, rep.structure);
            for e in &rep.entries {
                let verdict = match &e.outcome {
                    InternalOutcome::InTMost => "in T_Most".to_string(),
                    InternalOutcome::NotInTMost { boundary: None } => "not in T_Most".to_string(),
                    InternalOutcome::NotInTMost { boundary: Some(b) } => format!(
                        "not in T_Most; images {} of rank {} missing{}",
                        b.image_set,
                        b.image_rank,
                        if b.image_in_structure { " (inside the structure!)" } else { "" }
                    ),
                    InternalOutcome::ReachExceeded { depth, reach } => format!("depth {depth} beyond reach {reach}"),
                };
                let _ = writeln!(out, "  {}  depth {}: {verdict}", e.generator, e.instance_depth);
            }
            let _ = writeln!(out, "{}", pass_fail(rep.passed()));
        }
        ReportBody::Reflection { theory, levels, size, verdicts } => {
            let _ = writeln!(out, "reflection audit of {theory}, {levels} levels, proof size {size}");
            for v in verdicts {
                let _ = writeln!(
                    out,
                    "  {:<28}  proved at {:?}  failures {:?}  {}",
                    v.generator,
                    v.proved,
                    v.failures,
                    pass_fail(v.passed())
                );
            }
            let bad = verdicts.iter().filter(|v| !v.passed()).count();
            let _ = writeln!(out, "{bad} violations");
        }
    }
    if let Some(seed) = r.seed {
        let _ = writeln!(out, "seed {seed}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truth::{CtClause, FaceResult};

    fn empty_ct() -> CtReport {
        CtReport {
            depth_bound: 3,
            node_budget: 5,
            clauses_checked: CtClause::ALL.to_vec(),
            sentences_enumerated: 0,
            instances: vec![],
            violations: vec![],
        }
    }

    #[test]
    fn empty_ct_report_has_zero_violations() {
        let r = Report::new("truth verify-ct", None, ReportBody::Ct(empty_ct()));
        assert_eq!(r.status, Status::Ok);
        assert!(render_text(&r).contains("0 violations"));
        let v: serde_json::Value = serde_json::from_str(&render_machine(&r)).unwrap();
        assert_eq!(v["body"]["violations"], serde_json::json!([]));
    }

    #[test]
    fn faces_report_renders_a_table() {
        let faces = FacesReport {
            seed: 7,
            reach: 4,
            faces: vec![
                FaceResult { face: "DC".into(), checked: 10, failures: 0, examples: vec![] },
                FaceResult { face: "SentClosure".into(), checked: 5, failures: 1, examples: vec!["(= (c 0) (c 1))".into()] },
            ],
        };
        let r = Report::new("truth faces", Some(7), ReportBody::Faces(faces));
        let text = render_text(&r);
        assert!(text.lines().any(|l| l.contains("DC") && l.ends_with("PASS")));
        assert!(text.lines().any(|l| l.contains("SentClosure") && l.ends_with("FAIL")));
        assert!(text.contains("seed 7"));
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn machine_form_round_trips() {
        let reports = [
            Report::new("truth verify-ct", None, ReportBody::Ct(empty_ct())),
            Report::new(
                "eval",
                None,
                ReportBody::Boolean { query: "(in (c 0) (c 1))".into(), value: true, facts: vec![("domain".into(), "rank:3".into())] },
            ),
            Report::new("hf tc", None, ReportBody::Value { value: "11".into(), facts: vec![] }),
            Report::new(
                "proof search",
                None,
                ReportBody::Search {
                    goal: "(= v0 v0)".into(),
                    size: 3,
                    found: false,
                    proof_nodes: None,
                    stats: SearchStats::default(),
                    written: None,
                },
            ),
        ];
        for r in reports {
            assert_eq!(parse_machine(&render_machine(&r)).unwrap(), r);
        }
    }
}
