//! The `truthbench` command line.
//!
//! Exit codes: 0 success or all checks passed, 1 a yes/no query answered no,
//! 2 an audit found violations, and from 3 up one code per kind of error
//! (see [`CliError::exit_code`]).

use crate::artifact::{read_artifact, write_artifact, ArtifactError, ArtifactKind};
use crate::bridge::{nat_to_ordinal, pa_to_zf, zf_to_pa, BridgeError};
use crate::hf::{ack_decode, ack_encode, parse_set_literal, rank, rank_of_code, transitive_closure_code, AckCode, DomainSpec, HfError, DEFAULT_DOMAIN_BUDGET};
use crate::proofs::{bounded_search_with, eliminate_cuts_with_stats, ProofError, ProofFile, SearchConfig};
use crate::report::{render_machine, render_text, LevelSummary, Report, ReportBody};
use crate::schemes::{
    audit_internal, epsilon_induction_instance, fault_injected_theory, induction_instance, reflection_audit, ref_tower, replacement_battery,
    replacement_instance, sample_theory, ReflectionConfig, SchemeError, SchemeKind, TheoryFile, TheorySpec,
};
use crate::semantics::{eval_delta0, eval_sentence, eval_term, EvalError, FiniteStructure};
use crate::syntax::{formula_from_sexpr, parse, parse_any, parse_term, Formula, SExpr, Signature, SyntaxError};
use crate::truth::{faces_audit, verify_ct, FacesConfig, TowerArtifact, TowerConfig, TruthError, TruthTower, ARTIFACT_NODE_BUDGET, DEFAULT_MAX_REACH};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Default seed for randomized audits; echoed in every report that uses it.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Artifact(#[from] ArtifactError),
    #[error("invalid proof: {0}")]
    Proof(ProofError),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("cannot write {path}: {msg}")]
    Write { path: String, msg: String },
}

impl CliError {
    /// 3 usage, 4 unreadable file, 5 version mismatch, 6 malformed or
    /// tampered artifact, 7 invalid proof, 8 invalid input, 9 resource
    /// limit, 10 unwritable output.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 3,
            CliError::Artifact(ArtifactError::Io { .. }) => 4,
            CliError::Artifact(ArtifactError::Version { .. }) => 5,
            CliError::Artifact(_) => 6,
            CliError::Proof(_) => 7,
            CliError::Input(_) => 8,
            CliError::Resource(_) => 9,
            CliError::Write { .. } => 10,
        }
    }
}

impl From<SyntaxError> for CliError {
    fn from(e: SyntaxError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<HfError> for CliError {
    fn from(e: HfError) -> Self {
        match e {
            HfError::Budget { .. } | HfError::TooLarge { .. } => CliError::Resource(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Depth { .. } => CliError::Resource(e.to_string()),
            EvalError::Hf(h) => h.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<TruthError> for CliError {
    fn from(e: TruthError) -> Self {
        match e {
            TruthError::ReachExceeded { .. } | TruthError::Resource { .. } => CliError::Resource(e.to_string()),
            TruthError::Hf(h) => h.into(),
            TruthError::Eval(v) => v.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<BridgeError> for CliError {
    fn from(e: BridgeError) -> Self {
        match e {
            BridgeError::Hf(h) => h.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ProofError> for CliError {
    fn from(e: ProofError) -> Self {
        match e {
            ProofError::Resource(_) => CliError::Resource(e.to_string()),
            _ => CliError::Proof(e),
        }
    }
}

impl From<SchemeError> for CliError {
    fn from(e: SchemeError) -> Self {
        match e {
            SchemeError::Proof(p) => p.into(),
            SchemeError::Eval(v) => v.into(),
            SchemeError::Truth(t) => t.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "truthbench", version, about = "Truth classes over hereditarily finite sets, and the tools around them")]
pub struct Cli {
    /// Print the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized audits.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hereditarily finite sets and their codes.
    #[command(subcommand)]
    Hf(HfCmd),
    /// Evaluate a sentence or a closed term.
    Eval(EvalArgs),
    /// Translate between arithmetic and set formulas.
    #[command(subcommand)]
    Bridge(BridgeCmd),
    /// Build and query truth towers.
    #[command(subcommand)]
    Truth(TruthCmd),
    /// Check, transform and search for proofs.
    #[command(subcommand)]
    Proof(ProofCmd),
    /// Scheme instances and audits.
    #[command(subcommand)]
    Schemes(SchemesCmd),
}

#[derive(Debug, Subcommand)]
pub enum HfCmd {
    /// Code of a set literal such as `{}` or `{0,1}` (members given by code).
    Encode { set: String },
    /// The set with the given code.
    Decode { code: String },
    /// Code of the transitive closure.
    Tc { code: String },
    /// Rank of the set with the given code.
    Rank { code: String },
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Evaluate in the structure `rank:<r>` or `code:<n>`.
    #[arg(long, conflicts_with_all = ["delta0", "term"])]
    pub domain: Option<String>,
    /// Evaluate a bounded-quantifier set sentence in all hereditarily finite sets.
    #[arg(long, conflicts_with = "term")]
    pub delta0: bool,
    /// Evaluate a closed arithmetic term.
    #[arg(long)]
    pub term: bool,
    pub expr: String,
}

#[derive(Debug, Subcommand)]
pub enum BridgeCmd {
    /// Arithmetic formula to set formula.
    Pa2zf { formula: String },
    /// Set formula to arithmetic formula.
    Zf2pa { formula: String },
    /// Code of the von Neumann ordinal `n`.
    Ordinal { n: u64 },
}

#[derive(Debug, Subcommand)]
pub enum TruthCmd {
    /// Build a tower and write it as an artifact.
    Build {
        #[arg(long)]
        domain: String,
        /// Number of levels.
        #[arg(long)]
        depth: usize,
        /// Node budget of the saved sentence tables.
        #[arg(long, default_value_t = ARTIFACT_NODE_BUDGET)]
        nodes: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_REACH)]
        max_reach: usize,
        #[arg(long, default_value = "tower.json")]
        out: PathBuf,
    },
    /// Membership of a sentence in `T_Most`.
    Query { tower: PathBuf, sentence: String },
    /// Exhaustive audit of the compositional clauses.
    VerifyCt {
        tower: PathBuf,
        #[arg(long, default_value_t = 7)]
        nodes: usize,
    },
    /// Seeded audit of the disjunction and closure properties.
    Faces { tower: PathBuf },
    /// The set defined by a formula with one free variable.
    Defset { tower: PathBuf, formula: String },
    /// Code whose bits below `m` mark the sentences in `T_Most`.
    Piecewise {
        tower: PathBuf,
        #[arg(long)]
        m: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProofCmd {
    /// Check a proof artifact.
    Check { file: PathBuf },
    /// Eliminate the cuts of a proof artifact.
    Cutelim {
        file: PathBuf,
        /// Accepted for compatibility; statistics are always reported.
        #[arg(long)]
        stats: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded proof search.
    Search {
        /// Assumptions: a theory artifact, or a file of s-expressions.
        #[arg(long)]
        phi: Option<PathBuf>,
        #[arg(long)]
        goal: String,
        #[arg(long, default_value_t = 20)]
        size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AuditKind {
    Repl,
    Eps,
}

#[derive(Debug, Subcommand)]
pub enum SchemesCmd {
    /// Induction instance (arithmetic) or ∈-induction instance (sets).
    Ind { formula: String },
    /// Replacement instance for `φ(v0, v1[, v2])`.
    Repl { formula: String },
    /// Audit the reflection tower over a theory.
    Ref {
        #[arg(long)]
        theory: PathBuf,
        /// JSON array of formulas with one free variable; defaults to the theory's own.
        #[arg(long)]
        battery: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        #[arg(long, default_value_t = ReflectionConfig::default().size)]
        size: usize,
    },
    /// Ask a tower about a battery of scheme instances.
    Audit {
        tower: PathBuf,
        #[arg(long, value_enum, default_value_t = AuditKind::Repl)]
        kind: AuditKind,
        #[arg(long)]
        battery: Option<PathBuf>,
    },
    /// Write the sample theory, or its fault-injected variant, as an artifact.
    SampleTheory {
        #[arg(long)]
        faulty: bool,
        #[arg(long, default_value = "theory.json")]
        out: PathBuf,
    },
}

/// What a run produced: the exit code and the text for the terminal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub text: String,
    /// Whether `text` is an error message rather than a report.
    pub is_error: bool,
}

/// Parse `argv` (program name first) and run the command.
pub fn run<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { CliError::Usage(String::new()).exit_code() } else { 0 };
            return CliOutput { code, text: e.render().to_string(), is_error: code != 0 };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let text = if cli.json { render_machine(&report) + "\n" } else { render_text(&report) };
            CliOutput { code: report.exit_code(), text, is_error: false }
        }
        Err(e) => CliOutput { code: e.exit_code(), text: format!("error: {e}\n"), is_error: true },
    }
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Hf(c) => hf_cmd(c),
        Command::Eval(a) => eval_cmd(a),
        Command::Bridge(c) => bridge_cmd(c),
        Command::Truth(c) => truth_cmd(c, cli.seed),
        Command::Proof(c) => proof_cmd(c),
        Command::Schemes(c) => schemes_cmd(c),
    }
}

fn value(command: &str, value: impl ToString, facts: Vec<(&str, String)>) -> Report {
    let facts = facts.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    Report::new(command, None, ReportBody::Value { value: value.to_string(), facts })
}

fn code_arg(text: &str) -> Result<AckCode, CliError> {
    AckCode::from_str(text.trim()).map_err(|_| CliError::Input(format!("'{text}' is not a natural number")))
}

fn members_literal(c: &AckCode) -> String {
    let ms: Vec<String> = c.members().iter().map(AckCode::to_string).collect();
    format!("{{{}}}", ms.join(","))
}

fn hf_cmd(c: &HfCmd) -> Result<Report, CliError> {
    Ok(match c {
        HfCmd::Encode { set } => {
            let s = parse_set_literal(set)?;
            let code = ack_encode(&s)?;
            value("hf encode", &code, vec![("set", s.to_string()), ("rank", rank(&s).to_string())])
        }
        HfCmd::Decode { code } => {
            let code = code_arg(code)?;
            let set = ack_decode(&code);
            value("hf decode", members_literal(&code), vec![("set", set.to_string()), ("rank", rank(&set).to_string())])
        }
        HfCmd::Tc { code } => {
            let tc = transitive_closure_code(&code_arg(code)?);
            value("hf tc", &tc, vec![("members", members_literal(&tc))])
        }
        HfCmd::Rank { code } => value("hf rank", rank_of_code(&code_arg(code)?), vec![]),
    })
}

fn eval_cmd(a: &EvalArgs) -> Result<Report, CliError> {
    let boolean = |query: &str, v: bool, facts: Vec<(String, String)>| {
        Report::new("eval", None, ReportBody::Boolean { query: query.to_string(), value: v, facts })
    };
    if a.term {
        let t = parse_term(&a.expr)?;
        return Ok(value("eval --term", eval_term(&t)?, vec![("term", t.to_string())]));
    }
    let phi = parse(&a.expr, Signature::Set)?;
    if a.delta0 {
        return Ok(boolean(&phi.to_string(), eval_delta0(&phi)?, vec![("structure".into(), "V_omega".into())]));
    }
    let Some(domain) = &a.domain else {
        return Err(CliError::Usage("eval needs one of --domain, --delta0 or --term".into()));
    };
    let spec = DomainSpec::from_str(domain)?;
    let s = FiniteStructure::new(spec.clone(), DEFAULT_DOMAIN_BUDGET)?;
    Ok(boolean(&phi.to_string(), eval_sentence(&phi, &s)?, vec![("domain".into(), spec.to_string())]))
}

fn bridge_cmd(c: &BridgeCmd) -> Result<Report, CliError> {
    Ok(match c {
        BridgeCmd::Pa2zf { formula } => {
            let f = pa_to_zf(&parse(formula, Signature::Arith)?)?;
            value("bridge pa2zf", &f, vec![("depth", f.depth().to_string())])
        }
        BridgeCmd::Zf2pa { formula } => {
            let f = zf_to_pa(&parse(formula, Signature::Set)?)?;
            value("bridge zf2pa", &f, vec![("depth", f.depth().to_string())])
        }
        BridgeCmd::Ordinal { n } => {
            let code = nat_to_ordinal(*n)?;
            value("bridge ordinal", &code, vec![("members", members_literal(&code))])
        }
    })
}

/// Read a tower artifact, rebuild it and confirm the tables.
pub fn load_tower(path: &Path) -> Result<TruthTower, CliError> {
    let art: TowerArtifact = read_artifact(path, ArtifactKind::Tower)?;
    let tower = art.rebuild()?;
    let bad = art.verify(&tower);
    if !bad.is_empty() {
        return Err(ArtifactError::Payload { kind: ArtifactKind::Tower, msg: format!("sentence tables of levels {bad:?} do not match") }.into());
    }
    Ok(tower)
}

fn write<T: serde::Serialize>(path: &Path, kind: ArtifactKind, payload: &T) -> Result<String, CliError> {
    write_artifact(path, kind, payload).map_err(|e| CliError::Write { path: path.display().to_string(), msg: e.to_string() })?;
    Ok(path.display().to_string())
}

fn truth_cmd(c: &TruthCmd, seed: u64) -> Result<Report, CliError> {
    match c {
        TruthCmd::Build { domain, depth, nodes, max_reach, out } => {
            let mut cfg = TowerConfig::new(DomainSpec::from_str(domain)?, *depth);
            cfg.node_budget = *nodes;
            cfg.max_reach = *max_reach;
            let tower = TruthTower::build(cfg)?;
            let art = TowerArtifact::from_tower(&tower);
            let levels = art
                .levels
                .iter()
                .map(|l| LevelSummary { k: l.k, sentences: l.sentences, true_sentences: l.true_codes.len() })
                .collect();
            let written = Some(write(out, ArtifactKind::Tower, &art)?);
            Ok(Report::new(
                "truth build",
                None,
                ReportBody::TowerBuilt { domain: art.domain.to_string(), reach: art.reach, node_budget: art.node_budget, levels, written },
            ))
        }
        TruthCmd::Query { tower, sentence } => {
            let tower = load_tower(tower)?;
            let phi = parse(sentence, Signature::Set)?;
            let m = tower.t_most(&phi)?;
            let facts = vec![("decided at level".to_string(), m.certificate.to_string())];
            Ok(Report::new("truth query", None, ReportBody::Boolean { query: phi.to_string(), value: m.value, facts }))
        }
        TruthCmd::VerifyCt { tower, nodes } => {
            let tower = load_tower(tower)?;
            let r = verify_ct(&tower, tower.reach(), &tower.domain_codes(), *nodes);
            Ok(Report::new("truth verify-ct", None, ReportBody::Ct(r)))
        }
        TruthCmd::Faces { tower } => {
            let tower = load_tower(tower)?;
            let r = faces_audit(&tower, &FacesConfig { seed, ..FacesConfig::default() });
            Ok(Report::new("truth faces", Some(seed), ReportBody::Faces(r)))
        }
        TruthCmd::Defset { tower, formula } => {
            let tower = load_tower(tower)?;
            let phi = parse(formula, Signature::Set)?;
            let members = tower.definable_set(&phi)?.iter().map(AckCode::to_string).collect();
            Ok(Report::new("truth defset", None, ReportBody::DefinableSet { formula: phi.to_string(), members }))
        }
        TruthCmd::Piecewise { tower, m } => {
            let tower = load_tower(tower)?;
            let code = tower.piecewise_code(*m)?;
            let bits_set = code.value().count_ones();
            Ok(Report::new("truth piecewise", None, ReportBody::Piecewise { m: *m, code: code.to_string(), bits_set }))
        }
    }
}

/// Formulas from a theory artifact, or from a plain file of s-expressions.
fn read_assumptions(path: &Path) -> Result<Vec<Formula>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| ArtifactError::Io { path: path.display().to_string(), source })?;
    if text.trim_start().starts_with('{') {
        let file: TheoryFile = crate::artifact::ArtifactEnvelope::open(&text, ArtifactKind::Theory)?;
        return Ok(TheorySpec::from_file(&file)?.axioms);
    }
    SExpr::parse_all(&text)?
        .iter()
        .map(|e| {
            let f = formula_from_sexpr(e, &mut |_, _, _| None)?;
            f.signature().map_err(|(a, b)| CliError::Input(format!("{f} mixes {a} and {b} symbols")))?;
            Ok(f)
        })
        .collect()
}

fn proof_cmd(c: &ProofCmd) -> Result<Report, CliError> {
    match c {
        ProofCmd::Check { file } => {
            let pf: ProofFile = read_artifact(file, ArtifactKind::Proof)?;
            let doc = pf.decode()?;
            doc.check()?;
            let p = &doc.proof;
            Ok(Report::new("proof check", None, ReportBody::ProofCheck { nodes: p.node_count(), height: p.height(), cuts: p.cut_count() }))
        }
        ProofCmd::Cutelim { file, out, .. } => {
            let pf: ProofFile = read_artifact(file, ArtifactKind::Proof)?;
            let doc = pf.decode()?;
            doc.check()?;
            let (cut_free, stats) = eliminate_cuts_with_stats(&doc.proof, &doc.assumptions)?;
            let written = match out {
                Some(p) => Some(write(p, ArtifactKind::Proof, &ProofFile::new(&doc.assumptions, &doc.goal, &cut_free))?),
                None => None,
            };
            Ok(Report::new("proof cutelim", None, ReportBody::CutElim { stats, written }))
        }
        ProofCmd::Search { phi, goal, size, out } => {
            let assumptions = match phi {
                Some(p) => read_assumptions(p)?,
                None => Vec::new(),
            };
            let goal_f = parse_any(goal)?;
            let cfg = SearchConfig { size_ceiling: (*size).max(SearchConfig::default().size_ceiling), ..SearchConfig::default() };
            let (proof, stats) = bounded_search_with(&assumptions, &goal_f, *size, cfg)?;
            let written = match (&proof, out) {
                (Some(p), Some(path)) => Some(write(path, ArtifactKind::Proof, &ProofFile::new(&assumptions, &goal_f, p))?),
                _ => None,
            };
            Ok(Report::new(
                "proof search",
                None,
                ReportBody::Search {
                    goal: goal_f.to_string(),
                    size: *size,
                    found: proof.is_some(),
                    proof_nodes: proof.as_ref().map(|p| p.node_count()),
                    stats,
                    written,
                },
            ))
        }
    }
}

fn read_battery(path: &Path, sig: Signature) -> Result<Vec<Formula>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| ArtifactError::Io { path: path.display().to_string(), source })?;
    let items: Vec<String> = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("battery {}: {e}", path.display())))?;
    items.iter().map(|s| Ok(parse(s, sig)?)).collect()
}

fn schemes_cmd(c: &SchemesCmd) -> Result<Report, CliError> {
    match c {
        SchemesCmd::Ind { formula } => {
            let phi = parse_any(formula)?;
            let inst = if phi.fits_signature(Signature::Arith) { induction_instance(&phi)? } else { epsilon_induction_instance(&phi)? };
            Ok(value("schemes ind", &inst, vec![("depth", inst.depth().to_string())]))
        }
        SchemesCmd::Repl { formula } => {
            let inst = replacement_instance(&parse(formula, Signature::Set)?)?;
            Ok(value("schemes repl", &inst, vec![("depth", inst.depth().to_string())]))
        }
        SchemesCmd::Ref { theory, battery, levels, size } => {
            let file: TheoryFile = read_artifact(theory, ArtifactKind::Theory)?;
            let mut u = TheorySpec::from_file(&file)?;
            if let Some(b) = battery {
                u.battery = read_battery(b, u.signature)?;
            }
            let cfg = ReflectionConfig { size: *size, ..ReflectionConfig::default() };
            let mut verdicts = Vec::new();
            for level in ref_tower(&u, *levels)? {
                verdicts.extend(reflection_audit(&level, cfg)?);
            }
            Ok(Report::new("schemes ref", None, ReportBody::Reflection { theory: u.label, levels: *levels, size: *size, verdicts }))
        }
        SchemesCmd::Audit { tower, kind, battery } => {
            let tower = load_tower(tower)?;
            let battery = match battery {
                Some(b) => read_battery(b, Signature::Set)?,
                None => replacement_battery(),
            };
            let kind = match kind {
                AuditKind::Repl => SchemeKind::Replacement,
                AuditKind::Eps => SchemeKind::EpsilonInduction,
            };
            Ok(Report::new("schemes audit", None, ReportBody::Internal(audit_internal(&tower, kind, &battery)?)))
        }
        SchemesCmd::SampleTheory { faulty, out } => {
            let u = if *faulty { fault_injected_theory() } else { sample_theory() };
            let written = write(out, ArtifactKind::Theory, &u.to_file())?;
            Ok(value("schemes sample-theory", &u.label, vec![("axioms", u.axioms.len().to_string()), ("wrote", written)]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> CliOutput {
        run(std::iter::once("truthbench").chain(args.iter().copied()))
    }

    #[test]
    fn eval_exit_code_mirrors_the_answer() {
        let yes = run_args(&["eval", "--domain", "rank:3", "(in (c 0) (c 1))"]);
        assert_eq!((yes.code, yes.text.trim()), (0, "true\n  query  (in (c 0) (c 1))\n  domain  rank:3".trim()));
        let no = run_args(&["eval", "--domain", "rank:3", "(in (c 1) (c 0))"]);
        assert_eq!(no.code, 1);
    }

    #[test]
    fn hf_commands() {
        assert!(run_args(&["hf", "encode", "{0,1}"]).text.starts_with("3\n"));
        assert!(run_args(&["hf", "decode", "11"]).text.starts_with("{0,1,3}\n"));
        assert!(run_args(&["hf", "tc", "8"]).text.starts_with("11\n"));
        assert_eq!(run_args(&["hf", "rank", "8"]).text, "3\n");
    }

    #[test]
    fn errors_have_distinct_codes() {
        assert_eq!(run_args(&["frobnicate"]).code, 3);
        assert_eq!(run_args(&["proof", "check", "/nonexistent/proof.json"]).code, 4);
        assert_eq!(run_args(&["eval", "--domain", "rank:3", "(in (c 0)"]).code, 8);
        assert_eq!(run_args(&["bridge", "ordinal", "9"]).code, 9);
        assert_eq!(run_args(&["--help"]).code, 0);
    }

    #[test]
    fn tower_round_trip_and_version_gate() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tower.json");
        let p = path.to_str().unwrap();
        let built = run_args(&["truth", "build", "--domain", "rank:3", "--depth", "4", "--out", p]);
        assert_eq!(built.code, 0, "{}", built.text);
        let q = run_args(&["truth", "query", p, "(exists v0 (in v0 (c 1)))"]);
        assert_eq!(q.code, 0, "{}", q.text);
        let ct = run_args(&["truth", "verify-ct", p, "--nodes", "5"]);
        assert_eq!(ct.code, 0, "{}", ct.text);
        assert!(ct.text.contains("0 violations"));

        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::write(&path, text.replacen("\"version\": 1", "\"version\": 2", 1)).unwrap();
        assert_eq!(run_args(&["truth", "query", p, "(= (c 0) (c 0))"]).code, 5);
        std::fs::write(&path, text.replacen("\"reach\": 4", "\"reach\": 3", 1)).unwrap();
        assert_eq!(run_args(&["truth", "query", p, "(= (c 0) (c 0))"]).code, 6);
    }
}
