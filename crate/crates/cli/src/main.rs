//! Batch front end over the analysis library.
//!
//! `analyze` renders verdicts and writes proof/counterexample artifacts,
//! `recheck` replays stored proofs against a revised model, and the
//! remaining commands cover refinement comparison, size metrics, and
//! randomized stress-testing of proofs. Output is plain text with verdicts
//! rendered `T`/`?`/`F`; identical inputs and flags produce byte-identical
//! output. Exit codes encode the outcome so the commands compose in
//! scripts: `analyze` exits 0 when everything is satisfied, 1 on a
//! violation, 2 when something is left open, 3 on errors; the other
//! commands use 0/1 for pass/fail and 3 for errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use proofslice_core::ltl::{parse_properties, tau_transform, Formula};
use proofslice_core::pks::{parse_pks, Approximation};
use proofslice_core::proof::format::{parse_proof, serialize_counterexample, serialize_proof};
use proofslice_core::proof::mutants::proof_preserving_mutants;
use proofslice_core::proof::{
    analyze, certificate_clauses, recheck, verdict, AnalysisResult, ProofLevel, TopologicalProof,
};
use proofslice_core::sat::automaton_description;
use proofslice_core::uc::extract_uc;
use proofslice_core::{Pks, Tri};

#[derive(Parser)]
#[command(
    name = "proofslice",
    version,
    about = "Three-valued LTL analysis of partial Kripke structures"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check each property against a model; emit proofs and counterexamples.
    Analyze {
        /// Model file.
        model: PathBuf,
        /// Properties file, one `name: formula` per line.
        properties: PathBuf,
        /// Directory for `<name>.proof` / `<name>.ce` artifacts.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the clause encoding each verdict was computed from.
        #[arg(long)]
        dump_snf: bool,
        /// Print the unsatisfiable core behind each proof.
        #[arg(long)]
        dump_uc: bool,
        /// Print the automaton of each translated property.
        #[arg(long)]
        dump_automaton: bool,
    },
    /// Replay stored proofs against a revised model.
    Recheck {
        /// Revised model file.
        model: PathBuf,
        /// Proof files written by a previous `analyze` run.
        #[arg(required = true)]
        proofs: Vec<PathBuf>,
    },
    /// Check that the second model refines the first.
    CheckRefinement {
        original: PathBuf,
        refined: PathBuf,
    },
    /// Print the size of model or proof files.
    Metrics {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Hammer every produced proof with random proof-preserving revisions
    /// and confirm none of them weakens the verdict.
    StressProof {
        model: PathBuf,
        properties: PathBuf,
        /// How many revisions to draw.
        #[arg(long, default_value_t = 100)]
        mutants: usize,
        /// Seed for the revision stream.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let code = match Cli::parse().cmd {
        Cmd::Analyze {
            model,
            properties,
            out,
            dump_snf,
            dump_uc,
            dump_automaton,
        } => cmd_analyze(
            &model,
            &properties,
            out.as_deref(),
            Dumps {
                snf: dump_snf,
                uc: dump_uc,
                automaton: dump_automaton,
            },
        ),
        Cmd::Recheck { model, proofs } => cmd_recheck(&model, &proofs),
        Cmd::CheckRefinement { original, refined } => cmd_check_refinement(&original, &refined),
        Cmd::Metrics { files } => cmd_metrics(&files),
        Cmd::StressProof {
            model,
            properties,
            mutants,
            seed,
        } => cmd_stress_proof(&model, &properties, mutants, seed),
    };
    ExitCode::from(code)
}

struct Dumps {
    snf: bool,
    uc: bool,
    automaton: bool,
}

const EXIT_OK: u8 = 0;
const EXIT_VIOLATED: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_ERROR: u8 = 3;

fn fail(message: String) -> u8 {
    eprintln!("error: {message}");
    EXIT_ERROR
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_model(path: &Path) -> Result<Pks, String> {
    let m = parse_pks(&read(path)?)
        .map_err(|e| format!("{}:{}: {}", path.display(), e.line, e.message))?;
    let issues = m.validate();
    if !issues.is_empty() {
        return Err(format!("{}: {}", path.display(), issues.join("; ")));
    }
    Ok(m)
}

fn load_properties(path: &Path) -> Result<Vec<(String, Formula)>, String> {
    parse_properties(&read(path)?).map_err(|e| format!("{}:{e}", path.display()))
}

fn load_proof(path: &Path) -> Result<TopologicalProof, String> {
    parse_proof(&read(path)?)
        .map_err(|e| format!("{}:{}: {}", path.display(), e.line, e.message))
}

fn cmd_analyze(model: &Path, properties: &Path, out: Option<&Path>, dumps: Dumps) -> u8 {
    let (m, props) = match load_model(model).and_then(|m| Ok((m, load_properties(properties)?))) {
        Ok(pair) => pair,
        Err(e) => return fail(e),
    };
    if let Some(dir) = out {
        if let Err(e) = fs::create_dir_all(dir) {
            return fail(format!("{}: {e}", dir.display()));
        }
    }

    let (mut any_error, mut any_false, mut any_unknown) = (false, false, false);
    let mut sections = Vec::new();
    for (name, phi) in &props {
        let result = match analyze(&m, name, phi) {
            Ok(r) => r,
            Err(e) => {
                println!("{name} error {e}");
                any_error = true;
                continue;
            }
        };
        let proof_col = match result.proof() {
            Some(p) => p.size().to_string(),
            None => "-".into(),
        };
        let ce_col = match result.counterexample() {
            Some(ce) => ce.len().to_string(),
            None => "-".into(),
        };
        println!("{name} {} proof={proof_col} ce={ce_col}", result.verdict());

        match result.verdict() {
            Tri::True => {}
            Tri::Unknown => any_unknown = true,
            Tri::False => any_false = true,
        }

        if let Some(dir) = out {
            if let Err(e) = write_artifacts(dir, name, &result) {
                return fail(e);
            }
        }
        if let Err(e) = collect_dumps(&mut sections, &dumps, &m, name, phi, &result) {
            return fail(e);
        }
    }
    for section in sections {
        print!("{section}");
    }
    if any_error {
        EXIT_ERROR
    } else if any_false {
        EXIT_VIOLATED
    } else if any_unknown {
        EXIT_UNKNOWN
    } else {
        EXIT_OK
    }
}

fn write_artifacts(dir: &Path, name: &str, result: &AnalysisResult) -> Result<(), String> {
    let write = |path: PathBuf, text: String| {
        fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))
    };
    if let Some(proof) = result.proof() {
        write(dir.join(format!("{name}.proof")), serialize_proof(proof))?;
    }
    if let Some(ce) = result.counterexample() {
        write(
            dir.join(format!("{name}.ce")),
            serialize_counterexample(name, ce),
        )?;
    }
    Ok(())
}

fn collect_dumps(
    sections: &mut Vec<String>,
    dumps: &Dumps,
    m: &Pks,
    name: &str,
    phi: &Formula,
    result: &AnalysisResult,
) -> Result<(), String> {
    use std::fmt::Write;

    // the encoding the final verdict was computed from: the optimistic one
    // proves satisfaction, the pessimistic one everything else
    let (mode, mode_word) = match result.verdict() {
        Tri::True => (Approximation::Optimistic, "optimistic"),
        _ => (Approximation::Pessimistic, "pessimistic"),
    };
    if dumps.snf {
        let clauses = certificate_clauses(m, mode, phi).map_err(|e| e.to_string())?;
        let mut s = format!("\nsnf {name} {mode_word}\n");
        for c in &clauses {
            writeln!(s, "  {c}").unwrap();
        }
        sections.push(s);
    }
    if dumps.uc {
        let mut s = format!("\nuc {name} {mode_word}\n");
        if result.proof().is_some() {
            let clauses = certificate_clauses(m, mode, phi).map_err(|e| e.to_string())?;
            let core = extract_uc(&clauses).map_err(|e| e.to_string())?;
            for c in core.clauses() {
                writeln!(s, "  {c}").unwrap();
            }
        } else {
            writeln!(s, "  none: the encoding is satisfiable").unwrap();
        }
        sections.push(s);
    }
    if dumps.automaton {
        let tau = tau_transform(phi).map_err(|e| e.to_string())?;
        let description = automaton_description(&tau).map_err(|e| e.to_string())?;
        let mut s = format!("\nautomaton {name} for {tau}\n");
        for line in description.lines() {
            writeln!(s, "  {line}").unwrap();
        }
        sections.push(s);
    }
    Ok(())
}

fn cmd_recheck(model: &Path, proofs: &[PathBuf]) -> u8 {
    let m = match load_model(model) {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    let mut all_pass = true;
    for path in proofs {
        let proof = match load_proof(path) {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        let report = recheck(&proof, &m);
        if report.passed() {
            println!("{} PASS", proof.property);
            continue;
        }
        all_pass = false;
        println!("{} FAIL", proof.property);
        for p in &report.missing_props {
            println!("  missing proposition {p}");
        }
        for v in &report.violations {
            println!("  wants: {}", v.expected);
            match &v.observed {
                Some(found) => println!("  model: {found}"),
                None => println!("  model: no such element"),
            }
        }
    }
    if all_pass {
        EXIT_OK
    } else {
        EXIT_VIOLATED
    }
}

fn cmd_check_refinement(original: &Path, refined: &Path) -> u8 {
    let (orig, refd) = match load_model(original).and_then(|a| Ok((a, load_model(refined)?))) {
        Ok(pair) => pair,
        Err(e) => return fail(e),
    };
    match refinement_violation(&orig, &refd) {
        None => {
            assert!(refd.is_refinement_of(&orig));
            println!("OK: {} refines {}", refd.name(), orig.name());
            EXIT_OK
        }
        Some(reason) => {
            assert!(!refd.is_refinement_of(&orig));
            println!("NOT a refinement: {reason}");
            EXIT_VIOLATED
        }
    }
}

/// The first condition `refined` breaks, if any. A refinement keeps states,
/// transitions, initial states, and propositions, and may only turn `?`
/// labels definite.
fn refinement_violation(original: &Pks, refined: &Pks) -> Option<String> {
    if refined.props() != original.props() {
        return Some("the proposition lists differ".into());
    }
    if refined.states() != original.states() {
        return Some("the state lists differ".into());
    }
    let trans = |m: &Pks| m.transitions_idx().collect::<Vec<_>>();
    if trans(refined) != trans(original) {
        return Some("the transition relations differ".into());
    }
    let init = |m: &Pks| m.initial_idx().collect::<Vec<_>>();
    if init(refined) != init(original) {
        return Some("the initial states differ".into());
    }
    for s in 0..original.state_count() {
        for p in 0..original.prop_count() {
            let old = original.label_idx(s, p);
            let new = refined.label_idx(s, p);
            if old != Tri::Unknown && new != old {
                return Some(format!(
                    "label {} {} changes from {old} to {new}",
                    original.state_name(s),
                    original.prop_name(p)
                ));
            }
        }
    }
    None
}

fn cmd_metrics(files: &[PathBuf]) -> u8 {
    for path in files {
        let text = match read(path) {
            Ok(t) => t,
            Err(e) => return fail(e),
        };
        let head = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .find(|l| !l.is_empty())
            .unwrap_or("");
        if head.starts_with("pks ") || head == "pks" {
            match parse_pks(&text) {
                Ok(m) => println!("model {} size={}", m.name(), m.model_size()),
                Err(e) => return fail(format!("{}:{}: {}", path.display(), e.line, e.message)),
            }
        } else if head.starts_with("proof ") || head == "proof" {
            match parse_proof(&text) {
                Ok(p) => println!("proof {} size={}", p.property, p.size()),
                Err(e) => return fail(format!("{}:{}: {}", path.display(), e.line, e.message)),
            }
        } else {
            return fail(format!(
                "{}: neither a model nor a proof file",
                path.display()
            ));
        }
    }
    EXIT_OK
}

fn cmd_stress_proof(model: &Path, properties: &Path, mutants: usize, seed: u64) -> u8 {
    let (m, props) = match load_model(model).and_then(|m| Ok((m, load_properties(properties)?))) {
        Ok(pair) => pair,
        Err(e) => return fail(e),
    };

    let mut rows = Vec::new();
    let mut proofs = Vec::new();
    for (name, phi) in &props {
        match analyze(&m, name, phi) {
            Ok(r) => match r.proof() {
                Some(p) => {
                    rows.push((name.clone(), phi.clone(), Some(proofs.len())));
                    proofs.push(p.clone());
                }
                None => rows.push((name.clone(), phi.clone(), None)),
            },
            Err(e) => return fail(format!("{name}: {e}")),
        }
    }

    // one revision stream constrained by every proof at once, so each
    // revision is a fair test for each of them
    let revisions = proof_preserving_mutants(&m, &proofs, mutants, seed);
    let mut broken = false;
    for (name, phi, proof_idx) in &rows {
        let Some(proof) = proof_idx.map(|i| &proofs[i]) else {
            println!("{name} F skipped: a violated property has no proof");
            continue;
        };
        let mut bad = 0;
        for (i, rev) in revisions.iter().enumerate() {
            let kept = recheck(proof, rev).passed()
                && match proof.level {
                    ProofLevel::Definitive => verdict(rev, phi) == Ok(Tri::True),
                    ProofLevel::Possible => {
                        matches!(verdict(rev, phi), Ok(Tri::True) | Ok(Tri::Unknown))
                    }
                };
            if !kept {
                println!("{name} {} broken by revision {i}", proof.level);
                bad += 1;
            }
        }
        if bad == 0 {
            println!(
                "{name} {} kept by all {} revisions",
                proof.level,
                revisions.len()
            );
        } else {
            broken = true;
        }
    }
    if broken {
        EXIT_VIOLATED
    } else {
        EXIT_OK
    }
}
