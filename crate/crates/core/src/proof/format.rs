//! Line-oriented text formats for stored proofs and counterexamples.
//!
//! A proof file pins the slice a verdict rests on:
//!
//! ```text
//! proof phi4 level=?
//! origin-ap move suck on reached
//! tpi OFF
//! tpt IDLE : OFF IDLE MOVING
//! tpp MOVING suck ?
//! ```
//!
//! A counterexample file records one ultimately periodic path:
//!
//! ```text
//! ce phi3
//! prefix OFF
//! loop IDLE
//! ```
//!
//! `#` starts a comment, as in model files. Serialization is canonical
//! (clauses in their stored order, which analysis keeps sorted), and parsing
//! a canonical file back yields an identical value.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{ProofLevel, TopologicalProof, TpClause};
use crate::ltl::Lasso;
use crate::pks::FormatError;
use crate::tri::Tri;

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        line,
        message: message.into(),
    }
}

/// Parses a stored proof.
pub fn parse_proof(text: &str) -> Result<TopologicalProof, FormatError> {
    let mut header: Option<(String, ProofLevel)> = None;
    let mut origin_ap: Option<Vec<String>> = None;
    let mut clauses: BTreeSet<TpClause> = BTreeSet::new();
    let mut seen_init = false;
    let mut seen_trans: BTreeSet<String> = BTreeSet::new();
    let mut seen_prop: BTreeSet<(String, String)> = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().expect("nonempty line");
        let rest: Vec<&str> = words.collect();
        if keyword != "proof" && header.is_none() {
            return Err(err(line_no, "content before proof line"));
        }
        match keyword {
            "proof" => {
                if header.is_some() {
                    return Err(err(line_no, "second proof line"));
                }
                let [name, level] = rest[..] else {
                    return Err(err(line_no, "expected: proof <name> level=<T|?>"));
                };
                let level = match level.strip_prefix("level=") {
                    Some("T") => ProofLevel::Definitive,
                    Some("?") => ProofLevel::Possible,
                    _ => return Err(err(line_no, "expected level=T or level=?")),
                };
                header = Some((name.to_string(), level));
            }
            "origin-ap" => {
                if origin_ap.is_some() {
                    return Err(err(line_no, "second origin-ap line"));
                }
                if rest.is_empty() {
                    return Err(err(line_no, "origin-ap needs at least one proposition"));
                }
                origin_ap = Some(rest.iter().map(|p| p.to_string()).collect());
            }
            "tpi" => {
                if seen_init {
                    return Err(err(line_no, "second tpi line"));
                }
                if rest.is_empty() {
                    return Err(err(line_no, "tpi needs at least one state"));
                }
                seen_init = true;
                clauses.insert(TpClause::Init(
                    rest.iter().map(|s| s.to_string()).collect(),
                ));
            }
            "tpt" => {
                if rest.len() < 2 || rest[1] != ":" {
                    return Err(err(line_no, "expected: tpt <state> : <successor> ..."));
                }
                let (state, succs) = (rest[0], &rest[2..]);
                if succs.is_empty() {
                    return Err(err(line_no, "tpt needs at least one successor"));
                }
                if !seen_trans.insert(state.to_string()) {
                    return Err(err(line_no, format!("second tpt line for {state:?}")));
                }
                clauses.insert(TpClause::Trans(
                    state.to_string(),
                    succs.iter().map(|s| s.to_string()).collect(),
                ));
            }
            "tpp" => {
                let [state, prop, value] = rest[..] else {
                    return Err(err(line_no, "expected: tpp <state> <prop> <T|?|F>"));
                };
                let value: Tri = value
                    .parse()
                    .map_err(|_| err(line_no, "label value must be T, ? or F"))?;
                if !seen_prop.insert((state.to_string(), prop.to_string())) {
                    return Err(err(
                        line_no,
                        format!("second tpp line for {state:?} {prop:?}"),
                    ));
                }
                clauses.insert(TpClause::Prop(state.to_string(), prop.to_string(), value));
            }
            other => {
                return Err(err(line_no, format!("unknown keyword {other:?}")));
            }
        }
    }

    let end = text.lines().count();
    let (property, level) = header.ok_or_else(|| err(end, "missing proof line"))?;
    let origin_ap = origin_ap.ok_or_else(|| err(end, "missing origin-ap line"))?;
    Ok(TopologicalProof {
        property,
        level,
        origin_ap,
        clauses: clauses.into_iter().collect(),
    })
}

/// Writes a proof in the format [`parse_proof`] reads.
pub fn serialize_proof(proof: &TopologicalProof) -> String {
    let mut out = String::new();
    writeln!(out, "proof {} level={}", proof.property, proof.level).unwrap();
    writeln!(out, "origin-ap {}", proof.origin_ap.join(" ")).unwrap();
    for clause in &proof.clauses {
        writeln!(out, "{clause}").unwrap();
    }
    out
}

/// Parses a counterexample, returning the property name and the path.
pub fn parse_counterexample(text: &str) -> Result<(String, Lasso<String>), FormatError> {
    let mut name: Option<String> = None;
    let mut prefix: Option<Vec<String>> = None;
    let mut cycle: Option<Vec<String>> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().expect("nonempty line");
        let rest: Vec<String> = words.map(|w| w.to_string()).collect();
        if keyword != "ce" && name.is_none() {
            return Err(err(line_no, "content before ce line"));
        }
        match keyword {
            "ce" => {
                if name.is_some() {
                    return Err(err(line_no, "second ce line"));
                }
                let [n] = &rest[..] else {
                    return Err(err(line_no, "expected: ce <name>"));
                };
                name = Some(n.clone());
            }
            "prefix" => {
                if prefix.is_some() {
                    return Err(err(line_no, "second prefix line"));
                }
                prefix = Some(rest);
            }
            "loop" => {
                if cycle.is_some() {
                    return Err(err(line_no, "second loop line"));
                }
                if rest.is_empty() {
                    return Err(err(line_no, "loop needs at least one state"));
                }
                cycle = Some(rest);
            }
            other => {
                return Err(err(line_no, format!("unknown keyword {other:?}")));
            }
        }
    }

    let end = text.lines().count();
    let name = name.ok_or_else(|| err(end, "missing ce line"))?;
    let cycle = cycle.ok_or_else(|| err(end, "missing loop line"))?;
    Ok((name, Lasso::new(prefix.unwrap_or_default(), cycle)))
}

/// Writes a counterexample in the format [`parse_counterexample`] reads.
pub fn serialize_counterexample(name: &str, lasso: &Lasso<String>) -> String {
    let mut out = String::new();
    writeln!(out, "ce {name}").unwrap();
    if !lasso.prefix.is_empty() {
        writeln!(out, "prefix {}", lasso.prefix.join(" ")).unwrap();
    }
    writeln!(out, "loop {}", lasso.cycle.join(" ")).unwrap();
    out
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}
